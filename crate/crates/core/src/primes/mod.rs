//! Primes, factorization, arithmetic functions and roots modulo a prime.

mod factor;
mod modp;
mod primality;

use num_bigint::{BigInt, BigUint};
use num_traits::{Pow, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::serde_big;

pub use factor::{
    factorize, factorize_unsigned, perfect_power, FactorBudget, Factorization, PrimePower,
    DEFAULT_RHO_ITERATIONS, DEFAULT_SEED, DEFAULT_TRIAL_BOUND,
};
pub use modp::{roots_mod_p, roots_mod_p_seeded, EXHAUSTIVE_ROOT_LIMIT};
pub use primality::{is_prime, is_prime_u64};

/// All primes `<= limit` (sieve of Eratosthenes over odd numbers).
pub fn sieve_primes(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let half = ((limit - 1) / 2) as usize; // index i stands for 2i + 1
    let mut composite = vec![false; half + 1];
    let mut i = 1;
    while (2 * i + 1) * (2 * i + 1) <= limit as usize {
        if !composite[i] {
            let p = 2 * i + 1;
            let mut j = (p * p - 1) / 2;
            while j <= half {
                composite[j] = true;
                j += p;
            }
        }
        i += 1;
    }
    std::iter::once(2)
        .chain((1..=half).filter(|&i| !composite[i]).map(|i| 2 * i as u64 + 1))
        .collect()
}

/// The first `count` primes.
pub fn first_primes(count: usize) -> Vec<u64> {
    if count == 0 {
        return Vec::new();
    }
    // p_k < k (ln k + ln ln k) for k >= 6
    let k = count.max(6) as f64;
    let limit = (k * (k.ln() + k.ln().ln())).ceil() as u64 + 10;
    let mut primes = sieve_primes(limit);
    primes.truncate(count);
    primes
}

fn small_factorization(d: i64, op: &'static str) -> Result<Vec<(u64, u32)>> {
    if d < 1 {
        return Err(Error::NonPositive {
            op,
            got: d.to_string(),
        });
    }
    let mut m = d as u64;
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= m {
        if m.is_multiple_of(p) {
            let mut e = 0;
            while m.is_multiple_of(p) {
                m /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        out.push((m, 1));
    }
    Ok(out)
}

/// Euler's totient.
pub fn euler_phi(d: i64) -> Result<u64> {
    Ok(small_factorization(d, "euler_phi")?
        .iter()
        .map(|&(p, e)| (p - 1) * p.pow(e - 1))
        .product())
}

/// Number of distinct prime factors; `omega(1) = 0`.
pub fn omega(d: i64) -> Result<u32> {
    Ok(small_factorization(d, "omega")?.len() as u32)
}

/// Möbius function.
pub fn mobius(d: i64) -> Result<i32> {
    let f = small_factorization(d, "mobius")?;
    if f.iter().any(|&(_, e)| e > 1) {
        Ok(0)
    } else if f.len() % 2 == 0 {
        Ok(1)
    } else {
        Ok(-1)
    }
}

/// Primes `p` with `p^(n-1) | D`, plus whether the list is known complete.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NearlyFullDivisors {
    #[serde(with = "serde_big::uint_vec")]
    pub primes: Vec<BigUint>,
    pub certified: bool,
    /// Composite part of `|D|` left unsplit by the budget (1 when fully factored).
    #[serde(with = "serde_big::uint")]
    pub cofactor: BigUint,
}

/// Primes whose `(n-1)`-th power divides `d`.
///
/// For `n >= 3` any such prime is at most `|C|^(1/(n-1))` where `C` is the
/// unsplit cofactor, so the answer is certified once that root falls
/// inside the trial-division range, even if the cofactor stays composite.
/// For `n = 2` every prime divisor qualifies and certification needs the
/// full factorization.
pub fn nearly_full_prime_divisors(
    d: &BigInt,
    n: usize,
    budget: &FactorBudget,
) -> Result<NearlyFullDivisors> {
    if d.is_zero() {
        return Err(Error::ZeroArgument("nearly_full_prime_divisors"));
    }
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "nearly_full_prime_divisors needs n >= 2, got {n}"
        )));
    }
    let k = (n - 1) as u32;
    let fact = factorize(d, budget)?;
    let primes = fact
        .factors
        .iter()
        .filter(|pp| pp.exponent >= k)
        .map(|pp| pp.prime.clone())
        .collect();
    let certified = fact.certified
        || (n >= 3 && fact.cofactor.nth_root(k) <= BigUint::from(budget.trial_bound));
    Ok(NearlyFullDivisors {
        primes,
        certified,
        cofactor: fact.cofactor,
    })
}

/// `p^k | n`
pub(crate) fn prime_power_divides(p: &BigUint, k: u32, n: &BigUint) -> bool {
    (n % Pow::pow(p, k)).is_zero()
}
