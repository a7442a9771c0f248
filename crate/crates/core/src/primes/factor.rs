//! Integer factorization with an explicit completeness flag.
//!
//! Pipeline: trial division up to the budget's bound, perfect-power
//! extraction, then Brent's variant of Pollard rho with an iteration cap.
//! Pieces that survive the cap are multiplied into the cofactor and the
//! factorization is marked uncertified.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::primality::{is_prime, is_prime_u64, mul_mod};
use super::sieve_primes;
use crate::error::{Error, Result};
use crate::serde_big;

pub const DEFAULT_TRIAL_BOUND: u64 = 100_000;
pub const DEFAULT_RHO_ITERATIONS: u64 = 1_000_000;
/// Default seed for every randomized step (rho starting points, root splitting).
pub const DEFAULT_SEED: u64 = 0x5EED_0E15_E57E_1A00;

/// Resource limits for [`factorize`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorBudget {
    /// Primes up to this bound are removed by trial division.
    pub trial_bound: u64,
    pub perfect_powers: bool,
    /// Cap on rho iterations spent on any single composite piece.
    pub rho_iterations: u64,
    pub seed: u64,
}

impl Default for FactorBudget {
    fn default() -> Self {
        FactorBudget {
            trial_bound: DEFAULT_TRIAL_BOUND,
            perfect_powers: true,
            rho_iterations: DEFAULT_RHO_ITERATIONS,
            seed: DEFAULT_SEED,
        }
    }
}

impl FactorBudget {
    /// Same budget with ten times the rho allowance.
    pub fn escalated(&self) -> Self {
        FactorBudget {
            rho_iterations: self.rho_iterations.saturating_mul(10),
            ..*self
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimePower {
    #[serde(with = "serde_big::uint")]
    pub prime: BigUint,
    pub exponent: u32,
}

/// Factorization of `|N|`: `prod prime^exponent * cofactor = |N|`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factorization {
    pub factors: Vec<PrimePower>,
    /// Unsplit composite part; 1 when the factorization is complete.
    #[serde(with = "serde_big::uint")]
    pub cofactor: BigUint,
    pub certified: bool,
}

impl Factorization {
    pub fn product(&self) -> BigUint {
        self.factors
            .iter()
            .fold(self.cofactor.clone(), |acc, pp| {
                acc * num_traits::Pow::pow(&pp.prime, pp.exponent)
            })
    }

    pub fn exponent_of(&self, p: &BigUint) -> u32 {
        self.factors
            .iter()
            .find(|pp| &pp.prime == p)
            .map_or(0, |pp| pp.exponent)
    }

    pub fn primes(&self) -> impl Iterator<Item = &BigUint> {
        self.factors.iter().map(|pp| &pp.prime)
    }
}

fn default_trial_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| sieve_primes(DEFAULT_TRIAL_BOUND))
}

/// Primes up to `bound`, borrowed from the cached default table when possible.
pub(crate) fn trial_primes(bound: u64) -> std::borrow::Cow<'static, [u64]> {
    let cached = default_trial_primes();
    if bound <= DEFAULT_TRIAL_BOUND {
        let end = cached.partition_point(|&p| p <= bound);
        std::borrow::Cow::Borrowed(&cached[..end])
    } else {
        std::borrow::Cow::Owned(sieve_primes(bound))
    }
}

/// Strips all prime factors `<= bound` from `n`, recording them in `found`.
pub(crate) fn trial_divide(n: &mut BigUint, bound: u64, found: &mut BTreeMap<BigUint, u32>) {
    let primes = trial_primes(bound);
    let mut i = 0;
    while i < primes.len() {
        if n.is_one() {
            return;
        }
        if let Some(small) = n.to_u64() {
            let mut m = small;
            for &p in &primes[i..] {
                if p.saturating_mul(p) > m {
                    break;
                }
                if m % p == 0 {
                    let mut e = 0;
                    while m % p == 0 {
                        m /= p;
                        e += 1;
                    }
                    *found.entry(BigUint::from(p)).or_default() += e;
                }
            }
            if m > 1 && m <= bound {
                *found.entry(BigUint::from(m)).or_default() += 1;
                m = 1;
            }
            *n = BigUint::from(m);
            return;
        }
        // Batch primes into a single u64 modulus to cut big-number divisions.
        let mut modulus: u64 = 1;
        let mut j = i;
        while j < primes.len() && modulus.checked_mul(primes[j]).is_some_and(|m| m < 1 << 62) {
            modulus *= primes[j];
            j += 1;
        }
        let r = (&*n % modulus).to_u64().expect("remainder fits");
        for &p in &primes[i..j] {
            if r.is_multiple_of(p) {
                let mut e = 0;
                loop {
                    let (q, rem) = n.div_rem(&BigUint::from(p));
                    if !rem.is_zero() {
                        break;
                    }
                    *n = q;
                    e += 1;
                }
                *found.entry(BigUint::from(p)).or_default() += e;
            }
        }
        i = j;
    }
}

/// Writes `n = root^k` with `k` maximal.
pub fn perfect_power(n: &BigUint) -> (BigUint, u32) {
    let mut root = n.clone();
    let mut k = 1u32;
    if n <= &BigUint::one() {
        return (root, k);
    }
    'outer: loop {
        let bits = root.bits() as u32;
        for e in (2..=bits).filter(|&e| is_prime_u64(e as u64)) {
            let r = root.nth_root(e);
            if r > BigUint::one() && num_traits::Pow::pow(&r, e) == root {
                root = r;
                k *= e;
                continue 'outer;
            }
        }
        return (root, k);
    }
}

/// Brent–Pollard rho on a 64-bit odd composite.
fn rho_u64(n: u64, rng: &mut ChaCha8Rng, cap: u64) -> Option<u64> {
    if n.is_multiple_of(2) {
        return Some(2);
    }
    const BATCH: u64 = 128;
    let mut spent = 0u64;
    while spent < cap {
        let c = rng.gen_range(1..n);
        let f = |x: u64| ((mul_mod(x, x, n) as u128 + c as u128) % n as u128) as u64;
        let mut y = rng.gen_range(0..n);
        let (mut x, mut ys) = (y, y);
        let (mut r, mut q, mut g) = (1u64, 1u64, 1u64);
        while g == 1 && spent < cap {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            spent += r;
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                let steps = BATCH.min(r - k);
                for _ in 0..steps {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                spent += steps;
                g = q.gcd(&n);
                k += steps;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = x.abs_diff(ys).gcd(&n);
                if g > 1 {
                    break;
                }
            }
        }
        if g > 1 && g < n {
            return Some(g);
        }
    }
    None
}

/// Brent–Pollard rho on an arbitrary composite.
fn rho_big(n: &BigUint, rng: &mut ChaCha8Rng, cap: u64) -> Option<BigUint> {
    if n.is_even() {
        return Some(BigUint::from(2u32));
    }
    if let Some(small) = n.to_u64() {
        return rho_u64(small, rng, cap).map(BigUint::from);
    }
    const BATCH: u64 = 128;
    let one = BigUint::one();
    let n_bytes = n.to_bytes_le();
    let random_below = |rng: &mut ChaCha8Rng| {
        let mut bytes = vec![0u8; n_bytes.len() + 8];
        rng.fill(&mut bytes[..]);
        BigUint::from_bytes_le(&bytes) % n
    };
    let mut spent = 0u64;
    while spent < cap {
        let c = random_below(rng);
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut y = random_below(rng);
        let (mut x, mut ys) = (y.clone(), y.clone());
        let (mut r, mut q, mut g) = (1u64, one.clone(), one.clone());
        let diff = |a: &BigUint, b: &BigUint| if a > b { a - b } else { b - a };
        while g.is_one() && spent < cap {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            spent += r;
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                let steps = BATCH.min(r - k);
                for _ in 0..steps {
                    y = f(&y);
                    q = q * diff(&x, &y) % n;
                }
                spent += steps;
                g = q.gcd(n);
                k += steps;
            }
            r *= 2;
        }
        if &g == n {
            loop {
                ys = f(&ys);
                g = diff(&x, &ys).gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if !g.is_one() && &g != n {
            return Some(g);
        }
    }
    None
}

/// Splits a cofactor with no prime factors `<= trial_bound` as far as the
/// budget allows. Returns the unsplit composite part.
pub(crate) fn split_cofactor(
    m: BigUint,
    budget: &FactorBudget,
    found: &mut BTreeMap<BigUint, u32>,
) -> BigUint {
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    let mut cofactor = BigUint::one();
    let mut stack = vec![(m, 1u32)];
    while let Some((m, mult)) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if is_prime(&m) {
            *found.entry(m).or_default() += mult;
            continue;
        }
        if budget.perfect_powers {
            let (root, k) = perfect_power(&m);
            if k > 1 {
                stack.push((root, mult * k));
                continue;
            }
        }
        match rho_big(&m, &mut rng, budget.rho_iterations) {
            Some(d) => {
                let other = &m / &d;
                stack.push((d, mult));
                stack.push((other, mult));
            }
            None => cofactor *= num_traits::Pow::pow(&m, mult),
        }
    }
    cofactor
}

fn assemble(found: BTreeMap<BigUint, u32>, cofactor: BigUint) -> Factorization {
    let certified = cofactor.is_one();
    Factorization {
        factors: found
            .into_iter()
            .map(|(prime, exponent)| PrimePower { prime, exponent })
            .collect(),
        cofactor,
        certified,
    }
}

/// Factors `|n|` within `budget`.
pub fn factorize(n: &BigInt, budget: &FactorBudget) -> Result<Factorization> {
    if n.is_zero() {
        return Err(Error::ZeroArgument("factorize"));
    }
    Ok(factorize_unsigned(n.magnitude().clone(), budget))
}

pub fn factorize_unsigned(mut n: BigUint, budget: &FactorBudget) -> Factorization {
    let mut found = BTreeMap::new();
    trial_divide(&mut n, budget.trial_bound, &mut found);
    let cofactor = split_cofactor(n, budget, &mut found);
    assemble(found, cofactor)
}
