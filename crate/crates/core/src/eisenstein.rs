//! Eisenstein tests, the shifted-Eisenstein decision procedure and its
//! certificates.
//!
//! `f(x + s)` is Eisenstein at `p` only if `p^(n-1)` divides `D(f)`, and the
//! shift class `s mod p` is a root of `f` modulo `p`. The decision therefore
//! enumerates primes with large powers in the discriminant and, for each, the
//! roots of `f` modulo that prime. Canonical certificates use `0 <= s < p`.

use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{discriminant, max_shift_bound};
use crate::error::{Error, Result};
use crate::poly::IntPoly;
use crate::primes::{
    factorize, factorize_unsigned, is_prime, nearly_full_prime_divisors, prime_power_divides,
    roots_mod_p_seeded, FactorBudget,
};
use crate::serde_big;

/// Default cap on the number of shifts tried by [`naive_shift_scan`].
pub const DEFAULT_SCAN_CAP: u64 = 1_000_000;

/// A prime with respect to which a polynomial is Eisenstein.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EisensteinWitness {
    #[serde(with = "serde_big::uint")]
    pub prime: BigUint,
}

/// `f(x + shift)` is Eisenstein with respect to `prime`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ShiftCertificate {
    #[serde(with = "serde_big::int")]
    pub shift: BigInt,
    #[serde(with = "serde_big::uint")]
    pub prime: BigUint,
}

impl ShiftCertificate {
    pub fn new(shift: impl Into<BigInt>, prime: impl Into<BigUint>) -> Self {
        ShiftCertificate {
            shift: shift.into(),
            prime: prime.into(),
        }
    }
}

impl fmt::Display for ShiftCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "shift={} prime={}", self.shift, self.prime)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NoReason {
    /// Repeated root: no shift of `f` is squarefree, let alone Eisenstein.
    DiscriminantZero,
    /// No prime `p` with `p^(n-1) | D(f)` and `p` not dividing the leading coefficient.
    NoQualifyingPrime,
    /// Candidate primes exist but none of their root shifts is Eisenstein.
    NoRootShiftWorks,
}

/// Details attached to a negative that rests on an incomplete factorization.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostics {
    /// Composite part left unsplit by the factoring budget.
    #[serde(with = "serde_big::uint")]
    pub uncertified_cofactor: BigUint,
    /// Candidate primes that were examined.
    #[serde(with = "serde_big::uint_vec")]
    pub candidates: Vec<BigUint>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum ShiftedDecision {
    Yes { certificate: ShiftCertificate },
    NoCertified { reason: NoReason },
    NoHeuristic { diagnostics: Diagnostics },
}

impl ShiftedDecision {
    pub fn is_yes(&self) -> bool {
        matches!(self, ShiftedDecision::Yes { .. })
    }

    pub fn certificate(&self) -> Option<&ShiftCertificate> {
        match self {
            ShiftedDecision::Yes { certificate } => Some(certificate),
            _ => None,
        }
    }

    /// False only for heuristic negatives.
    pub fn is_certified(&self) -> bool {
        !matches!(self, ShiftedDecision::NoHeuristic { .. })
    }
}

/// Where the decision procedure takes its candidate primes from.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PrimeSearch {
    /// Factor `D(f)` and keep primes with `p^(n-1) | D(f)`.
    FullDiscriminant,
    /// Factor only `gcd(D(f), R(f))` where `R` is [`shift_resultant`]; every
    /// prime that can carry a shift and does not divide `2n` divides it.
    /// Falls back to the full discriminant when `R(f) = 0`.
    #[default]
    ResultantFiltered,
}

fn check_conditions(coeffs: &[BigInt], p: &BigUint) -> bool {
    let n = coeffs.len() - 1;
    if n == 0 || p < &BigUint::from(2u32) {
        return false;
    }
    let pi = BigInt::from_biguint(Sign::Plus, p.clone());
    if (&coeffs[n] % &pi).is_zero() {
        return false;
    }
    if !coeffs[..n].iter().all(|c| (c % &pi).is_zero()) {
        return false;
    }
    !(&coeffs[0] % (&pi * &pi)).is_zero()
}

/// Conditions (i)–(iii) for a given prime. Does not check primality of `p`.
pub fn is_eisenstein_at(f: &IntPoly, p: &BigUint) -> bool {
    !f.is_zero() && check_conditions(f.coeffs(), p)
}

/// All primes with respect to which `f` is Eisenstein, ascending.
pub fn eisenstein_primes(f: &IntPoly) -> Result<Vec<BigUint>> {
    let n = f.require_degree("eisenstein_primes", 1)?;
    let a0 = f.constant();
    if a0.is_zero() {
        return Ok(vec![]);
    }
    let g = f.coeffs()[..n]
        .iter()
        .fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if g.is_one() {
        return Ok(vec![]);
    }
    // Must be complete: keep going until rho splits everything.
    let budget = FactorBudget {
        rho_iterations: u64::MAX,
        ..FactorBudget::default()
    };
    let fact = factorize(&g, &budget)?;
    debug_assert!(fact.certified);
    Ok(fact
        .factors
        .into_iter()
        .map(|pp| pp.prime)
        .filter(|p| is_eisenstein_at(f, p))
        .collect())
}

pub fn eisenstein_witnesses(f: &IntPoly) -> Result<Vec<EisensteinWitness>> {
    Ok(eisenstein_primes(f)?
        .into_iter()
        .map(|prime| EisensteinWitness { prime })
        .collect())
}

pub fn is_eisenstein(f: &IntPoly) -> Result<bool> {
    Ok(!eisenstein_primes(f)?.is_empty())
}

/// `R(f) = 2n a_n a_(n-2) - (n-1) a_(n-1)^2`.
///
/// If `f(x+s)` is Eisenstein at `p` with `p` not dividing `2n a_n`, then `p`
/// divides both `n a_n s + a_(n-1)` and the `x^(n-2)` coefficient of
/// `f(x+s)`; eliminating `s` between them leaves `p | R(f)`. For `n = 2`
/// this is `-D(f)`.
pub fn shift_resultant(f: &IntPoly) -> Result<BigInt> {
    let n = f.require_degree("shift_resultant", 2)?;
    let c = f.coeffs();
    let two_n = BigInt::from(2 * n);
    Ok(two_n * &c[n] * &c[n - 2] - BigInt::from(n - 1) * &c[n - 1] * &c[n - 1])
}

struct Candidates {
    primes: Vec<BigUint>,
    certified: bool,
    cofactor: BigUint,
}

fn candidates_from_discriminant(
    d: &BigInt,
    n: usize,
    budget: &FactorBudget,
) -> Result<Candidates> {
    let r = nearly_full_prime_divisors(d, n, budget)?;
    Ok(Candidates {
        primes: r.primes,
        certified: r.certified,
        cofactor: r.cofactor,
    })
}

fn candidates_filtered(
    f: &IntPoly,
    d: &BigInt,
    n: usize,
    budget: &FactorBudget,
) -> Result<Candidates> {
    let r = shift_resultant(f)?;
    if r.is_zero() {
        return candidates_from_discriminant(d, n, budget);
    }
    let abs_d = d.magnitude();
    let k = (n - 1) as u32;
    let g = abs_d.gcd(r.magnitude());
    let fact = factorize_unsigned(g, budget);
    let mut primes: Vec<BigUint> = fact.primes().cloned().collect();
    // the elimination divides by 2n, so its primes are checked directly
    let small = factorize_unsigned(BigUint::from(2 * n), &FactorBudget::default());
    primes.extend(small.primes().cloned());
    primes.sort();
    primes.dedup();
    primes.retain(|p| prime_power_divides(p, k, abs_d));
    Ok(Candidates {
        primes,
        certified: fact.certified,
        cofactor: fact.cofactor,
    })
}

/// Decides whether some integer shift of `f` is Eisenstein.
pub fn shifted_eisenstein(f: &IntPoly, budget: &FactorBudget) -> Result<ShiftedDecision> {
    shifted_eisenstein_with(f, budget, PrimeSearch::default())
}

pub fn shifted_eisenstein_with(
    f: &IntPoly,
    budget: &FactorBudget,
    search: PrimeSearch,
) -> Result<ShiftedDecision> {
    let n = f.require_degree("shifted_eisenstein", 2)?;
    if let Some(p) = eisenstein_primes(f)?.into_iter().next() {
        return Ok(ShiftedDecision::Yes {
            certificate: ShiftCertificate::new(0, p),
        });
    }
    let d = discriminant(f)?;
    if d.is_zero() {
        return Ok(ShiftedDecision::NoCertified {
            reason: NoReason::DiscriminantZero,
        });
    }
    let cands = match search {
        PrimeSearch::FullDiscriminant => candidates_from_discriminant(d.value(), n, budget)?,
        PrimeSearch::ResultantFiltered => candidates_filtered(f, d.value(), n, budget)?,
    };
    let lead = f.leading();
    let mut examined = Vec::new();
    for p in cands.primes {
        let pi = BigInt::from_biguint(Sign::Plus, p.clone());
        if (lead % &pi).is_zero() {
            continue;
        }
        for s in roots_mod_p_seeded(f, &p, budget.seed)? {
            let s = BigInt::from_biguint(Sign::Plus, s);
            if is_eisenstein_at(&f.taylor_shift(&s), &p) {
                return Ok(ShiftedDecision::Yes {
                    certificate: ShiftCertificate { shift: s, prime: p },
                });
            }
        }
        examined.push(p);
    }
    if cands.certified {
        let reason = if examined.is_empty() {
            NoReason::NoQualifyingPrime
        } else {
            NoReason::NoRootShiftWorks
        };
        Ok(ShiftedDecision::NoCertified { reason })
    } else {
        Ok(ShiftedDecision::NoHeuristic {
            diagnostics: Diagnostics {
                uncertified_cofactor: cands.cofactor,
                candidates: examined,
            },
        })
    }
}

/// Re-checks a certificate from scratch.
pub fn verify_certificate(f: &IntPoly, c: &ShiftCertificate) -> bool {
    let p = BigInt::from_biguint(Sign::Plus, c.prime.clone());
    if c.shift.is_negative() || c.shift >= p || !is_prime(&c.prime) {
        return false;
    }
    is_eisenstein_at(&f.taylor_shift(&c.shift), &c.prime)
}

/// Tries every shift `0..=max_shift_bound(f)`; a test oracle for small inputs.
pub fn naive_shift_scan(f: &IntPoly, cap: u64) -> Result<ShiftedDecision> {
    f.require_degree("naive_shift_scan", 2)?;
    let bound = max_shift_bound(f)?;
    let last = match bound.to_u64().filter(|&b| b <= cap) {
        Some(b) => b,
        None => {
            return Err(Error::ScanCapExceeded {
                bound: bound.to_string(),
                cap,
            })
        }
    };
    let mut g = f.clone();
    for s in 0..=last {
        if let Some(p) = eisenstein_primes(&g)?.into_iter().next() {
            return Ok(ShiftedDecision::Yes {
                certificate: ShiftCertificate::new(s, p),
            });
        }
        g = g.shift_by_one();
    }
    Ok(ShiftedDecision::NoCertified {
        reason: NoReason::NoRootShiftWorks,
    })
}

/// Checks that `f(x + s + k p)` is Eisenstein at `p`.
pub fn periodicity_check(f: &IntPoly, s: &BigInt, p: &BigUint, k: &BigInt) -> bool {
    let step = BigInt::from_biguint(Sign::Plus, p.clone()) * k;
    is_eisenstein_at(&f.taylor_shift(&(s + step)), p)
}

/// Polynomials in `F_n`: Eisenstein, and still Eisenstein after `x -> x + 1`.
pub fn is_in_f_set(f: &IntPoly) -> Result<bool> {
    Ok(is_eisenstein(f)? && is_eisenstein(&f.shift_by_one())?)
}
