//! Density constants over truncated prime products and sums.
//!
//! For a degree `n` and a list of primes,
//!
//! * `P_n = sum (p-1)^2 / p^(n+2)`
//! * `rho_n = 1 - prod (1 - (p-1)^2 / p^(n+2))`
//! * `tau_n = P_n^2 - sum (p-1)^4 / p^(2n+4)`
//! * `gamma_n = (1 - tau_n / rho_n) / 2^(n^2+n)`
//!
//! Values are carried as binary fixed-point numbers with 512 fraction bits,
//! so `gamma_n` keeps at least 90 significant bits for every supported degree.
//! Prime lists must be an initial segment of the primes so that the
//! reported tail bounds are valid.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::primes::{first_primes, is_prime_u64};

/// Number of primes used for the reference table.
pub const DEFAULT_PRIME_COUNT: usize = 10_000;

/// Fraction bits of [`Real`].
pub const FRACTION_BITS: u32 = 512;

/// Largest degree accepted by the density functions.
pub const MAX_DEGREE: usize = 20;

/// Significant digits written when a [`Real`] is serialized.
pub const SERIAL_DIGITS: usize = 40;

/// Signed binary fixed-point number with [`FRACTION_BITS`] fraction bits.
///
/// Arithmetic rounds to nearest after every operation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Real {
    raw: BigInt,
}

fn div_round(num: BigInt, den: &BigInt) -> BigInt {
    let (num, den) = if den.is_negative() {
        (-num, -den)
    } else {
        (num, den.clone())
    };
    let twice: BigInt = num * 2u32 + &den;
    twice.div_floor(&(den * 2u32))
}

impl Real {
    pub fn zero() -> Self {
        Real { raw: BigInt::zero() }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(v: i64) -> Self {
        Real {
            raw: BigInt::from(v) << FRACTION_BITS,
        }
    }

    /// `num / den`, rounded to nearest.
    pub fn from_ratio(num: &BigInt, den: &BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroArgument("Real::from_ratio"));
        }
        Ok(Real {
            raw: div_round(num << FRACTION_BITS, den),
        })
    }

    /// `2^-k`.
    pub fn pow2_neg(k: u32) -> Self {
        let raw = if k <= FRACTION_BITS {
            BigInt::one() << (FRACTION_BITS - k)
        } else {
            BigInt::zero()
        };
        Real { raw }
    }

    pub fn is_zero(&self) -> bool {
        self.raw.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.raw.is_positive()
    }

    pub fn add(&self, other: &Real) -> Real {
        Real {
            raw: &self.raw + &other.raw,
        }
    }

    pub fn sub(&self, other: &Real) -> Real {
        Real {
            raw: &self.raw - &other.raw,
        }
    }

    pub fn mul(&self, other: &Real) -> Real {
        Real {
            raw: div_round(&self.raw * &other.raw, &(BigInt::one() << FRACTION_BITS)),
        }
    }

    pub fn div(&self, other: &Real) -> Result<Real> {
        if other.is_zero() {
            return Err(Error::ZeroArgument("Real::div"));
        }
        Ok(Real {
            raw: div_round(&self.raw << FRACTION_BITS, &other.raw),
        })
    }

    pub fn mul_int(&self, k: &BigInt) -> Real {
        Real { raw: &self.raw * k }
    }

    /// Hyperbolic sine by its Taylor series; intended for `|x| <= 2`.
    pub fn sinh(&self) -> Real {
        let x2 = self.mul(self);
        let mut term = self.clone();
        let mut acc = self.clone();
        let mut k = 1i64;
        loop {
            term = Real {
                raw: div_round(term.mul(&x2).raw, &BigInt::from((2 * k) * (2 * k + 1))),
            };
            if term.is_zero() {
                return acc;
            }
            acc = acc.add(&term);
            k += 1;
        }
    }

    pub fn to_f64(&self) -> f64 {
        // Shift so the mantissa fits comfortably before scaling.
        let bits = self.raw.bits();
        if bits <= 1000 {
            return self.raw.to_f64().unwrap_or(0.0) * (-(FRACTION_BITS as f64)).exp2();
        }
        let shift = bits - 64;
        (&self.raw >> shift).to_f64().unwrap_or(0.0) * ((shift as f64) - FRACTION_BITS as f64).exp2()
    }

    /// Scientific notation with `digits` significant digits, e.g. `1.329e-2`.
    pub fn to_sci(&self, digits: usize) -> String {
        let digits = digits.max(1);
        if self.is_zero() {
            return format!("0.{}e0", "0".repeat(digits - 1)).replace(".e", "e");
        }
        let sign = if self.raw.is_negative() { "-" } else { "" };
        let mag = self.raw.abs();
        let scale = BigInt::one() << FRACTION_BITS;
        let mut exp = self.to_f64().abs().log10().floor() as i64;
        let ten = BigInt::from(10);
        let lower = num_traits::pow(ten.clone(), digits - 1);
        let upper = &lower * 10;
        let mantissa = loop {
            let k = digits as i64 - 1 - exp;
            let (num, den) = if k >= 0 {
                (&mag * num_traits::pow(ten.clone(), k as usize), scale.clone())
            } else {
                (mag.clone(), &scale * num_traits::pow(ten.clone(), (-k) as usize))
            };
            let m = div_round(num, &den);
            if m >= upper {
                exp += 1;
            } else if m < lower {
                exp -= 1;
            } else {
                break m;
            }
        };
        let s = mantissa.to_string();
        let (head, tail) = s.split_at(1);
        if tail.is_empty() {
            format!("{sign}{head}e{exp}")
        } else {
            format!("{sign}{head}.{tail}e{exp}")
        }
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(SERIAL_DIGITS);
        f.write_str(&self.to_sci(digits))
    }
}

impl FromStr for Real {
    type Err = Error;

    /// Parses plain or scientific decimal notation.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("not a decimal number: {s:?}"));
        let s = s.trim();
        let (body, exp) = match s.find(['e', 'E']) {
            Some(i) => (&s[..i], s[i + 1..].parse::<i64>().map_err(|_| bad())?),
            None => (s, 0),
        };
        let (neg, body) = match body.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, body.strip_prefix('+').unwrap_or(body)),
        };
        let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
        if int_part.is_empty() && frac_part.is_empty()
            || !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit())
        {
            return Err(bad());
        }
        let mut mantissa: BigInt = format!("0{int_part}{frac_part}").parse().map_err(|_| bad())?;
        if neg {
            mantissa = -mantissa;
        }
        let exp10 = exp - frac_part.len() as i64;
        if exp10.abs() > 4096 {
            return Err(bad());
        }
        let ten = BigInt::from(10);
        if exp10 >= 0 {
            Real::from_ratio(&(mantissa * num_traits::pow(ten, exp10 as usize)), &BigInt::one())
        } else {
            Real::from_ratio(&mantissa, &num_traits::pow(ten, (-exp10) as usize))
        }
    }
}

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_sci(SERIAL_DIGITS))
    }
}

impl<'de> Deserialize<'de> for Real {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// All density constants for one degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensityReport {
    pub n: usize,
    pub prime_limit_count: usize,
    pub rho: Real,
    pub tau: Real,
    pub gamma: Real,
    pub p_n: Real,
    /// Upper bound on `P_n` minus the partial sum.
    pub tail_bound: Real,
}

fn check_degree(n: usize) -> Result<()> {
    if !(2..=MAX_DEGREE).contains(&n) {
        return Err(Error::InvalidArgument(format!(
            "degree must lie in 2..={MAX_DEGREE}, got {n}"
        )));
    }
    Ok(())
}

/// Rejects lists that are not exactly the first `k` primes.
fn check_primes(primes: &[u64]) -> Result<()> {
    if primes.is_empty() {
        return Err(Error::EmptyPrimeList);
    }
    let mut expected = 2u64;
    for &p in primes {
        if p != expected {
            return Err(Error::InvalidArgument(format!(
                "prime list must be an initial segment of the primes; expected {expected}, found {p}"
            )));
        }
        expected = p + 1;
        while !is_prime_u64(expected) {
            expected += 1;
        }
    }
    Ok(())
}

/// `(p-1)^2 / p^(n+2)`.
fn local_term(n: usize, p: u64) -> Real {
    let pb = BigInt::from(p);
    let num = BigInt::from(p - 1).pow(2);
    Real::from_ratio(&num, &pb.pow(n as u32 + 2)).expect("p > 0")
}

fn largest(primes: &[u64]) -> BigInt {
    BigInt::from(*primes.last().expect("nonempty"))
}

/// Partial sum `P_n` and the bound `B^(1-n)/(n-1)` on its tail, `B` the last prime.
pub fn compute_p_n(n: usize, primes: &[u64]) -> Result<(Real, Real)> {
    check_degree(n)?;
    check_primes(primes)?;
    let value = primes.iter().fold(Real::zero(), |acc, &p| acc.add(&local_term(n, p)));
    let b = largest(primes);
    let tail = Real::from_ratio(&BigInt::one(), &(b.pow(n as u32 - 1) * (n - 1)))?;
    Ok((value, tail))
}

pub fn compute_rho(n: usize, primes: &[u64]) -> Result<Real> {
    check_degree(n)?;
    check_primes(primes)?;
    let product = primes
        .iter()
        .fold(Real::one(), |acc, &p| acc.mul(&Real::one().sub(&local_term(n, p))));
    Ok(Real::one().sub(&product))
}

pub fn compute_tau(n: usize, primes: &[u64]) -> Result<Real> {
    let (p_n, _) = compute_p_n(n, primes)?;
    let squares = primes.iter().fold(Real::zero(), |acc, &p| {
        let t = local_term(n, p);
        acc.add(&t.mul(&t))
    });
    Ok(p_n.mul(&p_n).sub(&squares))
}

pub fn compute_gamma(n: usize, primes: &[u64]) -> Result<Real> {
    let rho = compute_rho(n, primes)?;
    let tau = compute_tau(n, primes)?;
    gamma_from(n, &rho, &tau)
}

fn gamma_from(n: usize, rho: &Real, tau: &Real) -> Result<Real> {
    let ratio = tau.div(rho)?;
    Ok(Real::one().sub(&ratio).mul(&Real::pow2_neg((n * n + n) as u32)))
}

pub fn density_report(n: usize, primes: &[u64]) -> Result<DensityReport> {
    let (p_n, tail_bound) = compute_p_n(n, primes)?;
    let rho = compute_rho(n, primes)?;
    let tau = compute_tau(n, primes)?;
    let gamma = gamma_from(n, &rho, &tau)?;
    Ok(DensityReport {
        n,
        prime_limit_count: primes.len(),
        rho,
        tau,
        gamma,
        p_n,
        tail_bound,
    })
}

/// The first [`DEFAULT_PRIME_COUNT`] primes.
pub fn default_primes() -> Vec<u64> {
    first_primes(DEFAULT_PRIME_COUNT)
}

/// Main term `rho_n 2^(n+1) H^(n+1)` for the number of Eisenstein polynomials of height `<= H`.
pub fn predicted_eisenstein_count(n: usize, height: u64, primes: &[u64]) -> Result<Real> {
    if height == 0 {
        return Err(Error::NonPositive {
            op: "predicted_eisenstein_count",
            got: height.to_string(),
        });
    }
    let rho = compute_rho(n, primes)?;
    let factor = (BigInt::from(2) * height).pow(n as u32 + 1);
    Ok(rho.mul_int(&factor))
}

/// Result of [`sinh_bound_check`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SinhCheck {
    /// `sum 1/p^2` over the given primes.
    pub partial_sum: Real,
    /// `1/B` with `B` the last prime, bounding the omitted terms.
    pub tail_bound: Real,
    /// `2 sinh(partial_sum + tail_bound)`.
    pub bound_value: Real,
}

impl SinhCheck {
    pub fn upper_sum(&self) -> Real {
        self.partial_sum.add(&self.tail_bound)
    }
}

pub fn sinh_bound_check(primes: &[u64]) -> Result<SinhCheck> {
    check_primes(primes)?;
    let partial_sum = primes.iter().fold(Real::zero(), |acc, &p| {
        acc.add(&Real::from_ratio(&BigInt::one(), &BigInt::from(p).pow(2)).expect("p > 0"))
    });
    let tail_bound = Real::from_ratio(&BigInt::one(), &largest(primes))?;
    let bound_value = partial_sum.add(&tail_bound).sinh().mul_int(&BigInt::from(2));
    Ok(SinhCheck {
        partial_sum,
        tail_bound,
        bound_value,
    })
}

/// Lower bound `P - P^2/(1+P^2) - P^2` on `rho_n - tau_n`.
pub fn rho_tau_lower_bound(p_n: &Real) -> Result<Real> {
    let p2 = p_n.mul(p_n);
    Ok(p_n.sub(&p2.div(&Real::one().add(&p2))?).sub(&p2))
}

/// Lower bound `P - P^2/(1-P^2) - P^2`, using the closed form of `sum_k P^(2k)`.
pub fn rho_tau_lower_bound_geometric(p_n: &Real) -> Result<Real> {
    let p2 = p_n.mul(p_n);
    Ok(p_n.sub(&p2.div(&Real::one().sub(&p2))?).sub(&p2))
}

impl PartialOrd<f64> for Real {
    fn partial_cmp(&self, other: &f64) -> Option<Ordering> {
        self.to_f64().partial_cmp(other)
    }
}

impl PartialEq<f64> for Real {
    fn eq(&self, other: &f64) -> bool {
        self.to_f64() == *other
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(s: &str) -> Real {
        s.parse().unwrap()
    }

    fn sig3(x: &Real) -> String {
        x.to_sci(3)
    }

    #[test]
    fn reference_table() {
        let primes = default_primes();
        assert_eq!(*primes.last().unwrap(), 104_729);
        for (n, want) in [(2, "1.33e-2"), (3, "2.36e-4"), (4, "9.44e-7"), (5, "9.28e-10"), (10, "7.70e-34")] {
            assert_eq!(sig3(&compute_gamma(n, &primes).unwrap()), want, "n = {n}");
        }
    }

    #[test]
    fn single_prime() {
        let (p, tail) = compute_p_n(2, &[2]).unwrap();
        assert_eq!(p, r("0.0625"));
        assert_eq!(tail, r("0.5"));
        assert_eq!(compute_rho(2, &[2]).unwrap(), r("0.0625"));
        assert!(compute_tau(2, &[2]).unwrap().is_zero());
        let check = sinh_bound_check(&[2]).unwrap();
        assert_eq!(check.partial_sum, r("0.25"));
        assert_eq!(check.upper_sum(), r("0.75"));
        assert!((check.bound_value.to_f64() - 2.0 * 0.75f64.sinh()).abs() < 1e-15);
    }

    #[test]
    fn small_primes_vanish_for_large_degree() {
        let (p, _) = compute_p_n(MAX_DEGREE, &[2, 3]).unwrap();
        assert!(p.to_f64() < 1.1 * 0.5f64.powi(MAX_DEGREE as i32 + 2));
    }

    #[test]
    fn domain_errors() {
        assert_eq!(compute_p_n(2, &[]), Err(Error::EmptyPrimeList));
        assert_eq!(sinh_bound_check(&[]), Err(Error::EmptyPrimeList));
        assert!(compute_rho(1, &[2]).is_err());
        assert!(compute_rho(MAX_DEGREE + 1, &[2]).is_err());
        assert!(compute_rho(2, &[2, 5]).is_err());
        assert!(compute_rho(2, &[3]).is_err());
        assert!(predicted_eisenstein_count(2, 0, &[2]).is_err());
    }

    #[test]
    fn constants() {
        let primes = default_primes();
        let (p2, tail) = compute_p_n(2, &primes).unwrap();
        assert!(p2.add(&tail) <= 0.18);
        let check = sinh_bound_check(&primes).unwrap();
        let sum = check.upper_sum();
        assert!(check.partial_sum > 0.45 && sum < 0.46, "{sum}");
        assert!(check.bound_value < 1.0, "{}", check.bound_value);
    }

    #[test]
    fn invariants_and_lower_bounds() {
        let primes = first_primes(2000);
        for n in 2..=MAX_DEGREE {
            let rep = density_report(n, &primes).unwrap();
            assert!(rep.rho.is_positive() && rep.rho < 1.0);
            assert!(!rep.tau.raw.is_negative());
            assert!(rep.gamma.is_positive());
            assert!(rep.tau < rep.p_n.mul(&rep.p_n));
            let diff = rep.rho.sub(&rep.tau);
            let weak = rho_tau_lower_bound(&rep.p_n).unwrap();
            let strong = rho_tau_lower_bound_geometric(&rep.p_n).unwrap();
            assert!(strong < weak);
            assert!(strong.is_positive());
            assert!(diff >= weak, "n = {n}");
        }
    }

    #[test]
    fn stable_when_prime_count_doubles() {
        let a = first_primes(10_000);
        let b = first_primes(20_000);
        for n in [2, 3, 4, 5, 10] {
            let ra = density_report(n, &a).unwrap();
            let rb = density_report(n, &b).unwrap();
            for (x, y) in [(&ra.rho, &rb.rho), (&ra.tau, &rb.tau), (&ra.gamma, &rb.gamma), (&ra.p_n, &rb.p_n)] {
                assert_eq!(sig3(x), sig3(y), "n = {n}");
            }
            assert!(rb.p_n >= ra.p_n);
            assert!(rb.tail_bound < ra.tail_bound);
            // the tail bound really covers the extra primes
            assert!(rb.p_n <= ra.p_n.add(&ra.tail_bound));
        }
    }

    #[test]
    fn prediction_scales() {
        let primes = first_primes(100);
        let a = predicted_eisenstein_count(3, 10, &primes).unwrap();
        let b = predicted_eisenstein_count(3, 20, &primes).unwrap();
        assert_eq!(a.mul_int(&BigInt::from(16)), b);
        assert!(a.is_positive());
    }

    #[test]
    fn sinh_matches_f64() {
        for x in ["0", "0.1", "0.46", "1", "-0.3", "2"] {
            let v = r(x);
            assert!((v.sinh().to_f64() - v.to_f64().sinh()).abs() < 1e-14, "{x}");
        }
    }

    #[test]
    fn formatting() {
        assert_eq!(r("0.0625").to_sci(3), "6.25e-2");
        assert_eq!(r("-1234.5").to_sci(2), "-1.2e3");
        assert_eq!(r("9.999").to_sci(3), "1.00e1");
        assert_eq!(r("5").to_sci(1), "5e0");
        assert_eq!(Real::zero().to_sci(3), "0.00e0");
        assert!("abc".parse::<Real>().is_err());
        assert!("1.2.3".parse::<Real>().is_err());
        assert!("".parse::<Real>().is_err());
    }

    #[test]
    fn serde_round_trip() {
        let rep = density_report(3, &first_primes(50)).unwrap();
        let json = serde_json::to_string(&rep).unwrap();
        let back: DensityReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back.n, 3);
        assert_eq!(back.gamma.to_sci(SERIAL_DIGITS), rep.gamma.to_sci(SERIAL_DIGITS));
        let tol = Real::pow2_neg(120);
        assert!(back.rho.sub(&rep.rho).raw.abs() < tol.raw);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn arithmetic_matches_rationals(a in -10_000i64..10_000, b in 1i64..10_000, c in -10_000i64..10_000, d in 1i64..10_000) {
            let x = Real::from_ratio(&a.into(), &b.into()).unwrap();
            let y = Real::from_ratio(&c.into(), &d.into()).unwrap();
            let exact = |num: i128, den: i128| Real::from_ratio(&num.into(), &den.into()).unwrap();
            let slack = BigInt::from(2 * (a.abs() + c.abs()) + 4);
            let close = |u: &Real, v: &Real| (&u.raw - &v.raw).abs() <= slack;
            prop_assert!(close(&x.add(&y), &exact(a as i128 * d as i128 + c as i128 * b as i128, b as i128 * d as i128)));
            prop_assert!(close(&x.mul(&y), &exact(a as i128 * c as i128, b as i128 * d as i128)));
            if c != 0 {
                let q = x.div(&y).unwrap();
                let want = exact(a as i128 * d as i128, b as i128 * c as i128);
                prop_assert!((&q.raw - &want.raw).abs() <= BigInt::from(1u64 << 32));
            }
        }

        #[test]
        fn text_round_trip(a in -1_000_000i64..1_000_000, b in 1i64..1_000_000) {
            let x = Real::from_ratio(&a.into(), &b.into()).unwrap();
            let back: Real = x.to_sci(SERIAL_DIGITS).parse().unwrap();
            let rel = back.sub(&x).to_f64().abs() / x.to_f64().abs().max(1e-300);
            prop_assert!(x.is_zero() && back.is_zero() || rel < 1e-38);
        }
    }
}
