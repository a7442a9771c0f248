//! Dense univariate polynomials over the integers.
//!
//! Coefficients are stored in ascending order: index `i` holds the
//! coefficient of `x^i`. The zero polynomial is the single coefficient `0`.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Serialized as the list of ascending coefficients in decimal strings.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    /// Builds a polynomial from ascending coefficients, trimming high zeros.
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(BigInt::zero());
        }
        IntPoly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly {
            coeffs: vec![BigInt::zero()],
        }
    }

    /// `x^n + x + c`
    pub fn trinomial(n: usize, c: i64) -> Self {
        let mut coeffs = vec![BigInt::zero(); n + 1];
        coeffs[0] += c;
        coeffs[1] += 1;
        coeffs[n] += 1;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &BigInt {
        &self.coeffs[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_zero()
    }

    /// Degree of a nonzero polynomial. The zero polynomial reports 0; callers
    /// that care check [`IntPoly::is_zero`] first.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> &BigInt {
        self.coeffs.last().expect("nonempty")
    }

    pub fn constant(&self) -> &BigInt {
        &self.coeffs[0]
    }

    pub(crate) fn require_degree(&self, op: &'static str, min: usize) -> Result<usize> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial(op));
        }
        let n = self.degree();
        if n < min {
            return Err(Error::DegreeTooLow { op, min, got: n });
        }
        Ok(n)
    }

    /// `H(f) = max |a_i|`.
    pub fn height(&self) -> Result<BigUint> {
        self.require_degree("height", 0)?;
        Ok(self
            .coeffs
            .iter()
            .map(|c| c.magnitude().clone())
            .max()
            .expect("nonempty"))
    }

    /// `L(f) = sum |a_i|`.
    pub fn length(&self) -> Result<BigUint> {
        self.require_degree("length", 0)?;
        Ok(self.coeffs.iter().map(|c| c.magnitude()).sum())
    }

    /// Horner evaluation at an integer point.
    pub fn evaluate(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    /// Coefficients of `f(x + s)`.
    ///
    /// Repeated synthetic division by `x - s`: after pass `i` the entries at
    /// index `>= i` hold the partially shifted coefficients. O(n^2) additions
    /// and multiplications by `s`, no binomial table.
    pub fn taylor_shift(&self, s: &BigInt) -> IntPoly {
        let mut c = self.coeffs.clone();
        if s.is_zero() {
            return IntPoly { coeffs: c };
        }
        let n = c.len() - 1;
        for i in 0..n {
            for j in (i..n).rev() {
                let t = &c[j + 1] * s;
                c[j] += t;
            }
        }
        IntPoly { coeffs: c }
    }

    /// Shift by one, the common case in the density arguments.
    pub fn shift_by_one(&self) -> IntPoly {
        let mut c = self.coeffs.clone();
        let n = c.len() - 1;
        for i in 0..n {
            for j in (i..n).rev() {
                let t = c[j + 1].clone();
                c[j] += t;
            }
        }
        IntPoly { coeffs: c }
    }

    pub fn derivative(&self) -> Result<IntPoly> {
        self.require_degree("derivative", 1)?;
        Ok(IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        ))
    }

    /// Human-readable form, e.g. `x^2 + 4*x + 5`.
    pub fn pretty(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.magnitude();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let unit = mag.is_one();
            match i {
                0 => out.push_str(&mag.to_string()),
                _ => {
                    if !unit {
                        out.push_str(&mag.to_string());
                        out.push('*');
                    }
                    out.push('x');
                    if i > 1 {
                        out.push('^');
                        out.push_str(&i.to_string());
                    }
                }
            }
        }
        out
    }
}

/// Comma-separated ascending coefficients, e.g. `5,4,1` for `x^2 + 4x + 5`.
impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for IntPoly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.trim().is_empty() {
            return Err(Error::Parse("empty coefficient list".into()));
        }
        let coeffs = s
            .split(',')
            .enumerate()
            .map(|(i, tok)| {
                let tok = tok.trim();
                let digits = tok.strip_prefix('-').unwrap_or(tok);
                if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(Error::Parse(format!(
                        "coefficient {i} is not an integer: {tok:?}"
                    )));
                }
                tok.parse::<BigInt>()
                    .map_err(|e| Error::Parse(format!("coefficient {i}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(IntPoly::new(coeffs))
    }
}

impl TryFrom<Vec<String>> for IntPoly {
    type Error = Error;

    fn try_from(coeffs: Vec<String>) -> Result<Self> {
        coeffs.join(",").parse()
    }
}

impl From<IntPoly> for Vec<String> {
    fn from(p: IntPoly) -> Self {
        p.coeffs.iter().map(ToString::to_string).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn height_examples() {
        assert_eq!(p(&[5, 4, 1]).height().unwrap(), BigUint::from(5u32));
        assert_eq!(p(&[0, 0, 0, 1]).height().unwrap(), BigUint::from(1u32));
        assert_eq!(p(&[3, -7]).height().unwrap(), BigUint::from(7u32));
        assert_eq!(
            IntPoly::zero().height(),
            Err(Error::ZeroPolynomial("height"))
        );
    }

    #[test]
    fn length_examples() {
        assert_eq!(p(&[5, 4, 1]).length().unwrap(), BigUint::from(10u32));
        assert_eq!(p(&[0, 0, 0, 0, 1]).length().unwrap(), BigUint::from(1u32));
        assert_eq!(p(&[-1, 3, -2]).length().unwrap(), BigUint::from(6u32));
        assert!(IntPoly::zero().length().is_err());
    }

    #[test]
    fn evaluate_examples() {
        assert_eq!(p(&[5, 4, 1]).evaluate(&big(-1)), big(2));
        assert_eq!(p(&[-9, 4, 1]).evaluate(&big(0)), big(-9));
        assert_eq!(p(&[2, 1, 0, 1]).evaluate(&big(1)), big(4));
    }

    #[test]
    fn taylor_shift_examples() {
        assert_eq!(p(&[5, 4, 1]).taylor_shift(&big(-1)), p(&[2, 2, 1]));
        assert_eq!(p(&[5, 4, 1]).taylor_shift(&big(0)), p(&[5, 4, 1]));
        assert_eq!(p(&[2, 1, 1]).taylor_shift(&big(3)), p(&[14, 7, 1]));
        assert_eq!(p(&[7]).taylor_shift(&big(3)), p(&[7]));
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(p(&[5, 4, 1]).derivative().unwrap(), p(&[4, 2]));
        assert_eq!(p(&[2, 1, 0, 1]).derivative().unwrap(), p(&[1, 0, 3]));
        assert_eq!(p(&[0, 5]).derivative().unwrap(), p(&[5]));
        assert!(matches!(
            p(&[3]).derivative(),
            Err(Error::DegreeTooLow { .. })
        ));
    }

    #[test]
    fn parse_and_display() {
        let f: IntPoly = "5, 4,1".parse().unwrap();
        assert_eq!(f, p(&[5, 4, 1]));
        assert_eq!(f.to_string(), "5,4,1");
        assert_eq!("-3,0,2".parse::<IntPoly>().unwrap(), p(&[-3, 0, 2]));
        assert_eq!("1,2,0,0".parse::<IntPoly>().unwrap().degree(), 1);
        for bad in ["abc", "", "1,,2", "1,2,", "+3", "1.5", "--1"] {
            assert!(bad.parse::<IntPoly>().is_err(), "{bad:?} parsed");
        }
        assert_eq!(p(&[5, 4, 1]).pretty(), "x^2 + 4*x + 5");
        assert_eq!(p(&[-1, 0, -3, 1]).pretty(), "x^3 - 3*x^2 - 1");
    }

    fn poly_strategy(max_deg: usize, bound: i64) -> impl Strategy<Value = IntPoly> {
        (1..=max_deg)
            .prop_flat_map(move |n| {
                (
                    prop::collection::vec(-bound..=bound, n),
                    (1..=bound).prop_union(-bound..=-1),
                )
            })
            .prop_map(|(mut low, lead)| {
                low.push(lead);
                IntPoly::from_i64s(&low)
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn shift_round_trip(f in poly_strategy(8, 1000), s in -500i64..500) {
            let s = BigInt::from(s);
            prop_assert_eq!(f.taylor_shift(&s).taylor_shift(&-&s), f);
        }

        #[test]
        fn shift_composes(f in poly_strategy(6, 100), s in -50i64..50, t in -50i64..50) {
            let (bs, bt) = (BigInt::from(s), BigInt::from(t));
            prop_assert_eq!(
                f.taylor_shift(&bs).taylor_shift(&bt),
                f.taylor_shift(&BigInt::from(s + t))
            );
        }

        #[test]
        fn shift_evaluates_consistently(f in poly_strategy(6, 100), s in -50i64..50, x in -50i64..50) {
            let g = f.taylor_shift(&BigInt::from(s));
            prop_assert_eq!(g.evaluate(&BigInt::from(x)), f.evaluate(&BigInt::from(x + s)));
            prop_assert_eq!(g.constant(), &f.evaluate(&BigInt::from(s)));
            prop_assert_eq!(g.leading(), f.leading());
            prop_assert_eq!(g.degree(), f.degree());
        }

        #[test]
        fn shift_by_one_height_bound(f in poly_strategy(10, 1_000_000)) {
            let g = f.shift_by_one();
            prop_assert_eq!(&g, &f.taylor_shift(&BigInt::one()));
            let bound = f.height().unwrap() << f.degree();
            prop_assert!(g.height().unwrap() <= bound);
        }

        #[test]
        fn display_parse_round_trip(f in poly_strategy(8, i64::MAX / 2)) {
            prop_assert_eq!(f.to_string().parse::<IntPoly>().unwrap(), f);
        }
    }
}
