//! Resultants, discriminants and the explicit size bounds built on them.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Pow, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::IntPoly;

/// Row-major square integer matrix.
pub type Matrix = Vec<Vec<BigInt>>;

/// Discriminant of an integer polynomial; unchanged by `x -> x + u`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Discriminant(#[serde(with = "crate::serde_big::int")] pub BigInt);

impl Discriminant {
    pub fn value(&self) -> &BigInt {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl fmt::Display for Discriminant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Sylvester matrix of `f` and `g`: `deg g` rows of shifted `f` coefficients
/// followed by `deg f` rows of shifted `g` coefficients, leading coefficient
/// first in each row.
pub fn sylvester_matrix(f: &IntPoly, g: &IntPoly) -> Result<Matrix> {
    if f.is_zero() || g.is_zero() {
        return Err(Error::ZeroPolynomial("sylvester_matrix"));
    }
    let (m, k) = (f.degree(), g.degree());
    if m == 0 && k == 0 {
        return Err(Error::DegreeTooLow {
            op: "sylvester_matrix",
            min: 1,
            got: 0,
        });
    }
    let size = m + k;
    let mut rows = Vec::with_capacity(size);
    for (poly, deg, count) in [(f, m, k), (g, k, m)] {
        for r in 0..count {
            let mut row = vec![BigInt::zero(); size];
            for (j, c) in poly.coeffs().iter().rev().enumerate() {
                row[r + j] = c.clone();
            }
            debug_assert_eq!(poly.coeffs().len(), deg + 1);
            rows.push(row);
        }
    }
    Ok(rows)
}

/// Determinant by fraction-free (Bareiss) elimination with row pivoting.
pub fn bareiss_determinant(mut a: Matrix) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = !sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                let (q, r) = num.div_rem(&prev);
                debug_assert!(r.is_zero(), "Bareiss step must divide exactly");
                a[i][j] = q;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if sign {
        -det
    } else {
        det
    }
}

/// `Res(f, g)` as the determinant of the Sylvester matrix.
pub fn resultant(f: &IntPoly, g: &IntPoly) -> Result<BigInt> {
    Ok(bareiss_determinant(sylvester_matrix(f, g)?))
}

fn content(c: &[BigInt]) -> BigInt {
    c.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x))
}

fn trim(c: &mut Vec<BigInt>) {
    while c.len() > 1 && c.last().is_some_and(Zero::is_zero) {
        c.pop();
    }
}

/// Pseudo-remainder of `a` by `b` (multiplied through by `lc(b)^(deg a - deg b + 1)`).
fn pseudo_rem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = b.len() - 1;
    let lb = &b[db];
    let mut r = a.to_vec();
    let mut steps = a.len() - b.len() + 1;
    while r.len() > db && !(r.len() == 1 && r[0].is_zero()) {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        for c in r.iter_mut() {
            *c *= lb;
        }
        for (i, bc) in b.iter().enumerate() {
            r[dr - db + i] -= &lr * bc;
        }
        debug_assert!(r[dr].is_zero());
        r.pop();
        trim(&mut r);
        steps -= 1;
        if r.len() == 1 && r[0].is_zero() {
            break;
        }
    }
    if steps > 0 {
        let scale = Pow::pow(lb, steps);
        for c in r.iter_mut() {
            *c *= &scale;
        }
    }
    r
}

/// `Res(f, g)` by the subresultant pseudo-remainder sequence.
///
/// Independent of the Sylvester/Bareiss route; the two are cross-checked in
/// tests.
pub fn resultant_subresultant(f: &IntPoly, g: &IntPoly) -> Result<BigInt> {
    if f.is_zero() || g.is_zero() {
        return Err(Error::ZeroPolynomial("resultant"));
    }
    if f.degree() == 0 && g.degree() == 0 {
        return Err(Error::DegreeTooLow {
            op: "resultant",
            min: 1,
            got: 0,
        });
    }
    let mut a = f.coeffs().to_vec();
    let mut b = g.coeffs().to_vec();
    let ca = content(&a);
    let cb = content(&b);
    let t = Pow::pow(&ca, (b.len() - 1) as u32) * Pow::pow(&cb, (a.len() - 1) as u32);
    for c in a.iter_mut() {
        *c /= &ca;
    }
    for c in b.iter_mut() {
        *c /= &cb;
    }
    let mut s = BigInt::one();
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
        if (a.len() - 1) % 2 == 1 && (b.len() - 1) % 2 == 1 {
            s = -s;
        }
    }
    let mut g_ = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let (da, db) = (a.len() - 1, b.len() - 1);
        if db == 0 {
            // b is a nonzero constant
            let res = if da == 0 {
                BigInt::one()
            } else {
                Pow::pow(&b[0], da as u32) / Pow::pow(&h, (da - 1) as u32)
            };
            return Ok(s * t * res);
        }
        let delta = da - db;
        if da % 2 == 1 && db % 2 == 1 {
            s = -s;
        }
        let r = pseudo_rem(&a, &b);
        if r.len() == 1 && r[0].is_zero() {
            return Ok(BigInt::zero());
        }
        let div = &g_ * Pow::pow(&h, delta as u32);
        a = b;
        b = r.into_iter().map(|c| c / &div).collect();
        g_ = a[a.len() - 1].clone();
        h = if delta == 0 {
            h
        } else {
            Pow::pow(&g_, delta as u32) / Pow::pow(&h, (delta - 1) as u32)
        };
    }
}

fn disc_from_resultant(f: &IntPoly, res: BigInt) -> Discriminant {
    let n = f.degree();
    let (q, r) = res.div_rem(f.leading());
    assert!(
        r.is_zero(),
        "Res(f, f') must be divisible by the leading coefficient"
    );
    if (n * (n - 1) / 2) % 2 == 1 {
        Discriminant(-q)
    } else {
        Discriminant(q)
    }
}

/// `D(f) = (-1)^(n(n-1)/2) Res(f, f') / a_n`.
pub fn discriminant(f: &IntPoly) -> Result<Discriminant> {
    f.require_degree("discriminant", 2)?;
    let res = resultant(f, &f.derivative()?)?;
    Ok(disc_from_resultant(f, res))
}

/// Discriminant through the subresultant sequence instead of Bareiss.
pub fn discriminant_subresultant(f: &IntPoly) -> Result<Discriminant> {
    f.require_degree("discriminant", 2)?;
    let res = resultant_subresultant(f, &f.derivative()?)?;
    Ok(disc_from_resultant(f, res))
}

/// `n^n L(f)^(2n-2)`, an upper bound for `|D(f)|`.
pub fn mahler_bound(f: &IntPoly) -> Result<BigUint> {
    let n = f.require_degree("mahler_bound", 2)?;
    let l = f.length()?;
    Ok(Pow::pow(BigUint::from(n), n as u32) * Pow::pow(l, (2 * n - 2) as u32))
}

/// `ceil(n^(n/(n-1))) * L(f)^2`: every Eisenstein shift class has a
/// representative in `0..=max_shift_bound(f)`.
pub fn max_shift_bound(f: &IntPoly) -> Result<BigUint> {
    let n = f.require_degree("max_shift_bound", 2)?;
    let l = f.length()?;
    Ok(ceil_root_factor(n) * &l * &l)
}

/// Smallest integer `c` with `c^(n-1) >= n^n`, i.e. `ceil(n^(n/(n-1)))`.
pub fn ceil_root_factor(n: usize) -> BigUint {
    let target = Pow::pow(BigUint::from(n), n as u32);
    let k = (n - 1) as u32;
    let c = target.nth_root(k);
    if Pow::pow(&c, k) < target {
        c + 1u32
    } else {
        c
    }
}

/// Absolute value helper used by callers that only need `|D|`.
pub fn abs_discriminant(d: &Discriminant) -> BigUint {
    d.0.abs().magnitude().clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    fn m(rows: &[&[i64]]) -> Matrix {
        rows.iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect()
    }

    #[test]
    fn sylvester_examples() {
        let f = p(&[5, 4, 1]);
        assert_eq!(
            sylvester_matrix(&f, &f.derivative().unwrap()).unwrap(),
            m(&[&[1, 4, 5], &[2, 4, 0], &[0, 2, 4]])
        );
        assert_eq!(
            sylvester_matrix(&p(&[1, 1]), &p(&[-1, 1])).unwrap(),
            m(&[&[1, 1], &[1, -1]])
        );
        assert_eq!(resultant(&p(&[0, 1]), &p(&[0, 1])).unwrap(), BigInt::zero());
        assert!(sylvester_matrix(&p(&[3]), &p(&[4])).is_err());
        assert!(sylvester_matrix(&IntPoly::zero(), &p(&[0, 1])).is_err());
    }

    /// Quadratic oracle `b^2 - 4ac`.
    fn quad_disc(c: i64, b: i64, a: i64) -> BigInt {
        BigInt::from(b * b - 4 * a * c)
    }

    /// Cubic oracle `b^2c^2 - 4ac^3 - 4b^3d - 27a^2d^2 + 18abcd` for `ax^3+bx^2+cx+d`.
    fn cubic_disc(d: i64, c: i64, b: i64, a: i64) -> BigInt {
        let (a, b, c, d) = (
            BigInt::from(a),
            BigInt::from(b),
            BigInt::from(c),
            BigInt::from(d),
        );
        &b * &b * &c * &c - 4 * &a * &c * &c * &c - 4 * &b * &b * &b * &d
            - 27 * &a * &a * &d * &d
            + 18 * &a * &b * &c * &d
    }

    #[test]
    fn discriminant_examples() {
        assert_eq!(discriminant(&p(&[5, 4, 1])).unwrap().0, BigInt::from(-4));
        assert_eq!(
            discriminant(&p(&[2, 1, 0, 1])).unwrap().0,
            BigInt::from(-112)
        );
        assert_eq!(discriminant(&p(&[-1, 0, 1])).unwrap().0, BigInt::from(4));
        assert_eq!(quad_disc(5, 4, 1), BigInt::from(-4));
        assert_eq!(cubic_disc(2, 1, 0, 1), BigInt::from(-112));
        assert!(matches!(
            discriminant(&p(&[1, 1])),
            Err(Error::DegreeTooLow { .. })
        ));
    }

    #[test]
    fn bounds_examples() {
        assert_eq!(mahler_bound(&p(&[5, 4, 1])).unwrap(), BigUint::from(400u32));
        assert_eq!(mahler_bound(&p(&[0, 0, 1])).unwrap(), BigUint::from(4u32));
        assert_eq!(mahler_bound(&p(&[2, 1, 0, 1])).unwrap(), BigUint::from(6912u32));
        assert_eq!(max_shift_bound(&p(&[5, 4, 1])).unwrap(), BigUint::from(400u32));
        assert_eq!(max_shift_bound(&p(&[2, 1, 0, 1])).unwrap(), BigUint::from(96u32));
        assert_eq!(max_shift_bound(&p(&[0, 0, 1])).unwrap(), BigUint::from(4u32));
        assert!(mahler_bound(&p(&[1, 1])).is_err());
        assert!(max_shift_bound(&p(&[1, 1])).is_err());
    }

    #[test]
    fn ceil_root_factor_matches_float() {
        for n in 2..=30usize {
            let real = (n as f64).powf(n as f64 / (n as f64 - 1.0));
            let c = ceil_root_factor(n);
            let cf: f64 = c.to_string().parse().unwrap();
            assert!(cf >= real - 1e-9 && cf < real + 1.0, "n={n}: {cf} vs {real}");
        }
        assert_eq!(ceil_root_factor(3), BigUint::from(6u32));
        assert_eq!(ceil_root_factor(2), BigUint::from(4u32));
    }

    fn poly_strategy(min_deg: usize, max_deg: usize, bound: i64) -> impl Strategy<Value = IntPoly> {
        (min_deg..=max_deg)
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
        fn discriminant_matches_closed_forms(c in -50i64..50, b in -50i64..50, a in 1i64..50, d in -50i64..50) {
            prop_assert_eq!(discriminant(&p(&[c, b, a])).unwrap().0, quad_disc(c, b, a));
            prop_assert_eq!(discriminant(&p(&[d, c, b, a])).unwrap().0, cubic_disc(d, c, b, a));
        }

        #[test]
        fn two_resultant_routes_agree(f in poly_strategy(1, 7, 60), g in poly_strategy(1, 6, 60)) {
            prop_assert_eq!(resultant(&f, &g).unwrap(), resultant_subresultant(&f, &g).unwrap());
        }

        #[test]
        fn discriminant_shift_invariant(f in poly_strategy(2, 7, 1000), u in -1000i64..1000) {
            let d = discriminant(&f).unwrap();
            prop_assert_eq!(&discriminant(&f.taylor_shift(&BigInt::from(u))).unwrap(), &d);
            prop_assert_eq!(&discriminant_subresultant(&f).unwrap(), &d);
        }

        #[test]
        fn mahler_inequality(f in poly_strategy(2, 8, 1_000_000)) {
            prop_assert!(abs_discriminant(&discriminant(&f).unwrap()) <= mahler_bound(&f).unwrap());
        }

        #[test]
        fn repeated_root_gives_zero(a in -30i64..30, g in poly_strategy(0, 4, 30)) {
            // (x - a)^2 * g
            let sq = p(&[a * a, -2 * a, 1]);
            let mut prod = vec![BigInt::zero(); sq.degree() + g.degree() + 1];
            for (i, x) in sq.coeffs().iter().enumerate() {
                for (j, y) in g.coeffs().iter().enumerate() {
                    prod[i + j] += x * y;
                }
            }
            let h = IntPoly::new(prod);
            prop_assert!(discriminant(&h).unwrap().is_zero());
            prop_assert!(resultant(&h, &h.derivative().unwrap()).unwrap().is_zero());
        }
    }
}
