//! Roots of integer polynomials modulo a prime.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::factor::DEFAULT_SEED;
use super::primality::is_prime;
use crate::error::{Error, Result};
use crate::poly::IntPoly;

/// Primes below this are handled by evaluating at every residue.
pub const EXHAUSTIVE_ROOT_LIMIT: u64 = 1_000_000;

/// Dense polynomial over the field with `p` elements, ascending, trimmed;
/// the empty vector is zero.
#[derive(Clone, Debug, PartialEq, Eq)]
struct FpPoly(Vec<BigUint>);

struct Field<'a> {
    p: &'a BigUint,
}

impl Field<'_> {
    fn trim(mut v: Vec<BigUint>) -> FpPoly {
        while v.last().is_some_and(Zero::is_zero) {
            v.pop();
        }
        FpPoly(v)
    }

    fn reduce(&self, f: &IntPoly) -> FpPoly {
        let p = BigInt::from_biguint(Sign::Plus, self.p.clone());
        Self::trim(
            f.coeffs()
                .iter()
                .map(|c| c.mod_floor(&p).magnitude().clone())
                .collect(),
        )
    }

    fn inv(&self, a: &BigUint) -> BigUint {
        a.modpow(&(self.p - 2u32), self.p)
    }

    fn sub(&self, a: &FpPoly, b: &FpPoly) -> FpPoly {
        let len = a.0.len().max(b.0.len());
        let zero = BigUint::zero();
        Self::trim(
            (0..len)
                .map(|i| {
                    let x = a.0.get(i).unwrap_or(&zero);
                    let y = b.0.get(i).unwrap_or(&zero);
                    (x + self.p - y) % self.p
                })
                .collect(),
        )
    }

    fn mul(&self, a: &FpPoly, b: &FpPoly) -> FpPoly {
        if a.0.is_empty() || b.0.is_empty() {
            return FpPoly(vec![]);
        }
        let mut out = vec![BigUint::zero(); a.0.len() + b.0.len() - 1];
        for (i, x) in a.0.iter().enumerate() {
            for (j, y) in b.0.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        Self::trim(out.into_iter().map(|c| c % self.p).collect())
    }

    fn div_rem(&self, a: &FpPoly, b: &FpPoly) -> (FpPoly, FpPoly) {
        let db = b.0.len() - 1;
        let lead_inv = self.inv(&b.0[db]);
        let mut r = a.0.clone();
        if r.len() <= db {
            return (FpPoly(vec![]), Self::trim(r));
        }
        let mut q = vec![BigUint::zero(); r.len() - db];
        while r.len() > db {
            let dr = r.len() - 1;
            let coef = &r[dr] * &lead_inv % self.p;
            if !coef.is_zero() {
                for (i, bc) in b.0.iter().enumerate() {
                    let t = &coef * bc % self.p;
                    let slot = &mut r[dr - db + i];
                    *slot = (&*slot + self.p - t) % self.p;
                }
            }
            q[dr - db] = coef;
            r.pop();
        }
        (Self::trim(q), Self::trim(r))
    }

    fn rem(&self, a: &FpPoly, b: &FpPoly) -> FpPoly {
        self.div_rem(a, b).1
    }

    fn monic(&self, a: FpPoly) -> FpPoly {
        match a.0.last() {
            None => a,
            Some(lead) => {
                let inv = self.inv(lead);
                FpPoly(a.0.iter().map(|c| c * &inv % self.p).collect())
            }
        }
    }

    fn gcd(&self, a: &FpPoly, b: &FpPoly) -> FpPoly {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.0.is_empty() {
            let r = self.rem(&a, &b);
            a = b;
            b = r;
        }
        self.monic(a)
    }

    fn pow_mod(&self, base: &FpPoly, exp: &BigUint, modulus: &FpPoly) -> FpPoly {
        let mut acc = self.rem(&FpPoly(vec![BigUint::one()]), modulus);
        let base = self.rem(base, modulus);
        for i in (0..exp.bits()).rev() {
            acc = self.rem(&self.mul(&acc, &acc), modulus);
            if exp.bit(i) {
                acc = self.rem(&self.mul(&acc, &base), modulus);
            }
        }
        acc
    }

    fn random_below(&self, rng: &mut ChaCha8Rng) -> BigUint {
        let mut bytes = vec![0u8; (self.p.bits() as usize).div_ceil(8) + 8];
        rng.fill(&mut bytes[..]);
        BigUint::from_bytes_le(&bytes) % self.p
    }

    /// Collects the roots of a monic squarefree product of distinct linear factors.
    fn split_linear(&self, g: FpPoly, rng: &mut ChaCha8Rng, roots: &mut Vec<BigUint>) {
        match g.0.len() {
            0 | 1 => {}
            2 => roots.push((self.p - &g.0[0]) % self.p),
            _ => {
                let half = (self.p - 1u32) >> 1u32;
                loop {
                    let a = self.random_below(rng);
                    let shifted = FpPoly(vec![a, BigUint::one()]);
                    let w = self.pow_mod(&shifted, &half, &g);
                    let w = self.sub(&w, &FpPoly(vec![BigUint::one()]));
                    let d = self.gcd(&w, &g);
                    let dd = d.0.len();
                    if dd > 1 && dd < g.0.len() {
                        let (other, _) = self.div_rem(&g, &d);
                        self.split_linear(d, rng, roots);
                        self.split_linear(self.monic(other), rng, roots);
                        return;
                    }
                }
            }
        }
    }
}

fn scan_roots(f: &IntPoly, p: u64) -> Vec<BigUint> {
    let coeffs: Vec<u64> = f
        .coeffs()
        .iter()
        .map(|c| c.mod_floor(&BigInt::from(p)).to_u64().expect("reduced"))
        .collect();
    (0..p)
        .filter(|&s| {
            coeffs
                .iter()
                .rev()
                .fold(0u64, |acc, &c| ((acc as u128 * s as u128 + c as u128) % p as u128) as u64)
                == 0
        })
        .map(BigUint::from)
        .collect()
}

/// Distinct residues `s` in `[0, p)` with `f(s) = 0 (mod p)`, ascending.
pub fn roots_mod_p(f: &IntPoly, p: &BigUint) -> Result<Vec<BigUint>> {
    roots_mod_p_seeded(f, p, DEFAULT_SEED)
}

/// [`roots_mod_p`] with an explicit seed for the randomized splitting step.
pub fn roots_mod_p_seeded(f: &IntPoly, p: &BigUint, seed: u64) -> Result<Vec<BigUint>> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p.to_string()));
    }
    let field = Field { p };
    let fp = field.reduce(f);
    if fp.0.is_empty() {
        return Err(Error::AllResiduesRoots(p.to_string()));
    }
    if let Some(small) = p.to_u64().filter(|&v| v < EXHAUSTIVE_ROOT_LIMIT) {
        return Ok(scan_roots(f, small));
    }
    if fp.0.len() == 1 {
        return Ok(vec![]);
    }
    let fp = field.monic(fp);
    let x = FpPoly(vec![BigUint::zero(), BigUint::one()]);
    let xp = field.pow_mod(&x, p, &fp);
    let g = field.gcd(&field.sub(&xp, &x), &fp);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ p.iter_u64_digits().next().unwrap_or(0));
    let mut roots = Vec::new();
    field.split_linear(g, &mut rng, &mut roots);
    roots.sort();
    Ok(roots)
}
