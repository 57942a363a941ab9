//! Normed commutative rings with exact arithmetic.
//!
//! A [`NormedRing`] value describes the ring; elements are plain data of
//! the associated type and every operation goes through the descriptor.

mod cyclotomic;
mod gaussian;
mod integers;
pub(crate) mod parse;
mod perfpoly;
mod truncated;

pub use cyclotomic::{CycloIntegers, CycloShape, Cyclotomic};
pub use gaussian::{Gaussian, GaussianKind, Gi};
pub use integers::{Integers, Rationals};
pub use perfpoly::PerfPoly;
pub use truncated::{TruncElem, Truncated};

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::RngCore;

use crate::error::Result;
use crate::norm::ExtNorm;

/// Capability flags of a ring instance.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Caps {
    pub torsion_free: bool,
    pub q_algebra: bool,
    pub pth_root_mod_p: bool,
    pub char_p_perfect: bool,
    /// Elements are known modulo `p^M`.
    pub precision: Option<u32>,
    pub multiplicative: bool,
    pub power_multiplicative: bool,
}

pub trait NormedRing: Clone + PartialEq + Debug + Send + Sync {
    type Elem: Clone + PartialEq + Debug + Send + Sync;

    fn p(&self) -> u64;
    fn caps(&self) -> Caps;
    fn name(&self) -> String;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_int(&self, n: &BigInt) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }

    fn from_i64(&self, n: i64) -> Self::Elem {
        self.from_int(&BigInt::from(n))
    }

    /// Returns `y` with `p·y = x`.
    fn div_p(&self, a: &Self::Elem) -> Result<Self::Elem>;

    fn norm(&self, a: &Self::Elem) -> Result<ExtNorm>;

    /// Canonical `b` with `b^p ≡ a (mod p)`, or `None` when no root exists.
    fn pth_root_mod_p(&self, a: &Self::Elem) -> Result<Option<Self::Elem>>;

    /// Every root class mod p, canonical root first. Rings where the
    /// p-power map is injective mod p return at most one.
    fn pth_roots_mod_p(&self, a: &Self::Elem) -> Result<Vec<Self::Elem>> {
        Ok(self.pth_root_mod_p(a)?.into_iter().collect())
    }

    /// Number of p-digits to which `a` is known, if the ring truncates.
    fn precision_of(&self, _a: &Self::Elem) -> Option<u32> {
        None
    }

    fn format(&self, a: &Self::Elem) -> String;
    fn parse(&self, s: &str) -> Result<Self::Elem>;
    fn sample(&self, rng: &mut dyn RngCore) -> Self::Elem;

    /// Witt addition of two component vectors of equal length.
    fn witt_add(&self, x: &[Self::Elem], y: &[Self::Elem]) -> Result<Vec<Self::Elem>> {
        crate::witt::generic_binary(self, crate::witt::BinOp::Add, x, y)
    }

    fn witt_mul(&self, x: &[Self::Elem], y: &[Self::Elem]) -> Result<Vec<Self::Elem>> {
        crate::witt::generic_binary(self, crate::witt::BinOp::Mul, x, y)
    }

    /// Witt Frobenius, dropping the last component.
    fn witt_frobenius(&self, x: &[Self::Elem]) -> Result<Vec<Self::Elem>> {
        crate::witt::generic_frobenius(self, x)
    }
}

pub fn vp_int(p: u64, n: &BigInt) -> Option<u64> {
    if n.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return Some(v);
        }
        n = q;
        v += 1;
    }
}

pub fn vp_rat(p: u64, x: &BigRational) -> Option<i64> {
    let vn = vp_int(p, x.numer())?;
    let vd = vp_int(p, x.denom()).unwrap_or(0);
    Some(vn as i64 - vd as i64)
}

pub fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

pub fn big_pow(p: u64, e: u32) -> BigInt {
    num_traits::pow(BigInt::from(p), e as usize)
}

/// Least nonnegative residue of a p-integral rational modulo `q`.
pub fn rat_mod(x: &BigRational, q: &BigInt) -> Option<BigInt> {
    let d = x.denom().mod_floor(q);
    let inv = mod_inverse(&d, q)?;
    Some((x.numer().mod_floor(q) * inv).mod_floor(q))
}

pub fn mod_inverse(a: &BigInt, q: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(q);
    if e.gcd.is_one() || (-&e.gcd).is_one() {
        let inv = if e.gcd.is_negative() { -e.x } else { e.x };
        Some(inv.mod_floor(q))
    } else {
        None
    }
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valuations() {
        assert_eq!(vp_int(2, &big(24)), Some(3));
        assert_eq!(vp_int(3, &big(0)), None);
        assert_eq!(vp_rat(2, &BigRational::new(big(3), big(8))), Some(-3));
    }

    #[test]
    fn modular_helpers() {
        assert_eq!(rat_mod(&BigRational::new(big(1), big(3)), &big(4)), Some(big(3)));
        assert_eq!(rat_mod(&BigRational::new(big(1), big(2)), &big(4)), None);
        assert_eq!(binomial(5, 2), big(10));
        assert_eq!(binomial(2, 5), big(0));
    }
}
