//! The kernel of Frobenius on `W_{p^j}` over p-torsion-free rings.
//!
//! An element killed by `F` has ghost vector `(t, 0, …, 0)`, so it is
//! determined by `t = w_1(x)`, and `|t| = p^{−1/p−⋯−1/p^j}|x|_W`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::Result;
use crate::norm::ExtNorm;
use crate::rings::NormedRing;
use crate::witt::{GhostVec, WittVec};

#[derive(Clone, Debug, PartialEq)]
pub struct KernelElt<R: NormedRing> {
    pub x: WittVec<R>,
    pub t: R::Elem,
    pub j: usize,
}

/// The unique `x` of length `p^j` with ghost vector `(t, 0, …, 0)`.
pub fn kernel_element_from_w1<R: NormedRing>(ring: &R, t: &R::Elem, j: usize) -> Result<KernelElt<R>> {
    let mut g = vec![ring.zero(); j + 1];
    g[0] = t.clone();
    let x = GhostVec::new(ring.clone(), g)?.unghost()?;
    Ok(KernelElt { x, t: t.clone(), j })
}

/// `p^{−1/p−⋯−1/p^j}`.
pub fn kernel_constant(p: u64, j: usize) -> ExtNorm {
    let mut e = BigRational::zero();
    for i in 1..=j {
        e += BigRational::new(BigInt::from(1), BigInt::from(p).pow(i as u32));
    }
    ExtNorm::p_pow(-e)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelNormReport {
    pub p: u64,
    pub j: usize,
    /// `|w_1(x)|`.
    pub lhs: ExtNorm,
    pub witt_norm: ExtNorm,
    pub constant: ExtNorm,
    /// `c·|x|_W`.
    pub rhs: ExtNorm,
    pub frobenius_vanishes: bool,
}

impl KernelNormReport {
    pub fn equal(&self) -> bool {
        self.lhs == self.rhs
    }

    pub fn bound_holds(&self) -> bool {
        self.lhs <= self.rhs
    }
}

/// Computes both sides of the kernel norm identity exactly.
pub fn verify_kernel_norm<R: NormedRing>(ring: &R, t: &R::Elem, j: usize) -> Result<KernelNormReport> {
    let k = kernel_element_from_w1(ring, t, j)?;
    let p = ring.p();
    let frobenius_vanishes = j == 0 || k.x.frobenius()?.is_zero();
    let witt_norm = k.x.witt_norm()?;
    let constant = kernel_constant(p, j);
    Ok(KernelNormReport {
        p,
        j,
        lhs: ring.norm(t)?,
        rhs: constant.mul(&witt_norm),
        witt_norm,
        constant,
        frobenius_vanishes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norm::{rat, Val};
    use crate::rings::Rationals;

    #[test]
    fn small_kernel_elements() {
        let q = Rationals::new(2);
        let k = kernel_element_from_w1(&q, &q.from_i64(2), 1).unwrap();
        assert_eq!(k.x.comps(), &[q.from_i64(2), q.from_i64(-2)]);
        let k = kernel_element_from_w1(&q, &q.from_i64(4), 2).unwrap();
        assert_eq!(k.x.comps(), &[q.from_i64(4), q.from_i64(-8), q.from_i64(-96)]);
        let z = kernel_element_from_w1(&q, &q.zero(), 3).unwrap();
        assert!(z.x.is_zero());
    }

    #[test]
    fn norm_identity_examples() {
        let q = Rationals::new(2);
        let r = verify_kernel_norm(&q, &q.from_i64(2), 1).unwrap();
        assert_eq!(r.lhs, ExtNorm::from_val(Val::int(1)));
        assert_eq!(r.witt_norm, ExtNorm::p_pow(rat(-1, 2)));
        assert!(r.equal() && r.frobenius_vanishes);
        let r = verify_kernel_norm(&q, &q.from_i64(3), 1).unwrap();
        assert_eq!(r.lhs, ExtNorm::one());
        assert!(r.equal());
        let r = verify_kernel_norm(&q, &q.zero(), 2).unwrap();
        assert!(r.equal() && r.lhs.is_zero());
    }
}
