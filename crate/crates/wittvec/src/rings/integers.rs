use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, RngCore};

use super::parse::{format_rat, parse_int, parse_rat};
use super::{rat_mod, vp_int, vp_rat, Caps, NormedRing};
use crate::error::{Error, Result};
use crate::norm::{ExtNorm, Val};

/// `ℤ` with the p-adic norm.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Integers {
    p: u64,
}

impl Integers {
    pub fn new(p: u64) -> Self {
        assert!(p >= 2);
        Integers { p }
    }
}

impl NormedRing for Integers {
    type Elem = BigInt;

    fn p(&self) -> u64 {
        self.p
    }

    fn caps(&self) -> Caps {
        Caps {
            torsion_free: true,
            pth_root_mod_p: true,
            multiplicative: true,
            power_multiplicative: true,
            ..Caps::default()
        }
    }

    fn name(&self) -> String {
        format!("Z (p={})", self.p)
    }

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }

    fn one(&self) -> BigInt {
        BigInt::from(1)
    }

    fn from_int(&self, n: &BigInt) -> BigInt {
        n.clone()
    }

    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }

    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }

    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }

    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a - b
    }

    fn div_p(&self, a: &BigInt) -> Result<BigInt> {
        let (q, r) = a.div_rem(&BigInt::from(self.p));
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::NotDivisible(a.to_string()))
        }
    }

    fn norm(&self, a: &BigInt) -> Result<ExtNorm> {
        Ok(match vp_int(self.p, a) {
            None => ExtNorm::zero(),
            Some(v) => ExtNorm::from_val(Val::int(v as i64)),
        })
    }

    fn pth_root_mod_p(&self, a: &BigInt) -> Result<Option<BigInt>> {
        Ok(Some(a.mod_floor(&BigInt::from(self.p))))
    }

    fn format(&self, a: &BigInt) -> String {
        a.to_string()
    }

    fn parse(&self, s: &str) -> Result<BigInt> {
        parse_int(s, 0)
    }

    fn sample(&self, rng: &mut dyn RngCore) -> BigInt {
        let base = BigInt::from(rng.gen_range(-40i64..=40));
        let e = rng.gen_range(0..3u32);
        base * num_traits::pow(BigInt::from(self.p), e as usize)
    }
}

/// `ℚ` with the p-adic norm.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rationals {
    p: u64,
}

impl Rationals {
    pub fn new(p: u64) -> Self {
        assert!(p >= 2);
        Rationals { p }
    }
}

impl NormedRing for Rationals {
    type Elem = BigRational;

    fn p(&self) -> u64 {
        self.p
    }

    fn caps(&self) -> Caps {
        Caps {
            torsion_free: true,
            q_algebra: true,
            pth_root_mod_p: true,
            multiplicative: true,
            power_multiplicative: true,
            ..Caps::default()
        }
    }

    fn name(&self) -> String {
        format!("Q (p={})", self.p)
    }

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn one(&self) -> BigRational {
        BigRational::from_integer(BigInt::from(1))
    }

    fn from_int(&self, n: &BigInt) -> BigRational {
        BigRational::from_integer(n.clone())
    }

    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }

    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }

    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }

    fn div_p(&self, a: &BigRational) -> Result<BigRational> {
        Ok(a / BigRational::from_integer(BigInt::from(self.p)))
    }

    fn norm(&self, a: &BigRational) -> Result<ExtNorm> {
        Ok(match vp_rat(self.p, a) {
            None => ExtNorm::zero(),
            Some(v) => ExtNorm::from_val(Val::int(v)),
        })
    }

    /// Defined on `ℤ_(p)`; elements with negative valuation have no residue.
    fn pth_root_mod_p(&self, a: &BigRational) -> Result<Option<BigRational>> {
        Ok(rat_mod(a, &BigInt::from(self.p)).map(BigRational::from_integer))
    }

    fn format(&self, a: &BigRational) -> String {
        format_rat(a)
    }

    fn parse(&self, s: &str) -> Result<BigRational> {
        parse_rat(s, 0)
    }

    fn sample(&self, rng: &mut dyn RngCore) -> BigRational {
        let n = BigInt::from(rng.gen_range(-30i64..=30));
        let d = BigInt::from(rng.gen_range(1i64..=12));
        let e = rng.gen_range(0..3u32);
        let r = BigRational::new(n * num_traits::pow(BigInt::from(self.p), e as usize), d);
        if rng.gen_bool(0.2) && !r.is_zero() {
            r.recip().abs()
        } else {
            r
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::big;

    #[test]
    fn integer_division_and_roots() {
        let z = Integers::new(2);
        assert_eq!(z.div_p(&big(6)).unwrap(), big(3));
        assert!(matches!(z.div_p(&big(3)), Err(Error::NotDivisible(_))));
        let z3 = Integers::new(3);
        assert_eq!(z3.pth_root_mod_p(&big(5)).unwrap(), Some(big(2)));
        assert_eq!(z3.pth_root_mod_p(&big(0)).unwrap(), Some(big(0)));
    }

    #[test]
    fn rational_norm() {
        let q = Rationals::new(2);
        let half = q.parse("1/2").unwrap();
        assert_eq!(q.norm(&half).unwrap(), ExtNorm::from_val(Val::int(-1)));
        assert_eq!(q.norm(&q.zero()).unwrap(), ExtNorm::zero());
        assert_eq!(q.pth_root_mod_p(&half).unwrap(), None);
        assert_eq!(q.format(&q.parse("6/4").unwrap()), "3/2");
    }
}
