//! Exact norm values `p^{-v}` with `v` rational or `+∞`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// A rational exponent or `+∞`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Val {
    Finite(BigRational),
    Infinite,
}

impl Val {
    pub fn zero() -> Self {
        Val::Finite(BigRational::zero())
    }

    pub fn int(n: i64) -> Self {
        Val::Finite(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Val::Finite(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Val::Infinite)
    }

    pub fn finite(&self) -> Option<&BigRational> {
        match self {
            Val::Finite(v) => Some(v),
            Val::Infinite => None,
        }
    }

    pub fn add(&self, other: &Val) -> Val {
        match (self, other) {
            (Val::Finite(a), Val::Finite(b)) => Val::Finite(a + b),
            _ => Val::Infinite,
        }
    }

    /// Multiplies by a nonnegative rational. `∞ · 0` is taken to be `0`.
    pub fn scale(&self, r: &BigRational) -> Val {
        assert!(!r.is_negative(), "negative scale");
        match self {
            Val::Finite(a) => Val::Finite(a * r),
            Val::Infinite if r.is_zero() => Val::zero(),
            Val::Infinite => Val::Infinite,
        }
    }

    pub fn scale_int(&self, n: u64) -> Val {
        self.scale(&BigRational::from_integer(BigInt::from(n)))
    }

    pub fn div_int(&self, n: u64) -> Val {
        self.scale(&BigRational::new(BigInt::one(), BigInt::from(n)))
    }

    pub fn min(a: Val, b: Val) -> Val {
        if a <= b {
            a
        } else {
            b
        }
    }
}

impl PartialOrd for Val {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Val {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Val::Infinite, Val::Infinite) => Ordering::Equal,
            (Val::Infinite, Val::Finite(_)) => Ordering::Greater,
            (Val::Finite(_), Val::Infinite) => Ordering::Less,
            (Val::Finite(a), Val::Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for Val {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Val::Infinite => write!(f, "inf"),
            Val::Finite(v) => write!(f, "{}", v),
        }
    }
}

/// The norm value `p^{-val}`. Ordered by size of the norm, so a larger
/// `val` compares smaller.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExtNorm {
    val: Val,
}

impl ExtNorm {
    pub fn from_val(val: Val) -> Self {
        ExtNorm { val }
    }

    /// `p^{e}`.
    pub fn p_pow(e: BigRational) -> Self {
        ExtNorm { val: Val::Finite(-e) }
    }

    pub fn zero() -> Self {
        ExtNorm { val: Val::Infinite }
    }

    pub fn one() -> Self {
        ExtNorm { val: Val::zero() }
    }

    pub fn val(&self) -> &Val {
        &self.val
    }

    pub fn into_val(self) -> Val {
        self.val
    }

    pub fn is_zero(&self) -> bool {
        self.val.is_infinite()
    }

    /// The exponent `e` with norm `p^e`, or `None` for the zero norm.
    pub fn exponent(&self) -> Option<BigRational> {
        self.val.finite().map(|v| -v)
    }

    pub fn mul(&self, other: &ExtNorm) -> ExtNorm {
        ExtNorm { val: self.val.add(&other.val) }
    }

    /// `|·|^r` for a nonnegative rational `r`.
    pub fn pow(&self, r: &BigRational) -> ExtNorm {
        ExtNorm { val: self.val.scale(r) }
    }

    pub fn pow_int(&self, n: u64) -> ExtNorm {
        ExtNorm { val: self.val.scale_int(n) }
    }

    pub fn root(&self, n: u64) -> ExtNorm {
        ExtNorm { val: self.val.div_int(n) }
    }

    /// Multiplies by `p^{-e}`.
    pub fn shrink(&self, e: &BigRational) -> ExtNorm {
        ExtNorm { val: self.val.add(&Val::Finite(e.clone())) }
    }

    pub fn max(self, other: ExtNorm) -> ExtNorm {
        if self >= other {
            self
        } else {
            other
        }
    }

    pub fn sup<I: IntoIterator<Item = ExtNorm>>(it: I) -> ExtNorm {
        it.into_iter().fold(ExtNorm::zero(), ExtNorm::max)
    }

    /// Renders as `0`, `1` or `p^e` with the prime supplied.
    pub fn render(&self, p: u64) -> String {
        match self.exponent() {
            None => "0".into(),
            Some(e) if e.is_zero() => "1".into(),
            Some(e) if e.is_integer() => format!("{}^{}", p, e),
            Some(e) => format!("{}^({})", p, e),
        }
    }
}

impl PartialOrd for ExtNorm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtNorm {
    fn cmp(&self, other: &Self) -> Ordering {
        other.val.cmp(&self.val)
    }
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordering_is_reversed() {
        let small = ExtNorm::from_val(Val::int(2));
        let big = ExtNorm::from_val(Val::int(-1));
        assert!(small < big);
        assert!(ExtNorm::zero() < small);
        assert_eq!(ExtNorm::sup(vec![small.clone(), big.clone()]), big);
        assert_eq!(ExtNorm::sup(Vec::new()), ExtNorm::zero());
    }

    #[test]
    fn exponent_arithmetic() {
        let a = ExtNorm::from_val(Val::ratio(1, 2));
        assert_eq!(a.pow_int(2), ExtNorm::from_val(Val::int(1)));
        assert_eq!(a.root(2), ExtNorm::from_val(Val::ratio(1, 4)));
        assert_eq!(a.mul(&ExtNorm::zero()), ExtNorm::zero());
        assert_eq!(ExtNorm::zero().pow(&rat(0, 1)), ExtNorm::one());
        assert_eq!(a.render(2), "2^(-1/2)");
        assert_eq!(ExtNorm::p_pow(rat(1, 1)).render(3), "3^1");
    }
}
