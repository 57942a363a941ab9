//! Depth-truncated elements of `W⃗(R)`, the inverse limit of
//! `W_{p^n}(R)` along Frobenius, and the seminorms `|·|_{W,b}`.
//!
//! Level `n` is a Witt vector with `n + 1` components. A [`LevelBound`]
//! certificate bounds the levels beyond the stored depth so that
//! [`ArrowElt::arrow_norm`] can report an exact value.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::norm::{ExtNorm, Val};
use crate::rings::{parse::parse_rat, NormedRing, Truncated};
use crate::witt::WittVec;

/// The overconvergence parameter `b > 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OvercParam(BigRational);

impl OvercParam {
    pub fn new(b: BigRational) -> Result<Self> {
        if !b.is_positive() {
            return Err(Error::BOutOfRange(b.to_string()));
        }
        Ok(OvercParam(b))
    }

    pub fn ratio(n: i64, d: i64) -> Result<Self> {
        Self::new(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::new(parse_rat(s, 0)?)
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }

    pub fn div_int(&self, n: u64) -> OvercParam {
        OvercParam(&self.0 / BigRational::from_integer(BigInt::from(n)))
    }
}

impl fmt::Display for OvercParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Asserts `|x_{p^{-n}}|_W^{p^n} ≤ p^{-val}` for every `n ≥ from`,
/// including levels beyond the stored depth.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelBound {
    pub from: usize,
    pub val: Val,
}

impl LevelBound {
    /// Every level has norm at most one.
    pub fn integral() -> Self {
        LevelBound { from: 0, val: Val::zero() }
    }

    fn merge_add(a: &LevelBound, b: &LevelBound) -> LevelBound {
        LevelBound { from: a.from.max(b.from), val: Val::min(a.val.clone(), b.val.clone()) }
    }

    fn merge_mul(a: &LevelBound, b: &LevelBound) -> LevelBound {
        LevelBound { from: a.from.max(b.from), val: a.val.add(&b.val) }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormStatus {
    Exact,
    LowerBound,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArrowNorm {
    pub value: ExtNorm,
    pub status: NormStatus,
    /// First level at which the stored supremum is attained.
    pub attained_at: Option<usize>,
}

impl ArrowNorm {
    pub fn is_exact(&self) -> bool {
        self.status == NormStatus::Exact
    }
}

/// A coherent sequence `(x_{p^{-n}})_{n ≤ N}` with `F(x_{p^{-n-1}}) = x_{p^{-n}}`.
#[derive(Clone, Debug, PartialEq)]
pub struct ArrowElt<R: NormedRing> {
    ring: R,
    levels: Vec<WittVec<R>>,
    cert: Option<LevelBound>,
}

impl<R: NormedRing> ArrowElt<R> {
    pub fn new(ring: R, levels: Vec<WittVec<R>>, cert: Option<LevelBound>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::LengthZero);
        }
        for (n, l) in levels.iter().enumerate() {
            if *l.ring() != ring {
                return Err(Error::RingMismatch);
            }
            if l.level() != n {
                return Err(Error::LengthMismatch(n + 1, l.level() + 1));
            }
        }
        for n in 0..levels.len() - 1 {
            if levels[n + 1].frobenius()? != levels[n] {
                return Err(Error::Incoherent(n));
            }
        }
        Ok(ArrowElt { ring, levels, cert })
    }

    /// The sequence `F^{N-n}(top)`.
    pub fn from_top(top: &WittVec<R>, cert: Option<LevelBound>) -> Result<Self> {
        let mut levels = vec![top.clone()];
        while levels.last().expect("nonempty").level() > 0 {
            let next = levels.last().expect("nonempty").frobenius()?;
            levels.push(next);
        }
        levels.reverse();
        Ok(ArrowElt { ring: top.ring().clone(), levels, cert })
    }

    /// The image of `m`: every ghost component of every level equals `m`.
    pub fn from_integer(ring: &R, m: &BigInt, depth: usize) -> Self {
        let levels = (0..=depth).map(|n| WittVec::from_integer(ring, m, n)).collect();
        let val = if m.is_zero() { Val::Infinite } else { Val::zero() };
        ArrowElt { ring: ring.clone(), levels, cert: Some(LevelBound { from: 0, val }) }
    }

    pub fn zero(ring: &R, depth: usize) -> Self {
        Self::from_integer(ring, &BigInt::zero(), depth)
    }

    pub fn one(ring: &R, depth: usize) -> Self {
        Self::from_integer(ring, &BigInt::one(), depth)
    }

    /// `([r_0], [r_1], …)` for a sequence with `r_{n+1}^p = r_n`.
    pub fn teichmuller_sequence(ring: &R, roots: &[R::Elem]) -> Result<Self> {
        let levels: Vec<WittVec<R>> =
            roots.iter().enumerate().map(|(n, r)| WittVec::teichmuller(ring, r, n)).collect();
        let cert = if ring.caps().power_multiplicative && !roots.is_empty() {
            Some(LevelBound { from: 0, val: ring.norm(&roots[0])?.into_val() })
        } else {
            None
        };
        Self::new(ring.clone(), levels, cert)
    }

    pub fn with_certificate(mut self, cert: Option<LevelBound>) -> Self {
        self.cert = cert;
        self
    }

    pub fn certificate(&self) -> Option<&LevelBound> {
        self.cert.as_ref()
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn levels(&self) -> &[WittVec<R>] {
        &self.levels
    }

    /// `x_{p^{-n}}`.
    pub fn project(&self, n: usize) -> Result<&WittVec<R>> {
        self.levels.get(n).ok_or(Error::DepthExceeded { requested: n, available: self.depth() })
    }

    /// `w_{p^{-n}}`, the first component of level `n`.
    pub fn w(&self, n: usize) -> Result<R::Elem> {
        Ok(self.project(n)?.comp(0).clone())
    }

    /// Projection to `W_1(R) = R`.
    pub fn theta(&self) -> R::Elem {
        self.levels[0].comp(0).clone()
    }

    pub fn truncate(&self, depth: usize) -> Result<Self> {
        if depth > self.depth() {
            return Err(Error::DepthExceeded { requested: depth, available: self.depth() });
        }
        Ok(ArrowElt { ring: self.ring.clone(), levels: self.levels[..=depth].to_vec(), cert: self.cert.clone() })
    }

    pub fn is_coherent(&self) -> Result<bool> {
        for n in 0..self.depth() {
            if self.levels[n + 1].frobenius()? != self.levels[n] {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Checks that the last ghost component of every level equals `w_1`.
    pub fn ghost_compatible(&self) -> bool {
        let w1 = self.theta();
        self.levels.iter().all(|l| l.ghost().comps().last() == Some(&w1))
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch);
        }
        if self.depth() != other.depth() {
            return Err(Error::LengthMismatch(self.levels.len(), other.levels.len()));
        }
        Ok(())
    }

    fn zip_with<F>(&self, other: &Self, cert: Option<LevelBound>, f: F) -> Result<Self>
    where
        F: Fn(&WittVec<R>, &WittVec<R>) -> Result<WittVec<R>>,
    {
        self.check(other)?;
        let levels = self.levels.iter().zip(&other.levels).map(|(a, b)| f(a, b)).collect::<Result<_>>()?;
        Ok(ArrowElt { ring: self.ring.clone(), levels, cert })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let cert = match (&self.cert, &other.cert) {
            (Some(a), Some(b)) => Some(LevelBound::merge_add(a, b)),
            _ => None,
        };
        self.zip_with(other, cert, |a, b| a.add(b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg()?)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let cert = match (&self.cert, &other.cert) {
            (Some(a), Some(b)) => Some(LevelBound::merge_mul(a, b)),
            _ => None,
        };
        self.zip_with(other, cert, |a, b| a.mul(b))
    }

    pub fn neg(&self) -> Result<Self> {
        let levels = self.levels.iter().map(|l| l.neg()).collect::<Result<_>>()?;
        Ok(ArrowElt { ring: self.ring.clone(), levels, cert: self.cert.clone() })
    }

    /// `F^{-1}`: level `n` of the result is level `n + 1` restricted.
    pub fn inverse_frobenius(&self) -> Result<Self> {
        if self.depth() == 0 {
            return Err(Error::ZeroDepth);
        }
        let levels = (0..self.depth()).map(|n| self.levels[n + 1].restrict(n)).collect::<Result<_>>()?;
        let p = self.ring.p();
        let cert = self
            .cert
            .as_ref()
            .map(|c| LevelBound { from: c.from.saturating_sub(1), val: c.val.div_int(p) });
        Ok(ArrowElt { ring: self.ring.clone(), levels, cert })
    }

    /// `sup_n p^{-bn} |x_{p^{-n}}|_W^{p^n}` over the stored levels, exact
    /// when the certificate and the known precision bound everything else.
    pub fn arrow_norm(&self, b: &OvercParam) -> Result<ArrowNorm> {
        let p = self.ring.p();
        let b = b.value();
        let mut best = ExtNorm::zero();
        let mut attained = None;
        let mut uncertain = ExtNorm::zero();
        for (n, level) in self.levels.iter().enumerate() {
            let pn = p.pow(n as u32);
            let shift = b * BigRational::from_integer(BigInt::from(n));
            let term = level.witt_norm()?.pow_int(pn).shrink(&shift);
            if term > best {
                best = term;
                attained = Some(n);
            }
            let cap = self.cert.as_ref().filter(|c| c.from <= n).map(|c| ExtNorm::from_val(c.val.clone()));
            for (i, c) in level.comps().iter().enumerate() {
                if let Some(prec) = self.ring.precision_of(c) {
                    if self.ring.is_zero(c) {
                        let mut u = ExtNorm::from_val(Val::int(prec as i64).scale_int(p.pow((n - i) as u32)));
                        if let Some(cap) = &cap {
                            u = u.min(cap.clone());
                        }
                        uncertain = uncertain.max(u.shrink(&shift));
                    }
                }
            }
        }
        let tail = self.cert.as_ref().and_then(|c| {
            if c.from <= self.depth() + 1 {
                let shift = b * BigRational::from_integer(BigInt::from(self.depth() + 1));
                Some(ExtNorm::from_val(c.val.clone()).shrink(&shift))
            } else {
                None
            }
        });
        let exact = match tail {
            Some(t) => best >= t && best >= uncertain,
            None => false,
        };
        Ok(ArrowNorm {
            value: best,
            status: if exact { NormStatus::Exact } else { NormStatus::LowerBound },
            attained_at: attained,
        })
    }

    pub fn map<S: NormedRing, F: Fn(&R::Elem) -> S::Elem>(&self, target: &S, f: F) -> ArrowElt<S> {
        ArrowElt {
            ring: target.clone(),
            levels: self.levels.iter().map(|l| l.map(target, &f)).collect(),
            cert: self.cert.clone(),
        }
    }
}

impl ArrowElt<Truncated> {
    /// Lowers every component to at most `m` digits.
    pub fn reduce(&self, m: u32) -> ArrowElt<Truncated> {
        let target = self.ring.with_precision(m);
        self.map(&target, |c| target.elem(c.coeffs().to_vec(), m.min(c.prec())))
    }

    /// Lifts an element of `W⃗(A/p^m)` to `W⃗(A/p^{m+1})` at depth `depth`:
    /// level `i` is `F^{m+1}` of a componentwise lift of level `i + m + 2`
    /// with one zero component appended, restricted to `i`.
    pub fn lift_mod_p_power(&self, depth: usize) -> Result<ArrowElt<Truncated>> {
        let m = self.ring.precision();
        let need = depth + m as usize + 2;
        if self.depth() < need {
            return Err(Error::InsufficientDepth { need, have: self.depth() });
        }
        let hi = self.ring.with_precision(m + 1);
        let mut levels = Vec::with_capacity(depth + 1);
        for i in 0..=depth {
            let src = &self.levels[i + m as usize + 2];
            let comps = src.comps().iter().map(|c| hi.elem(c.coeffs().to_vec(), m + 1)).collect();
            let z = WittVec::new(hi.clone(), comps)?.extend_zero(src.level() + 1);
            levels.push(z.frobenius_iter(m as usize + 1)?.restrict(i)?);
        }
        ArrowElt::new(hi, levels, self.cert.clone())
    }
}

impl<R: NormedRing> fmt::Display for ArrowElt<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .levels
            .iter()
            .map(|l| {
                let c: Vec<String> = l.comps().iter().map(|x| self.ring.format(x)).collect();
                format!("({})", c.join(", "))
            })
            .collect();
        write!(f, "A(p={}; {})", self.ring.p(), parts.join(" <- "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norm::rat;
    use crate::rings::{big, Integers, Rationals};

    #[test]
    fn from_integer_levels_have_constant_ghosts() {
        let z = Integers::new(2);
        let a = ArrowElt::from_integer(&z, &big(2), 2);
        let l2 = a.project(2).unwrap();
        assert_eq!(l2.comps(), &[big(2), big(-1), big(-4)]);
        assert_eq!(l2.ghost().comps(), &[big(2), big(2), big(2)]);
        assert!(a.ghost_compatible());
        assert_eq!(a.w(1).unwrap(), big(2));
        assert_eq!(a.project(0).unwrap().comps(), &[big(2)]);
        assert!(a.project(3).is_err());
    }

    #[test]
    fn incoherent_levels_are_rejected() {
        let z = Integers::new(2);
        let l0 = WittVec::new(z.clone(), vec![big(3)]).unwrap();
        let l1 = WittVec::new(z.clone(), vec![big(1), big(0)]).unwrap();
        assert_eq!(ArrowElt::new(z, vec![l0, l1], None), Err(Error::Incoherent(0)));
    }

    #[test]
    fn inverse_frobenius_of_integer_is_integer() {
        let z = Integers::new(3);
        let a = ArrowElt::from_integer(&z, &big(7), 3);
        let b = a.inverse_frobenius().unwrap();
        assert_eq!(b.levels(), ArrowElt::from_integer(&z, &big(7), 2).levels());
        assert_eq!(ArrowElt::from_integer(&z, &big(7), 0).inverse_frobenius(), Err(Error::ZeroDepth));
    }

    #[test]
    fn norm_of_p_multiples() {
        let q = Rationals::new(2);
        let one = ArrowElt::from_integer(&q, &big(1), 3);
        let n = one.arrow_norm(&OvercParam::ratio(1, 3).unwrap()).unwrap();
        assert_eq!(n.value, ExtNorm::one());
        assert!(n.is_exact());
        let two = ArrowElt::from_integer(&q, &big(2), 2);
        let n = two.arrow_norm(&OvercParam::ratio(1, 1).unwrap()).unwrap();
        assert_eq!(n.value, ExtNorm::p_pow(rat(-1, 1)));
        assert!(n.is_exact());
        let n = two.arrow_norm(&OvercParam::ratio(1, 2).unwrap()).unwrap();
        assert_eq!(n.value, ExtNorm::p_pow(rat(-1, 2)));
        assert_eq!(n.attained_at, Some(1));
        assert!(n.is_exact());
        let n = two.truncate(0).unwrap().arrow_norm(&OvercParam::ratio(1, 2).unwrap()).unwrap();
        assert_eq!(n.status, NormStatus::LowerBound);
    }

    #[test]
    fn uncertified_norm_is_a_lower_bound() {
        let z = Integers::new(2);
        let a = ArrowElt::from_integer(&z, &big(5), 2).with_certificate(None);
        let n = a.arrow_norm(&OvercParam::ratio(1, 1).unwrap()).unwrap();
        assert_eq!(n.status, NormStatus::LowerBound);
        assert!(OvercParam::ratio(0, 1).is_err());
        assert!(OvercParam::parse("-1/2").is_err());
    }

    #[test]
    fn theta_of_integer() {
        let r = Truncated::integers_mod(2, 4);
        let a = ArrowElt::from_integer(&r, &big(-3), 3);
        assert_eq!(a.theta(), r.from_i64(13));
        assert_eq!(ArrowElt::one(&r, 2).theta(), r.one());
    }

    #[test]
    fn lift_of_integer_is_integer() {
        let r = Truncated::integers_mod(2, 1);
        for k in -4..=4 {
            let a = ArrowElt::from_integer(&r, &big(k), 4);
            let lifted = a.lift_mod_p_power(1).unwrap();
            let expect = ArrowElt::from_integer(&Truncated::integers_mod(2, 2), &big(k), 1);
            assert_eq!(lifted.levels(), expect.levels());
        }
        let a = ArrowElt::from_integer(&r, &big(1), 3);
        assert_eq!(a.lift_mod_p_power(1), Err(Error::InsufficientDepth { need: 4, have: 3 }));
    }

    #[test]
    fn arithmetic_keeps_coherence() {
        let z = Integers::new(2);
        let top = WittVec::new(z.clone(), vec![big(3), big(-1), big(2)]).unwrap();
        let a = ArrowElt::from_top(&top, Some(LevelBound::integral())).unwrap();
        let b = ArrowElt::from_integer(&z, &big(-2), 2);
        for c in [a.add(&b).unwrap(), a.mul(&b).unwrap(), a.sub(&b).unwrap(), a.neg().unwrap()] {
            assert!(c.is_coherent().unwrap());
        }
        assert_eq!(a.add(&ArrowElt::zero(&z, 2)).unwrap(), a);
    }
}
