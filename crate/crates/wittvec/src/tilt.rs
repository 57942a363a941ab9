//! Tilting of precision-truncated rings and the comparison with
//! characteristic `p`.
//!
//! An element of the tilt `R′` of `A/p^M` at depth `D` is a sequence
//! `x_{p^{-m}}`, `m = 0..=D`, with `x_{p^{-m-1}}^p = x_{p^{-m}}`. Entry `m`
//! is known to `min(M, P + D − m)` digits where `P` is the precision of
//! the top entry: each p-th power gains one digit.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::RngCore;

use crate::arrow::{ArrowElt, LevelBound, OvercParam};
use crate::error::{Error, Result};
use crate::norm::{ExtNorm, Val};
use crate::rings::{Caps, NormedRing, PerfPoly, TruncElem, Truncated};
use crate::witt::WittVec;

/// The tilt of a truncated ring, kept to `depth` roots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TiltRing {
    base: Truncated,
    depth: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TiltElt {
    entries: Vec<TruncElem>,
}

impl TiltElt {
    /// `x_{p^{-m}}` for `m = 0..=D`.
    pub fn entries(&self) -> &[TruncElem] {
        &self.entries
    }

    pub fn entry(&self, m: usize) -> &TruncElem {
        &self.entries[m]
    }
}

impl TiltRing {
    pub fn new(base: Truncated, depth: usize) -> Self {
        TiltRing { base, depth }
    }

    pub fn base(&self) -> &Truncated {
        &self.base
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// The same tilt kept to one root fewer.
    pub fn lowered(&self) -> Result<TiltRing> {
        if self.depth == 0 {
            return Err(Error::ZeroDepth);
        }
        Ok(TiltRing::new(self.base.clone(), self.depth - 1))
    }

    /// `a^p` with the precision of `a` raised by one digit.
    pub fn pow_p_gain(&self, a: &TruncElem) -> TruncElem {
        let b = &self.base;
        let m = b.precision();
        if a.prec() == 0 {
            return b.elem(vec![0; b.shape().phi()], 0);
        }
        let full = b.elem(a.coeffs().to_vec(), m);
        let r = b.pow(&full, b.p());
        b.reduce(&r, (a.prec() + 1).min(m))
    }

    fn pow_p_iter(&self, a: &TruncElem, l: usize) -> TruncElem {
        (0..l).fold(a.clone(), |acc, _| self.pow_p_gain(&acc))
    }

    /// Checks length and `x_{p^{-m-1}}^p = x_{p^{-m}}` at the available precision.
    pub fn element(&self, entries: Vec<TruncElem>) -> Result<TiltElt> {
        if entries.len() != self.depth + 1 {
            return Err(Error::LengthMismatch(entries.len(), self.depth + 1));
        }
        for m in 0..self.depth {
            if self.pow_p_gain(&entries[m + 1]) != entries[m] {
                return Err(Error::Incoherent(m));
            }
        }
        Ok(TiltElt { entries })
    }

    /// The element whose top entry is the class of `r` mod `p`.
    pub fn from_top_residue(&self, r: &TruncElem) -> TiltElt {
        let top = self.base.reduce(r, 1);
        let mut entries = vec![top];
        for _ in 0..self.depth {
            let next = self.pow_p_gain(entries.last().expect("nonempty"));
            entries.push(next);
        }
        entries.reverse();
        TiltElt { entries }
    }

    /// Builds an element from residues `r_0, …, r_D` with `r_{m+1}^p ≡ r_m (mod p)`.
    pub fn from_roots(&self, roots: &[TruncElem]) -> Result<TiltElt> {
        if roots.len() != self.depth + 1 {
            return Err(Error::LengthMismatch(roots.len(), self.depth + 1));
        }
        for m in 0..self.depth {
            let rp = self.base.reduce(&self.base.pow(&roots[m + 1], self.base.p()), 1);
            if rp != self.base.reduce(&roots[m], 1) {
                return Err(Error::Incoherent(m));
            }
        }
        Ok(self.from_top_residue(&roots[self.depth]))
    }

    /// The limit `z_{p^{-m}} = (x_{p^{-m-l}} + y_{p^{-m-l}})^{p^l}` at
    /// `l = min(M, D − m)`.
    pub fn tilt_add(&self, x: &TiltElt, y: &TiltElt) -> TiltElt {
        let m_prec = self.base.precision() as usize;
        let entries = (0..=self.depth)
            .map(|m| {
                let l = m_prec.min(self.depth - m);
                let s = self.base.add(&x.entries[m + l], &y.entries[m + l]);
                self.pow_p_iter(&s, l)
            })
            .collect();
        TiltElt { entries }
    }

    pub fn tilt_mul(&self, x: &TiltElt, y: &TiltElt) -> TiltElt {
        TiltElt { entries: x.entries.iter().zip(&y.entries).map(|(a, b)| self.base.mul(a, b)).collect() }
    }

    /// `|x| = |x_1|`.
    pub fn tilt_norm(&self, x: &TiltElt) -> ExtNorm {
        self.base.norm(&x.entries[0]).expect("truncated norms are total")
    }

    /// True when `|x|` is known exactly: the first entry is nonzero at its
    /// precision, or `x` is zero.
    pub fn norm_certified(&self, x: &TiltElt) -> bool {
        !self.base.is_zero(&x.entries[0]) || x.entries.iter().all(|e| self.base.is_zero(e))
    }

    /// `x ↦ x^p`: `[x_1^p, x_1, …, x_{p^{-(D-1)}}]`.
    pub fn frobenius(&self, x: &TiltElt) -> TiltElt {
        let mut entries = vec![self.pow_p_gain(&x.entries[0])];
        entries.extend(x.entries[..self.depth].iter().cloned());
        TiltElt { entries }
    }

    /// `x ↦ x^{1/p}`, an element of [`TiltRing::lowered`].
    pub fn inverse_frobenius(&self, x: &TiltElt) -> Result<TiltElt> {
        if self.depth == 0 {
            return Err(Error::ZeroDepth);
        }
        Ok(TiltElt { entries: x.entries[1..].to_vec() })
    }

    /// Drops the deepest entries, keeping `depth + 1`.
    pub fn truncate(&self, x: &TiltElt, depth: usize) -> TiltElt {
        TiltElt { entries: x.entries[..=depth.min(self.depth)].to_vec() }
    }
}

impl NormedRing for TiltRing {
    type Elem = TiltElt;

    fn p(&self) -> u64 {
        self.base.p()
    }

    fn caps(&self) -> Caps {
        Caps { char_p_perfect: true, pth_root_mod_p: true, ..Caps::default() }
    }

    fn name(&self) -> String {
        format!("tilt of {} (depth {})", self.base.name(), self.depth)
    }

    fn zero(&self) -> TiltElt {
        self.from_top_residue(&self.base.zero())
    }

    fn one(&self) -> TiltElt {
        self.from_top_residue(&self.base.one())
    }

    fn from_int(&self, n: &BigInt) -> TiltElt {
        self.from_top_residue(&self.base.from_int(n))
    }

    fn add(&self, a: &TiltElt, b: &TiltElt) -> TiltElt {
        self.tilt_add(a, b)
    }

    fn neg(&self, a: &TiltElt) -> TiltElt {
        if self.p() == 2 {
            a.clone()
        } else {
            TiltElt { entries: a.entries.iter().map(|e| self.base.neg(e)).collect() }
        }
    }

    fn mul(&self, a: &TiltElt, b: &TiltElt) -> TiltElt {
        self.tilt_mul(a, b)
    }

    fn is_zero(&self, a: &TiltElt) -> bool {
        a.entries.iter().all(|e| self.base.is_zero(e))
    }

    fn div_p(&self, _a: &TiltElt) -> Result<TiltElt> {
        Err(Error::CapabilityMissing("p-torsion-free"))
    }

    fn norm(&self, a: &TiltElt) -> Result<ExtNorm> {
        Ok(self.tilt_norm(a))
    }

    /// Roots live one level deeper; see [`TiltRing::inverse_frobenius`].
    fn pth_root_mod_p(&self, _a: &TiltElt) -> Result<Option<TiltElt>> {
        Err(Error::CapabilityMissing("p-th roots at fixed depth"))
    }

    fn format(&self, a: &TiltElt) -> String {
        let parts: Vec<String> = a.entries.iter().map(|e| self.base.format(e)).collect();
        format!("<{}>", parts.join("; "))
    }

    fn parse(&self, s: &str) -> Result<TiltElt> {
        let t = s.trim();
        let body = t
            .strip_prefix('<')
            .and_then(|r| r.strip_suffix('>'))
            .ok_or_else(|| Error::parse(0, "expected <e0; e1; ...>"))?;
        let entries = body.split(';').map(|e| self.base.parse(e.trim())).collect::<Result<Vec<_>>>()?;
        self.element(entries)
    }

    fn sample(&self, rng: &mut dyn RngCore) -> TiltElt {
        let r = self.base.sample(rng);
        self.from_top_residue(&r)
    }
}

impl fmt::Display for TiltElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|e| format!("{:?}/{}", e.coeffs(), e.prec())).collect();
        write!(f, "<{}>", parts.join("; "))
    }
}

fn char_p_sup<R: NormedRing>(x: &WittVec<R>, b: &BigRational) -> Result<ExtNorm> {
    let ring = x.ring();
    if !ring.caps().char_p_perfect {
        return Err(Error::CapabilityMissing("char-p-perfect"));
    }
    let p = ring.p();
    let mut best = ExtNorm::zero();
    for (j, c) in x.comps().iter().enumerate() {
        let shift = b * BigRational::from_integer(BigInt::from(j));
        let term = ring.norm(c)?.root(p.pow(j as u32)).shrink(&shift);
        best = best.max(term);
    }
    Ok(best)
}

/// `sup_j p^{−bj}|x_{p^j}|^{p^{−j}}` over the stored components.
pub fn charp_overconv_norm<R: NormedRing>(x: &WittVec<R>, b: &OvercParam) -> Result<ExtNorm> {
    char_p_sup(x, b.value())
}

/// `deg x_{p^j} ≤ Cjp^j + Dp^j` for every stored `j`.
pub fn degree_condition(ring: &PerfPoly, x: &WittVec<PerfPoly>, c: u64, d: u64) -> bool {
    let p = ring.p();
    x.comps().iter().enumerate().all(|(j, f)| match ring.degree(f) {
        None => true,
        Some(deg) => {
            let pj = p.pow(j as u32);
            deg <= BigRational::from_integer(BigInt::from(c * j as u64 * pj + d * pj))
        }
    })
}

/// The same condition read off the seminorm with `b = C`: the sup is at most `p^D`.
pub fn norm_condition(x: &WittVec<PerfPoly>, c: u64, d: u64) -> Result<bool> {
    let sup = char_p_sup(x, &BigRational::from_integer(BigInt::from(c)))?;
    Ok(sup <= ExtNorm::from_val(Val::int(-(d as i64))))
}

/// The inverse-limit element of `x ∈ W(R)` over a perfect ring: level `n`
/// is `F^{-n}x` restricted to `n + 1` components.
pub fn perfect_arrow(x: &WittVec<PerfPoly>, depth: usize) -> Result<ArrowElt<PerfPoly>> {
    let ring = x.ring();
    let p = ring.p();
    let mut levels = Vec::with_capacity(depth + 1);
    let mut cur: Vec<_> = x.comps().to_vec();
    let mut bound = ExtNorm::zero();
    for (j, c) in x.comps().iter().enumerate() {
        bound = bound.max(ring.norm(c)?.root(p.pow(j as u32)));
    }
    for n in 0..=depth {
        if n > 0 {
            cur = cur
                .iter()
                .map(|c| ring.pth_root_mod_p(c)?.ok_or(Error::InsufficientDepth { need: n, have: ring.depth() as usize }))
                .collect::<Result<_>>()?;
        }
        let mut comps: Vec<_> = cur.iter().take(n + 1).cloned().collect();
        comps.resize(n + 1, ring.zero());
        levels.push(WittVec::new(ring.clone(), comps)?);
    }
    let cert = LevelBound { from: 0, val: bound.into_val() };
    ArrowElt::new(ring.clone(), levels, Some(cert))
}

/// Maps `x ∈ W(R′)` to `Σ_n p^n [x_{p^n}^{p^{-n}}]` in `W⃗(R)` at depth `N`:
/// level `m` is `Σ_n p^n·[x_{p^n, p^{-m-n}}]`. Only `0 < b ≤ 1` is accepted.
/// The level bound is attached only when every component norm is certified.
pub fn untilt(x: &WittVec<TiltRing>, depth: usize, b: &OvercParam) -> Result<ArrowElt<Truncated>> {
    if b.value() > &BigRational::from_integer(BigInt::from(1)) {
        return Err(Error::BOutOfRange(b.to_string()));
    }
    let tilt = x.ring();
    let base = tilt.base();
    let p = base.p();
    let len = x.comps().len();
    let need = depth + len - 1;
    if need > tilt.depth() {
        return Err(Error::InsufficientDepth { need, have: tilt.depth() });
    }
    let mut levels = Vec::with_capacity(depth + 1);
    for m in 0..=depth {
        let mut acc = WittVec::zero(base, m);
        for (n, c) in x.comps().iter().enumerate() {
            let e = c.entry(m + n);
            if tilt.is_zero(c) || (base.is_zero(e) && e.prec() == base.precision()) {
                continue;
            }
            let pn = WittVec::from_integer(base, &BigInt::from(p).pow(n as u32), m);
            let t = WittVec::teichmuller(base, e, m);
            acc = acc.add(&pn.mul(&t)?)?;
        }
        levels.push(acc);
    }
    let cert = if x.comps().iter().all(|c| tilt.norm_certified(c)) {
        let mut val = Val::Infinite;
        for (j, c) in x.comps().iter().enumerate() {
            val = Val::min(val, tilt.tilt_norm(c).into_val().div_int(p.pow(j as u32)));
        }
        Some(LevelBound { from: 0, val })
    } else {
        None
    };
    ArrowElt::new(base.clone(), levels, cert)
}

/// Element of the tilt of `ℤ[ζ_{p^k}]/p^M` at depth `k` whose top entry is
/// `ζ_{p^k}`, i.e. the compatible system `ε = (1, ζ_p, ζ_{p^2}, …)`.
pub fn epsilon(tilt: &TiltRing) -> Result<TiltElt> {
    let k = tilt.base().shape().k() as usize;
    if k < tilt.depth() {
        return Err(Error::InsufficientDepth { need: tilt.depth(), have: k });
    }
    let z = tilt.base().zeta_pow(tilt.base().shape().order() / tilt.p().pow(tilt.depth() as u32) as usize);
    Ok(tilt.from_top_residue(&z))
}

/// Valuation of `|x|` as a rational, `None` for zero.
pub fn tilt_val(tilt: &TiltRing, x: &TiltElt) -> Option<BigRational> {
    tilt.tilt_norm(x).val().finite().cloned()
}

/// `p`-adic size of an exponent, for reports.
pub fn exponent_string(n: &ExtNorm) -> String {
    match n.val().finite() {
        None => "0".into(),
        Some(v) if v.is_zero() => "p^0".into(),
        Some(v) => format!("p^({})", -v),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_coherent(t: &TiltRing) -> Vec<TiltElt> {
        let b = t.base();
        let m = b.precision();
        let d = t.depth();
        let mods: Vec<u64> = (0..=d).map(|i| b.modulus((1 + (d - i) as u32).min(m))).collect();
        let total: u64 = mods.iter().product();
        let mut out = Vec::new();
        for mut idx in 0..total {
            let entries: Vec<TruncElem> = (0..=d)
                .map(|i| {
                    let v = idx % mods[i];
                    idx /= mods[i];
                    b.elem(vec![v], (1 + (d - i) as u32).min(m))
                })
                .collect();
            if let Ok(e) = t.element(entries) {
                out.push(e);
            }
        }
        out
    }

    #[test]
    fn tilt_of_integers_mod_pm_is_fp() {
        let t = TiltRing::new(Truncated::integers_mod(2, 3), 3);
        let all = all_coherent(&t);
        assert_eq!(all.len(), 2);
        for x in &all {
            for y in &all {
                let s = t.tilt_add(x, y);
                assert!(t.element(s.entries().to_vec()).is_ok());
            }
            assert_eq!(t.tilt_add(x, x), t.zero());
        }
        assert_eq!(t.tilt_add(&t.one(), &t.one()), t.zero());
    }

    #[test]
    fn epsilon_minus_one() {
        let base = Truncated::new(2, 4, 3);
        let t = TiltRing::new(base.clone(), 4);
        let e = epsilon(&t).unwrap();
        assert!(t.element(e.entries().to_vec()).is_ok());
        let d = t.add(&e, &t.neg(&t.one()));
        assert_eq!(t.tilt_norm(&d), ExtNorm::from_val(Val::int(2)));
        assert_eq!(t.tilt_norm(&t.one()), ExtNorm::one());
        assert_eq!(t.tilt_norm(&t.zero()), ExtNorm::zero());
    }

    #[test]
    fn frobenius_round_trip() {
        let base = Truncated::new(2, 3, 3);
        let t = TiltRing::new(base, 3);
        let e = epsilon(&t).unwrap();
        let x = t.add(&e, &t.one());
        let fx = t.frobenius(&x);
        assert_eq!(fx, t.mul(&x, &x));
        let back = t.inverse_frobenius(&fx).unwrap();
        assert_eq!(back, t.truncate(&x, 2));
    }

    #[test]
    fn charp_norm_examples() {
        let r = PerfPoly::new(2, 1, 4);
        let x = r.monomial(0, 1, 1).unwrap();
        let one = OvercParam::ratio(1, 1).unwrap();
        let t = WittVec::teichmuller(&r, &x, 0);
        assert_eq!(charp_overconv_norm(&t, &one).unwrap(), ExtNorm::from_val(Val::int(-1)));
        let v = WittVec::new(r.clone(), vec![x.clone(), r.mul(&x, &x)]).unwrap();
        for b in [OvercParam::ratio(1, 2).unwrap(), one.clone(), OvercParam::ratio(3, 1).unwrap()] {
            assert_eq!(charp_overconv_norm(&v, &b).unwrap(), ExtNorm::from_val(Val::int(-1)));
        }
        let a = perfect_arrow(&v, 3).unwrap();
        let n = a.arrow_norm(&one).unwrap();
        assert!(n.is_exact());
        assert_eq!(n.value, ExtNorm::from_val(Val::int(-1)));
    }

    #[test]
    fn untilt_basics() {
        let base = Truncated::new(2, 4, 3);
        let t = TiltRing::new(base.clone(), 4);
        let b = OvercParam::ratio(1, 2).unwrap();
        let one = WittVec::teichmuller(&t, &t.one(), 0);
        let u = untilt(&one, 2, &b).unwrap();
        assert_eq!(u, ArrowElt::from_integer(&base, &BigInt::from(1), 2));
        let z = untilt(&WittVec::zero(&t, 1), 2, &b).unwrap();
        assert!(z.levels().iter().all(|l| l.is_zero()));
        assert!(matches!(untilt(&one, 2, &OvercParam::ratio(2, 1).unwrap()), Err(Error::BOutOfRange(_))));
        assert!(matches!(untilt(&one, 5, &b), Err(Error::InsufficientDepth { .. })));
    }
}
