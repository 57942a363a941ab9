//! Finite-length p-typical Witt vectors `W_{p^n}(R)`.
//!
//! Components are indexed by `1, p, …, p^n` and stored at positions
//! `0..=n`. Over p-torsion-free rings arithmetic is carried out on ghost
//! components; rings of characteristic p use the universal polynomials.

use std::fmt;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::norm::ExtNorm;
use crate::rings::{Integers, NormedRing};
use crate::universal;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Mul,
}

/// `w_{p^k} = Σ_{i ≤ k} p^i x_{p^i}^{p^{k-i}}` for every `k`.
pub fn ghost_components<R: NormedRing>(ring: &R, x: &[R::Elem]) -> Vec<R::Elem> {
    let p = ring.p();
    let mut pw: Vec<R::Elem> = Vec::with_capacity(x.len());
    let mut out = Vec::with_capacity(x.len());
    for (k, xk) in x.iter().enumerate() {
        pw.push(xk.clone());
        let mut w = ring.zero();
        let mut pi = BigInt::from(1);
        for t in pw.iter() {
            w = ring.add(&w, &ring.mul(&ring.from_int(&pi), t));
            pi *= p;
        }
        out.push(w);
        if k + 1 < x.len() {
            for t in pw.iter_mut() {
                *t = ring.pow(t, p);
            }
        }
    }
    out
}

/// Inverts the ghost map by `p^k x_{p^k} = w_{p^k} − Σ_{i<k} p^i x_{p^i}^{p^{k-i}}`.
pub fn unghost_components<R: NormedRing>(ring: &R, w: &[R::Elem]) -> Result<Vec<R::Elem>> {
    let p = ring.p();
    let mut pw: Vec<R::Elem> = Vec::with_capacity(w.len());
    let mut out = Vec::with_capacity(w.len());
    for (k, wk) in w.iter().enumerate() {
        let mut t = wk.clone();
        let mut pi = BigInt::from(1);
        for s in pw.iter() {
            t = ring.sub(&t, &ring.mul(&ring.from_int(&pi), s));
            pi *= p;
        }
        for _ in 0..k {
            t = ring.div_p(&t).map_err(|e| match e {
                Error::NotDivisible(s) => Error::NotIntegral(format!("component {}: {}", k, s)),
                other => other,
            })?;
        }
        out.push(t.clone());
        pw.push(t);
        if k + 1 < w.len() {
            for s in pw.iter_mut() {
                *s = ring.pow(s, p);
            }
        }
    }
    Ok(out)
}

fn check_lengths<T>(x: &[T], y: &[T]) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch(x.len(), y.len()));
    }
    if x.is_empty() {
        return Err(Error::LengthZero);
    }
    Ok(())
}

fn transport_error(e: Error) -> Error {
    match e {
        Error::NotIntegral(s) => Error::IntegralityViolation(s),
        other => other,
    }
}

/// Default Witt addition and multiplication.
pub fn generic_binary<R: NormedRing>(ring: &R, op: BinOp, x: &[R::Elem], y: &[R::Elem]) -> Result<Vec<R::Elem>> {
    check_lengths(x, y)?;
    let caps = ring.caps();
    if caps.torsion_free {
        let gx = ghost_components(ring, x);
        let gy = ghost_components(ring, y);
        let g: Vec<R::Elem> = gx
            .iter()
            .zip(&gy)
            .map(|(a, b)| match op {
                BinOp::Add => ring.add(a, b),
                BinOp::Mul => ring.mul(a, b),
            })
            .collect();
        return unghost_components(ring, &g).map_err(transport_error);
    }
    let n = (x.len() - 1) as u32;
    let kind = match op {
        BinOp::Add => universal::PolyKind::Sum,
        BinOp::Mul => universal::PolyKind::Prod,
    };
    let polys = universal::family(kind, ring.p(), n)?;
    Ok((0..x.len()).map(|i| polys[i].eval(ring, &x[..=i], &y[..=i])).collect())
}

/// Default Witt Frobenius `W_{p^{n+1}} → W_{p^n}`.
pub fn generic_frobenius<R: NormedRing>(ring: &R, x: &[R::Elem]) -> Result<Vec<R::Elem>> {
    if x.len() < 2 {
        return Err(Error::LengthZero);
    }
    let caps = ring.caps();
    let p = ring.p();
    if caps.char_p_perfect {
        return Ok(x[..x.len() - 1].iter().map(|a| ring.pow(a, p)).collect());
    }
    if caps.torsion_free {
        let g = ghost_components(ring, x);
        return unghost_components(ring, &g[1..]).map_err(transport_error);
    }
    let n = (x.len() - 2) as u32;
    let polys = universal::family(universal::PolyKind::Frob, p, n)?;
    let pe = ring.from_int(&BigInt::from(p));
    Ok((0..x.len() - 1)
        .map(|i| {
            let f = polys[i].eval(ring, &x[..=i + 1], &[]);
            let lead = ring.add(&ring.pow(&x[i], p), &ring.mul(&pe, &x[i + 1]));
            ring.add(&lead, &ring.mul(&pe, &f))
        })
        .collect())
}

/// A Witt vector of length exponent `n`, i.e. with `n + 1` components.
#[derive(Clone, Debug, PartialEq)]
pub struct WittVec<R: NormedRing> {
    ring: R,
    comps: Vec<R::Elem>,
}

/// Ghost components of a Witt vector.
#[derive(Clone, Debug, PartialEq)]
pub struct GhostVec<R: NormedRing> {
    ring: R,
    comps: Vec<R::Elem>,
}

impl<R: NormedRing> WittVec<R> {
    pub fn new(ring: R, comps: Vec<R::Elem>) -> Result<Self> {
        if comps.is_empty() {
            return Err(Error::LengthZero);
        }
        Ok(WittVec { ring, comps })
    }

    pub fn zero(ring: &R, n: usize) -> Self {
        WittVec { ring: ring.clone(), comps: vec![ring.zero(); n + 1] }
    }

    pub fn one(ring: &R, n: usize) -> Self {
        Self::teichmuller(ring, &ring.one(), n)
    }

    /// `[r] = (r, 0, …, 0)`.
    pub fn teichmuller(ring: &R, r: &R::Elem, n: usize) -> Self {
        let mut comps = vec![ring.zero(); n + 1];
        comps[0] = r.clone();
        WittVec { ring: ring.clone(), comps }
    }

    /// The image of the integer `m`, whose ghost components all equal `m`.
    pub fn from_integer(ring: &R, m: &BigInt, n: usize) -> Self {
        let z = Integers::new(ring.p());
        let comps = unghost_components(&z, &vec![m.clone(); n + 1]).expect("integers have integral Witt components");
        WittVec { ring: ring.clone(), comps: comps.iter().map(|c| ring.from_int(c)).collect() }
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn comps(&self) -> &[R::Elem] {
        &self.comps
    }

    pub fn comp(&self, i: usize) -> &R::Elem {
        &self.comps[i]
    }

    pub fn into_comps(self) -> Vec<R::Elem> {
        self.comps
    }

    /// Length exponent `n`.
    pub fn level(&self) -> usize {
        self.comps.len() - 1
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch);
        }
        check_lengths(&self.comps, &other.comps)
    }

    fn wrap(&self, comps: Vec<R::Elem>) -> Self {
        WittVec { ring: self.ring.clone(), comps }
    }

    pub fn ghost(&self) -> GhostVec<R> {
        GhostVec { ring: self.ring.clone(), comps: ghost_components(&self.ring, &self.comps) }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.wrap(self.ring.witt_add(&self.comps, &other.comps)?))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.wrap(self.ring.witt_mul(&self.comps, &other.comps)?))
    }

    pub fn neg(&self) -> Result<Self> {
        if self.ring.p() % 2 == 1 {
            return Ok(self.wrap(self.comps.iter().map(|c| self.ring.neg(c)).collect()));
        }
        let m1 = Self::from_integer(&self.ring, &BigInt::from(-1), self.level());
        self.mul(&m1)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg()?)
    }

    /// `[r]·x = (r x_1, r^p x_p, r^{p^2} x_{p^2}, …)`.
    pub fn teichmuller_mul(&self, r: &R::Elem) -> Self {
        let p = self.ring.p();
        let mut rp = r.clone();
        let mut comps = Vec::with_capacity(self.comps.len());
        for c in &self.comps {
            comps.push(self.ring.mul(&rp, c));
            rp = self.ring.pow(&rp, p);
        }
        self.wrap(comps)
    }

    pub fn frobenius(&self) -> Result<Self> {
        Ok(self.wrap(self.ring.witt_frobenius(&self.comps)?))
    }

    pub fn frobenius_iter(&self, times: usize) -> Result<Self> {
        let mut x = self.clone();
        for _ in 0..times {
            x = x.frobenius()?;
        }
        Ok(x)
    }

    /// `V(x) = (0, x_1, x_p, …)`.
    pub fn verschiebung(&self) -> Self {
        let mut comps = Vec::with_capacity(self.comps.len() + 1);
        comps.push(self.ring.zero());
        comps.extend(self.comps.iter().cloned());
        self.wrap(comps)
    }

    /// Keeps the components `x_1, …, x_{p^m}`.
    pub fn restrict(&self, m: usize) -> Result<Self> {
        if m > self.level() {
            return Err(Error::DepthExceeded { requested: m, available: self.level() });
        }
        Ok(self.wrap(self.comps[..=m].to_vec()))
    }

    /// Appends zero components up to length exponent `m`.
    pub fn extend_zero(&self, m: usize) -> Self {
        let mut comps = self.comps.clone();
        comps.resize(m + 1, self.ring.zero());
        self.wrap(comps)
    }

    /// `|x|_W = sup_i |x_{p^i}|^{1/p^i}`.
    pub fn witt_norm(&self) -> Result<ExtNorm> {
        let p = self.ring.p();
        let mut out = ExtNorm::zero();
        let mut scale = 1u64;
        for c in &self.comps {
            out = out.max(self.ring.norm(c)?.root(scale));
            scale *= p;
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| self.ring.is_zero(c))
    }

    pub fn map<S: NormedRing, F: Fn(&R::Elem) -> S::Elem>(&self, target: &S, f: F) -> WittVec<S> {
        WittVec { ring: target.clone(), comps: self.comps.iter().map(f).collect() }
    }
}

impl<R: NormedRing> GhostVec<R> {
    pub fn new(ring: R, comps: Vec<R::Elem>) -> Result<Self> {
        if comps.is_empty() {
            return Err(Error::LengthZero);
        }
        Ok(GhostVec { ring, comps })
    }

    pub fn comps(&self) -> &[R::Elem] {
        &self.comps
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn unghost(&self) -> Result<WittVec<R>> {
        let comps = unghost_components(&self.ring, &self.comps)?;
        Ok(WittVec { ring: self.ring.clone(), comps })
    }
}

impl<R: NormedRing> fmt::Display for WittVec<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.comps.iter().map(|c| self.ring.format(c)).collect();
        write!(f, "W(p={}; {})", self.ring.p(), parts.join(", "))
    }
}

impl<R: NormedRing> fmt::Display for GhostVec<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.comps.iter().map(|c| self.ring.format(c)).collect();
        write!(f, "G(p={}; {})", self.ring.p(), parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norm::Val;
    use crate::rings::{big, PerfPoly, Rationals, Truncated};

    fn zv(p: u64, c: &[i64]) -> WittVec<Integers> {
        WittVec::new(Integers::new(p), c.iter().map(|&x| big(x)).collect()).unwrap()
    }

    #[test]
    fn ghost_and_unghost_examples() {
        assert_eq!(zv(2, &[1, 1]).ghost().comps(), &[big(1), big(3)]);
        let z = Integers::new(2);
        let g = GhostVec::new(z.clone(), vec![big(3), big(5)]).unwrap();
        assert_eq!(g.unghost().unwrap(), zv(2, &[3, -2]));
        let g = GhostVec::new(z.clone(), vec![big(2), big(2)]).unwrap();
        assert_eq!(g.unghost().unwrap(), zv(2, &[2, -1]));
        let g = GhostVec::new(z, vec![big(1), big(2)]).unwrap();
        assert!(matches!(g.unghost(), Err(Error::NotIntegral(_))));
    }

    #[test]
    fn teichmuller_sum_and_frobenius() {
        let one = zv(2, &[1, 0]);
        assert_eq!(one.add(&one).unwrap(), zv(2, &[2, -1]));
        assert_eq!(zv(2, &[3, 5]).frobenius().unwrap(), zv(2, &[19]));
        assert_eq!(zv(2, &[0, 1]).frobenius().unwrap(), zv(2, &[2]));
        assert!(matches!(zv(2, &[4]).frobenius(), Err(Error::LengthZero)));
        assert_eq!(zv(2, &[3]).verschiebung(), zv(2, &[0, 3]));
        assert_eq!(zv(2, &[1]).verschiebung().ghost().comps(), &[big(0), big(2)]);
        assert_eq!(zv(2, &[5, 7]).restrict(0).unwrap(), zv(2, &[5]));
        assert_eq!(WittVec::from_integer(&Integers::new(2), &big(2), 2), zv(2, &[2, -1, -4]));
    }

    #[test]
    fn mismatched_lengths_are_rejected() {
        assert_eq!(zv(2, &[1]).add(&zv(2, &[1, 0])), Err(Error::LengthMismatch(1, 2)));
        assert_eq!(zv(2, &[1]).add(&zv(3, &[1])), Err(Error::RingMismatch));
    }

    #[test]
    fn witt_norm_example() {
        let q = Rationals::new(2);
        let x = WittVec::new(q.clone(), vec![q.from_i64(2), q.from_i64(-1)]).unwrap();
        assert_eq!(x.witt_norm().unwrap(), ExtNorm::one());
        let t = WittVec::teichmuller(&q, &q.from_i64(4), 3);
        assert_eq!(t.witt_norm().unwrap().val(), &Val::int(2));
    }

    #[test]
    fn negation_over_integers() {
        let x = zv(2, &[3, -2, 5]);
        let s = x.add(&x.neg().unwrap()).unwrap();
        assert!(s.is_zero());
        let y = zv(3, &[4, 1, -2]);
        assert!(y.add(&y.neg().unwrap()).unwrap().is_zero());
    }

    #[test]
    fn truncated_and_char_p_agree_with_integers() {
        let z = Integers::new(2);
        let t = Truncated::integers_mod(2, 5);
        let x = zv(2, &[3, -2, 5]);
        let y = zv(2, &[7, 1, -9]);
        let sum = x.add(&y).unwrap().map(&t, |c| t.from_int(c));
        let tx = x.map(&t, |c| t.from_int(c));
        let ty = y.map(&t, |c| t.from_int(c));
        assert_eq!(tx.add(&ty).unwrap(), sum);
        let prod = x.mul(&y).unwrap().map(&t, |c| t.from_int(c));
        assert_eq!(tx.mul(&ty).unwrap(), prod);
        let f = x.frobenius().unwrap().map(&t, |c| t.from_int(c));
        assert_eq!(tx.frobenius().unwrap(), f);
        let _ = z;

        let r = PerfPoly::new(2, 1, 2);
        let a = WittVec::new(r.clone(), vec![r.parse("x").unwrap(), r.parse("1").unwrap()]).unwrap();
        let b = WittVec::new(r.clone(), vec![r.parse("x^(1/2)").unwrap(), r.parse("x").unwrap()]).unwrap();
        assert_eq!(a.add(&b).unwrap().sub(&b).unwrap(), a);
        assert_eq!(a.frobenius().unwrap().comps(), &[r.parse("x^2").unwrap()]);
    }
}
