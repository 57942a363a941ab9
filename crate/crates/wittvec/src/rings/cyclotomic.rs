//! `ℚ(ζ_{p^k})` and `ℤ[ζ_{p^k}]` in the power basis `1, ζ, …, ζ^{φ-1}`.
//!
//! Valuations go through the basis `1, π, …, π^{φ-1}` with `π = 1 − ζ`,
//! where `v_π(Σ b_i π^i) = min_i(φ·v_p(b_i) + i)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Num, One, Zero};
use rand::{Rng, RngCore};

use super::parse::{format_rat, parse_int, parse_rat, split_list};
use super::{binomial, rat_mod, vp_int, Caps, NormedRing};
use crate::error::{Error, Result};
use crate::norm::{ExtNorm, Val};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CycloShape {
    p: u64,
    k: u32,
    order: usize,
    phi: usize,
    m: usize,
}

impl CycloShape {
    pub fn new(p: u64, k: u32) -> Self {
        assert!(p >= 2);
        let order = (p as usize).pow(k);
        let (phi, m) = if k == 0 { (1, 0) } else { (order / p as usize * (p as usize - 1), order / p as usize) };
        CycloShape { p, k, order, phi, m }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// `p^k`, the order of `ζ`.
    pub fn order(&self) -> usize {
        self.order
    }

    /// Degree of the field.
    pub fn phi(&self) -> usize {
        self.phi
    }

    /// Reduces a vector indexed by exponents mod `p^k` onto the power basis.
    pub fn fold<T: Num + Clone>(&self, mut acc: Vec<T>) -> Vec<T> {
        acc.resize(self.order.max(self.phi), T::zero());
        let p = self.p as usize;
        for e in (self.phi..self.order).rev() {
            let c = std::mem::replace(&mut acc[e], T::zero());
            if c.is_zero() {
                continue;
            }
            let base = e - (p - 1) * self.m;
            for t in 0..p - 1 {
                let idx = base + t * self.m;
                acc[idx] = acc[idx].clone() - c.clone();
            }
        }
        acc.truncate(self.phi);
        acc
    }

    pub fn mul<T: Num + Clone>(&self, a: &[T], b: &[T]) -> Vec<T> {
        let mut acc = vec![T::zero(); self.order];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let idx = (i + j) % self.order;
                acc[idx] = acc[idx].clone() + x.clone() * y.clone();
            }
        }
        self.fold(acc)
    }

    pub fn zeta_pow<T: Num + Clone>(&self, e: usize) -> Vec<T> {
        let mut acc = vec![T::zero(); self.order];
        acc[e % self.order] = T::one();
        self.fold(acc)
    }

    /// Applies `ζ ↦ ζ^a`.
    pub fn conjugate<T: Num + Clone>(&self, x: &[T], a: usize) -> Vec<T> {
        let mut acc = vec![T::zero(); self.order];
        for (j, c) in x.iter().enumerate() {
            let idx = (j * a) % self.order;
            acc[idx] = acc[idx].clone() + c.clone();
        }
        self.fold(acc)
    }

    /// Maps into `ℚ(ζ_{p^{k'}})` for `k' ≥ k` via `ζ_{p^k} = ζ_{p^{k'}}^{p^{k'-k}}`.
    pub fn embed<T: Num + Clone>(&self, x: &[T], target: &CycloShape) -> Vec<T> {
        assert!(target.p == self.p && target.k >= self.k);
        let step = target.order / self.order;
        let mut acc = vec![T::zero(); target.order];
        for (j, c) in x.iter().enumerate() {
            acc[j * step] = c.clone();
        }
        target.fold(acc)
    }

    /// Change of basis between `ζ^j` and `π^i`. The map is an involution.
    pub fn pi_transform(&self, c: &[BigInt]) -> Vec<BigInt> {
        if self.k == 0 {
            return c.to_vec();
        }
        (0..self.phi)
            .map(|i| {
                let mut s = BigInt::zero();
                for (j, cj) in c.iter().enumerate().skip(i) {
                    if !cj.is_zero() {
                        s += binomial(j as u64, i as u64) * cj;
                    }
                }
                if i % 2 == 1 {
                    -s
                } else {
                    s
                }
            })
            .collect()
    }

    /// The same change of basis on residues mod `q`.
    pub fn pi_transform_mod(&self, c: &[u64], q: u64) -> Vec<u64> {
        if self.k == 0 {
            return c.to_vec();
        }
        let binom = binomial_table_mod(self.phi, q);
        (0..self.phi)
            .map(|i| {
                let mut s: u128 = 0;
                for (j, &cj) in c.iter().enumerate().skip(i) {
                    s = (s + binom[j][i] as u128 * cj as u128) % q as u128;
                }
                let s = s as u64;
                if i % 2 == 1 {
                    (q - s) % q
                } else {
                    s
                }
            })
            .collect()
    }

    /// `v_π` of an integral vector in units where `v_π(p) = φ`.
    pub fn vpi_int(&self, c: &[BigInt]) -> Option<u64> {
        if self.k == 0 {
            return vp_int(self.p, &c[0]);
        }
        let b = self.pi_transform(c);
        b.iter()
            .enumerate()
            .filter_map(|(i, bi)| vp_int(self.p, bi).map(|v| v * self.phi as u64 + i as u64))
            .min()
    }

    pub fn val_from_vpi(&self, vpi: Option<u64>) -> Val {
        match vpi {
            None => Val::Infinite,
            Some(v) => Val::ratio(v as i64, self.phi as i64),
        }
    }

    /// Canonical p-th root of a residue vector mod p, if one exists.
    pub fn pth_root_residue(&self, a: &[u64]) -> Option<Vec<u64>> {
        if self.k == 0 {
            return Some(a.to_vec());
        }
        let p = self.p as usize;
        let ap = self.pi_transform_mod(a, self.p);
        if ap.iter().enumerate().any(|(i, &x)| i % p != 0 && x != 0) {
            return None;
        }
        let mut b = vec![0u64; self.phi];
        for i in 0..self.phi {
            if i * p < self.phi {
                b[i] = ap[i * p];
            }
        }
        Some(self.pi_transform_mod(&b, self.p))
    }

    /// Basis of the kernel of the p-power map on residues mod p.
    pub fn frobenius_kernel_residues(&self) -> Vec<Vec<u64>> {
        if self.k == 0 {
            return Vec::new();
        }
        (0..self.phi)
            .filter(|i| i * self.p as usize >= self.phi)
            .map(|i| {
                let mut e = vec![0u64; self.phi];
                e[i] = 1;
                self.pi_transform_mod(&e, self.p)
            })
            .collect()
    }

    /// Every root class of `a` mod p: the canonical root plus kernel
    /// combinations, up to `limit` entries.
    pub fn pth_roots_residue(&self, a: &[u64], limit: usize) -> Vec<Vec<u64>> {
        let Some(root) = self.pth_root_residue(a) else {
            return Vec::new();
        };
        let kernel = self.frobenius_kernel_residues();
        let p = self.p;
        let mut out = Vec::new();
        let total = (p as u128).checked_pow(kernel.len() as u32).unwrap_or(u128::MAX);
        let count = total.min(limit as u128) as u64;
        for idx in 0..count {
            let mut v = root.clone();
            let mut r = idx;
            for kv in &kernel {
                let d = r % p;
                r /= p;
                if d != 0 {
                    for (x, y) in v.iter_mut().zip(kv) {
                        *x = (*x + d * y) % p;
                    }
                }
            }
            out.push(v);
        }
        out
    }
}

fn binomial_table_mod(n: usize, q: u64) -> Vec<Vec<u64>> {
    let mut t = vec![vec![0u64; n]; n];
    for j in 0..n {
        t[j][0] = 1 % q;
        for i in 1..=j {
            let above = if i < j { t[j - 1][i] } else { 0 };
            t[j][i] = (t[j - 1][i - 1] + above) % q;
        }
    }
    t
}

fn coprime_exponents(shape: &CycloShape) -> Vec<usize> {
    (1..shape.order).filter(|a| a % shape.p as usize != 0).collect()
}

/// The field `ℚ(ζ_{p^k})` with the unique extension of the p-adic norm.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cyclotomic {
    shape: CycloShape,
}

impl Cyclotomic {
    pub fn new(p: u64, k: u32) -> Self {
        Cyclotomic { shape: CycloShape::new(p, k) }
    }

    pub fn shape(&self) -> &CycloShape {
        &self.shape
    }

    pub fn zeta(&self) -> Vec<BigRational> {
        self.shape.zeta_pow(1)
    }

    pub fn zeta_pow(&self, e: usize) -> Vec<BigRational> {
        self.shape.zeta_pow(e)
    }

    pub fn from_ints(&self, c: &[i64]) -> Vec<BigRational> {
        let mut v: Vec<BigRational> = c.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect();
        v.resize(self.shape.phi, BigRational::zero());
        v
    }

    pub fn embed(&self, x: &[BigRational], target: &Cyclotomic) -> Vec<BigRational> {
        self.shape.embed(x, &target.shape)
    }

    pub fn conjugate(&self, x: &[BigRational], a: usize) -> Vec<BigRational> {
        self.shape.conjugate(x, a)
    }

    pub fn inverse(&self, x: &[BigRational]) -> Option<Vec<BigRational>> {
        if x.iter().all(Zero::is_zero) {
            return None;
        }
        let mut prod = self.one();
        for a in coprime_exponents(&self.shape).into_iter().skip(1) {
            prod = self.shape.mul(&prod, &self.conjugate(x, a));
        }
        let n = self.shape.mul(x, &prod)[0].clone();
        Some(prod.into_iter().map(|c| c / &n).collect())
    }

    /// Field norm down to `ℚ`.
    pub fn field_norm(&self, x: &[BigRational]) -> BigRational {
        let mut prod = self.one();
        for a in coprime_exponents(&self.shape) {
            prod = self.shape.mul(&prod, &self.conjugate(x, a));
        }
        if self.shape.k == 0 {
            return x[0].clone();
        }
        prod[0].clone()
    }

    pub fn is_integral(&self, x: &[BigRational]) -> bool {
        x.iter().all(|c| c.is_integer())
    }

    pub fn to_integral(&self, x: &[BigRational]) -> Option<Vec<BigInt>> {
        x.iter().map(|c| if c.is_integer() { Some(c.to_integer()) } else { None }).collect()
    }

    pub fn from_integral(&self, x: &[BigInt]) -> Vec<BigRational> {
        x.iter().map(|c| BigRational::from_integer(c.clone())).collect()
    }

    /// True if `x/p^e` is an algebraic integer.
    pub fn divisible_by_p_pow(&self, x: &[BigRational], e: u32) -> bool {
        let q = BigRational::from_integer(super::big_pow(self.shape.p, e));
        x.iter().all(|c| (c / &q).is_integer())
    }

    fn residues_mod_p(&self, x: &[BigRational]) -> Option<Vec<u64>> {
        let p = BigInt::from(self.shape.p);
        x.iter()
            .map(|c| rat_mod(c, &p).map(|r| r.try_into().expect("residue fits")))
            .collect()
    }
}

fn format_list<T, F: Fn(&T) -> String>(v: &[T], f: F) -> String {
    let parts: Vec<String> = v.iter().map(f).collect();
    format!("[{}]", parts.join(", "))
}

impl NormedRing for Cyclotomic {
    type Elem = Vec<BigRational>;

    fn p(&self) -> u64 {
        self.shape.p
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
        format!("Q(zeta_{}) (p={})", self.shape.order, self.shape.p)
    }

    fn zero(&self) -> Self::Elem {
        vec![BigRational::zero(); self.shape.phi]
    }

    fn one(&self) -> Self::Elem {
        self.from_int(&BigInt::one())
    }

    fn from_int(&self, n: &BigInt) -> Self::Elem {
        let mut v = self.zero();
        v[0] = BigRational::from_integer(n.clone());
        v
    }

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        a.iter().map(|x| -x).collect()
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.iter().zip(b).map(|(x, y)| x - y).collect()
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.shape.mul(a, b)
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.iter().all(Zero::is_zero)
    }

    fn div_p(&self, a: &Self::Elem) -> Result<Self::Elem> {
        let p = BigRational::from_integer(BigInt::from(self.shape.p));
        Ok(a.iter().map(|x| x / &p).collect())
    }

    fn norm(&self, a: &Self::Elem) -> Result<ExtNorm> {
        if self.is_zero(a) {
            return Ok(ExtNorm::zero());
        }
        let d = a.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = a.iter().map(|c| (c * BigRational::from_integer(d.clone())).to_integer()).collect();
        let vpi = self.shape.vpi_int(&ints).expect("nonzero");
        let vd = vp_int(self.shape.p, &d).unwrap_or(0);
        let val = BigRational::new(
            BigInt::from(vpi) - BigInt::from(vd) * BigInt::from(self.shape.phi),
            BigInt::from(self.shape.phi),
        );
        Ok(ExtNorm::from_val(Val::Finite(val)))
    }

    fn pth_root_mod_p(&self, a: &Self::Elem) -> Result<Option<Self::Elem>> {
        let Some(res) = self.residues_mod_p(a) else {
            return Ok(None);
        };
        Ok(self
            .shape
            .pth_root_residue(&res)
            .map(|r| r.into_iter().map(|c| BigRational::from_integer(BigInt::from(c))).collect()))
    }

    fn pth_roots_mod_p(&self, a: &Self::Elem) -> Result<Vec<Self::Elem>> {
        let Some(res) = self.residues_mod_p(a) else {
            return Ok(Vec::new());
        };
        Ok(self
            .shape
            .pth_roots_residue(&res, 1 << 16)
            .into_iter()
            .map(|r| r.into_iter().map(|c| BigRational::from_integer(BigInt::from(c))).collect())
            .collect())
    }

    fn format(&self, a: &Self::Elem) -> String {
        format_list(a, format_rat)
    }

    fn parse(&self, s: &str) -> Result<Self::Elem> {
        if !s.trim_start().starts_with('[') {
            return Ok(self.from_rat(parse_rat(s, 0)?));
        }
        let parts = split_list(s)?;
        if parts.len() > self.shape.phi {
            return Err(Error::parse(0, format!("at most {} coefficients expected", self.shape.phi)));
        }
        let mut v = self.zero();
        for (i, (pos, t)) in parts.into_iter().enumerate() {
            v[i] = parse_rat(t, pos)?;
        }
        Ok(v)
    }

    fn sample(&self, rng: &mut dyn RngCore) -> Self::Elem {
        let dens = [1i64, 1, 1, 2, 3];
        let mut v: Vec<BigRational> = (0..self.shape.phi)
            .map(|_| {
                if rng.gen_bool(0.5) {
                    BigRational::zero()
                } else {
                    BigRational::new(
                        BigInt::from(rng.gen_range(-3i64..=3)),
                        BigInt::from(dens[rng.gen_range(0..dens.len())]),
                    )
                }
            })
            .collect();
        if rng.gen_bool(0.5) && self.shape.k > 0 {
            let pi = if self.shape.phi == 1 {
                self.from_int(&BigInt::from(2))
            } else {
                let mut pi = self.one();
                pi[1] = BigRational::from_integer(BigInt::from(-1));
                pi
            };
            let e = rng.gen_range(0..2 * self.shape.phi as u64);
            v = self.mul(&v, &self.pow(&pi, e));
        }
        v
    }
}

impl Cyclotomic {
    pub fn from_rat(&self, r: BigRational) -> Vec<BigRational> {
        let mut v = self.zero();
        v[0] = r;
        v
    }
}

/// The ring of integers `ℤ[ζ_{p^k}]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycloIntegers {
    shape: CycloShape,
}

impl CycloIntegers {
    pub fn new(p: u64, k: u32) -> Self {
        CycloIntegers { shape: CycloShape::new(p, k) }
    }

    pub fn shape(&self) -> &CycloShape {
        &self.shape
    }
}

impl NormedRing for CycloIntegers {
    type Elem = Vec<BigInt>;

    fn p(&self) -> u64 {
        self.shape.p
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
        format!("Z[zeta_{}] (p={})", self.shape.order, self.shape.p)
    }

    fn zero(&self) -> Self::Elem {
        vec![BigInt::zero(); self.shape.phi]
    }

    fn one(&self) -> Self::Elem {
        self.from_int(&BigInt::one())
    }

    fn from_int(&self, n: &BigInt) -> Self::Elem {
        let mut v = self.zero();
        v[0] = n.clone();
        v
    }

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        a.iter().map(|x| -x).collect()
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.iter().zip(b).map(|(x, y)| x - y).collect()
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.shape.mul(a, b)
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.iter().all(Zero::is_zero)
    }

    fn div_p(&self, a: &Self::Elem) -> Result<Self::Elem> {
        let p = BigInt::from(self.shape.p);
        a.iter()
            .map(|x| {
                let (q, r) = x.div_rem(&p);
                if r.is_zero() {
                    Ok(q)
                } else {
                    Err(Error::NotDivisible(self.format(a)))
                }
            })
            .collect()
    }

    fn norm(&self, a: &Self::Elem) -> Result<ExtNorm> {
        Ok(ExtNorm::from_val(self.shape.val_from_vpi(self.shape.vpi_int(a))))
    }

    fn pth_root_mod_p(&self, a: &Self::Elem) -> Result<Option<Self::Elem>> {
        let p = BigInt::from(self.shape.p);
        let res: Vec<u64> = a.iter().map(|c| c.mod_floor(&p).try_into().expect("residue")).collect();
        Ok(self.shape.pth_root_residue(&res).map(|r| r.into_iter().map(BigInt::from).collect()))
    }

    fn pth_roots_mod_p(&self, a: &Self::Elem) -> Result<Vec<Self::Elem>> {
        let p = BigInt::from(self.shape.p);
        let res: Vec<u64> = a.iter().map(|c| c.mod_floor(&p).try_into().expect("residue")).collect();
        Ok(self
            .shape
            .pth_roots_residue(&res, 1 << 16)
            .into_iter()
            .map(|r| r.into_iter().map(BigInt::from).collect())
            .collect())
    }

    fn format(&self, a: &Self::Elem) -> String {
        format_list(a, |c| c.to_string())
    }

    fn parse(&self, s: &str) -> Result<Self::Elem> {
        if !s.trim_start().starts_with('[') {
            return Ok(self.from_int(&parse_int(s, 0)?));
        }
        let parts = split_list(s)?;
        if parts.len() > self.shape.phi {
            return Err(Error::parse(0, format!("at most {} coefficients expected", self.shape.phi)));
        }
        let mut v = self.zero();
        for (i, (pos, t)) in parts.into_iter().enumerate() {
            v[i] = parse_int(t, pos)?;
        }
        Ok(v)
    }

    fn sample(&self, rng: &mut dyn RngCore) -> Self::Elem {
        (0..self.shape.phi)
            .map(|_| if rng.gen_bool(0.5) { BigInt::zero() } else { BigInt::from(rng.gen_range(-4i64..=4)) })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norm::rat;

    #[test]
    fn zeta_has_order_p_power() {
        for (p, k) in [(2, 3), (3, 2), (5, 1)] {
            let f = Cyclotomic::new(p, k);
            let z = f.zeta();
            let n = f.shape().order() as u64;
            assert_eq!(f.pow(&z, n), f.one());
            assert_ne!(f.pow(&z, n / p), f.one());
        }
    }

    #[test]
    fn pi_transform_is_involution() {
        let s = CycloShape::new(3, 2);
        let c: Vec<BigInt> = (0..6).map(|i| BigInt::from(i * i - 7)).collect();
        assert_eq!(s.pi_transform(&s.pi_transform(&c)), c);
    }

    #[test]
    fn uniformizer_valuation() {
        let f = Cyclotomic::new(2, 3);
        let pi = f.sub(&f.one(), &f.zeta());
        assert_eq!(f.norm(&pi).unwrap().val(), &Val::Finite(rat(1, 4)));
        let sqrt2 = f.add(&f.zeta(), &f.zeta_pow(7));
        assert_eq!(f.mul(&sqrt2, &sqrt2), f.from_int(&BigInt::from(2)));
        assert_eq!(f.norm(&sqrt2).unwrap().val(), &Val::Finite(rat(1, 2)));
    }

    #[test]
    fn norm_matches_field_norm() {
        let f = Cyclotomic::new(3, 2);
        let x = f.parse("[1/2, 3, 0, -1, 2, 1]").unwrap();
        let n = f.field_norm(&x);
        let v = super::super::vp_rat(3, &n).unwrap();
        assert_eq!(f.norm(&x).unwrap().val(), &Val::Finite(rat(v, 6)));
    }

    #[test]
    fn inverse_and_embedding() {
        let f = Cyclotomic::new(2, 2);
        let g = Cyclotomic::new(2, 4);
        let x = f.parse("[1, 1]").unwrap();
        let inv = f.inverse(&x).unwrap();
        assert_eq!(f.mul(&x, &inv), f.one());
        let xe = f.embed(&x, &g);
        assert_eq!(g.pow(&xe, 2), f.embed(&f.pow(&x, 2), &g));
    }

    #[test]
    fn roots_mod_p_in_pi_basis() {
        let r = CycloIntegers::new(2, 3);
        let two = r.from_int(&BigInt::from(2));
        let roots = r.pth_roots_mod_p(&two).unwrap();
        assert_eq!(roots[0], r.zero());
        assert_eq!(roots.len(), 4);
        let pi = r.parse("[1, -1]").unwrap();
        assert_eq!(r.pth_root_mod_p(&pi).unwrap(), None);
        let pi2 = r.mul(&pi, &pi);
        let b = r.pth_root_mod_p(&pi2).unwrap().unwrap();
        let diff = r.sub(&r.mul(&b, &b), &pi2);
        assert!(r.div_p(&diff).is_ok());
    }
}
