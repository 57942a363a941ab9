//! Witt-perfectness, p-power root sequences and solving `F(y) = x`.
//!
//! A ring is tested through its residues mod `p²`: the p-power map must
//! be onto mod `p`, and every `pa` must be a p-th power mod `p²`. In the
//! cyclotomic tower `ℤ[ζ_{p^k}]` the roots for one level are searched in
//! the next one.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::norm::{ExtNorm, Val};
use crate::rings::{vp_int, CycloIntegers, CycloShape, Cyclotomic, NormedRing, Truncated};
use crate::witt::{ghost_components, unghost_components, WittVec};

/// Ring instances with finitely many residues mod `p²`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Instance {
    Integers { p: u64 },
    /// `ℤ[ζ_{p^k}]`.
    CycloIntegers { p: u64, k: u32 },
    /// `ℤ[ζ_{p^k}]/p^m`.
    Truncated { p: u64, k: u32, m: u32 },
    /// The directed tower `ℤ[ζ_{p^{b}}] ⊂ ℤ[ζ_{p^{b+1}}] ⊂ …` up to level
    /// `k` above its base `b`.
    Tower { p: u64, k: usize },
}

impl Instance {
    pub fn p(&self) -> u64 {
        match *self {
            Instance::Integers { p }
            | Instance::CycloIntegers { p, .. }
            | Instance::Truncated { p, .. }
            | Instance::Tower { p, .. } => p,
        }
    }

    pub fn name(&self) -> String {
        match *self {
            Instance::Integers { .. } => "Z".into(),
            Instance::CycloIntegers { p, k } => format!("Z[zeta_{}]", p.pow(k)),
            Instance::Truncated { p, k, m } if k == 0 => format!("Z/{}^{}", p, m),
            Instance::Truncated { p, k, m } => format!("Z[zeta_{}]/{}^{}", p.pow(k), p, m),
            Instance::Tower { p, k } => format!("Z[zeta_{}^inf] to level {}", p, k),
        }
    }
}

/// Exponent of the first tower level: `ℤ[ζ_4]` for `p = 2`, `ℤ[ζ_p]` otherwise.
pub fn tower_base(p: u64) -> u32 {
    if p == 2 {
        2
    } else {
        1
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Condition {
    /// Some residue has no p-th root mod `p`.
    FrobeniusModP,
    /// Some `pa` is not a p-th power mod `p²`.
    PaRoot,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Yes,
    No,
    YesUpToLevel(usize),
}

/// An element `a` of the given level, as residues mod `p` in the basis
/// `1, ζ, …`, for which the named condition fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub condition: Condition,
    pub level: usize,
    pub a: Vec<u64>,
}

/// `b^p ≡ p·a (mod p²)`, with `b` taken in the ring one level up for towers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootWitness {
    pub a: Vec<u64>,
    pub b: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerfectVerdict {
    pub verdict: Verdict,
    pub frobenius_surjective: bool,
    pub pa_roots: bool,
    pub counterexample: Option<Counterexample>,
    /// A root of `p·1`, when one exists.
    pub witness: Option<RootWitness>,
}

/// Residues of `ℤ[ζ_{p^k}]` modulo `p^e`.
struct Residues {
    shape: CycloShape,
    q: u64,
}

impl Residues {
    fn new(shape: CycloShape, e: u32) -> Self {
        let q = shape.p().pow(e);
        Residues { shape, q }
    }

    fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let a: Vec<i128> = a.iter().map(|&x| x as i128).collect();
        let b: Vec<i128> = b.iter().map(|&x| x as i128).collect();
        let q = self.q as i128;
        self.shape.mul(&a, &b).into_iter().map(|x| x.rem_euclid(q) as u64).collect()
    }

    fn pow(&self, a: &[u64], e: u64) -> Vec<u64> {
        let mut acc = vec![0u64; self.shape.phi()];
        acc[0] = 1 % self.q;
        for _ in 0..e {
            acc = self.mul(&acc, a);
        }
        acc
    }

    fn embed(&self, a: &[u64], target: &Residues) -> Vec<u64> {
        let a: Vec<i128> = a.iter().map(|&x| x as i128).collect();
        let q = target.q as i128;
        self.shape.embed(&a, &target.shape).into_iter().map(|x| x.rem_euclid(q) as u64).collect()
    }
}

/// Row-reduced `F_p`-span of generator vectors, each row remembering its
/// combination of generators.
struct Span {
    p: u64,
    rows: Vec<(usize, Vec<u64>, Vec<u64>)>,
}

impl Span {
    fn new(p: u64, gens: &[Vec<u64>]) -> Self {
        let mut span = Span { p, rows: Vec::new() };
        for (i, g) in gens.iter().enumerate() {
            let mut combo = vec![0u64; gens.len()];
            combo[i] = 1;
            let (v, c) = span.reduce(g.clone(), combo);
            if let Some(piv) = v.iter().position(|&x| x != 0) {
                let inv = inv_mod(v[piv], p);
                let v = v.iter().map(|x| x * inv % p).collect();
                let c = c.iter().map(|x| x * inv % p).collect();
                span.rows.push((piv, v, c));
            }
        }
        span
    }

    fn reduce(&self, mut v: Vec<u64>, mut c: Vec<u64>) -> (Vec<u64>, Vec<u64>) {
        let p = self.p;
        for (piv, rv, rc) in &self.rows {
            let f = v[*piv];
            if f != 0 {
                for (x, y) in v.iter_mut().zip(rv) {
                    *x = (*x + (p - f) * y) % p;
                }
                for (x, y) in c.iter_mut().zip(rc) {
                    *x = (*x + (p - f) * y) % p;
                }
            }
        }
        (v, c)
    }

    fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Coefficients expressing `t` through the generators.
    fn solve(&self, t: &[u64], n_gens: usize) -> Option<Vec<u64>> {
        let (v, c) = self.reduce(t.to_vec(), vec![0; n_gens]);
        if v.iter().any(|&x| x != 0) {
            return None;
        }
        Some(c.iter().map(|x| (self.p - x) % self.p).collect())
    }
}

fn inv_mod(a: u64, p: u64) -> u64 {
    (1..p).find(|c| c * a % p == 1).expect("unit mod p")
}

fn combine(gens: &[Vec<u64>], coeffs: &[u64], len: usize, q: u64) -> Vec<u64> {
    let mut out = vec![0u64; len];
    for (g, &c) in gens.iter().zip(coeffs) {
        for (x, y) in out.iter_mut().zip(g) {
            *x = (*x + c * y) % q;
        }
    }
    out
}

/// The map `b ↦ (b^p mod p²)/p mod p` on the kernel of the p-power map mod
/// `p`. Kernel elements have valuation at least `1/p`, so the cross terms
/// of `(b + c)^p` vanish mod `p²` and the map is `F_p`-linear.
struct PaMap {
    kernel: Vec<Vec<u64>>,
    span: Span,
}

impl PaMap {
    fn new(shape: &CycloShape) -> Self {
        let p = shape.p();
        let r2 = Residues::new(shape.clone(), 2);
        let kernel = shape.frobenius_kernel_residues();
        let images: Vec<Vec<u64>> = kernel
            .iter()
            .map(|b| r2.pow(b, p).iter().map(|x| x / p % p).collect())
            .collect();
        PaMap { span: Span::new(p, &images), kernel }
    }

    /// A residue class `b` with `b^p ≡ p·a (mod p²)`, checked directly.
    fn root(&self, shape: &CycloShape, a: &[u64]) -> Option<Vec<u64>> {
        let p = shape.p();
        let coeffs = self.span.solve(a, self.kernel.len())?;
        let b = combine(&self.kernel, &coeffs, shape.phi(), p);
        let r2 = Residues::new(shape.clone(), 2);
        let pa: Vec<u64> = a.iter().map(|x| x * p % (p * p)).collect();
        assert_eq!(r2.pow(&b, p), pa, "p-th power of a kernel combination");
        Some(b)
    }
}

fn unit_vector(n: usize, i: usize) -> Vec<u64> {
    let mut v = vec![0u64; n];
    v[i] = 1;
    v
}

/// Checks one inclusion `A_lo ⊂ A_hi`: roots for residues of `A_lo` are
/// sought in `A_hi`. Both maps are `F_p`-linear, so it suffices to decide
/// the basis `1, ζ, …` of `A_lo/p`.
fn check_step(lo: &CycloShape, hi: &CycloShape, e: u32, level: usize) -> (bool, bool, Option<Counterexample>, Option<RootWitness>) {
    let p = lo.p();
    let rlo = Residues::new(lo.clone(), 1);
    let rhi = Residues::new(hi.clone(), 1);
    let basis: Vec<Vec<u64>> = (0..lo.phi()).map(|i| unit_vector(lo.phi(), i)).collect();
    let frob_images: Vec<Vec<u64>> = (0..hi.phi()).map(|i| rhi.pow(&unit_vector(hi.phi(), i), p)).collect();
    let frob = Span::new(p, &frob_images);
    let frob_cx = basis
        .iter()
        .find(|a| frob.solve(&rlo.embed(a, &rhi), hi.phi()).is_none())
        .map(|a| Counterexample { condition: Condition::FrobeniusModP, level, a: a.clone() });
    let one = basis[0].clone();
    if e < 2 {
        let w = RootWitness { a: one, b: vec![0; hi.phi()] };
        return (frob_cx.is_none(), true, frob_cx, Some(w));
    }
    let pa = PaMap::new(hi);
    let pa_cx = if pa.span.dim() == hi.phi() {
        None
    } else {
        basis
            .iter()
            .find(|a| pa.root(hi, &rlo.embed(a, &rhi)).is_none())
            .map(|a| Counterexample { condition: Condition::PaRoot, level, a: a.clone() })
    };
    let witness = pa.root(hi, &rlo.embed(&one, &rhi)).map(|b| RootWitness { a: one, b });
    (frob_cx.is_none(), pa_cx.is_none(), pa_cx.or(frob_cx), witness)
}

/// Number of levels between a tower ring and the ring holding the roots
/// for its residues: one for `p = 2`, two for odd `p`.
pub fn tower_hop(p: u64) -> u32 {
    if p == 2 {
        1
    } else {
        2
    }
}

/// Decides both conditions on residues mod `p²`.
pub fn witt_perfect_test(inst: &Instance) -> Result<PerfectVerdict> {
    match *inst {
        Instance::Integers { p } => Ok(single(&CycloShape::new(p, 0), 2)),
        Instance::CycloIntegers { p, k } => Ok(single(&CycloShape::new(p, k), 2)),
        Instance::Truncated { p, k, m } => Ok(single(&CycloShape::new(p, k), m.min(2))),
        Instance::Tower { p, k } => {
            let base = tower_base(p);
            let mut witness = None;
            for j in 0..=k {
                let lo = CycloShape::new(p, base + j as u32);
                let hi = CycloShape::new(p, base + j as u32 + tower_hop(p));
                let (f, r, cx, w) = check_step(&lo, &hi, 2, j);
                if j == 0 {
                    witness = w;
                }
                if !(f && r) {
                    let verdict = if j == 0 { Verdict::No } else { Verdict::YesUpToLevel(j - 1) };
                    return Ok(PerfectVerdict { verdict, frobenius_surjective: f, pa_roots: r, counterexample: cx, witness });
                }
            }
            Ok(PerfectVerdict {
                verdict: Verdict::YesUpToLevel(k),
                frobenius_surjective: true,
                pa_roots: true,
                counterexample: None,
                witness,
            })
        }
    }
}

fn single(shape: &CycloShape, e: u32) -> PerfectVerdict {
    let (f, r, cx, w) = check_step(shape, shape, e, 0);
    PerfectVerdict {
        verdict: if f && r { Verdict::Yes } else { Verdict::No },
        frobenius_surjective: f,
        pa_roots: r,
        counterexample: cx,
        witness: w,
    }
}

/// Some `b ∈ ℤ[ζ_{p^k}]` with `b^p ≡ p·a (mod p²)`, as residues mod `p`.
pub fn pa_root(shape: &CycloShape, a: &[BigInt]) -> Option<Vec<BigInt>> {
    let p = BigInt::from(shape.p());
    let mut target: Vec<u64> = a.iter().map(|x| x.mod_floor(&p).to_u64().expect("residue")).collect();
    target.resize(shape.phi(), 0);
    PaMap::new(shape).root(shape, &target).map(|b| b.into_iter().map(BigInt::from).collect())
}

/// `x_1, …, x_n` with `x_1^p ≡ p (mod p²)` and `x_{k+1}^p ≡ x_k (mod p)`,
/// all embedded in one cyclotomic ring of integers.
#[derive(Clone, Debug, PartialEq)]
pub struct RootSequence {
    ring: CycloIntegers,
    elems: Vec<Vec<BigInt>>,
}

impl RootSequence {
    /// Verifies both congruences.
    pub fn new(ring: CycloIntegers, elems: Vec<Vec<BigInt>>) -> Result<Self> {
        let p = ring.p();
        let pb = BigInt::from(p);
        let divisible = |v: &[BigInt], m: &BigInt| v.iter().all(|c| c.is_multiple_of(m));
        for (i, x) in elems.iter().enumerate() {
            let xp = ring.pow(x, p);
            let (prev, modulus) = if i == 0 { (ring.from_int(&pb), &pb * &pb) } else { (elems[i - 1].clone(), pb.clone()) };
            if !divisible(&ring.sub(&xp, &prev), &modulus) {
                return Err(Error::RootSequence(i + 1));
            }
        }
        Ok(RootSequence { ring, elems })
    }

    pub fn ring(&self) -> &CycloIntegers {
        &self.ring
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    /// `x_k` for `k ≥ 1`.
    pub fn get(&self, k: usize) -> &Vec<BigInt> {
        &self.elems[k - 1]
    }

    pub fn elems(&self) -> &[Vec<BigInt>] {
        &self.elems
    }
}

/// Level of the tower holding `x_n`.
pub fn root_sequence_level(_p: u64, n: usize) -> u32 {
    n as u32 + 2
}

/// Builds `x_1, …, x_n` with `x_k ∈ ℤ[ζ_{p^{k+2}}]`. For `p = 2`,
/// `x_k = ζ_{2^{k+2}} + ζ_{2^{k+2}}^{-1}`; for odd `p`, `x_1` is a root of
/// `p` mod `p²` and `x_{k+1}` the canonical root of `x_k` mod `p`.
pub fn build_root_sequence(p: u64, n: usize) -> Result<RootSequence> {
    let top = root_sequence_level(p, n.max(1));
    let ring = CycloIntegers::new(p, top);
    let mut elems = Vec::with_capacity(n);
    if p == 2 {
        for k in 1..=n {
            let sub = CycloShape::new(2, k as u32 + 2);
            let mut x: Vec<BigInt> = sub.zeta_pow(1);
            let inv: Vec<BigInt> = sub.zeta_pow(sub.order() - 1);
            x = x.iter().zip(&inv).map(|(a, b)| a + b).collect();
            elems.push(sub.embed(&x, ring.shape()));
        }
    } else if n > 0 {
        let s1 = CycloShape::new(p, 3);
        let x1 = pa_root(&s1, &[BigInt::one()]).ok_or(Error::CapabilityMissing("p-th root of p mod p^2"))?;
        let mut prev = x1;
        let mut prev_shape = s1;
        elems.push(prev_shape.embed(&prev, ring.shape()));
        for k in 2..=n {
            let sh = CycloShape::new(p, k as u32 + 2);
            let emb = prev_shape.embed(&prev, &sh);
            let pb = BigInt::from(p);
            let res: Vec<u64> = emb.iter().map(|c| c.mod_floor(&pb).to_u64().expect("residue")).collect();
            let root = sh.pth_root_residue(&res).ok_or(Error::CapabilityMissing("p-th root mod p"))?;
            prev = root.into_iter().map(BigInt::from).collect();
            prev_shape = sh;
            elems.push(prev_shape.embed(&prev, ring.shape()));
        }
    }
    RootSequence::new(ring, elems)
}

/// How a sample relates to the ideal `(x_n^m, p)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    /// `x = u·x_n^m + w·p`, verified exactly.
    Contained { u: Vec<BigInt>, w: Vec<BigInt> },
    /// `v_π(x)` is below the valuation shared by every ideal element.
    NotContained { vpi_x: Option<u64>, vpi_ideal: u64 },
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerIdealCase {
    pub x: Vec<BigInt>,
    /// `x^{p^n} ∈ p^m A`.
    pub power_in_ideal: bool,
    pub membership: Membership,
}

impl PowerIdealCase {
    pub fn agrees(&self) -> bool {
        match self.membership {
            Membership::Contained { .. } => self.power_in_ideal,
            Membership::NotContained { .. } => !self.power_in_ideal,
            Membership::Inconclusive => true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerIdealReport {
    pub n: usize,
    pub m: u64,
    pub cases: Vec<PowerIdealCase>,
}

impl PowerIdealReport {
    pub fn all_agree(&self) -> bool {
        self.cases.iter().all(PowerIdealCase::agrees)
    }

    pub fn inconclusive(&self) -> usize {
        self.cases.iter().filter(|c| c.membership == Membership::Inconclusive).count()
    }
}

/// Power series inverse of a unit mod `(p, π^t)`.
fn series_inverse(u: &[u64], t: usize, p: u64) -> Vec<u64> {
    let inv0 = (1..p).find(|c| c * u[0] % p == 1).expect("unit");
    let mut out = vec![0u64; t];
    for i in 0..t {
        let mut s = if i == 0 { 1 } else { 0 };
        for j in 1..=i {
            let uj = u.get(j).copied().unwrap_or(0);
            s = (s + p * p - uj * out[i - j] % p) % p;
        }
        out[i] = s * inv0 % p;
    }
    out
}

/// Tests `x^{p^n} ∈ p^m A ⇔ x ∈ (x_n^m, p)A` on each sample, with explicit
/// cofactors for membership.
pub fn power_ideal_check(seq: &RootSequence, n: usize, m: u64, samples: &[Vec<BigInt>]) -> Result<PowerIdealReport> {
    let ring = seq.ring();
    let shape = ring.shape();
    let p = ring.p();
    if n == 0 || n > seq.len() {
        return Err(Error::DepthExceeded { requested: n, available: seq.len() });
    }
    let pn = p.pow(n as u32);
    if m == 0 || m > pn {
        return Err(Error::Unsupported(format!("m = {} outside 1..={}", m, pn)));
    }
    let g = ring.pow(seq.get(n), m);
    let phi = shape.phi();
    let vg = shape.vpi_int(&g).expect("x_n is nonzero");
    let pm = crate::rings::big_pow(p, m as u32);
    let mut cases = Vec::with_capacity(samples.len());
    for x in samples {
        let xp = ring.pow(x, pn);
        let power_in_ideal = xp.iter().all(|c| c.is_multiple_of(&pm));
        let vx = shape.vpi_int(x);
        let need = vg.min(phi as u64);
        let membership = if vx.map_or(true, |v| v >= need) {
            let u = if vg >= phi as u64 {
                ring.zero()
            } else {
                let pb = BigInt::from(p);
                let to_res = |v: &[BigInt]| -> Vec<u64> { v.iter().map(|c| c.mod_floor(&pb).to_u64().expect("residue")).collect() };
                let xs = shape.pi_transform_mod(&to_res(x), p);
                let gs = shape.pi_transform_mod(&to_res(&g), p);
                let e = vg as usize;
                let t = phi - e;
                let ginv = series_inverse(&gs[e..], t, p);
                let mut us = vec![0u64; phi];
                for i in 0..t {
                    let mut s = 0u64;
                    for j in 0..=i {
                        s = (s + xs[e + j] * ginv[i - j]) % p;
                    }
                    us[i] = s;
                }
                shape.pi_transform_mod(&us, p).into_iter().map(BigInt::from).collect()
            };
            let rest = ring.sub(x, &ring.mul(&u, &g));
            match ring.div_p(&rest) {
                Ok(w) => Membership::Contained { u, w },
                Err(_) => Membership::Inconclusive,
            }
        } else {
            Membership::NotContained { vpi_x: vx, vpi_ideal: need }
        };
        cases.push(PowerIdealCase { x: x.clone(), power_in_ideal, membership });
    }
    Ok(PowerIdealReport { n, m, cases })
}

/// Solves `F(y) = x` over a truncated ring one component at a time. Root
/// classes for `y_1` are tried canonical first; `y_{p^{i+1}}` is then
/// forced by exact division by `p`.
pub fn solve_frobenius(x: &WittVec<Truncated>) -> Result<WittVec<Truncated>> {
    let ring = x.ring();
    let n = x.level();
    if n as u32 >= ring.precision() {
        return Err(Error::PrecisionExhausted);
    }
    let candidates = ring.pth_roots_mod_p(x.comp(0))?;
    if candidates.is_empty() {
        return Err(Error::NoRoot(0));
    }
    let mut last = Error::NoRoot(0);
    for cand in candidates {
        match solve_from(x, cand) {
            Ok(y) => return Ok(y),
            Err(e @ Error::NoRoot(_)) => last = e,
            Err(e) => return Err(e),
        }
    }
    Err(last)
}

fn solve_from(x: &WittVec<Truncated>, y1: <Truncated as NormedRing>::Elem) -> Result<WittVec<Truncated>> {
    let ring = x.ring();
    let mut comps = vec![y1];
    for i in 0..=x.level() {
        let z = WittVec::new(ring.clone(), comps.clone())?.extend_zero(i + 1);
        let fz = z.frobenius()?;
        let d = ring.sub(x.comp(i), fz.comp(i));
        let next = ring.div_p(&d).map_err(|e| match e {
            Error::NotDivisible(_) => Error::NoRoot(i + 1),
            other => other,
        })?;
        comps.push(next);
    }
    WittVec::new(ring.clone(), comps)
}

/// True if `F(y)` agrees with `x` to at least `prec` digits in every component.
pub fn frobenius_matches(y: &WittVec<Truncated>, x: &WittVec<Truncated>, prec: u32) -> Result<bool> {
    let fy = y.frobenius()?;
    let ring = x.ring();
    if fy.level() != x.level() {
        return Ok(false);
    }
    Ok(fy.comps().iter().zip(x.comps()).all(|(a, b)| {
        a.prec() >= prec && b.prec() >= prec && ring.reduce(a, prec) == ring.reduce(b, prec)
    }))
}

/// Output of [`solve_frobenius_normed`].
#[derive(Clone, Debug, PartialEq)]
pub struct NormedSolution {
    /// The tower level the solution lives in.
    pub field: Cyclotomic,
    pub y: WittVec<Cyclotomic>,
    /// `x` embedded in `field`.
    pub x: WittVec<Cyclotomic>,
    /// Valuation of the Teichmüller rescaling factor `r`.
    pub rescale: Val,
    pub x_norm: ExtNorm,
    pub y_norm: ExtNorm,
}

impl NormedSolution {
    pub fn contract_holds(&self) -> bool {
        self.y_norm.pow_int(self.field.p()) <= self.x_norm
    }
}

fn p_power_denominators(p: u64, x: &[BigRational]) -> bool {
    x.iter().all(|c| {
        let mut d = c.denom().clone();
        let pb = BigInt::from(p);
        while d.is_multiple_of(&pb) {
            d /= &pb;
        }
        d.is_one()
    })
}

fn rat_floor(r: &BigRational) -> BigInt {
    r.floor().to_integer()
}

/// Solves `F(y) = x` over `ℚ(ζ_{p^L})` with `|y|_W^p ≤ |x|_W`, possibly
/// moving up the tower. `x` is rescaled by a Teichmüller factor `[r^p]`
/// into the window `0 < v(x') < 1/p^{s+1}`; then `(x', 0)` is lifted
/// integrally, and the lift is restricted and scaled back by `[r^{-1}]`.
pub fn solve_frobenius_normed(field: &Cyclotomic, x: &WittVec<Cyclotomic>) -> Result<NormedSolution> {
    let p = field.p();
    let s = x.level();
    let l0 = field.shape().k().max(1);
    for c in x.comps() {
        if !p_power_denominators(p, c) {
            return Err(Error::Unsupported("components must have p-power denominators".into()));
        }
    }
    let x_norm = x.witt_norm()?;
    let Some(v) = x_norm.val().finite().cloned() else {
        return Ok(NormedSolution {
            field: field.clone(),
            y: WittVec::zero(field, s + 1),
            x: x.clone(),
            rescale: Val::zero(),
            x_norm: x_norm.clone(),
            y_norm: ExtNorm::zero(),
        });
    };
    let pr = BigRational::from_integer(BigInt::from(p));
    let k = rat_floor(&(-&v / &pr));
    let v1 = &v + &pr * BigRational::from_integer(k.clone());
    let window = BigRational::new(BigInt::one(), BigInt::from(p).pow(s as u32 + 1));
    let mut choice = None;
    for ell in l0..l0 + 6 {
        let phi = CycloShape::new(p, ell).phi() as i64;
        let step = BigRational::new(BigInt::from(p), BigInt::from(phi));
        let j: BigInt = rat_floor(&(-&v1 / &step)) + 1;
        let v2 = &v1 + &step * BigRational::from_integer(j.clone());
        if v2 > BigRational::zero() && v2 < window {
            choice = Some((ell, j.to_u64().expect("nonnegative"), v2));
            break;
        }
    }
    let (ell, j, _) = choice.ok_or(Error::RescaleInfeasible)?;
    let mut last = Error::RescaleInfeasible;
    for lvl in ell.max(field.shape().k())..ell + 4 {
        let big = Cyclotomic::new(p, lvl);
        match lift_at_level(field, &big, x, ell, j, &k) {
            Ok(sol) => return Ok(sol),
            Err(e @ Error::NoRoot(_)) | Err(e @ Error::NotEnumerable) => last = e,
            Err(e) => return Err(e),
        }
    }
    Err(last)
}

fn lift_at_level(
    field: &Cyclotomic,
    big: &Cyclotomic,
    x: &WittVec<Cyclotomic>,
    ell: u32,
    j: u64,
    k: &BigInt,
) -> Result<NormedSolution> {
    let p = field.p();
    let s = x.level();
    let ints = CycloIntegers::new(p, big.shape().k());
    let xe = x.map(big, |c| field.embed(c, big));
    let pi_l = {
        let f = Cyclotomic::new(p, ell);
        let mut pi = f.one();
        if f.shape().k() == 0 {
            pi = f.from_int(&BigInt::from(p));
        } else {
            pi[1] = BigRational::from_integer(BigInt::from(-1));
        }
        f.embed(&f.pow(&pi, j), big)
    };
    let pk = big.from_rat(if k.is_negative() {
        BigRational::new(BigInt::one(), BigInt::from(p).pow(k.magnitude().to_u32().expect("small")))
    } else {
        BigRational::from_integer(BigInt::from(p).pow(k.to_u32().expect("small")))
    });
    let r = big.mul(&pi_l, &pk);
    let xs = xe.teichmuller_mul(&big.pow(&r, p));
    let padded = xs.extend_zero(s + 1);
    let ints_comps: Vec<Vec<BigInt>> = padded
        .comps()
        .iter()
        .map(|c| big.to_integral(c).ok_or_else(|| Error::NotIntegral("rescaled input".into())))
        .collect::<Result<_>>()?;
    let ghost = ghost_components(&ints, &ints_comps);
    let candidates = ints.pth_roots_mod_p(&ints_comps[0])?;
    if candidates.is_empty() {
        return Err(Error::NoRoot(0));
    }
    for y1 in candidates {
        let mut g = vec![y1];
        g.extend(ghost.iter().cloned());
        let Ok(yy) = unghost_components(&ints, &g) else {
            continue;
        };
        let yprime = WittVec::new(big.clone(), yy[..=s + 1].iter().map(|c| big.from_integral(c)).collect())?;
        let rinv = big.inverse(&r).expect("nonzero");
        let y = yprime.teichmuller_mul(&rinv);
        if y.frobenius()? != xe {
            return Err(Error::Unsupported("Frobenius check failed after rescaling".into()));
        }
        let y_norm = y.witt_norm()?;
        let x_norm = xe.witt_norm()?;
        if y_norm.pow_int(p) > x_norm {
            continue;
        }
        let rescale = big.norm(&r)?.into_val();
        return Ok(NormedSolution { field: big.clone(), y, x: xe, rescale, x_norm, y_norm });
    }
    Err(Error::NoRoot(1))
}

/// `v_p` of an integer, `None` for zero.
pub fn vp(p: u64, n: &BigInt) -> Option<u64> {
    vp_int(p, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::big;

    #[test]
    fn integers_are_not_witt_perfect() {
        for p in [2, 3, 5] {
            let v = witt_perfect_test(&Instance::Integers { p }).unwrap();
            assert_eq!(v.verdict, Verdict::No);
            assert!(v.frobenius_surjective);
            let cx = v.counterexample.unwrap();
            assert_eq!(cx.condition, Condition::PaRoot);
            assert_eq!(cx.a, vec![1]);
        }
    }

    #[test]
    fn zeta8_has_a_root_of_two() {
        let v = witt_perfect_test(&Instance::CycloIntegers { p: 2, k: 3 }).unwrap();
        assert_eq!(v.verdict, Verdict::No);
        assert!(!v.frobenius_surjective);
        let w = v.witness.unwrap();
        assert_eq!(w.b, vec![0, 1, 0, 1]);
        let b = pa_root(&CycloShape::new(2, 3), &[big(1), big(0), big(0), big(0)]).unwrap();
        assert_eq!(b, vec![big(0), big(1), big(0), big(1)]);
    }

    #[test]
    fn finite_field_is_perfect() {
        let v = witt_perfect_test(&Instance::Truncated { p: 3, k: 0, m: 1 }).unwrap();
        assert_eq!(v.verdict, Verdict::Yes);
    }

    #[test]
    fn tower_levels() {
        let v = witt_perfect_test(&Instance::Tower { p: 2, k: 1 }).unwrap();
        assert_eq!(v.verdict, Verdict::YesUpToLevel(1));
        let v = witt_perfect_test(&Instance::Tower { p: 3, k: 1 }).unwrap();
        assert_eq!(v.verdict, Verdict::YesUpToLevel(1));
        assert!(pa_root(&CycloShape::new(3, 2), &[big(1), big(0), big(0), big(0), big(0), big(0)]).is_none());
        let v = witt_perfect_test(&Instance::CycloIntegers { p: 3, k: 1 }).unwrap();
        assert_eq!(v.verdict, Verdict::No);
        assert!(!v.frobenius_surjective);
    }

    #[test]
    fn root_sequences() {
        let s = build_root_sequence(2, 3).unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(s.ring().shape().k(), 5);
        for k in 1..=3 {
            let n = s.ring().norm(s.get(k)).unwrap();
            assert_eq!(n, ExtNorm::from_val(Val::ratio(1, 1 << k)));
        }
        assert!(build_root_sequence(2, 0).unwrap().is_empty());
        let s3 = build_root_sequence(3, 2).unwrap();
        assert_eq!(s3.ring().norm(s3.get(2)).unwrap(), ExtNorm::from_val(Val::ratio(1, 9)));
        let mut bad = s.elems().to_vec();
        bad[1][0] += 1;
        assert_eq!(RootSequence::new(s.ring().clone(), bad), Err(Error::RootSequence(2)));
    }

    #[test]
    fn power_ideal_basic_cases() {
        let s = build_root_sequence(2, 2).unwrap();
        let r = s.ring();
        let x2 = s.get(2).to_vec();
        let samples = vec![r.pow(&x2, 3), r.from_int(&big(2)), r.one(), r.zero(), x2.clone()];
        let rep = power_ideal_check(&s, 2, 3, &samples).unwrap();
        assert!(rep.all_agree());
        assert_eq!(rep.inconclusive(), 0);
        assert!(matches!(rep.cases[0].membership, Membership::Contained { .. }));
        assert!(matches!(rep.cases[2].membership, Membership::NotContained { .. }));
        assert!(matches!(rep.cases[4].membership, Membership::NotContained { .. }));
    }

    #[test]
    fn solve_small_examples() {
        let r = Truncated::integers_mod(2, 5);
        let x = WittVec::new(r.clone(), vec![r.from_i64(2)]).unwrap();
        let y = solve_frobenius(&x).unwrap();
        assert_eq!(y.comps(), &[r.zero(), r.one()]);
        let z = solve_frobenius(&WittVec::zero(&r, 2)).unwrap();
        assert!(z.is_zero());
        let y0 = WittVec::new(r.clone(), vec![r.from_i64(3), r.from_i64(5), r.from_i64(1)]).unwrap();
        let x = y0.frobenius().unwrap();
        let y = solve_frobenius(&x).unwrap();
        assert!(frobenius_matches(&y, &x, 3).unwrap());
        let x = WittVec::new(r.clone(), vec![r.from_i64(9), r.from_i64(3)]).unwrap();
        assert!(matches!(solve_frobenius(&x), Err(Error::NoRoot(_))));
    }

    #[test]
    fn normed_solve_teichmuller() {
        let f = Cyclotomic::new(2, 2);
        let x = WittVec::teichmuller(&f, &f.from_int(&big(2)), 0);
        let sol = solve_frobenius_normed(&f, &x).unwrap();
        assert!(sol.contract_holds());
        assert_eq!(sol.y.frobenius().unwrap(), sol.x);
    }
}
