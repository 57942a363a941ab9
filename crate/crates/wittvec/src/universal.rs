//! Integer structure polynomials for Witt addition, multiplication and
//! Frobenius, obtained by unghosting over `ℚ[x, y]`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rings::NormedRing;

/// Multivariate polynomial over `ℚ` in a fixed number of variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, BigRational>,
}

impl QPoly {
    pub fn zero(nvars: usize) -> Self {
        QPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        let mut q = QPoly::zero(nvars);
        if !c.is_zero() {
            q.terms.insert(vec![0; nvars], c);
        }
        q
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        QPoly { nvars, terms: BTreeMap::from([(e, BigRational::one())]) }
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, BigRational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &QPoly) -> QPoly {
        let mut terms = self.terms.clone();
        for (e, c) in &o.terms {
            *terms.entry(e.clone()).or_insert_with(BigRational::zero) += c;
        }
        terms.retain(|_, c| !c.is_zero());
        QPoly { nvars: self.nvars, terms }
    }

    pub fn neg(&self) -> QPoly {
        QPoly { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }

    pub fn sub(&self, o: &QPoly) -> QPoly {
        self.add(&o.neg())
    }

    pub fn scale(&self, r: &BigRational) -> QPoly {
        if r.is_zero() {
            return QPoly::zero(self.nvars);
        }
        QPoly { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), c * r)).collect() }
    }

    pub fn mul(&self, o: &QPoly) -> QPoly {
        let mut terms: BTreeMap<Vec<u32>, BigRational> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &o.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                let entry = terms.entry(e).or_insert_with(BigRational::zero);
                *entry += ca * cb;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        QPoly { nvars: self.nvars, terms }
    }

    pub fn pow(&self, mut e: u64) -> QPoly {
        let mut acc = QPoly::constant(self.nvars, BigRational::one());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }
}

/// Ghost polynomial `w_{p^k}` in the variables `offset .. offset + k`.
pub fn ghost_poly(p: u64, k: usize, nvars: usize, offset: usize) -> QPoly {
    let mut w = QPoly::zero(nvars);
    for j in 0..=k {
        let term = QPoly::var(nvars, offset + j).pow(p.pow((k - j) as u32));
        w = w.add(&term.scale(&prat(p, j as u32)));
    }
    w
}

fn prat(p: u64, e: u32) -> BigRational {
    BigRational::from_integer(num_traits::pow(BigInt::from(p), e as usize))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PolyKind {
    Sum,
    Prod,
    Frob,
}

/// An integer polynomial in `x_1, x_p, …` and `y_1, y_p, …`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnivPoly {
    p: u64,
    nx: usize,
    ny: usize,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl UnivPoly {
    /// Builds a polynomial from `(coefficient, x-exponents, y-exponents)`.
    pub fn from_terms(p: u64, nx: usize, ny: usize, terms: &[(i64, Vec<u32>, Vec<u32>)]) -> Self {
        let mut map: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
        for (c, ex, ey) in terms {
            let mut e = ex.clone();
            e.resize(nx, 0);
            let mut f = ey.clone();
            f.resize(ny, 0);
            e.extend(f);
            *map.entry(e).or_insert_with(BigInt::zero) += BigInt::from(*c);
        }
        map.retain(|_, c| !c.is_zero());
        UnivPoly { p, nx, ny, terms: map }
    }

    fn from_qpoly(p: u64, nx: usize, ny: usize, q: &QPoly, label: &str) -> Result<Self> {
        let mut terms = BTreeMap::new();
        for (e, c) in &q.terms {
            if !c.is_integer() {
                return Err(Error::IntegralityViolation(label.to_string()));
            }
            let mut ex: Vec<u32> = e[..nx].to_vec();
            ex.extend_from_slice(&e[q.nvars / 2..q.nvars / 2 + ny]);
            if e[nx..q.nvars / 2].iter().any(|&x| x != 0) || e[q.nvars / 2 + ny..].iter().any(|&x| x != 0) {
                return Err(Error::IntegralityViolation(format!("{}: stray variable", label)));
            }
            terms.insert(ex, c.to_integer());
        }
        Ok(UnivPoly { p, nx, ny, terms })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, BigInt> {
        &self.terms
    }

    fn weight(&self, i: usize) -> u64 {
        let j = if i < self.nx { i } else { i - self.nx };
        self.p.pow(j as u32)
    }

    fn monomial_weight(&self, e: &[u32], range: std::ops::Range<usize>) -> u64 {
        range.map(|i| e[i] as u64 * self.weight(i)).sum()
    }

    /// True iff every monomial has weighted degree `degree`.
    pub fn is_weighted_homogeneous(&self, degree: u64) -> bool {
        self.terms.keys().all(|e| self.monomial_weight(e, 0..self.nx + self.ny) == degree)
    }

    /// True iff every monomial has weighted degree `degree` in the x-variables.
    pub fn is_homogeneous_in_x(&self, degree: u64) -> bool {
        self.terms.keys().all(|e| self.monomial_weight(e, 0..self.nx) == degree)
    }

    pub fn is_homogeneous_in_y(&self, degree: u64) -> bool {
        self.terms.keys().all(|e| self.monomial_weight(e, self.nx..self.nx + self.ny) == degree)
    }

    /// Whether the variable `x_{p^j}` occurs.
    pub fn mentions_x(&self, j: usize) -> bool {
        j < self.nx && self.terms.keys().any(|e| e[j] != 0)
    }

    pub fn eval<R: NormedRing>(&self, ring: &R, xs: &[R::Elem], ys: &[R::Elem]) -> R::Elem {
        let mut acc = ring.zero();
        for (e, c) in &self.terms {
            let mut t = ring.from_int(c);
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let v = if i < self.nx { &xs[i] } else { &ys[i - self.nx] };
                t = ring.mul(&t, &ring.pow(v, k as u64));
            }
            acc = ring.add(&acc, &t);
        }
        acc
    }

    fn var_name(&self, i: usize) -> String {
        if i < self.nx {
            format!("x{}", self.p.pow(i as u32))
        } else {
            format!("y{}", self.p.pow((i - self.nx) as u32))
        }
    }
}

impl fmt::Display for UnivPoly {
    /// Monomials in descending exponent order, e.g. `-x1*y1 + x2 + y2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (e, c)) in self.terms.iter().rev().enumerate() {
            let mut factors = Vec::new();
            for (i, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => factors.push(self.var_name(i)),
                    _ => factors.push(format!("{}^{}", self.var_name(i), k)),
                }
            }
            let mag = c.abs();
            let body = if factors.is_empty() {
                mag.to_string()
            } else if mag.is_one() {
                factors.join("*")
            } else {
                format!("{}*{}", mag, factors.join("*"))
            };
            let sign = if c.is_negative() { "-" } else { "+" };
            if n == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                write!(f, "{}", body)?;
            } else {
                write!(f, " {} {}", sign, body)?;
            }
        }
        Ok(())
    }
}

/// Largest supported expansion index.
pub fn cap(p: u64) -> u32 {
    if p == 2 {
        3
    } else {
        2
    }
}

type Cache = HashMap<(PolyKind, u64), Arc<Vec<UnivPoly>>>;

fn cache() -> &'static Mutex<Cache> {
    static CACHE: OnceLock<Mutex<Cache>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// All polynomials of `kind` for indices `0..=i`.
pub fn family(kind: PolyKind, p: u64, i: u32) -> Result<Arc<Vec<UnivPoly>>> {
    if i > cap(p) {
        return Err(Error::BeyondCap(i));
    }
    if let Some(v) = cache().lock().expect("cache lock").get(&(kind, p)) {
        if v.len() > i as usize {
            return Ok(v.clone());
        }
    }
    let v = Arc::new(compute(kind, p, i as usize)?);
    let mut guard = cache().lock().expect("cache lock");
    let entry = guard.entry((kind, p)).or_insert_with(|| v.clone());
    if entry.len() < v.len() {
        *entry = v.clone();
    }
    Ok(v)
}

pub fn sum_poly(p: u64, i: u32) -> Result<UnivPoly> {
    Ok(family(PolyKind::Sum, p, i)?[i as usize].clone())
}

pub fn prod_poly(p: u64, i: u32) -> Result<UnivPoly> {
    Ok(family(PolyKind::Prod, p, i)?[i as usize].clone())
}

/// `f_{p^i}` with `F(x)_{p^i} = x_{p^i}^p + p·x_{p^{i+1}} + p·f_{p^i}`.
pub fn frob_poly(p: u64, i: u32) -> Result<UnivPoly> {
    Ok(family(PolyKind::Frob, p, i)?[i as usize].clone())
}

pub fn check_weighted_homogeneity(poly: &UnivPoly, degree: u64) -> bool {
    poly.is_weighted_homogeneous(degree)
}

fn compute(kind: PolyKind, p: u64, top: usize) -> Result<Vec<UnivPoly>> {
    let half = top + 2;
    let nvars = 2 * half;
    let mut done: Vec<QPoly> = Vec::new();
    let mut out = Vec::new();
    for k in 0..=top {
        let target = match kind {
            PolyKind::Sum => ghost_poly(p, k, nvars, 0).add(&ghost_poly(p, k, nvars, half)),
            PolyKind::Prod => ghost_poly(p, k, nvars, 0).mul(&ghost_poly(p, k, nvars, half)),
            PolyKind::Frob => ghost_poly(p, k + 1, nvars, 0),
        };
        let mut rest = target;
        for (j, s) in done.iter().enumerate() {
            rest = rest.sub(&s.pow(p.pow((k - j) as u32)).scale(&prat(p, j as u32)));
        }
        let s = rest.scale(&prat(p, k as u32).recip());
        let label = format!("{:?} p={} i={}", kind, p, k);
        let poly = match kind {
            PolyKind::Frob => {
                let lead = QPoly::var(nvars, k).pow(p).add(&QPoly::var(nvars, k + 1).scale(&prat(p, 1)));
                let f = s.sub(&lead).scale(&prat(p, 1).recip());
                UnivPoly::from_qpoly(p, k + 2, 0, &f, &label)?
            }
            _ => UnivPoly::from_qpoly(p, k + 1, k + 1, &s, &label)?,
        };
        out.push(poly);
        done.push(s);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_sum_and_product() {
        let s1 = sum_poly(2, 1).unwrap();
        assert_eq!(s1.to_string(), "-x1*y1 + x2 + y2");
        assert_eq!(sum_poly(2, 0).unwrap().to_string(), "x1 + y1");
        let s3 = sum_poly(3, 1).unwrap();
        assert_eq!(s3, UnivPoly::from_terms(3, 2, 2, &[(1, vec![0, 1], vec![]), (1, vec![], vec![0, 1]), (-1, vec![2], vec![1]), (-1, vec![1], vec![2])]));
        let m1 = prod_poly(2, 1).unwrap();
        assert_eq!(m1, UnivPoly::from_terms(2, 2, 2, &[(1, vec![2], vec![0, 1]), (1, vec![0, 1], vec![2]), (2, vec![0, 1], vec![0, 1])]));
    }

    #[test]
    fn frobenius_structure() {
        assert!(frob_poly(2, 0).unwrap().terms().is_empty());
        assert!(frob_poly(3, 0).unwrap().terms().is_empty());
        let f = frob_poly(2, 1).unwrap();
        assert!(!f.mentions_x(2));
        assert!(f.is_weighted_homogeneous(4));
    }

    #[test]
    fn homogeneity_check() {
        let x = UnivPoly::from_terms(2, 2, 0, &[(1, vec![1], vec![]), (1, vec![0, 1], vec![])]);
        assert!(!check_weighted_homogeneity(&x, 2));
        assert!(check_weighted_homogeneity(&sum_poly(2, 1).unwrap(), 2));
        assert!(check_weighted_homogeneity(&prod_poly(2, 1).unwrap(), 4));
        assert!(matches!(sum_poly(3, 3), Err(Error::BeyondCap(3))));
    }
}
