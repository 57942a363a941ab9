//! `F_p[x_1^{1/p^∞}, …, x_r^{1/p^∞}]` truncated at root depth `d`, with the
//! degree norm `|f| = p^{deg f}`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::{Rng, RngCore};

use super::parse::parse_int;
use super::{Caps, NormedRing};
use crate::error::{Error, Result};
use crate::norm::{ExtNorm, Val};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerfPoly {
    p: u64,
    vars: usize,
    depth: u32,
}

/// Monomial exponents, scaled by `p^depth`, mapped to nonzero coefficients
/// in `[1, p)`.
pub type PolyElem = BTreeMap<Vec<u64>, u64>;

impl PerfPoly {
    pub fn new(p: u64, vars: usize, depth: u32) -> Self {
        assert!(p >= 2 && vars >= 1);
        PerfPoly { p, vars, depth }
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    fn scale(&self) -> u64 {
        self.p.pow(self.depth)
    }

    /// `x_v^{num/den}`; fails if `den` does not divide `p^depth`.
    pub fn monomial(&self, v: usize, num: u64, den: u64) -> Result<PolyElem> {
        let s = self.scale();
        if s % den != 0 {
            return Err(Error::Unsupported(format!("exponent {}/{} beyond root depth {}", num, den, self.depth)));
        }
        let mut e = vec![0u64; self.vars];
        e[v] = num * (s / den);
        Ok(BTreeMap::from([(e, 1)]))
    }

    pub fn degree(&self, a: &PolyElem) -> Option<BigRational> {
        a.keys()
            .map(|e| BigRational::new(BigInt::from(e.iter().sum::<u64>()), BigInt::from(self.scale())))
            .max()
    }

    fn frob_pow(&self, a: &PolyElem, j: u32) -> PolyElem {
        let f = self.p.pow(j);
        a.iter().map(|(e, &c)| (e.iter().map(|x| x * f).collect(), c)).collect()
    }

    fn var_name(&self, v: usize) -> String {
        if self.vars == 1 {
            "x".into()
        } else {
            format!("x{}", v + 1)
        }
    }

    fn format_exp(&self, e: u64) -> String {
        let r = BigRational::new(BigInt::from(e), BigInt::from(self.scale()));
        if r.is_integer() {
            r.numer().to_string()
        } else {
            format!("({}/{})", r.numer(), r.denom())
        }
    }

    fn parse_term(&self, t: &str, pos: usize) -> Result<PolyElem> {
        let mut coef = 1u64;
        let mut exps = vec![0u64; self.vars];
        for f in t.split('*') {
            let f = f.trim();
            if f.is_empty() {
                return Err(Error::parse(pos, "empty factor"));
            }
            if f.starts_with(|c: char| c.is_ascii_digit()) {
                let n = parse_int(f, pos)?.mod_floor(&BigInt::from(self.p));
                coef = coef * n.to_u64().expect("residue") % self.p;
                continue;
            }
            let (var, exp) = match f.split_once('^') {
                Some((v, e)) => (v, Some(e)),
                None => (f, None),
            };
            let idx = if self.vars == 1 && var == "x" {
                0
            } else {
                let n: usize = var
                    .strip_prefix('x')
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| Error::parse(pos, format!("unknown variable {:?}", var)))?;
                if n == 0 || n > self.vars {
                    return Err(Error::parse(pos, format!("variable {:?} out of range", var)));
                }
                n - 1
            };
            let e = match exp {
                None => BigRational::from_integer(BigInt::from(1)),
                Some(e) => {
                    let e = e.trim().trim_start_matches('(').trim_end_matches(')');
                    super::parse::parse_rat(e, pos)?
                }
            };
            let scaled = e * BigRational::from_integer(BigInt::from(self.scale()));
            if !scaled.is_integer() || scaled < BigRational::from_integer(BigInt::from(0)) {
                return Err(Error::parse(pos, "exponent beyond root depth"));
            }
            exps[idx] += scaled.to_integer().to_u64().expect("exponent fits");
        }
        let mut out = BTreeMap::new();
        if coef != 0 {
            out.insert(exps, coef);
        }
        Ok(out)
    }
}

impl NormedRing for PerfPoly {
    type Elem = PolyElem;

    fn p(&self) -> u64 {
        self.p
    }

    fn caps(&self) -> Caps {
        Caps {
            pth_root_mod_p: true,
            char_p_perfect: true,
            multiplicative: true,
            power_multiplicative: true,
            ..Caps::default()
        }
    }

    fn name(&self) -> String {
        format!("F_{}[x^(1/{}^inf)] (vars={}, depth={})", self.p, self.p, self.vars, self.depth)
    }

    fn zero(&self) -> PolyElem {
        BTreeMap::new()
    }

    fn one(&self) -> PolyElem {
        BTreeMap::from([(vec![0; self.vars], 1)])
    }

    fn from_int(&self, n: &BigInt) -> PolyElem {
        let c = n.mod_floor(&BigInt::from(self.p)).to_u64().expect("residue");
        if c == 0 {
            self.zero()
        } else {
            BTreeMap::from([(vec![0; self.vars], c)])
        }
    }

    fn add(&self, a: &PolyElem, b: &PolyElem) -> PolyElem {
        let mut out = a.clone();
        for (e, &c) in b {
            let s = (out.get(e).copied().unwrap_or(0) + c) % self.p;
            if s == 0 {
                out.remove(e);
            } else {
                out.insert(e.clone(), s);
            }
        }
        out
    }

    fn neg(&self, a: &PolyElem) -> PolyElem {
        a.iter().map(|(e, &c)| (e.clone(), (self.p - c) % self.p)).collect()
    }

    fn mul(&self, a: &PolyElem, b: &PolyElem) -> PolyElem {
        let mut out: PolyElem = BTreeMap::new();
        for (ea, &ca) in a {
            for (eb, &cb) in b {
                let e: Vec<u64> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                let s = (out.get(&e).copied().unwrap_or(0) + ca * cb) % self.p;
                if s == 0 {
                    out.remove(&e);
                } else {
                    out.insert(e, s);
                }
            }
        }
        out
    }

    /// Uses `(f^{p^j})` being a coefficientwise exponent scaling.
    fn pow(&self, a: &PolyElem, e: u64) -> PolyElem {
        let mut acc = self.one();
        let mut rest = e;
        let mut j = 0;
        while rest > 0 {
            let d = rest % self.p;
            if d > 0 {
                let f = self.frob_pow(a, j);
                for _ in 0..d {
                    acc = self.mul(&acc, &f);
                }
            }
            rest /= self.p;
            j += 1;
        }
        acc
    }

    fn is_zero(&self, a: &PolyElem) -> bool {
        a.is_empty()
    }

    fn div_p(&self, _a: &PolyElem) -> Result<PolyElem> {
        Err(Error::CapabilityMissing("p-torsion-free"))
    }

    fn norm(&self, a: &PolyElem) -> Result<ExtNorm> {
        Ok(match self.degree(a) {
            None => ExtNorm::zero(),
            Some(d) => ExtNorm::from_val(Val::Finite(-d)),
        })
    }

    /// The exact p-th root, absent when it would exceed the root depth.
    fn pth_root_mod_p(&self, a: &PolyElem) -> Result<Option<PolyElem>> {
        let p = self.p;
        if a.keys().any(|e| e.iter().any(|x| x % p != 0)) {
            return Ok(None);
        }
        Ok(Some(a.iter().map(|(e, &c)| (e.iter().map(|x| x / p).collect(), c)).collect()))
    }

    fn format(&self, a: &PolyElem) -> String {
        if a.is_empty() {
            return "0".into();
        }
        let terms: Vec<String> = a
            .iter()
            .rev()
            .map(|(e, &c)| {
                let mut factors = Vec::new();
                if c != 1 || e.iter().all(|&x| x == 0) {
                    factors.push(c.to_string());
                }
                for (v, &x) in e.iter().enumerate() {
                    if x == 0 {
                        continue;
                    }
                    if x == self.scale() {
                        factors.push(self.var_name(v));
                    } else {
                        factors.push(format!("{}^{}", self.var_name(v), self.format_exp(x)));
                    }
                }
                factors.join("*")
            })
            .collect();
        terms.join(" + ")
    }

    fn parse(&self, s: &str) -> Result<PolyElem> {
        let mut out = self.zero();
        let mut pos = 0;
        for raw in s.split('+') {
            let t = raw.trim();
            if t.is_empty() {
                return Err(Error::parse(pos, "empty term"));
            }
            let (neg, body) = match t.strip_prefix('-') {
                Some(b) => (true, b),
                None => (false, t),
            };
            let mut term = self.parse_term(body, pos)?;
            if neg {
                term = self.neg(&term);
            }
            out = self.add(&out, &term);
            pos += raw.len() + 1;
        }
        Ok(out)
    }

    fn sample(&self, rng: &mut dyn RngCore) -> PolyElem {
        let mut out = self.zero();
        let terms = rng.gen_range(0..=3);
        let s = self.scale();
        for _ in 0..terms {
            let e: Vec<u64> = (0..self.vars)
                .map(|_| if rng.gen_bool(0.5) { rng.gen_range(0..4) * s } else { rng.gen_range(0..3 * s) })
                .collect();
            let c = rng.gen_range(1..self.p);
            out = self.add(&out, &BTreeMap::from([(e, c)]));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_respect_depth() {
        let r = PerfPoly::new(2, 1, 1);
        let x = r.parse("x").unwrap();
        let root = r.pth_root_mod_p(&x).unwrap().unwrap();
        assert_eq!(r.format(&root), "x^(1/2)");
        assert_eq!(r.pth_root_mod_p(&root).unwrap(), None);
        let flat = PerfPoly::new(2, 1, 0);
        assert_eq!(flat.pth_root_mod_p(&flat.parse("x").unwrap()).unwrap(), None);
    }

    #[test]
    fn degree_norm_is_multiplicative() {
        let r = PerfPoly::new(3, 2, 2);
        let f = r.parse("x1^(1/3) + 2*x2^2").unwrap();
        let g = r.parse("x1*x2^(1/9) + 1").unwrap();
        let nf = r.norm(&f).unwrap();
        let ng = r.norm(&g).unwrap();
        assert_eq!(r.norm(&r.mul(&f, &g)).unwrap(), nf.mul(&ng));
        assert_eq!(r.norm(&r.pow(&f, 3)).unwrap(), nf.pow_int(3));
        assert_eq!(r.pow(&f, 3), r.mul(&f, &r.mul(&f, &f)));
    }

    #[test]
    fn format_round_trip() {
        let r = PerfPoly::new(2, 1, 3);
        for s in ["0", "1", "x", "x^(3/8) + 1", "x^5 + x^(1/2)"] {
            assert_eq!(r.format(&r.parse(s).unwrap()), s);
        }
        assert!(r.parse("x^(1/16)").is_err());
        assert!(r.parse("y").is_err());
    }
}
