//! `ℤ[ζ_{p^k}]/p^M` with per-element digit tracking. `k = 0` gives `ℤ/p^M`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, RngCore};

use super::cyclotomic::CycloShape;
use super::parse::{parse_int, split_list};
use super::{Caps, CycloIntegers, NormedRing};
use crate::error::{Error, Result};
use crate::norm::ExtNorm;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Truncated {
    shape: CycloShape,
    m: u32,
}

/// An element known modulo `p^prec`; the representative has entries in
/// `[0, p^prec)`.
#[derive(Clone, Debug)]
pub struct TruncElem {
    c: Vec<u64>,
    prec: u32,
    p: u64,
}

impl TruncElem {
    pub fn coeffs(&self) -> &[u64] {
        &self.c
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }
}

fn pow_u64(p: u64, e: u32) -> u64 {
    p.pow(e)
}

impl PartialEq for TruncElem {
    /// Congruence at the smaller of the two precisions.
    fn eq(&self, other: &Self) -> bool {
        if self.c.len() != other.c.len() || self.p != other.p {
            return false;
        }
        let q = pow_u64(self.p, self.prec.min(other.prec));
        self.c.iter().zip(&other.c).all(|(a, b)| a % q == b % q)
    }
}

impl Truncated {
    pub fn new(p: u64, k: u32, m: u32) -> Self {
        let shape = CycloShape::new(p, k);
        assert!(m >= 1, "precision must be positive");
        assert!((p as f64).powi(m as i32) < (1u64 << 31) as f64, "p^M must stay below 2^31");
        Truncated { shape, m }
    }

    pub fn integers_mod(p: u64, m: u32) -> Self {
        Truncated::new(p, 0, m)
    }

    pub fn shape(&self) -> &CycloShape {
        &self.shape
    }

    pub fn precision(&self) -> u32 {
        self.m
    }

    pub fn with_precision(&self, m: u32) -> Truncated {
        Truncated::new(self.shape.p(), self.shape.k(), m)
    }

    pub fn modulus(&self, prec: u32) -> u64 {
        pow_u64(self.shape.p(), prec)
    }

    pub fn elem(&self, c: Vec<u64>, prec: u32) -> TruncElem {
        let prec = prec.min(self.m);
        let q = self.modulus(prec);
        let mut c = c;
        c.resize(self.shape.phi(), 0);
        TruncElem { c: c.into_iter().map(|x| x % q).collect(), prec, p: self.shape.p() }
    }

    pub fn from_bigints(&self, c: &[BigInt], prec: u32) -> TruncElem {
        let prec = prec.min(self.m);
        let q = BigInt::from(self.modulus(prec));
        let v = c.iter().map(|x| x.mod_floor(&q).to_u64().expect("residue fits")).collect();
        self.elem(v, prec)
    }

    pub fn lift(&self, a: &TruncElem) -> Vec<BigInt> {
        a.c.iter().map(|&x| BigInt::from(x)).collect()
    }

    /// Lowers the precision of `a` to at most `prec` digits.
    pub fn reduce(&self, a: &TruncElem, prec: u32) -> TruncElem {
        self.elem(a.c.clone(), prec.min(a.prec))
    }

    /// Maps an element of another level of the same tower, or another
    /// precision, into this ring.
    pub fn transfer(&self, src: &Truncated, a: &TruncElem) -> TruncElem {
        let c: Vec<u64> = if src.shape.k() <= self.shape.k() {
            let q = self.modulus(a.prec.min(self.m)) as i128;
            let lifted: Vec<i128> = a.c.iter().map(|&x| x as i128).collect();
            src.shape
                .embed(&lifted, &self.shape)
                .into_iter()
                .map(|x| x.rem_euclid(q) as u64)
                .collect()
        } else {
            panic!("transfer to a lower level is not defined");
        };
        self.elem(c, a.prec)
    }

    pub fn zeta_pow(&self, e: usize) -> TruncElem {
        let v: Vec<i128> = self.shape.zeta_pow(e);
        let q = self.modulus(self.m) as i128;
        self.elem(v.into_iter().map(|x| x.rem_euclid(q) as u64).collect(), self.m)
    }

    fn residues(&self, a: &TruncElem) -> Result<Vec<u64>> {
        if a.prec == 0 {
            return Err(Error::PrecisionExhausted);
        }
        let p = self.shape.p();
        Ok(a.c.iter().map(|x| x % p).collect())
    }

    fn from_residues(&self, r: Vec<u64>) -> TruncElem {
        self.elem(r, self.m)
    }

    fn cover(&self) -> CycloIntegers {
        CycloIntegers::new(self.shape.p(), self.shape.k())
    }

    fn lift_all(&self, x: &[TruncElem]) -> Vec<Vec<BigInt>> {
        x.iter().map(|a| self.lift(a)).collect()
    }

    fn reduce_all(&self, v: Vec<Vec<BigInt>>, prec: u32) -> Vec<TruncElem> {
        v.iter().map(|c| self.from_bigints(c, prec)).collect()
    }

    fn min_prec(&self, xs: &[&[TruncElem]]) -> u32 {
        xs.iter().flat_map(|x| x.iter().map(|a| a.prec)).min().unwrap_or(self.m)
    }
}

impl NormedRing for Truncated {
    type Elem = TruncElem;

    fn p(&self) -> u64 {
        self.shape.p()
    }

    fn caps(&self) -> Caps {
        Caps {
            pth_root_mod_p: true,
            precision: Some(self.m),
            multiplicative: false,
            power_multiplicative: false,
            ..Caps::default()
        }
    }

    fn name(&self) -> String {
        if self.shape.k() == 0 {
            format!("Z/{}^{}", self.shape.p(), self.m)
        } else {
            format!("Z[zeta_{}]/{}^{}", self.shape.order(), self.shape.p(), self.m)
        }
    }

    fn zero(&self) -> TruncElem {
        self.elem(vec![0; self.shape.phi()], self.m)
    }

    fn one(&self) -> TruncElem {
        self.from_int(&BigInt::from(1))
    }

    fn from_int(&self, n: &BigInt) -> TruncElem {
        let mut c = vec![BigInt::zero(); self.shape.phi()];
        c[0] = n.clone();
        self.from_bigints(&c, self.m)
    }

    fn add(&self, a: &TruncElem, b: &TruncElem) -> TruncElem {
        let prec = a.prec.min(b.prec);
        let q = self.modulus(prec);
        let c = a.c.iter().zip(&b.c).map(|(x, y)| (x % q + y % q) % q).collect();
        TruncElem { c, prec, p: self.shape.p() }
    }

    fn neg(&self, a: &TruncElem) -> TruncElem {
        let q = self.modulus(a.prec);
        TruncElem { c: a.c.iter().map(|x| (q - x % q) % q).collect(), prec: a.prec, p: a.p }
    }

    fn mul(&self, a: &TruncElem, b: &TruncElem) -> TruncElem {
        let prec = a.prec.min(b.prec);
        let q = self.modulus(prec);
        let n = self.shape.order();
        let mut acc = vec![0u64; n];
        for (i, &x) in a.c.iter().enumerate() {
            if x % q == 0 {
                continue;
            }
            for (j, &y) in b.c.iter().enumerate() {
                if y % q == 0 {
                    continue;
                }
                let idx = (i + j) % n;
                acc[idx] = (acc[idx] + (x % q) * (y % q) % q) % q;
            }
        }
        let signed: Vec<i128> = acc.into_iter().map(|x| x as i128).collect();
        let folded = self.shape.fold(signed);
        TruncElem { c: folded.into_iter().map(|x| x.rem_euclid(q as i128) as u64).collect(), prec, p: self.shape.p() }
    }

    fn is_zero(&self, a: &TruncElem) -> bool {
        let q = self.modulus(a.prec);
        a.c.iter().all(|x| x % q == 0)
    }

    fn div_p(&self, a: &TruncElem) -> Result<TruncElem> {
        if a.prec == 0 {
            return Err(Error::PrecisionExhausted);
        }
        let p = self.shape.p();
        if a.c.iter().any(|x| x % p != 0) {
            return Err(Error::NotDivisible(self.format(a)));
        }
        Ok(self.elem(a.c.iter().map(|x| x / p).collect(), a.prec - 1))
    }

    fn norm(&self, a: &TruncElem) -> Result<ExtNorm> {
        let q = self.modulus(a.prec);
        let p = self.shape.p();
        let b = self.shape.pi_transform_mod(&a.c, q);
        let phi = self.shape.phi() as u64;
        let vpi = b
            .iter()
            .enumerate()
            .filter(|(_, &x)| x % q != 0)
            .map(|(i, &x)| {
                let mut v = 0u64;
                let mut x = x;
                while x % p == 0 {
                    x /= p;
                    v += 1;
                }
                v * phi + i as u64
            })
            .min();
        Ok(ExtNorm::from_val(self.shape.val_from_vpi(vpi)))
    }

    fn pth_root_mod_p(&self, a: &TruncElem) -> Result<Option<TruncElem>> {
        let r = self.residues(a)?;
        Ok(self.shape.pth_root_residue(&r).map(|v| self.from_residues(v)))
    }

    fn pth_roots_mod_p(&self, a: &TruncElem) -> Result<Vec<TruncElem>> {
        let r = self.residues(a)?;
        Ok(self.shape.pth_roots_residue(&r, 1 << 16).into_iter().map(|v| self.from_residues(v)).collect())
    }

    fn precision_of(&self, a: &TruncElem) -> Option<u32> {
        Some(a.prec)
    }

    fn format(&self, a: &TruncElem) -> String {
        let body = if self.shape.k() == 0 {
            a.c[0].to_string()
        } else {
            let parts: Vec<String> = a.c.iter().map(|x| x.to_string()).collect();
            format!("[{}]", parts.join(", "))
        };
        if a.prec == self.m {
            body
        } else {
            format!("{} mod {}^{}", body, self.shape.p(), a.prec)
        }
    }

    fn parse(&self, s: &str) -> Result<TruncElem> {
        let (body, prec) = match s.find("mod") {
            Some(i) => {
                let tail = s[i + 3..].trim();
                let (base, exp) = tail.split_once('^').ok_or_else(|| Error::parse(i + 3, "expected p^e"))?;
                if parse_int(base, i + 3)? != BigInt::from(self.shape.p()) {
                    return Err(Error::parse(i + 3, "modulus must be a power of p"));
                }
                let e = parse_int(exp, i + 3)?.to_u32().ok_or_else(|| Error::parse(i + 3, "bad exponent"))?;
                (&s[..i], e.min(self.m))
            }
            None => (s, self.m),
        };
        let c = if body.trim_start().starts_with('[') {
            let parts = split_list(body)?;
            if parts.len() > self.shape.phi() {
                return Err(Error::parse(0, "too many coefficients"));
            }
            let mut c = vec![BigInt::zero(); self.shape.phi()];
            for (i, (pos, t)) in parts.into_iter().enumerate() {
                c[i] = parse_int(t, pos)?;
            }
            c
        } else {
            let mut c = vec![BigInt::zero(); self.shape.phi()];
            c[0] = parse_int(body, 0)?;
            c
        };
        Ok(self.from_bigints(&c, prec))
    }

    fn sample(&self, rng: &mut dyn RngCore) -> TruncElem {
        let q = self.modulus(self.m);
        let c: Vec<u64> = (0..self.shape.phi())
            .map(|_| if rng.gen_bool(0.3) { 0 } else { rng.gen_range(0..q) })
            .collect();
        let mut x = self.elem(c, self.m);
        if rng.gen_bool(0.4) {
            let j = rng.gen_range(0..self.m as u64 * self.shape.phi() as u64);
            let pi = if self.shape.k() == 0 {
                self.from_int(&BigInt::from(self.shape.p()))
            } else {
                self.sub(&self.one(), &self.zeta_pow(1))
            };
            let pj = if self.shape.k() == 0 { j / self.shape.phi() as u64 } else { j };
            x = self.mul(&x, &self.pow(&pi, pj));
        }
        x
    }

    fn witt_add(&self, x: &[TruncElem], y: &[TruncElem]) -> Result<Vec<TruncElem>> {
        let prec = self.min_prec(&[x, y]);
        let r = self.cover().witt_add(&self.lift_all(x), &self.lift_all(y))?;
        Ok(self.reduce_all(r, prec))
    }

    fn witt_mul(&self, x: &[TruncElem], y: &[TruncElem]) -> Result<Vec<TruncElem>> {
        let prec = self.min_prec(&[x, y]);
        let r = self.cover().witt_mul(&self.lift_all(x), &self.lift_all(y))?;
        Ok(self.reduce_all(r, prec))
    }

    fn witt_frobenius(&self, x: &[TruncElem]) -> Result<Vec<TruncElem>> {
        let prec = self.min_prec(&[x]);
        let r = self.cover().witt_frobenius(&self.lift_all(x))?;
        Ok(self.reduce_all(r, prec))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norm::Val;

    #[test]
    fn division_drops_a_digit() {
        let r = Truncated::integers_mod(2, 4);
        let four = r.from_i64(4);
        let two = r.div_p(&four).unwrap();
        assert_eq!(two.prec(), 3);
        assert_eq!(r.format(&two), "2 mod 2^3");
        assert!(matches!(r.div_p(&r.from_i64(3)), Err(Error::NotDivisible(_))));
        let mut x = r.from_i64(0);
        for _ in 0..4 {
            x = r.div_p(&x).unwrap();
        }
        assert_eq!(x.prec(), 0);
        assert_eq!(r.div_p(&x), Err(Error::PrecisionExhausted));
    }

    #[test]
    fn equality_is_congruence_at_common_precision() {
        let r = Truncated::integers_mod(3, 3);
        let a = r.elem(vec![5], 3);
        let b = r.elem(vec![14], 2);
        assert_eq!(a, b);
        assert_ne!(a, r.elem(vec![4], 2));
    }

    #[test]
    fn norm_of_uniformizer_powers() {
        let r = Truncated::new(2, 3, 4);
        let pi = r.sub(&r.one(), &r.zeta_pow(1));
        for j in 0..12u64 {
            let v = r.norm(&r.pow(&pi, j)).unwrap();
            assert_eq!(v.val(), &Val::ratio(j as i64, 4));
        }
        assert_eq!(r.norm(&r.pow(&pi, 16)).unwrap(), ExtNorm::zero());
    }

    #[test]
    fn parse_round_trip() {
        let r = Truncated::new(3, 1, 2);
        let a = r.parse("[1, 7] mod 3^1").unwrap();
        assert_eq!(a.prec(), 1);
        assert_eq!(r.format(&a), "[1, 1] mod 3^1");
        assert_eq!(r.parse(&r.format(&a)).unwrap(), a);
    }
}
