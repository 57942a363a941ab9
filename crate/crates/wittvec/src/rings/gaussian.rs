//! `ℚ(i)` with the supremum of the normalized absolute values above `p`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, RngCore};

use super::parse::{format_rat, parse_rat};
use super::{rat_mod, vp_int, Caps, NormedRing};
use crate::error::{Error, Result};
use crate::norm::{ExtNorm, Val};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GaussianKind {
    /// `p = ππ̄` with `π = a + bi`.
    Split { a: i64, b: i64 },
    Inert,
    /// `p = 2`, `π = 1 + i`.
    Ramified,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gaussian {
    p: u64,
    kind: GaussianKind,
}

/// `re + im·i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Gi {
    pub re: BigRational,
    pub im: BigRational,
}

impl Gi {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Gi { re, im }
    }

    pub fn ints(re: i64, im: i64) -> Self {
        Gi::new(BigRational::from_integer(re.into()), BigRational::from_integer(im.into()))
    }

    pub fn conj(&self) -> Gi {
        Gi::new(self.re.clone(), -&self.im)
    }
}

impl Gaussian {
    pub fn new(p: u64) -> Self {
        assert!(p >= 2);
        let kind = if p == 2 {
            GaussianKind::Ramified
        } else if p % 4 == 3 {
            GaussianKind::Inert
        } else {
            let mut found = None;
            for a in 1i64.. {
                let r = p as i64 - a * a;
                if r <= 0 {
                    break;
                }
                let b = (r as f64).sqrt().round() as i64;
                if b * b == r {
                    found = Some((a, b));
                    break;
                }
            }
            let (a, b) = found.expect("split prime is a sum of two squares");
            GaussianKind::Split { a, b }
        };
        Gaussian { p, kind }
    }

    pub fn kind(&self) -> &GaussianKind {
        &self.kind
    }

    pub fn i(&self) -> Gi {
        Gi::ints(0, 1)
    }

    /// Prime elements above `p`, one per place.
    pub fn primes(&self) -> Vec<Gi> {
        match self.kind {
            GaussianKind::Split { a, b } => vec![Gi::ints(a, b), Gi::ints(a, -b)],
            GaussianKind::Inert => vec![Gi::ints(self.p as i64, 0)],
            GaussianKind::Ramified => vec![Gi::ints(1, 1)],
        }
    }

    /// Valuations at each place, normalized so that `p` has valuation 1.
    pub fn valuations(&self, x: &Gi) -> Vec<Val> {
        if x.re.is_zero() && x.im.is_zero() {
            return vec![Val::Infinite; self.primes().len()];
        }
        let d = x.re.denom().lcm(x.im.denom());
        let dr = BigRational::from_integer(d.clone());
        let a = (&x.re * &dr).to_integer();
        let b = (&x.im * &dr).to_integer();
        let vd = vp_int(self.p, &d).unwrap_or(0) as i64;
        let e = self.ramification() as i64;
        self.primes()
            .iter()
            .map(|pi| {
                let v = self.v_prime(&a, &b, pi) as i64 - e * vd;
                Val::ratio(v, e)
            })
            .collect()
    }

    fn ramification(&self) -> u64 {
        if self.kind == GaussianKind::Ramified {
            2
        } else {
            1
        }
    }

    /// Exponent of the prime element `pi` in the nonzero integer `a + bi`.
    fn v_prime(&self, a: &BigInt, b: &BigInt, pi: &Gi) -> u64 {
        let (u, w) = (pi.re.to_integer(), pi.im.to_integer());
        let n = &u * &u + &w * &w;
        let (mut a, mut b) = (a.clone(), b.clone());
        let mut v = 0;
        loop {
            // (a + bi)(u - wi) = (au + bw) + (bu - aw)i
            let re = &a * &u + &b * &w;
            let im = &b * &u - &a * &w;
            if re.is_multiple_of(&n) && im.is_multiple_of(&n) {
                a = re / &n;
                b = im / &n;
                v += 1;
            } else {
                return v;
            }
        }
    }

    fn residue(&self, x: &Gi) -> Option<(u64, u64)> {
        let p = BigInt::from(self.p);
        let re = rat_mod(&x.re, &p)?;
        let im = rat_mod(&x.im, &p)?;
        Some((re.try_into().ok()?, im.try_into().ok()?))
    }
}

fn gi_mul_mod(a: (u64, u64), b: (u64, u64), q: u64) -> (u64, u64) {
    let re = (a.0 * b.0 % q + q * q - a.1 * b.1 % q) % q;
    let im = (a.0 * b.1 + a.1 * b.0) % q;
    (re, im)
}

impl NormedRing for Gaussian {
    type Elem = Gi;

    fn p(&self) -> u64 {
        self.p
    }

    fn caps(&self) -> Caps {
        Caps {
            torsion_free: true,
            q_algebra: true,
            pth_root_mod_p: true,
            multiplicative: !matches!(self.kind, GaussianKind::Split { .. }),
            power_multiplicative: true,
            ..Caps::default()
        }
    }

    fn name(&self) -> String {
        format!("Q(i) (p={})", self.p)
    }

    fn zero(&self) -> Gi {
        Gi::ints(0, 0)
    }

    fn one(&self) -> Gi {
        Gi::ints(1, 0)
    }

    fn from_int(&self, n: &BigInt) -> Gi {
        Gi::new(BigRational::from_integer(n.clone()), BigRational::zero())
    }

    fn add(&self, a: &Gi, b: &Gi) -> Gi {
        Gi::new(&a.re + &b.re, &a.im + &b.im)
    }

    fn neg(&self, a: &Gi) -> Gi {
        Gi::new(-&a.re, -&a.im)
    }

    fn sub(&self, a: &Gi, b: &Gi) -> Gi {
        Gi::new(&a.re - &b.re, &a.im - &b.im)
    }

    fn mul(&self, a: &Gi, b: &Gi) -> Gi {
        Gi::new(&a.re * &b.re - &a.im * &b.im, &a.re * &b.im + &a.im * &b.re)
    }

    fn is_zero(&self, a: &Gi) -> bool {
        a.re.is_zero() && a.im.is_zero()
    }

    fn div_p(&self, a: &Gi) -> Result<Gi> {
        let p = BigRational::from_integer(BigInt::from(self.p));
        Ok(Gi::new(&a.re / &p, &a.im / &p))
    }

    fn norm(&self, a: &Gi) -> Result<ExtNorm> {
        let v = self.valuations(a).into_iter().min().expect("at least one place");
        Ok(ExtNorm::from_val(v))
    }

    /// Lex-least residue `c + di` with `0 ≤ c, d < p`.
    fn pth_root_mod_p(&self, a: &Gi) -> Result<Option<Gi>> {
        let Some(target) = self.residue(a) else {
            return Ok(None);
        };
        let p = self.p;
        for c in 0..p {
            for d in 0..p {
                let mut acc = (1 % p, 0);
                for _ in 0..p {
                    acc = gi_mul_mod(acc, (c, d), p);
                }
                if acc == target {
                    return Ok(Some(Gi::ints(c as i64, d as i64)));
                }
            }
        }
        Ok(None)
    }

    fn format(&self, a: &Gi) -> String {
        let re = (!a.re.is_zero()).then(|| format_rat(&a.re));
        let im = (!a.im.is_zero()).then(|| {
            if a.im.is_one() {
                "i".to_string()
            } else if (-&a.im).is_one() {
                "-i".to_string()
            } else {
                format!("{}i", format_rat(&a.im))
            }
        });
        match (re, im) {
            (None, None) => "0".into(),
            (Some(r), None) => r,
            (None, Some(i)) => i,
            (Some(r), Some(i)) if i.starts_with('-') => format!("{}{}", r, i),
            (Some(r), Some(i)) => format!("{}+{}", r, i),
        }
    }

    fn parse(&self, s: &str) -> Result<Gi> {
        let mut terms: Vec<(usize, String)> = Vec::new();
        let mut cur = String::new();
        let mut start = 0;
        for (pos, ch) in s.char_indices() {
            if ch.is_whitespace() {
                continue;
            }
            if (ch == '+' || ch == '-') && !cur.is_empty() && !cur.ends_with('/') && !cur.ends_with('*') {
                terms.push((start, std::mem::take(&mut cur)));
                start = pos;
            }
            if cur.is_empty() {
                start = pos;
            }
            cur.push(ch);
        }
        if !cur.is_empty() {
            terms.push((start, cur));
        }
        if terms.is_empty() {
            return Err(Error::parse(0, "empty Gaussian number"));
        }
        let mut out = self.zero();
        for (pos, t) in terms {
            let t = t.strip_prefix('+').unwrap_or(&t).to_string();
            if let Some(coef) = t.strip_suffix('i') {
                let coef = coef.strip_suffix('*').unwrap_or(coef);
                let c = match coef {
                    "" => BigRational::one(),
                    "-" => -BigRational::one(),
                    _ => parse_rat(coef, pos)?,
                };
                out.im += c;
            } else {
                out.re += parse_rat(&t, pos)?;
            }
        }
        Ok(out)
    }

    fn sample(&self, rng: &mut dyn RngCore) -> Gi {
        let dens = [1i64, 1, 2, 3, 5];
        let draw = |rng: &mut dyn RngCore| {
            if rng.gen_bool(0.3) {
                BigRational::zero()
            } else {
                let n = rng.gen_range(-6i64..=6) * (self.p as i64).pow(rng.gen_range(0..2));
                BigRational::new(BigInt::from(n), BigInt::from(dens[rng.gen_range(0..dens.len())]))
            }
        };
        let mut x = Gi::new(draw(rng), draw(rng));
        if rng.gen_bool(0.3) {
            let pi = self.primes()[rng.gen_range(0..self.primes().len())].clone();
            x = self.mul(&x, &pi);
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_places_at_five() {
        let g = Gaussian::new(5);
        assert_eq!(g.kind(), &GaussianKind::Split { a: 1, b: 2 });
        let x = g.parse("2+i").unwrap();
        let v = g.valuations(&x);
        assert!(v.contains(&Val::int(1)) && v.contains(&Val::int(0)));
        assert_eq!(g.norm(&x).unwrap(), ExtNorm::one());
        assert_eq!(g.norm(&g.parse("1+i").unwrap()).unwrap(), ExtNorm::one());
        assert_eq!(g.norm(&g.parse("5").unwrap()).unwrap().val(), &Val::int(1));
    }

    #[test]
    fn ramified_and_inert() {
        let g2 = Gaussian::new(2);
        assert_eq!(g2.norm(&g2.parse("1+i").unwrap()).unwrap().val(), &Val::ratio(1, 2));
        let g3 = Gaussian::new(3);
        assert_eq!(g3.norm(&g3.parse("1/3i").unwrap()).unwrap().val(), &Val::int(-1));
        assert_eq!(g3.pth_root_mod_p(&g3.i()).unwrap(), Some(Gi::ints(0, 2)));
    }

    #[test]
    fn parse_and_format() {
        let g = Gaussian::new(5);
        for s in ["0", "i", "-i", "1/2-3i", "3+1/3i", "-7"] {
            assert_eq!(g.format(&g.parse(s).unwrap()), s);
        }
        assert_eq!(g.parse("2*i - 1").unwrap(), Gi::ints(-1, 2));
        assert!(g.parse("").is_err());
    }
}
