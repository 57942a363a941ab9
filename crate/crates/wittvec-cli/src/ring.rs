//! Ring selection from `--ring` values.

use std::path::Path;

use wittvec::rings::{CycloIntegers, Cyclotomic, Gaussian, Integers, PerfPoly, Rationals, Truncated};

use crate::UsageError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RingSpec {
    Z,
    Q,
    Qi,
    /// `ℚ(ζ_{p^k})`.
    Qzeta(u32),
    /// `ℤ[ζ_{p^k}]`.
    Zzeta(u32),
    /// `ℤ[ζ_{p^k}]/p^m`.
    Trunc { k: u32, m: u32 },
    /// `F_p[x^{1/p^∞}]` at the given root depth.
    Perf(u32),
}

pub enum AnyRing {
    Z(Integers),
    Q(Rationals),
    Qi(Gaussian),
    Qzeta(Cyclotomic),
    Zzeta(CycloIntegers),
    Trunc(Truncated),
    Perf(PerfPoly),
}

fn prime_exponent(n: u64, p: u64) -> Option<u32> {
    let mut k = 0;
    let mut m = n;
    while m > 1 {
        if m % p != 0 {
            return None;
        }
        m /= p;
        k += 1;
    }
    Some(k)
}

fn number(s: &str, what: &str) -> Result<u64, UsageError> {
    s.trim().parse().map_err(|_| UsageError(format!("bad {} {:?}", what, s)))
}

/// Reads `Z`, `Q`, `Qi`, `Q(zeta_N)`, `Z[zeta_N]`, `Z/p^M`,
/// `Z[zeta_N]/p^M` or `Fperf`, or a file whose first non-comment line is
/// one of these.
pub fn parse_ring(raw: &str, p: u64, depth: u32) -> Result<RingSpec, UsageError> {
    let text = if Path::new(raw).is_file() {
        let body = std::fs::read_to_string(raw).map_err(|e| UsageError(format!("cannot read {}: {}", raw, e)))?;
        body.lines()
            .map(str::trim)
            .find(|l| !l.is_empty() && !l.starts_with('#'))
            .ok_or_else(|| UsageError(format!("{} holds no ring", raw)))?
            .to_string()
    } else {
        raw.to_string()
    };
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let zeta = |body: &str| -> Result<u32, UsageError> {
        let n = number(body, "cyclotomic order")?;
        prime_exponent(n, p).ok_or_else(|| UsageError(format!("{} is not a power of p = {}", n, p)))
    };
    let modulus = |tail: &str| -> Result<u32, UsageError> {
        let (base, e) = tail.split_once('^').ok_or_else(|| UsageError(format!("expected p^M, got {:?}", tail)))?;
        if number(base, "modulus base")? != p {
            return Err(UsageError(format!("modulus base must be p = {}", p)));
        }
        let m = number(e, "precision")? as u32;
        if m == 0 {
            return Err(UsageError("precision must be positive".into()));
        }
        Ok(m)
    };
    Ok(match s.as_str() {
        "Z" => RingSpec::Z,
        "Q" => RingSpec::Q,
        "Qi" | "Q(i)" => RingSpec::Qi,
        "Fperf" => RingSpec::Perf(depth),
        _ => {
            if let Some(body) = s.strip_prefix("Q(zeta_").and_then(|r| r.strip_suffix(')')) {
                RingSpec::Qzeta(zeta(body)?)
            } else if let Some(rest) = s.strip_prefix("Z[zeta_") {
                let (body, tail) = rest.split_once(']').ok_or_else(|| UsageError("unclosed [".into()))?;
                let k = zeta(body)?;
                match tail.strip_prefix('/') {
                    None if tail.is_empty() => RingSpec::Zzeta(k),
                    Some(t) => RingSpec::Trunc { k, m: modulus(t)? },
                    None => return Err(UsageError(format!("unexpected {:?}", tail))),
                }
            } else if let Some(t) = s.strip_prefix("Z/") {
                RingSpec::Trunc { k: 0, m: modulus(t)? }
            } else {
                return Err(UsageError(format!("unknown ring {:?}", text)));
            }
        }
    })
}

impl RingSpec {
    pub fn build(&self, p: u64) -> Result<AnyRing, UsageError> {
        if p < 2 || !(2..p).all(|d| p % d != 0) {
            return Err(UsageError(format!("p = {} is not prime", p)));
        }
        Ok(match *self {
            RingSpec::Z => AnyRing::Z(Integers::new(p)),
            RingSpec::Q => AnyRing::Q(Rationals::new(p)),
            RingSpec::Qi => AnyRing::Qi(Gaussian::new(p)),
            RingSpec::Qzeta(k) => AnyRing::Qzeta(Cyclotomic::new(p, k)),
            RingSpec::Zzeta(k) => AnyRing::Zzeta(CycloIntegers::new(p, k)),
            RingSpec::Trunc { k, m } => {
                if (p as f64).powi(m as i32) >= (1u64 << 31) as f64 {
                    return Err(UsageError(format!("p^M = {}^{} is too large", p, m)));
                }
                AnyRing::Trunc(Truncated::new(p, k, m))
            }
            RingSpec::Perf(d) => AnyRing::Perf(PerfPoly::new(p, 1, d)),
        })
    }
}

/// Runs a generic body against whichever ring was selected.
#[macro_export]
macro_rules! with_ring {
    ($any:expr, |$r:ident| $body:expr) => {
        match $any {
            $crate::ring::AnyRing::Z(ref $r) => $body,
            $crate::ring::AnyRing::Q(ref $r) => $body,
            $crate::ring::AnyRing::Qi(ref $r) => $body,
            $crate::ring::AnyRing::Qzeta(ref $r) => $body,
            $crate::ring::AnyRing::Zzeta(ref $r) => $body,
            $crate::ring::AnyRing::Trunc(ref $r) => $body,
            $crate::ring::AnyRing::Perf(ref $r) => $body,
        }
    };
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_names() {
        assert_eq!(parse_ring("Z", 2, 4).unwrap(), RingSpec::Z);
        assert_eq!(parse_ring("Q(zeta_8)", 2, 4).unwrap(), RingSpec::Qzeta(3));
        assert_eq!(parse_ring("Z[zeta_9]/3^2", 3, 4).unwrap(), RingSpec::Trunc { k: 2, m: 2 });
        assert_eq!(parse_ring("Z/2^6", 2, 4).unwrap(), RingSpec::Trunc { k: 0, m: 6 });
        assert!(parse_ring("Q(zeta_6)", 2, 4).is_err());
        assert!(parse_ring("R", 2, 4).is_err());
    }
}
