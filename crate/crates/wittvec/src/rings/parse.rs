use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};

pub fn parse_int(s: &str, offset: usize) -> Result<BigInt> {
    let t = s.trim();
    BigInt::from_str(t).map_err(|_| Error::parse(offset, format!("expected integer, found {:?}", t)))
}

pub fn parse_rat(s: &str, offset: usize) -> Result<BigRational> {
    let t = s.trim();
    match t.split_once('/') {
        Some((n, d)) => {
            let n = parse_int(n, offset)?;
            let d = parse_int(d, offset + n.to_string().len() + 1)?;
            if d.is_zero() {
                return Err(Error::parse(offset, "zero denominator"));
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(parse_int(t, offset)?)),
    }
}

/// Splits `[a, b, c]` into trimmed entries with their byte offsets.
pub fn split_list(s: &str) -> Result<Vec<(usize, &str)>> {
    let lead = s.len() - s.trim_start().len();
    let t = s.trim();
    if !t.starts_with('[') || !t.ends_with(']') {
        return Err(Error::parse(lead, "expected a bracketed coefficient list"));
    }
    let inner = &t[1..t.len() - 1];
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut pos = lead + 1;
    for part in inner.split(',') {
        out.push((pos, part));
        pos += part.len() + 1;
    }
    Ok(out)
}

pub fn format_rat(x: &BigRational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_rationals_and_lists() {
        assert_eq!(parse_rat(" -3/6 ", 0).unwrap(), BigRational::new(BigInt::from(-1), BigInt::from(2)));
        assert!(parse_rat("1/0", 0).is_err());
        let l = split_list("[1, 2/3,x]").unwrap();
        assert_eq!(l.len(), 3);
        assert_eq!(l[2], (8, "x"));
        assert!(matches!(parse_int("x", 8), Err(Error::Parse { pos: 8, .. })));
        assert!(split_list("[]").unwrap().is_empty());
    }
}
