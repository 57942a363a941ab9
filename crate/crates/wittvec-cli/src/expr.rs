//! `compute` expressions: `op arg …` with vectors written `(a, b, …)`.

use num_bigint::BigInt;
use wittvec::{ExtNorm, GhostVec, NormedRing, WittVec};

use crate::UsageError;

/// A token with its byte offset in the expression.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tok<'a> {
    pub pos: usize,
    pub text: &'a str,
}

/// Splits at top-level occurrences of `sep`; whitespace separators also
/// collapse runs.
fn split_top(s: &str, base: usize, sep: fn(char) -> bool) -> Result<Vec<Tok<'_>>, UsageError> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = None;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' | '[' | '<' => depth += 1,
            ')' | ']' | '>' => {
                depth -= 1;
                if depth < 0 {
                    return Err(UsageError(format!("parse error at {}: unbalanced {:?}", base + i, ch)));
                }
            }
            _ => {}
        }
        if depth == 0 && sep(ch) {
            if let Some(st) = start.take() {
                out.push(Tok { pos: base + st, text: &s[st..i] });
            }
        } else if start.is_none() && !ch.is_whitespace() {
            start = Some(i);
        }
    }
    if depth != 0 {
        return Err(UsageError(format!("parse error at {}: unbalanced brackets", base + s.len())));
    }
    if let Some(st) = start {
        out.push(Tok { pos: base + st, text: &s[st..] });
    }
    Ok(out)
}

pub fn tokens(expr: &str) -> Result<Vec<Tok<'_>>, UsageError> {
    split_top(expr, 0, char::is_whitespace)
}

fn elem<R: NormedRing>(ring: &R, t: &Tok) -> Result<R::Elem, UsageError> {
    ring.parse(t.text.trim()).map_err(|e| match e {
        wittvec::Error::Parse { pos, msg } => UsageError(format!("parse error at {}: {}", t.pos + pos, msg)),
        other => UsageError(format!("parse error at {}: {}", t.pos, other)),
    })
}

pub fn vector<R: NormedRing>(ring: &R, t: &Tok) -> Result<Vec<R::Elem>, UsageError> {
    let s = t.text.trim();
    let inner = s
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| UsageError(format!("parse error at {}: expected (a, b, ...)", t.pos)))?;
    let parts = split_top(inner, t.pos + 1, |c| c == ',')?;
    if parts.is_empty() {
        return Err(UsageError(format!("parse error at {}: empty vector", t.pos)));
    }
    parts.iter().map(|p| elem(ring, p)).collect()
}

fn integer(t: &Tok) -> Result<BigInt, UsageError> {
    t.text.trim().parse().map_err(|_| UsageError(format!("parse error at {}: expected an integer", t.pos)))
}

fn witt<R: NormedRing>(ring: &R, t: &Tok) -> Result<WittVec<R>, UsageError> {
    WittVec::new(ring.clone(), vector(ring, t)?).map_err(eval_err)
}

fn eval_err(e: wittvec::Error) -> UsageError {
    UsageError(format!("evaluation error: {}", e))
}

pub fn render_vec<R: NormedRing>(ring: &R, comps: &[R::Elem]) -> String {
    let parts: Vec<String> = comps.iter().map(|c| ring.format(c)).collect();
    format!("({})", parts.join(", "))
}

/// `p^e` with `e` the exponent of the norm, or `0`.
pub fn render_norm(n: &ExtNorm) -> String {
    match n.exponent() {
        None => "0".into(),
        Some(e) if e.is_integer() => format!("p^{}", e),
        Some(e) => format!("p^({})", e),
    }
}

/// Evaluates one expression and returns its printed result.
pub fn compute<R: NormedRing>(ring: &R, expr: &str) -> Result<String, UsageError> {
    let toks = tokens(expr)?;
    let (op, args) = toks.split_first().ok_or_else(|| UsageError("parse error at 0: empty expression".into()))?;
    let want = |n: usize| -> Result<(), UsageError> {
        if args.len() == n {
            Ok(())
        } else {
            Err(UsageError(format!("parse error at {}: {} takes {} argument(s)", op.pos, op.text, n)))
        }
    };
    let out = match op.text {
        "ghost" => {
            want(1)?;
            let x = witt(ring, &args[0])?;
            render_vec(ring, x.ghost().comps())
        }
        "unghost" => {
            want(1)?;
            let g = GhostVec::new(ring.clone(), vector(ring, &args[0])?).map_err(eval_err)?;
            render_vec(ring, g.unghost().map_err(eval_err)?.comps())
        }
        "add" | "sub" | "mul" => {
            want(2)?;
            let x = witt(ring, &args[0])?;
            let y = witt(ring, &args[1])?;
            let z = match op.text {
                "add" => x.add(&y),
                "sub" => x.sub(&y),
                _ => x.mul(&y),
            }
            .map_err(eval_err)?;
            render_vec(ring, z.comps())
        }
        "neg" => {
            want(1)?;
            render_vec(ring, witt(ring, &args[0])?.neg().map_err(eval_err)?.comps())
        }
        "frob" => {
            want(1)?;
            render_vec(ring, witt(ring, &args[0])?.frobenius().map_err(eval_err)?.comps())
        }
        "ver" => {
            want(1)?;
            render_vec(ring, witt(ring, &args[0])?.verschiebung().comps())
        }
        "teich" => {
            want(2)?;
            let r = elem(ring, &args[0])?;
            let n = integer(&args[1])?;
            let n: usize = n.try_into().map_err(|_| UsageError(format!("parse error at {}: bad level", args[1].pos)))?;
            render_vec(ring, WittVec::teichmuller(ring, &r, n).comps())
        }
        "int" => {
            want(2)?;
            let k = integer(&args[0])?;
            let n: usize = integer(&args[1])?.try_into().map_err(|_| UsageError(format!("parse error at {}: bad level", args[1].pos)))?;
            render_vec(ring, WittVec::from_integer(ring, &k, n).comps())
        }
        "wnorm" => {
            want(1)?;
            render_norm(&witt(ring, &args[0])?.witt_norm().map_err(eval_err)?)
        }
        "norm" => {
            want(1)?;
            render_norm(&ring.norm(&elem(ring, &args[0])?).map_err(eval_err)?)
        }
        other => return Err(UsageError(format!("parse error at {}: unknown operation {:?}", op.pos, other))),
    };
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use wittvec::rings::{Integers, Rationals};

    #[test]
    fn golden_expressions() {
        let z = Integers::new(2);
        assert_eq!(compute(&z, "ghost (1,1)").unwrap(), "(1, 3)");
        assert_eq!(compute(&z, "add (1,0) (1,0)").unwrap(), "(2, -1)");
        let q = Rationals::new(2);
        assert_eq!(compute(&q, "wnorm (2,-1)").unwrap(), "p^0");
    }

    #[test]
    fn errors_carry_positions() {
        let z = Integers::new(2);
        let e = compute(&z, "add (1,0) (1,x)").unwrap_err();
        assert!(e.0.contains("at 13"), "{}", e.0);
        assert!(compute(&z, "frob (1,0").is_err());
        assert!(compute(&z, "nope (1)").is_err());
    }
}
