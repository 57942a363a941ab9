//! `wittvec`: command line driver for the Witt vector library.

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use serde_json::json;

use wittvec::arrow::{ArrowElt, LevelBound, OvercParam};
use wittvec::artin::invariant_classify;
use wittvec::kernelnorm::verify_kernel_norm;
use wittvec::perfect::{witt_perfect_test, Instance};
use wittvec::rings::{Gaussian, NormedRing};
use wittvec::tilt::{tilt_val, TiltRing};

mod expr;
mod report;
mod ring;
mod suites;

use expr::render_norm;
use report::{reports_json, SuiteReport};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UsageError(pub String);

#[derive(Parser)]
#[command(name = "wittvec", version, about = "Witt vectors, their norms and overconvergent variants")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct Common {
    /// The prime.
    #[arg(long, default_value_t = 2)]
    p: u64,
    /// Ring name or a file holding one.
    #[arg(long, default_value = "Q")]
    ring: String,
    /// Overconvergence parameter, as `n` or `n/d`.
    #[arg(long, default_value = "1")]
    b: String,
    /// Witt level or tilt depth.
    #[arg(long, default_value_t = 3)]
    depth: u32,
    /// Precision for truncated rings.
    #[arg(long)]
    precision: Option<u32>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    json: bool,
    /// List passing cases too.
    #[arg(long)]
    verbose: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a named suite, or `all`.
    Verify {
        suite: String,
        #[command(flatten)]
        c: Common,
    },
    /// Evaluate one expression, e.g. `ghost (1,1)`.
    Compute {
        expr: String,
        #[command(flatten)]
        c: Common,
    },
    /// `|p^m|_{W,b}` of the integer `k` in the arrow ring.
    Arrow {
        #[arg(long, default_value = "1")]
        k: String,
        #[command(flatten)]
        c: Common,
    },
    /// Witt-perfectness of `Z`, `Z[zeta_N]`, `Z[zeta_N]/p^M` or `tower`.
    Perfect {
        #[command(flatten)]
        c: Common,
    },
    /// Valuation of `eps - 1` in the tilt of the selected truncated ring.
    Tilt {
        #[command(flatten)]
        c: Common,
    },
    /// Norm of the Frobenius kernel element with first ghost component `t`.
    Kernel {
        t: String,
        #[arg(long, default_value_t = 1)]
        j: usize,
        #[command(flatten)]
        c: Common,
    },
    /// Growth of `(f, f, ...)` over `Q(i)`.
    Artin {
        f: String,
        #[command(flatten)]
        c: Common,
    },
}

fn parse_b(s: &str) -> Result<OvercParam, UsageError> {
    let bad = || UsageError(format!("bad --b {:?}", s));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim().parse::<i64>().map_err(|_| bad())?, d.trim().parse::<i64>().map_err(|_| bad())?),
        None => (s.trim().parse::<i64>().map_err(|_| bad())?, 1),
    };
    OvercParam::ratio(n, d).map_err(|e| UsageError(format!("bad --b {:?}: {}", s, e)))
}

fn build_ring(c: &Common) -> Result<ring::AnyRing, UsageError> {
    let mut s = ring::parse_ring(&c.ring, c.p, c.depth)?;
    if let (Some(m), ring::RingSpec::Trunc { k, .. }) = (c.precision, &s) {
        s = ring::RingSpec::Trunc { k: *k, m };
    }
    s.build(c.p)
}

/// Prints the value and returns the exit status.
fn emit(c: &Common, text: String, json: serde_json::Value, ok: bool) -> u8 {
    let out = if c.json { json.to_string() } else { text };
    let _ = writeln!(std::io::stdout(), "{}", out);
    if ok {
        0
    } else {
        1
    }
}

fn verify(suite: &str, c: &Common) -> Result<u8, UsageError> {
    build_ring(c)?;
    let names: Vec<&str> = if suite == "all" { suites::SUITES.to_vec() } else { vec![suite] };
    let mut reports: Vec<SuiteReport> = Vec::new();
    for n in names {
        let r = suites::run_suite(n, c.p, c.seed)
            .ok_or_else(|| UsageError(format!("unknown suite {:?}; expected one of {} or all", n, suites::SUITES.join(", "))))?;
        reports.push(r);
    }
    let ok = reports.iter().all(SuiteReport::passed);
    let text: String = reports.iter().map(|r| r.to_text(c.verbose)).collect();
    Ok(emit(c, text.trim_end().to_string(), reports_json(&reports), ok))
}

fn compute(e: &str, c: &Common) -> Result<u8, UsageError> {
    let r = build_ring(c)?;
    let out = with_ring!(r, |ring| expr::compute(ring, e))?;
    Ok(emit(c, out.clone(), json!({"schema": report::SCHEMA, "expr": e, "value": out}), true))
}

fn arrow(k: &str, c: &Common) -> Result<u8, UsageError> {
    let b = parse_b(&c.b)?;
    let r = build_ring(c)?;
    let k: BigInt = k.parse().map_err(|_| UsageError(format!("bad integer {:?}", k)))?;
    let depth = c.depth as usize;
    let n = with_ring!(r, |ring| {
        let x = ArrowElt::from_integer(ring, &k, depth).with_certificate(Some(LevelBound::integral()));
        x.arrow_norm(&b).map_err(|e| UsageError(format!("evaluation error: {}", e)))
    })?;
    let status = if n.is_exact() { "exact" } else { "lower bound" };
    let at = n.attained_at.map_or("none".to_string(), |a| a.to_string());
    let text = format!("{} ({}, attained at level {})", render_norm(&n.value), status, at);
    let j = json!({"schema": report::SCHEMA, "norm": render_norm(&n.value), "exact": n.is_exact(), "attained_at": n.attained_at});
    Ok(emit(c, text, j, true))
}

fn perfect(c: &Common) -> Result<u8, UsageError> {
    let inst = if c.ring == "tower" {
        Instance::Tower { p: c.p, k: c.depth as usize }
    } else {
        match ring::parse_ring(&c.ring, c.p, c.depth)? {
            ring::RingSpec::Z => Instance::Integers { p: c.p },
            ring::RingSpec::Zzeta(k) => Instance::CycloIntegers { p: c.p, k },
            ring::RingSpec::Trunc { k, m } => Instance::Truncated { p: c.p, k, m: c.precision.unwrap_or(m) },
            other => return Err(UsageError(format!("perfect needs Z, Z[zeta_N], Z[zeta_N]/p^M or tower, not {:?}", other))),
        }
    };
    let v = witt_perfect_test(&inst).map_err(|e| UsageError(format!("evaluation error: {}", e)))?;
    let mut text = format!("{}: {:?}", inst.name(), v.verdict);
    if let Some(ce) = &v.counterexample {
        text.push_str(&format!(" ({:?} fails at level {} on {:?})", ce.condition, ce.level, ce.a));
    }
    let j = json!({
        "schema": report::SCHEMA,
        "instance": inst.name(),
        "verdict": format!("{:?}", v.verdict),
        "frobenius_surjective": v.frobenius_surjective,
        "pa_roots": v.pa_roots,
        "counterexample": v.counterexample.as_ref().map(|ce| json!({"condition": format!("{:?}", ce.condition), "level": ce.level, "a": ce.a})),
    });
    Ok(emit(c, text, j, true))
}

fn tilt(c: &Common) -> Result<u8, UsageError> {
    let base = match build_ring(c)? {
        ring::AnyRing::Trunc(t) => t,
        _ => return Err(UsageError("tilt needs a truncated ring Z[zeta_N]/p^M".into())),
    };
    let t = TiltRing::new(base, c.depth as usize);
    let e = wittvec::tilt::epsilon(&t).map_err(|e| UsageError(format!("evaluation error: {}", e)))?;
    let d = t.sub(&e, &t.one());
    let v = tilt_val(&t, &d).map_or("inf".to_string(), |v| v.to_string());
    let n = t.tilt_norm(&d);
    let text = format!("eps = {}\nv(eps - 1) = {}\n|eps - 1| = {}", e, v, render_norm(&n));
    let j = json!({"schema": report::SCHEMA, "eps": e.to_string(), "val": v, "norm": render_norm(&n)});
    Ok(emit(c, text, j, true))
}

fn kernel(t: &str, j: usize, c: &Common) -> Result<u8, UsageError> {
    let r = build_ring(c)?;
    let rep = with_ring!(r, |ring| {
        let te = ring.parse(t).map_err(|e| UsageError(format!("parse error: {}", e)))?;
        verify_kernel_norm(ring, &te, j).map_err(|e| UsageError(format!("evaluation error: {}", e)))
    })?;
    let text = format!(
        "|w_1(x)| = {}\n|x|_W = {}\nconstant = {}\nconstant * |x|_W = {}\nequal = {}",
        render_norm(&rep.lhs),
        render_norm(&rep.witt_norm),
        render_norm(&rep.constant),
        render_norm(&rep.rhs),
        rep.equal()
    );
    let js = json!({
        "schema": report::SCHEMA,
        "witt_norm": render_norm(&rep.witt_norm),
        "lhs": render_norm(&rep.lhs),
        "rhs": render_norm(&rep.rhs),
        "equal": rep.equal(),
        "frobenius_vanishes": rep.frobenius_vanishes,
    });
    Ok(emit(c, text, js, rep.equal()))
}

fn artin(f: &str, c: &Common) -> Result<u8, UsageError> {
    let g = Gaussian::new(c.p);
    let fe = g.parse(f).map_err(|e| UsageError(format!("parse error: {}", e)))?;
    let cl = invariant_classify(&g, &fe, c.depth as usize).map_err(|e| UsageError(format!("{}", e)))?;
    let profile: Vec<String> = cl.report.profile.iter().map(render_norm).collect();
    let text = format!(
        "f = {} over {}\nprofile = [{}]\nobserved = {:?}\npredicted = {:?}",
        cl.report.f,
        cl.report.field,
        profile.join(", "),
        cl.report.verdict,
        cl.predicted
    );
    let j = json!({
        "schema": report::SCHEMA,
        "f": cl.report.f,
        "profile": profile,
        "observed": format!("{:?}", cl.report.verdict),
        "predicted": format!("{:?}", cl.predicted),
    });
    Ok(emit(c, text, j, cl.matches()))
}

fn run(cli: Cli) -> Result<u8, UsageError> {
    match &cli.cmd {
        Cmd::Verify { suite, c } => verify(suite, c),
        Cmd::Compute { expr, c } => compute(expr, c),
        Cmd::Arrow { k, c } => arrow(k, c),
        Cmd::Perfect { c } => perfect(c),
        Cmd::Tilt { c } => tilt(c),
        Cmd::Kernel { t, j, c } => kernel(t, *j, c),
        Cmd::Artin { f, c } => artin(f, c),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(UsageError(msg)) => {
            eprintln!("error: {}", msg);
            ExitCode::from(2)
        }
    }
}
