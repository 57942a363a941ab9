//! Named verification suites. Every suite is a pure function of `p` and
//! the seed.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wittvec::arrow::{ArrowElt, LevelBound, OvercParam};
use wittvec::artin::{invariant_classify, teichmuller_phi_invariance};
use wittvec::kernelnorm::verify_kernel_norm;
use wittvec::perfect::{
    build_root_sequence, frobenius_matches, pa_root, solve_frobenius, solve_frobenius_normed, witt_perfect_test, Instance,
    Verdict,
};
use wittvec::rings::{CycloIntegers, CycloShape, Cyclotomic, Gaussian, Gi, Integers, Rationals, Truncated};
use wittvec::tilt::{charp_overconv_norm, epsilon, untilt, TiltRing};
use wittvec::universal::{frob_poly, prod_poly, sum_poly};
use wittvec::{universal, ExtNorm, NormedRing, WittVec};

use crate::expr::{render_norm, render_vec};
use crate::report::SuiteReport;

pub const SUITES: [&str; 8] = ["ghost", "universal", "norms", "arrow", "perfect", "tilt", "kernel", "artin"];

pub fn run_suite(name: &str, p: u64, seed: u64) -> Option<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = SuiteReport::new(name, p, seed);
    match name {
        "ghost" => ghost(&mut rep, &mut rng),
        "universal" => universal_suite(&mut rep, &mut rng),
        "norms" => norms(&mut rep, &mut rng),
        "arrow" => arrow(&mut rep, &mut rng),
        "perfect" => perfect(&mut rep, &mut rng),
        "tilt" => tilt(&mut rep, &mut rng),
        "kernel" => kernel(&mut rep, &mut rng),
        "artin" => artin(&mut rep),
        _ => return None,
    }
    Some(rep)
}

fn small_vec<R: NormedRing>(ring: &R, rng: &mut ChaCha8Rng, len: usize) -> WittVec<R> {
    let comps = (0..len).map(|_| ring.sample(rng)).collect();
    WittVec::new(ring.clone(), comps).expect("nonempty")
}

fn int_vec(ring: &Integers, rng: &mut ChaCha8Rng, len: usize, bound: i64) -> WittVec<Integers> {
    let comps = (0..len).map(|_| ring.from_i64(rng.gen_range(-bound..=bound))).collect();
    WittVec::new(ring.clone(), comps).expect("nonempty")
}

fn ghost(rep: &mut SuiteReport, rng: &mut ChaCha8Rng) {
    let p = rep.p;
    let z = Integers::new(p);
    if p == 2 {
        let x = WittVec::new(z.clone(), vec![z.one(), z.one()]).expect("length 2");
        let g = render_vec(&z, x.ghost().comps());
        rep.push("golden ghost (1,1)", g == "(1, 3)", g, "(1, 3)");
    }
    let q = Rationals::new(p);
    for i in 0..40 {
        let x = small_vec(&q, rng, 3);
        let back = x.ghost().unghost();
        let ok = back.as_ref().map_or(false, |b| *b == x);
        rep.push(format!("Q roundtrip {:03}", i), ok, render_vec(&q, x.comps()), back.map_or("error".into(), |b| render_vec(&q, b.comps())));
        let y = small_vec(&q, rng, 3);
        let lhs = x.add(&y).expect("same length").ghost();
        let rhs: Vec<_> = x.ghost().comps().iter().zip(y.ghost().comps()).map(|(a, b)| q.add(a, b)).collect();
        rep.push(format!("Q additive {:03}", i), lhs.comps() == rhs.as_slice(), render_vec(&q, lhs.comps()), render_vec(&q, &rhs));
        let lhs = x.mul(&y).expect("same length").ghost();
        let rhs: Vec<_> = x.ghost().comps().iter().zip(y.ghost().comps()).map(|(a, b)| q.mul(a, b)).collect();
        rep.push(format!("Q multiplicative {:03}", i), lhs.comps() == rhs.as_slice(), render_vec(&q, lhs.comps()), render_vec(&q, &rhs));
    }
}

fn universal_suite(rep: &mut SuiteReport, rng: &mut ChaCha8Rng) {
    for p in [2u64, 3, 5] {
        let z = Integers::new(p);
        for i in 0..=universal::cap(p) {
            let pi = p.pow(i);
            let s = sum_poly(p, i).expect("within cap");
            let m = prod_poly(p, i).expect("within cap");
            let f = frob_poly(p, i).expect("within cap");
            rep.push(format!("p={} i={} sum degree", p, i), s.is_weighted_homogeneous(pi), "weighted", format!("{}", pi));
            rep.push(format!("p={} i={} prod degree", p, i), m.is_weighted_homogeneous(2 * pi), "weighted", format!("{}", 2 * pi));
            rep.push(format!("p={} i={} frob degree", p, i), f.is_weighted_homogeneous(pi * p), "weighted", format!("{}", pi * p));
            for t in 0..5 {
                let x = int_vec(&z, rng, i as usize + 1, 3);
                let y = int_vec(&z, rng, i as usize + 1, 3);
                let sum = x.add(&y).expect("same length");
                let lhs = sum.ghost().comps()[i as usize].clone();
                let rhs = z.add(&x.ghost().comps()[i as usize], &y.ghost().comps()[i as usize]);
                rep.push(format!("p={} i={} sum ghost {}", p, i, t), lhs == rhs, z.format(&lhs), z.format(&rhs));
            }
        }
    }
}

fn norm_laws<R: NormedRing>(rep: &mut SuiteReport, ring: &R, rng: &mut ChaCha8Rng, samples: usize) {
    let p = ring.p();
    let name = ring.name();
    let pm = ring.caps().power_multiplicative;
    for i in 0..samples {
        let x = small_vec(ring, rng, 3);
        let y = small_vec(ring, rng, 3);
        let nx = x.witt_norm().expect("norm");
        let ny = y.witt_norm().expect("norm");
        let s = x.add(&y).expect("add").witt_norm().expect("norm");
        let bound = nx.clone().max(ny.clone());
        rep.push(format!("{} subadditive {:03}", name, i), s <= bound, render_norm(&s), render_norm(&bound));
        let m = x.mul(&y).expect("mul").witt_norm().expect("norm");
        let prod = nx.mul(&ny);
        rep.push(format!("{} submultiplicative {:03}", name, i), m <= prod, render_norm(&m), render_norm(&prod));
        let f = x.frobenius().expect("frobenius").witt_norm().expect("norm");
        let fp = nx.pow_int(p);
        rep.push(format!("{} frobenius bound {:03}", name, i), f <= fp, render_norm(&f), render_norm(&fp));
        let v = x.verschiebung().witt_norm().expect("norm");
        let vr = nx.root(p);
        rep.push(format!("{} verschiebung exact {:03}", name, i), v == vr, render_norm(&v), render_norm(&vr));
        if pm {
            let mut comps = x.comps().to_vec();
            comps.resize(2 * comps.len() - 1, ring.zero());
            let xp = WittVec::new(ring.clone(), comps).expect("nonempty");
            let sq = xp.mul(&xp).expect("mul").witt_norm().expect("norm");
            let n2 = nx.pow_int(2);
            rep.push(format!("{} square lower bound {:03}", name, i), sq >= n2, render_norm(&sq), render_norm(&n2));
        }
    }
}

fn norms(rep: &mut SuiteReport, rng: &mut ChaCha8Rng) {
    let p = rep.p;
    norm_laws(rep, &Rationals::new(p), rng, 60);
    norm_laws(rep, &Gaussian::new(p), rng, 30);
    let k = if p == 2 { 3 } else { 1 };
    norm_laws(rep, &Cyclotomic::new(p, k), rng, 15);
}

fn arrow(rep: &mut SuiteReport, rng: &mut ChaCha8Rng) {
    let p = rep.p;
    let q = Rationals::new(p);
    for m in 0..=3u32 {
        for (bn, bd) in [(1i64, 4i64), (1, 2), (1, 1), (2, 1)] {
            let b = OvercParam::ratio(bn, bd).expect("positive");
            let x = ArrowElt::from_integer(&q, &BigInt::from(p).pow(m), m as usize + 2);
            let n = x.arrow_norm(&b).expect("norm");
            let bmin = if bn >= bd { BigRational::from_integer(1.into()) } else { BigRational::new(bn.into(), bd.into()) };
            let want = ExtNorm::p_pow(-bmin * BigRational::from_integer(m.into()));
            let attained = n.attained_at.map_or(false, |a| a <= m as usize + 1);
            let ok = n.is_exact() && n.value == want && attained;
            rep.push(format!("|p^{}|_(W,{}/{})", m, bn, bd), ok, render_norm(&n.value), render_norm(&want));
        }
    }
    let z = Integers::new(p);
    let mut done = 0;
    while done < 30 {
        let cases = sandwich_sample(p, &z, rng);
        if cases.iter().any(|c| c.is_none()) {
            continue;
        }
        for (bv, c) in [1, 2, 4].into_iter().zip(cases) {
            let (ok, lhs, rhs) = c.expect("certified");
            rep.push(format!("sandwich {:02} b={}", done, bv), ok, lhs, rhs);
        }
        done += 1;
    }
}

/// One sample `x` over `Z` at depth 5 and, for `b ∈ {1, 2, 4}`, whether
/// `max(|x_1|, p^-b |F^-1 x|^p) ≤ |x|_(W,b) ≤ max(|x_1|, |F^-1 x|^p)`;
/// `None` where a norm is only a lower bound.
pub fn sandwich_sample(p: u64, z: &Integers, rng: &mut ChaCha8Rng) -> Vec<Option<(bool, String, String)>> {
    let top = int_vec(z, rng, 6, 20);
    let k = rng.gen_range(0..2u32);
    let top = WittVec::from_integer(z, &BigInt::from(p).pow(k), 5).mul(&top).expect("same length");
    let x = ArrowElt::from_top(&top, Some(LevelBound::integral())).expect("top level");
    let y = x.inverse_frobenius().expect("depth");
    let x1 = x.project(0).expect("level 0").witt_norm().expect("norm");
    [1i64, 2, 4]
        .into_iter()
        .map(|bv| {
            let b = OvercParam::ratio(bv, 1).expect("positive");
            let nx = x.arrow_norm(&b).expect("norm");
            let ny = y.arrow_norm(&b.div_int(p)).expect("norm");
            if !(nx.is_exact() && ny.is_exact()) {
                return None;
            }
            let lower = x1.clone().max(ny.value.pow_int(p).shrink(&BigRational::from_integer(bv.into())));
            let upper = x1.clone().max(ny.value.pow_int(p));
            let ok = lower <= nx.value && nx.value <= upper;
            Some((ok, render_norm(&nx.value), format!("[{}, {}]", render_norm(&lower), render_norm(&upper))))
        })
        .collect()
}

fn perfect(rep: &mut SuiteReport, rng: &mut ChaCha8Rng) {
    for p in [2u64, 3, 5] {
        let v = witt_perfect_test(&Instance::Integers { p }).expect("enumerable");
        let ok = v.verdict == Verdict::No && v.counterexample.as_ref().map_or(false, |c| c.a == vec![1]);
        rep.push(format!("Z p={} not Witt-perfect", p), ok, format!("{:?}", v.verdict), "No with a = 1");
    }
    let r8 = CycloIntegers::new(2, 3);
    let b = pa_root(&CycloShape::new(2, 3), &[BigInt::from(1)]).unwrap_or_default();
    let ok = !b.is_empty() && {
        let d = r8.sub(&r8.pow(&b, 2), &r8.from_i64(2));
        d.iter().all(|c| c % 4 == BigInt::from(0))
    };
    rep.push("Z[zeta_8] root of 2 mod 4", ok, format!("{:?}", b), "b^2 = 2 mod 4");
    let v = witt_perfect_test(&Instance::CycloIntegers { p: 3, k: 1 }).expect("enumerable");
    rep.push("Z[zeta_3] p=3", v.verdict == Verdict::No && !v.frobenius_surjective, format!("{:?}", v.verdict), "No");
    for (p, k) in [(2u64, 2usize), (3, 1)] {
        let v = witt_perfect_test(&Instance::Tower { p, k }).expect("enumerable");
        rep.push(format!("tower p={} k={}", p, k), v.verdict == Verdict::YesUpToLevel(k), format!("{:?}", v.verdict), format!("YesUpToLevel({})", k));
    }
    let seq = build_root_sequence(2, 3).expect("root sequence");
    for k in 1..=3 {
        let n = seq.ring().norm(seq.get(k)).expect("norm");
        let want = ExtNorm::p_pow(-BigRational::new(1.into(), BigInt::from(2).pow(k as u32)));
        rep.push(format!("root sequence |x_{}|", k), n == want, render_norm(&n), render_norm(&want));
    }
    let p = rep.p;
    let m = if p == 2 { 6 } else if p == 3 { 5 } else { 3 };
    let r = Truncated::integers_mod(p, m);
    for i in 0..40 {
        let n = rng.gen_range(0..(m as usize - 1).min(3));
        let y0 = small_vec(&r, rng, n + 2);
        let x = y0.frobenius().expect("frobenius");
        let key = format!("solve Z/{}^{} {:02}", p, m, i);
        match solve_frobenius(&x) {
            Ok(y) => {
                let ok = frobenius_matches(&y, &x, m - n as u32 - 1).unwrap_or(false);
                rep.push(key, ok, render_vec(&r, y.comps()), render_vec(&r, x.comps()));
            }
            Err(e) => rep.push(key, false, e.to_string(), render_vec(&r, x.comps())),
        }
    }
    let f = Cyclotomic::new(2, 2);
    for i in 0..10 {
        let c: Vec<Vec<BigRational>> = (0..2)
            .map(|_| (0..2).map(|_| BigRational::new(rng.gen_range(-4i64..=4).into(), BigInt::from(1i64 << rng.gen_range(0..3)))).collect())
            .collect();
        let x = WittVec::new(f.clone(), c).expect("length 2");
        let key = format!("normed solve Q(zeta_4) {:02}", i);
        match solve_frobenius_normed(&f, &x) {
            Ok(s) => rep.push(key, s.contract_holds(), render_norm(&s.y_norm.pow_int(2)), render_norm(&s.x_norm)),
            Err(e) => rep.push(key, false, e.to_string(), "solution"),
        }
    }
}

fn tilt(rep: &mut SuiteReport, rng: &mut ChaCha8Rng) {
    for (p, m, d) in [(2u64, 3u32, 3usize), (3, 2, 2)] {
        let t = TiltRing::new(Truncated::integers_mod(p, m), d);
        let elems: Vec<_> = (0..p).map(|r| t.from_int(&BigInt::from(r))).collect();
        let mut ok = true;
        for x in &elems {
            ok &= t.is_zero(&(0..p).fold(t.zero(), |acc, _| t.add(&acc, x)));
            for y in &elems {
                ok &= t.add(x, y) == t.add(y, x) && t.mul(x, y) == t.mul(y, x);
                for z in &elems {
                    ok &= t.add(&t.add(x, y), z) == t.add(x, &t.add(y, z));
                    ok &= t.mul(&t.mul(x, y), z) == t.mul(x, &t.mul(y, z));
                    ok &= t.mul(x, &t.add(y, z)) == t.add(&t.mul(x, y), &t.mul(x, z));
                }
            }
        }
        rep.push(format!("tilt of Z/{}^{} laws", p, m), ok, format!("{} elements", elems.len()), "field laws");
    }
    let base = Truncated::new(2, 5, 4);
    let t = TiltRing::new(base.clone(), 5);
    let e = epsilon(&t).expect("depth");
    let d = t.add(&e, &t.neg(&t.one()));
    let n = t.tilt_norm(&d);
    rep.push("|eps - 1|", n == ExtNorm::p_pow(BigRational::from_integer((-2).into())), render_norm(&n), "p^-2");
    let mut done = 0;
    while done < 10 {
        let a = t.sample(rng);
        let c = t.sample(rng);
        if !(t.norm_certified(&a) && t.norm_certified(&c)) {
            continue;
        }
        let x = WittVec::new(t.clone(), vec![a, c]).expect("length 2");
        for (bn, bd) in [(1i64, 4i64), (1, 2), (1, 1)] {
            let b = OvercParam::ratio(bn, bd).expect("positive");
            let u = untilt(&x, 2, &b).expect("depth");
            let an = u.arrow_norm(&b).expect("norm");
            let cn = charp_overconv_norm(&x, &b).expect("char p");
            rep.push(format!("untilt isometry {:02} b={}/{}", done, bn, bd), an.is_exact() && an.value == cn, render_norm(&an.value), render_norm(&cn));
        }
        done += 1;
    }
}

fn kernel(rep: &mut SuiteReport, rng: &mut ChaCha8Rng) {
    let p = rep.p;
    let q = Rationals::new(p);
    for j in 1..=2usize {
        for i in 0..15 {
            let v = rng.gen_range(-2i32..=2);
            let u = rng.gen_range(1i64..30);
            let u = if u % p as i64 == 0 { u + 1 } else { u };
            let pv = BigRational::from_integer(BigInt::from(p)).pow(v);
            let t = BigRational::from_integer(u.into()) * pv;
            let r = verify_kernel_norm(&q, &t, j).expect("torsion-free");
            rep.push(format!("Q j={} {:02}", j, i), r.equal() && r.frobenius_vanishes, render_norm(&r.lhs), render_norm(&r.rhs));
        }
    }
}

fn artin(rep: &mut SuiteReport) {
    for p in [5u64, 3] {
        let g = Gaussian::new(p);
        for a in -3i64..=3 {
            for b in -3i64..=3 {
                for den in [1i64, 2, 3] {
                    let f = Gi::new(BigRational::new(a.into(), den.into()), BigRational::new(b.into(), den.into()));
                    let c = invariant_classify(&g, &f, 3).expect("supported");
                    rep.push(
                        format!("Q(i) p={} f={}", p, g.format(&f)),
                        c.matches(),
                        format!("{:?}", c.report.verdict),
                        format!("{:?}", c.predicted),
                    );
                }
            }
        }
    }
    let g5 = Gaussian::new(5);
    let g3 = Gaussian::new(3);
    rep.push("teichmuller i p=5", teichmuller_phi_invariance(&g5, &g5.i()), "true", "true");
    rep.push("teichmuller i p=3", !teichmuller_phi_invariance(&g3, &g3.i()), "false", "false");
}
