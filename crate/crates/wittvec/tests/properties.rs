use num_bigint::BigInt;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use wittvec::arrow::{ArrowElt, LevelBound, OvercParam};
use wittvec::artin::{ghost_constant_profile, Growth};
use wittvec::kernelnorm::kernel_element_from_w1;
use wittvec::perfect::{frobenius_matches, solve_frobenius};
use wittvec::rings::{Cyclotomic, Gaussian, Integers, Rationals, Truncated};
use wittvec::tilt::TiltRing;
use wittvec::universal::{cap, frob_poly, prod_poly};
use wittvec::{ExtNorm, NormedRing, WittVec};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn vec_of<R: NormedRing>(ring: &R, r: &mut ChaCha8Rng, len: usize) -> WittVec<R> {
    WittVec::new(ring.clone(), (0..len).map(|_| ring.sample(r)).collect()).unwrap()
}

fn prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 5])
}

fn ring_norm_laws<R: NormedRing>(ring: &R, seed: u64) -> Result<(), TestCaseError> {
    let mut r = rng(seed);
    let (a, b) = (ring.sample(&mut r), ring.sample(&mut r));
    let (na, nb) = (ring.norm(&a).unwrap(), ring.norm(&b).unwrap());
    prop_assert!(ring.norm(&ring.add(&a, &b)).unwrap() <= na.clone().max(nb.clone()));
    prop_assert!(ring.norm(&ring.mul(&a, &b)).unwrap() <= na.mul(&nb));
    if ring.caps().power_multiplicative {
        for n in 1..=8u64 {
            prop_assert_eq!(ring.norm(&ring.pow(&a, n)).unwrap(), na.pow_int(n));
        }
    }
    let pa = ring.mul(&ring.from_int(&BigInt::from(ring.p())), &a);
    prop_assert_eq!(ring.div_p(&pa).unwrap(), a);
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn base_ring_norm_laws(seed in any::<u64>(), p in prime()) {
        ring_norm_laws(&Rationals::new(p), seed)?;
        ring_norm_laws(&Gaussian::new(p), seed)?;
        ring_norm_laws(&Cyclotomic::new(p, 1), seed)?;
    }

    #[test]
    fn frobenius_correction_skips_top_variable(p in prime(), i in 0u32..3) {
        prop_assume!(i <= cap(p));
        let f = frob_poly(p, i).unwrap();
        prop_assert!(!f.mentions_x(i as usize + 1));
        let m = prod_poly(p, i).unwrap();
        prop_assert!(m.is_homogeneous_in_x(p.pow(i)) && m.is_homogeneous_in_y(p.pow(i)));
    }

    #[test]
    fn frobenius_is_a_ring_map(seed in any::<u64>(), p in prime(), len in 2usize..4) {
        let ring = Rationals::new(p);
        let mut r = rng(seed);
        let (x, y) = (vec_of(&ring, &mut r, len), vec_of(&ring, &mut r, len));
        let f = |v: &WittVec<Rationals>| v.frobenius().unwrap();
        prop_assert_eq!(f(&x.add(&y).unwrap()), f(&x).add(&f(&y)).unwrap());
        prop_assert_eq!(f(&x.mul(&y).unwrap()), f(&x).mul(&f(&y)).unwrap());
        let g = x.ghost();
        let fg = f(&x).ghost();
        prop_assert_eq!(fg.comps(), &g.comps()[1..]);
    }

    #[test]
    fn teichmuller_scaling_is_exact(seed in any::<u64>(), p in prime()) {
        let ring = Rationals::new(p);
        let mut r = rng(seed);
        let x = vec_of(&ring, &mut r, 3);
        let c = ring.sample(&mut r);
        let lhs = x.teichmuller_mul(&c).witt_norm().unwrap();
        prop_assert_eq!(lhs, ring.norm(&c).unwrap().mul(&x.witt_norm().unwrap()));
    }

    #[test]
    fn mixed_lengths_are_rejected(seed in any::<u64>()) {
        let ring = Integers::new(2);
        let mut r = rng(seed);
        let (x, y) = (vec_of(&ring, &mut r, 2), vec_of(&ring, &mut r, 3));
        prop_assert!(x.add(&y).is_err() && x.mul(&y).is_err());
    }

    #[test]
    fn arrow_operations_stay_coherent(a in -50i64..50, b in -50i64..50, p in prop::sample::select(vec![2u64, 3])) {
        let ring = Integers::new(p);
        let x = ArrowElt::from_integer(&ring, &BigInt::from(a), 3);
        let y = ArrowElt::from_integer(&ring, &BigInt::from(b), 3);
        for z in [x.add(&y).unwrap(), x.mul(&y).unwrap(), x.sub(&y).unwrap(), x.inverse_frobenius().unwrap()] {
            prop_assert!(z.is_coherent().unwrap());
        }
        let prod = x.mul(&y).unwrap();
        let direct = ArrowElt::from_integer(&ring, &BigInt::from(a * b), 3);
        prop_assert_eq!(prod.levels(), direct.levels());
    }

    #[test]
    fn arrow_square_is_multiplicative(seed in any::<u64>(), bd in prop::sample::select(vec![1i64, 2, 4])) {
        let ring = Integers::new(2);
        let mut r = rng(seed);
        let top = vec_of(&ring, &mut r, 5);
        let x = ArrowElt::from_top(&top, Some(LevelBound::integral())).unwrap();
        let b = OvercParam::ratio(1, bd).unwrap();
        let n = x.arrow_norm(&b).unwrap();
        let sq = x.mul(&x).unwrap().arrow_norm(&b).unwrap();
        prop_assert!(sq.value <= n.value.pow_int(2));
        if n.is_exact() && sq.is_exact() {
            prop_assert_eq!(sq.value, n.value.pow_int(2));
        }
    }

    #[test]
    fn solve_frobenius_round_trips(seed in any::<u64>(), p in prop::sample::select(vec![2u64, 3])) {
        let ring = Truncated::new(p, 0, 6);
        let mut r = rng(seed);
        let y0 = vec_of(&ring, &mut r, 3);
        let x = y0.frobenius().unwrap();
        let y = solve_frobenius(&x).unwrap();
        prop_assert!(frobenius_matches(&y, &x, 4).unwrap());
    }

    #[test]
    fn tilt_has_characteristic_p(seed in any::<u64>(), p in prop::sample::select(vec![2u64, 3])) {
        let tilt = TiltRing::new(Truncated::new(p, 1, 3), 3);
        let mut r = rng(seed);
        let x = tilt.sample(&mut r);
        let px = (0..p).fold(tilt.zero(), |acc, _| tilt.tilt_add(&acc, &x));
        prop_assert!(tilt.is_zero(&px));
    }

    #[test]
    fn kernel_elements_are_killed(n in -30i64..30, d in 1i64..9, j in 1usize..3, p in prop::sample::select(vec![2u64, 3])) {
        let ring = Rationals::new(p);
        let t = num_rational::BigRational::new(n.into(), d.into());
        let k = kernel_element_from_w1(&ring, &t, j).unwrap();
        prop_assert!(k.x.frobenius().unwrap().is_zero());
    }

    #[test]
    fn bounded_profiles_stay_in_the_unit_ball(n in -9i64..9, d in 1i64..7, p in prime()) {
        let ring = Rationals::new(p);
        let f = num_rational::BigRational::new(n.into(), d.into());
        let rep = ghost_constant_profile(&ring, &f, 3).unwrap();
        if rep.verdict == Growth::Bounded {
            prop_assert!(rep.profile.iter().all(|v| *v <= ExtNorm::one()));
        }
    }
}
