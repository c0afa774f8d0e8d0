//! Property tests for algebraic invariants.

use fibercheck::arith::first_primes;
use fibercheck::criteria::{bad_primes, check_main_theorem, is_universally_exact, Verdict};
use fibercheck::linalg::snf;
use fibercheck::module::{purity_report, tensor_modules};
use fibercheck::random::{random_complex, random_matrix, random_module, rng, ComplexShape, Population};
use fibercheck::resolution::{ext_fiber, tor_fiber};
use fibercheck::{null_homotopy, BaseRing, BoundedComplex, ChainMap, Error, ExactMatrix, FpModule, ModuleMap, Prime};
use num_integer::Integer;
use proptest::prelude::*;

fn ring_strategy() -> impl Strategy<Value = BaseRing> {
    prop_oneof![
        Just(BaseRing::INTEGERS),
        Just(BaseRing::RATIONALS),
        (2u64..=36).prop_map(|n| BaseRing::integers_mod(n).unwrap()),
        prop::sample::select(vec![2u64, 3, 5, 7]).prop_map(|p| BaseRing::localized(p).unwrap()),
        prop::sample::select(vec![2u64, 3, 5, 7, 11]).prop_map(|p| BaseRing::prime_field(p).unwrap()),
    ]
}

fn population() -> impl Strategy<Value = Population> {
    prop::sample::select(vec![Population::SplitExact, Population::Acyclic, Population::WithHomology])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn snf_certificate_holds(ring in ring_strategy(), seed in any::<u64>(), rows in 0usize..5, cols in 0usize..5) {
        let a = random_matrix(&mut rng(seed), ring, rows, cols, 12);
        let s = snf(&a);
        prop_assert!(s.verify(&a).is_ok());
        prop_assert_eq!(s.u_inv.mul(&a).unwrap().mul(&s.v_inv).unwrap(), s.d.clone());
    }

    #[test]
    fn reduction_is_multiplicative(seed in any::<u64>(), p in prop::sample::select(vec![2u64, 3, 5, 7])) {
        let mut g = rng(seed);
        let a = random_matrix(&mut g, BaseRing::INTEGERS, 3, 4, 20);
        let b = random_matrix(&mut g, BaseRing::INTEGERS, 4, 2, 20);
        let q = Prime::At(p);
        let lhs = a.mul(&b).unwrap().reduce(q).unwrap();
        let rhs = a.reduce(q).unwrap().mul(&b.reduce(q).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn tensor_of_cyclic_groups(a in 1i64..=30, b in 1i64..=30) {
        let z = BaseRing::INTEGERS;
        let t = tensor_modules(&FpModule::cyclic_int(z, a), &FpModule::cyclic_int(z, b)).unwrap();
        prop_assert!(t.is_isomorphic(&FpModule::cyclic_int(z, a.gcd(&b))));
    }

    #[test]
    fn ext_equals_tor(seed in any::<u64>(), n in prop::sample::select(vec![0u64, 4, 6, 8, 12, 18])) {
        let ring = if n == 0 { BaseRing::INTEGERS } else { BaseRing::integers_mod(n).unwrap() };
        let m = random_module(&mut rng(seed), ring, 3, 8);
        let primes: Vec<Prime> = match ring.spectrum().finite() {
            Some(ps) => ps.to_vec(),
            None => vec![Prime::Generic, Prime::At(2), Prime::At(3), Prime::At(5)],
        };
        for q in primes {
            for i in 0..3 {
                prop_assert_eq!(tor_fiber(&m, q, i, 3).unwrap(), ext_fiber(&m, q, i, 3).unwrap());
            }
        }
    }

    #[test]
    fn euler_characteristic_is_fiberwise_constant(seed in any::<u64>(), pop in population()) {
        let c = random_complex(BaseRing::INTEGERS, seed, pop, ComplexShape::default()).unwrap();
        let chi = c.euler_characteristic();
        let generic: i64 = c.degrees().map(|i| (-1i64).pow(i as u32) * c.homology(i).unwrap().invariant_factors().free_rank as i64).sum();
        prop_assert_eq!(chi, generic);
        for p in [2u64, 3, 5, 7] {
            let prof = c.fiber_profile(Prime::At(p)).unwrap();
            let alt: i64 = c.degrees().map(|i| (-1i64).pow(i as u32) * prof.dim(i) as i64).sum();
            prop_assert_eq!(alt, chi);
        }
    }

    #[test]
    fn bad_primes_are_sound(seed in any::<u64>(), pop in population()) {
        let c = random_complex(BaseRing::INTEGERS, seed, pop, ComplexShape::default()).unwrap();
        let bad = bad_primes(&c).unwrap();
        let generic = c.fiber_profile(Prime::Generic).unwrap().dims;
        for p in first_primes(30) {
            if !bad.primes.contains(&Prime::At(p)) {
                prop_assert_eq!(&c.fiber_profile(Prime::At(p)).unwrap().dims, &generic, "prime {}", p);
            }
        }
    }

    #[test]
    fn theorem_never_violated(seed in any::<u64>(), pop in population()) {
        let c = random_complex(BaseRing::INTEGERS, seed, pop, ComplexShape::default()).unwrap();
        let r = check_main_theorem(&c).unwrap();
        prop_assert_eq!(r.verdict, Verdict::Consistent);
        prop_assert_eq!(r.hypothesis_holds, pop != Population::WithHomology);
    }

    #[test]
    fn universal_exactness_agrees_with_homotopy(seed in any::<u64>(), pop in population()) {
        let c = random_complex(BaseRing::INTEGERS, seed, pop, ComplexShape::default()).unwrap();
        let u = is_universally_exact(&c).unwrap();
        prop_assert_eq!(u.value(), null_homotopy(&c).unwrap().is_some());
    }

    #[test]
    fn dual_and_shift_are_involutive(seed in any::<u64>(), k in -3i64..=3) {
        let c = random_complex(BaseRing::INTEGERS, seed, Population::WithHomology, ComplexShape::default()).unwrap();
        prop_assert_eq!(c.dual().unwrap().dual().unwrap(), c.clone());
        prop_assert_eq!(c.shift(k).shift(-k), c.clone());
        for i in c.degrees() {
            let h = c.homology(i).unwrap().invariant_factors();
            prop_assert_eq!(c.shift(k).homology(i + k).unwrap().invariant_factors(), h);
        }
    }

    #[test]
    fn tensor_with_unit_complex(seed in any::<u64>()) {
        let z = BaseRing::INTEGERS;
        let c = random_complex(z, seed, Population::WithHomology, ComplexShape::default()).unwrap();
        let unit = BoundedComplex::concentrated(FpModule::free(z, 1), 0);
        let t = BoundedComplex::total_tensor(&unit, &c).unwrap();
        for i in c.degrees() {
            prop_assert!(t.homology(i).unwrap().is_isomorphic(&c.homology(i).unwrap()));
        }
    }

    #[test]
    fn cone_of_identity_is_contractible(seed in any::<u64>()) {
        let c = random_complex(BaseRing::INTEGERS, seed, Population::WithHomology, ComplexShape::default()).unwrap();
        let cone = ChainMap::identity(&c).cone().unwrap();
        let h = null_homotopy(&cone).unwrap();
        prop_assert!(h.is_some());
        prop_assert!(h.unwrap().verify(&cone).is_ok());
    }

    #[test]
    fn purity_conditions_agree_over_z_mod_n(n in prop::sample::select(vec![4u64, 6, 8, 12, 30]), seed in any::<u64>()) {
        let r = BaseRing::integers_mod(n).unwrap();
        let a = random_matrix(&mut rng(seed), r, 2, 2, 40);
        let f = ModuleMap::new(FpModule::free(r, 2), FpModule::free(r, 2), a).unwrap();
        match purity_report(&f) {
            Ok(rep) => prop_assert!(rep.injective_flat_coker == rep.pure && rep.pure == rep.fiberwise_injective),
            Err(Error::Precondition(_)) => {}
            Err(e) => prop_assert!(false, "{}", e),
        }
    }
}

#[test]
fn zero_matrix_snf_over_every_ring() {
    for ring in [BaseRing::INTEGERS, BaseRing::RATIONALS, BaseRing::integers_mod(6).unwrap()] {
        let a = ExactMatrix::zero(ring, 3, 2);
        let s = snf(&a);
        assert!(s.verify(&a).is_ok());
        assert_eq!(s.rank(), 0);
    }
}
