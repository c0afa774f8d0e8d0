//! Frozen values from independent sources: SNF divisors cross-computed with
//! an external CAS, cellular homology of classical spaces, and hand-derived
//! Tor/Ext/Koszul dimensions.

use fibercheck::document::Document;
use fibercheck::koszul::koszul_i64;
use fibercheck::linalg::snf;
use fibercheck::module::tensor_modules;
use fibercheck::resolution::{ext_fiber, tor_fiber};
use fibercheck::{BaseRing, BoundedComplex, ExactMatrix, FpModule, Prime};

const Z: BaseRing = BaseRing::INTEGERS;

fn divisors(rows: &[Vec<i64>]) -> Vec<String> {
    let a = ExactMatrix::from_rows(Z, rows[0].len(), rows).unwrap();
    let s = snf(&a);
    s.verify(&a).unwrap();
    s.elementary_divisors.iter().map(|d| d.to_string()).collect()
}

#[test]
fn snf_matches_external_cas() {
    let cases: &[(&[&[i64]], &[&str])] = &[
        (&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]], &["2", "6", "12"]),
        (&[&[6, 0, 0], &[0, 10, 0], &[0, 0, 15]], &["1", "30", "30"]),
        (&[&[4, 6, 8], &[6, 9, 12]], &["1", "0"]),
        (&[&[12, 18], &[30, 42], &[8, 4]], &["2", "6"]),
        (&[&[0, 0], &[0, 0]], &["0", "0"]),
        (&[&[3, 6, 9, 12], &[6, 12, 18, 24], &[1, 2, 3, 5]], &["1", "3", "0"]),
        (&[&[9, 4], &[-8, -9]], &["1", "49"]),
        (&[&[-1, -8, 5, 8], &[-6, 3, -7, 8], &[0, 2, 9, -3], &[-7, -8, -2, 0]], &["1", "1", "1", "9941"]),
    ];
    for (rows, want) in cases {
        let rows: Vec<Vec<i64>> = rows.iter().map(|r| r.to_vec()).collect();
        assert_eq!(divisors(&rows), want.to_vec(), "{rows:?}");
    }
}

fn homology_strings(c: &BoundedComplex) -> Vec<String> {
    c.degrees().map(|i| c.homology(i).unwrap().invariant_factors().to_string()).collect()
}

#[test]
fn cellular_homology_of_surfaces() {
    // Real projective plane: Z --2--> Z --0--> Z.
    let rp2 = BoundedComplex::from_free_i64(Z, 0, &[1, 1, 1], &[vec![vec![0]], vec![vec![2]]]).unwrap();
    assert_eq!(homology_strings(&rp2), ["R^1", "Z/(2)", "0"]);
    let klein = Document::parse(include_str!("data/klein.json")).unwrap().complex().unwrap();
    assert_eq!(homology_strings(&klein), ["R^1", "Z/(2) + R^1", "0"]);
    let torus = BoundedComplex::from_free_i64(Z, 0, &[1, 2, 1], &[vec![vec![0, 0]], vec![vec![0], vec![0]]]).unwrap();
    assert_eq!(homology_strings(&torus), ["R^1", "R^2", "R^1"]);
    assert_eq!(torus.euler_characteristic(), 0);
    assert_eq!(rp2.euler_characteristic(), 1);
}

#[test]
fn rp2_fibers_detect_the_torsion_prime() {
    let rp2 = BoundedComplex::from_free_i64(Z, 0, &[1, 1, 1], &[vec![vec![0]], vec![vec![2]]]).unwrap();
    let at = |q| {
        let p = rp2.fiber_profile(q).unwrap();
        (0..=2).map(|i| p.dim(i)).collect::<Vec<_>>()
    };
    assert_eq!(at(Prime::Generic), [1, 0, 0]);
    assert_eq!(at(Prime::At(2)), [1, 1, 1]);
    assert_eq!(at(Prime::At(3)), [1, 0, 0]);
}

#[test]
fn tor_and_ext_of_cyclic_groups() {
    let z6 = FpModule::cyclic_int(Z, 6);
    for (q, want) in [(Prime::Generic, [0, 0]), (Prime::At(2), [1, 1]), (Prime::At(3), [1, 1]), (Prime::At(5), [0, 0])] {
        assert_eq!([tor_fiber(&z6, q, 0, 2).unwrap(), tor_fiber(&z6, q, 1, 2).unwrap()], want);
        assert_eq!([ext_fiber(&z6, q, 0, 2).unwrap(), ext_fiber(&z6, q, 1, 2).unwrap()], want);
    }
    let t = tensor_modules(&FpModule::cyclic_int(Z, 12), &FpModule::cyclic_int(Z, 18)).unwrap();
    assert_eq!(t.invariant_factors().to_string(), "Z/(6)");
}

#[test]
fn tor_over_z12_of_its_residue_fields() {
    // Z/12 = Z/4 x Z/3: F_2 has an infinite periodic resolution, F_3 is projective.
    let r = BaseRing::integers_mod(12).unwrap();
    let f2 = FpModule::cyclic_int(r, 2);
    let f3 = FpModule::cyclic_int(r, 3);
    for i in 0..4 {
        assert_eq!(tor_fiber(&f2, Prime::At(2), i, 4).unwrap(), 1);
        assert_eq!(tor_fiber(&f3, Prime::At(3), i, 4).unwrap(), usize::from(i == 0));
        assert_eq!(tor_fiber(&f3, Prime::At(2), i, 4).unwrap(), 0);
    }
}

#[test]
fn koszul_homology() {
    // Regular sequence: exact except H_0 = R/(x).
    let k = koszul_i64(Z, &[2, 3]).unwrap();
    assert_eq!(homology_strings(&k), ["0", "0", "0"]);
    let k = koszul_i64(Z, &[2]).unwrap();
    assert_eq!(homology_strings(&k), ["Z/(2)", "0"]);
    // (2, 4) is not regular: H_1 = Z/2.
    let k = koszul_i64(Z, &[2, 4]).unwrap();
    assert_eq!(homology_strings(&k), ["Z/(2)", "Z/(2)", "0"]);
    let k = koszul_i64(Z, &[2, 3, 5]).unwrap();
    assert_eq!(k.ranks(), [1, 3, 3, 1]);
    assert!(k.is_exact().unwrap());
}

#[test]
fn localized_and_field_rings() {
    let z2 = BaseRing::localized(2).unwrap();
    // 3 is a unit in Z_(2).
    assert!(FpModule::cyclic_int(z2, 3).is_zero());
    assert_eq!(FpModule::cyclic_int(z2, 12).invariant_factors().to_string(), "(Zloc/2)/(4)");
    let f5 = BaseRing::prime_field(5).unwrap();
    assert!(FpModule::cyclic_int(f5, 3).is_zero());
    assert_eq!(FpModule::cyclic_int(f5, 10).invariant_factors().free_rank, 1);
}

#[test]
fn corpus_round_trips() {
    for text in [
        include_str!("data/snf.json"),
        include_str!("data/z6.json"),
        include_str!("data/times2.json"),
        include_str!("data/exact.json"),
        include_str!("data/klein.json"),
        include_str!("data/z4_mod2.json"),
    ] {
        let doc = Document::parse(text).unwrap();
        assert_eq!(Document::parse(&doc.render()).unwrap(), doc);
    }
}
