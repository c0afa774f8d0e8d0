//! Acceptance suite: each criterion prints one PASS/FAIL line; the process
//! exits nonzero if any criterion fails. Runtime budgets are part of the
//! pass condition.

use std::time::{Duration, Instant};

use fibercheck::arith::first_primes;
use fibercheck::criteria::{bad_primes, certify_projective_corollary, check_main_theorem, Verdict};
use fibercheck::koszul::{koszul_i64, koszul_selfduality};
use fibercheck::linalg::{determinant, determinantal_divisors, snf};
use fibercheck::module::{critical_primes, purity_report};
use fibercheck::random::{random_complex, random_matrix, random_module, rng, ComplexShape, Population};
use fibercheck::resolution::{ext_fiber, tor_fiber};
use fibercheck::towers::{gallery, FinitenessVerdict, GalleryParams, Status};
use fibercheck::{null_homotopy, BaseRing, Error, ExactMatrix, FpModule, ModuleMap, Prime};
use num_rational::BigRational;
use num_traits::{One, Signed};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e(err: Error) -> String {
    err.to_string()
}

fn main_theorem_suite() -> Outcome {
    let z = BaseRing::INTEGERS;
    let shape = ComplexShape::default();
    let pops = [Population::SplitExact, Population::Acyclic, Population::WithHomology];
    let (mut true_count, mut false_count) = (0, 0);
    for seed in 0..1000u64 {
        let pop = pops[(seed % 3) as usize];
        let c = random_complex(z, seed, pop, shape).map_err(e)?;
        ensure(c.hi() - c.lo() <= 5 && c.ranks().iter().all(|&r| r <= 5), || format!("seed {seed}: shape"))?;
        let r = check_main_theorem(&c).map_err(|err| format!("seed {seed}: {err}"))?;
        ensure(r.verdict == Verdict::Consistent, || format!("seed {seed}: VIOLATION"))?;
        if r.hypothesis_holds {
            true_count += 1;
            for i in c.degrees().filter(|&i| i > 0) {
                ensure(c.homology(i).map_err(e)?.is_zero(), || format!("seed {seed}: H_{i} != 0"))?;
            }
            let h0 = c.homology(0).map_err(e)?.invariant_factors();
            ensure(h0.torsion.is_empty(), || format!("seed {seed}: H_0 has torsion"))?;
            ensure(r.tensor_acyclic.iter().all(|(_, ok)| *ok), || format!("seed {seed}: M (x) C not acyclic"))?;
        } else {
            false_count += 1;
        }
    }
    ensure(true_count > 0 && false_count > 0, || "one population is empty".into())?;
    Ok(format!("1000 complexes, {true_count} hypothesis-true, {false_count} hypothesis-false, 0 violations"))
}

fn map_criterion_exhaustive() -> Outcome {
    let z = BaseRing::INTEGERS;
    let free = FpModule::free(z, 2);
    let (mut count, mut pure) = (0, 0);
    for code in 0..625i64 {
        let entries: Vec<i64> = (0..4).map(|k| (code / 5i64.pow(k)) % 5 - 2).collect();
        let a = ExactMatrix::from_i64(z, 2, 2, &entries).map_err(e)?;
        let f = ModuleMap::new(free.clone(), free.clone(), a).map_err(e)?;
        let r = purity_report(&f).map_err(|err| format!("{entries:?}: {err}"))?;
        ensure(r.injective_flat_coker == r.pure && r.pure == r.fiberwise_injective, || format!("{entries:?}"))?;
        pure += usize::from(r.pure);
        count += 1;
    }
    Ok(format!("{count} matrices, 0 disagreements, {pure} satisfy all three"))
}

fn null_homotopy_certification() -> Outcome {
    let z = BaseRing::INTEGERS;
    let shape = ComplexShape::default();
    for seed in 0..200u64 {
        let c = random_complex(z, 10_000 + seed, Population::SplitExact, shape).map_err(e)?;
        let h = certify_projective_corollary(&c).map_err(|err| format!("seed {seed}: {err}"))?;
        h.verify(&c).map_err(|err| format!("seed {seed}: {err}"))?;
    }
    for seed in 0..200u64 {
        let c = random_complex(z, 20_000 + seed, Population::WithHomology, shape).map_err(e)?;
        ensure(!c.is_exact().map_err(e)?, || format!("seed {seed}: complex is exact"))?;
        ensure(null_homotopy(&c).map_err(e)?.is_none(), || format!("seed {seed}: certificate for a non-exact complex"))?;
    }
    Ok("200 certificates verified, 200 NONE".into())
}

fn sum_inverse_primes() -> Outcome {
    let g = gallery("sum-inverse-primes", GalleryParams { max_prime: 100, ..GalleryParams::default() }).map_err(e)?;
    ensure(g.all_match(), || "h_0 mismatch".into())?;
    let mut primes: Vec<Prime> = first_primes(25).into_iter().map(Prime::At).collect();
    primes.insert(0, Prime::Generic);
    ensure(g.lines.iter().map(|l| l.prime).collect::<Vec<_>>() == primes, || "wrong prime set".into())?;
    ensure(g.lines.iter().all(|l| l.status.value() == Some(1)), || "h_0 != 1".into())?;
    ensure(
        matches!(g.finiteness, Some(FinitenessVerdict::NotFinitelyGenerated { .. })),
        || "no non-finitely-generated verdict".into(),
    )?;
    Ok(format!("h_0 = 1 at {} primes, not finitely generated", g.lines.len()))
}

fn injective_hull() -> Outcome {
    for p in [2, 3, 5] {
        let g = gallery("injective-hull", GalleryParams { p, ..GalleryParams::default() }).map_err(e)?;
        ensure(g.all_match(), || format!("p={p}: mismatch"))?;
        let at = |quantity: &str| {
            g.lines.iter().find(|l| l.quantity == quantity && l.prime == Prime::At(p)).map(|l| l.status.clone())
        };
        for (q, want) in [("Tor_0", 0), ("Tor_1", 1)] {
            match at(q) {
                Some(Status::Stabilized { value, at_stage }) if value == want && at_stage <= 3 => {}
                other => return Err(format!("p={p}: {q} at the maximal ideal is {other:?}")),
            }
        }
    }
    Ok("Tor_0 = 0, Tor_1 = 1 by stage 3 for p in {2, 3, 5}".into())
}

fn dvr_fraction_field() -> Outcome {
    for p in [2, 3, 5] {
        let g = gallery("dvr-fraction-field", GalleryParams { p, ..GalleryParams::default() }).map_err(e)?;
        ensure(g.all_match(), || format!("p={p}: mismatch"))?;
        for l in &g.lines {
            let want = if l.prime == Prime::Generic { 1 } else { 0 };
            ensure(l.status.value() == Some(want), || format!("p={p}: {} at {}", l.quantity, l.prime))?;
        }
        // Every degree of the closed-fiber colimit vanishes.
        let closed: Vec<_> = g.reports.iter().filter(|r| r.prime == Prime::At(p)).collect();
        ensure(!closed.is_empty() && closed.iter().all(|r| r.status.value() == Some(0)), || {
            format!("p={p}: closed fiber colimit is nonzero")
        })?;
    }
    Ok("closed fiber colimit exact, generic H_0 of dimension 1, p in {2, 3, 5}".into())
}

fn koszul_self_duality() -> Outcome {
    let z = BaseRing::INTEGERS;
    let cases: Vec<(BaseRing, Vec<i64>)> = vec![
        (z, vec![2]),
        (z, vec![2, 3]),
        (z, vec![2, 3, 5]),
        (z, vec![2, 3, 5, 7]),
        (BaseRing::integers_mod(35).map_err(e)?, vec![2, 3]),
    ];
    for (ring, xs) in &cases {
        let k = koszul_i64(*ring, xs).map_err(e)?;
        let phi = koszul_selfduality(&k, xs.len()).map_err(|err| format!("{xs:?} over {ring}: {err}"))?;
        ensure(phi.is_isomorphism().map_err(e)?, || format!("{xs:?} over {ring}: not an isomorphism"))?;
        let (dual, shifted) = (k.dual().map_err(e)?, k.shift(-(xs.len() as i64)));
        ensure(phi.source() == &dual && phi.target() == &shifted, || {
            format!("{xs:?}: wrong endpoints")
        })?;
    }
    Ok(format!("{} chain isomorphisms verified", cases.len()))
}

fn ext_tor_duality() -> Outcome {
    let mut compared = 0usize;
    let mut g = rng(8);
    let z = BaseRing::INTEGERS;
    for n in 0..200 {
        let m = random_module(&mut g, z, 4, 6);
        let mut primes = critical_primes(z, &[m.relations()]).map_err(e)?;
        for p in [2, 3, 5] {
            primes.push(Prime::At(p));
        }
        primes.sort();
        primes.dedup();
        for &q in &primes {
            for i in 0..=1 {
                let (t, x) = (tor_fiber(&m, q, i, 2).map_err(e)?, ext_fiber(&m, q, i, 2).map_err(e)?);
                ensure(t == x, || format!("Z module {n}: Tor_{i} = {t}, Ext_{i} = {x} at {q}"))?;
                compared += 1;
            }
        }
    }
    let z12 = BaseRing::integers_mod(12).map_err(e)?;
    for n in 0..200 {
        let m = random_module(&mut g, z12, 3, 6);
        for q in [Prime::At(2), Prime::At(3)] {
            for i in 0..=3 {
                let (t, x) = (tor_fiber(&m, q, i, 4).map_err(e)?, ext_fiber(&m, q, i, 4).map_err(e)?);
                ensure(t == x, || format!("Z/12 module {n}: Tor_{i} = {t}, Ext_{i} = {x} at {q}"))?;
                compared += 1;
            }
        }
    }
    Ok(format!("400 modules, {compared} dimension pairs equal"))
}

fn periodicity() -> Outcome {
    let r = BaseRing::integers_mod(4).map_err(e)?;
    let m = FpModule::cyclic_int(r, 2);
    for i in 0..=6 {
        let d = tor_fiber(&m, Prime::At(2), i, 7).map_err(e)?;
        ensure(d == 1, || format!("Tor_{i} has dimension {d}"))?;
    }
    Ok("Tor_i = 1 for 0 <= i <= 6".into())
}

fn linear_algebra_foundation() -> Outcome {
    let z = BaseRing::INTEGERS;
    let mut g = rng(10);
    let one = BigRational::one();
    for n in 0..10_000 {
        let rows = 1 + n % 6;
        let cols = 1 + (n / 6) % 6;
        let a = random_matrix(&mut g, z, rows, cols, 9);
        let s = snf(&a);
        s.verify(&a).map_err(|err| format!("matrix {n}: {err}"))?;
        for u in [&s.u, &s.v] {
            ensure(determinant(u).map_err(e)?.abs() == one, || format!("matrix {n}: non-unit determinant"))?;
        }
        // d_k is the product of the first k elementary divisors.
        let dets = determinantal_divisors(&a).map_err(e)?;
        let mut prod = one.clone();
        for (k, d) in dets.iter().enumerate() {
            prod *= s.divisor(k);
            ensure(d.value == prod.abs(), || format!("matrix {n}: determinantal divisor {} mismatch", k + 1))?;
        }
    }
    let pool = first_primes(60);
    let mut sampled = 0;
    for seed in 0..100u64 {
        let pop = [Population::Acyclic, Population::WithHomology][(seed % 2) as usize];
        let c = random_complex(z, 30_000 + seed, pop, ComplexShape::default()).map_err(e)?;
        let bad = bad_primes(&c).map_err(e)?;
        let generic = c.fiber_profile(Prime::Generic).map_err(e)?.dims;
        let outside: Vec<u64> = pool.iter().copied().filter(|p| !bad.primes.contains(&Prime::At(*p))).take(20).collect();
        ensure(outside.len() == 20, || format!("seed {seed}: too many bad primes"))?;
        for p in outside {
            let dims = c.fiber_profile(Prime::At(p)).map_err(e)?.dims;
            ensure(dims == generic, || format!("seed {seed}: profile at {p} differs from the generic one"))?;
            sampled += 1;
        }
    }
    Ok(format!("10000 SNF certificates, {sampled} good-prime fibers match the generic profile"))
}

type Criterion = (&'static str, fn() -> Outcome, Duration);

fn main() {
    let s = Duration::from_secs;
    let criteria: [Criterion; 10] = [
        ("main-theorem suite", main_theorem_suite, s(60)),
        ("map criterion exhaustive", map_criterion_exhaustive, s(10)),
        ("null-homotopy certification", null_homotopy_certification, s(30)),
        ("gallery sum-inverse-primes", sum_inverse_primes, s(5)),
        ("gallery injective-hull", injective_hull, s(5)),
        ("gallery dvr-fraction-field", dvr_fraction_field, s(5)),
        ("koszul self-duality", koszul_self_duality, s(5)),
        ("ext-tor duality", ext_tor_duality, s(30)),
        ("periodicity smoke test", periodicity, s(1)),
        ("linear-algebra foundation", linear_algebra_foundation, s(60)),
    ];
    let mut failed = 0;
    for (k, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let took = start.elapsed();
        let (ok, detail) = match result {
            Ok(d) if took <= *budget => (true, d),
            Ok(d) => (false, format!("{d}; over budget of {}s", budget.as_secs())),
            Err(d) => (false, d),
        };
        failed += usize::from(!ok);
        println!(
            "[{}] {:>2} {name}: {detail} ({:.2}s)",
            if ok { "PASS" } else { "FAIL" },
            k + 1,
            took.as_secs_f64()
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
