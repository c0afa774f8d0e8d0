//! Executable fiberwise criteria with independent cross-checks.
//!
//! Every "for all primes" statement is discharged on the generic point plus
//! a finite set of bad primes: a prime `p` lowers the rank of a matrix over
//! `κ(p)` exactly when it divides the last nonzero elementary divisor, so
//! every fiber quantity built from ranks agrees with the generic one away
//! from those primes.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::complex::{BoundedComplex, FiberProfile};
use crate::error::{Error, Result};
use crate::homotopy::{null_homotopy, HomotopyCertificate};
use crate::matrix::ExactMatrix;
use crate::module::{
    bad_primes_of_matrix, critical_primes, is_flat, purity_report, FpModule, InvariantFactors, ModuleMap,
    PurityReport,
};
use crate::resolution::{ext_fiber, free_resolution, tor_fiber};
use crate::ring::{BaseRing, Prime};

/// Finite set of primes where some boundary loses rank, with the degrees
/// of the offending boundaries.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BadPrimeSet {
    pub primes: Vec<Prime>,
    pub witness: BTreeMap<Prime, Vec<i64>>,
}

/// Matrices whose fiber ranks determine every fiber homology dimension:
/// each relation matrix, and each boundary stacked with the relations of
/// its target.
fn critical_matrices(c: &BoundedComplex) -> Result<Vec<(i64, ExactMatrix)>> {
    let mut out = Vec::new();
    for i in c.degrees() {
        let rel = c.relations(i);
        if rel.cols() > 0 {
            out.push((i, rel));
        }
        if i > c.lo() {
            let d = c.boundary_matrix(i);
            let rel_below = c.relations(i - 1);
            out.push((i, if rel_below.cols() > 0 { d.hconcat(&rel_below)? } else { d }));
        }
    }
    Ok(out)
}

pub fn bad_primes(c: &BoundedComplex) -> Result<BadPrimeSet> {
    let mut witness: BTreeMap<Prime, Vec<i64>> = BTreeMap::new();
    for (i, m) in critical_matrices(c)? {
        for p in bad_primes_of_matrix(&m)? {
            let w = witness.entry(p).or_default();
            if !w.contains(&i) {
                w.push(i);
            }
        }
    }
    Ok(BadPrimeSet { primes: witness.keys().copied().collect(), witness })
}

/// Generic point plus bad primes over `Z`; the whole spectrum otherwise.
pub fn checked_primes(c: &BoundedComplex) -> Result<Vec<Prime>> {
    let spec = c.ring().spectrum();
    if spec.finite().is_some() {
        return Ok(spec.discharge(&[]));
    }
    Ok(spec.discharge(&bad_primes(c)?.primes))
}

/// Per-prime evaluation, in prime order regardless of scheduling.
pub fn per_prime<T, F>(primes: &[Prime], parallel: bool, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(Prime) -> Result<T> + Sync,
{
    if parallel {
        primes.par_iter().map(|&q| f(q)).collect()
    } else {
        primes.iter().map(|&q| f(q)).collect()
    }
}

/// `Z/2, Z/3, Z/4, Z/6, R²` and `R/p` for each given prime.
pub fn standard_test_modules(ring: BaseRing, primes: &[Prime]) -> Vec<(String, FpModule)> {
    let mut out: Vec<(String, FpModule)> =
        [2, 3, 4, 6].iter().map(|&a| (format!("R/{a}"), FpModule::cyclic_int(ring, a))).collect();
    out.push(("R^2".into(), FpModule::free(ring, 2)));
    for q in primes {
        if let Prime::At(p) = q {
            if ![2, 3].contains(p) {
                out.push((format!("R/{p}"), FpModule::cyclic_int(ring, *p as i64)));
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "consistent")]
    Consistent,
    #[serde(rename = "VIOLATION")]
    Violation,
}

#[derive(Clone, Debug, Serialize)]
pub struct TheoremReport {
    pub hypothesis_holds: bool,
    pub checked_primes: Vec<Prime>,
    pub fiber_profiles: Vec<FiberProfile>,
    pub conclusion_acyclic: bool,
    pub conclusion_h0_flat: bool,
    pub h0: InvariantFactors,
    /// `(test module, M ⊗ C acyclic)`.
    pub tensor_acyclic: Vec<(String, bool)>,
    pub verdict: Verdict,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct CheckOptions {
    pub parallel: bool,
}

fn require_flat_terms(c: &BoundedComplex) -> Result<()> {
    match c.degrees().find(|&i| !is_flat(&c.term(i))) {
        Some(i) => Err(Error::Precondition(format!("term in degree {i} is not flat"))),
        None => Ok(()),
    }
}

/// Fiberwise acyclicity at every prime forces acyclicity over `R`, flatness
/// of `H_0`, and acyclicity after tensoring with any module.
pub fn check_main_theorem(c: &BoundedComplex) -> Result<TheoremReport> {
    check_main_theorem_with(c, None, CheckOptions::default())
}

pub fn check_main_theorem_with(
    c: &BoundedComplex,
    test_modules: Option<&[(String, FpModule)]>,
    opts: CheckOptions,
) -> Result<TheoremReport> {
    if c.lo() < 0 {
        return Err(Error::Precondition("complex must be concentrated in degrees >= 0".into()));
    }
    require_flat_terms(c)?;
    let primes = checked_primes(c)?;
    let fiber_profiles = per_prime(&primes, opts.parallel, |q| c.fiber_profile(q))?;
    let hypothesis_holds = fiber_profiles.iter().all(FiberProfile::is_acyclic);
    let conclusion_acyclic = c.is_acyclic()?;
    let h0 = c.homology(0)?;
    let conclusion_h0_flat = is_flat(&h0);
    let default_family;
    let family = match test_modules {
        Some(f) => f,
        None => {
            default_family = standard_test_modules(c.ring(), &primes);
            &default_family
        }
    };
    let tensor_acyclic = family
        .iter()
        .map(|(name, m)| Ok((name.clone(), c.tensor_with_module(m)?.is_acyclic()?)))
        .collect::<Result<Vec<_>>>()?;
    let all_tensor = tensor_acyclic.iter().all(|(_, ok)| *ok);
    let verdict = if hypothesis_holds && !(conclusion_acyclic && conclusion_h0_flat && all_tensor) {
        Verdict::Violation
    } else {
        Verdict::Consistent
    };
    Ok(TheoremReport {
        hypothesis_holds,
        checked_primes: primes,
        fiber_profiles,
        conclusion_acyclic,
        conclusion_h0_flat,
        h0: h0.invariant_factors(),
        tensor_acyclic,
        verdict,
    })
}

/// Small complexes `G` used to sample `G ⊗ C`: `R`, `R/2` and `R/4` in
/// degree 0, `R --2--> R`, and `R/4 --2--> R/4`.
pub fn sample_complexes(ring: BaseRing) -> Result<Vec<(String, BoundedComplex)>> {
    let z4 = FpModule::cyclic_int(ring, 4);
    let two = ExactMatrix::from_i64(ring, 1, 1, &[2])?;
    let torsion = BoundedComplex::new(ring, 0, vec![z4.clone(), z4.clone()], vec![ModuleMap::new(z4.clone(), z4, two.clone())?])?;
    Ok(vec![
        ("R".into(), BoundedComplex::concentrated(FpModule::free(ring, 1), 0)),
        ("R/2".into(), BoundedComplex::concentrated(FpModule::cyclic_int(ring, 2), 0)),
        ("R/4[1]".into(), BoundedComplex::concentrated(FpModule::cyclic_int(ring, 4), 1)),
        ("K(2)".into(), BoundedComplex::from_free(ring, 0, &[1, 1], vec![two])?),
        ("R/4 -2-> R/4".into(), torsion),
    ])
}

/// Three computations of universal exactness for a bounded complex of flat
/// modules, required to agree.
#[derive(Clone, Debug, Serialize)]
pub struct UniversalExactness {
    /// Exact, with every image flat.
    pub exact_with_flat_images: bool,
    /// Exact fiber at every checked prime.
    pub fiberwise_exact: bool,
    /// `G ⊗ C` exact for every sampled `G`.
    pub sampled_tensor_exact: bool,
    pub checked_primes: Vec<Prime>,
    pub samples: Vec<String>,
}

impl UniversalExactness {
    pub fn value(&self) -> bool {
        self.exact_with_flat_images
    }
}

pub fn is_universally_exact(c: &BoundedComplex) -> Result<UniversalExactness> {
    is_universally_exact_with(c, CheckOptions::default())
}

pub fn is_universally_exact_with(c: &BoundedComplex, opts: CheckOptions) -> Result<UniversalExactness> {
    require_flat_terms(c)?;
    let mut exact_with_flat_images = c.is_exact()?;
    if exact_with_flat_images {
        for i in c.degrees() {
            if !is_flat(&c.boundary(i).image()?.0) {
                exact_with_flat_images = false;
                break;
            }
        }
    }
    let primes = checked_primes(c)?;
    let profiles = per_prime(&primes, opts.parallel, |q| c.fiber_profile(q))?;
    let fiberwise_exact = profiles.iter().all(FiberProfile::is_exact);
    let samples = sample_complexes(c.ring())?;
    let mut sampled_tensor_exact = true;
    for (_, g) in &samples {
        if !BoundedComplex::total_tensor(g, c)?.is_exact()? {
            sampled_tensor_exact = false;
            break;
        }
    }
    if exact_with_flat_images != fiberwise_exact || fiberwise_exact != sampled_tensor_exact {
        return Err(Error::Violation(format!(
            "universal exactness disagreement: exact+flat images={exact_with_flat_images}, fiberwise={fiberwise_exact}, sampled tensor={sampled_tensor_exact}"
        )));
    }
    Ok(UniversalExactness {
        exact_with_flat_images,
        fiberwise_exact,
        sampled_tensor_exact,
        checked_primes: primes,
        samples: samples.into_iter().map(|(n, _)| n).collect(),
    })
}

/// Three-way purity equivalence; disagreement is a `Violation`.
pub fn check_map_criterion(f: &ModuleMap) -> Result<PurityReport> {
    purity_report(f)
}

#[derive(Clone, Debug, Serialize)]
pub struct ZeroReport {
    pub fibers_vanish: bool,
    pub checked_primes: Vec<Prime>,
    pub module_is_zero: bool,
}

/// A flat module with zero fibers everywhere is zero.
pub fn check_zero_criterion(m: &FpModule) -> Result<ZeroReport> {
    if !is_flat(m) {
        return Err(Error::Precondition("zero criterion needs a flat module".into()));
    }
    let primes = critical_primes(m.ring(), &[m.relations()])?;
    let mut fibers_vanish = true;
    for &q in &primes {
        fibers_vanish &= m.fiber_dimension(q)? == 0;
    }
    let module_is_zero = m.is_zero();
    if fibers_vanish && !module_is_zero {
        return Err(Error::Violation(format!("flat module {m} has zero fibers but is not zero")));
    }
    Ok(ZeroReport { fibers_vanish, checked_primes: primes, module_is_zero })
}

#[derive(Clone, Debug, Serialize)]
pub struct IsomReport {
    pub fiberwise_isomorphism: bool,
    pub checked_primes: Vec<Prime>,
    pub injective: bool,
    pub surjective: bool,
}

/// A map of flat modules that is an isomorphism on every fiber is an
/// isomorphism.
pub fn check_isom_criterion(f: &ModuleMap) -> Result<IsomReport> {
    if !is_flat(f.source()) || !is_flat(f.target()) {
        return Err(Error::Precondition("isomorphism criterion needs flat source and target".into()));
    }
    let both = f.matrix().hconcat(f.target().relations())?;
    let primes = critical_primes(f.ring(), &[f.source().relations(), f.target().relations(), &both])?;
    let mut fiberwise_isomorphism = true;
    for &q in &primes {
        fiberwise_isomorphism &= f.fiber_injective(q)? && f.fiber_surjective(q)?;
    }
    let injective = f.is_injective()?;
    let surjective = f.is_surjective()?;
    if fiberwise_isomorphism && !(injective && surjective) {
        return Err(Error::Violation("fiberwise isomorphism is not an isomorphism".into()));
    }
    Ok(IsomReport { fiberwise_isomorphism, checked_primes: primes, injective, surjective })
}

#[derive(Clone, Debug, Serialize)]
pub struct FlatnessCriterionReport {
    /// `"tor"` or `"ext"`.
    pub functor: &'static str,
    /// Highest positive degree tested.
    pub depth: usize,
    /// Whether `depth` covers every degree that can be nonzero.
    pub complete: bool,
    pub checked_primes: Vec<Prime>,
    /// `dims[k]` lists the dimensions at each checked prime in degree `k`.
    pub dims: Vec<Vec<usize>>,
    pub positive_degrees_vanish: bool,
    pub all_degrees_vanish: bool,
    pub flat: bool,
    pub zero: bool,
}

impl FlatnessCriterionReport {
    pub fn qualifier(&self) -> String {
        if self.complete {
            "complete".into()
        } else {
            format!("checked to depth {}", self.depth)
        }
    }
}

fn flatness_criterion(
    m: &FpModule,
    depth: usize,
    functor: &'static str,
    dim: fn(&FpModule, Prime, usize, usize) -> Result<usize>,
) -> Result<FlatnessCriterionReport> {
    if depth == 0 {
        return Err(Error::Precondition("depth must be at least 1".into()));
    }
    let res = free_resolution(m, depth + 1)?;
    let primes = checked_primes(&res)?;
    let mut dims = Vec::with_capacity(depth + 1);
    for i in 0..=depth {
        dims.push(primes.iter().map(|&q| dim(m, q, i, depth + 1)).collect::<Result<Vec<_>>>()?);
    }
    let positive_degrees_vanish = dims[1..].iter().flatten().all(|&d| d == 0);
    let all_degrees_vanish = positive_degrees_vanish && dims[0].iter().all(|&d| d == 0);
    let flat = is_flat(m);
    let zero = m.is_zero();
    if positive_degrees_vanish && !flat {
        return Err(Error::Violation(format!("{functor} vanishes in positive degrees but {m} is not flat")));
    }
    if all_degrees_vanish && !zero {
        return Err(Error::Violation(format!("{functor} vanishes in all degrees but {m} is not zero")));
    }
    let complete = m.ring().is_domain() || (res.hi() as usize) < depth + 1;
    Ok(FlatnessCriterionReport {
        functor,
        depth,
        complete,
        checked_primes: primes,
        dims,
        positive_degrees_vanish,
        all_degrees_vanish,
        flat,
        zero,
    })
}

/// `Tor_i(κ(q), M) = 0` for `0 < i ≤ depth` at every checked prime implies
/// `M` flat; vanishing also at `i = 0` implies `M = 0`.
pub fn tor_flatness_criterion(m: &FpModule, depth: usize) -> Result<FlatnessCriterionReport> {
    flatness_criterion(m, depth, "tor", tor_fiber)
}

/// The same criterion through `Ext^i(M, κ(q))`.
pub fn ext_flatness_criterion(m: &FpModule, depth: usize) -> Result<FlatnessCriterionReport> {
    flatness_criterion(m, depth, "ext", ext_fiber)
}

/// A bounded free complex with exact fibers everywhere is null-homotopic;
/// the certificate is constructed and checked.
pub fn certify_projective_corollary(c: &BoundedComplex) -> Result<HomotopyCertificate> {
    c.require_free()?;
    for q in checked_primes(c)? {
        if !c.fiber_profile(q)?.is_exact() {
            return Err(Error::Precondition(format!("fiber at {q} is not exact")));
        }
    }
    let cert = null_homotopy(c)?
        .ok_or_else(|| Error::Violation("fiberwise exact free complex admits no null-homotopy".into()))?;
    cert.verify(c)?;
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;

    const Z: BaseRing = BaseRing::INTEGERS;

    fn free(ranks: &[usize], mats: &[Vec<Vec<i64>>]) -> BoundedComplex {
        BoundedComplex::from_free_i64(Z, 0, ranks, mats).unwrap()
    }

    fn times(a: i64) -> BoundedComplex {
        free(&[1, 1], &[vec![vec![a]]])
    }

    fn split() -> BoundedComplex {
        free(&[1, 2, 1], &[vec![vec![1, 1]], vec![vec![1], vec![-1]]])
    }

    #[test]
    fn bad_prime_examples() {
        assert_eq!(bad_primes(&times(2)).unwrap().primes, vec![Prime::At(2)]);
        assert!(bad_primes(&times(1)).unwrap().primes.is_empty());
        assert_eq!(bad_primes(&times(6)).unwrap().primes, vec![Prime::At(2), Prime::At(3)]);
        assert_eq!(checked_primes(&times(6)).unwrap(), vec![Prime::Generic, Prime::At(2), Prime::At(3)]);
    }

    #[test]
    fn main_theorem_examples() {
        let c = free(&[2, 1], &[vec![vec![1], vec![-1]]]);
        let r = check_main_theorem(&c).unwrap();
        assert!(r.hypothesis_holds && r.conclusion_acyclic && r.conclusion_h0_flat);
        assert_eq!(r.h0.free_rank, 1);
        assert_eq!(r.verdict, Verdict::Consistent);
        let r = check_main_theorem(&times(2)).unwrap();
        assert!(!r.hypothesis_holds && !r.conclusion_h0_flat);
        assert_eq!(r.verdict, Verdict::Consistent);
        let r = check_main_theorem(&BoundedComplex::zero(Z, 0)).unwrap();
        assert!(r.hypothesis_holds && r.h0.is_zero());
        assert!(check_main_theorem(&times(2).shift(-1)).is_err());
    }

    #[test]
    fn universal_exactness_examples() {
        assert!(is_universally_exact(&times(1)).unwrap().value());
        assert!(!is_universally_exact(&times(2)).unwrap().value());
        assert!(is_universally_exact(&split()).unwrap().value());
        assert!(!is_universally_exact(&times(0)).unwrap().value());
    }

    #[test]
    fn zero_and_isom_criteria() {
        assert!(check_zero_criterion(&FpModule::zero(Z)).unwrap().module_is_zero);
        let r = check_zero_criterion(&FpModule::free(Z, 1)).unwrap();
        assert!(!r.fibers_vanish);
        let z2 = FpModule::free(Z, 2);
        let f = ModuleMap::new(z2.clone(), z2, ExactMatrix::from_i64(Z, 2, 2, &[1, 1, 0, 1]).unwrap()).unwrap();
        let r = check_isom_criterion(&f).unwrap();
        assert!(r.fiberwise_isomorphism && r.injective && r.surjective);
    }

    #[test]
    fn flatness_criteria() {
        let r = tor_flatness_criterion(&FpModule::free(Z, 2), 1).unwrap();
        assert!(r.positive_degrees_vanish && r.flat && r.complete);
        let r = tor_flatness_criterion(&FpModule::cyclic_int(Z, 2), 1).unwrap();
        assert!(!r.positive_degrees_vanish && !r.flat);
        let r = ext_flatness_criterion(&FpModule::cyclic_int(Z, 2), 1).unwrap();
        assert!(!r.positive_degrees_vanish);
        let z4 = BaseRing::integers_mod(4).unwrap();
        let r = tor_flatness_criterion(&FpModule::cyclic_int(z4, 2), 3).unwrap();
        assert!(!r.complete);
        assert_eq!(r.qualifier(), "checked to depth 3");
    }

    #[test]
    fn projective_corollary() {
        certify_projective_corollary(&times(1)).unwrap();
        certify_projective_corollary(&split()).unwrap();
        assert!(matches!(certify_projective_corollary(&times(2)), Err(Error::Precondition(_))));
    }
}
