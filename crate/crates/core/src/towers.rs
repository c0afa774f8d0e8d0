//! Directed systems `M_1 -> M_2 -> ⋯` of modules and complexes, evaluated
//! stage by stage, with colimit values read off from eventually stable
//! induced maps.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::arith;
use crate::complex::{BoundedComplex, ChainMap};
use crate::error::{Error, Result};
use crate::linalg::{field, solve_integral};
use crate::matrix::ExactMatrix;
use crate::module::{FpModule, ModuleMap};
use crate::resolution::free_resolution;
use crate::ring::{BaseRing, Prime};

pub const DEFAULT_WINDOW: usize = 3;
pub const DEFAULT_MAX_STAGE: usize = 32;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TowerFlags {
    pub all_transitions_injective: bool,
    pub all_transitions_non_surjective: bool,
}

type StageRule<T> = Arc<dyn Fn(usize) -> Result<T> + Send + Sync>;

/// Pure stage rule with a read-mostly cache.
struct Memo<T: Clone> {
    rule: StageRule<T>,
    cache: RwLock<HashMap<usize, T>>,
}

impl<T: Clone> Memo<T> {
    fn new(rule: StageRule<T>) -> Self {
        Memo { rule, cache: RwLock::new(HashMap::new()) }
    }

    fn get(&self, n: usize) -> Result<T> {
        if let Some(v) = self.cache.read().expect("cache lock").get(&n) {
            return Ok(v.clone());
        }
        let v = (self.rule)(n)?;
        self.cache.write().expect("cache lock").entry(n).or_insert_with(|| v.clone());
        Ok(v)
    }
}

/// A tower of finitely presented modules, stages indexed from 1.
pub struct TowerModule {
    ring: BaseRing,
    name: String,
    stages: Memo<FpModule>,
    transitions: Memo<ModuleMap>,
    flags: TowerFlags,
}

impl fmt::Debug for TowerModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TowerModule").field("ring", &self.ring).field("name", &self.name).field("flags", &self.flags).finish()
    }
}

impl TowerModule {
    /// `transition(n)` is the matrix of `stage(n) -> stage(n + 1)`.
    pub fn new<S, T>(ring: BaseRing, name: impl Into<String>, flags: TowerFlags, stage: S, transition: T) -> Self
    where
        S: Fn(usize) -> FpModule + Send + Sync + 'static,
        T: Fn(usize) -> ExactMatrix + Send + Sync + 'static,
    {
        let stage = Arc::new(stage);
        let stage_rule: StageRule<FpModule> = {
            let stage = stage.clone();
            Arc::new(move |n| Ok(stage(n)))
        };
        let transition_rule: StageRule<ModuleMap> = Arc::new(move |n| {
            let f = ModuleMap::new(stage(n), stage(n + 1), transition(n))?;
            if flags.all_transitions_injective && !f.is_injective()? {
                return Err(Error::FlagViolation(format!("transition {n} is not injective")));
            }
            if flags.all_transitions_non_surjective && f.is_surjective()? {
                return Err(Error::FlagViolation(format!("transition {n} is surjective")));
            }
            Ok(f)
        });
        TowerModule {
            ring,
            name: name.into(),
            stages: Memo::new(stage_rule),
            transitions: Memo::new(transition_rule),
            flags,
        }
    }

    /// `M -> M -> ⋯` with identity transitions.
    pub fn constant(m: FpModule) -> Self {
        let g = m.generators();
        let ring = m.ring();
        TowerModule::new(ring, "constant", TowerFlags::default(), move |_| m.clone(), move |_| {
            ExactMatrix::identity(ring, g)
        })
    }

    pub fn ring(&self) -> BaseRing {
        self.ring
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn flags(&self) -> TowerFlags {
        self.flags
    }

    pub fn stage(&self, n: usize) -> Result<FpModule> {
        self.stages.get(n)
    }

    pub fn transition(&self, n: usize) -> Result<ModuleMap> {
        self.transitions.get(n)
    }

    /// The tower of free resolutions (to `depth`) with lifted comparison
    /// maps, so derived functors can be evaluated stagewise.
    pub fn resolutions(self: &Arc<Self>, depth: usize) -> TowerComplex {
        let stages = self.clone();
        let maps = self.clone();
        TowerComplex::new(
            self.ring,
            format!("resolutions of {}", self.name),
            move |n| free_resolution(&stages.stage(n)?, depth),
            move |n, src, dst| lift_to_resolutions(&maps.transition(n)?, src, dst),
        )
    }
}

/// Components `f_k: F_k -> G_k` over `f: M -> N`, with `d f_k = f_{k−1} d`.
pub fn lift_to_resolutions(f: &ModuleMap, src: &BoundedComplex, dst: &BoundedComplex) -> Result<ChainMap> {
    let mut components = vec![f.matrix().clone()];
    for k in 1..=src.hi() {
        let target = components[(k - 1) as usize].mul(&src.boundary_matrix(k))?;
        let lift = solve_integral(&dst.boundary_matrix(k), &target)?
            .ok_or_else(|| Error::Violation(format!("comparison map does not lift in degree {k}")))?;
        components.push(lift);
    }
    ChainMap::new(src.clone(), dst.clone(), components)
}

type TransitionRule = Arc<dyn Fn(usize, &BoundedComplex, &BoundedComplex) -> Result<ChainMap> + Send + Sync>;

/// A tower of bounded complexes with chain-map transitions.
pub struct TowerComplex {
    ring: BaseRing,
    name: String,
    stages: Memo<BoundedComplex>,
    transitions: Memo<ChainMap>,
}

impl fmt::Debug for TowerComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TowerComplex").field("ring", &self.ring).field("name", &self.name).finish()
    }
}

impl TowerComplex {
    /// `transition(n, C_n, C_{n+1})` builds the chain map `C_n -> C_{n+1}`;
    /// it is validated as a chain map on evaluation.
    pub fn new<S, T>(ring: BaseRing, name: impl Into<String>, stage: S, transition: T) -> Self
    where
        S: Fn(usize) -> Result<BoundedComplex> + Send + Sync + 'static,
        T: Fn(usize, &BoundedComplex, &BoundedComplex) -> Result<ChainMap> + Send + Sync + 'static,
    {
        let stage: StageRule<BoundedComplex> = Arc::new(stage);
        let stage_memo = Memo::new(stage.clone());
        let transition: TransitionRule = Arc::new(transition);
        let transition_rule: StageRule<ChainMap> = Arc::new(move |n| {
            let (a, b) = (stage(n)?, stage(n + 1)?);
            let f = transition(n, &a, &b)?;
            // Re-validate whatever the rule produced.
            let components = (a.lo()..=a.hi()).map(|i| f.component(i)).collect();
            ChainMap::new(a, b, components)
        });
        TowerComplex { ring, name: name.into(), stages: stage_memo, transitions: Memo::new(transition_rule) }
    }

    /// Stages given by matrices on a ranks pattern fixed for all `n`.
    pub fn from_free_rule<S, T>(ring: BaseRing, name: impl Into<String>, stage: S, transition: T) -> Self
    where
        S: Fn(usize) -> Result<BoundedComplex> + Send + Sync + 'static,
        T: Fn(usize, i64) -> ExactMatrix + Send + Sync + 'static,
    {
        TowerComplex::new(ring, name, stage, move |n, a, b| {
            let components = (a.lo()..=a.hi()).map(|i| transition(n, i)).collect();
            ChainMap::new(a.clone(), b.clone(), components)
        })
    }

    pub fn ring(&self) -> BaseRing {
        self.ring
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn stage(&self, n: usize) -> Result<BoundedComplex> {
        self.stages.get(n)
    }

    pub fn transition(&self, n: usize) -> Result<ChainMap> {
        self.transitions.get(n)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MapClass {
    Zero,
    Iso,
    Other,
}

impl MapClass {
    /// Maps between zero spaces count as isomorphisms.
    fn classify(rank: usize, source: usize, target: usize) -> Self {
        if rank == source && rank == target {
            MapClass::Iso
        } else if rank == 0 {
            MapClass::Zero
        } else {
            MapClass::Other
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Status {
    Stabilized { value: usize, at_stage: usize },
    Undetermined { bound: usize },
}

impl Status {
    pub fn value(&self) -> Option<usize> {
        match self {
            Status::Stabilized { value, .. } => Some(*value),
            Status::Undetermined { .. } => None,
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::Stabilized { value, at_stage } => write!(f, "stabilized at {value} from stage {at_stage}"),
            Status::Undetermined { bound } => write!(f, "undetermined up to stage {bound}"),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct StabilizationReport {
    pub quantity: String,
    pub prime: Prime,
    /// `values[k]` belongs to stage `k + 1`.
    pub values: Vec<usize>,
    /// `maps[k]` is the map induced by the transition from stage `k + 1`.
    pub maps: Vec<MapClass>,
    pub status: Status,
}

#[derive(Clone, Copy, Debug)]
pub struct TowerBounds {
    pub max_stage: usize,
    pub window: usize,
}

impl Default for TowerBounds {
    fn default() -> Self {
        TowerBounds { max_stage: DEFAULT_MAX_STAGE, window: DEFAULT_WINDOW }
    }
}

/// Colimit value from the observed tail. A run of at least `window`
/// isomorphisms reaching the last computed map fixes the colimit at the
/// value where the run starts; a run of at least `window` zero maps
/// reaching the end gives colimit zero.
pub fn stabilize(values: &[usize], maps: &[MapClass], window: usize) -> Status {
    let bound = values.len();
    let tail = |class: MapClass| maps.iter().rev().take_while(|&&m| m == class).count();
    let window = window.max(1);
    let iso = tail(MapClass::Iso);
    if iso >= window {
        let start = maps.len() - iso;
        return Status::Stabilized { value: values[start], at_stage: start + 1 };
    }
    let zero = tail(MapClass::Zero);
    if zero >= window {
        let start = maps.len() - zero;
        return Status::Stabilized { value: 0, at_stage: start + 1 };
    }
    Status::Undetermined { bound }
}

fn check_bounds(bounds: TowerBounds) -> Result<()> {
    if bounds.max_stage < 2 {
        return Err(Error::Precondition("max_stage must be at least 2".into()));
    }
    Ok(())
}

/// `dim κ(q) ⊗ M_n` with the induced maps.
pub fn tower_fiber(t: &TowerModule, q: Prime, bounds: TowerBounds) -> Result<StabilizationReport> {
    t.ring.check_prime(q)?;
    check_bounds(bounds)?;
    let mut values = Vec::with_capacity(bounds.max_stage);
    let mut maps = Vec::with_capacity(bounds.max_stage - 1);
    for n in 1..=bounds.max_stage {
        values.push(t.stage(n)?.fiber_dimension(q)?);
    }
    for n in 1..bounds.max_stage {
        let rank = t.transition(n)?.fiber_rank(q)?;
        maps.push(MapClass::classify(rank, values[n - 1], values[n]));
    }
    let status = stabilize(&values, &maps, bounds.window);
    Ok(StabilizationReport { quantity: "fiber dimension".into(), prime: q, values, maps, status })
}

/// Rank of `H_i(f ⊗ κ)` for a chain map `f`, via
/// `dim(f(Z) + B) − dim B` on cycles `Z` of the source and boundaries `B`
/// of the target, all over `κ(q)`. Terms must be free.
fn induced_homology_rank(f: &ChainMap, q: Prime, i: i64) -> Result<usize> {
    let (a, b) = (f.source(), f.target());
    let z = field::kernel_basis(&a.boundary_matrix(i).reduce(q)?)?;
    let bnd = field::column_basis(&b.boundary_matrix(i + 1).reduce(q)?)?;
    let image = f.component(i).reduce(q)?.mul(&z)?;
    Ok(field::rank(&image.hconcat(&bnd)?)? - bnd.cols())
}

/// `dim H_i(C_n ⊗ κ(q))` with the induced maps.
pub fn tower_complex_homology_fiber(
    tc: &TowerComplex,
    q: Prime,
    degree: i64,
    bounds: TowerBounds,
) -> Result<StabilizationReport> {
    tc.ring.check_prime(q)?;
    check_bounds(bounds)?;
    let mut values = Vec::with_capacity(bounds.max_stage);
    let mut maps = Vec::with_capacity(bounds.max_stage - 1);
    for n in 1..=bounds.max_stage {
        let c = tc.stage(n)?;
        c.require_free()?;
        values.push(c.fiber_profile(q)?.dim(degree));
    }
    for n in 1..bounds.max_stage {
        let rank = induced_homology_rank(&tc.transition(n)?, q, degree)?;
        maps.push(MapClass::classify(rank, values[n - 1], values[n]));
    }
    let status = stabilize(&values, &maps, bounds.window);
    Ok(StabilizationReport { quantity: format!("H_{degree} of fiber"), prime: q, values, maps, status })
}

/// `dim Tor_i(κ(q), M_n)` with the maps induced through lifted resolutions.
pub fn tower_tor(t: &Arc<TowerModule>, q: Prime, i: usize, bounds: TowerBounds) -> Result<StabilizationReport> {
    let mut report = tower_complex_homology_fiber(&t.resolutions(i + 1), q, i as i64, bounds)?;
    report.quantity = format!("Tor_{i}");
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum FinitenessVerdict {
    /// Strictly increasing union; definitive when the flags are declared.
    NotFinitelyGenerated { definitive: bool, stages_checked: usize },
    /// The declared flags do not support a verdict.
    NoVerdict { reason: String },
}

/// A strictly increasing union of submodules is not finitely generated.
/// Every transition up to `max_stage` is checked to be injective with
/// nonzero cokernel.
pub fn tower_not_finitely_generated(t: &TowerModule, max_stage: usize) -> Result<FinitenessVerdict> {
    let flags = t.flags;
    if !(flags.all_transitions_injective && flags.all_transitions_non_surjective) {
        let mut surjective = Vec::new();
        for n in 1..max_stage.min(4) {
            if t.transition(n)?.is_surjective()? {
                surjective.push(n);
            }
        }
        let reason = if surjective.is_empty() {
            "injective, non-surjective transitions are not declared".to_string()
        } else {
            format!("transitions {surjective:?} are surjective")
        };
        return Ok(FinitenessVerdict::NoVerdict { reason });
    }
    for n in 1..max_stage {
        let f = t.transition(n)?;
        if !f.is_injective()? || f.cokernel()?.0.is_zero() {
            return Err(Error::FlagViolation(format!("transition {n} is not a strict inclusion")));
        }
    }
    Ok(FinitenessVerdict::NotFinitelyGenerated { definitive: true, stages_checked: max_stage })
}

/// `Z --×2--> Z --×3--> Z --×5--> ⋯`, colimit `Σ_p (1/p) Z ⊂ Q`.
pub fn sum_inverse_primes_tower() -> TowerModule {
    let z = BaseRing::INTEGERS;
    let flags = TowerFlags { all_transitions_injective: true, all_transitions_non_surjective: true };
    TowerModule::new(z, "sum-inverse-primes", flags, move |_| FpModule::free(z, 1), move |n| {
        let p = arith::first_primes(n)[n - 1];
        ExactMatrix::from_i64(z, 1, 1, &[p as i64]).expect("integer entry")
    })
}

/// `Z/p --×p--> Z/p² --×p--> ⋯` over `Z_(p)`, colimit the injective hull of
/// the residue field.
pub fn injective_hull_tower(p: u64) -> Result<TowerModule> {
    let r = BaseRing::localized(p)?;
    let flags = TowerFlags { all_transitions_injective: true, all_transitions_non_surjective: true };
    Ok(TowerModule::new(
        r,
        format!("injective-hull({p})"),
        flags,
        move |n| {
            let order = BigRational::from_integer(BigInt::from(p).pow(n as u32));
            FpModule::cyclic(r, &order).expect("integers lie in every localization")
        },
        move |_| ExactMatrix::from_i64(r, 1, 1, &[p as i64]).expect("integer entry"),
    ))
}

/// `0 -> R -> 0` in degree 0 with transitions `×p` over `Z_(p)`; the colimit
/// is the fraction field.
pub fn dvr_fraction_field_tower(p: u64) -> Result<TowerComplex> {
    let r = BaseRing::localized(p)?;
    Ok(TowerComplex::from_free_rule(
        r,
        format!("dvr-fraction-field({p})"),
        move |_| BoundedComplex::from_free(r, 0, &[1], vec![]),
        move |_, _| ExactMatrix::from_i64(r, 1, 1, &[p as i64]).expect("integer entry"),
    ))
}

/// One comparison between an observed colimit and the expected value.
#[derive(Clone, Debug, Serialize)]
pub struct GalleryLine {
    pub quantity: String,
    pub prime: Prime,
    pub expected: usize,
    pub status: Status,
    pub matches: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct GalleryReport {
    pub name: String,
    pub ring: BaseRing,
    pub lines: Vec<GalleryLine>,
    pub finiteness: Option<FinitenessVerdict>,
    pub reports: Vec<StabilizationReport>,
}

impl GalleryReport {
    pub fn all_match(&self) -> bool {
        self.lines.iter().all(|l| l.matches)
            && self.finiteness.as_ref().is_none_or(|v| matches!(v, FinitenessVerdict::NotFinitelyGenerated { .. }))
    }

    fn push(&mut self, report: StabilizationReport, expected: usize) {
        self.lines.push(GalleryLine {
            quantity: report.quantity.clone(),
            prime: report.prime,
            expected,
            matches: report.status.value() == Some(expected),
            status: report.status.clone(),
        });
        self.reports.push(report);
    }
}

#[derive(Clone, Copy, Debug)]
pub struct GalleryParams {
    pub p: u64,
    pub max_prime: u64,
    pub bounds: TowerBounds,
}

impl Default for GalleryParams {
    fn default() -> Self {
        GalleryParams { p: 2, max_prime: 100, bounds: TowerBounds::default() }
    }
}

pub const GALLERY: [&str; 3] = ["sum-inverse-primes", "injective-hull", "dvr-fraction-field"];

pub fn gallery(name: &str, params: GalleryParams) -> Result<GalleryReport> {
    let mut bounds = params.bounds;
    match name {
        "sum-inverse-primes" => {
            let t = sum_inverse_primes_tower();
            let primes = arith::primes_up_to(params.max_prime);
            // The transition ×p must be seen, followed by a full window.
            bounds.max_stage = bounds.max_stage.max(primes.len() + bounds.window + 1);
            let mut g = report_shell(name, t.ring());
            for q in std::iter::once(Prime::Generic).chain(primes.into_iter().map(Prime::At)) {
                let mut r = tower_fiber(&t, q, bounds)?;
                r.quantity = "h_0".into();
                g.push(r, 1);
            }
            g.finiteness = Some(tower_not_finitely_generated(&t, bounds.max_stage)?);
            Ok(g)
        }
        "injective-hull" => {
            let t = Arc::new(injective_hull_tower(params.p)?);
            let mut g = report_shell(name, t.ring());
            for q in [Prime::Generic, Prime::At(params.p)] {
                for i in 0..=1 {
                    let expected = usize::from(i == 1 && q != Prime::Generic);
                    g.push(tower_tor(&t, q, i, bounds)?, expected);
                }
            }
            g.finiteness = Some(tower_not_finitely_generated(&t, bounds.max_stage)?);
            Ok(g)
        }
        "dvr-fraction-field" => {
            let tc = dvr_fraction_field_tower(params.p)?;
            let mut g = report_shell(name, tc.ring());
            g.push(tower_complex_homology_fiber(&tc, Prime::At(params.p), 0, bounds)?, 0);
            g.push(tower_complex_homology_fiber(&tc, Prime::Generic, 0, bounds)?, 1);
            Ok(g)
        }
        other => Err(Error::UnknownGallery(other.to_string())),
    }
}

fn report_shell(name: &str, ring: BaseRing) -> GalleryReport {
    GalleryReport { name: name.to_string(), ring, lines: Vec::new(), finiteness: None, reports: Vec::new() }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> TowerBounds {
        TowerBounds { max_stage: 8, window: 3 }
    }

    #[test]
    fn stabilization_rule() {
        use MapClass::*;
        assert_eq!(stabilize(&[1, 1, 1, 1], &[Zero, Iso, Iso, Iso][..3], 3), Status::Undetermined { bound: 4 });
        assert_eq!(stabilize(&[1, 1, 1, 1, 1], &[Zero, Iso, Iso, Iso], 3), Status::Stabilized { value: 1, at_stage: 2 });
        assert_eq!(stabilize(&[1, 1, 1, 1], &[Zero, Zero, Zero], 3), Status::Stabilized { value: 0, at_stage: 1 });
        assert_eq!(stabilize(&[1, 2, 3, 4], &[Other, Other, Other], 3), Status::Undetermined { bound: 4 });
    }

    #[test]
    fn sum_inverse_primes_fibers() {
        let t = sum_inverse_primes_tower();
        let r = tower_fiber(&t, Prime::At(3), small()).unwrap();
        assert_eq!(r.values, vec![1; 8]);
        assert_eq!(r.maps[1], MapClass::Zero);
        assert!(r.maps.iter().enumerate().all(|(k, m)| k == 1 || *m == MapClass::Iso));
        assert_eq!(r.status, Status::Stabilized { value: 1, at_stage: 3 });
        let r = tower_fiber(&t, Prime::Generic, small()).unwrap();
        assert_eq!(r.status, Status::Stabilized { value: 1, at_stage: 1 });
        assert!(matches!(
            tower_not_finitely_generated(&t, 8).unwrap(),
            FinitenessVerdict::NotFinitelyGenerated { definitive: true, .. }
        ));
    }

    #[test]
    fn constant_towers() {
        let z = BaseRing::INTEGERS;
        let t = TowerModule::constant(FpModule::cyclic_int(z, 2));
        let r = tower_fiber(&t, Prime::At(2), small()).unwrap();
        assert_eq!(r.status, Status::Stabilized { value: 1, at_stage: 1 });
        assert!(matches!(tower_not_finitely_generated(&t, 8).unwrap(), FinitenessVerdict::NoVerdict { .. }));
        let free = Arc::new(TowerModule::constant(FpModule::free(z, 1)));
        assert_eq!(tower_tor(&free, Prime::At(2), 1, small()).unwrap().status.value(), Some(0));
    }

    #[test]
    fn injective_hull_tor() {
        let t = Arc::new(injective_hull_tower(2).unwrap());
        let r1 = tower_tor(&t, Prime::At(2), 1, small()).unwrap();
        assert_eq!(r1.values, vec![1; 8]);
        assert_eq!(r1.status, Status::Stabilized { value: 1, at_stage: 1 });
        let r0 = tower_tor(&t, Prime::At(2), 0, small()).unwrap();
        assert!(r0.maps.iter().all(|m| *m == MapClass::Zero));
        assert_eq!(r0.status.value(), Some(0));
        assert_eq!(tower_tor(&t, Prime::Generic, 0, small()).unwrap().status.value(), Some(0));
    }

    #[test]
    fn dvr_fraction_field() {
        let tc = dvr_fraction_field_tower(3).unwrap();
        assert_eq!(tower_complex_homology_fiber(&tc, Prime::At(3), 0, small()).unwrap().status.value(), Some(0));
        assert_eq!(tower_complex_homology_fiber(&tc, Prime::Generic, 0, small()).unwrap().status.value(), Some(1));
    }

    #[test]
    fn flag_violation_is_reported() {
        let z = BaseRing::INTEGERS;
        let flags = TowerFlags { all_transitions_injective: true, all_transitions_non_surjective: true };
        let t = TowerModule::new(z, "bad", flags, move |_| FpModule::free(z, 1), move |_| ExactMatrix::identity(z, 1));
        assert!(matches!(t.transition(1), Err(Error::FlagViolation(_))));
    }

    #[test]
    fn galleries() {
        for name in GALLERY {
            assert!(gallery(name, GalleryParams::default()).unwrap().all_match(), "{name}");
        }
        assert!(gallery("nope", GalleryParams::default()).is_err());
    }
}
