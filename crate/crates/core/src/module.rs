//! Finitely presented modules `M = coker(R^r -> R^g)` and their morphisms.
//!
//! Relations are columns: a module with `g` generators carries a `g × r`
//! relation matrix whose column span is the submodule divided out.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith;
use crate::error::{Error, Result};
use crate::linalg::{field, kernel_generators, snf, solve_integral};
use crate::matrix::ExactMatrix;
use crate::ring::{BaseRing, Prime, RingElement, RingKind};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FpModule {
    ring: BaseRing,
    generators: usize,
    relations: ExactMatrix,
}

/// `R^free_rank ⊕ R/(d_1) ⊕ … ⊕ R/(d_k)` with `d_1 | d_2 | … | d_k`,
/// each `d_i` a nonzero non-unit in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct InvariantFactors {
    pub free_rank: usize,
    pub torsion: Vec<RingElement>,
}

impl InvariantFactors {
    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }
}

impl serde::Serialize for InvariantFactors {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("InvariantFactors", 2)?;
        st.serialize_field("free_rank", &self.free_rank)?;
        let torsion: Vec<String> = self.torsion.iter().map(|d| d.to_string()).collect();
        st.serialize_field("torsion", &torsion)?;
        st.end()
    }
}

impl fmt::Display for InvariantFactors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        let ring = self.torsion.first().map(|t| t.ring.to_string());
        for d in &self.torsion {
            let r = ring.as_deref().unwrap_or("R");
            if r.contains('/') {
                parts.push(format!("({r})/({d})"));
            } else {
                parts.push(format!("{r}/({d})"));
            }
        }
        if self.free_rank > 0 {
            parts.push(format!("R^{}", self.free_rank));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

impl FpModule {
    pub fn new(ring: BaseRing, generators: usize, relations: ExactMatrix) -> Result<Self> {
        if relations.ring() != ring {
            return Err(Error::RingMismatch(ring.to_string(), relations.ring().to_string()));
        }
        if relations.rows() != generators {
            return Err(Error::Shape(format!(
                "relation matrix has {} rows for {generators} generators",
                relations.rows()
            )));
        }
        Ok(FpModule { ring, generators, relations })
    }

    pub fn free(ring: BaseRing, rank: usize) -> Self {
        FpModule { ring, generators: rank, relations: ExactMatrix::zero(ring, rank, 0) }
    }

    pub fn zero(ring: BaseRing) -> Self {
        Self::free(ring, 0)
    }

    /// `R/(d)`.
    pub fn cyclic(ring: BaseRing, d: &BigRational) -> Result<Self> {
        let d = ring.element(d)?;
        Ok(FpModule { ring, generators: 1, relations: ExactMatrix::from_canon(ring, 1, 1, vec![d]) })
    }

    pub fn cyclic_int(ring: BaseRing, d: i64) -> Self {
        FpModule { ring, generators: 1, relations: ExactMatrix::from_canon(ring, 1, 1, vec![ring.from_int(d)]) }
    }

    /// `⊕ R/(d_i)`, one generator per entry (a zero entry gives a free summand).
    pub fn diagonal(ring: BaseRing, ds: &[BigRational]) -> Self {
        let n = ds.len();
        FpModule { ring, generators: n, relations: ExactMatrix::diagonal(ring, n, n, ds) }
    }

    pub fn ring(&self) -> BaseRing {
        self.ring
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    pub fn relations(&self) -> &ExactMatrix {
        &self.relations
    }

    pub fn is_presented_free(&self) -> bool {
        self.relations.is_zero()
    }

    pub fn invariant_factors(&self) -> InvariantFactors {
        let s = snf(&self.relations);
        let nonzero: Vec<&RingElement> = s.elementary_divisors.iter().filter(|d| !d.is_zero()).collect();
        InvariantFactors {
            free_rank: self.generators - nonzero.len(),
            torsion: nonzero.into_iter().filter(|d| !d.is_unit()).cloned().collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.invariant_factors().is_zero()
    }

    /// Diagonal presentation of the same isomorphism class.
    pub fn canonical(&self) -> FpModule {
        let inv = self.invariant_factors();
        let mut ds: Vec<BigRational> = inv.torsion.iter().map(|d| d.value.clone()).collect();
        ds.extend(std::iter::repeat_n(BigRational::zero(), inv.free_rank));
        FpModule::diagonal(self.ring, &ds)
    }

    pub fn direct_sum(&self, other: &FpModule) -> Result<FpModule> {
        FpModule::new(self.ring, self.generators + other.generators, self.relations.block_diag(&other.relations)?)
    }

    /// True when every column of `v` (vectors on the generators) is zero in `M`.
    pub fn vanishes(&self, v: &ExactMatrix) -> Result<bool> {
        Ok(solve_integral(&self.relations, v)?.is_some())
    }

    /// `dim κ(q) ⊗ M = g − rank of the reduced relations`.
    pub fn fiber_dimension(&self, q: Prime) -> Result<usize> {
        Ok(self.generators - field::rank_over_fiber(&self.relations, q)?)
    }

    pub fn is_isomorphic(&self, other: &FpModule) -> bool {
        self.ring == other.ring && self.invariant_factors() == other.invariant_factors()
    }

    /// Presentation of the submodule generated by the columns of `gens`.
    pub fn submodule(&self, gens: &ExactMatrix) -> Result<FpModule> {
        if gens.rows() != self.generators {
            return Err(Error::Shape("submodule generators have the wrong length".into()));
        }
        let k = gens.cols();
        let stacked = gens.hconcat(&self.relations.neg())?;
        let syz = kernel_generators(&stacked);
        let rows: Vec<usize> = (0..k).collect();
        FpModule::new(self.ring, k, syz.select_rows(&rows))
    }
}

impl fmt::Display for FpModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.invariant_factors())
    }
}

/// `invariant_factors`.
pub fn invariant_factors(m: &FpModule) -> InvariantFactors {
    m.invariant_factors()
}

/// A homomorphism given by the images of the source generators (columns).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleMap {
    source: FpModule,
    target: FpModule,
    matrix: ExactMatrix,
}

impl ModuleMap {
    /// Validates that relations of the source land in relations of the target.
    pub fn new(source: FpModule, target: FpModule, matrix: ExactMatrix) -> Result<Self> {
        if source.ring != target.ring || matrix.ring() != source.ring {
            return Err(Error::RingMismatch(source.ring.to_string(), matrix.ring().to_string()));
        }
        if matrix.shape() != (target.generators, source.generators) {
            return Err(Error::Shape(format!(
                "map matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.generators,
                source.generators
            )));
        }
        let image = matrix.mul_unchecked(&source.relations);
        if !target.vanishes(&image)? {
            return Err(Error::InvalidMap("source relations do not map into target relations".into()));
        }
        Ok(ModuleMap { source, target, matrix })
    }

    pub(crate) fn new_unchecked(source: FpModule, target: FpModule, matrix: ExactMatrix) -> Self {
        ModuleMap { source, target, matrix }
    }

    pub fn identity(m: &FpModule) -> Self {
        ModuleMap::new_unchecked(m.clone(), m.clone(), ExactMatrix::identity(m.ring, m.generators))
    }

    pub fn zero(source: &FpModule, target: &FpModule) -> Self {
        let z = ExactMatrix::zero(source.ring, target.generators, source.generators);
        ModuleMap::new_unchecked(source.clone(), target.clone(), z)
    }

    pub fn source(&self) -> &FpModule {
        &self.source
    }

    pub fn target(&self) -> &FpModule {
        &self.target
    }

    pub fn matrix(&self) -> &ExactMatrix {
        &self.matrix
    }

    pub fn ring(&self) -> BaseRing {
        self.source.ring
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &ModuleMap) -> Result<ModuleMap> {
        if self.target.generators != other.source.generators {
            return Err(Error::Shape("maps are not composable".into()));
        }
        Ok(ModuleMap::new_unchecked(self.source.clone(), other.target.clone(), other.matrix.mul(&self.matrix)?))
    }

    /// True when the map is zero as a homomorphism.
    pub fn is_zero_map(&self) -> Result<bool> {
        self.target.vanishes(&self.matrix)
    }

    /// Two maps between the same modules agree as homomorphisms.
    pub fn agrees_with(&self, other: &ModuleMap) -> Result<bool> {
        self.target.vanishes(&self.matrix.sub(&other.matrix)?)
    }

    /// Kernel with its inclusion into the source.
    pub fn kernel(&self) -> Result<(FpModule, ModuleMap)> {
        let g = self.source.generators;
        let stacked = self.matrix.hconcat(&self.target.relations.neg())?;
        let all = kernel_generators(&stacked);
        let rows: Vec<usize> = (0..g).collect();
        let gens = all.select_rows(&rows);
        let k = self.source.submodule(&gens)?;
        let incl = ModuleMap::new_unchecked(k.clone(), self.source.clone(), gens);
        Ok((k, incl))
    }

    /// Image with its inclusion into the target.
    pub fn image(&self) -> Result<(FpModule, ModuleMap)> {
        let im = self.target.submodule(&self.matrix)?;
        let incl = ModuleMap::new_unchecked(im.clone(), self.target.clone(), self.matrix.clone());
        Ok((im, incl))
    }

    /// Cokernel with the projection from the target.
    pub fn cokernel(&self) -> Result<(FpModule, ModuleMap)> {
        let rel = self.target.relations.hconcat(&self.matrix)?;
        let c = FpModule::new(self.ring(), self.target.generators, rel)?;
        let proj = ModuleMap::new_unchecked(
            self.target.clone(),
            c.clone(),
            ExactMatrix::identity(self.ring(), self.target.generators),
        );
        Ok((c, proj))
    }

    pub fn is_injective(&self) -> Result<bool> {
        Ok(self.kernel()?.0.is_zero())
    }

    pub fn is_surjective(&self) -> Result<bool> {
        Ok(self.cokernel()?.0.is_zero())
    }

    /// Factor `self` through an injection `incl: K -> target`, returning
    /// `h: source -> K` with `incl ∘ h = self`, if one exists.
    pub fn lift_through(&self, incl: &ModuleMap) -> Result<Option<ModuleMap>> {
        let a = incl.matrix.hconcat(&self.target.relations)?;
        let Some(x) = solve_integral(&a, &self.matrix)? else { return Ok(None) };
        let rows: Vec<usize> = (0..incl.source.generators).collect();
        Ok(Some(ModuleMap::new_unchecked(self.source.clone(), incl.source.clone(), x.select_rows(&rows))))
    }

    /// Rank of the induced map `κ(q) ⊗ M -> κ(q) ⊗ N`.
    pub fn fiber_rank(&self, q: Prime) -> Result<usize> {
        let rel = self.target.relations.reduce(q)?;
        let both = self.matrix.reduce(q)?.hconcat(&rel)?;
        Ok(field::rank(&both)? - field::rank(&rel)?)
    }

    pub fn fiber_injective(&self, q: Prime) -> Result<bool> {
        Ok(self.fiber_rank(q)? == self.source.fiber_dimension(q)?)
    }

    pub fn fiber_surjective(&self, q: Prime) -> Result<bool> {
        Ok(self.fiber_rank(q)? == self.target.fiber_dimension(q)?)
    }
}

/// `kernel`
pub fn kernel(f: &ModuleMap) -> Result<(FpModule, ModuleMap)> {
    f.kernel()
}

/// `image`
pub fn image(f: &ModuleMap) -> Result<(FpModule, ModuleMap)> {
    f.image()
}

/// `cokernel`
pub fn cokernel(f: &ModuleMap) -> Result<(FpModule, ModuleMap)> {
    f.cokernel()
}

/// `M ⊗ N`, generator `(i, j)` at index `i * g_N + j`.
pub fn tensor_modules(m: &FpModule, n: &FpModule) -> Result<FpModule> {
    if m.ring != n.ring {
        return Err(Error::RingMismatch(m.ring.to_string(), n.ring.to_string()));
    }
    let ring = m.ring;
    let left = m.relations.kron(&ExactMatrix::identity(ring, n.generators))?;
    let right = ExactMatrix::identity(ring, m.generators).kron(&n.relations)?;
    FpModule::new(ring, m.generators * n.generators, left.hconcat(&right)?)
}

/// `fiber_module`: `dim κ(q) ⊗ M`.
pub fn fiber_module(m: &FpModule, q: Prime) -> Result<usize> {
    m.fiber_dimension(q)
}

/// Flatness of a finitely presented module.
///
/// Over `Z` and `Z_(p)` this is torsion-freeness. Over `Z/n` a finitely
/// presented module is flat iff projective iff free on every local factor
/// `Z/p^e`, i.e. every torsion factor has `p`-valuation `0` or `e`.
pub fn is_flat(m: &FpModule) -> bool {
    let inv = m.invariant_factors();
    match m.ring.kind() {
        RingKind::IntegersMod(n) => {
            let factors = arith::factorize(&BigInt::from(n)).expect("u64 modulus");
            inv.torsion.iter().all(|d| {
                factors.iter().all(|&(p, e)| {
                    let v = arith::valuation(d.value.numer(), p).min(e);
                    v == 0 || v == e
                })
            })
        }
        _ => inv.torsion.is_empty(),
    }
}

/// Primes on which statements about the given matrices must be checked:
/// the whole spectrum when it is finite, else the generic point together with
/// every prime dividing the last nonzero elementary divisor of some matrix.
pub fn critical_primes(ring: BaseRing, matrices: &[&ExactMatrix]) -> Result<Vec<Prime>> {
    let spec = ring.spectrum();
    if spec.finite().is_some() {
        return Ok(spec.discharge(&[]));
    }
    let mut bad = Vec::new();
    for m in matrices {
        for p in bad_primes_of_matrix(m)? {
            bad.push(p);
        }
    }
    Ok(spec.discharge(&bad))
}

/// Primes at which the fiber rank of `a` drops below its generic rank.
pub fn bad_primes_of_matrix(a: &ExactMatrix) -> Result<Vec<Prime>> {
    let s = snf(a);
    let Some(last) = s.elementary_divisors.iter().rev().find(|d| !d.is_zero()) else {
        return Ok(Vec::new());
    };
    match a.ring().kind() {
        RingKind::Integers => Ok(arith::prime_divisors(last.value.numer())?.into_iter().map(Prime::At).collect()),
        RingKind::LocalizedIntegers(p) => Ok(if last.is_unit() { vec![] } else { vec![Prime::At(p)] }),
        _ => Err(Error::UnsupportedRing { op: "bad prime enumeration", ring: a.ring().to_string() }),
    }
}

/// Flat modules over a local or principal ring, rewritten on a free basis:
/// `(projection R^g -> R^f, section R^f -> R^g)` where `f` is the free rank.
fn free_coordinates(m: &FpModule) -> (ExactMatrix, ExactMatrix) {
    let s = snf(&m.relations);
    let diag = s.elementary_divisors.len();
    let free: Vec<usize> = (0..m.generators).filter(|&i| i >= diag || s.elementary_divisors[i].is_zero()).collect();
    (s.u_inv.select_rows(&free), s.u.select_columns(&free))
}

fn split_injective_on_free_bases(f: &ModuleMap) -> Result<bool> {
    let (_, section) = free_coordinates(&f.source);
    let (proj, _) = free_coordinates(&f.target);
    let a = proj.mul(&f.matrix)?.mul(&section)?;
    let s = snf(&a);
    Ok(a.cols() <= a.rows() && s.elementary_divisors.iter().filter(|d| d.is_unit()).count() == a.cols())
}

fn map_to_ring(f: &ModuleMap, ring: BaseRing) -> Result<ModuleMap> {
    let push = |m: &FpModule| -> Result<FpModule> { FpModule::new(ring, m.generators, m.relations.change_ring(ring)?) };
    Ok(ModuleMap::new_unchecked(push(&f.source)?, push(&f.target)?, f.matrix.change_ring(ring)?))
}

/// Purity of a map between flat modules, via split injectivity on free bases.
/// Over `Z/n` the test runs on each local factor `Z/p^e`.
pub fn is_pure(f: &ModuleMap) -> Result<bool> {
    match f.ring().kind() {
        RingKind::IntegersMod(n) => {
            for (p, e) in arith::factorize(&BigInt::from(n))? {
                let local = BaseRing::integers_mod(p.pow(e))?;
                if !split_injective_on_free_bases(&map_to_ring(f, local)?)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        _ => split_injective_on_free_bases(f),
    }
}

/// Three independent computations of the equivalent conditions for a map
/// of flat modules.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct PurityReport {
    pub injective_flat_coker: bool,
    pub pure: bool,
    pub fiberwise_injective: bool,
    pub checked_primes: Vec<Prime>,
}

pub fn purity_report(f: &ModuleMap) -> Result<PurityReport> {
    if !is_flat(&f.source) || !is_flat(&f.target) {
        return Err(Error::Precondition("purity_report needs flat source and target".into()));
    }
    let injective_flat_coker = f.is_injective()? && is_flat(&f.cokernel()?.0);
    let pure = is_pure(f)?;
    let both = f.matrix.hconcat(&f.target.relations)?;
    let checked_primes = critical_primes(f.ring(), &[&f.source.relations, &f.target.relations, &both])?;
    let mut fiberwise_injective = true;
    for &q in &checked_primes {
        fiberwise_injective &= f.fiber_injective(q)?;
    }
    if injective_flat_coker != pure || pure != fiberwise_injective {
        return Err(Error::Violation(format!(
            "map criterion disagreement: injective+flat coker={injective_flat_coker}, pure={pure}, fiberwise injective={fiberwise_injective}"
        )));
    }
    Ok(PurityReport { injective_flat_coker, pure, fiberwise_injective, checked_primes })
}

/// `0 = M_0 ⊂ M_1 ⊂ … ⊂ M_r ≅ M` with each `M_i / M_{i-1} ≅ R/p_i`.
#[derive(Clone, Debug)]
pub struct PrimeFiltration {
    /// `stages[0]` is the zero module.
    pub stages: Vec<FpModule>,
    /// `inclusions[i]: stages[i] -> stages[i + 1]`.
    pub inclusions: Vec<ModuleMap>,
    /// Prime of the quotient `stages[i + 1] / stages[i]`.
    pub quotient_primes: Vec<Prime>,
}

impl PrimeFiltration {
    /// Check every inclusion is injective with cokernel `R/p`, and that the
    /// top stage is isomorphic to `m`.
    pub fn verify(&self, m: &FpModule) -> Result<()> {
        let fail = |what: String| Err(Error::Violation(format!("prime filtration: {what}")));
        if !self.stages.first().is_some_and(FpModule::is_zero) {
            return fail("first stage is not zero".into());
        }
        if !self.stages.last().is_some_and(|top| top.is_isomorphic(m)) {
            return fail("last stage is not isomorphic to the module".into());
        }
        for (i, (incl, q)) in self.inclusions.iter().zip(&self.quotient_primes).enumerate() {
            if incl.source() != &self.stages[i] || incl.target() != &self.stages[i + 1] {
                return fail(format!("inclusion {i} has the wrong endpoints"));
            }
            ModuleMap::new(incl.source.clone(), incl.target.clone(), incl.matrix.clone())?;
            if !incl.is_injective()? {
                return fail(format!("inclusion {i} is not injective"));
            }
            let quotient = incl.cokernel()?.0.invariant_factors();
            let ring = m.ring;
            let expected = match q {
                Prime::Generic => InvariantFactors { free_rank: 1, torsion: vec![] },
                Prime::At(p) => InvariantFactors { free_rank: 0, torsion: vec![RingElement::int(ring, *p as i64)] },
            };
            if quotient != expected {
                return fail(format!("quotient {i} is {quotient}, expected R/{q}"));
            }
        }
        Ok(())
    }
}

/// Prime filtration over `Z` or `Z_(p)`: torsion factors are refined one
/// prime at a time (ascending), then free summands contribute `R/(0)` steps.
pub fn prime_filtration(m: &FpModule) -> Result<PrimeFiltration> {
    let ring = m.ring;
    if !matches!(ring.kind(), RingKind::Integers | RingKind::LocalizedIntegers(_)) {
        return Err(Error::UnsupportedRing { op: "prime_filtration", ring: ring.to_string() });
    }
    let inv = m.invariant_factors();
    let t = inv.torsion.len();
    let g = t + inv.free_rank;
    // Current order of each summand: 1 means "not started" (zero summand).
    let mut orders: Vec<BigRational> = vec![BigRational::one(); g];
    let mut stages = vec![FpModule::diagonal(ring, &orders)];
    let mut inclusions = Vec::new();
    let mut quotient_primes = Vec::new();
    let mut steps: Vec<(usize, Prime)> = Vec::new();
    for (i, d) in inv.torsion.iter().enumerate() {
        for (p, e) in arith::factorize(d.value.numer())? {
            for _ in 0..e {
                steps.push((i, Prime::At(p)));
            }
        }
    }
    for i in t..g {
        steps.push((i, Prime::Generic));
    }
    for (i, q) in steps {
        let mut matrix = ExactMatrix::identity(ring, g);
        let started = !orders[i].is_one();
        match q {
            Prime::At(p) => {
                let p = BigRational::from_integer(BigInt::from(p));
                matrix.set(i, i, if started { p.clone() } else { BigRational::zero() });
                orders[i] = &orders[i] * &p;
            }
            Prime::Generic => {
                matrix.set(i, i, BigRational::zero());
                orders[i] = BigRational::zero();
            }
        }
        let next = FpModule::diagonal(ring, &orders);
        let prev = stages.last().expect("nonempty").clone();
        inclusions.push(ModuleMap::new(prev, next.clone(), matrix)?);
        stages.push(next);
        quotient_primes.push(q);
    }
    // Over Z_(p) torsion orders are p^v times units; express them canonically.
    Ok(PrimeFiltration { stages, inclusions, quotient_primes })
}
