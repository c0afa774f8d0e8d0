//! Bounded chain complexes with homological indexing: `d_i: C_i -> C_{i-1}`.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::linalg::field;
use crate::matrix::ExactMatrix;
use crate::module::{tensor_modules, FpModule, ModuleMap};
use crate::ring::{BaseRing, Prime};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundedComplex {
    ring: BaseRing,
    lo: i64,
    /// `terms[k]` sits in degree `lo + k`.
    terms: Vec<FpModule>,
    /// `boundaries[k]` is `d_{lo+k+1}: terms[k+1] -> terms[k]`.
    boundaries: Vec<ModuleMap>,
}

/// Fiber homology dimensions, keyed by degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberProfile {
    pub prime: Prime,
    pub dims: BTreeMap<i64, usize>,
}

/// Serialized with degrees descending.
impl serde::Serialize for FiberProfile {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        #[derive(serde::Serialize)]
        struct Dim {
            degree: i64,
            dim: usize,
        }
        let dims: Vec<Dim> = self.dims.iter().rev().map(|(&degree, &dim)| Dim { degree, dim }).collect();
        let mut st = s.serialize_struct("FiberProfile", 2)?;
        st.serialize_field("prime", &self.prime)?;
        st.serialize_field("dims", &dims)?;
        st.end()
    }
}

impl FiberProfile {
    pub fn dim(&self, i: i64) -> usize {
        self.dims.get(&i).copied().unwrap_or(0)
    }

    /// All fiber homology in positive degrees vanishes.
    pub fn is_acyclic(&self) -> bool {
        self.dims.iter().all(|(&i, &d)| i <= 0 || d == 0)
    }

    pub fn is_exact(&self) -> bool {
        self.dims.values().all(|&d| d == 0)
    }
}

fn sign(neg: bool) -> BigRational {
    if neg {
        -BigRational::one()
    } else {
        BigRational::one()
    }
}

impl BoundedComplex {
    /// Validates shapes, rings and `d ∘ d = 0`.
    pub fn new(ring: BaseRing, lo: i64, terms: Vec<FpModule>, boundaries: Vec<ModuleMap>) -> Result<Self> {
        if terms.is_empty() {
            return Ok(Self::zero(ring, lo));
        }
        if boundaries.len() + 1 != terms.len() {
            return Err(Error::InvalidComplex(format!(
                "{} terms need {} boundaries, got {}",
                terms.len(),
                terms.len() - 1,
                boundaries.len()
            )));
        }
        if let Some(t) = terms.iter().find(|t| t.ring() != ring) {
            return Err(Error::RingMismatch(ring.to_string(), t.ring().to_string()));
        }
        for (k, d) in boundaries.iter().enumerate() {
            if d.source() != &terms[k + 1] || d.target() != &terms[k] {
                return Err(Error::InvalidComplex(format!("boundary d_{} does not fit its terms", lo + k as i64 + 1)));
            }
        }
        for k in 1..boundaries.len() {
            let dd = boundaries[k - 1].matrix().mul(boundaries[k].matrix())?;
            if !terms[k - 1].vanishes(&dd)? {
                return Err(Error::InvalidComplex(format!("d_{} ∘ d_{} is not zero", lo + k as i64, lo + k as i64 + 1)));
            }
        }
        Ok(BoundedComplex { ring, lo, terms, boundaries })
    }

    /// Complex of free modules `R^{ranks[k]}` in degree `lo + k`, with
    /// `matrices[k]` the boundary into degree `lo + k`.
    pub fn from_free(ring: BaseRing, lo: i64, ranks: &[usize], matrices: Vec<ExactMatrix>) -> Result<Self> {
        let terms: Vec<FpModule> = ranks.iter().map(|&r| FpModule::free(ring, r)).collect();
        if matrices.len() + 1 != terms.len().max(1) {
            return Err(Error::InvalidComplex(format!("{} ranks need {} boundaries", ranks.len(), ranks.len().saturating_sub(1))));
        }
        let mut boundaries = Vec::with_capacity(matrices.len());
        for (k, m) in matrices.into_iter().enumerate() {
            if m.shape() != (ranks[k], ranks[k + 1]) {
                return Err(Error::Shape(format!(
                    "boundary into degree {} is {}x{}, expected {}x{}",
                    lo + k as i64,
                    m.rows(),
                    m.cols(),
                    ranks[k],
                    ranks[k + 1]
                )));
            }
            if m.ring() != ring {
                return Err(Error::RingMismatch(ring.to_string(), m.ring().to_string()));
            }
            boundaries.push(ModuleMap::new_unchecked(terms[k + 1].clone(), terms[k].clone(), m));
        }
        Self::new(ring, lo, terms, boundaries)
    }

    /// Integer-entry convenience for [`BoundedComplex::from_free`]; each
    /// matrix is given as rows.
    pub fn from_free_i64(ring: BaseRing, lo: i64, ranks: &[usize], matrices: &[Vec<Vec<i64>>]) -> Result<Self> {
        let mats = matrices
            .iter()
            .enumerate()
            .map(|(k, rows)| ExactMatrix::from_rows(ring, ranks[k + 1], rows))
            .collect::<Result<Vec<_>>>()?;
        Self::from_free(ring, lo, ranks, mats)
    }

    pub fn zero(ring: BaseRing, lo: i64) -> Self {
        BoundedComplex { ring, lo, terms: vec![FpModule::zero(ring)], boundaries: vec![] }
    }

    /// `0 -> M -> 0` in degree `i`.
    pub fn concentrated(m: FpModule, i: i64) -> Self {
        BoundedComplex { ring: m.ring(), lo: i, terms: vec![m], boundaries: vec![] }
    }

    pub(crate) fn new_unchecked(ring: BaseRing, lo: i64, terms: Vec<FpModule>, boundaries: Vec<ModuleMap>) -> Self {
        debug_assert_eq!(terms.len(), boundaries.len() + 1);
        BoundedComplex { ring, lo, terms, boundaries }
    }

    pub fn ring(&self) -> BaseRing {
        self.ring
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.terms.len() as i64 - 1
    }

    pub fn degrees(&self) -> impl DoubleEndedIterator<Item = i64> {
        self.lo..=self.hi()
    }

    fn index(&self, i: i64) -> Option<usize> {
        (i >= self.lo && i <= self.hi()).then(|| (i - self.lo) as usize)
    }

    pub fn term(&self, i: i64) -> FpModule {
        self.index(i).map_or_else(|| FpModule::zero(self.ring), |k| self.terms[k].clone())
    }

    pub fn terms(&self) -> &[FpModule] {
        &self.terms
    }

    pub fn rank(&self, i: i64) -> usize {
        self.index(i).map_or(0, |k| self.terms[k].generators())
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.terms.iter().map(FpModule::generators).collect()
    }

    pub fn relations(&self, i: i64) -> ExactMatrix {
        self.index(i).map_or_else(|| ExactMatrix::zero(self.ring, 0, 0), |k| self.terms[k].relations().clone())
    }

    /// `d_i: C_i -> C_{i-1}`, the zero map outside the range.
    pub fn boundary(&self, i: i64) -> ModuleMap {
        match (self.index(i), self.index(i - 1)) {
            (Some(k), Some(_)) => self.boundaries[k - 1].clone(),
            _ => ModuleMap::zero(&self.term(i), &self.term(i - 1)),
        }
    }

    pub fn boundary_matrix(&self, i: i64) -> ExactMatrix {
        match (self.index(i), self.index(i - 1)) {
            (Some(k), Some(_)) => self.boundaries[k - 1].matrix().clone(),
            _ => ExactMatrix::zero(self.ring, self.rank(i - 1), self.rank(i)),
        }
    }

    pub fn boundaries(&self) -> &[ModuleMap] {
        &self.boundaries
    }

    pub fn is_free(&self) -> bool {
        self.terms.iter().all(FpModule::is_presented_free)
    }

    pub fn require_free(&self) -> Result<()> {
        match self.degrees().find(|&i| !self.terms[(i - self.lo) as usize].is_presented_free()) {
            Some(i) => Err(Error::NonFreeTerm(i)),
            None => Ok(()),
        }
    }

    /// `ker d_i / im d_{i+1}`.
    pub fn homology(&self, i: i64) -> Result<FpModule> {
        let (_, incl) = self.boundary(i).kernel()?;
        let into_kernel = self
            .boundary(i + 1)
            .lift_through(&incl)?
            .ok_or_else(|| Error::Violation(format!("image of d_{} is not inside ker d_{i}", i + 1)))?;
        Ok(into_kernel.cokernel()?.0)
    }

    pub fn is_exact(&self) -> Result<bool> {
        for i in self.degrees() {
            if !self.homology(i)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Homology vanishes in every positive degree.
    pub fn is_acyclic(&self) -> Result<bool> {
        for i in self.degrees().filter(|&i| i > 0) {
            if !self.homology(i)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Base change to `κ(q)`, termwise and boundarywise.
    pub fn fiber_complex(&self, q: Prime) -> Result<BoundedComplex> {
        let kappa = self.ring.residue_field(q)?.field;
        let terms = self
            .terms
            .iter()
            .map(|t| FpModule::new(kappa, t.generators(), t.relations().reduce(q)?))
            .collect::<Result<Vec<_>>>()?;
        let boundaries = self
            .boundaries
            .iter()
            .enumerate()
            .map(|(k, d)| Ok(ModuleMap::new_unchecked(terms[k + 1].clone(), terms[k].clone(), d.matrix().reduce(q)?)))
            .collect::<Result<Vec<_>>>()?;
        BoundedComplex::new(kappa, self.lo, terms, boundaries)
    }

    /// Fiber homology dimensions by ranks of reduced matrices:
    /// `dim H_i = dim V_i − rank d_i − rank d_{i+1}` with `V_i = κ ⊗ C_i`.
    pub fn fiber_profile(&self, q: Prime) -> Result<FiberProfile> {
        self.ring.check_prime(q)?;
        let rel_rank: Vec<usize> =
            self.terms.iter().map(|t| field::rank_over_fiber(t.relations(), q)).collect::<Result<_>>()?;
        let map_rank = |k: usize| -> Result<usize> {
            // rank of d: V_{k+1} -> V_k
            let d = &self.boundaries[k];
            if rel_rank[k] == 0 {
                return field::rank_over_fiber(d.matrix(), q);
            }
            let both = d.matrix().hconcat(self.terms[k].relations())?;
            Ok(field::rank_over_fiber(&both, q)? - rel_rank[k])
        };
        let ranks: Vec<usize> = (0..self.boundaries.len()).map(map_rank).collect::<Result<_>>()?;
        let mut dims = BTreeMap::new();
        for k in 0..self.terms.len() {
            let v = self.terms[k].generators() - rel_rank[k];
            let out = if k > 0 { ranks[k - 1] } else { 0 };
            let inc = ranks.get(k).copied().unwrap_or(0);
            dims.insert(self.lo + k as i64, v - out - inc);
        }
        Ok(FiberProfile { prime: q, dims })
    }

    /// `Σ (−1)^i rank C_i` for free complexes.
    pub fn euler_characteristic(&self) -> i64 {
        self.degrees().map(|i| if i.rem_euclid(2) == 0 { 1 } else { -1 } * self.rank(i) as i64).sum()
    }

    /// `C[k]_i = C_{i−k}` with boundaries scaled by `(−1)^k`.
    pub fn shift(&self, k: i64) -> BoundedComplex {
        let s = sign(k.rem_euclid(2) == 1);
        let boundaries = self
            .boundaries
            .iter()
            .map(|d| ModuleMap::new_unchecked(d.source().clone(), d.target().clone(), d.matrix().scale(&s)))
            .collect();
        BoundedComplex::new_unchecked(self.ring, self.lo + k, self.terms.clone(), boundaries)
    }

    /// `τ_{≥i}`: `⋯ -> C_{i+1} -> ker d_i -> 0`.
    pub fn truncate_geq(&self, i: i64) -> Result<BoundedComplex> {
        if i <= self.lo {
            return Ok(self.clone());
        }
        if i > self.hi() {
            return Ok(BoundedComplex::zero(self.ring, i));
        }
        let (ker, incl) = self.boundary(i).kernel()?;
        let k = (i - self.lo) as usize;
        let mut terms = vec![ker.clone()];
        terms.extend(self.terms[k + 1..].iter().cloned());
        let mut boundaries = Vec::new();
        if i < self.hi() {
            let lifted = self
                .boundary(i + 1)
                .lift_through(&incl)?
                .ok_or_else(|| Error::Violation(format!("image of d_{} is not inside ker d_{i}", i + 1)))?;
            boundaries.push(lifted);
            boundaries.extend(self.boundaries[k + 1..].iter().cloned());
        }
        BoundedComplex::new(self.ring, i, terms, boundaries)
    }

    /// `M ⊗ C` with boundaries `id_M ⊗ d`.
    pub fn tensor_with_module(&self, m: &FpModule) -> Result<BoundedComplex> {
        if m.ring() != self.ring {
            return Err(Error::RingMismatch(m.ring().to_string(), self.ring.to_string()));
        }
        let terms = self.terms.iter().map(|t| tensor_modules(m, t)).collect::<Result<Vec<_>>>()?;
        let id = ExactMatrix::identity(self.ring, m.generators());
        let boundaries = self
            .boundaries
            .iter()
            .enumerate()
            .map(|(k, d)| Ok(ModuleMap::new_unchecked(terms[k + 1].clone(), terms[k].clone(), id.kron(d.matrix())?)))
            .collect::<Result<Vec<_>>>()?;
        BoundedComplex::new(self.ring, self.lo, terms, boundaries)
    }

    /// Total complex of `G ⊗ C`: degree `n` is `⊕_{p+q=n} G_p ⊗ C_q`
    /// ordered by increasing `p`, with `d = d_G ⊗ 1 + (−1)^p 1 ⊗ d_C`.
    pub fn total_tensor(g: &BoundedComplex, c: &BoundedComplex) -> Result<BoundedComplex> {
        if g.ring != c.ring {
            return Err(Error::RingMismatch(g.ring.to_string(), c.ring.to_string()));
        }
        let ring = g.ring;
        let (lo, hi) = (g.lo + c.lo, g.hi() + c.hi());
        // Per degree: list of (p, offset) for summands G_p ⊗ C_{n−p}.
        let mut layout: Vec<Vec<(i64, usize)>> = Vec::new();
        let mut terms = Vec::new();
        for n in lo..=hi {
            let mut offset = 0;
            let mut parts = Vec::new();
            let mut module = FpModule::zero(ring);
            for p in g.degrees() {
                let q = n - p;
                if q < c.lo || q > c.hi() {
                    continue;
                }
                let piece = tensor_modules(&g.term(p), &c.term(q))?;
                parts.push((p, offset));
                offset += piece.generators();
                module = module.direct_sum(&piece)?;
            }
            layout.push(parts);
            terms.push(module);
        }
        let mut boundaries = Vec::new();
        for n in lo + 1..=hi {
            let k = (n - lo) as usize;
            let mut m = ExactMatrix::zero(ring, terms[k - 1].generators(), terms[k].generators());
            let offset_of = |p: i64| layout[k - 1].iter().find(|(pp, _)| *pp == p).map(|&(_, o)| o);
            for &(p, col) in &layout[k] {
                let q = n - p;
                if let Some(row) = offset_of(p - 1) {
                    let block = g.boundary_matrix(p).kron(&ExactMatrix::identity(ring, c.rank(q)))?;
                    m.paste(row, col, &block);
                }
                if let Some(row) = offset_of(p) {
                    let block = ExactMatrix::identity(ring, g.rank(p))
                        .kron(&c.boundary_matrix(q))?
                        .scale(&sign(p.rem_euclid(2) == 1));
                    m.paste(row, col, &block);
                }
            }
            boundaries.push(ModuleMap::new_unchecked(terms[k].clone(), terms[k - 1].clone(), m));
        }
        BoundedComplex::new(ring, lo, terms, boundaries)
    }

    /// `Hom(C, R)` re-indexed homologically: `C*_i = (C_{−i})*`, `d*_i = d_{1−i}ᵀ`.
    pub fn dual(&self) -> Result<BoundedComplex> {
        self.require_free()?;
        let ranks: Vec<usize> = self.degrees().rev().map(|i| self.rank(i)).collect();
        let lo = -self.hi();
        let mats = (lo + 1..=-self.lo).map(|i| self.boundary_matrix(1 - i).transpose()).collect();
        BoundedComplex::from_free(self.ring, lo, &ranks, mats)
    }
}

/// A chain map `f: A -> B`, one component `f_i: A_i -> B_i` per degree of `A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMap {
    source: BoundedComplex,
    target: BoundedComplex,
    components: Vec<ExactMatrix>,
}

impl ChainMap {
    /// `components[k]` is `f_{source.lo + k}`. Validates each component and
    /// `f_{i−1} d_i = d_i f_i` in `B_{i−1}`.
    pub fn new(source: BoundedComplex, target: BoundedComplex, components: Vec<ExactMatrix>) -> Result<Self> {
        if source.ring != target.ring {
            return Err(Error::RingMismatch(source.ring.to_string(), target.ring.to_string()));
        }
        if components.len() != source.terms.len() {
            return Err(Error::InvalidMap(format!("chain map needs {} components", source.terms.len())));
        }
        for (k, f) in components.iter().enumerate() {
            let i = source.lo + k as i64;
            ModuleMap::new(source.term(i), target.term(i), f.clone())?;
        }
        let f = ChainMap { source, target, components };
        for i in f.source.degrees() {
            let left = f.component(i - 1).mul(&f.source.boundary_matrix(i))?;
            let right = f.target.boundary_matrix(i).mul(&f.component(i))?;
            if !f.target.term(i - 1).vanishes(&left.sub(&right)?)? {
                return Err(Error::InvalidMap(format!("chain map does not commute with d_{i}")));
            }
        }
        Ok(f)
    }

    pub fn identity(c: &BoundedComplex) -> Self {
        let components = c.terms.iter().map(|t| ExactMatrix::identity(c.ring, t.generators())).collect();
        ChainMap { source: c.clone(), target: c.clone(), components }
    }

    pub fn source(&self) -> &BoundedComplex {
        &self.source
    }

    pub fn target(&self) -> &BoundedComplex {
        &self.target
    }

    /// `f_i`, zero outside the source range.
    pub fn component(&self, i: i64) -> ExactMatrix {
        match self.source.index(i) {
            Some(k) => self.components[k].clone(),
            None => ExactMatrix::zero(self.source.ring, self.target.rank(i), self.source.rank(i)),
        }
    }

    pub fn component_map(&self, i: i64) -> ModuleMap {
        ModuleMap::new_unchecked(self.source.term(i), self.target.term(i), self.component(i))
    }

    /// Every component is an isomorphism of modules.
    pub fn is_isomorphism(&self) -> Result<bool> {
        let lo = self.source.lo.min(self.target.lo);
        let hi = self.source.hi().max(self.target.hi());
        for i in lo..=hi {
            let f = self.component_map(i);
            if !f.is_injective()? || !f.is_surjective()? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `Cone(f)_n = A_{n−1} ⊕ B_n`, `d(a, b) = (−d a, f a + d b)`.
    pub fn cone(&self) -> Result<BoundedComplex> {
        let (a, b) = (&self.source, &self.target);
        let ring = a.ring;
        let lo = (a.lo + 1).min(b.lo);
        let hi = (a.hi() + 1).max(b.hi());
        let terms = (lo..=hi).map(|n| a.term(n - 1).direct_sum(&b.term(n))).collect::<Result<Vec<_>>>()?;
        let mut boundaries = Vec::new();
        for n in lo + 1..=hi {
            let (ga, gb) = (a.rank(n - 1), b.rank(n));
            let (ta, tb) = (a.rank(n - 2), b.rank(n - 1));
            let mut m = ExactMatrix::zero(ring, ta + tb, ga + gb);
            m.paste(0, 0, &a.boundary_matrix(n - 1).neg());
            m.paste(ta, 0, &self.component(n - 1));
            m.paste(ta, ga, &b.boundary_matrix(n));
            let k = (n - lo) as usize;
            boundaries.push(ModuleMap::new_unchecked(terms[k].clone(), terms[k - 1].clone(), m));
        }
        BoundedComplex::new(ring, lo, terms, boundaries)
    }
}
