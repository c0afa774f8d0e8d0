use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::ring::{BaseRing, Prime, RingElement};

/// A dense row-major matrix over a [`BaseRing`], in exact arithmetic.
///
/// Zero-sized matrices are legal and behave as zero maps.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExactMatrix {
    ring: BaseRing,
    rows: usize,
    cols: usize,
    entries: Vec<BigRational>,
}

impl ExactMatrix {
    /// Build from row-major entries, coercing each into the ring.
    pub fn new(ring: BaseRing, rows: usize, cols: usize, entries: Vec<BigRational>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        let entries = entries.iter().map(|x| ring.element(x)).collect::<Result<_>>()?;
        Ok(ExactMatrix { ring, rows, cols, entries })
    }

    pub(crate) fn from_canon(ring: BaseRing, rows: usize, cols: usize, entries: Vec<BigRational>) -> Self {
        debug_assert_eq!(entries.len(), rows * cols);
        ExactMatrix { ring, rows, cols, entries }
    }

    pub fn from_i64(ring: BaseRing, rows: usize, cols: usize, entries: &[i64]) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Shape(format!("{} entries for a {rows}x{cols} matrix", entries.len())));
        }
        Ok(Self::from_canon(ring, rows, cols, entries.iter().map(|&x| ring.from_int(x)).collect()))
    }

    /// Build from a list of rows. All rows must have length `cols`.
    pub fn from_rows(ring: BaseRing, cols: usize, rows: &[Vec<i64>]) -> Result<Self> {
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Shape("ragged rows".into()));
        }
        let flat: Vec<i64> = rows.iter().flatten().copied().collect();
        Self::from_i64(ring, rows.len(), cols, &flat)
    }

    pub fn zero(ring: BaseRing, rows: usize, cols: usize) -> Self {
        Self::from_canon(ring, rows, cols, vec![BigRational::zero(); rows * cols])
    }

    pub fn identity(ring: BaseRing, n: usize) -> Self {
        let mut m = Self::zero(ring, n, n);
        for i in 0..n {
            m.entries[i * n + i] = BigRational::one();
        }
        m
    }

    /// `rows x cols` matrix with `diag` on the main diagonal.
    pub fn diagonal(ring: BaseRing, rows: usize, cols: usize, diag: &[BigRational]) -> Self {
        let mut m = Self::zero(ring, rows, cols);
        for (i, d) in diag.iter().enumerate().take(rows.min(cols)) {
            m.entries[i * cols + i] = ring.canon(d.clone());
        }
        m
    }

    pub fn ring(&self) -> BaseRing {
        self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn entries(&self) -> &[BigRational] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.entries[i * self.cols + j]
    }

    pub fn element(&self, i: usize, j: usize) -> RingElement {
        RingElement { ring: self.ring, value: self.get(i, j).clone() }
    }

    pub fn set(&mut self, i: usize, j: usize, x: BigRational) {
        self.entries[i * self.cols + j] = self.ring.canon(x);
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = self.get(i, j);
                    if i == j { x.is_one() } else { x.is_zero() }
                })
            })
    }

    pub fn row(&self, i: usize) -> &[BigRational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigRational> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    /// Entries as nested rows, for rendering.
    pub fn to_rows(&self) -> Vec<Vec<BigRational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    fn same_ring(&self, other: &Self) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch(self.ring.to_string(), other.ring.to_string()));
        }
        Ok(())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        let (m, k, n) = (self.rows, self.cols, other.cols);
        let mut out = vec![BigRational::zero(); m * n];
        for i in 0..m {
            for l in 0..k {
                let a = &self.entries[i * k + l];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &other.entries[l * n + j];
                    if !b.is_zero() {
                        out[i * n + j] += a * b;
                    }
                }
            }
        }
        let ring = self.ring;
        Self::from_canon(ring, m, n, out.into_iter().map(|x| ring.canon(x)).collect())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        if self.shape() != other.shape() {
            return Err(Error::Shape("cannot add matrices of different shapes".into()));
        }
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| self.ring.add(a, b)).collect();
        Ok(Self::from_canon(self.ring, self.rows, self.cols, entries))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&self.ring.neg(&BigRational::one()))
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let entries = self.entries.iter().map(|a| self.ring.mul(a, c)).collect();
        Self::from_canon(self.ring, self.rows, self.cols, entries)
    }

    pub fn transpose(&self) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.get(i, j).clone());
            }
        }
        Self::from_canon(self.ring, self.cols, self.rows, entries)
    }

    /// `[self | other]`.
    pub fn hconcat(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        if self.rows != other.rows {
            return Err(Error::Shape("hconcat needs equal row counts".into()));
        }
        let cols = self.cols + other.cols;
        let mut entries = Vec::with_capacity(self.rows * cols);
        for i in 0..self.rows {
            entries.extend_from_slice(self.row(i));
            entries.extend_from_slice(other.row(i));
        }
        Ok(Self::from_canon(self.ring, self.rows, cols, entries))
    }

    /// `[self ; other]`.
    pub fn vconcat(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        if self.cols != other.cols {
            return Err(Error::Shape("vconcat needs equal column counts".into()));
        }
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        Ok(Self::from_canon(self.ring, self.rows + other.rows, self.cols, entries))
    }

    pub fn block_diag(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        let mut m = Self::zero(self.ring, self.rows + other.rows, self.cols + other.cols);
        m.paste(0, 0, self);
        m.paste(self.rows, self.cols, other);
        Ok(m)
    }

    /// Overwrite the block starting at `(r0, c0)` with `block`.
    pub(crate) fn paste(&mut self, r0: usize, c0: usize, block: &Self) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.entries[(r0 + i) * self.cols + c0 + j] = block.get(i, j).clone();
            }
        }
    }

    /// Kronecker product `self ⊗ other`; index `(i, k)` maps to `i * other.rows + k`.
    pub fn kron(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        let (r, c) = (self.rows * other.rows, self.cols * other.cols);
        let mut entries = vec![BigRational::zero(); r * c];
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        entries[(i * other.rows + k) * c + j * other.cols + l] =
                            self.ring.mul(a, other.get(k, l));
                    }
                }
            }
        }
        Ok(Self::from_canon(self.ring, r, c, entries))
    }

    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let mut entries = Vec::with_capacity(self.rows * cols.len());
        for i in 0..self.rows {
            for &j in cols {
                entries.push(self.get(i, j).clone());
            }
        }
        Self::from_canon(self.ring, self.rows, cols.len(), entries)
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        let mut entries = Vec::with_capacity(rows.len() * self.cols);
        for &i in rows {
            entries.extend_from_slice(self.row(i));
        }
        Self::from_canon(self.ring, rows.len(), self.cols, entries)
    }

    /// Reinterpret integer-valued entries in another ring (e.g. lift `Z/n -> Z`
    /// or push `Z -> Z/n`).
    pub(crate) fn change_ring(&self, ring: BaseRing) -> Result<Self> {
        Self::new(ring, self.rows, self.cols, self.entries.clone())
    }

    /// Entrywise image in the residue field `κ(q)`.
    pub fn reduce(&self, q: Prime) -> Result<Self> {
        let k = self.ring.residue_field(q)?;
        let entries = self.entries.iter().map(|x| k.reduce(x)).collect();
        Ok(Self::from_canon(k.field, self.rows, self.cols, entries))
    }
}

/// `reduce_matrix`: entrywise image of `a` in `κ(q)`.
pub fn reduce_matrix(a: &ExactMatrix, q: Prime) -> Result<ExactMatrix> {
    a.reduce(q)
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, x) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}
