//! Gaussian elimination over residue fields. Kept separate from the Smith
//! kernel so fiber ranks have an independent code path.

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::matrix::ExactMatrix;
use crate::ring::Prime;

/// Reduced row echelon form of a matrix over a field.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub rref: ExactMatrix,
    pub pivots: Vec<usize>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

fn require_field(a: &ExactMatrix) -> Result<()> {
    if a.ring().is_field() {
        Ok(())
    } else {
        Err(Error::UnsupportedRing { op: "gaussian elimination", ring: a.ring().to_string() })
    }
}

pub fn echelon(a: &ExactMatrix) -> Result<Echelon> {
    require_field(a)?;
    let ring = a.ring();
    let (m, n) = a.shape();
    let mut rows: Vec<Vec<BigRational>> = a.to_rows();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        if r == m {
            break;
        }
        let Some(p) = (r..m).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = ring.inverse(&rows[r][c]).expect("nonzero in a field");
        for x in rows[r].iter_mut() {
            *x = ring.mul(x, &inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                *x = ring.sub(x, &ring.mul(&f, y));
            }
        }
        pivots.push(c);
        r += 1;
    }
    let entries = rows.into_iter().flatten().collect();
    Ok(Echelon { rref: ExactMatrix::from_canon(ring, m, n, entries), pivots })
}

pub fn rank(a: &ExactMatrix) -> Result<usize> {
    Ok(echelon(a)?.rank())
}

/// Basis of the null space, as columns.
pub fn kernel_basis(a: &ExactMatrix) -> Result<ExactMatrix> {
    let e = echelon(a)?;
    let ring = a.ring();
    let n = a.cols();
    let free: Vec<usize> = (0..n).filter(|c| !e.pivots.contains(c)).collect();
    let mut k = ExactMatrix::zero(ring, n, free.len());
    for (t, &f) in free.iter().enumerate() {
        k.set(f, t, ring.one());
        for (r, &p) in e.pivots.iter().enumerate() {
            let x = ring.neg(e.rref.get(r, f));
            k.set(p, t, x);
        }
    }
    Ok(k)
}

/// Basis of the column space, as a subset of the columns of `a`.
pub fn column_basis(a: &ExactMatrix) -> Result<ExactMatrix> {
    let e = echelon(a)?;
    Ok(a.select_columns(&e.pivots))
}

/// `rank_over_fiber`: rank of the image of `a` in `κ(q)`.
pub fn rank_over_fiber(a: &ExactMatrix, q: Prime) -> Result<usize> {
    rank(&a.reduce(q)?)
}
