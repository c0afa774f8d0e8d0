//! Null-homotopy certificates for bounded complexes of free modules.

use crate::complex::BoundedComplex;
use crate::error::{Error, Result};
use crate::linalg::solve_integral;
use crate::matrix::ExactMatrix;

/// Maps `h_i: C_i -> C_{i+1}` with `d_{i+1} h_i + h_{i−1} d_i = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomotopyCertificate {
    pub lo: i64,
    /// `maps[k]` is `h_{lo+k}`.
    pub maps: Vec<ExactMatrix>,
}

impl HomotopyCertificate {
    pub fn h(&self, c: &BoundedComplex, i: i64) -> ExactMatrix {
        let k = i - self.lo;
        if k >= 0 && (k as usize) < self.maps.len() {
            self.maps[k as usize].clone()
        } else {
            ExactMatrix::zero(c.ring(), c.rank(i + 1), c.rank(i))
        }
    }

    /// Exact check of the homotopy identity in every degree.
    pub fn verify(&self, c: &BoundedComplex) -> Result<()> {
        for i in c.degrees() {
            let lhs = c.boundary_matrix(i + 1).mul(&self.h(c, i))?.add(&self.h(c, i - 1).mul(&c.boundary_matrix(i))?)?;
            if !lhs.is_identity() {
                return Err(Error::Violation(format!("homotopy identity fails in degree {i}")));
            }
        }
        Ok(())
    }
}

/// Solve `d_{i+1} h_i = 1 − h_{i−1} d_i` from the bottom degree up; if a
/// stage has no solution, fall back to the combined system for all `h_i`.
pub fn null_homotopy(c: &BoundedComplex) -> Result<Option<HomotopyCertificate>> {
    c.require_free()?;
    if let Some(cert) = stagewise(c)? {
        return Ok(Some(cert));
    }
    global(c)
}

fn stagewise(c: &BoundedComplex) -> Result<Option<HomotopyCertificate>> {
    let ring = c.ring();
    let mut maps: Vec<ExactMatrix> = Vec::new();
    let mut prev = ExactMatrix::zero(ring, c.rank(c.lo()), c.rank(c.lo() - 1));
    for i in c.degrees() {
        let rhs = ExactMatrix::identity(ring, c.rank(i)).sub(&prev.mul(&c.boundary_matrix(i))?)?;
        let Some(h) = solve_integral(&c.boundary_matrix(i + 1), &rhs)? else { return Ok(None) };
        prev = h.clone();
        maps.push(h);
    }
    let cert = HomotopyCertificate { lo: c.lo(), maps };
    cert.verify(c)?;
    Ok(Some(cert))
}

/// Column-major `vec`: `vec(A X B) = (Bᵀ ⊗ A) vec(X)`.
fn global(c: &BoundedComplex) -> Result<Option<HomotopyCertificate>> {
    let ring = c.ring();
    let degrees: Vec<i64> = c.degrees().collect();
    let mut offsets = Vec::with_capacity(degrees.len());
    let mut unknowns = 0;
    for &i in &degrees {
        offsets.push(unknowns);
        unknowns += c.rank(i + 1) * c.rank(i);
    }
    let equations: usize = degrees.iter().map(|&i| c.rank(i) * c.rank(i)).sum();
    let mut system = ExactMatrix::zero(ring, equations, unknowns);
    let mut rhs = ExactMatrix::zero(ring, equations, 1);
    let mut row = 0;
    for (k, &i) in degrees.iter().enumerate() {
        let r = c.rank(i);
        let id = ExactMatrix::identity(ring, r);
        system.paste(row, offsets[k], &id.kron(&c.boundary_matrix(i + 1))?);
        if k > 0 {
            system.paste(row, offsets[k - 1], &c.boundary_matrix(i).transpose().kron(&id)?);
        }
        for j in 0..r {
            rhs.set(row + j * r + j, 0, ring.one());
        }
        row += r * r;
    }
    let Some(x) = solve_integral(&system, &rhs)? else { return Ok(None) };
    let maps = degrees
        .iter()
        .enumerate()
        .map(|(k, &i)| {
            let (rows, cols) = (c.rank(i + 1), c.rank(i));
            let mut h = ExactMatrix::zero(ring, rows, cols);
            for col in 0..cols {
                for r in 0..rows {
                    h.set(r, col, x.get(offsets[k] + col * rows + r, 0).clone());
                }
            }
            h
        })
        .collect();
    let cert = HomotopyCertificate { lo: c.lo(), maps };
    cert.verify(c)?;
    Ok(Some(cert))
}
