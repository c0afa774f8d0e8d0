//! Linear systems, kernels and images over the base ring, all read off the
//! Smith decomposition.

use crate::error::{Error, Result};
use crate::matrix::ExactMatrix;

use super::snf::snf;

/// `solve_integral`: some `X` with `A·X = B` over the ring of `A`, or `None`.
pub fn solve_integral(a: &ExactMatrix, b: &ExactMatrix) -> Result<Option<ExactMatrix>> {
    if a.ring() != b.ring() {
        return Err(Error::RingMismatch(a.ring().to_string(), b.ring().to_string()));
    }
    if a.rows() != b.rows() {
        return Err(Error::Shape(format!("A has {} rows but B has {}", a.rows(), b.rows())));
    }
    let ring = a.ring();
    let (m, n) = a.shape();
    let k = b.cols();
    let s = snf(a);
    let c = s.u_inv.mul_unchecked(b);
    let diag = m.min(n);
    let mut y = ExactMatrix::zero(ring, n, k);
    for i in 0..m {
        for j in 0..k {
            let cij = c.get(i, j);
            if i < diag {
                match ring.divide(cij, s.divisor(i)) {
                    Some(x) => y.set(i, j, x),
                    None => return Ok(None),
                }
            } else if !num_traits::Zero::is_zero(cij) {
                return Ok(None);
            }
        }
    }
    Ok(Some(s.v_inv.mul_unchecked(&y)))
}

/// Columns generating `{x : A·x = 0}` as a submodule of `R^cols`.
pub fn kernel_generators(a: &ExactMatrix) -> ExactMatrix {
    let ring = a.ring();
    let (m, n) = a.shape();
    let s = snf(a);
    let diag = m.min(n);
    let mut cols = Vec::new();
    for j in 0..n {
        let ann = if j < diag { ring.annihilator(s.divisor(j)) } else { Some(ring.one()) };
        if let Some(c) = ann {
            cols.push((j, c));
        }
    }
    let mut y = ExactMatrix::zero(ring, n, cols.len());
    for (t, (j, c)) in cols.into_iter().enumerate() {
        y.set(j, t, c);
    }
    s.v_inv.mul_unchecked(&y)
}

/// Columns generating the image of `A`, with no redundant generators:
/// `U[:, i]·d_i` for each nonzero divisor. Over a domain these columns are a
/// free basis.
pub fn image_generators(a: &ExactMatrix) -> ExactMatrix {
    let s = snf(a);
    let r = s.rank();
    let ring = a.ring();
    let mut out = ExactMatrix::zero(ring, a.rows(), r);
    for i in 0..r {
        let d = s.divisor(i);
        for row in 0..a.rows() {
            out.set(row, i, ring.mul(s.u.get(row, i), d));
        }
    }
    out
}

/// Rank over the ring: number of nonzero elementary divisors.
pub fn ring_rank(a: &ExactMatrix) -> usize {
    snf(a).rank()
}
