//! Seeded generators for complexes, modules and matrices over `Z`.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complex::BoundedComplex;
use crate::error::Result;
use crate::matrix::ExactMatrix;
use crate::module::FpModule;
use crate::ring::BaseRing;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Which building blocks a random complex may contain.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Population {
    /// Only `R --1--> R` pieces: split exact.
    SplitExact,
    /// Split pieces plus free summands in degree 0: fiberwise acyclic.
    Acyclic,
    /// At least one torsion piece `R --a--> R` or stray free summand.
    WithHomology,
}

#[derive(Clone, Copy, Debug)]
pub struct ComplexShape {
    /// Highest degree; terms live in `0..=top`.
    pub top: usize,
    pub max_rank: usize,
    pub max_entry: i64,
}

impl Default for ComplexShape {
    fn default() -> Self {
        ComplexShape { top: 4, max_rank: 5, max_entry: 8 }
    }
}

#[derive(Clone, Copy, Debug)]
enum Piece {
    /// `R --a--> R` from degree `i + 1` to `i`.
    Arrow { i: usize, a: i64 },
    /// `R` alone in degree `i`.
    Point { i: usize },
}

/// Random unimodular `n × n` matrix with its inverse, built from
/// elementary operations.
pub fn unimodular(rng: &mut ChaCha8Rng, n: usize, ops: usize) -> (Vec<Vec<i64>>, Vec<Vec<i64>>) {
    let mut u: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    let mut inv = u.clone();
    if n < 2 {
        if n == 1 && rng.gen_bool(0.5) {
            u[0][0] = -1;
            inv[0][0] = -1;
        }
        return (u, inv);
    }
    for _ in 0..ops {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let c: i64 = *[-2, -1, 1, 2].choose(rng).expect("nonempty");
        // u <- E u with E = I + c e_ij; inv <- inv E^{-1}.
        let src = u[j].clone();
        for (x, y) in u[i].iter_mut().zip(&src) {
            *x += c * y;
        }
        for row in inv.iter_mut() {
            row[j] -= c * row[i];
        }
    }
    (u, inv)
}

fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>], inner: usize, cols: usize) -> Vec<Vec<i64>> {
    a.iter().map(|row| (0..cols).map(|j| (0..inner).map(|k| row[k] * b[k][j]).sum()).collect()).collect()
}

fn pieces(rng: &mut ChaCha8Rng, pop: Population, shape: ComplexShape) -> (Vec<Piece>, Vec<usize>) {
    let top = shape.top;
    loop {
        let mut ranks = vec![0usize; top + 1];
        let mut out = Vec::new();
        let count = rng.gen_range(1..=2 * (top + 1));
        for _ in 0..count {
            let piece = match pop {
                Population::SplitExact => Piece::Arrow { i: rng.gen_range(0..top.max(1)), a: 1 },
                Population::Acyclic => {
                    if rng.gen_bool(0.25) {
                        Piece::Point { i: 0 }
                    } else {
                        Piece::Arrow { i: rng.gen_range(0..top.max(1)), a: 1 }
                    }
                }
                Population::WithHomology => match rng.gen_range(0..3) {
                    0 => Piece::Arrow { i: rng.gen_range(0..top.max(1)), a: 1 },
                    1 => Piece::Arrow { i: rng.gen_range(0..top.max(1)), a: rng.gen_range(2..=shape.max_entry.max(2)) },
                    _ => Piece::Point { i: rng.gen_range(0..=top) },
                },
            };
            let (lo, hi) = match piece {
                Piece::Arrow { i, .. } => (i, i + 1),
                Piece::Point { i } => (i, i),
            };
            if hi > top || (lo..=hi).any(|d| ranks[d] >= shape.max_rank) {
                continue;
            }
            for r in ranks.iter_mut().take(hi + 1).skip(lo) {
                *r += 1;
            }
            out.push(piece);
        }
        let nontrivial = out.iter().any(|p| match p {
            Piece::Arrow { a, .. } => *a != 1,
            Piece::Point { i } => *i > 0,
        });
        let ok = match pop {
            Population::WithHomology => nontrivial,
            _ => top == 0 || out.iter().any(|p| matches!(p, Piece::Arrow { .. })),
        };
        if ok && !out.is_empty() {
            return (out, ranks);
        }
    }
}

/// A random bounded complex of free modules over `R` in degrees `0..=top`,
/// built as a direct sum of one- and two-term pieces and then twisted by
/// random unimodular base changes (retried until entries stay within the
/// bound, falling back to the untwisted complex).
pub fn random_complex(ring: BaseRing, seed: u64, pop: Population, shape: ComplexShape) -> Result<BoundedComplex> {
    let mut rng = rng(seed);
    let (pieces, ranks) = pieces(&mut rng, pop, shape);
    let top = shape.top;
    // Block-diagonal boundaries, pieces laid out in order within each degree.
    let mut offset = vec![0usize; top + 1];
    let mut d: Vec<Vec<Vec<i64>>> = (1..=top).map(|i| vec![vec![0; ranks[i]]; ranks[i - 1]]).collect();
    for p in &pieces {
        match *p {
            Piece::Arrow { i, a } => {
                d[i][offset[i]][offset[i + 1]] = a;
                offset[i] += 1;
                offset[i + 1] += 1;
            }
            Piece::Point { i } => offset[i] += 1,
        }
    }
    let mut twisted = d.clone();
    for attempt in 0..24 {
        let ops = 6usize.saturating_sub(attempt / 4);
        let bases: Vec<_> = ranks.iter().map(|&r| unimodular(&mut rng, r, ops)).collect();
        let candidate: Vec<Vec<Vec<i64>>> = (1..=top)
            .map(|i| {
                let left = mat_mul(&bases[i - 1].0, &d[i - 1], ranks[i - 1], ranks[i]);
                mat_mul(&left, &bases[i].1, ranks[i], ranks[i])
            })
            .collect();
        if candidate.iter().flatten().flatten().all(|x| x.abs() <= shape.max_entry) {
            twisted = candidate;
            break;
        }
    }
    BoundedComplex::from_free_i64(ring, 0, &ranks, &twisted)
}

/// Random `rows × cols` integer matrix with entries in `[-bound, bound]`.
pub fn random_matrix(rng: &mut ChaCha8Rng, ring: BaseRing, rows: usize, cols: usize, bound: i64) -> ExactMatrix {
    let entries: Vec<i64> = (0..rows * cols).map(|_| rng.gen_range(-bound..=bound)).collect();
    ExactMatrix::from_i64(ring, rows, cols, &entries).expect("integer entries lie in every supported ring")
}

/// Random module with up to `max_gens` generators and relations.
pub fn random_module(rng: &mut ChaCha8Rng, ring: BaseRing, max_gens: usize, bound: i64) -> FpModule {
    let g = rng.gen_range(0..=max_gens);
    let r = rng.gen_range(0..=max_gens);
    FpModule::new(ring, g, random_matrix(rng, ring, g, r, bound)).expect("shapes match")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homotopy::null_homotopy;

    const Z: BaseRing = BaseRing::INTEGERS;

    #[test]
    fn unimodular_inverse() {
        let mut r = rng(7);
        for n in 0..5 {
            let (u, inv) = unimodular(&mut r, n, 8);
            let p = mat_mul(&u, &inv, n, n);
            for (i, row) in p.iter().enumerate() {
                for (j, &x) in row.iter().enumerate() {
                    assert_eq!(x, i64::from(i == j));
                }
            }
        }
    }

    #[test]
    fn populations_behave() {
        let shape = ComplexShape::default();
        for seed in 0..20 {
            let c = random_complex(Z, seed, Population::SplitExact, shape).unwrap();
            assert!(c.ranks().iter().all(|&r| r <= 5));
            assert!(null_homotopy(&c).unwrap().is_some());
            let c = random_complex(Z, seed, Population::WithHomology, shape).unwrap();
            assert!(!c.is_exact().unwrap());
            let c = random_complex(Z, seed, Population::Acyclic, shape).unwrap();
            assert!(c.is_acyclic().unwrap());
        }
        let a = random_complex(Z, 3, Population::WithHomology, shape).unwrap();
        assert_eq!(a, random_complex(Z, 3, Population::WithHomology, shape).unwrap());
    }
}
