//! Determinantal divisors: gcds of all k×k minors, computed by brute-force
//! enumeration with fraction-free (Bareiss) determinants.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::matrix::ExactMatrix;
use crate::ring::{BaseRing, RingElement, RingKind};

fn bareiss_small(mut m: Vec<i128>, n: usize) -> Option<i128> {
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k * n + k] == 0 {
            let Some(swap) = (k + 1..n).find(|&i| m[i * n + k] != 0) else {
                return Some(0);
            };
            for c in 0..n {
                m.swap(k * n + c, swap * n + c);
            }
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = m[i * n + j]
                    .checked_mul(m[k * n + k])?
                    .checked_sub(m[i * n + k].checked_mul(m[k * n + j])?)?;
                m[i * n + j] = v / prev;
            }
        }
        prev = m[k * n + k];
    }
    Some(if n == 0 { 1 } else { sign * m[(n - 1) * n + n - 1] })
}

fn bareiss_big(mut m: Vec<BigInt>, n: usize) -> BigInt {
    let mut negate = false;
    let mut prev = BigInt::from(1);
    for k in 0..n {
        if m[k * n + k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !m[i * n + k].is_zero()) else {
                return BigInt::zero();
            };
            for c in 0..n {
                m.swap(k * n + c, swap * n + c);
            }
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i * n + j] * &m[k * n + k] - &m[i * n + k] * &m[k * n + j];
                m[i * n + j] = v / &prev;
            }
        }
        prev = m[k * n + k].clone();
    }
    if n == 0 {
        return BigInt::from(1);
    }
    let d = m[n * n - 1].clone();
    if negate { -d } else { d }
}

/// Determinant of a square integer matrix given row-major.
pub(crate) fn integer_det(entries: &[BigInt], n: usize) -> BigInt {
    if let Some(small) = entries.iter().map(|x| x.to_i128()).collect::<Option<Vec<_>>>() {
        if let Some(d) = bareiss_small(small, n) {
            return BigInt::from(d);
        }
    }
    bareiss_big(entries.to_vec(), n)
}

/// Determinant of a square matrix over `Z`, `Z_(p)` or `Q`.
pub fn determinant(a: &ExactMatrix) -> Result<BigRational> {
    if a.rows() != a.cols() {
        return Err(Error::Shape("determinant of a non-square matrix".into()));
    }
    let n = a.rows();
    let lcm = a.entries().iter().fold(BigInt::from(1), |acc, x| acc.lcm(x.denom()));
    let scaled: Vec<BigInt> = a.entries().iter().map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer()).collect();
    let d = integer_det(&scaled, n);
    let value = BigRational::new(d, lcm.pow(n as u32));
    Ok(a.ring().canon(value))
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

/// The k-th entry is the canonical gcd of all k×k minors, k = 1..=min(rows, cols).
pub fn determinantal_divisors(a: &ExactMatrix) -> Result<Vec<RingElement>> {
    let ring = a.ring();
    if !matches!(ring.kind(), RingKind::Integers | RingKind::LocalizedIntegers(_)) {
        return Err(Error::UnsupportedRing { op: "determinantal_divisors", ring: ring.to_string() });
    }
    let (m, n) = a.shape();
    let mut out = Vec::new();
    for k in 1..=m.min(n) {
        let row_sets = combinations(m, k);
        let col_sets = combinations(n, k);
        let mut acc = BigRational::zero();
        for rs in &row_sets {
            let sub_rows = a.select_rows(rs);
            for cs in &col_sets {
                let minor = determinant(&sub_rows.select_columns(cs))?;
                acc = gcd_in(ring, &acc, &minor);
            }
        }
        out.push(RingElement { ring, value: ring.normalize(&acc).0 });
    }
    Ok(out)
}

fn gcd_in(ring: BaseRing, a: &BigRational, b: &BigRational) -> BigRational {
    if a.is_zero() {
        return ring.normalize(b).0;
    }
    if b.is_zero() {
        return ring.normalize(a).0;
    }
    match ring.kind() {
        RingKind::LocalizedIntegers(_) => {
            let (va, vb) = (ring.valuation(a).unwrap(), ring.valuation(b).unwrap());
            ring.normalize(if va <= vb { a } else { b }).0
        }
        _ => BigRational::from_integer(a.numer().gcd(b.numer())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(rows: usize, cols: usize, e: &[i64]) -> ExactMatrix {
        ExactMatrix::from_i64(BaseRing::INTEGERS, rows, cols, e).unwrap()
    }

    fn show(v: &[RingElement]) -> Vec<String> {
        v.iter().map(|x| x.to_string()).collect()
    }

    #[test]
    fn examples() {
        assert_eq!(show(&determinantal_divisors(&z(2, 2, &[2, 0, 0, 3])).unwrap()), ["1", "6"]);
        assert_eq!(show(&determinantal_divisors(&ExactMatrix::identity(BaseRing::INTEGERS, 3)).unwrap()), ["1", "1", "1"]);
        assert_eq!(show(&determinantal_divisors(&z(2, 2, &[0; 4])).unwrap()), ["0", "0"]);
        assert!(determinantal_divisors(&ExactMatrix::identity(BaseRing::RATIONALS, 2)).is_err());
    }

    #[test]
    fn determinants() {
        assert_eq!(determinant(&z(3, 3, &[2, 0, 1, 1, 3, 2, 1, 1, 2])).unwrap(), BigRational::from_integer(6.into()));
        assert_eq!(determinant(&z(2, 2, &[0, 1, 1, 0])).unwrap(), BigRational::from_integer((-1).into()));
        assert_eq!(determinant(&z(2, 2, &[1, 2, 2, 4])).unwrap(), BigRational::zero());
        assert_eq!(determinant(&z(0, 0, &[])).unwrap(), BigRational::from_integer(1.into()));
    }
}
