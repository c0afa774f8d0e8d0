//! Smith normal form with full transform tracking.
//!
//! One pivoting kernel runs over every supported ring. Integer matrices first
//! try checked `i128` arithmetic and fall back to `BigInt` on overflow. `Z/n`
//! is handled by lifting to `Z` and reducing the result.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::matrix::ExactMatrix;
use crate::ring::{BaseRing, RingElement, RingKind};

/// The arithmetic a pivot domain must provide. Every fallible operation
/// returns `None` on overflow, which aborts the run.
pub(crate) trait PivotDomain {
    type E: Clone + PartialEq;
    type Size: Ord;

    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn size(&self, a: &Self::E) -> Self::Size;
    fn neg(&self, a: &Self::E) -> Option<Self::E>;
    /// `a + c * b`
    fn mul_add(&self, a: &Self::E, c: &Self::E, b: &Self::E) -> Option<Self::E>;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Option<Self::E>;
    /// Quotient and remainder with the remainder zero or of smaller size than `b`.
    fn div_rem(&self, a: &Self::E, b: &Self::E) -> Option<(Self::E, Self::E)>;
    /// `(u, u^-1)` with `a * u` the canonical associate of `a`.
    fn normalizer(&self, a: &Self::E) -> Option<(Self::E, Self::E)>;
}

struct SmallIntegers;

impl PivotDomain for SmallIntegers {
    type E = i128;
    type Size = u128;

    fn zero(&self) -> i128 {
        0
    }
    fn one(&self) -> i128 {
        1
    }
    fn is_zero(&self, a: &i128) -> bool {
        *a == 0
    }
    fn size(&self, a: &i128) -> u128 {
        a.unsigned_abs()
    }
    fn neg(&self, a: &i128) -> Option<i128> {
        a.checked_neg()
    }
    fn mul_add(&self, a: &i128, c: &i128, b: &i128) -> Option<i128> {
        a.checked_add(c.checked_mul(*b)?)
    }
    fn mul(&self, a: &i128, b: &i128) -> Option<i128> {
        a.checked_mul(*b)
    }
    fn div_rem(&self, a: &i128, b: &i128) -> Option<(i128, i128)> {
        Some((a.checked_div(*b)?, a.checked_rem(*b)?))
    }
    fn normalizer(&self, a: &i128) -> Option<(i128, i128)> {
        Some(if *a < 0 { (-1, -1) } else { (1, 1) })
    }
}

struct BigIntegers;

impl PivotDomain for BigIntegers {
    type E = BigInt;
    type Size = BigInt;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn size(&self, a: &BigInt) -> BigInt {
        a.abs()
    }
    fn neg(&self, a: &BigInt) -> Option<BigInt> {
        Some(-a)
    }
    fn mul_add(&self, a: &BigInt, c: &BigInt, b: &BigInt) -> Option<BigInt> {
        Some(a + c * b)
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> Option<BigInt> {
        Some(a * b)
    }
    fn div_rem(&self, a: &BigInt, b: &BigInt) -> Option<(BigInt, BigInt)> {
        Some(a.div_rem(b))
    }
    fn normalizer(&self, a: &BigInt) -> Option<(BigInt, BigInt)> {
        Some(if a.is_negative() { (-BigInt::one(), -BigInt::one()) } else { (BigInt::one(), BigInt::one()) })
    }
}

/// `Z_(p)` and fields, through the ring's own rational arithmetic.
struct RingDomain(BaseRing);

impl PivotDomain for RingDomain {
    type E = BigRational;
    type Size = u32;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn size(&self, a: &BigRational) -> u32 {
        self.0.valuation(a).unwrap_or(0)
    }
    fn neg(&self, a: &BigRational) -> Option<BigRational> {
        Some(self.0.neg(a))
    }
    fn mul_add(&self, a: &BigRational, c: &BigRational, b: &BigRational) -> Option<BigRational> {
        Some(self.0.add(a, &self.0.mul(c, b)))
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> Option<BigRational> {
        Some(self.0.mul(a, b))
    }
    fn div_rem(&self, a: &BigRational, b: &BigRational) -> Option<(BigRational, BigRational)> {
        Some(match self.0.divide(a, b) {
            Some(q) => (q, BigRational::zero()),
            None => (BigRational::zero(), a.clone()),
        })
    }
    fn normalizer(&self, a: &BigRational) -> Option<(BigRational, BigRational)> {
        let (_, u) = self.0.normalize(a);
        let ui = self.0.inverse(&u).expect("normalizer is a unit");
        Some((u, ui))
    }
}

#[derive(Clone)]
struct Dense<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: Clone> Dense<E> {
    fn at(&self, i: usize, j: usize) -> &E {
        &self.data[i * self.cols + j]
    }
    fn identity<D: PivotDomain<E = E>>(dom: &D, n: usize) -> Self {
        let mut data = vec![dom.zero(); n * n];
        for i in 0..n {
            data[i * n + i] = dom.one();
        }
        Dense { rows: n, cols: n, data }
    }
    fn swap_rows(&mut self, i: usize, j: usize) {
        if i != j {
            for c in 0..self.cols {
                self.data.swap(i * self.cols + c, j * self.cols + c);
            }
        }
    }
    fn swap_cols(&mut self, i: usize, j: usize) {
        if i != j {
            for r in 0..self.rows {
                self.data.swap(r * self.cols + i, r * self.cols + j);
            }
        }
    }
    /// row `i` += c * row `j`
    fn row_addmul<D: PivotDomain<E = E>>(&mut self, dom: &D, i: usize, j: usize, c: &E) -> Option<()> {
        for k in 0..self.cols {
            let v = dom.mul_add(self.at(i, k), c, self.at(j, k))?;
            self.data[i * self.cols + k] = v;
        }
        Some(())
    }
    /// col `i` += c * col `j`
    fn col_addmul<D: PivotDomain<E = E>>(&mut self, dom: &D, i: usize, j: usize, c: &E) -> Option<()> {
        for k in 0..self.rows {
            let v = dom.mul_add(self.at(k, i), c, self.at(k, j))?;
            self.data[k * self.cols + i] = v;
        }
        Some(())
    }
    fn row_scale<D: PivotDomain<E = E>>(&mut self, dom: &D, i: usize, u: &E) -> Option<()> {
        for k in 0..self.cols {
            self.data[i * self.cols + k] = dom.mul(self.at(i, k), u)?;
        }
        Some(())
    }
    fn col_scale<D: PivotDomain<E = E>>(&mut self, dom: &D, i: usize, u: &E) -> Option<()> {
        for k in 0..self.rows {
            self.data[k * self.cols + i] = dom.mul(self.at(k, i), u)?;
        }
        Some(())
    }
}

/// Working state: `orig = u * a * v`, `a = u_inv * orig * v_inv`.
struct Reduction<'d, D: PivotDomain> {
    dom: &'d D,
    a: Dense<D::E>,
    u: Dense<D::E>,
    u_inv: Dense<D::E>,
    v: Dense<D::E>,
    v_inv: Dense<D::E>,
}

impl<'d, D: PivotDomain> Reduction<'d, D> {
    fn row_addmul(&mut self, i: usize, j: usize, c: &D::E) -> Option<()> {
        let dom = self.dom;
        self.a.row_addmul(dom, i, j, c)?;
        self.u_inv.row_addmul(dom, i, j, c)?;
        self.u.col_addmul(dom, j, i, &dom.neg(c)?)
    }
    fn col_addmul(&mut self, i: usize, j: usize, c: &D::E) -> Option<()> {
        let dom = self.dom;
        self.a.col_addmul(dom, i, j, c)?;
        self.v_inv.col_addmul(dom, i, j, c)?;
        self.v.row_addmul(dom, j, i, &dom.neg(c)?)
    }
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.u_inv.swap_rows(i, j);
        self.u.swap_cols(i, j);
    }
    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.v_inv.swap_cols(i, j);
        self.v.swap_rows(i, j);
    }
    fn scale_row(&mut self, i: usize, u: &D::E, u_inv: &D::E) -> Option<()> {
        let dom = self.dom;
        self.a.row_scale(dom, i, u)?;
        self.u_inv.row_scale(dom, i, u)?;
        self.u.col_scale(dom, i, u_inv)
    }

    /// Smallest nonzero entry of the trailing submatrix, ties to lowest (row, col).
    fn global_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let dom = self.dom;
        let mut best: Option<(D::Size, usize, usize)> = None;
        for i in t..self.a.rows {
            for j in t..self.a.cols {
                let x = self.a.at(i, j);
                if dom.is_zero(x) {
                    continue;
                }
                let s = dom.size(x);
                if best.as_ref().is_none_or(|(b, _, _)| s < *b) {
                    best = Some((s, i, j));
                }
            }
        }
        best.map(|(_, i, j)| (i, j))
    }

    fn run(&mut self) -> Option<()> {
        let dom = self.dom;
        let (m, n) = (self.a.rows, self.a.cols);
        for t in 0..m.min(n) {
            let Some((pi, pj)) = self.global_pivot(t) else { break };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                let mut clean = true;
                for i in t + 1..m {
                    if dom.is_zero(self.a.at(i, t)) {
                        continue;
                    }
                    let (q, r) = dom.div_rem(self.a.at(i, t), self.a.at(t, t))?;
                    self.row_addmul(i, t, &dom.neg(&q)?)?;
                    clean &= dom.is_zero(&r);
                }
                for j in t + 1..n {
                    if dom.is_zero(self.a.at(t, j)) {
                        continue;
                    }
                    let (q, r) = dom.div_rem(self.a.at(t, j), self.a.at(t, t))?;
                    self.col_addmul(j, t, &dom.neg(&q)?)?;
                    clean &= dom.is_zero(&r);
                }
                if !clean {
                    // Bring the smallest leftover remainder into the pivot slot.
                    let mut best: Option<(D::Size, bool, usize)> = None;
                    for i in t + 1..m {
                        let x = self.a.at(i, t);
                        if !dom.is_zero(x) && best.as_ref().is_none_or(|b| dom.size(x) < b.0) {
                            best = Some((dom.size(x), true, i));
                        }
                    }
                    for j in t + 1..n {
                        let x = self.a.at(t, j);
                        if !dom.is_zero(x) && best.as_ref().is_none_or(|b| dom.size(x) < b.0) {
                            best = Some((dom.size(x), false, j));
                        }
                    }
                    match best {
                        Some((_, true, i)) => self.swap_rows(t, i),
                        Some((_, false, j)) => self.swap_cols(t, j),
                        None => {}
                    }
                    continue;
                }
                let mut offender = None;
                'scan: for i in t + 1..m {
                    for j in t + 1..n {
                        let (_, r) = dom.div_rem(self.a.at(i, j), self.a.at(t, t))?;
                        if !dom.is_zero(&r) {
                            offender = Some(i);
                            break 'scan;
                        }
                    }
                }
                match offender {
                    Some(i) => self.row_addmul(t, i, &dom.one())?,
                    None => break,
                }
            }
            let (u, ui) = dom.normalizer(self.a.at(t, t))?;
            self.scale_row(t, &u, &ui)?;
        }
        Some(())
    }
}

fn reduce_dense<D: PivotDomain>(dom: &D, a: Dense<D::E>) -> Option<[Dense<D::E>; 5]> {
    let (m, n) = (a.rows, a.cols);
    let mut r = Reduction {
        dom,
        a,
        u: Dense::identity(dom, m),
        u_inv: Dense::identity(dom, m),
        v: Dense::identity(dom, n),
        v_inv: Dense::identity(dom, n),
    };
    r.run()?;
    Some([r.a, r.u, r.u_inv, r.v, r.v_inv])
}

/// `A = U·D·V` with `U`, `V` invertible and `D` in Smith normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfDecomposition {
    pub u: ExactMatrix,
    pub d: ExactMatrix,
    pub v: ExactMatrix,
    /// Inverse of `u`.
    pub u_inv: ExactMatrix,
    /// Inverse of `v`.
    pub v_inv: ExactMatrix,
    /// The `min(rows, cols)` diagonal entries of `d`, zeros last.
    pub elementary_divisors: Vec<RingElement>,
}

impl SnfDecomposition {
    /// Number of nonzero elementary divisors.
    pub fn rank(&self) -> usize {
        self.elementary_divisors.iter().filter(|d| !d.is_zero()).count()
    }

    pub fn divisor(&self, i: usize) -> &BigRational {
        &self.elementary_divisors[i].value
    }

    /// Re-check every invariant against the source matrix.
    pub fn verify(&self, a: &ExactMatrix) -> Result<()> {
        let ring = a.ring();
        let fail = |what: &str| Err(Error::Violation(format!("snf certificate: {what}")));
        let (m, n) = a.shape();
        if self.u.mul(&self.d)?.mul(&self.v)? != *a {
            return fail("U*D*V != A");
        }
        if !self.u.mul(&self.u_inv)?.is_identity() || !self.u_inv.mul(&self.u)?.is_identity() {
            return fail("U is not invertible");
        }
        if !self.v.mul(&self.v_inv)?.is_identity() || !self.v_inv.mul(&self.v)?.is_identity() {
            return fail("V is not invertible");
        }
        for i in 0..m {
            for j in 0..n {
                if i != j && !self.d.get(i, j).is_zero() {
                    return fail("D is not diagonal");
                }
            }
        }
        let ds = &self.elementary_divisors;
        if ds.len() != m.min(n) {
            return fail("wrong number of divisors");
        }
        for (i, d) in ds.iter().enumerate() {
            if &d.value != self.d.get(i, i) || ring.normalize(&d.value).0 != d.value {
                return fail("divisor is not canonical");
            }
            if i + 1 < ds.len() && !ring.divides(&d.value, &ds[i + 1].value) {
                return fail("divisibility chain broken");
            }
        }
        Ok(())
    }
}

fn to_small(a: &ExactMatrix) -> Option<Dense<i128>> {
    let data = a.entries().iter().map(|x| x.numer().to_i128()).collect::<Option<Vec<_>>>()?;
    Some(Dense { rows: a.rows(), cols: a.cols(), data })
}

fn from_small(ring: BaseRing, d: &Dense<i128>) -> ExactMatrix {
    let data = d.data.iter().map(|&x| ring.from_bigint(BigInt::from(x))).collect();
    ExactMatrix::from_canon(ring, d.rows, d.cols, data)
}

fn from_big(ring: BaseRing, d: &Dense<BigInt>) -> ExactMatrix {
    let data = d.data.iter().map(|x| ring.from_bigint(x.clone())).collect();
    ExactMatrix::from_canon(ring, d.rows, d.cols, data)
}

fn from_rat(ring: BaseRing, d: &Dense<BigRational>) -> ExactMatrix {
    ExactMatrix::from_canon(ring, d.rows, d.cols, d.data.clone())
}

/// Integer SNF, reporting the factors in the ring `out` (entries reduced).
fn integer_snf(a: &ExactMatrix, out: BaseRing) -> [ExactMatrix; 5] {
    if let Some(small) = to_small(a) {
        if let Some(parts) = reduce_dense(&SmallIntegers, small) {
            return parts.map(|p| from_small(out, &p));
        }
    }
    let big = Dense {
        rows: a.rows(),
        cols: a.cols(),
        data: a.entries().iter().map(|x| x.numer().clone()).collect(),
    };
    let parts = reduce_dense(&BigIntegers, big).expect("bigint arithmetic cannot overflow");
    parts.map(|p| from_big(out, &p))
}

/// Smith normal form of `a` over its ring.
pub fn snf(a: &ExactMatrix) -> SnfDecomposition {
    let ring = a.ring();
    let [d, mut u, mut u_inv, v, v_inv] = match ring.kind() {
        RingKind::Integers | RingKind::IntegersMod(_) => integer_snf(a, ring),
        RingKind::LocalizedIntegers(_) | RingKind::PrimeField(_) | RingKind::Rationals => {
            let dom = RingDomain(ring);
            let dense = Dense { rows: a.rows(), cols: a.cols(), data: a.entries().to_vec() };
            reduce_dense(&dom, dense).expect("rational arithmetic cannot overflow").map(|p| from_rat(ring, &p))
        }
    };
    let mut d = d;
    let k = a.rows().min(a.cols());
    if let RingKind::IntegersMod(_) = ring.kind() {
        // The lifted divisors reduce to associates; rescale to gcd(d, n).
        for i in 0..k {
            let (g, unit) = ring.normalize(d.get(i, i));
            if unit.is_one() {
                continue;
            }
            let unit_inv = ring.inverse(&unit).expect("unit");
            d.set(i, i, g);
            for r in 0..u.rows() {
                let x = ring.mul(u.get(r, i), &unit_inv);
                u.set(r, i, x);
            }
            for c in 0..u_inv.cols() {
                let x = ring.mul(u_inv.get(i, c), &unit);
                u_inv.set(i, c, x);
            }
        }
    }
    let elementary_divisors = (0..k).map(|i| d.element(i, i)).collect();
    SnfDecomposition { u, d, v, u_inv, v_inv, elementary_divisors }
}
