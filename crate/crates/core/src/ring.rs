//! Base rings, their prime spectra, residue fields and reduction maps.
//!
//! Ring elements are carried as reduced rationals. Each ring fixes a
//! canonical representative: integers over `Z`, residues in `[0, n)` over
//! `Z/n` and `F_p`, and fractions with denominator prime to `p` over `Z_(p)`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{self, is_prime, mod_inverse};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RingKind {
    Integers,
    IntegersMod(u64),
    LocalizedIntegers(u64),
    PrimeField(u64),
    Rationals,
}

/// One of the supported computable noetherian rings.
///
/// Construction verifies that moduli are at least 2 and that localization
/// and field parameters are prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BaseRing {
    kind: RingKind,
}

impl BaseRing {
    pub const INTEGERS: BaseRing = BaseRing { kind: RingKind::Integers };
    pub const RATIONALS: BaseRing = BaseRing { kind: RingKind::Rationals };

    pub fn integers() -> Self {
        Self::INTEGERS
    }

    pub fn rationals() -> Self {
        Self::RATIONALS
    }

    pub fn integers_mod(n: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidRing(format!("Z/{n}: modulus must be at least 2")));
        }
        Ok(BaseRing { kind: RingKind::IntegersMod(n) })
    }

    pub fn localized(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidRing(format!("Zloc/{p}: {p} is not prime")));
        }
        Ok(BaseRing { kind: RingKind::LocalizedIntegers(p) })
    }

    pub fn prime_field(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidRing(format!("F{p}: {p} is not prime")));
        }
        Ok(BaseRing { kind: RingKind::PrimeField(p) })
    }

    pub fn kind(&self) -> RingKind {
        self.kind
    }

    pub fn is_field(&self) -> bool {
        matches!(self.kind, RingKind::PrimeField(_) | RingKind::Rationals)
    }

    /// True for integral domains (every supported ring except `Z/n`, n composite).
    pub fn is_domain(&self) -> bool {
        match self.kind {
            RingKind::IntegersMod(n) => is_prime(n),
            _ => true,
        }
    }

    /// Modulus for the finite rings `Z/n` and `F_p`.
    pub fn modulus(&self) -> Option<u64> {
        match self.kind {
            RingKind::IntegersMod(n) | RingKind::PrimeField(n) => Some(n),
            _ => None,
        }
    }

    // ---- elements -------------------------------------------------------

    /// Coerce a rational into the ring's canonical representative.
    pub fn element(&self, x: &BigRational) -> Result<BigRational> {
        let bad = || Error::InvalidElement { ring: self.to_string(), value: x.to_string() };
        match self.kind {
            RingKind::Integers => {
                if x.is_integer() {
                    Ok(x.clone())
                } else {
                    Err(bad())
                }
            }
            RingKind::IntegersMod(n) | RingKind::PrimeField(n) => {
                let n = BigInt::from(n);
                let inv = mod_inverse(x.denom(), &n).ok_or_else(bad)?;
                Ok(BigRational::from_integer((x.numer() * inv).mod_floor(&n)))
            }
            RingKind::LocalizedIntegers(p) => {
                if (x.denom() % BigInt::from(p)).is_zero() {
                    Err(bad())
                } else {
                    Ok(x.clone())
                }
            }
            RingKind::Rationals => Ok(x.clone()),
        }
    }

    pub fn from_int(&self, n: i64) -> BigRational {
        self.canon(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(&self, n: BigInt) -> BigRational {
        self.canon(BigRational::from_integer(n))
    }

    /// Canonicalize a value known to lie in the ring (closed under the ops).
    pub(crate) fn canon(&self, x: BigRational) -> BigRational {
        match self.kind {
            RingKind::IntegersMod(n) | RingKind::PrimeField(n) => {
                if x.is_integer() {
                    BigRational::from_integer(x.numer().mod_floor(&BigInt::from(n)))
                } else {
                    self.element(&x).expect("value outside the ring")
                }
            }
            _ => x,
        }
    }

    pub fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    pub fn one(&self) -> BigRational {
        BigRational::one()
    }

    pub fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        self.canon(a + b)
    }

    pub fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        self.canon(a - b)
    }

    pub fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        self.canon(a * b)
    }

    pub fn neg(&self, a: &BigRational) -> BigRational {
        self.canon(-a)
    }

    pub fn is_unit(&self, a: &BigRational) -> bool {
        match self.kind {
            RingKind::Integers => a.numer().abs().is_one(),
            RingKind::IntegersMod(n) => a.numer().gcd(&BigInt::from(n)).is_one(),
            RingKind::LocalizedIntegers(p) => !a.is_zero() && !(a.numer() % BigInt::from(p)).is_zero(),
            RingKind::PrimeField(_) | RingKind::Rationals => !a.is_zero(),
        }
    }

    /// Inverse of a unit.
    pub fn inverse(&self, a: &BigRational) -> Option<BigRational> {
        if !self.is_unit(a) {
            return None;
        }
        match self.kind {
            RingKind::IntegersMod(n) | RingKind::PrimeField(n) => {
                mod_inverse(a.numer(), &BigInt::from(n)).map(BigRational::from_integer)
            }
            _ => Some(a.recip()),
        }
    }

    /// Some `x` with `b * x = a`, or `None` when `b` does not divide `a`.
    pub fn divide(&self, a: &BigRational, b: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            return Some(self.zero());
        }
        if b.is_zero() {
            return None;
        }
        match self.kind {
            RingKind::Integers => {
                let (q, r) = a.numer().div_rem(b.numer());
                r.is_zero().then(|| BigRational::from_integer(q))
            }
            RingKind::IntegersMod(n) => {
                let n = BigInt::from(n);
                let g = b.numer().gcd(&n);
                if !(a.numer() % &g).is_zero() {
                    return None;
                }
                let m = &n / &g;
                let b1 = b.numer() / &g;
                let a1 = a.numer() / &g;
                let inv = if m.is_one() { BigInt::zero() } else { mod_inverse(&b1, &m)? };
                Some(BigRational::from_integer((a1 * inv).mod_floor(&m)))
            }
            RingKind::LocalizedIntegers(_) => {
                (self.valuation(b)? <= self.valuation(a)?).then(|| a / b)
            }
            RingKind::PrimeField(_) | RingKind::Rationals => {
                Some(self.mul(a, &self.inverse(b).expect("nonzero in a field")))
            }
        }
        .map(|x| self.canon(x))
    }

    pub fn divides(&self, b: &BigRational, a: &BigRational) -> bool {
        self.divide(a, b).is_some()
    }

    /// `p`-adic valuation over `Z_(p)`; `None` for zero or other rings.
    pub fn valuation(&self, a: &BigRational) -> Option<u32> {
        match self.kind {
            RingKind::LocalizedIntegers(p) if !a.is_zero() => Some(arith::valuation(a.numer(), p)),
            _ => None,
        }
    }

    /// A generator of the annihilator ideal of `a`, or `None` if it is zero.
    pub fn annihilator(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            return Some(self.one());
        }
        match self.kind {
            RingKind::IntegersMod(n) => {
                let n = BigInt::from(n);
                let g = a.numer().gcd(&n);
                let ann = &n / g;
                (ann != n).then(|| BigRational::from_integer(ann))
            }
            _ => None,
        }
    }

    /// Canonical generator of the ideal `(a)` together with a unit `u` such
    /// that `a * u` equals it.
    pub fn normalize(&self, a: &BigRational) -> (BigRational, BigRational) {
        if a.is_zero() {
            return (self.zero(), self.one());
        }
        match self.kind {
            RingKind::Integers => {
                if a.is_negative() {
                    (-a.clone(), -BigRational::one())
                } else {
                    (a.clone(), BigRational::one())
                }
            }
            RingKind::IntegersMod(n) => {
                let n = BigInt::from(n);
                let d = a.numer().clone();
                let g = d.gcd(&n);
                let m = &n / &g;
                let d1 = &d / &g;
                let base = if m.is_one() { BigInt::zero() } else { mod_inverse(&d1, &m).expect("coprime cofactor") };
                let mut u = base;
                while !u.gcd(&n).is_one() {
                    u += &m;
                }
                let u = u.mod_floor(&n);
                (BigRational::from_integer(g.mod_floor(&n)), BigRational::from_integer(u))
            }
            RingKind::LocalizedIntegers(p) => {
                let v = self.valuation(a).expect("nonzero");
                let pv = BigRational::from_integer(BigInt::from(p).pow(v));
                let u = &pv / a;
                (pv, u)
            }
            RingKind::PrimeField(_) | RingKind::Rationals => {
                (self.one(), self.inverse(a).expect("nonzero in a field"))
            }
        }
    }

    // ---- spectrum -------------------------------------------------------

    pub fn spectrum(&self) -> Spectrum {
        match self.kind {
            RingKind::Integers => Spectrum::Integers,
            RingKind::IntegersMod(n) => Spectrum::Finite(
                arith::prime_divisors(&BigInt::from(n))
                    .expect("u64 modulus factors")
                    .into_iter()
                    .map(Prime::At)
                    .collect(),
            ),
            RingKind::LocalizedIntegers(p) => Spectrum::Finite(vec![Prime::Generic, Prime::At(p)]),
            RingKind::PrimeField(_) | RingKind::Rationals => Spectrum::Finite(vec![Prime::Generic]),
        }
    }

    pub fn is_admissible(&self, q: Prime) -> bool {
        match (self.kind, q) {
            (RingKind::Integers, Prime::Generic) => true,
            (RingKind::Integers, Prime::At(p)) => is_prime(p),
            (RingKind::IntegersMod(n), Prime::At(p)) => is_prime(p) && n % p == 0,
            (RingKind::IntegersMod(_), Prime::Generic) => false,
            (RingKind::LocalizedIntegers(_), Prime::Generic) => true,
            (RingKind::LocalizedIntegers(p), Prime::At(r)) => p == r,
            (RingKind::PrimeField(_) | RingKind::Rationals, q) => q == Prime::Generic,
        }
    }

    pub fn check_prime(&self, q: Prime) -> Result<()> {
        if self.is_admissible(q) {
            Ok(())
        } else {
            Err(Error::InadmissiblePrime { ring: self.to_string(), prime: q.to_string() })
        }
    }

    pub fn residue_field(&self, q: Prime) -> Result<ResidueField> {
        self.check_prime(q)?;
        let field = match (self.kind, q) {
            (RingKind::PrimeField(p), _) => BaseRing::prime_field(p)?,
            (_, Prime::At(p)) => BaseRing::prime_field(p)?,
            (_, Prime::Generic) => BaseRing::RATIONALS,
        };
        Ok(ResidueField { source: *self, prime: q, field })
    }
}

impl fmt::Display for BaseRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            RingKind::Integers => write!(f, "Z"),
            RingKind::IntegersMod(n) => write!(f, "Z/{n}"),
            RingKind::LocalizedIntegers(p) => write!(f, "Zloc/{p}"),
            RingKind::PrimeField(p) => write!(f, "F{p}"),
            RingKind::Rationals => write!(f, "Q"),
        }
    }
}

impl FromStr for BaseRing {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let num = |t: &str| {
            t.parse::<u64>().map_err(|_| Error::InvalidRing(format!("bad ring literal {s:?}")))
        };
        match s {
            "Z" => Ok(Self::INTEGERS),
            "Q" => Ok(Self::RATIONALS),
            _ => {
                if let Some(rest) = s.strip_prefix("Zloc/") {
                    Self::localized(num(rest)?)
                } else if let Some(rest) = s.strip_prefix("Z/") {
                    Self::integers_mod(num(rest)?)
                } else if let Some(rest) = s.strip_prefix('F') {
                    Self::prime_field(num(rest)?)
                } else {
                    Err(Error::InvalidRing(format!("bad ring literal {s:?}")))
                }
            }
        }
    }
}

impl Serialize for BaseRing {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for BaseRing {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A prime ideal: the zero ideal or the ideal generated by a rational prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Prime {
    Generic,
    At(u64),
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Prime::Generic => write!(f, "(0)"),
            Prime::At(p) => write!(f, "({p})"),
        }
    }
}

impl FromStr for Prime {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')');
        match t {
            "0" | "generic" => Ok(Prime::Generic),
            _ => t
                .parse::<u64>()
                .ok()
                .filter(|&p| is_prime(p))
                .map(Prime::At)
                .ok_or_else(|| Error::Parse(format!("bad prime {s:?}"))),
        }
    }
}

impl Serialize for Prime {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// `Spec R`. For `Z` it is infinite; universally quantified statements are
/// decided by pairing it with a finite set of bad primes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Spectrum {
    Finite(Vec<Prime>),
    /// `{(0)} ∪ {(p) : p prime}`.
    Integers,
}

impl Spectrum {
    pub fn contains(&self, q: Prime) -> bool {
        match self {
            Spectrum::Finite(ps) => ps.contains(&q),
            Spectrum::Integers => match q {
                Prime::Generic => true,
                Prime::At(p) => is_prime(p),
            },
        }
    }

    pub fn finite(&self) -> Option<&[Prime]> {
        match self {
            Spectrum::Finite(ps) => Some(ps),
            Spectrum::Integers => None,
        }
    }

    /// Primes on which a universally quantified statement must be checked:
    /// the whole spectrum when finite, else the generic point plus `bad`.
    pub fn discharge(&self, bad: &[Prime]) -> Vec<Prime> {
        match self {
            Spectrum::Finite(ps) => ps.clone(),
            Spectrum::Integers => {
                let mut out = vec![Prime::Generic];
                out.extend(bad.iter().copied().filter(|q| *q != Prime::Generic));
                out.sort();
                out.dedup();
                out
            }
        }
    }
}

/// `κ(q)` together with the reduction map `R -> κ(q)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ResidueField {
    pub source: BaseRing,
    pub prime: Prime,
    pub field: BaseRing,
}

impl ResidueField {
    pub fn reduce(&self, x: &BigRational) -> BigRational {
        match self.field.kind {
            RingKind::PrimeField(_) => self.field.element(x).expect("denominator prime to p"),
            _ => x.clone(),
        }
    }
}

/// A ring element tagged with its ring.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingElement {
    pub ring: BaseRing,
    pub value: BigRational,
}

impl RingElement {
    pub fn new(ring: BaseRing, value: &BigRational) -> Result<Self> {
        Ok(RingElement { ring, value: ring.element(value)? })
    }

    pub fn int(ring: BaseRing, n: i64) -> Self {
        RingElement { ring, value: ring.from_int(n) }
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn is_unit(&self) -> bool {
        self.ring.is_unit(&self.value)
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// Parse `"3"`, `"-3/2"` into a rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("bad number {s:?}"));
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn literals_round_trip() {
        for lit in ["Z", "Z/12", "Zloc/5", "F7", "Q"] {
            let r: BaseRing = lit.parse().unwrap();
            assert_eq!(r.to_string(), lit);
        }
        assert!("Z/1".parse::<BaseRing>().is_err());
        assert!("Zloc/6".parse::<BaseRing>().is_err());
        assert!("F9".parse::<BaseRing>().is_err());
        assert!("R".parse::<BaseRing>().is_err());
    }

    #[test]
    fn spectra() {
        let z12: BaseRing = "Z/12".parse().unwrap();
        assert_eq!(z12.spectrum(), Spectrum::Finite(vec![Prime::At(2), Prime::At(3)]));
        let z5 = BaseRing::localized(5).unwrap();
        assert_eq!(z5.spectrum(), Spectrum::Finite(vec![Prime::Generic, Prime::At(5)]));
        assert_eq!(BaseRing::RATIONALS.spectrum(), Spectrum::Finite(vec![Prime::Generic]));
        assert!(BaseRing::INTEGERS.spectrum().contains(Prime::At(101)));
        assert!(!BaseRing::INTEGERS.spectrum().contains(Prime::At(100)));
        for n in 2..200u64 {
            let omega = arith::prime_divisors(&BigInt::from(n)).unwrap().len();
            assert_eq!(BaseRing::integers_mod(n).unwrap().spectrum().finite().unwrap().len(), omega);
        }
    }

    #[test]
    fn residue_fields() {
        let z = BaseRing::INTEGERS;
        assert_eq!(z.residue_field(Prime::Generic).unwrap().field, BaseRing::RATIONALS);
        assert_eq!(z.residue_field(Prime::At(7)).unwrap().field.to_string(), "F7");
        let z12: BaseRing = "Z/12".parse().unwrap();
        assert_eq!(z12.residue_field(Prime::At(2)).unwrap().field.to_string(), "F2");
        assert!(z12.residue_field(Prime::At(5)).is_err());
        assert!(z12.residue_field(Prime::Generic).is_err());
        let loc = BaseRing::localized(5).unwrap();
        let k = loc.residue_field(Prime::At(5)).unwrap();
        assert_eq!(k.reduce(&q(3, 2)), q(4, 1));
        assert!(loc.residue_field(Prime::At(3)).is_err());
    }

    #[test]
    fn element_invariants() {
        let z6 = BaseRing::integers_mod(6).unwrap();
        assert_eq!(z6.from_int(-1), q(5, 1));
        assert!(BaseRing::INTEGERS.element(&q(1, 2)).is_err());
        assert!(BaseRing::localized(3).unwrap().element(&q(1, 3)).is_err());
        assert_eq!(BaseRing::localized(3).unwrap().element(&q(1, 2)).unwrap(), q(1, 2));
        assert_eq!(z6.element(&q(1, 5)).unwrap(), q(5, 1));
    }

    #[test]
    fn division_and_normalization() {
        let z12 = BaseRing::integers_mod(12).unwrap();
        let x = z12.divide(&q(4, 1), &q(10, 1)).unwrap();
        assert_eq!(z12.mul(&x, &q(10, 1)), q(4, 1));
        assert!(z12.divide(&q(3, 1), &q(10, 1)).is_none());
        for d in 0..12 {
            let (g, u) = z12.normalize(&q(d, 1));
            assert!(z12.is_unit(&u));
            assert_eq!(z12.mul(&q(d, 1), &u), g);
        }
        let loc = BaseRing::localized(2).unwrap();
        let (g, u) = loc.normalize(&q(12, 5));
        assert_eq!(g, q(4, 1));
        assert!(loc.is_unit(&u));
        assert!(loc.divides(&q(2, 3), &q(6, 1)));
        assert!(!loc.divides(&q(4, 1), &q(6, 1)));
        assert_eq!(z12.annihilator(&q(4, 1)), Some(q(3, 1)));
        assert_eq!(z12.annihilator(&q(5, 1)), None);
    }
}
