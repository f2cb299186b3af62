//! Exact scalar arithmetic over the rationals, prime fields `F_p` and
//! extension fields `F_{p^k}`.
//!
//! Elements are kept in canonical form at all times (reduced fractions,
//! residues in `[0,p)`, polynomials of degree `< k`), so equality is plain
//! representational equality.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

mod fp;
pub mod poly;
pub mod factor;
pub mod ext;

pub use fp::is_prime_u64;

/// Which field a descriptor denotes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FieldKind {
    Rationals,
    Prime { p: u64 },
    /// `F_p[t]/(modulus)`, modulus monic irreducible of degree `k`,
    /// coefficients low-to-high (length `k + 1`, last entry 1).
    Extension { p: u64, k: usize, modulus: Vec<u64> },
}

#[derive(Debug, PartialEq, Eq, Hash)]
pub struct FieldDescriptor {
    kind: FieldKind,
}

impl FieldDescriptor {
    pub fn kind(&self) -> &FieldKind {
        &self.kind
    }
}

/// Shared handle on a field descriptor. Cheap to clone; all elements carry one.
#[derive(Clone)]
pub struct Field(Arc<FieldDescriptor>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.kind == other.0.kind
    }
}
impl Eq for Field {}

impl std::hash::Hash for Field {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.kind.hash(state);
    }
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind() {
            FieldKind::Rationals => write!(f, "Q"),
            FieldKind::Prime { p } => write!(f, "F_{p}"),
            FieldKind::Extension { p, k, .. } => write!(f, "F_{{{p}^{k}}}"),
        }
    }
}

impl Field {
    pub fn rationals() -> Field {
        Field(Arc::new(FieldDescriptor { kind: FieldKind::Rationals }))
    }

    /// Prime field `F_p`. Primality is checked here, not deferred.
    pub fn prime(p: u64) -> Result<Field> {
        if !fp::is_prime_u64(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Field(Arc::new(FieldDescriptor { kind: FieldKind::Prime { p } })))
    }

    /// Extension field `F_p[t]/(modulus)`. The modulus must be monic
    /// irreducible of degree >= 2; both properties are verified.
    pub fn extension(p: u64, modulus: Vec<u64>) -> Result<Field> {
        if !fp::is_prime_u64(p) {
            return Err(Error::NotPrime(p));
        }
        let modulus: Vec<u64> = modulus.iter().map(|c| c % p).collect();
        let k = modulus.len().checked_sub(1).filter(|k| *k >= 2).ok_or_else(|| {
            Error::InvalidInput("extension modulus must have degree >= 2".into())
        })?;
        if modulus[k] != 1 {
            return Err(Error::InvalidInput("extension modulus must be monic".into()));
        }
        if !factor::fp_modulus_is_irreducible(p, &modulus) {
            return Err(Error::NotIrreducible { p });
        }
        Ok(Field(Arc::new(FieldDescriptor {
            kind: FieldKind::Extension { p, k, modulus },
        })))
    }

    pub fn kind(&self) -> &FieldKind {
        &self.0.kind
    }

    /// Characteristic; 0 for the rationals.
    pub fn characteristic(&self) -> u64 {
        match &self.0.kind {
            FieldKind::Rationals => 0,
            FieldKind::Prime { p } | FieldKind::Extension { p, .. } => *p,
        }
    }

    /// Number of elements for finite fields, `None` for the rationals.
    pub fn order(&self) -> Option<BigUint> {
        match &self.0.kind {
            FieldKind::Rationals => None,
            FieldKind::Prime { p } => Some(BigUint::from(*p)),
            FieldKind::Extension { p, k, .. } => Some(BigUint::from(*p).pow(*k as u32)),
        }
    }

    /// Degree over the prime field: 1 for `F_p` and the rationals.
    pub fn extension_degree(&self) -> usize {
        match &self.0.kind {
            FieldKind::Extension { k, .. } => *k,
            _ => 1,
        }
    }

    pub fn is_finite(&self) -> bool {
        !matches!(self.0.kind, FieldKind::Rationals)
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement { field: self.clone(), repr: self.repr_from_u64(0) }
    }

    pub fn one(&self) -> FieldElement {
        FieldElement { field: self.clone(), repr: self.repr_from_u64(1) }
    }

    pub fn from_u64(&self, n: u64) -> FieldElement {
        match &self.0.kind {
            FieldKind::Rationals => FieldElement {
                field: self.clone(),
                repr: Repr::Rational(BigRational::from_integer(BigInt::from(n))),
            },
            _ => FieldElement { field: self.clone(), repr: self.repr_from_u64(n) },
        }
    }

    pub fn from_i64(&self, n: i64) -> FieldElement {
        match &self.0.kind {
            FieldKind::Rationals => FieldElement {
                field: self.clone(),
                repr: Repr::Rational(BigRational::from_integer(BigInt::from(n))),
            },
            _ => {
                let p = self.characteristic();
                let r = n.rem_euclid(p as i64) as u64;
                FieldElement { field: self.clone(), repr: self.repr_from_u64(r) }
            }
        }
    }

    fn repr_from_u64(&self, n: u64) -> Repr {
        match &self.0.kind {
            FieldKind::Rationals => Repr::Rational(BigRational::from_integer(BigInt::from(n))),
            FieldKind::Prime { p } => Repr::Prime(n % p),
            FieldKind::Extension { p, k, .. } => {
                let mut v = vec![0u64; *k];
                v[0] = n % p;
                Repr::Ext(v)
            }
        }
    }

    /// Rational a/b.
    pub fn fraction(&self, num: i64, den: i64) -> Result<FieldElement> {
        if den == 0 {
            return Err(Error::DivisionByZero);
        }
        self.from_i64(num).div(&self.from_i64(den))
    }

    /// Element of an extension field from low-to-high coefficients over `F_p`.
    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<FieldElement> {
        match &self.0.kind {
            FieldKind::Extension { p, k, .. } => {
                if coeffs.len() > *k {
                    return Err(Error::InvalidInput(format!(
                        "{} coefficients for an extension of degree {}",
                        coeffs.len(),
                        k
                    )));
                }
                let mut v = vec![0u64; *k];
                for (i, c) in coeffs.iter().enumerate() {
                    v[i] = c % p;
                }
                Ok(FieldElement { field: self.clone(), repr: Repr::Ext(v) })
            }
            FieldKind::Prime { p } => {
                if coeffs.len() > 1 {
                    return Err(Error::InvalidInput("too many coefficients for F_p".into()));
                }
                Ok(FieldElement {
                    field: self.clone(),
                    repr: Repr::Prime(coeffs.first().copied().unwrap_or(0) % p),
                })
            }
            FieldKind::Rationals => Err(Error::Unsupported(
                "coefficient vectors only describe finite field elements".into(),
            )),
        }
    }

    /// The canonical generator `t` of an extension field.
    pub fn generator(&self) -> Result<FieldElement> {
        match &self.0.kind {
            FieldKind::Extension { .. } => self.from_coeffs(&[0, 1]),
            _ => Err(Error::Unsupported("generator only exists for extension fields".into())),
        }
    }

    /// Enumerate all elements of a finite field in canonical order.
    /// Panics for the rationals.
    pub fn enumerate(&self) -> Box<dyn Iterator<Item = FieldElement> + '_> {
        match &self.0.kind {
            FieldKind::Rationals => panic!("cannot enumerate the rationals"),
            FieldKind::Prime { p } => {
                let f = self.clone();
                Box::new((0..*p).map(move |n| FieldElement {
                    field: f.clone(),
                    repr: Repr::Prime(n),
                }))
            }
            FieldKind::Extension { p, k, .. } => {
                let f = self.clone();
                let p = *p;
                let k = *k;
                let total = (p as u128).checked_pow(k as u32).expect("field too large to enumerate");
                Box::new((0..total).map(move |mut n| {
                    let mut v = vec![0u64; k];
                    for c in v.iter_mut() {
                        *c = (n % p as u128) as u64;
                        n /= p as u128;
                    }
                    FieldElement { field: f.clone(), repr: Repr::Ext(v) }
                }))
            }
        }
    }

    /// Parse the string form produced by [`FieldElement::to_coeff_string`].
    pub fn parse_element(&self, s: &str) -> Result<FieldElement> {
        let bad = || Error::InvalidInput(format!("cannot parse {s:?} as a field element"));
        match &self.0.kind {
            FieldKind::Rationals => {
                let rat: BigRational = if let Some((n, d)) = s.split_once('/') {
                    let n: BigInt = n.trim().parse().map_err(|_| bad())?;
                    let d: BigInt = d.trim().parse().map_err(|_| bad())?;
                    if d.is_zero() {
                        return Err(Error::DivisionByZero);
                    }
                    BigRational::new(n, d)
                } else {
                    BigRational::from_integer(s.trim().parse().map_err(|_| bad())?)
                };
                Ok(FieldElement { field: self.clone(), repr: Repr::Rational(rat) })
            }
            FieldKind::Prime { .. } => {
                let n: i64 = s.trim().parse().map_err(|_| bad())?;
                Ok(self.from_i64(n))
            }
            FieldKind::Extension { .. } => {
                let coeffs: Vec<u64> = s
                    .split(',')
                    .map(|c| c.trim().parse::<u64>().map_err(|_| bad()))
                    .collect::<Result<_>>()?;
                self.from_coeffs(&coeffs)
            }
        }
    }
}

/// Canonical element representation; one variant per field kind.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Repr {
    Rational(BigRational),
    Prime(u64),
    Ext(Vec<u64>),
}

/// An exact scalar in a specific field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    field: Field,
    repr: Repr,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {:?}", self.to_coeff_string(), self.field)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_coeff_string())
    }
}

impl FieldElement {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Rational(r) => r.is_zero(),
            Repr::Prime(n) => *n == 0,
            Repr::Ext(v) => v.iter().all(|c| *c == 0),
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.repr {
            Repr::Rational(r) => r.is_one(),
            Repr::Prime(n) => *n == 1,
            Repr::Ext(v) => v[0] == 1 && v[1..].iter().all(|c| *c == 0),
        }
    }

    fn check_same_field(&self, other: &FieldElement) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::DescriptorMismatch)
        }
    }

    pub fn add(&self, other: &FieldElement) -> FieldElement {
        self.checked_add(other).expect("field mismatch in add")
    }
    pub fn sub(&self, other: &FieldElement) -> FieldElement {
        self.checked_sub(other).expect("field mismatch in sub")
    }
    pub fn mul(&self, other: &FieldElement) -> FieldElement {
        self.checked_mul(other).expect("field mismatch in mul")
    }

    pub fn checked_add(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check_same_field(other)?;
        let repr = match (&self.repr, &other.repr) {
            (Repr::Rational(a), Repr::Rational(b)) => Repr::Rational(a + b),
            (Repr::Prime(a), Repr::Prime(b)) => {
                let p = self.field.characteristic();
                Repr::Prime(fp::addmod(*a, *b, p))
            }
            (Repr::Ext(a), Repr::Ext(b)) => {
                let p = self.field.characteristic();
                Repr::Ext(a.iter().zip(b).map(|(x, y)| fp::addmod(*x, *y, p)).collect())
            }
            _ => unreachable!("matching descriptors imply matching reprs"),
        };
        Ok(FieldElement { field: self.field.clone(), repr })
    }

    pub fn checked_sub(&self, other: &FieldElement) -> Result<FieldElement> {
        self.checked_add(&other.neg())
    }

    pub fn neg(&self) -> FieldElement {
        let repr = match &self.repr {
            Repr::Rational(a) => Repr::Rational(-a),
            Repr::Prime(a) => {
                let p = self.field.characteristic();
                Repr::Prime(if *a == 0 { 0 } else { p - *a })
            }
            Repr::Ext(a) => {
                let p = self.field.characteristic();
                Repr::Ext(a.iter().map(|x| if *x == 0 { 0 } else { p - *x }).collect())
            }
        };
        FieldElement { field: self.field.clone(), repr }
    }

    pub fn checked_mul(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check_same_field(other)?;
        let repr = match (&self.repr, &other.repr) {
            (Repr::Rational(a), Repr::Rational(b)) => Repr::Rational(a * b),
            (Repr::Prime(a), Repr::Prime(b)) => {
                let p = self.field.characteristic();
                Repr::Prime(fp::mulmod(*a, *b, p))
            }
            (Repr::Ext(a), Repr::Ext(b)) => {
                let (p, modulus) = match self.field.kind() {
                    FieldKind::Extension { p, modulus, .. } => (*p, modulus),
                    _ => unreachable!(),
                };
                Repr::Ext(fp::polymulmod(a, b, modulus, p))
            }
            _ => unreachable!(),
        };
        Ok(FieldElement { field: self.field.clone(), repr })
    }

    pub fn inv(&self) -> Result<FieldElement> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let repr = match &self.repr {
            Repr::Rational(a) => Repr::Rational(a.recip()),
            Repr::Prime(a) => {
                let p = self.field.characteristic();
                Repr::Prime(fp::invmod(*a, p))
            }
            Repr::Ext(a) => {
                let (p, modulus) = match self.field.kind() {
                    FieldKind::Extension { p, modulus, .. } => (*p, modulus),
                    _ => unreachable!(),
                };
                Repr::Ext(fp::polyinvmod(a, modulus, p)?)
            }
        };
        Ok(FieldElement { field: self.field.clone(), repr })
    }

    pub fn div(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check_same_field(other)?;
        self.checked_mul(&other.inv()?)
    }

    pub fn pow(&self, mut e: u64) -> FieldElement {
        let mut base = self.clone();
        let mut acc = self.field.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn pow_big(&self, e: &BigUint) -> FieldElement {
        let mut acc = self.field.one();
        let mut base = self.clone();
        for i in 0..e.bits() {
            if e.bit(i) {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
        }
        acc
    }

    /// Frobenius `x -> x^p`, identity on the rationals and prime fields.
    pub fn frobenius(&self) -> FieldElement {
        match self.field.kind() {
            FieldKind::Extension { p, .. } => self.pow(*p),
            _ => self.clone(),
        }
    }

    /// Coefficients over the prime field (length = extension degree).
    /// For `F_p` this is the single residue. Panics over the rationals.
    pub fn prime_field_coords(&self) -> Vec<u64> {
        match &self.repr {
            Repr::Prime(n) => vec![*n],
            Repr::Ext(v) => v.clone(),
            Repr::Rational(_) => panic!("no prime field coordinates over Q"),
        }
    }

    pub fn rational_value(&self) -> Option<&BigRational> {
        match &self.repr {
            Repr::Rational(r) => Some(r),
            _ => None,
        }
    }

    /// Total ordering inside one field, used for deterministic tie-breaking.
    /// Panics on field mismatch.
    pub fn canonical_cmp(&self, other: &FieldElement) -> Ordering {
        assert!(self.field == other.field, "canonical_cmp across fields");
        match (&self.repr, &other.repr) {
            (Repr::Rational(a), Repr::Rational(b)) => a.cmp(b),
            (Repr::Prime(a), Repr::Prime(b)) => a.cmp(b),
            (Repr::Ext(a), Repr::Ext(b)) => {
                a.iter().rev().cmp(b.iter().rev())
            }
            _ => unreachable!(),
        }
    }

    /// Canonical string form: `a` or `a/b` over Q, residue over `F_p`,
    /// comma-joined low-to-high coefficients over `F_{p^k}`.
    pub fn to_coeff_string(&self) -> String {
        match &self.repr {
            Repr::Rational(r) => {
                if r.denom().is_one() {
                    r.numer().to_string()
                } else if r.denom().is_negative() {
                    // num-rational keeps denominators positive; belt and braces.
                    format!("{}/{}", -r.numer(), -r.denom())
                } else {
                    format!("{}/{}", r.numer(), r.denom())
                }
            }
            Repr::Prime(n) => n.to_string(),
            Repr::Ext(v) => v.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","),
        }
    }
}

/// The four basic operations as a single dispatchable entry point.
pub fn field_arithmetic(a: &FieldElement, b: &FieldElement, op: ArithOp) -> Result<FieldElement> {
    match op {
        ArithOp::Add => a.checked_add(b),
        ArithOp::Sub => a.checked_sub(b),
        ArithOp::Mul => a.checked_mul(b),
        ArithOp::Div => a.div(b),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}
