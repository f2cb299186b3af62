//! Dense univariate polynomials over any [`Field`].

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};

/// Coefficients low-to-high, no trailing zeros; the empty vector is 0.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    field: Field,
    coeffs: Vec<FieldElement>,
}

impl std::fmt::Debug for Poly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("({c})"),
                1 => format!("({c})*X"),
                _ => format!("({c})*X^{i}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl Poly {
    pub fn zero(field: &Field) -> Poly {
        Poly { field: field.clone(), coeffs: vec![] }
    }

    pub fn one(field: &Field) -> Poly {
        Poly { field: field.clone(), coeffs: vec![field.one()] }
    }

    pub fn x(field: &Field) -> Poly {
        Poly { field: field.clone(), coeffs: vec![field.zero(), field.one()] }
    }

    pub fn constant(c: FieldElement) -> Poly {
        let field = c.field().clone();
        Poly::from_coeffs(&field, vec![c])
    }

    pub fn from_coeffs(field: &Field, mut coeffs: Vec<FieldElement>) -> Poly {
        while coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        Poly { field: field.clone(), coeffs }
    }

    pub fn from_i64_coeffs(field: &Field, coeffs: &[i64]) -> Poly {
        Poly::from_coeffs(field, coeffs.iter().map(|c| field.from_i64(*c)).collect())
    }

    /// `X - root`.
    pub fn linear_from_root(root: &FieldElement) -> Poly {
        let field = root.field().clone();
        Poly::from_coeffs(&field, vec![root.neg(), field.one()])
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FieldElement {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coeff(&self) -> Option<&FieldElement> {
        self.coeffs.last()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i).add(&other.coeff(i))).collect();
        Poly::from_coeffs(&self.field, coeffs)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i).sub(&other.coeff(i))).collect();
        Poly::from_coeffs(&self.field, coeffs)
    }

    pub fn neg(&self) -> Poly {
        Poly { field: self.field.clone(), coeffs: self.coeffs.iter().map(|c| c.neg()).collect() }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.field);
        }
        let mut out = vec![self.field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Poly::from_coeffs(&self.field, out)
    }

    pub fn scale(&self, c: &FieldElement) -> Poly {
        Poly::from_coeffs(&self.field, self.coeffs.iter().map(|a| a.mul(c)).collect())
    }

    /// Multiply by `X^n`.
    pub fn shift(&self, n: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![self.field.zero(); n];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { field: self.field.clone(), coeffs }
    }

    pub fn pow(&self, e: usize) -> Poly {
        let mut acc = Poly::one(&self.field);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn divrem(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        if divisor.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let db = divisor.degree().unwrap();
        let binv = divisor.leading_coeff().unwrap().inv()?;
        let mut r = self.clone();
        let mut q = vec![self.field.zero(); self.coeffs.len().saturating_sub(db)];
        while let Some(dr) = r.degree() {
            if dr < db {
                break;
            }
            let lead = r.leading_coeff().unwrap().mul(&binv);
            let shift = dr - db;
            q[shift] = lead.clone();
            let sub = divisor.scale(&lead).shift(shift);
            r = r.sub(&sub);
        }
        Ok((Poly::from_coeffs(&self.field, q), r))
    }

    pub fn rem(&self, divisor: &Poly) -> Result<Poly> {
        Ok(self.divrem(divisor)?.1)
    }

    pub fn monic(&self) -> Result<Poly> {
        let lead = self.leading_coeff().ok_or(Error::ZeroPolynomial)?;
        Ok(self.scale(&lead.inv()?))
    }

    /// Monic gcd; gcd(0,0) = 0.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = std::mem::replace(&mut b, r);
        }
        if a.is_zero() {
            a
        } else {
            a.monic().unwrap()
        }
    }

    pub fn eval(&self, x: &FieldElement) -> FieldElement {
        let mut acc = self.field.zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero(&self.field);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.mul(&self.field.from_i64(i as i64)))
            .collect();
        Poly::from_coeffs(&self.field, coeffs)
    }

    /// `self^e mod m` by square-and-multiply; supports huge exponents.
    pub fn pow_mod(&self, e: &BigUint, m: &Poly) -> Result<Poly> {
        let mut acc = Poly::one(&self.field).rem(m)?;
        let mut base = self.rem(m)?;
        for i in 0..e.bits() {
            if e.bit(i) {
                acc = acc.mul(&base).rem(m)?;
            }
            base = base.mul(&base).rem(m)?;
        }
        Ok(acc)
    }

    /// Lagrange interpolation through distinct sample points.
    pub fn interpolate(points: &[(FieldElement, FieldElement)]) -> Result<Poly> {
        let field = points
            .first()
            .map(|(x, _)| x.field().clone())
            .ok_or_else(|| Error::InvalidInput("no interpolation points".into()))?;
        let mut acc = Poly::zero(&field);
        for (i, (xi, yi)) in points.iter().enumerate() {
            let mut num = Poly::constant(yi.clone());
            let mut den = field.one();
            for (j, (xj, _)) in points.iter().enumerate() {
                if i == j {
                    continue;
                }
                num = num.mul(&Poly::linear_from_root(xj));
                den = den.mul(&xi.sub(xj));
            }
            acc = acc.add(&num.scale(&den.inv()?));
        }
        Ok(acc)
    }

    /// Resultant with the convention
    /// `Res(f, g) = lc(f)^{deg g} * prod g(alpha)` over the roots of `f`,
    /// computed by the Euclidean algorithm.
    pub fn resultant(&self, other: &Poly) -> Result<FieldElement> {
        if self.is_zero() || other.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let field = self.field.clone();
        let mut a = self.clone();
        let mut b = other.clone();
        let mut acc = field.one();
        loop {
            let da = a.degree().unwrap();
            let db = match b.degree() {
                Some(d) => d,
                None => return Ok(field.zero()),
            };
            if db == 0 {
                // Res(a, c) = c^{deg a}
                return Ok(acc.mul(&b.coeff(0).pow(da as u64)));
            }
            let r = a.rem(&b)?;
            if r.is_zero() {
                return Ok(field.zero());
            }
            let dr = r.degree().unwrap();
            // Res(a,b) = (-1)^{da*db} lc(b)^{da-dr} Res(b, r)
            let mut factor = b.leading_coeff().unwrap().pow((da - dr) as u64);
            if (da * db) % 2 == 1 {
                factor = factor.neg();
            }
            acc = acc.mul(&factor);
            a = std::mem::replace(&mut b, r);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f7() -> Field {
        Field::prime(7).unwrap()
    }

    #[test]
    fn divrem_roundtrip() {
        let f = f7();
        let a = Poly::from_i64_coeffs(&f, &[1, 2, 3, 4]);
        let b = Poly::from_i64_coeffs(&f, &[2, 5]);
        let (q, r) = a.divrem(&b).unwrap();
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.degree() < b.degree());
    }

    #[test]
    fn gcd_of_common_factor() {
        let f = f7();
        let common = Poly::from_i64_coeffs(&f, &[3, 1]);
        let a = common.mul(&Poly::from_i64_coeffs(&f, &[1, 1]));
        let b = common.mul(&Poly::from_i64_coeffs(&f, &[2, 1]));
        assert_eq!(a.gcd(&b), common.monic().unwrap());
    }

    #[test]
    fn resultant_spec_values() {
        let q = Field::rationals();
        // f = x-1, g = x-1 -> 0
        let f = Poly::from_i64_coeffs(&q, &[-1, 1]);
        assert!(f.resultant(&f).unwrap().is_zero());
        // f = x^2+1, g = x-1 -> 2
        let f = Poly::from_i64_coeffs(&q, &[1, 0, 1]);
        let g = Poly::from_i64_coeffs(&q, &[-1, 1]);
        assert_eq!(f.resultant(&g).unwrap(), q.from_i64(2));
        // f = x^2, g = x+3 -> 9
        let f = Poly::from_i64_coeffs(&q, &[0, 0, 1]);
        let g = Poly::from_i64_coeffs(&q, &[3, 1]);
        assert_eq!(f.resultant(&g).unwrap(), q.from_i64(9));
    }

    #[test]
    fn interpolation_matches() {
        let f = Field::prime(101).unwrap();
        let target = Poly::from_i64_coeffs(&f, &[3, 0, 5, 9]);
        let pts: Vec<_> = (0..4).map(|i| {
            let x = f.from_i64(i);
            (x.clone(), target.eval(&x))
        }).collect();
        assert_eq!(Poly::interpolate(&pts).unwrap(), target);
    }
}
