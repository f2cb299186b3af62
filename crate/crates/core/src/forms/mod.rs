//! Homogeneous ternary and binary forms, plus the coefficient
//! reconstruction of a binary form from its root divisor.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::poly::Poly;
use crate::field::{Field, FieldElement};
use crate::matrix::Matrix;

mod elim;
mod series;

pub use elim::{mv_gcd, resultant_z};
pub use series::{branch_expansion, intersection_multiplicity, Chart, Multiplicity, TruncatedSeries};

/// Exponent triple (i, j, k) of x^i y^j z^k.
pub type Exp = (u16, u16, u16);

/// A homogeneous form in x, y, z. Sparse; zero coefficients are absent, so
/// the zero form of any degree is the empty map with a tracked degree.
#[derive(Clone, PartialEq, Eq)]
pub struct TernaryForm {
    field: Field,
    degree: usize,
    terms: BTreeMap<Exp, FieldElement>,
}

impl fmt::Debug for TernaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0 (deg {})", self.degree);
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|((i, j, k), c)| format!("({c})*x^{i}y^{j}z^{k}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl TernaryForm {
    pub fn zero(field: &Field, degree: usize) -> TernaryForm {
        TernaryForm { field: field.clone(), degree, terms: BTreeMap::new() }
    }

    pub fn from_terms<I>(field: &Field, degree: usize, terms: I) -> Result<TernaryForm>
    where
        I: IntoIterator<Item = (Exp, FieldElement)>,
    {
        let mut map = BTreeMap::new();
        for ((i, j, k), c) in terms {
            if (i as usize) + (j as usize) + (k as usize) != degree {
                return Err(Error::InvalidInput(format!(
                    "exponents ({i},{j},{k}) do not sum to degree {degree}"
                )));
            }
            if c.field() != field {
                return Err(Error::DescriptorMismatch);
            }
            if !c.is_zero() {
                let prev = map.insert((i, j, k), c);
                if prev.is_some() {
                    return Err(Error::InvalidInput(format!(
                        "duplicate exponent triple ({i},{j},{k})"
                    )));
                }
            }
        }
        Ok(TernaryForm { field: field.clone(), degree, terms: map })
    }

    pub fn monomial(field: &Field, e: Exp, c: FieldElement) -> TernaryForm {
        let degree = e.0 as usize + e.1 as usize + e.2 as usize;
        TernaryForm::from_terms(field, degree, [(e, c)]).expect("consistent monomial")
    }

    /// The i-th coordinate line (0: x, 1: y, 2: z) as a degree-1 form.
    pub fn variable(field: &Field, axis: usize) -> TernaryForm {
        let e = match axis {
            0 => (1, 0, 0),
            1 => (0, 1, 0),
            2 => (0, 0, 1),
            _ => panic!("axis out of range"),
        };
        TernaryForm::monomial(field, e, field.one())
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exp, &FieldElement)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, e: Exp) -> FieldElement {
        self.terms.get(&e).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn add(&self, other: &TernaryForm) -> TernaryForm {
        assert_eq!(self.degree, other.degree, "degree mismatch in form add");
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            let v = match terms.remove(e) {
                Some(prev) => prev.add(c),
                None => c.clone(),
            };
            if !v.is_zero() {
                terms.insert(*e, v);
            }
        }
        TernaryForm { field: self.field.clone(), degree: self.degree, terms }
    }

    pub fn sub(&self, other: &TernaryForm) -> TernaryForm {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> TernaryForm {
        TernaryForm {
            field: self.field.clone(),
            degree: self.degree,
            terms: self.terms.iter().map(|(e, c)| (*e, c.neg())).collect(),
        }
    }

    pub fn scale(&self, c: &FieldElement) -> TernaryForm {
        if c.is_zero() {
            return TernaryForm::zero(&self.field, self.degree);
        }
        TernaryForm {
            field: self.field.clone(),
            degree: self.degree,
            terms: self.terms.iter().map(|(e, a)| (*e, a.mul(c))).collect(),
        }
    }

    pub fn mul(&self, other: &TernaryForm) -> TernaryForm {
        let degree = self.degree + other.degree;
        let mut terms: BTreeMap<Exp, FieldElement> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e = (e1.0 + e2.0, e1.1 + e2.1, e1.2 + e2.2);
                let prod = c1.mul(c2);
                let v = match terms.remove(&e) {
                    Some(prev) => prev.add(&prod),
                    None => prod,
                };
                if !v.is_zero() {
                    terms.insert(e, v);
                }
            }
        }
        TernaryForm { field: self.field.clone(), degree, terms }
    }

    pub fn pow(&self, e: usize) -> TernaryForm {
        let mut acc = TernaryForm::monomial(&self.field, (0, 0, 0), self.field.one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn eval(&self, p: &[FieldElement; 3]) -> FieldElement {
        let mut acc = self.field.zero();
        for ((i, j, k), c) in &self.terms {
            let term = c
                .mul(&p[0].pow(*i as u64))
                .mul(&p[1].pow(*j as u64))
                .mul(&p[2].pow(*k as u64));
            acc = acc.add(&term);
        }
        acc
    }

    /// Partial derivative along axis 0 (x), 1 (y) or 2 (z).
    /// Degree drops by one; the result may be the zero form.
    pub fn partial(&self, axis: usize) -> TernaryForm {
        assert!(self.degree >= 1, "cannot differentiate a constant form");
        let mut terms = BTreeMap::new();
        for ((i, j, k), c) in &self.terms {
            let (exp, e2): (u16, Exp) = match axis {
                0 => (*i, (i.wrapping_sub(1), *j, *k)),
                1 => (*j, (*i, j.wrapping_sub(1), *k)),
                2 => (*k, (*i, *j, k.wrapping_sub(1))),
                _ => panic!("axis out of range"),
            };
            if exp == 0 {
                continue;
            }
            let v = c.mul(&self.field.from_u64(exp as u64));
            if !v.is_zero() {
                terms.insert(e2, v);
            }
        }
        TernaryForm { field: self.field.clone(), degree: self.degree - 1, terms }
    }

    /// Substitute (x, y, z) <- M * (x, y, z)^T, i.e. the pullback of the
    /// form along the linear map M.
    pub fn compose_linear(&self, m: &Matrix) -> TernaryForm {
        assert_eq!((m.rows(), m.cols()), (3, 3));
        let lin: Vec<TernaryForm> = (0..3)
            .map(|r| {
                let mut f = TernaryForm::zero(&self.field, 1);
                for c in 0..3 {
                    f = f.add(&TernaryForm::variable(&self.field, c).scale(m.at(r, c)));
                }
                f
            })
            .collect();
        // powers of each substituted linear form, up to the degree
        let pows: Vec<Vec<TernaryForm>> = lin
            .iter()
            .map(|l| {
                let mut v = vec![TernaryForm::monomial(&self.field, (0, 0, 0), self.field.one())];
                for i in 1..=self.degree {
                    v.push(v[i - 1].mul(l));
                }
                v
            })
            .collect();
        let mut acc = TernaryForm::zero(&self.field, self.degree);
        for ((i, j, k), c) in &self.terms {
            let t = pows[0][*i as usize]
                .mul(&pows[1][*j as usize])
                .mul(&pows[2][*k as usize])
                .scale(c);
            acc = acc.add(&t);
        }
        acc
    }

    /// Restriction to the line spanned by p0, p1: the binary form
    /// (s, t) -> F(s*p0 + t*p1). Zero iff the line divides F.
    pub fn restrict(&self, p0: &[FieldElement; 3], p1: &[FieldElement; 3]) -> BinaryForm {
        let lines: Vec<BinaryForm> = (0..3)
            .map(|c| BinaryForm::linear(&self.field, &p0[c], &p1[c]))
            .collect();
        let pows: Vec<Vec<BinaryForm>> = lines
            .iter()
            .map(|l| {
                let mut v = vec![BinaryForm::constant(&self.field, self.field.one())];
                for i in 1..=self.degree {
                    v.push(v[i - 1].mul(l));
                }
                v
            })
            .collect();
        let mut acc = BinaryForm::zero(&self.field, self.degree);
        for ((i, j, k), c) in &self.terms {
            let t = pows[0][*i as usize]
                .mul(&pows[1][*j as usize])
                .mul(&pows[2][*k as usize])
                .scale(c);
            acc = acc.add(&t);
        }
        acc
    }

    /// Coefficients as a polynomial in z: entry i is the binary form in
    /// (x, y) of degree `self.degree - i` multiplying z^i.
    pub fn z_coefficients(&self) -> Vec<BinaryForm> {
        let mut out: Vec<BinaryForm> =
            (0..=self.degree).map(|i| BinaryForm::zero(&self.field, self.degree - i)).collect();
        for ((i, j, k), c) in &self.terms {
            out[*k as usize].set(*j as usize, c.clone());
            let _ = i; // exponent of x is degree - i - j, implied by position
        }
        out
    }

    pub fn from_z_coefficients(field: &Field, coeffs: &[BinaryForm]) -> Result<TernaryForm> {
        let zdeg = coeffs
            .iter()
            .rposition(|b| !b.is_zero())
            .ok_or(Error::ZeroForm)?;
        let degree = coeffs[zdeg].degree() + zdeg;
        let mut terms = BTreeMap::new();
        for (k, b) in coeffs.iter().enumerate() {
            if b.is_zero() {
                continue;
            }
            if b.degree() + k != degree {
                return Err(Error::InvalidInput("inhomogeneous z-coefficients".into()));
            }
            for (j, c) in b.coeffs().iter().enumerate() {
                if !c.is_zero() {
                    let i = (degree - k - j) as u16;
                    terms.insert((i, j as u16, k as u16), c.clone());
                }
            }
        }
        Ok(TernaryForm { field: field.clone(), degree, terms })
    }

    /// Exact quotient self / w, found by linear solve on the quotient's
    /// coefficients. InconsistentSystem when w does not divide self.
    pub fn exact_div(&self, w: &TernaryForm) -> Result<TernaryForm> {
        if w.is_zero() {
            return Err(Error::ZeroForm);
        }
        if self.is_zero() {
            return Err(Error::ZeroForm);
        }
        if w.degree > self.degree {
            return Err(Error::InconsistentSystem);
        }
        let dq = self.degree - w.degree;
        let qmons = monomials(dq);
        let mons = monomials(self.degree);
        let mut m = Matrix::zero(&self.field, mons.len(), qmons.len());
        for (row, e) in mons.iter().enumerate() {
            for (col, q) in qmons.iter().enumerate() {
                if e.0 >= q.0 && e.1 >= q.1 && e.2 >= q.2 {
                    *m.at_mut(row, col) = w.coeff((e.0 - q.0, e.1 - q.1, e.2 - q.2));
                }
            }
        }
        let rhs: Vec<FieldElement> = mons.iter().map(|e| self.coeff(*e)).collect();
        let sol = m.solve(&rhs)?;
        let q = TernaryForm::from_terms(
            &self.field,
            dq,
            qmons.into_iter().zip(sol).filter(|(_, c)| !c.is_zero()),
        )?;
        if q.mul(w) != *self {
            return Err(Error::InconsistentSystem);
        }
        Ok(q)
    }
}

/// All exponent triples of a given degree, in a fixed order.
pub fn monomials(degree: usize) -> Vec<Exp> {
    let mut out = vec![];
    for i in 0..=degree {
        for j in 0..=(degree - i) {
            out.push((i as u16, j as u16, (degree - i - j) as u16));
        }
    }
    out
}

/// A homogeneous form in two variables (s, t), stored densely:
/// `coeffs[j]` multiplies s^(m-j) t^j. The zero form keeps its degree.
#[derive(Clone, PartialEq, Eq)]
pub struct BinaryForm {
    field: Field,
    degree: usize,
    coeffs: Vec<FieldElement>,
}

impl fmt::Debug for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0 (deg {})", self.degree);
        }
        let m = self.degree;
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| format!("({c})*s^{}t^{}", m - j, j))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl BinaryForm {
    pub fn zero(field: &Field, degree: usize) -> BinaryForm {
        BinaryForm { field: field.clone(), degree, coeffs: vec![field.zero(); degree + 1] }
    }

    pub fn constant(field: &Field, c: FieldElement) -> BinaryForm {
        BinaryForm { field: field.clone(), degree: 0, coeffs: vec![c] }
    }

    /// a*s + b*t.
    pub fn linear(field: &Field, a: &FieldElement, b: &FieldElement) -> BinaryForm {
        BinaryForm { field: field.clone(), degree: 1, coeffs: vec![a.clone(), b.clone()] }
    }

    pub fn from_coeffs(field: &Field, coeffs: Vec<FieldElement>) -> BinaryForm {
        assert!(!coeffs.is_empty());
        BinaryForm { field: field.clone(), degree: coeffs.len() - 1, coeffs }
    }

    /// Homogenize a univariate polynomial p(t) to the given degree:
    /// s^(m - deg p) times the usual homogenization.
    pub fn from_poly(p: &Poly, degree: usize) -> BinaryForm {
        let field = p.field().clone();
        assert!(p.degree().map(|d| d <= degree).unwrap_or(true), "degree too small");
        let mut coeffs = vec![field.zero(); degree + 1];
        for (j, c) in p.coeffs().iter().enumerate() {
            coeffs[j] = c.clone();
        }
        BinaryForm { field, degree, coeffs }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> FieldElement {
        self.coeffs.get(j).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn set(&mut self, j: usize, c: FieldElement) {
        self.coeffs[j] = c;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &BinaryForm) -> BinaryForm {
        assert_eq!(self.degree, other.degree, "degree mismatch in binary add");
        BinaryForm {
            field: self.field.clone(),
            degree: self.degree,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn sub(&self, other: &BinaryForm) -> BinaryForm {
        assert_eq!(self.degree, other.degree, "degree mismatch in binary sub");
        BinaryForm {
            field: self.field.clone(),
            degree: self.degree,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.sub(b)).collect(),
        }
    }

    pub fn scale(&self, c: &FieldElement) -> BinaryForm {
        BinaryForm {
            field: self.field.clone(),
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|a| a.mul(c)).collect(),
        }
    }

    pub fn mul(&self, other: &BinaryForm) -> BinaryForm {
        let degree = self.degree + other.degree;
        let mut coeffs = vec![self.field.zero(); degree + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
            }
        }
        BinaryForm { field: self.field.clone(), degree, coeffs }
    }

    pub fn pow(&self, e: usize) -> BinaryForm {
        let mut acc = BinaryForm::constant(&self.field, self.field.one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn eval(&self, s: &FieldElement, t: &FieldElement) -> FieldElement {
        let m = self.degree;
        let mut acc = self.field.zero();
        for (j, c) in self.coeffs.iter().enumerate() {
            acc = acc.add(&c.mul(&s.pow((m - j) as u64)).mul(&t.pow(j as u64)));
        }
        acc
    }

    /// Dehomogenization p(t) = B(1, t). The lost information is the
    /// multiplicity of the root (0:1), which is `degree - deg p`.
    pub fn to_poly(&self) -> Poly {
        Poly::from_coeffs(&self.field, self.coeffs.clone())
    }

    /// Multiplicity of the root (0:1), i.e. the power of s dividing B.
    pub fn s_multiplicity(&self) -> usize {
        match self.to_poly().degree() {
            Some(d) => self.degree - d,
            None => self.degree,
        }
    }

    /// Gcd of two binary forms, normalized so the dehomogenization is
    /// monic. gcd of zero forms is the zero form of degree 0 convention-free;
    /// callers must not pass two zero forms.
    pub fn gcd(&self, other: &BinaryForm) -> BinaryForm {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let g = self.to_poly().gcd(&other.to_poly());
        let e = self.s_multiplicity().min(other.s_multiplicity());
        BinaryForm::from_poly(&g, g.degree().unwrap_or(0) + e)
    }

    /// Exact quotient; errors with InconsistentSystem when not divisible.
    pub fn exact_div(&self, other: &BinaryForm) -> Result<BinaryForm> {
        if other.is_zero() {
            return Err(Error::ZeroForm);
        }
        if self.is_zero() {
            if other.degree > self.degree {
                return Err(Error::InconsistentSystem);
            }
            return Ok(BinaryForm::zero(&self.field, self.degree - other.degree));
        }
        if other.degree > self.degree || other.s_multiplicity() > self.s_multiplicity() {
            return Err(Error::InconsistentSystem);
        }
        let (q, r) = self.to_poly().divrem(&other.to_poly())?;
        if !r.is_zero() {
            return Err(Error::InconsistentSystem);
        }
        Ok(BinaryForm::from_poly(&q, self.degree - other.degree))
    }
}

/// Monic univariate polynomial with prescribed roots and multiplicities,
/// with the closed-form identities for the constant and subleading
/// coefficients asserted on the way out.
pub fn reconstruct_from_roots(
    roots: &[(FieldElement, usize)],
    m: usize,
) -> Result<Poly> {
    let field = roots
        .first()
        .map(|(x, _)| x.field().clone())
        .ok_or_else(|| Error::InvalidInput("no roots given".into()))?;
    let total: usize = roots.iter().map(|(_, mult)| *mult).sum();
    if total != m {
        return Err(Error::DegreeMismatch { expected: m, got: total });
    }
    for (i, (a, _)) in roots.iter().enumerate() {
        for (b, _) in &roots[i + 1..] {
            if a == b {
                return Err(Error::DuplicateRoots);
            }
        }
    }
    let mut phi = Poly::one(&field);
    for (x, mult) in roots {
        phi = phi.mul(&Poly::linear_from_root(x).pow(*mult));
    }
    // a_0 = (-1)^m prod X_j^{m_j}
    let mut prod = field.one();
    for (x, mult) in roots {
        prod = prod.mul(&x.pow(*mult as u64));
    }
    if m % 2 == 1 {
        prod = prod.neg();
    }
    if phi.coeff(0) != prod {
        return Err(Error::InvariantViolation("constant coefficient identity failed".into()));
    }
    // a_{m-1} = -sum m_j X_j
    let mut sum = field.zero();
    for (x, mult) in roots {
        sum = sum.add(&x.mul(&field.from_u64(*mult as u64)));
    }
    if phi.coeff(m - 1) != sum.neg() {
        return Err(Error::InvariantViolation("subleading coefficient identity failed".into()));
    }
    Ok(phi)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::rationals()
    }

    fn form(field: &Field, terms: &[((u16, u16, u16), i64)]) -> TernaryForm {
        let degree = terms[0].0 .0 as usize + terms[0].0 .1 as usize + terms[0].0 .2 as usize;
        TernaryForm::from_terms(
            field,
            degree,
            terms.iter().map(|(e, c)| (*e, field.from_i64(*c))),
        )
        .unwrap()
    }

    #[test]
    fn restrict_square_example() {
        // x^2+y^2+z^2-2xy-2yz-2zx on x=0 gives (s-t)^2 under (0:s:t)
        let f = q();
        let c = form(
            &f,
            &[
                ((2, 0, 0), 1),
                ((0, 2, 0), 1),
                ((0, 0, 2), 1),
                ((1, 1, 0), -2),
                ((0, 1, 1), -2),
                ((1, 0, 1), -2),
            ],
        );
        let p0 = [f.from_i64(0), f.from_i64(1), f.from_i64(0)];
        let p1 = [f.from_i64(0), f.from_i64(0), f.from_i64(1)];
        let b = c.restrict(&p0, &p1);
        assert_eq!(b.coeffs(), &[f.from_i64(1), f.from_i64(-2), f.from_i64(1)]);
    }

    #[test]
    fn restrict_contained_line_is_zero() {
        let f = q();
        let x = TernaryForm::variable(&f, 0);
        let g = form(&f, &[((1, 1, 0), 3), ((0, 1, 1), 5)]);
        let c = x.mul(&g);
        let p0 = [f.from_i64(0), f.from_i64(1), f.from_i64(0)];
        let p1 = [f.from_i64(0), f.from_i64(0), f.from_i64(1)];
        assert!(c.restrict(&p0, &p1).is_zero());
    }

    #[test]
    fn restrict_linear_example() {
        // x + 2y + 3z on z=0 under (s:t:0) gives s + 2t
        let f = q();
        let c = form(&f, &[((1, 0, 0), 1), ((0, 1, 0), 2), ((0, 0, 1), 3)]);
        let p0 = [f.from_i64(1), f.from_i64(0), f.from_i64(0)];
        let p1 = [f.from_i64(0), f.from_i64(1), f.from_i64(0)];
        let b = c.restrict(&p0, &p1);
        assert_eq!(b.coeffs(), &[f.from_i64(1), f.from_i64(2)]);
    }

    #[test]
    fn restriction_is_multiplicative() {
        let f7 = Field::prime(7).unwrap();
        let a = form(&f7, &[((2, 0, 0), 1), ((0, 1, 1), 3)]);
        let b = form(&f7, &[((1, 0, 0), 2), ((0, 0, 1), 5)]);
        let p0 = [f7.from_i64(1), f7.from_i64(2), f7.from_i64(3)];
        let p1 = [f7.from_i64(4), f7.from_i64(0), f7.from_i64(1)];
        let lhs = a.mul(&b).restrict(&p0, &p1);
        let rhs = a.restrict(&p0, &p1).mul(&b.restrict(&p0, &p1));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn reconstruct_examples() {
        let f = q();
        // {(1,1),(2,1)} -> X^2 - 3X + 2
        let phi = reconstruct_from_roots(&[(f.from_i64(1), 1), (f.from_i64(2), 1)], 2).unwrap();
        assert_eq!(phi, Poly::from_i64_coeffs(&f, &[2, -3, 1]));
        // {(5,3)} -> (X-5)^3
        let phi = reconstruct_from_roots(&[(f.from_i64(5), 3)], 3).unwrap();
        assert_eq!(phi.coeff(0), f.from_i64(-125));
        assert_eq!(phi.coeff(2), f.from_i64(-15));
        // {(1,2),(-1,2)} -> (X^2-1)^2
        let phi = reconstruct_from_roots(&[(f.from_i64(1), 2), (f.from_i64(-1), 2)], 4).unwrap();
        assert_eq!(phi, Poly::from_i64_coeffs(&f, &[1, 0, -2, 0, 1]));
        assert_eq!(phi.coeff(3), f.from_i64(0));
    }

    #[test]
    fn reconstruct_rejects_bad_input() {
        let f = q();
        assert!(matches!(
            reconstruct_from_roots(&[(f.from_i64(1), 1), (f.from_i64(1), 1)], 2),
            Err(Error::DuplicateRoots)
        ));
        assert!(matches!(
            reconstruct_from_roots(&[(f.from_i64(1), 1)], 2),
            Err(Error::DegreeMismatch { expected: 2, got: 1 })
        ));
    }

    #[test]
    fn exact_div_roundtrip() {
        let f7 = Field::prime(7).unwrap();
        let a = form(&f7, &[((2, 0, 0), 1), ((0, 2, 0), 3), ((0, 1, 1), 1)]);
        let b = form(&f7, &[((1, 0, 0), 2), ((0, 1, 0), 1), ((0, 0, 1), 6)]);
        let prod = a.mul(&b);
        assert_eq!(prod.exact_div(&b).unwrap(), a);
        let off = prod.add(&TernaryForm::monomial(&f7, (3, 0, 0), f7.one()));
        assert!(off.exact_div(&b).is_err());
    }

    #[test]
    fn z_coefficient_roundtrip() {
        let f = q();
        let c = form(&f, &[((2, 0, 0), 1), ((0, 1, 1), -2), ((0, 0, 2), 7)]);
        let zc = c.z_coefficients();
        assert_eq!(zc.len(), 3);
        assert_eq!(TernaryForm::from_z_coefficients(&f, &zc).unwrap(), c);
    }

    #[test]
    fn compose_linear_swap() {
        // swapping x and y maps x^2 + 3yz to y^2 + 3xz
        let f = q();
        let c = form(&f, &[((2, 0, 0), 1), ((0, 1, 1), 3)]);
        let m = Matrix::from_rows(
            &f,
            vec![
                vec![f.from_i64(0), f.from_i64(1), f.from_i64(0)],
                vec![f.from_i64(1), f.from_i64(0), f.from_i64(0)],
                vec![f.from_i64(0), f.from_i64(0), f.from_i64(1)],
            ],
        );
        let expected = form(&f, &[((0, 2, 0), 1), ((1, 0, 1), 3)]);
        assert_eq!(c.compose_linear(&m), expected);
    }
}
