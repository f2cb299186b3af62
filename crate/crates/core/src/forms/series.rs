//! Truncated power series and local branch expansions of a smooth curve
//! point, the engine behind intersection multiplicities.

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::forms::TernaryForm;

/// Power series known exactly up to (excluding) its truncation order.
/// Arithmetic never reads coefficients past the order; products carry the
/// minimum of the operands' orders.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    field: Field,
    coeffs: Vec<FieldElement>, // c_0 .. c_{N-1}
}

impl TruncatedSeries {
    pub fn zero(field: &Field, order: usize) -> TruncatedSeries {
        TruncatedSeries { field: field.clone(), coeffs: vec![field.zero(); order] }
    }

    pub fn constant(c: FieldElement, order: usize) -> TruncatedSeries {
        let field = c.field().clone();
        let mut s = TruncatedSeries::zero(&field, order);
        s.coeffs[0] = c;
        s
    }

    pub fn from_coeffs(field: &Field, coeffs: Vec<FieldElement>) -> TruncatedSeries {
        assert!(!coeffs.is_empty());
        TruncatedSeries { field: field.clone(), coeffs }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, i: usize) -> &FieldElement {
        &self.coeffs[i]
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn truncate(&self, order: usize) -> TruncatedSeries {
        assert!(order <= self.order(), "cannot extend a series by truncation");
        TruncatedSeries { field: self.field.clone(), coeffs: self.coeffs[..order].to_vec() }
    }

    pub fn add(&self, other: &TruncatedSeries) -> TruncatedSeries {
        let n = self.order().min(other.order());
        TruncatedSeries {
            field: self.field.clone(),
            coeffs: (0..n).map(|i| self.coeffs[i].add(&other.coeffs[i])).collect(),
        }
    }

    pub fn sub(&self, other: &TruncatedSeries) -> TruncatedSeries {
        let n = self.order().min(other.order());
        TruncatedSeries {
            field: self.field.clone(),
            coeffs: (0..n).map(|i| self.coeffs[i].sub(&other.coeffs[i])).collect(),
        }
    }

    pub fn scale(&self, c: &FieldElement) -> TruncatedSeries {
        TruncatedSeries {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|a| a.mul(c)).collect(),
        }
    }

    pub fn mul(&self, other: &TruncatedSeries) -> TruncatedSeries {
        let n = self.order().min(other.order());
        let mut coeffs = vec![self.field.zero(); n];
        for (i, a) in self.coeffs.iter().take(n).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(n - i).enumerate() {
                coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
            }
        }
        TruncatedSeries { field: self.field.clone(), coeffs }
    }

    /// Multiplicative inverse; requires a unit constant term.
    pub fn inv(&self) -> Result<TruncatedSeries> {
        let c0 = self.coeffs[0].inv().map_err(|_| Error::DivisionByZero)?;
        let n = self.order();
        let mut out = vec![self.field.zero(); n];
        out[0] = c0.clone();
        for i in 1..n {
            let mut acc = self.field.zero();
            for j in 1..=i {
                acc = acc.add(&self.coeffs[j].mul(&out[i - j]));
            }
            out[i] = acc.mul(&c0).neg();
        }
        Ok(TruncatedSeries { field: self.field.clone(), coeffs: out })
    }

    /// Index of the first nonzero coefficient, None if all stored
    /// coefficients vanish.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.valuation().is_none()
    }

    fn extended(&self, order: usize) -> TruncatedSeries {
        // only valid when the tail is known to be exact (used internally
        // by Newton lifting, where precision genuinely doubles)
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order, self.field.zero());
        TruncatedSeries { field: self.field.clone(), coeffs }
    }
}

/// The affine chart used for a branch expansion; names the coordinate set
/// to 1. Affine coordinates are the remaining two in (x, y, z) order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Chart {
    X,
    Y,
    Z,
}

impl Chart {
    /// Indices of (first affine coordinate, second affine coordinate, chart coordinate).
    pub fn axes(self) -> (usize, usize, usize) {
        match self {
            Chart::X => (1, 2, 0),
            Chart::Y => (0, 2, 1),
            Chart::Z => (0, 1, 2),
        }
    }
}

/// Evaluate a form at (u(t), v(t)) with the chart coordinate set to 1.
fn eval_on_series(
    f: &TernaryForm,
    chart: Chart,
    u: &TruncatedSeries,
    v: &TruncatedSeries,
) -> TruncatedSeries {
    let field = f.field().clone();
    let n = u.order().min(v.order());
    let one = TruncatedSeries::constant(field.one(), n);
    let mut pow_u = vec![one.clone()];
    let mut pow_v = vec![one.clone()];
    for i in 1..=f.degree() {
        pow_u.push(pow_u[i - 1].mul(u));
        pow_v.push(pow_v[i - 1].mul(v));
    }
    let (a0, a1, _) = chart.axes();
    let mut acc = TruncatedSeries::zero(&field, n);
    for ((i, j, k), c) in f.terms() {
        let exps = [*i as usize, *j as usize, *k as usize];
        let t = pow_u[exps[a0]].mul(&pow_v[exps[a1]]).scale(c);
        acc = acc.add(&t);
    }
    acc
}

/// Local parametrization t -> (u(t), v(t)) of the unique branch of C at a
/// smooth point P, exact modulo t^N: C(u(t), v(t), 1) = 0 mod t^N in the
/// returned chart. The chart is the first of z, y, x in which P's chart
/// coordinate and one of the matching partials of C are nonzero.
pub fn branch_expansion(
    c: &TernaryForm,
    p: &[FieldElement; 3],
    n: usize,
) -> Result<(Chart, TruncatedSeries, TruncatedSeries)> {
    let field = c.field().clone();
    assert!(n >= 1);
    if c.is_zero() {
        return Err(Error::ZeroForm);
    }
    if !c.eval(p).is_zero() {
        return Err(Error::PointNotOnCurve);
    }
    let partials = [c.partial(0), c.partial(1), c.partial(2)];
    let grad: Vec<FieldElement> = partials.iter().map(|d| d.eval(p)).collect();
    for chart in [Chart::Z, Chart::Y, Chart::X] {
        let (a0, a1, cc) = chart.axes();
        if p[cc].is_zero() || (grad[a0].is_zero() && grad[a1].is_zero()) {
            continue;
        }
        // dependent affine variable: prefer the second when its partial allows
        let (dep, free) = if !grad[a1].is_zero() { (a1, a0) } else { (a0, a1) };
        let scale = p[cc].inv()?;
        let u0 = p[free].mul(&scale);
        let v0 = p[dep].mul(&scale);
        let dep_partial = &partials[dep];

        let mut v = TruncatedSeries::constant(v0, 1);
        let mut prec = 1usize;
        while prec < n {
            prec = (prec * 2).min(n);
            let u = free_series(&field, &u0, prec);
            let vk = v.extended(prec);
            let fv = eval_on_series(dep_partial, chart, &pick(&u, &vk, free, dep, a0), &pick(&u, &vk, free, dep, a1));
            let fres = eval_on_series(c, chart, &pick(&u, &vk, free, dep, a0), &pick(&u, &vk, free, dep, a1));
            v = vk.sub(&fres.mul(&fv.inv()?));
        }
        let u = free_series(&field, &u0, n);
        let v = v.extended(n);
        let su = pick(&u, &v, free, dep, a0);
        let sv = pick(&u, &v, free, dep, a1);
        let residual = eval_on_series(c, chart, &su, &sv);
        if !residual.is_zero() {
            return Err(Error::InvariantViolation("branch lift failed to converge".into()));
        }
        return Ok((chart, su, sv));
    }
    Err(Error::SingularPoint)
}

fn free_series(field: &Field, u0: &FieldElement, order: usize) -> TruncatedSeries {
    let mut s = TruncatedSeries::constant(u0.clone(), order);
    if order > 1 {
        let one = field.one();
        s = TruncatedSeries::from_coeffs(field, {
            let mut c = s.coeffs().to_vec();
            c[1] = one;
            c
        });
    }
    s
}

/// Route (u, v) = (free, dep) series to the chart's (first, second)
/// affine slots.
fn pick(
    u: &TruncatedSeries,
    v: &TruncatedSeries,
    free: usize,
    dep: usize,
    want: usize,
) -> TruncatedSeries {
    if want == free {
        u.clone()
    } else {
        assert_eq!(want, dep);
        v.clone()
    }
}

/// Intersection multiplicity of G and C at P, where C is smooth at P.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Multiplicity {
    Finite(usize),
    Infinite,
}

impl Multiplicity {
    pub fn finite(self) -> Option<usize> {
        match self {
            Multiplicity::Finite(m) => Some(m),
            Multiplicity::Infinite => None,
        }
    }
}

/// Valuation of G along the branch of C at P. Vanishing through the full
/// Bezout bound deg G * deg C certifies a shared component through P.
pub fn intersection_multiplicity(
    g: &TernaryForm,
    c: &TernaryForm,
    p: &[FieldElement; 3],
) -> Result<Multiplicity> {
    if g.is_zero() {
        return Err(Error::ZeroForm);
    }
    let bound = g.degree() * c.degree();
    let n = bound + 1;
    let (chart, su, sv) = branch_expansion(c, p, n)?;
    let series = eval_on_series(g, chart, &su, &sv);
    match series.valuation() {
        Some(v) => Ok(Multiplicity::Finite(v)),
        None => Ok(Multiplicity::Infinite),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::TernaryForm;

    fn q() -> Field {
        Field::rationals()
    }

    fn conic(f: &Field) -> TernaryForm {
        // yz - x^2
        TernaryForm::from_terms(
            f,
            2,
            [((0, 1, 1), f.one()), ((2, 0, 0), f.from_i64(-1))],
        )
        .unwrap()
    }

    #[test]
    fn series_inverse() {
        let f = Field::prime(7).unwrap();
        let s = TruncatedSeries::from_coeffs(&f, vec![f.from_i64(2), f.from_i64(3), f.from_i64(1)]);
        let inv = s.inv().unwrap();
        let prod = s.mul(&inv);
        assert_eq!(prod.coeff(0), &f.one());
        assert!(prod.coeff(1).is_zero());
        assert!(prod.coeff(2).is_zero());
    }

    #[test]
    fn parabola_branch() {
        let f = q();
        let c = conic(&f);
        let p = [f.zero(), f.zero(), f.one()];
        let (chart, x, y) = branch_expansion(&c, &p, 5).unwrap();
        assert_eq!(chart, Chart::Z);
        // (t, t^2)
        assert_eq!(x.coeffs()[..3], [f.zero(), f.one(), f.zero()]);
        assert_eq!(y.coeffs()[..3], [f.zero(), f.zero(), f.one()]);
    }

    #[test]
    fn fermat_cubic_branch_at_infinity() {
        let f = q();
        let c = TernaryForm::from_terms(
            &f,
            3,
            [((3, 0, 0), f.one()), ((0, 3, 0), f.one()), ((0, 0, 3), f.one())],
        )
        .unwrap();
        let p = [f.one(), f.from_i64(-1), f.zero()];
        let (chart, su, sv) = branch_expansion(&c, &p, 3).unwrap();
        let res = eval_on_series(&c, chart, &su, &sv);
        assert!(res.is_zero());
    }

    #[test]
    fn branch_rejects_off_curve_point() {
        let f = q();
        let c = conic(&f);
        let p = [f.one(), f.from_i64(2), f.one()];
        assert!(matches!(branch_expansion(&c, &p, 4), Err(Error::PointNotOnCurve)));
    }

    #[test]
    fn multiplicities_on_conic() {
        let f = q();
        let c = conic(&f);
        let p = [f.zero(), f.zero(), f.one()];
        let y = TernaryForm::variable(&f, 1);
        let x = TernaryForm::variable(&f, 0);
        assert_eq!(intersection_multiplicity(&y, &c, &p).unwrap(), Multiplicity::Finite(2));
        assert_eq!(intersection_multiplicity(&x, &c, &p).unwrap(), Multiplicity::Finite(1));
        let shared = c.mul(&x);
        assert_eq!(intersection_multiplicity(&shared, &c, &p).unwrap(), Multiplicity::Infinite);
    }

    #[test]
    fn multiplicity_is_additive() {
        let f = q();
        let c = conic(&f);
        let p = [f.zero(), f.zero(), f.one()];
        let y = TernaryForm::variable(&f, 1);
        let x = TernaryForm::variable(&f, 0);
        let prod = x.mul(&y);
        assert_eq!(intersection_multiplicity(&prod, &c, &p).unwrap(), Multiplicity::Finite(3));
    }
}
