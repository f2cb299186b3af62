//! Projective points, lines, coordinate frames and divisors in the plane,
//! together with smoothness certification and intersection divisors.

use crate::error::{Error, Result};
use crate::field::ext::embed;
use crate::field::{Field, FieldElement};
use crate::forms::TernaryForm;
use crate::matrix::Matrix;

mod intersect;
pub(crate) mod smooth;

pub use intersect::{intersection_divisor, line_divisor, orbit_equivalent};
pub use smooth::{is_smooth, Smoothness};

/// A point of P^2 with coordinates normalized so the last nonzero
/// coordinate is 1; equality is plain structural equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ProjPoint {
    xyz: [FieldElement; 3],
}

impl std::fmt::Debug for ProjPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}:{}:{})", self.xyz[0], self.xyz[1], self.xyz[2])
    }
}

impl ProjPoint {
    pub fn new(xyz: [FieldElement; 3]) -> Result<ProjPoint> {
        let last = xyz
            .iter()
            .rposition(|c| !c.is_zero())
            .ok_or_else(|| Error::InvalidInput("projective point with all coordinates zero".into()))?;
        let inv = xyz[last].inv()?;
        Ok(ProjPoint { xyz: [xyz[0].mul(&inv), xyz[1].mul(&inv), xyz[2].mul(&inv)] })
    }

    pub fn from_i64(field: &Field, x: i64, y: i64, z: i64) -> Result<ProjPoint> {
        ProjPoint::new([field.from_i64(x), field.from_i64(y), field.from_i64(z)])
    }

    pub fn field(&self) -> &Field {
        self.xyz[0].field()
    }

    pub fn coords(&self) -> &[FieldElement; 3] {
        &self.xyz
    }

    pub fn coord(&self, i: usize) -> &FieldElement {
        &self.xyz[i]
    }

    /// Coordinate-wise Frobenius x -> x^q over the subfield of q elements,
    /// applied `times` times.
    pub fn frobenius_over(&self, q_power: u64, times: usize) -> ProjPoint {
        let mut out = self.clone();
        for _ in 0..times {
            out = ProjPoint {
                xyz: [
                    out.xyz[0].pow(q_power),
                    out.xyz[1].pow(q_power),
                    out.xyz[2].pow(q_power),
                ],
            };
        }
        // coordinates stay normalized: 1 and 0 are fixed by x -> x^q
        out
    }

    pub fn embed_into(&self, target: &Field) -> Result<ProjPoint> {
        Ok(ProjPoint {
            xyz: [
                embed(&self.xyz[0], target)?,
                embed(&self.xyz[1], target)?,
                embed(&self.xyz[2], target)?,
            ],
        })
    }
}

/// A line of P^2 given by dual coordinates [a:b:c] (the locus
/// ax + by + cz = 0), normalized like a point, with a cached spanning
/// pair of points.
#[derive(Clone, PartialEq, Eq)]
pub struct Line {
    dual: [FieldElement; 3],
    span: [ProjPoint; 2],
}

impl std::fmt::Debug for Line {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}:{}:{}]", self.dual[0], self.dual[1], self.dual[2])
    }
}

impl Line {
    pub fn from_dual(dual: [FieldElement; 3]) -> Result<Line> {
        let field = dual[0].field().clone();
        let normal = ProjPoint::new(dual)?;
        let [a, b, c] = normal.coords().clone();
        let (p0, p1) = if !c.is_zero() {
            let ci = c.inv()?;
            (
                ProjPoint::new([field.one(), field.zero(), a.neg().mul(&ci)])?,
                ProjPoint::new([field.zero(), field.one(), b.neg().mul(&ci)])?,
            )
        } else if !b.is_zero() {
            let bi = b.inv()?;
            (
                ProjPoint::new([field.one(), a.neg().mul(&bi), field.zero()])?,
                ProjPoint::new([field.zero(), field.zero(), field.one()])?,
            )
        } else {
            (
                ProjPoint::new([field.zero(), field.one(), field.zero()])?,
                ProjPoint::new([field.zero(), field.zero(), field.one()])?,
            )
        };
        Ok(Line { dual: normal.coords().clone(), span: [p0, p1] })
    }

    pub fn from_dual_i64(field: &Field, a: i64, b: i64, c: i64) -> Result<Line> {
        Line::from_dual([field.from_i64(a), field.from_i64(b), field.from_i64(c)])
    }

    pub fn through_points(p: &ProjPoint, q: &ProjPoint) -> Result<Line> {
        Line::from_dual(cross(p.coords(), q.coords()))
    }

    /// Intersection point of two distinct lines.
    pub fn meet(&self, other: &Line) -> Result<ProjPoint> {
        ProjPoint::new(cross(&self.dual, &other.dual))
    }

    pub fn field(&self) -> &Field {
        self.dual[0].field()
    }

    pub fn dual(&self) -> &[FieldElement; 3] {
        &self.dual
    }

    pub fn span(&self) -> &[ProjPoint; 2] {
        &self.span
    }

    pub fn contains(&self, p: &ProjPoint) -> bool {
        self.eval(p).is_zero()
    }

    pub fn eval(&self, p: &ProjPoint) -> FieldElement {
        let mut acc = self.field().zero();
        for i in 0..3 {
            acc = acc.add(&self.dual[i].mul(p.coord(i)));
        }
        acc
    }

    /// Point at parameter (s:t) on the cached spanning pair.
    pub fn point_at(&self, s: &FieldElement, t: &FieldElement) -> Result<ProjPoint> {
        let p0 = self.span[0].coords();
        let p1 = self.span[1].coords();
        ProjPoint::new([
            p0[0].mul(s).add(&p1[0].mul(t)),
            p0[1].mul(s).add(&p1[1].mul(t)),
            p0[2].mul(s).add(&p1[2].mul(t)),
        ])
    }

    /// Same, with the spanning points first embedded into a larger field.
    pub fn point_at_in(&self, s: &FieldElement, t: &FieldElement, target: &Field) -> Result<ProjPoint> {
        let p0 = self.span[0].embed_into(target)?;
        let p1 = self.span[1].embed_into(target)?;
        let p0 = p0.coords();
        let p1 = p1.coords();
        ProjPoint::new([
            p0[0].mul(s).add(&p1[0].mul(t)),
            p0[1].mul(s).add(&p1[1].mul(t)),
            p0[2].mul(s).add(&p1[2].mul(t)),
        ])
    }

    /// The line as a degree-1 form.
    pub fn as_form(&self) -> TernaryForm {
        let field = self.field().clone();
        TernaryForm::from_terms(
            &field,
            1,
            [
                ((1, 0, 0), self.dual[0].clone()),
                ((0, 1, 0), self.dual[1].clone()),
                ((0, 0, 1), self.dual[2].clone()),
            ],
        )
        .expect("linear form")
    }
}

fn cross(u: &[FieldElement; 3], v: &[FieldElement; 3]) -> [FieldElement; 3] {
    [
        u[1].mul(&v[2]).sub(&u[2].mul(&v[1])),
        u[2].mul(&v[0]).sub(&u[0].mul(&v[2])),
        u[0].mul(&v[1]).sub(&u[1].mul(&v[0])),
    ]
}

/// Effective divisor supported on a line; points may live in extension
/// fields of the line's field, one entry per geometric point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorOnLine {
    line: Line,
    entries: Vec<(ProjPoint, usize)>,
}

impl DivisorOnLine {
    pub fn new(line: Line, entries: Vec<(ProjPoint, usize)>) -> Result<DivisorOnLine> {
        for (i, (p, m)) in entries.iter().enumerate() {
            if *m == 0 {
                return Err(Error::InvalidInput("zero multiplicity in divisor".into()));
            }
            let on_line = if p.field() == line.field() {
                line.contains(p)
            } else {
                let dual = [
                    embed(&line.dual[0], p.field())?,
                    embed(&line.dual[1], p.field())?,
                    embed(&line.dual[2], p.field())?,
                ];
                dual[0]
                    .mul(p.coord(0))
                    .add(&dual[1].mul(p.coord(1)))
                    .add(&dual[2].mul(p.coord(2)))
                    .is_zero()
            };
            if !on_line {
                return Err(Error::InvalidInput("divisor point off its line".into()));
            }
            for (q, _) in &entries[i + 1..] {
                if p == q {
                    return Err(Error::InvalidInput("repeated point in divisor".into()));
                }
            }
        }
        Ok(DivisorOnLine { line, entries })
    }

    pub fn line(&self) -> &Line {
        &self.line
    }

    pub fn entries(&self) -> &[(ProjPoint, usize)] {
        &self.entries
    }

    pub fn degree(&self) -> usize {
        self.entries.iter().map(|(_, m)| m).sum()
    }

    pub fn multiplicity_of(&self, p: &ProjPoint) -> usize {
        self.entries
            .iter()
            .find(|(q, _)| q == p)
            .map(|(_, m)| *m)
            .unwrap_or(0)
    }
}

/// One point of a divisor on a curve: a representative of a Galois orbit,
/// weighted by its residue field degree over the curve's base field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorEntry {
    pub point: ProjPoint,
    pub mult: usize,
    pub resdeg: usize,
}

/// Effective divisor on a smooth curve; entries are orbit representatives
/// and the degree counts mult * resdeg per entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorOnCurve {
    curve: TernaryForm,
    entries: Vec<DivisorEntry>,
}

impl DivisorOnCurve {
    pub fn new(curve: TernaryForm, entries: Vec<DivisorEntry>) -> DivisorOnCurve {
        DivisorOnCurve { curve, entries }
    }

    pub fn curve(&self) -> &TernaryForm {
        &self.curve
    }

    pub fn entries(&self) -> &[DivisorEntry] {
        &self.entries
    }

    pub fn degree(&self) -> usize {
        self.entries.iter().map(|e| e.mult * e.resdeg).sum()
    }

    /// Multiplicity at the orbit of a point (0 when absent).
    pub fn multiplicity_at(&self, p: &ProjPoint) -> Result<usize> {
        let base = self.curve.field();
        for e in &self.entries {
            if orbit_equivalent(&e.point, p, base)? {
                return Ok(e.mult);
            }
        }
        Ok(0)
    }

    /// self - other, defined only when other <= self pointwise.
    pub fn subtract(&self, other: &DivisorOnCurve) -> Result<DivisorOnCurve> {
        let base = self.curve.field();
        let mut out = vec![];
        let mut seen = vec![false; other.entries.len()];
        for e in &self.entries {
            let mut m = e.mult;
            for (i, o) in other.entries.iter().enumerate() {
                if orbit_equivalent(&e.point, &o.point, base)? {
                    if o.mult > m {
                        return Err(Error::InvalidInput(
                            "divisor subtraction with negative result".into(),
                        ));
                    }
                    m -= o.mult;
                    seen[i] = true;
                    break;
                }
            }
            if m > 0 {
                out.push(DivisorEntry { point: e.point.clone(), mult: m, resdeg: e.resdeg });
            }
        }
        if !seen.iter().all(|s| *s) {
            return Err(Error::InvalidInput(
                "divisor subtraction with point outside support".into(),
            ));
        }
        Ok(DivisorOnCurve { curve: self.curve.clone(), entries: out })
    }

    /// Pointwise minimum of two divisors on the same curve.
    pub fn min_with(&self, other: &DivisorOnCurve) -> Result<DivisorOnCurve> {
        let base = self.curve.field();
        let mut out = vec![];
        for e in &self.entries {
            for o in &other.entries {
                if orbit_equivalent(&e.point, &o.point, base)? {
                    let m = e.mult.min(o.mult);
                    if m > 0 {
                        out.push(DivisorEntry {
                            point: e.point.clone(),
                            mult: m,
                            resdeg: e.resdeg,
                        });
                    }
                    break;
                }
            }
        }
        Ok(DivisorOnCurve { curve: self.curve.clone(), entries: out })
    }

    /// Sum of two divisors on the same curve.
    pub fn add(&self, other: &DivisorOnCurve) -> Result<DivisorOnCurve> {
        let base = self.curve.field();
        let mut entries = self.entries.clone();
        for o in &other.entries {
            let mut merged = false;
            for e in entries.iter_mut() {
                if orbit_equivalent(&e.point, &o.point, base)? {
                    e.mult += o.mult;
                    merged = true;
                    break;
                }
            }
            if !merged {
                entries.push(o.clone());
            }
        }
        Ok(DivisorOnCurve { curve: self.curve.clone(), entries })
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Which reference configuration a frame maps to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FrameCase {
    /// Lines in general position, sent to x=0, y=0, z=0.
    Triangle,
    /// Lines through a common point, sent to y-z=0, y=0, z=0.
    Concurrent,
}

/// Invertible change of coordinates sending a triple of lines to the
/// reference configuration of its case. Points map by X' = N X, forms by
/// composition with the inverse.
#[derive(Clone, Debug)]
pub struct ProjFrame {
    n: Matrix,
    n_inv: Matrix,
}

impl ProjFrame {
    pub fn from_matrix(n: Matrix) -> Result<ProjFrame> {
        let n_inv = n.inverse().ok_or(Error::InvariantViolation("singular frame".into()))?;
        Ok(ProjFrame { n, n_inv })
    }

    pub fn identity(field: &Field) -> ProjFrame {
        let id = Matrix::identity(field, 3);
        ProjFrame { n: id.clone(), n_inv: id }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.n
    }

    pub fn apply_point(&self, p: &ProjPoint) -> Result<ProjPoint> {
        let v = self.n.mul_vec(p.coords());
        ProjPoint::new([v[0].clone(), v[1].clone(), v[2].clone()])
    }

    pub fn pull_point(&self, p: &ProjPoint) -> Result<ProjPoint> {
        let v = self.n_inv.mul_vec(p.coords());
        ProjPoint::new([v[0].clone(), v[1].clone(), v[2].clone()])
    }

    /// Image of a form under the frame: F' with F'(N X) = F(X).
    pub fn apply_form(&self, f: &TernaryForm) -> TernaryForm {
        f.compose_linear(&self.n_inv)
    }

    pub fn pull_form(&self, f: &TernaryForm) -> TernaryForm {
        f.compose_linear(&self.n)
    }

    pub fn apply_line(&self, l: &Line) -> Result<Line> {
        let f = self.apply_form(&l.as_form());
        Line::from_dual([f.coeff((1, 0, 0)), f.coeff((0, 1, 0)), f.coeff((0, 0, 1))])
    }
}

/// Frame sending three pairwise distinct lines to the reference
/// configuration; detects whether they form a triangle or a pencil.
pub fn coordinate_frame(l1: &Line, l2: &Line, l3: &Line) -> Result<(ProjFrame, FrameCase)> {
    let field = l1.field().clone();
    if l1.dual == l2.dual || l1.dual == l3.dual || l2.dual == l3.dual {
        return Err(Error::CoincidentLines);
    }
    let rows: Vec<Vec<FieldElement>> =
        [l1, l2, l3].iter().map(|l| l.dual.to_vec()).collect();
    let n = Matrix::from_rows(&field, rows);
    if !n.det().is_zero() {
        return Ok((ProjFrame::from_matrix(n)?, FrameCase::Triangle));
    }
    // rank 2: l1 = c2 l2 + c3 l3 with c2, c3 both nonzero
    let mut sys = Matrix::zero(&field, 3, 2);
    for r in 0..3 {
        *sys.at_mut(r, 0) = l2.dual[r].clone();
        *sys.at_mut(r, 1) = l3.dual[r].clone();
    }
    let c = sys.solve(&l1.dual.to_vec())?;
    if c[0].is_zero() || c[1].is_zero() {
        return Err(Error::InvariantViolation(
            "dependent pair among pairwise distinct lines".into(),
        ));
    }
    let r2: Vec<FieldElement> = l2.dual.iter().map(|a| a.mul(&c[0])).collect();
    let r3: Vec<FieldElement> = l3.dual.iter().map(|a| a.mul(&c[1]).neg()).collect();
    for e in 0..3 {
        let mut r1 = vec![field.zero(); 3];
        r1[e] = field.one();
        let n = Matrix::from_rows(&field, vec![r1, r2.clone(), r3.clone()]);
        if !n.det().is_zero() {
            return Ok((ProjFrame::from_matrix(n)?, FrameCase::Concurrent));
        }
    }
    Err(Error::InvariantViolation("no basis row completes the concurrent frame".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::rationals()
    }

    #[test]
    fn point_normalization() {
        let f = q();
        let p = ProjPoint::from_i64(&f, 2, 4, 6).unwrap();
        assert_eq!(p.coords()[2], f.one());
        assert_eq!(p.coords()[0], f.fraction(1, 3).unwrap());
        let inf = ProjPoint::from_i64(&f, 3, 6, 0).unwrap();
        assert_eq!(inf.coords()[1], f.one());
        assert!(ProjPoint::from_i64(&f, 0, 0, 0).is_err());
    }

    #[test]
    fn line_span_and_meet() {
        let f = q();
        let l = Line::from_dual_i64(&f, 1, 2, 3).unwrap();
        for p in l.span() {
            assert!(l.contains(p));
        }
        let m = Line::from_dual_i64(&f, 1, 0, 0).unwrap();
        let p = l.meet(&m).unwrap();
        assert!(l.contains(&p) && m.contains(&p));
        let through = Line::through_points(&l.span()[0], &l.span()[1]).unwrap();
        assert_eq!(through, l);
    }

    #[test]
    fn frame_reference_triangle() {
        let f = q();
        let l1 = Line::from_dual_i64(&f, 1, 0, 0).unwrap();
        let l2 = Line::from_dual_i64(&f, 0, 1, 0).unwrap();
        let l3 = Line::from_dual_i64(&f, 0, 0, 1).unwrap();
        let (frame, case) = coordinate_frame(&l1, &l2, &l3).unwrap();
        assert_eq!(case, FrameCase::Triangle);
        assert_eq!(frame.matrix().at(0, 0), &f.one());
        assert_eq!(frame.apply_line(&l1).unwrap(), l1);
    }

    #[test]
    fn frame_reference_concurrent() {
        let f = q();
        let l1 = Line::from_dual_i64(&f, 0, 1, -1).unwrap();
        let l2 = Line::from_dual_i64(&f, 0, 1, 0).unwrap();
        let l3 = Line::from_dual_i64(&f, 0, 0, 1).unwrap();
        let (frame, case) = coordinate_frame(&l1, &l2, &l3).unwrap();
        assert_eq!(case, FrameCase::Concurrent);
        assert_eq!(frame.apply_line(&l1).unwrap(), l1);
        assert_eq!(frame.apply_line(&l2).unwrap(), l2);
        assert_eq!(frame.apply_line(&l3).unwrap(), l3);
    }

    #[test]
    fn frame_general_concurrent_triple() {
        let f = q();
        let l1 = Line::from_dual_i64(&f, 1, 0, 0).unwrap();
        let l2 = Line::from_dual_i64(&f, 0, 1, 0).unwrap();
        let l3 = Line::from_dual_i64(&f, 1, 1, 0).unwrap();
        // common point (0:0:1)
        let (frame, case) = coordinate_frame(&l3, &l1, &l2).unwrap();
        assert_eq!(case, FrameCase::Concurrent);
        let ref1 = Line::from_dual_i64(&f, 0, 1, -1).unwrap();
        let ref2 = Line::from_dual_i64(&f, 0, 1, 0).unwrap();
        let ref3 = Line::from_dual_i64(&f, 0, 0, 1).unwrap();
        assert_eq!(frame.apply_line(&l3).unwrap(), ref1);
        assert_eq!(frame.apply_line(&l1).unwrap(), ref2);
        assert_eq!(frame.apply_line(&l2).unwrap(), ref3);
    }

    #[test]
    fn frame_rejects_coincident() {
        let f = q();
        let l1 = Line::from_dual_i64(&f, 1, 2, 3).unwrap();
        let l2 = Line::from_dual_i64(&f, 2, 4, 6).unwrap();
        let l3 = Line::from_dual_i64(&f, 0, 0, 1).unwrap();
        assert!(matches!(coordinate_frame(&l1, &l2, &l3), Err(Error::CoincidentLines)));
    }

    #[test]
    fn frame_form_transport_roundtrip() {
        let f7 = Field::prime(7).unwrap();
        let l1 = Line::from_dual_i64(&f7, 1, 2, 3).unwrap();
        let l2 = Line::from_dual_i64(&f7, 0, 1, 5).unwrap();
        let l3 = Line::from_dual_i64(&f7, 1, 0, 1).unwrap();
        let (frame, _) = coordinate_frame(&l1, &l2, &l3).unwrap();
        let c = TernaryForm::from_terms(
            &f7,
            2,
            [((2, 0, 0), f7.from_i64(1)), ((0, 1, 1), f7.from_i64(3))],
        )
        .unwrap();
        let moved = frame.apply_form(&c);
        assert_eq!(frame.pull_form(&moved), c);
        // incidence preserved
        let p = l1.span()[0].clone();
        let fp = frame.apply_point(&p).unwrap();
        assert!(frame.apply_line(&l1).unwrap().contains(&fp));
    }
}
