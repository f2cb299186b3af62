//! Carnot-type existence criteria for curves with prescribed divisors on
//! three lines, and the constructions they certify: the closed-form
//! product/sum tests, inversion of the test for one free point, the
//! linear-system construction of a witness curve, and smooth sampling.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::ext::{compositum, embed, project};
use crate::field::{Field, FieldElement};
use crate::forms::{monomials, BinaryForm, TernaryForm};
use crate::geometry::smooth::{is_smooth, random_scalar, Smoothness};
use crate::geometry::{
    coordinate_frame, line_divisor, DivisorOnLine, FrameCase, Line, ProjFrame, ProjPoint,
};
use crate::matrix::Matrix;

/// Which of the three criteria applies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CarnotCase {
    /// Lines in general position, all divisor points away from the corners.
    Triangle,
    /// General position, but D1 and D2 share the corner L1 n L2 as a
    /// simple point; alpha fixes the tangent alpha*x + y = 0 there, in
    /// frame coordinates.
    TangentCorner { alpha: FieldElement },
    /// All three lines through one point.
    Concurrent,
}

/// The value whose comparison decides existence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CarnotValue {
    /// Compared against (-1)^m.
    Product(FieldElement),
    /// Compared against 0.
    Sum(FieldElement),
}

/// Three lines with prescribed divisors of a common degree m, validated
/// against the hypotheses of the matching criterion at construction.
#[derive(Clone, Debug)]
pub struct CarnotInstance {
    lines: [Line; 3],
    divisors: [DivisorOnLine; 3],
    case: CarnotCase,
    frame: ProjFrame,
    m: usize,
}

fn on_line(l: &Line, p: &ProjPoint) -> Result<bool> {
    let dual = [
        embed(&l.dual()[0], p.field())?,
        embed(&l.dual()[1], p.field())?,
        embed(&l.dual()[2], p.field())?,
    ];
    Ok(dual[0]
        .mul(p.coord(0))
        .add(&dual[1].mul(p.coord(1)))
        .add(&dual[2].mul(p.coord(2)))
        .is_zero())
}

fn frame_point(frame: &ProjFrame, p: &ProjPoint) -> Result<ProjPoint> {
    if p.field() == frame.matrix().field() {
        return frame.apply_point(p);
    }
    let mut big = Matrix::zero(p.field(), 3, 3);
    for r in 0..3 {
        for c in 0..3 {
            *big.at_mut(r, c) = embed(frame.matrix().at(r, c), p.field())?;
        }
    }
    let v = big.mul_vec(p.coords());
    ProjPoint::new([v[0].clone(), v[1].clone(), v[2].clone()])
}

impl CarnotInstance {
    pub fn new(
        lines: [Line; 3],
        divisors: [DivisorOnLine; 3],
        case: CarnotCase,
    ) -> Result<CarnotInstance> {
        let m = divisors[0].degree();
        if m == 0 {
            return Err(Error::InvalidInput("divisors must have positive degree".into()));
        }
        for (l, d) in lines.iter().zip(&divisors) {
            if d.line() != l {
                return Err(Error::InvariantViolation("divisor attached to the wrong line".into()));
            }
            if d.degree() != m {
                return Err(Error::InvariantViolation("divisor degrees disagree".into()));
            }
        }
        let (frame, frame_case) = coordinate_frame(&lines[0], &lines[1], &lines[2])?;
        let expect_concurrent = matches!(case, CarnotCase::Concurrent);
        if expect_concurrent != matches!(frame_case, FrameCase::Concurrent) {
            return Err(Error::InvariantViolation(
                "line configuration does not match the requested case".into(),
            ));
        }
        let inst = CarnotInstance { lines, divisors, case, frame, m };
        inst.check_disjointness()?;
        Ok(inst)
    }

    fn check_disjointness(&self) -> Result<()> {
        match &self.case {
            CarnotCase::Triangle | CarnotCase::Concurrent => {
                for i in 0..3 {
                    for j in 0..3 {
                        if i == j {
                            continue;
                        }
                        for (p, _) in self.divisors[i].entries() {
                            if on_line(&self.lines[j], p)? {
                                return Err(Error::InvariantViolation(format!(
                                    "a point of D{} lies on L{}",
                                    i + 1,
                                    j + 1
                                )));
                            }
                        }
                    }
                }
            }
            CarnotCase::TangentCorner { alpha } => {
                if alpha.is_zero() {
                    return Err(Error::InvariantViolation("tangent slope alpha must be nonzero".into()));
                }
                let corner = self.lines[0].meet(&self.lines[1])?;
                for i in 0..2 {
                    if self.divisors[i].multiplicity_of(&corner) != 1 {
                        return Err(Error::InvariantViolation(
                            "the shared corner must appear simply in D1 and D2".into(),
                        ));
                    }
                    for (p, _) in self.divisors[i].entries() {
                        if p == &corner {
                            continue;
                        }
                        for j in 0..3 {
                            if j != i && on_line(&self.lines[j], p)? {
                                return Err(Error::InvariantViolation(format!(
                                    "a point of D{} lies on L{}",
                                    i + 1,
                                    j + 1
                                )));
                            }
                        }
                    }
                }
                for (p, _) in self.divisors[2].entries() {
                    for j in 0..2 {
                        if on_line(&self.lines[j], p)? {
                            return Err(Error::InvariantViolation(format!(
                                "a point of D3 lies on L{}",
                                j + 1
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn degree(&self) -> usize {
        self.m
    }

    pub fn lines(&self) -> &[Line; 3] {
        &self.lines
    }

    pub fn divisors(&self) -> &[DivisorOnLine; 3] {
        &self.divisors
    }

    pub fn case(&self) -> &CarnotCase {
        &self.case
    }

    pub fn frame(&self) -> &ProjFrame {
        &self.frame
    }

    fn base_field(&self) -> &Field {
        self.lines[0].field()
    }

    /// Smallest field containing every divisor point.
    fn value_field(&self) -> Result<Field> {
        let mut f = self.base_field().clone();
        for d in &self.divisors {
            for (p, _) in d.entries() {
                f = compositum(&f, p.field())?;
            }
        }
        Ok(f)
    }

    fn corner_in_frame(&self) -> Result<ProjPoint> {
        let corner = self.lines[0].meet(&self.lines[1])?;
        frame_point(&self.frame, &corner)
    }
}

/// The left-hand side of the matching criterion, evaluated exactly in the
/// smallest field containing all divisor points.
pub fn carnot_value(inst: &CarnotInstance) -> Result<CarnotValue> {
    let big = inst.value_field()?;
    // ratio coordinate per line, in frame coordinates: D1 points (0:y:z)
    // contribute y/z, D2 points (x:0:z) contribute z/x, D3 points (x:y:0)
    // contribute x/y; concurrent D1 points (x:y:y) contribute x/y
    let ratio = |i: usize, p: &ProjPoint| -> Result<FieldElement> {
        let q = frame_point(&inst.frame, p)?;
        let q = q.embed_into(&big)?;
        let (num, den) = match (&inst.case, i) {
            (CarnotCase::Concurrent, 0) => (q.coord(0), q.coord(1)),
            (CarnotCase::Concurrent, 1) => (q.coord(0), q.coord(2)),
            (CarnotCase::Concurrent, _) => (q.coord(0), q.coord(1)),
            (_, 0) => (q.coord(1), q.coord(2)),
            (_, 1) => (q.coord(2), q.coord(0)),
            (_, _) => (q.coord(0), q.coord(1)),
        };
        if den.is_zero() {
            return Err(Error::InvariantViolation(
                "ratio denominator vanished: a divisor point sits on a forbidden line".into(),
            ));
        }
        num.div(den)
    };
    match &inst.case {
        CarnotCase::Triangle => {
            let mut acc = big.one();
            for i in 0..3 {
                for (p, mult) in inst.divisors[i].entries() {
                    acc = acc.mul(&ratio(i, p)?.pow(*mult as u64));
                }
            }
            Ok(CarnotValue::Product(acc))
        }
        CarnotCase::TangentCorner { alpha } => {
            let corner = inst.corner_in_frame()?;
            let mut acc = embed(alpha, &big)?;
            for i in 0..3 {
                for (p, mult) in inst.divisors[i].entries() {
                    if i < 2 {
                        let q = frame_point(&inst.frame, p)?;
                        if q == corner.embed_into(q.field())? {
                            continue; // the deleted corner factor
                        }
                    }
                    acc = acc.mul(&ratio(i, p)?.pow(*mult as u64));
                }
            }
            Ok(CarnotValue::Product(acc))
        }
        CarnotCase::Concurrent => {
            let mut acc = big.zero();
            for i in 0..3 {
                let sign = if i == 0 { big.one() } else { big.one().neg() };
                for (p, mult) in inst.divisors[i].entries() {
                    let term = ratio(i, p)?.mul(&big.from_u64(*mult as u64)).mul(&sign);
                    acc = acc.add(&term);
                }
            }
            Ok(CarnotValue::Sum(acc))
        }
    }
}

/// Whether the criterion holds exactly.
pub fn check_carnot(inst: &CarnotInstance) -> Result<bool> {
    match carnot_value(inst)? {
        CarnotValue::Product(v) => {
            let mut target = v.field().one();
            if inst.m % 2 == 1 {
                target = target.neg();
            }
            Ok(v == target)
        }
        CarnotValue::Sum(v) => Ok(v.is_zero()),
    }
}

/// Complete an instance with one unknown simple point on line `missing`:
/// the unique position making the criterion hold. Triangle and Concurrent
/// cases only.
pub fn solve_last_coordinate(
    lines: &[Line; 3],
    divisors: &[DivisorOnLine; 3],
    missing: usize,
) -> Result<ProjPoint> {
    assert!(missing < 3);
    let field = lines[0].field().clone();
    let m = divisors[(missing + 1) % 3].degree();
    if divisors[(missing + 2) % 3].degree() != m || divisors[missing].degree() + 1 != m {
        return Err(Error::InvalidInput(
            "the incomplete divisor must miss exactly one simple point".into(),
        ));
    }
    let (frame, case) = coordinate_frame(&lines[0], &lines[1], &lines[2])?;
    let mut big = field.clone();
    for d in divisors {
        for (p, _) in d.entries() {
            big = compositum(&big, p.field())?;
        }
    }
    let ratio = |i: usize, p: &ProjPoint| -> Result<FieldElement> {
        let q = frame_point(&frame, p)?.embed_into(&big)?;
        let (num, den) = match (case, i) {
            (FrameCase::Concurrent, 0) => (q.coord(0), q.coord(1)),
            (FrameCase::Concurrent, 1) => (q.coord(0), q.coord(2)),
            (FrameCase::Concurrent, _) => (q.coord(0), q.coord(1)),
            (FrameCase::Triangle, 0) => (q.coord(1), q.coord(2)),
            (FrameCase::Triangle, 1) => (q.coord(2), q.coord(0)),
            (FrameCase::Triangle, _) => (q.coord(0), q.coord(1)),
        };
        if den.is_zero() {
            return Err(Error::InvariantViolation(
                "a fixed point lies on a forbidden line".into(),
            ));
        }
        num.div(den)
    };
    let frame_solution = match case {
        FrameCase::Triangle => {
            let mut known = big.one();
            for i in 0..3 {
                for (p, mult) in divisors[i].entries() {
                    known = known.mul(&ratio(i, p)?.pow(*mult as u64));
                }
            }
            let mut target = big.one();
            if m % 2 == 1 {
                target = target.neg();
            }
            let r = target.div(&known)?;
            let r = project(&r, &field)
                .map_err(|_| Error::NoAdmissibleSolution("the solved ratio is irrational".into()))?;
            match missing {
                0 => ProjPoint::new([field.zero(), r, field.one()])?,
                1 => ProjPoint::new([field.one(), field.zero(), r])?,
                _ => ProjPoint::new([r, field.one(), field.zero()])?,
            }
        }
        FrameCase::Concurrent => {
            let mut known = big.zero();
            for i in 0..3 {
                let sign = if i == 0 { big.one() } else { big.one().neg() };
                for (p, mult) in divisors[i].entries() {
                    known = known.add(&ratio(i, p)?.mul(&big.from_u64(*mult as u64)).mul(&sign));
                }
            }
            let sign = if missing == 0 { big.one() } else { big.one().neg() };
            let t = known.div(&sign)?.neg();
            let t = project(&t, &field)
                .map_err(|_| Error::NoAdmissibleSolution("the solved ratio is irrational".into()))?;
            match missing {
                0 => ProjPoint::new([t, field.one(), field.one()])?,
                1 => ProjPoint::new([t, field.zero(), field.one()])?,
                _ => ProjPoint::new([t, field.one(), field.zero()])?,
            }
        }
    };
    let solution = frame.pull_point(&frame_solution)?;
    for (j, l) in lines.iter().enumerate() {
        if j != missing && l.contains(&solution) {
            return Err(Error::NoAdmissibleSolution(
                "the forced position is a corner of the configuration".into(),
            ));
        }
    }
    if divisors[missing].multiplicity_of(&solution) > 0 {
        return Err(Error::NoAdmissibleSolution(
            "the forced position collides with a prescribed point".into(),
        ));
    }
    Ok(solution)
}

/// Target binary form of degree m for line i in frame coordinates, as a
/// product of linear factors over the prescribed points, with
/// coefficients projected back to the base field.
fn target_binary(inst: &CarnotInstance, i: usize) -> Result<BinaryForm> {
    let base = inst.base_field().clone();
    let big = inst.value_field()?;
    let concurrent = matches!(inst.case, CarnotCase::Concurrent);
    let mut acc = BinaryForm::constant(&big, big.one());
    for (p, mult) in inst.divisors[i].entries() {
        let q = frame_point(&inst.frame, p)?.embed_into(&big)?;
        // binary coordinates on each reference line, and the linear factor
        // vanishing at the point
        let (u, v) = match (concurrent, i) {
            (true, 0) => (q.coord(0), q.coord(1)),   // (x : y : y)
            (true, 1) => (q.coord(0), q.coord(2)),   // (x : 0 : z)
            (true, _) => (q.coord(0), q.coord(1)),   // (x : y : 0)
            (false, 0) => (q.coord(1), q.coord(2)),  // (0 : y : z)
            (false, 1) => (q.coord(0), q.coord(2)),  // (x : 0 : z)
            (false, _) => (q.coord(0), q.coord(1)),  // (x : y : 0)
        };
        // factor v*S - u*T vanishes at (S:T) = (u:v)
        let lin = BinaryForm::linear(&big, v, &u.neg());
        acc = acc.mul(&lin.pow(*mult));
    }
    let coeffs = acc
        .coeffs()
        .iter()
        .map(|c| project(c, &base))
        .collect::<Result<Vec<_>>>()?;
    Ok(BinaryForm::from_coeffs(&base, coeffs))
}

/// Coefficient functional of the restriction of a general degree-m form
/// to reference line i, as a row over the monomials: returns for each
/// binary coefficient index the list of contributing monomial positions.
fn restriction_rows(
    mons: &[(u16, u16, u16)],
    m: usize,
    i: usize,
    concurrent: bool,
) -> Vec<Vec<usize>> {
    // coefficient of S^(m-j) T^j of the restriction, (S:T) as in
    // target_binary; positions index into `mons`
    let mut rows: Vec<Vec<usize>> = vec![vec![]; m + 1];
    for (pos, (a, b, c)) in mons.iter().enumerate() {
        let (a, b, c) = (*a as usize, *b as usize, *c as usize);
        match (concurrent, i) {
            // L1: y - z = 0, param (S : T : T): x^a y^b z^c -> S^a T^(b+c)
            (true, 0) => rows[b + c].push(pos),
            // L2: y = 0, param (S : 0 : T)
            (true, 1) => {
                if b == 0 {
                    rows[c].push(pos);
                }
            }
            // L3: z = 0, param (S : T : 0)
            (true, _) => {
                if c == 0 {
                    rows[b].push(pos);
                }
            }
            // L1: x = 0, param (0 : S : T)
            (false, 0) => {
                if a == 0 {
                    rows[c].push(pos);
                }
            }
            // L2: y = 0, param (S : 0 : T)
            (false, 1) => {
                if b == 0 {
                    rows[c].push(pos);
                }
            }
            // L3: z = 0, param (S : T : 0)
            (false, _) => {
                if c == 0 {
                    rows[b].push(pos);
                }
            }
        }
    }
    rows
}

/// The homogeneous linear conditions, over the base field, cutting out
/// the forms (in frame coordinates) whose restriction to each line is
/// proportional to the prescribed binary form; plus the tangent rows in
/// the TangentCorner case.
fn condition_matrix(inst: &CarnotInstance) -> Result<(Matrix, Vec<(u16, u16, u16)>)> {
    let base = inst.base_field().clone();
    let m = inst.m;
    let mons = monomials(m);
    let concurrent = matches!(inst.case, CarnotCase::Concurrent);
    let mut mat = Matrix::zero(&base, 0, mons.len());
    for i in 0..3 {
        let target = target_binary(inst, i)?;
        let rows = restriction_rows(&mons, m, i, concurrent);
        let pivot = (0..=m)
            .find(|j| !target.coeff(*j).is_zero())
            .ok_or(Error::ZeroForm)?;
        for j in 0..=m {
            if j == pivot {
                continue;
            }
            // target[pivot] * c_j - target[j] * c_pivot = 0
            let mut row = vec![base.zero(); mons.len()];
            for pos in &rows[j] {
                row[*pos] = row[*pos].add(&target.coeff(pivot));
            }
            for pos in &rows[pivot] {
                row[*pos] = row[*pos].sub(&target.coeff(j));
            }
            mat.push_row(row);
        }
    }
    if let CarnotCase::TangentCorner { alpha } = &inst.case {
        // corner (0:0:1): a_{00m} = 0 and a_{10,m-1} = alpha * a_{01,m-1}
        let mut row = vec![base.zero(); mons.len()];
        let idx = |e: (u16, u16, u16)| mons.iter().position(|x| *x == e).unwrap();
        row[idx((0, 0, m as u16))] = base.one();
        mat.push_row(row);
        let mut row = vec![base.zero(); mons.len()];
        row[idx((1, 0, m as u16 - 1))] = base.one();
        row[idx((0, 1, m as u16 - 1))] = alpha.neg();
        mat.push_row(row);
    }
    Ok((mat, mons))
}

fn form_from_solution(
    base: &Field,
    m: usize,
    mons: &[(u16, u16, u16)],
    sol: &[FieldElement],
) -> Result<TernaryForm> {
    TernaryForm::from_terms(
        base,
        m,
        mons.iter()
            .zip(sol)
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| (*e, c.clone())),
    )
}

/// Compare prescribed and recomputed line divisors, counting Galois
/// orbits so conjugate points in different presentations still match.
fn divisors_match(expected: &DivisorOnLine, actual: &DivisorOnLine, base: &Field) -> Result<bool> {
    if expected.degree() != actual.degree() {
        return Ok(false);
    }
    for (p, mult) in expected.entries() {
        let mut exp_total = 0usize;
        for (q, m2) in expected.entries() {
            if crate::geometry::orbit_equivalent(p, q, base)? {
                exp_total += m2;
            }
        }
        let mut act_total = 0usize;
        for (q, m2) in actual.entries() {
            if crate::geometry::orbit_equivalent(p, q, base)? {
                act_total += m2;
            }
        }
        if exp_total != act_total {
            return Ok(false);
        }
        let _ = mult;
    }
    Ok(true)
}

/// A degree-m curve with the prescribed divisors on all three lines,
/// normalized (in frame coordinates) by a unit leading coefficient, with
/// the result re-verified against the input divisors.
pub fn construct_curve(inst: &CarnotInstance) -> Result<TernaryForm> {
    if !check_carnot(inst)? {
        return Err(Error::CarnotViolated);
    }
    let base = inst.base_field().clone();
    let (mut mat, mons) = condition_matrix(inst)?;
    let m = inst.m;
    // normalization a_{m00} = 1 picks the particular solution the
    // converse proof works with
    let norm_idx = mons.iter().position(|e| *e == (m as u16, 0, 0)).unwrap();
    let mut row = vec![base.zero(); mons.len()];
    row[norm_idx] = base.one();
    mat.push_row(row);
    let mut rhs = vec![base.zero(); mat.rows()];
    rhs[mat.rows() - 1] = base.one();
    let sol = mat.solve(&rhs).map_err(|_| {
        Error::InvariantViolation("construction system inconsistent despite the criterion".into())
    })?;
    let gamma_frame = form_from_solution(&base, m, &mons, &sol)?;
    let gamma = inst.frame.pull_form(&gamma_frame);
    for (l, d) in inst.lines.iter().zip(&inst.divisors) {
        let cut = line_divisor(l, &gamma)?;
        if !divisors_match(d, &cut, &base)? {
            return Err(Error::InvariantViolation(
                "constructed curve misses a prescribed divisor".into(),
            ));
        }
    }
    Ok(gamma)
}

/// Random smooth member of the system {Gamma : D_i inside Gamma n L_i},
/// seeded and deterministic; needs m >= 4 so the system is big enough to
/// move inside.
pub fn smooth_representative(
    inst: &CarnotInstance,
    attempts: usize,
    seed: u64,
) -> Result<TernaryForm> {
    if inst.m < 4 {
        return Err(Error::InvalidInput("smooth sampling needs degree at least 4".into()));
    }
    if !check_carnot(inst)? {
        return Err(Error::CarnotViolated);
    }
    let base = inst.base_field().clone();
    let (mat, mons) = condition_matrix(inst)?;
    let basis = mat.nullspace();
    if basis.is_empty() {
        return Err(Error::InvariantViolation("empty solution space despite the criterion".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..attempts {
        let mut combo = vec![base.zero(); mons.len()];
        for v in &basis {
            let c = random_scalar(&base, &mut rng);
            for (acc, x) in combo.iter_mut().zip(v) {
                *acc = acc.add(&x.mul(&c));
            }
        }
        let Ok(gamma_frame) = form_from_solution(&base, inst.m, &mons, &combo) else {
            continue;
        };
        if gamma_frame.is_zero() {
            continue;
        }
        let gamma = inst.frame.pull_form(&gamma_frame);
        // reject members containing one of the lines
        if inst
            .lines
            .iter()
            .any(|l| gamma.restrict(l.span()[0].coords(), l.span()[1].coords()).is_zero())
        {
            continue;
        }
        if is_smooth(&gamma)? != Smoothness::Smooth {
            continue;
        }
        let mut ok = true;
        for (l, d) in inst.lines.iter().zip(&inst.divisors) {
            if !divisors_match(d, &line_divisor(l, &gamma)?, &base)? {
                ok = false;
                break;
            }
        }
        if ok {
            return Ok(gamma);
        }
    }
    Err(Error::AttemptsExhausted(attempts))
}
