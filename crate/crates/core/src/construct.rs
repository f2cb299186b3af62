//! End-to-end pipeline: build a triangle of lines with prescribed
//! transverse points satisfying the product criterion, realize a smooth
//! curve Gamma through them, impose the points (plus beta extra points of
//! Gamma) on a smooth curve C of degree d, and certify that the cut
//! system is a non-trivial very special g^r_n of minimal degree.

use num_traits::ToPrimitive;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::carnot::{check_carnot, smooth_representative, solve_last_coordinate, CarnotCase, CarnotInstance};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::forms::{intersection_multiplicity, monomials, Multiplicity, TernaryForm};
use crate::geometry::smooth::{is_smooth, random_scalar, Smoothness};
use crate::geometry::{
    intersection_divisor, line_divisor, DivisorEntry, DivisorOnCurve, DivisorOnLine, Line,
    ProjPoint,
};
use crate::linsys::{
    analyze, n_lower_bound, trivial_expected_dim, LinearSystemReport, SystemPresentation,
    Triviality,
};
use crate::matrix::Matrix;

/// Parameters of one construction run. a = x + 3 is the degree of Gamma;
/// the certified regime needs 4 <= a <= d - 6.
#[derive(Clone, Debug)]
pub struct ConstructionRequest {
    pub d: usize,
    pub x: usize,
    pub beta: usize,
    pub field: Field,
    pub seed: u64,
    pub smooth_attempts: usize,
    pub sample_attempts: usize,
}

impl ConstructionRequest {
    pub fn new(d: usize, x: usize, beta: usize, field: Field, seed: u64) -> Result<ConstructionRequest> {
        let a = x + 3;
        if x < 1 || beta > x {
            return Err(Error::InvalidInput(format!(
                "need x >= 1 and 0 <= beta <= x, got x = {x}, beta = {beta}"
            )));
        }
        if a + 6 > d {
            return Err(Error::InvalidInput(format!(
                "need x + 3 <= d - 6, got x = {x}, d = {d}"
            )));
        }
        if !field.is_finite() {
            return Err(Error::InvalidInput("the pipeline needs a finite field".into()));
        }
        Ok(ConstructionRequest { d, x, beta, field, seed, smooth_attempts: 32, sample_attempts: 400 })
    }

    pub fn a(&self) -> usize {
        self.x + 3
    }

    pub fn expected_r(&self) -> i64 {
        let x = self.x as i64;
        (x + 1) * (x + 2) / 2 - self.beta as i64
    }

    pub fn expected_n(&self) -> i64 {
        (self.d as i64 - 3) * (self.x as i64 + 3) - self.beta as i64
    }
}

/// Triangle, its per-line point sets, and the smooth interpolating curve.
#[derive(Clone, Debug)]
pub struct GammaPair {
    pub lines: [Line; 3],
    pub divisors: [DivisorOnLine; 3],
    pub gamma: TernaryForm,
    pub z0: Vec<ProjPoint>,
}

fn random_line(field: &Field, rng: &mut ChaCha8Rng) -> Result<Line> {
    loop {
        let dual = [
            random_scalar(field, rng),
            random_scalar(field, rng),
            random_scalar(field, rng),
        ];
        if dual.iter().any(|c| !c.is_zero()) {
            return Line::from_dual(dual);
        }
    }
}

fn random_triangle(field: &Field, rng: &mut ChaCha8Rng) -> Result<[Line; 3]> {
    loop {
        let l1 = random_line(field, rng)?;
        let l2 = random_line(field, rng)?;
        let l3 = random_line(field, rng)?;
        let mut m = Matrix::zero(field, 3, 3);
        for (r, l) in [&l1, &l2, &l3].iter().enumerate() {
            for c in 0..3 {
                *m.at_mut(r, c) = l.dual()[c].clone();
            }
        }
        if !m.det().is_zero() {
            return Ok([l1, l2, l3]);
        }
    }
}

/// Distinct points on `line`, off the other two lines.
fn sample_line_points(
    line: &Line,
    others: [&Line; 2],
    count: usize,
    rng: &mut ChaCha8Rng,
    budget: usize,
) -> Result<Vec<ProjPoint>> {
    let field = line.field().clone();
    let mut pts: Vec<ProjPoint> = vec![];
    let mut tries = 0usize;
    while pts.len() < count {
        tries += 1;
        if tries > budget {
            return Err(Error::AttemptsExhausted(budget));
        }
        let t = random_scalar(&field, rng);
        let p = line.point_at(&field.one(), &t)?;
        if others.iter().any(|l| l.contains(&p)) || pts.contains(&p) {
            continue;
        }
        pts.push(p);
    }
    Ok(pts)
}

/// Triangle plus a transverse points per line, the last point forced by
/// the product criterion, and a smooth degree-a curve through all of them.
pub fn build_gamma_pair(req: &ConstructionRequest) -> Result<GammaPair> {
    let field = req.field.clone();
    let a = req.a();
    // a line over F_q holds q+1 points, two of them vertices
    let q = field.order().and_then(|o| o.to_u64()).unwrap_or(u64::MAX);
    if q.saturating_sub(1) < a as u64 {
        return Err(Error::FieldTooSmall(format!(
            "a line over a field of order {q} cannot host {a} points off the vertices"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(req.seed);
    let mut last_err = Error::AttemptsExhausted(0);
    for round in 0..req.sample_attempts.max(1) {
        let lines = random_triangle(&field, &mut rng)?;
        let d1_pts = sample_line_points(&lines[0], [&lines[1], &lines[2]], a, &mut rng, 40 * a)?;
        let d2_pts = sample_line_points(&lines[1], [&lines[0], &lines[2]], a, &mut rng, 40 * a)?;
        let d3_pts = sample_line_points(&lines[2], [&lines[0], &lines[1]], a - 1, &mut rng, 40 * a)?;
        let mk = |l: &Line, pts: &[ProjPoint]| {
            DivisorOnLine::new(l.clone(), pts.iter().map(|p| (p.clone(), 1)).collect())
        };
        let d1 = mk(&lines[0], &d1_pts)?;
        let d2 = mk(&lines[1], &d2_pts)?;
        let d3_partial = mk(&lines[2], &d3_pts)?;
        let last = match solve_last_coordinate(&lines, &[d1.clone(), d2.clone(), d3_partial], 2) {
            Ok(p) => p,
            Err(e) => {
                last_err = e;
                continue;
            }
        };
        let mut d3_pts = d3_pts;
        d3_pts.push(last);
        let d3 = mk(&lines[2], &d3_pts)?;
        let inst = CarnotInstance::new(
            lines.clone(),
            [d1.clone(), d2.clone(), d3.clone()],
            CarnotCase::Triangle,
        )?;
        debug_assert!(check_carnot(&inst)?);
        match smooth_representative(&inst, req.smooth_attempts, req.seed ^ round as u64) {
            Ok(gamma) => {
                let z0 = d1_pts.iter().chain(&d2_pts).chain(&d3_pts).cloned().collect();
                return Ok(GammaPair { lines, divisors: [d1, d2, d3], gamma, z0 });
            }
            Err(e) => last_err = e,
        }
    }
    Err(last_err)
}

/// `count` distinct rational points of Gamma off the assigned ones, found
/// by cutting Gamma with random lines.
pub fn sample_gamma_points(
    gamma: &TernaryForm,
    exclude: &[ProjPoint],
    count: usize,
    rng: &mut ChaCha8Rng,
    budget: usize,
) -> Result<Vec<ProjPoint>> {
    let field = gamma.field().clone();
    let mut pts: Vec<ProjPoint> = vec![];
    let mut tries = 0usize;
    while pts.len() < count {
        tries += 1;
        if tries > budget {
            return Err(Error::AttemptsExhausted(budget));
        }
        let l = random_line(&field, rng)?;
        let Ok(cut) = line_divisor(&l, gamma) else { continue };
        for (p, _) in cut.entries() {
            if pts.len() >= count {
                break;
            }
            if p.field() == &field && !exclude.contains(p) && !pts.contains(p) {
                pts.push(p.clone());
            }
        }
    }
    Ok(pts)
}

/// Smooth degree-d curve through all given rational points (transverse
/// membership only: each point is a simple condition).
pub fn build_curve_c(
    req: &ConstructionRequest,
    points: &[ProjPoint],
) -> Result<TernaryForm> {
    let field = req.field.clone();
    let mons = monomials(req.d);
    let mut mat = Matrix::zero(&field, 0, mons.len());
    for p in points {
        let row = mons
            .iter()
            .map(|(i, j, k)| {
                p.coord(0)
                    .pow(*i as u64)
                    .mul(&p.coord(1).pow(*j as u64))
                    .mul(&p.coord(2).pow(*k as u64))
            })
            .collect();
        mat.push_row(row);
    }
    let null = mat.nullspace();
    if null.is_empty() {
        return Err(Error::EmptySystem);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(req.seed.wrapping_add(0x5eed_c0de));
    for _ in 0..req.smooth_attempts {
        let mut combo = vec![field.zero(); mons.len()];
        for v in &null {
            let c = random_scalar(&field, &mut rng);
            for (acc, x) in combo.iter_mut().zip(v) {
                *acc = acc.add(&x.mul(&c));
            }
        }
        if combo.iter().all(|c| c.is_zero()) {
            continue;
        }
        let c = TernaryForm::from_terms(
            &field,
            req.d,
            mons.iter()
                .zip(&combo)
                .filter(|(_, c)| !c.is_zero())
                .map(|(e, c)| (*e, c.clone())),
        )?;
        if is_smooth(&c)? == Smoothness::Smooth {
            return Ok(c);
        }
    }
    Err(Error::AttemptsExhausted(req.smooth_attempts))
}

/// Everything `certify` established, with the data to replay it.
#[derive(Clone, Debug)]
pub struct ConstructionCertificate {
    pub d: usize,
    pub x: usize,
    pub beta: usize,
    pub seed: u64,
    pub curve: TernaryForm,
    pub gamma: TernaryForm,
    pub lines: [Line; 3],
    pub e_points: Vec<ProjPoint>,
    pub z: DivisorOnCurve,
    pub report: LinearSystemReport,
    pub expected_r: i64,
    pub expected_n: i64,
}

fn fail(step: &str, detail: impl Into<String>) -> Error {
    Error::CertificationFailed { step: step.into(), detail: detail.into() }
}

fn finite_mult(g: &TernaryForm, c: &TernaryForm, p: &ProjPoint) -> Result<usize> {
    match intersection_multiplicity(g, c, p.coords())? {
        Multiplicity::Finite(m) => Ok(m),
        Multiplicity::Infinite => Err(Error::SharedComponent),
    }
}

/// Re-derive every claimed property of the constructed system from the
/// raw data; any mismatch names the failed step.
pub fn certify(
    req: &ConstructionRequest,
    c: &TernaryForm,
    pair: &GammaPair,
    e_points: &[ProjPoint],
) -> Result<ConstructionCertificate> {
    let field = req.field.clone();
    let m = req.a();
    let d = req.d as i64;
    if e_points.len() != req.beta {
        return Err(fail("inputs", format!("expected {} extra points, got {}", req.beta, e_points.len())));
    }
    // scheme membership: every point of Z on C, and at the triangle points
    // the Namba exclusion: C cannot meet both Gamma and the line to order
    // two at the same transverse point
    for p in pair.z0.iter().chain(e_points) {
        if !c.eval(p.coords()).is_zero() {
            return Err(fail("membership", "a point of Z does not lie on C"));
        }
        if !pair.gamma.eval(p.coords()).is_zero() {
            return Err(fail("membership", "a point of Z does not lie on Gamma"));
        }
    }
    for p in &pair.z0 {
        let line = pair
            .lines
            .iter()
            .find(|l| l.contains(p))
            .ok_or_else(|| fail("namba", "a triangle point is on no line"))?;
        let on_gamma = finite_mult(&pair.gamma.clone(), c, p).map_err(|e| fail("namba", e.to_string()))?;
        let on_line = finite_mult(&line.as_form(), c, p).map_err(|e| fail("namba", e.to_string()))?;
        if on_gamma < 1 || on_line < 1 {
            return Err(fail("namba", "missing intersection at a triangle point"));
        }
        if on_gamma >= 2 && on_line >= 2 {
            return Err(fail("namba", "C meets Gamma and a line doubly at a transverse point"));
        }
    }
    let z = DivisorOnCurve::new(
        c.clone(),
        pair.z0
            .iter()
            .chain(e_points)
            .map(|p| DivisorEntry { point: p.clone(), mult: 1, resdeg: 1 })
            .collect(),
    );
    let pres = SystemPresentation::new(c.clone(), m, z.clone())
        .map_err(|e| fail("presentation", e.to_string()))?;
    let report = analyze(&pres, req.seed).map_err(|e| fail("analysis", e.to_string()))?;
    let expected_r = req.expected_r();
    let expected_n = req.expected_n();
    if report.n != expected_n {
        return Err(fail("degree", format!("n = {}, expected {expected_n}", report.n)));
    }
    if report.r != expected_r {
        return Err(fail("dimension", format!("r = {}, expected {expected_r}", report.r)));
    }
    if !report.base_locus.is_zero() {
        return Err(fail("base-locus", "base locus is nonempty"));
    }
    if !report.very_special {
        return Err(fail("very-special", "residual system has dimension < 1"));
    }
    if !matches!(report.triviality, Triviality::NonTrivial { .. }) {
        return Err(fail("triviality", format!("{:?}", report.triviality)));
    }
    if !report.hartshorne_check {
        return Err(fail("hartshorne", "dimension exceeds the maximal bound"));
    }
    let bound = n_lower_bound(d, expected_r).map_err(|e| fail("sharpness", e.to_string()))?;
    if report.n != bound {
        return Err(fail("sharpness", format!("n = {} but the bound is {bound}", report.n)));
    }
    let triv = trivial_expected_dim(m as i64, d, report.n).map_err(|e| fail("formula", e.to_string()))?;
    if report.r != triv + 1 {
        return Err(fail("formula", format!("r = {} but trivial expectation is {triv}", report.r)));
    }
    let g = (d - 1) * (d - 2) / 2;
    if report.r != report.n - g + report.residual_dim + 1 {
        return Err(fail("riemann-roch", format!(
            "r = {}, n = {}, g = {g}, residual = {}",
            report.r, report.n, report.residual_dim
        )));
    }
    let _ = field;
    Ok(ConstructionCertificate {
        d: req.d,
        x: req.x,
        beta: req.beta,
        seed: req.seed,
        curve: c.clone(),
        gamma: pair.gamma.clone(),
        lines: pair.lines.clone(),
        e_points: e_points.to_vec(),
        z,
        report,
        expected_r,
        expected_n,
    })
}

/// Full pipeline for one request.
pub fn construct(req: &ConstructionRequest) -> Result<ConstructionCertificate> {
    let pair = build_gamma_pair(req)?;
    let mut rng = ChaCha8Rng::seed_from_u64(req.seed.wrapping_add(0xe_0ff5e7));
    let e_points = sample_gamma_points(&pair.gamma, &pair.z0, req.beta, &mut rng, req.sample_attempts)?;
    let all: Vec<ProjPoint> = pair.z0.iter().chain(&e_points).cloned().collect();
    let c = build_curve_c(req, &all)?;
    certify(req, &c, &pair, &e_points)
}

/// One certificate per beta in 0..=x from a single (C, Gamma, triangle),
/// with the extra points drawn from the rational part of Gamma.C - Z0.
pub fn corollary_sweep(req: &ConstructionRequest) -> Result<Vec<ConstructionCertificate>> {
    let base_req = ConstructionRequest { beta: 0, ..req.clone() };
    let pair = build_gamma_pair(&base_req)?;
    let c = build_curve_c(&base_req, &pair.z0)?;
    // residual divisor D = Gamma.C - Z0 on Gamma supplies the extra points
    let full = intersection_divisor(&c, &pair.gamma)?;
    let z0_div = DivisorOnCurve::new(
        pair.gamma.clone(),
        pair.z0
            .iter()
            .map(|p| DivisorEntry { point: p.clone(), mult: 1, resdeg: 1 })
            .collect(),
    );
    let residual = full.subtract(&z0_div)?;
    let rational: Vec<ProjPoint> = residual
        .entries()
        .iter()
        .filter(|e| e.point.field() == &req.field)
        .map(|e| e.point.clone())
        .collect();
    if rational.len() < req.x {
        return Err(Error::InsufficientRationalPoints(format!(
            "the residual divisor has {} rational points, need {}",
            rational.len(),
            req.x
        )));
    }
    let mut out = vec![];
    for beta in 0..=req.x {
        let breq = ConstructionRequest { beta, ..req.clone() };
        out.push(certify(&breq, &c, &pair, &rational[..beta])?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::carnot::check_carnot;

    #[test]
    fn request_validation() {
        let f = Field::prime(1009).unwrap();
        assert!(ConstructionRequest::new(10, 1, 0, f.clone(), 1).is_ok());
        assert!(ConstructionRequest::new(10, 1, 2, f.clone(), 1).is_err()); // beta > x
        assert!(ConstructionRequest::new(9, 1, 0, f.clone(), 1).is_err()); // a > d-6
        assert!(ConstructionRequest::new(12, 0, 0, f.clone(), 1).is_err()); // x < 1
        assert!(ConstructionRequest::new(10, 1, 0, Field::rationals(), 1).is_err());
    }

    #[test]
    fn tiny_field_rejected() {
        let f = Field::prime(5).unwrap();
        let req = ConstructionRequest::new(11, 2, 0, f, 3).unwrap();
        // a = 5 points per line, only 4 available off the vertices
        assert!(matches!(build_gamma_pair(&req), Err(Error::FieldTooSmall(_))));
    }

    #[test]
    fn gamma_pair_roundtrip() {
        let f = Field::prime(1009).unwrap();
        let req = ConstructionRequest::new(10, 1, 0, f, 42).unwrap();
        let pair = build_gamma_pair(&req).unwrap();
        assert_eq!(pair.gamma.degree(), 4);
        assert_eq!(pair.z0.len(), 12);
        assert_eq!(is_smooth(&pair.gamma).unwrap(), Smoothness::Smooth);
        let inst = CarnotInstance::new(
            pair.lines.clone(),
            pair.divisors.clone(),
            CarnotCase::Triangle,
        )
        .unwrap();
        assert!(check_carnot(&inst).unwrap());
        for (l, d) in pair.lines.iter().zip(&pair.divisors) {
            let cut = line_divisor(l, &pair.gamma).unwrap();
            assert_eq!(cut.degree(), 4);
            for (p, m) in d.entries() {
                assert_eq!(*m, 1);
                assert_eq!(cut.multiplicity_of(p), 1);
            }
        }
    }
}
