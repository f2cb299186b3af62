//! Smoothness of plane curves, decided by eliminating the singular-locus
//! system with resultants and gcds, never by Groebner bases.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::ext::{embed, roots_in_splitting_field};
use crate::field::factor::{factor_univariate, rational_roots};
use crate::field::poly::Poly;
use crate::field::{Field, FieldElement};
use crate::forms::{mv_gcd, resultant_z, TernaryForm};
use crate::geometry::ProjPoint;
use crate::matrix::Matrix;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Smoothness {
    Smooth,
    /// A point over the base field or an extension satisfying the curve
    /// and all three partials exactly.
    Singular(ProjPoint),
}

/// Decide smoothness of C. The common-zero system always includes C
/// itself: in characteristic dividing deg C the Euler relation degenerates
/// and the partials alone do not cut out the singular locus.
pub fn is_smooth(c: &TernaryForm) -> Result<Smoothness> {
    if c.is_zero() || c.degree() == 0 {
        return Err(Error::ZeroForm);
    }
    let partials = [c.partial(0), c.partial(1), c.partial(2)];
    if partials.iter().all(|d| d.is_zero()) {
        // a p-th power: every curve point is singular
        let witness = point_on_form(c)?.ok_or_else(|| {
            Error::Unsupported("no accessible point on an everywhere-singular curve".into())
        })?;
        return Ok(Smoothness::Singular(witness));
    }
    let mut system = vec![c.clone()];
    system.extend(partials.into_iter().filter(|d| !d.is_zero()));
    if system.len() >= 3 && smooth_by_elimination(&system)? {
        return Ok(Smoothness::Smooth);
    }
    match solve_system(&system)? {
        Some(p) => Ok(Smoothness::Singular(p)),
        None => Ok(Smoothness::Smooth),
    }
}

/// Fast one-sided smoothness certificate. A common zero of the system
/// survives, after a coordinate change making every leading z-coefficient
/// a unit, as a common root of the resultants Res_z(first, other); if the
/// gcd of those resultants is constant there is no common zero at all.
/// Returns false when inconclusive (the slow exhaustive search decides).
fn smooth_by_elimination(system: &[TernaryForm]) -> Result<bool> {
    let field = system[0].field().clone();
    if !field.is_finite() {
        return Ok(false);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x00e1_3713);
    'attempt: for attempt in 0..8 {
        let m = if attempt == 0 {
            Matrix::identity(&field, 3)
        } else {
            random_invertible(&field, &mut rng)
        };
        let mut moved = vec![];
        for f in system {
            let g = f.compose_linear(&m);
            if g.coeff((0, 0, g.degree() as u16)).is_zero() {
                continue 'attempt;
            }
            moved.push(g);
        }
        let mut acc: Option<crate::forms::BinaryForm> = None;
        for g in &moved[1..] {
            let r = resultant_z(&moved[0], g)?;
            if r.is_zero() {
                continue 'attempt; // shared component, let the slow path sort it out
            }
            let next = match acc {
                None => r,
                Some(a) => a.gcd(&r),
            };
            if next.degree() == 0 {
                return Ok(true);
            }
            acc = Some(next);
        }
    }
    Ok(false)
}

/// Lift a form's coefficients into a larger field.
pub(crate) fn embed_form(f: &TernaryForm, target: &Field) -> Result<TernaryForm> {
    if f.field() == target {
        return Ok(f.clone());
    }
    TernaryForm::from_terms(
        target,
        f.degree(),
        f.terms()
            .map(|(e, c)| Ok((*e, embed(c, target)?)))
            .collect::<Result<Vec<_>>>()?,
    )
}

fn eval_at(f: &TernaryForm, p: &ProjPoint) -> Result<FieldElement> {
    Ok(embed_form(f, p.field())?.eval(p.coords()))
}

/// Some common projective zero of all the forms over the base field or an
/// extension, or None if there is none over the algebraic closure.
/// Unsupported over Q when deciding would need an irrational point.
pub(crate) fn solve_system(forms: &[TernaryForm]) -> Result<Option<ProjPoint>> {
    let live: Vec<&TernaryForm> = forms.iter().filter(|f| !f.is_zero()).collect();
    let Some(first) = live.first() else {
        let field = forms
            .first()
            .map(|f| f.field().clone())
            .ok_or_else(|| Error::InvalidInput("empty system".into()))?;
        return Ok(Some(ProjPoint::from_i64(&field, 0, 0, 1)?));
    };
    if live.iter().any(|f| f.degree() == 0) {
        return Ok(None);
    }
    if live.len() == 1 {
        // a positive-degree form always has zeros over the closure, so an
        // empty search over Q means the witness is irrational, not absent
        return match point_on_form(first)? {
            Some(p) => Ok(Some(p)),
            None => Err(Error::Unsupported(
                "the solution locus over Q has no rational point to present".into(),
            )),
        };
    }
    let (a, b, rest) = (live[0], live[1], &live[2..]);
    let w = mv_gcd(a, b)?;
    if w.degree() > 0 {
        // V(a, b, R) = (V(w) n V(R)) u (V(a/w) n V(b/w) n V(R))
        let mut branch: Vec<TernaryForm> = vec![w.clone()];
        branch.extend(rest.iter().map(|f| (*f).clone()));
        if let Some(p) = solve_system(&branch)? {
            return Ok(Some(p));
        }
        let mut branch: Vec<TernaryForm> = vec![a.exact_div(&w)?, b.exact_div(&w)?];
        branch.extend(rest.iter().map(|f| (*f).clone()));
        return solve_system(&branch);
    }
    let (candidates, complete) = common_zeros_coprime(a, b)?;
    for p in candidates {
        let mut ok = true;
        for f in rest {
            if !eval_at(f, &p)?.is_zero() {
                ok = false;
                break;
            }
        }
        if ok {
            return Ok(Some(p));
        }
    }
    if !complete {
        return Err(Error::Unsupported(
            "deciding the system over Q needs points in a number field".into(),
        ));
    }
    Ok(None)
}

/// Any point on {f = 0}, searching along the line x = 0 and falling back
/// to its translates. None only over Q when all candidates are irrational.
pub(crate) fn point_on_form(f: &TernaryForm) -> Result<Option<ProjPoint>> {
    let field = f.field().clone();
    // lines x = c*z for a few c, then y = 0; one of them meets the curve
    // in a point we can present unless everything stays irrational over Q
    let mut incomplete = false;
    let lines: Vec<[ProjPoint; 2]> = {
        let mut v = vec![];
        for c in 0..3i64 {
            v.push([
                ProjPoint::from_i64(&field, c, 1, 0)?,
                ProjPoint::from_i64(&field, c, 0, 1)?,
            ]);
        }
        v.push([
            ProjPoint::from_i64(&field, 1, 0, 0)?,
            ProjPoint::from_i64(&field, 0, 0, 1)?,
        ]);
        v
    };
    for span in &lines {
        let b = f.restrict(span[0].coords(), span[1].coords());
        if b.is_zero() {
            return Ok(Some(span[1].clone()));
        }
        let p = b.to_poly();
        if b.s_multiplicity() > 0 {
            return Ok(Some(span[1].clone()));
        }
        match find_root(&p)? {
            RootSearch::Found(t0) => {
                let target = t0.field().clone();
                let q0 = span[0].embed_into(&target)?;
                let q1 = span[1].embed_into(&target)?;
                let pt = ProjPoint::new([
                    q0.coord(0).add(&q1.coord(0).mul(&t0)),
                    q0.coord(1).add(&q1.coord(1).mul(&t0)),
                    q0.coord(2).add(&q1.coord(2).mul(&t0)),
                ])?;
                return Ok(Some(pt));
            }
            RootSearch::NoneRational => incomplete = true,
            RootSearch::NoRoot => {}
        }
    }
    if incomplete {
        return Ok(None);
    }
    Err(Error::InvariantViolation("positive-degree form with no accessible zero".into()))
}

enum RootSearch {
    Found(FieldElement),
    /// Over Q: roots exist over the closure but none is rational.
    NoneRational,
    /// No roots at all (impossible over finite fields after extension).
    NoRoot,
}

fn find_root(p: &Poly) -> Result<RootSearch> {
    let field = p.field().clone();
    if p.degree().unwrap_or(0) == 0 {
        return Ok(RootSearch::NoRoot);
    }
    if !field.is_finite() {
        let roots = rational_roots(p)?;
        return Ok(match roots.into_iter().next() {
            Some((r, _)) => RootSearch::Found(r),
            None => RootSearch::NoneRational,
        });
    }
    let fac = factor_univariate(p, 0x9eed)?;
    let (g, _) = &fac.factors[0];
    let mut roots = roots_in_splitting_field(g, 0x9eed)?;
    Ok(RootSearch::Found(roots.remove(0)))
}

/// All common zeros of a coprime pair, one representative per Galois
/// orbit, over the needed canonical extensions. The flag is false over Q
/// when irrational orbits were skipped.
pub(crate) fn common_zeros_coprime(
    a: &TernaryForm,
    b: &TernaryForm,
) -> Result<(Vec<ProjPoint>, bool)> {
    let field = a.field().clone();
    let (m, _) = normalizing_transform(&field, &[a, b], 0xfeed_5a7e)?;
    let at = a.compose_linear(&m);
    let bt = b.compose_linear(&m);
    let r = resultant_z(&at, &bt)?;
    if r.is_zero() {
        return Err(Error::InvariantViolation("zero resultant for a coprime pair".into()));
    }
    let az = at.z_coefficients();
    let bz = bt.z_coefficients();
    let mut out = vec![];
    let mut complete = true;
    // base-field orbit representatives of the roots of r
    let mut base_roots: Vec<(FieldElement, FieldElement)> = vec![];
    if r.s_multiplicity() > 0 {
        base_roots.push((field.zero(), field.one()));
    }
    let rp = r.to_poly();
    if rp.degree().unwrap_or(0) > 0 {
        if field.is_finite() {
            let fac = factor_univariate(&rp, 0xfeed)?;
            for (g, _) in &fac.factors {
                let mut roots = roots_in_splitting_field(g, 0xfeed)?;
                let t0 = roots.remove(0);
                let one = t0.field().one();
                base_roots.push((one, t0));
            }
        } else {
            let roots = rational_roots(&rp)?;
            let seen: usize = roots.iter().map(|(_, m)| m).sum();
            for (t0, _) in roots {
                base_roots.push((field.one(), t0));
            }
            if seen < rp.degree().unwrap_or(0) {
                complete = false;
            }
        }
    }
    for (x0, y0) in base_roots {
        let ext = x0.field().clone();
        let fiber = |zc: &[crate::forms::BinaryForm]| -> Result<Poly> {
            let coeffs = zc
                .iter()
                .map(|bf| {
                    let mut acc = ext.zero();
                    let m = bf.degree();
                    for (j, c) in bf.coeffs().iter().enumerate() {
                        let c = embed(c, &ext)?;
                        acc = acc.add(&c.mul(&x0.pow((m - j) as u64)).mul(&y0.pow(j as u64)));
                    }
                    Ok(acc)
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Poly::from_coeffs(&ext, coeffs))
        };
        let fa = fiber(&az)?;
        let fb = fiber(&bz)?;
        let h = fa.gcd(&fb);
        if h.is_zero() || h.is_constant() {
            return Err(Error::InvariantViolation("resultant root with empty fiber".into()));
        }
        let zroots: Vec<FieldElement> = if ext.is_finite() {
            let fac = factor_univariate(&h, 0xfeed)?;
            let mut zs = vec![];
            for (g, _) in &fac.factors {
                let mut roots = roots_in_splitting_field(g, 0xfeed)?;
                zs.push(roots.remove(0));
            }
            zs
        } else {
            let roots = rational_roots(&h)?;
            let found: usize = roots.iter().map(|(_, m)| m).sum();
            if found < h.degree().unwrap_or(0) {
                complete = false;
            }
            roots.into_iter().map(|(r, _)| r).collect()
        };
        for z0 in zroots {
            let big = z0.field().clone();
            let (xb, yb) = (embed(&x0, &big)?, embed(&y0, &big)?);
            let prime = ProjPoint::new([xb, yb, z0])?;
            // zeros of F(M X) pull back through M itself
            let m_big = embed_matrix(&m, &big)?;
            let v = m_big.mul_vec(prime.coords());
            let p = ProjPoint::new([v[0].clone(), v[1].clone(), v[2].clone()])?;
            out.push(p);
        }
    }
    Ok((out, complete))
}

fn embed_matrix(m: &Matrix, target: &Field) -> Result<Matrix> {
    let mut out = Matrix::zero(target, m.rows(), m.cols());
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            *out.at_mut(r, c) = embed(m.at(r, c), target)?;
        }
    }
    Ok(out)
}

/// An invertible M (with inverse) such that every listed form, composed
/// with M, has a unit coefficient on its top z power. Identity first,
/// then seeded random tries.
pub(crate) fn normalizing_transform(
    field: &Field,
    forms: &[&TernaryForm],
    seed: u64,
) -> Result<(Matrix, Matrix)> {
    let good = |m: &Matrix| {
        forms.iter().all(|f| {
            let g = f.compose_linear(m);
            !g.coeff((0, 0, g.degree() as u16)).is_zero()
        })
    };
    let id = Matrix::identity(field, 3);
    if good(&id) {
        return Ok((id.clone(), id));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..200 {
        let m = random_invertible(field, &mut rng);
        if good(&m) {
            let inv = m.inverse().expect("invertible by construction");
            return Ok((m, inv));
        }
    }
    Err(Error::AttemptsExhausted(200))
}

pub(crate) fn random_invertible(field: &Field, rng: &mut ChaCha8Rng) -> Matrix {
    loop {
        let mut m = Matrix::zero(field, 3, 3);
        for r in 0..3 {
            for c in 0..3 {
                *m.at_mut(r, c) = random_scalar(field, rng);
            }
        }
        if !m.det().is_zero() {
            return m;
        }
    }
}

pub(crate) fn random_scalar(field: &Field, rng: &mut ChaCha8Rng) -> FieldElement {
    if field.is_finite() {
        let p = field.characteristic();
        let k = field.extension_degree();
        let coeffs: Vec<u64> = (0..k).map(|_| rng.gen_range(0..p)).collect();
        if k == 1 {
            field.from_u64(coeffs[0])
        } else {
            field.from_coeffs(&coeffs).expect("coefficients fit")
        }
    } else {
        // small entries keep downstream resultant coefficients manageable
        field.from_i64(rng.gen_range(-3..=3))
    }
}
