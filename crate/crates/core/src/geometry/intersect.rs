//! Intersection divisors of curves with a smooth curve, and divisors cut
//! on lines, located through resultants and univariate factorization.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::ext::{embed, roots_in_splitting_field};
use crate::field::factor::{factor_univariate, rational_roots};
use crate::field::poly::Poly;
use crate::field::{Field, FieldElement};
use crate::forms::{intersection_multiplicity, mv_gcd, resultant_z, Multiplicity, TernaryForm};
use crate::geometry::smooth::{embed_form, random_invertible};
use crate::geometry::{DivisorEntry, DivisorOnCurve, DivisorOnLine, Line, ProjPoint};
use crate::matrix::Matrix;

/// Degree over the prime field of the subfield generated by the
/// (normalized) coordinates: the smallest t with all coordinates fixed by
/// the t-fold Frobenius.
fn coordinate_degree(pt: &ProjPoint) -> usize {
    let e = pt.field().extension_degree();
    let mut cur = pt.coords().clone();
    for t in 1..=e {
        for c in cur.iter_mut() {
            *c = c.frobenius();
        }
        if &cur == pt.coords() {
            return t;
        }
    }
    e
}

/// Re-present a point inside the canonical field of its coordinate degree.
fn compress(pt: &ProjPoint, target: &Field) -> Result<ProjPoint> {
    if pt.field() == target {
        return Ok(pt.clone());
    }
    let c = pt.coords();
    ProjPoint::new([
        crate::field::ext::project(&c[0], target)?,
        crate::field::ext::project(&c[1], target)?,
        crate::field::ext::project(&c[2], target)?,
    ])
}

/// Whether two points lie in the same Galois orbit over the base field.
/// Conjugate points have coordinate fields of equal degree, so a degree
/// mismatch rejects immediately; otherwise both points are compressed
/// into the canonical field of that degree and compared along the
/// Frobenius orbit there. This avoids building a compositum of degree
/// lcm of the two ambient extensions.
pub fn orbit_equivalent(p1: &ProjPoint, p2: &ProjPoint, base: &Field) -> Result<bool> {
    if p1.field() == p2.field() && p1 == p2 {
        return Ok(true);
    }
    if !base.is_finite() {
        return Ok(p1.field() == p2.field() && p1 == p2);
    }
    let t1 = coordinate_degree(p1);
    let t2 = coordinate_degree(p2);
    if t1 != t2 {
        return Ok(false);
    }
    let p = base.characteristic();
    let target = if t1 == 1 {
        Field::prime(p)?
    } else {
        crate::field::ext::canonical_extension(p, t1)?
    };
    let a = compress(p1, &target)?;
    let b = compress(p2, &target)?;
    let s = base.extension_degree().max(1);
    let mut cur = a;
    for _ in 0..t1.max(1) {
        if cur == b {
            return Ok(true);
        }
        cur = cur.frobenius_over(p, s);
    }
    Ok(false)
}

/// The divisor cut by a smooth curve C on a line L: degree deg C, points
/// listed individually (conjugates included) over the needed extensions.
pub fn line_divisor(l: &Line, c: &TernaryForm) -> Result<DivisorOnLine> {
    let field = c.field().clone();
    let b = c.restrict(l.span()[0].coords(), l.span()[1].coords());
    if b.is_zero() {
        return Err(Error::SharedComponent);
    }
    let mut entries: Vec<(ProjPoint, usize)> = vec![];
    let e = b.s_multiplicity();
    if e > 0 {
        entries.push((l.span()[1].clone(), e));
    }
    let p = b.to_poly();
    if p.degree().unwrap_or(0) > 0 {
        if field.is_finite() {
            let fac = factor_univariate(&p, 0x11e5)?;
            for (g, mult) in &fac.factors {
                for t0 in roots_in_splitting_field(g, 0x11e5)? {
                    let target = t0.field().clone();
                    let one = target.one();
                    entries.push((l.point_at_in(&one, &t0, &target)?, *mult));
                }
            }
        } else {
            let roots = rational_roots(&p)?;
            let found: usize = roots.iter().map(|(_, m)| m).sum();
            if found < p.degree().unwrap_or(0) {
                return Err(Error::Unsupported(
                    "line meets the curve in irrational points over Q".into(),
                ));
            }
            for (t0, mult) in roots {
                entries.push((l.point_at(&field.one(), &t0)?, mult));
            }
        }
    }
    let div = DivisorOnLine::new(l.clone(), entries)?;
    if div.degree() != c.degree() {
        return Err(Error::InvariantViolation("line divisor misses Bezout degree".into()));
    }
    Ok(div)
}

/// The full divisor G.C on a smooth curve C, one entry per Galois orbit,
/// with the Bezout total asserted.
pub fn intersection_divisor(g: &TernaryForm, c: &TernaryForm) -> Result<DivisorOnCurve> {
    let field = c.field().clone();
    if g.is_zero() || c.is_zero() {
        return Err(Error::ZeroForm);
    }
    if mv_gcd(g, c)?.degree() > 0 {
        return Err(Error::SharedComponent);
    }
    let target_degree = g.degree() * c.degree();
    let mut rng = ChaCha8Rng::seed_from_u64(0xd1f1_5012);
    let attempts = 40;
    'attempt: for attempt in 0..attempts {
        let m = if attempt == 0 {
            Matrix::identity(&field, 3)
        } else {
            random_invertible(&field, &mut rng)
        };
        let a = g.compose_linear(&m);
        let b = c.compose_linear(&m);
        if a.coeff((0, 0, a.degree() as u16)).is_zero()
            || b.coeff((0, 0, b.degree() as u16)).is_zero()
        {
            continue;
        }
        let r = resultant_z(&a, &b)?;
        if r.is_zero() {
            return Err(Error::InvariantViolation("zero resultant for coprime curves".into()));
        }
        let az = a.z_coefficients();
        let bz = b.z_coefficients();
        // orbit representatives of the projection of the intersection
        let mut base_roots: Vec<(FieldElement, FieldElement, usize)> = vec![];
        if r.s_multiplicity() > 0 {
            base_roots.push((field.zero(), field.one(), 1));
        }
        let rp = r.to_poly();
        if rp.degree().unwrap_or(0) > 0 {
            if field.is_finite() {
                let fac = factor_univariate(&rp, 0x11e5)?;
                for (gf, _) in &fac.factors {
                    let resdeg = gf.degree().unwrap();
                    let mut roots = roots_in_splitting_field(gf, 0x11e5)?;
                    let t0 = roots.remove(0);
                    let one = t0.field().one();
                    base_roots.push((one, t0, resdeg));
                }
            } else {
                let roots = rational_roots(&rp)?;
                let found: usize = roots.iter().map(|(_, m)| m).sum();
                if found < rp.degree().unwrap_or(0) {
                    return Err(Error::Unsupported(
                        "intersection points over Q lie in a number field".into(),
                    ));
                }
                for (t0, _) in roots {
                    base_roots.push((field.one(), t0, 1));
                }
            }
        }
        let mut entries: Vec<DivisorEntry> = vec![];
        for (x0, y0, resdeg) in base_roots {
            let ext = x0.field().clone();
            let fiber = |zc: &[crate::forms::BinaryForm]| -> Result<Poly> {
                let coeffs = zc
                    .iter()
                    .map(|bf| {
                        let mut acc = ext.zero();
                        let deg = bf.degree();
                        for (j, co) in bf.coeffs().iter().enumerate() {
                            let co = embed(co, &ext)?;
                            acc = acc
                                .add(&co.mul(&x0.pow((deg - j) as u64)).mul(&y0.pow(j as u64)));
                        }
                        Ok(acc)
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Poly::from_coeffs(&ext, coeffs))
            };
            let h = fiber(&az)?.gcd(&fiber(&bz)?);
            if h.is_constant() {
                return Err(Error::InvariantViolation("resultant root with empty fiber".into()));
            }
            // the projection must be injective on the intersection: each
            // fiber holds exactly one geometric point
            let z0 = if ext.is_finite() {
                let fac = factor_univariate(&h, 0x11e5)?;
                if fac.factors.len() != 1 || fac.factors[0].0.degree() != Some(1) {
                    continue 'attempt;
                }
                fac.factors[0].0.coeff(0).neg()
            } else {
                let roots = rational_roots(&h)?;
                if roots.len() != 1 || roots[0].1 != h.degree().unwrap() {
                    continue 'attempt;
                }
                roots[0].0.clone()
            };
            let m_ext = embed_matrix_into(&m, &ext)?;
            let v = m_ext.mul_vec(&[x0.clone(), y0.clone(), z0]);
            let point = ProjPoint::new([v[0].clone(), v[1].clone(), v[2].clone()])?;
            let g_ext = embed_form(g, &ext)?;
            let c_ext = embed_form(c, &ext)?;
            let mult = match intersection_multiplicity(&g_ext, &c_ext, point.coords()) {
                Ok(Multiplicity::Finite(mu)) => mu,
                Ok(Multiplicity::Infinite) => return Err(Error::SharedComponent),
                Err(Error::SingularPoint) => return Err(Error::SingularCurve),
                Err(e) => return Err(e),
            };
            if mult == 0 {
                return Err(Error::InvariantViolation(
                    "located intersection point with zero multiplicity".into(),
                ));
            }
            entries.push(DivisorEntry { point, mult, resdeg });
        }
        let div = DivisorOnCurve::new(c.clone(), entries);
        if div.degree() != target_degree {
            return Err(Error::InvariantViolation(format!(
                "Bezout violation: divisor degree {} for product {}",
                div.degree(),
                target_degree
            )));
        }
        return Ok(div);
    }
    Err(Error::AttemptsExhausted(attempts))
}

fn embed_matrix_into(m: &Matrix, target: &Field) -> Result<Matrix> {
    let mut out = Matrix::zero(target, m.rows(), m.cols());
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            *out.at_mut(r, c) = embed(m.at(r, c), target)?;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn form(field: &Field, degree: usize, terms: &[((u16, u16, u16), i64)]) -> TernaryForm {
        TernaryForm::from_terms(
            field,
            degree,
            terms.iter().map(|(e, c)| (*e, field.from_i64(*c))),
        )
        .unwrap()
    }

    fn conic(field: &Field) -> TernaryForm {
        form(field, 2, &[((0, 1, 1), 1), ((2, 0, 0), -1)])
    }

    #[test]
    fn coordinate_line_cuts_conic_transversally() {
        let q = Field::rationals();
        let c = conic(&q);
        let l = Line::from_dual_i64(&q, 1, 0, 0).unwrap();
        let d = line_divisor(&l, &c).unwrap();
        assert_eq!(d.degree(), 2);
        let p1 = ProjPoint::from_i64(&q, 0, 1, 0).unwrap();
        let p2 = ProjPoint::from_i64(&q, 0, 0, 1).unwrap();
        assert_eq!(d.multiplicity_of(&p1), 1);
        assert_eq!(d.multiplicity_of(&p2), 1);
    }

    #[test]
    fn tangent_line_cuts_with_multiplicity_two() {
        let q = Field::rationals();
        let c = conic(&q);
        let l = Line::from_dual_i64(&q, 0, 1, 0).unwrap();
        let d = line_divisor(&l, &c).unwrap();
        let p = ProjPoint::from_i64(&q, 0, 0, 1).unwrap();
        assert_eq!(d.multiplicity_of(&p), 2);
        assert_eq!(d.degree(), 2);
    }

    #[test]
    fn quartic_restriction_with_fourfold_point() {
        // y z^3 + x^4 restricted to y = 0 is x^4
        let q = Field::rationals();
        let c = form(&q, 4, &[((0, 1, 3), 1), ((4, 0, 0), 1)]);
        let l = Line::from_dual_i64(&q, 0, 1, 0).unwrap();
        let d = line_divisor(&l, &c).unwrap();
        let p = ProjPoint::from_i64(&q, 0, 0, 1).unwrap();
        assert_eq!(d.multiplicity_of(&p), 4);
    }

    #[test]
    fn line_divisor_with_extension_points() {
        // Fermat quartic over F_13 against a generic line
        let f13 = Field::prime(13).unwrap();
        let c = form(&f13, 4, &[((4, 0, 0), 1), ((0, 4, 0), 1), ((0, 0, 4), 1)]);
        let l = Line::from_dual_i64(&f13, 1, 2, 5).unwrap();
        let d = line_divisor(&l, &c).unwrap();
        assert_eq!(d.degree(), 4);
    }

    #[test]
    fn shared_component_detected() {
        let q = Field::rationals();
        let c = conic(&q);
        let x = TernaryForm::variable(&q, 0);
        let shared = c.mul(&x);
        assert!(matches!(intersection_divisor(&shared, &c), Err(Error::SharedComponent)));
    }

    #[test]
    fn intersection_divisor_on_conic() {
        let q = Field::rationals();
        let c = conic(&q);
        let x = TernaryForm::variable(&q, 0);
        let d = intersection_divisor(&x, &c).unwrap();
        assert_eq!(d.degree(), 2);
        let p1 = ProjPoint::from_i64(&q, 0, 1, 0).unwrap();
        let p2 = ProjPoint::from_i64(&q, 0, 0, 1).unwrap();
        assert_eq!(d.multiplicity_at(&p1).unwrap(), 1);
        assert_eq!(d.multiplicity_at(&p2).unwrap(), 1);
        let y = TernaryForm::variable(&q, 1);
        let d = intersection_divisor(&y, &c).unwrap();
        assert_eq!(d.multiplicity_at(&p2).unwrap(), 2);
        assert_eq!(d.degree(), 2);
    }

    #[test]
    fn bezout_for_conic_pair_over_f7() {
        let f7 = Field::prime(7).unwrap();
        let c = conic(&f7);
        let g = form(&f7, 2, &[((2, 0, 0), 1), ((0, 2, 0), 1), ((0, 0, 2), 1)]);
        let d = intersection_divisor(&g, &c).unwrap();
        assert_eq!(d.degree(), 4);
    }

    #[test]
    fn line_and_curve_paths_agree() {
        let f11 = Field::prime(11).unwrap();
        let c = form(&f11, 3, &[((3, 0, 0), 1), ((0, 3, 0), 1), ((0, 0, 3), 1)]);
        let l = Line::from_dual_i64(&f11, 1, 1, 0).unwrap();
        let ld = line_divisor(&l, &c).unwrap();
        let id = intersection_divisor(&l.as_form(), &c).unwrap();
        assert_eq!(id.degree(), 3);
        for (p, m) in ld.entries() {
            if p.field() == &f11 {
                assert_eq!(id.multiplicity_at(p).unwrap(), *m);
            }
        }
    }

    #[test]
    fn orbit_matching_identifies_conjugates() {
        let f3 = Field::prime(3).unwrap();
        // roots of t^2 + 1 over F_9 are conjugate
        let p = Poly::from_i64_coeffs(&f3, &[1, 0, 1]);
        let roots = roots_in_splitting_field(&p, 0).unwrap();
        let a = ProjPoint::new([
            roots[0].clone(),
            roots[0].field().one(),
            roots[0].field().zero(),
        ])
        .unwrap();
        let b = ProjPoint::new([
            roots[1].clone(),
            roots[1].field().one(),
            roots[1].field().zero(),
        ])
        .unwrap();
        assert!(orbit_equivalent(&a, &b, &f3).unwrap());
        let c = ProjPoint::from_i64(&f3, 1, 1, 0).unwrap();
        assert!(!orbit_equivalent(&a, &c, &f3).unwrap());
    }
}
