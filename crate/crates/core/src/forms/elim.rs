//! Elimination of one variable from pairs of ternary forms: resultants by
//! evaluation and interpolation, and gcds by a primitive polynomial
//! remainder sequence over the ring of binary forms.

use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::field::ext::{canonical_extension, embed, project};
use crate::field::poly::Poly;
use crate::field::{FieldElement, FieldKind};
use crate::forms::{BinaryForm, TernaryForm};

/// Resultant of f and g with respect to z, as a binary form in (x, y) of
/// degree deg f * deg g. Both forms must have a nonzero constant
/// coefficient at their top z power (callers arrange this by a linear
/// change of coordinates), so specialization never drops z-degree.
pub fn resultant_z(f: &TernaryForm, g: &TernaryForm) -> Result<BinaryForm> {
    let field = f.field().clone();
    if f.is_zero() || g.is_zero() {
        return Err(Error::ZeroForm);
    }
    let (df, dg) = (f.degree(), g.degree());
    if f.coeff((0, 0, df as u16)).is_zero() || g.coeff((0, 0, dg as u16)).is_zero() {
        return Err(Error::InvariantViolation(
            "resultant_z requires unit leading z-coefficients".into(),
        ));
    }
    let target = df * dg;
    if target == 0 {
        // both constants in z after the leading check means deg 0 forms
        return Ok(BinaryForm::constant(&field, field.one()));
    }
    let samples_needed = target + 1;
    let big_enough = match field.kind() {
        FieldKind::Rationals => true,
        _ => field
            .order()
            .and_then(|o| o.to_usize())
            .map(|o| o >= samples_needed)
            .unwrap_or(true),
    };
    if big_enough {
        return resultant_z_interpolated(f, g, target);
    }
    // move to an extension with enough sample points, then pull back
    let p = field.characteristic();
    let e = field.extension_degree();
    let mut k = e * 2;
    while (p as u128).pow((k / e.max(1)) as u32 * e as u32) < samples_needed as u128 {
        k += e;
    }
    let big = canonical_extension(p, k)?;
    let lift = |h: &TernaryForm| -> Result<TernaryForm> {
        TernaryForm::from_terms(
            &big,
            h.degree(),
            h.terms()
                .map(|(ex, c)| Ok((*ex, embed(c, &big)?)))
                .collect::<Result<Vec<_>>>()?,
        )
    };
    let r = resultant_z_interpolated(&lift(f)?, &lift(g)?, target)?;
    let coeffs = r
        .coeffs()
        .iter()
        .map(|c| project(c, &field))
        .collect::<Result<Vec<_>>>()?;
    Ok(BinaryForm::from_coeffs(&field, coeffs))
}

fn resultant_z_interpolated(f: &TernaryForm, g: &TernaryForm, target: usize) -> Result<BinaryForm> {
    let field = f.field().clone();
    let fz = f.z_coefficients();
    let gz = g.z_coefficients();
    let one = field.one();
    let mut points = vec![];
    let mut iter: Box<dyn Iterator<Item = FieldElement>> = match field.kind() {
        FieldKind::Rationals => Box::new((0i64..).map({
            let f = field.clone();
            move |i| f.from_i64(i)
        })),
        _ => field.enumerate(),
    };
    while points.len() < target + 1 {
        let y0 = iter.next().expect("field large enough for interpolation");
        let fp = Poly::from_coeffs(&field, fz.iter().map(|b| b.eval(&one, &y0)).collect());
        let gp = Poly::from_coeffs(&field, gz.iter().map(|b| b.eval(&one, &y0)).collect());
        let r = fp.resultant(&gp)?;
        points.push((y0, r));
    }
    let r = Poly::interpolate(&points)?;
    Ok(BinaryForm::from_poly(&r, target))
}

// --- gcd over k[x,y][z] ---------------------------------------------------

/// Polynomials in z with binary-form coefficients; index = z power.
/// All entries of a homogeneous input satisfy deg coeffs[i] + i = total.
type ZPoly = Vec<BinaryForm>;

fn z_degree(a: &ZPoly) -> Option<usize> {
    a.iter().rposition(|b| !b.is_zero())
}

fn z_trim(mut a: ZPoly) -> ZPoly {
    while a.last().map(|b| b.is_zero()).unwrap_or(false) {
        a.pop();
    }
    a
}

fn z_scale(a: &ZPoly, c: &BinaryForm) -> ZPoly {
    a.iter().map(|b| b.mul(c)).collect()
}

fn z_sub(a: &ZPoly, b: &ZPoly) -> ZPoly {
    // entries must have matching binary degrees; guaranteed for
    // homogeneous operands of equal total degree
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| match (a.get(i), b.get(i)) {
            (Some(x), Some(y)) => x.sub(y),
            (Some(x), None) => x.clone(),
            (None, Some(y)) => y.scale(&y.field().one().neg()),
            (None, None) => unreachable!(),
        })
        .collect()
}

/// Pseudo-remainder of a by b in z: multiplies a by powers of lc(b) so the
/// division is fraction-free.
fn z_prem(a: &ZPoly, b: &ZPoly) -> ZPoly {
    let db = z_degree(b).expect("nonzero divisor");
    let lcb = b[db].clone();
    let mut r = a.clone();
    loop {
        let Some(dr) = z_degree(&r) else { return r };
        if dr < db {
            return r;
        }
        let lcr = r[dr].clone();
        let shift = dr - db;
        // r <- lc(b) * r - lc(r) * z^shift * b
        let left = z_scale(&r, &lcb);
        let mut right: ZPoly = vec![];
        for i in 0..shift {
            // zero entry whose degree matches left[i]
            right.push(BinaryForm::zero(lcr.field(), left[i].degree()));
        }
        for bi in b.iter() {
            right.push(bi.mul(&lcr));
        }
        r = z_trim(z_sub(&left, &right));
    }
}

fn z_content(a: &ZPoly) -> Result<BinaryForm> {
    let mut it = a.iter().filter(|b| !b.is_zero());
    let first = it.next().ok_or(Error::ZeroForm)?;
    let mut g = first.clone();
    for b in it {
        g = g.gcd(b);
    }
    Ok(g)
}

fn z_primitive(a: &ZPoly) -> Result<ZPoly> {
    let c = z_content(a)?;
    a.iter()
        .map(|b| {
            if b.is_zero() {
                Ok(BinaryForm::zero(b.field(), b.degree() - c.degree()))
            } else {
                b.exact_div(&c)
            }
        })
        .collect()
}

/// Gcd of two nonzero ternary forms, up to a scalar. Constant output is
/// returned as the form 1 of degree 0.
pub fn mv_gcd(f: &TernaryForm, g: &TernaryForm) -> Result<TernaryForm> {
    let field = f.field().clone();
    if f.is_zero() || g.is_zero() {
        return Err(Error::ZeroForm);
    }
    let fz = z_trim(f.z_coefficients());
    let gz = z_trim(g.z_coefficients());
    let cf = z_content(&fz)?;
    let cg = z_content(&gz)?;
    let content_gcd = cf.gcd(&cg);
    let mut a = z_primitive(&fz)?;
    let mut b = z_primitive(&gz)?;
    if z_degree(&a) < z_degree(&b) {
        std::mem::swap(&mut a, &mut b);
    }
    let pp_gcd: ZPoly = loop {
        let Some(db) = z_degree(&b) else { break a };
        if db == 0 {
            // primitive and z-constant means a unit
            break vec![BinaryForm::constant(&field, field.one())];
        }
        let r = z_prem(&a, &b);
        if z_degree(&r).is_none() {
            break b;
        }
        a = std::mem::replace(&mut b, z_primitive(&r)?);
    };
    let pp_gcd = z_primitive(&pp_gcd)?;
    let combined: ZPoly = pp_gcd.iter().map(|c| c.mul(&content_gcd)).collect();
    if combined.len() == 1 && combined[0].degree() == 0 {
        return Ok(TernaryForm::monomial(&field, (0, 0, 0), field.one()));
    }
    TernaryForm::from_z_coefficients(&field, &combined)
}
