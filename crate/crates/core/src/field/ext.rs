//! Construction of extension fields and canonical embeddings between them.
//!
//! The algebraic closure of `F_p` is approximated on demand: whenever a
//! computation meets an irreducible factor of degree `e > 1` it moves to the
//! canonical copy of `F_{p^e}`. Towers are always flattened back to a single
//! extension of the prime field.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::factor::{factor_univariate, is_irreducible};
use crate::field::poly::Poly;
use crate::field::{Field, FieldElement, FieldKind};

/// Build `F_{p^k}` with an irreducible modulus found by seeded random
/// search; deterministic per seed. `k = 1` is rejected: use `Field::prime`.
pub fn make_extension(p: u64, k: usize, seed: u64) -> Result<Field> {
    if !crate::field::is_prime_u64(p) {
        return Err(Error::NotPrime(p));
    }
    if k < 2 {
        return Err(Error::InvalidInput(
            "extension degree must be >= 2; use a prime field for k = 1".into(),
        ));
    }
    let base = Field::prime(p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (p << 16) ^ k as u64);
    loop {
        let mut coeffs: Vec<FieldElement> = (0..k).map(|_| base.from_u64(rng.gen_range(0..p))).collect();
        coeffs.push(base.one());
        let candidate = Poly::from_coeffs(&base, coeffs);
        if candidate.degree() == Some(k) && is_irreducible(&candidate)? {
            let modulus: Vec<u64> = (0..=k).map(|i| candidate.coeff(i).prime_field_coords()[0]).collect();
            return Field::extension(p, modulus);
        }
    }
}

fn canonical_cache() -> &'static Mutex<HashMap<(u64, usize), Field>> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, usize), Field>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The canonical copy of `F_{p^k}` used whenever the library needs "the"
/// extension of a given degree (k = 1 returns the prime field). The
/// modulus search seed is a fixed function of (p, k), so the result is
/// stable across processes.
pub fn canonical_extension(p: u64, k: usize) -> Result<Field> {
    if k <= 1 {
        return Field::prime(p);
    }
    if let Some(f) = canonical_cache().lock().unwrap().get(&(p, k)) {
        return Ok(f.clone());
    }
    let f = make_extension(p, k, 0xcafe_f00d ^ (p.wrapping_mul(31)) ^ k as u64)?;
    canonical_cache()
        .lock()
        .unwrap()
        .insert((p, k), f.clone());
    Ok(f)
}

fn embedding_cache() -> &'static Mutex<HashMap<(Vec<u64>, Vec<u64>, u64), FieldElement>> {
    static CACHE: OnceLock<Mutex<HashMap<(Vec<u64>, Vec<u64>, u64), FieldElement>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Embed an element into a larger field over the same prime field.
/// Supported: identity maps, prime -> extension, and `F_{p^e} -> F_{p^m}`
/// with `e | m`. The generator image is the canonically smallest root of
/// the source modulus in the target, so embeddings are reproducible.
pub fn embed(x: &FieldElement, target: &Field) -> Result<FieldElement> {
    let src = x.field();
    if src == target {
        return Ok(x.clone());
    }
    match (src.kind(), target.kind()) {
        (FieldKind::Prime { p }, FieldKind::Extension { p: p2, .. }) if p == p2 => {
            target.from_coeffs(&x.prime_field_coords())
        }
        (
            FieldKind::Extension { p, k: e, modulus },
            FieldKind::Extension { p: p2, k: m, modulus: tgt_modulus },
        ) if p == p2 && m % e == 0 => {
            let gen_image = generator_image(*p, modulus, tgt_modulus, target)?;
            let coords = x.prime_field_coords();
            let mut acc = target.zero();
            for c in coords.iter().rev() {
                acc = acc.mul(&gen_image).add(&target.from_u64(*c));
            }
            Ok(acc)
        }
        _ => Err(Error::Unsupported(format!(
            "no embedding from {:?} into {:?}",
            src, target
        ))),
    }
}

fn generator_image(
    p: u64,
    src_modulus: &[u64],
    tgt_modulus: &[u64],
    target: &Field,
) -> Result<FieldElement> {
    let key = (src_modulus.to_vec(), tgt_modulus.to_vec(), p);
    if let Some(img) = embedding_cache().lock().unwrap().get(&key) {
        return Ok(img.clone());
    }
    let lifted = Poly::from_coeffs(
        target,
        src_modulus.iter().map(|c| target.from_u64(*c)).collect(),
    );
    let fac = factor_univariate(&lifted, 0x5eed)?;
    let mut roots: Vec<FieldElement> = fac
        .factors
        .iter()
        .filter(|(g, _)| g.degree() == Some(1))
        .map(|(g, _)| g.coeff(0).neg())
        .collect();
    if roots.is_empty() {
        return Err(Error::Unsupported(
            "source modulus has no root in target (degrees incompatible)".into(),
        ));
    }
    roots.sort_by(|a, b| a.canonical_cmp(b));
    let img = roots.remove(0);
    embedding_cache().lock().unwrap().insert(key, img.clone());
    Ok(img)
}

/// Partial inverse of [`embed`]: express an element of a larger field in a
/// subfield, when it actually lies in the image. Errors otherwise.
pub fn project(x: &FieldElement, src: &Field) -> Result<FieldElement> {
    if x.field() == src {
        return Ok(x.clone());
    }
    match (src.kind(), x.field().kind()) {
        (FieldKind::Prime { p }, FieldKind::Extension { p: p2, .. }) if p == p2 => {
            let coords = x.prime_field_coords();
            if coords[1..].iter().any(|c| *c != 0) {
                return Err(Error::InvalidInput("element lies outside the subfield".into()));
            }
            Ok(src.from_u64(coords[0]))
        }
        (
            FieldKind::Extension { p, k: e, modulus },
            FieldKind::Extension { p: p2, k, modulus: tgt_modulus },
        ) if p == p2 && k % e == 0 => {
            let g = generator_image(*p, modulus, tgt_modulus, x.field())?;
            let fp = Field::prime(*p)?;
            // columns: coordinates of g^0 .. g^{e-1} in the big field
            let mut cols: Vec<Vec<u64>> = vec![];
            let mut acc = x.field().one();
            for _ in 0..*e {
                cols.push(acc.prime_field_coords());
                acc = acc.mul(&g);
            }
            let mut m = crate::matrix::Matrix::zero(&fp, *k, *e);
            for (c, col) in cols.iter().enumerate() {
                for (r, v) in col.iter().enumerate() {
                    *m.at_mut(r, c) = fp.from_u64(*v);
                }
            }
            let rhs: Vec<_> = x.prime_field_coords().iter().map(|v| fp.from_u64(*v)).collect();
            let sol = m
                .solve(&rhs)
                .map_err(|_| Error::InvalidInput("element lies outside the subfield".into()))?;
            src.from_coeffs(&sol.iter().map(|c| c.prime_field_coords()[0]).collect::<Vec<_>>())
        }
        _ => Err(Error::Unsupported(format!(
            "no projection from {:?} onto {:?}",
            x.field(),
            src
        ))),
    }
}

/// Smallest canonical field containing both arguments (same prime field).
pub fn compositum(a: &Field, b: &Field) -> Result<Field> {
    if a == b {
        return Ok(a.clone());
    }
    match (a.kind(), b.kind()) {
        (FieldKind::Rationals, FieldKind::Rationals) => Ok(a.clone()),
        (FieldKind::Rationals, _) | (_, FieldKind::Rationals) => Err(Error::DescriptorMismatch),
        _ => {
            let (pa, pb) = (a.characteristic(), b.characteristic());
            if pa != pb {
                return Err(Error::DescriptorMismatch);
            }
            let ea = a.extension_degree();
            let eb = b.extension_degree();
            let m = num_integer::lcm(ea, eb);
            if m == ea {
                Ok(a.clone())
            } else if m == eb {
                Ok(b.clone())
            } else {
                canonical_extension(pa, m)
            }
        }
    }
}

/// All roots of an irreducible polynomial over `F_{p^e}`, returned as
/// elements of the canonical field `F_{p^(e*deg)}` (flattening the tower).
pub fn roots_in_splitting_field(f: &Poly, seed: u64) -> Result<Vec<FieldElement>> {
    let field = f.field().clone();
    let d = f.degree().ok_or(Error::ZeroPolynomial)?;
    if d == 0 {
        return Ok(vec![]);
    }
    let p = field.characteristic();
    if p == 0 {
        return Err(Error::Unsupported(
            "splitting fields over Q are out of scope; only rational roots are located".into(),
        ));
    }
    let e = field.extension_degree();
    let target = canonical_extension(p, e * d)?;
    let lifted = Poly::from_coeffs(
        &target,
        f.coeffs()
            .iter()
            .map(|c| embed(c, &target))
            .collect::<Result<Vec<_>>>()?,
    );
    let fac = factor_univariate(&lifted, seed)?;
    let mut roots: Vec<FieldElement> = fac
        .factors
        .iter()
        .filter(|(g, _)| g.degree() == Some(1))
        .map(|(g, _)| g.coeff(0).neg())
        .collect();
    roots.sort_by(|a, b| a.canonical_cmp(b));
    Ok(roots)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn make_extension_examples() {
        let f9 = make_extension(3, 2, 42).unwrap();
        assert_eq!(f9.order(), Some(9u32.into()));
        let f125 = make_extension(5, 3, 7).unwrap();
        assert_eq!(f125.order(), Some(125u32.into()));
        assert!(make_extension(5, 1, 0).is_err());
        assert!(matches!(make_extension(4, 2, 0), Err(Error::NotPrime(4))));
    }

    #[test]
    fn embedding_respects_arithmetic() {
        let f4 = canonical_extension(2, 2).unwrap();
        let f16 = canonical_extension(2, 4).unwrap();
        let t = f4.generator().unwrap();
        let a = t.clone();
        let b = t.mul(&t).add(&f4.one());
        let ea = embed(&a, &f16).unwrap();
        let eb = embed(&b, &f16).unwrap();
        assert_eq!(embed(&a.mul(&b), &f16).unwrap(), ea.mul(&eb));
        assert_eq!(embed(&a.add(&b), &f16).unwrap(), ea.add(&eb));
    }

    #[test]
    fn splitting_field_roots() {
        // x^2 + 1 over F_3 splits in F_9
        let f3 = Field::prime(3).unwrap();
        let f = Poly::from_i64_coeffs(&f3, &[1, 0, 1]);
        let roots = roots_in_splitting_field(&f, 0).unwrap();
        assert_eq!(roots.len(), 2);
        for r in &roots {
            assert!(r.mul(r).add(&r.field().one()).is_zero());
        }
    }
}
