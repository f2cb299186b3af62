//! Univariate polynomial factorization over finite fields:
//! squarefree decomposition, distinct-degree splitting, then randomized
//! equal-degree (Cantor-Zassenhaus) splitting. Randomized steps are
//! deterministic per seed.
//!
//! Also rational root extraction over Q, which is all the factorization
//! the rest of the crate needs in characteristic zero.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::poly::Poly;
use crate::field::{Field, FieldElement, FieldKind};

/// Factorization of a nonzero polynomial: leading coefficient times the
/// product of monic irreducible factors with multiplicities.
#[derive(Clone, Debug)]
pub struct Factorization {
    pub leading: FieldElement,
    pub factors: Vec<(Poly, usize)>,
}

impl Factorization {
    /// Re-multiply, for checks.
    pub fn expand(&self) -> Poly {
        let field = self.leading.field().clone();
        let mut acc = Poly::constant(self.leading.clone());
        for (f, m) in &self.factors {
            acc = acc.mul(&f.pow(*m));
        }
        let _ = field;
        acc
    }
}

/// Factor a nonzero univariate polynomial over a finite field.
pub fn factor_univariate(f: &Poly, seed: u64) -> Result<Factorization> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let field = f.field().clone();
    if !field.is_finite() {
        return Err(Error::Unsupported(
            "full factorization only over finite fields; use rational_roots over Q".into(),
        ));
    }
    let leading = f.leading_coeff().unwrap().clone();
    let monic = f.monic()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut factors: Vec<(Poly, usize)> = vec![];
    for (part, mult) in squarefree_decomposition(&monic)? {
        for (sf, d) in distinct_degree_split(&part)? {
            for irr in equal_degree_split(&sf, d, &mut rng)? {
                factors.push((irr, mult));
            }
        }
    }
    factors.sort_by(|(a, ma), (b, mb)| {
        a.degree()
            .cmp(&b.degree())
            .then_with(|| cmp_poly_canonical(a, b))
            .then(ma.cmp(mb))
    });
    Ok(Factorization { leading, factors })
}

fn cmp_poly_canonical(a: &Poly, b: &Poly) -> std::cmp::Ordering {
    let n = a.coeffs().len().max(b.coeffs().len());
    for i in (0..n).rev() {
        let ord = a.coeff(i).canonical_cmp(&b.coeff(i));
        if ord != std::cmp::Ordering::Equal {
            return ord;
        }
    }
    std::cmp::Ordering::Equal
}

/// Monic input; returns pairwise-coprime squarefree monic parts with
/// multiplicities. Handles inseparable parts via p-th roots.
fn squarefree_decomposition(f: &Poly) -> Result<Vec<(Poly, usize)>> {
    let field = f.field().clone();
    let p = field.characteristic() as usize;
    let mut out: Vec<(Poly, usize)> = vec![];
    if f.is_constant() {
        return Ok(out);
    }
    let deriv = f.derivative();
    if deriv.is_zero() {
        // f is a polynomial in X^p; take the p-th root of each coefficient.
        let root = pth_root_poly(f)?;
        for (g, m) in squarefree_decomposition(&root)? {
            out.push((g, m * p));
        }
        return Ok(out);
    }
    let mut c = f.gcd(&deriv);
    let mut w = f.divrem(&c)?.0;
    let mut i = 1usize;
    while !w.is_constant() {
        let y = w.gcd(&c);
        let z = w.divrem(&y)?.0;
        if !z.is_constant() {
            out.push((z.monic()?, i));
        }
        w = y;
        c = c.divrem(&w)?.0;
        i += 1;
    }
    if !c.is_constant() {
        // remaining part is a polynomial in X^p
        let root = pth_root_poly(&c.monic()?)?;
        for (g, m) in squarefree_decomposition(&root)? {
            // merge with any factor already present
            if let Some(entry) = out.iter_mut().find(|(h, _)| *h == g) {
                entry.1 += m * p;
            } else {
                out.push((g, m * p));
            }
        }
    }
    Ok(out)
}

/// For f with zero derivative (so f(X) = g(X^p)), return g with each
/// coefficient replaced by its p-th root.
fn pth_root_poly(f: &Poly) -> Result<Poly> {
    let field = f.field().clone();
    let p = field.characteristic();
    let q = field.order().ok_or_else(|| Error::Unsupported("p-th roots need a finite field".into()))?;
    let e = &q / BigUint::from(p); // a^(q/p) is the p-th root in F_q
    let deg = f.degree().unwrap();
    let mut coeffs = vec![];
    for i in (0..=deg).step_by(p as usize) {
        coeffs.push(f.coeff(i).pow_big(&e));
    }
    Ok(Poly::from_coeffs(&field, coeffs))
}

/// Monic squarefree input; returns (product of irreducible factors of
/// degree d, d) pairs.
fn distinct_degree_split(f: &Poly) -> Result<Vec<(Poly, usize)>> {
    let field = f.field().clone();
    let q = field.order().unwrap();
    let x = Poly::x(&field);
    let mut out = vec![];
    let mut rest = f.clone();
    let mut h = x.clone();
    let mut d = 0usize;
    while let Some(dr) = rest.degree() {
        if dr == 0 {
            break;
        }
        d += 1;
        if 2 * d > dr {
            // remainder is irreducible
            out.push((rest.clone(), dr));
            break;
        }
        h = h.pow_mod(&q, &rest)?;
        let g = rest.gcd(&h.sub(&x));
        if !g.is_constant() {
            out.push((g.clone(), d));
            rest = rest.divrem(&g)?.0;
            h = h.rem(&rest)?;
        }
    }
    Ok(out)
}

/// Monic squarefree product of irreducibles all of degree d; splits into
/// the individual factors (Cantor-Zassenhaus, with the trace construction
/// in characteristic 2).
fn equal_degree_split(f: &Poly, d: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Poly>> {
    let n = f.degree().unwrap();
    if n == d {
        return Ok(vec![f.clone()]);
    }
    let field = f.field().clone();
    let q = field.order().unwrap();
    loop {
        let a = random_poly_below(&field, n, rng);
        if a.is_constant() {
            continue;
        }
        let g = f.gcd(&a);
        let splitter = if !g.is_constant() && g.degree() < f.degree() {
            g
        } else if q.is_even() {
            // trace map over F_2: T(a) = a + a^2 + ... + a^(2^(dk-1))
            let k = field.extension_degree();
            let mut acc = a.clone();
            let mut pw = a.clone();
            for _ in 1..(d * k) {
                pw = pw.mul(&pw).rem(f)?;
                acc = acc.add(&pw);
            }
            f.gcd(&acc)
        } else {
            let e = (q.pow(d as u32) - BigUint::one()) / BigUint::from(2u32);
            let b = a.pow_mod(&e, f)?;
            f.gcd(&b.sub(&Poly::one(&field)))
        };
        if splitter.is_constant() || splitter.degree() == f.degree() {
            continue;
        }
        let mut left = equal_degree_split(&splitter, d, rng)?;
        let right = equal_degree_split(&f.divrem(&splitter)?.0, d, rng)?;
        left.extend(right);
        return Ok(left);
    }
}

fn random_poly_below(field: &Field, n: usize, rng: &mut ChaCha8Rng) -> Poly {
    let coeffs = (0..n).map(|_| random_element(field, rng)).collect();
    Poly::from_coeffs(field, coeffs)
}

pub fn random_element(field: &Field, rng: &mut ChaCha8Rng) -> FieldElement {
    match field.kind() {
        FieldKind::Rationals => field.from_i64(rng.gen_range(-1000..=1000)),
        FieldKind::Prime { p } => field.from_i64(rng.gen_range(0..*p) as i64),
        FieldKind::Extension { p, k, .. } => {
            let coeffs: Vec<u64> = (0..*k).map(|_| rng.gen_range(0..*p)).collect();
            field.from_coeffs(&coeffs).unwrap()
        }
    }
}

pub fn random_nonzero_element(field: &Field, rng: &mut ChaCha8Rng) -> FieldElement {
    loop {
        let x = random_element(field, rng);
        if !x.is_zero() {
            return x;
        }
    }
}

/// Roots (with multiplicity) of a nonzero polynomial in its own
/// coefficient field.
pub fn roots_in_field(f: &Poly, seed: u64) -> Result<Vec<(FieldElement, usize)>> {
    if f.field().is_finite() {
        let fac = factor_univariate(f, seed)?;
        Ok(fac
            .factors
            .into_iter()
            .filter(|(g, _)| g.degree() == Some(1))
            .map(|(g, m)| (g.coeff(0).neg(), m))
            .collect())
    } else {
        rational_roots(f)
    }
}

/// Rational roots with multiplicity, via the rational root theorem on the
/// primitive integer model. Divisor enumeration is by trial division, so
/// the cleared numerator and leading coefficient must fit in u64.
pub fn rational_roots(f: &Poly) -> Result<Vec<(FieldElement, usize)>> {
    use num_bigint::BigInt;
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let field = f.field().clone();
    let mut out = vec![];
    let mut g = f.clone();
    // strip roots at zero
    let mut zero_mult = 0usize;
    while !g.is_zero() && g.coeff(0).is_zero() {
        g = g.divrem(&Poly::x(&field))?.0;
        zero_mult += 1;
    }
    if zero_mult > 0 {
        out.push((field.zero(), zero_mult));
    }
    if g.is_constant() {
        return Ok(out);
    }
    // integer model
    let mut den_lcm = num_bigint::BigInt::one();
    for c in g.coeffs() {
        let r = c.rational_value().expect("rational_roots called over Q");
        den_lcm = den_lcm.lcm(r.denom());
    }
    let ints: Vec<BigInt> = g
        .coeffs()
        .iter()
        .map(|c| {
            let r = c.rational_value().unwrap();
            r.numer() * (&den_lcm / r.denom())
        })
        .collect();
    let a0 = ints.first().unwrap().abs();
    let an = ints.last().unwrap().abs();
    let a0: u64 = a0.to_u64().ok_or_else(|| {
        Error::Unsupported("rational root search overflow (constant term too large)".into())
    })?;
    let an: u64 = an.to_u64().ok_or_else(|| {
        Error::Unsupported("rational root search overflow (leading term too large)".into())
    })?;
    let mut candidates = vec![];
    for p in divisors_u64(a0) {
        for q in divisors_u64(an) {
            candidates.push((p as i64, q as i64));
            candidates.push(((p as i64).wrapping_neg(), q as i64));
        }
    }
    for (num, den) in candidates {
        let cand = field.fraction(num, den)?;
        if out.iter().any(|(r, _)| *r == cand) {
            continue;
        }
        if g.eval(&cand).is_zero() {
            let lin = Poly::linear_from_root(&cand);
            let mut m = 0usize;
            loop {
                let (q, r) = g.divrem(&lin)?;
                if !r.is_zero() {
                    break;
                }
                g = q;
                m += 1;
            }
            out.push((cand, m));
        }
    }
    Ok(out)
}

fn divisors_u64(n: u64) -> Vec<u64> {
    if n == 0 {
        return vec![];
    }
    let mut primes: std::collections::BTreeMap<u64, u32> = std::collections::BTreeMap::new();
    factor_u64(n, &mut primes);
    let mut divisors = vec![1u64];
    for (p, e) in primes {
        let snapshot = divisors.clone();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            divisors.extend(snapshot.iter().map(|d| d * pk));
        }
    }
    divisors.sort_unstable();
    divisors
}

/// Full integer factorization: small trial division, then Brent's variant
/// of Pollard's rho on the remaining composites.
fn factor_u64(mut n: u64, out: &mut std::collections::BTreeMap<u64, u32>) {
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        while n % p == 0 {
            *out.entry(p).or_insert(0) += 1;
            n /= p;
        }
    }
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if crate::field::fp::is_prime_u64(m) {
            *out.entry(m).or_insert(0) += 1;
            continue;
        }
        let d = pollard_rho(m);
        stack.push(d);
        stack.push(m / d);
    }
}

/// A nontrivial factor of an odd composite.
fn pollard_rho(n: u64) -> u64 {
    use crate::field::fp::mulmod;
    debug_assert!(n > 1 && !crate::field::fp::is_prime_u64(n));
    if n % 2 == 0 {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mulmod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = num_integer::gcd(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

/// Irreducibility over a finite field: f of degree n is irreducible iff
/// X^(q^n) = X mod f and gcd(X^(q^(n/t)) - X, f) = 1 for every prime t | n.
pub fn is_irreducible(f: &Poly) -> Result<bool> {
    let field = f.field().clone();
    let q = field.order().ok_or_else(|| {
        Error::Unsupported("irreducibility test only over finite fields".into())
    })?;
    let n = match f.degree() {
        None => return Err(Error::ZeroPolynomial),
        Some(0) => return Ok(false),
        Some(1) => return Ok(true),
        Some(n) => n,
    };
    let f = f.monic()?;
    let x = Poly::x(&field);
    let full = x.pow_mod(&q.pow(n as u32), &f)?;
    if full != x.rem(&f)? {
        return Ok(false);
    }
    for t in prime_divisors(n) {
        let h = x.pow_mod(&q.pow((n / t) as u32), &f)?;
        if !f.gcd(&h.sub(&x)).is_constant() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = vec![];
    let mut d = 2usize;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Used by `Field::extension` to validate a modulus without already
/// having an extension field in hand.
pub fn fp_modulus_is_irreducible(p: u64, modulus: &[u64]) -> bool {
    let base = match Field::prime(p) {
        Ok(f) => f,
        Err(_) => return false,
    };
    let poly = Poly::from_coeffs(&base, modulus.iter().map(|c| base.from_u64(*c)).collect());
    is_irreducible(&poly).unwrap_or(false)
}
