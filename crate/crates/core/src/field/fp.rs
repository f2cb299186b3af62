//! Arithmetic on residues mod a u64 prime, and on dense coefficient
//! vectors over `F_p` (used for the internal representation of extension
//! field elements).

use crate::error::{Error, Result};

pub fn addmod(a: u64, b: u64, p: u64) -> u64 {
    let s = (a as u128 + b as u128) % p as u128;
    s as u64
}

pub fn submod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + (p - b)
    }
}

pub fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    acc
}

/// Inverse mod prime p via extended Euclid. Panics on zero.
pub fn invmod(a: u64, p: u64) -> u64 {
    assert!(a % p != 0, "invmod of zero");
    let (mut r0, mut r1) = (p as i128, (a % p) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    debug_assert_eq!(r0, 1);
    t0.rem_euclid(p as i128) as u64
}

/// Deterministic Miller-Rabin, valid for all n < 2^64.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

// --- dense F_p polynomial vectors (low-to-high), no trailing-zero invariant ---

pub fn polytrim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

pub fn polymul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = addmod(out[i + j], mulmod(x, y, p), p);
        }
    }
    out
}

/// Remainder of `a` by monic `m`.
pub fn polyrem_monic(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let dm = m.len() - 1;
    let mut r: Vec<u64> = a.to_vec();
    polytrim(&mut r);
    while r.len() > dm {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        if lead != 0 {
            for (i, &mc) in m.iter().enumerate() {
                let idx = shift + i;
                r[idx] = submod(r[idx], mulmod(lead, mc, p), p);
            }
        }
        polytrim(&mut r);
        if r.len() <= dm {
            break;
        }
    }
    r
}

/// Multiply two extension elements (fixed-length vectors) mod the monic modulus.
pub fn polymulmod(a: &[u64], b: &[u64], modulus: &[u64], p: u64) -> Vec<u64> {
    let k = modulus.len() - 1;
    let prod = polymul(a, b, p);
    let mut r = polyrem_monic(&prod, modulus, p);
    r.resize(k, 0);
    r
}

/// Inverse of an extension element mod the monic irreducible modulus.
pub fn polyinvmod(a: &[u64], modulus: &[u64], p: u64) -> Result<Vec<u64>> {
    let k = modulus.len() - 1;
    let mut r0: Vec<u64> = modulus.to_vec();
    let mut r1: Vec<u64> = a.to_vec();
    polytrim(&mut r1);
    if r1.is_empty() {
        return Err(Error::DivisionByZero);
    }
    let mut t0: Vec<u64> = vec![];
    let mut t1: Vec<u64> = vec![1];
    while !r1.is_empty() {
        let (q, r) = polydivrem(&r0, &r1, p);
        let qt1 = polymul(&q, &t1, p);
        let mut tnew = polysub(&t0, &qt1, p);
        polytrim(&mut tnew);
        r0 = std::mem::replace(&mut r1, r);
        t0 = std::mem::replace(&mut t1, tnew);
    }
    // r0 is the gcd, a nonzero constant since the modulus is irreducible.
    debug_assert_eq!(r0.len(), 1);
    let c = invmod(r0[0], p);
    let mut out: Vec<u64> = t0.iter().map(|x| mulmod(*x, c, p)).collect();
    out.resize(k, 0);
    Ok(out)
}

pub fn polysub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| submod(a.get(i).copied().unwrap_or(0), b.get(i).copied().unwrap_or(0), p))
        .collect()
}

/// Division with remainder; divisor need not be monic.
pub fn polydivrem(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let mut r: Vec<u64> = a.to_vec();
    polytrim(&mut r);
    let mut b = b.to_vec();
    polytrim(&mut b);
    assert!(!b.is_empty(), "division by zero polynomial");
    let binv = invmod(*b.last().unwrap(), p);
    if r.len() < b.len() {
        return (vec![], r);
    }
    let mut q = vec![0u64; r.len() - b.len() + 1];
    while !r.is_empty() && r.len() >= b.len() {
        let lead = mulmod(*r.last().unwrap(), binv, p);
        let shift = r.len() - b.len();
        q[shift] = lead;
        for (i, &bc) in b.iter().enumerate() {
            r[shift + i] = submod(r[shift + i], mulmod(lead, bc, p), p);
        }
        polytrim(&mut r);
    }
    polytrim(&mut q);
    (q, r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_small() {
        assert!(is_prime_u64(2));
        assert!(is_prime_u64(1009));
        assert!(!is_prime_u64(1));
        assert!(!is_prime_u64(1001));
        assert!(is_prime_u64(18446744073709551557)); // largest u64 prime
    }

    #[test]
    fn invmod_roundtrip() {
        for a in 1..7u64 {
            assert_eq!(mulmod(a, invmod(a, 7), 7), 1);
        }
    }

    #[test]
    fn polydivrem_roundtrip() {
        let p = 13;
        let a = vec![1, 2, 3, 4, 5];
        let b = vec![7, 0, 1];
        let (q, r) = polydivrem(&a, &b, p);
        let mut back = polymul(&q, &b, p);
        back.resize(back.len().max(r.len()), 0);
        for (i, c) in r.iter().enumerate() {
            back[i] = addmod(back[i], *c, p);
        }
        polytrim(&mut back);
        assert_eq!(back, a);
    }
}
