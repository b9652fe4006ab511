//! Dense polynomials over `F_p` and distinct-degree factorisation.
//!
//! Coefficients are little-endian `u64` residues; the zero polynomial is
//! the empty vector.

use crate::arith::{mul_mod, pow_mod};

pub type Poly = Vec<u64>;

fn trim(mut a: Poly) -> Poly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn degree(a: &Poly) -> Option<usize> {
    a.len().checked_sub(1)
}

/// Reduce integer coefficients, given highest degree first, modulo `p`.
pub fn reduce(coeffs_desc: &[i64], p: u64) -> Poly {
    trim(coeffs_desc.iter().rev().map(|&c| (c as i128).rem_euclid(p as i128) as u64).collect())
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn sub(a: &Poly, b: &Poly, p: u64) -> Poly {
    let n = a.len().max(b.len());
    let at = |v: &Poly, i: usize| v.get(i).copied().unwrap_or(0);
    trim((0..n).map(|i| (at(a, i) + p - at(b, i)) % p).collect())
}

fn mul(a: &Poly, b: &Poly, p: u64) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mul_mod(x, y, p)) % p;
        }
    }
    trim(out)
}

/// Quotient and remainder; `b` must be nonzero.
fn div_rem(a: &Poly, b: &Poly, p: u64) -> (Poly, Poly) {
    let db = degree(b).expect("division by zero polynomial");
    let lead_inv = inv_mod(b[db], p);
    let mut r = a.clone();
    let mut q = vec![0u64; a.len().saturating_sub(db)];
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let c = mul_mod(r[dr], lead_inv, p);
        q[dr - db] = c;
        for (j, &bj) in b.iter().enumerate() {
            let k = dr - db + j;
            r[k] = (r[k] + p - mul_mod(c, bj, p)) % p;
        }
        r = trim(r);
    }
    (trim(q), r)
}

fn rem(a: &Poly, b: &Poly, p: u64) -> Poly {
    div_rem(a, b, p).1
}

fn monic(a: Poly, p: u64) -> Poly {
    match a.last() {
        Some(&l) if l != 1 => {
            let li = inv_mod(l, p);
            a.into_iter().map(|c| mul_mod(c, li, p)).collect()
        }
        _ => a,
    }
}

pub fn gcd(a: &Poly, b: &Poly, p: u64) -> Poly {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    monic(a, p)
}

pub fn derivative(a: &Poly, p: u64) -> Poly {
    trim(a.iter().enumerate().skip(1).map(|(i, &c)| mul_mod(c, i as u64 % p, p)).collect())
}

/// `base^e mod m`.
fn pow_rem(base: &Poly, mut e: u64, m: &Poly, p: u64) -> Poly {
    let mut result = vec![1u64];
    let mut b = rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            result = rem(&mul(&result, &b, p), m, p);
        }
        b = rem(&mul(&b, &b, p), m, p);
        e >>= 1;
    }
    rem(&result, m, p)
}

pub fn is_squarefree(f: &Poly, p: u64) -> bool {
    let d = derivative(f, p);
    !d.is_empty() && gcd(f, &d, p).len() == 1
}

/// Degrees of the irreducible factors of a squarefree `f`, ascending.
pub fn distinct_degree_pattern(f: &Poly, p: u64) -> Vec<usize> {
    let mut f = monic(f.clone(), p);
    let x: Poly = vec![0, 1];
    let mut h = x.clone();
    let mut out = Vec::new();
    let mut d = 1;
    while degree(&f).unwrap_or(0) >= 2 * d {
        h = pow_rem(&h, p, &f, p);
        let g = gcd(&f, &sub(&h, &x, p), p);
        let dg = degree(&g).unwrap_or(0);
        if dg > 0 {
            out.extend(std::iter::repeat_n(d, dg / d));
            f = div_rem(&f, &g, p).0;
            h = rem(&h, &f, p);
        }
        d += 1;
    }
    if let Some(df) = degree(&f) {
        if df > 0 {
            out.push(df);
        }
    }
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_round_trip() {
        let p = 13;
        let a = reduce(&[1, 4, 0, -3, 2], p);
        let b = reduce(&[2, 0, 7], p);
        let (q, r) = div_rem(&a, &b, p);
        assert_eq!(sub(&a, &mul(&q, &b, p), p), r);
        assert!(degree(&r) < degree(&b));
    }

    #[test]
    fn small_patterns() {
        assert_eq!(distinct_degree_pattern(&reduce(&[1, 0, 1], 5), 5), vec![1, 1]);
        assert_eq!(distinct_degree_pattern(&reduce(&[1, 0, 1], 7), 7), vec![2]);
        // (x² + 1)(x - 1)(x³ + 2x + 1) over F_3, the cubic having no roots
        let f = mul(&mul(&reduce(&[1, 0, 1], 3), &reduce(&[1, 2], 3), 3), &reduce(&[1, 0, 2, 1], 3), 3);
        let pat = distinct_degree_pattern(&f, 3);
        assert_eq!(pat.iter().sum::<usize>(), 6);
        assert_eq!(pat, vec![1, 2, 3]);
        assert_eq!(distinct_degree_pattern(&reduce(&[1, 1, 1], 2), 2), vec![2]);
    }

    #[test]
    fn squarefree_detection() {
        assert!(!is_squarefree(&reduce(&[1, -2, 1], 7), 7));
        assert!(is_squarefree(&reduce(&[1, 0, 1], 7), 7));
        assert!(!is_squarefree(&reduce(&[1, 0, 1], 2), 2));
    }
}
