//! Small-integer and big-integer number theory used throughout the crate:
//! primality, factorization, valuations and quadratic residuosity.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for the full `u64` range.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// All primes `<= bound` by a plain sieve.
fn small_primes() -> &'static [u64] {
    static PRIMES: std::sync::OnceLock<Vec<u64>> = std::sync::OnceLock::new();
    PRIMES.get_or_init(|| primes_up_to(10_000))
}

pub fn primes_up_to(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    let n = bound as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Residue of an arbitrary integer modulo `m`, in `0..m`.
pub fn bigint_mod(x: &BigInt, m: u64) -> u64 {
    x.mod_floor(&BigInt::from(m)).to_u64().expect("residue fits in u64")
}

/// Legendre symbol `(a / p)` for an odd prime `p`, via Euler's criterion.
pub fn legendre(a: u64, p: u64) -> i32 {
    debug_assert!(p > 2);
    let a = a % p;
    if a == 0 {
        return 0;
    }
    if pow_mod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// `ord_p(x)`; `None` for `x = 0`.
pub fn valuation(x: &BigInt, p: u64) -> Option<u32> {
    if x.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut x = x.clone();
    let mut v = 0;
    loop {
        let (q, r) = x.div_rem(&p);
        if !r.is_zero() {
            return Some(v);
        }
        x = q;
        v += 1;
    }
}

/// Multiplicative order of `u` modulo `p` (`u` coprime to `p`).
pub fn multiplicative_order(u: u64, p: u64) -> u64 {
    let mut x = u % p;
    let mut k = 1;
    while x != 1 {
        x = mul_mod(x, u, p);
        k += 1;
        if k > p {
            return 0;
        }
    }
    k
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FactorError {
    #[error("cannot factor zero")]
    Zero,
    #[error("prime factor {0} does not fit in 64 bits")]
    PrimeTooLarge(String),
}

/// Prime factorization of `|n|` as `(prime, exponent)` pairs in increasing order.
pub fn factor(n: &BigInt) -> Result<Vec<(u64, u32)>, FactorError> {
    if n.is_zero() {
        return Err(FactorError::Zero);
    }
    let mut rest: BigUint = n.magnitude().clone();
    let mut out: Vec<(u64, u32)> = Vec::new();
    for &p in small_primes() {
        if let Some(r) = rest.to_u64() {
            if p * p > r {
                break;
            }
        }
        // cheap remainder test before a full division
        if (&rest % p).is_zero() {
            let mut e = 0;
            while (&rest % p).is_zero() {
                rest /= p;
                e += 1;
            }
            out.push((p, e));
        }
    }
    let mut stack = vec![rest];
    let mut large: Vec<u64> = Vec::new();
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if big_probable_prime(&m) {
            let p = m.to_u64().ok_or_else(|| FactorError::PrimeTooLarge(m.to_string()))?;
            large.push(p);
            continue;
        }
        let d = pollard_brent(&m);
        stack.push(&m / &d);
        stack.push(d);
    }
    large.sort_unstable();
    for p in large {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    Ok(out)
}

fn big_probable_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime(small);
    }
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'witness: for a in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

// Returns a nontrivial divisor of a composite `n` with no small factors.
fn pollard_brent(n: &BigUint) -> BigUint {
    let one = BigUint::one();
    let mut c = BigUint::one();
    loop {
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut y = BigUint::from(2u32);
        let mut r = 1u64;
        let mut q = BigUint::one();
        let mut g = BigUint::one();
        let mut x = y.clone();
        let mut ys = y.clone();
        while g == one {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g == one {
                ys = y.clone();
                for _ in 0..(r - k).min(128) {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = (q * diff) % n;
                }
                g = q.gcd(n);
                k += 128;
            }
            r *= 2;
        }
        if &g == n {
            loop {
                ys = f(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if g != one {
                    break;
                }
            }
        }
        if &g != n {
            return g;
        }
        c += 1u32;
    }
}

/// Signed integer from a `BigInt` when it fits.
pub fn to_i64(x: &BigInt) -> Option<i64> {
    x.to_i64()
}

/// `true` when the squarefree integer `d` has no repeated prime factor.
pub fn is_squarefree(d: i64) -> bool {
    if d == 0 {
        return false;
    }
    match factor(&BigInt::from(d)) {
        Ok(f) => f.iter().all(|&(_, e)| e == 1),
        Err(_) => false,
    }
}

pub fn sign_of(x: &BigInt) -> i32 {
    match x.sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}
