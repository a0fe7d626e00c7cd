//! Small-integer helpers shared by the number-theoretic modules.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Primes `<= limit` by the sieve of Eratosthenes.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let limit = limit as usize;
    let mut composite = vec![false; limit + 1];
    let mut out = Vec::new();
    for i in 2..=limit {
        if !composite[i] {
            out.push(i as u64);
            let mut k = i * i;
            while k <= limit {
                composite[k] = true;
                k += i;
            }
        }
    }
    out
}

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

// Bases that make Miller-Rabin deterministic on all of u64.
const U64_WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Deterministic primality for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &U64_WITNESSES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &U64_WITNESSES {
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

/// Factorization of a machine-size integer by trial division, as
/// `(prime, exponent)` pairs in ascending prime order. `factor_u64(1)` is empty.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    if n <= 1 {
        return out;
    }
    let mut push = |p: u64, n: &mut u64| {
        let mut e = 0;
        while (*n).is_multiple_of(p) {
            *n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    };
    push(2, &mut n);
    push(3, &mut n);
    let mut p = 5;
    while p * p <= n {
        push(p, &mut n);
        push(p + 2, &mut n);
        p += 6;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Number of positive divisors.
pub fn divisor_count(n: u64) -> u64 {
    factor_u64(n).iter().map(|&(_, e)| e as u64 + 1).product()
}

/// Exact square root if `n` is a perfect square.
pub fn exact_sqrt(n: &BigUint) -> Option<BigUint> {
    // Squares mod 64 fall in a set of 12 residues.
    let low = (n.iter_u64_digits().next().unwrap_or(0) & 63) as u8;
    if !matches!(low, 0 | 1 | 4 | 9 | 16 | 17 | 25 | 33 | 36 | 41 | 49 | 57) {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Exact `k`-th root if `n` is a perfect `k`-th power.
pub fn exact_root(n: &BigUint, k: u32) -> Option<BigUint> {
    if k == 2 {
        return exact_sqrt(n);
    }
    let r = n.nth_root(k);
    (r.pow(k) == *n).then_some(r)
}

/// Writes `n = q^e` with `q` prime when possible, preferring the largest `e`.
/// Returns `None` for `n <= 1` and for integers with two distinct prime factors.
pub fn as_prime_power(n: &BigUint, is_prime: impl Fn(&BigUint) -> bool) -> Option<(BigUint, u32)> {
    if *n <= BigUint::one() {
        return None;
    }
    let bits = n.bits() as u32;
    for e in (1..=bits).rev() {
        if let Some(root) = exact_root(n, e) {
            if root > BigUint::one() && is_prime(&root) {
                return Some((root, e));
            }
        }
    }
    None
}

/// `n mod m` as a canonical residue in `[0, m)`.
pub fn residue(n: &BigInt, m: u64) -> u64 {
    let r = n % BigInt::from(m);
    let r = if r.is_negative() { r + BigInt::from(m) } else { r };
    r.to_u64().expect("residue fits the modulus")
}

/// `base^exp` as a big integer.
pub fn big_pow(base: u64, exp: u32) -> BigInt {
    num_traits::pow(BigInt::from(base), exp as usize)
}

/// `|n|` as a natural number.
pub fn magnitude(n: &BigInt) -> BigUint {
    n.magnitude().clone()
}

/// True when `a^2 <= b`.
pub fn square_at_most(a: &BigInt, b: &BigInt) -> bool {
    if b.is_negative() {
        return false;
    }
    if a.is_zero() {
        return true;
    }
    a * a <= *b
}
