//! Budgeted integer factorization and Miller-Rabin primality.
//!
//! Factoring runs trial division up to a configurable bound, then Brent's
//! variant of Pollard rho with an iteration cap. A factorization that
//! cannot be completed within the budget is reported as
//! [`Factorization::Indeterminate`], never guessed.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::{exact_sqrt, is_prime_u64, mul_mod, primes_up_to};

pub const DEFAULT_TRIAL_BOUND: u64 = 1_000_000;
pub const DEFAULT_RHO_ITERATIONS: u64 = 2_000_000;
pub const DEFAULT_MR_ROUNDS: u32 = 20;

// Miller-Rabin with the first 13 primes as bases is deterministic below this.
const MR13_DETERMINISTIC_BOUND: u128 = 3_317_044_064_679_887_385_961_981;

/// Outcome of a primality test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Primality {
    Prime,
    /// Passed every configured round but the round count does not amount to
    /// a proof for an integer of this size.
    ProbablePrime,
    Composite,
}

impl Primality {
    pub fn is_prime_like(self) -> bool {
        !matches!(self, Primality::Composite)
    }
}

/// Miller-Rabin with the first `rounds` primes as witnesses.
///
/// Below 2^64 the answer is always exact; below roughly 3.3e24 it is exact
/// when `rounds >= 13`.
pub fn primality(n: &BigUint, rounds: u32) -> Primality {
    if let Some(small) = n.to_u64() {
        return if is_prime_u64(small) {
            Primality::Prime
        } else {
            Primality::Composite
        };
    }
    if n.is_even() {
        return Primality::Composite;
    }
    let witnesses = primes_up_to(rounds_to_sieve_bound(rounds));
    let witnesses = &witnesses[..rounds as usize];
    for &w in witnesses {
        if (n % w).is_zero() {
            return Primality::Composite;
        }
    }
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'witness: for &w in witnesses {
        let mut x = BigUint::from(w).modpow(&d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return Primality::Composite;
    }
    let proven = rounds >= 13 && n.to_u128().is_some_and(|v| v < MR13_DETERMINISTIC_BOUND);
    if proven {
        Primality::Prime
    } else {
        Primality::ProbablePrime
    }
}

fn rounds_to_sieve_bound(rounds: u32) -> u64 {
    // p_k < k (ln k + ln ln k) for k >= 6
    let k = rounds.max(6) as f64;
    (k * (k.ln() + k.ln().ln())).ceil() as u64 + 16
}

/// Result of a budgeted factorization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Factorization {
    /// Prime factors with multiplicity, ascending.
    Complete(Vec<(BigUint, u32)>),
    /// The budget ran out. `found` holds the primes extracted so far and
    /// `cofactor` the unfactored composite remainder.
    Indeterminate {
        found: Vec<(BigUint, u32)>,
        cofactor: BigUint,
    },
}

impl Factorization {
    pub fn complete(&self) -> Option<&[(BigUint, u32)]> {
        match self {
            Factorization::Complete(f) => Some(f),
            Factorization::Indeterminate { .. } => None,
        }
    }

    /// Number of prime factors counted with multiplicity, if complete.
    pub fn big_omega(&self) -> Option<u64> {
        self.complete()
            .map(|f| f.iter().map(|(_, e)| *e as u64).sum())
    }
}

/// A factoring engine with a fixed budget.
#[derive(Clone, Debug)]
pub struct Factorizer {
    trial_primes: Vec<u64>,
    trial_bound: u64,
    rho_iterations: u64,
    mr_rounds: u32,
}

impl Default for Factorizer {
    fn default() -> Self {
        Self::new(DEFAULT_TRIAL_BOUND, DEFAULT_RHO_ITERATIONS, DEFAULT_MR_ROUNDS)
    }
}

impl Factorizer {
    pub fn new(trial_bound: u64, rho_iterations: u64, mr_rounds: u32) -> Self {
        Self {
            trial_primes: primes_up_to(trial_bound),
            trial_bound,
            rho_iterations,
            mr_rounds: mr_rounds.max(1),
        }
    }

    pub fn trial_bound(&self) -> u64 {
        self.trial_bound
    }

    pub fn mr_rounds(&self) -> u32 {
        self.mr_rounds
    }

    pub fn is_prime(&self, n: &BigUint) -> Primality {
        primality(n, self.mr_rounds)
    }

    /// Factors `n`. Zero and one factor as the empty product.
    pub fn factor(&self, n: &BigUint) -> Factorization {
        let mut found: BTreeMap<BigUint, u32> = BTreeMap::new();
        if n.is_zero() || n.is_one() {
            return Factorization::Complete(Vec::new());
        }
        let mut rem = n.clone();
        let mut rem_is_prime = self.is_prime(&rem).is_prime_like();
        if !rem_is_prime {
            for &p in &self.trial_primes {
                if BigUint::from(p) * p > rem {
                    break;
                }
                let mut hit = false;
                while (&rem % p).is_zero() {
                    rem /= p;
                    *found.entry(BigUint::from(p)).or_default() += 1;
                    hit = true;
                }
                if hit {
                    if rem.is_one() {
                        break;
                    }
                    if self.is_prime(&rem).is_prime_like() {
                        rem_is_prime = true;
                        break;
                    }
                }
            }
        }

        let mut pending = Vec::new();
        if !rem.is_one() {
            let tb = BigUint::from(self.trial_bound);
            if rem_is_prime || rem <= &tb * &tb {
                *found.entry(rem).or_default() += 1;
            } else {
                pending.push(rem);
            }
        }

        let mut stuck = BigUint::one();
        while let Some(c) = pending.pop() {
            if self.is_prime(&c).is_prime_like() {
                *found.entry(c).or_default() += 1;
                continue;
            }
            if let Some(r) = exact_sqrt(&c) {
                pending.push(r.clone());
                pending.push(r);
                continue;
            }
            match self.rho(&c) {
                Some(d) => {
                    let other = &c / &d;
                    pending.push(d);
                    pending.push(other);
                }
                None => stuck *= c,
            }
        }

        let found: Vec<(BigUint, u32)> = found.into_iter().collect();
        if stuck.is_one() {
            Factorization::Complete(found)
        } else {
            Factorization::Indeterminate {
                found,
                cofactor: stuck,
            }
        }
    }

    /// A nontrivial divisor of the odd composite `n`, or `None` when the
    /// iteration cap is reached.
    fn rho(&self, n: &BigUint) -> Option<BigUint> {
        if let Some(small) = n.to_u64() {
            return rho_u64(small, self.rho_iterations).map(BigUint::from);
        }
        rho_big(n, self.rho_iterations)
    }
}

// Brent's cycle detection with batched gcds, retried with fresh constants.
fn rho_u64(n: u64, budget: u64) -> Option<u64> {
    if n.is_multiple_of(2) {
        return Some(2);
    }
    let mut spent = 0u64;
    for c in 1u64.. {
        let f = |x: u64| ((x as u128 * x as u128 + c as u128) % n as u128) as u64;
        let (mut x, mut y, mut q) = (2u64, 2u64, 1u64);
        let mut r = 1u64;
        let mut g = 1u64;
        let mut ys = y;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                let steps = 128.min(r - k);
                for _ in 0..steps {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = q.gcd(&n);
                k += steps;
                spent += steps;
                if spent > budget {
                    return None;
                }
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = x.abs_diff(ys).gcd(&n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return Some(g);
        }
        if spent > budget {
            return None;
        }
    }
    None
}

fn rho_big(n: &BigUint, budget: u64) -> Option<BigUint> {
    if n.is_even() {
        return Some(BigUint::from(2u32));
    }
    let one = BigUint::one();
    let mut spent = 0u64;
    for c in 1u32.. {
        let c = BigUint::from(c);
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut x = BigUint::from(2u32);
        let mut y = x.clone();
        let mut ys = y.clone();
        let mut q = one.clone();
        let mut g = one.clone();
        let mut r = 1u64;
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                let steps = 128.min(r - k);
                for _ in 0..steps {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = (q * diff) % n;
                }
                g = q.gcd(n);
                k += steps;
                spent += steps;
                if spent > budget {
                    return None;
                }
            }
            r *= 2;
        }
        if g == *n {
            loop {
                ys = f(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if g != *n {
            return Some(g);
        }
    }
    None
}
