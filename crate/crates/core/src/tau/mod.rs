//! Ramanujan's tau function.
//!
//! [`compute_tau_table`] expands the discriminant form as a power series;
//! [`tau_prime_power`] and [`tau_from_factorization`] rebuild values from
//! the Hecke recursion and multiplicativity, which gives two independent
//! routes to every coefficient.

mod series;
mod store;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::arith::{big_pow, factor_u64, is_prime_u64, square_at_most};
use crate::par::Exec;

pub use series::{eta_power, eta_terms, EtaTerm, Representation, ETA_POWER};

/// Weight of the discriminant form.
pub const DELTA_WEIGHT: u32 = 12;

#[derive(Debug, Error)]
pub enum TauError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("128-bit overflow in convolution pass {pass} at coefficient {index}")]
    Overflow { pass: usize, index: usize },
    #[error("n = {n} needs tau({needed}) but the table stops at {max_n}")]
    OutOfRange { n: u64, needed: u64, max_n: usize },
    #[error("malformed tau table: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Options for building a [`TauTable`].
#[derive(Clone, Copy, Debug, Default)]
pub struct TableOptions {
    pub exec: Exec,
    pub repr: Representation,
}

/// tau(1), ..., tau(max_n), indexed from 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TauTable {
    // values[0] is an unused zero so that values[n] = tau(n).
    values: Vec<BigInt>,
}

impl TauTable {
    fn from_values(values: Vec<BigInt>) -> Self {
        debug_assert!(values.first().is_some_and(Zero::is_zero));
        Self { values }
    }

    pub fn max_n(&self) -> usize {
        self.values.len() - 1
    }

    /// tau(n), or `None` for `n = 0` or `n > max_n`.
    pub fn get(&self, n: u64) -> Option<&BigInt> {
        match usize::try_from(n) {
            Ok(i) if i >= 1 && i < self.values.len() => Some(&self.values[i]),
            _ => None,
        }
    }

    /// tau(1..=max_n) as a slice; element `i` is tau(i + 1).
    pub fn values(&self) -> &[BigInt] {
        &self.values[1..]
    }

    /// `(n, tau(n))` for n ascending from 1.
    pub fn iter(&self) -> impl Iterator<Item = (u64, &BigInt)> + '_ {
        self.values().iter().enumerate().map(|(i, v)| (i as u64 + 1, v))
    }
}

/// Builds the table of tau(1..=max_n) with default options.
pub fn compute_tau_table(max_n: usize) -> Result<TauTable, TauError> {
    compute_tau_table_with(max_n, TableOptions::default())
}

pub fn compute_tau_table_with(max_n: usize, opts: TableOptions) -> Result<TauTable, TauError> {
    if max_n == 0 {
        return Err(TauError::InvalidArgument("max_n must be at least 1".into()));
    }
    // eta^24 to degree max_n - 1, then shift by q.
    let coeffs = eta_power(max_n, ETA_POWER, opts.exec, opts.repr)?;
    let mut values = Vec::with_capacity(max_n + 1);
    values.push(BigInt::zero());
    values.extend(coeffs);
    Ok(TauTable::from_values(values))
}

/// `4 * p^(2k-1)`, the square of the Deligne bound on |a(p)|.
pub fn deligne_bound_squared(p: u64, weight_2k: u32) -> BigInt {
    big_pow(p, weight_2k - 1) * 4
}

/// True when |a| <= 2 p^((2k-1)/2).
pub fn within_deligne_bound(a: &BigInt, p: u64, weight_2k: u32) -> bool {
    square_at_most(a, &deligne_bound_squared(p, weight_2k))
}

fn check_weight(weight_2k: u32) -> Result<(), TauError> {
    if weight_2k < 2 || !weight_2k.is_multiple_of(2) {
        return Err(TauError::InvalidArgument(format!(
            "weight must be a positive even integer, got {weight_2k}"
        )));
    }
    Ok(())
}

/// a(p^m) from a(p) by the Hecke recursion
/// a(p^m) = a(p) a(p^(m-1)) - p^(2k-1) a(p^(m-2)).
pub fn tau_prime_power(tau_p: &BigInt, p: u64, m: u32, weight_2k: u32) -> Result<BigInt, TauError> {
    check_weight(weight_2k)?;
    if !is_prime_u64(p) {
        return Err(TauError::InvalidArgument(format!("{p} is not prime")));
    }
    if !within_deligne_bound(tau_p, p, weight_2k) {
        return Err(TauError::InvalidArgument(format!(
            "a(p) = {tau_p} exceeds the Deligne bound for p = {p}"
        )));
    }
    Ok(hecke_prime_power(tau_p, &big_pow(p, weight_2k - 1), m))
}

// Unchecked recursion shared with the Lucas module.
pub(crate) fn hecke_prime_power(a: &BigInt, q: &BigInt, m: u32) -> BigInt {
    let mut prev = BigInt::one();
    if m == 0 {
        return prev;
    }
    let mut cur = a.clone();
    for _ in 1..m {
        let next = a * &cur - q * &prev;
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

/// tau(n) as the product of tau(p^e) over the factorization of `n`.
pub fn tau_from_factorization(table: &TauTable, n: u64) -> Result<BigInt, TauError> {
    if n == 0 {
        return Err(TauError::InvalidArgument("n must be positive".into()));
    }
    let mut acc = BigInt::one();
    for (p, e) in factor_u64(n) {
        let pe = p.pow(e);
        let v = table.get(pe).ok_or(TauError::OutOfRange {
            n,
            needed: pe,
            max_n: table.max_n(),
        })?;
        acc *= v;
    }
    Ok(acc)
}

/// tau(n) without a precomputed table covering `n`: tau(p) comes from a
/// table reaching the largest prime factor and prime powers from the Hecke
/// recursion.
pub fn tau_via_recursion(n: u64, table: Option<&TauTable>) -> Result<BigInt, TauError> {
    if n == 0 {
        return Err(TauError::InvalidArgument("n must be positive".into()));
    }
    if let Some(v) = table.and_then(|t| t.get(n)) {
        return Ok(v.clone());
    }
    let factors = factor_u64(n);
    let largest = factors.last().map_or(1, |&(p, _)| p);
    let owned;
    let table = match table {
        Some(t) if t.max_n() as u64 >= largest => t,
        _ => {
            owned = compute_tau_table(largest as usize)?;
            &owned
        }
    };
    let mut acc = BigInt::one();
    for (p, e) in factors {
        let tp = table.get(p).expect("table reaches every prime factor");
        acc *= tau_prime_power(tp, p, e, DELTA_WEIGHT)?;
    }
    Ok(acc)
}

/// Divisor power sum sigma_v(n).
pub fn sigma(v: u32, n: u64) -> Result<BigInt, TauError> {
    if n == 0 {
        return Err(TauError::InvalidArgument("sigma is defined for n >= 1".into()));
    }
    // Multiplicative: sigma_v(p^e) = 1 + p^v + ... + p^(ev).
    let mut acc = BigInt::one();
    for (p, e) in factor_u64(n) {
        let pv = big_pow(p, v);
        let mut term = BigInt::one();
        let mut sum = BigInt::one();
        for _ in 0..e {
            term *= &pv;
            sum += &term;
        }
        acc *= sum;
    }
    Ok(acc)
}

/// True when `n` is an odd perfect square.
pub fn is_odd_square(n: u64) -> bool {
    if n.is_multiple_of(2) {
        return false;
    }
    let r = n.isqrt();
    r * r == n
}

/// Parity predicted by Delta = sum q^((2n+1)^2) mod 2.
pub fn tau_is_odd_predicted(n: u64) -> bool {
    is_odd_square(n)
}

pub(crate) fn is_odd(v: &BigInt) -> bool {
    v.magnitude().bit(0)
}
