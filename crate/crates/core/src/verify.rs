//! Scans over a computed tau table.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::arith::{factor_u64, is_prime_u64};
use crate::exclusion::omega_lower_bound;
use crate::factor::{Factorizer, Primality};
use crate::par::{self, Exec};
use crate::tau::{self, TauTable};

/// A table entry singled out by a scan.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Hit {
    pub n: u64,
    #[serde(serialize_with = "crate::serde_util::big")]
    pub tau: BigInt,
    pub classification: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub n: u64,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ScanReport {
    pub suite: String,
    pub bound: u64,
    pub checked: u64,
    pub hits: Vec<Hit>,
    pub violations: Vec<Violation>,
    /// Indices the scan could not decide (factorization budget exceeded).
    pub skipped: Vec<u64>,
    /// Hits whose classification rests on a probabilistic test.
    pub flagged: Vec<u64>,
}

impl ScanReport {
    fn new(suite: &str, bound: u64) -> Self {
        Self {
            suite: suite.into(),
            bound,
            ..Default::default()
        }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

fn bounded(table: &TauTable, bound: Option<u64>) -> u64 {
    let max = table.max_n() as u64;
    bound.map_or(max, |b| b.min(max))
}

/// All `n <= max_n` with tau(n) = `alpha`, ascending.
pub fn scan_for_value(table: &TauTable, alpha: &BigInt) -> Vec<u64> {
    scan_for_value_with(table, alpha, Exec::default())
}

pub fn scan_for_value_with(table: &TauTable, alpha: &BigInt, exec: Exec) -> Vec<u64> {
    let vals = table.values();
    par::filter_map_range(exec, 0..vals.len() as u64, |i| {
        (vals[i as usize] == *alpha).then_some(i + 1)
    })
}

/// Every `n` with |tau(n)| = 2q, q prime; composite such `n` are violations.
pub fn scan_two_times_prime(table: &TauTable, mr_rounds: u32, exec: Exec) -> ScanReport {
    let mut report = ScanReport::new("two-times-prime", table.max_n() as u64);
    let vals = table.values();
    let found = par::filter_map_range(exec, 0..vals.len() as u64, |i| {
        let v = &vals[i as usize];
        let mag = v.magnitude();
        // |tau(n)| = 2q: q = 2 gives 4, otherwise |tau(n)| ≡ 2 (mod 4).
        if mag.bit(0) || (!mag.bit(1) && mag != &4u32.into()) {
            return None;
        }
        let q = mag >> 1u32;
        let prim = crate::factor::primality(&q, mr_rounds);
        prim.is_prime_like().then(|| (i + 1, v.clone(), prim))
    });
    report.checked = vals.len() as u64;
    for (n, tau, prim) in found {
        let composite_n = !is_prime_u64(n);
        let classification = match prim {
            Primality::Prime => "2*prime",
            _ => "2*probable-prime",
        };
        if prim == Primality::ProbablePrime {
            report.flagged.push(n);
        }
        if composite_n {
            report.violations.push(Violation {
                n,
                detail: format!("|tau({n})| = 2q with q prime but n is composite"),
            });
        }
        report.hits.push(Hit {
            n,
            tau,
            classification: classification.into(),
        });
    }
    report
}

/// Checks Omega(tau(n)) >= omega_lower_bound(n) >= omega(n) for `2 <= n <= bound`.
pub fn verify_omega_inequality(
    table: &TauTable,
    bound: u64,
    factorizer: &Factorizer,
    exec: Exec,
) -> ScanReport {
    let bound = bounded(table, Some(bound));
    let mut report = ScanReport::new("omega", bound);
    enum Row {
        Skip(u64),
        Bad(Violation),
    }
    let rows = par::filter_map_range(exec, 2..bound + 1, |n| {
        let v = table.get(n).expect("n within table");
        if v.is_zero() {
            return None;
        }
        let fac_n = factor_u64(n);
        let lower = omega_lower_bound(&fac_n);
        let distinct = fac_n.len() as u64;
        let Some(big_omega) = factorizer.factor(v.magnitude()).big_omega() else {
            return Some(Row::Skip(n));
        };
        (big_omega < lower || lower < distinct).then(|| {
            Row::Bad(Violation {
                n,
                detail: format!("Omega(tau) = {big_omega}, bound = {lower}, omega(n) = {distinct}"),
            })
        })
    });
    report.checked = bound.saturating_sub(1);
    for row in rows {
        match row {
            Row::Skip(n) => report.skipped.push(n),
            Row::Bad(v) => report.violations.push(v),
        }
    }
    report
}

/// tau(n) is odd exactly when n is an odd square.
pub fn verify_parity(table: &TauTable, bound: Option<u64>, exec: Exec) -> ScanReport {
    let bound = bounded(table, bound);
    let mut report = ScanReport::new("parity", bound);
    report.violations = par::filter_map_range(exec, 1..bound + 1, |n| {
        let odd = tau::is_odd(table.get(n).expect("n within table"));
        (odd != tau::tau_is_odd_predicted(n)).then(|| Violation {
            n,
            detail: format!("tau({n}) odd = {odd}"),
        })
    });
    report.checked = bound;
    report
}

/// Structural checks over the table: the Hecke recursion at prime powers,
/// the Deligne bound at primes, and agreement of every entry with the
/// product over its factorization (which covers multiplicativity).
pub fn verify_hecke(table: &TauTable, bound: Option<u64>, exec: Exec) -> ScanReport {
    let bound = bounded(table, bound);
    let mut report = ScanReport::new("hecke", bound);
    let q11 = |p: u64| crate::arith::big_pow(p, tau::DELTA_WEIGHT - 1);
    report.violations = par::filter_map_range(exec, 1..bound + 1, |n| {
        let v = table.get(n).expect("n within table");
        let fac = factor_u64(n);
        if n == 1 {
            return (v != &BigInt::from(1)).then(|| Violation {
                n,
                detail: "tau(1) != 1".into(),
            });
        }
        if let [(p, e)] = fac.as_slice() {
            let (p, e) = (*p, *e);
            if e == 1 {
                if !tau::within_deligne_bound(v, p, tau::DELTA_WEIGHT) {
                    return Some(Violation {
                        n,
                        detail: "Deligne bound exceeded".into(),
                    });
                }
            } else {
                let a = table.get(p).expect("p <= n");
                let prev = table.get(p.pow(e - 1)).expect("p^(e-1) < n");
                let prev2 = table.get(p.pow(e - 2)).expect("p^(e-2) < n");
                let expect = a * prev - q11(p) * prev2;
                if &expect != v {
                    return Some(Violation {
                        n,
                        detail: format!("Hecke recursion gives {expect}"),
                    });
                }
            }
            return None;
        }
        match tau::tau_from_factorization(table, n) {
            Ok(prod) if &prod == v => None,
            Ok(prod) => Some(Violation {
                n,
                detail: format!("product over factorization gives {prod}"),
            }),
            Err(e) => Some(Violation {
                n,
                detail: e.to_string(),
            }),
        }
    });
    report.checked = bound;
    report
}

/// Coprime pairs `(a, b)`, `a, b >= 2`, `ab <= bound`, checked for
/// tau(ab) = tau(a) tau(b) directly.
pub fn verify_multiplicativity(table: &TauTable, bound: Option<u64>, exec: Exec) -> ScanReport {
    let bound = bounded(table, bound);
    let mut report = ScanReport::new("multiplicativity", bound);
    let per_a = par::filter_map_range(exec, 2..bound / 2 + 1, |a| {
        let ta = table.get(a).expect("a <= bound");
        let mut bad = Vec::new();
        let mut count = 0u64;
        for b in (a + 1)..=bound / a {
            if num_integer::gcd(a, b) != 1 {
                continue;
            }
            count += 1;
            let prod = ta * table.get(b).expect("b <= bound");
            if &prod != table.get(a * b).expect("ab <= bound") {
                bad.push(Violation {
                    n: a * b,
                    detail: format!("tau({a}) tau({b}) = {prod}"),
                });
            }
        }
        Some((count, bad))
    });
    for (count, bad) in per_a {
        report.checked += count;
        report.violations.extend(bad);
    }
    report.violations.sort_by_key(|v| v.n);
    report
}
