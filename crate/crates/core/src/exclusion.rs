//! Deciding whether `epsilon * 2 * ell^j` can be a tau value.
//!
//! [`decide`] runs the case analysis gate by gate and records, for each
//! gate, the fact it relies on and whether the mechanical check passed.
//! External theorems enter only through the [`KnownFact`] registry.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::arith::{divisor_count, is_prime_u64, residue};
use crate::congruence::{excluding_modulus, Sign};
use crate::factor::Factorizer;
use crate::lucas::twice_odd_prime_power;

/// tau(23), the one prime the mod-23 congruence does not cover.
pub const TAU_23: i64 = 18_643_272;

/// The exceptional prime admitted beyond the tabulated range, for `j = 1` only.
pub const EXTRA_PRIME: u64 = 691;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TargetError {
    #[error("ell = {0} is not an odd prime")]
    BadPrime(u64),
    #[error("j must be at least 1")]
    BadExponent,
}

/// A candidate value `sign * 2 * ell^j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Target {
    pub sign: Sign,
    pub ell: u64,
    pub j: u64,
}

impl Target {
    pub fn new(sign: Sign, ell: u64, j: u64) -> Result<Self, TargetError> {
        if ell < 3 || !is_prime_u64(ell) {
            return Err(TargetError::BadPrime(ell));
        }
        if j == 0 {
            return Err(TargetError::BadExponent);
        }
        Ok(Self { sign, ell, j })
    }

    pub fn value(&self) -> BigInt {
        let mag = num_traits::pow(BigInt::from(self.ell), self.j as usize) * 2;
        match self.sign {
            Sign::Plus => mag,
            Sign::Minus => -mag,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FactId {
    F1,
    F2,
    F3,
    F4,
}

/// An externally proved statement, usable as an axiom.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct KnownFact {
    pub id: FactId,
    pub statement: &'static str,
    pub citation: &'static str,
}

impl KnownFact {
    /// Whether the fact settles the value `v`:
    ///
    /// * F1, F2: `v` is not tau(n) for any `n > 1`;
    /// * F3: `v` is not tau(2^m) for any `m >= 1`;
    /// * F4: `v`, occurring as a Lucas term `u_n` (`n > 2`) of a weight >= 4
    ///   newform sequence, has a primitive prime divisor.
    pub fn covers(&self, v: &BigInt) -> bool {
        let mag = v.abs();
        match self.id {
            FactId::F1 => {
                mag.is_one()
                    || mag == BigInt::from(EXTRA_PRIME)
                    || (mag < BigInt::from(100u32)
                        && mag >= BigInt::from(3u32)
                        && is_prime_u64(u64::try_from(&mag).expect("below 100")))
            }
            FactId::F2 => tabulated_prime_power(&mag).is_some_and(|(_, b)| b >= 1),
            FactId::F3 => residue(v, 4) != 0,
            FactId::F4 => {
                // Primality checks only; no trial budget is needed here.
                twice_odd_prime_power(v, &Factorizer::new(0, 0, 20)).is_some()
            }
        }
    }
}

// `mag = ell^b` with ell a prime in [3, 100).
fn tabulated_prime_power(mag: &BigInt) -> Option<(u64, u32)> {
    if mag <= &BigInt::one() {
        return None;
    }
    let ell = (3u64..100).find(|&l| (mag % l).is_zero())?;
    if !is_prime_u64(ell) {
        return None;
    }
    let mut rest = mag.clone();
    let mut b = 0;
    while (&rest % ell).is_zero() {
        rest /= ell;
        b += 1;
    }
    rest.is_one().then_some((ell, b))
}

pub const REGISTRY: [KnownFact; 4] = [
    KnownFact {
        id: FactId::F1,
        statement: "tau(n) not in {±1, ±691} ∪ {±ell : 3 <= ell < 100 prime} for n > 1",
        citation: "[BCO], [BCOT], [AH], [DJ], [HM]",
    },
    KnownFact {
        id: FactId::F2,
        statement: "|tau(n)| != ell^b for prime 3 <= ell < 100 and b >= 1",
        citation: "[BGPS, Thm 6]",
    },
    KnownFact {
        id: FactId::F3,
        statement: "4 | tau(2^m) for every m >= 1",
        citation: "Hecke recursion at p = 2: tau(2) = -24, tau(2^m) = -24 tau(2^(m-1)) - 2^11 tau(2^(m-2))",
    },
    KnownFact {
        id: FactId::F4,
        statement: "no Lucas term u_n (n > 2) of X^2 - A X + p^(2k-1), 2k >= 4, gcd(A, p) = 1, \
                    |A| <= 2 p^((2k-1)/2), equal to ±2 ell^i (ell odd prime, i >= 0) is defective",
        citation: "[BHV], [Abouzaid]; [BCOT, Thm 2.2, Lem 2.1]",
    },
];

pub fn fact(id: FactId) -> &'static KnownFact {
    REGISTRY.iter().find(|f| f.id == id).expect("registry is complete")
}

/// `sum over p^e || n of (sigma_0(e + 1) - 1)`, a lower bound for
/// Omega(tau(n)) that is itself at least omega(n).
pub fn omega_lower_bound(factorization: &[(u64, u32)]) -> u64 {
    factorization
        .iter()
        .map(|&(_, e)| divisor_count(e as u64 + 1) - 1)
        .sum()
}

/// Identifier of one gate of the case analysis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Gate {
    #[serde(rename = "scope")]
    Scope,
    #[serde(rename = "a-omega-shape")]
    OmegaShape,
    #[serde(rename = "b-coprime-split")]
    CoprimeSplit,
    #[serde(rename = "c-prime-two")]
    PrimeTwo,
    #[serde(rename = "d-parity")]
    Parity,
    #[serde(rename = "e-lucas-rank")]
    LucasRank,
    #[serde(rename = "f-exponent-one")]
    ExponentOne,
    #[serde(rename = "g-congruence")]
    Congruence,
}

impl Gate {
    pub const PROOF_ORDER: [Gate; 7] = [
        Gate::OmegaShape,
        Gate::CoprimeSplit,
        Gate::PrimeTwo,
        Gate::Parity,
        Gate::LucasRank,
        Gate::ExponentOne,
        Gate::Congruence,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Gate::Scope => "scope",
            Gate::OmegaShape => "a-omega-shape",
            Gate::CoprimeSplit => "b-coprime-split",
            Gate::PrimeTwo => "c-prime-two",
            Gate::Parity => "d-parity",
            Gate::LucasRank => "e-lucas-rank",
            Gate::ExponentOne => "f-exponent-one",
            Gate::Congruence => "g-congruence",
        }
    }
}

/// One line of a proof trace. Serializes as `{step, cite, ok}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub step: Gate,
    pub cite: String,
    pub ok: bool,
    #[serde(skip)]
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "outcome")]
pub enum Outcome {
    Excluded,
    NotCovered { gate: Gate, reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub target: Target,
    #[serde(flatten)]
    pub outcome: Outcome,
    pub trace: Vec<TraceStep>,
}

impl Verdict {
    pub fn is_excluded(&self) -> bool {
        matches!(self.outcome, Outcome::Excluded)
    }
}

fn step(gate: Gate, cite: impl Into<String>, ok: bool, detail: impl Into<String>) -> TraceStep {
    TraceStep {
        step: gate,
        cite: cite.into(),
        ok,
        detail: detail.into(),
    }
}

fn in_scope(target: &Target) -> Result<(), String> {
    match target.ell {
        ell if ell < 100 => Ok(()),
        EXTRA_PRIME if target.j == 1 => Ok(()),
        EXTRA_PRIME => Err(format!("ell = {EXTRA_PRIME} is covered only for j = 1")),
        ell => Err(format!("prime out of theorem scope: ell = {ell}")),
    }
}

/// Runs the case analysis for `target`.
pub fn decide(target: &Target) -> Verdict {
    if let Err(reason) = in_scope(target) {
        return Verdict {
            target: *target,
            outcome: Outcome::NotCovered {
                gate: Gate::Scope,
                reason: reason.clone(),
            },
            trace: vec![step(Gate::Scope, "3 <= ell < 100, or ell = 691 with j = 1", false, reason)],
        };
    }

    let value = target.value();
    let mut trace = Vec::with_capacity(Gate::PROOF_ORDER.len());
    for gate in Gate::PROOF_ORDER {
        let s = run_gate(gate, target, &value);
        let ok = s.ok;
        let detail = s.detail.clone();
        trace.push(s);
        if !ok {
            return Verdict {
                target: *target,
                outcome: Outcome::NotCovered { gate, reason: detail },
                trace,
            };
        }
    }
    Verdict {
        target: *target,
        outcome: Outcome::Excluded,
        trace,
    }
}

fn run_gate(gate: Gate, target: &Target, value: &BigInt) -> TraceStep {
    let Target { ell, j, .. } = *target;
    match gate {
        Gate::OmegaShape => {
            // value = ±2 * ell^j, so Omega(value) = j + 1.
            let big_omega = j + 1;
            step(
                gate,
                "[BCOT, Thm 1.5]: Omega(tau(n)) >= sum_{p | n} (sigma_0(ord_p(n) + 1) - 1) >= omega(n)",
                big_omega >= 1,
                format!(
                    "Omega({value}) = {big_omega}, so n has at most {big_omega} prime-power \
                     components and tau of each divides the target"
                ),
            )
        }
        Gate::CoprimeSplit => {
            // With two or more components, every component but the even one
            // has tau(p^m) = ±ell^b for some 0 <= b <= j, with p^m > 1.
            let f1 = fact(FactId::F1);
            let f2 = fact(FactId::F2);
            let mut odd = BigInt::one();
            let mut uncovered = None;
            for b in 0..=j {
                if !(f1.covers(&odd) || f2.covers(&odd)) {
                    uncovered = Some(b);
                    break;
                }
                odd *= ell;
            }
            let cite = if j == 1 {
                format!("multiplicativity; F1 {}", f1.citation)
            } else {
                format!("multiplicativity; F1 {}; F2 {}", f1.citation, f2.citation)
            };
            let detail = match uncovered {
                None => format!("±{ell}^b for 0 <= b <= {j} is never tau(p^m), p^m > 1; n = p^m"),
                Some(b) => format!("±{ell}^{b} is not ruled out as tau(p^m)"),
            };
            step(gate, cite, uncovered.is_none(), detail)
        }
        Gate::PrimeTwo => {
            let f3 = fact(FactId::F3);
            let r = residue(value, 4);
            step(
                gate,
                format!("F3 {}", f3.citation),
                f3.covers(value),
                format!("target ≡ {r} (mod 4) while 4 | tau(2^m); p is odd"),
            )
        }
        Gate::Parity => {
            let even = !crate::tau::is_odd(value);
            step(
                gate,
                "Delta ≡ sum_{n>=0} q^((2n+1)^2) (mod 2)",
                even,
                "tau(p^m) even ⇒ p^m is not an odd square ⇒ m odd (p odd)",
            )
        }
        Gate::LucasRank => {
            let f1 = fact(FactId::F1);
            let f4 = fact(FactId::F4);
            // u_(m+1) = target is non-defective; its primes are 2 and ell and
            // 2 | u_2 = tau(p), so ell is primitive and m + 1 is the rank of ell.
            let nondefective = f4.covers(value);
            // A proper divisor d of m + 1 gives u_d | u_(m+1) with ell ∤ u_d,
            // so |u_d| is 1 (F1) or 2; |u_d| = 2 with d > 2 would have no
            // primitive divisor, contradicting F4. Hence d = 2 only.
            let unit_ruled_out = f1.covers(&BigInt::one());
            let two_nondefective = f4.covers(&BigInt::from(2));
            // m + 1 = 4 with tau(p) = ±2: tau(p^3) = A (A^2 - 2Q) ≡ 0 (mod 4)
            // for A = ±2 and every Q, while the target is 2 (mod 4).
            let cube_term_div4 = [2i64, -2].iter().all(|&a| {
                (0..4i64).all(|q| (a * a * a - 2 * a * q).rem_euclid(4) == 0)
            });
            let target_mod4 = residue(value, 4);
            let ok = nondefective && unit_ruled_out && two_nondefective && cube_term_div4 && target_mod4 == 2;
            step(
                gate,
                format!(
                    "[BHV, Prop 2.1(ii)] u_d | u_n; F4 {}; F1; Hecke recursion at m = 3",
                    f4.citation
                ),
                ok,
                format!(
                    "m + 1 is the rank of apparition of {ell} and has no divisor but 2, so it \
                     is prime or 4; m + 1 = 4 gives ±4(p^11 - 2) ≡ 0 vs target ≡ {target_mod4} (mod 4)"
                ),
            )
        }
        Gate::ExponentOne => {
            // m odd and m + 1 prime: m + 1 is an even prime.
            let only_m1 = (1..200u64)
                .filter(|m| m % 2 == 1 && is_prime_u64(m + 1))
                .eq(std::iter::once(1));
            step(
                gate,
                "gates d and e",
                only_m1,
                "m odd and m + 1 prime ⇒ m + 1 = 2 ⇒ n = p, tau(p) = target",
            )
        }
        Gate::Congruence => {
            let modulus = excluding_modulus(target.sign, ell, j);
            let not_tau23 = *value != BigInt::from(TAU_23);
            let extended = ell >= 100;
            let mut cite = String::from("Ramanujan congruences mod 3, 5, 7, 23; tau(23) = 18643272");
            if extended {
                cite.push_str(" [ell range extended to 691]");
            }
            let detail = match modulus {
                Some(m) => format!(
                    "target mod {m} = {} is not a residue of tau(p), p != 23",
                    residue(value, m)
                ),
                None => format!(
                    "target is congruence-compatible with tau(p): j ≡ {} (mod 44) survives",
                    j % 44
                ),
            };
            step(gate, cite, modulus.is_some() && not_tau23, detail)
        }
        Gate::Scope => unreachable!("scope is checked before the proof gates"),
    }
}
