//! Ramanujan's congruences for tau(p) and the progression tables they induce.
//!
//! For primes `p != 23`, tau(p) is confined to a few residues modulo
//! 2, 3, 5, 7 and 23. A target `+-2 ell^j` outside those residues cannot be
//! tau(p). Whether it is outside depends only on `j mod 44`, and the
//! surviving classes are published as progressions `(ell, r, t)`, `t | 44`.
//! Both the published tables and a regeneration from first principles live
//! here so they can be compared.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{is_prime_u64, pow_mod};

/// Exponent period of the survivor sets.
pub const PERIOD: u64 = 44;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CongruenceError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("p = 23 is exceptional modulo 23; use tau(23) directly")]
    ExceptionalPrime,
    #[error("ell = {0} is outside the tabulated range 3 <= ell < 100")]
    NotCovered(u64),
    #[error("exclusion pattern for ell = {ell} is not periodic mod 44 (j = {j})")]
    NotPeriodic { ell: u64, j: u64 },
}

type Result<T> = std::result::Result<T, CongruenceError>;

/// The sign `epsilon` of a target `epsilon * 2 * ell^j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub const BOTH: [Sign; 2] = [Sign::Plus, Sign::Minus];

    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

impl FromStr for Sign {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "+" => Ok(Sign::Plus),
            "-" => Ok(Sign::Minus),
            _ => Err(format!("sign must be '+' or '-', got {s:?}")),
        }
    }
}

/// Residues tau(p) can take modulo a small modulus, over primes `p` other
/// than 23.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ResidueProfile {
    pub modulus: u64,
    pub allowed: &'static [u64],
}

impl ResidueProfile {
    pub fn allows(&self, r: u64) -> bool {
        self.allowed.contains(&(r % self.modulus))
    }
}

pub const PROFILES: [ResidueProfile; 5] = [
    ResidueProfile { modulus: 2, allowed: &[0] },
    ResidueProfile { modulus: 3, allowed: &[0, 2] },
    ResidueProfile { modulus: 5, allowed: &[0, 1, 2] },
    ResidueProfile { modulus: 7, allowed: &[0, 1, 2, 4] },
    ResidueProfile { modulus: 23, allowed: &[0, 2, 22] },
];

/// The profiles used to exclude `+-2 ell^j`. Mod 2 is omitted since it
/// never excludes an even target, and mod 4 is not part of the list.
pub const EXCLUDING_PROFILES: [ResidueProfile; 4] = [PROFILES[1], PROFILES[2], PROFILES[3], PROFILES[4]];

pub fn residue_profile(modulus: u64) -> Option<ResidueProfile> {
    PROFILES.iter().copied().find(|p| p.modulus == modulus)
}

/// Whether `p = a^2 + 23 b^2` for some integers `a, b`.
pub fn representable_as_a2_23b2(p: u64) -> bool {
    let mut b = 0u64;
    while 23 * b * b <= p {
        let rest = p - 23 * b * b;
        let a = rest.isqrt();
        if a * a == rest {
            return true;
        }
        b += 1;
    }
    false
}

/// tau(p) mod `modulus` as forced by Ramanujan's congruences, for `modulus`
/// in {2, 3, 4, 5, 7, 23}.
pub fn tau_p_residue(p: u64, modulus: u64) -> Result<u64> {
    if !is_prime_u64(p) {
        return Err(CongruenceError::InvalidArgument(format!("{p} is not prime")));
    }
    let m = modulus;
    let sigma = |v: u64| (1 + pow_mod(p, v, m)) % m;
    let r = match m {
        2 => 0,
        // p^3 sigma_1(p), p^2 sigma_1(p), p sigma_1(p), p sigma_3(p)
        4 => pow_mod(p, 3, m) * sigma(1) % m,
        3 => pow_mod(p, 2, m) * sigma(1) % m,
        5 => p % m * sigma(1) % m,
        7 => p % m * sigma(3) % m,
        23 => {
            if p == 23 {
                return Err(CongruenceError::ExceptionalPrime);
            }
            // Euler's criterion for (p | 23)
            if pow_mod(p, 11, 23) == 22 {
                0
            } else if representable_as_a2_23b2(p) {
                sigma(11)
            } else {
                22
            }
        }
        _ => {
            return Err(CongruenceError::InvalidArgument(format!(
                "no congruence for modulus {m}"
            )))
        }
    };
    Ok(r)
}

/// `epsilon * 2 * ell^j mod m`.
fn target_residue(sign: Sign, ell: u64, j: u64, m: u64) -> u64 {
    let v = 2 * pow_mod(ell, j, m) % m;
    match sign {
        Sign::Plus => v,
        Sign::Minus => (m - v) % m,
    }
}

/// The first modulus in {3, 5, 7, 23} whose profile excludes
/// `epsilon * 2 * ell^j`, if any.
pub fn excluding_modulus(sign: Sign, ell: u64, j: u64) -> Option<u64> {
    EXCLUDING_PROFILES
        .iter()
        .find(|prof| !prof.allows(target_residue(sign, ell, j, prof.modulus)))
        .map(|prof| prof.modulus)
}

/// True when no prime `p != 23` can have tau(p) = `epsilon * 2 * ell^j`
/// by the residue profiles.
pub fn excluded_by_congruence(sign: Sign, ell: u64, j: u64) -> bool {
    excluding_modulus(sign, ell, j).is_some()
}

/// An arithmetic progression `j ≡ r (mod t)` of exponents attached to `ell`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ProgressionTriple {
    pub ell: u64,
    pub r: u64,
    pub t: u64,
}

const fn tri(ell: u64, r: u64, t: u64) -> ProgressionTriple {
    ProgressionTriple { ell, r, t }
}

/// Published progressions for positive targets.
pub const S_PLUS: [ProgressionTriple; 28] = [
    tri(3, 0, 44),
    tri(5, 0, 22),
    tri(7, 0, 44),
    tri(7, 19, 44),
    tri(11, 0, 22),
    tri(13, 0, 44),
    tri(17, 0, 44),
    tri(19, 0, 22),
    tri(23, 0, 4),
    tri(29, 0, 22),
    tri(31, 0, 22),
    tri(37, 0, 44),
    tri(37, 35, 44),
    tri(41, 0, 22),
    tri(43, 0, 44),
    tri(43, 37, 44),
    tri(47, 0, 4),
    tri(53, 0, 44),
    tri(59, 0, 22),
    tri(61, 0, 22),
    tri(67, 0, 44),
    tri(67, 43, 44),
    tri(71, 0, 22),
    tri(73, 0, 44),
    tri(79, 0, 22),
    tri(83, 0, 44),
    tri(89, 0, 22),
    tri(97, 0, 44),
];

/// Published progressions for negative targets.
pub const S_MINUS: [ProgressionTriple; 6] = [
    tri(3, 15, 44),
    tri(5, 11, 22),
    tri(17, 33, 44),
    tri(59, 3, 22),
    tri(83, 11, 44),
    tri(89, 11, 22),
];

pub fn published_triples(sign: Sign) -> &'static [ProgressionTriple] {
    match sign {
        Sign::Plus => &S_PLUS,
        Sign::Minus => &S_MINUS,
    }
}

/// Exponent classes mod 44 that survive the congruence sieve.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurvivorSet {
    pub ell: u64,
    pub sign: Sign,
    pub survivors: BTreeSet<u64>,
}

fn require_tabulated(ell: u64) -> Result<()> {
    if !(3..100).contains(&ell) || !is_prime_u64(ell) {
        return Err(CongruenceError::NotCovered(ell));
    }
    Ok(())
}

// Order of ell in (Z/m)^*, or 1 when m | ell (ell^j is then 0 for j >= 1).
fn multiplicative_order(ell: u64, m: u64) -> u64 {
    if ell.is_multiple_of(m) {
        return 1;
    }
    (1..=m).find(|&k| pow_mod(ell, k, m) == 1).expect("unit has an order")
}

/// Recomputes the survivor classes from the residue profiles.
///
/// The exclusion predicate is periodic in `j >= 1` with period the lcm of
/// the orders of `ell` modulo 3, 5, 7 and 23. Checking `j` against `j + 44`
/// across one such period proves it is 44-periodic before reducing.
pub fn regenerate_survivors(ell: u64, sign: Sign) -> Result<SurvivorSet> {
    if ell < 3 || !is_prime_u64(ell) {
        return Err(CongruenceError::InvalidArgument(format!(
            "{ell} is not an odd prime"
        )));
    }
    let period = EXCLUDING_PROFILES
        .iter()
        .map(|p| multiplicative_order(ell, p.modulus))
        .fold(1u64, |acc, o| acc.lcm(&o));
    for j in 1..=period {
        if excluded_by_congruence(sign, ell, j) != excluded_by_congruence(sign, ell, j + PERIOD) {
            return Err(CongruenceError::NotPeriodic { ell, j });
        }
    }
    let survivors = (1..=PERIOD)
        .filter(|&j| !excluded_by_congruence(sign, ell, j))
        .map(|j| j % PERIOD)
        .collect();
    Ok(SurvivorSet {
        ell,
        sign,
        survivors,
    })
}

/// Expands the published triples for `ell` into classes mod 44.
pub fn published_survivors(ell: u64, sign: Sign) -> Result<SurvivorSet> {
    require_tabulated(ell)?;
    let survivors = published_triples(sign)
        .iter()
        .filter(|t| t.ell == ell)
        .flat_map(|t| (0..PERIOD).filter(move |j| j % t.t == t.r))
        .collect();
    Ok(SurvivorSet {
        ell,
        sign,
        survivors,
    })
}

/// Membership of `(ell, j)` in the published set: `j` avoids every
/// progression attached to `ell`.
pub fn in_n(sign: Sign, ell: u64, j: u64) -> Result<bool> {
    require_tabulated(ell)?;
    if j == 0 {
        return Err(CongruenceError::InvalidArgument("j must be at least 1".into()));
    }
    Ok(published_triples(sign)
        .iter()
        .filter(|t| t.ell == ell)
        .all(|t| j % t.t != t.r))
}

/// Primes `3 <= ell < 100`.
pub fn tabulated_primes() -> Vec<u64> {
    (3..100).filter(|&l| is_prime_u64(l)).collect()
}
