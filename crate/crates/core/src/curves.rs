//! Integer points with prime abscissa on `Y^2 = X^e +- 3` and `Y^2 = 2X^e - 1`.
//!
//! A scan only ever certifies the absence of points up to its bound.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::Serialize;

use crate::arith::{exact_sqrt, pow_mod, primes_up_to};
use crate::par::{self, Exec};

pub const DEFAULT_SCAN_BOUND: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CurveForm {
    /// `Y^2 = X^e + 3`
    PlusThree,
    /// `Y^2 = X^e - 3`
    MinusThree,
    /// `Y^2 = 2 X^e - 1`
    TwiceMinusOne,
}

impl CurveForm {
    pub const ALL: [CurveForm; 3] = [
        CurveForm::PlusThree,
        CurveForm::MinusThree,
        CurveForm::TwiceMinusOne,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            CurveForm::PlusThree => "plus3",
            CurveForm::MinusThree => "minus3",
            CurveForm::TwiceMinusOne => "twice-minus1",
        }
    }

    /// `(c, s)` such that the right-hand side is `c X^e + s`.
    fn coefficients(self) -> (u64, i64) {
        match self {
            CurveForm::PlusThree => (1, 3),
            CurveForm::MinusThree => (1, -3),
            CurveForm::TwiceMinusOne => (2, -1),
        }
    }
}

impl fmt::Display for CurveForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for CurveForm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CurveForm::ALL
            .into_iter()
            .find(|f| f.tag() == s)
            .ok_or_else(|| format!("unknown curve form {s:?} (expected plus3, minus3 or twice-minus1)"))
    }
}

/// A curve form together with its odd exponent `e = 2k - 1 >= 3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CurveSpec {
    pub form: CurveForm,
    pub exponent: u32,
}

impl CurveSpec {
    pub fn new(form: CurveForm, exponent: u32) -> Result<Self, String> {
        if exponent < 3 || exponent.is_multiple_of(2) {
            return Err(format!("exponent must be odd and at least 3, got {exponent}"));
        }
        Ok(Self { form, exponent })
    }

    /// Right-hand side at `x`, or `None` where it is negative.
    pub fn rhs(&self, x: u64) -> Option<BigUint> {
        let (c, s) = self.form.coefficients();
        let lead = BigUint::from(x).pow(self.exponent) * c;
        if s >= 0 {
            Some(lead + s as u64)
        } else {
            let s = BigUint::from(s.unsigned_abs());
            (lead >= s).then(|| lead - s)
        }
    }

    // Right-hand side mod m, for the quadratic-residue sieve.
    fn rhs_mod(&self, x: u64, m: u64) -> u64 {
        let (c, s) = self.form.coefficients();
        let lead = pow_mod(x, self.exponent as u64, m) * c % m;
        (lead as i64 + s).rem_euclid(m as i64) as u64
    }
}

impl fmt::Display for CurveSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = self.exponent;
        match self.form {
            CurveForm::PlusThree => write!(f, "Y^2 = X^{e} + 3"),
            CurveForm::MinusThree => write!(f, "Y^2 = X^{e} - 3"),
            CurveForm::TwiceMinusOne => write!(f, "Y^2 = 2X^{e} - 1"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CurvePoint {
    pub x: u64,
    #[serde(serialize_with = "crate::serde_util::biguint")]
    pub y: BigUint,
}

#[derive(Clone, Copy, Debug)]
pub struct ScanOptions {
    /// Restrict `X` to primes; otherwise every `X >= 1` is tried.
    pub primes_only: bool,
    pub exec: Exec,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self {
            primes_only: true,
            exec: Exec::default(),
        }
    }
}

const SIEVE_MODULI: [u64; 8] = [64, 63, 65, 11, 17, 19, 23, 29];

struct ResidueSieve {
    tables: Vec<(u64, Vec<bool>)>,
}

impl ResidueSieve {
    fn new() -> Self {
        let tables = SIEVE_MODULI
            .iter()
            .map(|&m| {
                let mut is_square = vec![false; m as usize];
                for y in 0..m {
                    is_square[(y * y % m) as usize] = true;
                }
                (m, is_square)
            })
            .collect();
        Self { tables }
    }

    fn may_be_square(&self, spec: &CurveSpec, x: u64) -> bool {
        self.tables
            .iter()
            .all(|(m, sq)| sq[spec.rhs_mod(x, *m) as usize])
    }
}

/// Points `(X, Y)` with `Y >= 0` and `X` prime in `[2, x_bound]`, ascending in `X`.
pub fn scan_prime_points(spec: &CurveSpec, x_bound: u64) -> Vec<CurvePoint> {
    scan_points(spec, x_bound, ScanOptions::default())
}

pub fn scan_points(spec: &CurveSpec, x_bound: u64, opts: ScanOptions) -> Vec<CurvePoint> {
    let xs: Vec<u64> = if opts.primes_only {
        primes_up_to(x_bound)
    } else {
        (1..=x_bound).collect()
    };
    let sieve = ResidueSieve::new();
    par::filter_map_range(opts.exec, 0..xs.len() as u64, |i| {
        let x = xs[i as usize];
        if !sieve.may_be_square(spec, x) {
            return None;
        }
        let y = exact_sqrt(&spec.rhs(x)?)?;
        Some(CurvePoint { x, y })
    })
}

/// Re-checks a reported point by direct arithmetic.
pub fn is_point(spec: &CurveSpec, point: &CurvePoint) -> bool {
    spec.rhs(point.x).is_some_and(|r| &point.y * &point.y == r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(form: CurveForm, e: u32) -> CurveSpec {
        CurveSpec::new(form, e).unwrap()
    }

    #[test]
    fn exponent_validation() {
        assert!(CurveSpec::new(CurveForm::PlusThree, 2).is_err());
        assert!(CurveSpec::new(CurveForm::PlusThree, 1).is_err());
        assert!(CurveSpec::new(CurveForm::PlusThree, 11).is_ok());
    }

    #[test]
    fn single_point_check() {
        let s = spec(CurveForm::MinusThree, 11);
        assert_eq!(s.rhs(2), Some(BigUint::from(2045u32)));
        assert!(scan_prime_points(&s, 2).is_empty());
    }

    #[test]
    fn known_small_points() {
        // 2*13^3 - 1 = 4393 is not square, but 2*1^e - 1 = 1 always is.
        let all = ScanOptions {
            primes_only: false,
            exec: Exec::Sequential,
        };
        let s = spec(CurveForm::TwiceMinusOne, 3);
        let pts = scan_points(&s, 200, all);
        assert_eq!(pts[0], CurvePoint { x: 1, y: BigUint::from(1u32) });
        // 2*5^3 - 1 = 249, 2*13^3 - 1 = 4393; Y^2 = X^3 + 3 has (1, 2)
        let s = spec(CurveForm::PlusThree, 3);
        let pts = scan_points(&s, 1000, all);
        assert!(pts.contains(&CurvePoint { x: 1, y: BigUint::from(2u32) }));
        assert!(pts.iter().all(|p| is_point(&s, p)));
        // x = 1 is excluded in prime mode
        assert!(scan_prime_points(&s, 1000).iter().all(|p| p.x >= 2));
    }

    #[test]
    fn minus_three_cubic_points_match_brute_force() {
        let s = spec(CurveForm::MinusThree, 3);
        let brute: Vec<u64> = (1..=5000u64)
            .filter(|&x| {
                let v = (x * x * x) as i128 - 3;
                v >= 0 && {
                    let r = (v as f64).sqrt() as i128;
                    (r - 1..=r + 1).any(|y| y >= 0 && y * y == v)
                }
            })
            .collect();
        let all = ScanOptions {
            primes_only: false,
            exec: Exec::default(),
        };
        let found: Vec<u64> = scan_points(&s, 5000, all).iter().map(|p| p.x).collect();
        assert_eq!(found, brute);
    }

    #[test]
    fn form_tags_round_trip() {
        for f in CurveForm::ALL {
            assert_eq!(f.tag().parse::<CurveForm>().unwrap(), f);
        }
        assert!("x+3".parse::<CurveForm>().is_err());
    }
}
