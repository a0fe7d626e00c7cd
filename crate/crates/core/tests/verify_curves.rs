use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use proptest::prelude::*;

use tauvals::arith::{factor_u64, primes_up_to};
use tauvals::curves::{is_point, scan_points, scan_prime_points, CurveForm, CurvePoint, CurveSpec, ScanOptions};
use tauvals::exclusion::omega_lower_bound;
use tauvals::factor::Factorization;
use tauvals::verify::{scan_for_value_with, scan_two_times_prime, verify_omega_inequality};
use tauvals::{compute_tau_table, Exec, Factorizer, TauTable};

fn table() -> &'static TauTable {
    static T: OnceLock<TauTable> = OnceLock::new();
    T.get_or_init(|| compute_tau_table(20_000).unwrap())
}

#[test]
fn omega_inequality_to_3000() {
    let r = verify_omega_inequality(table(), 3000, &Factorizer::default(), Exec::default());
    assert!(r.violations.is_empty(), "{:?}", r.violations);
    assert!((r.skipped.len() as f64) < 0.05 * r.checked as f64);
}

// n = p q^3 has bound (sigma_0(2) - 1) + (sigma_0(4) - 1) = 1 + 2 = 3.
#[test]
fn omega_bound_on_p_times_q_cubed() {
    let fz = Factorizer::default();
    let (mut checked, mut total) = (0, 0);
    for q in [2u64, 3, 5, 7] {
        for p in primes_up_to(20_000 / q.pow(3)).into_iter().filter(|&p| p != q) {
            let n = p * q.pow(3);
            total += 1;
            assert_eq!(omega_lower_bound(&factor_u64(n)), 3);
            let tau = table().get(n).unwrap();
            let Factorization::Complete(f) = fz.factor(tau.magnitude()) else {
                continue;
            };
            let big_omega: u32 = f.iter().map(|(_, e)| e).sum();
            let product: BigUint = f.iter().map(|(p, e)| p.pow(*e)).product();
            assert_eq!(&product, tau.magnitude());
            assert!(big_omega >= 3, "n = {n}, Omega = {big_omega}");
            checked += 1;
        }
    }
    assert!(total > 500 && checked * 20 > total * 19, "{checked}/{total} factored");
}

#[test]
fn sequential_and_parallel_scans_agree() {
    let seq = scan_two_times_prime(table(), 20, Exec::Sequential);
    let par = scan_two_times_prime(table(), 20, Exec::Parallel);
    assert_eq!(seq, par);
    let target = BigInt::from(-24);
    assert_eq!(
        scan_for_value_with(table(), &target, Exec::Sequential),
        scan_for_value_with(table(), &target, Exec::Parallel)
    );
    assert_eq!(scan_for_value_with(table(), &target, Exec::Parallel), vec![2]);
}

fn brute_points(spec: &CurveSpec, xs: impl Iterator<Item = u64>) -> Vec<CurvePoint> {
    xs.filter_map(|x| {
        let r = spec.rhs(x)?;
        let y = r.sqrt();
        (&y * &y == r).then_some(CurvePoint { x, y })
    })
    .collect()
}

#[test]
fn low_exponent_scans_match_brute_force() {
    for form in CurveForm::ALL {
        for e in [3u32, 5] {
            let spec = CurveSpec::new(form, e).unwrap();
            let opts = ScanOptions { primes_only: false, exec: Exec::Parallel };
            assert_eq!(scan_points(&spec, 20_000, opts), brute_points(&spec, 1..=20_000), "{form} e = {e}");
            assert_eq!(
                scan_prime_points(&spec, 20_000),
                brute_points(&spec, primes_up_to(20_000).into_iter()),
                "{form} e = {e}"
            );
        }
    }
}

#[test]
fn known_small_points() {
    // 1 + 3 = 2^2 and 2 - 1 = 1^2; X = 1 is not prime.
    let plus = CurveSpec::new(CurveForm::PlusThree, 11).unwrap();
    let twice = CurveSpec::new(CurveForm::TwiceMinusOne, 11).unwrap();
    let all = ScanOptions { primes_only: false, exec: Exec::Sequential };
    assert_eq!(scan_points(&plus, 1000, all), vec![CurvePoint { x: 1, y: BigUint::from(2u32) }]);
    assert_eq!(scan_points(&twice, 1000, all), vec![CurvePoint { x: 1, y: BigUint::from(1u32) }]);
    assert!(is_point(&plus, &CurvePoint { x: 1, y: BigUint::from(2u32) }));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scans_are_monotone_in_bound(form_idx in 0usize..3, e in prop::sample::select(vec![3u32, 5, 7]), b1 in 1u64..5000, b2 in 1u64..5000) {
        let spec = CurveSpec::new(CurveForm::ALL[form_idx], e).unwrap();
        let (lo, hi) = (b1.min(b2), b1.max(b2));
        let opts = ScanOptions { primes_only: false, exec: Exec::Sequential };
        let small = scan_points(&spec, lo, opts);
        let large = scan_points(&spec, hi, opts);
        prop_assert!(large.starts_with(&small));
        prop_assert!(large[small.len()..].iter().all(|p| p.x > lo));
    }

    #[test]
    fn non_points_are_rejected(form_idx in 0usize..3, x in 2u64..1_000_000, dy in 1u32..3) {
        let spec = CurveSpec::new(CurveForm::ALL[form_idx], 11).unwrap();
        let r = spec.rhs(x).unwrap();
        let off = CurvePoint { x, y: r.sqrt() + BigUint::from(dy) };
        prop_assert!(!is_point(&spec, &off));
        let root = r.sqrt();
        prop_assert_eq!(is_point(&spec, &CurvePoint { x, y: root.clone() }), &root * &root == r);
    }
}
