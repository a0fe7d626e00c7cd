use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use proptest::prelude::*;

use tauvals::arith::{factor_u64, primes_up_to};
use tauvals::tau::{
    compute_tau_table_with, deligne_bound_squared, is_odd_square, sigma, tau_from_factorization,
    tau_prime_power, tau_via_recursion, TableOptions,
};
use tauvals::{compute_tau_table, Exec, TauTable};
use tauvals::tau::Representation;

const N: usize = 20_000;

fn table() -> &'static TauTable {
    static T: OnceLock<TauTable> = OnceLock::new();
    T.get_or_init(|| compute_tau_table(N).unwrap())
}

fn tau(n: u64) -> &'static BigInt {
    table().get(n).unwrap()
}

// Direct expansion of q * prod (1 - q^n)^24 by repeated multiplication
// with (1 - q^n), 24 times per factor.
fn naive_delta(len: usize) -> Vec<BigInt> {
    let mut c = vec![BigInt::zero(); len];
    c[0] = BigInt::one();
    for n in 1..len {
        for _ in 0..24 {
            for i in (n..len).rev() {
                let prev = c[i - n].clone();
                c[i] -= prev;
            }
        }
    }
    c
}

#[test]
fn table_prefix_matches_naive_product() {
    let naive = naive_delta(400);
    for n in 1..=400u64 {
        assert_eq!(tau(n), &naive[n as usize - 1], "tau({n})");
    }
}

#[test]
fn representations_and_executors_agree() {
    let reference = compute_tau_table_with(
        3000,
        TableOptions { exec: Exec::Sequential, repr: Representation::Big },
    )
    .unwrap();
    for exec in [Exec::Sequential, Exec::Parallel] {
        for repr in [Representation::Auto, Representation::Big, Representation::Fixed128] {
            let t = compute_tau_table_with(3000, TableOptions { exec, repr }).unwrap();
            assert_eq!(t.values(), reference.values(), "{exec:?} {repr:?}");
        }
    }
    assert_eq!(reference.values(), &table().values()[..3000]);
}

#[test]
fn ramanujan_congruence_691() {
    // tau(n) ≡ sigma_11(n) (mod 691)
    let m = BigInt::from(691);
    for n in 1..=2000u64 {
        let s = sigma(11, n).unwrap();
        assert!((tau(n) - s).is_multiple_of(&m), "n = {n}");
    }
}

#[test]
fn deligne_bound_holds_at_primes() {
    for p in primes_up_to(N as u64) {
        let t = tau(p);
        assert!(t * t <= deligne_bound_squared(p, 12), "p = {p}");
    }
}

#[test]
fn recursion_without_table_matches() {
    for n in [1u64, 2, 6, 12, 23, 97, 277, 1024, 1297, 4096, 19_999] {
        assert_eq!(&tau_via_recursion(n, None).unwrap(), tau(n), "n = {n}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn multiplicative_on_coprime_pairs(m in 1u64..=140, n in 1u64..=140) {
        prop_assume!(m.gcd(&n) == 1);
        prop_assert_eq!(tau(m * n), &(tau(m) * tau(n)));
    }

    #[test]
    fn hecke_recursion_at_prime_powers(idx in 0usize..30, m in 2u32..6) {
        let p = primes_up_to(200)[idx];
        let Some(pm) = p.checked_pow(m).filter(|&v| v <= N as u64) else {
            return Ok(());
        };
        let q = BigInt::from(p).pow(11);
        let expected = tau(p) * tau(pm / p) - q * tau(pm / p / p);
        prop_assert_eq!(tau(pm), &expected);
        prop_assert_eq!(&tau_prime_power(tau(p), p, m, 12).unwrap(), tau(pm));
    }

    #[test]
    fn factorization_route_agrees(n in 1u64..=N as u64) {
        prop_assert_eq!(&tau_from_factorization(table(), n).unwrap(), tau(n));
    }

    #[test]
    fn parity_law(n in 1u64..=N as u64) {
        let odd = tau(n).is_odd();
        let root = (n as f64).sqrt().round() as u64;
        let odd_square = root * root == n && root % 2 == 1;
        prop_assert_eq!(odd, odd_square);
        prop_assert_eq!(is_odd_square(n), odd_square);
    }

    #[test]
    fn factor_u64_reconstructs(n in 1u64..10_000_000) {
        let f = factor_u64(n);
        let back: u64 = f.iter().map(|&(p, e)| p.pow(e)).product();
        prop_assert_eq!(back, n);
        prop_assert!(f.windows(2).all(|w| w[0].0 < w[1].0));
    }
}
