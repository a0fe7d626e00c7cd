use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use tauvals::curves::{scan_points, CurveForm, CurveSpec, ScanOptions};
use tauvals::tau::{compute_tau_table_with, Representation, TableOptions};
use tauvals::verify::{scan_two_times_prime, verify_hecke};
use tauvals::{compute_tau_table, Exec};

const EXECS: [Exec; 2] = [Exec::Sequential, Exec::Parallel];

fn tau_table(c: &mut Criterion) {
    let mut g = c.benchmark_group("tau_table");
    g.sample_size(10);
    for max_n in [5_000usize, 20_000] {
        for exec in EXECS {
            let opts = TableOptions { exec, repr: Representation::Auto };
            g.bench_with_input(BenchmarkId::new(format!("{exec:?}"), max_n), &max_n, |b, &n| {
                b.iter(|| compute_tau_table_with(n, opts).unwrap())
            });
        }
    }
    g.finish();
}

fn table_scans(c: &mut Criterion) {
    let table = compute_tau_table(20_000).unwrap();
    let mut g = c.benchmark_group("table_scans");
    g.sample_size(10);
    for exec in EXECS {
        g.bench_function(BenchmarkId::new("two_times_prime", format!("{exec:?}")), |b| {
            b.iter(|| scan_two_times_prime(&table, 20, exec))
        });
        g.bench_function(BenchmarkId::new("hecke", format!("{exec:?}")), |b| {
            b.iter(|| verify_hecke(&table, None, exec))
        });
    }
    g.finish();
}

fn curve_scan(c: &mut Criterion) {
    let spec = CurveSpec::new(CurveForm::MinusThree, 11).unwrap();
    let mut g = c.benchmark_group("curve_scan");
    g.sample_size(10);
    for exec in EXECS {
        let opts = ScanOptions { primes_only: true, exec };
        g.bench_function(BenchmarkId::new("minus3_e11_1e6", format!("{exec:?}")), |b| {
            b.iter(|| scan_points(&spec, 1_000_000, opts))
        });
    }
    g.finish();
}

criterion_group!(benches, tau_table, table_scans, curve_scan);
criterion_main!(benches);
