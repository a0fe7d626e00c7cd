//! Command-line front end.
//!
//! Exit codes: 0 success, 1 a check failed or a violation was found,
//! 2 usage error, 3 resource or budget exceeded.

use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::congruence::{self, Sign};
use crate::curves::{self, CurveForm, CurveSpec, ScanOptions};
use crate::exclusion::{self, Outcome, Target};
use crate::factor::{self, Factorizer};
use crate::lucas::{self, LucasParams};
use crate::par::Exec;
use crate::tau::{self, TableOptions, TauTable};
use crate::verify::{self, ScanReport};

/// Environment variable naming a TOML configuration file.
pub const CONFIG_ENV: &str = "TAUVALS_CONFIG";

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    /// Table file used by `tau`, `scan` and `verify` when it covers the bound.
    pub table_path: Option<PathBuf>,
    pub default_bound: u64,
    /// Trial-division bound of the factorizer.
    pub factor_budget: u64,
    pub mr_rounds: u32,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            table_path: None,
            default_bound: 50_000,
            factor_budget: factor::DEFAULT_TRIAL_BOUND,
            mr_rounds: factor::DEFAULT_MR_ROUNDS,
        }
    }
}

impl Config {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let cfg: Config = toml::from_str(&text)
            .with_context(|| format!("parsing config {}", path.display()))?;
        if cfg.default_bound == 0 || cfg.factor_budget == 0 || cfg.mr_rounds == 0 {
            anyhow::bail!("config bounds must be positive");
        }
        Ok(cfg)
    }

    fn factorizer(&self) -> Factorizer {
        Factorizer::new(self.factor_budget, factor::DEFAULT_RHO_ITERATIONS, self.mr_rounds)
    }
}

#[derive(Debug, Parser)]
#[command(name = "tauvals", version, about = "Ramanujan tau values and exclusion proofs for ±2·ℓ^j")]
struct Cli {
    /// Configuration file (overrides $TAUVALS_CONFIG).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Run data-parallel loops on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a tau table and write it to a file.
    Compute {
        #[arg(long)]
        max: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print tau(n).
    Tau {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        table: Option<PathBuf>,
    },
    /// Decide whether sign·2·ell^j is excluded as a tau value.
    Check {
        #[arg(long, allow_hyphen_values = true)]
        sign: Sign,
        #[arg(long)]
        ell: u64,
        #[arg(long)]
        j: u64,
        #[arg(long)]
        json: bool,
    },
    /// Search a table for a value, or take the census of |tau(n)| = 2·prime.
    Scan(ScanArgs),
    /// Run invariant suites over a table.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long)]
        bound: Option<u64>,
        #[arg(long)]
        table: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Print regenerated survivor sets next to the published tables.
    RegenTables {
        #[arg(long)]
        json: bool,
    },
    /// Lucas sequence of X^2 - A X + p^(weight-1).
    Lucas(LucasArgs),
    /// Integer points on the defective-case curves.
    Curves {
        #[command(subcommand)]
        action: CurvesAction,
    },
}

#[derive(Debug, Args)]
struct ScanArgs {
    /// Value to search for.
    #[arg(
        long,
        allow_negative_numbers = true,
        conflicts_with = "form",
        required_unless_present = "form"
    )]
    value: Option<BigInt>,
    /// `2p`: list n with |tau(n)| = 2·prime.
    #[arg(long)]
    form: Option<ScanForm>,
    #[arg(long)]
    bound: Option<u64>,
    #[arg(long)]
    table: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ScanForm {
    #[value(name = "2p")]
    TwoPrime,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Suite {
    Parity,
    Hecke,
    Omega,
    All,
}

#[derive(Debug, Args)]
struct LucasArgs {
    #[arg(long = "A", alias = "a", allow_negative_numbers = true)]
    a: BigInt,
    #[arg(long)]
    p: u64,
    #[arg(long, default_value_t = 12)]
    weight: u32,
    /// Print u_n.
    #[arg(long, conflicts_with = "rank", required_unless_present = "rank")]
    n: Option<u64>,
    /// Print the rank of apparition of this odd prime.
    #[arg(long)]
    rank: Option<u64>,
}

#[derive(Debug, Subcommand)]
enum CurvesAction {
    Scan {
        #[arg(long)]
        form: CurveForm,
        #[arg(long = "exp", default_value_t = 11)]
        exponent: u32,
        #[arg(long, default_value_t = curves::DEFAULT_SCAN_BOUND)]
        bound: u64,
        /// Try every X >= 1, not only primes.
        #[arg(long)]
        all_integers: bool,
    },
}

/// Errors carrying an exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    err: anyhow::Error,
}

fn usage(err: impl Into<anyhow::Error>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        err: err.into(),
    }
}

fn resource(err: impl Into<anyhow::Error>) -> Failure {
    Failure {
        code: EXIT_RESOURCE,
        err: err.into(),
    }
}

fn io(err: std::io::Error) -> Failure {
    resource(err)
}

impl From<tau::TauError> for Failure {
    fn from(e: tau::TauError) -> Self {
        match e {
            tau::TauError::InvalidArgument(_) => usage(e),
            _ => resource(e),
        }
    }
}

/// Runs the CLI on the process streams.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// Runs the CLI with explicit output streams. Results go to `out`;
/// diagnostics and progress go to `err`.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    match execute(cli, out, err) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {:#}", f.err);
            f.code
        }
    }
}

struct Ctx {
    cfg: Config,
    exec: Exec,
}

fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let cfg_path = cli
        .config
        .clone()
        .or_else(|| std::env::var_os(CONFIG_ENV).map(PathBuf::from));
    let cfg = match cfg_path {
        Some(p) => Config::load(&p).map_err(usage)?,
        None => Config::default(),
    };
    let ctx = Ctx {
        cfg,
        exec: if cli.sequential {
            Exec::Sequential
        } else {
            Exec::default()
        },
    };

    match cli.command {
        Command::Compute { max, out: path } => {
            let _ = writeln!(err, "computing tau(1..={max})");
            let table = tau::compute_tau_table_with(
                max,
                TableOptions {
                    exec: ctx.exec,
                    ..Default::default()
                },
            )?;
            table.save(&path)?;
            let _ = writeln!(err, "wrote {}", path.display());
            Ok(EXIT_OK)
        }
        Command::Tau { n, table } => {
            let table = load_table_if_any(&ctx, table.as_deref(), err)?;
            let v = tau::tau_via_recursion(n, table.as_ref())?;
            writeln!(out, "{v}").map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Check { sign, ell, j, json } => {
            let target = Target::new(sign, ell, j).map_err(usage)?;
            let verdict = exclusion::decide(&target);
            if json {
                let text = serde_json::to_string_pretty(&verdict).map_err(resource)?;
                writeln!(out, "{text}").map_err(io)?;
            } else {
                write_verdict(out, &verdict).map_err(io)?;
            }
            Ok(if verdict.is_excluded() {
                EXIT_OK
            } else {
                EXIT_CHECK_FAILED
            })
        }
        Command::Scan(args) => scan(&ctx, args, out, err),
        Command::Verify {
            suite,
            bound,
            table,
            json,
        } => verify_cmd(&ctx, suite, bound, table.as_deref(), json, out, err),
        Command::RegenTables { json } => regen_tables(json, out),
        Command::Lucas(args) => lucas_cmd(args, out),
        Command::Curves {
            action:
                CurvesAction::Scan {
                    form,
                    exponent,
                    bound,
                    all_integers,
                },
        } => {
            let spec = CurveSpec::new(form, exponent).map_err(|e| usage(anyhow::anyhow!(e)))?;
            if bound < 2 {
                return Err(usage(anyhow::anyhow!("--bound must be at least 2")));
            }
            let _ = writeln!(err, "scanning {spec} for X <= {bound}");
            let points = curves::scan_points(
                &spec,
                bound,
                ScanOptions {
                    primes_only: !all_integers,
                    exec: ctx.exec,
                },
            );
            if points.is_empty() {
                writeln!(out, "NONE up to {bound}").map_err(io)?;
            }
            for p in &points {
                writeln!(out, "{} {}", p.x, p.y).map_err(io)?;
            }
            Ok(EXIT_OK)
        }
    }
}

fn write_verdict(out: &mut dyn Write, v: &exclusion::Verdict) -> std::io::Result<()> {
    let t = &v.target;
    writeln!(out, "target: {}2*{}^{} = {}", t.sign, t.ell, t.j, t.value())?;
    match &v.outcome {
        Outcome::Excluded => writeln!(out, "Excluded")?,
        Outcome::NotCovered { gate, reason } => {
            writeln!(out, "NotCovered at {}: {reason}", gate.id())?
        }
    }
    for s in &v.trace {
        let mark = if s.ok { "ok  " } else { "FAIL" };
        writeln!(out, "  [{mark}] {:<16} {}", s.step.id(), s.cite)?;
        writeln!(out, "         {}", s.detail)?;
    }
    Ok(())
}

fn load_table_if_any(
    ctx: &Ctx,
    explicit: Option<&Path>,
    err: &mut dyn Write,
) -> Result<Option<TauTable>, Failure> {
    let Some(path) = explicit.or(ctx.cfg.table_path.as_deref()) else {
        return Ok(None);
    };
    if explicit.is_none() && !path.exists() {
        return Ok(None);
    }
    let _ = writeln!(err, "loading {}", path.display());
    Ok(Some(TauTable::load(path)?))
}

/// A table covering `bound` and the bound itself. An explicit `--table`
/// without `--bound` is used in full; otherwise the bound defaults to the
/// configured one and a short table is recomputed.
fn table_for(
    ctx: &Ctx,
    explicit: Option<&Path>,
    bound: Option<u64>,
    err: &mut dyn Write,
) -> Result<(TauTable, u64), Failure> {
    let loaded = load_table_if_any(ctx, explicit, err)?;
    let bound = match (&loaded, bound) {
        (_, Some(b)) => b,
        (Some(t), None) if explicit.is_some() => t.max_n() as u64,
        _ => ctx.cfg.default_bound,
    };
    if let Some(t) = loaded {
        if t.max_n() as u64 >= bound {
            return Ok((t, bound));
        }
        let _ = writeln!(err, "table stops at {}, recomputing", t.max_n());
    }
    let _ = writeln!(err, "computing tau(1..={bound})");
    let max_n = usize::try_from(bound).map_err(usage)?;
    let table = tau::compute_tau_table_with(
        max_n,
        TableOptions {
            exec: ctx.exec,
            ..Default::default()
        },
    )?;
    Ok((table, bound))
}

fn emit_report(out: &mut dyn Write, r: &ScanReport, json: bool) -> Result<(), Failure> {
    if json {
        let text = serde_json::to_string(r).map_err(resource)?;
        writeln!(out, "{text}").map_err(io)?;
        return Ok(());
    }
    writeln!(
        out,
        "{}: bound {} checked {} hits {} violations {} skipped {} flagged {}",
        r.suite,
        r.bound,
        r.checked,
        r.hits.len(),
        r.violations.len(),
        r.skipped.len(),
        r.flagged.len()
    )
    .map_err(io)?;
    for h in &r.hits {
        writeln!(out, "  hit n={} tau={} {}", h.n, h.tau, h.classification).map_err(io)?;
    }
    for v in &r.violations {
        writeln!(out, "  VIOLATION n={} {}", v.n, v.detail).map_err(io)?;
    }
    Ok(())
}

fn scan(ctx: &Ctx, args: ScanArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let (table, bound) = table_for(ctx, args.table.as_deref(), args.bound, err)?;
    if let Some(alpha) = args.value {
        let hits: Vec<u64> = verify::scan_for_value_with(&table, &alpha, ctx.exec)
            .into_iter()
            .filter(|&n| n <= bound)
            .collect();
        if args.json {
            let text = serde_json::to_string(&serde_json::json!({
                "value": alpha.to_string(),
                "bound": bound,
                "n": hits,
            }))
            .map_err(resource)?;
            writeln!(out, "{text}").map_err(io)?;
        } else if hits.is_empty() {
            writeln!(out, "NONE up to {bound}").map_err(io)?;
        } else {
            for n in hits {
                writeln!(out, "{n}").map_err(io)?;
            }
        }
        return Ok(EXIT_OK);
    }
    let report = verify::scan_two_times_prime(&table, ctx.cfg.mr_rounds, ctx.exec);
    let report = truncate(report, bound);
    emit_report(out, &report, args.json)?;
    Ok(if report.passed() {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    })
}

// Drops hits above `bound` when a larger table was loaded.
fn truncate(mut r: ScanReport, bound: u64) -> ScanReport {
    if r.bound > bound {
        r.bound = bound;
        r.checked = bound;
        r.hits.retain(|h| h.n <= bound);
        r.violations.retain(|v| v.n <= bound);
        r.flagged.retain(|&n| n <= bound);
    }
    r
}

fn verify_cmd(
    ctx: &Ctx,
    suite: Suite,
    bound: Option<u64>,
    table: Option<&Path>,
    json: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, Failure> {
    let (table, bound) = table_for(ctx, table, bound, err)?;
    let mut reports = Vec::new();
    if matches!(suite, Suite::Parity | Suite::All) {
        let _ = writeln!(err, "parity suite");
        reports.push(verify::verify_parity(&table, Some(bound), ctx.exec));
    }
    if matches!(suite, Suite::Hecke | Suite::All) {
        let _ = writeln!(err, "hecke suite");
        reports.push(verify::verify_hecke(&table, Some(bound), ctx.exec));
        reports.push(verify::verify_multiplicativity(&table, Some(bound), ctx.exec));
    }
    if matches!(suite, Suite::Omega | Suite::All) {
        let _ = writeln!(err, "omega suite");
        reports.push(verify::verify_omega_inequality(
            &table,
            bound,
            &ctx.cfg.factorizer(),
            ctx.exec,
        ));
    }
    for r in &reports {
        emit_report(out, r, json)?;
    }
    Ok(if reports.iter().all(ScanReport::passed) {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    })
}

fn fmt_set(s: &std::collections::BTreeSet<u64>) -> String {
    let items: Vec<String> = s.iter().map(u64::to_string).collect();
    format!("{{{}}}", items.join(","))
}

fn regen_tables(json: bool, out: &mut dyn Write) -> Result<i32, Failure> {
    let mut rows = Vec::new();
    for ell in congruence::tabulated_primes() {
        for sign in Sign::BOTH {
            let regen = congruence::regenerate_survivors(ell, sign).map_err(resource)?;
            let published = congruence::published_survivors(ell, sign).map_err(resource)?;
            rows.push((ell, sign, regen.survivors, published.survivors));
        }
    }
    let all_match = rows.iter().all(|(_, _, a, b)| a == b);
    if json {
        let items: Vec<_> = rows
            .iter()
            .map(|(ell, sign, regen, published)| {
                serde_json::json!({
                    "ell": ell,
                    "sign": sign,
                    "regenerated": regen,
                    "published": published,
                    "match": regen == published,
                })
            })
            .collect();
        let text = serde_json::to_string_pretty(&items).map_err(resource)?;
        writeln!(out, "{text}").map_err(io)?;
    } else {
        for (ell, sign, regen, published) in &rows {
            let status = if regen == published { "match" } else { "MISMATCH" };
            writeln!(
                out,
                "{ell:>3} {sign}  regenerated={:<12} published={:<12} {status}",
                fmt_set(regen),
                fmt_set(published)
            )
            .map_err(io)?;
        }
    }
    Ok(if all_match {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    })
}

fn lucas_cmd(args: LucasArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let params = LucasParams::new(args.a, args.p, args.weight).map_err(usage)?;
    if let Some(n) = args.n {
        let u = lucas::lucas_u(&params, n).map_err(usage)?;
        writeln!(out, "{u}").map_err(io)?;
    } else if let Some(ell) = args.rank {
        match lucas::rank_of_apparition(&params, ell).map_err(usage)? {
            Some(m) => writeln!(out, "{m}").map_err(io)?,
            None => writeln!(out, "none").map_err(io)?,
        }
    }
    Ok(EXIT_OK)
}
