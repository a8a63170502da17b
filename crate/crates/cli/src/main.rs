mod output;
mod selftest;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};

use linnik_core::arithmetic::{ArithmeticError, CesaroParams};
use linnik_core::formula::{
    evaluate, fit_loglog_slope, convergence_probe, scaling_study, EvalOptions, FormulaError, FormulaReport,
    ProbeOptions, SpecChoice, DEFAULT_REL_TOL, DEFAULT_ZEROS,
};
use linnik_core::specfun::{bessel_j_detailed, bessel_kernel, BesselStrategy, PrecisionConfig, SpecFunError};
use linnik_core::zeros::{
    bundled_zeros, fetch_zeros, load_zeros, LoadOptions, Registry, ZeroCache, ZeroError, ZeroSet,
    BUNDLED_SOURCE, CACHE_ENV,
};
use linnik_core::Complex64;

use output::{fmt_num, write_probe, write_rows, Format, Row};

#[derive(Parser)]
#[command(name = "linnik", version, about = "Explicit formula for Cesàro averages of Linnik numbers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate both sides of the formula for one or more N.
    Evaluate(EvalArgs),
    /// Evaluate an ascending N list and fit the residual exponent.
    Scan(ScanArgs),
    /// Manage zero tables.
    #[command(subcommand)]
    Zeros(ZerosCommand),
    /// Partial sums of the lattice/zero series near its convergence threshold.
    Probe(ProbeArgs),
    /// Fast invariant checks.
    Selftest(SelftestArgs),
    /// One Bessel evaluation, for debugging.
    Bessel(BesselArgs),
}

#[derive(Args)]
struct ZeroArgs {
    /// `bundled`, a file path, or a registry id.
    #[arg(long, default_value = BUNDLED_SOURCE)]
    zeros: String,
    /// Extra registry (TOML) merged over the built-in one.
    #[arg(long)]
    registry: Option<PathBuf>,
    /// Accept zeros with real part other than 1/2.
    #[arg(long)]
    allow_off_line: bool,
}

#[derive(Args)]
struct SpecArgs {
    /// Number of zeros (default: min(50, available)).
    #[arg(long = "Z")]
    z: Option<usize>,
    /// Lattice cutoff, l1² + l2² ≤ L² (default: chosen from --tol).
    #[arg(long = "L")]
    l: Option<u32>,
    /// Index cutoff for the fourth term (default: chosen from --tol).
    #[arg(long = "M")]
    m: Option<u32>,
    /// Tail tolerance relative to N^{k+1}.
    #[arg(long, default_value_t = DEFAULT_REL_TOL)]
    tol: f64,
    /// Relative accuracy required of every Bessel value.
    #[arg(long, default_value_t = 1e-10)]
    bessel_tol: f64,
    /// Bit cap for the extended-precision series.
    #[arg(long, default_value_t = 32768)]
    working_bits: u32,
    /// Evaluate k ≤ 3/2.
    #[arg(long)]
    allow_subcritical: bool,
    /// Also report the fourth term with N^ρ in its last block.
    #[arg(long)]
    diagnostic: bool,
}

#[derive(Args)]
struct OutArgs {
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long = "N", conflicts_with = "n_list", required_unless_present = "n_list")]
    n: Option<u64>,
    /// Comma-separated N values.
    #[arg(long = "N-list", value_delimiter = ',')]
    n_list: Option<Vec<u64>>,
    #[arg(long)]
    k: f64,
    #[command(flatten)]
    zeros: ZeroArgs,
    #[command(flatten)]
    spec: SpecArgs,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct ScanArgs {
    #[arg(long = "N-list", value_delimiter = ',', required_unless_present = "synthetic")]
    n_list: Option<Vec<u64>>,
    #[arg(long, default_value_t = 2.0)]
    k: f64,
    #[command(flatten)]
    zeros: ZeroArgs,
    #[command(flatten)]
    spec: SpecArgs,
    #[command(flatten)]
    out: OutArgs,
    /// Write `log N, log|residual|` pairs here.
    #[arg(long)]
    plot_data: Option<PathBuf>,
    /// Fit planted residuals c·N³ instead of running the formula.
    #[arg(long)]
    synthetic: bool,
}

#[derive(Subcommand)]
enum ZerosCommand {
    /// Download a registered table into the cache (or reuse a valid copy).
    Fetch {
        source: String,
        /// Only validate and report the first this many zeros.
        #[arg(long)]
        limit: Option<usize>,
        #[arg(long)]
        registry: Option<PathBuf>,
        #[arg(long)]
        allow_off_line: bool,
    },
    /// Check ordering, first ordinate and real parts.
    Validate {
        #[arg(default_value = BUNDLED_SOURCE)]
        source: String,
        #[arg(long)]
        registry: Option<PathBuf>,
        #[arg(long)]
        allow_off_line: bool,
    },
    /// Count, ordinate range and checksum.
    Info {
        #[arg(default_value = BUNDLED_SOURCE)]
        source: String,
        #[arg(long)]
        registry: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ProbeArgs {
    #[arg(long, default_value_t = 2)]
    d: u32,
    #[arg(long)]
    k: f64,
    #[arg(long = "N", default_value_t = 1.0)]
    n: f64,
    #[command(flatten)]
    zeros: ZeroArgs,
    /// Number of zeros (default: min(50, available)).
    #[arg(long = "Z")]
    z: Option<usize>,
    #[arg(long)]
    vmax: Option<f64>,
    #[arg(long)]
    lattice_cap: Option<u64>,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct SelftestArgs {
    #[arg(long)]
    json: bool,
    /// Zero file to validate instead of the bundled table.
    #[arg(long)]
    zeros: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Auto,
    Series,
    Asymptotic,
    Quadrature,
}

#[derive(Args)]
struct BesselArgs {
    #[arg(long, allow_hyphen_values = true)]
    nu_re: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    nu_im: f64,
    #[arg(long)]
    u: f64,
    #[arg(long, value_enum, default_value_t = StrategyArg::Auto)]
    strategy: StrategyArg,
    /// Print F_ν(u) = Γ(ν+1)(2/u)^ν J_ν(u) instead of J_ν(u).
    #[arg(long)]
    kernel: bool,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long, default_value_t = 32768)]
    working_bits: u32,
}

/// A failure with its exit code: 1 usage, 2 data or validation, 3 numeric.
struct Failure {
    code: u8,
    err: anyhow::Error,
}

impl Failure {
    fn usage(msg: impl Into<String>) -> Self {
        Self { code: 1, err: anyhow::anyhow!(msg.into()) }
    }

    fn data(err: impl Into<anyhow::Error>) -> Self {
        Self { code: 2, err: err.into() }
    }

    fn numeric(err: impl Into<anyhow::Error>) -> Self {
        Self { code: 3, err: err.into() }
    }
}

impl From<FormulaError> for Failure {
    fn from(e: FormulaError) -> Self {
        if e.is_numeric() {
            Failure::numeric(e)
        } else {
            Failure::data(e)
        }
    }
}

impl From<ZeroError> for Failure {
    fn from(e: ZeroError) -> Self {
        Failure::data(e)
    }
}

impl From<ArithmeticError> for Failure {
    fn from(e: ArithmeticError) -> Self {
        Failure::data(e)
    }
}

impl From<SpecFunError> for Failure {
    fn from(e: SpecFunError) -> Self {
        match e {
            SpecFunError::InvalidConfig(_) | SpecFunError::Domain(_) => Failure::data(e),
            _ => Failure::numeric(e),
        }
    }
}

type Result<T> = std::result::Result<T, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Evaluate(a) => cmd_evaluate(a),
        Command::Scan(a) => cmd_scan(a),
        Command::Zeros(z) => cmd_zeros(z),
        Command::Probe(a) => cmd_probe(a),
        Command::Selftest(a) => selftest::run(a.json, a.zeros.as_deref()),
        Command::Bessel(a) => cmd_bessel(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.err);
            ExitCode::from(f.code)
        }
    }
}

fn registry(extra: Option<&Path>) -> Result<Registry> {
    let base = Registry::builtin();
    match extra {
        Some(p) => Ok(base.merged(Registry::load(p)?)),
        None => Ok(base),
    }
}

/// `bundled`, an existing file, or a registry id fetched through the cache.
fn resolve_zeros(source: &str, registry_path: Option<&Path>, allow_off_line: bool) -> Result<ZeroSet> {
    let opts = LoadOptions { allow_off_line };
    if source == BUNDLED_SOURCE {
        let zs = bundled_zeros();
        return Ok(if allow_off_line { zs } else { check_critical(zs)? });
    }
    let path = Path::new(source);
    if path.exists() {
        return Ok(load_zeros(path, opts)?);
    }
    let reg = registry(registry_path)?;
    Ok(fetch_zeros(source, &reg, &ZeroCache::from_env(), opts)?)
}

fn check_critical(zs: ZeroSet) -> Result<ZeroSet> {
    if !zs.all_critical() {
        return Err(Failure::data(anyhow::anyhow!("bundled table has zeros off the critical line")));
    }
    Ok(zs)
}

fn precision(spec: &SpecArgs) -> Result<PrecisionConfig> {
    Ok(PrecisionConfig::new(spec.working_bits, spec.bessel_tol)?)
}

fn eval_options(spec: &SpecArgs) -> Result<EvalOptions> {
    Ok(EvalOptions {
        allow_subcritical: spec.allow_subcritical,
        precision: precision(spec)?,
        diagnostic: spec.diagnostic,
    })
}

fn spec_choice(zeros: &ZeroSet, spec: &SpecArgs) -> Result<SpecChoice> {
    if !(spec.tol > 0.0) || !spec.tol.is_finite() {
        return Err(Failure::data(anyhow::anyhow!("--tol must be positive, got {}", spec.tol)));
    }
    Ok(SpecChoice::AutoWith {
        z: spec.z.unwrap_or(DEFAULT_ZEROS.min(zeros.len())),
        rel_tol: spec.tol,
        l: spec.l,
        m: spec.m,
    })
}

fn open_out(path: Option<&Path>) -> Result<Box<dyn Write>> {
    match path {
        Some(p) => {
            let f = fs::File::create(p).with_context(|| format!("cannot create {}", p.display())).map_err(Failure::data)?;
            Ok(Box::new(std::io::BufWriter::new(f)))
        }
        None => Ok(Box::new(std::io::stdout().lock())),
    }
}

/// Summary lines go to stdout when the report goes to a file, else to stderr.
fn summary(to_file: bool, line: &str) {
    if to_file {
        println!("{line}");
    } else {
        eprintln!("{line}");
    }
}

fn report_line(r: &FormulaReport) -> String {
    let mut s = format!(
        "N={} k={} L={} M={} Z={} lhs={} total={} residual={} normalized={}",
        r.params.n,
        r.params.k,
        r.spec.l,
        r.spec.m,
        r.spec.z,
        fmt_num(r.lhs),
        fmt_num(r.total),
        fmt_num(r.residual),
        fmt_num(r.normalized_residual),
    );
    if let Some(v) = r.m4_full_rho {
        s.push_str(&format!(" m4_full_rho={}", fmt_num(v)));
    }
    for f in &r.flags {
        s.push_str(&format!(" [{f}]"));
    }
    s
}

fn write_report(out: &OutArgs, rows: &[Row]) -> Result<()> {
    let mut w = open_out(out.out.as_deref())?;
    write_rows(&mut w, rows, out.format).map_err(Failure::data)?;
    w.flush().map_err(|e| Failure::data(anyhow::Error::from(e)))
}

fn cmd_evaluate(a: EvalArgs) -> Result<()> {
    let zeros = resolve_zeros(&a.zeros.zeros, a.zeros.registry.as_deref(), a.zeros.allow_off_line)?;
    let opts = eval_options(&a.spec)?;
    let ns = match (a.n, a.n_list) {
        (Some(n), None) => vec![n],
        (None, Some(list)) if !list.is_empty() => list,
        _ => return Err(Failure::usage("give exactly one of --N or --N-list")),
    };
    let choice = spec_choice(&zeros, &a.spec)?;
    let to_file = a.out.out.is_some();
    let mut rows = Vec::with_capacity(ns.len());
    for n in ns {
        let params = CesaroParams::new(n, a.k)?;
        let spec = choice.resolve(&params, &zeros)?;
        let r = evaluate(&params, &zeros, &spec, &opts)?;
        summary(to_file, &report_line(&r));
        rows.push(Row::from_report(&r, None));
    }
    write_report(&a.out, &rows)
}

fn cmd_scan(a: ScanArgs) -> Result<()> {
    if a.synthetic {
        let pts: Vec<(f64, f64)> = [500.0f64, 1000.0, 2000.0, 4000.0].iter().map(|&n| (n, 0.37 * n.powi(3))).collect();
        let slope = fit_loglog_slope(&pts).ok_or_else(|| Failure::numeric(anyhow::anyhow!("fit failed")))?;
        println!("synthetic slope={} (planted 3)", fmt_num(slope));
        if (slope - 3.0).abs() > 1e-6 {
            return Err(Failure::numeric(anyhow::anyhow!("synthetic fit off by {}", slope - 3.0)));
        }
        return Ok(());
    }
    let ns = a.n_list.unwrap_or_default();
    if ns.len() < 3 {
        return Err(Failure::usage(format!("scan needs at least 3 values in --N-list, got {}", ns.len())));
    }
    if ns.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Failure::usage("--N-list must be strictly ascending"));
    }
    let zeros = resolve_zeros(&a.zeros.zeros, a.zeros.registry.as_deref(), a.zeros.allow_off_line)?;
    let opts = eval_options(&a.spec)?;
    let choice = spec_choice(&zeros, &a.spec)?;
    let study = scaling_study(&ns, a.k, &zeros, choice, &opts)?;
    finish_scan(&a.out, a.plot_data.as_deref(), &study.reports, study.slope, &study.excluded)
}

fn finish_scan(
    out: &OutArgs,
    plot: Option<&Path>,
    reports: &[FormulaReport],
    slope: Option<f64>,
    excluded: &[u64],
) -> Result<()> {
    let to_file = out.out.is_some();
    for r in reports {
        summary(to_file, &report_line(r));
    }
    for n in excluded {
        summary(to_file, &format!("note: N={n} has zero residual and is left out of the fit"));
    }
    summary(to_file, &format!("slope={}", slope.map_or("NA".to_string(), fmt_num)));
    let rows: Vec<Row> = reports.iter().map(|r| Row::from_report(r, Some(slope))).collect();
    write_report(out, &rows)?;
    if let Some(p) = plot {
        let mut text = String::from("log_N,log_abs_residual\n");
        for r in reports.iter().filter(|r| r.residual != 0.0) {
            text.push_str(&format!("{},{}\n", fmt_num((r.params.n as f64).ln()), fmt_num(r.residual.abs().ln())));
        }
        fs::write(p, text).with_context(|| format!("cannot write {}", p.display())).map_err(Failure::data)?;
    }
    Ok(())
}

fn zero_info(zs: &ZeroSet) -> String {
    let first = zs.zeros().first().map_or("NA".into(), |z| fmt_num(z.gamma));
    let last = zs.zeros().last().map_or("NA".into(), |z| fmt_num(z.gamma));
    format!("source={} count={} first_gamma={} last_gamma={} sha256={}", zs.source_id(), zs.len(), first, last, zs.sha256())
}

fn cmd_zeros(cmd: ZerosCommand) -> Result<()> {
    match cmd {
        ZerosCommand::Fetch { source, limit, registry: reg, allow_off_line } => {
            let cache = ZeroCache::from_env();
            let zs = fetch_zeros(&source, &registry(reg.as_deref())?, &cache, LoadOptions { allow_off_line })?;
            if let Some(n) = limit {
                zs.take(n)?;
            }
            println!("OK {} cache={}", zero_info(&zs), cache.dir().display());
        }
        ZerosCommand::Validate { source, registry: reg, allow_off_line } => {
            let zs = resolve_zeros(&source, reg.as_deref(), allow_off_line)?;
            println!("OK, count={}", zs.len());
        }
        ZerosCommand::Info { source, registry: reg } => {
            let zs = resolve_zeros(&source, reg.as_deref(), true)?;
            println!("{}", zero_info(&zs));
            if source != BUNDLED_SOURCE && !Path::new(&source).exists() {
                println!("cache={} (set {CACHE_ENV} to move it)", ZeroCache::from_env().dir().display());
            }
        }
    }
    Ok(())
}

fn cmd_probe(a: ProbeArgs) -> Result<()> {
    let zeros = resolve_zeros(&a.zeros.zeros, a.zeros.registry.as_deref(), a.zeros.allow_off_line)?;
    let z = a.z.unwrap_or(DEFAULT_ZEROS.min(zeros.len()));
    let used = zeros.take(z)?;
    let opts = ProbeOptions { vmax: a.vmax, lattice_cap: a.lattice_cap, tol: a.tol };
    let series = convergence_probe(a.d, a.k, a.n, used, &opts)?;
    let to_file = a.out.out.is_some();
    let ratio = series.growth_ratio(used.len(), used.len() / 2);
    summary(
        to_file,
        &format!(
            "d={} k={} N={} zeros={} ratio={}",
            a.d,
            a.k,
            a.n,
            used.len(),
            ratio.map_or("NA".into(), fmt_num)
        ),
    );
    let mut w = open_out(a.out.out.as_deref())?;
    write_probe(&mut w, used, &series, a.out.format).map_err(Failure::data)?;
    w.flush().map_err(|e| Failure::data(anyhow::Error::from(e)))
}

fn cmd_bessel(a: BesselArgs) -> Result<()> {
    let mut cfg = PrecisionConfig::new(a.working_bits, a.tol)?;
    cfg = match a.strategy {
        StrategyArg::Auto => cfg,
        StrategyArg::Series => cfg.with_strategy(BesselStrategy::Series),
        StrategyArg::Asymptotic => cfg.with_strategy(BesselStrategy::Asymptotic),
        StrategyArg::Quadrature => cfg.with_strategy(BesselStrategy::Quadrature),
    };
    let nu = Complex64::new(a.nu_re, a.nu_im);
    let v = if a.kernel { bessel_kernel(nu, a.u, &cfg)? } else { bessel_j_detailed(nu, a.u, &cfg)? };
    println!(
        "re={} im={} method={:?} rel_error={} bits={}",
        fmt_num(v.value.re),
        fmt_num(v.value.im),
        v.method,
        fmt_num(v.rel_error),
        v.bits
    );
    Ok(())
}
