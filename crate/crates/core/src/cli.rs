//! Batch command line: `count`, `verify` and `density`, each emitting a
//! JSON or CSV report. Exit codes are 0 when every check passes, 1 when an
//! identity fails and 2 for an invalid configuration.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::arith::{divisors, units};
use crate::error::{Error, Result};
use crate::families::{
    branch_count_monic, count_family, count_from_series, enumerated_branch_sizes, incexc_coeff, refined_count,
    series_coeff, unram_ratio, Branch, Conductor, FamilySpec,
};
use crate::polynomials::{Poly, PrimePoly};
use crate::statistics::{
    density_report, trace_distribution, trace_report, verify_trace_averages, Check, FamilyMode, TestFunction,
};

/// Families up to this size are also enumerated by `count`.
const ENUMERATION_CHECK_LIMIT: u64 = 2_000_000;

#[derive(Parser, Debug, Clone)]
#[command(name = "cyclic-covers", version, about = "Frobenius trace statistics of thin families of cyclic covers")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Family size, per-branch and per-residue counts, series cross-checks.
    Count(Common),
    /// Averaged traces with the main/error term split and exact identities.
    Verify(Common),
    /// One-level density against the refined and random matrix predictions.
    Density(Common),
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct Common {
    #[arg(long)]
    pub q: u64,
    #[arg(long)]
    pub r: u32,
    #[arg(long, required_unless_present = "g_list")]
    pub g: Option<u32>,
    /// Comma separated genera (density only).
    #[arg(long, value_delimiter = ',')]
    pub g_list: Option<Vec<u32>>,
    #[arg(long, default_value_t = 6)]
    pub n_max: u32,
    #[arg(long, value_enum, default_value_t = NumberMode::Exact)]
    pub mode: NumberMode,
    /// Use a uniform sample of this many members instead of the whole family.
    #[arg(long)]
    pub sample: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// `fejer` or the path of a CSV table with header `x,fhat`.
    #[arg(long, default_value = "fejer")]
    pub testfn: String,
    #[arg(long, default_value_t = 0.45)]
    pub alpha: f64,
    /// Treat the test function as supported on `x >= 0`.
    #[arg(long)]
    pub one_sided: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum NumberMode {
    /// Rationals as `num/den` strings.
    Exact,
    /// Rationals rounded to floats.
    Float,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

impl Common {
    fn genera(&self) -> Vec<u32> {
        match (&self.g_list, self.g) {
            (Some(list), _) => list.clone(),
            (None, Some(g)) => vec![g],
            (None, None) => Vec::new(),
        }
    }

    fn single_genus(&self) -> Result<u32> {
        match self.genera()[..] {
            [g] => Ok(g),
            _ => Err(Error::Invalid("this command takes a single --g".into())),
        }
    }

    fn family_mode(&self) -> FamilyMode {
        match self.sample {
            Some(count) => FamilyMode::Sample { count, seed: self.seed },
            None => FamilyMode::Exhaustive,
        }
    }

    fn test_function(&self) -> Result<TestFunction> {
        if self.testfn == "fejer" {
            if !(self.alpha > 0.0) {
                return Err(Error::Invalid(format!("alpha = {} must be positive", self.alpha)));
            }
            Ok(TestFunction::fejer(self.alpha, self.one_sided))
        } else {
            TestFunction::from_csv(std::path::Path::new(&self.testfn), self.one_sided)
        }
    }

    fn rational(&self, x: &BigRational) -> String {
        match self.mode {
            NumberMode::Exact => rational_string(x),
            NumberMode::Float => float_string(x.to_f64().unwrap_or(f64::NAN)),
        }
    }
}

/// `num/den`, or just `num` for integers.
pub fn rational_string(x: &BigRational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// 17 significant digits, enough to round-trip an f64.
pub fn float_string(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

#[derive(Serialize)]
struct CheckOut {
    name: String,
    status: &'static str,
    lhs: String,
    rhs: String,
}

impl From<&Check> for CheckOut {
    fn from(c: &Check) -> Self {
        CheckOut {
            name: c.name.clone(),
            status: if c.pass { "pass" } else { "fail" },
            lhs: c.lhs.clone(),
            rhs: c.rhs.clone(),
        }
    }
}

#[derive(Serialize)]
struct Report<R: Serialize> {
    schema: u32,
    command: &'static str,
    config: serde_json::Value,
    rows: Vec<R>,
    checks: Vec<CheckOut>,
}

/// A finished command: machine-readable report, a human summary, and
/// whether every check passed.
pub struct Outcome {
    pub report: String,
    pub summary: String,
    pub pass: bool,
}

fn config_json(c: &Common) -> serde_json::Value {
    serde_json::json!({
        "q": c.q,
        "r": c.r,
        "g": c.genera(),
        "n_max": c.n_max,
        "mode": c.mode,
        "family": match c.sample { Some(n) => format!("sample({n}, seed={})", c.seed), None => "exhaustive".into() },
        "testfn": c.testfn,
        "alpha": float_string(c.alpha),
        "one_sided": c.one_sided,
    })
}

fn render<R: Serialize>(
    command: &'static str,
    c: &Common,
    rows: Vec<R>,
    checks: &[Check],
    format: Format,
) -> Result<String> {
    match format {
        Format::Json => {
            let report = Report {
                schema: 1,
                command,
                config: config_json(c),
                rows,
                checks: checks.iter().map(CheckOut::from).collect(),
            };
            let mut s = serde_json::to_string_pretty(&report).map_err(|e| Error::Invalid(e.to_string()))?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for row in rows {
                w.serialize(row).map_err(|e| Error::Invalid(e.to_string()))?;
            }
            let bytes = w.into_inner().map_err(|e| Error::Invalid(e.to_string()))?;
            String::from_utf8(bytes).map_err(|e| Error::Invalid(e.to_string()))
        }
    }
}

#[derive(Serialize)]
struct CountRow {
    branch: &'static str,
    residue: u32,
    radical_degree: u32,
    monic: String,
}

pub fn cmd_count(c: &Common) -> Result<Outcome> {
    let spec = FamilySpec::from_order(c.q, c.r, c.single_genus()?)?;
    let (r, d) = (spec.r(), spec.d());
    let field = spec.field();
    let mut rows = vec![CountRow {
        branch: Branch::Unramified.name(),
        residue: 0,
        radical_degree: d,
        monic: refined_count(field, r, d, 0, &Conductor::One)?.to_string(),
    }];
    for k in units(r as u64) {
        rows.push(CountRow {
            branch: Branch::Ramified.name(),
            residue: k as u32,
            radical_degree: d - 1,
            monic: refined_count(field, r, d - 1, k as u32, &Conductor::One)?.to_string(),
        });
    }
    let size = count_family(&spec, &Conductor::One)?;
    let mut checks = vec![Check::equal("family_size_series", &size, &count_from_series(&spec, &Conductor::One)?)];
    let lin = Poly::x();
    for conductor in [Conductor::Finite(lin.clone()), Conductor::Infinity] {
        let name = if conductor == Conductor::Infinity { "coprime_infinity_series" } else { "coprime_linear_series" };
        checks.push(Check::equal(name, &count_family(&spec, &conductor)?, &count_from_series(&spec, &conductor)?));
    }
    checks.extend(incexc_checks(&spec)?);
    let monic = [branch_count_monic(&spec, Branch::Unramified)?, branch_count_monic(&spec, Branch::Ramified)?];
    if size <= BigInt::from(ENUMERATION_CHECK_LIMIT) {
        let seen = enumerated_branch_sizes(&spec)?;
        for (b, branch) in Branch::ALL.iter().enumerate() {
            checks.push(Check::equal(format!("enumeration {}", branch.name()), &seen[b], &monic[b]));
        }
    }
    let mut summary = format!("{spec:?}\nfamily size {size} ({} alpha classes)\n", r);
    for (b, branch) in Branch::ALL.iter().enumerate() {
        summary += &format!("  {:<11} monic {}\n", branch.name(), monic[b]);
    }
    for row in &rows {
        summary +=
            &format!("  deg F = {} mod {r}, radical degree {}: {}\n", row.residue, row.radical_degree, row.monic);
    }
    append_checks(&mut summary, &checks);
    let pass = checks.iter().all(|c| c.pass);
    Ok(Outcome { report: render("count", c, rows, &checks, c.format.unwrap_or(Format::Json))?, summary, pass })
}

#[derive(Serialize)]
struct VerifyRowOut {
    n: u32,
    curves: u64,
    avg_scaled: String,
    avg_trace: String,
    std_error: Option<String>,
    mt: Option<String>,
    et: Option<String>,
    prediction: String,
    residual: String,
    infinity_term: String,
    envelope: String,
}

pub fn cmd_verify(c: &Common) -> Result<Outcome> {
    let spec = FamilySpec::from_order(c.q, c.r, c.single_genus()?)?;
    let mut out_rows = Vec::new();
    let mut checks = Vec::new();
    let mut summary = format!(
        "{spec:?}\n{:>3} {:>16} {:>16} {:>16} {:>16} {:>12}\n",
        "n", "avg", "MT", "ET", "prediction", "residual"
    );
    let mut reports = Vec::new();
    match c.family_mode() {
        FamilyMode::Exhaustive => {
            let v = verify_trace_averages(&spec, c.n_max)?;
            checks = v.checks;
            for row in v.rows {
                reports.push((row.report, Some(row.mt), row.et.map(|e| e.definition)));
            }
        }
        mode => {
            let dist = trace_distribution(&spec, mode)?;
            for n in 1..=c.n_max {
                reports.push((trace_report(&spec, &dist, n, true)?, None, None));
            }
        }
    }
    for (rep, mt, et) in reports {
        let f = |x: &Option<BigRational>| x.as_ref().map(|v| c.rational(v));
        summary += &format!(
            "{:>3} {:>16.6} {:>16} {:>16} {:>16.6} {:>12.4}\n",
            rep.n,
            rep.avg_scaled.to_f64().unwrap_or(f64::NAN),
            mt.as_ref().map_or("-".into(), |v| format!("{:.6}", v.to_f64().unwrap_or(f64::NAN))),
            et.as_ref().map_or("-".into(), |v| format!("{:.6}", v.to_f64().unwrap_or(f64::NAN))),
            rep.prediction_main.to_f64().unwrap_or(f64::NAN),
            rep.residual.to_f64().unwrap_or(f64::NAN),
        );
        out_rows.push(VerifyRowOut {
            n: rep.n,
            curves: rep.curves,
            avg_scaled: c.rational(&rep.avg_scaled),
            avg_trace: float_string(rep.average_trace()),
            std_error: rep.std_error.map(float_string),
            mt: f(&mt),
            et: f(&et),
            prediction: c.rational(&rep.prediction_main),
            residual: c.rational(&rep.residual),
            infinity_term: c.rational(&rep.infinity_term),
            envelope: float_string(rep.bound_envelope),
        });
    }
    let field = spec.field();
    checks.extend(incexc_checks(&spec)?);
    let lin = PrimePoly::finite(field, Poly::x())?;
    for p in [lin, PrimePoly::Infinity] {
        let u = unram_ratio(&spec, &p)?;
        let label = if p.is_infinite() { "infinity" } else { "linear" };
        summary += &format!(
            "coprimality ratio ({label}): exact {:.6}, formula {:.6}, residual {:.6}\n",
            u.exact.to_f64().unwrap_or(f64::NAN),
            u.formula.to_f64().unwrap_or(f64::NAN),
            u.residual.to_f64().unwrap_or(f64::NAN)
        );
    }
    append_checks(&mut summary, &checks);
    let pass = checks.iter().all(|c| c.pass);
    Ok(Outcome { report: render("verify", c, out_rows, &checks, c.format.unwrap_or(Format::Json))?, summary, pass })
}

#[derive(Serialize)]
struct DensityRowOut {
    g: u32,
    lhs: String,
    rhs_refined: Option<String>,
    rhs_ks: String,
    dev_r: String,
    residual_refined: Option<String>,
    residual_ks: String,
    curves: u64,
    lhs_eigen: Option<String>,
    rh_deviation: String,
}

/// Tolerance for the spectral/eigenangle agreement and the root radii.
const FLOAT_CHECK_TOL: f64 = 1e-8;

pub fn cmd_density(c: &Common) -> Result<Outcome> {
    let f = c.test_function()?;
    let bound = 1.0 / (c.r.max(2) - 1) as f64;
    if f.support() >= bound {
        return Err(Error::SupportViolation { point: f.support(), bound });
    }
    let genera = c.genera();
    if genera.is_empty() {
        return Err(Error::Invalid("no genus given".into()));
    }
    let mut rows = Vec::new();
    let mut checks = Vec::new();
    let mut summary = format!(
        "{}\n{:>3} {:>12} {:>12} {:>12} {:>12} {:>12}\n",
        f.describe(),
        "g",
        "lhs",
        "refined",
        "katz-sarnak",
        "dev_r",
        "residual"
    );
    for g in genera {
        let spec = FamilySpec::from_order(c.q, c.r, g)?;
        let dist = trace_distribution(&spec, c.family_mode())?;
        let rep = density_report(&spec, &f, &dist)?;
        let opt = |x: Option<f64>| x.map(float_string);
        if let Some(gap) = rep.max_route_gap {
            checks.push(Check {
                name: format!("density_routes g={g}"),
                pass: gap <= FLOAT_CHECK_TOL,
                lhs: float_string(gap),
                rhs: float_string(FLOAT_CHECK_TOL),
            });
        }
        checks.push(Check {
            name: format!("root_radii g={g}"),
            pass: rep.rh_deviation <= FLOAT_CHECK_TOL,
            lhs: float_string(rep.rh_deviation),
            rhs: float_string(FLOAT_CHECK_TOL),
        });
        summary += &format!(
            "{:>3} {:>12.6} {:>12} {:>12.6} {:>12.6} {:>12}\n",
            g,
            rep.lhs,
            rep.rhs_refined.map_or("-".into(), |v| format!("{v:.6}")),
            rep.rhs_ks,
            rep.dev_r,
            rep.residual_refined().map_or("-".into(), |v| format!("{v:.6}")),
        );
        rows.push(DensityRowOut {
            g,
            lhs: float_string(rep.lhs),
            rhs_refined: opt(rep.rhs_refined),
            rhs_ks: float_string(rep.rhs_ks),
            dev_r: float_string(rep.dev_r),
            residual_refined: opt(rep.residual_refined()),
            residual_ks: float_string(rep.residual_ks()),
            curves: rep.curves,
            lhs_eigen: opt(rep.lhs_eigen),
            rh_deviation: float_string(rep.rh_deviation),
        });
    }
    append_checks(&mut summary, &checks);
    let pass = checks.iter().all(|c| c.pass);
    Ok(Outcome { report: render("density", c, rows, &checks, c.format.unwrap_or(Format::Csv))?, summary, pass })
}

/// Inclusion-exclusion against the direct series for the prime `x`.
fn incexc_checks(spec: &FamilySpec) -> Result<Vec<Check>> {
    let (field, r, d) = (spec.field(), spec.r(), spec.d());
    let prime = PrimePoly::finite(field, Poly::x())?;
    let mut checks = Vec::new();
    for s in divisors(r as u64) {
        let direct = series_coeff(field, r, s as u32, &Conductor::Finite(Poly::x()), d)?.coeff_cyc(d);
        let incexc = incexc_coeff(field, r, s as u32, &prime, d)?;
        checks.push(Check {
            name: format!("inclusion_exclusion s={s}"),
            pass: direct == incexc,
            lhs: format!("{direct:?}"),
            rhs: format!("{incexc:?}"),
        });
    }
    Ok(checks)
}

fn append_checks(summary: &mut String, checks: &[Check]) {
    for c in checks {
        summary.push_str(&format!("{:<32} {}\n", c.name, if c.pass { "PASS" } else { "FAIL" }));
    }
}

/// Runs one command on a pool of `--jobs` threads.
pub fn execute(cli: &Cli) -> Result<Outcome> {
    let common = match &cli.command {
        Command::Count(c) | Command::Verify(c) | Command::Density(c) => c,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(common.jobs.max(1))
        .build()
        .map_err(|e| Error::Invalid(e.to_string()))?;
    pool.install(|| match &cli.command {
        Command::Count(c) => cmd_count(c),
        Command::Verify(c) => cmd_verify(c),
        Command::Density(c) => cmd_density(c),
    })
}

/// Parses the arguments, runs the command, writes the report and returns
/// the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let outcome = match execute(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return match e {
                Error::RhViolation { .. } => 1,
                _ => 2,
            };
        }
    };
    let common = match &cli.command {
        Command::Count(c) | Command::Verify(c) | Command::Density(c) => c,
    };
    let written = match &common.out {
        Some(path) => {
            print!("{}", outcome.summary);
            std::fs::write(path, &outcome.report)
        }
        None => {
            eprint!("{}", outcome.summary);
            std::io::stdout().write_all(outcome.report.as_bytes())
        }
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return 2;
    }
    if outcome.pass {
        0
    } else {
        1
    }
}
