//! Family averages of Frobenius traces, the main/error term split, and
//! one-level densities.

mod density;
mod sweep;
mod terms;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::arith::{gcd, prime_count};
use crate::error::{Error, Result};
use crate::families::{coprimality_formula, count_family, sample_family, Conductor, FamilySpec};

pub use density::{
    dev_r, fejer_periodized, katz_sarnak_prediction, one_level_density, one_level_density_eigen, refined_prediction,
    refined_rhs, spectral_density, TestFunction, TestKind,
};
pub use sweep::{sample_distribution, sweep_family, FamilySweep, TraceDistribution, MAX_SWEEP, MAX_SYMBOL_TABLE};
pub use terms::{a0_identity, d_r, et_term, mt_term, rmt_moment, s_jk_sum, secondary_main_term, EtReport, MatrixGroup};

/// Epsilon used in the diagnostic error envelopes.
pub const ENVELOPE_EPS: f64 = 0.1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyMode {
    Exhaustive,
    Sample { count: usize, seed: u64 },
}

/// Traces of every member (exhaustive) or of a reproducible uniform sample.
pub fn trace_distribution(spec: &FamilySpec, mode: FamilyMode) -> Result<TraceDistribution> {
    match mode {
        FamilyMode::Exhaustive => Ok(sweep_family(spec, None)?.distribution),
        FamilyMode::Sample { count, seed } => {
            if count == 0 {
                return Err(Error::EmptyFamily("sample size is zero".into()));
            }
            sample_distribution(spec, &sample_family(spec, count, seed)?)
        }
    }
}

/// The averaged scaled trace `q^(n/2) <Tr(Theta^n)>` against the prediction
/// `-sum_{s|(r,n), s>1} phi(s) q^(n/s) - q^(n/2) D_r(g,n)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceReport {
    pub q: u64,
    pub r: u32,
    pub g: u32,
    pub n: u32,
    pub family_size: BigInt,
    pub curves: u64,
    pub avg_scaled: BigRational,
    /// Standard error of `avg_scaled`, for sampled runs.
    pub std_error: Option<f64>,
    pub prediction_main: BigRational,
    pub residual: BigRational,
    /// `-((r,n)-1)` times the coprimality formula for the prime at infinity.
    /// The main term contains this at the same order as `D_r`, but the
    /// prediction above leaves it out.
    pub infinity_term: BigRational,
    /// `q^(n/2)/g + q^(n - (1/2 + eps) d)`, a scale for the residual.
    pub bound_envelope: f64,
}

impl TraceReport {
    /// `<Tr(Theta^n)>` as a float.
    pub fn average_trace(&self) -> f64 {
        self.avg_scaled.to_f64().unwrap_or(f64::NAN) / (self.q as f64).powf(self.n as f64 / 2.0)
    }
}

pub fn trace_report(spec: &FamilySpec, dist: &TraceDistribution, n: u32, sampled: bool) -> Result<TraceReport> {
    let (q, r, g, d) = (spec.q(), spec.r(), spec.g(), spec.d());
    let avg_scaled = dist.average_scaled(n)?;
    let prediction_main = -BigRational::from_integer(secondary_main_term(q, r, n)) - d_r(spec, n);
    let residual = &avg_scaled - &prediction_main;
    let w_inf = gcd(r as u64, n as u64) - 1;
    let infinity_term = -coprimality_formula(spec, 1) * BigRational::from_integer(BigInt::from(w_inf));
    let qf = q as f64;
    let bound_envelope = qf.powf(n as f64 / 2.0) / g as f64 + qf.powf(n as f64 - (0.5 + ENVELOPE_EPS) * d as f64);
    Ok(TraceReport {
        q,
        r,
        g,
        n,
        family_size: count_family(spec, &Conductor::One)?,
        curves: dist.total(),
        avg_scaled,
        std_error: sampled.then(|| dist.standard_error(n)),
        prediction_main,
        residual,
        infinity_term,
        bound_envelope,
    })
}

pub fn average_scaled_trace(spec: &FamilySpec, n: u32, mode: FamilyMode) -> Result<TraceReport> {
    let dist = trace_distribution(spec, mode)?;
    trace_report(spec, &dist, n, mode != FamilyMode::Exhaustive)
}

/// One named comparison with both sides rendered as exact strings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub lhs: String,
    pub rhs: String,
}

impl Check {
    pub fn equal<T: PartialEq + std::fmt::Display>(name: impl Into<String>, lhs: &T, rhs: &T) -> Self {
        Check { name: name.into(), pass: lhs == rhs, lhs: lhs.to_string(), rhs: rhs.to_string() }
    }
}

#[derive(Clone, Debug)]
pub struct VerifyRow {
    pub report: TraceReport,
    pub mt: BigRational,
    pub et: Option<EtReport>,
}

#[derive(Clone, Debug)]
pub struct Verification {
    pub rows: Vec<VerifyRow>,
    pub checks: Vec<Check>,
}

impl Verification {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Largest degree D <= n_max for which per-prime symbol histograms are cheap
/// enough to collect in an exhaustive sweep.
pub fn histogram_degree(spec: &FamilySpec, n_max: u32) -> Result<u32> {
    let q = spec.q();
    let blocks: BigInt = (1..=spec.d()).map(|m| prime_count(q, m)).sum();
    let monic = count_family(spec, &Conductor::One)? / spec.r();
    let mut best = 0;
    let mut probes = BigInt::zero();
    for m in 1..=n_max {
        probes += prime_count(q, m);
        if probes > BigInt::from(30_000)
            || &probes * &blocks > BigInt::from(MAX_SYMBOL_TABLE)
            || &probes * &monic > BigInt::from(4_000_000_000u64)
        {
            break;
        }
        best = m;
    }
    Ok(best)
}

/// Exhaustive averages for `1 <= n <= n_max` with the exact checks:
/// vanishing for `(r,n) = 1`, `avg = MT + ET`, agreement of the two error
/// term routes, no contribution from infinity, and the a = 0 identity. The
/// error term is computed for `n` up to `histogram_degree`.
pub fn verify_trace_averages(spec: &FamilySpec, n_max: u32) -> Result<Verification> {
    let hd = histogram_degree(spec, n_max)?;
    let sweep = sweep_family(spec, (hd > 0).then_some(hd))?;
    let (q, r) = (spec.q(), spec.r());
    let rows: Vec<(VerifyRow, Vec<Check>)> = (1..=n_max)
        .into_par_iter()
        .map(|n| {
            let report = trace_report(spec, &sweep.distribution, n, false)?;
            let mt = mt_term(spec, n)?;
            let et = if n <= hd { Some(et_term(spec, &sweep, n)?) } else { None };
            let mut checks = Vec::new();
            let zero = BigRational::zero();
            if gcd(r as u64, n as u64) == 1 {
                checks.push(Check::equal(format!("vanishing_average n={n}"), &report.avg_scaled, &zero));
                checks.push(Check::equal(format!("vanishing_main_term n={n}"), &mt, &zero));
                if let Some(et) = &et {
                    checks.push(Check::equal(format!("vanishing_error_term n={n}"), &et.definition, &zero));
                }
            }
            if let Some(et) = &et {
                checks.push(Check::equal(format!("partition n={n}"), &report.avg_scaled, &(&mt + &et.definition)));
                checks.push(Check::equal(format!("error_term_routes n={n}"), &et.definition, &et.reduced));
                checks.push(Check::equal(format!("error_term_infinity n={n}"), &et.infinity, &zero));
            }
            let (lhs, rhs) = a0_identity(q, r, n);
            checks.push(Check::equal(format!("a0_identity n={n}"), &lhs, &rhs));
            Ok((VerifyRow { report, mt, et }, checks))
        })
        .collect::<Result<_>>()?;
    let mut out = Verification { rows: Vec::new(), checks: Vec::new() };
    for (row, checks) in rows {
        out.rows.push(row);
        out.checks.extend(checks);
    }
    Ok(out)
}

/// Family average of the one-level density against its predictions.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityReport {
    pub q: u64,
    pub r: u32,
    pub g: u32,
    pub testfn: String,
    pub curves: u64,
    /// Spectral route from the exact trace averages.
    pub lhs: f64,
    /// Eigenangle route averaged over the family, for built-in test functions.
    pub lhs_eigen: Option<f64>,
    /// Largest per-curve gap between the two routes.
    pub max_route_gap: Option<f64>,
    /// Largest `| |u| sqrt(q) - 1 |` over the zeros of all L-polynomials.
    pub rh_deviation: f64,
    /// Refined prediction including the deviation term (one-sided `fhat` only).
    pub rhs_refined: Option<f64>,
    pub rhs_ks: f64,
    pub dev_r: f64,
}

impl DensityReport {
    pub fn residual_refined(&self) -> Option<f64> {
        self.rhs_refined.map(|r| (self.lhs - r).abs())
    }

    pub fn residual_ks(&self) -> f64 {
        (self.lhs - self.rhs_ks).abs()
    }
}

pub fn density_report(spec: &FamilySpec, f: &TestFunction, dist: &TraceDistribution) -> Result<DensityReport> {
    let g = spec.g();
    let rhs_refined = if f.one_sided { Some(refined_rhs(spec, f)?) } else { None };
    let sq = (spec.q() as f64).sqrt();
    let averages: Vec<f64> = (1..=(f.support() * 2.0 * g as f64).ceil() as u32)
        .map(|n| Ok(dist.average_scaled(n)?.to_f64().unwrap_or(f64::NAN) / sq.powi(n as i32)))
        .collect::<Result<_>>()?;
    let lhs = spectral_density(f, g, |n| averages[n as usize - 1]);
    struct PerCurve {
        rh: f64,
        eigen: Option<(f64, f64)>,
        count: u64,
    }
    let per_curve: Vec<PerCurve> = dist
        .entries()
        .par_iter()
        .map(|(_, l, c)| {
            let (_, rh) = l.unitary_roots()?;
            let eigen = match one_level_density_eigen(l, f) {
                Ok(v) => Some((v, (v - one_level_density(l, f)).abs())),
                Err(Error::UnsupportedDirectEval) => None,
                Err(e) => return Err(e),
            };
            Ok(PerCurve { rh, eigen, count: *c })
        })
        .collect::<Result<_>>()?;
    let rh_deviation = per_curve.iter().map(|p| p.rh).fold(0.0, f64::max);
    let (lhs_eigen, max_route_gap) = if per_curve.iter().all(|p| p.eigen.is_some()) {
        let total: f64 = per_curve.iter().map(|p| p.eigen.unwrap().0 * p.count as f64).sum();
        let gap = per_curve.iter().map(|p| p.eigen.unwrap().1).fold(0.0, f64::max);
        (Some(total / dist.total() as f64), Some(gap))
    } else {
        (None, None)
    };
    Ok(DensityReport {
        q: spec.q(),
        r: spec.r(),
        g,
        testfn: f.describe(),
        curves: dist.total(),
        lhs,
        lhs_eigen,
        max_route_gap,
        rh_deviation,
        rhs_refined,
        rhs_ks: katz_sarnak_prediction(spec, f),
        dev_r: dev_r(spec, f),
    })
}
