//! Experiment harness behind the CLI: shape-family sweeps, CSV emission,
//! log-log exponent fits, and the end-to-end verification reports.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::capacity::{deficit_report, SolverConfig};
use crate::functionals::{truncation_bounds_report, TruncationReport};
use crate::geometry::StarDomain;
use crate::params::Params;
use crate::shapefile::default_grid_points;
use crate::spectral::{alpha_root, fuglede_prediction, q_eigenvalue, ModeSpectrum};
use crate::vecineq::{monotonicity_gap, monotonicity_scan, taylor_scan};
use crate::{Error, Result};

/// Shape families a sweep can run over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// Unit-volume ellipses (dimension 2) or prolate spheroids (dimension
    /// 3); the schedule lists aspect ratios.
    Ellipse,
    /// Single zonal-harmonic perturbations rho = 1 + t Y_k; the schedule
    /// lists amplitudes t.
    Harmonic,
    /// Seeded band-limited random profiles; the schedule lists shape
    /// indices (generated from `count` when left empty).
    Random,
}

impl Family {
    /// Stable identifier used in the CSV family column.
    pub fn name(&self) -> &'static str {
        match self {
            Family::Ellipse => "ellipse",
            Family::Harmonic => "harmonic",
            Family::Random => "random",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ellipse" => Ok(Family::Ellipse),
            "harmonic" => Ok(Family::Harmonic),
            "random" => Ok(Family::Random),
            other => Err(Error::InvalidInput(format!(
                "unknown family {other:?} (expected ellipse, harmonic or random)"
            ))),
        }
    }
}

/// One row of a sweep: the shape parameter with every measured quantity.
///
/// Rows from failed solves carry NaN in all measured columns so a sweep
/// survives individual failures; consumers skip non-finite rows.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepRecord {
    pub family: String,
    /// Aspect ratio, amplitude, or shape index depending on the family.
    pub param: f64,
    /// Capacity of the unit-volume rescaling minus the unit-ball capacity.
    pub deficit: f64,
    pub fraenkel: f64,
    pub alpha: f64,
    /// Leading-order deficit predicted by the second variation at the ball
    /// (NaN when the profile is not nearly spherical).
    pub prediction: f64,
    /// Solver error estimate for the deficit (NaN when unavailable).
    pub err: f64,
}

/// Full description of a sweep, mirroring the CLI flags one to one.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub dim: u32,
    pub p: f64,
    pub family: Family,
    /// Aspects (ellipse), amplitudes (harmonic) or indices (random).
    pub schedule: Vec<f64>,
    /// Degree k of the harmonic-family perturbation Y_k.
    pub harmonic_degree: usize,
    /// Number of random shapes when the schedule is left empty.
    pub count: usize,
    pub seed: u64,
    /// Angular samples per shape; 0 picks the dimension default.
    pub grid_points: usize,
    pub solver: SolverConfig,
    /// CSV destination used by the CLI; ignored by `run_sweep` itself.
    pub out: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            dim: 2,
            p: 1.5,
            family: Family::Ellipse,
            schedule: Vec::new(),
            harmonic_degree: 2,
            count: 20,
            seed: 1,
            grid_points: 0,
            solver: SolverConfig::default(),
            out: None,
        }
    }
}

impl ExperimentConfig {
    /// Reads a config from pretty or compact JSON.
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidConfig(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| Error::InvalidConfig(format!("{}: {e}", path.display())))
    }

    /// Angular sample count after applying the dimension default.
    pub fn effective_grid_points(&self) -> usize {
        if self.grid_points == 0 {
            default_grid_points(self.dim)
        } else {
            self.grid_points
        }
    }

    /// Schedule after expanding the random family's implicit index list.
    pub fn effective_schedule(&self) -> Vec<f64> {
        if self.family == Family::Random && self.schedule.is_empty() {
            (0..self.count).map(|i| i as f64).collect()
        } else {
            self.schedule.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        Params::new(self.dim, self.p)?;
        self.solver.validate()?;
        let m = self.effective_grid_points();
        if m < 16 {
            return Err(Error::InvalidConfig(format!(
                "grid_points = {m} is below the minimum of 16"
            )));
        }
        let schedule = self.effective_schedule();
        if schedule.is_empty() {
            return Err(Error::InvalidConfig("empty parameter schedule".into()));
        }
        if schedule.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidConfig("non-finite schedule entry".into()));
        }
        match self.family {
            Family::Ellipse => {
                if schedule.iter().any(|&a| a <= 0.0) {
                    return Err(Error::InvalidConfig(
                        "ellipse aspects must be positive".into(),
                    ));
                }
            }
            Family::Harmonic => {
                if self.harmonic_degree == 0 || self.harmonic_degree > m / 8 {
                    return Err(Error::InvalidConfig(format!(
                        "harmonic degree {} outside 1..={} for {m} grid points",
                        self.harmonic_degree,
                        m / 8
                    )));
                }
            }
            Family::Random => {
                if schedule.iter().any(|&t| t < 0.0 || t.fract() != 0.0) {
                    return Err(Error::InvalidConfig(
                        "random-family schedule entries must be nonnegative indices".into(),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Splits one seed into independent per-shape streams.
fn shape_seed(seed: u64, index: u64) -> u64 {
    seed ^ index.wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

/// Seeded band-limited profile rho = 1 + phi, degrees 1..=6, with
/// sup|phi| drawn uniformly from [0.05, 0.25).
pub fn random_band_limited(
    params: &Params,
    m: usize,
    seed: u64,
    index: u64,
) -> Result<(StarDomain, ModeSpectrum)> {
    let mut rng = ChaCha8Rng::seed_from_u64(shape_seed(seed, index));
    let mut coeffs = vec![0.0; 7];
    for c in coeffs.iter_mut().skip(1) {
        *c = rng.gen_range(-1.0..1.0);
    }
    let amplitude = rng.gen_range(0.05..0.25);
    let raw = ModeSpectrum::new(params.clone(), coeffs.clone())?;
    let sup = raw.sup_phi();
    if sup > 1e-9 {
        let scale = amplitude / sup;
        for c in coeffs.iter_mut() {
            *c *= scale;
        }
    } else {
        coeffs[1] = amplitude;
    }
    let spectrum = ModeSpectrum::new(params.clone(), coeffs)?;
    let domain = spectrum.synthesize(m)?;
    Ok((domain, spectrum))
}

/// Builds the shape for one schedule entry, together with the spectrum of
/// the unrescaled perturbation when it is known in closed form.
fn build_shape(
    cfg: &ExperimentConfig,
    params: &Params,
    t: f64,
) -> Result<(StarDomain, Option<ModeSpectrum>)> {
    let m = cfg.effective_grid_points();
    match cfg.family {
        Family::Ellipse => {
            let domain = StarDomain::unit_volume_ellipsoid(params.clone(), m, t)?;
            Ok((domain, None))
        }
        Family::Harmonic => {
            let mut coeffs = vec![0.0; cfg.harmonic_degree + 1];
            coeffs[cfg.harmonic_degree] = t;
            let spectrum = ModeSpectrum::new(params.clone(), coeffs)?;
            let domain = spectrum.synthesize(m)?;
            Ok((domain, Some(spectrum)))
        }
        Family::Random => {
            let (domain, spectrum) = random_band_limited(params, m, cfg.seed, t as u64)?;
            Ok((domain, Some(spectrum)))
        }
    }
}

fn measure_shape(cfg: &ExperimentConfig, params: &Params, t: f64) -> Result<SweepRecord> {
    let (domain, spectrum) = build_shape(cfg, params, t)?;
    let unit = domain.into_unit_volume()?;
    let (deficit, solve) = deficit_report(&unit, &cfg.solver)?;
    let fraenkel = unit.fraenkel_asymmetry()?;
    let alpha = unit.alpha_asymmetry()?;
    let spectrum = match spectrum {
        Some(s) => s,
        // The quadratic prediction wants the perturbation itself; recover it
        // from the profile when the family has no closed-form coefficients.
        None => {
            let grid = unit.grid();
            let limit = match grid.dim() {
                2 => grid.len() / 2 - 1,
                _ => grid.len() - 1,
            };
            ModeSpectrum::decompose(&unit, limit.min(64))?
        }
    };
    let prediction = fuglede_prediction(&spectrum).unwrap_or(f64::NAN);
    Ok(SweepRecord {
        family: cfg.family.name().to_string(),
        param: t,
        deficit,
        fraenkel,
        alpha,
        prediction,
        err: solve.error_estimate.unwrap_or(f64::NAN),
    })
}

/// Runs the configured family over its schedule, one record per entry, in
/// schedule order. Failed rows come back with NaN measurements instead of
/// aborting the sweep.
pub fn run_sweep(cfg: &ExperimentConfig) -> Result<Vec<SweepRecord>> {
    cfg.validate()?;
    let params = Params::new(cfg.dim, cfg.p)?;
    let schedule = cfg.effective_schedule();
    let records = schedule
        .par_iter()
        .map(|&t| {
            measure_shape(cfg, &params, t).unwrap_or_else(|_| SweepRecord {
                family: cfg.family.name().to_string(),
                param: t,
                deficit: f64::NAN,
                fraenkel: f64::NAN,
                alpha: f64::NAN,
                prediction: f64::NAN,
                err: f64::NAN,
            })
        })
        .collect();
    Ok(records)
}

/// Header line of the sweep CSV format.
pub const CSV_HEADER: &str = "family,param,deficit,fraenkel,alpha,prediction,err";

/// Renders records as CSV; 17 significant digits so every f64 round-trips
/// to the exact same bits.
pub fn records_to_csv(records: &[SweepRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&format!(
            "{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}\n",
            r.family, r.param, r.deficit, r.fraenkel, r.alpha, r.prediction, r.err
        ));
    }
    out
}

/// Parses the CSV format produced by [`records_to_csv`].
pub fn records_from_csv(text: &str) -> Result<Vec<SweepRecord>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim_end() == CSV_HEADER => {}
        other => {
            return Err(Error::InvalidInput(format!(
                "bad CSV header {other:?}, expected {CSV_HEADER:?}"
            )))
        }
    }
    let mut records = Vec::new();
    for (i, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 7 {
            return Err(Error::InvalidInput(format!(
                "row {}: expected 7 fields, got {}",
                i + 2,
                fields.len()
            )));
        }
        let num = |j: usize| -> Result<f64> {
            fields[j].trim().parse::<f64>().map_err(|e| {
                Error::InvalidInput(format!("row {}, field {}: {e}", i + 2, j + 1))
            })
        };
        records.push(SweepRecord {
            family: fields[0].to_string(),
            param: num(1)?,
            deficit: num(2)?,
            fraenkel: num(3)?,
            alpha: num(4)?,
            prediction: num(5)?,
            err: num(6)?,
        });
    }
    Ok(records)
}

/// Writes records to a CSV file.
pub fn write_csv(records: &[SweepRecord], path: &Path) -> Result<()> {
    std::fs::write(path, records_to_csv(records)).map_err(Error::Io)
}

/// Reads records from a CSV file.
pub fn read_csv(path: &Path) -> Result<Vec<SweepRecord>> {
    records_from_csv(&std::fs::read_to_string(path)?)
}

/// Record serialization formats.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EmitFormat {
    Csv,
    Json,
}

/// Writes records in the chosen format; JSON is the structured-text
/// alternative to the CSV product. Failed rows carry NaN measurements,
/// which JSON renders as null, so only the CSV form round-trips them.
pub fn emit(records: &[SweepRecord], path: &Path, format: EmitFormat) -> Result<()> {
    match format {
        EmitFormat::Csv => write_csv(records, path),
        EmitFormat::Json => {
            std::fs::write(path, serde_json::to_string_pretty(records)?).map_err(Error::Io)
        }
    }
}

/// Rows carrying signal: finite measurements with the deficit and asymmetry
/// above `threshold` times the solver error estimate.
fn usable_rows<'a>(records: &'a [SweepRecord], threshold: f64) -> Vec<&'a SweepRecord> {
    records
        .iter()
        .filter(|r| {
            r.deficit.is_finite()
                && r.fraenkel.is_finite()
                && r.err.is_finite()
                && r.deficit > threshold * r.err
                && r.fraenkel > threshold * r.err
                && r.deficit > 0.0
                && r.fraenkel > 0.0
        })
        .collect()
}

/// Ordinary least squares of ln(deficit) against ln(fraenkel), returning
/// (slope, intercept, r^2). Rows below `threshold` times the error estimate
/// are excluded as noise; at least 3 usable rows are required.
pub fn fit_exponent_with_threshold(
    records: &[SweepRecord],
    threshold: f64,
) -> Result<(f64, f64, f64)> {
    let rows = usable_rows(records, threshold);
    if rows.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "{} usable rows (need at least 3 with deficit and asymmetry above \
             {threshold} times the error estimate)",
            rows.len()
        )));
    }
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .map(|r| (r.fraenkel.ln(), r.deficit.ln()))
        .collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|q| q.0).sum::<f64>() / n;
    let my = pts.iter().map(|q| q.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|q| (q.0 - mx) * (q.0 - mx)).sum();
    let sxy: f64 = pts.iter().map(|q| (q.0 - mx) * (q.1 - my)).sum();
    let syy: f64 = pts.iter().map(|q| (q.1 - my) * (q.1 - my)).sum();
    if sxx <= 0.0 {
        return Err(Error::InsufficientData(
            "all usable rows share one asymmetry value".into(),
        ));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = pts
        .iter()
        .map(|q| {
            let e = q.1 - (intercept + slope * q.0);
            e * e
        })
        .sum();
    let r2 = if syy > 0.0 { 1.0 - ss_res / syy } else { 1.0 };
    Ok((slope, intercept, r2))
}

/// [`fit_exponent_with_threshold`] at the default noise threshold of 5.
pub fn fit_exponent(records: &[SweepRecord]) -> Result<(f64, f64, f64)> {
    fit_exponent_with_threshold(records, 5.0)
}

/// Outcome of the deficit-vs-asymmetry verification over one family.
#[derive(Debug, Clone, Serialize)]
pub struct MainReport {
    pub records: Vec<SweepRecord>,
    pub usable_rows: usize,
    /// True when no row rises above solver noise (family of balls); the
    /// ratio assertions are skipped in that case.
    pub degenerate: bool,
    pub min_deficit_over_fraenkel_sq: f64,
    pub min_deficit_over_alpha: f64,
    pub worst_family: String,
    pub worst_param: f64,
    pub pass: bool,
}

/// Runs the sweep and reports the empirical constants min D/A^2 and
/// min D/alpha over rows with genuine signal.
pub fn verify_main(cfg: &ExperimentConfig) -> Result<MainReport> {
    let records = run_sweep(cfg)?;
    // The absolute floor keeps pure round-off deficits (exact balls report
    // err = 0 to machine precision) from counting as signal.
    let usable: Vec<&SweepRecord> = usable_rows(&records, 5.0)
        .into_iter()
        .filter(|r| r.deficit > 1e-12)
        .collect();
    if usable.is_empty() {
        return Ok(MainReport {
            records,
            usable_rows: 0,
            degenerate: true,
            min_deficit_over_fraenkel_sq: f64::NAN,
            min_deficit_over_alpha: f64::NAN,
            worst_family: cfg.family.name().to_string(),
            worst_param: f64::NAN,
            pass: true,
        });
    }
    let mut min_a = f64::INFINITY;
    let mut min_alpha = f64::INFINITY;
    let mut worst = usable[0];
    for r in &usable {
        if r.fraenkel > 0.0 {
            let q = r.deficit / (r.fraenkel * r.fraenkel);
            if q < min_a {
                min_a = q;
                worst = r;
            }
        }
        if r.alpha.is_finite() && r.alpha > 0.0 {
            min_alpha = min_alpha.min(r.deficit / r.alpha);
        }
    }
    let pass = min_a.is_finite() && min_a > 0.0 && min_alpha.is_finite() && min_alpha > 0.0;
    Ok(MainReport {
        usable_rows: usable.len(),
        degenerate: false,
        min_deficit_over_fraenkel_sq: min_a,
        min_deficit_over_alpha: min_alpha,
        worst_family: worst.family.clone(),
        worst_param: worst.param,
        pass,
        records,
    })
}

/// Closed-form spectral checks over random parameter draws.
#[derive(Debug, Clone, Serialize)]
pub struct SpectralReport {
    pub parameter_draws: usize,
    /// max |Q[Y_1]| over the draws (translation neutrality).
    pub translation_neutral_max: f64,
    /// max over draws and k <= 100 of the defining-quadratic residual of
    /// alpha_k, relative to max(k(k+N-2), 1).
    pub alpha_root_max_residual: f64,
    /// min over draws and 2 <= k <= 100 of Q[Y_k] / k.
    pub min_q_over_k: f64,
    pub pass: bool,
}

/// Checks the decay-exponent and eigenvalue closed forms on `draws` random
/// (N, p) pairs with N in 2..=10.
pub fn verify_spectral(draws: usize, seed: u64) -> Result<SpectralReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut q1_max = 0.0f64;
    let mut residual_max = 0.0f64;
    let mut q_over_k_min = f64::INFINITY;
    for _ in 0..draws {
        let n = rng.gen_range(2u32..=10);
        let p = 1.0 + (n as f64 - 1.0) * rng.gen_range(0.02..0.98);
        let params = Params::new(n, p)?;
        q1_max = q1_max.max(q_eigenvalue(&params, 1).abs());
        for k in 0..=100usize {
            let a = alpha_root(&params, k);
            let lambda = k as f64 * (k as f64 + n as f64 - 2.0);
            let residual = ((p - 1.0) * a * a + (n as f64 - p) * a - lambda).abs();
            residual_max = residual_max.max(residual / lambda.max(1.0));
            if k >= 2 {
                q_over_k_min = q_over_k_min.min(q_eigenvalue(&params, k) / k as f64);
            }
        }
    }
    Ok(SpectralReport {
        parameter_draws: draws,
        translation_neutral_max: q1_max,
        alpha_root_max_residual: residual_max,
        min_q_over_k: q_over_k_min,
        pass: q1_max <= 1e-12 && residual_max < 1e-12 && q_over_k_min > 0.0,
    })
}

/// Scan results for one exponent p.
#[derive(Debug, Clone, Serialize)]
pub struct IneqRow {
    pub p: f64,
    pub samples: usize,
    pub monotonicity_violations: usize,
    /// Empirical lower constant for the monotonicity inequality (half the
    /// worst observed ratio).
    pub monotonicity_constant: f64,
    pub taylor_violations: usize,
    /// Worst observed Taylor-remainder ratio.
    pub taylor_constant: f64,
}

/// Random-scan verification of the two pointwise vector inequalities.
#[derive(Debug, Clone, Serialize)]
pub struct IneqReport {
    pub rows: Vec<IneqRow>,
    /// Both sides of the monotonicity inequality agree bitwise at p = 2.
    pub p_two_exact: bool,
    pub pass: bool,
}

impl IneqReport {
    /// Per-p empirical constants as CSV.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "p,samples,monotonicity_violations,monotonicity_constant,\
             taylor_violations,taylor_constant\n",
        );
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{:.16e},{},{:.16e}\n",
                r.p,
                r.samples,
                r.monotonicity_violations,
                r.monotonicity_constant,
                r.taylor_violations,
                r.taylor_constant
            ));
        }
        out
    }
}

/// Scans both inequalities with `samples` draws per exponent in
/// {1.2, 1.5, 2, 2.5, 3, 4} and checks the exact p = 2 identity.
pub fn verify_ineq(samples: usize, seed: u64) -> Result<IneqReport> {
    let mut rows = Vec::new();
    for p in [1.2, 1.5, 2.0, 2.5, 3.0, 4.0] {
        let mono = monotonicity_scan(p, samples, seed)?;
        let taylor = taylor_scan(p, samples, seed)?;
        rows.push(IneqRow {
            p,
            samples,
            monotonicity_violations: mono.violations,
            monotonicity_constant: mono.empirical_constant(),
            taylor_violations: taylor.violations,
            taylor_constant: taylor.min_ratio,
        });
    }
    // At p = 2 the map is the identity, so both sides of the monotonicity
    // inequality are the same expression and must agree to the bit.
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut p_two_exact = true;
    for _ in 0..1000 {
        let n = rng.gen_range(1..=6);
        let xi: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let eta: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let kappa = if rng.gen_bool(0.5) {
            0.0
        } else {
            rng.gen_range(0.0..2.0)
        };
        let (lhs, rhs) = monotonicity_gap(2.0, kappa, &xi, &eta)?;
        if lhs.to_bits() != rhs.to_bits() {
            p_two_exact = false;
        }
    }
    let pass = p_two_exact
        && rows.iter().all(|r| {
            r.monotonicity_violations == 0
                && r.taylor_violations == 0
                && r.monotonicity_constant > 0.0
                && r.taylor_constant > 0.0
        });
    Ok(IneqReport {
        rows,
        p_two_exact,
        pass,
    })
}

/// Truncation bounds over a family of seeded random shapes.
#[derive(Debug, Clone, Serialize)]
pub struct TruncationSuiteReport {
    pub rows: Vec<TruncationReport>,
    pub shapes: usize,
    pub pass: bool,
}

/// Checks the capacity truncation bounds on `count` seeded band-limited
/// shapes rescaled to unit volume, truncating at radius `s` with the
/// comparison radius `s2`.
pub fn verify_truncation(
    params: &Params,
    count: usize,
    seed: u64,
    s: f64,
    s2: f64,
    grid_points: usize,
    solver: &SolverConfig,
) -> Result<TruncationSuiteReport> {
    let m = if grid_points == 0 {
        default_grid_points(params.dim())
    } else {
        grid_points
    };
    let rows: Result<Vec<TruncationReport>> = (0..count as u64)
        .into_par_iter()
        .map(|i| {
            let (domain, _) = random_band_limited(params, m, seed, i)?;
            let unit = domain.into_unit_volume()?;
            truncation_bounds_report(&unit, s, s2, solver)
        })
        .collect();
    let rows = rows?;
    let pass = rows
        .iter()
        .all(|r| r.lower_bound_holds && r.upper_bound_holds);
    Ok(TruncationSuiteReport {
        shapes: rows.len(),
        pass,
        rows,
    })
}
