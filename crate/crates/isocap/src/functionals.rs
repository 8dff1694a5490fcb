//! Volume penalization and reduction to bounded sets.
//!
//! The penalized cost augments the capacity with a piecewise-linear volume
//! penalty and a smoothed asymmetry term; it is evaluated, never minimized.
//! The truncation helpers intersect a domain with a centered ball and check
//! the explicit capacity bounds that control how much capacity the far part
//! of the domain can carry.

use serde::{Deserialize, Serialize};

use crate::capacity::{ball_capacity, solve_capacity, SolverConfig};
use crate::error::Error;
use crate::geometry::StarDomain;
use crate::params::unit_ball_volume;
use crate::Result;

/// Weights of the penalized cost: volume-penalty slope `eta`, target
/// asymmetry `epsilon`, and asymmetry-penalty weight `sigma`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "RawPenaltyParams")]
pub struct PenaltyParams {
    eta: f64,
    epsilon: f64,
    sigma: f64,
}

#[derive(Deserialize)]
struct RawPenaltyParams {
    eta: f64,
    epsilon: f64,
    sigma: f64,
}

impl TryFrom<RawPenaltyParams> for PenaltyParams {
    type Error = Error;

    fn try_from(raw: RawPenaltyParams) -> Result<Self> {
        PenaltyParams::new(raw.eta, raw.epsilon, raw.sigma)
    }
}

impl PenaltyParams {
    pub fn new(eta: f64, epsilon: f64, sigma: f64) -> Result<Self> {
        if !(eta > 0.0) || !eta.is_finite() {
            return Err(Error::InvalidInput(format!(
                "penalty slope eta must be positive and finite, got {eta}"
            )));
        }
        if !(epsilon >= 0.0) || !epsilon.is_finite() {
            return Err(Error::InvalidInput(format!(
                "target asymmetry epsilon must be nonnegative and finite, got {epsilon}"
            )));
        }
        if !(sigma > 0.0) || !sigma.is_finite() {
            return Err(Error::InvalidInput(format!(
                "asymmetry weight sigma must be positive and finite, got {sigma}"
            )));
        }
        Ok(PenaltyParams { eta, epsilon, sigma })
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }
}

/// Piecewise-linear volume penalty about an arbitrary kink point: slope
/// -1/eta below the kink and -eta above it, zero at the kink.
///
/// Generic so property tests can run the exact same branch structure in
/// exact rational arithmetic; the f64 entry point is [`f_eta`].
pub fn f_eta_about<T>(kink: T, s: T, eta: T) -> T
where
    T: Clone
        + PartialOrd
        + std::ops::Sub<Output = T>
        + std::ops::Mul<Output = T>
        + std::ops::Div<Output = T>
        + std::ops::Neg<Output = T>,
{
    let d = s.clone() - kink.clone();
    if s <= kink {
        -(d / eta)
    } else {
        -(eta * d)
    }
}

/// Volume penalty vanishing at the unit-ball volume of the given dimension,
/// with slope -1/eta below it and -eta above it.
pub fn f_eta(dim: u32, s: f64, eta: f64) -> Result<f64> {
    if dim < 2 {
        return Err(Error::InvalidInput(format!(
            "volume penalty needs dimension >= 2, got {dim}"
        )));
    }
    if !(s >= 0.0) || !s.is_finite() {
        return Err(Error::InvalidInput(format!(
            "volume must be nonnegative and finite, got {s}"
        )));
    }
    if !(eta > 0.0) || !eta.is_finite() {
        return Err(Error::InvalidInput(format!(
            "penalty slope eta must be positive and finite, got {eta}"
        )));
    }
    Ok(f_eta_about(unit_ball_volume(dim), s, eta))
}

/// Capacity plus volume penalty plus the smoothed asymmetry penalty
/// sqrt(epsilon^2 + sigma^2 (alpha - epsilon)^2).
pub fn penalized_cost(d: &StarDomain, pen: &PenaltyParams, cfg: &SolverConfig) -> Result<f64> {
    let cap = solve_capacity(d, cfg)?.value;
    let vol_pen = f_eta(d.params().dim(), d.volume(), pen.eta)?;
    let alpha = d.alpha_asymmetry()?;
    let dev = alpha - pen.epsilon;
    let asym_pen = (pen.epsilon * pen.epsilon + pen.sigma * pen.sigma * dev * dev).sqrt();
    Ok(cap + vol_pen + asym_pen)
}

/// Intersects the domain with the centered ball of radius `cutoff` and
/// rescales the result back to unit volume.
pub fn truncate_rescale(d: &StarDomain, cutoff: f64) -> Result<StarDomain> {
    if !(cutoff > 0.0) || !cutoff.is_finite() {
        return Err(Error::InvalidInput(format!(
            "truncation radius must be positive and finite, got {cutoff}"
        )));
    }
    let rho: Vec<f64> = d.rho().iter().map(|r| r.min(cutoff)).collect();
    StarDomain::from_samples(d.params().clone(), d.grid().clone(), rho)?.into_unit_volume()
}

/// Capacities and bound checks for a domain against its truncation to a
/// centered ball. `upper_slack` is the numerical slack used for the
/// qualitative upper bound, the sum of the two refinement error estimates.
#[derive(Debug, Clone, Serialize)]
pub struct TruncationReport {
    pub cap_domain: f64,
    pub err_domain: f64,
    pub cap_truncated: f64,
    pub err_truncated: f64,
    /// Explicit lower bound on the truncated capacity from the volume lost.
    pub lower_bound: f64,
    pub outside_s: f64,
    pub outside_s2: f64,
    /// Observed constant in the upper bound, reported only when the domain
    /// actually sticks out of the larger ball.
    pub empirical_c: Option<f64>,
    pub upper_slack: f64,
    pub lower_bound_holds: bool,
    pub upper_bound_holds: bool,
}

/// Solves for the capacities of a unit-volume domain and its intersection
/// with the ball of radius `s`, then checks the explicit lower bound
/// Cap(B1) (1 - |Omega \ B_s| / |B1|)^((N-p)/N) <= Cap(Omega inter B_s)
/// and the qualitative upper bound Cap(Omega inter B_s) <= Cap(Omega) up to
/// numerical slack. The radius `s2 > s` feeds the reported empirical
/// constant of the sharp upper bound.
pub fn truncation_bounds_report(
    d: &StarDomain,
    s: f64,
    s2: f64,
    cfg: &SolverConfig,
) -> Result<TruncationReport> {
    if !(s > 0.0) || !s.is_finite() || !(s2 > s) || !s2.is_finite() {
        return Err(Error::InvalidInput(format!(
            "truncation radii must satisfy 0 < s < s2, got s = {s}, s2 = {s2}"
        )));
    }
    let params = d.params().clone();
    let dim = params.dim() as f64;
    let ball_vol = unit_ball_volume(params.dim());
    if ((d.volume() - ball_vol) / ball_vol).abs() > 1e-8 {
        return Err(Error::InvalidDomain(format!(
            "truncation bounds need a unit-volume domain; volume is {} against {ball_vol}",
            d.volume()
        )));
    }
    let full = solve_capacity(d, cfg)?;
    let rho: Vec<f64> = d.rho().iter().map(|r| r.min(s)).collect();
    let truncated_domain = StarDomain::from_samples(params.clone(), d.grid().clone(), rho)?;
    let truncated = solve_capacity(&truncated_domain, cfg)?;
    let err_domain = full.error_estimate.unwrap_or(0.0);
    let err_truncated = truncated.error_estimate.unwrap_or(0.0);

    let outside_s = d.volume_outside_radius(s);
    let outside_s2 = d.volume_outside_radius(s2);
    let exponent = (dim - params.p()) / dim;
    let lower_bound =
        ball_capacity(&params, 1.0)? * (1.0 - outside_s / ball_vol).powf(exponent);
    let upper_slack = 2.0 * (err_domain + err_truncated);
    let empirical_c = if outside_s2 > 1e-12 {
        let gap = full.value - truncated.value;
        Some(gap * (1.0 - s / s2).powf(-params.p()) * outside_s2.powf(-exponent))
    } else {
        None
    };
    Ok(TruncationReport {
        cap_domain: full.value,
        err_domain,
        cap_truncated: truncated.value,
        err_truncated,
        lower_bound,
        outside_s,
        outside_s2,
        empirical_c,
        upper_slack,
        lower_bound_holds: lower_bound <= truncated.value + 2.0 * err_truncated,
        upper_bound_holds: truncated.value <= full.value + upper_slack,
    })
}
