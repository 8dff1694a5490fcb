//! Pointwise vector inequalities behind the perturbed-energy estimates.
//!
//! Two families are covered: monotonicity of the map
//! v -> (kappa^2 + |v|^2)^((p-2)/2) v tested against the symmetric weight
//! (kappa^2 + |xi|^2 + |eta|^2)^((p-2)/2) |xi - eta|^2, and the Taylor
//! residual of |.|^p against its sharp quadratic/p-th power lower bounds.
//! The constants are non-explicit, so scans estimate empirical infima over
//! stratified seeded samples and assert positivity only.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::Error;
use crate::Result;

const MAX_DIM: usize = 8;

fn validate_p(p: f64) -> Result<()> {
    if !(p > 1.0) || !p.is_finite() {
        return Err(Error::InvalidInput(format!(
            "exponent p must be finite and > 1, got {p}"
        )));
    }
    Ok(())
}

fn validate_pair(xi: &[f64], eta_vec: &[f64]) -> Result<()> {
    if xi.len() != eta_vec.len() {
        return Err(Error::InvalidInput(format!(
            "vector dimensions differ: {} vs {}",
            xi.len(),
            eta_vec.len()
        )));
    }
    if xi.is_empty() || xi.len() > MAX_DIM {
        return Err(Error::InvalidInput(format!(
            "vector dimension must be in 1..={MAX_DIM}, got {}",
            xi.len()
        )));
    }
    if xi.iter().chain(eta_vec).any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput(
            "vector components must be finite".into(),
        ));
    }
    Ok(())
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Scale factor of the monotone map at v; the singular 0^(negative) corner
/// is continuous with limit 0 for p > 1, handled by the caller.
fn map_scale(p: f64, kappa2: f64, v2: f64) -> f64 {
    (kappa2 + v2).powf(0.5 * (p - 2.0))
}

fn monotonicity_gap_unchecked(p: f64, kappa: f64, xi: &[f64], eta_vec: &[f64]) -> (f64, f64) {
    let d: Vec<f64> = xi.iter().zip(eta_vec).map(|(a, b)| a - b).collect();
    let d2 = dot(&d, &d);
    if d2 == 0.0 {
        return (0.0, 0.0);
    }
    let kappa2 = kappa * kappa;
    let xi2 = dot(xi, xi);
    let eta2 = dot(eta_vec, eta_vec);
    let sx = if kappa2 + xi2 == 0.0 {
        0.0
    } else {
        map_scale(p, kappa2, xi2)
    };
    let se = if kappa2 + eta2 == 0.0 {
        0.0
    } else {
        map_scale(p, kappa2, eta2)
    };
    let lhs = xi
        .iter()
        .zip(eta_vec)
        .zip(&d)
        .map(|((a, b), di)| (sx * a - se * b) * di)
        .sum();
    let rhs_core = map_scale(p, kappa2, xi2 + eta2) * d2;
    (lhs, rhs_core)
}

/// Both sides of the gradient-map monotonicity inequality, the constant
/// stripped from the right-hand side. For p = 2 the two sides agree
/// bit-for-bit because the weight exponent vanishes.
pub fn monotonicity_gap(p: f64, kappa: f64, xi: &[f64], eta_vec: &[f64]) -> Result<(f64, f64)> {
    validate_p(p)?;
    if !(kappa >= 0.0) || !kappa.is_finite() {
        return Err(Error::InvalidInput(format!(
            "kappa must be nonnegative and finite, got {kappa}"
        )));
    }
    validate_pair(xi, eta_vec)?;
    Ok(monotonicity_gap_unchecked(p, kappa, xi, eta_vec))
}

fn power_taylor_gap_unchecked(p: f64, x: &[f64], y: &[f64]) -> f64 {
    let x2 = dot(x, x);
    let y2 = dot(y, y);
    let yp = y2.powf(0.5 * p);
    if x2 == 0.0 {
        return yp;
    }
    let cross: f64 = x.iter().zip(y).map(|(a, b)| a * (b - a)).sum();
    yp - x2.powf(0.5 * p) - p * x2.powf(0.5 * (p - 2.0)) * cross
}

/// Taylor residual |y|^p - |x|^p - p |x|^(p-2) x . (y - x); nonnegative by
/// convexity. The gradient term is defined as 0 at x = 0 (its continuous
/// limit for p > 1), leaving residual |y|^p there.
pub fn power_taylor_gap(p: f64, x: &[f64], y: &[f64]) -> Result<f64> {
    validate_p(p)?;
    validate_pair(x, y)?;
    Ok(power_taylor_gap_unchecked(p, x, y))
}

/// One evaluated monotonicity sample; `lhs >= 0` always (the map is the
/// gradient of a convex function).
#[derive(Debug, Clone, Serialize)]
pub struct IneqSample {
    pub p: f64,
    pub kappa: f64,
    pub xi: Vec<f64>,
    pub eta_vec: Vec<f64>,
    pub lhs: f64,
    pub rhs_core: f64,
}

impl IneqSample {
    pub fn monotonicity(p: f64, kappa: f64, xi: Vec<f64>, eta_vec: Vec<f64>) -> Result<Self> {
        let (lhs, rhs_core) = monotonicity_gap(p, kappa, &xi, &eta_vec)?;
        Ok(IneqSample {
            p,
            kappa,
            xi,
            eta_vec,
            lhs,
            rhs_core,
        })
    }
}

/// Outcome of a seeded scan: the empirical infimum of lhs/rhs over all
/// samples with a nondegenerate right-hand side, and the sample attaining it.
#[derive(Debug, Clone, Serialize)]
pub struct ScanStats {
    pub p: f64,
    pub samples: usize,
    /// Ratios that came out zero or negative; positivity fails iff > 0.
    pub violations: usize,
    pub min_ratio: f64,
    pub worst_xi: Vec<f64>,
    pub worst_eta: Vec<f64>,
    pub worst_kappa: f64,
}

impl ScanStats {
    /// Half the empirical infimum, the constant the assertions use.
    pub fn empirical_constant(&self) -> f64 {
        0.5 * self.min_ratio
    }
}

const CHUNK: usize = 1 << 14;

fn chunk_seed(seed: u64, index: usize) -> u64 {
    seed ^ (index as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

fn random_vector(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> Vec<f64> {
    (0..n).map(|_| scale * rng.gen_range(-1.0..1.0)).collect()
}

/// Draws one stratified pair: plain independent vectors, near-degenerate
/// pairs down to relative separation 1e-6, and exact zero vectors. The
/// separation floor keeps the true gaps (which shrink like the squared
/// separation) well above the round-off of the O(1) terms they are
/// assembled from, so a negative ratio means a genuine violation.
fn sample_pair(rng: &mut ChaCha8Rng) -> (Vec<f64>, Vec<f64>) {
    let n = rng.gen_range(1..=MAX_DIM);
    let scale = 10.0f64.powf(rng.gen_range(-1.0..1.0));
    let xi = if rng.gen_range(0..16) == 0 {
        vec![0.0; n]
    } else {
        random_vector(rng, n, scale)
    };
    let eta_vec = match rng.gen_range(0..3) {
        0 => {
            let delta = scale * 10.0f64.powf(rng.gen_range(-6.0..-1.0));
            let dir = random_vector(rng, n, 1.0);
            let norm = dot(&dir, &dir).sqrt();
            if norm == 0.0 {
                xi.iter()
                    .enumerate()
                    .map(|(i, a)| if i == 0 { a + delta } else { *a })
                    .collect()
            } else {
                xi.iter()
                    .zip(&dir)
                    .map(|(a, u)| a + delta * u / norm)
                    .collect()
            }
        }
        1 if rng.gen_range(0..8) == 0 => vec![0.0; n],
        _ => random_vector(rng, n, scale),
    };
    (xi, eta_vec)
}

fn sample_kappa(rng: &mut ChaCha8Rng) -> f64 {
    if rng.gen_range(0..4) == 0 {
        0.0
    } else {
        10.0f64.powf(rng.gen_range(-4.0..1.0))
    }
}

struct ChunkOutcome {
    min_ratio: f64,
    order: (usize, usize),
    violations: usize,
    worst: (Vec<f64>, Vec<f64>, f64),
}

/// Keeps the smaller ratio; ties break on (chunk, sample) order so the
/// reduction is deterministic. Violation counts are summed by the caller.
fn merge(a: ChunkOutcome, b: ChunkOutcome) -> ChunkOutcome {
    let pick_a = match a.min_ratio.partial_cmp(&b.min_ratio) {
        Some(std::cmp::Ordering::Less) => true,
        Some(std::cmp::Ordering::Greater) => false,
        _ => a.order <= b.order,
    };
    if pick_a {
        a
    } else {
        b
    }
}

fn scan<F>(p: f64, count: usize, seed: u64, eval: F) -> Result<ScanStats>
where
    F: Fn(&mut ChaCha8Rng, f64) -> (Vec<f64>, Vec<f64>, f64, f64, f64) + Sync,
{
    validate_p(p)?;
    if count == 0 {
        return Err(Error::InvalidInput("sample count must be positive".into()));
    }
    let chunks = count.div_ceil(CHUNK);
    let outcomes: Vec<ChunkOutcome> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(chunk_seed(seed, c));
            let lo = c * CHUNK;
            let hi = ((c + 1) * CHUNK).min(count);
            let mut best = ChunkOutcome {
                min_ratio: f64::INFINITY,
                order: (usize::MAX, usize::MAX),
                violations: 0,
                worst: (Vec::new(), Vec::new(), 0.0),
            };
            for s in lo..hi {
                let (xi, eta_vec, kappa, num, den) = eval(&mut rng, p);
                if den == 0.0 {
                    continue;
                }
                let ratio = num / den;
                if ratio <= 0.0 {
                    best.violations += 1;
                }
                if ratio < best.min_ratio {
                    best.min_ratio = ratio;
                    best.order = (c, s);
                    best.worst = (xi, eta_vec, kappa);
                }
            }
            best
        })
        .collect();
    let mut total_violations = 0;
    let mut best: Option<ChunkOutcome> = None;
    for o in outcomes {
        total_violations += o.violations;
        best = Some(match best.take() {
            None => o,
            Some(b) => merge(b, o),
        });
    }
    let best = best.expect("at least one chunk");
    Ok(ScanStats {
        p,
        samples: count,
        violations: total_violations,
        min_ratio: best.min_ratio,
        worst_xi: best.worst.0,
        worst_eta: best.worst.1,
        worst_kappa: best.worst.2,
    })
}

/// Seeded stratified scan of the monotonicity inequality; deterministic for
/// a fixed (count, seed) regardless of thread scheduling.
pub fn monotonicity_scan(p: f64, count: usize, seed: u64) -> Result<ScanStats> {
    scan(p, count, seed, |rng, p| {
        let (xi, eta_vec) = sample_pair(rng);
        let kappa = sample_kappa(rng);
        let (lhs, rhs_core) = monotonicity_gap_unchecked(p, kappa, &xi, &eta_vec);
        (xi, eta_vec, kappa, lhs, rhs_core)
    })
}

/// Seeded stratified scan of the Taylor residual against its sharp lower
/// bound: |y-x|^p for p >= 2, |y-x|^2 (|x|^2 + |y-x|^2)^((p-2)/2) below 2.
pub fn taylor_scan(p: f64, count: usize, seed: u64) -> Result<ScanStats> {
    scan(p, count, seed, |rng, p| {
        let (x, y) = sample_pair(rng);
        let residual = power_taylor_gap_unchecked(p, &x, &y);
        let d2: f64 = x
            .iter()
            .zip(&y)
            .map(|(a, b)| (b - a) * (b - a))
            .sum();
        let den = if p >= 2.0 {
            d2.powf(0.5 * p)
        } else {
            let x2 = dot(&x, &x);
            if x2 + d2 == 0.0 {
                0.0
            } else {
                d2 * (x2 + d2).powf(0.5 * (p - 2.0))
            }
        };
        (x, y, 0.0, residual, den)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gap_validates_inputs() {
        assert!(monotonicity_gap(1.0, 0.0, &[1.0], &[0.5]).is_err());
        assert!(monotonicity_gap(1.5, -0.1, &[1.0], &[0.5]).is_err());
        assert!(monotonicity_gap(1.5, 0.0, &[1.0, 2.0], &[0.5]).is_err());
        assert!(monotonicity_gap(1.5, 0.0, &[], &[]).is_err());
        assert!(monotonicity_gap(1.5, 0.0, &[0.0; 9], &[0.0; 9]).is_err());
        assert!(monotonicity_gap(1.5, 0.0, &[f64::NAN], &[0.5]).is_err());
        assert!(power_taylor_gap(f64::NAN, &[1.0], &[0.5]).is_err());
    }

    #[test]
    fn monotonicity_gap_closed_cases() {
        let (lhs, rhs) = monotonicity_gap(2.7, 0.3, &[0.4, -1.2], &[0.4, -1.2]).unwrap();
        assert_eq!((lhs, rhs), (0.0, 0.0));
        let (lhs, rhs) = monotonicity_gap(3.0, 0.0, &[1.0, 0.0], &[0.0, 1.0]).unwrap();
        assert!((lhs - 2.0).abs() < 1e-14);
        assert!((rhs - 2.0 * 2.0f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn p_two_sides_agree_bitwise() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let (xi, eta_vec) = sample_pair(&mut rng);
            let kappa = sample_kappa(&mut rng);
            let (lhs, rhs) = monotonicity_gap(2.0, kappa, &xi, &eta_vec).unwrap();
            assert_eq!(lhs.to_bits(), rhs.to_bits());
        }
    }

    #[test]
    fn taylor_gap_closed_cases() {
        assert_eq!(power_taylor_gap(2.5, &[1.0, 2.0], &[1.0, 2.0]).unwrap(), 0.0);
        // Integer components keep every f64 operation exact at p = 2, where
        // the residual collapses to |y - x|^2.
        let x = [2.0, -1.0, 0.0];
        let y = [-1.0, 2.0, 2.0];
        let residual = power_taylor_gap(2.0, &x, &y).unwrap();
        assert_eq!(residual, 9.0 + 9.0 + 4.0);
        // x = 0 leaves the bare |y|^p.
        let r = power_taylor_gap(1.5, &[0.0, 0.0], &[3.0, 4.0]).unwrap();
        assert!((r - 125.0f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn taylor_residual_is_nonnegative() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10_000 {
            let p = rng.gen_range(1.0001..4.0);
            let (x, y) = sample_pair(&mut rng);
            let r = power_taylor_gap(p, &x, &y).unwrap();
            assert!(r >= -1e-12 * (1.0 + dot(&x, &x) + dot(&y, &y)), "p {p}: {r}");
        }
    }

    #[test]
    fn scans_find_positive_infima() {
        for p in [1.5, 2.5] {
            let stats = monotonicity_scan(p, 100_000, 42).unwrap();
            assert_eq!(stats.violations, 0, "p {p}: {stats:?}");
            assert!(stats.min_ratio > 0.0);
            assert!(stats.empirical_constant() < stats.min_ratio);
            let stats = taylor_scan(p, 100_000, 42).unwrap();
            assert_eq!(stats.violations, 0, "p {p}: {stats:?}");
            assert!(stats.min_ratio > 0.0);
        }
    }

    #[test]
    fn scans_are_deterministic() {
        let a = monotonicity_scan(1.7, 50_000, 9).unwrap();
        let b = monotonicity_scan(1.7, 50_000, 9).unwrap();
        assert_eq!(a.min_ratio.to_bits(), b.min_ratio.to_bits());
        assert_eq!(a.worst_xi, b.worst_xi);
        assert_eq!(a.worst_eta, b.worst_eta);
        assert_eq!(a.violations, b.violations);
        let c = taylor_scan(2.2, 50_000, 9).unwrap();
        let d = taylor_scan(2.2, 50_000, 9).unwrap();
        assert_eq!(c.min_ratio.to_bits(), d.min_ratio.to_bits());
    }

    #[test]
    fn gaps_scale_by_lambda_to_the_p() {
        // Scaling by a power of two shifts exponents without touching
        // mantissas, so the covariance identity holds to a few ulp of powf.
        // Plain well-separated pairs only: for near-degenerate pairs both
        // sides are dominated by cancellation noise rather than the identity.
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for i in 0..2000 {
            let p = rng.gen_range(1.0001..4.0);
            let n = rng.gen_range(1..=MAX_DIM);
            let xi = if i % 16 == 0 {
                vec![0.0; n]
            } else {
                random_vector(&mut rng, n, 1.0)
            };
            let eta_vec = random_vector(&mut rng, n, 1.0);
            let kappa = sample_kappa(&mut rng);
            let lam = 4.0f64;
            let lam_p = lam.powf(p);
            let (l1, r1) = monotonicity_gap(p, kappa, &xi, &eta_vec).unwrap();
            let sxi: Vec<f64> = xi.iter().map(|v| lam * v).collect();
            let seta: Vec<f64> = eta_vec.iter().map(|v| lam * v).collect();
            let (l2, r2) = monotonicity_gap(p, lam * kappa, &sxi, &seta).unwrap();
            assert!((l2 - lam_p * l1).abs() <= 1e-12 * lam_p * l1.abs().max(1e-300));
            assert!((r2 - lam_p * r1).abs() <= 1e-12 * lam_p * r1.abs().max(1e-300));
            let g1 = power_taylor_gap(p, &xi, &eta_vec).unwrap();
            let g2 = power_taylor_gap(p, &sxi, &seta).unwrap();
            assert!((g2 - lam_p * g1).abs() <= 1e-11 * lam_p * g1.abs().max(1e-300));
        }
    }

    #[test]
    fn sample_constructor_records_both_sides() {
        let s = IneqSample::monotonicity(2.5, 0.1, vec![1.0, 0.5], vec![0.2, -0.3]).unwrap();
        assert!(s.lhs >= 0.0);
        assert!(s.rhs_core > 0.0);
        assert_eq!(s.xi.len(), 2);
    }
}
