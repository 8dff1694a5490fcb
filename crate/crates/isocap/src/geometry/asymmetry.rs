//! Asymmetry functionals: symmetric differences with balls, the Fraenkel
//! asymmetry and the barycentric weighted asymmetry.
//!
//! Everything is computed ray by ray. Along the ray at angle theta the domain
//! is the interval [0, rho(theta)); a ball B_R(c) meets the ray in the
//! interval between the roots of s^2 - 2 s <u, c> + |c|^2 - R^2, clipped to
//! s >= 0. Interval overlaps integrate in closed form against the measure
//! s^{N-1} ds, so the only quadrature left is the one over angles, which is
//! the grid's own rule.

use super::StarDomain;
use crate::error::Error;
use crate::numerics::{adaptive_simpson, golden_section_min, nelder_mead_2d};
use crate::params::unit_ball_volume;
use crate::Result;

/// Entry and exit radii (clipped to s >= 0) of the ball with center offset
/// mu = <u, c>, |c|^2 = c2 and radius r along a unit ray u, if it meets it.
fn ray_ball_section(mu: f64, c2: f64, r: f64) -> Option<(f64, f64)> {
    let disc = mu * mu - c2 + r * r;
    if disc <= 0.0 {
        return None;
    }
    let sq = disc.sqrt();
    let hi = mu + sq;
    if hi <= 0.0 {
        return None;
    }
    Some(((mu - sq).max(0.0), hi))
}

/// Integral of s^{N-1} over [lo, hi].
#[inline]
fn shell_measure(dim: u32, lo: f64, hi: f64) -> f64 {
    if hi <= lo {
        return 0.0;
    }
    (hi.powi(dim as i32) - lo.powi(dim as i32)) / dim as f64
}

impl StarDomain {
    /// Checks that `center` is representable for this symmetry class and
    /// returns, for every grid ray, the scalar product <u_j, c> together with
    /// |c|^2.
    fn ray_offsets(&self, center: [f64; 3]) -> Result<(Vec<f64>, f64)> {
        match self.params().dim() {
            2 => {
                if center[2].abs() > 1e-12 {
                    return Err(Error::InvalidInput(format!(
                        "planar domains take centers with zero third component, got {:?}",
                        center
                    )));
                }
                let c2 = center[0] * center[0] + center[1] * center[1];
                let mu = self
                    .grid()
                    .cos_nodes()
                    .iter()
                    .zip(self.grid().sin_nodes())
                    .map(|(&c, &s)| center[0] * c + center[1] * s)
                    .collect();
                Ok((mu, c2))
            }
            _ => {
                if center[0].abs() > 1e-12 || center[1].abs() > 1e-12 {
                    return Err(Error::InvalidInput(format!(
                        "axisymmetric domains take centers on the symmetry axis, got {:?}",
                        center
                    )));
                }
                let z = center[2];
                let mu = self.grid().cos_nodes().iter().map(|&s| z * s).collect();
                Ok((mu, z * z))
            }
        }
    }

    /// Measure of the symmetric difference with the ball B_radius(center).
    ///
    /// For N = 3 the center must lie on the symmetry axis.
    pub fn symm_diff_with_ball(&self, center: [f64; 3], radius: f64) -> Result<f64> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::InvalidInput(format!(
                "ball radius must be positive, got {radius}"
            )));
        }
        let (mu, c2) = self.ray_offsets(center)?;
        let dim = self.params().dim();
        let mut acc = 0.0;
        for (j, (&r, &w)) in self.rho().iter().zip(self.grid().weights()).enumerate() {
            let omega_part = shell_measure(dim, 0.0, r);
            let contribution = match ray_ball_section(mu[j], c2, radius) {
                None => omega_part,
                Some((a, b)) => {
                    let ball_part = shell_measure(dim, a, b);
                    let overlap = shell_measure(dim, a, b.min(r));
                    omega_part + ball_part - 2.0 * overlap
                }
            };
            acc += w * contribution;
        }
        Ok(acc)
    }

    /// Fraenkel asymmetry: the smallest |Omega delta B| / |B| over balls B of
    /// the same volume as the domain. The center search runs a coarse grid
    /// pass followed by a derivative-free refinement to 1e-8 in the
    /// objective; for N = 3 the center is restricted to the symmetry axis.
    pub fn fraenkel_asymmetry(&self) -> Result<f64> {
        let vol = self.volume();
        let dim = self.params().dim();
        let r = (vol / unit_ball_volume(dim)).powf(1.0 / dim as f64);
        let bary = self.barycenter();
        let spread = (self.max_profile() - self.min_profile()).max(0.05);

        match dim {
            2 => {
                let objective = |c: [f64; 2]| {
                    self.symm_diff_with_ball([c[0], c[1], 0.0], r)
                        .map(|d| d / vol)
                        .unwrap_or(f64::INFINITY)
                };
                let mut best = ([bary[0], bary[1]], objective([bary[0], bary[1]]));
                let steps = 7i32;
                for i in -steps..=steps {
                    for k in -steps..=steps {
                        let c = [
                            bary[0] + spread * i as f64 / steps as f64,
                            bary[1] + spread * k as f64 / steps as f64,
                        ];
                        let v = objective(c);
                        if v < best.1 {
                            best = (c, v);
                        }
                    }
                }
                let (_, v) = nelder_mead_2d(objective, best.0, 0.25 * spread / steps as f64, 1e-9);
                Ok(v.min(best.1))
            }
            _ => {
                let objective = |z: f64| {
                    self.symm_diff_with_ball([0.0, 0.0, z], r)
                        .map(|d| d / vol)
                        .unwrap_or(f64::INFINITY)
                };
                let mut best = (bary[2], objective(bary[2]));
                let steps = 24i32;
                for i in -steps..=steps {
                    let z = bary[2] + spread * i as f64 / steps as f64;
                    let v = objective(z);
                    if v < best.1 {
                        best = (z, v);
                    }
                }
                let half = spread / steps as f64;
                let (_, v) = golden_section_min(objective, best.0 - half, best.0 + half, 1e-9);
                Ok(v.min(best.1))
            }
        }
    }

    /// Barycentric weighted asymmetry: the integral of |1 - |x - x_O|| over
    /// the symmetric difference between the domain and the unit ball centered
    /// at the barycenter x_O. Meaningful for unit-volume domains.
    pub fn alpha_asymmetry(&self) -> Result<f64> {
        let center = self.barycenter();
        let (mu, c2) = self.ray_offsets(center)?;
        let dim = self.params().dim();
        let nm1 = (dim - 1) as i32;
        let tol = 1e-10 / 3.0;
        let mut acc = 0.0;
        for (j, (&rho, &w)) in self.rho().iter().zip(self.grid().weights()).enumerate() {
            let m = mu[j];
            // Distance from the ball center to the point at radius s.
            let dist = move |s: f64| (s * s - 2.0 * m * s + c2).max(0.0).sqrt();
            let integrand = |s: f64| (1.0 - dist(s)).abs() * s.powi(nm1);
            let mut ray = 0.0;
            match ray_ball_section(m, c2, 1.0) {
                None => {
                    ray += adaptive_simpson(&integrand, 0.0, rho, tol);
                }
                Some((a, b)) => {
                    // Domain below the ball entry, domain above the ball
                    // exit, ball beyond the domain. On each piece the sign of
                    // 1 - dist is constant, so the integrand is smooth.
                    if a > 0.0 {
                        ray += adaptive_simpson(&integrand, 0.0, a.min(rho), tol);
                    }
                    if rho > b {
                        ray += adaptive_simpson(&integrand, b, rho, tol);
                    }
                    let lo = a.max(rho);
                    if b > lo {
                        ray += adaptive_simpson(&integrand, lo, b, tol);
                    }
                }
            }
            acc += w * ray;
        }
        Ok(acc)
    }
}
