//! Star-shaped domains described by radial profiles on angular grids.
//!
//! A domain is the set { r * u(theta) : 0 <= r < rho(theta) } for a positive
//! profile rho sampled on the grid. Dimension 2 uses uniformly spaced angles
//! on the circle; dimension 3 is restricted to axisymmetric profiles sampled
//! at Gauss-Legendre nodes in cos(polar angle), so every surface integral
//! reduces to a one-dimensional quadrature that is exact for polynomial
//! integrands of degree up to 2M - 1 in cos(theta).

mod asymmetry;
pub(crate) mod profile;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::params::{unit_ball_volume, Params};
use crate::Result;

/// Quadrature grid on the unit sphere's polar angle.
///
/// Weights include the full surface measure (the 2 pi azimuthal factor in
/// dimension 3) and sum to |S^{N-1}|.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AngularGrid {
    dim: u32,
    /// Polar angles, strictly ascending; [0, 2 pi) for N = 2, (0, pi) for N = 3.
    nodes: Vec<f64>,
    weights: Vec<f64>,
    cos_nodes: Vec<f64>,
    sin_nodes: Vec<f64>,
}

impl AngularGrid {
    /// Uniform grid of `m` angles on the circle (dimension 2).
    pub fn uniform(m: usize) -> Result<Self> {
        if m < 8 {
            return Err(Error::InvalidDomain(format!(
                "angular grid needs at least 8 nodes, got {m}"
            )));
        }
        let step = 2.0 * std::f64::consts::PI / m as f64;
        let nodes: Vec<f64> = (0..m).map(|j| j as f64 * step).collect();
        let cos_nodes = nodes.iter().map(|t| t.cos()).collect();
        let sin_nodes = nodes.iter().map(|t| t.sin()).collect();
        Ok(AngularGrid {
            dim: 2,
            nodes,
            weights: vec![step; m],
            cos_nodes,
            sin_nodes,
        })
    }

    /// Gauss-Legendre grid of `m` polar nodes in cos(theta) (dimension 3,
    /// axisymmetric). Node angles ascend from the north pole towards the
    /// south pole; neither pole is a node.
    pub fn gauss_legendre(m: usize) -> Result<Self> {
        if m < 8 {
            return Err(Error::InvalidDomain(format!(
                "angular grid needs at least 8 nodes, got {m}"
            )));
        }
        let (s, w) = crate::numerics::gauss_legendre(m);
        // s ascends, so acos(s) descends; reverse to ascend in angle.
        let mut nodes = Vec::with_capacity(m);
        let mut weights = Vec::with_capacity(m);
        let mut cos_nodes = Vec::with_capacity(m);
        for k in (0..m).rev() {
            nodes.push(s[k].acos());
            weights.push(2.0 * std::f64::consts::PI * w[k]);
            cos_nodes.push(s[k]);
        }
        let sin_nodes = nodes.iter().map(|t| t.sin()).collect();
        Ok(AngularGrid {
            dim: 3,
            nodes,
            weights,
            cos_nodes,
            sin_nodes,
        })
    }

    /// Grid for the given dimension with `m` nodes.
    pub fn new(dim: u32, m: usize) -> Result<Self> {
        match dim {
            2 => Self::uniform(m),
            3 => Self::gauss_legendre(m),
            _ => Err(Error::InvalidDomain(format!(
                "angular grids exist for dimensions 2 and 3, got {dim}"
            ))),
        }
    }

    /// Default resolution: 512 angles on the circle, 256 polar nodes on the
    /// sphere.
    pub fn default_for(dim: u32) -> Result<Self> {
        match dim {
            2 => Self::uniform(512),
            3 => Self::gauss_legendre(256),
            _ => Err(Error::InvalidDomain(format!(
                "angular grids exist for dimensions 2 and 3, got {dim}"
            ))),
        }
    }

    #[inline]
    pub fn dim(&self) -> u32 {
        self.dim
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Polar angles, ascending.
    #[inline]
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Surface-measure quadrature weights (sum = |S^{N-1}|).
    #[inline]
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    #[inline]
    pub fn cos_nodes(&self) -> &[f64] {
        &self.cos_nodes
    }

    #[inline]
    pub fn sin_nodes(&self) -> &[f64] {
        &self.sin_nodes
    }
}

/// Star-shaped domain: positive radial profile sampled on an angular grid.
#[derive(Debug, Clone)]
pub struct StarDomain {
    params: Params,
    grid: AngularGrid,
    rho: Vec<f64>,
    nearly_spherical: bool,
}

impl StarDomain {
    /// Builds a domain from profile samples; every sample must be finite and
    /// strictly positive, and the grid dimension must match `params`.
    pub fn from_samples(params: Params, grid: AngularGrid, rho: Vec<f64>) -> Result<Self> {
        if params.dim() != grid.dim() {
            return Err(Error::InvalidDomain(format!(
                "parameter dimension {} does not match grid dimension {}",
                params.dim(),
                grid.dim()
            )));
        }
        if rho.len() != grid.len() {
            return Err(Error::InvalidDomain(format!(
                "profile has {} samples for a grid of {} nodes",
                rho.len(),
                grid.len()
            )));
        }
        if let Some(bad) = rho.iter().find(|v| !v.is_finite() || **v <= 0.0) {
            return Err(Error::InvalidDomain(format!(
                "profile samples must be finite and positive, found {bad}"
            )));
        }
        let dev = rho.iter().fold(0.0f64, |m, &r| m.max((r - 1.0).abs()));
        Ok(StarDomain {
            params,
            grid,
            rho,
            nearly_spherical: dev < 0.5,
        })
    }

    /// Ball of the given radius on the default grid size.
    pub fn ball(params: Params, m: usize, radius: f64) -> Result<Self> {
        let grid = AngularGrid::new(params.dim(), m)?;
        let rho = vec![radius; grid.len()];
        Self::from_samples(params, grid, rho)
    }

    /// Ellipse (N = 2) or prolate/oblate spheroid (N = 3) with semi-axis `a`
    /// along the reference axis and `b` across it. The profile at polar angle
    /// g from the a-axis is a b / sqrt(b^2 cos^2 g + a^2 sin^2 g).
    pub fn ellipsoid(params: Params, m: usize, a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a > 0.0 && b > 0.0) {
            return Err(Error::InvalidDomain(format!(
                "semi-axes must be positive, got a={a}, b={b}"
            )));
        }
        let grid = AngularGrid::new(params.dim(), m)?;
        let rho = grid
            .cos_nodes()
            .iter()
            .zip(grid.sin_nodes())
            .map(|(&c, &s)| a * b / (b * b * c * c + a * a * s * s).sqrt())
            .collect();
        Self::from_samples(params, grid, rho)
    }

    /// Unit-volume ellipsoid with the given aspect ratio a/b. The discrete
    /// volume is renormalized to the unit-ball volume exactly as measured on
    /// the grid.
    pub fn unit_volume_ellipsoid(params: Params, m: usize, aspect: f64) -> Result<Self> {
        if !(aspect.is_finite() && aspect > 0.0) {
            return Err(Error::InvalidDomain(format!(
                "aspect ratio must be positive, got {aspect}"
            )));
        }
        let (a, b) = match params.dim() {
            2 => (aspect.sqrt(), 1.0 / aspect.sqrt()),
            _ => (aspect.powf(2.0 / 3.0), aspect.powf(-1.0 / 3.0)),
        };
        Self::ellipsoid(params, m, a, b)?.into_unit_volume()
    }

    /// Same domain scaled by `factor`.
    pub fn rescaled(&self, factor: f64) -> Result<Self> {
        if !(factor.is_finite() && factor > 0.0) {
            return Err(Error::InvalidDomain(format!(
                "scale factor must be positive, got {factor}"
            )));
        }
        let rho = self.rho.iter().map(|r| r * factor).collect();
        Self::from_samples(self.params, self.grid.clone(), rho)
    }

    /// Rescales so the measured volume equals the unit-ball volume.
    pub fn into_unit_volume(self) -> Result<Self> {
        let v = self.volume();
        let lambda = (unit_ball_volume(self.params.dim()) / v).powf(1.0 / self.params.dim() as f64);
        self.rescaled(lambda)
    }

    #[inline]
    pub fn params(&self) -> &Params {
        &self.params
    }

    #[inline]
    pub fn grid(&self) -> &AngularGrid {
        &self.grid
    }

    #[inline]
    pub fn rho(&self) -> &[f64] {
        &self.rho
    }

    /// True when max_j |rho_j - 1| < 1/2.
    #[inline]
    pub fn nearly_spherical(&self) -> bool {
        self.nearly_spherical
    }

    pub fn min_profile(&self) -> f64 {
        self.rho.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn max_profile(&self) -> f64 {
        self.rho.iter().cloned().fold(0.0, f64::max)
    }

    /// Volume int rho^N / N dsigma.
    pub fn volume(&self) -> f64 {
        let n = self.params.dim();
        let acc: f64 = self
            .rho
            .iter()
            .zip(self.grid.weights())
            .map(|(&r, &w)| w * r.powi(n as i32))
            .sum();
        acc / n as f64
    }

    /// Barycenter (1/|Omega|) int_Omega x dx, returned as [x, y, z] with the
    /// unused components zero (z for N = 2; x, y vanish by axisymmetry for
    /// N = 3).
    pub fn barycenter(&self) -> [f64; 3] {
        let n = self.params.dim() as i32;
        let vol = self.volume();
        let scale = 1.0 / (vol * (n as f64 + 1.0));
        match self.params.dim() {
            2 => {
                let mut x = 0.0;
                let mut y = 0.0;
                for (j, (&r, &w)) in self.rho.iter().zip(self.grid.weights()).enumerate() {
                    let moment = w * r.powi(n + 1);
                    x += moment * self.grid.cos_nodes()[j];
                    y += moment * self.grid.sin_nodes()[j];
                }
                [x * scale, y * scale, 0.0]
            }
            _ => {
                let mut z = 0.0;
                for (j, (&r, &w)) in self.rho.iter().zip(self.grid.weights()).enumerate() {
                    z += w * r.powi(n + 1) * self.grid.cos_nodes()[j];
                }
                [0.0, 0.0, z * scale]
            }
        }
    }

    /// Measure of the part of the domain outside the centered ball B_s.
    pub fn volume_outside_radius(&self, s: f64) -> f64 {
        let n = self.params.dim();
        let acc: f64 = self
            .rho
            .iter()
            .zip(self.grid.weights())
            .map(|(&r, &w)| {
                if r > s {
                    w * (r.powi(n as i32) - s.powi(n as i32))
                } else {
                    0.0
                }
            })
            .sum();
        acc / n as f64
    }

    /// Fraction of the profile's variance carried by the top quarter of the
    /// wavenumbers resolvable on this grid. Large values mean the samples
    /// oscillate at the grid scale and the profile is not trustworthy.
    pub fn high_mode_energy_fraction(&self) -> f64 {
        match self.params.dim() {
            2 => {
                let interp = crate::numerics::TrigInterpolant::new(&self.rho);
                interp.high_mode_energy_fraction(3 * self.grid.len() / 8)
            }
            _ => {
                // Legendre coefficients by the grid's own quadrature; the
                // constant mode is excluded from the variance.
                let m = self.grid.len();
                let kmax = m - 1;
                let mut total = 0.0;
                let mut high = 0.0;
                for k in 1..=kmax {
                    let mut c = 0.0;
                    for (j, &s) in self.grid.cos_nodes().iter().enumerate() {
                        c += self.grid.weights()[j]
                            * self.rho[j]
                            * crate::numerics::legendre_p(k, s);
                    }
                    // Orthonormalization factor on the sphere.
                    let norm2 = 4.0 * std::f64::consts::PI / (2.0 * k as f64 + 1.0);
                    let e = c * c / norm2;
                    total += e;
                    if k > 3 * kmax / 4 {
                        high += e;
                    }
                }
                let mean = self.rho.iter().sum::<f64>() / m as f64;
                // Energy at the round-off floor is quadrature noise on a
                // constant profile, not a real perturbation.
                if total <= 1e-22 * (1.0 + mean * mean) {
                    0.0
                } else {
                    high / total
                }
            }
        }
    }
}

#[cfg(test)]
mod tests;
