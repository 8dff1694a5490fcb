//! JSON shape files describing star-shaped domains.
//!
//! A shape file is a single JSON object whose `profile_kind` field selects
//! the layout:
//!
//! ```json
//! { "profile_kind": "samples",  "dimension": 2, "rho": [1.0, 1.1, ...] }
//! { "profile_kind": "modes",    "dimension": 3, "coefficients": [0.0, 0.0, 0.1] }
//! { "profile_kind": "ellipse",  "dimension": 2, "aspect": 1.2 }
//! { "profile_kind": "constant", "dimension": 2, "radius": 1.0 }
//! ```
//!
//! `samples` lists the radial profile on the standard angular grid of the
//! given dimension (equally spaced angles for planar domains, Gauss-Legendre
//! polar angles for axisymmetric ones); the grid size is the sample count.
//! `modes` lists zonal-harmonic coefficients a_0..a_K of rho = 1 + sum a_k Y_k.
//! `ellipse` is the unit-volume ellipse or prolate spheroid of the given
//! aspect ratio, and `constant` is the ball of the given radius. The three
//! synthesized kinds accept an optional `grid_points` override; the default
//! is 512 angles in dimension 2 and 256 in dimension 3.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::geometry::{AngularGrid, StarDomain};
use crate::params::Params;
use crate::spectral::ModeSpectrum;
use crate::{Error, Result};

/// Parsed contents of a shape file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "profile_kind", rename_all = "snake_case")]
pub enum ShapeFile {
    /// Radial samples on the dimension's standard angular grid.
    Samples { dimension: u32, rho: Vec<f64> },
    /// Zonal-harmonic coefficients a_0..a_K of rho = 1 + sum a_k Y_k.
    Modes {
        dimension: u32,
        coefficients: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        grid_points: Option<usize>,
    },
    /// Unit-volume ellipse (dimension 2) or prolate spheroid (dimension 3).
    Ellipse {
        dimension: u32,
        aspect: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        grid_points: Option<usize>,
    },
    /// Ball of the given radius.
    Constant {
        dimension: u32,
        radius: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        grid_points: Option<usize>,
    },
}

/// Default angular sample count for synthesized profiles.
pub fn default_grid_points(dim: u32) -> usize {
    if dim == 2 {
        512
    } else {
        256
    }
}

impl ShapeFile {
    /// Dimension declared in the file.
    pub fn dimension(&self) -> u32 {
        match self {
            ShapeFile::Samples { dimension, .. }
            | ShapeFile::Modes { dimension, .. }
            | ShapeFile::Ellipse { dimension, .. }
            | ShapeFile::Constant { dimension, .. } => *dimension,
        }
    }

    /// Reads and parses a shape file.
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::ShapeFile(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| Error::ShapeFile(format!("{}: {e}", path.display())))
    }

    /// Writes the shape as pretty-printed JSON.
    pub fn to_path(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self)?;
        std::fs::write(path, text)
            .map_err(|e| Error::ShapeFile(format!("{}: {e}", path.display())))
    }

    /// Builds the domain, checking the file's dimension against `params`.
    pub fn build(&self, params: &Params) -> Result<StarDomain> {
        if self.dimension() != params.dim() {
            return Err(Error::ShapeFile(format!(
                "shape file is {}-dimensional but the run requested dimension {}",
                self.dimension(),
                params.dim()
            )));
        }
        let dim = params.dim();
        match self {
            ShapeFile::Samples { rho, .. } => {
                let grid = AngularGrid::new(dim, rho.len())?;
                StarDomain::from_samples(params.clone(), grid, rho.clone())
            }
            ShapeFile::Modes {
                coefficients,
                grid_points,
                ..
            } => {
                let m = grid_points.unwrap_or_else(|| default_grid_points(dim));
                ModeSpectrum::new(params.clone(), coefficients.clone())?.synthesize(m)
            }
            ShapeFile::Ellipse {
                aspect,
                grid_points,
                ..
            } => {
                let m = grid_points.unwrap_or_else(|| default_grid_points(dim));
                StarDomain::unit_volume_ellipsoid(params.clone(), m, *aspect)
            }
            ShapeFile::Constant {
                radius,
                grid_points,
                ..
            } => {
                let m = grid_points.unwrap_or_else(|| default_grid_points(dim));
                StarDomain::ball(params.clone(), m, *radius)
            }
        }
    }
}
