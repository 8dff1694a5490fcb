//! Problem parameters and unit-ball constants.

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Ambient dimension N and capacity exponent p, validated to 1 < p < N.
///
/// Closed-form quantities (ball capacity, radial potential, mode eigenvalues)
/// are meaningful for every integer N >= 2 and accept any such `Params`.
/// Geometry and the exterior solver are implemented for N = 2 and for N = 3
/// with axisymmetric profiles; their constructors reject other dimensions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct Params {
    dim: u32,
    p: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
struct RawParams {
    dim: u32,
    p: f64,
}

impl From<Params> for RawParams {
    fn from(v: Params) -> Self {
        RawParams { dim: v.dim, p: v.p }
    }
}

impl TryFrom<RawParams> for Params {
    type Error = Error;

    fn try_from(v: RawParams) -> Result<Self, Error> {
        Params::new(v.dim, v.p)
    }
}

impl Params {
    pub fn new(dim: u32, p: f64) -> Result<Self, Error> {
        if dim < 2 {
            return Err(Error::InvalidParams(format!(
                "dimension must be at least 2, got {dim}"
            )));
        }
        if !p.is_finite() || p <= 1.0 || p >= dim as f64 {
            return Err(Error::InvalidParams(format!(
                "exponent must satisfy 1 < p < {dim}, got {p}"
            )));
        }
        Ok(Params { dim, p })
    }

    #[inline]
    pub fn dim(&self) -> u32 {
        self.dim
    }

    #[inline]
    pub fn p(&self) -> f64 {
        self.p
    }

    /// Decay rate beta = (N - p)/(p - 1); the radial potential is r^(-beta).
    #[inline]
    pub fn decay_exponent(&self) -> f64 {
        (self.dim as f64 - self.p) / (self.p - 1.0)
    }
}

/// Volume omega_N of the unit ball in R^N, i.e. pi^(N/2) / Gamma(N/2 + 1),
/// evaluated through the recurrence omega_N = (2 pi / N) omega_{N-2}.
pub fn unit_ball_volume(dim: u32) -> f64 {
    assert!(dim >= 1, "dimension must be positive");
    let mut values = [1.0, 2.0]; // omega_0, omega_1
    let mut n = if dim % 2 == 0 { 0u32 } else { 1u32 };
    let idx = (dim % 2) as usize;
    while n < dim {
        n += 2;
        values[idx] *= 2.0 * std::f64::consts::PI / n as f64;
    }
    values[idx]
}

/// Surface measure N * omega_N of the unit sphere in R^N.
pub fn unit_sphere_area(dim: u32) -> f64 {
    dim as f64 * unit_ball_volume(dim)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validates_exponent_range() {
        assert!(Params::new(3, 2.0).is_ok());
        assert!(Params::new(2, 1.5).is_ok());
        assert!(Params::new(3, 3.0).is_err());
        assert!(Params::new(3, 1.0).is_err());
        assert!(Params::new(1, 0.5).is_err());
        assert!(Params::new(3, f64::NAN).is_err());
    }

    #[test]
    fn ball_volumes_match_closed_forms() {
        let pi = std::f64::consts::PI;
        assert!((unit_ball_volume(1) - 2.0).abs() < 1e-15);
        assert!((unit_ball_volume(2) - pi).abs() < 1e-15);
        assert!((unit_ball_volume(3) - 4.0 * pi / 3.0).abs() < 1e-14);
        assert!((unit_ball_volume(4) - pi * pi / 2.0).abs() < 1e-14);
        assert!((unit_ball_volume(5) - 8.0 * pi * pi / 15.0).abs() < 1e-14);
        assert!((unit_sphere_area(3) - 4.0 * pi).abs() < 1e-14);
    }

    #[test]
    fn decay_exponent_examples() {
        let pr = Params::new(3, 2.0).unwrap();
        assert_eq!(pr.decay_exponent(), 1.0);
        let pr = Params::new(2, 1.5).unwrap();
        assert_eq!(pr.decay_exponent(), 1.0);
    }

    #[test]
    fn serde_round_trip_rejects_bad_input() {
        let pr = Params::new(3, 2.5).unwrap();
        let text = serde_json::to_string(&pr).unwrap();
        let back: Params = serde_json::from_str(&text).unwrap();
        assert_eq!(pr, back);
        assert!(serde_json::from_str::<Params>(r#"{"dim":3,"p":5.0}"#).is_err());
    }
}
