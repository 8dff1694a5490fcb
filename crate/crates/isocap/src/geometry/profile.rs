//! Continuous profile evaluation for the exterior solver.
//!
//! The solver needs rho and d rho / d angle at arbitrary angles (cell nodes
//! and quadrature points of its own grid, which may be finer than the
//! domain's). Interpolation is spectral in both symmetry classes, so for
//! smooth profiles the evaluation error is negligible against grid error.

use super::StarDomain;
use crate::numerics::{BarycentricInterpolant, TrigInterpolant};

pub(crate) enum ProfileEval {
    /// N = 2: trigonometric interpolation of uniform samples.
    Trig(TrigInterpolant),
    /// N = 3: barycentric interpolation in s = cos(theta) of the profile and
    /// of its spectral nodal derivative.
    Zonal {
        rho: BarycentricInterpolant,
        drho_ds: BarycentricInterpolant,
    },
}

impl ProfileEval {
    pub fn new(domain: &StarDomain) -> Self {
        match domain.params().dim() {
            2 => ProfileEval::Trig(TrigInterpolant::new(domain.rho())),
            _ => {
                let s: Vec<f64> = domain.grid().cos_nodes().to_vec();
                let rho = BarycentricInterpolant::new(s.clone(), domain.rho().to_vec());
                let deriv_values = rho.nodal_derivatives();
                let drho_ds = BarycentricInterpolant::new(s, deriv_values);
                ProfileEval::Zonal { rho, drho_ds }
            }
        }
    }

    /// Profile value at a polar angle.
    pub fn rho(&self, angle: f64) -> f64 {
        match self {
            ProfileEval::Trig(t) => t.eval(angle),
            ProfileEval::Zonal { rho, .. } => rho.eval(angle.cos()),
        }
    }

    /// Derivative of the profile with respect to the polar angle.
    pub fn rho_prime(&self, angle: f64) -> f64 {
        match self {
            ProfileEval::Trig(t) => t.eval_deriv(angle),
            ProfileEval::Zonal { drho_ds, .. } => -angle.sin() * drho_ds.eval(angle.cos()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::StarDomain;
    use crate::params::Params;

    #[test]
    fn planar_profile_matches_closed_form() {
        let params = Params::new(2, 1.5).unwrap();
        let d = StarDomain::ellipsoid(params, 64, 1.3, 0.8).unwrap();
        let eval = ProfileEval::new(&d);
        let f = |t: f64| 1.3 * 0.8 / ((0.8 * t.cos()).powi(2) + (1.3 * t.sin()).powi(2)).sqrt();
        for i in 0..37 {
            let t = 2.0 * std::f64::consts::PI * i as f64 / 37.0;
            assert!((eval.rho(t) - f(t)).abs() < 1e-10);
        }
        // Derivative against a central difference of the closed form.
        let h = 1e-6;
        for i in 0..37 {
            let t = 2.0 * std::f64::consts::PI * i as f64 / 37.0 + 0.011;
            let fd = (f(t + h) - f(t - h)) / (2.0 * h);
            assert!((eval.rho_prime(t) - fd).abs() < 1e-7);
        }
    }

    #[test]
    fn zonal_profile_matches_closed_form() {
        let params = Params::new(3, 2.0).unwrap();
        let d = StarDomain::ellipsoid(params, 48, 1.2, 0.9).unwrap();
        let eval = ProfileEval::new(&d);
        let f = |t: f64| 1.2 * 0.9 / ((0.9 * t.cos()).powi(2) + (1.2 * t.sin()).powi(2)).sqrt();
        let h = 1e-6;
        for i in 1..40 {
            let t = std::f64::consts::PI * i as f64 / 40.0;
            assert!((eval.rho(t) - f(t)).abs() < 1e-10, "angle {t}");
            let fd = (f(t + h) - f(t - h)) / (2.0 * h);
            assert!((eval.rho_prime(t) - fd).abs() < 1e-6, "angle {t}");
        }
    }

    #[test]
    fn zonal_derivative_vanishes_at_poles() {
        let params = Params::new(3, 2.5).unwrap();
        let d = StarDomain::ellipsoid(params, 64, 1.4, 0.85).unwrap();
        let eval = ProfileEval::new(&d);
        assert!(eval.rho_prime(1e-9).abs() < 1e-6);
        assert!(eval.rho_prime(std::f64::consts::PI - 1e-9).abs() < 1e-6);
    }
}
