//! Spectrally accurate interpolation of angular profiles.
//!
//! Uniform periodic samples get trigonometric interpolation; samples on
//! Gauss-Legendre nodes get barycentric Lagrange interpolation. Both converge
//! spectrally for smooth data, which keeps the profile evaluation error far
//! below the solver's grid error.

/// Trigonometric interpolant of samples at theta_j = 2 pi j / m.
#[derive(Debug, Clone)]
pub struct TrigInterpolant {
    mean: f64,
    /// (cos, sin) coefficient pairs for wavenumbers 1..=kmax.
    coeffs: Vec<(f64, f64)>,
    /// Coefficient of cos(m/2 theta) when m is even.
    nyquist: f64,
    half_m: usize,
}

impl TrigInterpolant {
    pub fn new(samples: &[f64]) -> Self {
        let m = samples.len();
        assert!(m >= 4, "need at least 4 samples");
        let mf = m as f64;
        let mean = samples.iter().sum::<f64>() / mf;
        let kmax = if m % 2 == 0 { m / 2 - 1 } else { (m - 1) / 2 };
        let step = 2.0 * std::f64::consts::PI / mf;
        let mut coeffs = Vec::with_capacity(kmax);
        for k in 1..=kmax {
            let mut a = 0.0;
            let mut b = 0.0;
            for (j, &v) in samples.iter().enumerate() {
                let (s, c) = (k as f64 * j as f64 * step).sin_cos();
                a += v * c;
                b += v * s;
            }
            coeffs.push((2.0 * a / mf, 2.0 * b / mf));
        }
        let nyquist = if m % 2 == 0 {
            samples
                .iter()
                .enumerate()
                .map(|(j, &v)| if j % 2 == 0 { v } else { -v })
                .sum::<f64>()
                / mf
        } else {
            0.0
        };
        TrigInterpolant {
            mean,
            coeffs,
            nyquist,
            half_m: m / 2,
        }
    }

    pub fn eval(&self, theta: f64) -> f64 {
        let mut acc = self.mean;
        for (k, (a, b)) in self.coeffs.iter().enumerate() {
            let (s, c) = ((k + 1) as f64 * theta).sin_cos();
            acc += a * c + b * s;
        }
        if self.nyquist != 0.0 {
            acc += self.nyquist * (self.half_m as f64 * theta).cos();
        }
        acc
    }

    pub fn eval_deriv(&self, theta: f64) -> f64 {
        let mut acc = 0.0;
        for (k, (a, b)) in self.coeffs.iter().enumerate() {
            let kf = (k + 1) as f64;
            let (s, c) = (kf * theta).sin_cos();
            acc += kf * (b * c - a * s);
        }
        if self.nyquist != 0.0 {
            let kf = self.half_m as f64;
            acc -= self.nyquist * kf * (kf * theta).sin();
        }
        acc
    }

    /// Energy fraction carried by wavenumbers above `k_lo` (mean excluded).
    pub fn high_mode_energy_fraction(&self, k_lo: usize) -> f64 {
        let mut total = 0.0;
        let mut high = 0.0;
        for (k, (a, b)) in self.coeffs.iter().enumerate() {
            let e = a * a + b * b;
            total += e;
            if k + 1 > k_lo {
                high += e;
            }
        }
        let e_nyq = self.nyquist * self.nyquist;
        total += e_nyq;
        if self.half_m > k_lo {
            high += e_nyq;
        }
        // Energy at the round-off floor is quadrature noise on a constant
        // profile, not a real perturbation.
        if total <= 1e-22 * (1.0 + self.mean * self.mean) {
            0.0
        } else {
            high / total
        }
    }
}

/// Barycentric Lagrange interpolant on arbitrary distinct nodes.
///
/// Weights are accumulated in log magnitude so that large node counts do not
/// overflow; only weight ratios enter the barycentric formula.
#[derive(Debug, Clone)]
pub struct BarycentricInterpolant {
    nodes: Vec<f64>,
    values: Vec<f64>,
    weights: Vec<f64>,
}

impl BarycentricInterpolant {
    pub fn new(nodes: Vec<f64>, values: Vec<f64>) -> Self {
        assert_eq!(nodes.len(), values.len());
        assert!(nodes.len() >= 2, "need at least 2 nodes");
        let weights = barycentric_weights(&nodes);
        BarycentricInterpolant {
            nodes,
            values,
            weights,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let mut num = 0.0;
        let mut den = 0.0;
        for ((&s, &v), &w) in self.nodes.iter().zip(&self.values).zip(&self.weights) {
            let d = x - s;
            if d.abs() < 1e-300 {
                return v;
            }
            let q = w / d;
            num += q * v;
            den += q;
        }
        num / den
    }

    /// Derivative values at the nodes themselves (spectral differentiation).
    pub fn nodal_derivatives(&self) -> Vec<f64> {
        let n = self.nodes.len();
        let mut out = vec![0.0; n];
        for i in 0..n {
            let mut acc = 0.0;
            for j in 0..n {
                if i == j {
                    continue;
                }
                let d_ij = (self.weights[j] / self.weights[i]) / (self.nodes[i] - self.nodes[j]);
                acc += d_ij * (self.values[j] - self.values[i]);
            }
            out[i] = acc;
        }
        out
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }
}

fn barycentric_weights(nodes: &[f64]) -> Vec<f64> {
    let n = nodes.len();
    let mut log_mag = vec![0.0f64; n];
    let mut negative = vec![false; n];
    for j in 0..n {
        let mut lm = 0.0;
        let mut neg = false;
        for k in 0..n {
            if k == j {
                continue;
            }
            let d = nodes[j] - nodes[k];
            assert!(d != 0.0, "nodes must be distinct");
            lm -= d.abs().ln();
            if d < 0.0 {
                neg = !neg;
            }
        }
        log_mag[j] = lm;
        negative[j] = neg;
    }
    let max_lm = log_mag.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    log_mag
        .iter()
        .zip(&negative)
        .map(|(&lm, &neg)| {
            let w = (lm - max_lm).exp();
            if neg {
                -w
            } else {
                w
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::gauss_legendre;
    use std::f64::consts::PI;

    #[test]
    fn trig_interpolant_reproduces_band_limited_data() {
        let m = 32;
        let f = |t: f64| 1.0 + 0.3 * (2.0 * t).cos() - 0.15 * (5.0 * t).sin();
        let samples: Vec<f64> = (0..m).map(|j| f(2.0 * PI * j as f64 / m as f64)).collect();
        let interp = TrigInterpolant::new(&samples);
        for i in 0..97 {
            let t = 2.0 * PI * i as f64 / 97.0;
            assert!((interp.eval(t) - f(t)).abs() < 1e-13);
        }
        let df = |t: f64| -0.6 * (2.0 * t).sin() - 0.75 * (5.0 * t).cos();
        for i in 0..97 {
            let t = 2.0 * PI * i as f64 / 97.0 + 0.013;
            assert!((interp.eval_deriv(t) - df(t)).abs() < 1e-12);
        }
    }

    #[test]
    fn trig_interpolant_is_spectrally_accurate_on_smooth_data() {
        // Fourier coefficients of this function decay like exp(-0.62 k), so
        // 96 samples leave a truncation tail near 1e-11.
        let f = |t: f64| 1.0 / (1.2 + t.cos());
        let m = 96;
        let samples: Vec<f64> = (0..m).map(|j| f(2.0 * PI * j as f64 / m as f64)).collect();
        let interp = TrigInterpolant::new(&samples);
        for i in 0..53 {
            let t = 2.0 * PI * i as f64 / 53.0 + 0.007;
            assert!((interp.eval(t) - f(t)).abs() < 1e-9);
        }
    }

    #[test]
    fn high_mode_fraction_detects_oscillation() {
        let m = 64;
        let smooth: Vec<f64> = (0..m)
            .map(|j| 1.0 + 0.2 * (2.0 * 2.0 * PI * j as f64 / m as f64).cos())
            .collect();
        let interp = TrigInterpolant::new(&smooth);
        assert!(interp.high_mode_energy_fraction(16) < 1e-20);

        let rough: Vec<f64> = (0..m)
            .map(|j| 1.0 + 0.2 * (30.0 * 2.0 * PI * j as f64 / m as f64).cos())
            .collect();
        let interp = TrigInterpolant::new(&rough);
        assert!(interp.high_mode_energy_fraction(16) > 0.99);
    }

    #[test]
    fn barycentric_reproduces_polynomials_on_gauss_nodes() {
        let (nodes, _) = gauss_legendre(24);
        let f = |x: f64| 3.0 - x + 0.5 * x.powi(5);
        let values: Vec<f64> = nodes.iter().map(|&x| f(x)).collect();
        let interp = BarycentricInterpolant::new(nodes.clone(), values);
        for i in 0..41 {
            let x = -0.99 + 1.98 * i as f64 / 40.0;
            assert!((interp.eval(x) - f(x)).abs() < 1e-12);
        }
        // Evaluation exactly at a node returns the sample.
        assert_eq!(interp.eval(nodes[3]), f(nodes[3]));
    }

    #[test]
    fn barycentric_derivatives_are_spectral() {
        let (nodes, _) = gauss_legendre(32);
        let values: Vec<f64> = nodes.iter().map(|&x| (2.0 * x).sin()).collect();
        let interp = BarycentricInterpolant::new(nodes.clone(), values);
        let derivs = interp.nodal_derivatives();
        for (i, &x) in nodes.iter().enumerate() {
            assert!((derivs[i] - 2.0 * (2.0 * x).cos()).abs() < 1e-10);
        }
    }

    #[test]
    fn barycentric_weights_survive_large_node_counts() {
        let (nodes, _) = gauss_legendre(512);
        let values: Vec<f64> = nodes.iter().map(|&x| 1.0 + 0.1 * x * x).collect();
        let interp = BarycentricInterpolant::new(nodes, values);
        let v = interp.eval(0.123456);
        assert!((v - (1.0 + 0.1 * 0.123456f64.powi(2))).abs() < 1e-10);
    }
}
