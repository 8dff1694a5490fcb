//! Gauss-Legendre quadrature on [-1, 1].

/// Legendre polynomial P_k(x) by the three-term recurrence.
pub fn legendre_p(k: usize, x: f64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let mut p_prev = 1.0;
    let mut p = x;
    for j in 1..k {
        let jf = j as f64;
        let p_next = ((2.0 * jf + 1.0) * x * p - jf * p_prev) / (jf + 1.0);
        p_prev = p;
        p = p_next;
    }
    p
}

/// Derivative P_k'(x), from (1 - x^2) P_k' = k (P_{k-1} - x P_k).
pub fn legendre_p_deriv(k: usize, x: f64) -> f64 {
    if k == 0 {
        return 0.0;
    }
    let denom = 1.0 - x * x;
    if denom.abs() < 1e-12 {
        // Endpoint limit: P_k'(+-1) = (+-1)^{k-1} k (k+1) / 2.
        let sign = if x > 0.0 || k % 2 == 1 { 1.0 } else { -1.0 };
        return sign * (k * (k + 1)) as f64 / 2.0;
    }
    (k as f64) * (legendre_p(k - 1, x) - x * legendre_p(k, x)) / denom
}

/// Nodes (ascending) and weights of the m-point Gauss-Legendre rule on [-1, 1].
///
/// Nodes are roots of P_m found by Newton iteration from the Chebyshev-like
/// initial guess; weights are 2 / ((1 - x^2) P_m'(x)^2).
pub fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(m >= 1, "rule needs at least one node");
    let mut nodes = vec![0.0; m];
    let mut weights = vec![0.0; m];
    let half = m.div_ceil(2);
    for i in 0..half {
        // i-th root counted from x = 1 downwards.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        for _ in 0..100 {
            let f = legendre_p(m, x);
            let df = legendre_p_deriv(m, x);
            let dx = f / df;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let df = legendre_p_deriv(m, x);
        let w = 2.0 / ((1.0 - x * x) * df * df);
        nodes[m - 1 - i] = x;
        weights[m - 1 - i] = w;
        nodes[i] = -x;
        weights[i] = w;
    }
    if m % 2 == 1 {
        nodes[m / 2] = 0.0;
        let df = legendre_p_deriv(m, 0.0);
        weights[m / 2] = 2.0 / (df * df);
    }
    (nodes, weights)
}
