//! Derivative-free minimizers for the asymmetry center searches.

/// Golden-section minimization of a unimodal function on [a, b].
///
/// Stops when both the bracket and the observed objective spread fall below
/// `tol`; returns (argmin, min).
pub fn golden_section_min<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..200 {
        if (b - a).abs() < tol && (fc - fd).abs() < tol {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Nelder-Mead on the plane, started from `x0` with initial step `scale`.
///
/// Terminates when the simplex objective spread drops below `tol`; returns
/// (argmin, min). Sufficient for the smooth low-dimensional center searches
/// used here; not a general-purpose optimizer.
pub fn nelder_mead_2d<F: Fn([f64; 2]) -> f64>(
    f: F,
    x0: [f64; 2],
    scale: f64,
    tol: f64,
) -> ([f64; 2], f64) {
    let mut pts = [
        x0,
        [x0[0] + scale, x0[1]],
        [x0[0] + 0.31 * scale, x0[1] + scale],
    ];
    let mut vals = [f(pts[0]), f(pts[1]), f(pts[2])];

    for _ in 0..500 {
        // Order best -> worst.
        let mut order = [0usize, 1, 2];
        order.sort_by(|&i, &j| vals[i].partial_cmp(&vals[j]).unwrap());
        let (b, m, w) = (order[0], order[1], order[2]);
        if (vals[w] - vals[b]).abs() < tol {
            break;
        }
        let centroid = [
            0.5 * (pts[b][0] + pts[m][0]),
            0.5 * (pts[b][1] + pts[m][1]),
        ];
        let reflect = [
            centroid[0] + (centroid[0] - pts[w][0]),
            centroid[1] + (centroid[1] - pts[w][1]),
        ];
        let fr = f(reflect);
        if fr < vals[b] {
            let expand = [
                centroid[0] + 2.0 * (centroid[0] - pts[w][0]),
                centroid[1] + 2.0 * (centroid[1] - pts[w][1]),
            ];
            let fe = f(expand);
            if fe < fr {
                pts[w] = expand;
                vals[w] = fe;
            } else {
                pts[w] = reflect;
                vals[w] = fr;
            }
        } else if fr < vals[m] {
            pts[w] = reflect;
            vals[w] = fr;
        } else {
            let contract = [
                centroid[0] + 0.5 * (pts[w][0] - centroid[0]),
                centroid[1] + 0.5 * (pts[w][1] - centroid[1]),
            ];
            let fc = f(contract);
            if fc < vals[w] {
                pts[w] = contract;
                vals[w] = fc;
            } else {
                // Shrink towards the best vertex.
                for i in 0..3 {
                    if i == b {
                        continue;
                    }
                    pts[i] = [
                        pts[b][0] + 0.5 * (pts[i][0] - pts[b][0]),
                        pts[b][1] + 0.5 * (pts[i][1] - pts[b][1]),
                    ];
                    vals[i] = f(pts[i]);
                }
            }
        }
    }
    let mut best = 0;
    for i in 1..3 {
        if vals[i] < vals[best] {
            best = i;
        }
    }
    (pts[best], vals[best])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_section_finds_parabola_minimum() {
        let (x, v) = golden_section_min(|x| (x - 0.7).powi(2) + 3.0, -2.0, 2.0, 1e-10);
        assert!((x - 0.7).abs() < 1e-5);
        assert!((v - 3.0).abs() < 1e-9);
    }

    #[test]
    fn nelder_mead_finds_quadratic_minimum() {
        let f = |x: [f64; 2]| (x[0] - 1.2).powi(2) + 2.0 * (x[1] + 0.4).powi(2) + 5.0;
        let (x, v) = nelder_mead_2d(f, [0.0, 0.0], 0.5, 1e-12);
        assert!((x[0] - 1.2).abs() < 1e-5);
        assert!((x[1] + 0.4).abs() < 1e-5);
        assert!((v - 5.0).abs() < 1e-9);
    }

    #[test]
    fn nelder_mead_handles_rosenbrock_valley() {
        let f = |x: [f64; 2]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let (x, _) = nelder_mead_2d(f, [-0.5, 0.5], 0.4, 1e-14);
        assert!((x[0] - 1.0).abs() < 2e-3);
        assert!((x[1] - 1.0).abs() < 4e-3);
    }
}
