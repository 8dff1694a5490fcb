//! Tensor-product mesh for the compactified exterior problem.
//!
//! The exterior of the domain is parametrized by (t, angle) with
//! t = (rho(angle)/r)^beta in (0, 1], beta = (N-p)/(p-1), so that t = 0 is
//! infinity and t = 1 the domain boundary, and the radial ball potential
//! becomes u = t exactly. Cells are bilinear in (t, angle) with a 2x2 Gauss
//! rule; all profile-dependent factors are precomputed per angular Gauss
//! point and all t-dependent factors per radial Gauss point, so a full
//! quadrature point only combines the two.

use crate::geometry::profile::ProfileEval;
use crate::geometry::StarDomain;
use crate::{Error, Result};
use std::f64::consts::PI;

const GAUSS_OFFSET: f64 = 0.288_675_134_594_812_9; // 1/(2 sqrt(3))

/// Angular Gauss point data shared by every radial cell of one angular cell.
pub(super) struct AngularGauss {
    /// Local angular coordinate in [0, 1].
    pub eta: f64,
    /// rho'/rho at the Gauss angle.
    pub tau: f64,
    /// (dtheta/2) a(theta) rho^(N-p) / beta: angular half of the exact
    /// kernel weight; the radial half is dt/2.
    pub c0: f64,
    /// ln((dtheta/2) a(theta) rho^N / beta): angular half of ln omega.
    pub ln_w: f64,
    /// 2 ln rho(theta): subtracted from the radial half of ln m^2.
    pub ln_rho2: f64,
}

pub(super) struct AngularCell {
    pub left: usize,
    pub right: usize,
    /// 1/dtheta between the two columns; 0 for polar caps, whose u has no
    /// angular variation.
    pub inv_dtheta: f64,
    pub gauss: [AngularGauss; 2],
}

/// Radial Gauss point data shared by every angular cell of one radial row.
pub(super) struct RadialGauss {
    pub t: f64,
    /// Local radial coordinate in [0, 1].
    pub xi: f64,
    /// ln(dt/2) - (N/beta + 1) ln t: radial half of ln omega.
    pub ln_w: f64,
    /// 2 (beta+1)/beta ln t: radial half of ln m^2.
    pub ln_m2: f64,
}

pub(super) struct Mesh {
    pub n: usize,
    pub m: usize,
    pub beta: f64,
    pub dt: f64,
    pub acells: Vec<AngularCell>,
    pub rgauss: Vec<[RadialGauss; 2]>,
    /// Free-dof indices of the 4 corners of every cell, radial-major:
    /// cell (i, a) at index i * acells.len() + a, corners ordered
    /// (i,left), (i,right), (i+1,left), (i+1,right); usize::MAX marks a
    /// Dirichlet node (u = 0 at row 0, u = 1 at row n).
    pub cell_dofs: Vec<[usize; 4]>,
}

pub(super) const FIXED: usize = usize::MAX;

impl Mesh {
    pub fn build(domain: &StarDomain, n: usize) -> Result<Self> {
        if n < 16 {
            return Err(Error::InvalidConfig(format!(
                "n_radial = {n} is below the minimum of 16"
            )));
        }
        let params = domain.params();
        let dim = params.dim();
        let p = params.p();
        let beta = params.decay_exponent();
        let grid = domain.grid();
        let m = grid.len();
        let profile = ProfileEval::new(domain);

        let mut acells = Vec::new();
        let mut push_cell = |left: usize, right: usize, lo: f64, hi: f64, is_cap: bool| {
            let dtheta = hi - lo;
            let gauss = [0.5 - GAUSS_OFFSET, 0.5 + GAUSS_OFFSET].map(|eta| {
                let angle = lo + eta * dtheta;
                let rho = profile.rho(angle);
                let tau = profile.rho_prime(angle) / rho;
                let a = if dim == 2 { 1.0 } else { 2.0 * PI * angle.sin() };
                let base = dtheta / 2.0 * a / beta;
                AngularGauss {
                    eta,
                    tau,
                    c0: base * rho.powf(dim as f64 - p),
                    ln_w: base.ln() + dim as f64 * rho.ln(),
                    ln_rho2: 2.0 * rho.ln(),
                }
            });
            acells.push(AngularCell {
                left,
                right,
                inv_dtheta: if is_cap { 0.0 } else { 1.0 / dtheta },
                gauss,
            });
        };
        let nodes = grid.nodes();
        if dim == 2 {
            let dtheta = 2.0 * PI / m as f64;
            for j in 0..m {
                push_cell(j, (j + 1) % m, nodes[j], nodes[j] + dtheta, false);
            }
        } else {
            push_cell(0, 0, 0.0, nodes[0], true);
            for j in 0..m - 1 {
                push_cell(j, j + 1, nodes[j], nodes[j + 1], false);
            }
            push_cell(m - 1, m - 1, nodes[m - 1], PI, true);
        }

        let dt = 1.0 / n as f64;
        let radial_exp = dim as f64 / beta + 1.0;
        let m2_exp = 2.0 * (beta + 1.0) / beta;
        let rgauss: Vec<[RadialGauss; 2]> = (0..n)
            .map(|i| {
                [0.5 - GAUSS_OFFSET, 0.5 + GAUSS_OFFSET].map(|xi| {
                    let t = (i as f64 + xi) * dt;
                    RadialGauss {
                        t,
                        xi,
                        ln_w: (dt / 2.0).ln() - radial_exp * t.ln(),
                        ln_m2: m2_exp * t.ln(),
                    }
                })
            })
            .collect();

        let dof = |i: usize, j: usize| -> usize {
            if i == 0 || i == n {
                FIXED
            } else {
                (i - 1) * m + j
            }
        };
        let mut cell_dofs = Vec::with_capacity(n * acells.len());
        for i in 0..n {
            for ac in &acells {
                cell_dofs.push([
                    dof(i, ac.left),
                    dof(i, ac.right),
                    dof(i + 1, ac.left),
                    dof(i + 1, ac.right),
                ]);
            }
        }

        Ok(Self {
            n,
            m,
            beta,
            dt,
            acells,
            rgauss,
            cell_dofs,
        })
    }

    pub fn num_dofs(&self) -> usize {
        (self.n - 1) * self.m
    }

    /// Ball potential u = t sampled at the free nodes.
    pub fn linear_init(&self) -> Vec<f64> {
        let mut x = vec![0.0; self.num_dofs()];
        for i in 1..self.n {
            let t = i as f64 * self.dt;
            for j in 0..self.m {
                x[(i - 1) * self.m + j] = t;
            }
        }
        x
    }

    /// Boundary value of a corner slot: row 0 is 0, row n is 1.
    #[inline]
    pub fn corner_value(&self, x: &[f64], dof: usize, top: bool) -> f64 {
        if dof == FIXED {
            if top {
                1.0
            } else {
                0.0
            }
        } else {
            x[dof]
        }
    }
}

/// Resamples a domain profile onto a grid with `new_m` angular nodes.
pub(super) fn resample(domain: &StarDomain, new_m: usize) -> Result<StarDomain> {
    let profile = ProfileEval::new(domain);
    let grid = crate::geometry::AngularGrid::new(domain.params().dim(), new_m)?;
    let rho: Vec<f64> = grid.nodes().iter().map(|&a| profile.rho(a)).collect();
    StarDomain::from_samples(domain.params().clone(), grid, rho)
}

/// Linearly interpolates a coarse solution onto a finer mesh as a warm start.
pub(super) fn prolong(
    coarse: &Mesh,
    coarse_angles: &[f64],
    x: &[f64],
    fine: &Mesh,
    fine_angles: &[f64],
) -> Vec<f64> {
    // Coarse nodal value at (row i, column j) including boundary rows.
    let val = |i: usize, j: usize| -> f64 {
        if i == 0 {
            0.0
        } else if i == coarse.n {
            1.0
        } else {
            x[(i - 1) * coarse.m + j]
        }
    };
    // Angular interpolation weights for every fine column.
    let brackets: Vec<(usize, usize, f64)> = fine_angles
        .iter()
        .map(|&a| {
            if a <= coarse_angles[0] {
                return (0, 0, 0.0);
            }
            match coarse_angles.iter().position(|&c| c >= a) {
                Some(jr) => {
                    let jl = jr - 1;
                    let w = (a - coarse_angles[jl]) / (coarse_angles[jr] - coarse_angles[jl]);
                    (jl, jr, w)
                }
                None => {
                    // Beyond the last column: wrap for periodic grids, clamp
                    // for polar ones.
                    if coarse.acells[coarse.m - 1].right == 0 {
                        let jl = coarse.m - 1;
                        let span = 2.0 * PI - coarse_angles[jl] + coarse_angles[0];
                        (jl, 0, (a - coarse_angles[jl]) / span)
                    } else {
                        (coarse.m - 1, coarse.m - 1, 0.0)
                    }
                }
            }
        })
        .collect();
    let mut out = vec![0.0; fine.num_dofs()];
    for i in 1..fine.n {
        let t = i as f64 / fine.n as f64;
        let tc = t * coarse.n as f64;
        let ic = (tc.floor() as usize).min(coarse.n - 1);
        let wt = tc - ic as f64;
        for (jf, &(jl, jr, wa)) in brackets.iter().enumerate() {
            let lo = (1.0 - wa) * val(ic, jl) + wa * val(ic, jr);
            let hi = (1.0 - wa) * val(ic + 1, jl) + wa * val(ic + 1, jr);
            out[(i - 1) * fine.m + jf] = (1.0 - wt) * lo + wt * hi;
        }
    }
    out
}
