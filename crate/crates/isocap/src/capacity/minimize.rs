//! Discrete energy kernels and the damped-Newton minimizer.
//!
//! Both kernels act on q = |g|^2 with g = (beta u_t, u_theta/t + beta tau u_t),
//! the scaled gradient in compactified coordinates. The exact kernel
//! integrates c0 q^(p/2); the perturbed kernel integrates
//! omega ((kappa^2 + q m^2)^(p/2) - kappa^p), where omega and m^2 carry
//! t-powers that overflow f64 for p near N, so it works entirely from
//! ln omega and ln m^2 with expm1/ln_1p forms that survive both the
//! overflow and the cancellation near t = 0.

use super::mesh::{Mesh, FIXED};
use crate::{Error, Result};

#[derive(Clone, Copy)]
pub(super) enum Kernel {
    Exact { p: f64, q_floor: f64 },
    Perturbed { p: f64, ln_kappa: f64 },
}

impl Kernel {
    pub fn new(p: f64, beta: f64, kappa: f64) -> Self {
        if kappa == 0.0 {
            Kernel::Exact {
                p,
                q_floor: 1e-12 * beta * beta,
            }
        } else {
            Kernel::Perturbed {
                p,
                ln_kappa: kappa.ln(),
            }
        }
    }

    #[inline]
    fn energy(&self, q: f64, c0: f64, ln_w: f64, ln_m2: f64) -> f64 {
        match *self {
            Kernel::Exact { p, .. } => c0 * q.powf(0.5 * p),
            Kernel::Perturbed { p, ln_kappa, .. } => {
                if q == 0.0 {
                    return 0.0;
                }
                let l1pz = ln1p_from_ln(q.ln() + ln_m2 - 2.0 * ln_kappa);
                (ln_w + p * ln_kappa + ln_expm1(0.5 * p * l1pz)).exp()
            }
        }
    }

    /// d(energy term)/dq; the gradient itself multiplies this by 2 g . dg,
    /// which vanishes with q, so q = 0 is sent to 0 for the exact kernel
    /// even though the coefficient alone diverges for p < 2.
    #[inline]
    fn grad_coeff(&self, q: f64, c0: f64, ln_w: f64, ln_m2: f64) -> f64 {
        match *self {
            Kernel::Exact { p, .. } => {
                if q == 0.0 {
                    0.0
                } else {
                    c0 * 0.5 * p * q.powf(0.5 * p - 1.0)
                }
            }
            Kernel::Perturbed { p, ln_kappa, .. } => {
                let l1pz = if q == 0.0 {
                    0.0
                } else {
                    ln1p_from_ln(q.ln() + ln_m2 - 2.0 * ln_kappa)
                };
                0.5 * p
                    * (ln_w + ln_m2 + (p - 2.0) * ln_kappa + (0.5 * p - 1.0) * l1pz).exp()
            }
        }
    }

    /// (2 dT/dq, 4 d2T/dq2) with the exact kernel's q floored away from the
    /// p < 2 singularity; the perturbed kernel needs no floor.
    #[inline]
    fn hess_coeffs(&self, q: f64, c0: f64, ln_w: f64, ln_m2: f64) -> (f64, f64) {
        match *self {
            Kernel::Exact { p, q_floor } => {
                let qh = q.max(q_floor);
                let f1 = c0 * p * qh.powf(0.5 * p - 1.0);
                (f1, f1 * (p - 2.0) / qh)
            }
            Kernel::Perturbed { p, ln_kappa, .. } => {
                let l1pz = if q == 0.0 {
                    0.0
                } else {
                    ln1p_from_ln(q.ln() + ln_m2 - 2.0 * ln_kappa)
                };
                let f1 = p
                    * (ln_w + ln_m2 + (p - 2.0) * ln_kappa + (0.5 * p - 1.0) * l1pz).exp();
                let f2 = f1 * (p - 2.0) * (ln_m2 - 2.0 * ln_kappa - l1pz).exp();
                (f1, f2)
            }
        }
    }
}

/// ln(1 + exp(ln_z)) without forming exp(ln_z) when it would overflow.
#[inline]
fn ln1p_from_ln(ln_z: f64) -> f64 {
    if ln_z > 35.0 {
        ln_z
    } else {
        ln_z.exp().ln_1p()
    }
}

/// ln(expm1(x)) for x >= 0 without overflowing expm1.
#[inline]
fn ln_expm1(x: f64) -> f64 {
    if x > 35.0 {
        x
    } else {
        x.exp_m1().ln()
    }
}

struct GaussGeom {
    g1: f64,
    g2: f64,
    q: f64,
    c0: f64,
    ln_w: f64,
    ln_m2: f64,
    dg1: [f64; 4],
    dg2: [f64; 4],
}

/// Walks every Gauss point of every cell; `emit` decides what to accumulate.
/// Derivative patterns are skipped when `with_derivs` is false (energy-only
/// passes during line searches).
fn for_each_gauss(mesh: &Mesh, x: &[f64], with_derivs: bool, mut emit: impl FnMut(usize, GaussGeom)) {
    let inv_dt = 1.0 / mesh.dt;
    let half_dt = 0.5 * mesh.dt;
    let beta = mesh.beta;
    let na = mesh.acells.len();
    for i in 0..mesh.n {
        let rg = &mesh.rgauss[i];
        for (a, ac) in mesh.acells.iter().enumerate() {
            let cell = i * na + a;
            let dofs = &mesh.cell_dofs[cell];
            let u = [
                mesh.corner_value(x, dofs[0], false),
                mesh.corner_value(x, dofs[1], false),
                mesh.corner_value(x, dofs[2], true),
                mesh.corner_value(x, dofs[3], true),
            ];
            for r in rg {
                let uth = ((1.0 - r.xi) * (u[1] - u[0]) + r.xi * (u[3] - u[2])) * ac.inv_dtheta;
                for ag in &ac.gauss {
                    let ut = ((1.0 - ag.eta) * (u[2] - u[0]) + ag.eta * (u[3] - u[1])) * inv_dt;
                    let g1 = beta * ut;
                    let g2 = uth / r.t + beta * ag.tau * ut;
                    let q = g1 * g1 + g2 * g2;
                    let mut geom = GaussGeom {
                        g1,
                        g2,
                        q,
                        c0: ag.c0 * half_dt,
                        ln_w: ag.ln_w + r.ln_w,
                        ln_m2: r.ln_m2 - ag.ln_rho2,
                        dg1: [0.0; 4],
                        dg2: [0.0; 4],
                    };
                    if with_derivs {
                        let du_t = [
                            -(1.0 - ag.eta) * inv_dt,
                            -ag.eta * inv_dt,
                            (1.0 - ag.eta) * inv_dt,
                            ag.eta * inv_dt,
                        ];
                        let iv = ac.inv_dtheta / r.t;
                        let du_th = [
                            -(1.0 - r.xi) * iv,
                            (1.0 - r.xi) * iv,
                            -r.xi * iv,
                            r.xi * iv,
                        ];
                        for s in 0..4 {
                            geom.dg1[s] = beta * du_t[s];
                            geom.dg2[s] = du_th[s] + beta * ag.tau * du_t[s];
                        }
                    }
                    emit(cell, geom);
                }
            }
        }
    }
}

pub(super) fn energy(mesh: &Mesh, kernel: &Kernel, x: &[f64]) -> f64 {
    let mut e = 0.0;
    for_each_gauss(mesh, x, false, |_, g| {
        e += kernel.energy(g.q, g.c0, g.ln_w, g.ln_m2);
    });
    e
}

pub(super) fn energy_grad(mesh: &Mesh, kernel: &Kernel, x: &[f64], grad: &mut [f64]) -> f64 {
    grad.fill(0.0);
    let mut e = 0.0;
    let cell_dofs = &mesh.cell_dofs;
    for_each_gauss(mesh, x, true, |cell, g| {
        e += kernel.energy(g.q, g.c0, g.ln_w, g.ln_m2);
        let gc = kernel.grad_coeff(g.q, g.c0, g.ln_w, g.ln_m2);
        if gc == 0.0 {
            return;
        }
        for s in 0..4 {
            let dof = cell_dofs[cell][s];
            if dof != FIXED {
                grad[dof] += gc * 2.0 * (g.g1 * g.dg1[s] + g.g2 * g.dg2[s]);
            }
        }
    });
    e
}

/// Symmetric 4x4 cell Hessians in packed lower-triangular order plus the
/// assembled Jacobi diagonal. Duplicate corner dofs (polar caps) fold their
/// cross terms into the diagonal so the preconditioner stays exact.
pub(super) fn hessian(mesh: &Mesh, kernel: &Kernel, x: &[f64]) -> (Vec<[f64; 10]>, Vec<f64>) {
    let mut cells = vec![[0.0; 10]; mesh.cell_dofs.len()];
    let mut diag = vec![0.0; mesh.num_dofs()];
    for_each_gauss(mesh, x, true, |cell, g| {
        let (f1, f2) = kernel.hess_coeffs(g.q, g.c0, g.ln_w, g.ln_m2);
        let e = [
            g.g1 * g.dg1[0] + g.g2 * g.dg2[0],
            g.g1 * g.dg1[1] + g.g2 * g.dg2[1],
            g.g1 * g.dg1[2] + g.g2 * g.dg2[2],
            g.g1 * g.dg1[3] + g.g2 * g.dg2[3],
        ];
        let mat = &mut cells[cell];
        let mut idx = 0;
        for a in 0..4 {
            for b in 0..=a {
                mat[idx] +=
                    f1 * (g.dg1[a] * g.dg1[b] + g.dg2[a] * g.dg2[b]) + f2 * e[a] * e[b];
                idx += 1;
            }
        }
    });
    for (mat, dofs) in cells.iter().zip(&mesh.cell_dofs) {
        for a in 0..4 {
            if dofs[a] == FIXED {
                continue;
            }
            for b in 0..4 {
                if dofs[b] == dofs[a] {
                    diag[dofs[a]] += mat[packed(a, b)];
                }
            }
        }
    }
    (cells, diag)
}

#[inline]
fn packed(a: usize, b: usize) -> usize {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi * (hi + 1) / 2 + lo
}

fn matvec(mesh: &Mesh, cells: &[[f64; 10]], v: &[f64], out: &mut [f64]) {
    out.fill(0.0);
    for (mat, dofs) in cells.iter().zip(&mesh.cell_dofs) {
        let lv = [
            if dofs[0] == FIXED { 0.0 } else { v[dofs[0]] },
            if dofs[1] == FIXED { 0.0 } else { v[dofs[1]] },
            if dofs[2] == FIXED { 0.0 } else { v[dofs[2]] },
            if dofs[3] == FIXED { 0.0 } else { v[dofs[3]] },
        ];
        let w = [
            mat[0] * lv[0] + mat[1] * lv[1] + mat[3] * lv[2] + mat[6] * lv[3],
            mat[1] * lv[0] + mat[2] * lv[1] + mat[4] * lv[2] + mat[7] * lv[3],
            mat[3] * lv[0] + mat[4] * lv[1] + mat[5] * lv[2] + mat[8] * lv[3],
            mat[6] * lv[0] + mat[7] * lv[1] + mat[8] * lv[2] + mat[9] * lv[3],
        ];
        for s in 0..4 {
            if dofs[s] != FIXED {
                out[dofs[s]] += w[s];
            }
        }
    }
}

#[cfg(test)]
pub(super) fn matvec_for_tests(mesh: &Mesh, cells: &[[f64; 10]], v: &[f64], out: &mut [f64]) {
    matvec(mesh, cells, v, out);
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Jacobi-preconditioned CG for H d = b; returns after the relative residual
/// drops below `tol` or the iteration cap. Any truncated iterate from the
/// zero start is still a descent direction for the outer Newton step.
fn cg(mesh: &Mesh, cells: &[[f64; 10]], diag: &[f64], b: &[f64], tol: f64, cap: usize) -> Vec<f64> {
    let nd = b.len();
    let mut x = vec![0.0; nd];
    let mut r = b.to_vec();
    let b_norm = norm(b);
    if b_norm == 0.0 {
        return x;
    }
    let mut z: Vec<f64> = r.iter().zip(diag).map(|(ri, di)| ri / di).collect();
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let mut ap = vec![0.0; nd];
    for _ in 0..cap {
        if norm(&r) <= tol * b_norm {
            break;
        }
        matvec(mesh, cells, &p, &mut ap);
        let pap = dot(&p, &ap);
        if pap <= 0.0 {
            break;
        }
        let alpha = rz / pap;
        for i in 0..nd {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        for i in 0..nd {
            z[i] = r[i] / diag[i];
        }
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..nd {
            p[i] = z[i] + beta * p[i];
        }
    }
    x
}

pub(super) struct MinimizeOutcome {
    pub x: Vec<f64>,
    pub iterations: usize,
    pub residual: f64,
    pub energy: f64,
}

const ARMIJO_C1: f64 = 1e-4;

/// Damped Newton with Armijo backtracking on the convex discrete energy;
/// falls back to preconditioned nonlinear CG if a Hessian step stalls.
pub(super) fn minimize(
    mesh: &Mesh,
    kernel: &Kernel,
    mut x: Vec<f64>,
    grad_tol: f64,
    max_iters: usize,
) -> Result<MinimizeOutcome> {
    let nd = mesh.num_dofs();
    let cg_cap = 400 + 8 * (nd as f64).sqrt() as usize;
    let mut grad = vec![0.0; nd];
    let mut e = energy_grad(mesh, kernel, &x, &mut grad);
    let mut gn = norm(&grad);
    let g0 = gn.max(f64::MIN_POSITIVE);
    let mut iterations = 0;
    let mut trial = vec![0.0; nd];
    while gn > grad_tol * (1.0 + e.abs()) {
        if iterations >= max_iters {
            return nlcg(mesh, kernel, x, e, grad, grad_tol, max_iters, iterations);
        }
        let (cells, diag) = hessian(mesh, kernel, &x);
        let eta = (gn / g0).sqrt().clamp(1e-12, 0.1);
        let rhs: Vec<f64> = grad.iter().map(|g| -g).collect();
        let mut dir = cg(mesh, &cells, &diag, &rhs, eta, cg_cap);
        let mut gd = dot(&grad, &dir);
        if !(gd < 0.0) {
            // Preconditioned steepest descent as a safeguarded direction.
            dir = grad.iter().zip(&diag).map(|(g, d)| -g / d).collect();
            gd = dot(&grad, &dir);
        }
        // Near the minimum the predicted decrease drops below the round-off
        // noise of the energy sum; the slack keeps full Newton steps
        // acceptable there instead of stalling the line search.
        let eps_e = 1e-14 * (1.0 + e.abs());
        let mut alpha = 1.0;
        let mut accepted = false;
        while alpha >= 1e-12 {
            for i in 0..nd {
                trial[i] = x[i] + alpha * dir[i];
            }
            let et = energy(mesh, kernel, &trial);
            if et <= e + ARMIJO_C1 * alpha * gd + eps_e {
                std::mem::swap(&mut x, &mut trial);
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if !accepted {
            return nlcg(mesh, kernel, x, e, grad, grad_tol, max_iters, iterations);
        }
        let e_prev = e;
        e = energy_grad(mesh, kernel, &x, &mut grad);
        if e > e_prev + 1e-12 * (1.0 + e_prev.abs()) {
            return Err(Error::Solver(format!(
                "energy increased from {e_prev} to {e} despite the line search"
            )));
        }
        gn = norm(&grad);
        iterations += 1;
    }
    Ok(MinimizeOutcome {
        x,
        iterations,
        residual: gn,
        energy: e,
    })
}

/// Polak-Ribiere nonlinear CG fallback with Jacobi preconditioning frozen at
/// entry. Only reached when the Newton path stalls.
#[allow(clippy::too_many_arguments)]
fn nlcg(
    mesh: &Mesh,
    kernel: &Kernel,
    mut x: Vec<f64>,
    mut e: f64,
    mut grad: Vec<f64>,
    grad_tol: f64,
    budget: usize,
    newton_iters: usize,
) -> Result<MinimizeOutcome> {
    let nd = mesh.num_dofs();
    let (_, diag) = hessian(mesh, kernel, &x);
    let prec = |g: &[f64]| -> Vec<f64> { g.iter().zip(&diag).map(|(gi, di)| gi / di).collect() };
    let mut z = prec(&grad);
    let mut dir: Vec<f64> = z.iter().map(|v| -v).collect();
    let mut gz = dot(&grad, &z);
    let mut alpha_seed = 1.0;
    let mut trial = vec![0.0; nd];
    let mut iterations = newton_iters;
    for _ in 0..4 * budget {
        let gn = norm(&grad);
        if gn <= grad_tol * (1.0 + e.abs()) {
            return Ok(MinimizeOutcome {
                x,
                iterations,
                residual: gn,
                energy: e,
            });
        }
        let mut gd = dot(&grad, &dir);
        if !(gd < 0.0) {
            dir = z.iter().map(|v| -v).collect();
            gd = dot(&grad, &dir);
        }
        let eps_e = 1e-14 * (1.0 + e.abs());
        let mut alpha = alpha_seed;
        let mut accepted = false;
        while alpha >= 1e-14 {
            for i in 0..nd {
                trial[i] = x[i] + alpha * dir[i];
            }
            let et = energy(mesh, kernel, &trial);
            if et <= e + ARMIJO_C1 * alpha * gd + eps_e {
                std::mem::swap(&mut x, &mut trial);
                e = et;
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if !accepted {
            break;
        }
        alpha_seed = (2.0 * alpha).min(1.0);
        let g_old_z = gz;
        let mut g_new = vec![0.0; nd];
        e = energy_grad(mesh, kernel, &x, &mut g_new);
        let z_new = prec(&g_new);
        let mut pr = 0.0;
        for i in 0..nd {
            pr += g_new[i] * (z_new[i] - z[i]);
        }
        let beta = (pr / g_old_z).max(0.0);
        for i in 0..nd {
            dir[i] = -z_new[i] + beta * dir[i];
        }
        grad = g_new;
        z = z_new;
        gz = dot(&grad, &z);
        iterations += 1;
    }
    let gn = norm(&grad);
    if gn <= grad_tol * (1.0 + e.abs()) {
        Ok(MinimizeOutcome {
            x,
            iterations,
            residual: gn,
            energy: e,
        })
    } else {
        Err(Error::Solver(format!(
            "no convergence within the iteration budget: gradient norm {gn:.3e} \
             against tolerance {:.3e}",
            grad_tol * (1.0 + e.abs())
        )))
    }
}
