//! Discrete operator application and the fractional Poisson solver
//! `A u = f − b` with `A` applied through FFT matvecs.

use std::time::Instant;

use crate::boundary::{self, BoundaryVector};
use crate::error::{Error, Result};
use crate::fastop::{BTTBOperator, StencilCoefficients, StructuredOperator, ToeplitzOperator, Workspace};
use crate::kernel::{FieldFn, Grid, KernelSpec};
use crate::par::Execution;
use crate::stencil::{coeffs_1d, coeffs_2d, FARFIELD_TOL_2D};
use crate::weights::WeightCache;

/// Absolute tolerance of 2D weight quadrature.
pub const WEIGHT_TOL_2D: f64 = 1e-13;

/// Default relative CG tolerance.
pub const DEFAULT_CG_TOL: f64 = 1e-12;

/// Consecutive restarts without a 10% drop in the true residual before CG gives up.
pub const STALL_RESTARTS: usize = 5;

/// Coefficients and structured operator of the scheme on one grid.
#[derive(Debug, Clone)]
pub struct Discretization {
    pub spec: KernelSpec,
    pub grid: Grid,
    pub p: usize,
    pub coeffs: StencilCoefficients,
    pub op: StructuredOperator,
}

impl Discretization {
    pub fn new(spec: &KernelSpec, grid: &Grid, p: usize) -> Result<Self> {
        if spec.d != grid.dim() {
            return Err(Error::Mismatch(format!(
                "kernel dimension {} vs grid dimension {}",
                spec.d,
                grid.dim()
            )));
        }
        let n = grid.n_weights();
        let scale = -spec.c;
        let (coeffs, op) = match spec.d {
            1 => {
                let w = WeightCache::global().table_1d(spec, p, n, grid.h, 1e-15)?;
                let c = coeffs_1d(&w, spec, grid)?;
                let op = StructuredOperator::Toeplitz(ToeplitzOperator::from_coeffs(&c, grid, scale)?);
                (StencilCoefficients::OneD(c), op)
            }
            _ => {
                let w = WeightCache::global().table_2d(spec, p, n, grid.h, WEIGHT_TOL_2D)?;
                let c = coeffs_2d(&w, spec, grid, FARFIELD_TOL_2D)?;
                let op = StructuredOperator::Bttb(BTTBOperator::from_coeffs(&c, grid, scale)?);
                (StencilCoefficients::TwoD(c), op)
            }
        };
        Ok(Discretization { spec: *spec, grid: grid.clone(), p, coeffs, op })
    }

    pub fn boundary(&self, g: &FieldFn, tol: f64, exec: Execution) -> Result<BoundaryVector> {
        match &self.coeffs {
            StencilCoefficients::OneD(c) => boundary::boundary_vector_1d_with(g, c, &self.grid, &self.spec, tol, exec),
            StencilCoefficients::TwoD(c) => boundary::boundary_vector_2d_with(g, c, &self.grid, &self.spec, tol, exec),
        }
    }

    /// `u` sampled at the interior nodes.
    pub fn sample(&self, u: &FieldFn) -> Vec<f64> {
        self.grid.interior_points().iter().map(|x| u.eval(x)).collect()
    }
}

/// Nodal values of the discrete operator applied to `u` (interior) extended
/// by `g` (exterior).
///
/// In 1D the stencil is summed directly in second-difference form,
/// `Σ_k a_k (u_{i+k} − 2u_i + u_{i−k}) − 2 m u_i` with `m` the far-field
/// measure, which keeps roundoff at the level of the differences rather than
/// of `a₀ u_i`. In 2D the FFT product and the boundary vector are added.
pub fn apply_operator(spec: &KernelSpec, grid: &Grid, p: usize, u: &FieldFn, g: &FieldFn, tol: f64) -> Result<Vec<f64>> {
    let disc = Discretization::new(spec, grid, p)?;
    match &disc.coeffs {
        StencilCoefficients::OneD(c) => {
            let n = c.n() as i64;
            let n1 = grid.n[0] as i64;
            let lo = 1 - n;
            let vals: Vec<f64> = (lo..n1 + n)
                .map(|j| {
                    let x = grid.coord(0, j);
                    if j >= 1 && j < n1 {
                        u.eval1(x)
                    } else {
                        g.eval1(x)
                    }
                })
                .collect();
            let at = |j: i64| vals[(j - lo) as usize];
            let lambda = spec.family.lambda();
            (1..n1)
                .map(|i| {
                    let ui = at(i);
                    let mut s = 0.0;
                    for k in (1..=n).rev() {
                        s += c.a[k as usize] * ((at(i + k) - ui) + (at(i - k) - ui));
                    }
                    let tail = boundary::tail_integral_1d(g, grid.coord(0, i), grid.l, spec.alpha, lambda, tol)?;
                    Ok(-spec.c * (s - 2.0 * c.farfield_measure * ui + tail))
                })
                .collect()
        }
        StencilCoefficients::TwoD(_) => {
            let x = disc.sample(u);
            let mut y = disc.op.matvec(&x)?;
            let b = disc.boundary(g, tol, Execution::available())?;
            for (yi, bi) in y.iter_mut().zip(&b.values) {
                *yi += bi;
            }
            Ok(y)
        }
    }
}

/// `(−Δ)^{α/2} u = f` on `Ω`, `u = g` on `Ω^c`.
#[derive(Debug, Clone)]
pub struct PoissonProblem {
    pub spec: KernelSpec,
    pub grid: Grid,
    pub f: FieldFn,
    pub g: FieldFn,
    pub p: usize,
}

impl PoissonProblem {
    pub fn new(spec: KernelSpec, grid: Grid, f: FieldFn, g: FieldFn, p: usize) -> Result<Self> {
        if spec.d != grid.dim() {
            return Err(Error::Mismatch(format!(
                "kernel dimension {} vs grid dimension {}",
                spec.d,
                grid.dim()
            )));
        }
        if p > 2 {
            return crate::error::domain(format!("basis degree must be 0, 1 or 2, got {p}"));
        }
        Ok(PoissonProblem { spec, grid, f, g, p })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    ConjugateGradient,
    Minres,
}

#[derive(Debug, Clone)]
pub struct SolveReport {
    pub u_h: Vec<f64>,
    pub iterations: usize,
    /// `‖A u_h − r‖₂ / ‖r‖₂`, recomputed from scratch after convergence.
    pub final_residual: f64,
    pub indefiniteness_flag: bool,
    pub method: Method,
    pub wall_time: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct SolveOptions {
    pub cg_tol: f64,
    pub max_iter: usize,
    pub boundary_tol: f64,
    pub exec: Execution,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            cg_tol: DEFAULT_CG_TOL,
            max_iter: 20_000,
            boundary_tol: boundary::DEFAULT_TOL,
            exec: Execution::available(),
        }
    }
}

pub fn solve_poisson(problem: &PoissonProblem, cg_tol: f64, max_iter: usize) -> Result<SolveReport> {
    let opts = SolveOptions { cg_tol, max_iter, ..Default::default() };
    solve_poisson_with(problem, &opts, &mut |_, _| {})
}

/// As [`solve_poisson`]; `monitor(k, x_k)` sees every iterate.
pub fn solve_poisson_with(
    problem: &PoissonProblem,
    opts: &SolveOptions,
    monitor: &mut dyn FnMut(usize, &[f64]),
) -> Result<SolveReport> {
    let start = Instant::now();
    if !(opts.cg_tol > 0.0) {
        return crate::error::domain(format!("CG tolerance must be positive, got {}", opts.cg_tol));
    }
    let disc = Discretization::new(&problem.spec, &problem.grid, problem.p)?;
    let b = disc.boundary(&problem.g, opts.boundary_tol, opts.exec)?;
    let rhs: Vec<f64> = disc
        .sample(&problem.f)
        .iter()
        .zip(&b.values)
        .map(|(f, b)| f - b)
        .collect();
    let mut report = solve_linear(&disc.op, &rhs, opts.cg_tol, opts.max_iter, monitor)?;
    report.wall_time = start.elapsed().as_secs_f64();
    Ok(report)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn true_residual(op: &StructuredOperator, x: &[f64], rhs: &[f64], ws: &mut Workspace) -> Result<Vec<f64>> {
    op.residual(x, rhs, ws)
}

/// Conjugate gradients from `x = 0`; on nonpositive curvature the solve is
/// restarted with MINRES from the current iterate. Convergence is judged on
/// the true residual from [`StructuredOperator::residual`]; each restart from
/// it acts as a step of iterative refinement.
pub fn solve_linear(
    op: &StructuredOperator,
    rhs: &[f64],
    tol: f64,
    max_iter: usize,
    monitor: &mut dyn FnMut(usize, &[f64]),
) -> Result<SolveReport> {
    let n = op.len();
    if rhs.len() != n {
        return Err(Error::SizeMismatch { expected: n, got: rhs.len() });
    }
    let mut ws = op.workspace();
    let bnorm = norm(rhs);
    let mut x = vec![0.0; n];
    let done = |x: Vec<f64>, iterations, rel, method, flag| SolveReport {
        u_h: x,
        iterations,
        final_residual: rel,
        indefiniteness_flag: flag,
        method,
        wall_time: 0.0,
    };
    if bnorm == 0.0 {
        return Ok(done(x, 0, 0.0, Method::ConjugateGradient, false));
    }
    let target = tol * bnorm;
    let mut r = rhs.to_vec();
    let mut iterations = 0;
    let mut ap = vec![0.0; n];
    let mut best = f64::INFINITY;
    let mut stalled = 0;
    // outer loop restarts from the true residual when the recursive one drifts
    while iterations < max_iter {
        let mut p = r.clone();
        let mut rr = dot(&r, &r);
        let mut indefinite = false;
        while iterations < max_iter && rr.sqrt() > target {
            op.apply(&p, &mut ap, &mut ws)?;
            let pap = dot(&p, &ap);
            if !(pap > 0.0) {
                indefinite = true;
                break;
            }
            let step = rr / pap;
            for i in 0..n {
                x[i] += step * p[i];
                r[i] -= step * ap[i];
            }
            iterations += 1;
            monitor(iterations, &x);
            let rr_new = dot(&r, &r);
            let beta = rr_new / rr;
            rr = rr_new;
            for i in 0..n {
                p[i] = r[i] + beta * p[i];
            }
        }
        if indefinite {
            return minres(op, rhs, x, tol, max_iter, iterations, monitor, &mut ws);
        }
        r = true_residual(op, &x, rhs, &mut ws)?;
        let rel = norm(&r) / bnorm;
        if rel <= tol {
            return Ok(done(x, iterations, rel, Method::ConjugateGradient, false));
        }
        // the true residual has hit its rounding floor above `tol`
        if rel > 0.9 * best {
            stalled += 1;
            if stalled >= STALL_RESTARTS {
                return Err(Error::IterationCap { iterations, residual: rel });
            }
        } else {
            stalled = 0;
        }
        best = best.min(rel);
    }
    let rel = norm(&true_residual(op, &x, rhs, &mut ws)?) / bnorm;
    Err(Error::IterationCap { iterations, residual: rel })
}

/// MINRES (Paige–Saunders) from the initial guess `x`.
#[allow(clippy::too_many_arguments)]
fn minres(
    op: &StructuredOperator,
    rhs: &[f64],
    mut x: Vec<f64>,
    tol: f64,
    max_iter: usize,
    mut iterations: usize,
    monitor: &mut dyn FnMut(usize, &[f64]),
    ws: &mut Workspace,
) -> Result<SolveReport> {
    let n = x.len();
    let bnorm = norm(rhs);
    let target = tol * bnorm;
    loop {
        let mut r1 = true_residual(op, &x, rhs, ws)?;
        let beta1 = norm(&r1);
        if beta1 <= target {
            return Ok(SolveReport {
                u_h: x,
                iterations,
                final_residual: beta1 / bnorm,
                indefiniteness_flag: true,
                method: Method::Minres,
                wall_time: 0.0,
            });
        }
        if iterations >= max_iter {
            return Err(Error::IterationCap { iterations, residual: beta1 / bnorm });
        }
        let mut y = r1.clone();
        let mut r2 = r1.clone();
        let (mut oldb, mut beta) = (0.0, beta1);
        let (mut dbar, mut epsln, mut phibar) = (0.0, 0.0, beta1);
        let (mut cs, mut sn) = (-1.0, 0.0);
        let mut w = vec![0.0; n];
        let mut w2 = vec![0.0; n];
        let mut v = vec![0.0; n];
        let mut first = true;
        while iterations < max_iter && phibar > 0.5 * target && beta > 0.0 {
            for i in 0..n {
                v[i] = y[i] / beta;
            }
            op.apply(&v, &mut y, ws)?;
            if !first {
                let c = beta / oldb;
                for i in 0..n {
                    y[i] -= c * r1[i];
                }
            }
            first = false;
            let alfa = dot(&v, &y);
            let c = alfa / beta;
            for i in 0..n {
                y[i] -= c * r2[i];
            }
            std::mem::swap(&mut r1, &mut r2);
            r2.copy_from_slice(&y);
            oldb = beta;
            beta = norm(&y);
            let oldeps = epsln;
            let delta = cs * dbar + sn * alfa;
            let gbar = sn * dbar - cs * alfa;
            epsln = sn * beta;
            dbar = -cs * beta;
            let gamma = gbar.hypot(beta).max(f64::EPSILON);
            cs = gbar / gamma;
            sn = beta / gamma;
            let phi = cs * phibar;
            phibar *= sn;
            for i in 0..n {
                let w1 = w2[i];
                w2[i] = w[i];
                w[i] = (v[i] - oldeps * w1 - delta * w2[i]) / gamma;
                x[i] += phi * w[i];
            }
            iterations += 1;
            monitor(iterations, &x);
        }
    }
}

/// `max |u_h − u|` over interior nodes and the pointwise error field.
pub fn grid_error_norms(u_h: &[f64], u_exact: &FieldFn, grid: &Grid) -> Result<(f64, Vec<f64>)> {
    let pts = grid.interior_points();
    if pts.len() != u_h.len() {
        return Err(Error::SizeMismatch { expected: pts.len(), got: u_h.len() });
    }
    let e: Vec<f64> = pts.iter().zip(u_h).map(|(x, uh)| uh - u_exact.eval(x)).collect();
    let inf = e.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    Ok((inf, e))
}
