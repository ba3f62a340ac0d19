//! Convergence studies over lists of mesh sizes.

use std::time::Instant;

use crate::error::{domain, Error, Result};
use crate::kernel::{Grid, KernelSpec};
use crate::par::{self, Execution};
use crate::solver::{apply_operator, solve_poisson_with, PoissonProblem, SolveOptions};

use super::cases::{tempered_quartic, TestCase};

/// Absolute tolerance of tail integrals in operator-error studies.
pub const STUDY_TOL: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub h: f64,
    pub error_inf: f64,
    /// `log₂(e_prev / e) / log₂(h_prev / h)`; absent on the first row.
    pub rate: Option<f64>,
    pub runtime_s: f64,
    /// `(point, |error|)` at requested probe points that are grid nodes.
    pub probes: Vec<(Vec<f64>, f64)>,
}

/// Observed order between two consecutive rows.
pub fn rate(h_prev: f64, e_prev: f64, h: f64, e: f64) -> f64 {
    (e_prev / e).log2() / (h_prev / h).log2()
}

/// Fill in `rate` on every row after the first.
pub fn fill_rates(rows: &mut [ConvergenceRow]) {
    for i in 1..rows.len() {
        rows[i].rate = Some(rate(rows[i - 1].h, rows[i - 1].error_inf, rows[i].h, rows[i].error_inf));
    }
    if let Some(r) = rows.first_mut() {
        r.rate = None;
    }
}

/// Dyadic list `h₀, h₀/2, …` down to `h_min` (inclusive, within roundoff).
pub fn dyadic(h0: f64, h_min: f64) -> Vec<f64> {
    let mut v = Vec::new();
    let mut h = h0;
    while h >= h_min * (1.0 - 1e-12) {
        v.push(h);
        h *= 0.5;
    }
    v
}

fn grid_for(case: &TestCase, h: f64) -> Result<Grid> {
    match case.dim {
        1 => Grid::from_h_1d(-1.0, 1.0, h),
        _ => Grid::from_h_2d([-1.0, -1.0], [1.0, 1.0], h),
    }
}

fn spec_for(case: &TestCase, gamma: f64) -> Result<KernelSpec> {
    KernelSpec::power(case.dim, case.alpha, gamma).and_then(|s| KernelSpec::new(s.d, s.alpha, s.gamma, case.kernel, s.c))
}

fn probe_errors(grid: &Grid, err: &[f64], probes: &[Vec<f64>]) -> Vec<(Vec<f64>, f64)> {
    let pts = grid.interior_points();
    probes
        .iter()
        .filter_map(|p| {
            pts.iter()
                .position(|x| x.iter().zip(p).all(|(a, b)| (a - b).abs() <= 1e-12))
                .map(|i| (p.clone(), err[i].abs()))
        })
        .collect()
}

fn check_finite(values: &[f64], what: &str) -> Result<()> {
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Tolerance { what: what.to_string(), tol: f64::NAN });
    }
    Ok(())
}

/// `‖(−Δ)_h^{α/2} u − (−Δ)^{α/2} u‖∞` over the interior for each `h`.
pub fn operator_error_study(
    case: &TestCase,
    p: usize,
    gamma: f64,
    h_list: &[f64],
    probes: &[Vec<f64>],
) -> Result<Vec<ConvergenceRow>> {
    operator_error_study_with(case, p, gamma, h_list, probes, Execution::available())
}

pub fn operator_error_study_with(
    case: &TestCase,
    p: usize,
    gamma: f64,
    h_list: &[f64],
    probes: &[Vec<f64>],
    exec: Execution,
) -> Result<Vec<ConvergenceRow>> {
    let (Some(u), Some(exact)) = (&case.u_exact, &case.exact_operator) else {
        return domain(format!("case {} has no closed-form operator", case.name));
    };
    let spec = spec_for(case, gamma)?;
    let mut rows = par::try_map(exec, h_list.len(), |i| {
        let start = Instant::now();
        let grid = grid_for(case, h_list[i])?;
        let lh = apply_operator(&spec, &grid, p, u, &case.g, STUDY_TOL)?;
        let pts = grid.interior_points();
        let err: Vec<f64> = pts.iter().zip(&lh).map(|(x, v)| v - exact.eval(x)).collect();
        check_finite(&err, "exact operator values")?;
        Ok::<_, Error>(ConvergenceRow {
            h: h_list[i],
            error_inf: err.iter().fold(0.0f64, |m, e| m.max(e.abs())),
            rate: None,
            runtime_s: start.elapsed().as_secs_f64(),
            probes: probe_errors(&grid, &err, probes),
        })
    })?;
    fill_rates(&mut rows);
    Ok(rows)
}

/// `‖u_h − u‖∞` of the Poisson solution for each `h`; probes at the origin.
pub fn poisson_convergence_study(
    case: &TestCase,
    p: usize,
    gamma: f64,
    h_list: &[f64],
    opts: &SolveOptions,
) -> Result<Vec<ConvergenceRow>> {
    let Some(u) = &case.u_exact else {
        return domain(format!("case {} has no exact solution", case.name));
    };
    let spec = spec_for(case, gamma)?;
    let origin = vec![vec![0.0; case.dim]];
    let mut rows = par::try_map(opts.exec, h_list.len(), |i| {
        let start = Instant::now();
        let grid = grid_for(case, h_list[i])?;
        let problem = PoissonProblem::new(spec, grid.clone(), case.f.clone(), case.g.clone(), p)?;
        let report = solve_poisson_with(&problem, opts, &mut |_, _| {})?;
        check_finite(&report.u_h, "right-hand side")?;
        let (inf, err) = crate::solver::grid_error_norms(&report.u_h, u, &grid)?;
        Ok::<_, Error>(ConvergenceRow {
            h: h_list[i],
            error_inf: inf,
            rate: None,
            runtime_s: start.elapsed().as_secs_f64(),
            probes: probe_errors(&grid, &err, &origin),
        })
    })?;
    fill_rates(&mut rows);
    Ok(rows)
}

/// Operator-error study repeated for each splitting parameter.
pub fn gamma_sensitivity_study(
    case: &TestCase,
    p: usize,
    gamma_list: &[f64],
    h_list: &[f64],
) -> Result<Vec<(f64, Vec<ConvergenceRow>)>> {
    for &g in gamma_list {
        if !(g > case.alpha && g <= 2.0) {
            return domain(format!("splitting parameter {g} outside (alpha, 2] = ({}, 2]", case.alpha));
        }
    }
    gamma_list
        .iter()
        .map(|&g| operator_error_study(case, p, g, h_list, &[]).map(|rows| (g, rows)))
        .collect()
}

/// The four splitting parameters compared in the sensitivity study:
/// `2, 1, 1 + α/2, α + ε` (those inside `(α, 2]`).
pub fn default_gamma_list(alpha: f64, eps: f64) -> Vec<f64> {
    let mut v: Vec<f64> = vec![2.0, 1.0, 1.0 + 0.5 * alpha, alpha + eps];
    v.retain(|&g| g > alpha && g <= 2.0);
    v.dedup();
    v
}

/// Tempered Poisson study with `u = (1 − x²)₊²` for each `λ`.
pub fn tempered_study(
    alpha: f64,
    lambda_list: &[f64],
    p: usize,
    h_list: &[f64],
    opts: &SolveOptions,
) -> Result<Vec<(f64, Vec<ConvergenceRow>)>> {
    lambda_list
        .iter()
        .map(|&l| {
            let case = tempered_quartic(alpha, l)?;
            poisson_convergence_study(&case, p, 2.0, h_list, opts).map(|rows| (l, rows))
        })
        .collect()
}
