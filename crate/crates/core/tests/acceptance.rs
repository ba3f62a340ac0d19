//! Acceptance suite: one PASS/FAIL line per criterion; exits nonzero if any
//! criterion fails.

mod support;

use std::f64::consts::FRAC_PI_4;
use std::time::Instant;

use fraclap::bench::cases::{compact_power, runge, tempered_quartic};
use fraclap::bench::study::{dyadic, operator_error_study, poisson_convergence_study, ConvergenceRow};
use fraclap::bench::tables::table_runs;
use fraclap::fastop::dense_assemble;
use fraclap::quadrature::adaptive;
use fraclap::solver::{apply_operator, solve_linear, Discretization, SolveOptions};
use fraclap::weights::{weights_1d_analytic, weights_1d_quadrature, weights_2d_quadrature};
use fraclap::{FieldFn, Grid, KernelSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use support::published::ROWS;

type Outcome = Result<String, String>;

/// Half a unit in the third significant digit of `reference`.
fn three_digits(value: f64, reference: f64) -> bool {
    let unit = 10f64.powf(reference.abs().log10().floor() - 2.0);
    (value - reference).abs() <= 0.5 * unit
}

/// Mesh sizes for rate criteria: degree ≤ 1 runs to `1/2048` to pass the
/// pre-asymptotic range; quadratic runs stop at `1/256`, above roundoff.
fn rate_h_list(p: usize) -> Vec<f64> {
    dyadic(1.0 / 16.0, if p == 2 { 1.0 / 256.0 } else { 1.0 / 2048.0 })
}

/// Solver settings for the rate criteria. Below `h = 1/512` the relative
/// residual floor `ε‖A‖‖u‖/‖f‖` exceeds `1e-12` at `α = 1.5`; `‖A⁻¹‖` is
/// bounded, so `1e-10` adds at most `O(1e-10)` to errors of order `h²`.
fn rate_solve_options() -> SolveOptions {
    SolveOptions { cg_tol: 1e-10, ..Default::default() }
}

fn last_rate(rows: &[ConvergenceRow]) -> f64 {
    rows.last().and_then(|r| r.rate).unwrap_or(f64::NAN)
}

/// Compare every run of `table` with the published rows.
fn reproduce_table(table: u32, rate_tol: f64, rel_err_tol: Option<f64>) -> Outcome {
    let opts = SolveOptions::default();
    let mut failures = Vec::new();
    let mut compared = 0;
    for run in table_runs(table, None).map_err(|e| e.to_string())? {
        let published = ROWS
            .iter()
            .find(|r| r.table == table && r.alpha == run.case.alpha && r.p == run.p)
            .ok_or_else(|| format!("no published row for {}", run.label()))?;
        let rows = run.run(&opts).map_err(|e| format!("{}: {e}", run.label()))?;
        if rows.len() > published.errors.len() {
            return Err(format!("{}: {} rows vs {} published", run.label(), rows.len(), published.errors.len()));
        }
        for (i, row) in rows.iter().enumerate() {
            let reference = published.errors[i];
            let ok = match rel_err_tol {
                Some(tol) => (row.error_inf - reference).abs() <= tol * reference,
                None => three_digits(row.error_inf, reference),
            };
            if !ok {
                failures.push(format!(
                    "{} h={}: error {:.4e} vs {:.4e}",
                    run.label(),
                    row.h,
                    row.error_inf,
                    reference
                ));
            }
            if let Some(rate) = row.rate {
                let reference = published.rates[i - 1];
                if (rate - reference).abs() > rate_tol {
                    failures.push(format!("{} h={}: rate {rate:.4} vs {reference:.4}", run.label(), row.h));
                }
            }
            compared += 1;
        }
    }
    if failures.is_empty() {
        Ok(format!("{compared} entries match"))
    } else {
        Err(format!("{} of {compared} entries differ; first: {}", failures.len(), failures[..failures.len().min(8)].join("; ")))
    }
}

fn criterion_1() -> Outcome {
    reproduce_table(3, 0.02, None)
}

fn criterion_2() -> Outcome {
    let a = reproduce_table(1, 0.03, None);
    let b = reproduce_table(2, 0.03, None);
    match (a, b) {
        (Ok(a), Ok(b)) => Ok(format!("table 1: {a}; table 2: {b}")),
        (a, b) => Err(format!("table 1: {}; table 2: {}", a.unwrap_or_else(|e| e), b.unwrap_or_else(|e| e))),
    }
}

fn criterion_3() -> Outcome {
    let table = reproduce_table(4, f64::INFINITY, None)?;
    let opts = SolveOptions { cg_tol: 1e-12, ..Default::default() };
    let mut notes = Vec::new();
    let mut failures = Vec::new();
    for run in table_runs(4, None).map_err(|e| e.to_string())? {
        let rows = run.run(&opts).map_err(|e| e.to_string())?;
        let alpha = run.case.alpha;
        let rate = last_rate(&rows);
        if (rate - 0.5 * alpha).abs() > 0.01 {
            failures.push(format!("{}: rate at h=1/512 {rate:.4} vs {:.2}", run.label(), 0.5 * alpha));
        }
        let n = rows.len();
        let probe = |i: usize| rows[i].probes.first().map(|p| p.1).unwrap_or(f64::NAN);
        let probe_rate = (probe(n - 2) / probe(n - 1)).log2();
        if (probe_rate - 1.0).abs() > 0.1 {
            failures.push(format!("{}: rate at x=0 {probe_rate:.4}", run.label()));
        }
        notes.push(format!("a={alpha} p={} x=0 rate {probe_rate:.3}", run.p));
    }
    if failures.is_empty() {
        Ok(format!("{table}; {}", notes.join(", ")))
    } else {
        Err(failures.join("; "))
    }
}

fn criterion_4() -> Outcome {
    reproduce_table(5, 0.05, Some(0.05))
}

fn criterion_5() -> Outcome {
    let mut failures = Vec::new();
    let mut seen = Vec::new();
    for alpha in [0.6, 1.0, 1.5] {
        let case = runge(alpha).map_err(|e| e.to_string())?;
        for p in 0..=2usize {
            for (gamma, target, tol) in [
                (2.0, if p == 2 { 4.0 } else { 2.0 }, if p == 2 { 0.15 } else { 0.1 }),
                (1.0 + 0.5 * alpha, if p == 2 { 3.0 - alpha } else { 2.0 - alpha }, if p == 2 { 0.2 } else { 0.15 }),
            ] {
                let rows = operator_error_study(&case, p, gamma, &rate_h_list(p), &[]).map_err(|e| e.to_string())?;
                let rate = last_rate(&rows);
                seen.push(format!("a={alpha} p={p} g={gamma}: {rate:.3}"));
                if !((rate - target).abs() <= tol) {
                    failures.push(format!("a={alpha} p={p} gamma={gamma}: rate {rate:.4} vs {target:.2} ± {tol}"));
                }
            }
        }
    }
    if failures.is_empty() {
        Ok(seen.join(", "))
    } else {
        Err(failures.join("; "))
    }
}

fn criterion_6() -> Outcome {
    let h_list = rate_h_list(1);
    let opts = rate_solve_options();
    let mut failures = Vec::new();
    let mut worst_ratio: f64 = 0.0;
    for alpha in [0.6, 1.0, 1.5] {
        for p in 0..=1usize {
            let mut by_lambda = Vec::new();
            for lambda in [0.5, 1.0] {
                let case = tempered_quartic(alpha, lambda).map_err(|e| e.to_string())?;
                let rows = poisson_convergence_study(&case, p, 2.0, &h_list, &opts).map_err(|e| e.to_string())?;
                let rate = last_rate(&rows);
                if (rate - 2.0).abs() > 0.1 {
                    failures.push(format!("a={alpha} p={p} lambda={lambda}: rate {rate:.4}"));
                }
                by_lambda.push(rows);
            }
            for (a, b) in by_lambda[0].iter().zip(&by_lambda[1]) {
                let ratio = (a.error_inf / b.error_inf).max(b.error_inf / a.error_inf);
                worst_ratio = worst_ratio.max(ratio);
            }
        }
    }
    if worst_ratio > 1.5 {
        failures.push(format!("error ratio between lambda = 0.5 and 1 reaches {worst_ratio:.3}"));
    }
    if failures.is_empty() {
        Ok(format!("rates within 2 ± 0.1; worst lambda error ratio {worst_ratio:.3}"))
    } else {
        Err(failures.join("; "))
    }
}

fn random_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

fn property_fft_vs_dense(rng: &mut ChaCha8Rng) -> Result<f64, String> {
    let mut worst: f64 = 0.0;
    let mut check = |spec: KernelSpec, grid: Grid, p: usize| -> Result<(), String> {
        let disc = Discretization::new(&spec, &grid, p).map_err(|e| e.to_string())?;
        let dense = dense_assemble(&disc.coeffs, &grid, -spec.c).map_err(|e| e.to_string())?;
        let x = random_vector(rng, grid.interior_len());
        let fast = disc.op.matvec(&x).map_err(|e| e.to_string())?;
        let slow = &dense * nalgebra::DVector::from_vec(x);
        let diff: Vec<f64> = fast.iter().zip(slow.iter()).map(|(a, b)| a - b).collect();
        worst = worst.max(max_abs(&diff) / max_abs(slow.as_slice()));
        Ok(())
    };
    for n in [8, 32, 128] {
        for p in 0..=2 {
            for alpha in [0.4, 1.0, 1.8] {
                check(KernelSpec::power(1, alpha, 2.0).unwrap(), Grid::new_1d(-1.0, 1.0, n).unwrap(), p)?;
            }
        }
    }
    for n in [4, 16] {
        for p in 0..=1 {
            check(KernelSpec::power(2, 1.3, 2.0).unwrap(), Grid::new_2d([-1.0, -1.0], [1.0, 1.0], n).unwrap(), p)?;
        }
    }
    if worst <= 1e-12 {
        Ok(worst)
    } else {
        Err(format!("FFT vs dense relative difference {worst:.2e}"))
    }
}

fn property_analytic_vs_quadrature() -> Result<f64, String> {
    let mut worst: f64 = 0.0;
    for alpha in [0.3, 1.0, 1.7] {
        for gamma in [2.0, 1.0 + 0.5 * alpha] {
            for p in 0..=2 {
                let h = 0.125;
                let spec = KernelSpec::power(1, alpha, gamma).unwrap();
                let a = weights_1d_analytic(p, alpha, gamma, 16, h).map_err(|e| e.to_string())?;
                let q = weights_1d_quadrature(&spec, p, 16, h, 1e-14).map_err(|e| e.to_string())?;
                for (x, y) in a.values.iter().zip(&q.values) {
                    worst = worst.max((x - y).abs() / x.abs());
                }
            }
        }
    }
    if worst <= 1e-10 {
        Ok(worst)
    } else {
        Err(format!("analytic vs quadrature weights differ by {worst:.2e}"))
    }
}

fn property_constant_annihilation() -> Result<(f64, f64), String> {
    let one = FieldFn::constant(1.0);
    let mut worst_1d: f64 = 0.0;
    for alpha in [0.3, 1.0, 1.7] {
        for p in 0..=2 {
            let spec = KernelSpec::power(1, alpha, 2.0).unwrap();
            let grid = Grid::new_1d(-1.0, 1.0, 32).unwrap();
            let v = apply_operator(&spec, &grid, p, &one, &one, 1e-13).map_err(|e| e.to_string())?;
            worst_1d = worst_1d.max(max_abs(&v));
        }
    }
    let mut worst_2d: f64 = 0.0;
    for alpha in [0.5, 1.5] {
        let spec = KernelSpec::power(2, alpha, 2.0).unwrap();
        let grid = Grid::new_2d([-1.0, -1.0], [1.0, 1.0], 8).unwrap();
        let v = apply_operator(&spec, &grid, 1, &one, &one, 1e-11).map_err(|e| e.to_string())?;
        worst_2d = worst_2d.max(max_abs(&v));
    }
    if worst_1d <= 1e-10 && worst_2d <= 1e-8 {
        Ok((worst_1d, worst_2d))
    } else {
        Err(format!("constants not annihilated: 1D {worst_1d:.2e}, 2D {worst_2d:.2e}"))
    }
}

fn property_partition_of_unity() -> Result<f64, String> {
    let mut worst: f64 = 0.0;
    for alpha in [0.3, 1.0, 1.7] {
        for p in 0..=2 {
            let (n, h) = (16, 0.125);
            let l = n as f64 * h;
            let w = weights_1d_analytic(p, alpha, 2.0, n, h).map_err(|e| e.to_string())?;
            let sigma = 2.0 - alpha;
            let exact = l.powf(sigma) / sigma;
            worst = worst.max((w.values.iter().sum::<f64>() - exact).abs() / exact);
        }
    }
    // ∫_{[0,L]²} |ξ|^{−α} dξ = 2 L^{2−α}/(2−α) ∫_0^{π/4} cos^{α−2} θ dθ
    for alpha in [0.5, 1.5] {
        let (n, h) = (8, 0.25);
        let l = n as f64 * h;
        let spec = KernelSpec::power(2, alpha, 2.0).unwrap();
        let w = weights_2d_quadrature(&spec, 1, n, h, 1e-13).map_err(|e| e.to_string())?;
        let angular = adaptive(|t: f64| t.cos().powf(alpha - 2.0), 0.0, FRAC_PI_4, 1e-15).map_err(|e| e.to_string())?;
        let exact = 2.0 * l.powf(2.0 - alpha) / (2.0 - alpha) * angular;
        worst = worst.max((w.values.iter().sum::<f64>() - exact).abs() / exact);
    }
    if worst <= 1e-10 {
        Ok(worst)
    } else {
        Err(format!("weight sums off by {worst:.2e}"))
    }
}

fn property_spd() -> Result<(), String> {
    for alpha in [0.3, 1.0, 1.7] {
        for p in 0..=1 {
            for n in [16, 64] {
                let spec = KernelSpec::power(1, alpha, 2.0).unwrap();
                let grid = Grid::new_1d(-1.0, 1.0, n).unwrap();
                let disc = Discretization::new(&spec, &grid, p).map_err(|e| e.to_string())?;
                let a = dense_assemble(&disc.coeffs, &grid, -spec.c).map_err(|e| e.to_string())?;
                if a != a.transpose() {
                    return Err(format!("alpha={alpha} p={p} N={n}: not symmetric"));
                }
                if a.cholesky().is_none() {
                    return Err(format!("alpha={alpha} p={p} N={n}: not positive definite"));
                }
            }
        }
    }
    Ok(())
}

fn property_cg_vs_dense(rng: &mut ChaCha8Rng) -> Result<f64, String> {
    let mut worst: f64 = 0.0;
    let mut check = |spec: KernelSpec, grid: Grid, p: usize| -> Result<(), String> {
        let disc = Discretization::new(&spec, &grid, p).map_err(|e| e.to_string())?;
        let dense = dense_assemble(&disc.coeffs, &grid, -spec.c).map_err(|e| e.to_string())?;
        let rhs = random_vector(rng, grid.interior_len());
        let direct = dense
            .lu()
            .solve(&nalgebra::DVector::from_vec(rhs.clone()))
            .ok_or("singular dense matrix")?;
        let report = solve_linear(&disc.op, &rhs, 1e-13, 10_000, &mut |_, _| {}).map_err(|e| e.to_string())?;
        let diff: Vec<f64> = report.u_h.iter().zip(direct.iter()).map(|(a, b)| a - b).collect();
        worst = worst.max(max_abs(&diff) / max_abs(direct.as_slice()));
        Ok(())
    };
    for alpha in [0.3, 1.0, 1.7] {
        for p in 0..=2 {
            check(KernelSpec::power(1, alpha, 2.0).unwrap(), Grid::new_1d(-1.0, 1.0, 64).unwrap(), p)?;
        }
        check(KernelSpec::power(2, alpha, 2.0).unwrap(), Grid::new_2d([-1.0, -1.0], [1.0, 1.0], 16).unwrap(), 1)?;
    }
    if worst <= 1e-9 {
        Ok(worst)
    } else {
        Err(format!("CG vs dense relative difference {worst:.2e}"))
    }
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let fft = property_fft_vs_dense(&mut rng)?;
    let weights = property_analytic_vs_quadrature()?;
    let (c1, c2) = property_constant_annihilation()?;
    let unity = property_partition_of_unity()?;
    property_spd()?;
    let cg = property_cg_vs_dense(&mut rng)?;
    Ok(format!(
        "fft {fft:.1e}, weights {weights:.1e}, constants {c1:.1e}/{c2:.1e}, unity {unity:.1e}, spd ok, cg {cg:.1e}"
    ))
}

fn criterion_8() -> Outcome {
    let opts = rate_solve_options();
    let mut failures = Vec::new();
    let mut seen = Vec::new();
    for alpha in [0.6, 1.0, 1.5] {
        for s in [alpha, 2.0, 3.0, 4.0] {
            let case = compact_power(alpha, s).map_err(|e| e.to_string())?;
            for p in 0..=2usize {
                let rows = poisson_convergence_study(&case, p, 2.0, &rate_h_list(p), &opts).map_err(|e| e.to_string())?;
                let rate = last_rate(&rows);
                let (target, tol) = if p == 2 { (s.min(4.0), 0.15) } else { (s.min(2.0), 0.1) };
                seen.push(format!("a={alpha} s={s} p={p}: {rate:.3}"));
                if !((rate - target).abs() <= tol) {
                    failures.push(format!("a={alpha} s={s} p={p}: rate {rate:.4} vs {target} ± {tol}"));
                }
            }
        }
    }
    if failures.is_empty() {
        Ok(seen.join(", "))
    } else {
        Err(failures.join("; "))
    }
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("Table 3 reproduction", criterion_1),
        ("Tables 1 and 2 reproduction", criterion_2),
        ("Table 4 reproduction", criterion_3),
        ("Table 5 reproduction", criterion_4),
        ("splitting-parameter sensitivity", criterion_5),
        ("tempered Poisson study", criterion_6),
        ("property suite", criterion_7),
        ("smoothness-regime study", criterion_8),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let id = format!("criterion {}", i + 1);
        if !filter.is_empty() && !filter.iter().any(|f| id.ends_with(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {id} ({name}, {secs:.1}s): {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {id} ({name}, {secs:.1}s): {detail}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
