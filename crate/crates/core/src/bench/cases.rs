//! Exact test cases on `Ω = (−1, 1)^d`.

use std::f64::consts::PI;

use crate::error::{domain, Result};
use crate::kernel::{FieldFn, KernelFamily};
use crate::quadrature::{adaptive, power_tail, singular_origin};
use crate::specfun::{gamma, gauss_2f1, kummer_1f1, normalization_constant};

/// Tolerance of the manufactured tempered right-hand side.
pub const TEMPERED_ORACLE_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct TestCase {
    pub name: String,
    pub dim: usize,
    pub alpha: f64,
    pub kernel: KernelFamily,
    pub u_exact: Option<FieldFn>,
    pub f: FieldFn,
    pub g: FieldFn,
    /// Closed-form `(−Δ)^{α/2} u` on `Ω`.
    pub exact_operator: Option<FieldFn>,
    pub notes: &'static str,
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 2.0) {
        return domain(format!("alpha must lie in (0, 2), got {alpha}"));
    }
    Ok(())
}

/// `(−Δ)^{α/2} (1 − x²)₊^s` for `|x| < 1`.
pub fn compact_power_operator(alpha: f64, s: f64, x: f64) -> Result<f64> {
    let pre = 2f64.powf(alpha) * gamma(0.5 * (alpha + 1.0))? * gamma(s + 1.0)?
        / (PI.sqrt() * gamma(s + 1.0 - 0.5 * alpha)?);
    Ok(pre * gauss_2f1(0.5 * (alpha + 1.0), 0.5 * alpha - s, 0.5, x * x)?)
}

/// `u = (1 − x²)₊^s` with `g = 0`; `f` is the closed-form operator.
pub fn compact_power(alpha: f64, s: f64) -> Result<TestCase> {
    check_alpha(alpha)?;
    if !(s > 0.0) {
        return domain(format!("exponent s must be positive, got {s}"));
    }
    let u = FieldFn::everywhere_1d(move |x| {
        let t = 1.0 - x * x;
        if t > 0.0 {
            t.powf(s)
        } else {
            0.0
        }
    });
    compact_power_operator(alpha, s, 0.0)?;
    let f = FieldFn::interior_1d(move |x| compact_power_operator(alpha, s, x).unwrap_or(f64::NAN));
    Ok(TestCase {
        name: format!("compact(s={s})"),
        dim: 1,
        alpha,
        kernel: KernelFamily::Power,
        u_exact: Some(u),
        f: f.clone(),
        g: FieldFn::zero(),
        exact_operator: Some(f),
        notes: "u = (1-x^2)_+^s, exact operator from the Gauss hypergeometric closed form",
    })
}

/// `(−Δ)^{α/2} 1/(1 + x²) = Γ(1+α) cos((1+α) arctan x) / (1 + x²)^{(1+α)/2}`.
pub fn runge_operator(alpha: f64, x: f64) -> Result<f64> {
    Ok(gamma(1.0 + alpha)? * ((1.0 + alpha) * x.atan()).cos() / (1.0 + x * x).powf(0.5 * (1.0 + alpha)))
}

/// `u = 1/(1 + x²)` on all of `ℝ`, so `g = u` on the exterior.
pub fn runge(alpha: f64) -> Result<TestCase> {
    check_alpha(alpha)?;
    let ga = gamma(1.0 + alpha)?;
    let u = FieldFn::everywhere_1d(|x| 1.0 / (1.0 + x * x));
    let f = FieldFn::interior_1d(move |x| {
        ga * ((1.0 + alpha) * x.atan()).cos() / (1.0 + x * x).powf(0.5 * (1.0 + alpha))
    });
    Ok(TestCase {
        name: "runge".into(),
        dim: 1,
        alpha,
        kernel: KernelFamily::Power,
        u_exact: Some(u.clone()),
        f: f.clone(),
        g: u,
        exact_operator: Some(f),
        notes: "u = 1/(1+x^2) with nonhomogeneous exterior data",
    })
}

/// `f = 1`, `g = 0`, `u = (1 − x²)₊^{α/2} / Γ(1+α)`.
pub fn benchmark(alpha: f64) -> Result<TestCase> {
    check_alpha(alpha)?;
    let ga = gamma(1.0 + alpha)?;
    let u = FieldFn::everywhere_1d(move |x| {
        let t = 1.0 - x * x;
        if t > 0.0 {
            t.powf(0.5 * alpha) / ga
        } else {
            0.0
        }
    });
    Ok(TestCase {
        name: "benchmark".into(),
        dim: 1,
        alpha,
        kernel: KernelFamily::Power,
        u_exact: Some(u),
        f: FieldFn::constant(1.0),
        g: FieldFn::zero(),
        exact_operator: Some(FieldFn::constant(1.0)),
        notes: "constant right-hand side, homogeneous exterior data",
    })
}

/// Tempered operator of `u = (1 − x²)₊²` at `|x| < 1`,
/// `c ∫_0^∞ [2u(x) − u(x+ξ) − u(x−ξ)] e^{−λξ} ξ^{−1−α} dξ`, by quadrature.
///
/// On `ξ < 1 − |x|` the bracket is `−((12x² − 4)ξ² + 2ξ⁴)`; on
/// `(1 − |x|, 1 + |x|)` one neighbour has left the support; beyond `1 + |x|`
/// only `2u(x)` remains.
pub fn tempered_quartic_operator(alpha: f64, lambda: f64, x: f64, tol: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if !(x.abs() < 1.0) {
        return domain(format!("evaluation point must lie in (-1, 1), got {x}"));
    }
    let c = normalization_constant(1, alpha)?;
    let u = |y: f64| {
        let t = 1.0 - y * y;
        if t > 0.0 {
            t * t
        } else {
            0.0
        }
    };
    let damp = |xi: f64| (-lambda * xi).exp();
    let ax = x.abs();
    let ux = u(x);
    let inner_end = 1.0 - ax;
    let near = singular_origin(
        |xi| -((12.0 * x * x - 4.0) + 2.0 * xi * xi) * damp(xi),
        inner_end,
        2.0 - alpha,
        0.25 * tol,
    )?;
    let middle = adaptive(
        |xi| (2.0 * ux - u(x + xi) - u(x - xi)) * damp(xi) * xi.powf(-1.0 - alpha),
        inner_end,
        1.0 + ax,
        0.25 * tol,
    )?;
    let far = power_tail(|xi| 2.0 * ux * damp(xi), 1.0 + ax, alpha, 0.25 * tol)?;
    Ok(c * (near + middle + far))
}

/// `u = (1 − x²)₊²` under the tempered kernel `e^{−λr}`; `f` evaluates
/// [`tempered_quartic_operator`] pointwise (NaN on quadrature failure).
pub fn tempered_quartic(alpha: f64, lambda: f64) -> Result<TestCase> {
    check_alpha(alpha)?;
    if !(lambda >= 0.0) {
        return domain(format!("tempering parameter must be >= 0, got {lambda}"));
    }
    let u = FieldFn::everywhere_1d(|x| {
        let t = 1.0 - x * x;
        if t > 0.0 {
            t * t
        } else {
            0.0
        }
    });
    let f = FieldFn::interior_1d(move |x| {
        tempered_quartic_operator(alpha, lambda, x, TEMPERED_ORACLE_TOL).unwrap_or(f64::NAN)
    });
    let kernel = if lambda == 0.0 { KernelFamily::Power } else { KernelFamily::Tempered { lambda } };
    Ok(TestCase {
        name: format!("tempered(lambda={lambda})"),
        dim: 1,
        alpha,
        kernel,
        u_exact: Some(u),
        f: f.clone(),
        g: FieldFn::zero(),
        exact_operator: Some(f),
        notes: "right-hand side manufactured by direct quadrature of the operator",
    })
}

/// 2D: `u = e^{−|x|²}` on `ℝ²`, `f = 2^α Γ(1+α/2) ₁F₁(1+α/2; 1; −|x|²)`.
pub fn gaussian_2d(alpha: f64) -> Result<TestCase> {
    check_alpha(alpha)?;
    let pre = 2f64.powf(alpha) * gamma(1.0 + 0.5 * alpha)?;
    let u = FieldFn::everywhere(|x: &[f64]| (-(x[0] * x[0] + x[1] * x[1])).exp());
    let f = FieldFn::new(crate::kernel::FieldDomain::Interior, move |x: &[f64]| {
        pre * kummer_1f1(1.0 + 0.5 * alpha, 1.0, -(x[0] * x[0] + x[1] * x[1])).unwrap_or(f64::NAN)
    });
    Ok(TestCase {
        name: "gaussian2d".into(),
        dim: 2,
        alpha,
        kernel: KernelFamily::Power,
        u_exact: Some(u.clone()),
        f: f.clone(),
        g: u,
        exact_operator: Some(f),
        notes: "Gaussian with nonhomogeneous exterior data on the square",
    })
}

/// Case lookup for the command line. `s` is the exponent of the compact
/// family (`table1`/`table2` derive it from `α`), `lambda` the tempering.
pub fn case_by_name(name: &str, alpha: f64, s: Option<f64>, lambda: Option<f64>) -> Result<TestCase> {
    match name {
        "runge" => runge(alpha),
        "benchmark" => benchmark(alpha),
        "compact" | "smooth" => compact_power(alpha, s.unwrap_or(2.0)),
        "table1" => compact_power(alpha, 1.0 + alpha.floor()),
        "table2" => compact_power(alpha, 2.1 + alpha),
        "tempered" => tempered_quartic(alpha, lambda.unwrap_or(1.0)),
        "gaussian" | "gaussian2d" => gaussian_2d(alpha),
        other => domain(format!(
            "unknown case '{other}' (expected runge, benchmark, compact, table1, table2, tempered, gaussian)"
        )),
    }
}
