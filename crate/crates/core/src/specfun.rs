//! Special functions: Γ, Gauss ₂F₁, Kummer ₁F₁ and the fractional Laplacian
//! normalization constant.
//!
//! Everything here is a pure function of its arguments. Series are capped at
//! [`SERIES_CAP`] terms; running into the cap is reported as
//! [`Error::Divergence`] rather than returning a truncated sum.

use std::f64::consts::PI;

use crate::error::{domain, Error, Result};

/// Maximum number of series terms before giving up.
pub const SERIES_CAP: usize = 10_000;

const EPS: f64 = f64::EPSILON;

/// A value together with an absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecFunResult {
    pub value: f64,
    pub est_error: f64,
}

// Lanczos approximation, g = 7, nine coefficients.
const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// `sin(πx)` with exact zeros at the integers.
fn sin_pi(x: f64) -> f64 {
    let r = x - 2.0 * (x / 2.0).round();
    if r == 0.0 || r.abs() == 1.0 {
        return 0.0;
    }
    (PI * r).sin()
}

fn gamma_lanczos(x: f64) -> f64 {
    // Γ(x) for x >= 0.5
    let x = x - 1.0;
    let mut acc = LANCZOS_COEF[0];
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    // split the power to stay finite up to x ~ 171
    let half = t.powf(0.5 * (x + 0.5));
    (2.0 * PI).sqrt() * half * (-t).exp() * half * acc
}

/// The Gamma function for real arguments.
///
/// Fails with [`Error::Pole`] at `0, −1, −2, …`.
pub fn gamma(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return domain(format!("gamma of non-finite argument {x}"));
    }
    if x <= 0.0 && x == x.floor() {
        return Err(Error::Pole(x));
    }
    if x == 1.0 || x == 2.0 {
        return Ok(1.0);
    }
    if x < 0.5 {
        // reflection Γ(x)Γ(1−x) = π / sin(πx)
        Ok(PI / (sin_pi(x) * gamma_lanczos(1.0 - x)))
    } else {
        Ok(gamma_lanczos(x))
    }
}

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

/// Plain power series of ₂F₁ around zero; used for |z| <= 1/2.
fn hyp2f1_series(a: f64, b: f64, c: f64, z: f64) -> Result<SpecFunResult> {
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut abs_sum = 1.0;
    let mut small = 0;
    for n in 0..SERIES_CAP {
        let nf = n as f64;
        term *= (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0)) * z;
        sum += term;
        abs_sum += term.abs();
        if term == 0.0 {
            return Ok(SpecFunResult {
                value: sum,
                est_error: 4.0 * EPS * abs_sum,
            });
        }
        if term.abs() <= 0.25 * EPS * sum.abs() {
            small += 1;
            if small == 3 {
                return Ok(SpecFunResult {
                    value: sum,
                    est_error: 4.0 * EPS * abs_sum + 2.0 * term.abs(),
                });
            }
        } else {
            small = 0;
        }
    }
    Err(Error::Divergence {
        what: "2F1 power series",
        limit: SERIES_CAP,
    })
}

/// Continue the solution of the hypergeometric ODE
/// `z(1−z)F'' + [c − (a+b+1)z]F' − abF = 0`
/// from `z0` to `z1` by Taylor re-expansion. Each step stays within half the
/// distance to the singular point `z = 1`, so the local series converge at
/// least like `2^{-n}` regardless of whether `c−a−b` is an integer.
fn hyp2f1_continue(
    a: f64,
    b: f64,
    c: f64,
    mut z0: f64,
    mut f: f64,
    mut df: f64,
    z1: f64,
    mut err: f64,
) -> Result<SpecFunResult> {
    let ab = a * b;
    let q1 = -(a + b + 1.0);
    while z0 < z1 {
        let step = (z1 - z0).min(0.5 * (1.0 - z0));
        let p0 = z0 * (1.0 - z0);
        let p1 = 1.0 - 2.0 * z0;
        let q0 = c + q1 * z0;

        // Taylor coefficients of F(z0 + t) scaled by step^n
        let mut cm1 = f; // c_n * step^n
        let mut c0 = df * step; // c_{n+1} * step^{n+1}
        let mut val = cm1 + c0;
        let mut dval = df;
        let mut abs_val = cm1.abs() + c0.abs();
        let mut small = 0;
        let mut converged = false;
        for n in 0..SERIES_CAP {
            let nf = n as f64;
            // c_{n+2} from c_{n+1}, c_n
            let num = (p1 * nf + q0) * (nf + 1.0) * c0 * step
                + (-nf * (nf - 1.0) + q1 * nf - ab) * cm1 * step * step;
            let cn2 = -num / (p0 * (nf + 2.0) * (nf + 1.0));
            val += cn2;
            dval += (nf + 2.0) * cn2 / step;
            abs_val += cn2.abs();
            cm1 = c0;
            c0 = cn2;
            if c0.abs() + cm1.abs() <= 0.25 * EPS * val.abs() {
                small += 1;
                if small == 3 {
                    converged = true;
                    break;
                }
            } else {
                small = 0;
            }
        }
        if !converged {
            return Err(Error::Divergence {
                what: "2F1 analytic continuation",
                limit: SERIES_CAP,
            });
        }
        // propagate relative error and add local rounding
        err = err * (val.abs() / f.abs().max(f64::MIN_POSITIVE)).max(1.0) + 4.0 * EPS * abs_val;
        f = val;
        df = dval;
        z0 += step;
    }
    Ok(SpecFunResult {
        value: f,
        est_error: err,
    })
}

/// Gauss hypergeometric function ₂F₁(a, b; c; z) with error estimate, for
/// `z ∈ [0, 1)`.
pub fn gauss_2f1_est(a: f64, b: f64, c: f64, z: f64) -> Result<SpecFunResult> {
    if is_nonpositive_integer(c) {
        return domain(format!("2F1 undefined for c = {c}"));
    }
    if !(0.0..1.0).contains(&z) {
        return domain(format!("2F1 implemented for z in [0, 1), got {z}"));
    }
    if z == 0.0 || a == 0.0 || b == 0.0 {
        return Ok(SpecFunResult {
            value: 1.0,
            est_error: 0.0,
        });
    }
    const SWITCH: f64 = 0.5;
    if z <= SWITCH || is_nonpositive_integer(a) || is_nonpositive_integer(b) {
        return hyp2f1_series(a, b, c, z);
    }
    let f0 = hyp2f1_series(a, b, c, SWITCH)?;
    let d0 = hyp2f1_series(a + 1.0, b + 1.0, c + 1.0, SWITCH)?;
    let df = a * b / c * d0.value;
    hyp2f1_continue(a, b, c, SWITCH, f0.value, df, z, f0.est_error + (a * b / c).abs() * d0.est_error)
}

/// Gauss hypergeometric function ₂F₁(a, b; c; z) for `z ∈ [0, 1)`.
pub fn gauss_2f1(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    gauss_2f1_est(a, b, c, z).map(|r| r.value)
}

fn hyp1f1_series(a: f64, b: f64, z: f64) -> Result<SpecFunResult> {
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut abs_sum = 1.0;
    let mut small = 0;
    for n in 0..SERIES_CAP {
        let nf = n as f64;
        term *= (a + nf) / ((b + nf) * (nf + 1.0)) * z;
        sum += term;
        abs_sum += term.abs();
        if term == 0.0 {
            return Ok(SpecFunResult {
                value: sum,
                est_error: 4.0 * EPS * abs_sum,
            });
        }
        if term.abs() <= 0.25 * EPS * sum.abs() {
            small += 1;
            if small == 3 {
                return Ok(SpecFunResult {
                    value: sum,
                    est_error: 4.0 * EPS * abs_sum + 2.0 * term.abs(),
                });
            }
        } else {
            small = 0;
        }
    }
    Err(Error::Divergence {
        what: "1F1 power series",
        limit: SERIES_CAP,
    })
}

/// Kummer's confluent hypergeometric function ₁F₁(a; b; z) with error
/// estimate. Negative arguments go through the Kummer transform
/// `₁F₁(a; b; z) = e^z ₁F₁(b − a; b; −z)`.
pub fn kummer_1f1_est(a: f64, b: f64, z: f64) -> Result<SpecFunResult> {
    if is_nonpositive_integer(b) {
        return domain(format!("1F1 undefined for b = {b}"));
    }
    if !z.is_finite() {
        return domain(format!("1F1 of non-finite argument {z}"));
    }
    if z == 0.0 || a == 0.0 {
        return Ok(SpecFunResult {
            value: 1.0,
            est_error: 0.0,
        });
    }
    if z < 0.0 && !is_nonpositive_integer(a) {
        let s = hyp1f1_series(b - a, b, -z)?;
        let e = z.exp();
        Ok(SpecFunResult {
            value: e * s.value,
            est_error: e * s.est_error + 2.0 * EPS * (e * s.value).abs(),
        })
    } else {
        hyp1f1_series(a, b, z)
    }
}

/// Kummer's confluent hypergeometric function ₁F₁(a; b; z).
pub fn kummer_1f1(a: f64, b: f64, z: f64) -> Result<f64> {
    kummer_1f1_est(a, b, z).map(|r| r.value)
}

/// `c_{d,α} = 2^{α−1} α Γ((d+α)/2) / (π^{d/2} Γ(1−α/2))`.
pub fn normalization_constant(d: usize, alpha: f64) -> Result<f64> {
    if !(d == 1 || d == 2) {
        return domain(format!("dimension must be 1 or 2, got {d}"));
    }
    if !(alpha > 0.0 && alpha < 2.0) {
        return domain(format!("alpha must lie in (0, 2), got {alpha}"));
    }
    let df = d as f64;
    Ok(2f64.powf(alpha - 1.0) * alpha * gamma(0.5 * (df + alpha))?
        / (PI.powf(0.5 * df) * gamma(1.0 - 0.5 * alpha)?))
}
