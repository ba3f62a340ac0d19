//! Gauss–Legendre rules and the composite integrators built on them.

use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Order of the fixed rule used throughout the crate.
pub const GL_ORDER: usize = 16;

/// Maximum number of bisection / grading levels.
pub const MAX_LEVELS: usize = 60;

/// Nodes and weights of an n-point Gauss–Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Newton iteration on `P_n` from the Chebyshev-like initial guess.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_and_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-16 {
                    let (_, d) = legendre_and_derivative(n, x);
                    dp = d;
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        GaussLegendre { nodes, weights }
    }

    /// Integral of `f` over `[a, b]`.
    #[inline]
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut s = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            s += w * f(mid + half * x);
        }
        s * half
    }
}

fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// The shared 16-point rule.
pub fn gl16() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(GL_ORDER))
}

/// Adaptive bisection with the 16-point rule: a panel is accepted when the
/// two-half estimate agrees with the one-panel estimate to `tol` (scaled to
/// the panel width).
pub fn adaptive<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    let rule = gl16();
    let whole = rule.integrate(a, b, &mut f);
    let mut stack = vec![(a, b, whole, 0usize)];
    let mut total = 0.0;
    let width = (b - a).abs().max(f64::MIN_POSITIVE);
    while let Some((lo, hi, est, depth)) = stack.pop() {
        let mid = 0.5 * (lo + hi);
        let left = rule.integrate(lo, mid, &mut f);
        let right = rule.integrate(mid, hi, &mut f);
        let refined = left + right;
        let local_tol = tol * ((hi - lo).abs() / width).max(1e-3);
        if (refined - est).abs() <= local_tol || (hi - lo).abs() <= 4.0 * f64::EPSILON * lo.abs().max(hi.abs()) {
            total += refined;
        } else if depth >= MAX_LEVELS {
            return Err(Error::Tolerance {
                what: format!("adaptive panel [{lo}, {hi}]"),
                tol,
            });
        } else {
            stack.push((lo, mid, left, depth + 1));
            stack.push((mid, hi, right, depth + 1));
        }
    }
    Ok(total)
}

/// `∫_a^b f` for integrands that are only mildly irregular at `a`: panels
/// `[a + w/2^{m+1}, a + w/2^m]` (ratio 1/2) are integrated with the 16-point
/// rule until one contributes less than `tol/10`; the remaining `[a, a + w/2^m]`
/// is closed with a single panel.
pub fn graded_left<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    let rule = gl16();
    let mut hi = b;
    let mut total = 0.0;
    for _ in 0..MAX_LEVELS {
        let lo = a + 0.5 * (hi - a);
        let part = rule.integrate(lo, hi, &mut f);
        total += part;
        hi = lo;
        if part.abs() < 0.1 * tol {
            return Ok(total + rule.integrate(a, hi, &mut f));
        }
    }
    Err(Error::Tolerance {
        what: format!("graded integral on [{a}, {b}]"),
        tol,
    })
}

/// `∫_0^b ξ^{σ−1} F(ξ) dξ` for `σ > 0` and smooth `F`.
///
/// The substitution `ξ = b t^{1/σ}` turns the weight into the constant
/// `b^σ/σ`; the remaining `t`-integrand behaves like `F(0) + O(t^{1/σ})` and is
/// integrated with geometric grading toward `t = 0`.
pub fn singular_origin<F: FnMut(f64) -> f64>(mut f: F, b: f64, sigma: f64, tol: f64) -> Result<f64> {
    if b == 0.0 {
        return Ok(0.0);
    }
    let scale = b.powf(sigma) / sigma;
    let q = 1.0 / sigma;
    let rel = tol / scale.max(f64::MIN_POSITIVE);
    let inner = graded_left(|t: f64| f(b * t.powf(q)), 0.0, 1.0, rel.max(1e-300))?;
    Ok(scale * inner)
}

/// `∫_L^∞ G(ξ) ξ^{−1−α} dξ` for bounded `G`.
///
/// With `ξ = L t^{−1/α}` the weight becomes the constant `L^{−α}/α` and the
/// integrand `G(L t^{−1/α})` on `t ∈ (0, 1]`; panels are refined toward
/// `t = 0` until they contribute less than `tol/10`.
pub fn power_tail<F: FnMut(f64) -> f64>(mut g: F, l: f64, alpha: f64, tol: f64) -> Result<f64> {
    let scale = l.powf(-alpha) / alpha;
    let q = -1.0 / alpha;
    let rel = tol / scale;
    let mut hi = 1.0;
    let mut total = 0.0;
    for _ in 0..MAX_LEVELS {
        let lo = 0.5 * hi;
        let part = adaptive(|t: f64| g(l * t.powf(q)), lo, hi, 0.1 * rel)?;
        total += part;
        hi = lo;
        if part.abs() < 0.1 * rel {
            // G bounded: remaining mass at most sup|G| * hi, checked by one panel
            let rest = gl16().integrate(0.0, hi, |t: f64| if t > 0.0 { g(l * t.powf(q)) } else { 0.0 });
            return Ok(scale * (total + rest));
        }
    }
    Err(Error::Tolerance {
        what: "semi-infinite tail integral".into(),
        tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn rule_integrates_polynomials_exactly() {
        let r = gl16();
        for n in 0..32 {
            let exact = if n % 2 == 0 { 2.0 / (n as f64 + 1.0) } else { 0.0 };
            let v = r.integrate(-1.0, 1.0, |x| x.powi(n));
            assert!((v - exact).abs() < 1e-14, "degree {n}: {v} vs {exact}");
        }
        let sum: f64 = r.weights.iter().sum();
        assert_relative_eq!(sum, 2.0, epsilon = 1e-15);
    }

    #[test]
    fn odd_order_rule() {
        let r = GaussLegendre::new(5);
        assert_eq!(r.nodes[2], 0.0);
        assert_relative_eq!(r.integrate(0.0, 1.0, |x| x.powi(9)), 0.1, epsilon = 1e-15);
    }

    #[test]
    fn adaptive_handles_kinks() {
        let v = adaptive(|x: f64| (x - 0.3).abs(), 0.0, 1.0, 1e-13).unwrap();
        assert_relative_eq!(v, 0.5 * (0.09 + 0.49), epsilon = 1e-12);
    }

    #[test]
    fn singular_origin_matches_closed_form() {
        for sigma in [0.05, 0.3, 1.0, 1.7] {
            // ∫_0^2 ξ^{σ-1} (1 + ξ) dξ
            let b: f64 = 2.0;
            let exact = b.powf(sigma) / sigma + b.powf(sigma + 1.0) / (sigma + 1.0);
            let v = singular_origin(|x| 1.0 + x, b, sigma, 1e-14).unwrap();
            assert_relative_eq!(v, exact, max_relative = 1e-13);
        }
    }

    #[test]
    fn power_tail_closed_forms() {
        for alpha in [0.1, 0.5, 1.0, 1.9] {
            let v = power_tail(|_| 2.0, 1.5, alpha, 1e-14).unwrap();
            assert_relative_eq!(v, 2.0 / (alpha * 1.5f64.powf(alpha)), max_relative = 1e-13);
        }
        // ∫_1^∞ 2/(1+ξ²) ξ^{-2} dξ = 2 (1 − π/4)
        let v = power_tail(|x| 2.0 / (1.0 + x * x), 1.0, 1.0, 1e-14).unwrap();
        assert_relative_eq!(v, 2.0 * (1.0 - PI / 4.0), max_relative = 1e-13);
    }
}
