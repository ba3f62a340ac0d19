//! Scheme coefficients `a_j` (1D) and `a_{kl}` (2D), including the diagonal
//! entry that carries the far-field measure `∫_{Υ₊^c} K(|ξ|)|ξ|^{−(d+α)} dξ`.

use crate::error::{Error, Result};
use crate::kernel::{Grid, KernelFamily, KernelSpec};
use crate::quadrature::{adaptive, power_tail};
use crate::weights::{WeightTable1D, WeightTable2D};

/// Tolerance for the one-dimensional tempered far-field measure.
pub const FARFIELD_TOL_1D: f64 = 1e-14;

/// Default absolute tolerance for the 2D far-field measure.
pub const FARFIELD_TOL_2D: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct StencilCoefficients1D {
    /// `a[0..=N]`; the operator couples `u_i` and `u_{i±j}` through `a[j]`.
    pub a: Vec<f64>,
    pub zeta: u32,
    pub farfield_measure: f64,
    pub h: f64,
}

impl StencilCoefficients1D {
    pub fn n(&self) -> usize {
        self.a.len() - 1
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StencilCoefficients2D {
    /// Row-major `a[k][l]`, `k, l = 0..=N`.
    pub a: Vec<f64>,
    pub n: usize,
    pub zeta: u32,
    pub farfield_measure: f64,
    pub h: f64,
}

impl StencilCoefficients2D {
    #[inline]
    pub fn get(&self, k: usize, l: usize) -> f64 {
        self.a[k * (self.n + 1) + l]
    }
}

fn same_h(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs())
}

fn check_table(n_table: usize, h_table: f64, grid: &Grid) -> Result<()> {
    if n_table != grid.n_weights() || !same_h(h_table, grid.h) {
        return Err(Error::Mismatch(format!(
            "weight table (N = {n_table}, h = {h_table}) does not fit grid (N = {}, h = {})",
            grid.n_weights(),
            grid.h
        )));
    }
    Ok(())
}

fn check_kernel(spec: &KernelSpec, alpha: f64, gamma: f64, lambda: f64) -> Result<()> {
    if spec.alpha != alpha || spec.gamma != gamma || spec.family.lambda() != lambda {
        return Err(Error::Mismatch(format!(
            "weight table built for (α, γ, λ) = ({alpha}, {gamma}, {lambda}), kernel has ({}, {}, {})",
            spec.alpha,
            spec.gamma,
            spec.family.lambda()
        )));
    }
    Ok(())
}

/// `∫_L^∞ K(ξ) ξ^{−1−α} dξ`.
pub fn farfield_measure_1d(family: KernelFamily, alpha: f64, l: f64) -> Result<f64> {
    match family {
        KernelFamily::Power => Ok(l.powf(-alpha) / alpha),
        KernelFamily::Tempered { .. } => {
            let scale = l.powf(-alpha) / alpha;
            power_tail(|x| family.eval(x), l, alpha, FARFIELD_TOL_1D * scale)
        }
    }
}

pub fn coeffs_1d(w: &WeightTable1D, spec: &KernelSpec, grid: &Grid) -> Result<StencilCoefficients1D> {
    if grid.dim() != 1 || spec.d != 1 {
        return Err(Error::Mismatch("1D coefficients need a 1D grid and kernel".into()));
    }
    check_table(w.n(), w.h, grid)?;
    check_kernel(spec, w.alpha, w.gamma, w.lambda)?;
    let n = w.n();
    let h = w.h;
    let gamma = spec.gamma;
    let zeta = spec.zeta();
    let mut a = vec![0.0; n + 1];
    for j in 1..=n {
        let xi = j as f64 * h;
        a[j] = w.values[j] / xi.powf(gamma);
    }
    // Φ(x, 0) = u''(x) at γ = 2: second-order difference for p ≤ 1,
    // fourth-order (4Φ(ξ₁) − Φ(ξ₂))/3 for p = 2 so the origin cell is O(h⁴).
    let z0 = zeta as f64 * w.values[0];
    if w.p == 2 {
        a[1] += 4.0 * z0 / (3.0 * h.powf(gamma));
        a[2] -= z0 / (3.0 * (2.0 * h).powf(gamma));
    } else {
        a[1] += z0 / h.powf(gamma);
    }
    let farfield_measure = farfield_measure_1d(spec.family, spec.alpha, grid.l)?;
    let sum: f64 = a[1..].iter().sum();
    a[0] = -2.0 * (sum + farfield_measure);
    Ok(StencilCoefficients1D { a, zeta, farfield_measure, h })
}

/// `∫_{ℝ²₊ \ [0,L]²} K(|ξ|) |ξ|^{−(2+α)} dξ`.
pub fn farfield_measure_2d(alpha: f64, l: f64, tol: f64) -> Result<f64> {
    farfield_measure_2d_kernel(KernelFamily::Power, alpha, l, tol)
}

/// Region split into the strips `{ξ₁ > L, ξ₂ < L}` (twice, by symmetry) and the
/// quadrant `{ξ₁, ξ₂ > L}` (twice the half below the diagonal); unbounded
/// directions go through the tail rule of [`power_tail`].
pub fn farfield_measure_2d_kernel(family: KernelFamily, alpha: f64, l: f64, tol: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 2.0) || !(l > 0.0) {
        return crate::error::domain(format!("need α ∈ (0, 2) and L > 0, got α = {alpha}, L = {l}"));
    }
    let e = 2.0 + alpha;
    let rate = |x: f64, y: f64| {
        let r = x.hypot(y);
        family.eval(r) * r.powf(-e)
    };
    let mut err = None;
    // ∫_0^L dξ₂ ∫_L^∞ dξ₁ with weight ξ₁^{−1−α}
    let strip = adaptive(
        |y| {
            power_tail(|x| x.powf(1.0 + alpha) * rate(x, y), l, alpha, 0.1 * tol / l)
                .unwrap_or_else(|er| {
                    err.get_or_insert(er);
                    0.0
                })
        },
        0.0,
        l,
        0.25 * tol,
    )?;
    // quadrant = 2 ∫_L^∞ dξ₁ ∫_L^{ξ₁} dξ₂; the inner integral scales like ξ₁^{−1−α}
    let quadrant = 2.0
        * power_tail(
            |x| {
                let scale = x.powf(1.0 + alpha);
                adaptive(|y| rate(x, y), l, x, 0.1 * tol / scale)
                    .map(|v| scale * v)
                    .unwrap_or_else(|er| {
                        err.get_or_insert(er);
                        0.0
                    })
            },
            l,
            alpha,
            0.25 * tol,
        )?;
    if let Some(er) = err {
        return Err(er);
    }
    Ok(2.0 * strip + quadrant)
}

pub fn coeffs_2d(w: &WeightTable2D, spec: &KernelSpec, grid: &Grid, tol: f64) -> Result<StencilCoefficients2D> {
    if grid.dim() != 2 || spec.d != 2 {
        return Err(Error::Mismatch("2D coefficients need a 2D grid and kernel".into()));
    }
    check_table(w.n, w.h, grid)?;
    check_kernel(spec, w.alpha, w.gamma, w.lambda)?;
    let n = w.n;
    let h = w.h;
    let gamma = spec.gamma;
    let zeta = spec.zeta();
    let z = zeta as f64 * w.get(0, 0);
    let m = n + 1;
    let mut a = vec![0.0; m * m];
    for k in 0..=n {
        for l in 0..=n {
            if k + l == 0 {
                continue;
            }
            let r = (k as f64).hypot(l as f64) * h;
            let wkl = w.get(k, l);
            let num = match (k, l) {
                // Φ(ξ₀₀) ≈ (Φ(ξ₁₀) + Φ(ξ₀₁)) / 2; each axis Φ counts its two neighbours twice
                (1, 0) | (0, 1) => 2.0 * wkl + z,
                (0, _) | (_, 0) => 2.0 * wkl,
                _ => wkl,
            };
            a[k * m + l] = num / r.powf(gamma);
        }
    }
    let farfield_measure = farfield_measure_2d_kernel(spec.family, spec.alpha, grid.l, tol)?;
    let axis: f64 = (1..=n).map(|k| a[k * m] + a[k]).sum();
    let inner: f64 = (1..=n).map(|k| (1..=n).map(|l| a[k * m + l]).sum::<f64>()).sum();
    a[0] = -2.0 * axis - 4.0 * inner - 4.0 * farfield_measure;
    Ok(StencilCoefficients2D { a, n, zeta, farfield_measure, h })
}
