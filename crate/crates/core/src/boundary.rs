//! Contribution of the exterior data `g` to the discrete operator: lattice
//! sums over exterior nodes reached by the stencil plus the far-field
//! integral beyond `Υ`.

use std::f64::consts::FRAC_PI_4;

use crate::error::{Error, Result};
use crate::fastop::{BTTBOperator, ToeplitzOperator};
use crate::kernel::{FieldFn, Grid, KernelSpec};
use crate::par::{self, Execution};
use crate::quadrature::{adaptive, power_tail};
use crate::stencil::{StencilCoefficients1D, StencilCoefficients2D};

/// Default absolute tolerance for per-node far-field integrals.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Interior-sized vector, already multiplied by `−c_{d,α}`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryVector {
    pub values: Vec<f64>,
    pub quad_tol: f64,
}

/// `∫_L^∞ [g(x−ξ) + g(x+ξ)] e^{−λξ} ξ^{−1−α} dξ`.
pub fn tail_integral_1d(g: &FieldFn, x: f64, l: f64, alpha: f64, lambda: f64, tol: f64) -> Result<f64> {
    if g.is_zero() {
        return Ok(0.0);
    }
    let damp = |xi: f64| if lambda == 0.0 { 1.0 } else { (-lambda * xi).exp() };
    power_tail(|xi| (g.eval1(x - xi) + g.eval1(x + xi)) * damp(xi), l, alpha, tol)
}

pub fn boundary_vector_1d(
    g: &FieldFn,
    coeffs: &StencilCoefficients1D,
    grid: &Grid,
    spec: &KernelSpec,
    tol: f64,
) -> Result<BoundaryVector> {
    boundary_vector_1d_with(g, coeffs, grid, spec, tol, Execution::available())
}

pub fn boundary_vector_1d_with(
    g: &FieldFn,
    coeffs: &StencilCoefficients1D,
    grid: &Grid,
    spec: &KernelSpec,
    tol: f64,
    exec: Execution,
) -> Result<BoundaryVector> {
    if grid.dim() != 1 {
        return Err(Error::Mismatch("1D boundary vector needs a 1D grid".into()));
    }
    let m = grid.interior_len();
    if g.is_zero() {
        return Ok(BoundaryVector { values: vec![0.0; m], quad_tol: tol });
    }
    let n = coeffs.n() as i64;
    let n1 = grid.n[0] as i64;
    let lambda = spec.family.lambda();
    let scale = -spec.c;
    // g on lattice points j ∈ [1 − n, n1 − 1 + n], zero at interior nodes
    let lo = 1 - n;
    let ext: Vec<f64> = (lo..n1 + n)
        .map(|j| if j >= 1 && j < n1 { 0.0 } else { g.eval1(grid.coord(0, j)) })
        .collect();
    let values = par::try_map(exec, m, |idx| {
        let i = idx as i64 + 1;
        let mut s = 0.0;
        for k in -n..=n {
            let j = i + k;
            if j < 1 || j >= n1 {
                s += coeffs.a[k.unsigned_abs() as usize] * ext[(j - lo) as usize];
            }
        }
        let tail = tail_integral_1d(g, grid.coord(0, i), grid.l, spec.alpha, lambda, tol)?;
        Ok::<f64, Error>(scale * (s + tail))
    })?;
    Ok(BoundaryVector { values, quad_tol: tol })
}

/// Far-field integral at `x`: `∫_{ℝ² \ [−L, L]²} g(x + ξ) K(|ξ|) |ξ|^{−2−α} dξ`,
/// i.e. the sum over the four sign patterns of the integral over `Υ₊^c`.
///
/// Polar form: the eight octant directions sharing `θ ∈ [0, π/4]` have the same
/// exit radius `L / cos θ`, and the radial tail `∫_R^∞ … r^{−1−α} dr` goes
/// through [`power_tail`].
pub fn farfield_integral_2d(g: &FieldFn, x: [f64; 2], spec: &KernelSpec, l: f64, tol: f64) -> Result<f64> {
    if g.is_zero() {
        return Ok(0.0);
    }
    let family = spec.family;
    let alpha = spec.alpha;
    let mut err = None;
    let v = adaptive(
        |theta: f64| {
            let (s, c) = theta.sin_cos();
            let dirs = [(c, s), (s, c), (-s, c), (-c, s), (-c, -s), (-s, -c), (s, -c), (c, -s)];
            let radial = |r: f64| {
                let sum: f64 = dirs.iter().map(|&(dx, dy)| g.eval(&[x[0] + r * dx, x[1] + r * dy])).sum();
                family.eval(r) * sum
            };
            power_tail(radial, l / c, alpha, 0.1 * tol).unwrap_or_else(|e| {
                err.get_or_insert(e);
                0.0
            })
        },
        0.0,
        FRAC_PI_4,
        tol,
    )?;
    match err {
        Some(e) => Err(e),
        None => Ok(v),
    }
}

pub fn boundary_vector_2d(
    g: &FieldFn,
    coeffs: &StencilCoefficients2D,
    grid: &Grid,
    spec: &KernelSpec,
    tol: f64,
) -> Result<BoundaryVector> {
    boundary_vector_2d_with(g, coeffs, grid, spec, tol, Execution::available())
}

/// Lattice sums use the BTTB product on the extended lattice
/// `[1 − N, N₁ − 1 + N] × [1 − N, N₂ − 1 + N]` applied to `g` with interior
/// nodes zeroed; far-field integrals are evaluated per node.
pub fn boundary_vector_2d_with(
    g: &FieldFn,
    coeffs: &StencilCoefficients2D,
    grid: &Grid,
    spec: &KernelSpec,
    tol: f64,
    exec: Execution,
) -> Result<BoundaryVector> {
    if grid.dim() != 2 {
        return Err(Error::Mismatch("2D boundary vector needs a 2D grid".into()));
    }
    let m = grid.interior_len();
    if g.is_zero() {
        return Ok(BoundaryVector { values: vec![0.0; m], quad_tol: tol });
    }
    let lattice = lattice_sums_2d(g, coeffs, grid, exec)?;
    let n1 = grid.n[0] - 1;
    let scale = -spec.c;
    let values = par::try_map(exec, m, |idx| {
        let (i, j) = ((idx % n1 + 1) as i64, (idx / n1 + 1) as i64);
        let x = [grid.coord(0, i), grid.coord(1, j)];
        let far = farfield_integral_2d(g, x, spec, grid.l, tol)?;
        Ok::<f64, Error>(scale * (lattice[idx] + far))
    })?;
    Ok(BoundaryVector { values, quad_tol: tol })
}

/// `Σ_{(k,l) ∈ [−N, N]², (i+k, j+l) ∉ interior} a_{|k||l|} g(x_{(i+k)(j+l)})`
/// for every interior node, without the `−c` factor.
pub fn lattice_sums_2d(g: &FieldFn, coeffs: &StencilCoefficients2D, grid: &Grid, exec: Execution) -> Result<Vec<f64>> {
    let n = coeffs.n;
    let (n1, n2) = (grid.n[0], grid.n[1]);
    let (m1, m2) = (n1 - 1 + 2 * n, n2 - 1 + 2 * n);
    let generator: Vec<f64> = (0..m1)
        .flat_map(|k| (0..m2).map(move |l| (k, l)))
        .map(|(k, l)| if k <= n && l <= n { coeffs.get(k, l) } else { 0.0 })
        .collect();
    let op = BTTBOperator::new(m1, m2, generator, 1.0)?;
    let off = 1 - n as i64;
    let mut ext = vec![0.0; m1 * m2];
    par::fill(exec, &mut ext, |idx| {
        let i = (idx % m1) as i64 + off;
        let j = (idx / m1) as i64 + off;
        if grid.is_interior(&[i, j]) {
            0.0
        } else {
            g.eval(&[grid.coord(0, i), grid.coord(1, j)])
        }
    });
    let full = op.matvec(&ext)?;
    let mut out = Vec::with_capacity(grid.interior_len());
    for j in 1..n2 {
        for i in 1..n1 {
            let (ei, ej) = (i - 1 + n, j - 1 + n);
            out.push(full[ej * m1 + ei]);
        }
    }
    Ok(out)
}

/// Lattice sums of the 1D scheme through a Toeplitz product on the extended
/// lattice; equivalent to the direct loop in [`boundary_vector_1d`].
pub fn lattice_sums_1d(g: &FieldFn, coeffs: &StencilCoefficients1D, grid: &Grid) -> Result<Vec<f64>> {
    let n = coeffs.n();
    let n1 = grid.n[0];
    let m = n1 - 1 + 2 * n;
    let col: Vec<f64> = (0..m).map(|k| if k <= n { coeffs.a[k] } else { 0.0 }).collect();
    let op = ToeplitzOperator::new(col, 1.0)?;
    let off = 1 - n as i64;
    let ext: Vec<f64> = (0..m as i64)
        .map(|e| {
            let j = e + off;
            if j >= 1 && j < n1 as i64 {
                0.0
            } else {
                g.eval1(grid.coord(0, j))
            }
        })
        .collect();
    let full = op.matvec(&ext)?;
    Ok((1..n1).map(|i| full[i - 1 + n]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stencil::coeffs_1d;
    use crate::weights::weights_1d_analytic;
    use approx::assert_relative_eq;

    #[test]
    fn tail_of_constant() {
        let one = FieldFn::constant(1.0);
        for alpha in [0.4, 1.0, 1.6] {
            let v = tail_integral_1d(&one, 0.3, 2.0, alpha, 0.0, 1e-13).unwrap();
            assert_relative_eq!(v, 2.0 / (alpha * 2f64.powf(alpha)), max_relative = 1e-12);
        }
        assert_eq!(tail_integral_1d(&FieldFn::zero(), 0.0, 1.0, 1.0, 0.0, 1e-12).unwrap(), 0.0);
    }

    #[test]
    fn lattice_sums_agree_1d() {
        let grid = Grid::new_1d(-1.0, 1.0, 12).unwrap();
        let spec = KernelSpec::power(1, 0.9, 2.0).unwrap();
        let w = weights_1d_analytic(1, 0.9, 2.0, 12, grid.h).unwrap();
        let c = coeffs_1d(&w, &spec, &grid).unwrap();
        let g = FieldFn::everywhere_1d(|x| 1.0 / (1.0 + x * x));
        let fast = lattice_sums_1d(&g, &c, &grid).unwrap();
        let b = boundary_vector_1d(&g, &c, &grid, &spec, 1e-12).unwrap();
        for (i, f) in fast.iter().enumerate() {
            let x = grid.coord(0, i as i64 + 1);
            let tail = tail_integral_1d(&g, x, grid.l, 0.9, 0.0, 1e-12).unwrap();
            assert_relative_eq!(-spec.c * (f + tail), b.values[i], max_relative = 1e-11);
        }
    }
}
