//! Symmetric Toeplitz (1D) and symmetric block-Toeplitz-Toeplitz-block (2D)
//! matrix-vector products through circulant embedding, plus dense versions
//! for validation.
//!
//! Operators are immutable; every product takes a caller-owned workspace, so
//! one operator may serve concurrent matvecs from several threads.

use std::sync::Arc;

use nalgebra::DMatrix;
use realfft::num_complex::Complex;
use realfft::{ComplexToReal, RealFftPlanner, RealToComplex};
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::kernel::Grid;
use crate::stencil::{StencilCoefficients1D, StencilCoefficients2D};

/// Largest interior size accepted by [`dense_assemble`].
pub const DENSE_CAP: usize = 4096;

/// Largest `n · stencil length` for which residuals are summed directly.
pub const DIRECT_RESIDUAL_CAP: usize = 1 << 24;

fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::SizeMismatch { expected, got });
    }
    Ok(())
}

/// `y = scale · T x` with `T` symmetric Toeplitz, `T_{ij} = first_col[|i − j|]`.
#[derive(Clone)]
pub struct ToeplitzOperator {
    pub n: usize,
    pub first_col: Vec<f64>,
    /// Spectrum of the length-`2n` circulant embedding (real: the embedding is even).
    pub symbol: Vec<f64>,
    pub scale: f64,
    /// `a_k` for `k ≥ 1`, possibly reaching past the interior.
    pub offsets: Vec<f64>,
    /// `a₀ + 2 Σ_{k≥1} a_k`, kept exactly so residuals avoid the `a₀ x_i` cancellation.
    pub row_sum: f64,
    forward: Arc<dyn RealToComplex<f64>>,
    inverse: Arc<dyn ComplexToReal<f64>>,
}

impl std::fmt::Debug for ToeplitzOperator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ToeplitzOperator")
            .field("n", &self.n)
            .field("scale", &self.scale)
            .finish_non_exhaustive()
    }
}

/// Scratch space for [`ToeplitzOperator::apply`].
#[derive(Debug, Clone)]
pub struct ToeplitzWorkspace {
    real: Vec<f64>,
    spectrum: Vec<Complex<f64>>,
    scratch: Vec<Complex<f64>>,
}

impl ToeplitzOperator {
    pub fn new(first_col: Vec<f64>, scale: f64) -> Result<Self> {
        let n = first_col.len();
        if n == 0 {
            return crate::error::domain("Toeplitz operator needs at least one entry");
        }
        let mut planner = RealFftPlanner::<f64>::new();
        let forward = planner.plan_fft_forward(2 * n);
        let inverse = planner.plan_fft_inverse(2 * n);
        let mut embed = vec![0.0; 2 * n];
        embed[..n].copy_from_slice(&first_col);
        for k in 1..n {
            embed[2 * n - k] = first_col[k];
        }
        let mut spec = forward.make_output_vec();
        forward
            .process(&mut embed, &mut spec)
            .map_err(|e| Error::Config(format!("fft failure: {e}")))?;
        let symbol = spec.iter().map(|c| c.re).collect();
        let offsets = first_col[1..].to_vec();
        let row_sum = first_col[0] + 2.0 * offsets.iter().rev().sum::<f64>();
        Ok(ToeplitzOperator { n, first_col, symbol, scale, offsets, row_sum, forward, inverse })
    }

    /// Operator of the 1D scheme on the interior of `grid`.
    pub fn from_coeffs(coeffs: &StencilCoefficients1D, grid: &Grid, scale: f64) -> Result<Self> {
        let n = grid.interior_len();
        if coeffs.a.len() < n {
            return Err(Error::Mismatch(format!(
                "{} coefficients cannot cover {n} interior nodes",
                coeffs.a.len()
            )));
        }
        let mut op = Self::new(coeffs.a[..n].to_vec(), scale)?;
        op.offsets = coeffs.a[1..].to_vec();
        op.row_sum = -2.0 * coeffs.farfield_measure;
        Ok(op)
    }

    /// `rhs − scale · T x` summed in second-difference form with `x = 0`
    /// outside the interior: `row_sum · x_i + Σ_k a_k ((x_{i+k} − x_i) + (x_{i−k} − x_i))`.
    pub fn residual_direct(&self, x: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
        check_len(self.n, x.len())?;
        check_len(self.n, rhs.len())?;
        let n = self.n as i64;
        let at = |j: i64| if j >= 0 && j < n { x[j as usize] } else { 0.0 };
        Ok((0..n)
            .map(|i| {
                let xi = x[i as usize];
                let mut s = 0.0;
                for (k, a) in self.offsets.iter().enumerate().rev() {
                    let k = k as i64 + 1;
                    s += a * ((at(i + k) - xi) + (at(i - k) - xi));
                }
                rhs[i as usize] - self.scale * (self.row_sum * xi + s)
            })
            .collect())
    }

    pub fn workspace(&self) -> ToeplitzWorkspace {
        let scratch_len = self.forward.get_scratch_len().max(self.inverse.get_scratch_len());
        ToeplitzWorkspace {
            real: self.forward.make_input_vec(),
            spectrum: self.forward.make_output_vec(),
            scratch: vec![Complex::default(); scratch_len],
        }
    }

    pub fn apply(&self, x: &[f64], y: &mut [f64], ws: &mut ToeplitzWorkspace) -> Result<()> {
        check_len(self.n, x.len())?;
        check_len(self.n, y.len())?;
        let n = self.n;
        ws.real[..n].copy_from_slice(x);
        ws.real[n..].fill(0.0);
        self.forward
            .process_with_scratch(&mut ws.real, &mut ws.spectrum, &mut ws.scratch)
            .map_err(|e| Error::Config(format!("fft failure: {e}")))?;
        for (s, &m) in ws.spectrum.iter_mut().zip(&self.symbol) {
            *s *= m;
        }
        ws.spectrum[0].im = 0.0;
        ws.spectrum[n].im = 0.0;
        self.inverse
            .process_with_scratch(&mut ws.spectrum, &mut ws.real, &mut ws.scratch)
            .map_err(|e| Error::Config(format!("fft failure: {e}")))?;
        let norm = self.scale / (2 * n) as f64;
        for (yi, &r) in y.iter_mut().zip(&ws.real[..n]) {
            *yi = norm * r;
        }
        Ok(())
    }

    pub fn matvec(&self, x: &[f64]) -> Result<Vec<f64>> {
        let mut y = vec![0.0; self.n];
        self.apply(x, &mut y, &mut self.workspace())?;
        Ok(y)
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |i, j| self.scale * self.first_col[i.abs_diff(j)])
    }
}

/// `y = scale · B x` with `B` symmetric BTTB: the entry coupling interior
/// nodes `(i, j)` and `(i', j')` is `gen[|i − i'|][|j − j'|]`. Vectors are
/// stored with `i` fastest.
#[derive(Clone)]
pub struct BTTBOperator {
    pub n1: usize,
    pub n2: usize,
    /// Generating entries, row-major `gen[k * n2 + l]` for `k < n1`, `l < n2`.
    pub generator: Vec<f64>,
    /// Spectrum of the `(2n1) × (2n2)` embedding, stored column-major over the
    /// half spectrum: `symbol[i * 2n2 + j]`, `i = 0..=n1`.
    pub symbol: Vec<f64>,
    pub scale: f64,
    row_forward: Arc<dyn RealToComplex<f64>>,
    row_inverse: Arc<dyn ComplexToReal<f64>>,
    col_forward: Arc<dyn Fft<f64>>,
    col_inverse: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for BTTBOperator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("BTTBOperator")
            .field("n1", &self.n1)
            .field("n2", &self.n2)
            .field("scale", &self.scale)
            .finish_non_exhaustive()
    }
}

/// Scratch space for [`BTTBOperator::apply`].
#[derive(Debug, Clone)]
pub struct BttbWorkspace {
    real: Vec<f64>,
    row: Vec<Complex<f64>>,
    cols: Vec<Complex<f64>>,
    scratch: Vec<Complex<f64>>,
}

impl BTTBOperator {
    pub fn new(n1: usize, n2: usize, generator: Vec<f64>, scale: f64) -> Result<Self> {
        if n1 == 0 || n2 == 0 {
            return crate::error::domain("BTTB operator needs positive block sizes");
        }
        check_len(n1 * n2, generator.len())?;
        let mut rplanner = RealFftPlanner::<f64>::new();
        let row_forward = rplanner.plan_fft_forward(2 * n1);
        let row_inverse = rplanner.plan_fft_inverse(2 * n1);
        let mut cplanner = FftPlanner::<f64>::new();
        let col_forward = cplanner.plan_fft_forward(2 * n2);
        let col_inverse = cplanner.plan_fft_inverse(2 * n2);
        let mut op = BTTBOperator {
            n1,
            n2,
            generator,
            symbol: Vec::new(),
            scale,
            row_forward,
            row_inverse,
            col_forward,
            col_inverse,
        };
        let fold = |i: usize, n: usize| -> Option<usize> {
            match i.cmp(&n) {
                std::cmp::Ordering::Less => Some(i),
                std::cmp::Ordering::Equal => None,
                std::cmp::Ordering::Greater => Some(2 * n - i),
            }
        };
        let mut ws = op.workspace();
        for j in 0..2 * n2 {
            for i in 0..2 * n1 {
                ws.real[j * 2 * n1 + i] = match (fold(i, n1), fold(j, n2)) {
                    (Some(k), Some(l)) => op.generator[k * n2 + l],
                    _ => 0.0,
                };
            }
        }
        op.forward(&mut ws)?;
        op.symbol = ws.cols.iter().map(|c| c.re).collect();
        Ok(op)
    }

    /// Operator of the 2D scheme on the interior of `grid`.
    pub fn from_coeffs(coeffs: &StencilCoefficients2D, grid: &Grid, scale: f64) -> Result<Self> {
        let shape = grid.interior_shape();
        let (n1, n2) = (shape[0], shape[1]);
        if n1 > coeffs.n + 1 || n2 > coeffs.n + 1 {
            return Err(Error::Mismatch(format!(
                "coefficients of extent {} cannot cover a {n1} x {n2} interior",
                coeffs.n
            )));
        }
        let generator = (0..n1).flat_map(|k| (0..n2).map(move |l| coeffs.get(k, l))).collect();
        Self::new(n1, n2, generator, scale)
    }

    pub fn len(&self) -> usize {
        self.n1 * self.n2
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn workspace(&self) -> BttbWorkspace {
        let scratch_len = [
            self.row_forward.get_scratch_len(),
            self.row_inverse.get_scratch_len(),
            self.col_forward.get_inplace_scratch_len(),
            self.col_inverse.get_inplace_scratch_len(),
        ]
        .into_iter()
        .max()
        .unwrap_or(0);
        BttbWorkspace {
            real: vec![0.0; 4 * self.n1 * self.n2],
            row: vec![Complex::default(); self.n1 + 1],
            cols: vec![Complex::default(); (self.n1 + 1) * 2 * self.n2],
            scratch: vec![Complex::default(); scratch_len],
        }
    }

    /// `ws.real` (row-major, `2n2` rows of length `2n1`) → `ws.cols`.
    fn forward(&self, ws: &mut BttbWorkspace) -> Result<()> {
        let (m1, m2) = (2 * self.n1, 2 * self.n2);
        for j in 0..m2 {
            let row = &mut ws.real[j * m1..(j + 1) * m1];
            self.row_forward
                .process_with_scratch(row, &mut ws.row, &mut ws.scratch)
                .map_err(|e| Error::Config(format!("fft failure: {e}")))?;
            for (i, c) in ws.row.iter().enumerate() {
                ws.cols[i * m2 + j] = *c;
            }
        }
        self.col_forward.process_with_scratch(&mut ws.cols, &mut ws.scratch);
        Ok(())
    }

    /// `ws.cols` → `ws.real`, unnormalized.
    fn inverse(&self, ws: &mut BttbWorkspace) -> Result<()> {
        let (m1, m2) = (2 * self.n1, 2 * self.n2);
        self.col_inverse.process_with_scratch(&mut ws.cols, &mut ws.scratch);
        for j in 0..m2 {
            for (i, c) in ws.row.iter_mut().enumerate() {
                *c = ws.cols[i * m2 + j];
            }
            ws.row[0].im = 0.0;
            ws.row[self.n1].im = 0.0;
            let row = &mut ws.real[j * m1..(j + 1) * m1];
            self.row_inverse
                .process_with_scratch(&mut ws.row, row, &mut ws.scratch)
                .map_err(|e| Error::Config(format!("fft failure: {e}")))?;
        }
        Ok(())
    }

    pub fn apply(&self, x: &[f64], y: &mut [f64], ws: &mut BttbWorkspace) -> Result<()> {
        let (n1, n2) = (self.n1, self.n2);
        check_len(n1 * n2, x.len())?;
        check_len(n1 * n2, y.len())?;
        let m1 = 2 * n1;
        ws.real.fill(0.0);
        for j in 0..n2 {
            ws.real[j * m1..j * m1 + n1].copy_from_slice(&x[j * n1..(j + 1) * n1]);
        }
        self.forward(ws)?;
        for (c, &s) in ws.cols.iter_mut().zip(&self.symbol) {
            *c *= s;
        }
        self.inverse(ws)?;
        let norm = self.scale / (4 * n1 * n2) as f64;
        for j in 0..n2 {
            for i in 0..n1 {
                y[j * n1 + i] = norm * ws.real[j * m1 + i];
            }
        }
        Ok(())
    }

    pub fn matvec(&self, x: &[f64]) -> Result<Vec<f64>> {
        let mut y = vec![0.0; self.len()];
        self.apply(x, &mut y, &mut self.workspace())?;
        Ok(y)
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let (n1, n2) = (self.n1, self.n2);
        DMatrix::from_fn(n1 * n2, n1 * n2, |r, c| {
            let (i, j) = (r % n1, r / n1);
            let (ip, jp) = (c % n1, c / n1);
            self.scale * self.generator[i.abs_diff(ip) * n2 + j.abs_diff(jp)]
        })
    }
}

/// Either structured operator, with a matching workspace type.
#[derive(Debug, Clone)]
pub enum StructuredOperator {
    Toeplitz(ToeplitzOperator),
    Bttb(BTTBOperator),
}

#[derive(Debug, Clone)]
pub enum Workspace {
    Toeplitz(ToeplitzWorkspace),
    Bttb(BttbWorkspace),
}

impl StructuredOperator {
    pub fn len(&self) -> usize {
        match self {
            StructuredOperator::Toeplitz(t) => t.n,
            StructuredOperator::Bttb(b) => b.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn scale(&self) -> f64 {
        match self {
            StructuredOperator::Toeplitz(t) => t.scale,
            StructuredOperator::Bttb(b) => b.scale,
        }
    }

    pub fn workspace(&self) -> Workspace {
        match self {
            StructuredOperator::Toeplitz(t) => Workspace::Toeplitz(t.workspace()),
            StructuredOperator::Bttb(b) => Workspace::Bttb(b.workspace()),
        }
    }

    pub fn apply(&self, x: &[f64], y: &mut [f64], ws: &mut Workspace) -> Result<()> {
        match (self, ws) {
            (StructuredOperator::Toeplitz(t), Workspace::Toeplitz(w)) => t.apply(x, y, w),
            (StructuredOperator::Bttb(b), Workspace::Bttb(w)) => b.apply(x, y, w),
            _ => Err(Error::Mismatch("workspace does not belong to this operator".into())),
        }
    }

    /// `rhs − A x`; 1D operators within [`DIRECT_RESIDUAL_CAP`] use
    /// [`ToeplitzOperator::residual_direct`], everything else the FFT product.
    pub fn residual(&self, x: &[f64], rhs: &[f64], ws: &mut Workspace) -> Result<Vec<f64>> {
        if let StructuredOperator::Toeplitz(t) = self {
            if t.n.saturating_mul(t.offsets.len()) <= DIRECT_RESIDUAL_CAP {
                return t.residual_direct(x, rhs);
            }
        }
        let mut ax = vec![0.0; x.len()];
        self.apply(x, &mut ax, ws)?;
        Ok(rhs.iter().zip(&ax).map(|(b, a)| b - a).collect())
    }

    pub fn matvec(&self, x: &[f64]) -> Result<Vec<f64>> {
        match self {
            StructuredOperator::Toeplitz(t) => t.matvec(x),
            StructuredOperator::Bttb(b) => b.matvec(x),
        }
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        match self {
            StructuredOperator::Toeplitz(t) => t.to_dense(),
            StructuredOperator::Bttb(b) => b.to_dense(),
        }
    }
}

/// Coefficients of either dimension.
#[derive(Debug, Clone, PartialEq)]
pub enum StencilCoefficients {
    OneD(StencilCoefficients1D),
    TwoD(StencilCoefficients2D),
}

/// Explicit interior matrix of the scheme with `scale` folded in, assembled
/// entry by entry (no FFT); interior size is capped at [`DENSE_CAP`].
pub fn dense_assemble(coeffs: &StencilCoefficients, grid: &Grid, scale: f64) -> Result<DMatrix<f64>> {
    let m = grid.interior_len();
    if m > DENSE_CAP {
        return Err(Error::SizeCap { cap: DENSE_CAP, requested: m });
    }
    match coeffs {
        StencilCoefficients::OneD(c) => {
            if grid.dim() != 1 || c.a.len() < m {
                return Err(Error::Mismatch("1D coefficients do not fit the grid".into()));
            }
            Ok(DMatrix::from_fn(m, m, |i, j| scale * c.a[i.abs_diff(j)]))
        }
        StencilCoefficients::TwoD(c) => {
            if grid.dim() != 2 {
                return Err(Error::Mismatch("2D coefficients need a 2D grid".into()));
            }
            let n1 = grid.n[0] - 1;
            Ok(DMatrix::from_fn(m, m, |r, s| {
                let (i, j) = (r % n1, r / n1);
                let (ip, jp) = (s % n1, s / n1);
                scale * c.get(i.abs_diff(ip), j.abs_diff(jp))
            }))
        }
    }
}
