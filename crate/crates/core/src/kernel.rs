//! Kernel, grid and field types shared by every stage of the scheme, plus the
//! two factors `Φ` and `μ` of the factorized integrand.

use std::fmt;
use std::sync::Arc;

use crate::error::{domain, Error, Result};
use crate::specfun::normalization_constant;

/// Radial kernel multiplying `|ξ|^{−(d+α)}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelFamily {
    /// `K ≡ 1`: the fractional Laplacian.
    Power,
    /// `K(r) = e^{−λr}`: the tempered fractional Laplacian.
    Tempered { lambda: f64 },
}

impl KernelFamily {
    pub fn lambda(&self) -> f64 {
        match *self {
            KernelFamily::Power => 0.0,
            KernelFamily::Tempered { lambda } => lambda,
        }
    }

    #[inline]
    pub fn eval(&self, r: f64) -> f64 {
        match *self {
            KernelFamily::Power => 1.0,
            KernelFamily::Tempered { lambda } => (-lambda * r).exp(),
        }
    }

    /// True when the kernel is identically one.
    pub fn is_unit(&self) -> bool {
        self.lambda() == 0.0
    }
}

/// Operator parameters: dimension, exponent, splitting parameter, kernel and
/// normalization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelSpec {
    pub d: usize,
    pub alpha: f64,
    pub gamma: f64,
    pub family: KernelFamily,
    /// Normalization constant multiplying the integral.
    pub c: f64,
}

impl KernelSpec {
    /// Fractional Laplacian with `c = c_{d,α}`.
    pub fn power(d: usize, alpha: f64, gamma: f64) -> Result<Self> {
        let c = normalization_constant(d, alpha)?;
        Self::new(d, alpha, gamma, KernelFamily::Power, c)
    }

    /// Tempered kernel `e^{−λr}`. The normalization defaults to `c_{d,α}`;
    /// use [`KernelSpec::with_normalization`] to override it.
    pub fn tempered(d: usize, alpha: f64, gamma: f64, lambda: f64) -> Result<Self> {
        let c = normalization_constant(d, alpha)?;
        Self::new(d, alpha, gamma, KernelFamily::Tempered { lambda }, c)
    }

    pub fn new(d: usize, alpha: f64, gamma: f64, family: KernelFamily, c: f64) -> Result<Self> {
        if !(d == 1 || d == 2) {
            return domain(format!("dimension must be 1 or 2, got {d}"));
        }
        if !(alpha > 0.0 && alpha < 2.0) {
            return domain(format!("alpha must lie in (0, 2), got {alpha}"));
        }
        if !(gamma > alpha && gamma <= 2.0) {
            return domain(format!("splitting parameter must lie in (alpha, 2] = ({alpha}, 2], got {gamma}"));
        }
        if let KernelFamily::Tempered { lambda } = family {
            if !(lambda >= 0.0 && lambda.is_finite()) {
                return domain(format!("tempering parameter must be >= 0, got {lambda}"));
            }
        }
        if !c.is_finite() {
            return domain("normalization constant must be finite");
        }
        Ok(KernelSpec { d, alpha, gamma, family, c })
    }

    pub fn with_normalization(mut self, c: f64) -> Self {
        self.c = c;
        self
    }

    /// `σ₀ = γ − α`, the exponent of the weight `ξ^{σ₀−1}` after
    /// integrating out angles.
    pub fn sigma0(&self) -> f64 {
        self.gamma - self.alpha
    }

    /// `ζ = ⌊γ/2⌋`: one exactly when `γ = 2`.
    pub fn zeta(&self) -> u32 {
        (self.gamma / 2.0).floor() as u32
    }
}

/// Uniform tensor grid on the box `Ω = Π (a_i, b_i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    /// Subdivisions per axis; nodes `0..=n[i]`, interior nodes `1..n[i]`.
    pub n: Vec<usize>,
    pub h: f64,
    /// Side of the box `Υ = [0, L]^d` covered by the weight tables; a multiple
    /// of `h` no smaller than any side of `Ω`.
    pub l: f64,
}

impl Grid {
    /// `Ω = (a, b)` split into `n` cells.
    pub fn new_1d(a: f64, b: f64, n: usize) -> Result<Self> {
        if !(b > a) || n < 2 {
            return domain(format!("need b > a and n >= 2, got ({a}, {b}), n = {n}"));
        }
        let h = (b - a) / n as f64;
        Ok(Grid { a: vec![a], b: vec![b], n: vec![n], h, l: b - a })
    }

    /// 1D grid from a mesh size; `(b − a)/h` must be an integer.
    pub fn from_h_1d(a: f64, b: f64, h: f64) -> Result<Self> {
        let n = integer_ratio(b - a, h)?;
        Self::new_1d(a, b, n)
    }

    /// `Ω = (a₁, b₁) × (a₂, b₂)` with `h = (b₁ − a₁)/n1`; the second axis uses
    /// the smallest `n2` with `a₂ + n2·h ≥ b₂`.
    pub fn new_2d(a: [f64; 2], b: [f64; 2], n1: usize) -> Result<Self> {
        if !(b[0] > a[0] && b[1] > a[1]) || n1 < 2 {
            return domain("need a non-empty box and n1 >= 2");
        }
        let h = (b[0] - a[0]) / n1 as f64;
        let ratio = (b[1] - a[1]) / h;
        let mut n2 = ratio.round() as usize;
        if (ratio - n2 as f64).abs() > 1e-10 * ratio.max(1.0) {
            n2 = ratio.ceil() as usize;
        }
        let n2 = n2.max(2);
        let l = n1.max(n2) as f64 * h;
        Ok(Grid { a: a.to_vec(), b: b.to_vec(), n: vec![n1, n2], h, l })
    }

    pub fn from_h_2d(a: [f64; 2], b: [f64; 2], h: f64) -> Result<Self> {
        let n1 = integer_ratio(b[0] - a[0], h)?;
        Self::new_2d(a, b, n1)
    }

    pub fn dim(&self) -> usize {
        self.n.len()
    }

    /// Number of subdivisions spanned by `Υ`, i.e. the weight table extent.
    pub fn n_weights(&self) -> usize {
        *self.n.iter().max().expect("grid has at least one axis")
    }

    /// Interior node count per axis.
    pub fn interior_shape(&self) -> Vec<usize> {
        self.n.iter().map(|&n| n - 1).collect()
    }

    pub fn interior_len(&self) -> usize {
        self.n.iter().map(|&n| n - 1).product()
    }

    /// Coordinate of lattice index `i` (may lie outside `0..=n`) on `axis`.
    #[inline]
    pub fn coord(&self, axis: usize, i: i64) -> f64 {
        self.a[axis] + i as f64 * self.h
    }

    /// True when lattice index `idx` is an interior node.
    pub fn is_interior(&self, idx: &[i64]) -> bool {
        idx.iter().zip(&self.n).all(|(&i, &n)| i >= 1 && i < n as i64)
    }

    /// Interior nodes in storage order (first axis fastest).
    pub fn interior_points(&self) -> Vec<Vec<f64>> {
        match self.dim() {
            1 => (1..self.n[0]).map(|i| vec![self.coord(0, i as i64)]).collect(),
            _ => {
                let mut pts = Vec::with_capacity(self.interior_len());
                for j in 1..self.n[1] {
                    for i in 1..self.n[0] {
                        pts.push(vec![self.coord(0, i as i64), self.coord(1, j as i64)]);
                    }
                }
                pts
            }
        }
    }
}

fn integer_ratio(len: f64, h: f64) -> Result<usize> {
    if !(h > 0.0) {
        return domain(format!("mesh size must be positive, got {h}"));
    }
    let r = len / h;
    let n = r.round();
    if (r - n).abs() > 1e-9 * r.max(1.0) {
        return domain(format!("domain length {len} is not a multiple of h = {h}"));
    }
    Ok(n as usize)
}

/// Where a [`FieldFn`] may be evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldDomain {
    /// Only inside `Ω` (a right-hand side or an interior solution).
    Interior,
    /// On all of `ℝ^d` (exterior data, or a globally defined function).
    Everywhere,
}

/// A scalar field `ℝ^d → ℝ`.
///
/// Exterior data `g` must be integrable against `|ξ|^{−(d+α)}` at infinity;
/// the tail quadratures report non-convergence otherwise but cannot detect
/// every slowly decaying function.
#[derive(Clone)]
pub struct FieldFn {
    f: Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>,
    pub domain: FieldDomain,
    zero: bool,
}

impl FieldFn {
    pub fn new<F>(domain: FieldDomain, f: F) -> Self
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        FieldFn { f: Arc::new(f), domain, zero: false }
    }

    /// Globally defined field.
    pub fn everywhere<F>(f: F) -> Self
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        Self::new(FieldDomain::Everywhere, f)
    }

    /// Convenience for 1D closures.
    pub fn everywhere_1d<F>(f: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self::new(FieldDomain::Everywhere, move |x: &[f64]| f(x[0]))
    }

    pub fn interior_1d<F>(f: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self::new(FieldDomain::Interior, move |x: &[f64]| f(x[0]))
    }

    /// The zero field. Boundary assembly skips all quadrature for it.
    pub fn zero() -> Self {
        FieldFn { f: Arc::new(|_| 0.0), domain: FieldDomain::Everywhere, zero: true }
    }

    pub fn constant(c: f64) -> Self {
        if c == 0.0 {
            return Self::zero();
        }
        Self::everywhere(move |_| c)
    }

    pub fn is_zero(&self) -> bool {
        self.zero
    }

    #[inline]
    pub fn eval(&self, x: &[f64]) -> f64 {
        (self.f)(x)
    }

    #[inline]
    pub fn eval1(&self, x: f64) -> f64 {
        (self.f)(&[x])
    }

    pub fn add(&self, other: &FieldFn) -> FieldFn {
        match (self.zero, other.zero) {
            (true, _) => other.clone(),
            (_, true) => self.clone(),
            _ => {
                let (f, g) = (self.f.clone(), other.f.clone());
                let domain = if self.domain == FieldDomain::Everywhere && other.domain == FieldDomain::Everywhere {
                    FieldDomain::Everywhere
                } else {
                    FieldDomain::Interior
                };
                FieldFn { f: Arc::new(move |x| f(x) + g(x)), domain, zero: false }
            }
        }
    }
}

impl fmt::Debug for FieldFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldFn")
            .field("domain", &self.domain)
            .field("zero", &self.zero)
            .finish_non_exhaustive()
    }
}

/// Central difference quotient
/// `Φ_{d,γ}(x, ξ) = (Σ_{m∈κ₁} u(x + (−1)^m∘ξ) − 2^d u(x)) |ξ|^{−γ}`.
pub fn phi(spec: &KernelSpec, u: &FieldFn, x: &[f64], xi: &[f64]) -> Result<f64> {
    check_point(spec, x, xi)?;
    let norm = xi.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm == 0.0 {
        return domain("phi is only defined for xi != 0");
    }
    let d = spec.d;
    let mut y = x.to_vec();
    let mut sum = 0.0;
    for mask in 0..(1usize << d) {
        for axis in 0..d {
            let sign = if mask >> axis & 1 == 1 { -1.0 } else { 1.0 };
            y[axis] = x[axis] + sign * xi[axis];
        }
        sum += u.eval(&y);
    }
    sum -= (1usize << d) as f64 * u.eval(x);
    Ok(sum * norm.powf(-spec.gamma))
}

/// `μ(ξ) = K(|ξ|) |ξ|^{γ−(d+α)}`.
pub fn mu(spec: &KernelSpec, xi: &[f64]) -> Result<f64> {
    if xi.len() != spec.d {
        return Err(Error::SizeMismatch { expected: spec.d, got: xi.len() });
    }
    let r = xi.iter().map(|v| v * v).sum::<f64>().sqrt();
    if r == 0.0 {
        return domain("mu is singular at xi = 0");
    }
    Ok(spec.family.eval(r) * r.powf(spec.gamma - (spec.d as f64 + spec.alpha)))
}

fn check_point(spec: &KernelSpec, x: &[f64], xi: &[f64]) -> Result<()> {
    if x.len() != spec.d {
        return Err(Error::SizeMismatch { expected: spec.d, got: x.len() });
    }
    if xi.len() != spec.d {
        return Err(Error::SizeMismatch { expected: spec.d, got: xi.len() });
    }
    if xi.iter().any(|&v| v < 0.0) {
        return domain("xi must lie in the closed positive orthant");
    }
    Ok(())
}
