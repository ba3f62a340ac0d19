//! Weight integrals of the Lagrange basis against the singular weight:
//!
//! * 1D: `ω_k^p = ∫_0^L φ_k^p(ξ) K(ξ) ξ^{γ−1−α} dξ`, `k = 0..=N`;
//! * 2D: `ω_{kl}^p = ∬_{[0,L]²} φ_k^p(ξ₁) φ_l^p(ξ₂) K(|ξ|) |ξ|^{γ−2−α} dξ`.
//!
//! For the pure power kernel the 1D integrals have closed forms; everything
//! else goes through Gauss–Legendre quadrature with a singularity-aware
//! treatment of the element that touches the origin.

use std::collections::HashMap;
use std::f64::consts::FRAC_PI_4;
use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{domain, Error, Result};
use crate::kernel::{KernelFamily, KernelSpec};
use crate::par::{self, Execution};
use crate::quadrature::{adaptive, gl16, singular_origin};

/// How a table was obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Provenance {
    Analytic,
    Quadrature { tol: f64 },
    /// Reloaded from a cache file.
    Loaded,
}

/// `ω_k^p` for `k = 0..=N`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightTable1D {
    pub p: usize,
    pub alpha: f64,
    pub gamma: f64,
    pub lambda: f64,
    pub h: f64,
    pub values: Vec<f64>,
    /// `(σ₀, σ₁, σ₂) = (γ−α, γ−α+1, γ−α+2)`.
    pub sigma: [f64; 3],
    pub provenance: Provenance,
}

impl WeightTable1D {
    /// Number of cells `N` (the table holds `N + 1` entries).
    pub fn n(&self) -> usize {
        self.values.len() - 1
    }
}

/// `ω_{kl}^p` for `k, l = 0..=N`, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightTable2D {
    pub p: usize,
    pub alpha: f64,
    pub gamma: f64,
    pub lambda: f64,
    pub h: f64,
    pub n: usize,
    pub values: Vec<f64>,
    pub tol: f64,
}

impl WeightTable2D {
    #[inline]
    pub fn get(&self, k: usize, l: usize) -> f64 {
        self.values[k * (self.n + 1) + l]
    }
}

fn check_degree(p: usize, n: usize) -> Result<()> {
    match p {
        0 | 1 if n >= 1 => Ok(()),
        2 if n >= 4 && n.is_multiple_of(2) => Ok(()),
        2 => domain(format!("quadratic basis needs an even N >= 4, got N = {n}")),
        0 | 1 => domain("need N >= 1"),
        _ => domain(format!("basis degree must be 0, 1 or 2, got {p}")),
    }
}

fn check_exponents(alpha: f64, gamma: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 2.0) {
        return domain(format!("alpha must lie in (0, 2), got {alpha}"));
    }
    if !(gamma > alpha && gamma <= 2.0) {
        return domain(format!(
            "splitting parameter must satisfy alpha < gamma <= 2 (gamma - alpha = {} makes the k = 0 weight divergent)",
            gamma - alpha
        ));
    }
    Ok(())
}

/// One polynomial piece of a Lagrange basis function.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Shape {
    One,
    /// `slope · (ξ − root)`
    Linear { root: f64, slope: f64 },
    /// `scale · (ξ − r1)(ξ − r2)`
    Quadratic { r1: f64, r2: f64, scale: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Piece {
    lo: f64,
    hi: f64,
    shape: Shape,
}

impl Piece {
    #[inline]
    fn eval(&self, x: f64) -> f64 {
        match self.shape {
            Shape::One => 1.0,
            Shape::Linear { root, slope } => slope * (x - root),
            Shape::Quadratic { r1, r2, scale } => scale * (x - r1) * (x - r2),
        }
    }
}

/// Polynomial pieces of `φ_k^p` restricted to `[0, N h]`.
fn basis_pieces(p: usize, k: usize, n: usize, h: f64) -> Vec<Piece> {
    let x = |j: f64| j * h;
    let kf = k as f64;
    let l = n as f64 * h;
    match p {
        0 => vec![Piece {
            lo: x(kf - 0.5).max(0.0),
            hi: x(kf + 0.5).min(l),
            shape: Shape::One,
        }],
        1 => {
            let mut v = Vec::with_capacity(2);
            if k >= 1 {
                v.push(Piece {
                    lo: x(kf - 1.0),
                    hi: x(kf),
                    shape: Shape::Linear { root: x(kf - 1.0), slope: 1.0 / h },
                });
            }
            if k < n {
                v.push(Piece {
                    lo: x(kf),
                    hi: x(kf + 1.0),
                    shape: Shape::Linear { root: x(kf + 1.0), slope: -1.0 / h },
                });
            }
            v
        }
        2 => {
            let mut v = Vec::with_capacity(2);
            if k % 2 == 1 {
                v.push(Piece {
                    lo: x(kf - 1.0),
                    hi: x(kf + 1.0),
                    shape: Shape::Quadratic { r1: x(kf - 1.0), r2: x(kf + 1.0), scale: -1.0 / (h * h) },
                });
            } else {
                let scale = 0.5 / (h * h);
                if k >= 2 {
                    v.push(Piece {
                        lo: x(kf - 2.0),
                        hi: x(kf),
                        shape: Shape::Quadratic { r1: x(kf - 2.0), r2: x(kf - 1.0), scale },
                    });
                }
                if k + 2 <= n {
                    v.push(Piece {
                        lo: x(kf),
                        hi: x(kf + 2.0),
                        shape: Shape::Quadratic { r1: x(kf + 1.0), r2: x(kf + 2.0), scale },
                    });
                }
            }
            v
        }
        _ => unreachable!("degree checked by caller"),
    }
}

/// Elements starting at or beyond this node index use the series form; the
/// closed form loses about `k²` ulps to cancellation at node `k`.
const SERIES_ELEMENT_START: f64 = 3.0;

/// `∫_{−h}^{h} (v + d₁)(v + d₂) (c + v)^{σ−1} dv` by the binomial series of
/// `(1 + v/c)^{σ−1}`; needs `h/c ≤ 1/4`.
fn quadratic_element_series(c: f64, h: f64, d1: f64, d2: f64, sigma: f64) -> f64 {
    // ∫_{−h}^{h} v^m dv
    let moment = |m: i32| if m % 2 == 1 { 0.0 } else { 2.0 * h.powi(m + 1) / f64::from(m + 1) };
    let (lin, cst) = (d1 + d2, d1 * d2);
    let mut binom = 1.0;
    let mut sum = 0.0;
    for j in 0..200 {
        let jf = f64::from(j);
        let term = binom * c.powi(-j) * (moment(j + 2) + lin * moment(j + 1) + cst * moment(j));
        sum += term;
        // odd moments vanish, so test the size of the next even-order factor
        if j >= 2 && (binom * (h / c).powi(j)).abs() * h.powi(3) <= 1e-18 * sum.abs() {
            break;
        }
        binom *= (sigma - 1.0 - jf) / (jf + 1.0);
    }
    c.powf(sigma - 1.0) * sum
}

/// Closed-form `ω_k^p` for the power kernel, `p ∈ {0, 1, 2}`.
pub fn weights_1d_analytic(p: usize, alpha: f64, gamma: f64, n: usize, h: f64) -> Result<WeightTable1D> {
    check_exponents(alpha, gamma)?;
    check_degree(p, n)?;
    if !(h > 0.0) {
        return domain(format!("mesh size must be positive, got {h}"));
    }
    let s0 = gamma - alpha;
    let s1 = s0 + 1.0;
    let s2 = s0 + 2.0;
    let xi = |j: f64| j * h;
    // ξ_j^σ
    let pw = |j: f64, s: f64| xi(j).powf(s);
    // ξ_i^σ − ξ_j^σ without cancellation for neighbouring nodes
    let diff = |i: f64, j: f64, s: f64| {
        if j == 0.0 {
            pw(i, s)
        } else {
            pw(j, s) * (s * ((i - j) / j).ln_1p()).exp_m1()
        }
    };
    let nf = n as f64;
    let mut values = vec![0.0; n + 1];
    for (k, w) in values.iter_mut().enumerate() {
        let kf = k as f64;
        *w = match p {
            0 => {
                if k == 0 {
                    pw(0.5, s0) / s0
                } else if k == n {
                    diff(nf, nf - 0.5, s0) / s0
                } else {
                    diff(kf + 0.5, kf - 0.5, s0) / s0
                }
            }
            1 => {
                let pre = 1.0 / (h * s1 * s0);
                if k == 0 {
                    pre * h.powf(s1)
                } else if k == n {
                    pre * (s1 * h * pw(nf, s0) - diff(nf, nf - 1.0, s1))
                } else {
                    pre * (diff(kf + 1.0, kf, s1) - diff(kf, kf - 1.0, s1))
                }
            }
            _ => {
                let pre = 0.5 / (h * h);
                // ∫_{ξ_lo}^{ξ_hi} (ξ − ξ_r1)(ξ − ξ_r2) ξ^{σ₀−1} dξ over a two-cell element
                let element = |lo: f64, hi: f64, r1: f64, r2: f64| {
                    if lo >= SERIES_ELEMENT_START {
                        quadratic_element_series(xi(lo + 1.0), h, xi(lo + 1.0) - xi(r1), xi(lo + 1.0) - xi(r2), s0)
                    } else {
                        diff(hi, lo, s2) / s2 - (xi(r1) + xi(r2)) * diff(hi, lo, s1) / s1
                            + xi(r1) * xi(r2) * diff(hi, lo, s0) / s0
                    }
                };
                if k == 0 {
                    pre * element(0.0, 2.0, 1.0, 2.0)
                } else if k == n {
                    pre * element(nf - 2.0, nf, nf - 2.0, nf - 1.0)
                } else if k % 2 == 1 {
                    -2.0 * pre * element(kf - 1.0, kf + 1.0, kf - 1.0, kf + 1.0)
                } else {
                    pre * (element(kf - 2.0, kf, kf - 2.0, kf - 1.0) + element(kf, kf + 2.0, kf + 1.0, kf + 2.0))
                }
            }
        };
    }
    Ok(WeightTable1D {
        p,
        alpha,
        gamma,
        lambda: 0.0,
        h,
        values,
        sigma: [s0, s1, s2],
        provenance: Provenance::Analytic,
    })
}

/// `ω_k^p` by quadrature for any radial kernel (`spec.d` must be 1).
pub fn weights_1d_quadrature(spec: &KernelSpec, p: usize, n: usize, h: f64, tol: f64) -> Result<WeightTable1D> {
    weights_1d_quadrature_with(spec, p, n, h, tol, Execution::available())
}

pub fn weights_1d_quadrature_with(
    spec: &KernelSpec,
    p: usize,
    n: usize,
    h: f64,
    tol: f64,
    exec: Execution,
) -> Result<WeightTable1D> {
    if spec.d != 1 {
        return Err(Error::Mismatch(format!("1D weights requested for d = {}", spec.d)));
    }
    check_exponents(spec.alpha, spec.gamma)?;
    check_degree(p, n)?;
    let s0 = spec.sigma0();
    let family = spec.family;
    let values = par::try_map(exec, n + 1, |k| {
        let mut w = 0.0;
        for piece in basis_pieces(p, k, n, h) {
            w += piece_integral_1d(&piece, family, s0, tol)?;
        }
        Ok::<f64, Error>(w)
    })?;
    Ok(WeightTable1D {
        p,
        alpha: spec.alpha,
        gamma: spec.gamma,
        lambda: family.lambda(),
        h,
        values,
        sigma: [s0, s0 + 1.0, s0 + 2.0],
        provenance: Provenance::Quadrature { tol },
    })
}

fn piece_integral_1d(piece: &Piece, family: KernelFamily, s0: f64, tol: f64) -> Result<f64> {
    let f = |x: f64| piece.eval(x) * family.eval(x);
    if piece.lo == 0.0 {
        singular_origin(f, piece.hi, s0, tol)
    } else {
        Ok(gl16().integrate(piece.lo, piece.hi, |x| f(x) * x.powf(s0 - 1.0)))
    }
}

/// `ω_{kl}^p` by quadrature (`spec.d` must be 2).
pub fn weights_2d_quadrature(spec: &KernelSpec, p: usize, n: usize, h: f64, tol: f64) -> Result<WeightTable2D> {
    weights_2d_quadrature_with(spec, p, n, h, tol, Execution::available())
}

pub fn weights_2d_quadrature_with(
    spec: &KernelSpec,
    p: usize,
    n: usize,
    h: f64,
    tol: f64,
    exec: Execution,
) -> Result<WeightTable2D> {
    if spec.d != 2 {
        return Err(Error::Mismatch(format!("2D weights requested for d = {}", spec.d)));
    }
    check_exponents(spec.alpha, spec.gamma)?;
    check_degree(p, n)?;
    let pieces: Vec<Vec<Piece>> = (0..=n).map(|k| basis_pieces(p, k, n, h)).collect();
    let family = spec.family;
    let beta = spec.gamma - 2.0 - spec.alpha;
    let s0 = spec.sigma0();
    // upper triangle k <= l, then mirror
    let pairs: Vec<(usize, usize)> = (0..=n).flat_map(|k| (k..=n).map(move |l| (k, l))).collect();
    let upper = par::try_map(exec, pairs.len(), |idx| {
        let (k, l) = pairs[idx];
        let mut w = 0.0;
        for pk in &pieces[k] {
            for pl in &pieces[l] {
                w += cell_integral_2d(pk, pl, family, beta, s0, tol)?;
            }
        }
        Ok::<f64, Error>(w)
    })?;
    let mut values = vec![0.0; (n + 1) * (n + 1)];
    for (&(k, l), &w) in pairs.iter().zip(&upper) {
        values[k * (n + 1) + l] = w;
        values[l * (n + 1) + k] = w;
    }
    Ok(WeightTable2D {
        p,
        alpha: spec.alpha,
        gamma: spec.gamma,
        lambda: family.lambda(),
        h,
        n,
        values,
        tol,
    })
}

fn cell_integral_2d(px: &Piece, py: &Piece, family: KernelFamily, beta: f64, s0: f64, tol: f64) -> Result<f64> {
    if px.lo == 0.0 && py.lo == 0.0 {
        return origin_cell(px, py, family, s0, tol);
    }
    let rule = gl16();
    Ok(rule.integrate(px.lo, px.hi, |x| {
        let fx = px.eval(x);
        rule.integrate(py.lo, py.hi, |y| {
            let r = (x * x + y * y).sqrt();
            fx * py.eval(y) * family.eval(r) * r.powf(beta)
        })
    }))
}

/// Element `[0, s]²` at the origin, in polar coordinates: the radial factor
/// `r^{β+1} = r^{σ₀−1}` is integrated exactly by [`singular_origin`], the two
/// angular halves split along the diagonal are smooth.
fn origin_cell(px: &Piece, py: &Piece, family: KernelFamily, s0: f64, tol: f64) -> Result<f64> {
    let s = px.hi;
    debug_assert!((py.hi - s).abs() <= 1e-12 * s, "origin element must be square");
    let radial = |theta: f64, rmax: f64| {
        let (sn, cs) = theta.sin_cos();
        singular_origin(|r| px.eval(r * cs) * py.eval(r * sn) * family.eval(r), rmax, s0, 0.1 * tol)
    };
    let mut err = None;
    let mut half = |lo: f64, hi: f64, lower: bool| {
        adaptive(
            |theta| {
                let rmax = if lower { s / theta.cos() } else { s / theta.sin() };
                radial(theta, rmax).unwrap_or_else(|e| {
                    err.get_or_insert(e);
                    0.0
                })
            },
            lo,
            hi,
            0.5 * tol,
        )
    };
    let lower = half(0.0, FRAC_PI_4, true)?;
    let upper = half(FRAC_PI_4, 2.0 * FRAC_PI_4, false)?;
    if let Some(e) = err {
        return Err(e);
    }
    Ok(lower + upper)
}

/// Little-endian header of a weight cache file: `d, p, α, γ, λ, N, h`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TableHeader {
    pub d: u64,
    pub p: u64,
    pub alpha: f64,
    pub gamma: f64,
    pub lambda: f64,
    pub n: u64,
    pub h: f64,
}

impl TableHeader {
    fn value_count(&self) -> usize {
        let m = self.n as usize + 1;
        if self.d == 1 {
            m
        } else {
            m * m
        }
    }
}

/// Write a header followed by the raw `f64` values (little-endian).
pub fn write_table_file(path: impl AsRef<Path>, header: &TableHeader, values: &[f64]) -> Result<()> {
    if values.len() != header.value_count() {
        return Err(Error::SizeMismatch { expected: header.value_count(), got: values.len() });
    }
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(&header.d.to_le_bytes())?;
    w.write_all(&header.p.to_le_bytes())?;
    w.write_all(&header.alpha.to_le_bytes())?;
    w.write_all(&header.gamma.to_le_bytes())?;
    w.write_all(&header.lambda.to_le_bytes())?;
    w.write_all(&header.n.to_le_bytes())?;
    w.write_all(&header.h.to_le_bytes())?;
    for v in values {
        w.write_all(&v.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

/// Read a file written by [`write_table_file`].
pub fn read_table_file(path: impl AsRef<Path>) -> Result<(TableHeader, Vec<f64>)> {
    let mut r = BufReader::new(File::open(path)?);
    let mut buf = [0u8; 8];
    let mut next = |r: &mut BufReader<File>| -> Result<[u8; 8]> {
        r.read_exact(&mut buf)?;
        Ok(buf)
    };
    let d = u64::from_le_bytes(next(&mut r)?);
    let p = u64::from_le_bytes(next(&mut r)?);
    let alpha = f64::from_le_bytes(next(&mut r)?);
    let gamma = f64::from_le_bytes(next(&mut r)?);
    let lambda = f64::from_le_bytes(next(&mut r)?);
    let n = u64::from_le_bytes(next(&mut r)?);
    let h = f64::from_le_bytes(next(&mut r)?);
    let header = TableHeader { d, p, alpha, gamma, lambda, n, h };
    if !(d == 1 || d == 2) || n > 1 << 24 {
        return Err(Error::Config(format!("corrupt weight cache header: {header:?}")));
    }
    let mut values = vec![0.0; header.value_count()];
    for v in values.iter_mut() {
        *v = f64::from_le_bytes(next(&mut r)?);
    }
    Ok((header, values))
}

impl WeightTable1D {
    pub fn header(&self) -> TableHeader {
        TableHeader {
            d: 1,
            p: self.p as u64,
            alpha: self.alpha,
            gamma: self.gamma,
            lambda: self.lambda,
            n: self.n() as u64,
            h: self.h,
        }
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        write_table_file(path, &self.header(), &self.values)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let (hd, values) = read_table_file(path)?;
        if hd.d != 1 {
            return Err(Error::Mismatch(format!("expected a 1D table, file holds d = {}", hd.d)));
        }
        let s0 = hd.gamma - hd.alpha;
        Ok(WeightTable1D {
            p: hd.p as usize,
            alpha: hd.alpha,
            gamma: hd.gamma,
            lambda: hd.lambda,
            h: hd.h,
            values,
            sigma: [s0, s0 + 1.0, s0 + 2.0],
            provenance: Provenance::Loaded,
        })
    }
}

impl WeightTable2D {
    pub fn header(&self) -> TableHeader {
        TableHeader {
            d: 2,
            p: self.p as u64,
            alpha: self.alpha,
            gamma: self.gamma,
            lambda: self.lambda,
            n: self.n as u64,
            h: self.h,
        }
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        write_table_file(path, &self.header(), &self.values)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let (hd, values) = read_table_file(path)?;
        if hd.d != 2 {
            return Err(Error::Mismatch(format!("expected a 2D table, file holds d = {}", hd.d)));
        }
        Ok(WeightTable2D {
            p: hd.p as usize,
            alpha: hd.alpha,
            gamma: hd.gamma,
            lambda: hd.lambda,
            h: hd.h,
            n: hd.n as usize,
            values,
            tol: f64::NAN,
        })
    }
}

/// Either kind of table.
#[derive(Debug, Clone, PartialEq)]
pub enum WeightTable {
    OneD(Arc<WeightTable1D>),
    TwoD(Arc<WeightTable2D>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct CacheKey {
    d: usize,
    p: usize,
    alpha: u64,
    gamma: u64,
    lambda: u64,
    n: usize,
    h: u64,
    tol: u64,
}

/// Process-wide memo of weight tables keyed by `(d, p, α, γ, λ, N, h, tol)`.
#[derive(Debug, Default)]
pub struct WeightCache {
    tables: Mutex<HashMap<CacheKey, WeightTable>>,
}

impl WeightCache {
    pub fn global() -> &'static WeightCache {
        static CACHE: OnceLock<WeightCache> = OnceLock::new();
        CACHE.get_or_init(WeightCache::default)
    }

    fn key(spec: &KernelSpec, p: usize, n: usize, h: f64, tol: f64) -> CacheKey {
        CacheKey {
            d: spec.d,
            p,
            alpha: spec.alpha.to_bits(),
            gamma: spec.gamma.to_bits(),
            lambda: spec.family.lambda().to_bits(),
            n,
            h: h.to_bits(),
            tol: tol.to_bits(),
        }
    }

    /// 1D table: analytic for the power kernel, quadrature otherwise.
    pub fn table_1d(&self, spec: &KernelSpec, p: usize, n: usize, h: f64, tol: f64) -> Result<Arc<WeightTable1D>> {
        let key = Self::key(spec, p, n, h, tol);
        if let Some(WeightTable::OneD(t)) = self.tables.lock().expect("weight cache poisoned").get(&key) {
            return Ok(t.clone());
        }
        let table = if spec.family.is_unit() {
            weights_1d_analytic(p, spec.alpha, spec.gamma, n, h)?
        } else {
            weights_1d_quadrature(spec, p, n, h, tol)?
        };
        let table = Arc::new(table);
        self.tables
            .lock()
            .expect("weight cache poisoned")
            .insert(key, WeightTable::OneD(table.clone()));
        Ok(table)
    }

    pub fn table_2d(&self, spec: &KernelSpec, p: usize, n: usize, h: f64, tol: f64) -> Result<Arc<WeightTable2D>> {
        let key = Self::key(spec, p, n, h, tol);
        if let Some(WeightTable::TwoD(t)) = self.tables.lock().expect("weight cache poisoned").get(&key) {
            return Ok(t.clone());
        }
        let table = Arc::new(weights_2d_quadrature(spec, p, n, h, tol)?);
        self.tables
            .lock()
            .expect("weight cache poisoned")
            .insert(key, WeightTable::TwoD(table.clone()));
        Ok(table)
    }

    pub fn len(&self) -> usize {
        self.tables.lock().expect("weight cache poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn clear(&self) {
        self.tables.lock().expect("weight cache poisoned").clear();
    }
}
