//! Operator-factorization discretization of the integral fractional Laplacian
//! `(-Δ)^{α/2}` on boxes in one and two dimensions.
//!
//! The integrand of the hypersingular integral is split into a central
//! difference quotient `Φ` and a power weight `μ`; `Φ` is interpolated in the
//! *distance* variable with Lagrange bases of degree 0, 1 or 2. The resulting
//! differentiation matrix is symmetric Toeplitz (1D) or block-Toeplitz with
//! Toeplitz blocks (2D), so operator application and the conjugate-gradient
//! Poisson solver run on FFT matvecs.
//!
//! Module map:
//!
//! * [`specfun`]: Γ, ₂F₁, ₁F₁ and the normalization constant `c_{d,α}`.
//! * [`kernel`]: kernel/grid/field types and the factorized integrand pieces.
//! * [`weights`]: weight integrals `ω_k^p` / `ω_{kl}^p`.
//! * [`stencil`]: scheme coefficients `a_j` / `a_{kl}`.
//! * [`fastop`]: Toeplitz and BTTB operators with FFT matvec.
//! * [`boundary`]: exterior-data contributions `b_i` / `b_{ij}`.
//! * [`solver`]: operator application and the Dirichlet Poisson solver.
//! * [`bench`]: test-case catalog, convergence studies and CSV output.

pub mod bench;
pub mod boundary;
pub mod error;
pub mod fastop;
pub mod kernel;
pub mod par;
pub mod quadrature;
pub mod solver;
pub mod specfun;
pub mod stencil;
pub mod weights;

pub use error::{Error, Result};
pub use kernel::{FieldDomain, FieldFn, Grid, KernelFamily, KernelSpec};
pub use par::Execution;
