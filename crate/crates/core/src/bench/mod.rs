//! Test-case catalog, convergence studies and CSV output.

pub mod cases;
pub mod output;
pub mod study;
pub mod tables;

pub use cases::{case_by_name, TestCase};
pub use output::{emit_csv, emit_csv_with, emit_error_field, emit_keyed_csv};
pub use study::{
    gamma_sensitivity_study, operator_error_study, poisson_convergence_study, tempered_study, ConvergenceRow,
};
