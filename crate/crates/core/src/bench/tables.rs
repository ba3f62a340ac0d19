//! Run definitions for the published convergence tables.

use crate::error::{domain, Result};
use crate::solver::SolveOptions;

use super::cases::{benchmark, compact_power, gaussian_2d, runge, TestCase};
use super::study::{dyadic, operator_error_study, poisson_convergence_study, ConvergenceRow};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StudyKind {
    Operator,
    Poisson,
}

/// One row block of a table: a case, a basis degree and the mesh sizes.
#[derive(Debug, Clone)]
pub struct TableRun {
    pub table: u32,
    pub case: TestCase,
    pub p: usize,
    pub kind: StudyKind,
    pub h_list: Vec<f64>,
}

impl TableRun {
    pub fn label(&self) -> String {
        format!("table {} alpha={} p={} case={}", self.table, self.case.alpha, self.p, self.case.name)
    }

    pub fn run(&self, opts: &SolveOptions) -> Result<Vec<ConvergenceRow>> {
        match self.kind {
            StudyKind::Operator => operator_error_study(&self.case, self.p, 2.0, &self.h_list, &[vec![0.0]]),
            StudyKind::Poisson => poisson_convergence_study(&self.case, self.p, 2.0, &self.h_list, opts),
        }
    }
}

/// Default mesh sizes of table `n`.
pub fn default_h_list(n: u32) -> Result<Vec<f64>> {
    match n {
        1 | 2 | 4 => Ok(dyadic(1.0 / 16.0, 1.0 / 512.0)),
        3 => Ok(dyadic(1.0 / 16.0, 1.0 / 256.0)),
        5 => Ok(dyadic(1.0 / 4.0, 1.0 / 64.0)),
        _ => domain(format!("tables are numbered 1 to 5, got {n}")),
    }
}

/// All runs of table `n`, optionally with a different list of mesh sizes.
pub fn table_runs(n: u32, h_list: Option<Vec<f64>>) -> Result<Vec<TableRun>> {
    let h_list = match h_list {
        Some(h) => h,
        None => default_h_list(n)?,
    };
    let mut runs = Vec::new();
    let mut push = |case: TestCase, p: usize, kind: StudyKind| {
        runs.push(TableRun { table: n, case, p, kind, h_list: h_list.clone() });
    };
    match n {
        1..=3 => {
            for alpha in [0.5, 1.0, 1.7] {
                for p in 0..=2 {
                    let case = match n {
                        1 => compact_power(alpha, 1.0 + alpha.floor())?,
                        2 => compact_power(alpha, 2.1 + alpha)?,
                        _ => runge(alpha)?,
                    };
                    push(case, p, StudyKind::Operator);
                }
            }
        }
        4 => {
            for alpha in [0.6, 1.0, 1.5] {
                for p in 0..=2 {
                    push(benchmark(alpha)?, p, StudyKind::Poisson);
                }
            }
        }
        5 => {
            for alpha in [0.2, 0.7, 1.0, 1.4, 1.9] {
                push(gaussian_2d(alpha)?, 1, StudyKind::Poisson);
            }
        }
        _ => return domain(format!("tables are numbered 1 to 5, got {n}")),
    }
    Ok(runs)
}
