use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use fraclap::bench::output::write_table;
use fraclap::bench::study::{default_gamma_list, dyadic, operator_error_study_with};
use fraclap::bench::tables::table_runs;
use fraclap::bench::{
    case_by_name, emit_csv_with, emit_keyed_csv, gamma_sensitivity_study, poisson_convergence_study,
    tempered_study, ConvergenceRow,
};
use fraclap::par::{self, Execution};
use fraclap::solver::SolveOptions;
use fraclap::{Error, Result};

/// Convergence studies for the discrete integral fractional Laplacian.
#[derive(Parser, Debug)]
#[command(name = "fraclap", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Flags,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Operator error study against a closed-form operator.
    Apply,
    /// Fractional Poisson solve study.
    Solve,
    /// Operator error study for several splitting parameters.
    Gamma,
    /// Tempered Poisson study for several tempering parameters.
    Tempered,
    /// Reproduce one published convergence table; `--out` names a directory.
    Table { number: u32 },
}

/// Every flag is optional so a `--config` file can fill the gaps; flags win.
#[derive(Args, Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
struct Flags {
    /// Fractional order in (0, 2).
    #[arg(long, global = true)]
    alpha: Option<f64>,
    /// Basis degree 0, 1 or 2.
    #[arg(long, global = true)]
    p: Option<usize>,
    /// Splitting parameter; for `gamma` a list such as `2,1.5`.
    #[arg(long, global = true)]
    #[serde(deserialize_with = "number_or_text")]
    gamma: Option<String>,
    /// runge, benchmark, compact, table1, table2, tempered or gaussian.
    #[arg(long, global = true)]
    case: Option<String>,
    /// Exponent of the compact family `(1 − x²)₊^s`.
    #[arg(long, global = true)]
    s: Option<f64>,
    /// Tempering parameters, e.g. `0.5,1`.
    #[arg(long, global = true)]
    #[serde(deserialize_with = "number_or_text")]
    lambda: Option<String>,
    /// Mesh sizes: `1/16..1/256` (dyadic), `0.1,0.05` or a single value.
    #[arg(long, global = true)]
    #[serde(deserialize_with = "number_or_text")]
    h: Option<String>,
    /// CSV output file (directory for `table`).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Relative residual tolerance of the Poisson solves.
    #[arg(long, global = true)]
    cg_tol: Option<f64>,
    /// Leave the runtime column empty so CSV output is reproducible.
    #[arg(long, global = true)]
    no_timing: bool,
    /// Run every loop on the calling thread.
    #[arg(long, global = true)]
    sequential: bool,
    /// TOML file whose keys mirror the long flag names.
    #[arg(long, global = true)]
    #[serde(skip)]
    config: Option<PathBuf>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum NumberOrText {
    Number(f64),
    Text(String),
}

fn number_or_text<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Option<String>, D::Error> {
    Ok(Option::<NumberOrText>::deserialize(d)?.map(|v| match v {
        NumberOrText::Number(x) => x.to_string(),
        NumberOrText::Text(s) => s,
    }))
}

impl Flags {
    fn merged_with(self, file: Flags) -> Flags {
        Flags {
            alpha: self.alpha.or(file.alpha),
            p: self.p.or(file.p),
            gamma: self.gamma.or(file.gamma),
            case: self.case.or(file.case),
            s: self.s.or(file.s),
            lambda: self.lambda.or(file.lambda),
            h: self.h.or(file.h),
            out: self.out.or(file.out),
            cg_tol: self.cg_tol.or(file.cg_tol),
            no_timing: self.no_timing || file.no_timing,
            sequential: self.sequential || file.sequential,
            config: self.config,
        }
    }

    fn alpha(&self) -> Result<f64> {
        self.alpha.ok_or_else(|| Error::Config("--alpha is required".into()))
    }

    fn p(&self) -> usize {
        self.p.unwrap_or(1)
    }

    fn h_list(&self, default: &str) -> Result<Vec<f64>> {
        parse_list(self.h.as_deref().unwrap_or(default))
    }

    fn exec(&self) -> Execution {
        if self.sequential {
            Execution::Sequential
        } else {
            Execution::available()
        }
    }

    fn solve_options(&self) -> SolveOptions {
        let mut opts = SolveOptions { exec: self.exec(), ..Default::default() };
        if let Some(tol) = self.cg_tol {
            opts.cg_tol = tol;
        }
        opts
    }
}

fn load_config(path: &Path) -> Result<Flags> {
    let text = std::fs::read_to_string(path)?;
    toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

fn parse_value(s: &str) -> Result<f64> {
    let s = s.trim();
    let bad = || Error::Config(format!("cannot parse '{s}' as a number"));
    let v = match s.split_once('/') {
        Some((n, d)) => {
            n.trim().parse::<f64>().map_err(|_| bad())? / d.trim().parse::<f64>().map_err(|_| bad())?
        }
        None => s.parse::<f64>().map_err(|_| bad())?,
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad())
    }
}

/// `a..b` is the dyadic list from `a` down to `b`; otherwise comma-separated values.
fn parse_list(s: &str) -> Result<Vec<f64>> {
    let v = match s.split_once("..") {
        Some((a, b)) => {
            let (a, b) = (parse_value(a)?, parse_value(b)?);
            if !(a > 0.0 && b > 0.0 && b <= a) {
                return Err(Error::Config(format!("range '{s}' must run from a larger to a smaller positive value")));
            }
            dyadic(a, b)
        }
        None => s.split(',').map(parse_value).collect::<Result<Vec<_>>>()?,
    };
    if v.is_empty() {
        return Err(Error::Config(format!("empty list '{s}'")));
    }
    Ok(v)
}

struct Session {
    flags: Flags,
    stdout: std::io::Stdout,
}

impl Session {
    fn show(&mut self, title: &str, rows: &[ConvergenceRow]) -> Result<()> {
        let mut out = self.stdout.lock();
        write_table(&mut out, title, rows)?;
        writeln!(out)?;
        Ok(())
    }

    fn write_rows(&self, rows: &[ConvergenceRow], path: &Path) -> Result<()> {
        emit_csv_with(rows, path, !self.flags.no_timing)
    }

    fn apply(&mut self) -> Result<()> {
        let f = &self.flags;
        let alpha = f.alpha()?;
        let case = case_by_name(f.case.as_deref().unwrap_or("runge"), alpha, f.s, None)?;
        let gamma = parse_value(f.gamma.as_deref().unwrap_or("2"))?;
        let h_list = f.h_list(if case.dim == 1 { "1/16..1/256" } else { "1/4..1/32" })?;
        let rows = operator_error_study_with(&case, f.p(), gamma, &h_list, &[], f.exec())?;
        let title = format!("apply case={} alpha={alpha} p={} gamma={gamma}", case.name, f.p());
        self.show(&title, &rows)?;
        if let Some(path) = &self.flags.out {
            self.write_rows(&rows, path)?;
        }
        Ok(())
    }

    fn solve(&mut self) -> Result<()> {
        let f = &self.flags;
        let alpha = f.alpha()?;
        let case = case_by_name(f.case.as_deref().unwrap_or("benchmark"), alpha, f.s, None)?;
        let gamma = parse_value(f.gamma.as_deref().unwrap_or("2"))?;
        let h_list = f.h_list(if case.dim == 1 { "1/16..1/512" } else { "1/4..1/32" })?;
        let rows = poisson_convergence_study(&case, f.p(), gamma, &h_list, &f.solve_options())?;
        let title = format!("solve case={} alpha={alpha} p={} gamma={gamma}", case.name, f.p());
        self.show(&title, &rows)?;
        if let Some(path) = &self.flags.out {
            self.write_rows(&rows, path)?;
        }
        Ok(())
    }

    fn gamma(&mut self) -> Result<()> {
        let f = &self.flags;
        let alpha = f.alpha()?;
        let case = case_by_name(f.case.as_deref().unwrap_or("runge"), alpha, f.s, None)?;
        let gammas = match &f.gamma {
            Some(g) => parse_list(g)?,
            None => default_gamma_list(alpha, 0.01),
        };
        let h_list = f.h_list("1/16..1/256")?;
        let table = gamma_sensitivity_study(&case, f.p(), &gammas, &h_list)?;
        for (g, rows) in &table {
            let title = format!("gamma case={} alpha={alpha} p={} gamma={g}", case.name, self.flags.p());
            self.show(&title, rows)?;
        }
        if let Some(path) = &self.flags.out {
            emit_keyed_csv("gamma", &table, path)?;
        }
        Ok(())
    }

    fn tempered(&mut self) -> Result<()> {
        let f = &self.flags;
        let alpha = f.alpha()?;
        let lambdas = parse_list(f.lambda.as_deref().unwrap_or("0.5,1"))?;
        let h_list = f.h_list("1/16..1/256")?;
        let table = tempered_study(alpha, &lambdas, f.p(), &h_list, &f.solve_options())?;
        for (l, rows) in &table {
            let title = format!("tempered alpha={alpha} p={} lambda={l}", self.flags.p());
            self.show(&title, rows)?;
        }
        if let Some(path) = &self.flags.out {
            emit_keyed_csv("lambda", &table, path)?;
        }
        Ok(())
    }

    /// Runs every block of the table; failures are reported and counted.
    fn table(&mut self, number: u32) -> Result<usize> {
        let h_list = self.flags.h.as_deref().map(parse_list).transpose()?;
        let runs = table_runs(number, h_list)?;
        if let Some(dir) = &self.flags.out {
            std::fs::create_dir_all(dir)?;
        }
        let opts = self.flags.solve_options();
        let mut failures = 0;
        for run in &runs {
            match run.run(&opts) {
                Ok(rows) => {
                    self.show(&run.label(), &rows)?;
                    if let Some(dir) = &self.flags.out {
                        let name = format!("table{}_alpha{}_p{}.csv", run.table, run.case.alpha, run.p);
                        self.write_rows(&rows, &dir.join(name))?;
                    }
                }
                Err(e) => {
                    failures += 1;
                    eprintln!("{}: {e}", run.label());
                }
            }
        }
        Ok(failures)
    }
}

fn run(cli: Cli) -> Result<usize> {
    let flags = match &cli.opts.config {
        Some(path) => {
            let file = load_config(path)?;
            cli.opts.merged_with(file)
        }
        None => cli.opts,
    };
    let threads = par::init_thread_pool();
    if !flags.sequential {
        eprintln!("worker threads: {threads}");
    }
    let mut session = Session { flags, stdout: std::io::stdout() };
    match cli.command {
        Command::Apply => session.apply().map(|_| 0),
        Command::Solve => session.solve().map(|_| 0),
        Command::Gamma => session.gamma().map(|_| 0),
        Command::Tempered => session.tempered().map(|_| 0),
        Command::Table { number } => session.table(number),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(0) => ExitCode::SUCCESS,
        Ok(n) => {
            eprintln!("{n} run(s) failed");
            ExitCode::FAILURE
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
