//! Benchmark tables: the Laplace problem (nonsingular, reports `rho(H)`) and
//! the reflecting random walk (singular, reports `gamma(H)`), each run with
//! the single-, two- and three-step schemes over diagonal splittings.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use crate::dense::{gamma, spectral_radius, Matrix, ToleranceProfile, Vector};
use crate::error::{Error, Result};
use crate::problems::{make_laplace, make_random_walk};
use crate::scheme::{run, SchemeConfig, StopRule};
use crate::splitting::{alternating_iteration_matrix, Splitting};

pub const CSV_HEADER: &str = "order,scheme,iterations,residual,error,time_s,rho_or_gamma";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Scheme {
    Single,
    Two,
    Three,
}

impl Scheme {
    pub const ALL: [Scheme; 3] = [Scheme::Single, Scheme::Two, Scheme::Three];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Single => "single",
            Scheme::Two => "two",
            Scheme::Three => "three",
        }
    }

    /// Diagonal scales used by this scheme, in sweep order.
    fn alphas(self, config: &BenchConfig) -> Vec<f64> {
        let [k, u, x] = config.alphas;
        match self {
            Scheme::Single => vec![config.single_alpha.unwrap_or(k)],
            Scheme::Two => vec![k, u],
            Scheme::Three => vec![k, u, x],
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitialGuess {
    Zero,
    /// `(1/n) ones`
    Uniform,
    /// First unit vector.
    FirstUnit,
}

impl InitialGuess {
    pub fn vector(self, n: usize) -> Vector {
        match self {
            InitialGuess::Zero => Vector::zeros(n),
            InitialGuess::Uniform => Vector::from_element(n, 1.0 / n as f64),
            InitialGuess::FirstUnit => {
                let mut v = Vector::zeros(n);
                v[0] = 1.0;
                v
            }
        }
    }
}

impl FromStr for InitialGuess {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "zero" => Ok(InitialGuess::Zero),
            "uniform" => Ok(InitialGuess::Uniform),
            "e1" => Ok(InitialGuess::FirstUnit),
            other => Err(Error::InvalidArgument(format!(
                "unknown initial vector `{other}` (expected zero, uniform or e1)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    /// Scales of `diag(A)` for `K`, `U` and `X`.
    pub alphas: [f64; 3],
    /// Overrides the scale of the single-step splitting.
    pub single_alpha: Option<f64>,
    pub stop_rule: StopRule,
    pub tolerance: f64,
    pub max_iterations: usize,
    pub x0: InitialGuess,
}

impl BenchConfig {
    pub fn laplace() -> Self {
        Self {
            alphas: [1.0, 1.5, 1.75],
            single_alpha: None,
            stop_rule: StopRule::ErrorVsExact,
            tolerance: 1e-6,
            max_iterations: 1_000_000,
            x0: InitialGuess::Zero,
        }
    }

    /// Residual rule `||A x|| < 1e-7` from `e1`; the successive-difference
    /// rule stops far earlier than the published counts.
    pub fn markov() -> Self {
        Self {
            alphas: [2.0, 2.5, 3.0],
            single_alpha: None,
            stop_rule: StopRule::Residual,
            tolerance: 1e-7,
            max_iterations: 1_000_000,
            x0: InitialGuess::FirstUnit,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub order: usize,
    pub scheme: Scheme,
    pub iterations: usize,
    pub residual: f64,
    /// `None` for the singular benchmark.
    pub error: Option<f64>,
    pub time_seconds: f64,
    pub rho_or_gamma: f64,
    pub converged: bool,
}

impl BenchRow {
    pub fn csv_line(&self) -> String {
        let error = self.error.map(|e| format!("{e:e}")).unwrap_or_default();
        format!(
            "{},{},{},{:e},{},{:.6},{:.6}",
            self.order,
            self.scheme,
            self.iterations,
            self.residual,
            error,
            self.time_seconds,
            self.rho_or_gamma
        )
    }
}

pub fn write_csv(rows: &[BenchRow], mut out: impl Write) -> Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for row in rows {
        writeln!(out, "{}", row.csv_line())?;
    }
    Ok(())
}

/// Human-readable table with the published column set.
pub fn format_table(rows: &[BenchRow], spectral_label: &str) -> String {
    let mut s = format!(
        "{:>6}  {:<6}  {:>8}  {:>12}  {:>12}  {:>9}  {:>8}\n",
        "order", "scheme", "IT", "||b-Ax||", "||x*-x||", "time(s)", spectral_label
    );
    for r in rows {
        let error = r
            .error
            .map_or_else(|| "-".to_string(), |e| format!("{e:.4e}"));
        let flag = if r.converged { "" } else { "  (not converged)" };
        s.push_str(&format!(
            "{:>6}  {:<6}  {:>8}  {:>12.4e}  {:>12}  {:>9.3}  {:>8.4}{flag}\n",
            r.order,
            r.scheme.name(),
            r.iterations,
            r.residual,
            error,
            r.time_seconds,
            r.rho_or_gamma
        ));
    }
    s
}

fn validate(config: &BenchConfig) -> Result<()> {
    let scales = config.alphas.iter().chain(config.single_alpha.iter());
    if let Some(bad) = scales.into_iter().find(|a| !(**a > 0.0 && a.is_finite())) {
        return Err(Error::InvalidArgument(format!(
            "diagonal scale must be positive, got {bad}"
        )));
    }
    if config.tolerance.is_nan() || config.tolerance <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be positive, got {}",
            config.tolerance
        )));
    }
    Ok(())
}

/// Laplace benchmark on a `grid x grid` mesh (order `(grid - 1)^2`).
pub fn laplace_table(grid: usize, config: &BenchConfig) -> Result<Vec<BenchRow>> {
    validate(config)?;
    let tol = ToleranceProfile::default();
    let p = make_laplace(grid)?;
    let x0 = config.x0.vector(p.order());
    Scheme::ALL
        .iter()
        .map(|&scheme| {
            let splits = diag_splittings(&p.a, &scheme.alphas(config), &tol)?;
            let rho = spectral_radius(&alternating_iteration_matrix(&splits, &tol)?)?;
            let report = run(&scheme_config(splits, config), &p.b, &x0, Some(&p.exact))?;
            Ok(BenchRow {
                order: p.order(),
                scheme,
                iterations: report.iterations,
                residual: report.final_residual,
                error: report.final_error,
                time_seconds: report.elapsed_seconds,
                rho_or_gamma: rho,
                converged: report.converged,
            })
        })
        .collect()
}

/// Random-walk benchmark `(I - T^t) x = 0` with `states` states.
pub fn markov_table(states: usize, config: &BenchConfig) -> Result<Vec<BenchRow>> {
    validate(config)?;
    if config.stop_rule == StopRule::ErrorVsExact {
        return Err(Error::InvalidArgument(
            "the singular benchmark has no unique exact solution; use residual or diff".into(),
        ));
    }
    let tol = ToleranceProfile::default();
    let p = make_random_walk(states)?;
    let b = Vector::zeros(states);
    let x0 = config.x0.vector(states);
    Scheme::ALL
        .iter()
        .map(|&scheme| {
            let splits = diag_splittings(&p.a, &scheme.alphas(config), &tol)?;
            let g = gamma(&alternating_iteration_matrix(&splits, &tol)?, &tol)?;
            let report = run(&scheme_config(splits, config), &b, &x0, None)?;
            Ok(BenchRow {
                order: states,
                scheme,
                iterations: report.iterations,
                residual: report.final_residual,
                error: None,
                time_seconds: report.elapsed_seconds,
                rho_or_gamma: g,
                converged: report.converged,
            })
        })
        .collect()
}

fn diag_splittings(a: &Matrix, alphas: &[f64], tol: &ToleranceProfile) -> Result<Vec<Splitting>> {
    alphas
        .iter()
        .map(|&alpha| Splitting::diag_scaled(a, alpha, tol))
        .collect()
}

fn scheme_config(splits: Vec<Splitting>, config: &BenchConfig) -> SchemeConfig {
    SchemeConfig::new(splits)
        .stop_rule(config.stop_rule)
        .tolerance(config.tolerance)
        .max_iterations(config.max_iterations)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_grid_converges_at_once() {
        let rows = laplace_table(2, &BenchConfig::laplace()).unwrap();
        assert_eq!(rows.len(), 3);
        for r in rows {
            assert_eq!(r.order, 1);
            assert!(r.converged && r.iterations <= 2, "{r:?}");
        }
    }

    #[test]
    fn small_markov_orders_schemes() {
        let rows = markov_table(10, &BenchConfig::markov()).unwrap();
        let its: Vec<usize> = rows.iter().map(|r| r.iterations).collect();
        assert!(its[2] < its[1] && its[1] < its[0], "{its:?}");
        assert!((rows[2].rho_or_gamma - 0.9274).abs() < 5e-5);
        assert!(rows.iter().all(|r| r.error.is_none()));
    }

    #[test]
    fn csv_has_header_and_blank_error() {
        let rows = markov_table(5, &BenchConfig::markov()).unwrap();
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[1].split(',').nth(4), Some(""));
    }

    #[test]
    fn single_alpha_override() {
        let mut config = BenchConfig::laplace();
        config.single_alpha = Some(1.75);
        assert_eq!(Scheme::Single.alphas(&config), vec![1.75]);
        config.alphas[0] = -1.0;
        assert!(laplace_table(3, &config).is_err());
    }

    #[test]
    fn parses_initial_guess() {
        assert_eq!(
            "e1".parse::<InitialGuess>().unwrap(),
            InitialGuess::FirstUnit
        );
        assert!("ones".parse::<InitialGuess>().is_err());
        assert_eq!(InitialGuess::Uniform.vector(4).sum(), 1.0);
    }
}
