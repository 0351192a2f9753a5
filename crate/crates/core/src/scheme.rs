//! Drivers for the single-, two- and three-step alternating iterations and the
//! shifted variant `x <- delta * sweep(x) + (1 - delta) * x`.
//!
//! The iteration matrix is never formed here; each pass applies the cached
//! solver of every splitting in turn.

use std::time::Instant;

use crate::dense::{gen_solve, Matrix, ToleranceProfile, Vector};
use crate::error::{Error, Result};
use crate::splitting::{shared_matrix, Splitting};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopRule {
    /// `||b - A x||_2 < tol`
    Residual,
    /// `||x* - x||_2 < tol`; needs the exact solution.
    ErrorVsExact,
    /// `||x_k - x_{k-1}||_2 < tol`
    SuccessiveDiff,
}

impl std::str::FromStr for StopRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "residual" | "res" => Ok(StopRule::Residual),
            "error" | "error_vs_exact" => Ok(StopRule::ErrorVsExact),
            "diff" | "successive_diff" => Ok(StopRule::SuccessiveDiff),
            other => Err(Error::InvalidArgument(format!(
                "unknown stop rule `{other}`"
            ))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SchemeConfig {
    /// Splittings in application order (first entry sweeps first).
    pub splittings: Vec<Splitting>,
    pub stop_rule: StopRule,
    pub tolerance: f64,
    pub max_iterations: usize,
    pub delta: Option<f64>,
    pub record_history: bool,
}

impl SchemeConfig {
    pub fn new(splittings: Vec<Splitting>) -> Self {
        Self {
            splittings,
            stop_rule: StopRule::Residual,
            tolerance: 1e-6,
            max_iterations: 100_000,
            delta: None,
            record_history: false,
        }
    }

    pub fn stop_rule(mut self, rule: StopRule) -> Self {
        self.stop_rule = rule;
        self
    }

    pub fn tolerance(mut self, tol: f64) -> Self {
        self.tolerance = tol;
        self
    }

    pub fn max_iterations(mut self, n: usize) -> Self {
        self.max_iterations = n;
        self
    }

    pub fn delta(mut self, delta: Option<f64>) -> Self {
        self.delta = delta;
        self
    }

    pub fn record_history(mut self, on: bool) -> Self {
        self.record_history = on;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=3).contains(&self.splittings.len()) {
            return Err(Error::InvalidArgument(format!(
                "a scheme uses 1 to 3 splittings, got {}",
                self.splittings.len()
            )));
        }
        if self.tolerance.is_nan() || self.tolerance <= 0.0 {
            return Err(Error::InvalidArgument("tolerance must be positive".into()));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidArgument(
                "max_iterations must be positive".into(),
            ));
        }
        if let Some(d) = self.delta {
            if !(d > 0.0 && d < 1.0) {
                return Err(Error::InvalidArgument(format!(
                    "delta must lie strictly inside (0, 1), got {d}"
                )));
            }
        }
        shared_matrix(&self.splittings, &ToleranceProfile::default())?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HistoryEntry {
    pub iteration: usize,
    pub residual: f64,
    pub error: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct IterationReport {
    pub iterations: usize,
    pub final_x: Vector,
    /// `||b - A x||_2` at the returned iterate.
    pub final_residual: f64,
    /// `||x* - x||_2` when the exact solution was supplied.
    pub final_error: Option<f64>,
    pub elapsed_seconds: f64,
    pub converged: bool,
    pub history: Option<Vec<HistoryEntry>>,
}

/// One full pass: for each splitting in order, `x <- U#(V x + b)`.
pub fn sweep(splits: &[Splitting], x: &Vector, b: &Vector) -> Vector {
    let mut out = x.clone();
    let mut work = Vector::zeros(x.len());
    sweep_in_place(splits, &mut out, b, &mut work);
    out
}

fn sweep_in_place(splits: &[Splitting], x: &mut Vector, b: &Vector, work: &mut Vector) {
    for s in splits {
        work.copy_from(b);
        work.gemv(1.0, s.v(), x, 1.0);
        s.solver().solve_in_place(work);
        std::mem::swap(x, work);
    }
}

fn residual_norm(a: &Matrix, x: &Vector, b: &Vector) -> f64 {
    let mut r = b.clone();
    r.gemv(-1.0, a, x, 1.0);
    r.norm()
}

fn check_len(expected: usize, v: &Vector, what: &str) -> Result<()> {
    if v.len() == expected {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            expected: format!("{what} of length {expected}"),
            found: format!("length {}", v.len()),
        })
    }
}

/// Iterates until the stop rule is met or `max_iterations` passes are done.
/// Uses the shifted update when `config.delta` is set.
pub fn run(
    config: &SchemeConfig,
    b: &Vector,
    x0: &Vector,
    exact: Option<&Vector>,
) -> Result<IterationReport> {
    config.validate()?;
    let a = config.splittings[0].a();
    let n = a.nrows();
    check_len(n, b, "right-hand side")?;
    check_len(n, x0, "initial vector")?;
    if let Some(e) = exact {
        check_len(n, e, "exact solution")?;
    }
    if config.stop_rule == StopRule::ErrorVsExact && exact.is_none() {
        return Err(Error::InvalidArgument(
            "the error stop rule needs the exact solution".into(),
        ));
    }

    let mut x = x0.clone();
    let mut prev = x0.clone();
    let mut work = Vector::zeros(n);
    let mut history = config.record_history.then(Vec::new);
    let mut converged = false;
    let mut iterations = 0;

    let start = Instant::now();
    while iterations < config.max_iterations {
        iterations += 1;
        prev.copy_from(&x);
        sweep_in_place(&config.splittings, &mut x, b, &mut work);
        if let Some(d) = config.delta {
            x.axpy(1.0 - d, &prev, d);
        }

        let metric = match config.stop_rule {
            StopRule::Residual => residual_norm(a, &x, b),
            StopRule::ErrorVsExact => (exact.expect("checked above") - &x).norm(),
            StopRule::SuccessiveDiff => (&x - &prev).norm(),
        };
        if let Some(h) = history.as_mut() {
            h.push(HistoryEntry {
                iteration: iterations,
                residual: residual_norm(a, &x, b),
                error: exact.map(|e| (e - &x).norm()),
            });
        }
        if metric < config.tolerance {
            converged = true;
            break;
        }
        if !metric.is_finite() {
            break;
        }
    }
    let elapsed_seconds = start.elapsed().as_secs_f64();

    Ok(IterationReport {
        iterations,
        final_residual: residual_norm(a, &x, b),
        final_error: exact.map(|e| (e - &x).norm()),
        final_x: x,
        elapsed_seconds,
        converged,
        history,
    })
}

/// The shifted scheme; `config.delta` must be set.
pub fn run_shifted(config: &SchemeConfig, b: &Vector, x0: &Vector) -> Result<IterationReport> {
    if config.delta.is_none() {
        return Err(Error::MissingDelta("shifted scheme".into()));
    }
    run(config, b, x0, None)
}

/// `A^-1 b` for nonsingular `A`, `A# b` otherwise.
pub fn exact_solution(a: &Matrix, b: &Vector, tol: &ToleranceProfile) -> Result<Vector> {
    gen_solve(a, b, tol)
}

/// `H_delta = delta H + (1 - delta) I`.
pub fn shifted_matrix(h: &Matrix, delta: f64) -> Matrix {
    let n = h.nrows();
    h * delta + Matrix::identity(n, n) * (1.0 - delta)
}
