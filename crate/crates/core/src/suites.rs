//! Seeded randomized verification suites.
//!
//! Each suite draws `trials` instances from one ChaCha stream and reports how
//! many passed, plus the first counterexample. Theorem suites produce one
//! report per theorem and also count the trials whose hypotheses held, so a
//! vacuous pass is visible.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analysis::{
    is_semiconvergent, power_limit_oracle, verify_convergence_theorem,
    verify_semiconvergence_theorem, TheoremVerdict, CONVERGENCE_THEOREMS,
};
use crate::dense::{
    group_inverse, max_abs, max_abs_diff, spectral_radius, Matrix, ToleranceProfile,
};
use crate::error::{Error, Result};
use crate::generate::{
    group_monotone_instance, index_one_matrix, mixed_matrix, proper_triple, regular_part,
    singular_m_matrix_family, SpectrumKind, SplittingKind,
};
use crate::splitting::{
    alternating_iteration_matrix, b_sharp_closed_form, companion_matrix, induced_splitting,
    Splitting,
};

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_TRIALS: usize = 100;

/// Bound on `|rho(S) - rho(H)|`, `||S - A H A#||`, `||B# C - H||` and the
/// closed-form `B#` discrepancy.
pub const IDENTITY_TOL: f64 = 1e-8;
/// Bound on the relative residuals of the group-inverse equations.
pub const GROUP_INVERSE_TOL: f64 = 1e-10;
/// Bound on the certificate/oracle limit discrepancy.
pub const ORACLE_TOL: f64 = 1e-8;

pub const SUITES: [&str; 10] = [
    "group-inverse",
    "companion",
    "induced",
    "typeII-convergence",
    "single-vs-three",
    "both-types-comparison",
    "two-vs-three",
    "semiconvergence",
    "semiconvergence-theorems",
    "quasi",
];

const REGULAR_THEOREMS: [&str; 3] = ["regular-semiconvergence", "delta-shift", "induced-regular"];
const QUASI_THEOREMS: [&str; 4] = [
    "quasi-three-step",
    "quasi-gamma-vs-single",
    "quasi-comparison",
    "quasi-two-vs-three",
];
const DELTAS: [f64; 3] = [0.1, 0.5, 0.9];

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub name: String,
    pub seed: u64,
    pub trials: usize,
    pub passed: usize,
    /// Trials whose hypotheses held (theorem suites only).
    pub hypotheses_held: Option<usize>,
    /// Largest checked discrepancy (identity suites only).
    pub worst: Option<f64>,
    pub first_failure: Option<String>,
    /// Every failing verdict (theorem suites only).
    pub counterexamples: Vec<TheoremVerdict>,
}

impl SuiteReport {
    fn new(name: &str, seed: u64) -> Self {
        Self {
            name: name.to_string(),
            seed,
            trials: 0,
            passed: 0,
            hypotheses_held: None,
            worst: None,
            first_failure: None,
            counterexamples: Vec::new(),
        }
    }

    pub fn failures(&self) -> usize {
        self.trials - self.passed
    }

    pub fn all_passed(&self) -> bool {
        self.passed == self.trials
    }

    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.trials += 1;
        if ok {
            self.passed += 1;
        } else if self.first_failure.is_none() {
            self.first_failure = Some(describe());
        }
    }

    fn observe(&mut self, value: f64) {
        let w = self.worst.get_or_insert(0.0);
        // NaN must register as a failure-sized discrepancy.
        *w = if value.is_nan() {
            f64::INFINITY
        } else {
            w.max(value)
        };
    }

    fn record_verdict(&mut self, trial: usize, v: &TheoremVerdict) {
        if v.hypotheses_hold {
            *self.hypotheses_held.get_or_insert(0) += 1;
        } else {
            self.hypotheses_held.get_or_insert(0);
        }
        if !v.implication_holds() {
            self.counterexamples.push(v.clone());
        }
        self.record(v.implication_holds(), || format!("trial {trial}\n{v}"));
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<26} {:>4}/{:<4} passed  seed {}",
            self.name, self.passed, self.trials, self.seed
        )?;
        if let Some(h) = self.hypotheses_held {
            write!(f, "  hypotheses held {h}")?;
        }
        if let Some(w) = self.worst {
            write!(f, "  worst {w:.3e}")?;
        }
        if let Some(c) = &self.first_failure {
            write!(f, "\n  first counterexample:\n")?;
            for line in c.lines() {
                writeln!(f, "    {line}")?;
            }
        }
        Ok(())
    }
}

/// Runs `name` (or every suite for `all`). `size` caps the matrix order;
/// each suite has its own default.
pub fn run_suite(
    name: &str,
    trials: usize,
    seed: u64,
    size: Option<usize>,
) -> Result<Vec<SuiteReport>> {
    if name == "all" {
        let mut out = Vec::new();
        for s in SUITES {
            out.extend(run_suite(s, trials, seed, size)?);
        }
        return Ok(out);
    }
    if let Some(n) = size {
        if n < 3 {
            return Err(Error::InvalidArgument(format!(
                "--size must be at least 3, got {n}"
            )));
        }
    }
    let tol = ToleranceProfile::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rng = &mut rng;
    Ok(match name {
        "group-inverse" => vec![group_inverse_suite(
            rng,
            trials,
            seed,
            size.unwrap_or(10),
            &tol,
        )],
        "companion" => vec![companion_suite(rng, trials, seed, size.unwrap_or(8), &tol)?],
        "induced" => vec![induced_suite(rng, trials, seed, size.unwrap_or(8), &tol)?],
        "semiconvergence" => vec![oracle_suite(rng, trials, seed, size.unwrap_or(10), &tol)?],
        "semiconvergence-theorems" => m_matrix_suite(
            rng,
            trials,
            seed,
            size.unwrap_or(8),
            &REGULAR_THEOREMS,
            &tol,
        )?,
        "quasi" => m_matrix_suite(rng, trials, seed, size.unwrap_or(8), &QUASI_THEOREMS, &tol)?,
        id if CONVERGENCE_THEOREMS.contains(&id) => {
            vec![convergence_suite(
                rng,
                trials,
                seed,
                size.unwrap_or(8),
                id,
                &tol,
            )?]
        }
        other => return Err(Error::InvalidArgument(format!("unknown suite `{other}`"))),
    })
}

fn rel(num: f64, den: f64) -> f64 {
    num / den.max(f64::MIN_POSITIVE)
}

fn group_inverse_suite(
    rng: &mut ChaCha8Rng,
    trials: usize,
    seed: u64,
    size: usize,
    tol: &ToleranceProfile,
) -> SuiteReport {
    let mut report = SuiteReport::new("group-inverse", seed);
    for trial in 0..trials {
        let n = rng.gen_range(2..=size);
        let r = rng.gen_range(1..=n);
        let a = index_one_matrix(rng, n, r);
        let residual = match group_inverse(&a, tol) {
            Ok(x) => {
                let scale_a = max_abs(&a);
                let scale_x = max_abs(&x);
                let e1 = rel(max_abs(&(&a * &x * &a - &a)), scale_a);
                let e2 = rel(max_abs(&(&x * &a * &x - &x)), scale_x);
                let e3 = rel(max_abs(&(&a * &x - &x * &a)), scale_a * scale_x);
                e1.max(e2).max(e3)
            }
            Err(_) => f64::INFINITY,
        };
        report.observe(residual);
        report.record(residual < GROUP_INVERSE_TOL, || {
            format!(
                "trial {trial}: n = {n}, rank = {r}, relative residual {residual:.3e}, |A|*|A#| = {:.3e}\nA = {a}",
                max_abs(&a) * group_inverse(&a, tol).map_or(f64::NAN, |x| max_abs(&x))
            )
        });
    }
    report
}

fn proper_splits(
    rng: &mut ChaCha8Rng,
    size: usize,
    tol: &ToleranceProfile,
) -> Result<(Matrix, Vec<Splitting>)> {
    let n = rng.gen_range(2..=size);
    let r = rng.gen_range(1..=n);
    let t = proper_triple(rng, n, r);
    let splits =
        t.us.into_iter()
            .map(|u| Splitting::new(&t.a, u, tol))
            .collect::<Result<Vec<_>>>()?;
    Ok((t.a, splits))
}

fn companion_suite(
    rng: &mut ChaCha8Rng,
    trials: usize,
    seed: u64,
    size: usize,
    tol: &ToleranceProfile,
) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("companion", seed);
    for trial in 0..trials {
        let (a, splits) = proper_splits(rng, size, tol)?;
        let h = alternating_iteration_matrix(&splits, tol)?;
        let s = companion_matrix(&splits, tol)?;
        let a_sharp = group_inverse(&a, tol)?;
        let radius_gap = (spectral_radius(&s)? - spectral_radius(&h)?).abs();
        let similarity_gap = max_abs_diff(&s, &(&a * &h * &a_sharp));
        let worst = radius_gap.max(similarity_gap);
        report.observe(worst);
        report.record(worst < IDENTITY_TOL, || {
            format!(
                "trial {trial}: |rho(S) - rho(H)| = {radius_gap:.3e}, ||S - A H A#|| = {similarity_gap:.3e}\nA = {a}"
            )
        });
    }
    Ok(report)
}

fn induced_suite(
    rng: &mut ChaCha8Rng,
    trials: usize,
    seed: u64,
    size: usize,
    tol: &ToleranceProfile,
) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("induced", seed);
    let mut drawn = 0;
    // Rejection sampling on the range and null hypotheses.
    while report.trials < trials {
        drawn += 1;
        if drawn > 20 * trials.max(1) {
            return Err(Error::InvalidArgument(
                "induced suite: too many draws violate the range/null hypotheses".into(),
            ));
        }
        let (a, splits) = proper_splits(rng, size, tol)?;
        let Ok(closed) = b_sharp_closed_form(&splits, tol) else {
            continue;
        };
        let h = alternating_iteration_matrix(&splits, tol)?;
        let Ok(b) = induced_splitting(&a, &h, tol) else {
            continue;
        };
        let direct = group_inverse(b.u(), tol)?;
        let bc_gap = max_abs_diff(&(&direct * b.v()), &h);
        let closed_gap = max_abs_diff(&closed, &direct);
        let worst = bc_gap.max(closed_gap);
        let trial = report.trials;
        report.observe(worst);
        report.record(worst < IDENTITY_TOL, || {
            format!(
                "trial {trial}: ||B# C - H|| = {bc_gap:.3e}, closed-form gap = {closed_gap:.3e}, |B#| = {:.3e}, |H| = {:.3e}\nA = {a}",
                max_abs(&direct),
                max_abs(&h)
            )
        });
    }
    Ok(report)
}

fn oracle_suite(
    rng: &mut ChaCha8Rng,
    trials: usize,
    seed: u64,
    size: usize,
    tol: &ToleranceProfile,
) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("semiconvergence", seed);
    for trial in 0..trials {
        let n = rng.gen_range(2..=size);
        let kind = SpectrumKind::ALL[trial % SpectrumKind::ALL.len()];
        let t = mixed_matrix(rng, n, kind);
        let cert = is_semiconvergent(&t, tol)?;
        let oracle = power_limit_oracle(&t, 1 << 50, tol);
        let (ok, gap) = match (&cert.limit_matrix, &oracle) {
            (Some(l), Some(o)) => {
                let gap = max_abs_diff(l, o);
                (gap < ORACLE_TOL, gap)
            }
            (None, None) => (true, 0.0),
            _ => (false, f64::INFINITY),
        };
        report.observe(gap);
        report.record(ok, || {
            format!(
                "trial {trial}: {kind:?} n = {n}, certificate {}, oracle {}, gap {gap:.3e}\nT = {t}",
                cert.verdict,
                oracle.is_some()
            )
        });
    }
    Ok(report)
}

fn convergence_suite(
    rng: &mut ChaCha8Rng,
    trials: usize,
    seed: u64,
    size: usize,
    id: &str,
    tol: &ToleranceProfile,
) -> Result<SuiteReport> {
    use SplittingKind::*;
    let mut report = SuiteReport::new(id, seed);
    for trial in 0..trials {
        let n = rng.gen_range(3..=size);
        // A third of the instances are nonsingular.
        let null_dim = if trial % 3 == 0 {
            0
        } else {
            rng.gen_range(1..n.min(4))
        };
        let kinds = if id == "both-types-comparison" || trial % 2 == 0 {
            [Regular, Regular, Regular]
        } else {
            [0, 1, 2].map(|_| {
                if rng.gen_bool(0.5) {
                    TypeIIOnly
                } else {
                    Regular
                }
            })
        };
        let inst = group_monotone_instance(rng, n, null_dim, kinds);
        let splits = inst
            .us
            .iter()
            .map(|u| Splitting::new(&inst.a, u.clone(), tol))
            .collect::<Result<Vec<_>>>()?;
        let v = verify_convergence_theorem(id, &splits, tol)?;
        report.record_verdict(trial, &v);
    }
    Ok(report)
}

fn m_matrix_suite(
    rng: &mut ChaCha8Rng,
    trials: usize,
    seed: u64,
    size: usize,
    ids: &[&str],
    tol: &ToleranceProfile,
) -> Result<Vec<SuiteReport>> {
    let mut reports: Vec<SuiteReport> = ids.iter().map(|id| SuiteReport::new(id, seed)).collect();
    for trial in 0..trials {
        let n = rng.gen_range(3..=size);
        let a = singular_m_matrix_family(rng, n);
        let splits = [0, 1, 2]
            .map(|_| regular_part(rng, &a))
            .into_iter()
            .map(|u| Splitting::new(&a, u, tol))
            .collect::<Result<Vec<_>>>()?;
        for (id, report) in ids.iter().zip(reports.iter_mut()) {
            if *id == "delta-shift" {
                // One verdict per trial: the conjunction over the shifts.
                let vs = DELTAS
                    .iter()
                    .map(|d| verify_semiconvergence_theorem(id, &splits, tol, Some(*d)))
                    .collect::<Result<Vec<_>>>()?;
                let worst = vs.iter().find(|v| !v.implication_holds()).unwrap_or(&vs[0]);
                report.record_verdict(trial, worst);
            } else {
                let v = verify_semiconvergence_theorem(id, &splits, tol, None)?;
                report.record_verdict(trial, &v);
            }
        }
    }
    Ok(reports)
}
