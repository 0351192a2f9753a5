//! Semiconvergence certificates and instance-level theorem checks.
//!
//! A verifier never proves anything: it evaluates every hypothesis and the
//! conclusion of a comparison or convergence theorem on the given matrices,
//! and records the radii it measured along the way.

use std::collections::BTreeMap;
use std::fmt;

use crate::dense::{
    checked_inverse, eigenvalues, ensure_square, gamma_of, group_inverse, index_at_most_one,
    is_nonnegative, max_abs, max_abs_diff, same_null, same_range, spectral_radius, Matrix,
    ToleranceProfile,
};
use crate::error::{Error, Result};
use crate::scheme::shifted_matrix;
use crate::splitting::{
    alternating_core, alternating_iteration_matrix, alternating_preconditioner, companion_matrix,
    induced_splitting, shared_matrix, Splitting, SplittingClass, SplittingClassReport,
};

/// Slack for the radius and gamma inequalities in theorem conclusions.
pub const INEQUALITY_SLACK: f64 = 1e-10;

pub const CONVERGENCE_THEOREMS: [&str; 4] = [
    "typeII-convergence",
    "single-vs-three",
    "both-types-comparison",
    "two-vs-three",
];

pub const SEMICONVERGENCE_THEOREMS: [&str; 7] = [
    "regular-semiconvergence",
    "delta-shift",
    "induced-regular",
    "quasi-three-step",
    "quasi-gamma-vs-single",
    "quasi-comparison",
    "quasi-two-vs-three",
];

#[derive(Debug, Clone)]
pub struct SemiconvergenceCertificate {
    pub rho: f64,
    pub gamma: f64,
    pub has_eigenvalue_one: bool,
    pub index_of_i_minus_t_le_one: bool,
    pub verdict: bool,
    /// `I - (I - T)(I - T)#`, present only when `verdict` is true.
    pub limit_matrix: Option<Matrix>,
}

/// `T` is semiconvergent iff `rho(T) <= 1`, `gamma(T) < 1` and
/// `index(I - T) <= 1`. Moduli within `one_tol` of 1 count as on the circle.
pub fn is_semiconvergent(t: &Matrix, tol: &ToleranceProfile) -> Result<SemiconvergenceCertificate> {
    ensure_square(t)?;
    let spectrum = eigenvalues(t)?;
    let rho = spectrum.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let gamma = gamma_of(&spectrum, tol);
    let has_eigenvalue_one = spectrum.iter().any(|z| (z - 1.0).norm() <= tol.one_tol);
    let n = t.nrows();
    let i_t = Matrix::identity(n, n) - t;
    let index_ok = index_at_most_one(&i_t, tol);

    let mut verdict = rho <= 1.0 + tol.one_tol && gamma < 1.0 - tol.one_tol && index_ok;
    let limit_matrix = if verdict {
        match group_inverse(&i_t, tol) {
            Ok(g) => Some(Matrix::identity(n, n) - &i_t * g),
            Err(_) => {
                verdict = false;
                None
            }
        }
    } else {
        None
    };
    Ok(SemiconvergenceCertificate {
        rho,
        gamma,
        has_eigenvalue_one,
        index_of_i_minus_t_le_one: index_ok,
        verdict,
        limit_matrix,
    })
}

/// Brute-force `lim T^k` by repeated squaring, up to the power `k_max`.
///
/// Compares `T^k` with `T^(k+1)` rather than `T^(2k)`, so period-two
/// behaviour is not mistaken for a limit.
pub fn power_limit_oracle(t: &Matrix, k_max: u64, tol: &ToleranceProfile) -> Option<Matrix> {
    if !t.is_square() {
        return None;
    }
    let scale = max_abs(t).max(1.0);
    let mut p = t.clone();
    let mut power: u64 = 1;
    loop {
        if !p.iter().all(|v| v.is_finite()) {
            return None;
        }
        let next = &p * t;
        if max_abs_diff(&next, &p) < tol.eq_tol * scale {
            // Settled; a few more squarings flush the decaying part.
            let mut lim = next;
            for _ in 0..4 {
                lim = &lim * &lim;
            }
            return lim.iter().all(|v| v.is_finite()).then_some(lim);
        }
        if power >= k_max {
            return None;
        }
        p = &p * &p;
        power = power.saturating_mul(2);
    }
}

/// `A = sI - B` with `B >= 0`, `s >= rho(B)` and `s^-1 B` semiconvergent
/// for some `s`.
///
/// Off-diagonals are checked first. Valid shifts are `s >= max(0, max A_ii)`,
/// and both tests are monotone in `s`: if they pass for some `s` they pass
/// for every larger one. Testing at `s = 2 max A_ii` (or 1 for a zero
/// diagonal) keeps every peripheral eigenvalue other than 1 strictly inside
/// the circle, so it decides "for some `s`" exactly.
pub fn is_m_matrix_with_property_c(a: &Matrix, tol: &ToleranceProfile) -> Result<bool> {
    ensure_square(a)?;
    let n = a.nrows();
    let off_diagonal_ok = (0..n).all(|i| (0..n).all(|j| i == j || a[(i, j)] <= tol.nonneg_tol));
    if !off_diagonal_ok {
        return Ok(false);
    }
    let max_diag = a.diagonal().iter().cloned().fold(0.0, f64::max);
    let s = if max_diag > 0.0 { 2.0 * max_diag } else { 1.0 };
    let b = Matrix::identity(n, n) * s - a;
    if spectral_radius(&b)? > s * (1.0 + tol.one_tol) {
        return Ok(false);
    }
    Ok(is_semiconvergent(&(b / s), tol)?.verdict)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TheoremVerdict {
    pub theorem_id: String,
    pub hypotheses_hold: bool,
    pub hypothesis_failures: Vec<String>,
    pub conclusion_holds: bool,
    pub measured_quantities: BTreeMap<String, f64>,
}

impl TheoremVerdict {
    /// False only for a counterexample: hypotheses hold, conclusion fails.
    pub fn implication_holds(&self) -> bool {
        !self.hypotheses_hold || self.conclusion_holds
    }
}

impl fmt::Display for TheoremVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "theorem     {}", self.theorem_id)?;
        writeln!(
            f,
            "hypotheses  {}",
            if self.hypotheses_hold { "hold" } else { "fail" }
        )?;
        for h in &self.hypothesis_failures {
            writeln!(f, "  failed: {h}")?;
        }
        writeln!(
            f,
            "conclusion  {}",
            if self.conclusion_holds {
                "holds"
            } else {
                "fails"
            }
        )?;
        for (k, v) in &self.measured_quantities {
            writeln!(f, "  {k:<28} {v:.6e}")?;
        }
        Ok(())
    }
}

struct Ledger {
    id: &'static str,
    failures: Vec<String>,
    measured: BTreeMap<String, f64>,
}

impl Ledger {
    fn new(id: &'static str) -> Self {
        Self {
            id,
            failures: Vec::new(),
            measured: BTreeMap::new(),
        }
    }

    fn require(&mut self, ok: bool, name: impl Into<String>) -> bool {
        if !ok {
            self.failures.push(name.into());
        }
        ok
    }

    fn measure(&mut self, name: impl Into<String>, value: f64) -> f64 {
        self.measured.insert(name.into(), value);
        value
    }

    fn flag(&mut self, name: impl Into<String>, value: bool) -> bool {
        self.measured
            .insert(name.into(), if value { 1.0 } else { 0.0 });
        value
    }

    fn finish(self, conclusion_holds: bool) -> TheoremVerdict {
        TheoremVerdict {
            theorem_id: self.id.to_string(),
            hypotheses_hold: self.failures.is_empty(),
            hypothesis_failures: self.failures,
            conclusion_holds,
            measured_quantities: self.measured,
        }
    }
}

const LABELS: [&str; 3] = ["K", "U", "X"];
const REMAINDERS: [&str; 3] = ["L", "V", "Y"];

fn check_count(splits: &[Splitting], allowed: std::ops::RangeInclusive<usize>) -> Result<()> {
    if allowed.contains(&splits.len()) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "theorem needs {}..={} splittings, got {}",
            allowed.start(),
            allowed.end(),
            splits.len()
        )))
    }
}

fn minimum(values: &[f64]) -> f64 {
    values.iter().cloned().fold(f64::INFINITY, f64::min)
}

fn group_monotone(a: &Matrix, tol: &ToleranceProfile) -> bool {
    group_inverse(a, tol).is_ok_and(|g| is_nonnegative(&g, tol))
}

/// Range and null conditions on `K + X - A + Y U# L` (or `U + X - A`).
fn core_conditions(ledger: &mut Ledger, splits: &[Splitting], a: &Matrix, tol: &ToleranceProfile) {
    let label = if splits.len() == 3 {
        "K + X - A + Y U# L"
    } else {
        "K + U - A"
    };
    match alternating_core(splits, tol) {
        Ok(core) => {
            ledger.require(same_range(&core, a, tol), format!("R({label}) = R(A)"));
            ledger.require(same_null(&core, a, tol), format!("N({label}) = N(A)"));
        }
        Err(e) => {
            ledger.require(false, format!("{label}: {e}"));
        }
    }
}

/// `M B# >= I` entrywise for the named matrix `M`.
fn dominates_identity(m: &Matrix, b_sharp: &Matrix, tol: &ToleranceProfile) -> bool {
    let n = m.nrows();
    is_nonnegative(&(m * b_sharp - Matrix::identity(n, n)), tol)
}

/// Evaluates a convergence or comparison theorem for splittings with
/// group-inverse iteration matrices.
pub fn verify_convergence_theorem(
    theorem_id: &str,
    splits: &[Splitting],
    tol: &ToleranceProfile,
) -> Result<TheoremVerdict> {
    let id = CONVERGENCE_THEOREMS
        .iter()
        .find(|t| **t == theorem_id)
        .ok_or_else(|| Error::UnknownTheoremId(theorem_id.to_string()))?;
    match *id {
        "two-vs-three" => check_count(splits, 3..=3)?,
        _ => check_count(splits, 2..=3)?,
    }
    let a = shared_matrix(splits, tol)?.clone();
    let mut ledger = Ledger::new(id);

    ledger.require(group_monotone(&a, tol), "A group monotone");
    let reports: Vec<SplittingClassReport> = splits.iter().map(|s| s.classify(tol)).collect();
    let both_types = *id == "both-types-comparison";
    for (label, r) in LABELS.iter().zip(&reports) {
        ledger.require(
            r.verdict(SplittingClass::GWeakRegularTypeII),
            format!("{label} proper G-weak regular type II"),
        );
        if both_types {
            ledger.require(
                r.verdict(SplittingClass::GWeakRegularTypeI),
                format!("{label} proper G-weak regular type I"),
            );
        }
    }

    let h = alternating_iteration_matrix(splits, tol)?;
    let rho_h = ledger.measure("rho(H)", spectral_radius(&h)?);
    ledger.measure("rho(S)", spectral_radius(&companion_matrix(splits, tol)?)?);
    let singles: Vec<f64> = splits
        .iter()
        .zip(LABELS.iter().zip(REMAINDERS))
        .map(|(s, (u, v))| -> Result<f64> {
            let r = spectral_radius(&s.iteration_matrix())?;
            ledger.measure(format!("rho({u}#{v})"), r);
            Ok(r)
        })
        .collect::<Result<_>>()?;
    let min_single = ledger.measure("min single-step rho", minimum(&singles));

    let conclusion = match *id {
        "typeII-convergence" => rho_h < 1.0,
        "single-vs-three" | "both-types-comparison" => {
            core_conditions(&mut ledger, splits, &a, tol);
            if *id == "single-vs-three" {
                match induced_splitting(&a, &h, tol) {
                    Ok(b) => {
                        let b_sharp = b.u_inverse();
                        for (label, s) in LABELS.iter().zip(splits) {
                            ledger.require(
                                dominates_identity(s.u(), b_sharp, tol),
                                format!("{label} B# >= I"),
                            );
                        }
                    }
                    Err(e) => {
                        ledger.require(false, format!("induced splitting B: {e}"));
                    }
                }
            }
            rho_h <= min_single + INEQUALITY_SLACK && min_single < 1.0
        }
        "two-vs-three" => {
            core_conditions(&mut ledger, splits, &a, tol);
            let b_sharp = match induced_splitting(&a, &h, tol) {
                Ok(b) => Some(b.u_inverse().clone()),
                Err(e) => {
                    ledger.require(false, format!("induced splitting B: {e}"));
                    None
                }
            };
            let pairs = [("12", [0, 1]), ("13", [0, 2]), ("23", [1, 2])];
            let mut pair_radii = Vec::with_capacity(3);
            for (name, [i, j]) in pairs {
                let pair = [splits[i].clone(), splits[j].clone()];
                let hp = alternating_iteration_matrix(&pair, tol)?;
                pair_radii.push(ledger.measure(format!("rho(H{name})"), spectral_radius(&hp)?));
                match (induced_splitting(&a, &hp, tol), &b_sharp) {
                    (Ok(bp), Some(bs)) => {
                        ledger.require(
                            dominates_identity(bp.u(), bs, tol),
                            format!("B{name} B# >= I"),
                        );
                    }
                    (Err(e), _) => {
                        ledger.require(false, format!("induced splitting B{name}: {e}"));
                    }
                    (Ok(_), None) => {}
                }
            }
            let min_pair = ledger.measure("min two-step rho", minimum(&pair_radii));
            rho_h <= min_pair + INEQUALITY_SLACK && min_pair < 1.0
        }
        _ => unreachable!("id validated against CONVERGENCE_THEOREMS"),
    };
    Ok(ledger.finish(conclusion))
}

/// The splitting induced by an alternating pass, `B = M^-1` with `M` from
/// [`alternating_preconditioner`], so that `B^-1 C = H` even when `I - H` is
/// singular. For three splittings `B = K (K + X - A + Y U^-1 L)^-1 X`.
pub fn induced_from_sweeps(splits: &[Splitting], tol: &ToleranceProfile) -> Result<Splitting> {
    let m = alternating_preconditioner(splits, tol)?;
    let b = checked_inverse(&m, tol).ok_or(Error::NonsingularityHypothesisFailed)?;
    Splitting::new(splits[0].a(), b, tol)
}

fn core_is_nonsingular(splits: &[Splitting], tol: &ToleranceProfile) -> Result<bool> {
    Ok(checked_inverse(&alternating_core(splits, tol)?, tol).is_some())
}

/// Regular splitting `A = B - C` with `B^-1 C = X^-1 Y U^-1 V K^-1 L`.
///
/// `B` comes from [`induced_from_sweeps`], which equals `A (I - H)^-1` when
/// `A` is nonsingular. The result is checked for `B^-1 >= 0`, `C >= 0` and
/// `B^-1 C = H`. Regular inputs only guarantee the weaker `B^-1 >= 0`,
/// `B^-1 C >= 0`, so `ClassificationFailed` on `C` is a genuine outcome.
pub fn induced_regular_splitting(
    splits: &[Splitting],
    tol: &ToleranceProfile,
) -> Result<Splitting> {
    check_count(splits, 3..=3)?;
    shared_matrix(splits, tol)?;
    for (label, s) in LABELS.iter().zip(splits) {
        if !s.classify(tol).is_regular {
            return Err(Error::ClassificationFailed(format!(
                "{label} is not a regular splitting"
            )));
        }
    }
    if !core_is_nonsingular(splits, tol)? {
        return Err(Error::NonsingularityHypothesisFailed);
    }
    let b = induced_from_sweeps(splits, tol)?;
    check_induced_regular(&b, splits, tol)?;
    Ok(b)
}

fn check_induced_regular(
    b: &Splitting,
    splits: &[Splitting],
    tol: &ToleranceProfile,
) -> Result<()> {
    if !is_nonnegative(b.u_inverse(), tol) {
        return Err(Error::ClassificationFailed(
            "induced B^-1 has a negative entry".into(),
        ));
    }
    if !is_nonnegative(b.v(), tol) {
        return Err(Error::ClassificationFailed(
            "induced C has a negative entry".into(),
        ));
    }
    let h = alternating_iteration_matrix(splits, tol)?;
    let scale = max_abs(&h).max(1.0);
    if max_abs_diff(&b.iteration_matrix(), &h) > tol.eq_tol * scale {
        return Err(Error::ClassificationFailed(
            "induced B^-1 C differs from H".into(),
        ));
    }
    Ok(())
}

/// Evaluates a semiconvergence theorem for three splittings with
/// nonsingular `U` parts. `delta` is required by `delta-shift` only.
pub fn verify_semiconvergence_theorem(
    theorem_id: &str,
    splits: &[Splitting],
    tol: &ToleranceProfile,
    delta: Option<f64>,
) -> Result<TheoremVerdict> {
    let id = SEMICONVERGENCE_THEOREMS
        .iter()
        .find(|t| **t == theorem_id)
        .ok_or_else(|| Error::UnknownTheoremId(theorem_id.to_string()))?;
    let delta = match (*id, delta) {
        ("delta-shift", None) => return Err(Error::MissingDelta(theorem_id.to_string())),
        ("delta-shift", Some(d)) if !(d > 0.0 && d < 1.0) => {
            return Err(Error::InvalidArgument(format!(
                "delta must lie in (0, 1), got {d}"
            )))
        }
        (_, d) => d,
    };
    check_count(splits, 3..=3)?;
    let a = shared_matrix(splits, tol)?.clone();
    let mut ledger = Ledger::new(id);

    for (label, s) in LABELS.iter().zip(splits) {
        ledger.require(s.u_is_nonsingular(), format!("{label} nonsingular"));
    }
    let h = alternating_iteration_matrix(splits, tol)?;
    let cert_h = is_semiconvergent(&h, tol)?;
    ledger.measure("rho(H)", cert_h.rho);
    let gamma_h = ledger.measure("gamma(H)", cert_h.gamma);

    let conclusion = match *id {
        "regular-semiconvergence" | "delta-shift" | "induced-regular" => {
            if *id != "induced-regular" {
                ledger.require(
                    is_m_matrix_with_property_c(&a, tol)?,
                    "A M-matrix with property c",
                );
            }
            for (label, s) in LABELS.iter().zip(splits) {
                ledger.require(s.classify(tol).is_regular, format!("{label} regular"));
            }
            ledger.require(
                core_is_nonsingular(splits, tol)?,
                "K + X - A + Y U^-1 L nonsingular",
            );
            match *id {
                "regular-semiconvergence" => {
                    let min_diag = h.diagonal().iter().cloned().fold(f64::INFINITY, f64::min);
                    ledger.measure("min diag(H)", min_diag);
                    ledger.require(min_diag > tol.nonneg_tol, "diag(H) > 0");
                    cert_h.verdict
                }
                "delta-shift" => {
                    let d = delta.expect("checked above");
                    ledger.measure("delta", d);
                    let cert = is_semiconvergent(&shifted_matrix(&h, d), tol)?;
                    ledger.measure("gamma(H_delta)", cert.gamma);
                    cert.verdict
                }
                _ => match induced_from_sweeps(splits, tol) {
                    Ok(b) => {
                        ledger.measure("min B^-1", b.u_inverse().min());
                        ledger.measure("min C", b.v().min());
                        ledger.measure("|B^-1 C - H|", max_abs_diff(&b.iteration_matrix(), &h));
                        check_induced_regular(&b, splits, tol).is_ok()
                    }
                    Err(_) => false,
                },
            }
        }
        _ => quasi_theorem(id, splits, &h, gamma_h, &cert_h, &mut ledger, tol)?,
    };
    Ok(ledger.finish(conclusion))
}

struct SingleStep {
    t: Matrix,
    report: SplittingClassReport,
    semiconvergent: bool,
    gamma: f64,
}

fn quasi_theorem(
    id: &'static str,
    splits: &[Splitting],
    h: &Matrix,
    gamma_h: f64,
    cert_h: &SemiconvergenceCertificate,
    ledger: &mut Ledger,
    tol: &ToleranceProfile,
) -> Result<bool> {
    let n = h.nrows();
    let eye = Matrix::identity(n, n);
    let mut singles = Vec::with_capacity(3);
    for ((label, rem), s) in LABELS.iter().zip(REMAINDERS).zip(splits) {
        let t = s.iteration_matrix();
        let cert = is_semiconvergent(&t, tol)?;
        let name = format!("{label}^-1{rem}");
        ledger.measure(format!("gamma({name})"), cert.gamma);
        // Both index conventions appear across the quasi statements.
        ledger.flag(
            format!("index(I-{name})<=1"),
            cert.index_of_i_minus_t_le_one,
        );
        ledger.flag(format!("index({name})<=1"), index_at_most_one(&t, tol));
        singles.push(SingleStep {
            t,
            report: s.classify(tol),
            semiconvergent: cert.verdict,
            gamma: cert.gamma,
        });
    }
    let index_i_h = ledger.flag("index(I-H)<=1", cert_h.index_of_i_minus_t_le_one);

    let all = |class: SplittingClass| singles.iter().all(|s| s.report.verdict(class));
    let require_index_i_minus_t = |ledger: &mut Ledger| {
        for (label, rem) in LABELS.iter().zip(REMAINDERS) {
            let key = format!("index(I-{label}^-1{rem})<=1");
            let ok = ledger.measured[&key] == 1.0;
            ledger.require(ok, key);
        }
    };
    let require_semiconvergent = |ledger: &mut Ledger, which: &[usize]| {
        for &i in which {
            ledger.require(
                singles[i].semiconvergent,
                format!("{}^-1{} semiconvergent", LABELS[i], REMAINDERS[i]),
            );
        }
    };

    Ok(match id {
        "quasi-three-step" => {
            let same_type = [
                SplittingClass::QuasiWeakRegularTypeI,
                SplittingClass::QuasiWeakRegularTypeII,
                SplittingClass::QuasiRegular,
            ]
            .into_iter()
            .find(|c| all(*c));
            ledger.require(same_type.is_some(), "all quasi-weak regular of one type");
            require_semiconvergent(ledger, &[0, 1, 2]);
            for (label, rem) in LABELS.iter().zip(REMAINDERS) {
                let key = format!("index({label}^-1{rem})<=1");
                let ok = ledger.measured[&key] == 1.0;
                ledger.require(ok, key);
            }
            let t12 = &singles[1].t * &singles[0].t;
            let pair_ok = ledger.flag(
                "index(I-U^-1VK^-1L)<=1",
                index_at_most_one(&(&eye - &t12), tol),
            );
            ledger.require(pair_ok, "index(I-U^-1VK^-1L) <= 1");
            let h_ok = ledger.flag("index(H)<=1", index_at_most_one(h, tol));
            ledger.require(h_ok, "index(H) <= 1");
            let induced_same_type = match (same_type, induced_from_sweeps(splits, tol)) {
                (Some(class), Ok(b)) => b.classify(tol).verdict(class),
                _ => false,
            };
            ledger.flag("induced splitting of the same type", induced_same_type);
            cert_h.verdict && (same_type.is_none() || induced_same_type)
        }
        "quasi-gamma-vs-single" => {
            ledger.require(singles[0].report.is_quasi_regular, "K quasi regular");
            require_semiconvergent(ledger, &[0]);
            for i in [1, 2] {
                ledger.require(
                    singles[i].report.is_quasi_weak_regular_type1,
                    format!("{} quasi-weak regular type I", LABELS[i]),
                );
            }
            require_index_i_minus_t(ledger);
            ledger.require(index_i_h, "index(I-H) <= 1");
            let gamma_x = singles[2].gamma;
            gamma_h <= gamma_x + INEQUALITY_SLACK && gamma_x < 1.0
        }
        "quasi-comparison" => {
            for (label, s) in LABELS.iter().zip(&singles) {
                ledger.require(s.report.is_quasi_regular, format!("{label} quasi regular"));
            }
            require_semiconvergent(ledger, &[0, 1, 2]);
            require_index_i_minus_t(ledger);
            ledger.require(index_i_h, "index(I-H) <= 1");
            let min_gamma = ledger.measure(
                "min single-step gamma",
                minimum(&singles.iter().map(|s| s.gamma).collect::<Vec<_>>()),
            );
            gamma_h <= min_gamma + INEQUALITY_SLACK && min_gamma < 1.0
        }
        "quasi-two-vs-three" => {
            for (label, s) in LABELS.iter().zip(&singles) {
                ledger.require(s.report.is_quasi_regular, format!("{label} quasi regular"));
            }
            require_semiconvergent(ledger, &[0, 1, 2]);
            require_index_i_minus_t(ledger);
            ledger.require(index_i_h, "index(I-H) <= 1");
            match induced_from_sweeps(splits, tol) {
                Ok(b) => {
                    ledger.require(b.classify(tol).is_quasi_regular, "induced B quasi regular");
                }
                Err(_) => {
                    ledger.require(false, "induced B exists");
                }
            }
            let pairs = [("12", [0, 1]), ("13", [0, 2]), ("23", [1, 2])];
            let mut pair_gammas = Vec::with_capacity(3);
            for (name, [i, j]) in pairs {
                let pair = [splits[i].clone(), splits[j].clone()];
                let hp = &singles[j].t * &singles[i].t;
                let cert = is_semiconvergent(&hp, tol)?;
                pair_gammas.push(ledger.measure(format!("gamma(H{name})"), cert.gamma));
                ledger.require(
                    cert.index_of_i_minus_t_le_one,
                    format!("index(I-H{name}) <= 1"),
                );
                match induced_from_sweeps(&pair, tol) {
                    Ok(b) => {
                        ledger.require(
                            b.classify(tol).is_quasi_regular,
                            format!("induced B{name} quasi regular"),
                        );
                    }
                    Err(_) => {
                        ledger.require(false, format!("induced B{name} exists"));
                    }
                }
            }
            let min_pair = ledger.measure("min two-step gamma", minimum(&pair_gammas));
            gamma_h <= min_pair + INEQUALITY_SLACK && min_pair < 1.0
        }
        _ => unreachable!("id validated against SEMICONVERGENCE_THEOREMS"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::singular_triple;
    use crate::problems::{make_laplace, make_random_walk};

    fn tol() -> ToleranceProfile {
        ToleranceProfile::default()
    }

    fn m(rows: usize, data: &[f64]) -> Matrix {
        Matrix::from_row_slice(rows, data.len() / rows, data)
    }

    fn walk_triple(n: usize) -> Vec<Splitting> {
        let a = make_random_walk(n).unwrap().a;
        [2.0, 2.5, 3.0]
            .iter()
            .map(|&alpha| Splitting::diag_scaled(&a, alpha, &tol()).unwrap())
            .collect()
    }

    #[test]
    fn identity_is_semiconvergent_with_identity_limit() {
        let c = is_semiconvergent(&Matrix::identity(3, 3), &tol()).unwrap();
        assert!(c.verdict && c.has_eigenvalue_one);
        assert_eq!(c.gamma, 0.0);
        assert!(max_abs_diff(c.limit_matrix.as_ref().unwrap(), &Matrix::identity(3, 3)) < 1e-15);
    }

    #[test]
    fn jordan_block_is_not_semiconvergent() {
        let c = is_semiconvergent(&m(2, &[1.0, 1.0, 0.0, 1.0]), &tol()).unwrap();
        assert!(!c.verdict);
        assert!(!c.index_of_i_minus_t_le_one);
        assert!(c.limit_matrix.is_none());
    }

    #[test]
    fn convergent_matrix_has_zero_limit() {
        let c = is_semiconvergent(&m(2, &[0.5, 0.2, 0.0, -0.3]), &tol()).unwrap();
        assert!(c.verdict && !c.has_eigenvalue_one);
        assert!(max_abs(c.limit_matrix.as_ref().unwrap()) < 1e-15);
        let c = is_semiconvergent(&m(2, &[0.0, 1.0, 1.0, 0.0]), &tol()).unwrap();
        assert!(!c.verdict, "eigenvalue -1 keeps gamma at 1");
    }

    #[test]
    fn oracle_examples() {
        let lim = power_limit_oracle(&m(2, &[1.0, 0.0, 0.0, 0.5]), 1 << 40, &tol()).unwrap();
        assert!(max_abs_diff(&lim, &m(2, &[1.0, 0.0, 0.0, 0.0])) < 1e-12);
        assert!(power_limit_oracle(&m(2, &[0.0, 1.0, 1.0, 0.0]), 1 << 40, &tol()).is_none());
        assert!(power_limit_oracle(&m(2, &[1.0, 1.0, 0.0, 1.0]), 1 << 40, &tol()).is_none());
        assert!(power_limit_oracle(&m(1, &[1.5]), 1 << 40, &tol()).is_none());
    }

    #[test]
    fn oracle_agrees_with_certificate_on_oblique_projection() {
        // T = diag(1, 0.9) in a skewed basis.
        let p = m(2, &[1.0, 2.0, 0.5, 3.0]);
        let t = &p * m(2, &[1.0, 0.0, 0.0, 0.9]) * p.clone().try_inverse().unwrap();
        let cert = is_semiconvergent(&t, &tol()).unwrap();
        let lim = power_limit_oracle(&t, 1 << 40, &tol()).unwrap();
        assert!(max_abs_diff(cert.limit_matrix.as_ref().unwrap(), &lim) < 1e-8);
    }

    #[test]
    fn property_c_examples() {
        let a = make_random_walk(10).unwrap().a;
        assert!(is_m_matrix_with_property_c(&a, &tol()).unwrap());
        assert!(!is_m_matrix_with_property_c(&m(2, &[1.0, 2.0, 0.0, 1.0]), &tol()).unwrap());
        assert!(is_m_matrix_with_property_c(&Matrix::zeros(3, 3), &tol()).unwrap());
        // Nonsingular M-matrix: s^-1 B is convergent.
        assert!(is_m_matrix_with_property_c(&m(2, &[2.0, -1.0, -1.0, 2.0]), &tol()).unwrap());
        // Z-matrix with rho(B) > s is not an M-matrix.
        assert!(!is_m_matrix_with_property_c(&m(2, &[1.0, -2.0, -2.0, 1.0]), &tol()).unwrap());
        // Singular M-matrix of index two lacks property c.
        assert!(!is_m_matrix_with_property_c(&m(2, &[0.0, -1.0, 0.0, 0.0]), &tol()).unwrap());
    }

    #[test]
    fn singular_triple_is_a_converse_failure() {
        let ex = singular_triple();
        let splits: Vec<Splitting> = [&ex.k, &ex.u, &ex.x]
            .iter()
            .map(|u| Splitting::new(&ex.a, (*u).clone(), &tol()).unwrap())
            .collect();
        let v = verify_convergence_theorem("typeII-convergence", &splits, &tol()).unwrap();
        assert!(!v.hypotheses_hold);
        assert!(v.conclusion_holds);
        assert!((v.measured_quantities["rho(H)"] - 0.25).abs() < 1e-10);
        assert_eq!(v.hypothesis_failures.len(), 3, "{v}");
    }

    #[test]
    fn laplace_both_types_comparison() {
        let lap = make_laplace(7).unwrap();
        let splits: Vec<Splitting> = [1.0, 1.5, 1.75]
            .iter()
            .map(|&alpha| Splitting::diag_scaled(&lap.a, alpha, &tol()).unwrap())
            .collect();
        let v = verify_convergence_theorem("both-types-comparison", &splits, &tol()).unwrap();
        assert!(v.hypotheses_hold, "{v}");
        assert!(v.conclusion_holds);
        let single = verify_convergence_theorem("typeII-convergence", &splits, &tol()).unwrap();
        assert!(single.hypotheses_hold && single.conclusion_holds);
        let two = verify_convergence_theorem("two-vs-three", &splits, &tol()).unwrap();
        assert!(two.implication_holds());
        assert!(two.measured_quantities["rho(H)"] <= two.measured_quantities["min two-step rho"]);
    }

    #[test]
    fn unknown_ids_and_missing_delta() {
        let splits = walk_triple(5);
        assert!(matches!(
            verify_convergence_theorem("nope", &splits, &tol()),
            Err(Error::UnknownTheoremId(_))
        ));
        assert!(matches!(
            verify_semiconvergence_theorem("delta-shift", &splits, &tol(), None),
            Err(Error::MissingDelta(_))
        ));
        assert!(verify_semiconvergence_theorem("delta-shift", &splits, &tol(), Some(1.0)).is_err());
        assert!(
            verify_semiconvergence_theorem("quasi-comparison", &splits[..2], &tol(), None).is_err()
        );
    }

    #[test]
    fn random_walk_regular_triple() {
        let splits = walk_triple(10);
        let h = alternating_iteration_matrix(&splits, &tol()).unwrap();
        let cert = is_semiconvergent(&h, &tol()).unwrap();
        assert!(cert.verdict);
        assert!((cert.gamma - 0.9274).abs() < 5e-5, "{}", cert.gamma);

        for d in [0.1, 0.5, 0.9] {
            let v =
                verify_semiconvergence_theorem("delta-shift", &splits, &tol(), Some(d)).unwrap();
            assert!(v.hypotheses_hold && v.conclusion_holds, "{v}");
        }
        let v = verify_semiconvergence_theorem("regular-semiconvergence", &splits, &tol(), None)
            .unwrap();
        assert!(v.hypotheses_hold && v.conclusion_holds, "{v}");
        let v = verify_semiconvergence_theorem("quasi-comparison", &splits, &tol(), None).unwrap();
        assert!(v.implication_holds(), "{v}");
        assert!(
            v.measured_quantities["gamma(H)"] <= v.measured_quantities["min single-step gamma"]
        );

        for id in SEMICONVERGENCE_THEOREMS
            .iter()
            .filter(|id| !["delta-shift", "induced-regular"].contains(*id))
        {
            let v = verify_semiconvergence_theorem(id, &splits, &tol(), None).unwrap();
            assert!(v.implication_holds(), "{v}");
        }
    }

    #[test]
    fn induced_regular_of_trivial_triple_is_a() {
        let a = m(2, &[2.0, -1.0, -1.0, 2.0]);
        let s = Splitting::new(&a, a.clone(), &tol()).unwrap();
        let b = induced_regular_splitting(&[s.clone(), s.clone(), s], &tol()).unwrap();
        assert!(max_abs_diff(b.u(), &a) < 1e-12);
        assert!(max_abs(b.v()) < 1e-12);
    }

    #[test]
    fn induced_from_sweeps_matches_nonsingular_formula() {
        let lap = make_laplace(5).unwrap();
        let splits: Vec<Splitting> = [1.0, 1.5, 1.75]
            .iter()
            .map(|&alpha| Splitting::diag_scaled(&lap.a, alpha, &tol()).unwrap())
            .collect();
        let b = induced_from_sweeps(&splits, &tol()).unwrap();
        let h = alternating_iteration_matrix(&splits, &tol()).unwrap();
        let direct = induced_splitting(&lap.a, &h, &tol()).unwrap();
        assert!(max_abs_diff(b.u(), direct.u()) < 1e-10);
        assert!(max_abs_diff(&b.iteration_matrix(), &h) < 1e-12);
    }

    #[test]
    fn induced_splitting_of_regular_triples_is_only_weak_regular() {
        // B^-1 >= 0 and B^-1 C = H >= 0, but C picks up negative entries.
        for splits in [walk_triple(10), {
            let a = make_laplace(5).unwrap().a;
            [1.0, 1.5, 1.75]
                .iter()
                .map(|&alpha| Splitting::diag_scaled(&a, alpha, &tol()).unwrap())
                .collect()
        }] {
            let b = induced_from_sweeps(&splits, &tol()).unwrap();
            let r = b.classify(&tol());
            assert!(r.is_weak_regular_type1 && !r.is_regular);
            assert!(b.v().min() < -1e-3);
            assert!(matches!(
                induced_regular_splitting(&splits, &tol()),
                Err(Error::ClassificationFailed(_))
            ));
            let v =
                verify_semiconvergence_theorem("induced-regular", &splits, &tol(), None).unwrap();
            assert!(v.hypotheses_hold && !v.conclusion_holds);
        }
    }

    #[test]
    fn induced_regular_rejects_non_regular() {
        let ex = singular_triple();
        let s = Splitting::new(&ex.a, ex.k.clone(), &tol()).unwrap();
        assert!(matches!(
            induced_regular_splitting(&[s.clone(), s.clone(), s], &tol()),
            Err(Error::ClassificationFailed(_))
        ));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn gamma_never_exceeds_rho(entries in proptest::collection::vec(-2.0f64..2.0, 1..=36)) {
                let n = (entries.len() as f64).sqrt() as usize;
                let t = Matrix::from_row_slice(n, n, &entries[..n * n]);
                let cert = is_semiconvergent(&t, &tol()).unwrap();
                prop_assert!(cert.gamma <= cert.rho + 1e-12);
                prop_assert_eq!(cert.verdict, cert.limit_matrix.is_some());
            }
        }
    }
}
