//! Splittings `A = U - V`, their classification, and the matrices built from
//! sequences of splittings (alternating iteration matrix, companion matrix,
//! induced splittings).
//!
//! Sequences are always given in application order: for `[K-L, U-V, X-Y]` the
//! first sweep uses `K`, so the iteration matrix is `X#Y U#V K#L`.

use std::fmt;
use std::sync::OnceLock;

use crate::dense::{
    checked_inverse, ensure_finite, ensure_same_shape, ensure_square, group_inverse,
    index_at_most_one, max_abs, max_abs_diff, most_negative, same_null, same_range, Matrix, Solver,
    ToleranceProfile,
};
use crate::error::{Error, Result};

/// A splitting `A = U - V`; `V` is always derived as `U - A`.
#[derive(Debug, Clone)]
pub struct Splitting {
    a: Matrix,
    u: Matrix,
    v: Matrix,
    solver: Solver,
    inverse: OnceLock<Matrix>,
}

impl Splitting {
    /// Builds the splitting and caches a solver for `U` (an LU or diagonal
    /// factorization when `U` is nonsingular, the group inverse otherwise).
    pub fn new(a: &Matrix, u: Matrix, tol: &ToleranceProfile) -> Result<Self> {
        ensure_square(a)?;
        ensure_same_shape(a, &u)?;
        ensure_finite(a)?;
        ensure_finite(&u)?;
        let solver = Solver::new(&u, tol)?;
        let v = &u - a;
        Ok(Self {
            a: a.clone(),
            u,
            v,
            solver,
            inverse: OnceLock::new(),
        })
    }

    /// `U = alpha * diag(A)`.
    pub fn diag_scaled(a: &Matrix, alpha: f64, tol: &ToleranceProfile) -> Result<Self> {
        ensure_square(a)?;
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "diagonal scale must be positive, got {alpha}"
            )));
        }
        if let Some(i) = a.diagonal().iter().position(|d| *d == 0.0) {
            return Err(Error::ZeroDiagonal(i));
        }
        let u = Matrix::from_diagonal(&(a.diagonal() * alpha));
        Self::new(a, u, tol)
    }

    pub fn a(&self) -> &Matrix {
        &self.a
    }

    pub fn u(&self) -> &Matrix {
        &self.u
    }

    pub fn v(&self) -> &Matrix {
        &self.v
    }

    pub fn dim(&self) -> usize {
        self.a.nrows()
    }

    pub fn solver(&self) -> &Solver {
        &self.solver
    }

    pub fn u_is_nonsingular(&self) -> bool {
        self.solver.is_nonsingular()
    }

    /// `U^-1`, or `U#` when `U` is singular. Computed on first use.
    pub fn u_inverse(&self) -> &Matrix {
        self.inverse.get_or_init(|| self.solver.to_matrix())
    }

    /// `U# V`.
    pub fn iteration_matrix(&self) -> Matrix {
        self.solver.solve_matrix(&self.v)
    }

    /// `V U#`.
    pub fn companion_factor(&self) -> Matrix {
        self.solver.right_solve_matrix(&self.v)
    }

    pub fn classify(&self, tol: &ToleranceProfile) -> SplittingClassReport {
        classify(self, tol)
    }
}

/// The ten splitting classes a [`SplittingClassReport`] decides.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SplittingClass {
    Proper,
    GRegular,
    GWeakRegularTypeI,
    GWeakRegularTypeII,
    Regular,
    WeakRegularTypeI,
    WeakRegularTypeII,
    QuasiRegular,
    QuasiWeakRegularTypeI,
    QuasiWeakRegularTypeII,
}

impl SplittingClass {
    pub const ALL: [SplittingClass; 10] = [
        SplittingClass::Proper,
        SplittingClass::GRegular,
        SplittingClass::GWeakRegularTypeI,
        SplittingClass::GWeakRegularTypeII,
        SplittingClass::Regular,
        SplittingClass::WeakRegularTypeI,
        SplittingClass::WeakRegularTypeII,
        SplittingClass::QuasiRegular,
        SplittingClass::QuasiWeakRegularTypeI,
        SplittingClass::QuasiWeakRegularTypeII,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SplittingClass::Proper => "proper",
            SplittingClass::GRegular => "g_regular",
            SplittingClass::GWeakRegularTypeI => "g_weak_regular_type1",
            SplittingClass::GWeakRegularTypeII => "g_weak_regular_type2",
            SplittingClass::Regular => "regular",
            SplittingClass::WeakRegularTypeI => "weak_regular_type1",
            SplittingClass::WeakRegularTypeII => "weak_regular_type2",
            SplittingClass::QuasiRegular => "quasi_regular",
            SplittingClass::QuasiWeakRegularTypeI => "quasi_weak_regular_type1",
            SplittingClass::QuasiWeakRegularTypeII => "quasi_weak_regular_type2",
        }
    }
}

impl fmt::Display for SplittingClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Why a class verdict came out false.
#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    /// `matrix` has an entry below `-nonneg_tol`.
    NegativeEntry {
        matrix: &'static str,
        row: usize,
        col: usize,
        value: f64,
    },
    RangeMismatch,
    NullSpaceMismatch,
    SingularU,
    /// The named matrix has index greater than one.
    IndexTooLarge(&'static str),
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::NegativeEntry {
                matrix,
                row,
                col,
                value,
            } => write!(f, "{matrix}[{row},{col}] = {value:.6}"),
            Witness::RangeMismatch => f.write_str("R(U) != R(A)"),
            Witness::NullSpaceMismatch => f.write_str("N(U) != N(A)"),
            Witness::SingularU => f.write_str("U is singular"),
            Witness::IndexTooLarge(m) => write!(f, "index({m}) > 1"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SplittingClassReport {
    pub is_proper: bool,
    pub is_g_regular: bool,
    pub is_g_weak_regular_type1: bool,
    pub is_g_weak_regular_type2: bool,
    pub is_regular: bool,
    pub is_weak_regular_type1: bool,
    pub is_weak_regular_type2: bool,
    pub is_quasi_regular: bool,
    pub is_quasi_weak_regular_type1: bool,
    pub is_quasi_weak_regular_type2: bool,
    /// One entry per false verdict.
    pub witnesses: Vec<(SplittingClass, Witness)>,
}

impl SplittingClassReport {
    pub fn verdict(&self, class: SplittingClass) -> bool {
        match class {
            SplittingClass::Proper => self.is_proper,
            SplittingClass::GRegular => self.is_g_regular,
            SplittingClass::GWeakRegularTypeI => self.is_g_weak_regular_type1,
            SplittingClass::GWeakRegularTypeII => self.is_g_weak_regular_type2,
            SplittingClass::Regular => self.is_regular,
            SplittingClass::WeakRegularTypeI => self.is_weak_regular_type1,
            SplittingClass::WeakRegularTypeII => self.is_weak_regular_type2,
            SplittingClass::QuasiRegular => self.is_quasi_regular,
            SplittingClass::QuasiWeakRegularTypeI => self.is_quasi_weak_regular_type1,
            SplittingClass::QuasiWeakRegularTypeII => self.is_quasi_weak_regular_type2,
        }
    }

    pub fn witness(&self, class: SplittingClass) -> Option<&Witness> {
        self.witnesses
            .iter()
            .find(|(c, _)| *c == class)
            .map(|(_, w)| w)
    }
}

impl fmt::Display for SplittingClassReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for class in SplittingClass::ALL {
            let yes = self.verdict(class);
            write!(f, "{:<26}{}", class.name(), if yes { "yes" } else { "no" })?;
            if let Some(w) = self.witness(class) {
                write!(f, "  ({w})")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Entrywise `m >= 0` check returning the most negative entry on failure.
fn nonneg(name: &'static str, m: &Matrix, tol: &ToleranceProfile) -> Result<(), Witness> {
    match most_negative(m, tol) {
        None => Ok(()),
        Some((row, col, value)) => Err(Witness::NegativeEntry {
            matrix: name,
            row,
            col,
            value,
        }),
    }
}

pub fn classify(s: &Splitting, tol: &ToleranceProfile) -> SplittingClassReport {
    use SplittingClass as C;

    let mut witnesses = Vec::new();
    let mut record = |class: SplittingClass, r: Result<(), Witness>| match r {
        Ok(()) => true,
        Err(w) => {
            witnesses.push((class, w));
            false
        }
    };

    let proper_check = if !same_range(&s.u, &s.a, tol) {
        Err(Witness::RangeMismatch)
    } else if !same_null(&s.u, &s.a, tol) {
        Err(Witness::NullSpaceMismatch)
    } else {
        Ok(())
    };

    let u_inv = s.u_inverse();
    let u_inv_name = if s.u_is_nonsingular() { "U^-1" } else { "U#" };
    let u_inv_check = nonneg(u_inv_name, u_inv, tol);
    let v_check = nonneg("V", &s.v, tol);
    let t = s.iteration_matrix();
    let t_check = nonneg(if s.u_is_nonsingular() { "U^-1V" } else { "U#V" }, &t, tol);
    let c = s.companion_factor();
    let c_check = nonneg(if s.u_is_nonsingular() { "VU^-1" } else { "VU#" }, &c, tol);

    // Proper-class verdicts need the splitting to be proper first.
    let g = |check: &Result<(), Witness>| -> Result<(), Witness> {
        proper_check.clone()?;
        u_inv_check.clone()?;
        check.clone()
    };
    let is_proper = record(C::Proper, proper_check.clone());
    let is_g_regular = record(C::GRegular, g(&v_check));
    let is_g_weak_regular_type1 = record(C::GWeakRegularTypeI, g(&t_check));
    let is_g_weak_regular_type2 = record(C::GWeakRegularTypeII, g(&c_check));

    let plain = |check: &Result<(), Witness>| -> Result<(), Witness> {
        if !s.u_is_nonsingular() {
            return Err(Witness::SingularU);
        }
        u_inv_check.clone()?;
        check.clone()
    };
    let is_regular = record(C::Regular, plain(&v_check));
    let is_weak_regular_type1 = record(C::WeakRegularTypeI, plain(&t_check));
    let is_weak_regular_type2 = record(C::WeakRegularTypeII, plain(&c_check));

    let quasi = quasi_checks(s, &t, &c, tol);
    let quasi_verdict = |pick: fn(&QuasiMatrices) -> (&'static str, &Matrix)| {
        if !s.u_is_nonsingular() {
            return Err(Witness::SingularU);
        }
        u_inv_check.clone()?;
        let q = quasi.as_ref().map_err(|w| w.clone())?;
        let (name, m) = pick(q);
        nonneg(name, m, tol)
    };
    let is_quasi_regular = record(C::QuasiRegular, quasi_verdict(|q| ("VK1", &q.v_k1)));
    let is_quasi_weak_regular_type1 = record(
        C::QuasiWeakRegularTypeI,
        quasi_verdict(|q| ("U^-1VK1", &q.t_k1)),
    );
    let is_quasi_weak_regular_type2 = record(
        C::QuasiWeakRegularTypeII,
        quasi_verdict(|q| ("K2VU^-1", &q.k2_c)),
    );

    SplittingClassReport {
        is_proper,
        is_g_regular,
        is_g_weak_regular_type1,
        is_g_weak_regular_type2,
        is_regular,
        is_weak_regular_type1,
        is_weak_regular_type2,
        is_quasi_regular,
        is_quasi_weak_regular_type1,
        is_quasi_weak_regular_type2,
        witnesses,
    }
}

struct QuasiMatrices {
    v_k1: Matrix,
    t_k1: Matrix,
    k2_c: Matrix,
}

/// `K1 = (I - T)(I - T)#` and `K2 = (I - C)#(I - C)` with `T = U^-1 V`,
/// `C = V U^-1`, and the three products the quasi classes test.
fn quasi_checks(
    s: &Splitting,
    t: &Matrix,
    c: &Matrix,
    tol: &ToleranceProfile,
) -> Result<QuasiMatrices, Witness> {
    if !s.u_is_nonsingular() {
        return Err(Witness::SingularU);
    }
    let n = s.dim();
    let i = Matrix::identity(n, n);
    let i_t = &i - t;
    let i_c = &i - c;
    if !index_at_most_one(&i_t, tol) {
        return Err(Witness::IndexTooLarge("I-U^-1V"));
    }
    if !index_at_most_one(&i_c, tol) {
        return Err(Witness::IndexTooLarge("I-VU^-1"));
    }
    let i_t_sharp = group_inverse(&i_t, tol).map_err(|_| Witness::IndexTooLarge("I-U^-1V"))?;
    let i_c_sharp = group_inverse(&i_c, tol).map_err(|_| Witness::IndexTooLarge("I-VU^-1"))?;
    let k1 = &i_t * i_t_sharp;
    let k2 = i_c_sharp * &i_c;
    Ok(QuasiMatrices {
        v_k1: &s.v * &k1,
        t_k1: t * &k1,
        k2_c: k2 * c,
    })
}

/// Checks that every splitting shares the same `A` and returns it.
pub fn shared_matrix<'a>(splits: &'a [Splitting], tol: &ToleranceProfile) -> Result<&'a Matrix> {
    let first = splits
        .first()
        .ok_or_else(|| Error::InvalidArgument("at least one splitting is required".into()))?;
    let a = first.a();
    let slack = tol.eq_tol * max_abs(a).max(1.0);
    for s in &splits[1..] {
        if s.a().shape() != a.shape() || max_abs_diff(s.a(), a) > slack {
            return Err(Error::MismatchedA);
        }
    }
    Ok(a)
}

fn check_arity(splits: &[Splitting], range: std::ops::RangeInclusive<usize>) -> Result<()> {
    if range.contains(&splits.len()) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "expected {}..={} splittings, got {}",
            range.start(),
            range.end(),
            splits.len()
        )))
    }
}

/// `H = T_last ... T_first` with `T_i = U_i# V_i`.
pub fn alternating_iteration_matrix(
    splits: &[Splitting],
    tol: &ToleranceProfile,
) -> Result<Matrix> {
    check_arity(splits, 1..=3)?;
    shared_matrix(splits, tol)?;
    let mut h = splits[0].iteration_matrix();
    for s in &splits[1..] {
        h = s.solver().solve_matrix(&(s.v() * h));
    }
    Ok(h)
}

/// `S = C_last ... C_first` with `C_i = V_i U_i#`, e.g. `Y X# V U# L K#`.
pub fn companion_matrix(splits: &[Splitting], tol: &ToleranceProfile) -> Result<Matrix> {
    check_arity(splits, 1..=3)?;
    shared_matrix(splits, tol)?;
    let mut s = splits[0].companion_factor();
    for sp in &splits[1..] {
        s = sp.companion_factor() * s;
    }
    Ok(s)
}

/// `M` in `x_next = H x + M b` for one alternating pass:
/// `M_1 = U_1#`, `M_i = U_i# (V_i M_(i-1) + I)`.
pub fn alternating_preconditioner(splits: &[Splitting], tol: &ToleranceProfile) -> Result<Matrix> {
    check_arity(splits, 1..=3)?;
    shared_matrix(splits, tol)?;
    let n = splits[0].dim();
    let mut m = splits[0].u_inverse().clone();
    for s in &splits[1..] {
        let rhs = s.v() * &m + Matrix::identity(n, n);
        m = s.solver().solve_matrix(&rhs);
    }
    Ok(m)
}

/// The splitting `A = B - C` with `B = A (I - H)^-1`, so that `B# C = H`.
pub fn induced_splitting(a: &Matrix, h: &Matrix, tol: &ToleranceProfile) -> Result<Splitting> {
    ensure_square(a)?;
    ensure_same_shape(a, h)?;
    let n = a.nrows();
    let i_h = Matrix::identity(n, n) - h;
    let inv = checked_inverse(&i_h, tol).ok_or(Error::SingularIminusH)?;
    Splitting::new(a, a * inv, tol)
}

/// `K + X - A + Y U# L` for three splittings, `U + X - A` for two.
pub fn alternating_core(splits: &[Splitting], tol: &ToleranceProfile) -> Result<Matrix> {
    check_arity(splits, 2..=3)?;
    let a = shared_matrix(splits, tol)?;
    Ok(match splits {
        [first, last] => first.u() + last.u() - a,
        [k, u, x] => k.u() + x.u() - a + x.v() * u.solver().solve_matrix(k.v()),
        _ => unreachable!(),
    })
}

/// Closed form of the induced `B#`: `X# (K + X - A + Y U# L) K#` for three
/// splittings, `X# (U + X - A) U#` for two. Fails unless the middle factor has
/// the range and null space of `A`.
pub fn b_sharp_closed_form(splits: &[Splitting], tol: &ToleranceProfile) -> Result<Matrix> {
    let core = alternating_core(splits, tol)?;
    let a = splits[0].a();
    let label = if splits.len() == 3 {
        "K + X - A + Y U# L"
    } else {
        "U + X - A"
    };
    if !same_range(&core, a, tol) || !same_null(&core, a, tol) {
        return Err(Error::RangeNullConditionFailed(label));
    }
    let first = &splits[0];
    let last = &splits[splits.len() - 1];
    Ok(last
        .solver()
        .solve_matrix(&first.solver().right_solve_matrix(&core)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense::{spectral_radius, Vector};
    use crate::fixtures::singular_triple;

    fn tol() -> ToleranceProfile {
        ToleranceProfile::default()
    }

    fn triple() -> (Matrix, Vec<Splitting>) {
        let ex = singular_triple();
        let splits = vec![
            Splitting::new(&ex.a, ex.k.clone(), &tol()).unwrap(),
            Splitting::new(&ex.a, ex.u.clone(), &tol()).unwrap(),
            Splitting::new(&ex.a, ex.x.clone(), &tol()).unwrap(),
        ];
        (ex.a, splits)
    }

    #[test]
    fn derived_remainder_matches_fixture() {
        let ex = singular_triple();
        let s = Splitting::new(&ex.a, ex.k.clone(), &tol()).unwrap();
        assert!(max_abs_diff(s.v(), &ex.l) < 1e-15);
        assert!(!s.u_is_nonsingular());
    }

    #[test]
    fn identity_split_has_zero_remainder() {
        let a = Matrix::from_row_slice(2, 2, &[3.0, -1.0, -1.0, 3.0]);
        let s = Splitting::new(&a, a.clone(), &tol()).unwrap();
        assert_eq!(max_abs(s.v()), 0.0);
        let report = s.classify(&tol());
        assert!(report.is_proper);
        // A^-1 >= 0 for this M-matrix.
        assert!(report.is_regular);
    }

    #[test]
    fn mismatched_dimensions_error() {
        let a = Matrix::identity(3, 3);
        let u = Matrix::identity(2, 2);
        assert!(matches!(
            Splitting::new(&a, u, &tol()),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn singular_u_without_group_inverse_errors() {
        let a = Matrix::identity(2, 2);
        let u = Matrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        assert!(matches!(
            Splitting::new(&a, u, &tol()),
            Err(Error::IndexGreaterThanOne)
        ));
    }

    #[test]
    fn singular_triple_classification() {
        let (_, splits) = triple();
        let expected_witness = [-1.0, -1.0, -0.25];
        let names = ["LK#", "VU#", "YX#"];
        for (s, (w, _)) in splits.iter().zip(expected_witness.iter().zip(names)) {
            let r = s.classify(&tol());
            assert!(r.is_proper);
            assert!(!r.is_g_weak_regular_type2);
            match r.witness(SplittingClass::GWeakRegularTypeII) {
                Some(Witness::NegativeEntry { value, .. }) => assert!((value - w).abs() < 1e-12),
                other => panic!("unexpected witness {other:?}"),
            }
            assert!(!r.is_regular);
            assert_eq!(
                r.witness(SplittingClass::Regular),
                Some(&Witness::SingularU)
            );
        }
    }

    #[test]
    fn singular_triple_radius() {
        let (_, splits) = triple();
        let h = alternating_iteration_matrix(&splits, &tol()).unwrap();
        assert!((spectral_radius(&h).unwrap() - 0.25).abs() < 1e-10);
        let s = companion_matrix(&splits, &tol()).unwrap();
        assert!((spectral_radius(&s).unwrap() - 0.25).abs() < 1e-10);
    }

    #[test]
    fn iteration_matrix_composition() {
        let a = Matrix::from_row_slice(3, 3, &[4.0, -1.0, 0.0, -1.0, 4.0, -1.0, 0.0, -1.0, 4.0]);
        let s = Splitting::diag_scaled(&a, 1.3, &tol()).unwrap();
        let t = s.iteration_matrix();
        let h = alternating_iteration_matrix(&[s.clone(), s.clone()], &tol()).unwrap();
        assert!(max_abs_diff(&h, &(&t * &t)) < 1e-14);

        let zero = Splitting::new(&a, a.clone(), &tol()).unwrap();
        let h0 = alternating_iteration_matrix(std::slice::from_ref(&zero), &tol()).unwrap();
        assert_eq!(max_abs(&h0), 0.0);
        let s0 = companion_matrix(&[s.clone(), zero], &tol()).unwrap();
        assert_eq!(max_abs(&s0), 0.0);
    }

    #[test]
    fn mismatched_a_is_rejected() {
        let a = Matrix::identity(2, 2) * 2.0;
        let b = Matrix::identity(2, 2) * 3.0;
        let s1 = Splitting::diag_scaled(&a, 1.0, &tol()).unwrap();
        let s2 = Splitting::diag_scaled(&b, 1.0, &tol()).unwrap();
        assert!(matches!(
            alternating_iteration_matrix(&[s1, s2], &tol()),
            Err(Error::MismatchedA)
        ));
    }

    #[test]
    fn arity_is_checked() {
        let a = Matrix::identity(2, 2);
        let s = Splitting::diag_scaled(&a, 2.0, &tol()).unwrap();
        let four = vec![s.clone(), s.clone(), s.clone(), s];
        assert!(alternating_iteration_matrix(&four, &tol()).is_err());
        assert!(alternating_iteration_matrix(&[], &tol()).is_err());
    }

    #[test]
    fn induced_splitting_reproduces_h() {
        let (a, splits) = triple();
        let h = alternating_iteration_matrix(&splits, &tol()).unwrap();
        let induced = induced_splitting(&a, &h, &tol()).unwrap();
        let bc = induced.iteration_matrix();
        assert!(max_abs_diff(&bc, &h) < 1e-10);
        let closed = b_sharp_closed_form(&splits, &tol()).unwrap();
        assert!(max_abs_diff(&closed, induced.u_inverse()) < 1e-10);
        // Uniqueness: recomputing B from B#C gives B back.
        let again = induced_splitting(&a, &bc, &tol()).unwrap();
        assert!(max_abs_diff(again.u(), induced.u()) < 1e-9);
    }

    #[test]
    fn preconditioner_inverts_to_induced_b() {
        // Gauss-Seidel style triple on a nonsingular matrix.
        let a = Matrix::from_row_slice(3, 3, &[4.0, -1.0, -2.0, -1.0, 4.0, -1.0, -2.0, -1.0, 4.0]);
        let lower = a.lower_triangle();
        let upper = a.upper_triangle();
        let splits = vec![
            Splitting::diag_scaled(&a, 1.5, &tol()).unwrap(),
            Splitting::new(&a, lower, &tol()).unwrap(),
            Splitting::new(&a, upper, &tol()).unwrap(),
        ];
        let h = alternating_iteration_matrix(&splits, &tol()).unwrap();
        let m = alternating_preconditioner(&splits, &tol()).unwrap();
        let i_h = Matrix::identity(3, 3) - &h;
        assert!(max_abs_diff(&(&m * &a), &i_h) < 1e-12);
        let b = induced_splitting(&a, &h, &tol()).unwrap();
        assert!(max_abs_diff(&m, b.u_inverse()) < 1e-12);
    }

    #[test]
    fn induced_splitting_of_zero_h_is_trivial() {
        let a = singular_triple().a;
        let s = induced_splitting(&a, &Matrix::zeros(3, 3), &tol()).unwrap();
        assert!(max_abs_diff(s.u(), &a) < 1e-15);
        assert_eq!(max_abs(s.v()), 0.0);
    }

    #[test]
    fn induced_splitting_rejects_unit_eigenvalue() {
        let a = Matrix::identity(2, 2);
        let h = Matrix::identity(2, 2);
        assert!(matches!(
            induced_splitting(&a, &h, &tol()),
            Err(Error::SingularIminusH)
        ));
    }

    #[test]
    fn closed_form_with_identical_trivial_splittings() {
        let ex = singular_triple();
        let s = Splitting::new(&ex.a, ex.a.clone(), &tol()).unwrap();
        let b = b_sharp_closed_form(&[s.clone(), s.clone(), s], &tol()).unwrap();
        assert!(max_abs_diff(&b, &ex.a_sharp) < 1e-12);
    }

    #[test]
    fn closed_form_checks_range_condition() {
        // Diagonal splittings with alpha = 0.5 make K + X - A vanish.
        let a = Matrix::from_row_slice(2, 2, &[2.0, -1.0, -1.0, 2.0]);
        let u = Matrix::from_diagonal(&Vector::from_vec(vec![1.0, 1.0]));
        let s = Splitting::new(&a, u, &tol()).unwrap();
        let core = alternating_core(&[s.clone(), s.clone()], &tol()).unwrap();
        assert!(max_abs(&(&core - Matrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]))) < 1e-15);
        // Core is nonsingular here, so the condition holds.
        assert!(b_sharp_closed_form(&[s.clone(), s], &tol()).is_ok());

        // X = I is not proper for the singular A, and the core picks up full rank.
        let ex = singular_triple();
        let k = Splitting::new(&ex.a, ex.k.clone(), &tol()).unwrap();
        let u = Splitting::new(&ex.a, ex.u.clone(), &tol()).unwrap();
        let eye = Splitting::new(&ex.a, Matrix::identity(3, 3), &tol()).unwrap();
        let r = b_sharp_closed_form(&[k, u, eye], &tol());
        assert!(matches!(r, Err(Error::RangeNullConditionFailed(_))));
    }

    #[test]
    fn diag_scaling_examples() {
        let d = Matrix::from_diagonal(&Vector::from_vec(vec![2.0, 5.0]));
        let s = Splitting::diag_scaled(&d, 1.0, &tol()).unwrap();
        assert_eq!(max_abs(s.v()), 0.0);
        let r = s.classify(&tol());
        assert!(r.is_regular && r.is_weak_regular_type1 && r.is_weak_regular_type2);

        let mut z = Matrix::identity(2, 2);
        z[(1, 1)] = 0.0;
        assert!(matches!(
            Splitting::diag_scaled(&z, 1.0, &tol()),
            Err(Error::ZeroDiagonal(1))
        ));
        assert!(Splitting::diag_scaled(&d, -1.0, &tol()).is_err());
    }

    #[test]
    fn regular_implies_weak_regular_both_types() {
        let a = Matrix::from_row_slice(3, 3, &[4.0, -1.0, -2.0, -1.0, 4.0, -1.0, -2.0, -1.0, 4.0]);
        let mut u = a.clone();
        u[(0, 1)] = 0.0;
        u[(1, 2)] = 0.0;
        u[(0, 2)] = 0.0;
        let r = Splitting::new(&a, u, &tol()).unwrap().classify(&tol());
        assert!(r.is_regular);
        assert!(r.is_weak_regular_type1 && r.is_weak_regular_type2);
        assert!(r.is_g_regular && r.is_g_weak_regular_type1 && r.is_g_weak_regular_type2);
        // Nonsingular A: K1 = K2 = I, so quasi classes coincide with plain ones.
        assert!(r.is_quasi_regular && r.is_quasi_weak_regular_type1);
    }
}
