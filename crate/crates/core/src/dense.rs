//! Dense real matrix machinery shared by every other module.
//!
//! Matrices are plain [`nalgebra::DMatrix<f64>`] values. Everything here is a
//! pure function of its inputs; the only state is the factorization held by a
//! [`Solver`], which is computed once when the solver is built.

use nalgebra::{linalg::Schur, Complex, DMatrix, DVector, LU, SVD};

use crate::error::{Error, Result};

pub type Matrix = DMatrix<f64>;
pub type Vector = DVector<f64>;

/// Numerical slack used by rank decisions, matrix comparisons and sign tests.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceProfile {
    /// Singular values below `rank_tol * sigma_max` count as zero.
    pub rank_tol: f64,
    /// Entrywise slack for matrix equality.
    pub eq_tol: f64,
    /// `|lambda - 1| <= one_tol` counts as the eigenvalue one.
    pub one_tol: f64,
    /// Entries `>= -nonneg_tol` count as nonnegative.
    pub nonneg_tol: f64,
}

impl Default for ToleranceProfile {
    fn default() -> Self {
        Self {
            rank_tol: 1e-10,
            eq_tol: 1e-9,
            one_tol: 1e-8,
            nonneg_tol: 1e-12,
        }
    }
}

impl ToleranceProfile {
    pub fn new(rank_tol: f64, eq_tol: f64, one_tol: f64, nonneg_tol: f64) -> Result<Self> {
        let tol = Self {
            rank_tol,
            eq_tol,
            one_tol,
            nonneg_tol,
        };
        let fields = [rank_tol, eq_tol, one_tol, nonneg_tol];
        if fields.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::InvalidArgument(format!(
                "tolerances must be finite and nonnegative: {tol:?}"
            )));
        }
        Ok(tol)
    }
}

/// Builds a matrix from rows, rejecting ragged input and non-finite entries.
pub fn matrix_from_rows(rows: &[&[f64]]) -> Result<Matrix> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, |r| r.len());
    if nrows == 0 || ncols == 0 {
        return Err(Error::InvalidArgument("matrix must be non-empty".into()));
    }
    if let Some(bad) = rows.iter().find(|r| r.len() != ncols) {
        return Err(Error::DimensionMismatch {
            expected: format!("{ncols} columns"),
            found: format!("{} columns", bad.len()),
        });
    }
    let m = Matrix::from_fn(nrows, ncols, |i, j| rows[i][j]);
    ensure_finite(&m)?;
    Ok(m)
}

pub fn ensure_finite(m: &Matrix) -> Result<()> {
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            if !m[(i, j)].is_finite() {
                return Err(Error::NonFinite { row: i, col: j });
            }
        }
    }
    Ok(())
}

pub fn ensure_square(m: &Matrix) -> Result<()> {
    if m.is_square() {
        Ok(())
    } else {
        Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        })
    }
}

pub(crate) fn ensure_same_shape(a: &Matrix, b: &Matrix) -> Result<()> {
    if a.shape() == b.shape() {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            expected: format!("{}x{}", a.nrows(), a.ncols()),
            found: format!("{}x{}", b.nrows(), b.ncols()),
        })
    }
}

/// Largest absolute entry.
pub fn max_abs(m: &Matrix) -> f64 {
    m.iter().fold(0.0, |acc, v| acc.max(v.abs()))
}

/// Largest absolute entry of `a - b`.
pub fn max_abs_diff(a: &Matrix, b: &Matrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .fold(0.0, |acc, (x, y)| acc.max((x - y).abs()))
}

pub fn is_diagonal(m: &Matrix) -> bool {
    m.is_square() && (0..m.ncols()).all(|j| (0..m.nrows()).all(|i| i == j || m[(i, j)] == 0.0))
}

/// Rank-revealing factorization `M = Q C W^T` with orthonormal `Q` (column
/// space) and `W` (row space); the rank comes from a singular value
/// decomposition.
#[derive(Debug, Clone)]
pub struct RankFactorization {
    pub rank: usize,
    /// Orthonormal basis of the column space, `n x r`.
    pub range_basis: Matrix,
    /// Leading singular values, length `r`.
    pub singular_values: Vector,
    /// Orthonormal basis of the row space, `m x r`.
    pub row_basis: Matrix,
    /// Nonsingular `r x r` core `C`.
    core: Matrix,
}

impl RankFactorization {
    pub fn new(m: &Matrix, tol: &ToleranceProfile) -> Result<Self> {
        let (nrows, ncols) = m.shape();
        let scale = max_abs(m);
        if scale == 0.0 {
            return Ok(Self {
                rank: 0,
                range_basis: Matrix::zeros(nrows, 0),
                singular_values: Vector::zeros(0),
                row_basis: Matrix::zeros(ncols, 0),
                core: Matrix::zeros(0, 0),
            });
        }
        // nalgebra's deflation test is absolute, so work at unit scale. Its
        // singular vectors can be accurate on one side only, so the factors
        // are rebuilt from whichever side reproduces the input.
        let unit = m / scale;
        let limit = 1e-12 * (nrows.max(ncols) as f64);
        let mut best: Option<(f64, Self)> = None;
        for k in SVD_EPS_LADDER {
            let svd = SVD::try_new(unit.clone(), true, true, k * f64::EPSILON, 0)
                .ok_or(Error::EigenSolverFailed(nrows.max(ncols)))?;
            let sv = &svd.singular_values;
            let smax = sv.iter().cloned().fold(0.0, f64::max);
            let rank = sv.iter().filter(|s| **s > tol.rank_tol * smax).count();
            let u = svd
                .u
                .as_ref()
                .expect("left singular vectors requested")
                .columns(0, rank);
            let v = svd
                .v_t
                .as_ref()
                .expect("right singular vectors requested")
                .rows(0, rank)
                .transpose();
            let singular_values = sv.rows(0, rank) * scale;
            for candidate in [
                Self::from_row_side(&unit, v.clone_owned(), singular_values.clone()),
                Self::from_column_side(&unit, u.clone_owned(), singular_values.clone()),
            ] {
                let err = max_abs_diff(&candidate.recompose(), &unit);
                if best.as_ref().is_none_or(|(e, _)| err < *e) {
                    best = Some((err, candidate));
                }
            }
            if best.as_ref().is_some_and(|(e, _)| *e < limit) {
                break;
            }
        }
        let (_, mut fact) = best.expect("ladder is nonempty");
        fact.core *= scale;
        Ok(fact)
    }

    fn from_row_side(unit: &Matrix, w: Matrix, singular_values: Vector) -> Self {
        let qr = (unit * &w).qr();
        Self {
            rank: w.ncols(),
            range_basis: qr.q(),
            singular_values,
            row_basis: w,
            core: qr.r(),
        }
    }

    fn from_column_side(unit: &Matrix, q: Matrix, singular_values: Vector) -> Self {
        let qr = (unit.transpose() * &q).qr();
        Self {
            rank: q.ncols(),
            range_basis: q,
            singular_values,
            row_basis: qr.q(),
            core: qr.r().transpose(),
        }
    }

    fn recompose(&self) -> Matrix {
        &self.range_basis * &self.core * self.row_basis.transpose()
    }

    /// `F` factor: `Q C`.
    pub fn left(&self) -> Matrix {
        &self.range_basis * &self.core
    }

    /// `G` factor: `W^T`.
    pub fn right(&self) -> Matrix {
        self.row_basis.transpose()
    }

    /// Orthogonal projector onto the range.
    pub fn range_projector(&self) -> Matrix {
        &self.range_basis * self.range_basis.transpose()
    }

    /// Orthogonal projector onto the null space.
    pub fn null_projector(&self) -> Matrix {
        let n = self.row_basis.nrows();
        Matrix::identity(n, n) - &self.row_basis * self.row_basis.transpose()
    }
}

/// Deflation thresholds tried in turn, in units of machine epsilon.
const SVD_EPS_LADDER: [f64; 3] = [5.0, 50.0, 500.0];

pub fn rank(m: &Matrix, tol: &ToleranceProfile) -> usize {
    if is_diagonal(m) {
        let dmax = max_abs(m);
        if dmax == 0.0 {
            return 0;
        }
        return m
            .diagonal()
            .iter()
            .filter(|d| d.abs() > tol.rank_tol * dmax)
            .count();
    }
    RankFactorization::new(m, tol)
        .expect("SVD without an iteration cap always returns")
        .rank
}

/// All eigenvalues from a full real Schur decomposition.
pub fn eigenvalues(m: &Matrix) -> Result<Vec<Complex<f64>>> {
    ensure_square(m)?;
    let n = m.nrows();
    if n == 0 {
        return Ok(Vec::new());
    }
    if n == 1 {
        return Ok(vec![Complex::new(m[(0, 0)], 0.0)]);
    }
    let scale = max_abs(m);
    if scale == 0.0 {
        return Ok(vec![Complex::new(0.0, 0.0); n]);
    }
    let budget = 200 * n + 1000;
    let schur =
        Schur::try_new(m / scale, 5.0 * f64::EPSILON, budget).ok_or(Error::EigenSolverFailed(n))?;
    Ok(schur
        .complex_eigenvalues()
        .iter()
        .map(|z| z * scale)
        .collect())
}

pub fn spectral_radius(m: &Matrix) -> Result<f64> {
    Ok(eigenvalues(m)?.iter().map(|z| z.norm()).fold(0.0, f64::max))
}

/// Largest eigenvalue modulus among eigenvalues not within `one_tol` of 1.
pub fn gamma(m: &Matrix, tol: &ToleranceProfile) -> Result<f64> {
    Ok(gamma_of(&eigenvalues(m)?, tol))
}

pub(crate) fn gamma_of(spectrum: &[Complex<f64>], tol: &ToleranceProfile) -> f64 {
    spectrum
        .iter()
        .filter(|z| (*z - Complex::new(1.0, 0.0)).norm() > tol.one_tol)
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}

/// Group inverse via `A# = F (G F)^-2 G`.
///
/// `G F` is invertible exactly when the index of `M` is at most one, so the
/// same factorization both detects existence and computes the result.
pub fn group_inverse(m: &Matrix, tol: &ToleranceProfile) -> Result<Matrix> {
    ensure_square(m)?;
    let n = m.nrows();
    if let Some(inv) = diagonal_group_inverse(m, tol) {
        return Ok(inv);
    }
    let fact = RankFactorization::new(m, tol)?;
    if fact.rank == 0 {
        return Ok(Matrix::zeros(n, n));
    }
    let f = fact.left();
    let g = fact.right();
    let core = &g * &f;
    if rank(&core, tol) < fact.rank {
        return Err(Error::IndexGreaterThanOne);
    }
    let lu = core.lu();
    let once = lu.solve(&g).ok_or(Error::IndexGreaterThanOne)?;
    let twice = lu.solve(&once).ok_or(Error::IndexGreaterThanOne)?;
    Ok(f * twice)
}

fn diagonal_group_inverse(m: &Matrix, tol: &ToleranceProfile) -> Option<Matrix> {
    if !is_diagonal(m) {
        return None;
    }
    let dmax = max_abs(m);
    let d = m.diagonal().map(|v| {
        if v.abs() > tol.rank_tol * dmax {
            1.0 / v
        } else {
            0.0
        }
    });
    Some(Matrix::from_diagonal(&d))
}

pub fn index_at_most_one(m: &Matrix, tol: &ToleranceProfile) -> bool {
    m.is_square() && rank(m, tol) == rank(&(m * m), tol)
}

pub fn same_range(m: &Matrix, n: &Matrix, tol: &ToleranceProfile) -> bool {
    if m.nrows() != n.nrows() {
        return false;
    }
    let (Ok(fm), Ok(fn_)) = (
        RankFactorization::new(m, tol),
        RankFactorization::new(n, tol),
    ) else {
        return false;
    };
    fm.rank == fn_.rank && max_abs_diff(&fm.range_projector(), &fn_.range_projector()) < tol.eq_tol
}

pub fn same_null(m: &Matrix, n: &Matrix, tol: &ToleranceProfile) -> bool {
    if m.ncols() != n.ncols() {
        return false;
    }
    let (Ok(fm), Ok(fn_)) = (
        RankFactorization::new(m, tol),
        RankFactorization::new(n, tol),
    ) else {
        return false;
    };
    fm.rank == fn_.rank && max_abs_diff(&fm.null_projector(), &fn_.null_projector()) < tol.eq_tol
}

pub fn is_nonnegative(m: &Matrix, tol: &ToleranceProfile) -> bool {
    m.iter().all(|v| *v >= -tol.nonneg_tol)
}

/// Position and value of the most negative entry, if any entry is negative
/// beyond `nonneg_tol`.
pub fn most_negative(m: &Matrix, tol: &ToleranceProfile) -> Option<(usize, usize, f64)> {
    let mut worst: Option<(usize, usize, f64)> = None;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            let v = m[(i, j)];
            if v < -tol.nonneg_tol && worst.is_none_or(|(_, _, w)| v < w) {
                worst = Some((i, j, v));
            }
        }
    }
    worst
}

/// Applies `M^-1` when `M` is nonsingular and `M#` otherwise.
#[derive(Debug, Clone)]
pub enum Solver {
    /// Reciprocal diagonal; zero where the diagonal vanishes (that is the
    /// group inverse of a singular diagonal matrix).
    Diagonal {
        recip: Vector,
        nonsingular: bool,
    },
    Lu(LU<f64, nalgebra::Dyn, nalgebra::Dyn>),
    Group(Matrix),
}

impl Solver {
    pub fn new(m: &Matrix, tol: &ToleranceProfile) -> Result<Self> {
        ensure_square(m)?;
        if is_diagonal(m) {
            let dmax = max_abs(m);
            let mut nonsingular = dmax > 0.0;
            let recip = m.diagonal().map(|v| {
                if v.abs() > tol.rank_tol * dmax {
                    1.0 / v
                } else {
                    nonsingular = false;
                    0.0
                }
            });
            return Ok(Solver::Diagonal { recip, nonsingular });
        }
        let lu = m.clone().lu();
        if lu_pivots_well_separated(&lu) || rank(m, tol) == m.nrows() {
            Ok(Solver::Lu(lu))
        } else {
            Ok(Solver::Group(group_inverse(m, tol)?))
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Solver::Diagonal { recip, .. } => recip.len(),
            Solver::Lu(lu) => lu.l().nrows(),
            Solver::Group(g) => g.nrows(),
        }
    }

    pub fn is_nonsingular(&self) -> bool {
        match self {
            Solver::Diagonal { nonsingular, .. } => *nonsingular,
            Solver::Lu(_) => true,
            Solver::Group(_) => false,
        }
    }

    pub fn solve(&self, b: &Vector) -> Vector {
        match self {
            Solver::Diagonal { recip, .. } => recip.component_mul(b),
            Solver::Lu(lu) => lu.solve(b).expect("LU built from a full-rank matrix"),
            Solver::Group(g) => g * b,
        }
    }

    /// In-place variant of [`Solver::solve`] used by the iteration drivers.
    pub fn solve_in_place(&self, b: &mut Vector) {
        match self {
            Solver::Diagonal { recip, .. } => b.component_mul_assign(recip),
            Solver::Lu(lu) => {
                lu.solve_mut(b);
            }
            Solver::Group(g) => *b = g * &*b,
        }
    }

    /// `M^-1 B` (or `M# B`).
    pub fn solve_matrix(&self, b: &Matrix) -> Matrix {
        match self {
            Solver::Diagonal { recip, .. } => {
                let mut out = b.clone();
                for (i, r) in recip.iter().enumerate() {
                    out.row_mut(i).scale_mut(*r);
                }
                out
            }
            Solver::Lu(lu) => lu.solve(b).expect("LU built from a full-rank matrix"),
            Solver::Group(g) => g * b,
        }
    }

    /// `B M^-1` (or `B M#`).
    pub fn right_solve_matrix(&self, b: &Matrix) -> Matrix {
        match self {
            Solver::Diagonal { recip, .. } => {
                let mut out = b.clone();
                for (j, r) in recip.iter().enumerate() {
                    out.column_mut(j).scale_mut(*r);
                }
                out
            }
            _ => b * self.to_matrix(),
        }
    }

    /// The dense inverse or group inverse.
    pub fn to_matrix(&self) -> Matrix {
        match self {
            Solver::Diagonal { recip, .. } => Matrix::from_diagonal(recip),
            Solver::Lu(lu) => lu.try_inverse().expect("LU built from a full-rank matrix"),
            Solver::Group(g) => g.clone(),
        }
    }
}

/// Cheap nonsingularity screen: a singular matrix always produces a pivot of
/// roundoff size under partial pivoting, so well-separated pivots let large
/// systems skip the SVD rank test.
fn lu_pivots_well_separated(lu: &LU<f64, nalgebra::Dyn, nalgebra::Dyn>) -> bool {
    let u = lu.u();
    let d = u.diagonal();
    let dmax = d.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
    dmax > 0.0 && d.iter().all(|v| v.abs() > 1e-6 * dmax)
}

/// `M^-1 b` when `M` is nonsingular, otherwise `M# b`.
pub fn gen_solve(m: &Matrix, b: &Vector, tol: &ToleranceProfile) -> Result<Vector> {
    if b.len() != m.nrows() {
        return Err(Error::DimensionMismatch {
            expected: format!("vector of length {}", m.nrows()),
            found: format!("length {}", b.len()),
        });
    }
    Ok(Solver::new(m, tol)?.solve(b))
}

/// Inverse of a matrix known to be nonsingular at `rank_tol`.
pub(crate) fn checked_inverse(m: &Matrix, tol: &ToleranceProfile) -> Option<Matrix> {
    if rank(m, tol) < m.nrows() {
        return None;
    }
    m.clone().try_inverse()
}
