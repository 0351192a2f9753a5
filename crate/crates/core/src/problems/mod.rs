//! Benchmark problem generators and matrix file I/O.

pub mod mtx;

use crate::dense::{Matrix, Solver, ToleranceProfile, Vector};
use crate::error::{Error, Result};

pub use mtx::{read_matrix_market, read_vector, write_matrix_market, write_vector};

/// Five-point finite-difference discretization of Laplace's equation on the
/// unit square with Dirichlet data `u = x + y + xy`.
#[derive(Debug, Clone)]
pub struct LaplaceProblem {
    /// Number of grid subdivisions per side; `h = 1 / grid`.
    pub grid: usize,
    pub a: Matrix,
    pub b: Vector,
    pub exact: Vector,
}

impl LaplaceProblem {
    pub fn order(&self) -> usize {
        self.a.nrows()
    }
}

pub fn boundary_value(x: f64, y: f64) -> f64 {
    x + y + x * y
}

/// Assembles `A = I (x) T + T (x) I` with `T = tridiag(-1, 2, -1)` of order
/// `grid - 1`, i.e. block tridiagonal with `tridiag(-1, 4, -1)` diagonal
/// blocks and `-I` off-diagonal blocks. Unknowns are ordered with `x`
/// running fastest.
pub fn make_laplace(grid: usize) -> Result<LaplaceProblem> {
    if grid < 2 {
        return Err(Error::InvalidArgument(format!(
            "Laplace grid needs at least 2 subdivisions, got {grid}"
        )));
    }
    let m = grid - 1;
    let n = m * m;
    let h = 1.0 / grid as f64;
    let idx = |p: usize, q: usize| (q - 1) * m + (p - 1);

    let mut a = Matrix::zeros(n, n);
    let mut b = Vector::zeros(n);
    for q in 1..grid {
        for p in 1..grid {
            let i = idx(p, q);
            a[(i, i)] = 4.0;
            let neighbours = [(p - 1, q), (p + 1, q), (p, q - 1), (p, q + 1)];
            for (pp, qq) in neighbours {
                if pp == 0 || pp == grid || qq == 0 || qq == grid {
                    b[i] += boundary_value(pp as f64 * h, qq as f64 * h);
                } else {
                    a[(i, idx(pp, qq))] = -1.0;
                }
            }
        }
    }
    let exact = Solver::new(&a, &ToleranceProfile::default())?.solve(&b);
    Ok(LaplaceProblem { grid, a, b, exact })
}

/// Reflecting random walk on `n` states and its singular system `I - T^t`.
#[derive(Debug, Clone)]
pub struct RandomWalkProblem {
    pub n: usize,
    /// Transition matrix; rows sum to one.
    pub t: Matrix,
    pub a: Matrix,
}

pub fn make_random_walk(n: usize) -> Result<RandomWalkProblem> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!(
            "random walk needs at least 3 states, got {n}"
        )));
    }
    let mut t = Matrix::zeros(n, n);
    t[(0, 1)] = 1.0;
    t[(n - 1, n - 2)] = 1.0;
    for i in 1..n - 1 {
        t[(i, i - 1)] = 0.5;
        t[(i, i + 1)] = 0.5;
    }
    let a = Matrix::identity(n, n) - t.transpose();
    Ok(RandomWalkProblem { n, t, a })
}

/// Stationary distribution of the reflecting walk: proportional to
/// `(1/2, 1, ..., 1, 1/2)`, normalized to sum one.
pub fn random_walk_stationary(n: usize) -> Vector {
    let mut v = Vector::from_element(n, 1.0);
    v[0] = 0.5;
    v[n - 1] = 0.5;
    let total = v.sum();
    v / total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense::eigenvalues;

    #[test]
    fn laplace_order() {
        assert_eq!(make_laplace(21).unwrap().order(), 400);
        assert_eq!(make_laplace(5).unwrap().order(), 16);
        assert!(make_laplace(1).is_err());
    }

    #[test]
    fn single_node_laplace() {
        let p = make_laplace(2).unwrap();
        assert_eq!(p.a, Matrix::from_element(1, 1, 4.0));
        // g at (0,.5), (1,.5), (.5,0), (.5,1): 0.5 + 2 + 0.5 + 2.
        assert!((p.b[0] - 5.0).abs() < 1e-15);
        assert!((p.exact[0] - 1.25).abs() < 1e-15);
    }

    #[test]
    fn laplace_matches_kronecker_form() {
        let grid = 6;
        let m = grid - 1;
        let t = Matrix::from_fn(m, m, |i, j| match i.abs_diff(j) {
            0 => 2.0,
            1 => -1.0,
            _ => 0.0,
        });
        let i = Matrix::identity(m, m);
        let kron = i.kronecker(&t) + t.kronecker(&i);
        let p = make_laplace(grid).unwrap();
        assert_eq!(p.a, kron);
        assert_eq!(p.a, p.a.transpose());
    }

    #[test]
    fn bilinear_boundary_data_is_reproduced_exactly() {
        // x + y + xy is discretely harmonic, so the discrete solution equals
        // the boundary function at the interior nodes.
        let grid = 9;
        let p = make_laplace(grid).unwrap();
        let h = 1.0 / grid as f64;
        for q in 1..grid {
            for pp in 1..grid {
                let i = (q - 1) * (grid - 1) + (pp - 1);
                let want = boundary_value(pp as f64 * h, q as f64 * h);
                assert!((p.exact[i] - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn laplace_is_positive_definite() {
        for grid in [3, 5, 8] {
            let p = make_laplace(grid).unwrap();
            let min = eigenvalues(&p.a)
                .unwrap()
                .iter()
                .map(|z| z.re)
                .fold(f64::INFINITY, f64::min);
            assert!(min > 0.0);
        }
    }

    #[test]
    fn random_walk_structure() {
        let rw = make_random_walk(10).unwrap();
        for i in 0..10 {
            assert_eq!(rw.t.row(i).sum(), 1.0);
            assert_eq!(rw.t[(i, i)], 0.0);
        }
        assert_eq!(rw.t[(0, 1)], 1.0);
        assert_eq!(rw.t[(9, 8)], 1.0);
        let col_sums = Matrix::from_element(1, 10, 1.0) * &rw.a;
        assert!(col_sums.amax() < 1e-14);
        for i in 0..10 {
            for j in 0..10 {
                if i != j {
                    assert!(rw.a[(i, j)] <= 0.0);
                }
            }
        }
        assert!(make_random_walk(2).is_err());
    }

    #[test]
    fn stationary_vector_is_in_null_space() {
        let rw = make_random_walk(7).unwrap();
        let x = random_walk_stationary(7);
        assert!((&rw.a * &x).amax() < 1e-15);
        assert!(x.iter().all(|v| *v > 0.0));
        let pt = rw.t.transpose();
        assert!((&pt * &x - &x).amax() < 1e-15);
    }
}
