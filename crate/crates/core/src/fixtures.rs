//! Small hand-checkable instances used by tests, the CLI and the benchmarks.

use crate::dense::{Matrix, Vector};

/// Singular index-1 matrix with three proper splittings whose alternating
/// iteration converges although none of them is G-weak regular of type II.
#[derive(Debug, Clone)]
pub struct SingularTriple {
    pub a: Matrix,
    pub a_sharp: Matrix,
    pub k: Matrix,
    pub l: Matrix,
    pub u: Matrix,
    pub v: Matrix,
    pub x: Matrix,
    pub y: Matrix,
}

fn m3(rows: [[f64; 3]; 3]) -> Matrix {
    Matrix::from_fn(3, 3, |i, j| rows[i][j])
}

pub fn singular_triple() -> SingularTriple {
    SingularTriple {
        a: m3([[1.0, 0.0, 1.0], [-2.0, 4.0, -2.0], [0.0, 0.0, 0.0]]),
        a_sharp: m3([[1.0, 0.0, 1.0], [0.5, 0.25, 0.5], [0.0, 0.0, 0.0]]),
        k: m3([[0.5, 0.0, 0.5], [-6.0, 12.0, -6.0], [0.0, 0.0, 0.0]]),
        l: m3([[-0.5, 0.0, -0.5], [-4.0, 8.0, -4.0], [0.0, 0.0, 0.0]]),
        u: m3([[0.5, 0.0, 0.5], [-8.0, 16.0, -8.0], [0.0, 0.0, 0.0]]),
        v: m3([[-0.5, 0.0, -0.5], [-6.0, 12.0, -6.0], [0.0, 0.0, 0.0]]),
        x: m3([[0.8, 0.0, 0.8], [-4.0, 8.0, -4.0], [0.0, 0.0, 0.0]]),
        y: m3([[-0.2, 0.0, -0.2], [-2.0, 4.0, -2.0], [0.0, 0.0, 0.0]]),
    }
}

/// Right-hand side in the range of the singular triple matrix.
pub fn singular_triple_rhs() -> Vector {
    Vector::from_vec(vec![2.0, 0.5, 0.0])
}
