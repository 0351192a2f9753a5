//! Seeded random instances for the property suites.
//!
//! Every generator draws from a caller-supplied RNG, so a suite is
//! reproducible from its seed alone.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::dense::{spectral_radius, Matrix, Vector};

fn uniform(rng: &mut impl Rng, rows: usize, cols: usize, lo: f64, hi: f64) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| rng.gen_range(lo..hi))
}

/// Random matrix with a dominant diagonal, so it is comfortably invertible.
fn well_conditioned(rng: &mut impl Rng, n: usize) -> Matrix {
    uniform(rng, n, n, -1.0, 1.0) + Matrix::identity(n, n) * (n as f64 + 1.0)
}

fn permutation(rng: &mut impl Rng, n: usize) -> Matrix {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut p = Matrix::zeros(n, n);
    for (i, &j) in order.iter().enumerate() {
        p[(i, j)] = 1.0;
    }
    p
}

/// Embeds an `r x r` block as `P diag(block, 0) P^-1`.
fn embed(p: &Matrix, p_inv: &Matrix, block: &Matrix) -> Matrix {
    let n = p.nrows();
    let mut d = Matrix::zeros(n, n);
    d.view_mut((0, 0), block.shape()).copy_from(block);
    p * d * p_inv
}

/// Index-one matrix `P diag(M, 0) P^-1` of the given rank.
pub fn index_one_matrix(rng: &mut impl Rng, n: usize, rank: usize) -> Matrix {
    assert!(rank <= n, "rank {rank} exceeds order {n}");
    let p = well_conditioned(rng, n);
    let p_inv = p.clone().try_inverse().expect("diagonally dominant");
    let m = well_conditioned(rng, rank);
    embed(&p, &p_inv, &m)
}

/// `A` plus three `U` parts of proper splittings, all sharing the range and
/// null space of `A` by construction.
#[derive(Debug, Clone)]
pub struct ProperTriple {
    pub a: Matrix,
    pub us: [Matrix; 3],
}

/// Proper splittings `U_i = P diag(M + W_i, 0) P^-1` with `W_i` a moderate
/// random perturbation, which keeps `rho(U_i# V_i)` well below one.
pub fn proper_triple(rng: &mut impl Rng, n: usize, rank: usize) -> ProperTriple {
    assert!(rank >= 1 && rank <= n, "rank {rank} outside 1..={n}");
    let p = well_conditioned(rng, n);
    let p_inv = p.clone().try_inverse().expect("diagonally dominant");
    let m = well_conditioned(rng, rank);
    let a = embed(&p, &p_inv, &m);
    let us = [(); 3].map(|_| {
        let w = uniform(rng, rank, rank, -0.5, 0.5);
        embed(&p, &p_inv, &(&m + w))
    });
    ProperTriple { a, us }
}

/// Random nonsingular M-matrix `sI - B` with `B >= 0` irreducible and
/// `s / rho(B)` in `[1.05, 1.5]`.
pub fn nonsingular_m_matrix(rng: &mut impl Rng, n: usize) -> Matrix {
    let b = irreducible_nonnegative(rng, n);
    let rho = spectral_radius(&b).expect("small dense eigensolve");
    let factor = rng.gen_range(1.05..1.5);
    // A 1x1 draw can have rho(B) = 0.
    let s = if rho < 1e-3 { rho + 0.5 } else { rho * factor };
    Matrix::identity(n, n) * s - b
}

/// Random irreducible singular M-matrix `rho(B) I - B`.
pub fn singular_m_matrix(rng: &mut impl Rng, n: usize) -> Matrix {
    let b = irreducible_nonnegative(rng, n);
    let rho = spectral_radius(&b).expect("small dense eigensolve");
    Matrix::identity(n, n) * rho - b
}

/// Sparse nonnegative matrix with a Hamiltonian cycle, hence irreducible.
fn irreducible_nonnegative(rng: &mut impl Rng, n: usize) -> Matrix {
    let mut b = Matrix::from_fn(n, n, |i, j| {
        if i != j && rng.gen_bool(0.4) {
            rng.gen_range(0.1..1.0)
        } else {
            0.0
        }
    });
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    for k in 0..n {
        let (i, j) = (order[k], order[(k + 1) % n]);
        if i != j {
            b[(i, j)] += rng.gen_range(0.1..1.0);
        }
    }
    // Occasional positive diagonal varies the peripheral spectrum.
    for i in 0..n {
        if rng.gen_bool(0.3) {
            b[(i, i)] = rng.gen_range(0.0..0.5);
        }
    }
    b
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplittingKind {
    /// `N^-1 >= 0` and `N - M >= 0`: G-weak regular of both types.
    Regular,
    /// `N^-1 >= 0` and `(N - M) N^-1 >= 0` only.
    TypeIIOnly,
}

/// Group monotone `A = Pi [[M, M w], [0, 0]] Pi^T` with `M` a nonsingular
/// M-matrix and `w >= 0`, and splittings `U = Pi [[N, N w], [0, 0]] Pi^T`.
/// `A# = Pi [[M^-1, M^-1 w], [0, 0]] Pi^T >= 0`.
#[derive(Debug, Clone)]
pub struct GroupMonotoneInstance {
    pub a: Matrix,
    pub us: [Matrix; 3],
}

pub fn group_monotone_instance(
    rng: &mut impl Rng,
    n: usize,
    null_dim: usize,
    kinds: [SplittingKind; 3],
) -> GroupMonotoneInstance {
    assert!(null_dim < n, "need a nonzero range");
    let r = n - null_dim;
    let m = nonsingular_m_matrix(rng, r);
    let w = Matrix::from_fn(r, null_dim, |_, _| {
        if rng.gen_bool(0.6) {
            rng.gen_range(0.0..1.0)
        } else {
            0.0
        }
    });
    let pi = permutation(rng, n);
    let lift = |block: &Matrix| {
        let mut full = Matrix::zeros(n, n);
        full.view_mut((0, 0), (r, r)).copy_from(block);
        full.view_mut((0, r), (r, null_dim))
            .copy_from(&(block * &w));
        &pi * full * pi.transpose()
    };
    let a = lift(&m);
    let us = kinds.map(|kind| lift(&splitting_block(rng, &m, kind)));
    GroupMonotoneInstance { a, us }
}

fn splitting_block(rng: &mut impl Rng, m: &Matrix, kind: SplittingKind) -> Matrix {
    match kind {
        SplittingKind::Regular => regular_part(rng, m),
        SplittingKind::TypeIIOnly => type_two_part(rng, m),
    }
}

/// A regular splitting `U` of a Z-matrix with positive diagonal: scaled
/// diagonal, Gauss-Seidel (lower or upper) or a scaled Gauss-Seidel.
pub fn regular_part(rng: &mut impl Rng, a: &Matrix) -> Matrix {
    let diag = Matrix::from_diagonal(&a.diagonal());
    match rng.gen_range(0..4) {
        0 => diag * rng.gen_range(1.0..3.0),
        1 => a.lower_triangle(),
        2 => a.upper_triangle(),
        _ => {
            let strict = a.lower_triangle() - &diag;
            diag * rng.gen_range(1.0..2.0) + strict
        }
    }
}

/// `N = Q^-1` with `Q = M^-1 (I - T)`, `T >= 0` small enough that `Q >= 0`.
/// Then `(N - M) N^-1 = T >= 0`, while `N^-1 (N - M) = M^-1 T M` is
/// typically not nonnegative.
fn type_two_part(rng: &mut impl Rng, m: &Matrix) -> Matrix {
    let r = m.nrows();
    let m_inv = m.clone().try_inverse().expect("nonsingular M-matrix");
    let t0 = Matrix::from_fn(r, r, |_, _| {
        if rng.gen_bool(0.5) {
            rng.gen_range(0.0..1.0)
        } else {
            0.0
        }
    });
    let mt = &m_inv * &t0;
    // Largest eps with M^-1 - eps M^-1 T0 >= 0, capped so rho(eps T0) < 1.
    let mut eps_max = f64::INFINITY;
    for (num, den) in m_inv.iter().zip(mt.iter()) {
        if *den > 0.0 {
            eps_max = eps_max.min(num / den);
        }
    }
    let rho_t0 = spectral_radius(&t0).expect("small dense eigensolve");
    if rho_t0 > 0.0 {
        eps_max = eps_max.min(0.9 / rho_t0);
    }
    if !eps_max.is_finite() {
        eps_max = 0.5;
    }
    let t = t0 * (eps_max * rng.gen_range(0.3..0.9));
    let q = m_inv * (Matrix::identity(r, r) - t);
    q.try_inverse().expect("Q = M^-1 (I - T) with rho(T) < 1")
}

/// Singular M-matrices for the semiconvergence theorems: irreducible ones,
/// and reducible `Pi [[M, 0], [R, S]] Pi^T` with `M` nonsingular, `S` a
/// singular irreducible M-matrix and `R <= 0`. Diagonals stay positive, so
/// diagonal and Gauss-Seidel splittings exist.
pub fn singular_m_matrix_family(rng: &mut impl Rng, n: usize) -> Matrix {
    if n < 3 || rng.gen_bool(0.6) {
        return singular_m_matrix(rng, n);
    }
    let k = rng.gen_range(2..n);
    let r = n - k;
    let mut full = Matrix::zeros(n, n);
    full.view_mut((0, 0), (r, r))
        .copy_from(&nonsingular_m_matrix(rng, r));
    full.view_mut((r, r), (k, k))
        .copy_from(&singular_m_matrix(rng, k));
    for i in r..n {
        for j in 0..r {
            if rng.gen_bool(0.5) {
                full[(i, j)] = -rng.gen_range(0.0..1.0);
            }
        }
    }
    let pi = permutation(rng, n);
    &pi * full * pi.transpose()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectrumKind {
    Convergent,
    Semiconvergent,
    Divergent,
    Oscillating,
    Defective,
}

impl SpectrumKind {
    pub const ALL: [SpectrumKind; 5] = [
        SpectrumKind::Convergent,
        SpectrumKind::Semiconvergent,
        SpectrumKind::Divergent,
        SpectrumKind::Oscillating,
        SpectrumKind::Defective,
    ];
}

/// `T = P D P^-1` with a block-diagonal `D` whose spectrum is chosen by
/// `kind`; the remaining eigenvalues (real, or complex pairs) lie in the
/// disc of radius 0.9.
pub fn mixed_matrix(rng: &mut impl Rng, n: usize, kind: SpectrumKind) -> Matrix {
    assert!(n >= 2, "mixed matrices need n >= 2");
    let mut d = Matrix::zeros(n, n);
    let mut i = 0;
    let place_real = |d: &mut Matrix, i: &mut usize, v: f64| {
        d[(*i, *i)] = v;
        *i += 1;
    };
    match kind {
        SpectrumKind::Convergent => {}
        SpectrumKind::Semiconvergent => {
            let ones = rng.gen_range(1..=n.div_ceil(2));
            for _ in 0..ones {
                place_real(&mut d, &mut i, 1.0);
            }
        }
        SpectrumKind::Divergent => {
            let v = rng.gen_range(1.1..1.6) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            place_real(&mut d, &mut i, v);
        }
        SpectrumKind::Oscillating => {
            if rng.gen_bool(0.5) {
                place_real(&mut d, &mut i, -1.0);
            } else {
                let theta: f64 = rng.gen_range(0.3..2.8);
                d[(0, 0)] = theta.cos();
                d[(0, 1)] = -theta.sin();
                d[(1, 0)] = theta.sin();
                d[(1, 1)] = theta.cos();
                i = 2;
            }
        }
        SpectrumKind::Defective => {
            d[(0, 0)] = 1.0;
            d[(0, 1)] = 1.0;
            d[(1, 1)] = 1.0;
            i = 2;
        }
    }
    while i < n {
        if i + 1 < n && rng.gen_bool(0.3) {
            let r: f64 = rng.gen_range(0.0..0.9);
            let theta: f64 = rng.gen_range(0.0..std::f64::consts::PI);
            d[(i, i)] = r * theta.cos();
            d[(i, i + 1)] = -r * theta.sin();
            d[(i + 1, i)] = r * theta.sin();
            d[(i + 1, i + 1)] = r * theta.cos();
            i += 2;
        } else {
            d[(i, i)] = rng.gen_range(-0.9..0.9);
            i += 1;
        }
    }
    let p = well_conditioned(rng, n);
    let p_inv = p.clone().try_inverse().expect("diagonally dominant");
    p * d * p_inv
}

/// Consistent right-hand side `A y` for a random `y`.
pub fn consistent_rhs(rng: &mut impl Rng, a: &Matrix) -> Vector {
    let y = Vector::from_fn(a.ncols(), |_, _| rng.gen_range(-1.0..1.0));
    a * y
}
