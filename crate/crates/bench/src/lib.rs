//! Fixed inputs shared by the criterion benches.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tristep_core::generate::index_one_matrix;
use tristep_core::problems::make_laplace;
use tristep_core::{Matrix, Splitting, ToleranceProfile, Vector};

/// Laplace system with the `diag(A)`, `1.5 diag(A)`, `1.75 diag(A)` triple.
pub fn laplace_triple(grid: usize) -> (Vec<Splitting>, Vector) {
    let tol = ToleranceProfile::default();
    let p = make_laplace(grid).expect("grid >= 2");
    let splits = [1.0, 1.5, 1.75]
        .iter()
        .map(|&alpha| Splitting::diag_scaled(&p.a, alpha, &tol).expect("positive diagonal"))
        .collect();
    (splits, p.b)
}

/// Seeded index-one matrix of order `n` and rank `n - n / 4`.
pub fn index_one(n: usize, seed: u64) -> Matrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    index_one_matrix(&mut rng, n, n - n / 4)
}
