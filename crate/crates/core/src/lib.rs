//! Alternating matrix-splitting iterations for nonsingular and index-one
//! singular systems: splitting classification, group inverses, one-, two-
//! and three-step schemes, convergence and semiconvergence diagnostics.

pub mod analysis;
pub mod dense;
pub mod error;
pub mod fixtures;
pub mod generate;
pub mod problems;
pub mod scheme;
pub mod splitting;
pub mod suites;
pub mod tables;

pub use analysis::{
    is_m_matrix_with_property_c, is_semiconvergent, power_limit_oracle, verify_convergence_theorem,
    verify_semiconvergence_theorem, SemiconvergenceCertificate, TheoremVerdict,
};
pub use dense::{group_inverse, spectral_radius, Matrix, ToleranceProfile, Vector};
pub use error::{Error, Result};
pub use scheme::{run, run_shifted, IterationReport, SchemeConfig, StopRule};
pub use splitting::{
    alternating_iteration_matrix, classify, companion_matrix, Splitting, SplittingClass,
    SplittingClassReport,
};
pub use suites::{run_suite, SuiteReport};
pub use tables::{BenchConfig, BenchRow, Scheme};
