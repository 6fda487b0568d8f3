//! Benchmark catalog, exact and reference solutions, error norms and
//! convergence studies.

mod cases;
mod study;

pub use cases::{case, case_catalog, CaseSpec, ExactKind, CASE_IDS};
pub use study::{
    convergence_study, diagonal_slice, error_norms, exact_averages, measure, observed_order, reference_run, run_case,
    slice_l1_distance, ConvergenceTable, ErrorReport, Norms, SlicePoint, Solution,
};
