//! Optimal L(d,1)-labelings of direct and Cartesian graph bundles of cycles
//! over cycles twisted by a cyclic shift.
//!
//! - [`graph`]: cycles, paths, products and bundles.
//! - [`labeling`]: labeling verification and the degree lower bound.
//! - [`closed_form`]: the span-`2d+2` linear schemes and their shift conditions.
//! - [`solver`]: exact minimum span by backtracking, for small graphs.
//! - [`io`]: JSON, grid, CSV, edge-list and DOT formats.

pub mod closed_form;
pub mod graph;
pub mod io;
pub mod labeling;
pub mod solver;

pub use closed_form::{
    admissible_shifts, certify, label_optimal, labels_from_scheme, mod_abs_diff_in_range,
    AdmissibilityCertificate, ClosedFormError, LabelScheme, OptimalLabeling, SchemeKind, ShiftCase,
};
pub use graph::{
    build_bundle, cartesian_product, cycle, direct_product, path, BundleSpec, Graph, GraphError,
    ProductKind, VertexCoord,
};
pub use labeling::{
    lemma1_lower_bound, naive_verify, verify_labeling, Labeling, LabelingError, ValidityReport,
    Violation,
};
pub use solver::{is_labelable, lambda_exact, Decision, SolveResult, SolverError, SolverOptions};
