//! The reduced system on the critical manifold and the machinery around it:
//! `P mu` decompositions, the matrix `R` by three routes, the projection `Q`,
//! stability of the fast dynamics and inherited first integrals.

mod decompose;
mod integrals;
mod pipeline;
mod rmatrix;
mod sample;
mod stability;
mod system;

pub use decompose::{decompose_p_mu, functional_independence_check, IndependenceReport, PMuDecomposition};
pub use integrals::{inherited_first_integrals, FirstIntegral};
pub use pipeline::{build_parameterization, l_matrix, reduce_with, ParamChoice, PathFailure};
pub use rmatrix::{
    compose_matrix, compute_r_general, compute_r_graph_case, compute_r_via_l, lemma_ba_check, lemma_ba_check_rf, GraphCaseR,
};
pub use sample::{sample_points, DEFAULT_SAMPLES, DEFAULT_SEED};
pub use stability::{
    a_matrix, blanket_hypothesis_report, eigenvalue_consistency, hurwitz_determinants, invariance_check, projection_q,
    stability_analysis, BlanketReport, EigenConsistency, StabilityMethod, StabilityReport, Verdict,
};
pub use system::{complex_balanced_reduced, reduced_system, reduced_system_numeric, NumericRhs, ReducePath, ReducedRhs, ReducedSystem};

use crate::manifold::ManifoldError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ReduceError {
    #[error("L D Phi(v) is singular")]
    SingularLDPhi,
    #[error("(D Phi(v) | P) is singular")]
    SingularAugmentedMatrix,
    #[error("no s rows of D Phi form an invertible block")]
    NoInvertibleBlock,
    #[error("A(x) = D mu(x) P(x) is singular at the given point")]
    SingularA,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
    #[error("operation needs an exact parameterization")]
    NotExact,
    #[error(transparent)]
    Manifold(#[from] ManifoldError),
    #[error("{0}")]
    Invalid(String),
}
