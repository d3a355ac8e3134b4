//! Local analysis at singular points and flexes.

mod checks;
mod puiseux;
mod singular;

pub(crate) use singular::newton2;

pub use checks::{check_r_conditions, dual_line, dual_parametrization_check, line_discriminant, local_degree_check, DualLine, DualParamReport, LocalDegreeReport, RConditionsReport, UnstableCount};
pub use puiseux::{branches_at, component_branches, multiplicity_at, PuiseuxBranch, DEFAULT_BUFFER};

pub use singular::{default_chart, distinct_roots, flex_points, flex_points_in_chart, singular_points, singular_points_in_chart, CurvePoint, CERTIFY_TOL};

use crate::algebra::AlgebraError;
use crate::chart::ChartError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LocalError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Chart(#[from] ChartError),
    #[error("point is not on the curve")]
    NotOnCurve,
    #[error("could not separate the branches within the truncation order")]
    SeparationFailed,
    #[error(transparent)]
    Unstable(#[from] UnstableCount),
    #[error("residual {0:e} exceeds tolerance")]
    ResidualTooLarge(f64),
    #[error("branch is not smooth")]
    NotSmoothBranch,
    #[error("branch with s = {s} not above r = {r}")]
    DegenerateBranch { r: u32, s: u32 },
    #[error("positive-dimensional singular locus (non-reduced curve)")]
    NonReduced,
}
