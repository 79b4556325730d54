//! Projective-plane geometry over exact or float scalars, the regular and
//! extended regular k-gons, and point-line duality.

mod duality;
mod geometry;
mod gon;

use thiserror::Error;

use crate::algebra::AlgebraError;

pub use duality::{dual_line, dual_point, dualize, shear_map, Dualized, SHEAR_SEARCH_LIMIT};
pub use geometry::{
    collinear, cross_ratio, incidence_with_tol, incident, line_through, meet, Incidence, ProjLine,
    ProjMap, ProjPoint, INCIDENCE_TOL,
};
pub use gon::{
    affine_realization, chord_label, extended_gon, extended_gon_from_vertices, gon_identities,
    k6_matrix, reference_hexagon_vertices, regular_gon, t_label, v_label,
    verify_integer_embedding_k6, ExtendedGon, GonIdentities, GonMode, K6EmbeddingReport, K6Image,
    EXPECTED_K6_IMAGES, LINE_AT_INFINITY_LABEL,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProjectiveError {
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("{0}")]
    Domain(String),
    #[error("unsupported field: {0}")]
    Unsupported(String),
    #[error("singular projective map")]
    Singular,
    #[error("not representable in the duality chart: {0}")]
    Unrepresentable(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}
