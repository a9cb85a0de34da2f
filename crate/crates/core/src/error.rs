use thiserror::Error;

/// Errors raised by the rotation pipeline.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("non-finite entry {value} at index {index}")]
    NonFinite { index: usize, value: f64 },

    #[error("matrix Frobenius norm {norm:.3e} does not exceed tolerance {tol:.3e}")]
    ZeroMatrix { norm: f64, tol: f64 },

    #[error("quaternion norm {norm} is not within 1e-6 of unity")]
    NotUnit { norm: f64 },

    #[error("matrix is not orthogonal (max |AᵀA − I| = {deviation:.3e}, tolerance {tol:.3e})")]
    NotOrthogonal { deviation: f64, tol: f64 },

    #[error("determinant {det} is neither +1 nor -1 within tolerance {tol:.3e}")]
    IndeterminateDeterminant { det: f64, tol: f64 },

    #[error("not a rotation matrix: {reason}")]
    NotARotation { reason: String },

    #[error("not a rotoreflection matrix: {reason}")]
    NotARotoreflection { reason: String },

    #[error("associate matrix is not rank one (residual {residual:.3e}, tolerance {tol:.3e})")]
    RankDeficiency { residual: f64, tol: f64 },

    #[error("Euler parameter equations are inconsistent (residual {residual:.3e}, tolerance {tol:.3e})")]
    InconsistentSystem { residual: f64, tol: f64 },

    #[error("determinant {det} does not match the requested isometry kind")]
    KindMismatch { det: f64 },

    #[error("the origin has no displacement angle")]
    OriginPoint,
}

impl Error {
    /// Stable snake_case identifier used in machine-readable error objects.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NonFinite { .. } => "non_finite",
            Error::ZeroMatrix { .. } => "zero_matrix",
            Error::NotUnit { .. } => "not_unit",
            Error::NotOrthogonal { .. } => "not_orthogonal",
            Error::IndeterminateDeterminant { .. } => "indeterminate_determinant",
            Error::NotARotation { .. } => "not_a_rotation",
            Error::NotARotoreflection { .. } => "not_a_rotoreflection",
            Error::RankDeficiency { .. } => "rank_deficiency",
            Error::InconsistentSystem { .. } => "inconsistent_system",
            Error::KindMismatch { .. } => "kind_mismatch",
            Error::OriginPoint => "origin_point",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
