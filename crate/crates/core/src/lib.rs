//! Quaternion representation of 3D and 4D rotations.
//!
//! * [`rot4`]: a 4D rotation is `P ↦ L P R` for unit quaternions `L`, `R`;
//!   the pair is recovered from the rank-one associate matrix.
//! * [`rot3`]: the Euler–Rodrigues formula, extraction of Euler parameters
//!   from a rotation matrix, and the rotoreflection counterpart.
//! * [`cli`]: the command-line front end used by the `quatrot` binary.
//!
//! Quaternion components are always ordered `(w, x, y, z)`, scalar first.

pub mod cli;
pub mod error;
pub mod linalg;
pub mod quaternion;
pub mod random;
pub mod rot3;
pub mod rot4;

pub use error::{Error, Result};
pub use linalg::{check_orthonormal, rank1_factor, Mat3, Mat4, OrthogonalityReport, Rank1Factors, Vec4, DEFAULT_TOLERANCE};
pub use quaternion::{Quaternion, UnitQuaternion};
pub use rot3::{
    classify, displaced_angle_cos, embed_4d, euler_rodrigues, extract_rotation, extract_rotoreflection, rotation_angle,
    rotoreflection_matrix, AngleReport, Branch, EulerParameters, ExtractionResult, IsometryKind,
};
pub use rot4::{associate_matrix, compose_4d, decompose_4d, AssociateMatrix, QuatPairDecomposition};
