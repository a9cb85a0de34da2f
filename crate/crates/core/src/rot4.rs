//! 4D rotations as pairs of unit quaternions.
//!
//! A 4D rotation `A` acts on a point `P` (a quaternion) as `P' = L P R`, i.e.
//! `A = M_L(L) · M_R(R)`. The associate matrix of `A` is the outer product of
//! the components of `L` and `R`, so it is rank one with unit Frobenius norm;
//! factoring it recovers the pair up to a joint sign.

use crate::error::{Error, Result};
use crate::linalg::{check_orthonormal, rank1_factor, Mat4};
use crate::quaternion::{Quaternion, UnitQuaternion};

/// Components with magnitude at or below this are skipped when choosing which
/// component carries the canonical positive sign.
pub const SIGN_EPSILON: f64 = 1e-12;

/// The 4×4 matrix of products `ap, aq, …, ds` computed from a 4D matrix by
/// signed quarter-sums of its entries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AssociateMatrix(Mat4);

impl AssociateMatrix {
    pub fn matrix(&self) -> &Mat4 {
        &self.0
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.frobenius_norm()
    }
}

/// Left/right quaternion factors of a 4D rotation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuatPairDecomposition {
    /// `(a, b, c, d)`; its first component above [`SIGN_EPSILON`] in magnitude is positive.
    pub left: UnitQuaternion,
    /// `(p, q, r, s)`.
    pub right: UnitQuaternion,
    pub rank1_residual: f64,
    /// Frobenius norm of `A − M_L · M_R`.
    pub reconstruction_error: f64,
}

/// `M_L(l) · M_R(r)`.
pub fn compose_4d(l: &UnitQuaternion, r: &UnitQuaternion) -> Mat4 {
    l.left_matrix() * r.right_matrix()
}

pub fn associate_matrix(a: &Mat4) -> AssociateMatrix {
    let e = |i: usize, j: usize| a[(i, j)];
    let m = [
        [
            e(0, 0) + e(1, 1) + e(2, 2) + e(3, 3),
            e(1, 0) - e(0, 1) - e(3, 2) + e(2, 3),
            e(2, 0) + e(3, 1) - e(0, 2) - e(1, 3),
            e(3, 0) - e(2, 1) + e(1, 2) - e(0, 3),
        ],
        [
            e(1, 0) - e(0, 1) + e(3, 2) - e(2, 3),
            -e(0, 0) - e(1, 1) + e(2, 2) + e(3, 3),
            e(3, 0) - e(2, 1) - e(1, 2) + e(0, 3),
            -e(2, 0) - e(3, 1) - e(0, 2) - e(1, 3),
        ],
        [
            e(2, 0) - e(3, 1) - e(0, 2) + e(1, 3),
            -e(3, 0) - e(2, 1) - e(1, 2) - e(0, 3),
            -e(0, 0) + e(1, 1) - e(2, 2) + e(3, 3),
            e(1, 0) + e(0, 1) - e(3, 2) - e(2, 3),
        ],
        [
            e(3, 0) + e(2, 1) - e(1, 2) - e(0, 3),
            e(2, 0) - e(3, 1) + e(0, 2) - e(1, 3),
            -e(1, 0) - e(0, 1) - e(3, 2) - e(2, 3),
            -e(0, 0) + e(1, 1) + e(2, 2) - e(3, 3),
        ],
    ];
    AssociateMatrix(Mat4::from_rows_unchecked(m.map(|row| row.map(|x| x / 4.0))))
}

/// Index of the first component whose magnitude exceeds [`SIGN_EPSILON`].
pub(crate) fn leading_component(c: [f64; 4]) -> Option<usize> {
    c.iter().position(|x| x.abs() > SIGN_EPSILON)
}

/// Splits a 4D rotation into its left and right unit quaternions.
///
/// Fails with [`Error::NotARotation`] when `a` is not orthogonal with
/// determinant +1 within `tol`, and with [`Error::RankDeficiency`] when the
/// associate matrix is not rank one within `tol`.
pub fn decompose_4d(a: &Mat4, tol: f64) -> Result<QuatPairDecomposition> {
    let report = check_orthonormal(a, tol);
    if !report.is_orthogonal() {
        return Err(Error::NotARotation {
            reason: format!("max |AᵀA − I| = {:.3e} exceeds {tol:.3e}", report.max_abs_gram_deviation),
        });
    }
    if (report.determinant - 1.0).abs() > tol {
        return Err(Error::NotARotation { reason: format!("determinant {} is not +1", report.determinant) });
    }

    let assoc = associate_matrix(a);
    let factors = rank1_factor(assoc.matrix(), tol)?;
    if factors.residual > tol {
        return Err(Error::RankDeficiency { residual: factors.residual, tol });
    }

    let mut left = factors.u.to_array();
    let mut right = factors.v.to_array();
    if let Some(k) = leading_component(left) {
        if left[k] < 0.0 {
            left = left.map(|x| -x);
            right = right.map(|x| -x);
        }
    }
    // rank1_factor already returns unit vectors
    let left = UnitQuaternion::new(Quaternion::from_array(left)?)?;
    let right = UnitQuaternion::new(Quaternion::from_array(right)?)?;
    let reconstruction_error = (*a - compose_4d(&left, &right)).frobenius_norm();

    Ok(QuatPairDecomposition { left, right, rank1_residual: factors.residual, reconstruction_error })
}
