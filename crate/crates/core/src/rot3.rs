//! 3D rotations and rotoreflections in terms of Euler parameters.
//!
//! A rotation is `P' = Q P Q⁻¹` and a rotoreflection `P' = −Q P Q⁻¹` for a
//! unit quaternion `Q = a + bi + cj + dk`. Embedding a 3×3 matrix in the
//! lower-right block of a 4×4 matrix with `±1` in the corner turns both into
//! 4D rotations, which ties this module to [`crate::rot4`].
//!
//! Entry names follow the usual 1-based convention in comments: `a₁₁` is
//! `m[(0, 0)]`, `a₃₂` is `m[(2, 1)]`.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{check_orthonormal, Mat3, Mat4, DEFAULT_TOLERANCE};
use crate::quaternion::{Quaternion, UnitQuaternion};
use crate::rot4::leading_component;

/// The unit quaternion `(a, b, c, d)` of the Euler–Rodrigues formula.
pub type EulerParameters = UnitQuaternion;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum IsometryKind {
    Rotation,
    Rotoreflection,
}

impl IsometryKind {
    /// Determinant of a matrix of this kind, and the corner entry of its 4D embedding.
    pub fn sign(self) -> f64 {
        match self {
            IsometryKind::Rotation => 1.0,
            IsometryKind::Rotoreflection => -1.0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            IsometryKind::Rotation => "rotation",
            IsometryKind::Rotoreflection => "rotoreflection",
        }
    }
}

impl fmt::Display for IsometryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which squared parameter seeded an extraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Branch {
    A,
    B,
    C,
    D,
}

impl Branch {
    const ALL: [Branch; 4] = [Branch::A, Branch::B, Branch::C, Branch::D];

    pub fn as_str(self) -> &'static str {
        match self {
            Branch::A => "A",
            Branch::B => "B",
            Branch::C => "C",
            Branch::D => "D",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtractionResult {
    pub params: EulerParameters,
    pub branch: Branch,
    /// Largest absolute violation over the ten parameter equations.
    pub residual: f64,
}

impl ExtractionResult {
    /// Rescales `params` to unit norm and recomputes the residual against
    /// `m`, which must be the matrix the parameters were extracted from.
    pub fn renormalized(&self, m: &Mat3, kind: IsometryKind) -> Result<ExtractionResult> {
        let params = UnitQuaternion::new(self.params.quaternion())?;
        let rotation = match kind {
            IsometryKind::Rotation => *m,
            IsometryKind::Rotoreflection => -*m,
        };
        let residual = ParameterEquations::new(&rotation).residual(&params);
        Ok(ExtractionResult { params, residual, ..*self })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AngleReport {
    /// Radians in `[0, π]`.
    pub alpha: f64,
    pub cos_alpha: f64,
}

/// The rotation matrix of the Euler–Rodrigues formula.
pub fn euler_rodrigues(q: &EulerParameters) -> Mat3 {
    let Quaternion { w: a, x: b, y: c, z: d } = q.quaternion();
    let (aa, bb, cc, dd) = (a * a, b * b, c * c, d * d);
    Mat3::from_rows_unchecked([
        [aa + bb - cc - dd, -2.0 * a * d + 2.0 * b * c, 2.0 * a * c + 2.0 * b * d],
        [2.0 * a * d + 2.0 * b * c, aa - bb + cc - dd, -2.0 * a * b + 2.0 * c * d],
        [-2.0 * a * c + 2.0 * b * d, 2.0 * a * b + 2.0 * c * d, aa - bb - cc + dd],
    ])
}

/// The rotoreflection counterpart: `P' = −Q P Q⁻¹`.
pub fn rotoreflection_matrix(q: &EulerParameters) -> Mat3 {
    let Quaternion { w: a, x: b, y: c, z: d } = q.quaternion();
    let (aa, bb, cc, dd) = (a * a, b * b, c * c, d * d);
    Mat3::from_rows_unchecked([
        [-aa - bb + cc + dd, 2.0 * a * d - 2.0 * b * c, -2.0 * a * c - 2.0 * b * d],
        [-2.0 * a * d - 2.0 * b * c, -aa + bb - cc + dd, 2.0 * a * b - 2.0 * c * d],
        [2.0 * a * c - 2.0 * b * d, -2.0 * a * b - 2.0 * c * d, -aa + bb + cc - dd],
    ])
}

/// Rotation or rotoreflection, decided by the sign of the determinant.
pub fn classify(m: &Mat3, tol: f64) -> Result<IsometryKind> {
    let rep = check_orthonormal(m, tol);
    if !rep.is_orthogonal() {
        return Err(Error::NotOrthogonal { deviation: rep.max_abs_gram_deviation, tol });
    }
    if (rep.determinant - 1.0).abs() <= tol {
        Ok(IsometryKind::Rotation)
    } else if (rep.determinant + 1.0).abs() <= tol {
        Ok(IsometryKind::Rotoreflection)
    } else {
        Err(Error::IndeterminateDeterminant { det: rep.determinant, tol })
    }
}

/// Right-hand sides of the ten equations linking a rotation matrix to its
/// Euler parameters: four squares `a², b², c², d²` and six pairwise products.
struct ParameterEquations {
    squares: [f64; 4],
    ab: f64,
    ac: f64,
    ad: f64,
    cd: f64,
    db: f64,
    bc: f64,
}

impl ParameterEquations {
    fn new(m: &Mat3) -> Self {
        let (a11, a12, a13) = (m[(0, 0)], m[(0, 1)], m[(0, 2)]);
        let (a21, a22, a23) = (m[(1, 0)], m[(1, 1)], m[(1, 2)]);
        let (a31, a32, a33) = (m[(2, 0)], m[(2, 1)], m[(2, 2)]);
        Self {
            squares: [
                (1.0 + a11 + a22 + a33) / 4.0,
                (1.0 + a11 - a22 - a33) / 4.0,
                (1.0 - a11 + a22 - a33) / 4.0,
                (1.0 - a11 - a22 + a33) / 4.0,
            ],
            ab: (a32 - a23) / 4.0,
            ac: (a13 - a31) / 4.0,
            ad: (a21 - a12) / 4.0,
            cd: (a32 + a23) / 4.0,
            db: (a13 + a31) / 4.0,
            bc: (a21 + a12) / 4.0,
        }
    }

    /// Seeds from the largest square and divides the three products that
    /// involve the seed by it.
    fn solve(&self) -> Option<(Quaternion, Branch)> {
        let (k, &sq) = self.squares.iter().enumerate().fold((0, &self.squares[0]), |best, cur| {
            if cur.1 > best.1 {
                cur
            } else {
                best
            }
        });
        if !(sq > 0.0) {
            return None;
        }
        let s = sq.sqrt();
        let branch = Branch::ALL[k];
        let [a, b, c, d] = match branch {
            Branch::A => [s, self.ab / s, self.ac / s, self.ad / s],
            Branch::B => [self.ab / s, s, self.bc / s, self.db / s],
            Branch::C => [self.ac / s, self.bc / s, s, self.cd / s],
            Branch::D => [self.ad / s, self.db / s, self.cd / s, s],
        };
        Some((Quaternion { w: a, x: b, y: c, z: d }, branch))
    }

    fn residual(&self, q: &Quaternion) -> f64 {
        let Quaternion { w: a, x: b, y: c, z: d } = *q;
        [
            a * a - self.squares[0],
            b * b - self.squares[1],
            c * c - self.squares[2],
            d * d - self.squares[3],
            a * b - self.ab,
            a * c - self.ac,
            a * d - self.ad,
            c * d - self.cd,
            d * b - self.db,
            b * c - self.bc,
        ]
        .iter()
        .map(|v| v.abs())
        .fold(0.0, f64::max)
    }
}

/// Largest absolute violation of the ten parameter equations of rotation `m`
/// by `q`.
pub fn parameter_residual(m: &Mat3, q: &Quaternion) -> f64 {
    ParameterEquations::new(m).residual(q)
}

/// Makes the first component of magnitude above 1e-12 (scanning a, b, c, d) positive.
fn canonical_sign(q: Quaternion) -> Quaternion {
    match leading_component(q.to_array()) {
        Some(k) if q.to_array()[k] < 0.0 => -q,
        _ => q,
    }
}

/// Euler parameters of a 3D rotation matrix.
///
/// The result has `a ≥ 0`, or when `|a| ≤ 1e-12` its first nonzero component
/// among `b, c, d` positive. Its norm is whatever the equations give; see
/// [`ExtractionResult::renormalized`].
pub fn extract_rotation(m: &Mat3, tol: f64) -> Result<ExtractionResult> {
    match classify(m, tol) {
        Ok(IsometryKind::Rotation) => {}
        Ok(IsometryKind::Rotoreflection) => {
            return Err(Error::NotARotation { reason: "determinant is -1".into() });
        }
        Err(e) => return Err(Error::NotARotation { reason: e.to_string() }),
    }
    solve_rotation(m, tol)
}

fn solve_rotation(m: &Mat3, tol: f64) -> Result<ExtractionResult> {
    let eqs = ParameterEquations::new(m);
    let Some((q, branch)) = eqs.solve() else {
        return Err(Error::InconsistentSystem { residual: f64::INFINITY, tol });
    };
    let residual = eqs.residual(&q);
    if !(residual <= tol) {
        return Err(Error::InconsistentSystem { residual, tol });
    }
    let params = UnitQuaternion::new_unchecked(canonical_sign(q));
    Ok(ExtractionResult { params, branch, residual })
}

/// Euler parameters `q` with `rotoreflection_matrix(q) = m`.
pub fn extract_rotoreflection(m: &Mat3, tol: f64) -> Result<ExtractionResult> {
    match classify(m, tol) {
        Ok(IsometryKind::Rotoreflection) => {}
        Ok(IsometryKind::Rotation) => {
            return Err(Error::NotARotoreflection { reason: "determinant is +1".into() });
        }
        Err(e) => return Err(Error::NotARotoreflection { reason: e.to_string() }),
    }
    solve_rotation(&-*m, tol)
}

fn require_kind(m: &Mat3, kind: IsometryKind, tol: f64) -> Result<()> {
    let rep = check_orthonormal(m, tol);
    if !rep.is_orthogonal() {
        return Err(Error::NotOrthogonal { deviation: rep.max_abs_gram_deviation, tol });
    }
    if (rep.determinant - kind.sign()).abs() > tol {
        return Err(Error::KindMismatch { det: rep.determinant });
    }
    Ok(())
}

/// Angle in the invariant plane, from the trace: `2cos α + 1` for rotations,
/// `2cos α − 1` for rotoreflections. Checks `m` at [`DEFAULT_TOLERANCE`].
pub fn rotation_angle(m: &Mat3, kind: IsometryKind) -> Result<AngleReport> {
    rotation_angle_within(m, kind, DEFAULT_TOLERANCE)
}

pub fn rotation_angle_within(m: &Mat3, kind: IsometryKind, tol: f64) -> Result<AngleReport> {
    require_kind(m, kind, tol)?;
    let cos_alpha = ((m.trace() - kind.sign()) / 2.0).clamp(-1.0, 1.0);
    Ok(AngleReport { alpha: cos_alpha.acos(), cos_alpha })
}

/// Places `m` in the lower-right block of a 4×4 matrix whose corner is `+1`
/// for a rotation and `−1` for a rotoreflection; either way the result is a
/// 4D rotation. Checks `m` at [`DEFAULT_TOLERANCE`].
pub fn embed_4d(m: &Mat3, kind: IsometryKind) -> Result<Mat4> {
    embed_4d_within(m, kind, DEFAULT_TOLERANCE)
}

pub fn embed_4d_within(m: &Mat3, kind: IsometryKind, tol: f64) -> Result<Mat4> {
    require_kind(m, kind, tol)?;
    let mut out = [[0.0; 4]; 4];
    out[0][0] = kind.sign();
    for (i, row) in m.rows().iter().enumerate() {
        out[i + 1][1..].copy_from_slice(row);
    }
    Ok(Mat4::from_rows_unchecked(out))
}

/// Cosine of the angle between `point` and its image under the rotation (or
/// rotoreflection) about the Z axis through `alpha`.
pub fn displaced_angle_cos(point: [f64; 3], alpha: f64, kind: IsometryKind) -> Result<f64> {
    let [x, y, z] = point;
    let rho2 = x * x + y * y;
    let z2 = z * z;
    if rho2 + z2 == 0.0 {
        return Err(Error::OriginPoint);
    }
    let cos = alpha.cos();
    Ok(match kind {
        IsometryKind::Rotation => (rho2 * cos + z2) / (rho2 + z2),
        IsometryKind::Rotoreflection => (rho2 * cos - z2) / (rho2 + z2),
    })
}

/// `aᵢᵢ − cos α` for each diagonal entry, i.e. how much less the coordinate
/// half-axes are displaced than the angle `α` itself. Non-negative for
/// rotations, non-positive for rotoreflections.
pub fn diagonal_margins(m: &Mat3, kind: IsometryKind) -> Result<[f64; 3]> {
    let angle = rotation_angle(m, kind)?;
    Ok([0, 1, 2].map(|i| m[(i, i)] - angle.cos_alpha))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rot4::decompose_4d;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

    fn unit(c: [f64; 4]) -> UnitQuaternion {
        UnitQuaternion::from_array(c).unwrap()
    }

    fn m3(rows: [[f64; 3]; 3]) -> Mat3 {
        Mat3::new(rows).unwrap()
    }

    fn arb_unit() -> impl Strategy<Value = UnitQuaternion> {
        prop::array::uniform4(-1.0..1.0f64)
            .prop_filter("away from zero", |c| c.iter().map(|x| x * x).sum::<f64>() > 1e-4)
            .prop_map(|c| {
                let n = c.iter().map(|x| x * x).sum::<f64>().sqrt();
                unit(c.map(|x| x / n))
            })
    }

    fn equal_up_to_sign(p: &Quaternion, q: &Quaternion, tol: f64) -> bool {
        p.max_abs_diff(q) <= tol || p.max_abs_diff(&-*q) <= tol
    }

    fn quarter_turn_z() -> Mat3 {
        m3([[0., -1., 0.], [1., 0., 0.], [0., 0., 1.]])
    }

    #[test]
    fn euler_rodrigues_examples() {
        assert_eq!(euler_rodrigues(&UnitQuaternion::IDENTITY), Mat3::identity());
        let h = FRAC_1_SQRT_2;
        let m = euler_rodrigues(&unit([h, 0., 0., h]));
        assert!(m.max_abs_diff(&quarter_turn_z()) < 1e-15);
        assert_eq!(euler_rodrigues(&unit([0., 1., 0., 0.])), Mat3::diagonal([1., -1., -1.]));
    }

    #[test]
    fn rotoreflection_examples() {
        assert_eq!(rotoreflection_matrix(&UnitQuaternion::IDENTITY), Mat3::diagonal([-1., -1., -1.]));
        assert_eq!(rotoreflection_matrix(&unit([0., 0., 0., 1.])), Mat3::diagonal([1., 1., -1.]));
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify(&Mat3::identity(), 1e-9), Ok(IsometryKind::Rotation));
        assert_eq!(classify(&Mat3::diagonal([1., 1., -1.]), 1e-9), Ok(IsometryKind::Rotoreflection));
        assert!(matches!(classify(&Mat3::diagonal([2., 1., 1.]), 1e-9), Err(Error::NotOrthogonal { .. })));
    }

    #[test]
    fn extract_identity() {
        let r = extract_rotation(&Mat3::identity(), 1e-9).unwrap();
        assert_eq!(r.params, UnitQuaternion::IDENTITY);
        assert_eq!(r.branch, Branch::A);
        assert_eq!(r.residual, 0.0);
    }

    #[test]
    fn extract_quarter_turn() {
        let r = extract_rotation(&quarter_turn_z(), 1e-9).unwrap();
        let h = FRAC_1_SQRT_2;
        assert!(r.params.max_abs_diff(&Quaternion { w: h, x: 0., y: 0., z: h }) < 1e-15);
        assert!(r.residual < 1e-15);
    }

    #[test]
    fn extract_half_turn_uses_d_branch() {
        let r = extract_rotation(&Mat3::diagonal([-1., -1., 1.]), 1e-9).unwrap();
        assert_eq!(r.branch, Branch::D);
        assert_eq!(r.params.to_array(), [0., 0., 0., 1.]);
        assert_eq!(r.residual, 0.0);
    }

    #[test]
    fn extract_rejects_wrong_kind_and_garbage() {
        assert!(matches!(extract_rotation(&Mat3::diagonal([1., 1., -1.]), 1e-9), Err(Error::NotARotation { .. })));
        assert!(matches!(extract_rotation(&Mat3::diagonal([2., 1., 1.]), 1e-9), Err(Error::NotARotation { .. })));
        assert!(matches!(extract_rotoreflection(&Mat3::identity(), 1e-9), Err(Error::NotARotoreflection { .. })));
    }

    #[test]
    fn inconsistent_system_on_perturbed_input() {
        // orthogonal up to 1e-7 but the equations disagree by more than 1e-12
        let m = m3([[1.0, 1e-7, 0.0], [-1e-7, 1.0, 0.0], [0.0, 0.0, 1.0]]);
        let tol = 1e-6;
        let ok = extract_rotation(&m, tol).unwrap();
        assert!(ok.residual > 1e-16);
        assert!(matches!(solve_rotation(&m, 1e-20), Err(Error::InconsistentSystem { .. })));
    }

    #[test]
    fn renormalized_result_is_unit() {
        let c = 1e-4_f64.cos();
        let s = 1e-4_f64.sin();
        let m = m3([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0 + 1e-10]]);
        let r = extract_rotation(&m, 1e-9).unwrap();
        let n = r.renormalized(&m, IsometryKind::Rotation).unwrap();
        assert!((n.params.norm() - 1.0).abs() < 1e-15);
        assert!(n.residual < 1e-9);
    }

    #[test]
    fn extract_rotoreflection_examples() {
        let r = extract_rotoreflection(&Mat3::diagonal([-1., -1., -1.]), 1e-9).unwrap();
        assert_eq!(r.params, UnitQuaternion::IDENTITY);
        let r = extract_rotoreflection(&Mat3::diagonal([1., 1., -1.]), 1e-9).unwrap();
        assert_eq!(r.params.to_array(), [0., 0., 0., 1.]);
        assert_eq!(r.branch, Branch::D);
    }

    #[test]
    fn angle_examples() {
        let a = rotation_angle(&Mat3::identity(), IsometryKind::Rotation).unwrap();
        assert_eq!(a.alpha, 0.0);
        let a = rotation_angle(&quarter_turn_z(), IsometryKind::Rotation).unwrap();
        assert!((a.alpha - FRAC_PI_2).abs() < 1e-15);
        let a = rotation_angle(&Mat3::diagonal([-1., -1., -1.]), IsometryKind::Rotoreflection).unwrap();
        assert_eq!(a.alpha, PI);
        assert_eq!(a.cos_alpha, -1.0);
        assert!(matches!(
            rotation_angle(&Mat3::identity(), IsometryKind::Rotoreflection),
            Err(Error::KindMismatch { .. })
        ));
        assert!(matches!(
            rotation_angle(&Mat3::diagonal([2., 1., 1.]), IsometryKind::Rotation),
            Err(Error::NotOrthogonal { .. })
        ));
    }

    #[test]
    fn embed_examples() {
        assert_eq!(embed_4d(&Mat3::identity(), IsometryKind::Rotation).unwrap(), Mat4::identity());
        assert_eq!(
            embed_4d(&Mat3::diagonal([1., 1., -1.]), IsometryKind::Rotoreflection).unwrap(),
            Mat4::diagonal([-1., 1., 1., -1.])
        );
        assert!(matches!(embed_4d(&Mat3::identity(), IsometryKind::Rotoreflection), Err(Error::KindMismatch { .. })));
    }

    #[test]
    fn displaced_angle_examples() {
        for alpha in [0.0, 0.3, FRAC_PI_2, 2.5, PI] {
            assert_eq!(displaced_angle_cos([0., 0., 1.], alpha, IsometryKind::Rotation).unwrap(), 1.0);
            assert_eq!(displaced_angle_cos([0., 0., 1.], alpha, IsometryKind::Rotoreflection).unwrap(), -1.0);
            for kind in [IsometryKind::Rotation, IsometryKind::Rotoreflection] {
                assert_eq!(displaced_angle_cos([1., 0., 0.], alpha, kind).unwrap(), alpha.cos());
            }
        }
        assert_eq!(displaced_angle_cos([0., 0., 0.], 1.0, IsometryKind::Rotation), Err(Error::OriginPoint));
    }

    /// cos β measured directly: p · (R p) / |p|² with R the canonical Z-axis map.
    fn displaced_cos_by_matrix(p: [f64; 3], alpha: f64, kind: IsometryKind) -> f64 {
        let (s, c) = alpha.sin_cos();
        let img = [c * p[0] - s * p[1], s * p[0] + c * p[1], kind.sign() * p[2]];
        let dot: f64 = (0..3).map(|i| p[i] * img[i]).sum();
        dot / p.iter().map(|x| x * x).sum::<f64>()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(512))]

        #[test]
        fn euler_rodrigues_is_proper(q in arb_unit()) {
            let rep = check_orthonormal(&euler_rodrigues(&q), 1e-9);
            prop_assert!(rep.max_abs_gram_deviation <= 1e-13);
            prop_assert!((rep.determinant - 1.0).abs() <= 1e-13);
            prop_assert_eq!(classify(&euler_rodrigues(&q), 1e-9), Ok(IsometryKind::Rotation));
        }

        #[test]
        fn rotoreflection_is_negated_rotation(q in arb_unit()) {
            let rr = rotoreflection_matrix(&q);
            prop_assert_eq!(rr, -euler_rodrigues(&q));
            let rep = check_orthonormal(&rr, 1e-9);
            prop_assert!((rep.determinant + 1.0).abs() <= 1e-13);
        }

        #[test]
        fn rotation_round_trip(q in arb_unit()) {
            let r = extract_rotation(&euler_rodrigues(&q), 1e-9).unwrap();
            prop_assert!(equal_up_to_sign(&r.params, &q, 1e-12));
            prop_assert!(r.residual <= 1e-12);
            let k = leading_component(r.params.to_array()).unwrap();
            prop_assert!(r.params.to_array()[k] > 0.0);
        }

        #[test]
        fn rotoreflection_round_trip(q in arb_unit()) {
            let r = extract_rotoreflection(&rotoreflection_matrix(&q), 1e-9).unwrap();
            prop_assert!(equal_up_to_sign(&r.params, &q, 1e-12));
            prop_assert!(r.residual <= 1e-12);
        }

        #[test]
        fn trace_gives_generating_angle(q in arb_unit()) {
            let theta = 2.0 * q.w.abs().min(1.0).acos();
            let a = rotation_angle(&euler_rodrigues(&q), IsometryKind::Rotation).unwrap();
            prop_assert!((a.alpha - theta).abs() <= 1e-9);
            prop_assert!((a.alpha.cos() - a.cos_alpha).abs() <= 1e-12);
            // −QPQ⁻¹ adds a half turn in the invariant plane
            let a = rotation_angle(&rotoreflection_matrix(&q), IsometryKind::Rotoreflection).unwrap();
            prop_assert!((a.alpha - (PI - theta)).abs() <= 1e-9);
        }

        #[test]
        fn diagonal_bounds(q in arb_unit()) {
            let m = euler_rodrigues(&q);
            prop_assert!((1.0 + m.trace()) / 4.0 >= -1e-12);
            for margin in diagonal_margins(&m, IsometryKind::Rotation).unwrap() {
                prop_assert!(margin >= -1e-12);
                // (2cos α − 2aᵢᵢ)/4 ≤ 0
                prop_assert!(-margin / 2.0 <= 1e-12);
            }
            let m = rotoreflection_matrix(&q);
            prop_assert!((m.trace() - 1.0) / 4.0 <= 1e-12);
            for margin in diagonal_margins(&m, IsometryKind::Rotoreflection).unwrap() {
                prop_assert!(margin <= 1e-12);
            }
        }

        #[test]
        fn displaced_closed_form_matches_direct(
            p in prop::array::uniform3(-10.0..10.0f64),
            alpha in 0.0..PI,
        ) {
            prop_assume!(p.iter().map(|x| x * x).sum::<f64>() > 1e-6);
            for kind in [IsometryKind::Rotation, IsometryKind::Rotoreflection] {
                let closed = displaced_angle_cos(p, alpha, kind).unwrap();
                prop_assert!((closed - displaced_cos_by_matrix(p, alpha, kind)).abs() <= 1e-12);
            }
            prop_assert!(displaced_angle_cos(p, alpha, IsometryKind::Rotation).unwrap() - alpha.cos() >= -1e-12);
            prop_assert!(displaced_angle_cos(p, alpha, IsometryKind::Rotoreflection).unwrap() - alpha.cos() <= 1e-12);
        }

        #[test]
        fn embedding_matches_rot4(q in arb_unit()) {
            let m = euler_rodrigues(&q);
            let d = decompose_4d(&embed_4d(&m, IsometryKind::Rotation).unwrap(), 1e-9).unwrap();
            let e = extract_rotation(&m, 1e-9).unwrap();
            prop_assert!(equal_up_to_sign(&d.left, &e.params, 1e-12));
            prop_assert!(d.right.max_abs_diff(&d.left.conjugate()) <= 1e-12);

            let m = rotoreflection_matrix(&q);
            let d = decompose_4d(&embed_4d(&m, IsometryKind::Rotoreflection).unwrap(), 1e-9).unwrap();
            let e = extract_rotoreflection(&m, 1e-9).unwrap();
            prop_assert!(equal_up_to_sign(&d.left, &e.params, 1e-12));
            let [a, b, c, dd] = d.left.to_array();
            let expect = Quaternion { w: -a, x: b, y: c, z: dd };
            prop_assert!(d.right.max_abs_diff(&expect) <= 1e-12);
        }
    }
}
