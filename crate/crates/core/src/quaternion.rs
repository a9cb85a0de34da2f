//! Hamilton quaternions and their left/right multiplication matrices.
//!
//! Components are ordered `(w, x, y, z)` everywhere, scalar first. A unit
//! quaternion `a + bi + cj + dk` maps to `(w, x, y, z) = (a, b, c, d)`.

use std::ops::{Mul, Neg};

use crate::error::{Error, Result};
use crate::linalg::{Mat4, Vec4};

/// Inputs whose norm is within this distance of 1 are normalized on
/// construction; anything further away is rejected.
pub const UNIT_NORMALIZATION_WINDOW: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quaternion {
    pub const IDENTITY: Quaternion = Quaternion { w: 1.0, x: 0.0, y: 0.0, z: 0.0 };

    pub fn new(w: f64, x: f64, y: f64, z: f64) -> Result<Self> {
        Vec4::new([w, x, y, z])?;
        Ok(Self { w, x, y, z })
    }

    pub fn from_array(c: [f64; 4]) -> Result<Self> {
        Self::new(c[0], c[1], c[2], c[3])
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }

    pub fn to_vec4(self) -> Vec4 {
        Vec4::from_array_unchecked(self.to_array())
    }

    pub fn norm_squared(&self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn norm(&self) -> f64 {
        self.norm_squared().sqrt()
    }

    /// `(w, −x, −y, −z)`; the inverse of a unit quaternion.
    pub fn conjugate(&self) -> Quaternion {
        Quaternion { w: self.w, x: -self.x, y: -self.y, z: -self.z }
    }

    pub fn max_abs_diff(&self, other: &Quaternion) -> f64 {
        self.to_array()
            .iter()
            .zip(other.to_array().iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Hamilton product.
impl Mul for Quaternion {
    type Output = Quaternion;

    fn mul(self, o: Quaternion) -> Quaternion {
        Quaternion {
            w: self.w * o.w - self.x * o.x - self.y * o.y - self.z * o.z,
            x: self.x * o.w + self.w * o.x - self.z * o.y + self.y * o.z,
            y: self.y * o.w + self.z * o.x + self.w * o.y - self.x * o.z,
            z: self.z * o.w - self.y * o.x + self.x * o.y + self.w * o.z,
        }
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;

    fn neg(self) -> Quaternion {
        Quaternion { w: -self.w, x: -self.x, y: -self.y, z: -self.z }
    }
}

pub fn quat_mul(a: Quaternion, b: Quaternion) -> Quaternion {
    a * b
}

pub fn conjugate(q: Quaternion) -> Quaternion {
    q.conjugate()
}

/// A quaternion of norm one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitQuaternion(Quaternion);

impl UnitQuaternion {
    pub const IDENTITY: UnitQuaternion = UnitQuaternion(Quaternion::IDENTITY);

    /// Normalizes `q` if its norm lies within [`UNIT_NORMALIZATION_WINDOW`]
    /// of 1, otherwise returns [`Error::NotUnit`].
    pub fn new(q: Quaternion) -> Result<Self> {
        let norm = q.norm();
        if !norm.is_finite() || (norm - 1.0).abs() > UNIT_NORMALIZATION_WINDOW {
            return Err(Error::NotUnit { norm });
        }
        Ok(Self(Quaternion { w: q.w / norm, x: q.x / norm, y: q.y / norm, z: q.z / norm }))
    }

    pub fn from_array(c: [f64; 4]) -> Result<Self> {
        Self::new(Quaternion::from_array(c)?)
    }

    /// Wraps `q` without normalizing it.
    pub(crate) const fn new_unchecked(q: Quaternion) -> Self {
        Self(q)
    }

    pub fn quaternion(&self) -> Quaternion {
        self.0
    }

    pub fn to_array(self) -> [f64; 4] {
        self.0.to_array()
    }

    pub fn conjugate(&self) -> UnitQuaternion {
        Self(self.0.conjugate())
    }

    /// The inverse, which for unit quaternions is the conjugate.
    pub fn inverse(&self) -> UnitQuaternion {
        self.conjugate()
    }

    /// Matrix `M_L` with `M_L · q = self ∘ q` for `q` as a `(w, x, y, z)` column.
    pub fn left_matrix(&self) -> Mat4 {
        let Quaternion { w: a, x: b, y: c, z: d } = self.0;
        Mat4::from_rows_unchecked([
            [a, -b, -c, -d],
            [b, a, -d, c],
            [c, d, a, -b],
            [d, -c, b, a],
        ])
    }

    /// Matrix `M_R` with `M_R · q = q ∘ self`.
    pub fn right_matrix(&self) -> Mat4 {
        let Quaternion { w: p, x: q, y: r, z: s } = self.0;
        Mat4::from_rows_unchecked([
            [p, -q, -r, -s],
            [q, p, s, -r],
            [r, -s, p, q],
            [s, r, -q, p],
        ])
    }
}

impl std::ops::Deref for UnitQuaternion {
    type Target = Quaternion;

    fn deref(&self) -> &Quaternion {
        &self.0
    }
}

impl Neg for UnitQuaternion {
    type Output = UnitQuaternion;

    fn neg(self) -> UnitQuaternion {
        Self(-self.0)
    }
}

impl Mul for UnitQuaternion {
    type Output = UnitQuaternion;

    /// The product of unit quaternions is unit up to rounding; it is not
    /// renormalized.
    fn mul(self, o: UnitQuaternion) -> UnitQuaternion {
        Self(self.0 * o.0)
    }
}

pub fn left_matrix(l: &UnitQuaternion) -> Mat4 {
    l.left_matrix()
}

pub fn right_matrix(r: &UnitQuaternion) -> Mat4 {
    r.right_matrix()
}
