//! Fixed-size dense matrices and the rank-1 factorization used to split an
//! associate matrix into its column and row quaternion factors.
//!
//! Matrices are stored row-major. Every public constructor rejects NaN and
//! infinite entries. Index `(i, j)` is zero-based: the 3×3 entry the
//! literature writes as `a₁₁` is `m[(0, 0)]` of a [`Mat3`], while for a
//! [`Mat4`] the zero-based indices coincide with `a₀₀..a₃₃`.

use std::ops::{Index, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Default tolerance for orthogonality and rank-1 checks.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

fn check_finite(values: impl IntoIterator<Item = f64>) -> Result<()> {
    for (index, value) in values.into_iter().enumerate() {
        if !value.is_finite() {
            return Err(Error::NonFinite { index, value });
        }
    }
    Ok(())
}

/// A real 4-vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vec4([f64; 4]);

impl Vec4 {
    pub fn new(c: [f64; 4]) -> Result<Self> {
        check_finite(c)?;
        Ok(Self(c))
    }

    pub(crate) const fn from_array_unchecked(c: [f64; 4]) -> Self {
        Self(c)
    }

    pub fn to_array(self) -> [f64; 4] {
        self.0
    }

    pub fn dot(&self, other: &Vec4) -> f64 {
        self.0[0] * other.0[0] + self.0[1] * other.0[1] + self.0[2] * other.0[2] + self.0[3] * other.0[3]
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    fn scaled(self, s: f64) -> Self {
        Self(self.0.map(|c| c * s))
    }

    /// Outer product `self · otherᵀ`.
    pub fn outer(&self, other: &Vec4) -> Mat4 {
        let mut m = [[0.0; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = self.0[i] * other.0[j];
            }
        }
        Matrix(m)
    }
}

impl Index<usize> for Vec4 {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl Neg for Vec4 {
    type Output = Vec4;

    fn neg(self) -> Vec4 {
        Self(self.0.map(|c| -c))
    }
}

/// A dense row-major `N×N` real matrix with finite entries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Matrix<const N: usize>([[f64; N]; N]);

pub type Mat3 = Matrix<3>;
pub type Mat4 = Matrix<4>;

impl<const N: usize> Matrix<N> {
    pub fn new(rows: [[f64; N]; N]) -> Result<Self> {
        check_finite(rows.iter().flatten().copied())?;
        Ok(Self(rows))
    }

    pub(crate) const fn from_rows_unchecked(rows: [[f64; N]; N]) -> Self {
        Self(rows)
    }

    pub fn identity() -> Self {
        Self::diagonal([1.0; N])
    }

    pub fn diagonal(d: [f64; N]) -> Self {
        let mut m = [[0.0; N]; N];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = d[i];
        }
        Self(m)
    }

    pub fn rows(&self) -> &[[f64; N]; N] {
        &self.0
    }

    pub fn transpose(&self) -> Self {
        let mut t = [[0.0; N]; N];
        for (i, row) in self.0.iter().enumerate() {
            for (j, &e) in row.iter().enumerate() {
                t[j][i] = e;
            }
        }
        Self(t)
    }

    pub fn trace(&self) -> f64 {
        (0..N).map(|i| self.0[i][i]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.iter().flatten().map(|e| e * e).sum::<f64>().sqrt()
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self(self.0.map(|row| row.map(|e| e * s)))
    }

    /// Largest absolute entry of `AᵀA − I`.
    pub fn gram_deviation(&self) -> f64 {
        let gram = self.transpose() * *self;
        let mut worst = 0.0_f64;
        for i in 0..N {
            for j in 0..N {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((gram.0[i][j] - target).abs());
            }
        }
        worst
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .flatten()
            .zip(other.0.iter().flatten())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

impl<const N: usize> Index<(usize, usize)> for Matrix<N> {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.0[i][j]
    }
}

/// Row-by-column product, each entry accumulated left to right over `k`.
impl<const N: usize> Mul for Matrix<N> {
    type Output = Matrix<N>;

    fn mul(self, rhs: Matrix<N>) -> Matrix<N> {
        let mut out = [[0.0; N]; N];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                let mut acc = 0.0;
                for k in 0..N {
                    acc += self.0[i][k] * rhs.0[k][j];
                }
                *e = acc;
            }
        }
        Matrix(out)
    }
}

impl Mul<Vec4> for Mat4 {
    type Output = Vec4;

    fn mul(self, v: Vec4) -> Vec4 {
        let mut out = [0.0; 4];
        for (i, o) in out.iter_mut().enumerate() {
            let mut acc = 0.0;
            for k in 0..4 {
                acc += self.0[i][k] * v.0[k];
            }
            *o = acc;
        }
        Vec4(out)
    }
}

impl<const N: usize> Sub for Matrix<N> {
    type Output = Matrix<N>;

    fn sub(self, rhs: Matrix<N>) -> Matrix<N> {
        let mut out = self.0;
        for (row, rrow) in out.iter_mut().zip(rhs.0.iter()) {
            for (e, r) in row.iter_mut().zip(rrow.iter()) {
                *e -= r;
            }
        }
        Matrix(out)
    }
}

impl<const N: usize> Neg for Matrix<N> {
    type Output = Matrix<N>;

    fn neg(self) -> Matrix<N> {
        Matrix(self.0.map(|row| row.map(|e| -e)))
    }
}

/// Square matrices whose orthogonality can be reported.
pub trait SquareMatrix {
    fn gram_deviation(&self) -> f64;
    fn determinant(&self) -> f64;
}

fn det3(m: &[[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

impl SquareMatrix for Mat3 {
    fn gram_deviation(&self) -> f64 {
        Matrix::gram_deviation(self)
    }

    /// Cofactor expansion along the first row.
    fn determinant(&self) -> f64 {
        det3(&self.0)
    }
}

impl SquareMatrix for Mat4 {
    fn gram_deviation(&self) -> f64 {
        Matrix::gram_deviation(self)
    }

    /// Laplace expansion along the first row; each 3×3 minor is expanded
    /// along its own first row. Terms are summed in column order.
    fn determinant(&self) -> f64 {
        let m = &self.0;
        let mut det = 0.0;
        for col in 0..4 {
            let mut minor = [[0.0; 3]; 3];
            for (mi, row) in m[1..].iter().enumerate() {
                let mut mj = 0;
                for (j, &e) in row.iter().enumerate() {
                    if j != col {
                        minor[mi][mj] = e;
                        mj += 1;
                    }
                }
            }
            let sign = if col % 2 == 0 { 1.0 } else { -1.0 };
            det += sign * m[0][col] * det3(&minor);
        }
        det
    }
}

/// Outcome of [`check_orthonormal`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrthogonalityReport {
    /// Largest `|(AᵀA − I)[i][j]|`.
    pub max_abs_gram_deviation: f64,
    pub determinant: f64,
    pub tolerance_used: f64,
}

impl OrthogonalityReport {
    pub fn is_orthogonal(&self) -> bool {
        self.max_abs_gram_deviation <= self.tolerance_used
    }

    pub fn is_rotation(&self) -> bool {
        self.is_orthogonal() && (self.determinant - 1.0).abs() <= self.tolerance_used
    }
}

/// Measures how far `a` is from orthogonal. Never fails; callers decide what
/// to do with the report.
///
/// # Panics
///
/// If `tol` is not strictly positive.
pub fn check_orthonormal<M: SquareMatrix>(a: &M, tol: f64) -> OrthogonalityReport {
    assert!(tol > 0.0, "tolerance must be positive, got {tol}");
    OrthogonalityReport {
        max_abs_gram_deviation: a.gram_deviation(),
        determinant: a.determinant(),
        tolerance_used: tol,
    }
}

/// Unit factors of a (near) rank-1 matrix: `m ≈ scale · u vᵀ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rank1Factors {
    pub u: Vec4,
    pub v: Vec4,
    /// Frobenius norm of the input.
    pub scale: f64,
    /// Frobenius norm of `m − scale · u vᵀ`.
    pub residual: f64,
}

impl Rank1Factors {
    pub fn reconstruct(&self) -> Mat4 {
        self.u.outer(&self.v).scaled(self.scale)
    }
}

fn column(m: &Mat4, j: usize) -> Vec4 {
    Vec4([m.0[0][j], m.0[1][j], m.0[2][j], m.0[3][j]])
}

/// Factors `m` as `scale · u vᵀ` with unit `u`, `v`.
///
/// The column of largest norm seeds `u`; `v` is the projection `mᵀu`, then a
/// single refinement pass `u ← m v`, `v ← mᵀu` follows. The first component of
/// `u` exceeding `tol` in magnitude is made positive and `v` takes the same
/// flip, so the product is unchanged.
pub fn rank1_factor(m: &Mat4, tol: f64) -> Result<Rank1Factors> {
    let scale = m.frobenius_norm();
    if scale <= tol {
        return Err(Error::ZeroMatrix { norm: scale, tol });
    }
    let mt = m.transpose();

    let seed = (0..4)
        .map(|j| column(m, j))
        .fold(None::<Vec4>, |best, c| match best {
            Some(b) if b.norm() >= c.norm() => Some(b),
            _ => Some(c),
        })
        .expect("four columns");
    let u = seed.scaled(1.0 / seed.norm());
    let v = mt * u;

    // refinement pass
    let mv = *m * v;
    let mut u = mv.scaled(1.0 / mv.norm());
    let v = mt * u;
    let mut v = v.scaled(1.0 / v.norm());

    if let Some(&lead) = u.0.iter().find(|c| c.abs() > tol) {
        if lead < 0.0 {
            u = -u;
            v = -v;
        }
    }

    let residual = (*m - u.outer(&v).scaled(scale)).frobenius_norm();
    Ok(Rank1Factors { u, v, scale, residual })
}
