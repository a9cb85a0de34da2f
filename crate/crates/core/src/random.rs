//! Reproducible random rotations.
//!
//! The stream is ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded through
//! `SeedableRng::seed_from_u64`; standard normals come from
//! `rand_distr::StandardNormal` (ziggurat). A uniform point on the unit
//! 3-sphere is four independent standard normals divided by their norm,
//! redrawn whenever the norm falls below `1e-6`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{Mat3, Mat4};
use crate::quaternion::{Quaternion, UnitQuaternion};
use crate::rot3::euler_rodrigues;
use crate::rot4::compose_4d;

pub const GENERATOR_NAME: &str = "chacha8-seed_from_u64/ziggurat-normal";

const MIN_SAMPLE_NORM: f64 = 1e-6;

pub struct Generator {
    rng: ChaCha8Rng,
}

impl Generator {
    pub fn new(seed: u64) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    fn normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    /// A point uniformly distributed on the unit 3-sphere.
    pub fn unit_quaternion(&mut self) -> UnitQuaternion {
        loop {
            let c = [self.normal(), self.normal(), self.normal(), self.normal()];
            let n = c.iter().map(|x| x * x).sum::<f64>().sqrt();
            if n >= MIN_SAMPLE_NORM {
                let q = Quaternion { w: c[0] / n, x: c[1] / n, y: c[2] / n, z: c[3] / n };
                return UnitQuaternion::new(q).expect("normalized sample");
            }
        }
    }

    /// A uniformly distributed unit 3-vector.
    pub fn unit_vector(&mut self) -> [f64; 3] {
        loop {
            let c = [self.normal(), self.normal(), self.normal()];
            let n = c.iter().map(|x| x * x).sum::<f64>().sqrt();
            if n >= MIN_SAMPLE_NORM {
                return c.map(|x| x / n);
            }
        }
    }
}

/// A random 3D rotation and the quaternion that generated it.
pub fn random_rotation_3d(seed: u64) -> (Mat3, UnitQuaternion) {
    let q = Generator::new(seed).unit_quaternion();
    (euler_rodrigues(&q), q)
}

/// A random 4D rotation and its generating left/right pair, drawn in that order.
pub fn random_rotation_4d(seed: u64) -> (Mat4, UnitQuaternion, UnitQuaternion) {
    let mut g = Generator::new(seed);
    let l = g.unit_quaternion();
    let r = g.unit_quaternion();
    (compose_4d(&l, &r), l, r)
}
