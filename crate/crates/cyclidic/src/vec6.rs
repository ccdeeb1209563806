//! Coordinate vectors of the hexaspherical model.
//!
//! The ambient space is six-dimensional with inner product of signature
//! (4,2): coordinates 1..4 are spacelike, coordinates 5 and 6 timelike,
//!
//! ```text
//! <v,w> = v1 w1 + v2 w2 + v3 w3 + v4 w4 - v5 w5 - v6 w6.
//! ```
//!
//! All spheres, complexes and planes of the model are carried by such
//! vectors; projective representatives are nonzero vectors up to scale.

use std::ops::{Add, Mul, Neg, Sub};

/// Relative tolerance for lightlike membership and projective comparison.
pub const EPS_LIGHT: f64 = 1e-9;

/// A vector of the (4,2) inner-product space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vec6(pub [f64; 6]);

impl Vec6 {
    pub const fn new(x1: f64, x2: f64, x3: f64, x4: f64, x5: f64, x6: f64) -> Self {
        Vec6([x1, x2, x3, x4, x5, x6])
    }

    pub const ZERO: Vec6 = Vec6([0.0; 6]);
    pub const E1: Vec6 = Vec6::basis(0);
    pub const E2: Vec6 = Vec6::basis(1);
    pub const E3: Vec6 = Vec6::basis(2);
    pub const E4: Vec6 = Vec6::basis(3);
    pub const E5: Vec6 = Vec6::basis(4);
    pub const E6: Vec6 = Vec6::basis(5);

    const fn basis(i: usize) -> Self {
        let mut c = [0.0; 6];
        c[i] = 1.0;
        Vec6(c)
    }

    /// The signature-(4,2) bilinear form.
    pub fn inner(&self, other: &Vec6) -> f64 {
        let a = &self.0;
        let b = &other.0;
        a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3] - a[4] * b[4] - a[5] * b[5]
    }

    /// Squared norm under the indefinite form (any sign).
    pub fn norm2(&self) -> f64 {
        self.inner(self)
    }

    /// Euclidean norm of the coordinate vector, used for scale-invariant
    /// tolerances and normalization.
    pub fn norm_e(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|x| x.is_finite())
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.norm_e() <= tol
    }

    /// Lightlike within the relative tolerance `EPS_LIGHT`.
    pub fn is_lightlike(&self) -> bool {
        let n = self.norm_e();
        n > 0.0 && self.norm2().abs() <= EPS_LIGHT * n * n
    }

    pub fn scale(&self, s: f64) -> Vec6 {
        let mut c = self.0;
        for x in &mut c {
            *x *= s;
        }
        Vec6(c)
    }

    /// Representative of unit Euclidean norm with the first coordinate of
    /// significant magnitude made positive. Deterministic, so equality of
    /// projective points reduces to comparing normalized representatives.
    pub fn projective_normalize(&self) -> Vec6 {
        let n = self.norm_e();
        let mut v = self.scale(1.0 / n);
        for x in v.0 {
            if x.abs() > 1e-12 {
                if x < 0.0 {
                    v = v.scale(-1.0);
                }
                break;
            }
        }
        v
    }

    /// Angle between representatives up to sign, computed from the chord
    /// length so that small angles keep full precision; zero iff the two
    /// vectors span the same projective point.
    pub fn projective_angle_to(&self, other: &Vec6) -> f64 {
        let a = self.scale(1.0 / self.norm_e());
        let b = other.scale(1.0 / other.norm_e());
        let d = (a - b).norm_e().min((a + b).norm_e());
        2.0 * ((d / 2.0).min(1.0)).asin()
    }

    /// True iff both span the same projective point (tolerance 1e-9).
    pub fn same_projective_point(&self, other: &Vec6) -> bool {
        self.projective_angle_to(other) < 1e-9
    }

    /// Angle between unit representatives without sign identification;
    /// zero iff the vectors agree up to positive scale.
    pub fn oriented_angle_to(&self, other: &Vec6) -> f64 {
        let a = self.scale(1.0 / self.norm_e());
        let b = other.scale(1.0 / other.norm_e());
        let d = (a - b).norm_e();
        2.0 * ((d / 2.0).min(1.0)).asin()
    }
}

impl Add for Vec6 {
    type Output = Vec6;
    fn add(self, rhs: Vec6) -> Vec6 {
        let mut c = self.0;
        for i in 0..6 {
            c[i] += rhs.0[i];
        }
        Vec6(c)
    }
}

impl Sub for Vec6 {
    type Output = Vec6;
    fn sub(self, rhs: Vec6) -> Vec6 {
        let mut c = self.0;
        for i in 0..6 {
            c[i] -= rhs.0[i];
        }
        Vec6(c)
    }
}

impl Neg for Vec6 {
    type Output = Vec6;
    fn neg(self) -> Vec6 {
        self.scale(-1.0)
    }
}

impl Mul<f64> for Vec6 {
    type Output = Vec6;
    fn mul(self, rhs: f64) -> Vec6 {
        self.scale(rhs)
    }
}

impl std::fmt::Display for Vec6 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "({}, {}, {}, {}, {}, {})",
            self.0[0], self.0[1], self.0[2], self.0[3], self.0[4], self.0[5]
        )
    }
}
