//! Lifting Euclidean primitives into the hexaspherical model and back.
//!
//! Conventions (with p = e6):
//!   sphere (center c, signed radius r) -> (c, (1-|c|^2+r^2)/2, (1+|c|^2-r^2)/2, r)
//!   point x                            -> the same with r = 0
//!   plane (unit normal N, offset d)    -> (N, -d, d, 1)
//!   point at infinity                  -> e5 - e4
//!
//! Every lift is lightlike, <lift, p> = -r, and every finite point lift n
//! satisfies <n, q> = -1 for the flat space form vector q = e5 - e4.

use crate::error::{GeomError, Result};
use crate::incidence::Circle;
use crate::kernel::{OrientedSphere, PointSphereComplex};
use crate::vec6::Vec6;

/// A Euclidean sphere-like primitive. Exactly one form is active; planes
/// carry a unit normal, spheres a signed (oriented) radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EuclidSphere {
    Sphere { center: [f64; 3], radius: f64 },
    Point { position: [f64; 3] },
    Plane { normal: [f64; 3], offset: f64 },
    Infinity,
}

impl EuclidSphere {
    pub fn sphere(center: [f64; 3], radius: f64) -> Self {
        EuclidSphere::Sphere { center, radius }
    }

    pub fn point(position: [f64; 3]) -> Self {
        EuclidSphere::Point { position }
    }

    /// Normalizes the normal to unit length, rescaling the offset to keep
    /// the same plane {x . n = offset}.
    pub fn plane(normal: [f64; 3], offset: f64) -> Result<Self> {
        let n = (normal[0] * normal[0] + normal[1] * normal[1] + normal[2] * normal[2]).sqrt();
        if !(n.is_finite() && n > 0.0) {
            return Err(GeomError::InvalidVector);
        }
        Ok(EuclidSphere::Plane {
            normal: [normal[0] / n, normal[1] / n, normal[2] / n],
            offset: offset / n,
        })
    }
}

/// The direction of the point at infinity, e5 - e4.
pub fn infinity_rep() -> Vec6 {
    Vec6::E5 - Vec6::E4
}

/// Lifts a Euclidean primitive to its hexaspherical representative.
pub fn lift(s: &EuclidSphere) -> OrientedSphere {
    let rep = match *s {
        EuclidSphere::Sphere { center: c, radius: r } => {
            let c2 = c[0] * c[0] + c[1] * c[1] + c[2] * c[2];
            Vec6::new(c[0], c[1], c[2], (1.0 - c2 + r * r) / 2.0, (1.0 + c2 - r * r) / 2.0, r)
        }
        EuclidSphere::Point { position: x } => {
            let x2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
            Vec6::new(x[0], x[1], x[2], (1.0 - x2) / 2.0, (1.0 + x2) / 2.0, 0.0)
        }
        EuclidSphere::Plane { normal: n, offset: d } => {
            Vec6::new(n[0], n[1], n[2], -d, d, 1.0)
        }
        EuclidSphere::Infinity => infinity_rep(),
    };
    OrientedSphere::new(rep).expect("lift is lightlike by construction")
}

/// Inverse of `lift` on lightlike vectors: the representative is rescaled
/// so that x4 + x5 = 1 when possible; otherwise the plane/infinity branch
/// applies (|x4 + x5| below 1e-10 relative).
pub fn project(v: &Vec6) -> Result<EuclidSphere> {
    if !v.is_finite() || v.is_zero(0.0) {
        return Err(GeomError::InvalidVector);
    }
    if !v.is_lightlike() {
        return Err(GeomError::NotLightlike);
    }
    let scale = v.norm_e();
    let lambda = v.0[3] + v.0[4];
    if lambda.abs() > 1e-10 * scale {
        let w = v.scale(1.0 / lambda);
        let radius = w.0[5];
        let center = [w.0[0], w.0[1], w.0[2]];
        if radius.abs() <= 1e-13 * (1.0 + center.iter().map(|c| c.abs()).fold(0.0, f64::max)) {
            Ok(EuclidSphere::Point { position: center })
        } else {
            Ok(EuclidSphere::Sphere { center, radius })
        }
    } else if v.0[5].abs() > 1e-10 * scale {
        let w = v.scale(1.0 / v.0[5]);
        EuclidSphere::plane([w.0[0], w.0[1], w.0[2]], -w.0[3])
    } else {
        Ok(EuclidSphere::Infinity)
    }
}

/// Projects a sphere representative.
pub fn project_sphere(s: &OrientedSphere) -> Result<EuclidSphere> {
    project(&s.rep())
}

/// Euclidean position of a point sphere; `None` for the point at infinity.
pub fn point_position(s: &OrientedSphere) -> Result<Option<[f64; 3]>> {
    match project(&s.rep())? {
        EuclidSphere::Point { position } => Ok(Some(position)),
        EuclidSphere::Infinity => Ok(None),
        _ => Err(GeomError::PointSphereArgument),
    }
}

/// A space form vector: q perpendicular to p selects the quadric of point
/// spheres n with <n,q> = -1, of constant curvature -<q,q>.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpaceForm {
    pub q: Vec6,
    pub curvature: f64,
}

impl SpaceForm {
    pub fn new(q: Vec6, p: &PointSphereComplex) -> Result<Self> {
        if q.is_zero(1e-300) || !q.is_finite() {
            return Err(GeomError::InvalidVector);
        }
        if q.inner(&p.rep()).abs() > 1e-9 * q.norm_e() {
            return Err(GeomError::NotOrthogonal);
        }
        Ok(SpaceForm { q, curvature: -q.norm2() })
    }
}

/// The flat space form of the standard lift: q = e5 - e4, curvature 0.
pub fn euclidean_space_form(p: &PointSphereComplex) -> SpaceForm {
    SpaceForm::new(infinity_rep(), p).expect("e5 - e4 is orthogonal to every admissible p")
}

/// One sample of a circle, either a finite point or the point at infinity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CircleSample {
    Finite([f64; 3]),
    Infinity,
}

/// Projects `n` equally spaced points of the circle; samples too close to
/// the infinity direction are flagged rather than projected.
pub fn sample_circle_euclidean(c: &Circle, n: usize) -> Result<Vec<CircleSample>> {
    if n < 3 {
        return Err(GeomError::InvalidVector);
    }
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let u = 2.0 * std::f64::consts::PI * (k as f64) / (n as f64);
        let m = c.point(u);
        match project(&m.rep())? {
            EuclidSphere::Point { position } => out.push(CircleSample::Finite(position)),
            EuclidSphere::Infinity => out.push(CircleSample::Infinity),
            // a lightlike vector in a point-sphere plane projects to a point
            // or infinity; anything else means the circle is invalid
            _ => return Err(GeomError::DegenerateSpan),
        }
    }
    Ok(out)
}
