//! Circles as (2,1)-plane splittings and Moebius sphere pencils.
//!
//! A circle is a pair (gamma, gamma_perp) of orthogonal (2,1)-planes where
//! every vector of gamma is orthogonal to the point sphere complex: the
//! lightlike directions of gamma are exactly the points of the circle,
//! and the lightlike directions of gamma_perp are the spheres containing it.

use crate::error::{GeomError, Result};
use crate::kernel::{
    inversive_distance, ContactElement, OrientedSphere, PointSphereComplex,
};
use crate::linalg;
use crate::vec6::Vec6;

/// A circle of the Moebius subgeometry fixed by `p`.
#[derive(Debug, Clone)]
pub struct Circle {
    gamma: [Vec6; 3],
    gamma_perp: [Vec6; 3],
    /// pseudo-orthonormal basis of gamma: (spacelike, spacelike, timelike)
    frame: [Vec6; 3],
}

impl Circle {
    /// Builds a circle from any basis of its point-sphere plane. Checks the
    /// point-sphere condition against `p` and the (2,1) signature.
    pub fn from_gamma_basis(basis: [Vec6; 3], p: &PointSphereComplex) -> Result<Self> {
        for v in &basis {
            if v.inner(&p.rep()).abs() > 1e-8 * v.norm_e() {
                return Err(GeomError::PointSphereArgument);
            }
        }
        if !linalg::signature(&basis).is(2, 1) {
            return Err(GeomError::DegenerateSpan);
        }
        let on = linalg::pseudo_orthonormal_basis(&basis)?;
        let comp = linalg::orthogonal_complement(&basis);
        if comp.len() != 3 {
            return Err(GeomError::DegenerateSpan);
        }
        Ok(Circle {
            gamma: basis,
            gamma_perp: [comp[0], comp[1], comp[2]],
            frame: [on[0], on[1], on[2]],
        })
    }

    /// The circle through three distinct point spheres.
    pub fn through_point_spheres(
        m1: &OrientedSphere,
        m2: &OrientedSphere,
        m3: &OrientedSphere,
        p: &PointSphereComplex,
    ) -> Result<Self> {
        Circle::from_gamma_basis([m1.rep(), m2.rep(), m3.rep()], p)
    }

    pub fn gamma(&self) -> &[Vec6; 3] {
        &self.gamma
    }

    pub fn gamma_perp(&self) -> &[Vec6; 3] {
        &self.gamma_perp
    }

    /// Parametrizes the points of the circle: cos(u) b1 + sin(u) b2 + b3
    /// over a pseudo-orthonormal frame. Lightlike for every u, injective
    /// on [0, 2pi).
    pub fn point(&self, u: f64) -> OrientedSphere {
        let v = self.frame[0].scale(u.cos()) + self.frame[1].scale(u.sin()) + self.frame[2];
        OrientedSphere::new(v).expect("frame combination is lightlike")
    }

    /// Parameter of a point sphere lying on the circle.
    pub fn parameter_of(&self, m: &OrientedSphere) -> Result<f64> {
        // decompose m in the frame: coefficients (x, y, z), point = frame
        // combination with z scaled to 1
        let g = [
            m.rep().inner(&self.frame[0]),
            m.rep().inner(&self.frame[1]),
            -m.rep().inner(&self.frame[2]),
        ];
        if g[2].abs() < 1e-12 * m.rep().norm_e() {
            return Err(GeomError::NotOnSphere);
        }
        Ok((g[1] / g[2]).atan2(g[0] / g[2]))
    }

    /// Residual of membership of a vector in the gamma-plane.
    pub fn membership_residual(&self, v: &Vec6) -> f64 {
        linalg::distance_to_span(v, &self.gamma)
    }

    /// A sphere through the circle: lightlike direction of gamma_perp.
    /// The sign picks one of the two orientations per parameter.
    pub fn sphere_through(&self, psi: f64) -> Result<OrientedSphere> {
        let on = linalg::pseudo_orthonormal_basis(&self.gamma_perp)?;
        let v = on[0].scale(psi.cos()) + on[1].scale(psi.sin()) + on[2];
        OrientedSphere::new(v)
    }

    /// Euclidean tangent direction at parameter u (the derivative of the
    /// projected point). Fails on the point at infinity.
    pub fn euclidean_tangent(&self, u: f64) -> Result<[f64; 3]> {
        let m = self.frame[0].scale(u.cos()) + self.frame[1].scale(u.sin()) + self.frame[2];
        let dm = self.frame[1].scale(u.cos()) - self.frame[0].scale(u.sin());
        let w = m.0[3] + m.0[4];
        if w.abs() < 1e-10 * m.norm_e() {
            return Err(GeomError::PointSphereArgument);
        }
        let dw = dm.0[3] + dm.0[4];
        let mut t = [0.0; 3];
        for i in 0..3 {
            t[i] = (dm.0[i] * w - m.0[i] * dw) / (w * w);
        }
        Ok(t)
    }
}

/// The circle through two point spheres of a sphere `s` that intersects
/// `s` orthogonally: gamma = span(m1, m2, s + <s,p> p).
pub fn orthogonal_circle(
    m1: &OrientedSphere,
    m2: &OrientedSphere,
    s: &OrientedSphere,
    p: &PointSphereComplex,
) -> Result<Circle> {
    for m in [m1, m2] {
        if !m.is_point_sphere(p) {
            return Err(GeomError::PointSphereArgument);
        }
        if crate::kernel::orthogonality_residual(m, s, p) > 1e-8 {
            return Err(GeomError::NotOnSphere);
        }
    }
    if m1.rep().same_projective_point(&m2.rep()) {
        return Err(GeomError::CoincidentPoints);
    }
    let w = s.rep() + p.rep().scale(s.rep().inner(&p.rep()));
    Circle::from_gamma_basis([m1.rep(), m2.rep(), w], p)
}

/// The 4-space of spheres orthogonal to the circle cut out by two contact
/// elements sharing a common sphere r: span(r, s, s_hat, p).
pub fn spheres_orthogonal_to_circle(
    f: &ContactElement,
    fhat: &ContactElement,
    p: &PointSphereComplex,
) -> Result<[Vec6; 4]> {
    let a = f.spanning();
    let b = fhat.spanning();
    let common = linalg::span_intersection(&a, &b);
    match common.len() {
        0 => Err(GeomError::NoCommonSphere),
        1 => {
            let r = common[0];
            // pick the spanning sphere furthest from r in each element
            let pick = |pair: [Vec6; 2]| -> Vec6 {
                if pair[0].projective_angle_to(&r) > pair[1].projective_angle_to(&r) {
                    pair[0]
                } else {
                    pair[1]
                }
            };
            let s = pick(a);
            let shat = pick(b);
            let basis = [r, s, shat, p.rep()];
            if linalg::rank(&basis, 1e-9) != 4 {
                return Err(GeomError::DegenerateSpan);
            }
            Ok(basis)
        }
        _ => Err(GeomError::DegenerateInput),
    }
}

/// Pencil kind: whether the two generating spheres intersect in a circle,
/// touch, or are disjoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PencilKind {
    Pencil0,
    Pencil1,
    Pencil2,
}

/// The 3-space span(s1, s2, p) of a Moebius sphere pencil.
#[derive(Debug, Clone)]
pub struct MSpherePencil {
    s1: OrientedSphere,
    s2: OrientedSphere,
    p: PointSphereComplex,
    kind: PencilKind,
}

impl MSpherePencil {
    pub fn kind(&self) -> PencilKind {
        self.kind
    }

    pub fn generators(&self) -> (&OrientedSphere, &OrientedSphere) {
        (&self.s1, &self.s2)
    }

    pub fn span(&self) -> [Vec6; 3] {
        [self.s1.rep(), self.s2.rep(), self.p.rep()]
    }

    /// The designated parameter at which `pencil_sphere` passes through s2.
    pub fn second_generator_parameter(&self) -> f64 {
        std::f64::consts::FRAC_PI_2
    }
}

/// Classifies the pencil of s1, s2 by the unclamped inversive distance:
/// |d| < 1 intersecting (0-pencil), |d| = 1 tangent (1-pencil),
/// |d| > 1 disjoint (2-pencil).
pub fn classify_pencil(
    s1: &OrientedSphere,
    s2: &OrientedSphere,
    p: &PointSphereComplex,
) -> Result<MSpherePencil> {
    if linalg::rank(&[s2.rep(), p.rep(), s1.rep()], 1e-9) != 3 {
        return Err(GeomError::DegeneratePencil);
    }
    let d = inversive_distance(s1, s2, p)?;
    let kind = if (d.abs() - 1.0).abs() <= 1e-9 {
        PencilKind::Pencil1
    } else if d.abs() < 1.0 {
        PencilKind::Pencil0
    } else {
        PencilKind::Pencil2
    };
    Ok(MSpherePencil { s1: *s1, s2: *s2, p: *p, kind })
}

/// Oriented spheres of the pencil, parametrized continuously with
/// q(0) = s1 and q(pi/2) proportional to s2 whenever both generators lie
/// on the same side of the point sphere complex. Directions of the pencil
/// that carry no sphere yield `NoSphereAtParameter`.
pub fn pencil_sphere(m: &MSpherePencil, t: f64) -> Result<OrientedSphere> {
    let n1 = m.s1.rep().scale(1.0 / m.s1.rep().norm_e());
    let n2 = m.s2.rep().scale(1.0 / m.s2.rep().norm_e());
    let d = n1.scale(t.cos()) + n2.scale(t.sin());
    let dp = d.inner(&m.p.rep());
    let dd = d.norm2();
    let disc = dp * dp + dd; // <p,p> = -1
    if disc < -1e-12 {
        return Err(GeomError::NoSphereAtParameter);
    }
    let root = disc.max(0.0).sqrt();
    let sign = -n1.inner(&m.p.rep()).signum();
    let kappa = dp + sign * root;
    let v = d + m.p.rep().scale(kappa);
    OrientedSphere::new(v).map_err(|_| GeomError::NoSphereAtParameter)
}
