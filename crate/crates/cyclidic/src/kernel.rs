//! Spheres, linear sphere complexes and Lie inversions.
//!
//! Oriented spheres are lightlike projective points. A choice of point
//! sphere complex `p` (timelike, normalized to <p,p> = -1) singles out a
//! Moebius subgeometry: point spheres are the lightlike directions
//! orthogonal to `p`, and angles between spheres become well defined.
//!
//! The reflection in the hyperplane orthogonal to a non-lightlike vector
//! `a` is the Lie inversion `sigma_a`; it preserves oriented contact, and
//! fixes `p` exactly when `<a,p> = 0` (an M-Lie inversion, i.e. a Moebius
//! transformation).

use crate::error::{GeomError, Result};
use crate::linalg;
use crate::vec6::{Vec6, EPS_LIGHT};

/// An oriented sphere: a lightlike projective representative.
/// Points and oriented planes are included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrientedSphere {
    rep: Vec6,
}

impl OrientedSphere {
    /// Wraps a lightlike representative (relative tolerance `EPS_LIGHT`).
    pub fn new(rep: Vec6) -> Result<Self> {
        if !rep.is_finite() || rep.is_zero(0.0) {
            return Err(GeomError::InvalidVector);
        }
        if !rep.is_lightlike() {
            return Err(GeomError::NotLightlike);
        }
        Ok(OrientedSphere { rep })
    }

    pub fn rep(&self) -> Vec6 {
        self.rep
    }

    /// True if this is a point sphere of the subgeometry fixed by `p`.
    pub fn is_point_sphere(&self, p: &PointSphereComplex) -> bool {
        self.rep.inner(&p.rep()).abs() <= 1e-9 * self.rep.norm_e()
    }

    pub fn same_oriented_sphere(&self, other: &OrientedSphere) -> bool {
        self.rep.oriented_angle_to(&other.rep) < 1e-9
    }
}

/// Kind of a linear sphere complex, by the sign of <a,a>.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComplexKind {
    Parabolic,
    Hyperbolic,
    Elliptic,
}

/// A linear sphere complex: the spheres orthogonal to a fixed vector `a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearSphereComplex {
    rep: Vec6,
    kind: ComplexKind,
}

impl LinearSphereComplex {
    pub fn new(rep: Vec6) -> Result<Self> {
        if !rep.is_finite() || rep.is_zero(0.0) {
            return Err(GeomError::InvalidVector);
        }
        let n2 = rep.norm_e() * rep.norm_e();
        let q = rep.norm2();
        let kind = if q.abs() <= EPS_LIGHT * n2 {
            ComplexKind::Parabolic
        } else if q < 0.0 {
            ComplexKind::Hyperbolic
        } else {
            ComplexKind::Elliptic
        };
        Ok(LinearSphereComplex { rep, kind })
    }

    /// As `new`, but rejects parabolic complexes (no inversion exists).
    pub fn new_invertible(rep: Vec6) -> Result<Self> {
        let c = Self::new(rep)?;
        if c.kind == ComplexKind::Parabolic {
            return Err(GeomError::ParabolicComplex);
        }
        Ok(c)
    }

    pub fn rep(&self) -> Vec6 {
        self.rep
    }

    pub fn kind(&self) -> ComplexKind {
        self.kind
    }

    /// Fixes the point sphere complex, i.e. the inversion is a Moebius map.
    pub fn is_m_lie(&self, p: &PointSphereComplex) -> bool {
        self.rep.inner(&p.rep()).abs() <= 1e-9 * self.rep.norm_e()
    }
}

/// The distinguished timelike direction fixing a Moebius subgeometry,
/// normalized so that <p,p> = -1 exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointSphereComplex {
    rep: Vec6,
}

impl PointSphereComplex {
    pub fn new(rep: Vec6) -> Result<Self> {
        if !rep.is_finite() || rep.is_zero(0.0) {
            return Err(GeomError::InvalidVector);
        }
        let q = rep.norm2();
        if q >= 0.0 {
            return Err(GeomError::InvalidVector);
        }
        Ok(PointSphereComplex { rep: rep.scale(1.0 / (-q).sqrt()) })
    }

    /// The standard choice e6, matching the Euclidean lift of this crate.
    pub fn standard() -> Self {
        PointSphereComplex { rep: Vec6::E6 }
    }

    pub fn rep(&self) -> Vec6 {
        self.rep
    }
}

/// A contact element: the pencil spanned by two spheres in oriented contact.
#[derive(Debug, Clone, Copy)]
pub struct ContactElement {
    s1: OrientedSphere,
    s2: OrientedSphere,
}

impl ContactElement {
    pub fn new(s1: OrientedSphere, s2: OrientedSphere) -> Result<Self> {
        let scale = s1.rep().norm_e() * s2.rep().norm_e();
        if s1.rep().inner(&s2.rep()).abs() > 1e-8 * scale {
            return Err(GeomError::ContactViolation);
        }
        if s1.rep().same_projective_point(&s2.rep()) {
            return Err(GeomError::DegenerateInput);
        }
        Ok(ContactElement { s1, s2 })
    }

    pub fn spanning(&self) -> [Vec6; 2] {
        [self.s1.rep(), self.s2.rep()]
    }

    /// The unique point sphere of the pencil (up to scale).
    pub fn point_sphere(&self, p: &PointSphereComplex) -> Result<OrientedSphere> {
        let m = combine_to_complex(&self.s1.rep(), &self.s2.rep(), p)?;
        OrientedSphere::new(m)
    }

    /// The pencil sphere orthogonal to the (Moebius) condition vector `w`,
    /// i.e. the element x with <x, w> = 0.
    pub fn sphere_orthogonal_to(&self, w: &Vec6) -> Result<OrientedSphere> {
        let a = self.s1.rep().inner(w);
        let b = self.s2.rep().inner(w);
        let v = self.s2.rep().scale(a) - self.s1.rep().scale(b);
        if v.is_zero(1e-12 * (self.s1.rep().norm_e() + self.s2.rep().norm_e())) {
            return Err(GeomError::DegenerateInput);
        }
        OrientedSphere::new(v)
    }
}

/// <s2,p> s1 - <s1,p> s2, the complex of the M-Lie inversion carrying s1 to s2.
fn combine_to_complex(s1: &Vec6, s2: &Vec6, p: &PointSphereComplex) -> Result<Vec6> {
    let a = s1.scale(s2.inner(&p.rep())) - s2.scale(s1.inner(&p.rep()));
    if a.is_zero(1e-10 * (s1.norm_e() + s2.norm_e())) {
        return Err(GeomError::DegeneratePair);
    }
    Ok(a)
}

/// Reflection of `r` in the hyperplane orthogonal to the complex `a`.
pub fn lie_inversion(a: &LinearSphereComplex, r: &Vec6) -> Result<Vec6> {
    if a.kind() == ComplexKind::Parabolic {
        return Err(GeomError::ParabolicComplex);
    }
    let av = a.rep();
    Ok(*r - av.scale(2.0 * r.inner(&av) / av.norm2()))
}

/// Applies the inversion to an oriented sphere; lightlike is preserved.
pub fn invert_sphere(a: &LinearSphereComplex, s: &OrientedSphere) -> Result<OrientedSphere> {
    OrientedSphere::new(lie_inversion(a, &s.rep())?)
}

/// The complex of the unique M-Lie inversion mapping `s1` to `s2`
/// projectively: a = <s2,p> s1 - <s1,p> s2. Satisfies <a,p> = 0.
pub fn complex_from_sphere_pair(
    s1: &OrientedSphere,
    s2: &OrientedSphere,
    p: &PointSphereComplex,
) -> Result<LinearSphereComplex> {
    let a = combine_to_complex(&s1.rep(), &s2.rep(), p)?;
    LinearSphereComplex::new_invertible(a)
}

/// The unique Lie inversion mapping s1 -> s2 and s4 -> s3, recovered from
/// the linear relation s1 - s2 + s3 - s4 = 0 after rescaling the
/// representatives. Inputs must be mutually not in oriented contact.
pub fn inversion_from_four_spheres(
    s1: &OrientedSphere,
    s2: &OrientedSphere,
    s3: &OrientedSphere,
    s4: &OrientedSphere,
) -> Result<LinearSphereComplex> {
    let reps: Vec<Vec6> = [s1, s2, s3, s4]
        .iter()
        .map(|s| s.rep().scale(1.0 / s.rep().norm_e()))
        .collect();
    for i in 0..4 {
        for j in (i + 1)..4 {
            if reps[i].inner(&reps[j]).abs() < 1e-9 {
                return Err(GeomError::ContactViolation);
            }
        }
    }
    // nullspace of [s1, -s2, s3, -s4] gives the rescaling
    let cols = [reps[0], -reps[1], reps[2], -reps[3]];
    let null = linalg::column_nullspace(&cols, 1e-9);
    let lambda = match null.len() {
        0 => return Err(GeomError::NoLinearRelation),
        1 => null[0].clone(),
        _ => most_balanced(&null),
    };
    if lambda.iter().any(|l| l.abs() < 1e-7) {
        return Err(GeomError::NoLinearRelation);
    }
    let a = reps[0].scale(lambda[0]) - reps[1].scale(lambda[1]);
    LinearSphereComplex::new_invertible(a)
}

/// Combination of nullspace directions maximizing the smallest coefficient
/// magnitude; used when the relation is not unique.
fn most_balanced(null: &[Vec<f64>]) -> Vec<f64> {
    debug_assert!(null.len() == 2);
    let mut best = null[0].clone();
    let mut best_min = 0.0;
    let steps = 720;
    for k in 0..steps {
        let t = std::f64::consts::PI * (k as f64) / (steps as f64);
        let (c, s) = (t.cos(), t.sin());
        let cand: Vec<f64> = (0..4).map(|i| c * null[0][i] + s * null[1][i]).collect();
        let m = cand.iter().map(|x| x.abs()).fold(f64::INFINITY, f64::min);
        if m > best_min {
            best_min = m;
            best = cand;
        }
    }
    best
}

/// Unclamped inversive distance 1 - <s1,s2><p,p> / (<s1,p><s2,p>).
pub fn inversive_distance(
    s1: &OrientedSphere,
    s2: &OrientedSphere,
    p: &PointSphereComplex,
) -> Result<f64> {
    let p1 = s1.rep().inner(&p.rep());
    let p2 = s2.rep().inner(&p.rep());
    if p1.abs() <= 1e-12 * s1.rep().norm_e() || p2.abs() <= 1e-12 * s2.rep().norm_e() {
        return Err(GeomError::PointSphereArgument);
    }
    let pp = p.rep().norm2();
    Ok(1.0 - s1.rep().inner(&s2.rep()) * pp / (p1 * p2))
}

/// Unoriented intersection angle of two spheres, in radians.
/// Fails with `NonIntersecting` when |cos| exceeds 1 beyond tolerance.
pub fn angle(
    s1: &OrientedSphere,
    s2: &OrientedSphere,
    p: &PointSphereComplex,
) -> Result<f64> {
    let c = inversive_distance(s1, s2, p)?;
    if c.abs() > 1.0 + 1e-9 {
        return Err(GeomError::NonIntersecting);
    }
    Ok(c.clamp(-1.0, 1.0).acos())
}

/// Orthogonal intersection test: <s1, s2 + <s2,p> p> = 0, scale invariant.
/// A point sphere intersects a sphere orthogonally iff it lies on it.
pub fn orthogonal(s1: &OrientedSphere, s2: &OrientedSphere, p: &PointSphereComplex) -> bool {
    orthogonality_residual(s1, s2, p) < 1e-9
}

/// Normalized residual of the orthogonality condition.
pub fn orthogonality_residual(
    s1: &OrientedSphere,
    s2: &OrientedSphere,
    p: &PointSphereComplex,
) -> f64 {
    let a = s1.rep().scale(1.0 / s1.rep().norm_e());
    let b = s2.rep().scale(1.0 / s2.rep().norm_e());
    let w = b + p.rep().scale(b.inner(&p.rep()));
    a.inner(&w).abs()
}

/// The two spheres of an elliptic complex: the lightlike directions of
/// span(a, p). They coincide up to orientation and are swapped by sigma_a.
pub fn elliptic_complex_spheres(
    a: &LinearSphereComplex,
    p: &PointSphereComplex,
) -> Result<(OrientedSphere, OrientedSphere)> {
    // x a + y p lightlike: x^2 <a,a> + 2xy <a,p> + y^2 <p,p> = 0
    let av = a.rep().scale(1.0 / a.rep().norm_e());
    let aa = av.norm2();
    let ap = av.inner(&p.rep());
    let pp = p.rep().norm2();
    let disc = ap * ap - aa * pp;
    if disc <= 1e-12 {
        return Err(GeomError::NoRealSpheres);
    }
    let root = disc.sqrt();
    let make = |y: f64| -> Result<OrientedSphere> {
        // solve for x with y fixed: aa x^2 + 2 ap x y + pp y^2 = 0
        OrientedSphere::new(av + p.rep().scale(y))
    };
    if aa.abs() < 1e-12 {
        // a itself lightlike is excluded by construction (non-parabolic)
        return Err(GeomError::ParabolicComplex);
    }
    // normalize x = 1: y = (-ap +- root)/pp ... solve pp y^2 + 2 ap y + aa = 0
    let y1 = (-ap + root) / pp;
    let y2 = (-ap - root) / pp;
    Ok((make(y1)?, make(y2)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> PointSphereComplex {
        PointSphereComplex::standard()
    }

    #[test]
    fn inversion_reflects_axis_and_fixes_hyperplane() {
        let a = LinearSphereComplex::new_invertible(Vec6::E1).unwrap();
        // sigma_a(a) = -a
        let img = lie_inversion(&a, &Vec6::E1).unwrap();
        assert!((img + Vec6::E1).norm_e() < 1e-15);
        // fixed hyperplane
        let x = Vec6::new(0.0, 2.0, -1.0, 3.0, 0.5, 0.7);
        let img = lie_inversion(&a, &x).unwrap();
        assert!((img - x).norm_e() < 1e-15);
        // a = e1, r = e1 + e5 -> -e1 + e5
        let r = Vec6::E1 + Vec6::E5;
        let img = lie_inversion(&a, &r).unwrap();
        assert!((img - (Vec6::E5 - Vec6::E1)).norm_e() < 1e-15);
    }

    #[test]
    fn parabolic_complex_is_rejected() {
        let light = Vec6::new(1.0, 0.0, 0.0, 0.0, 1.0, 0.0);
        assert_eq!(
            LinearSphereComplex::new_invertible(light).unwrap_err(),
            GeomError::ParabolicComplex
        );
    }

    #[test]
    fn complex_kinds() {
        assert_eq!(LinearSphereComplex::new(Vec6::E1).unwrap().kind(), ComplexKind::Elliptic);
        assert_eq!(LinearSphereComplex::new(Vec6::E5).unwrap().kind(), ComplexKind::Hyperbolic);
        let light = Vec6::new(1.0, 0.0, 0.0, 0.0, 1.0, 0.0);
        assert_eq!(LinearSphereComplex::new(light).unwrap().kind(), ComplexKind::Parabolic);
    }

    #[test]
    fn pair_complex_is_m_lie_and_swaps() {
        // lifts of concentric spheres radius 1 and 2 at the origin
        let s1 = OrientedSphere::new(Vec6::new(0.0, 0.0, 0.0, 1.0, 0.0, 1.0)).unwrap();
        let s2 = OrientedSphere::new(Vec6::new(0.0, 0.0, 0.0, 2.5, -1.5, 2.0)).unwrap();
        let a = complex_from_sphere_pair(&s1, &s2, &p()).unwrap();
        assert!(a.rep().inner(&p().rep()).abs() < 1e-12);
        let img = invert_sphere(&a, &s1).unwrap();
        assert!(img.rep().same_projective_point(&s2.rep()));
        // applied twice returns s1
        let back = invert_sphere(&a, &img).unwrap();
        assert!(back.rep().same_projective_point(&s1.rep()));
    }

    #[test]
    fn degenerate_pair_rejected() {
        let s1 = OrientedSphere::new(Vec6::new(0.0, 0.0, 0.0, 1.0, 0.0, 1.0)).unwrap();
        assert_eq!(
            complex_from_sphere_pair(&s1, &s1, &p()).unwrap_err(),
            GeomError::DegeneratePair
        );
    }

    #[test]
    fn four_sphere_inversion_contact_violation() {
        // oriented contact pair: externally tangent unit spheres with
        // opposite orientations have <s1,s2> = 0
        let s1 = OrientedSphere::new(Vec6::new(0.0, 0.0, 0.0, 1.0, 0.0, 1.0)).unwrap();
        let t = OrientedSphere::new(Vec6::new(2.0, 0.0, 0.0, -1.0, 2.0, -1.0)).unwrap();
        assert!(s1.rep().inner(&t.rep()).abs() < 1e-12);
        let s3 = OrientedSphere::new(Vec6::new(0.0, 0.0, 0.0, 2.5, -1.5, 2.0)).unwrap();
        let s4 = OrientedSphere::new(Vec6::new(0.0, 0.0, 0.0, 5.0, -4.0, 3.0)).unwrap();
        assert_eq!(
            inversion_from_four_spheres(&s1, &t, &s3, &s4).unwrap_err(),
            GeomError::ContactViolation
        );
    }

    #[test]
    fn angle_of_sphere_with_itself_is_zero() {
        let s = OrientedSphere::new(Vec6::new(0.0, 0.0, 0.0, 1.0, 0.0, 1.0)).unwrap();
        assert!(angle(&s, &s, &p()).unwrap().abs() < 1e-12);
    }

    #[test]
    fn concentric_spheres_do_not_intersect() {
        let s1 = OrientedSphere::new(Vec6::new(0.0, 0.0, 0.0, 1.0, 0.0, 1.0)).unwrap();
        // radius 3 at origin: (0,0,0,5,-4,3)
        let s2 = OrientedSphere::new(Vec6::new(0.0, 0.0, 0.0, 5.0, -4.0, 3.0)).unwrap();
        assert_eq!(angle(&s1, &s2, &p()).unwrap_err(), GeomError::NonIntersecting);
        // the unclamped accessor still reports the inversive distance
        let d = inversive_distance(&s1, &s2, &p()).unwrap();
        assert!(d.abs() > 1.0);
    }

    #[test]
    fn sphere_is_not_orthogonal_to_itself() {
        let s = OrientedSphere::new(Vec6::new(0.0, 0.0, 0.0, 1.0, 0.0, 1.0)).unwrap();
        assert!(!orthogonal(&s, &s, &p()));
    }

    #[test]
    fn elliptic_spheres_are_swapped_by_the_inversion() {
        // unit sphere lift with its p-component removed: (0,0,0,1,0,0)
        let a = LinearSphereComplex::new_invertible(Vec6::E4).unwrap();
        let (sp, sm) = elliptic_complex_spheres(&a, &p()).unwrap();
        assert!(sp.rep().is_lightlike() && sm.rep().is_lightlike());
        // both unoriented copies of the same sphere: projections coincide
        let ip = invert_sphere(&a, &sp).unwrap();
        assert!(ip.rep().same_projective_point(&sm.rep()));
        let im = invert_sphere(&a, &sm).unwrap();
        assert!(im.rep().same_projective_point(&sp.rep()));
    }

    #[test]
    fn no_real_spheres_for_definite_span() {
        // timelike p-orthogonal complex: span(a, p) is negative definite
        let a = LinearSphereComplex::new(Vec6::E5).unwrap();
        assert_eq!(
            elliptic_complex_spheres(&a, &p()).unwrap_err(),
            GeomError::NoRealSpheres
        );
    }
}
