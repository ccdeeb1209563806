//! Dupin cyclides as orthogonal (2,1) + (2,1) splittings.
//!
//! The lightlike directions of each plane of the splitting form one of the
//! two curvature sphere families. Evolving the curvature circle of a base
//! sphere through the family of M-Lie inversions
//!
//! ```text
//! a_t = <s(t),p> s(t0)  -  <s(t0),p> s(t)
//! ```
//!
//! produces a curvature line parametrization; the same inversions transport
//! quer-spheres (the spheres meeting a curvature sphere orthogonally along
//! its curvature circle) and 2-ortho circles.

use crate::error::{GeomError, Result};
use crate::incidence::{Circle, MSpherePencil};
use crate::kernel::{
    invert_sphere, lie_inversion, ContactElement, LinearSphereComplex, OrientedSphere,
    PointSphereComplex,
};
use crate::linalg;
use crate::vec6::Vec6;

use std::f64::consts::{PI, TAU};

/// Which of the two curvature sphere families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyIndex {
    One,
    Two,
}

/// A Dupin cyclide: two orthogonal (2,1)-planes spanning the whole space.
#[derive(Debug, Clone)]
pub struct DupinCyclide {
    d1: [Vec6; 3],
    d2: [Vec6; 3],
    frame1: [Vec6; 3],
    frame2: [Vec6; 3],
}

impl DupinCyclide {
    /// Builds the splitting from bases of both planes, checking mutual
    /// orthogonality and the (2,1) signatures.
    pub fn from_splitting(d1: [Vec6; 3], d2: [Vec6; 3]) -> Result<Self> {
        for a in &d1 {
            for b in &d2 {
                if a.inner(b).abs() > 1e-9 * a.norm_e() * b.norm_e() {
                    return Err(GeomError::DegenerateSpan);
                }
            }
        }
        if !linalg::signature(&d1).is(2, 1) || !linalg::signature(&d2).is(2, 1) {
            return Err(GeomError::DegenerateSpan);
        }
        let frame1 = linalg::pseudo_orthonormal_basis(&d1)?;
        let frame2 = linalg::pseudo_orthonormal_basis(&d2)?;
        Ok(DupinCyclide {
            d1,
            d2,
            frame1: [frame1[0], frame1[1], frame1[2]],
            frame2: [frame2[0], frame2[1], frame2[2]],
        })
    }

    /// Builds the splitting from one family plane; the other plane is its
    /// orthogonal complement.
    pub fn from_family_span(d1: [Vec6; 3]) -> Result<Self> {
        let comp = linalg::orthogonal_complement(&d1);
        if comp.len() != 3 {
            return Err(GeomError::DegenerateSpan);
        }
        DupinCyclide::from_splitting(d1, [comp[0], comp[1], comp[2]])
    }

    pub fn d1(&self) -> &[Vec6; 3] {
        &self.d1
    }

    pub fn d2(&self) -> &[Vec6; 3] {
        &self.d2
    }

    pub fn plane(&self, index: FamilyIndex) -> &[Vec6; 3] {
        match index {
            FamilyIndex::One => &self.d1,
            FamilyIndex::Two => &self.d2,
        }
    }

    pub fn family(&self, index: FamilyIndex) -> CurvatureSphereFamily {
        match index {
            FamilyIndex::One => CurvatureSphereFamily {
                frame: self.frame1,
                other_frame: self.frame2,
                index,
            },
            FamilyIndex::Two => CurvatureSphereFamily {
                frame: self.frame2,
                other_frame: self.frame1,
                index,
            },
        }
    }

    /// Image of the cyclide under a Lie inversion: both planes reflected.
    pub fn transform(&self, a: &LinearSphereComplex) -> Result<DupinCyclide> {
        let map = |basis: &[Vec6; 3]| -> Result<[Vec6; 3]> {
            Ok([
                lie_inversion(a, &basis[0])?,
                lie_inversion(a, &basis[1])?,
                lie_inversion(a, &basis[2])?,
            ])
        };
        DupinCyclide::from_splitting(map(&self.d1)?, map(&self.d2)?)
    }

    /// The point sphere of the contact element at curvature parameters
    /// (u, v): the point sphere of span(s1(u), s2(v)).
    pub fn surface_point(&self, u: f64, v: f64, p: &PointSphereComplex) -> Result<OrientedSphere> {
        let s1 = self.family(FamilyIndex::One).sphere(u);
        let s2 = self.family(FamilyIndex::Two).sphere(v);
        let m = s1.rep().scale(s2.rep().inner(&p.rep())) - s2.rep().scale(s1.rep().inner(&p.rep()));
        if m.is_zero(1e-12) {
            return Err(GeomError::SingularParameter);
        }
        OrientedSphere::new(m)
    }

    /// The contact element at curvature parameters (u, v).
    pub fn contact_element(&self, u: f64, v: f64) -> Result<ContactElement> {
        ContactElement::new(
            self.family(FamilyIndex::One).sphere(u),
            self.family(FamilyIndex::Two).sphere(v),
        )
    }

    /// Signed incidence defect of a point sphere with the surface: zero iff
    /// the D1-component of the representative is lightlike, which is the
    /// membership condition for points of the cyclide.
    pub fn incidence_defect(&self, m: &OrientedSphere) -> f64 {
        let v = m.rep().scale(1.0 / m.rep().norm_e());
        let f = &self.frame1;
        let p1 = f[0].scale(v.inner(&f[0])) + f[1].scale(v.inner(&f[1])) - f[2].scale(v.inner(&f[2]));
        p1.norm2()
    }

    /// Curvature spheres of the contact element through an on-surface point:
    /// the projections of the representative onto the two planes.
    pub fn curvature_spheres_at(&self, m: &OrientedSphere) -> Result<(OrientedSphere, OrientedSphere)> {
        let v = m.rep().scale(1.0 / m.rep().norm_e());
        let part = |f: &[Vec6; 3]| {
            f[0].scale(v.inner(&f[0])) + f[1].scale(v.inner(&f[1])) - f[2].scale(v.inner(&f[2]))
        };
        let s1 = part(&self.frame1);
        let s2 = part(&self.frame2);
        Ok((OrientedSphere::new(s1)?, OrientedSphere::new(s2)?))
    }

    /// Outward unit normal of the surface at an on-surface point, taken
    /// from the Euclidean form of a curvature sphere through it.
    pub fn euclidean_normal_at(&self, m: &OrientedSphere) -> Result<[f64; 3]> {
        let x = crate::euclid::point_position(m)?.ok_or(GeomError::PointSphereArgument)?;
        let (s1, s2) = self.curvature_spheres_at(m)?;
        for s in [s1, s2] {
            match crate::euclid::project_sphere(&s)? {
                crate::euclid::EuclidSphere::Sphere { center, radius } => {
                    let mut n = [0.0; 3];
                    let mut len = 0.0;
                    for i in 0..3 {
                        n[i] = (x[i] - center[i]) / radius;
                        len += n[i] * n[i];
                    }
                    let len = len.sqrt();
                    if len > 1e-9 {
                        return Ok([n[0] / len, n[1] / len, n[2] / len]);
                    }
                }
                crate::euclid::EuclidSphere::Plane { normal, .. } => return Ok(normal),
                _ => continue,
            }
        }
        Err(GeomError::SingularParameter)
    }

    /// The curvature circle lying on the family-`index` curvature sphere at
    /// parameter t: the point spheres of (span(s(t)) + D_j) orthogonal to p.
    pub fn curvature_circle(
        &self,
        index: FamilyIndex,
        t: f64,
        p: &PointSphereComplex,
    ) -> Result<Circle> {
        let fam = self.family(index);
        let s = fam.sphere(t);
        let w = [s.rep(), fam.other_frame[0], fam.other_frame[1], fam.other_frame[2]];
        // intersect the 4-space with the hyperplane orthogonal to p
        let ip: Vec<f64> = w.iter().map(|v| v.inner(&p.rep())).collect();
        let (pivot, pmax) = ip
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.abs().partial_cmp(&b.1.abs()).unwrap())
            .map(|(i, v)| (i, *v))
            .unwrap();
        if pmax.abs() < 1e-10 {
            return Err(GeomError::CircleFamily);
        }
        let mut basis = Vec::with_capacity(3);
        for (i, v) in w.iter().enumerate() {
            if i != pivot {
                basis.push(*v - w[pivot].scale(ip[i] / pmax));
            }
        }
        Circle::from_gamma_basis([basis[0], basis[1], basis[2]], p)
    }
}

/// One of the two one-parameter curvature sphere families of a cyclide.
#[derive(Debug, Clone)]
pub struct CurvatureSphereFamily {
    frame: [Vec6; 3],
    other_frame: [Vec6; 3],
    index: FamilyIndex,
}

impl CurvatureSphereFamily {
    pub fn index(&self) -> FamilyIndex {
        self.index
    }

    pub fn frame(&self) -> &[Vec6; 3] {
        &self.frame
    }

    pub fn other_frame(&self) -> &[Vec6; 3] {
        &self.other_frame
    }

    /// The curvature sphere at parameter t: cos(t) b1 + sin(t) b2 + b3,
    /// lightlike for all t and 2pi-periodic.
    pub fn sphere(&self, t: f64) -> OrientedSphere {
        let v = self.frame[0].scale(t.cos()) + self.frame[1].scale(t.sin()) + self.frame[2];
        OrientedSphere::new(v).expect("family combination is lightlike")
    }

    fn sphere_raw(&self, t: f64) -> Vec6 {
        self.frame[0].scale(t.cos()) + self.frame[1].scale(t.sin()) + self.frame[2]
    }

    fn derivative_raw(&self, t: f64) -> Vec6 {
        self.frame[1].scale(t.cos()) - self.frame[0].scale(t.sin())
    }

    /// Parameters of the singular (point sphere) members in [0, 2pi).
    /// Fails with `CircleFamily` when p lies in the family plane.
    pub fn singular_parameters(&self, p: &PointSphereComplex) -> Result<Vec<f64>> {
        if linalg::distance_to_span(&p.rep(), &self.frame) < 1e-9 {
            return Err(GeomError::CircleFamily);
        }
        let a = self.frame[0].inner(&p.rep());
        let b = self.frame[1].inner(&p.rep());
        let c = self.frame[2].inner(&p.rep());
        Ok(solve_trig(a, b, c))
    }

    /// True when the curvature sphere at t is regular (not a point sphere).
    pub fn is_regular(&self, t: f64, p: &PointSphereComplex) -> bool {
        let s = self.sphere_raw(t);
        s.inner(&p.rep()).abs() > 1e-9 * s.norm_e()
    }

    /// The two quer-spheres at a regular parameter: with the family
    /// normalized to <s,p> = 1, they are ds/dt +- sqrt(<ds,ds>) p.
    /// Each meets s(t) orthogonally along the curvature circle.
    pub fn quer_spheres(
        &self,
        t: f64,
        p: &PointSphereComplex,
    ) -> Result<(OrientedSphere, OrientedSphere)> {
        let s = self.sphere_raw(t);
        let sp = s.inner(&p.rep());
        if sp.abs() < 1e-9 * s.norm_e() {
            return Err(GeomError::SingularParameter);
        }
        let ds = self.derivative_raw(t);
        let dsp = ds.inner(&p.rep());
        // derivative of s / <s,p>
        let dn = (ds.scale(sp) - s.scale(dsp)).scale(1.0 / (sp * sp));
        let n2 = dn.norm2();
        if n2 <= 1e-12 * dn.norm_e() * dn.norm_e() {
            return Err(GeomError::NonSpacelikeDerivative);
        }
        let root = n2.sqrt();
        Ok((
            OrientedSphere::new(dn + p.rep().scale(root))?,
            OrientedSphere::new(dn - p.rep().scale(root))?,
        ))
    }
}

/// Roots of a cos t + b sin t + c = 0 in [0, 2pi); zero, one or two.
pub fn solve_trig(a: f64, b: f64, c: f64) -> Vec<f64> {
    let r = a.hypot(b);
    let scale = r.max(c.abs());
    if scale == 0.0 || r < 1e-14 * scale {
        return Vec::new();
    }
    let ratio = -c / r;
    let wrap = |t: f64| t.rem_euclid(TAU);
    if (ratio.abs() - 1.0).abs() <= 1e-9 {
        let delta = b.atan2(a);
        return vec![wrap(delta + if ratio > 0.0 { 0.0 } else { PI })];
    }
    if ratio.abs() > 1.0 {
        return Vec::new();
    }
    let delta = b.atan2(a);
    let h = ratio.acos();
    let mut out = vec![wrap(delta + h), wrap(delta - h)];
    out.sort_by(|x, y| x.partial_cmp(y).unwrap());
    out
}

/// The evolution map of a cyclide family based at t0: the one-parameter
/// family of M-Lie inversions with complexes a_t in the fixed 2-plane
/// D_i orthogonal to p.
#[derive(Debug, Clone)]
pub struct EvolutionMap {
    family: CurvatureSphereFamily,
    t0: f64,
    base: OrientedSphere,
}

impl EvolutionMap {
    /// The base sphere s(t0) must be regular.
    pub fn new(family: CurvatureSphereFamily, t0: f64, p: &PointSphereComplex) -> Result<Self> {
        if !family.is_regular(t0, p) {
            return Err(GeomError::SingularParameter);
        }
        let base = family.sphere(t0);
        Ok(EvolutionMap { family, t0, base })
    }

    pub fn family(&self) -> &CurvatureSphereFamily {
        &self.family
    }

    pub fn base_parameter(&self) -> f64 {
        self.t0
    }

    pub fn base_sphere(&self) -> &OrientedSphere {
        &self.base
    }

    /// The complex a_t = <s(t),p> s0 - <s0,p> s(t); its inversion carries
    /// s0 to s(t) projectively and fixes p.
    pub fn complex_at(&self, t: f64, p: &PointSphereComplex) -> Result<LinearSphereComplex> {
        if !self.family.is_regular(t, p) {
            return Err(GeomError::SingularParameter);
        }
        let st = self.family.sphere_raw(t);
        let s0 = self.base.rep();
        if ((t - self.t0).rem_euclid(TAU)).min((self.t0 - t).rem_euclid(TAU)) < 1e-12 {
            return Err(GeomError::BaseParameter);
        }
        let a = s0.scale(st.inner(&p.rep())) - st.scale(s0.inner(&p.rep()));
        LinearSphereComplex::new_invertible(a)
    }

    /// Applies the inversion at parameter t to a vector; at the base
    /// parameter the map is the identity by convention.
    pub fn apply(&self, t: f64, v: &Vec6, p: &PointSphereComplex) -> Result<Vec6> {
        if ((t - self.t0).rem_euclid(TAU)).min((self.t0 - t).rem_euclid(TAU)) < 1e-12 {
            return Ok(*v);
        }
        let a = self.complex_at(t, p)?;
        lie_inversion(&a, v)
    }
}

/// A curvature-line sampled grid: rows are evolved copies of the initial
/// circle, columns follow the evolution parameter.
#[derive(Debug, Clone)]
pub struct EvolvedGrid {
    pub r_params: Vec<f64>,
    pub rows: Vec<EvolvedRow>,
    /// evolution parameters skipped because they were singular
    pub skipped: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct EvolvedRow {
    pub t: f64,
    pub points: Vec<OrientedSphere>,
}

/// Evolves the curvature circle of the base sphere through the evolution
/// map: grid point (r, t) is sigma_t(c0(r)). Row t0 is the initial circle.
/// Rows within 1e-6 of a singular parameter are skipped and recorded.
pub fn evolve_circle(
    e: &EvolutionMap,
    c0: &Circle,
    r_samples: usize,
    t_samples: &[f64],
    p: &PointSphereComplex,
) -> Result<EvolvedGrid> {
    // the initial circle must be the curvature circle on the base sphere:
    // incident to s(t0) and contained in span(s(t0)) + D_j
    let s0 = e.base_sphere();
    let mut hull = vec![s0.rep()];
    hull.extend_from_slice(e.family().other_frame());
    for k in 0..r_samples.max(8) {
        let u = TAU * (k as f64) / (r_samples.max(8) as f64);
        let m = c0.point(u);
        if crate::kernel::orthogonality_residual(&m, s0, p) > 1e-8 {
            return Err(GeomError::NotCurvatureCircle);
        }
        if linalg::distance_to_span(&m.rep(), &hull) > 1e-8 {
            return Err(GeomError::NotCurvatureCircle);
        }
    }

    let singular = e.family().singular_parameters(p).unwrap_or_default();
    let r_params: Vec<f64> = (0..r_samples).map(|k| TAU * (k as f64) / (r_samples as f64)).collect();
    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    for &t in t_samples {
        if singular.iter().any(|s| circ_dist(t, *s) < 1e-6) {
            skipped.push(t);
            continue;
        }
        let mut points = Vec::with_capacity(r_params.len());
        let mut ok = true;
        for &u in &r_params {
            let m = c0.point(u);
            match e.apply(t, &m.rep(), p) {
                Ok(v) => points.push(OrientedSphere::new(v)?),
                Err(_) => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            rows.push(EvolvedRow { t, points });
        } else {
            skipped.push(t);
        }
    }
    Ok(EvolvedGrid { r_params, rows, skipped })
}

fn circ_dist(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

/// Evolution of a sphere through the M-Lie inversions induced by a sphere
/// pencil: sigma_t(s0) with a_t = <q(t),p> q0 - <q0,p> q(t). The result is
/// constant iff s0 is orthogonal to the whole pencil.
pub fn evolve_from_pencil(
    m: &MSpherePencil,
    t0: f64,
    s0: &OrientedSphere,
    t: f64,
    p: &PointSphereComplex,
) -> Result<OrientedSphere> {
    let a = pencil_evolution_complex(m, t0, t, p)?;
    match a {
        None => Ok(*s0),
        Some(a) => {
            if crate::kernel::orthogonality_residual(s0, &pencil_base(m, t0)?, p) > 1e-8 {
                return Err(GeomError::NotOrthogonal);
            }
            invert_sphere(&a, s0)
        }
    }
}

fn pencil_base(m: &MSpherePencil, t0: f64) -> Result<OrientedSphere> {
    crate::incidence::pencil_sphere(m, t0)
}

/// The complex of the pencil evolution at t; `None` at the base parameter
/// (identity by convention).
pub fn pencil_evolution_complex(
    m: &MSpherePencil,
    t0: f64,
    t: f64,
    p: &PointSphereComplex,
) -> Result<Option<LinearSphereComplex>> {
    if circ_dist(t, t0) < 1e-12 {
        return Ok(None);
    }
    let q0 = crate::incidence::pencil_sphere(m, t0)?;
    let qt = crate::incidence::pencil_sphere(m, t)?;
    let q0n = q0.rep().scale(1.0 / q0.rep().norm_e());
    let qtn = qt.rep().scale(1.0 / qt.rep().norm_e());
    // J*: <q0, q(t)> != 0 and <q(t), p> != 0
    if q0n.inner(&qtn).abs() < 1e-10 || qtn.inner(&p.rep()).abs() < 1e-10 {
        return Err(GeomError::OutsideJStar);
    }
    if q0n.same_projective_point(&qtn) {
        return Ok(None);
    }
    let a = q0n.scale(qtn.inner(&p.rep())) - qtn.scale(q0n.inner(&p.rep()));
    Ok(Some(LinearSphereComplex::new_invertible(a)?))
}

/// Grid produced by evolving a circle on a pencil sphere; when every grid
/// point stays on one fixed sphere the construction degenerates to an
/// orthogonal coordinate system of circles on that sphere.
#[derive(Debug, Clone)]
pub struct PencilSurface {
    pub grid: EvolvedGrid,
    pub spherical: Option<OrientedSphere>,
}

/// Evolves a circle lying on the base pencil sphere q(t0) through the
/// pencil evolution map.
pub fn surface_from_pencil_and_circle(
    m: &MSpherePencil,
    t0: f64,
    c: &Circle,
    u_samples: usize,
    t_samples: &[f64],
    p: &PointSphereComplex,
) -> Result<PencilSurface> {
    let q0 = pencil_base(m, t0)?;
    for k in 0..u_samples.max(8) {
        let u = TAU * (k as f64) / (u_samples.max(8) as f64);
        if crate::kernel::orthogonality_residual(&c.point(u), &q0, p) > 1e-8 {
            return Err(GeomError::CircleNotOnSphere);
        }
    }
    let u_params: Vec<f64> = (0..u_samples).map(|k| TAU * (k as f64) / (u_samples as f64)).collect();
    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    for &t in t_samples {
        match pencil_evolution_complex(m, t0, t, p) {
            Ok(None) => {
                let points: Vec<OrientedSphere> = u_params.iter().map(|&u| c.point(u)).collect();
                rows.push(EvolvedRow { t, points });
            }
            Ok(Some(a)) => {
                let mut points = Vec::with_capacity(u_params.len());
                for &u in &u_params {
                    points.push(OrientedSphere::new(lie_inversion(&a, &c.point(u).rep())?)?);
                }
                rows.push(EvolvedRow { t, points });
            }
            Err(_) => skipped.push(t),
        }
    }
    let grid = EvolvedGrid { r_params: u_params, rows, skipped };
    let spherical = common_sphere_of_grid(&grid, p);
    Ok(PencilSurface { grid, spherical })
}

/// If all grid points are incident to one fixed sphere, returns it.
fn common_sphere_of_grid(grid: &EvolvedGrid, p: &PointSphereComplex) -> Option<OrientedSphere> {
    let mut vs: Vec<Vec6> = Vec::new();
    for row in &grid.rows {
        for m in &row.points {
            vs.push(m.rep().scale(1.0 / m.rep().norm_e()));
        }
    }
    if vs.len() < 5 || linalg::singular_value_ratio(&vs, 4) > 1e-9 {
        return None;
    }
    let span = linalg::euclidean_orthonormal(&vs);
    let comp = linalg::orthogonal_complement(&span);
    // the complement contains p; look for a lightlike direction besides it
    let mut best: Option<OrientedSphere> = None;
    for v in &comp {
        let w = *v + p.rep().scale(v.inner(&p.rep()));
        if w.norm_e() < 1e-9 {
            continue;
        }
        let ww = w.norm2();
        if ww > 1e-12 {
            let s = w.scale(1.0 / ww.sqrt()) + p.rep();
            if let Ok(sphere) = OrientedSphere::new(s) {
                best = Some(sphere);
                break;
            }
        }
    }
    best
}

/// The 2-ortho circle through the point spheres of two contact elements of
/// a cyclide that share a common curvature sphere s:
/// gamma = span(m1, m2, s + <s,p> p).
pub fn two_ortho_circle(
    d: &DupinCyclide,
    f1: &ContactElement,
    f2: &ContactElement,
    p: &PointSphereComplex,
) -> Result<Circle> {
    let m1 = f1.point_sphere(p)?;
    let m2 = f2.point_sphere(p)?;
    if m1.rep().same_projective_point(&m2.rep()) {
        return Err(GeomError::CoincidentPoints);
    }
    let common = linalg::span_intersection(&f1.spanning(), &f2.spanning());
    let s = match common.len() {
        0 => {
            // contact elements of the cyclide in general position meet the
            // circle in four points; otherwise the inputs are foreign
            if is_contact_element_of(d, f1) && is_contact_element_of(d, f2) {
                return Err(GeomError::FourPointIntersection);
            }
            return Err(GeomError::NoCommonCurvatureSphere);
        }
        1 => common[0],
        _ => return Err(GeomError::DegenerateInput),
    };
    // the shared sphere must be a curvature sphere of the cyclide
    if linalg::distance_to_span(&s, d.d1()) > 1e-7 && linalg::distance_to_span(&s, d.d2()) > 1e-7 {
        return Err(GeomError::NoCommonCurvatureSphere);
    }
    let w = s + p.rep().scale(s.inner(&p.rep()));
    Circle::from_gamma_basis([m1.rep(), m2.rep(), w], p)
}

fn is_contact_element_of(d: &DupinCyclide, f: &ContactElement) -> bool {
    let span = f.spanning();
    linalg::span_intersection(&span, d.d1()).len() == 1
        && linalg::span_intersection(&span, d.d2()).len() == 1
}

/// Intersection parameters of two cospherical circles, with the Euclidean
/// crossing angle at each common point.
pub fn circle_intersections(c1: &Circle, c2: &Circle) -> Result<Vec<(f64, f64, f64)>> {
    let w = linalg::span_intersection(c1.gamma(), c2.gamma());
    match w.len() {
        0 | 1 => Err(GeomError::NoCommonSphere),
        2 => {
            // lightlike directions of span(w0, w1)
            let a = w[0].norm2();
            let b = w[0].inner(&w[1]);
            let c = w[1].norm2();
            // |x w0 + w1|^2 = a x^2 + 2b x + c = 0
            let mut points = Vec::new();
            if a.abs() < 1e-12 {
                points.push(w[0]);
                if b.abs() > 1e-12 {
                    points.push(w[0].scale(-c / (2.0 * b)) + w[1]);
                }
            } else {
                let disc = b * b - a * c;
                if disc > 1e-14 {
                    let r = disc.sqrt();
                    points.push(w[0].scale((-b + r) / a) + w[1]);
                    points.push(w[0].scale((-b - r) / a) + w[1]);
                } else if disc.abs() <= 1e-14 {
                    points.push(w[0].scale(-b / a) + w[1]);
                }
            }
            let mut out = Vec::new();
            for v in points {
                let m = OrientedSphere::new(v)?;
                let u1 = c1.parameter_of(&m)?;
                let u2 = c2.parameter_of(&m)?;
                let t1 = c1.euclidean_tangent(u1)?;
                let t2 = c2.euclidean_tangent(u2)?;
                let dot: f64 = (0..3).map(|i| t1[i] * t2[i]).sum();
                let n1: f64 = t1.iter().map(|x| x * x).sum::<f64>().sqrt();
                let n2: f64 = t2.iter().map(|x| x * x).sum::<f64>().sqrt();
                let angle = (dot / (n1 * n2)).clamp(-1.0, 1.0).acos();
                out.push((u1, u2, angle));
            }
            Ok(out)
        }
        _ => Err(GeomError::DegenerateInput),
    }
}

/// Evolves a circle on the base quer-sphere that crosses the base curvature
/// circle orthogonally; the result is a cyclide meeting the original one at
/// right angles along two shared curvature lines.
pub fn two_ortho_cyclide(
    e: &EvolutionMap,
    c_tilde: &Circle,
    u_samples: usize,
    t_samples: &[f64],
    p: &PointSphereComplex,
) -> Result<EvolvedGrid> {
    let (qp, qm) = e.family().quer_spheres(e.base_parameter(), p)?;
    // the circle must lie on the base quer-sphere (either orientation)
    let on_quer = |q: &OrientedSphere| {
        (0..12).all(|k| {
            let u = TAU * (k as f64) / 12.0;
            crate::kernel::orthogonality_residual(&c_tilde.point(u), q, p) < 1e-8
        })
    };
    if !on_quer(&qp) && !on_quer(&qm) {
        return Err(GeomError::NotOnQuerSphere);
    }
    // and must cross the base curvature circle orthogonally
    let c0 = {
        let d = DupinCyclide::from_splitting(
            match e.family().index() {
                FamilyIndex::One => *e.family().frame(),
                FamilyIndex::Two => *e.family().other_frame(),
            },
            match e.family().index() {
                FamilyIndex::One => *e.family().other_frame(),
                FamilyIndex::Two => *e.family().frame(),
            },
        )?;
        d.curvature_circle(e.family().index(), e.base_parameter(), p)?
    };
    let hits = circle_intersections(&c0, c_tilde).map_err(|err| match err {
        GeomError::DegenerateInput => GeomError::NotOrthogonalToBaseCircle,
        other => other,
    })?;
    if hits.len() != 2 {
        return Err(GeomError::NotOrthogonalToBaseCircle);
    }
    for (_, _, angle) in &hits {
        if (angle - PI / 2.0).abs() > 1e-6 {
            return Err(GeomError::NotOrthogonalToBaseCircle);
        }
    }

    let singular = e.family().singular_parameters(p).unwrap_or_default();
    let u_params: Vec<f64> = (0..u_samples).map(|k| TAU * (k as f64) / (u_samples as f64)).collect();
    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    for &t in t_samples {
        if singular.iter().any(|s| circ_dist(t, *s) < 1e-6) {
            skipped.push(t);
            continue;
        }
        let mut points = Vec::with_capacity(u_params.len());
        let mut ok = true;
        for &u in &u_params {
            match e.apply(t, &c_tilde.point(u).rep(), p) {
                Ok(v) => points.push(OrientedSphere::new(v)?),
                Err(_) => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            rows.push(EvolvedRow { t, points });
        } else {
            skipped.push(t);
        }
    }
    Ok(EvolvedGrid { r_params: u_params, rows, skipped })
}

/// Parameters of the curvature sphere family whose members lie in the
/// complex orthogonal to `a`, restricted to the closed arc from t1 to t2
/// (counterclockwise); used by the subdivision procedure.
pub fn family_parameters_in_complex(
    fam: &CurvatureSphereFamily,
    a: &LinearSphereComplex,
) -> Vec<f64> {
    let ca = fam.frame[0].inner(&a.rep());
    let cb = fam.frame[1].inner(&a.rep());
    let cc = fam.frame[2].inner(&a.rep());
    solve_trig(ca, cb, cc)
}

/// The standard ring torus with spine radius `spine` and tube radius
/// `tube`, centered at the origin with the z-axis as symmetry axis.
/// D1 holds the tube spheres, D2 the spheres tangent along the parallels.
pub fn cyclide_from_torus(spine: f64, tube: f64) -> Result<DupinCyclide> {
    if !(spine.is_finite() && tube.is_finite() && spine > tube && tube > 0.0) {
        return Err(GeomError::DegenerateTorus);
    }
    torus_splitting(spine, tube)
}

/// As `cyclide_from_torus` but admits horn and spindle shapes (spine <=
/// tube), which carry singular curvature spheres.
pub fn cyclide_from_torus_allow_singular(spine: f64, tube: f64) -> Result<DupinCyclide> {
    if !(spine.is_finite() && tube.is_finite() && spine > 0.0 && tube > 0.0) {
        return Err(GeomError::DegenerateTorus);
    }
    torus_splitting(spine, tube)
}

fn torus_splitting(spine: f64, tube: f64) -> Result<DupinCyclide> {
    use crate::euclid::{lift, EuclidSphere};
    let tube_sphere = |theta: f64| {
        lift(&EuclidSphere::sphere([spine * theta.cos(), spine * theta.sin(), 0.0], tube)).rep()
    };
    // spheres tangent along the parallels: centered on the axis at
    // -spine tan(phi) with signed radius (spine + tube cos(phi)) / cos(phi)
    let parallel_sphere = |phi: f64| {
        let c = phi.cos();
        lift(&EuclidSphere::sphere(
            [0.0, 0.0, -spine * phi.tan()],
            (spine + tube * c) / c,
        ))
        .rep()
    };
    let angles = [0.0, TAU / 3.0, 2.0 * TAU / 3.0];
    let d1 = [tube_sphere(angles[0]), tube_sphere(angles[1]), tube_sphere(angles[2])];
    let d2 = [
        parallel_sphere(angles[0]),
        parallel_sphere(angles[1]),
        parallel_sphere(angles[2]),
    ];
    DupinCyclide::from_splitting(d1, d2)
}

/// A circular cone as a cyclide: apex at the origin, axis +z, half-angle
/// alpha. The tube family consists of the inscribed spheres and contains
/// the apex as its single point sphere.
pub fn cyclide_from_cone(half_angle: f64) -> Result<DupinCyclide> {
    use crate::euclid::{lift, EuclidSphere};
    if !(half_angle > 0.0 && half_angle < PI / 2.0) {
        return Err(GeomError::DegenerateSpan);
    }
    let s = half_angle.sin();
    let inscribed = |h: f64| lift(&EuclidSphere::sphere([0.0, 0.0, h], h * s)).rep();
    DupinCyclide::from_family_span([inscribed(1.0), inscribed(2.0), inscribed(4.0)])
}
