//! Ribaucour pairs of Dupin cyclides and Lame families of DC-systems.
//!
//! A fixed Lie inversion turns a cyclide into a Ribaucour partner; the
//! enveloped sphere congruence is r = f intersect a-perp. Evolving the
//! cyclide through inversions whose complexes range over the punctured
//! 2-plane spanned by a and p yields the one-parameter family of surfaces
//! orthogonal to the cyclic circle congruence of the pair: a Lame family
//! of a Dupin cyclidic system. The signature of that 2-plane splits the
//! families into three space-form types.

use crate::cyclide::{DupinCyclide, FamilyIndex};
use crate::error::{GeomError, Result};
use crate::euclid::infinity_rep;
use crate::incidence::Circle;
use crate::kernel::{lie_inversion, LinearSphereComplex, OrientedSphere, PointSphereComplex};
use crate::vec6::Vec6;

use std::f64::consts::TAU;

/// A cyclide, a fixed Lie inversion and its Ribaucour transform.
#[derive(Debug, Clone)]
pub struct RibaucourPair {
    delta: DupinCyclide,
    a: LinearSphereComplex,
    delta_hat: DupinCyclide,
}

impl RibaucourPair {
    pub fn delta(&self) -> &DupinCyclide {
        &self.delta
    }

    pub fn delta_hat(&self) -> &DupinCyclide {
        &self.delta_hat
    }

    pub fn complex(&self) -> &LinearSphereComplex {
        &self.a
    }

    /// The enveloped Ribaucour sphere at curvature parameters (u, v):
    /// the sphere of the contact element orthogonal to a.
    pub fn ribaucour_sphere(&self, u: f64, v: f64) -> Result<OrientedSphere> {
        let r = self.ribaucour_sphere_raw(u, v);
        OrientedSphere::new(r)
    }

    fn ribaucour_sphere_raw(&self, u: f64, v: f64) -> Vec6 {
        let s1 = self.delta.family(FamilyIndex::One).sphere(u).rep();
        let s2 = self.delta.family(FamilyIndex::Two).sphere(v).rep();
        let av = self.a.rep();
        s1.scale(s2.inner(&av)) - s2.scale(s1.inner(&av))
    }
}

/// Relates a cyclide to its image under a fixed Lie inversion.
pub fn ribaucour_transform(d: &DupinCyclide, a: &LinearSphereComplex) -> Result<RibaucourPair> {
    let p = PointSphereComplex::standard();
    if a.rep().same_projective_point(&p.rep()) {
        return Err(GeomError::PointSphereComplexArgument);
    }
    let delta_hat = d.transform(a)?;
    Ok(RibaucourPair { delta: d.clone(), a: *a, delta_hat })
}

/// The Ribaucour cyclide of the pair along one curvature direction:
/// the span of the Ribaucour sphere and its first two derivatives along
/// the complementary parameter, completed by its orthogonal complement.
/// For direction One the span is taken along v at u = fixed_param; by the
/// constancy property the result does not depend on `at_param`.
pub fn ribaucour_cyclide_at(
    pair: &RibaucourPair,
    direction: FamilyIndex,
    fixed_param: f64,
    at_param: f64,
) -> Result<DupinCyclide> {
    let f = |t: f64| -> Vec6 {
        match direction {
            FamilyIndex::One => pair.ribaucour_sphere_raw(fixed_param, t),
            FamilyIndex::Two => pair.ribaucour_sphere_raw(t, fixed_param),
        }
    };
    let r = f(at_param);
    let d1 = richardson_d1(&f, at_param);
    let d2 = richardson_d2(&f, at_param);
    DupinCyclide::from_family_span([r, d1, d2])
}

/// As `ribaucour_cyclide_at` with a generic interior evaluation point.
pub fn ribaucour_cyclide(
    pair: &RibaucourPair,
    direction: FamilyIndex,
    fixed_param: f64,
) -> Result<DupinCyclide> {
    ribaucour_cyclide_at(pair, direction, fixed_param, 0.3)
}

const FD_STEP: f64 = 1e-4;

fn richardson_d1(f: &dyn Fn(f64) -> Vec6, x: f64) -> Vec6 {
    let d = |h: f64| (f(x + h) - f(x - h)).scale(1.0 / (2.0 * h));
    let dh = d(FD_STEP);
    let dh2 = d(FD_STEP / 2.0);
    (dh2.scale(4.0) - dh).scale(1.0 / 3.0)
}

fn richardson_d2(f: &dyn Fn(f64) -> Vec6, x: f64) -> Vec6 {
    let d = |h: f64| (f(x + h) + f(x - h) - f(x).scale(2.0)).scale(1.0 / (h * h));
    let dh = d(FD_STEP);
    let dh2 = d(FD_STEP / 2.0);
    (dh2.scale(4.0) - dh).scale(1.0 / 3.0)
}

/// Space-form type of a Lame family, by the causal character of the
/// p-orthogonal component of the generating complex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyType {
    /// lightlike component: parallel surfaces of a flat space form
    /// (confocal cyclides when the component is the infinity direction)
    Type1,
    /// spacelike component: hyperbolic space form; the family contains a
    /// totally umbilic sphere pair
    Type2,
    /// timelike component: spherical space form, no umbilic members
    Type3,
}

/// Classification data of a generating complex relative to p.
#[derive(Debug, Clone)]
pub struct FamilyClass {
    pub family_type: FamilyType,
    pub space_form: crate::euclid::SpaceForm,
    /// the two lightlike directions of span(e1, p) for Type 2 families:
    /// the totally umbilic members b+- = e1 +- sqrt(<e1,e1>) p
    pub umbilic_pair: Option<(OrientedSphere, OrientedSphere)>,
    /// for Type 1 families whose component is not the infinity direction,
    /// the common point of all orthogonal trajectories
    pub concurrent_point: Option<OrientedSphere>,
}

/// Splits off the p-orthogonal component of `a` and classifies the family.
pub fn classify_family(a: &LinearSphereComplex, p: &PointSphereComplex) -> Result<FamilyClass> {
    let e1 = p_orthogonal_component(&a.rep(), p)?;
    let n2 = e1.norm2();
    let scale = e1.norm_e() * e1.norm_e();
    let family_type = if n2.abs() <= 1e-9 * scale {
        FamilyType::Type1
    } else if n2 > 0.0 {
        FamilyType::Type2
    } else {
        FamilyType::Type3
    };
    let space_form = crate::euclid::SpaceForm::new(e1, p)?;
    let umbilic_pair = if family_type == FamilyType::Type2 {
        let root = n2.sqrt();
        Some((
            OrientedSphere::new(e1 + p.rep().scale(root))?,
            OrientedSphere::new(e1 - p.rep().scale(root))?,
        ))
    } else {
        None
    };
    let concurrent_point = if family_type == FamilyType::Type1
        && !e1.same_projective_point(&infinity_rep())
    {
        Some(OrientedSphere::new(e1)?)
    } else {
        None
    };
    Ok(FamilyClass { family_type, space_form, umbilic_pair, concurrent_point })
}

fn p_orthogonal_component(a: &Vec6, p: &PointSphereComplex) -> Result<Vec6> {
    let e1 = *a + p.rep().scale(a.inner(&p.rep()));
    if e1.is_zero(1e-10 * a.norm_e()) {
        return Err(GeomError::PointSphereComplexArgument);
    }
    Ok(e1)
}

/// A Lame family of a DC-system: the orbit of a cyclide under the
/// inversions with complexes in the punctured plane span(a, p).
///
/// Members are indexed by a real parameter: for Type 2/3 the complex is
/// b(beta) = cos(beta) e1/|e1| + sin(beta) p, with the original surface
/// recovered at beta = pi/2 (sigma_p is the identity on point spheres);
/// for Type 1 it is b(lambda) = e1 + lambda p, lambda != 0.
#[derive(Debug, Clone)]
pub struct LameFamily {
    delta: DupinCyclide,
    a: LinearSphereComplex,
    p: PointSphereComplex,
    e1: Vec6,
    unit: Option<Vec6>,
    class: FamilyClass,
}

impl LameFamily {
    pub fn new(
        delta: DupinCyclide,
        a: LinearSphereComplex,
        p: PointSphereComplex,
    ) -> Result<Self> {
        let class = classify_family(&a, &p)?;
        let e1 = p_orthogonal_component(&a.rep(), &p)?;
        let unit = match class.family_type {
            FamilyType::Type1 => None,
            _ => Some(e1.scale(1.0 / e1.norm2().abs().sqrt())),
        };
        Ok(LameFamily { delta, a, p, e1, unit, class })
    }

    pub fn delta(&self) -> &DupinCyclide {
        &self.delta
    }

    pub fn complex(&self) -> &LinearSphereComplex {
        &self.a
    }

    pub fn point_complex(&self) -> &PointSphereComplex {
        &self.p
    }

    pub fn class(&self) -> &FamilyClass {
        &self.class
    }

    pub fn family_type(&self) -> FamilyType {
        self.class.family_type
    }

    /// The p-orthogonal component of the generating complex.
    pub fn e1(&self) -> Vec6 {
        self.e1
    }

    /// The plane of evolution complexes, span(a, p).
    pub fn complex_plane(&self) -> [Vec6; 2] {
        [self.e1, self.p.rep()]
    }

    /// The evolution complex at a family parameter; `NullDirection` where
    /// the combination becomes lightlike (the umbilic values of Type 2).
    pub fn complex_at(&self, param: f64) -> Result<LinearSphereComplex> {
        let b = match self.class.family_type {
            FamilyType::Type1 => {
                if param.abs() < 1e-12 {
                    return Err(GeomError::NullDirection);
                }
                self.e1 + self.p.rep().scale(param)
            }
            _ => {
                let u = self.unit.expect("unit direction for type 2/3");
                u.scale(param.cos()) + self.p.rep().scale(param.sin())
            }
        };
        LinearSphereComplex::new_invertible(b).map_err(|_| GeomError::NullDirection)
    }

    /// The family member at a parameter: the transformed splitting.
    pub fn member(&self, param: f64) -> Result<DupinCyclide> {
        let b = self.complex_at(param)?;
        self.delta.transform(&b)
    }

    /// Members at the given parameters; null directions are skipped and
    /// reported alongside the surviving members.
    pub fn members(&self, params: &[f64]) -> (Vec<(f64, DupinCyclide)>, Vec<f64>) {
        let mut out = Vec::new();
        let mut skipped = Vec::new();
        for &b in params {
            match self.member(b) {
                Ok(m) => out.push((b, m)),
                Err(_) => skipped.push(b),
            }
        }
        (out, skipped)
    }

    /// The point of the member at family parameter `param` corresponding
    /// to curvature parameters (u, v) of the base cyclide. Corresponding
    /// points of all members lie on one circle of the cyclic congruence.
    pub fn member_point(&self, param: f64, u: f64, v: f64) -> Result<OrientedSphere> {
        let b = self.complex_at(param)?;
        self.transported_point(&b, u, v)
    }

    fn transported_point(
        &self,
        b: &LinearSphereComplex,
        u: f64,
        v: f64,
    ) -> Result<OrientedSphere> {
        let s1 = lie_inversion(b, &self.delta.family(FamilyIndex::One).sphere(u).rep())?;
        let s2 = lie_inversion(b, &self.delta.family(FamilyIndex::Two).sphere(v).rep())?;
        let m = s1.scale(s2.inner(&self.p.rep())) - s2.scale(s1.inner(&self.p.rep()));
        OrientedSphere::new(m)
    }

    /// The point of the base cyclide at (u, v).
    pub fn base_point(&self, u: f64, v: f64) -> Result<OrientedSphere> {
        self.delta.surface_point(u, v, &self.p)
    }

    /// The circle of the cyclic congruence through the contact points at
    /// (u, v): gamma = span(f_p, f_hat_p, r + <r,p> p).
    pub fn congruence_circle(&self, u: f64, v: f64) -> Result<Circle> {
        let fp = self.base_point(u, v)?.rep();
        let fhat = self.transported_point(&self.a, u, v)?.rep();
        let pair = ribaucour_transform(&self.delta, &self.a)?;
        let r = pair.ribaucour_sphere_raw(u, v);
        let w = r + self.p.rep().scale(r.inner(&self.p.rep()));
        Circle::from_gamma_basis([fp, fhat, w], &self.p)
    }

    /// Null family parameters inside a closed interval, if any.
    pub fn null_parameters_in(&self, lo: f64, hi: f64) -> Vec<f64> {
        let mut out = Vec::new();
        match self.class.family_type {
            FamilyType::Type1 => {
                if lo <= 0.0 && hi >= 0.0 {
                    out.push(0.0);
                }
            }
            FamilyType::Type2 => {
                // cos(2 beta) = 0
                let mut k = (2.0 * lo / std::f64::consts::PI).floor() as i64 - 1;
                loop {
                    let beta = (2 * k + 1) as f64 * std::f64::consts::PI / 4.0;
                    if beta > hi {
                        break;
                    }
                    if beta >= lo {
                        out.push(beta);
                    }
                    k += 1;
                }
            }
            FamilyType::Type3 => {}
        }
        out
    }
}

/// Applies sigma_p, the orientation-reversing involution fixing all points.
pub fn point_reflection(v: &Vec6, p: &PointSphereComplex) -> Vec6 {
    *v + p.rep().scale(2.0 * v.inner(&p.rep()))
}

/// The single Lie inversion relating two family members as surfaces:
/// the composite sigma_p . sigma_b2 . sigma_b1 of reflections in the
/// complex plane collapses to one reflection; its complex is returned.
pub fn relating_inversion(
    family: &LameFamily,
    param1: f64,
    param2: f64,
) -> Result<LinearSphereComplex> {
    let b1 = family.complex_at(param1)?;
    let b2 = family.complex_at(param2)?;
    let p = family.point_complex();
    let composite = |v: &Vec6| -> Vec6 {
        let w = lie_inversion(&b1, v).expect("non-parabolic");
        let w = lie_inversion(&b2, &w).expect("non-parabolic");
        point_reflection(&w, p)
    };
    // columns of (I - T) are all proportional to the reflection axis
    let mut best = Vec6::ZERO;
    for i in 0..6 {
        let mut e = [0.0; 6];
        e[i] = 1.0;
        let e = Vec6(e);
        let col = e - composite(&e);
        if col.norm_e() > best.norm_e() {
            best = col;
        }
    }
    if best.norm_e() < 1e-12 {
        return Err(GeomError::DegeneratePair);
    }
    LinearSphereComplex::new_invertible(best)
}

/// Largest deviation of `T` from the reflection in `c`, over basis vectors.
pub fn reflection_residual(
    family: &LameFamily,
    param1: f64,
    param2: f64,
    c: &LinearSphereComplex,
) -> f64 {
    let b1 = family.complex_at(param1).expect("valid parameter");
    let b2 = family.complex_at(param2).expect("valid parameter");
    let p = family.point_complex();
    let mut worst: f64 = 0.0;
    for i in 0..6 {
        let mut e = [0.0; 6];
        e[i] = 1.0;
        let e = Vec6(e);
        let w = lie_inversion(&b1, &e).unwrap();
        let w = lie_inversion(&b2, &w).unwrap();
        let w = point_reflection(&w, p);
        let direct = lie_inversion(c, &e).unwrap();
        worst = worst.max((w - direct).norm_e());
    }
    worst
}

/// Outcome of the parallel-surface check for a sampled family.
#[derive(Debug, Clone)]
pub enum ParallelReport {
    /// Euclidean chart verified: straight trajectories, constant offsets.
    Checked {
        collinearity_max: f64,
        offset_std_max: f64,
        tube_radii: Vec<f64>,
    },
    /// non-Euclidean space form vector: not verifiable in this chart
    UnsupportedChart,
}

/// For a Type 1 family with the flat space form vector: trajectories are
/// straight lines and member-to-member offsets along them are constant.
/// Tube radii are reported from an implicit torus fit per member, for
/// families of the standard torus.
pub fn parallel_check(
    family: &LameFamily,
    member_params: &[f64],
    samples: usize,
) -> Result<ParallelReport> {
    if family.family_type() != FamilyType::Type1
        || !family.e1().same_projective_point(&infinity_rep())
    {
        return Ok(ParallelReport::UnsupportedChart);
    }
    let mut collinearity_max: f64 = 0.0;
    let mut offset_std_max: f64 = 0.0;
    let n = samples.max(4);
    // pairwise offsets along each trajectory, gathered per member pair
    let mut offsets: Vec<Vec<f64>> = vec![Vec::new(); member_params.len().saturating_sub(1)];
    for i in 0..n {
        for j in 0..n {
            let u = TAU * (i as f64) / (n as f64) + 0.13;
            let v = TAU * (j as f64) / (n as f64) + 0.29;
            let mut pts = Vec::new();
            for &b in member_params {
                let m = family.member_point(b, u, v)?;
                if let Some(x) = crate::euclid::point_position(&m)? {
                    pts.push(x);
                }
            }
            if pts.len() < member_params.len() {
                continue;
            }
            collinearity_max = collinearity_max.max(crate::verify::collinearity_residual(&pts));
            for k in 0..pts.len() - 1 {
                let d = dist3(&pts[k], &pts[k + 1]);
                offsets[k].push(d);
            }
        }
    }
    for series in &offsets {
        if series.len() > 1 {
            let mean = series.iter().sum::<f64>() / series.len() as f64;
            let var = series.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / series.len() as f64;
            offset_std_max = offset_std_max.max(var.sqrt());
        }
    }
    // implicit torus fit per member (valid for families of the standard torus)
    let mut tube_radii = Vec::new();
    for &b in member_params {
        let mut acc = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let u = TAU * (i as f64) / (n as f64) + 0.07;
                let v = TAU * (j as f64) / (n as f64) + 0.41;
                if let Some(x) = crate::euclid::point_position(&family.member_point(b, u, v)?)? {
                    let rho = (x[0] * x[0] + x[1] * x[1]).sqrt();
                    acc.push(((rho - 2.0).powi(2) + x[2] * x[2]).sqrt());
                }
            }
        }
        tube_radii.push(acc.iter().sum::<f64>() / acc.len() as f64);
    }
    Ok(ParallelReport::Checked { collinearity_max, offset_std_max, tube_radii })
}

fn dist3(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

/// Signed incidence defect of circle points against a member surface,
/// scanned over the circle parameter; sign changes are refined by
/// bisection to locate intersection parameters.
pub fn circle_surface_intersections(d: &DupinCyclide, c: &Circle, scan: usize) -> Vec<f64> {
    let g = |u: f64| d.incidence_defect(&c.point(u));
    let n = scan.max(16);
    let mut roots = Vec::new();
    let mut prev_u = 0.0;
    let mut prev = g(0.0);
    for k in 1..=n {
        let u = TAU * (k as f64) / (n as f64);
        let cur = g(u);
        if prev == 0.0 {
            roots.push(prev_u);
        } else if prev * cur < 0.0 {
            let (mut lo, mut hi) = (prev_u, u);
            let (mut glo, _) = (prev, cur);
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                let gm = g(mid);
                if gm.abs() < 1e-16 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if glo * gm < 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                    glo = gm;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
        prev = cur;
        prev_u = u;
    }
    roots
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclide::cyclide_from_torus;
    use crate::euclid::{lift, EuclidSphere};
    use crate::linalg;

    fn p() -> PointSphereComplex {
        PointSphereComplex::standard()
    }

    fn torus() -> DupinCyclide {
        cyclide_from_torus(2.0, 1.0).unwrap()
    }

    fn generic_complex() -> LinearSphereComplex {
        // lift of a generic sphere with its p-component removed
        let s = lift(&EuclidSphere::sphere([0.4, -0.3, 0.7], 1.3)).rep();
        let e1 = s + p().rep().scale(s.inner(&p().rep()));
        LinearSphereComplex::new_invertible(e1).unwrap()
    }

    #[test]
    fn complex_inside_one_plane_fixes_the_splitting() {
        let d = torus();
        // a complex inside D2 fixes D1 pointwise and preserves D2, so the
        // transformed splitting is the original one
        let a = LinearSphereComplex::new_invertible(d.family(FamilyIndex::Two).frame()[0]).unwrap();
        let pair = ribaucourt_ok(&d, &a);
        for v in d.d1() {
            let img = lie_inversion(&a, v).unwrap();
            assert!((img - *v).norm_e() < 1e-12);
        }
        assert!(linalg::max_principal_angle(pair.delta_hat().d1(), d.d1()) < 1e-10);
        assert!(linalg::max_principal_angle(pair.delta_hat().d2(), d.d2()) < 1e-10);
    }

    fn ribaucourt_ok(d: &DupinCyclide, a: &LinearSphereComplex) -> RibaucourPair {
        ribaucour_transform(d, a).unwrap()
    }

    #[test]
    fn transform_produces_valid_cyclide() {
        let d = torus();
        let a = generic_complex();
        let pair = ribaucourt_ok(&d, &a);
        assert!(linalg::signature(pair.delta_hat().d1()).is(2, 1));
        assert!(linalg::signature(pair.delta_hat().d2()).is(2, 1));
        // the planes are exactly the images of the original planes
        for (orig, img) in [
            (d.d1(), pair.delta_hat().d1()),
            (d.d2(), pair.delta_hat().d2()),
        ] {
            let mapped: Vec<Vec6> = orig.iter().map(|v| lie_inversion(&a, v).unwrap()).collect();
            assert!(linalg::max_principal_angle(&mapped, img) < 1e-10);
        }
    }

    #[test]
    fn ribaucour_sphere_is_shared() {
        let d = torus();
        let a = generic_complex();
        let pair = ribaucourt_ok(&d, &a);
        for (u, v) in [(0.3, 1.2), (2.0, 4.4), (5.1, 0.2)] {
            let r = pair.ribaucour_sphere(u, v).unwrap();
            // r is orthogonal to a, hence fixed by sigma_a
            assert!(r.rep().inner(&a.rep()).abs() < 1e-8 * r.rep().norm_e());
            // r lies in both contact elements: the original one and its image
            let s1 = d.family(FamilyIndex::One).sphere(u).rep();
            let s2 = d.family(FamilyIndex::Two).sphere(v).rep();
            assert!(linalg::distance_to_span(&r.rep(), &[s1, s2]) < 1e-9);
            let t1 = lie_inversion(&a, &s1).unwrap();
            let t2 = lie_inversion(&a, &s2).unwrap();
            assert!(linalg::distance_to_span(&r.rep(), &[t1, t2]) < 1e-9);
        }
    }

    #[test]
    fn ribaucour_cyclide_constant_along_its_direction() {
        let d = torus();
        let a = generic_complex();
        let pair = ribaucourt_ok(&d, &a);
        let base = ribaucour_cyclide_at(&pair, FamilyIndex::One, 0.8, 0.1).unwrap();
        for k in 1..10 {
            let at = 0.1 + 0.5 * k as f64;
            let other = ribaucour_cyclide_at(&pair, FamilyIndex::One, 0.8, at).unwrap();
            let angle = linalg::max_principal_angle(base.d1(), other.d1());
            assert!(angle < 1e-7, "span moved by {angle} at {at}");
        }
    }

    #[test]
    fn ribaucour_cyclide_first_order_contact() {
        let d = torus();
        let a = generic_complex();
        let pair = ribaucourt_ok(&d, &a);
        let u0 = 0.8;
        let c1 = ribaucour_cyclide_at(&pair, FamilyIndex::One, u0, 0.4).unwrap();
        // s1, s1_hat and their u-derivatives lie in the complement of C1
        let fam = d.family(FamilyIndex::One);
        let h = 1e-5;
        let s = fam.sphere(u0).rep();
        let ds = (fam.sphere(u0 + h).rep() - fam.sphere(u0 - h).rep()).scale(1.0 / (2.0 * h));
        let shat = lie_inversion(&a, &s).unwrap();
        let dshat = lie_inversion(&a, &ds).unwrap();
        for v in [s, ds, shat, dshat] {
            let res = linalg::distance_to_span(&v, c1.d2());
            assert!(res < 1e-7, "first-order contact residual {res}");
        }
    }

    #[test]
    fn ribaucour_cyclide_directions_share_only_the_sphere() {
        let d = torus();
        let a = generic_complex();
        let pair = ribaucourt_ok(&d, &a);
        let c1 = ribaucour_cyclide_at(&pair, FamilyIndex::One, 0.8, 0.4).unwrap();
        let c2 = ribaucour_cyclide_at(&pair, FamilyIndex::Two, 0.4, 0.8).unwrap();
        // both planes contain the Ribaucour sphere r(0.8, 0.4)
        let r = pair.ribaucour_sphere(0.8, 0.4).unwrap();
        assert!(linalg::distance_to_span(&r.rep(), c1.d1()) < 1e-7);
        assert!(linalg::distance_to_span(&r.rep(), c2.d1()) < 1e-7);
        // their union spans five dimensions: the intersection is exactly
        // the line of the shared sphere
        let mut stacked: Vec<Vec6> = Vec::new();
        stacked.extend_from_slice(c1.d1());
        stacked.extend_from_slice(c2.d1());
        assert_eq!(linalg::rank(&stacked, 1e-7), 5);
        let common = linalg::span_intersection(c1.d1(), c2.d1());
        assert_eq!(common.len(), 1);
        assert!(common[0].same_projective_point(&r.rep()));
    }

    #[test]
    fn classification_types() {
        // e1 = e5 - e4 lightlike: Type 1 with curvature 0
        let a = LinearSphereComplex::new_invertible(infinity_rep() + p().rep().scale(0.7)).unwrap();
        let class = classify_family(&a, &p()).unwrap();
        assert_eq!(class.family_type, FamilyType::Type1);
        assert!(class.space_form.curvature.abs() < 1e-12);
        assert!(class.umbilic_pair.is_none());
        assert!(class.concurrent_point.is_none());

        // spacelike unit: Type 2 with lightlike umbilic pair e1 +- p
        let a = LinearSphereComplex::new_invertible(Vec6::E1 + p().rep().scale(0.3)).unwrap();
        let class = classify_family(&a, &p()).unwrap();
        assert_eq!(class.family_type, FamilyType::Type2);
        let (bp, bm) = class.umbilic_pair.unwrap();
        assert!(bp.rep().same_projective_point(&(Vec6::E1 + Vec6::E6)));
        assert!(bm.rep().same_projective_point(&(Vec6::E1 - Vec6::E6)));

        // timelike component: Type 3, no umbilic members
        let a = LinearSphereComplex::new_invertible(Vec6::E5 + p().rep().scale(0.3)).unwrap();
        let class = classify_family(&a, &p()).unwrap();
        assert_eq!(class.family_type, FamilyType::Type3);
        assert!(class.umbilic_pair.is_none());

        // a proportional to p is rejected
        let a = LinearSphereComplex::new_invertible(p().rep().scale(2.0)).unwrap();
        assert_eq!(classify_family(&a, &p()).unwrap_err(), GeomError::PointSphereComplexArgument);
    }

    #[test]
    fn type1_concurrent_point_detected() {
        // lightlike p-orthogonal component that is not the infinity
        // direction: the lift of a finite point
        let e1 = lift(&EuclidSphere::point([0.5, 0.0, 0.0])).rep();
        let a = LinearSphereComplex::new_invertible(e1 + p().rep().scale(0.4)).unwrap();
        let class = classify_family(&a, &p()).unwrap();
        assert_eq!(class.family_type, FamilyType::Type1);
        let cp = class.concurrent_point.unwrap();
        assert!(cp.rep().same_projective_point(&e1));
    }

    #[test]
    fn member_at_endpoint_matches_ribaucour_transform() {
        let d = torus();
        let a = generic_complex();
        let fam = LameFamily::new(d.clone(), a, p()).unwrap();
        // b = a corresponds to some parameter; for the generic complex here
        // e1 = a (already p-orthogonal), i.e. parameter 0
        let member = fam.member(0.0).unwrap();
        let pair = ribaucourt_ok(&d, &a);
        assert!(linalg::max_principal_angle(member.d1(), pair.delta_hat().d1()) < 1e-9);
        assert!(linalg::max_principal_angle(member.d2(), pair.delta_hat().d2()) < 1e-9);
    }

    #[test]
    fn member_points_lie_on_congruence_circles() {
        let d = torus();
        let a = generic_complex();
        let fam = LameFamily::new(d, a, p()).unwrap();
        let betas = [-0.9, -0.4, 0.0, 0.35, 0.8, 1.3];
        for (u, v) in [(0.4, 1.0), (2.2, 3.1)] {
            let circle = fam.congruence_circle(u, v).unwrap();
            for &b in &betas {
                let m = fam.member_point(b, u, v).unwrap();
                let res = circle.membership_residual(&m.rep());
                assert!(res < 1e-8, "member point off circle by {res}");
            }
            // base point as well
            assert!(circle.membership_residual(&fam.base_point(u, v).unwrap().rep()) < 1e-9);
        }
    }

    #[test]
    fn trajectories_are_circles() {
        let d = torus();
        let a = generic_complex();
        let fam = LameFamily::new(d, a, p()).unwrap();
        let betas: Vec<f64> = (0..14).map(|k| -1.2 + 0.17 * k as f64).collect();
        for (u, v) in [(0.4, 1.0), (5.0, 2.3)] {
            let mut pts = Vec::new();
            for &b in &betas {
                if fam.complex_at(b).is_err() {
                    continue;
                }
                if let Some(x) =
                    crate::euclid::point_position(&fam.member_point(b, u, v).unwrap()).unwrap()
                {
                    pts.push(x);
                }
            }
            assert!(pts.len() >= 10);
            let fit = crate::verify::circle_fit_residual(&pts);
            assert!(fit < 1e-8, "trajectory circle fit {fit}");
        }
    }

    #[test]
    fn relating_inversion_connects_members() {
        let d = torus();
        let a = generic_complex();
        let fam = LameFamily::new(d, a, p()).unwrap();
        let (b1, b2) = (0.3, -0.6);
        let c = relating_inversion(&fam, b1, b2).unwrap();
        // the composite really is the reflection in c
        assert!(reflection_residual(&fam, b1, b2, &c) < 1e-9);
        // c lies in the complex plane span(e1, p)
        assert!(linalg::distance_to_span(&c.rep(), &fam.complex_plane()) < 1e-9);
        // and maps member(b1) onto member(b2) up to global orientation
        let m1 = fam.member(b1).unwrap();
        let m2 = fam.member(b2).unwrap();
        let mapped: Vec<Vec6> = m1.d1().iter().map(|v| lie_inversion(&c, v).unwrap()).collect();
        let flipped: Vec<Vec6> = m2.d1().iter().map(|v| point_reflection(v, &p())).collect();
        assert!(linalg::max_principal_angle(&mapped, &flipped) < 1e-9);
    }

    #[test]
    fn four_sphere_recovery_matches_relating_inversion() {
        use crate::kernel::inversion_from_four_spheres;
        let d = torus();
        let a = generic_complex();
        let fam = LameFamily::new(d, a, p()).unwrap();
        let c = relating_inversion(&fam, 0.25, -0.55).unwrap();
        let m1 = fam.member(0.25).unwrap();
        let take = |t: f64| m1.family(FamilyIndex::One).sphere(t);
        let sa = take(0.4);
        let sb = take(2.9);
        let ia = OrientedSphere::new(lie_inversion(&c, &sa.rep()).unwrap()).unwrap();
        let ib = OrientedSphere::new(lie_inversion(&c, &sb.rep()).unwrap()).unwrap();
        let rec = inversion_from_four_spheres(&sa, &ia, &ib, &sb).unwrap();
        assert!(rec.rep().same_projective_point(&c.rep()));
    }

    #[test]
    fn group_closure_in_the_complex_plane() {
        let d = torus();
        let a = generic_complex();
        let fam = LameFamily::new(d, a, p()).unwrap();
        let b1 = fam.complex_at(0.5).unwrap();
        let b2 = fam.complex_at(-0.8).unwrap();
        let b3 = fam.complex_at(1.1).unwrap();
        // the composite of three reflections in the plane is one reflection
        let composite = |v: &Vec6| -> Vec6 {
            let w = lie_inversion(&b3, v).unwrap();
            let w = lie_inversion(&b2, &w).unwrap();
            lie_inversion(&b1, &w).unwrap()
        };
        let mut axis = Vec6::ZERO;
        for i in 0..6 {
            let mut e = [0.0; 6];
            e[i] = 1.0;
            let e = Vec6(e);
            let col = e - composite(&e);
            if col.norm_e() > axis.norm_e() {
                axis = col;
            }
        }
        let w = LinearSphereComplex::new_invertible(axis).unwrap();
        assert!(linalg::distance_to_span(&w.rep(), &fam.complex_plane()) < 1e-9);
        let mut worst: f64 = 0.0;
        for i in 0..6 {
            let mut e = [0.0; 6];
            e[i] = 1.0;
            let e = Vec6(e);
            worst = worst.max((composite(&e) - lie_inversion(&w, &e).unwrap()).norm_e());
        }
        assert!(worst < 1e-9, "composite is not a single reflection: {worst}");
    }

    #[test]
    fn type2_mirror_symmetry() {
        let d = torus();
        let a = generic_complex();
        let fam = LameFamily::new(d, a, p()).unwrap();
        assert_eq!(fam.family_type(), FamilyType::Type2);
        // sigma_e1 relates members at beta and pi/2 - beta
        let beta = 0.2;
        let c = relating_inversion(&fam, beta, std::f64::consts::FRAC_PI_2 - beta).unwrap();
        let e1 = fam.e1();
        assert!(c.rep().same_projective_point(&e1), "relating complex is e1");
        // exact operator identity: sigma_p sigma_e1 sigma_b(beta) = sigma_b(mirror)
        let bb = fam.complex_at(beta).unwrap();
        let bm = fam.complex_at(std::f64::consts::FRAC_PI_2 - beta).unwrap();
        let ce1 = LinearSphereComplex::new_invertible(e1).unwrap();
        for i in 0..6 {
            let mut e = [0.0; 6];
            e[i] = 1.0;
            let e = Vec6(e);
            let lhs = point_reflection(
                &lie_inversion(&ce1, &lie_inversion(&bb, &e).unwrap()).unwrap(),
                &p(),
            );
            let rhs = lie_inversion(&bm, &e).unwrap();
            assert!((lhs - rhs).norm_e() < 1e-12);
        }
    }

    #[test]
    fn type2_null_directions_and_type3_absence() {
        let d = torus();
        let a = generic_complex();
        let fam = LameFamily::new(d, a, p()).unwrap();
        // Type 2: null at pi/4 and 3 pi/4
        let nulls = fam.null_parameters_in(0.0, std::f64::consts::PI);
        assert_eq!(nulls.len(), 2);
        assert!(fam.complex_at(nulls[0]).is_err());
        // Type 3 families have none
        let a3 = LinearSphereComplex::new_invertible(Vec6::E5 + p().rep().scale(0.3)).unwrap();
        let fam3 = LameFamily::new(torus(), a3, p()).unwrap();
        assert!(fam3.null_parameters_in(-10.0, 10.0).is_empty());
        for k in 0..40 {
            let beta = TAU * (k as f64) / 40.0;
            let b = fam3.complex_at(beta).unwrap();
            assert!(b.rep().norm2().abs() > 0.05 * b.rep().norm_e().powi(2));
        }
    }

    #[test]
    fn type1_members_are_parallel_tori() {
        let d = torus();
        // e1 = infinity direction: a = q + kappa p
        let a = LinearSphereComplex::new_invertible(infinity_rep() + p().rep().scale(0.5)).unwrap();
        let fam = LameFamily::new(d, a, p()).unwrap();
        assert_eq!(fam.family_type(), FamilyType::Type1);
        let lambdas = [-10.0, -5.0, -4.0, -2.5];
        let report = parallel_check(&fam, &lambdas, 6).unwrap();
        match report {
            ParallelReport::Checked { collinearity_max, offset_std_max, tube_radii } => {
                assert!(collinearity_max < 1e-8, "collinearity {collinearity_max}");
                assert!(offset_std_max < 1e-7, "offset spread {offset_std_max}");
                // tube radii are monotone for a monotone lambda sweep
                for w in tube_radii.windows(2) {
                    assert!(w[0] < w[1], "radii not monotone: {tube_radii:?}");
                }
            }
            ParallelReport::UnsupportedChart => panic!("chart should be Euclidean"),
        }
        // implicit fit: members really are tori around the same spine
        for &l in &lambdas {
            let mut max_res: f64 = 0.0;
            for i in 0..8 {
                for j in 0..8 {
                    let u = TAU * (i as f64) / 8.0;
                    let v = TAU * (j as f64) / 8.0 + 0.1;
                    let x = crate::euclid::point_position(&fam.member_point(l, u, v).unwrap())
                        .unwrap()
                        .unwrap();
                    let rho = (x[0] * x[0] + x[1] * x[1]).sqrt();
                    let r_here = ((rho - 2.0).powi(2) + x[2] * x[2]).sqrt();
                    let expect = (-1.0 - 2.0 / l as f64).abs();
                    max_res = max_res.max((r_here - expect).abs());
                }
            }
            assert!(max_res < 1e-8, "member at {l} is not the expected torus: {max_res}");
        }
    }

    #[test]
    fn type2_report_is_unsupported_chart() {
        let d = torus();
        let a = generic_complex();
        let fam = LameFamily::new(d, a, p()).unwrap();
        assert!(matches!(
            parallel_check(&fam, &[0.0, 0.3], 4).unwrap(),
            ParallelReport::UnsupportedChart
        ));
    }

    #[test]
    fn umbilic_spheres_are_orthogonal_to_the_congruence() {
        let d = torus();
        let a = generic_complex();
        let fam = LameFamily::new(d, a, p()).unwrap();
        let (bp, bm) = fam.class().umbilic_pair.clone().unwrap();
        for (u, v) in [(0.3, 1.1), (2.5, 4.0), (4.9, 0.6)] {
            let circle = fam.congruence_circle(u, v).unwrap();
            for s in [&bp, &bm] {
                let w = s.rep() + p().rep().scale(s.rep().inner(&p().rep()));
                let res = circle.membership_residual(&w);
                assert!(res < 1e-8, "umbilic sphere not orthogonal: {res}");
            }
        }
    }

    #[test]
    fn bisection_intersections_agree_with_member_points() {
        let d = torus();
        let a = generic_complex();
        let fam = LameFamily::new(d.clone(), a, p()).unwrap();
        let (u, v) = (0.7, 2.0);
        let circle = fam.congruence_circle(u, v).unwrap();
        let member = fam.member(0.4).unwrap();
        let roots = circle_surface_intersections(&member, &circle, 512);
        assert!(!roots.is_empty());
        let mp = fam.member_point(0.4, u, v).unwrap();
        let um = circle.parameter_of(&mp).unwrap();
        let best = roots
            .iter()
            .map(|r| {
                let d = (r - um).rem_euclid(TAU);
                d.min(TAU - d)
            })
            .fold(f64::INFINITY, f64::min);
        assert!(best < 1e-6, "bisection missed the member point by {best}");
    }
}
