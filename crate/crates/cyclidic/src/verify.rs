//! Residual suites: geometric fit oracles on the Euclidean side and
//! randomized property checks over the kernel. Shared by the test suite
//! and the CLI `check` verb so reported numbers come from one place.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cyclide::{cyclide_from_torus, EvolutionMap, FamilyIndex};
use crate::euclid::{lift, point_position, project, project_sphere, EuclidSphere};
use crate::kernel::{
    angle, lie_inversion, orthogonal, LinearSphereComplex, PointSphereComplex,
};
use crate::vec6::Vec6;

use std::collections::BTreeMap;
use std::f64::consts::TAU;

/// One residual family: extremes over a set of measurements, the pinned
/// threshold and the verdict.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResidualCheck {
    pub max: f64,
    pub mean: f64,
    pub count: usize,
    pub threshold: f64,
    pub pass: bool,
}

impl ResidualCheck {
    pub fn from_values(values: &[f64], threshold: f64) -> Self {
        let count = values.len();
        let max = values.iter().cloned().fold(0.0, f64::max);
        let mean = if count == 0 { 0.0 } else { values.iter().sum::<f64>() / count as f64 };
        ResidualCheck { max, mean, count, threshold, pass: max <= threshold }
    }
}

/// A named collection of residual checks.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct SuiteReport {
    pub checks: BTreeMap<String, ResidualCheck>,
}

impl SuiteReport {
    pub fn insert(&mut self, name: &str, check: ResidualCheck) {
        self.checks.insert(name.to_string(), check);
    }

    pub fn all_pass(&self) -> bool {
        self.checks.values().all(|c| c.pass)
    }

    pub fn merged(mut self, other: SuiteReport) -> SuiteReport {
        self.checks.extend(other.checks);
        self
    }
}

/// Largest relative deviation of the points from their best-fit line
/// (deviation over data diameter).
pub fn collinearity_residual(points: &[[f64; 3]]) -> f64 {
    if points.len() < 3 {
        return 0.0;
    }
    let n = points.len() as f64;
    let mut c = [0.0; 3];
    for x in points {
        for i in 0..3 {
            c[i] += x[i] / n;
        }
    }
    let m = DMatrix::from_fn(points.len(), 3, |r, j| points[r][j] - c[j]);
    let svd = m.clone().svd(false, true);
    let vt = svd.v_t.unwrap();
    let dir: Vec<f64> = vt.row(0).iter().cloned().collect();
    let mut max_dev: f64 = 0.0;
    let mut diameter: f64 = 0.0;
    for r in 0..points.len() {
        let row = m.row(r);
        let along: f64 = (0..3).map(|j| row[j] * dir[j]).sum();
        let dev: f64 = (0..3).map(|j| (row[j] - along * dir[j]).powi(2)).sum::<f64>().sqrt();
        max_dev = max_dev.max(dev);
        diameter = diameter.max(row.iter().map(|x| x * x).sum::<f64>().sqrt());
    }
    if diameter == 0.0 {
        0.0
    } else {
        max_dev / diameter
    }
}

/// Relative residual of a least-squares circle fit in 3-space: plane fit
/// by principal components, then an algebraic circle fit in the plane.
/// Collinear inputs (circles through infinity) report their line defect.
pub fn circle_fit_residual(points: &[[f64; 3]]) -> f64 {
    if points.len() < 4 {
        return 0.0;
    }
    let coll = collinearity_residual(points);
    if coll < 1e-11 {
        return coll;
    }
    let n = points.len() as f64;
    let mut c = [0.0; 3];
    for x in points {
        for i in 0..3 {
            c[i] += x[i] / n;
        }
    }
    let m = DMatrix::from_fn(points.len(), 3, |r, j| points[r][j] - c[j]);
    let svd = m.clone().svd(false, true);
    let vt = svd.v_t.unwrap();
    let e1: Vec<f64> = vt.row(0).iter().cloned().collect();
    let e2: Vec<f64> = vt.row(1).iter().cloned().collect();
    let normal: Vec<f64> = vt.row(2).iter().cloned().collect();
    // in-plane coordinates and out-of-plane deviation
    let mut xs = Vec::with_capacity(points.len());
    let mut ys = Vec::with_capacity(points.len());
    let mut plane_dev: f64 = 0.0;
    for r in 0..points.len() {
        let row = m.row(r);
        xs.push((0..3).map(|j| row[j] * e1[j]).sum::<f64>());
        ys.push((0..3).map(|j| row[j] * e2[j]).sum::<f64>());
        plane_dev = plane_dev.max((0..3).map(|j| row[j] * normal[j]).sum::<f64>().abs());
    }
    // algebraic fit: x^2 + y^2 = 2 a x + 2 b y + d
    let a_mat = DMatrix::from_fn(points.len(), 3, |r, j| match j {
        0 => 2.0 * xs[r],
        1 => 2.0 * ys[r],
        _ => 1.0,
    });
    let rhs = DVector::from_fn(points.len(), |r, _| xs[r] * xs[r] + ys[r] * ys[r]);
    let sol = a_mat.clone().svd(true, true).solve(&rhs, 1e-14).unwrap();
    let (ca, cb, d) = (sol[0], sol[1], sol[2]);
    let r2 = (d + ca * ca + cb * cb).max(0.0);
    let radius = r2.sqrt();
    if radius < 1e-12 {
        return f64::INFINITY;
    }
    let mut worst: f64 = plane_dev;
    for r in 0..points.len() {
        let dist = ((xs[r] - ca).powi(2) + (ys[r] - cb).powi(2)).sqrt();
        worst = worst.max((dist - radius).abs());
    }
    worst / radius
}

fn random_vec6(rng: &mut ChaCha8Rng) -> Vec6 {
    let mut c = [0.0; 6];
    for x in &mut c {
        *x = rng.random_range(-1.0..1.0);
    }
    Vec6(c)
}

fn random_complex(rng: &mut ChaCha8Rng) -> LinearSphereComplex {
    loop {
        let v = random_vec6(rng);
        if v.norm_e() < 1e-3 {
            continue;
        }
        if v.norm2().abs() > 0.05 * v.norm_e() * v.norm_e() {
            return LinearSphereComplex::new_invertible(v).unwrap();
        }
    }
}

fn random_euclid_sphere(rng: &mut ChaCha8Rng) -> EuclidSphere {
    match rng.random_range(0..10) {
        0 | 1 => EuclidSphere::point([
            rng.random_range(-10.0..10.0),
            rng.random_range(-10.0..10.0),
            rng.random_range(-10.0..10.0),
        ]),
        2 => {
            let n = random_unit3(rng);
            EuclidSphere::plane(n, rng.random_range(-5.0..5.0)).unwrap()
        }
        _ => {
            let mut r: f64 = 0.0;
            while r.abs() < 0.2 {
                r = rng.random_range(-5.0..5.0);
            }
            EuclidSphere::sphere(
                [
                    rng.random_range(-10.0..10.0),
                    rng.random_range(-10.0..10.0),
                    rng.random_range(-10.0..10.0),
                ],
                r,
            )
        }
    }
}

fn random_unit3(rng: &mut ChaCha8Rng) -> [f64; 3] {
    loop {
        let v: [f64; 3] = [
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        ];
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 1e-3 {
            return [v[0] / n, v[1] / n, v[2] / n];
        }
    }
}

/// Randomized kernel properties: involution, isometry, light-cone
/// preservation and the exact fixing of p by M-Lie inversions.
pub fn kernel_suite(seed: u64, cases: usize) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = PointSphereComplex::standard();
    let mut involution = Vec::with_capacity(cases);
    let mut isometry = Vec::with_capacity(cases);
    let mut lightcone = Vec::with_capacity(cases);
    let mut pfix = Vec::with_capacity(cases);
    for _ in 0..cases {
        let a = random_complex(&mut rng);
        let v = random_vec6(&mut rng);
        let w = random_vec6(&mut rng);
        let iv = lie_inversion(&a, &v).unwrap();
        let ivv = lie_inversion(&a, &iv).unwrap();
        involution.push((ivv - v).norm_e() / v.norm_e());
        let iw = lie_inversion(&a, &w).unwrap();
        let scale = v.norm_e() * w.norm_e();
        isometry.push((iv.inner(&iw) - v.inner(&w)).abs() / scale);
        // lightlike input: the lift of a random sphere
        let s = lift(&random_euclid_sphere(&mut rng)).rep();
        let is = lie_inversion(&a, &s).unwrap();
        lightcone.push(is.norm2().abs() / (is.norm_e() * is.norm_e()));
        // an M-Lie complex fixes p exactly
        let raw = random_vec6(&mut rng);
        let m_lie = raw + p.rep().scale(raw.inner(&p.rep()));
        if let Ok(am) = LinearSphereComplex::new_invertible(m_lie) {
            let imp = lie_inversion(&am, &p.rep()).unwrap();
            pfix.push((imp - p.rep()).norm_e());
        }
    }
    let mut report = SuiteReport::default();
    report.insert("involution", ResidualCheck::from_values(&involution, 1e-11));
    report.insert("isometry", ResidualCheck::from_values(&isometry, 1e-11));
    report.insert("lightcone_preservation", ResidualCheck::from_values(&lightcone, 1e-11));
    report.insert("p_fixing", ResidualCheck::from_values(&pfix, 0.0));
    report
}

/// Randomized bridge properties: lift/project round trips and agreement
/// of incidence and intersection angles with Euclidean formulas.
pub fn bridge_suite(seed: u64, cases: usize) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = PointSphereComplex::standard();
    let mut roundtrip = Vec::with_capacity(cases);
    let mut lightlike = Vec::with_capacity(cases);
    let mut incidence = Vec::with_capacity(cases);
    let mut angles = Vec::with_capacity(cases);
    for _ in 0..cases {
        let s = random_euclid_sphere(&mut rng);
        let lifted = lift(&s);
        lightlike.push(lifted.rep().norm2().abs() / lifted.rep().norm_e().powi(2));
        let back = project(&lifted.rep()).unwrap();
        roundtrip.push(euclid_distance(&s, &back));

        // incidence against the Euclidean oracle
        let c = [
            rng.random_range(-5.0..5.0),
            rng.random_range(-5.0..5.0),
            rng.random_range(-5.0..5.0),
        ];
        let mut r: f64 = 0.0;
        while r.abs() < 0.3 {
            r = rng.random_range(-4.0..4.0);
        }
        let sph = lift(&EuclidSphere::sphere(c, r));
        let dir = random_unit3(&mut rng);
        let factor = if rng.random_bool(0.5) { 1.0 } else { rng.random_range(1.1..1.9) };
        let x = [
            c[0] + dir[0] * r.abs() * factor,
            c[1] + dir[1] * r.abs() * factor,
            c[2] + dir[2] * r.abs() * factor,
        ];
        let on_sphere = factor == 1.0;
        let pt = lift(&EuclidSphere::point(x));
        let agrees = orthogonal(&pt, &sph, &p) == on_sphere;
        incidence.push(if agrees { 0.0 } else { 1.0 });

        // intersection angle against the law of cosines
        let r1: f64 = rng.random_range(0.5..3.0);
        let r2: f64 = rng.random_range(0.5..3.0);
        let lo = (r1 - r2).abs() + 0.05 * (r1 + r2);
        let hi = (r1 + r2) * 0.95;
        if lo < hi {
            let d = rng.random_range(lo..hi);
            let c1 = [
                rng.random_range(-5.0..5.0),
                rng.random_range(-5.0..5.0),
                rng.random_range(-5.0..5.0),
            ];
            let dir = random_unit3(&mut rng);
            let c2 = [c1[0] + d * dir[0], c1[1] + d * dir[1], c1[2] + d * dir[2]];
            let s1 = lift(&EuclidSphere::sphere(c1, r1));
            let s2 = lift(&EuclidSphere::sphere(c2, r2));
            let got = angle(&s1, &s2, &p).unwrap();
            let expect = ((r1 * r1 + r2 * r2 - d * d) / (2.0 * r1 * r2)).clamp(-1.0, 1.0).acos();
            angles.push((got - expect).abs());
        }
    }
    let mut report = SuiteReport::default();
    report.insert("lift_project_round_trip", ResidualCheck::from_values(&roundtrip, 1e-10));
    report.insert("lift_lightlike", ResidualCheck::from_values(&lightlike, 1e-12));
    report.insert("incidence_oracle_agreement", ResidualCheck::from_values(&incidence, 0.0));
    report.insert("angle_oracle_agreement", ResidualCheck::from_values(&angles, 1e-8));
    report
}

fn euclid_distance(a: &EuclidSphere, b: &EuclidSphere) -> f64 {
    match (a, b) {
        (
            EuclidSphere::Sphere { center: c1, radius: r1 },
            EuclidSphere::Sphere { center: c2, radius: r2 },
        ) => dist3(c1, c2).max((r1 - r2).abs()),
        (EuclidSphere::Point { position: x1 }, EuclidSphere::Point { position: x2 }) => {
            dist3(x1, x2)
        }
        (
            EuclidSphere::Plane { normal: n1, offset: d1 },
            EuclidSphere::Plane { normal: n2, offset: d2 },
        ) => dist3(n1, n2).max((d1 - d2).abs()),
        (EuclidSphere::Infinity, EuclidSphere::Infinity) => 0.0,
        _ => f64::INFINITY,
    }
}

fn dist3(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

/// Torus reproduction: evolve the curvature circle of the standard
/// (2, 1) torus across a grid and measure implicit residuals, parameter
/// line circle fits, and quer-sphere against meridian-plane agreement.
pub fn torus_suite(u_samples: usize, t_samples: usize) -> SuiteReport {
    let p = PointSphereComplex::standard();
    let d = cyclide_from_torus(2.0, 1.0).unwrap();
    let fam = d.family(FamilyIndex::One);
    let e = EvolutionMap::new(fam.clone(), 0.0, &p).unwrap();
    let c0 = d.curvature_circle(FamilyIndex::One, 0.0, &p).unwrap();
    let ts: Vec<f64> = (0..t_samples).map(|k| TAU * (k as f64) / (t_samples as f64)).collect();
    let grid = crate::cyclide::evolve_circle(&e, &c0, u_samples, &ts, &p).unwrap();

    let mut implicit = Vec::new();
    let mut row_fits = Vec::new();
    let mut col_fits = Vec::new();
    let mut columns: Vec<Vec<[f64; 3]>> = vec![Vec::new(); grid.r_params.len()];
    for row in &grid.rows {
        let mut pts = Vec::with_capacity(row.points.len());
        for (j, m) in row.points.iter().enumerate() {
            if let Some(x) = point_position(m).unwrap() {
                let rho = (x[0] * x[0] + x[1] * x[1]).sqrt();
                implicit.push(((rho - 2.0).powi(2) + x[2] * x[2] - 1.0).abs());
                pts.push(x);
                columns[j].push(x);
            }
        }
        row_fits.push(circle_fit_residual(&pts));
    }
    for col in &columns {
        col_fits.push(circle_fit_residual(col));
    }

    // quer-spheres at sixteen parameters match the meridian planes
    let mut quer = Vec::new();
    for k in 0..16 {
        let t = TAU * (k as f64) / 16.0;
        let (qp, qm) = fam.quer_spheres(t, &p).unwrap();
        let theta = match project_sphere(&fam.sphere(t)).unwrap() {
            EuclidSphere::Sphere { center, .. } => center[1].atan2(center[0]),
            _ => continue,
        };
        for q in [qp, qm] {
            match project_sphere(&q).unwrap() {
                EuclidSphere::Plane { normal, offset } => {
                    let mis = (normal[0] * theta.cos() + normal[1] * theta.sin()).abs();
                    quer.push(mis.max(offset.abs()).max(normal[2].abs()));
                }
                _ => quer.push(f64::INFINITY),
            }
        }
    }

    let mut report = SuiteReport::default();
    report.insert("torus_implicit", ResidualCheck::from_values(&implicit, 1e-8));
    report.insert("torus_row_circle_fit", ResidualCheck::from_values(&row_fits, 1e-8));
    report.insert("torus_column_circle_fit", ResidualCheck::from_values(&col_fits, 1e-8));
    report.insert("torus_quer_meridian", ResidualCheck::from_values(&quer, 1e-8));
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_fit_accepts_circles_and_measures_defects() {
        // exact circle
        let pts: Vec<[f64; 3]> = (0..20)
            .map(|k| {
                let t = TAU * (k as f64) / 20.0;
                [1.0 + 2.0 * t.cos(), -0.5 + 2.0 * t.sin(), 3.0]
            })
            .collect();
        assert!(circle_fit_residual(&pts) < 1e-12);
        // perturbed circle
        let mut bad = pts.clone();
        bad[3][2] += 0.1;
        assert!(circle_fit_residual(&bad) > 1e-3);
    }

    #[test]
    fn collinearity_of_a_line() {
        let pts: Vec<[f64; 3]> = (0..10).map(|k| [k as f64, 2.0 * k as f64, -1.0]).collect();
        assert!(collinearity_residual(&pts) < 1e-12);
        let mut bad = pts.clone();
        bad[5][0] += 0.3;
        assert!(collinearity_residual(&bad) > 1e-3);
    }

    #[test]
    fn suites_pass_at_reduced_size() {
        assert!(kernel_suite(7, 500).all_pass());
        assert!(bridge_suite(11, 200).all_pass());
        assert!(torus_suite(16, 16).all_pass());
    }
}
