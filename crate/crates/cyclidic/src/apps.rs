//! Blending, subdivision, cyclidic cubes and discrete nets.
//!
//! All four procedures are driven by the same mechanism: finitely many
//! M-Lie inversions chosen from an evolution pencil transport an initial
//! circle or patch, and concircularity of the resulting quads comes from
//! the span argument for point spheres related by an M-Lie inversion.

use crate::cyclide::{solve_trig, DupinCyclide, EvolvedGrid, FamilyIndex};
use crate::dcsystem::LameFamily;
use crate::error::{GeomError, Result};
use crate::incidence::{classify_pencil, Circle, MSpherePencil};
use crate::kernel::{
    complex_from_sphere_pair, lie_inversion, LinearSphereComplex, OrientedSphere,
    PointSphereComplex,
};
use crate::linalg;
use crate::vec6::Vec6;

use std::f64::consts::TAU;

/// Initial data of a blending problem: two spheres and a curvature circle
/// on the first of them.
#[derive(Debug, Clone)]
pub struct BlendSpec {
    pub s1: OrientedSphere,
    pub s2: OrientedSphere,
    pub gamma1: Circle,
}

/// Which of the two quer-spheres along the initial circle seeds the blend.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlendBranch {
    Plus,
    Minus,
}

/// Everything the blending procedure recovers.
#[derive(Debug, Clone)]
pub struct BlendResult {
    pub gamma2: Circle,
    pub q1: OrientedSphere,
    pub q2: OrientedSphere,
    pub pencil: MSpherePencil,
    pub grid: EvolvedGrid,
    /// pencil parameter at which the evolution carries s1 to s2
    pub t1: f64,
}

/// Recovers the unique blending cyclide patch between two spheres from a
/// curvature circle on the first one:
/// the M-Lie inversion mapping s1 to s2 transports the circle and one of
/// its quer-spheres; the quer-sphere pencil then evolves the circle across
/// the patch.
pub fn blend(
    spec: &BlendSpec,
    branch: BlendBranch,
    u_samples: usize,
    t_rows: usize,
    p: &PointSphereComplex,
) -> Result<BlendResult> {
    // the circle must lie on s1
    for k in 0..16 {
        let u = TAU * (k as f64) / 16.0;
        if crate::kernel::orthogonality_residual(&spec.gamma1.point(u), &spec.s1, p) > 1e-8 {
            return Err(GeomError::NotOnSphere);
        }
    }
    let a = complex_from_sphere_pair(&spec.s1, &spec.s2, p)?;
    let map = |v: &Vec6| lie_inversion(&a, v);
    let gamma2 = Circle::from_gamma_basis(
        [
            map(&spec.gamma1.gamma()[0])?,
            map(&spec.gamma1.gamma()[1])?,
            map(&spec.gamma1.gamma()[2])?,
        ],
        p,
    )?;
    let q1 = quer_sphere_of_circle_on(&spec.gamma1, &spec.s1, branch, p)?;
    let q2 = OrientedSphere::new(map(&q1.rep())?)?;
    let pencil = classify_pencil(&q1, &q2, p)?;
    let t1 = pencil.second_generator_parameter();
    let rows: Vec<f64> = (0..t_rows.max(2))
        .map(|k| t1 * (k as f64) / ((t_rows.max(2) - 1) as f64))
        .collect();
    let surface =
        crate::cyclide::surface_from_pencil_and_circle(&pencil, 0.0, &spec.gamma1, u_samples, &rows, p)?;
    Ok(BlendResult { gamma2, q1, q2, pencil, grid: surface.grid, t1 })
}

/// The sphere intersecting `s` orthogonally along the circle: a lightlike
/// direction of gamma_perp orthogonal to s. The two branches are the two
/// orientations.
pub fn quer_sphere_of_circle_on(
    c: &Circle,
    s: &OrientedSphere,
    branch: BlendBranch,
    p: &PointSphereComplex,
) -> Result<OrientedSphere> {
    let on = linalg::pseudo_orthonormal_basis(c.gamma_perp())?;
    let w = s.rep() + p.rep().scale(s.rep().inner(&p.rep()));
    let roots = solve_trig(on[0].inner(&w), on[1].inner(&w), on[2].inner(&w));
    if roots.is_empty() {
        return Err(GeomError::NoRealSpheres);
    }
    let psi = match branch {
        BlendBranch::Plus => roots[0],
        BlendBranch::Minus => *roots.last().unwrap(),
    };
    OrientedSphere::new(on[0].scale(psi.cos()) + on[1].scale(psi.sin()) + on[2])
}

/// Curvature circles subdividing the patch between two curvature spheres
/// of the same family, with the parameters they sit at.
#[derive(Debug, Clone)]
pub struct Subdivision {
    pub family: FamilyIndex,
    /// strictly increasing parameters from t1 to t1 + arc
    pub parameters: Vec<f64>,
    pub circles: Vec<Circle>,
}

/// Symmetric refinement of the curvature-line net between two regular
/// curvature spheres of one family: each step inserts the curvature
/// sphere lying in the complex of the M-Lie inversion that swaps the
/// patch boundaries, splitting every arc in two. Produces 2^depth + 1
/// circles on the patch selected by `other_patch`.
pub fn subdivide(
    d: &DupinCyclide,
    s1: &OrientedSphere,
    s2: &OrientedSphere,
    depth: usize,
    other_patch: bool,
    p: &PointSphereComplex,
) -> Result<Subdivision> {
    if s1.rep().same_projective_point(&s2.rep()) {
        return Err(GeomError::SameSphere);
    }
    let (index, fam) = locate_family(d, s1)?;
    if linalg::distance_to_span(&s2.rep(), d.plane(index)) > 1e-8 {
        return Err(GeomError::DegenerateInput);
    }
    let t1 = family_parameter(&fam, s1)?;
    let t2 = family_parameter(&fam, s2)?;
    if !fam.is_regular(t1, p) || !fam.is_regular(t2, p) {
        return Err(GeomError::SingularParameter);
    }
    let arc = (t2 - t1).rem_euclid(TAU);
    let (start, span) = if other_patch { (t2, TAU - arc) } else { (t1, arc) };

    // recursive bisection in parameter space via the complex of the swap
    fn midpoint(
        fam: &crate::cyclide::CurvatureSphereFamily,
        lo: f64,
        span: f64,
        p: &PointSphereComplex,
    ) -> Result<f64> {
        let sa = fam.sphere(lo);
        let sb = fam.sphere(lo + span);
        let a = complex_from_sphere_pair(&sa, &sb, p)?;
        let roots = crate::cyclide::family_parameters_in_complex(fam, &a);
        match roots.len() {
            0 => Err(GeomError::NoMidpointSphere),
            1 => Err(GeomError::DoubleRoot),
            _ => {
                for r in roots {
                    let offset = (r - lo).rem_euclid(TAU);
                    if offset > 1e-9 && offset < span - 1e-9 {
                        return Ok(offset);
                    }
                }
                Err(GeomError::NoMidpointSphere)
            }
        }
    }

    let mut offsets = vec![0.0, span];
    for _ in 0..depth {
        let mut next = Vec::with_capacity(offsets.len() * 2 - 1);
        for w in offsets.windows(2) {
            let mid = w[0] + midpoint(&fam, start + w[0], w[1] - w[0], p)?;
            next.push(w[0]);
            next.push(mid);
        }
        next.push(*offsets.last().unwrap());
        offsets = next;
    }
    let parameters: Vec<f64> = offsets.iter().map(|o| start + o).collect();
    let circles = parameters
        .iter()
        .map(|&t| d.curvature_circle(index, t, p))
        .collect::<Result<Vec<_>>>()?;
    Ok(Subdivision { family: index, parameters, circles })
}

fn locate_family(
    d: &DupinCyclide,
    s: &OrientedSphere,
) -> Result<(FamilyIndex, crate::cyclide::CurvatureSphereFamily)> {
    for index in [FamilyIndex::One, FamilyIndex::Two] {
        if linalg::distance_to_span(&s.rep(), d.plane(index)) < 1e-8 {
            return Ok((index, d.family(index)));
        }
    }
    Err(GeomError::DegenerateInput)
}

/// Family parameter of a curvature sphere given by an arbitrary
/// representative in the family plane.
pub fn family_parameter(
    fam: &crate::cyclide::CurvatureSphereFamily,
    s: &OrientedSphere,
) -> Result<f64> {
    let f = fam.frame();
    let x = s.rep().inner(&f[0]);
    let y = s.rep().inner(&f[1]);
    let z = -s.rep().inner(&f[2]);
    if z.abs() < 1e-12 * s.rep().norm_e() {
        return Err(GeomError::DegenerateInput);
    }
    Ok((y / z).atan2(x / z).rem_euclid(TAU))
}

/// One face of a cyclidic cube: a grid over two of the three coordinates.
#[derive(Debug, Clone)]
pub struct CubeFace {
    /// coordinate held fixed: 0 = family parameter, 1 = u, 2 = v
    pub fixed_axis: usize,
    pub fixed_value: f64,
    pub points: Vec<Vec<OrientedSphere>>,
}

/// A Dupin cyclidic cube: the restriction of a DC-system to a box.
#[derive(Debug, Clone)]
pub struct CyclidicCube {
    /// corners indexed by (beta, u, v) in {0,1}^3
    pub corners: [[[OrientedSphere; 2]; 2]; 2],
    pub faces: [CubeFace; 6],
    pub beta_range: [f64; 2],
    pub u_range: [f64; 2],
    pub v_range: [f64; 2],
}

/// Extracts the cube of a DC-system over a parameter box. The box must
/// avoid null evolution directions and singular curvature parameters.
pub fn cyclidic_cube(
    family: &LameFamily,
    beta_range: [f64; 2],
    u_range: [f64; 2],
    v_range: [f64; 2],
    face_samples: usize,
    p: &PointSphereComplex,
) -> Result<CyclidicCube> {
    if !family.null_parameters_in(beta_range[0], beta_range[1]).is_empty() {
        return Err(GeomError::SingularBox);
    }
    for index in [FamilyIndex::One, FamilyIndex::Two] {
        let singular = family.delta().family(index).singular_parameters(p).unwrap_or_default();
        let range = if index == FamilyIndex::One { u_range } else { v_range };
        for s in singular {
            for shift in [-TAU, 0.0, TAU] {
                let t = s + shift;
                if t >= range[0] - 1e-6 && t <= range[1] + 1e-6 {
                    return Err(GeomError::SingularBox);
                }
            }
        }
    }

    let corner = |i: usize, j: usize, k: usize| -> Result<OrientedSphere> {
        family.member_point(beta_range[i], u_range[j], v_range[k])
    };
    let corners = [
        [
            [corner(0, 0, 0)?, corner(0, 0, 1)?],
            [corner(0, 1, 0)?, corner(0, 1, 1)?],
        ],
        [
            [corner(1, 0, 0)?, corner(1, 0, 1)?],
            [corner(1, 1, 0)?, corner(1, 1, 1)?],
        ],
    ];

    let n = face_samples.max(2);
    let lin = |r: [f64; 2], k: usize| r[0] + (r[1] - r[0]) * (k as f64) / ((n - 1) as f64);
    let mut faces = Vec::with_capacity(6);
    for axis in 0..3 {
        for side in 0..2 {
            let mut points = Vec::with_capacity(n);
            for i in 0..n {
                let mut row = Vec::with_capacity(n);
                for j in 0..n {
                    let (b, u, v) = match axis {
                        0 => (beta_range[side], lin(u_range, i), lin(v_range, j)),
                        1 => (lin(beta_range, i), u_range[side], lin(v_range, j)),
                        _ => (lin(beta_range, i), lin(u_range, j), v_range[side]),
                    };
                    row.push(family.member_point(b, u, v)?);
                }
                points.push(row);
            }
            faces.push(CubeFace {
                fixed_axis: axis,
                fixed_value: match axis {
                    0 => beta_range[side],
                    1 => u_range[side],
                    _ => v_range[side],
                },
                points,
            });
        }
    }
    let faces: [CubeFace; 6] = faces.try_into().expect("six faces");
    Ok(CyclidicCube { corners, faces, beta_range, u_range, v_range })
}

impl CyclidicCube {
    /// Concircularity ratio of the four corners of each face (smallest
    /// singular value over largest of the stacked normalized lifts).
    pub fn face_concircularity(&self) -> [f64; 6] {
        let c = &self.corners;
        let quad = |a: &OrientedSphere, b: &OrientedSphere, x: &OrientedSphere, y: &OrientedSphere| {
            concircularity_ratio(&[*a, *b, *x, *y])
        };
        [
            quad(&c[0][0][0], &c[0][0][1], &c[0][1][1], &c[0][1][0]),
            quad(&c[1][0][0], &c[1][0][1], &c[1][1][1], &c[1][1][0]),
            quad(&c[0][0][0], &c[0][0][1], &c[1][0][1], &c[1][0][0]),
            quad(&c[0][1][0], &c[0][1][1], &c[1][1][1], &c[1][1][0]),
            quad(&c[0][0][0], &c[0][1][0], &c[1][1][0], &c[1][0][0]),
            quad(&c[0][0][1], &c[0][1][1], &c[1][1][1], &c[1][0][1]),
        ]
    }

    /// Concircularity of the two diagonal corner quadruples relating
    /// opposite beta-faces; meaningful when those faces are M-Lie related.
    pub fn diagonal_concircularity(&self) -> [f64; 2] {
        let c = &self.corners;
        [
            concircularity_ratio(&[c[0][0][0], c[0][1][1], c[1][0][0], c[1][1][1]]),
            concircularity_ratio(&[c[0][0][1], c[0][1][0], c[1][0][1], c[1][1][0]]),
        ]
    }
}

/// Rank-3 defect of four point spheres: the ratio of the fourth singular
/// value to the first for the stacked normalized representatives. Zero
/// means the four points are concircular.
pub fn concircularity_ratio(points: &[OrientedSphere; 4]) -> f64 {
    let vs: Vec<Vec6> = points.iter().map(|m| m.rep().scale(1.0 / m.rep().norm_e())).collect();
    linalg::singular_value_ratio(&vs, 3)
}

/// A discrete net: rows of point spheres, the first row being the initial
/// circle samples and each further row its image under one inversion.
#[derive(Debug, Clone)]
pub struct DiscreteNet {
    pub rows: Vec<Vec<OrientedSphere>>,
}

/// Builds a discrete net from circle samples and a list of M-Lie
/// inversions: row 0 is the input, row k+1 its image under inversion k.
pub fn discrete_net(
    c0: &[OrientedSphere],
    inversions: &[LinearSphereComplex],
    p: &PointSphereComplex,
) -> Result<DiscreteNet> {
    for m in c0 {
        if !m.is_point_sphere(p) {
            return Err(GeomError::PointSphereArgument);
        }
    }
    for a in inversions {
        if !a.is_m_lie(p) {
            return Err(GeomError::NotMLie);
        }
    }
    let mut rows = Vec::with_capacity(inversions.len() + 1);
    rows.push(c0.to_vec());
    for a in inversions {
        let mut row = Vec::with_capacity(c0.len());
        for m in c0 {
            row.push(OrientedSphere::new(lie_inversion(a, &m.rep())?)?);
        }
        rows.push(row);
    }
    Ok(DiscreteNet { rows })
}

impl DiscreteNet {
    /// Worst elementary-quad concircularity ratio between consecutive rows.
    pub fn max_quad_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for w in self.rows.windows(2) {
            let n = w[0].len();
            for j in 0..n {
                let jn = (j + 1) % n;
                worst = worst.max(concircularity_ratio(&[w[0][j], w[0][jn], w[1][jn], w[1][j]]));
            }
        }
        worst
    }
}
