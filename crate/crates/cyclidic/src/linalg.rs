//! Subspace utilities over the indefinite inner product.
//!
//! Signatures are read off the eigenvalues of Gram matrices; pseudo-orthonormal
//! bases diagonalize the induced form to diag(+1,..,-1,..). Ranks, nullspaces
//! and span intersections go through SVD of the coordinate matrices.

use nalgebra::{DMatrix, DVector};

use crate::error::{GeomError, Result};
use crate::vec6::Vec6;

/// Relative eigenvalue threshold for signature decisions.
const SIG_EPS: f64 = 1e-9;

/// Signature of an induced form: positive, negative, null eigenvalue counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
    pub null: usize,
}

impl Signature {
    pub fn is(&self, positive: usize, negative: usize) -> bool {
        self.positive == positive && self.negative == negative && self.null == 0
    }
}

pub fn gram(basis: &[Vec6]) -> DMatrix<f64> {
    let n = basis.len();
    DMatrix::from_fn(n, n, |i, j| basis[i].inner(&basis[j]))
}

/// Signature of the span of `basis` under the ambient form. The null count
/// also absorbs linear dependencies of the basis itself.
pub fn signature(basis: &[Vec6]) -> Signature {
    let g = gram(basis);
    let eig = g.symmetric_eigenvalues();
    let scale: f64 = eig.iter().map(|l| l.abs()).sum::<f64>().max(1e-300);
    let tol = SIG_EPS * scale;
    let mut sig = Signature { positive: 0, negative: 0, null: 0 };
    for l in eig.iter() {
        if *l > tol {
            sig.positive += 1;
        } else if *l < -tol {
            sig.negative += 1;
        } else {
            sig.null += 1;
        }
    }
    sig
}

/// Pseudo-orthonormal basis of a nondegenerate span: returns vectors with
/// Gram matrix diag(+1,...,+1,-1,...,-1), spacelike directions first.
/// Eigenvector signs are fixed deterministically.
pub fn pseudo_orthonormal_basis(basis: &[Vec6]) -> Result<Vec<Vec6>> {
    let n = basis.len();
    let g = gram(basis);
    let eig = g.clone().symmetric_eigen();
    let scale: f64 = eig.eigenvalues.iter().map(|l| l.abs()).sum::<f64>().max(1e-300);
    let tol = SIG_EPS * scale;

    let mut pairs: Vec<(f64, DVector<f64>)> = (0..n)
        .map(|k| (eig.eigenvalues[k], eig.eigenvectors.column(k).into_owned()))
        .collect();
    // spacelike (positive) first, each group by decreasing magnitude
    pairs.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());

    let mut out = Vec::with_capacity(n);
    for (lambda, mut coeffs) in pairs {
        if lambda.abs() <= tol {
            return Err(GeomError::DegenerateSpan);
        }
        // deterministic sign: first significant coefficient positive
        for c in coeffs.iter() {
            if c.abs() > 1e-12 {
                if *c < 0.0 {
                    coeffs.neg_mut();
                }
                break;
            }
        }
        let mut v = Vec6::ZERO;
        for (j, b) in basis.iter().enumerate() {
            v = v + b.scale(coeffs[j]);
        }
        out.push(v.scale(1.0 / lambda.abs().sqrt()));
    }
    Ok(out)
}

fn coord_matrix(vectors: &[Vec6]) -> DMatrix<f64> {
    DMatrix::from_fn(6, vectors.len(), |i, j| vectors[j].0[i])
}

/// Rank of the coordinate span with a relative singular-value cutoff.
pub fn rank(vectors: &[Vec6], rel_tol: f64) -> usize {
    let m = coord_matrix(vectors);
    let svd = m.svd(false, false);
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    if smax == 0.0 {
        return 0;
    }
    svd.singular_values.iter().filter(|s| **s > rel_tol * smax).count()
}

/// Ratio of the k-th singular value to the largest, for rank-deficiency
/// tests such as concircularity (rank <= 3 of four lifted points).
pub fn singular_value_ratio(vectors: &[Vec6], k: usize) -> f64 {
    let m = coord_matrix(vectors);
    let svd = m.svd(false, false);
    let mut sv: Vec<f64> = svd.singular_values.iter().cloned().collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
    if sv.is_empty() || sv[0] == 0.0 || k >= sv.len() {
        return 0.0;
    }
    sv[k] / sv[0]
}

/// Basis of the metric-orthogonal complement of the span of `vectors`.
pub fn orthogonal_complement(vectors: &[Vec6]) -> Vec<Vec6> {
    // <x, v> = 0 is a Euclidean nullspace condition on the metric-flipped rows
    let k = vectors.len();
    let m = DMatrix::from_fn(k, 6, |i, j| {
        let sign = if j >= 4 { -1.0 } else { 1.0 };
        sign * vectors[i].0[j]
    });
    nullspace(&m, 1e-12)
}

/// Orthonormal (Euclidean) basis of the nullspace of `m`, via SVD.
/// The matrix is zero-padded to at least square so the full right factor
/// is available (nalgebra computes the thin SVD).
pub fn nullspace(m: &DMatrix<f64>, rel_tol: f64) -> Vec<Vec6> {
    let cols = m.ncols();
    debug_assert!(cols <= 6);
    let padded = pad_rows(m);
    let svd = padded.svd(false, true);
    let vt = svd.v_t.expect("svd with v requested");
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let tol = if smax == 0.0 { rel_tol } else { rel_tol * smax };
    let mut out = Vec::new();
    for i in 0..cols {
        let s = if i < svd.singular_values.len() { svd.singular_values[i] } else { 0.0 };
        if s <= tol {
            let row = vt.row(i);
            let mut c = [0.0; 6];
            for j in 0..cols.min(6) {
                c[j] = row[j];
            }
            out.push(Vec6(c));
        }
    }
    out
}

fn pad_rows(m: &DMatrix<f64>) -> DMatrix<f64> {
    if m.nrows() >= m.ncols() {
        return m.clone();
    }
    let mut out = DMatrix::zeros(m.ncols(), m.ncols());
    out.view_mut((0, 0), (m.nrows(), m.ncols())).copy_from(m);
    out
}

/// Nullspace of the 6xk matrix whose columns are `columns`; results are
/// coefficient vectors of length k.
pub fn column_nullspace(columns: &[Vec6], rel_tol: f64) -> Vec<Vec<f64>> {
    let k = columns.len();
    let m = pad_rows(&coord_matrix(columns));
    let svd = m.svd(false, true);
    let vt = svd.v_t.expect("svd with v requested");
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let tol = if smax == 0.0 { rel_tol } else { rel_tol * smax };
    let mut out = Vec::new();
    for i in 0..k {
        let s = if i < svd.singular_values.len() { svd.singular_values[i] } else { 0.0 };
        if s <= tol {
            out.push(vt.row(i).iter().cloned().collect());
        }
    }
    out
}

/// Basis of the intersection of two coordinate spans.
pub fn span_intersection(a: &[Vec6], b: &[Vec6]) -> Vec<Vec6> {
    // x = A ca = B cb  <=>  [A | -B] (ca, cb) = 0
    let k = a.len() + b.len();
    let m = pad_rows(&DMatrix::from_fn(6, k, |i, j| {
        if j < a.len() {
            a[j].0[i]
        } else {
            -b[j - a.len()].0[i]
        }
    }));
    let svd = m.svd(false, true);
    let vt = svd.v_t.expect("svd with v requested");
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let tol = 1e-10 * smax.max(1e-300);
    let mut out = Vec::new();
    for i in 0..k {
        let s = if i < svd.singular_values.len() { svd.singular_values[i] } else { 0.0 };
        if s <= tol {
            let coeff = vt.row(i);
            let mut v = Vec6::ZERO;
            for (j, av) in a.iter().enumerate() {
                v = v + av.scale(coeff[j]);
            }
            if v.norm_e() > 1e-9 {
                out.push(v.scale(1.0 / v.norm_e()));
            }
        }
    }
    out
}

/// Metric-orthogonal projection of `v` onto a nondegenerate span.
pub fn project_onto(v: &Vec6, basis: &[Vec6]) -> Result<Vec6> {
    let g = gram(basis);
    let rhs = DVector::from_fn(basis.len(), |i, _| v.inner(&basis[i]));
    let sol = g.lu().solve(&rhs).ok_or(GeomError::DegenerateSpan)?;
    let mut out = Vec6::ZERO;
    for (i, b) in basis.iter().enumerate() {
        out = out + b.scale(sol[i]);
    }
    Ok(out)
}

/// Largest principal angle between two spans of equal dimension (radians).
pub fn max_principal_angle(a: &[Vec6], b: &[Vec6]) -> f64 {
    let qa = euclidean_orthonormal(a);
    let qb = euclidean_orthonormal(b);
    let ma = coord_matrix(&qa);
    let mb = coord_matrix(&qb);
    let prod = ma.transpose() * mb;
    let svd = prod.svd(false, false);
    let smin = svd.singular_values.iter().cloned().fold(f64::INFINITY, f64::min);
    smin.clamp(-1.0, 1.0).acos()
}

/// Euclidean orthonormalization (for principal angles and residuals).
pub fn euclidean_orthonormal(vectors: &[Vec6]) -> Vec<Vec6> {
    let mut out: Vec<Vec6> = Vec::new();
    for v in vectors {
        let mut w = *v;
        for u in &out {
            let d: f64 = (0..6).map(|i| w.0[i] * u.0[i]).sum();
            w = w - u.scale(d);
        }
        let n = w.norm_e();
        if n > 1e-12 {
            out.push(w.scale(1.0 / n));
        }
    }
    out
}

/// Euclidean distance from the (normalized) vector to a span.
pub fn distance_to_span(v: &Vec6, basis: &[Vec6]) -> f64 {
    let q = euclidean_orthonormal(basis);
    let vn = v.scale(1.0 / v.norm_e());
    let mut res = vn;
    for u in &q {
        let d: f64 = (0..6).map(|i| res.0[i] * u.0[i]).sum();
        res = res - u.scale(d);
    }
    res.norm_e()
}
