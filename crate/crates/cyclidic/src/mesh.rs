//! Quad meshes sampled along curvature lines, with OBJ and JSON export.
//!
//! Vertices flagged as the point at infinity are omitted from the mesh;
//! quads touching them are dropped and counted in the metadata. Output
//! ordering is row-major and fully deterministic.

use serde::{Deserialize, Serialize};
use std::io::Write;

use crate::cyclide::EvolvedGrid;
use crate::error::{GeomError, Result};
use crate::euclid::point_position;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct MeshMetadata {
    /// evolution parameters skipped as singular
    pub singular_parameters: Vec<f64>,
    pub family_type: Option<String>,
    pub member_index: Option<usize>,
    pub dropped_vertices: usize,
    pub dropped_quads: usize,
}

/// A curvature-line sampled quad mesh.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct QuadMesh {
    pub vertices: Vec<[f64; 3]>,
    /// zero-based vertex indices, row-major orientation
    pub quads: Vec<[u32; 4]>,
    /// curvature-line parameters (u, t) per vertex
    pub params: Vec<[f64; 2]>,
    pub metadata: MeshMetadata,
}

impl QuadMesh {
    /// Assembles a mesh from an evolved grid. `wrap_u` and `wrap_t` close
    /// the strip in the respective direction.
    pub fn from_grid(grid: &EvolvedGrid, wrap_u: bool, wrap_t: bool) -> Result<QuadMesh> {
        let rows = grid.rows.len();
        if rows == 0 {
            return Err(GeomError::InvalidVector);
        }
        let cols = grid.r_params.len();
        let mut vertices = Vec::new();
        let mut params = Vec::new();
        let mut index: Vec<Vec<Option<u32>>> = Vec::with_capacity(rows);
        let mut dropped_vertices = 0;
        for row in &grid.rows {
            let mut row_idx = Vec::with_capacity(cols);
            for (j, m) in row.points.iter().enumerate() {
                match point_position(m)? {
                    Some(x) => {
                        row_idx.push(Some(vertices.len() as u32));
                        vertices.push(x);
                        params.push([grid.r_params[j], row.t]);
                    }
                    None => {
                        row_idx.push(None);
                        dropped_vertices += 1;
                    }
                }
            }
            index.push(row_idx);
        }
        let mut quads = Vec::new();
        let mut dropped_quads = 0;
        let row_limit = if wrap_t { rows } else { rows.saturating_sub(1) };
        let col_limit = if wrap_u { cols } else { cols.saturating_sub(1) };
        for i in 0..row_limit {
            let i1 = (i + 1) % rows;
            for j in 0..col_limit {
                let j1 = (j + 1) % cols;
                match (index[i][j], index[i][j1], index[i1][j1], index[i1][j]) {
                    (Some(a), Some(b), Some(c), Some(d)) => quads.push([a, b, c, d]),
                    _ => dropped_quads += 1,
                }
            }
        }
        Ok(QuadMesh {
            vertices,
            quads,
            params,
            metadata: MeshMetadata {
                singular_parameters: grid.skipped.clone(),
                dropped_vertices,
                dropped_quads,
                ..MeshMetadata::default()
            },
        })
    }

    /// Writes Wavefront OBJ: `v x y z` lines, then `f i j k l` (1-based).
    pub fn write_obj<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        for v in &self.vertices {
            writeln!(w, "v {} {} {}", v[0], v[1], v[2])?;
        }
        for q in &self.quads {
            writeln!(w, "f {} {} {} {}", q[0] + 1, q[1] + 1, q[2] + 1, q[3] + 1)?;
        }
        Ok(())
    }

    pub fn to_obj_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_obj(&mut buf).expect("in-memory write");
        String::from_utf8(buf).expect("obj output is ascii")
    }

    pub fn to_json(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(self)
    }

    pub fn from_json(s: &str) -> serde_json::Result<QuadMesh> {
        serde_json::from_str(s)
    }
}

/// Writes polylines (point chains) as OBJ `v`/`l` elements.
pub fn write_polylines_obj<W: Write>(mut w: W, lines: &[Vec<[f64; 3]>]) -> std::io::Result<()> {
    let mut offset = 1usize;
    for line in lines {
        for v in line {
            writeln!(w, "v {} {} {}", v[0], v[1], v[2])?;
        }
        if line.len() >= 2 {
            write!(w, "l")?;
            for k in 0..line.len() {
                write!(w, " {}", offset + k)?;
            }
            writeln!(w)?;
        }
        offset += line.len();
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclide::EvolvedRow;
    use crate::euclid::{lift, EuclidSphere};
    use crate::kernel::OrientedSphere;

    fn pt(x: f64, y: f64, z: f64) -> OrientedSphere {
        lift(&EuclidSphere::point([x, y, z]))
    }

    fn tiny_grid() -> EvolvedGrid {
        EvolvedGrid {
            r_params: vec![0.0, 1.0],
            rows: vec![
                EvolvedRow { t: 0.0, points: vec![pt(0.0, 0.0, 0.0), pt(1.0, 0.0, 0.0)] },
                EvolvedRow { t: 1.0, points: vec![pt(0.0, 1.0, 0.0), pt(1.0, 1.0, 0.0)] },
            ],
            skipped: vec![],
        }
    }

    #[test]
    fn two_by_two_grid_gives_one_quad() {
        let mesh = QuadMesh::from_grid(&tiny_grid(), false, false).unwrap();
        assert_eq!(mesh.vertices.len(), 4);
        assert_eq!(mesh.quads, vec![[0, 1, 3, 2]]);
        let obj = mesh.to_obj_string();
        assert_eq!(obj, "v 0 0 0\nv 1 0 0\nv 0 1 0\nv 1 1 0\nf 1 2 4 3\n");
    }

    #[test]
    fn infinity_vertices_are_dropped_with_their_quads() {
        let mut grid = tiny_grid();
        grid.rows[1].points[1] =
            OrientedSphere::new(crate::euclid::infinity_rep()).unwrap();
        let mesh = QuadMesh::from_grid(&grid, false, false).unwrap();
        assert_eq!(mesh.vertices.len(), 3);
        assert!(mesh.quads.is_empty());
        assert_eq!(mesh.metadata.dropped_vertices, 1);
        assert_eq!(mesh.metadata.dropped_quads, 1);
    }

    #[test]
    fn json_round_trip() {
        let mesh = QuadMesh::from_grid(&tiny_grid(), false, false).unwrap();
        let json = mesh.to_json().unwrap();
        let back = QuadMesh::from_json(&json).unwrap();
        assert_eq!(mesh, back);
    }

    #[test]
    fn polyline_obj_format() {
        let mut buf = Vec::new();
        write_polylines_obj(&mut buf, &[vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0]]]).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "v 0 0 0\nv 1 0 0\nl 1 2\n");
    }
}
