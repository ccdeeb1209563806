//! Computational kernel for Lie sphere geometry in the hexaspherical model.
//!
//! The crate constructs Dupin cyclides and Lame families of Dupin cyclidic
//! systems by evolving initial circles and cyclides through one-parameter
//! families of Lie inversions, and samples the results as curvature-line
//! parametrized quad meshes.
//!
//! Module map:
//! - [`vec6`], [`linalg`]: the (4,2) inner-product space and subspace tools
//! - [`kernel`]: spheres, linear sphere complexes, Lie inversions, angles
//! - [`incidence`]: circles as (2,1)-splittings, Moebius sphere pencils
//! - [`euclid`]: lifts of Euclidean spheres/planes/points and projections
//! - [`cyclide`]: Dupin cyclides, curvature sphere families, evolution maps
//! - [`dcsystem`]: Ribaucour pairs, Lame families, space form types
//! - [`apps`]: blending, subdivision, cyclidic cubes, discrete nets
//! - [`mesh`]: quad mesh assembly and OBJ/JSON export
//! - [`verify`]: residual suites shared by tests and the CLI check verb

pub mod apps;
pub mod cyclide;
pub mod dcsystem;
pub mod error;
pub mod euclid;
pub mod incidence;
pub mod kernel;
pub mod linalg;
pub mod mesh;
pub mod vec6;
pub mod verify;

pub use error::{GeomError, Result};
pub use kernel::{LinearSphereComplex, OrientedSphere, PointSphereComplex};
pub use vec6::Vec6;
