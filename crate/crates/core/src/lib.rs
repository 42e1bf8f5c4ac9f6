//! Kinematics of a single rigid origami vertex.
//!
//! * [`geometry`]: rotation algebra, loop closure, folded states and a
//!   self-intersection test.
//! * [`rigidity`]: first- and second-order foldability at the flat state.
//! * [`symmetry`]: bracelet patterns of fold-angle equalities and the
//!   classification of the regular degree-6 vertex.
//! * [`models`]: closed-form fold-angle relations for each symmetry class.
//! * [`config_space`]: sweeps, curve tracing, admissible regions and export.

pub mod config_space;
pub mod error;
pub mod geometry;
pub mod models;
pub mod rigidity;
pub mod symmetry;

pub use config_space::{ConfigSample, CurveTrace};
pub use error::{ErrorKind, FoldError, Result};
pub use geometry::{
    closure_matrix, closure_residual, crease_rotation, folded_geometry, normalize_angle, rot_x,
    rot_z, self_intersects, CreasePattern, CreaseVector, FoldAngleVector, FoldedState, Mat3, Vec3,
    CLOSURE_TOL, GEOMETRY_TOL,
};
pub use models::{FoldMode, Model};
pub use rigidity::{
    first_order_matrix, second_order_matrix, symmetric_mode_solve, ModeSolution, VelocityVector,
};
pub use symmetry::{
    canonical_form, classify_g60, enumerate_patterns, BraceletRow, ColorPattern, FoldablePattern,
};
