//! Triangulations with boundaries: exact enumeration, peeling explorations
//! and samplers for hyperbolic and subcritical local limits.

pub mod ball;
pub mod code;
pub mod enumeration;
pub mod experiments;
pub mod explorer;
pub mod map;
pub mod oracle;
pub mod peeling;
pub mod samplers;
pub mod tri;

pub use code::{canonical_code, rooted_isomorphic, RootedCode};
pub use map::{HalfEdgeMap, MapError};
pub use tri::{Boundary, TriangulationWithHoles, Violation};
