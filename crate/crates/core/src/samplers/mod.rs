//! Random generation by peeling: Boltzmann polygons, half-plane and plane
//! hyperbolic triangulations, and uniform small triangulations.

pub mod laws;
pub mod rng;
pub mod uniform;
pub mod frontier;

pub use frontier::{
    sample_ball, sample_boltzmann, sample_boltzmann_bounded, Model, PeelFrontier, SamplerContext,
    SamplerError, StepKind, StepRecord,
};
pub use laws::{HalfPlaneCase, HalfPlaneLaw, HalfPlaneVariant};
pub use rng::{stream, SamplerRng};
pub use uniform::{sample_uniform_small, UniformCorpus};
