//! Peeling explorations of fixed triangulations: step types, diagrams,
//! peeling algorithms, boundary events and diagram surgery.

pub mod diagram;
pub mod events;
pub mod explore;
pub mod surgery;

use thiserror::Error;

pub use diagram::{CanonicalDiagram, Decoded, DiagramEdge, EdgeLabel, PeelingDiagram, StepType, TypeCounts};
pub use events::{classify_boundary_event, classify_event, classify_good_bad, BoundaryEvent, StepEvent, Verdict};
pub use explore::{
    filled_in_explore, frontier_distance, peel_explore, rebuild, AlgoView, Algorithm, ExplorationTrace,
    PeelResult, PeelingAlgorithm, TraceStep,
};
pub use surgery::{diagram_surgery, root_split, satisfies_s_r, surgery_injectivity, InjectivityReport};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PeelError {
    #[error("inconsistent diagram: {0}")]
    InconsistentDiagram(String),
    #[error("the algorithm chose {0}, which is not a hole side")]
    AlgorithmUndefined(usize),
    #[error("the triangulation has no boundary to start from")]
    NoBoundary,
    #[error("exploration out of step with the triangulation: {0}")]
    Mismatch(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("{0}")]
    Domain(String),
}
