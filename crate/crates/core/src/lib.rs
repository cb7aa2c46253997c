//! Exact scheduling of one or two reclaimers serving two opposed stockyard
//! pads that share a single rail.
//!
//! The crate provides optimal and approximate solvers for the variants with
//! and without a fixed reclaim order, lower bounds, brute-force reference
//! solvers for small instances, instance generators, a schedule validator and
//! an SVG time-space renderer.

pub mod bounds;
pub mod generators;
pub mod model;
pub mod oracles;
pub mod positioning;
pub mod precedence_solvers;
pub mod preemptive_solver;
pub mod probe;
pub mod render;
pub mod single_solver;
pub mod two_solver;

pub use model::{
    makespan, q, qr, Direction, Instance, Mode, Pad, Q, ReclaimAssignment, Reclaimer, ReclaimerPath,
    Schedule, SolveResult, Stockpile, Violation, ViolationKind,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("time {t} outside path domain [0, {end}]")]
    OutOfDomain { t: Q, end: Q },
    #[error("unsupported variant: {0}")]
    Unsupported(String),
    #[error("resource limit: {0}")]
    Resource(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
