//! Simulation and analysis of preferential-attachment trees in which each new
//! vertex draws `d` candidates and attaches to the one of largest (or
//! smallest) degree.
//!
//! * [`tree`]: the growing tree and its one-step transition.
//! * [`observables`]: O(1) tracking of the maximum degree, its multiplicity
//!   and the leading vertex, plus scale-function diagnostics.
//! * [`theory`]: step law, fixed-point limit, equivalent urn and an exact
//!   small-n oracle.
//! * [`harness`]: experiment specs, multi-seed orchestration and CSV output.
//!
//! Independent runs are spread over threads with rayon when the `parallel`
//! feature (on by default) is enabled; see [`par`].

pub mod config;
pub mod error;
pub mod harness;
pub mod observables;
pub mod par;
pub mod stats;
pub mod theory;
pub mod trajectory;
pub mod tree;

pub use config::{Attachment, ChoiceRule, ModelConfig, TieBreak};
pub use error::{Error, Result, SpecError};
pub use observables::{drift_check_d2, scale_functions, scaled_metric, DiagnosticScales, Drift, MaxStats};
pub use theory::{
    attachment_probability, choice_intensity, exact_distribution, fixed_point_map, predicted_max, run_urn,
    solve_x_star, ExactDistribution, FixedPointResult, UrnState,
};
pub use trajectory::{run_growth, run_growth_with_state, Simulation, Snapshot, StepObserver, TrajectoryRecord};
pub use tree::{StepOutcome, TreeState, VertexId};
