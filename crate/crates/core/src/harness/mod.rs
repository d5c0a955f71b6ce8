//! Experiment specifications, multi-seed runs and result files.

pub mod emit;
pub mod run;
pub mod spec;

pub use emit::{emit_csv, emit_hub_report, emit_table1, format_real, write_outputs};
pub use run::{
    run_experiment, run_grow, run_hub, run_table1, AggregateRow, ExperimentOutput, GrowReport, HubReport, RunSummary,
    Table1, Table1Cell, UrnReport,
};
pub use spec::{parse_spec, parse_spec_with_overrides, ExperimentKind, ExperimentSpec};
