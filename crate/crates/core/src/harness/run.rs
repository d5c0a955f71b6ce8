//! Multi-seed orchestration for every experiment kind.

use std::time::Instant;

use crate::config::{Attachment, ChoiceRule, ModelConfig};
use crate::error::Result;
use crate::par::map_seeds;
use crate::stats;
use crate::theory::{exact_distribution, run_urn_at, solve_x_star, ExactDistribution, FixedPointResult, UrnState, DEFAULT_TOL};
use crate::trajectory::{run_growth_with_state, Snapshot};
use crate::tree::{TreeState, VertexId};

use super::spec::{ExperimentKind, ExperimentSpec};

/// Outcome of one seed of a growth experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub seed: u64,
    pub final_max: u32,
    pub final_count: u64,
    /// One entry per checkpoint, carrying the scaled metric and the leader.
    pub snapshots: Vec<Snapshot>,
    pub change_count: u64,
    pub last_change_step: usize,
    pub wall_seconds: f64,
}

impl RunSummary {
    pub fn leader_trace(&self) -> Vec<VertexId> {
        self.snapshots.iter().map(|s| s.leader).collect()
    }
}

/// Cross-seed statistics of a scalar at one checkpoint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AggregateRow {
    pub n: usize,
    pub median: f64,
    pub min: f64,
    pub max: f64,
}

impl AggregateRow {
    fn from_values(n: usize, values: &[f64]) -> Self {
        AggregateRow {
            n,
            median: stats::median(values),
            min: stats::min(values),
            max: stats::max(values),
        }
    }
}

#[derive(Debug, Clone)]
pub struct GrowReport {
    pub summaries: Vec<RunSummary>,
    /// Median/min/max of the scaled metric per checkpoint.
    pub aggregate: Vec<AggregateRow>,
    /// Final tree of the first seed, when requested.
    pub first_tree: Option<TreeState>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct UrnRun {
    pub seed: u64,
    /// `(steps, black / steps)` per checkpoint.
    pub points: Vec<(u64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct UrnReport {
    pub runs: Vec<UrnRun>,
    pub aggregate: Vec<AggregateRow>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table1Cell {
    pub attachment: Attachment,
    pub rule: ChoiceRule,
    /// Median, min and max of `M` across seeds at each checkpoint; the last
    /// entry is at `n_steps`.
    pub by_checkpoint: Vec<AggregateRow>,
    pub predicted_order: &'static str,
    /// Leading term of the predicted order at `n_steps` (constants unknown
    /// for all but the max-choice preferential cell).
    pub predicted_leading: f64,
}

impl Table1Cell {
    pub fn final_row(&self) -> &AggregateRow {
        self.by_checkpoint.last().expect("at least one checkpoint")
    }

    pub fn median_at(&self, n: usize) -> Option<f64> {
        self.by_checkpoint.iter().find(|r| r.n == n).map(|r| r.median)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table1 {
    pub d: u32,
    pub n_steps: usize,
    /// Preferential row first, then uniform; max, none, min within a row.
    pub cells: Vec<Table1Cell>,
}

impl Table1 {
    pub fn cell(&self, attachment: Attachment, rule: ChoiceRule) -> &Table1Cell {
        self.cells
            .iter()
            .find(|c| c.attachment == attachment && c.rule == rule)
            .expect("all six cells present")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HubRow {
    pub seed: u64,
    pub leaders: Vec<VertexId>,
    pub last_change_step: usize,
    pub change_count: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HubReport {
    pub checkpoints: Vec<usize>,
    pub rows: Vec<HubRow>,
    /// Per checkpoint: fraction of seeds whose leader never changes after it.
    pub fraction_stable: Vec<f64>,
}

impl HubReport {
    /// Fraction of seeds with the same leader at checkpoints `a` and `b`.
    pub fn fraction_same_leader(&self, a: usize, b: usize) -> Option<f64> {
        let ia = self.checkpoints.iter().position(|&c| c == a)?;
        let ib = self.checkpoints.iter().position(|&c| c == b)?;
        let same = self.rows.iter().filter(|r| r.leaders[ia] == r.leaders[ib]).count();
        Some(same as f64 / self.rows.len() as f64)
    }
}

#[derive(Debug, Clone)]
pub enum ExperimentOutput {
    Grow(GrowReport),
    Urn(UrnReport),
    XStar(FixedPointResult),
    Exact(ExactDistribution),
    Table1(Table1),
    Hub(HubReport),
}

pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentOutput> {
    Ok(match spec.kind {
        ExperimentKind::Grow => ExperimentOutput::Grow(run_grow(spec, false)?),
        ExperimentKind::Urn => ExperimentOutput::Urn(run_urn_experiment(spec)?),
        ExperimentKind::XStar => ExperimentOutput::XStar(solve_x_star(spec.model.d, DEFAULT_TOL)?),
        ExperimentKind::Exact => ExperimentOutput::Exact(exact_distribution(spec.n_steps as u32, &spec.model)?),
        ExperimentKind::Table1 => ExperimentOutput::Table1(run_table1(spec)?),
        ExperimentKind::Hub => ExperimentOutput::Hub(run_hub(spec)?),
    })
}

/// Runs every seed of `spec.model` to `spec.n_steps`; results are ordered as
/// `spec.seeds` regardless of scheduling.
pub fn run_grow(spec: &ExperimentSpec, keep_first_tree: bool) -> Result<GrowReport> {
    let first = spec.seeds.first().copied();
    let runs = map_seeds(&spec.seeds, |seed| {
        run_one(spec.model.with_seed(seed), spec.n_steps, &spec.checkpoints, keep_first_tree && Some(seed) == first)
    });
    let mut summaries = Vec::with_capacity(runs.len());
    let mut first_tree = None;
    for run in runs {
        let (summary, tree) = run?;
        if tree.is_some() {
            first_tree = tree;
        }
        summaries.push(summary);
    }
    let aggregate = aggregate_snapshots(&spec.checkpoints, &summaries, |s| s.scaled_metric);
    Ok(GrowReport {
        summaries,
        aggregate,
        first_tree,
    })
}

fn run_one(config: ModelConfig, n_steps: usize, checkpoints: &[usize], keep_tree: bool) -> Result<(RunSummary, Option<TreeState>)> {
    let started = Instant::now();
    let (record, tree) = run_growth_with_state(config, n_steps, checkpoints, &mut [])?;
    let stats = record.final_stats;
    let summary = RunSummary {
        seed: config.seed,
        final_max: stats.max_degree,
        final_count: stats.max_count,
        snapshots: record.snapshots,
        change_count: stats.change_count,
        last_change_step: stats.last_change_step,
        wall_seconds: started.elapsed().as_secs_f64(),
    };
    Ok((summary, keep_tree.then_some(tree)))
}

fn aggregate_snapshots(checkpoints: &[usize], summaries: &[RunSummary], value: impl Fn(&Snapshot) -> f64) -> Vec<AggregateRow> {
    checkpoints
        .iter()
        .enumerate()
        .map(|(i, &n)| {
            let values: Vec<f64> = summaries.iter().map(|s| value(&s.snapshots[i])).collect();
            AggregateRow::from_values(n, &values)
        })
        .collect()
}

fn run_urn_experiment(spec: &ExperimentSpec) -> Result<UrnReport> {
    let checkpoints: Vec<u64> = spec.checkpoints.iter().map(|&c| c as u64).collect();
    let runs = map_seeds(&spec.seeds, |seed| {
        run_urn_at(UrnState::default(), spec.model.d, &checkpoints, seed).map(|t| UrnRun { seed, points: t.points })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let aggregate = spec
        .checkpoints
        .iter()
        .enumerate()
        .map(|(i, &n)| {
            let values: Vec<f64> = runs.iter().map(|r| r.points[i].1).collect();
            AggregateRow::from_values(n, &values)
        })
        .collect();
    Ok(UrnReport { runs, aggregate })
}

const TABLE1_CELLS: [(Attachment, ChoiceRule, &str); 6] = [
    (Attachment::Preferential, ChoiceRule::Max, "4n/ln n"),
    (Attachment::Preferential, ChoiceRule::None, "c*sqrt(n)"),
    (Attachment::Preferential, ChoiceRule::Min, "ln ln n/ln 2 + O(1)"),
    (Attachment::Uniform, ChoiceRule::Max, "O(ln n)"),
    (Attachment::Uniform, ChoiceRule::None, "O(ln n)"),
    (Attachment::Uniform, ChoiceRule::Min, "O(ln ln n)"),
];

fn leading_term(attachment: Attachment, rule: ChoiceRule, n: usize) -> f64 {
    let n = n as f64;
    match (attachment, rule) {
        (Attachment::Preferential, ChoiceRule::Max) => 4.0 * n / n.ln(),
        (Attachment::Preferential, ChoiceRule::None) => n.sqrt(),
        (Attachment::Preferential, ChoiceRule::Min) => n.ln().ln() / 2f64.ln(),
        (Attachment::Uniform, ChoiceRule::Min) => n.ln().ln(),
        (Attachment::Uniform, _) => n.ln(),
    }
}

/// Median maximum degree for the six attachment/choice combinations with
/// `spec.model.d` draws, at every checkpoint and at `spec.n_steps`.
pub fn run_table1(spec: &ExperimentSpec) -> Result<Table1> {
    let mut checkpoints = spec.checkpoints.clone();
    if checkpoints.last() != Some(&spec.n_steps) {
        checkpoints.push(spec.n_steps);
    }
    let mut cells = Vec::with_capacity(TABLE1_CELLS.len());
    for (attachment, rule, order) in TABLE1_CELLS {
        let config = ModelConfig::new(spec.model.d, rule, attachment, 0)?;
        let runs = map_seeds(&spec.seeds, |seed| run_one(config.with_seed(seed), spec.n_steps, &checkpoints, false))
            .into_iter()
            .map(|r| r.map(|(s, _)| s))
            .collect::<Result<Vec<_>>>()?;
        cells.push(Table1Cell {
            attachment,
            rule,
            by_checkpoint: aggregate_snapshots(&checkpoints, &runs, |s| s.max_degree as f64),
            predicted_order: order,
            predicted_leading: leading_term(attachment, rule, spec.n_steps),
        });
    }
    Ok(Table1 {
        d: spec.model.d,
        n_steps: spec.n_steps,
        cells,
    })
}

pub fn run_hub(spec: &ExperimentSpec) -> Result<HubReport> {
    let grow = run_grow(spec, false)?;
    let rows: Vec<HubRow> = grow
        .summaries
        .iter()
        .map(|s| HubRow {
            seed: s.seed,
            leaders: s.leader_trace(),
            last_change_step: s.last_change_step,
            change_count: s.change_count,
        })
        .collect();
    let fraction_stable = spec
        .checkpoints
        .iter()
        .map(|&c| rows.iter().filter(|r| r.last_change_step <= c).count() as f64 / rows.len() as f64)
        .collect();
    Ok(HubReport {
        checkpoints: spec.checkpoints.clone(),
        rows,
        fraction_stable,
    })
}
