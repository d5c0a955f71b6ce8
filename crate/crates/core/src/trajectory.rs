//! Driving a single run from `P_1` to `P_n` and recording checkpoints.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::ModelConfig;
use crate::error::{Error, Result};
use crate::observables::{scaled_metric, MaxStats};
use crate::tree::{StepOutcome, TreeState, VertexId, MAX_EDGES};

/// The RNG behind every run; seeded from the 64-bit run seed.
pub type RunRng = ChaCha8Rng;

pub fn run_rng(seed: u64) -> RunRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Hook invoked after every growth step.
pub trait StepObserver {
    /// `before` holds the statistics of the pre-step tree.
    fn on_step(&mut self, before: &MaxStats, outcome: &StepOutcome, after: &MaxStats, state: &TreeState);
}

impl<F> StepObserver for F
where
    F: FnMut(&MaxStats, &StepOutcome, &MaxStats, &TreeState),
{
    fn on_step(&mut self, before: &MaxStats, outcome: &StepOutcome, after: &MaxStats, state: &TreeState) {
        self(before, outcome, after, state)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Snapshot {
    pub n: usize,
    pub max_degree: u32,
    pub max_count: u64,
    pub leader: VertexId,
    pub change_count: u64,
    pub last_change_step: usize,
    pub scaled_metric: f64,
}

impl Snapshot {
    fn capture(stats: &MaxStats, d: u32) -> Self {
        Snapshot {
            n: stats.n,
            max_degree: stats.max_degree,
            max_count: stats.max_count,
            leader: stats.leader,
            change_count: stats.change_count,
            last_change_step: stats.last_change_step,
            scaled_metric: scaled_metric(stats.n, stats.max_degree, d).expect("d >= 1, n >= 1"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryRecord {
    pub config: ModelConfig,
    pub snapshots: Vec<Snapshot>,
    pub final_stats: MaxStats,
}

/// A tree, its statistics and its RNG stream, advanced one step at a time.
pub struct Simulation {
    config: ModelConfig,
    state: TreeState,
    stats: MaxStats,
    rng: RunRng,
}

impl Simulation {
    pub fn new(config: ModelConfig) -> Self {
        Self::with_capacity(config, 0)
    }

    pub fn with_capacity(config: ModelConfig, edges: usize) -> Self {
        Simulation {
            config,
            state: TreeState::with_capacity(edges),
            stats: MaxStats::new(),
            rng: run_rng(config.seed),
        }
    }

    pub fn config(&self) -> &ModelConfig {
        &self.config
    }

    pub fn state(&self) -> &TreeState {
        &self.state
    }

    pub fn stats(&self) -> &MaxStats {
        &self.stats
    }

    pub fn into_state(self) -> TreeState {
        self.state
    }

    #[inline]
    pub fn step(&mut self) -> StepOutcome {
        let outcome = self.state.grow_step(&self.config, &mut self.rng);
        self.stats.update(&outcome, self.state.histogram());
        outcome
    }

    /// Grows until the tree has `edges` edges.
    pub fn advance_to(&mut self, edges: usize) {
        while self.state.edges() < edges {
            self.step();
        }
    }

    pub fn snapshot(&self) -> Snapshot {
        Snapshot::capture(&self.stats, self.config.effective_draws())
    }
}

/// Checks that checkpoints are strictly increasing and lie in `[1, n_steps]`.
pub fn validate_checkpoints(n_steps: usize, checkpoints: &[usize]) -> Result<()> {
    if n_steps == 0 || n_steps > MAX_EDGES {
        return Err(Error::InvalidArgument(format!("n_steps must be in [1, 2^31], got {n_steps}")));
    }
    if checkpoints.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("checkpoints must be strictly increasing".into()));
    }
    if let (Some(&first), Some(&last)) = (checkpoints.first(), checkpoints.last()) {
        if first == 0 || last > n_steps {
            return Err(Error::InvalidArgument(format!(
                "checkpoints must lie in [1, {n_steps}]"
            )));
        }
    }
    Ok(())
}

/// Grows `P_{n_steps}` from `P_1`, calling every observer after each step and
/// snapshotting the statistics at each checkpoint.
pub fn run_growth(
    config: ModelConfig,
    n_steps: usize,
    checkpoints: &[usize],
    observers: &mut [&mut dyn StepObserver],
) -> Result<TrajectoryRecord> {
    run_growth_with_state(config, n_steps, checkpoints, observers).map(|(record, _)| record)
}

/// As [`run_growth`], also handing back the final tree.
pub fn run_growth_with_state(
    config: ModelConfig,
    n_steps: usize,
    checkpoints: &[usize],
    observers: &mut [&mut dyn StepObserver],
) -> Result<(TrajectoryRecord, TreeState)> {
    validate_checkpoints(n_steps, checkpoints)?;
    let mut sim = Simulation::with_capacity(config, n_steps);
    let mut snapshots = Vec::with_capacity(checkpoints.len());
    let mut pending = checkpoints.iter().copied().peekable();

    if pending.next_if_eq(&1).is_some() {
        snapshots.push(sim.snapshot());
    }
    if observers.is_empty() {
        for next in pending.by_ref() {
            sim.advance_to(next);
            snapshots.push(sim.snapshot());
        }
        sim.advance_to(n_steps);
    } else {
        while sim.state.edges() < n_steps {
            let before = sim.stats;
            let outcome = sim.step();
            for obs in observers.iter_mut() {
                obs.on_step(&before, &outcome, &sim.stats, &sim.state);
            }
            if pending.next_if_eq(&sim.state.edges()).is_some() {
                snapshots.push(sim.snapshot());
            }
        }
    }
    let record = TrajectoryRecord {
        config,
        snapshots,
        final_stats: sim.stats,
    };
    Ok((record, sim.state))
}

/// `start, start*factor, ...` up to and including `limit`.
pub fn geometric_checkpoints(start: usize, factor: usize, limit: usize) -> Vec<usize> {
    let mut out = Vec::new();
    if start == 0 || factor < 2 {
        if start >= 1 && start <= limit {
            out.push(start);
        }
        return out;
    }
    let mut c = start;
    while c <= limit {
        out.push(c);
        match c.checked_mul(factor) {
            Some(next) => c = next,
            None => break,
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{Attachment, ChoiceRule};

    #[test]
    fn final_size_matches_request() {
        let (rec, state) = run_growth_with_state(ModelConfig::max_choice(2, 1), 1000, &[10, 100, 1000], &mut []).unwrap();
        assert_eq!(state.edges(), 1000);
        assert_eq!(state.vertex_count(), 1001);
        assert_eq!(rec.snapshots.iter().map(|s| s.n).collect::<Vec<_>>(), vec![10, 100, 1000]);
        assert_eq!(rec.final_stats.n, 1000);
    }

    #[test]
    fn two_edges_always_have_max_two() {
        for seed in 0..50 {
            let rec = run_growth(ModelConfig::max_choice(2, seed), 2, &[2], &mut []).unwrap();
            let s = rec.snapshots[0];
            assert_eq!((s.max_degree, s.max_count), (2, 1));
        }
    }

    #[test]
    fn same_seed_same_record() {
        let cfg = ModelConfig::new(3, ChoiceRule::Max, Attachment::Uniform, 77).unwrap();
        let cps = geometric_checkpoints(1, 10, 100_000);
        let a = run_growth(cfg, 100_000, &cps, &mut []).unwrap();
        let b = run_growth(cfg, 100_000, &cps, &mut []).unwrap();
        assert_eq!(a, b);
        let c = run_growth(cfg.with_seed(78), 100_000, &cps, &mut []).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn observers_do_not_change_the_run() {
        let cfg = ModelConfig::max_choice(2, 5);
        let mut steps = 0usize;
        let mut count = |_: &MaxStats, _: &StepOutcome, _: &MaxStats, _: &TreeState| steps += 1;
        let with = run_growth(cfg, 5000, &[1, 50, 5000], &mut [&mut count]).unwrap();
        let without = run_growth(cfg, 5000, &[1, 50, 5000], &mut []).unwrap();
        assert_eq!(with, without);
        assert_eq!(steps, 4999);
    }

    #[test]
    fn stats_agree_with_recount() {
        let cfg = ModelConfig::max_choice(2, 9);
        let mut check = |_: &MaxStats, _: &StepOutcome, after: &MaxStats, state: &TreeState| {
            assert_eq!(after.max_degree, state.max_degree());
            assert_eq!(after.max_count, state.count_with_degree(after.max_degree));
            let smallest = state
                .degrees()
                .iter()
                .position(|&d| d == after.max_degree)
                .unwrap() as VertexId
                + 1;
            assert_eq!(after.leader, smallest);
        };
        run_growth(cfg, 3000, &[], &mut [&mut check]).unwrap();
    }

    #[test]
    fn checkpoint_validation() {
        let cfg = ModelConfig::max_choice(2, 0);
        assert!(run_growth(cfg, 10, &[5, 5], &mut []).is_err());
        assert!(run_growth(cfg, 10, &[0], &mut []).is_err());
        assert!(run_growth(cfg, 10, &[11], &mut []).is_err());
        assert!(run_growth(cfg, 0, &[], &mut []).is_err());
    }

    #[test]
    fn geometric_schedule() {
        assert_eq!(geometric_checkpoints(10_000, 10, 10_000_000), vec![10_000, 100_000, 1_000_000, 10_000_000]);
        assert_eq!(geometric_checkpoints(3, 2, 20), vec![3, 6, 12]);
        assert!(geometric_checkpoints(100, 10, 50).is_empty());
    }
}
