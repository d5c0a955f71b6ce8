use rand::Rng;

use crate::error::{Error, Result};
use crate::trajectory::{geometric_checkpoints, run_rng};

use super::prob_any_marked;

/// Two-colour urn with `d` draws per step.
///
/// Black balls play the role of the hub's degree and white balls the rest of
/// the degree sum, so with one black ball per unit of `M` and `2n` balls in
/// total the black count follows the maximum degree while `L = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UrnState {
    pub black: u64,
    pub white: u64,
    pub steps: u64,
}

impl Default for UrnState {
    /// One black and one white ball, matching `M_1 = 1` on `P_1`.
    fn default() -> Self {
        UrnState { black: 1, white: 1, steps: 0 }
    }
}

impl UrnState {
    pub fn new(black: u64, white: u64) -> Result<Self> {
        if black + white == 0 {
            return Err(Error::InvalidArgument("urn must hold at least one ball".into()));
        }
        Ok(UrnState { black, white, steps: 0 })
    }

    pub fn total(&self) -> u64 {
        self.black + self.white
    }

    /// Probability that the next step adds a black ball.
    pub fn increment_probability(&self, d: u32) -> f64 {
        prob_any_marked(self.black, self.total(), d)
    }

    /// Draws `d` balls with replacement. Any black draw adds a black and a
    /// white ball, otherwise two white balls are added.
    pub fn step<R: Rng + ?Sized>(&mut self, d: u32, rng: &mut R) {
        let total = self.total();
        debug_assert!(total > 0);
        let hit = (0..d).any(|_| rng.gen_range(0..total) < self.black);
        if hit {
            self.black += 1;
            self.white += 1;
        } else {
            self.white += 2;
        }
        self.steps += 1;
    }

    /// `black / steps`, the urn counterpart of `M_n / n`.
    pub fn black_fraction(&self) -> f64 {
        if self.steps == 0 {
            return f64::NAN;
        }
        self.black as f64 / self.steps as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct UrnTrace {
    /// `(steps, black / steps)` at powers of ten and at the final step.
    pub points: Vec<(u64, f64)>,
    pub last: UrnState,
}

/// Runs the urn for `n_steps` steps, recording `black / steps` at powers of
/// ten and at the last step.
pub fn run_urn(initial: UrnState, d: u32, n_steps: u64, seed: u64) -> Result<UrnTrace> {
    if n_steps == 0 {
        return Err(Error::InvalidArgument("n_steps must be at least 1".into()));
    }
    let mut checkpoints: Vec<u64> = geometric_checkpoints(1, 10, n_steps as usize)
        .into_iter()
        .map(|c| c as u64)
        .collect();
    if checkpoints.last() != Some(&n_steps) {
        checkpoints.push(n_steps);
    }
    run_urn_at(initial, d, &checkpoints, seed)
}

/// As [`run_urn`] with an explicit, strictly increasing checkpoint list; the
/// run stops at the last checkpoint.
pub fn run_urn_at(initial: UrnState, d: u32, checkpoints: &[u64], seed: u64) -> Result<UrnTrace> {
    if d == 0 {
        return Err(Error::InvalidArgument("d must be at least 1".into()));
    }
    if initial.total() == 0 {
        return Err(Error::InvalidArgument("urn must hold at least one ball".into()));
    }
    if checkpoints.is_empty() || checkpoints[0] == 0 || checkpoints.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument(
            "checkpoints must be positive and strictly increasing".into(),
        ));
    }
    let mut rng = run_rng(seed);
    let mut urn = initial;
    let start = urn.steps;
    let mut points = Vec::with_capacity(checkpoints.len());
    for &cp in checkpoints {
        while urn.steps - start < cp {
            urn.step(d, &mut rng);
        }
        points.push((urn.steps, urn.black_fraction()));
    }
    Ok(UrnTrace { points, last: urn })
}
