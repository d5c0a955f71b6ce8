//! Maximum-degree bookkeeping and the scale-function diagnostics.

use crate::error::{Error, Result};
use crate::tree::{StepOutcome, VertexId};

/// Running maximum degree `M`, its multiplicity `L` and the current leader.
///
/// The leader is the smallest id among vertices of degree `M`. Every change
/// of that identity is counted; once `L` stays at 1 the leader is the
/// persistent hub.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MaxStats {
    pub n: usize,
    pub max_degree: u32,
    pub max_count: u64,
    pub leader: VertexId,
    pub last_change_step: usize,
    pub change_count: u64,
}

impl Default for MaxStats {
    fn default() -> Self {
        Self::new()
    }
}

impl MaxStats {
    /// Statistics of `P_1`: both vertices have degree 1, vertex 1 leads.
    pub fn new() -> Self {
        MaxStats {
            n: 1,
            max_degree: 1,
            max_count: 2,
            leader: 1,
            last_change_step: 1,
            change_count: 0,
        }
    }

    /// Advances the statistics by one step in O(1).
    ///
    /// `histogram` is the post-step degree histogram and is only consulted by
    /// debug assertions.
    pub fn update(&mut self, outcome: &StepOutcome, histogram: &[u64]) {
        debug_assert_eq!(outcome.n, self.n + 1, "steps must be applied in order");
        debug_assert_eq!(outcome.max_before, self.max_degree);
        let previous_leader = self.leader;
        if outcome.chosen_degree == self.max_degree {
            self.max_degree += 1;
            self.max_count = 1;
            self.leader = outcome.chosen;
        } else if outcome.chosen_degree + 1 == self.max_degree {
            self.max_count += 1;
            self.leader = self.leader.min(outcome.chosen);
        }
        // the new leaf has degree 1 and M >= 2 from the first step on
        debug_assert!(self.max_degree >= 2);
        self.n = outcome.n;
        if self.leader != previous_leader {
            self.change_count += 1;
            self.last_change_step = self.n;
        }
        debug_assert_eq!(
            histogram.get(self.max_degree as usize).copied().unwrap_or(0),
            self.max_count,
            "L disagrees with the degree histogram"
        );
    }
}

/// The normalisation under which the maximum degree has a finite limit:
/// `M ln n / n` for two draws, `M / n` for three or more and `M / sqrt n`
/// for the single-draw baseline.
pub fn scaled_metric(n: usize, max_degree: u32, d: u32) -> Result<f64> {
    if d == 0 {
        return Err(Error::InvalidArgument("d must be at least 1".into()));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    let n = n as f64;
    let m = max_degree as f64;
    Ok(match d {
        1 => m / n.sqrt(),
        2 => m * n.ln() / n,
        _ => m / n,
    })
}

/// `Q = exp(c n / M) / n` and `U = n exp(-c n / M)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagnosticScales {
    pub c: f64,
    pub q: f64,
    pub u: f64,
}

pub fn scale_functions(n: usize, max_degree: u32, c: f64) -> DiagnosticScales {
    let n = n as f64;
    let exponent = c * n / max_degree as f64;
    DiagnosticScales {
        c,
        q: exponent.exp() / n,
        u: n * (-exponent).exp(),
    }
}

/// One-step conditional drift of the two scale functions, as `ratio - 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Drift {
    /// `E[Q_{n+1} | F_n] / Q_n - 1`
    pub q: f64,
    /// `E[U_{n+1} | F_n] / U_n - 1`
    pub u: f64,
}

/// Exact one-step drift of `Q` and `U` for two draws with a unique maximum
/// (`L = 1`), where `M` grows with probability `p = (M/n)(1 - M/4n)`.
///
/// Both expectations are evaluated through `expm1` so that the tiny
/// deviations from 1 survive at large `n`.
pub fn drift_check_d2(n: usize, max_degree: u32, c: f64) -> Result<Drift> {
    if n < 1 || max_degree == 0 {
        return Err(Error::InvalidArgument("need n >= 1 and M >= 1".into()));
    }
    if max_degree as u64 > 2 * n as u64 {
        return Err(Error::InvalidArgument(format!(
            "M = {max_degree} exceeds 2n = {}",
            2 * n as u64
        )));
    }
    let nf = n as f64;
    let m = max_degree as f64;
    let p = increment_probability_d2(n, max_degree);
    // exponent shifts of c n / M when M stays and when M grows
    let stay = c / m;
    let grow = c * (m - nf) / (m * (m + 1.0));

    let shrink = nf / (nf + 1.0);
    let q = shrink * ((1.0 - p) * stay.exp_m1() + p * grow.exp_m1()) - 1.0 / (nf + 1.0);
    let expand = (nf + 1.0) / nf;
    let u = expand * ((1.0 - p) * (-stay).exp_m1() + p * (-grow).exp_m1()) + 1.0 / nf;
    Ok(Drift { q, u })
}

/// `(M/n)(1 - M/4n)`, equal to `1 - (1 - M/2n)^2`.
pub fn increment_probability_d2(n: usize, max_degree: u32) -> f64 {
    let x = max_degree as f64 / n as f64;
    x * (1.0 - x / 4.0)
}
