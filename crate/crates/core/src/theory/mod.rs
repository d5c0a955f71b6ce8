//! Closed-form objects of the max-choice model: the step law of the maximum
//! degree, the fixed-point map of its fluid limit, the two-colour urn it
//! reduces to, and an exact enumeration of the finite-n law.

mod exact;
mod fixed_point;
mod urn;

pub use exact::{exact_distribution, ExactDistribution, EXACT_CAP};
pub use fixed_point::{solve_x_star, FixedPointResult, DEFAULT_TOL};
pub use urn::{run_urn, run_urn_at, UrnState, UrnTrace};

use crate::error::{Error, Result};

/// Probability that at least one of `d` draws with replacement hits one of
/// `marked` out of `total` equally likely items.
///
/// Both the tree and the urn route through here so the two laws are
/// bit-identical for matching integer inputs.
pub fn prob_any_marked(marked: u64, total: u64, d: u32) -> f64 {
    debug_assert!(marked <= total && total > 0);
    let miss = (total - marked) as f64 / total as f64;
    1.0 - powu(miss, d)
}

fn powu(x: f64, d: u32) -> f64 {
    match i32::try_from(d) {
        Ok(k) => x.powi(k),
        Err(_) => x.powf(d as f64),
    }
}

/// `1 - (1 - M L / 2n)^d`: the chance that the maximum degree of `P_n`
/// increases in the next step.
pub fn attachment_probability(max_degree: u32, max_count: u64, n: u64, d: u32) -> Result<f64> {
    if d == 0 {
        return Err(Error::InvalidArgument("d must be at least 1".into()));
    }
    let weight = max_degree as u64 * max_count;
    if weight == 0 {
        return Err(Error::InvalidArgument("M and L must be positive".into()));
    }
    if weight > 2 * n {
        return Err(Error::InvalidArgument(format!(
            "M*L = {weight} exceeds the degree sum 2n = {}",
            2 * n
        )));
    }
    Ok(prob_any_marked(weight, 2 * n, d))
}

/// `f(x) = 1/2 * sum_{i<d} (1 - x/2)^i`; for `x > 0` this is `q(x) / x`.
pub fn choice_intensity(x: f64, d: u32) -> f64 {
    let r = 1.0 - x / 2.0;
    let mut term = 1.0;
    let mut sum = 0.0;
    for _ in 0..d {
        sum += term;
        term *= r;
    }
    sum / 2.0
}

/// `q(x) = 1 - (1 - x/2)^d`.
pub fn fixed_point_map(x: f64, d: u32) -> f64 {
    1.0 - powu(1.0 - x / 2.0, d)
}

/// `q'(x) = (d/2) (1 - x/2)^(d-1)`.
pub fn fixed_point_map_derivative(x: f64, d: u32) -> f64 {
    if d == 0 {
        return 0.0;
    }
    d as f64 / 2.0 * powu(1.0 - x / 2.0, d - 1)
}

/// Leading-order maximum degree of `P_n`: `4n / ln n` for two draws and
/// `x* n` for three or more.
pub fn predicted_max(n: u64, d: u32) -> Result<f64> {
    if n < 3 {
        return Err(Error::InvalidArgument("predicted_max needs n >= 3".into()));
    }
    let nf = n as f64;
    match d {
        0 | 1 => Err(Error::Unsupported(
            "the single-draw maximum is of order sqrt(n) with a random constant".into(),
        )),
        2 => Ok(4.0 * nf / nf.ln()),
        _ => Ok(solve_x_star(d, DEFAULT_TOL)?.x_star * nf),
    }
}
