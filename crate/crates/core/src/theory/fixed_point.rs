use crate::error::{Error, Result};

use super::{fixed_point_map, fixed_point_map_derivative};

pub const DEFAULT_TOL: f64 = 1e-12;

const MAX_ITERATIONS: u32 = 400;

/// Stable interior root of `q(x) = x`, the limit of `M_n / n` for `d >= 3`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPointResult {
    pub d: u32,
    pub x_star: f64,
    /// `|q(x*) - x*|`
    pub residual: f64,
    /// `q'(x*)`, below 1 at a stable root.
    pub derivative: f64,
    pub iterations: u32,
}

/// Bisection for the root of `g(x) = q(x) - x` on `[tol, 2]`.
///
/// `g(0) = 0`, `g'(0) = d/2 - 1 > 0` and `g(2) = -1`, so for `d >= 3` the
/// bracket holds exactly one sign change. For `d = 2`, `g(x) = -x^2/4` has no
/// root in `(0, 2]`.
pub fn solve_x_star(d: u32, tol: f64) -> Result<FixedPointResult> {
    if d <= 2 {
        return Err(Error::NoInteriorRoot { d });
    }
    if !(tol > 0.0 && tol < 1.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be in (0, 1), got {tol}")));
    }
    let g = |x: f64| fixed_point_map(x, d) - x;

    // g is positive only very close to 0 when d is huge; shrink the lower end
    // until it is.
    let mut lo = tol;
    while g(lo) <= 0.0 {
        lo /= 2.0;
        if lo < f64::MIN_POSITIVE {
            return Err(Error::NoInteriorRoot { d });
        }
    }
    let mut hi = 2.0;
    let mut iterations = 0;
    let mut mid = 0.5 * (lo + hi);
    let mut value = g(mid);
    while iterations < MAX_ITERATIONS && !(value.abs() <= tol && hi - lo <= tol) {
        if value > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        let next = 0.5 * (lo + hi);
        iterations += 1;
        if next == mid {
            break;
        }
        mid = next;
        value = g(mid);
    }

    let derivative = fixed_point_map_derivative(mid, d);
    assert!(derivative < 1.0, "fixed point for d = {d} is not stable: q' = {derivative}");
    Ok(FixedPointResult {
        d,
        x_star: mid,
        residual: value.abs(),
        derivative,
        iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theory::choice_intensity;

    /// Smaller root of x^2 - 6x + 4, i.e. the d = 3 equation after dividing
    /// out the trivial root x = 0.
    fn quadratic_root() -> f64 {
        let (a, b, c) = (1.0f64, -6.0f64, 4.0f64);
        (-b - (b * b - 4.0 * a * c).sqrt()) / (2.0 * a)
    }

    /// For d = 4 substitute y = 1 - x/2: 1 - y^4 = 2 - 2y, which factors as
    /// (y - 1)(y^3 + y^2 + y - 1) = 0. Newton on the cubic from y = 1.
    fn cubic_root() -> f64 {
        let mut y = 1.0f64;
        for _ in 0..60 {
            let f = y * y * y + y * y + y - 1.0;
            let fp = 3.0 * y * y + 2.0 * y + 1.0;
            y -= f / fp;
        }
        2.0 * (1.0 - y)
    }

    #[test]
    fn three_draws() {
        let r = solve_x_star(3, DEFAULT_TOL).unwrap();
        assert!((quadratic_root() - (3.0 - 5f64.sqrt())).abs() < 1e-15);
        assert!((r.x_star - quadratic_root()).abs() < 1e-10, "{r:?}");
        assert!(r.residual <= DEFAULT_TOL);
        assert!((choice_intensity(r.x_star, 3) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn four_draws() {
        let r = solve_x_star(4, DEFAULT_TOL).unwrap();
        assert!((cubic_root() - 0.912_622_0).abs() < 1e-6);
        assert!((r.x_star - cubic_root()).abs() < 1e-10);
    }

    #[test]
    fn two_draws_has_no_interior_root() {
        assert!(matches!(solve_x_star(2, DEFAULT_TOL), Err(Error::NoInteriorRoot { d: 2 })));
        assert!(matches!(solve_x_star(1, DEFAULT_TOL), Err(Error::NoInteriorRoot { d: 1 })));
        // g(x) = -x^2/4 for d = 2
        for i in 1..=20 {
            let x = i as f64 / 10.0;
            assert!((fixed_point_map(x, 2) - x + x * x / 4.0).abs() < 1e-15);
        }
    }

    #[test]
    fn bad_tolerance() {
        assert!(solve_x_star(3, 0.0).is_err());
        assert!(solve_x_star(3, f64::NAN).is_err());
    }

    #[test]
    fn increasing_in_d_and_below_one() {
        let xs: Vec<f64> = [3, 4, 20].iter().map(|&d| solve_x_star(d, DEFAULT_TOL).unwrap().x_star).collect();
        assert!(xs[0] < xs[1] && xs[1] < xs[2] && xs[2] < 1.0, "{xs:?}");
    }

    #[test]
    fn unique_sign_change_and_stable() {
        for d in 3..=64 {
            let r = solve_x_star(d, DEFAULT_TOL).unwrap();
            assert!(r.residual <= DEFAULT_TOL);
            assert!(r.x_star > 0.0 && r.x_star < 2.0);
            assert!(r.derivative < 1.0);
            // scan (0, 2] for sign changes of q(x) - x
            let steps = 20_000;
            let mut changes = Vec::new();
            let mut prev = fixed_point_map(1e-9, d) - 1e-9;
            for i in 1..=steps {
                let x = 2.0 * i as f64 / steps as f64;
                let g = fixed_point_map(x, d) - x;
                if (g > 0.0) != (prev > 0.0) {
                    changes.push(x);
                }
                prev = g;
            }
            assert_eq!(changes.len(), 1, "d={d}: {changes:?}");
            assert!((changes[0] - r.x_star).abs() <= 2.0 / steps as f64);
        }
    }
}
