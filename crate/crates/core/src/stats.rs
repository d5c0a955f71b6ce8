//! Small order statistics used when aggregating across seeds.

/// Median of the finite values; the mean of the two middle values when the
/// count is even. `NaN` for an empty slice.
pub fn median(values: &[f64]) -> f64 {
    let mut v: Vec<f64> = values.to_vec();
    if v.is_empty() {
        return f64::NAN;
    }
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    if v.len() % 2 == 1 {
        v[mid]
    } else {
        0.5 * (v[mid - 1] + v[mid])
    }
}

pub fn min(values: &[f64]) -> f64 {
    values.iter().copied().fold(f64::INFINITY, f64::min)
}

pub fn max(values: &[f64]) -> f64 {
    values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

/// Total-variation distance between two laws on the same countable space.
pub fn total_variation<K: Ord + Clone>(
    p: &std::collections::BTreeMap<K, f64>,
    q: &std::collections::BTreeMap<K, f64>,
) -> f64 {
    let mut keys: Vec<&K> = p.keys().chain(q.keys()).collect();
    keys.sort();
    keys.dedup();
    0.5 * keys
        .into_iter()
        .map(|k| (p.get(k).copied().unwrap_or(0.0) - q.get(k).copied().unwrap_or(0.0)).abs())
        .sum::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    #[test]
    fn medians() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
        assert!(median(&[]).is_nan());
        assert_eq!(min(&[2.0, -1.0]), -1.0);
        assert_eq!(max(&[2.0, -1.0]), 2.0);
    }

    #[test]
    fn tv_distance() {
        let p = BTreeMap::from([(1, 0.5), (2, 0.5)]);
        let q = BTreeMap::from([(2, 0.25), (3, 0.75)]);
        assert!((total_variation(&p, &q) - 0.75).abs() < 1e-15);
        assert_eq!(total_variation(&p, &p), 0.0);
    }
}
