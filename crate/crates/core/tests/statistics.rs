//! Statistical agreement between the simulator and the analytic laws.

use std::collections::BTreeMap;

use choicetree::par::map_seeds;
use choicetree::stats::total_variation;
use choicetree::{
    attachment_probability, drift_check_d2, exact_distribution, run_growth, Attachment, ChoiceRule, MaxStats,
    ModelConfig, StepOutcome, TreeState,
};

#[test]
fn increments_follow_attachment_probability() {
    // Bin steps by predicted increment probability and compare observed
    // increments with the summed predictions, within 3 standard errors.
    const BINS: usize = 10;
    let mut expected = [0.0f64; BINS];
    let mut variance = [0.0f64; BINS];
    let mut observed = [0u64; BINS];
    let mut steps = [0u64; BINS];
    for seed in 0..8 {
        let cfg = ModelConfig::max_choice(2, 1000 + seed);
        let mut obs = |before: &MaxStats, out: &StepOutcome, after: &MaxStats, _: &TreeState| {
            let p = attachment_probability(before.max_degree, before.max_count, before.n as u64, 2).unwrap();
            let bin = ((p * BINS as f64) as usize).min(BINS - 1);
            expected[bin] += p;
            variance[bin] += p * (1.0 - p);
            steps[bin] += 1;
            observed[bin] += (after.max_degree - before.max_degree) as u64;
            assert_eq!(out.max_after, after.max_degree);
        };
        run_growth(cfg, 200_000, &[], &mut [&mut obs]).unwrap();
    }
    for b in 0..BINS {
        if steps[b] < 100 {
            continue;
        }
        let z = (observed[b] as f64 - expected[b]) / variance[b].sqrt();
        assert!(z.abs() < 3.0, "bin {b}: {} steps, observed {}, expected {:.1}, z = {z:.2}", steps[b], observed[b], expected[b]);
    }
}

fn empirical(config: ModelConfig, n: usize, runs: u64) -> BTreeMap<u32, f64> {
    let seeds: Vec<u64> = (0..runs).collect();
    let mut law = BTreeMap::new();
    for m in map_seeds(&seeds, |s| run_growth(config.with_seed(s), n, &[], &mut []).unwrap().final_stats.max_degree) {
        *law.entry(m).or_insert(0.0) += 1.0 / runs as f64;
    }
    law
}

#[test]
fn oracle_agrees_at_eight_edges() {
    let configs = [
        ModelConfig::new(2, ChoiceRule::Max, Attachment::Uniform, 0).unwrap(),
        ModelConfig::new(2, ChoiceRule::Min, Attachment::Uniform, 0).unwrap(),
        ModelConfig::new(4, ChoiceRule::Max, Attachment::Preferential, 0).unwrap(),
        ModelConfig::new(3, ChoiceRule::None, Attachment::Preferential, 0).unwrap(),
    ];
    for cfg in configs {
        let exact = exact_distribution(8, &cfg).unwrap().max_law_f64();
        let tv = total_variation(&exact, &empirical(cfg, 8, 100_000));
        assert!(tv <= 0.01, "{cfg:?}: TV = {tv}");
    }
}

#[test]
fn drift_is_negative_once_hub_is_large() {
    for k in 4..=7 {
        let n = 10usize.pow(k);
        let nf = n as f64;
        for m in [nf.powf(0.9).round(), nf / 2.0, nf, 1.5 * nf] {
            let d = drift_check_d2(n, m as u32, 3.9).unwrap();
            assert!(d.q < 0.0, "Q at n={n}, M={m}: {}", d.q);
            let d = drift_check_d2(n, m as u32, 4.1).unwrap();
            assert!(d.u < 0.0, "U at n={n}, M={m}: {}", d.u);
        }
    }
}

#[test]
fn drift_leading_order() {
    // E[Q'/Q] - 1 = (c/4 - 1)/n + o(1/n) on the region where M is linear
    let n = 10_000_000usize;
    let m = (n / 3) as u32;
    for c in [3.0, 3.9, 4.1, 5.0] {
        let d = drift_check_d2(n, m, c).unwrap();
        let lead = (c / 4.0 - 1.0) / n as f64;
        assert!((d.q - lead).abs() < 0.05 / n as f64, "c={c}: {} vs {lead}", d.q);
        assert!((d.u + lead).abs() < 0.05 / n as f64, "c={c}: {} vs {}", d.u, -lead);
    }
}
