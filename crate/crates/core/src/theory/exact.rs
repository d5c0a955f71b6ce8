use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::config::{Attachment, ChoiceRule, ModelConfig};
use crate::error::{Error, Result};

/// Largest `n` accepted by [`exact_distribution`].
pub const EXACT_CAP: u32 = 12;

/// Exact law of the degree multiset of `P_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactDistribution {
    pub n_target: u32,
    /// Degree sequences sorted in decreasing order.
    pub multisets: BTreeMap<Vec<u32>, BigRational>,
    /// Law of the maximum degree.
    pub max_law: BTreeMap<u32, BigRational>,
}

impl ExactDistribution {
    pub fn total(&self) -> BigRational {
        self.multisets.values().fold(BigRational::zero(), |acc, p| acc + p)
    }

    pub fn max_law_f64(&self) -> BTreeMap<u32, f64> {
        self.max_law.iter().map(|(&m, p)| (m, to_f64(p))).collect()
    }

    pub fn multisets_f64(&self) -> BTreeMap<Vec<u32>, f64> {
        self.multisets.iter().map(|(k, p)| (k.clone(), to_f64(p))).collect()
    }

    pub fn max_probability(&self, max_degree: u32) -> f64 {
        self.max_law.get(&max_degree).map_or(0.0, to_f64)
    }
}

fn to_f64(p: &BigRational) -> f64 {
    p.to_f64().expect("probability is finite")
}

/// Dynamic program over sorted degree multisets, in exact rational
/// arithmetic.
///
/// The law of the degree sequence does not depend on vertex labels, so only
/// the multiset is tracked. From a multiset with class weights `w_k` (total
/// `T`) the selected vertex has degree `k` with probability
/// `(S_{<=k}/T)^d - (S_{<k}/T)^d` under the max rule (all draws at most `k`,
/// not all below `k`), the mirror image under the min rule and `w_k / T` with no choice. Weights are `k * count` for
/// preferential draws and `count` for uniform ones.
pub fn exact_distribution(n_target: u32, config: &ModelConfig) -> Result<ExactDistribution> {
    if n_target == 0 {
        return Err(Error::InvalidArgument("n_target must be at least 1".into()));
    }
    if n_target > EXACT_CAP {
        return Err(Error::StateSpaceTooLarge {
            requested: n_target,
            cap: EXACT_CAP,
        });
    }
    let d = i32::try_from(config.effective_draws())
        .map_err(|_| Error::InvalidArgument("d too large for exact enumeration".into()))?;

    let mut layer: BTreeMap<Vec<u32>, BigRational> = BTreeMap::new();
    layer.insert(vec![1, 1], BigRational::one());
    for _ in 1..n_target {
        let mut next = BTreeMap::new();
        for (degrees, p) in &layer {
            for (k, pk) in class_probabilities(degrees, config.rule, config.attachment, d) {
                if pk.is_zero() {
                    continue;
                }
                let child = grow_class(degrees, k);
                *next.entry(child).or_insert_with(BigRational::zero) += p * &pk;
            }
        }
        layer = next;
    }

    let mut max_law = BTreeMap::new();
    for (degrees, p) in &layer {
        *max_law.entry(degrees[0]).or_insert_with(BigRational::zero) += p;
    }
    Ok(ExactDistribution {
        n_target,
        multisets: layer,
        max_law,
    })
}

/// `(degree, probability that the chosen vertex has it)` for each degree
/// class of a decreasing degree sequence.
fn class_probabilities(
    degrees: &[u32],
    rule: ChoiceRule,
    attachment: Attachment,
    d: i32,
) -> Vec<(u32, BigRational)> {
    // classes in decreasing degree order
    let mut classes: Vec<(u32, u64)> = Vec::new();
    for &k in degrees {
        match classes.last_mut() {
            Some((deg, count)) if *deg == k => *count += 1,
            _ => classes.push((k, 1)),
        }
    }
    let weight = |k: u32, count: u64| -> u64 {
        match attachment {
            Attachment::Preferential => k as u64 * count,
            Attachment::Uniform => count,
        }
    };
    let total: u64 = classes.iter().map(|&(k, c)| weight(k, c)).sum();
    let frac = |w: u64| BigRational::new(BigInt::from(w), BigInt::from(total));

    let weights: Vec<u64> = classes.iter().map(|&(k, c)| weight(k, c)).collect();
    let mut out = Vec::with_capacity(classes.len());
    match rule {
        ChoiceRule::None => {
            for (&(k, _), &w) in classes.iter().zip(&weights) {
                out.push((k, frac(w)));
            }
        }
        ChoiceRule::Min => {
            let mut above = 0u64;
            for (&(k, _), &w) in classes.iter().zip(&weights) {
                let at_least = above + w;
                out.push((k, frac(at_least).pow(d) - frac(above).pow(d)));
                above = at_least;
            }
        }
        ChoiceRule::Max => {
            let mut below = 0u64;
            for (&(k, _), &w) in classes.iter().zip(&weights).rev() {
                let at_most = below + w;
                out.push((k, frac(at_most).pow(d) - frac(below).pow(d)));
                below = at_most;
            }
        }
    }
    out
}

fn grow_class(degrees: &[u32], k: u32) -> Vec<u32> {
    let mut child = degrees.to_vec();
    // first entry of the class keeps the sequence decreasing after +1
    let pos = child.iter().position(|&x| x == k).expect("class present");
    child[pos] += 1;
    child.push(1);
    child
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(d: u32, rule: ChoiceRule, attachment: Attachment) -> ModelConfig {
        ModelConfig::new(d, rule, attachment, 0).unwrap()
    }

    fn ratio(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn two_edges() {
        let dist = exact_distribution(2, &ModelConfig::max_choice(2, 0)).unwrap();
        assert_eq!(dist.multisets.len(), 1);
        assert_eq!(dist.max_law.get(&2), Some(&BigRational::one()));
    }

    #[test]
    fn three_edges_two_draws() {
        let dist = exact_distribution(3, &ModelConfig::max_choice(2, 0)).unwrap();
        assert_eq!(dist.max_law.get(&3), Some(&ratio(3, 4)));
        assert_eq!(dist.max_law.get(&2), Some(&ratio(1, 4)));
    }

    /// Labelled brute force: every sequence of draws and tie-breaks from P_1,
    /// weighted by its probability.
    fn brute_force_max_law(n: u32, config: &ModelConfig) -> BTreeMap<u32, BigRational> {
        fn recurse(
            degrees: &mut Vec<u32>,
            p: BigRational,
            remaining: u32,
            config: &ModelConfig,
            out: &mut BTreeMap<u32, BigRational>,
        ) {
            if remaining == 0 {
                let m = *degrees.iter().max().unwrap();
                *out.entry(m).or_insert_with(BigRational::zero) += p;
                return;
            }
            let nv = degrees.len();
            let draws = config.effective_draws();
            let (weights, total): (Vec<u64>, u64) = match config.attachment {
                Attachment::Preferential => {
                    let w: Vec<u64> = degrees.iter().map(|&x| x as u64).collect();
                    let t = w.iter().sum();
                    (w, t)
                }
                Attachment::Uniform => (vec![1; nv], nv as u64),
            };
            // enumerate ordered candidate tuples
            let mut tuple = vec![0usize; draws as usize];
            loop {
                let mut pt = BigRational::one();
                for &v in &tuple {
                    pt *= BigRational::new(weights[v].into(), total.into());
                }
                if !pt.is_zero() {
                    let target_deg = match config.rule {
                        ChoiceRule::None => degrees[tuple[0]],
                        ChoiceRule::Max => tuple.iter().map(|&v| degrees[v]).max().unwrap(),
                        ChoiceRule::Min => tuple.iter().map(|&v| degrees[v]).min().unwrap(),
                    };
                    let mut tied: Vec<usize> = match config.rule {
                        ChoiceRule::None => vec![tuple[0]],
                        _ => tuple.iter().copied().filter(|&v| degrees[v] == target_deg).collect(),
                    };
                    tied.sort_unstable();
                    tied.dedup();
                    let share = BigRational::new(1.into(), (tied.len() as i64).into());
                    for &v in &tied {
                        degrees[v] += 1;
                        degrees.push(1);
                        recurse(degrees, &p * &pt * &share, remaining - 1, config, out);
                        degrees.pop();
                        degrees[v] -= 1;
                    }
                }
                // odometer
                let mut i = 0;
                loop {
                    if i == tuple.len() {
                        return;
                    }
                    tuple[i] += 1;
                    if tuple[i] < nv {
                        break;
                    }
                    tuple[i] = 0;
                    i += 1;
                }
            }
        }
        let mut out = BTreeMap::new();
        recurse(&mut vec![1, 1], BigRational::one(), n - 1, config, &mut out);
        out
    }

    #[test]
    fn agrees_with_labelled_brute_force() {
        let variants = [
            cfg(2, ChoiceRule::Max, Attachment::Preferential),
            cfg(3, ChoiceRule::Max, Attachment::Preferential),
            cfg(2, ChoiceRule::Min, Attachment::Preferential),
            cfg(2, ChoiceRule::None, Attachment::Preferential),
            cfg(2, ChoiceRule::Max, Attachment::Uniform),
            cfg(2, ChoiceRule::Min, Attachment::Uniform),
        ];
        for c in &variants {
            for n in 1..=5 {
                let dp = exact_distribution(n, c).unwrap();
                assert_eq!(dp.max_law, brute_force_max_law(n, c), "{c:?} n={n}");
            }
        }
    }

    #[test]
    fn laws_are_normalised() {
        for d in 1..=4 {
            for rule in [ChoiceRule::Max, ChoiceRule::Min, ChoiceRule::None] {
                for att in [Attachment::Preferential, Attachment::Uniform] {
                    let dist = exact_distribution(9, &cfg(d, rule, att)).unwrap();
                    assert_eq!(dist.total(), BigRational::one());
                    let f: f64 = dist.max_law_f64().values().sum();
                    assert!((f - 1.0).abs() < 1e-12);
                    for degs in dist.multisets.keys() {
                        assert_eq!(degs.len(), 10);
                        assert_eq!(degs.iter().sum::<u32>(), 18);
                        assert!(degs.windows(2).all(|w| w[0] >= w[1]));
                    }
                }
            }
        }
    }

    #[test]
    fn single_draw_equals_no_choice() {
        for n in 1..=8 {
            for att in [Attachment::Preferential, Attachment::Uniform] {
                let one = exact_distribution(n, &cfg(1, ChoiceRule::Max, att)).unwrap();
                let none = exact_distribution(n, &cfg(4, ChoiceRule::None, att)).unwrap();
                assert_eq!(one.multisets, none.multisets);
                let min1 = exact_distribution(n, &cfg(1, ChoiceRule::Min, att)).unwrap();
                assert_eq!(min1.multisets, none.multisets);
            }
        }
    }

    #[test]
    fn cap_is_enforced() {
        let c = ModelConfig::max_choice(2, 0);
        assert!(matches!(
            exact_distribution(13, &c),
            Err(Error::StateSpaceTooLarge { requested: 13, cap: 12 })
        ));
        assert!(exact_distribution(0, &c).is_err());
        let top = exact_distribution(12, &c).unwrap();
        assert_eq!(top.total(), BigRational::one());
    }
}
