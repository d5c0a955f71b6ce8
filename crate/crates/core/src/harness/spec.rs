//! Line-oriented `key = value` experiment specifications.
//!
//! ```text
//! # d = 3 max-choice, twenty seeds
//! kind = grow
//! d = 3
//! steps = 10^6
//! checkpoints = geometric:10^4,10
//! seeds = 1..20
//! out = runs/d3
//! ```
//!
//! Recognised keys and defaults:
//!
//! | key           | default                   | accepted values                                   |
//! |---------------|---------------------------|---------------------------------------------------|
//! | `kind`        | `grow`                    | `grow urn xstar exact table1 hub`                 |
//! | `d`           | `2`                       | integer >= 1                                      |
//! | `rule`        | `max`                     | `max min none`                                    |
//! | `attachment`  | `preferential`            | `preferential uniform`                            |
//! | `steps`       | `10^6` (`8` for `exact`)  | integer >= 1; `10^6`, `1e6`, `1_000_000`          |
//! | `checkpoints` | `geometric:10^4,10`       | `a,b,c` or `geometric:start,factor`               |
//! | `seeds`       | `1`                       | `a..b` (inclusive), `base+count`, or `a,b,c`      |
//! | `out`         | `out`                     | directory path                                    |

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::config::{Attachment, ChoiceRule, ModelConfig};
use crate::error::SpecError;
use crate::theory::EXACT_CAP;
use crate::trajectory::geometric_checkpoints;
use crate::tree::MAX_EDGES;

const KEYS: [&str; 8] = ["kind", "d", "rule", "attachment", "steps", "checkpoints", "seeds", "out"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExperimentKind {
    Grow,
    Urn,
    XStar,
    Exact,
    Table1,
    Hub,
}

impl ExperimentKind {
    pub fn is_stochastic(self) -> bool {
        !matches!(self, ExperimentKind::XStar | ExperimentKind::Exact)
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExperimentKind::Grow => "grow",
            ExperimentKind::Urn => "urn",
            ExperimentKind::XStar => "xstar",
            ExperimentKind::Exact => "exact",
            ExperimentKind::Table1 => "table1",
            ExperimentKind::Hub => "hub",
        })
    }
}

impl FromStr for ExperimentKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "grow" => ExperimentKind::Grow,
            "urn" => ExperimentKind::Urn,
            "xstar" => ExperimentKind::XStar,
            "exact" => ExperimentKind::Exact,
            "table1" => ExperimentKind::Table1,
            "hub" => ExperimentKind::Hub,
            other => return Err(format!("unknown kind `{other}`")),
        })
    }
}

/// A validated experiment. `model.seed` is the first seed.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub kind: ExperimentKind,
    pub model: ModelConfig,
    pub n_steps: usize,
    /// Resolved, strictly increasing, within `[1, n_steps]`.
    pub checkpoints: Vec<usize>,
    pub seeds: Vec<u64>,
    pub out: PathBuf,
}

#[derive(Debug, Clone)]
struct Entry {
    value: String,
    line: Option<usize>,
}

pub fn parse_spec(text: &str) -> Result<ExperimentSpec, SpecError> {
    parse_spec_with_overrides(text, &[])
}

/// Parses `text`, then applies `overrides` (command-line `key, value` pairs)
/// on top before validating.
pub fn parse_spec_with_overrides(text: &str, overrides: &[(&str, String)]) -> Result<ExperimentSpec, SpecError> {
    let mut entries: BTreeMap<String, Entry> = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| SpecError {
            line: Some(line_no),
            key: None,
            message: format!("expected `key = value`, found `{content}`"),
        })?;
        let key = key.trim().to_ascii_lowercase();
        let value = value.trim().to_string();
        if !KEYS.contains(&key.as_str()) {
            return Err(SpecError {
                line: Some(line_no),
                key: Some(key),
                message: "unknown key".into(),
            });
        }
        if value.is_empty() {
            return Err(err_at(Some(line_no), &key, "empty value"));
        }
        if entries.contains_key(&key) {
            return Err(err_at(Some(line_no), &key, "duplicate key"));
        }
        entries.insert(key, Entry { value, line: Some(line_no) });
    }
    for (key, value) in overrides {
        let key = key.to_ascii_lowercase();
        if !KEYS.contains(&key.as_str()) {
            return Err(err_at(None, &key, "unknown key"));
        }
        entries.insert(key, Entry { value: value.trim().to_string(), line: None });
    }
    resolve(&entries)
}

fn err_at(line: Option<usize>, key: &str, message: impl Into<String>) -> SpecError {
    SpecError {
        line,
        key: Some(key.to_string()),
        message: message.into(),
    }
}

fn resolve(entries: &BTreeMap<String, Entry>) -> Result<ExperimentSpec, SpecError> {
    let get = |key: &str| entries.get(key);
    let fail = |key: &str, msg: String| err_at(get(key).and_then(|e| e.line), key, msg);

    let kind = match get("kind") {
        Some(e) => e.value.parse::<ExperimentKind>().map_err(|m| fail("kind", m))?,
        None => ExperimentKind::Grow,
    };
    let d = match get("d") {
        Some(e) => parse_count(&e.value).map_err(|m| fail("d", m))?,
        None => 2,
    };
    if d < 1 || d > u32::MAX as u64 {
        return Err(fail("d", format!("d must be a positive 32-bit integer, got {d}")));
    }
    let rule = match get("rule") {
        Some(e) => e.value.parse::<ChoiceRule>().map_err(|m| fail("rule", m.to_string()))?,
        None => ChoiceRule::Max,
    };
    let attachment = match get("attachment") {
        Some(e) => e
            .value
            .parse::<Attachment>()
            .map_err(|m| fail("attachment", m.to_string()))?,
        None => Attachment::Preferential,
    };
    let default_steps = if kind == ExperimentKind::Exact { 8 } else { 1_000_000 };
    let steps = match get("steps") {
        Some(e) => parse_count(&e.value).map_err(|m| fail("steps", m))?,
        None => default_steps,
    };
    if steps < 1 {
        return Err(fail("steps", "steps must be at least 1".into()));
    }
    if steps > MAX_EDGES as u64 {
        return Err(fail("steps", format!("steps must not exceed 2^31, got {steps}")));
    }
    if kind == ExperimentKind::Exact && steps > EXACT_CAP as u64 {
        return Err(fail(
            "steps",
            format!("exact enumeration is capped at {EXACT_CAP} steps, got {steps}"),
        ));
    }
    let n_steps = steps as usize;

    let checkpoints = match get("checkpoints") {
        Some(e) => parse_checkpoints(&e.value, n_steps).map_err(|m| fail("checkpoints", m))?,
        None => geometric_checkpoints(10_000, 10, n_steps),
    };
    let needs_checkpoints = matches!(kind, ExperimentKind::Grow | ExperimentKind::Urn | ExperimentKind::Hub);
    if needs_checkpoints && checkpoints.is_empty() {
        return Err(fail(
            "checkpoints",
            format!("no checkpoint falls in [1, {n_steps}]; set `checkpoints` explicitly"),
        ));
    }
    if kind == ExperimentKind::Hub && checkpoints.len() < 2 {
        return Err(fail("checkpoints", "hub reports need at least two checkpoints".into()));
    }

    let seeds = match get("seeds") {
        Some(e) => parse_seeds(&e.value).map_err(|m| fail("seeds", m))?,
        None => vec![1],
    };
    if kind.is_stochastic() && seeds.is_empty() {
        return Err(fail("seeds", "seed list is empty".into()));
    }
    let out = get("out").map_or_else(|| PathBuf::from("out"), |e| PathBuf::from(&e.value));

    let model = ModelConfig::new(d as u32, rule, attachment, seeds.first().copied().unwrap_or(0))
        .map_err(|e| fail("d", e.to_string()))?;
    Ok(ExperimentSpec {
        kind,
        model,
        n_steps,
        checkpoints,
        seeds,
        out,
    })
}

/// Non-negative integer written plainly, with `_` separators, as `a^b` or as
/// an integral `XeY`.
pub fn parse_count(s: &str) -> Result<u64, String> {
    let s = s.trim().replace('_', "");
    if let Some((base, exp)) = s.split_once('^') {
        let base: u64 = base.trim().parse().map_err(|_| format!("bad number `{s}`"))?;
        let exp: u32 = exp.trim().parse().map_err(|_| format!("bad exponent in `{s}`"))?;
        return base.checked_pow(exp).ok_or_else(|| format!("`{s}` overflows"));
    }
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    if s.contains(['e', 'E']) {
        let v: f64 = s.parse().map_err(|_| format!("bad number `{s}`"))?;
        if v >= 0.0 && v.fract() == 0.0 && v < 1.8e19 {
            return Ok(v as u64);
        }
    }
    Err(format!("expected a non-negative integer, found `{s}`"))
}

fn parse_checkpoints(s: &str, n_steps: usize) -> Result<Vec<usize>, String> {
    if let Some(rest) = s.strip_prefix("geometric:") {
        let (start, factor) = rest
            .split_once(',')
            .ok_or_else(|| "expected `geometric:start,factor`".to_string())?;
        let start = parse_count(start)? as usize;
        let factor = parse_count(factor)? as usize;
        if start < 1 || factor < 2 {
            return Err("geometric checkpoints need start >= 1 and factor >= 2".into());
        }
        return Ok(geometric_checkpoints(start, factor, n_steps));
    }
    let list = s
        .split(',')
        .map(|p| parse_count(p).map(|v| v as usize))
        .collect::<Result<Vec<_>, _>>()?;
    if list.windows(2).any(|w| w[0] >= w[1]) {
        return Err("checkpoints must be strictly increasing".into());
    }
    if list.iter().any(|&c| c == 0 || c > n_steps) {
        return Err(format!("checkpoints must lie in [1, {n_steps}]"));
    }
    Ok(list)
}

fn parse_seeds(s: &str) -> Result<Vec<u64>, String> {
    let seeds: Vec<u64> = if let Some((a, b)) = s.split_once("..") {
        let (a, b) = (parse_count(a)?, parse_count(b)?);
        if a > b {
            return Err(format!("empty seed range {a}..{b}"));
        }
        (a..=b).collect()
    } else if let Some((base, count)) = s.split_once('+') {
        let (base, count) = (parse_count(base)?, parse_count(count)?);
        (0..count).map(|i| base.wrapping_add(i)).collect()
    } else {
        s.split(',').map(parse_count).collect::<Result<_, _>>()?
    };
    let mut sorted = seeds.clone();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err("duplicate seed".into());
    }
    Ok(seeds)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example_spec() {
        let spec = parse_spec("kind=grow\nd=3\nsteps=1000000\nseeds=1..20").unwrap();
        assert_eq!(spec.kind, ExperimentKind::Grow);
        assert_eq!(spec.model.d, 3);
        assert_eq!(spec.n_steps, 1_000_000);
        assert_eq!(spec.seeds, (1..=20).collect::<Vec<_>>());
        assert_eq!(spec.checkpoints, vec![10_000, 100_000, 1_000_000]);
    }

    #[test]
    fn defaults() {
        let spec = parse_spec("# only comments\n\n").unwrap();
        assert_eq!(spec.model.rule, ChoiceRule::Max);
        assert_eq!(spec.model.attachment, Attachment::Preferential);
        assert_eq!(spec.model.d, 2);
        assert_eq!(spec.seeds, vec![1]);
        assert_eq!(spec.out, PathBuf::from("out"));
        assert_eq!(parse_spec("kind = exact").unwrap().n_steps, 8);
    }

    #[test]
    fn zero_draws_names_key() {
        let err = parse_spec("kind = grow\nd=0").unwrap_err();
        assert_eq!(err.key.as_deref(), Some("d"));
        assert_eq!(err.line, Some(2));
        assert!(err.to_string().contains("`d`"), "{err}");
    }

    #[test]
    fn malformed_line_reports_number() {
        let err = parse_spec("d = 2\n\nthis is not a pair\n").unwrap_err();
        assert_eq!(err.line, Some(3));
        assert!(err.to_string().starts_with("line 3"));
    }

    #[test]
    fn unknown_and_duplicate_keys() {
        assert_eq!(parse_spec("colour = red").unwrap_err().key.as_deref(), Some("colour"));
        assert_eq!(parse_spec("d=2\nd=3").unwrap_err().line, Some(2));
        assert!(parse_spec("steps = 0").is_err());
        assert!(parse_spec("rule = best").is_err());
        assert!(parse_spec("kind = exact\nsteps = 13").is_err());
    }

    #[test]
    fn number_forms() {
        assert_eq!(parse_count("10^6"), Ok(1_000_000));
        assert_eq!(parse_count("1e6"), Ok(1_000_000));
        assert_eq!(parse_count("1_000"), Ok(1000));
        assert!(parse_count("1.5").is_err());
        assert!(parse_count("-3").is_err());
    }

    #[test]
    fn checkpoint_forms() {
        let s = parse_spec("steps = 10^7\ncheckpoints = geometric:10^4,10").unwrap();
        assert_eq!(s.checkpoints, vec![10_000, 100_000, 1_000_000, 10_000_000]);
        let s = parse_spec("steps = 500\ncheckpoints = 10, 100, 500").unwrap();
        assert_eq!(s.checkpoints, vec![10, 100, 500]);
        assert!(parse_spec("steps = 500\ncheckpoints = 100, 10").is_err());
        assert!(parse_spec("steps = 500\ncheckpoints = 1000").is_err());
        // default geometric schedule leaves nothing below 10^4
        assert!(parse_spec("steps = 500").is_err());
        assert!(parse_spec("kind = hub\nsteps = 10^4").is_err());
    }

    #[test]
    fn seed_forms() {
        assert_eq!(parse_spec("seeds = 7+3").unwrap().seeds, vec![7, 8, 9]);
        assert_eq!(parse_spec("seeds = 5, 2, 9").unwrap().seeds, vec![5, 2, 9]);
        assert!(parse_spec("seeds = 3,3").is_err());
        assert!(parse_spec("seeds = 9..2").is_err());
    }

    #[test]
    fn overrides_win() {
        let spec = parse_spec_with_overrides("d = 2\nsteps = 10^5", &[("d", "4".into())]).unwrap();
        assert_eq!(spec.model.d, 4);
        let err = parse_spec_with_overrides("", &[("d", "0".into())]).unwrap_err();
        assert_eq!((err.line, err.key.as_deref()), (None, Some("d")));
    }
}
