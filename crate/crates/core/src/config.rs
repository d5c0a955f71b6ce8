use std::fmt;
use std::str::FromStr;

use crate::error::Error;

/// How the attachment target is picked among the drawn candidates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChoiceRule {
    /// Largest degree wins.
    Max,
    /// Smallest degree wins.
    Min,
    /// Only the first draw is used.
    None,
}

/// Law of a single candidate draw.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Attachment {
    /// Vertex `w` with probability `deg(w) / 2m`.
    Preferential,
    /// Every vertex with probability `1 / (m + 1)`.
    Uniform,
}

/// Resolution of ties between distinct candidates of equal (extreme) degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum TieBreak {
    #[default]
    UniformAmongTied,
}

/// Immutable description of one model variant plus the seed of its RNG stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ModelConfig {
    pub d: u32,
    pub rule: ChoiceRule,
    pub attachment: Attachment,
    pub tie_break: TieBreak,
    pub seed: u64,
}

impl ModelConfig {
    pub fn new(d: u32, rule: ChoiceRule, attachment: Attachment, seed: u64) -> Result<Self, Error> {
        if d == 0 {
            return Err(Error::InvalidArgument("d must be at least 1".into()));
        }
        Ok(ModelConfig {
            d,
            rule,
            attachment,
            tie_break: TieBreak::UniformAmongTied,
            seed,
        })
    }

    /// Max-choice preferential attachment with `d` draws.
    pub fn max_choice(d: u32, seed: u64) -> Self {
        Self::new(d, ChoiceRule::Max, Attachment::Preferential, seed).expect("d >= 1")
    }

    pub fn with_seed(self, seed: u64) -> Self {
        ModelConfig { seed, ..self }
    }

    /// Number of draws that actually influence the choice; `none` reads one.
    pub fn effective_draws(&self) -> u32 {
        match self.rule {
            ChoiceRule::None => 1,
            _ => self.d,
        }
    }
}

impl fmt::Display for ChoiceRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ChoiceRule::Max => "max",
            ChoiceRule::Min => "min",
            ChoiceRule::None => "none",
        })
    }
}

impl FromStr for ChoiceRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "max" => Ok(ChoiceRule::Max),
            "min" => Ok(ChoiceRule::Min),
            "none" => Ok(ChoiceRule::None),
            other => Err(Error::InvalidArgument(format!(
                "unknown choice rule `{other}` (expected max, min or none)"
            ))),
        }
    }
}

impl fmt::Display for Attachment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Attachment::Preferential => "preferential",
            Attachment::Uniform => "uniform",
        })
    }
}

impl FromStr for Attachment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "preferential" | "pref" => Ok(Attachment::Preferential),
            "uniform" | "unif" => Ok(Attachment::Uniform),
            other => Err(Error::InvalidArgument(format!(
                "unknown attachment `{other}` (expected preferential or uniform)"
            ))),
        }
    }
}
