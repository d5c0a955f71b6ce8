//! The growing tree and its single-step transition.
//!
//! `P_1` is one edge on vertices `1` and `2`. The step that produces `P_m`
//! from `P_{m-1}` draws candidates from `P_{m-1}`, picks one of them with the
//! configured choice rule and hangs the new vertex `m + 1` off it.
//!
//! Degree-proportional draws use the endpoint list: every edge contributes
//! both endpoints, so vertex `v` occurs exactly `deg(v)` times and a uniform
//! index into the list is a draw with probability `deg(v) / 2m`. The list is
//! append-only and doubles as the edge list in creation order.

use std::fmt::Write as _;

use rand::Rng;
use smallvec::SmallVec;

use crate::config::{Attachment, ChoiceRule, ModelConfig};

/// 1-based vertex identifier.
pub type VertexId = u32;

/// Largest supported edge count.
pub const MAX_EDGES: usize = 1 << 31;

pub type Candidates = SmallVec<[VertexId; 4]>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeState {
    m: usize,
    // index 0 is an unused sentinel so that `degrees[v]` is the degree of v
    degrees: Vec<u32>,
    endpoints: Vec<VertexId>,
    // histogram[k] = number of vertices of degree k
    histogram: Vec<u64>,
    max_degree: u32,
}

/// Everything that happened during one growth step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepOutcome {
    /// Edge count after the step.
    pub n: usize,
    pub candidates: Candidates,
    pub chosen: VertexId,
    /// Degree of `chosen` before the new edge was added.
    pub chosen_degree: u32,
    pub new_vertex: VertexId,
    pub max_before: u32,
    pub max_after: u32,
}

impl Default for TreeState {
    fn default() -> Self {
        Self::new()
    }
}

impl TreeState {
    /// The one-edge tree `P_1`.
    pub fn new() -> Self {
        TreeState {
            m: 1,
            degrees: vec![0, 1, 1],
            endpoints: vec![1, 2],
            histogram: vec![0, 2],
            max_degree: 1,
        }
    }

    /// Builds the tree in which vertex `i + 3` was attached to `targets[i]`.
    ///
    /// Returns `None` if some target does not exist yet at its step.
    pub fn from_attachments(targets: &[VertexId]) -> Option<Self> {
        let mut state = Self::new();
        for &t in targets {
            if t == 0 || t as usize > state.vertex_count() {
                return None;
            }
            state.attach(t);
        }
        Some(state)
    }

    pub fn with_capacity(edges: usize) -> Self {
        let mut state = Self::new();
        state.degrees.reserve(edges.saturating_sub(1));
        state.endpoints.reserve(2 * edges.saturating_sub(1));
        state
    }

    /// Number of edges.
    pub fn edges(&self) -> usize {
        self.m
    }

    pub fn vertex_count(&self) -> usize {
        self.m + 1
    }

    pub fn degree(&self, v: VertexId) -> u32 {
        self.degrees[v as usize]
    }

    /// Degrees of vertices `1..=m+1`, in id order.
    pub fn degrees(&self) -> &[u32] {
        &self.degrees[1..]
    }

    pub fn endpoints(&self) -> &[VertexId] {
        &self.endpoints
    }

    /// Vertex count per degree; entry `k` counts vertices of degree `k`.
    pub fn histogram(&self) -> &[u64] {
        &self.histogram
    }

    pub fn count_with_degree(&self, k: u32) -> u64 {
        self.histogram.get(k as usize).copied().unwrap_or(0)
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    /// Edges `(target, new vertex)` in creation order.
    pub fn edge_iter(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.endpoints.chunks_exact(2).map(|e| (e[0], e[1]))
    }

    /// Draws one candidate vertex according to the attachment law.
    #[inline]
    pub fn sample_candidate<R: Rng + ?Sized>(&self, attachment: Attachment, rng: &mut R) -> VertexId {
        debug_assert!(self.m >= 1);
        match attachment {
            Attachment::Preferential => self.endpoints[rng.gen_range(0..self.endpoints.len())],
            Attachment::Uniform => rng.gen_range(0..self.vertex_count()) as VertexId + 1,
        }
    }

    /// Picks the attachment target among `candidates` (drawn with
    /// repetition). Duplicates count once when breaking ties; a tie between
    /// distinct vertices consumes one uniform draw from `rng`.
    pub fn select_attachment<R: Rng + ?Sized>(
        &self,
        candidates: &[VertexId],
        rule: ChoiceRule,
        rng: &mut R,
    ) -> VertexId {
        debug_assert!(!candidates.is_empty());
        let better: fn(u32, u32) -> bool = match rule {
            ChoiceRule::None => return candidates[0],
            ChoiceRule::Max => |a, b| a > b,
            ChoiceRule::Min => |a, b| a < b,
        };

        let mut tied: Candidates = SmallVec::new();
        let mut best = self.degree(candidates[0]);
        tied.push(candidates[0]);
        for &c in &candidates[1..] {
            let deg = self.degree(c);
            if better(deg, best) {
                best = deg;
                tied.clear();
                tied.push(c);
            } else if deg == best && !tied.contains(&c) {
                tied.push(c);
            }
        }
        if tied.len() == 1 {
            tied[0]
        } else {
            tied[rng.gen_range(0..tied.len())]
        }
    }

    /// One growth step: `d` candidate draws, then (if needed) a tie-break
    /// draw, then a new leaf attached to the selected vertex.
    pub fn grow_step<R: Rng + ?Sized>(&mut self, config: &ModelConfig, rng: &mut R) -> StepOutcome {
        let draws = config.effective_draws();
        let candidates: Candidates = (0..draws)
            .map(|_| self.sample_candidate(config.attachment, rng))
            .collect();
        let chosen = self.select_attachment(&candidates, config.rule, rng);
        let max_before = self.max_degree;
        let chosen_degree = self.degree(chosen);
        let new_vertex = self.attach(chosen);
        StepOutcome {
            n: self.m,
            candidates,
            chosen,
            chosen_degree,
            new_vertex,
            max_before,
            max_after: self.max_degree,
        }
    }

    fn attach(&mut self, target: VertexId) -> VertexId {
        assert!(self.m < MAX_EDGES, "tree size limit reached");
        let new_vertex = (self.m + 2) as VertexId;
        let old = self.degrees[target as usize];
        let new = old + 1;
        self.degrees[target as usize] = new;
        self.degrees.push(1);
        self.endpoints.push(target);
        self.endpoints.push(new_vertex);

        self.histogram[old as usize] -= 1;
        if self.histogram.len() <= new as usize {
            self.histogram.push(0);
        }
        self.histogram[new as usize] += 1;
        self.histogram[1] += 1;
        self.max_degree = self.max_degree.max(new);
        self.m += 1;
        new_vertex
    }

    /// Degree histogram computed from scratch.
    pub fn recount_histogram(&self) -> Vec<u64> {
        let mut hist = vec![0u64; self.max_degree as usize + 1];
        for &deg in self.degrees() {
            if hist.len() <= deg as usize {
                hist.resize(deg as usize + 1, 0);
            }
            hist[deg as usize] += 1;
        }
        hist
    }

    /// Full O(m) consistency check of every structural invariant.
    pub fn check_invariants(&self) -> Result<(), String> {
        let n_vertices = self.vertex_count();
        if self.degrees.len() != n_vertices + 1 {
            return Err(format!("{} degrees for {} vertices", self.degrees.len() - 1, n_vertices));
        }
        let degree_sum: u64 = self.degrees().iter().map(|&d| d as u64).sum();
        if degree_sum != 2 * self.m as u64 {
            return Err(format!("degree sum {degree_sum} != 2m = {}", 2 * self.m));
        }
        if self.endpoints.len() != 2 * self.m {
            return Err(format!("endpoint list has {} entries, want {}", self.endpoints.len(), 2 * self.m));
        }
        let mut occurrences = vec![0u32; n_vertices + 1];
        for &v in &self.endpoints {
            if v == 0 || v as usize > n_vertices {
                return Err(format!("endpoint {v} out of range"));
            }
            occurrences[v as usize] += 1;
        }
        if occurrences[1..] != self.degrees[1..] {
            return Err("endpoint multiplicities differ from degrees".into());
        }
        let recount = self.recount_histogram();
        let trimmed = trim_zeros(&self.histogram);
        if trim_zeros(&recount) != trimmed {
            return Err(format!("histogram {trimmed:?} != recount {recount:?}"));
        }
        let true_max = self.degrees().iter().copied().max().unwrap_or(0);
        if true_max != self.max_degree {
            return Err(format!("tracked max {} != true max {true_max}", self.max_degree));
        }
        Ok(())
    }

    /// Tab-separated edge list, one `u\tv` line per edge in creation order.
    pub fn export_edge_list(&self) -> String {
        let mut out = String::with_capacity(self.m * 16);
        for (u, v) in self.edge_iter() {
            writeln!(out, "{u}\t{v}").expect("writing to String");
        }
        out
    }

    pub fn write_edge_list<W: std::io::Write>(&self, mut w: W) -> std::io::Result<()> {
        for (u, v) in self.edge_iter() {
            writeln!(w, "{u}\t{v}")?;
        }
        Ok(())
    }
}

fn trim_zeros(h: &[u64]) -> &[u64] {
    let end = h.iter().rposition(|&c| c != 0).map_or(0, |i| i + 1);
    &h[..end]
}
