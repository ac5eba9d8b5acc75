//! The parameter `p`, the partition of `[0, 1)` into alternating large and
//! small subintervals, and random vertex weights.
//!
//! For `r` colors the unit interval is cut into
//! `Δ_1, δ_1, Δ_2, δ_2, …, δ_{r-1}, Δ_r` where every `Δ_i` has length
//! `(1 - p) / r` and every `δ_j` has length `p / (r - 1)`. All intervals are
//! half-open, so a boundary point belongs to the interval it starts.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seed;

/// `((r - 1) / r) · ln(n / ln n) / n`.
pub fn choose_p(n: usize, r: usize) -> Result<f64> {
    if n < 2 || r < 2 {
        return Err(Error::InvalidParameters(format!(
            "choose_p needs n >= 2 and r >= 2, got n = {n}, r = {r}"
        )));
    }
    let (nf, rf) = (n as f64, r as f64);
    let p = (rf - 1.0) / rf * (nf / nf.ln()).ln() / nf;
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidParameters(format!(
            "p = {p} is outside (0, 1)"
        )));
    }
    Ok(p)
}

/// A subinterval of the partition. Indices are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "index")]
pub enum Slot {
    Large(usize),
    Small(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntervalPartition {
    p: f64,
    r: usize,
    large: Vec<(f64, f64)>,
    /// `(α_j, β_j)` for each small interval.
    small: Vec<(f64, f64)>,
}

impl IntervalPartition {
    pub fn new(p: f64, r: usize) -> Result<Self> {
        if r < 2 {
            return Err(Error::InvalidParameters(format!("need r >= 2, got {r}")));
        }
        if !(0.0..1.0).contains(&p) {
            return Err(Error::InvalidParameters(format!(
                "need p in [0, 1), got {p}"
            )));
        }
        let big = (1.0 - p) / r as f64;
        let little = p / (r - 1) as f64;
        let large = (1..=r)
            .map(|i| {
                let i = i as f64;
                ((i - 1.0) * (big + little), i * big + (i - 1.0) * little)
            })
            .collect();
        let small = (1..r)
            .map(|j| {
                let j = j as f64;
                (j * big + (j - 1.0) * little, j * (big + little))
            })
            .collect();
        Ok(Self { p, r, large, small })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn num_colors(&self) -> usize {
        self.r
    }

    /// `[start, end)` of `Δ_i`.
    pub fn large(&self, i: usize) -> (f64, f64) {
        self.large[i - 1]
    }

    /// `[α_j, β_j)` of `δ_j`.
    pub fn small(&self, j: usize) -> (f64, f64) {
        self.small[j - 1]
    }

    pub fn bounds(&self, slot: Slot) -> (f64, f64) {
        match slot {
            Slot::Large(i) => self.large(i),
            Slot::Small(j) => self.small(j),
        }
    }

    pub fn length(&self, slot: Slot) -> f64 {
        let (a, b) = self.bounds(slot);
        b - a
    }

    /// All `2r - 1` subintervals in left-to-right order.
    pub fn slots(&self) -> Vec<Slot> {
        let mut out = Vec::with_capacity(2 * self.r - 1);
        for i in 1..=self.r {
            out.push(Slot::Large(i));
            if i < self.r {
                out.push(Slot::Small(i));
            }
        }
        out
    }

    /// The subinterval containing `x`.
    pub fn locate(&self, x: f64) -> Result<Slot> {
        if !(0.0..1.0).contains(&x) {
            return Err(Error::InvalidParameters(format!(
                "weight {x} outside [0, 1)"
            )));
        }
        // Last nonempty interval whose left end is <= x. The final Δ_r
        // absorbs rounding in its computed right end.
        let mut found = Slot::Large(1);
        for slot in self.slots() {
            let (lo, hi) = self.bounds(slot);
            if lo > x {
                break;
            }
            if hi > lo {
                found = slot;
            }
        }
        Ok(found)
    }
}

/// Vertex weights and the vertex order they induce (ties by vertex id).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightAssignment {
    weights: Vec<f64>,
    order: Vec<usize>,
    #[serde(skip)]
    rank: Vec<usize>,
}

impl WeightAssignment {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if let Some((v, w)) = weights
            .iter()
            .enumerate()
            .find(|(_, w)| !(0.0..1.0).contains(*w))
        {
            return Err(Error::InvalidParameters(format!(
                "weight {w} of vertex {v} outside [0, 1)"
            )));
        }
        let mut order: Vec<usize> = (0..weights.len()).collect();
        order.sort_by(|&a, &b| weights[a].total_cmp(&weights[b]).then(a.cmp(&b)));
        let mut rank = vec![0; weights.len()];
        for (pos, &v) in order.iter().enumerate() {
            rank[v] = pos;
        }
        Ok(Self {
            weights,
            order,
            rank,
        })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weight(&self, v: usize) -> f64 {
        self.weights[v]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Vertices by increasing weight.
    pub fn sorted_order(&self) -> &[usize] {
        &self.order
    }

    /// Position of `v` in the sorted order.
    pub fn rank(&self, v: usize) -> usize {
        self.rank[v]
    }

    /// Whether `u` comes before `v` in the induced order.
    pub fn precedes(&self, u: usize, v: usize) -> bool {
        self.rank[u] < self.rank[v]
    }

    /// Lowest-weight vertex of `edge`.
    pub fn first_of(&self, edge: &[usize]) -> usize {
        *edge
            .iter()
            .min_by_key(|&&v| self.rank[v])
            .expect("nonempty edge")
    }

    /// Highest-weight vertex of `edge`.
    pub fn last_of(&self, edge: &[usize]) -> usize {
        *edge
            .iter()
            .max_by_key(|&&v| self.rank[v])
            .expect("nonempty edge")
    }
}

/// `m` i.i.d. uniform weights in `[0, 1)` from `ChaCha8Rng::seed_from_u64(seed)`.
pub fn sample_weights(m: usize, seed: u64) -> WeightAssignment {
    let mut rng = seed::rng(seed);
    let weights = (0..m).map(|_| rng.gen::<f64>()).collect();
    WeightAssignment::new(weights).expect("gen::<f64>() lies in [0, 1)")
}
