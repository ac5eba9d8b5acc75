//! Moving the excess of colors `1..r-1` onto color `r`.
//!
//! Each vertex of `Δ_i` (`i < r`) becomes a candidate with probability
//! `p̃`. An edge is dangerous when recoloring some of its candidates to `r`
//! could make it monochromatic. One candidate of every dangerous edge is
//! forbidden, and the lightest remaining candidates are recolored.

use std::collections::HashSet;

use rand::Rng;
use serde::Serialize;

use crate::coloring::{equitable_targets, Color, Coloring};
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::interval::{IntervalPartition, Slot, WeightAssignment};
use crate::seed;

/// Excess and shortage of every color relative to the equitable targets.
pub fn excess_shortage(c: &Coloring, m: usize, r: usize) -> (Vec<usize>, Vec<usize>) {
    let targets = equitable_targets(m, r);
    (1..=r)
        .map(|a| {
            let size = c.class_size(a as Color);
            let t = targets[a - 1];
            (size.saturating_sub(t), t.saturating_sub(size))
        })
        .unzip()
}

pub fn compute_q(m: usize, n: usize, r: usize, p: f64) -> f64 {
    let (m, n, r) = (m as f64, n as f64, r as f64);
    m * p / (r * (r - 1.0)) + 2.0 * (13.0 * m * r.ln() / r).sqrt() + (r + 1.0) / r * n / n.ln()
}

/// Inclusion probability of a `Δ_i` vertex in `V_i`. Values above 1 mean the
/// instance is too small for the construction.
pub fn compute_p_tilde(q: f64, m: usize, r: usize, p: f64) -> Result<f64> {
    let pt = q * r as f64 / ((1.0 - p) * m as f64);
    if pt.is_nan() || pt < 0.0 {
        return Err(Error::InvalidParameters(format!("p̃ = {pt}")));
    }
    if pt > 1.0 {
        return Err(Error::RegimeViolation(format!("p̃ = {pt} exceeds 1")));
    }
    Ok(pt)
}

/// `V_1, …, V_{r-1}`, each sorted by vertex id.
pub fn sample_candidate_sets(
    h: &Hypergraph,
    part: &IntervalPartition,
    w: &WeightAssignment,
    p_tilde: f64,
    seed: u64,
) -> Result<Vec<Vec<usize>>> {
    if !(0.0..=1.0).contains(&p_tilde) {
        return Err(Error::InvalidParameters(format!(
            "p̃ = {p_tilde} not in [0, 1]"
        )));
    }
    let r = part.num_colors();
    let mut rng = seed::rng(seed);
    let mut sets = vec![Vec::new(); r - 1];
    for v in 0..h.num_vertices() {
        if let Slot::Large(i) = part.locate(w.weight(v))? {
            if i < r && rng.gen_bool(p_tilde) {
                sets[i - 1].push(v);
            }
        }
    }
    Ok(sets)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DangerousEdge {
    pub edge: usize,
    /// Vertices of the edge lying in some candidate set.
    #[serde(rename = "U")]
    pub u_set: Vec<usize>,
}

/// Edges whose vertices outside the candidate sets all have color `r`, with
/// at least one vertex inside.
pub fn find_dangerous_edges(
    h: &Hypergraph,
    c0: &Coloring,
    candidate_sets: &[Vec<usize>],
) -> Vec<DangerousEdge> {
    let r = c0.num_colors() as Color;
    let pool: HashSet<usize> = candidate_sets.iter().flatten().copied().collect();
    h.edges()
        .iter()
        .enumerate()
        .filter_map(|(e, edge)| {
            let (u_set, rest): (Vec<usize>, Vec<usize>) =
                edge.iter().partition(|v| pool.contains(v));
            (!u_set.is_empty() && rest.iter().all(|&v| c0.get(v) == Some(r)))
                .then_some(DangerousEdge { edge: e, u_set })
        })
        .collect()
}

/// `W_1, …, W_{r-1}`: forbid the lowest-id vertex of every `U(A)`, then take
/// the `ex_i` lightest remaining vertices of `V_i`.
pub fn select_recolor_sets(
    candidate_sets: &[Vec<usize>],
    dangerous: &[DangerousEdge],
    ex: &[usize],
    w: &WeightAssignment,
) -> Result<Vec<Vec<usize>>> {
    let forbidden: HashSet<usize> = dangerous
        .iter()
        .filter_map(|d| d.u_set.iter().min().copied())
        .collect();
    candidate_sets
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let mut usable: Vec<usize> = v
                .iter()
                .copied()
                .filter(|u| !forbidden.contains(u))
                .collect();
            let needed = ex.get(i).copied().unwrap_or(0);
            if usable.len() < needed {
                return Err(Error::RebalanceInfeasible {
                    color: i + 1,
                    available: usable.len(),
                    needed,
                });
            }
            usable.sort_by(|&a, &b| w.weight(a).total_cmp(&w.weight(b)).then(a.cmp(&b)));
            usable.truncate(needed);
            usable.sort_unstable();
            Ok(usable)
        })
        .collect()
}

/// Recolors every vertex of `W_i` from `i` to `r`.
pub fn apply_recolor(c0: &Coloring, recolor_sets: &[Vec<usize>]) -> Result<Coloring> {
    let r = c0.num_colors() as Color;
    let mut c = c0.clone();
    for (i, set) in recolor_sets.iter().enumerate() {
        let expected = i as Color + 1;
        for &v in set {
            if v >= c.len() || c.get(v) != Some(expected) {
                return Err(Error::WrongColor {
                    vertex: v,
                    expected,
                });
            }
            c.assign(v, r);
        }
    }
    Ok(c)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RebalancePlan {
    pub ex: Vec<usize>,
    pub sh: Vec<usize>,
    pub q: f64,
    pub p_tilde: f64,
    #[serde(rename = "V")]
    pub candidate_sets: Vec<Vec<usize>>,
    pub dangerous: Vec<DangerousEdge>,
    #[serde(rename = "W")]
    pub recolor_sets: Vec<Vec<usize>>,
}

impl RebalancePlan {
    /// Runs every step after the initial coloring. `p_tilde` overrides the
    /// computed inclusion probability. Fails when a candidate set is too
    /// small; the partially built plan is not returned.
    pub fn build(
        h: &Hypergraph,
        part: &IntervalPartition,
        w: &WeightAssignment,
        c0: &Coloring,
        p_tilde: Option<f64>,
        seed: u64,
    ) -> Result<Self> {
        let (m, n, r, p) = (
            h.num_vertices(),
            h.uniformity(),
            part.num_colors(),
            part.p(),
        );
        let (ex, sh) = excess_shortage(c0, m, r);
        let q = compute_q(m, n, r, p);
        let p_tilde = match p_tilde {
            Some(pt) => pt,
            None => compute_p_tilde(q, m, r, p)?,
        };
        let candidate_sets = sample_candidate_sets(h, part, w, p_tilde, seed)?;
        let dangerous = find_dangerous_edges(h, c0, &candidate_sets);
        let recolor_sets = select_recolor_sets(&candidate_sets, &dangerous, &ex, w)?;
        Ok(Self {
            ex,
            sh,
            q,
            p_tilde,
            candidate_sets,
            dangerous,
            recolor_sets,
        })
    }

    pub fn apply(&self, c0: &Coloring) -> Result<Coloring> {
        apply_recolor(c0, &self.recolor_sets)
    }
}
