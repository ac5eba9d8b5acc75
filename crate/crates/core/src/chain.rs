//! Chains of edges that witness failures of the two-stage coloring.
//!
//! A monochromatic edge of color `i` in the initial coloring is explained by
//! an *ordered chain* `(C_1, …, C_k)`: consecutive edges meet in exactly one
//! vertex `v_j ∈ δ_{i-k+j}`, which is the last vertex of `C_j` and the first
//! of `C_{j+1}`. Every other vertex of `C_j` carries color `i - k + j`, and
//! `C_k` is the failing edge. A deflected vertex is explained the same way by
//! an *improper chain* that ends in the edge that blocked it. A dangerous
//! edge `A` is explained by a *complex chain* whose last element is the
//! pseudo-edge `A' = A ∩ (δ_{r-1} ∪ Δ_r)`.

use std::collections::HashSet;

use serde::Serialize;

use crate::algorithm1::InitialColoring;
use crate::coloring::Color;
use crate::error::{Error, Result};
use crate::hypergraph::{binomial_u128, Hypergraph};
use crate::interval::{IntervalPartition, Slot, WeightAssignment};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ChainKind {
    Ordered,
    Improper,
    Complex,
}

/// A linking vertex and its weight.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Link {
    pub v: usize,
    pub x: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainRecord {
    pub kind: ChainKind,
    pub color: Color,
    /// Edge indices `C_1, …, C_k`; for complex chains `C_k` is the full
    /// dangerous edge.
    pub edges: Vec<usize>,
    pub links: Vec<Link>,
    /// The deflected vertex closing an improper chain.
    #[serde(rename = "terminal")]
    pub terminal_vertex: Option<usize>,
    /// `U(A)` for complex chains.
    #[serde(rename = "U")]
    pub u_set: Option<Vec<usize>>,
    /// `A'` for complex chains.
    #[serde(rename = "reduced", skip_serializing_if = "Option::is_none")]
    pub reduced_edge: Option<Vec<usize>>,
}

impl ChainRecord {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

/// A failure event of the initial coloring.
#[derive(Debug, Clone, Copy)]
pub enum Failure<'a> {
    /// Edge `edge` is monochromatic of `color`.
    MonoEdge { edge: usize, color: Color },
    /// `vertex ∈ δ_color` was deflected to `color + 1`.
    Deflected { vertex: usize, color: Color },
    /// Edge `edge` is dangerous with respect to the candidate sets.
    Dangerous {
        edge: usize,
        candidate_sets: &'a [Vec<usize>],
    },
}

fn intersection(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().copied().filter(|v| b.contains(v)).collect()
}

/// Whether `(a, b)` is a conflicting pair for color `i`: the two edges share
/// exactly one vertex `v`, `v` is the last vertex of `b` and the first of
/// `a`, `v ∈ δ_{i-1}`, and every other vertex of `b` has color `i - 1`.
pub fn is_conflicting_pair(
    part: &IntervalPartition,
    w: &WeightAssignment,
    c0: &InitialColoring,
    b: &[usize],
    a: &[usize],
    i: Color,
) -> bool {
    if i < 2 {
        return false;
    }
    let common = intersection(a, b);
    let [v] = common[..] else { return false };
    w.last_of(b) == v
        && w.first_of(a) == v
        && part.locate(w.weight(v)) == Ok(Slot::Small(i as usize - 1))
        && b.iter()
            .all(|&u| u == v || c0.coloring.get(u) == Some(i - 1))
}

/// Walks backwards from the first vertex of the current edge, following the
/// recorded blocking edges. Returns the preceding edges and links in chain
/// order.
fn walk_back(
    h: &Hypergraph,
    w: &WeightAssignment,
    c0: &InitialColoring,
    mut first: usize,
    mut color: usize,
) -> Result<(Vec<usize>, Vec<Link>)> {
    let mut edges = Vec::new();
    let mut links = Vec::new();
    loop {
        match c0.slots[first] {
            Slot::Large(j) if j == color => break,
            Slot::Small(j) if j == color && !c0.is_deflected(first) => break,
            Slot::Small(j) if j + 1 == color && c0.is_deflected(first) => {
                let b = c0.blocking[first].expect("deflected vertices record a blocking edge");
                edges.push(b);
                links.push(Link {
                    v: first,
                    x: w.weight(first),
                });
                first = w.first_of(h.edge(b));
                color -= 1;
            }
            slot => {
                return Err(Error::Extraction(format!(
                    "vertex {first} in {slot:?} cannot start an edge of color {color}"
                )))
            }
        }
    }
    edges.reverse();
    links.reverse();
    Ok((edges, links))
}

fn union_of(sets: &[Vec<usize>]) -> HashSet<usize> {
    sets.iter().flatten().copied().collect()
}

/// Extracts the chain that explains `failure`.
pub fn extract_chain(
    h: &Hypergraph,
    part: &IntervalPartition,
    w: &WeightAssignment,
    c0: &InitialColoring,
    failure: Failure<'_>,
) -> Result<ChainRecord> {
    match failure {
        Failure::MonoEdge { edge, color } => {
            if c0.coloring.monochromatic_color(h.edge(edge)) != Some(color) {
                return Err(Error::Extraction(format!(
                    "edge {edge} is not monochromatic of color {color}"
                )));
            }
            let first = w.first_of(h.edge(edge));
            let (mut edges, links) = walk_back(h, w, c0, first, color as usize)?;
            edges.push(edge);
            Ok(ChainRecord {
                kind: ChainKind::Ordered,
                color,
                edges,
                links,
                terminal_vertex: None,
                u_set: None,
                reduced_edge: None,
            })
        }
        Failure::Deflected { vertex, color } => {
            let edge = match (c0.slots[vertex], c0.blocking[vertex]) {
                (Slot::Small(j), Some(e)) if j == color as usize => e,
                _ => {
                    return Err(Error::Extraction(format!(
                        "vertex {vertex} was not deflected out of δ_{color}"
                    )))
                }
            };
            let first = w.first_of(h.edge(edge));
            let (mut edges, links) = walk_back(h, w, c0, first, color as usize)?;
            edges.push(edge);
            Ok(ChainRecord {
                kind: ChainKind::Improper,
                color,
                edges,
                links,
                terminal_vertex: Some(vertex),
                u_set: None,
                reduced_edge: None,
            })
        }
        Failure::Dangerous {
            edge,
            candidate_sets,
        } => {
            let r = part.num_colors();
            let pool = union_of(candidate_sets);
            let (u_set, reduced): (Vec<usize>, Vec<usize>) =
                h.edge(edge).iter().partition(|v| pool.contains(v));
            if u_set.is_empty() || reduced.iter().any(|&v| c0.color(v) as usize != r) {
                return Err(Error::Extraction(format!("edge {edge} is not dangerous")));
            }
            let (mut edges, links) = if reduced.is_empty() {
                (Vec::new(), Vec::new())
            } else {
                walk_back(h, w, c0, w.first_of(&reduced), r)?
            };
            edges.push(edge);
            Ok(ChainRecord {
                kind: ChainKind::Complex,
                color: r as Color,
                edges,
                links,
                terminal_vertex: None,
                u_set: Some(u_set),
                reduced_edge: Some(reduced),
            })
        }
    }
}

/// Checks every structural property of a chain record against the
/// partition, the weights and the initial coloring. Complex chains need the
/// candidate sets.
pub fn validate_chain(
    h: &Hypergraph,
    part: &IntervalPartition,
    w: &WeightAssignment,
    c0: &InitialColoring,
    rec: &ChainRecord,
    candidate_sets: Option<&[Vec<usize>]>,
) -> std::result::Result<(), String> {
    let k = rec.edges.len();
    let r = part.num_colors();
    let i = rec.color as usize;
    if k == 0 {
        return Err("empty chain".into());
    }
    if rec.links.len() != k - 1 {
        return Err(format!("{} links for {k} edges", rec.links.len()));
    }
    if i < k || i > r {
        return Err(format!("a {k}-chain cannot be for color {i} with r = {r}"));
    }
    if rec.edges.iter().any(|&e| e >= h.num_edges()) {
        return Err("edge index out of range".into());
    }
    let slot = |u: usize| part.locate(w.weight(u)).expect("weights lie in [0, 1)");
    let color = |u: usize| c0.coloring.get(u).map_or(0, |c| c as usize);

    let mut seq: Vec<Vec<usize>> = rec.edges.iter().map(|&e| h.edge(e).to_vec()).collect();
    match rec.kind {
        ChainKind::Complex => {
            if i != r {
                return Err("complex chains are for the last color".into());
            }
            let sets = candidate_sets.ok_or("complex chain needs candidate sets")?;
            let pool = union_of(sets);
            let a = &seq[k - 1];
            let reduced: Vec<usize> = a
                .iter()
                .copied()
                .filter(|&u| {
                    matches!(slot(u), Slot::Large(j) if j == r) || slot(u) == Slot::Small(r - 1)
                })
                .collect();
            let u_set: Vec<usize> = a.iter().copied().filter(|u| !reduced.contains(u)).collect();
            if rec.reduced_edge.as_ref() != Some(&reduced) {
                return Err(format!("A' should be {reduced:?}"));
            }
            if rec.u_set.as_ref() != Some(&u_set) {
                return Err(format!("U(A) should be {u_set:?}"));
            }
            if u_set.is_empty() || !u_set.iter().all(|u| pool.contains(u)) {
                return Err("U(A) must be a nonempty subset of the candidate sets".into());
            }
            seq[k - 1] = reduced;
        }
        _ if rec.reduced_edge.is_some() || rec.u_set.is_some() => {
            return Err("only complex chains carry A' and U(A)".into());
        }
        _ => {}
    }

    let links: Vec<usize> = rec.links.iter().map(|l| l.v).collect();
    for (j, link) in rec.links.iter().enumerate() {
        if link.x != w.weight(link.v) {
            return Err(format!(
                "link {} has weight {} not {}",
                link.v,
                w.weight(link.v),
                link.x
            ));
        }
        // v_{j+1} ∈ δ_{i-k+j+1} (0-based j).
        let want = Slot::Small(i - k + j + 1);
        if slot(link.v) != want {
            return Err(format!(
                "link {} lies in {:?}, expected {want:?}",
                link.v,
                slot(link.v)
            ));
        }
    }

    // Intersection pattern.
    for a in 0..k {
        for b in a + 1..k {
            let common = intersection(&seq[a], &seq[b]);
            let ok = if b == a + 1 {
                common == [links[a]]
            } else {
                common.is_empty()
            };
            if !ok {
                return Err(format!("edges {a} and {b} of the chain meet in {common:?}"));
            }
        }
    }

    // Interval membership, position by position.
    let improper = rec.kind == ChainKind::Improper;
    for (j, edge) in seq.iter().enumerate() {
        let base = i + j + 1 - k; // color carried by C_{j+1}
        let prev = j.checked_sub(1).map(|p| links[p]);
        let next = links.get(j).copied();
        for &u in edge {
            if Some(u) == prev || Some(u) == next {
                continue;
            }
            let s = slot(u);
            let after_prev =
                |lo: usize| prev.is_some_and(|p| s == Slot::Small(lo) && w.precedes(p, u));
            let ok = if j + 1 == k {
                s == Slot::Large(i)
                    || (improper && s == Slot::Small(i))
                    || (k > 1 && after_prev(i - 1))
            } else {
                s == Slot::Large(base)
                    || next.is_some_and(|x| s == Slot::Small(base) && w.precedes(u, x))
                    || (j > 0 && after_prev(base - 1))
            };
            if !ok {
                return Err(format!("vertex {u} of edge {j} lies in {s:?}"));
            }
        }
    }

    // Colors.
    for (j, edge) in seq.iter().enumerate().take(k - 1) {
        let base = i + j + 1 - k;
        for &u in edge {
            let want = if u == links[j] { base + 1 } else { base };
            if color(u) != want {
                return Err(format!(
                    "vertex {u} has color {}, expected {want}",
                    color(u)
                ));
            }
        }
        if !c0.is_deflected(links[j]) {
            return Err(format!("link {} was not deflected", links[j]));
        }
    }
    let last = &seq[k - 1];
    match rec.terminal_vertex {
        Some(t) if improper => {
            if !last.contains(&t) || w.last_of(last) != t {
                return Err(format!("terminal vertex {t} is not the last vertex of C_k"));
            }
            if slot(t) != Slot::Small(i) || color(t) != i + 1 || !c0.is_deflected(t) {
                return Err(format!(
                    "terminal vertex {t} is not a deflected δ_{i} vertex"
                ));
            }
            if let Some(&u) = last.iter().find(|&&u| u != t && color(u) != i) {
                return Err(format!("vertex {u} of the last edge is not colored {i}"));
            }
        }
        None if !improper => {
            if let Some(&u) = last.iter().find(|&&u| color(u) != i) {
                return Err(format!("vertex {u} of the last edge is not colored {i}"));
            }
        }
        _ => return Err("terminal vertex present iff the chain is improper".into()),
    }

    for j in 0..k - 1 {
        if !is_conflicting_pair(part, w, c0, &seq[j], &seq[j + 1], (i + j + 2 - k) as Color) {
            return Err(format!(
                "edges {j} and {} do not form a conflicting pair",
                j + 1
            ));
        }
    }
    Ok(())
}

/// Whether the ordered tuple `edges` forms an ordered chain for `color` in
/// the initial coloring.
pub fn forms_ordered_chain(
    h: &Hypergraph,
    part: &IntervalPartition,
    w: &WeightAssignment,
    c0: &InitialColoring,
    edges: &[usize],
    color: Color,
) -> bool {
    let mut links = Vec::with_capacity(edges.len().saturating_sub(1));
    for pair in edges.windows(2) {
        let common = intersection(h.edge(pair[0]), h.edge(pair[1]));
        let [v] = common[..] else { return false };
        links.push(Link { v, x: w.weight(v) });
    }
    let rec = ChainRecord {
        kind: ChainKind::Ordered,
        color,
        edges: edges.to_vec(),
        links,
        terminal_vertex: None,
        u_set: None,
        reduced_edge: None,
    };
    validate_chain(h, part, w, c0, &rec, None).is_ok()
}

/// Which chain shapes to enumerate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CandidateKind {
    Ordered,
    /// Chains `(C_1, …, C_{k-1}, A)` with `A = last_edge` fixed.
    Complex {
        last_edge: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainCandidates {
    pub count: u64,
    pub sequences: Vec<Vec<usize>>,
    /// `2·C(|E|, k)` for ordered chains, `2·C(|E|, k-1)` for complex ones.
    pub bound: u128,
}

/// Pairwise overlap structure used by the candidate search.
struct Overlaps<'a> {
    h: &'a Hypergraph,
    /// Edges meeting a given edge in exactly one vertex.
    single: Vec<Vec<usize>>,
}

impl<'a> Overlaps<'a> {
    fn new(h: &'a Hypergraph) -> Self {
        let e = h.num_edges();
        let mut single = vec![Vec::new(); e];
        let mut shared = vec![0u32; e];
        let mut touched = Vec::new();
        for (a, edge) in h.edges().iter().enumerate() {
            for &v in edge {
                for &b in h.incident(v) {
                    if b != a {
                        if shared[b] == 0 {
                            touched.push(b);
                        }
                        shared[b] += 1;
                    }
                }
            }
            touched.sort_unstable();
            for &b in &touched {
                if shared[b] == 1 {
                    single[a].push(b);
                }
                shared[b] = 0;
            }
            touched.clear();
        }
        Self { h, single }
    }

    fn disjoint(&self, a: usize, b: usize) -> bool {
        let (x, y) = (self.h.edge(a), self.h.edge(b));
        let (mut i, mut j) = (0, 0);
        while i < x.len() && j < y.len() {
            match x[i].cmp(&y[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return false,
            }
        }
        true
    }
}

struct CandidateSearch<'a> {
    ov: Overlaps<'a>,
    max_len: usize,
    excluded: Option<usize>,
    /// Every edge must be allowed to close the chain at depth `max_len`.
    closing: Option<Vec<bool>>,
    counts: Vec<u64>,
    keep: Option<Vec<Vec<usize>>>,
    visited: u128,
    budget: u128,
}

impl CandidateSearch<'_> {
    fn extend(&mut self, seq: &mut Vec<usize>) -> Result<()> {
        self.visited += 1;
        if self.visited > self.budget {
            return Err(Error::BudgetExceeded {
                needed: self.visited,
                budget: self.budget,
            });
        }
        let depth = seq.len();
        let closes = self
            .closing
            .as_ref()
            .is_none_or(|ok| ok[*seq.last().expect("nonempty")]);
        if closes {
            self.counts[depth - 1] += 1;
            if depth == self.max_len {
                if let Some(keep) = self.keep.as_mut() {
                    keep.push(seq.clone());
                }
            }
        }
        if depth == self.max_len {
            return Ok(());
        }
        let last = seq[depth - 1];
        let next: Vec<usize> = self.ov.single[last]
            .iter()
            .copied()
            .filter(|&f| {
                Some(f) != self.excluded && seq[..depth - 1].iter().all(|&g| self.ov.disjoint(f, g))
            })
            .collect();
        for f in next {
            seq.push(f);
            self.extend(seq)?;
            seq.pop();
        }
        Ok(())
    }

    fn run(&mut self) -> Result<()> {
        let mut seq = Vec::with_capacity(self.max_len);
        for e in 0..self.ov.h.num_edges() {
            if Some(e) == self.excluded {
                continue;
            }
            seq.push(e);
            self.extend(&mut seq)?;
            seq.pop();
        }
        Ok(())
    }
}

/// Default cap on search nodes for the candidate enumeration.
pub const DEFAULT_CHAIN_BUDGET: u128 = 50_000_000;

fn search(
    h: &Hypergraph,
    len: usize,
    kind: CandidateKind,
    keep: bool,
    budget: u128,
) -> Result<CandidateSearch<'_>> {
    let (excluded, closing) = match kind {
        CandidateKind::Ordered => (None, None),
        CandidateKind::Complex { last_edge } => {
            if last_edge >= h.num_edges() {
                return Err(Error::InvalidParameters(format!("no edge {last_edge}")));
            }
            let a = h.edge(last_edge);
            let closing = h
                .edges()
                .iter()
                .map(|e| e.iter().any(|v| a.contains(v)))
                .collect();
            (Some(last_edge), Some(closing))
        }
    };
    let mut s = CandidateSearch {
        ov: Overlaps::new(h),
        max_len: len,
        excluded,
        closing,
        counts: vec![0; len],
        keep: keep.then(Vec::new),
        visited: 0,
        budget,
    };
    if len > 0 {
        s.run()?;
    }
    Ok(s)
}

/// All edge sequences with the chain intersection pattern: consecutive
/// edges share exactly one vertex, all other pairs are disjoint. For
/// complex chains the last edge is fixed, the first `k - 1` edges avoid it,
/// and `C_{k-1}` must meet it.
pub fn enumerate_chain_candidates(
    h: &Hypergraph,
    k: usize,
    kind: CandidateKind,
    budget: u128,
) -> Result<ChainCandidates> {
    let (len, bound) = match kind {
        CandidateKind::Ordered if k >= 1 => (k, 2 * binomial_u128(h.num_edges(), k)),
        CandidateKind::Complex { .. } if k >= 2 => (k - 1, 2 * binomial_u128(h.num_edges(), k - 1)),
        _ => {
            return Err(Error::InvalidParameters(format!(
                "k = {k} is too small for {kind:?}"
            )))
        }
    };
    let s = search(h, len, kind, true, budget)?;
    let mut sequences = s.keep.unwrap_or_default();
    if let CandidateKind::Complex { last_edge } = kind {
        for seq in &mut sequences {
            seq.push(last_edge);
        }
    }
    Ok(ChainCandidates {
        count: s.counts[len - 1],
        sequences,
        bound,
    })
}

/// Candidate counts for every chain length `1..=max_k` in one pass. For
/// complex chains entry `k - 1` counts chains of `k` edges including the
/// fixed last edge, so entry 0 is always 1.
pub fn chain_candidate_counts(
    h: &Hypergraph,
    max_k: usize,
    kind: CandidateKind,
    budget: u128,
) -> Result<Vec<u64>> {
    match kind {
        CandidateKind::Ordered => Ok(search(h, max_k, kind, false, budget)?.counts),
        CandidateKind::Complex { .. } => {
            let s = search(h, max_k.saturating_sub(1), kind, false, budget)?;
            let mut out = vec![1];
            out.extend(s.counts);
            out.truncate(max_k);
            Ok(out)
        }
    }
}
