//! Uniform hypergraphs: construction, text/JSON formats and random generation.
//!
//! Text format: a header line `m n E`, then `E` lines of `n` space-separated
//! vertex ids. Lines starting with `#` and blank lines are skipped.
//! JSON format: `{"m": int, "n": int, "edges": [[int, ...], ...]}`.

use std::collections::HashSet;
use std::fmt::Write as _;

use rand::seq::index;
use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seed;

/// An `n`-uniform hypergraph on the vertex set `0..m`.
///
/// Edges are stored as sorted vertex lists, deduplicated, in first-seen
/// order. A per-vertex incidence index lists the edges through each vertex
/// in increasing edge index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    m: usize,
    n: usize,
    edges: Vec<Vec<usize>>,
    incidence: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct RawHypergraph {
    m: usize,
    n: usize,
    edges: Vec<Vec<usize>>,
}

impl Hypergraph {
    /// Validates and builds a hypergraph. Duplicate edges are dropped.
    pub fn new(m: usize, n: usize, edges: Vec<Vec<usize>>) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidParameters("m must be positive".into()));
        }
        if n < 2 {
            return Err(Error::InvalidParameters(format!(
                "edge uniformity must be at least 2, got {n}"
            )));
        }
        let mut seen = HashSet::with_capacity(edges.len());
        let mut stored = Vec::with_capacity(edges.len());
        for (idx, mut edge) in edges.into_iter().enumerate() {
            validate_edge(idx, &mut edge, m, n)?;
            if seen.insert(edge.clone()) {
                stored.push(edge);
            }
        }
        let mut incidence = vec![Vec::new(); m];
        for (e, edge) in stored.iter().enumerate() {
            for &v in edge {
                incidence[v].push(e);
            }
        }
        Ok(Self {
            m,
            n,
            edges: stored,
            incidence,
        })
    }

    /// The hypergraph with no edges.
    pub fn empty(m: usize, n: usize) -> Result<Self> {
        Self::new(m, n, Vec::new())
    }

    pub fn num_vertices(&self) -> usize {
        self.m
    }

    pub fn uniformity(&self) -> usize {
        self.n
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> &[usize] {
        &self.edges[e]
    }

    /// Indices of the edges containing `v`, increasing.
    pub fn incident(&self, v: usize) -> &[usize] {
        &self.incidence[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.incidence[v].len()
    }

    /// Parses the text format.
    pub fn parse_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        let (hline, header) = lines.next().ok_or_else(|| Error::MalformedHeader {
            line: 1,
            reason: "missing header".into(),
        })?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(Error::MalformedHeader {
                line: hline,
                reason: format!("expected `m n E`, found {} fields", fields.len()),
            });
        }
        let parse_field = |s: &str, name: &str| {
            s.parse::<usize>().map_err(|_| Error::MalformedHeader {
                line: hline,
                reason: format!("{name} is not a nonnegative integer: {s:?}"),
            })
        };
        let m = parse_field(fields[0], "m")?;
        let n = parse_field(fields[1], "n")?;
        let e = parse_field(fields[2], "E")?;
        if m == 0 || n < 2 {
            return Err(Error::MalformedHeader {
                line: hline,
                reason: "need m >= 1 and n >= 2".into(),
            });
        }

        let mut edges = Vec::with_capacity(e);
        for (line, body) in lines {
            let edge = body
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<usize>().map_err(|_| Error::MalformedEdge {
                        line,
                        reason: format!("not a vertex id: {tok:?}"),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            edges.push(edge);
        }
        if edges.len() != e {
            return Err(Error::EdgeCountMismatch {
                expected: e,
                found: edges.len(),
            });
        }
        Self::new(m, n, edges)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} {}\n", self.m, self.n, self.edges.len());
        for edge in &self.edges {
            let line: Vec<String> = edge.iter().map(|v| v.to_string()).collect();
            let _ = writeln!(out, "{}", line.join(" "));
        }
        out
    }

    pub fn parse_json(text: &str) -> Result<Self> {
        let raw: RawHypergraph =
            serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))?;
        Self::new(raw.m, raw.n, raw.edges)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&RawHypergraph {
            m: self.m,
            n: self.n,
            edges: self.edges.clone(),
        })
        .expect("hypergraph serializes")
    }

    /// Parses either format, choosing JSON when the first non-blank
    /// character is `{`.
    pub fn parse_any(text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            Self::parse_json(text)
        } else {
            Self::parse_text(text)
        }
    }

    /// `num_edges` distinct uniformly random `n`-subsets of `0..m`,
    /// deterministic in `seed`.
    pub fn generate_random(m: usize, n: usize, num_edges: usize, seed: u64) -> Result<Self> {
        if m == 0 || n < 2 || n > m {
            return Err(Error::InvalidParameters(format!(
                "need 2 <= n <= m, got m = {m}, n = {n}"
            )));
        }
        let total = binomial_u128(m, n);
        if num_edges as u128 > total {
            return Err(Error::InvalidParameters(format!(
                "{num_edges} edges requested but C({m},{n}) = {total}"
            )));
        }
        let mut rng = seed::rng(seed::derive(seed, seed::GENERATOR, 0));

        // Dense requests: pick from the full list of subsets.
        if 2 * num_edges as u128 > total && total <= 1 << 22 {
            let mut all = all_subsets(m, n);
            let (chosen, _) = all.partial_shuffle(&mut rng, num_edges);
            return Self::new(m, n, chosen.to_vec());
        }

        let mut seen = HashSet::with_capacity(num_edges);
        let mut edges = Vec::with_capacity(num_edges);
        while edges.len() < num_edges {
            let mut edge = index::sample(&mut rng, m, n).into_vec();
            edge.sort_unstable();
            if seen.insert(edge.clone()) {
                edges.push(edge);
            }
        }
        Self::new(m, n, edges)
    }
}

fn validate_edge(idx: usize, edge: &mut [usize], m: usize, n: usize) -> Result<()> {
    if edge.len() != n {
        return Err(Error::WrongArity {
            edge: idx,
            expected: n,
            found: edge.len(),
        });
    }
    if let Some(&v) = edge.iter().find(|&&v| v >= m) {
        return Err(Error::VertexOutOfRange {
            edge: idx,
            vertex: v,
            m,
        });
    }
    edge.sort_unstable();
    if let Some(w) = edge.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::DuplicateVertex {
            edge: idx,
            vertex: w[0],
        });
    }
    Ok(())
}

/// C(a, b), saturating at `u128::MAX`.
pub fn binomial_u128(a: usize, b: usize) -> u128 {
    if b > a {
        return 0;
    }
    let b = b.min(a - b);
    let mut acc: u128 = 1;
    for i in 0..b {
        // acc * (a - i) / (i + 1) stays integral at every step.
        acc = match acc.checked_mul((a - i) as u128) {
            Some(x) => x / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// All `n`-subsets of `0..m` in lexicographic order.
pub fn all_subsets(m: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if n > m {
        return out;
    }
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        let Some(i) = (0..n).rev().find(|&i| cur[i] != i + m - n) else {
            return out;
        };
        cur[i] += 1;
        for j in i + 1..n {
            cur[j] = cur[j - 1] + 1;
        }
    }
}
