//! Las Vegas search for an equitable coloring.
//!
//! Instances with few vertices relative to the edge size go through a
//! random balanced coloring (path B). All others go through the two-stage
//! interval coloring followed by the rebalance step (path A). Every attempt
//! draws from its own derived seed and every returned coloring is verified.

use serde::Serialize;

use crate::algorithm1::run_algorithm1;
use crate::balanced::sample_targeted_coloring;
use crate::chain::{extract_chain, ChainRecord, Failure};
use crate::coloring::{equitable_targets, is_equitable, is_proper, Color, Coloring};
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::interval::{choose_p, sample_weights, IntervalPartition};
use crate::oracle::{brute_force_equitable, DEFAULT_ENUMERATION_BUDGET};
use crate::rebalance::{compute_p_tilde, compute_q, excess_shortage, RebalancePlan};
use crate::seed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ForcePath {
    Auto,
    BalancedOnly,
    Algorithm1Only,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SolvePath {
    Balanced,
    Algorithm1,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveConfig {
    pub max_restarts: u64,
    pub seed: u64,
    pub enumeration_budget: u128,
    pub force_path: ForcePath,
    pub allow_fallback_repair: bool,
    /// Reject instances where `r` does not divide `m`.
    pub strict_divisibility: bool,
    /// After exhausting all restarts, ask the brute-force oracle whether an
    /// equitable coloring exists at all.
    pub oracle_on_exhaustion: bool,
    /// Record chain records and rebalance plans for every attempt.
    pub explain: bool,
}

impl Default for SolveConfig {
    fn default() -> Self {
        Self {
            max_restarts: 10_000,
            seed: 0,
            enumeration_budget: DEFAULT_ENUMERATION_BUDGET,
            force_path: ForcePath::Auto,
            allow_fallback_repair: true,
            strict_divisibility: false,
            oracle_on_exhaustion: false,
            explain: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FailureKind {
    /// The random balanced coloring had a monochromatic edge.
    ImproperBalanced,
    MonoEdgeInC0,
    RebalanceInfeasible,
    RepairFailed,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AttemptDiagnostic {
    pub attempt: u64,
    pub failure: Option<FailureKind>,
    /// Set when `p̃` exceeded 1 and was clamped.
    pub p_tilde_clamped: bool,
    pub repaired: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub chains: Vec<ChainRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub plan: Option<RebalancePlan>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Success(Coloring),
    Exhausted,
    InfeasibleByOracle,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveReport {
    pub outcome: Outcome,
    pub attempts: u64,
    pub path: SolvePath,
    pub diagnostics: Vec<AttemptDiagnostic>,
}

impl SolveReport {
    pub fn coloring(&self) -> Option<&Coloring> {
        match &self.outcome {
            Outcome::Success(c) => Some(c),
            _ => None,
        }
    }

    pub fn is_success(&self) -> bool {
        self.coloring().is_some()
    }

    /// How often each failure kind occurred, in declaration order.
    pub fn failure_counts(&self) -> Vec<(FailureKind, u64)> {
        let kinds = [
            FailureKind::ImproperBalanced,
            FailureKind::MonoEdgeInC0,
            FailureKind::RebalanceInfeasible,
            FailureKind::RepairFailed,
        ];
        kinds
            .into_iter()
            .map(|k| {
                (
                    k,
                    self.diagnostics
                        .iter()
                        .filter(|d| d.failure == Some(k))
                        .count() as u64,
                )
            })
            .filter(|&(_, n)| n > 0)
            .collect()
    }
}

impl Serialize for Outcome {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = s.serialize_map(None)?;
        match self {
            Outcome::Success(c) => {
                map.serialize_entry("status", "Success")?;
                map.serialize_entry("coloring", c)?;
            }
            Outcome::Exhausted => map.serialize_entry("status", "Exhausted")?,
            Outcome::InfeasibleByOracle => map.serialize_entry("status", "InfeasibleByOracle")?,
        }
        map.end()
    }
}

/// Path B is used when `m < n²(r-1) / (2 ln n)`.
pub fn route(m: usize, n: usize, r: usize, force: ForcePath) -> SolvePath {
    match force {
        ForcePath::BalancedOnly => SolvePath::Balanced,
        ForcePath::Algorithm1Only => SolvePath::Algorithm1,
        ForcePath::Auto => {
            let nf = n as f64;
            if (m as f64) < nf * nf * (r as f64 - 1.0) / (2.0 * nf.ln()) {
                SolvePath::Balanced
            } else {
                SolvePath::Algorithm1
            }
        }
    }
}

/// Targets that give the ceiling to the currently largest classes, so that
/// an already equitable coloring needs no moves.
fn adaptive_targets(c: &Coloring) -> Vec<usize> {
    let (m, r) = (c.len(), c.num_colors());
    let mut by_size: Vec<usize> = (0..r).collect();
    by_size.sort_by_key(|&k| std::cmp::Reverse(c.class_sizes()[k]));
    let mut targets = vec![m / r; r];
    for &k in by_size.iter().take(m % r) {
        targets[k] += 1;
    }
    targets
}

/// Moves vertices from classes above target to classes below target while
/// keeping the coloring proper. Vertices are tried in `order`. Returns
/// `None` when no move is possible before the targets are met.
pub fn greedy_repair(
    h: &Hypergraph,
    c: &Coloring,
    targets: &[usize],
    order: &[usize],
) -> Result<Option<Coloring>> {
    let r = c.num_colors();
    if targets.len() != r {
        return Err(Error::SizeMismatch {
            expected: r,
            found: targets.len(),
        });
    }
    if targets.iter().sum::<usize>() != c.len() {
        return Err(Error::InvalidParameters("targets do not sum to m".into()));
    }
    if !is_proper(h, c)? {
        return Err(Error::NotProper);
    }
    let mut c = c.clone();
    let fits = |c: &Coloring, v: usize, to: Color| {
        h.incident(v)
            .iter()
            .all(|&e| h.edge(e).iter().any(|&u| u != v && c.get(u) != Some(to)))
    };
    for _ in 0..=h.num_vertices() * r {
        let under: Vec<Color> = (1..=r as Color)
            .filter(|&k| c.class_size(k) < targets[k as usize - 1])
            .collect();
        if under.is_empty() {
            return Ok(Some(c));
        }
        let mv = order.iter().find_map(|&v| {
            let from = c.get(v)?;
            if c.class_size(from) <= targets[from as usize - 1] {
                return None;
            }
            under.iter().find(|&&to| fits(&c, v, to)).map(|&to| (v, to))
        });
        match mv {
            Some((v, to)) => c.assign(v, to),
            None => return Ok(None),
        }
    }
    Ok(None)
}

struct Attempt {
    coloring: Option<Coloring>,
    diag: AttemptDiagnostic,
}

fn repair(
    h: &Hypergraph,
    c: &Coloring,
    order: &[usize],
    diag: &mut AttemptDiagnostic,
) -> Result<Option<Coloring>> {
    let fixed = greedy_repair(h, c, &adaptive_targets(c), order)?;
    diag.repaired = fixed.is_some();
    if fixed.is_none() {
        diag.failure = Some(FailureKind::RepairFailed);
    }
    Ok(fixed)
}

fn attempt_balanced(h: &Hypergraph, r: usize, s: u64, diag: AttemptDiagnostic) -> Attempt {
    let targets = equitable_targets(h.num_vertices(), r);
    let c = sample_targeted_coloring(&targets, seed::derive(s, seed::BALANCED, 0));
    let proper = h.edges().iter().all(|e| c.monochromatic_color(e).is_none());
    let mut diag = diag;
    if !proper {
        diag.failure = Some(FailureKind::ImproperBalanced);
    }
    Attempt {
        coloring: proper.then_some(c),
        diag,
    }
}

fn attempt_algorithm1(
    h: &Hypergraph,
    part: &IntervalPartition,
    cfg: &SolveConfig,
    s: u64,
    mut diag: AttemptDiagnostic,
) -> Result<Attempt> {
    let (m, n, r) = (h.num_vertices(), h.uniformity(), part.num_colors());
    let w = sample_weights(m, seed::derive(s, seed::WEIGHTS, 0));
    let c0 = run_algorithm1(h, part, &w)?;
    let mono = c0.coloring.monochromatic_edges(h);
    if let Some(&(edge, color)) = mono.first() {
        diag.failure = Some(FailureKind::MonoEdgeInC0);
        if cfg.explain {
            let rec = extract_chain(h, part, &w, &c0, Failure::MonoEdge { edge, color })?;
            diag.chains.push(rec);
        }
        return Ok(Attempt {
            coloring: None,
            diag,
        });
    }
    let c = &c0.coloring;
    let (ex, sh) = excess_shortage(c, m, r);
    let done = |c: Coloring, diag| Attempt {
        coloring: Some(c),
        diag,
    };
    if ex.iter().all(|&e| e == 0) {
        return Ok(done(c0.coloring, diag));
    }

    let confined = sh[..r - 1].iter().all(|&x| x == 0);
    if confined {
        let p = part.p();
        let pt = match compute_p_tilde(compute_q(m, n, r, p), m, r, p) {
            Ok(pt) => pt,
            Err(Error::RegimeViolation(_)) => {
                diag.p_tilde_clamped = true;
                1.0
            }
            Err(e) => return Err(e),
        };
        let cand_seed = seed::derive(s, seed::CANDIDATES, 0);
        match RebalancePlan::build(h, part, &w, c, Some(pt), cand_seed) {
            Ok(plan) => {
                let out = plan.apply(c)?;
                if cfg.explain {
                    diag.plan = Some(plan);
                }
                if is_equitable(h, &out)? {
                    return Ok(done(out, diag));
                }
            }
            Err(Error::RebalanceInfeasible { .. }) => {
                diag.failure = Some(FailureKind::RebalanceInfeasible);
            }
            Err(e) => return Err(e),
        }
    }
    if !cfg.allow_fallback_repair {
        if diag.failure.is_none() {
            diag.failure = Some(FailureKind::RepairFailed);
        }
        return Ok(Attempt {
            coloring: None,
            diag,
        });
    }
    diag.failure = None;
    let fixed = repair(h, c, w.sorted_order(), &mut diag)?;
    Ok(Attempt {
        coloring: fixed,
        diag,
    })
}

/// Searches for an equitable `r`-coloring of `h`.
pub fn solve_equitable(h: &Hypergraph, r: usize, cfg: &SolveConfig) -> Result<SolveReport> {
    let (m, n) = (h.num_vertices(), h.uniformity());
    if r < 2 {
        return Err(Error::InvalidParameters(format!(
            "r = {r} must be at least 2"
        )));
    }
    if cfg.max_restarts == 0 {
        return Err(Error::InvalidParameters(
            "max_restarts must be positive".into(),
        ));
    }
    if cfg.strict_divisibility && m % r != 0 {
        return Err(Error::NotDivisible { m, r });
    }
    let path = route(m, n, r, cfg.force_path);
    let part = match path {
        SolvePath::Algorithm1 => Some(IntervalPartition::new(choose_p(n, r)?, r)?),
        SolvePath::Balanced => None,
    };

    let mut diagnostics = Vec::new();
    for t in 0..cfg.max_restarts {
        let s = seed::derive(cfg.seed, seed::SOLVE_ATTEMPT, t);
        let diag = AttemptDiagnostic {
            attempt: t,
            failure: None,
            p_tilde_clamped: false,
            repaired: false,
            chains: Vec::new(),
            plan: None,
        };
        let attempt = match &part {
            None => attempt_balanced(h, r, s, diag),
            Some(part) => attempt_algorithm1(h, part, cfg, s, diag)?,
        };
        diagnostics.push(attempt.diag);
        if let Some(c) = attempt.coloring {
            if is_equitable(h, &c)? {
                return Ok(SolveReport {
                    outcome: Outcome::Success(c),
                    attempts: t + 1,
                    path,
                    diagnostics,
                });
            }
        }
    }
    let outcome = if cfg.oracle_on_exhaustion
        && brute_force_equitable(h, r, cfg.enumeration_budget)?.is_none()
    {
        Outcome::InfeasibleByOracle
    } else {
        Outcome::Exhausted
    };
    Ok(SolveReport {
        outcome,
        attempts: cfg.max_restarts,
        path,
        diagnostics,
    })
}
