//! Monte Carlo estimators for the random quantities of the construction and
//! an exact oracle for the initial coloring on tiny instances.
//!
//! The outcome of the two-stage coloring depends on the weights only through
//! the subinterval of every vertex and the relative order of the vertices
//! inside each small interval. The oracle enumerates both: a subinterval
//! assignment has probability equal to the product of the subinterval
//! lengths, and every order inside a group of `c` vertices has probability
//! `1 / c!`. Each configuration is replayed through the real algorithm on
//! synthetic weights.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::algorithm1::{run_algorithm1, InitialColoring};
use crate::balanced::{balanced_mono_prob, sample_targeted_coloring};
use crate::bounds::{lemma_bound, LemmaBound};
use crate::chain::forms_ordered_chain;
use crate::coloring::{equitable_targets, Color};
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::interval::{choose_p, sample_weights, IntervalPartition, Slot, WeightAssignment};
use crate::rebalance::{
    compute_p_tilde, compute_q, excess_shortage, find_dangerous_edges, sample_candidate_sets,
};
use crate::seed;

/// Default cap on (subinterval assignment, order) configurations.
pub const DEFAULT_EXACT_BUDGET: u128 = 20_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Quantity {
    /// Some edge is monochromatic in the initial coloring.
    MonoEdgeInC0,
    /// Number of deflected vertices of `δ_i`.
    ExpectedX(usize),
    /// Colors `1..r-1` are all at or above target and every excess is at
    /// most `mp/(r(r-1)) + sqrt(13 m ln r / r) + n/ln n`.
    ExcessDistribution,
    /// Number of dangerous edges.
    DangerousCount,
    /// A fixed edge is monochromatic under a random balanced coloring.
    BalancedMonoEdge,
    /// The edge tuple forms an ordered chain for `color`.
    ChainEvent { edges: Vec<usize>, color: Color },
    /// The vertex is deflected out of its small interval.
    DeflectedVertex(usize),
}

impl Quantity {
    pub fn is_probability(&self) -> bool {
        !matches!(self, Quantity::ExpectedX(_) | Quantity::DangerousCount)
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Quantity::MonoEdgeInC0 => write!(f, "MonoEdgeInC0"),
            Quantity::ExpectedX(i) => write!(f, "ExpectedX({i})"),
            Quantity::ExcessDistribution => write!(f, "ExcessDistribution"),
            Quantity::DangerousCount => write!(f, "DangerousCount"),
            Quantity::BalancedMonoEdge => write!(f, "BalancedMonoEdge"),
            Quantity::ChainEvent { edges, color } => {
                let list: Vec<String> = edges.iter().map(ToString::to_string).collect();
                write!(
                    f,
                    "ChainEvent([{}],k={},i={color})",
                    list.join(","),
                    edges.len()
                )
            }
            Quantity::DeflectedVertex(v) => write!(f, "DeflectedVertex({v})"),
        }
    }
}

impl Serialize for Quantity {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Parses `mono-edge`, `expected-x:I`, `excess`, `dangerous`,
/// `balanced-mono`, `chain:E1,E2,...@I` and `deflected:V`.
impl FromStr for Quantity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameters(format!("unknown quantity `{s}`"));
        let num = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
        let (name, arg) = match s.split_once(':') {
            Some((a, b)) => (a, Some(b)),
            None => (s, None),
        };
        Ok(match (name, arg) {
            ("mono-edge", None) => Quantity::MonoEdgeInC0,
            ("expected-x", Some(i)) => Quantity::ExpectedX(num(i)?),
            ("excess", None) => Quantity::ExcessDistribution,
            ("dangerous", None) => Quantity::DangerousCount,
            ("balanced-mono", None) => Quantity::BalancedMonoEdge,
            ("deflected", Some(v)) => Quantity::DeflectedVertex(num(v)?),
            ("chain", Some(arg)) => {
                let (edges, color) = arg.split_once('@').ok_or_else(bad)?;
                let edges = edges.split(',').map(num).collect::<Result<Vec<_>>>()?;
                Quantity::ChainEvent {
                    edges,
                    color: num(color)? as Color,
                }
            }
            _ => return Err(bad()),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComparisonKind {
    Exact,
    PaperBound,
}

impl Serialize for ComparisonKind {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(match self {
            ComparisonKind::Exact => "exact",
            ComparisonKind::PaperBound => "paper bound",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Comparison {
    pub kind: ComparisonKind,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimateReport {
    pub quantity: Quantity,
    pub trials: u64,
    pub estimate: f64,
    pub half_width: f64,
    pub comparison: Option<Comparison>,
    /// A bound printed alongside an exact comparison.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub context: Option<Comparison>,
}

impl EstimateReport {
    /// Whether `value` lies in `estimate ± half_width`, allowing for
    /// rounding in the exact value.
    pub fn covers(&self, value: f64) -> bool {
        (self.estimate - value).abs() <= self.half_width + 1e-12
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McParams {
    /// Width parameter of the partition; defaults to `choose_p(n, r)`.
    pub p: Option<f64>,
    /// Attach the exact oracle value where one exists.
    pub exact: bool,
    pub exact_budget: u128,
}

impl Default for McParams {
    fn default() -> Self {
        Self {
            p: None,
            exact: false,
            exact_budget: DEFAULT_EXACT_BUDGET,
        }
    }
}

/// Integer sums over trials. Merging is plain addition, so the result does
/// not depend on how trials are split or ordered.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Tally {
    pub trials: u64,
    pub sum: u64,
    pub sum_sq: u128,
}

impl Tally {
    pub fn add(&mut self, x: u64) {
        self.trials += 1;
        self.sum += x;
        self.sum_sq += u128::from(x) * u128::from(x);
    }

    pub fn merge(self, other: Tally) -> Tally {
        Tally {
            trials: self.trials + other.trials,
            sum: self.sum + other.sum,
            sum_sq: self.sum_sq + other.sum_sq,
        }
    }

    pub fn mean(&self) -> f64 {
        self.sum as f64 / self.trials as f64
    }

    /// `3 sqrt(p(1-p)/N)` for indicators, `3 sd / sqrt(N)` otherwise.
    pub fn half_width(&self, probability: bool) -> f64 {
        let n = self.trials as f64;
        let mean = self.mean();
        let var = if probability {
            mean * (1.0 - mean)
        } else {
            (self.sum_sq as f64 / n - mean * mean).max(0.0)
        };
        3.0 * (var / n).sqrt()
    }
}

/// Everything a trial needs that does not change between trials.
struct Setup<'a> {
    h: &'a Hypergraph,
    r: usize,
    part: IntervalPartition,
    quantity: &'a Quantity,
    p_tilde: f64,
    excess_cap: f64,
    fixed_edge: Vec<usize>,
}

impl<'a> Setup<'a> {
    fn new(quantity: &'a Quantity, h: &'a Hypergraph, r: usize, params: &McParams) -> Result<Self> {
        let (m, n) = (h.num_vertices(), h.uniformity());
        if r < 2 {
            return Err(Error::InvalidParameters(format!(
                "r = {r} must be at least 2"
            )));
        }
        let p = match params.p {
            Some(p) => p,
            None => choose_p(n, r)?,
        };
        let part = IntervalPartition::new(p, r)?;
        match quantity {
            Quantity::ExpectedX(i) if !(1..r).contains(i) => {
                return Err(Error::InvalidParameters(format!("X({i}) needs 1 <= i < r")))
            }
            Quantity::DeflectedVertex(v) if *v >= m => {
                return Err(Error::InvalidParameters(format!("no vertex {v}")))
            }
            Quantity::ChainEvent { edges, color } => {
                if edges.is_empty() || edges.iter().any(|&e| e >= h.num_edges()) {
                    return Err(Error::InvalidParameters("bad edge tuple".into()));
                }
                if !(1..=r as Color).contains(color) {
                    return Err(Error::InvalidParameters(format!("no color {color}")));
                }
            }
            _ => {}
        }
        let q = compute_q(m, n, r, p);
        // Desk-scale instances routinely push p̃ past 1; clamp as the solver does.
        let p_tilde = compute_p_tilde(q, m, r, p).unwrap_or(1.0);
        let rf = r as f64;
        let excess_cap = m as f64 * p / (rf * (rf - 1.0))
            + (13.0 * m as f64 * rf.ln() / rf).sqrt()
            + n as f64 / (n as f64).ln();
        let fixed_edge = match h.edges().first() {
            Some(e) => e.clone(),
            None => (0..n.min(m)).collect(),
        };
        Ok(Self {
            h,
            r,
            part,
            quantity,
            p_tilde,
            excess_cap,
            fixed_edge,
        })
    }

    /// The value of the quantity on one initial coloring.
    fn observe(&self, w: &WeightAssignment, c0: &InitialColoring) -> u64 {
        let h = self.h;
        match self.quantity {
            Quantity::MonoEdgeInC0 => u64::from(
                h.edges()
                    .iter()
                    .any(|e| c0.coloring.monochromatic_color(e).is_some()),
            ),
            Quantity::ExpectedX(i) => c0.x(*i) as u64,
            Quantity::ExcessDistribution => {
                let (ex, sh) = excess_shortage(&c0.coloring, h.num_vertices(), self.r);
                u64::from(
                    sh[..self.r - 1].iter().all(|&s| s == 0)
                        && ex.iter().all(|&e| e as f64 <= self.excess_cap),
                )
            }
            Quantity::ChainEvent { edges, color } => {
                u64::from(forms_ordered_chain(h, &self.part, w, c0, edges, *color))
            }
            Quantity::DeflectedVertex(v) => u64::from(c0.is_deflected(*v)),
            Quantity::DangerousCount | Quantity::BalancedMonoEdge => {
                unreachable!("not a function of the initial coloring")
            }
        }
    }

    fn trial(&self, trial_seed: u64) -> Result<u64> {
        let m = self.h.num_vertices();
        if *self.quantity == Quantity::BalancedMonoEdge {
            let targets = equitable_targets(m, self.r);
            let c = sample_targeted_coloring(&targets, seed::derive(trial_seed, seed::BALANCED, 0));
            return Ok(u64::from(c.monochromatic_color(&self.fixed_edge).is_some()));
        }
        let w = sample_weights(m, seed::derive(trial_seed, seed::WEIGHTS, 0));
        let c0 = run_algorithm1(self.h, &self.part, &w)?;
        if *self.quantity == Quantity::DangerousCount {
            let sets = sample_candidate_sets(
                self.h,
                &self.part,
                &w,
                self.p_tilde,
                seed::derive(trial_seed, seed::CANDIDATES, 0),
            )?;
            return Ok(find_dangerous_edges(self.h, &c0.coloring, &sets).len() as u64);
        }
        Ok(self.observe(&w, &c0))
    }
}

/// Runs trials `range` of an experiment. Trial `t` uses the seed
/// `derive(seed, MC_TRIAL, t)`.
pub fn mc_tally(
    quantity: &Quantity,
    h: &Hypergraph,
    r: usize,
    params: &McParams,
    range: std::ops::Range<u64>,
    seed: u64,
) -> Result<Tally> {
    let setup = Setup::new(quantity, h, r, params)?;
    let mut tally = Tally::default();
    for t in range {
        tally.add(setup.trial(seed::derive(seed, seed::MC_TRIAL, t))?);
    }
    Ok(tally)
}

pub fn mc_estimate(
    quantity: &Quantity,
    h: &Hypergraph,
    r: usize,
    params: &McParams,
    trials: u64,
    seed: u64,
) -> Result<EstimateReport> {
    if trials == 0 {
        return Err(Error::InvalidParameters("trials must be positive".into()));
    }
    let tally = mc_tally(quantity, h, r, params, 0..trials, seed)?;
    let (m, n) = (h.num_vertices(), h.uniformity());
    let bound = |kind, value| Some(Comparison { kind, value });
    let paper = |b| bound(ComparisonKind::PaperBound, lemma_bound(b, n, r));
    let exact = |event: C0Event| -> Result<Option<Comparison>> {
        if !params.exact {
            return Ok(None);
        }
        let p = Setup::new(quantity, h, r, params)?.part.p();
        let v = exact_c0_expectation(h, r, p, event, params.exact_budget)?;
        Ok(bound(ComparisonKind::Exact, v))
    };
    let (comparison, context) = match quantity {
        Quantity::MonoEdgeInC0 => match exact(C0Event::MonoEdgeExists)? {
            Some(c) => (Some(c), paper(LemmaBound::MonoEdgeProb)),
            None => (paper(LemmaBound::MonoEdgeProb), None),
        },
        Quantity::ExpectedX(i) => match exact(C0Event::DeflectedCount(*i))? {
            Some(c) => (Some(c), paper(LemmaBound::ExpectedX)),
            None => (paper(LemmaBound::ExpectedX), None),
        },
        Quantity::ExcessDistribution => {
            let lower = bound(
                ComparisonKind::PaperBound,
                0.5 - lemma_bound(LemmaBound::MonoEdgeProb, n, r),
            );
            match exact(C0Event::Excess)? {
                Some(c) => (Some(c), lower),
                None => (lower, None),
            }
        }
        Quantity::DangerousCount => (paper(LemmaBound::DangerousCount), None),
        Quantity::BalancedMonoEdge => {
            let v = (m % r == 0)
                .then(|| balanced_mono_prob(m, n, r))
                .transpose()?
                .map(|e| Comparison {
                    kind: ComparisonKind::Exact,
                    value: e.value,
                });
            (v, None)
        }
        Quantity::ChainEvent { edges, color } => {
            let chain = paper(LemmaBound::OrderedChainProb { k: edges.len() });
            match exact(C0Event::OrderedChain {
                edges: edges.clone(),
                color: *color,
            })? {
                Some(c) => (Some(c), chain),
                None => (chain, None),
            }
        }
        Quantity::DeflectedVertex(v) => (exact(C0Event::Deflected(*v))?, None),
    };
    Ok(EstimateReport {
        quantity: quantity.clone(),
        trials,
        estimate: tally.mean(),
        half_width: tally.half_width(quantity.is_probability()),
        comparison,
        context,
    })
}

/// Events and counts of the initial coloring handled by the exact oracle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum C0Event {
    MonoEdgeExists,
    Deflected(usize),
    OrderedChain {
        edges: Vec<usize>,
        color: Color,
    },
    /// `X(i)`; the oracle returns its expectation.
    DeflectedCount(usize),
    /// The event estimated by [`Quantity::ExcessDistribution`].
    Excess,
}

impl C0Event {
    fn quantity(&self) -> Quantity {
        match self {
            C0Event::MonoEdgeExists => Quantity::MonoEdgeInC0,
            C0Event::Deflected(v) => Quantity::DeflectedVertex(*v),
            C0Event::OrderedChain { edges, color } => Quantity::ChainEvent {
                edges: edges.clone(),
                color: *color,
            },
            C0Event::DeflectedCount(i) => Quantity::ExpectedX(*i),
            C0Event::Excess => Quantity::ExcessDistribution,
        }
    }
}

/// Number of (subinterval assignment, small-interval order) configurations:
/// `sum_k C(k+r-2, r-2) · m!/(m-k)! · r^(m-k)` over the number `k` of
/// vertices in small intervals.
pub fn exact_configuration_count(m: usize, r: usize) -> Option<u128> {
    let mut total: u128 = 0;
    for k in 0..=m {
        let groups = crate::hypergraph::binomial_u128(k + r - 2, r - 2);
        let mut falling: u128 = 1;
        for j in 0..k {
            falling = falling.checked_mul((m - j) as u128)?;
        }
        let large = (r as u128).checked_pow((m - k) as u32)?;
        total = total.checked_add(groups.checked_mul(falling)?.checked_mul(large)?)?;
    }
    Some(total)
}

/// Exact probability of `event`, or the exact expectation for
/// [`C0Event::DeflectedCount`], over uniform weights.
pub fn exact_c0_event_prob(
    h: &Hypergraph,
    r: usize,
    p: f64,
    event: C0Event,
    budget: u128,
) -> Result<f64> {
    exact_c0_expectation(h, r, p, event, budget)
}

fn exact_c0_expectation(
    h: &Hypergraph,
    r: usize,
    p: f64,
    event: C0Event,
    budget: u128,
) -> Result<f64> {
    let m = h.num_vertices();
    let needed = exact_configuration_count(m, r).unwrap_or(u128::MAX);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let quantity = event.quantity();
    let params = McParams {
        p: Some(p),
        ..Default::default()
    };
    let setup = Setup::new(&quantity, h, r, &params)?;
    let slots = setup.part.slots();
    let mut oracle = Oracle {
        setup: &setup,
        slots: &slots,
        assignment: vec![0; m],
        total: 0.0,
    };
    oracle.assign(0, 1.0)?;
    Ok(oracle.total)
}

struct Oracle<'a> {
    setup: &'a Setup<'a>,
    slots: &'a [Slot],
    /// Index into `slots` for every vertex.
    assignment: Vec<usize>,
    total: f64,
}

impl Oracle<'_> {
    fn assign(&mut self, v: usize, mass: f64) -> Result<()> {
        if v == self.assignment.len() {
            return self.orders(mass);
        }
        for (k, &slot) in self.slots.iter().enumerate() {
            let len = self.setup.part.length(slot);
            if len > 0.0 {
                self.assignment[v] = k;
                self.assign(v + 1, mass * len)?;
            }
        }
        Ok(())
    }

    /// Sums over every order inside every small interval.
    fn orders(&mut self, mass: f64) -> Result<()> {
        let r = self.setup.r;
        let mut groups: Vec<Vec<usize>> = vec![Vec::new(); r - 1];
        for (v, &k) in self.assignment.iter().enumerate() {
            if let Slot::Small(j) = self.slots[k] {
                groups[j - 1].push(v);
            }
        }
        let perms: f64 = groups
            .iter()
            .map(|g| (1..=g.len()).product::<usize>() as f64)
            .product();
        let mass = mass / perms;
        let mut weights = vec![0.0; self.assignment.len()];
        for (v, &k) in self.assignment.iter().enumerate() {
            if let Slot::Large(_) = self.slots[k] {
                let (lo, hi) = self.setup.part.bounds(self.slots[k]);
                weights[v] = lo + 0.5 * (hi - lo);
            }
        }
        self.permute_group(&mut groups, 0, &mut weights, mass)
    }

    fn permute_group(
        &mut self,
        groups: &mut [Vec<usize>],
        g: usize,
        weights: &mut Vec<f64>,
        mass: f64,
    ) -> Result<()> {
        if g == groups.len() {
            let w = WeightAssignment::new(weights.clone())?;
            let c0 = run_algorithm1(self.setup.h, &self.setup.part, &w)?;
            self.total += mass * self.setup.observe(&w, &c0) as f64;
            return Ok(());
        }
        let (lo, hi) = self.setup.part.small(g + 1);
        groups[g].sort_unstable();
        let c = groups[g].len();
        loop {
            for (t, &v) in groups[g].iter().enumerate() {
                weights[v] = lo + (t + 1) as f64 / (c + 1) as f64 * (hi - lo);
            }
            self.permute_group(groups, g + 1, weights, mass)?;
            if !next_permutation(&mut groups[g]) {
                break;
            }
        }
        Ok(())
    }
}

/// Advances to the next lexicographic permutation; false after the last.
fn next_permutation(a: &mut [usize]) -> bool {
    let Some(i) = (1..a.len()).rev().find(|&i| a[i - 1] < a[i]) else {
        return false;
    };
    let j = (i..a.len())
        .rev()
        .find(|&j| a[j] > a[i - 1])
        .expect("a[i] qualifies");
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}
