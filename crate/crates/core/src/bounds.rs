//! Closed-form edge threshold and lemma-level bound calculators.
//!
//! All expressions are evaluated in log space; the returned `f64` may
//! overflow to infinity for large `n`, in which case the log value is still
//! exact.

use serde::Serialize;

/// The edge-count threshold `0.01 (n / ln n)^((r-1)/r) r^(n-1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Threshold {
    pub value: f64,
    pub ln_value: f64,
    /// Whether `r < (ln n)^(1/5)`, the regime where the threshold is
    /// guaranteed sufficient.
    pub asymptotic_regime: bool,
}

pub fn edge_threshold(n: usize, r: usize) -> Threshold {
    let (nf, rf) = (n as f64, r as f64);
    let ln_n = nf.ln();
    let ln_value = 0.01f64.ln() + (rf - 1.0) / rf * (ln_n - ln_n.ln()) + (nf - 1.0) * rf.ln();
    Threshold {
        value: ln_value.exp(),
        ln_value,
        asymptotic_regime: rf < ln_n.powf(0.2),
    }
}

/// Which bound to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LemmaBound {
    /// Probability that a fixed ordered `k`-tuple of edges forms an ordered
    /// `k`-chain for a fixed color: `2 (ln n / n)^(k(r-1)/r) r^(-(n-1)k-1)`.
    OrderedChainProb { k: usize },
    /// Probability of a monochromatic edge in the initial coloring: `0.04e`.
    MonoEdgeProb,
    /// Expected number of deflected vertices per small interval:
    /// `0.04e n / (r ln n)`.
    ExpectedX,
    /// High-probability cap on the number of dangerous edges: `n / (r ln n)`.
    DangerousCount,
}

/// Natural log of the bound.
pub fn ln_lemma_bound(kind: LemmaBound, n: usize, r: usize) -> f64 {
    let (nf, rf) = (n as f64, r as f64);
    let ln_n = nf.ln();
    let ln_mono = 0.04f64.ln() + 1.0;
    match kind {
        LemmaBound::OrderedChainProb { k } => {
            let kf = k as f64;
            2f64.ln() + kf * (rf - 1.0) / rf * (ln_n.ln() - ln_n)
                - ((nf - 1.0) * kf + 1.0) * rf.ln()
        }
        LemmaBound::MonoEdgeProb => ln_mono,
        LemmaBound::ExpectedX => ln_mono + ln_n - rf.ln() - ln_n.ln(),
        LemmaBound::DangerousCount => ln_n - rf.ln() - ln_n.ln(),
    }
}

pub fn lemma_bound(kind: LemmaBound, n: usize, r: usize) -> f64 {
    ln_lemma_bound(kind, n, r).exp()
}
