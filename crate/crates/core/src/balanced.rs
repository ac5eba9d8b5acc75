//! Random balanced colorings and the exact probability that a fixed edge is
//! monochromatic under one.

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::seq::SliceRandom;

use crate::coloring::{Color, Coloring};
use crate::error::{Error, Result};
use crate::seed;

/// Exact probability together with its floating-point value.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactProbability {
    pub exact: BigRational,
    pub value: f64,
}

impl ExactProbability {
    fn new(exact: BigRational) -> Self {
        let value = exact.to_f64().expect("probability is finite");
        Self { exact, value }
    }
}

/// `r · C(m - n, m/r - n) / C(m, m/r)`: the probability that a fixed
/// `n`-set lies inside one class of a uniformly random balanced
/// `r`-coloring of `m` vertices.
pub fn balanced_mono_prob(m: usize, n: usize, r: usize) -> Result<ExactProbability> {
    if r == 0 || n == 0 || n > m {
        return Err(Error::InvalidParameters(format!(
            "need r >= 1 and 1 <= n <= m, got m = {m}, n = {n}, r = {r}"
        )));
    }
    if !m.is_multiple_of(r) {
        return Err(Error::NotDivisible { m, r });
    }
    let class = m / r;
    if n > class {
        return Ok(ExactProbability::new(BigRational::zero()));
    }
    let num = BigInt::from(r) * binomial(BigInt::from(m - n), BigInt::from(class - n));
    let den = binomial(BigInt::from(m), BigInt::from(class));
    Ok(ExactProbability::new(BigRational::new(num, den)))
}

/// Random coloring with prescribed class sizes: shuffle the vertices and
/// cut the permutation into consecutive blocks.
pub fn sample_targeted_coloring(targets: &[usize], seed: u64) -> Coloring {
    let m: usize = targets.iter().sum();
    let mut perm: Vec<usize> = (0..m).collect();
    perm.shuffle(&mut seed::rng(seed));
    let mut c = Coloring::new(m, targets.len());
    let mut it = perm.into_iter();
    for (k, &t) in targets.iter().enumerate() {
        for v in it.by_ref().take(t) {
            c.assign(v, k as Color + 1);
        }
    }
    c
}

/// Uniformly random partition of `0..m` into `r` classes of size `m / r`.
pub fn sample_balanced_coloring(m: usize, r: usize, seed: u64) -> Result<Coloring> {
    if r == 0 {
        return Err(Error::InvalidParameters("r must be positive".into()));
    }
    if !m.is_multiple_of(r) {
        return Err(Error::NotDivisible { m, r });
    }
    Ok(sample_targeted_coloring(&vec![m / r; r], seed))
}
