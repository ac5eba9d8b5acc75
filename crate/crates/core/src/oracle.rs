//! Exhaustive search for equitable colorings of small hypergraphs.

use crate::coloring::{Color, Coloring};
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;

/// Default cap on `r^m` for the exhaustive oracle.
pub const DEFAULT_ENUMERATION_BUDGET: u128 = 100_000_000;

/// Returns `r^m` or `None` on overflow.
pub fn assignment_count(m: usize, r: usize) -> Option<u128> {
    (r as u128).checked_pow(u32::try_from(m).ok()?)
}

fn check_budget(m: usize, r: usize, budget: u128) -> Result<()> {
    let needed = assignment_count(m, r).unwrap_or(u128::MAX);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    Ok(())
}

struct Search<'a> {
    h: &'a Hypergraph,
    r: usize,
    floor: usize,
    rem: usize,
    // Edges grouped by their largest vertex: checked once that vertex is set.
    closing: Vec<Vec<usize>>,
    colors: Vec<Color>,
    sizes: Vec<usize>,
}

impl<'a> Search<'a> {
    fn new(h: &'a Hypergraph, r: usize) -> Self {
        let m = h.num_vertices();
        let mut closing = vec![Vec::new(); m];
        for (e, edge) in h.edges().iter().enumerate() {
            closing[*edge.last().expect("edges are nonempty")].push(e);
        }
        Self {
            h,
            r,
            floor: m / r,
            rem: m % r,
            closing,
            colors: vec![0; m],
            sizes: vec![0; r],
        }
    }

    fn sizes_feasible(&self, placed: usize) -> bool {
        let ceil = self.floor + usize::from(self.rem > 0);
        let mut at_ceil = 0;
        let mut deficit = 0;
        for &s in &self.sizes {
            if s > ceil {
                return false;
            }
            if self.rem > 0 && s == ceil {
                at_ceil += 1;
            }
            deficit += self.floor.saturating_sub(s);
        }
        at_ceil <= self.rem && deficit <= self.colors.len() - placed
    }

    fn closes_monochromatic(&self, v: usize) -> bool {
        let c = self.colors[v];
        self.closing[v]
            .iter()
            .any(|&e| self.h.edge(e).iter().all(|&u| self.colors[u] == c))
    }

    /// Visits equitable proper colorings in mixed-radix order; `visit`
    /// returns `false` to stop.
    fn run(&mut self, v: usize, visit: &mut dyn FnMut(&[Color]) -> bool) -> bool {
        if v == self.colors.len() {
            return visit(&self.colors);
        }
        for c in 1..=self.r as Color {
            self.colors[v] = c;
            self.sizes[c as usize - 1] += 1;
            let ok = self.sizes_feasible(v + 1) && !self.closes_monochromatic(v);
            let keep_going = !ok || self.run(v + 1, visit);
            self.sizes[c as usize - 1] -= 1;
            if !keep_going {
                self.colors[v] = 0;
                return false;
            }
        }
        self.colors[v] = 0;
        true
    }
}

/// Some equitable proper `r`-coloring of `h`, or `None` if none exists.
pub fn brute_force_equitable(h: &Hypergraph, r: usize, budget: u128) -> Result<Option<Coloring>> {
    if r < 1 {
        return Err(Error::InvalidParameters("r must be positive".into()));
    }
    check_budget(h.num_vertices(), r, budget)?;
    let mut found = None;
    Search::new(h, r).run(0, &mut |colors| {
        found = Some(colors.to_vec());
        false
    });
    found.map(|c| Coloring::from_colors(r, &c)).transpose()
}

/// Number of equitable proper `r`-colorings of `h` (labelled colors).
pub fn count_equitable(h: &Hypergraph, r: usize, budget: u128) -> Result<u64> {
    check_budget(h.num_vertices(), r, budget)?;
    let mut count = 0u64;
    Search::new(h, r).run(0, &mut |_| {
        count += 1;
        true
    });
    Ok(count)
}
