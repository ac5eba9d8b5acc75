//! The two-stage interval coloring.
//!
//! Stage 1 colors every vertex of `Δ_i` with `i`. Stage 2 walks the vertices
//! of the small intervals by increasing weight and gives a vertex of `δ_i`
//! color `i` unless some edge through it already has every other vertex
//! colored `i`; in that case the vertex is deflected to `i + 1`. Unassigned
//! vertices never count towards a monochromatic edge.

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::coloring::{Color, Coloring};
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::interval::{IntervalPartition, Slot, WeightAssignment};

/// Output of the two-stage coloring together with the bookkeeping that
/// chain extraction consumes.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialColoring {
    pub coloring: Coloring,
    /// `X(i)` for `i = 1..r-1`: deflected vertices of `δ_i`.
    pub x_counts: Vec<usize>,
    /// `Z(i)` for `i = 1..r`: vertices in `Δ_i ∪ δ_i` (`Δ_r` alone for `i = r`).
    pub z_counts: Vec<usize>,
    /// Subinterval of each vertex.
    pub slots: Vec<Slot>,
    /// For each deflected vertex, the first edge in incidence order that
    /// blocked its own color.
    pub blocking: Vec<Option<usize>>,
}

impl InitialColoring {
    pub fn x(&self, i: usize) -> usize {
        if i == 0 {
            0
        } else {
            self.x_counts[i - 1]
        }
    }

    pub fn z(&self, i: usize) -> usize {
        self.z_counts[i - 1]
    }

    pub fn is_deflected(&self, v: usize) -> bool {
        self.blocking[v].is_some()
    }

    pub fn color(&self, v: usize) -> Color {
        self.coloring
            .get(v)
            .expect("the two-stage coloring is total")
    }
}

impl Serialize for InitialColoring {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(5))?;
        map.serialize_entry("r", &self.coloring.num_colors())?;
        map.serialize_entry("colors", &self.coloring.to_vec())?;
        map.serialize_entry("sizes", self.coloring.class_sizes())?;
        map.serialize_entry("X", &self.x_counts)?;
        map.serialize_entry("Z", &self.z_counts)?;
        map.end()
    }
}

/// Whether coloring `v` with `c` would complete an edge of color `c`;
/// returns the first such edge.
fn blocking_edge(h: &Hypergraph, col: &Coloring, v: usize, c: Color) -> Option<usize> {
    h.incident(v)
        .iter()
        .copied()
        .find(|&e| h.edge(e).iter().all(|&u| u == v || col.get(u) == Some(c)))
}

pub fn run_algorithm1(
    h: &Hypergraph,
    part: &IntervalPartition,
    weights: &WeightAssignment,
) -> Result<InitialColoring> {
    let m = h.num_vertices();
    let r = part.num_colors();
    if weights.len() != m {
        return Err(Error::SizeMismatch {
            expected: m,
            found: weights.len(),
        });
    }
    let slots = (0..m)
        .map(|v| part.locate(weights.weight(v)))
        .collect::<Result<Vec<_>>>()?;

    let mut coloring = Coloring::new(m, r);
    let mut z_counts = vec![0; r];
    for (v, slot) in slots.iter().enumerate() {
        match *slot {
            Slot::Large(i) => {
                coloring.assign(v, i as Color);
                z_counts[i - 1] += 1;
            }
            Slot::Small(j) => z_counts[j - 1] += 1,
        }
    }

    let mut x_counts = vec![0; r - 1];
    let mut blocking = vec![None; m];
    for &v in weights.sorted_order() {
        let Slot::Small(j) = slots[v] else { continue };
        let own = j as Color;
        match blocking_edge(h, &coloring, v, own) {
            None => coloring.assign(v, own),
            Some(e) => {
                coloring.assign(v, own + 1);
                blocking[v] = Some(e);
                x_counts[j - 1] += 1;
            }
        }
    }

    Ok(InitialColoring {
        coloring,
        x_counts,
        z_counts,
        slots,
        blocking,
    })
}
