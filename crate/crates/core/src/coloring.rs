//! Vertex colorings with incremental class-size accounting.
//!
//! Colors are `1..=r`; vertices are `0..m`.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;

pub type Color = u32;

/// A total or partial assignment of colors `1..=r` to vertices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Coloring {
    r: usize,
    colors: Vec<Option<Color>>,
    sizes: Vec<usize>,
}

impl Coloring {
    /// All `m` vertices unassigned.
    pub fn new(m: usize, r: usize) -> Self {
        Self {
            r,
            colors: vec![None; m],
            sizes: vec![0; r],
        }
    }

    /// Builds from a color vector where `0` means unassigned.
    pub fn from_colors(r: usize, colors: &[Color]) -> Result<Self> {
        let mut c = Self::new(colors.len(), r);
        for (v, &col) in colors.iter().enumerate() {
            if col as usize > r {
                return Err(Error::InvalidParameters(format!(
                    "vertex {v} has color {col} but r = {r}"
                )));
            }
            if col > 0 {
                c.assign(v, col);
            }
        }
        Ok(c)
    }

    pub fn num_colors(&self) -> usize {
        self.r
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn get(&self, v: usize) -> Option<Color> {
        self.colors[v]
    }

    /// Assigns (or reassigns) `v` to color `c`.
    ///
    /// Panics if `c` is not in `1..=r`.
    pub fn assign(&mut self, v: usize, c: Color) {
        assert!(
            c >= 1 && c as usize <= self.r,
            "color {c} outside 1..={}",
            self.r
        );
        if let Some(old) = self.colors[v].replace(c) {
            self.sizes[old as usize - 1] -= 1;
        }
        self.sizes[c as usize - 1] += 1;
    }

    pub fn unassign(&mut self, v: usize) {
        if let Some(old) = self.colors[v].take() {
            self.sizes[old as usize - 1] -= 1;
        }
    }

    /// Size of each color class, indexed by `color - 1`.
    pub fn class_sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn class_size(&self, c: Color) -> usize {
        self.sizes[c as usize - 1]
    }

    pub fn assigned(&self) -> usize {
        self.sizes.iter().sum()
    }

    pub fn is_total(&self) -> bool {
        self.assigned() == self.colors.len()
    }

    pub fn first_unassigned(&self) -> Option<usize> {
        self.colors.iter().position(Option::is_none)
    }

    /// Colors with `0` for unassigned vertices.
    pub fn to_vec(&self) -> Vec<Color> {
        self.colors.iter().map(|c| c.unwrap_or(0)).collect()
    }

    /// Vertices of class `c`, increasing.
    pub fn class(&self, c: Color) -> Vec<usize> {
        (0..self.colors.len())
            .filter(|&v| self.colors[v] == Some(c))
            .collect()
    }

    /// The common color of `edge` if every vertex is assigned that color.
    pub fn monochromatic_color(&self, edge: &[usize]) -> Option<Color> {
        let first = self.colors[*edge.first()?]?;
        edge.iter()
            .all(|&v| self.colors[v] == Some(first))
            .then_some(first)
    }

    /// Indices and colors of all monochromatic edges.
    pub fn monochromatic_edges(&self, h: &Hypergraph) -> Vec<(usize, Color)> {
        h.edges()
            .iter()
            .enumerate()
            .filter_map(|(e, edge)| self.monochromatic_color(edge).map(|c| (e, c)))
            .collect()
    }
}

#[derive(Serialize, Deserialize)]
struct RawColoring {
    r: usize,
    colors: Vec<Color>,
    sizes: Vec<usize>,
}

impl Serialize for Coloring {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RawColoring {
            r: self.r,
            colors: self.to_vec(),
            sizes: self.sizes.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Coloring {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawColoring::deserialize(d)?;
        let c = Coloring::from_colors(raw.r, &raw.colors).map_err(D::Error::custom)?;
        if c.sizes != raw.sizes {
            return Err(D::Error::custom(format!(
                "sizes {:?} do not match the colors (expected {:?})",
                raw.sizes, c.sizes
            )));
        }
        Ok(c)
    }
}

fn check_total(h: &Hypergraph, c: &Coloring) -> Result<()> {
    if c.len() != h.num_vertices() {
        return Err(Error::SizeMismatch {
            expected: h.num_vertices(),
            found: c.len(),
        });
    }
    match c.first_unassigned() {
        Some(v) => Err(Error::PartialColoring(v)),
        None => Ok(()),
    }
}

/// True iff no edge is monochromatic. The coloring must be total.
pub fn is_proper(h: &Hypergraph, c: &Coloring) -> Result<bool> {
    check_total(h, c)?;
    Ok(h.edges().iter().all(|e| c.monochromatic_color(e).is_none()))
}

/// True iff the coloring is proper and class sizes differ by at most one.
pub fn is_equitable(h: &Hypergraph, c: &Coloring) -> Result<bool> {
    if !is_proper(h, c)? {
        return Ok(false);
    }
    let max = c.class_sizes().iter().max().copied().unwrap_or(0);
    let min = c.class_sizes().iter().min().copied().unwrap_or(0);
    Ok(max - min <= 1)
}

/// Equitable class-size targets: `m / r` when `r` divides `m`, otherwise the
/// lowest `m mod r` colors take the ceiling and the rest the floor.
pub fn equitable_targets(m: usize, r: usize) -> Vec<usize> {
    let (base, rem) = (m / r, m % r);
    (0..r).map(|c| base + usize::from(c < rem)).collect()
}
