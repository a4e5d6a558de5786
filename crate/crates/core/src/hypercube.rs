//! Snake-in-the-box paths and Hamiltonian cycles of the hypercube.
//!
//! Vertices of the `m`-cube are [`Bundle`]s over `m` resources, so the
//! textual conventions of [`crate::model`] carry over unchanged.

use std::fmt;

use crate::error::{Error, Result};
use crate::model::Bundle;

/// A binary label together with its width.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Label {
    pub bits: Bundle,
    pub width: u32,
}

impl Label {
    pub fn new(bits: Bundle, width: u32) -> Label {
        Label { bits, width }
    }

    pub fn parse(s: &str) -> Result<Label> {
        let s = s.trim();
        Ok(Label {
            bits: Bundle::parse_label(s)?,
            width: s.len() as u32,
        })
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.bits.label(self.width))
    }
}

fn common_width(labels: &[Label]) -> Result<u32> {
    let width = labels.first().map(|l| l.width).unwrap_or(0);
    for l in labels {
        if l.width != width {
            return Err(Error::DimensionMismatch {
                expected: width,
                found: l.width,
            });
        }
    }
    Ok(width)
}

/// Path condition plus SC: consecutive labels are adjacent and labels two
/// or more steps apart differ in at least two positions.
pub fn has_sc_property(labels: &[Label]) -> Result<bool> {
    common_width(labels)?;
    Ok(sc_violation(labels.iter().map(|l| l.bits).collect::<Vec<_>>().as_slice()).is_none())
}

/// First offending index pair, if any.
fn sc_violation(labels: &[Bundle]) -> Option<(usize, usize)> {
    for i in 0..labels.len() {
        for j in i + 1..labels.len() {
            let d = labels[i].distance(labels[j]);
            let ok = if j == i + 1 { d == 1 } else { d >= 2 };
            if !ok {
                return Some((i, j));
            }
        }
    }
    None
}

/// An SC path (snake) in the `dimension`-cube.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnakePath {
    dimension: u32,
    labels: Vec<Bundle>,
}

impl SnakePath {
    pub fn new(dimension: u32, labels: Vec<Bundle>) -> Result<SnakePath> {
        if !(1..=crate::model::MAX_RESOURCES).contains(&dimension) {
            return Err(Error::InvalidSnake(format!(
                "dimension {dimension} out of range"
            )));
        }
        if labels.is_empty() {
            return Err(Error::InvalidSnake("empty path".into()));
        }
        let full = Bundle::full(dimension);
        if let Some(b) = labels.iter().find(|b| !b.is_subset(full)) {
            return Err(Error::DimensionMismatch {
                expected: dimension,
                found: 64 - b.0.leading_zeros(),
            });
        }
        if let Some((i, j)) = sc_violation(&labels) {
            return Err(Error::InvalidSnake(format!(
                "labels {} and {} (positions {i}, {j}) break the path/SC condition",
                labels[i].label(dimension),
                labels[j].label(dimension)
            )));
        }
        Ok(SnakePath { dimension, labels })
    }

    pub fn parse<S: AsRef<str>>(labels: &[S]) -> Result<SnakePath> {
        let parsed = labels
            .iter()
            .map(|l| Label::parse(l.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        let width = common_width(&parsed)?;
        SnakePath::new(width, parsed.into_iter().map(|l| l.bits).collect())
    }

    pub fn dimension(&self) -> u32 {
        self.dimension
    }

    pub fn labels(&self) -> &[Bundle] {
        &self.labels
    }

    /// Number of edges.
    pub fn len(&self) -> usize {
        self.labels.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.labels.len() == 1
    }

    pub fn label_strings(&self) -> Vec<String> {
        self.labels
            .iter()
            .map(|b| b.label(self.dimension))
            .collect()
    }
}

/// A Hamiltonian cycle of the `dimension`-cube, listed without repeating
/// the first vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HamCycle {
    dimension: u32,
    labels: Vec<Bundle>,
}

impl HamCycle {
    /// Validates a cyclic listing of every vertex; the first label must be
    /// `1^s` or `0^s` (the latter for complementary cycles).
    pub fn new(dimension: u32, labels: Vec<Bundle>) -> Result<HamCycle> {
        if !(2..=20).contains(&dimension) {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: dimension,
            });
        }
        let size = 1usize << dimension;
        if labels.len() != size {
            return Err(Error::Parameter(format!(
                "cycle lists {} labels, expected {size}",
                labels.len()
            )));
        }
        let mut seen = vec![false; size];
        for b in &labels {
            let idx = b.0 as usize;
            if idx >= size || seen[idx] {
                return Err(Error::Parameter(format!(
                    "label {} repeats or is out of range",
                    b.label(dimension)
                )));
            }
            seen[idx] = true;
        }
        for i in 0..size {
            if labels[i].distance(labels[(i + 1) % size]) != 1 {
                return Err(Error::Parameter(format!(
                    "labels {} and {} are not adjacent",
                    labels[i].label(dimension),
                    labels[(i + 1) % size].label(dimension)
                )));
            }
        }
        Ok(HamCycle { dimension, labels })
    }

    pub fn parse<S: AsRef<str>>(labels: &[S]) -> Result<HamCycle> {
        let parsed = labels
            .iter()
            .map(|l| Label::parse(l.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        let width = common_width(&parsed)?;
        HamCycle::new(width, parsed.into_iter().map(|l| l.bits).collect())
    }

    pub fn dimension(&self) -> u32 {
        self.dimension
    }

    pub fn labels(&self) -> &[Bundle] {
        &self.labels
    }

    /// Vertex at cyclic position `i`.
    pub fn at(&self, i: usize) -> Bundle {
        self.labels[i % self.labels.len()]
    }

    /// Label-wise complement; again a Hamiltonian cycle.
    pub fn complement(&self) -> HamCycle {
        HamCycle {
            dimension: self.dimension,
            labels: self
                .labels
                .iter()
                .map(|b| b.complement(self.dimension))
                .collect(),
        }
    }

    pub fn label_strings(&self) -> Vec<String> {
        self.labels
            .iter()
            .map(|b| b.label(self.dimension))
            .collect()
    }
}

/// The inductive reflected cycle before rotation: from a cycle
/// `a_1 … a_p` on `s` bits build `0a_1, 1a_1, 1a_p, …, 1a_2, 0a_2, …, 0a_p`.
pub fn ham_cycle_unrotated(s: u32) -> Result<Vec<Bundle>> {
    if s < 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: s,
        });
    }
    if s > 20 {
        return Err(Error::ResourceLimit(format!(
            "cycle dimension {s} exceeds 20"
        )));
    }
    // 00, 01, 11, 10 with the leftmost character as bit 0
    let mut cycle = vec![Bundle(0b00), Bundle(0b10), Bundle(0b11), Bundle(0b01)];
    for _ in 2..s {
        let prefix = |c: u64, b: Bundle| Bundle(c | (b.0 << 1));
        let p = cycle.len();
        let mut next = Vec::with_capacity(2 * p);
        next.push(prefix(0, cycle[0]));
        next.push(prefix(1, cycle[0]));
        next.extend((1..p).rev().map(|i| prefix(1, cycle[i])));
        next.extend((1..p).map(|i| prefix(0, cycle[i])));
        cycle = next;
    }
    Ok(cycle)
}

/// Hamiltonian cycle of the `s`-cube starting at `1^s`.
pub fn ham_cycle(s: u32) -> Result<HamCycle> {
    let mut labels = ham_cycle_unrotated(s)?;
    let top = Bundle::full(s);
    let at = labels
        .iter()
        .position(|&b| b == top)
        .expect("cycle visits 1^s");
    labels.rotate_left(at);
    HamCycle::new(s, labels)
}

/// Named codes used throughout the documentation and fixtures.
pub mod fixtures {
    use super::*;

    /// The 8-vertex snake in the 4-cube used for the 4-cube fixture instance.
    pub fn snake_m4() -> SnakePath {
        SnakePath::parse(&[
            "0000", "1000", "1010", "1110", "0110", "0111", "0101", "1101",
        ])
        .expect("fixture is a snake")
    }

    /// The 5-vertex snake in the 3-cube used for the ext examples.
    pub fn snake_s3() -> SnakePath {
        SnakePath::parse(&["000", "001", "101", "111", "110"]).expect("fixture is a snake")
    }

    /// The 3-cube cycle used for the `k = 4, s = 3` round schedule.
    pub fn cycle_s3() -> HamCycle {
        HamCycle::parse(&["111", "110", "010", "011", "001", "000", "100", "101"])
            .expect("fixture is a Hamiltonian cycle")
    }
}
