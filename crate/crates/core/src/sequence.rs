//! Vertex labels and reduced mutation sequences.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A 1-based vertex label. Mutable vertices are `1..=n`, frozen ones `n+1..=n+m`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "usize", into = "usize")]
pub struct Vertex(usize);

impl Vertex {
    /// Returns `None` for label 0.
    pub fn new(label: usize) -> Option<Self> {
        (label >= 1).then_some(Self(label))
    }

    /// The vertex stored at 0-based matrix index `index`.
    pub fn from_index(index: usize) -> Self {
        Self(index + 1)
    }

    pub fn label(self) -> usize {
        self.0
    }

    /// 0-based row/column index of this vertex.
    pub fn index(self) -> usize {
        self.0 - 1
    }
}

impl TryFrom<usize> for Vertex {
    type Error = String;

    fn try_from(label: usize) -> std::result::Result<Self, String> {
        Vertex::new(label).ok_or_else(|| "vertex labels start at 1".to_string())
    }
}

impl From<Vertex> for usize {
    fn from(v: Vertex) -> usize {
        v.0
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl fmt::Debug for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

/// Shorthand for building vertex lists from 1-based labels in tests and examples.
///
/// Panics on label 0.
pub fn vertices(labels: &[usize]) -> Vec<Vertex> {
    labels
        .iter()
        .map(|&l| Vertex::new(l).expect("vertex labels start at 1"))
        .collect()
}

/// True when no two consecutive entries are equal.
pub fn reduce_check(entries: &[Vertex]) -> bool {
    entries.windows(2).all(|w| w[0] != w[1])
}

/// A reduced sequence of mutable vertices.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vertex>", into = "Vec<Vertex>")]
pub struct MutationSequence(Vec<Vertex>);

impl MutationSequence {
    pub fn new(entries: Vec<Vertex>) -> Result<Self> {
        if let Some(pos) = entries.windows(2).position(|w| w[0] == w[1]) {
            return Err(Error::NotReduced {
                position: pos + 1,
                vertex: entries[pos],
            });
        }
        Ok(Self(entries))
    }

    pub fn from_labels(labels: &[usize]) -> Result<Self> {
        let entries = labels
            .iter()
            .map(|&l| {
                Vertex::new(l).ok_or(Error::VertexOutOfRange {
                    vertex: l,
                    total: 0,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(entries)
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn as_slice(&self) -> &[Vertex] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn last(&self) -> Option<Vertex> {
        self.0.last().copied()
    }

    pub fn first(&self) -> Option<Vertex> {
        self.0.first().copied()
    }

    /// Appends `v`, failing if it repeats the last entry.
    pub fn push(&mut self, v: Vertex) -> Result<()> {
        if self.last() == Some(v) {
            return Err(Error::NotReduced {
                position: self.0.len(),
                vertex: v,
            });
        }
        self.0.push(v);
        Ok(())
    }

    /// Concatenation; fails if the junction repeats a vertex.
    pub fn concat(&self, other: &MutationSequence) -> Result<Self> {
        let mut entries = self.0.clone();
        entries.extend_from_slice(&other.0);
        Self::new(entries)
    }

    pub fn labels(&self) -> Vec<usize> {
        self.0.iter().map(|v| v.label()).collect()
    }
}

impl TryFrom<Vec<Vertex>> for MutationSequence {
    type Error = Error;

    fn try_from(entries: Vec<Vertex>) -> Result<Self> {
        Self::new(entries)
    }
}

impl From<MutationSequence> for Vec<Vertex> {
    fn from(s: MutationSequence) -> Self {
        s.0
    }
}

impl fmt::Debug for MutationSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for MutationSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}
