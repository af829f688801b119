//! Seeded random quivers and a few named examples.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::quiver::{frame, ExtendedQuiver, QuiverMatrix};
use crate::sequence::{MutationSequence, Vertex};
use crate::structure::{find_fork, FindForkOptions, ForkSearch};

/// Inclusive range of arrow multiplicities.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WeightRange {
    lo: i64,
    hi: i64,
}

impl WeightRange {
    pub fn new(lo: i64, hi: i64) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvalidRange {
                lo,
                hi,
                reason: "lower end exceeds upper end".into(),
            });
        }
        if lo < 1 {
            return Err(Error::InvalidRange {
                lo,
                hi,
                reason: "multiplicities start at 1".into(),
            });
        }
        Ok(Self { lo, hi })
    }

    pub fn lo(self) -> i64 {
        self.lo
    }

    pub fn hi(self) -> i64 {
        self.hi
    }

    fn require_abundant(self) -> Result<()> {
        if self.lo < 2 {
            return Err(Error::InvalidRange {
                lo: self.lo,
                hi: self.hi,
                reason: "abundant quivers need multiplicities of at least 2".into(),
            });
        }
        Ok(())
    }

    fn sample(self, rng: &mut impl Rng) -> i64 {
        rng.random_range(self.lo..=self.hi)
    }
}

impl FromStr for WeightRange {
    type Err = Error;

    /// Accepts `LO..HI` (inclusive) or a single value.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |reason: &str| Error::InvalidRange {
            lo: 0,
            hi: 0,
            reason: format!("{reason} in {s:?}"),
        };
        let (lo, hi) = match s.split_once("..") {
            Some((a, b)) => (a, b.trim_start_matches('=')),
            None => (s, s),
        };
        let lo = lo.trim().parse().map_err(|_| bad("bad lower end"))?;
        let hi = hi.trim().parse().map_err(|_| bad("bad upper end"))?;
        Self::new(lo, hi)
    }
}

impl fmt::Display for WeightRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.lo, self.hi)
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Abundant acyclic quiver on `n` vertices with a random acyclic ordering.
pub fn random_abundant_acyclic(
    n: usize,
    weights: WeightRange,
    rng: &mut impl Rng,
) -> Result<QuiverMatrix> {
    weights.require_abundant()?;
    let mut labels: Vec<usize> = (1..=n).collect();
    labels.shuffle(rng);
    let mut arrows = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            arrows.push((labels[a], labels[b], weights.sample(rng)));
        }
    }
    QuiverMatrix::from_arrows(n, &arrows)
}

/// Oriented 3-cycle with random multiplicities.
pub fn random_rank3_cyclic(weights: WeightRange, rng: &mut impl Rng) -> Result<QuiverMatrix> {
    let (a, b, c) = (
        weights.sample(rng),
        weights.sample(rng),
        weights.sample(rng),
    );
    QuiverMatrix::from_arrows(3, &[(1, 2, a), (2, 3, b), (3, 1, c)])
}

/// Reduced sequence of the given length over `n` vertices.
pub fn random_reduced_sequence(n: usize, len: usize, rng: &mut impl Rng) -> MutationSequence {
    let mut w = MutationSequence::empty();
    if n == 0 {
        return w;
    }
    while w.len() < len {
        let v = Vertex::from_index(rng.random_range(0..n));
        if n == 1 && !w.is_empty() {
            break;
        }
        let _ = w.push(v);
    }
    w
}

/// A framed fork: a framed abundant acyclic quiver mutated into a fork, then
/// walked `extra` further random steps that avoid the current point of
/// return (which keeps it a fork). Returns the quiver and the full sequence
/// from the framing.
pub fn random_framed_fork(
    n: usize,
    weights: WeightRange,
    extra: usize,
    rng: &mut impl Rng,
) -> Result<(ExtendedQuiver, MutationSequence)> {
    if n < 3 {
        return Err(Error::Precondition(
            "forks need at least three vertices".into(),
        ));
    }
    let q = random_abundant_acyclic(n, weights, rng)?;
    let opts = FindForkOptions {
        seed: rng.random(),
        ..FindForkOptions::default()
    };
    let ForkSearch::Found { sequence, .. } = find_fork(&q, &opts)? else {
        return Err(Error::Precondition("no fork found".into()));
    };
    let mut w = sequence;
    for _ in 0..extra {
        let r = w.last().expect("an acyclic quiver needs at least one step");
        let k = loop {
            let k = Vertex::from_index(rng.random_range(0..n));
            if k != r {
                break k;
            }
        };
        w.push(k)?;
    }
    Ok((frame(&q).mutate_seq(&w)?, w))
}

pub fn markov() -> QuiverMatrix {
    QuiverMatrix::from_arrows(3, &[(1, 2, 2), (2, 3, 2), (3, 1, 2)]).expect("valid")
}

pub fn a2() -> QuiverMatrix {
    QuiverMatrix::from_arrows(2, &[(1, 2, 1)]).expect("valid")
}

/// The 3-vertex fork with return 1: `2 -> 1` (3), `1 -> 3` (4), `3 -> 2` (5).
pub fn fork_example() -> QuiverMatrix {
    QuiverMatrix::from_arrows(3, &[(2, 1, 3), (1, 3, 4), (3, 2, 5)]).expect("valid")
}

/// Oriented triangle `1 -> 2 -> 3 -> 1` with multiplicities `a, b, c`.
pub fn triangle(a: i64, b: i64, c: i64) -> QuiverMatrix {
    QuiverMatrix::from_arrows(3, &[(1, 2, a), (2, 3, b), (3, 1, c)]).expect("valid")
}

pub fn named(name: &str) -> Option<QuiverMatrix> {
    match name {
        "markov" => Some(markov()),
        "a2" => Some(a2()),
        "fork" => Some(fork_example()),
        _ => None,
    }
}
