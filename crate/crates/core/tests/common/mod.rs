#![allow(dead_code)]

pub mod props;

use forkred_core::explore::{ExploreOptions, Explorer};
use forkred_core::generate::{
    random_abundant_acyclic, random_framed_fork, random_reduced_sequence, rng, WeightRange,
};
use forkred_core::structure::{acyclic_ordering, detect_fork};
use forkred_core::{
    coframe, frame, ExtendedQuiver, IntMatrix, MutationSequence, QuiverMatrix, Vertex, VertexColor,
};
use rand::Rng;

pub fn weights(lo: i64, hi: i64) -> WeightRange {
    WeightRange::new(lo, hi).unwrap()
}

/// Strictly sign-coherent framed forks, `n` in 3..=6, weights 2..=5.
pub fn framed_fork_corpus(count: usize, seed: u64) -> Vec<ExtendedQuiver> {
    let mut r = rng(seed);
    (0..count)
        .map(|i| {
            let n = 3 + i % 4;
            let extra = r.random_range(0..4);
            random_framed_fork(n, weights(2, 5), extra, &mut r)
                .unwrap()
                .0
        })
        .collect()
}

/// Mutable parts for the ordering audits: forks and abundant acyclic
/// quivers with `n <= 8` and weights in 2..=6.
pub fn ordering_corpus(count: usize, seed: u64) -> Vec<QuiverMatrix> {
    let mut r = rng(seed);
    (0..count)
        .map(|i| {
            let n = 3 + i % 6;
            if i % 2 == 0 {
                random_abundant_acyclic(n, weights(2, 6), &mut r).unwrap()
            } else {
                let extra = r.random_range(0..3);
                random_framed_fork(n, weights(2, 6), extra, &mut r)
                    .unwrap()
                    .0
                    .mutable_part()
                    .clone()
            }
        })
        .collect()
}

/// Ice quivers for the color audits: framings, coframings and mid-sequence
/// states of abundant acyclic quivers, plus framed forks.
pub fn color_corpus(count: usize, seed: u64) -> Vec<ExtendedQuiver> {
    let mut r = rng(seed);
    (0..count)
        .map(|i| {
            let n = 3 + i % 6;
            match i % 4 {
                0 => frame(&random_abundant_acyclic(n, weights(2, 6), &mut r).unwrap()),
                1 => coframe(&random_abundant_acyclic(n, weights(2, 6), &mut r).unwrap()),
                2 => {
                    let q = random_abundant_acyclic(n, weights(2, 6), &mut r).unwrap();
                    let ord = acyclic_ordering(&q).unwrap();
                    let j = r.random_range(1..n);
                    let w = MutationSequence::new(ord[..j].to_vec()).unwrap();
                    frame(&q).mutate_seq(&w).unwrap()
                }
                _ => {
                    let extra = r.random_range(0..3);
                    random_framed_fork(n, weights(2, 6), extra, &mut r)
                        .unwrap()
                        .0
                }
            }
        })
        .collect()
}

/// `C = I` plus a random strictly upper triangular nonnegative part.
pub fn triangular_extension(q: &QuiverMatrix, r: &mut impl Rng) -> ExtendedQuiver {
    let n = q.n();
    let mut c = IntMatrix::identity(n);
    for i in 0..n {
        for j in i + 1..n {
            c[(i, j)] = r.random_range(0..3i64).into();
        }
    }
    ExtendedQuiver::new(q.clone(), c).unwrap()
}

/// Forks with a green point of return and exactly one other green vertex at
/// position `j > 1`, collected from explored coframed and triangular classes.
pub fn stage_two_corpus(seed: u64) -> Vec<(ExtendedQuiver, usize)> {
    let mut r = rng(seed);
    let mut out = Vec::new();
    for n in 4..=5 {
        for t in 0..6 {
            let (f, _) = random_framed_fork(n, weights(2, 3), 0, &mut r).unwrap();
            let b = f.mutable_part();
            let start = if t % 2 == 0 {
                coframe(b)
            } else {
                triangular_extension(b, &mut r)
            };
            let mut e = Explorer::new(
                start,
                ExploreOptions {
                    max_nodes: 20_000,
                    ..ExploreOptions::default()
                },
            );
            e.run(if n == 4 { 6 } else { 5 });
            for node in e.nodes_in_order() {
                let q = node.quiver;
                let Some(cert) = detect_fork(q.mutable_part()) else {
                    continue;
                };
                let Ok(colors) = q.colors() else { continue };
                if colors.contains(&VertexColor::Blue)
                    || colors[cert.point_of_return.index()] != VertexColor::Green
                {
                    continue;
                }
                let greens: Vec<usize> = cert
                    .ordering
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| colors[v.index()] == VertexColor::Green)
                    .map(|(p, _)| p + 1)
                    .collect();
                if let [j] = greens[..] {
                    if j > 1 {
                        out.push((q, j));
                    }
                }
            }
        }
    }
    out
}

pub fn random_sequences(
    n: usize,
    count: usize,
    max_len: usize,
    seed: u64,
) -> Vec<MutationSequence> {
    let mut r = rng(seed);
    (0..count)
        .map(|_| {
            let len = r.random_range(1..=max_len);
            random_reduced_sequence(n, len, &mut r)
        })
        .collect()
}

/// Unique ordering of an abundant acyclic quiver read off out-degrees: the
/// vertex with `k` out-neighbours sits at position `n - 1 - k`.
pub fn outdegree_ordering(q: &QuiverMatrix, keep: &[Vertex]) -> Option<Vec<Vertex>> {
    let mut slots = vec![None; keep.len()];
    for &v in keep {
        let out = keep
            .iter()
            .filter(|&&u| u != v && q.weight(v, u) > &0.into())
            .count();
        let slot = slots.get_mut(keep.len() - 1 - out)?;
        if slot.is_some() {
            return None;
        }
        *slot = Some(v);
    }
    slots.into_iter().collect()
}

pub fn v(label: usize) -> Vertex {
    Vertex::new(label).unwrap()
}
