//! Ice quivers as extended exchange matrices `[B | C]`, mutation, framings and
//! vertex colors.

use std::fmt;

use num_bigint::{BigInt, Sign as BigSign};
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::sequence::{MutationSequence, Vertex};

/// Sign of a sign-coherent integer vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Positive,
    Negative,
    Zero,
}

impl Sign {
    pub fn opposite(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
            Sign::Zero => Sign::Zero,
        }
    }
}

/// Sign of `row` read componentwise; `None` when it has entries of both signs.
pub fn vector_sign(row: &[BigInt]) -> Option<Sign> {
    let mut pos = false;
    let mut neg = false;
    for x in row {
        match x.sign() {
            BigSign::Plus => pos = true,
            BigSign::Minus => neg = true,
            BigSign::NoSign => {}
        }
    }
    match (pos, neg) {
        (true, true) => None,
        (true, false) => Some(Sign::Positive),
        (false, true) => Some(Sign::Negative),
        (false, false) => Some(Sign::Zero),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VertexColor {
    Red,
    Green,
    Blue,
}

impl VertexColor {
    pub fn from_sign(sign: Sign) -> Self {
        match sign {
            Sign::Positive => VertexColor::Green,
            Sign::Negative => VertexColor::Red,
            Sign::Zero => VertexColor::Blue,
        }
    }

    pub fn letter(self) -> char {
        match self {
            VertexColor::Red => 'R',
            VertexColor::Green => 'G',
            VertexColor::Blue => 'B',
        }
    }
}

impl fmt::Display for VertexColor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VertexColor::Red => "red",
            VertexColor::Green => "green",
            VertexColor::Blue => "blue",
        })
    }
}

/// True when `a * b > 0`.
#[inline]
fn same_strict_sign(a: &BigInt, b: &BigInt) -> bool {
    let (sa, sb) = (a.sign(), b.sign());
    sa != BigSign::NoSign && sa == sb
}

/// Skew-symmetric exchange matrix of a quiver without frozen vertices.
///
/// `b[(i, j)]` is the number of arrows `i -> j`, negative when they point
/// `j -> i`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuiverMatrix {
    b: IntMatrix,
}

impl QuiverMatrix {
    pub fn new(b: IntMatrix) -> Result<Self> {
        if b.rows() != b.cols() {
            return Err(Error::Dimension(format!(
                "exchange matrix is {}x{}",
                b.rows(),
                b.cols()
            )));
        }
        for i in 0..b.rows() {
            for j in i..b.rows() {
                if b[(i, j)] != -&b[(j, i)] {
                    return Err(Error::NotSkewSymmetric { i: i + 1, j: j + 1 });
                }
            }
        }
        Ok(Self { b })
    }

    pub fn from_i64_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        let b = IntMatrix::from_i64_rows(rows, n)
            .ok_or_else(|| Error::Dimension("rows must all have length n".into()))?;
        Self::new(b)
    }

    /// Builds a quiver from a list of arrows `(from, to, multiplicity)` on `n`
    /// vertices with 1-based labels.
    pub fn from_arrows(n: usize, arrows: &[(usize, usize, i64)]) -> Result<Self> {
        let mut b = IntMatrix::zeros(n, n);
        for &(from, to, mult) in arrows {
            if from == 0 || to == 0 || from > n || to > n || from == to {
                return Err(Error::VertexOutOfRange {
                    vertex: from.max(to),
                    total: n,
                });
            }
            b[(from - 1, to - 1)] += mult;
            b[(to - 1, from - 1)] -= mult;
        }
        Ok(Self { b })
    }

    pub fn empty() -> Self {
        Self {
            b: IntMatrix::zeros(0, 0),
        }
    }

    pub fn n(&self) -> usize {
        self.b.rows()
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.b
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> {
        (0..self.n()).map(Vertex::from_index)
    }

    /// Signed arrow count from `u` to `v`.
    pub fn weight(&self, u: Vertex, v: Vertex) -> &BigInt {
        &self.b[(u.index(), v.index())]
    }

    /// Sum of `|b_ij|` over unordered pairs.
    pub fn total_arrows(&self) -> BigInt {
        let mut total = BigInt::zero();
        for i in 0..self.n() {
            for j in i + 1..self.n() {
                total += self.b[(i, j)].abs();
            }
        }
        total
    }

    pub fn check_vertex(&self, v: Vertex) -> Result<()> {
        if v.index() < self.n() {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange {
                vertex: v.label(),
                total: self.n(),
            })
        }
    }

    pub fn mutate(&self, k: Vertex) -> Result<Self> {
        self.check_vertex(k)?;
        let mut out = self.clone();
        mutate_exchange(&mut out.b, k.index());
        Ok(out)
    }

    pub fn mutate_seq(&self, w: &MutationSequence) -> Result<Self> {
        let mut out = self.clone();
        for &k in w.as_slice() {
            self.check_vertex(k)?;
            mutate_exchange(&mut out.b, k.index());
        }
        Ok(out)
    }

    /// Full subquiver on `keep`, relabelled `1..=|keep|` in ascending order of
    /// the original labels. Duplicates are ignored.
    pub fn full_subquiver(&self, keep: &[Vertex]) -> Self {
        let mut idx: Vec<usize> = keep
            .iter()
            .map(|v| v.index())
            .filter(|&i| i < self.n())
            .collect();
        idx.sort_unstable();
        idx.dedup();
        Self {
            b: self.b.select(&idx, &idx),
        }
    }

    /// The complement of `drop` as a sorted vertex list, i.e. the labels of
    /// `self \ drop` in the order `full_subquiver` uses.
    pub fn complement(&self, drop: &[Vertex]) -> Vec<Vertex> {
        self.vertices().filter(|v| !drop.contains(v)).collect()
    }

    pub fn without(&self, drop: &[Vertex]) -> Self {
        self.full_subquiver(&self.complement(drop))
    }

    /// Block-diagonal union; vertices of `other` are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &QuiverMatrix) -> Self {
        let (n1, n2) = (self.n(), other.n());
        let mut b = IntMatrix::zeros(n1 + n2, n1 + n2);
        for i in 0..n1 {
            for j in 0..n1 {
                b[(i, j)] = self.b[(i, j)].clone();
            }
        }
        for i in 0..n2 {
            for j in 0..n2 {
                b[(n1 + i, n1 + j)] = other.b[(i, j)].clone();
            }
        }
        Self { b }
    }
}

impl fmt::Debug for QuiverMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("QuiverMatrix").field(&self.b).finish()
    }
}

/// Applies mutation at index `k` to a skew-symmetric matrix in place.
fn mutate_exchange(b: &mut IntMatrix, k: usize) {
    let n = b.rows();
    for i in 0..n {
        if i == k || b[(i, k)].is_zero() {
            continue;
        }
        let bik = b[(i, k)].clone();
        let abs_ik = bik.abs();
        for j in 0..n {
            if j == k || j == i {
                continue;
            }
            if same_strict_sign(&bik, &b[(k, j)]) {
                let delta = &abs_ik * &b[(k, j)];
                b[(i, j)] += delta;
            }
        }
    }
    for j in 0..n {
        if j != k {
            let v = -&b[(k, j)];
            b[(k, j)] = v.clone();
            b[(j, k)] = -v;
        }
    }
}

/// An ice quiver with `n` mutable and `m` frozen vertices, stored as `[B | C]`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExtendedQuiver {
    b: QuiverMatrix,
    c: IntMatrix,
}

impl ExtendedQuiver {
    pub fn new(b: QuiverMatrix, c: IntMatrix) -> Result<Self> {
        if c.rows() != b.n() {
            return Err(Error::Dimension(format!(
                "C has {} rows but B has {} mutable vertices",
                c.rows(),
                b.n()
            )));
        }
        Ok(Self { b, c })
    }

    pub fn from_i64(b: &[Vec<i64>], c: &[Vec<i64>], m: usize) -> Result<Self> {
        let q = QuiverMatrix::from_i64_rows(b)?;
        let c = IntMatrix::from_i64_rows(c, m)
            .ok_or_else(|| Error::Dimension("C rows must all have length m".into()))?;
        Self::new(q, c)
    }

    /// Ice quiver with no frozen vertices.
    pub fn unframed(q: QuiverMatrix) -> Self {
        let n = q.n();
        Self {
            b: q,
            c: IntMatrix::zeros(n, 0),
        }
    }

    pub fn n(&self) -> usize {
        self.b.n()
    }

    pub fn m(&self) -> usize {
        self.c.cols()
    }

    pub fn mutable_part(&self) -> &QuiverMatrix {
        &self.b
    }

    pub fn c_matrix(&self) -> &IntMatrix {
        &self.c
    }

    pub fn mutable_vertices(&self) -> impl Iterator<Item = Vertex> {
        (0..self.n()).map(Vertex::from_index)
    }

    pub fn check_mutable(&self, k: Vertex) -> Result<()> {
        if k.index() < self.n() {
            Ok(())
        } else if k.index() < self.n() + self.m() {
            Err(Error::FrozenVertex(k))
        } else {
            Err(Error::VertexOutOfRange {
                vertex: k.label(),
                total: self.n() + self.m(),
            })
        }
    }

    pub fn mutate(&self, k: Vertex) -> Result<Self> {
        self.check_mutable(k)?;
        let mut out = self.clone();
        out.mutate_in_place(k.index());
        Ok(out)
    }

    pub fn mutate_seq(&self, w: &MutationSequence) -> Result<Self> {
        for &k in w.as_slice() {
            self.check_mutable(k)?;
        }
        let mut out = self.clone();
        for &k in w.as_slice() {
            out.mutate_in_place(k.index());
        }
        Ok(out)
    }

    /// Mutation at a mutable index that has already been validated.
    pub(crate) fn mutate_in_place(&mut self, k: usize) {
        let n = self.n();
        let m = self.m();
        for i in 0..n {
            if i == k || self.b.b[(i, k)].is_zero() {
                continue;
            }
            let bik = self.b.b[(i, k)].clone();
            let abs_ik = bik.abs();
            for j in 0..m {
                if same_strict_sign(&bik, &self.c[(k, j)]) {
                    let delta = &abs_ik * &self.c[(k, j)];
                    self.c[(i, j)] += delta;
                }
            }
        }
        for x in self.c.row_mut(k) {
            *x = -&*x;
        }
        mutate_exchange(&mut self.b.b, k);
    }

    /// Row `v` of `C`.
    pub fn c_vector(&self, v: Vertex) -> &[BigInt] {
        self.c.row(v.index())
    }

    /// Sign of `c_v`; `None` when mixed.
    pub fn c_sign(&self, v: Vertex) -> Option<Sign> {
        vector_sign(self.c_vector(v))
    }

    pub fn vertex_color(&self, v: Vertex) -> Result<VertexColor> {
        self.check_mutable(v)?;
        self.c_sign(v)
            .map(VertexColor::from_sign)
            .ok_or(Error::MixedSigns(v))
    }

    /// Colors of all mutable vertices; fails on the first mixed-sign row.
    pub fn colors(&self) -> Result<Vec<VertexColor>> {
        self.mutable_vertices()
            .map(|v| self.vertex_color(v))
            .collect()
    }

    /// Colors with mixed-sign rows reported as `None`.
    pub fn colors_lossy(&self) -> Vec<Option<VertexColor>> {
        self.mutable_vertices()
            .map(|v| self.c_sign(v).map(VertexColor::from_sign))
            .collect()
    }

    pub fn count_color(&self, color: VertexColor) -> usize {
        self.colors_lossy()
            .into_iter()
            .filter(|c| *c == Some(color))
            .count()
    }

    pub fn red_count(&self) -> usize {
        self.count_color(VertexColor::Red)
    }

    pub fn vertices_with_color(&self, color: VertexColor) -> Vec<Vertex> {
        self.mutable_vertices()
            .filter(|&v| self.c_sign(v).map(VertexColor::from_sign) == Some(color))
            .collect()
    }
}

impl fmt::Debug for ExtendedQuiver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ExtendedQuiver")
            .field("b", &self.b.b)
            .field("c", &self.c)
            .finish()
    }
}

/// Framed quiver: one frozen `i'` per vertex with a single arrow `i -> i'`.
pub fn frame(q: &QuiverMatrix) -> ExtendedQuiver {
    ExtendedQuiver {
        b: q.clone(),
        c: IntMatrix::identity(q.n()),
    }
}

/// Coframed quiver: one frozen `i'` per vertex with a single arrow `i' -> i`.
pub fn coframe(q: &QuiverMatrix) -> ExtendedQuiver {
    ExtendedQuiver {
        b: q.clone(),
        c: IntMatrix::identity(q.n()).negated(),
    }
}

pub fn full_subquiver(q: &QuiverMatrix, keep: &[Vertex]) -> QuiverMatrix {
    q.full_subquiver(keep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequence::vertices;

    fn v(l: usize) -> Vertex {
        Vertex::new(l).unwrap()
    }

    fn a2() -> QuiverMatrix {
        QuiverMatrix::from_i64_rows(&[[0, 1], [-1, 0]]).unwrap()
    }

    /// Vertices (r, i, j) = (1, 2, 3): i -> r (3), r -> j (4), j -> i (5).
    fn fork_example() -> QuiverMatrix {
        QuiverMatrix::from_arrows(3, &[(2, 1, 3), (1, 3, 4), (3, 2, 5)]).unwrap()
    }

    #[test]
    fn rejects_non_skew() {
        assert!(matches!(
            QuiverMatrix::from_i64_rows(&[[0, 1], [1, 0]]),
            Err(Error::NotSkewSymmetric { .. })
        ));
        assert!(QuiverMatrix::from_i64_rows(&[[1, 0], [0, -1]]).is_err());
    }

    #[test]
    fn framed_a2_mutation_by_hand() {
        // Hand-applied case formulas: c_1 flips, c_2 gets b_21 * c_11 = -1 < 0 so
        // stays put, b_12 flips.
        let q = frame(&a2()).mutate(v(1)).unwrap();
        assert_eq!(q.c_vector(v(1)), &[BigInt::from(-1), BigInt::from(0)]);
        assert_eq!(q.c_vector(v(2)), &[BigInt::from(0), BigInt::from(1)]);
        assert_eq!(q.mutable_part().weight(v(1), v(2)), &BigInt::from(-1));
    }

    #[test]
    fn fork_example_mutated_at_i() {
        // j -> i -> r gives 5*3 = 15 new j -> r arrows, cancelling the 4 r -> j.
        let q = frame(&fork_example()).mutate(v(2)).unwrap();
        let b = q.mutable_part();
        assert_eq!(b.weight(v(1), v(2)), &BigInt::from(3));
        assert_eq!(b.weight(v(2), v(3)), &BigInt::from(5));
        assert_eq!(b.weight(v(3), v(1)), &BigInt::from(11));
    }

    #[test]
    fn triangle_frozen_growth_c_plus_ab() {
        // w -> v_i (b), v_i -> v_k (a), w -> v_k (c); mutate v_i.
        for (a, b, c) in [(2, 1, 0), (3, 2, 5), (6, 5, 5)] {
            let q = ExtendedQuiver::from_i64(&[vec![0, a], vec![-a, 0]], &[vec![-b], vec![-c]], 1)
                .unwrap();
            let p = q.mutate(v(1)).unwrap();
            assert_eq!(p.c_vector(v(2)), &[BigInt::from(-(c + a * b))]);
        }
    }

    #[test]
    fn mutation_is_an_involution_on_fork() {
        let q = frame(&fork_example());
        for k in 1..=3 {
            assert_eq!(q.mutate(v(k)).unwrap().mutate(v(k)).unwrap(), q);
        }
    }

    #[test]
    fn frozen_and_out_of_range_mutation_rejected() {
        let q = frame(&a2());
        assert!(matches!(q.mutate(v(3)), Err(Error::FrozenVertex(_))));
        assert!(matches!(
            q.mutate(v(5)),
            Err(Error::VertexOutOfRange { .. })
        ));
    }

    #[test]
    fn mutate_seq_folds_left_to_right() {
        let q = frame(&fork_example());
        let w = MutationSequence::new(vertices(&[1, 2, 1, 2])).unwrap();
        let folded = q
            .mutate(v(1))
            .and_then(|p| p.mutate(v(2)))
            .and_then(|p| p.mutate(v(1)))
            .and_then(|p| p.mutate(v(2)))
            .unwrap();
        assert_eq!(q.mutate_seq(&w).unwrap(), folded);
        assert_eq!(q.mutate_seq(&MutationSequence::empty()).unwrap(), q);
    }

    #[test]
    fn framing_colors() {
        let q = fork_example();
        assert!(frame(&q)
            .colors()
            .unwrap()
            .iter()
            .all(|&c| c == VertexColor::Green));
        assert!(coframe(&q)
            .colors()
            .unwrap()
            .iter()
            .all(|&c| c == VertexColor::Red));
        assert_eq!(coframe(&q).c_matrix(), &frame(&q).c_matrix().negated());
        let empty = frame(&QuiverMatrix::empty());
        assert_eq!((empty.n(), empty.m()), (0, 0));
    }

    #[test]
    fn framed_c_vectors_are_unit_vectors() {
        let q = frame(&fork_example());
        for k in 1..=3 {
            let row: Vec<i64> = q
                .c_vector(v(k))
                .iter()
                .map(|x| i64::try_from(x).unwrap())
                .collect();
            let mut e = vec![0; 3];
            e[k - 1] = 1;
            assert_eq!(row, e);
        }
    }

    #[test]
    fn color_classification() {
        let q = ExtendedQuiver::from_i64(
            &[vec![0, 0, 0], vec![0, 0, 0], vec![0, 0, 0]],
            &[vec![0, 0, 0], vec![1, -1, 0], vec![0, 2, 1]],
            3,
        )
        .unwrap();
        assert_eq!(q.vertex_color(v(1)).unwrap(), VertexColor::Blue);
        assert!(matches!(q.vertex_color(v(2)), Err(Error::MixedSigns(_))));
        assert_eq!(q.vertex_color(v(3)).unwrap(), VertexColor::Green);
    }

    #[test]
    fn subquiver_of_fork_drops_return() {
        let q = fork_example();
        let s = q.without(&[v(1)]);
        // remaining (i, j) = (1, 2): single arrow j -> i with multiplicity 5
        assert_eq!(s.n(), 2);
        assert_eq!(s.weight(v(2), v(1)), &BigInt::from(5));
        assert_eq!(q.full_subquiver(&vertices(&[1, 2, 3])), q);
        assert_eq!(q.full_subquiver(&[]).n(), 0);
    }
}
