//! Closed-form predictions of acyclic orderings and vertex colors after the
//! structured mutation sequences that drive the reddening construction, plus
//! audit drivers that replay those sequences on the mutation engine and
//! compare.
//!
//! Orderings are written `v_1 < ... < v_k`; `w_j = [v_1, ..., v_j]` is the
//! source sequence of length `j`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quiver::{ExtendedQuiver, QuiverMatrix, VertexColor};
use crate::sequence::{MutationSequence, Vertex};
use crate::structure::{
    acyclic_ordering, acyclic_ordering_without, detect_fork, is_abundant, is_acyclic,
    ForkCertificate,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrderingPrediction {
    /// Vertex removed before reading the ordering, if any.
    pub removed: Option<Vertex>,
    pub ordering: Vec<Vertex>,
}

impl OrderingPrediction {
    /// Compares against the engine's ordering of `q` with `removed` deleted.
    /// The subquiver must also be abundant, since the predictions claim a
    /// unique ordering.
    pub fn matches(&self, q: &QuiverMatrix) -> bool {
        let drop: Vec<Vertex> = self.removed.into_iter().collect();
        if !is_abundant(&q.without(&drop)) {
            return false;
        }
        acyclic_ordering_without(q, &drop)
            .map(|o| o == self.ordering)
            .unwrap_or(false)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ColorConstraint {
    Unconstrained,
    Is(VertexColor),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ColorPrediction {
    pub colors: Vec<ColorConstraint>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColorMismatch {
    pub vertex: Vertex,
    pub expected: VertexColor,
    pub actual: Option<VertexColor>,
}

impl ColorPrediction {
    fn unconstrained(n: usize) -> Self {
        Self {
            colors: vec![ColorConstraint::Unconstrained; n],
        }
    }

    fn set(&mut self, v: Vertex, c: VertexColor) {
        self.colors[v.index()] = ColorConstraint::Is(c);
    }

    pub fn get(&self, v: Vertex) -> ColorConstraint {
        self.colors[v.index()]
    }

    pub fn constrained_count(&self) -> usize {
        self.colors
            .iter()
            .filter(|c| matches!(c, ColorConstraint::Is(_)))
            .count()
    }

    /// Constrained vertices whose actual color differs.
    pub fn mismatches(&self, q: &ExtendedQuiver) -> Vec<ColorMismatch> {
        let actual = q.colors_lossy();
        self.colors
            .iter()
            .enumerate()
            .filter_map(|(i, c)| match c {
                ColorConstraint::Is(expected) if actual[i] != Some(*expected) => {
                    Some(ColorMismatch {
                        vertex: Vertex::from_index(i),
                        expected: *expected,
                        actual: actual[i],
                    })
                }
                _ => None,
            })
            .collect()
    }
}

/// `w_j`: the first `j` vertices of `ordering`.
pub fn source_sequence(ordering: &[Vertex], j: usize) -> MutationSequence {
    MutationSequence::new(ordering[..j].to_vec()).expect("an ordering has distinct vertices")
}

fn rotate(ordering: &[Vertex], j: usize) -> Vec<Vertex> {
    ordering[j..]
        .iter()
        .chain(&ordering[..j])
        .copied()
        .collect()
}

/// Ordering of `Q^j` after the source sequence `w_j` on an abundant acyclic
/// quiver: `v_{j+1} < ... < v_n < v_1 < ... < v_j`.
pub fn predict_order_source_cycle(ordering: &[Vertex], j: usize) -> Result<OrderingPrediction> {
    if j > ordering.len() {
        return Err(Error::Precondition(format!(
            "source cycle length {j} exceeds {} vertices",
            ordering.len()
        )));
    }
    Ok(OrderingPrediction {
        removed: None,
        ordering: rotate(ordering, j % ordering.len().max(1)),
    })
}

/// Ordering of `mu_{v_j}(F) \ {v_j}` for a fork `F` with return `r`: `r` is
/// prepended when `r -> v_j` and appended when `v_j -> r`.
pub fn predict_order_fork_single(
    f: &QuiverMatrix,
    cert: &ForkCertificate,
    vj: Vertex,
) -> Result<OrderingPrediction> {
    let r = cert.point_of_return;
    if vj == r {
        return Err(Error::Precondition(
            "cannot predict after mutating at the point of return".into(),
        ));
    }
    if cert.position(vj).is_none() {
        return Err(Error::VertexOutOfRange {
            vertex: vj.label(),
            total: f.n(),
        });
    }
    let rest: Vec<Vertex> = cert.ordering.iter().copied().filter(|&v| v != vj).collect();
    let ordering = if f.weight(r, vj) > &0.into() {
        std::iter::once(r).chain(rest).collect()
    } else {
        rest.into_iter().chain(std::iter::once(r)).collect()
    };
    Ok(OrderingPrediction {
        removed: Some(vj),
        ordering,
    })
}

fn check_fork_step(cert: &ForkCertificate, j: usize) -> Result<()> {
    if j == 0 || j > cert.ordering.len() {
        return Err(Error::Precondition(format!(
            "step {j} outside 1..={}",
            cert.ordering.len()
        )));
    }
    Ok(())
}

/// Orderings of `F^j \ {v_j}` and `F^j \ {r}` where `F^j = mu_{w_j}(F)`:
/// `r < v_{j+1} < ... < v_{n-1} < v_1 < ... < v_{j-1}` and
/// `v_{j+1} < ... < v_{n-1} < v_1 < ... < v_j`.
pub fn predict_order_fork_source_seq(
    cert: &ForkCertificate,
    j: usize,
) -> Result<(OrderingPrediction, OrderingPrediction)> {
    check_fork_step(cert, j)?;
    let ord = &cert.ordering;
    let r = cert.point_of_return;
    let vj = ord[j - 1];
    let without_r = rotate(ord, j % ord.len());
    let without_vj: Vec<Vertex> = std::iter::once(r)
        .chain(without_r.iter().copied().filter(|&v| v != vj))
        .collect();
    Ok((
        OrderingPrediction {
            removed: Some(vj),
            ordering: without_vj,
        },
        OrderingPrediction {
            removed: Some(r),
            ordering: without_r,
        },
    ))
}

/// Orderings after `w = [v_1, ..., v_j, r]`: `F' \ {v_j}` ends with `r` and
/// `F' \ {r}` starts with `v_j`.
pub fn predict_order_after_return_mutation(
    cert: &ForkCertificate,
    j: usize,
) -> Result<(OrderingPrediction, OrderingPrediction)> {
    check_fork_step(cert, j)?;
    let ord = &cert.ordering;
    let r = cert.point_of_return;
    let vj = ord[j - 1];
    let tail: Vec<Vertex> = ord[j..].iter().chain(&ord[..j - 1]).copied().collect();
    let without_vj = tail.iter().copied().chain(std::iter::once(r)).collect();
    let without_r = std::iter::once(vj).chain(tail).collect();
    Ok((
        OrderingPrediction {
            removed: Some(vj),
            ordering: without_vj,
        },
        OrderingPrediction {
            removed: Some(r),
            ordering: without_r,
        },
    ))
}

/// The mutable part's shape as far as the color predictions care.
enum Shape {
    AbundantAcyclic(Vec<Vertex>),
    Fork(ForkCertificate),
}

fn shape(q: &QuiverMatrix) -> Result<Shape> {
    if is_abundant(q) && is_acyclic(q) {
        return Ok(Shape::AbundantAcyclic(acyclic_ordering(q)?));
    }
    detect_fork(q)
        .map(Shape::Fork)
        .ok_or(Error::NotAbundantAcyclic)
}

/// Colors after a single mutation at `vj` of an abundant acyclic quiver or a
/// fork (with `vj` not the point of return).
///
/// Blue `vj` leaves every color alone. Green `vj` turns red and fixes all
/// later vertices; red `vj` turns green and fixes all earlier ones. In a fork
/// the return keeps its color when a green `vj` points into it or a red `vj`
/// receives an arrow from it.
pub fn predict_colors_single(q: &ExtendedQuiver, vj: Vertex) -> Result<ColorPrediction> {
    q.check_mutable(vj)?;
    let colors = q.colors()?;
    let b = q.mutable_part();
    let (ordering, fork_return) = match shape(b)? {
        Shape::AbundantAcyclic(o) => (o, None),
        Shape::Fork(cert) => {
            if cert.point_of_return == vj {
                return Err(Error::Precondition(
                    "vertex must not be the point of return".into(),
                ));
            }
            (cert.ordering, Some(cert.point_of_return))
        }
    };
    let mut pred = ColorPrediction::unconstrained(q.n());
    let pos = ordering
        .iter()
        .position(|&v| v == vj)
        .expect("vj is in the ordering");
    match colors[vj.index()] {
        VertexColor::Blue => {
            for v in q.mutable_vertices() {
                pred.set(v, colors[v.index()]);
            }
        }
        VertexColor::Green => {
            for &v in &ordering[pos + 1..] {
                pred.set(v, colors[v.index()]);
            }
            pred.set(vj, VertexColor::Red);
            if let Some(r) = fork_return {
                if b.weight(vj, r) > &0.into() {
                    pred.set(r, colors[r.index()]);
                }
            }
        }
        VertexColor::Red => {
            for &v in &ordering[..pos] {
                pred.set(v, colors[v.index()]);
            }
            pred.set(vj, VertexColor::Green);
            if let Some(r) = fork_return {
                if b.weight(r, vj) > &0.into() {
                    pred.set(r, colors[r.index()]);
                }
            }
        }
    }
    Ok(pred)
}

/// Colors of `Q^j = mu_{w_j}(Q)` for abundant acyclic `Q` with `v_j` red:
/// `v_1, ..., v_{j-1}` red and `v_j` green.
pub fn predict_colors_source_seq(q: &ExtendedQuiver, j: usize) -> Result<ColorPrediction> {
    let b = q.mutable_part();
    if !(is_abundant(b) && is_acyclic(b)) {
        return Err(Error::NotAbundantAcyclic);
    }
    let ordering = acyclic_ordering(b)?;
    source_seq_colors(q, &ordering, j)
}

fn source_seq_colors(q: &ExtendedQuiver, ordering: &[Vertex], j: usize) -> Result<ColorPrediction> {
    if j == 0 || j > ordering.len() {
        return Err(Error::Precondition(format!(
            "step {j} outside 1..={}",
            ordering.len()
        )));
    }
    let vj = ordering[j - 1];
    if q.vertex_color(vj)? != VertexColor::Red {
        return Err(Error::Precondition(format!("v_{j} = {vj} is not red")));
    }
    let mut pred = ColorPrediction::unconstrained(q.n());
    for &v in &ordering[..j - 1] {
        pred.set(v, VertexColor::Red);
    }
    pred.set(vj, VertexColor::Green);
    Ok(pred)
}

/// Colors of `F^j = mu_{w_j}(F)` for a fork `F`, `1 <= j <= n-1`.
///
/// The point of return stays green when it starts green and is unconstrained
/// when it starts red. A blue return stays blue only while no `v_i` is green
/// in `F^{i-1}`; that case needs the intermediate colors, which are read off
/// the engine (it cannot occur for strictly sign-coherent inputs). When `v_j`
/// is red in `F`, the vertices `v_1, ..., v_{j-1}` end red and `v_j` green.
pub fn predict_colors_fork_source_seq(f: &ExtendedQuiver, j: usize) -> Result<ColorPrediction> {
    let cert = detect_fork(f.mutable_part()).ok_or(Error::NotAFork)?;
    check_fork_step(&cert, j)?;
    let r = cert.point_of_return;
    let vj = cert.ordering[j - 1];
    let mut pred = if f.vertex_color(vj)? == VertexColor::Red {
        source_seq_colors(f, &cert.ordering, j)?
    } else {
        ColorPrediction::unconstrained(f.n())
    };
    match f.vertex_color(r)? {
        VertexColor::Green => pred.set(r, VertexColor::Green),
        VertexColor::Red => {}
        VertexColor::Blue => {
            let mut cur = f.clone();
            let mut some_green = false;
            for &v in &cert.ordering[..j] {
                if cur.vertex_color(v)? == VertexColor::Green {
                    some_green = true;
                }
                cur = cur.mutate(v)?;
            }
            pred.set(
                r,
                if some_green {
                    VertexColor::Green
                } else {
                    VertexColor::Blue
                },
            );
        }
    }
    Ok(pred)
}

/// Outcome of replaying the predictions against the engine.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct OracleAudit {
    pub predictions: usize,
    pub constrained_vertices: usize,
    pub mismatches: Vec<String>,
}

impl OracleAudit {
    pub fn is_clean(&self) -> bool {
        self.mismatches.is_empty()
    }

    pub fn merge(&mut self, other: OracleAudit) {
        self.predictions += other.predictions;
        self.constrained_vertices += other.constrained_vertices;
        self.mismatches.extend(other.mismatches);
    }

    fn ordering(&mut self, label: &str, pred: &OrderingPrediction, q: &QuiverMatrix) {
        self.predictions += 1;
        if !pred.matches(q) {
            let drop: Vec<Vertex> = pred.removed.into_iter().collect();
            self.mismatches.push(format!(
                "{label}: predicted {:?}, engine {:?}",
                pred.ordering,
                acyclic_ordering_without(q, &drop).ok()
            ));
        }
    }

    fn colors(&mut self, label: &str, pred: &ColorPrediction, q: &ExtendedQuiver) {
        self.predictions += 1;
        self.constrained_vertices += pred.constrained_count();
        for m in pred.mismatches(q) {
            self.mismatches.push(format!(
                "{label}: vertex {} predicted {}, engine {:?}",
                m.vertex, m.expected, m.actual
            ));
        }
    }
}

/// Checks every ordering prediction that applies to `q` (an abundant acyclic
/// quiver or a fork) against the engine.
pub fn audit_orderings(q: &QuiverMatrix) -> Result<OracleAudit> {
    let mut audit = OracleAudit::default();
    match shape(q)? {
        Shape::AbundantAcyclic(ordering) => {
            for j in 0..=ordering.len() {
                let pred = predict_order_source_cycle(&ordering, j)?;
                let actual = q.mutate_seq(&source_sequence(&ordering, j))?;
                audit.ordering(&format!("source cycle j={j}"), &pred, &actual);
            }
        }
        Shape::Fork(cert) => {
            let r = cert.point_of_return;
            for &vj in &cert.ordering {
                let pred = predict_order_fork_single(q, &cert, vj)?;
                audit.ordering(&format!("fork single at {vj}"), &pred, &q.mutate(vj)?);
            }
            for j in 1..=cert.ordering.len() {
                let w = source_sequence(&cert.ordering, j);
                let fj = q.mutate_seq(&w)?;
                let (a, b) = predict_order_fork_source_seq(&cert, j)?;
                audit.ordering(&format!("fork source j={j} without v_j"), &a, &fj);
                audit.ordering(&format!("fork source j={j} without r"), &b, &fj);

                let fr = fj.mutate(r)?;
                let (a, b) = predict_order_after_return_mutation(&cert, j)?;
                audit.ordering(&format!("w_{j}[r] without v_j"), &a, &fr);
                audit.ordering(&format!("w_{j}[r] without r"), &b, &fr);
            }
        }
    }
    Ok(audit)
}

/// Checks every color prediction that applies to `q` against the engine.
pub fn audit_colors(q: &ExtendedQuiver) -> Result<OracleAudit> {
    let mut audit = OracleAudit::default();
    let b = q.mutable_part();
    match shape(b)? {
        Shape::AbundantAcyclic(ordering) => {
            for &vj in &ordering {
                let pred = predict_colors_single(q, vj)?;
                audit.colors(&format!("single at {vj}"), &pred, &q.mutate(vj)?);
            }
            for j in 1..=ordering.len() {
                if q.vertex_color(ordering[j - 1])? != VertexColor::Red {
                    continue;
                }
                let pred = predict_colors_source_seq(q, j)?;
                let qj = q.mutate_seq(&source_sequence(&ordering, j))?;
                audit.colors(&format!("source sequence j={j}"), &pred, &qj);
                if j == ordering.len() {
                    audit.predictions += 1;
                    if qj.red_count() != ordering.len() - 1 {
                        audit.mismatches.push(format!(
                            "full source cycle: {} red, expected {}",
                            qj.red_count(),
                            ordering.len() - 1
                        ));
                    }
                }
            }
        }
        Shape::Fork(cert) => {
            for &vj in &cert.ordering {
                let pred = predict_colors_single(q, vj)?;
                audit.colors(&format!("fork single at {vj}"), &pred, &q.mutate(vj)?);
            }
            for j in 1..=cert.ordering.len() {
                let pred = predict_colors_fork_source_seq(q, j)?;
                let fj = q.mutate_seq(&source_sequence(&cert.ordering, j))?;
                audit.colors(&format!("fork source j={j}"), &pred, &fj);
            }
        }
    }
    Ok(audit)
}

/// Runs the engine on `w -> v_i` (`b`), `v_i -> v_k` (`a`), `w -> v_k` (`c`)
/// with `v_i` red and returns the number of `w -> v_k` arrows after mutating
/// at `v_i`.
pub fn red_source_frozen_growth(a: i64, b: i64, c: i64) -> Result<num_bigint::BigInt> {
    let q = ExtendedQuiver::from_i64(&[vec![0, a], vec![-a, 0]], &[vec![-b], vec![-c]], 1)?;
    let p = q.mutate(Vertex::from_index(0))?;
    Ok(-p.c_vector(Vertex::from_index(1))[0].clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::{coframe, frame};
    use crate::sequence::vertices;

    fn v(l: usize) -> Vertex {
        Vertex::new(l).unwrap()
    }

    /// (r, i, j) = (1, 2, 3): i -> r (3), r -> j (4), j -> i (5).
    fn fork_example() -> QuiverMatrix {
        QuiverMatrix::from_arrows(3, &[(2, 1, 3), (1, 3, 4), (3, 2, 5)]).unwrap()
    }

    fn aa4() -> QuiverMatrix {
        QuiverMatrix::from_arrows(
            4,
            &[
                (1, 2, 2),
                (1, 3, 3),
                (1, 4, 2),
                (2, 3, 4),
                (2, 4, 2),
                (3, 4, 5),
            ],
        )
        .unwrap()
    }

    #[test]
    fn source_cycle_shapes() {
        let o = vertices(&[1, 2, 3, 4]);
        assert_eq!(predict_order_source_cycle(&o, 4).unwrap().ordering, o);
        assert_eq!(
            predict_order_source_cycle(&o, 1).unwrap().ordering,
            vertices(&[2, 3, 4, 1])
        );
        assert_eq!(
            predict_order_source_cycle(&o, 2).unwrap().ordering,
            vertices(&[3, 4, 1, 2])
        );
        assert!(predict_order_source_cycle(&o, 5).is_err());
    }

    #[test]
    fn fork_single_cases_on_example() {
        let f = fork_example();
        let cert = detect_fork(&f).unwrap();
        // r -> j: r comes first in F' \ {j}
        let p = predict_order_fork_single(&f, &cert, v(3)).unwrap();
        assert_eq!(p.ordering, vertices(&[1, 2]));
        assert!(p.matches(&f.mutate(v(3)).unwrap()));
        // i -> r: r comes last in F' \ {i}
        let p = predict_order_fork_single(&f, &cert, v(2)).unwrap();
        assert_eq!(p.ordering, vertices(&[3, 1]));
        assert!(p.matches(&f.mutate(v(2)).unwrap()));
        assert!(predict_order_fork_single(&f, &cert, v(1)).is_err());
    }

    #[test]
    fn fork_source_sequence_base_case() {
        let f = fork_example();
        let cert = detect_fork(&f).unwrap();
        let (a, b) = predict_order_fork_source_seq(&cert, 1).unwrap();
        assert_eq!(a.ordering, vertices(&[1, 2]));
        assert_eq!(b.ordering, vertices(&[2, 3]));
        let (_, b) = predict_order_fork_source_seq(&cert, 2).unwrap();
        assert_eq!(b.ordering, cert.ordering);
        assert!(predict_order_fork_source_seq(&cert, 0).is_err());
    }

    #[test]
    fn audits_pass_on_small_examples() {
        assert!(audit_orderings(&fork_example()).unwrap().is_clean());
        assert!(audit_orderings(&aa4()).unwrap().is_clean());
        for q in [frame(&aa4()), coframe(&aa4()), frame(&fork_example())] {
            let audit = audit_colors(&q).unwrap();
            assert!(audit.is_clean(), "{:?}", audit.mismatches);
            assert!(audit.constrained_vertices > 0);
        }
    }

    #[test]
    fn blue_vertex_predicts_identity() {
        let mut c = vec![vec![0i64; 4]; 4];
        c[0][0] = 1;
        c[2][2] = -1;
        c[3][3] = 1;
        let b: Vec<Vec<i64>> = (0..4)
            .map(|i| {
                (0..4)
                    .map(|j| i64::try_from(&aa4().matrix()[(i, j)]).unwrap())
                    .collect()
            })
            .collect();
        let q = ExtendedQuiver::from_i64(&b, &c, 4).unwrap();
        let pred = predict_colors_single(&q, v(2)).unwrap();
        assert_eq!(pred.constrained_count(), 4);
        assert!(pred.mismatches(&q.mutate(v(2)).unwrap()).is_empty());
    }

    #[test]
    fn green_source_only_flips_itself() {
        let q = frame(&aa4());
        let pred = predict_colors_single(&q, v(1)).unwrap();
        assert_eq!(pred.get(v(1)), ColorConstraint::Is(VertexColor::Red));
        for k in 2..=4 {
            assert_eq!(pred.get(v(k)), ColorConstraint::Is(VertexColor::Green));
        }
    }

    #[test]
    fn source_seq_color_cases() {
        let q = coframe(&aa4());
        let pred = predict_colors_source_seq(&q, 4).unwrap();
        let end = q
            .mutate_seq(&source_sequence(&vertices(&[1, 2, 3, 4]), 4))
            .unwrap();
        assert!(pred.mismatches(&end).is_empty());
        assert_eq!(end.red_count(), 3);
        let pred = predict_colors_source_seq(&q, 1).unwrap();
        assert_eq!(pred.get(v(1)), ColorConstraint::Is(VertexColor::Green));
        assert!(predict_colors_source_seq(&frame(&aa4()), 2).is_err());
    }

    #[test]
    fn frozen_growth_is_c_plus_ab() {
        assert_eq!(red_source_frozen_growth(2, 1, 0).unwrap(), 2.into());
        assert_eq!(red_source_frozen_growth(3, 4, 5).unwrap(), 17.into());
    }
}
