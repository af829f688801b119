//! Sign conditions on c-vectors along mutation trajectories, and bounded
//! searches that corroborate sign-coherence and the absence of all-red
//! states.
//!
//! Every check is pivoted at a vertex `r` (the last mutation) and consists of
//! four statements about the state `P`:
//!
//! 1. every mutable vertex is red or green;
//! 2. `b_rj c_j >= 0` implies `sgn(c_j) = sgn(c_r)` or
//!    `sgn(c_j) c_j >= sgn(c_r) c_r`;
//! 3. `b_rj c_j <= 0` implies `sgn(c_j) = -sgn(c_r)`;
//! 4. `b_ij c_j >= 0` for `i, j != r` implies `sgn(c_i) = sgn(c_j)`.
//!
//! Vector inequalities are componentwise.

use std::sync::atomic::{AtomicUsize, Ordering};

use num_bigint::BigInt;
use num_traits::Signed;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::explore::{ExploreOptions, ExploreStats, Explorer, Search};
use crate::quiver::{frame, ExtendedQuiver, QuiverMatrix, Sign, VertexColor};
use crate::sequence::{MutationSequence, Vertex};
use crate::structure::{
    certify_fork, is_abundant, is_acyclic, is_mutation_cyclic_rank3, is_sink, is_source,
};

/// Which wording of statement 2 to use for base conditions.
/// `NeighboursOnly` also requires `b_rj != 0`; the two only differ when `r`
/// has a non-neighbour.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConditionReading {
    #[default]
    NeighboursOnly,
    AllVertices,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SignWitness {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub i: Option<Vertex>,
    pub j: Vertex,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BulletCheck {
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<SignWitness>,
}

impl BulletCheck {
    fn pass() -> Self {
        Self {
            holds: true,
            witness: None,
        }
    }

    fn fail(i: Option<Vertex>, j: Vertex, detail: String) -> Self {
        Self {
            holds: false,
            witness: Some(SignWitness { i, j, detail }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SignBullets {
    pub red_or_green: BulletCheck,
    pub pivot_dominance: BulletCheck,
    pub pivot_opposite: BulletCheck,
    pub same_sign: BulletCheck,
}

impl SignBullets {
    pub fn all_hold(&self) -> bool {
        self.as_array().iter().all(|(_, b)| b.holds)
    }

    fn as_array(&self) -> [(&'static str, &BulletCheck); 4] {
        [
            ("red_or_green", &self.red_or_green),
            ("pivot_dominance", &self.pivot_dominance),
            ("pivot_opposite", &self.pivot_opposite),
            ("same_sign", &self.same_sign),
        ]
    }

    pub fn failures(&self) -> Vec<(&'static str, &SignWitness)> {
        self.as_array()
            .into_iter()
            .filter_map(|(name, b)| b.witness.as_ref().map(|w| (name, w)))
            .collect()
    }
}

fn sgn(q: &ExtendedQuiver, v: Vertex) -> Option<i8> {
    q.c_sign(v).map(|s| match s {
        Sign::Positive => 1,
        Sign::Negative => -1,
        Sign::Zero => 0,
    })
}

/// `scale * c >= 0` (or `<= 0` when `nonneg` is false) componentwise.
fn scaled_signed(scale: &BigInt, c: &[BigInt], nonneg: bool) -> bool {
    c.iter().all(|x| {
        let p = scale * x;
        if nonneg {
            !p.is_negative()
        } else {
            !p.is_positive()
        }
    })
}

/// `sa * a >= sb * b` componentwise.
fn dominates(sa: i8, a: &[BigInt], sb: i8, b: &[BigInt]) -> bool {
    a.iter()
        .zip(b)
        .all(|(x, y)| BigInt::from(sa) * x >= BigInt::from(sb) * y)
}

fn fmt_vec(c: &[BigInt]) -> String {
    let parts: Vec<String> = c.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(", "))
}

fn fmt_sgn(s: Option<i8>) -> String {
    s.map_or("mixed".into(), |s| s.to_string())
}

/// Evaluates the four statements on `p` pivoted at `r`.
pub fn sign_bullets(p: &ExtendedQuiver, r: Vertex, reading: ConditionReading) -> SignBullets {
    let b = p.mutable_part();
    let others: Vec<Vertex> = p.mutable_vertices().filter(|&v| v != r).collect();
    let sr = sgn(p, r);
    let cr = p.c_vector(r);

    let red_or_green = p
        .mutable_vertices()
        .find_map(|v| match p.c_sign(v) {
            None => Some(BulletCheck::fail(
                None,
                v,
                format!("c_{v} = {} is mixed", fmt_vec(p.c_vector(v))),
            )),
            Some(Sign::Zero) => Some(BulletCheck::fail(None, v, format!("c_{v} is zero"))),
            _ => None,
        })
        .unwrap_or_else(BulletCheck::pass);

    let mut pivot_dominance = BulletCheck::pass();
    let mut pivot_opposite = BulletCheck::pass();
    for &j in &others {
        let brj = b.weight(r, j);
        let cj = p.c_vector(j);
        let sj = sgn(p, j);
        let premise = scaled_signed(brj, cj, true)
            && (reading == ConditionReading::AllVertices || !num_traits::Zero::is_zero(brj));
        if pivot_dominance.holds && premise {
            let ok = match (sj, sr) {
                (Some(sj), Some(sr)) => sj == sr || dominates(sj, cj, sr, cr),
                _ => false,
            };
            if !ok {
                pivot_dominance = BulletCheck::fail(
                    None,
                    j,
                    format!(
                        "b_{r}{j} = {brj}, c_{j} = {}, c_{r} = {}: signs differ and no dominance",
                        fmt_vec(cj),
                        fmt_vec(cr)
                    ),
                );
            }
        }
        if pivot_opposite.holds && scaled_signed(brj, cj, false) {
            let ok = matches!((sj, sr), (Some(sj), Some(sr)) if sj == -sr);
            if !ok {
                pivot_opposite = BulletCheck::fail(
                    None,
                    j,
                    format!(
                        "b_{r}{j} = {brj}, c_{j} = {}, c_{r} = {}: sgn {} is not -{}",
                        fmt_vec(cj),
                        fmt_vec(cr),
                        fmt_sgn(sj),
                        fmt_sgn(sr)
                    ),
                );
            }
        }
    }

    let mut same_sign = BulletCheck::pass();
    'outer: for &i in &others {
        for &j in &others {
            if i == j {
                continue;
            }
            let bij = b.weight(i, j);
            let cj = p.c_vector(j);
            if scaled_signed(bij, cj, true) {
                let (si, sj) = (sgn(p, i), sgn(p, j));
                if si.is_none() || si != sj {
                    same_sign = BulletCheck::fail(
                        Some(i),
                        j,
                        format!(
                            "b_{i}{j} = {bij}, c_{j} = {}, c_{i} = {}: signs {} and {}",
                            fmt_vec(cj),
                            fmt_vec(p.c_vector(i)),
                            fmt_sgn(si),
                            fmt_sgn(sj)
                        ),
                    );
                    break 'outer;
                }
            }
        }
    }

    SignBullets {
        red_or_green,
        pivot_dominance,
        pivot_opposite,
        same_sign,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BaseConditionReport {
    pub vertex: Vertex,
    pub reading: ConditionReading,
    pub bullets: SignBullets,
    /// Whether the other reading of statement 2 gives a different answer.
    pub readings_diverge: bool,
}

impl BaseConditionReport {
    pub fn holds(&self) -> bool {
        self.bullets.all_hold()
    }
}

/// Evaluates the four statements on `mu_v(q)` pivoted at `v`.
pub fn check_base_conditions(
    q: &ExtendedQuiver,
    v: Vertex,
    reading: ConditionReading,
) -> Result<BaseConditionReport> {
    let p = q.mutate(v)?;
    let bullets = sign_bullets(&p, v, reading);
    let other = match reading {
        ConditionReading::NeighboursOnly => ConditionReading::AllVertices,
        ConditionReading::AllVertices => ConditionReading::NeighboursOnly,
    };
    let readings_diverge = sign_bullets(&p, v, other).all_hold() != bullets.all_hold();
    if readings_diverge {
        log::warn!("base condition readings diverge at vertex {v}");
    }
    Ok(BaseConditionReport {
        vertex: v,
        reading,
        bullets,
        readings_diverge,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TrajectoryMode {
    /// `mu_v(q)` is a fork with point of return `v`.
    Fork,
    /// `mu_v(q)` is such a fork, or abundant acyclic with `v` a source or sink.
    Acyclic,
    /// `mu_v(q)` is a mutation-cyclic quiver on three vertices.
    Rank3,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrefixRecord {
    pub length: usize,
    pub last: Vertex,
    pub colors: Vec<Option<VertexColor>>,
    pub bullets: SignBullets,
    /// Fork mode: `b_ir c_r >= 0` forces opposite signs with `c_i`
    /// dominating `c_r`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub return_signs: Option<BulletCheck>,
    /// Fork mode: entries of `c_i` dominate those of the newly mutated `c_k`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dominance_chain: Option<BulletCheck>,
    /// Fork mode: the state is a fork whose point of return is `last`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fork_shape: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub prefix: usize,
    pub rule: String,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TrajectoryReport {
    pub start: Vertex,
    pub mode: TrajectoryMode,
    pub base: BaseConditionReport,
    pub prefixes: Vec<PrefixRecord>,
    pub violations: Vec<Violation>,
}

impl TrajectoryReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Whether `mu_v(q)` has the shape `mode` asks for.
pub fn trajectory_shape_holds(q: &QuiverMatrix, v: Vertex, mode: TrajectoryMode) -> bool {
    let Ok(p) = q.mutate(v) else { return false };
    let fork = certify_fork(&p, v).is_some();
    match mode {
        TrajectoryMode::Fork => fork,
        TrajectoryMode::Acyclic => {
            fork || (is_abundant(&p) && is_acyclic(&p) && (is_source(&p, v) || is_sink(&p, v)))
        }
        TrajectoryMode::Rank3 => is_mutation_cyclic_rank3(&p),
    }
}

/// `b_ir c_r >= 0` for `i != r` implies `sgn(c_i) = -sgn(c_r)` and
/// `sgn(c_i) c_i >= sgn(c_r) c_r`.
pub fn return_signs(p: &ExtendedQuiver, r: Vertex) -> BulletCheck {
    let b = p.mutable_part();
    let cr = p.c_vector(r);
    let sr = sgn(p, r);
    for i in p.mutable_vertices().filter(|&i| i != r) {
        let bir = b.weight(i, r);
        if !scaled_signed(bir, cr, true) {
            continue;
        }
        let ci = p.c_vector(i);
        let ok = match (sgn(p, i), sr) {
            (Some(si), Some(sr)) => si == -sr && dominates(si, ci, sr, cr),
            _ => false,
        };
        if !ok {
            return BulletCheck::fail(
                Some(i),
                r,
                format!(
                    "b_{i}{r} = {bir}, c_{i} = {}, c_{r} = {}",
                    fmt_vec(ci),
                    fmt_vec(cr)
                ),
            );
        }
    }
    BulletCheck::pass()
}

/// After mutating `prev` at `k` (previous pivot `r`), every `i` outside
/// `{k, r}` with `b_ik c_k >= 0` in `prev` has `|c_i| >= |c_k|` entrywise in
/// `next`.
pub fn dominance_chain(
    prev: &ExtendedQuiver,
    next: &ExtendedQuiver,
    r: Vertex,
    k: Vertex,
) -> BulletCheck {
    let ck_prev = prev.c_vector(k);
    let ck = next.c_vector(k);
    for i in prev.mutable_vertices().filter(|&i| i != r && i != k) {
        let bik = prev.mutable_part().weight(i, k);
        if !scaled_signed(bik, ck_prev, true) {
            continue;
        }
        let ci = next.c_vector(i);
        if !ci.iter().zip(ck).all(|(x, y)| x.abs() >= y.abs()) {
            return BulletCheck::fail(
                Some(i),
                k,
                format!("|c_{i}| = {} below |c_{k}| = {}", fmt_vec(ci), fmt_vec(ck)),
            );
        }
    }
    BulletCheck::pass()
}

/// Replays `w` on `q`, checking the four statements at every prefix with the
/// last mutation as pivot.
///
/// Preconditions (reported as errors): `w` is non-empty, `mu_v(q)` has the
/// shape required by `mode` where `v` is the first entry of `w`, and the base
/// conditions hold at `v`. Failures along the way are collected, not thrown.
pub fn verify_trajectory(
    q: &ExtendedQuiver,
    w: &MutationSequence,
    mode: TrajectoryMode,
    reading: ConditionReading,
) -> Result<TrajectoryReport> {
    let v = w
        .first()
        .ok_or_else(|| Error::Precondition("trajectory must be non-empty".into()))?;
    for &k in w.as_slice() {
        q.check_mutable(k)?;
    }
    if !trajectory_shape_holds(q.mutable_part(), v, mode) {
        return Err(Error::Precondition(format!(
            "mutating at {v} does not give the shape required by {mode:?} mode"
        )));
    }
    let base = check_base_conditions(q, v, reading)?;
    if !base.holds() {
        let (name, wit) = base.bullets.failures()[0];
        return Err(Error::Precondition(format!(
            "base condition {name} fails at {v}: {}",
            wit.detail
        )));
    }

    let mut prefixes = Vec::with_capacity(w.len());
    let mut violations = Vec::new();
    let mut prev = q.clone();
    let mut cur = q.mutate(v)?;
    for (idx, &k) in w.as_slice().iter().enumerate() {
        if idx > 0 {
            prev = cur.clone();
            cur = cur.mutate(k)?;
        }
        let length = idx + 1;
        let bullets = sign_bullets(&cur, k, ConditionReading::AllVertices);
        for (name, wit) in bullets.failures() {
            violations.push(Violation {
                prefix: length,
                rule: name.into(),
                detail: wit.detail.clone(),
            });
        }
        let (mut rs, mut chain, mut shape) = (None, None, None);
        if mode == TrajectoryMode::Fork {
            let is_fork = certify_fork(cur.mutable_part(), k).is_some();
            if !is_fork {
                violations.push(Violation {
                    prefix: length,
                    rule: "fork_shape".into(),
                    detail: format!("state is not a fork with point of return {k}"),
                });
            }
            shape = Some(is_fork);
            let check = return_signs(&cur, k);
            if let Some(wit) = &check.witness {
                violations.push(Violation {
                    prefix: length,
                    rule: "return_signs".into(),
                    detail: wit.detail.clone(),
                });
            }
            rs = Some(check);
            if idx > 0 {
                let check = dominance_chain(&prev, &cur, w.as_slice()[idx - 1], k);
                if let Some(wit) = &check.witness {
                    violations.push(Violation {
                        prefix: length,
                        rule: "dominance_chain".into(),
                        detail: wit.detail.clone(),
                    });
                }
                chain = Some(check);
            }
        }
        prefixes.push(PrefixRecord {
            length,
            last: k,
            colors: cur.colors_lossy(),
            bullets,
            return_signs: rs,
            dominance_chain: chain,
            fork_shape: shape,
        });
    }
    Ok(TrajectoryReport {
        start: v,
        mode,
        base,
        prefixes,
        violations,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum CoherenceVerdict {
    /// Every visited c-vector is nonzero and sign-coherent.
    Strict,
    /// Zero c-vectors occur but no mixed signs.
    Uniform,
    /// Every c-vector is zero (no frozen vertices, or `C = 0`).
    TriviallyCoherent,
    Violated {
        sequence: MutationSequence,
        vertex: Vertex,
    },
    /// The node cap stopped the search before `depth`.
    UndecidedAtDepth { completed_depth: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoherenceReport {
    pub depth: usize,
    #[serde(flatten)]
    pub verdict: CoherenceVerdict,
    pub stats: ExploreStats,
}

/// Explores every reduced sequence up to `depth` and classifies the signs of
/// all visited c-vectors.
pub fn bfs_sign_coherence(
    q: &ExtendedQuiver,
    depth: usize,
    opts: ExploreOptions,
) -> CoherenceReport {
    let mut explorer = Explorer::new(q.clone(), opts);
    let found = explorer.search(depth, |node| {
        node.quiver
            .mutable_vertices()
            .find(|&v| node.quiver.c_sign(v).is_none())
    });
    let (verdict, stats) = match found {
        Search::Found { node, value, stats } => (
            CoherenceVerdict::Violated {
                sequence: node.path,
                vertex: value,
            },
            stats,
        ),
        Search::Exhausted { stats } if stats.truncated => (
            CoherenceVerdict::UndecidedAtDepth {
                completed_depth: stats.completed_depth,
            },
            stats,
        ),
        Search::Exhausted { stats } => {
            let mut any_zero = false;
            let mut all_zero = true;
            for (state, _) in explorer.visited() {
                for v in state.mutable_vertices() {
                    let zero = state.c_sign(v) == Some(Sign::Zero);
                    any_zero |= zero;
                    all_zero &= zero;
                }
            }
            let verdict = if all_zero && q.n() > 0 {
                CoherenceVerdict::TriviallyCoherent
            } else if any_zero {
                CoherenceVerdict::Uniform
            } else {
                CoherenceVerdict::Strict
            };
            (verdict, stats)
        }
    };
    CoherenceReport {
        depth,
        verdict,
        stats,
    }
}

/// For a rank-3 state with pivot `r`: when one neighbour `i` has
/// `b_ri c_i >= 0` and the other `j` has `b_rj c_j <= 0`, the signs of `c_r`
/// and `c_j` must be opposite, so the state cannot be all red. `None` when
/// the premise does not apply.
pub fn rank3_obstruction(p: &ExtendedQuiver, r: Vertex) -> Option<bool> {
    let b = p.mutable_part();
    let nbrs: Vec<Vertex> = p.mutable_vertices().filter(|&v| v != r).collect();
    let applies = |i: Vertex, j: Vertex| {
        scaled_signed(b.weight(r, i), p.c_vector(i), true)
            && scaled_signed(b.weight(r, j), p.c_vector(j), false)
    };
    let (_, j) = nbrs
        .iter()
        .flat_map(|&i| nbrs.iter().map(move |&j| (i, j)))
        .find(|&(i, j)| i != j && applies(i, j))?;
    Some(matches!((sgn(p, r), sgn(p, j)), (Some(a), Some(b)) if a == -b && a != 0))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum NoAllRedVerdict {
    NoAllRedFound {
        depth: usize,
    },
    /// An all-red state: this contradicts the rank-3 obstruction and points
    /// at a bug in the engine.
    AllRedFound {
        sequence: MutationSequence,
    },
    /// A node where the sign statements or the obstruction fail.
    ObstructionViolated {
        sequence: MutationSequence,
        detail: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NoAllRedReport {
    #[serde(flatten)]
    pub verdict: NoAllRedVerdict,
    /// Nodes where the obstruction premise applied and was checked.
    pub obstruction_nodes: usize,
    pub stats: ExploreStats,
}

/// Searches the framed class of a mutation-cyclic rank-3 quiver for an
/// all-red state, asserting the sign statements and the obstruction at every
/// node on the way.
pub fn check_no_all_red(
    q: &QuiverMatrix,
    depth: usize,
    opts: ExploreOptions,
) -> Result<NoAllRedReport> {
    if !is_mutation_cyclic_rank3(q) {
        return Err(Error::NotRank3Cyclic);
    }
    let checked = AtomicUsize::new(0);
    let mut explorer = Explorer::new(frame(q), opts);
    let found = explorer.search(depth, |node| {
        let p = &node.quiver;
        if p.red_count() == p.n() {
            return Some(NoAllRedVerdict::AllRedFound {
                sequence: node.path.clone(),
            });
        }
        let r = node.path.last()?;
        let bullets = sign_bullets(p, r, ConditionReading::AllVertices);
        if let Some((name, wit)) = bullets.failures().first() {
            return Some(NoAllRedVerdict::ObstructionViolated {
                sequence: node.path.clone(),
                detail: format!("{name}: {}", wit.detail),
            });
        }
        match rank3_obstruction(p, r) {
            Some(true) => {
                checked.fetch_add(1, Ordering::Relaxed);
                None
            }
            Some(false) => Some(NoAllRedVerdict::ObstructionViolated {
                sequence: node.path.clone(),
                detail: "pivot shares its sign with the neighbour it points against".into(),
            }),
            None => None,
        }
    });
    let (verdict, stats) = match found {
        Search::Found { value, stats, .. } => (value, stats),
        Search::Exhausted { stats } => (
            NoAllRedVerdict::NoAllRedFound {
                depth: stats.completed_depth,
            },
            stats,
        ),
    };
    Ok(NoAllRedReport {
        verdict,
        obstruction_nodes: checked.into_inner(),
        stats,
    })
}

/// Random reduced trajectory of at most `len` steps in which every
/// mutation, applied to the state reached so far, has the shape `mode`
/// asks for. Stops early when no vertex qualifies.
pub fn random_trajectory(
    q: &ExtendedQuiver,
    len: usize,
    mode: TrajectoryMode,
    rng: &mut impl rand::Rng,
) -> MutationSequence {
    let mut w = MutationSequence::empty();
    let mut cur = q.mutable_part().clone();
    while w.len() < len {
        let options: Vec<Vertex> = cur
            .vertices()
            .filter(|&k| Some(k) != w.last() && trajectory_shape_holds(&cur, k, mode))
            .collect();
        let Some(&k) = options.get(rng.random_range(0..options.len().max(1))) else {
            break;
        };
        cur = cur.mutate(k).expect("vertex in range");
        w.push(k).expect("k differs from the last entry");
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::coframe;
    use crate::sequence::vertices;

    fn v(l: usize) -> Vertex {
        Vertex::new(l).unwrap()
    }

    fn markov() -> QuiverMatrix {
        QuiverMatrix::from_arrows(3, &[(1, 2, 2), (2, 3, 2), (3, 1, 2)]).unwrap()
    }

    fn fork_example() -> QuiverMatrix {
        QuiverMatrix::from_arrows(3, &[(2, 1, 3), (1, 3, 4), (3, 2, 5)]).unwrap()
    }

    #[test]
    fn framings_satisfy_base_conditions() {
        for q in [markov(), fork_example()] {
            for x in [frame(&q), coframe(&q)] {
                for k in 1..=3 {
                    let rep =
                        check_base_conditions(&x, v(k), ConditionReading::NeighboursOnly).unwrap();
                    assert!(rep.holds(), "{:?}", rep.bullets.failures());
                }
            }
        }
    }

    #[test]
    fn readings_diverge_on_non_neighbours() {
        // 1 -> 2, 3 isolated: after mu_1 the pivot has a non-neighbour.
        let q = frame(&QuiverMatrix::from_arrows(3, &[(1, 2, 1)]).unwrap());
        let strong = check_base_conditions(&q, v(1), ConditionReading::NeighboursOnly).unwrap();
        let weak = check_base_conditions(&q, v(1), ConditionReading::AllVertices).unwrap();
        assert!(strong.holds());
        assert!(!weak.holds());
        assert!(strong.readings_diverge && weak.readings_diverge);
    }

    #[test]
    fn mixed_row_breaks_the_first_statement() {
        let b = vec![vec![0, 1], vec![-1, 0]];
        let c = vec![vec![1, -1], vec![0, 1]];
        let q = ExtendedQuiver::from_i64(&b, &c, 2).unwrap();
        let rep = check_base_conditions(&q, v(1), ConditionReading::NeighboursOnly).unwrap();
        assert!(!rep.bullets.red_or_green.holds);
        assert_eq!(rep.bullets.red_or_green.witness.as_ref().unwrap().j, v(1));
    }

    #[test]
    fn fork_trajectory_is_clean() {
        let q = frame(&fork_example());
        // mu_2 of the fork example is a fork with return 2.
        let w = MutationSequence::new(vertices(&[2, 3, 1, 2, 3, 1])).unwrap();
        let rep = verify_trajectory(
            &q,
            &w,
            TrajectoryMode::Fork,
            ConditionReading::NeighboursOnly,
        )
        .unwrap();
        assert!(rep.is_clean(), "{:?}", rep.violations);
        assert_eq!(rep.prefixes.len(), 6);
        let m = frame(&markov());
        let w = MutationSequence::new(vertices(&[1, 2])).unwrap();
        assert!(verify_trajectory(
            &m,
            &w,
            TrajectoryMode::Fork,
            ConditionReading::NeighboursOnly
        )
        .is_err());
        assert!(verify_trajectory(
            &m,
            &w,
            TrajectoryMode::Rank3,
            ConditionReading::NeighboursOnly
        )
        .is_ok());
    }

    #[test]
    fn markov_rank3_trajectory_is_clean() {
        let q = frame(&markov());
        let w = MutationSequence::new(vertices(&[1, 2, 3, 1, 3, 2, 1])).unwrap();
        let rep = verify_trajectory(
            &q,
            &w,
            TrajectoryMode::Rank3,
            ConditionReading::NeighboursOnly,
        )
        .unwrap();
        assert!(rep.is_clean(), "{:?}", rep.violations);
    }

    #[test]
    fn random_trajectories_stay_clean() {
        use crate::generate::{random_abundant_acyclic, rng, WeightRange};
        let mut r = rng(17);
        let wr = WeightRange::new(2, 4).unwrap();
        for i in 0..60 {
            let n = 3 + i % 4;
            let q = frame(&random_abundant_acyclic(n, wr, &mut r).unwrap());
            let w = random_trajectory(&q, 8, TrajectoryMode::Acyclic, &mut r);
            assert!(!w.is_empty());
            let rep = verify_trajectory(
                &q,
                &w,
                TrajectoryMode::Acyclic,
                ConditionReading::NeighboursOnly,
            )
            .unwrap();
            assert!(rep.is_clean(), "{w}: {:?}", rep.violations);
        }
        let m = frame(&markov());
        let w = random_trajectory(&m, 10, TrajectoryMode::Rank3, &mut r);
        assert_eq!(w.len(), 10);
        // A framed A2 has no mutation giving a rank-3 cyclic quiver.
        let a2 = frame(&QuiverMatrix::from_arrows(2, &[(1, 2, 1)]).unwrap());
        assert!(random_trajectory(&a2, 3, TrajectoryMode::Rank3, &mut r).is_empty());
    }

    #[test]
    fn coherence_verdicts() {
        let rep = bfs_sign_coherence(&frame(&markov()), 5, ExploreOptions::default());
        assert_eq!(rep.verdict, CoherenceVerdict::Strict);
        let bare = ExtendedQuiver::unframed(markov());
        let rep = bfs_sign_coherence(&bare, 3, ExploreOptions::default());
        assert_eq!(rep.verdict, CoherenceVerdict::TriviallyCoherent);
        let mixed =
            ExtendedQuiver::from_i64(&[vec![0, 1], vec![-1, 0]], &[vec![1, -1], vec![0, 1]], 2)
                .unwrap();
        let rep = bfs_sign_coherence(&mixed, 2, ExploreOptions::default());
        assert!(matches!(rep.verdict, CoherenceVerdict::Violated { .. }));
    }

    #[test]
    fn markov_has_no_all_red_state_nearby() {
        let rep = check_no_all_red(&markov(), 6, ExploreOptions::default()).unwrap();
        assert_eq!(rep.verdict, NoAllRedVerdict::NoAllRedFound { depth: 6 });
        assert!(rep.obstruction_nodes > 0);
        let a3 = QuiverMatrix::from_arrows(3, &[(1, 2, 1), (2, 3, 1)]).unwrap();
        assert!(matches!(
            check_no_all_red(&a3, 3, ExploreOptions::default()),
            Err(Error::NotRank3Cyclic)
        ));
    }
}
