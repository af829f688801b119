//! Explicit reddening sequences for strictly sign-coherent forks and the
//! component formula for the maximal number of red vertices.
//!
//! Throughout, a fork has point of return `r` and `v_1 < ... < v_{n-1}` is
//! the acyclic ordering of the rest. The sink `v_{n-1}` always points into
//! `r` and the source `v_1` always receives an arrow from it.

use serde::Serialize;

use crate::dynamics::source_sequence;
use crate::error::{Error, Result};
use crate::explore::{find_all_red, ExploreOptions, ExploreStats, Search};
use crate::par::{self, Execution};
use crate::quiver::{frame, ExtendedQuiver, QuiverMatrix, VertexColor};
use crate::sequence::{MutationSequence, Vertex};
use crate::structure::{
    acyclic_ordering, connected_components, detect_fork, is_abundant, is_acyclic,
    is_mutation_cyclic_rank3, ForkCertificate,
};

pub const DEFAULT_URED_DEPTH: usize = 12;

#[derive(Clone, Debug, Serialize)]
pub struct ReddeningResult {
    pub sequence: MutationSequence,
    #[serde(serialize_with = "serialize_quiver")]
    pub final_quiver: ExtendedQuiver,
    pub red_count: usize,
    pub green_vertices: Vec<Vertex>,
    /// Length bound guaranteed by the construction that produced this.
    pub length_bound: usize,
    /// Lengths of the two construction stages, when there are two.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stage_lengths: Option<(usize, usize)>,
}

fn serialize_quiver<S: serde::Serializer>(q: &ExtendedQuiver, s: S) -> Result<S::Ok, S::Error> {
    crate::format::QuiverDoc::from_quiver(q).serialize(s)
}

impl ReddeningResult {
    fn new(
        sequence: MutationSequence,
        final_quiver: ExtendedQuiver,
        length_bound: usize,
        stage_lengths: Option<(usize, usize)>,
    ) -> Self {
        Self {
            red_count: final_quiver.red_count(),
            green_vertices: final_quiver.vertices_with_color(VertexColor::Green),
            sequence,
            final_quiver,
            length_bound,
            stage_lengths,
        }
    }
}

/// Colors of a fork's vertices, rejecting anything outside the strict regime.
fn strict_colors(f: &ExtendedQuiver) -> Result<Vec<VertexColor>> {
    let colors = f.colors()?;
    if let Some(i) = colors.iter().position(|&c| c == VertexColor::Blue) {
        return Err(Error::BlueVertex(Vertex::from_index(i)));
    }
    Ok(colors)
}

fn fork_of(f: &ExtendedQuiver) -> Result<ForkCertificate> {
    detect_fork(f.mutable_part()).ok_or(Error::NotAFork)
}

/// Certifies `f` as a fork whose point of return is `r`.
fn fork_at(f: &ExtendedQuiver, r: Vertex) -> Result<ForkCertificate> {
    crate::structure::certify_fork(f.mutable_part(), r).ok_or(Error::NotAFork)
}

#[derive(Clone, Debug, Serialize)]
pub struct GreenReturn {
    pub sequence: MutationSequence,
    #[serde(serialize_with = "serialize_quiver")]
    pub quiver: ExtendedQuiver,
    pub certificate: ForkCertificate,
}

/// Mutates a strictly sign-coherent fork to one with a green point of return,
/// at most one other green vertex and at least `n - 2` red ones, in at most
/// `n + 2` steps.
///
/// While the sink of `F \ {r}` is green or the return is red, mutate at that
/// sink; it becomes the new return. Once the sink is red and the return
/// green, the source sequence `[v_1, ..., v_{n-1}]` finishes the job.
pub fn to_green_point_of_return(f: &ExtendedQuiver) -> Result<GreenReturn> {
    let mut cert = fork_of(f)?;
    strict_colors(f)?;
    let mut cur = f.clone();
    let mut seq = MutationSequence::empty();
    loop {
        let colors = strict_colors(&cur)?;
        let sink = cert.sink();
        let r = cert.point_of_return;
        if colors[sink.index()] == VertexColor::Red && colors[r.index()] == VertexColor::Green {
            break;
        }
        if seq.len() >= 3 {
            return Err(Error::Precondition(
                "sink/return colors did not settle within three steps".into(),
            ));
        }
        cur = cur.mutate(sink)?;
        seq.push(sink)?;
        cert = fork_at(&cur, sink)?;
    }
    let w = source_sequence(&cert.ordering, cert.ordering.len());
    cur = cur.mutate_seq(&w)?;
    let sequence = seq.concat(&w)?;
    let r = sequence.last().unwrap_or(cert.point_of_return);
    let certificate = fork_at(&cur, r)?;
    Ok(GreenReturn {
        sequence,
        quiver: cur,
        certificate,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct FinishResult {
    /// Position of the other green vertex in the ordering of `F \ {r}`.
    pub j: Option<usize>,
    pub sequence: MutationSequence,
    #[serde(serialize_with = "serialize_quiver")]
    pub quiver: ExtendedQuiver,
}

/// From a fork with green return `r` and at most one other green vertex
/// `v_j`, reaches a fork with at least `n - 1` red vertices in at most
/// `j + 2` steps.
///
/// `j = 1`: mutate at `v_1`. Otherwise mutate along `[v_1, ..., v_{j-1}, r]`;
/// if `v_j` is now red we are done, else finish with `[v_{j-1}, v_j]`.
pub fn finish_from_green_return(f: &ExtendedQuiver) -> Result<FinishResult> {
    finish_with(f, fork_of(f)?)
}

fn finish_with(f: &ExtendedQuiver, cert: ForkCertificate) -> Result<FinishResult> {
    let colors = strict_colors(f)?;
    let r = cert.point_of_return;
    if colors[r.index()] != VertexColor::Green {
        return Err(Error::Precondition(format!(
            "point of return {r} is not green"
        )));
    }
    let others: Vec<usize> = cert
        .ordering
        .iter()
        .enumerate()
        .filter(|(_, v)| colors[v.index()] == VertexColor::Green)
        .map(|(p, _)| p + 1)
        .collect();
    let j = match others.as_slice() {
        [] => {
            return Ok(FinishResult {
                j: None,
                sequence: MutationSequence::empty(),
                quiver: f.clone(),
            })
        }
        [j] => *j,
        _ => {
            return Err(Error::Precondition(format!(
                "{} green vertices besides the point of return",
                others.len()
            )))
        }
    };
    let ord = &cert.ordering;
    let vj = ord[j - 1];
    let sequence = if j == 1 {
        MutationSequence::new(vec![vj])?
    } else {
        let mut w = source_sequence(ord, j - 1);
        w.push(r)?;
        let after = f.mutate_seq(&w)?;
        if after.vertex_color(vj)? != VertexColor::Red {
            w.push(ord[j - 2])?;
            w.push(vj)?;
        }
        w
    };
    let quiver = f.mutate_seq(&sequence)?;
    Ok(FinishResult {
        j: Some(j),
        sequence,
        quiver,
    })
}

/// Reddening of a strictly sign-coherent fork to at least `n - 1` red
/// vertices, of length at most `2n + 3`.
pub fn general_reddening_fork(f: &ExtendedQuiver) -> Result<ReddeningResult> {
    let stage1 = to_green_point_of_return(f)?;
    let stage2 = finish_with(&stage1.quiver, stage1.certificate.clone())?;
    let sequence = stage1.sequence.concat(&stage2.sequence)?;
    Ok(ReddeningResult::new(
        sequence,
        stage2.quiver,
        2 * f.n() + 3,
        Some((stage1.sequence.len(), stage2.sequence.len())),
    ))
}

/// The source sequence `[v_1, ..., v_n]` on an abundant acyclic quiver whose
/// sink is red: it ends with `n - 1` red vertices and `v_n` green.
pub fn source_cycle_reddening(q: &ExtendedQuiver) -> Result<ReddeningResult> {
    let b = q.mutable_part();
    if !(is_abundant(b) && is_acyclic(b)) {
        return Err(Error::NotAbundantAcyclic);
    }
    let ordering = acyclic_ordering(b)?;
    let Some(&sink) = ordering.last() else {
        return Ok(ReddeningResult::new(
            MutationSequence::empty(),
            q.clone(),
            0,
            None,
        ));
    };
    if q.vertex_color(sink)? != VertexColor::Red {
        return Err(Error::SinkNotRed(sink));
    }
    let w = source_sequence(&ordering, ordering.len());
    let end = q.mutate_seq(&w)?;
    Ok(ReddeningResult::new(w, end, q.n(), None))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum ReddeningStatus {
    Yes { sequence: MutationSequence },
    No { reason: String },
    Unknown { depth: usize, truncated: bool },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentReport {
    pub vertices: Vec<Vertex>,
    #[serde(flatten)]
    pub status: ReddeningStatus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum URedValue {
    Exact(usize),
    Bounds { lower: usize, upper: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct URedReport {
    pub n: usize,
    pub components: Vec<ComponentReport>,
    pub ured: URedValue,
}

impl URedReport {
    pub fn exact(&self) -> Option<usize> {
        match self.ured {
            URedValue::Exact(v) => Some(v),
            URedValue::Bounds { .. } => None,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct URedOptions {
    pub depth: usize,
    pub explore: ExploreOptions,
    pub execution: Execution,
}

impl Default for URedOptions {
    fn default() -> Self {
        Self {
            depth: DEFAULT_URED_DEPTH,
            explore: ExploreOptions::default(),
            execution: Execution::default(),
        }
    }
}

fn relabel(w: &MutationSequence, labels: &[Vertex]) -> MutationSequence {
    MutationSequence::new(w.as_slice().iter().map(|v| labels[v.index()]).collect())
        .expect("relabelling is injective")
}

fn component_status(sub: &QuiverMatrix, opts: &URedOptions) -> ReddeningStatus {
    let framed = frame(sub);
    if is_acyclic(sub) {
        let ordering = acyclic_ordering(sub).expect("acyclic");
        let w = source_sequence(&ordering, ordering.len());
        match framed.mutate_seq(&w) {
            Ok(end) if end.red_count() == sub.n() => return ReddeningStatus::Yes { sequence: w },
            _ => log::warn!("source order did not redden an acyclic component; searching"),
        }
    }
    if is_mutation_cyclic_rank3(sub) {
        return ReddeningStatus::No {
            reason: "mutation-cyclic on three vertices".into(),
        };
    }
    match find_all_red(&framed, opts.depth, opts.explore) {
        Search::Found { value, .. } => ReddeningStatus::Yes { sequence: value },
        Search::Exhausted {
            stats:
                ExploreStats {
                    completed_depth,
                    truncated,
                    ..
                },
        } => ReddeningStatus::Unknown {
            depth: completed_depth,
            truncated,
        },
    }
}

/// Decides reddening existence per connected component and reports
/// `uRed(Q) = n - c`, where `c` counts components without a reddening
/// sequence, or bounds when some component stays undecided.
pub fn compute_ured(q: &QuiverMatrix, opts: &URedOptions) -> URedReport {
    let comps = connected_components(q);
    let statuses = par::map(opts.execution, &comps, |comp| {
        let sub = q.full_subquiver(comp);
        match component_status(&sub, opts) {
            ReddeningStatus::Yes { sequence } => ReddeningStatus::Yes {
                sequence: relabel(&sequence, comp),
            },
            other => other,
        }
    });
    let components: Vec<ComponentReport> = comps
        .into_iter()
        .zip(statuses)
        .map(|(vertices, status)| ComponentReport { vertices, status })
        .collect();
    let n = q.n();
    let count =
        |pred: fn(&ReddeningStatus) -> bool| components.iter().filter(|c| pred(&c.status)).count();
    let no = count(|s| matches!(s, ReddeningStatus::No { .. }));
    let unknown = count(|s| matches!(s, ReddeningStatus::Unknown { .. }));
    let ured = if unknown == 0 {
        URedValue::Exact(n - no)
    } else {
        URedValue::Bounds {
            lower: n - no - unknown,
            upper: n - no,
        }
    };
    URedReport {
        n,
        components,
        ured,
    }
}
