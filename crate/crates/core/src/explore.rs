//! Level-synchronous breadth-first exploration of a labelled mutation class.
//!
//! Each level is expanded in parallel and then deduplicated sequentially in
//! input order, so the visited set, the stored paths and every search result
//! are identical under both execution strategies. States are keyed on the
//! exact `[B | C]` matrix.
//!
//! Snapshots are JSONL: a header line carrying the root quiver and the last
//! completed level, then one line per visited node giving its path. Loading
//! replays the paths, so a resumed run continues exactly where a fresh run
//! would be.

use std::collections::HashMap;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format::QuiverDoc;
use crate::par::{self, Execution};
use crate::quiver::ExtendedQuiver;
use crate::sequence::MutationSequence;

pub const DEFAULT_MAX_NODES: usize = 250_000;

#[derive(Clone, Copy, Debug)]
pub struct ExploreOptions {
    /// Number of visited states at which exploration stops early.
    pub max_nodes: usize,
    pub execution: Execution,
}

impl Default for ExploreOptions {
    fn default() -> Self {
        Self {
            max_nodes: DEFAULT_MAX_NODES,
            execution: Execution::default(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Node {
    pub quiver: ExtendedQuiver,
    pub path: MutationSequence,
}

impl Node {
    pub fn depth(&self) -> usize {
        self.path.len()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ExploreStats {
    /// Deepest level whose states are all known.
    pub completed_depth: usize,
    pub nodes: usize,
    /// Mutations performed while expanding, including ones leading to
    /// already visited states.
    pub edges: u64,
    /// Whether the node cap cut a level short.
    pub truncated: bool,
    /// Whether the whole class was exhausted before the depth bound.
    pub closed: bool,
}

#[derive(Clone, Debug)]
pub enum Search<T> {
    Found {
        node: Node,
        value: T,
        stats: ExploreStats,
    },
    Exhausted {
        stats: ExploreStats,
    },
}

pub struct Explorer {
    root: ExtendedQuiver,
    visited: HashMap<ExtendedQuiver, MutationSequence>,
    frontier: Vec<Node>,
    stats: ExploreStats,
    root_pending: bool,
    opts: ExploreOptions,
}

fn expand(node: &Node) -> Vec<Node> {
    node.quiver
        .mutable_vertices()
        .filter(|&k| Some(k) != node.path.last())
        .map(|k| {
            let mut path = node.path.clone();
            path.push(k).expect("k differs from the last entry");
            Node {
                quiver: node.quiver.mutate(k).expect("mutable vertex"),
                path,
            }
        })
        .collect()
}

impl Explorer {
    pub fn new(root: ExtendedQuiver, opts: ExploreOptions) -> Self {
        let mut visited = HashMap::new();
        visited.insert(root.clone(), MutationSequence::empty());
        Self {
            frontier: vec![Node {
                quiver: root.clone(),
                path: MutationSequence::empty(),
            }],
            root,
            visited,
            stats: ExploreStats {
                nodes: 1,
                ..ExploreStats::default()
            },
            root_pending: true,
            opts,
        }
    }

    pub fn root(&self) -> &ExtendedQuiver {
        &self.root
    }

    pub fn stats(&self) -> ExploreStats {
        self.stats
    }

    pub fn visited(&self) -> impl Iterator<Item = (&ExtendedQuiver, &MutationSequence)> {
        self.visited.iter()
    }

    pub fn contains(&self, q: &ExtendedQuiver) -> bool {
        self.visited.contains_key(q)
    }

    /// Visited nodes ordered by depth, then lexicographically by path. This is
    /// also the order in which a fresh run discovers them.
    pub fn nodes_in_order(&self) -> Vec<Node> {
        let mut nodes: Vec<Node> = self
            .visited
            .iter()
            .map(|(q, p)| Node {
                quiver: q.clone(),
                path: p.clone(),
            })
            .collect();
        nodes.sort_by(|a, b| (a.depth(), a.path.as_slice()).cmp(&(b.depth(), b.path.as_slice())));
        nodes
    }

    /// Explores until every state within `depth` mutations is known, calling
    /// `check` on each state discovered by this call (in discovery order).
    /// Stops at the first state for which `check` returns `Some`.
    pub fn search<T, F>(&mut self, depth: usize, check: F) -> Search<T>
    where
        T: Send,
        F: Fn(&Node) -> Option<T> + Sync + Send,
    {
        let exec = self.opts.execution;
        if self.root_pending {
            self.root_pending = false;
            if let Some(value) = check(&self.frontier[0]) {
                return Search::Found {
                    node: self.frontier[0].clone(),
                    value,
                    stats: self.stats,
                };
            }
        }
        while self.stats.completed_depth < depth && !self.stats.truncated {
            if self.frontier.is_empty() {
                self.stats.closed = true;
                break;
            }
            let children = par::map(exec, &self.frontier, expand);
            let mut next = Vec::new();
            'levels: for batch in children {
                for child in batch {
                    self.stats.edges += 1;
                    if self.visited.contains_key(&child.quiver) {
                        continue;
                    }
                    if self.visited.len() >= self.opts.max_nodes {
                        self.stats.truncated = true;
                        break 'levels;
                    }
                    self.visited
                        .insert(child.quiver.clone(), child.path.clone());
                    next.push(child);
                }
            }
            self.stats.nodes = self.visited.len();
            if !self.stats.truncated {
                self.stats.completed_depth += 1;
            }
            log::debug!(
                "level {} holds {} new states ({} total)",
                self.stats.completed_depth,
                next.len(),
                self.stats.nodes
            );
            let hit = par::find_map_first(exec, &next, |n| check(n).map(|v| (n.clone(), v)));
            self.frontier = next;
            if let Some((node, value)) = hit {
                return Search::Found {
                    node,
                    value,
                    stats: self.stats,
                };
            }
        }
        if self.frontier.is_empty() {
            self.stats.closed = true;
        }
        Search::Exhausted { stats: self.stats }
    }

    /// Explores to `depth` with no per-node check.
    pub fn run(&mut self, depth: usize) -> ExploreStats {
        match self.search::<(), _>(depth, |_| None) {
            Search::Found { stats, .. } | Search::Exhausted { stats } => stats,
        }
    }

    pub fn save_snapshot(&self, path: &Path) -> Result<()> {
        let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
        let header = SnapshotLine::Header {
            root: QuiverDoc::from_quiver(&self.root),
            completed_depth: self.stats.completed_depth,
            truncated: self.stats.truncated,
            edges: self.stats.edges,
        };
        writeln!(out, "{}", serde_json::to_string(&header)?)?;
        for node in self.nodes_in_order() {
            let line = SnapshotLine::Node {
                path: node.path.labels(),
            };
            writeln!(out, "{}", serde_json::to_string(&line)?)?;
        }
        out.flush()?;
        Ok(())
    }

    /// Rebuilds an explorer from a snapshot written by [`Explorer::save_snapshot`].
    pub fn load_snapshot(path: &Path, opts: ExploreOptions) -> Result<Self> {
        let reader = BufReader::new(std::fs::File::open(path)?);
        let mut lines = reader.lines().enumerate();
        let parse_line = |idx: usize, text: &str| -> Result<SnapshotLine> {
            serde_json::from_str(text).map_err(|e| Error::Parse {
                line: idx + 1,
                column: e.column(),
                message: e.to_string(),
            })
        };
        let (idx, first) = lines.next().ok_or(Error::Parse {
            line: 1,
            column: 1,
            message: "empty snapshot".into(),
        })?;
        let (root, completed_depth, truncated, edges) = match parse_line(idx, &first?)? {
            SnapshotLine::Header {
                root,
                completed_depth,
                truncated,
                edges,
            } => (root.into_quiver()?, completed_depth, truncated, edges),
            SnapshotLine::Node { .. } => {
                return Err(Error::Parse {
                    line: 1,
                    column: 1,
                    message: "snapshot must start with a header".into(),
                })
            }
        };
        if truncated {
            return Err(Error::Precondition(
                "cannot resume from a snapshot cut short by the node cap".into(),
            ));
        }
        let mut paths = Vec::new();
        for (idx, line) in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            match parse_line(idx, &line)? {
                SnapshotLine::Node { path } => paths.push((idx, path)),
                SnapshotLine::Header { .. } => {
                    return Err(Error::Parse {
                        line: idx + 1,
                        column: 1,
                        message: "duplicate header".into(),
                    })
                }
            }
        }
        let replayed = par::map(opts.execution, &paths, |(idx, labels)| {
            let path = MutationSequence::from_labels(labels).map_err(|e| Error::Parse {
                line: idx + 1,
                column: 1,
                message: e.to_string(),
            })?;
            let quiver = root.mutate_seq(&path)?;
            Ok::<_, Error>(Node { quiver, path })
        });
        let mut visited = HashMap::new();
        let mut frontier = Vec::new();
        for node in replayed {
            let node = node?;
            if node.depth() > completed_depth {
                return Err(Error::Precondition(format!(
                    "snapshot node {} lies beyond completed depth {completed_depth}",
                    node.path
                )));
            }
            if node.depth() == completed_depth {
                frontier.push(node.clone());
            }
            if visited.insert(node.quiver, node.path).is_some() {
                return Err(Error::Precondition("snapshot repeats a state".into()));
            }
        }
        if !visited.contains_key(&root) {
            return Err(Error::Precondition("snapshot is missing the root".into()));
        }
        frontier.sort_by(|a, b| a.path.as_slice().cmp(b.path.as_slice()));
        let nodes = visited.len();
        Ok(Self {
            root,
            visited,
            stats: ExploreStats {
                completed_depth,
                nodes,
                edges,
                truncated: false,
                closed: frontier.is_empty(),
            },
            frontier,
            root_pending: false,
            opts,
        })
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum SnapshotLine {
    Header {
        root: QuiverDoc,
        completed_depth: usize,
        truncated: bool,
        edges: u64,
    },
    Node {
        path: Vec<usize>,
    },
}

/// Largest number of red vertices seen within `depth` mutations.
#[derive(Clone, Debug, Serialize)]
pub struct MaxRedReport {
    pub max_red: usize,
    pub witness: MutationSequence,
    pub stats: ExploreStats,
}

pub fn max_red_bfs(q: &ExtendedQuiver, depth: usize, opts: ExploreOptions) -> MaxRedReport {
    let mut explorer = Explorer::new(q.clone(), opts);
    let stats = explorer.run(depth);
    let (max_red, witness) = explorer
        .nodes_in_order()
        .into_iter()
        .map(|n| (n.quiver.red_count(), n.path))
        .fold((0, MutationSequence::empty()), |best, cur| {
            if cur.0 > best.0 {
                cur
            } else {
                best
            }
        });
    MaxRedReport {
        max_red,
        witness,
        stats,
    }
}

/// Shortest sequence reaching a state whose mutable vertices are all red.
pub fn find_all_red(
    q: &ExtendedQuiver,
    depth: usize,
    opts: ExploreOptions,
) -> Search<MutationSequence> {
    let n = q.n();
    Explorer::new(q.clone(), opts).search(depth, |node| {
        (node.quiver.red_count() == n).then(|| node.path.clone())
    })
}

/// Whether every mutation of `w` applied to `q` happens at a source of the
/// current mutable quiver.
pub fn is_source_sequence(q: &ExtendedQuiver, w: &MutationSequence) -> bool {
    let mut cur = q.mutable_part().clone();
    for &k in w.as_slice() {
        if !crate::structure::is_source(&cur, k) {
            return false;
        }
        cur = cur.mutate(k).expect("vertex in range");
    }
    true
}

/// Number of states reachable by reduced sequences of length exactly `d`
/// for each `d` up to `depth`; used for sanity checks and summaries.
pub fn level_sizes(explorer: &Explorer) -> Vec<usize> {
    let mut sizes = vec![0; explorer.stats().completed_depth + 1];
    for (_, p) in explorer.visited() {
        if p.len() < sizes.len() {
            sizes[p.len()] += 1;
        }
    }
    sizes
}
