//! Finite directed-graph windows.
//!
//! A [`DiGraph`] is the finite truncation of some (usually infinite) digraph.
//! Distances are asymmetric and may be infinite; all analyses in this crate
//! treat the window as the whole truth and report window-relative results.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;
use std::ops::Add;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exec::par_map;

const INF: u32 = u32::MAX;

/// Index of a vertex inside one [`DiGraph`].
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Vertex(u32);

impl Vertex {
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub(crate) fn from_index(i: usize) -> Self {
        Vertex(i as u32)
    }
}

/// A path length or `Infinite` when there is no directed path.
///
/// `Infinite` absorbs addition and orders above every finite value.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtDistance {
    Finite(u32),
    Infinite,
}

impl ExtDistance {
    pub const ZERO: ExtDistance = ExtDistance::Finite(0);

    pub fn is_finite(self) -> bool {
        matches!(self, ExtDistance::Finite(_))
    }

    pub fn finite(self) -> Option<u32> {
        match self {
            ExtDistance::Finite(d) => Some(d),
            ExtDistance::Infinite => None,
        }
    }

    pub(crate) fn from_raw(d: u32) -> Self {
        if d == INF {
            ExtDistance::Infinite
        } else {
            ExtDistance::Finite(d)
        }
    }

    /// `self <= bound` for a finite bound.
    pub fn within(self, bound: u32) -> bool {
        matches!(self, ExtDistance::Finite(d) if d <= bound)
    }
}

impl Add for ExtDistance {
    type Output = ExtDistance;

    fn add(self, rhs: ExtDistance) -> ExtDistance {
        match (self, rhs) {
            (ExtDistance::Finite(a), ExtDistance::Finite(b)) => ExtDistance::Finite(a.saturating_add(b)),
            _ => ExtDistance::Infinite,
        }
    }
}

impl From<u32> for ExtDistance {
    fn from(d: u32) -> Self {
        ExtDistance::Finite(d)
    }
}

impl fmt::Display for ExtDistance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtDistance::Finite(d) => write!(f, "{d}"),
            ExtDistance::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for ExtDistance {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ExtDistance::Finite(d) => s.serialize_u32(*d),
            ExtDistance::Infinite => s.serialize_str("inf"),
        }
    }
}

/// A non-empty vertex sequence; its length is the number of edges.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DirectedPath {
    vertices: Vec<Vertex>,
}

impl DirectedPath {
    pub fn new(vertices: Vec<Vertex>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::InvalidParam("a directed path needs at least one vertex".into()));
        }
        Ok(DirectedPath { vertices })
    }

    pub fn trivial(v: Vertex) -> Self {
        DirectedPath { vertices: vec![v] }
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn first(&self) -> Vertex {
        self.vertices[0]
    }

    pub fn last(&self) -> Vertex {
        *self.vertices.last().expect("non-empty path")
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.vertices.contains(&v)
    }

    pub fn into_vertices(self) -> Vec<Vertex> {
        self.vertices
    }
}

/// Which way a ball grows from its center.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BallSide {
    Out,
    In,
}

/// Result of [`DiGraph::geodesics`].
#[derive(Clone, Debug)]
pub struct GeodesicSet {
    pub paths: Vec<DirectedPath>,
    /// Number of geodesics in the window, saturating.
    pub total: u64,
    pub truncated: bool,
    pub distance: ExtDistance,
}

/// Result of [`DiGraph::verify_root`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootCheck {
    pub rooted: bool,
    /// First vertex (in insertion order) not reachable from the candidate root.
    pub witness: Option<Vertex>,
}

/// All-pairs distances, row = source.
#[derive(Debug)]
pub struct DistanceMatrix {
    n: usize,
    data: Vec<u32>,
}

impl DistanceMatrix {
    pub fn get(&self, u: Vertex, v: Vertex) -> ExtDistance {
        ExtDistance::from_raw(self.raw(u, v))
    }

    pub(crate) fn raw(&self, u: Vertex, v: Vertex) -> u32 {
        self.data[u.index() * self.n + v.index()]
    }

    pub(crate) fn row(&self, u: Vertex) -> &[u32] {
        &self.data[u.index() * self.n..(u.index() + 1) * self.n]
    }
}

/// A finite directed graph window.
///
/// Out-adjacency keeps insertion order; every enumeration in the crate
/// derives its determinism from it. Self-loops and antiparallel pairs are
/// allowed, parallel duplicates are not.
#[derive(Debug, Default)]
pub struct DiGraph {
    names: Vec<String>,
    index: HashMap<String, Vertex>,
    out_adj: Vec<Vec<Vertex>>,
    in_adj: Vec<Vec<Vertex>>,
    edges: HashSet<(u32, u32)>,
    root: Option<Vertex>,
    frontier: BTreeSet<Vertex>,
    window_note: String,
    dist: OnceLock<DistanceMatrix>,
}

impl Clone for DiGraph {
    fn clone(&self) -> Self {
        DiGraph {
            names: self.names.clone(),
            index: self.index.clone(),
            out_adj: self.out_adj.clone(),
            in_adj: self.in_adj.clone(),
            edges: self.edges.clone(),
            root: self.root,
            frontier: self.frontier.clone(),
            window_note: self.window_note.clone(),
            dist: OnceLock::new(),
        }
    }
}

impl DiGraph {
    pub fn new() -> Self {
        Self::default()
    }

    fn invalidate(&mut self) {
        self.dist = OnceLock::new();
    }

    /// Adds a vertex, or returns the existing one with that id.
    pub fn add_vertex(&mut self, name: impl Into<String>) -> Result<Vertex> {
        let name = name.into();
        if let Some(&v) = self.index.get(&name) {
            return Ok(v);
        }
        if name.is_empty() || name.chars().any(char::is_whitespace) {
            return Err(Error::InvalidParam(format!("vertex id {name:?} must be a non-empty token without whitespace")));
        }
        let v = Vertex::from_index(self.names.len());
        self.index.insert(name.clone(), v);
        self.names.push(name);
        self.out_adj.push(Vec::new());
        self.in_adj.push(Vec::new());
        self.invalidate();
        Ok(v)
    }

    pub fn add_edge(&mut self, u: Vertex, v: Vertex) -> Result<()> {
        self.check(u)?;
        self.check(v)?;
        if !self.edges.insert((u.0, v.0)) {
            return Err(Error::DuplicateEdge(self.name(u).to_owned(), self.name(v).to_owned()));
        }
        self.out_adj[u.index()].push(v);
        self.in_adj[v.index()].push(u);
        self.invalidate();
        Ok(())
    }

    /// Adds an edge between named vertices, creating them as needed.
    pub fn add_edge_named(&mut self, u: &str, v: &str) -> Result<()> {
        let u = self.add_vertex(u)?;
        let v = self.add_vertex(v)?;
        self.add_edge(u, v)
    }

    pub fn set_root(&mut self, v: Vertex) -> Result<()> {
        self.check(v)?;
        self.root = Some(v);
        Ok(())
    }

    pub fn root(&self) -> Option<Vertex> {
        self.root
    }

    pub fn require_root(&self) -> Result<Vertex> {
        self.root.ok_or(Error::NoRoot)
    }

    /// Marks `v` as cut by the window: its out-adjacency may be incomplete.
    pub fn mark_frontier(&mut self, v: Vertex) -> Result<()> {
        self.check(v)?;
        self.frontier.insert(v);
        Ok(())
    }

    pub fn frontier(&self) -> &BTreeSet<Vertex> {
        &self.frontier
    }

    pub fn window_note(&self) -> &str {
        &self.window_note
    }

    pub fn set_window_note(&mut self, note: impl Into<String>) {
        self.window_note = note.into();
    }

    pub fn vertex(&self, name: &str) -> Result<Vertex> {
        self.index.get(name).copied().ok_or_else(|| Error::UnknownVertex(name.to_owned()))
    }

    pub fn name(&self, v: Vertex) -> &str {
        &self.names[v.index()]
    }

    pub fn names_of<'a>(&'a self, vs: impl IntoIterator<Item = &'a Vertex>) -> Vec<String> {
        vs.into_iter().map(|&v| self.name(v).to_owned()).collect()
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        (0..self.names.len()).map(Vertex::from_index)
    }

    pub fn out_neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.out_adj[v.index()]
    }

    pub fn in_neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.in_adj[v.index()]
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.edges.contains(&(u.0, v.0))
    }

    pub fn contains(&self, v: Vertex) -> bool {
        v.index() < self.names.len()
    }

    pub fn check(&self, v: Vertex) -> Result<()> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(Error::UnknownVertex(format!("#{}", v.0)))
        }
    }

    /// The out-degree shared by every non-frontier vertex, if there is one.
    pub fn interior_out_degree(&self) -> Option<usize> {
        let mut degs = self
            .vertices()
            .filter(|v| !self.frontier.contains(v))
            .map(|v| self.out_adj[v.index()].len());
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    /// Breadth-first distances from `v` (out side) or to `v` (in side).
    pub fn bfs(&self, v: Vertex, side: BallSide) -> Vec<u32> {
        let mut dist = vec![INF; self.len()];
        let mut queue = VecDeque::new();
        dist[v.index()] = 0;
        queue.push_back(v);
        while let Some(u) = queue.pop_front() {
            let du = dist[u.index()];
            let next = match side {
                BallSide::Out => &self.out_adj[u.index()],
                BallSide::In => &self.in_adj[u.index()],
            };
            for &w in next {
                if dist[w.index()] == INF {
                    dist[w.index()] = du + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Multi-source variant of [`DiGraph::bfs`].
    pub fn bfs_from_set(&self, sources: &[Vertex], side: BallSide) -> Vec<u32> {
        let mut dist = vec![INF; self.len()];
        let mut queue = VecDeque::new();
        for &s in sources {
            if dist[s.index()] != 0 {
                dist[s.index()] = 0;
                queue.push_back(s);
            }
        }
        while let Some(u) = queue.pop_front() {
            let du = dist[u.index()];
            let next = match side {
                BallSide::Out => &self.out_adj[u.index()],
                BallSide::In => &self.in_adj[u.index()],
            };
            for &w in next {
                if dist[w.index()] == INF {
                    dist[w.index()] = du + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// All-pairs distances, computed once per graph state.
    pub fn distances(&self) -> &DistanceMatrix {
        self.dist.get_or_init(|| {
            let n = self.len();
            let verts: Vec<Vertex> = self.vertices().collect();
            let rows = par_map(&verts, |&v| self.bfs(v, BallSide::Out));
            let mut data = Vec::with_capacity(n * n);
            for row in rows {
                data.extend_from_slice(&row);
            }
            DistanceMatrix { n, data }
        })
    }

    pub fn distance(&self, u: Vertex, v: Vertex) -> Result<ExtDistance> {
        self.check(u)?;
        self.check(v)?;
        Ok(self.distances().get(u, v))
    }

    /// `B⁺_r(v)` or `B⁻_r(v)`, in vertex order.
    pub fn ball(&self, v: Vertex, r: u32, side: BallSide) -> Result<Vec<Vertex>> {
        self.check(v)?;
        Ok(self.ball_unchecked(v, r, side))
    }

    pub(crate) fn ball_unchecked(&self, v: Vertex, r: u32, side: BallSide) -> Vec<Vertex> {
        let d = self.distances();
        self.vertices()
            .filter(|&y| {
                let dist = match side {
                    BallSide::Out => d.raw(v, y),
                    BallSide::In => d.raw(y, v),
                };
                dist <= r
            })
            .collect()
    }

    /// Ball of radius `r` around a vertex set.
    pub fn set_ball(&self, set: &[Vertex], r: u32, side: BallSide) -> Vec<Vertex> {
        let dist = self.bfs_from_set(set, side);
        self.vertices().filter(|y| dist[y.index()] <= r).collect()
    }

    /// `B⁺_r(v) ∪ B⁻_r(v)`, in vertex order.
    pub fn two_sided_ball(&self, v: Vertex, r: u32) -> Vec<Vertex> {
        let d = self.distances();
        self.vertices().filter(|&y| d.raw(v, y) <= r || d.raw(y, v) <= r).collect()
    }

    /// All `u`–`v` geodesics in out-adjacency lexicographic order, at most `cap`.
    pub fn geodesics(&self, u: Vertex, v: Vertex, cap: usize) -> Result<GeodesicSet> {
        self.check(u)?;
        self.check(v)?;
        if cap == 0 {
            return Err(Error::InvalidParam("geodesic cap must be at least 1".into()));
        }
        let d = self.distances();
        let total_len = d.raw(u, v);
        if total_len == INF {
            return Ok(GeodesicSet {
                paths: Vec::new(),
                total: 0,
                truncated: false,
                distance: ExtDistance::Infinite,
            });
        }
        let mut paths = Vec::new();
        let mut stack = vec![u];
        self.geodesic_dfs(d, v, total_len, &mut stack, &mut paths, cap);
        let total = self.count_geodesics(u, v);
        Ok(GeodesicSet {
            truncated: (paths.len() as u64) < total,
            paths,
            total,
            distance: ExtDistance::Finite(total_len),
        })
    }

    fn geodesic_dfs(
        &self,
        d: &DistanceMatrix,
        target: Vertex,
        total: u32,
        stack: &mut Vec<Vertex>,
        out: &mut Vec<DirectedPath>,
        cap: usize,
    ) {
        if out.len() >= cap {
            return;
        }
        let cur = *stack.last().expect("non-empty stack");
        let walked = (stack.len() - 1) as u32;
        if walked == total {
            out.push(DirectedPath { vertices: stack.clone() });
            return;
        }
        let remaining = total - walked - 1;
        for &w in &self.out_adj[cur.index()] {
            if d.raw(w, target) == remaining {
                stack.push(w);
                self.geodesic_dfs(d, target, total, stack, out, cap);
                stack.pop();
                if out.len() >= cap {
                    return;
                }
            }
        }
    }

    /// Number of `u`–`v` geodesics, saturating at `u64::MAX`.
    pub fn count_geodesics(&self, u: Vertex, v: Vertex) -> u64 {
        let d = self.distances();
        let total = d.raw(u, v);
        if total == INF {
            return 0;
        }
        // Layered by distance to v; counts flow from v outward.
        let mut layers: Vec<Vec<Vertex>> = vec![Vec::new(); total as usize + 1];
        for w in self.vertices() {
            let dw = d.raw(w, v);
            let du = d.raw(u, w);
            if dw != INF && du != INF && du + dw == total {
                layers[dw as usize].push(w);
            }
        }
        let mut count = vec![0u64; self.len()];
        count[v.index()] = 1;
        for k in 1..=total as usize {
            for &w in &layers[k] {
                let mut c = 0u64;
                for &x in &self.out_adj[w.index()] {
                    if d.raw(x, v) as usize == k - 1 {
                        c = c.saturating_add(count[x.index()]);
                    }
                }
                count[w.index()] = c;
            }
        }
        count[u.index()]
    }

    pub fn is_path(&self, vertices: &[Vertex]) -> bool {
        !vertices.is_empty()
            && vertices.iter().all(|&v| self.contains(v))
            && vertices.windows(2).all(|w| self.has_edge(w[0], w[1]))
    }

    pub fn check_path(&self, p: &DirectedPath) -> Result<()> {
        for &v in p.vertices() {
            self.check(v)?;
        }
        for w in p.vertices().windows(2) {
            if !self.has_edge(w[0], w[1]) {
                return Err(Error::NotAPath(self.name(w[0]).to_owned(), self.name(w[1]).to_owned()));
            }
        }
        Ok(())
    }

    pub fn is_geodesic(&self, p: &DirectedPath) -> bool {
        self.is_path(p.vertices()) && self.distances().raw(p.first(), p.last()) == p.len() as u32
    }

    pub fn path_from_names(&self, names: &[&str]) -> Result<DirectedPath> {
        let vs = names.iter().map(|n| self.vertex(n)).collect::<Result<Vec<_>>>()?;
        let p = DirectedPath::new(vs)?;
        self.check_path(&p)?;
        Ok(p)
    }

    /// Checks that every vertex is reachable from `o`.
    pub fn verify_root(&self, o: Vertex) -> Result<RootCheck> {
        self.check(o)?;
        let dist = self.bfs(o, BallSide::Out);
        let witness = self.vertices().find(|v| dist[v.index()] == INF);
        Ok(RootCheck {
            rooted: witness.is_none(),
            witness,
        })
    }

    /// Largest finite `d(y, z)` over pairs sharing an out- or in-ball of radius `r`.
    ///
    /// This is an empirical lower bound for any function witnessing the
    /// bounded-ball properties at radius `r`.
    pub fn phi_witness(&self, r: u32) -> u32 {
        let d = self.distances();
        let verts: Vec<Vertex> = self.vertices().collect();
        let per_center = par_map(&verts, |&v| {
            let mut best = 0;
            for side in [BallSide::Out, BallSide::In] {
                let ball = self.ball_unchecked(v, r, side);
                for &y in &ball {
                    let row = d.row(y);
                    for &z in &ball {
                        let dz = row[z.index()];
                        if dz != INF && dz > best {
                            best = dz;
                        }
                    }
                }
            }
            best
        });
        per_center.into_iter().max().unwrap_or(0)
    }

    /// `phi_witness` for radii `0..=max_r`.
    pub fn phi_table(&self, max_r: u32) -> Vec<u32> {
        (0..=max_r).map(|r| self.phi_witness(r)).collect()
    }
}
