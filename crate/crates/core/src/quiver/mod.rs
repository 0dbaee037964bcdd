//! Finite oriented graphs and their paths.
//!
//! Vertex and edge ids are dense indices in declaration order, so every
//! iteration over a [`Quiver`] is deterministic.

mod dot;
mod moves;
pub mod samples;
mod structure;

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use moves::{Attachment, AttachmentKind, DecoratedQuiver, MaterializedAttachment, MoveMap};
pub use structure::{Cycle, NonSimpleReason, SimplicityVerdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId(pub u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeId(pub u32);

impl VertexId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl EdgeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub name: String,
    pub src: VertexId,
    pub dst: VertexId,
}

/// Per-vertex classification. For finite graphs a vertex is regular
/// exactly when it is not a sink.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct VertexClass {
    pub sink: bool,
    pub source: bool,
    pub regular: bool,
}

/// A finite oriented graph with named vertices and edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    vertex_index: HashMap<String, VertexId>,
    edge_index: HashMap<String, EdgeId>,
    out_edges: Vec<Vec<EdgeId>>,
    in_edges: Vec<Vec<EdgeId>>,
}

/// On-disk graph schema.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct GraphJson {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct EdgeJson {
    pub name: String,
    pub src: String,
    pub dst: String,
}

impl Quiver {
    /// Builds a graph from vertex names and `(name, src, dst)` triples.
    ///
    /// Names must be unique across vertices *and* edges, since element
    /// expressions refer to both by bare name.
    pub fn new<V, E>(vertices: V, edges: E) -> Result<Quiver>
    where
        V: IntoIterator,
        V::Item: Into<String>,
        E: IntoIterator<Item = (String, String, String)>,
    {
        let mut q = Quiver {
            vertices: Vec::new(),
            edges: Vec::new(),
            vertex_index: HashMap::new(),
            edge_index: HashMap::new(),
            out_edges: Vec::new(),
            in_edges: Vec::new(),
        };
        for v in vertices {
            q.add_vertex(v.into())?;
        }
        for (name, src, dst) in edges {
            let s = q.require_vertex(&src)?;
            let d = q.require_vertex(&dst)?;
            q.add_edge(name, s, d)?;
        }
        Ok(q)
    }

    /// Convenience constructor for literals: `Quiver::build(&["v"], &[("e","v","v")])`.
    pub fn build(vertices: &[&str], edges: &[(&str, &str, &str)]) -> Result<Quiver> {
        Quiver::new(
            vertices.iter().copied(),
            edges.iter().map(|(n, s, d)| (n.to_string(), s.to_string(), d.to_string())),
        )
    }

    fn require_vertex(&self, name: &str) -> Result<VertexId> {
        self.vertex_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::InvalidGraph(format!("edge endpoint `{name}` is not a declared vertex")))
    }

    fn name_taken(&self, name: &str) -> bool {
        self.vertex_index.contains_key(name) || self.edge_index.contains_key(name)
    }

    pub(crate) fn add_vertex(&mut self, name: String) -> Result<VertexId> {
        if name.is_empty() {
            return Err(Error::InvalidGraph("empty vertex name".into()));
        }
        if self.name_taken(&name) {
            return Err(Error::InvalidGraph(format!("duplicate name `{name}`")));
        }
        let id = VertexId(self.vertices.len() as u32);
        self.vertex_index.insert(name.clone(), id);
        self.vertices.push(name);
        self.out_edges.push(Vec::new());
        self.in_edges.push(Vec::new());
        Ok(id)
    }

    pub(crate) fn add_edge(&mut self, name: String, src: VertexId, dst: VertexId) -> Result<EdgeId> {
        if name.is_empty() {
            return Err(Error::InvalidGraph("empty edge name".into()));
        }
        if self.name_taken(&name) {
            return Err(Error::InvalidGraph(format!("duplicate name `{name}`")));
        }
        let id = EdgeId(self.edges.len() as u32);
        self.edge_index.insert(name.clone(), id);
        self.edges.push(Edge { name, src, dst });
        self.out_edges[src.index()].push(id);
        self.in_edges[dst.index()].push(id);
        Ok(id)
    }

    /// Returns `base` if unused, otherwise `base'`, `base''`, ...
    pub(crate) fn fresh_name(&self, base: &str) -> String {
        let mut name = base.to_string();
        while self.name_taken(&name) {
            name.push('\'');
        }
        name
    }

    pub fn from_json_str(s: &str) -> Result<Quiver> {
        let g: GraphJson = serde_json::from_str(s)?;
        Quiver::from_graph_json(&g)
    }

    pub fn from_graph_json(g: &GraphJson) -> Result<Quiver> {
        Quiver::new(g.vertices.iter().cloned(), g.edges.iter().map(|e| (e.name.clone(), e.src.clone(), e.dst.clone())))
    }

    pub fn to_graph_json(&self) -> GraphJson {
        GraphJson {
            vertices: self.vertices.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeJson {
                    name: e.name.clone(),
                    src: self.vertices[e.src.index()].clone(),
                    dst: self.vertices[e.dst.index()].clone(),
                })
                .collect(),
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_graph_json()).expect("graph json")
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.vertices.len() as u32).map(VertexId)
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        (0..self.edges.len() as u32).map(EdgeId)
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertices[v.index()]
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e.index()]
    }

    pub fn edge_name(&self, e: EdgeId) -> &str {
        &self.edges[e.index()].name
    }

    pub fn src(&self, e: EdgeId) -> VertexId {
        self.edges[e.index()].src
    }

    pub fn dst(&self, e: EdgeId) -> VertexId {
        self.edges[e.index()].dst
    }

    pub fn vertex_id(&self, name: &str) -> Option<VertexId> {
        self.vertex_index.get(name).copied()
    }

    pub fn edge_id(&self, name: &str) -> Option<EdgeId> {
        self.edge_index.get(name).copied()
    }

    /// `s⁻¹(v)` in declaration order.
    pub fn out_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.out_edges[v.index()]
    }

    /// `r⁻¹(v)` in declaration order.
    pub fn in_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.in_edges[v.index()]
    }

    pub fn is_sink(&self, v: VertexId) -> bool {
        self.out_edges[v.index()].is_empty()
    }

    pub fn is_source(&self, v: VertexId) -> bool {
        self.in_edges[v.index()].is_empty()
    }

    pub fn is_regular(&self, v: VertexId) -> bool {
        !self.is_sink(v)
    }

    pub fn vertex_class(&self, v: VertexId) -> VertexClass {
        VertexClass { sink: self.is_sink(v), source: self.is_source(v), regular: self.is_regular(v) }
    }

    pub fn sinks(&self) -> Vec<VertexId> {
        self.vertices().filter(|&v| self.is_sink(v)).collect()
    }

    pub fn sources(&self) -> Vec<VertexId> {
        self.vertices().filter(|&v| self.is_source(v)).collect()
    }

    pub fn is_nonsingular(&self) -> bool {
        self.vertices().all(|v| self.is_regular(v))
    }

    /// All composable paths of length `n`, optionally constrained at either
    /// end. Ordered lexicographically by edge declaration order, starting
    /// vertices in declaration order. For `n = 0` these are the vertices.
    pub fn paths_of_length(&self, n: usize, src: Option<VertexId>, dst: Option<VertexId>) -> Vec<Path> {
        let starts: Vec<VertexId> = match src {
            Some(v) => vec![v],
            None => self.vertices().collect(),
        };
        let mut out = Vec::new();
        for s in starts {
            let mut frontier = vec![Path::vertex(s)];
            for _ in 0..n {
                let mut next = Vec::new();
                for p in &frontier {
                    for &e in self.out_edges(p.dst) {
                        next.push(p.extended(self, e));
                    }
                }
                frontier = next;
            }
            out.extend(frontier.into_iter().filter(|p| dst.is_none_or(|d| p.dst == d)));
        }
        out
    }

    /// Paths of length at most `n`, shortest first.
    pub fn paths_up_to(&self, n: usize, src: Option<VertexId>, dst: Option<VertexId>) -> Vec<Path> {
        (0..=n).flat_map(|k| self.paths_of_length(k, src, dst)).collect()
    }

    pub fn path_from_names(&self, names: &[&str]) -> Result<Path> {
        let mut edges = Vec::with_capacity(names.len());
        for n in names {
            edges.push(self.edge_id(n).ok_or_else(|| Error::UnknownName(n.to_string()))?);
        }
        Path::from_edges(self, &edges).ok_or_else(|| Error::precondition(format!("path {names:?} is not composable")))
    }

    pub fn path_name(&self, p: &Path) -> String {
        if p.edges.is_empty() {
            self.vertex_name(p.src).to_string()
        } else {
            p.edges.iter().map(|&e| self.edge_name(e)).collect::<Vec<_>>().join(".")
        }
    }
}

impl fmt::Display for Quiver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_json_string())
    }
}

/// A finite path: a vertex (length 0) or a composable edge sequence.
///
/// Stores its endpoints so `s(α)`, `r(α)` need no graph lookup.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    src: VertexId,
    dst: VertexId,
    edges: Vec<EdgeId>,
}

/// Result of comparing paths under the prefix preorder, where `α ≤ β`
/// means `α = βγ` for some path `γ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PathOrder {
    /// `α ≤ β`: α extends β.
    Below,
    /// `β ≤ α`: β extends α.
    Above,
    Equal,
    Incomparable,
}

impl Path {
    pub fn vertex(v: VertexId) -> Path {
        Path { src: v, dst: v, edges: Vec::new() }
    }

    pub fn edge(q: &Quiver, e: EdgeId) -> Path {
        Path { src: q.src(e), dst: q.dst(e), edges: vec![e] }
    }

    /// `None` unless `r(e_i) = s(e_{i+1})` throughout. Empty input is not a path.
    pub fn from_edges(q: &Quiver, edges: &[EdgeId]) -> Option<Path> {
        let (&first, rest) = edges.split_first()?;
        let mut p = Path::edge(q, first);
        for &e in rest {
            if q.src(e) != p.dst {
                return None;
            }
            p = p.extended(q, e);
        }
        Some(p)
    }

    pub fn src(&self) -> VertexId {
        self.src
    }

    pub fn dst(&self) -> VertexId {
        self.dst
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_vertex(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn is_closed(&self) -> bool {
        self.src == self.dst
    }

    pub fn first_edge(&self) -> Option<EdgeId> {
        self.edges.first().copied()
    }

    pub fn last_edge(&self) -> Option<EdgeId> {
        self.edges.last().copied()
    }

    /// `self·e`. Panics if `s(e) ≠ r(self)`.
    pub fn extended(&self, q: &Quiver, e: EdgeId) -> Path {
        assert_eq!(q.src(e), self.dst, "edge does not compose");
        let mut edges = self.edges.clone();
        edges.push(e);
        Path { src: self.src, dst: q.dst(e), edges }
    }

    /// `e·self`. Panics if `r(e) ≠ s(self)`.
    pub fn prepended(&self, q: &Quiver, e: EdgeId) -> Path {
        assert_eq!(q.dst(e), self.src, "edge does not compose");
        let mut edges = Vec::with_capacity(self.edges.len() + 1);
        edges.push(e);
        edges.extend_from_slice(&self.edges);
        Path { src: q.src(e), dst: self.dst, edges }
    }

    /// `self·other`, or `None` when `r(self) ≠ s(other)`.
    pub fn concat(&self, other: &Path) -> Option<Path> {
        if self.dst != other.src {
            return None;
        }
        let mut edges = self.edges.clone();
        edges.extend_from_slice(&other.edges);
        Some(Path { src: self.src, dst: other.dst, edges })
    }

    /// True when `other = self·γ` for some γ.
    pub fn is_prefix_of(&self, other: &Path) -> bool {
        self.src == other.src
            && self.edges.len() <= other.edges.len()
            && other.edges[..self.edges.len()] == self.edges[..]
    }

    /// γ with `self = prefix·γ`.
    pub fn strip_prefix(&self, prefix: &Path) -> Option<Path> {
        if !prefix.is_prefix_of(self) {
            return None;
        }
        Some(Path { src: prefix.dst, dst: self.dst, edges: self.edges[prefix.edges.len()..].to_vec() })
    }

    /// Drops the last edge.
    pub fn parent(&self, q: &Quiver) -> Option<Path> {
        let (_, rest) = self.edges.split_last()?;
        let dst = match rest.last() {
            Some(&e) => q.dst(e),
            None => self.src,
        };
        Some(Path { src: self.src, dst, edges: rest.to_vec() })
    }

    /// Prefix of the given length.
    pub fn prefix(&self, q: &Quiver, len: usize) -> Path {
        let edges = self.edges[..len].to_vec();
        let dst = edges.last().map_or(self.src, |&e| q.dst(e));
        Path { src: self.src, dst, edges }
    }

    /// Suffix starting after the first `skip` edges.
    pub fn suffix(&self, q: &Quiver, skip: usize) -> Path {
        let edges = self.edges[skip..].to_vec();
        let src = if skip == 0 { self.src } else { q.dst(self.edges[skip - 1]) };
        Path { src, dst: self.dst, edges }
    }

    pub fn ends_with(&self, tail: &Path) -> bool {
        tail.dst == self.dst
            && tail.edges.len() <= self.edges.len()
            && self.edges[self.edges.len() - tail.edges.len()..] == tail.edges[..]
    }

    /// Compares under the prefix preorder.
    pub fn compare(&self, other: &Path) -> PathOrder {
        if self == other {
            PathOrder::Equal
        } else if other.is_prefix_of(self) {
            PathOrder::Below
        } else if self.is_prefix_of(other) {
            PathOrder::Above
        } else {
            PathOrder::Incomparable
        }
    }
}

/// Free-function form of [`Path::compare`].
pub fn path_compare(alpha: &Path, beta: &Path) -> PathOrder {
    alpha.compare(beta)
}
