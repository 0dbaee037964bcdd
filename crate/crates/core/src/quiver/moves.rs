//! Graph moves: tails at sinks, heads at sources, and matrix graphs.
//!
//! Tails follow `v = v0 -f1-> v1 -f2-> v2 ...` (so `f_i: v_{i-1} -> v_i`);
//! heads follow `w0 <-f1- w1 <-f2- w2 ...` (so `f_i: w_i -> w_{i-1}`).

use super::{EdgeId, Quiver, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AttachmentKind {
    /// Infinite tail leaving a sink.
    Tail,
    /// Infinite head entering a source.
    Head,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Attachment {
    pub vertex: VertexId,
    pub kind: AttachmentKind,
}

/// A graph with symbolic infinite tails/heads, materialized by truncation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecoratedQuiver {
    pub base: Quiver,
    pub attachments: Vec<Attachment>,
    pub depth: usize,
}

/// Where the new vertices and edges of one attachment landed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaterializedAttachment {
    pub vertex: VertexId,
    pub kind: AttachmentKind,
    /// `v_1 .. v_d`.
    pub vertices: Vec<VertexId>,
    /// `f_1 .. f_d`.
    pub edges: Vec<EdgeId>,
}

/// The materialized graph. Base vertices and edges keep their ids, so the
/// generator map from the base graph is the identity on ids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoveMap {
    pub quiver: Quiver,
    pub attachments: Vec<MaterializedAttachment>,
}

impl MoveMap {
    /// `(attachment, i)` for a vertex `v_i` added by the move, `i ≥ 1`.
    pub fn locate_vertex(&self, v: VertexId) -> Option<(&MaterializedAttachment, usize)> {
        self.attachments.iter().find_map(|a| a.vertices.iter().position(|&u| u == v).map(|i| (a, i + 1)))
    }
}

impl DecoratedQuiver {
    pub fn materialize(&self, depth: usize) -> Quiver {
        self.materialize_with_map(depth).quiver
    }

    pub fn materialize_with_map(&self, depth: usize) -> MoveMap {
        let mut q = self.base.clone();
        let mut attachments = Vec::with_capacity(self.attachments.len());
        for a in &self.attachments {
            let base_name = self.base.vertex_name(a.vertex).to_string();
            let mut vertices = Vec::with_capacity(depth);
            let mut edges = Vec::with_capacity(depth);
            let mut prev = a.vertex;
            for i in 1..=depth {
                let vn = q.fresh_name(&format!("{base_name}_{i}"));
                let v = q.add_vertex(vn).expect("fresh vertex name");
                let en = q.fresh_name(&format!("{base_name}_f{i}"));
                let (s, d) = match a.kind {
                    AttachmentKind::Tail => (prev, v),
                    AttachmentKind::Head => (v, prev),
                };
                let e = q.add_edge(en, s, d).expect("fresh edge name");
                vertices.push(v);
                edges.push(e);
                prev = v;
            }
            attachments.push(MaterializedAttachment { vertex: a.vertex, kind: a.kind, vertices, edges });
        }
        MoveMap { quiver: q, attachments }
    }

    pub fn is_identity(&self) -> bool {
        self.attachments.is_empty()
    }
}

impl Quiver {
    /// Attaches a tail at every sink.
    pub fn desingularize(&self) -> DecoratedQuiver {
        DecoratedQuiver {
            base: self.clone(),
            attachments: self
                .sinks()
                .into_iter()
                .map(|vertex| Attachment { vertex, kind: AttachmentKind::Tail })
                .collect(),
            depth: 1,
        }
    }

    /// Attaches a head at every source.
    pub fn remove_sources(&self) -> DecoratedQuiver {
        DecoratedQuiver {
            base: self.clone(),
            attachments: self
                .sources()
                .into_iter()
                .map(|vertex| Attachment { vertex, kind: AttachmentKind::Head })
                .collect(),
            depth: 1,
        }
    }

    /// `M_n Q`: a head of length `n - 1` at every vertex.
    pub fn matrix_graph(&self, n: usize) -> Quiver {
        self.matrix_graph_with_map(n).quiver
    }

    pub fn matrix_graph_with_map(&self, n: usize) -> MoveMap {
        assert!(n >= 1, "matrix size must be positive");
        DecoratedQuiver {
            base: self.clone(),
            attachments: self.vertices().map(|vertex| Attachment { vertex, kind: AttachmentKind::Head }).collect(),
            depth: n - 1,
        }
        .materialize_with_map(n - 1)
    }
}
