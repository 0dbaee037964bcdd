//! Structural deciders: cycles, hereditary saturated sets, simplicity.

use std::collections::BTreeSet;

use serde::Serialize;

use super::{Path, Quiver, VertexId};
use crate::error::{Error, Result};

/// A simple cycle, stored starting at its smallest vertex id.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cycle {
    pub path: Path,
}

impl Cycle {
    /// `s(e_i)` for each edge, in order.
    pub fn vertices(&self, q: &Quiver) -> Vec<VertexId> {
        self.path.edges().iter().map(|&e| q.src(e)).collect()
    }

    pub fn base(&self) -> VertexId {
        self.path.src()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NonSimpleReason {
    /// The graph has no vertices, so the algebra is zero.
    Empty,
    /// A nonempty proper hereditary saturated subset.
    HereditarySaturated(Vec<VertexId>),
    CycleWithoutExit(Cycle),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicityVerdict {
    pub simple: bool,
    pub reason: Option<NonSimpleReason>,
}

#[derive(Serialize)]
struct VerdictJson<'a> {
    simple: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    reason: Option<&'a str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<Vec<String>>,
}

impl SimplicityVerdict {
    pub fn to_json(&self, q: &Quiver) -> serde_json::Value {
        let (reason, witness) = match &self.reason {
            None => (None, None),
            Some(NonSimpleReason::Empty) => (Some("empty graph"), None),
            Some(NonSimpleReason::HereditarySaturated(h)) => (
                Some("proper hereditary saturated subset"),
                Some(h.iter().map(|&v| q.vertex_name(v).to_string()).collect()),
            ),
            Some(NonSimpleReason::CycleWithoutExit(c)) => {
                (Some("cycle without exit"), Some(c.path.edges().iter().map(|&e| q.edge_name(e).to_string()).collect()))
            }
        };
        serde_json::to_value(VerdictJson { simple: self.simple, reason, witness }).expect("verdict json")
    }
}

impl Quiver {
    /// `reach[u]` holds every vertex reachable from `u` by a path of length ≥ 0.
    pub fn reachability(&self) -> Vec<Vec<bool>> {
        let n = self.vertex_count();
        let mut reach = vec![vec![false; n]; n];
        for v in self.vertices() {
            let row = &mut reach[v.index()];
            let mut stack = vec![v];
            row[v.index()] = true;
            while let Some(u) = stack.pop() {
                for &e in self.out_edges(u) {
                    let t = self.dst(e);
                    if !row[t.index()] {
                        row[t.index()] = true;
                        stack.push(t);
                    }
                }
            }
        }
        reach
    }

    /// True when `v` lies on some cycle (reaches itself in ≥ 1 step).
    pub fn on_cycle(&self, v: VertexId) -> bool {
        let reach = self.reachability();
        self.out_edges(v).iter().any(|&e| reach[self.dst(e).index()][v.index()])
    }

    /// Simple cycles, one per rotation class, each starting at its minimal vertex.
    pub fn cycles(&self) -> Vec<Cycle> {
        let mut out = Vec::new();
        for s in self.vertices() {
            let mut on_path = vec![false; self.vertex_count()];
            let mut edges = Vec::new();
            self.cycle_dfs(s, s, &mut on_path, &mut edges, &mut out);
        }
        out
    }

    fn cycle_dfs(
        &self,
        start: VertexId,
        at: VertexId,
        on_path: &mut Vec<bool>,
        edges: &mut Vec<super::EdgeId>,
        out: &mut Vec<Cycle>,
    ) {
        on_path[at.index()] = true;
        for &e in self.out_edges(at) {
            let t = self.dst(e);
            if t == start {
                edges.push(e);
                out.push(Cycle { path: Path::from_edges(self, edges).expect("cycle composes") });
                edges.pop();
            } else if t > start && !on_path[t.index()] {
                edges.push(e);
                self.cycle_dfs(start, t, on_path, edges, out);
                edges.pop();
            }
        }
        on_path[at.index()] = false;
    }

    /// Some vertex on `c` emits an edge not on `c`.
    pub fn has_exit(&self, c: &Cycle) -> bool {
        // a simple cycle uses exactly one out-edge at each of its vertices
        c.vertices(self).iter().any(|&v| self.out_edges(v).len() > 1)
    }

    pub fn is_hereditary(&self, h: &[bool]) -> bool {
        self.edge_ids().all(|e| !h[self.src(e).index()] || h[self.dst(e).index()])
    }

    pub fn is_saturated(&self, h: &[bool]) -> bool {
        self.vertices()
            .all(|v| h[v.index()] || self.is_sink(v) || !self.out_edges(v).iter().all(|&e| h[self.dst(e).index()]))
    }

    /// Smallest saturated superset of a hereditary set (stays hereditary).
    pub fn saturate(&self, h: &mut [bool]) {
        loop {
            let mut grew = false;
            for v in self.vertices() {
                if !h[v.index()] && self.is_regular(v) && self.out_edges(v).iter().all(|&e| h[self.dst(e).index()]) {
                    h[v.index()] = true;
                    grew = true;
                }
            }
            if !grew {
                return;
            }
        }
    }

    /// All hereditary saturated subsets, ordered by size and then by vertex ids.
    ///
    /// Hereditary sets are enumerated as forward-closed assignments along the
    /// reachability preorder; only the saturated ones are kept.
    pub fn hereditary_saturated_subsets(&self) -> Vec<Vec<VertexId>> {
        let n = self.vertex_count();
        let reach = self.reachability();
        let mut found: BTreeSet<(usize, Vec<VertexId>)> = BTreeSet::new();
        // state: 0 undecided, 1 in, 2 out
        let mut state = vec![0u8; n];
        fn rec(
            q: &Quiver,
            reach: &[Vec<bool>],
            i: usize,
            state: &mut Vec<u8>,
            found: &mut BTreeSet<(usize, Vec<VertexId>)>,
        ) {
            let n = state.len();
            if i == n {
                let h: Vec<bool> = state.iter().map(|&s| s == 1).collect();
                if q.is_saturated(&h) {
                    let set: Vec<VertexId> = q.vertices().filter(|v| h[v.index()]).collect();
                    found.insert((set.len(), set));
                }
                return;
            }
            if state[i] != 0 {
                return rec(q, reach, i + 1, state, found);
            }
            // put i in: everything reachable from i must be in
            if (0..n).all(|t| !reach[i][t] || state[t] != 2) {
                let saved = state.clone();
                for t in 0..n {
                    if reach[i][t] {
                        state[t] = 1;
                    }
                }
                rec(q, reach, i + 1, state, found);
                *state = saved;
            }
            // leave i out: everything reaching i must be out
            if (0..n).all(|u| !reach[u][i] || state[u] != 1) {
                let saved = state.clone();
                for u in 0..n {
                    if reach[u][i] {
                        state[u] = 2;
                    }
                }
                rec(q, reach, i + 1, state, found);
                *state = saved;
            }
        }
        rec(self, &reach, 0, &mut state, &mut found);
        found.into_iter().map(|(_, s)| s).collect()
    }

    /// Simplicity of `L_Q`: `Q⁰` is the only nonempty hereditary saturated
    /// set and every cycle has an exit.
    ///
    /// Every nonempty hereditary saturated set contains the saturated
    /// forward closure of each of its vertices, so checking those closures
    /// suffices. The witness is the smallest such closure.
    pub fn is_simple(&self) -> SimplicityVerdict {
        let n = self.vertex_count();
        if n == 0 {
            return SimplicityVerdict { simple: false, reason: Some(NonSimpleReason::Empty) };
        }
        let reach = self.reachability();
        let mut best: Option<Vec<VertexId>> = None;
        for v in self.vertices() {
            let mut h = reach[v.index()].clone();
            self.saturate(&mut h);
            let set: Vec<VertexId> = self.vertices().filter(|u| h[u.index()]).collect();
            if set.len() < n && best.as_ref().is_none_or(|b| set.len() < b.len()) {
                best = Some(set);
            }
        }
        if let Some(h) = best {
            return SimplicityVerdict { simple: false, reason: Some(NonSimpleReason::HereditarySaturated(h)) };
        }
        if let Some(c) = self.cycles().into_iter().find(|c| !self.has_exit(c)) {
            return SimplicityVerdict { simple: false, reason: Some(NonSimpleReason::CycleWithoutExit(c)) };
        }
        SimplicityVerdict { simple: true, reason: None }
    }

    /// Every vertex reaches every cycle.
    pub fn is_cofinal(&self) -> bool {
        let reach = self.reachability();
        self.cycles().iter().all(|c| {
            let on: Vec<VertexId> = c.vertices(self);
            self.vertices().all(|v| on.iter().any(|w| reach[v.index()][w.index()]))
        })
    }

    /// Simple, and every vertex reaches a vertex lying on a cycle.
    pub fn is_purely_infinite_simple(&self) -> bool {
        if !self.is_simple().simple {
            return false;
        }
        let reach = self.reachability();
        let cyclic: Vec<bool> =
            self.vertices().map(|v| self.out_edges(v).iter().any(|&e| reach[self.dst(e).index()][v.index()])).collect();
        self.vertices().all(|v| self.vertices().any(|w| cyclic[w.index()] && reach[v.index()][w.index()]))
    }

    /// `Q/H`: vertices outside `H`, edges whose range is outside `H`.
    /// Names are preserved.
    pub fn quotient_graph(&self, h: &[VertexId]) -> Result<Quiver> {
        let mut mask = vec![false; self.vertex_count()];
        for &v in h {
            if v.index() >= mask.len() {
                return Err(Error::precondition("vertex not in graph"));
            }
            mask[v.index()] = true;
        }
        if !self.is_hereditary(&mask) {
            return Err(Error::precondition("subset is not hereditary"));
        }
        if !self.is_saturated(&mask) {
            return Err(Error::precondition("subset is not saturated"));
        }
        if mask.iter().all(|&b| b) {
            return Err(Error::precondition("quotient by all vertices"));
        }
        let vertices: Vec<String> =
            self.vertices().filter(|v| !mask[v.index()]).map(|v| self.vertex_name(v).to_string()).collect();
        let edges: Vec<(String, String, String)> = self
            .edge_ids()
            .filter(|&e| !mask[self.dst(e).index()])
            .map(|e| {
                let edge = self.edge(e);
                (edge.name.clone(), self.vertex_name(edge.src).to_string(), self.vertex_name(edge.dst).to_string())
            })
            .collect();
        Quiver::new(vertices, edges)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::samples::*;

    fn names(q: &Quiver, sets: &[Vec<VertexId>]) -> Vec<Vec<String>> {
        sets.iter().map(|s| s.iter().map(|&v| q.vertex_name(v).to_string()).collect()).collect()
    }

    #[test]
    fn cycle_examples() {
        let q = r1();
        let cs = q.cycles();
        assert_eq!(cs.len(), 1);
        assert!(!q.has_exit(&cs[0]));

        let q = r2();
        let cs = q.cycles();
        assert_eq!(cs.len(), 2);
        assert!(cs.iter().all(|c| q.has_exit(c)));

        assert!(a2().cycles().is_empty());
        // a 2-cycle is found once, not once per rotation
        let q = Quiver::build(&["u", "v"], &[("f", "u", "v"), ("g", "v", "u")]).unwrap();
        assert_eq!(q.cycles().len(), 1);
        assert_eq!(two_cycle().cycles().len(), 3);
    }

    #[test]
    fn hereditary_saturated_examples() {
        let q = t2();
        assert_eq!(
            names(&q, &q.hereditary_saturated_subsets()),
            vec![vec![], vec!["w".to_string()], vec!["v".to_string(), "w".to_string()]]
        );
        // {w} is hereditary but not saturated: v is regular with r(s⁻¹(v)) = {w}
        let q = a2();
        assert_eq!(q.hereditary_saturated_subsets().len(), 2);
        let q = r2();
        assert_eq!(names(&q, &q.hereditary_saturated_subsets()), vec![vec![], vec!["v".to_string()]]);
    }

    #[test]
    fn simplicity_examples() {
        assert!(r2().is_simple().simple);
        assert!(a2().is_simple().simple);
        assert!(line(3).is_simple().simple);
        let q = r1();
        let verdict = q.is_simple();
        assert!(matches!(verdict.reason, Some(NonSimpleReason::CycleWithoutExit(_))));
        let q = t2();
        let verdict = q.is_simple();
        assert_eq!(verdict.reason, Some(NonSimpleReason::HereditarySaturated(vec![q.vertex_id("w").unwrap()])));
        assert!(!Quiver::build(&[], &[]).unwrap().is_simple().simple);
        // two disjoint vertices: {v} is hereditary and saturated
        assert!(!Quiver::build(&["v", "w"], &[]).unwrap().is_simple().simple);
    }

    #[test]
    fn cofinal_and_purely_infinite() {
        assert!(r2().is_cofinal());
        assert!(!t2().is_cofinal());
        assert!(a2().is_cofinal());
        assert!(r2().is_purely_infinite_simple());
        assert!(!a2().is_purely_infinite_simple());
        assert!(!r1().is_purely_infinite_simple());
        assert!(two_cycle().is_purely_infinite_simple());
    }

    #[test]
    fn quotient_examples() {
        let q = t2();
        let w = q.vertex_id("w").unwrap();
        let quotient = q.quotient_graph(&[w]).unwrap();
        assert_eq!(quotient, r1());
        assert_eq!(q.quotient_graph(&[]).unwrap(), q);
        let a = a2();
        assert!(a.quotient_graph(&[a.vertex_id("w").unwrap()]).is_err());
        let q3 = Quiver::build(&["v", "w", "u"], &[("e", "v", "w"), ("f", "v", "u")]).unwrap();
        let qa = q3.quotient_graph(&[q3.vertex_id("w").unwrap()]).unwrap();
        assert_eq!(qa.vertex_count(), 2);
        assert_eq!(qa.edge_count(), 1);
        // {v} is not hereditary in T2
        assert!(q.quotient_graph(&[q.vertex_id("v").unwrap()]).is_err());
        assert!(q.quotient_graph(&[q.vertex_id("v").unwrap(), w]).is_err());
    }
}
