//! Boundary-path and germ-groupoid representations.

use std::collections::HashMap;

use super::{AtomLabel, Representation};
use crate::error::Result;
use crate::quiver::{EdgeId, Path, Quiver};
use crate::spatial::FiniteMeasureSpace;

/// Points of `X = ℕ` kept per vertex in the germ model.
pub const GERM_POINTS_PER_VERTEX: usize = 2;

fn longest_acyclic(q: &Quiver) -> Option<usize> {
    q.cycles().is_empty().then(|| q.vertex_count())
}

fn rotate_right(q: &Quiver, c: &Path) -> Path {
    let mut edges = c.edges().to_vec();
    edges.rotate_right(1);
    Path::from_edges(q, &edges).expect("rotation of a cycle is a cycle")
}

fn rotate_left(q: &Quiver, c: &Path) -> Path {
    let mut edges = c.edges().to_vec();
    edges.rotate_left(1);
    Path::from_edges(q, &edges).expect("rotation of a cycle is a cycle")
}

/// `α·c^∞` with `α` not ending in the last edge of `c`.
fn canonical(q: &Quiver, mut prefix: Path, mut cycle: Path) -> (Path, Path) {
    while prefix.last_edge().is_some() && prefix.last_edge() == cycle.last_edge() {
        prefix = prefix.parent(q).expect("nontrivial prefix");
        cycle = rotate_right(q, &cycle);
    }
    (prefix, cycle)
}

/// The action of `S(Q)` on boundary paths with counting measure.
///
/// Acyclic graphs give the exact finite space of paths ending at sinks.
/// With cycles, atoms are the eventually periodic paths `α·c^∞` (`c` a
/// rotation of a simple cycle) and the sink-ending paths, with `|α| ≤ depth`;
/// atoms whose image under some `ρ(e)` leaves the model are masked.
pub fn boundary_path_rep(q: &Quiver, p: f64, depth: usize) -> Result<Representation> {
    let depth = longest_acyclic(q).unwrap_or(depth);
    let mut rotations: Vec<Path> = Vec::new();
    for c in q.cycles() {
        let mut r = c.path.clone();
        for _ in 0..c.path.len() {
            rotations.push(r.clone());
            r = rotate_left(q, &r);
        }
    }
    let mut labels: Vec<AtomLabel> = Vec::new();
    for s in q.sinks() {
        for alpha in q.paths_up_to(depth, None, Some(s)) {
            labels.push(AtomLabel::Boundary { prefix: alpha, cycle: None });
        }
    }
    for c in &rotations {
        for alpha in q.paths_up_to(depth, None, Some(c.src())) {
            if alpha.last_edge().is_none() || alpha.last_edge() != c.last_edge() {
                labels.push(AtomLabel::Boundary { prefix: alpha, cycle: Some(c.clone()) });
            }
        }
    }
    labels.sort_by_key(|l| match l {
        AtomLabel::Boundary { prefix, cycle } => (prefix.len(), prefix.clone(), cycle.clone()),
        _ => unreachable!(),
    });
    let index: HashMap<(Path, Option<Path>), usize> = labels
        .iter()
        .enumerate()
        .map(|(i, l)| match l {
            AtomLabel::Boundary { prefix, cycle } => ((prefix.clone(), cycle.clone()), i),
            _ => unreachable!(),
        })
        .collect();
    let n = labels.len();
    let mut mask = vec![false; n];
    let mut vertex_sets = vec![Vec::new(); q.vertex_count()];
    let mut edge_maps: Vec<Vec<(usize, usize)>> = vec![Vec::new(); q.edge_count()];
    for (x, l) in labels.iter().enumerate() {
        let AtomLabel::Boundary { prefix, cycle } = l else { unreachable!() };
        let start = prefix.src();
        vertex_sets[start.index()].push(x);
        for &e in q.in_edges(start) {
            let key = match cycle {
                None => (prefix.prepended(q, e), None),
                Some(c) => {
                    let (a, c) = canonical(q, prefix.prepended(q, e), c.clone());
                    (a, Some(c))
                }
            };
            match index.get(&key) {
                Some(&y) => edge_maps[e.index()].push((x, y)),
                None => mask[x] = true,
            }
        }
    }
    let space = FiniteMeasureSpace::counting(labels.iter().map(|l| l.render(q)))?;
    Representation::from_maps(q.clone(), p, space, labels, vertex_sets, edge_maps, mask)
}

/// Germ-groupoid representation with [`GERM_POINTS_PER_VERTEX`] points per vertex.
pub fn germ_groupoid_rep(q: &Quiver, p: f64, depth: usize) -> Result<Representation> {
    germ_groupoid_rep_with(q, p, depth, GERM_POINTS_PER_VERTEX)
}

/// The left regular representation of the groupoid of germs of a tight
/// action of `S(Q)` on `X = {0, .., n·k - 1}`, `n = |Q⁰|`.
///
/// The action uses fixed pairing bijections: `x ↦ (vertex x mod n, x div n)`
/// for `X → Q⁰ × X`, and for `x ∈ X_v` with `m = x div n`,
/// `m ↦ (R_v[m mod |R_v|], m div |R_v|)` for `X_v → R_v × X`, where `R_v`
/// lists `v` itself (singular `v` only) and then the edges leaving `v`.
/// Germs `[αβ*, x]` are kept in reduced form with `|α|, |β| ≤ depth`.
pub fn germ_groupoid_rep_with(q: &Quiver, p: f64, depth: usize, k: usize) -> Result<Representation> {
    let depth = longest_acyclic(q).unwrap_or(depth);
    let n = q.vertex_count();
    let r_sets: Vec<Vec<Option<EdgeId>>> = q
        .vertices()
        .map(|v| {
            let mut r: Vec<Option<EdgeId>> = if q.is_regular(v) { vec![] } else { vec![None] };
            r.extend(q.out_edges(v).iter().map(|&e| Some(e)));
            r
        })
        .collect();
    // the backward path of x: x ∈ X_{e1}, S_{e1*}(x) ∈ X_{e2}, ...
    let backward = |x: usize, limit: usize| -> Vec<EdgeId> {
        let mut out = Vec::new();
        let mut x = x;
        while out.len() < limit {
            let v = x % n;
            let m = x / n;
            let r = &r_sets[v];
            match r[m % r.len()] {
                Some(e) => {
                    out.push(e);
                    x = (m / r.len()) * n + q.dst(e).index();
                }
                None => break,
            }
        }
        out
    };
    let mut labels: Vec<AtomLabel> = Vec::new();
    let mut chains: Vec<Vec<EdgeId>> = Vec::new();
    for x in 0..n * k {
        let chain = backward(x, depth + 1);
        let v = crate::quiver::VertexId((x % n) as u32);
        for bl in 0..=chain.len().min(depth) {
            let beta = if bl == 0 {
                Path::vertex(v)
            } else {
                Path::from_edges(q, &chain[..bl]).expect("backward chain composes")
            };
            for alpha in q.paths_up_to(depth, None, Some(beta.dst())) {
                let reducible = alpha.last_edge().is_some() && alpha.last_edge() == beta.last_edge();
                if !reducible {
                    labels.push(AtomLabel::Germ { alpha, beta: beta.clone(), point: x });
                }
            }
        }
        chains.push(chain);
    }
    let index: HashMap<(Path, Path, usize), usize> = labels
        .iter()
        .enumerate()
        .map(|(i, l)| match l {
            AtomLabel::Germ { alpha, beta, point } => ((alpha.clone(), beta.clone(), *point), i),
            _ => unreachable!(),
        })
        .collect();
    let len = labels.len();
    let mut mask = vec![false; len];
    let mut vertex_sets = vec![Vec::new(); n];
    let mut edge_maps: Vec<Vec<(usize, usize)>> = vec![Vec::new(); q.edge_count()];
    for (i, l) in labels.iter().enumerate() {
        let AtomLabel::Germ { alpha, beta, point } = l else { unreachable!() };
        vertex_sets[alpha.src().index()].push(i);
        for &e in q.in_edges(alpha.src()) {
            // [e, ·][αβ*, x] = [eαβ*, x], reduced
            let key = if alpha.is_vertex() && beta.last_edge() == Some(e) {
                (Path::vertex(q.src(e)), beta.parent(q).expect("nontrivial beta"), *point)
            } else {
                (alpha.prepended(q, e), beta.clone(), *point)
            };
            if key.0.len() > depth {
                mask[i] = true;
                continue;
            }
            let j = index[&key];
            edge_maps[e.index()].push((i, j));
        }
        // e* images of atoms with trivial α extend β; flag those cut off
        if alpha.is_vertex() && beta.len() == depth && chains[*point].len() > depth {
            mask[i] = true;
        }
    }
    let space = FiniteMeasureSpace::counting(labels.iter().map(|l| l.render(q)))?;
    Representation::from_maps(q.clone(), p, space, labels, vertex_sets, edge_maps, mask)
}
