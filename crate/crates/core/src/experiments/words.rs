//! Words in the path category: incomparable closed paths, the interleaved
//! word `γ = αβααββααα…` and isometries built from them.

use std::collections::VecDeque;

use super::ExperimentReport;
use crate::error::{Error, Result};
use crate::lpa::{LeavittAlgebra, LpaElement};
use crate::quiver::{EdgeId, Path, Quiver, VertexId};

/// Shortest path from `a` to `b`.
fn shortest_path(q: &Quiver, a: VertexId, b: VertexId) -> Option<Vec<EdgeId>> {
    let mut prev: Vec<Option<EdgeId>> = vec![None; q.vertex_count()];
    let mut seen = vec![false; q.vertex_count()];
    let mut queue = VecDeque::from([a]);
    seen[a.index()] = true;
    while let Some(u) = queue.pop_front() {
        if u == b {
            let mut out = Vec::new();
            let mut w = b;
            while w != a {
                let e = prev[w.index()].expect("bfs tree");
                out.push(e);
                w = q.src(e);
            }
            out.reverse();
            return Some(out);
        }
        for &e in q.out_edges(u) {
            let w = q.dst(e);
            if !seen[w.index()] {
                seen[w.index()] = true;
                prev[w.index()] = Some(e);
                queue.push_back(w);
            }
        }
    }
    None
}

/// Closed paths `α`, `β` at `v`, neither a prefix of the other: `α` is a
/// simple cycle through `v`, and `β` follows `α` up to an exit, takes it,
/// and returns to `v` by a shortest path.
pub fn incomparable_cycles(q: &Quiver, v: VertexId) -> Result<(Path, Path)> {
    if v.index() >= q.vertex_count() {
        return Err(Error::precondition("vertex not in graph"));
    }
    for c in q.cycles() {
        let edges = c.path.edges();
        let Some(start) = edges.iter().position(|&e| q.src(e) == v) else { continue };
        let mut rot = edges.to_vec();
        rot.rotate_left(start);
        for i in 0..rot.len() {
            let u = q.src(rot[i]);
            for &f in q.out_edges(u) {
                if f == rot[i] {
                    continue;
                }
                if let Some(back) = shortest_path(q, q.dst(f), v) {
                    let mut beta = rot[..i].to_vec();
                    beta.push(f);
                    beta.extend(back);
                    let alpha = Path::from_edges(q, &rot).expect("rotated cycle");
                    let beta = Path::from_edges(q, &beta).expect("closed path");
                    return Ok((alpha, beta));
                }
            }
        }
    }
    if q.on_cycle(v) {
        Err(Error::Internal(format!("no exit returning to {}", q.vertex_name(v))))
    } else {
        Err(Error::precondition(format!("{} is not on a cycle", q.vertex_name(v))))
    }
}

fn interleave(alpha: &Path, beta: &Path, len: usize) -> Vec<EdgeId> {
    let mut out = Vec::with_capacity(len);
    let mut k = 1;
    'outer: loop {
        for block in [alpha, beta] {
            for _ in 0..k {
                for &e in block.edges() {
                    if out.len() == len {
                        break 'outer;
                    }
                    out.push(e);
                }
            }
        }
        k += 1;
    }
    out
}

/// The first `len` edges of `γ = α β α² β² α³ β³ …` at `v`.
pub fn gamma_word(q: &Quiver, v: VertexId, len: usize) -> Result<Path> {
    let (alpha, beta) = incomparable_cycles(q, v)?;
    if len == 0 {
        return Ok(Path::vertex(v));
    }
    Ok(Path::from_edges(q, &interleave(&alpha, &beta, len)).expect("closed blocks compose"))
}

/// The shortest `θ` with `θθ` a prefix of `word`, by length.
pub fn square_prefix(word: &[EdgeId]) -> Option<usize> {
    (1..=word.len() / 2).find(|&t| word[..t] == word[t..2 * t])
}

/// The length-`len` prefix of `γ` and whether it has no square prefix.
pub fn gamma_square_prefix(q: &Quiver, v: VertexId, len: usize) -> Result<(Path, bool)> {
    if !q.is_cofinal() {
        return Err(Error::precondition("the graph is not cofinal"));
    }
    let g = gamma_word(q, v, len)?;
    let free = square_prefix(g.edges()).is_none();
    Ok((g, free))
}

/// `x_i = βⁱα`, `1 ≤ i ≤ k`, with `x_i* x_j = δ_{ij} v` verified exactly.
pub fn linfty_generators(q: &Quiver, k: usize) -> Result<(Vec<LpaElement>, ExperimentReport)> {
    if !q.is_purely_infinite_simple() {
        return Err(Error::precondition("the graph is not purely infinite simple"));
    }
    let v = q
        .vertices()
        .find(|&v| q.on_cycle(v))
        .ok_or_else(|| Error::Internal("purely infinite graph without cycles".into()))?;
    let (alpha, beta) = incomparable_cycles(q, v)?;
    let alg = LeavittAlgebra::new(q.clone());
    let a = alg.path(alpha.clone());
    let b = alg.path(beta.clone());
    let mut xs = Vec::with_capacity(k);
    let mut bi = b.clone();
    for _ in 0..k {
        xs.push(alg.mul(&bi, &a));
        bi = alg.mul(&bi, &b);
    }
    let mut report = ExperimentReport::new("linfty", q);
    report.inputs.depths = vec![k];
    report.inputs.elements = xs.iter().map(|x| alg.format(x)).collect();
    report.notes.push(format!("α = {}, β = {}", q.path_name(&alpha), q.path_name(&beta)));
    let vv = alg.vertex(v);
    let zero = LpaElement::zero();
    let mut bad = None;
    for (i, xi) in xs.iter().enumerate() {
        for (j, xj) in xs.iter().enumerate() {
            let target = if i == j { &vv } else { &zero };
            if !alg.equals(&alg.mul(&xi.star(), xj), target) && bad.is_none() {
                bad = Some(format!("x{}* x{}", i + 1, j + 1));
            }
        }
    }
    report.check("x_i* x_j = δ_ij v", true, bad.is_none(), Some(0.0), bad);
    report.check("β*α = 0", true, alg.mul(&b.star(), &a).is_zero(), Some(0.0), None);
    report.check("α*β = 0", true, alg.mul(&a.star(), &b).is_zero(), Some(0.0), None);
    let aa = alg.mul(&a, &a);
    report.check("control: α*·α² = 0", false, alg.mul(&a.star(), &aa).is_zero(), Some(0.0), None);
    Ok((xs, report.finish()))
}

/// [`gamma_square_prefix`] as a report, with `ααβ…` as the control.
pub fn gamma_experiment(q: &Quiver, v: VertexId, len: usize) -> Result<ExperimentReport> {
    let (g, free) = gamma_square_prefix(q, v, len)?;
    let (alpha, beta) = incomparable_cycles(q, v)?;
    let mut report = ExperimentReport::new("gamma", q);
    report.inputs.depths = vec![len];
    report.inputs.elements = vec![q.path_name(&g)];
    let theta = square_prefix(g.edges()).map(|t| q.path_name(&g.prefix(q, t)));
    report.check("γ has no square prefix", true, free, None, theta);
    let mut adversarial = alpha.edges().to_vec();
    adversarial.extend(interleave(&alpha, &beta, len.saturating_sub(alpha.len())));
    adversarial.truncate(len.max(2 * alpha.len()));
    let caught = square_prefix(&adversarial);
    report.check("control: αγ has no square prefix", false, caught.is_none(), None, caught.map(|t| t.to_string()));
    Ok(report.finish())
}
