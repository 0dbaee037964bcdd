use std::collections::BTreeMap;

use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::lpa::sample::random_degree_zero;
use crate::quiver::samples::*;
use crate::scalar::GaussianRational;

const I: Complex64 = Complex64::new(0.0, 1.0);

fn opts() -> NormOptions {
    NormOptions::default()
}

fn same_images(a: &Representation, b: &Representation) -> f64 {
    a.generators()
        .iter()
        .zip(b.generators())
        .map(|((_, x), (_, y))| x.matrix.max_abs_diff(&y.matrix))
        .fold(0.0, f64::max)
}

fn el(alg: &LeavittAlgebra, q: &Quiver, word: &[(&str, bool)]) -> LpaElement {
    let fs: Vec<LpaElement> = word
        .iter()
        .map(|&(n, star)| {
            let e = q.edge_id(n).unwrap();
            if star {
                alg.ghost_edge(e)
            } else {
                alg.edge(e)
            }
        })
        .collect();
    alg.product(fs.iter())
}

/// Diagonal generator images of a one-vertex rep, `c ↦ z`.
fn scalar_gauge(rep: &Representation, z: Complex64) -> Representation {
    let v = rep.quiver().vertex_id("v").unwrap();
    let n = rep.vertex_support(v).len();
    let u = BTreeMap::from([(v, CMatrix::identity(n).scale(z))]);
    gauge_modify(rep, &u).unwrap()
}

#[test]
fn r1_boundary_is_one_point() {
    let q = r1();
    let rep = boundary_path_rep(&q, 2.0, 5).unwrap();
    assert_eq!(rep.dim(), 1);
    assert!(rep.mask().iter().all(|&m| !m));
    let alg = LeavittAlgebra::new(q.clone());
    let c = el(&alg, &q, &[("c", false)]);
    let x = c.clone() - alg.mul(&c, &c);
    assert!(!x.is_zero());
    assert!(rep.evaluate(&x).is_zero());
    assert_eq!(rep.residual().max, 0.0);
}

#[test]
fn a2_boundary_is_matrix_algebra() {
    let q = a2();
    let rep = boundary_path_rep(&q, 3.0, 9).unwrap();
    assert_eq!(rep.dim(), 2);
    assert_eq!(rep.residual().max, 0.0);
    assert!(rep.is_nondegenerate() && rep.is_spatial());
    let alg = LeavittAlgebra::new(q.clone());
    // the four matrix units v, e, e*, w are the four elementary matrices
    let units = [
        alg.vertex(q.vertex_id("v").unwrap()),
        el(&alg, &q, &[("e", false)]),
        el(&alg, &q, &[("e", true)]),
        alg.vertex(q.vertex_id("w").unwrap()),
    ];
    let mut seen = std::collections::BTreeSet::new();
    for u in &units {
        let m = rep.evaluate(u);
        assert_eq!(m.nnz(), 1);
        let (i, j, z) = m.entries().next().unwrap();
        assert_eq!(z, Complex64::new(1.0, 0.0));
        seen.insert((i, j));
    }
    assert_eq!(seen.len(), 4);
}

#[test]
fn e1_reps_are_identity() {
    let q = e1();
    let b = boundary_path_rep(&q, 2.0, 3).unwrap();
    assert_eq!(b.dim(), 1);
    let g = germ_groupoid_rep(&q, 2.0, 3).unwrap();
    assert_eq!(g.dim(), GERM_POINTS_PER_VERTEX);
    for rep in [&b, &g] {
        let v = rep.quiver().vertex_id("v").unwrap();
        assert_eq!(rep.vertex_image(v).matrix.max_abs_diff(&CMatrix::identity(rep.dim())), 0.0);
    }
}

#[test]
fn germ_relations() {
    let g = germ_groupoid_rep(&a2(), 2.0, 4).unwrap();
    assert_eq!(g.residual().max, 0.0);
    assert!(g.is_nondegenerate());
    assert_eq!(g.residual().masked_atoms, 0);

    let q = r2();
    let g = germ_groupoid_rep(&q, 2.0, 3).unwrap();
    assert_eq!(g.residual().max, 0.0);
    assert!(g.residual().masked_atoms > 0);
    assert!(g.residual().masked_atoms < g.dim());
    let alg = LeavittAlgebra::new(q.clone());
    let ab = q.edge_id("a").unwrap();
    let bb = q.edge_id("b").unwrap();
    let m = g.ghost_image(ab).matrix.matmul(&g.edge_image(bb).matrix);
    assert!(m.is_zero());
    let x = el(&alg, &q, &[("a", true), ("a", false)]);
    let v = q.vertex_id("v").unwrap();
    assert_eq!(g.off_mask(&g.evaluate(&x)).max_abs_diff(&g.off_mask(&g.vertex_image(v).matrix)), 0.0);
}

#[test]
fn boundary_relations_with_cycles() {
    for q in [r2(), t2(), two_cycle()] {
        let rep = boundary_path_rep(&q, 3.0, 3).unwrap();
        assert_eq!(rep.residual().max, 0.0, "{:?}", rep.residual());
        assert!(rep.is_nondegenerate() && rep.is_spatial());
    }
}

#[test]
fn amplify_trivial_index_set() {
    let rep = boundary_path_rep(&a2(), 2.0, 3).unwrap();
    let amp = amplify(&rep, 1).unwrap();
    assert_eq!(amp.dim(), rep.dim());
    assert_eq!(same_images(&amp, &rep), 0.0);
}

#[test]
fn amplify_e1_gives_matrix_units() {
    let rep = boundary_path_rep(&e1(), 2.0, 1).unwrap();
    let amp = amplify(&rep, 2).unwrap();
    assert_eq!(amp.dim(), 2);
    assert_eq!(amp.residual().max, 0.0);
    let map = e1().matrix_graph_with_map(2);
    let f = map.attachments[0].edges[0];
    let swap = CMatrix::from_triplets(2, 2, [(1, 0, Complex64::new(1.0, 0.0))]);
    assert_eq!(amp.edge_image(f).matrix.max_abs_diff(&swap), 0.0);
    assert_eq!(amp.ghost_image(f).matrix.max_abs_diff(&swap.transpose()), 0.0);
}

#[test]
fn amplify_preserves_relations() {
    for n in 1..=3 {
        let amp = amplify(&boundary_path_rep(&r2(), 2.0, 2).unwrap(), n).unwrap();
        assert_eq!(amp.residual().max, 0.0);
        assert!(amp.is_nondegenerate() && amp.is_spatial());
    }
}

#[test]
fn extract_corner_round_trip() {
    for (q, n) in [(a2(), 3), (r2(), 2), (t2(), 2)] {
        let rep = boundary_path_rep(&q, 2.0, 2).unwrap();
        let amp = amplify(&rep, n).unwrap();
        for i0 in 0..n {
            let ex = extract_corner(&amp, &q, n, i0).unwrap();
            assert!(ex.max_deviation <= 1e-12);
            assert_eq!(ex.sigma.dim(), rep.dim());
            assert_eq!(ex.sigma.residual().max, 0.0);
        }
    }
}

#[test]
fn extract_corner_trivial_and_swapped() {
    let q = e1();
    let rep = boundary_path_rep(&q, 2.0, 1).unwrap();
    let ex = extract_corner(&amplify(&rep, 1).unwrap(), &q, 1, 0).unwrap();
    assert_eq!(ex.u.max_abs_diff(&CMatrix::identity(1)), 0.0);

    let swapped = permute_atoms(&amplify(&rep, 2).unwrap(), &[1, 0]).unwrap();
    let ex = extract_corner(&swapped, &q, 2, 0).unwrap();
    let one = Complex64::new(1.0, 0.0);
    let p = CMatrix::from_triplets(2, 2, [(0, 1, one), (1, 0, one)]);
    assert_eq!(ex.u.max_abs_diff(&p), 0.0);
}

#[test]
fn extract_corner_rejects_degenerate() {
    let q = a2();
    let rep = boundary_path_rep(&q, 2.0, 1).unwrap();
    let amp = amplify(&rep, 2).unwrap();
    assert!(extract_corner(&amp, &q, 2, 2).is_err());
    assert!(extract_corner(&rep, &q, 2, 0).is_err());
}

#[test]
fn gauge_identity_and_phase() {
    let rep = boundary_path_rep(&r1(), 3.0, 2).unwrap();
    assert_eq!(same_images(&gauge_modify(&rep, &BTreeMap::new()).unwrap(), &rep), 0.0);
    assert_eq!(same_images(&scalar_gauge(&rep, Complex64::new(1.0, 0.0)), &rep), 0.0);

    let g = scalar_gauge(&rep, I);
    assert_eq!(g.residual().max, 0.0);
    assert!(g.is_spatial());
    let c = g.quiver().edge_id("c").unwrap();
    assert_eq!(g.edge_image(c).matrix.get(0, 0), I);
    assert_eq!(g.ghost_image(c).matrix.get(0, 0), -I);
}

#[test]
fn gauge_by_two_breaks_contractivity() {
    let rep = boundary_path_rep(&r1(), 3.0, 2).unwrap();
    let g = scalar_gauge(&rep, Complex64::new(2.0, 0.0));
    assert!(g.residual().max < 1e-15);
    assert!(!g.is_spatial());
    let q = g.quiver().clone();
    let alg = LeavittAlgebra::new(q.clone());
    let b = g.norm(&el(&alg, &q, &[("c", false)]), &opts()).unwrap();
    assert!((b.lower - 2.0).abs() < 1e-9 && (b.upper - 2.0).abs() < 1e-9);
}

#[test]
fn shift_tensor_trivial_modulus() {
    let rep = boundary_path_rep(&r2(), 2.0, 2).unwrap();
    assert_eq!(same_images(&shift_tensor_rep(&rep, 1).unwrap(), &rep), 0.0);
    assert!(shift_tensor_rep(&rep, 0).is_err());
}

#[test]
fn shift_tensor_graded() {
    let q = r2();
    let rep = boundary_path_rep(&q, 2.0, 3).unwrap();
    let nn = 4;
    let sh = shift_tensor_rep(&rep, nn).unwrap();
    assert_eq!(sh.residual().max, 0.0);
    let alg = LeavittAlgebra::new(q.clone());
    let one = Complex64::new(1.0, 0.0);
    let shift = CMatrix::from_triplets(nn, nn, (0..nn).map(|m| ((m + 1) % nn, m, one)));
    let mut u_pow = vec![CMatrix::identity(nn)];
    for k in 1..nn {
        u_pow.push(shift.matmul(&u_pow[k - 1]));
    }
    let words: [&[(&str, bool)]; 4] = [
        &[("a", false), ("b", false)],
        &[("a", false), ("b", true)],
        &[("b", true)],
        &[("a", true), ("b", true), ("a", true)],
    ];
    for w in words {
        let x = el(&alg, &q, w);
        let d = x.is_homogeneous().unwrap();
        let expect = rep.evaluate(&x).kron(&u_pow[d.rem_euclid(nn as i64) as usize]);
        assert_eq!(sh.evaluate(&x).max_abs_diff(&expect), 0.0);
    }
}

#[test]
fn freeness() {
    let rep = boundary_path_rep(&a2(), 2.0, 2).unwrap();
    let cells = vec![vec![0], vec![1]];
    assert!(is_free(&rep, &cells).unwrap());
    assert!(!is_free(&rep, &[vec![0, 1]]).unwrap());
    assert!(is_approximately_free(&rep, &[vec![0, 1]]).unwrap());
    assert!(is_free(&rep, &[vec![0]]).is_err());

    let sh = shift_tensor_rep(&rep, 3).unwrap();
    assert!(is_approximately_free(&sh, &cyclic_cells(rep.dim(), 3)).unwrap());
    assert!(!is_free(&sh, &cyclic_cells(rep.dim(), 3)).unwrap() || rep.dim() == 0);
}

#[test]
fn restrict_drops_padding() {
    let q = a2();
    let space = FiniteMeasureSpace::counting(["w", "e", "pad"]).unwrap();
    let labels = vec![AtomLabel::Named("w".into()), AtomLabel::Named("e".into()), AtomLabel::Named("pad".into())];
    let padded =
        Representation::from_maps(q, 2.0, space, labels, vec![vec![1], vec![0]], vec![vec![(0, 1)]], vec![false; 3])
            .unwrap();
    assert!(!padded.is_nondegenerate());
    assert_eq!(padded.residual().max, 0.0);
    let r = restrict_nondegenerate(&padded).unwrap();
    assert_eq!(r.dim(), 2);
    assert!(r.is_nondegenerate());
    assert_eq!(r.residual().max, 0.0);
    assert!(extend_along_move(&padded, MoveKind::SourceRemoval, 2).is_err());
}

#[test]
fn moves_extend_a2() {
    let q = a2();
    let rep = boundary_path_rep(&q, 3.0, 2).unwrap();
    let alg = LeavittAlgebra::new(q.clone());
    let xs: Vec<LpaElement> = alg.basis_monomials(2).into_iter().map(|m| alg.monomial(m)).collect();
    for kind in [MoveKind::SourceRemoval, MoveKind::Desingularization] {
        let ext = extend_along_move(&rep, kind, 3).unwrap();
        assert_eq!(ext.original_atoms, 2);
        assert_eq!(ext.rep.dim(), 2 + 3);
        assert_eq!(ext.rep.residual().max, 0.0, "{kind:?}");
        assert!(ext.rep.is_nondegenerate());
        assert_eq!(ext.deviation(&rep, &xs), 0.0);
        let e_plus = el(&alg, &q, &[("e", false)]) + el(&alg, &q, &[("e", true)]);
        let a = rep.norm(&e_plus, &opts()).unwrap();
        let b = ext.rep.norm(&e_plus, &opts()).unwrap();
        assert!(a.overlaps(&b, 1e-9));
    }
}

#[test]
fn moves_without_attachments() {
    let rep = boundary_path_rep(&r1(), 2.0, 2).unwrap();
    let ext = extend_along_move(&rep, MoveKind::SourceRemoval, 3).unwrap();
    assert_eq!(ext.rep.dim(), rep.dim());
    assert_eq!(same_images(&ext.rep, &rep), 0.0);
}

#[test]
fn criterion_on_spatial_rep() {
    let rep = boundary_path_rep(&a2(), 3.0, 2).unwrap();
    let v = spatiality_criterion(&rep, 3.0, &CriterionOptions::default()).unwrap();
    assert!(v.lhs && v.rhs, "{v:?}");
    assert!(v.checked > 0);
}

#[test]
fn criterion_refutes_scaled_rep() {
    let rep = scalar_gauge(&boundary_path_rep(&r1(), 3.0, 2).unwrap(), Complex64::new(2.0, 0.0));
    let v = spatiality_criterion(&rep, 3.0, &CriterionOptions::default()).unwrap();
    assert!(!v.lhs && !v.rhs, "{v:?}");
    assert!(v.refuted_by.is_some());
}

#[test]
fn criterion_sides_differ_at_two() {
    // two orthogonal rank-one projections: contractive at p = 2 but not spatial
    let rep = rotated_projections_rep(2.0).unwrap();
    assert!(rep.residual().max < 1e-15 && rep.is_nondegenerate());
    let v = spatiality_criterion(&rep, 2.0, &CriterionOptions::default()).unwrap();
    assert!(!v.lhs && v.rhs, "{v:?}");
    // away from p = 2 the same matrices are not contractive
    let v3 = spatiality_criterion(&rep.with_p(3.0).unwrap(), 3.0, &CriterionOptions::default()).unwrap();
    assert!(!v3.rhs, "{v3:?}");
}

#[test]
fn orthogonal_pinch() {
    let rep = boundary_path_rep(&r2(), 3.0, 3).unwrap();
    let fam = harvest_orthogonal_isometries(&rep, 2, 2).unwrap();
    assert_eq!(fam.len(), 2);
    let (s, t) = (&fam[0].1.matrix, &fam[1].1.matrix);
    assert!(s.adjoint().matmul(t).is_zero() && s.matmul(&t.adjoint()).is_zero());
    let sum = CMatrix::from_triplets(
        rep.dim(),
        rep.dim(),
        s.entries().chain(t.entries().map(|(i, j, z)| (i, j, z * Complex64::new(2.0, 0.0)))),
    );
    let b = opnorm_p(&sum, 3.0, Some(rep.space()), &opts()).unwrap();
    assert!(b.contains(2.0, 1e-9), "{b:?}");
    assert!(harvest_orthogonal_isometries(&boundary_path_rep(&e1(), 3.0, 1).unwrap(), 2, 1).is_err());
}

#[test]
fn json_round_trip() {
    for rep in [
        boundary_path_rep(&t2(), 3.0, 2).unwrap(),
        germ_groupoid_rep(&a2(), 2.0, 2).unwrap(),
        scalar_gauge(&boundary_path_rep(&r1(), 2.0, 1).unwrap(), I),
    ] {
        let s = serde_json::to_string(&rep.to_json()).unwrap();
        let back = Representation::from_json(&serde_json::from_str(&s).unwrap()).unwrap();
        assert_eq!(back.dim(), rep.dim());
        assert_eq!(back.mask(), rep.mask());
        assert_eq!(same_images(&back, &rep), 0.0);
        assert_eq!(back.residual(), rep.residual());
    }
}

#[test]
fn evaluate_checks_quiver() {
    let rep = boundary_path_rep(&a2(), 2.0, 1).unwrap();
    let alg = LeavittAlgebra::new(r1());
    assert!(evaluate(&rep, &alg, &alg.one()).is_err());
    let alg = LeavittAlgebra::new(a2());
    let one = evaluate(&rep, &alg, &alg.one()).unwrap();
    assert_eq!(one.max_abs_diff(&CMatrix::identity(2)), 0.0);
    let two = alg.scalar(GaussianRational::from_integer(2));
    assert_eq!(rep.evaluate(&two).max_abs_diff(&CMatrix::identity(2).scale(Complex64::new(2.0, 0.0))), 0.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn shift_tensor_keeps_degree_zero_norms(seed in 0u64..1000, nn in 1usize..4) {
        let q = r2();
        let rep = boundary_path_rep(&q, 3.0, 2).unwrap();
        let sh = shift_tensor_rep(&rep, nn).unwrap();
        let alg = LeavittAlgebra::new(q);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_degree_zero(&alg, 1, 3, &mut rng);
        let a = rep.norm(&x, &opts()).unwrap();
        let b = sh.norm(&x, &opts()).unwrap();
        prop_assert!(a.overlaps(&b, 1e-7 * a.upper.max(1.0)));
    }
}

#[test]
fn rep_kinds_parse_and_build() {
    for s in ["boundary", "germ", "shift:3", "germ-shift:2"] {
        let k: RepKind = s.parse().unwrap();
        assert_eq!(k.to_string(), s);
        let rep = k.build(&a2(), 2.0, 2).unwrap();
        assert_eq!(rep.residual().max, 0.0);
    }
    for bad in ["shift:0", "shift:x", "tree"] {
        assert!(bad.parse::<RepKind>().is_err());
    }
}

#[test]
fn interior_images_are_exact() {
    // the depth-3 and depth-6 models agree on the depth-3 interior
    let q = r2();
    let alg = LeavittAlgebra::new(q.clone());
    let x = el(&alg, &q, &[("a", false), ("b", true)]) + el(&alg, &q, &[("b", false), ("a", false), ("a", true)]);
    for kind in [RepKind::Boundary, RepKind::Germ] {
        let small = kind.build(&q, 2.0, 4).unwrap();
        let big = kind.build(&q, 2.0, 7).unwrap();
        let m = small.interior_image(&x);
        assert!(!m.is_zero());
        let idx: Vec<usize> = (0..small.dim()).map(|i| big.space().index_of(small.space().label(i)).unwrap()).collect();
        let b = big.evaluate(&x);
        for (i, j, z) in m.entries() {
            assert_eq!(b.get(idx[i], idx[j]), z, "{kind}");
        }
    }
}
