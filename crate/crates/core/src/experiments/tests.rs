use super::*;
use crate::quiver::samples::*;
use crate::reps::germ_groupoid_rep;

fn opts() -> ExperimentOptions {
    ExperimentOptions::default()
}

fn assert_passed(r: &ExperimentReport) {
    assert!(r.passed, "{}", r.to_json());
    assert!(r.checks.iter().any(Check::is_control), "no negative control in {}", r.experiment);
}

#[test]
fn uniqueness_a3() {
    let q = line(3);
    let alg = LeavittAlgebra::new(q.clone());
    let xs = sample_elements(&alg, 10, 7);
    let r = uniqueness_experiment(&q, 3.0, &xs, &[], &opts()).unwrap();
    assert_passed(&r);
    assert_eq!(r.records.len(), 10 * 4);
}

#[test]
fn uniqueness_e1_scalar() {
    let q = e1();
    let alg = LeavittAlgebra::new(q.clone());
    let x = alg.scalar(GaussianRational::from_integer(5));
    let r = uniqueness_experiment(&q, 3.0, &[x], &[], &opts()).unwrap();
    assert_passed(&r);
    for rec in &r.records {
        assert!((rec.lower - 5.0).abs() < 1e-12 && (rec.upper - 5.0).abs() < 1e-12);
    }
}

#[test]
fn uniqueness_r2_gap_diagnostic() {
    let q = r2();
    let alg = LeavittAlgebra::new(q.clone());
    let x = alg.edge(q.edge_id("a").unwrap()) + alg.edge(q.edge_id("b").unwrap());
    let r = uniqueness_experiment(&q, 4.0, &[x], &[3, 4, 5], &opts()).unwrap();
    assert_passed(&r);
    let expect = 2f64.powf(0.25);
    assert!(r.records.iter().all(|rec| (rec.lower - expect).abs() < 1e-9));
}

#[test]
fn uniqueness_rejects_non_simple() {
    assert!(uniqueness_experiment(&r1(), 2.0, &[], &[2], &opts()).is_err());
}

#[test]
fn simplicity_r1() {
    let r = simplicity_witness(&r1(), 2.0, &opts()).unwrap();
    assert_passed(&r);
    assert!(r.check_named("boundary rep kills c - c²").unwrap().observed);
}

#[test]
fn simplicity_t2() {
    let r = simplicity_witness(&t2(), 2.0, &opts()).unwrap();
    assert_passed(&r);
    assert!(r.check_named("composite kills H").unwrap().observed);
    assert!(r.check_named("composite keeps c").unwrap().observed);
}

#[test]
fn simplicity_r2_injective_samples() {
    let r = simplicity_witness(&r2(), 2.0, &opts()).unwrap();
    assert_passed(&r);
    assert!(r.checks.iter().any(|c| c.name.starts_with("boundary: 200/200")));
    assert!(r.checks.iter().any(|c| c.name.starts_with("germ: 200/200")));
}

#[test]
fn linfty_r2() {
    let q = r2();
    let (xs, r) = linfty_generators(&q, 3).unwrap();
    assert_passed(&r);
    let alg = LeavittAlgebra::new(q.clone());
    let names: Vec<String> = xs.iter().map(|x| alg.format(x)).collect();
    assert_eq!(names, ["b.a", "b.b.a", "b.b.b.a"]);
    let (one, r) = linfty_generators(&q, 1).unwrap();
    assert_eq!(one.len(), 1);
    assert!(r.passed);
}

#[test]
fn linfty_two_vertices() {
    let (xs, r) = linfty_generators(&two_cycle(), 3).unwrap();
    assert_eq!(xs.len(), 3);
    assert_passed(&r);
    assert!(linfty_generators(&a2(), 2).is_err());
}

#[test]
fn gamma_prefix() {
    let q = r2();
    let v = VertexId(0);
    let (g, free) = gamma_square_prefix(&q, v, 24).unwrap();
    assert_eq!(g.len(), 24);
    assert!(free);
    assert_eq!(q.path_name(&g.prefix(&q, 6)), "a.b.a.a.b.b");
    let (_, free) = gamma_square_prefix(&q, v, 2).unwrap();
    assert!(free);
    assert_passed(&gamma_experiment(&q, v, 24).unwrap());
    assert!(gamma_word(&a2(), VertexId(0), 3).is_err());
}

#[test]
fn square_prefix_brute_force() {
    let e = |s: &str| s.bytes().map(|b| crate::quiver::EdgeId((b - b'a') as u32)).collect::<Vec<_>>();
    assert_eq!(square_prefix(&e("abab")), Some(2));
    assert_eq!(square_prefix(&e("aab")), Some(1));
    assert_eq!(square_prefix(&e("abaab")), None);
    assert_eq!(square_prefix(&e("")), None);
}

#[test]
fn gamma_two_cycle_square_free() {
    let q = two_cycle();
    for v in q.vertices() {
        let (_, free) = gamma_square_prefix(&q, v, 30).unwrap();
        assert!(free);
    }
}

#[test]
fn translates_a2() {
    let q = a2();
    let rep = boundary_path_rep(&q, 2.0, 1).unwrap();
    assert_passed(&disjoint_translates(&q, &rep, 1).unwrap());
}

#[test]
fn translates_r2_germ() {
    let q = r2();
    let rep = germ_groupoid_rep(&q, 2.0, 6).unwrap();
    let r = disjoint_translates(&q, &rep, 2).unwrap();
    assert_passed(&r);
    assert!(disjoint_translates(&r1(), &boundary_path_rep(&r1(), 2.0, 2).unwrap(), 1).is_err());
}

#[test]
fn moves_a2_and_vertex() {
    let q = a2();
    let alg = LeavittAlgebra::new(q.clone());
    let e = q.edge_id("e").unwrap();
    let xs = vec![alg.edge(e) + alg.ghost_edge(e), alg.vertex(VertexId(0))];
    let r = seminorm_move_invariance(&q, 3.0, &xs, 4, &opts()).unwrap();
    assert_passed(&r);
    let v = r.records.iter().filter(|rec| rec.element == "v");
    for rec in v {
        assert!((rec.lower - 1.0).abs() < 1e-12 && (rec.upper - 1.0).abs() < 1e-12);
    }
}

#[test]
fn moves_identity_without_attachments() {
    let q = r2();
    let alg = LeavittAlgebra::new(q.clone());
    let xs = sample_elements(&alg, 3, 1);
    let r = seminorm_move_invariance(&q, 3.0, &xs, 4, &opts()).unwrap();
    assert_passed(&r);
    assert!(r.notes.iter().any(|n| n.contains("identity")));
}

#[test]
fn report_serializes() {
    let q = line(3);
    let alg = LeavittAlgebra::new(q.clone());
    let r = uniqueness_experiment(&q, 2.0, &sample_elements(&alg, 2, 0), &[], &opts()).unwrap();
    let back: ExperimentReport = serde_json::from_str(&r.to_json()).unwrap();
    assert_eq!(back, r);
    let csv = r.to_csv().unwrap();
    assert!(csv.starts_with("element,rep,depth,lower,upper,certified\n"));
    assert_eq!(csv.lines().count(), 1 + r.records.len());
    let g = gamma_experiment(&r2(), VertexId(0), 8).unwrap();
    assert_eq!(g.to_csv().unwrap(), "element,rep,depth,lower,upper,certified\n");
}

#[test]
fn experiments_are_deterministic() {
    let q = two_cycle();
    let a = simplicity_witness(&q, 3.0, &opts()).unwrap();
    let b = simplicity_witness(&q, 3.0, &opts()).unwrap();
    assert_eq!(a.to_json(), b.to_json());
}
