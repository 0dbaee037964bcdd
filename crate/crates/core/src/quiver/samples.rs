//! Small named graphs used throughout tests, experiments and the CLI.

use super::Quiver;

fn build(vertices: &[&str], edges: &[(&str, &str, &str)]) -> Quiver {
    Quiver::build(vertices, edges).expect("sample graph is well formed")
}

/// One vertex, no edges.
pub fn e1() -> Quiver {
    build(&["v"], &[])
}

/// `v --e--> w`.
pub fn a2() -> Quiver {
    build(&["v", "w"], &[("e", "v", "w")])
}

/// Line graph `v1 -> v2 -> ... -> vn` with edges `e1 .. e(n-1)`.
pub fn line(n: usize) -> Quiver {
    assert!(n >= 1);
    let vertices: Vec<String> = (1..=n).map(|i| format!("v{i}")).collect();
    let edges = (1..n).map(|i| (format!("e{i}"), format!("v{i}"), format!("v{}", i + 1)));
    Quiver::new(vertices, edges).expect("line graph")
}

/// One vertex with a loop `c`.
pub fn r1() -> Quiver {
    build(&["v"], &[("c", "v", "v")])
}

/// One vertex with loops `a`, `b`.
pub fn r2() -> Quiver {
    build(&["v"], &[("a", "v", "v"), ("b", "v", "v")])
}

/// One vertex with loops `a1 .. an`.
pub fn rose(n: usize) -> Quiver {
    let edges = (1..=n).map(|i| (format!("a{i}"), "v".to_string(), "v".to_string()));
    Quiver::new(["v"], edges).expect("rose graph")
}

/// Loop `c` at `v` and an edge `e: v -> w`.
pub fn t2() -> Quiver {
    build(&["v", "w"], &[("c", "v", "v"), ("e", "v", "w")])
}

/// Two vertices, each with a loop, joined both ways. Purely infinite simple.
pub fn two_cycle() -> Quiver {
    build(&["u", "v"], &[("a", "u", "u"), ("f", "u", "v"), ("b", "v", "v"), ("g", "v", "u")])
}

/// Looks a sample up by its CLI name.
pub fn by_name(name: &str) -> Option<Quiver> {
    Some(match name {
        "E1" => e1(),
        "A2" => a2(),
        "A3" => line(3),
        "R1" => r1(),
        "R2" => r2(),
        "T2" => t2(),
        _ => return None,
    })
}
