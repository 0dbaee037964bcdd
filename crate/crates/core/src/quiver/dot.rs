use std::fmt::Write;

use super::Quiver;

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        if c == '"' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}

impl Quiver {
    /// Graphviz text. One node line per vertex, one arc per edge, both in
    /// declaration order.
    pub fn export_dot(&self) -> String {
        let mut out = String::from("digraph Q {\n");
        for v in self.vertices() {
            let _ = writeln!(out, "  {};", quote(self.vertex_name(v)));
        }
        for e in self.edge_ids() {
            let edge = self.edge(e);
            let _ = writeln!(
                out,
                "  {} -> {} [label={}];",
                quote(self.vertex_name(edge.src)),
                quote(self.vertex_name(edge.dst)),
                quote(&edge.name)
            );
        }
        out.push_str("}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use crate::quiver::samples::*;

    fn counts(dot: &str) -> (usize, usize) {
        let arcs = dot.lines().filter(|l| l.contains("->")).count();
        let nodes = dot.lines().filter(|l| l.trim_end().ends_with(';') && !l.contains("->")).count();
        (nodes, arcs)
    }

    #[test]
    fn sample_exports() {
        assert_eq!(counts(&e1().export_dot()), (1, 0));
        assert_eq!(counts(&a2().export_dot()), (2, 1));
        let r = r2().export_dot();
        assert_eq!(counts(&r), (1, 2));
        assert!(r.contains("\"v\" -> \"v\" [label=\"a\"];"));
        assert!(r.starts_with("digraph Q {\n") && r.ends_with("}\n"));
    }

    #[test]
    fn quoting() {
        let q = crate::quiver::Quiver::build(&["a\"b"], &[]).unwrap();
        assert!(q.export_dot().contains("\"a\\\"b\";"));
    }
}
