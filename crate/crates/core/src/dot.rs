//! Graphviz output for chord diagrams.

use std::fmt::Write;

use crate::chord::{ChordDiagram, EdgeLabel};

#[derive(Debug, Clone, Copy, Default)]
pub struct DotOptions {
    /// Relabel to canonical form first, so isomorphic diagrams render identically.
    pub canon: bool,
}

/// Circular edges are solid, ghost edges bold, each incoming circle is a
/// cluster, and markings label the end of their edge as `m<k>` with `k`
/// the position in the boundary order.
pub fn emit_dot(c: &ChordDiagram, opts: DotOptions) -> String {
    let relabeled;
    let c = if opts.canon {
        relabeled = c.canonical_relabel();
        &relabeled
    } else {
        c
    };
    let g = c.graph();
    let mut out = String::new();
    let t = c.top_type();
    writeln!(out, "graph chord {{").unwrap();
    writeln!(out, "  label=\"{t}\";").unwrap();
    writeln!(out, "  node [shape=point, width=0.08];").unwrap();

    let mut placed = vec![false; g.vertex_count()];
    for (k, cycle) in c.incoming_cycles().iter().enumerate() {
        writeln!(out, "  subgraph cluster_in{k} {{").unwrap();
        writeln!(out, "    label=\"in {k}\";").unwrap();
        for &h in &cycle.oriented_edges {
            let v = g.vertex_of(h);
            if !placed[v] {
                placed[v] = true;
                writeln!(out, "    v{v} [xlabel=\"{v}\"];").unwrap();
            }
        }
        writeln!(out, "  }}").unwrap();
    }
    for (v, done) in placed.iter().enumerate() {
        if !done {
            writeln!(out, "  v{v} [xlabel=\"{v}\"];").unwrap();
        }
    }

    let marks = c.markings();
    let mark_of = |h: usize| marks.iter().position(|&m| m == h);
    for (e, &[a, b]) in g.edges().iter().enumerate() {
        let mut attrs = vec![match c.label(e) {
            EdgeLabel::Circular => "style=solid".to_string(),
            EdgeLabel::Ghost => "style=bold".to_string(),
        }];
        attrs.push(format!("label=\"e{e}\""));
        if let Some(k) = mark_of(a) {
            attrs.push(format!("taillabel=\"m{k}\""));
        }
        if let Some(k) = mark_of(b) {
            attrs.push(format!("headlabel=\"m{k}\""));
        }
        writeln!(out, "  v{} -- v{} [{}];", g.vertex_of(a), g.vertex_of(b), attrs.join(", ")).unwrap();
    }
    writeln!(out, "}}").unwrap();
    out
}
