//! Graphviz export. Mutable vertices are circles filled by color, frozen
//! vertices are squares, and each arrow carries its multiplicity as a label.

use std::fmt::Write;

use num_traits::{Signed, Zero};

use crate::quiver::{ExtendedQuiver, VertexColor};

fn fill(color: Option<VertexColor>) -> &'static str {
    match color {
        Some(VertexColor::Red) => "lightcoral",
        Some(VertexColor::Green) => "palegreen",
        Some(VertexColor::Blue) => "lightblue",
        None => "gray",
    }
}

pub fn to_dot(q: &ExtendedQuiver) -> String {
    let mut out = String::from("digraph quiver {\n  node [style=filled];\n");
    let colors = q.colors_lossy();
    for (i, c) in colors.iter().enumerate() {
        let _ = writeln!(
            out,
            "  v{0} [shape=circle, label=\"{0}\", fillcolor={1}];",
            i + 1,
            fill(*c)
        );
    }
    for j in 0..q.m() {
        let _ = writeln!(
            out,
            "  f{0} [shape=square, label=\"{0}'\", fillcolor=white];",
            j + 1
        );
    }
    let b = q.mutable_part().matrix();
    for i in 0..q.n() {
        for j in i + 1..q.n() {
            let x = &b[(i, j)];
            if x.is_zero() {
                continue;
            }
            let (from, to) = if x.is_positive() { (i, j) } else { (j, i) };
            let _ = writeln!(
                out,
                "  v{} -> v{} [label=\"{}\"];",
                from + 1,
                to + 1,
                x.abs()
            );
        }
    }
    for i in 0..q.n() {
        for (j, x) in q.c_matrix().row(i).iter().enumerate() {
            if x.is_positive() {
                let _ = writeln!(out, "  v{} -> f{} [label=\"{}\"];", i + 1, j + 1, x);
            } else if x.is_negative() {
                let _ = writeln!(out, "  f{} -> v{} [label=\"{}\"];", j + 1, i + 1, x.abs());
            }
        }
    }
    out.push_str("}\n");
    out
}
