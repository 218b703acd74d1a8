//! Graphviz renderings. A transition monomial with several state
//! occurrences becomes one hyperedge: an edge into a `•` junction node and
//! one edge from the junction to each occurrence.

use std::fmt::Write;

use wafa_core::wafa::{RunTree, Wafa};

fn quote(s: &str) -> String {
    let escaped = s
        .replace('\\', "\\\\")
        .replace('"', "\\\"")
        .replace('\n', "\\n");
    format!("\"{escaped}\"")
}

pub fn wafa_dot(a: &Wafa) -> String {
    let ring = a.ring();
    let mut out = String::from("digraph wafa {\n  rankdir=LR;\n  node [shape=circle];\n");
    for (i, q) in a.states().iter().enumerate() {
        let tau = ring.format_value(&a.tau()[i]);
        let _ = writeln!(out, "  s{i} [label={}];", quote(&format!("{q}\n{tau}")));
    }
    let _ = writeln!(out, "  init [shape=point];");
    let mut junctions = 0;
    let mut hyperedge = |out: &mut String, from: &str, label: String, exps: Vec<(usize, u32)>| {
        match exps.as_slice() {
            [(p, 1)] => {
                let _ = writeln!(out, "  {from} -> s{p} [label={}];", quote(&label));
            }
            _ => {
                let j = format!("j{junctions}");
                junctions += 1;
                let _ = writeln!(out, "  {j} [shape=none, label=\"•\", width=0, height=0];");
                let _ = writeln!(out, "  {from} -> {j} [label={}, arrowhead=none];", quote(&label));
                for (p, k) in exps {
                    for _ in 0..k {
                        let _ = writeln!(out, "  {j} -> s{p};");
                    }
                }
            }
        }
    };
    for m in a.p0().monomials() {
        let label = if m.coeff.is_one() {
            String::new()
        } else {
            ring.format_value(&m.coeff)
        };
        hyperedge(&mut out, "init", label, m.exps.iter().collect());
    }
    for (qi, _) in a.states().iter().enumerate() {
        for (ai, letter) in a.alphabet().iter().enumerate() {
            for m in a.delta(qi, ai).monomials() {
                let label = if m.coeff.is_one() {
                    letter.clone()
                } else {
                    format!("{letter} / {}", ring.format_value(&m.coeff))
                };
                hyperedge(&mut out, &format!("s{qi}"), label, m.exps.iter().collect());
            }
        }
    }
    out.push_str("}\n");
    out
}

pub fn run_dot(a: &Wafa, run: &RunTree, name: &str) -> String {
    fn walk(a: &Wafa, t: &RunTree, next: &mut usize, out: &mut String) -> usize {
        let id = *next;
        *next += 1;
        let _ = writeln!(out, "  n{id} [label={}];", quote(&t.label.name(a)));
        for c in &t.children {
            let cid = walk(a, c, next, out);
            let _ = writeln!(out, "  n{id} -> n{cid};");
        }
        id
    }
    let mut out = format!("digraph {} {{\n  node [shape=box];\n", quote(name));
    walk(a, run, &mut 0, &mut out);
    out.push_str("}\n");
    out
}
