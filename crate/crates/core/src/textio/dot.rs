use std::fmt::Write;

use crate::tableau::CompletionGraph;

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Renders a completion graph in Graphviz DOT: one node per element with its
/// constraint count and standpoint signatures, one edge per quasi-role
/// labelled `R @ (v, v')`.
pub fn emit_dot(g: &CompletionGraph) -> String {
    let mut out = String::from("digraph completion {\n  node [shape=box, fontname=\"monospace\"];\n");
    for e in g.elements() {
        let mut label = format!("{}\\n{} constraints", g.element_name(e), g.constraint_count(e));
        for &x in g.variables(e) {
            let st = g.standpoints_of(e, x).join(", ");
            let _ = write!(label, "\\n{}: {{{}}}", g.var_name(x), escape(&st));
        }
        for (c, st, x) in g.labels(e) {
            let _ = write!(label, "\\nL: ({}, {{{}}}, {})", escape(&c), escape(&st.join(", ")), g.var_name(x));
        }
        let style = if g.clash().is_some_and(|c| c.element == e) { ", color=red" } else { "" };
        let _ = writeln!(out, "  n{e} [label=\"{label}\"{style}];");
    }
    for qr in g.quasi_roles() {
        let _ = writeln!(
            out,
            "  n{} -> n{} [label=\"{} @ ({}, {})\"];",
            qr.from,
            qr.to,
            escape(g.role_name(qr.role)),
            g.var_name(qr.from_var),
            g.var_name(qr.to_var)
        );
    }
    out.push_str("}\n");
    out
}
