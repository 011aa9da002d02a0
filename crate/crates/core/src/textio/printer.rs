use std::fmt::Write;

use crate::syntax::{Axiom, Body, Concept, Document, KnowledgeBase, Modality, Statement};

fn modality(m: &Modality, out: &mut String) {
    let _ = write!(out, "{}({})", m.mode, m.standpoint);
}

/// `tail` is true when nothing follows the term at the same nesting level, so
/// a bare `ex R.C` cannot swallow what comes after it.
fn concept_into(c: &Concept, tail: bool, out: &mut String) {
    match c {
        Concept::Top => out.push_str("Top"),
        Concept::Bot => out.push_str("Bot"),
        Concept::Atom(a) => out.push_str(a),
        Concept::And(l, r) => {
            concept_into(l, false, out);
            out.push_str(" & ");
            if matches!(**r, Concept::And(..)) {
                out.push('(');
                concept_into(r, true, out);
                out.push(')');
            } else {
                concept_into(r, tail, out);
            }
        }
        Concept::Exists(role, filler) => {
            if !tail {
                out.push('(');
            }
            let _ = write!(out, "ex {role}.");
            if matches!(**filler, Concept::And(..)) {
                out.push('(');
                concept_into(filler, true, out);
                out.push(')');
            } else {
                concept_into(filler, true, out);
            }
            if !tail {
                out.push(')');
            }
        }
        Concept::Modal(m, inner) => {
            modality(m, out);
            out.push('[');
            concept_into(inner, true, out);
            out.push(']');
        }
    }
}

pub fn concept_to_string(c: &Concept) -> String {
    let mut s = String::new();
    concept_into(c, true, &mut s);
    s
}

fn body_into(b: &Body, out: &mut String) {
    match b {
        Body::Gci { lhs, rhs } => {
            concept_into(lhs, true, out);
            out.push_str(" <: ");
            concept_into(rhs, true, out);
        }
        Body::ConceptAssertion { concept, individual } => {
            if matches!(concept, Concept::And(..) | Concept::Exists(..)) {
                out.push('(');
                concept_into(concept, true, out);
                out.push(')');
            } else {
                concept_into(concept, true, out);
            }
            let _ = write!(out, "({individual})");
        }
        Body::RoleAssertion { role, subject, object } => {
            let _ = write!(out, "{role}({subject}, {object})");
        }
    }
}

fn axiom_into(ax: &Axiom, out: &mut String) {
    match ax {
        Axiom::Sharpening { lower, upper } => {
            let _ = write!(out, "{lower} <= {upper}");
        }
        Axiom::Modal { body, modality: m } if m.is_global() => body_into(body, out),
        Axiom::Modal { body, modality: m } => {
            modality(m, out);
            out.push('[');
            body_into(body, out);
            out.push(']');
        }
    }
}

pub fn axiom_to_string(ax: &Axiom) -> String {
    let mut s = String::new();
    axiom_into(ax, &mut s);
    s
}

/// Canonical text of a knowledge base: one statement per line, axioms in
/// their canonical order.
pub fn serialize(kb: &KnowledgeBase) -> String {
    let mut out = String::new();
    for ax in kb {
        axiom_into(ax, &mut out);
        out.push_str(";\n");
    }
    out
}

/// Text of a document, keeping blocks and statement order.
pub fn serialize_document(doc: &Document) -> String {
    let mut out = String::new();
    for st in &doc.statements {
        match st {
            Statement::Axiom(ax) => axiom_into(ax, &mut out),
            Statement::Block { modality: m, bodies } => {
                modality(m, &mut out);
                out.push('{');
                for b in bodies {
                    body_into(b, &mut out);
                    out.push_str("; ");
                }
                if !bodies.is_empty() {
                    out.pop();
                }
                out.push('}');
            }
        }
        out.push_str(";\n");
    }
    out
}
