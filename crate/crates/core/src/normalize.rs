//! Rewriting of arbitrary knowledge bases into normal form.
//!
//! Every rule replaces one axiom by a set of axioms. Rules are tried in a
//! fixed order on a depth-first worklist, so the output and the trace are a
//! deterministic function of the input.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::fresh::FreshNames;
use crate::syntax::{
    is_normal_axiom, universal, Axiom, Body, Concept, KnowledgeBase, Modality, Mode, Name,
};
use crate::textio::axiom_to_string;

/// Rule identifiers, numbered as in the usual presentation of the calculus.
pub const RULES: [u8; 12] = [11, 12, 13, 14, 15, 16, 17, 18, 19, 20, 21, 22];

/// Order in which rules are tried on a single axiom.
const RULE_ORDER: [u8; 12] = [11, 12, 13, 18, 14, 16, 15, 17, 20, 19, 21, 22];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub rule: u8,
    pub replaced: Axiom,
    pub replacement: Vec<Axiom>,
}

#[derive(Serialize)]
struct TraceLine<'a> {
    rule: u8,
    replaced: &'a str,
    replacement: Vec<String>,
}

impl TraceStep {
    pub fn to_json_line(&self) -> String {
        let replaced = axiom_to_string(&self.replaced);
        let line = TraceLine {
            rule: self.rule,
            replaced: &replaced,
            replacement: self.replacement.iter().map(axiom_to_string).collect(),
        };
        serde_json::to_string(&line).expect("trace lines serialise")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizationResult {
    pub kb: KnowledgeBase,
    pub introduced_concepts: BTreeSet<Name>,
    pub introduced_standpoints: BTreeSet<Name>,
    pub trace: Vec<TraceStep>,
}

impl NormalizationResult {
    pub fn rule_counts(&self) -> [usize; 12] {
        let mut counts = [0; 12];
        for step in &self.trace {
            counts[(step.rule - 11) as usize] += 1;
        }
        counts
    }
}

/// Fresh-name supply that remembers what it handed out.
struct Supply<'f> {
    names: &'f mut FreshNames,
    concepts: Vec<Name>,
    standpoints: Vec<Name>,
}

impl Supply<'_> {
    fn concept(&mut self) -> Concept {
        let n = self.names.concept();
        self.concepts.push(n.clone());
        Concept::Atom(n)
    }

    fn standpoint(&mut self) -> Name {
        let n = self.names.standpoint();
        self.standpoints.push(n.clone());
        n
    }
}

fn is_name(c: &Concept) -> bool {
    matches!(c, Concept::Atom(_))
}

fn is_name_or_top(c: &Concept) -> bool {
    c.is_basic()
}

fn is_name_or_bot(c: &Concept) -> bool {
    matches!(c, Concept::Atom(_) | Concept::Bot)
}

fn boxed_gci(s: &Name, lhs: Concept, rhs: Concept) -> Axiom {
    Axiom::boxed(s.clone(), Body::gci(lhs, rhs))
}

/// Applies one rule to one axiom, or returns `None` when the axiom does not
/// match the rule's left-hand side.
pub fn apply_rule(rule: u8, axiom: &Axiom, fresh: &mut FreshNames) -> Option<Vec<Axiom>> {
    let mut supply = Supply { names: fresh, concepts: vec![], standpoints: vec![] };
    apply(rule, axiom, &mut supply)
}

fn apply(rule: u8, axiom: &Axiom, fresh: &mut Supply<'_>) -> Option<Vec<Axiom>> {
    let Axiom::Modal { body, modality } = axiom else {
        return None;
    };
    let s = &modality.standpoint;

    if modality.mode == Mode::Diamond {
        let matches = match rule {
            11 => matches!(body, Body::ConceptAssertion { .. }),
            12 => matches!(body, Body::RoleAssertion { .. }),
            13 => matches!(body, Body::Gci { .. }),
            _ => false,
        };
        if !matches {
            return None;
        }
        let v = fresh.standpoint();
        return Some(vec![Axiom::sharpening(v.clone(), s.clone()), Axiom::boxed(v, body.clone())]);
    }

    match (rule, body) {
        (14, Body::ConceptAssertion { concept, individual }) if !is_name(concept) => {
            let a = fresh.concept();
            Some(vec![
                Axiom::boxed(s.clone(), Body::concept_assertion(a.clone(), individual.clone())),
                boxed_gci(s, a, concept.clone()),
            ])
        }
        (15, Body::Gci { lhs, rhs: Concept::Exists(role, filler) }) if !is_name_or_bot(filler) => {
            let a = fresh.concept();
            Some(vec![
                boxed_gci(s, lhs.clone(), Concept::Exists(role.clone(), Box::new(a.clone()))),
                boxed_gci(s, a, (**filler).clone()),
            ])
        }
        (16, Body::Gci { lhs, rhs: Concept::And(c, d) }) => {
            let a = fresh.concept();
            Some(vec![
                boxed_gci(s, lhs.clone(), a.clone()),
                boxed_gci(s, a.clone(), (**c).clone()),
                boxed_gci(s, a, (**d).clone()),
            ])
        }
        (17, Body::Gci { lhs, rhs: Concept::Modal(m, inner) }) if !is_name_or_bot(inner) => {
            let a = fresh.concept();
            Some(vec![
                boxed_gci(s, lhs.clone(), Concept::Modal(m.clone(), Box::new(a.clone()))),
                // The filler is evaluated at the precisifications of `u`, not `s`.
                boxed_gci(&m.standpoint, a, (**inner).clone()),
            ])
        }
        (18, Body::Gci { lhs, rhs }) if *rhs == Concept::Top || *lhs == Concept::Bot => Some(vec![]),
        (19, Body::Gci { lhs: Concept::Exists(role, filler), rhs }) if !is_name_or_top(filler) => {
            let a = fresh.concept();
            Some(vec![
                boxed_gci(s, (**filler).clone(), a.clone()),
                boxed_gci(s, Concept::Exists(role.clone(), Box::new(a)), rhs.clone()),
            ])
        }
        (20, Body::Gci { lhs: Concept::And(l, r), rhs }) => {
            let (complex, other) = if !is_name_or_top(l) {
                (l, r)
            } else if !is_name_or_top(r) {
                (r, l)
            } else {
                return None;
            };
            let a = fresh.concept();
            Some(vec![
                boxed_gci(s, (**complex).clone(), a.clone()),
                boxed_gci(s, Concept::and(a, (**other).clone()), rhs.clone()),
            ])
        }
        (21, Body::Gci { lhs: Concept::Modal(Modality { mode: Mode::Diamond, standpoint: u }, c), rhs }) => {
            let a = fresh.concept();
            Some(vec![
                boxed_gci(u, (**c).clone(), Concept::boxed(universal(), a.clone())),
                boxed_gci(s, a, rhs.clone()),
            ])
        }
        (22, Body::Gci { lhs: Concept::Modal(Modality { mode: Mode::Box, standpoint: u }, c), rhs }) => {
            let v0 = fresh.standpoint();
            let v1 = fresh.standpoint();
            let a = fresh.concept();
            Some(vec![
                Axiom::sharpening(v0.clone(), u.clone()),
                Axiom::sharpening(v1.clone(), u.clone()),
                boxed_gci(u, (**c).clone(), a.clone()),
                boxed_gci(
                    s,
                    Concept::and(Concept::diamond(v0, a.clone()), Concept::diamond(v1, a)),
                    rhs.clone(),
                ),
            ])
        }
        _ => None,
    }
}

fn lhs_measure(c: &Concept) -> usize {
    match c {
        Concept::Top | Concept::Atom(_) => 0,
        Concept::Bot => 1,
        Concept::Exists(_, f) if is_name_or_top(f) => 0,
        Concept::Exists(_, f) => 1 + lhs_measure(f),
        Concept::And(l, r) => operand_measure(l) + operand_measure(r),
        Concept::Modal(Modality { mode: Mode::Diamond, .. }, f) => 1 + lhs_measure(f),
        Concept::Modal(Modality { mode: Mode::Box, .. }, f) => 5 + lhs_measure(f),
    }
}

fn operand_measure(c: &Concept) -> usize {
    if is_name_or_top(c) {
        0
    } else {
        1 + lhs_measure(c)
    }
}

fn rhs_measure(c: &Concept) -> usize {
    match c {
        Concept::Bot | Concept::Atom(_) => 0,
        Concept::Top => 1,
        Concept::Exists(_, f) | Concept::Modal(_, f) if is_name_or_bot(f) => 0,
        Concept::Exists(_, f) | Concept::Modal(_, f) => 1 + rhs_measure(f),
        Concept::And(l, r) => 1 + rhs_measure(l) + rhs_measure(r),
    }
}

/// Termination measure: zero exactly on normal axioms, and strictly larger
/// for a replaced axiom than the sum over its replacement.
pub fn measure(ax: &Axiom) -> usize {
    match ax {
        Axiom::Sharpening { .. } => 0,
        Axiom::Modal { body, modality } => {
            let diamond = usize::from(modality.mode == Mode::Diamond);
            diamond
                + match body {
                    Body::Gci { lhs, rhs } => lhs_measure(lhs) + rhs_measure(rhs),
                    Body::ConceptAssertion { concept, .. } if is_name(concept) => 0,
                    Body::ConceptAssertion { concept, .. } => 1 + rhs_measure(concept),
                    Body::RoleAssertion { .. } => 0,
                }
        }
    }
}

pub fn normalize(kb: &KnowledgeBase) -> NormalizationResult {
    let mut fresh = FreshNames::avoiding(&kb.vocabulary());
    normalize_with(kb, &mut fresh)
}

/// Normalises with a caller-provided supply, so that several knowledge bases
/// normalised separately never share fresh names.
pub fn normalize_with(kb: &KnowledgeBase, fresh: &mut FreshNames) -> NormalizationResult {
    let mut supply = Supply { names: fresh, concepts: vec![], standpoints: vec![] };
    let mut out = KnowledgeBase::new();
    let mut trace = Vec::new();
    let mut stack: Vec<Axiom> = kb.iter().rev().cloned().collect();

    while let Some(ax) = stack.pop() {
        let applied = RULE_ORDER
            .iter()
            .find_map(|&rule| apply(rule, &ax, &mut supply).map(|rep| (rule, rep)));
        match applied {
            None => {
                debug_assert!(is_normal_axiom(&ax), "stuck on {}", axiom_to_string(&ax));
                out.insert(ax);
            }
            Some((rule, replacement)) => {
                debug_assert!(
                    measure(&ax) > replacement.iter().map(measure).sum::<usize>(),
                    "rule {rule} does not decrease the measure on {}",
                    axiom_to_string(&ax)
                );
                stack.extend(replacement.iter().rev().cloned());
                trace.push(TraceStep { rule, replaced: ax, replacement });
            }
        }
    }

    NormalizationResult {
        kb: out,
        introduced_concepts: supply.concepts.into_iter().collect(),
        introduced_standpoints: supply.standpoints.into_iter().collect(),
        trace,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{is_normal_form, name};
    use crate::textio::parse_axiom;

    fn ax(s: &str) -> Axiom {
        parse_axiom(s).unwrap()
    }

    fn rax(s: &str) -> Axiom {
        let opts = crate::textio::ParseOptions { allow_reserved: true };
        let doc = crate::textio::parse_with(&format!("{s};"), &opts).unwrap();
        doc.desugar().iter().next().unwrap().clone()
    }

    fn supply() -> FreshNames {
        FreshNames::avoiding(&Default::default())
    }

    #[test]
    fn rule_11_diamond_assertion() {
        let out = apply_rule(11, &ax("D(s)[(A & B)(a)]"), &mut supply()).unwrap();
        let v = name("__fS0");
        assert_eq!(
            out,
            vec![
                Axiom::sharpening(v.clone(), "s"),
                Axiom::boxed(v, Body::concept_assertion(Concept::and(Concept::atom("A"), Concept::atom("B")), "a"))
            ]
        );
    }

    #[test]
    fn rule_13_diamond_gci() {
        let out = apply_rule(13, &ax("D(s)[C <: D]"), &mut supply()).unwrap();
        assert_eq!(out, vec![rax("__fS0 <= s"), rax("B(__fS0)[C <: D]")]);
    }

    #[test]
    fn rule_16_conjunction_on_right() {
        let out = apply_rule(16, &ax("B(s)[B <: C & D]"), &mut supply()).unwrap();
        assert_eq!(out, vec![rax("B(s)[B <: __fA0]"), rax("B(s)[__fA0 <: C]"), rax("B(s)[__fA0 <: D]")]);
    }

    #[test]
    fn rule_18_trivial_axioms() {
        assert_eq!(apply_rule(18, &ax("B(s)[ex R.C <: Top]"), &mut supply()), Some(vec![]));
        assert_eq!(apply_rule(18, &ax("B(s)[Bot <: D]"), &mut supply()), Some(vec![]));
    }

    #[test]
    fn rule_22_box_on_left() {
        let out = apply_rule(22, &ax("B(s)[B(u)[C] <: D]"), &mut supply()).unwrap();
        let a = Concept::atom("__fA2");
        assert_eq!(
            out,
            vec![
                Axiom::sharpening("__fS0", "u"),
                Axiom::sharpening("__fS1", "u"),
                Axiom::boxed("u", Body::gci(Concept::atom("C"), a.clone())),
                Axiom::boxed(
                    "s",
                    Body::gci(
                        Concept::and(Concept::diamond("__fS0", a.clone()), Concept::diamond("__fS1", a)),
                        Concept::atom("D")
                    )
                ),
            ]
        );
    }

    #[test]
    fn rule_21_diamond_on_left() {
        let out = apply_rule(21, &ax("B(s)[D(u)[C] <: D]"), &mut supply()).unwrap();
        let a = Concept::atom("__fA0");
        assert_eq!(
            out,
            vec![
                Axiom::boxed("u", Body::gci(Concept::atom("C"), Concept::boxed("*", a.clone()))),
                Axiom::boxed("s", Body::gci(a, Concept::atom("D"))),
            ]
        );
    }

    #[test]
    fn rule_20_commutes() {
        let out = apply_rule(20, &ax("B(s)[A & ex R.(B & C) <: D]"), &mut supply()).unwrap();
        assert_eq!(out, vec![rax("B(s)[ex R.(B & C) <: __fA0]"), rax("B(s)[__fA0 & A <: D]")]);
        assert_eq!(apply_rule(20, &ax("B(s)[A & Top <: D]"), &mut supply()), None);
    }

    #[test]
    fn not_applicable() {
        assert_eq!(apply_rule(16, &ax("B(s)[A(a)]"), &mut supply()), None);
        assert_eq!(apply_rule(14, &ax("B(s)[A(a)]"), &mut supply()), None);
        assert_eq!(apply_rule(17, &ax("B(s)[A <: D(t)[Bot]]"), &mut supply()), None);
        assert_eq!(apply_rule(15, &ax("B(s)[A <: ex R.Bot]"), &mut supply()), None);
        assert_eq!(apply_rule(19, &ax("B(s)[ex R.Top <: A]"), &mut supply()), None);
        assert_eq!(apply_rule(11, &ax("B(s)[A(a)]"), &mut supply()), None);
    }

    #[test]
    fn top_fillers_are_split() {
        // ∃R.⊤ on the right and ⊤(a) are not normal, so they must be rewritten.
        let kb: KnowledgeBase = [ax("A <: ex R.Top"), ax("Top(a)"), ax("A <: D(s)[Top]")].into_iter().collect();
        let res = normalize(&kb);
        assert!(is_normal_form(&res.kb));
        assert!(res.kb.iter().any(|a| matches!(a, Axiom::Modal { body: Body::ConceptAssertion { individual, .. }, .. } if &**individual == "a")));
    }

    #[test]
    fn normalize_is_deterministic_and_normal() {
        let kb: KnowledgeBase = [
            ax("D(SN)[Tumour & PhysicalObject] <: B(TT)[Tumour]"),
            ax("B(TP)[ex ProductOf.Tumour] <: D(TT)[Tumour]"),
            ax("D(TT)[Tumour] <: B(TP)[ex ProductOf.Tumour]"),
            ax("B(TT)[Tissue] <: B(TP)[Tissue]"),
            ax("D(SN)[HasPart(a, b)]"),
            ax("B(SN)[(Tumour & Process)(d)]"),
        ]
        .into_iter()
        .collect();
        let a = normalize(&kb);
        let b = normalize(&kb);
        assert_eq!(a, b);
        assert!(is_normal_form(&a.kb));
        let vocab = kb.vocabulary();
        for n in a.introduced_concepts.iter().chain(&a.introduced_standpoints) {
            assert!(!vocab.all_names().any(|m| m == n));
        }
        for step in &a.trace {
            assert!(measure(&step.replaced) > step.replacement.iter().map(measure).sum::<usize>());
        }
    }

    #[test]
    fn measure_zero_iff_normal() {
        for s in ["A <: B", "A & Top <: ex R.Bot", "ex R.Top <: D(s)[C]", "B(s)[R(a, b)]", "A(a)"] {
            assert_eq!(measure(&ax(s)), 0, "{s}");
        }
        for s in ["A <: Top", "Bot <: A", "A <: B & C", "D(s)[A(a)]", "Top(a)", "B(u)[A] <: B"] {
            assert!(measure(&ax(s)) > 0, "{s}");
        }
    }

    #[test]
    fn trace_json_line() {
        let res = normalize(&[ax("B(s)[B <: C & D]")].into_iter().collect());
        let line = res.trace[0].to_json_line();
        let v: serde_json::Value = serde_json::from_str(&line).unwrap();
        assert_eq!(v["rule"], 16);
        assert_eq!(v["replacement"].as_array().unwrap().len(), 3);
    }
}
