//! Satisfiability, axiom entailment, concept satisfiability and instance
//! retrieval, all reduced to satisfiability of a knowledge base.

use rayon::prelude::*;

use crate::fresh::FreshNames;
use crate::normalize::{normalize_with, NormalizationResult};
use crate::syntax::{Axiom, Body, Concept, KnowledgeBase, Modality, Name};
use crate::tableau::{saturate_with, SaturationOptions, TableauError};

fn satisfiable_normal(kb: &KnowledgeBase) -> Result<bool, TableauError> {
    Ok(saturate_with(kb, &SaturationOptions::from_env())?.is_satisfiable())
}

fn supply_for(kb: &KnowledgeBase, extra: &KnowledgeBase) -> FreshNames {
    let mut fresh = FreshNames::avoiding(&kb.vocabulary());
    fresh.avoid(&extra.vocabulary());
    fresh
}

pub fn is_satisfiable(kb: &KnowledgeBase) -> Result<bool, TableauError> {
    let mut fresh = FreshNames::avoiding(&kb.vocabulary());
    satisfiable_normal(&normalize_with(kb, &mut fresh).kb)
}

/// `K_¬φ`: a knowledge base that is satisfiable together with `K` exactly
/// when `K` has a model violating `φ`. Fresh names come from `fresh`.
pub fn negated_axiom_kb_with(axiom: &Axiom, fresh: &mut FreshNames) -> KnowledgeBase {
    let a = Concept::Atom(fresh.concept());
    let mut out = KnowledgeBase::new();
    match axiom {
        Axiom::Sharpening { lower, upper } => {
            out.insert(Axiom::diamond(lower.clone(), Body::gci(Concept::Top, a.clone())));
            out.insert(Axiom::boxed(upper.clone(), Body::gci(a, Concept::Bot)));
        }
        Axiom::Modal { body, modality } => {
            let dual = modality.dual();
            match body {
                Body::Gci { lhs, rhs } => {
                    let r = fresh.role();
                    out.insert(Axiom::global(Body::gci(a.clone(), lhs.clone())));
                    out.insert(Axiom::global(Body::gci(Concept::and(a.clone(), rhs.clone()), Concept::Bot)));
                    out.insert(Axiom::modal(dual, Body::gci(Concept::Top, Concept::exists(r, a))));
                }
                Body::ConceptAssertion { concept, individual } => {
                    out.insert(Axiom::global(Body::gci(Concept::and(a.clone(), concept.clone()), Concept::Bot)));
                    out.insert(Axiom::modal(dual, Body::concept_assertion(a, individual.clone())));
                }
                Body::RoleAssertion { role, subject, object } => {
                    let b = Concept::Atom(fresh.concept());
                    out.insert(Axiom::global(Body::concept_assertion(b.clone(), object.clone())));
                    out.insert(Axiom::global(Body::gci(
                        Concept::and(a.clone(), Concept::exists(role.clone(), b)),
                        Concept::Bot,
                    )));
                    out.insert(Axiom::modal(dual, Body::concept_assertion(a, subject.clone())));
                }
            }
        }
    }
    out
}

/// [`negated_axiom_kb_with`] using names fresh for `axiom` alone.
pub fn negated_axiom_kb(axiom: &Axiom) -> KnowledgeBase {
    let mut kb = KnowledgeBase::new();
    kb.insert(axiom.clone());
    negated_axiom_kb_with(axiom, &mut FreshNames::avoiding(&kb.vocabulary()))
}

fn single(axiom: &Axiom) -> KnowledgeBase {
    let mut kb = KnowledgeBase::new();
    kb.insert(axiom.clone());
    kb
}

/// The normal form of `K ∪ K_¬φ`, unsatisfiable exactly when `K ⊨ φ`.
pub fn entailment_query(kb: &KnowledgeBase, axiom: &Axiom) -> KnowledgeBase {
    let mut fresh = supply_for(kb, &single(axiom));
    let query = kb.union(&negated_axiom_kb_with(axiom, &mut fresh));
    normalize_with(&query, &mut fresh).kb
}

pub fn entails(kb: &KnowledgeBase, axiom: &Axiom) -> Result<bool, TableauError> {
    Ok(!satisfiable_normal(&entailment_query(kb, axiom))?)
}

pub fn concept_unsatisfiability_axiom(concept: &Concept) -> Axiom {
    Axiom::global(Body::gci(concept.clone(), Concept::Bot))
}

/// Whether `concept` can be non-empty, i.e. `K ⊭ □_*[C ⊑ ⊥]`.
pub fn concept_satisfiable(kb: &KnowledgeBase, concept: &Concept) -> Result<bool, TableauError> {
    Ok(!entails(kb, &concept_unsatisfiability_axiom(concept))?)
}

/// Individuals `a` of the knowledge base with `K ⊨ □_*[C(a)]`, in name
/// order. `K` is normalised once; each individual gets its own saturation.
pub fn instances(kb: &KnowledgeBase, concept: &Concept) -> Result<Vec<Name>, TableauError> {
    let probe = single(&Axiom::global(Body::gci(concept.clone(), Concept::Top)));
    let mut fresh = supply_for(kb, &probe);
    let NormalizationResult { kb: base, .. } = normalize_with(kb, &mut fresh);
    let individuals: Vec<Name> = kb.vocabulary().individuals.into_iter().collect();
    let answers: Vec<Result<bool, TableauError>> = individuals
        .par_iter()
        .map(|a| {
            let mut fresh = fresh.clone();
            let phi = Axiom::modal(Modality::global(), Body::concept_assertion(concept.clone(), a.clone()));
            let neg = negated_axiom_kb_with(&phi, &mut fresh);
            let query = base.union(&normalize_with(&neg, &mut fresh).kb);
            Ok(!satisfiable_normal(&query)?)
        })
        .collect();
    let mut out = Vec::new();
    for (a, answer) in individuals.into_iter().zip(answers) {
        if answer? {
            out.push(a);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::textio::{parse_axiom, parse_concept, parse_kb, parse_with, serialize, ParseOptions};

    fn ax(s: &str) -> Axiom {
        parse_axiom(s).unwrap()
    }

    fn reserved(text: &str) -> KnowledgeBase {
        parse_with(text, &ParseOptions { allow_reserved: true }).unwrap().desugar()
    }

    #[test]
    fn negations_follow_the_reduction() {
        let cases = [
            ("s <= t", "D(s)[Top <: __fA0]; B(t)[__fA0 <: Bot];"),
            ("B(s)[C <: D]", "__fA0 <: C; __fA0 & D <: Bot; D(s)[Top <: ex __fR1.__fA0];"),
            ("B(s)[R(a, b)]", "__fA1(b); __fA0 & ex R.__fA1 <: Bot; D(s)[__fA0(a)];"),
            ("D(s)[C(a)]", "__fA0 & C <: Bot; B(s)[__fA0(a)];"),
        ];
        for (phi, expected) in cases {
            assert_eq!(serialize(&negated_axiom_kb(&ax(phi))), serialize(&reserved(expected)), "{phi}");
        }
    }

    #[test]
    fn trivial_entailments() {
        let empty = KnowledgeBase::new();
        assert!(entails(&empty, &ax("s <= s")).unwrap());
        assert!(!entails(&empty, &ax("s <= t")).unwrap());
        assert!(entails(&parse_kb("Top <: Bot;").unwrap(), &ax("A(a)")).unwrap());
        assert!(is_satisfiable(&empty).unwrap());
    }

    #[test]
    fn concept_satisfiability() {
        let empty = KnowledgeBase::new();
        assert!(concept_satisfiable(&empty, &parse_concept("B(*)[A]").unwrap()).unwrap());
        let k = parse_kb("A <: Bot;").unwrap();
        assert!(!concept_satisfiable(&k, &parse_concept("D(*)[A]").unwrap()).unwrap());
    }

    #[test]
    fn instance_retrieval() {
        let a = Concept::atom("A");
        assert!(instances(&KnowledgeBase::new(), &a).unwrap().is_empty());
        let k = parse_kb("A(a); B(b);").unwrap();
        assert_eq!(instances(&k, &a).unwrap(), vec![crate::syntax::name("a")]);
    }
}
