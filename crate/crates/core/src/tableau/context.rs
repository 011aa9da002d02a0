//! Interned signature of a normal-form knowledge base and the lookup tables
//! the completion rules need.
//!
//! Tags share one index space: standpoints first, then individuals, concepts
//! and formulas.

use std::collections::HashMap;

use crate::syntax::{signature, Axiom, Body, Concept, Formula, KnowledgeBase, Mode, Name, UNIVERSAL};

pub(crate) type Tag = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum ConceptKind {
    Top,
    Bot,
    Atom,
    And(Tag, Tag),
    Exists(u32, Tag),
    Modal(Mode, u32, Tag),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum FormulaKind {
    Sharpening(u32, u32),
    /// A formula under a standpoint operator, with the tag of its body.
    Modal(Mode, u32, Tag),
    Gci(Tag, Tag),
    ConceptAssertion(Tag, u32),
    RoleAssertion(u32, u32, u32),
}

/// Decoded form of a tag.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TagValue<'c> {
    Standpoint(&'c Name),
    Individual(&'c Name),
    Concept(&'c Concept),
    Formula(&'c Formula),
}

pub(crate) struct Context {
    pub standpoints: Vec<Name>,
    pub individuals: Vec<Name>,
    pub roles: Vec<Name>,
    pub concepts: Vec<Concept>,
    pub formulas: Vec<Formula>,
    pub size: usize,
    concept_index: HashMap<Concept, u32>,
    formula_index: HashMap<Formula, u32>,
    sp_index: HashMap<Name, u32>,

    pub concept_kind: Vec<ConceptKind>,
    pub formula_kind: Vec<FormulaKind>,
    /// Per concept tag: `(other, conjunction)` for every `C ⊓ D` in the closure.
    pub conj: Vec<Vec<(Tag, Tag)>>,
    /// Per concept tag `C`: `(role, ∃R.C)` for every such term in the closure.
    pub exists_by_filler: Vec<Vec<(u32, Tag)>>,
    /// Per role: `(filler, ∃R.C)`.
    pub exists_by_role: Vec<Vec<(Tag, Tag)>>,
    /// Per concept tag: GCI formulas with that left-hand side.
    pub gci_by_lhs: Vec<Vec<Tag>>,
    /// Per standpoint: sharpening formulas with that lower standpoint.
    pub sharpenings_by_lower: Vec<Vec<Tag>>,
    /// Per standpoint `s`: `(□_s Φ, Φ)` for concepts and formulas.
    pub box_by_sp: Vec<Vec<(Tag, Tag)>>,
    pub cassert_by_ind: Vec<Vec<Tag>>,
    pub rassert_by_subject: Vec<Vec<Tag>>,
    pub rassert_by_object: Vec<Vec<Tag>>,
    /// Individual tags, sharpenings and boxed formulas: the tags `R_g` spreads.
    pub g_tags: Vec<Tag>,
    /// Tags of the axioms of the knowledge base itself.
    pub kb_axioms: Vec<Tag>,
}

impl Context {
    pub fn new(kb: &KnowledgeBase) -> Context {
        let sig = signature(kb);
        let standpoints: Vec<Name> = sig.standpoints.iter().cloned().collect();
        let individuals: Vec<Name> = sig.individuals.iter().cloned().collect();
        let roles: Vec<Name> = sig.roles.iter().cloned().collect();
        let concepts: Vec<Concept> = sig.concepts.iter().cloned().collect();
        let formulas: Vec<Formula> = sig.subformulas.iter().cloned().collect();

        let sp_index: HashMap<Name, u32> = standpoints.iter().enumerate().map(|(i, s)| (s.clone(), i as u32)).collect();
        let ind_index: HashMap<Name, u32> = individuals.iter().enumerate().map(|(i, s)| (s.clone(), i as u32)).collect();
        let role_index: HashMap<Name, u32> = roles.iter().enumerate().map(|(i, s)| (s.clone(), i as u32)).collect();

        let (ns, ni, nc) = (standpoints.len() as u32, individuals.len() as u32, concepts.len() as u32);
        let concept_base = ns + ni;
        let formula_base = concept_base + nc;
        let concept_index: HashMap<Concept, u32> =
            concepts.iter().enumerate().map(|(i, c)| (c.clone(), concept_base + i as u32)).collect();
        let formula_index: HashMap<Formula, u32> =
            formulas.iter().enumerate().map(|(i, f)| (f.clone(), formula_base + i as u32)).collect();

        let ctag = |c: &Concept| concept_index[c];
        let concept_kind: Vec<ConceptKind> = concepts
            .iter()
            .map(|c| match c {
                Concept::Top => ConceptKind::Top,
                Concept::Bot => ConceptKind::Bot,
                Concept::Atom(_) => ConceptKind::Atom,
                Concept::And(l, r) => ConceptKind::And(ctag(l), ctag(r)),
                Concept::Exists(r, f) => ConceptKind::Exists(role_index[r], ctag(f)),
                Concept::Modal(m, f) => ConceptKind::Modal(m.mode, sp_index[&m.standpoint], ctag(f)),
            })
            .collect();
        let body_tag = |b: &Body| formula_index[&Formula::Body(b.clone())];
        let formula_kind: Vec<FormulaKind> = formulas
            .iter()
            .map(|f| match f {
                Formula::Axiom(Axiom::Sharpening { lower, upper }) => {
                    FormulaKind::Sharpening(sp_index[lower], sp_index[upper])
                }
                Formula::Axiom(Axiom::Modal { body, modality }) => {
                    FormulaKind::Modal(modality.mode, sp_index[&modality.standpoint], body_tag(body))
                }
                Formula::Body(Body::Gci { lhs, rhs }) => FormulaKind::Gci(ctag(lhs), ctag(rhs)),
                Formula::Body(Body::ConceptAssertion { concept, individual }) => {
                    FormulaKind::ConceptAssertion(ctag(concept), ind_index[individual])
                }
                Formula::Body(Body::RoleAssertion { role, subject, object }) => {
                    FormulaKind::RoleAssertion(role_index[role], ind_index[subject], ind_index[object])
                }
            })
            .collect();

        let mut ctx = Context {
            size: sig.size,
            conj: vec![Vec::new(); concepts.len()],
            exists_by_filler: vec![Vec::new(); concepts.len()],
            exists_by_role: vec![Vec::new(); roles.len()],
            gci_by_lhs: vec![Vec::new(); concepts.len()],
            sharpenings_by_lower: vec![Vec::new(); standpoints.len()],
            box_by_sp: vec![Vec::new(); standpoints.len()],
            cassert_by_ind: vec![Vec::new(); individuals.len()],
            rassert_by_subject: vec![Vec::new(); individuals.len()],
            rassert_by_object: vec![Vec::new(); individuals.len()],
            g_tags: (ns..ns + ni).collect(),
            kb_axioms: kb.iter().map(|a| formula_index[&Formula::Axiom(a.clone())]).collect(),
            standpoints,
            individuals,
            roles,
            concepts,
            formulas,
            concept_index,
            formula_index,
            sp_index,
            concept_kind,
            formula_kind,
        };

        for i in 0..ctx.concepts.len() {
            let tag = concept_base + i as u32;
            match ctx.concept_kind[i] {
                ConceptKind::And(l, r) => {
                    ctx.conj[(l - concept_base) as usize].push((r, tag));
                    if l != r {
                        ctx.conj[(r - concept_base) as usize].push((l, tag));
                    }
                }
                ConceptKind::Exists(role, f) => {
                    ctx.exists_by_filler[(f - concept_base) as usize].push((role, tag));
                    ctx.exists_by_role[role as usize].push((f, tag));
                }
                ConceptKind::Modal(Mode::Box, s, f) => ctx.box_by_sp[s as usize].push((tag, f)),
                _ => {}
            }
        }
        for i in 0..ctx.formulas.len() {
            let tag = formula_base + i as u32;
            match ctx.formula_kind[i] {
                FormulaKind::Sharpening(lo, _) => {
                    ctx.sharpenings_by_lower[lo as usize].push(tag);
                    ctx.g_tags.push(tag);
                }
                FormulaKind::Modal(Mode::Box, s, body) => {
                    ctx.box_by_sp[s as usize].push((tag, body));
                    ctx.g_tags.push(tag);
                }
                FormulaKind::Modal(Mode::Diamond, ..) => {}
                FormulaKind::Gci(l, _) => ctx.gci_by_lhs[(l - concept_base) as usize].push(tag),
                FormulaKind::ConceptAssertion(_, a) => ctx.cassert_by_ind[a as usize].push(tag),
                FormulaKind::RoleAssertion(_, a, b) => {
                    ctx.rassert_by_subject[a as usize].push(tag);
                    ctx.rassert_by_object[b as usize].push(tag);
                }
            }
        }
        ctx
    }

    pub fn num_tags(&self) -> usize {
        self.standpoints.len() + self.individuals.len() + self.concepts.len() + self.formulas.len()
    }

    pub fn num_standpoints(&self) -> usize {
        self.standpoints.len()
    }

    pub fn individual_tag(&self, i: u32) -> Tag {
        self.standpoints.len() as u32 + i
    }

    fn concept_base(&self) -> u32 {
        (self.standpoints.len() + self.individuals.len()) as u32
    }

    fn formula_base(&self) -> u32 {
        self.concept_base() + self.concepts.len() as u32
    }

    pub fn universal(&self) -> u32 {
        self.sp_index[UNIVERSAL]
    }

    pub fn concept_tag(&self, c: &Concept) -> Option<Tag> {
        self.concept_index.get(c).copied()
    }

    pub fn formula_tag(&self, f: &Formula) -> Option<Tag> {
        self.formula_index.get(f).copied()
    }

    pub fn top(&self) -> Tag {
        self.concept_index[&Concept::Top]
    }

    pub fn bot(&self) -> Option<Tag> {
        self.concept_tag(&Concept::Bot)
    }

    pub fn as_concept(&self, t: Tag) -> Option<usize> {
        let base = self.concept_base();
        (t >= base && t < self.formula_base()).then(|| (t - base) as usize)
    }

    pub fn as_formula(&self, t: Tag) -> Option<usize> {
        let base = self.formula_base();
        (t >= base).then(|| (t - base) as usize)
    }

    pub fn as_individual(&self, t: Tag) -> Option<u32> {
        let ns = self.standpoints.len() as u32;
        (t >= ns && t < self.concept_base()).then(|| t - ns)
    }

    pub fn decode(&self, t: Tag) -> TagValue<'_> {
        let ns = self.standpoints.len();
        if (t as usize) < ns {
            TagValue::Standpoint(&self.standpoints[t as usize])
        } else if let Some(i) = self.as_individual(t) {
            TagValue::Individual(&self.individuals[i as usize])
        } else if let Some(c) = self.as_concept(t) {
            TagValue::Concept(&self.concepts[c])
        } else {
            TagValue::Formula(&self.formulas[self.as_formula(t).expect("tag in range")])
        }
    }

    pub fn describe(&self, t: Tag) -> String {
        match self.decode(t) {
            TagValue::Standpoint(s) | TagValue::Individual(s) => s.to_string(),
            TagValue::Concept(c) => crate::textio::concept_to_string(c),
            TagValue::Formula(Formula::Axiom(a)) => crate::textio::axiom_to_string(a),
            TagValue::Formula(Formula::Body(b)) => {
                crate::textio::axiom_to_string(&Axiom::global(b.clone())).to_string()
            }
        }
    }
}
