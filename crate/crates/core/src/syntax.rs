//! Abstract syntax of Standpoint EL knowledge bases.
//!
//! Concepts, axioms and knowledge bases are plain immutable values. Names are
//! reference-counted strings so that cloning a knowledge base is cheap and the
//! values can be shared between threads.
//!
//! The four vocabularies (concept, role, individual and standpoint names) are
//! separated by syntactic position only: `Tumour` may name a concept and a role
//! in the same knowledge base.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::fresh::FreshNames;

/// A concept, role, individual or standpoint name.
pub type Name = Arc<str>;

/// The universal standpoint `*`.
pub const UNIVERSAL: &str = "*";

/// Prefix reserved for names invented by the reasoner.
pub const RESERVED_PREFIX: &str = "__f";

pub fn name(s: &str) -> Name {
    Arc::from(s)
}

pub fn universal() -> Name {
    name(UNIVERSAL)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    Box,
    Diamond,
}

impl Mode {
    /// `□ᵈ = ◇` and `◇ᵈ = □`.
    pub fn dual(self) -> Mode {
        match self {
            Mode::Box => Mode::Diamond,
            Mode::Diamond => Mode::Box,
        }
    }
}

/// A standpoint operator `□_s` or `◇_s`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Modality {
    pub mode: Mode,
    pub standpoint: Name,
}

impl Modality {
    pub fn boxed(standpoint: impl Into<Name>) -> Self {
        Modality { mode: Mode::Box, standpoint: standpoint.into() }
    }

    pub fn diamond(standpoint: impl Into<Name>) -> Self {
        Modality { mode: Mode::Diamond, standpoint: standpoint.into() }
    }

    /// `□_*`, the modality of an axiom written without one.
    pub fn global() -> Self {
        Modality::boxed(universal())
    }

    pub fn is_global(&self) -> bool {
        self.mode == Mode::Box && &*self.standpoint == UNIVERSAL
    }

    pub fn dual(&self) -> Self {
        Modality { mode: self.mode.dual(), standpoint: self.standpoint.clone() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Concept {
    Top,
    Bot,
    Atom(Name),
    And(Box<Concept>, Box<Concept>),
    Exists(Name, Box<Concept>),
    Modal(Modality, Box<Concept>),
}

impl Concept {
    pub fn atom(n: &str) -> Concept {
        Concept::Atom(name(n))
    }

    pub fn and(left: Concept, right: Concept) -> Concept {
        Concept::And(Box::new(left), Box::new(right))
    }

    pub fn exists(role: impl Into<Name>, filler: Concept) -> Concept {
        Concept::Exists(role.into(), Box::new(filler))
    }

    pub fn boxed(standpoint: impl Into<Name>, inner: Concept) -> Concept {
        Concept::Modal(Modality::boxed(standpoint), Box::new(inner))
    }

    pub fn diamond(standpoint: impl Into<Name>, inner: Concept) -> Concept {
        Concept::Modal(Modality::diamond(standpoint), Box::new(inner))
    }

    /// Number of constructor nodes.
    pub fn size(&self) -> usize {
        match self {
            Concept::Top | Concept::Bot | Concept::Atom(_) => 1,
            Concept::And(l, r) => 1 + l.size() + r.size(),
            Concept::Exists(_, c) | Concept::Modal(_, c) => 1 + c.size(),
        }
    }

    /// Token count: names and connectives.
    pub fn tokens(&self) -> usize {
        match self {
            Concept::Top | Concept::Bot | Concept::Atom(_) => 1,
            Concept::And(l, r) => 1 + l.tokens() + r.tokens(),
            Concept::Exists(_, c) | Concept::Modal(_, c) => 2 + c.tokens(),
        }
    }

    /// A concept name or `⊤`.
    pub fn is_basic(&self) -> bool {
        matches!(self, Concept::Top | Concept::Atom(_))
    }

    pub fn is_modalised(&self) -> bool {
        matches!(self, Concept::Modal(..))
    }

    /// Calls `f` on this term and every subterm, parents first.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Concept)) {
        f(self);
        match self {
            Concept::Top | Concept::Bot | Concept::Atom(_) => {}
            Concept::And(l, r) => {
                l.visit(f);
                r.visit(f);
            }
            Concept::Exists(_, c) | Concept::Modal(_, c) => c.visit(f),
        }
    }
}

/// The part of an axiom below its outer standpoint operator.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Body {
    Gci { lhs: Concept, rhs: Concept },
    ConceptAssertion { concept: Concept, individual: Name },
    RoleAssertion { role: Name, subject: Name, object: Name },
}

impl Body {
    pub fn gci(lhs: Concept, rhs: Concept) -> Body {
        Body::Gci { lhs, rhs }
    }

    pub fn concept_assertion(concept: Concept, individual: impl Into<Name>) -> Body {
        Body::ConceptAssertion { concept, individual: individual.into() }
    }

    pub fn role_assertion(
        role: impl Into<Name>,
        subject: impl Into<Name>,
        object: impl Into<Name>,
    ) -> Body {
        Body::RoleAssertion { role: role.into(), subject: subject.into(), object: object.into() }
    }

    fn tokens(&self) -> usize {
        match self {
            Body::Gci { lhs, rhs } => lhs.tokens() + 1 + rhs.tokens(),
            Body::ConceptAssertion { concept, .. } => concept.tokens() + 1,
            Body::RoleAssertion { .. } => 3,
        }
    }

    pub fn concepts(&self) -> impl Iterator<Item = &Concept> {
        let (a, b) = match self {
            Body::Gci { lhs, rhs } => (Some(lhs), Some(rhs)),
            Body::ConceptAssertion { concept, .. } => (Some(concept), None),
            Body::RoleAssertion { .. } => (None, None),
        };
        a.into_iter().chain(b)
    }
}

/// Ordering is by kind first (sharpenings, GCIs, concept assertions, role
/// assertions), which gives the canonical serialisation order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axiom {
    Sharpening { lower: Name, upper: Name },
    Modal { body: Body, modality: Modality },
}

impl Axiom {
    pub fn sharpening(lower: impl Into<Name>, upper: impl Into<Name>) -> Axiom {
        Axiom::Sharpening { lower: lower.into(), upper: upper.into() }
    }

    pub fn modal(modality: Modality, body: Body) -> Axiom {
        Axiom::Modal { body, modality }
    }

    pub fn boxed(standpoint: impl Into<Name>, body: Body) -> Axiom {
        Axiom::modal(Modality::boxed(standpoint), body)
    }

    pub fn diamond(standpoint: impl Into<Name>, body: Body) -> Axiom {
        Axiom::modal(Modality::diamond(standpoint), body)
    }

    /// An axiom under `□_*`.
    pub fn global(body: Body) -> Axiom {
        Axiom::modal(Modality::global(), body)
    }

    pub fn tokens(&self) -> usize {
        match self {
            Axiom::Sharpening { .. } => 3 + 1,
            Axiom::Modal { body, .. } => 2 + body.tokens() + 1,
        }
    }

    pub fn is_sharpening(&self) -> bool {
        matches!(self, Axiom::Sharpening { .. })
    }

    pub fn is_gci(&self) -> bool {
        matches!(self, Axiom::Modal { body: Body::Gci { .. }, .. })
    }

    pub fn is_assertion(&self) -> bool {
        matches!(
            self,
            Axiom::Modal { body: Body::ConceptAssertion { .. } | Body::RoleAssertion { .. }, .. }
        )
    }

    /// Every name of the axiom, tagged with its vocabulary.
    pub fn names(&self, out: &mut Vocabulary) {
        match self {
            Axiom::Sharpening { lower, upper } => {
                out.standpoints.insert(lower.clone());
                out.standpoints.insert(upper.clone());
            }
            Axiom::Modal { body, modality } => {
                out.standpoints.insert(modality.standpoint.clone());
                match body {
                    Body::ConceptAssertion { individual, .. } => {
                        out.individuals.insert(individual.clone());
                    }
                    Body::RoleAssertion { role, subject, object } => {
                        out.roles.insert(role.clone());
                        out.individuals.insert(subject.clone());
                        out.individuals.insert(object.clone());
                    }
                    Body::Gci { .. } => {}
                }
                for c in body.concepts() {
                    c.visit(&mut |sub| match sub {
                        Concept::Atom(a) => {
                            out.concepts.insert(a.clone());
                        }
                        Concept::Exists(r, _) => {
                            out.roles.insert(r.clone());
                        }
                        Concept::Modal(m, _) => {
                            out.standpoints.insert(m.standpoint.clone());
                        }
                        _ => {}
                    });
                }
            }
        }
    }
}

/// An element of the subformula set: either a full axiom or the body of a
/// modalised axiom with its outer operator stripped.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Axiom(Axiom),
    Body(Body),
}

/// Names used by a knowledge base, one set per vocabulary.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Vocabulary {
    pub concepts: BTreeSet<Name>,
    pub roles: BTreeSet<Name>,
    pub individuals: BTreeSet<Name>,
    pub standpoints: BTreeSet<Name>,
}

impl Vocabulary {
    pub fn all_names(&self) -> impl Iterator<Item = &Name> {
        self.concepts
            .iter()
            .chain(&self.roles)
            .chain(&self.individuals)
            .chain(&self.standpoints)
    }
}

/// A knowledge base `⟨S, T, A⟩`, stored as one ordered set of axioms.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct KnowledgeBase {
    axioms: BTreeSet<Axiom>,
}

impl KnowledgeBase {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, axiom: Axiom) -> bool {
        self.axioms.insert(axiom)
    }

    pub fn remove(&mut self, axiom: &Axiom) -> bool {
        self.axioms.remove(axiom)
    }

    pub fn contains(&self, axiom: &Axiom) -> bool {
        self.axioms.contains(axiom)
    }

    pub fn len(&self) -> usize {
        self.axioms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.axioms.is_empty()
    }

    pub fn iter(&self) -> std::collections::btree_set::Iter<'_, Axiom> {
        self.axioms.iter()
    }

    pub fn sbox(&self) -> impl Iterator<Item = &Axiom> {
        self.axioms.iter().filter(|a| a.is_sharpening())
    }

    pub fn tbox(&self) -> impl Iterator<Item = &Axiom> {
        self.axioms.iter().filter(|a| a.is_gci())
    }

    pub fn abox(&self) -> impl Iterator<Item = &Axiom> {
        self.axioms.iter().filter(|a| a.is_assertion())
    }

    pub fn union(&self, other: &KnowledgeBase) -> KnowledgeBase {
        let mut out = self.clone();
        out.axioms.extend(other.axioms.iter().cloned());
        out
    }

    /// ‖K‖: every name occurrence, connective and axiom delimiter.
    pub fn size(&self) -> usize {
        self.axioms.iter().map(Axiom::tokens).sum()
    }

    pub fn vocabulary(&self) -> Vocabulary {
        let mut v = Vocabulary::default();
        for ax in &self.axioms {
            ax.names(&mut v);
        }
        v
    }

    pub fn signature(&self) -> Signature {
        signature(self)
    }

    pub fn is_normal_form(&self) -> bool {
        is_normal_form(self)
    }
}

impl FromIterator<Axiom> for KnowledgeBase {
    fn from_iter<I: IntoIterator<Item = Axiom>>(iter: I) -> Self {
        KnowledgeBase { axioms: iter.into_iter().collect() }
    }
}

impl Extend<Axiom> for KnowledgeBase {
    fn extend<I: IntoIterator<Item = Axiom>>(&mut self, iter: I) {
        self.axioms.extend(iter)
    }
}

impl<'a> IntoIterator for &'a KnowledgeBase {
    type Item = &'a Axiom;
    type IntoIter = std::collections::btree_set::Iter<'a, Axiom>;

    fn into_iter(self) -> Self::IntoIter {
        self.axioms.iter()
    }
}

/// `ST_K`, `IN_K`, `BC_K`, `C_K`, `SF_K` and ‖K‖.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Signature {
    pub standpoints: BTreeSet<Name>,
    pub individuals: BTreeSet<Name>,
    pub roles: BTreeSet<Name>,
    pub basic_concepts: BTreeSet<Concept>,
    pub concepts: BTreeSet<Concept>,
    pub subformulas: BTreeSet<Formula>,
    pub size: usize,
}

pub fn signature(kb: &KnowledgeBase) -> Signature {
    let vocab = kb.vocabulary();
    let mut standpoints = vocab.standpoints;
    standpoints.insert(universal());

    let mut basic_concepts: BTreeSet<Concept> =
        vocab.concepts.iter().map(|c| Concept::Atom(c.clone())).collect();
    basic_concepts.insert(Concept::Top);

    let mut concepts = basic_concepts.clone();
    let mut subformulas = BTreeSet::new();
    for ax in kb.iter() {
        subformulas.insert(Formula::Axiom(ax.clone()));
        if let Axiom::Modal { body, .. } = ax {
            subformulas.insert(Formula::Body(body.clone()));
            for c in body.concepts() {
                c.visit(&mut |sub| {
                    concepts.insert(sub.clone());
                });
            }
        }
    }

    Signature {
        standpoints,
        individuals: vocab.individuals,
        roles: vocab.roles,
        basic_concepts,
        concepts,
        subformulas,
        size: kb.size(),
    }
}

fn is_name_or_top(c: &Concept) -> bool {
    c.is_basic()
}

fn is_name_or_bot(c: &Concept) -> bool {
    matches!(c, Concept::Atom(_) | Concept::Bot)
}

pub(crate) fn normal_lhs(c: &Concept) -> bool {
    match c {
        Concept::Top | Concept::Atom(_) => true,
        Concept::Exists(_, f) => is_name_or_top(f),
        Concept::And(l, r) => is_name_or_top(l) && is_name_or_top(r),
        _ => false,
    }
}

pub(crate) fn normal_rhs(c: &Concept) -> bool {
    match c {
        Concept::Bot | Concept::Atom(_) => true,
        Concept::Exists(_, f) | Concept::Modal(_, f) => is_name_or_bot(f),
        _ => false,
    }
}

pub fn is_normal_axiom(ax: &Axiom) -> bool {
    match ax {
        Axiom::Sharpening { .. } => true,
        Axiom::Modal { modality, body } => {
            modality.mode == Mode::Box
                && match body {
                    Body::Gci { lhs, rhs } => normal_lhs(lhs) && normal_rhs(rhs),
                    Body::ConceptAssertion { concept, .. } => matches!(concept, Concept::Atom(_)),
                    Body::RoleAssertion { .. } => true,
                }
        }
    }
}

pub fn is_normal_form(kb: &KnowledgeBase) -> bool {
    kb.iter().all(is_normal_axiom)
}

/// A top-level statement of a document: a single axiom or a block
/// `□_s{φ₁; …}` / `◇_s{φ₁; …}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Statement {
    Axiom(Axiom),
    Block { modality: Modality, bodies: Vec<Body> },
}

/// A knowledge base as written, possibly containing blocks.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Document {
    pub statements: Vec<Statement>,
}

impl Document {
    pub fn has_blocks(&self) -> bool {
        self.statements.iter().any(|s| matches!(s, Statement::Block { .. }))
    }

    pub fn vocabulary(&self) -> Vocabulary {
        let mut v = Vocabulary::default();
        for st in &self.statements {
            match st {
                Statement::Axiom(ax) => ax.names(&mut v),
                Statement::Block { modality, bodies } => {
                    for b in bodies {
                        Axiom::modal(modality.clone(), b.clone()).names(&mut v);
                    }
                }
            }
        }
        v
    }

    pub fn desugar(&self) -> KnowledgeBase {
        desugar_blocks(self)
    }
}

impl From<&KnowledgeBase> for Document {
    fn from(kb: &KnowledgeBase) -> Self {
        Document { statements: kb.iter().cloned().map(Statement::Axiom).collect() }
    }
}

/// Rewrites blocks into plain axioms. `□_s{Φ}` distributes the box over `Φ`;
/// `◇_s{Φ}` becomes `{v ⪯ s} ∪ {□_v φ | φ ∈ Φ}` for a fresh standpoint `v`.
pub fn desugar_blocks(doc: &Document) -> KnowledgeBase {
    let mut fresh = FreshNames::avoiding(&doc.vocabulary());
    let mut kb = KnowledgeBase::new();
    for st in &doc.statements {
        match st {
            Statement::Axiom(ax) => {
                kb.insert(ax.clone());
            }
            Statement::Block { modality, bodies } => {
                let target = match modality.mode {
                    Mode::Box => modality.standpoint.clone(),
                    Mode::Diamond => {
                        let v = fresh.standpoint();
                        kb.insert(Axiom::sharpening(v.clone(), modality.standpoint.clone()));
                        v
                    }
                };
                for b in bodies {
                    kb.insert(Axiom::boxed(target.clone(), b.clone()));
                }
            }
        }
    }
    kb
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Box => "B",
            Mode::Diamond => "D",
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gci(s: &str, l: Concept, r: Concept) -> Axiom {
        Axiom::boxed(s, Body::gci(l, r))
    }

    #[test]
    fn empty_signature() {
        let sig = signature(&KnowledgeBase::new());
        assert_eq!(sig.standpoints, [universal()].into_iter().collect());
        assert!(sig.individuals.is_empty());
        assert_eq!(sig.basic_concepts, [Concept::Top].into_iter().collect());
        assert_eq!(sig.size, 0);
    }

    #[test]
    fn signature_of_tumour_axiom() {
        let ax = gci("TT", Concept::atom("Tumour"), Concept::atom("Tissue"));
        let kb: KnowledgeBase = [ax.clone()].into_iter().collect();
        let sig = signature(&kb);
        assert_eq!(sig.standpoints, [name("*"), name("TT")].into_iter().collect());
        let expected: BTreeSet<_> =
            [Concept::Top, Concept::atom("Tumour"), Concept::atom("Tissue")].into_iter().collect();
        assert_eq!(sig.basic_concepts, expected);
        assert!(sig.basic_concepts.is_subset(&sig.concepts));
        let sf: BTreeSet<_> = [
            Formula::Axiom(ax),
            Formula::Body(Body::gci(Concept::atom("Tumour"), Concept::atom("Tissue"))),
        ]
        .into_iter()
        .collect();
        assert_eq!(sig.subformulas, sf);
    }

    #[test]
    fn nested_terms_are_in_closure() {
        let rhs = Concept::exists("R", Concept::boxed("s", Concept::and(Concept::atom("A"), Concept::Bot)));
        let kb: KnowledgeBase = [gci("*", Concept::Top, rhs.clone())].into_iter().collect();
        let sig = signature(&kb);
        let mut all = vec![];
        rhs.visit(&mut |c| all.push(c.clone()));
        for c in all {
            assert!(sig.concepts.contains(&c), "{c:?}");
        }
        assert!(sig.standpoints.contains(&name("s")));
    }

    #[test]
    fn normal_form_recognition() {
        let tumour = Concept::atom("Tumour");
        let tissue = Concept::atom("Tissue");
        let ok: KnowledgeBase = [gci("TT", tumour.clone(), tissue.clone())].into_iter().collect();
        assert!(is_normal_form(&ok));

        let diamond: KnowledgeBase =
            [Axiom::diamond("SN", Body::gci(tumour.clone(), tissue.clone()))].into_iter().collect();
        assert!(!is_normal_form(&diamond));

        let nested = gci(
            "*",
            Concept::exists("R", Concept::and(Concept::atom("A"), Concept::atom("B"))),
            Concept::atom("C"),
        );
        assert!(!is_normal_form(&[nested].into_iter().collect()));

        let rhs_shapes = [
            Concept::Bot,
            Concept::exists("R", Concept::Bot),
            Concept::diamond("s", Concept::atom("B")),
            Concept::boxed("s", Concept::Bot),
        ];
        for rhs in rhs_shapes {
            assert!(is_normal_axiom(&gci("s", Concept::and(Concept::Top, tumour.clone()), rhs)));
        }
        assert!(!is_normal_axiom(&gci("s", tumour.clone(), Concept::Top)));
        assert!(!is_normal_axiom(&Axiom::global(Body::concept_assertion(Concept::Top, "a"))));
        assert!(is_normal_axiom(&Axiom::sharpening("a", "b")));
    }

    #[test]
    fn box_block_distributes() {
        let bodies = vec![
            Body::concept_assertion(Concept::atom("Patient"), "p1"),
            Body::role_assertion("HasPart", "p1", "a"),
            Body::concept_assertion(Concept::atom("Colon"), "a"),
        ];
        let doc = Document {
            statements: vec![Statement::Block { modality: Modality::boxed("SN"), bodies: bodies.clone() }],
        };
        let kb = desugar_blocks(&doc);
        let expected: KnowledgeBase = bodies.into_iter().map(|b| Axiom::boxed("SN", b)).collect();
        assert_eq!(kb, expected);
    }

    #[test]
    fn diamond_block_introduces_fresh_standpoint() {
        let body = Body::concept_assertion(Concept::atom("Tumour"), "b");
        let doc = Document {
            statements: vec![Statement::Block { modality: Modality::diamond("SN"), bodies: vec![body.clone()] }],
        };
        let kb = desugar_blocks(&doc);
        assert_eq!(kb.len(), 2);
        let v = kb
            .sbox()
            .find_map(|a| match a {
                Axiom::Sharpening { lower, upper } if &**upper == "SN" => Some(lower.clone()),
                _ => None,
            })
            .unwrap();
        assert!(v.starts_with(RESERVED_PREFIX));
        assert!(kb.contains(&Axiom::boxed(v, body)));
    }

    #[test]
    fn desugar_is_identity_without_blocks() {
        let kb: KnowledgeBase = [
            gci("TT", Concept::atom("A"), Concept::atom("B")),
            Axiom::sharpening("TT", "SN"),
        ]
        .into_iter()
        .collect();
        let doc = Document::from(&kb);
        assert_eq!(desugar_blocks(&doc), kb);
        assert_eq!(desugar_blocks(&Document::from(&desugar_blocks(&doc))), kb);
    }

    #[test]
    fn token_size() {
        // B(TT)[Tumour <: Tissue] : modality 2, names 2, ⊑ 1, delimiter 1
        let ax = gci("TT", Concept::atom("Tumour"), Concept::atom("Tissue"));
        assert_eq!(ax.tokens(), 6);
        assert_eq!(Axiom::sharpening("a", "b").tokens(), 4);
    }
}
