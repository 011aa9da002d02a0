//! Seeded generators for test knowledge bases.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::syntax::{name, Axiom, Body, Concept, KnowledgeBase, Modality, Name};

/// Size limits for [`random_kb`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenConfig {
    pub concepts: usize,
    pub roles: usize,
    pub individuals: usize,
    /// Standpoints besides `*`.
    pub standpoints: usize,
    pub max_axioms: usize,
    /// Maximal nesting of standpoint operators inside a concept.
    pub modal_depth: usize,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig { concepts: 4, roles: 2, individuals: 2, standpoints: 3, max_axioms: 6, modal_depth: 2 }
    }
}

struct Gen<'c> {
    rng: ChaCha8Rng,
    cfg: &'c GenConfig,
}

impl Gen<'_> {
    fn pick(&mut self, prefix: &str, n: usize) -> Name {
        name(&format!("{prefix}{}", self.rng.gen_range(0..n.max(1))))
    }

    fn standpoint(&mut self) -> Name {
        if self.cfg.standpoints == 0 || self.rng.gen_bool(0.25) {
            crate::syntax::universal()
        } else {
            self.pick("s", self.cfg.standpoints)
        }
    }

    fn modality(&mut self) -> Modality {
        let s = self.standpoint();
        if self.rng.gen_bool(0.3) {
            Modality::diamond(s)
        } else {
            Modality::boxed(s)
        }
    }

    fn concept(&mut self, size: usize, modal: usize) -> Concept {
        if size <= 1 {
            return match self.rng.gen_range(0..12) {
                0 => Concept::Top,
                1 => Concept::Bot,
                _ => Concept::Atom(self.pick("A", self.cfg.concepts)),
            };
        }
        let choices: &[u8] = if modal > 0 { &[0, 1, 2] } else { &[0, 1] };
        match *choices.choose(&mut self.rng).expect("non-empty") {
            0 => {
                let l = self.rng.gen_range(1..size);
                Concept::and(self.concept(l, modal), self.concept(size - l, modal))
            }
            1 => Concept::exists(self.pick("R", self.cfg.roles), self.concept(size - 1, modal)),
            _ => {
                let m = self.modality();
                Concept::Modal(m, Box::new(self.concept(size - 1, modal - 1)))
            }
        }
    }

    fn small_concept(&mut self) -> Concept {
        let size = self.rng.gen_range(1..=4);
        self.concept(size, self.cfg.modal_depth)
    }

    fn axiom(&mut self) -> Axiom {
        let kind = self.rng.gen_range(0..10);
        if kind == 0 {
            let lower = self.standpoint();
            let upper = self.standpoint();
            return Axiom::sharpening(lower, upper);
        }
        let body = match kind {
            1..=5 => Body::gci(self.small_concept(), self.small_concept()),
            6..=8 => Body::concept_assertion(self.small_concept(), self.pick("a", self.cfg.individuals)),
            _ => Body::role_assertion(
                self.pick("R", self.cfg.roles),
                self.pick("a", self.cfg.individuals),
                self.pick("a", self.cfg.individuals),
            ),
        };
        let m = self.modality();
        Axiom::modal(m, body)
    }
}

/// A random knowledge base with between one and `max_axioms` axioms,
/// reproducible from `seed`.
pub fn random_kb(seed: u64, cfg: &GenConfig) -> KnowledgeBase {
    let mut g = Gen { rng: ChaCha8Rng::seed_from_u64(seed), cfg };
    let n = g.rng.gen_range(1..=cfg.max_axioms.max(1));
    let mut kb = KnowledgeBase::new();
    for _ in 0..n {
        let ax = g.axiom();
        kb.insert(ax);
    }
    kb
}

/// The scaling family: `k = ⌈√n⌉` standpoints `t0 ⊒ t1 ⊒ …`, the chain
/// `□_{t(i mod k)}[A_i ⊑ ∃R.A_{i+1}]` for `i < n`, and `A_0(a)`.
pub fn chain_kb(n: usize) -> KnowledgeBase {
    let k = (1..).find(|k| k * k >= n).unwrap_or(1).max(1);
    let mut kb = KnowledgeBase::new();
    for j in 0..k - 1 {
        kb.insert(Axiom::sharpening(name(&format!("t{}", j + 1)), name(&format!("t{j}"))));
    }
    let atom = |i: usize| Concept::atom(&format!("A{i}"));
    for i in 0..n {
        kb.insert(Axiom::boxed(name(&format!("t{}", i % k)), Body::gci(atom(i), Concept::exists("R", atom(i + 1)))));
    }
    kb.insert(Axiom::global(Body::concept_assertion(atom(0), "a")));
    kb
}
