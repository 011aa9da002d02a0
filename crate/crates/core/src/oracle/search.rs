//! Bounded model search. For fixed sizes of Δ and Π the satisfaction
//! conditions are ground into a propositional circuit and handed to the CDCL
//! solver; a satisfying assignment is decoded into a structure.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::sat::{Lit, Outcome, Solver};
use super::{Interpretation, OracleError, StandpointStructure};
use crate::syntax::{name, Axiom, Body, Concept, KnowledgeBase, Mode, Name, Vocabulary, UNIVERSAL};

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub max_domain: usize,
    pub max_precisifications: usize,
    /// Conflicts allowed per solver call before giving up.
    pub budget: u64,
    /// Require `σ(*) = Π`. When false, `σ(*)` is any non-empty subset.
    pub universal_is_everything: bool,
}

impl SearchConfig {
    pub fn new(max_domain: usize, max_precisifications: usize) -> Self {
        SearchConfig { max_domain, max_precisifications, budget: 2_000_000, universal_is_everything: true }
    }
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig::new(4, 4)
    }
}

/// Smallest model of `kb` within the bounds, or `None` if there is none.
pub fn search_model(
    kb: &KnowledgeBase,
    max_domain: usize,
    max_precisifications: usize,
) -> Result<Option<StandpointStructure>, OracleError> {
    search_model_with(kb, None, &SearchConfig::new(max_domain, max_precisifications))
}

/// Like [`search_model`], additionally requiring `refuted` to be false in the
/// model when given.
pub fn search_model_with(
    kb: &KnowledgeBase,
    refuted: Option<&Axiom>,
    config: &SearchConfig,
) -> Result<Option<StandpointStructure>, OracleError> {
    if config.max_domain == 0 || config.max_precisifications == 0 {
        return Ok(None);
    }
    // Model existence is monotone in both bounds (elements and
    // precisifications can be duplicated), so one call at the largest sizes
    // settles the question.
    if solve_at(kb, refuted, config.max_domain, config.max_precisifications, config)?.is_none() {
        return Ok(None);
    }
    for total in 2..=config.max_domain + config.max_precisifications {
        for n in 1..=config.max_domain {
            let Some(m) = total.checked_sub(n) else { continue };
            if m == 0 || m > config.max_precisifications {
                continue;
            }
            if let Some(found) = solve_at(kb, refuted, n, m, config)? {
                return Ok(Some(found));
            }
        }
    }
    unreachable!("a model exists at the largest bounds")
}

/// `true` when every model of `kb` within the bounds satisfies `phi`.
pub fn entails_within(kb: &KnowledgeBase, phi: &Axiom, config: &SearchConfig) -> Result<bool, OracleError> {
    if config.max_domain == 0 || config.max_precisifications == 0 {
        return Ok(true);
    }
    Ok(solve_at(kb, Some(phi), config.max_domain, config.max_precisifications, config)?.is_none())
}

fn solve_at(
    kb: &KnowledgeBase,
    refuted: Option<&Axiom>,
    n: usize,
    m: usize,
    config: &SearchConfig,
) -> Result<Option<StandpointStructure>, OracleError> {
    let mut vocab = kb.vocabulary();
    if let Some(phi) = refuted {
        phi.names(&mut vocab);
    }
    let mut g = Grounding::new(&vocab, n, m, config.universal_is_everything);
    for ax in kb {
        let l = g.axiom(ax);
        g.assert(l);
    }
    if let Some(phi) = refuted {
        let l = g.axiom(phi);
        g.assert(!l);
    }
    match g.solver.solve(config.budget) {
        Outcome::Unsat => Ok(None),
        Outcome::Unknown => Err(OracleError::BudgetExceeded { budget: config.budget }),
        Outcome::Sat => {
            let s = g.decode(&vocab);
            debug_assert!(s.validate(config.universal_is_everything).is_ok());
            debug_assert!(s.satisfies(kb).unwrap_or(false));
            Ok(Some(s))
        }
    }
}

struct Grounding {
    solver: Solver,
    n: usize,
    m: usize,
    tru: Lit,
    sigma: BTreeMap<Name, Vec<Lit>>,
    atoms: HashMap<Name, Vec<Lit>>,
    roles: HashMap<Name, Vec<Lit>>,
    individuals: BTreeMap<Name, Vec<Lit>>,
    ands: HashMap<Vec<Lit>, Lit>,
    concepts: HashMap<Concept, Vec<Lit>>,
}

impl Grounding {
    fn new(vocab: &Vocabulary, n: usize, m: usize, universal_is_everything: bool) -> Self {
        let mut solver = Solver::new();
        let tru = Lit::new(solver.new_var(), true);
        solver.add_clause(&[tru]);
        let mut g = Grounding {
            solver,
            n,
            m,
            tru,
            sigma: BTreeMap::new(),
            atoms: HashMap::new(),
            roles: HashMap::new(),
            individuals: BTreeMap::new(),
            ands: HashMap::new(),
            concepts: HashMap::new(),
        };
        let mut standpoints: BTreeSet<Name> = vocab.standpoints.clone();
        standpoints.insert(name(UNIVERSAL));
        for s in standpoints {
            let lits: Vec<Lit> = if universal_is_everything && &*s == UNIVERSAL {
                vec![tru; m]
            } else {
                (0..m).map(|_| g.var()).collect()
            };
            g.solver.add_clause(&lits);
            g.sigma.insert(s, lits);
        }
        for a in &vocab.concepts {
            let lits = (0..m * n).map(|_| g.var()).collect();
            g.atoms.insert(a.clone(), lits);
        }
        for r in &vocab.roles {
            let lits = (0..m * n * n).map(|_| g.var()).collect();
            g.roles.insert(r.clone(), lits);
        }
        // The i-th individual is mapped to one of the first i+1 elements,
        // which loses no model up to renaming of elements.
        for (i, a) in vocab.individuals.iter().enumerate() {
            let lits: Vec<Lit> = (0..n).map(|d| if d <= i { g.var() } else { !tru }).collect();
            g.solver.add_clause(&lits);
            for d in 0..n {
                for e in d + 1..n {
                    g.solver.add_clause(&[!lits[d], !lits[e]]);
                }
            }
            g.individuals.insert(a.clone(), lits);
        }
        g
    }

    fn var(&mut self) -> Lit {
        Lit::new(self.solver.new_var(), true)
    }

    fn assert(&mut self, l: Lit) {
        self.solver.add_clause(&[l]);
    }

    fn and(&mut self, lits: impl IntoIterator<Item = Lit>) -> Lit {
        let mut xs = Vec::new();
        for l in lits {
            if l == !self.tru {
                return !self.tru;
            }
            if l != self.tru {
                xs.push(l);
            }
        }
        xs.sort_unstable();
        xs.dedup();
        if xs.windows(2).any(|w| w[0] == !w[1]) {
            return !self.tru;
        }
        match xs.len() {
            0 => self.tru,
            1 => xs[0],
            _ => {
                if let Some(&g) = self.ands.get(&xs) {
                    return g;
                }
                let g = self.var();
                for &x in &xs {
                    self.solver.add_clause(&[!g, x]);
                }
                let mut long: Vec<Lit> = xs.iter().map(|&x| !x).collect();
                long.push(g);
                self.solver.add_clause(&long);
                self.ands.insert(xs, g);
                g
            }
        }
    }

    fn or(&mut self, lits: impl IntoIterator<Item = Lit>) -> Lit {
        let neg: Vec<Lit> = lits.into_iter().map(|l| !l).collect();
        !self.and(neg)
    }

    fn implies(&mut self, a: Lit, b: Lit) -> Lit {
        self.or([!a, b])
    }

    /// Literals for `c` indexed by `p * n + d`.
    fn concept(&mut self, c: &Concept) -> Vec<Lit> {
        if let Some(v) = self.concepts.get(c) {
            return v.clone();
        }
        let (n, m) = (self.n, self.m);
        let out: Vec<Lit> = match c {
            Concept::Top => vec![self.tru; n * m],
            Concept::Bot => vec![!self.tru; n * m],
            Concept::Atom(a) => self.atoms[a].clone(),
            Concept::And(l, r) => {
                let l = self.concept(l);
                let r = self.concept(r);
                (0..n * m).map(|i| self.and([l[i], r[i]])).collect()
            }
            Concept::Exists(role, filler) => {
                let f = self.concept(filler);
                let rel = self.roles[role].clone();
                let mut out = Vec::with_capacity(n * m);
                for p in 0..m {
                    for d in 0..n {
                        let edges: Vec<Lit> =
                            (0..n).map(|e| self.and([rel[(p * n + d) * n + e], f[p * n + e]])).collect();
                        out.push(self.or(edges));
                    }
                }
                out
            }
            Concept::Modal(modality, inner) => {
                let e = self.concept(inner);
                let sig = self.sigma[&modality.standpoint].clone();
                let per_element: Vec<Lit> = (0..n)
                    .map(|d| {
                        let terms: Vec<Lit> = (0..m)
                            .map(|q| match modality.mode {
                                Mode::Box => self.implies(sig[q], e[q * n + d]),
                                Mode::Diamond => self.and([sig[q], e[q * n + d]]),
                            })
                            .collect();
                        match modality.mode {
                            Mode::Box => self.and(terms),
                            Mode::Diamond => self.or(terms),
                        }
                    })
                    .collect();
                (0..m).flat_map(|_| per_element.iter().copied()).collect()
            }
        };
        self.concepts.insert(c.clone(), out.clone());
        out
    }

    fn body_at(&mut self, p: usize, body: &Body) -> Lit {
        let n = self.n;
        match body {
            Body::Gci { lhs, rhs } => {
                let l = self.concept(lhs);
                let r = self.concept(rhs);
                let each: Vec<Lit> = (0..n).map(|d| self.implies(l[p * n + d], r[p * n + d])).collect();
                self.and(each)
            }
            Body::ConceptAssertion { concept, individual } => {
                let c = self.concept(concept);
                let ind = self.individuals[individual].clone();
                let each: Vec<Lit> = (0..n).map(|d| self.and([ind[d], c[p * n + d]])).collect();
                self.or(each)
            }
            Body::RoleAssertion { role, subject, object } => {
                let rel = self.roles[role].clone();
                let a = self.individuals[subject].clone();
                let b = self.individuals[object].clone();
                let mut each = Vec::new();
                for d in 0..n {
                    for e in 0..n {
                        each.push(self.and([a[d], b[e], rel[(p * n + d) * n + e]]));
                    }
                }
                self.or(each)
            }
        }
    }

    fn axiom(&mut self, ax: &Axiom) -> Lit {
        match ax {
            Axiom::Sharpening { lower, upper } => {
                let lo = self.sigma[lower].clone();
                let up = self.sigma[upper].clone();
                let each: Vec<Lit> = (0..self.m).map(|p| self.implies(lo[p], up[p])).collect();
                self.and(each)
            }
            Axiom::Modal { body, modality } => {
                let sig = self.sigma[&modality.standpoint].clone();
                let each: Vec<Lit> = (0..self.m)
                    .map(|p| {
                        let b = self.body_at(p, body);
                        match modality.mode {
                            Mode::Box => self.implies(sig[p], b),
                            Mode::Diamond => self.and([sig[p], b]),
                        }
                    })
                    .collect();
                match modality.mode {
                    Mode::Box => self.and(each),
                    Mode::Diamond => self.or(each),
                }
            }
        }
    }

    fn value(&self, l: Lit) -> bool {
        self.solver.model_value(l.var()) == l.is_positive()
    }

    fn decode(&self, vocab: &Vocabulary) -> StandpointStructure {
        let (n, m) = (self.n, self.m);
        let sigma = self
            .sigma
            .iter()
            .map(|(s, lits)| (s.clone(), (0..m).filter(|&p| self.value(lits[p])).collect()))
            .collect();
        let gamma = (0..m)
            .map(|p| Interpretation {
                concepts: vocab
                    .concepts
                    .iter()
                    .map(|a| (a.clone(), (0..n).filter(|&d| self.value(self.atoms[a][p * n + d])).collect()))
                    .collect(),
                roles: vocab
                    .roles
                    .iter()
                    .map(|r| {
                        let rel = &self.roles[r];
                        let pairs = (0..n)
                            .flat_map(|d| (0..n).map(move |e| (d, e)))
                            .filter(|&(d, e)| self.value(rel[(p * n + d) * n + e]))
                            .collect();
                        (r.clone(), pairs)
                    })
                    .collect(),
            })
            .collect();
        let individuals = self
            .individuals
            .iter()
            .map(|(a, lits)| (a.clone(), (0..n).find(|&d| self.value(lits[d])).expect("one-hot")))
            .collect();
        StandpointStructure { domain: n, precisifications: m, sigma, gamma, individuals }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::textio::{parse_axiom, parse_kb};

    fn kb(s: &str) -> KnowledgeBase {
        parse_kb(s).unwrap()
    }

    #[test]
    fn empty_kb_has_smallest_model() {
        let s = search_model(&KnowledgeBase::new(), 4, 4).unwrap().unwrap();
        assert_eq!((s.domain, s.precisifications), (1, 1));
    }

    #[test]
    fn unsatisfiable() {
        assert!(search_model(&kb("D(s)[A(a)]; B(s)[A <: Bot];"), 4, 4).unwrap().is_none());
        assert!(search_model(&kb("Top <: Bot;"), 2, 2).unwrap().is_none());
    }

    #[test]
    fn tumour_example() {
        let k = kb("B(TT)[Tumour <: Tissue]; Tissue & Process <: Bot; D(*)[Tumour & Process <: Bot];");
        let s = search_model(&k, 2, 2).unwrap().unwrap();
        assert!(s.satisfies(&k).unwrap());
    }

    #[test]
    fn needs_two_elements_and_two_precisifications() {
        let k = kb("A(a); A <: ex R.B; A & B <: Bot; D(s)[C(a)]; D(s)[X(a)]; C & X <: Bot;");
        let s = search_model(&k, 4, 4).unwrap().unwrap();
        assert_eq!((s.domain, s.precisifications), (2, 2));
        assert!(s.satisfies(&k).unwrap());
    }

    #[test]
    fn entailment_within_bounds() {
        let k = kb("B(TT)[Tumour(b)]; B(TT)[Tumour <: Tissue];");
        let cfg = SearchConfig::new(3, 3);
        assert!(entails_within(&k, &parse_axiom("B(TT)[Tissue(b)]").unwrap(), &cfg).unwrap());
        assert!(!entails_within(&k, &parse_axiom("B(*)[Tissue(b)]").unwrap(), &cfg).unwrap());
        assert!(entails_within(&k, &parse_axiom("D(*)[Tissue(b)]").unwrap(), &cfg).unwrap());
    }

    #[test]
    fn relaxed_universal() {
        // With σ(*) = Π the diamond forces A everywhere to meet B somewhere.
        let k = kb("D(*)[A(a)]; B(s)[A <: Bot]; s <= *;");
        assert!(search_model(&k, 2, 2).unwrap().is_some());
        let k = kb("B(*)[A(a)]; D(s)[A <: Bot]; D(s)[Top <: Top];");
        assert!(search_model(&k, 2, 2).unwrap().is_none());
        let relaxed = SearchConfig { universal_is_everything: false, ..SearchConfig::new(2, 2) };
        assert!(search_model_with(&k, None, &relaxed).unwrap().is_some());
    }
}
