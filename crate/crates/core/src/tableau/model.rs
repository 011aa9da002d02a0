//! Coherence, runs and model extraction for saturated completion graphs.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::context::{ConceptKind, Tag};
use super::graph::{CompletionGraph, Elem, Var, VarOrigin};
use super::TableauError;
use crate::oracle::{Interpretation, StandpointStructure};
use crate::syntax::{Concept, Name, Vocabulary};

/// A choice of one variable per element, indexed by element.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Run(pub Vec<Var>);

impl Run {
    pub fn get(&self, e: Elem) -> Var {
        self.0[e as usize]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunEnumeration {
    pub runs: Vec<Run>,
    /// More runs exist than the cap allowed.
    pub capped: bool,
}

/// A domain element of an extracted model: a graph element, possibly with
/// one precisification overridden to follow a different variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct Copy {
    base: Elem,
    over: Option<(usize, Var)>,
}

impl CompletionGraph {
    /// First violated coherence condition, if any.
    pub fn coherence_violation(&self) -> Option<String> {
        let ctx = &self.ctx;
        for (i, a) in ctx.individuals.iter().enumerate() {
            let tag = ctx.individual_tag(i as u32);
            let holders: Vec<Elem> = self
                .elements()
                .filter(|&e| {
                    let sys = &self.systems[e as usize];
                    !sys.vars.is_empty() && sys.tags.iter().all(|b| b.get(tag))
                })
                .collect();
            if holders.len() != 1 {
                return Some(format!("individual {a} is held by {} elements", holders.len()));
            }
        }
        let mut by_st: Vec<HashMap<Vec<u32>, Var>> = Vec::new();
        for e in self.elements() {
            let mut m = HashMap::new();
            for &x in self.variables(e) {
                m.entry(self.st_ids(e, x)).or_insert(x);
            }
            by_st.push(m);
        }
        let formula_tags: Vec<Tag> = (0..ctx.formulas.len())
            .map(|i| ctx.formula_tag(&ctx.formulas[i]).expect("interned formula"))
            .collect();
        for e in self.elements() {
            for &x in self.variables(e) {
                let st = self.st_ids(e, x);
                for e2 in self.elements() {
                    if !by_st[e2 as usize].contains_key(&st) {
                        return Some(format!(
                            "{} has no variable matching {} of {}",
                            self.element_name(e2),
                            self.var_name(x),
                            self.element_name(e)
                        ));
                    }
                    for &x2 in self.variables(e2) {
                        if self.st_ids(e2, x2) != st {
                            continue;
                        }
                        if let Some(&f) = formula_tags.iter().find(|&&f| self.has(e, x, f) && !self.has(e2, x2, f)) {
                            return Some(format!(
                                "{} of {} lacks {} held by {} of {}",
                                self.var_name(x2),
                                self.element_name(e2),
                                ctx.describe(f),
                                self.var_name(x),
                                self.element_name(e)
                            ));
                        }
                    }
                }
            }
        }
        None
    }

    pub fn is_coherent(&self) -> bool {
        self.coherence_violation().is_none()
    }

    /// Enumerates the runs of the graph by backtracking, stopping once more
    /// than `cap` runs are found.
    pub fn enumerate_runs(&self, cap: usize) -> RunEnumeration {
        let n = self.num_elements();
        let mut st_classes: Vec<Vec<u32>> = Vec::new();
        for &x in self.variables(0) {
            let st = self.st_ids(0, x);
            if !st_classes.contains(&st) {
                st_classes.push(st);
            }
        }
        let mut out = RunEnumeration { runs: Vec::new(), capped: false };
        for st in st_classes {
            let mut assignment = vec![None; n];
            if !self.runs_from(0, &st, &mut assignment, cap, &mut out) {
                break;
            }
        }
        out
    }

    /// Returns false once the cap is hit.
    fn runs_from(
        &self,
        e: usize,
        st: &[u32],
        assignment: &mut Vec<Option<Var>>,
        cap: usize,
        out: &mut RunEnumeration,
    ) -> bool {
        if e == assignment.len() {
            let run = Run(assignment.iter().map(|v| v.expect("complete")).collect());
            if !self.witnesses_existentials(&run) {
                return true;
            }
            if out.runs.len() == cap {
                out.capped = true;
                return false;
            }
            out.runs.push(run);
            return true;
        }
        if assignment[e].is_some() {
            return self.runs_from(e + 1, st, assignment, cap, out);
        }
        for &x in self.variables(e as Elem) {
            if self.st_ids(e as Elem, x) != st {
                continue;
            }
            let saved = assignment.clone();
            if self.propagate(e as Elem, x, st, assignment) && !self.runs_from(e + 1, st, assignment, cap, out) {
                return false;
            }
            *assignment = saved;
        }
        true
    }

    /// Assigns `x` to `e` and follows quasi-roles (C2).
    fn propagate(&self, e: Elem, x: Var, st: &[u32], assignment: &mut [Option<Var>]) -> bool {
        let mut stack = vec![(e, x)];
        while let Some((e, x)) = stack.pop() {
            match assignment[e as usize] {
                Some(y) if y == x => continue,
                Some(_) => return false,
                None => {}
            }
            if self.st_ids(e, x) != st {
                return false;
            }
            assignment[e as usize] = Some(x);
            for &qi in self.outgoing.get(&(e, x)).into_iter().flatten() {
                let qr = self.quasi_roles[qi];
                stack.push((qr.to, qr.to_var));
            }
        }
        true
    }

    /// C3 for a complete assignment.
    fn witnesses_existentials(&self, run: &Run) -> bool {
        let ctx = &self.ctx;
        self.elements().all(|e| {
            let x = run.get(e);
            self.systems[e as usize].tags[self.systems[e as usize].slots[&x]].ones().all(|t| {
                let Some(ConceptKind::Exists(role, filler)) = ctx.as_concept(t).map(|c| ctx.concept_kind[c]) else {
                    return true;
                };
                self.outgoing.get(&(e, x)).into_iter().flatten().any(|&qi| {
                    let qr = self.quasi_roles[qi];
                    qr.role == role && run.get(qr.to) == qr.to_var && self.has(qr.to, qr.to_var, filler)
                })
            })
        })
    }

    fn atom_tags(&self) -> Vec<(Name, Tag)> {
        let ctx = &self.ctx;
        ctx.concepts
            .iter()
            .filter_map(|c| match c {
                Concept::Atom(a) => Some((a.clone(), ctx.concept_tag(c).expect("interned concept"))),
                _ => None,
            })
            .collect()
    }

    fn empty_interpretation(&self, extra: &Vocabulary) -> Interpretation {
        let mut i = Interpretation::default();
        for (a, _) in self.atom_tags() {
            i.concepts.insert(a, BTreeSet::new());
        }
        for r in &self.ctx.roles {
            i.roles.insert(r.clone(), BTreeSet::new());
        }
        for a in &extra.concepts {
            i.concepts.entry(a.clone()).or_default();
        }
        for r in &extra.roles {
            i.roles.entry(r.clone()).or_default();
        }
        i
    }

    /// Individuals and standpoints common to both constructions. Names only
    /// in `extra` get `σ = Π`; extra individuals go to `ε_⊤`.
    fn finish(&self, mut s: StandpointStructure, extra: &Vocabulary) -> StandpointStructure {
        for (i, a) in self.ctx.individuals.iter().enumerate() {
            s.individuals.insert(a.clone(), self.individual_elements[i][0] as usize);
        }
        for a in &extra.individuals {
            s.individuals.entry(a.clone()).or_insert(0);
        }
        let all: BTreeSet<usize> = (0..s.precisifications).collect();
        for sp in &extra.standpoints {
            s.sigma.entry(sp.clone()).or_insert_with(|| all.clone());
        }
        s
    }

    /// The structure with one precisification per run, as in the quasi-model
    /// construction. It is not always a model: a `◇` witness variable may be
    /// missed by every run.
    pub fn model_from_runs(&self, runs: &[Run], extra: &Vocabulary) -> StandpointStructure {
        let ctx = &self.ctx;
        let atoms = self.atom_tags();
        let mut sigma: BTreeMap<Name, BTreeSet<usize>> =
            ctx.standpoints.iter().map(|s| (s.clone(), BTreeSet::new())).collect();
        let mut gamma = Vec::new();
        for (p, run) in runs.iter().enumerate() {
            for (s, sp) in ctx.standpoints.iter().enumerate() {
                if self.has(0, run.get(0), s as Tag) {
                    sigma.get_mut(sp).expect("standpoint").insert(p);
                }
            }
            let mut interp = self.empty_interpretation(extra);
            for (a, t) in &atoms {
                let ext: BTreeSet<usize> =
                    self.elements().filter(|&e| self.has(e, run.get(e), *t)).map(|e| e as usize).collect();
                interp.concepts.insert(a.clone(), ext);
            }
            for qr in &self.quasi_roles {
                if run.get(qr.from) == qr.from_var && run.get(qr.to) == qr.to_var {
                    let r = &ctx.roles[qr.role as usize];
                    interp.roles.get_mut(r).expect("role").insert((qr.from as usize, qr.to as usize));
                }
            }
            gamma.push(interp);
        }
        let s = StandpointStructure {
            domain: self.num_elements(),
            precisifications: runs.len(),
            sigma,
            gamma,
            individuals: BTreeMap::new(),
        };
        self.finish(s, extra)
    }

    /// A model of the knowledge base built from a saturated, clash-free graph.
    ///
    /// Precisifications are pairs `(x, i)` for every variable `x` and
    /// `i ∈ {0, 1}`, with `σ(s)` holding the pairs whose variable carries
    /// `s`. An element is read at `(x, i)` through `x` when its system has
    /// `x`, otherwise through the lowest initial variable with the same
    /// standpoints. Existential successors whose variable does not match are
    /// copied, the copy following that variable at a single precisification;
    /// the second pair per variable keeps `◇` witnesses available to copies.
    /// Fails with `Capped` once the domain would exceed `cap`.
    pub fn extract_model(&self, extra: &Vocabulary, cap: usize) -> Result<StandpointStructure, TableauError> {
        let ctx = &self.ctx;
        let nvars = self.num_variables();
        let np = 2 * nvars;
        let mut st_of: Vec<Option<Vec<u32>>> = vec![None; nvars];
        for e in self.elements() {
            for &x in self.variables(e) {
                st_of[x as usize].get_or_insert_with(|| self.st_ids(e, x));
            }
        }
        let fallback: Vec<Var> = (0..nvars)
            .map(|y| {
                let st = st_of[y].as_deref().unwrap_or(&[]);
                self.initial_vars
                    .iter()
                    .copied()
                    .find(|&x| st_of[x as usize].as_deref() == Some(st))
                    .unwrap_or(self.initial_vars[ctx.universal() as usize])
            })
            .collect();
        let prof_base = |e: Elem, q: usize| {
            let x = (q / 2) as Var;
            if self.systems[e as usize].contains_var(x) {
                x
            } else {
                fallback[x as usize]
            }
        };
        let prof = |d: &Copy, q: usize| match d.over {
            Some((p, v)) if p == q => v,
            _ => prof_base(d.base, q),
        };

        let mut domain: Vec<Copy> = self.elements().map(|e| Copy { base: e, over: None }).collect();
        let mut index: HashMap<Copy, usize> = domain.iter().enumerate().map(|(i, d)| (*d, i)).collect();
        let mut by_base: Vec<Vec<usize>> = (0..self.num_elements()).map(|e| vec![e]).collect();
        let mut i = 0;
        while i < domain.len() {
            let d = domain[i];
            for q in 0..np {
                let v = prof(&d, q);
                for &qi in self.outgoing.get(&(d.base, v)).into_iter().flatten() {
                    let qr = self.quasi_roles[qi];
                    if prof_base(qr.to, q) == qr.to_var || self.element_individual[qr.to as usize].is_some() {
                        continue;
                    }
                    let c = Copy { base: qr.to, over: Some((q, qr.to_var)) };
                    if !index.contains_key(&c) {
                        if domain.len() >= cap {
                            return Err(TableauError::Capped(cap));
                        }
                        index.insert(c, domain.len());
                        by_base[qr.to as usize].push(domain.len());
                        domain.push(c);
                    }
                }
            }
            i += 1;
        }

        let atoms = self.atom_tags();
        let mut sigma: BTreeMap<Name, BTreeSet<usize>> =
            ctx.standpoints.iter().map(|s| (s.clone(), BTreeSet::new())).collect();
        for (x, st) in st_of.iter().enumerate() {
            for &s in st.iter().flatten() {
                let ext = sigma.get_mut(&ctx.standpoints[s as usize]).expect("standpoint");
                ext.insert(2 * x);
                ext.insert(2 * x + 1);
            }
        }
        let mut gamma = Vec::with_capacity(np);
        for q in 0..np {
            let mut interp = self.empty_interpretation(extra);
            let profiles: Vec<Var> = domain.iter().map(|d| prof(d, q)).collect();
            for (a, t) in &atoms {
                let ext = domain
                    .iter()
                    .enumerate()
                    .filter(|(j, d)| self.has(d.base, profiles[*j], *t))
                    .map(|(j, _)| j)
                    .collect();
                interp.concepts.insert(a.clone(), ext);
            }
            for (j, d) in domain.iter().enumerate() {
                for &qi in self.outgoing.get(&(d.base, profiles[j])).into_iter().flatten() {
                    let qr = self.quasi_roles[qi];
                    let ext = interp.roles.get_mut(&ctx.roles[qr.role as usize]).expect("role");
                    for &k in &by_base[qr.to as usize] {
                        if profiles[k] == qr.to_var {
                            ext.insert((j, k));
                        }
                    }
                }
            }
            gamma.push(interp);
        }
        let s = StandpointStructure {
            domain: domain.len(),
            precisifications: np,
            sigma,
            gamma,
            individuals: BTreeMap::new(),
        };
        Ok(self.finish(s, extra))
    }

    /// Variables created by `R_◇`.
    pub fn diamond_witnesses(&self) -> impl Iterator<Item = Var> + '_ {
        (0..self.num_variables() as Var).filter(|&x| self.var_origin[x as usize] == VarOrigin::DiamondWitness)
    }
}
