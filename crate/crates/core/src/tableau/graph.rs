use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::Arc;

use serde::Serialize;

use super::context::{Context, Tag, TagValue};
use super::engine::Limits;
use super::{Rule, TableauError};
use crate::syntax::Name;

pub type Var = u32;
pub type Elem = u32;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VarOrigin {
    Initial(Name),
    DiamondWitness,
    ExistentialWitness,
}

/// Fixed-width bit set over tags.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Bits(Vec<u64>);

impl Bits {
    pub fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)])
    }

    pub fn get(&self, i: Tag) -> bool {
        self.0[(i / 64) as usize] >> (i % 64) & 1 == 1
    }

    /// Sets bit `i`, returning whether it was newly set.
    pub fn set(&mut self, i: Tag) -> bool {
        let w = &mut self.0[(i / 64) as usize];
        let mask = 1u64 << (i % 64);
        let fresh = *w & mask == 0;
        *w |= mask;
        fresh
    }

    pub fn ones(&self) -> impl Iterator<Item = Tag> + '_ {
        self.0.iter().enumerate().flat_map(|(wi, &w)| {
            (0..64).filter(move |b| w >> b & 1 == 1).map(move |b| (wi * 64 + b) as Tag)
        })
    }
}

/// The constraints of one element, grouped by variable.
#[derive(Clone, Debug)]
pub(crate) struct System {
    pub vars: Vec<Var>,
    pub slots: HashMap<Var, usize>,
    pub tags: Vec<Bits>,
    /// Tags held by at least one variable.
    pub present: Bits,
    pub count: usize,
}

impl System {
    fn new(ntags: usize) -> Self {
        System { vars: Vec::new(), slots: HashMap::new(), tags: Vec::new(), present: Bits::new(ntags), count: 0 }
    }

    pub fn has(&self, x: Var, t: Tag) -> bool {
        self.slots.get(&x).is_some_and(|&i| self.tags[i].get(t))
    }

    pub fn contains_var(&self, x: Var) -> bool {
        self.slots.contains_key(&x)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuasiRole {
    pub from: Elem,
    pub from_var: Var,
    pub to: Elem,
    pub to_var: Var,
    pub role: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) struct Label {
    pub concept: Tag,
    pub st: u32,
    pub var: Var,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Candidate {
    Add { rule: Rule, elem: Elem, var: Var, tag: Tag },
    Diamond { elem: Elem, var: Var, tag: Tag },
    Role { rule: Rule, qr: QuasiRole, source: Elem, target: Elem },
    Exists { elem: Elem, var: Var, tag: Tag },
}

/// One rule application, for `--trace`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceEvent {
    pub rule: &'static str,
    pub element: String,
    pub variable: String,
    pub added: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Clash {
    pub element: Elem,
    pub variable: Var,
}

/// Completion graph `⟨Δ, S, L, R⟩` together with the scheduling state.
#[derive(Clone)]
pub struct CompletionGraph {
    pub(crate) ctx: Arc<Context>,
    pub(crate) systems: Vec<System>,
    pub(crate) labels: Vec<Vec<Label>>,
    pub(crate) element_individual: Vec<Option<u32>>,
    pub(crate) quasi_roles: Vec<QuasiRole>,
    pub(crate) qr_set: HashSet<QuasiRole>,
    pub(crate) outgoing: HashMap<(Elem, Var), Vec<usize>>,
    pub(crate) incoming: HashMap<(Elem, Var), Vec<usize>>,
    pub(crate) label_index: HashMap<(Tag, u32), Vec<(Elem, Var)>>,
    pub(crate) st_sets: Vec<Vec<u32>>,
    pub(crate) st_index: HashMap<Vec<u32>, u32>,
    pub(crate) var_origin: Vec<VarOrigin>,
    /// Elements holding each individual tag.
    pub(crate) individual_elements: Vec<Vec<Elem>>,
    pub(crate) initial_vars: Vec<Var>,
    pub(crate) queues: [VecDeque<Candidate>; 4],
    pub(crate) pending_gen: HashMap<(Tag, u32), Vec<Candidate>>,
    pub(crate) counters: [u64; 12],
    pub(crate) clash: Option<Clash>,
    pub(crate) trace: Option<Vec<TraceEvent>>,
    pub(crate) limits: Limits,
    pub(crate) violation: Option<TableauError>,
}

impl CompletionGraph {
    pub(crate) fn empty(ctx: Arc<Context>) -> Self {
        let ni = ctx.individuals.len();
        CompletionGraph {
            ctx,
            systems: Vec::new(),
            labels: Vec::new(),
            element_individual: Vec::new(),
            quasi_roles: Vec::new(),
            qr_set: HashSet::new(),
            outgoing: HashMap::new(),
            incoming: HashMap::new(),
            label_index: HashMap::new(),
            st_sets: Vec::new(),
            st_index: HashMap::new(),
            var_origin: Vec::new(),
            individual_elements: vec![Vec::new(); ni],
            initial_vars: Vec::new(),
            queues: Default::default(),
            pending_gen: HashMap::new(),
            counters: [0; 12],
            clash: None,
            trace: None,
            limits: Limits::for_size(0),
            violation: None,
        }
    }

    pub(crate) fn new_element(&mut self, individual: Option<u32>) -> Elem {
        let e = self.systems.len() as Elem;
        self.systems.push(System::new(self.ctx.num_tags()));
        self.labels.push(Vec::new());
        self.element_individual.push(individual);
        e
    }

    pub(crate) fn new_var(&mut self, origin: VarOrigin) -> Var {
        self.var_origin.push(origin);
        (self.var_origin.len() - 1) as Var
    }

    /// Standpoint ids of `x` in `S(e)`, sorted.
    pub(crate) fn st_ids(&self, e: Elem, x: Var) -> Vec<u32> {
        let sys = &self.systems[e as usize];
        let Some(&slot) = sys.slots.get(&x) else { return Vec::new() };
        (0..self.ctx.num_standpoints() as u32).filter(|&s| sys.tags[slot].get(s)).collect()
    }

    pub(crate) fn intern_st(&mut self, ids: Vec<u32>) -> u32 {
        if let Some(&i) = self.st_index.get(&ids) {
            return i;
        }
        let i = self.st_sets.len() as u32;
        self.st_sets.push(ids.clone());
        self.st_index.insert(ids, i);
        i
    }

    pub fn num_elements(&self) -> usize {
        self.systems.len()
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.systems.len() as Elem
    }

    pub fn num_variables(&self) -> usize {
        self.var_origin.len()
    }

    pub fn variables(&self, e: Elem) -> &[Var] {
        &self.systems[e as usize].vars
    }

    pub fn constraint_count(&self, e: Elem) -> usize {
        self.systems[e as usize].count
    }

    pub fn total_constraints(&self) -> usize {
        self.systems.iter().map(|s| s.count).sum()
    }

    pub fn quasi_roles(&self) -> &[QuasiRole] {
        &self.quasi_roles
    }

    pub fn role_name(&self, r: u32) -> &Name {
        &self.ctx.roles[r as usize]
    }

    pub fn individual_of(&self, e: Elem) -> Option<&Name> {
        self.element_individual[e as usize].map(|i| &self.ctx.individuals[i as usize])
    }

    /// Element created for an individual at initialisation.
    pub fn element_of(&self, individual: &str) -> Option<Elem> {
        self.element_individual
            .iter()
            .position(|i| i.is_some_and(|i| &*self.ctx.individuals[i as usize] == individual))
            .map(|p| p as Elem)
    }

    pub fn element_name(&self, e: Elem) -> String {
        match (e, self.individual_of(e)) {
            (0, _) => "eps_top".into(),
            (_, Some(a)) => format!("eps_{a}"),
            _ => format!("eps{e}"),
        }
    }

    pub fn var_name(&self, x: Var) -> String {
        match &self.var_origin[x as usize] {
            VarOrigin::Initial(s) => format!("x_{s}"),
            _ => format!("x{x}"),
        }
    }

    pub fn var_origin(&self, x: Var) -> &VarOrigin {
        &self.var_origin[x as usize]
    }

    /// Standpoint signature `st_ε(x)`.
    pub fn standpoints_of(&self, e: Elem, x: Var) -> Vec<Name> {
        self.st_ids(e, x).into_iter().map(|s| self.ctx.standpoints[s as usize].clone()).collect()
    }

    /// The constraints of `S(ε)` in a printable form, grouped by variable.
    pub fn constraints(&self, e: Elem) -> Vec<(Var, Vec<String>)> {
        let sys = &self.systems[e as usize];
        sys.vars
            .iter()
            .zip(&sys.tags)
            .map(|(&x, bits)| (x, bits.ones().map(|t| self.ctx.describe(t)).collect()))
            .collect()
    }

    pub fn has_concept(&self, e: Elem, x: Var, c: &crate::syntax::Concept) -> bool {
        self.ctx.concept_tag(c).is_some_and(|t| self.systems[e as usize].has(x, t))
    }

    /// Labels `(C, St, x)` of an element.
    pub fn labels(&self, e: Elem) -> Vec<(String, Vec<Name>, Var)> {
        self.labels[e as usize]
            .iter()
            .map(|l| {
                let st = self.st_sets[l.st as usize].iter().map(|&s| self.ctx.standpoints[s as usize].clone()).collect();
                (self.ctx.describe(l.concept), st, l.var)
            })
            .collect()
    }

    /// Application counts by rule.
    pub fn counters(&self) -> Vec<(Rule, u64)> {
        Rule::ALL.iter().map(|&r| (r, self.counters[r as usize])).collect()
    }

    pub fn rule_applications(&self) -> u64 {
        self.counters.iter().sum()
    }

    pub fn trace(&self) -> &[TraceEvent] {
        self.trace.as_deref().unwrap_or(&[])
    }

    pub fn clash(&self) -> Option<Clash> {
        self.clash
    }

    pub fn size_of_kb(&self) -> usize {
        self.ctx.size
    }

    pub fn tag_value(&self, t: u32) -> TagValue<'_> {
        self.ctx.decode(t)
    }
}

impl std::fmt::Debug for CompletionGraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CompletionGraph")
            .field("elements", &self.num_elements())
            .field("variables", &self.num_variables())
            .field("quasi_roles", &self.quasi_roles.len())
            .field("constraints", &self.total_constraints())
            .field("clash", &self.clash)
            .finish()
    }
}
