use std::sync::Arc;

use super::context::{ConceptKind, Context, FormulaKind, Tag};
use super::graph::{Candidate, Clash, CompletionGraph, Elem, Label, QuasiRole, TraceEvent, Var, VarOrigin};
use super::{Rule, RuleClass, SaturationOptions, StepOutcome, TableauError, Verdict};
use crate::syntax::{is_normal_axiom, KnowledgeBase, Mode};
use crate::textio::axiom_to_string;

/// Size bounds for a knowledge base of size `k`: at most `27k⁶` rule
/// applications, `3k²` elements and `2k³` constraints per element.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Limits {
    pub steps: u64,
    pub step_bound: u64,
    pub elements: u64,
    pub constraints: u64,
}

impl Limits {
    pub fn for_size(size: usize) -> Limits {
        let k = size.max(1) as u128;
        let clamp = |v: u128| u64::try_from(v).unwrap_or(u64::MAX);
        let step_bound = clamp(27 * k.pow(6));
        Limits { steps: step_bound, step_bound, elements: clamp(3 * k * k), constraints: clamp(2 * k.pow(3)) }
    }
}

fn class_index(c: RuleClass) -> usize {
    c as usize
}

/// Builds the initial completion graph: `ε_⊤` and one element per
/// individual, each holding `S₀` (individual elements also tag every
/// initial variable with their individual).
pub fn init_graph(kb: &KnowledgeBase) -> Result<CompletionGraph, TableauError> {
    if let Some(bad) = kb.iter().find(|a| !is_normal_axiom(a)) {
        return Err(TableauError::NotNormalForm(axiom_to_string(bad)));
    }
    let ctx = Arc::new(Context::new(kb));
    let mut g = CompletionGraph::empty(ctx.clone());
    g.limits = Limits::for_size(ctx.size);
    for s in &ctx.standpoints {
        let x = g.new_var(VarOrigin::Initial(s.clone()));
        g.initial_vars.push(x);
    }
    let top = g.new_element(None);
    let individual_elements: Vec<Elem> =
        (0..ctx.individuals.len() as u32).map(|i| g.new_element(Some(i))).collect();
    for (i, &e) in individual_elements.iter().enumerate() {
        g.individual_elements[i].push(e);
    }
    g.add_initial_system(top);
    for (i, &e) in individual_elements.iter().enumerate() {
        g.add_initial_system(e);
        let tag = ctx.individual_tag(i as u32);
        for x in g.initial_vars.clone() {
            g.add(e, x, tag);
        }
    }
    Ok(g)
}

pub fn saturate(kb: &KnowledgeBase) -> Result<Verdict, TableauError> {
    saturate_with(kb, &SaturationOptions::from_env())
}

pub fn saturate_with(kb: &KnowledgeBase, options: &SaturationOptions) -> Result<Verdict, TableauError> {
    let mut g = init_graph(kb)?;
    g.configure(options);
    loop {
        match g.step()? {
            StepOutcome::Applied(_) => {}
            StepOutcome::Clash(clash) => return Ok(Verdict::Unsatisfiable { graph: Box::new(g), clash }),
            StepOutcome::Saturated => return Ok(Verdict::Satisfiable(Box::new(g))),
        }
    }
}

impl CompletionGraph {
    pub fn configure(&mut self, options: &SaturationOptions) {
        if options.trace && self.trace.is_none() {
            self.trace = Some(Vec::new());
        }
        self.limits.steps = match options.max_steps {
            Some(m) => m.min(self.limits.step_bound),
            None => self.limits.step_bound,
        };
    }

    fn add_initial_system(&mut self, e: Elem) {
        let ctx = self.ctx.clone();
        let star = ctx.universal();
        for (s, &x) in self.initial_vars.clone().iter().enumerate() {
            self.add(e, x, star);
            self.add(e, x, ctx.top());
            for &ax in &ctx.kb_axioms {
                self.add(e, x, ax);
            }
            self.add(e, x, s as Tag);
        }
    }

    fn enqueue(&mut self, c: Candidate) {
        let class = match c {
            Candidate::Add { elem, var, tag, .. } if self.has(elem, var, tag) => return,
            Candidate::Add { rule, .. } => rule.class(),
            Candidate::Diamond { .. } => RuleClass::LC,
            Candidate::Role { .. } | Candidate::Exists { .. } => RuleClass::GN,
        };
        self.queues[class_index(class)].push_back(c);
    }

    pub(crate) fn has(&self, e: Elem, x: Var, t: Tag) -> bool {
        self.systems[e as usize].has(x, t)
    }

    fn present(&self, e: Elem, t: Tag) -> bool {
        self.systems[e as usize].present.get(t)
    }

    /// Adds `(x : t)` to `S(e)` and schedules the rule applications it
    /// enables. Returns whether the constraint is new.
    pub(crate) fn add(&mut self, e: Elem, x: Var, t: Tag) -> bool {
        let ntags = self.ctx.num_tags();
        let sys = &mut self.systems[e as usize];
        let (slot, new_var) = match sys.slots.get(&x) {
            Some(&s) => (s, false),
            None => {
                let s = sys.vars.len();
                sys.vars.push(x);
                sys.slots.insert(x, s);
                sys.tags.push(super::graph::Bits::new(ntags));
                (s, true)
            }
        };
        if !sys.tags[slot].set(t) {
            return false;
        }
        let first = sys.present.set(t);
        sys.count += 1;
        if sys.count as u64 > self.limits.constraints && self.violation.is_none() {
            self.violation = Some(TableauError::BoundExceeded {
                what: "constraints in one system",
                value: sys.count as u64,
                bound: self.limits.constraints,
            });
        }
        if new_var {
            self.on_new_var(e, x);
        }
        self.on_add(e, x, t, first);
        true
    }

    fn on_new_var(&mut self, e: Elem, x: Var) {
        let ctx = self.ctx.clone();
        for &g in &ctx.g_tags {
            if self.present(e, g) {
                self.enqueue(Candidate::Add { rule: Rule::Global, elem: e, var: x, tag: g });
            }
        }
    }

    fn spread_global(&mut self, e: Elem, t: Tag) {
        for i in 0..self.systems[e as usize].vars.len() {
            let x = self.systems[e as usize].vars[i];
            self.enqueue(Candidate::Add { rule: Rule::Global, elem: e, var: x, tag: t });
        }
    }

    fn vars_with(&self, e: Elem, t: Tag) -> Vec<Var> {
        let sys = &self.systems[e as usize];
        sys.vars.iter().zip(&sys.tags).filter(|(_, b)| b.get(t)).map(|(&x, _)| x).collect()
    }

    fn role_from_subject(&mut self, e: Elem, x: Var, f: usize) {
        let FormulaKind::RoleAssertion(role, _, b) = self.ctx.formula_kind[f] else { return };
        for t in self.individual_elements[b as usize].clone() {
            let qr = QuasiRole { from: e, from_var: x, to: t, to_var: x, role };
            self.enqueue(Candidate::Role { rule: Rule::RoleFwd, qr, source: e, target: t });
        }
    }

    fn role_from_object(&mut self, e: Elem, x: Var, f: usize) {
        let FormulaKind::RoleAssertion(role, a, _) = self.ctx.formula_kind[f] else { return };
        for t in self.individual_elements[a as usize].clone() {
            let qr = QuasiRole { from: t, from_var: x, to: e, to_var: x, role };
            self.enqueue(Candidate::Role { rule: Rule::RoleBwd, qr, source: e, target: t });
        }
    }

    /// `first` tells whether no other variable of `S(e)` held `t` before;
    /// rules that only need some holder of `t` are scheduled just then.
    fn on_add(&mut self, e: Elem, x: Var, t: Tag, first: bool) {
        let ctx = self.ctx.clone();
        let formula_index = |t: Tag| ctx.as_formula(t).expect("formula tag");
        if (t as usize) < ctx.num_standpoints() {
            for &f in &ctx.sharpenings_by_lower[t as usize] {
                if self.present(e, f) {
                    if let FormulaKind::Sharpening(_, up) = ctx.formula_kind[formula_index(f)] {
                        self.enqueue(Candidate::Add { rule: Rule::Sharpen, elem: e, var: x, tag: up });
                    }
                }
            }
            for &(b, payload) in &ctx.box_by_sp[t as usize] {
                if self.present(e, b) {
                    self.enqueue(Candidate::Add { rule: Rule::Box, elem: e, var: x, tag: payload });
                }
            }
        } else if let Some(a) = ctx.as_individual(t) {
            if first {
                self.spread_global(e, t);
            }
            for &f in &ctx.cassert_by_ind[a as usize] {
                if self.has(e, x, f) {
                    if let FormulaKind::ConceptAssertion(c, _) = ctx.formula_kind[formula_index(f)] {
                        self.enqueue(Candidate::Add { rule: Rule::Assert, elem: e, var: x, tag: c });
                    }
                }
            }
            for &f in &ctx.rassert_by_subject[a as usize] {
                if self.has(e, x, f) {
                    self.role_from_subject(e, x, formula_index(f));
                }
            }
            for &f in &ctx.rassert_by_object[a as usize] {
                if self.has(e, x, f) {
                    self.role_from_object(e, x, formula_index(f));
                }
            }
        } else if let Some(ci) = ctx.as_concept(t) {
            if Some(t) == ctx.bot() && self.clash.is_none() {
                self.clash = Some(Clash { element: e, variable: x });
            }
            for &(d, cd) in &ctx.conj[ci] {
                if self.has(e, x, d) {
                    self.enqueue(Candidate::Add { rule: Rule::Conj, elem: e, var: x, tag: cd });
                }
            }
            for &f in &ctx.gci_by_lhs[ci] {
                if self.has(e, x, f) {
                    if let FormulaKind::Gci(_, r) = ctx.formula_kind[formula_index(f)] {
                        self.enqueue(Candidate::Add { rule: Rule::Subsume, elem: e, var: x, tag: r });
                    }
                }
            }
            match ctx.concept_kind[ci] {
                ConceptKind::Modal(Mode::Box, s, b) if first => {
                    for y in self.vars_with(e, s) {
                        self.enqueue(Candidate::Add { rule: Rule::Box, elem: e, var: y, tag: b });
                    }
                }
                ConceptKind::Modal(Mode::Diamond, ..) => self.enqueue(Candidate::Diamond { elem: e, var: x, tag: t }),
                ConceptKind::Exists(..) => self.enqueue(Candidate::Exists { elem: e, var: x, tag: t }),
                _ => {}
            }
            if !ctx.exists_by_filler[ci].is_empty() {
                let incoming = self.incoming.get(&(e, x)).cloned().unwrap_or_default();
                for qi in incoming {
                    let qr = self.quasi_roles[qi];
                    for &(role, ex) in &ctx.exists_by_filler[ci] {
                        if role == qr.role {
                            self.enqueue(Candidate::Add { rule: Rule::Down, elem: qr.from, var: qr.from_var, tag: ex });
                        }
                    }
                }
            }
        } else {
            let f = formula_index(t);
            match ctx.formula_kind[f] {
                FormulaKind::Sharpening(..) | FormulaKind::Modal(Mode::Box, ..) if !first => {}
                FormulaKind::Sharpening(lo, up) => {
                    self.spread_global(e, t);
                    for y in self.vars_with(e, lo) {
                        self.enqueue(Candidate::Add { rule: Rule::Sharpen, elem: e, var: y, tag: up });
                    }
                }
                FormulaKind::Modal(Mode::Box, s, body) => {
                    self.spread_global(e, t);
                    for y in self.vars_with(e, s) {
                        self.enqueue(Candidate::Add { rule: Rule::Box, elem: e, var: y, tag: body });
                    }
                }
                FormulaKind::Modal(Mode::Diamond, ..) => {}
                FormulaKind::Gci(l, r) => {
                    if self.has(e, x, l) {
                        self.enqueue(Candidate::Add { rule: Rule::Subsume, elem: e, var: x, tag: r });
                    }
                }
                FormulaKind::ConceptAssertion(c, a) => {
                    if self.has(e, x, ctx.individual_tag(a)) {
                        self.enqueue(Candidate::Add { rule: Rule::Assert, elem: e, var: x, tag: c });
                    }
                }
                FormulaKind::RoleAssertion(_, a, b) => {
                    if self.has(e, x, ctx.individual_tag(a)) {
                        self.role_from_subject(e, x, f);
                    }
                    if self.has(e, x, ctx.individual_tag(b)) {
                        self.role_from_object(e, x, f);
                    }
                }
            }
        }
    }

    fn insert_quasi_role(&mut self, qr: QuasiRole) {
        let i = self.quasi_roles.len();
        self.quasi_roles.push(qr);
        self.qr_set.insert(qr);
        self.outgoing.entry((qr.from, qr.from_var)).or_default().push(i);
        self.incoming.entry((qr.to, qr.to_var)).or_default().push(i);
        let ctx = self.ctx.clone();
        for &(filler, ex) in &ctx.exists_by_role[qr.role as usize] {
            if self.has(qr.to, qr.to_var, filler) {
                self.enqueue(Candidate::Add { rule: Rule::Down, elem: qr.from, var: qr.from_var, tag: ex });
            }
        }
    }

    fn exists_parts(&self, tag: Tag) -> (u32, Tag) {
        match self.ctx.concept_kind[self.ctx.as_concept(tag).expect("concept tag")] {
            ConceptKind::Exists(role, filler) => (role, filler),
            other => unreachable!("not an existential: {other:?}"),
        }
    }

    /// Whether `(ε, x, ε″, x″, R)` exists for some `(C, st, x″) ∈ L(ε″)` with
    /// `ε ≠ ε″` or `x = x″`.
    fn exists_satisfied(&self, e: Elem, x: Var, role: u32, filler: Tag, st: u32) -> bool {
        let Some(out) = self.outgoing.get(&(e, x)) else { return false };
        out.iter().any(|&qi| {
            let qr = &self.quasi_roles[qi];
            qr.role == role
                && (qr.to != e || qr.to_var == x)
                && self.labels[qr.to as usize].contains(&Label { concept: filler, st, var: qr.to_var })
        })
    }

    fn reusable(&self, e: Elem, x: Var, filler: Tag, st: u32) -> Option<(Elem, Var)> {
        self.label_index.get(&(filler, st))?.iter().copied().find(|&(e2, x2)| e2 != e || x2 == x)
    }

    fn record(&mut self, rule: Rule, e: Elem, x: Var, added: impl FnOnce(&Self) -> String) {
        self.counters[rule as usize] += 1;
        if self.trace.is_some() {
            let event = TraceEvent {
                rule: rule.name(),
                element: self.element_name(e),
                variable: self.var_name(x),
                added: added(self),
            };
            if let Some(trace) = &mut self.trace {
                trace.push(event);
            }
        }
    }

    fn describe_qr(&self, qr: &QuasiRole) -> String {
        format!(
            "{}({}:{}, {}:{})",
            self.role_name(qr.role),
            self.element_name(qr.from),
            self.var_name(qr.from_var),
            self.element_name(qr.to),
            self.var_name(qr.to_var)
        )
    }

    /// Applies a pending application if it is still applicable.
    fn apply(&mut self, c: Candidate, from_gg: bool) -> Option<Rule> {
        match c {
            Candidate::Add { rule, elem, var, tag } => {
                if !self.add(elem, var, tag) {
                    return None;
                }
                self.record(rule, elem, var, |g| g.ctx.describe(tag));
                Some(rule)
            }
            Candidate::Diamond { elem, var, tag } => {
                let ConceptKind::Modal(Mode::Diamond, s, b) = self.ctx.concept_kind[self.ctx.as_concept(tag)?] else {
                    return None;
                };
                let sys = &self.systems[elem as usize];
                if sys.tags.iter().any(|bits| bits.get(s) && bits.get(b)) {
                    return None;
                }
                let w = self.new_var(VarOrigin::DiamondWitness);
                let (star, top) = (self.ctx.universal(), self.ctx.top());
                self.add(elem, w, b);
                self.add(elem, w, s);
                self.add(elem, w, star);
                self.add(elem, w, top);
                self.record(Rule::Diamond, elem, var, |g| format!("{} for {}", g.var_name(w), g.ctx.describe(tag)));
                Some(Rule::Diamond)
            }
            Candidate::Role { rule, qr, source, target } => {
                if self.qr_set.contains(&qr) {
                    return None;
                }
                let x = qr.from_var;
                let st = self.st_ids(source, x);
                self.insert_quasi_role(qr);
                let top = self.ctx.top();
                self.add(target, x, top);
                for s in st {
                    self.add(target, x, s);
                }
                self.record(rule, target, x, |g| g.describe_qr(&qr));
                Some(rule)
            }
            Candidate::Exists { elem, var, tag } => {
                let (role, filler) = self.exists_parts(tag);
                let ids = self.st_ids(elem, var);
                let st = self.intern_st(ids.clone());
                if self.exists_satisfied(elem, var, role, filler, st) {
                    return None;
                }
                if let Some((e2, x2)) = self.reusable(elem, var, filler, st) {
                    if from_gg {
                        self.queues[class_index(RuleClass::GN)].push_back(c);
                        return None;
                    }
                    let qr = QuasiRole { from: elem, from_var: var, to: e2, to_var: x2, role };
                    self.insert_quasi_role(qr);
                    self.record(Rule::ExistsReuse, elem, var, |g| g.describe_qr(&qr));
                    return Some(Rule::ExistsReuse);
                }
                if !from_gg {
                    self.queues[class_index(RuleClass::GG)].push_back(c);
                    self.pending_gen.entry((filler, st)).or_default().push(c);
                    return None;
                }
                let e2 = self.new_element(None);
                if self.systems.len() as u64 > self.limits.elements && self.violation.is_none() {
                    self.violation = Some(TableauError::BoundExceeded {
                        what: "elements",
                        value: self.systems.len() as u64,
                        bound: self.limits.elements,
                    });
                }
                let x2 = self.new_var(VarOrigin::ExistentialWitness);
                self.add_initial_system(e2);
                self.add(e2, x2, filler);
                let top = self.ctx.top();
                self.add(e2, x2, top);
                for &s in &ids {
                    self.add(e2, x2, s);
                }
                self.labels[e2 as usize].push(Label { concept: filler, st, var: x2 });
                self.label_index.entry((filler, st)).or_default().push((e2, x2));
                let qr = QuasiRole { from: elem, from_var: var, to: e2, to_var: x2, role };
                self.insert_quasi_role(qr);
                for waiting in self.pending_gen.remove(&(filler, st)).unwrap_or_default() {
                    self.queues[class_index(RuleClass::GN)].push_back(waiting);
                }
                self.record(Rule::ExistsGen, elem, var, |g| g.describe_qr(&qr));
                Some(Rule::ExistsGen)
            }
        }
    }

    /// Applies one rule of the highest non-empty priority class.
    pub fn step(&mut self) -> Result<StepOutcome, TableauError> {
        if let Some(c) = self.clash {
            return Ok(StepOutcome::Clash(c));
        }
        loop {
            let Some(class) = (0..4).find(|&i| !self.queues[i].is_empty()) else {
                return Ok(StepOutcome::Saturated);
            };
            let cand = self.queues[class].pop_front().expect("non-empty queue");
            let Some(rule) = self.apply(cand, class == class_index(RuleClass::GG)) else { continue };
            debug_assert!(rule.class() as usize == class || class == class_index(RuleClass::GN));
            if let Some(err) = self.violation.clone() {
                return Err(err);
            }
            let steps = self.rule_applications();
            if steps > self.limits.steps {
                return Err(if self.limits.steps < self.limits.step_bound {
                    TableauError::StepLimit(self.limits.steps)
                } else {
                    TableauError::BoundExceeded { what: "rule applications", value: steps, bound: self.limits.step_bound }
                });
            }
            return Ok(match self.clash {
                Some(c) => StepOutcome::Clash(c),
                None => StepOutcome::Applied(rule),
            });
        }
    }

    /// Whether some rule application is still pending and applicable.
    pub fn is_saturated(&self) -> bool {
        let mut probe = self.clone();
        probe.trace = None;
        matches!(probe.step(), Ok(StepOutcome::Saturated))
    }

    /// Theoretical bounds `(steps, elements, constraints per system)`.
    pub fn bounds(&self) -> (u64, u64, u64) {
        (self.limits.step_bound, self.limits.elements, self.limits.constraints)
    }
}
