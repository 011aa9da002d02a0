//! A small CDCL solver: two watched literals, first-UIP learning, activity
//! based branching and geometric restarts. Sized for the groundings produced
//! by the model search, a few thousand variables at most.

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lit(u32);

impl Lit {
    pub fn new(var: u32, positive: bool) -> Lit {
        Lit(var << 1 | u32::from(!positive))
    }

    pub fn var(self) -> u32 {
        self.0 >> 1
    }

    pub fn is_positive(self) -> bool {
        self.0 & 1 == 0
    }

    fn index(self) -> usize {
        self.0 as usize
    }
}

impl std::ops::Not for Lit {
    type Output = Lit;
    fn not(self) -> Lit {
        Lit(self.0 ^ 1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Sat,
    Unsat,
    Unknown,
}

const UNASSIGNED: u8 = 2;

#[derive(Default)]
pub struct Solver {
    clauses: Vec<Vec<Lit>>,
    watches: Vec<Vec<usize>>,
    /// 0 = false, 1 = true, 2 = unassigned; indexed by variable.
    value: Vec<u8>,
    level: Vec<u32>,
    reason: Vec<Option<usize>>,
    activity: Vec<f64>,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    head: usize,
    bump: f64,
    /// Set once an empty clause has been derived.
    inconsistent: bool,
    units: Vec<Lit>,
}

impl Solver {
    pub fn new() -> Self {
        Solver { bump: 1.0, ..Default::default() }
    }

    pub fn new_var(&mut self) -> u32 {
        let v = self.value.len() as u32;
        self.value.push(UNASSIGNED);
        self.level.push(0);
        self.reason.push(None);
        self.activity.push(0.0);
        self.watches.push(Vec::new());
        self.watches.push(Vec::new());
        v
    }

    pub fn num_vars(&self) -> usize {
        self.value.len()
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    fn lit_value(&self, l: Lit) -> u8 {
        match self.value[l.var() as usize] {
            UNASSIGNED => UNASSIGNED,
            v => v ^ u8::from(!l.is_positive()),
        }
    }

    /// Value of a variable in the last satisfying assignment.
    pub fn model_value(&self, var: u32) -> bool {
        self.value[var as usize] == 1
    }

    pub fn add_clause(&mut self, lits: &[Lit]) {
        let mut c: Vec<Lit> = lits.to_vec();
        c.sort_unstable();
        c.dedup();
        if c.windows(2).any(|w| w[0] == !w[1]) {
            return;
        }
        match c.len() {
            0 => self.inconsistent = true,
            1 => self.units.push(c[0]),
            _ => {
                let id = self.clauses.len();
                self.watches[(!c[0]).index()].push(id);
                self.watches[(!c[1]).index()].push(id);
                self.clauses.push(c);
            }
        }
    }

    fn assign(&mut self, l: Lit, reason: Option<usize>) {
        let v = l.var() as usize;
        self.value[v] = u8::from(l.is_positive());
        self.level[v] = self.trail_lim.len() as u32;
        self.reason[v] = reason;
        self.trail.push(l);
    }

    /// Unit propagation; returns a conflicting clause.
    fn propagate(&mut self) -> Option<usize> {
        while self.head < self.trail.len() {
            let l = self.trail[self.head];
            self.head += 1;
            // Clauses watching ¬l are listed under l.
            let mut ws = std::mem::take(&mut self.watches[l.index()]);
            let mut i = 0;
            while i < ws.len() {
                let cid = ws[i];
                let false_lit = !l;
                let clause = &mut self.clauses[cid];
                if clause[0] == false_lit {
                    clause.swap(0, 1);
                }
                let first = clause[0];
                if self.lit_value(first) == 1 {
                    i += 1;
                    continue;
                }
                let mut moved = false;
                for k in 2..self.clauses[cid].len() {
                    let cand = self.clauses[cid][k];
                    if self.lit_value(cand) != 0 {
                        self.clauses[cid].swap(1, k);
                        self.watches[(!cand).index()].push(cid);
                        ws.swap_remove(i);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                if self.lit_value(first) == 0 {
                    self.watches[l.index()] = ws;
                    return Some(cid);
                }
                self.assign(first, Some(cid));
                i += 1;
            }
            self.watches[l.index()] = ws;
        }
        None
    }

    fn analyze(&mut self, conflict: usize) -> (Vec<Lit>, u32) {
        let current = self.trail_lim.len() as u32;
        let mut seen = vec![false; self.value.len()];
        let mut learnt = vec![Lit(0)];
        let mut counter = 0;
        let mut clause = conflict;
        let mut idx = self.trail.len();
        let mut skip_first = false;
        loop {
            let lits: Vec<Lit> = self.clauses[clause].clone();
            for (j, &q) in lits.iter().enumerate() {
                if skip_first && j == 0 {
                    continue;
                }
                let v = q.var() as usize;
                if !seen[v] && self.level[v] > 0 {
                    seen[v] = true;
                    self.activity[v] += self.bump;
                    if self.level[v] == current {
                        counter += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            let p = loop {
                idx -= 1;
                let p = self.trail[idx];
                if seen[p.var() as usize] {
                    break p;
                }
            };
            seen[p.var() as usize] = false;
            counter -= 1;
            if counter == 0 {
                learnt[0] = !p;
                break;
            }
            clause = self.reason[p.var() as usize].expect("implied literal has a reason");
            // The implied literal sits at position 0 of its reason clause.
            skip_first = true;
        }
        self.bump *= 1.05;
        if self.bump > 1e100 {
            for a in &mut self.activity {
                *a *= 1e-100;
            }
            self.bump *= 1e-100;
        }
        let back = if learnt.len() == 1 {
            0
        } else {
            let (best, lvl) = (1..learnt.len())
                .map(|i| (i, self.level[learnt[i].var() as usize]))
                .max_by_key(|&(_, l)| l)
                .unwrap();
            learnt.swap(1, best);
            lvl
        };
        (learnt, back)
    }

    fn backtrack(&mut self, level: u32) {
        if self.trail_lim.len() as u32 <= level {
            return;
        }
        let start = self.trail_lim[level as usize];
        for l in self.trail.drain(start..) {
            self.value[l.var() as usize] = UNASSIGNED;
            self.reason[l.var() as usize] = None;
        }
        self.trail_lim.truncate(level as usize);
        self.head = self.trail.len();
    }

    fn decide(&self) -> Option<Lit> {
        let mut best: Option<(u32, f64)> = None;
        for (v, &val) in self.value.iter().enumerate() {
            if val == UNASSIGNED && best.is_none_or(|(_, a)| self.activity[v] > a) {
                best = Some((v as u32, self.activity[v]));
            }
        }
        best.map(|(v, _)| Lit::new(v, false))
    }

    /// Solves the clause set, giving up after `max_conflicts` conflicts.
    pub fn solve(&mut self, max_conflicts: u64) -> Outcome {
        if self.inconsistent {
            return Outcome::Unsat;
        }
        for l in self.trail.drain(..) {
            self.value[l.var() as usize] = UNASSIGNED;
            self.reason[l.var() as usize] = None;
        }
        self.trail_lim.clear();
        self.head = 0;
        for l in self.units.clone() {
            match self.lit_value(l) {
                0 => {
                    self.inconsistent = true;
                    return Outcome::Unsat;
                }
                1 => {}
                _ => self.assign(l, None),
            }
        }
        let mut conflicts = 0u64;
        let mut restart_at = 100u64;
        loop {
            if let Some(conflict) = self.propagate() {
                conflicts += 1;
                if self.trail_lim.is_empty() {
                    self.inconsistent = true;
                    return Outcome::Unsat;
                }
                if conflicts > max_conflicts {
                    self.backtrack(0);
                    return Outcome::Unknown;
                }
                let (learnt, back) = self.analyze(conflict);
                self.backtrack(back);
                if learnt.len() == 1 {
                    self.units.push(learnt[0]);
                    self.assign(learnt[0], None);
                } else {
                    let id = self.clauses.len();
                    self.watches[(!learnt[0]).index()].push(id);
                    self.watches[(!learnt[1]).index()].push(id);
                    self.clauses.push(learnt.clone());
                    self.assign(learnt[0], Some(id));
                }
                if conflicts >= restart_at {
                    restart_at += restart_at / 2;
                    self.backtrack(0);
                }
            } else {
                match self.decide() {
                    None => return Outcome::Sat,
                    Some(l) => {
                        self.trail_lim.push(self.trail.len());
                        self.assign(l, None);
                    }
                }
            }
        }
    }
}
