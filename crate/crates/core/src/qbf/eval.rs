//! Desk-scale QBF semantics by recursive expansion over the prefix.
//!
//! The CNF evaluator branches on variables strictly in prefix order (∃ is a
//! disjunction over both branches, ∀ a conjunction) and prunes with
//! universal reduction and existential unit propagation. The circuit
//! evaluator expands the prefix directly and stops a branch as soon as the
//! three-valued value of the output is fixed. Neither shares code with the
//! Tseitin lowering, so each can check the other.

use super::{GateKind, Lit, QbfCircuit, QbfCnf, Quantifier, Var};
use crate::error::{Error, Result};

pub const DEFAULT_VAR_LIMIT: usize = 24;

#[derive(Clone, Copy, Debug)]
pub struct Evaluator {
    limit: usize,
}

impl Default for Evaluator {
    fn default() -> Self {
        Evaluator {
            limit: DEFAULT_VAR_LIMIT,
        }
    }
}

impl Evaluator {
    pub fn new() -> Self {
        Self::default()
    }

    /// Raises (or lowers) the refusal threshold on the number of variables.
    pub fn with_limit(limit: usize) -> Self {
        Evaluator { limit }
    }

    pub fn limit(&self) -> usize {
        self.limit
    }

    pub fn evaluate(&self, f: &QbfCnf) -> Result<bool> {
        let n = f.prefix.num_vars();
        if n > self.limit {
            return Err(Error::LimitExceeded {
                what: "variable count",
                actual: n,
                limit: self.limit,
            });
        }
        f.validate()?;
        Ok(CnfSearch::new(f).solve())
    }

    pub fn evaluate_circuit(&self, c: &QbfCircuit) -> Result<bool> {
        let n = c.prefix.num_vars();
        if n > self.limit {
            return Err(Error::LimitExceeded {
                what: "variable count",
                actual: n,
                limit: self.limit,
            });
        }
        c.validate()?;
        Ok(CircuitSearch::new(c).solve())
    }
}

/// [`Evaluator::evaluate`] with the default limit.
pub fn evaluate(f: &QbfCnf) -> Result<bool> {
    Evaluator::default().evaluate(f)
}

/// [`Evaluator::evaluate_circuit`] with the default limit.
pub fn evaluate_circuit(c: &QbfCircuit) -> Result<bool> {
    Evaluator::default().evaluate_circuit(c)
}

const UNASSIGNED: i8 = 0;

struct CnfSearch {
    /// Non-tautological clauses with duplicate literals removed.
    clauses: Vec<Vec<Lit>>,
    order: Vec<Var>,
    level: Vec<usize>,
    exists: Vec<bool>,
    value: Vec<i8>,
    /// Clause indices per literal, indexed by `lit_index`.
    occurs: Vec<Vec<usize>>,
    true_count: Vec<u32>,
    satisfied: usize,
    trail: Vec<Var>,
}

fn lit_index(l: Lit) -> usize {
    2 * l.var() as usize + l.is_negated() as usize
}

impl CnfSearch {
    fn new(f: &QbfCnf) -> Self {
        let nv = f.prefix.max_var() as usize + 1;
        let mut level = vec![0; nv];
        let mut exists = vec![true; nv];
        let mut order = Vec::new();
        for (i, b) in f.prefix.blocks().iter().enumerate() {
            for &v in &b.vars {
                level[v as usize] = i;
                exists[v as usize] = b.quantifier == Quantifier::Exists;
                order.push(v);
            }
        }
        let clauses: Vec<Vec<Lit>> = f
            .clauses
            .iter()
            .filter_map(|c| {
                let mut c = c.clone();
                c.sort_unstable_by_key(|&l| lit_index(l));
                c.dedup();
                let tautology = c.windows(2).any(|w| w[0].var() == w[1].var());
                (!tautology).then_some(c)
            })
            .collect();
        let mut occurs = vec![Vec::new(); 2 * nv];
        for (ci, c) in clauses.iter().enumerate() {
            for &l in c {
                occurs[lit_index(l)].push(ci);
            }
        }
        CnfSearch {
            true_count: vec![0; clauses.len()],
            clauses,
            order,
            level,
            exists,
            value: vec![UNASSIGNED; nv],
            occurs,
            satisfied: 0,
            trail: Vec::new(),
        }
    }

    fn lit_value(&self, l: Lit) -> i8 {
        let v = self.value[l.var() as usize];
        if l.is_negated() {
            -v
        } else {
            v
        }
    }

    fn assign(&mut self, l: Lit) {
        let v = l.var() as usize;
        self.value[v] = if l.is_negated() { -1 } else { 1 };
        self.trail.push(l.var());
        for &ci in &self.occurs[lit_index(l)] {
            if self.true_count[ci] == 0 {
                self.satisfied += 1;
            }
            self.true_count[ci] += 1;
        }
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let v = self.trail.pop().unwrap();
            let l = Lit::new(v, self.value[v as usize] < 0);
            for &ci in &self.occurs[lit_index(l)] {
                self.true_count[ci] -= 1;
                if self.true_count[ci] == 0 {
                    self.satisfied -= 1;
                }
            }
            self.value[v as usize] = UNASSIGNED;
        }
    }

    /// Returns `None` on conflict, otherwise the implied unit literal (if any).
    fn inspect(&self, ci: usize) -> std::result::Result<Option<Lit>, ()> {
        if self.true_count[ci] > 0 {
            return Ok(None);
        }
        let mut unit: Option<Lit> = None;
        let mut n_exist = 0;
        for &l in &self.clauses[ci] {
            if self.lit_value(l) != UNASSIGNED || !self.exists[l.var() as usize] {
                continue;
            }
            n_exist += 1;
            unit = Some(l);
            if n_exist > 1 {
                return Ok(None);
            }
        }
        let Some(e) = unit else {
            // Only false literals and reducible universals remain.
            return Err(());
        };
        let le = self.level[e.var() as usize];
        let blocked = self.clauses[ci].iter().any(|&l| {
            self.lit_value(l) == UNASSIGNED
                && !self.exists[l.var() as usize]
                && self.level[l.var() as usize] < le
        });
        Ok(if blocked { None } else { Some(e) })
    }

    fn propagate(&mut self, mut head: usize) -> bool {
        while head < self.trail.len() {
            let v = self.trail[head];
            head += 1;
            let falsified = Lit::new(v, self.value[v as usize] > 0);
            let idx = lit_index(falsified);
            for k in 0..self.occurs[idx].len() {
                let ci = self.occurs[idx][k];
                match self.inspect(ci) {
                    Err(()) => return false,
                    Ok(Some(u)) => {
                        if self.lit_value(u) == UNASSIGNED {
                            self.assign(u);
                        }
                    }
                    Ok(None) => {}
                }
            }
        }
        true
    }

    fn solve(mut self) -> bool {
        for ci in 0..self.clauses.len() {
            match self.inspect(ci) {
                Err(()) => return false,
                Ok(Some(u)) => {
                    if self.lit_value(u) == UNASSIGNED {
                        self.assign(u);
                    }
                }
                Ok(None) => {}
            }
        }
        if !self.propagate(0) {
            return false;
        }
        self.search(0)
    }

    fn search(&mut self, start: usize) -> bool {
        if self.satisfied == self.clauses.len() {
            return true;
        }
        let Some(pos) = (start..self.order.len())
            .find(|&i| self.value[self.order[i] as usize] == UNASSIGNED)
        else {
            // Fully assigned without a conflict.
            return true;
        };
        let v = self.order[pos];
        let existential = self.exists[v as usize];
        for negated in [true, false] {
            let mark = self.trail.len();
            self.assign(Lit::new(v, negated));
            let ok = self.propagate(mark) && self.search(pos + 1);
            self.undo(mark);
            if ok == existential {
                return ok;
            }
        }
        !existential
    }
}

struct CircuitSearch<'a> {
    c: &'a QbfCircuit,
    order: Vec<(Var, bool)>,
    /// Indexed by id; `None` = unknown.
    value: Vec<Option<bool>>,
}

impl<'a> CircuitSearch<'a> {
    fn new(c: &'a QbfCircuit) -> Self {
        let mut order = Vec::new();
        for b in c.prefix.blocks() {
            for &v in &b.vars {
                order.push((v, b.quantifier == Quantifier::Exists));
            }
        }
        let max_id = c
            .gates
            .iter()
            .map(|g| g.id)
            .chain(c.prefix.vars())
            .max()
            .unwrap_or(0);
        CircuitSearch {
            c,
            order,
            value: vec![None; max_id as usize + 1],
        }
    }

    fn lit(&self, l: Lit) -> Option<bool> {
        self.value[l.var() as usize].map(|b| b != l.is_negated())
    }

    fn output(&mut self) -> Option<bool> {
        for g in &self.c.gates {
            let absorbing = g.kind == GateKind::Or;
            let mut unknown = false;
            let mut decided = None;
            for &l in &g.inputs {
                match self.lit(l) {
                    Some(b) if b == absorbing => {
                        decided = Some(absorbing);
                        break;
                    }
                    Some(_) => {}
                    None => unknown = true,
                }
            }
            let val = decided.or(if unknown { None } else { Some(!absorbing) });
            self.value[g.id as usize] = val;
        }
        self.lit(self.c.output)
    }

    fn solve(mut self) -> bool {
        self.expand(0)
    }

    fn expand(&mut self, pos: usize) -> bool {
        if let Some(b) = self.output() {
            return b;
        }
        // The output is fully determined once every variable is set.
        let (v, existential) = self.order[pos];
        for val in [false, true] {
            self.value[v as usize] = Some(val);
            let r = self.expand(pos + 1);
            self.value[v as usize] = None;
            if r == existential {
                return r;
            }
        }
        !existential
    }
}
