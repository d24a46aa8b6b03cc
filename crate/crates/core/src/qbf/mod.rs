//! Prenex QBF intermediate representation.
//!
//! Both formula shapes share one identifier space: variables are numbered
//! densely from 1 in prefix order, and circuit gates take the ids after the
//! last variable. A [`Lit`] is a signed reference into that space, exactly
//! like a DIMACS literal.

mod builder;
pub mod eval;
pub mod qcir;
pub mod qdimacs;
pub mod stats;
pub mod tseitin;

use std::collections::HashSet;
use std::fmt;
use std::ops::Not;

use crate::error::{Error, Result};

pub use builder::CircuitBuilder;

/// Variable or gate identifier, always `>= 1`.
pub type Var = u32;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lit(i32);

impl Lit {
    pub fn pos(v: Var) -> Lit {
        debug_assert!(v >= 1 && v <= i32::MAX as u32);
        Lit(v as i32)
    }

    pub fn neg(v: Var) -> Lit {
        !Lit::pos(v)
    }

    pub fn new(v: Var, negated: bool) -> Lit {
        if negated {
            Lit::neg(v)
        } else {
            Lit::pos(v)
        }
    }

    pub fn var(self) -> Var {
        self.0.unsigned_abs()
    }

    pub fn is_negated(self) -> bool {
        self.0 < 0
    }

    pub fn to_dimacs(self) -> i32 {
        self.0
    }

    pub fn from_dimacs(x: i32) -> Option<Lit> {
        (x != 0 && x != i32::MIN).then_some(Lit(x))
    }
}

impl Not for Lit {
    type Output = Lit;
    fn not(self) -> Lit {
        Lit(-self.0)
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Quantifier {
    Exists,
    Forall,
}

impl Quantifier {
    pub fn flip(self) -> Quantifier {
        match self {
            Quantifier::Exists => Quantifier::Forall,
            Quantifier::Forall => Quantifier::Exists,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub quantifier: Quantifier,
    pub vars: Vec<Var>,
}

/// Quantifier prefix. Consecutive blocks always alternate and no block is
/// empty; [`QuantPrefix::push`] merges and drops as needed to keep that true.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct QuantPrefix {
    blocks: Vec<Block>,
}

impl QuantPrefix {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn push(&mut self, quantifier: Quantifier, vars: impl IntoIterator<Item = Var>) {
        let vars: Vec<Var> = vars.into_iter().collect();
        if vars.is_empty() {
            return;
        }
        match self.blocks.last_mut() {
            Some(last) if last.quantifier == quantifier => last.vars.extend(vars),
            _ => self.blocks.push(Block { quantifier, vars }),
        }
    }

    /// Allocates `count` fresh variables (continuing the dense numbering)
    /// and appends them under `quantifier`.
    pub fn fresh(&mut self, quantifier: Quantifier, count: usize) -> Vec<Var> {
        let first = self.num_vars() as Var + 1;
        let vars: Vec<Var> = (first..first + count as Var).collect();
        self.push(quantifier, vars.iter().copied());
        vars
    }

    pub fn num_vars(&self) -> usize {
        self.blocks.iter().map(|b| b.vars.len()).sum()
    }

    pub fn max_var(&self) -> Var {
        self.vars().max().unwrap_or(0)
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.blocks.iter().flat_map(|b| b.vars.iter().copied())
    }

    pub fn alternation_depth(&self) -> usize {
        self.blocks.len()
    }

    pub fn innermost(&self) -> Option<Quantifier> {
        self.blocks.last().map(|b| b.quantifier)
    }

    /// `(block index, quantifier)` for every variable, indexed by var id.
    pub fn levels(&self) -> Vec<Option<(usize, Quantifier)>> {
        let mut out = vec![None; self.max_var() as usize + 1];
        for (i, b) in self.blocks.iter().enumerate() {
            for &v in &b.vars {
                out[v as usize] = Some((i, b.quantifier));
            }
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        let mut seen = HashSet::new();
        for (i, b) in self.blocks.iter().enumerate() {
            if b.vars.is_empty() {
                return Err(Error::InvalidInstance(format!("empty quantifier block {i}")));
            }
            if i > 0 && self.blocks[i - 1].quantifier == b.quantifier {
                return Err(Error::InvalidInstance(format!(
                    "blocks {} and {i} do not alternate",
                    i - 1
                )));
            }
            for &v in &b.vars {
                if v == 0 || !seen.insert(v) {
                    return Err(Error::InvalidInstance(format!("variable {v} quantified twice")));
                }
            }
        }
        Ok(())
    }
}

/// Prenex CNF (QDIMACS-shaped).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct QbfCnf {
    pub prefix: QuantPrefix,
    pub clauses: Vec<Vec<Lit>>,
}

impl QbfCnf {
    /// The designated always-false formula: `∃x. x ∧ ¬x`.
    pub fn trivially_false() -> QbfCnf {
        let mut prefix = QuantPrefix::new();
        let x = prefix.fresh(Quantifier::Exists, 1)[0];
        QbfCnf {
            prefix,
            clauses: vec![vec![Lit::pos(x)], vec![Lit::neg(x)]],
        }
    }

    /// The designated always-true formula: empty prefix, no clauses.
    pub fn trivially_true() -> QbfCnf {
        QbfCnf::default()
    }

    pub fn num_vars(&self) -> usize {
        self.prefix.max_var() as usize
    }

    /// The same formula as a circuit: one `or` gate per clause under an
    /// `and` output gate.
    pub fn to_circuit(&self) -> QbfCircuit {
        let mut next = self.prefix.max_var();
        let mut gates = Vec::with_capacity(self.clauses.len() + 1);
        for c in &self.clauses {
            next += 1;
            gates.push(Gate {
                id: next,
                kind: GateKind::Or,
                inputs: c.clone(),
            });
        }
        next += 1;
        let inputs = gates.iter().map(|g| Lit::pos(g.id)).collect();
        gates.push(Gate {
            id: next,
            kind: GateKind::And,
            inputs,
        });
        QbfCircuit {
            prefix: self.prefix.clone(),
            gates,
            output: Lit::pos(next),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.prefix.validate()?;
        let levels = self.prefix.levels();
        for (i, c) in self.clauses.iter().enumerate() {
            for l in c {
                if levels.get(l.var() as usize).copied().flatten().is_none() {
                    return Err(Error::InvalidInstance(format!(
                        "clause {i} uses unquantified variable {}",
                        l.var()
                    )));
                }
            }
        }
        Ok(())
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GateKind {
    And,
    Or,
}

impl GateKind {
    pub fn name(self) -> &'static str {
        match self {
            GateKind::And => "and",
            GateKind::Or => "or",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gate {
    pub id: Var,
    pub kind: GateKind,
    pub inputs: Vec<Lit>,
}

/// Prenex circuit (QCIR-shaped). Gates are stored in topological order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QbfCircuit {
    pub prefix: QuantPrefix,
    pub gates: Vec<Gate>,
    pub output: Lit,
}

impl QbfCircuit {
    pub fn validate(&self) -> Result<()> {
        self.prefix.validate()?;
        let mut defined: HashSet<Var> = self.prefix.vars().collect();
        for g in &self.gates {
            for l in &g.inputs {
                if !defined.contains(&l.var()) {
                    return Err(Error::InvalidInstance(format!(
                        "gate {} references undefined id {}",
                        g.id,
                        l.var()
                    )));
                }
            }
            if !defined.insert(g.id) {
                return Err(Error::InvalidInstance(format!("id {} defined twice", g.id)));
            }
        }
        if !defined.contains(&self.output.var()) {
            return Err(Error::InvalidInstance(format!(
                "output references undefined id {}",
                self.output.var()
            )));
        }
        Ok(())
    }

    pub fn num_gates(&self) -> usize {
        self.gates.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn push_merges_and_skips_empty() {
        let mut p = QuantPrefix::new();
        p.push(Quantifier::Exists, [1]);
        p.push(Quantifier::Forall, []);
        p.push(Quantifier::Exists, [2]);
        p.push(Quantifier::Forall, [3]);
        assert_eq!(p.alternation_depth(), 2);
        assert_eq!(p.blocks()[0].vars, vec![1, 2]);
        assert!(p.validate().is_ok());
    }

    #[test]
    fn fresh_continues_numbering() {
        let mut p = QuantPrefix::new();
        assert_eq!(p.fresh(Quantifier::Exists, 2), vec![1, 2]);
        assert_eq!(p.fresh(Quantifier::Forall, 1), vec![3]);
        assert_eq!(p.num_vars(), 3);
    }

    #[test]
    fn closed_formula_check() {
        let mut p = QuantPrefix::new();
        p.push(Quantifier::Exists, [1]);
        let f = QbfCnf {
            prefix: p,
            clauses: vec![vec![Lit::pos(1), Lit::neg(2)]],
        };
        assert!(f.validate().is_err());
    }
}
