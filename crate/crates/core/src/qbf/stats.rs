//! Size statistics for generated formulas.

use std::collections::BTreeMap;
use std::fmt;

use super::{QbfCircuit, QbfCnf, QuantPrefix};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EncodingStats {
    pub alternation_depth: usize,
    pub vars_per_block: Vec<usize>,
    pub num_vars: usize,
    /// CNF only: clause width → count.
    pub clause_count_by_width: BTreeMap<usize, usize>,
    pub num_clauses: usize,
    /// Circuit only: gate kind name → count.
    pub gate_count_by_kind: BTreeMap<&'static str, usize>,
    pub num_gates: usize,
}

impl EncodingStats {
    fn from_prefix(p: &QuantPrefix) -> Self {
        let vars_per_block: Vec<usize> = p.blocks().iter().map(|b| b.vars.len()).collect();
        EncodingStats {
            alternation_depth: p.alternation_depth(),
            num_vars: vars_per_block.iter().sum(),
            vars_per_block,
            ..Default::default()
        }
    }

    pub fn of_cnf(f: &QbfCnf) -> Self {
        let mut s = Self::from_prefix(&f.prefix);
        for c in &f.clauses {
            *s.clause_count_by_width.entry(c.len()).or_default() += 1;
        }
        s.num_clauses = f.clauses.len();
        s
    }

    pub fn of_circuit(c: &QbfCircuit) -> Self {
        let mut s = Self::from_prefix(&c.prefix);
        for g in &c.gates {
            *s.gate_count_by_kind.entry(g.kind.name()).or_default() += 1;
        }
        s.num_gates = c.gates.len();
        s
    }

    fn width_count(&self, pred: impl Fn(usize) -> bool) -> usize {
        self.clause_count_by_width
            .iter()
            .filter(|(w, _)| pred(**w))
            .map(|(_, c)| c)
            .sum()
    }

    pub fn unit_clauses(&self) -> usize {
        self.width_count(|w| w == 1)
    }

    pub fn binary_clauses(&self) -> usize {
        self.width_count(|w| w == 2)
    }

    pub fn ternary_clauses(&self) -> usize {
        self.width_count(|w| w == 3)
    }

    /// Clauses with four or more literals.
    pub fn long_clauses(&self) -> usize {
        self.width_count(|w| w >= 4)
    }
}

impl fmt::Display for EncodingStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "alternations={} vars={} blocks={:?}",
            self.alternation_depth, self.num_vars, self.vars_per_block
        )?;
        if self.num_gates > 0 || self.gate_count_by_kind.is_empty() && self.num_clauses == 0 {
            write!(f, " gates={}", self.num_gates)?;
            for (k, n) in &self.gate_count_by_kind {
                write!(f, " {k}={n}")?;
            }
        }
        if self.num_clauses > 0 {
            write!(
                f,
                " clauses={} unit={} binary={} ternary={} long={}",
                self.num_clauses,
                self.unit_clauses(),
                self.binary_clauses(),
                self.ternary_clauses(),
                self.long_clauses()
            )?;
        }
        Ok(())
    }
}

pub fn stats(f: &QbfCnf) -> EncodingStats {
    EncodingStats::of_cnf(f)
}

pub fn circuit_stats(c: &QbfCircuit) -> EncodingStats {
    EncodingStats::of_circuit(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qbf::{tseitin::tseitin, CircuitBuilder, Lit, Quantifier};

    #[test]
    fn empty_formula_is_all_zero() {
        assert_eq!(stats(&QbfCnf::trivially_true()), EncodingStats::default());
    }

    #[test]
    fn tseitin_adds_one_var_per_gate() {
        let mut p = QuantPrefix::new();
        let v = p.fresh(Quantifier::Forall, 2);
        let mut b = CircuitBuilder::new(p);
        let g = b.iff(Lit::pos(v[0]), Lit::pos(v[1]));
        let c = b.finish(g);
        let cs = circuit_stats(&c);
        let fs = stats(&tseitin(&c));
        assert_eq!(fs.num_vars, cs.num_vars + cs.num_gates);
        assert_eq!(cs.gate_count_by_kind["or"], 2);
        assert_eq!(fs.unit_clauses(), 1);
        assert_eq!(fs.alternation_depth, 2);
    }
}
