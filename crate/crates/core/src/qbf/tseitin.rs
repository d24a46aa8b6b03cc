//! Plain Tseitin lowering of a prenex circuit to prenex CNF.

use std::collections::HashMap;

use super::{GateKind, Lit, QbfCircuit, QbfCnf, Quantifier, Var};

/// One fresh existential variable per gate, `k + 1` defining clauses per
/// `k`-input gate, and a unit clause asserting the output.
///
/// Gate variables are numbered after all prefix variables in gate order and
/// appended to the innermost existential block (a new block is opened when
/// the prefix ends universally).
pub fn tseitin(c: &QbfCircuit) -> QbfCnf {
    let mut prefix = c.prefix.clone();
    let base = prefix.max_var();
    let mut rename: HashMap<Var, Var> = HashMap::with_capacity(c.gates.len());
    for (i, g) in c.gates.iter().enumerate() {
        rename.insert(g.id, base + 1 + i as Var);
    }
    let map = |l: Lit| -> Lit {
        match rename.get(&l.var()) {
            Some(&v) => Lit::new(v, l.is_negated()),
            None => l,
        }
    };
    prefix.push(
        Quantifier::Exists,
        (0..c.gates.len()).map(|i| base + 1 + i as Var),
    );

    let mut clauses = Vec::new();
    for g in &c.gates {
        let out = Lit::pos(rename[&g.id]);
        let ins: Vec<Lit> = g.inputs.iter().map(|&l| map(l)).collect();
        match g.kind {
            GateKind::And => {
                for &l in &ins {
                    clauses.push(vec![!out, l]);
                }
                let mut long = vec![out];
                long.extend(ins.iter().map(|&l| !l));
                clauses.push(long);
            }
            GateKind::Or => {
                for &l in &ins {
                    clauses.push(vec![out, !l]);
                }
                let mut long = vec![!out];
                long.extend(ins.iter().copied());
                clauses.push(long);
            }
        }
    }
    clauses.push(vec![map(c.output)]);
    QbfCnf { prefix, clauses }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qbf::{CircuitBuilder, QuantPrefix};

    #[test]
    fn single_and_gate() {
        let mut p = QuantPrefix::new();
        let v = p.fresh(Quantifier::Exists, 2);
        let mut b = CircuitBuilder::new(p);
        let g = b.and([Lit::pos(v[0]), Lit::pos(v[1])]);
        let c = b.finish(g);
        let f = tseitin(&c);
        assert_eq!(f.prefix.num_vars(), 3);
        assert_eq!(f.clauses.len(), 4);
        assert_eq!(f.clauses.last().unwrap(), &vec![Lit::pos(3)]);
        assert_eq!(f.prefix.alternation_depth(), 1);
    }

    #[test]
    fn universal_innermost_gets_new_block() {
        let mut p = QuantPrefix::new();
        let x = p.fresh(Quantifier::Exists, 1)[0];
        let y = p.fresh(Quantifier::Forall, 1)[0];
        let mut b = CircuitBuilder::new(p);
        let g = b.or([Lit::pos(x), Lit::pos(y)]);
        let f = tseitin(&b.finish(g));
        assert_eq!(f.prefix.alternation_depth(), 3);
        assert_eq!(f.prefix.innermost(), Some(Quantifier::Exists));
    }
}
