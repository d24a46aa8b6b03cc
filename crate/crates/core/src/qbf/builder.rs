use std::collections::HashMap;

use super::{Gate, GateKind, Lit, QbfCircuit, QuantPrefix, Var};

/// Hash-consing circuit builder with light constant folding.
///
/// The constant `true` is the empty `and()` gate, created on first use;
/// `false` is its negation. Gate inputs are sorted and deduplicated, so
/// structurally equal gates collapse to one id.
pub struct CircuitBuilder {
    prefix: QuantPrefix,
    next_id: Var,
    gates: Vec<Gate>,
    cache: HashMap<(GateKind, Vec<Lit>), Lit>,
    true_lit: Option<Lit>,
}

impl CircuitBuilder {
    /// All variables must already be declared in `prefix`.
    pub fn new(prefix: QuantPrefix) -> Self {
        let next_id = prefix.max_var() + 1;
        CircuitBuilder {
            prefix,
            next_id,
            gates: Vec::new(),
            cache: HashMap::new(),
            true_lit: None,
        }
    }

    pub fn prefix(&self) -> &QuantPrefix {
        &self.prefix
    }

    pub fn num_gates(&self) -> usize {
        self.gates.len()
    }

    pub fn constant(&mut self, value: bool) -> Lit {
        let t = match self.true_lit {
            Some(t) => t,
            None => {
                let t = self.emit(GateKind::And, Vec::new());
                self.true_lit = Some(t);
                t
            }
        };
        if value {
            t
        } else {
            !t
        }
    }

    fn is_const(&self, l: Lit) -> Option<bool> {
        let t = self.true_lit?;
        if l == t {
            Some(true)
        } else if l == !t {
            Some(false)
        } else {
            None
        }
    }

    fn emit(&mut self, kind: GateKind, inputs: Vec<Lit>) -> Lit {
        let id = self.next_id;
        self.next_id += 1;
        self.gates.push(Gate {
            id,
            kind,
            inputs,
        });
        Lit::pos(id)
    }

    fn gate(&mut self, kind: GateKind, inputs: impl IntoIterator<Item = Lit>) -> Lit {
        // `absorbing` is the constant that decides the gate on its own.
        let absorbing = kind == GateKind::Or;
        let mut ins = Vec::new();
        for l in inputs {
            match self.is_const(l) {
                Some(c) if c == absorbing => return self.constant(absorbing),
                Some(_) => {}
                None => ins.push(l),
            }
        }
        ins.sort_unstable_by_key(|l| (l.var(), l.is_negated()));
        ins.dedup();
        if ins.windows(2).any(|w| w[0].var() == w[1].var()) {
            return self.constant(absorbing);
        }
        match ins.len() {
            0 => self.constant(!absorbing),
            1 => ins[0],
            _ => {
                let key = (kind, ins);
                if let Some(&l) = self.cache.get(&key) {
                    return l;
                }
                let l = self.emit(kind, key.1.clone());
                self.cache.insert(key, l);
                l
            }
        }
    }

    pub fn and(&mut self, inputs: impl IntoIterator<Item = Lit>) -> Lit {
        self.gate(GateKind::And, inputs)
    }

    pub fn or(&mut self, inputs: impl IntoIterator<Item = Lit>) -> Lit {
        self.gate(GateKind::Or, inputs)
    }

    pub fn implies(&mut self, a: Lit, b: Lit) -> Lit {
        self.or([!a, b])
    }

    pub fn iff(&mut self, a: Lit, b: Lit) -> Lit {
        let ab = self.implies(a, b);
        let ba = self.implies(b, a);
        self.and([ab, ba])
    }

    pub fn finish(self, output: Lit) -> QbfCircuit {
        QbfCircuit {
            prefix: self.prefix,
            gates: self.gates,
            output,
        }
    }
}
