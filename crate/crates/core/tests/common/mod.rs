//! Random instance generators shared by the integration tests.
#![allow(dead_code)]

use posqbf::game::{GeneralizedHexInstance, Player};
use posqbf::hex::HexBoard;
use posqbf::qbf::{Gate, GateKind, Lit, QbfCircuit, QbfCnf, QuantPrefix, Quantifier};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Variables `1..=k` in order, split into alternating blocks.
pub fn random_prefix(rng: &mut StdRng, k: usize) -> QuantPrefix {
    let mut p = QuantPrefix::new();
    let mut q = if rng.gen_bool(0.5) {
        Quantifier::Exists
    } else {
        Quantifier::Forall
    };
    let mut v = 1;
    while v <= k {
        let len = rng.gen_range(1..=(k - v + 1));
        p.push(q, (v..v + len).map(|x| x as u32));
        v += len;
        q = match q {
            Quantifier::Exists => Quantifier::Forall,
            Quantifier::Forall => Quantifier::Exists,
        };
    }
    p
}

fn random_lit(rng: &mut StdRng, max: usize) -> Lit {
    Lit::new(rng.gen_range(1..=max) as u32, rng.gen_bool(0.5))
}

pub fn random_cnf(rng: &mut StdRng, max_vars: usize, max_clauses: usize) -> QbfCnf {
    let k = rng.gen_range(1..=max_vars);
    let prefix = random_prefix(rng, k);
    let clauses = (0..rng.gen_range(0..=max_clauses))
        .map(|_| (0..rng.gen_range(0..=4)).map(|_| random_lit(rng, k)).collect())
        .collect();
    QbfCnf { prefix, clauses }
}

/// Prefix variables `1..=k`, then gates numbered densely after them.
pub fn random_circuit(rng: &mut StdRng, max_vars: usize, max_gates: usize) -> QbfCircuit {
    let k = rng.gen_range(1..=max_vars);
    let prefix = random_prefix(rng, k);
    let mut gates = Vec::new();
    for i in 0..rng.gen_range(1..=max_gates) {
        let id = (k + i + 1) as u32;
        let inputs = (0..rng.gen_range(0..=3))
            .map(|_| random_lit(rng, k + i))
            .collect();
        let kind = if rng.gen_bool(0.5) {
            GateKind::And
        } else {
            GateKind::Or
        };
        gates.push(Gate { id, kind, inputs });
    }
    let last = gates.last().unwrap().id;
    let output = Lit::new(last, rng.gen_bool(0.5));
    QbfCircuit {
        prefix,
        gates,
        output,
    }
}

/// Claim-free instance with `1..=max_nodes` nodes.
pub fn random_ghex(rng: &mut StdRng, max_nodes: usize) -> GeneralizedHexInstance {
    let n = rng.gen_range(1..=max_nodes);
    let density = rng.gen_range(0.15..0.6);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(density) {
                edges.push((u, v));
            }
        }
    }
    let bs: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.35)).collect();
    let be: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.35)).collect();
    GeneralizedHexInstance::new(n, edges, bs, be).unwrap()
}

/// Every board of side 1..=3 with at most two stones of either colour.
pub fn small_boards() -> Vec<HexBoard> {
    let mut out = Vec::new();
    for size in 1..=3 {
        let empty = HexBoard::new(size).unwrap();
        let cells: Vec<_> = empty.cells().collect();
        out.push(empty.clone());
        for (i, &a) in cells.iter().enumerate() {
            for pa in [Player::Black, Player::White] {
                let mut one = empty.clone();
                one.place(a, pa).unwrap();
                out.push(one.clone());
                for &b in &cells[i + 1..] {
                    for pb in [Player::Black, Player::White] {
                        let mut two = one.clone();
                        two.place(b, pb).unwrap();
                        out.push(two);
                    }
                }
            }
        }
    }
    out
}
