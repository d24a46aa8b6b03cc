//! Circuit-level encoders: lifted board (LA, LN) with a universal symbolic
//! position, and stateless (SA, SN) with constraints over the moves only.

use log::{debug, warn};

use crate::error::{check_depth, Error, Result};
use crate::explicit::bit_width;
use crate::game::{GameInstance, GeneralizedHexInstance, Pos};
use crate::qbf::{CircuitBuilder, Lit, QbfCircuit, QuantPrefix, Quantifier, Var};

/// Bit-vector of literals, least significant bit first.
pub type BitVec = Vec<Lit>;

fn lits(vars: &[Var]) -> BitVec {
    vars.iter().map(|&v| Lit::pos(v)).collect()
}

/// `x` decodes to `v`.
pub fn gadget_bin(b: &mut CircuitBuilder, x: &[Lit], v: usize) -> Result<Lit> {
    if x.len() < usize::BITS as usize && v >> x.len() != 0 {
        return Err(Error::BitWidth {
            value: v,
            width: x.len(),
        });
    }
    Ok(b.and(x.iter().enumerate().map(|(j, &l)| if v >> j & 1 == 1 { l } else { !l })))
}

/// Bitwise equality: a conjunction of the two implications per bit.
pub fn gadget_eq(b: &mut CircuitBuilder, x: &[Lit], y: &[Lit]) -> Lit {
    assert_eq!(x.len(), y.len(), "bit-vector widths differ");
    let mut parts = Vec::with_capacity(2 * x.len());
    for (&a, &c) in x.iter().zip(y) {
        parts.push(b.or([!a, c]));
        parts.push(b.or([a, !c]));
    }
    b.and(parts)
}

/// Some bit differs.
pub fn gadget_neq(b: &mut CircuitBuilder, x: &[Lit], y: &[Lit]) -> Lit {
    assert_eq!(x.len(), y.len(), "bit-vector widths differ");
    let mut parts = Vec::with_capacity(x.len());
    for (&a, &c) in x.iter().zip(y) {
        let some = b.or([a, c]);
        let not_both = b.or([!a, !c]);
        parts.push(b.and([some, not_both]));
    }
    b.or(parts)
}

/// Unsigned `x < n`; constant true when every pattern of `x` is below `n`.
pub fn gadget_lt_const(b: &mut CircuitBuilder, x: &[Lit], n: usize) -> Lit {
    if x.len() < usize::BITS as usize && n >> x.len() != 0 {
        return b.constant(true);
    }
    let mut lt = b.constant(false);
    for (j, &xj) in x.iter().enumerate() {
        lt = if n >> j & 1 == 1 {
            b.or([!xj, lt])
        } else {
            b.and([!xj, lt])
        };
    }
    lt
}

/// Variables of a lifted or stateless encoding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftedVars {
    pub width: usize,
    /// `moves[t - 1]`.
    pub moves: Vec<Vec<Var>>,
    /// Witness nodes `e^0 …`.
    pub witness: Vec<Vec<Var>>,
    /// Universal symbolic position (lifted only).
    pub sympos: Vec<Var>,
    /// `occupied[t - 1]`, `white[t - 1]` for `t = 1 ..= d + 1` (lifted only).
    pub occupied: Vec<Var>,
    pub white: Vec<Var>,
    /// Symbolic neighbour (LN only).
    pub neighbor: Vec<Var>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftedEncoding {
    pub circuit: QbfCircuit,
    /// `None` for the designated trivial circuits.
    pub vars: Option<LiftedVars>,
}

/// Empty prefix; the output is the constant.
pub fn trivial_circuit(value: bool) -> QbfCircuit {
    let mut b = CircuitBuilder::new(QuantPrefix::new());
    let out = b.constant(value);
    b.finish(out)
}

impl LiftedEncoding {
    fn trivial(value: bool) -> Self {
        LiftedEncoding {
            circuit: trivial_circuit(value),
            vars: None,
        }
    }
}

/// Depth with the same game value on `n` positions: the board is full
/// after `n` plies, so deeper games end early.
pub fn playable_depth(n: usize, d: usize) -> usize {
    if d <= n || n == 0 {
        d
    } else if n % 2 == 1 {
        n
    } else {
        n - 1
    }
}

/// Move and witness declarations shared by all four encoders.
fn declare_moves(prefix: &mut QuantPrefix, width: usize, d: usize, witness_len: usize) -> LiftedVars {
    let moves = (1..=d)
        .map(|t| {
            let q = if t % 2 == 1 {
                Quantifier::Exists
            } else {
                Quantifier::Forall
            };
            prefix.fresh(q, width)
        })
        .collect();
    let witness = (0..witness_len)
        .map(|_| prefix.fresh(Quantifier::Exists, width))
        .collect();
    LiftedVars {
        width,
        moves,
        witness,
        sympos: Vec::new(),
        occupied: Vec::new(),
        white: Vec::new(),
        neighbor: Vec::new(),
    }
}

fn black_bound(b: &mut CircuitBuilder, v: &LiftedVars, n: usize, d: usize) -> Lit {
    let parts: Vec<Lit> = (1..=d)
        .step_by(2)
        .map(|t| gadget_lt_const(b, &lits(&v.moves[t - 1]), n))
        .collect();
    b.and(parts)
}

/// `⋁_{set} ⋀_i bin(e^i, v_i)` over the winning sets.
fn goal_win(b: &mut CircuitBuilder, v: &LiftedVars, sets: &[Vec<Pos>]) -> Result<Lit> {
    let mut disj = Vec::with_capacity(sets.len());
    for set in sets {
        let mut conj = Vec::with_capacity(set.len());
        for (i, &p) in set.iter().enumerate() {
            conj.push(gadget_bin(b, &lits(&v.witness[i]), p)?);
        }
        disj.push(b.and(conj));
    }
    Ok(b.or(disj))
}

/// `src ∧ trg`: first witness on `border_s`, last on `border_e`.
fn source_target(
    b: &mut CircuitBuilder,
    v: &LiftedVars,
    g: &GeneralizedHexInstance,
) -> Result<Lit> {
    let first = lits(&v.witness[0]);
    let last = lits(v.witness.last().unwrap());
    let src = g
        .border_s()
        .iter()
        .map(|&s| gadget_bin(b, &first, s))
        .collect::<Result<Vec<_>>>()?;
    let src = b.or(src);
    let trg = g
        .border_e()
        .iter()
        .map(|&e| gadget_bin(b, &last, e))
        .collect::<Result<Vec<_>>>()?;
    let trg = b.or(trg);
    Ok(b.and([src, trg]))
}

/// Claim-free view of `game` with winning sets that fit in `d` plies.
fn usable_game(game: &GameInstance, d: usize) -> GameInstance {
    let game = if game.is_claim_free() {
        game.clone()
    } else {
        game.absorb_claims().0
    };
    let budget = d.div_ceil(2);
    if game.win_sets().iter().any(|w| w.len() > budget) {
        debug!("dropping winning sets larger than {budget}: they cannot be completed");
    }
    let kept = game
        .win_sets()
        .iter()
        .filter(|w| w.len() <= budget)
        .cloned()
        .collect::<Vec<_>>();
    GameInstance::open(game.num_positions(), kept).expect("positions unchanged")
}

fn warn_without_closure(g: &GeneralizedHexInstance) {
    if g.border_e().iter().any(|&v| !g.has_edge(v, v)) {
        warn!("border_e nodes without self-loops: connections shorter than the witness are not representable");
    }
}

/// Lifted-board skeleton. `goal` receives the builder and the variables
/// (including the neighbour vector when `with_neighbor`) and returns the
/// goal literal.
fn lifted(
    n: usize,
    d: usize,
    with_neighbor: bool,
    goal: impl FnOnce(&mut CircuitBuilder, &LiftedVars) -> Result<Lit>,
) -> Result<LiftedEncoding> {
    let width = bit_width(n);
    let ell = (d - 1) / 2;
    let mut prefix = QuantPrefix::new();
    let mut v = declare_moves(&mut prefix, width, d, ell + 1);
    v.sympos = prefix.fresh(Quantifier::Forall, width);
    for _ in 1..=d + 1 {
        v.occupied.push(prefix.fresh(Quantifier::Exists, 1)[0]);
        v.white.push(prefix.fresh(Quantifier::Exists, 1)[0]);
    }
    if with_neighbor {
        v.neighbor = prefix.fresh(Quantifier::Exists, width);
    }
    let mut b = CircuitBuilder::new(prefix);
    let sigma = lits(&v.sympos);
    let occ = |t: usize| Lit::pos(v.occupied[t - 1]);
    let wht = |t: usize| Lit::pos(v.white[t - 1]);

    let mut top = vec![goal(&mut b, &v)?];

    // Witness positions are black at the end.
    let hits: Vec<Lit> = v
        .witness
        .iter()
        .map(|e| gadget_eq(&mut b, &sigma, &lits(e)))
        .collect();
    let any_hit = b.or(hits);
    let black_end = b.and([!wht(d + 1), occ(d + 1)]);
    top.push(b.implies(any_hit, black_end));
    top.push(!occ(1));

    for t in 1..=d {
        let here = gadget_eq(&mut b, &sigma, &lits(&v.moves[t - 1]));
        let keep_w = b.iff(wht(t), wht(t + 1));
        let keep_o = b.iff(occ(t), occ(t + 1));
        let keep = b.and([keep_w, keep_o]);
        if t % 2 == 1 {
            let place = b.and([!occ(t), !wht(t + 1), occ(t + 1)]);
            top.push(b.implies(here, place));
            top.push(b.implies(!here, keep));
        } else {
            let takes = b.and([here, !occ(t)]);
            let place = b.and([wht(t + 1), occ(t + 1)]);
            top.push(b.implies(takes, place));
            top.push(b.implies(!takes, keep));
        }
    }
    top.push(black_bound(&mut b, &v, n, d));
    let out = b.and(top);
    Ok(LiftedEncoding {
        circuit: b.finish(out),
        vars: Some(v),
    })
}

/// Stateless skeleton with `witness_len` witness nodes. `goal` gets the
/// builder and variables and returns the goal literal, including any extra
/// restrictions such as symmetry breaking.
pub(crate) fn stateless(
    n: usize,
    d: usize,
    witness_len: usize,
    goal: impl FnOnce(&mut CircuitBuilder, &LiftedVars) -> Result<Lit>,
) -> Result<LiftedEncoding> {
    let width = bit_width(n);
    let mut prefix = QuantPrefix::new();
    let v = declare_moves(&mut prefix, width, d, witness_len);
    let mut b = CircuitBuilder::new(prefix);
    let mut top = vec![goal(&mut b, &v)?];

    // Every witness node is one of Black's moves.
    for e in &v.witness {
        let hits: Vec<Lit> = (1..=d)
            .step_by(2)
            .map(|t| gadget_eq(&mut b, &lits(e), &lits(&v.moves[t - 1])))
            .collect();
        top.push(b.or(hits));
    }
    top.push(black_bound(&mut b, &v, n, d));
    // Black never plays on a position taken before.
    for t in (1..=d).step_by(2) {
        for i in 1..t {
            let ne = gadget_neq(&mut b, &lits(&v.moves[t - 1]), &lits(&v.moves[i - 1]));
            top.push(ne);
        }
    }
    let out = b.and(top);
    Ok(LiftedEncoding {
        circuit: b.finish(out),
        vars: Some(v),
    })
}

/// LA: lifted board with the explicit winning sets.
pub fn encode_la(game: &GameInstance, d: usize) -> Result<LiftedEncoding> {
    check_depth(d)?;
    let d = playable_depth(game.num_positions(), d);
    let game = usable_game(game, d);
    if game.win_sets().is_empty() {
        return Ok(LiftedEncoding::trivial(false));
    }
    if game.win_sets()[0].is_empty() {
        return Ok(LiftedEncoding::trivial(true));
    }
    lifted(game.num_positions(), d, false, |b, v| goal_win(b, v, game.win_sets()))
}

/// SA: stateless with the explicit winning sets.
pub fn encode_sa(game: &GameInstance, d: usize) -> Result<LiftedEncoding> {
    check_depth(d)?;
    let d = playable_depth(game.num_positions(), d);
    let game = usable_game(game, d);
    if game.win_sets().is_empty() {
        return Ok(LiftedEncoding::trivial(false));
    }
    if game.win_sets()[0].is_empty() {
        return Ok(LiftedEncoding::trivial(true));
    }
    stateless(game.num_positions(), d, (d - 1) / 2 + 1, |b, v| {
        goal_win(b, v, game.win_sets())
    })
}

fn decided(g: &GeneralizedHexInstance) -> Option<bool> {
    if g.se_adjacent() {
        Some(true)
    } else if g.num_nodes() == 0 || g.border_s().is_empty() || g.border_e().is_empty() {
        Some(false)
    } else {
        None
    }
}

/// LN: lifted board with a symbolic neighbour `ν` of the universal
/// position. Expects the stutter closure to have been applied.
pub fn encode_ln(g: &GeneralizedHexInstance, d: usize) -> Result<LiftedEncoding> {
    check_depth(d)?;
    if let Some(value) = decided(g) {
        return Ok(LiftedEncoding::trivial(value));
    }
    warn_without_closure(g);
    let n = g.num_nodes();
    let d = playable_depth(n, d);
    let ell = (d - 1) / 2;
    lifted(n, d, true, |b, v| {
        let sigma = lits(&v.sympos);
        let nu = lits(&v.neighbor);
        let mut conj = vec![source_target(b, v, g)?];
        // Witness steps that leave the symbolic position.
        let steps: Vec<Lit> = (0..ell)
            .map(|i| gadget_eq(b, &lits(&v.witness[i]), &sigma))
            .collect();
        for p in 0..n {
            let at = gadget_bin(b, &sigma, p)?;
            let succ = if g.neighbors(p).is_empty() {
                // No successor exists: no witness step may leave `p`.
                let any = b.or(steps.iter().copied());
                !any
            } else {
                let options = g
                    .neighbors(p)
                    .iter()
                    .map(|&w| gadget_bin(b, &nu, w))
                    .collect::<Result<Vec<_>>>()?;
                b.or(options)
            };
            conj.push(b.implies(at, succ));
        }
        for i in 0..ell {
            let next = gadget_eq(b, &lits(&v.witness[i + 1]), &nu);
            conj.push(b.implies(steps[i], next));
        }
        Ok(b.and(conj))
    })
}

/// SN: stateless with neighbour constraints between consecutive witness
/// nodes. Expects the stutter closure to have been applied.
pub fn encode_sn(g: &GeneralizedHexInstance, d: usize) -> Result<LiftedEncoding> {
    check_depth(d)?;
    if let Some(value) = decided(g) {
        return Ok(LiftedEncoding::trivial(value));
    }
    warn_without_closure(g);
    let n = g.num_nodes();
    let d = playable_depth(n, d);
    let ell = (d - 1) / 2;
    stateless(n, d, ell + 1, |b, v| {
        let mut conj = vec![source_target(b, v, g)?];
        for i in 0..ell {
            let cur = lits(&v.witness[i]);
            let next = lits(&v.witness[i + 1]);
            for p in 0..n {
                let at = gadget_bin(b, &cur, p)?;
                let options = g
                    .neighbors(p)
                    .iter()
                    .map(|&w| gadget_bin(b, &next, w))
                    .collect::<Result<Vec<_>>>()?;
                let succ = b.or(options);
                conj.push(b.implies(at, succ));
            }
        }
        Ok(b.and(conj))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qbf::eval::evaluate_circuit;
    use crate::qbf::{GateKind, QuantPrefix};

    fn builder(w: usize) -> (CircuitBuilder, BitVec) {
        let mut p = QuantPrefix::new();
        let x = lits(&p.fresh(Quantifier::Exists, w));
        (CircuitBuilder::new(p), x)
    }

    #[test]
    fn bin_of_five() {
        let (mut b, x) = builder(4);
        let g = gadget_bin(&mut b, &x, 5).unwrap();
        let c = b.finish(g);
        assert_eq!(c.gates.len(), 1);
        assert_eq!(c.gates[0].kind, GateKind::And);
        assert_eq!(c.gates[0].inputs, vec![x[0], !x[1], x[2], !x[3]]);
        let (mut b, x) = builder(2);
        assert!(matches!(
            gadget_bin(&mut b, &x, 4),
            Err(Error::BitWidth { value: 4, width: 2 })
        ));
    }

    #[test]
    fn eq_with_itself_is_true() {
        let (mut b, x) = builder(3);
        let t = b.constant(true);
        assert_eq!(gadget_eq(&mut b, &x, &x), t);
        assert_eq!(gadget_neq(&mut b, &x, &x), !t);
    }

    #[test]
    fn lt_const_truth_table() {
        for n in 1..=8 {
            for value in 0..8usize {
                let (mut b, x) = builder(3);
                let fixed: Vec<Lit> = (0..3)
                    .map(|j| if value >> j & 1 == 1 { x[j] } else { !x[j] })
                    .collect();
                let lt = gadget_lt_const(&mut b, &x, n);
                let guard = b.and(fixed);
                let out = b.and([guard, lt]);
                let c = b.finish(out);
                assert_eq!(evaluate_circuit(&c).unwrap(), value < n, "{value} < {n}");
            }
        }
    }

    #[test]
    fn one_position_games() {
        let g = GameInstance::open(1, [vec![0]]).unwrap();
        assert!(evaluate_circuit(&encode_la(&g, 1).unwrap().circuit).unwrap());
        assert!(evaluate_circuit(&encode_sa(&g, 1).unwrap().circuit).unwrap());
    }

    #[test]
    fn alternation_depths() {
        let g = GameInstance::open(5, [vec![0, 1], vec![2]]).unwrap();
        for d in [1, 3, 5] {
            // Move blocks, then the universal position and the state block.
            assert_eq!(encode_la(&g, d).unwrap().circuit.prefix.alternation_depth(), d + 2);
            assert_eq!(encode_sa(&g, d).unwrap().circuit.prefix.alternation_depth(), d);
        }
    }

    #[test]
    fn single_node_neighbor_encodings() {
        let g = GeneralizedHexInstance::new(1, [(0, 0)], [0], [0]).unwrap();
        assert!(evaluate_circuit(&encode_ln(&g, 1).unwrap().circuit).unwrap());
        assert!(evaluate_circuit(&encode_sn(&g, 1).unwrap().circuit).unwrap());
    }
}
