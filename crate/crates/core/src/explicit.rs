//! Clause-level encoders with an explicit board: EA (all winning sets),
//! EN (neighbour-based witness path) and ET (transversal reachability).
//!
//! The board is kept after Black's moves only. Moves are logarithmic:
//! position `v` is written over `⌈lg n⌉` bits, least significant first.

use std::collections::BTreeMap;

use log::warn;

use crate::error::{check_depth, Result};
use crate::game::{GameInstance, GeneralizedHexInstance, Pos};
use crate::qbf::{Lit, QbfCnf, QuantPrefix, Quantifier, Var};

/// `⌈lg n⌉`, with `bit_width(0) = bit_width(1) = 0`.
pub fn bit_width(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

/// The size-table column a clause family is accounted under.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClauseClass {
    Unit,
    Binary,
    Ternary,
    Long,
}

/// Clause counts per nominal family column (independent of how constant
/// substitution shortened individual clauses).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FamilyCounts {
    pub unit: usize,
    pub binary: usize,
    pub ternary: usize,
    pub long: usize,
}

impl FamilyCounts {
    fn add(&mut self, c: ClauseClass) {
        match c {
            ClauseClass::Unit => self.unit += 1,
            ClauseClass::Binary => self.binary += 1,
            ClauseClass::Ternary => self.ternary += 1,
            ClauseClass::Long => self.long += 1,
        }
    }
}

/// Goal-specific variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GoalVars {
    /// One `h` per winning set, in winning-set order.
    Hyperedge(Vec<Var>),
    /// `path[i][v]`: node `v` is the `i`-th witness node.
    Path(Vec<Vec<Var>>),
    /// `reach[v]`: `v` is joined to White's start border through non-black
    /// nodes.
    Reach(Vec<Var>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExplicitVarMap {
    pub width: usize,
    /// `moves[t - 1][j]`: bit `j` of the move at time `t`.
    pub moves: Vec<Vec<Var>>,
    /// Keyed by odd `t`; one variable per position.
    pub black: BTreeMap<usize, Vec<Var>>,
    pub white: BTreeMap<usize, Vec<Var>>,
    pub goal: GoalVars,
}

impl ExplicitVarMap {
    /// `c varmap …` comment lines describing every variable family.
    pub fn comments(&self) -> Vec<String> {
        let range = |vs: &[Var]| match (vs.first(), vs.last()) {
            (Some(a), Some(b)) => format!("{a}..{b}"),
            _ => "-".to_string(),
        };
        let mut out = Vec::new();
        for (t, bits) in self.moves.iter().enumerate() {
            out.push(format!("varmap move t={} bits {}", t + 1, range(bits)));
        }
        for (t, vs) in &self.black {
            out.push(format!("varmap black t={t} pos {}", range(vs)));
        }
        for (t, vs) in &self.white {
            out.push(format!("varmap white t={t} pos {}", range(vs)));
        }
        match &self.goal {
            GoalVars::Hyperedge(h) => out.push(format!("varmap win-set {}", range(h))),
            GoalVars::Path(p) => {
                for (i, vs) in p.iter().enumerate() {
                    out.push(format!("varmap path i={i} pos {}", range(vs)));
                }
            }
            GoalVars::Reach(r) => out.push(format!("varmap reach pos {}", range(r))),
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExplicitEncoding {
    pub formula: QbfCnf,
    /// `None` when the instance was decided up front and the formula is
    /// one of the designated trivial formulas.
    pub vars: Option<ExplicitVarMap>,
    pub families: FamilyCounts,
}

impl ExplicitEncoding {
    fn trivial(value: bool) -> Self {
        ExplicitEncoding {
            formula: if value {
                QbfCnf::trivially_true()
            } else {
                QbfCnf::trivially_false()
            },
            vars: None,
            families: FamilyCounts::default(),
        }
    }
}

/// A literal or a constant standing for a variable outside the prefix.
#[derive(Copy, Clone, Debug)]
enum Term {
    L(Lit),
    C(bool),
}

impl std::ops::Not for Term {
    type Output = Term;
    fn not(self) -> Term {
        match self {
            Term::L(l) => Term::L(!l),
            Term::C(b) => Term::C(!b),
        }
    }
}

struct Builder {
    prefix: QuantPrefix,
    clauses: Vec<Vec<Lit>>,
    families: FamilyCounts,
    conflict: bool,
}

impl Builder {
    fn clause(&mut self, class: ClauseClass, terms: impl IntoIterator<Item = Term>) {
        let mut lits = Vec::new();
        for t in terms {
            match t {
                Term::C(true) => return,
                Term::C(false) => {}
                Term::L(l) => lits.push(l),
            }
        }
        if lits.is_empty() {
            self.conflict = true;
            return;
        }
        self.families.add(class);
        self.clauses.push(lits);
    }
}

fn pos(v: Var) -> Term {
    Term::L(Lit::pos(v))
}

fn neg(v: Var) -> Term {
    Term::L(Lit::neg(v))
}

/// Shared board part: prefix and clauses (2)–(6) style frame constraints.
struct Board {
    b: Builder,
    map: ExplicitVarMap,
    n: usize,
    d: usize,
}

impl Board {
    fn new(
        n: usize,
        d: usize,
        initial_black: &dyn Fn(Pos) -> bool,
        initial_white: &dyn Fn(Pos) -> bool,
    ) -> Self {
        let width = bit_width(n);
        let mut prefix = QuantPrefix::new();
        let mut moves = Vec::new();
        let mut black = BTreeMap::new();
        let mut white = BTreeMap::new();
        for t in 1..=d {
            let q = if t % 2 == 1 {
                Quantifier::Exists
            } else {
                Quantifier::Forall
            };
            moves.push(prefix.fresh(q, width));
            if t % 2 == 1 {
                black.insert(t, prefix.fresh(Quantifier::Exists, n));
                white.insert(t, prefix.fresh(Quantifier::Exists, n));
            }
        }
        let mut board = Board {
            b: Builder {
                prefix,
                clauses: Vec::new(),
                families: FamilyCounts::default(),
                conflict: false,
            },
            map: ExplicitVarMap {
                width,
                moves,
                black,
                white,
                goal: GoalVars::Reach(Vec::new()),
            },
            n,
            d,
        };
        board.frame(initial_black, initial_white);
        board
    }

    fn black_at(&self, t: isize, v: Pos, init: &dyn Fn(Pos) -> bool) -> Term {
        if t < 1 {
            Term::C(init(v))
        } else {
            pos(self.map.black[&(t as usize)][v])
        }
    }

    fn white_at(&self, t: isize, v: Pos, init: &dyn Fn(Pos) -> bool) -> Term {
        if t < 1 {
            Term::C(init(v))
        } else {
            pos(self.map.white[&(t as usize)][v])
        }
    }

    fn frame(&mut self, ib: &dyn Fn(Pos) -> bool, iw: &dyn Fn(Pos) -> bool) {
        let w = self.map.width;
        for t in (1..=self.d).step_by(2) {
            let ti = t as isize;
            for v in 0..self.n {
                let black_t = self.black_at(ti, v, ib);
                let white_t = self.white_at(ti, v, iw);
                let black_prev = self.black_at(ti - 2, v, ib);
                let white_prev = self.white_at(ti - 2, v, iw);
                // White stones persist.
                self.b
                    .clause(ClauseClass::Binary, [!white_prev, white_t]);
                // White's move onto a non-black position makes it white.
                if t >= 3 {
                    let mv = &self.map.moves[t - 2];
                    let mut c: Vec<Term> = (0..w)
                        .map(|j| if v >> j & 1 == 1 { neg(mv[j]) } else { pos(mv[j]) })
                        .collect();
                    c.push(black_prev);
                    c.push(white_t);
                    self.b.clause(ClauseClass::Long, c);
                }
                // A white position is not black.
                self.b.clause(ClauseClass::Binary, [!white_t, !black_t]);
                // A new black position must be Black's move at time t.
                let mv = self.map.moves[t - 1].clone();
                let class = if t == 1 {
                    ClauseClass::Binary
                } else {
                    ClauseClass::Ternary
                };
                for (j, &m) in mv.iter().enumerate() {
                    let bit = if v >> j & 1 == 1 { pos(m) } else { neg(m) };
                    self.b.clause(class, [bit, black_prev, !black_t]);
                }
            }
        }
    }

    fn final_black(&self, v: Pos) -> Term {
        pos(self.map.black[&self.d][v])
    }

    fn finish(self, goal: GoalVars) -> ExplicitEncoding {
        if self.b.conflict {
            return ExplicitEncoding::trivial(false);
        }
        let mut map = self.map;
        map.goal = goal;
        ExplicitEncoding {
            formula: QbfCnf {
                prefix: self.b.prefix,
                clauses: self.b.clauses,
            },
            vars: Some(map),
            families: self.b.families,
        }
    }
}

/// The board part alone (no goal): prefix with move and position variables
/// and the frame clauses. Initial claims are compiled into constants.
pub fn encode_board(game: &GameInstance, d: usize) -> Result<ExplicitEncoding> {
    check_depth(d)?;
    let ib = |v: Pos| game.initial_black().contains(&v);
    let iw = |v: Pos| game.initial_white().contains(&v);
    let board = Board::new(game.num_positions(), d, &ib, &iw);
    Ok(board.finish(GoalVars::Hyperedge(Vec::new())))
}

/// EA: one `h` per winning set, `⋁ h`, and `h → black_v^d` for `v ∈ h`.
pub fn encode_ea(game: &GameInstance, d: usize) -> Result<ExplicitEncoding> {
    check_depth(d)?;
    let budget = d.div_ceil(2);
    if game.win_sets().iter().any(|w| w.len() > budget) {
        warn!("winning sets larger than {budget} are encoded but can never be completed");
    }
    if game.win_sets().is_empty() {
        return Ok(ExplicitEncoding::trivial(false));
    }
    let ib = |v: Pos| game.initial_black().contains(&v);
    let iw = |v: Pos| game.initial_white().contains(&v);
    let mut board = Board::new(game.num_positions(), d, &ib, &iw);
    let h = board
        .b
        .prefix
        .fresh(Quantifier::Exists, game.win_sets().len());
    board
        .b
        .clause(ClauseClass::Long, h.iter().map(|&x| pos(x)));
    for (k, w) in game.win_sets().iter().enumerate() {
        for &v in w {
            let fb = board.final_black(v);
            board.b.clause(ClauseClass::Binary, [neg(h[k]), fb]);
        }
    }
    Ok(board.finish(GoalVars::Hyperedge(h)))
}

fn no_claims(_: Pos) -> bool {
    false
}

/// EN: witness path `path_v^i` (`0 ≤ i ≤ ℓ`) of black nodes from
/// `border_s` to `border_e`.
pub fn encode_en(g: &GeneralizedHexInstance, d: usize) -> Result<ExplicitEncoding> {
    check_depth(d)?;
    if g.se_adjacent() {
        return Ok(ExplicitEncoding::trivial(true));
    }
    if g.num_nodes() == 0 || g.border_s().is_empty() {
        return Ok(ExplicitEncoding::trivial(false));
    }
    let n = g.num_nodes();
    let ell = (d - 1) / 2;
    let mut board = Board::new(n, d, &no_claims, &no_claims);
    let path: Vec<Vec<Var>> = (0..=ell)
        .map(|_| board.b.prefix.fresh(Quantifier::Exists, n))
        .collect();
    for row in &path {
        for v in 0..n {
            let fb = board.final_black(v);
            board.b.clause(ClauseClass::Binary, [neg(row[v]), fb]);
        }
    }
    board.b.clause(
        ClauseClass::Long,
        g.border_s().iter().map(|&v| pos(path[0][v])),
    );
    for i in 0..ell {
        for v in (0..n).filter(|v| !g.border_e().contains(v)) {
            let mut c = vec![neg(path[i][v])];
            c.extend(g.neighbors(v).iter().map(|&w| pos(path[i + 1][w])));
            board.b.clause(ClauseClass::Long, c);
        }
    }
    for v in (0..n).filter(|v| !g.border_e().contains(v)) {
        board.b.clause(ClauseClass::Unit, [neg(path[ell][v])]);
    }
    Ok(board.finish(GoalVars::Path(path)))
}

/// ET on a White-oriented (transversal) instance: true iff after `d` plies
/// the non-black nodes do not join White's borders.
pub fn encode_et(g: &GeneralizedHexInstance, d: usize) -> Result<ExplicitEncoding> {
    check_depth(d)?;
    if g.se_adjacent() {
        return Ok(ExplicitEncoding::trivial(false));
    }
    if g.num_nodes() == 0 {
        return Ok(ExplicitEncoding::trivial(true));
    }
    let n = g.num_nodes();
    let mut board = Board::new(n, d, &no_claims, &no_claims);
    let reach = board.b.prefix.fresh(Quantifier::Exists, n);
    for &v in g.border_s() {
        let fb = board.final_black(v);
        board.b.clause(ClauseClass::Binary, [fb, pos(reach[v])]);
    }
    for v in 0..n {
        for &w in g.neighbors(v) {
            if w != v {
                let fb = board.final_black(w);
                board
                    .b
                    .clause(ClauseClass::Ternary, [neg(reach[v]), fb, pos(reach[w])]);
            }
        }
    }
    for &v in g.border_e() {
        board.b.clause(ClauseClass::Unit, [neg(reach[v])]);
    }
    Ok(board.finish(GoalVars::Reach(reach)))
}

/// Substitutes the move bits of the given plies (`moves[k]` is the move at
/// time `k + 1`) by constants and drops them from the prefix.
pub fn fix_moves(enc: &ExplicitEncoding, moves: &[Pos]) -> QbfCnf {
    let Some(map) = &enc.vars else {
        return enc.formula.clone();
    };
    let mut fixed: BTreeMap<Var, bool> = BTreeMap::new();
    for (k, &m) in moves.iter().enumerate() {
        for (j, &bit) in map.moves[k].iter().enumerate() {
            fixed.insert(bit, m >> j & 1 == 1);
        }
    }
    let mut prefix = QuantPrefix::new();
    for b in enc.formula.prefix.blocks() {
        prefix.push(
            b.quantifier,
            b.vars.iter().copied().filter(|v| !fixed.contains_key(v)),
        );
    }
    let mut clauses = Vec::new();
    for c in &enc.formula.clauses {
        let mut out = Vec::new();
        let mut satisfied = false;
        for &l in c {
            match fixed.get(&l.var()) {
                Some(&val) => satisfied |= val != l.is_negated(),
                None => out.push(l),
            }
        }
        if satisfied {
            continue;
        }
        if out.is_empty() {
            return QbfCnf::trivially_false();
        }
        clauses.push(out);
    }
    QbfCnf { prefix, clauses }
}
