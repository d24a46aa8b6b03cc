//! Brute-force bounded game search used as ground truth.
//!
//! Black moves first and the win is tested at the start and after every
//! Black move. White only plays on empty positions. Positions are held in
//! `u64` bitsets, so instances are limited to 64 positions; the search
//! itself refuses more than a configurable number of open positions.

use std::collections::HashMap;

use crate::error::{check_depth, Error, Result};
use crate::game::{GameInstance, GeneralizedHexInstance, Pos};
use crate::preprocess::Claims;

pub const DEFAULT_OPEN_LIMIT: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub black_wins: bool,
    /// When Black wins: Black always takes the smallest winning move and
    /// White the smallest reply, until Black's win is complete.
    pub variation: Option<Vec<Pos>>,
}

#[derive(Clone, Copy, Debug)]
pub struct Oracle {
    open_limit: usize,
}

impl Default for Oracle {
    fn default() -> Self {
        Oracle {
            open_limit: DEFAULT_OPEN_LIMIT,
        }
    }
}

type Mask = u64;

fn mask_of(items: impl IntoIterator<Item = Pos>) -> Mask {
    items.into_iter().fold(0, |m, p| m | (1 << p))
}

struct Search<W: Fn(Mask) -> bool> {
    all: Mask,
    won: W,
    memo: HashMap<(Mask, Mask), bool>,
}

impl<W: Fn(Mask) -> bool> Search<W> {
    /// Black to move with `plies` plies left (including this one).
    fn black(&mut self, black: Mask, white: Mask, plies: usize) -> bool {
        if (self.won)(black) {
            return true;
        }
        if plies == 0 {
            return false;
        }
        if let Some(&r) = self.memo.get(&(black, white)) {
            return r;
        }
        let r = self.black_moves(black, white, plies).next().is_some();
        self.memo.insert((black, white), r);
        r
    }

    /// Winning Black moves, in ascending order.
    fn black_moves(
        &mut self,
        black: Mask,
        white: Mask,
        plies: usize,
    ) -> impl Iterator<Item = Pos> + '_ {
        let empty = self.all & !black & !white;
        (0..64)
            .filter(move |&p| empty >> p & 1 == 1)
            .filter(move |&p| {
                let nb = black | 1 << p;
                (self.won)(nb) || (plies > 1 && self.white(nb, white, plies - 1))
            })
    }

    fn white(&mut self, black: Mask, white: Mask, plies: usize) -> bool {
        let empty = self.all & !black & !white;
        if empty == 0 {
            return false;
        }
        if let Some(&r) = self.memo.get(&(black, white)) {
            return r;
        }
        let r = (0..64)
            .filter(|&q| empty >> q & 1 == 1)
            .all(|q| self.black(black, white | 1 << q, plies - 1));
        self.memo.insert((black, white), r);
        r
    }

    fn variation(&mut self, mut black: Mask, mut white: Mask, d: usize) -> Vec<Pos> {
        let mut line = Vec::new();
        let mut plies = d;
        while !(self.won)(black) {
            let p = self
                .black_moves(black, white, plies)
                .next()
                .expect("winning position has a winning move");
            line.push(p);
            black |= 1 << p;
            plies -= 1;
            if (self.won)(black) {
                break;
            }
            let empty = self.all & !black & !white;
            let q = empty.trailing_zeros() as Pos;
            line.push(q);
            white |= 1 << q;
            plies -= 1;
        }
        line
    }
}

impl Oracle {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_limit(open_limit: usize) -> Self {
        Oracle { open_limit }
    }

    fn check(&self, n: usize, open: usize) -> Result<()> {
        if n > 64 {
            return Err(Error::LimitExceeded {
                what: "position count",
                actual: n,
                limit: 64,
            });
        }
        if open > self.open_limit {
            return Err(Error::LimitExceeded {
                what: "open position count",
                actual: open,
                limit: self.open_limit,
            });
        }
        Ok(())
    }

    fn run<W: Fn(Mask) -> bool>(
        &self,
        n: usize,
        black: Mask,
        white: Mask,
        d: usize,
        won: W,
    ) -> Result<(Verdict, Vec<Pos>)> {
        check_depth(d)?;
        let all = if n == 64 { !0 } else { (1 << n) - 1 };
        self.check(n, (all & !black & !white).count_ones() as usize)?;
        let mut s = Search {
            all,
            won,
            memo: HashMap::new(),
        };
        let black_wins = s.black(black, white, d);
        let first: Vec<Pos> = if (s.won)(black) {
            Vec::new()
        } else {
            s.black_moves(black, white, d).collect()
        };
        let variation = black_wins.then(|| s.variation(black, white, d));
        Ok((
            Verdict {
                black_wins,
                variation,
            },
            first,
        ))
    }

    fn game_search(&self, game: &GameInstance, d: usize) -> Result<(Verdict, Vec<Pos>)> {
        let sets: Vec<Mask> = game.win_sets().iter().map(|w| mask_of(w.iter().copied())).collect();
        self.run(
            game.num_positions(),
            mask_of(game.initial_black().iter().copied()),
            mask_of(game.initial_white().iter().copied()),
            d,
            move |b| sets.iter().any(|&m| m & !b == 0),
        )
    }

    pub fn solve_game(&self, game: &GameInstance, d: usize) -> Result<Verdict> {
        Ok(self.game_search(game, d)?.0)
    }

    /// Black's first moves that win within `d` plies.
    pub fn winning_first_moves(&self, game: &GameInstance, d: usize) -> Result<Vec<Pos>> {
        Ok(self.game_search(game, d)?.1)
    }

    /// Short (Black) moves first and wins by connecting the borders.
    pub fn solve_ghex(&self, g: &GeneralizedHexInstance, d: usize) -> Result<Verdict> {
        Ok(self
            .run(g.num_nodes(), 0, 0, d, |b| g.connects(|v| b >> v & 1 == 1))?
            .0)
    }

    fn claimed_search(
        &self,
        g: &GeneralizedHexInstance,
        claims: &Claims,
        d: usize,
    ) -> Result<(Verdict, Vec<Pos>)> {
        claims.validate(g.num_nodes())?;
        self.run(
            g.num_nodes(),
            mask_of(claims.short_claimed.iter().copied()),
            mask_of(claims.cut_claimed.iter().copied()),
            d,
            |b| g.connects(|v| b >> v & 1 == 1),
        )
    }

    /// Like [`Oracle::solve_ghex`], starting from claimed nodes (Short's
    /// claims count as Black stones).
    pub fn solve_claimed_ghex(
        &self,
        g: &GeneralizedHexInstance,
        claims: &Claims,
        d: usize,
    ) -> Result<Verdict> {
        Ok(self.claimed_search(g, claims, d)?.0)
    }

    pub fn winning_first_moves_claimed_ghex(
        &self,
        g: &GeneralizedHexInstance,
        claims: &Claims,
        d: usize,
    ) -> Result<Vec<Pos>> {
        Ok(self.claimed_search(g, claims, d)?.1)
    }

    /// Cut moves first (as Black) and wins when, after the `d` plies, the
    /// nodes it does not own leave the borders disconnected. `black_wins`
    /// reports Cut's win.
    pub fn solve_ghex_cut_first(&self, g: &GeneralizedHexInstance, d: usize) -> Result<Verdict> {
        Ok(self
            .run(g.num_nodes(), 0, 0, d, |b| !g.connects(|v| b >> v & 1 == 0))?
            .0)
    }
}

pub fn solve_game(game: &GameInstance, d: usize) -> Result<Verdict> {
    Oracle::default().solve_game(game, d)
}

pub fn solve_ghex(g: &GeneralizedHexInstance, d: usize) -> Result<Verdict> {
    Oracle::default().solve_ghex(g, d)
}

pub fn solve_ghex_cut_first(g: &GeneralizedHexInstance, d: usize) -> Result<Verdict> {
    Oracle::default().solve_ghex_cut_first(g, d)
}
