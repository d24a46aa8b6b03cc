//! Hex boards: text format, hexagonal adjacency and conversion to
//! Generalized Hex.
//!
//! Cells are `(row, col)`, 0-based; they are written as a column letter and
//! a 1-based row number (`a1` is row 0, column 0). Black joins the top and
//! bottom rows, White the left and right columns.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::game::{GeneralizedHexInstance, Player, Pos};
use crate::preprocess::Claims;

pub type Cell = (usize, usize);

/// Largest board whose cells can be named with a single letter.
pub const MAX_BOARD_SIZE: usize = 26;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HexBoard {
    size: usize,
    stones: BTreeMap<Cell, Player>,
}

impl HexBoard {
    pub fn new(size: usize) -> Result<Self> {
        if size == 0 || size > MAX_BOARD_SIZE {
            return Err(Error::InvalidInstance(format!(
                "board size must be in 1..={MAX_BOARD_SIZE}, got {size}"
            )));
        }
        Ok(HexBoard {
            size,
            stones: BTreeMap::new(),
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn num_cells(&self) -> usize {
        self.size * self.size
    }

    pub fn stones(&self) -> &BTreeMap<Cell, Player> {
        &self.stones
    }

    pub fn stone(&self, cell: Cell) -> Option<Player> {
        self.stones.get(&cell).copied()
    }

    fn check(&self, (row, col): Cell) -> Result<()> {
        if row < self.size && col < self.size {
            Ok(())
        } else {
            Err(Error::OffBoard {
                row,
                col,
                size: self.size,
            })
        }
    }

    /// Places a stone; the cell must be on the board and empty.
    pub fn place(&mut self, cell: Cell, player: Player) -> Result<()> {
        self.check(cell)?;
        if self.stones.contains_key(&cell) {
            return Err(Error::InvalidInstance(format!(
                "cell {} is already occupied",
                cell_name(cell)
            )));
        }
        self.stones.insert(cell, player);
        Ok(())
    }

    pub fn index(&self, (row, col): Cell) -> Pos {
        row * self.size + col
    }

    pub fn cell(&self, p: Pos) -> Cell {
        (p / self.size, p % self.size)
    }

    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        (0..self.size).flat_map(move |r| (0..self.size).map(move |c| (r, c)))
    }
}

pub fn cell_name((row, col): Cell) -> String {
    format!("{}{}", (b'a' + col as u8) as char, row + 1)
}

pub fn parse_cell(s: &str) -> Option<Cell> {
    let mut chars = s.chars();
    let letter = chars.next()?.to_ascii_lowercase();
    if !letter.is_ascii_lowercase() {
        return None;
    }
    let row: usize = chars.as_str().parse().ok()?;
    if row == 0 {
        return None;
    }
    Some((row - 1, (letter as u8 - b'a') as usize))
}

const OFFSETS: [(isize, isize); 6] = [(-1, 0), (1, 0), (0, -1), (0, 1), (-1, 1), (1, -1)];

pub fn hex_neighbors(board: &HexBoard, cell: Cell) -> Result<Vec<Cell>> {
    board.check(cell)?;
    let n = board.size as isize;
    Ok(OFFSETS
        .iter()
        .map(|(dr, dc)| (cell.0 as isize + dr, cell.1 as isize + dc))
        .filter(|&(r, c)| (0..n).contains(&r) && (0..n).contains(&c))
        .map(|(r, c)| (r as usize, c as usize))
        .collect())
}

/// The board as an unclaimed Generalized Hex instance oriented for `player`,
/// together with the stones as Short (own) and Cut (opponent) claims.
///
/// Black's borders are the top (`s`) and bottom (`e`) rows; White's are the
/// right (`s`) and left (`e`) columns.
pub fn board_to_ghex(board: &HexBoard, player: Player) -> (GeneralizedHexInstance, Claims) {
    let n = board.size;
    let mut edges = Vec::new();
    for cell in board.cells() {
        for nb in hex_neighbors(board, cell).unwrap() {
            if board.index(cell) < board.index(nb) {
                edges.push((board.index(cell), board.index(nb)));
            }
        }
    }
    let (bs, be): (Vec<Pos>, Vec<Pos>) = match player {
        Player::Black => (
            (0..n).map(|c| board.index((0, c))).collect(),
            (0..n).map(|c| board.index((n - 1, c))).collect(),
        ),
        Player::White => (
            (0..n).map(|r| board.index((r, n - 1))).collect(),
            (0..n).map(|r| board.index((r, 0))).collect(),
        ),
    };
    let g = GeneralizedHexInstance::new(n * n, edges, bs, be)
        .unwrap()
        .with_labels(board.cells().map(cell_name).collect());
    let mut claims = Claims::default();
    for (&cell, &p) in &board.stones {
        if p == player {
            claims.short_claimed.insert(board.index(cell));
        } else {
            claims.cut_claimed.insert(board.index(cell));
        }
    }
    (g, claims)
}

/// Text form: `size <n>`, then any number of `black <cells…>` and
/// `white <cells…>` lines. `#` starts a comment.
pub fn parse_hex(text: &str) -> Result<HexBoard> {
    let mut board: Option<HexBoard> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap();
        let mut toks = content.split_whitespace();
        let Some(tag) = toks.next() else { continue };
        match tag {
            "size" => {
                if board.is_some() {
                    return Err(Error::parse(line, "duplicate size line"));
                }
                let n: usize = toks
                    .next()
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| Error::parse(line, "expected `size <n>`"))?;
                if toks.next().is_some() {
                    return Err(Error::parse(line, "trailing tokens after size"));
                }
                board = Some(HexBoard::new(n).map_err(|e| Error::parse(line, e.to_string()))?);
            }
            "black" | "white" => {
                let b = board
                    .as_mut()
                    .ok_or_else(|| Error::parse(line, "stones before `size` line"))?;
                let player = if tag == "black" {
                    Player::Black
                } else {
                    Player::White
                };
                for t in toks {
                    let cell = parse_cell(t)
                        .ok_or_else(|| Error::parse(line, format!("bad cell `{t}`")))?;
                    if b.stones.contains_key(&cell) {
                        return Err(Error::parse(line, format!("duplicate cell `{t}`")));
                    }
                    b.place(cell, player)
                        .map_err(|_| Error::parse(line, format!("cell `{t}` is off the board")))?;
                }
            }
            other => return Err(Error::parse(line, format!("unknown token `{other}`"))),
        }
    }
    board.ok_or_else(|| Error::parse(text.lines().count(), "missing `size` line"))
}

pub fn write_hex(board: &HexBoard) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "size {}", board.size);
    for (tag, player) in [("black", Player::Black), ("white", Player::White)] {
        let cells: Vec<String> = board
            .stones
            .iter()
            .filter(|(_, &p)| p == player)
            .map(|(&c, _)| cell_name(c))
            .collect();
        if !cells.is_empty() {
            let _ = writeln!(out, "{tag} {}", cells.join(" "));
        }
    }
    out
}

/// Replays whitespace-separated cells, alternating Black and White
/// (Black first), onto an empty board.
pub fn replay_moves(size: usize, moves: &str) -> Result<HexBoard> {
    let mut board = HexBoard::new(size)?;
    for (i, t) in moves.split_whitespace().enumerate() {
        let cell = parse_cell(t).ok_or_else(|| Error::MalformedPlay(format!("bad cell `{t}`")))?;
        let player = if i % 2 == 0 {
            Player::Black
        } else {
            Player::White
        };
        board
            .place(cell, player)
            .map_err(|e| Error::InvalidPlay(format!("move {} ({t}): {e}", i + 1)))?;
    }
    Ok(board)
}

/// Empty `n`-by-`n` board.
pub fn empty_board(size: usize) -> Result<HexBoard> {
    HexBoard::new(size)
}

/// Cells occupied by `player`.
pub fn stones_of(board: &HexBoard, player: Player) -> BTreeSet<Cell> {
    board
        .stones
        .iter()
        .filter(|(_, &p)| p == player)
        .map(|(&c, _)| c)
        .collect()
}
