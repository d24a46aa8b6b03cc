//! Harary's Tic-Tac-Toe (maker-breaker): polyominoes on a square board.
//!
//! A board cell `(x, y)` is position `y * size + x`. Shapes are lists of
//! `(dx, dy)` offsets; the winning sets are all on-board placements of all
//! rotations and reflections of the shape.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::error::{check_depth, Error, Result};
use crate::game::{canonical_family, GameInstance, Pos};
use crate::lifted::{gadget_bin, playable_depth, stateless, trivial_circuit, LiftedEncoding};
use crate::qbf::Lit;

pub type Offset = (i64, i64);

/// A shape with canonical cell order: sorted, the first cell at the origin.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polyomino {
    name: String,
    cells: Vec<Offset>,
}

fn canonical(cells: impl IntoIterator<Item = Offset>) -> Vec<Offset> {
    let mut cells: Vec<Offset> = cells.into_iter().collect();
    cells.sort_unstable();
    cells.dedup();
    let (x0, y0) = cells[0];
    cells.iter().map(|&(x, y)| (x - x0, y - y0)).collect()
}

fn connected(cells: &[Offset]) -> bool {
    let all: BTreeSet<Offset> = cells.iter().copied().collect();
    let mut seen = BTreeSet::from([cells[0]]);
    let mut stack = vec![cells[0]];
    while let Some((x, y)) = stack.pop() {
        for nb in [(x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)] {
            if all.contains(&nb) && seen.insert(nb) {
                stack.push(nb);
            }
        }
    }
    seen.len() == all.len()
}

/// The eight symmetries of the square acting on offsets.
pub const SYMMETRIES: [fn(Offset) -> Offset; 8] = [
    |(x, y)| (x, y),
    |(x, y)| (-y, x),
    |(x, y)| (-x, -y),
    |(x, y)| (y, -x),
    |(x, y)| (-x, y),
    |(x, y)| (y, x),
    |(x, y)| (x, -y),
    |(x, y)| (-y, -x),
];

impl Polyomino {
    /// Cells must be distinct and 4-connected.
    pub fn new(name: impl Into<String>, cells: impl IntoIterator<Item = Offset>) -> Result<Self> {
        let name = name.into();
        let raw: Vec<Offset> = cells.into_iter().collect();
        if raw.is_empty() {
            return Err(Error::InvalidInstance(format!("shape {name} has no cells")));
        }
        if raw.iter().collect::<BTreeSet<_>>().len() != raw.len() {
            return Err(Error::InvalidInstance(format!("shape {name} repeats a cell")));
        }
        if !connected(&raw) {
            return Err(Error::InvalidInstance(format!("shape {name} is not connected")));
        }
        Ok(Polyomino {
            name,
            cells: canonical(raw),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn cells(&self) -> &[Offset] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Image under `f`, canonicalized.
    pub fn transform(&self, f: fn(Offset) -> Offset) -> Polyomino {
        Polyomino {
            name: self.name.clone(),
            cells: canonical(self.cells.iter().map(|&c| f(c))),
        }
    }

    /// Width and height of the bounding box.
    pub fn extent(&self) -> (usize, usize) {
        let span = |k: fn(&Offset) -> i64| {
            let lo = self.cells.iter().map(k).min().unwrap();
            let hi = self.cells.iter().map(k).max().unwrap();
            (hi - lo + 1) as usize
        };
        (span(|c| c.0), span(|c| c.1))
    }
}

/// Distinct images under rotations and reflections, in canonical order.
pub fn variants(p: &Polyomino) -> Vec<Polyomino> {
    let mut out: Vec<Polyomino> = SYMMETRIES.iter().map(|&f| p.transform(f)).collect();
    out.sort_by(|a, b| a.cells.cmp(&b.cells));
    out.dedup();
    out
}

/// Board positions covered by `p` with its first cell on `(x, y)`, if the
/// placement fits.
fn place(p: &Polyomino, size: usize, (x, y): (i64, i64)) -> Option<Vec<Pos>> {
    let n = size as i64;
    p.cells
        .iter()
        .map(|&(dx, dy)| {
            let (cx, cy) = (x + dx, y + dy);
            ((0..n).contains(&cx) && (0..n).contains(&cy)).then_some((cy * n + cx) as Pos)
        })
        .collect()
}

/// All placements of all variants that lie on a `size`-by-`size` board.
pub fn httt_win_sets(p: &Polyomino, size: usize) -> Vec<Vec<Pos>> {
    let n = size as i64;
    let mut sets = Vec::new();
    for v in variants(p) {
        for y in 0..n {
            for x in 0..n {
                if let Some(s) = place(&v, size, (x, y)) {
                    sets.push(s);
                }
            }
        }
    }
    canonical_family(sets)
}

pub fn httt_game(p: &Polyomino, size: usize) -> Result<GameInstance> {
    let labels = (0..size * size)
        .map(|i| format!("{},{}", i % size, i / size))
        .collect();
    Ok(GameInstance::open(size * size, httt_win_sets(p, size))?.with_labels(labels))
}

/// Positions `(x, y)` with `y ≤ x` and `x + y ≤ size − 1`: every cell of
/// the empty board is mapped into this region by some symmetry.
pub fn fundamental_domain(size: usize) -> Vec<Pos> {
    (0..size * size)
        .filter(|&i| {
            let (x, y) = (i % size, i / size);
            y <= x && x + y < size
        })
        .collect()
}

/// Stateless encoding with one witness slot per shape cell: the witness
/// must follow the offsets of some variant. With `symmetry_reduce`, Black's
/// first move is restricted to [`fundamental_domain`].
pub fn encode_httt_sn(
    p: &Polyomino,
    size: usize,
    d: usize,
    symmetry_reduce: bool,
) -> Result<LiftedEncoding> {
    check_depth(d)?;
    let m = p.len();
    let available = (d - 1) / 2 + 1;
    if m > available {
        return Err(Error::ShapeTooLarge {
            name: p.name.clone(),
            cells: m,
            depth: d,
            available,
        });
    }
    let d = playable_depth(size * size, d);
    let n = size as i64;
    let fitting: Vec<Polyomino> = variants(p)
        .into_iter()
        .filter(|v| {
            let (w, h) = v.extent();
            w <= size && h <= size
        })
        .collect();
    if fitting.is_empty() {
        return Ok(LiftedEncoding {
            circuit: trivial_circuit(false),
            vars: None,
        });
    }
    stateless(size * size, d, m, |b, vars| {
        let slot = |i: usize| -> Vec<Lit> { vars.witness[i].iter().map(|&v| Lit::pos(v)).collect() };
        let mut shapes = Vec::with_capacity(fitting.len());
        for v in &fitting {
            let mut conj = Vec::new();
            for i in 0..m - 1 {
                let (dx, dy) = (v.cells[i + 1].0 - v.cells[i].0, v.cells[i + 1].1 - v.cells[i].1);
                let (cur, next) = (slot(i), slot(i + 1));
                for pos in 0..size * size {
                    let (x, y) = ((pos % size) as i64 + dx, (pos / size) as i64 + dy);
                    let at = gadget_bin(b, &cur, pos)?;
                    if (0..n).contains(&x) && (0..n).contains(&y) {
                        let to = gadget_bin(b, &next, (y * n + x) as Pos)?;
                        conj.push(b.implies(at, to));
                    } else {
                        conj.push(!at);
                    }
                }
            }
            shapes.push(b.and(conj));
        }
        let mut goal = vec![b.or(shapes)];
        if symmetry_reduce {
            let first: Vec<Lit> = vars.moves[0].iter().map(|&v| Lit::pos(v)).collect();
            let allowed = fundamental_domain(size)
                .into_iter()
                .map(|pos| gadget_bin(b, &first, pos))
                .collect::<Result<Vec<_>>>()?;
            goal.push(b.or(allowed));
        }
        Ok(b.and(goal))
    })
}

/// Shapes file: `shape <name>` followed by `cell <dx> <dy>` lines; `#`
/// starts a comment.
pub fn parse_shapes(text: &str) -> Result<Vec<Polyomino>> {
    let mut out: Vec<(String, usize, Vec<Offset>)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let mut toks = raw.split('#').next().unwrap().split_whitespace();
        let Some(tag) = toks.next() else { continue };
        match tag {
            "shape" => {
                let name = toks
                    .next()
                    .ok_or_else(|| Error::parse(line, "expected `shape <name>`"))?;
                if toks.next().is_some() {
                    return Err(Error::parse(line, "trailing tokens after shape name"));
                }
                out.push((name.to_string(), line, Vec::new()));
            }
            "cell" => {
                let cur = out
                    .last_mut()
                    .ok_or_else(|| Error::parse(line, "`cell` before any `shape`"))?;
                let nums = toks
                    .map(|t| t.parse::<i64>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|_| Error::parse(line, "expected `cell <dx> <dy>`"))?;
                let [dx, dy] = nums[..] else {
                    return Err(Error::parse(line, "expected `cell <dx> <dy>`"));
                };
                cur.2.push((dx, dy));
            }
            other => return Err(Error::parse(line, format!("unknown token `{other}`"))),
        }
    }
    out.into_iter()
        .map(|(name, line, cells)| {
            Polyomino::new(name, cells).map_err(|e| Error::parse(line, e.to_string()))
        })
        .collect()
}

pub fn write_shapes(shapes: &[Polyomino]) -> String {
    let mut out = String::new();
    for p in shapes {
        let _ = writeln!(out, "shape {}", p.name);
        for (dx, dy) in &p.cells {
            let _ = writeln!(out, "cell {dx} {dy}");
        }
    }
    out
}

const CATALOG: &str = include_str!("../data/shapes.txt");

/// The built-in shapes: all polyominoes with up to four cells, plus Z, L
/// and Snaky.
pub fn catalog() -> Vec<Polyomino> {
    parse_shapes(CATALOG).expect("built-in catalog parses")
}

/// `base` with same-named (case-insensitive) entries replaced by
/// `overrides`; new names are appended.
pub fn merge_catalog(mut base: Vec<Polyomino>, overrides: Vec<Polyomino>) -> Vec<Polyomino> {
    for o in overrides {
        match base.iter_mut().find(|p| p.name.eq_ignore_ascii_case(&o.name)) {
            Some(slot) => *slot = o,
            None => base.push(o),
        }
    }
    base
}

pub fn find_shape<'a>(shapes: &'a [Polyomino], name: &str) -> Option<&'a Polyomino> {
    shapes.iter().find(|p| p.name.eq_ignore_ascii_case(name))
}
