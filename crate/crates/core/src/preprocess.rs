//! Reductions that shrink an instance without changing who wins within a
//! given depth: winning-set pruning, breaker fill-in, contraction of claimed
//! nodes, the transversal (White-oriented) instance and stutter closure.

use std::collections::BTreeSet;

use log::debug;

use crate::error::{check_depth, Error, Result};
use crate::game::{
    canonical_family, min_connecting_sets_bounded, minimal_sets, node_distances, GameInstance,
    GeneralizedHexInstance, Player, Pos,
};
use crate::hex::{board_to_ghex, HexBoard};

/// Number of connecting paths enumerated before falling back to the
/// distance-based over-approximation of useful nodes.
pub const PATH_BUDGET: usize = 200_000;

/// Nodes already claimed by Short (the connecting player) and by Cut.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Claims {
    pub short_claimed: BTreeSet<Pos>,
    pub cut_claimed: BTreeSet<Pos>,
}

impl Claims {
    pub fn validate(&self, num_nodes: usize) -> Result<()> {
        if let Some(v) = self.short_claimed.intersection(&self.cut_claimed).next() {
            return Err(Error::InvalidInstance(format!("node {v} claimed by both players")));
        }
        if self
            .short_claimed
            .iter()
            .chain(&self.cut_claimed)
            .any(|&v| v >= num_nodes)
        {
            return Err(Error::InvalidInstance("claimed node out of range".into()));
        }
        Ok(())
    }
}

/// Black moves available within `d` plies.
pub fn black_moves(d: usize) -> usize {
    d.div_ceil(2)
}

/// Drops winning sets that need more than `(d+1)/2` Black moves or contain
/// a White-claimed position, then keeps only the ⊆-minimal ones.
pub fn prune_win_sets(game: &GameInstance, d: usize) -> Result<GameInstance> {
    check_depth(d)?;
    let budget = black_moves(d);
    let kept: Vec<Vec<Pos>> = game
        .win_sets()
        .iter()
        .filter(|w| !w.iter().any(|p| game.initial_white().contains(p)))
        .filter(|w| w.iter().filter(|p| !game.initial_black().contains(p)).count() <= budget)
        .cloned()
        .collect();
    Ok(game.with_win_sets(minimal_sets(&canonical_family(kept))))
}

/// Gives every unclaimed position that lies in no winning set to White.
pub fn fill_breaker(game: &GameInstance) -> GameInstance {
    let used: BTreeSet<Pos> = game.win_sets().iter().flatten().copied().collect();
    let mut white = game.initial_white().clone();
    for p in 0..game.num_positions() {
        if !used.contains(&p) && !game.initial_black().contains(&p) {
            white.insert(p);
        }
    }
    game.with_white(white)
}

/// Removes claimed nodes: Cut nodes are deleted with their edges; each Short
/// node (ascending) is deleted after joining its current neighbours into a
/// clique and passing its border memberships on to them. Returns the
/// claim-free instance and, per remaining node, its id in `g`.
pub fn contract_with_map(
    g: &GeneralizedHexInstance,
    claims: &Claims,
) -> Result<(GeneralizedHexInstance, Vec<Pos>)> {
    claims.validate(g.num_nodes())?;
    let mut h = g.clone();
    for &v in &claims.cut_claimed {
        for w in h.neighbors(v).clone() {
            h.remove_edge(v, w);
        }
        h.border_s_mut().remove(&v);
        h.border_e_mut().remove(&v);
    }
    let mut se = h.se_adjacent();
    for &v in &claims.short_claimed {
        let in_s = h.border_s().contains(&v);
        let in_e = h.border_e().contains(&v);
        if in_s && in_e {
            se = true;
        }
        let nbrs: Vec<Pos> = h.neighbors(v).iter().copied().filter(|&w| w != v).collect();
        for (i, &a) in nbrs.iter().enumerate() {
            for &b in &nbrs[i + 1..] {
                h.add_edge(a, b);
            }
            if in_s {
                h.border_s_mut().insert(a);
            }
            if in_e {
                h.border_e_mut().insert(a);
            }
        }
        for w in h.neighbors(v).clone() {
            h.remove_edge(v, w);
        }
        h.border_s_mut().remove(&v);
        h.border_e_mut().remove(&v);
    }
    let (out, old) = h.induced(|v| !claims.cut_claimed.contains(&v) && !claims.short_claimed.contains(&v));
    Ok((out.with_se_adjacent(se), old))
}

pub fn contract(g: &GeneralizedHexInstance, claims: &Claims) -> Result<GeneralizedHexInstance> {
    Ok(contract_with_map(g, claims)?.0)
}

/// Deletes edges whose endpoints are both in `border_s` or both in
/// `border_e`: a minimal connection starts at its only `border_s` node and
/// stops at its first `border_e` node, so such edges are never used.
pub fn prune_border_edges(g: &GeneralizedHexInstance) -> GeneralizedHexInstance {
    let mut h = g.clone();
    for (u, v) in g.edges() {
        let both_s = g.border_s().contains(&u) && g.border_s().contains(&v);
        let both_e = g.border_e().contains(&u) && g.border_e().contains(&v);
        if u != v && (both_s || both_e) {
            h.remove_edge(u, v);
        }
    }
    h
}

/// Adds a self-loop on every `border_e` node.
pub fn stutter_closure(g: &GeneralizedHexInstance) -> GeneralizedHexInstance {
    let mut h = g.clone();
    for &v in g.border_e() {
        h.add_edge(v, v);
    }
    h
}

/// Nodes lying on some minimal connection with at most `max_len` nodes.
///
/// Exact when the connections can be enumerated within [`PATH_BUDGET`];
/// otherwise every node with `dist_s(v) + dist_e(v) - 1 <= max_len` is
/// kept, which is a superset and therefore still sound for fill-in.
pub fn useful_nodes(g: &GeneralizedHexInstance, max_len: usize) -> (BTreeSet<Pos>, bool) {
    if let Some(sets) = min_connecting_sets_bounded(g, max_len, PATH_BUDGET) {
        return (sets.into_iter().flatten().collect(), true);
    }
    debug!("path enumeration exceeded budget; using distance filter");
    let ds = node_distances(g, g.border_s());
    let de = node_distances(g, g.border_e());
    let keep = (0..g.num_nodes())
        .filter(|&v| ds[v] + de[v] <= max_len + 1)
        .collect();
    (keep, false)
}

/// What a reduction removed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    /// Minimal connections that survive pruning (`None` when the
    /// enumeration budget was exceeded).
    pub win_sets: Option<usize>,
    /// Empty cells / nodes handed to the breaker.
    pub filled: usize,
    /// Claimed nodes removed by contraction.
    pub contracted: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoardReduction {
    /// The board with useless cells filled for White.
    pub filled: HexBoard,
    /// Claim-free Black-oriented instance (border-internal edges removed).
    pub instance: GeneralizedHexInstance,
    pub report: Report,
}

/// Full Black-oriented reduction of a Hex position for depth `d`.
///
/// The resulting instance has `se_adjacent` set when Black is already
/// connected, and no nodes when Black cannot connect within `d` plies.
pub fn reduce_board(board: &HexBoard, d: usize) -> Result<BoardReduction> {
    check_depth(d)?;
    let (g, claims) = board_to_ghex(board, Player::Black);
    let (open, old) = contract_with_map(&g, &claims)?;
    let mut filled = board.clone();
    let mut report = Report {
        contracted: claims.short_claimed.len() + claims.cut_claimed.len(),
        ..Default::default()
    };
    if !open.se_adjacent() {
        let (useful, exact) = useful_nodes(&open, black_moves(d));
        if exact {
            report.win_sets = Some(
                min_connecting_sets_bounded(&open, black_moves(d), PATH_BUDGET)
                    .map_or(0, |s| s.len()),
            );
        }
        for v in 0..open.num_nodes() {
            if !useful.contains(&v) {
                filled.place(board.cell(old[v]), Player::White)?;
                report.filled += 1;
            }
        }
    }
    let (g2, claims2) = board_to_ghex(&filled, Player::Black);
    let instance = prune_border_edges(&contract(&g2, &claims2)?);
    Ok(BoardReduction {
        filled,
        instance,
        report,
    })
}

/// The White-oriented instance of the filled board: Black (now Cut) wins it
/// within `d` plies exactly when Black connects within `d` plies on `board`.
pub fn transversal(board: &HexBoard, d: usize) -> Result<GeneralizedHexInstance> {
    let red = reduce_board(board, d)?;
    let (g, claims) = board_to_ghex(&red.filled, Player::White);
    Ok(prune_border_edges(&contract(&g, &claims)?))
}

/// Reduction of a claim-free Generalized Hex instance for depth `d`: nodes
/// on no short enough minimal connection are removed.
pub fn reduce_ghex(g: &GeneralizedHexInstance, d: usize) -> Result<(GeneralizedHexInstance, Report)> {
    check_depth(d)?;
    if g.se_adjacent() {
        return Ok((g.clone(), Report::default()));
    }
    let (useful, exact) = useful_nodes(g, black_moves(d));
    let report = Report {
        win_sets: if exact {
            min_connecting_sets_bounded(g, black_moves(d), PATH_BUDGET).map(|s| s.len())
        } else {
            None
        },
        filled: g.num_nodes() - useful.len(),
        contracted: 0,
    };
    let (h, _) = g.induced(|v| useful.contains(&v));
    Ok((prune_border_edges(&h), report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::min_connecting_sets;
    use crate::hex::parse_hex;

    #[test]
    fn pruning() {
        let g = GameInstance::open(3, [vec![0], vec![0, 1]]).unwrap();
        assert_eq!(prune_win_sets(&g, 3).unwrap().win_sets(), &[vec![0]]);
        let g = GameInstance::open(3, [vec![0, 1, 2]]).unwrap();
        assert!(prune_win_sets(&g, 3).unwrap().win_sets().is_empty());
        assert!(prune_win_sets(&g, 4).is_err());
    }

    #[test]
    fn fill_in() {
        let g = GameInstance::open(3, [vec![0]]).unwrap();
        let f = fill_breaker(&g);
        assert_eq!(f.initial_white().iter().copied().collect::<Vec<_>>(), vec![1, 2]);
        assert_eq!(fill_breaker(&f), f);
    }

    #[test]
    fn short_node_becomes_clique() {
        let g = GeneralizedHexInstance::new(3, [(0, 1), (1, 2)], [0], [2]).unwrap();
        let claims = Claims {
            short_claimed: [1].into(),
            ..Default::default()
        };
        let h = contract(&g, &claims).unwrap();
        assert_eq!(h.num_nodes(), 2);
        assert_eq!(h.edges(), vec![(0, 1)]);
    }

    #[test]
    fn short_border_node_propagates_membership() {
        let g = GeneralizedHexInstance::new(3, [(0, 1), (1, 2)], [0], [2]).unwrap();
        let claims = Claims {
            short_claimed: [0, 2].into(),
            ..Default::default()
        };
        let h = contract(&g, &claims).unwrap();
        assert_eq!(h.num_nodes(), 1);
        assert!(h.border_s().contains(&0) && h.border_e().contains(&0));
        assert!(!h.se_adjacent());
        let all = Claims {
            short_claimed: [0, 1, 2].into(),
            ..Default::default()
        };
        assert!(contract(&g, &all).unwrap().se_adjacent());
    }

    #[test]
    fn closure() {
        let g = GeneralizedHexInstance::new(2, [(0, 1)], [0], [1]).unwrap();
        let c = stutter_closure(&g);
        assert!(c.has_edge(1, 1) && !c.has_edge(0, 0));
        assert_eq!(stutter_closure(&c), c);
        assert_eq!(min_connecting_sets(&c, 2), min_connecting_sets(&g, 2));
        let none = GeneralizedHexInstance::new(2, [(0, 1)], [0], []).unwrap();
        assert_eq!(stutter_closure(&none), none);
    }

    #[test]
    fn trivial_transversal() {
        let t = transversal(&parse_hex("size 1\n").unwrap(), 1).unwrap();
        assert_eq!(t.num_nodes(), 1);
        assert!(t.border_s().contains(&0) && t.border_e().contains(&0));
    }

    fn labelled_edges(g: &GeneralizedHexInstance) -> BTreeSet<(String, String)> {
        let mut out = BTreeSet::new();
        for (u, v) in g.edges() {
            out.insert((g.label(u).to_string(), g.label(v).to_string()));
        }
        for &v in g.border_s() {
            out.insert(("s".into(), g.label(v).to_string()));
        }
        for &v in g.border_e() {
            out.insert((g.label(v).to_string(), "e".into()));
        }
        out
    }

    fn expected(pairs: &[(&str, &str)]) -> BTreeSet<(String, String)> {
        pairs.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
    }

    const HEIN9: &str = "size 4\nblack b1 a3\nwhite c1 a4 d4\n";

    #[test]
    fn hein9_reduction() {
        let red = reduce_board(&parse_hex(HEIN9).unwrap(), 5).unwrap();
        assert_eq!(red.instance.labels(), &["a2", "b2", "b3", "b4"]);
        assert_eq!(
            labelled_edges(&red.instance),
            expected(&[
                ("s", "a2"),
                ("s", "b2"),
                ("a2", "b3"),
                ("b2", "b3"),
                ("b3", "b4"),
                ("b4", "e"),
            ])
        );
        let t = transversal(&parse_hex(HEIN9).unwrap(), 5).unwrap();
        assert_eq!(t.labels(), &["a2", "b2", "b3", "b4"]);
        assert_eq!(
            labelled_edges(&t),
            expected(&[
                ("s", "b2"),
                ("s", "b3"),
                ("s", "b4"),
                ("a2", "b2"),
                ("a2", "e"),
                ("b3", "e"),
                ("b4", "e"),
            ])
        );
    }
}
