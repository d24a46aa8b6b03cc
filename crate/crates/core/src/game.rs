//! Maker-breaker positional games and Generalized Hex.

use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Position / node identifier, dense from 0.
pub type Pos = usize;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Player {
    Black,
    White,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::Black => Player::White,
            Player::White => Player::Black,
        }
    }
}

/// Sorts each set, then sorts and deduplicates the family.
pub fn canonical_family(sets: impl IntoIterator<Item = Vec<Pos>>) -> Vec<Vec<Pos>> {
    let mut fam: Vec<Vec<Pos>> = sets
        .into_iter()
        .map(|mut s| {
            s.sort_unstable();
            s.dedup();
            s
        })
        .collect();
    fam.sort();
    fam.dedup();
    fam
}

/// `a ⊆ b` for sorted slices.
pub(crate) fn is_subset(a: &[Pos], b: &[Pos]) -> bool {
    let mut j = 0;
    for &x in a {
        while j < b.len() && b[j] < x {
            j += 1;
        }
        if j == b.len() || b[j] != x {
            return false;
        }
        j += 1;
    }
    true
}

/// Keeps the ⊆-minimal members of a canonical family.
pub fn minimal_sets(family: &[Vec<Pos>]) -> Vec<Vec<Pos>> {
    let mut by_size: Vec<&Vec<Pos>> = family.iter().collect();
    by_size.sort_by_key(|s| s.len());
    let mut kept: Vec<Vec<Pos>> = Vec::new();
    for s in by_size {
        if !kept.iter().any(|k| is_subset(k, s)) {
            kept.push(s.clone());
        }
    }
    canonical_family(kept)
}

/// A maker-breaker game: Black (maker) wins by claiming every position of
/// some winning set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameInstance {
    num_positions: usize,
    initial_black: BTreeSet<Pos>,
    initial_white: BTreeSet<Pos>,
    win_sets: Vec<Vec<Pos>>,
    labels: Vec<String>,
}

impl GameInstance {
    pub fn new(
        num_positions: usize,
        initial_black: impl IntoIterator<Item = Pos>,
        initial_white: impl IntoIterator<Item = Pos>,
        win_sets: impl IntoIterator<Item = Vec<Pos>>,
    ) -> Result<Self> {
        let initial_black: BTreeSet<Pos> = initial_black.into_iter().collect();
        let initial_white: BTreeSet<Pos> = initial_white.into_iter().collect();
        let win_sets = canonical_family(win_sets);
        let out_of_range = |p: &Pos| *p >= num_positions;
        if initial_black.iter().any(out_of_range) || initial_white.iter().any(out_of_range) {
            return Err(Error::InvalidInstance("initial claim out of range".into()));
        }
        if let Some(p) = initial_black.intersection(&initial_white).next() {
            return Err(Error::InvalidInstance(format!(
                "position {p} claimed by both players"
            )));
        }
        if win_sets.iter().flatten().any(out_of_range) {
            return Err(Error::InvalidInstance("winning set position out of range".into()));
        }
        Ok(GameInstance {
            num_positions,
            initial_black,
            initial_white,
            win_sets,
            labels: (0..num_positions).map(|p| p.to_string()).collect(),
        })
    }

    /// Claim-free game.
    pub fn open(num_positions: usize, win_sets: impl IntoIterator<Item = Vec<Pos>>) -> Result<Self> {
        Self::new(num_positions, [], [], win_sets)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.num_positions, "one label per position");
        self.labels = labels;
        self
    }

    pub fn num_positions(&self) -> usize {
        self.num_positions
    }

    pub fn initial_black(&self) -> &BTreeSet<Pos> {
        &self.initial_black
    }

    pub fn initial_white(&self) -> &BTreeSet<Pos> {
        &self.initial_white
    }

    pub fn win_sets(&self) -> &[Vec<Pos>] {
        &self.win_sets
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, p: Pos) -> &str {
        &self.labels[p]
    }

    pub fn is_claim_free(&self) -> bool {
        self.initial_black.is_empty() && self.initial_white.is_empty()
    }

    pub(crate) fn with_win_sets(&self, win_sets: Vec<Vec<Pos>>) -> Self {
        GameInstance {
            win_sets: canonical_family(win_sets),
            ..self.clone()
        }
    }

    pub(crate) fn with_white(&self, initial_white: BTreeSet<Pos>) -> Self {
        GameInstance {
            initial_white,
            ..self.clone()
        }
    }

    /// Renumbers the unclaimed positions densely; winning sets lose their
    /// black-claimed members and sets touching a white claim are dropped.
    /// Returns the claim-free game and, per new position, its old id.
    pub fn absorb_claims(&self) -> (GameInstance, Vec<Pos>) {
        let open: Vec<Pos> = (0..self.num_positions)
            .filter(|p| !self.initial_black.contains(p) && !self.initial_white.contains(p))
            .collect();
        let mut new_id = vec![usize::MAX; self.num_positions];
        for (i, &p) in open.iter().enumerate() {
            new_id[p] = i;
        }
        let sets = self
            .win_sets
            .iter()
            .filter(|w| !w.iter().any(|p| self.initial_white.contains(p)))
            .map(|w| {
                w.iter()
                    .filter(|p| !self.initial_black.contains(p))
                    .map(|&p| new_id[p])
                    .collect()
            });
        let game = GameInstance {
            num_positions: open.len(),
            initial_black: BTreeSet::new(),
            initial_white: BTreeSet::new(),
            win_sets: canonical_family(sets),
            labels: open.iter().map(|&p| self.labels[p].clone()).collect(),
        };
        (game, open)
    }
}

/// A sequence of moves; odd plies (1st, 3rd, …) are Black's.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Play {
    pub moves: Vec<Pos>,
}

impl Play {
    pub fn new(moves: impl IntoIterator<Item = Pos>) -> Self {
        Play {
            moves: moves.into_iter().collect(),
        }
    }

    pub fn black_moves(&self) -> impl Iterator<Item = Pos> + '_ {
        self.moves.iter().copied().step_by(2)
    }

    pub fn white_moves(&self) -> impl Iterator<Item = Pos> + '_ {
        self.moves.iter().copied().skip(1).step_by(2)
    }
}

pub fn validate_play(game: &GameInstance, play: &Play) -> Result<bool> {
    if let Some(&m) = play.moves.iter().find(|&&m| m >= game.num_positions) {
        return Err(Error::MalformedPlay(format!(
            "move {m} is not a position of a {}-position game",
            game.num_positions
        )));
    }
    let mut seen = BTreeSet::new();
    Ok(play.moves.iter().all(|m| {
        seen.insert(*m) && !game.initial_black.contains(m) && !game.initial_white.contains(m)
    }))
}

pub fn play_winner(game: &GameInstance, play: &Play) -> Result<Player> {
    if !validate_play(game, play)? {
        return Err(Error::InvalidPlay(format!("{:?}", play.moves)));
    }
    let black: BTreeSet<Pos> = game
        .initial_black
        .iter()
        .copied()
        .chain(play.black_moves())
        .collect();
    let won = game
        .win_sets
        .iter()
        .any(|w| w.iter().all(|p| black.contains(p)));
    Ok(if won { Player::Black } else { Player::White })
}

/// Generalized Hex: an undirected graph whose terminals `s` and `e` are
/// represented by the border sets of their neighbours.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneralizedHexInstance {
    adj: Vec<BTreeSet<Pos>>,
    border_s: BTreeSet<Pos>,
    border_e: BTreeSet<Pos>,
    /// `s` and `e` are already joined (Short has won before any move).
    se_adjacent: bool,
    labels: Vec<String>,
}

impl GeneralizedHexInstance {
    pub fn new(
        num_nodes: usize,
        edges: impl IntoIterator<Item = (Pos, Pos)>,
        border_s: impl IntoIterator<Item = Pos>,
        border_e: impl IntoIterator<Item = Pos>,
    ) -> Result<Self> {
        let mut g = GeneralizedHexInstance {
            adj: vec![BTreeSet::new(); num_nodes],
            border_s: border_s.into_iter().collect(),
            border_e: border_e.into_iter().collect(),
            se_adjacent: false,
            labels: (0..num_nodes).map(|v| v.to_string()).collect(),
        };
        if g.border_s.iter().chain(&g.border_e).any(|&v| v >= num_nodes) {
            return Err(Error::InvalidInstance("border node out of range".into()));
        }
        for (u, v) in edges {
            if u >= num_nodes || v >= num_nodes {
                return Err(Error::InvalidInstance(format!("edge ({u}, {v}) out of range")));
            }
            g.add_edge(u, v);
        }
        Ok(g)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.adj.len(), "one label per node");
        self.labels = labels;
        self
    }

    pub fn with_se_adjacent(mut self, se: bool) -> Self {
        self.se_adjacent = se;
        self
    }

    pub(crate) fn add_edge(&mut self, u: Pos, v: Pos) {
        self.adj[u].insert(v);
        self.adj[v].insert(u);
    }

    pub(crate) fn remove_edge(&mut self, u: Pos, v: Pos) {
        self.adj[u].remove(&v);
        self.adj[v].remove(&u);
    }

    pub fn num_nodes(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbors(&self, v: Pos) -> &BTreeSet<Pos> {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: Pos, v: Pos) -> bool {
        self.adj[u].contains(&v)
    }

    /// Undirected edges `(u, v)` with `u <= v`, sorted.
    pub fn edges(&self) -> Vec<(Pos, Pos)> {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.range(u..).map(move |&v| (u, v)))
            .collect()
    }

    pub fn num_edges(&self) -> usize {
        self.edges().len()
    }

    /// Ordered pairs `(v, w)` with `v ≠ w` adjacent.
    pub fn num_arcs(&self) -> usize {
        self.adj
            .iter()
            .enumerate()
            .map(|(v, ns)| ns.len() - ns.contains(&v) as usize)
            .sum()
    }

    pub fn border_s(&self) -> &BTreeSet<Pos> {
        &self.border_s
    }

    pub fn border_e(&self) -> &BTreeSet<Pos> {
        &self.border_e
    }

    pub(crate) fn border_s_mut(&mut self) -> &mut BTreeSet<Pos> {
        &mut self.border_s
    }

    pub(crate) fn border_e_mut(&mut self) -> &mut BTreeSet<Pos> {
        &mut self.border_e
    }

    pub fn se_adjacent(&self) -> bool {
        self.se_adjacent
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: Pos) -> &str {
        &self.labels[v]
    }

    pub fn node_by_label(&self, label: &str) -> Option<Pos> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn has_self_loops(&self) -> bool {
        self.adj.iter().enumerate().any(|(v, ns)| ns.contains(&v))
    }

    /// Whether the nodes in `claimed` (plus the `s`–`e` flag) connect the
    /// two borders.
    pub fn connects(&self, claimed: impl Fn(Pos) -> bool) -> bool {
        if self.se_adjacent {
            return true;
        }
        let mut seen = vec![false; self.num_nodes()];
        let mut queue: VecDeque<Pos> = VecDeque::new();
        for &v in &self.border_s {
            if claimed(v) {
                seen[v] = true;
                queue.push_back(v);
            }
        }
        while let Some(v) = queue.pop_front() {
            if self.border_e.contains(&v) {
                return true;
            }
            for &w in &self.adj[v] {
                if !seen[w] && claimed(w) {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        false
    }

    /// Keeps the nodes for which `keep` holds, renumbering them densely in
    /// ascending order. Returns the induced instance and the old ids.
    pub fn induced(&self, keep: impl Fn(Pos) -> bool) -> (GeneralizedHexInstance, Vec<Pos>) {
        let old: Vec<Pos> = (0..self.num_nodes()).filter(|&v| keep(v)).collect();
        let mut new_id = vec![usize::MAX; self.num_nodes()];
        for (i, &v) in old.iter().enumerate() {
            new_id[v] = i;
        }
        let mut g = GeneralizedHexInstance {
            adj: vec![BTreeSet::new(); old.len()],
            border_s: self.border_s.iter().filter(|&&v| keep(v)).map(|&v| new_id[v]).collect(),
            border_e: self.border_e.iter().filter(|&&v| keep(v)).map(|&v| new_id[v]).collect(),
            se_adjacent: self.se_adjacent,
            labels: old.iter().map(|&v| self.labels[v].clone()).collect(),
        };
        for (u, v) in self.edges() {
            if keep(u) && keep(v) {
                g.add_edge(new_id[u], new_id[v]);
            }
        }
        (g, old)
    }
}

/// Search state for induced-path enumeration.
struct PathSearch<'a> {
    g: &'a GeneralizedHexInstance,
    max_len: usize,
    budget: Option<usize>,
    path: Vec<Pos>,
    on_path: Vec<bool>,
    /// Lower bound on the nodes still needed to reach `border_e`.
    dist_e: Vec<usize>,
    out: Vec<Vec<Pos>>,
}

impl PathSearch<'_> {
    /// Returns `false` once the budget is exhausted.
    fn extend(&mut self) -> bool {
        let v = *self.path.last().unwrap();
        if self.g.border_e.contains(&v) {
            let mut s = self.path.clone();
            s.sort_unstable();
            self.out.push(s);
            if let Some(b) = self.budget {
                if self.out.len() > b {
                    return false;
                }
            }
            return true;
        }
        if self.path.len() == self.max_len {
            return true;
        }
        let neighbors: Vec<Pos> = self.g.adj[v].iter().copied().collect();
        for w in neighbors {
            if w == v || self.on_path[w] || self.g.border_s.contains(&w) {
                continue;
            }
            if self.path.len() + self.dist_e[w] > self.max_len {
                continue;
            }
            // Chordless: `w` may touch only the current endpoint.
            let chord = self.path[..self.path.len() - 1]
                .iter()
                .any(|&u| self.g.adj[w].contains(&u));
            if chord {
                continue;
            }
            self.path.push(w);
            self.on_path[w] = true;
            let ok = self.extend();
            self.on_path[w] = false;
            self.path.pop();
            if !ok {
                return false;
            }
        }
        true
    }
}

/// Nodes on a shortest path from `sources` to each node, counted in nodes
/// (a source has distance 1). Unreachable nodes get `usize::MAX / 2`.
pub(crate) fn node_distances(g: &GeneralizedHexInstance, sources: &BTreeSet<Pos>) -> Vec<usize> {
    let far = usize::MAX / 2;
    let mut dist = vec![far; g.num_nodes()];
    let mut queue = VecDeque::new();
    for &v in sources {
        dist[v] = 1;
        queue.push_back(v);
    }
    while let Some(v) = queue.pop_front() {
        for &w in &g.adj[v] {
            if dist[w] == far {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
        }
    }
    dist
}

fn enumerate_paths(
    g: &GeneralizedHexInstance,
    max_len: usize,
    budget: Option<usize>,
) -> Option<Vec<Vec<Pos>>> {
    if g.se_adjacent {
        return Some(vec![Vec::new()]);
    }
    let mut search = PathSearch {
        g,
        max_len,
        budget,
        path: Vec::new(),
        on_path: vec![false; g.num_nodes()],
        dist_e: node_distances(g, &g.border_e),
        out: Vec::new(),
    };
    for &v in &g.border_s {
        if search.dist_e[v] > max_len {
            continue;
        }
        search.path.push(v);
        search.on_path[v] = true;
        let ok = search.extend();
        search.on_path[v] = false;
        search.path.pop();
        if !ok {
            return None;
        }
    }
    Some(minimal_sets(&canonical_family(search.out)))
}

/// The ⊆-minimal node sets of paths joining the two borders with at most
/// `max_len` nodes. When `s` and `e` are already joined the only minimal
/// set is the empty one.
pub fn min_connecting_sets(g: &GeneralizedHexInstance, max_len: usize) -> Vec<Vec<Pos>> {
    enumerate_paths(g, max_len, None).expect("unbounded enumeration always completes")
}

/// Like [`min_connecting_sets`] but gives up (returning `None`) once more
/// than `budget` paths have been found.
pub fn min_connecting_sets_bounded(
    g: &GeneralizedHexInstance,
    max_len: usize,
    budget: usize,
) -> Option<Vec<Vec<Pos>>> {
    enumerate_paths(g, max_len, Some(budget))
}

/// Claim-free game whose winning sets are the minimal connecting sets.
pub fn game_from_ghex(g: &GeneralizedHexInstance, max_len: usize) -> GameInstance {
    GameInstance::open(g.num_nodes(), min_connecting_sets(g, max_len))
        .expect("connecting sets reference graph nodes")
        .with_labels(g.labels.clone())
}

fn default_label(v: Pos, label: &str) -> bool {
    label == v.to_string()
}

/// Text form: `p ghex <n> <m>`, optional `n <v> <label>` lines, `s`/`e`
/// border lines, an optional `t` line when `s` and `e` are adjacent, then
/// `m` lines `a <u> <v>`. Comment lines start with `c`.
pub fn write_ghex(g: &GeneralizedHexInstance) -> String {
    let edges = g.edges();
    let mut out = String::new();
    let _ = writeln!(out, "p ghex {} {}", g.num_nodes(), edges.len());
    for (v, l) in g.labels.iter().enumerate() {
        if !default_label(v, l) {
            let _ = writeln!(out, "n {v} {l}");
        }
    }
    for (tag, set) in [("s", &g.border_s), ("e", &g.border_e)] {
        out.push_str(tag);
        for v in set {
            let _ = write!(out, " {v}");
        }
        out.push('\n');
    }
    if g.se_adjacent {
        out.push_str("t\n");
    }
    for (u, v) in edges {
        let _ = writeln!(out, "a {u} {v}");
    }
    out
}

pub fn parse_ghex(text: &str) -> Result<GeneralizedHexInstance> {
    let mut g: Option<GeneralizedHexInstance> = None;
    let mut declared_edges = 0;
    let mut edges = 0;
    let node = |tok: &str, n: usize, line: usize| -> Result<Pos> {
        let v: Pos = tok
            .parse()
            .map_err(|_| Error::parse(line, format!("bad node `{tok}`")))?;
        if v >= n {
            return Err(Error::parse(line, format!("node {v} out of range")));
        }
        Ok(v)
    };
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let mut toks = raw.split_whitespace();
        let Some(tag) = toks.next() else { continue };
        if tag == "c" || tag.starts_with('#') {
            continue;
        }
        if tag == "p" {
            if g.is_some() {
                return Err(Error::parse(line, "duplicate header"));
            }
            let kind = toks.next();
            let n = toks.next().and_then(|t| t.parse::<usize>().ok());
            let m = toks.next().and_then(|t| t.parse::<usize>().ok());
            match (kind, n, m, toks.next()) {
                (Some("ghex"), Some(n), Some(m), None) => {
                    g = Some(GeneralizedHexInstance::new(n, [], [], []).unwrap());
                    declared_edges = m;
                }
                _ => return Err(Error::parse(line, "expected `p ghex <nodes> <edges>`")),
            }
            continue;
        }
        let Some(g) = g.as_mut() else {
            return Err(Error::parse(line, "missing `p ghex` header"));
        };
        let n = g.num_nodes();
        match tag {
            "s" | "e" => {
                for t in toks {
                    let v = node(t, n, line)?;
                    if tag == "s" {
                        g.border_s.insert(v);
                    } else {
                        g.border_e.insert(v);
                    }
                }
            }
            "t" => g.se_adjacent = true,
            "a" => {
                let u = node(toks.next().unwrap_or(""), n, line)?;
                let v = node(toks.next().unwrap_or(""), n, line)?;
                if toks.next().is_some() {
                    return Err(Error::parse(line, "trailing tokens after edge"));
                }
                g.add_edge(u, v);
                edges += 1;
            }
            "n" => {
                let v = node(toks.next().unwrap_or(""), n, line)?;
                let label: Vec<&str> = toks.collect();
                if label.is_empty() {
                    return Err(Error::parse(line, "missing label"));
                }
                g.labels[v] = label.join(" ");
            }
            other => return Err(Error::parse(line, format!("unknown line type `{other}`"))),
        }
    }
    let g = g.ok_or_else(|| Error::parse(0, "missing `p ghex` header"))?;
    if edges != declared_edges {
        return Err(Error::parse(
            text.lines().count(),
            format!("header announces {declared_edges} edges, found {edges}"),
        ));
    }
    Ok(g)
}
