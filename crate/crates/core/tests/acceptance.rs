//! Acceptance suite: one PASS/FAIL line per criterion.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use posqbf::explicit::{bit_width, encode_ea, encode_en, encode_et};
use posqbf::game::{min_connecting_sets, GameInstance, GeneralizedHexInstance, Player};
use posqbf::hex::{board_to_ghex, empty_board, parse_hex};
use posqbf::httt::{catalog, encode_httt_sn, find_shape, httt_game};
use posqbf::oracle::Oracle;
use posqbf::preprocess::{
    contract, fill_breaker, prune_win_sets, reduce_board, stutter_closure, transversal,
};
use posqbf::qbf::eval::Evaluator;
use posqbf::qbf::qcir::{parse_qcir, write_qcir};
use posqbf::qbf::qdimacs::{parse_qdimacs, write_qdimacs};
use posqbf::qbf::stats::EncodingStats;
use posqbf::qbf::tseitin::tseitin;
use posqbf::runner::{encode_instance, EncodeOptions, Encoding, Instance};
use posqbf::selfcheck::{check_instance, evaluate_formula, CheckOptions};
use posqbf::Error;

const HEIN9: &str = "size 4\nblack b1 a3\nwhite c1 a4 d4\n";
const GHEX_POPULATION: usize = 240;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn oracle() -> Oracle {
    Oracle::with_limit(40)
}

fn within(start: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let took = start.elapsed();
    if took <= limit {
        Ok(())
    } else {
        Err(format!("{what} took {took:.1?}, limit {limit:?}"))
    }
}

fn ghex_population() -> Vec<GeneralizedHexInstance> {
    let mut rng = common::rng(0x5eed);
    (0..GHEX_POPULATION).map(|_| common::random_ghex(&mut rng, 7)).collect()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let opts = CheckOptions::default();
    let mut checks = 0;
    let mut bad = Vec::new();
    for (i, g) in ghex_population().into_iter().enumerate() {
        let inst = Instance::Ghex(g);
        for d in [1, 3, 5] {
            for c in check_instance(&format!("ghex#{i}"), &inst, d, opts).map_err(|e| e.to_string())? {
                checks += 1;
                if !c.agrees() {
                    bad.push(c.to_string());
                }
            }
        }
    }
    let boards = common::small_boards();
    for b in &boards {
        let inst = Instance::Hex(b.clone());
        let name = posqbf::hex::write_hex(b).replace('\n', "; ");
        for d in [1, 3, 5] {
            for c in check_instance(&name, &inst, d, opts).map_err(|e| e.to_string())? {
                checks += 1;
                if !c.agrees() {
                    bad.push(c.to_string());
                }
            }
        }
    }
    within(start, Duration::from_secs(15 * 60), "equivalence suite")?;
    if bad.is_empty() {
        Ok(format!(
            "{checks} checks over {GHEX_POPULATION} graphs and {} boards, zero disagreements ({:.1?})",
            boards.len(),
            start.elapsed()
        ))
    } else {
        Err(format!("{} disagreements, first: {}", bad.len(), bad[0]))
    }
}

/// Borders and internal edges of `g` by node label.
fn labelled(g: &GeneralizedHexInstance) -> (BTreeSet<String>, BTreeSet<String>, BTreeSet<(String, String)>) {
    let name = |v: usize| g.label(v).to_string();
    let s = g.border_s().iter().map(|&v| name(v)).collect();
    let e = g.border_e().iter().map(|&v| name(v)).collect();
    let edges = g
        .edges()
        .into_iter()
        .map(|(u, v)| {
            let (a, b) = (name(u), name(v));
            if a <= b {
                (a, b)
            } else {
                (b, a)
            }
        })
        .collect();
    (s, e, edges)
}

fn set(items: &[&str]) -> BTreeSet<String> {
    items.iter().map(|s| s.to_string()).collect()
}

fn pairs(items: &[(&str, &str)]) -> BTreeSet<(String, String)> {
    items.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
}

fn criterion_2() -> Outcome {
    let board = parse_hex(HEIN9).map_err(|e| e.to_string())?;
    let red = reduce_board(&board, 5).map_err(|e| e.to_string())?;
    let nodes: BTreeSet<String> = red.instance.labels().iter().cloned().collect();
    if nodes != set(&["a2", "b2", "b3", "b4"]) {
        return Err(format!("open nodes {nodes:?}"));
    }
    let got = labelled(&red.instance);
    let want = (
        set(&["a2", "b2"]),
        set(&["b4"]),
        pairs(&[("a2", "b3"), ("b2", "b3"), ("b3", "b4")]),
    );
    if got != want {
        return Err(format!("reduced instance {got:?}"));
    }
    let t = transversal(&board, 5).map_err(|e| e.to_string())?;
    let got = labelled(&t);
    let want = (set(&["b2", "b3", "b4"]), set(&["a2", "b3", "b4"]), pairs(&[("a2", "b2")]));
    if got != want {
        return Err(format!("transversal instance {got:?}"));
    }
    Ok("reduced and transversal instances match exactly".into())
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let board = parse_hex(HEIN9).map_err(|e| e.to_string())?;
    let (g, claims) = board_to_ghex(&board, Player::Black);
    let o = oracle();
    let d7 = o.solve_claimed_ghex(&g, &claims, 7).map_err(|e| e.to_string())?;
    let first: Vec<String> = o
        .winning_first_moves_claimed_ghex(&g, &claims, 7)
        .map_err(|e| e.to_string())?
        .into_iter()
        .map(|v| g.label(v).to_string())
        .collect();
    let d5 = o.solve_claimed_ghex(&g, &claims, 5).map_err(|e| e.to_string())?;
    within(start, Duration::from_secs(5 * 60), "oracle")?;
    if !d7.black_wins || !first.iter().any(|m| m == "c3") {
        return Err(format!("d=7 black_wins={} first moves {first:?}", d7.black_wins));
    }
    // Frozen regression value.
    if d5.black_wins {
        return Err("d=5 verdict changed: Black now wins".into());
    }
    Ok(format!("d=7 Black wins, first moves {first:?}; d=5 Black does not win"))
}

fn synthetic_graph(n: usize) -> GeneralizedHexInstance {
    let mut edges: Vec<(usize, usize)> = (0..n - 1).map(|v| (v, v + 1)).collect();
    edges.extend((0..n.saturating_sub(2)).step_by(2).map(|v| (v, v + 2)));
    let half = (n / 2).max(1);
    GeneralizedHexInstance::new(n, edges, 0..half, half..n).unwrap()
}

fn synthetic_game(n: usize, d: usize) -> GameInstance {
    let size = d.div_ceil(2).min(n).min(3);
    let sets: Vec<Vec<usize>> = (0..n).map(|i| (0..size).map(|k| (i + k) % n).collect()).collect();
    GameInstance::open(n, sets).unwrap()
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let mut checked = 0;
    for n in [2usize, 4, 7, 16] {
        let w = bit_width(n);
        for d in [1usize, 3, 5, 7] {
            let ell = (d - 1) / 2;
            let half = (d - 1) / 2;
            let board_vars = (d + 1) * n + d * w;
            let board = [d * n + n * w, half * n * w, half * n];

            let game = synthetic_game(n, d);
            let ea = encode_ea(&game, d).map_err(|e| e.to_string())?;
            let sum_h: usize = game.win_sets().iter().map(Vec::len).sum();
            let want = (
                board_vars + game.win_sets().len(),
                [board[0] + sum_h, board[1], board[2] + 1],
            );
            compare("EA", n, d, &ea, want)?;

            let g = synthetic_graph(n);
            let en = encode_en(&g, d).map_err(|e| e.to_string())?;
            let want = (
                board_vars + d.div_ceil(2) * n,
                [board[0] + d.div_ceil(2) * n, board[1], board[2] + 1 + (n - g.border_e().len()) * ell],
            );
            compare("EN", n, d, &en, want)?;

            let et = encode_et(&g, d).map_err(|e| e.to_string())?;
            let want = (
                board_vars + n,
                [board[0] + g.border_s().len(), board[1] + g.num_arcs(), board[2]],
            );
            compare("ET", n, d, &et, want)?;
            checked += 3;
        }
    }
    within(start, Duration::from_secs(60), "size checks")?;
    Ok(format!("{checked} encodings match the closed forms exactly"))
}

fn compare(
    name: &str,
    n: usize,
    d: usize,
    e: &posqbf::explicit::ExplicitEncoding,
    (vars, [binary, ternary, long]): (usize, [usize; 3]),
) -> Result<(), String> {
    let got_vars = e.formula.prefix.num_vars();
    let f = &e.families;
    if got_vars != vars || f.binary != binary || f.ternary != ternary || f.long != long {
        return Err(format!(
            "{name} n={n} d={d}: vars {got_vars} (want {vars}), binary {} ({binary}), ternary {} ({ternary}), long {} ({long})",
            f.binary, f.ternary, f.long
        ));
    }
    Ok(())
}

fn criterion_5() -> Outcome {
    let board = empty_board(19).map_err(|e| e.to_string())?;
    let inst = Instance::Hex(board);
    let targets = [
        (Encoding::En, 25_000.0, 122_000.0),
        (Encoding::Et, 17_000.0, 100_000.0),
        (Encoding::Ln, 5_000.0, 22_000.0),
        (Encoding::Sn, 53_000.0, 261_000.0),
    ];
    let mut report = Vec::new();
    for (enc, vars, clauses) in targets {
        let start = Instant::now();
        let e = encode_instance(&inst, enc, 45, EncodeOptions::default()).map_err(|e| e.to_string())?;
        let s = EncodingStats::of_cnf(&e.formula.to_cnf());
        within(start, Duration::from_secs(120), &format!("{enc} generation"))?;
        let dv = s.num_vars as f64 / vars - 1.0;
        let dc = s.num_clauses as f64 / clauses - 1.0;
        report.push(format!("{enc} {}/{} ({:+.0}%/{:+.0}%)", s.num_vars, s.num_clauses, dv * 100.0, dc * 100.0));
        if dv.abs() > 0.25 || dc.abs() > 0.25 {
            return Err(format!("out of tolerance: {}", report.join(", ")));
        }
    }
    Ok(report.join(", "))
}

fn criterion_6() -> Outcome {
    let mut rng = common::rng(6);
    let ev = Evaluator::new();
    for i in 0..500 {
        let c = common::random_circuit(&mut rng, 3, 6);
        let f = tseitin(&c);
        let direct = ev.evaluate_circuit(&c).map_err(|e| e.to_string())?;
        let lowered = ev.evaluate(&f).map_err(|e| e.to_string())?;
        if direct != lowered {
            return Err(format!("circuit #{i}: direct {direct}, lowered {lowered}\n{}", write_qcir(&c)));
        }
        let added = f.prefix.num_vars() - c.prefix.num_vars();
        if added != c.num_gates() {
            return Err(format!("circuit #{i}: {} gates but {added} added variables", c.num_gates()));
        }
    }
    Ok("500 random circuits: values agree, one variable per gate".into())
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let shapes = catalog();
    let o = oracle();
    let opts = CheckOptions::default();
    let mut compared = 0;
    let mut signalled = 0;
    for name in ["Domino", "Tic", "El"] {
        let shape = find_shape(&shapes, name).ok_or(format!("{name} missing"))?;
        let game = httt_game(shape, 3).map_err(|e| e.to_string())?;
        for d in [1, 3, 5] {
            let truth = o.solve_game(&game, d).map_err(|e| e.to_string())?.black_wins;
            let ea = evaluate_formula(
                &posqbf::runner::Formula::Cnf(encode_ea(&game, d).map_err(|e| e.to_string())?.formula),
                opts,
            )
            .map_err(|e| e.to_string())?;
            if ea != truth {
                return Err(format!("{name} d={d}: EA {ea}, oracle {truth}"));
            }
            for sym in [false, true] {
                match encode_httt_sn(shape, 3, d, sym) {
                    Ok(e) => {
                        let f = posqbf::runner::Formula::Circuit(e.circuit);
                        let v = evaluate_formula(&f, opts).map_err(|e| e.to_string())?;
                        if v != truth {
                            return Err(format!("{name} d={d} symmetry={sym}: {v}, oracle {truth}"));
                        }
                        compared += 1;
                    }
                    Err(Error::ShapeTooLarge { .. }) if !truth => signalled += 1,
                    Err(e) => return Err(format!("{name} d={d}: {e}")),
                }
            }
        }
    }
    within(start, Duration::from_secs(5 * 60), "polyomino checks")?;
    Ok(format!(
        "{compared} encodings agree with EA and the oracle; {signalled} too-short depths signalled"
    ))
}

fn criterion_8() -> Outcome {
    let mut rng = common::rng(8);
    for i in 0..500 {
        let f = common::random_cnf(&mut rng, 12, 20);
        let text = write_qdimacs(&f);
        if text != write_qdimacs(&f) {
            return Err(format!("CNF #{i}: writer not deterministic"));
        }
        let back = parse_qdimacs(&text).map_err(|e| format!("CNF #{i}: {e}\n{text}"))?;
        if back != f {
            return Err(format!("CNF #{i} changed in round trip\n{text}"));
        }
    }
    for i in 0..500 {
        let c = common::random_circuit(&mut rng, 8, 12);
        let text = write_qcir(&c);
        if text != write_qcir(&c) {
            return Err(format!("circuit #{i}: writer not deterministic"));
        }
        let back = parse_qcir(&text).map_err(|e| format!("circuit #{i}: {e}\n{text}"))?;
        if back != c {
            return Err(format!("circuit #{i} changed in round trip\n{text}"));
        }
    }
    Ok("500 CNF and 500 circuit round trips, deterministic writers".into())
}

fn criterion_9() -> Outcome {
    let o = oracle();
    let err = |e: posqbf::Error| e.to_string();
    let mut checks = 0;
    for (i, g) in ghex_population().iter().enumerate() {
        let game = GameInstance::open(g.num_nodes(), min_connecting_sets(g, g.num_nodes())).map_err(err)?;
        for d in [1, 3, 5] {
            let truth = o.solve_ghex(g, d).map_err(err)?.black_wins;
            let pruned = o.solve_game(&prune_win_sets(&game, d).map_err(err)?, d).map_err(err)?.black_wins;
            let filled = o.solve_game(&fill_breaker(&game), d).map_err(err)?.black_wins;
            let closed = o.solve_ghex(&stutter_closure(g), d).map_err(err)?.black_wins;
            if [pruned, filled, closed] != [truth; 3] {
                return Err(format!(
                    "ghex#{i} d={d}: oracle {truth}, pruned {pruned}, filled {filled}, closure {closed}"
                ));
            }
            checks += 3;
        }
    }
    for b in common::small_boards() {
        let (g, claims) = board_to_ghex(&b, Player::Black);
        let sets = min_connecting_sets(&g, g.num_nodes());
        let game = GameInstance::new(
            g.num_nodes(),
            claims.short_claimed.iter().copied(),
            claims.cut_claimed.iter().copied(),
            sets,
        )
        .map_err(err)?;
        let name = posqbf::hex::write_hex(&b).replace('\n', "; ");
        for d in [1, 3, 5] {
            let truth = o.solve_claimed_ghex(&g, &claims, d).map_err(err)?.black_wins;
            let contracted = o.solve_ghex(&contract(&g, &claims).map_err(err)?, d).map_err(err)?.black_wins;
            let pruned = o.solve_game(&prune_win_sets(&game, d).map_err(err)?, d).map_err(err)?.black_wins;
            let filled = o.solve_game(&fill_breaker(&game), d).map_err(err)?.black_wins;
            let closed = o
                .solve_claimed_ghex(&stutter_closure(&g), &claims, d)
                .map_err(err)?
                .black_wins;
            if [contracted, pruned, filled, closed] != [truth; 4] {
                return Err(format!(
                    "{name} d={d}: oracle {truth}, contract {contracted}, prune {pruned}, fill {filled}, closure {closed}"
                ));
            }
            checks += 4;
        }
    }
    Ok(format!("{checks} reductions preserve the oracle verdict"))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("cross-encoding equivalence", criterion_1),
        ("hein9 reduction golden test", criterion_2),
        ("hein9 depth-7 win", criterion_3),
        ("explicit size formulas", criterion_4),
        ("19x19 sizes at depth 45", criterion_5),
        ("Tseitin soundness", criterion_6),
        ("polyomino equivalence", criterion_7),
        ("format round trips", criterion_8),
        ("preprocessing soundness", criterion_9),
    ];
    let filter: Option<usize> = std::env::var("ACCEPTANCE_ONLY").ok().and_then(|s| s.parse().ok());
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let k = i + 1;
        if filter.is_some_and(|f| f != k) {
            continue;
        }
        let start = Instant::now();
        match run() {
            Ok(detail) => println!("criterion {k} PASS: {name}: {detail} [{:.1?}]", start.elapsed()),
            Err(detail) => {
                failed += 1;
                println!("criterion {k} FAIL: {name}: {detail} [{:.1?}]", start.elapsed());
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
