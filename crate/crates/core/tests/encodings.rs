mod common;

use posqbf::explicit::{encode_ea, encode_en};
use posqbf::game::{game_from_ghex, GameInstance};
use posqbf::lifted::{encode_la, encode_ln, encode_sa, encode_sn};
use posqbf::oracle::Oracle;
use posqbf::preprocess::stutter_closure;
use posqbf::qbf::eval::Evaluator;
use posqbf::qbf::tseitin::tseitin;
use posqbf::selfcheck::CHECK_VAR_LIMIT;
use rand::Rng;

fn ev() -> Evaluator {
    Evaluator::with_limit(CHECK_VAR_LIMIT)
}

/// Encoders applied to instances that skipped every preprocessing step.
#[test]
fn raw_graph_encodings_match_oracle() {
    let mut rng = common::rng(11);
    let oracle = Oracle::new();
    for i in 0..60 {
        let g = common::random_ghex(&mut rng, 5);
        for d in [1, 3, 5] {
            let truth = oracle.solve_ghex(&g, d).unwrap().black_wins;
            let en = ev().evaluate(&encode_en(&g, d).unwrap().formula).unwrap();
            assert_eq!(en, truth, "EN #{i} d={d}");
            let closed = stutter_closure(&g);
            let ln = ev().evaluate(&tseitin(&encode_ln(&closed, d).unwrap().circuit)).unwrap();
            assert_eq!(ln, truth, "LN #{i} d={d}");
            let sn = ev().evaluate(&tseitin(&encode_sn(&closed, d).unwrap().circuit)).unwrap();
            assert_eq!(sn, truth, "SN #{i} d={d}");
            let game = game_from_ghex(&g, d.div_ceil(2));
            let ea = ev().evaluate(&encode_ea(&game, d).unwrap().formula).unwrap();
            assert_eq!(ea, truth, "EA #{i} d={d}");
        }
    }
}

fn random_game(rng: &mut rand::rngs::StdRng) -> GameInstance {
    let n = rng.gen_range(1..=5);
    let sets: Vec<Vec<usize>> = (0..rng.gen_range(0..=4))
        .map(|_| {
            let k = rng.gen_range(1..=n.min(3));
            let mut s: Vec<usize> = (0..k).map(|_| rng.gen_range(0..n)).collect();
            s.sort_unstable();
            s.dedup();
            s
        })
        .collect();
    GameInstance::open(n, sets).unwrap()
}

#[test]
fn abstract_game_encodings_match_oracle() {
    let mut rng = common::rng(12);
    let oracle = Oracle::new();
    for i in 0..150 {
        let game = random_game(&mut rng);
        for d in [1, 3, 5] {
            let truth = oracle.solve_game(&game, d).unwrap().black_wins;
            if game.win_sets().iter().all(|w| w.len() <= d.div_ceil(2)) {
                let ea = ev().evaluate(&encode_ea(&game, d).unwrap().formula).unwrap();
                assert_eq!(ea, truth, "EA #{i} d={d}");
            }
            let la = ev().evaluate(&tseitin(&encode_la(&game, d).unwrap().circuit)).unwrap();
            assert_eq!(la, truth, "LA #{i} d={d}");
            let sa = ev().evaluate(&tseitin(&encode_sa(&game, d).unwrap().circuit)).unwrap();
            assert_eq!(sa, truth, "SA #{i} d={d}");
        }
    }
}
