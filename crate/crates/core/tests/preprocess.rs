mod common;

use posqbf::game::Player;
use posqbf::hex::board_to_ghex;
use posqbf::oracle::Oracle;
use posqbf::preprocess::{reduce_board, reduce_ghex};

#[test]
fn graph_reduction_preserves_verdicts() {
    let mut rng = common::rng(21);
    let oracle = Oracle::new();
    for i in 0..150 {
        let g = common::random_ghex(&mut rng, 7);
        for d in [1, 3, 5] {
            let (h, report) = reduce_ghex(&g, d).unwrap();
            assert!(h.num_nodes() <= g.num_nodes());
            assert_eq!(report.filled, g.num_nodes() - h.num_nodes(), "#{i}");
            assert_eq!(
                oracle.solve_ghex(&h, d).unwrap().black_wins,
                oracle.solve_ghex(&g, d).unwrap().black_wins,
                "#{i} d={d}"
            );
        }
    }
}

#[test]
fn board_reduction_preserves_verdicts() {
    let oracle = Oracle::new();
    for b in common::small_boards() {
        let (g, claims) = board_to_ghex(&b, Player::Black);
        for d in [1, 3, 5] {
            let red = reduce_board(&b, d).unwrap();
            assert_eq!(
                oracle.solve_ghex(&red.instance, d).unwrap().black_wins,
                oracle.solve_claimed_ghex(&g, &claims, d).unwrap().black_wins,
                "{} d={d}",
                posqbf::hex::write_hex(&b)
            );
        }
    }
}
