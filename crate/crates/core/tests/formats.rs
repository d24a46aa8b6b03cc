mod common;

use posqbf::qbf::qcir::{parse_qcir, write_qcir};
use posqbf::qbf::qdimacs::{parse_qdimacs, write_qdimacs};
use posqbf::Error;
use proptest::prelude::*;

proptest! {
    #[test]
    fn qdimacs_round_trips(seed in any::<u64>()) {
        let f = common::random_cnf(&mut common::rng(seed), 20, 30);
        let text = write_qdimacs(&f);
        prop_assert_eq!(&text, &write_qdimacs(&f));
        prop_assert_eq!(parse_qdimacs(&text).unwrap(), f);
    }

    #[test]
    fn qcir_round_trips(seed in any::<u64>()) {
        let c = common::random_circuit(&mut common::rng(seed), 10, 15);
        let text = write_qcir(&c);
        prop_assert_eq!(&text, &write_qcir(&c));
        prop_assert_eq!(parse_qcir(&text).unwrap(), c);
    }
}

fn error_line(e: Error) -> usize {
    match e {
        Error::Parse { line, .. } => line,
        other => panic!("expected a parse error, got {other}"),
    }
}

#[test]
fn qdimacs_errors_name_the_line() {
    let e = parse_qdimacs("c comment\np cnf 2 1\ne 1 2 0\n1 x 0\n").unwrap_err();
    assert_eq!(error_line(e), 4);
}

#[test]
fn qcir_errors_name_the_line() {
    let e = parse_qcir("#QCIR-G14\nexists(1)\noutput(2)\n2 = nand(1)\n").unwrap_err();
    assert_eq!(error_line(e), 4);
}
