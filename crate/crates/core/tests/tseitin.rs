mod common;

use posqbf::qbf::eval::Evaluator;
use posqbf::qbf::tseitin::tseitin;
use proptest::prelude::*;

proptest! {
    #[test]
    fn lowering_preserves_value(seed in any::<u64>()) {
        let c = common::random_circuit(&mut common::rng(seed), 4, 8);
        let f = tseitin(&c);
        let ev = Evaluator::new();
        prop_assert_eq!(ev.evaluate_circuit(&c).unwrap(), ev.evaluate(&f).unwrap());
        prop_assert_eq!(f.prefix.num_vars(), c.prefix.num_vars() + c.num_gates());
    }

    #[test]
    fn gate_variables_are_innermost_existentials(seed in any::<u64>()) {
        let c = common::random_circuit(&mut common::rng(seed), 4, 8);
        let f = tseitin(&c);
        let last = f.prefix.blocks().last().unwrap();
        prop_assert_eq!(last.quantifier, posqbf::qbf::Quantifier::Exists);
        prop_assert!(last.vars.len() >= c.num_gates());
    }
}
