//! Cross-checks every applicable encoding against the game oracle.

use std::fmt;

use crate::error::Result;
use crate::game::{GeneralizedHexInstance, Player};
use crate::hex::{board_to_ghex, parse_hex};
use crate::httt::{catalog, find_shape, httt_game};
use crate::oracle::Oracle;
use crate::qbf::eval::Evaluator;
use crate::runner::{encode_instance, EncodeOptions, Encoding, Formula, Instance};

/// Evaluator limit used by the checks; encodings of desk-scale instances
/// stay well below it.
pub const CHECK_VAR_LIMIT: usize = 4096;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub instance: String,
    pub encoding: Encoding,
    pub depth: usize,
    pub symmetry_reduce: bool,
    pub oracle: bool,
    /// The encoding's value, or the error that prevented it.
    pub value: std::result::Result<bool, String>,
}

impl Check {
    pub fn agrees(&self) -> bool {
        self.value == Ok(self.oracle)
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sym = if self.symmetry_reduce { " (symmetry)" } else { "" };
        let value = match &self.value {
            Ok(v) => v.to_string(),
            Err(e) => format!("error: {e}"),
        };
        write!(
            f,
            "{} {}{} d={}: oracle {} encoding {}",
            self.instance, self.encoding, sym, self.depth, self.oracle, value
        )
    }
}

#[derive(Copy, Clone, Debug)]
pub struct CheckOptions {
    /// Evaluate circuits after Tseitin lowering instead of directly.
    pub via_cnf: bool,
    pub var_limit: usize,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            via_cnf: true,
            var_limit: CHECK_VAR_LIMIT,
        }
    }
}

/// Encodings defined for an instance kind.
pub fn applicable(inst: &Instance) -> Vec<Encoding> {
    use Encoding::*;
    match inst {
        Instance::Hex(_) => vec![Ea, En, Et, La, Ln, Sa, Sn],
        Instance::Ghex(_) => vec![Ea, En, La, Ln, Sa, Sn],
        Instance::Httt { .. } => vec![Ea, HtttSn],
    }
}

/// Black's (Short's) oracle verdict within `d` plies.
pub fn oracle_verdict(inst: &Instance, d: usize) -> Result<bool> {
    let oracle = Oracle::with_limit(40);
    Ok(match inst {
        Instance::Hex(board) => {
            let (g, claims) = board_to_ghex(board, Player::Black);
            oracle.solve_claimed_ghex(&g, &claims, d)?.black_wins
        }
        Instance::Ghex(g) => oracle.solve_ghex(g, d)?.black_wins,
        Instance::Httt { shape, size } => oracle.solve_game(&httt_game(shape, *size)?, d)?.black_wins,
    })
}

pub fn evaluate_formula(f: &Formula, opts: CheckOptions) -> Result<bool> {
    let ev = Evaluator::with_limit(opts.var_limit);
    match f {
        Formula::Cnf(c) => ev.evaluate(c),
        Formula::Circuit(c) if opts.via_cnf => ev.evaluate(&f.to_cnf()).or_else(|_| ev.evaluate_circuit(c)),
        Formula::Circuit(c) => ev.evaluate_circuit(c),
    }
}

/// Checks every applicable encoding (and, for polyomino boards, the
/// symmetry-reduced variant) at depth `d`.
pub fn check_instance(name: &str, inst: &Instance, d: usize, opts: CheckOptions) -> Result<Vec<Check>> {
    let oracle = oracle_verdict(inst, d)?;
    let mut out = Vec::new();
    for enc in applicable(inst) {
        let syms: &[bool] = if enc == Encoding::HtttSn { &[false, true] } else { &[false] };
        for &symmetry_reduce in syms {
            let value = encode_instance(inst, enc, d, EncodeOptions { symmetry_reduce })
                .and_then(|e| evaluate_formula(&e.formula, opts))
                .map_err(|e| e.to_string());
            out.push(Check {
                instance: name.to_string(),
                encoding: enc,
                depth: d,
                symmetry_reduce,
                oracle,
                value,
            });
        }
    }
    Ok(out)
}

const HEIN9: &str = "size 4\nblack b1 a3\nwhite c1 a4 d4\n";

/// Desk-scale instances shipped with the tool, with the depths to check.
pub fn builtin_suite() -> Vec<(String, Instance, Vec<usize>)> {
    let mut suite = Vec::new();
    for n in 1..=3 {
        suite.push((
            format!("empty{n}"),
            Instance::Hex(crate::hex::empty_board(n).unwrap()),
            vec![1, 3, 5],
        ));
    }
    suite.push((
        "hein9".to_string(),
        Instance::Hex(parse_hex(HEIN9).unwrap()),
        vec![1, 3, 5],
    ));
    suite.push((
        "3x3 b2/a1".to_string(),
        Instance::Hex(parse_hex("size 3\nblack b2\nwhite a1\n").unwrap()),
        vec![1, 3, 5],
    ));
    let path = GeneralizedHexInstance::new(4, [(0, 1), (1, 2), (2, 3), (0, 2)], [0], [3]).unwrap();
    suite.push(("ghex path4".to_string(), Instance::Ghex(path), vec![1, 3, 5]));
    let fork = GeneralizedHexInstance::new(5, [(0, 1), (0, 2), (1, 3), (2, 3), (3, 4)], [0], [3, 4]).unwrap();
    suite.push(("ghex fork5".to_string(), Instance::Ghex(fork), vec![1, 3, 5]));
    let shapes = catalog();
    for (name, depths) in [("Domino", vec![3, 5]), ("El", vec![5]), ("Tic", vec![5])] {
        let shape = find_shape(&shapes, name).unwrap().clone();
        suite.push((
            format!("httt {name} 3x3"),
            Instance::Httt { shape, size: 3 },
            depths,
        ));
    }
    suite
}

/// Runs the built-in suite; returns all checks.
pub fn run_builtin(opts: CheckOptions) -> Result<Vec<Check>> {
    let mut all = Vec::new();
    for (name, inst, depths) in builtin_suite() {
        for d in depths {
            all.extend(check_instance(&name, &inst, d, opts)?);
        }
    }
    Ok(all)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tiny_instances_agree() {
        let inst = Instance::Hex(crate::hex::empty_board(2).unwrap());
        for d in [1, 3] {
            for c in check_instance("empty2", &inst, d, CheckOptions::default()).unwrap() {
                assert!(c.agrees(), "{c}");
            }
        }
    }
}
