//! QDIMACS reader and writer.

use std::fmt::Write as _;

use super::{Lit, QbfCnf, QuantPrefix, Quantifier, Var};
use crate::error::{Error, Result};

/// Deterministic QDIMACS text: header, one line per quantifier block, one
/// line per clause, Unix newlines, no trailing whitespace.
pub fn write_qdimacs(f: &QbfCnf) -> String {
    write_qdimacs_with_comments(f, &[])
}

/// Like [`write_qdimacs`], with `c` comment lines before the header.
pub fn write_qdimacs_with_comments(f: &QbfCnf, comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        if c.is_empty() {
            out.push_str("c\n");
        } else {
            let _ = writeln!(out, "c {c}");
        }
    }
    let _ = writeln!(out, "p cnf {} {}", f.num_vars(), f.clauses.len());
    for b in f.prefix.blocks() {
        out.push(match b.quantifier {
            Quantifier::Exists => 'e',
            Quantifier::Forall => 'a',
        });
        for v in &b.vars {
            let _ = write!(out, " {v}");
        }
        out.push_str(" 0\n");
    }
    for c in &f.clauses {
        for l in c {
            let _ = write!(out, "{l} ");
        }
        out.push_str("0\n");
    }
    out
}

pub fn parse_qdimacs(text: &str) -> Result<QbfCnf> {
    let mut header: Option<(usize, usize)> = None;
    let mut prefix = QuantPrefix::new();
    let mut clauses: Vec<Vec<Lit>> = Vec::new();
    let mut current: Vec<Lit> = Vec::new();
    let mut declared: Vec<bool> = Vec::new();
    let mut in_matrix = false;

    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let mut toks = line.split_whitespace();
        let first = toks.next().unwrap();
        if first == "p" {
            if header.is_some() {
                return Err(Error::parse(lineno, "duplicate header"));
            }
            let fmt = toks.next();
            let nv = toks.next().and_then(|t| t.parse::<usize>().ok());
            let nc = toks.next().and_then(|t| t.parse::<usize>().ok());
            match (fmt, nv, nc, toks.next()) {
                (Some("cnf"), Some(nv), Some(nc), None) => {
                    header = Some((nv, nc));
                    declared = vec![false; nv + 1];
                }
                _ => return Err(Error::parse(lineno, "expected `p cnf <vars> <clauses>`")),
            }
            continue;
        }
        let Some((nv, _)) = header else {
            return Err(Error::parse(lineno, "missing `p cnf` header"));
        };
        if first == "e" || first == "a" {
            if in_matrix {
                return Err(Error::parse(lineno, "quantifier line after clauses"));
            }
            let q = if first == "e" {
                Quantifier::Exists
            } else {
                Quantifier::Forall
            };
            let mut vars = Vec::new();
            let mut terminated = false;
            for t in toks {
                let v: usize = t
                    .parse()
                    .map_err(|_| Error::parse(lineno, format!("bad variable `{t}`")))?;
                if v == 0 {
                    terminated = true;
                    break;
                }
                if v > nv {
                    return Err(Error::parse(lineno, format!("variable {v} exceeds header")));
                }
                if declared[v] {
                    return Err(Error::parse(lineno, format!("variable {v} quantified twice")));
                }
                declared[v] = true;
                vars.push(v as Var);
            }
            if !terminated {
                return Err(Error::parse(lineno, "quantifier line not terminated by 0"));
            }
            prefix.push(q, vars);
            continue;
        }
        in_matrix = true;
        for t in std::iter::once(first).chain(toks) {
            let x: i32 = t
                .parse()
                .map_err(|_| Error::parse(lineno, format!("bad literal `{t}`")))?;
            if x == 0 {
                clauses.push(std::mem::take(&mut current));
                continue;
            }
            let v = x.unsigned_abs() as usize;
            if v > nv {
                return Err(Error::parse(lineno, format!("variable {v} exceeds header")));
            }
            if !declared[v] {
                return Err(Error::parse(lineno, format!("undeclared variable {v}")));
            }
            current.push(Lit::from_dimacs(x).unwrap());
        }
    }
    let Some((_, nc)) = header else {
        return Err(Error::parse(0, "missing `p cnf` header"));
    };
    if !current.is_empty() {
        return Err(Error::parse(text.lines().count(), "last clause not terminated by 0"));
    }
    if clauses.len() != nc {
        return Err(Error::parse(
            text.lines().count(),
            format!("header announces {nc} clauses, found {}", clauses.len()),
        ));
    }
    Ok(QbfCnf { prefix, clauses })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn direct_mapping() {
        let mut prefix = QuantPrefix::new();
        prefix.push(Quantifier::Exists, [1]);
        prefix.push(Quantifier::Forall, [2]);
        let f = QbfCnf {
            prefix,
            clauses: vec![vec![Lit::pos(1), Lit::neg(2)]],
        };
        let text = write_qdimacs(&f);
        assert_eq!(text, "p cnf 2 1\ne 1 0\na 2 0\n1 -2 0\n");
        assert_eq!(parse_qdimacs(&text).unwrap(), f);
    }

    #[test]
    fn merges_non_alternating_prefix() {
        let f = parse_qdimacs("c hi\np cnf 3 1\ne 1 0\ne 2 0\na 3 0\n1 2 3 0\n").unwrap();
        assert_eq!(f.prefix.alternation_depth(), 2);
        assert_eq!(f.prefix.blocks()[0].vars, vec![1, 2]);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let e = parse_qdimacs("p cnf 2 1\ne 1 0\n1 2 0\n").unwrap_err();
        assert_eq!(
            e,
            Error::Parse {
                line: 3,
                msg: "undeclared variable 2".into()
            }
        );
        assert!(matches!(
            parse_qdimacs("p cnf 1 1\ne x 0\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(parse_qdimacs("e 1 0\n").is_err());
    }

    #[test]
    fn clauses_may_span_lines() {
        let f = parse_qdimacs("p cnf 2 1\ne 1 2 0\n1\n-2 0\n").unwrap();
        assert_eq!(f.clauses, vec![vec![Lit::pos(1), Lit::neg(2)]]);
    }
}
