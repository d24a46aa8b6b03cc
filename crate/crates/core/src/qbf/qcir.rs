//! QCIR-G14 reader and writer (and/or gates with negated inputs).

use std::collections::HashMap;
use std::fmt::Write as _;

use super::{Gate, GateKind, Lit, QbfCircuit, QuantPrefix, Quantifier, Var};
use crate::error::{Error, Result};

pub const QCIR_HEADER: &str = "#QCIR-G14";

pub fn write_qcir(c: &QbfCircuit) -> String {
    let mut out = String::new();
    out.push_str(QCIR_HEADER);
    out.push('\n');
    for b in c.prefix.blocks() {
        let q = match b.quantifier {
            Quantifier::Exists => "exists",
            Quantifier::Forall => "forall",
        };
        let _ = writeln!(out, "{q}({})", join(b.vars.iter().map(|v| v.to_string())));
    }
    let _ = writeln!(out, "output({})", c.output);
    for g in &c.gates {
        let _ = writeln!(
            out,
            "{} = {}({})",
            g.id,
            g.kind.name(),
            join(g.inputs.iter().map(|l| l.to_string()))
        );
    }
    out
}

fn join(items: impl Iterator<Item = String>) -> String {
    items.collect::<Vec<_>>().join(", ")
}

fn parse_call(line: &str, lineno: usize) -> Result<(&str, Vec<&str>)> {
    let open = line
        .find('(')
        .ok_or_else(|| Error::parse(lineno, "expected `(`"))?;
    if !line.ends_with(')') {
        return Err(Error::parse(lineno, "expected `)` at end of line"));
    }
    let name = line[..open].trim();
    let body = line[open + 1..line.len() - 1].trim();
    let args = if body.is_empty() {
        Vec::new()
    } else {
        body.split(',').map(str::trim).collect()
    };
    if args.iter().any(|a| a.is_empty()) {
        return Err(Error::parse(lineno, "empty argument"));
    }
    Ok((name, args))
}

fn valid_ident(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Parses QCIR. Identifiers are renumbered densely: prefix variables first
/// (in prefix order), then gates in definition order.
pub fn parse_qcir(text: &str) -> Result<QbfCircuit> {
    let mut ids: HashMap<String, Var> = HashMap::new();
    let mut next: Var = 1;
    let mut prefix = QuantPrefix::new();
    let mut output: Option<(String, bool, usize)> = None;
    let mut gates: Vec<Gate> = Vec::new();
    let mut seen_header = false;

    let resolve = |ids: &HashMap<String, Var>, tok: &str, lineno: usize| -> Result<Lit> {
        let (neg, name) = match tok.strip_prefix('-') {
            Some(rest) => (true, rest.trim()),
            None => (false, tok),
        };
        match ids.get(name) {
            Some(&v) => Ok(Lit::new(v, neg)),
            None => Err(Error::parse(lineno, format!("undeclared identifier `{name}`"))),
        }
    };

    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('#') {
            if !seen_header && line.starts_with("#QCIR") {
                if !line.starts_with(QCIR_HEADER) {
                    return Err(Error::parse(lineno, "unsupported QCIR dialect"));
                }
                seen_header = true;
            }
            continue;
        }
        if !seen_header {
            return Err(Error::parse(lineno, "missing #QCIR-G14 header"));
        }
        if let Some(eq) = line.find('=') {
            let name = line[..eq].trim();
            if !valid_ident(name) {
                return Err(Error::parse(lineno, format!("bad gate name `{name}`")));
            }
            if ids.contains_key(name) {
                return Err(Error::parse(lineno, format!("`{name}` defined twice")));
            }
            let (kind, args) = parse_call(line[eq + 1..].trim(), lineno)?;
            let kind = match kind {
                "and" => GateKind::And,
                "or" => GateKind::Or,
                other => return Err(Error::parse(lineno, format!("unsupported gate `{other}`"))),
            };
            let inputs = args
                .iter()
                .map(|a| resolve(&ids, a, lineno))
                .collect::<Result<Vec<_>>>()?;
            ids.insert(name.to_string(), next);
            gates.push(Gate {
                id: next,
                kind,
                inputs,
            });
            next += 1;
            continue;
        }
        let (kw, args) = parse_call(line, lineno)?;
        match kw {
            "exists" | "forall" => {
                if !gates.is_empty() || output.is_some() {
                    return Err(Error::parse(lineno, "quantifier block after output"));
                }
                let q = if kw == "exists" {
                    Quantifier::Exists
                } else {
                    Quantifier::Forall
                };
                let mut vars = Vec::new();
                for a in args {
                    if !valid_ident(a) {
                        return Err(Error::parse(lineno, format!("bad variable `{a}`")));
                    }
                    if ids.contains_key(a) {
                        return Err(Error::parse(lineno, format!("`{a}` quantified twice")));
                    }
                    ids.insert(a.to_string(), next);
                    vars.push(next);
                    next += 1;
                }
                prefix.push(q, vars);
            }
            "output" => {
                if output.is_some() || args.len() != 1 {
                    return Err(Error::parse(lineno, "expected a single output(...) line"));
                }
                let (neg, name) = match args[0].strip_prefix('-') {
                    Some(rest) => (true, rest.trim()),
                    None => (false, args[0]),
                };
                output = Some((name.to_string(), neg, lineno));
            }
            other => return Err(Error::parse(lineno, format!("unknown statement `{other}`"))),
        }
    }
    let Some((name, neg, lineno)) = output else {
        return Err(Error::parse(text.lines().count(), "missing output(...)"));
    };
    let out = resolve(&ids, &name, lineno)?;
    let out = if neg { !out } else { out };
    Ok(QbfCircuit {
        prefix,
        gates,
        output: out,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qbf::CircuitBuilder;

    #[test]
    fn header_and_gate_syntax() {
        let mut p = QuantPrefix::new();
        let x = p.fresh(Quantifier::Exists, 1)[0];
        let y = p.fresh(Quantifier::Forall, 1)[0];
        let mut b = CircuitBuilder::new(p);
        let g = b.and([Lit::pos(x), Lit::neg(y)]);
        let c = b.finish(!g);
        let text = write_qcir(&c);
        assert_eq!(
            text,
            "#QCIR-G14\nexists(1)\nforall(2)\noutput(-3)\n3 = and(1, -2)\n"
        );
        assert_eq!(parse_qcir(&text).unwrap(), c);
    }

    #[test]
    fn symbolic_names_are_renumbered() {
        let c = parse_qcir("#QCIR-G14\nforall(a)\nexists(b)\noutput(g)\ng = or(-a, b)\nh = and()\n")
            .unwrap();
        assert_eq!(c.gates[0].id, 3);
        assert_eq!(c.gates[0].inputs, vec![Lit::neg(1), Lit::pos(2)]);
        assert_eq!(c.gates[1].inputs, vec![]);
        assert_eq!(c.output, Lit::pos(3));
    }

    #[test]
    fn undeclared_reference() {
        let e = parse_qcir("#QCIR-G14\nexists(a)\noutput(g)\ng = and(a, z)\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 4, .. }));
        assert!(parse_qcir("exists(a)\n").is_err());
    }
}
