use crate::circuit::{Circuit, Gate, Ref};

use super::{FormatError, Reader};

fn parse_ref(r: &Reader<'_>, token: &str) -> Result<Ref, FormatError> {
    let index = |s: &str| s.parse::<usize>().ok();
    match token.split_at_checked(1) {
        Some(("i", n)) if index(n).is_some() => Ok(Ref::Input(index(n).unwrap())),
        Some(("g", n)) if index(n).is_some() => Ok(Ref::Gate(index(n).unwrap())),
        _ => r.error(format!(
            "`{token}` is not a reference (expected i<n> or g<n>)"
        )),
    }
}

/// Reads `inputs:`, gate lines and `outputs:` from the reader.
pub(crate) fn read_netlist(r: &mut Reader<'_>) -> Result<Circuit, FormatError> {
    let inputs = r.number("inputs")?;
    let mut gates = Vec::new();
    while let Some(line) = r.peek() {
        if r.peek_key("outputs") {
            break;
        }
        let Some((lhs, rhs)) = line.split_once('=') else {
            return r.error(format!("expected a gate definition, found `{line}`"));
        };
        if lhs.trim() != format!("g{}", gates.len()) {
            return r.error(format!("expected gate g{} to be defined next", gates.len()));
        }
        let parts: Vec<&str> = rhs.split_whitespace().collect();
        let gate = match parts.as_slice() {
            ["CONST0"] => Gate::Const0,
            ["CONST1"] => Gate::Const1,
            ["NOT", a] => Gate::Not(parse_ref(r, a)?),
            ["AND", a, b] => Gate::And(parse_ref(r, a)?, parse_ref(r, b)?),
            ["OR", a, b] => Gate::Or(parse_ref(r, a)?, parse_ref(r, b)?),
            _ => return r.error(format!("malformed gate `{}`", rhs.trim())),
        };
        gates.push(gate);
        r.next();
    }
    let outs = r.field("outputs")?;
    let outputs = outs
        .split_whitespace()
        .map(|t| parse_ref(r, t))
        .collect::<Result<Vec<_>, _>>()?;
    Circuit::new(inputs, gates, outputs).map_err(FormatError::Circuit)
}

/// Parses a standalone netlist.
pub fn parse_netlist(text: &str) -> Result<Circuit, FormatError> {
    let mut r = Reader::fragment(text);
    let c = read_netlist(&mut r)?;
    r.expect_end()?;
    Ok(c)
}

pub fn serialize_netlist(c: &Circuit) -> String {
    let mut out = format!("inputs: {}\n", c.input_arity());
    for (i, g) in c.gates().iter().enumerate() {
        let body = match g {
            Gate::Const0 => "CONST0".to_string(),
            Gate::Const1 => "CONST1".to_string(),
            Gate::Not(a) => format!("NOT {a}"),
            Gate::And(a, b) => format!("AND {a} {b}"),
            Gate::Or(a, b) => format!("OR {a} {b}"),
        };
        out.push_str(&format!("g{i} = {body}\n"));
    }
    let outs: Vec<String> = c.outputs().iter().map(ToString::to_string).collect();
    out.push_str(&format!("outputs: {}\n", outs.join(" ")));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::CircuitError;

    #[test]
    fn roundtrip() {
        let text =
            "inputs: 2\ng0 = AND i0 i1\ng1 = NOT g0\ng2 = CONST1\ng3 = OR g1 g2\noutputs: g3 i0\n";
        let c = parse_netlist(text).unwrap();
        assert_eq!(c.eval(&[true, true]).unwrap(), vec![true, true]);
        assert_eq!(serialize_netlist(&c), text);
    }

    #[test]
    fn forward_reference() {
        let err =
            parse_netlist("inputs: 1\ng0 = AND g1 i0\ng1 = NOT i0\noutputs: g0\n").unwrap_err();
        assert_eq!(err, FormatError::Circuit(vec![CircuitError::ForwardRef(0)]));
    }

    #[test]
    fn syntax_errors_carry_lines() {
        let err = parse_netlist("inputs: 1\ng0 = XOR i0 i0\noutputs: g0\n").unwrap_err();
        assert!(matches!(err, FormatError::Syntax { line: 2, .. }));
        let err = parse_netlist("inputs: 1\ng1 = NOT i0\noutputs: g1\n").unwrap_err();
        assert!(matches!(err, FormatError::Syntax { line: 2, .. }));
    }
}
