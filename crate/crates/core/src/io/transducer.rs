use std::collections::HashMap;

use crate::circuit::bits_to_string;
use crate::model::{CircuitTransducer, ExplicitSystem, ExplicitTransducer, ModelError};

use super::system::{read_bits, read_block, write_block};
use super::{list_line, words, DocKind, FormatError, Reader};

fn read_agent(r: &mut Reader<'_>) -> Result<usize, FormatError> {
    r.number("agent")
}

/// Parses an explicit transducer for one agent of `sys`. Inputs are named
/// by `sys` states and outputs by the agent's actions. Returns the agent
/// index and the transducer.
pub fn parse_etrans(
    text: &str,
    sys: &ExplicitSystem,
) -> Result<(usize, ExplicitTransducer), FormatError> {
    let mut r = Reader::open(text, DocKind::Etrans)?;
    let agent_line = r.line_no();
    let agent = read_agent(&mut r)?;
    if agent >= sys.agent_count() {
        return Err(FormatError::Syntax {
            line: agent_line,
            message: format!("system has no agent {agent}"),
        });
    }
    let states = r.ident_list("states")?;
    let index: HashMap<&str, usize> = states
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_str(), i))
        .collect();
    let lookup = |name: &str, line: usize| match index.get(name) {
        Some(&i) => Ok(i),
        None => Err(FormatError::Syntax {
            line,
            message: format!("unknown transducer state `{name}`"),
        }),
    };
    let init_line = r.line_no();
    let init = lookup(r.field("init")?, init_line)?;
    let mut output = Vec::with_capacity(states.len());
    for s in &states {
        let a = r.field(&format!("output {s}"))?;
        match sys.action_id(agent, a) {
            Some(a) => output.push(a),
            None => return r.error(format!("agent {agent} has no action `{a}`")),
        }
    }
    let inputs = sys.state_count();
    let mut trans: Vec<Option<usize>> = vec![None; states.len() * inputs];
    while !r.at_end() {
        let line = r.line_no();
        let body = r.field("trans")?;
        let parts: Vec<String> = words(&body.replace("->", " -> "), line)?;
        let [s, v, arrow, t] = parts.as_slice() else {
            return Err(FormatError::Syntax {
                line,
                message: "transition must read `trans: q v -> q'`".into(),
            });
        };
        if arrow != "->" {
            return Err(FormatError::Syntax {
                line,
                message: "transition needs `->`".into(),
            });
        }
        let s = lookup(s, line)?;
        let t = lookup(t, line)?;
        let Some(v) = sys.state_id(v) else {
            return Err(FormatError::Model(vec![ModelError::UnknownState(
                v.clone(),
            )]));
        };
        if trans[s * inputs + v].replace(t).is_some() {
            return Err(FormatError::Syntax {
                line,
                message: format!(
                    "duplicate transition for `{}` on `{}`",
                    states[s],
                    sys.state_name(v)
                ),
            });
        }
    }
    if let Some(missing) = trans.iter().position(Option::is_none) {
        return r.error(format!(
            "no transition for `{}` on `{}`",
            states[missing / inputs],
            sys.state_name(missing % inputs)
        ));
    }
    let trans = trans
        .into_iter()
        .map(|t| t.expect("checked above"))
        .collect();
    let t =
        ExplicitTransducer::new(states, init, inputs, trans, output).map_err(FormatError::Model)?;
    Ok((agent, t))
}

pub fn serialize_etrans(t: &ExplicitTransducer, sys: &ExplicitSystem, agent: usize) -> String {
    let names = t.state_names();
    let mut out = vec![
        DocKind::Etrans.header(),
        format!("agent: {agent}"),
        list_line("states", names),
        format!("init: {}", names[t.init()]),
    ];
    for (s, name) in names.iter().enumerate() {
        out.push(format!(
            "output {name}: {}",
            sys.action_name(agent, t.output_of(s))
        ));
    }
    for (s, name) in names.iter().enumerate() {
        for v in 0..t.input_count() {
            out.push(format!(
                "trans: {name} {} -> {}",
                sys.state_name(v),
                names[t.successor(s, v)]
            ));
        }
    }
    out.join("\n") + "\n"
}

/// Parses a circuit transducer; returns the agent index and the transducer.
pub fn parse_ctrans(text: &str) -> Result<(usize, CircuitTransducer), FormatError> {
    let mut r = Reader::open(text, DocKind::Ctrans)?;
    let agent = read_agent(&mut r)?;
    let state_vars = r.number("state-vars")?;
    let init = read_bits(&mut r, "init")?;
    let omega = read_block(&mut r, "omega")?;
    let output = read_block(&mut r, "output")?;
    r.expect_end()?;
    let t = CircuitTransducer::new(state_vars, init, omega, output).map_err(FormatError::Model)?;
    Ok((agent, t))
}

pub fn serialize_ctrans(t: &CircuitTransducer, agent: usize) -> String {
    let mut out = format!(
        "{}\nagent: {agent}\nstate-vars: {}\ninit: {}\n",
        DocKind::Ctrans.header(),
        t.state_vars(),
        bits_to_string(t.init_bits())
    );
    write_block(&mut out, "omega", t.omega());
    write_block(&mut out, "output", t.output_circuit());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Circuit;
    use crate::testutil::{constant_profile, sys1};

    #[test]
    fn etrans_roundtrip() {
        let s = sys1();
        let t = ExplicitTransducer::new(
            vec!["q0".into(), "q1".into()],
            0,
            3,
            vec![1, 1, 1, 0, 0, 0],
            vec![1, 0],
        )
        .unwrap();
        let text = serialize_etrans(&t, &s, 1);
        assert!(text.contains("output q0: y\n"));
        let (agent, back) = parse_etrans(&text, &s).unwrap();
        assert_eq!((agent, &back), (1, &t));
        assert_eq!(serialize_etrans(&back, &s, 1), text);
    }

    #[test]
    fn etrans_errors() {
        let s = sys1();
        let t = &constant_profile(&s, 0, 0)[0];
        let text = serialize_etrans(t, &s, 0);
        let cut = text.replace("trans: q0 s1 -> q0\n", "");
        assert!(matches!(
            parse_etrans(&cut, &s),
            Err(FormatError::Syntax { .. })
        ));
        let wrong = text.replace("agent: 0", "agent: 4");
        assert!(matches!(
            parse_etrans(&wrong, &s),
            Err(FormatError::Syntax { line: 2, .. })
        ));
    }

    #[test]
    fn ctrans_roundtrip() {
        let t = CircuitTransducer::new(
            1,
            vec![true],
            Circuit::projection(3, [1]),
            Circuit::projection(1, [0]),
        )
        .unwrap();
        let text = serialize_ctrans(&t, 0);
        let (agent, back) = parse_ctrans(&text).unwrap();
        assert_eq!((agent, &back), (0, &t));
        assert_eq!(serialize_ctrans(&back, 0), text);
    }
}
