use crate::circuit::{bits_to_string, parse_bits, Circuit};
use crate::model::{CircuitSystem, ExplicitSystem, SystemDescription, TransitionRow};

use super::netlist::{read_netlist, serialize_netlist};
use super::{list_line, words, DocKind, FormatError, Reader};

pub fn parse_emas(text: &str) -> Result<ExplicitSystem, FormatError> {
    let mut r = Reader::open(text, DocKind::Emas)?;
    let states = r.ident_list("states")?;
    let init_line = r.line_no();
    let init = words(r.field("init")?, init_line)?;
    let [init] = <[String; 1]>::try_from(init).map_err(|_| FormatError::Syntax {
        line: init_line,
        message: "`init:` takes exactly one state".into(),
    })?;
    let k = r.number("agents")?;
    let mut actions = Vec::with_capacity(k);
    for i in 0..k {
        actions.push(r.ident_list(&format!("actions {i}"))?);
    }
    let mut goals = Vec::with_capacity(k);
    for i in 0..k {
        goals.push(r.ident_list(&format!("goal {i}"))?);
    }
    let mut rows = Vec::new();
    while !r.at_end() {
        let line = r.line_no();
        let body = r.field("trans")?;
        let Some((lhs, target)) = body.split_once("->") else {
            return Err(FormatError::Syntax {
                line,
                message: "transition needs `->`".into(),
            });
        };
        let mut lhs = words(lhs, line)?;
        let target = words(target, line)?;
        if lhs.len() != k + 1 || target.len() != 1 {
            return Err(FormatError::Syntax {
                line,
                message: format!("transition needs a state, {k} actions and one target"),
            });
        }
        let state = lhs.remove(0);
        rows.push(TransitionRow {
            state,
            decision: lhs,
            target: target.into_iter().next().expect("one target"),
        });
    }
    SystemDescription {
        states,
        init,
        actions,
        goals,
        rows,
    }
    .build()
    .map_err(FormatError::Model)
}

pub fn serialize_emas(sys: &ExplicitSystem) -> String {
    let d = sys.describe();
    let mut out = vec![
        DocKind::Emas.header(),
        list_line("states", &d.states),
        format!("init: {}", d.init),
        format!("agents: {}", d.actions.len()),
    ];
    for (i, a) in d.actions.iter().enumerate() {
        out.push(list_line(&format!("actions {i}"), a));
    }
    for (i, g) in d.goals.iter().enumerate() {
        out.push(list_line(&format!("goal {i}"), g));
    }
    for row in &d.rows {
        out.push(format!(
            "trans: {} {} -> {}",
            row.state,
            row.decision.join(" "),
            row.target
        ));
    }
    out.join("\n") + "\n"
}

pub(crate) fn read_block(r: &mut Reader<'_>, name: &str) -> Result<Circuit, FormatError> {
    let header = format!("circuit {name}");
    if r.peek() != Some(header.as_str()) {
        return r.error(format!("expected `{header}`"));
    }
    r.next();
    let c = read_netlist(r)?;
    if r.peek() != Some("end") {
        return r.error("expected `end`");
    }
    r.next();
    Ok(c)
}

pub(crate) fn write_block(out: &mut String, name: &str, c: &Circuit) {
    out.push_str(&format!("circuit {name}\n"));
    out.push_str(&serialize_netlist(c));
    out.push_str("end\n");
}

pub(crate) fn read_bits(r: &mut Reader<'_>, key: &str) -> Result<Vec<bool>, FormatError> {
    let line = r.line_no();
    let v = r.field(key)?;
    parse_bits(v).ok_or_else(|| FormatError::Syntax {
        line,
        message: format!("`{v}` is not a bit string"),
    })
}

pub fn parse_cmas(text: &str) -> Result<CircuitSystem, FormatError> {
    let mut r = Reader::open(text, DocKind::Cmas)?;
    let state_vars = r.number("state-vars")?;
    let init = read_bits(&mut r, "init")?;
    let k = r.number("agents")?;
    let vars = r.field("action-vars")?;
    let action_vars = vars
        .split_whitespace()
        .map(|v| v.parse::<usize>())
        .collect::<Result<Vec<_>, _>>()
        .or_else(|_| r.error("`action-vars:` takes numbers"))?;
    if action_vars.len() != k {
        return r.error(format!("expected {k} action variable counts"));
    }
    let goals = (0..k)
        .map(|i| read_block(&mut r, &format!("goal {i}")))
        .collect::<Result<Vec<_>, _>>()?;
    let phi = read_block(&mut r, "phi")?;
    r.expect_end()?;
    CircuitSystem::new(state_vars, init, action_vars, goals, phi).map_err(FormatError::Model)
}

pub fn serialize_cmas(sys: &CircuitSystem) -> String {
    let vars: Vec<String> = sys.action_vars().iter().map(ToString::to_string).collect();
    let mut out = format!(
        "{}\nstate-vars: {}\ninit: {}\nagents: {}\naction-vars: {}\n",
        DocKind::Cmas.header(),
        sys.state_vars(),
        bits_to_string(sys.init()),
        vars.len(),
        vars.join(" ")
    );
    for (i, g) in sys.goal_circuits().iter().enumerate() {
        write_block(&mut out, &format!("goal {i}"), g);
    }
    write_block(&mut out, "phi", sys.phi());
    out
}
