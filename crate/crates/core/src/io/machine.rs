use crate::gadgets::{AltTM, DetTM, Dir, Label, Move};

use super::{list_line, DocKind, FormatError, Reader};

/// Index of `name` in `names`, or a syntax error at `line`.
fn find(names: &[String], name: &str, what: &str, line: usize) -> Result<usize, FormatError> {
    names
        .iter()
        .position(|n| n == name)
        .ok_or_else(|| FormatError::Syntax {
            line,
            message: format!("unknown {what} `{name}`"),
        })
}

struct Header {
    states: Vec<String>,
    symbols: Vec<String>,
    init: usize,
}

fn read_header(r: &mut Reader<'_>) -> Result<Header, FormatError> {
    let states = r.ident_list("states")?;
    let symbols = r.ident_list("symbols")?;
    let line = r.line_no();
    let init = find(&states, r.field("init")?, "state", line)?;
    Ok(Header {
        states,
        symbols,
        init,
    })
}

/// Reads `delta: r s -> r' s' L|R` lines up to the end of the document.
fn read_delta(r: &mut Reader<'_>, h: &Header) -> Result<Vec<(usize, usize, Move)>, FormatError> {
    let mut delta = Vec::new();
    while !r.at_end() {
        let line = r.line_no();
        let body = r.field("delta")?;
        let parts: Vec<&str> = body.split_whitespace().collect();
        let [r0, s0, "->", r1, s1, d] = parts.as_slice() else {
            return Err(FormatError::Syntax {
                line,
                message: "transition must read `delta: r s -> r' s' L|R`".into(),
            });
        };
        let dir = Dir::from_letter(d).ok_or_else(|| FormatError::Syntax {
            line,
            message: format!("direction `{d}` is not L or R"),
        })?;
        delta.push((
            find(&h.states, r0, "state", line)?,
            find(&h.symbols, s0, "symbol", line)?,
            Move::new(
                find(&h.states, r1, "state", line)?,
                find(&h.symbols, s1, "symbol", line)?,
                dir,
            ),
        ));
    }
    Ok(delta)
}

fn header_lines(kind: DocKind, states: &[String], symbols: &[String], init: usize) -> Vec<String> {
    vec![
        kind.header(),
        list_line("states", states),
        list_line("symbols", symbols),
        format!("init: {}", states[init]),
    ]
}

fn delta_line(states: &[String], symbols: &[String], (r, s, m): (usize, usize, Move)) -> String {
    format!(
        "delta: {} {} -> {} {} {}",
        states[r],
        symbols[s],
        states[m.state],
        symbols[m.symbol],
        m.dir.letter()
    )
}

/// Parses a deterministic machine; the first symbol is the blank.
pub fn parse_dtm(text: &str) -> Result<DetTM, FormatError> {
    let mut r = Reader::open(text, DocKind::Dtm)?;
    let h = read_header(&mut r)?;
    let line = r.line_no();
    let accepting = r
        .ident_list("accepting")?
        .iter()
        .map(|a| find(&h.states, a, "state", line))
        .collect::<Result<Vec<_>, _>>()?;
    let delta = read_delta(&mut r, &h)?;
    Ok(DetTM::new(h.states, h.symbols, h.init, &accepting, &delta)?)
}

pub fn serialize_dtm(m: &DetTM) -> String {
    let mut out = header_lines(DocKind::Dtm, m.states(), m.symbols(), m.init());
    let acc: Vec<String> = m
        .accepting_states()
        .into_iter()
        .map(|r| m.states()[r].clone())
        .collect();
    out.push(list_line("accepting", &acc));
    out.extend(
        m.transitions()
            .into_iter()
            .map(|t| delta_line(m.states(), m.symbols(), t)),
    );
    out.join("\n") + "\n"
}

/// Parses an alternating machine. Every state carries a label line
/// `label r: accept|reject|or|and|det`.
pub fn parse_atm(text: &str) -> Result<AltTM, FormatError> {
    let mut r = Reader::open(text, DocKind::Atm)?;
    let h = read_header(&mut r)?;
    let mut labels = Vec::with_capacity(h.states.len());
    for s in &h.states {
        let line = r.line_no();
        let v = r.field(&format!("label {s}"))?;
        labels.push(Label::from_keyword(v).ok_or_else(|| FormatError::Syntax {
            line,
            message: format!("`{v}` is not a state label"),
        })?);
    }
    let delta = read_delta(&mut r, &h)?;
    Ok(AltTM::new(h.states, h.symbols, h.init, labels, &delta)?)
}

pub fn serialize_atm(m: &AltTM) -> String {
    let mut out = header_lines(DocKind::Atm, m.states(), m.symbols(), m.init());
    for (i, s) in m.states().iter().enumerate() {
        out.push(format!("label {s}: {}", m.label(i).keyword()));
    }
    out.extend(
        m.transitions()
            .into_iter()
            .map(|t| delta_line(m.states(), m.symbols(), t)),
    );
    out.join("\n") + "\n"
}
