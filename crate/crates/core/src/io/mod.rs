//! Line-oriented text formats for every artifact the tool reads or writes.
//!
//! Each document starts with a `<kind> v1` header. Blank lines and lines
//! starting with `#` are ignored when parsing; serializers emit a canonical
//! form (fixed section order, single spaces, no comments) so that parsing a
//! serialized document and serializing it again is the identity.

mod game;
mod machine;
mod netlist;
mod system;
mod transducer;
mod verdict;

use std::fmt;

use thiserror::Error;

use crate::circuit::CircuitError;
use crate::gadgets::GadgetError;
use crate::game::GameError;
use crate::model::ModelError;

pub use game::{parse_game, serialize_game};
pub use machine::{parse_atm, parse_dtm, serialize_atm, serialize_dtm};
pub use netlist::{parse_netlist, serialize_netlist};
pub use system::{parse_cmas, parse_emas, serialize_cmas, serialize_emas};
pub use transducer::{parse_ctrans, parse_etrans, serialize_ctrans, serialize_etrans};
pub use verdict::{
    parse_report, parse_verdict, serialize_report, serialize_verdict, Section, VerdictDocument,
};

/// Characters that may not appear in identifiers.
pub const RESERVED_CHARS: &[char] = &[',', ':', '#', '@', ';', '='];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DocKind {
    Emas,
    Cmas,
    Etrans,
    Ctrans,
    Game,
    Dtm,
    Atm,
    Verdict,
    Report,
}

impl DocKind {
    pub const ALL: [DocKind; 9] = [
        DocKind::Emas,
        DocKind::Cmas,
        DocKind::Etrans,
        DocKind::Ctrans,
        DocKind::Game,
        DocKind::Dtm,
        DocKind::Atm,
        DocKind::Verdict,
        DocKind::Report,
    ];

    pub fn keyword(self) -> &'static str {
        match self {
            DocKind::Emas => "emas",
            DocKind::Cmas => "cmas",
            DocKind::Etrans => "etrans",
            DocKind::Ctrans => "ctrans",
            DocKind::Game => "game",
            DocKind::Dtm => "dtm",
            DocKind::Atm => "atm",
            DocKind::Verdict => "verdict",
            DocKind::Report => "report",
        }
    }

    pub fn header(self) -> String {
        format!("{} v1", self.keyword())
    }
}

impl fmt::Display for DocKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

fn join_errors<E: fmt::Display>(errors: &[E]) -> String {
    errors
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("expected header `{expected}`, found `{found}`")]
    Header { expected: String, found: String },
    #[error("unrecognized document header `{0}`")]
    UnknownKind(String),
    #[error("invalid system: {}", join_errors(.0))]
    Model(Vec<ModelError>),
    #[error("invalid circuit: {}", join_errors(.0))]
    Circuit(Vec<CircuitError>),
    #[error("invalid game: {}", join_errors(.0))]
    Game(Vec<GameError>),
    #[error("invalid machine: {0}")]
    Machine(#[from] GadgetError),
}

impl FormatError {
    /// The model errors carried by this error, if any.
    pub fn model_errors(&self) -> &[ModelError] {
        match self {
            FormatError::Model(e) => e,
            _ => &[],
        }
    }
}

/// Kind named by the first meaningful line of `text`.
pub fn detect_kind(text: &str) -> Result<DocKind, FormatError> {
    let first = content_lines(text).next().map(|(_, l)| l).unwrap_or("");
    DocKind::ALL
        .into_iter()
        .find(|k| first == k.header())
        .ok_or_else(|| FormatError::UnknownKind(first.to_string()))
}

pub(crate) fn check_ident(name: &str, line: usize) -> Result<(), FormatError> {
    if name.is_empty()
        || name
            .chars()
            .any(|c| c.is_whitespace() || RESERVED_CHARS.contains(&c))
    {
        return Err(FormatError::Syntax {
            line,
            message: format!("`{name}` is not a valid identifier"),
        });
    }
    Ok(())
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

/// Cursor over the meaningful lines of a document.
pub(crate) struct Reader<'a> {
    lines: Vec<(usize, &'a str)>,
    pos: usize,
}

impl<'a> Reader<'a> {
    /// Starts reading after checking the header line.
    pub fn open(text: &'a str, kind: DocKind) -> Result<Self, FormatError> {
        let mut r = Reader {
            lines: content_lines(text).collect(),
            pos: 0,
        };
        let found = r.lines.first().map(|&(_, l)| l).unwrap_or("");
        if found != kind.header() {
            return Err(FormatError::Header {
                expected: kind.header(),
                found: found.to_string(),
            });
        }
        r.pos = 1;
        Ok(r)
    }

    /// Reads a netlist or other headerless fragment.
    pub fn fragment(text: &'a str) -> Self {
        Reader {
            lines: content_lines(text).collect(),
            pos: 0,
        }
    }

    pub fn line_no(&self) -> usize {
        self.lines
            .get(self.pos)
            .or(self.lines.last())
            .map_or(0, |&(n, _)| n)
    }

    pub fn error<T>(&self, message: impl Into<String>) -> Result<T, FormatError> {
        Err(FormatError::Syntax {
            line: self.line_no(),
            message: message.into(),
        })
    }

    pub fn peek(&self) -> Option<&'a str> {
        self.lines.get(self.pos).map(|&(_, l)| l)
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.lines.len()
    }

    pub fn next(&mut self) -> Option<&'a str> {
        let l = self.peek()?;
        self.pos += 1;
        Some(l)
    }

    /// Whether the next line is `key: ...` (or `key ...` when `key` ends in a space).
    pub fn peek_key(&self, key: &str) -> bool {
        self.peek()
            .is_some_and(|l| split_key(l).is_some_and(|(k, _)| k == key))
    }

    /// Consumes `key: value` and returns the trimmed value.
    pub fn field(&mut self, key: &str) -> Result<&'a str, FormatError> {
        match self.peek().and_then(split_key) {
            Some((k, v)) if k == key => {
                self.pos += 1;
                Ok(v)
            }
            _ => self.error(format!("expected `{key}:`")),
        }
    }

    /// Consumes a `key: value` line whose value is a list of identifiers.
    pub fn ident_list(&mut self, key: &str) -> Result<Vec<String>, FormatError> {
        let line = self.line_no();
        let v = self.field(key)?;
        words(v, line)
    }

    pub fn number(&mut self, key: &str) -> Result<usize, FormatError> {
        let v = self.field(key)?;
        v.parse()
            .or_else(|_| self.error(format!("`{v}` is not a number")))
    }

    pub fn expect_end(&self) -> Result<(), FormatError> {
        match self.peek() {
            None => Ok(()),
            Some(l) => self.error(format!("unexpected line `{l}`")),
        }
    }
}

/// Splits `key: value` at the first colon.
pub(crate) fn split_key(line: &str) -> Option<(&str, &str)> {
    let (k, v) = line.split_once(':')?;
    Some((k.trim(), v.trim()))
}

/// Whitespace-separated identifiers.
pub(crate) fn words(text: &str, line: usize) -> Result<Vec<String>, FormatError> {
    text.split_whitespace()
        .map(|w| check_ident(w, line).map(|_| w.to_string()))
        .collect()
}

/// `key: a b c` with single spaces; `key:` when the list is empty.
pub(crate) fn list_line(key: &str, items: &[String]) -> String {
    if items.is_empty() {
        format!("{key}:")
    } else {
        format!("{key}: {}", items.join(" "))
    }
}
