use crate::oracle::SuiteReport;

use super::{split_key, DocKind, FormatError, Reader};

/// A named group of `key: value` lines inside a verdict.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Section {
    pub name: String,
    pub fields: Vec<(String, String)>,
}

impl Section {
    pub fn new(name: impl Into<String>) -> Self {
        Section {
            name: name.into(),
            fields: Vec::new(),
        }
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl Into<String>) -> &mut Self {
        self.fields.push((key.into(), value.into()));
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.fields
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }
}

/// Answer of a command plus supporting evidence.
///
/// Top-level fields follow the `answer:` line; evidence such as witnesses,
/// certificates and counterexamples lives in `section <name>` ... `end`
/// blocks.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VerdictDocument {
    pub answer: bool,
    pub fields: Vec<(String, String)>,
    pub sections: Vec<Section>,
}

impl VerdictDocument {
    pub fn new(answer: bool) -> Self {
        VerdictDocument {
            answer,
            ..Self::default()
        }
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl Into<String>) -> &mut Self {
        self.fields.push((key.into(), value.into()));
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.fields
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn section(&self, name: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.name == name)
    }
}

fn field_line(k: &str, v: &str) -> String {
    if v.is_empty() {
        format!("{k}:")
    } else {
        format!("{k}: {v}")
    }
}

fn read_fields(
    r: &mut Reader<'_>,
    stop: &dyn Fn(&str) -> bool,
) -> Result<Vec<(String, String)>, FormatError> {
    let mut fields = Vec::new();
    while let Some(line) = r.peek() {
        if stop(line) {
            break;
        }
        match split_key(line) {
            Some((k, v)) if !k.is_empty() => fields.push((k.to_string(), v.to_string())),
            _ => return r.error(format!("expected `key: value`, found `{line}`")),
        }
        r.next();
    }
    Ok(fields)
}

pub fn parse_verdict(text: &str) -> Result<VerdictDocument, FormatError> {
    let mut r = Reader::open(text, DocKind::Verdict)?;
    let answer = match r.field("answer")? {
        "YES" => true,
        "NO" => false,
        other => return r.error(format!("answer `{other}` is not YES or NO")),
    };
    let fields = read_fields(&mut r, &|l| l.starts_with("section "))?;
    let mut sections = Vec::new();
    while let Some(line) = r.next() {
        let Some(name) = line.strip_prefix("section ") else {
            return r.error(format!("expected a section, found `{line}`"));
        };
        let fields = read_fields(&mut r, &|l| l == "end")?;
        if r.next() != Some("end") {
            return r.error(format!("section `{name}` is missing `end`"));
        }
        sections.push(Section {
            name: name.trim().to_string(),
            fields,
        });
    }
    Ok(VerdictDocument {
        answer,
        fields,
        sections,
    })
}

pub fn serialize_verdict(doc: &VerdictDocument) -> String {
    let mut out = vec![
        DocKind::Verdict.header(),
        format!("answer: {}", if doc.answer { "YES" } else { "NO" }),
    ];
    out.extend(doc.fields.iter().map(|(k, v)| field_line(k, v)));
    for s in &doc.sections {
        out.push(format!("section {}", s.name));
        out.extend(s.fields.iter().map(|(k, v)| field_line(k, v)));
        out.push("end".into());
    }
    out.join("\n") + "\n"
}

pub fn parse_report(text: &str) -> Result<SuiteReport, FormatError> {
    let mut r = Reader::open(text, DocKind::Report)?;
    let status = r.field("status")?;
    if status != "PASS" && status != "FAIL" {
        return r.error(format!("status `{status}` is not PASS or FAIL"));
    }
    let seed_line = r.line_no();
    let seed = r.field("seed")?.parse().map_err(|_| FormatError::Syntax {
        line: seed_line,
        message: "seed is not a number".into(),
    })?;
    let mut report = SuiteReport {
        seed,
        count: r.number("count")?,
        realize_checks: r.number("realize-checks")?,
        realize_mismatches: r.number("realize-mismatches")?,
        witness_checks: r.number("witness-checks")?,
        witness_failures: r.number("witness-failures")?,
        deviation_checks: r.number("deviation-checks")?,
        deviation_mismatches: r.number("deviation-mismatches")?,
        first_failure: None,
    };
    let failure = r.field("first-failure")?;
    if failure != "none" {
        report.first_failure = Some(failure.to_string());
    }
    r.expect_end()?;
    if (status == "PASS") != report.passed() {
        return Err(FormatError::Syntax {
            line: 2,
            message: "status disagrees with the tallies".into(),
        });
    }
    Ok(report)
}

pub fn serialize_report(r: &SuiteReport) -> String {
    let lines = [
        DocKind::Report.header(),
        format!("status: {}", if r.passed() { "PASS" } else { "FAIL" }),
        format!("seed: {}", r.seed),
        format!("count: {}", r.count),
        format!("realize-checks: {}", r.realize_checks),
        format!("realize-mismatches: {}", r.realize_mismatches),
        format!("witness-checks: {}", r.witness_checks),
        format!("witness-failures: {}", r.witness_failures),
        format!("deviation-checks: {}", r.deviation_checks),
        format!("deviation-mismatches: {}", r.deviation_mismatches),
        format!(
            "first-failure: {}",
            r.first_failure.as_deref().unwrap_or("none")
        ),
    ];
    lines.join("\n") + "\n"
}
