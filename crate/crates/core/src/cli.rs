//! Command-line surface. [`dispatch`] turns an argument vector into an exit
//! code and the text for standard output and standard error, so the binary
//! stays a thin wrapper and every command is testable in-process.
//!
//! Exit codes: 0 when the answer is YES or the checked property holds, 1 when
//! it is NO or fails, 2 for usage and input errors.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use thiserror::Error;

use crate::gadgets::{
    atm_to_circuit_system, dtm_to_one_agent_circuit, dtm_to_turnbased, game_to_system, GadgetError,
};
use crate::game::{solve, GameError, Player};
use crate::io::{
    detect_kind, parse_atm, parse_cmas, parse_ctrans, parse_dtm, parse_emas, parse_etrans,
    parse_game, parse_report, parse_verdict, serialize_cmas, serialize_ctrans, serialize_emas,
    serialize_etrans, serialize_report, serialize_verdict, DocKind, FormatError, Section,
    VerdictDocument,
};
use crate::model::{
    unfold, AgentSet, CircuitTransducer, ExplicitSystem, ExplicitTransducer, ModelError,
    StrategyProfile, DEFAULT_ROW_CAP,
};
use crate::oracle::consistency_suite;
use crate::realize::{realize_circuit, realize_explicit, RealizabilityVerdict, RealizeError};
use crate::verify::{verify, Counterexample, SystemRef, Verdict, VerifyError};

#[derive(Debug, Parser)]
#[command(
    name = "wnash",
    version,
    about = "Nash equilibria with prescribed winners in multi-agent reachability systems"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check that a document parses and satisfies its invariants.
    Validate {
        file: PathBuf,
        /// System that an explicit transducer refers to.
        #[arg(long)]
        system: Option<PathBuf>,
    },
    /// Expand a circuit system into an explicit one.
    Unfold {
        file: PathBuf,
        /// Largest transition table to build.
        #[arg(long, default_value_t = DEFAULT_ROW_CAP)]
        cap: u128,
    },
    /// Solve a two-player reachability game from its initial state.
    SolveGame { file: PathBuf },
    /// Decide whether some profile is an equilibrium where exactly the coalition wins.
    Realize {
        file: PathBuf,
        /// Comma-separated agent indices, or `none`.
        #[arg(long, value_parser = parse_coalition)]
        coalition: AgentSet,
        /// Include the witness lasso and certificate.
        #[arg(long)]
        witness: bool,
        /// Largest transition table to build for circuit systems.
        #[arg(long, default_value_t = DEFAULT_ROW_CAP)]
        cap: u128,
    },
    /// Check whether a given profile is an equilibrium where exactly the coalition wins.
    Verify {
        file: PathBuf,
        /// One transducer file per agent, in any order.
        #[arg(long, num_args = 1.., required = true)]
        profile: Vec<PathBuf>,
        #[arg(long, value_parser = parse_coalition)]
        coalition: AgentSet,
    },
    /// Build systems from games and Turing machines.
    Gen {
        #[command(subcommand)]
        gadget: Gen,
    },
    /// Cross-check the engines against brute-force references on random systems.
    Oracle {
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        count: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum Gen {
    /// Game to two-agent system; an equilibrium where nobody wins exists iff the avoider wins.
    Game { game: PathBuf },
    /// Alternating machine to circuit system; an equilibrium where nobody wins exists iff the machine rejects.
    Atm {
        machine: PathBuf,
        #[arg(long)]
        cells: usize,
    },
    /// Deterministic machine to turn-based system plus profile, written to a directory.
    TurnBased {
        machine: PathBuf,
        #[arg(long)]
        cells: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Deterministic machine to one-agent circuit system plus strategy, written to a directory.
    OneAgent {
        machine: PathBuf,
        #[arg(long)]
        cells: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

fn parse_coalition(text: &str) -> Result<AgentSet, String> {
    AgentSet::parse_list(text)
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Format { path: String, source: FormatError },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Realize(#[from] RealizeError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
    #[error(transparent)]
    Gadget(#[from] GadgetError),
    #[error(transparent)]
    Game(#[from] GameError),
}

/// Result of running one command.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn answer(yes: bool, stdout: String) -> Self {
        Outcome {
            code: if yes { 0 } else { 1 },
            stdout,
            stderr: String::new(),
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn dispatch<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    run(cli.command).unwrap_or_else(|e| Outcome {
        code: 2,
        stdout: String::new(),
        stderr: format!("error: {e}\n"),
    })
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.display().to_string(),
        source,
    })
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Write {
        path: path.display().to_string(),
        source,
    })
}

fn parsed<T>(path: &Path, r: Result<T, FormatError>) -> Result<T, CliError> {
    r.map_err(|source| CliError::Format {
        path: path.display().to_string(),
        source,
    })
}

/// A system file of either representation.
enum LoadedSystem {
    Explicit(ExplicitSystem),
    Circuit(crate::model::CircuitSystem),
}

fn load_system(path: &Path) -> Result<LoadedSystem, CliError> {
    let text = read(path)?;
    match parsed(path, detect_kind(&text))? {
        DocKind::Emas => Ok(LoadedSystem::Explicit(parsed(path, parse_emas(&text))?)),
        DocKind::Cmas => Ok(LoadedSystem::Circuit(parsed(path, parse_cmas(&text))?)),
        other => Err(CliError::Usage(format!(
            "{}: expected a system document, found `{other}`",
            path.display()
        ))),
    }
}

fn run(command: Command) -> Result<Outcome, CliError> {
    match command {
        Command::Validate { file, system } => validate(&file, system.as_deref()),
        Command::Unfold { file, cap } => {
            let text = read(&file)?;
            let csys = parsed(&file, parse_cmas(&text))?;
            Ok(Outcome::answer(true, serialize_emas(&unfold(&csys, cap)?)))
        }
        Command::SolveGame { file } => solve_game(&file),
        Command::Realize {
            file,
            coalition,
            witness,
            cap,
        } => realize(&file, coalition, witness, cap),
        Command::Verify {
            file,
            profile,
            coalition,
        } => verify_profile(&file, &profile, coalition),
        Command::Gen { gadget } => generate(gadget),
        Command::Oracle { seed, count } => {
            let report = consistency_suite(seed, count);
            Ok(Outcome::answer(report.passed(), serialize_report(&report)))
        }
    }
}

fn validate(file: &Path, system: Option<&Path>) -> Result<Outcome, CliError> {
    let text = read(file)?;
    let kind = parsed(file, detect_kind(&text))?;
    let checked: Result<(), FormatError> = match kind {
        DocKind::Emas => parse_emas(&text).map(drop),
        DocKind::Cmas => parse_cmas(&text).map(drop),
        DocKind::Etrans => {
            let Some(sys_path) = system else {
                return Err(CliError::Usage(
                    "validating an explicit transducer needs --system".into(),
                ));
            };
            let sys_text = read(sys_path)?;
            let sys = parsed(sys_path, parse_emas(&sys_text))?;
            parse_etrans(&text, &sys).map(drop)
        }
        DocKind::Ctrans => parse_ctrans(&text).map(drop),
        DocKind::Game => parse_game(&text).map(drop),
        DocKind::Dtm => parse_dtm(&text).map(drop),
        DocKind::Atm => parse_atm(&text).map(drop),
        DocKind::Verdict => parse_verdict(&text).map(drop),
        DocKind::Report => parse_report(&text).map(drop),
    };
    let mut doc = VerdictDocument::new(checked.is_ok());
    doc.push("command", "validate").push("kind", kind.keyword());
    if let Err(e) = &checked {
        let mut s = Section::new("errors");
        let messages: Vec<String> = match e {
            FormatError::Model(es) => es.iter().map(ToString::to_string).collect(),
            FormatError::Circuit(es) => es.iter().map(ToString::to_string).collect(),
            FormatError::Game(es) => es.iter().map(ToString::to_string).collect(),
            other => vec![other.to_string()],
        };
        for m in messages {
            s.push("error", m.replace('\n', " "));
        }
        doc.sections.push(s);
    }
    Ok(Outcome::answer(checked.is_ok(), serialize_verdict(&doc)))
}

fn names(g: &crate::game::ReachabilityGame, states: Vec<usize>) -> String {
    states
        .into_iter()
        .map(|v| g.name(v).to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn solve_game(file: &Path) -> Result<Outcome, CliError> {
    let text = read(file)?;
    let g = parsed(file, parse_game(&text))?;
    let init = g.init().ok_or(GameError::MissingInit)?;
    let p = solve(&g);
    let reacher = p.winner(init) == Player::Reacher;
    let mut doc = VerdictDocument::new(reacher);
    doc.push("command", "solve-game")
        .push("winner", if reacher { "reacher" } else { "avoider" })
        .push("win0", names(&g, p.win0()))
        .push("win1", names(&g, p.win1()));
    let mut s = Section::new("strategy");
    for v in 0..g.state_count() {
        if let Some(t) = p.strategy(v) {
            s.push(g.name(v), g.name(t));
        }
    }
    doc.sections.push(s);
    Ok(Outcome::answer(reacher, serialize_verdict(&doc)))
}

fn realize_document(
    sys: &ExplicitSystem,
    v: &RealizabilityVerdict,
    with_witness: bool,
) -> VerdictDocument {
    let mut doc = VerdictDocument::new(v.answer);
    doc.push("command", "realize")
        .push("coalition", v.coalition.to_list_string())
        .push("automaton-states", v.automaton_states.to_string());
    if !with_witness {
        return doc;
    }
    let decisions = |ds: &[usize]| {
        ds.iter()
            .map(|&d| sys.decision_name(d))
            .collect::<Vec<_>>()
            .join(" ")
    };
    let states = |vs: &[usize]| {
        vs.iter()
            .map(|&v| sys.state_name(v).to_string())
            .collect::<Vec<_>>()
            .join(" ")
    };
    if let Some(w) = &v.witness {
        let mut s = Section::new("witness");
        s.push("prefix", decisions(&w.prefix))
            .push("cycle", decisions(&w.cycle));
        doc.sections.push(s);
    }
    if let Some(c) = &v.certificate {
        let mut s = Section::new("certificate");
        s.push("trace-prefix", states(&c.trace.prefix))
            .push("trace-cycle", states(&c.trace.cycle))
            .push("winning-set", c.winning_set.to_list_string());
        for r in &c.receipts {
            let pairs: Vec<String> = r
                .pairs
                .iter()
                .map(|&(v, d)| format!("{}@{}", sys.state_name(v), sys.decision_name(d)))
                .collect();
            s.push(format!("receipt {}", r.agent), pairs.join(" "));
        }
        doc.sections.push(s);
    }
    doc
}

fn realize(file: &Path, w: AgentSet, with_witness: bool, cap: u128) -> Result<Outcome, CliError> {
    let (sys, verdict) = match load_system(file)? {
        LoadedSystem::Explicit(sys) => {
            let v = realize_explicit(&sys, w)?;
            (sys, v)
        }
        LoadedSystem::Circuit(csys) => {
            let r = realize_circuit(&csys, w, cap)?;
            (r.fragment, r.verdict)
        }
    };
    let doc = realize_document(&sys, &verdict, with_witness);
    Ok(Outcome::answer(verdict.answer, serialize_verdict(&doc)))
}

/// Orders per-agent strategies by agent index, requiring each exactly once.
fn arrange<T>(agents: usize, items: Vec<(usize, T)>) -> Result<Vec<T>, CliError> {
    let mut slots: Vec<Option<T>> = (0..agents).map(|_| None).collect();
    for (agent, t) in items {
        let slot = slots.get_mut(agent).ok_or_else(|| {
            CliError::Usage(format!("profile names agent {agent}, which does not exist"))
        })?;
        if slot.replace(t).is_some() {
            return Err(CliError::Usage(format!(
                "profile gives agent {agent} two strategies"
            )));
        }
    }
    slots
        .into_iter()
        .enumerate()
        .map(|(i, s)| {
            s.ok_or_else(|| CliError::Usage(format!("profile has no strategy for agent {i}")))
        })
        .collect()
}

fn verify_document(w: AgentSet, v: &Verdict) -> VerdictDocument {
    let mut doc = VerdictDocument::new(v.is_wne);
    doc.push("command", "verify")
        .push("coalition", w.to_list_string())
        .push(
            "observed-winning-set",
            v.observed_winning_set.to_list_string(),
        )
        .push("trace-prefix", v.trace_prefix.join(" "))
        .push("trace-cycle", v.trace_cycle.join(" "))
        .push("trace-steps", v.trace_steps.to_string());
    if let Some(c) = &v.counterexample {
        let mut s = Section::new("counterexample");
        match c {
            Counterexample::GoalMismatch { expected, observed } => {
                s.push("kind", "goal-mismatch")
                    .push("expected", expected.to_list_string())
                    .push("observed", observed.to_list_string());
            }
            Counterexample::Deviation {
                agent,
                actions,
                reached,
            } => {
                s.push("kind", "deviation")
                    .push("agent", agent.to_string())
                    .push("actions", actions.join(" "))
                    .push("reached", reached.clone());
            }
        }
        doc.sections.push(s);
    }
    doc
}

fn verify_profile(file: &Path, profile: &[PathBuf], w: AgentSet) -> Result<Outcome, CliError> {
    let verdict = match load_system(file)? {
        LoadedSystem::Explicit(sys) => {
            let mut items = Vec::new();
            for p in profile {
                let text = read(p)?;
                items.push(parsed(p, parse_etrans(&text, &sys))?);
            }
            let ts: Vec<ExplicitTransducer> = arrange(sys.agent_count(), items)?;
            verify(SystemRef::Explicit(&sys), &StrategyProfile::Explicit(ts), w)?
        }
        LoadedSystem::Circuit(csys) => {
            let mut items = Vec::new();
            for p in profile {
                let text = read(p)?;
                items.push(parsed(p, parse_ctrans(&text))?);
            }
            let ts: Vec<CircuitTransducer> = arrange(csys.action_vars().len(), items)?;
            verify(SystemRef::Circuit(&csys), &StrategyProfile::Circuit(ts), w)?
        }
    };
    let doc = verify_document(w, &verdict);
    Ok(Outcome::answer(verdict.is_wne, serialize_verdict(&doc)))
}

fn generate(gadget: Gen) -> Result<Outcome, CliError> {
    match gadget {
        Gen::Game { game } => {
            let text = read(&game)?;
            let g = parsed(&game, parse_game(&text))?;
            let (sys, _) = game_to_system(&g)?;
            Ok(Outcome::answer(true, serialize_emas(&sys)))
        }
        Gen::Atm { machine, cells } => {
            let text = read(&machine)?;
            let m = parsed(&machine, parse_atm(&text))?;
            let (sys, _) = atm_to_circuit_system(&m, cells)?;
            Ok(Outcome::answer(true, serialize_cmas(&sys)))
        }
        Gen::TurnBased {
            machine,
            cells,
            out,
        } => {
            let text = read(&machine)?;
            let m = parsed(&machine, parse_dtm(&text))?;
            let (sys, profile, w) = dtm_to_turnbased(&m, cells)?;
            let StrategyProfile::Explicit(ts) = profile else {
                unreachable!("turn-based profiles are explicit")
            };
            let mut files = vec![("system.emas".to_string(), serialize_emas(&sys))];
            for (i, t) in ts.iter().enumerate() {
                files.push((format!("agent{i}.etrans"), serialize_etrans(t, &sys, i)));
            }
            write_all(&out, files, w)
        }
        Gen::OneAgent {
            machine,
            cells,
            out,
        } => {
            let text = read(&machine)?;
            let m = parsed(&machine, parse_dtm(&text))?;
            let (sys, profile, w) = dtm_to_one_agent_circuit(&m, cells)?;
            let StrategyProfile::Circuit(ts) = profile else {
                unreachable!("one-agent profiles are circuits")
            };
            let files = vec![
                ("system.cmas".to_string(), serialize_cmas(&sys)),
                ("agent0.ctrans".to_string(), serialize_ctrans(&ts[0], 0)),
            ];
            write_all(&out, files, w)
        }
    }
}

/// Writes generated documents into `dir` and lists them with the coalition to check.
fn write_all(dir: &Path, files: Vec<(String, String)>, w: AgentSet) -> Result<Outcome, CliError> {
    fs::create_dir_all(dir).map_err(|source| CliError::Write {
        path: dir.display().to_string(),
        source,
    })?;
    let mut stdout = format!("coalition: {}\n", w.to_list_string());
    for (name, text) in files {
        let path = dir.join(name);
        write(&path, &text)?;
        stdout.push_str(&format!("wrote: {}\n", path.display()));
    }
    Ok(Outcome::answer(true, stdout))
}
