//! Acceptance run: each criterion prints one PASS/FAIL line, and the process
//! fails if any criterion fails.

mod common;

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use common::{atm, dtm, fixture, fixture_path, set, sys1};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wnash::gadgets::{
    atm_accepts, atm_to_circuit_system, dtm_accepts, dtm_to_one_agent_circuit, dtm_to_turnbased,
    game_to_system,
};
use wnash::game::{play, solve, who_wins, Player, ReachabilityGame};
use wnash::io::{
    detect_kind, parse_atm, parse_cmas, parse_ctrans, parse_dtm, parse_emas, parse_etrans,
    parse_game, parse_report, parse_verdict, serialize_atm, serialize_cmas, serialize_ctrans,
    serialize_dtm, serialize_emas, serialize_etrans, serialize_game, serialize_report,
    serialize_verdict, DocKind,
};
use wnash::model::{unfold, unfold_transducer, StrategyProfile, DEFAULT_ROW_CAP};
use wnash::oracle::{
    brute_realize, gen_random_circuit_system, gen_random_circuit_transducer, gen_random_explicit,
    gen_random_game, gen_random_profile, RandomSystemParams,
};
use wnash::realize::{certify_witness, realize_circuit, realize_explicit};
use wnash::verify::{primary_trace, verify, SystemRef};
use wnash::AgentSet;

const SYS1_TIME_LIMIT: Duration = Duration::from_secs(1);
const ORACLE_TIME_LIMIT: Duration = Duration::from_secs(300);
const ORACLE_SYSTEMS: u64 = 200;
const GADGET_GAMES: u64 = 100;
const CIRCUIT_SYSTEMS: u64 = 50;
const SOLVER_GAMES: u64 = 500;
const PLAYOUTS: usize = 100;
const SEED: u64 = 0x5eed;

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn sys1_verdicts() -> Outcome {
    let start = Instant::now();
    let sys = sys1();
    for (w, expected) in [
        (set(&[0]), true),
        (set(&[1]), true),
        (set(&[0, 1]), false),
        (set(&[]), true),
    ] {
        let got = realize_explicit(&sys, w).map_err(|e| e.to_string())?.answer;
        check(got == expected, || format!("coalition {w}: got {got}"))?;
    }
    let elapsed = start.elapsed();
    check(elapsed < SYS1_TIME_LIMIT, || format!("took {elapsed:?}"))?;
    Ok(format!(
        "4 coalitions in {elapsed:?} (limit {SYS1_TIME_LIMIT:?})"
    ))
}

/// Shared sweep for the oracle, witness and lasso-bound criteria.
struct OracleSweep {
    checks: usize,
    mismatches: Vec<String>,
    yes_cases: usize,
    certify_failures: Vec<String>,
    lasso_violations: Vec<String>,
    elapsed: Duration,
}

fn oracle_sweep() -> OracleSweep {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut s = OracleSweep {
        checks: 0,
        mismatches: Vec::new(),
        yes_cases: 0,
        certify_failures: Vec::new(),
        lasso_violations: Vec::new(),
        elapsed: Duration::ZERO,
    };
    for i in 0..ORACLE_SYSTEMS {
        let p = RandomSystemParams::new(rng.gen_range(1..=5), rng.gen_range(1..=3), SEED + i);
        let sys = gen_random_explicit(&p).expect("parameters in range");
        for w in AgentSet::all_subsets(sys.agent_count()) {
            s.checks += 1;
            let v = realize_explicit(&sys, w).expect("coalition in range");
            if v.answer != brute_realize(&sys, w).expect("within brute-force cap") {
                s.mismatches.push(format!("system {i} coalition {w}"));
            }
            if let Some(word) = &v.witness {
                s.yes_cases += 1;
                if !certify_witness(&sys, w, word).unwrap_or(false) {
                    s.certify_failures.push(format!("system {i} coalition {w}"));
                }
                if word.len() > v.automaton_states {
                    s.lasso_violations.push(format!(
                        "system {i} coalition {w}: lasso {} > {}",
                        word.len(),
                        v.automaton_states
                    ));
                }
            }
        }
    }
    s.elapsed = start.elapsed();
    s
}

fn oracle_agreement(s: &OracleSweep) -> Outcome {
    check(s.mismatches.is_empty(), || {
        format!(
            "{} mismatches, first {}",
            s.mismatches.len(),
            s.mismatches[0]
        )
    })?;
    check(s.elapsed < ORACLE_TIME_LIMIT, || {
        format!("took {:?}", s.elapsed)
    })?;
    Ok(format!(
        "{ORACLE_SYSTEMS} systems, {} coalition checks, 0 mismatches in {:?} (limit {ORACLE_TIME_LIMIT:?})",
        s.checks, s.elapsed
    ))
}

fn witness_soundness(s: &OracleSweep) -> Outcome {
    check(s.yes_cases > 0, || "no YES cases".into())?;
    check(s.certify_failures.is_empty(), || {
        format!(
            "{} failures, first {}",
            s.certify_failures.len(),
            s.certify_failures[0]
        )
    })?;
    Ok(format!("{} witnesses certified", s.yes_cases))
}

fn game_gadget() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 3);
    for i in 0..GADGET_GAMES {
        let n = rng.gen_range(1..=10);
        let g = gen_random_game(&mut rng, n, 0.3);
        let (sys, w) = game_to_system(&g).map_err(|e| e.to_string())?;
        let answer = realize_explicit(&sys, w).map_err(|e| e.to_string())?.answer;
        let avoider = who_wins(&g).map_err(|e| e.to_string())? == Player::Avoider;
        check(answer == avoider, || {
            format!("game {i}: realize {answer}, avoider wins {avoider}")
        })?;
    }
    Ok(format!("{GADGET_GAMES} games, 0 mismatches"))
}

fn alternating_gadget() -> Outcome {
    let mut cases = 0;
    for name in ["accept", "reject", "or_root", "and_root", "alternating"] {
        let m = atm(name);
        for n in 1..=3 {
            let accepts = atm_accepts(&m, n, 100_000).map_err(|e| e.to_string())?;
            let (csys, w) = atm_to_circuit_system(&m, n).map_err(|e| e.to_string())?;
            let answer = realize_circuit(&csys, w, DEFAULT_ROW_CAP)
                .map_err(|e| e.to_string())?
                .verdict
                .answer;
            check(answer != accepts, || {
                format!("{name} n={n}: realize {answer}, accepts {accepts}")
            })?;
            cases += 1;
        }
    }
    Ok(format!("{cases} machine/tape cases, 0 mismatches"))
}

fn deterministic_gadgets() -> Outcome {
    let mut cases = 0;
    let mut looper_steps = Vec::new();
    for name in ["writer", "runaway", "looper"] {
        let m = dtm(name);
        for n in 1..=4 {
            let accepts = dtm_accepts(&m, n);
            if n >= 2 {
                let (sys, p, w) = dtm_to_turnbased(&m, n).map_err(|e| e.to_string())?;
                let v = verify(SystemRef::Explicit(&sys), &p, w).map_err(|e| e.to_string())?;
                check(v.is_wne == accepts, || format!("turn-based {name} n={n}"))?;
                let StrategyProfile::Explicit(ts) = &p else {
                    return Err("turn-based profile is not explicit".into());
                };
                let bound =
                    sys.state_count() * ts.iter().map(|t| t.state_count()).product::<usize>() + 1;
                check(v.trace_steps <= bound, || {
                    format!("turn-based {name} n={n}: {} steps > {bound}", v.trace_steps)
                })?;
                if name == "looper" {
                    looper_steps.push(v.trace_steps);
                }
                cases += 1;
            }
            let (csys, p, w) = dtm_to_one_agent_circuit(&m, n).map_err(|e| e.to_string())?;
            let v = verify(SystemRef::Circuit(&csys), &p, w).map_err(|e| e.to_string())?;
            check(v.is_wne == accepts, || format!("circuit {name} n={n}"))?;
            let StrategyProfile::Circuit(ts) = &p else {
                return Err("circuit profile is not a circuit".into());
            };
            let bits = csys.state_vars() + ts.iter().map(|t| t.state_vars()).sum::<usize>();
            let bound = (1u128 << bits) + 1;
            check((v.trace_steps as u128) <= bound, || {
                format!("circuit {name} n={n}: {} steps > {bound}", v.trace_steps)
            })?;
            if name == "looper" {
                looper_steps.push(v.trace_steps);
            }
            cases += 1;
        }
    }
    Ok(format!(
        "{cases} gadget runs, looper terminated after {looper_steps:?} steps"
    ))
}

fn circuit_consistency() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 7);
    let mut checks = 0;
    for i in 0..CIRCUIT_SYSTEMS {
        let sv = rng.gen_range(1..=5);
        let csys = gen_random_circuit_system(&mut rng, sv, 2);
        let sys = unfold(&csys, DEFAULT_ROW_CAP).map_err(|e| e.to_string())?;
        let cts: Vec<_> = (0..2)
            .map(|a| gen_random_circuit_transducer(&mut rng, &csys, a))
            .collect();
        let ets = cts
            .iter()
            .enumerate()
            .map(|(a, t)| unfold_transducer(t, &csys, a, DEFAULT_ROW_CAP))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| e.to_string())?;
        let cp = StrategyProfile::Circuit(cts);
        let ep = StrategyProfile::Explicit(ets);
        for w in AgentSet::all_subsets(2) {
            let c = realize_circuit(&csys, w, DEFAULT_ROW_CAP).map_err(|e| e.to_string())?;
            let e = realize_explicit(&sys, w).map_err(|e| e.to_string())?;
            check(c.verdict.answer == e.answer, || {
                format!("system {i} coalition {w}: realize differs")
            })?;
            let cv = verify(SystemRef::Circuit(&csys), &cp, w).map_err(|e| e.to_string())?;
            let ev = verify(SystemRef::Explicit(&sys), &ep, w).map_err(|e| e.to_string())?;
            check(cv.is_wne == ev.is_wne, || {
                format!("system {i} coalition {w}: verify differs")
            })?;
            checks += 2;
        }
    }
    Ok(format!(
        "{CIRCUIT_SYSTEMS} systems, {checks} checks, 0 mismatches"
    ))
}

fn check_game(g: &ReachabilityGame, rng: &mut ChaCha8Rng) -> Result<(), String> {
    let part = solve(g);
    for v in 0..g.state_count() {
        check(part.in_win0(v) != part.in_win1(v), || {
            format!("state {v} not partitioned")
        })?;
        let succ = g.successors(v);
        if part.in_win1(v) {
            let ok = match g.owner(v) {
                Player::Avoider => succ.iter().any(|&w| part.in_win1(w)),
                Player::Reacher => succ.iter().all(|&w| part.in_win1(w)),
            };
            check(ok && !g.is_goal(v), || {
                format!("state {v} violates the fixed point")
            })?;
        } else if !g.is_goal(v) {
            let ok = match g.owner(v) {
                Player::Reacher => succ.iter().any(|&w| part.in_win0(w)),
                Player::Avoider => succ.iter().all(|&w| part.in_win0(w)),
            };
            check(ok, || format!("state {v} is not attracted"))?;
        }
    }
    for start in 0..g.state_count() {
        for _ in 0..PLAYOUTS {
            let mut opponent = |_: usize, succ: &[usize]| succ[rng.gen_range(0..succ.len())];
            let path = play(g, &part, start, &mut opponent).map_err(|e| e.to_string())?;
            let reached = path.iter().any(|&v| g.is_goal(v));
            check(reached == part.in_win0(start), || {
                format!("playout from {start} falsified the winner")
            })?;
        }
    }
    Ok(())
}

fn solver_properties() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 8);
    for i in 0..SOLVER_GAMES {
        let n = rng.gen_range(1..=10);
        let density = rng.gen_range(0.0..0.5);
        let g = gen_random_game(&mut rng, n, density);
        check_game(&g, &mut rng).map_err(|e| format!("game {i}: {e}"))?;
    }
    Ok(format!(
        "{SOLVER_GAMES} games, {PLAYOUTS} playouts per start state"
    ))
}

fn bounds(s: &OracleSweep) -> Outcome {
    check(s.lasso_violations.is_empty(), || {
        s.lasso_violations[0].clone()
    })?;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 9);
    let traces = 200;
    for i in 0..traces {
        let p = RandomSystemParams::new(rng.gen_range(1..=5), rng.gen_range(1..=3), SEED + i);
        let sys = gen_random_explicit(&p).expect("parameters in range");
        let profile = gen_random_profile(&mut rng, &sys, 3);
        let report = primary_trace(&sys, &profile);
        let bound =
            sys.state_count() * profile.iter().map(|t| t.state_count()).product::<usize>() + 1;
        check(report.path.len() <= bound, || {
            format!(
                "system {i}: trace of {} configurations > {bound}",
                report.path.len()
            )
        })?;
    }
    Ok(format!(
        "{} lassos within automaton size, {traces} primary traces within product bound",
        s.yes_cases
    ))
}

fn reserialize(text: &str) -> Result<String, String> {
    let e = |e: wnash::io::FormatError| e.to_string();
    Ok(match detect_kind(text).map_err(e)? {
        DocKind::Emas => serialize_emas(&parse_emas(text).map_err(e)?),
        DocKind::Cmas => serialize_cmas(&parse_cmas(text).map_err(e)?),
        DocKind::Etrans => {
            let sys = sys1();
            let (agent, t) = parse_etrans(text, &sys).map_err(e)?;
            serialize_etrans(&t, &sys, agent)
        }
        DocKind::Ctrans => {
            let (agent, t) = parse_ctrans(text).map_err(e)?;
            serialize_ctrans(&t, agent)
        }
        DocKind::Game => serialize_game(&parse_game(text).map_err(e)?),
        DocKind::Dtm => serialize_dtm(&parse_dtm(text).map_err(e)?),
        DocKind::Atm => serialize_atm(&parse_atm(text).map_err(e)?),
        DocKind::Verdict => serialize_verdict(&parse_verdict(text).map_err(e)?),
        DocKind::Report => serialize_report(&parse_report(text).map_err(e)?),
    })
}

fn formats_and_exit_codes() -> Outcome {
    let dir = fixture_path("");
    let mut names = Vec::new();
    for sub in ["", "golden"] {
        for entry in std::fs::read_dir(dir.join(sub)).map_err(|e| e.to_string())? {
            let path = entry.map_err(|e| e.to_string())?.path();
            if path.is_file() {
                names.push(
                    path.strip_prefix(&dir)
                        .unwrap()
                        .to_string_lossy()
                        .into_owned(),
                );
            }
        }
    }
    names.sort();
    for name in &names {
        let text = fixture(name);
        check(reserialize(&text)? == text, || {
            format!("{name} does not round-trip")
        })?;
    }
    let bin = env!("CARGO_BIN_EXE_wnash");
    let f = |n: &str| fixture_path(n).to_string_lossy().into_owned();
    let cases: Vec<(Vec<String>, i32)> = vec![
        (
            vec![
                "realize".into(),
                f("sys1.emas"),
                "--coalition".into(),
                "0".into(),
            ],
            0,
        ),
        (
            vec![
                "realize".into(),
                f("sys1.emas"),
                "--coalition".into(),
                "0,1".into(),
            ],
            1,
        ),
        (
            vec![
                "verify".into(),
                f("sys1.emas"),
                "--profile".into(),
                f("p0.etrans"),
                f("p1.etrans"),
                "--coalition".into(),
                "0".into(),
            ],
            0,
        ),
        (vec!["solve-game".into(), f("diamond.game")], 1),
        (
            vec![
                "realize".into(),
                f("absent.emas"),
                "--coalition".into(),
                "0".into(),
            ],
            2,
        ),
        (
            vec![
                "realize".into(),
                f("sys1.emas"),
                "--coalition".into(),
                "0,0".into(),
            ],
            2,
        ),
        (vec!["frobnicate".into()], 2),
    ];
    for (args, expected) in &cases {
        let status = Command::new(bin)
            .args(args)
            .output()
            .map_err(|e| e.to_string())?
            .status
            .code();
        check(status == Some(*expected), || {
            format!("{args:?} exited {status:?}, expected {expected}")
        })?;
    }
    Ok(format!(
        "{} documents round-trip, {} CLI exit codes as expected",
        names.len(),
        cases.len()
    ))
}

fn main() -> ExitCode {
    let sweep = oracle_sweep();
    let results: Vec<(&str, Outcome)> = vec![
        ("fixture verdicts", sys1_verdicts()),
        ("oracle agreement", oracle_agreement(&sweep)),
        ("witness soundness", witness_soundness(&sweep)),
        ("game gadget equivalence", game_gadget()),
        (
            "alternating machine gadget equivalence",
            alternating_gadget(),
        ),
        (
            "deterministic machine gadget equivalence",
            deterministic_gadgets(),
        ),
        ("circuit/explicit consistency", circuit_consistency()),
        ("game solver properties", solver_properties()),
        ("lasso and trace bounds", bounds(&sweep)),
        (
            "format round-trips and exit codes",
            formats_and_exit_codes(),
        ),
    ];
    let mut failed = 0;
    for (i, (name, outcome)) in results.iter().enumerate() {
        match outcome {
            Ok(detail) => println!("criterion {:2} {name}: PASS ({detail})", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:2} {name}: FAIL ({detail})", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria passed",
        results.len() - failed,
        results.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
