mod common;

use std::path::Path;
use std::process::Command;

use common::{fixture, fixture_path};
use wnash::io::parse_verdict;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn wnash<S: AsRef<std::ffi::OsStr>>(args: &[S]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_wnash"))
        .args(args)
        .output()
        .expect("binary runs");
    Run {
        code: out.status.code().expect("exited normally"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn fx(name: &str) -> String {
    fixture_path(name).to_string_lossy().into_owned()
}

#[test]
fn realize_yes_prints_golden_verdict() {
    let r = wnash(&["realize", &fx("sys1.emas"), "--coalition", "0", "--witness"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.stdout, fixture("golden/realize_sys1_w0.verdict"));
}

#[test]
fn realize_exit_codes_follow_the_answer() {
    for (coalition, code) in [("none", 0), ("0", 0), ("1", 0), ("0,1", 1), ("1,0", 1)] {
        let r = wnash(&["realize", &fx("sys1.emas"), "--coalition", coalition]);
        assert_eq!(r.code, code, "coalition {coalition}: {}", r.stderr);
        let doc = parse_verdict(&r.stdout).unwrap();
        assert_eq!(doc.answer, code == 0);
    }
}

#[test]
fn circuit_system_realizes_like_explicit() {
    for coalition in ["none", "0", "1", "0,1"] {
        let e = wnash(&["realize", &fx("sys1.emas"), "--coalition", coalition]);
        let c = wnash(&["realize", &fx("sys1.cmas"), "--coalition", coalition]);
        assert_eq!(e.code, c.code, "coalition {coalition}");
    }
}

#[test]
fn verify_exit_codes() {
    let ok = wnash(&[
        "verify",
        &fx("sys1.emas"),
        "--profile",
        &fx("p0.etrans"),
        &fx("p1.etrans"),
        "--coalition",
        "0",
    ]);
    assert_eq!(ok.code, 0, "{}", ok.stderr);
    let bad = wnash(&[
        "verify",
        &fx("sys1.cmas"),
        "--profile",
        &fx("p0.ctrans"),
        &fx("p1.ctrans"),
        "--coalition",
        "1",
    ]);
    assert_eq!(bad.code, 1);
    assert_eq!(bad.stdout, fixture("golden/verify_sys1_w1.verdict"));
}

#[test]
fn usage_and_input_errors_exit_two() {
    let cases: Vec<Vec<String>> = vec![
        vec![],
        vec!["bogus".into()],
        vec![
            "realize".into(),
            fx("missing.emas"),
            "--coalition".into(),
            "0".into(),
        ],
        vec![
            "realize".into(),
            fx("sys1.emas"),
            "--coalition".into(),
            "0,0".into(),
        ],
        vec![
            "realize".into(),
            fx("sys1.emas"),
            "--coalition".into(),
            "5".into(),
        ],
        vec!["realize".into(), fx("sys1.emas")],
        vec![
            "realize".into(),
            fx("writer.dtm"),
            "--coalition".into(),
            "0".into(),
        ],
        vec![
            "verify".into(),
            fx("sys1.emas"),
            "--profile".into(),
            fx("p0.etrans"),
            "--coalition".into(),
            "0".into(),
        ],
        vec!["validate".into(), fx("p0.etrans")],
        vec!["unfold".into(), fx("sys1.emas")],
    ];
    for args in cases {
        let r = wnash(&args);
        assert_eq!(r.code, 2, "{args:?}: {}", r.stdout);
        assert!(!r.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn validate_reports_invalid_documents_with_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.emas");
    let text = fixture("sys1.emas").replace("trans: s2 b y -> s2\n", "");
    std::fs::write(&path, text).unwrap();
    let r = wnash(&[Path::new("validate"), path.as_path()]);
    assert_eq!(r.code, 1, "{}", r.stderr);
    assert!(r.stdout.contains("section errors"));
    let ok = wnash(&["validate", &fx("sys1.emas")]);
    assert_eq!(ok.code, 0);
}

#[test]
fn solve_game_answers_for_the_reacher() {
    let chain = wnash(&["solve-game", &fx("chain.game")]);
    assert_eq!(chain.code, 0);
    assert_eq!(chain.stdout, fixture("golden/chain.verdict"));
    assert_eq!(wnash(&["solve-game", &fx("diamond.game")]).code, 1);
}

#[test]
fn unfold_prints_an_explicit_system() {
    let r = wnash(&["unfold", &fx("sys1.cmas")]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.starts_with("emas v1\n"));
    let too_small = wnash(&["unfold", &fx("sys1.cmas"), "--cap", "4"]);
    assert_eq!(too_small.code, 2);
}

#[test]
fn generated_game_system_realizes_by_winner() {
    let dir = tempfile::tempdir().unwrap();
    for (game, code) in [("diamond.game", 0), ("chain.game", 1)] {
        let r = wnash(&["gen", "game", &fx(game)]);
        assert_eq!(r.code, 0, "{}", r.stderr);
        let path = dir.path().join(game.replace(".game", ".emas"));
        std::fs::write(&path, r.stdout).unwrap();
        let realized = wnash(&["realize", path.to_str().unwrap(), "--coalition", "none"]);
        assert_eq!(realized.code, code, "{game}");
    }
}

#[test]
fn generated_machine_profiles_verify_by_acceptance() {
    for (kind, ext) in [("turn-based", "emas"), ("one-agent", "cmas")] {
        for (machine, code) in [("writer.dtm", 0), ("runaway.dtm", 1), ("looper.dtm", 1)] {
            let dir = tempfile::tempdir().unwrap();
            let out = dir.path().to_str().unwrap();
            let r = wnash(&["gen", kind, &fx(machine), "--cells", "3", "--out", out]);
            assert_eq!(r.code, 0, "{}", r.stderr);
            let coalition = r
                .stdout
                .lines()
                .find_map(|l| l.strip_prefix("coalition: "))
                .unwrap()
                .to_string();
            let mut profile: Vec<String> = std::fs::read_dir(dir.path())
                .unwrap()
                .map(|e| e.unwrap().path())
                .filter(|p| {
                    p.file_name()
                        .unwrap()
                        .to_str()
                        .unwrap()
                        .starts_with("agent")
                })
                .map(|p| p.to_string_lossy().into_owned())
                .collect();
            profile.sort();
            let mut args = vec![
                "verify".to_string(),
                dir.path()
                    .join(format!("system.{ext}"))
                    .to_string_lossy()
                    .into_owned(),
                "--profile".to_string(),
            ];
            args.extend(profile);
            args.extend(["--coalition".to_string(), coalition]);
            let v = wnash(&args);
            assert_eq!(v.code, code, "{kind} {machine}: {}", v.stderr);
        }
    }
}

#[test]
fn alternating_machine_system_realizes_iff_rejecting() {
    let dir = tempfile::tempdir().unwrap();
    for (machine, code) in [("or_root.atm", 1), ("and_root.atm", 0)] {
        let r = wnash(&["gen", "atm", &fx(machine), "--cells", "2"]);
        assert_eq!(r.code, 0, "{}", r.stderr);
        let path = dir.path().join(machine.replace(".atm", ".cmas"));
        std::fs::write(&path, r.stdout).unwrap();
        let realized = wnash(&["realize", path.to_str().unwrap(), "--coalition", "none"]);
        assert_eq!(realized.code, code, "{machine}");
    }
}

#[test]
fn oracle_prints_golden_report() {
    let r = wnash(&["oracle", "--seed", "7", "--count", "5"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.stdout, fixture("golden/oracle_seed7.report"));
}
