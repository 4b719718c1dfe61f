use std::path::PathBuf;
use std::process::{Command, Output};

fn hfmodel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hfmodel"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("hfmodel-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn ack_both_ways() {
    let o = hfmodel(&["ack", "enc", "{}"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "0");
    let o = hfmodel(&["ack", "dec", "3"]);
    assert_eq!(stdout(&o).trim(), "{{},{{}}}");
    let o = hfmodel(&["ack", "enc", "{{},{{}}}"]);
    assert_eq!(stdout(&o).trim(), "3");
}

#[test]
fn malformed_set_is_a_usage_error() {
    let o = hfmodel(&["ack", "enc", "{{}"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
}

#[test]
fn decide_reports_stage() {
    let o = hfmodel(&["srel", "decide", "{}", "{}", "{}"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "true, stage 1, default");
    // ∅ ∈ {∅}, so S holds whatever the third argument
    let o = hfmodel(&["srel", "decide", "{}", "{{}}", "{{{}}}"]);
    assert!(stdout(&o).starts_with("true"));
}

#[test]
fn witness_is_refuted_by_decide() {
    let w = hfmodel(&["srel", "witness", "{}", "{}"]);
    assert_eq!(w.status.code(), Some(0));
    let c = stdout(&w);
    let o = hfmodel(&["srel", "decide", "{}", "{}", c.trim()]);
    assert!(stdout(&o).starts_with("false"), "{}", stdout(&o));
}

#[test]
fn empty_horizon_succeeds() {
    let o = hfmodel(&["construct", "run", "--set", "horizon.stages=0"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("overall: pass"));
}

#[test]
fn unknown_key_and_suite_are_usage_errors() {
    assert_eq!(hfmodel(&["construct", "run", "--set", "bogus=1"]).status.code(), Some(2));
    assert_eq!(hfmodel(&["verify", "nosuch"]).status.code(), Some(2));
}

#[test]
fn late_injury_fails_the_checks() {
    let o = hfmodel(&[
        "construct",
        "run",
        "--set",
        "package=scripted_injury",
        "--set",
        "injury.literal=S(c9,c9,c9)",
        "--set",
        "injury.until=48",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("overall: FAIL"));
}

#[test]
fn replay_detects_tampering() {
    let trace = scratch("t.trace");
    let t = trace.to_str().unwrap();
    let o = hfmodel(&["construct", "run", "--set", "horizon.stages=5", "--set", "seed=4", "--trace", t]);
    // too short to stabilize, but the trace is still written
    assert_eq!(o.status.code(), Some(1));
    let o = hfmodel(&["construct", "replay", t]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));

    let text = std::fs::read_to_string(&trace).unwrap();
    let at = text.rfind(" u=").unwrap() + 3;
    let mut bytes = text.into_bytes();
    bytes[at] = if bytes[at] == b'0' { b'1' } else { b'0' };
    std::fs::write(&trace, bytes).unwrap();
    assert_eq!(hfmodel(&["construct", "replay", t]).status.code(), Some(1));

    std::fs::write(&trace, "not a trace").unwrap();
    assert_eq!(hfmodel(&["construct", "replay", t]).status.code(), Some(2));
}

#[test]
fn config_file_matches_flags() {
    let cfg = scratch("run.cfg");
    std::fs::write(&cfg, "package = generic\nseed = 7\nhorizon.stages = 12\n").unwrap();
    let a = hfmodel(&["construct", "run", "--config", cfg.to_str().unwrap()]);
    let b = hfmodel(&["construct", "run", "--set", "seed=7", "--set", "horizon.stages=12"]);
    assert_eq!(a.status.code(), b.status.code());
    assert_eq!(stdout(&a), stdout(&b));
}
