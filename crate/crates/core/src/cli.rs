//! Subcommands of the `hfmodel` binary. Each returns its text output and an
//! exit status: 0 success, 1 check failure, 2 usage or parse error, 3 budget
//! exhaustion.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;

use hfmodel::approx::{BoundedZfPackage, GenericPackage, Package, ScriptedInjury};
use hfmodel::construction::{check_global, run, Trace};
use hfmodel::fol::parse;
use hfmodel::hf::{iack, iack_inv, HfSet};
use hfmodel::srel::{covering_witness, decision_stage, decide_s, indef_witness};
use hfmodel::structures::{all_structures, neutral_extensions, Atom, FinStruct};
use hfmodel::suites::{run_suite, SUITES};
use hfmodel::Error;

#[derive(Parser)]
#[command(name = "hfmodel", version, about = "HF sets, the relation S, and staged model construction")]
pub struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Ackermann coding between sets and naturals.
    Ack {
        #[arg(value_enum)]
        direction: Direction,
        value: String,
    },
    /// The ternary relation S.
    Srel {
        #[command(subcommand)]
        cmd: SrelCmd,
    },
    /// Finite structures.
    Struct {
        #[command(subcommand)]
        cmd: StructCmd,
    },
    /// The staged construction.
    Construct {
        #[command(subcommand)]
        cmd: ConstructCmd,
    },
    /// Run a property suite.
    Verify {
        /// One of in_def, univ, only_good, oracle, or all.
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Direction {
    Enc,
    Dec,
}

#[derive(Subcommand)]
enum SrelCmd {
    /// Decide S(a,b,c).
    Decide { a: String, b: String, c: String },
    /// A set c with ¬S(a,b,c), for a ∉ b.
    Witness { a: String, b: String },
}

#[derive(Subcommand)]
enum StructCmd {
    /// Enumerate structures: all on a domain, or all neutral extensions.
    Enum {
        /// Comma-separated set literals, e.g. `{},{{}}`.
        #[arg(long, conflicts_with = "extend")]
        dom: Option<String>,
        /// A structure literal to extend by a fresh atom.
        #[arg(long)]
        extend: Option<String>,
        /// Label for the fresh atom.
        #[arg(long, default_value = "{{{}}}")]
        v: String,
    },
}

#[derive(Args)]
struct RunArgs {
    /// key=value config file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override a config key, `key=value`. Repeatable.
    #[arg(long = "set")]
    sets: Vec<String>,
    #[arg(long)]
    trace: Option<PathBuf>,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Subcommand)]
enum ConstructCmd {
    /// Run the construction and check it.
    Run(RunArgs),
    /// Re-run the configuration recorded in a trace and compare.
    Replay { trace: PathBuf },
}

pub struct Outcome {
    pub code: u8,
    pub text: String,
}

fn fail(code: u8, text: impl Into<String>) -> Outcome {
    Outcome {
        code,
        text: text.into(),
    }
}

fn from_error(e: &Error) -> Outcome {
    let code = match e {
        Error::Parse(_) | Error::Precondition(_) => 2,
        Error::Budget(_) => 3,
        _ => 1,
    };
    fail(code, format!("error: {e}"))
}

fn set(src: &str) -> Result<HfSet, Outcome> {
    HfSet::from_str(src).map_err(|e| fail(2, format!("error: {e}")))
}

pub fn dispatch(cli: Cli) -> Outcome {
    let r = match cli.cmd {
        Cmd::Ack { direction, value } => ack(direction, &value),
        Cmd::Srel { cmd } => srel(cmd),
        Cmd::Struct { cmd } => structs(cmd),
        Cmd::Construct { cmd } => construct(cmd),
        Cmd::Verify { suite, seed } => verify(&suite, seed),
    };
    r.unwrap_or_else(|o| o)
}

fn ack(direction: Direction, value: &str) -> Result<Outcome, Outcome> {
    let text = match direction {
        Direction::Enc => iack(&set(value)?).map_err(|e| from_error(&e))?.to_string(),
        Direction::Dec => {
            let n = BigUint::from_str(value.trim())
                .map_err(|_| fail(2, format!("error: `{value}` is not a natural")))?;
            iack_inv(&n).to_string()
        }
    };
    Ok(fail(0, text))
}

fn srel(cmd: SrelCmd) -> Result<Outcome, Outcome> {
    match cmd {
        SrelCmd::Decide { a, b, c } => {
            let (a, b, c) = (set(&a)?, set(&b)?, set(&c)?);
            let truth = decide_s(&a, &b, &c);
            let text = match covering_witness(&a, &b, &c) {
                Some((_, w)) => format!(
                    "{truth}, stage {}, witness fired\nalpha {}\nA {}\nB {}",
                    w.alpha + 1,
                    w.alpha,
                    w.a,
                    w.b
                ),
                None => format!("{truth}, stage {}, default", decision_stage(&a, &b, &c)),
            };
            Ok(fail(0, text))
        }
        SrelCmd::Witness { a, b } => {
            let w = indef_witness(&set(&a)?, &set(&b)?).map_err(|e| from_error(&e))?;
            Ok(fail(0, w.to_string()))
        }
    }
}

/// Splits `{},{{}}` at top-level commas.
fn set_list(src: &str) -> Result<Vec<HfSet>, Outcome> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, ch) in src.char_indices() {
        match ch {
            '{' => depth += 1,
            '}' => depth -= 1,
            ',' if depth == 0 => {
                out.push(set(&src[start..i])?);
                start = i + 1;
            }
            _ => {}
        }
    }
    if !src[start..].trim().is_empty() {
        out.push(set(&src[start..])?);
    }
    Ok(out)
}

fn structs(cmd: StructCmd) -> Result<Outcome, Outcome> {
    let StructCmd::Enum { dom, extend, v } = cmd;
    let list: Vec<FinStruct> = match (dom, extend) {
        (Some(d), None) => {
            let atoms: Vec<Atom> = set_list(&d)?.into_iter().map(Atom::Set).collect();
            all_structures(&atoms).map_err(|e| from_error(&e))?
        }
        (None, Some(lit)) => {
            let base = FinStruct::from_str(&lit).map_err(|e| from_error(&e))?;
            neutral_extensions(&base, Atom::Set(set(&v)?))
                .map_err(|e| from_error(&e))?
                .collect()
        }
        _ => return Err(fail(2, "error: give exactly one of --dom or --extend")),
    };
    let mut text = format!("{} structures", list.len());
    for s in &list {
        text.push('\n');
        text.push_str(&s.to_string());
    }
    Ok(fail(0, text))
}

// ---------- run configuration ----------

const KEYS: [&str; 8] = [
    "package",
    "refute.max_steps",
    "screen.max_rank",
    "horizon.stages",
    "window",
    "seed",
    "injury.literal",
    "injury.until",
];

/// Parsed `key=value` settings with defaults filled in.
pub struct RunConfig {
    pub values: BTreeMap<String, String>,
}

impl RunConfig {
    fn defaults() -> BTreeMap<String, String> {
        [
            ("package", "generic"),
            ("horizon.stages", "50"),
            ("window", "10"),
            ("seed", "0"),
            ("screen.max_rank", "3"),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
    }

    fn from_pairs<'a>(pairs: impl IntoIterator<Item = &'a str>) -> Result<Self, Outcome> {
        let mut values = Self::defaults();
        for line in pairs {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| fail(2, format!("error: expected key=value, got `{line}`")))?;
            let (k, v) = (k.trim(), v.trim());
            if !KEYS.contains(&k) {
                return Err(fail(2, format!("error: unknown config key `{k}`")));
            }
            if v.is_empty() || v.contains(char::is_whitespace) {
                return Err(fail(2, format!("error: value for `{k}` must be one word")));
            }
            values.insert(k.to_string(), v.to_string());
        }
        let cfg = RunConfig { values };
        for k in ["horizon.stages", "window", "seed", "screen.max_rank"] {
            cfg.num(k)?;
        }
        if cfg.values.contains_key("refute.max_steps") && cfg.num("refute.max_steps")? == 0 {
            return Err(fail(2, "error: refute.max_steps must be positive"));
        }
        if cfg.num("window")? == 0 {
            return Err(fail(2, "error: window must be positive"));
        }
        Ok(cfg)
    }

    fn num(&self, k: &str) -> Result<u64, Outcome> {
        let v = &self.values[k];
        v.parse()
            .map_err(|_| fail(2, format!("error: `{k}` needs a natural, got `{v}`")))
    }

    fn package(&self) -> Result<Package, Outcome> {
        let seed = self.num("seed")?;
        let steps = match self.values.get("refute.max_steps") {
            Some(_) => Some(self.num("refute.max_steps")? as usize),
            None => None,
        };
        Ok(match self.values["package"].as_str() {
            "generic" => Arc::new(GenericPackage::new(seed, steps)),
            "bounded_zf" => Arc::new(BoundedZfPackage::new(seed, steps, self.num("screen.max_rank")? as u32)),
            "scripted_injury" => {
                let lit = self
                    .values
                    .get("injury.literal")
                    .ok_or_else(|| fail(2, "error: scripted_injury needs injury.literal"))?;
                let f = parse(lit).map_err(|e| fail(2, format!("error: injury.literal: {e}")))?;
                let until = match self.values.get("injury.until") {
                    Some(_) => self.num("injury.until")? as usize,
                    None => 30,
                };
                Arc::new(ScriptedInjury::new(seed, f, until))
            }
            other => return Err(fail(2, format!("error: unknown package `{other}`"))),
        })
    }
}

fn write_atomic(path: &Path, text: &str) -> Result<(), Outcome> {
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, text)
        .and_then(|_| fs::rename(&tmp, path))
        .map_err(|e| fail(1, format!("error: writing {}: {e}", path.display())))
}

/// Runs the configured construction; returns the trace text, the report and
/// the exit status.
pub fn run_config(cfg: &RunConfig) -> Result<(String, String, u8), Outcome> {
    let pkg = cfg.package()?;
    let stages = cfg.num("horizon.stages")? as usize;
    let window = cfg.num("window")? as usize;
    let r = run(pkg.as_ref(), stages, cfg.values.clone());
    let mut report = String::from("report");
    for (k, v) in &cfg.values {
        report.push_str(&format!(" {k}={v}"));
    }
    report.push('\n');
    let mut code = 0;
    for l in &r.local {
        report.push_str(&format!("{l}\n"));
        if !l.ok() && code == 0 {
            code = 1;
        }
    }
    if let Some(e) = &r.error {
        report.push_str(&format!("run stopped: {e}\n"));
        code = if matches!(e, Error::Budget(_)) { 3 } else { 1 };
    }
    let global = check_global(&r.trace, window, &r.last_u);
    report.push_str(&format!("{global}\n"));
    if code == 0 && !global.ok() {
        code = 1;
    }
    Ok((r.trace.to_string(), report, code))
}

fn first_violation(report: &str) -> Option<&str> {
    report
        .lines()
        .find(|l| l.contains(": L") && !l.ends_with("L1-L6 ok") || l.contains("FAIL") || l.starts_with("run stopped"))
}

fn construct(cmd: ConstructCmd) -> Result<Outcome, Outcome> {
    match cmd {
        ConstructCmd::Run(args) => {
            let mut lines: Vec<String> = Vec::new();
            if let Some(p) = &args.config {
                let text = fs::read_to_string(p)
                    .map_err(|e| fail(2, format!("error: reading {}: {e}", p.display())))?;
                lines.extend(text.lines().map(str::to_string));
            }
            lines.extend(args.sets.iter().cloned());
            let cfg = RunConfig::from_pairs(lines.iter().map(String::as_str))?;
            let (trace, report, code) = run_config(&cfg)?;
            if let Some(p) = &args.trace {
                write_atomic(p, &trace)?;
            }
            if let Some(p) = &args.report {
                write_atomic(p, &report)?;
            }
            let mut text = report.lines().rev().take_while(|l| !l.starts_with("stage ")).collect::<Vec<_>>();
            text.reverse();
            let mut out = text.join("\n");
            if code != 0 {
                if let Some(v) = first_violation(&report) {
                    out = format!("{out}\nfirst violation: {v}");
                }
            }
            Ok(fail(code, out))
        }
        ConstructCmd::Replay { trace } => {
            let text = fs::read_to_string(&trace)
                .map_err(|e| fail(2, format!("error: reading {}: {e}", trace.display())))?;
            let parsed = Trace::from_str(&text).map_err(|e| from_error(&e))?;
            let pairs: Vec<String> = parsed.meta.iter().map(|(k, v)| format!("{k}={v}")).collect();
            let cfg = RunConfig::from_pairs(pairs.iter().map(String::as_str))?;
            let (again, _, _) = run_config(&cfg)?;
            let same = Trace::from_str(&again).map_err(|e| from_error(&e))? == parsed && again == text;
            Ok(if same {
                fail(0, format!("replay identical ({} snapshots)", parsed.snapshots.len()))
            } else {
                fail(1, "replay differs from the recorded trace")
            })
        }
    }
}

fn verify(suite: &str, seed: u64) -> Result<Outcome, Outcome> {
    let names: Vec<&str> = if suite == "all" {
        SUITES.to_vec()
    } else if SUITES.contains(&suite) {
        vec![suite]
    } else {
        return Err(fail(2, format!("error: unknown suite `{suite}` (expected one of {SUITES:?} or all)")));
    };
    let mut code = 0;
    let mut parts = Vec::new();
    for n in names {
        let r = run_suite(n, seed).map_err(|e| from_error(&e))?;
        if !r.ok() {
            code = 1;
        }
        parts.push(r.to_string());
    }
    Ok(fail(code, parts.join("\n")))
}
