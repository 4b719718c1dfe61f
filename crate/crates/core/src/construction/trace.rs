//! Line-oriented trace files.
//!
//! ```text
//! trace package=generic seed=0 stages=2
//! stage=0 case=init M=0 false=[] g=[] markers=[] u=… D=struct{dom=[]; S={}; In={}}
//! stage=1 case=O2 l=0 M=1 false=[] g=[0] markers=[0] u=… c=c8 D=struct{…}
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use super::{bad, Case, SModel, Snapshot, State};
use crate::error::{Error, Result};
use crate::fol::{parse_term_at, Term};
use crate::structures::FinStruct;

/// Header fields plus one snapshot per stage.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    pub meta: BTreeMap<String, String>,
    pub snapshots: Vec<Snapshot>,
}

fn list<T: fmt::Display>(items: impl IntoIterator<Item = T>) -> String {
    let parts: Vec<String> = items.into_iter().map(|x| x.to_string()).collect();
    format!("[{}]", parts.join(","))
}

impl fmt::Display for Snapshot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = &self.state;
        write!(f, "stage={} case={}", s.i, self.case.tag())?;
        match &self.case {
            Case::O1 { j } => write!(f, " j={j}")?,
            Case::O2 { orphans, .. } => write!(f, " l={orphans}")?,
            _ => {}
        }
        let falses = s.m.false_triples().iter().map(|(a, b, c)| format!("({a},{b},{c})"));
        write!(
            f,
            " M={} false={} g={} markers={} u={}",
            s.m.len(),
            list(falses),
            list(&s.g),
            list(&s.markers),
            self.u_fingerprint
        )?;
        if let Case::O2 { c, .. } = &self.case {
            write!(f, " c={c}")?;
        }
        write!(f, " D={}", s.d)
    }
}

impl fmt::Display for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("trace")?;
        for (k, v) in &self.meta {
            write!(f, " {k}={v}")?;
        }
        writeln!(f)?;
        for s in &self.snapshots {
            writeln!(f, "{s}")?;
        }
        Ok(())
    }
}

fn numbers<T: FromStr>(src: &str, at: usize) -> Result<Vec<T>> {
    let inner = src
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| bad(at, "expected a bracketed list"))?;
    if inner.is_empty() {
        return Ok(Vec::new());
    }
    inner
        .split(',')
        .map(|x| x.parse().map_err(|_| bad(at, format!("bad number `{x}`"))))
        .collect()
}

fn triples(src: &str, at: usize) -> Result<BTreeSet<(u32, u32, u32)>> {
    let inner = src
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| bad(at, "expected a bracketed list"))?;
    let mut out = BTreeSet::new();
    if inner.is_empty() {
        return Ok(out);
    }
    for t in inner.split("),") {
        let t = t.trim_start_matches('(').trim_end_matches(')');
        let v: Vec<u32> = numbers(&format!("[{t}]"), at)?;
        let [a, b, c] = v[..] else {
            return Err(bad(at, "expected a triple"));
        };
        out.insert((a, b, c));
    }
    Ok(out)
}

fn parse_snapshot(line: &str, offset: usize) -> Result<Snapshot> {
    let head_end = [" c=", " D="]
        .iter()
        .filter_map(|m| line.find(m))
        .min()
        .ok_or_else(|| bad(offset, "missing D="))?;
    let mut fields = BTreeMap::new();
    for tok in line[..head_end].split(' ') {
        let (k, v) = tok.split_once('=').ok_or_else(|| bad(offset, format!("bad field `{tok}`")))?;
        fields.insert(k, v);
    }
    let get = |k: &str| fields.get(k).copied().ok_or_else(|| bad(offset, format!("missing {k}=")));
    let num = |k: &str| -> Result<usize> { get(k)?.parse().map_err(|_| bad(offset, format!("bad {k}="))) };
    let mut rest = &line[head_end + 1..];
    let mut c = None;
    if let Some(r) = rest.strip_prefix("c=") {
        let mut pos = 0;
        match parse_term_at(r, &mut pos)? {
            Term::Const(k) => c = Some(k),
            Term::Var(_) => return Err(bad(offset, "c= needs a constant")),
        }
        rest = r[pos..].trim_start();
    }
    let d_src = rest.strip_prefix("D=").ok_or_else(|| bad(offset, "missing D="))?;
    let d = FinStruct::from_str(d_src)?;
    let case = match get("case")? {
        "init" => Case::Init,
        "O1" => Case::O1 { j: num("j")? },
        "O2" => Case::O2 {
            c: c.ok_or_else(|| bad(offset, "O2 needs c="))?,
            orphans: num("l")?,
        },
        "O3" => Case::O3,
        other => return Err(bad(offset, format!("unknown case `{other}`"))),
    };
    let m = SModel::new(num("M")? as u32, triples(get("false")?, offset)?)?;
    Ok(Snapshot {
        state: State {
            i: num("stage")?,
            m,
            d,
            g: numbers(get("g")?, offset)?,
            markers: numbers(get("markers")?, offset)?,
        },
        case,
        u_fingerprint: get("u")?.to_string(),
    })
}

impl FromStr for Trace {
    type Err = Error;

    fn from_str(src: &str) -> Result<Self> {
        let mut lines = src.lines();
        let header = lines.next().ok_or_else(|| bad(0, "empty trace"))?;
        let mut words = header.split(' ');
        if words.next() != Some("trace") {
            return Err(bad(0, "expected `trace` header"));
        }
        let mut meta = BTreeMap::new();
        for w in words.filter(|w| !w.is_empty()) {
            let (k, v) = w.split_once('=').ok_or_else(|| bad(0, format!("bad header field `{w}`")))?;
            meta.insert(k.to_string(), v.to_string());
        }
        let mut offset = header.len() + 1;
        let mut snapshots = Vec::new();
        for line in lines {
            if !line.is_empty() {
                snapshots.push(parse_snapshot(line, offset)?);
            }
            offset += line.len() + 1;
        }
        Ok(Trace { meta, snapshots })
    }
}
