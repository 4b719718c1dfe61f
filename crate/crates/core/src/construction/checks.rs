//! Local invariants of a single stage and global readouts over a trace.

use std::collections::BTreeSet;
use std::fmt;

use super::{find_extension, lit, Case, State, Trace};
use crate::approx::ApproxStage;
use crate::fol::{constants_up_to, Formula, HenkinConst, Term};
use crate::structures::e_const;

/// Violations of L1–L6 at one stage.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalReport {
    pub stage: usize,
    pub violations: Vec<String>,
}

impl LocalReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks L1–L6 for `s` against `U_i` (and against the previous stage for L1).
pub fn check_local(prev: Option<&State>, s: &State, u: &ApproxStage) -> LocalReport {
    let mut v = Vec::new();
    let n = s.d.len();
    if let Some(p) = prev {
        if !s.m.extends(&p.m) {
            v.push("L1: M does not extend the previous stage".to_string());
        }
    }
    if s.d.dom().iter().any(|a| a.as_const().is_none()) {
        v.push("L2: D has a non-constant atom".to_string());
    } else if !s.d.validate() {
        v.push("L2: D violates a ∈ b ⇒ S(a,b,c)".to_string());
    }
    let range: BTreeSet<u32> = s.g.iter().copied().collect();
    if s.g.len() != n || range.len() != n || s.g.iter().any(|&k| k >= s.m.len()) {
        v.push("L3: g is not an injection into dom(M)".to_string());
    } else {
        'outer: for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if s.d.s(i, j, k) != s.m.s(s.g[i], s.g[j], s.g[k]) {
                        v.push(format!("L3: S differs at D positions ({i},{j},{k})"));
                        break 'outer;
                    }
                }
            }
        }
    }
    if v.iter().any(|m| m.starts_with("L2")) {
        return LocalReport { stage: s.i, violations: v };
    }
    let positions_ok = s.markers.windows(2).all(|w| w[0] < w[1]) && s.markers.iter().all(|&p| p < n);
    if !positions_ok {
        v.push("L4: marker positions are not increasing".to_string());
    } else if !s.marker_consts().windows(2).all(|w| w[0] < w[1]) {
        v.push("L4: markers are not increasing in code order".to_string());
    }
    match s.d.diagram() {
        Ok(diag) => {
            if let Some(l) = diag.iter().find(|l| !u.contains(l)) {
                v.push(format!("L5: {l} is not in U"));
            }
        }
        Err(e) => v.push(format!("L5: {e}")),
    }
    if positions_ok {
        for a in (0..n).filter(|a| !s.markers.contains(a)) {
            let me = s.d.dom()[a].clone();
            match e_const(&s.d.prefix(a), &s.d.prefix(a + 1), &me) {
                Ok(e) if &e == s.const_at(a) => {}
                _ => v.push(format!("L6: D position {a} is not e(D↾≺a, D↾⪯a)")),
            }
        }
    }
    LocalReport { stage: s.i, violations: v }
}

/// How a fragment constant below the horizon relates to the stable part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum G3Status {
    /// `c = t(k)` literally.
    Named(u32),
    /// `c = t(k)` is in `U`.
    ProvablyEqual(u32),
    /// `U` does not yet decide enough about `c`.
    Pending,
    /// `U` decides an extension of the stable part by `c`, so the
    /// construction has not caught up with it.
    Unhandled,
}

/// The global properties over a trailing window.
#[derive(Clone, Debug)]
pub struct GlobalReport {
    pub window: usize,
    pub stages: usize,
    pub o1_events: Vec<usize>,
    pub markers_stable: bool,
    /// Length of the prefix of `D` unchanged (with `g`) over the window.
    pub stable_len: usize,
    pub g1: Vec<String>,
    pub g2: Vec<String>,
    pub g3: Vec<(HenkinConst, G3Status)>,
}

impl GlobalReport {
    pub fn g3_ok(&self) -> bool {
        self.g3.iter().all(|(_, s)| *s != G3Status::Unhandled)
    }

    pub fn ok(&self) -> bool {
        self.markers_stable && self.g1.is_empty() && self.g2.is_empty() && self.g3_ok()
    }
}

/// Stability of markers over the last `window` transitions, and G1–G3 on the
/// stable part of the last stage. `u` is `U` at the last stage.
pub fn check_global(trace: &Trace, window: usize, u: &ApproxStage) -> GlobalReport {
    let snaps = &trace.snapshots;
    let last = &snaps.last().expect("trace has the initial snapshot").state;
    let o1_events = snaps
        .iter()
        .filter(|s| matches!(s.case, Case::O1 { .. }))
        .map(|s| s.state.i)
        .collect();
    // a run shorter than the window is judged over all of its transitions
    let tail = &snaps[snaps.len().saturating_sub(window + 1)..];
    let markers = last.marker_consts();
    let markers_stable = tail.iter().all(|s| s.state.marker_consts() == markers);

    let mut stable_len = last.d.len();
    for s in tail {
        let st = &s.state;
        while stable_len > 0
            && !(st.d.len() >= stable_len
                && st.d.prefix(stable_len) == last.d.prefix(stable_len)
                && st.g[..stable_len] == last.g[..stable_len])
        {
            stable_len -= 1;
        }
    }
    let t: Vec<(u32, Term)> = (0..stable_len)
        .map(|p| (last.g[p], Term::Const(last.const_at(p).clone())))
        .collect();

    let mut g1 = Vec::new();
    let named: BTreeSet<u32> = t.iter().map(|(k, _)| *k).collect();
    for k in 0..last.m.len() {
        if !named.contains(&k) {
            g1.push(format!("natural {k} has no stable preimage"));
        }
    }

    let mut g2 = Vec::new();
    for (a, ta) in &t {
        for (b, tb) in &t {
            for (c, tc) in &t {
                let truth = last.m.s(*a, *b, *c);
                let atom = Formula::S(ta.clone(), tb.clone(), tc.clone());
                if !u.contains(&lit(atom.clone(), truth)) || u.contains(&lit(atom, !truth)) {
                    g2.push(format!("S({a},{b},{c}) in M is {truth} but U disagrees"));
                }
            }
        }
    }

    let stable = last.d.prefix(stable_len);
    let g3 = constants_up_to(last.i + 1)
        .into_iter()
        .map(|c| {
            let ct = Term::Const(c.clone());
            let status = if let Some((k, _)) = t.iter().find(|(_, tk)| *tk == ct) {
                G3Status::Named(*k)
            } else if let Some((k, _)) = t.iter().find(|(_, tk)| u.contains(&Formula::Eq(ct.clone(), tk.clone()))) {
                G3Status::ProvablyEqual(*k)
            } else if find_extension(&stable, &c, u).is_some() {
                G3Status::Unhandled
            } else {
                G3Status::Pending
            };
            (c, status)
        })
        .collect();

    GlobalReport {
        window,
        stages: last.i,
        o1_events,
        markers_stable,
        stable_len,
        g1,
        g2,
        g3,
    }
}

impl fmt::Display for LocalReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ok() {
            write!(f, "stage {}: L1-L6 ok", self.stage)
        } else {
            write!(f, "stage {}: {}", self.stage, self.violations.join("; "))
        }
    }
}

impl fmt::Display for GlobalReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = |ok: bool| if ok { "pass" } else { "FAIL" };
        writeln!(
            f,
            "stages {} window {} (observed {})",
            self.stages,
            self.window,
            self.window.min(self.stages)
        )?;
        writeln!(f, "O1 events at stages {:?}", self.o1_events)?;
        writeln!(f, "markers stable: {}", verdict(self.markers_stable))?;
        writeln!(f, "stable prefix of D: {} elements", self.stable_len)?;
        writeln!(f, "G1: {}", verdict(self.g1.is_empty()))?;
        for m in &self.g1 {
            writeln!(f, "  {m}")?;
        }
        writeln!(f, "G2: {}", verdict(self.g2.is_empty()))?;
        for m in &self.g2 {
            writeln!(f, "  {m}")?;
        }
        let pending = self.g3.iter().filter(|(_, s)| *s == G3Status::Pending).count();
        writeln!(
            f,
            "G3 (relative to the package fragment): {}, {} of {} constants pending",
            verdict(self.g3_ok()),
            pending,
            self.g3.len()
        )?;
        for (c, s) in &self.g3 {
            match s {
                G3Status::Named(k) => writeln!(f, "  {c} = t({k})")?,
                G3Status::ProvablyEqual(k) => writeln!(f, "  {c} = t({k}) in U")?,
                G3Status::Unhandled => writeln!(f, "  {c} has a decided extension but no preimage")?,
                G3Status::Pending => {}
            }
        }
        write!(f, "overall: {}", verdict(self.ok()))
    }
}
