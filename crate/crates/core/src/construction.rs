//! The staged model construction: a computable S-structure `M` on an initial
//! segment of the naturals, together with a finite (S,∈)-structure `D` on
//! Henkin constants, an S-embedding `g: D → M`, and movable markers.
//!
//! The order `≺` on `dom(D)` is the order of the domain vector. Markers are
//! stored as positions into it.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::approx::{u_stage, ApproxStage, TheoryPackage};
use crate::error::{Error, ParseError, Result};
use crate::fol::{constants_up_to, Formula, HenkinConst, Term};
use crate::hf::HfSet;
use crate::structures::{e_const, Atom, FinStruct, Kind};

mod checks;
mod trace;

pub use checks::{check_global, check_local, G3Status, GlobalReport, LocalReport};
pub use trace::Trace;

/// An S-structure on `{0, …, size-1}`. Triples are true unless listed.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SModel {
    size: u32,
    false_triples: BTreeSet<(u32, u32, u32)>,
}

impl SModel {
    pub fn new(size: u32, false_triples: BTreeSet<(u32, u32, u32)>) -> Result<Self> {
        if false_triples.iter().any(|&(a, b, c)| a.max(b).max(c) >= size) {
            return Err(Error::Precondition("triple outside the domain".into()));
        }
        Ok(SModel {
            size,
            false_triples,
        })
    }

    pub fn len(&self) -> u32 {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn s(&self, a: u32, b: u32, c: u32) -> bool {
        !self.false_triples.contains(&(a, b, c))
    }

    pub fn false_triples(&self) -> &BTreeSet<(u32, u32, u32)> {
        &self.false_triples
    }

    fn set(&mut self, a: u32, b: u32, c: u32, val: bool) {
        if val {
            self.false_triples.remove(&(a, b, c));
        } else {
            self.false_triples.insert((a, b, c));
        }
    }

    /// Adds one natural; every new triple defaults to true.
    fn grow(&mut self) -> u32 {
        self.size += 1;
        self.size - 1
    }

    /// Whether `self` agrees with `older` on all of `older`'s triples.
    pub fn extends(&self, older: &SModel) -> bool {
        self.size >= older.size
            && older.false_triples.iter().all(|t| self.false_triples.contains(t))
            && self
                .false_triples
                .iter()
                .filter(|&&(a, b, c)| a.max(b).max(c) < older.size)
                .all(|t| older.false_triples.contains(t))
    }
}

/// One stage of the construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct State {
    pub i: usize,
    pub m: SModel,
    pub d: FinStruct,
    /// `g(dom(D)[k]) = g[k]`.
    pub g: Vec<u32>,
    /// Positions of `p_0 ≺ … ≺ p_{n-1}` in `dom(D)`.
    pub markers: Vec<usize>,
}

impl State {
    pub fn init() -> Self {
        State {
            i: 0,
            m: SModel::default(),
            d: FinStruct::empty(Kind::SIn),
            g: Vec::new(),
            markers: Vec::new(),
        }
    }

    pub fn const_at(&self, pos: usize) -> &HenkinConst {
        self.d.dom()[pos].as_const().expect("D holds constants")
    }

    pub fn marker_consts(&self) -> Vec<HenkinConst> {
        self.markers.iter().map(|&p| self.const_at(p).clone()).collect()
    }

    /// Position bounding `D↾≺p_j`, where `p_n = ∞` bounds all of `D`.
    fn bound(&self, j: usize) -> usize {
        self.markers.get(j).copied().unwrap_or(self.d.len())
    }
}

/// What a stage did.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Case {
    Init,
    O1 { j: usize },
    O2 { c: HenkinConst, orphans: usize },
    O3,
}

impl Case {
    pub fn tag(&self) -> &'static str {
        match self {
            Case::Init => "init",
            Case::O1 { .. } => "O1",
            Case::O2 { .. } => "O2",
            Case::O3 => "O3",
        }
    }
}

/// Result of [`classify`].
#[derive(Clone, Debug)]
pub enum Classified {
    O1 { j: usize },
    O2 { c: HenkinConst, dot_d: FinStruct },
    O3,
}

fn diagram_in(st: &FinStruct, u: &ApproxStage) -> bool {
    st.diagram().map_or(false, |d| d.iter().all(|l| u.contains(l)))
}

fn lit(atom: Formula, truth: bool) -> Formula {
    if truth {
        atom
    } else {
        Formula::not(atom)
    }
}

/// The canonical `Ḋ` extending `base` by `q` with `Diag(Ḋ) ⊆ U`. Membership
/// pairs are chosen first (false before true, depth first), then each `S`
/// triple takes the first polarity found in `U`.
pub fn find_extension(base: &FinStruct, q: &HenkinConst, u: &ApproxStage) -> Option<FinStruct> {
    let qa = Atom::Const(q.clone());
    if base.index_of(&qa).is_some() {
        return None;
    }
    let names: Vec<Term> = base
        .dom()
        .iter()
        .map(|a| a.as_const().map(|c| Term::Const(c.clone())))
        .collect::<Option<_>>()?;
    let qt = Term::Const(q.clone());
    if !names
        .iter()
        .all(|a| u.contains(&Formula::not(Formula::Eq(a.clone(), qt.clone()))))
    {
        return None;
    }
    let mut b = base.clone();
    b.push_atom(qa).ok()?;
    let mut all = names;
    all.push(qt);
    let n = base.len();
    let pairs: Vec<(usize, usize)> = (0..=n)
        .flat_map(|i| (0..=n).map(move |j| (i, j)))
        .filter(|&(i, j)| i.max(j) == n)
        .collect();
    choose_mem(&mut b, &all, &pairs, 0, u)
}

fn choose_mem(
    b: &mut FinStruct,
    names: &[Term],
    pairs: &[(usize, usize)],
    at: usize,
    u: &ApproxStage,
) -> Option<FinStruct> {
    let Some(&(i, j)) = pairs.get(at) else {
        return fill_s(b.clone(), names, u);
    };
    for val in [false, true] {
        if u.contains(&lit(Formula::Mem(names[i].clone(), names[j].clone()), val)) {
            b.set_mem(i, j, val);
            if let Some(found) = choose_mem(b, names, pairs, at + 1, u) {
                return Some(found);
            }
        }
    }
    b.set_mem(i, j, false);
    None
}

fn fill_s(mut b: FinStruct, names: &[Term], u: &ApproxStage) -> Option<FinStruct> {
    let n = b.len() - 1;
    for i in 0..=n {
        for j in 0..=n {
            for k in 0..=n {
                if i.max(j).max(k) != n {
                    continue;
                }
                let options: &[bool] = if b.mem(i, j) { &[true] } else { &[false, true] };
                let atom = Formula::S(names[i].clone(), names[j].clone(), names[k].clone());
                let val = options.iter().copied().find(|&v| u.contains(&lit(atom.clone(), v)))?;
                b.set_s(i, j, k, val);
            }
        }
    }
    b.validate().then_some(b)
}

/// The case split for the transition from `state` using `U_{i+1}`.
pub fn classify(state: &State, next: &ApproxStage) -> Classified {
    let n = state.markers.len();
    let candidates = constants_up_to(state.i + 1);
    for j in 0..n {
        if !diagram_in(&state.d.prefix(state.bound(j + 1)), next) {
            return Classified::O1 { j };
        }
        let prefix = state.d.prefix(state.bound(j));
        let p = state.const_at(state.markers[j]);
        let smaller = candidates.iter().take_while(|q| *q < p);
        for q in smaller {
            if find_extension(&prefix, q, next).is_some() {
                return Classified::O1 { j };
            }
        }
    }
    for c in &candidates {
        if let Some(dot_d) = find_extension(&state.d, c, next) {
            return Classified::O2 {
                c: c.clone(),
                dot_d,
            };
        }
    }
    Classified::O3
}

/// Truncates to `D↾≺p_j`.
pub fn apply_o1(state: &State, j: usize) -> State {
    let pos = state.bound(j);
    let mut g = state.g.clone();
    g.truncate(pos);
    let mut markers = state.markers.clone();
    markers.truncate(j);
    State {
        i: state.i + 1,
        m: state.m.clone(),
        d: state.d.prefix(pos),
        g,
        markers,
    }
}

/// Adds `c` with [`Classified::O2`]'s `Ḋ`, then refills every natural that
/// lost its preimage with a fresh `e`-constant, in ascending order.
pub fn apply_o2(state: &State, c: &HenkinConst, dot_d: &FinStruct) -> Result<(State, usize)> {
    let old = state.d.len();
    if dot_d.len() != old + 1 || dot_d.dom()[old] != Atom::Const(c.clone()) {
        return Err(Error::Precondition("Ḋ must extend D by c".into()));
    }
    let mut m = state.m.clone();
    let old_size = m.len();
    let fresh = m.grow();
    let mut h = state.g.clone();
    h.push(fresh);
    for i in 0..=old {
        for j in 0..=old {
            for k in 0..=old {
                let (a, b, cc) = (h[i], h[j], h[k]);
                let val = dot_d.s(i, j, k);
                if a.max(b).max(cc) < old_size {
                    if m.s(a, b, cc) != val {
                        return Err(Error::Internal(format!(
                            "S({a},{b},{cc}) is fixed in M but Ḋ disagrees"
                        )));
                    }
                } else {
                    m.set(a, b, cc, val);
                }
            }
        }
    }
    let used: BTreeSet<u32> = h.iter().copied().collect();
    let orphans: Vec<u32> = (0..old_size).filter(|k| !used.contains(k)).collect();
    let v = Atom::Set(HfSet::empty());
    let mut e = dot_d.clone();
    for &k in &orphans {
        let mut dot_e = e.clone();
        dot_e.push_atom(v.clone())?;
        let n = e.len();
        h.push(k);
        for i in 0..=n {
            for j in 0..=n {
                for kk in 0..=n {
                    if i.max(j).max(kk) == n {
                        dot_e.set_s(i, j, kk, m.s(h[i], h[j], h[kk]));
                    }
                }
            }
        }
        if !dot_e.validate() {
            return Err(Error::Internal(format!(
                "the neutral extension read off M at {k} violates a ∈ b ⇒ S(a,b,c)"
            )));
        }
        let ec = e_const(&e, &dot_e, &v)?;
        e = dot_e.rename(|a| if *a == v { Atom::Const(ec.clone()) } else { a.clone() })?;
    }
    let mut markers = state.markers.clone();
    markers.push(old);
    Ok((
        State {
            i: state.i + 1,
            m,
            d: e,
            g: h,
            markers,
        },
        orphans.len(),
    ))
}

/// One transition using `U_{i+1}`.
pub fn step(state: &State, next: &ApproxStage) -> Result<(State, Case)> {
    Ok(match classify(state, next) {
        Classified::O1 { j } => (apply_o1(state, j), Case::O1 { j }),
        Classified::O2 { c, dot_d } => {
            let (s, orphans) = apply_o2(state, &c, &dot_d)?;
            (s, Case::O2 { c, orphans })
        }
        Classified::O3 => {
            let mut s = state.clone();
            s.i += 1;
            (s, Case::O3)
        }
    })
}

/// A stage as recorded in a trace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Snapshot {
    pub state: State,
    pub case: Case,
    pub u_fingerprint: String,
}

/// A finished (or aborted) run.
pub struct Run {
    pub trace: Trace,
    pub local: Vec<LocalReport>,
    /// `U` at the last recorded stage.
    pub last_u: ApproxStage,
    pub error: Option<Error>,
}

/// Runs `stages` transitions from the empty state, checking L1–L6 after
/// each one. `meta` is copied into the trace header.
pub fn run(pkg: &dyn TheoryPackage, stages: usize, meta: BTreeMap<String, String>) -> Run {
    let mut u = u_stage(pkg, 0);
    let mut state = State::init();
    let mut trace = Trace {
        meta,
        snapshots: vec![Snapshot {
            state: state.clone(),
            case: Case::Init,
            u_fingerprint: u.fingerprint(),
        }],
    };
    let mut local = vec![check_local(None, &state, &u)];
    let mut error = None;
    for i in 0..stages {
        let next = u_stage(pkg, i + 1);
        match step(&state, &next) {
            Ok((s, case)) => {
                local.push(check_local(Some(&state), &s, &next));
                trace.snapshots.push(Snapshot {
                    state: s.clone(),
                    case,
                    u_fingerprint: next.fingerprint(),
                });
                state = s;
                u = next;
            }
            Err(e) => {
                error = Some(e);
                break;
            }
        }
    }
    Run {
        trace,
        local,
        last_u: u,
        error,
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Case::O1 { j } => write!(f, "O1 j={j}"),
            Case::O2 { c, orphans } => write!(f, "O2 c={c} l={orphans}"),
            other => f.write_str(other.tag()),
        }
    }
}

pub(crate) fn bad(pos: usize, msg: impl Into<String>) -> Error {
    ParseError::new(pos, msg).into()
}
