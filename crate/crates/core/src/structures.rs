//! Finite S-structures and (S,∈)-structures over named atoms.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, ParseError, Result};
use crate::fol::{parse_term_at, Formula, HenkinConst, Term, HENKIN_VAR};
use crate::hf::{parse_set_at, HfSet};

/// A domain element: a Henkin constant or an HF-set label.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    Const(HenkinConst),
    Set(HfSet),
}

impl Atom {
    pub fn as_const(&self) -> Option<&HenkinConst> {
        match self {
            Atom::Const(c) => Some(c),
            Atom::Set(_) => None,
        }
    }

    pub fn as_set(&self) -> Option<&HfSet> {
        match self {
            Atom::Set(s) => Some(s),
            Atom::Const(_) => None,
        }
    }
}

impl From<HfSet> for Atom {
    fn from(s: HfSet) -> Self {
        Atom::Set(s)
    }
}

impl From<HenkinConst> for Atom {
    fn from(c: HenkinConst) -> Self {
        Atom::Const(c)
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Const(c) => write!(f, "{c}"),
            Atom::Set(s) => write!(f, "{s}"),
        }
    }
}

impl fmt::Debug for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Const(c) => write!(f, "{c:?}"),
            Atom::Set(s) => write!(f, "{s}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    /// Only the ternary `S` is interpreted.
    S,
    /// Both `S` and `∈`, subject to `a ∈ b ⇒ S(a,b,c)`.
    SIn,
}

/// A finite structure with an ordered domain. Relations are stored as
/// bitmaps over domain indices.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FinStruct {
    kind: Kind,
    dom: Vec<Atom>,
    s: Vec<bool>,
    mem: Vec<bool>,
}

impl FinStruct {
    /// A structure with the given domain and all relations empty.
    pub fn new(kind: Kind, dom: Vec<Atom>) -> Result<Self> {
        let distinct: BTreeSet<&Atom> = dom.iter().collect();
        if distinct.len() != dom.len() {
            return Err(Error::Precondition("domain atoms must be distinct".into()));
        }
        let n = dom.len();
        Ok(FinStruct {
            kind,
            dom,
            s: vec![false; n * n * n],
            mem: vec![false; n * n],
        })
    }

    pub fn empty(kind: Kind) -> Self {
        FinStruct {
            kind,
            dom: Vec::new(),
            s: Vec::new(),
            mem: Vec::new(),
        }
    }

    pub fn from_parts(
        kind: Kind,
        dom: Vec<Atom>,
        s: &[(Atom, Atom, Atom)],
        mem: &[(Atom, Atom)],
    ) -> Result<Self> {
        let mut out = Self::new(kind, dom)?;
        let idx = |a: &Atom, out: &FinStruct| {
            out.index_of(a)
                .ok_or_else(|| Error::Precondition(format!("atom {a:?} is not in the domain")))
        };
        for (a, b, c) in s {
            let (i, j, k) = (idx(a, &out)?, idx(b, &out)?, idx(c, &out)?);
            out.set_s(i, j, k, true);
        }
        if kind == Kind::S && !mem.is_empty() {
            return Err(Error::Precondition("S-only structures have no membership".into()));
        }
        for (a, b) in mem {
            let (i, j) = (idx(a, &out)?, idx(b, &out)?);
            out.set_mem(i, j, true);
        }
        Ok(out)
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.dom.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dom.is_empty()
    }

    pub fn dom(&self) -> &[Atom] {
        &self.dom
    }

    pub fn index_of(&self, a: &Atom) -> Option<usize> {
        self.dom.iter().position(|x| x == a)
    }

    fn s_idx(&self, i: usize, j: usize, k: usize) -> usize {
        let n = self.dom.len();
        (i * n + j) * n + k
    }

    pub fn s(&self, i: usize, j: usize, k: usize) -> bool {
        self.s[self.s_idx(i, j, k)]
    }

    pub fn set_s(&mut self, i: usize, j: usize, k: usize, val: bool) {
        let at = self.s_idx(i, j, k);
        self.s[at] = val;
    }

    pub fn mem(&self, i: usize, j: usize) -> bool {
        self.kind == Kind::SIn && self.mem[i * self.dom.len() + j]
    }

    pub fn set_mem(&mut self, i: usize, j: usize, val: bool) {
        let n = self.dom.len();
        self.mem[i * n + j] = val;
    }

    pub fn s_atoms(&self, a: &Atom, b: &Atom, c: &Atom) -> Option<bool> {
        Some(self.s(self.index_of(a)?, self.index_of(b)?, self.index_of(c)?))
    }

    pub fn mem_atoms(&self, a: &Atom, b: &Atom) -> Option<bool> {
        Some(self.mem(self.index_of(a)?, self.index_of(b)?))
    }

    pub fn s_triples(&self) -> Vec<(usize, usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if self.s(i, j, k) {
                        out.push((i, j, k));
                    }
                }
            }
        }
        out
    }

    pub fn mem_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if self.mem(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// The (S,∈) constraint; S-only structures always pass.
    pub fn validate(&self) -> bool {
        if self.kind == Kind::S {
            return true;
        }
        let n = self.len();
        self.mem_pairs()
            .into_iter()
            .all(|(i, j)| (0..n).all(|k| self.s(i, j, k)))
    }

    /// The substructure on the first `m` domain elements.
    pub fn prefix(&self, m: usize) -> FinStruct {
        self.induced(&(0..m.min(self.len())).collect::<Vec<_>>())
    }

    /// The substructure on the given domain indices, in that order.
    pub fn induced(&self, idx: &[usize]) -> FinStruct {
        let dom: Vec<Atom> = idx.iter().map(|&i| self.dom[i].clone()).collect();
        let mut out = FinStruct::new(self.kind, dom).expect("indices are distinct");
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                if self.kind == Kind::SIn {
                    out.set_mem(a, b, self.mem(i, j));
                }
                for (c, &k) in idx.iter().enumerate() {
                    out.set_s(a, b, c, self.s(i, j, k));
                }
            }
        }
        out
    }

    /// Appends `atom` with all relations involving it false.
    pub fn push_atom(&mut self, atom: Atom) -> Result<()> {
        if self.index_of(&atom).is_some() {
            return Err(Error::Precondition(format!("atom {atom:?} already present")));
        }
        let old = self.clone();
        let mut dom = old.dom.clone();
        dom.push(atom);
        *self = FinStruct::new(self.kind, dom)?;
        let n = old.len();
        for i in 0..n {
            for j in 0..n {
                if old.kind == Kind::SIn {
                    self.set_mem(i, j, old.mem(i, j));
                }
                for k in 0..n {
                    self.set_s(i, j, k, old.s(i, j, k));
                }
            }
        }
        Ok(())
    }

    /// Renames atoms; `f` must be injective on the domain.
    pub fn rename(&self, f: impl Fn(&Atom) -> Atom) -> Result<FinStruct> {
        let mut out = FinStruct::new(self.kind, self.dom.iter().map(f).collect())?;
        out.s = self.s.clone();
        out.mem = self.mem.clone();
        Ok(out)
    }

    /// Whether every atom is an HF set and `∈` agrees with real membership.
    pub fn is_in_absolute(&self) -> bool {
        let Some(sets) = self.dom.iter().map(Atom::as_set).collect::<Option<Vec<_>>>() else {
            return false;
        };
        if self.kind != Kind::SIn {
            return false;
        }
        let n = self.len();
        (0..n).all(|i| (0..n).all(|j| self.mem(i, j) == sets[j].contains(sets[i])))
    }

    /// The atomic diagram with atom `i` named by `names[i]`, in canonical
    /// (sorted) order.
    pub fn diagram_with(&self, names: &[Term]) -> Vec<Formula> {
        let n = self.len();
        let mut out = Vec::with_capacity(n * n * n + n * n + n * n / 2);
        let lit = |atom: Formula, truth: bool| if truth { atom } else { Formula::not(atom) };
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let atom = Formula::S(names[i].clone(), names[j].clone(), names[k].clone());
                    out.push(lit(atom, self.s(i, j, k)));
                }
                if self.kind == Kind::SIn {
                    let atom = Formula::Mem(names[i].clone(), names[j].clone());
                    out.push(lit(atom, self.mem(i, j)));
                }
                if i < j {
                    let (a, b) = if names[i] <= names[j] { (i, j) } else { (j, i) };
                    out.push(Formula::not(Formula::Eq(names[a].clone(), names[b].clone())));
                }
            }
        }
        out.sort();
        out
    }

    /// `Diag(A)`: fails if some atom is an HF-set label.
    pub fn diagram(&self) -> Result<Vec<Formula>> {
        let names = self.const_names()?;
        Ok(self.diagram_with(&names))
    }

    fn const_names(&self) -> Result<Vec<Term>> {
        self.dom
            .iter()
            .map(|a| match a {
                Atom::Const(c) => Ok(Term::Const(c.clone())),
                Atom::Set(s) => Err(Error::Precondition(format!(
                    "diagram needs constants, found set label {s}"
                ))),
            })
            .collect()
    }

    /// Rebuilds a structure from a complete diagram over constants.
    pub fn from_diagram(kind: Kind, lits: &[Formula]) -> Result<FinStruct> {
        let mut consts = BTreeSet::new();
        for l in lits {
            if !l.is_literal() {
                return Err(Error::Precondition(format!("{l} is not a literal")));
            }
            for t in atom_of(l).atom_terms() {
                match t {
                    Term::Const(c) => {
                        consts.insert(c.clone());
                    }
                    Term::Var(v) => {
                        return Err(Error::Precondition(format!("variable {v} in a diagram")))
                    }
                }
            }
        }
        let dom: Vec<Atom> = consts.into_iter().map(Atom::Const).collect();
        let mut out = FinStruct::new(kind, dom)?;
        let m = out.len();
        let (mut seen_s, mut seen_mem, mut seen_neq) = (0usize, 0usize, 0usize);
        let idx = |t: &Term, out: &FinStruct| match t {
            Term::Const(c) => out.index_of(&Atom::Const(c.clone())).expect("collected"),
            Term::Var(_) => unreachable!(),
        };
        for l in lits {
            let truth = !matches!(l, Formula::Not(_));
            match atom_of(l) {
                Formula::S(a, b, c) => {
                    let (i, j, k) = (idx(a, &out), idx(b, &out), idx(c, &out));
                    out.set_s(i, j, k, truth);
                    seen_s += 1;
                }
                Formula::Mem(a, b) if kind == Kind::SIn => {
                    let (i, j) = (idx(a, &out), idx(b, &out));
                    out.set_mem(i, j, truth);
                    seen_mem += 1;
                }
                Formula::Eq(a, b) if !truth && a != b => seen_neq += 1,
                other => {
                    return Err(Error::Precondition(format!("unexpected diagram literal {other}")))
                }
            }
        }
        let want_mem = if kind == Kind::SIn { m * m } else { 0 };
        let expected = out.diagram()?;
        let mut given: Vec<Formula> = lits
            .iter()
            .map(|l| match l {
                Formula::Not(a) => match &**a {
                    Formula::Eq(x, y) if x > y => Formula::not(Formula::Eq(y.clone(), x.clone())),
                    _ => l.clone(),
                },
                _ => l.clone(),
            })
            .collect();
        given.sort();
        given.dedup();
        if seen_s != m * m * m
            || seen_mem != want_mem
            || seen_neq != m * m.saturating_sub(1) / 2
            || given != expected
        {
            return Err(Error::Precondition("literals do not form a complete diagram".into()));
        }
        Ok(out)
    }
}

fn atom_of(l: &Formula) -> &Formula {
    match l {
        Formula::Not(a) => a,
        a => a,
    }
}

/// A finite injective map between atoms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtomMap {
    pairs: Vec<(Atom, Atom)>,
}

impl AtomMap {
    pub fn new(pairs: Vec<(Atom, Atom)>) -> Result<Self> {
        let src: BTreeSet<&Atom> = pairs.iter().map(|(a, _)| a).collect();
        let dst: BTreeSet<&Atom> = pairs.iter().map(|(_, b)| b).collect();
        if src.len() != pairs.len() || dst.len() != pairs.len() {
            return Err(Error::Precondition("atom map must be an injective function".into()));
        }
        Ok(AtomMap { pairs })
    }

    pub fn identity(dom: &[Atom]) -> Self {
        AtomMap {
            pairs: dom.iter().map(|a| (a.clone(), a.clone())).collect(),
        }
    }

    pub fn get(&self, a: &Atom) -> Option<&Atom> {
        self.pairs.iter().find(|(x, _)| x == a).map(|(_, y)| y)
    }

    pub fn compose(&self, then: &AtomMap) -> Option<AtomMap> {
        let pairs = self
            .pairs
            .iter()
            .map(|(a, b)| Some((a.clone(), then.get(b)?.clone())))
            .collect::<Option<Vec<_>>>()?;
        AtomMap::new(pairs).ok()
    }
}

fn image(f: &AtomMap, a: &FinStruct, b: &FinStruct) -> Option<Vec<usize>> {
    a.dom()
        .iter()
        .map(|x| f.get(x).and_then(|y| b.index_of(y)))
        .collect()
}

/// `A ⊨ S(a,b,c) ⇔ B ⊨ S(f(a),f(b),f(c))` for all triples of `A`.
pub fn is_s_embedding(f: &AtomMap, a: &FinStruct, b: &FinStruct) -> bool {
    let Some(img) = image(f, a, b) else {
        return false;
    };
    let n = a.len();
    (0..n).all(|i| (0..n).all(|j| (0..n).all(|k| a.s(i, j, k) == b.s(img[i], img[j], img[k]))))
}

/// [`is_s_embedding`] plus the same clause for `∈`.
pub fn is_sin_embedding(f: &AtomMap, a: &FinStruct, b: &FinStruct) -> bool {
    let Some(img) = image(f, a, b) else {
        return false;
    };
    let n = a.len();
    is_s_embedding(f, a, b)
        && (0..n).all(|i| (0..n).all(|j| a.mem(i, j) == b.mem(img[i], img[j])))
}

/// `dom(A) ⊆ dom(B)` and the inclusion is an embedding of the right kind.
pub fn extends(a: &FinStruct, b: &FinStruct) -> bool {
    let id = AtomMap::identity(a.dom());
    match a.kind() {
        Kind::S => is_s_embedding(&id, a, b),
        Kind::SIn => is_sin_embedding(&id, a, b),
    }
}

/// `A ⋖_v B`: `B` extends `A` by exactly `v`, with no `∈` to or from `v`.
pub fn is_neutral_extension(a: &FinStruct, b: &FinStruct, v: &Atom) -> bool {
    if b.len() != a.len() + 1 || a.index_of(v).is_some() || a.kind() != b.kind() {
        return false;
    }
    let Some(vi) = b.index_of(v) else {
        return false;
    };
    extends(a, b) && (0..b.len()).all(|x| !b.mem(x, vi) && !b.mem(vi, x))
}

/// All valid `B` with `A ⋖_v B`, with `v` appended last. The free triples
/// (those mentioning `v` and not forced by a membership) are ordered by
/// index triple and the pattern counts up in binary, least significant bit on
/// the last free triple.
pub struct NeutralExtensions {
    base: FinStruct,
    free: Vec<(usize, usize, usize)>,
    next: Option<u128>,
}

impl Iterator for NeutralExtensions {
    type Item = FinStruct;

    fn next(&mut self) -> Option<FinStruct> {
        let pattern = self.next?;
        let m = self.free.len();
        self.next = match pattern.checked_add(1) {
            Some(p) if m < 128 && p < 1u128 << m => Some(p),
            _ => None,
        };
        let mut b = self.base.clone();
        for (pos, &(i, j, k)) in self.free.iter().enumerate() {
            b.set_s(i, j, k, pattern >> (m - 1 - pos) & 1 == 1);
        }
        Some(b)
    }
}

pub fn neutral_extensions(a: &FinStruct, v: Atom) -> Result<NeutralExtensions> {
    if a.index_of(&v).is_some() {
        return Err(Error::Precondition(format!("{v:?} is already in the domain")));
    }
    if !a.validate() {
        return Err(Error::Precondition("base structure is not valid".into()));
    }
    let mut base = a.clone();
    base.push_atom(v)?;
    let n = a.len();
    let mut free = Vec::new();
    for i in 0..=n {
        for j in 0..=n {
            for k in 0..=n {
                if i < n && j < n && k < n {
                    continue;
                }
                if base.mem(i, j) {
                    base.set_s(i, j, k, true);
                } else {
                    free.push((i, j, k));
                }
            }
        }
    }
    if free.len() >= 128 {
        return Err(Error::Budget(format!("2^{} neutral extensions", free.len())));
    }
    Ok(NeutralExtensions {
        base,
        free,
        next: Some(0),
    })
}

/// The (S,∈)-structure on `sets` with real membership and `S` from `oracle`.
pub fn induced_structure(
    sets: &[HfSet],
    oracle: impl Fn(&HfSet, &HfSet, &HfSet) -> bool,
) -> Result<FinStruct> {
    let mut out = FinStruct::new(Kind::SIn, sets.iter().cloned().map(Atom::Set).collect())?;
    let n = sets.len();
    for i in 0..n {
        for j in 0..n {
            out.set_mem(i, j, sets[j].contains(&sets[i]));
            for k in 0..n {
                out.set_s(i, j, k, oracle(&sets[i], &sets[j], &sets[k]));
            }
        }
    }
    Ok(out)
}

// ---------- e-constants ----------

/// How an `e`-constant was built: `e = e(A, B)` with `A ⋖_v B`, where the new
/// atom of `B` is named by `e` itself.
#[derive(Clone, Debug)]
pub struct Provenance {
    pub a: FinStruct,
    pub b: FinStruct,
}

/// `e(A, B)`: the Henkin constant of `⋀Diag(A) → ⋀Diag(B)[v ↦ x]`.
pub fn e_const(a: &FinStruct, b: &FinStruct, v: &Atom) -> Result<HenkinConst> {
    if !is_neutral_extension(a, b, v) {
        return Err(Error::Precondition("e(A,B) needs A ⋖_v B".into()));
    }
    let ante = Formula::conj(a.diagram()?);
    let vi = b.index_of(v).expect("checked");
    let names: Vec<Term> = b
        .dom()
        .iter()
        .enumerate()
        .map(|(i, atom)| {
            if i == vi {
                return Ok(Term::var(HENKIN_VAR));
            }
            match atom {
                Atom::Const(c) => Ok(Term::Const(c.clone())),
                Atom::Set(s) => Err(Error::Precondition(format!(
                    "diagram needs constants, found set label {s}"
                ))),
            }
        })
        .collect::<Result<_>>()?;
    let cons = Formula::conj(b.diagram_with(&names));
    HenkinConst::new(Formula::implies(ante, cons))
}

/// Recovers `(A, B)` if `c` is of the form `e(A, B)`. The result is cached on
/// the constant.
pub fn provenance(c: &HenkinConst) -> Option<Arc<Provenance>> {
    c.provenance_cell()
        .get_or_init(|| decode_provenance(c).map(Arc::new))
        .clone()
}

fn decode_provenance(c: &HenkinConst) -> Option<Provenance> {
    let Formula::Implies(ante, cons) = c.formula() else {
        return None;
    };
    let ante_lits: Vec<Formula> = ante.conjuncts().into_iter().cloned().collect();
    let a = FinStruct::from_diagram(Kind::SIn, &ante_lits).ok()?;
    let me = Term::Const(c.clone());
    let cons_lits: Vec<Formula> = cons
        .conjuncts()
        .into_iter()
        .map(|l| l.subst1(HENKIN_VAR, &me))
        .collect();
    // the consequent must mention x, otherwise c would occur in its own code
    if !cons.free_vars().contains(HENKIN_VAR) {
        return None;
    }
    let b = FinStruct::from_diagram(Kind::SIn, &cons_lits).ok()?;
    // place v last and keep A's order
    let v = Atom::Const(c.clone());
    let mut order: Vec<usize> = a.dom().iter().map(|x| b.index_of(x)).collect::<Option<_>>()?;
    order.push(b.index_of(&v)?);
    let b = b.induced(&order);
    if !b.validate() || !a.validate() {
        return None;
    }
    let again = e_const(&a, &b, &v).ok()?;
    (again == *c).then_some(Provenance { a, b })
}

// ---------- literal syntax ----------

impl fmt::Display for FinStruct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = &self.dom;
        f.write_str("struct{dom=[")?;
        for (i, a) in d.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str("]; S={")?;
        for (n, (i, j, k)) in self.s_triples().into_iter().enumerate() {
            if n > 0 {
                f.write_str(",")?;
            }
            write!(f, "({},{},{})", d[i], d[j], d[k])?;
        }
        f.write_str("}")?;
        if self.kind == Kind::SIn {
            f.write_str("; In={")?;
            for (n, (i, j)) in self.mem_pairs().into_iter().enumerate() {
                if n > 0 {
                    f.write_str(",")?;
                }
                write!(f, "({},{})", d[i], d[j])?;
            }
            f.write_str("}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for FinStruct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

struct LitParser<'a> {
    src: &'a str,
    pos: usize,
}

impl LitParser<'_> {
    fn ws(&mut self) {
        while self.src[self.pos..].starts_with(|c: char| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.ws();
        if self.src[self.pos..].starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> std::result::Result<(), ParseError> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(ParseError::new(self.pos, format!("expected `{tok}`")))
        }
    }

    fn atom(&mut self) -> std::result::Result<Atom, ParseError> {
        self.ws();
        if self.src[self.pos..].starts_with('{') {
            return parse_set_at(self.src, &mut self.pos).map(Atom::Set);
        }
        let start = self.pos;
        match parse_term_at(self.src, &mut self.pos)? {
            Term::Const(c) => Ok(Atom::Const(c)),
            Term::Var(v) => Err(ParseError::new(start, format!("`{v}` is not an atom"))),
        }
    }

    fn list<T>(
        &mut self,
        open: &str,
        close: &str,
        mut item: impl FnMut(&mut Self) -> std::result::Result<T, ParseError>,
    ) -> std::result::Result<Vec<T>, ParseError> {
        self.expect(open)?;
        let mut out = Vec::new();
        if self.eat(close) {
            return Ok(out);
        }
        loop {
            out.push(item(self)?);
            if self.eat(close) {
                return Ok(out);
            }
            self.expect(",")?;
        }
    }

    fn tuple(&mut self, arity: usize) -> std::result::Result<Vec<Atom>, ParseError> {
        let at = self.pos;
        let t = self.list("(", ")", |p| p.atom())?;
        if t.len() != arity {
            return Err(ParseError::new(at, format!("expected a {arity}-tuple")));
        }
        Ok(t)
    }
}

impl FromStr for FinStruct {
    type Err = Error;

    /// Parses `struct{dom=[..]; S={(a,b,c),..}; In={(a,b),..}}`; without
    /// the `In` part the structure is S-only.
    fn from_str(src: &str) -> Result<Self> {
        let mut p = LitParser { src, pos: 0 };
        p.expect("struct")?;
        p.expect("{")?;
        p.expect("dom")?;
        p.expect("=")?;
        let dom = p.list("[", "]", |p| p.atom())?;
        p.expect(";")?;
        p.expect("S")?;
        p.expect("=")?;
        let s = p.list("{", "}", |p| p.tuple(3))?;
        let mut kind = Kind::S;
        let mut mem = Vec::new();
        if p.eat(";") {
            p.expect("In")?;
            p.expect("=")?;
            mem = p.list("{", "}", |p| p.tuple(2))?;
            kind = Kind::SIn;
        }
        p.expect("}")?;
        p.ws();
        if p.pos != src.len() {
            return Err(ParseError::new(p.pos, "trailing input").into());
        }
        let s: Vec<_> = s.into_iter().map(|t| (t[0].clone(), t[1].clone(), t[2].clone())).collect();
        let mem: Vec<_> = mem.into_iter().map(|t| (t[0].clone(), t[1].clone())).collect();
        FinStruct::from_parts(kind, dom, &s, &mem)
    }
}

/// Every (S,∈)-structure on `dom` (in binary-counter order over membership
/// then S bits), skipping invalid ones.
pub fn all_structures(dom: &[Atom]) -> Result<Vec<FinStruct>> {
    let n = dom.len();
    let bits = n * n + n * n * n;
    if bits > 20 {
        return Err(Error::Budget(format!("2^{bits} candidate structures")));
    }
    let mut out = Vec::new();
    for pattern in 0u32..1 << bits {
        let mut st = FinStruct::new(Kind::SIn, dom.to_vec())?;
        let mut b = 0;
        for i in 0..n {
            for j in 0..n {
                st.set_mem(i, j, pattern >> b & 1 == 1);
                b += 1;
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    st.set_s(i, j, k, pattern >> b & 1 == 1);
                    b += 1;
                }
            }
        }
        if st.validate() {
            out.push(st);
        }
    }
    Ok(out)
}
