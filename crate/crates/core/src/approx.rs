//! Finite-horizon approximations `u_i` to a complete theory and their
//! closures `U_i` under the diagram rule for `e`-constants.
//!
//! A [`TheoryPackage`] supplies the enumerated sentences `φ_0, φ_1, …` and a
//! budgeted refutation search. `K_{0,j} = ∅`, `K_{t+1,j}` adds `φ_t` unless
//! `K_{t,j} ∪ {φ_t}` is refuted within `j` steps, and `u_i = K_{i,i}`.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::sync::{Arc, Mutex};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use crate::fol::{constants_up_to, parse, Formula, HenkinConst, Term};
use crate::hf::{v_level, HfSet, DEFAULT_LEVEL_BUDGET};
use crate::srel::decide_s;
use crate::structures::{provenance, Atom};

/// A theory together with an enumeration of the sentences to be decided.
pub trait TheoryPackage: Send + Sync {
    fn name(&self) -> &str;

    /// Axioms of the theory (informational; refutation has them built in).
    fn axioms(&self) -> Vec<Formula>;

    /// The `t`-th enumerated sentence.
    fn sentence(&self, t: usize) -> Formula;

    /// Whether a contradiction in `gamma` plus the axioms is found within
    /// `steps` steps. Monotone in `steps` and sound.
    fn refute_within(&self, gamma: &[Formula], steps: usize) -> bool;

    /// Whether refutation is complete on the enumerated fragment once the
    /// budget reaches the number of sentences involved.
    fn is_exact(&self) -> bool;

    /// Hook for fixtures that tamper with the `u`-sequence.
    fn adjust_u(&self, _i: usize, u: Vec<Formula>) -> Vec<Formula> {
        u
    }
}

// ---------- ground literal fragment ----------

/// Ground literals over `h_0, h_1, …` (Henkin constants in code order).
/// For each `n` the atoms that mention `h_n` and earlier constants are listed:
/// `S` atoms in index order with a seeded polarity order, then `∈` atoms and
/// `=` atoms with the negative literal first.
struct LiteralFragment {
    seed: u64,
    cache: Mutex<(usize, Vec<Formula>)>,
}

impl LiteralFragment {
    fn new(seed: u64) -> Self {
        LiteralFragment {
            seed,
            cache: Mutex::new((0, Vec::new())),
        }
    }

    fn get(&self, t: usize) -> Formula {
        let mut guard = self.cache.lock().expect("fragment cache poisoned");
        let (next_const, items) = &mut *guard;
        while items.len() <= t {
            let n = *next_const;
            *next_const += 1;
            items.extend(literals_for(n, self.seed));
        }
        items[t].clone()
    }
}

fn literals_for(n: usize, seed: u64) -> Vec<Formula> {
    let hs: Vec<Term> = constants_up_to(n + 1).into_iter().map(Term::Const).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (n as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    let mut out = Vec::new();
    for a in 0..=n {
        for b in 0..=n {
            for c in 0..=n {
                if a.max(b).max(c) != n {
                    continue;
                }
                let atom = Formula::S(hs[a].clone(), hs[b].clone(), hs[c].clone());
                if rng.gen::<bool>() {
                    out.push(atom.clone());
                    out.push(Formula::not(atom));
                } else {
                    out.push(Formula::not(atom.clone()));
                    out.push(atom);
                }
            }
        }
    }
    for a in 0..=n {
        for b in 0..=n {
            if a.max(b) == n {
                let atom = Formula::Mem(hs[a].clone(), hs[b].clone());
                out.push(Formula::not(atom.clone()));
                out.push(atom);
            }
        }
    }
    for a in 0..n {
        let atom = Formula::Eq(hs[a].clone(), hs[n].clone());
        out.push(Formula::not(atom.clone()));
        out.push(atom);
    }
    out
}

/// Puts `=` literals in canonical orientation (smaller term first).
pub fn normalize_literal(l: &Formula) -> Formula {
    match l {
        Formula::Eq(a, b) if a > b => Formula::Eq(b.clone(), a.clone()),
        Formula::Not(inner) => Formula::not(normalize_literal(inner)),
        other => other.clone(),
    }
}

// ---------- ground refutation ----------

#[derive(Clone, Copy, PartialEq, Eq)]
enum Axioms {
    /// `∈` is empty.
    Generic,
    /// Foundation for one- and two-cycles and `a ∈ b → S(a,b,c)`.
    BoundedZf,
}

/// Congruence closure over `=`, clash detection on `S` and `∈`, the
/// theory's ground axioms, and forward chaining of `e`-constant implications.
/// One step is processing one literal (including its merge) or firing one
/// `e`-implication.
struct Refuter {
    axioms: Axioms,
    ids: HashMap<HenkinConst, usize>,
    parent: Vec<usize>,
    lits: Vec<(bool, Lit)>,
    pos: HashSet<Lit>,
    neg: HashSet<Lit>,
    fired: HashSet<HenkinConst>,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Lit {
    S(usize, usize, usize),
    Mem(usize, usize),
    Eq(usize, usize),
}

impl Refuter {
    fn id(&mut self, c: &HenkinConst) -> usize {
        if let Some(&i) = self.ids.get(c) {
            return i;
        }
        let i = self.parent.len();
        self.parent.push(i);
        self.ids.insert(c.clone(), i);
        i
    }

    fn find(&self, mut i: usize) -> usize {
        while self.parent[i] != i {
            i = self.parent[i];
        }
        i
    }

    fn term_id(&mut self, t: &Term) -> Option<usize> {
        match t {
            Term::Const(c) => Some(self.id(c)),
            Term::Var(_) => None,
        }
    }

    fn convert(&mut self, l: &Formula) -> Option<(bool, Lit)> {
        let (truth, atom) = match l {
            Formula::Not(a) => (false, &**a),
            a => (true, a),
        };
        let lit = match atom {
            Formula::S(a, b, c) => Lit::S(self.term_id(a)?, self.term_id(b)?, self.term_id(c)?),
            Formula::Mem(a, b) => Lit::Mem(self.term_id(a)?, self.term_id(b)?),
            Formula::Eq(a, b) => Lit::Eq(self.term_id(a)?, self.term_id(b)?),
            _ => return None,
        };
        Some((truth, lit))
    }

    fn canon(&self, l: &Lit) -> Lit {
        match *l {
            Lit::S(a, b, c) => Lit::S(self.find(a), self.find(b), self.find(c)),
            Lit::Mem(a, b) => Lit::Mem(self.find(a), self.find(b)),
            Lit::Eq(a, b) => {
                let (x, y) = (self.find(a), self.find(b));
                Lit::Eq(x.min(y), x.max(y))
            }
        }
    }

    fn holds(&self, truth: bool, l: &Lit) -> bool {
        let c = self.canon(l);
        if let Lit::Eq(a, b) = c {
            if a == b {
                return truth;
            }
        }
        if truth {
            self.pos.contains(&c)
        } else {
            self.neg.contains(&c)
        }
    }

    fn rebuild(&mut self) {
        let lits = std::mem::take(&mut self.lits);
        self.pos.clear();
        self.neg.clear();
        for (t, l) in &lits {
            let c = self.canon(l);
            if *t {
                self.pos.insert(c);
            } else {
                self.neg.insert(c);
            }
        }
        self.lits = lits;
    }

    /// Whether the canonical literal `c` clashes with what is recorded.
    fn clashes(&self, truth: bool, c: &Lit) -> bool {
        let other = if truth { &self.neg } else { &self.pos };
        if other.contains(c) {
            return true;
        }
        match (*c, truth) {
            (Lit::Eq(a, b), false) => a == b,
            (Lit::Mem(a, b), true) => match self.axioms {
                Axioms::Generic => true,
                Axioms::BoundedZf => {
                    a == b
                        || self.pos.contains(&Lit::Mem(b, a))
                        || self
                            .neg
                            .iter()
                            .any(|l| matches!(*l, Lit::S(x, y, _) if x == a && y == b))
                }
            },
            (Lit::S(a, b, _), false) => {
                self.axioms == Axioms::BoundedZf && self.pos.contains(&Lit::Mem(a, b))
            }
            _ => false,
        }
    }

    fn conflict_full(&self) -> bool {
        let recorded = self.pos.iter().map(|l| (true, l)).chain(self.neg.iter().map(|l| (false, l)));
        recorded.into_iter().any(|(t, l)| self.clashes(t, l))
    }

    fn run(axioms: Axioms, gamma: &[Formula], budget: usize) -> bool {
        let mut r = Refuter {
            axioms,
            ids: HashMap::new(),
            parent: Vec::new(),
            lits: Vec::new(),
            pos: HashSet::new(),
            neg: HashSet::new(),
            fired: HashSet::new(),
        };
        let mut queue: VecDeque<Formula> = gamma.iter().cloned().collect();
        let mut steps = 0usize;
        let mut e_consts: BTreeSet<HenkinConst> = BTreeSet::new();
        while let Some(l) = queue.pop_front() {
            if steps >= budget {
                return false;
            }
            steps += 1;
            let Some((truth, lit)) = r.convert(&l) else {
                continue;
            };
            let mut merged = false;
            if let (true, Lit::Eq(a, b)) = (truth, &lit) {
                let (x, y) = (r.find(*a), r.find(*b));
                if x != y {
                    r.parent[x.max(y)] = x.min(y);
                    merged = true;
                }
            }
            r.lits.push((truth, lit.clone()));
            if merged {
                r.rebuild();
                if r.conflict_full() {
                    return true;
                }
            } else {
                let c = r.canon(&lit);
                if r.clashes(truth, &c) {
                    return true;
                }
                if truth {
                    r.pos.insert(c);
                } else {
                    r.neg.insert(c);
                }
            }
            for c in l.constants() {
                if provenance(&c).is_some() {
                    e_consts.insert(c);
                }
            }
            // fire every e-implication whose antecedent is present
            for e in e_consts.iter() {
                if r.fired.contains(e) {
                    continue;
                }
                let p = provenance(e).expect("filtered");
                let ante = p.a.diagram().expect("constant atoms");
                let all = ante.iter().all(|a| match r.convert(a) {
                    Some((t, lit)) => r.holds(t, &lit),
                    None => false,
                });
                if all {
                    if steps >= budget {
                        return false;
                    }
                    steps += 1;
                    r.fired.insert(e.clone());
                    queue.extend(p.b.diagram().expect("constant atoms"));
                }
            }
        }
        false
    }
}

/// The generic ternary structure: `∈` is empty and every `S`-pattern on
/// distinct elements is realized, with every finite diagram extending by a
/// new element in any prescribed way.
pub struct GenericPackage {
    fragment: LiteralFragment,
    max_steps: Option<usize>,
}

impl GenericPackage {
    pub fn new(seed: u64, max_steps: Option<usize>) -> Self {
        GenericPackage {
            fragment: LiteralFragment::new(seed),
            max_steps,
        }
    }
}

fn cap(steps: usize, max: Option<usize>) -> usize {
    max.map_or(steps, |m| steps.min(m))
}

impl TheoryPackage for GenericPackage {
    fn name(&self) -> &str {
        "generic"
    }

    fn axioms(&self) -> Vec<Formula> {
        vec![parse("forall a. forall b. !(a in b)").expect("fixed axiom")]
    }

    fn sentence(&self, t: usize) -> Formula {
        self.fragment.get(t)
    }

    fn refute_within(&self, gamma: &[Formula], steps: usize) -> bool {
        Refuter::run(Axioms::Generic, gamma, cap(steps, self.max_steps))
    }

    fn is_exact(&self) -> bool {
        self.max_steps.is_none()
    }
}

/// Best-effort bounded search for the theory of `(V, S, ∈)`: ground
/// instances of foundation (no `a ∈ a`, no two-cycles) and of `a ∈ b →
/// S(a,b,c)` between mentioned constants. Sound, not complete.
pub struct BoundedZfPackage {
    fragment: LiteralFragment,
    max_steps: Option<usize>,
    screen_rank: u32,
}

impl BoundedZfPackage {
    pub fn new(seed: u64, max_steps: Option<usize>, screen_rank: u32) -> Self {
        BoundedZfPackage {
            fragment: LiteralFragment::new(seed),
            max_steps,
            screen_rank,
        }
    }

    /// Searches for HF sets of rank `< screen_rank` realizing the literal
    /// set under `(V, decide_S, ∈)`. `None` when not found within `budget`
    /// assignments.
    pub fn screen(&self, gamma: &[Formula], budget: usize) -> Option<HashMap<HenkinConst, HfSet>> {
        let sets = v_level(self.screen_rank, DEFAULT_LEVEL_BUDGET).ok()?;
        let consts: Vec<HenkinConst> = gamma
            .iter()
            .flat_map(|l| l.constants())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let mut assign: Vec<HfSet> = Vec::new();
        let mut left = budget;
        if realize(gamma, &consts, &sets, &mut assign, &mut left) {
            Some(consts.into_iter().zip(assign).collect())
        } else {
            None
        }
    }
}

fn lit_value(l: &Formula, consts: &[HenkinConst], assign: &[HfSet]) -> Option<bool> {
    let val = |t: &Term| match t {
        Term::Const(c) => consts.iter().position(|d| d == c).and_then(|i| assign.get(i)),
        Term::Var(_) => None,
    };
    let (truth, atom) = match l {
        Formula::Not(a) => (false, &**a),
        a => (true, a),
    };
    let v = match atom {
        Formula::S(a, b, c) => decide_s(val(a)?, val(b)?, val(c)?),
        Formula::Mem(a, b) => val(b)?.contains(val(a)?),
        Formula::Eq(a, b) => val(a)? == val(b)?,
        _ => return None,
    };
    Some(v == truth)
}

fn realize(
    gamma: &[Formula],
    consts: &[HenkinConst],
    sets: &[HfSet],
    assign: &mut Vec<HfSet>,
    left: &mut usize,
) -> bool {
    // literals whose constants are all assigned must hold
    if gamma
        .iter()
        .any(|l| lit_value(l, consts, assign) == Some(false))
    {
        return false;
    }
    if assign.len() == consts.len() {
        return true;
    }
    for s in sets {
        if *left == 0 {
            return false;
        }
        *left -= 1;
        assign.push(s.clone());
        if realize(gamma, consts, sets, assign, left) {
            return true;
        }
        assign.pop();
    }
    false
}

impl TheoryPackage for BoundedZfPackage {
    fn name(&self) -> &str {
        "bounded_zf"
    }

    fn axioms(&self) -> Vec<Formula> {
        [
            "forall a. !(a in a)",
            "forall a. forall b. (a in b -> !(b in a))",
            "forall a. forall b. (a in b -> forall z. S(a,b,z))",
        ]
        .iter()
        .map(|s| parse(s).expect("fixed axiom"))
        .collect()
    }

    fn sentence(&self, t: usize) -> Formula {
        self.fragment.get(t)
    }

    /// A realization by small HF sets found within `steps` assignments
    /// settles consistency; otherwise the ground search decides.
    fn refute_within(&self, gamma: &[Formula], steps: usize) -> bool {
        let steps = cap(steps, self.max_steps);
        if self.screen(gamma, steps).is_some() {
            return false;
        }
        Refuter::run(Axioms::BoundedZf, gamma, steps)
    }

    fn is_exact(&self) -> bool {
        false
    }
}

/// Generic package whose `u_i` carries the opposite decision on the atom of
/// `literal` for `i < until`; the refutation search itself is untouched.
pub struct ScriptedInjury {
    inner: GenericPackage,
    literal: Formula,
    until: usize,
}

impl ScriptedInjury {
    pub fn new(seed: u64, literal: Formula, until: usize) -> Self {
        ScriptedInjury {
            inner: GenericPackage::new(seed, None),
            literal: normalize_literal(&literal),
            until,
        }
    }
}

fn negate(l: &Formula) -> Formula {
    match l {
        Formula::Not(a) => (**a).clone(),
        a => Formula::not(a.clone()),
    }
}

impl TheoryPackage for ScriptedInjury {
    fn name(&self) -> &str {
        "scripted_injury"
    }

    fn axioms(&self) -> Vec<Formula> {
        self.inner.axioms()
    }

    fn sentence(&self, t: usize) -> Formula {
        self.inner.sentence(t)
    }

    fn refute_within(&self, gamma: &[Formula], steps: usize) -> bool {
        self.inner.refute_within(gamma, steps)
    }

    fn is_exact(&self) -> bool {
        false
    }

    fn adjust_u(&self, i: usize, u: Vec<Formula>) -> Vec<Formula> {
        if i >= self.until {
            return u;
        }
        u.into_iter()
            .map(|l| {
                if l == self.literal || l == negate(&self.literal) {
                    negate(&l)
                } else {
                    l
                }
            })
            .collect()
    }
}

// ---------- K-table and stages ----------

/// `K_{i,j}`.
pub fn k_cell(pkg: &dyn TheoryPackage, i: usize, j: usize) -> Vec<Formula> {
    let mut k: Vec<Formula> = Vec::new();
    for t in 0..i {
        let phi = pkg.sentence(t);
        k.push(phi);
        if pkg.refute_within(&k, j) {
            k.pop();
        }
    }
    k
}

/// `u_i` with its closure `U_i`.
pub struct ApproxStage {
    pub i: usize,
    u: Vec<Formula>,
    set: HashSet<Formula>,
    memo: Mutex<HashMap<Formula, bool>>,
}

/// `u_i = K_{i,i}` (after the package's fixture hook).
pub fn u_stage(pkg: &dyn TheoryPackage, i: usize) -> ApproxStage {
    ApproxStage::new(i, pkg.adjust_u(i, k_cell(pkg, i, i)))
}

impl ApproxStage {
    pub fn new(i: usize, u: Vec<Formula>) -> Self {
        let set = u.iter().map(normalize_literal).collect();
        ApproxStage {
            i,
            u,
            set,
            memo: Mutex::new(HashMap::new()),
        }
    }

    pub fn u(&self) -> &[Formula] {
        &self.u
    }

    /// SHA-256 over the printed sentences of `u_i`, sorted, as hex.
    pub fn fingerprint(&self) -> String {
        let mut lines: Vec<String> = self.u.iter().map(|f| f.to_string()).collect();
        lines.sort();
        let mut h = Sha256::new();
        for l in &lines {
            h.update(l.as_bytes());
            h.update(b"\n");
        }
        h.finalize()[..16].iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Membership of `sigma` in `U_i`.
    pub fn contains(&self, sigma: &Formula) -> bool {
        ui_contains(self, sigma)
    }
}

/// Whether `literal` is one of the literals of `Diag(B)`.
fn in_diagram(b: &crate::structures::FinStruct, literal: &Formula) -> bool {
    let (truth, atom) = match literal {
        Formula::Not(a) => (false, &**a),
        a => (true, a),
    };
    let idx = |t: &Term| match t {
        Term::Const(c) => b.index_of(&Atom::Const(c.clone())),
        Term::Var(_) => None,
    };
    let get = || -> Option<bool> {
        Some(match atom {
            Formula::S(x, y, z) => b.s(idx(x)?, idx(y)?, idx(z)?) == truth,
            Formula::Mem(x, y) => b.mem(idx(x)?, idx(y)?) == truth,
            Formula::Eq(x, y) => !truth && idx(x)? != idx(y)?,
            _ => false,
        })
    };
    get().unwrap_or(false)
}

/// Membership in the closure of `u_i` under
/// `Diag(A) ⊆ U ⇒ Diag(B)[v ↦ e(A,B)] ⊆ U`, by backward chaining on the
/// provenance of the code-largest constant. Terminates because every
/// constant of `A` has a smaller code than `e(A,B)`.
pub fn ui_contains(stage: &ApproxStage, sigma: &Formula) -> bool {
    let sigma = normalize_literal(sigma);
    if stage.set.contains(&sigma) {
        return true;
    }
    if let Some(&hit) = stage.memo.lock().expect("memo poisoned").get(&sigma) {
        return hit;
    }
    let result = (|| {
        if !sigma.is_literal() {
            return false;
        }
        let Some(top) = sigma.constants().into_iter().next_back() else {
            return false;
        };
        let Some(p) = provenance(&top) else {
            return false;
        };
        if !in_diagram(&p.b, &sigma) {
            return false;
        }
        let ante = p.a.diagram().expect("constant atoms");
        ante.iter().all(|l| ui_contains(stage, l))
    })();
    stage
        .memo
        .lock()
        .expect("memo poisoned")
        .insert(sigma, result);
    result
}

/// A shareable package handle.
pub type Package = Arc<dyn TheoryPackage>;
