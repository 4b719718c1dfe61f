//! First-order syntax over `{S³, ∈², =}` with Henkin constants.

use std::collections::BTreeSet;
use std::fmt;

mod eval;
mod godel;
mod parse;
mod prenex;
mod translate;

pub use eval::{eval, FiniteModel, Model};
pub use godel::{
    constant_at, constants_up_to, decode_formula, godel_code, godel_code_bits, henkin_axiom,
    henkin_const, sentence_enum, HenkinConst, SentenceEnumerator, PRINT_CODE_BITS,
};
pub(crate) use parse::parse_term_at;
pub use parse::{parse, parse_term};
pub use prenex::{alternations, is_prenex, nnf, prenex, Prefix, Quant};
pub use translate::{bit_formula, translate, Definitions, Template};

/// The fixed variable indexing Henkin constants.
pub const HENKIN_VAR: &str = "x";

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    Const(HenkinConst),
}

impl Term {
    pub fn var(name: &str) -> Self {
        Term::Var(name.to_string())
    }

    pub fn as_var(&self) -> Option<&str> {
        match self {
            Term::Var(v) => Some(v),
            Term::Const(_) => None,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    True,
    False,
    S(Term, Term, Term),
    Mem(Term, Term),
    Eq(Term, Term),
    /// A non-base predicate symbol, eliminated by [`translate`].
    Pred(String, Vec<Term>),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Forall(String, Box<Formula>),
    Exists(String, Box<Formula>),
}

impl Formula {
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn forall(v: &str, f: Formula) -> Self {
        Formula::Forall(v.to_string(), Box::new(f))
    }

    pub fn exists(v: &str, f: Formula) -> Self {
        Formula::Exists(v.to_string(), Box::new(f))
    }

    /// Right-nested conjunction; the empty conjunction is `true`.
    pub fn conj<I: IntoIterator<Item = Formula>>(items: I) -> Self {
        let mut items: Vec<Formula> = items.into_iter().collect();
        let Some(mut acc) = items.pop() else {
            return Formula::True;
        };
        while let Some(f) = items.pop() {
            acc = Formula::and(f, acc);
        }
        acc
    }

    /// Inverse of [`Formula::conj`] (splits the right spine of `&`).
    pub fn conjuncts(&self) -> Vec<&Formula> {
        let mut out = Vec::new();
        let mut cur = self;
        loop {
            match cur {
                Formula::True if out.is_empty() => return out,
                Formula::And(a, b) => {
                    out.push(&**a);
                    cur = b;
                }
                other => {
                    out.push(other);
                    return out;
                }
            }
        }
    }

    pub fn is_atomic(&self) -> bool {
        matches!(
            self,
            Formula::S(..) | Formula::Mem(..) | Formula::Eq(..) | Formula::Pred(..)
        )
    }

    /// An atom or a negated atom.
    pub fn is_literal(&self) -> bool {
        match self {
            Formula::Not(inner) => inner.is_atomic(),
            f => f.is_atomic(),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        let mut bound = Vec::new();
        collect_free(self, &mut bound, &mut out);
        out
    }

    /// No predicate atoms other than `S`, `∈` and `=`.
    pub fn is_base_signature(&self) -> bool {
        let mut ok = true;
        self.visit(&mut |f| ok &= !matches!(f, Formula::Pred(..)));
        ok
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// All variable names occurring anywhere (free or bound).
    pub fn all_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| match f {
            Formula::Forall(v, _) | Formula::Exists(v, _) => {
                out.insert(v.clone());
            }
            _ => {
                for t in f.atom_terms() {
                    if let Term::Var(v) = t {
                        out.insert(v.clone());
                    }
                }
            }
        });
        out
    }

    /// Henkin constants occurring directly in this formula (not inside the
    /// formulas that index them).
    pub fn constants(&self) -> BTreeSet<HenkinConst> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            for t in f.atom_terms() {
                if let Term::Const(c) = t {
                    out.insert(c.clone());
                }
            }
        });
        out
    }

    /// Terms of an atomic formula; empty for every other node.
    pub fn atom_terms(&self) -> Vec<&Term> {
        match self {
            Formula::S(a, b, c) => vec![a, b, c],
            Formula::Mem(a, b) | Formula::Eq(a, b) => vec![a, b],
            Formula::Pred(_, args) => args.iter().collect(),
            _ => Vec::new(),
        }
    }

    fn visit(&self, f: &mut impl FnMut(&Formula)) {
        f(self);
        match self {
            Formula::Not(a) | Formula::Forall(_, a) | Formula::Exists(_, a) => a.visit(f),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            _ => {}
        }
    }

    /// Number of AST nodes (terms not counted).
    pub fn size(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |_| n += 1);
        n
    }

    pub fn map_terms(&self, f: &impl Fn(&Term) -> Term) -> Formula {
        match self {
            Formula::True => Formula::True,
            Formula::False => Formula::False,
            Formula::S(a, b, c) => Formula::S(f(a), f(b), f(c)),
            Formula::Mem(a, b) => Formula::Mem(f(a), f(b)),
            Formula::Eq(a, b) => Formula::Eq(f(a), f(b)),
            Formula::Pred(p, args) => Formula::Pred(p.clone(), args.iter().map(f).collect()),
            Formula::Not(a) => Formula::not(a.map_terms(f)),
            Formula::And(a, b) => Formula::and(a.map_terms(f), b.map_terms(f)),
            Formula::Or(a, b) => Formula::or(a.map_terms(f), b.map_terms(f)),
            Formula::Implies(a, b) => Formula::implies(a.map_terms(f), b.map_terms(f)),
            Formula::Forall(v, a) => Formula::Forall(v.clone(), Box::new(a.map_terms(f))),
            Formula::Exists(v, a) => Formula::Exists(v.clone(), Box::new(a.map_terms(f))),
        }
    }

    /// Capture-free substitution of free variables.
    pub fn subst(&self, map: &[(String, Term)]) -> Formula {
        substitute(self, map)
    }

    /// `self[var ↦ t]`
    pub fn subst1(&self, var: &str, t: &Term) -> Formula {
        substitute(self, &[(var.to_string(), t.clone())])
    }
}

fn collect_free(f: &Formula, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
    match f {
        Formula::Forall(v, a) | Formula::Exists(v, a) => {
            bound.push(v.clone());
            collect_free(a, bound, out);
            bound.pop();
        }
        Formula::Not(a) => collect_free(a, bound, out),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            collect_free(a, bound, out);
            collect_free(b, bound, out);
        }
        atom => {
            for t in atom.atom_terms() {
                if let Term::Var(v) = t {
                    if !bound.contains(v) {
                        out.insert(v.clone());
                    }
                }
            }
        }
    }
}

/// Picks a variable name not in `avoid`, based on `base`.
pub fn fresh_var(base: &str, avoid: &BTreeSet<String>) -> String {
    let stem: String = base.trim_end_matches(|c: char| c.is_ascii_digit()).to_string();
    let stem = if stem.is_empty() || stem == "c" { "v".to_string() } else { stem };
    (0..)
        .map(|i| format!("{stem}{i}"))
        .find(|cand| !avoid.contains(cand))
        .expect("infinitely many candidates")
}

fn substitute(f: &Formula, map: &[(String, Term)]) -> Formula {
    match f {
        Formula::Forall(v, body) | Formula::Exists(v, body) => {
            let inner: Vec<(String, Term)> =
                map.iter().filter(|(k, _)| k != v).cloned().collect();
            if inner.is_empty() {
                return f.clone();
            }
            let body_free = body.free_vars();
            let inner: Vec<(String, Term)> = inner
                .into_iter()
                .filter(|(k, _)| body_free.contains(k))
                .collect();
            if inner.is_empty() {
                return f.clone();
            }
            let captures = inner
                .iter()
                .any(|(_, t)| matches!(t, Term::Var(w) if w == v));
            let (v2, body2) = if captures {
                let mut avoid = body.all_vars();
                for (k, t) in &inner {
                    avoid.insert(k.clone());
                    if let Term::Var(w) = t {
                        avoid.insert(w.clone());
                    }
                }
                let nv = fresh_var(v, &avoid);
                let renamed = substitute(body, &[(v.clone(), Term::Var(nv.clone()))]);
                (nv, renamed)
            } else {
                (v.clone(), (**body).clone())
            };
            let new_body = Box::new(substitute(&body2, &inner));
            match f {
                Formula::Forall(..) => Formula::Forall(v2, new_body),
                _ => Formula::Exists(v2, new_body),
            }
        }
        Formula::Not(a) => Formula::not(substitute(a, map)),
        Formula::And(a, b) => Formula::and(substitute(a, map), substitute(b, map)),
        Formula::Or(a, b) => Formula::or(substitute(a, map), substitute(b, map)),
        Formula::Implies(a, b) => Formula::implies(substitute(a, map), substitute(b, map)),
        atom => atom.map_terms(&|t| match t {
            Term::Var(v) => map
                .iter()
                .find(|(k, _)| k == v)
                .map(|(_, r)| r.clone())
                .unwrap_or_else(|| t.clone()),
            Term::Const(_) => t.clone(),
        }),
    }
}

/// Equality up to renaming of bound variables.
pub fn alpha_eq(a: &Formula, b: &Formula) -> bool {
    fn go(a: &Formula, b: &Formula, env: &mut Vec<(String, String)>) -> bool {
        let term_eq = |x: &Term, y: &Term, env: &[(String, String)]| match (x, y) {
            (Term::Const(c), Term::Const(d)) => c == d,
            (Term::Var(v), Term::Var(w)) => {
                let lv = env.iter().rposition(|(l, _)| l == v);
                let rw = env.iter().rposition(|(_, r)| r == w);
                match (lv, rw) {
                    (None, None) => v == w,
                    (Some(i), Some(j)) => i == j,
                    _ => false,
                }
            }
            _ => false,
        };
        match (a, b) {
            (Formula::True, Formula::True) | (Formula::False, Formula::False) => true,
            (Formula::Not(x), Formula::Not(y)) => go(x, y, env),
            (Formula::And(x1, x2), Formula::And(y1, y2))
            | (Formula::Or(x1, x2), Formula::Or(y1, y2))
            | (Formula::Implies(x1, x2), Formula::Implies(y1, y2)) => {
                go(x1, y1, env) && go(x2, y2, env)
            }
            (Formula::Forall(v, x), Formula::Forall(w, y))
            | (Formula::Exists(v, x), Formula::Exists(w, y)) => {
                env.push((v.clone(), w.clone()));
                let r = go(x, y, env);
                env.pop();
                r
            }
            (Formula::Pred(p, xs), Formula::Pred(q, ys)) => {
                p == q
                    && xs.len() == ys.len()
                    && xs.iter().zip(ys).all(|(x, y)| term_eq(x, y, env))
            }
            (x, y) if x.is_atomic() && y.is_atomic() => {
                std::mem::discriminant(x) == std::mem::discriminant(y)
                    && x
                        .atom_terms()
                        .iter()
                        .zip(y.atom_terms())
                        .all(|(s, t)| term_eq(s, t, env))
            }
            _ => false,
        }
    }
    go(a, b, &mut Vec::new())
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(v),
            Term::Const(c) => write!(f, "{c}"),
        }
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => f.write_str("true"),
            Formula::False => f.write_str("false"),
            Formula::S(a, b, c) => write!(f, "S({a},{b},{c})"),
            Formula::Mem(a, b) => write!(f, "({a} in {b})"),
            Formula::Eq(a, b) => write!(f, "({a} = {b})"),
            Formula::Pred(p, args) => {
                write!(f, "{p}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
            Formula::Not(a) => write!(f, "!{a}"),
            Formula::And(a, b) => write!(f, "({a} & {b})"),
            Formula::Or(a, b) => write!(f, "({a} | {b})"),
            Formula::Implies(a, b) => write!(f, "({a} -> {b})"),
            Formula::Forall(v, a) => write!(f, "(forall {v}. {a})"),
            Formula::Exists(v, a) => write!(f, "(exists {v}. {a})"),
        }
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
