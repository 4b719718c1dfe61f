//! Negation normal form and prenex normal form.

use std::collections::BTreeSet;
use std::fmt;

use super::{fresh_var, Formula, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Quant {
    Forall,
    Exists,
}

/// A quantifier prefix grouped into maximal blocks of equal quantifiers.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Prefix {
    pub blocks: Vec<(Quant, Vec<String>)>,
}

impl Prefix {
    fn push(&mut self, q: Quant, v: String) {
        match self.blocks.last_mut() {
            Some((last, vars)) if *last == q => vars.push(v),
            _ => self.blocks.push((q, vec![v])),
        }
    }

    /// Re-attaches the prefix to a matrix.
    pub fn apply(&self, matrix: Formula) -> Formula {
        let mut f = matrix;
        for (q, vars) in self.blocks.iter().rev() {
            for v in vars.iter().rev() {
                f = match q {
                    Quant::Forall => Formula::Forall(v.clone(), Box::new(f)),
                    Quant::Exists => Formula::Exists(v.clone(), Box::new(f)),
                };
            }
        }
        f
    }
}

impl fmt::Display for Prefix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (q, vars) in &self.blocks {
            let sym = if *q == Quant::Forall { "forall" } else { "exists" };
            write!(f, "[{sym} {}]", vars.join(" "))?;
        }
        Ok(())
    }
}

/// Eliminates `->` and pushes negations down to atoms.
pub fn nnf(f: &Formula) -> Formula {
    fn pos(f: &Formula) -> Formula {
        match f {
            Formula::Not(a) => neg(a),
            Formula::And(a, b) => Formula::and(pos(a), pos(b)),
            Formula::Or(a, b) => Formula::or(pos(a), pos(b)),
            Formula::Implies(a, b) => Formula::or(neg(a), pos(b)),
            Formula::Forall(v, a) => Formula::Forall(v.clone(), Box::new(pos(a))),
            Formula::Exists(v, a) => Formula::Exists(v.clone(), Box::new(pos(a))),
            atom => atom.clone(),
        }
    }
    fn neg(f: &Formula) -> Formula {
        match f {
            Formula::True => Formula::False,
            Formula::False => Formula::True,
            Formula::Not(a) => pos(a),
            Formula::And(a, b) => Formula::or(neg(a), neg(b)),
            Formula::Or(a, b) => Formula::and(neg(a), neg(b)),
            Formula::Implies(a, b) => Formula::and(pos(a), neg(b)),
            Formula::Forall(v, a) => Formula::Exists(v.clone(), Box::new(neg(a))),
            Formula::Exists(v, a) => Formula::Forall(v.clone(), Box::new(neg(a))),
            atom => Formula::not(atom.clone()),
        }
    }
    pos(f)
}

/// Renames every bound variable to a name used nowhere else.
fn rename_bound(f: &Formula, avoid: &mut BTreeSet<String>) -> Formula {
    match f {
        Formula::Forall(v, a) | Formula::Exists(v, a) => {
            let nv = fresh_var(v, avoid);
            avoid.insert(nv.clone());
            let body = rename_bound(&a.subst1(v, &Term::Var(nv.clone())), avoid);
            match f {
                Formula::Forall(..) => Formula::Forall(nv, Box::new(body)),
                _ => Formula::Exists(nv, Box::new(body)),
            }
        }
        Formula::Not(a) => Formula::not(rename_bound(a, avoid)),
        Formula::And(a, b) => {
            let a = rename_bound(a, avoid);
            Formula::and(a, rename_bound(b, avoid))
        }
        Formula::Or(a, b) => {
            let a = rename_bound(a, avoid);
            Formula::or(a, rename_bound(b, avoid))
        }
        Formula::Implies(a, b) => {
            let a = rename_bound(a, avoid);
            Formula::implies(a, rename_bound(b, avoid))
        }
        atom => atom.clone(),
    }
}

fn pull(f: &Formula, prefix: &mut Vec<(Quant, String)>) -> Formula {
    match f {
        Formula::Forall(v, a) => {
            prefix.push((Quant::Forall, v.clone()));
            pull(a, prefix)
        }
        Formula::Exists(v, a) => {
            prefix.push((Quant::Exists, v.clone()));
            pull(a, prefix)
        }
        Formula::And(a, b) => {
            let a = pull(a, prefix);
            Formula::and(a, pull(b, prefix))
        }
        Formula::Or(a, b) => {
            let a = pull(a, prefix);
            Formula::or(a, pull(b, prefix))
        }
        other => other.clone(),
    }
}

/// Prenex normal form: NNF, fresh renaming of bound variables, then
/// quantifier extraction from left to right.
pub fn prenex(f: &Formula) -> (Prefix, Formula) {
    let mut avoid = f.all_vars();
    let renamed = rename_bound(&nnf(f), &mut avoid);
    let mut flat = Vec::new();
    let matrix = pull(&renamed, &mut flat);
    let mut prefix = Prefix::default();
    for (q, v) in flat {
        prefix.push(q, v);
    }
    (prefix, matrix)
}

/// Number of quantifier blocks in the prenex form produced by [`prenex`].
pub fn alternations(f: &Formula) -> usize {
    prenex(f).0.blocks.len()
}

/// Whether all quantifiers of `f` sit in an initial prefix.
pub fn is_prenex(f: &Formula) -> bool {
    fn quantifier_free(f: &Formula) -> bool {
        match f {
            Formula::Forall(..) | Formula::Exists(..) => false,
            Formula::Not(a) => quantifier_free(a),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                quantifier_free(a) && quantifier_free(b)
            }
            _ => true,
        }
    }
    match f {
        Formula::Forall(_, a) | Formula::Exists(_, a) => is_prenex(a),
        other => quantifier_free(other),
    }
}
