//! Definitional translation and the `bit_i` formula family.

use std::collections::BTreeMap;

use super::{Formula, Term};
use crate::error::{Error, Result};

/// A defining formula with named parameter slots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Template {
    pub params: Vec<String>,
    pub body: Formula,
}

impl Template {
    /// Fails if `body` has free variables outside `params`.
    pub fn new(params: &[&str], body: Formula) -> Result<Self> {
        let params: Vec<String> = params.iter().map(|p| p.to_string()).collect();
        if let Some(v) = body.free_vars().into_iter().find(|v| !params.contains(v)) {
            return Err(Error::Precondition(format!(
                "definition body has free variable `{v}` outside its parameters"
            )));
        }
        Ok(Template { params, body })
    }

    /// A template whose body is the bare predicate atom.
    pub fn pred(name: &str, arity: usize) -> Self {
        let params: Vec<String> = (0..arity).map(|i| format!("u{i}")).collect();
        let body = Formula::Pred(name.to_string(), params.iter().map(|p| Term::Var(p.clone())).collect());
        Template { params, body }
    }

    pub fn arity(&self) -> usize {
        self.params.len()
    }

    /// Instantiates the parameters with `args`, avoiding capture.
    pub fn instantiate(&self, args: &[Term]) -> Result<Formula> {
        if args.len() != self.params.len() {
            return Err(Error::Arity(format!(
                "definition expects {} arguments, got {}",
                self.params.len(),
                args.len()
            )));
        }
        let map: Vec<(String, Term)> = self.params.iter().cloned().zip(args.iter().cloned()).collect();
        Ok(self.body.subst(&map))
    }

    /// `x ∈ y ↔ ∀z S(x,y,z)`.
    pub fn membership_via_s() -> Self {
        let body = Formula::forall(
            "z",
            Formula::S(Term::var("x"), Term::var("y"), Term::var("z")),
        );
        Template {
            params: vec!["x".into(), "y".into()],
            body,
        }
    }
}

/// Symbol name to definition. The base symbols are keyed `S`, `in` and `=`.
pub type Definitions = BTreeMap<String, Template>;

fn symbol(f: &Formula) -> &str {
    match f {
        Formula::S(..) => "S",
        Formula::Mem(..) => "in",
        Formula::Eq(..) => "=",
        Formula::Pred(p, _) => p,
        _ => unreachable!("atoms only"),
    }
}

/// Replaces every defined atom by its instantiated definition.
pub fn translate(f: &Formula, defs: &Definitions) -> Result<Formula> {
    Ok(match f {
        Formula::True | Formula::False => f.clone(),
        Formula::Not(a) => Formula::not(translate(a, defs)?),
        Formula::And(a, b) => Formula::and(translate(a, defs)?, translate(b, defs)?),
        Formula::Or(a, b) => Formula::or(translate(a, defs)?, translate(b, defs)?),
        Formula::Implies(a, b) => Formula::implies(translate(a, defs)?, translate(b, defs)?),
        Formula::Forall(v, a) => Formula::Forall(v.clone(), Box::new(translate(a, defs)?)),
        Formula::Exists(v, a) => Formula::Exists(v.clone(), Box::new(translate(a, defs)?)),
        atom => {
            let sym = symbol(atom);
            match defs.get(sym) {
                Some(t) => {
                    let args: Vec<Term> = atom.atom_terms().into_iter().cloned().collect();
                    t.instantiate(&args)?
                }
                None if matches!(atom, Formula::Pred(..)) => {
                    return Err(Error::MissingDefinition(sym.to_string()))
                }
                None => atom.clone(),
            }
        }
    })
}

/// `∃y₀…∃yᵢ (zero(y₀) ∧ suc(y₀,y₁) ∧ … ∧ mem(yᵢ, x))`, free in `x`.
pub fn bit_formula(i: usize, zero: &Template, suc: &Template, mem: &Template) -> Result<Formula> {
    for (name, t, want) in [("zero", zero, 1), ("suc", suc, 2), ("mem", mem, 2)] {
        if t.arity() != want {
            return Err(Error::Arity(format!(
                "{name} must have {want} slot(s), has {}",
                t.arity()
            )));
        }
    }
    let ys: Vec<String> = (0..=i).map(|j| format!("y{j}")).collect();
    let y = |j: usize| Term::Var(ys[j].clone());
    let mut parts = vec![zero.instantiate(&[y(0)])?];
    for j in 0..i {
        parts.push(suc.instantiate(&[y(j), y(j + 1)])?);
    }
    parts.push(mem.instantiate(&[y(i), Term::var("x")])?);
    let mut f = Formula::conj(parts);
    for v in ys.iter().rev() {
        f = Formula::exists(v, f);
    }
    Ok(f)
}
