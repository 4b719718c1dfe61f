//! Model checking over finite (or finitely bounded) models.

use std::collections::{BTreeSet, HashMap, HashSet};

use super::{Formula, HenkinConst, Term};
use crate::error::{Error, Result};

/// An interpretation of the signature. Quantifiers range over
/// [`Model::domain`].
pub trait Model {
    type Elem: Clone;

    fn domain(&self) -> Vec<Self::Elem>;
    fn s(&self, a: &Self::Elem, b: &Self::Elem, c: &Self::Elem) -> bool;
    fn mem(&self, a: &Self::Elem, b: &Self::Elem) -> bool;
    fn eq(&self, a: &Self::Elem, b: &Self::Elem) -> bool;

    fn pred(&self, name: &str, _args: &[Self::Elem]) -> Result<bool> {
        Err(Error::MissingDefinition(name.to_string()))
    }

    fn constant(&self, c: &HenkinConst) -> Result<Self::Elem> {
        Err(Error::Precondition(format!("constant {c:?} is not interpreted")))
    }
}

struct Ctx<'m, M: Model> {
    model: &'m M,
    domain: Vec<M::Elem>,
}

type Env<E> = Vec<(String, E)>;

impl<M: Model> Ctx<'_, M> {
    fn term(&self, t: &Term, env: &Env<M::Elem>) -> Result<M::Elem> {
        match t {
            Term::Var(v) => env
                .iter()
                .rev()
                .find(|(k, _)| k == v)
                .map(|(_, e)| e.clone())
                .ok_or_else(|| Error::Precondition(format!("unbound variable `{v}`"))),
            Term::Const(c) => self.model.constant(c),
        }
    }

    fn eval(&self, f: &Formula, env: &mut Env<M::Elem>) -> Result<bool> {
        let m = self.model;
        Ok(match f {
            Formula::True => true,
            Formula::False => false,
            Formula::S(a, b, c) => m.s(&self.term(a, env)?, &self.term(b, env)?, &self.term(c, env)?),
            Formula::Mem(a, b) => m.mem(&self.term(a, env)?, &self.term(b, env)?),
            Formula::Eq(a, b) => m.eq(&self.term(a, env)?, &self.term(b, env)?),
            Formula::Pred(p, args) => {
                let vals = args.iter().map(|t| self.term(t, env)).collect::<Result<Vec<_>>>()?;
                m.pred(p, &vals)?
            }
            Formula::Not(a) => !self.eval(a, env)?,
            Formula::And(a, b) => self.eval(a, env)? && self.eval(b, env)?,
            Formula::Or(a, b) => self.eval(a, env)? || self.eval(b, env)?,
            Formula::Implies(a, b) => !self.eval(a, env)? || self.eval(b, env)?,
            Formula::Exists(..) => self.exists_block(f, env)?,
            Formula::Forall(v, a) => {
                for d in &self.domain {
                    env.push((v.clone(), d.clone()));
                    let r = self.eval(a, env);
                    env.pop();
                    if !r? {
                        return Ok(false);
                    }
                }
                true
            }
        })
    }

    /// Evaluates a block `∃v₁…∃vₙ (ψ₁ ∧ … ∧ ψₘ)`, testing each conjunct as
    /// soon as the block variables it mentions are bound.
    fn exists_block(&self, f: &Formula, env: &mut Env<M::Elem>) -> Result<bool> {
        let mut vars = Vec::new();
        let mut body = f;
        while let Formula::Exists(v, a) = body {
            vars.push(v.clone());
            body = a;
        }
        let conjuncts = body.conjuncts();
        // a conjunct is ready once the last block variable it mentions is bound
        let mut ready: Vec<Vec<&Formula>> = vec![Vec::new(); vars.len() + 1];
        for c in conjuncts {
            let free: BTreeSet<String> = c.free_vars();
            let level = vars
                .iter()
                .enumerate()
                .rev()
                .find(|(i, v)| free.contains(*v) && vars[i + 1..].iter().all(|w| w != *v))
                .map_or(0, |(i, _)| i + 1);
            ready[level].push(c);
        }
        self.search(&vars, &ready, 0, env)
    }

    fn search(
        &self,
        vars: &[String],
        ready: &[Vec<&Formula>],
        level: usize,
        env: &mut Env<M::Elem>,
    ) -> Result<bool> {
        for c in &ready[level] {
            if !self.eval(c, env)? {
                return Ok(false);
            }
        }
        if level == vars.len() {
            return Ok(true);
        }
        for d in &self.domain {
            env.push((vars[level].clone(), d.clone()));
            let r = self.search(vars, ready, level + 1, env);
            env.pop();
            if r? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// Truth of `f` in `model` under the assignment `env`.
pub fn eval<M: Model>(model: &M, f: &Formula, env: &[(String, M::Elem)]) -> Result<bool> {
    let ctx = Ctx {
        model,
        domain: model.domain(),
    };
    ctx.eval(f, &mut env.to_vec())
}

/// A small explicit model on `{0, …, n-1}`.
#[derive(Clone, Debug, Default)]
pub struct FiniteModel {
    pub size: usize,
    pub s: HashSet<(usize, usize, usize)>,
    pub mem: HashSet<(usize, usize)>,
    pub preds: HashMap<String, HashSet<Vec<usize>>>,
    pub consts: HashMap<HenkinConst, usize>,
}

impl Model for FiniteModel {
    type Elem = usize;

    fn domain(&self) -> Vec<usize> {
        (0..self.size).collect()
    }

    fn s(&self, a: &usize, b: &usize, c: &usize) -> bool {
        self.s.contains(&(*a, *b, *c))
    }

    fn mem(&self, a: &usize, b: &usize) -> bool {
        self.mem.contains(&(*a, *b))
    }

    fn eq(&self, a: &usize, b: &usize) -> bool {
        a == b
    }

    fn pred(&self, name: &str, args: &[usize]) -> Result<bool> {
        self.preds
            .get(name)
            .map(|rel| rel.contains(args))
            .ok_or_else(|| Error::MissingDefinition(name.to_string()))
    }

    fn constant(&self, c: &HenkinConst) -> Result<usize> {
        self.consts
            .get(c)
            .copied()
            .ok_or_else(|| Error::Precondition(format!("constant {c:?} is not interpreted")))
    }
}
