//! The computable ternary relation `S` on hereditarily finite sets.
//!
//! A witness is a set `w = (6α+3, (A, B))` where `A` is an ∈-absolute
//! (S,∈)-structure on sets whose `S` agrees with `S` itself and `B` is a
//! neutral extension of `A` by one new point. The triples among
//! `dom(A) ∪ {w}` that mention `w` take their truth value from `B` (with `w`
//! playing the new point); every other triple holds.
//!
//! Validity of a witness refers to `S` on `dom(A)` only, and every atom of
//! `A` has smaller rank than `w`, so the recursion is well founded.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::hf::{kpair, kpair_decode, v_level, HfSet, DEFAULT_LEVEL_BUDGET};
use crate::structures::{
    induced_structure, is_neutral_extension, is_sin_embedding, neutral_extensions, Atom, AtomMap,
    FinStruct, Kind,
};

/// A decoded witness. `b` contains `dom(a)` and the fresh atom `v`.
#[derive(Clone, PartialEq, Eq)]
pub struct WitnessCode {
    pub alpha: usize,
    pub a: FinStruct,
    pub b: FinStruct,
    pub v: HfSet,
}

fn sets_of(st: &FinStruct) -> Option<Vec<HfSet>> {
    st.dom().iter().map(|a| a.as_set().cloned()).collect()
}

/// `kpair(dom, kpair(S-triples, ∈-pairs))`, triples coded `kpair(kpair(a,b),c)`.
pub fn encode_struct(st: &FinStruct) -> Result<HfSet> {
    let d = sets_of(st)
        .ok_or_else(|| Error::Precondition("encode_struct needs set-labelled atoms".into()))?;
    let triples = st
        .s_triples()
        .into_iter()
        .map(|(i, j, k)| kpair(&kpair(&d[i], &d[j]), &d[k]));
    let pairs = st.mem_pairs().into_iter().map(|(i, j)| kpair(&d[i], &d[j]));
    Ok(kpair(
        &HfSet::canon(d.iter().cloned()),
        &kpair(&HfSet::canon(triples), &HfSet::canon(pairs)),
    ))
}

/// Inverse of [`encode_struct`]; the domain comes out in canonical order.
pub fn decode_struct(x: &HfSet) -> Option<FinStruct> {
    let (d, rest) = kpair_decode(x)?;
    let (s, m) = kpair_decode(&rest)?;
    let dom: Vec<Atom> = d.elements().iter().cloned().map(Atom::Set).collect();
    let mut st = FinStruct::new(Kind::SIn, dom).ok()?;
    let idx = |y: &HfSet| d.elements().binary_search(y).ok();
    for t in s.elements() {
        let (ab, c) = kpair_decode(t)?;
        let (a, b) = kpair_decode(&ab)?;
        st.set_s(idx(&a)?, idx(&b)?, idx(&c)?, true);
    }
    for p in m.elements() {
        let (a, b) = kpair_decode(p)?;
        st.set_mem(idx(&a)?, idx(&b)?, true);
    }
    Some(st)
}

/// The canonically least set outside `xs`.
pub fn least_fresh(xs: &[HfSet]) -> HfSet {
    for k in 1.. {
        let level = v_level(k, DEFAULT_LEVEL_BUDGET).expect("small domains only");
        if let Some(s) = level.into_iter().find(|s| !xs.contains(s)) {
            return s;
        }
    }
    unreachable!()
}

/// `(6α+3, (A, B))`.
pub fn encode_witness(w: &WitnessCode) -> Result<HfSet> {
    Ok(kpair(
        &HfSet::ordinal(6 * w.alpha + 3),
        &kpair(&encode_struct(&w.a)?, &encode_struct(&w.b)?),
    ))
}

thread_local! {
    static MEMO: RefCell<HashMap<HfSet, Option<Arc<WitnessCode>>>> = RefCell::new(HashMap::new());
}

/// Decodes `x` if it is a valid witness, checking every condition
/// (including agreement of `S^A` with [`decide_s`]). Results are memoized
/// per thread.
pub fn decode_witness(x: &HfSet) -> Option<Arc<WitnessCode>> {
    if let Some(hit) = MEMO.with(|m| m.borrow().get(x).cloned()) {
        return hit;
    }
    let out = decode_uncached(x).map(Arc::new);
    MEMO.with(|m| m.borrow_mut().insert(x.clone(), out.clone()));
    out
}

fn decode_uncached(x: &HfSet) -> Option<WitnessCode> {
    let (marker, rest) = kpair_decode(x)?;
    let n = marker.as_ordinal()?;
    if n % 6 != 3 {
        return None;
    }
    let alpha = (n - 3) / 6;
    let (ea, eb) = kpair_decode(&rest)?;
    let a = decode_struct(&ea)?;
    let b = decode_struct(&eb)?;
    let dom = sets_of(&a)?;
    if dom.iter().any(|s| s.rank() as usize >= n) || !a.is_in_absolute() {
        return None;
    }
    let v = least_fresh(&dom);
    // B's decoded domain is canonical; compare with A's order plus v
    let vb = b.index_of(&Atom::Set(v.clone()))?;
    let mut order: Vec<usize> = (0..a.len())
        .map(|i| b.index_of(&a.dom()[i]))
        .collect::<Option<_>>()?;
    order.push(vb);
    if b.len() != order.len() || !b.validate() {
        return None;
    }
    let b_ordered = b.induced(&order);
    if !is_neutral_extension(&a, &b_ordered, &Atom::Set(v.clone())) {
        return None;
    }
    let m = dom.len();
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                if a.s(i, j, k) != decide_s(&dom[i], &dom[j], &dom[k]) {
                    return None;
                }
            }
        }
    }
    Some(WitnessCode {
        alpha,
        a,
        b: b_ordered,
        v,
    })
}

/// `max(1, ⌈(max rank + 1) / 6⌉)`: the first stage whose `V_{6(α+1)}`
/// contains all three sets.
pub fn decision_stage(a: &HfSet, b: &HfSet, c: &HfSet) -> usize {
    let r = a.rank().max(b.rank()).max(c.rank()) as usize;
    (r + 1).div_ceil(6).max(1)
}

/// The witness deciding `(a,b,c)`, if any: the unique valid witness `w`
/// among the components such that every component lies in `dom(A_w) ∪ {w}`.
pub fn covering_witness(a: &HfSet, b: &HfSet, c: &HfSet) -> Option<(HfSet, Arc<WitnessCode>)> {
    let comps = [a, b, c];
    let mut found: Option<(HfSet, Arc<WitnessCode>)> = None;
    for (pos, x) in comps.iter().enumerate() {
        if comps[..pos].contains(x) {
            continue;
        }
        let Some(w) = decode_witness(x) else {
            continue;
        };
        let covered = comps
            .iter()
            .all(|y| *y == *x || w.a.index_of(&Atom::Set((*y).clone())).is_some());
        if covered {
            if found.is_some() {
                // impossible for valid witnesses; fall back to the default
                return None;
            }
            found = Some(((*x).clone(), w));
        }
    }
    found
}

/// Membership of `(a,b,c)` in `S`.
pub fn decide_s(a: &HfSet, b: &HfSet, c: &HfSet) -> bool {
    let Some((w, code)) = covering_witness(a, b, c) else {
        return true;
    };
    let idx = |y: &HfSet| {
        if *y == w {
            code.b.len() - 1
        } else {
            code.a.index_of(&Atom::Set(y.clone())).expect("covered")
        }
    };
    code.b.s(idx(a), idx(b), idx(c))
}

/// Drops the per-thread witness memo.
pub fn clear_memo() {
    MEMO.with(|m| m.borrow_mut().clear());
}

/// Least `α` admitting a witness over `dom`.
pub fn least_alpha(dom: &[HfSet]) -> usize {
    let r = dom.iter().map(HfSet::rank).max().map_or(0, |r| r as usize + 1);
    // need every rank < 6α + 3
    r.saturating_sub(3).div_ceil(6)
}

/// The ∈-absolute structure on `dom` with `S` from [`decide_s`].
pub fn absolute_structure(dom: &[HfSet]) -> Result<FinStruct> {
    induced_structure(dom, decide_s)
}

/// A `c` with `¬S(a,b,c)` for `a ∉ b`: the witness over `{a,b}` whose
/// extension makes `S(a,b,v)` the only false new triple.
pub fn indef_witness(a: &HfSet, b: &HfSet) -> Result<HfSet> {
    if b.contains(a) {
        return Err(Error::Precondition(format!("{a} ∈ {b}")));
    }
    let mut dom = vec![a.clone()];
    if a != b {
        dom.push(b.clone());
    }
    dom.sort();
    let w = build_witness(&dom, |bst, ia, ib, iv| {
        let n = bst.len();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if i == iv || j == iv || k == iv {
                        bst.set_s(i, j, k, true);
                    }
                }
            }
        }
        bst.set_s(ia, ib, iv, false);
    }, a, b)?;
    encode_witness(&w)
}

fn build_witness(
    dom: &[HfSet],
    shape: impl Fn(&mut FinStruct, usize, usize, usize),
    a: &HfSet,
    b: &HfSet,
) -> Result<WitnessCode> {
    let alpha = least_alpha(dom);
    let st = absolute_structure(dom)?;
    let v = least_fresh(dom);
    let mut bst = st.clone();
    bst.push_atom(Atom::Set(v.clone()))?;
    let ia = st.index_of(&Atom::Set(a.clone())).expect("in domain");
    let ib = st.index_of(&Atom::Set(b.clone())).expect("in domain");
    let iv = bst.len() - 1;
    shape(&mut bst, ia, ib, iv);
    if !bst.validate() {
        return Err(Error::Internal("witness extension is not an (S,∈)-structure".into()));
    }
    Ok(WitnessCode {
        alpha,
        a: st,
        b: bst,
        v,
    })
}

/// All valid witnesses at stage `alpha` over the domain `dom` (one per
/// neutral extension pattern).
pub fn witnesses_over(alpha: usize, dom: &[HfSet]) -> Result<Vec<WitnessCode>> {
    if alpha < least_alpha(dom) {
        return Ok(Vec::new());
    }
    let mut dom = dom.to_vec();
    dom.sort();
    let a = absolute_structure(&dom)?;
    let v = least_fresh(&dom);
    Ok(neutral_extensions(&a, Atom::Set(v.clone()))?
        .map(|b| WitnessCode {
            alpha,
            a: a.clone(),
            b,
            v: v.clone(),
        })
        .collect())
}

/// The map fixing `dom(A)` and sending `v` to the witness's own encoding.
/// Checked to be an (S,∈)-embedding into `(V, S, ∈)`.
pub fn embed_neutral(w: &WitnessCode) -> Result<AtomMap> {
    let code = encode_witness(w)?;
    let mut pairs: Vec<(Atom, Atom)> = w.a.dom().iter().map(|x| (x.clone(), x.clone())).collect();
    pairs.push((Atom::Set(w.v.clone()), Atom::Set(code.clone())));
    let map = AtomMap::new(pairs)?;
    let mut image: Vec<HfSet> = sets_of(&w.a).expect("set atoms");
    image.push(code);
    let target = absolute_structure(&image)?;
    if !is_sin_embedding(&map, &w.b, &target) {
        return Err(Error::Internal("witness map is not an (S,∈)-embedding".into()));
    }
    Ok(map)
}

impl fmt::Display for WitnessCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let enc = encode_witness(self).map_err(|_| fmt::Error)?;
        writeln!(f, "alpha: {}", self.alpha)?;
        writeln!(f, "A: {}", self.a)?;
        writeln!(f, "B: {}", self.b)?;
        writeln!(f, "v: {}", self.v)?;
        writeln!(f, "encoding: {enc}")?;
        write!(f, "rank: {}", enc.rank())
    }
}

impl fmt::Debug for WitnessCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Witness(α={}, A={}, B={})", self.alpha, self.a, self.b)
    }
}
