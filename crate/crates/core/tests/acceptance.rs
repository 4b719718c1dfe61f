//! Acceptance criteria 1 to 12. Prints one line per criterion and exits
//! nonzero if any fails. Time limits are part of each verdict.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hfmodel::approx::{normalize_literal, ui_contains, ApproxStage, GenericPackage, ScriptedInjury};
use hfmodel::construction::{check_global, run, Case, Run};
use hfmodel::fol::{bit_formula, constant_at, eval, Formula, HenkinConst, Model, Template, Term};
use hfmodel::hf::{ack_mem, iack, iack_inv, kpair, transported_add, transported_mul, v_level, HfSet};
use hfmodel::srel::{
    decide_s, decode_witness, embed_neutral, indef_witness, least_alpha, witnesses_over,
};
use hfmodel::structures::{
    all_structures, e_const, induced_structure, is_neutral_extension, is_sin_embedding,
    neutral_extensions, Atom, FinStruct, Kind,
};

type Verdict = Result<String, String>;

fn level(k: u32) -> Vec<HfSet> {
    v_level(k, 1 << 16).expect("small level")
}

fn big(n: usize) -> BigUint {
    BigUint::from(n)
}

fn ac1() -> Verdict {
    let v4 = level(4);
    if v4.len() != 16 {
        return Err(format!("|V_4| = {}", v4.len()));
    }
    for a in &v4 {
        for b in &v4 {
            if b.contains(a) != ack_mem(&iack(a).unwrap(), &iack(b).unwrap()) {
                return Err(format!("membership disagrees on {a}, {b}"));
            }
        }
    }
    for n in 0..1usize << 16 {
        if iack(&iack_inv(&big(n))).unwrap() != big(n) {
            return Err(format!("code {n} does not roundtrip"));
        }
    }
    let v5 = level(5);
    for x in &v5 {
        if iack_inv(&iack(x).unwrap()) != *x {
            return Err(format!("{x} does not roundtrip"));
        }
    }
    Ok(format!("256 pairs, 65536 codes, {} sets of rank ≤ 4", v5.len()))
}

fn ac2() -> Verdict {
    let sets: Vec<HfSet> = (0..256).map(|n| iack_inv(&big(n))).collect();
    for (m, x) in sets.iter().enumerate() {
        for (n, y) in sets.iter().enumerate() {
            if iack(&transported_add(x, y).unwrap()).unwrap() != big(m + n) {
                return Err(format!("{m} + {n}"));
            }
            if iack(&transported_mul(x, y).unwrap()).unwrap() != big(m * n) {
                return Err(format!("{m} * {n}"));
            }
        }
    }
    Ok("65536 code pairs, add and mul".into())
}

fn ac3() -> Verdict {
    let v3 = level(3);
    let v4 = level(4);
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut shaped = Vec::new();
    for a in &v3 {
        for b in &v3 {
            if !b.contains(a) {
                let w = indef_witness(a, b).map_err(|e| e.to_string())?;
                if decide_s(a, b, &w) {
                    return Err(format!("S({a},{b},indef_witness) holds"));
                }
                shaped.push(w);
            }
        }
    }
    let mut sampled = 0;
    for a in &v3 {
        for b in v3.iter().filter(|b| b.contains(a)) {
            for _ in 0..200 {
                let c = if rng.gen::<bool>() { shaped.choose(&mut rng) } else { v4.choose(&mut rng) };
                let c = c.expect("nonempty");
                sampled += 1;
                if !decide_s(a, b, c) {
                    return Err(format!("{a} ∈ {b} but ¬S(a,b,{c})"));
                }
            }
        }
    }
    Ok(format!("{} refutations, {sampled} samples", shaped.len()))
}

fn cube(n: usize) -> Vec<(usize, usize, usize)> {
    (0..n).flat_map(|i| (0..n).flat_map(move |j| (0..n).map(move |k| (i, j, k)))).collect()
}

/// Structure coding written out directly: `(dom, (S-triples, ∈-pairs))`.
fn code_struct(dom: &[HfSet], s: &[(usize, usize, usize)]) -> HfSet {
    let triples = s
        .iter()
        .map(|&(i, j, k)| kpair(&kpair(&dom[i], &dom[j]), &dom[k]));
    kpair(
        &HfSet::canon(dom.iter().cloned()),
        &kpair(&HfSet::canon(triples), &HfSet::empty()),
    )
}

/// S on `V_4 ∪ W`, with `W` the stage-0 witnesses over domains of at most one
/// set of `V_2`, rebuilt from scratch and compared with `decide_s`.
fn ac4() -> Verdict {
    let mut universe = level(4);
    let stage0 = HfSet::ordinal(3);
    let mut falses: HashSet<(usize, usize, usize)> = HashSet::new();
    let mut doms: Vec<Vec<HfSet>> = vec![vec![]];
    doms.extend(level(2).into_iter().map(|a| vec![a]));
    let mut witnesses = 0;
    for dom in doms {
        // no set of V_2 belongs to itself, so there are no ∈-pairs, and S is
        // all true there since nothing in V_4 is a witness
        let fresh = level(2)
            .into_iter()
            .filter(|x| !dom.contains(x))
            .min_by_key(|x| iack(x).unwrap())
            .unwrap();
        let n = dom.len();
        let mut b_dom = dom.clone();
        b_dom.push(fresh);
        let old = cube(n);
        let new: Vec<_> = cube(n + 1).into_iter().filter(|&(i, j, k)| i == n || j == n || k == n).collect();
        let a_code = code_struct(&dom, &old);
        for pattern in 0u32..1 << new.len() {
            let truth = |p: usize| pattern >> p & 1 == 1;
            let mut s = old.clone();
            s.extend(new.iter().enumerate().filter(|&(p, _)| truth(p)).map(|(_, t)| *t));
            let w = kpair(&stage0, &kpair(&a_code, &code_struct(&b_dom, &s)));
            if decode_witness(&w).is_none() {
                return Err(format!("hand-built witness over {dom:?} is not recognized"));
            }
            let mut idx: Vec<usize> = dom.iter().map(|d| universe.iter().position(|u| u == d).unwrap()).collect();
            idx.push(universe.len());
            universe.push(w);
            witnesses += 1;
            for (p, &(i, j, k)) in new.iter().enumerate() {
                if !truth(p) {
                    falses.insert((idx[i], idx[j], idx[k]));
                }
            }
        }
    }
    let m = universe.len();
    let mut wrong = 0;
    for (i, a) in universe.iter().enumerate() {
        for (j, b) in universe.iter().enumerate() {
            for (k, c) in universe.iter().enumerate() {
                if decide_s(a, b, c) == falses.contains(&(i, j, k)) {
                    wrong += 1;
                }
            }
        }
    }
    if wrong > 0 {
        return Err(format!("{wrong} of {} triples disagree", m * m * m));
    }
    Ok(format!("{witnesses} witnesses, {} triples", m * m * m))
}

fn ac5() -> Verdict {
    let v2 = level(2);
    let mut doms: Vec<Vec<HfSet>> = vec![vec![]];
    for (i, a) in v2.iter().enumerate() {
        doms.push(vec![a.clone()]);
        for b in &v2[i + 1..] {
            doms.push(vec![a.clone(), b.clone()]);
        }
    }
    let mut checked = 0;
    for dom in &doms {
        for w in witnesses_over(least_alpha(dom), dom).map_err(|e| e.to_string())? {
            let f = embed_neutral(&w).map_err(|e| format!("{w:?}: {e}"))?;
            let mut image: Vec<HfSet> = dom.clone();
            image.push(f.get(&Atom::Set(w.v.clone())).and_then(Atom::as_set).unwrap().clone());
            let target = induced_structure(&image, decide_s).unwrap();
            if !is_sin_embedding(&f, &w.b, &target) {
                return Err(format!("{w:?} does not embed"));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} witnesses"))
}

fn ac6() -> Verdict {
    let v4 = level(4);
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for _ in 0..500 {
        let n = rng.gen_range(1..=4);
        let tuple: Vec<HfSet> = v4.choose_multiple(&mut rng, n).cloned().collect();
        for a in &tuple {
            for b in tuple.iter().filter(|b| b.contains(a)) {
                if let Some(c) = tuple.iter().find(|c| !decide_s(a, b, c)) {
                    return Err(format!("{a} ∈ {b} but ¬S(a,b,{c})"));
                }
            }
        }
    }
    Ok("500 tuples".into())
}

fn ac7() -> Verdict {
    let mut checked = 0;
    let v = Atom::Set(HfSet::ordinal(7));
    for n in 0..=2usize {
        let dom: Vec<Atom> = (0..n).map(|i| Atom::Set(HfSet::ordinal(i))).collect();
        let mut bases = all_structures(&dom).unwrap();
        if n == 2 {
            // one base per ∈-pattern; the count depends only on that
            let mut seen = HashSet::new();
            bases.retain(|a| seen.insert(a.mem_pairs()));
        }
        for a in &bases {
            let expected = 1u64 << ((n + 1).pow(3) - n.pow(3) - a.mem_pairs().len());
            let got = if n < 2 {
                let all: Vec<FinStruct> = neutral_extensions(a, v.clone()).unwrap().collect();
                if all.iter().any(|b| !is_neutral_extension(a, b, &v)) {
                    return Err("enumerated a non-extension".into());
                }
                let distinct: HashSet<String> = all.iter().map(|b| b.to_string()).collect();
                distinct.len()
            } else {
                neutral_extensions(a, v.clone()).unwrap().count()
            } as u64;
            if got != expected {
                return Err(format!("n = {n}, |mem| = {}: {got} vs {expected}", a.mem_pairs().len()));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} base structures"))
}

// ---------- closure decidability ----------

struct Rule {
    a: FinStruct,
    b: FinStruct,
}

/// Extends `base` by a fresh point with seeded values on the new triples and
/// names the point by its e-constant.
fn grow(base: &FinStruct, rng: &mut ChaCha8Rng, rules: &mut Vec<Rule>) -> (HenkinConst, FinStruct) {
    let v = Atom::Set(HfSet::empty());
    let mut b = base.clone();
    b.push_atom(v.clone()).unwrap();
    let n = base.len();
    for i in 0..=n {
        for j in 0..=n {
            for k in 0..=n {
                if i == n || j == n || k == n {
                    b.set_s(i, j, k, rng.gen());
                }
            }
        }
    }
    let e = e_const(base, &b, &v).unwrap();
    let named = b.rename(|x| if *x == v { Atom::Const(e.clone()) } else { x.clone() }).unwrap();
    rules.push(Rule { a: base.clone(), b: named.clone() });
    (e, named)
}

fn forward_closure(u: &[Formula], rules: &[Rule]) -> HashSet<Formula> {
    let mut f: HashSet<Formula> = u.iter().map(normalize_literal).collect();
    loop {
        let before = f.len();
        for r in rules {
            if r.a.diagram().unwrap().iter().all(|l| f.contains(&normalize_literal(l))) {
                f.extend(r.b.diagram().unwrap().iter().map(normalize_literal));
            }
        }
        if f.len() == before {
            return f;
        }
    }
}

fn ac8() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut d0 = FinStruct::new(Kind::SIn, vec![Atom::Const(constant_at(0)), Atom::Const(constant_at(1))]).unwrap();
    for t in 0..8 {
        d0.set_s(t / 4, t / 2 % 2, t % 2, rng.gen());
    }
    let mut rules = Vec::new();
    let mut consts: Vec<HenkinConst> = vec![constant_at(0), constant_at(1)];
    let mut chain = d0.clone();
    for _ in 0..4 {
        // a sibling over the same base, and one over a base U never grants
        let (sib, _) = grow(&chain, &mut rng, &mut rules);
        let mut off = chain.clone();
        off.set_s(0, 0, 0, !off.s(0, 0, 0));
        let (stray, _) = grow(&off, &mut rng, &mut rules);
        let (e, next) = grow(&chain, &mut rng, &mut rules);
        consts.extend([sib, stray, e]);
        chain = next;
    }
    let diag = d0.diagram().unwrap();
    let mut partial = diag.clone();
    partial.remove(rng.gen_range(0..partial.len()));
    let mut noisy = diag.clone();
    noisy.push(Formula::Eq(Term::Const(consts[2].clone()), Term::Const(consts[4].clone())));
    let fixtures = [("full", diag), ("partial", partial), ("noisy", noisy), ("empty", Vec::new())];

    let ts: Vec<Term> = consts.iter().cloned().map(Term::Const).collect();
    let mut queries = Vec::new();
    for a in &ts {
        for b in &ts {
            queries.push(Formula::Mem(a.clone(), b.clone()));
            queries.push(Formula::Eq(a.clone(), b.clone()));
            for c in &ts {
                queries.push(Formula::S(a.clone(), b.clone(), c.clone()));
            }
        }
    }
    let mut derived = Vec::new();
    for (name, u) in &fixtures {
        let stage = ApproxStage::new(0, u.clone());
        let reference = forward_closure(u, &rules);
        for q in &queries {
            for l in [q.clone(), Formula::not(q.clone())] {
                let want = reference.contains(&normalize_literal(&l));
                if ui_contains(&stage, &l) != want {
                    return Err(format!("{name}: {l} should be {want}"));
                }
            }
        }
        derived.push(format!("{name} {}", reference.len()));
    }
    Ok(format!(
        "{} constants to depth 4, {} queries per fixture, closure sizes {}",
        consts.len(),
        2 * queries.len(),
        derived.join(", ")
    ))
}

// ---------- construction ----------

fn meta(pairs: &[(&str, &str)]) -> BTreeMap<String, String> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
}

fn run_checks(r: &Run, window: usize) -> Result<hfmodel::construction::GlobalReport, String> {
    if let Some(e) = &r.error {
        return Err(e.to_string());
    }
    if let Some(l) = r.local.iter().find(|l| !l.ok()) {
        return Err(l.to_string());
    }
    Ok(check_global(&r.trace, window, &r.last_u))
}

fn ac9() -> Verdict {
    let g = GenericPackage::new(0, None);
    let r = run(&g, 50, meta(&[("package", "generic")]));
    let report = run_checks(&r, 10)?;
    let last = &r.trace.snapshots.last().unwrap().state;
    let mut range = last.g.clone();
    range.sort_unstable();
    if range != (0..last.m.len() as u32).collect::<Vec<_>>() {
        return Err(format!("g = {:?} is not onto dom(M) of size {}", last.g, last.m.len()));
    }
    if !report.ok() {
        return Err(report.to_string().replace('\n', "; "));
    }
    Ok(format!("50 stages, |M| = {}, stable prefix {}", last.m.len(), report.stable_len))
}

fn ac10() -> Verdict {
    let c9 = Term::Const(constant_at(1));
    let literal = Formula::S(c9.clone(), c9.clone(), c9);
    let inj = ScriptedInjury::new(0, literal, 30);
    let r = run(&inj, 50, meta(&[("package", "scripted_injury")]));
    let report = run_checks(&r, 10)?;
    let snaps = &r.trace.snapshots;
    let o1: Vec<usize> = (1..snaps.len()).filter(|&t| matches!(snaps[t].case, Case::O1 { .. })).collect();
    let [t] = o1[..] else {
        return Err(format!("O1 events at {o1:?}"));
    };
    // the injury keeps the markers below the injured one and the rest only
    // end-extends them
    let (before, at) = (snaps[t - 1].state.marker_consts(), snaps[t].state.marker_consts());
    if at.len() >= before.len() || before[..at.len()] != at[..] {
        return Err(format!("O1 at stage {t} does not truncate the markers"));
    }
    for w in snaps[t..].windows(2) {
        let (old, new) = (w[0].state.marker_consts(), w[1].state.marker_consts());
        if new.len() < old.len() || new[..old.len()] != old[..] {
            return Err(format!("markers not end-extended at stage {}", w[1].state.i));
        }
    }
    if !report.ok() {
        return Err(report.to_string().replace('\n', "; "));
    }
    Ok(format!("one O1 at stage {t}, restabilized with {} markers", snaps.last().unwrap().state.markers.len()))
}

fn ac11() -> Verdict {
    let dir = std::env::temp_dir().join(format!("hfmodel-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let mut traces = Vec::new();
    for (tag, extra) in [("generic", vec![]), ("injury", vec!["package=scripted_injury", "injury.literal=S(c9,c9,c9)"])] {
        let mut bytes = Vec::new();
        for k in 0..2 {
            let path = dir.join(format!("{tag}-{k}.trace"));
            let mut cmd = Command::new(env!("CARGO_BIN_EXE_hfmodel"));
            cmd.args(["construct", "run", "--set", "seed=5", "--trace"]).arg(&path);
            for s in &extra {
                cmd.args(["--set", s]);
            }
            let out = cmd.output().map_err(|e| e.to_string())?;
            if !matches!(out.status.code(), Some(0 | 1)) {
                return Err(format!("{tag}: exit {:?}", out.status.code()));
            }
            bytes.push(std::fs::read(&path).map_err(|e| e.to_string())?);
        }
        if bytes[0] != bytes[1] {
            return Err(format!("{tag} traces differ"));
        }
        traces.push(format!("{tag} {} bytes", bytes[0].len()));
    }
    let _ = std::fs::remove_dir_all(&dir);
    Ok(traces.join(", "))
}

// ---------- bit formula ----------

/// The standard HF model on `V_5` with real ∈, and zero and successor
/// transported through the Ackermann code. Quantifiers range over `V_4`.
struct Hf {
    sets: Vec<HfSet>,
    codes: Vec<usize>,
    by_code: HashMap<usize, usize>,
    quantified: Vec<usize>,
}

impl Model for Hf {
    type Elem = usize;

    fn domain(&self) -> Vec<usize> {
        self.quantified.clone()
    }

    fn s(&self, a: &usize, b: &usize, c: &usize) -> bool {
        decide_s(&self.sets[*a], &self.sets[*b], &self.sets[*c])
    }

    fn mem(&self, a: &usize, b: &usize) -> bool {
        self.sets[*b].contains(&self.sets[*a])
    }

    fn eq(&self, a: &usize, b: &usize) -> bool {
        a == b
    }

    fn pred(&self, name: &str, args: &[usize]) -> hfmodel::Result<bool> {
        Ok(match (name, args) {
            ("zero", [y]) => self.codes[*y] == 0,
            ("suc", [y, z]) => self.codes[*z] == self.codes[*y] + 1,
            ("mem", [y, x]) => self.mem(y, x),
            _ => return Err(hfmodel::Error::MissingDefinition(name.into())),
        })
    }
}

fn ac12() -> Verdict {
    let sets = level(5);
    let codes: Vec<usize> = sets.iter().map(|s| iack(s).unwrap().try_into().unwrap()).collect();
    let by_code = codes.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let quantified = (0..sets.len()).filter(|&i| sets[i].rank() <= 3).collect();
    let model = Hf { sets, codes, by_code, quantified };
    let (zero, suc, mem) = (Template::pred("zero", 1), Template::pred("suc", 2), Template::pred("mem", 2));
    let mut checked = 0;
    for i in 0..8 {
        let f = bit_formula(i, &zero, &suc, &mem).map_err(|e| e.to_string())?;
        for code in 0..1usize << 16 {
            let b = model.by_code[&code];
            let got = eval(&model, &f, &[("x".to_string(), b)]).map_err(|e| e.to_string())?;
            if got != ack_mem(&big(i), &big(code)) {
                return Err(format!("bit {i} of {code}"));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} (i, b) pairs"))
}

fn main() -> ExitCode {
    let criteria: [(&str, u64, fn() -> Verdict); 12] = [
        ("Ackermann synonymy", 1, ac1),
        ("transported arithmetic", 1, ac2),
        ("in_def suite", 10, ac3),
        ("stagewise oracle", 60, ac4),
        ("univ suite", 60, ac5),
        ("only_good suite", 10, ac6),
        ("neutral-extension counts", 1, ac7),
        ("closure decidability", 10, ac8),
        ("construction invariants", 300, ac9),
        ("injury behavior", 60, ac10),
        ("determinism", 300, ac11),
        ("bit formula", 10, ac12),
    ];
    let mut failed = 0;
    for (n, (name, limit, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict = f();
        let took = start.elapsed();
        let timely = took <= Duration::from_secs(*limit);
        let (ok, detail) = match verdict {
            Ok(d) if timely => (true, d),
            Ok(d) => (false, format!("{d}; too slow")),
            Err(d) => (false, d),
        };
        failed += usize::from(!ok);
        println!(
            "AC{:<2} {} {name}: {detail} ({:.2} s, limit {limit} s)",
            n + 1,
            if ok { "pass" } else { "FAIL" },
            took.as_secs_f64()
        );
    }
    println!("{} of 12 criteria pass", 12 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
