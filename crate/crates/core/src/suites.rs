//! Desk-scale property suites for the relation `S`, run by `verify`.

use std::collections::HashSet;
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::hf::{kpair, v_level, HfSet, DEFAULT_LEVEL_BUDGET};
use crate::srel::{
    decide_s, embed_neutral, encode_struct, indef_witness, least_alpha, witnesses_over,
};
use crate::structures::{induced_structure, neutral_extensions, Atom};

pub const SUITES: [&str; 4] = ["in_def", "univ", "only_good", "oracle"];

/// Outcome of one suite.
#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub name: String,
    pub bounds: String,
    pub checked: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "suite {} ({})", self.name, self.bounds)?;
        writeln!(f, "checked {} cases, {} failures", self.checked, self.failures.len())?;
        for m in self.failures.iter().take(20) {
            writeln!(f, "  {m}")?;
        }
        write!(f, "{}", if self.ok() { "pass" } else { "FAIL" })
    }
}

fn level(k: u32) -> Vec<HfSet> {
    v_level(k, DEFAULT_LEVEL_BUDGET).expect("small level")
}

pub fn run_suite(name: &str, seed: u64) -> Result<SuiteReport> {
    match name {
        "in_def" => in_def(seed, 200),
        "univ" => univ(),
        "only_good" => Ok(only_good(seed, 500)),
        "oracle" => oracle(),
        other => Err(Error::Precondition(format!("unknown suite `{other}`"))),
    }
}

/// `a ∉ b ⇒ ¬S(a,b,indef_witness(a,b))` on `V_3`, and `a ∈ b ⇒ S(a,b,c)` for
/// sampled `c`.
pub fn in_def(seed: u64, samples: usize) -> Result<SuiteReport> {
    let v3 = level(3);
    let v4 = level(4);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut shaped = Vec::new();
    for a in &v3 {
        for b in &v3 {
            if !b.contains(a) {
                shaped.push(indef_witness(a, b)?);
            }
        }
    }
    let mut failures = Vec::new();
    let mut checked = 0;
    for a in &v3 {
        for b in &v3 {
            checked += 1;
            if b.contains(a) {
                for _ in 0..samples {
                    let c = if rng.gen::<bool>() {
                        shaped.choose(&mut rng).expect("nonempty").clone()
                    } else {
                        v4.choose(&mut rng).expect("nonempty").clone()
                    };
                    if !decide_s(a, b, &c) {
                        failures.push(format!("{a} ∈ {b} but ¬S(a,b,c) for c of rank {}", c.rank()));
                    }
                }
            } else if decide_s(a, b, &indef_witness(a, b)?) {
                failures.push(format!("S({a},{b},indef_witness) holds"));
            }
        }
    }
    Ok(SuiteReport {
        name: "in_def".into(),
        bounds: format!("exhaustive over V_3 pairs, {samples} seeded samples per a ∈ b, seed {seed}"),
        checked,
        failures,
    })
}

/// Every valid witness with `|B| ≤ 3` over domains `⊆ V_2` embeds
/// neutrally into `(V, S, ∈)`.
pub fn univ() -> Result<SuiteReport> {
    let v2 = level(2);
    let mut doms: Vec<Vec<HfSet>> = vec![vec![]];
    for (i, a) in v2.iter().enumerate() {
        doms.push(vec![a.clone()]);
        for b in &v2[i + 1..] {
            doms.push(vec![a.clone(), b.clone()]);
        }
    }
    let mut failures = Vec::new();
    let mut checked = 0;
    for dom in &doms {
        for w in witnesses_over(least_alpha(dom), dom)? {
            checked += 1;
            if let Err(e) = embed_neutral(&w) {
                failures.push(format!("witness over {dom:?}: {e}"));
            }
        }
    }
    Ok(SuiteReport {
        name: "univ".into(),
        bounds: "all witnesses with |B| ≤ 3 over domains ⊆ V_2, least stage".into(),
        checked,
        failures,
    })
}

/// Induced structures on sampled tuples of distinct sets of rank ≤ 3 are
/// (S,∈)-structures.
pub fn only_good(seed: u64, samples: usize) -> SuiteReport {
    let v4 = level(4);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for _ in 0..samples {
        let n = rng.gen_range(1..=4);
        let tuple: Vec<HfSet> = v4.choose_multiple(&mut rng, n).cloned().collect();
        let st = induced_structure(&tuple, decide_s).expect("distinct");
        if !st.validate() {
            failures.push(format!("{tuple:?}"));
        }
    }
    SuiteReport {
        name: "only_good".into(),
        bounds: format!("{samples} seeded tuples of 1 to 4 distinct sets in V_4, seed {seed}"),
        checked: samples,
        failures,
    }
}

/// `S` rebuilt directly from stage-0 witnesses over domains of at most one
/// element of `V_2`, compared with [`decide_s`] on `V_4` plus those witnesses.
pub fn oracle() -> Result<SuiteReport> {
    let mut universe = level(4);
    let v2 = level(2);
    let mut doms = vec![vec![]];
    doms.extend(v2.iter().map(|a| vec![a.clone()]));
    // indices of the triples the forward construction makes false
    let mut falses = HashSet::new();
    for dom in doms {
        let a = induced_structure(&dom, |_, _, _| true)?;
        let fresh = (0..)
            .map(HfSet::ordinal)
            .find(|x| !dom.contains(x))
            .expect("some ordinal is fresh");
        for b in neutral_extensions(&a, Atom::Set(fresh))? {
            let w = kpair(&HfSet::ordinal(3), &kpair(&encode_struct(&a)?, &encode_struct(&b)?));
            let mut idx: Vec<usize> = dom
                .iter()
                .map(|d| universe.iter().position(|u| u == d).expect("dom ⊆ V_4"))
                .collect();
            idx.push(universe.len());
            universe.push(w);
            let m = idx.len();
            for i in 0..m {
                for j in 0..m {
                    for k in 0..m {
                        if !b.s(i, j, k) {
                            falses.insert((idx[i], idx[j], idx[k]));
                        }
                    }
                }
            }
        }
    }
    let mut failures = Vec::new();
    let n = universe.len();
    for (ia, a) in universe.iter().enumerate() {
        for (ib, b) in universe.iter().enumerate() {
            for (ic, c) in universe.iter().enumerate() {
                let expected = !falses.contains(&(ia, ib, ic));
                if decide_s(a, b, c) != expected && failures.len() < 100 {
                    failures.push(format!("triple ({ia},{ib},{ic}) of the universe"));
                }
            }
        }
    }
    let checked = n * n * n;
    Ok(SuiteReport {
        name: "oracle".into(),
        bounds: format!("all {n}³ triples of V_4 ∪ stage-0 witnesses over domains of ≤ 1 set in V_2"),
        checked,
        failures,
    })
}
