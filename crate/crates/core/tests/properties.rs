use std::collections::BTreeMap;

use proptest::prelude::*;

use hfmodel::approx::{ApproxStage, BoundedZfPackage, GenericPackage, ScriptedInjury, TheoryPackage};
use hfmodel::construction::{run, Case};
use hfmodel::fol::{
    constant_at, eval, godel_code, parse, prenex, FiniteModel, Formula, HenkinConst, Term,
};
use hfmodel::hf::{iack, iack_inv, kpair, kpair_decode, HfSet};
use hfmodel::structures::{is_sin_embedding, AtomMap, Atom, FinStruct, Kind};

const VARS: [&str; 3] = ["a", "b", "x"];

fn term() -> impl Strategy<Value = Term> {
    prop_oneof![
        3 => (0..VARS.len()).prop_map(|i| Term::var(VARS[i])),
        1 => (0..2usize).prop_map(|i| Term::Const(constant_at(i))),
    ]
}

fn formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        Just(Formula::True),
        Just(Formula::False),
        (term(), term(), term()).prop_map(|(a, b, c)| Formula::S(a, b, c)),
        (term(), term()).prop_map(|(a, b)| Formula::Mem(a, b)),
        (term(), term()).prop_map(|(a, b)| Formula::Eq(a, b)),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            ((0..VARS.len()), inner.clone()).prop_map(|(v, f)| Formula::forall(VARS[v], f)),
            ((0..VARS.len()), inner).prop_map(|(v, f)| Formula::exists(VARS[v], f)),
        ]
    })
}

/// Universally closes every free variable except `keep`.
fn close(f: Formula, keep: &[&str]) -> Formula {
    f.free_vars()
        .into_iter()
        .filter(|v| !keep.contains(&v.as_str()))
        .fold(f, |acc, v| Formula::forall(&v, acc))
}

fn model() -> impl Strategy<Value = FiniteModel> {
    (1..=3usize).prop_flat_map(|n| {
        (
            proptest::collection::vec(any::<bool>(), n * n * n),
            proptest::collection::vec(any::<bool>(), n * n),
            proptest::collection::vec(0..n, 2),
        )
            .prop_map(move |(s, m, cs)| {
                let mut fm = FiniteModel {
                    size: n,
                    ..Default::default()
                };
                for i in 0..n {
                    for j in 0..n {
                        if m[i * n + j] {
                            fm.mem.insert((i, j));
                        }
                        for k in 0..n {
                            if s[(i * n + j) * n + k] {
                                fm.s.insert((i, j, k));
                            }
                        }
                    }
                }
                fm.consts.insert(constant_at(0), cs[0]);
                fm.consts.insert(constant_at(1), cs[1]);
                fm
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn print_parse_roundtrip(f in formula()) {
        prop_assert_eq!(parse(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn prenex_preserves_truth(f in formula(), m in model()) {
        let s = close(f, &[]);
        let (prefix, matrix) = prenex(&s);
        let p = prefix.apply(matrix);
        prop_assert!(hfmodel::fol::is_prenex(&p));
        prop_assert_eq!(eval(&m, &s, &[]).unwrap(), eval(&m, &p, &[]).unwrap());
    }

    #[test]
    fn code_order_matches_codes(f in formula(), g in formula()) {
        let (f, g) = (close(f, &["x"]), close(g, &["x"]));
        let (cf, cg) = (HenkinConst::new(f.clone()).unwrap(), HenkinConst::new(g.clone()).unwrap());
        let (nf, ng) = (godel_code(&f).unwrap(), godel_code(&g).unwrap());
        prop_assert_eq!(cf.cmp(&cg), nf.cmp(&ng));
        prop_assert_eq!(cf == cg, f == g);
    }

    #[test]
    fn ackermann_roundtrip(n in 0u64..1 << 16) {
        let n = num_bigint::BigUint::from(n);
        prop_assert_eq!(iack(&iack_inv(&n)).unwrap(), n);
    }

    #[test]
    fn kpair_decodes(a in 0u64..64, b in 0u64..64) {
        let (x, y) = (iack_inv(&a.into()), iack_inv(&b.into()));
        let p = kpair(&x, &y);
        prop_assert_eq!(kpair_decode(&p), Some((x, y)));
    }
}

// ---------- refutation ----------

fn h(i: usize) -> Term {
    Term::Const(constant_at(i))
}

fn ground_literal() -> impl Strategy<Value = Formula> {
    let atom = prop_oneof![
        (0..3usize, 0..3usize, 0..3usize).prop_map(|(a, b, c)| Formula::S(h(a), h(b), h(c))),
        (0..3usize, 0..3usize).prop_map(|(a, b)| Formula::Mem(h(a), h(b))),
        (0..3usize, 0..3usize).prop_map(|(a, b)| Formula::Eq(h(a), h(b))),
    ];
    (atom, any::<bool>()).prop_map(|(a, t)| if t { a } else { Formula::not(a) })
}

/// Whether some structure on the blocks of an equality partition of
/// `h_0, h_1, h_2` realizes `gamma`. `zf` additionally requires a
/// well-founded ∈ with `a ∈ b ⇒ S(a,b,c)`; otherwise ∈ must be empty.
fn realizable(gamma: &[Formula], zf: bool) -> bool {
    // all maps {0,1,2} → blocks in restricted growth form
    let partitions = [[0, 0, 0], [0, 0, 1], [0, 1, 0], [0, 1, 1], [0, 1, 2]];
    let idx = |t: &Term| (0..3).find(|&i| *t == h(i)).unwrap();
    partitions.iter().any(|p| {
        let mut pos_s = Vec::new();
        let mut neg_s = Vec::new();
        let mut pos_m = Vec::new();
        let mut neg_m = Vec::new();
        for l in gamma {
            let (truth, atom) = match l {
                Formula::Not(a) => (false, &**a),
                a => (true, a),
            };
            match atom {
                Formula::S(a, b, c) => {
                    let t = (p[idx(a)], p[idx(b)], p[idx(c)]);
                    if truth { pos_s.push(t) } else { neg_s.push(t) }
                }
                Formula::Mem(a, b) => {
                    let t = (p[idx(a)], p[idx(b)]);
                    if truth { pos_m.push(t) } else { neg_m.push(t) }
                }
                Formula::Eq(a, b) => {
                    if (p[idx(a)] == p[idx(b)]) != truth {
                        return false;
                    }
                }
                _ => unreachable!(),
            }
        }
        if pos_s.iter().any(|t| neg_s.contains(t)) || pos_m.iter().any(|t| neg_m.contains(t)) {
            return false;
        }
        if !zf {
            return pos_m.is_empty();
        }
        // least ∈ is pos_m; it must be acyclic and compatible with ¬S
        let acyclic = {
            let mut reach = pos_m.clone();
            for _ in 0..3 {
                let more: Vec<_> = reach
                    .iter()
                    .flat_map(|&(a, b)| reach.iter().filter(move |&&(c, _)| c == b).map(move |&(_, d)| (a, d)))
                    .collect();
                reach.extend(more);
            }
            !reach.iter().any(|&(a, b)| a == b)
        };
        acyclic && !neg_s.iter().any(|&(a, b, _)| pos_m.contains(&(a, b)))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn generic_refuter_is_sound_and_monotone(gamma in proptest::collection::vec(ground_literal(), 0..8), j in 0usize..12) {
        let g = GenericPackage::new(0, None);
        if g.refute_within(&gamma, j) {
            prop_assert!(g.refute_within(&gamma, j + 5));
            prop_assert!(!realizable(&gamma, false));
        }
        // exact once the budget covers the literals
        prop_assert_eq!(g.refute_within(&gamma, gamma.len()), !realizable(&gamma, false));
    }

    #[test]
    fn bounded_zf_refuter_is_sound_and_monotone(gamma in proptest::collection::vec(ground_literal(), 0..8), j in 0usize..12) {
        let z = BoundedZfPackage::new(0, None, 2);
        if z.refute_within(&gamma, j) {
            prop_assert!(z.refute_within(&gamma, j + 5));
            prop_assert!(!realizable(&gamma, true));
        }
    }

    #[test]
    fn closure_is_conservative_on_plain_literals(seed in 0u64..50, i in 0usize..40, t in 0usize..60) {
        let g = GenericPackage::new(seed, None);
        let stage = hfmodel::approx::u_stage(&g, i);
        let sigma = g.sentence(t);
        prop_assert_eq!(stage.contains(&sigma), stage.u().contains(&sigma));
    }
}

// ---------- structures ----------

fn structure(atoms: Vec<Atom>) -> impl Strategy<Value = FinStruct> {
    let n = atoms.len();
    (
        proptest::collection::vec(any::<bool>(), n * n * n),
        proptest::collection::vec(prop::bool::weighted(0.2), n * n),
    )
        .prop_map(move |(s, m)| {
            let mut st = FinStruct::new(Kind::SIn, atoms.clone()).unwrap();
            for i in 0..n {
                for j in 0..n {
                    st.set_mem(i, j, m[i * n + j]);
                    for k in 0..n {
                        st.set_s(i, j, k, s[(i * n + j) * n + k] || m[i * n + j]);
                    }
                }
            }
            st
        })
}

fn const_atoms(n: usize) -> Vec<Atom> {
    (0..n).map(|i| Atom::Const(constant_at(i))).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn diagram_roundtrip(st in structure(const_atoms(3))) {
        let diag = st.diagram().unwrap();
        let back = FinStruct::from_diagram(Kind::SIn, &diag).unwrap();
        prop_assert_eq!(back.diagram().unwrap(), diag);
        prop_assert_eq!(st.to_string().parse::<FinStruct>().unwrap(), st);
    }

    #[test]
    fn embeddings_compose(b in structure(const_atoms(3)), keep in proptest::collection::vec(any::<bool>(), 3), perm in Just([2usize, 0, 1])) {
        let idx: Vec<usize> = (0..3).filter(|&i| keep[i]).collect();
        let a = b.induced(&idx);
        let f = AtomMap::identity(a.dom());
        prop_assert!(is_sin_embedding(&f, &a, &b));
        // an isomorphic copy of b on set labels
        let labels: Vec<Atom> = (0..3).map(|i| Atom::Set(HfSet::ordinal(perm[i]))).collect();
        let c = b.rename(|x| labels[b.index_of(x).unwrap()].clone()).unwrap();
        let g = AtomMap::new(b.dom().iter().cloned().zip(labels.iter().cloned()).collect()).unwrap();
        prop_assert!(is_sin_embedding(&g, &b, &c));
        let gf = f.compose(&g).unwrap();
        prop_assert!(is_sin_embedding(&gf, &a, &c));
    }
}

// ---------- construction ----------

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn injured_runs_keep_local_invariants(seed in 0u64..1000, a in 0usize..2, b in 0usize..2, c in 0usize..2, until in 5usize..40) {
        let inj = ScriptedInjury::new(seed, Formula::S(h(a), h(b), h(c)), until);
        let r = run(&inj, 45, BTreeMap::new());
        prop_assert!(r.error.is_none(), "{:?}", r.error);
        for l in &r.local {
            prop_assert!(l.ok(), "{}", l);
        }
        // O1-free stretches only end-extend the marker sequence
        for w in r.trace.snapshots.windows(2) {
            let (old, new) = (&w[0].state, &w[1].state);
            prop_assert!(new.m.len() <= old.m.len() + 1);
            if !matches!(w[1].case, Case::O1 { .. }) {
                let (om, nm) = (old.marker_consts(), new.marker_consts());
                prop_assert!(nm.len() >= om.len() && nm[..om.len()] == om[..]);
            }
            if matches!(w[1].case, Case::O2 { .. }) {
                let mut range = new.g.clone();
                range.sort();
                prop_assert_eq!(range, (0..new.m.len()).collect::<Vec<_>>());
            }
        }
    }
}

#[test]
fn run_from_serialized_trace_replays() {
    let g = GenericPackage::new(9, None);
    let r = run(&g, 35, BTreeMap::new());
    let text = r.trace.to_string();
    let again = run(&g, 35, BTreeMap::new());
    assert_eq!(again.trace.to_string(), text);
    let parsed: hfmodel::construction::Trace = text.parse().unwrap();
    assert_eq!(parsed, again.trace);
    let _ = ApproxStage::new(0, Vec::new());
}
