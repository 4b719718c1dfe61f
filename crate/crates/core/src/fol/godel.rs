//! Prefix-free binary Gödel numbering and interned Henkin constants.
//!
//! A formula is written as a bit string and its code is the natural whose
//! binary expansion is `1` followed by those bits. Node tags are three bits:
//!
//! ```text
//! 000 true   001 false  010 atom   011 not
//! 100 and    101 or     110 ->     111 quantifier
//! ```
//!
//! Atoms carry a two-bit kind (`00` S, `01` in, `10` =, `11` predicate).
//! A term is `0 name` or `1 gamma(L) b`, where `L` is the bit length of the
//! constant's code and `b` are its `L - 1` bits after the leading one. Names
//! are `gamma(len)` followed by their bytes. Every part is prefix-free, so
//! the code of a formula mentioning a constant is strictly longer (hence
//! larger) than the constant's own code.
//!
//! Codes of constants that index diagrams of other constants grow very
//! quickly, so constants are interned and carry their code *length*; the
//! numeric order on codes is computed structurally without materializing
//! them.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use sha2::{Digest, Sha256};

use super::{Formula, Term, HENKIN_VAR};
use crate::error::{Error, Result};
use crate::structures::Provenance;

/// Constants whose code has at most this many bits print as `c<code>`;
/// longer ones print as `c[<formula>]`.
pub const PRINT_CODE_BITS: u64 = 256;

/// Upper bound on the number of bits [`godel_code`] will materialize.
const MATERIALIZE_BITS: u64 = 1 << 22;

struct ConstNode {
    formula: Formula,
    bits: BigUint,
    fp: [u8; 16],
    provenance: OnceLock<Option<Arc<Provenance>>>,
}

/// A Henkin constant `c_φ`. Instances are interned: two constants are equal
/// iff they index the same formula.
#[derive(Clone)]
pub struct HenkinConst(Arc<ConstNode>);

fn interner() -> &'static Mutex<HashMap<[u8; 16], Vec<HenkinConst>>> {
    static INTERNER: OnceLock<Mutex<HashMap<[u8; 16], Vec<HenkinConst>>>> = OnceLock::new();
    INTERNER.get_or_init(Default::default)
}

impl HenkinConst {
    /// `c_φ` for a formula whose free variables are among `{x}`.
    pub fn new(formula: Formula) -> Result<Self> {
        let free = formula.free_vars();
        if let Some(v) = free.iter().find(|v| *v != HENKIN_VAR) {
            return Err(Error::Precondition(format!(
                "Henkin constants index formulas free only in `{HENKIN_VAR}`, found free `{v}`"
            )));
        }
        Ok(Self::intern(formula))
    }

    fn intern(formula: Formula) -> Self {
        let fp = formula_fingerprint(&formula);
        let mut table = interner().lock().expect("interner poisoned");
        let bucket = table.entry(fp).or_default();
        if let Some(c) = bucket.iter().find(|c| c.0.formula == formula) {
            return c.clone();
        }
        let bits = body_len(&formula) + 1u32;
        let c = HenkinConst(Arc::new(ConstNode {
            formula,
            bits,
            fp,
            provenance: OnceLock::new(),
        }));
        bucket.push(c.clone());
        c
    }

    /// The formula `φ(x)` this constant indexes.
    pub fn formula(&self) -> &Formula {
        &self.0.formula
    }

    /// Bit length of the Gödel code.
    pub fn code_bits(&self) -> &BigUint {
        &self.0.bits
    }

    /// The Gödel code of the indexing formula, if it is small enough to
    /// materialize.
    pub fn code(&self) -> Result<BigUint> {
        godel_code(&self.0.formula)
    }

    pub fn fingerprint(&self) -> [u8; 16] {
        self.0.fp
    }

    /// Short hex id derived from the fingerprint.
    pub fn short_id(&self) -> String {
        self.0.fp[..8].iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Whether the code is small enough to print in decimal.
    pub fn is_small(&self) -> bool {
        self.0.bits <= BigUint::from(PRINT_CODE_BITS)
    }

    pub(crate) fn provenance_cell(&self) -> &OnceLock<Option<Arc<Provenance>>> {
        &self.0.provenance
    }
}

impl PartialEq for HenkinConst {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }
}

impl Eq for HenkinConst {}

impl Hash for HenkinConst {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write(&self.0.fp);
    }
}

impl Ord for HenkinConst {
    /// Numeric order of Gödel codes.
    fn cmp(&self, other: &Self) -> Ordering {
        if self == other {
            return Ordering::Equal;
        }
        self.0
            .bits
            .cmp(&other.0.bits)
            .then_with(|| lex_formula(&self.0.formula, &other.0.formula))
    }
}

impl PartialOrd for HenkinConst {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for HenkinConst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_small() {
            let code = godel_code(&self.0.formula).map_err(|_| fmt::Error)?;
            write!(f, "c{code}")
        } else {
            write!(f, "c[{}]", self.0.formula)
        }
    }
}

impl fmt::Debug for HenkinConst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_small() {
            fmt::Display::fmt(self, f)
        } else {
            write!(f, "c#{}", self.short_id())
        }
    }
}

fn formula_fingerprint(f: &Formula) -> [u8; 16] {
    let mut h = Sha256::new();
    feed_formula(f, &mut h);
    let digest = h.finalize();
    let mut out = [0u8; 16];
    out.copy_from_slice(&digest[..16]);
    out
}

fn feed_term(t: &Term, h: &mut Sha256) {
    match t {
        Term::Var(v) => {
            h.update([0u8]);
            h.update((v.len() as u64).to_le_bytes());
            h.update(v.as_bytes());
        }
        Term::Const(c) => {
            h.update([1u8]);
            h.update(c.0.fp);
        }
    }
}

fn feed_formula(f: &Formula, h: &mut Sha256) {
    match f {
        Formula::True => h.update([0u8]),
        Formula::False => h.update([1u8]),
        Formula::S(a, b, c) => {
            h.update([2u8]);
            for t in [a, b, c] {
                feed_term(t, h);
            }
        }
        Formula::Mem(a, b) => {
            h.update([3u8]);
            feed_term(a, h);
            feed_term(b, h);
        }
        Formula::Eq(a, b) => {
            h.update([4u8]);
            feed_term(a, h);
            feed_term(b, h);
        }
        Formula::Pred(p, args) => {
            h.update([5u8]);
            h.update((p.len() as u64).to_le_bytes());
            h.update(p.as_bytes());
            h.update((args.len() as u64).to_le_bytes());
            for t in args {
                feed_term(t, h);
            }
        }
        Formula::Not(a) => {
            h.update([6u8]);
            feed_formula(a, h);
        }
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            h.update([match f {
                Formula::And(..) => 7u8,
                Formula::Or(..) => 8,
                _ => 9,
            }]);
            feed_formula(a, h);
            feed_formula(b, h);
        }
        Formula::Forall(v, a) | Formula::Exists(v, a) => {
            h.update([if matches!(f, Formula::Forall(..)) { 10u8 } else { 11 }]);
            h.update((v.len() as u64).to_le_bytes());
            h.update(v.as_bytes());
            feed_formula(a, h);
        }
    }
}

// ---------- lengths ----------

fn bitlen_u64(n: u64) -> u64 {
    64 - u64::from(n.leading_zeros())
}

fn gamma_len_big(n: &BigUint) -> BigUint {
    BigUint::from(2 * n.bits() - 1)
}

fn name_len(name: &str) -> u64 {
    let len = name.len() as u64;
    2 * bitlen_u64(len) - 1 + 8 * len
}

fn term_len(t: &Term) -> BigUint {
    match t {
        Term::Var(v) => BigUint::from(1 + name_len(v)),
        Term::Const(c) => gamma_len_big(&c.0.bits) + &c.0.bits,
    }
}

fn tag_of(f: &Formula) -> u8 {
    match f {
        Formula::True => 0,
        Formula::False => 1,
        Formula::S(..) | Formula::Mem(..) | Formula::Eq(..) | Formula::Pred(..) => 2,
        Formula::Not(_) => 3,
        Formula::And(..) => 4,
        Formula::Or(..) => 5,
        Formula::Implies(..) => 6,
        Formula::Forall(..) | Formula::Exists(..) => 7,
    }
}

fn atom_kind(f: &Formula) -> u8 {
    match f {
        Formula::S(..) => 0,
        Formula::Mem(..) => 1,
        Formula::Eq(..) => 2,
        _ => 3,
    }
}

fn body_len(f: &Formula) -> BigUint {
    match f {
        Formula::True | Formula::False => BigUint::from(3u32),
        Formula::Pred(p, args) => {
            let arity = args.len() as u64 + 1;
            let mut n = BigUint::from(5 + name_len(p) + 2 * bitlen_u64(arity) - 1);
            for t in args {
                n += term_len(t);
            }
            n
        }
        atom if atom.is_atomic() => {
            let mut n = BigUint::from(5u32);
            for t in atom.atom_terms() {
                n += term_len(t);
            }
            n
        }
        Formula::Not(a) => body_len(a) + 3u32,
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            body_len(a) + body_len(b) + 3u32
        }
        Formula::Forall(v, a) | Formula::Exists(v, a) => body_len(a) + (4 + name_len(v)),
        _ => unreachable!(),
    }
}

/// Bit length of the Gödel code of `f`.
pub fn godel_code_bits(f: &Formula) -> BigUint {
    body_len(f) + 1u32
}

// ---------- structural comparison of codes ----------

/// Lexicographic comparison of two gamma codes read as bit streams.
fn lex_gamma(a: &BigUint, b: &BigUint) -> Ordering {
    match a.bits().cmp(&b.bits()) {
        // the shorter one hits its leading 1 while the other still reads 0
        Ordering::Less => Ordering::Greater,
        Ordering::Greater => Ordering::Less,
        Ordering::Equal => a.cmp(b),
    }
}

fn lex_name(a: &str, b: &str) -> Ordering {
    lex_gamma(&BigUint::from(a.len()), &BigUint::from(b.len()))
        .then_with(|| a.as_bytes().cmp(b.as_bytes()))
}

fn lex_term(a: &Term, b: &Term) -> Ordering {
    match (a, b) {
        (Term::Var(x), Term::Var(y)) => lex_name(x, y),
        (Term::Var(_), Term::Const(_)) => Ordering::Less,
        (Term::Const(_), Term::Var(_)) => Ordering::Greater,
        (Term::Const(c), Term::Const(d)) => {
            if c == d {
                return Ordering::Equal;
            }
            lex_gamma(&c.0.bits, &d.0.bits).then_with(|| lex_formula(&c.0.formula, &d.0.formula))
        }
    }
}

/// Compares the bit strings of two formula encodings lexicographically.
fn lex_formula(a: &Formula, b: &Formula) -> Ordering {
    let t = tag_of(a).cmp(&tag_of(b));
    if t != Ordering::Equal {
        return t;
    }
    match (a, b) {
        (Formula::True, _) | (Formula::False, _) => Ordering::Equal,
        (x, y) if x.is_atomic() => {
            let k = atom_kind(x).cmp(&atom_kind(y));
            if k != Ordering::Equal {
                return k;
            }
            if let (Formula::Pred(p, xs), Formula::Pred(q, ys)) = (x, y) {
                let c = lex_name(p, q).then_with(|| {
                    lex_gamma(&BigUint::from(xs.len() + 1), &BigUint::from(ys.len() + 1))
                });
                if c != Ordering::Equal {
                    return c;
                }
            }
            for (s, t) in x.atom_terms().into_iter().zip(y.atom_terms()) {
                let c = lex_term(s, t);
                if c != Ordering::Equal {
                    return c;
                }
            }
            Ordering::Equal
        }
        (Formula::Not(x), Formula::Not(y)) => lex_formula(x, y),
        (Formula::And(x1, x2), Formula::And(y1, y2))
        | (Formula::Or(x1, x2), Formula::Or(y1, y2))
        | (Formula::Implies(x1, x2), Formula::Implies(y1, y2)) => {
            lex_formula(x1, y1).then_with(|| lex_formula(x2, y2))
        }
        (Formula::Forall(v, x) | Formula::Exists(v, x), Formula::Forall(w, y) | Formula::Exists(w, y)) => {
            let qa = matches!(a, Formula::Exists(..));
            let qb = matches!(b, Formula::Exists(..));
            qa.cmp(&qb)
                .then_with(|| lex_name(v, w))
                .then_with(|| lex_formula(x, y))
        }
        _ => unreachable!("tags matched"),
    }
}

// ---------- materialization ----------

struct BitWriter {
    bits: Vec<bool>,
}

impl BitWriter {
    fn push_n(&mut self, value: u64, n: u32) {
        for i in (0..n).rev() {
            self.bits.push(value >> i & 1 == 1);
        }
    }

    fn gamma_u64(&mut self, n: u64) {
        let l = bitlen_u64(n) as u32;
        for _ in 1..l {
            self.bits.push(false);
        }
        self.push_n(n, l);
    }

    fn name(&mut self, s: &str) {
        self.gamma_u64(s.len() as u64);
        for b in s.bytes() {
            self.push_n(u64::from(b), 8);
        }
    }

    fn term(&mut self, t: &Term) {
        match t {
            Term::Var(v) => {
                self.bits.push(false);
                self.name(v);
            }
            Term::Const(c) => {
                self.bits.push(true);
                let l = c.0.bits.to_u64().expect("checked by caller");
                self.gamma_u64(l);
                self.formula(&c.0.formula);
            }
        }
    }

    fn formula(&mut self, f: &Formula) {
        self.push_n(u64::from(tag_of(f)), 3);
        match f {
            Formula::True | Formula::False => {}
            Formula::Not(a) => self.formula(a),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                self.formula(a);
                self.formula(b);
            }
            Formula::Forall(v, a) | Formula::Exists(v, a) => {
                self.bits.push(matches!(f, Formula::Exists(..)));
                self.name(v);
                self.formula(a);
            }
            atom => {
                self.push_n(u64::from(atom_kind(atom)), 2);
                if let Formula::Pred(p, args) = atom {
                    self.name(p);
                    self.gamma_u64(args.len() as u64 + 1);
                }
                for t in atom.atom_terms() {
                    self.term(t);
                }
            }
        }
    }
}

/// The Gödel code of `f`. Fails with a budget error when the code is too
/// long to materialize.
pub fn godel_code(f: &Formula) -> Result<BigUint> {
    let bits = godel_code_bits(f);
    if bits > BigUint::from(MATERIALIZE_BITS) {
        return Err(Error::Budget(format!("Gödel code has {bits} bits")));
    }
    let mut w = BitWriter { bits: vec![true] };
    w.formula(f);
    let mut bytes = vec![0u8; w.bits.len().div_ceil(8)];
    let n = w.bits.len();
    for (i, b) in w.bits.iter().enumerate() {
        if *b {
            // little-endian bit position of the i-th most significant bit
            let pos = n - 1 - i;
            bytes[pos / 8] |= 1 << (pos % 8);
        }
    }
    Ok(BigUint::from_bytes_le(&bytes))
}

// ---------- decoding ----------

struct BitReader<'a> {
    bits: &'a [bool],
    pos: usize,
}

impl BitReader<'_> {
    fn bit(&mut self) -> Option<bool> {
        let b = *self.bits.get(self.pos)?;
        self.pos += 1;
        Some(b)
    }

    fn take(&mut self, n: u32) -> Option<u64> {
        let mut v = 0u64;
        for _ in 0..n {
            v = v << 1 | u64::from(self.bit()?);
        }
        Some(v)
    }

    fn gamma(&mut self) -> Option<u64> {
        let mut zeros = 0u32;
        while !self.bit()? {
            zeros += 1;
            if zeros > 62 {
                return None;
            }
        }
        let rest = self.take(zeros)?;
        Some(1u64 << zeros | rest)
    }

    fn name(&mut self) -> Option<String> {
        let len = self.gamma()? as usize;
        if len > self.bits.len() {
            return None;
        }
        let mut s = Vec::with_capacity(len);
        for _ in 0..len {
            s.push(self.take(8)? as u8);
        }
        let s = String::from_utf8(s).ok()?;
        super::parse::is_valid_name(&s).then_some(s)
    }

    fn term(&mut self) -> Option<Term> {
        if !self.bit()? {
            return Some(Term::Var(self.name()?));
        }
        let l = self.gamma()? as usize;
        let body_bits = l.checked_sub(1)?;
        let end = self.pos.checked_add(body_bits)?;
        if end > self.bits.len() {
            return None;
        }
        let mut sub = BitReader {
            bits: &self.bits[self.pos..end],
            pos: 0,
        };
        let f = sub.formula()?;
        if sub.pos != body_bits {
            return None;
        }
        self.pos = end;
        HenkinConst::new(f).ok().map(Term::Const)
    }

    fn formula(&mut self) -> Option<Formula> {
        Some(match self.take(3)? {
            0 => Formula::True,
            1 => Formula::False,
            2 => match self.take(2)? {
                0 => Formula::S(self.term()?, self.term()?, self.term()?),
                1 => Formula::Mem(self.term()?, self.term()?),
                2 => Formula::Eq(self.term()?, self.term()?),
                _ => {
                    let p = self.name()?;
                    let arity = self.gamma()? - 1;
                    if arity as usize > self.bits.len() {
                        return None;
                    }
                    let args = (0..arity).map(|_| self.term()).collect::<Option<Vec<_>>>()?;
                    Formula::Pred(p, args)
                }
            },
            3 => Formula::not(self.formula()?),
            4 => Formula::and(self.formula()?, self.formula()?),
            5 => Formula::or(self.formula()?, self.formula()?),
            6 => Formula::implies(self.formula()?, self.formula()?),
            _ => {
                let exists = self.bit()?;
                let v = self.name()?;
                let body = self.formula()?;
                if exists {
                    Formula::Exists(v, Box::new(body))
                } else {
                    Formula::Forall(v, Box::new(body))
                }
            }
        })
    }
}

fn decode_bits(bits: &[bool]) -> Option<Formula> {
    let (&first, rest) = bits.split_first()?;
    if !first {
        return None;
    }
    let mut r = BitReader { bits: rest, pos: 0 };
    let f = r.formula()?;
    (r.pos == rest.len()).then_some(f)
}

/// Decodes a Gödel code; `None` if `code` is not the code of any formula.
pub fn decode_formula(code: &BigUint) -> Option<Formula> {
    let n = code.bits();
    let bits: Vec<bool> = (0..n).rev().map(|i| code.bit(i)).collect();
    decode_bits(&bits)
}

fn decode_u64(n: u64) -> Option<Formula> {
    let l = bitlen_u64(n);
    let bits: Vec<bool> = (0..l).rev().map(|i| n >> i & 1 == 1).collect();
    decode_bits(&bits)
}

// ---------- enumerations ----------

/// `c_φ`; see [`HenkinConst::new`].
pub fn henkin_const(phi: &Formula) -> Result<HenkinConst> {
    HenkinConst::new(phi.clone())
}

/// The Henkin axiom `∃x φ(x) → φ(c_φ)`.
pub fn henkin_axiom(phi: &Formula) -> Result<Formula> {
    let c = henkin_const(phi)?;
    Ok(Formula::implies(
        Formula::exists(HENKIN_VAR, phi.clone()),
        phi.subst1(HENKIN_VAR, &Term::Const(c)),
    ))
}

/// Iterates over all sentences of the base signature in increasing code
/// order.
pub struct SentenceEnumerator {
    next: u64,
}

impl SentenceEnumerator {
    pub fn new() -> Self {
        SentenceEnumerator { next: 1 }
    }
}

impl Default for SentenceEnumerator {
    fn default() -> Self {
        Self::new()
    }
}

impl Iterator for SentenceEnumerator {
    type Item = (u64, Formula);

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            let n = self.next;
            self.next = self.next.checked_add(1)?;
            if let Some(f) = decode_u64(n) {
                if f.is_sentence() && f.is_base_signature() {
                    return Some((n, f));
                }
            }
        }
    }
}

struct Scan {
    next: u64,
    items: Vec<(u64, Formula)>,
}

fn scan_cached(
    cell: &'static OnceLock<Mutex<Scan>>,
    count: usize,
    accept: impl Fn(&Formula) -> bool,
) -> Vec<(u64, Formula)> {
    let m = cell.get_or_init(|| Mutex::new(Scan { next: 1, items: Vec::new() }));
    let mut scan = m.lock().expect("scan cache poisoned");
    while scan.items.len() < count {
        let n = scan.next;
        scan.next += 1;
        if let Some(f) = decode_u64(n) {
            if accept(&f) {
                scan.items.push((n, f));
            }
        }
    }
    scan.items[..count].to_vec()
}

/// The `i`-th sentence in code order.
pub fn sentence_enum(i: usize) -> Formula {
    static CACHE: OnceLock<Mutex<Scan>> = OnceLock::new();
    scan_cached(&CACHE, i + 1, |f| f.is_sentence() && f.is_base_signature())
        .pop()
        .map(|(_, f)| f)
        .expect("enumeration is total")
}

/// The first `count` Henkin constants in code order (an order of type ω).
pub fn constants_up_to(count: usize) -> Vec<HenkinConst> {
    static CACHE: OnceLock<Mutex<Scan>> = OnceLock::new();
    scan_cached(&CACHE, count, |f| {
        f.is_base_signature() && f.free_vars().iter().all(|v| v == HENKIN_VAR)
    })
    .into_iter()
    .map(|(_, f)| HenkinConst::intern(f))
    .collect()
}

/// The `i`-th Henkin constant in code order.
pub fn constant_at(i: usize) -> HenkinConst {
    constants_up_to(i + 1).pop().expect("nonempty")
}

impl HenkinConst {
    /// Whether at most `i` Henkin constants lie strictly below `self`.
    pub fn has_at_most_below(&self, i: usize) -> bool {
        constants_up_to(i + 1).contains(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fol::parse;

    fn p(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn small_codes() {
        assert_eq!(godel_code(&Formula::True).unwrap(), BigUint::from(8u8));
        assert_eq!(godel_code(&Formula::False).unwrap(), BigUint::from(9u8));
        for f in [p("S(x,y,z)"), p("forall y. exists z. !(y in z) | x = z"), p("zero(y)")] {
            let code = godel_code(&f).unwrap();
            assert_eq!(BigUint::from(code.bits()), godel_code_bits(&f));
            assert_eq!(decode_formula(&code), Some(f));
        }
    }

    #[test]
    fn constant_codes_embed() {
        let c = HenkinConst::new(p("x = x")).unwrap();
        let f = Formula::S(Term::Const(c.clone()), Term::var("y"), Term::var("y"));
        assert!(godel_code(&f).unwrap() > c.code().unwrap());
        assert_eq!(decode_formula(&godel_code(&f).unwrap()), Some(f));
    }

    #[test]
    fn henkin_const_rejects_other_free_vars() {
        assert!(HenkinConst::new(p("x = y")).is_err());
        let a = HenkinConst::new(p("x = x")).unwrap();
        let b = HenkinConst::new(p("x = x")).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, HenkinConst::new(p("S(x,x,x)")).unwrap());
        assert_eq!(a.formula(), &p("x = x"));
    }

    #[test]
    fn constant_enumeration_is_increasing() {
        let cs = constants_up_to(40);
        for w in cs.windows(2) {
            assert!(w[0] < w[1]);
            assert!(w[0].code().unwrap() < w[1].code().unwrap());
        }
        assert_eq!(cs[0].formula(), &Formula::True);
        assert!(cs[0].has_at_most_below(0));
        assert!(!cs[5].has_at_most_below(4));
    }

    #[test]
    fn sentence_enum_prefix() {
        assert_eq!(sentence_enum(0), Formula::True);
        assert_eq!(sentence_enum(1), Formula::False);
        let collected: Vec<_> = SentenceEnumerator::new().take(50).collect();
        for (i, (_, f)) in collected.iter().enumerate() {
            assert_eq!(&sentence_enum(i), f);
        }
    }
}
