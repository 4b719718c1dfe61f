//! Hereditarily finite sets in canonical form and the Ackermann coding.
//!
//! Every [`HfSet`] stores its elements sorted by the canonical order (rank
//! first, then the element lists lexicographically) without duplicates, so
//! structural equality coincides with representation equality.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, ParseError, Result};

/// Largest bit index an Ackermann code may use. Codes of sets of rank 5 need
/// up to 65536 bits; anything past this bound is rejected instead of
/// exhausting memory.
pub const MAX_CODE_BITS: u64 = 1 << 24;

/// Default cardinality budget for [`v_level`].
pub const DEFAULT_LEVEL_BUDGET: usize = 65_536;

struct Node {
    rank: u32,
    hash: u64,
    elems: Box<[HfSet]>,
}

/// A hereditarily finite set.
#[derive(Clone)]
pub struct HfSet(Arc<Node>);

fn mix(h: u64, v: u64) -> u64 {
    // FNV-1a over the eight bytes of `v`
    let mut h = h;
    for b in v.to_le_bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x100_0000_01b3);
    }
    h
}

impl HfSet {
    /// The empty set.
    pub fn empty() -> Self {
        Self::from_sorted(Vec::new())
    }

    fn from_sorted(elems: Vec<HfSet>) -> Self {
        let rank = elems.iter().map(|e| e.rank() + 1).max().unwrap_or(0);
        let mut hash = mix(0xcbf2_9ce4_8422_2325, elems.len() as u64);
        for e in &elems {
            hash = mix(hash, e.0.hash);
        }
        HfSet(Arc::new(Node {
            rank,
            hash,
            elems: elems.into_boxed_slice(),
        }))
    }

    /// Builds the canonical set whose elements are exactly the distinct inputs.
    pub fn canon<I: IntoIterator<Item = HfSet>>(elems: I) -> Self {
        let mut v: Vec<HfSet> = elems.into_iter().collect();
        v.sort();
        v.dedup();
        Self::from_sorted(v)
    }

    /// `{x}`
    pub fn singleton(x: HfSet) -> Self {
        Self::from_sorted(vec![x])
    }

    /// `{x, y}` (collapses to `{x}` when equal).
    pub fn pair(x: HfSet, y: HfSet) -> Self {
        Self::canon([x, y])
    }

    /// The von Neumann ordinal `n`.
    pub fn ordinal(n: usize) -> Self {
        let mut elems: Vec<HfSet> = Vec::with_capacity(n);
        for _ in 0..n {
            let next = Self::from_sorted(elems.clone());
            elems.push(next);
        }
        Self::from_sorted(elems)
    }

    pub fn rank(&self) -> u32 {
        self.0.rank
    }

    pub fn elements(&self) -> &[HfSet] {
        &self.0.elems
    }

    pub fn len(&self) -> usize {
        self.0.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.elems.is_empty()
    }

    /// Real membership `x ∈ self`.
    pub fn contains(&self, x: &HfSet) -> bool {
        if x.rank() >= self.rank() {
            return false;
        }
        self.0.elems.binary_search(x).is_ok()
    }

    /// Recovers the von Neumann ordinal this set denotes, if it is one.
    pub fn as_ordinal(&self) -> Option<usize> {
        let n = self.len();
        if self.rank() as usize != n {
            return None;
        }
        // elements sorted by rank, so element i must be ordinal i
        for (i, e) in self.elements().iter().enumerate() {
            if e.rank() as usize != i || e.as_ordinal() != Some(i) {
                return None;
            }
        }
        Some(n)
    }

    /// A 64-bit structural fingerprint (equal sets have equal fingerprints).
    pub fn fingerprint(&self) -> u64 {
        self.0.hash
    }
}

impl PartialEq for HfSet {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.hash == other.0.hash
                && self.0.rank == other.0.rank
                && self.0.elems == other.0.elems)
    }
}

impl Eq for HfSet {}

impl Hash for HfSet {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.hash);
    }
}

impl Ord for HfSet {
    fn cmp(&self, other: &Self) -> Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            return Ordering::Equal;
        }
        self.0
            .rank
            .cmp(&other.0.rank)
            .then_with(|| self.0.elems.iter().cmp(other.0.elems.iter()))
    }
}

impl PartialOrd for HfSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for HfSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, e) in self.elements().iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for HfSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Parses a set literal starting at `*pos`, advancing past it.
pub(crate) fn parse_set_at(src: &str, pos: &mut usize) -> std::result::Result<HfSet, ParseError> {
    let bytes = src.as_bytes();
    let skip_ws = |pos: &mut usize| {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
    };
    skip_ws(pos);
    if *pos >= bytes.len() || bytes[*pos] != b'{' {
        return Err(ParseError::new(*pos, "expected '{'"));
    }
    *pos += 1;
    let mut elems = Vec::new();
    skip_ws(pos);
    if *pos < bytes.len() && bytes[*pos] == b'}' {
        *pos += 1;
        return Ok(HfSet::empty());
    }
    loop {
        elems.push(parse_set_at(src, pos)?);
        skip_ws(pos);
        match bytes.get(*pos) {
            Some(b',') => *pos += 1,
            Some(b'}') => {
                *pos += 1;
                return Ok(HfSet::canon(elems));
            }
            _ => return Err(ParseError::new(*pos, "expected ',' or '}'")),
        }
    }
}

impl FromStr for HfSet {
    type Err = ParseError;

    fn from_str(s: &str) -> std::result::Result<Self, ParseError> {
        let mut pos = 0;
        let set = parse_set_at(s, &mut pos)?;
        if s[pos..].trim().is_empty() {
            Ok(set)
        } else {
            Err(ParseError::new(pos, "trailing input after set literal"))
        }
    }
}

/// The empty set.
pub fn empty() -> HfSet {
    HfSet::empty()
}

/// Von Neumann rank.
pub fn rank(x: &HfSet) -> u32 {
    x.rank()
}

/// Kuratowski pair `{{x},{x,y}}`.
pub fn kpair(x: &HfSet, y: &HfSet) -> HfSet {
    HfSet::pair(
        HfSet::singleton(x.clone()),
        HfSet::pair(x.clone(), y.clone()),
    )
}

/// Inverts [`kpair`]; `None` on anything that is not a Kuratowski pair.
pub fn kpair_decode(z: &HfSet) -> Option<(HfSet, HfSet)> {
    match z.elements() {
        [only] => match only.elements() {
            [x] => Some((x.clone(), x.clone())),
            _ => None,
        },
        [a, b] => {
            // one singleton {x} and one doubleton {x,y}
            let (single, double) = match (a.len(), b.len()) {
                (1, 2) => (a, b),
                (2, 1) => (b, a),
                _ => return None,
            };
            let x = &single.elements()[0];
            let d = double.elements();
            if d[0] == *x {
                Some((x.clone(), d[1].clone()))
            } else if d[1] == *x {
                Some((x.clone(), d[0].clone()))
            } else {
                None
            }
        }
        _ => None,
    }
}

/// Enumerates `V_k`, the sets of rank `< k`, in canonical order.
pub fn v_level(k: u32, budget: usize) -> Result<Vec<HfSet>> {
    let mut level: Vec<HfSet> = Vec::new();
    for _ in 0..k {
        let n = level.len();
        if n >= usize::BITS as usize - 1 || (1usize << n) > budget {
            return Err(Error::Budget(format!(
                "|V_{k}| exceeds the cardinality budget {budget}"
            )));
        }
        let mut next = Vec::with_capacity(1 << n);
        for mask in 0usize..(1 << n) {
            let elems: Vec<HfSet> = (0..n)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| level[i].clone())
                .collect();
            next.push(HfSet::from_sorted(elems));
        }
        next.sort();
        level = next;
    }
    Ok(level)
}

/// The Ackermann code `iack(x) = Σ_{y∈x} 2^iack(y)`.
pub fn iack(x: &HfSet) -> Result<BigUint> {
    let mut n = BigUint::zero();
    for y in x.elements() {
        let bit = iack(y)?;
        let bit = bit
            .to_u64()
            .filter(|b| *b < MAX_CODE_BITS)
            .ok_or_else(|| Error::Budget(format!("Ackermann code of {y} is too large to use as a bit index")))?;
        n.set_bit(bit, true);
    }
    Ok(n)
}

/// Inverse of [`iack`].
pub fn iack_inv(n: &BigUint) -> HfSet {
    let elems: Vec<HfSet> = (0..n.bits())
        .filter(|&i| n.bit(i))
        .map(|i| iack_inv(&BigUint::from(i)))
        .collect();
    HfSet::canon(elems)
}

/// Ackermann membership: bit `n` of `m` is set.
pub fn ack_mem(n: &BigUint, m: &BigUint) -> bool {
    match n.to_u64() {
        Some(i) => m.bit(i),
        None => false,
    }
}

/// `x +_iack y`
pub fn transported_add(x: &HfSet, y: &HfSet) -> Result<HfSet> {
    Ok(iack_inv(&(iack(x)? + iack(y)?)))
}

/// `x ×_iack y`
pub fn transported_mul(x: &HfSet, y: &HfSet) -> Result<HfSet> {
    Ok(iack_inv(&(iack(x)? * iack(y)?)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(text: &str) -> HfSet {
        text.parse().unwrap()
    }

    #[test]
    fn canon_dedups_and_orders() {
        let e = HfSet::empty();
        assert!(HfSet::canon([]).is_empty());
        assert_eq!(HfSet::canon([e.clone(), e.clone()]), s("{{}}"));
        let one = HfSet::singleton(e.clone());
        let a = HfSet::canon([one.clone(), e.clone()]);
        assert_eq!(a.elements(), &[e, one]);
        assert_eq!(a.to_string(), "{{},{{}}}");
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&s("{}")), 0);
        assert_eq!(rank(&s("{{}}")), 1);
        assert_eq!(rank(&kpair(&empty(), &empty())), 2);
    }

    #[test]
    fn kpair_examples() {
        let e = empty();
        assert_eq!(kpair(&e, &e), s("{{{}}}"));
        assert_eq!(kpair(&e, &s("{{}}")), s("{{{}},{{},{{}}}}"));
        assert_eq!(kpair_decode(&e), None);
        assert_eq!(kpair_decode(&s("{{},{{}}}")), None);
    }

    #[test]
    fn kpair_roundtrip_and_injective_up_to_rank_3() {
        let v4 = v_level(4, DEFAULT_LEVEL_BUDGET).unwrap();
        let mut seen = std::collections::HashSet::new();
        for a in &v4 {
            for b in &v4 {
                let z = kpair(a, b);
                assert_eq!(kpair_decode(&z), Some((a.clone(), b.clone())));
                assert!(seen.insert(z));
            }
        }
    }

    #[test]
    fn level_sizes() {
        assert!(v_level(0, 10).unwrap().is_empty());
        assert_eq!(v_level(2, 10).unwrap(), vec![s("{}"), s("{{}}")]);
        assert_eq!(v_level(4, 100).unwrap().len(), 16);
        assert!(matches!(v_level(6, DEFAULT_LEVEL_BUDGET), Err(Error::Budget(_))));
    }

    #[test]
    fn level_rank_duality() {
        let v5 = v_level(5, DEFAULT_LEVEL_BUDGET).unwrap();
        for k in 0..=4 {
            let vk = v_level(k, DEFAULT_LEVEL_BUDGET).unwrap();
            for x in &v5 {
                assert_eq!(vk.binary_search(x).is_ok(), x.rank() < k);
            }
        }
    }

    #[test]
    fn iack_examples() {
        assert_eq!(iack(&empty()).unwrap(), BigUint::zero());
        assert_eq!(iack(&s("{{},{{}}}")).unwrap(), BigUint::from(3u8));
        assert_eq!(iack_inv(&BigUint::from(2u8)), s("{{{}}}"));
    }

    #[test]
    fn ack_mem_examples() {
        let n = |v: u32| BigUint::from(v);
        assert!(ack_mem(&n(0), &n(3)));
        assert!(ack_mem(&n(1), &n(2)));
        assert!(!ack_mem(&n(0), &n(2)));
    }

    #[test]
    fn transported_arithmetic_examples() {
        let one = s("{{}}");
        assert_eq!(transported_add(&one, &one).unwrap(), s("{{{}}}"));
        let three = s("{{},{{}}}");
        assert_eq!(
            transported_mul(&three, &three).unwrap(),
            s("{{},{{},{{}}}}")
        );
        for b in v_level(4, 100).unwrap() {
            assert_eq!(transported_add(&empty(), &b).unwrap(), b);
        }
    }

    #[test]
    fn ordinals() {
        assert_eq!(HfSet::ordinal(0), empty());
        assert_eq!(HfSet::ordinal(2), s("{{},{{}}}"));
        assert_eq!(HfSet::ordinal(9).rank(), 9);
        assert_eq!(HfSet::ordinal(9).as_ordinal(), Some(9));
        assert_eq!(s("{{{}}}").as_ordinal(), None);
    }

    #[test]
    fn parse_errors_have_positions() {
        let err = "{{},".parse::<HfSet>().unwrap_err();
        assert_eq!(err.pos, 4);
        assert!("{} x".parse::<HfSet>().is_err());
        assert_eq!(" { { } , { } } ".parse::<HfSet>().unwrap(), s("{{}}"));
    }
}
