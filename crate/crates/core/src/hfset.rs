//! Hereditarily finite sets in canonical form.
//!
//! Every [`HfSet`] keeps its elements deduplicated and sorted by a fixed total
//! order on canonical forms, so extensional equality is plain structural
//! equality. Values are immutable and cheap to clone.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;
use std::sync::Arc;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HfError {
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("function is not defined on domain element {0}")]
    NotTotal(HfSet),
}

struct Node {
    elems: Vec<HfSet>,
    rank: usize,
}

/// A hereditarily finite set.
#[derive(Clone)]
pub struct HfSet(Arc<Node>);

impl HfSet {
    /// The empty set.
    pub fn empty() -> Self {
        HfSet(Arc::new(Node { elems: Vec::new(), rank: 0 }))
    }

    /// Builds a set from arbitrary elements, normalizing them.
    pub fn from_elements<I: IntoIterator<Item = HfSet>>(items: I) -> Self {
        let mut elems: Vec<HfSet> = items.into_iter().collect();
        elems.sort();
        elems.dedup();
        Self::from_sorted(elems)
    }

    fn from_sorted(elems: Vec<HfSet>) -> Self {
        let rank = elems.iter().map(|e| e.rank() + 1).max().unwrap_or(0);
        HfSet(Arc::new(Node { elems, rank }))
    }

    /// `{x}`
    pub fn singleton(x: HfSet) -> Self {
        Self::from_sorted(vec![x])
    }

    /// `{x, y}`
    pub fn pair(x: HfSet, y: HfSet) -> Self {
        Self::from_elements([x, y])
    }

    /// The von Neumann natural `n = {0, ..., n-1}`.
    pub fn von_neumann(n: usize) -> Self {
        let mut elems = Vec::with_capacity(n);
        for _ in 0..n {
            // k < k+1 in the canonical order, so pushing keeps `elems` sorted.
            let next = Self::from_sorted(elems.clone());
            elems.push(next);
        }
        Self::from_sorted(elems)
    }

    /// Inverse of [`HfSet::von_neumann`].
    pub fn as_natural(&self) -> Option<usize> {
        let n = self.cardinality();
        (*self == Self::von_neumann(n)).then_some(n)
    }

    /// Kuratowski pair `{{x}, {x, y}}`.
    pub fn kpair(x: HfSet, y: HfSet) -> Self {
        Self::pair(Self::singleton(x.clone()), Self::pair(x, y))
    }

    /// Decodes a Kuratowski pair, or `None` if `self` is not one.
    pub fn decode_kpair(&self) -> Option<(HfSet, HfSet)> {
        match self.elements() {
            [only] => match only.elements() {
                [x] => Some((x.clone(), x.clone())),
                _ => None,
            },
            [a, b] => {
                let (single, double) = if a.cardinality() == 1 { (a, b) } else { (b, a) };
                let [x] = single.elements() else { return None };
                if double.cardinality() != 2 || !double.contains(x) {
                    return None;
                }
                let y = double.elements().iter().find(|e| *e != x)?;
                Some((x.clone(), y.clone()))
            }
            _ => None,
        }
    }

    pub fn elements(&self) -> &[HfSet] {
        &self.0.elems
    }

    pub fn iter(&self) -> std::slice::Iter<'_, HfSet> {
        self.0.elems.iter()
    }

    pub fn cardinality(&self) -> usize {
        self.0.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.elems.is_empty()
    }

    /// Von Neumann rank; `rank(∅) = 0`. Cached at construction.
    pub fn rank(&self) -> usize {
        self.0.rank
    }

    pub fn contains(&self, x: &HfSet) -> bool {
        self.0.elems.binary_search(x).is_ok()
    }

    pub fn is_subset(&self, other: &HfSet) -> bool {
        self.iter().all(|e| other.contains(e))
    }

    pub fn insert(&self, x: HfSet) -> HfSet {
        Self::from_elements(self.iter().cloned().chain(std::iter::once(x)))
    }

    pub fn union(&self, other: &HfSet) -> HfSet {
        Self::from_elements(self.iter().chain(other.iter()).cloned())
    }

    /// `⋃x`
    pub fn big_union(&self) -> HfSet {
        Self::from_elements(self.iter().flat_map(|e| e.iter().cloned()))
    }

    /// The set of all subsets.
    pub fn powerset(&self) -> HfSet {
        let n = self.cardinality();
        assert!(n < usize::BITS as usize, "powerset of a set with {n} elements");
        let subsets = (0..1usize << n).map(|mask| {
            Self::from_sorted(
                self.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, e)| e.clone()).collect(),
            )
        });
        Self::from_elements(subsets)
    }

    /// The least transitive superset of `self`.
    pub fn transitive_closure(&self) -> HfSet {
        let mut seen = BTreeSet::new();
        let mut stack: Vec<HfSet> = self.iter().cloned().collect();
        while let Some(x) = stack.pop() {
            if seen.insert(x.clone()) {
                stack.extend(x.iter().cloned());
            }
        }
        Self::from_sorted(seen.into_iter().collect())
    }

    pub fn is_transitive(&self) -> bool {
        self.iter().all(|e| e.is_subset(self))
    }

    /// Re-normalizes a set. Constructed values are already canonical, so this
    /// is the identity; it exists to state the invariant in tests.
    pub fn normalize(&self) -> HfSet {
        Self::from_elements(self.iter().map(HfSet::normalize))
    }

    /// All sets of rank strictly below `bound`, i.e. the stage `V_bound`.
    pub fn all_below_rank(bound: usize) -> Vec<HfSet> {
        let mut level: Vec<HfSet> = Vec::new();
        for _ in 0..bound {
            level = Self::from_sorted(level).powerset().elements().to_vec();
        }
        level
    }
}

/// `{x ∈ domain : x ∉ f(x)}`; fails if `f` is undefined somewhere on `domain`.
pub fn diagonal(domain: &HfSet, f: &BTreeMap<HfSet, HfSet>) -> Result<HfSet, HfError> {
    let mut out = Vec::new();
    for x in domain.iter() {
        let fx = f.get(x).ok_or_else(|| HfError::NotTotal(x.clone()))?;
        if !fx.contains(x) {
            out.push(x.clone());
        }
    }
    Ok(HfSet::from_sorted(out))
}

/// Postcondition of [`diagonal`]: the diagonal set is not a value of `f` on `domain`.
pub fn diagonal_escapes_range(domain: &HfSet, f: &BTreeMap<HfSet, HfSet>) -> Result<bool, HfError> {
    let d = diagonal(domain, f)?;
    Ok(domain.iter().all(|x| f[x] != d))
}

impl PartialEq for HfSet {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.rank == other.0.rank && self.0.elems == other.0.elems)
    }
}

impl Eq for HfSet {}

impl Ord for HfSet {
    fn cmp(&self, other: &Self) -> Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            return Ordering::Equal;
        }
        self.0.elems.cmp(&other.0.elems)
    }
}

impl PartialOrd for HfSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Hash for HfSet {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.elems.hash(state);
    }
}

impl Default for HfSet {
    fn default() -> Self {
        Self::empty()
    }
}

impl fmt::Display for HfSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, e) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("]")
    }
}

impl fmt::Debug for HfSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for HfSet {
    type Err = HfError;

    fn from_str(s: &str) -> Result<Self, HfError> {
        let mut p = LiteralParser { src: s.as_bytes(), pos: 0, base: 0 };
        let set = p.set()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.error("trailing input after set literal"));
        }
        Ok(set)
    }
}

/// Parses one HF literal starting at `src[start..]`; returns the set and the
/// offset just past it. Used by the formula lexer.
pub(crate) fn parse_literal_prefix(src: &str, start: usize) -> Result<(HfSet, usize), HfError> {
    let mut p = LiteralParser { src: &src.as_bytes()[start..], pos: 0, base: start };
    let set = p.set()?;
    Ok((set, start + p.pos))
}

struct LiteralParser<'a> {
    src: &'a [u8],
    pos: usize,
    base: usize,
}

impl LiteralParser<'_> {
    fn error(&self, msg: &str) -> HfError {
        HfError::Syntax { pos: self.base + self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn set(&mut self) -> Result<HfSet, HfError> {
        self.skip_ws();
        if self.src.get(self.pos) != Some(&b'[') {
            return Err(self.error("expected '['"));
        }
        self.pos += 1;
        let mut elems = Vec::new();
        self.skip_ws();
        if self.src.get(self.pos) == Some(&b']') {
            self.pos += 1;
            return Ok(HfSet::empty());
        }
        loop {
            elems.push(self.set()?);
            self.skip_ws();
            match self.src.get(self.pos) {
                Some(b',') => self.pos += 1,
                Some(b']') => {
                    self.pos += 1;
                    return Ok(HfSet::from_elements(elems));
                }
                _ => return Err(self.error("expected ',' or ']'")),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hf(s: &str) -> HfSet {
        s.parse().unwrap()
    }

    #[test]
    fn empty_is_zero() {
        assert_eq!(HfSet::empty().rank(), 0);
        assert_eq!(HfSet::empty(), HfSet::von_neumann(0));
        assert_eq!(HfSet::empty().to_string(), "[]");
    }

    #[test]
    fn naturals() {
        assert_eq!(HfSet::von_neumann(2), hf("[[],[[]]]"));
        assert_eq!(HfSet::von_neumann(5).cardinality(), 5);
        assert_eq!(HfSet::von_neumann(4).rank(), 4);
        assert_eq!(HfSet::von_neumann(3).as_natural(), Some(3));
        assert_eq!(hf("[[[]]]").as_natural(), None);
    }

    #[test]
    fn kpair_examples() {
        let e = HfSet::empty();
        assert_eq!(HfSet::kpair(e.clone(), e.clone()), hf("[[[]]]"));
        let p = HfSet::kpair(HfSet::von_neumann(0), HfSet::von_neumann(1));
        assert_eq!(p, hf("[[[]],[[],[[]]]]"));
        assert_eq!(p.decode_kpair(), Some((HfSet::von_neumann(0), HfSet::von_neumann(1))));
        assert_eq!(HfSet::von_neumann(3).decode_kpair(), None);
    }

    #[test]
    fn powerset_examples() {
        assert_eq!(HfSet::empty().powerset(), hf("[[]]"));
        assert_eq!(HfSet::von_neumann(2).powerset().cardinality(), 4);
    }

    #[test]
    fn diagonal_examples() {
        let zero = HfSet::von_neumann(0);
        let one = HfSet::von_neumann(1);
        let domain = HfSet::pair(zero.clone(), one.clone());
        let f = BTreeMap::from([(zero.clone(), HfSet::singleton(zero.clone())), (one.clone(), HfSet::empty())]);
        assert_eq!(diagonal(&domain, &f).unwrap(), HfSet::singleton(one.clone()));
        assert!(diagonal_escapes_range(&domain, &f).unwrap());
        assert_eq!(diagonal(&HfSet::empty(), &BTreeMap::new()).unwrap(), HfSet::empty());

        let partial = BTreeMap::from([(zero, HfSet::empty())]);
        assert_eq!(diagonal(&domain, &partial), Err(HfError::NotTotal(one)));
    }

    #[test]
    fn transitivity() {
        assert!(HfSet::von_neumann(3).is_transitive());
        assert!(!hf("[[[]]]").is_transitive());
        let two = HfSet::von_neumann(2);
        assert_eq!(HfSet::singleton(two).transitive_closure(), HfSet::von_neumann(3));
    }

    #[test]
    fn literal_normalizes() {
        assert_eq!(hf(" [ [[]] , [] , [] ] ").to_string(), "[[],[[]]]");
        assert!(matches!("[[]".parse::<HfSet>(), Err(HfError::Syntax { pos: 3, .. })));
        assert!(matches!("[]x".parse::<HfSet>(), Err(HfError::Syntax { pos: 2, .. })));
    }

    #[test]
    fn stages() {
        let sizes: Vec<usize> = (0..5).map(|k| HfSet::all_below_rank(k).len()).collect();
        assert_eq!(sizes, [0, 1, 2, 4, 16]);
    }
}
