//! Finite boolean algebras over an explicit atom set.
//!
//! Every finite boolean algebra is atomic, so an element is stored as the set
//! of atoms below it (a bit mask). Meet, join and complement are intersection,
//! union and relative complement of atom sets.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use serde::Deserialize;
use thiserror::Error;

use crate::laws::BoolStructure;

/// Largest supported atom count; elements are `u64` masks and exhaustive
/// enumeration beyond this is out of reach anyway.
pub const MAX_ATOMS: usize = 32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BoolAlgError {
    #[error("duplicate atom label {0:?}")]
    DuplicateLabel(String),
    #[error("{0} atoms exceeds the supported maximum of {MAX_ATOMS}")]
    TooManyAtoms(usize),
    #[error("unknown atom label {0:?}")]
    UnknownLabel(String),
    #[error("elements belong to different algebras")]
    MixedAlgebras,
    #[error("bit mask {0:#b} is not an element of this algebra")]
    ForeignElement(u64),
    #[error("the given subset is not an ideal")]
    NotAnIdeal,
    #[error("map is not defined on element {0}")]
    NotTotal(String),
    #[error("the one-element algebra (0 = 1) is not allowed here")]
    Degenerate,
    #[error("malformed algebra document: {0}")]
    Format(String),
}

static NEXT_ALGEBRA_ID: AtomicU64 = AtomicU64::new(1);

#[derive(Debug)]
struct AlgInner {
    id: u64,
    atoms: Vec<String>,
}

/// A finite boolean algebra, the powerset algebra of its atom list.
///
/// Clones share identity: elements of a clone are elements of the original.
/// Two separately constructed algebras never share elements, even with equal
/// atom lists.
#[derive(Debug, Clone)]
pub struct FinBoolAlg {
    inner: Arc<AlgInner>,
}

/// An element of a [`FinBoolAlg`]: the set of atoms below it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element {
    alg: u64,
    bits: u64,
}

impl Element {
    pub fn bits(self) -> u64 {
        self.bits
    }

    pub fn algebra_id(self) -> u64 {
        self.alg
    }
}

impl PartialEq for FinBoolAlg {
    fn eq(&self, other: &Self) -> bool {
        self.inner.id == other.inner.id
    }
}

impl Eq for FinBoolAlg {}

impl FinBoolAlg {
    /// The powerset algebra on the given atom labels.
    pub fn powerset_algebra<I, S>(labels: I) -> Result<Self, BoolAlgError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let atoms: Vec<String> = labels.into_iter().map(Into::into).collect();
        if atoms.len() > MAX_ATOMS {
            return Err(BoolAlgError::TooManyAtoms(atoms.len()));
        }
        let mut seen = BTreeSet::new();
        for a in &atoms {
            if !seen.insert(a.as_str()) {
                return Err(BoolAlgError::DuplicateLabel(a.clone()));
            }
        }
        let id = NEXT_ALGEBRA_ID.fetch_add(1, Ordering::Relaxed);
        Ok(FinBoolAlg { inner: Arc::new(AlgInner { id, atoms }) })
    }

    /// Powerset algebra on `n` atoms labelled `a`, `b`, `c`, ...
    pub fn standard(n: usize) -> Result<Self, BoolAlgError> {
        Self::powerset_algebra(standard_labels(n))
    }

    pub fn id(&self) -> u64 {
        self.inner.id
    }

    pub fn atom_labels(&self) -> &[String] {
        &self.inner.atoms
    }

    pub fn atom_count(&self) -> usize {
        self.inner.atoms.len()
    }

    /// Number of elements, `2^atoms`.
    pub fn size(&self) -> u64 {
        1u64 << self.atom_count()
    }

    pub fn is_degenerate(&self) -> bool {
        self.atom_count() == 0
    }

    fn full_mask(&self) -> u64 {
        if self.atom_count() == 64 {
            u64::MAX
        } else {
            (1u64 << self.atom_count()) - 1
        }
    }

    fn mk(&self, bits: u64) -> Element {
        Element { alg: self.inner.id, bits }
    }

    pub fn zero(&self) -> Element {
        self.mk(0)
    }

    pub fn one(&self) -> Element {
        self.mk(self.full_mask())
    }

    pub fn element(&self, bits: u64) -> Result<Element, BoolAlgError> {
        if bits & !self.full_mask() != 0 {
            return Err(BoolAlgError::ForeignElement(bits));
        }
        Ok(self.mk(bits))
    }

    /// The element whose atoms carry the given labels.
    pub fn element_from_labels<S: AsRef<str>>(&self, labels: &[S]) -> Result<Element, BoolAlgError> {
        let mut bits = 0;
        for l in labels {
            let l = l.as_ref();
            let i = self
                .inner
                .atoms
                .iter()
                .position(|a| a == l)
                .ok_or_else(|| BoolAlgError::UnknownLabel(l.to_string()))?;
            bits |= 1 << i;
        }
        Ok(self.mk(bits))
    }

    pub fn atom(&self, index: usize) -> Element {
        assert!(index < self.atom_count());
        self.mk(1 << index)
    }

    pub fn owns(&self, x: Element) -> bool {
        x.alg == self.inner.id
    }

    fn check(&self, x: Element) -> Result<u64, BoolAlgError> {
        if self.owns(x) {
            Ok(x.bits)
        } else {
            Err(BoolAlgError::MixedAlgebras)
        }
    }

    pub fn labels_of(&self, x: Element) -> Vec<&str> {
        self.inner.atoms.iter().enumerate().filter(|(i, _)| x.bits >> i & 1 == 1).map(|(_, a)| a.as_str()).collect()
    }

    /// Element literal: a JSON array of atom labels, e.g. `["a","c"]`.
    pub fn literal(&self, x: Element) -> String {
        serde_json::to_string(&self.labels_of(x)).expect("labels serialize")
    }

    /// `1` and `0` for the bounds, otherwise the element literal.
    pub fn display(&self, x: Element) -> String {
        if x == self.one() {
            "1".into()
        } else if x == self.zero() {
            "0".into()
        } else {
            self.literal(x)
        }
    }

    /// Parses `"1"`, `"0"`, or an element literal.
    pub fn parse_element(&self, text: &str) -> Result<Element, BoolAlgError> {
        match text.trim() {
            "1" => Ok(self.one()),
            "0" => Ok(self.zero()),
            t => {
                let labels: Vec<String> = serde_json::from_str(t).map_err(|e| BoolAlgError::Format(e.to_string()))?;
                self.element_from_labels(&labels)
            }
        }
    }

    /// All elements in increasing mask order.
    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        (0..self.size()).map(|b| self.mk(b))
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = Element> + '_ {
        (1..self.size()).map(|b| self.mk(b))
    }

    pub fn meet(&self, x: Element, y: Element) -> Result<Element, BoolAlgError> {
        Ok(self.mk(self.check(x)? & self.check(y)?))
    }

    pub fn join(&self, x: Element, y: Element) -> Result<Element, BoolAlgError> {
        Ok(self.mk(self.check(x)? | self.check(y)?))
    }

    pub fn complement(&self, x: Element) -> Result<Element, BoolAlgError> {
        Ok(self.mk(!self.check(x)? & self.full_mask()))
    }

    pub fn leq(&self, x: Element, y: Element) -> Result<bool, BoolAlgError> {
        Ok(self.check(x)? & !self.check(y)? == 0)
    }

    /// Symmetric difference `(x ∧ ¬y) ∨ (y ∧ ¬x)`.
    pub fn ring_add(&self, x: Element, y: Element) -> Result<Element, BoolAlgError> {
        let (x, y) = (self.check(x)?, self.check(y)?);
        Ok(self.mk((x & !y) | (y & !x)))
    }

    /// `x ∧ y`
    pub fn ring_mul(&self, x: Element, y: Element) -> Result<Element, BoolAlgError> {
        self.meet(x, y)
    }

    /// Least upper bound; the empty join is `0`.
    pub fn sup<I: IntoIterator<Item = Element>>(&self, xs: I) -> Result<Element, BoolAlgError> {
        xs.into_iter().try_fold(self.zero(), |acc, x| self.join(acc, x))
    }

    /// Greatest lower bound; the empty meet is `1`.
    pub fn inf<I: IntoIterator<Item = Element>>(&self, xs: I) -> Result<Element, BoolAlgError> {
        xs.into_iter().try_fold(self.one(), |acc, x| self.meet(acc, x))
    }

    pub fn is_atom(&self, x: Element) -> Result<bool, BoolAlgError> {
        Ok(self.check(x)?.count_ones() == 1)
    }

    pub fn atoms_below(&self, x: Element) -> Result<Vec<Element>, BoolAlgError> {
        let bits = self.check(x)?;
        Ok((0..self.atom_count()).filter(|i| bits >> i & 1 == 1).map(|i| self.atom(i)).collect())
    }

    pub fn subset<I: IntoIterator<Item = Element>>(&self, xs: I) -> Result<Subset, BoolAlgError> {
        let mut members = BTreeSet::new();
        for x in xs {
            self.check(x)?;
            members.insert(x);
        }
        Ok(Subset { alg: self.clone(), members })
    }

    /// The principal ultrafilter `{x : atom ≤ x}` for each atom, in atom order.
    pub fn ultrafilters(&self) -> Vec<Subset> {
        (0..self.atom_count())
            .map(|i| {
                let a = 1u64 << i;
                Subset { alg: self.clone(), members: self.elements().filter(|x| x.bits & a != 0).collect() }
            })
            .collect()
    }

    /// The quotient `B/I` with its natural projection.
    ///
    /// Equivalence classes are computed from the defining relation (`x ~ y`
    /// iff `x ∧ ¬y` and `y ∧ ¬x` are in `I`); the result is rebuilt as a
    /// powerset algebra over the minimal nonzero classes.
    pub fn quotient(&self, ideal: &Subset) -> Result<Quotient, BoolAlgError> {
        if ideal.alg != *self {
            return Err(BoolAlgError::MixedAlgebras);
        }
        if !ideal.is_ideal() {
            return Err(BoolAlgError::NotAnIdeal);
        }
        let full = self.full_mask();
        let in_ideal = |bits: u64| ideal.members.contains(&self.mk(bits));
        let equivalent = |x: u64, y: u64| in_ideal(x & !y) && in_ideal(y & !x);

        let n = self.size() as usize;
        let mut class_of = vec![usize::MAX; n];
        let mut classes: Vec<Vec<u64>> = Vec::new();
        for x in 0..n as u64 {
            if class_of[x as usize] != usize::MAX {
                continue;
            }
            let idx = classes.len();
            let members: Vec<u64> = (x..n as u64).filter(|&y| equivalent(x, y)).collect();
            for &m in &members {
                class_of[m as usize] = idx;
            }
            classes.push(members);
        }
        let reps: Vec<u64> = classes.iter().map(|c| c[0]).collect();
        let class_leq = |c: usize, d: usize| in_ideal(reps[c] & !reps[d]);
        let zero_class = class_of[0];

        let atom_classes: Vec<usize> = (0..classes.len())
            .filter(|&c| c != zero_class)
            .filter(|&c| (0..classes.len()).all(|d| d == zero_class || !class_leq(d, c) || d == c))
            .collect();

        let labels: Vec<String> = atom_classes
            .iter()
            .map(|&c| {
                let rep = classes[c].iter().copied().min_by_key(|b| (b.count_ones(), *b)).expect("class is nonempty");
                self.labels_of(self.mk(rep)).join("+")
            })
            .collect();
        let algebra = FinBoolAlg::powerset_algebra(labels)?;
        if algebra.size() as usize != classes.len() {
            unreachable!("quotient classes do not form a powerset algebra");
        }

        let table: Vec<Element> = (0..n as u64)
            .map(|x| {
                let bits = atom_classes
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| in_ideal(reps[c] & !x & full))
                    .fold(0u64, |acc, (i, _)| acc | 1 << i);
                algebra.mk(bits)
            })
            .collect();
        let projection = Hom { domain: self.clone(), codomain: algebra.clone(), table };
        let classes = classes.into_iter().map(|c| c.into_iter().map(|b| self.mk(b)).collect()).collect();
        Ok(Quotient { algebra, projection, classes, ideal: ideal.clone() })
    }

    /// Every ideal of the algebra, by brute force over all subsets. Only
    /// sensible for small algebras (at most 4 atoms).
    pub fn all_ideals(&self) -> Vec<Subset> {
        self.all_subsets().into_iter().filter(Subset::is_ideal).collect()
    }

    /// Every subset of the carrier (`2^(2^atoms)` of them).
    pub fn all_subsets(&self) -> Vec<Subset> {
        let n = self.size();
        assert!(n <= 16, "refusing to enumerate subsets of a {n}-element algebra");
        (0..1u64 << n)
            .map(|mask| Subset {
                alg: self.clone(),
                members: (0..n).filter(|b| mask >> b & 1 == 1).map(|b| self.mk(b)).collect(),
            })
            .collect()
    }
}

pub fn standard_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| if i < 26 { char::from(b'a' + i as u8).to_string() } else { format!("a{i}") }).collect()
}

/// An explicit collection of elements of one algebra: an ideal, filter or
/// dense-set candidate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subset {
    alg: FinBoolAlg,
    members: BTreeSet<Element>,
}

impl Subset {
    pub fn algebra(&self) -> &FinBoolAlg {
        &self.alg
    }

    pub fn contains(&self, x: Element) -> bool {
        self.members.contains(&x)
    }

    pub fn iter(&self) -> impl Iterator<Item = Element> + '_ {
        self.members.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    fn proper_nonempty(&self) -> bool {
        !self.members.is_empty() && (self.members.len() as u64) < self.alg.size()
    }

    /// Nonempty, proper, downward closed and closed under `∨`.
    pub fn is_ideal(&self) -> bool {
        let a = &self.alg;
        self.proper_nonempty()
            && self.iter().all(|x| {
                a.elements().all(|z| !a.leq(z, x).unwrap() || self.contains(z))
                    && self.iter().all(|y| self.contains(a.join(x, y).unwrap()))
            })
    }

    /// Nonempty, proper, upward closed and closed under `∧`.
    pub fn is_filter(&self) -> bool {
        let a = &self.alg;
        self.proper_nonempty()
            && self.iter().all(|x| {
                a.elements().all(|z| !a.leq(x, z).unwrap() || self.contains(z))
                    && self.iter().all(|y| self.contains(a.meet(x, y).unwrap()))
            })
    }

    fn decides_every_element(&self) -> bool {
        let a = &self.alg;
        a.elements().all(|x| self.contains(x) || self.contains(a.complement(x).unwrap()))
    }

    pub fn is_prime_ideal(&self) -> bool {
        self.is_ideal() && self.decides_every_element()
    }

    pub fn is_ultrafilter(&self) -> bool {
        self.is_filter() && self.decides_every_element()
    }

    /// `{¬x : x ∈ S}`, which is `{x : ¬x ∈ S}` as well.
    pub fn dual(&self) -> Subset {
        Subset { alg: self.alg.clone(), members: self.iter().map(|x| self.alg.complement(x).unwrap()).collect() }
    }

    /// Whether every nonzero element has an element of `self` below it.
    pub fn is_dense(&self) -> bool {
        let a = &self.alg;
        a.nonzero_elements().all(|p| self.iter().any(|q| q != a.zero() && a.leq(q, p).unwrap()))
    }

    pub fn literals(&self) -> Vec<String> {
        self.iter().map(|x| self.alg.literal(x)).collect()
    }
}

/// A map between two finite algebras, stored as a table indexed by the
/// domain element's mask.
#[derive(Debug, Clone)]
pub struct Hom {
    domain: FinBoolAlg,
    codomain: FinBoolAlg,
    table: Vec<Element>,
}

impl Hom {
    pub fn from_fn<F: FnMut(Element) -> Element>(
        domain: &FinBoolAlg,
        codomain: &FinBoolAlg,
        mut f: F,
    ) -> Result<Hom, BoolAlgError> {
        let mut table = Vec::with_capacity(domain.size() as usize);
        for x in domain.elements() {
            let y = f(x);
            codomain.check(y)?;
            table.push(y);
        }
        Ok(Hom { domain: domain.clone(), codomain: codomain.clone(), table })
    }

    /// Builds a map from an explicit table; fails if some domain element is
    /// missing.
    pub fn from_map(
        domain: &FinBoolAlg,
        codomain: &FinBoolAlg,
        map: &BTreeMap<Element, Element>,
    ) -> Result<Hom, BoolAlgError> {
        if let Some(x) = domain.elements().find(|x| !map.contains_key(x)) {
            return Err(BoolAlgError::NotTotal(domain.literal(x)));
        }
        Self::from_fn(domain, codomain, |x| map[&x])
    }

    pub fn identity(alg: &FinBoolAlg) -> Hom {
        Self::from_fn(alg, alg, |x| x).expect("identity stays in the algebra")
    }

    pub fn domain(&self) -> &FinBoolAlg {
        &self.domain
    }

    pub fn codomain(&self) -> &FinBoolAlg {
        &self.codomain
    }

    pub fn apply(&self, x: Element) -> Result<Element, BoolAlgError> {
        Ok(self.table[self.domain.check(x)? as usize])
    }

    /// Checks preservation of `∧`, `∨` on all pairs and `¬` on all elements.
    pub fn is_homomorphism(&self) -> bool {
        let (b, c) = (&self.domain, &self.codomain);
        let f = |x: Element| self.table[x.bits as usize];
        b.elements().all(|x| {
            f(b.complement(x).unwrap()) == c.complement(f(x)).unwrap()
                && b.elements().all(|y| {
                    f(b.meet(x, y).unwrap()) == c.meet(f(x), f(y)).unwrap()
                        && f(b.join(x, y).unwrap()) == c.join(f(x), f(y)).unwrap()
                })
        })
    }

    /// Preimage of `0`.
    pub fn kernel(&self) -> Subset {
        Subset {
            alg: self.domain.clone(),
            members: self.domain.elements().filter(|x| self.table[x.bits as usize] == self.codomain.zero()).collect(),
        }
    }
}

/// Result of [`FinBoolAlg::quotient`].
#[derive(Debug, Clone)]
pub struct Quotient {
    pub algebra: FinBoolAlg,
    pub projection: Hom,
    /// Equivalence classes, each sorted by mask, ordered by least member.
    pub classes: Vec<Vec<Element>>,
    pub ideal: Subset,
}

impl Quotient {
    /// The classes themselves as a boolean structure, with operations taken
    /// on representatives. Used to check the laws on `B/I` independently of
    /// the rebuilt atom representation.
    pub fn class_structure(&self) -> ClassStructure<'_> {
        let mut rep = BTreeMap::new();
        for class in &self.classes {
            for &x in class {
                rep.insert(x, class[0]);
            }
        }
        ClassStructure { q: self, rep }
    }
}

pub struct ClassStructure<'a> {
    q: &'a Quotient,
    rep: BTreeMap<Element, Element>,
}

impl BoolStructure for ClassStructure<'_> {
    type Elem = Element;

    fn elements(&self) -> Vec<Element> {
        self.q.classes.iter().map(|c| c[0]).collect()
    }

    fn zero(&self) -> Element {
        self.rep[&self.q.ideal.alg.zero()]
    }

    fn one(&self) -> Element {
        self.rep[&self.q.ideal.alg.one()]
    }

    fn meet(&self, x: &Element, y: &Element) -> Element {
        self.rep[&self.q.ideal.alg.meet(*x, *y).unwrap()]
    }

    fn join(&self, x: &Element, y: &Element) -> Element {
        self.rep[&self.q.ideal.alg.join(*x, *y).unwrap()]
    }

    fn complement(&self, x: &Element) -> Element {
        self.rep[&self.q.ideal.alg.complement(*x).unwrap()]
    }

    fn leq(&self, x: &Element, y: &Element) -> bool {
        let a = &self.q.ideal.alg;
        self.q.ideal.contains(a.meet(*x, a.complement(*y).unwrap()).unwrap())
    }
}

impl BoolStructure for FinBoolAlg {
    type Elem = Element;

    fn elements(&self) -> Vec<Element> {
        FinBoolAlg::elements(self).collect()
    }

    fn zero(&self) -> Element {
        FinBoolAlg::zero(self)
    }

    fn one(&self) -> Element {
        FinBoolAlg::one(self)
    }

    fn meet(&self, x: &Element, y: &Element) -> Element {
        FinBoolAlg::meet(self, *x, *y).expect("element of this algebra")
    }

    fn join(&self, x: &Element, y: &Element) -> Element {
        FinBoolAlg::join(self, *x, *y).expect("element of this algebra")
    }

    fn complement(&self, x: &Element) -> Element {
        FinBoolAlg::complement(self, *x).expect("element of this algebra")
    }

    fn leq(&self, x: &Element, y: &Element) -> bool {
        FinBoolAlg::leq(self, *x, *y).expect("element of this algebra")
    }

    fn ring_add(&self, x: &Element, y: &Element) -> Element {
        FinBoolAlg::ring_add(self, *x, *y).expect("element of this algebra")
    }
}

impl fmt::Display for FinBoolAlg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "algebra on atoms {:?}", self.inner.atoms)
    }
}

/// Algebra file document: either `{"atoms": [...]}` or
/// `{"quotient_of": <algebra document>, "ideal": [<element literal>, ...]}`.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum AlgebraDoc {
    Atoms { atoms: Vec<String> },
    Quotient { quotient_of: Box<AlgebraDoc>, ideal: Vec<Vec<String>> },
}

impl AlgebraDoc {
    pub fn from_json(text: &str) -> Result<Self, BoolAlgError> {
        serde_json::from_str(text).map_err(|e| BoolAlgError::Format(e.to_string()))
    }

    pub fn build(&self) -> Result<FinBoolAlg, BoolAlgError> {
        match self {
            AlgebraDoc::Atoms { atoms } => FinBoolAlg::powerset_algebra(atoms.iter().cloned()),
            AlgebraDoc::Quotient { quotient_of, ideal } => {
                let base = quotient_of.build()?;
                let ideal = parse_subset(&base, ideal)?;
                Ok(base.quotient(&ideal)?.algebra)
            }
        }
    }
}

pub fn parse_subset(alg: &FinBoolAlg, literals: &[Vec<String>]) -> Result<Subset, BoolAlgError> {
    let elems = literals.iter().map(|l| alg.element_from_labels(l)).collect::<Result<Vec<_>, _>>()?;
    alg.subset(elems)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alg(n: usize) -> FinBoolAlg {
        FinBoolAlg::standard(n).unwrap()
    }

    fn el(b: &FinBoolAlg, labels: &[&str]) -> Element {
        b.element_from_labels(labels).unwrap()
    }

    #[test]
    fn construction() {
        let b = FinBoolAlg::powerset_algebra(["a", "b"]).unwrap();
        assert_eq!(b.size(), 4);
        assert_eq!(b.atoms_below(b.one()).unwrap().len(), 2);
        let d = FinBoolAlg::powerset_algebra(Vec::<String>::new()).unwrap();
        assert_eq!(d.size(), 1);
        assert_eq!(d.zero(), d.one());
        assert_eq!(alg(3).size(), 8);
        assert_eq!(FinBoolAlg::powerset_algebra(["a", "a"]).unwrap_err(), BoolAlgError::DuplicateLabel("a".into()));
    }

    #[test]
    fn lattice_ops() {
        let b = alg(2);
        let (a1, b1) = (el(&b, &["a"]), el(&b, &["b"]));
        assert_eq!(b.meet(a1, b1).unwrap(), b.zero());
        assert_eq!(b.complement(a1).unwrap(), b1);
        assert_eq!(b.ring_add(a1, a1).unwrap(), b.zero());
        assert_eq!(b.ring_add(a1, b1).unwrap(), b.one());
        let other = alg(2);
        assert_eq!(b.meet(a1, other.one()), Err(BoolAlgError::MixedAlgebras));
    }

    #[test]
    fn filter_examples() {
        let b = alg(2);
        let (a1, b1) = (el(&b, &["a"]), el(&b, &["b"]));
        let top = b.subset([b.one()]).unwrap();
        assert!(top.is_filter());
        assert!(!top.is_ultrafilter());
        assert!(b.subset([b.one(), a1]).unwrap().is_ultrafilter());
        let pi = b.subset([b.zero(), a1]).unwrap();
        assert!(pi.is_prime_ideal());
        assert_eq!(pi.dual(), b.subset([b.one(), b1]).unwrap());
        assert!(!b.subset([]).unwrap().is_ideal());
        assert!(!b.subset([]).unwrap().is_filter());
    }

    #[test]
    fn quotient_by_atom_ideal() {
        let b = alg(3);
        let ideal = b.subset([b.zero(), el(&b, &["a"])]).unwrap();
        let q = b.quotient(&ideal).unwrap();
        assert_eq!(q.algebra.size(), 4);
        let lits: Vec<Vec<String>> = q.classes.iter().map(|c| c.iter().map(|&x| b.literal(x)).collect()).collect();
        assert_eq!(
            lits,
            vec![
                vec![r#"[]"#, r#"["a"]"#],
                vec![r#"["b"]"#, r#"["a","b"]"#],
                vec![r#"["c"]"#, r#"["a","c"]"#],
                vec![r#"["b","c"]"#, r#"["a","b","c"]"#],
            ]
        );
        assert_eq!(q.algebra.atom_labels(), ["b", "c"]);
        assert!(q.projection.is_homomorphism());
        assert_eq!(q.projection.kernel(), ideal);

        let not_ideal = b.subset([el(&b, &["a"])]).unwrap();
        assert_eq!(b.quotient(&not_ideal).unwrap_err(), BoolAlgError::NotAnIdeal);
    }

    #[test]
    fn trivial_quotient() {
        let b = alg(2);
        let q = b.quotient(&b.subset([b.zero()]).unwrap()).unwrap();
        assert_eq!(q.algebra.size(), 4);
        assert_eq!(q.classes.len(), 4);
    }

    #[test]
    fn homomorphisms() {
        let b = alg(2);
        let id = Hom::identity(&b);
        assert!(id.is_homomorphism());
        assert_eq!(id.kernel(), b.subset([b.zero()]).unwrap());
        let zero = Hom::from_fn(&b, &b, |_| b.zero()).unwrap();
        assert!(!zero.is_homomorphism());

        let partial = BTreeMap::from([(b.zero(), b.zero())]);
        assert!(matches!(Hom::from_map(&b, &b, &partial), Err(BoolAlgError::NotTotal(_))));
    }

    #[test]
    fn sup_inf_conventions() {
        let b = alg(3);
        assert_eq!(b.sup([]).unwrap(), b.zero());
        assert_eq!(b.inf([]).unwrap(), b.one());
        assert_eq!(b.sup(b.atoms_below(b.one()).unwrap()).unwrap(), b.one());
        assert!(b.is_atom(el(&b, &["a"])).unwrap());
        assert!(!b.is_atom(b.zero()).unwrap());
    }

    #[test]
    fn algebra_documents() {
        let doc = AlgebraDoc::from_json(r#"{"atoms": ["a","b"]}"#).unwrap();
        assert_eq!(doc.build().unwrap().size(), 4);
        let doc = AlgebraDoc::from_json(r#"{"quotient_of": {"atoms": ["a","b","c"]}, "ideal": [[], ["a"]]}"#).unwrap();
        assert_eq!(doc.build().unwrap().atom_labels(), ["b", "c"]);
        assert!(AlgebraDoc::from_json(r#"{"atomz": []}"#).is_err());
    }

    #[test]
    fn element_text() {
        let b = alg(2);
        assert_eq!(b.display(b.one()), "1");
        assert_eq!(b.display(b.zero()), "0");
        assert_eq!(b.parse_element(r#"["b"]"#).unwrap(), el(&b, &["b"]));
        assert_eq!(b.parse_element("1").unwrap(), b.one());
        assert!(b.parse_element(r#"["z"]"#).is_err());
    }
}
