//! Partial orders, the forcing-side predicates on them, regular-open
//! completions, and the descending-chain construction of generic filters.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Debug;

use serde::Deserialize;
use thiserror::Error;

use crate::boolalg::{BoolAlgError, Element, FinBoolAlg, Subset};
use crate::laws::BoolStructure;

/// Largest explicit poset; down-sets are `u64` masks.
pub const MAX_POSET: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrderError {
    #[error("duplicate element label {0:?}")]
    DuplicateLabel(String),
    #[error("unknown element label {0:?}")]
    UnknownLabel(String),
    #[error("order is not antisymmetric: {0} <= {1} and {1} <= {0}")]
    NotAntisymmetric(String, String),
    #[error("posets are limited to {MAX_POSET} elements, got {0}")]
    TooLarge(usize),
    #[error("the empty poset has no completion")]
    EmptyPoset,
    #[error("poset is not separative: {x} is not above {y}, yet every z <= {y} is compatible with {x}; the embedding would fail: {}", failing.join(", "))]
    NotSeparative { x: String, y: String, failing: Vec<&'static str> },
    #[error("the given elements are not a dense subposet of the nonzero part of the algebra")]
    NotDenseSubposet,
    #[error("malformed poset document: {0}")]
    Format(String),
    #[error(transparent)]
    Algebra(#[from] BoolAlgError),
}

/// The order interface shared by explicit posets, `B∖{0}`, and Cohen
/// conditions.
pub trait Poset {
    type Elem: Clone + Eq + Ord + Debug;

    fn leq(&self, p: &Self::Elem, q: &Self::Elem) -> bool;

    /// Whether `p` and `q` have a common lower bound.
    fn compatible(&self, p: &Self::Elem, q: &Self::Elem) -> bool;

    /// Whether `p` is a valid element of this poset.
    fn is_element(&self, p: &Self::Elem) -> bool;

    fn describe(&self, p: &Self::Elem) -> String {
        format!("{p:?}")
    }
}

/// A poset whose elements can be listed.
pub trait FinitePoset: Poset {
    fn elements(&self) -> Vec<Self::Elem>;
}

/// First pair `(x, y)` with `x ≱ y` such that every `z ≤ y` is compatible with
/// `x`; `None` if the poset is separative.
pub fn separativity_violation<P: FinitePoset>(poset: &P) -> Option<(P::Elem, P::Elem)> {
    let elems = poset.elements();
    for x in &elems {
        for y in &elems {
            if poset.leq(y, x) {
                continue;
            }
            let witnessed = elems.iter().any(|z| poset.leq(z, y) && !poset.compatible(z, x));
            if !witnessed {
                return Some((x.clone(), y.clone()));
            }
        }
    }
    None
}

pub fn is_separative<P: FinitePoset>(poset: &P) -> bool {
    separativity_violation(poset).is_none()
}

/// `∀x ∃y (y < x)`
pub fn is_atomless<P: FinitePoset>(poset: &P) -> bool {
    let elems = poset.elements();
    elems.iter().all(|x| elems.iter().any(|y| poset.leq(y, x) && y != x))
}

/// `∀p ∃q (q ∈ D ∧ q ≤ p)`
pub fn is_dense<P: FinitePoset>(poset: &P, dense: &[P::Elem]) -> bool {
    poset.elements().iter().all(|p| dense.iter().any(|q| poset.is_element(q) && poset.leq(q, p)))
}

/// An explicit finite partial order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinPoset {
    labels: Vec<String>,
    /// `down[i]` has bit `j` set iff `j ≤ i`.
    down: Vec<u64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PosetDoc {
    pub elements: Vec<String>,
    #[serde(default)]
    pub leq: Vec<(String, String)>,
}

impl FinPoset {
    /// Builds a poset from generating pairs `(lower, upper)`, taking the
    /// reflexive-transitive closure and rejecting cycles.
    pub fn from_relation<S: AsRef<str>>(labels: &[S], pairs: &[(S, S)]) -> Result<FinPoset, OrderError> {
        let labels: Vec<String> = labels.iter().map(|s| s.as_ref().to_string()).collect();
        let n = labels.len();
        if n > MAX_POSET {
            return Err(OrderError::TooLarge(n));
        }
        let mut index = BTreeMap::new();
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.as_str(), i).is_some() {
                return Err(OrderError::DuplicateLabel(l.clone()));
            }
        }
        let find = |s: &str| index.get(s).copied().ok_or_else(|| OrderError::UnknownLabel(s.to_string()));
        let mut down: Vec<u64> = (0..n).map(|i| 1u64 << i).collect();
        for (lo, hi) in pairs {
            let (lo, hi) = (find(lo.as_ref())?, find(hi.as_ref())?);
            down[hi] |= 1 << lo;
        }
        // Warshall: if k ≤ i then everything below k is below i.
        for k in 0..n {
            for i in 0..n {
                if down[i] >> k & 1 == 1 {
                    down[i] |= down[k];
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if down[i] >> j & 1 == 1 && down[j] >> i & 1 == 1 {
                    return Err(OrderError::NotAntisymmetric(labels[i].clone(), labels[j].clone()));
                }
            }
        }
        Ok(FinPoset { labels, down })
    }

    pub fn from_doc(doc: &PosetDoc) -> Result<FinPoset, OrderError> {
        let pairs: Vec<(&str, &str)> = doc.leq.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        let labels: Vec<&str> = doc.elements.iter().map(String::as_str).collect();
        Self::from_relation(&labels, &pairs)
    }

    pub fn from_json(text: &str) -> Result<FinPoset, OrderError> {
        let doc: PosetDoc = serde_json::from_str(text).map_err(|e| OrderError::Format(e.to_string()))?;
        Self::from_doc(&doc)
    }

    /// `B∖{0}` as an explicit poset, labelled by element literals.
    pub fn from_algebra(alg: &FinBoolAlg) -> Result<FinPoset, OrderError> {
        if alg.is_degenerate() {
            return Err(BoolAlgError::Degenerate.into());
        }
        let elems: Vec<Element> = alg.nonzero_elements().collect();
        if elems.len() > MAX_POSET {
            return Err(OrderError::TooLarge(elems.len()));
        }
        let labels = elems.iter().map(|&x| alg.literal(x)).collect();
        let down = elems
            .iter()
            .map(|&x| {
                elems.iter().enumerate().filter(|(_, &y)| alg.leq(y, x).unwrap()).fold(0u64, |acc, (j, _)| acc | 1 << j)
            })
            .collect();
        Ok(FinPoset { labels, down })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Bit mask of `↓p`.
    pub fn down_set(&self, p: usize) -> u64 {
        self.down[p]
    }

    fn full_mask(&self) -> u64 {
        if self.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.len()) - 1
        }
    }

    /// Order relation as `(lower, upper)` index pairs, excluding the diagonal.
    pub fn strict_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for hi in 0..self.len() {
            for lo in 0..self.len() {
                if lo != hi && self.down[hi] >> lo & 1 == 1 {
                    out.push((lo, hi));
                }
            }
        }
        out
    }
}

impl Poset for FinPoset {
    type Elem = usize;

    fn leq(&self, p: &usize, q: &usize) -> bool {
        self.down[*q] >> p & 1 == 1
    }

    fn compatible(&self, p: &usize, q: &usize) -> bool {
        self.down[*p] & self.down[*q] != 0
    }

    fn is_element(&self, p: &usize) -> bool {
        *p < self.len()
    }

    fn describe(&self, p: &usize) -> String {
        self.labels.get(*p).cloned().unwrap_or_else(|| format!("#{p}"))
    }
}

impl FinitePoset for FinPoset {
    fn elements(&self) -> Vec<usize> {
        (0..self.len()).collect()
    }
}

/// The nonzero part `B∖{0}` of a finite algebra, ordered as in `B`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonzeroAlgebra(FinBoolAlg);

impl NonzeroAlgebra {
    pub fn new(alg: &FinBoolAlg) -> Result<Self, BoolAlgError> {
        if alg.is_degenerate() {
            return Err(BoolAlgError::Degenerate);
        }
        Ok(NonzeroAlgebra(alg.clone()))
    }

    pub fn algebra(&self) -> &FinBoolAlg {
        &self.0
    }
}

impl Poset for NonzeroAlgebra {
    type Elem = Element;

    fn leq(&self, p: &Element, q: &Element) -> bool {
        self.0.leq(*p, *q).expect("element of this algebra")
    }

    fn compatible(&self, p: &Element, q: &Element) -> bool {
        self.0.meet(*p, *q).expect("element of this algebra") != self.0.zero()
    }

    fn is_element(&self, p: &Element) -> bool {
        self.0.owns(*p) && *p != self.0.zero()
    }

    fn describe(&self, p: &Element) -> String {
        self.0.display(*p)
    }
}

impl FinitePoset for NonzeroAlgebra {
    fn elements(&self) -> Vec<Element> {
        self.0.nonzero_elements().collect()
    }
}

/// `D' = {x ∈ P : ∃y (x ≤ y ∧ y ∈ D)}` for `P` a dense subposet of `B∖{0}`.
pub fn transfer_dense(dense: &Subset, subposet: &[Element]) -> Result<Vec<Element>, OrderError> {
    let alg = dense.algebra();
    let nz = NonzeroAlgebra::new(alg)?;
    if !subposet.iter().all(|p| nz.is_element(p)) || !is_dense(&nz, subposet) {
        return Err(OrderError::NotDenseSubposet);
    }
    Ok(subposet.iter().copied().filter(|&x| dense.iter().any(|y| alg.leq(x, y).unwrap())).collect())
}

// ---------------------------------------------------------------------------
// Regular-open completion

/// The regular open subsets of a finite poset under the topology generated by
/// the down-sets `↓p`, as a boolean structure on bit masks.
#[derive(Debug, Clone)]
pub struct RegularOpenAlgebra {
    full: u64,
    opens: Vec<u64>,
    regular: Vec<u64>,
}

impl RegularOpenAlgebra {
    pub fn new(poset: &FinPoset) -> Self {
        let basis0: Vec<u64> = (0..poset.len()).map(|p| poset.down_set(p)).collect();
        // Close the generating sets under finite intersections ...
        let mut basis: BTreeSet<u64> = basis0.iter().copied().collect();
        loop {
            let extra: Vec<u64> =
                basis.iter().flat_map(|&b| basis0.iter().map(move |&c| b & c)).filter(|i| !basis.contains(i)).collect();
            if extra.is_empty() {
                break;
            }
            basis.extend(extra);
        }
        // ... then under arbitrary unions.
        let mut opens: BTreeSet<u64> = BTreeSet::from([0]);
        let mut frontier = vec![0u64];
        while let Some(o) = frontier.pop() {
            for &b in &basis {
                let u = o | b;
                if opens.insert(u) {
                    frontier.push(u);
                }
            }
        }
        let mut ro =
            RegularOpenAlgebra { full: poset.full_mask(), opens: opens.into_iter().collect(), regular: Vec::new() };
        ro.regular = ro.opens.iter().copied().filter(|&u| ro.interior(ro.closure(u)) == u).collect();
        ro
    }

    /// Largest open subset.
    pub fn interior(&self, set: u64) -> u64 {
        self.opens.iter().filter(|&&o| o & !set == 0).fold(0, |acc, &o| acc | o)
    }

    /// Smallest closed superset.
    pub fn closure(&self, set: u64) -> u64 {
        self.full & !self.interior(self.full & !set)
    }

    pub fn opens(&self) -> &[u64] {
        &self.opens
    }

    pub fn regular_opens(&self) -> &[u64] {
        &self.regular
    }

    pub fn is_regular(&self, set: u64) -> bool {
        self.regular.binary_search(&set).is_ok()
    }
}

impl BoolStructure for RegularOpenAlgebra {
    type Elem = u64;

    fn elements(&self) -> Vec<u64> {
        self.regular.clone()
    }

    fn zero(&self) -> u64 {
        0
    }

    fn one(&self) -> u64 {
        self.full
    }

    fn meet(&self, x: &u64, y: &u64) -> u64 {
        x & y
    }

    fn join(&self, x: &u64, y: &u64) -> u64 {
        self.interior(self.closure(x | y))
    }

    fn complement(&self, x: &u64) -> u64 {
        self.interior(self.full & !x)
    }

    fn leq(&self, x: &u64, y: &u64) -> bool {
        x & !y == 0
    }
}

/// Outcome of the embedding property checks for a completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EmbeddingChecks {
    pub injective: bool,
    pub order_preserving: bool,
    pub order_reflecting: bool,
    pub preserves_incompatibility: bool,
    pub dense_image: bool,
}

impl EmbeddingChecks {
    pub fn all(&self) -> bool {
        self.injective
            && self.order_preserving
            && self.order_reflecting
            && self.preserves_incompatibility
            && self.dense_image
    }

    pub fn failing(&self) -> Vec<&'static str> {
        [
            ("injective", self.injective),
            ("order-preserving", self.order_preserving),
            ("order-reflecting", self.order_reflecting),
            ("incompatibility-preserving", self.preserves_incompatibility),
            ("dense image", self.dense_image),
        ]
        .into_iter()
        .filter(|(_, ok)| !ok)
        .map(|(name, _)| name)
        .collect()
    }

    pub fn named(&self) -> [(&'static str, bool); 5] {
        [
            ("injective", self.injective),
            ("order-preserving", self.order_preserving),
            ("order-reflecting", self.order_reflecting),
            ("incompatibility-preserving", self.preserves_incompatibility),
            ("dense image", self.dense_image),
        ]
    }
}

/// A separative poset together with its regular-open completion.
#[derive(Debug, Clone)]
pub struct Completion {
    pub poset: FinPoset,
    pub regular_opens: RegularOpenAlgebra,
    /// The completion rebuilt over its atoms (the minimal regular opens).
    pub algebra: FinBoolAlg,
    /// `e(p)` for each poset element, by index.
    pub embedding: Vec<Element>,
    atom_sets: Vec<u64>,
}

impl Completion {
    /// The algebra element corresponding to a regular open set.
    pub fn element_of(&self, regular_open: u64) -> Element {
        let bits = self
            .atom_sets
            .iter()
            .enumerate()
            .filter(|(_, &a)| a & !regular_open == 0)
            .fold(0u64, |acc, (i, _)| acc | 1 << i);
        self.algebra.element(bits).expect("atom count fits")
    }

    /// The regular open set of poset elements corresponding to `x`.
    pub fn regular_open_of(&self, x: Element) -> u64 {
        self.atom_sets.iter().enumerate().filter(|(i, _)| x.bits() >> i & 1 == 1).fold(0u64, |acc, (_, &a)| acc | a)
    }

    pub fn check_embedding(&self) -> EmbeddingChecks {
        embedding_checks(&self.poset, &self.algebra, &self.embedding)
    }
}

fn embedding_checks(poset: &FinPoset, alg: &FinBoolAlg, e: &[Element]) -> EmbeddingChecks {
    let n = poset.len();
    let mut c = EmbeddingChecks {
        injective: true,
        order_preserving: true,
        order_reflecting: true,
        preserves_incompatibility: true,
        dense_image: true,
    };
    for p in 0..n {
        for q in 0..n {
            if p != q && e[p] == e[q] {
                c.injective = false;
            }
            let le = poset.leq(&p, &q);
            let ele = alg.leq(e[p], e[q]).unwrap();
            if le && !ele {
                c.order_preserving = false;
            }
            if ele && !le {
                c.order_reflecting = false;
            }
            let disjoint = alg.meet(e[p], e[q]).unwrap() == alg.zero();
            if poset.compatible(&p, &q) == disjoint {
                c.preserves_incompatibility = false;
            }
        }
    }
    c.dense_image = alg.nonzero_elements().all(|x| e.iter().any(|&ep| ep != alg.zero() && alg.leq(ep, x).unwrap()));
    c
}

/// The regular-open completion of a nonempty separative poset, with the
/// embedding `p ↦ int(cl(↓p))`.
pub fn ro_completion(poset: &FinPoset) -> Result<Completion, OrderError> {
    if poset.is_empty() {
        return Err(OrderError::EmptyPoset);
    }
    let ro = RegularOpenAlgebra::new(poset);
    let atom_sets: Vec<u64> = crate::laws::atoms_of(&ro);
    let labels: Vec<String> = atom_sets
        .iter()
        .map(|&a| {
            let names: Vec<&str> = (0..poset.len()).filter(|i| a >> i & 1 == 1).map(|i| poset.label(i)).collect();
            format!("{{{}}}", names.join(","))
        })
        .collect();
    let algebra = FinBoolAlg::powerset_algebra(labels)?;
    let mut completion =
        Completion { poset: poset.clone(), regular_opens: ro, algebra, embedding: Vec::new(), atom_sets };
    completion.embedding = (0..poset.len())
        .map(|p| {
            let ro = &completion.regular_opens;
            completion.element_of(ro.interior(ro.closure(poset.down_set(p))))
        })
        .collect();

    if let Some((x, y)) = separativity_violation(poset) {
        return Err(OrderError::NotSeparative {
            x: poset.label(x).to_string(),
            y: poset.label(y).to_string(),
            failing: completion.check_embedding().failing(),
        });
    }
    Ok(completion)
}

// ---------------------------------------------------------------------------
// Generic filters

/// A dense set given constructively: a membership test and a refinement that
/// maps any condition to an extension inside the set.
pub trait DenseOracle<E> {
    fn label(&self) -> String;
    fn member(&self, p: &E) -> bool;
    /// Some `q ≤ p` with `member(q)`, or `None` if the oracle cannot refine `p`.
    fn refine(&self, p: &E) -> Option<E>;
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenericError {
    #[error("start element {0} is not in the poset")]
    InvalidStart(String),
    #[error("oracle #{index} ({label}) violated its contract at {at}: {reason}")]
    OracleContract { index: usize, label: String, at: String, reason: &'static str },
}

/// One step of a chain construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainStep<E> {
    pub oracle: String,
    pub condition: E,
}

/// The filter generated by a descending chain `p_0 ≥ p_1 ≥ ... ≥ p_k`:
/// `x ∈ G` iff `x ≥ p_i` for some `i`.
#[derive(Debug, Clone)]
pub struct GenericFilter<P: Poset> {
    poset: P,
    start: P::Elem,
    chain: Vec<P::Elem>,
    steps: Vec<ChainStep<P::Elem>>,
}

impl<P: Poset> GenericFilter<P> {
    pub fn poset(&self) -> &P {
        &self.poset
    }

    pub fn start(&self) -> &P::Elem {
        &self.start
    }

    pub fn chain(&self) -> &[P::Elem] {
        &self.chain
    }

    /// The oracle label and condition for each refinement step.
    pub fn steps(&self) -> &[ChainStep<P::Elem>] {
        &self.steps
    }

    pub fn last(&self) -> &P::Elem {
        self.chain.last().expect("chain is never empty")
    }

    pub fn contains(&self, x: &P::Elem) -> bool {
        self.chain.iter().any(|p| self.poset.leq(p, x))
    }

    pub fn meets(&self, oracle: &dyn DenseOracle<P::Elem>) -> bool {
        self.chain.iter().any(|p| oracle.member(p))
    }
}

impl GenericFilter<NonzeroAlgebra> {
    /// Membership over the whole algebra, `0` included.
    pub fn to_subset(&self) -> Subset {
        let alg = self.poset.algebra();
        alg.subset(alg.elements().filter(|x| self.contains(x))).expect("same algebra")
    }

    /// Exhaustive check of the filter axioms on the carrier algebra.
    pub fn is_filter_on(&self, alg: &FinBoolAlg) -> bool {
        alg == self.poset.algebra() && self.to_subset().is_filter()
    }
}

/// Builds the chain `p_0 = refine_0(start)`, `p_{i+1} = refine_{i+1}(p_i)`,
/// checking each oracle's contract as it goes. With no oracles the chain is
/// `[start]`.
pub fn build_generic<P: Poset + Clone>(
    poset: &P,
    start: P::Elem,
    oracles: &[Box<dyn DenseOracle<P::Elem> + '_>],
) -> Result<GenericFilter<P>, GenericError> {
    if !poset.is_element(&start) {
        return Err(GenericError::InvalidStart(poset.describe(&start)));
    }
    let mut current = start.clone();
    let mut chain = Vec::with_capacity(oracles.len().max(1));
    let mut steps = Vec::with_capacity(oracles.len());
    for (index, oracle) in oracles.iter().enumerate() {
        let violation = |reason| GenericError::OracleContract {
            index,
            label: oracle.label(),
            at: poset.describe(&current),
            reason,
        };
        let next = oracle.refine(&current).ok_or_else(|| violation("no refinement returned"))?;
        if !poset.is_element(&next) {
            return Err(violation("refinement is not a poset element"));
        }
        if !poset.leq(&next, &current) {
            return Err(violation("refinement is not below its input"));
        }
        if !oracle.member(&next) {
            return Err(violation("refinement is not a member"));
        }
        steps.push(ChainStep { oracle: oracle.label(), condition: next.clone() });
        chain.push(next.clone());
        current = next;
    }
    if chain.is_empty() {
        chain.push(start.clone());
    }
    Ok(GenericFilter { poset: poset.clone(), start, chain, steps })
}

/// An explicit dense set over a finite poset. Refinement picks the first
/// member, in list order, below the input.
#[derive(Debug, Clone)]
pub struct ExplicitDense<P: Poset> {
    poset: P,
    label: String,
    members: Vec<P::Elem>,
}

impl<P: Poset> ExplicitDense<P> {
    pub fn new(poset: &P, label: impl Into<String>, members: Vec<P::Elem>) -> Self
    where
        P: Clone,
    {
        ExplicitDense { poset: poset.clone(), label: label.into(), members }
    }

    pub fn members(&self) -> &[P::Elem] {
        &self.members
    }
}

impl<P: Poset> DenseOracle<P::Elem> for ExplicitDense<P> {
    fn label(&self) -> String {
        self.label.clone()
    }

    fn member(&self, p: &P::Elem) -> bool {
        self.members.contains(p)
    }

    fn refine(&self, p: &P::Elem) -> Option<P::Elem> {
        self.members.iter().find(|q| self.poset.leq(q, p)).cloned()
    }
}

/// `D_p = {x : x ≤ p or x ≤ ¬p}` over `B∖{0}`.
#[derive(Debug, Clone)]
pub struct DpOracle {
    alg: FinBoolAlg,
    p: Element,
    not_p: Element,
}

impl DpOracle {
    pub fn new(alg: &FinBoolAlg, p: Element) -> Result<Self, BoolAlgError> {
        if alg.is_degenerate() {
            return Err(BoolAlgError::Degenerate);
        }
        let not_p = alg.complement(p)?;
        Ok(DpOracle { alg: alg.clone(), p, not_p })
    }
}

impl DenseOracle<Element> for DpOracle {
    fn label(&self) -> String {
        format!("D_p for p = {}", self.alg.display(self.p))
    }

    fn member(&self, x: &Element) -> bool {
        *x != self.alg.zero()
            && (self.alg.leq(*x, self.p).unwrap_or(false) || self.alg.leq(*x, self.not_p).unwrap_or(false))
    }

    fn refine(&self, x: &Element) -> Option<Element> {
        let zero = self.alg.zero();
        if !self.alg.owns(*x) || *x == zero {
            return None;
        }
        let with_p = self.alg.meet(*x, self.p).ok()?;
        if with_p != zero {
            Some(with_p)
        } else {
            self.alg.meet(*x, self.not_p).ok()
        }
    }
}

// ---------------------------------------------------------------------------
// Enumeration

/// All posets on `n` points up to isomorphism, each given by a labelling
/// `p0, p1, ...` compatible with the order (lower index never above higher).
pub fn posets_up_to_iso(n: usize) -> Vec<FinPoset> {
    assert!(n <= 6, "enumeration is only feasible for tiny posets");
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let perms = permutations(n);
    let labels: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for mask in 0u32..1 << pairs.len() {
        let rel = |i: usize, j: usize| -> bool {
            i == j || pairs.iter().position(|&p| p == (i, j)).is_some_and(|k| mask >> k & 1 == 1)
        };
        // keep only relations that are already transitively closed
        let closed = (0..n).all(|i| (0..n).all(|j| (0..n).all(|k| !(rel(i, j) && rel(j, k)) || rel(i, k))));
        if !closed {
            continue;
        }
        let canonical = perms
            .iter()
            .map(|perm| {
                let mut code = 0u64;
                for i in 0..n {
                    for j in 0..n {
                        if rel(i, j) {
                            code |= 1 << (perm[i] * n + perm[j]);
                        }
                    }
                }
                code
            })
            .min()
            .unwrap_or(0);
        if seen.insert(canonical) {
            let gen: Vec<(&str, &str)> = pairs
                .iter()
                .enumerate()
                .filter(|(k, _)| mask >> k & 1 == 1)
                .map(|(_, &(i, j))| (labels[i].as_str(), labels[j].as_str()))
                .collect();
            let lab: Vec<&str> = labels.iter().map(String::as_str).collect();
            out.push(FinPoset::from_relation(&lab, &gen).expect("generated relation is a partial order"));
        }
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain2() -> FinPoset {
        FinPoset::from_relation(&["a", "b"], &[("a", "b")]).unwrap()
    }

    fn antichain2() -> FinPoset {
        FinPoset::from_relation::<&str>(&["p", "q"], &[]).unwrap()
    }

    #[test]
    fn loading_validates() {
        let p = FinPoset::from_json(r#"{"elements": ["p","q0","q1"], "leq": [["q0","p"],["q1","p"]]}"#).unwrap();
        assert!(p.leq(&1, &0) && p.leq(&2, &0) && !p.leq(&1, &2));
        assert!(p.leq(&1, &1));
        let cyc = FinPoset::from_relation(&["a", "b"], &[("a", "b"), ("b", "a")]);
        assert!(matches!(cyc, Err(OrderError::NotAntisymmetric(..))));
        let t = FinPoset::from_relation(&["a", "b", "c"], &[("a", "b"), ("b", "c")]).unwrap();
        assert!(t.leq(&0, &2));
        assert!(matches!(FinPoset::from_json("{"), Err(OrderError::Format(_))));
        assert!(matches!(FinPoset::from_relation(&["a"], &[("a", "z")]), Err(OrderError::UnknownLabel(_))));
    }

    #[test]
    fn separativity_examples() {
        assert_eq!(separativity_violation(&chain2()), Some((0, 1)));
        assert!(is_separative(&antichain2()));
        for n in 1..=4 {
            let b = FinBoolAlg::standard(n).unwrap();
            assert!(is_separative(&NonzeroAlgebra::new(&b).unwrap()));
        }
    }

    #[test]
    fn atomless_and_dense() {
        assert!(!is_atomless(&chain2()));
        assert!(!is_atomless(&antichain2()));
        let b = FinBoolAlg::standard(2).unwrap();
        let nz = NonzeroAlgebra::new(&b).unwrap();
        let atoms = b.atoms_below(b.one()).unwrap();
        assert!(is_dense(&nz, &atoms));
        assert!(!is_dense(&nz, &[b.one()]));
    }

    #[test]
    fn transfer_examples() {
        let b = FinBoolAlg::standard(2).unwrap();
        let atoms = b.atoms_below(b.one()).unwrap();
        let d = b.subset([b.one()]).unwrap();
        assert_eq!(transfer_dense(&d, &atoms).unwrap(), atoms);
        let all = b.subset(b.nonzero_elements()).unwrap();
        let p: Vec<Element> = b.nonzero_elements().collect();
        assert_eq!(transfer_dense(&all, &p).unwrap(), p);
        assert_eq!(transfer_dense(&d, &[b.one()]), Err(OrderError::NotDenseSubposet));
    }

    #[test]
    fn completion_examples() {
        let c = ro_completion(&antichain2()).unwrap();
        assert_eq!(c.algebra.size(), 4);
        assert_eq!(c.regular_opens.opens().len(), 4);
        assert!(c.algebra.is_atom(c.embedding[0]).unwrap());
        assert!(c.algebra.is_atom(c.embedding[1]).unwrap());
        assert_ne!(c.embedding[0], c.embedding[1]);

        let single = FinPoset::from_relation::<&str>(&["p"], &[]).unwrap();
        let c = ro_completion(&single).unwrap();
        assert_eq!(c.algebra.size(), 2);
        assert_eq!(c.embedding[0], c.algebra.one());

        match ro_completion(&chain2()) {
            Err(OrderError::NotSeparative { x, y, failing }) => {
                assert_eq!((x.as_str(), y.as_str()), ("a", "b"));
                assert!(failing.contains(&"injective"));
                assert!(failing.contains(&"order-reflecting"));
            }
            other => panic!("expected rejection, got {other:?}"),
        }
        let empty = FinPoset::from_relation::<&str>(&[], &[]).unwrap();
        assert!(matches!(ro_completion(&empty), Err(OrderError::EmptyPoset)));
    }

    #[test]
    fn chain_construction_examples() {
        let p = FinPoset::from_relation(&["p", "q0", "q1"], &[("q0", "p"), ("q1", "p")]).unwrap();
        let g = build_generic(&p, 0, &[]).unwrap();
        assert_eq!(g.chain(), &[0]);

        let d: Box<dyn DenseOracle<usize>> = Box::new(ExplicitDense::new(&p, "D", vec![1, 2]));
        let g = build_generic(&p, 0, &[d]).unwrap();
        assert_eq!(g.chain(), &[1]);
        let members: Vec<usize> = (0..3).filter(|x| g.contains(x)).collect();
        assert_eq!(members, vec![0, 1]);

        assert!(matches!(build_generic(&p, 7, &[]), Err(GenericError::InvalidStart(_))));
    }

    #[test]
    fn broken_oracle_is_reported() {
        let p = FinPoset::from_relation(&["p", "q0", "q1"], &[("q0", "p"), ("q1", "p")]).unwrap();
        let ok: Box<dyn DenseOracle<usize>> = Box::new(ExplicitDense::new(&p, "fine", vec![1, 2]));
        let bad: Box<dyn DenseOracle<usize>> = Box::new(ExplicitDense::new(&p, "only-q1", vec![2]));
        match build_generic(&p, 0, &[ok, bad]) {
            Err(GenericError::OracleContract { index, label, .. }) => {
                assert_eq!(index, 1);
                assert_eq!(label, "only-q1");
            }
            other => panic!("expected oracle failure, got {other:?}"),
        }
    }

    #[test]
    fn dp_oracle_examples() {
        let b = FinBoolAlg::standard(2).unwrap();
        let a = b.element_from_labels(&["a"]).unwrap();
        let bb = b.element_from_labels(&["b"]).unwrap();
        let d = DpOracle::new(&b, a).unwrap();
        assert_eq!(d.refine(&b.one()), Some(a));
        assert_eq!(d.refine(&bb), Some(bb));
        assert_eq!(d.refine(&b.zero()), None);
        assert!(d.member(&bb) && !d.member(&b.one()));
        let degenerate = FinBoolAlg::standard(0).unwrap();
        assert!(DpOracle::new(&degenerate, degenerate.one()).is_err());
    }

    #[test]
    fn dp_oracle_decides_p() {
        let b = FinBoolAlg::standard(3).unwrap();
        let nz = NonzeroAlgebra::new(&b).unwrap();
        for p in b.elements() {
            let d: Box<dyn DenseOracle<Element>> = Box::new(DpOracle::new(&b, p).unwrap());
            let g = build_generic(&nz, b.one(), &[d]).unwrap();
            assert!(g.contains(&p) ^ g.contains(&b.complement(p).unwrap()));
            assert!(g.is_filter_on(&b));
        }
    }

    #[test]
    fn all_dp_oracles_give_ultrafilter() {
        let b = FinBoolAlg::standard(3).unwrap();
        let nz = NonzeroAlgebra::new(&b).unwrap();
        let oracles: Vec<Box<dyn DenseOracle<Element>>> =
            b.elements().map(|p| Box::new(DpOracle::new(&b, p).unwrap()) as Box<dyn DenseOracle<Element>>).collect();
        let g = build_generic(&nz, b.one(), &oracles).unwrap();
        assert!(g.to_subset().is_ultrafilter());
        assert!(g.contains(g.last()));
    }

    #[test]
    fn poset_counts() {
        let counts: Vec<usize> = (0..=5).map(|n| posets_up_to_iso(n).len()).collect();
        assert_eq!(counts, [1, 1, 2, 5, 16, 63]);
    }
}
