//! Names over a carrier (a finite algebra or the Cohen poset) and their
//! evaluation under a filter.
//!
//! Names live in a [`NameTable`]. A name is a finite set of
//! `(child, weight)` pairs whose children were inserted earlier, so the child
//! relation is well founded by construction. Tables hash-cons: inserting the
//! same entry set twice yields the same [`NameId`].

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Debug;

use serde::Deserialize;
use thiserror::Error;

use crate::boolalg::{BoolAlgError, Element, FinBoolAlg, Subset};
use crate::cohen::{CohenPoset, Condition};
use crate::hfset::{HfError, HfSet};
use crate::order::{GenericFilter, NonzeroAlgebra, Poset};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NameError {
    #[error("unknown name {0:?}")]
    UnknownName(String),
    #[error("name id {0} is not in this table")]
    UnknownId(usize),
    #[error("weight {0} does not belong to the carrier")]
    ForeignWeight(String),
    #[error("label {0:?} is declared twice")]
    DuplicateLabel(String),
    #[error("names form a cycle through: {}", .0.join(", "))]
    Cyclic(Vec<String>),
    #[error("the canonical name needs at least one condition")]
    EmptyElementList,
    #[error("filter and names are over different carriers")]
    CarrierMismatch,
    #[error("malformed name document: {0}")]
    Format(String),
    #[error(transparent)]
    Literal(#[from] HfError),
    #[error(transparent)]
    Algebra(#[from] BoolAlgError),
}

/// What a name's weights range over.
pub trait Carrier: Clone {
    type Weight: Clone + Ord + Debug;

    /// The greatest condition `⊤`.
    fn top(&self) -> Self::Weight;
    fn owns(&self, w: &Self::Weight) -> bool;
    fn describe(&self, w: &Self::Weight) -> String;
    /// Injective coding of weights as hereditarily finite sets.
    fn encode(&self, w: &Self::Weight) -> HfSet;
}

impl Carrier for FinBoolAlg {
    type Weight = Element;

    fn top(&self) -> Element {
        self.one()
    }

    fn owns(&self, w: &Element) -> bool {
        FinBoolAlg::owns(self, *w)
    }

    fn describe(&self, w: &Element) -> String {
        self.display(*w)
    }

    /// The set of atom indices, each as a von Neumann natural.
    fn encode(&self, w: &Element) -> HfSet {
        HfSet::from_elements((0..self.atom_count()).filter(|i| w.bits() >> i & 1 == 1).map(HfSet::von_neumann))
    }
}

/// Inverse of the algebra coding.
pub fn decode_element(alg: &FinBoolAlg, set: &HfSet) -> Option<Element> {
    let mut bits = 0u64;
    for e in set.iter() {
        let i = e.as_natural()?;
        if i >= alg.atom_count() {
            return None;
        }
        bits |= 1 << i;
    }
    alg.element(bits).ok()
}

impl Carrier for CohenPoset {
    type Weight = Condition;

    fn top(&self) -> Condition {
        Condition::top()
    }

    fn owns(&self, w: &Condition) -> bool {
        self.is_element(w)
    }

    fn describe(&self, w: &Condition) -> String {
        w.to_string()
    }

    /// The set of `((row, col), bit)` Kuratowski pairs over von Neumann naturals.
    fn encode(&self, w: &Condition) -> HfSet {
        let nat = |n: u32| HfSet::von_neumann(n as usize);
        HfSet::from_elements(w.cells().map(|((r, c), b)| HfSet::kpair(HfSet::kpair(nat(r), nat(c)), nat(u32::from(b)))))
    }
}

/// The filter consulted during evaluation.
pub trait FilterView<W> {
    fn contains(&self, w: &W) -> bool;

    /// Whether `w` belongs to the carrier this filter lives on.
    fn accepts(&self, w: &W) -> bool;
}

impl FilterView<Element> for Subset {
    fn contains(&self, w: &Element) -> bool {
        Subset::contains(self, *w)
    }

    fn accepts(&self, w: &Element) -> bool {
        self.algebra().owns(*w)
    }
}

impl FilterView<Element> for GenericFilter<NonzeroAlgebra> {
    fn contains(&self, w: &Element) -> bool {
        GenericFilter::contains(self, w)
    }

    fn accepts(&self, w: &Element) -> bool {
        self.poset().algebra().owns(*w)
    }
}

impl FilterView<Condition> for GenericFilter<CohenPoset> {
    fn contains(&self, w: &Condition) -> bool {
        GenericFilter::contains(self, w)
    }

    fn accepts(&self, w: &Condition) -> bool {
        self.poset().is_element(w)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NameId(usize);

impl NameId {
    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Debug, Clone)]
pub struct NameTable<C: Carrier> {
    carrier: C,
    entries: Vec<Vec<(NameId, C::Weight)>>,
    ranks: Vec<usize>,
    interned: BTreeMap<Vec<(NameId, C::Weight)>, NameId>,
    labels: BTreeMap<String, NameId>,
    checks: HashMap<HfSet, NameId>,
}

impl<C: Carrier> NameTable<C> {
    pub fn new(carrier: C) -> Self {
        NameTable {
            carrier,
            entries: Vec::new(),
            ranks: Vec::new(),
            interned: BTreeMap::new(),
            labels: BTreeMap::new(),
            checks: HashMap::new(),
        }
    }

    pub fn carrier(&self) -> &C {
        &self.carrier
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = NameId> {
        (0..self.entries.len()).map(NameId)
    }

    /// Adds (or finds) the name with the given entries.
    pub fn insert<I>(&mut self, entries: I) -> Result<NameId, NameError>
    where
        I: IntoIterator<Item = (NameId, C::Weight)>,
    {
        let set: BTreeSet<(NameId, C::Weight)> = entries.into_iter().collect();
        for (child, w) in &set {
            if child.0 >= self.entries.len() {
                return Err(NameError::UnknownId(child.0));
            }
            if !self.carrier.owns(w) {
                return Err(NameError::ForeignWeight(format!("{w:?}")));
            }
        }
        let entries: Vec<(NameId, C::Weight)> = set.into_iter().collect();
        if let Some(&id) = self.interned.get(&entries) {
            return Ok(id);
        }
        let id = NameId(self.entries.len());
        let rank = entries.iter().map(|(c, _)| self.ranks[c.0] + 1).max().unwrap_or(0);
        self.interned.insert(entries.clone(), id);
        self.entries.push(entries);
        self.ranks.push(rank);
        Ok(id)
    }

    pub fn entries(&self, id: NameId) -> &[(NameId, C::Weight)] {
        &self.entries[id.0]
    }

    /// `rank(∅) = 0`, otherwise one more than the largest child rank.
    pub fn rank(&self, id: NameId) -> usize {
        self.ranks[id.0]
    }

    pub fn empty_name(&mut self) -> NameId {
        self.insert([]).expect("the empty name is always valid")
    }

    /// `x̌ = {(y̌, ⊤) : y ∈ x}`
    pub fn check(&mut self, x: &HfSet) -> NameId {
        if let Some(&id) = self.checks.get(x) {
            return id;
        }
        let top = self.carrier.top();
        let children: Vec<(NameId, C::Weight)> = x.iter().map(|y| (self.check(y), top.clone())).collect();
        let id = self.insert(children).expect("children were just inserted");
        self.checks.insert(x.clone(), id);
        id
    }

    /// `{(a, ⊤), (b, ⊤)}`, which evaluates to `{a^G, b^G}`.
    pub fn pair_name(&mut self, a: NameId, b: NameId) -> Result<NameId, NameError> {
        let top = self.carrier.top();
        self.insert([(a, top.clone()), (b, top)])
    }

    /// `{(p̌, p) : p ∈ elements}` where `p̌` checks the coded condition. Its
    /// value under `G` is the coded `elements ∩ G`.
    pub fn canonical_generic(&mut self, elements: &[C::Weight]) -> Result<NameId, NameError> {
        if elements.is_empty() {
            return Err(NameError::EmptyElementList);
        }
        let mut entries = Vec::with_capacity(elements.len());
        for p in elements {
            if !self.carrier.owns(p) {
                return Err(NameError::ForeignWeight(self.carrier.describe(p)));
            }
            let code = self.carrier.encode(p);
            entries.push((self.check(&code), p.clone()));
        }
        self.insert(entries)
    }

    pub fn set_label(&mut self, label: impl Into<String>, id: NameId) -> Result<(), NameError> {
        let label = label.into();
        if self.labels.contains_key(&label) {
            return Err(NameError::DuplicateLabel(label));
        }
        self.labels.insert(label, id);
        Ok(())
    }

    pub fn lookup(&self, label: &str) -> Option<NameId> {
        self.labels.get(label).copied()
    }

    /// Declared labels in sorted order.
    pub fn labelled(&self) -> impl Iterator<Item = (&str, NameId)> {
        self.labels.iter().map(|(l, &id)| (l.as_str(), id))
    }

    /// `n^G = {m^G : (m, p) ∈ n, p ∈ G}`
    pub fn eval<G: FilterView<C::Weight> + ?Sized>(&self, id: NameId, g: &G) -> Result<HfSet, NameError> {
        if id.0 >= self.len() {
            return Err(NameError::UnknownId(id.0));
        }
        self.eval_memo(id, g, &mut HashMap::new())
    }

    /// Evaluates several names sharing one memo table.
    pub fn eval_all<G: FilterView<C::Weight> + ?Sized>(&self, ids: &[NameId], g: &G) -> Result<Vec<HfSet>, NameError> {
        let mut memo = HashMap::new();
        ids.iter().map(|&id| self.eval_memo(id, g, &mut memo)).collect()
    }

    fn eval_memo<G: FilterView<C::Weight> + ?Sized>(
        &self,
        id: NameId,
        g: &G,
        memo: &mut HashMap<NameId, HfSet>,
    ) -> Result<HfSet, NameError> {
        if let Some(v) = memo.get(&id) {
            return Ok(v.clone());
        }
        let mut out = Vec::new();
        for (child, w) in &self.entries[id.0] {
            if !g.accepts(w) {
                return Err(NameError::CarrierMismatch);
            }
            if g.contains(w) {
                out.push(self.eval_memo(*child, g, memo)?);
            }
        }
        let v = HfSet::from_elements(out);
        memo.insert(id, v.clone());
        Ok(v)
    }
}

/// Weight literal in a name file: an element literal array, or `"1"`/`"0"`.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum WeightLiteral {
    Labels(Vec<String>),
    Text(String),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NameDoc {
    #[serde(default)]
    pub names: BTreeMap<String, Vec<(String, WeightLiteral)>>,
    #[serde(default)]
    pub check_of: BTreeMap<String, String>,
}

impl NameDoc {
    pub fn from_json(text: &str) -> Result<Self, NameError> {
        serde_json::from_str(text).map_err(|e| NameError::Format(e.to_string()))
    }

    /// Builds a labelled table over `alg`. Check names come first; the
    /// remaining names are added once all their children are known, and any
    /// left over form a cycle.
    pub fn build(&self, alg: &FinBoolAlg) -> Result<NameTable<FinBoolAlg>, NameError> {
        let mut table = NameTable::new(alg.clone());
        for (label, lit) in &self.check_of {
            if self.names.contains_key(label) {
                return Err(NameError::DuplicateLabel(label.clone()));
            }
            let x: HfSet = lit.parse()?;
            let id = table.check(&x);
            table.set_label(label.clone(), id)?;
        }
        for entries in self.names.values() {
            for (child, _) in entries {
                if !self.names.contains_key(child) && !self.check_of.contains_key(child) {
                    return Err(NameError::UnknownName(child.clone()));
                }
            }
        }
        let mut pending: Vec<&String> = self.names.keys().collect();
        while !pending.is_empty() {
            let before = pending.len();
            let mut still = Vec::new();
            for label in pending {
                let entries = &self.names[label];
                if entries.iter().all(|(c, _)| table.lookup(c).is_some()) {
                    let mut resolved = Vec::with_capacity(entries.len());
                    for (c, w) in entries {
                        let w = match w {
                            WeightLiteral::Labels(ls) => alg.element_from_labels(ls)?,
                            WeightLiteral::Text(t) => alg.parse_element(t)?,
                        };
                        resolved.push((table.lookup(c).unwrap(), w));
                    }
                    let id = table.insert(resolved)?;
                    table.set_label(label.clone(), id)?;
                } else {
                    still.push(label);
                }
            }
            if still.len() == before {
                return Err(NameError::Cyclic(still.into_iter().cloned().collect()));
            }
            pending = still;
        }
        Ok(table)
    }
}
