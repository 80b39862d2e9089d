//! The Cohen poset: finite partial functions from `rows × ω` to `{0, 1}`,
//! ordered by reverse inclusion, with its standard dense families.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::order::{build_generic, DenseOracle, GenericError, GenericFilter, Poset};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CohenError {
    #[error("the row count must be at least 1")]
    NoRows,
    #[error("row {row} is out of range for {kappa} rows")]
    RowOutOfRange { row: u32, kappa: u32 },
    #[error("cell ({row},{col}) is assigned both 0 and 1")]
    Conflict { row: u32, col: u32 },
    #[error("rows of a distinctness oracle must differ, got {0} twice")]
    SameRow(u32),
    #[error("{x} is already above {y}; no separating extension is needed")]
    AlreadyAbove { x: String, y: String },
    #[error("cell ({row},{col}) was never decided by the chain")]
    Undecided { row: u32, col: u32 },
    #[error("chain conditions are not pairwise compatible")]
    IncompatibleChain,
    #[error("a ground real needs a nonempty repeating block")]
    EmptyPeriod,
    #[error("bits must be 0 or 1, got {0}")]
    NotABit(u8),
    #[error("unknown dense family {0:?} (expected \"total\" or \"distinct\")")]
    UnknownFamily(String),
    #[error("malformed demo config: {0}")]
    Format(String),
    #[error(transparent)]
    Generic(#[from] GenericError),
}

/// A finite partial assignment of bits to `(row, column)` cells.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Condition {
    cells: BTreeMap<(u32, u32), bool>,
}

impl Condition {
    /// The empty function, the top of the order.
    pub fn top() -> Self {
        Self::default()
    }

    pub fn from_cells<I: IntoIterator<Item = ((u32, u32), bool)>>(cells: I) -> Result<Self, CohenError> {
        let mut out = BTreeMap::new();
        for ((row, col), bit) in cells {
            if out.insert((row, col), bit).is_some_and(|old| old != bit) {
                return Err(CohenError::Conflict { row, col });
            }
        }
        Ok(Condition { cells: out })
    }

    pub fn get(&self, row: u32, col: u32) -> Option<bool> {
        self.cells.get(&(row, col)).copied()
    }

    /// `self` extended by one cell. Panics if the cell already holds the
    /// other bit.
    pub fn with(&self, row: u32, col: u32, bit: bool) -> Self {
        let mut cells = self.cells.clone();
        let old = cells.insert((row, col), bit);
        assert!(old.is_none_or(|b| b == bit), "cell ({row},{col}) already assigned");
        Condition { cells }
    }

    pub fn cells(&self) -> impl Iterator<Item = ((u32, u32), bool)> + '_ {
        self.cells.iter().map(|(&k, &v)| (k, v))
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Whether `self ⊇ other`, i.e. `self ≤ other` in the forcing order.
    pub fn extends(&self, other: &Condition) -> bool {
        other.cells.iter().all(|(k, v)| self.cells.get(k) == Some(v))
    }

    /// No cell is assigned different bits by the two conditions.
    pub fn compatible(&self, other: &Condition) -> bool {
        let (small, large) = if self.len() <= other.len() { (self, other) } else { (other, self) };
        small.cells.iter().all(|(k, v)| large.cells.get(k).is_none_or(|w| w == v))
    }

    pub fn union(&self, other: &Condition) -> Option<Condition> {
        self.compatible(other).then(|| {
            let mut cells = self.cells.clone();
            cells.extend(other.cells.iter().map(|(&k, &v)| (k, v)));
            Condition { cells }
        })
    }

    pub fn max_row(&self) -> Option<u32> {
        self.cells.keys().map(|&(r, _)| r).max()
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, ((r, c), b)) in self.cells().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "({r},{c})={}", u8::from(b))?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Conditions over a fixed number of rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CohenPoset {
    kappa: u32,
}

impl CohenPoset {
    pub fn new(kappa: u32) -> Result<Self, CohenError> {
        if kappa == 0 {
            return Err(CohenError::NoRows);
        }
        Ok(CohenPoset { kappa })
    }

    pub fn kappa(&self) -> u32 {
        self.kappa
    }

    fn check_row(&self, row: u32) -> Result<(), CohenError> {
        if row < self.kappa {
            Ok(())
        } else {
            Err(CohenError::RowOutOfRange { row, kappa: self.kappa })
        }
    }

    fn check(&self, p: &Condition) -> Result<(), CohenError> {
        p.max_row().map_or(Ok(()), |r| self.check_row(r))
    }

    pub fn try_leq(&self, p: &Condition, q: &Condition) -> Result<bool, CohenError> {
        self.check(p)?;
        self.check(q)?;
        Ok(p.extends(q))
    }

    pub fn try_compatible(&self, p: &Condition, q: &Condition) -> Result<bool, CohenError> {
        self.check(p)?;
        self.check(q)?;
        Ok(p.compatible(q))
    }

    /// Given `x ≱ y`, some `z ≤ y` incompatible with `x`: `y` itself if the
    /// two already clash, otherwise `y` plus the first cell `x` assigns and
    /// `y` does not, with its bit flipped.
    pub fn separativity_witness(&self, x: &Condition, y: &Condition) -> Result<Condition, CohenError> {
        self.check(x)?;
        self.check(y)?;
        if y.extends(x) {
            return Err(CohenError::AlreadyAbove { x: x.to_string(), y: y.to_string() });
        }
        if !x.compatible(y) {
            return Ok(y.clone());
        }
        let ((row, col), bit) = x
            .cells()
            .find(|&((r, c), _)| y.get(r, c).is_none())
            .expect("compatible and not extended by y, so x has a cell y lacks");
        Ok(y.with(row, col, !bit))
    }

    /// `D_{x,n}`: conditions deciding cell `(x, n)`.
    pub fn d_total(&self, row: u32, col: u32) -> Result<DTotal, CohenError> {
        self.check_row(row)?;
        Ok(DTotal { row, col })
    }

    /// `D_{x,y}`: conditions on which rows `x` and `y` differ somewhere.
    pub fn d_distinct(&self, x: u32, y: u32) -> Result<DDistinct, CohenError> {
        self.check_row(x)?;
        self.check_row(y)?;
        if x == y {
            return Err(CohenError::SameRow(x));
        }
        Ok(DDistinct { x, y })
    }

    /// `D_{F,x}`: conditions on which row `x` differs from `F` somewhere.
    pub fn d_avoid(&self, real: GroundReal, row: u32) -> Result<DAvoid, CohenError> {
        self.check_row(row)?;
        Ok(DAvoid { real, row })
    }
}

impl Poset for CohenPoset {
    type Elem = Condition;

    fn leq(&self, p: &Condition, q: &Condition) -> bool {
        p.extends(q)
    }

    fn compatible(&self, p: &Condition, q: &Condition) -> bool {
        p.compatible(q)
    }

    fn is_element(&self, p: &Condition) -> bool {
        self.check(p).is_ok()
    }

    fn describe(&self, p: &Condition) -> String {
        p.to_string()
    }
}

#[derive(Debug, Clone)]
pub struct DTotal {
    row: u32,
    col: u32,
}

impl DenseOracle<Condition> for DTotal {
    fn label(&self) -> String {
        format!("total({},{})", self.row, self.col)
    }

    fn member(&self, p: &Condition) -> bool {
        p.get(self.row, self.col).is_some()
    }

    /// Defaults the cell to 0.
    fn refine(&self, p: &Condition) -> Option<Condition> {
        Some(if self.member(p) { p.clone() } else { p.with(self.row, self.col, false) })
    }
}

#[derive(Debug, Clone)]
pub struct DDistinct {
    x: u32,
    y: u32,
}

impl DenseOracle<Condition> for DDistinct {
    fn label(&self) -> String {
        format!("distinct({},{})", self.x, self.y)
    }

    fn member(&self, p: &Condition) -> bool {
        p.cells().any(|((r, c), b)| r == self.x && p.get(self.y, c).is_some_and(|o| o != b))
    }

    /// Sets row `x` to 1 and row `y` to 0 at the least column free in both.
    fn refine(&self, p: &Condition) -> Option<Condition> {
        if self.member(p) {
            return Some(p.clone());
        }
        let n = (0..).find(|&n| p.get(self.x, n).is_none() && p.get(self.y, n).is_none())?;
        Some(p.with(self.x, n, true).with(self.y, n, false))
    }
}

#[derive(Debug, Clone)]
pub struct DAvoid {
    real: GroundReal,
    row: u32,
}

impl DenseOracle<Condition> for DAvoid {
    fn label(&self) -> String {
        format!("avoid({}, F={})", self.row, self.real)
    }

    fn member(&self, p: &Condition) -> bool {
        p.cells().any(|((r, c), b)| r == self.row && b != self.real.bit(c))
    }

    /// Sets the least free column `n` of the row to `1 - F(n)`.
    fn refine(&self, p: &Condition) -> Option<Condition> {
        if self.member(p) {
            return Some(p.clone());
        }
        let n = (0..).find(|&n| p.get(self.row, n).is_none())?;
        Some(p.with(self.row, n, !self.real.bit(n)))
    }
}

/// A total function `ω → {0, 1}` given as a finite prefix followed by a
/// repeating block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundReal {
    prefix: Vec<bool>,
    period: Vec<bool>,
}

impl GroundReal {
    pub fn new(prefix: Vec<bool>, period: Vec<bool>) -> Result<Self, CohenError> {
        if period.is_empty() {
            return Err(CohenError::EmptyPeriod);
        }
        Ok(GroundReal { prefix, period })
    }

    pub fn from_bits(prefix: &[u8], period: &[u8]) -> Result<Self, CohenError> {
        let conv = |bits: &[u8]| {
            bits.iter()
                .map(|&b| match b {
                    0 => Ok(false),
                    1 => Ok(true),
                    other => Err(CohenError::NotABit(other)),
                })
                .collect::<Result<Vec<_>, _>>()
        };
        Self::new(conv(prefix)?, conv(period)?)
    }

    pub fn zeros() -> Self {
        GroundReal { prefix: Vec::new(), period: vec![false] }
    }

    pub fn bit(&self, n: u32) -> bool {
        let n = n as usize;
        match self.prefix.get(n) {
            Some(&b) => b,
            None => self.period[(n - self.prefix.len()) % self.period.len()],
        }
    }
}

impl fmt::Display for GroundReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bits = |v: &[bool]| v.iter().map(|&b| if b { '1' } else { '0' }).collect::<String>();
        write!(f, "{}({})*", bits(&self.prefix), bits(&self.period))
    }
}

/// The union of a filter's chain. Fails if two chain conditions clash.
pub fn chain_union(g: &GenericFilter<CohenPoset>) -> Result<Condition, CohenError> {
    let chain = g.chain();
    for (i, p) in chain.iter().enumerate() {
        if chain[i + 1..].iter().any(|q| !p.compatible(q)) {
            return Err(CohenError::IncompatibleChain);
        }
    }
    Ok(chain.iter().fold(Condition::top(), |acc, p| acc.union(p).expect("checked compatible")))
}

/// `G_x` restricted to columns `[0, bound)`.
pub fn slice(g: &GenericFilter<CohenPoset>, row: u32, bound: u32) -> Result<Vec<bool>, CohenError> {
    let f = chain_union(g)?;
    (0..bound).map(|col| f.get(row, col).ok_or(CohenError::Undecided { row, col })).collect()
}

/// Whether all distinct members are pairwise incompatible.
pub fn is_pairwise_incompatible(conds: &[Condition]) -> bool {
    conds.iter().enumerate().all(|(i, p)| conds[i + 1..].iter().all(|q| p == q || !p.compatible(q)))
}

// ---------------------------------------------------------------------------
// The distinct-reals demonstration

#[derive(Debug, Clone, Deserialize, Serialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct AvoidSpec {
    pub row: u32,
    #[serde(default)]
    pub prefix: Vec<u8>,
    pub period: Vec<u8>,
}

#[derive(Debug, Clone, Deserialize, Serialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct DemoConfig {
    pub kappa: u32,
    pub columns: u32,
    #[serde(default)]
    pub dense: Vec<String>,
    #[serde(default)]
    pub avoid: Vec<AvoidSpec>,
}

impl DemoConfig {
    pub fn from_json(text: &str) -> Result<Self, CohenError> {
        serde_json::from_str(text).map_err(|e| CohenError::Format(e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AvoidVerdict {
    pub row: u32,
    pub real: String,
    /// First decided column where the row differs from the ground real.
    pub differs_at: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DemoReport {
    pub kappa: u32,
    pub columns: u32,
    pub steps: Vec<(String, Condition)>,
    pub chain: Vec<Condition>,
    pub generic: Condition,
    /// `rows × columns`; `None` where the chain left the cell undecided.
    pub matrix: Vec<Vec<Option<bool>>>,
    /// For each row pair `(x, y)`, the first column where both are decided
    /// and differ.
    pub separations: Vec<(u32, u32, Option<u32>)>,
    pub avoid: Vec<AvoidVerdict>,
}

impl DemoReport {
    pub fn pairwise_distinct(&self) -> bool {
        self.separations.iter().all(|s| s.2.is_some())
    }

    pub fn avoids_all(&self) -> bool {
        self.avoid.iter().all(|v| v.differs_at.is_some())
    }
}

/// Runs the chain construction for a demo config.
///
/// Oracles are applied family by family: every `distinct(x,y)` for `x < y`,
/// then each `avoid` entry in file order, then `total(x,n)` row by row for
/// `n < columns`. The `dense` list selects families; its order does not
/// matter.
pub fn run_demo(cfg: &DemoConfig) -> Result<DemoReport, CohenError> {
    let poset = CohenPoset::new(cfg.kappa)?;
    let mut want_total = false;
    let mut want_distinct = false;
    for fam in &cfg.dense {
        match fam.as_str() {
            "total" => want_total = true,
            "distinct" => want_distinct = true,
            other => return Err(CohenError::UnknownFamily(other.to_string())),
        }
    }
    let mut oracles: Vec<Box<dyn DenseOracle<Condition>>> = Vec::new();
    if want_distinct {
        for x in 0..cfg.kappa {
            for y in x + 1..cfg.kappa {
                oracles.push(Box::new(poset.d_distinct(x, y)?));
            }
        }
    }
    let mut reals = Vec::new();
    for a in &cfg.avoid {
        let real = GroundReal::from_bits(&a.prefix, &a.period)?;
        reals.push((a.row, real.clone()));
        oracles.push(Box::new(poset.d_avoid(real, a.row)?));
    }
    if want_total {
        for x in 0..cfg.kappa {
            for n in 0..cfg.columns {
                oracles.push(Box::new(poset.d_total(x, n)?));
            }
        }
    }
    let g = build_generic(&poset, Condition::top(), &oracles)?;
    let generic = chain_union(&g)?;
    let matrix: Vec<Vec<Option<bool>>> =
        (0..cfg.kappa).map(|r| (0..cfg.columns).map(|c| generic.get(r, c)).collect()).collect();
    let mut separations = Vec::new();
    for x in 0..cfg.kappa {
        for y in x + 1..cfg.kappa {
            let at = generic
                .cells()
                .find(|&((r, c), b)| r == x && generic.get(y, c).is_some_and(|o| o != b))
                .map(|((_, c), _)| c);
            separations.push((x, y, at));
        }
    }
    let avoid = reals
        .into_iter()
        .map(|(row, real)| AvoidVerdict {
            row,
            real: real.to_string(),
            differs_at: generic.cells().find(|&((r, c), b)| r == row && b != real.bit(c)).map(|((_, c), _)| c),
        })
        .collect();
    Ok(DemoReport {
        kappa: cfg.kappa,
        columns: cfg.columns,
        steps: g.steps().iter().map(|s| (s.oracle.clone(), s.condition.clone())).collect(),
        chain: g.chain().to_vec(),
        generic,
        matrix,
        separations,
        avoid,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cond(cells: &[((u32, u32), u8)]) -> Condition {
        Condition::from_cells(cells.iter().map(|&(k, b)| (k, b == 1))).unwrap()
    }

    #[test]
    fn order_and_compatibility() {
        let p = cond(&[((0, 0), 1)]);
        let q = cond(&[((0, 0), 0)]);
        assert!(!p.compatible(&q));
        let top = Condition::top();
        assert!(p.extends(&top) && q.extends(&top));
        let r = cond(&[((0, 0), 1), ((1, 2), 0)]);
        assert!(p.compatible(&r) && r.extends(&p) && !p.extends(&r));
        let poset = CohenPoset::new(1).unwrap();
        assert!(matches!(poset.try_leq(&r, &p), Err(CohenError::RowOutOfRange { row: 1, .. })));
        assert!(matches!(Condition::from_cells([((0, 0), true), ((0, 0), false)]), Err(CohenError::Conflict { .. })));
        assert_eq!(CohenPoset::new(0), Err(CohenError::NoRows));
    }

    #[test]
    fn separativity_witness_examples() {
        let poset = CohenPoset::new(2).unwrap();
        let x = cond(&[((0, 0), 1)]);
        let z = poset.separativity_witness(&x, &Condition::top()).unwrap();
        assert_eq!(z, cond(&[((0, 0), 0)]));
        let y = cond(&[((0, 0), 0), ((1, 1), 1)]);
        assert_eq!(poset.separativity_witness(&x, &y).unwrap(), y);
        assert!(matches!(poset.separativity_witness(&Condition::top(), &x), Err(CohenError::AlreadyAbove { .. })));
    }

    #[test]
    fn total_oracle() {
        let poset = CohenPoset::new(2).unwrap();
        let d = poset.d_total(1, 3).unwrap();
        let q = d.refine(&Condition::top()).unwrap();
        assert_eq!(q, cond(&[((1, 3), 0)]));
        assert!(d.member(&q));
        assert!(poset.d_total(2, 0).is_err());
    }

    #[test]
    fn distinct_oracle() {
        let poset = CohenPoset::new(2).unwrap();
        let d = poset.d_distinct(0, 1).unwrap();
        assert_eq!(d.refine(&Condition::top()).unwrap(), cond(&[((0, 0), 1), ((1, 0), 0)]));
        let sep = cond(&[((0, 4), 0), ((1, 4), 1)]);
        assert!(d.member(&sep));
        assert_eq!(d.refine(&sep).unwrap(), sep);
        // column 0 is half-assigned, so the least free column is 1
        let half = cond(&[((0, 0), 1)]);
        assert_eq!(d.refine(&half).unwrap(), cond(&[((0, 0), 1), ((0, 1), 1), ((1, 1), 0)]));
        assert_eq!(poset.d_distinct(1, 1).unwrap_err(), CohenError::SameRow(1));
    }

    #[test]
    fn avoid_oracle() {
        let poset = CohenPoset::new(1).unwrap();
        let d = poset.d_avoid(GroundReal::zeros(), 0).unwrap();
        assert_eq!(d.refine(&Condition::top()).unwrap(), cond(&[((0, 0), 1)]));
        let zeros = cond(&[((0, 0), 0), ((0, 1), 0)]);
        assert!(!d.member(&zeros));
        assert_eq!(d.refine(&zeros).unwrap(), cond(&[((0, 0), 0), ((0, 1), 0), ((0, 2), 1)]));
    }

    #[test]
    fn ground_reals() {
        let f = GroundReal::from_bits(&[1, 1], &[0, 1]).unwrap();
        let bits: Vec<bool> = (0..6).map(|n| f.bit(n)).collect();
        assert_eq!(bits, [true, true, false, true, false, true]);
        assert_eq!(GroundReal::from_bits(&[], &[]), Err(CohenError::EmptyPeriod));
        assert_eq!(GroundReal::from_bits(&[2], &[0]), Err(CohenError::NotABit(2)));
    }

    #[test]
    fn slices() {
        let poset = CohenPoset::new(1).unwrap();
        let d: Box<dyn DenseOracle<Condition>> = Box::new(poset.d_avoid(GroundReal::zeros(), 0).unwrap());
        let g = build_generic(&poset, Condition::top(), &[d]).unwrap();
        assert_eq!(g.chain(), &[cond(&[((0, 0), 1)])]);
        assert_eq!(slice(&g, 0, 1).unwrap(), vec![true]);
        assert_eq!(slice(&g, 0, 2), Err(CohenError::Undecided { row: 0, col: 1 }));
    }

    #[test]
    fn antichains() {
        let a = cond(&[((0, 0), 0)]);
        let b = cond(&[((0, 0), 1)]);
        assert!(is_pairwise_incompatible(&[a.clone(), b.clone()]));
        assert!(!is_pairwise_incompatible(&[a, b, Condition::top()]));
        for k in 1..=4u32 {
            let block: Vec<Condition> = (0..1u32 << k)
                .map(|m| Condition::from_cells((0..k).map(|c| ((0, c), m >> c & 1 == 1))).unwrap())
                .collect();
            assert!(is_pairwise_incompatible(&block));
        }
    }

    #[test]
    fn empty_demo_is_top() {
        let cfg = DemoConfig { kappa: 2, columns: 3, dense: vec![], avoid: vec![] };
        let r = run_demo(&cfg).unwrap();
        assert_eq!(r.chain, vec![Condition::top()]);
        assert!(r.matrix.iter().flatten().all(Option::is_none));
        assert!(!r.pairwise_distinct());
    }

    #[test]
    fn demo_rejects_unknown_family() {
        let cfg = DemoConfig { kappa: 2, columns: 3, dense: vec!["dense".into()], avoid: vec![] };
        assert_eq!(run_demo(&cfg), Err(CohenError::UnknownFamily("dense".into())));
    }
}
