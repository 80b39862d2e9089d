//! Exhaustive boolean-algebra law checking over any finite carrier.
//!
//! [`BoolStructure`] abstracts over the operations so the same suite runs on
//! powerset algebras, on quotient classes, and on regular-open sets.

use std::collections::BTreeSet;
use std::fmt::Debug;

/// A finite structure with the boolean-algebra signature.
pub trait BoolStructure {
    type Elem: Clone + Eq + Ord + Debug;

    fn elements(&self) -> Vec<Self::Elem>;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn meet(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn join(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn complement(&self, x: &Self::Elem) -> Self::Elem;
    fn leq(&self, x: &Self::Elem, y: &Self::Elem) -> bool;

    /// `(x ∧ ¬y) ∨ (y ∧ ¬x)`
    fn ring_add(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem {
        let l = self.meet(x, &self.complement(y));
        let r = self.meet(y, &self.complement(x));
        self.join(&l, &r)
    }

    /// `x ∧ y`
    fn ring_mul(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem {
        self.meet(x, y)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LawResult {
    pub law: &'static str,
    pub cases: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

impl LawResult {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone, Default)]
pub struct LawReport {
    pub results: Vec<LawResult>,
}

impl LawReport {
    pub fn all_pass(&self) -> bool {
        self.results.iter().all(LawResult::passed)
    }

    pub fn total_failures(&self) -> usize {
        self.results.iter().map(|r| r.failures).sum()
    }

    pub fn failed(&self) -> impl Iterator<Item = &LawResult> {
        self.results.iter().filter(|r| !r.passed())
    }
}

struct Recorder<'a, E> {
    elems: &'a [E],
    report: LawReport,
}

impl<E: Clone + Debug> Recorder<'_, E> {
    fn unary(&mut self, law: &'static str, mut holds: impl FnMut(&E) -> bool) {
        let mut r = LawResult { law, cases: 0, failures: 0, first_failure: None };
        for x in self.elems {
            r.cases += 1;
            if !holds(x) {
                r.failures += 1;
                r.first_failure.get_or_insert_with(|| format!("x={x:?}"));
            }
        }
        self.report.results.push(r);
    }

    fn binary(&mut self, law: &'static str, mut holds: impl FnMut(&E, &E) -> bool) {
        let mut r = LawResult { law, cases: 0, failures: 0, first_failure: None };
        for x in self.elems {
            for y in self.elems {
                r.cases += 1;
                if !holds(x, y) {
                    r.failures += 1;
                    r.first_failure.get_or_insert_with(|| format!("x={x:?} y={y:?}"));
                }
            }
        }
        self.report.results.push(r);
    }

    fn ternary(&mut self, law: &'static str, mut holds: impl FnMut(&E, &E, &E) -> bool) {
        let mut r = LawResult { law, cases: 0, failures: 0, first_failure: None };
        for x in self.elems {
            for y in self.elems {
                for z in self.elems {
                    r.cases += 1;
                    if !holds(x, y, z) {
                        r.failures += 1;
                        r.first_failure.get_or_insert_with(|| format!("x={x:?} y={y:?} z={z:?}"));
                    }
                }
            }
        }
        self.report.results.push(r);
    }
}

/// Runs every law exhaustively. Cost is cubic in the carrier size.
pub fn check_all<S: BoolStructure>(s: &S) -> LawReport {
    let elems = s.elements();
    let (zero, one) = (s.zero(), s.one());
    let mut rec = Recorder { elems: &elems, report: LawReport::default() };

    // the partial order and its bounds
    rec.unary("leq_reflexive", |x| s.leq(x, x));
    rec.binary("leq_antisymmetric", |x, y| !(s.leq(x, y) && s.leq(y, x)) || x == y);
    rec.ternary("leq_transitive", |x, y, z| !(s.leq(x, y) && s.leq(y, z)) || s.leq(x, z));
    rec.unary("bounds", |x| s.leq(&zero, x) && s.leq(x, &one));
    rec.binary("meet_lower_bound", |x, y| {
        let m = s.meet(x, y);
        s.leq(&m, x) && s.leq(&m, y)
    });
    rec.ternary("meet_greatest", |x, y, z| !(s.leq(z, x) && s.leq(z, y)) || s.leq(z, &s.meet(x, y)));
    rec.binary("join_upper_bound", |x, y| {
        let j = s.join(x, y);
        s.leq(x, &j) && s.leq(y, &j)
    });
    rec.ternary("join_least", |x, y, z| !(s.leq(x, z) && s.leq(y, z)) || s.leq(&s.join(x, y), z));

    rec.binary("meet_commutative", |x, y| s.meet(x, y) == s.meet(y, x));
    rec.binary("join_commutative", |x, y| s.join(x, y) == s.join(y, x));
    rec.ternary("meet_associative", |x, y, z| s.meet(x, &s.meet(y, z)) == s.meet(&s.meet(x, y), z));
    rec.ternary("join_associative", |x, y, z| s.join(x, &s.join(y, z)) == s.join(&s.join(x, y), z));
    rec.unary("join_one", |x| s.join(x, &one) == one);
    rec.unary("meet_one", |x| s.meet(x, &one) == *x);
    rec.unary("join_zero", |x| s.join(x, &zero) == *x);
    rec.unary("meet_zero", |x| s.meet(x, &zero) == zero);
    rec.binary("absorption", |x, y| s.join(x, &s.meet(x, y)) == *x && s.meet(x, &s.join(x, y)) == *x);
    rec.binary("leq_iff_meet", |x, y| s.leq(x, y) == (s.meet(x, y) == *x));

    rec.unary("complement_join", |x| s.join(x, &s.complement(x)) == one);
    rec.unary("complement_meet", |x| s.meet(x, &s.complement(x)) == zero);
    rec.ternary("join_distributes_over_meet", |x, y, z| {
        s.join(x, &s.meet(y, z)) == s.meet(&s.join(x, y), &s.join(x, z))
    });
    rec.ternary("meet_distributes_over_join", |x, y, z| {
        s.meet(x, &s.join(y, z)) == s.join(&s.meet(x, y), &s.meet(x, z))
    });
    rec.binary("complement_unique", |x, y| !(s.join(x, y) == one && s.meet(x, y) == zero) || *y == s.complement(x));
    rec.unary("double_negation", |x| s.complement(&s.complement(x)) == *x);
    rec.binary("de_morgan_join", |x, y| s.complement(&s.join(x, y)) == s.meet(&s.complement(x), &s.complement(y)));
    rec.binary("de_morgan_meet", |x, y| s.complement(&s.meet(x, y)) == s.join(&s.complement(x), &s.complement(y)));
    rec.binary("contrapositive", |x, y| s.leq(x, y) == s.leq(&s.complement(y), &s.complement(x)));

    rec.ternary("ring_add_associative", |x, y, z| s.ring_add(x, &s.ring_add(y, z)) == s.ring_add(&s.ring_add(x, y), z));
    rec.binary("ring_add_commutative", |x, y| s.ring_add(x, y) == s.ring_add(y, x));
    rec.unary("ring_add_identity", |x| s.ring_add(x, &zero) == *x);
    rec.unary("ring_add_self_inverse", |x| s.ring_add(x, x) == zero);
    rec.ternary("ring_mul_associative", |x, y, z| s.ring_mul(x, &s.ring_mul(y, z)) == s.ring_mul(&s.ring_mul(x, y), z));
    rec.binary("ring_mul_commutative", |x, y| s.ring_mul(x, y) == s.ring_mul(y, x));
    rec.unary("ring_mul_identity", |x| s.ring_mul(x, &one) == *x);
    rec.ternary("ring_distributive", |x, y, z| {
        s.ring_mul(x, &s.ring_add(y, z)) == s.ring_add(&s.ring_mul(x, y), &s.ring_mul(x, z))
    });
    rec.unary("ring_mul_idempotent", |x| s.ring_mul(x, x) == *x);
    rec.binary("ring_leq_iff_mul", |x, y| s.leq(x, y) == (s.ring_mul(x, y) == *x));
    rec.binary("ring_join_formula", |x, y| s.join(x, y) == s.ring_add(&s.ring_add(x, y), &s.ring_mul(x, y)));
    rec.binary("ring_meet_formula", |x, y| s.meet(x, y) == s.ring_mul(x, y));

    let stone = stone_representation(s);
    rec.report.results.push(stone);
    rec.report
}

/// Minimal nonzero elements.
pub fn atoms_of<S: BoolStructure>(s: &S) -> Vec<S::Elem> {
    let elems = s.elements();
    let zero = s.zero();
    elems
        .iter()
        .filter(|&x| *x != zero && elems.iter().all(|y| !s.leq(y, x) || *y == zero || y == x))
        .cloned()
        .collect()
}

/// Checks that `x ↦ {atoms below x}` is an isomorphism onto the powerset of
/// the atoms: a bijection carrying `∧`, `∨`, `¬` to `∩`, `∪` and complement.
fn stone_representation<S: BoolStructure>(s: &S) -> LawResult {
    let elems = s.elements();
    let atoms = atoms_of(s);
    let image = |x: &S::Elem| -> u64 {
        atoms.iter().enumerate().filter(|(_, a)| s.leq(a, x)).fold(0, |acc, (i, _)| acc | 1 << i)
    };
    let mut r = LawResult { law: "stone_representation", cases: elems.len(), failures: 0, first_failure: None };
    let mut fail = |msg: String| {
        r.failures += 1;
        r.first_failure.get_or_insert(msg);
    };
    if atoms.len() >= 63 || elems.len() as u64 != 1u64 << atoms.len() {
        fail(format!("{} elements but {} atoms", elems.len(), atoms.len()));
        return r;
    }
    let full = (1u64 << atoms.len()) - 1;
    let images: BTreeSet<u64> = elems.iter().map(image).collect();
    if images.len() != elems.len() {
        fail("atom map is not injective".into());
    }
    for x in &elems {
        if image(&s.complement(x)) != !image(x) & full {
            fail(format!("complement not preserved at {x:?}"));
        }
        for y in &elems {
            if image(&s.meet(x, y)) != image(x) & image(y) || image(&s.join(x, y)) != image(x) | image(y) {
                fail(format!("meet/join not preserved at {x:?}, {y:?}"));
            }
        }
    }
    r
}

/// Whether `map` is an isomorphism of boolean structures from `a` to `b`:
/// bijective on carriers and preserving `∧`, `∨`, `¬`.
pub fn is_isomorphism<A, B, F>(a: &A, b: &B, map: F) -> bool
where
    A: BoolStructure,
    B: BoolStructure,
    F: Fn(&A::Elem) -> B::Elem,
{
    let ea = a.elements();
    let eb = b.elements();
    if ea.len() != eb.len() {
        return false;
    }
    let image: BTreeSet<B::Elem> = ea.iter().map(&map).collect();
    if image.len() != ea.len() || !eb.iter().all(|y| image.contains(y)) {
        return false;
    }
    ea.iter().all(|x| {
        map(&a.complement(x)) == b.complement(&map(x))
            && ea.iter().all(|y| {
                map(&a.meet(x, y)) == b.meet(&map(x), &map(y)) && map(&a.join(x, y)) == b.join(&map(x), &map(y))
            })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// A deliberately broken structure: the three-element chain with a
    /// made-up complement. Used to make sure the suite can fail.
    struct Chain3;

    impl BoolStructure for Chain3 {
        type Elem = u8;
        fn elements(&self) -> Vec<u8> {
            vec![0, 1, 2]
        }
        fn zero(&self) -> u8 {
            0
        }
        fn one(&self) -> u8 {
            2
        }
        fn meet(&self, x: &u8, y: &u8) -> u8 {
            *x.min(y)
        }
        fn join(&self, x: &u8, y: &u8) -> u8 {
            *x.max(y)
        }
        fn complement(&self, x: &u8) -> u8 {
            2 - x
        }
        fn leq(&self, x: &u8, y: &u8) -> bool {
            x <= y
        }
    }

    #[test]
    fn chain_fails_complement_laws() {
        let report = check_all(&Chain3);
        assert!(!report.all_pass());
        let failed: Vec<_> = report.failed().map(|r| r.law).collect();
        assert!(failed.contains(&"complement_join"));
        assert!(failed.contains(&"stone_representation"));
        assert!(!failed.contains(&"meet_commutative"));
    }

    #[test]
    fn powerset_algebras_pass() {
        for n in 0..=3 {
            let b = crate::boolalg::FinBoolAlg::standard(n).unwrap();
            let report = check_all(&b);
            assert!(report.all_pass(), "{:?}", report.failed().collect::<Vec<_>>());
            assert_eq!(atoms_of(&b).len(), n);
        }
    }
}
