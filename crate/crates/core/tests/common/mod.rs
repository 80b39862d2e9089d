#![allow(dead_code)]

use std::collections::BTreeSet;

use forcekit::logic::{Formula, NameContext, Term};
use forcekit::names::NameTable;
use forcekit::{Element, FinBoolAlg, HfSet, Subset};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

const VARS: [&str; 4] = ["x", "y", "z", "w"];

/// Random closed formula. Atoms draw from bound variables and `constants`.
pub fn random_formula(r: &mut ChaCha8Rng, constants: &[Term], depth: usize) -> Formula {
    fn go(r: &mut ChaCha8Rng, scope: &mut Vec<&'static str>, constants: &[Term], depth: usize) -> Formula {
        let free_var = VARS.iter().find(|v| !scope.contains(v)).copied();
        let pool = scope.len() + constants.len();
        if depth == 0 || (pool > 0 && r.gen_bool(0.2)) {
            if pool == 0 {
                let v = free_var.expect("scope is empty");
                return Formula::exists(v, Formula::eq(v, v));
            }
            let term = |r: &mut ChaCha8Rng| {
                let i = r.gen_range(0..pool);
                if i < scope.len() {
                    Term::ident(scope[i])
                } else {
                    constants[i - scope.len()].clone()
                }
            };
            let (a, b) = (term(r), term(r));
            return if r.gen_bool(0.6) { Formula::Mem(a, b) } else { Formula::Eq(a, b) };
        }
        let quantify = pool == 0 || (free_var.is_some() && r.gen_bool(0.4));
        if quantify {
            let v = free_var.unwrap();
            scope.push(v);
            let body = go(r, scope, constants, depth - 1);
            scope.pop();
            return if r.gen_bool(0.5) { Formula::forall(v, body) } else { Formula::exists(v, body) };
        }
        match r.gen_range(0..5) {
            0 => Formula::not(go(r, scope, constants, depth - 1)),
            k => {
                let a = go(r, scope, constants, depth - 1);
                let b = go(r, scope, constants, depth - 1);
                match k {
                    1 => Formula::and(a, b),
                    2 => Formula::or(a, b),
                    3 => Formula::implies(a, b),
                    _ => Formula::iff(a, b),
                }
            }
        }
    }
    go(r, &mut Vec::new(), constants, depth)
}

/// Which syntactic features a corpus exercises.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct Coverage {
    pub mem: bool,
    pub eq: bool,
    pub not: bool,
    pub and: bool,
    pub or: bool,
    pub implies: bool,
    pub iff: bool,
    pub forall: bool,
    pub exists: bool,
    pub deep: bool,
}

impl Coverage {
    pub fn of(corpus: &[Formula]) -> Coverage {
        fn walk(f: &Formula, c: &mut Coverage) {
            match f {
                Formula::Mem(..) => c.mem = true,
                Formula::Eq(..) => c.eq = true,
                Formula::Not(a) => {
                    c.not = true;
                    walk(a, c)
                }
                Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                    match f {
                        Formula::And(..) => c.and = true,
                        Formula::Or(..) => c.or = true,
                        Formula::Implies(..) => c.implies = true,
                        _ => c.iff = true,
                    }
                    walk(a, c);
                    walk(b, c);
                }
                Formula::Forall(_, a) => {
                    c.forall = true;
                    walk(a, c)
                }
                Formula::Exists(_, a) => {
                    c.exists = true;
                    walk(a, c)
                }
            }
        }
        let mut c = Coverage::default();
        for f in corpus {
            c.deep |= f.depth() >= 2;
            walk(f, &mut c);
        }
        c
    }

    pub fn complete(&self) -> bool {
        [self.mem, self.eq, self.not, self.and, self.or, self.implies, self.iff, self.forall, self.exists, self.deep]
            .iter()
            .all(|b| *b)
    }
}

/// Closed formulas without constants: quantified sentences for classical
/// checking over any model, the empty one included.
pub fn classical_corpus() -> Vec<Formula> {
    let mut out: Vec<Formula> = ["extensionality", "pairing", "union", "powerset", "infinity", "foundation"]
        .iter()
        .map(|n| forcekit::logic::axiom(n).unwrap())
        .collect();
    let hand = [
        "exists x (x = x)",
        "forall x (x = x)",
        "exists x forall y (not (y in x))",
        "forall x forall y (x in y -> not (y in x))",
        "forall x forall y forall z (x in y and y in z -> x in z)",
        "exists x exists y (x in y and (forall z (z in y -> z = x)))",
        "forall x exists y (x in y)",
        "forall x forall y (x = y <-> y = x)",
        "exists x forall y (y in x or y = x)",
        "forall x (exists y (y in x) -> (exists y (y in x and (forall z (z in y -> not (z in x))))))",
    ];
    out.extend(hand.iter().map(|s| forcekit::logic::parse(s).unwrap()));
    out.push(forcekit::logic::separation(&forcekit::logic::parse("z = z").unwrap()).unwrap());
    out.push(forcekit::logic::separation(&forcekit::logic::parse("exists u (u in z)").unwrap()).unwrap());
    out.push(forcekit::logic::replacement(&forcekit::logic::parse("z = w").unwrap()).unwrap());
    let mut r = rng(8);
    while out.len() < 40 {
        out.push(random_formula(&mut r, &[], 4));
    }
    out
}

/// Evaluation by substituting literals for variables, with no environment
/// and no sharing. Quantifiers range over `universe`.
pub fn naive_eval(universe: &[HfSet], f: &Formula) -> bool {
    fn subst_term(t: &Term, v: &str, x: &HfSet) -> Term {
        match t {
            Term::Ident(s) if s == v => Term::Lit(x.clone()),
            other => other.clone(),
        }
    }
    fn subst(f: &Formula, v: &str, x: &HfSet) -> Formula {
        match f {
            Formula::Mem(a, b) => Formula::Mem(subst_term(a, v, x), subst_term(b, v, x)),
            Formula::Eq(a, b) => Formula::Eq(subst_term(a, v, x), subst_term(b, v, x)),
            Formula::Not(a) => Formula::not(subst(a, v, x)),
            Formula::And(a, b) => Formula::and(subst(a, v, x), subst(b, v, x)),
            Formula::Or(a, b) => Formula::or(subst(a, v, x), subst(b, v, x)),
            Formula::Implies(a, b) => Formula::implies(subst(a, v, x), subst(b, v, x)),
            Formula::Iff(a, b) => Formula::iff(subst(a, v, x), subst(b, v, x)),
            Formula::Forall(u, _) | Formula::Exists(u, _) if u == v => f.clone(),
            Formula::Forall(u, a) => Formula::forall(u, subst(a, v, x)),
            Formula::Exists(u, a) => Formula::exists(u, subst(a, v, x)),
        }
    }
    fn lit(t: &Term) -> &HfSet {
        match t {
            Term::Lit(x) => x,
            Term::Ident(s) => panic!("free identifier {s}"),
        }
    }
    match f {
        Formula::Mem(a, b) => lit(b).elements().contains(lit(a)),
        Formula::Eq(a, b) => lit(a) == lit(b),
        Formula::Not(a) => !naive_eval(universe, a),
        Formula::And(a, b) => naive_eval(universe, a) && naive_eval(universe, b),
        Formula::Or(a, b) => naive_eval(universe, a) || naive_eval(universe, b),
        Formula::Implies(a, b) => !naive_eval(universe, a) || naive_eval(universe, b),
        Formula::Iff(a, b) => naive_eval(universe, a) == naive_eval(universe, b),
        Formula::Forall(v, a) => universe.iter().all(|x| naive_eval(universe, &subst(a, v, x))),
        Formula::Exists(v, a) => universe.iter().any(|x| naive_eval(universe, &subst(a, v, x))),
    }
}

/// Every transitive set with at most `max` elements, grown one element at a
/// time (a new element is any subset of the current set).
pub fn transitive_sets(max: usize) -> Vec<BTreeSet<HfSet>> {
    let mut seen: BTreeSet<BTreeSet<HfSet>> = BTreeSet::new();
    let mut frontier = vec![BTreeSet::new()];
    seen.insert(BTreeSet::new());
    while let Some(cur) = frontier.pop() {
        if cur.len() == max {
            continue;
        }
        let items: Vec<&HfSet> = cur.iter().collect();
        for mask in 0u32..1 << items.len() {
            let x = HfSet::from_elements((0..items.len()).filter(|i| mask >> i & 1 == 1).map(|i| items[i].clone()));
            if cur.contains(&x) {
                continue;
            }
            let mut next = cur.clone();
            next.insert(x);
            if seen.insert(next.clone()) {
                frontier.push(next);
            }
        }
    }
    seen.into_iter().collect()
}

/// The ultrafilter of `alg` at atom `i`, built from bit masks.
pub fn principal_ultrafilter(alg: &FinBoolAlg, i: usize) -> Subset {
    alg.subset(alg.elements().filter(|x| x.bits() >> i & 1 == 1)).unwrap()
}

/// A random labelled table: `e = ∅̌`, `one = 1̌`, and up to four names of rank
/// at most two with random weights.
pub fn random_context(r: &mut ChaCha8Rng, alg: &FinBoolAlg, extra: usize) -> (NameTable<FinBoolAlg>, NameContext) {
    let elems: Vec<Element> = alg.elements().collect();
    let mut t = NameTable::new(alg.clone());
    let e = t.check(&HfSet::empty());
    let one = t.check(&HfSet::von_neumann(1));
    t.set_label("e", e).unwrap();
    t.set_label("one", one).unwrap();
    let mut low = vec![e, one];
    for k in 0..extra {
        let pool = low.clone();
        let size = r.gen_range(1..=pool.len().min(3));
        let children: Vec<_> = pool.choose_multiple(r, size).copied().collect();
        let entries: Vec<_> = children.into_iter().map(|c| (c, *elems.choose(r).unwrap())).collect();
        let id = t.insert(entries).unwrap();
        if t.rank(id) <= 1 {
            low.push(id);
        }
        t.set_label(format!("n{k}"), id).unwrap();
    }
    let ctx = NameContext::labelled(&t);
    (t, ctx)
}

/// Formulas over the labels of [`random_context`] plus two literals.
pub fn forcing_corpus(extra: usize, count: usize, seed: u64) -> Vec<Formula> {
    let mut constants: Vec<Term> = vec![Term::ident("e"), Term::ident("one")];
    constants.extend((0..extra).map(|k| Term::Ident(format!("n{k}"))));
    constants.push(Term::Lit(HfSet::empty()));
    constants.push(Term::Lit(HfSet::von_neumann(1)));
    let mut hand: Vec<Formula> = [
        "[] in n0",
        "n0 = []",
        "e in one",
        "not (n0 in n1)",
        "n0 in one and n1 = e",
        "n0 = n1 or n0 in n1",
        "n0 in n1 -> n1 in n0",
        "n0 = one <-> n1 = e",
        "exists x (x in n0)",
        "forall x (x in n0 -> x in n1)",
        "forall x (x in n1 -> x in n0) and (forall x (x in n0 -> x in n1))",
        "exists x forall y (y in x -> y = e)",
        "forall x exists y (x in y or y in x)",
        "exists x exists y (not (x = y) and x in y)",
    ]
    .iter()
    .map(|s| forcekit::logic::parse(s).unwrap())
    .collect();
    let mut r = rng(seed);
    while hand.len() < count {
        let depth = r.gen_range(2..=4);
        hand.push(random_formula(&mut r, &constants, depth));
    }
    hand
}
