//! Evaluating terms in finite algebras and deciding identities.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::FiniteAlgebra;
use crate::error::{Error, Result};
use crate::term::{Identity, Term, Var, Word};

/// Default cap on `|A|^(number of variables)` for an exhaustive scan.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// Scans at least this long are split across the rayon pool.
const PARALLEL_THRESHOLD: u64 = 1 << 16;

pub type Assignment = BTreeMap<Var, usize>;

/// Value of a term under an assignment: words are folded left with `*`,
/// summands folded left with `+`.
pub fn evaluate(a: &FiniteAlgebra, t: &Term, asg: &Assignment) -> Result<usize> {
    let mut sum: Option<usize> = None;
    for w in t.words() {
        let mut prod: Option<usize> = None;
        for v in w.vars() {
            let x = *asg.get(v).ok_or_else(|| Error::UnboundVariable(v.to_string()))?;
            if x >= a.order() {
                return Err(Error::Malformed(format!("assignment value {x} out of range")));
            }
            prod = Some(match prod {
                None => x,
                Some(p) => a.mul(p, x),
            });
        }
        let p = prod.expect("words are nonempty");
        sum = Some(match sum {
            None => p,
            Some(s) => a.add(s, p),
        });
    }
    Ok(sum.expect("terms are nonempty"))
}

/// A term compiled against a fixed variable order.
#[derive(Clone, Debug)]
pub(crate) struct CompiledTerm(Vec<Vec<usize>>);

impl CompiledTerm {
    pub(crate) fn new(t: &Term, vars: &[Var]) -> Self {
        let slot = |v: &Var| vars.iter().position(|x| x == v).expect("variable in universe");
        CompiledTerm(t.words().iter().map(|w| w.vars().iter().map(slot).collect()).collect())
    }

    #[inline]
    pub(crate) fn eval(&self, a: &FiniteAlgebra, values: &[usize]) -> usize {
        let mut sum = usize::MAX;
        for w in &self.0 {
            let mut p = values[w[0]];
            for &s in &w[1..] {
                p = a.mul(p, values[s]);
            }
            sum = if sum == usize::MAX { p } else { a.add(sum, p) };
        }
        sum
    }
}

#[derive(Clone, Debug)]
pub(crate) struct CompiledIdentity {
    pub(crate) vars: Vec<Var>,
    lhs: CompiledTerm,
    rhs: CompiledTerm,
}

impl CompiledIdentity {
    pub(crate) fn new(id: &Identity) -> Self {
        let vars: Vec<Var> = id.vars().into_iter().collect();
        CompiledIdentity { lhs: CompiledTerm::new(&id.lhs, &vars), rhs: CompiledTerm::new(&id.rhs, &vars), vars }
    }

    /// First failing assignment index in lexicographic order (first variable
    /// most significant), if any.
    fn first_failure(&self, a: &FiniteAlgebra, total: u64) -> Option<(Vec<usize>, usize, usize)> {
        let n = a.order();
        let k = self.vars.len();
        let decode = |mut idx: u64| {
            let mut values = vec![0usize; k];
            for slot in (0..k).rev() {
                values[slot] = (idx % n as u64) as usize;
                idx /= n as u64;
            }
            values
        };
        let check = |idx: u64| {
            let values = decode(idx);
            let (l, r) = (self.lhs.eval(a, &values), self.rhs.eval(a, &values));
            (l != r).then_some((values, l, r))
        };
        if total >= PARALLEL_THRESHOLD {
            (0..total).into_par_iter().find_map_first(check)
        } else {
            (0..total).find_map(check)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub assignment: Vec<(String, usize)>,
    pub lhs_value: usize,
    pub rhs_value: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SatisfactionResult {
    pub holds: bool,
    pub counterexample: Option<Counterexample>,
}

pub fn satisfies(a: &FiniteAlgebra, id: &Identity) -> Result<SatisfactionResult> {
    satisfies_with_budget(a, id, DEFAULT_BUDGET)
}

pub fn satisfies_with_budget(a: &FiniteAlgebra, id: &Identity, budget: u64) -> Result<SatisfactionResult> {
    a.require_validated()?;
    let compiled = CompiledIdentity::new(id);
    let total = scan_size(a.order(), compiled.vars.len()).filter(|&t| t <= budget).ok_or_else(|| {
        Error::Resource(format!("{}^{} assignments exceed the budget of {budget}", a.order(), compiled.vars.len()))
    })?;
    Ok(match compiled.first_failure(a, total) {
        None => SatisfactionResult { holds: true, counterexample: None },
        Some((values, l, r)) => SatisfactionResult {
            holds: false,
            counterexample: Some(Counterexample {
                assignment: compiled.vars.iter().map(|v| v.to_string()).zip(values).collect(),
                lhs_value: l,
                rhs_value: r,
            }),
        },
    })
}

/// Boolean form used by bulk checks; skips building a counterexample.
pub(crate) fn holds(a: &FiniteAlgebra, id: &CompiledIdentity) -> bool {
    let n = a.order();
    let k = id.vars.len();
    let mut values = vec![0usize; k];
    loop {
        if id.lhs.eval(a, &values) != id.rhs.eval(a, &values) {
            return false;
        }
        let mut slot = k;
        loop {
            if slot == 0 {
                return true;
            }
            slot -= 1;
            values[slot] += 1;
            if values[slot] < n {
                break;
            }
            values[slot] = 0;
        }
    }
}

fn scan_size(n: usize, k: usize) -> Option<u64> {
    (n as u64).checked_pow(k as u32)
}

/// The four two-element algebras whose equational theories have a purely
/// syntactic description on identities `u = u + q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum TwoElement {
    L2,
    R2,
    N2,
    T2,
}

impl TwoElement {
    pub const ALL: [TwoElement; 4] = [TwoElement::L2, TwoElement::R2, TwoElement::N2, TwoElement::T2];

    pub fn algebra(self) -> FiniteAlgebra {
        match self {
            TwoElement::L2 => crate::catalog::l2(),
            TwoElement::R2 => crate::catalog::r2(),
            TwoElement::N2 => crate::catalog::n2(),
            TwoElement::T2 => crate::catalog::t2(),
        }
    }
}

/// Decides `u = u + q` in one of L2, R2, N2, T2 from word statistics alone.
pub fn two_element_predicate(which: TwoElement, id: &Identity) -> Result<bool> {
    let q = id.added_word().ok_or_else(|| Error::Shape(id.to_string()))?;
    let u = id.lhs.words();
    let q = q.stats();
    Ok(match which {
        TwoElement::L2 => u.iter().any(|w| w.head() == q.head),
        TwoElement::R2 => u.iter().any(|w| w.tail() == q.tail),
        TwoElement::N2 => q.len >= 2,
        TwoElement::T2 => u.iter().any(|w| w.len() >= 2),
    })
}

/// Named identities used throughout the classification of subvarieties.
#[derive(Clone, Debug)]
pub struct IdentityCatalog {
    entries: Vec<(&'static str, Identity)>,
}

const CATALOG: &[(&str, &str)] = &[
    ("id0703", "xy = xz"),
    ("id0703_dual", "yx = zx"),
    ("N", "xx = xx + x"),
    ("lt03", "x + yy = xx + yy"),
    ("ln02", "x = x + xy"),
    ("nt01", "x1x2 = y1y2"),
    ("lnt02", "x + yy = x + yy + xx"),
    ("L", "xx = xx + yy"),
    ("T", "x = x + xx"),
    ("basis_L2", "xy = x"),
    ("basis_R2", "xy = y"),
    ("basis_N2", "x = xx + x"),
    ("basis_S56", "xy = zy"),
];

/// Catalog labels making up each algebra's equational basis.
const BASES: &[(&str, &[&str])] = &[
    ("L2", &["basis_L2"]),
    ("R2", &["basis_R2"]),
    ("N2", &["nt01", "basis_N2"]),
    ("T2", &["nt01", "N"]),
    ("S56", &["basis_S56", "N"]),
    ("S58", &["id0703", "N"]),
    ("S4_475", &["id0703"]),
    ("S4_477", &["id0703_dual"]),
];

impl IdentityCatalog {
    pub fn standard() -> Self {
        let entries =
            CATALOG.iter().map(|(label, text)| (*label, text.parse().expect("catalog identities parse"))).collect();
        IdentityCatalog { entries }
    }

    pub fn labels(&self) -> Vec<&'static str> {
        self.entries.iter().map(|(l, _)| *l).collect()
    }

    pub fn entries(&self) -> &[(&'static str, Identity)] {
        &self.entries
    }

    /// Looks up a label; `lt02` is accepted as another name for `N`.
    pub fn get(&self, label: &str) -> Option<&Identity> {
        let label = if label == "lt02" { "N" } else { label };
        self.entries.iter().find(|(l, _)| *l == label).map(|(_, id)| id)
    }

    pub fn basis(&self, algebra: &str) -> Option<Vec<(&'static str, &Identity)>> {
        BASES
            .iter()
            .find(|(n, _)| *n == algebra)
            .map(|(_, labels)| labels.iter().map(|l| (*l, self.get(l).expect("basis labels exist"))).collect())
    }

    pub fn basis_names() -> Vec<&'static str> {
        BASES.iter().map(|(n, _)| *n).collect()
    }
}

/// Satisfaction of every catalog identity, in catalog order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CatalogPattern {
    pub entries: Vec<(String, bool)>,
}

impl CatalogPattern {
    pub fn get(&self, label: &str) -> Option<bool> {
        self.entries.iter().find(|(l, _)| l == label).map(|(_, b)| *b)
    }
}

pub fn classify_against_catalog(a: &FiniteAlgebra) -> Result<CatalogPattern> {
    a.require_validated()?;
    let catalog = IdentityCatalog::standard();
    let entries =
        catalog.entries().iter().map(|(label, id)| (label.to_string(), holds(a, &CompiledIdentity::new(id)))).collect();
    Ok(CatalogPattern { entries })
}

/// Convenience: does `a` satisfy the catalog identity `label`?
pub fn satisfies_label(a: &FiniteAlgebra, label: &str) -> Result<bool> {
    let catalog = IdentityCatalog::standard();
    let id = catalog.get(label).ok_or_else(|| Error::Unknown(label.to_string()))?;
    a.require_validated()?;
    Ok(holds(a, &CompiledIdentity::new(id)))
}

/// Fast boolean check without a budget, for small algebras.
pub fn check(a: &FiniteAlgebra, id: &Identity) -> Result<bool> {
    a.require_validated()?;
    Ok(holds(a, &CompiledIdentity::new(id)))
}

/// `u = u + q` with `q` a single word; helper for building identities of
/// that shape.
pub fn added_identity(u: &Term, q: &Word) -> Identity {
    Identity::new(u.clone(), u.union(&Term::word(q.clone())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn id(s: &str) -> Identity {
        s.parse().unwrap()
    }

    fn asg(pairs: &[(char, usize)]) -> Assignment {
        pairs.iter().map(|(c, v)| (Var::letter(*c), *v)).collect()
    }

    #[test]
    fn evaluate_examples() {
        let l2 = catalog::l2();
        let xy: Term = "xy".parse().unwrap();
        assert_eq!(evaluate(&l2, &xy, &asg(&[('x', 0), ('y', 1)])).unwrap(), 0);
        for a in catalog::all() {
            let x: Term = "x".parse().unwrap();
            for e in 0..a.order() {
                assert_eq!(evaluate(&a, &x, &asg(&[('x', e)])).unwrap(), e);
            }
        }
        let s58 = catalog::s58();
        let xx: Term = "xx".parse().unwrap();
        let one = s58.element("1").unwrap();
        assert_eq!(s58.label(evaluate(&s58, &xx, &asg(&[('x', one)])).unwrap()), "3");
        assert!(matches!(evaluate(&l2, &xy, &asg(&[('x', 0)])), Err(Error::UnboundVariable(_))));
    }

    #[test]
    fn satisfies_examples() {
        assert!(satisfies(&catalog::s58(), &id("xy = xz")).unwrap().holds);
        let r = satisfies(&catalog::l2(), &id("xx = xx + yy")).unwrap();
        assert!(!r.holds);
        let c = r.counterexample.unwrap();
        assert_eq!(c.assignment, vec![("x".to_string(), 0), ("y".to_string(), 1)]);
        assert_eq!((c.lhs_value, c.rhs_value), (0, 1));
        assert!(satisfies(&catalog::s7(), &id("xy = yx")).unwrap().holds);
    }

    #[test]
    fn counterexample_reproduces() {
        let catalog_ids = IdentityCatalog::standard();
        for a in catalog::all() {
            for (_, i) in catalog_ids.entries() {
                let r = satisfies(&a, i).unwrap();
                assert_eq!(r.holds, r.counterexample.is_none());
                if let Some(c) = r.counterexample {
                    let asg: Assignment = c
                        .assignment
                        .iter()
                        .map(|(v, x)| (crate::term::parse_term(v).unwrap().words()[0].head(), *x))
                        .collect();
                    let l = evaluate(&a, &i.lhs, &asg).unwrap();
                    let r = evaluate(&a, &i.rhs, &asg).unwrap();
                    assert_ne!(l, r);
                    assert_eq!((l, r), (c.lhs_value, c.rhs_value));
                }
            }
        }
    }

    #[test]
    fn budget_guard() {
        let big = id("x1x2x3x4x5x6x7x8x9 = y1");
        assert!(matches!(satisfies_with_budget(&catalog::s4_475(), &big, 1000), Err(Error::Resource(_))));
        let unvalidated = FiniteAlgebra::from_flat(1, vec![0], vec![0]).unwrap();
        assert!(matches!(satisfies(&unvalidated, &id("x = x")), Err(Error::NotValidated(_))));
    }

    #[test]
    fn parallel_scan_agrees_with_sequential() {
        // 4^9 assignments crosses the parallel threshold.
        let s = catalog::s4_475();
        let i = id("x1x2 + x3 + x4x5 + x6 + x7 + x8x9 = x1x2 + x3 + x4x5 + x6 + x7 + x8x9 + x3x3");
        let r = satisfies(&s, &i).unwrap();
        assert_eq!(r.holds, check(&s, &i).unwrap());
    }

    #[test]
    fn two_element_predicate_examples() {
        assert!(two_element_predicate(TwoElement::L2, &id("x+yz = x+yz+yx")).unwrap());
        assert!(!two_element_predicate(TwoElement::N2, &id("x = x+y")).unwrap());
        assert!(two_element_predicate(TwoElement::T2, &id("xx = xx+x")).unwrap());
        assert!(matches!(two_element_predicate(TwoElement::L2, &id("xy = xz")), Err(Error::Shape(_))));
        // Cross-check the first two against brute force.
        assert!(check(&catalog::l2(), &id("x+yz = x+yz+yx")).unwrap());
        assert!(!check(&catalog::n2(), &id("x = x+y")).unwrap());
    }

    #[test]
    fn classify_examples() {
        let p = classify_against_catalog(&catalog::l2()).unwrap();
        for yes in ["id0703", "N", "lt03", "ln02", "T"] {
            assert_eq!(p.get(yes), Some(true), "{yes}");
        }
        for no in ["L", "nt01"] {
            assert_eq!(p.get(no), Some(false), "{no}");
        }
        let p = classify_against_catalog(&FiniteAlgebra::trivial()).unwrap();
        assert!(p.entries.iter().all(|(_, b)| *b));
        let p = classify_against_catalog(&catalog::s4_475()).unwrap();
        assert_eq!(p.get("id0703"), Some(true));
        for no in ["L", "N", "T", "lt03", "lnt02"] {
            assert_eq!(p.get(no), Some(false), "{no}");
        }
    }

    #[test]
    fn catalog_bases_hold_in_their_algebras() {
        let c = IdentityCatalog::standard();
        for name in IdentityCatalog::basis_names() {
            let a = catalog::get(name).unwrap();
            for (label, i) in c.basis(name).unwrap() {
                assert!(check(&a, i).unwrap(), "{name} should satisfy {label}");
            }
        }
        assert!(c.get("lt02").is_some());
    }

    #[test]
    fn decomposition_preserves_satisfaction() {
        let ids = ["x+yy = xx+yy", "xy = xz", "x1x2 = y1y2", "xy = yx", "x = x + xy", "xyx = x"];
        for a in catalog::all() {
            for s in ids {
                let i = id(s);
                let whole = check(&a, &i).unwrap();
                let parts = i.decompose().iter().all(|p| check(&a, &p.identity).unwrap());
                assert_eq!(whole, parts, "{s} in {}", a.display_name());
            }
        }
    }
}
