//! Finite algebras with one addition and one multiplication, stored as
//! flattened Cayley tables over the carrier `0..n`.
//!
//! An algebra may be built without checking the ai-semiring axioms (the
//! enumerators need that), but every semantic operation in this crate
//! requires [`FiniteAlgebra::validate`] to have succeeded first.

mod canonical;
pub mod format;

pub use canonical::{
    are_isomorphic, automorphisms, canonical_form, canonical_form_of_tables, find_subalgebra_isomorphic, CanonicalForm,
    Isomorphism,
};

use std::collections::VecDeque;
use std::fmt;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest carrier the table representation supports.
pub const MAX_ORDER: usize = 255;

#[derive(Clone, Debug)]
pub struct FiniteAlgebra {
    order: usize,
    add: Vec<u8>,
    mul: Vec<u8>,
    name: Option<String>,
    labels: Option<Vec<String>>,
    validated: bool,
}

// Equality is table equality; names and labels are presentation only.
impl PartialEq for FiniteAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.add == other.add && self.mul == other.mul
    }
}

impl Eq for FiniteAlgebra {}

impl Hash for FiniteAlgebra {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.order.hash(state);
        self.add.hash(state);
        self.mul.hash(state);
    }
}

/// The laws that make a pair of tables an ai-semiring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Law {
    CommutativeAdd,
    IdempotentAdd,
    AssociativeAdd,
    AssociativeMul,
    LeftDistributive,
    RightDistributive,
}

impl Law {
    pub const ALL: [Law; 6] = [
        Law::CommutativeAdd,
        Law::IdempotentAdd,
        Law::AssociativeAdd,
        Law::AssociativeMul,
        Law::LeftDistributive,
        Law::RightDistributive,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Law::CommutativeAdd => "commutative_add",
            Law::IdempotentAdd => "idempotent_add",
            Law::AssociativeAdd => "associative_add",
            Law::AssociativeMul => "associative_mul",
            Law::LeftDistributive => "left_distributive",
            Law::RightDistributive => "right_distributive",
        }
    }
}

/// Outcome of checking every ai-semiring law exhaustively.
///
/// Witnesses are `[a, b, c]` element triples; laws in fewer variables pad
/// the unused trailing positions with 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub commutative_add: bool,
    pub idempotent_add: bool,
    pub associative_add: bool,
    pub associative_mul: bool,
    pub left_distributive: bool,
    pub right_distributive: bool,
    pub witnesses: Vec<(Law, [usize; 3])>,
}

impl AxiomReport {
    pub fn is_ai_semiring(&self) -> bool {
        self.commutative_add
            && self.idempotent_add
            && self.associative_add
            && self.associative_mul
            && self.left_distributive
            && self.right_distributive
    }

    pub fn holds(&self, law: Law) -> bool {
        match law {
            Law::CommutativeAdd => self.commutative_add,
            Law::IdempotentAdd => self.idempotent_add,
            Law::AssociativeAdd => self.associative_add,
            Law::AssociativeMul => self.associative_mul,
            Law::LeftDistributive => self.left_distributive,
            Law::RightDistributive => self.right_distributive,
        }
    }

    pub fn witness(&self, law: Law) -> Option<[usize; 3]> {
        self.witnesses.iter().find(|(l, _)| *l == law).map(|(_, w)| *w)
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let failed: Vec<String> =
            self.witnesses.iter().map(|(law, w)| format!("{} fails at {:?}", law.name(), w)).collect();
        if failed.is_empty() {
            write!(f, "all laws hold")
        } else {
            write!(f, "{}", failed.join(", "))
        }
    }
}

/// The natural order `a <= b` iff `a + b = b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderRelation {
    order: usize,
    leq: Vec<bool>,
}

impl OrderRelation {
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.order + b]
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Elements `t` with `a <= t` for every `a`.
    pub fn top(&self) -> Option<usize> {
        (0..self.order).find(|&t| (0..self.order).all(|a| self.leq(a, t)))
    }

    pub fn bottom(&self) -> Option<usize> {
        (0..self.order).find(|&b| (0..self.order).all(|a| self.leq(b, a)))
    }

    pub fn is_partial_order(&self) -> bool {
        let n = self.order;
        (0..n).all(|a| self.leq(a, a))
            && (0..n).all(|a| (0..n).all(|b| a == b || !(self.leq(a, b) && self.leq(b, a))))
            && (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| !(self.leq(a, b) && self.leq(b, c)) || self.leq(a, c))))
    }

    /// Pairs `(a, b)` with `a <= b`, row-major.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let n = self.order;
        (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).filter(|&(a, b)| self.leq(a, b)).collect()
    }
}

/// A partition of the carrier, stored as a block index per element.
/// Block indices are normalized to order of first appearance.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Congruence {
    block_of: Vec<usize>,
    blocks: usize,
}

impl Congruence {
    pub fn from_assignment(assignment: &[usize]) -> Result<Self> {
        if assignment.is_empty() {
            return Err(Error::InvalidPartition("empty carrier".into()));
        }
        let mut remap = std::collections::HashMap::new();
        let block_of = assignment
            .iter()
            .map(|b| {
                let next = remap.len();
                *remap.entry(*b).or_insert(next)
            })
            .collect();
        Ok(Self { block_of, blocks: remap.len() })
    }

    pub fn from_blocks(order: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        let mut assignment = vec![usize::MAX; order];
        for (i, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::InvalidPartition(format!("block {i} is empty")));
            }
            for &e in block {
                if e >= order {
                    return Err(Error::InvalidPartition(format!("element {e} out of range")));
                }
                if assignment[e] != usize::MAX {
                    return Err(Error::InvalidPartition(format!("element {e} in two blocks")));
                }
                assignment[e] = i;
            }
        }
        if let Some(e) = assignment.iter().position(|&b| b == usize::MAX) {
            return Err(Error::InvalidPartition(format!("element {e} in no block")));
        }
        Self::from_assignment(&assignment)
    }

    pub fn identity(order: usize) -> Self {
        Self { block_of: (0..order).collect(), blocks: order }
    }

    pub fn total(order: usize) -> Self {
        Self { block_of: vec![0; order], blocks: 1 }
    }

    pub fn block(&self, a: usize) -> usize {
        self.block_of[a]
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks
    }

    pub fn len(&self) -> usize {
        self.block_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.block_of.is_empty()
    }
}

/// Least subalgebra containing a seed, with the elements listed in order of
/// discovery and the induced algebra relabeled in that order.
#[derive(Clone, Debug)]
pub struct Subalgebra {
    pub elements: Vec<usize>,
    pub algebra: FiniteAlgebra,
}

impl FiniteAlgebra {
    /// Builds an unvalidated algebra from row-major tables.
    pub fn from_flat(order: usize, add: Vec<u8>, mul: Vec<u8>) -> Result<Self> {
        if order == 0 {
            return Err(Error::Malformed("order must be positive".into()));
        }
        if order > MAX_ORDER {
            return Err(Error::Malformed(format!("order {order} exceeds {MAX_ORDER}")));
        }
        for (which, table) in [("add", &add), ("mul", &mul)] {
            if table.len() != order * order {
                return Err(Error::Malformed(format!(
                    "{which} table has {} entries, expected {}",
                    table.len(),
                    order * order
                )));
            }
            if let Some(pos) = table.iter().position(|&v| v as usize >= order) {
                return Err(Error::Malformed(format!(
                    "{which} entry ({}, {}) = {} is out of range",
                    pos / order,
                    pos % order,
                    table[pos]
                )));
            }
        }
        Ok(Self { order, add, mul, name: None, labels: None, validated: false })
    }

    pub fn from_tables(add: &[Vec<usize>], mul: &[Vec<usize>]) -> Result<Self> {
        let n = add.len();
        let flatten = |which: &str, t: &[Vec<usize>]| -> Result<Vec<u8>> {
            if t.len() != n || t.iter().any(|row| row.len() != n) {
                return Err(Error::Malformed(format!("{which} table is not {n}x{n}")));
            }
            t.iter()
                .flatten()
                .map(|&v| u8::try_from(v).map_err(|_| Error::Malformed(format!("entry {v} out of range"))))
                .collect()
        };
        Self::from_flat(n, flatten("add", add)?, flatten("mul", mul)?)
    }

    /// The one-element algebra.
    pub fn trivial() -> Self {
        Self { order: 1, add: vec![0], mul: vec![0], name: Some("trivial".into()), labels: None, validated: true }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.order {
            return Err(Error::Malformed(format!("{} labels for an algebra of order {}", labels.len(), self.order)));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    /// Checks the axioms and marks the algebra validated.
    pub fn validate(mut self) -> Result<Self> {
        if !self.validated {
            let report = self.verify_axioms();
            if !report.is_ai_semiring() {
                return Err(Error::NotAiSemiring(Box::new(report)));
            }
            self.validated = true;
        }
        Ok(self)
    }

    pub(crate) fn assume_validated(mut self) -> Self {
        self.validated = true;
        self
    }

    pub fn is_validated(&self) -> bool {
        self.validated
    }

    pub fn require_validated(&self) -> Result<()> {
        if self.validated {
            Ok(())
        } else {
            Err(Error::NotValidated(self.name.clone()))
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn display_name(&self) -> String {
        self.name.clone().unwrap_or_else(|| format!("<order {}>", self.order))
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Label of an element: the stored label, or its index.
    pub fn label(&self, a: usize) -> String {
        match &self.labels {
            Some(l) => l[a].clone(),
            None => a.to_string(),
        }
    }

    /// Index of the element carrying a label.
    pub fn element(&self, label: &str) -> Option<usize> {
        match &self.labels {
            Some(l) => l.iter().position(|x| x == label),
            None => label.parse().ok().filter(|&i: &usize| i < self.order),
        }
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.order + b] as usize
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b] as usize
    }

    pub fn add_table(&self) -> &[u8] {
        &self.add
    }

    pub fn mul_table(&self) -> &[u8] {
        &self.mul
    }

    pub fn same_tables(&self, other: &FiniteAlgebra) -> bool {
        self == other
    }

    /// Exhaustive check of every law; witnesses are the first failure in
    /// row-major scan order.
    pub fn verify_axioms(&self) -> AxiomReport {
        let n = self.order;
        let mut witnesses = Vec::new();
        let mut first = |law: Law, found: Option<[usize; 3]>| {
            if let Some(w) = found {
                witnesses.push((law, w));
                false
            } else {
                true
            }
        };
        let pairs = || (0..n).flat_map(move |a| (0..n).map(move |b| (a, b)));
        let triples = || (0..n).flat_map(move |a| (0..n).flat_map(move |b| (0..n).map(move |c| [a, b, c])));

        let commutative_add = first(
            Law::CommutativeAdd,
            pairs().find(|&(a, b)| self.add(a, b) != self.add(b, a)).map(|(a, b)| [a, b, 0]),
        );
        let idempotent_add = first(Law::IdempotentAdd, (0..n).find(|&a| self.add(a, a) != a).map(|a| [a, 0, 0]));
        let associative_add = first(
            Law::AssociativeAdd,
            triples().find(|&[a, b, c]| self.add(self.add(a, b), c) != self.add(a, self.add(b, c))),
        );
        let associative_mul = first(
            Law::AssociativeMul,
            triples().find(|&[a, b, c]| self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c))),
        );
        let left_distributive = first(
            Law::LeftDistributive,
            triples().find(|&[a, b, c]| self.mul(a, self.add(b, c)) != self.add(self.mul(a, b), self.mul(a, c))),
        );
        let right_distributive = first(
            Law::RightDistributive,
            triples().find(|&[a, b, c]| self.mul(self.add(a, b), c) != self.add(self.mul(a, c), self.mul(b, c))),
        );
        AxiomReport {
            commutative_add,
            idempotent_add,
            associative_add,
            associative_mul,
            left_distributive,
            right_distributive,
            witnesses,
        }
    }

    pub fn natural_order(&self) -> Result<OrderRelation> {
        self.require_validated()?;
        let n = self.order;
        let leq = (0..n * n).map(|i| self.add(i / n, i % n) == i % n).collect();
        Ok(OrderRelation { order: n, leq })
    }

    /// Relabels the carrier: element `a` becomes `perm[a]`.
    pub fn relabel(&self, perm: &[usize]) -> FiniteAlgebra {
        let n = self.order;
        assert_eq!(perm.len(), n, "permutation length must match the order");
        let mut add = vec![0u8; n * n];
        let mut mul = vec![0u8; n * n];
        for a in 0..n {
            for b in 0..n {
                let at = perm[a] * n + perm[b];
                add[at] = perm[self.add(a, b)] as u8;
                mul[at] = perm[self.mul(a, b)] as u8;
            }
        }
        let labels = self.labels.as_ref().map(|l| {
            let mut out = vec![String::new(); n];
            for a in 0..n {
                out[perm[a]] = l[a].clone();
            }
            out
        });
        FiniteAlgebra { order: n, add, mul, name: self.name.clone(), labels, validated: self.validated }
    }

    /// Direct product; the pair `(a, b)` is element `a * |B| + b`.
    pub fn direct_product(&self, other: &FiniteAlgebra) -> Result<FiniteAlgebra> {
        self.require_validated()?;
        other.require_validated()?;
        let (n, m) = (self.order, other.order);
        let k = n * m;
        if k > MAX_ORDER {
            return Err(Error::Resource(format!("product order {k} exceeds {MAX_ORDER}")));
        }
        let mut add = Vec::with_capacity(k * k);
        let mut mul = Vec::with_capacity(k * k);
        for x in 0..k {
            for y in 0..k {
                let (a1, b1, a2, b2) = (x / m, x % m, y / m, y % m);
                add.push((self.add(a1, a2) * m + other.add(b1, b2)) as u8);
                mul.push((self.mul(a1, a2) * m + other.mul(b1, b2)) as u8);
            }
        }
        let name = format!("{}x{}", self.display_name(), other.display_name());
        Ok(FiniteAlgebra { order: k, add, mul, name: Some(name), labels: None, validated: true })
    }

    /// Same addition, transposed multiplication.
    pub fn dual(&self) -> Result<FiniteAlgebra> {
        self.require_validated()?;
        Ok(self.dual_unchecked())
    }

    pub(crate) fn dual_unchecked(&self) -> FiniteAlgebra {
        let n = self.order;
        let mul = (0..n * n).map(|i| self.mul[(i % n) * n + i / n]).collect();
        FiniteAlgebra {
            order: n,
            add: self.add.clone(),
            mul,
            name: self.name.as_ref().map(|s| format!("dual({s})")),
            labels: self.labels.clone(),
            validated: self.validated,
        }
    }

    pub fn is_closed(&self, subset: &[usize]) -> bool {
        let mut member = vec![false; self.order];
        for &e in subset {
            member[e] = true;
        }
        subset.iter().all(|&a| subset.iter().all(|&b| member[self.add(a, b)] && member[self.mul(a, b)]))
    }

    /// Algebra induced on a closed subset, relabeled `0..k` in the given order.
    pub fn induced(&self, subset: &[usize]) -> Result<FiniteAlgebra> {
        let mut pos = vec![usize::MAX; self.order];
        for (i, &e) in subset.iter().enumerate() {
            if e >= self.order {
                return Err(Error::Malformed(format!("element {e} out of range")));
            }
            pos[e] = i;
        }
        let k = subset.len();
        let mut add = Vec::with_capacity(k * k);
        let mut mul = Vec::with_capacity(k * k);
        for &a in subset {
            for &b in subset {
                let (s, p) = (pos[self.add(a, b)], pos[self.mul(a, b)]);
                if s == usize::MAX || p == usize::MAX {
                    return Err(Error::Malformed("subset is not closed".into()));
                }
                add.push(s as u8);
                mul.push(p as u8);
            }
        }
        let labels = self.labels.as_ref().map(|l| subset.iter().map(|&e| l[e].clone()).collect());
        Ok(FiniteAlgebra { order: k, add, mul, name: None, labels, validated: self.validated })
    }

    pub fn subalgebra_generated(&self, seed: &[usize]) -> Result<Subalgebra> {
        self.require_validated()?;
        if seed.is_empty() {
            return Err(Error::EmptySeed);
        }
        let mut member = vec![false; self.order];
        let mut elements: Vec<usize> = Vec::new();
        let mut push = |e: usize, elements: &mut Vec<usize>| {
            if !member[e] {
                member[e] = true;
                elements.push(e);
            }
        };
        for &e in seed {
            if e >= self.order {
                return Err(Error::Malformed(format!("seed element {e} out of range")));
            }
            push(e, &mut elements);
        }
        // Each element is combined with every element discovered no later
        // than itself, both ways round.
        let mut i = 0;
        while i < elements.len() {
            let a = elements[i];
            let mut j = 0;
            while j <= i {
                let b = elements[j];
                for v in [self.add(a, b), self.mul(a, b), self.mul(b, a)] {
                    push(v, &mut elements);
                }
                j += 1;
            }
            i += 1;
        }
        let algebra = self.induced(&elements)?;
        Ok(Subalgebra { elements, algebra })
    }

    pub fn is_congruence(&self, c: &Congruence) -> Result<()> {
        let n = self.order;
        if c.len() != n {
            return Err(Error::InvalidPartition(format!("partition covers {} elements, algebra has {n}", c.len())));
        }
        for a in 0..n {
            for b in (a + 1)..n {
                if c.block(a) != c.block(b) {
                    continue;
                }
                for x in 0..n {
                    let checks = [
                        (self.add(a, x), self.add(b, x), "a + c"),
                        (self.mul(a, x), self.mul(b, x), "a * c"),
                        (self.mul(x, a), self.mul(x, b), "c * a"),
                    ];
                    for (l, r, what) in checks {
                        if c.block(l) != c.block(r) {
                            return Err(Error::NotACongruence {
                                a,
                                b,
                                reason: format!("{what} splits them for c = {x} ({l} vs {r})"),
                            });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn congruence_quotient(&self, c: &Congruence) -> Result<FiniteAlgebra> {
        self.require_validated()?;
        self.is_congruence(c)?;
        let k = c.num_blocks();
        let mut rep = vec![usize::MAX; k];
        for a in 0..self.order {
            if rep[c.block(a)] == usize::MAX {
                rep[c.block(a)] = a;
            }
        }
        let mut add = Vec::with_capacity(k * k);
        let mut mul = Vec::with_capacity(k * k);
        for &a in &rep {
            for &b in &rep {
                add.push(c.block(self.add(a, b)) as u8);
                mul.push(c.block(self.mul(a, b)) as u8);
            }
        }
        Ok(FiniteAlgebra { order: k, add, mul, name: None, labels: None, validated: true })
    }

    /// Smallest generating set found greedily in index order.
    pub fn greedy_generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut covered = vec![false; self.order];
        for a in 0..self.order {
            if covered[a] {
                continue;
            }
            gens.push(a);
            let mut queue: VecDeque<usize> = (0..self.order).filter(|&e| covered[e]).collect();
            covered[a] = true;
            queue.push_back(a);
            let mut known: Vec<usize> = (0..self.order).filter(|&e| covered[e]).collect();
            while let Some(x) = queue.pop_front() {
                let snapshot = known.clone();
                for y in snapshot {
                    for v in [self.add(x, y), self.mul(x, y), self.mul(y, x)] {
                        if !covered[v] {
                            covered[v] = true;
                            known.push(v);
                            queue.push_back(v);
                        }
                    }
                }
            }
        }
        gens
    }
}

impl fmt::Display for FiniteAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format::to_text(self))
    }
}
