//! Finitely generated varieties: membership, relatively free algebras,
//! inclusion, and the lattice spanned by a list of generated varieties.
//!
//! Everything rests on one closure computation. Fix `k` variables and list
//! every assignment of them into every generator; a term is then a vector
//! over these assignments, and the vectors of all terms form the free
//! algebra of rank `k` inside a finite power of the generators. For a
//! membership test each vector is paired with the value of the same term in
//! the candidate under `x_j -> a_j`; two equal vectors with different
//! candidate values are a separating identity.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::algebra::{canonical_form, FiniteAlgebra};
use crate::error::{Error, Result};
use crate::satisfaction::{check, CompiledTerm, IdentityCatalog};
use crate::term::{Identity, Term, Var};

#[derive(Clone, Debug)]
pub struct VarietySpec {
    pub label: String,
    pub generators: Vec<FiniteAlgebra>,
}

impl VarietySpec {
    pub fn new(label: impl Into<String>, generators: Vec<FiniteAlgebra>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::Malformed("a variety needs at least one generator".into()));
        }
        for g in &generators {
            g.require_validated()?;
        }
        Ok(VarietySpec { label: label.into(), generators })
    }

    /// `V(A, B, ...)` labelled by the generators' names.
    pub fn generated_by(generators: Vec<FiniteAlgebra>) -> Result<Self> {
        let names: Vec<String> = generators.iter().map(|g| g.display_name()).collect();
        Self::new(format!("V({})", names.join(",")), generators)
    }

    fn joined(&self, other: &VarietySpec) -> VarietySpec {
        let mut gens = self.generators.clone();
        for g in &other.generators {
            let key = canonical_form(g).tables;
            if !gens.iter().any(|h| h.order() == g.order() && canonical_form(h).tables == key) {
                gens.push(g.clone());
            }
        }
        VarietySpec { label: format!("{} v {}", self.label, other.label), generators: gens }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Budget {
    pub closure_elements: usize,
    /// Cap on the vector length `sum |S_i|^k`.
    pub vector_length: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { closure_elements: 10_000_000, vector_length: 10_000_000 }
    }
}

/// Variables used for rank `k`: `x, y, z, u, v, w`, then `x1, ..., xk`.
pub fn variables(k: usize) -> Vec<Var> {
    const LETTERS: [char; 6] = ['x', 'y', 'z', 'u', 'v', 'w'];
    if k <= LETTERS.len() {
        LETTERS[..k].iter().map(|&c| Var::letter(c)).collect()
    } else {
        (1..=k as u32).map(|i| Var::indexed('x', i)).collect()
    }
}

/// Positions of the vectors: for each generator, all assignments of the
/// variables in lexicographic order (first variable most significant).
struct Positions<'a> {
    gens: &'a [FiniteAlgebra],
    owner: Vec<u8>,
    /// `seeds[j]` is the vector of variable `j`.
    seeds: Vec<Vec<u8>>,
}

impl<'a> Positions<'a> {
    fn new(gens: &'a [FiniteAlgebra], k: usize, budget: &Budget) -> Result<Self> {
        let mut total: usize = 0;
        for g in gens {
            let count = (g.order() as u64).checked_pow(k as u32).unwrap_or(u64::MAX);
            total = total.saturating_add(usize::try_from(count).unwrap_or(usize::MAX));
        }
        if total > budget.vector_length {
            return Err(Error::Resource(format!(
                "vectors of length {total} exceed the budget of {}",
                budget.vector_length
            )));
        }
        let mut owner = Vec::with_capacity(total);
        let mut seeds = vec![Vec::with_capacity(total); k];
        for (gi, g) in gens.iter().enumerate() {
            let n = g.order();
            let count = n.pow(k as u32);
            for idx in 0..count {
                owner.push(gi as u8);
                let mut rest = idx;
                for slot in (0..k).rev() {
                    seeds[slot].push((rest % n) as u8);
                    rest /= n;
                }
            }
        }
        Ok(Positions { gens, owner, seeds })
    }

    fn add(&self, u: &[u8], v: &[u8]) -> Vec<u8> {
        (0..u.len()).map(|p| self.gens[self.owner[p] as usize].add(u[p] as usize, v[p] as usize) as u8).collect()
    }

    fn mul(&self, u: &[u8], v: &[u8]) -> Vec<u8> {
        (0..u.len()).map(|p| self.gens[self.owner[p] as usize].mul(u[p] as usize, v[p] as usize) as u8).collect()
    }

    /// Vector of an arbitrary term over the first `k` variables.
    fn vector_of(&self, t: &Term, vars: &[Var]) -> Vec<u8> {
        let compiled = CompiledTerm::new(t, vars);
        let k = vars.len();
        (0..self.owner.len())
            .map(|p| {
                let values: Vec<usize> = (0..k).map(|j| self.seeds[j][p] as usize).collect();
                compiled.eval(&self.gens[self.owner[p] as usize], &values) as u8
            })
            .collect()
    }
}

#[derive(Clone, Copy)]
enum Origin {
    Seed(usize),
    Add(usize, usize),
    Mul(usize, usize),
}

struct Node {
    vector: Vec<u8>,
    value: usize,
    term: Term,
}

struct Closure {
    nodes: Vec<Node>,
    index: HashMap<Vec<u8>, usize>,
    conflict: Option<Identity>,
}

fn rank_key(t: &Term) -> (usize, &Term) {
    (t.size(), t)
}

/// Breadth-first closure of the seeds. Each round combines every pair that
/// involves an element found in the previous round; new vectors are added
/// in order of their smallest witness by (size, term).
fn close(pos: &Positions, vars: &[Var], candidate: Option<&FiniteAlgebra>, budget: &Budget) -> Result<Closure> {
    let k = vars.len();
    let mut c = Closure { nodes: Vec::new(), index: HashMap::new(), conflict: None };
    let value_of = |c: &Closure, origin: Origin| -> usize {
        match (candidate, origin) {
            (None, _) => 0,
            (Some(_), Origin::Seed(j)) => j,
            (Some(a), Origin::Add(i, j)) => a.add(c.nodes[i].value, c.nodes[j].value),
            (Some(a), Origin::Mul(i, j)) => a.mul(c.nodes[i].value, c.nodes[j].value),
        }
    };
    let term_of = |c: &Closure, origin: Origin| -> Term {
        match origin {
            Origin::Seed(j) => Term::var(vars[j]),
            Origin::Add(i, j) => c.nodes[i].term.union(&c.nodes[j].term),
            Origin::Mul(i, j) => c.nodes[i].term.product(&c.nodes[j].term),
        }
    };

    let mut pending: Vec<(Vec<u8>, Origin)> = (0..k).map(|j| (pos.seeds[j].clone(), Origin::Seed(j))).collect();
    loop {
        let mut conflicts: Vec<Identity> = Vec::new();
        // New vector -> best witness per candidate value.
        let mut fresh: HashMap<Vec<u8>, BTreeMap<usize, Term>> = HashMap::new();
        for (vector, origin) in pending.drain(..) {
            let value = value_of(&c, origin);
            if let Some(&e) = c.index.get(&vector) {
                if c.nodes[e].value != value {
                    conflicts.push(Identity::new(c.nodes[e].term.clone(), term_of(&c, origin)));
                }
                continue;
            }
            let term = term_of(&c, origin);
            let slot = fresh.entry(vector).or_default();
            match slot.get(&value) {
                Some(best) if rank_key(best) <= rank_key(&term) => {}
                _ => {
                    slot.insert(value, term);
                }
            }
        }
        let mut accepted: Vec<(Term, Vec<u8>, usize)> = Vec::new();
        for (vector, by_value) in fresh {
            let mut options: Vec<(usize, Term)> = by_value.into_iter().collect();
            options.sort_by(|a, b| rank_key(&a.1).cmp(&rank_key(&b.1)));
            if options.len() > 1 {
                conflicts.push(Identity::new(options[0].1.clone(), options[1].1.clone()));
            }
            let (value, term) = options.swap_remove(0);
            accepted.push((term, vector, value));
        }
        if !conflicts.is_empty() {
            conflicts.sort_by_cached_key(|a| (a.size(), a.to_string()));
            c.conflict = Some(conflicts.swap_remove(0));
            return Ok(c);
        }
        if accepted.is_empty() {
            return Ok(c);
        }
        accepted.sort_by(|a, b| rank_key(&a.0).cmp(&rank_key(&b.0)));
        let hi_before = c.nodes.len();
        for (term, vector, value) in accepted {
            c.index.insert(vector.clone(), c.nodes.len());
            c.nodes.push(Node { vector, value, term });
        }
        if c.nodes.len() > budget.closure_elements {
            return Err(Error::Resource(format!("closure exceeds the budget of {} elements", budget.closure_elements)));
        }
        for j in hi_before..c.nodes.len() {
            for i in 0..=j {
                let (u, v) = (&c.nodes[i].vector, &c.nodes[j].vector);
                pending.push((pos.add(u, v), Origin::Add(i, j)));
                pending.push((pos.mul(u, v), Origin::Mul(i, j)));
                if i != j {
                    pending.push((pos.mul(v, u), Origin::Mul(j, i)));
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MembershipCertificate {
    /// Variable and the candidate element (by label) it is sent to.
    pub assignment: Vec<(String, String)>,
    /// Size of the free algebra the well-defined map starts from.
    pub closure_size: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MembershipResult {
    pub member: bool,
    pub separating_identity: Option<Identity>,
    pub certificate: Option<MembershipCertificate>,
}

/// Decides `A in V` with `|A|` variables.
pub fn member(a: &FiniteAlgebra, v: &VarietySpec) -> Result<MembershipResult> {
    member_with_budget(a, v, &Budget::default())
}

pub fn member_with_budget(a: &FiniteAlgebra, v: &VarietySpec, budget: &Budget) -> Result<MembershipResult> {
    a.require_validated()?;
    let k = a.order();
    let vars = variables(k);
    let pos = Positions::new(&v.generators, k, budget)?;
    let c = close(&pos, &vars, Some(a), budget)?;
    Ok(match c.conflict {
        Some(id) => MembershipResult { member: false, separating_identity: Some(id), certificate: None },
        None => MembershipResult {
            member: true,
            separating_identity: None,
            certificate: Some(MembershipCertificate {
                assignment: vars.iter().enumerate().map(|(j, x)| (x.to_string(), a.label(j))).collect(),
                closure_size: c.nodes.len(),
            }),
        },
    })
}

/// The relatively free algebra of rank `k`, realized on vectors.
#[derive(Clone, Debug)]
pub struct FreeAlgebra {
    pub rank: usize,
    pub variables: Vec<Var>,
    /// Elements in discovery order; labels are the witness terms.
    pub algebra: FiniteAlgebra,
    pub witnesses: Vec<Term>,
    pub vectors: Vec<Vec<u8>>,
    gens: Vec<FiniteAlgebra>,
}

impl FreeAlgebra {
    /// Element represented by an arbitrary term in the free variables.
    pub fn element_of(&self, t: &Term) -> Result<usize> {
        if let Some(v) = t.vars().into_iter().find(|v| !self.variables.contains(v)) {
            return Err(Error::UnboundVariable(v.to_string()));
        }
        let pos = Positions::new(&self.gens, self.rank, &Budget::default())?;
        let vector = pos.vector_of(t, &self.variables);
        Ok(self.vectors.iter().position(|v| *v == vector).expect("closure is complete"))
    }
}

pub fn free_algebra(v: &VarietySpec, k: usize) -> Result<FreeAlgebra> {
    free_algebra_with_budget(v, k, &Budget::default())
}

pub fn free_algebra_with_budget(v: &VarietySpec, k: usize, budget: &Budget) -> Result<FreeAlgebra> {
    if k == 0 {
        return Err(Error::Malformed("rank must be positive".into()));
    }
    let vars = variables(k);
    let pos = Positions::new(&v.generators, k, budget)?;
    let c = close(&pos, &vars, None, budget)?;
    let n = c.nodes.len();
    if n > crate::algebra::MAX_ORDER {
        return Err(Error::Resource(format!(
            "free algebra has {n} elements; tables hold at most {}",
            crate::algebra::MAX_ORDER
        )));
    }
    let mut add = Vec::with_capacity(n * n);
    let mut mul = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let (u, w) = (&c.nodes[i].vector, &c.nodes[j].vector);
            add.push(c.index[&pos.add(u, w)] as u8);
            mul.push(c.index[&pos.mul(u, w)] as u8);
        }
    }
    let labels = c.nodes.iter().map(|node| node.term.to_string().replace(' ', "")).collect();
    let algebra = FiniteAlgebra::from_flat(n, add, mul)?
        .with_labels(labels)?
        .with_name(format!("F{k}({})", v.label))
        .assume_validated();
    Ok(FreeAlgebra {
        rank: k,
        variables: vars,
        algebra,
        witnesses: c.nodes.iter().map(|node| node.term.clone()).collect(),
        vectors: c.nodes.into_iter().map(|node| node.vector).collect(),
        gens: v.generators.clone(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relation {
    Equal,
    /// The first variety is properly contained in the second.
    FirstInSecond,
    SecondInFirst,
    Incomparable,
}

impl Relation {
    pub fn describe(self, a: &str, b: &str) -> String {
        match self {
            Relation::Equal => format!("{a} = {b}"),
            Relation::FirstInSecond => format!("{a} < {b}"),
            Relation::SecondInFirst => format!("{b} < {a}"),
            Relation::Incomparable => format!("{a} and {b} are incomparable"),
        }
    }
}

/// A generator of one variety outside the other, with the identity that
/// separates it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Separation {
    pub generator: String,
    pub outside: String,
    pub identity: Identity,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Comparison {
    pub relation: Relation,
    pub evidence: Vec<Separation>,
}

/// First generator of `sub` outside `sup`, if any.
fn first_outside(sub: &VarietySpec, sup: &VarietySpec, budget: &Budget) -> Result<Option<Separation>> {
    for g in &sub.generators {
        let r = member_with_budget(g, sup, budget)?;
        if let Some(identity) = r.separating_identity {
            return Ok(Some(Separation { generator: g.display_name(), outside: sup.label.clone(), identity }));
        }
    }
    Ok(None)
}

pub fn includes(sup: &VarietySpec, sub: &VarietySpec) -> Result<bool> {
    Ok(first_outside(sub, sup, &Budget::default())?.is_none())
}

pub fn compare(v1: &VarietySpec, v2: &VarietySpec) -> Result<Comparison> {
    compare_with_budget(v1, v2, &Budget::default())
}

pub fn compare_with_budget(v1: &VarietySpec, v2: &VarietySpec, budget: &Budget) -> Result<Comparison> {
    let out12 = first_outside(v1, v2, budget)?;
    let out21 = first_outside(v2, v1, budget)?;
    let relation = match (&out12, &out21) {
        (None, None) => Relation::Equal,
        (None, Some(_)) => Relation::FirstInSecond,
        (Some(_), None) => Relation::SecondInFirst,
        (Some(_), Some(_)) => Relation::Incomparable,
    };
    Ok(Comparison { relation, evidence: out12.into_iter().chain(out21).collect() })
}

/// A pair whose generated join is not among the listed varieties.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JoinEscape {
    pub left: usize,
    pub right: usize,
    /// Least listed upper bound, if the poset has one.
    pub least_upper_bound: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VarietyLattice {
    pub labels: Vec<String>,
    /// `includes[i][j]`: variety `i` is contained in variety `j`.
    pub includes: Vec<Vec<bool>>,
    /// Pairs of distinct indices describing the same variety.
    pub duplicates: Vec<(usize, usize)>,
    /// Covering pairs `(lower, upper)`.
    pub hasse: Vec<(usize, usize)>,
    /// Join of the generators of `i` and `j`, matched against the list.
    pub joins: Vec<Vec<Option<usize>>>,
    pub meets: Vec<Vec<Option<usize>>>,
    pub escapes: Vec<JoinEscape>,
    /// `None` when some meet or join is missing.
    pub distributive: Option<bool>,
    pub bottom: Option<usize>,
    pub top: Option<usize>,
    pub atoms: Vec<usize>,
    pub coatoms: Vec<usize>,
}

impl VarietyLattice {
    pub fn strictly_below(&self, i: usize, j: usize) -> bool {
        self.includes[i][j] && !self.includes[j][i]
    }

    pub fn hasse_labels(&self) -> Vec<(String, String)> {
        self.hasse.iter().map(|&(a, b)| (self.labels[a].clone(), self.labels[b].clone())).collect()
    }

    pub fn is_lattice(&self) -> bool {
        self.duplicates.is_empty()
            && self.escapes.is_empty()
            && self.meets.iter().flatten().all(Option::is_some)
            && self.joins.iter().flatten().all(Option::is_some)
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph lattice {\n  rankdir=BT;\n  node [shape=plaintext];\n");
        for (i, l) in self.labels.iter().enumerate() {
            out.push_str(&format!("  n{i} [label=\"{l}\"];\n"));
        }
        for &(a, b) in &self.hasse {
            out.push_str(&format!("  n{a} -> n{b} [arrowhead=none];\n"));
        }
        out.push_str("}\n");
        out
    }
}

/// Membership of every distinct generator in every listed variety, memoized
/// by canonical form.
struct MemberTable<'a> {
    budget: &'a Budget,
    cache: HashMap<(Vec<u8>, Vec<Vec<u8>>), bool>,
}

impl MemberTable<'_> {
    fn spec_key(v: &VarietySpec) -> Vec<Vec<u8>> {
        let mut keys: Vec<Vec<u8>> = v.generators.iter().map(|g| canonical_form(g).tables).collect();
        keys.sort();
        keys.dedup();
        keys
    }

    fn member(&mut self, a: &FiniteAlgebra, v: &VarietySpec) -> Result<bool> {
        let key = (canonical_form(a).tables, Self::spec_key(v));
        if let Some(&b) = self.cache.get(&key) {
            return Ok(b);
        }
        let b = member_with_budget(a, v, self.budget)?.member;
        self.cache.insert(key, b);
        Ok(b)
    }

    fn includes(&mut self, sup: &VarietySpec, sub: &VarietySpec) -> Result<bool> {
        for g in &sub.generators {
            if !self.member(g, sup)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

pub fn build_lattice(specs: &[VarietySpec]) -> Result<VarietyLattice> {
    build_lattice_with_budget(specs, &Budget::default())
}

pub fn build_lattice_with_budget(specs: &[VarietySpec], budget: &Budget) -> Result<VarietyLattice> {
    let n = specs.len();
    let mut table = MemberTable { budget, cache: HashMap::new() };
    let mut includes = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..n {
            includes[i][j] = i == j || table.includes(&specs[j], &specs[i])?;
        }
    }
    let below = |i: usize, j: usize| includes[i][j] && !includes[j][i];
    let duplicates: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .filter(|&(i, j)| includes[i][j] && includes[j][i])
        .collect();
    let mut hasse = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if below(i, j) && !(0..n).any(|m| below(i, m) && below(m, j)) {
                hasse.push((i, j));
            }
        }
    }
    let least = |cands: Vec<usize>, le: &dyn Fn(usize, usize) -> bool| -> Option<usize> {
        cands.iter().copied().find(|&c| cands.iter().all(|&d| le(c, d)))
    };
    let lub = |i: usize, j: usize| {
        least((0..n).filter(|&m| includes[i][m] && includes[j][m]).collect(), &|a, b| includes[a][b])
    };
    let glb = |i: usize, j: usize| {
        least((0..n).filter(|&m| includes[m][i] && includes[m][j]).collect(), &|a, b| includes[b][a])
    };

    let mut joins = vec![vec![None; n]; n];
    let mut escapes = Vec::new();
    for i in 0..n {
        for j in i..n {
            let bound = lub(i, j);
            let matched = match bound {
                Some(m) => {
                    let join = specs[i].joined(&specs[j]);
                    table.includes(&join, &specs[m])?.then_some(m)
                }
                None => None,
            };
            if matched.is_none() {
                escapes.push(JoinEscape { left: i, right: j, least_upper_bound: bound });
            }
            joins[i][j] = matched;
            joins[j][i] = matched;
        }
    }
    let meets: Vec<Vec<Option<usize>>> = (0..n).map(|i| (0..n).map(|j| glb(i, j)).collect()).collect();

    let complete = duplicates.is_empty()
        && joins.iter().flatten().all(Option::is_some)
        && meets.iter().flatten().all(Option::is_some);
    let distributive = complete.then(|| {
        let join = |a: usize, b: usize| joins[a][b].unwrap();
        let meet = |a: usize, b: usize| meets[a][b].unwrap();
        (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| meet(a, join(b, c)) == join(meet(a, b), meet(a, c)))))
    });
    let bottom = (0..n).find(|&b| (0..n).all(|m| includes[b][m]));
    let top = (0..n).find(|&t| (0..n).all(|m| includes[m][t]));
    let atoms = bottom.map_or(Vec::new(), |b| hasse.iter().filter(|e| e.0 == b).map(|e| e.1).collect());
    let coatoms = top.map_or(Vec::new(), |t| hasse.iter().filter(|e| e.1 == t).map(|e| e.0).collect());
    Ok(VarietyLattice {
        labels: specs.iter().map(|s| s.label.clone()).collect(),
        includes,
        duplicates,
        hasse,
        joins,
        meets,
        escapes,
        distributive,
        bottom,
        top,
        atoms,
        coatoms,
    })
}

fn spec(label: &str, names: &[&str]) -> VarietySpec {
    let gens = names.iter().map(|n| crate::catalog::get(n).expect("catalog entry")).collect();
    VarietySpec::new(label, gens).expect("catalog algebras are validated")
}

/// The ten subvarieties of `xy = xz`, bottom first.
pub fn standard_specs() -> Vec<VarietySpec> {
    vec![
        spec("T", &["trivial"]),
        spec("V(L2)", &["L2"]),
        spec("V(N2)", &["N2"]),
        spec("V(T2)", &["T2"]),
        spec("V(L2,N2)", &["L2", "N2"]),
        spec("V(N2,T2)", &["N2", "T2"]),
        spec("V(L2,T2)", &["L2", "T2"]),
        spec("V(L2,N2,T2)", &["L2", "N2", "T2"]),
        spec("V(S58)", &["S58"]),
        spec("R", &["S4_475"]),
    ]
}

/// The ten subvarieties of `yx = zx`: the duals of [`standard_specs`].
pub fn dual_specs() -> Vec<VarietySpec> {
    vec![
        spec("T", &["trivial"]),
        spec("V(R2)", &["R2"]),
        spec("V(N2)", &["N2"]),
        spec("V(T2)", &["T2"]),
        spec("V(R2,N2)", &["R2", "N2"]),
        spec("V(N2,T2)", &["N2", "T2"]),
        spec("V(R2,T2)", &["R2", "T2"]),
        spec("V(R2,N2,T2)", &["R2", "N2", "T2"]),
        spec("V(S56)", &["S56"]),
        spec("C", &["S4_477"]),
    ]
}

/// Covering pairs of the lattice of [`standard_specs`], by label.
pub const REFERENCE_HASSE: [(&str, &str); 15] = [
    ("T", "V(L2)"),
    ("T", "V(N2)"),
    ("T", "V(T2)"),
    ("V(L2)", "V(L2,N2)"),
    ("V(L2)", "V(L2,T2)"),
    ("V(N2)", "V(L2,N2)"),
    ("V(N2)", "V(N2,T2)"),
    ("V(T2)", "V(N2,T2)"),
    ("V(T2)", "V(L2,T2)"),
    ("V(L2,N2)", "V(L2,N2,T2)"),
    ("V(N2,T2)", "V(L2,N2,T2)"),
    ("V(L2,T2)", "V(L2,N2,T2)"),
    ("V(L2,T2)", "V(S58)"),
    ("V(L2,N2,T2)", "R"),
    ("V(S58)", "R"),
];

/// Labels of the identities whose satisfaction pattern tells the ten
/// subvarieties of `xy = xz` apart.
pub const PATTERN_LABELS: [&str; 5] = ["L", "N", "T", "lt03", "lnt02"];

fn pattern(a: &FiniteAlgebra) -> Result<Vec<bool>> {
    let catalog = IdentityCatalog::standard();
    PATTERN_LABELS.iter().map(|l| check(a, catalog.get(l).expect("pattern labels are in the catalog"))).collect()
}

/// Pattern of a variety: an identity holds in `V(K)` iff it holds in all of `K`.
pub fn spec_pattern(v: &VarietySpec) -> Result<Vec<bool>> {
    let mut acc = vec![true; PATTERN_LABELS.len()];
    for g in &v.generators {
        for (slot, b) in acc.iter_mut().zip(pattern(g)?) {
            *slot &= b;
        }
    }
    Ok(acc)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub label: String,
    pub pattern: Vec<(String, bool)>,
    /// Least listed variety containing the algebra, found by membership.
    pub by_membership: String,
}

/// Names the variety generated by an algebra satisfying `xy = xz`, among
/// [`standard_specs`], and confirms the answer by membership.
pub fn classify_generated(a: &FiniteAlgebra) -> Result<Classification> {
    a.require_validated()?;
    let catalog = IdentityCatalog::standard();
    if !check(a, catalog.get("id0703").expect("catalog"))? {
        return Err(Error::Shape(format!("{} does not satisfy xy = xz", a.display_name())));
    }
    let specs = standard_specs();
    let own = pattern(a)?;
    let by_pattern: Vec<usize> =
        (0..specs.len()).filter(|&i| spec_pattern(&specs[i]).map(|p| p == own).unwrap_or(false)).collect();
    let label = match by_pattern.as_slice() {
        [one] => specs[*one].label.clone(),
        _ => {
            return Err(Error::Finding(format!(
                "satisfaction pattern {own:?} matches {} of the ten varieties for algebra\n{a}",
                by_pattern.len()
            )))
        }
    };
    let containing: Vec<usize> = (0..specs.len())
        .map(|i| member(a, &specs[i]).map(|r| (i, r.member)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .filter(|&(_, m)| m)
        .map(|(i, _)| i)
        .collect();
    let mut least = None;
    for &i in &containing {
        let mut below_all = true;
        for &j in &containing {
            if !includes(&specs[j], &specs[i])? {
                below_all = false;
                break;
            }
        }
        if below_all {
            least = Some(i);
            break;
        }
    }
    let by_membership = least
        .map(|i| specs[i].label.clone())
        .ok_or_else(|| Error::Finding(format!("no least listed variety contains algebra\n{a}")))?;
    if by_membership != label {
        return Err(Error::Finding(format!(
            "pattern says {label} but membership says {by_membership} for algebra\n{a}"
        )));
    }
    Ok(Classification {
        label,
        pattern: PATTERN_LABELS.iter().map(|l| l.to_string()).zip(own).collect(),
        by_membership,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn v(names: &[&str]) -> VarietySpec {
        VarietySpec::generated_by(names.iter().map(|n| catalog::get(n).unwrap()).collect()).unwrap()
    }

    #[test]
    fn membership_examples() {
        let r = v(&["S4_475"]);
        assert!(member(&catalog::l2(), &r).unwrap().member);
        let res = member(&catalog::r2(), &r).unwrap();
        assert!(!res.member);
        let id = res.separating_identity.unwrap();
        assert!(check(&catalog::s4_475(), &id).unwrap());
        assert!(!check(&catalog::r2(), &id).unwrap());
        for spec in standard_specs() {
            assert!(member(&FiniteAlgebra::trivial(), &spec).unwrap().member);
        }
    }

    #[test]
    fn separating_identities_are_confirmed() {
        let specs = standard_specs();
        for a in catalog::all() {
            for spec in &specs {
                let r = member(&a, spec).unwrap();
                if let Some(id) = r.separating_identity {
                    assert!(!r.member);
                    for g in &spec.generators {
                        assert!(check(g, &id).unwrap(), "{} should satisfy {id}", g.display_name());
                    }
                    assert!(!check(&a, &id).unwrap());
                } else {
                    assert!(r.member && r.certificate.is_some());
                }
            }
        }
    }

    #[test]
    fn membership_is_isomorphism_invariant() {
        let s = catalog::s58();
        let relabeled = s.relabel(&[2, 0, 1]).validate().unwrap();
        for spec in standard_specs() {
            assert_eq!(member(&s, &spec).unwrap().member, member(&relabeled, &spec).unwrap().member);
        }
    }

    #[test]
    fn free_algebra_examples() {
        let f = free_algebra(&v(&["L2"]), 1).unwrap();
        assert_eq!(f.algebra.order(), 1);

        let f = free_algebra(&v(&["S4_475"]), 1).unwrap();
        assert_eq!(f.algebra.order(), 3);
        let names: Vec<String> = f.witnesses.iter().map(|t| t.to_string()).collect();
        assert_eq!(names, ["x", "xx", "x + xx"]);
        let s = catalog::s4_475();
        let labels = |vec: &[u8]| vec.iter().map(|&e| s.label(e as usize)).collect::<Vec<_>>();
        assert_eq!(labels(&f.vectors[0]), ["1", "2", "3", "4"]);
        assert_eq!(labels(&f.vectors[1]), ["3", "2", "3", "3"]);
        assert_eq!(labels(&f.vectors[2]), ["1", "2", "3", "1"]);

        let f = free_algebra(&v(&["N2", "T2"]), 2).unwrap();
        let products: Vec<usize> =
            ["xy", "yx", "xx", "yy", "xyx"].iter().map(|t| f.element_of(&t.parse().unwrap()).unwrap()).collect();
        assert!(products.iter().all(|&p| p == products[0]));
        assert_ne!(f.element_of(&"x".parse().unwrap()).unwrap(), products[0]);
    }

    #[test]
    fn witnesses_reproduce_vectors() {
        let spec = v(&["S58", "N2"]);
        let f = free_algebra(&spec, 2).unwrap();
        for (i, w) in f.witnesses.iter().enumerate() {
            assert_eq!(f.element_of(w).unwrap(), i);
        }
        assert!(f.algebra.verify_axioms().is_ai_semiring());
        // Catalog identities in two variables hold in the free algebra iff
        // they hold in the generators.
        for (label, id) in IdentityCatalog::standard().entries() {
            if id.vars().len() <= 2 {
                let in_gens = spec.generators.iter().all(|g| check(g, id).unwrap());
                assert_eq!(check(&f.algebra, id).unwrap(), in_gens, "{label}");
            }
        }
    }

    #[test]
    fn compare_examples() {
        assert_eq!(compare(&v(&["S4_475"]), &v(&["S58", "N2"])).unwrap().relation, Relation::Equal);
        assert_eq!(compare(&v(&["L2"]), &v(&["L2", "N2"])).unwrap().relation, Relation::FirstInSecond);
        let c = compare(&v(&["L2"]), &v(&["N2"])).unwrap();
        assert_eq!(c.relation, Relation::Incomparable);
        assert_eq!(c.evidence.len(), 2);
    }

    #[test]
    fn budgets_are_enforced() {
        let tiny = Budget { closure_elements: 2, vector_length: 1_000 };
        assert!(matches!(member_with_budget(&catalog::s58(), &v(&["S4_475"]), &tiny), Err(Error::Resource(_))));
        let short = Budget { closure_elements: 1_000, vector_length: 10 };
        assert!(matches!(free_algebra_with_budget(&v(&["S4_475"]), 2, &short), Err(Error::Resource(_))));
    }

    #[test]
    fn small_lattices() {
        let specs = standard_specs();
        let two = build_lattice(&specs[..2]).unwrap();
        assert_eq!(two.hasse, [(0, 1)]);
        assert_eq!(two.distributive, Some(true));

        let lattice = build_lattice(&specs).unwrap();
        let lt = specs.iter().position(|s| s.label == "V(L2,T2)").unwrap();
        let n = specs.iter().position(|s| s.label == "V(N2)").unwrap();
        assert_eq!(lattice.labels[lattice.joins[lt][n].unwrap()], "V(L2,N2,T2)");
    }

    #[test]
    fn ten_patterns_are_distinct() {
        let mut patterns: Vec<Vec<bool>> = standard_specs().iter().map(|s| spec_pattern(s).unwrap()).collect();
        patterns.sort();
        patterns.dedup();
        assert_eq!(patterns.len(), 10);
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify_generated(&catalog::s58()).unwrap().label, "V(S58)");
        assert_eq!(classify_generated(&FiniteAlgebra::trivial()).unwrap().label, "T");
        assert_eq!(classify_generated(&catalog::s4_475()).unwrap().label, "R");
        assert!(matches!(classify_generated(&catalog::r2()), Err(Error::Shape(_))));
    }
}
