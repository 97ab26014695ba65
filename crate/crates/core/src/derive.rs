//! Bounded equational proof search with replayable Hilbert-style proofs.
//!
//! Terms are kept in normal form (sets of words), so the semilattice and
//! distributive laws never appear as explicit steps. A rewrite step picks a
//! basis identity `l = r` (either orientation), a substitution sending each
//! variable to a word, and optional left/right word contexts `a`, `c`; if
//! every word `a s(p) c` with `p` in `l` occurs in the current term `t`,
//! those words `M` may be
//!
//! * replaced: `t -> (t - M) + a s(r) c`, or
//! * kept: `t -> t + a s(r) c`.
//!
//! The search runs breadth-first from both sides of the target at once.
//! Each link is then expanded into axiom-instance, congruence, symmetry and
//! transitivity steps that [`replay_proof`] checks without the searcher.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::FiniteAlgebra;
use crate::error::{Error, Result};
use crate::satisfaction::check;
use crate::term::{Identity, Substitution, Term, Var, Word};

pub const DEFAULT_DEPTH: usize = 8;
pub const DEFAULT_SIZE_FACTOR: usize = 4;
pub const DEFAULT_NODE_LIMIT: usize = 200_000;

#[derive(Clone, Debug)]
pub struct DeriveConfig {
    /// Maximum number of rewrite links in one chain.
    pub depth: usize,
    /// Terms larger than this multiple of the larger target side are pruned.
    pub size_factor: usize,
    /// Cap on terms visited per search; reaching it ends the search.
    pub node_limit: usize,
    /// Prove the decomposed pieces when the direct search fails.
    pub decompose: bool,
}

impl Default for DeriveConfig {
    fn default() -> Self {
        DeriveConfig {
            depth: DEFAULT_DEPTH,
            size_factor: DEFAULT_SIZE_FACTOR,
            node_limit: DEFAULT_NODE_LIMIT,
            decompose: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StepKind {
    AxiomInstance,
    Reflexivity,
    Symmetry,
    Transitivity,
    AddCongruence,
    MulCongruence,
    SubstitutionInstance,
    Normalize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofStep {
    pub kind: StepKind,
    /// The identity this step establishes.
    pub identity: Identity,
    /// Indices of earlier steps used.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub premises: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub axiom: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub substitution: Option<Substitution>,
    /// Left and right word contexts of a multiplicative congruence.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub left: Option<Term>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub right: Option<Term>,
    /// Term added to both sides by a one-premise additive congruence.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub summand: Option<Term>,
}

impl ProofStep {
    fn new(kind: StepKind, identity: Identity, premises: Vec<usize>) -> Self {
        ProofStep { kind, identity, premises, axiom: None, substitution: None, left: None, right: None, summand: None }
    }
}

/// One rewrite of the chain `from = to`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Link {
    pub from: Term,
    pub to: Term,
    pub axiom: String,
    /// The axiom was used right to left.
    pub reversed: bool,
    pub substitution: Substitution,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub left: Option<Term>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub right: Option<Term>,
    /// The matched words stay in the term.
    pub keep: bool,
    /// Found while searching from the right-hand side.
    pub backward: bool,
}

impl Link {
    pub fn justification(&self) -> String {
        let mut s = self.axiom.clone();
        if self.reversed {
            s.push_str("^-1");
        }
        s.push(' ');
        s.push_str(&self.substitution.to_string());
        if self.left.is_some() || self.right.is_some() {
            let show = |t: &Option<Term>| t.as_ref().map_or("1".to_string(), |t| t.to_string());
            s.push_str(&format!(" in {}[ ]{}", show(&self.left), show(&self.right)));
        }
        if self.keep {
            s.push_str(" keep");
        }
        s
    }
}

/// A chain of links proving one identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    pub identity: Identity,
    pub links: Vec<Link>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    /// Total links over all segments.
    pub depth: usize,
    pub nodes: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Proof {
    pub basis: Vec<(String, Identity)>,
    pub target: Identity,
    pub steps: Vec<ProofStep>,
    /// Human-readable chains; one segment per piece when the target was
    /// decomposed.
    pub segments: Vec<Segment>,
    pub stats: SearchStats,
}

impl Proof {
    pub fn links(&self) -> usize {
        self.segments.iter().map(|s| s.links.len()).sum()
    }

    /// `t0 = t1 = ... = tn`, one numbered line per link.
    pub fn chain_text(&self) -> String {
        let mut out = String::new();
        for seg in &self.segments {
            if self.segments.len() > 1 {
                out.push_str(&format!("{}:\n", seg.identity));
            }
            let start = seg.links.first().map_or(&seg.identity.lhs, |l| &l.from);
            out.push_str(&format!("  {start}\n"));
            for (i, l) in seg.links.iter().enumerate() {
                out.push_str(&format!("  {}. = {}    [{}]\n", i + 1, l.to, l.justification()));
            }
        }
        out
    }
}

impl fmt::Display for Proof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.chain_text())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "kebab-case")]
pub enum DeriveOutcome {
    Found { proof: Box<Proof> },
    NotFound { nodes: usize },
}

#[derive(Clone, Debug)]
struct Rule {
    axiom: usize,
    reversed: bool,
    pattern: Vec<Word>,
    replacement: Term,
    /// Variables of the replacement missing from the pattern.
    extra: Vec<Var>,
}

fn rules(basis: &[(String, Identity)]) -> Vec<Rule> {
    let mut out = Vec::new();
    for (i, (_, id)) in basis.iter().enumerate() {
        if id.is_trivial() {
            continue;
        }
        for reversed in [false, true] {
            let (l, r) = if reversed { (&id.rhs, &id.lhs) } else { (&id.lhs, &id.rhs) };
            let lv = l.vars();
            out.push(Rule {
                axiom: i,
                reversed,
                pattern: l.words().to_vec(),
                replacement: r.clone(),
                extra: r.vars().into_iter().filter(|v| !lv.contains(v)).collect(),
            });
        }
    }
    out
}

type WordMap = std::collections::BTreeMap<Var, Vec<Var>>;

/// All extensions of `sigma` with `sigma(pattern) = text` (letters to
/// nonempty words).
fn match_word(pattern: &[Var], text: &[Var], sigma: &WordMap, out: &mut Vec<WordMap>) {
    let Some((&v, rest)) = pattern.split_first() else {
        if text.is_empty() {
            out.push(sigma.clone());
        }
        return;
    };
    if let Some(image) = sigma.get(&v) {
        if text.starts_with(image) {
            match_word(rest, &text[image.len()..], sigma, out);
        }
        return;
    }
    if text.len() < pattern.len() {
        return;
    }
    for len in 1..=text.len() - rest.len() {
        let mut next = sigma.clone();
        next.insert(v, text[..len].to_vec());
        match_word(rest, &text[len..], &next, out);
    }
}

struct Occurrence {
    left: Vec<Var>,
    right: Vec<Var>,
    sigma: WordMap,
}

fn occurrences(t: &Term, pattern: &[Word]) -> Vec<Occurrence> {
    let mut out = Vec::new();
    let Some((first, others)) = pattern.split_first() else { return out };
    for w in t.words() {
        let letters = w.vars();
        let n = letters.len();
        for a in 0..n {
            for c in 0..n - a {
                if n - a - c < first.len() {
                    continue;
                }
                let mut sigmas = Vec::new();
                match_word(first.vars(), &letters[a..n - c], &WordMap::new(), &mut sigmas);
                for sigma in sigmas {
                    extend_occurrence(t, others, &letters[..a], &letters[n - c..], sigma, &mut out);
                }
            }
        }
    }
    out
}

fn extend_occurrence(t: &Term, rest: &[Word], left: &[Var], right: &[Var], sigma: WordMap, out: &mut Vec<Occurrence>) {
    let Some((p, more)) = rest.split_first() else {
        out.push(Occurrence { left: left.to_vec(), right: right.to_vec(), sigma });
        return;
    };
    for w in t.words() {
        let letters = w.vars();
        if letters.len() <= left.len() + right.len() || !letters.starts_with(left) || !letters.ends_with(right) {
            continue;
        }
        let mut sigmas = Vec::new();
        match_word(p.vars(), &letters[left.len()..letters.len() - right.len()], &sigma, &mut sigmas);
        for s in sigmas {
            extend_occurrence(t, more, left, right, s, out);
        }
    }
}

fn context(letters: &[Var]) -> Option<Term> {
    (!letters.is_empty()).then(|| Term::word(Word::new(letters.to_vec())))
}

fn to_substitution(sigma: &WordMap) -> Substitution {
    let mut s = Substitution::new();
    for (v, w) in sigma {
        s.insert(*v, Term::word(Word::new(w.clone())));
    }
    s
}

struct Searcher<'a> {
    basis: &'a [(String, Identity)],
    rules: Vec<Rule>,
    /// Candidate images for variables that occur only in a replacement.
    extra_images: BTreeSet<Word>,
    cap: usize,
}

impl Searcher<'_> {
    fn successors(&self, t: &Term) -> Vec<(Term, Link)> {
        let mut out = Vec::new();
        let mut images = self.extra_images.clone();
        for w in t.words() {
            images.extend(w.factors());
        }
        let images: Vec<Word> = images.into_iter().collect();
        for rule in &self.rules {
            for occ in occurrences(t, &rule.pattern) {
                let mut assignments = vec![occ.sigma.clone()];
                for v in &rule.extra {
                    assignments = assignments
                        .into_iter()
                        .flat_map(|s| {
                            images.iter().map(move |img| {
                                let mut s = s.clone();
                                s.insert(*v, img.vars().to_vec());
                                s
                            })
                        })
                        .collect();
                }
                let left = context(&occ.left);
                let right = context(&occ.right);
                for sigma in assignments {
                    let subst = to_substitution(&sigma);
                    let matched = Term::from_words(rule.pattern.iter().cloned())
                        .expect("nonempty pattern")
                        .substitute(&subst)
                        .expect("substitution covers the pattern")
                        .in_context(left.as_ref().map(|t| &t.words()[0]), right.as_ref().map(|t| &t.words()[0]));
                    let replaced = rule
                        .replacement
                        .substitute(&subst)
                        .expect("substitution covers the replacement")
                        .in_context(left.as_ref().map(|t| &t.words()[0]), right.as_ref().map(|t| &t.words()[0]));
                    let variants = [
                        (
                            false,
                            match t.difference(&matched) {
                                Some(rest) => rest.union(&replaced),
                                None => replaced.clone(),
                            },
                        ),
                        (true, t.union(&replaced)),
                    ];
                    for (keep, next) in variants {
                        if next == *t || next.size() > self.cap {
                            continue;
                        }
                        out.push((
                            next.clone(),
                            Link {
                                from: t.clone(),
                                to: next,
                                axiom: self.basis[rule.axiom].0.clone(),
                                reversed: rule.reversed,
                                substitution: subst.clone(),
                                left: left.clone(),
                                right: right.clone(),
                                keep,
                                backward: false,
                            },
                        ));
                    }
                }
            }
        }
        out
    }

    /// Bidirectional breadth-first search for a chain `from = ... = to`.
    fn chain(&self, from: &Term, to: &Term, depth: usize, node_limit: usize, nodes: &mut usize) -> Option<Vec<Link>> {
        if from == to {
            return Some(Vec::new());
        }
        // term -> (distance, link that reached it)
        let mut seen: [HashMap<Term, (usize, Option<Link>)>; 2] = [HashMap::new(), HashMap::new()];
        seen[0].insert(from.clone(), (0, None));
        seen[1].insert(to.clone(), (0, None));
        let mut frontier = [vec![from.clone()], vec![to.clone()]];
        let mut reached = [0usize, 0usize];
        while reached[0] + reached[1] < depth {
            let side = if reached[0] <= reached[1] { 0 } else { 1 };
            if frontier[side].is_empty() {
                return None;
            }
            let mut next = Vec::new();
            let mut meets: Vec<(usize, Term)> = Vec::new();
            for t in &frontier[side] {
                for (succ, mut link) in self.successors(t) {
                    if seen[side].contains_key(&succ) {
                        continue;
                    }
                    *nodes += 1;
                    link.backward = side == 1;
                    if let Some((d, _)) = seen[1 - side].get(&succ) {
                        meets.push((*d, succ.clone()));
                    }
                    seen[side].insert(succ.clone(), (reached[side] + 1, Some(link)));
                    next.push(succ);
                    if *nodes >= node_limit {
                        break;
                    }
                }
            }
            reached[side] += 1;
            if let Some((_, meet)) = meets.into_iter().min() {
                return Some(self.path(&seen, &meet));
            }
            if *nodes >= node_limit {
                return None;
            }
            frontier[side] = next;
        }
        None
    }

    fn path(&self, seen: &[HashMap<Term, (usize, Option<Link>)>; 2], meet: &Term) -> Vec<Link> {
        let mut forward = Vec::new();
        let mut t = meet.clone();
        while let Some((_, Some(link))) = seen[0].get(&t) {
            t = link.from.clone();
            forward.push(link.clone());
        }
        forward.reverse();
        let mut t = meet.clone();
        while let Some((_, Some(link))) = seen[1].get(&t) {
            t = link.from.clone();
            forward.push(link.clone());
        }
        forward
    }
}

/// Appends the steps proving `from = to` for a forward link; returns the
/// index of the concluding step.
fn expand_rewrite(steps: &mut Vec<ProofStep>, basis: &[(String, Identity)], link: &Link) -> Result<usize> {
    let (label, axiom) =
        basis.iter().find(|(l, _)| *l == link.axiom).ok_or_else(|| Error::Unknown(link.axiom.clone()))?;
    let instance = axiom.substitute(&link.substitution)?;
    let mut step = ProofStep::new(StepKind::AxiomInstance, instance.clone(), vec![]);
    step.axiom = Some(label.clone());
    step.substitution = Some(link.substitution.clone());
    steps.push(step);
    let mut last = steps.len() - 1;
    let mut current = instance;
    if link.reversed {
        current = current.swapped();
        steps.push(ProofStep::new(StepKind::Symmetry, current.clone(), vec![last]));
        last = steps.len() - 1;
    }
    if link.left.is_some() || link.right.is_some() {
        let l = link.left.as_ref().map(|t| &t.words()[0]);
        let r = link.right.as_ref().map(|t| &t.words()[0]);
        current = Identity::new(current.lhs.in_context(l, r), current.rhs.in_context(l, r));
        let mut step = ProofStep::new(StepKind::MulCongruence, current.clone(), vec![last]);
        step.left = link.left.clone();
        step.right = link.right.clone();
        steps.push(step);
        last = steps.len() - 1;
    }
    let summand = if link.keep { Some(link.from.clone()) } else { link.from.difference(&current.lhs) };
    if let Some(c) = summand {
        current = Identity::new(current.lhs.union(&c), current.rhs.union(&c));
        let mut step = ProofStep::new(StepKind::AddCongruence, current.clone(), vec![last]);
        step.summand = Some(c);
        steps.push(step);
        last = steps.len() - 1;
    }
    Ok(last)
}

/// Steps proving `u = v` along a chain of links; returns the final index.
fn expand_chain(steps: &mut Vec<ProofStep>, basis: &[(String, Identity)], u: &Term, links: &[Link]) -> Result<usize> {
    if links.is_empty() {
        steps.push(ProofStep::new(StepKind::Reflexivity, Identity::new(u.clone(), u.clone()), vec![]));
        return Ok(steps.len() - 1);
    }
    let mut acc: Option<usize> = None;
    for link in links {
        let mut idx = expand_rewrite(steps, basis, link)?;
        if link.backward {
            let swapped = steps[idx].identity.swapped();
            steps.push(ProofStep::new(StepKind::Symmetry, swapped, vec![idx]));
            idx = steps.len() - 1;
        }
        acc = Some(match acc {
            None => idx,
            Some(prev) => {
                let id = Identity::new(steps[prev].identity.lhs.clone(), steps[idx].identity.rhs.clone());
                steps.push(ProofStep::new(StepKind::Transitivity, id, vec![prev, idx]));
                steps.len() - 1
            }
        });
    }
    Ok(acc.expect("nonempty chain"))
}

/// Orients backward links so every displayed link reads left to right.
fn display_links(links: Vec<Link>) -> Vec<Link> {
    links
        .into_iter()
        .map(|mut l| {
            if l.backward {
                std::mem::swap(&mut l.from, &mut l.to);
            }
            l
        })
        .collect()
}

pub fn derive_bounded(basis: &[(String, Identity)], target: &Identity, config: &DeriveConfig) -> Result<DeriveOutcome> {
    if config.depth == 0 {
        return Err(Error::Config("depth must be at least 1".into()));
    }
    if config.size_factor == 0 || config.node_limit == 0 {
        return Err(Error::Config("size factor and node limit must be positive".into()));
    }
    let mut labels = BTreeSet::new();
    for (l, _) in basis {
        if !labels.insert(l) {
            return Err(Error::Config(format!("basis label `{l}` repeated")));
        }
    }
    let mut extra_images = BTreeSet::new();
    for w in target.lhs.words().iter().chain(target.rhs.words()) {
        extra_images.extend(w.factors());
    }
    let cap = config.size_factor * target.lhs.size().max(target.rhs.size());
    let searcher = Searcher { basis, rules: rules(basis), extra_images, cap };
    let mut nodes = 0;

    let mut steps = Vec::new();
    if let Some(links) = searcher.chain(&target.lhs, &target.rhs, config.depth, config.node_limit, &mut nodes) {
        expand_chain(&mut steps, basis, &target.lhs, &links)?;
        let segments = vec![Segment { identity: target.clone(), links: display_links(links) }];
        return Ok(found(basis, target, steps, segments, nodes));
    }
    if !config.decompose {
        return Ok(DeriveOutcome::NotFound { nodes });
    }

    // Prove u = u + v_j and v = v + u_i piece by piece, then assemble.
    let mut segments = Vec::new();
    let mut side_proofs: [Option<usize>; 2] = [None, None];
    for piece in target.decompose() {
        let id = piece.identity;
        let side = if id.lhs == target.lhs { 0 } else { 1 };
        let idx = if piece.trivial {
            steps.push(ProofStep::new(StepKind::Reflexivity, id.clone(), vec![]));
            steps.len() - 1
        } else {
            let Some(links) = searcher.chain(&id.lhs, &id.rhs, config.depth, config.node_limit, &mut nodes) else {
                return Ok(DeriveOutcome::NotFound { nodes });
            };
            let idx = expand_chain(&mut steps, basis, &id.lhs, &links)?;
            segments.push(Segment { identity: id.clone(), links: display_links(links) });
            idx
        };
        side_proofs[side] = Some(match side_proofs[side] {
            None => idx,
            Some(prev) => {
                let (a, b) = (&steps[prev].identity, &steps[idx].identity);
                let joined = Identity::new(a.lhs.union(&b.lhs), a.rhs.union(&b.rhs));
                steps.push(ProofStep::new(StepKind::AddCongruence, joined, vec![prev, idx]));
                steps.len() - 1
            }
        });
    }
    // u = u + v and v = v + u, hence u = v.
    let (left, right) = (side_proofs[0].expect("nonempty rhs"), side_proofs[1].expect("nonempty lhs"));
    let back = steps[right].identity.swapped();
    steps.push(ProofStep::new(StepKind::Symmetry, back, vec![right]));
    let back = steps.len() - 1;
    steps.push(ProofStep::new(StepKind::Transitivity, target.clone(), vec![left, back]));
    Ok(found(basis, target, steps, segments, nodes))
}

fn found(
    basis: &[(String, Identity)],
    target: &Identity,
    steps: Vec<ProofStep>,
    segments: Vec<Segment>,
    nodes: usize,
) -> DeriveOutcome {
    let depth = segments.iter().map(|s| s.links.len()).sum();
    DeriveOutcome::Found {
        proof: Box::new(Proof {
            basis: basis.to_vec(),
            target: target.clone(),
            steps,
            segments,
            stats: SearchStats { depth, nodes },
        }),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", content = "step", rename_all = "kebab-case")]
pub enum ReplayOutcome {
    Valid,
    InvalidStep(usize),
    WrongConclusion,
}

impl ReplayOutcome {
    pub fn is_valid(self) -> bool {
        self == ReplayOutcome::Valid
    }
}

fn single_word(t: &Option<Term>) -> std::result::Result<Option<&Word>, ()> {
    match t {
        None => Ok(None),
        Some(t) if t.len() == 1 => Ok(Some(&t.words()[0])),
        Some(_) => Err(()),
    }
}

fn step_valid(p: &Proof, i: usize) -> bool {
    let s = &p.steps[i];
    if s.premises.iter().any(|&j| j >= i) {
        return false;
    }
    let prem = |k: usize| &p.steps[s.premises[k]].identity;
    let id = &s.identity;
    match (s.kind, s.premises.len()) {
        (StepKind::AxiomInstance, 0) => {
            let (Some(label), Some(sigma)) = (&s.axiom, &s.substitution) else { return false };
            let Some((_, axiom)) = p.basis.iter().find(|(l, _)| l == label) else { return false };
            sigma.covers(&axiom.vars()) && axiom.substitute(sigma).map(|inst| inst == *id).unwrap_or(false)
        }
        (StepKind::Reflexivity, 0) => id.is_trivial(),
        (StepKind::Symmetry, 1) => prem(0).swapped() == *id,
        (StepKind::Normalize, 1) => prem(0) == id,
        (StepKind::Transitivity, 2) => prem(0).rhs == prem(1).lhs && prem(0).lhs == id.lhs && prem(1).rhs == id.rhs,
        (StepKind::AddCongruence, 1) => {
            let Some(c) = &s.summand else { return false };
            id.lhs == prem(0).lhs.union(c) && id.rhs == prem(0).rhs.union(c)
        }
        (StepKind::AddCongruence, 2) => {
            id.lhs == prem(0).lhs.union(&prem(1).lhs) && id.rhs == prem(0).rhs.union(&prem(1).rhs)
        }
        (StepKind::MulCongruence, 1) => {
            let (Ok(l), Ok(r)) = (single_word(&s.left), single_word(&s.right)) else { return false };
            id.lhs == prem(0).lhs.in_context(l, r) && id.rhs == prem(0).rhs.in_context(l, r)
        }
        (StepKind::SubstitutionInstance, 1) => {
            let Some(sigma) = &s.substitution else { return false };
            sigma.covers(&prem(0).vars()) && prem(0).substitute(sigma).map(|inst| inst == *id).unwrap_or(false)
        }
        _ => false,
    }
}

/// Re-checks every step independently of the search.
pub fn replay_proof(p: &Proof) -> ReplayOutcome {
    for i in 0..p.steps.len() {
        if !step_valid(p, i) {
            return ReplayOutcome::InvalidStep(i);
        }
    }
    match p.steps.last() {
        Some(last) if last.identity == p.target => ReplayOutcome::Valid,
        _ => ReplayOutcome::WrongConclusion,
    }
}

/// Algebras that satisfy the whole basis but not the conclusion; empty for
/// a sound proof.
pub fn soundness_violations(p: &Proof, algebras: &[FiniteAlgebra]) -> Result<Vec<String>> {
    let mut out = Vec::new();
    for a in algebras {
        let mut models = true;
        for (_, id) in &p.basis {
            if !check(a, id)? {
                models = false;
                break;
            }
        }
        if models && !check(a, &p.target)? {
            out.push(a.display_name());
        }
    }
    Ok(out)
}

/// Labels a basis as `b1, b2, ...` unless a label is supplied.
pub fn label_basis(ids: &[Identity]) -> Vec<(String, Identity)> {
    ids.iter().enumerate().map(|(i, id)| (format!("b{}", i + 1), id.clone())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn id(s: &str) -> Identity {
        s.parse().unwrap()
    }

    fn basis(pairs: &[(&str, &str)]) -> Vec<(String, Identity)> {
        pairs.iter().map(|(l, s)| (l.to_string(), id(s))).collect()
    }

    fn prove(b: &[(String, Identity)], target: &str) -> Proof {
        match derive_bounded(b, &id(target), &DeriveConfig::default()).unwrap() {
            DeriveOutcome::Found { proof } => *proof,
            DeriveOutcome::NotFound { nodes } => panic!("no proof of {target} after {nodes} nodes"),
        }
    }

    #[test]
    fn one_step_collapse() {
        let p = prove(&basis(&[("id0703", "xy = xz")]), "xy = xx");
        assert_eq!(p.links(), 1);
        assert_eq!(replay_proof(&p), ReplayOutcome::Valid);
        let link = &p.segments[0].links[0];
        assert_eq!(link.substitution.get(Var::letter('z')).unwrap().to_string(), "x");
    }

    #[test]
    fn square_absorbs_letter() {
        let p = prove(&basis(&[("L2", "xy = x")]), "xx = xx + x");
        assert!(p.links() <= 4);
        assert_eq!(replay_proof(&p), ReplayOutcome::Valid);
    }

    #[test]
    fn displayed_chain_to_constant_products() {
        let b = basis(&[("L", "xx = xx + yy"), ("id0703", "xy = xz")]);
        let p = prove(&b, "x1x2 = y1y2");
        assert_eq!(p.links(), 4);
        assert_eq!(replay_proof(&p), ReplayOutcome::Valid);
        let terms: Vec<String> = std::iter::once(p.segments[0].links[0].from.to_string())
            .chain(p.segments[0].links.iter().map(|l| l.to.to_string()))
            .collect();
        assert_eq!(terms, ["x1x2", "x1x1", "x1x1 + y1y1", "y1y1", "y1y2"]);
        assert!(soundness_violations(&p, &catalog::all()).unwrap().is_empty());
    }

    #[test]
    fn manual_transcription_replays() {
        // x = x + x (u + h(q) with h(q) in u), then ln02 at x -> x, y -> y.
        let sigma = Substitution::new()
            .with(Var::letter('x'), "x".parse().unwrap())
            .with(Var::letter('y'), "y".parse().unwrap());
        let mut axiom = ProofStep::new(StepKind::AxiomInstance, id("x = x + xy"), vec![]);
        axiom.axiom = Some("ln02".into());
        axiom.substitution = Some(sigma);
        let p = Proof {
            basis: basis(&[("ln02", "x = x + xy"), ("id0703", "xy = xz")]),
            target: id("x = x + xy"),
            steps: vec![
                ProofStep::new(StepKind::Reflexivity, id("x = x + x"), vec![]),
                axiom,
                ProofStep::new(StepKind::Transitivity, id("x = x + xy"), vec![0, 1]),
            ],
            segments: vec![],
            stats: SearchStats::default(),
        };
        assert_eq!(replay_proof(&p), ReplayOutcome::Valid);

        let mut bad = p.clone();
        bad.steps[1].substitution = Some(
            Substitution::new()
                .with(Var::letter('x'), "x".parse().unwrap())
                .with(Var::letter('y'), "z".parse().unwrap()),
        );
        assert_eq!(replay_proof(&bad), ReplayOutcome::InvalidStep(1));

        let mut wrong = p.clone();
        wrong.target = id("x = x + yx");
        assert_eq!(replay_proof(&wrong), ReplayOutcome::WrongConclusion);
    }

    #[test]
    fn corrupted_search_proof_is_rejected() {
        let b = basis(&[("L", "xx = xx + yy"), ("id0703", "xy = xz")]);
        let p = prove(&b, "x1x2 = y1y2");
        let i = p.steps.iter().position(|s| s.kind == StepKind::AxiomInstance).unwrap();
        let mut bad = p.clone();
        let sigma = bad.steps[i].substitution.clone().unwrap();
        let mut corrupted = Substitution::new();
        for (v, t) in sigma.iter() {
            corrupted.insert(*v, t.product(t));
        }
        bad.steps[i].substitution = Some(corrupted);
        assert_eq!(replay_proof(&bad), ReplayOutcome::InvalidStep(i));
    }

    #[test]
    fn decomposition_fallback_assembles() {
        // Proved one added word at a time.
        let b = basis(&[("L", "xx = xx + yy"), ("id0703", "xy = xz"), ("T", "x = x + xx")]);
        let config = DeriveConfig { depth: 1, ..DeriveConfig::default() };
        let target = id("x + y = x + y + xx + yy");
        let DeriveOutcome::Found { proof } = derive_bounded(&b, &target, &config).unwrap() else {
            panic!("expected a proof")
        };
        assert_eq!(replay_proof(&proof), ReplayOutcome::Valid);
        assert!(soundness_violations(&proof, &catalog::all()).unwrap().is_empty());
    }

    #[test]
    fn not_found_is_bounded() {
        let b = basis(&[("id0703", "xy = xz")]);
        let out = derive_bounded(&b, &id("x = xx"), &DeriveConfig { depth: 2, ..DeriveConfig::default() }).unwrap();
        assert!(matches!(out, DeriveOutcome::NotFound { .. }));
        assert!(matches!(
            derive_bounded(&b, &id("x = xx"), &DeriveConfig { depth: 0, ..DeriveConfig::default() }),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn proofs_round_trip_through_json() {
        let p = prove(&basis(&[("id0703", "xy = xz")]), "xy = xx");
        let text = serde_json::to_string(&p).unwrap();
        let back: Proof = serde_json::from_str(&text).unwrap();
        assert_eq!(back, p);
        assert_eq!(replay_proof(&back), ReplayOutcome::Valid);
    }

    #[test]
    fn soundness_flags_a_bogus_conclusion() {
        let mut p = prove(&basis(&[("id0703", "xy = xz")]), "xy = xx");
        p.target = id("x = xx");
        assert!(!soundness_violations(&p, &catalog::all()).unwrap().is_empty());
    }
}
