//! ai-semiring terms in normal form.
//!
//! By distributivity every term equals a finite sum of words, and by the
//! additive laws the sum is a set. A [`Term`] is therefore a nonempty set of
//! nonempty [`Word`]s, kept sorted by (length, lexicographic) so that
//! structural equality is equality in the free ai-semiring.

mod parse;

pub use parse::{parse_identities, parse_identity, parse_term};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A variable: a lowercase ASCII letter with an optional positive index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var {
    letter: u8,
    index: u32,
}

impl Var {
    pub fn new(letter: char, index: u32) -> Self {
        assert!(letter.is_ascii_lowercase(), "variables are lowercase ASCII letters");
        Var { letter: letter as u8, index }
    }

    pub fn letter(letter: char) -> Self {
        Var::new(letter, 0)
    }

    /// `x1, x2, ...`
    pub fn indexed(letter: char, index: u32) -> Self {
        assert!(index > 0, "variable indices are positive");
        Var::new(letter, index)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.index == 0 {
            write!(f, "{}", self.letter as char)
        } else {
            write!(f, "{}{}", self.letter as char, self.index)
        }
    }
}

/// A nonempty product of variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word(Vec<Var>);

impl Word {
    pub fn new(vars: Vec<Var>) -> Self {
        assert!(!vars.is_empty(), "words are nonempty");
        Word(vars)
    }

    pub fn var(v: Var) -> Self {
        Word(vec![v])
    }

    pub fn vars(&self) -> &[Var] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn head(&self) -> Var {
        self.0[0]
    }

    pub fn tail(&self) -> Var {
        self.0[self.0.len() - 1]
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    pub fn stats(&self) -> WordStats {
        WordStats {
            head: self.head(),
            tail: self.tail(),
            len: self.len(),
            rest: (self.len() > 1).then(|| Word(self.0[1..].to_vec())),
        }
    }

    /// Every contiguous factor, without duplicates, in (length, lex) order.
    pub fn factors(&self) -> BTreeSet<Word> {
        let n = self.len();
        (0..n).flat_map(|i| ((i + 1)..=n).map(move |j| (i, j))).map(|(i, j)| Word(self.0[i..j].to_vec())).collect()
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.0 {
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Head, tail, length and the word with its first letter removed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordStats {
    pub head: Var,
    pub tail: Var,
    pub len: usize,
    /// `None` marks the empty remainder of a one-letter word.
    pub rest: Option<Word>,
}

/// A term in normal form: a nonempty sorted set of words.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Term(Vec<Word>);

impl Term {
    pub fn from_words(words: impl IntoIterator<Item = Word>) -> Result<Self> {
        let mut v: Vec<Word> = words.into_iter().collect();
        if v.is_empty() {
            return Err(Error::Parse { pos: 0, msg: "empty term".into() });
        }
        v.sort();
        v.dedup();
        Ok(Term(v))
    }

    pub fn word(w: Word) -> Self {
        Term(vec![w])
    }

    pub fn var(v: Var) -> Self {
        Term(vec![Word::var(v)])
    }

    pub fn words(&self) -> &[Word] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.0.binary_search(w).is_ok()
    }

    pub fn is_subset(&self, other: &Term) -> bool {
        self.0.iter().all(|w| other.contains(w))
    }

    /// Total number of letter occurrences.
    pub fn size(&self) -> usize {
        self.0.iter().map(Word::len).sum()
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.0.iter().flat_map(|w| w.0.iter().copied()).collect()
    }

    pub fn union(&self, other: &Term) -> Term {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        v.sort();
        v.dedup();
        Term(v)
    }

    /// Words of `self` not in `other`; `None` when nothing remains.
    pub fn difference(&self, other: &Term) -> Option<Term> {
        let v: Vec<Word> = self.0.iter().filter(|w| !other.contains(w)).cloned().collect();
        (!v.is_empty()).then_some(Term(v))
    }

    /// Product by distributivity: all concatenations.
    pub fn product(&self, other: &Term) -> Term {
        let mut v: Vec<Word> = self.0.iter().flat_map(|a| other.0.iter().map(move |b| a.concat(b))).collect();
        v.sort();
        v.dedup();
        Term(v)
    }

    /// `left * self * right` for optional word contexts.
    pub fn in_context(&self, left: Option<&Word>, right: Option<&Word>) -> Term {
        let mut v: Vec<Word> = self
            .0
            .iter()
            .map(|w| {
                let mut out = Vec::new();
                if let Some(l) = left {
                    out.extend_from_slice(&l.0);
                }
                out.extend_from_slice(&w.0);
                if let Some(r) = right {
                    out.extend_from_slice(&r.0);
                }
                Word(out)
            })
            .collect();
        v.sort();
        v.dedup();
        Term(v)
    }

    pub fn mirror(&self) -> Term {
        let mut v: Vec<Word> = self.0.iter().map(Word::reversed).collect();
        v.sort();
        v.dedup();
        Term(v)
    }

    pub fn substitute(&self, sigma: &Substitution) -> Result<Term> {
        let mut out: Vec<Word> = Vec::new();
        for w in &self.0 {
            let mut acc: Option<Term> = None;
            for v in &w.0 {
                let image = sigma.get(*v).ok_or_else(|| Error::UnboundVariable(v.to_string()))?;
                acc = Some(match acc {
                    None => image.clone(),
                    Some(t) => t.product(image),
                });
            }
            out.extend(acc.expect("words are nonempty").0);
        }
        Term::from_words(out)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, w) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{w}")?;
        }
        Ok(())
    }
}

impl FromStr for Term {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_term(s)
    }
}

impl Serialize for Term {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Term {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// An identity `lhs = rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Identity {
    pub lhs: Term,
    pub rhs: Term,
}

impl Identity {
    pub fn new(lhs: Term, rhs: Term) -> Self {
        Identity { lhs, rhs }
    }

    pub fn is_trivial(&self) -> bool {
        self.lhs == self.rhs
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut v = self.lhs.vars();
        v.extend(self.rhs.vars());
        v
    }

    pub fn swapped(&self) -> Identity {
        Identity::new(self.rhs.clone(), self.lhs.clone())
    }

    /// Reverses every word on both sides.
    pub fn mirror(&self) -> Identity {
        Identity::new(self.lhs.mirror(), self.rhs.mirror())
    }

    pub fn substitute(&self, sigma: &Substitution) -> Result<Identity> {
        Ok(Identity::new(self.lhs.substitute(sigma)?, self.rhs.substitute(sigma)?))
    }

    pub fn size(&self) -> usize {
        self.lhs.size() + self.rhs.size()
    }

    /// Splits `u = v` into `u = u + v_j` for each summand `v_j` of `v`, then
    /// `v = v + u_i` for each summand `u_i` of `u`. The two identities
    /// together define the same variety as `u = v`.
    pub fn decompose(&self) -> Vec<Decomposed> {
        let piece = |side: &Term, w: &Word| {
            let identity = Identity::new(side.clone(), side.union(&Term::word(w.clone())));
            let trivial = identity.is_trivial();
            Decomposed { identity, trivial }
        };
        let mut out: Vec<Decomposed> = self.rhs.words().iter().map(|w| piece(&self.lhs, w)).collect();
        out.extend(self.lhs.words().iter().map(|w| piece(&self.rhs, w)));
        out
    }

    /// `Some(q)` when the identity reads `u = u + q` with `q` not in `u`.
    pub fn added_word(&self) -> Option<&Word> {
        if self.rhs.len() != self.lhs.len() + 1 || !self.lhs.is_subset(&self.rhs) {
            return None;
        }
        self.rhs.words().iter().find(|w| !self.lhs.contains(w))
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

impl FromStr for Identity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_identity(s)
    }
}

impl Serialize for Identity {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Identity {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// One piece of [`Identity::decompose`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposed {
    pub identity: Identity,
    pub trivial: bool,
}

/// A map from variables to terms, extended homomorphically.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Substitution(BTreeMap<Var, Term>);

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, v: Var, t: Term) -> Option<Term> {
        self.0.insert(v, t)
    }

    pub fn with(mut self, v: Var, t: Term) -> Self {
        self.0.insert(v, t);
        self
    }

    pub fn get(&self, v: Var) -> Option<&Term> {
        self.0.get(&v)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, &Term)> {
        self.0.iter()
    }

    pub fn covers(&self, vars: &BTreeSet<Var>) -> bool {
        vars.iter().all(|v| self.0.contains_key(v))
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(v, t)| format!("{v}->{t}")).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

impl Serialize for Substitution {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let m: BTreeMap<String, String> = self.0.iter().map(|(v, t)| (v.to_string(), t.to_string())).collect();
        m.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Substitution {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let m = BTreeMap::<String, String>::deserialize(d)?;
        let mut out = Substitution::new();
        for (k, v) in m {
            let var = parse::parse_var(&k).map_err(serde::de::Error::custom)?;
            let term: Term = v.parse().map_err(serde::de::Error::custom)?;
            out.insert(var, term);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn t(s: &str) -> Term {
        s.parse().unwrap()
    }

    fn w(s: &str) -> Word {
        t(s).words()[0].clone()
    }

    #[test]
    fn word_stats_examples() {
        let s = w("xyx").stats();
        assert_eq!((s.head, s.tail, s.len), (Var::letter('x'), Var::letter('x'), 3));
        assert_eq!(s.rest, Some(w("yx")));

        let s = w("x").stats();
        assert_eq!((s.head, s.tail, s.len, s.rest), (Var::letter('x'), Var::letter('x'), 1, None));

        let s = w("x1x2").stats();
        assert_eq!(s.head, Var::indexed('x', 1));
        assert_eq!(s.tail, Var::indexed('x', 2));
        assert_eq!(s.len, 2);
        assert_eq!(s.rest, Some(w("x2")));
    }

    #[test]
    fn substitution_examples() {
        let (x, y, z) = (Var::letter('x'), Var::letter('y'), Var::letter('z'));
        let rename = Substitution::new().with(x, Term::var(x)).with(y, Term::var(z));
        assert_eq!(t("xy").substitute(&rename).unwrap(), t("xz"));

        let split = Substitution::new().with(x, Term::var(x)).with(y, t("y+z"));
        assert_eq!(t("xy").substitute(&split).unwrap(), t("xy+xz"));

        let collapse = Substitution::new().with(x, t("yy")).with(y, Term::var(y));
        assert_eq!(t("x+yy").substitute(&collapse).unwrap(), t("yy"));

        let partial = Substitution::new().with(x, Term::var(x));
        assert!(matches!(t("xy").substitute(&partial), Err(Error::UnboundVariable(_))));
    }

    #[test]
    fn decomposition_examples() {
        let id: Identity = "xy = xz".parse().unwrap();
        let d: Vec<Identity> = id.decompose().into_iter().map(|p| p.identity).collect();
        assert_eq!(d, vec!["xy = xy+xz".parse().unwrap(), "xz = xz+xy".parse().unwrap()]);

        let id: Identity = "x = x".parse().unwrap();
        assert!(id.decompose().iter().all(|p| p.trivial));

        let id: Identity = "x+yy = xx+yy".parse().unwrap();
        let d = id.decompose();
        assert_eq!(d.len(), 4);
        assert_eq!(d.iter().filter(|p| p.trivial).count(), 2);
    }

    #[test]
    fn added_word_shape() {
        let id: Identity = "x+yz = x+yz+yx".parse().unwrap();
        assert_eq!(id.added_word(), Some(&w("yx")));
        let id: Identity = "xy = xz".parse().unwrap();
        assert_eq!(id.added_word(), None);
    }

    #[test]
    fn serde_uses_text() {
        let id: Identity = "x1x2 ≈ y1y2".parse().unwrap();
        let json = serde_json::to_string(&id).unwrap();
        assert_eq!(json, "\"x1x2 = y1y2\"");
        let back: Identity = serde_json::from_str(&json).unwrap();
        assert_eq!(back, id);
    }

    fn arb_word() -> impl Strategy<Value = Word> {
        prop::collection::vec((0u8..3, 0u32..3), 1..5)
            .prop_map(|v| Word::new(v.into_iter().map(|(l, i)| Var::new((b'x' + l) as char, i)).collect()))
    }

    fn arb_term() -> impl Strategy<Value = Term> {
        prop::collection::vec(arb_word(), 1..5).prop_map(|ws| Term::from_words(ws).unwrap())
    }

    fn arb_subst() -> impl Strategy<Value = Substitution> {
        prop::collection::vec(arb_term(), 9).prop_map(|terms| {
            let mut s = Substitution::new();
            let mut it = terms.into_iter();
            for l in 0..3u8 {
                for i in 0..3 {
                    s.insert(Var::new((b'x' + l) as char, i), it.next().unwrap());
                }
            }
            s
        })
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(term in arb_term()) {
            let back: Term = term.to_string().parse().unwrap();
            prop_assert_eq!(back, term);
        }

        #[test]
        fn normalization_is_idempotent(term in arb_term()) {
            let again = Term::from_words(term.words().to_vec()).unwrap();
            prop_assert_eq!(again, term);
        }

        #[test]
        fn substitution_distributes_over_union(u in arb_term(), v in arb_term(), s in arb_subst()) {
            let whole = u.union(&v).substitute(&s).unwrap();
            let parts = u.substitute(&s).unwrap().union(&v.substitute(&s).unwrap());
            prop_assert_eq!(whole, parts);
        }
    }
}
