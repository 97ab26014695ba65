//! Canonical labeling, automorphisms and isomorphism search.
//!
//! The canonical form of an algebra is the lexicographically least
//! concatenation `add ++ mul` (both row-major) over all relabelings of the
//! carrier. The search assigns new labels `0, 1, ...` one at a time and
//! prunes a branch as soon as the already determined prefix of the table
//! sequence exceeds the best complete candidate.

use super::FiniteAlgebra;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm {
    pub order: usize,
    /// `add ++ mul`, row-major, in canonical labels.
    pub tables: Vec<u8>,
    /// `perm[a]` is the canonical label of original element `a`.
    pub perm: Vec<usize>,
}

impl CanonicalForm {
    /// The canonical tables without the witnessing permutation.
    pub fn key(&self) -> (usize, &[u8]) {
        (self.order, &self.tables)
    }

    pub fn to_algebra(&self) -> FiniteAlgebra {
        let nn = self.order * self.order;
        FiniteAlgebra::from_flat(self.order, self.tables[..nn].to_vec(), self.tables[nn..].to_vec())
            .expect("canonical tables are well formed")
    }
}

const UNSET: usize = usize::MAX;

struct Search<'a> {
    n: usize,
    tables: &'a [&'a [u8]],
    /// `order_of[i]` = original element given new label `i`.
    order_of: Vec<usize>,
    /// `label_of[a]` = new label of original element `a`.
    label_of: Vec<usize>,
    best: Option<Vec<u8>>,
    best_perm: Vec<usize>,
}

enum Cmp {
    Worse,
    Undecided,
}

impl Search<'_> {
    fn entry(&self, t: usize, i: usize, j: usize) -> usize {
        self.tables[t][self.order_of[i] * self.n + self.order_of[j]] as usize
    }

    /// Compares the determined prefix against the best complete sequence.
    fn compare_prefix(&self, assigned: usize) -> Cmp {
        let best = match &self.best {
            Some(b) => b,
            None => return Cmp::Undecided,
        };
        let n = self.n;
        let mut pos = 0;
        for t in 0..self.tables.len() {
            for i in 0..n {
                for j in 0..n {
                    if i >= assigned || j >= assigned {
                        return Cmp::Undecided;
                    }
                    let v = self.entry(t, i, j);
                    let known = self.label_of[v];
                    let target = best[pos] as usize;
                    if known != UNSET {
                        if known < target {
                            return Cmp::Undecided;
                        }
                        if known > target {
                            return Cmp::Worse;
                        }
                    } else {
                        // An unassigned element receives a label >= assigned.
                        return if assigned > target { Cmp::Worse } else { Cmp::Undecided };
                    }
                    pos += 1;
                }
            }
        }
        Cmp::Undecided
    }

    fn full_sequence(&self) -> Vec<u8> {
        let n = self.n;
        let mut out = Vec::with_capacity(self.tables.len() * n * n);
        for t in 0..self.tables.len() {
            for i in 0..n {
                for j in 0..n {
                    out.push(self.label_of[self.entry(t, i, j)] as u8);
                }
            }
        }
        out
    }

    fn run(&mut self, assigned: usize) {
        if assigned == self.n {
            let seq = self.full_sequence();
            if self.best.as_ref().is_none_or(|b| seq < *b) {
                self.best = Some(seq);
                self.best_perm = self.label_of.clone();
            }
            return;
        }
        if let Cmp::Worse = self.compare_prefix(assigned) {
            return;
        }
        for a in 0..self.n {
            if self.label_of[a] != UNSET {
                continue;
            }
            self.label_of[a] = assigned;
            self.order_of[assigned] = a;
            if !matches!(self.compare_prefix(assigned + 1), Cmp::Worse) {
                self.run(assigned + 1);
            }
            self.label_of[a] = UNSET;
        }
    }
}

/// Canonical form of an arbitrary list of `n x n` tables over `0..n`.
pub fn canonical_form_of_tables(n: usize, tables: &[&[u8]]) -> CanonicalForm {
    let mut s =
        Search { n, tables, order_of: vec![UNSET; n], label_of: vec![UNSET; n], best: None, best_perm: Vec::new() };
    s.run(0);
    CanonicalForm { order: n, tables: s.best.expect("at least one permutation"), perm: s.best_perm }
}

pub fn canonical_form(a: &FiniteAlgebra) -> CanonicalForm {
    canonical_form_of_tables(a.order(), &[a.add_table(), a.mul_table()])
}

/// All permutations `p` with `p(T[a][b]) = T[p(a)][p(b)]` for every table,
/// in lexicographic order.
pub fn automorphisms(n: usize, tables: &[&[u8]]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut map = vec![UNSET; n];
    let mut used = vec![false; n];
    isomorphisms_rec(n, tables, tables, &mut map, &mut used, 0, &mut out, usize::MAX);
    out
}

/// Extends a partial map `a -> map[a]` from tables `src` to tables `dst`,
/// collecting complete isomorphisms until `limit` are found.
#[allow(clippy::too_many_arguments)]
fn isomorphisms_rec(
    n: usize,
    src: &[&[u8]],
    dst: &[&[u8]],
    map: &mut [usize],
    used: &mut [bool],
    next: usize,
    out: &mut Vec<Vec<usize>>,
    limit: usize,
) {
    if out.len() >= limit {
        return;
    }
    if next == n {
        out.push(map.to_vec());
        return;
    }
    for image in 0..n {
        if used[image] {
            continue;
        }
        map[next] = image;
        used[image] = true;
        if consistent(n, src, dst, map, next) {
            isomorphisms_rec(n, src, dst, map, used, next + 1, out, limit);
        }
        used[image] = false;
        map[next] = UNSET;
        if out.len() >= limit {
            return;
        }
    }
}

/// Checks every pair among the mapped elements `0..=k`.
fn consistent(n: usize, src: &[&[u8]], dst: &[&[u8]], map: &[usize], k: usize) -> bool {
    for (s, d) in src.iter().zip(dst) {
        for a in 0..=k {
            for b in 0..=k {
                let v = s[a * n + b] as usize;
                let image = d[map[a] * n + map[b]] as usize;
                if map[v] != UNSET {
                    if map[v] != image {
                        return false;
                    }
                } else if map[..=k].contains(&image) {
                    // `image` is taken by an assigned element other than `v`.
                    return false;
                }
            }
        }
    }
    true
}

/// A witnessing isomorphism: `map[a]` is the image in the second algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Isomorphism {
    pub map: Vec<usize>,
}

/// Decides isomorphism by canonical forms; on success returns the
/// lexicographically least isomorphism from `a` onto `b`.
pub fn are_isomorphic(a: &FiniteAlgebra, b: &FiniteAlgebra) -> Option<Isomorphism> {
    if a.order() != b.order() {
        return None;
    }
    if canonical_form(a).tables != canonical_form(b).tables {
        return None;
    }
    let n = a.order();
    let mut out = Vec::new();
    let mut map = vec![UNSET; n];
    let mut used = vec![false; n];
    isomorphisms_rec(
        n,
        &[a.add_table(), a.mul_table()],
        &[b.add_table(), b.mul_table()],
        &mut map,
        &mut used,
        0,
        &mut out,
        1,
    );
    let map = out.pop().expect("equal canonical forms imply an isomorphism");
    Some(Isomorphism { map })
}

/// Lexicographically least closed subset of `a` whose induced algebra is
/// isomorphic to `target`.
pub fn find_subalgebra_isomorphic(a: &FiniteAlgebra, target: &FiniteAlgebra) -> Option<Vec<usize>> {
    let (n, k) = (a.order(), target.order());
    if k > n {
        return None;
    }
    let want = canonical_form(target).tables;
    let mut subset: Vec<usize> = (0..k).collect();
    loop {
        if a.is_closed(&subset) {
            let induced = a.induced(&subset).expect("closed subset");
            if canonical_form(&induced).tables == want {
                return Some(subset);
            }
        }
        // Next k-combination in lexicographic order.
        let mut i = k;
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            if subset[i] < n - k + i {
                break;
            }
        }
        subset[i] += 1;
        for j in (i + 1)..k {
            subset[j] = subset[j - 1] + 1;
        }
    }
}
