//! Pairings and their client graphs: feasibility tests, Prüfer codes,
//! exhaustive tree enumeration, uniform random trees, and a local rewiring
//! transform.
//!
//! A pairing (the uplink schedule) is a multiset of user pairs. Its client
//! graph has an edge for every distinct pair; the exchange is decodable
//! exactly when that graph is a spanning tree, which [`is_feasible`] tests
//! directly and [`feasible_by_rank`] re-derives from the GF(2) linear system
//! the relay's broadcasts induce.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt;

use rand::Rng;

use crate::{Error, Result};

/// Largest user count accepted for exhaustive tree enumeration
/// (9^7 = 4_782_969 trees).
pub const ENUMERATION_CAP: usize = 9;

/// A multiset of user pairs over users `1..=n`.
///
/// Most schedules carry exactly `n - 1` pairs, but arbitrary sizes are
/// accepted so that infeasible schedules can be represented and rejected by
/// the feasibility tests.
///
/// Pairs are unordered: equality and hashing-insensitive comparisons go
/// through [`Pairing::normalized`], so `{{2,1}}` equals `{{1,2}}`. Display
/// keeps the stored element order (`"2-1,3-1"`).
#[derive(Debug, Clone)]
pub struct Pairing {
    n: usize,
    pairs: Vec<(usize, usize)>,
}

impl Pairing {
    /// Validates labels and builds a pairing.
    pub fn new(n: usize, pairs: Vec<(usize, usize)>) -> Result<Self> {
        if n < 2 {
            return Err(Error::TooFewUsers(n));
        }
        for &(a, b) in &pairs {
            for label in [a, b] {
                if label < 1 || label > n {
                    return Err(Error::LabelOutOfRange { label, n });
                }
            }
            if a == b {
                return Err(Error::SelfPair(a));
            }
        }
        Ok(Pairing { n, pairs })
    }

    /// Parses `"1-2, 2-3,3-4"` (whitespace-tolerant) over users `1..=n`.
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        let syntax = |reason: &str| Error::PairingSyntax {
            text: text.to_string(),
            reason: reason.to_string(),
        };
        let mut pairs = Vec::new();
        for part in text.split(',') {
            let part = part.trim();
            if part.is_empty() {
                return Err(syntax("empty pair"));
            }
            let (a, b) = part
                .split_once('-')
                .ok_or_else(|| syntax(&format!("expected \"a-b\", got {part:?}")))?;
            let parse_label = |s: &str| {
                s.trim()
                    .parse::<usize>()
                    .map_err(|_| syntax(&format!("expected a user number, got {s:?}")))
            };
            pairs.push((parse_label(a)?, parse_label(b)?));
        }
        Pairing::new(n, pairs)
    }

    /// Number of users.
    pub fn n(&self) -> usize {
        self.n
    }

    /// The pairs as stored (element order preserved).
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// Canonical form: each pair as `(min, max)`, pairs sorted.
    pub fn normalized(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = self
            .pairs
            .iter()
            .map(|&(a, b)| (a.min(b), a.max(b)))
            .collect();
        out.sort_unstable();
        out
    }
}

impl PartialEq for Pairing {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.normalized() == other.normalized()
    }
}

impl Eq for Pairing {}

impl fmt::Display for Pairing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (idx, (a, b)) in self.pairs.iter().enumerate() {
            if idx > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}-{b}")?;
        }
        Ok(())
    }
}

/// Simple graph view of a pairing: duplicate pairs collapse to one edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClientGraph {
    n: usize,
    adj: Vec<bool>,
    degrees: Vec<usize>,
}

impl ClientGraph {
    fn empty(n: usize) -> Self {
        ClientGraph {
            n,
            adj: vec![false; n * n],
            degrees: vec![0; n],
        }
    }

    fn insert_edge(&mut self, a: usize, b: usize) {
        if !self.adj[(a - 1) * self.n + (b - 1)] {
            self.adj[(a - 1) * self.n + (b - 1)] = true;
            self.adj[(b - 1) * self.n + (a - 1)] = true;
            self.degrees[a - 1] += 1;
            self.degrees[b - 1] += 1;
        }
    }

    fn remove_edge(&mut self, a: usize, b: usize) {
        if self.adj[(a - 1) * self.n + (b - 1)] {
            self.adj[(a - 1) * self.n + (b - 1)] = false;
            self.adj[(b - 1) * self.n + (a - 1)] = false;
            self.degrees[a - 1] -= 1;
            self.degrees[b - 1] -= 1;
        }
    }

    /// Number of vertices.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Whether the distinct edge `a-b` is present (labels 1-based).
    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[(a - 1) * self.n + (b - 1)]
    }

    /// Degree of vertex `i` (1-based), counting distinct edges.
    pub fn degree(&self, i: usize) -> usize {
        self.degrees[i - 1]
    }

    /// All degrees; index `i - 1` holds vertex `i`.
    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    /// Neighbors of vertex `i` in increasing label order.
    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (1..=self.n).filter(move |&j| self.has_edge(i, j))
    }

    /// Distinct edges as `(min, max)` in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 1..=self.n {
            for b in (a + 1)..=self.n {
                if self.has_edge(a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Number of distinct edges.
    pub fn edge_count(&self) -> usize {
        self.degrees.iter().sum::<usize>() / 2
    }

    /// Whether the graph is a spanning tree.
    pub fn is_tree(&self) -> bool {
        self.edge_count() == self.n - 1 && self.is_connected()
    }

    fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.n];
        let mut stack = vec![1usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for w in self.neighbors(v) {
                if !seen[w - 1] {
                    seen[w - 1] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.n
    }

    /// The pairing formed by this graph's distinct edges.
    pub fn to_pairing(&self) -> Pairing {
        Pairing {
            n: self.n,
            pairs: self.edges(),
        }
    }
}

/// Builds the client graph of a pairing; duplicate pairs collapse.
pub fn graph_of(pairing: &Pairing) -> ClientGraph {
    let mut g = ClientGraph::empty(pairing.n);
    for &(a, b) in &pairing.pairs {
        g.insert_edge(a, b);
    }
    g
}

/// Whether the pairing's client graph is a spanning tree, i.e. the exchange
/// is decodable.
pub fn is_feasible(pairing: &Pairing) -> bool {
    graph_of(pairing).is_tree()
}

/// Independent decodability oracle over GF(2).
///
/// Each uplink pair `{a, b}` hands every user one linear equation in the
/// messages, `x_a + x_b`. A user knowing its own message recovers everyone
/// else's exactly when, for every other user `j`, the indicator vector
/// `e_user + e_j` lies in the row space of the pair-incidence matrix. This
/// re-derives tree feasibility from the equation system rather than from
/// graph connectivity; the two must agree for `n - 1`-pair schedules.
pub fn feasible_by_rank(pairing: &Pairing, user: usize) -> bool {
    let n = pairing.n;
    assert!(n <= 64, "rank oracle supports up to 64 users");
    assert!((1..=n).contains(&user), "user label out of range");

    // Row-reduce the pair rows into a basis indexed by leading (lowest) bit.
    let mut basis: Vec<u64> = vec![0; n];
    for &(a, b) in &pairing.pairs {
        let mut row: u64 = (1 << (a - 1)) | (1 << (b - 1));
        while row != 0 {
            let lead = row.trailing_zeros() as usize;
            if basis[lead] == 0 {
                basis[lead] = row;
                break;
            }
            row ^= basis[lead];
        }
    }

    let in_row_space = |mut v: u64| {
        while v != 0 {
            let lead = v.trailing_zeros() as usize;
            if basis[lead] == 0 {
                return false;
            }
            v ^= basis[lead];
        }
        true
    };

    (1..=n)
        .filter(|&j| j != user)
        .all(|j| in_row_space((1 << (user - 1)) | (1 << (j - 1))))
}

/// A labeled tree on `n` vertices encoded as its Prüfer sequence:
/// `n - 2` entries in `1..=n` (empty for `n = 2`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PruferSequence {
    entries: Vec<usize>,
}

impl PruferSequence {
    /// Validates entry ranges. The vertex count is `entries.len() + 2`.
    pub fn new(entries: Vec<usize>) -> Result<Self> {
        let n = entries.len() + 2;
        for &entry in &entries {
            if entry < 1 || entry > n {
                return Err(Error::SequenceEntryOutOfRange { entry, n });
            }
        }
        Ok(PruferSequence { entries })
    }

    /// The sequence entries.
    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    /// Vertex count of the encoded tree.
    pub fn n(&self) -> usize {
        self.entries.len() + 2
    }
}

/// Decodes a Prüfer sequence into its tree (standard smallest-leaf rule).
pub fn prufer_decode(seq: &PruferSequence) -> Pairing {
    let n = seq.n();
    let mut degree = vec![1usize; n + 1];
    for &s in &seq.entries {
        degree[s] += 1;
    }
    let mut leaves: BinaryHeap<Reverse<usize>> =
        (1..=n).filter(|&v| degree[v] == 1).map(Reverse).collect();
    let mut pairs = Vec::with_capacity(n - 1);
    for &s in &seq.entries {
        let Reverse(leaf) = leaves.pop().expect("tree has a leaf");
        pairs.push((leaf, s));
        degree[s] -= 1;
        if degree[s] == 1 {
            leaves.push(Reverse(s));
        }
    }
    let Reverse(u) = leaves.pop().expect("two vertices remain");
    let Reverse(v) = leaves.pop().expect("two vertices remain");
    pairs.push((v.max(u), v.min(u)));
    Pairing { n, pairs }
}

/// Encodes a tree as its Prüfer sequence; errors if the pairing is not a tree.
pub fn prufer_encode(pairing: &Pairing) -> Result<PruferSequence> {
    let g = graph_of(pairing);
    if !g.is_tree() {
        return Err(Error::NotATree);
    }
    let n = pairing.n;
    let mut g = g;
    let mut leaves: BinaryHeap<Reverse<usize>> = (1..=n)
        .filter(|&v| g.degree(v) == 1)
        .map(Reverse)
        .collect();
    let mut entries = Vec::with_capacity(n.saturating_sub(2));
    while entries.len() < n - 2 {
        let Reverse(leaf) = leaves.pop().expect("tree has a leaf");
        let neighbor = g.neighbors(leaf).next().expect("leaf has a neighbor");
        entries.push(neighbor);
        g.remove_edge(leaf, neighbor);
        if g.degree(neighbor) == 1 {
            leaves.push(Reverse(neighbor));
        }
    }
    Ok(PruferSequence { entries })
}

/// Iterator over all `n^(n-2)` labeled trees in lexicographic Prüfer order.
pub struct TreeIter {
    n: usize,
    // Next sequence to emit; None once exhausted.
    next_seq: Option<Vec<usize>>,
}

impl Iterator for TreeIter {
    type Item = Pairing;

    fn next(&mut self) -> Option<Pairing> {
        let seq = self.next_seq.take()?;
        let tree = prufer_decode(&PruferSequence {
            entries: seq.clone(),
        });
        // Odometer increment over entries 1..=n, most significant first.
        let mut seq = seq;
        for pos in (0..seq.len()).rev() {
            if seq[pos] < self.n {
                seq[pos] += 1;
                seq[pos + 1..].fill(1);
                self.next_seq = Some(seq);
                return Some(tree);
            }
        }
        // All entries were n (or the sequence is empty): enumeration is done.
        Some(tree)
    }
}

/// Enumerates every labeled tree on `n` vertices, smallest Prüfer sequence
/// first. Errors above [`ENUMERATION_CAP`] where brute force is infeasible.
pub fn enumerate_trees(n: usize) -> Result<TreeIter> {
    if n < 2 {
        return Err(Error::TooFewUsers(n));
    }
    if n > ENUMERATION_CAP {
        return Err(Error::EnumerationCap {
            n,
            cap: ENUMERATION_CAP,
        });
    }
    Ok(TreeIter {
        n,
        next_seq: Some(vec![1; n - 2]),
    })
}

/// Draws a tree uniformly from all `n^(n-2)` labeled trees.
pub fn random_tree<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Pairing {
    assert!(n >= 2, "need at least 2 users");
    let entries: Vec<usize> = (0..n - 2).map(|_| rng.random_range(1..=n)).collect();
    prufer_decode(&PruferSequence { entries })
}

/// Rewires one edge: requires edges `i-j` and `i-k`, replaces `i-k` with
/// `j-k`. Applied to a tree it yields a tree (the `k`-side subtree is
/// re-attached under `j`).
pub fn v_transform(g: &ClientGraph, i: usize, j: usize, k: usize) -> Result<ClientGraph> {
    let n = g.n();
    for label in [i, j, k] {
        if label < 1 || label > n {
            return Err(Error::LabelOutOfRange { label, n });
        }
    }
    if j == k {
        return Err(Error::SelfPair(j));
    }
    if !g.has_edge(i, j) {
        return Err(Error::MissingEdge { a: i, b: j });
    }
    if !g.has_edge(i, k) {
        return Err(Error::MissingEdge { a: i, b: k });
    }
    let mut out = g.clone();
    out.remove_edge(i, k);
    out.insert_edge(j, k);
    Ok(out)
}
