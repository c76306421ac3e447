//! The charged black-box layer.
//!
//! Every data inspection performed inside a simulated quantum subroutine
//! is accounted here: the [`QueryLedger`] counts oracle queries in total,
//! per category, and per vertex being processed. Classical bookkeeping
//! (loop counters, combining boosted results, writing table entries) is
//! never charged.
//!
//! [`RandomStream`] is the deterministic randomness source: a
//! counter-based generator seeded by a 64-bit value, with independent
//! substreams derived from `(seed, stream id)` so concurrent runs never
//! share state.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt;

/// Query categories tracked by the ledger.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Category {
    /// Graph-structure inspections (adjacency entries).
    Adjacency,
    /// Stored-value inspections (sink values, DP table entries, composite
    /// child records).
    Value,
    /// Edge-weight inspections by classical baselines.
    Weight,
    /// The single check of a returned search candidate.
    Verification,
}

const CATEGORIES: usize = 4;

impl Category {
    fn slot(self) -> usize {
        match self {
            Category::Adjacency => 0,
            Category::Value => 1,
            Category::Weight => 2,
            Category::Verification => 3,
        }
    }
}

/// Position error from [`charged_read`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OutOfRange {
    pub position: usize,
    pub len: usize,
}

impl fmt::Display for OutOfRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "position {} outside 1..={}", self.position, self.len)
    }
}

impl std::error::Error for OutOfRange {}

/// Per-run charged-query counters.
///
/// A ledger belongs to exactly one evaluation run. The per-vertex map
/// attributes charges to the vertex currently in focus (slot 0 collects
/// charges made outside any vertex, e.g. the final max of the diameter
/// algorithm).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryLedger {
    total: u64,
    per_category: [u64; CATEGORIES],
    per_vertex: Vec<u64>,
    focus: usize,
}

/// Immutable totals record returned by [`QueryLedger::snapshot`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LedgerSnapshot {
    pub total: u64,
    pub adjacency: u64,
    pub value: u64,
    pub weight: u64,
    pub verification: u64,
}

impl QueryLedger {
    /// A fresh ledger for a graph on `n` vertices.
    pub fn new(n: usize) -> Self {
        QueryLedger {
            total: 0,
            per_category: [0; CATEGORIES],
            per_vertex: vec![0; n + 1],
            focus: 0,
        }
    }

    /// Directs subsequent charges to vertex `i`.
    pub fn focus_vertex(&mut self, i: usize) {
        assert!(i < self.per_vertex.len(), "focus {i} outside ledger range");
        self.focus = i;
    }

    /// Returns the focus to the unattributed slot.
    pub fn clear_focus(&mut self) {
        self.focus = 0;
    }

    /// Charges exactly one query in `category`.
    pub fn charge(&mut self, category: Category) {
        self.charge_many(category, 1);
    }

    /// Charges `count` queries in `category` in one step.
    pub fn charge_many(&mut self, category: Category, count: u64) {
        self.total += count;
        self.per_category[category.slot()] += count;
        self.per_vertex[self.focus] += count;
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn category(&self, category: Category) -> u64 {
        self.per_category[category.slot()]
    }

    /// Queries charged while vertex `i` was in focus.
    pub fn vertex(&self, i: usize) -> u64 {
        self.per_vertex[i]
    }

    /// Current counters as an immutable record; the ledger is unchanged.
    pub fn snapshot(&self) -> LedgerSnapshot {
        LedgerSnapshot {
            total: self.total,
            adjacency: self.per_category[0],
            value: self.per_category[1],
            weight: self.per_category[2],
            verification: self.per_category[3],
        }
    }

    /// Sums another ledger into this one (used to merge per-worker
    /// sub-ledgers after a parallel run).
    pub fn merge(&mut self, other: &QueryLedger) {
        assert_eq!(self.per_vertex.len(), other.per_vertex.len(), "ledger size mismatch");
        self.total += other.total;
        for c in 0..CATEGORIES {
            self.per_category[c] += other.per_category[c];
        }
        for (a, b) in self.per_vertex.iter_mut().zip(&other.per_vertex) {
            *a += b;
        }
    }

    /// Internal consistency: total equals both the category sum and the
    /// per-vertex sum.
    pub fn consistent(&self) -> bool {
        let by_cat: u64 = self.per_category.iter().sum();
        let by_vertex: u64 = self.per_vertex.iter().sum();
        self.total == by_cat && self.total == by_vertex
    }
}

/// Reads `items[position]` (1-based) through the black box, charging
/// exactly one query in `category`.
pub fn charged_read<'a, T>(
    ledger: &mut QueryLedger,
    items: &'a [T],
    position: usize,
    category: Category,
) -> Result<&'a T, OutOfRange> {
    if position < 1 || position > items.len() {
        return Err(OutOfRange { position, len: items.len() });
    }
    ledger.charge(category);
    Ok(&items[position - 1])
}

/// Deterministic pseudo-random stream with derivable substreams.
///
/// Identical seeds yield identical draw sequences. `substream(id)` is a
/// pure function of `(seed, id)`; distinct ids map to distinct derived
/// seeds, so parallel workers draw from independent streams.
#[derive(Debug, Clone)]
pub struct RandomStream {
    seed: u64,
    rng: ChaCha8Rng,
}

// SplitMix64 finalizer; bijective on u64.
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Derived seed for substream `id` of `seed`; injective in `id`.
pub fn derive_seed(seed: u64, id: u64) -> u64 {
    mix64(seed ^ id.wrapping_mul(0x9e3779b97f4a7c15).rotate_left(17))
}

impl RandomStream {
    pub fn new(seed: u64) -> Self {
        RandomStream { seed, rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Independent substream for `(seed, id)`; does not disturb `self`.
    pub fn substream(&self, id: u64) -> RandomStream {
        RandomStream::new(derive_seed(self.seed, id))
    }

    /// True with probability `p`.
    pub fn chance(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    /// Uniform draw from `0..n`; `n` must be positive.
    pub fn pick(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    /// Uniform draw from `lo..=hi`.
    pub fn range_i64(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.gen()
    }

    pub fn bit(&mut self) -> bool {
        self.rng.gen()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn charged_read_counts_one_per_inspection() {
        let dag = crate::dag::validate_dag(3, &[(1, 2), (1, 3)], None).unwrap();
        let mut ledger = QueryLedger::new(dag.n());
        let v = charged_read(&mut ledger, dag.children(1), 2, Category::Adjacency).unwrap();
        assert_eq!(*v, 3);
        assert_eq!(ledger.category(Category::Adjacency), 1);
        charged_read(&mut ledger, dag.children(1), 1, Category::Adjacency).unwrap();
        assert_eq!(ledger.total(), 2);
    }

    #[test]
    fn full_scan_charges_list_length() {
        let items = vec![10, 20, 30, 40, 50];
        let mut ledger = QueryLedger::new(1);
        for p in 1..=items.len() {
            charged_read(&mut ledger, &items, p, Category::Value).unwrap();
        }
        assert_eq!(ledger.total(), items.len() as u64);
    }

    #[test]
    fn out_of_range_read_charges_nothing() {
        let items = vec![1];
        let mut ledger = QueryLedger::new(1);
        assert_eq!(
            charged_read(&mut ledger, &items, 2, Category::Value),
            Err(OutOfRange { position: 2, len: 1 })
        );
        assert_eq!(
            charged_read(&mut ledger, &items, 0, Category::Value),
            Err(OutOfRange { position: 0, len: 1 })
        );
        assert_eq!(ledger.total(), 0);
    }

    #[test]
    fn snapshot_is_stable_and_zeroed_when_fresh() {
        let mut ledger = QueryLedger::new(4);
        let fresh = ledger.snapshot();
        assert_eq!(fresh.total, 0);
        for _ in 0..5 {
            ledger.charge(Category::Value);
        }
        let a = ledger.snapshot();
        let b = ledger.snapshot();
        assert_eq!(a, b);
        assert_eq!(a.total, 5);
        assert_eq!(a.value, 5);
    }

    #[test]
    fn per_vertex_attribution_and_merge() {
        let mut a = QueryLedger::new(3);
        a.focus_vertex(2);
        a.charge_many(Category::Value, 4);
        a.clear_focus();
        a.charge(Category::Verification);
        assert_eq!(a.vertex(2), 4);
        assert_eq!(a.vertex(0), 1);
        assert!(a.consistent());

        let mut b = QueryLedger::new(3);
        b.focus_vertex(1);
        b.charge_many(Category::Adjacency, 3);
        a.merge(&b);
        assert_eq!(a.total(), 8);
        assert_eq!(a.vertex(1), 3);
        assert!(a.consistent());
    }

    #[test]
    fn streams_replay_under_same_seed() {
        let mut a = RandomStream::new(99);
        let mut b = RandomStream::new(99);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn substreams_differ_and_are_pure() {
        let base = RandomStream::new(7);
        let mut ids = std::collections::HashSet::new();
        for id in 0..1000 {
            assert!(ids.insert(derive_seed(7, id)), "substream seed collision at id {id}");
        }
        let mut s1 = base.substream(3);
        let mut s2 = base.substream(3);
        assert_eq!(s1.next_u64(), s2.next_u64());
    }
}
