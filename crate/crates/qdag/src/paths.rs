//! Single-source longest paths on weighted DAGs and diameter search on
//! unweighted DAGs, with classical references and the dependency-depth
//! diagnostic.
//!
//! Both quantum algorithms relax over the reverse adjacency lists: vertex
//! `i` takes a boosted MAX (longest path) or boosted MIN (shortest path)
//! over its in-neighbors' table entries. Unreachable entries are the
//! explicit sentinels `-inf` / `+inf` with absorbing addition.

use crate::dag::{build_reverse, Dag, ReverseAdjacency};
use crate::dp::Value;
use crate::exec;
use crate::oracle::{Category, QueryLedger, RandomStream};
use crate::primitives::{
    boost_for_final_max, boost_for_paths, boosted_extremum, Direction, SimConfig,
};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathsError {
    SourceOutOfRange { source: usize, n: usize },
}

impl fmt::Display for PathsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PathsError::SourceOutOfRange { source, n } => {
                write!(f, "source {source} outside 1..={n}")
            }
        }
    }
}

impl std::error::Error for PathsError {}

/// Longest-path lengths from a source; `-inf` marks unreachable vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LongestPathTable {
    pub source: usize,
    /// `t[i]` for `i` in `1..=n` (`t[0]` unused).
    pub t: Vec<Value>,
}

impl LongestPathTable {
    pub fn entries(&self) -> &[Value] {
        &self.t[1..]
    }
}

/// Shortest-path lengths from every non-sink vertex, plus the diameter.
/// `+inf` marks a missing path (reported as -1 in text output).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    /// `rows[z - 1][i]` = shortest path length from `z` to `i`, for
    /// `z` in `1..=n_hat` (inner index 0 unused).
    pub rows: Vec<Vec<Value>>,
    pub diam: u64,
}

/// Length of the longest path out of a chosen vertex; drives the refined
/// boost rule for MAX/MIN dynamic programming.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DepthDiagnostic {
    pub q: usize,
}

fn check_source(dag: &Dag, s: usize) -> Result<(), PathsError> {
    if s < 1 || s > dag.n() {
        return Err(PathsError::SourceOutOfRange { source: s, n: dag.n() });
    }
    Ok(())
}

/// Single-source longest paths with a boosted MAX per vertex
/// (default boost `2 * ceil(log2(n))`).
///
/// Vertices with no in-edges keep `-inf` and charge nothing. In exact
/// mode the table equals [`longest_paths_classical`]; in stochastic mode
/// every entry is a lower bound on the true length.
pub fn longest_paths_quantum(
    dag: &Dag,
    s: usize,
    config: &SimConfig,
    seed: u64,
    boost: Option<u32>,
) -> Result<(LongestPathTable, QueryLedger), PathsError> {
    check_source(dag, s)?;
    let rev = build_reverse(dag);
    let k = boost.unwrap_or_else(|| boost_for_paths(dag.n()));
    let mut rng = RandomStream::new(seed);
    let mut ledger = QueryLedger::new(dag.n());

    let mut t = vec![Value::NegInf; dag.n() + 1];
    t[s] = Value::Finite(0);
    for i in s + 1..=dag.n() {
        let incoming = rev.into_vertex(i);
        if incoming.is_empty() {
            continue;
        }
        ledger.focus_vertex(i);
        let mut candidate = |p: usize| {
            let (j, w) = incoming[p - 1];
            t[j].plus(w)
        };
        let out = boosted_extremum(
            Direction::Max,
            &mut candidate,
            incoming.len(),
            k,
            config,
            &mut rng,
            &mut ledger,
        )
        .expect("nonempty in-neighbor list");
        t[i] = out.value;
    }
    ledger.clear_focus();
    Ok((LongestPathTable { source: s, t }, ledger))
}

/// Classical single forward pass in index order; exact. Charges one
/// adjacency query per inspected in-edge (`m` for `s = 1`) on its own
/// baseline ledger.
pub fn longest_paths_classical(
    dag: &Dag,
    s: usize,
) -> Result<(LongestPathTable, QueryLedger), PathsError> {
    check_source(dag, s)?;
    let rev = build_reverse(dag);
    let mut ledger = QueryLedger::new(dag.n());
    let mut t = vec![Value::NegInf; dag.n() + 1];
    t[s] = Value::Finite(0);
    for i in s + 1..=dag.n() {
        let mut best = Value::NegInf;
        for &(j, w) in rev.into_vertex(i) {
            ledger.charge(Category::Adjacency);
            best = best.max(t[j].plus(w));
        }
        t[i] = best;
    }
    Ok((LongestPathTable { source: s, t }, ledger))
}

fn shortest_row(
    dag: &Dag,
    rev: &ReverseAdjacency,
    z: usize,
    k: u32,
    config: &SimConfig,
    rng: &mut RandomStream,
    ledger: &mut QueryLedger,
) -> Vec<Value> {
    let mut row = vec![Value::PosInf; dag.n() + 1];
    row[z] = Value::Finite(0);
    for i in z + 1..=dag.n() {
        let incoming = rev.into_vertex(i);
        if incoming.is_empty() {
            continue;
        }
        ledger.focus_vertex(i);
        let mut candidate = |p: usize| row[incoming[p - 1].0];
        let out = boosted_extremum(
            Direction::Min,
            &mut candidate,
            incoming.len(),
            k,
            config,
            rng,
            ledger,
        )
        .expect("nonempty in-neighbor list");
        row[i] = out.value.plus(1);
    }
    ledger.clear_focus();
    row
}

fn diameter_impl(
    dag: &Dag,
    config: &SimConfig,
    seed: u64,
    boost: Option<u32>,
    sequential: bool,
) -> (u64, DistanceMatrix, QueryLedger) {
    let rev = build_reverse(dag);
    let n_hat = dag.n_hat();
    let k = boost.unwrap_or_else(|| boost_for_paths(dag.n()));
    let base = RandomStream::new(seed);

    // One worker per source z, each on substream z with its own
    // sub-ledger; rows land in index order regardless of scheduling.
    let job = |idx: usize| {
        let z = idx + 1;
        let mut rng = base.substream(z as u64);
        let mut ledger = QueryLedger::new(dag.n());
        let row = shortest_row(dag, &rev, z, k, config, &mut rng, &mut ledger);
        (row, ledger)
    };
    let per_source: Vec<(Vec<Value>, QueryLedger)> = if sequential {
        exec::map_indexed_seq(n_hat, job)
    } else {
        exec::map_indexed(n_hat, job)
    };

    let mut ledger = QueryLedger::new(dag.n());
    let mut rows = Vec::with_capacity(n_hat);
    for (row, sub) in per_source {
        ledger.merge(&sub);
        rows.push(row);
    }

    // Final boosted MAX over {0} and all entries t^z[i] with i > z,
    // ignoring +inf (mapped below every finite value).
    let offsets: Vec<usize> = {
        let mut acc = vec![0usize; n_hat + 1];
        for z in 1..=n_hat {
            acc[z] = acc[z - 1] + (dag.n() - z);
        }
        acc
    };
    let domain = 1 + offsets.last().copied().unwrap_or(0);
    let mut lookup = |p: usize| {
        if p == 1 {
            return Value::Finite(0);
        }
        let flat = p - 2;
        let z = offsets.partition_point(|&o| o <= flat);
        let i = z + 1 + (flat - offsets[z - 1]);
        match rows[z - 1][i] {
            Value::PosInf => Value::NegInf,
            v => v,
        }
    };
    let mut final_rng = base.substream(0);
    let out = boosted_extremum(
        Direction::Max,
        &mut lookup,
        domain,
        boost_for_final_max(dag.n()),
        config,
        &mut final_rng,
        &mut ledger,
    )
    .expect("domain includes the constant 0");
    let diam = out.value.finite().map_or(0, |x| x.max(0) as u64);
    (diam, DistanceMatrix { rows, diam }, ledger)
}

/// Diameter of an unweighted DAG: shortest-path rows from every non-sink
/// vertex (boosted MIN, default `2 * ceil(log2(n))`), then one boosted MAX
/// with `ceil(log2(n))` over all entries and the constant 0.
///
/// With the `parallel` feature the per-source rows are computed on rayon;
/// the result is identical to [`diameter_quantum_seq`].
pub fn diameter_quantum(
    dag: &Dag,
    config: &SimConfig,
    seed: u64,
    boost: Option<u32>,
) -> (u64, DistanceMatrix, QueryLedger) {
    diameter_impl(dag, config, seed, boost, false)
}

/// Always-sequential variant of [`diameter_quantum`].
pub fn diameter_quantum_seq(
    dag: &Dag,
    config: &SimConfig,
    seed: u64,
    boost: Option<u32>,
) -> (u64, DistanceMatrix, QueryLedger) {
    diameter_impl(dag, config, seed, boost, true)
}

/// Classical diameter: BFS from every non-sink vertex; exact. Charges one
/// adjacency query per edge inspection on its own baseline ledger.
pub fn diameter_classical(dag: &Dag) -> (u64, QueryLedger) {
    let mut ledger = QueryLedger::new(dag.n());
    let mut diam = 0u64;
    let mut dist: Vec<Option<u64>> = vec![None; dag.n() + 1];
    let mut queue = std::collections::VecDeque::new();
    for z in 1..=dag.n_hat() {
        dist.iter_mut().for_each(|d| *d = None);
        dist[z] = Some(0);
        queue.clear();
        queue.push_back(z);
        while let Some(v) = queue.pop_front() {
            for &j in dag.children(v) {
                ledger.charge(Category::Adjacency);
                if dist[j].is_none() {
                    let d = dist[v].unwrap() + 1;
                    dist[j] = Some(d);
                    diam = diam.max(d);
                    queue.push_back(j);
                }
            }
        }
    }
    (diam, ledger)
}

/// Length (in edges) of the longest path out of vertex `a`; 0 for sinks.
/// Exact and classical: a single forward relaxation pass.
pub fn dependency_depth(dag: &Dag, a: usize) -> Result<DepthDiagnostic, PathsError> {
    check_source(dag, a)?;
    let mut depth: Vec<Option<usize>> = vec![None; dag.n() + 1];
    depth[a] = Some(0);
    let mut q = 0;
    for i in a..=dag.n() {
        if let Some(d) = depth[i] {
            q = q.max(d);
            for &j in dag.children(i) {
                if depth[j].map_or(true, |old| old < d + 1) {
                    depth[j] = Some(d + 1);
                }
            }
        }
    }
    Ok(DepthDiagnostic { q })
}
