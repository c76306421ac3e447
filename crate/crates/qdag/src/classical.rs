//! Independent classical reference implementations.
//!
//! These serve as ground truth in tests and reports. They deliberately
//! share no combiner or primitive code with the simulated-quantum engine:
//! plain folds, exhaustive path enumeration, and all-pairs BFS, so that
//! agreement between the two routes is evidence rather than tautology.

use crate::dag::Dag;
use crate::dp::{Combiner, DpError, Value, ValueTable};
use crate::paths::LongestPathTable;
use std::collections::VecDeque;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleError {
    /// The instance exceeds the brute-force size limit.
    TooLarge { n: usize, limit: usize },
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::TooLarge { n, limit } => {
                write!(f, "brute-force oracle limited to n <= {limit}, got n = {n}")
            }
        }
    }
}

impl std::error::Error for OracleError {}

/// Classical bottom-up DP evaluation by direct folds over the children.
///
/// Returns the table and the number of child inspections made (exactly
/// `m`), the classical baseline's query count.
pub fn run_dp_classical(
    dag: &Dag,
    combiners: &[Combiner],
    sink_eval: &dyn Fn(usize) -> Value,
) -> Result<(ValueTable, u64), DpError> {
    let n_hat = dag.n_hat();
    if combiners.len() < n_hat {
        return Err(DpError::MissingCombiner { vertex: combiners.len() + 1 });
    }
    let mut table = ValueTable::with_capacity(n_hat);
    let mut queries = 0u64;
    for i in (1..=n_hat).rev() {
        let child = |j: usize| if j <= n_hat { table.get(j) } else { sink_eval(j) };
        let combiner = combiners[i - 1];
        queries += dag.out_degree(i) as u64;
        let value = if combiner.is_boolean() {
            let mut all_true = true;
            let mut any_true = false;
            for &j in dag.children(i) {
                let v = child(j);
                let b = v.as_bit().ok_or(DpError::TypeMismatch { vertex: i, child: j, value: v })?;
                all_true &= b;
                any_true |= b;
            }
            Value::bit(match combiner {
                Combiner::And => all_true,
                Combiner::Or => any_true,
                Combiner::Nand => !all_true,
                _ => unreachable!(),
            })
        } else {
            let mut best: Option<Value> = None;
            for &j in dag.children(i) {
                let v = child(j);
                best = Some(match (best, combiner) {
                    (None, _) => v,
                    (Some(b), Combiner::Max) => b.max(v),
                    (Some(b), Combiner::Min) => b.min(v),
                    _ => unreachable!(),
                });
            }
            best.expect("non-sink vertices have children")
        };
        table.set(i, value);
    }
    Ok((table, queries))
}

const BRUTE_PATHS_LIMIT: usize = 12;
const BRUTE_DIAMETER_LIMIT: usize = 64;

/// Longest paths from `s` by exhaustive enumeration of all paths.
/// Only for tiny graphs (`n <= 12`); the oracle for the oracle.
pub fn brute_force_paths(dag: &Dag, s: usize) -> Result<LongestPathTable, OracleError> {
    if dag.n() > BRUTE_PATHS_LIMIT {
        return Err(OracleError::TooLarge { n: dag.n(), limit: BRUTE_PATHS_LIMIT });
    }
    let mut best = vec![Value::NegInf; dag.n() + 1];
    best[s] = Value::Finite(0);
    // DFS over all paths out of s; a DAG has finitely many.
    let mut stack = vec![(s, 0i64)];
    while let Some((v, len)) = stack.pop() {
        for (p, &j) in dag.children(v).iter().enumerate() {
            let next = len + dag.weight_at(v, p);
            if Value::Finite(next) > best[j] {
                best[j] = Value::Finite(next);
            }
            stack.push((j, next));
        }
    }
    Ok(LongestPathTable { source: s, t: best })
}

fn bfs_from(dag: &Dag, start: usize, dist: &mut [Option<u64>]) {
    dist.iter_mut().for_each(|d| *d = None);
    dist[start] = Some(0);
    let mut queue = VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        for &j in dag.children(v) {
            if dist[j].is_none() {
                dist[j] = Some(dist[v].unwrap() + 1);
                queue.push_back(j);
            }
        }
    }
}

/// Diameter by the literal definition: all-pairs BFS, maximum over the
/// existing shortest-path lengths, 0 when no pair is connected.
/// Only for `n <= 64`.
pub fn brute_force_diameter(dag: &Dag) -> Result<u64, OracleError> {
    if dag.n() > BRUTE_DIAMETER_LIMIT {
        return Err(OracleError::TooLarge { n: dag.n(), limit: BRUTE_DIAMETER_LIMIT });
    }
    let mut dist = vec![None; dag.n() + 1];
    let mut diam = 0;
    for i in 1..=dag.n() {
        bfs_from(dag, i, &mut dist);
        for j in 1..=dag.n() {
            if let Some(d) = dist[j] {
                diam = diam.max(d);
            }
        }
    }
    Ok(diam)
}
