//! Query-model simulator for quantum dynamic programming on DAGs.
//!
//! The crate models the quantum subroutines (Grover-style search,
//! Dürr–Høyer extremum finding, boosting) at the contract level: each call
//! returns an answer drawn from the subroutine's documented output
//! distribution and charges a deterministic number of oracle queries to a
//! [`oracle::QueryLedger`]. On top of that sit a generic DP engine over
//! index-topologically sorted DAGs, Boolean circuit evaluation with shared
//! inputs, Zhegalkin polynomial (ANF) compilation, single-source longest
//! paths and DAG diameter, plus independent classical reference oracles
//! for every problem.
//!
//! With the default `parallel` feature, Monte-Carlo trial batches and the
//! per-source loop of the diameter algorithm run on rayon; results are
//! byte-identical to the sequential fallback because every unit of work
//! draws from its own derived random substream.

pub mod anf;
pub mod circuit;
pub mod classical;
pub mod dag;
pub mod dp;
pub mod exec;
pub mod oracle;
pub mod paths;
pub mod primitives;

pub use dag::{Dag, ReverseAdjacency};
pub use dp::{Combiner, Value};
pub use oracle::{Category, QueryLedger, RandomStream};
pub use primitives::{Mode, SimConfig};
