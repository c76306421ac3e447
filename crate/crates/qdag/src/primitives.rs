//! Contract-level simulations of the quantum subroutines.
//!
//! Grover-style search, Dürr–Høyer extremum finding, and the two boosting
//! constructions are modeled as input/output contracts: each call charges
//! a deterministic query count derived from the domain size and the cost
//! constants, and draws its answer from the subroutine's documented
//! distribution. No amplitude dynamics are simulated.
//!
//! Search is one-sided: a returned position always satisfies the
//! predicate; failures only ever report "none" despite a witness.
//! Extremum errors are directional: an erroneous MAX is a strict
//! underestimate (the best value among positions not attaining the true
//! maximum), an erroneous MIN a strict overestimate.

use crate::dp::Value;
use crate::oracle::{Category, QueryLedger, RandomStream};
use std::fmt;

/// Answer model: exact (error-free) or stochastic with the configured
/// per-call error probability.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Stochastic,
}

/// Simulation parameters shared by all primitive calls of a run.
///
/// Query costs are `ceil(c_search * sqrt(k * d))` for (boosted) search and
/// `ceil(c_extremum * sqrt(d))` per extremum round; the constants are
/// configurable because only the asymptotic form is fixed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub mode: Mode,
    /// Per-call error probability of an unboosted primitive, in (0, 0.5].
    pub epsilon_base: f64,
    pub c_search: f64,
    pub c_extremum: f64,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig { mode: Mode::Exact, epsilon_base: 0.5, c_search: 2.0, c_extremum: 8.0 }
    }
}

impl SimConfig {
    pub fn exact() -> Self {
        SimConfig::default()
    }

    pub fn stochastic() -> Self {
        SimConfig { mode: Mode::Stochastic, ..SimConfig::default() }
    }

    pub fn is_valid(&self) -> bool {
        self.epsilon_base > 0.0
            && self.epsilon_base <= 0.5
            && self.c_search > 0.0
            && self.c_extremum > 0.0
    }
}

/// The empty-domain error: primitives require at least one position.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EmptyDomain;

impl fmt::Display for EmptyDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "primitive called on an empty domain")
    }
}

impl std::error::Error for EmptyDomain {}

/// ceil(log2(x)) for x >= 1, by bit arithmetic (0 for x <= 1).
pub fn ceil_log2(x: usize) -> u32 {
    if x <= 1 {
        0
    } else {
        usize::BITS - (x - 1).leading_zeros()
    }
}

/// Default boost count for the DP loop: `2 * ceil(log2(n_hat))`, at least 1.
pub fn boost_for_dp(n_hat: usize) -> u32 {
    (2 * ceil_log2(n_hat)).max(1)
}

/// Default boost count for the path algorithms: `2 * ceil(log2(n))`, at least 1.
pub fn boost_for_paths(n: usize) -> u32 {
    (2 * ceil_log2(n)).max(1)
}

/// Boost count for the final max of the diameter algorithm:
/// `ceil(log2(n))`, at least 1.
pub fn boost_for_final_max(n: usize) -> u32 {
    ceil_log2(n).max(1)
}

/// Search-phase cost: `ceil(c_search * sqrt(k * d))`.
pub fn search_cost(c_search: f64, d: usize, k: u32) -> u64 {
    (c_search * ((k as u64 * d as u64) as f64).sqrt()).ceil() as u64
}

/// Per-round extremum cost: `ceil(c_extremum * sqrt(d))`.
pub fn extremum_cost(c_extremum: f64, d: usize) -> u64 {
    (c_extremum * (d as f64).sqrt()).ceil() as u64
}

/// Result of a (boosted) search call.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOutcome {
    /// Verified witness position (1-based), when one was found.
    pub found: Option<usize>,
    pub queries_charged: u64,
}

/// Result of a (boosted) extremum call.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExtremumOutcome {
    /// 1-based position attaining the returned value.
    pub arg: usize,
    pub value: Value,
    pub queries_charged: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Max,
    Min,
}

fn search_answer(
    witnesses: &[usize],
    success_p: f64,
    config: &SimConfig,
    rng: &mut RandomStream,
) -> Option<usize> {
    if witnesses.is_empty() {
        // The no-witness side is error-free.
        return None;
    }
    match config.mode {
        Mode::Exact => Some(witnesses[0]),
        Mode::Stochastic => {
            if rng.chance(success_p) {
                Some(witnesses[rng.pick(witnesses.len())])
            } else {
                None
            }
        }
    }
}

/// Grover-style search for a predicate witness among positions `1..=d`.
///
/// Charges `ceil(c_search * sqrt(d))` queries plus one verification query
/// when a candidate is returned. Exact mode returns the smallest witness;
/// stochastic mode misses an existing witness with probability
/// `epsilon_base` and otherwise returns one uniformly. Never returns a
/// non-witness.
pub fn grover_search(
    predicate: &mut dyn FnMut(usize) -> bool,
    d: usize,
    config: &SimConfig,
    rng: &mut RandomStream,
    ledger: &mut QueryLedger,
) -> Result<SearchOutcome, EmptyDomain> {
    search_impl(predicate, d, 1, config, rng, ledger)
}

/// Search boosted by amplitude amplification, modeled at the contract
/// level: cost `ceil(c_search * sqrt(k * d))` and success probability
/// `1 - epsilon_base^k` when a witness exists.
pub fn boosted_search_aa(
    predicate: &mut dyn FnMut(usize) -> bool,
    d: usize,
    k: u32,
    config: &SimConfig,
    rng: &mut RandomStream,
    ledger: &mut QueryLedger,
) -> Result<SearchOutcome, EmptyDomain> {
    search_impl(predicate, d, k.max(1), config, rng, ledger)
}

fn search_impl(
    predicate: &mut dyn FnMut(usize) -> bool,
    d: usize,
    k: u32,
    config: &SimConfig,
    rng: &mut RandomStream,
    ledger: &mut QueryLedger,
) -> Result<SearchOutcome, EmptyDomain> {
    if d == 0 {
        return Err(EmptyDomain);
    }
    let cost = search_cost(config.c_search, d, k);
    ledger.charge_many(Category::Value, cost);
    let witnesses: Vec<usize> = (1..=d).filter(|&p| predicate(p)).collect();
    let success_p = 1.0 - config.epsilon_base.powi(k as i32);
    let found = search_answer(&witnesses, success_p, config, rng);
    let mut charged = cost;
    if found.is_some() {
        ledger.charge(Category::Verification);
        charged += 1;
    }
    Ok(SearchOutcome { found, queries_charged: charged })
}

/// Dürr–Høyer extremum finding over positions `1..=d`.
///
/// Charges exactly `ceil(c_extremum * sqrt(d))` queries. Exact mode
/// returns the true extremum at its smallest attaining position.
/// Stochastic mode fails with probability `epsilon_base`, in which case it
/// returns the extremum over the positions NOT attaining the true one
/// (always correct when all values are equal).
pub fn dh_extremum(
    direction: Direction,
    values: &mut dyn FnMut(usize) -> Value,
    d: usize,
    config: &SimConfig,
    rng: &mut RandomStream,
    ledger: &mut QueryLedger,
) -> Result<ExtremumOutcome, EmptyDomain> {
    if d == 0 {
        return Err(EmptyDomain);
    }
    let cost = extremum_cost(config.c_extremum, d);
    ledger.charge_many(Category::Value, cost);

    let all: Vec<Value> = (1..=d).map(|p| values(p)).collect();
    let best =
        pick_extremum(direction, (1..=d).map(|p| (p, all[p - 1]))).expect("nonempty domain");

    let (arg, value) = match config.mode {
        Mode::Exact => best,
        Mode::Stochastic => {
            if rng.chance(1.0 - config.epsilon_base) {
                best
            } else {
                // Error branch: best among the positions that do not
                // attain the true extremum; empty means all values are
                // equal and the call cannot fail.
                pick_extremum(
                    direction,
                    (1..=d).map(|p| (p, all[p - 1])).filter(|&(_, v)| v != best.1),
                )
                .unwrap_or(best)
            }
        }
    };
    Ok(ExtremumOutcome { arg, value, queries_charged: cost })
}

fn pick_extremum(
    direction: Direction,
    items: impl Iterator<Item = (usize, Value)>,
) -> Option<(usize, Value)> {
    let mut best: Option<(usize, Value)> = None;
    for (p, v) in items {
        let better = match (&best, direction) {
            (None, _) => true,
            (Some(&(_, bv)), Direction::Max) => v > bv,
            (Some(&(_, bv)), Direction::Min) => v < bv,
        };
        if better {
            best = Some((p, v));
        }
        // Ties keep the smallest position: items arrive in ascending order.
    }
    best
}

/// Boosting by repetition: runs [`dh_extremum`] `k` times and combines the
/// results classically with MAX (resp. MIN). Charges
/// `k * ceil(c_extremum * sqrt(d))`; error probability `epsilon_base^k`;
/// preserves the directional error property.
pub fn boosted_extremum(
    direction: Direction,
    values: &mut dyn FnMut(usize) -> Value,
    d: usize,
    k: u32,
    config: &SimConfig,
    rng: &mut RandomStream,
    ledger: &mut QueryLedger,
) -> Result<ExtremumOutcome, EmptyDomain> {
    let k = k.max(1);
    let mut combined: Option<ExtremumOutcome> = None;
    let mut charged = 0;
    for _ in 0..k {
        let round = dh_extremum(direction, values, d, config, rng, ledger)?;
        charged += round.queries_charged;
        combined = Some(match combined {
            None => round,
            Some(acc) => {
                let keep_round = match direction {
                    Direction::Max => round.value > acc.value,
                    Direction::Min => round.value < acc.value,
                };
                if keep_round {
                    round
                } else {
                    acc
                }
            }
        });
    }
    let mut out = combined.expect("k >= 1");
    out.queries_charged = charged;
    Ok(out)
}
