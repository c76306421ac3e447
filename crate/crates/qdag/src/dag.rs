//! Index-topologically sorted DAGs in the adjacency-list model.
//!
//! Every graph handled by this crate satisfies two structural properties:
//! each edge `(i, j)` has `i < j`, and the sinks (out-degree 0) occupy the
//! last indices. Vertex indices are 1-based everywhere, in memory and in
//! the `.dag` text format. Inputs violating the properties are rejected,
//! never repaired.

use crate::oracle::RandomStream;
use std::fmt;

/// Validation and parse errors for graph inputs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DagError {
    /// A vertex index lies outside `1..=n`.
    IndexOutOfRange { edge: (usize, usize), n: usize },
    /// An edge `(u, v)` with `u >= v`.
    EdgeNotForward { from: usize, to: usize },
    /// A sink appears before a vertex with outgoing edges.
    SinkOrderViolation { sink: usize, later: usize },
    /// The same edge listed twice.
    DuplicateEdge { from: usize, to: usize },
    /// Bad generator or constructor parameters.
    InvalidParams(String),
    /// Malformed `.dag` text, with the 1-based line number.
    Parse { line: usize, msg: String },
}

impl fmt::Display for DagError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DagError::IndexOutOfRange { edge: (u, v), n } => {
                write!(f, "edge ({u}, {v}) references a vertex outside 1..={n}")
            }
            DagError::EdgeNotForward { from, to } => {
                write!(f, "edge ({from}, {to}) is not forward: requires {from} < {to}")
            }
            DagError::SinkOrderViolation { sink, later } => write!(
                f,
                "sink {sink} precedes vertex {later} which has outgoing edges; sinks must occupy the last indices"
            ),
            DagError::DuplicateEdge { from, to } => write!(f, "duplicate edge ({from}, {to})"),
            DagError::InvalidParams(msg) => write!(f, "invalid parameters: {msg}"),
            DagError::Parse { line, msg } => write!(f, "line {line}: {msg}"),
        }
    }
}

impl std::error::Error for DagError {}

/// A directed acyclic graph, topologically sorted by index, sinks last.
///
/// `n_hat` counts the vertices with at least one outgoing edge; they are
/// exactly the indices `1..=n_hat`. Adjacency lists preserve the edge
/// order of the input they were built from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dag {
    n: usize,
    m: usize,
    n_hat: usize,
    adjacency: Vec<Vec<usize>>,
    weights: Option<Vec<Vec<i64>>>,
}

impl Dag {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Number of vertices with out-degree > 0.
    pub fn n_hat(&self) -> usize {
        self.n_hat
    }

    /// Sink indices: always the last `n - n_hat` positions.
    pub fn sinks(&self) -> std::ops::RangeInclusive<usize> {
        self.n_hat + 1..=self.n
    }

    pub fn sink_count(&self) -> usize {
        self.n - self.n_hat
    }

    pub fn is_sink(&self, i: usize) -> bool {
        i > self.n_hat
    }

    pub fn out_degree(&self, i: usize) -> usize {
        self.adjacency[i].len()
    }

    /// Out-neighbor list of vertex `i`, in input order.
    pub fn children(&self, i: usize) -> &[usize] {
        &self.adjacency[i]
    }

    pub fn is_weighted(&self) -> bool {
        self.weights.is_some()
    }

    /// Weight of the edge at `position` (0-based) in `i`'s adjacency list.
    /// Unweighted graphs report unit weight.
    pub fn weight_at(&self, i: usize, position: usize) -> i64 {
        match &self.weights {
            Some(w) => w[i][position],
            None => 1,
        }
    }

    /// All edges `(from, to, weight)` in adjacency order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, i64)> + '_ {
        (1..=self.n).flat_map(move |i| {
            self.adjacency[i]
                .iter()
                .enumerate()
                .map(move |(p, &j)| (i, j, self.weight_at(i, p)))
        })
    }
}

/// Checks the structural invariants on a raw edge list and builds a [`Dag`].
///
/// Adjacency lists keep the edges in input order. `weights`, when given,
/// must be parallel to `edges`.
pub fn validate_dag(
    n: usize,
    edges: &[(usize, usize)],
    weights: Option<&[i64]>,
) -> Result<Dag, DagError> {
    if let Some(w) = weights {
        if w.len() != edges.len() {
            return Err(DagError::InvalidParams(format!(
                "{} weights for {} edges",
                w.len(),
                edges.len()
            )));
        }
    }

    let mut adjacency = vec![Vec::new(); n + 1];
    let mut wlists = weights.map(|_| vec![Vec::new(); n + 1]);
    let mut seen = std::collections::HashSet::new();
    for (pos, &(u, v)) in edges.iter().enumerate() {
        if u < 1 || u > n || v < 1 || v > n {
            return Err(DagError::IndexOutOfRange { edge: (u, v), n });
        }
        if u >= v {
            return Err(DagError::EdgeNotForward { from: u, to: v });
        }
        if !seen.insert((u, v)) {
            return Err(DagError::DuplicateEdge { from: u, to: v });
        }
        adjacency[u].push(v);
        if let (Some(wl), Some(w)) = (wlists.as_mut(), weights) {
            wl[u].push(w[pos]);
        }
    }

    // Sinks must occupy a suffix of the index range.
    let mut first_sink = None;
    for i in 1..=n {
        if adjacency[i].is_empty() {
            first_sink.get_or_insert(i);
        } else if let Some(s) = first_sink {
            return Err(DagError::SinkOrderViolation { sink: s, later: i });
        }
    }
    let n_hat = first_sink.map_or(n, |s| s - 1);

    Ok(Dag {
        n,
        m: edges.len(),
        n_hat,
        adjacency,
        weights: wlists,
    })
}

/// Reverse adjacency: for each vertex, the vertices pointing into it.
///
/// Entry lists are sorted ascending by source index and carry the edge
/// weight (unit for unweighted graphs).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReverseAdjacency {
    lists: Vec<Vec<(usize, i64)>>,
}

impl ReverseAdjacency {
    /// In-edges of vertex `i` as `(source, weight)` pairs.
    pub fn into_vertex(&self, i: usize) -> &[(usize, i64)] {
        &self.lists[i]
    }

    pub fn in_degree(&self, i: usize) -> usize {
        self.lists[i].len()
    }
}

/// Builds the reverse adjacency lists of a valid [`Dag`].
pub fn build_reverse(dag: &Dag) -> ReverseAdjacency {
    let mut lists = vec![Vec::new(); dag.n() + 1];
    // Iterating sources in ascending order keeps each list sorted.
    for (u, v, w) in dag.edges() {
        lists[v].push((u, w));
    }
    ReverseAdjacency { lists }
}

/// Generates a layered DAG: `layers * width` vertices, edges only between
/// consecutive layers, each sampled independently with probability
/// `density`. Every non-last-layer vertex is forced to keep at least one
/// outgoing edge, so `n_hat = (layers - 1) * width`. Deterministic in the
/// parameters and seed.
pub fn gen_layered(
    layers: usize,
    width: usize,
    density: f64,
    weight_range: Option<(i64, i64)>,
    seed: u64,
) -> Result<Dag, DagError> {
    if layers < 2 || width < 1 {
        return Err(DagError::InvalidParams(format!(
            "need layers >= 2 and width >= 1, got layers={layers} width={width}"
        )));
    }
    if !(0.0..=1.0).contains(&density) {
        return Err(DagError::InvalidParams(format!("density {density} outside [0, 1]")));
    }
    if let Some((lo, hi)) = weight_range {
        if lo > hi {
            return Err(DagError::InvalidParams(format!("empty weight range {lo}..={hi}")));
        }
    }

    let mut rng = RandomStream::new(seed);
    let mut edges = Vec::new();
    for layer in 0..layers - 1 {
        let base = layer * width;
        let next = (layer + 1) * width;
        for u in base + 1..=base + width {
            let mut picked = Vec::new();
            for v in next + 1..=next + width {
                if rng.chance(density) {
                    picked.push(v);
                }
            }
            if picked.is_empty() {
                picked.push(next + 1 + rng.pick(width));
            }
            edges.extend(picked.into_iter().map(|v| (u, v)));
        }
    }
    let weights = weight_range.map(|(lo, hi)| {
        edges.iter().map(|_| rng.range_i64(lo, hi)).collect::<Vec<_>>()
    });
    validate_dag(layers * width, &edges, weights.as_deref())
}

/// Generates a random valid DAG with `n_hat` non-sink vertices out of `n`.
/// Each non-sink samples every later vertex as a child with probability
/// `density` and is forced to keep at least one. Used by tests and
/// benchmark sweeps.
pub fn gen_random(
    n: usize,
    n_hat: usize,
    density: f64,
    weight_range: Option<(i64, i64)>,
    seed: u64,
) -> Result<Dag, DagError> {
    if n == 0 || n_hat >= n {
        return Err(DagError::InvalidParams(format!(
            "need 0 <= n_hat < n, got n={n} n_hat={n_hat}"
        )));
    }
    if !(0.0..=1.0).contains(&density) {
        return Err(DagError::InvalidParams(format!("density {density} outside [0, 1]")));
    }
    let mut rng = RandomStream::new(seed);
    let mut edges = Vec::new();
    for u in 1..=n_hat {
        let mut picked = Vec::new();
        for v in u + 1..=n {
            if rng.chance(density) {
                picked.push(v);
            }
        }
        if picked.is_empty() {
            picked.push(u + 1 + rng.pick(n - u));
        }
        edges.extend(picked.into_iter().map(|v| (u, v)));
    }
    let weights =
        weight_range.map(|(lo, hi)| edges.iter().map(|_| rng.range_i64(lo, hi)).collect::<Vec<_>>());
    validate_dag(n, &edges, weights.as_deref())
}

/// Parses the `.dag` text format.
///
/// ```text
/// # comment
/// dag <n> <m>              (or `dag-unweighted <n> <m>`)
/// e <u> <v> <w>            (m lines; `<w>` omitted when unweighted)
/// ```
pub fn parse_dag(text: &str) -> Result<Dag, DagError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (hline, header) = lines
        .next()
        .ok_or(DagError::Parse { line: 1, msg: "missing header line".into() })?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let weighted = match fields.first() {
        Some(&"dag") => true,
        Some(&"dag-unweighted") => false,
        _ => {
            return Err(DagError::Parse {
                line: hline,
                msg: format!("expected `dag <n> <m>` or `dag-unweighted <n> <m>`, got `{header}`"),
            })
        }
    };
    if fields.len() != 3 {
        return Err(DagError::Parse {
            line: hline,
            msg: format!("header needs exactly `<n> <m>`, got `{header}`"),
        });
    }
    let n: usize = fields[1]
        .parse()
        .map_err(|_| DagError::Parse { line: hline, msg: format!("bad vertex count `{}`", fields[1]) })?;
    let m: usize = fields[2]
        .parse()
        .map_err(|_| DagError::Parse { line: hline, msg: format!("bad edge count `{}`", fields[2]) })?;

    let mut edges = Vec::with_capacity(m);
    let mut weights = if weighted { Some(Vec::with_capacity(m)) } else { None };
    for (lno, line) in lines {
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.first() != Some(&"e") {
            return Err(DagError::Parse {
                line: lno,
                msg: format!("expected edge line `e <u> <v>{}`, got `{line}`", if weighted { " <w>" } else { "" }),
            });
        }
        let want = if weighted { 4 } else { 3 };
        if fields.len() != want {
            return Err(DagError::Parse {
                line: lno,
                msg: format!("edge line has {} fields, expected {want}", fields.len()),
            });
        }
        let u: usize = fields[1]
            .parse()
            .map_err(|_| DagError::Parse { line: lno, msg: format!("bad vertex `{}`", fields[1]) })?;
        let v: usize = fields[2]
            .parse()
            .map_err(|_| DagError::Parse { line: lno, msg: format!("bad vertex `{}`", fields[2]) })?;
        edges.push((u, v));
        if let Some(w) = weights.as_mut() {
            let wv: i64 = fields[3]
                .parse()
                .map_err(|_| DagError::Parse { line: lno, msg: format!("bad weight `{}`", fields[3]) })?;
            w.push(wv);
        }
    }
    if edges.len() != m {
        return Err(DagError::Parse {
            line: hline,
            msg: format!("header declares {m} edges but {} edge lines follow", edges.len()),
        });
    }
    validate_dag(n, &edges, weights.as_deref())
}

/// Writes a [`Dag`] in the `.dag` text format.
pub fn write_dag(dag: &Dag) -> String {
    let mut out = String::new();
    let header = if dag.is_weighted() { "dag" } else { "dag-unweighted" };
    out.push_str(&format!("{header} {} {}\n", dag.n(), dag.m()));
    for (u, v, w) in dag.edges() {
        if dag.is_weighted() {
            out.push_str(&format!("e {u} {v} {w}\n"));
        } else {
            out.push_str(&format!("e {u} {v}\n"));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smallest_nontrivial_dag() {
        let dag = validate_dag(3, &[(1, 2), (1, 3), (2, 3)], None).unwrap();
        assert_eq!(dag.n(), 3);
        assert_eq!(dag.m(), 3);
        assert_eq!(dag.n_hat(), 2);
        assert_eq!(dag.sinks().collect::<Vec<_>>(), vec![3]);
        assert_eq!(dag.out_degree(1), 2);
        assert_eq!(dag.out_degree(2), 1);
        assert_eq!(dag.out_degree(3), 0);
    }

    #[test]
    fn backward_edge_rejected() {
        assert_eq!(
            validate_dag(2, &[(2, 1)], None),
            Err(DagError::EdgeNotForward { from: 2, to: 1 })
        );
    }

    #[test]
    fn self_loop_rejected() {
        assert_eq!(
            validate_dag(2, &[(1, 1)], None),
            Err(DagError::EdgeNotForward { from: 1, to: 1 })
        );
    }

    #[test]
    fn sink_order_checked_per_prefix() {
        // d = (1, 1, 1, 0): no sink before a non-sink.
        let ok = validate_dag(4, &[(1, 3), (2, 4), (3, 4)], None).unwrap();
        assert_eq!(ok.n_hat(), 3);
        // Vertex 2 is a sink but vertex 3 still has outgoing edges.
        assert_eq!(
            validate_dag(4, &[(1, 4), (3, 4)], None),
            Err(DagError::SinkOrderViolation { sink: 2, later: 3 })
        );
    }

    #[test]
    fn duplicate_and_out_of_range() {
        assert_eq!(
            validate_dag(3, &[(1, 2), (1, 2)], None),
            Err(DagError::DuplicateEdge { from: 1, to: 2 })
        );
        assert_eq!(
            validate_dag(3, &[(1, 4)], None),
            Err(DagError::IndexOutOfRange { edge: (1, 4), n: 3 })
        );
        assert_eq!(
            validate_dag(3, &[(0, 2)], None),
            Err(DagError::IndexOutOfRange { edge: (0, 2), n: 3 })
        );
    }

    #[test]
    fn reverse_lists_sorted_with_weights() {
        let dag = validate_dag(3, &[(1, 2), (1, 3), (2, 3)], Some(&[5, -1, 7])).unwrap();
        let rev = build_reverse(&dag);
        assert!(rev.into_vertex(1).is_empty());
        assert_eq!(rev.into_vertex(2), &[(1, 5)]);
        assert_eq!(rev.into_vertex(3), &[(1, -1), (2, 7)]);
    }

    #[test]
    fn reverse_of_empty_graph() {
        let dag = validate_dag(1, &[], None).unwrap();
        assert_eq!(dag.n_hat(), 0);
        let rev = build_reverse(&dag);
        assert!(rev.into_vertex(1).is_empty());
    }

    #[test]
    fn forward_reverse_round_trip() {
        for seed in 0..20 {
            let dag = gen_random(30, 18, 0.15, Some((-9, 9)), seed).unwrap();
            let rev = build_reverse(&dag);
            let mut rebuilt: Vec<(usize, usize, i64)> = (1..=dag.n())
                .flat_map(|v| rev.into_vertex(v).iter().map(move |&(u, w)| (u, v, w)))
                .collect();
            rebuilt.sort_unstable();
            let mut original: Vec<_> = dag.edges().collect();
            original.sort_unstable();
            assert_eq!(rebuilt, original);
        }
    }

    #[test]
    fn layered_path_graph() {
        let dag = gen_layered(2, 1, 1.0, None, 0).unwrap();
        assert_eq!(dag.n(), 2);
        assert_eq!(dag.m(), 1);
        assert_eq!(dag.children(1), &[2]);
    }

    #[test]
    fn layered_full_density_is_complete_bipartite() {
        let dag = gen_layered(3, 2, 1.0, None, 7).unwrap();
        assert_eq!(dag.n(), 6);
        assert_eq!(dag.m(), 8);
        assert_eq!(dag.n_hat(), 4);
    }

    #[test]
    fn generators_deterministic_under_seed() {
        let a = gen_layered(4, 5, 0.4, Some((-3, 3)), 42).unwrap();
        let b = gen_layered(4, 5, 0.4, Some((-3, 3)), 42).unwrap();
        assert_eq!(a, b);
        let c = gen_random(25, 15, 0.2, None, 9).unwrap();
        let d = gen_random(25, 15, 0.2, None, 9).unwrap();
        assert_eq!(c, d);
    }

    #[test]
    fn layered_forces_out_degree() {
        let dag = gen_layered(5, 8, 0.0, None, 3).unwrap();
        for i in 1..=dag.n_hat() {
            assert!(dag.out_degree(i) >= 1);
        }
        assert_eq!(dag.n_hat(), 32);
    }

    #[test]
    fn dag_format_round_trip() {
        let dag = gen_random(12, 7, 0.3, Some((-5, 5)), 11).unwrap();
        let text = write_dag(&dag);
        assert_eq!(parse_dag(&text).unwrap(), dag);
        let unweighted = gen_layered(3, 3, 0.5, None, 2).unwrap();
        let text = write_dag(&unweighted);
        assert!(text.starts_with("dag-unweighted 9"));
        assert_eq!(parse_dag(&text).unwrap(), unweighted);
    }

    #[test]
    fn dag_parse_errors_are_positioned() {
        let err = parse_dag("dag 2 1\ne 2 1 5\n").unwrap_err();
        assert_eq!(err, DagError::EdgeNotForward { from: 2, to: 1 });
        let err = parse_dag("# c\nnope 1 0\n").unwrap_err();
        assert!(matches!(err, DagError::Parse { line: 2, .. }));
        let err = parse_dag("dag 3 2\ne 1 2 4\n").unwrap_err();
        assert!(matches!(err, DagError::Parse { line: 1, .. }));
        let err = parse_dag("dag 3 1\ne 1 2\n").unwrap_err();
        assert!(matches!(err, DagError::Parse { line: 2, .. }));
    }
}
