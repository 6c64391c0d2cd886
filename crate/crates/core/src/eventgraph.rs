//! Event graphs, their classical vertex sets, and overlap inequalities.
//!
//! An event graph is a connected simple graph whose vertices stand for
//! states and whose edges carry two-state overlaps `r_e ∈ [0, 1]`. Vertices
//! are numbered from 1. An edge `{i, j}` is stored as `(min, max)` and edges
//! are always ordered lexicographically, which fixes the coordinate order of
//! every weight vector and every serialized output.
//!
//! The classical set `𝕍_G` collects the 0/1 edge assignments in which no
//! cycle of `G` has exactly one zero edge: if two edges of a cycle say
//! "equal" the third cannot say "different". Its convex hull `C_G` contains
//! every overlap tuple realizable by mutually commuting states.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qstate::{overlap_density, DensityOperator};

/// Largest vertex count accepted by [`enumerate_cycles`].
pub const MAX_CYCLE_VERTICES: usize = 12;
/// Largest edge count accepted by [`classical_vertices`].
pub const MAX_ASSIGNMENT_EDGES: usize = 20;
/// Slack allowed outside `[0, 1]` for edge weights.
pub const WEIGHT_SLACK: f64 = 1e-12;

/// Undirected edge between two 1-based vertices, stored as `(min, max)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge(usize, usize);

impl Edge {
    pub fn new(a: usize, b: usize) -> Result<Self> {
        if a == b {
            return Err(Error::domain(format!("loop at vertex {a}")));
        }
        if a == 0 || b == 0 {
            return Err(Error::domain("vertex indices are 1-based"));
        }
        Ok(Edge(a.min(b), a.max(b)))
    }

    pub fn low(self) -> usize {
        self.0
    }

    pub fn high(self) -> usize {
        self.1
    }

    pub fn touches(self, v: usize) -> bool {
        self.0 == v || self.1 == v
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.0, self.1)
    }
}

impl FromStr for Edge {
    type Err = Error;

    /// Parses the `"i-j"` key form used in weight documents.
    fn from_str(s: &str) -> Result<Self> {
        let (a, b) = s
            .split_once('-')
            .ok_or_else(|| Error::domain(format!("edge key {s:?} is not of the form i-j")))?;
        let parse = |x: &str| {
            x.trim()
                .parse::<usize>()
                .map_err(|_| Error::domain(format!("edge key {s:?}: {x:?} is not a vertex index")))
        };
        Edge::new(parse(a)?, parse(b)?)
    }
}

impl Serialize for Edge {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Edge {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Connected simple graph on vertices `1..=vertex_count`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EventGraph {
    vertex_count: usize,
    edges: Vec<Edge>,
}

impl EventGraph {
    pub fn new(
        vertex_count: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        if vertex_count == 0 {
            return Err(Error::domain("graph needs at least one vertex"));
        }
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            let e = Edge::new(a, b)?;
            if e.high() > vertex_count {
                return Err(Error::domain(format!(
                    "edge {e} references a vertex beyond {vertex_count}"
                )));
            }
            if !set.insert(e) {
                return Err(Error::domain(format!("duplicate edge {e}")));
            }
        }
        let graph = Self {
            vertex_count,
            edges: set.into_iter().collect(),
        };
        if !graph.is_connected() {
            return Err(Error::domain("event graphs must be connected"));
        }
        Ok(graph)
    }

    /// Cycle graph `C_n` with edges `{i, i+1}` and `{1, n}`.
    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::domain(format!("cycle graphs need n ≥ 3, got {n}")));
        }
        Self::new(n, (1..=n).map(|i| (i, i % n + 1)))
    }

    /// Complete graph `K_n`.
    pub fn complete(n: usize) -> Result<Self> {
        let edges = (1..=n).flat_map(|i| ((i + 1)..=n).map(move |j| (i, j)));
        Self::new(n, edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in lexicographic order.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn has_edge(&self, e: Edge) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    pub fn edge_index(&self, e: Edge) -> Option<usize> {
        self.edges.binary_search(&e).ok()
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.iter().filter_map(move |e| {
            if e.0 == v {
                Some(e.1)
            } else if e.1 == v {
                Some(e.0)
            } else {
                None
            }
        })
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertex_count + 1];
        for e in &self.edges {
            adj[e.0].push(e.1);
            adj[e.1].push(e.0);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    fn is_connected(&self) -> bool {
        let adj = self.adjacency();
        let mut seen = vec![false; self.vertex_count + 1];
        let mut stack = vec![1];
        seen[1] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.vertex_count
    }

    /// True when this is `K_n` on its vertex set.
    pub fn is_complete(&self) -> bool {
        let n = self.vertex_count;
        self.edges.len() == n * (n - 1) / 2
    }
}

/// Simple cycle of length at least 3.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Cycle {
    /// Vertex sequence starting at the smallest vertex, oriented so the
    /// second vertex is smaller than the last.
    pub vertices: Vec<usize>,
    /// Edge set, sorted.
    pub edges: Vec<Edge>,
}

impl Cycle {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

/// All simple cycles of `graph`, each reported once.
///
/// Depth-first search from every start vertex `s`, restricted to vertices
/// larger than `s`. Closing back to `s` with the second vertex smaller than
/// the last keeps one of the two orientations. Output is sorted by length,
/// then by vertex sequence.
pub fn enumerate_cycles(graph: &EventGraph) -> Result<Vec<Cycle>> {
    if graph.vertex_count > MAX_CYCLE_VERTICES {
        return Err(Error::Capacity {
            what: "vertex count",
            limit: MAX_CYCLE_VERTICES,
            found: graph.vertex_count,
        });
    }
    let adj = graph.adjacency();
    let mut cycles = Vec::new();
    let mut on_path = vec![false; graph.vertex_count + 1];
    for start in 1..=graph.vertex_count {
        let mut path = vec![start];
        on_path[start] = true;
        extend_path(&adj, start, &mut path, &mut on_path, &mut cycles);
        on_path[start] = false;
    }
    cycles.sort_by(|a: &Cycle, b: &Cycle| {
        a.len()
            .cmp(&b.len())
            .then_with(|| a.vertices.cmp(&b.vertices))
    });
    Ok(cycles)
}

fn extend_path(
    adj: &[Vec<usize>],
    start: usize,
    path: &mut Vec<usize>,
    on_path: &mut [bool],
    out: &mut Vec<Cycle>,
) {
    let last = *path.last().expect("path is never empty");
    for &next in &adj[last] {
        if next == start && path.len() >= 3 && path[1] < last {
            let mut edges: Vec<Edge> = path
                .windows(2)
                .map(|w| Edge::new(w[0], w[1]).expect("adjacent vertices differ"))
                .collect();
            edges.push(Edge::new(last, start).expect("adjacent vertices differ"));
            edges.sort_unstable();
            out.push(Cycle {
                vertices: path.clone(),
                edges,
            });
        } else if next > start && !on_path[next] {
            path.push(next);
            on_path[next] = true;
            extend_path(adj, start, path, on_path, out);
            on_path[next] = false;
            path.pop();
        }
    }
}

/// Real weights on the edges of a graph, in the graph's edge order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeWeights {
    weights: BTreeMap<Edge, f64>,
}

impl EdgeWeights {
    /// Weights given as a map; every value must lie in `[0, 1]` up to
    /// [`WEIGHT_SLACK`].
    pub fn new(weights: BTreeMap<Edge, f64>) -> Result<Self> {
        for (e, r) in &weights {
            if !r.is_finite() || *r < -WEIGHT_SLACK || *r > 1.0 + WEIGHT_SLACK {
                return Err(Error::domain(format!(
                    "weight of edge {e} is {r}, outside [0, 1]"
                )));
            }
        }
        Ok(Self { weights })
    }

    /// Weights for every edge of `graph`, listed in its edge order.
    pub fn for_graph(graph: &EventGraph, values: &[f64]) -> Result<Self> {
        if values.len() != graph.edge_count() {
            return Err(Error::DimensionMismatch {
                expected: graph.edge_count(),
                found: values.len(),
            });
        }
        Self::new(
            graph
                .edges()
                .iter()
                .copied()
                .zip(values.iter().copied())
                .collect(),
        )
    }

    /// Checks that exactly the edges of `graph` carry a weight.
    pub fn check_covers(&self, graph: &EventGraph) -> Result<()> {
        if let Some(e) = graph.edges().iter().find(|e| !self.weights.contains_key(e)) {
            return Err(Error::domain(format!("missing weight for edge {e}")));
        }
        if let Some(e) = self.weights.keys().find(|e| !graph.has_edge(**e)) {
            return Err(Error::domain(format!(
                "weight given for edge {e} which is not in the graph"
            )));
        }
        Ok(())
    }

    pub fn get(&self, e: Edge) -> Option<f64> {
        self.weights.get(&e).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Edge, f64)> + '_ {
        self.weights.iter().map(|(e, r)| (*e, *r))
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Values in lexicographic edge order.
    pub fn values(&self) -> Vec<f64> {
        self.weights.values().copied().collect()
    }
}

/// Linear form `Σ c_e r_e` with a classical bound `s`: `h(r) ≤ s`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearFunctional {
    coefficients: BTreeMap<Edge, f64>,
    bound: f64,
}

/// Value of a functional at a point and how far it exceeds the bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub value: f64,
    pub violation: f64,
}

impl LinearFunctional {
    pub fn new(coefficients: BTreeMap<Edge, f64>, bound: f64) -> Result<Self> {
        if !coefficients.values().any(|c| *c != 0.0) {
            return Err(Error::domain("functional has no nonzero coefficient"));
        }
        if coefficients
            .values()
            .chain([&bound])
            .any(|x| !x.is_finite())
        {
            return Err(Error::domain("functional has a non-finite coefficient"));
        }
        Ok(Self {
            coefficients,
            bound,
        })
    }

    fn from_pairs(pairs: &[((usize, usize), f64)], bound: f64) -> Self {
        let coefficients = pairs
            .iter()
            .map(|&((a, b), c)| (Edge::new(a, b).expect("valid literal edge"), c))
            .collect();
        Self::new(coefficients, bound).expect("valid literal functional")
    }

    pub fn bound(&self) -> f64 {
        self.bound
    }

    pub fn coefficients(&self) -> impl Iterator<Item = (Edge, f64)> + '_ {
        self.coefficients.iter().map(|(e, c)| (*e, *c))
    }

    pub fn coefficient(&self, e: Edge) -> f64 {
        self.coefficients.get(&e).copied().unwrap_or(0.0)
    }

    /// Vertices touched by some edge with a coefficient.
    pub fn vertices(&self) -> BTreeSet<usize> {
        self.coefficients.keys().flat_map(|e| [e.0, e.1]).collect()
    }

    /// `max_e |c_e|`.
    pub fn sup_norm(&self) -> f64 {
        self.coefficients.values().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// `Σ c_e r_e`; every edge with a coefficient needs a weight.
    pub fn value(&self, r: &EdgeWeights) -> Result<f64> {
        self.coefficients
            .iter()
            .map(|(e, c)| {
                r.get(*e)
                    .map(|w| c * w)
                    .ok_or_else(|| Error::domain(format!("missing weight for edge {e}")))
            })
            .sum()
    }
}

/// Value and violation `max(0, value − s)`.
pub fn evaluate(f: &LinearFunctional, r: &EdgeWeights) -> Result<Evaluation> {
    let value = f.value(r)?;
    Ok(Evaluation {
        value,
        violation: (value - f.bound).max(0.0),
    })
}

/// The three facet inequalities of `C_{C₃}`, one minus sign each:
/// `r₁₂ + r₁₃ − r₂₃ ≤ 1`, `r₁₂ − r₁₃ + r₂₃ ≤ 1`, `−r₁₂ + r₁₃ + r₂₃ ≤ 1`.
pub fn three_cycle_functionals() -> [LinearFunctional; 3] {
    let sign = |negated: (usize, usize)| {
        let pairs: Vec<_> = [(1, 2), (1, 3), (2, 3)]
            .into_iter()
            .map(|e| (e, if e == negated { -1.0 } else { 1.0 }))
            .collect();
        LinearFunctional::from_pairs(&pairs, 1.0)
    };
    [sign((2, 3)), sign((1, 3)), sign((1, 2))]
}

/// `−r_{e′} + Σ_{e≠e′} r_e ≤ n − 2` over `C_n`.
pub fn n_cycle_functional(n: usize, negated_edge: Edge) -> Result<LinearFunctional> {
    let graph = EventGraph::cycle(n)?;
    if !graph.has_edge(negated_edge) {
        return Err(Error::domain(format!(
            "edge {negated_edge} is not an edge of C_{n}"
        )));
    }
    cycle_functional(graph.edges(), negated_edge, n)
}

/// All `n` facet functionals of `C_n`, in edge order of the negated edge.
pub fn n_cycle_functionals(n: usize) -> Result<Vec<LinearFunctional>> {
    let graph = EventGraph::cycle(n)?;
    graph
        .edges()
        .iter()
        .map(|e| n_cycle_functional(n, *e))
        .collect()
}

fn cycle_functional(edges: &[Edge], negated: Edge, n: usize) -> Result<LinearFunctional> {
    let coefficients = edges
        .iter()
        .map(|e| (*e, if *e == negated { -1.0 } else { 1.0 }))
        .collect();
    LinearFunctional::new(coefficients, n as f64 - 2.0)
}

/// Five-state inequality on `K₅`:
/// `r₁₂ + r₁₅ + r₂₃ + r₃₄ + r₄₅ − r₁₃ − r₁₄ − r₂₄ − r₂₅ − r₃₅ ≤ 2`.
pub fn k5_functional() -> LinearFunctional {
    LinearFunctional::from_pairs(
        &[
            ((1, 2), 1.0),
            ((1, 5), 1.0),
            ((2, 3), 1.0),
            ((3, 4), 1.0),
            ((4, 5), 1.0),
            ((1, 3), -1.0),
            ((1, 4), -1.0),
            ((2, 4), -1.0),
            ((2, 5), -1.0),
            ((3, 5), -1.0),
        ],
        2.0,
    )
}

/// Every inequality this crate can name for `graph`: the cycle inequalities
/// of each simple cycle it contains (one per negated edge), plus the
/// five-state inequality when `graph` is `K₅`.
///
/// Each is valid on `C_G`: a classical vertex restricted to a cycle is a
/// classical vertex of that cycle.
pub fn named_functionals(graph: &EventGraph) -> Result<Vec<LinearFunctional>> {
    let mut out = Vec::new();
    for cycle in enumerate_cycles(graph)? {
        for negated in &cycle.edges {
            out.push(cycle_functional(&cycle.edges, *negated, cycle.len())?);
        }
    }
    if graph.vertex_count == 5 && graph.is_complete() {
        out.push(k5_functional());
    }
    Ok(out)
}

/// Bound of the noise-robust version of an inequality, `s + Σ ε_v`, with one
/// `ε_v ≥ 0` per vertex the functional touches.
pub fn robust_bound(f: &LinearFunctional, epsilons: &[f64]) -> Result<f64> {
    let involved = f.vertices().len();
    if epsilons.len() != involved {
        return Err(Error::DimensionMismatch {
            expected: involved,
            found: epsilons.len(),
        });
    }
    if let Some(eps) = epsilons.iter().find(|e| !(**e >= 0.0) || !e.is_finite()) {
        return Err(Error::domain(format!(
            "noise parameter {eps} must be a finite value ≥ 0"
        )));
    }
    Ok(f.bound + epsilons.iter().sum::<f64>())
}

/// Overlaps `r_{ij} = Tr(ρ_i ρ_j)` on every edge of `graph`.
pub fn overlaps_from_states(
    graph: &EventGraph,
    states: &BTreeMap<usize, DensityOperator>,
) -> Result<EdgeWeights> {
    let lookup = |v: usize| {
        states
            .get(&v)
            .ok_or_else(|| Error::domain(format!("no state assigned to vertex {v}")))
    };
    let mut weights = BTreeMap::new();
    for e in graph.edges() {
        weights.insert(*e, overlap_density(lookup(e.0)?, lookup(e.1)?)?);
    }
    EdgeWeights::new(weights)
}

/// Classical vertex set `𝕍_G` of a graph.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VertexSet {
    graph: EventGraph,
    assignments: Vec<Vec<u8>>,
}

impl VertexSet {
    /// Validates caller-supplied assignments against the cycle condition and
    /// drops duplicates, keeping first occurrences.
    pub fn from_assignments(graph: &EventGraph, assignments: Vec<Vec<u8>>) -> Result<Self> {
        let cycles = cycle_edge_indices(graph)?;
        let mut seen = BTreeSet::new();
        let mut unique = Vec::new();
        for a in assignments {
            if a.len() != graph.edge_count() {
                return Err(Error::DimensionMismatch {
                    expected: graph.edge_count(),
                    found: a.len(),
                });
            }
            if a.iter().any(|x| *x > 1) {
                return Err(Error::domain("assignments must be 0/1"));
            }
            if !satisfies_cycle_condition(&cycles, |k| a[k] == 0) {
                return Err(Error::domain(format!(
                    "assignment {a:?} has a cycle with exactly one zero edge"
                )));
            }
            if seen.insert(a.clone()) {
                unique.push(a);
            }
        }
        if unique.is_empty() {
            return Err(Error::domain("vertex set is empty"));
        }
        Ok(Self {
            graph: graph.clone(),
            assignments: unique,
        })
    }

    pub fn graph(&self) -> &EventGraph {
        &self.graph
    }

    /// Assignments as 0/1 vectors in the graph's edge order.
    pub fn assignments(&self) -> &[Vec<u8>] {
        &self.assignments
    }

    pub fn len(&self) -> usize {
        self.assignments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignments.is_empty()
    }

    /// The `k`-th vertex as edge weights.
    pub fn weights(&self, k: usize) -> EdgeWeights {
        let values: Vec<f64> = self.assignments[k].iter().map(|x| f64::from(*x)).collect();
        EdgeWeights::for_graph(&self.graph, &values).expect("0/1 weights are valid")
    }
}

fn cycle_edge_indices(graph: &EventGraph) -> Result<Vec<Vec<usize>>> {
    Ok(enumerate_cycles(graph)?
        .into_iter()
        .map(|c| {
            c.edges
                .iter()
                .map(|e| {
                    graph
                        .edge_index(*e)
                        .expect("cycle edges belong to the graph")
                })
                .collect()
        })
        .collect())
}

fn satisfies_cycle_condition(cycles: &[Vec<usize>], is_zero: impl Fn(usize) -> bool) -> bool {
    cycles
        .iter()
        .all(|c| c.iter().filter(|&&k| is_zero(k)).count() != 1)
}

/// Enumerates `𝕍_G` by filtering all `2^|E|` assignments. Assignments are
/// listed in increasing binary order with the first edge as most significant
/// bit.
pub fn classical_vertices(graph: &EventGraph) -> Result<VertexSet> {
    let m = graph.edge_count();
    if m > MAX_ASSIGNMENT_EDGES {
        return Err(Error::Capacity {
            what: "edge count",
            limit: MAX_ASSIGNMENT_EDGES,
            found: m,
        });
    }
    let cycles = cycle_edge_indices(graph)?;
    let bit = |mask: u32, k: usize| (mask >> (m - 1 - k)) & 1;
    let assignments = (0u32..(1u32 << m))
        .filter(|&mask| satisfies_cycle_condition(&cycles, |k| bit(mask, k) == 0))
        .map(|mask| (0..m).map(|k| bit(mask, k) as u8).collect())
        .collect();
    Ok(VertexSet {
        graph: graph.clone(),
        assignments,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::PureState;
    use num_complex::Complex64;
    use std::collections::HashSet;

    fn e(a: usize, b: usize) -> Edge {
        Edge::new(a, b).unwrap()
    }

    #[test]
    fn graph_validation() {
        assert!(EventGraph::new(3, [(1, 1)]).is_err());
        assert!(EventGraph::new(3, [(1, 2), (2, 1), (2, 3)]).is_err());
        assert!(EventGraph::new(3, [(1, 4)]).is_err());
        assert!(
            EventGraph::new(4, [(1, 2), (3, 4)]).is_err(),
            "disconnected"
        );
        assert!(EventGraph::new(1, []).is_ok());
        let g = EventGraph::new(3, [(3, 1), (2, 1), (3, 2)]).unwrap();
        assert_eq!(g.edges(), &[e(1, 2), e(1, 3), e(2, 3)]);
    }

    #[test]
    fn edge_key_round_trip() {
        assert_eq!("2-5".parse::<Edge>().unwrap(), e(2, 5));
        assert_eq!("5-2".parse::<Edge>().unwrap(), e(2, 5));
        assert!("3".parse::<Edge>().is_err());
        assert!("a-b".parse::<Edge>().is_err());
        assert_eq!(e(4, 1).to_string(), "1-4");
    }

    /// Independent oracle: every cyclic vertex sequence over every vertex
    /// subset, canonicalized and deduplicated.
    fn brute_force_cycles(g: &EventGraph) -> HashSet<Vec<Edge>> {
        fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
            if items.len() <= 1 {
                return vec![items.to_vec()];
            }
            let mut out = Vec::new();
            for i in 0..items.len() {
                let mut rest = items.to_vec();
                let x = rest.remove(i);
                for mut p in permutations(&rest) {
                    p.insert(0, x);
                    out.push(p);
                }
            }
            out
        }
        let n = g.vertex_count();
        let mut found = HashSet::new();
        for mask in 0u32..(1 << n) {
            let subset: Vec<usize> = (0..n)
                .filter(|k| mask >> k & 1 == 1)
                .map(|k| k + 1)
                .collect();
            if subset.len() < 3 {
                continue;
            }
            for perm in permutations(&subset) {
                let edges: Option<Vec<Edge>> = (0..perm.len())
                    .map(|i| {
                        let ed = e(perm[i], perm[(i + 1) % perm.len()]);
                        g.has_edge(ed).then_some(ed)
                    })
                    .collect();
                if let Some(mut edges) = edges {
                    edges.sort();
                    found.insert(edges);
                }
            }
        }
        found
    }

    #[test]
    fn cycle_enumeration_examples() {
        let c3 = EventGraph::cycle(3).unwrap();
        let cycles = enumerate_cycles(&c3).unwrap();
        assert_eq!(cycles.len(), 1);
        assert_eq!(cycles[0].edges, c3.edges());
        for n in 4..=9 {
            let cycles = enumerate_cycles(&EventGraph::cycle(n).unwrap()).unwrap();
            assert_eq!(cycles.len(), 1);
            assert_eq!(cycles[0].len(), n);
        }
        let k5 = EventGraph::complete(5).unwrap();
        let cycles = enumerate_cycles(&k5).unwrap();
        let by_len = |l| cycles.iter().filter(|c| c.len() == l).count();
        assert_eq!(
            (cycles.len(), by_len(3), by_len(4), by_len(5)),
            (37, 10, 15, 12)
        );
    }

    #[test]
    fn cycle_enumeration_matches_brute_force() {
        let graphs = [
            EventGraph::complete(5).unwrap(),
            EventGraph::complete(6).unwrap(),
            EventGraph::new(5, [(1, 2), (2, 3), (3, 4), (4, 1), (2, 5), (5, 3), (1, 3)]).unwrap(),
            EventGraph::new(6, [(1, 2), (2, 3), (3, 1), (3, 4), (4, 5), (5, 6), (6, 4)]).unwrap(),
        ];
        for g in &graphs {
            let fast: Vec<Vec<Edge>> = enumerate_cycles(g)
                .unwrap()
                .into_iter()
                .map(|c| c.edges)
                .collect();
            let unique: HashSet<_> = fast.iter().cloned().collect();
            assert_eq!(unique.len(), fast.len(), "each cycle once");
            assert_eq!(unique, brute_force_cycles(g));
        }
    }

    #[test]
    fn capacity_guards() {
        let big = EventGraph::cycle(13).unwrap();
        assert!(matches!(
            enumerate_cycles(&big),
            Err(Error::Capacity { .. })
        ));
        let dense = EventGraph::complete(7).unwrap();
        assert!(matches!(
            classical_vertices(&dense),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn classical_vertices_of_c3() {
        let v = classical_vertices(&EventGraph::cycle(3).unwrap()).unwrap();
        let got: BTreeSet<Vec<u8>> = v.assignments().iter().cloned().collect();
        let expected: BTreeSet<Vec<u8>> = [[1, 1, 1], [0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]]
            .iter()
            .map(|a| a.to_vec())
            .collect();
        assert_eq!(got, expected);
    }

    #[test]
    fn classical_vertices_small_graphs() {
        let c4 = classical_vertices(&EventGraph::cycle(4).unwrap()).unwrap();
        assert_eq!(c4.len(), 12);
        assert!(c4
            .assignments()
            .iter()
            .all(|a| a.iter().filter(|x| **x == 0).count() != 1));
        let edge = classical_vertices(&EventGraph::new(2, [(1, 2)]).unwrap()).unwrap();
        assert_eq!(edge.assignments(), &[vec![0], vec![1]]);
    }

    #[test]
    fn from_assignments_validates_and_dedups() {
        let c3 = EventGraph::cycle(3).unwrap();
        assert!(VertexSet::from_assignments(&c3, vec![vec![1, 1, 0]]).is_err());
        assert!(VertexSet::from_assignments(&c3, vec![vec![1, 1]]).is_err());
        let v = VertexSet::from_assignments(&c3, vec![vec![1, 1, 1], vec![0, 0, 0], vec![1, 1, 1]])
            .unwrap();
        assert_eq!(v.len(), 2);
    }

    #[test]
    fn three_cycle_examples() {
        let c3 = EventGraph::cycle(3).unwrap();
        let w = |a: f64, b: f64, c: f64| EdgeWeights::for_graph(&c3, &[a, b, c]).unwrap();
        let fs = three_cycle_functionals();
        assert_eq!(evaluate(&fs[0], &w(1.0, 1.0, 0.0)).unwrap().value, 2.0);
        for f in &fs {
            assert_eq!(f.coefficients().filter(|(_, c)| *c < 0.0).count(), 1);
            assert_eq!(evaluate(f, &w(1.0, 1.0, 1.0)).unwrap().value, 1.0);
            assert_eq!(evaluate(f, &w(0.0, 0.0, 0.0)).unwrap().value, 0.0);
        }
        let half = evaluate(&fs[0], &w(0.5, 0.5, 0.5)).unwrap();
        assert_eq!((half.value, half.violation), (0.5, 0.0));
    }

    #[test]
    fn n_cycle_examples() {
        let fs3: Vec<_> = three_cycle_functionals().into_iter().collect();
        for f in n_cycle_functionals(3).unwrap() {
            assert!(fs3.contains(&f));
        }
        let c4 = EventGraph::cycle(4).unwrap();
        // C4 edges: 1-2, 1-4, 2-3, 3-4; negate 1-4 and zero it
        let f = n_cycle_functional(4, e(1, 4)).unwrap();
        let r = EdgeWeights::for_graph(&c4, &[1.0, 0.0, 1.0, 1.0]).unwrap();
        let ev = evaluate(&f, &r).unwrap();
        assert_eq!((ev.value, ev.violation), (3.0, 1.0));
        let c5 = EventGraph::cycle(5).unwrap();
        let ones = EdgeWeights::for_graph(&c5, &[1.0; 5]).unwrap();
        let f5 = n_cycle_functional(5, e(1, 2)).unwrap();
        assert_eq!(
            evaluate(&f5, &ones).unwrap(),
            Evaluation {
                value: 3.0,
                violation: 0.0
            }
        );
        assert!(n_cycle_functional(5, e(1, 3)).is_err());
        assert!(n_cycle_functional(2, e(1, 2)).is_err());
    }

    fn equator(phase: f64) -> PureState {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        PureState::qubit(Complex64::from_polar(h, phase), Complex64::new(0.0, h)).unwrap()
    }

    #[test]
    fn k5_examples() {
        let k5 = EventGraph::complete(5).unwrap();
        let f = k5_functional();
        let ones = EdgeWeights::for_graph(&k5, &[1.0; 10]).unwrap();
        assert_eq!(evaluate(&f, &ones).unwrap().value, 0.0);

        let states: BTreeMap<usize, DensityOperator> = (0..5)
            .map(|k| {
                (
                    k + 1,
                    equator(2.0 * std::f64::consts::PI * k as f64 / 5.0).projector(),
                )
            })
            .collect();
        let r = overlaps_from_states(&k5, &states).unwrap();
        let s5 = 5f64.sqrt();
        for (edge, w) in r.iter() {
            let adjacent = f.coefficient(edge) > 0.0;
            let expected = if adjacent {
                (3.0 + s5) / 8.0
            } else {
                (3.0 - s5) / 8.0
            };
            assert!((w - expected).abs() < 1e-15, "edge {edge}");
        }
        let ev = evaluate(&f, &r).unwrap();
        assert!((ev.value - 5.0 * s5 / 4.0).abs() < 1e-12);
        assert!((ev.violation - (5.0 * s5 / 4.0 - 2.0)).abs() < 1e-12);
    }

    #[test]
    fn evaluate_requires_weights() {
        let c3 = EventGraph::cycle(3).unwrap();
        let partial = EdgeWeights::new([(e(1, 2), 0.5)].into_iter().collect()).unwrap();
        assert!(evaluate(&three_cycle_functionals()[0], &partial).is_err());
        assert!(partial.check_covers(&c3).is_err());
        assert!(EdgeWeights::for_graph(&c3, &[0.5, 1.2, 0.0]).is_err());
        assert!(EdgeWeights::for_graph(&c3, &[0.5, 1.0 + 1e-13, -1e-13]).is_ok());
    }

    #[test]
    fn robust_bound_examples() {
        let f3 = &three_cycle_functionals()[0];
        assert_eq!(robust_bound(f3, &[0.0; 3]).unwrap(), 1.0);
        assert!((robust_bound(f3, &[0.1; 3]).unwrap() - 1.3).abs() < 1e-15);
        let f5 = n_cycle_functional(5, e(1, 5)).unwrap();
        assert!((robust_bound(&f5, &[0.01; 5]).unwrap() - 3.05).abs() < 1e-15);
        assert!(robust_bound(f3, &[0.1, -0.1, 0.0]).is_err());
        assert!(robust_bound(f3, &[0.1; 2]).is_err());
    }

    #[test]
    fn overlaps_from_states_examples() {
        let c3 = EventGraph::cycle(3).unwrap();
        let same: BTreeMap<_, _> = (1..=3)
            .map(|v| (v, PureState::plus().projector()))
            .collect();
        assert!(overlaps_from_states(&c3, &same)
            .unwrap()
            .values()
            .iter()
            .all(|r| (r - 1.0).abs() < 1e-15));

        let states: BTreeMap<_, _> = [
            (1, PureState::zero().projector()),
            (2, PureState::one().projector()),
            (3, PureState::plus().projector()),
        ]
        .into_iter()
        .collect();
        let r = overlaps_from_states(&c3, &states).unwrap();
        let expected = [0.0, 0.5, 0.5];
        for (got, want) in r.values().iter().zip(expected) {
            assert!((got - want).abs() < 1e-15);
        }
        let mut missing = states.clone();
        missing.remove(&2);
        assert!(overlaps_from_states(&c3, &missing).is_err());
    }

    #[test]
    fn classical_vertices_satisfy_named_functionals() {
        for g in [
            EventGraph::cycle(3).unwrap(),
            EventGraph::cycle(4).unwrap(),
            EventGraph::cycle(5).unwrap(),
            EventGraph::complete(4).unwrap(),
            EventGraph::complete(5).unwrap(),
        ] {
            let verts = classical_vertices(&g).unwrap();
            let fs = named_functionals(&g).unwrap();
            for k in 0..verts.len() {
                let r = verts.weights(k);
                for f in &fs {
                    assert_eq!(evaluate(f, &r).unwrap().violation, 0.0);
                }
            }
        }
    }
}
