//! Prepare-and-measure scenarios built from event graphs.
//!
//! Every graph vertex `v` gets a preparation `P_v`, a binary measurement
//! `M_v` and orthogonal preparations `P_v⊥`. Every edge `e = {v, w}` gets
//! one equivalence `½P_v + ½P_v⊥ ≃ ½P_w + ½P_w⊥`. Orthogonal preparations
//! come either one per (vertex, edge) pair or merged into one per vertex.
//!
//! Ontological models are not represented; only the norm bounds they imply
//! are computed ([`epistemic_bound`], [`confusability_interval`]).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eventgraph::{Edge, EdgeWeights, EventGraph};
use crate::optics::beam_splitter;
use crate::qstate::{overlap_pure, DensityOperator, PureState, EXACT_TOL};

/// How orthogonal preparation labels are allocated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PerpLabels {
    /// `P_v_perp_e` for every vertex `v` and every edge `e`.
    PerEdge,
    /// A single `P_v_perp` per vertex.
    Merged,
}

/// `½·first + ½·second ≃ ½·third + ½·fourth`, attached to an edge.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Equivalence {
    pub edge: Edge,
    pub left: [String; 2],
    pub right: [String; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrepareMeasureScenario {
    pub perp_labels: PerpLabels,
    pub preparations: Vec<String>,
    pub measurements: Vec<String>,
    pub outcomes: usize,
    pub equivalences: Vec<Equivalence>,
    /// Noise parameter per vertex, keyed by vertex index.
    pub epsilons: BTreeMap<usize, f64>,
}

pub fn preparation_label(v: usize) -> String {
    format!("P_{v}")
}

pub fn measurement_label(v: usize) -> String {
    format!("M_{v}")
}

pub fn perp_label(v: usize, edge: Option<Edge>, mode: PerpLabels) -> String {
    match (mode, edge) {
        (PerpLabels::PerEdge, Some(e)) => format!("P_{v}_perp_{e}"),
        _ => format!("P_{v}_perp"),
    }
}

/// Builds the scenario for `graph`, with one `ε_v ≥ 0` per vertex.
pub fn build_lsss(
    graph: &EventGraph,
    epsilons: &[f64],
    mode: PerpLabels,
) -> Result<PrepareMeasureScenario> {
    let n = graph.vertex_count();
    if epsilons.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: epsilons.len(),
        });
    }
    if let Some(eps) = epsilons.iter().find(|e| !(**e >= 0.0) || !e.is_finite()) {
        return Err(Error::domain(format!(
            "noise parameter {eps} must be a finite value ≥ 0"
        )));
    }
    let mut preparations: Vec<String> = (1..=n).map(preparation_label).collect();
    for v in 1..=n {
        match mode {
            PerpLabels::PerEdge => {
                preparations.extend(graph.edges().iter().map(|e| perp_label(v, Some(*e), mode)));
            }
            PerpLabels::Merged => preparations.push(perp_label(v, None, mode)),
        }
    }
    let equivalences = graph
        .edges()
        .iter()
        .map(|e| {
            let side = |v| [preparation_label(v), perp_label(v, Some(*e), mode)];
            Equivalence {
                edge: *e,
                left: side(e.low()),
                right: side(e.high()),
            }
        })
        .collect();
    Ok(PrepareMeasureScenario {
        perp_labels: mode,
        preparations,
        measurements: (1..=n).map(measurement_label).collect(),
        outcomes: 2,
        equivalences,
        epsilons: (1..=n).zip(epsilons.iter().copied()).collect(),
    })
}

impl PrepareMeasureScenario {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::domain(format!("scenario document: {e}")))
    }

    /// Qubit realization: `P_v ↦ ψ_v` and every orthogonal label of `v` to
    /// the orthogonal complement of `ψ_v`. `states[k]` belongs to vertex
    /// `k + 1`.
    pub fn qubit_realization(
        &self,
        states: &[PureState],
    ) -> Result<BTreeMap<String, DensityOperator>> {
        let n = self.measurements.len();
        if states.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: states.len(),
            });
        }
        let mut out = BTreeMap::new();
        for (k, psi) in states.iter().enumerate() {
            let v = k + 1;
            let perp = psi.orthogonal_complement()?.projector();
            let own = preparation_label(v);
            let prefix = format!("{own}_perp");
            for label in &self.preparations {
                if label == &own {
                    out.insert(label.clone(), psi.projector());
                } else if label.starts_with(&prefix) {
                    out.insert(label.clone(), perp.clone());
                }
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquivalenceCheck {
    pub edge: Edge,
    /// Largest entrywise difference between the two mixtures.
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquivalenceReport {
    pub holds: bool,
    pub checks: Vec<EquivalenceCheck>,
    pub max_deviation: f64,
    /// Largest entrywise distance of any mixture from `𝟙/d`.
    pub max_deviation_from_maximally_mixed: f64,
}

/// Checks every equivalence of `scenario` on concrete states, entrywise
/// within [`EXACT_TOL`].
pub fn verify_operational_equivalences(
    scenario: &PrepareMeasureScenario,
    states: &BTreeMap<String, DensityOperator>,
) -> Result<EquivalenceReport> {
    let lookup = |label: &String| {
        states
            .get(label)
            .ok_or_else(|| Error::domain(format!("no state supplied for {label}")))
    };
    let mix = |pair: &[String; 2]| -> Result<DensityOperator> {
        DensityOperator::mixture(&[(0.5, lookup(&pair[0])?), (0.5, lookup(&pair[1])?)])
    };
    let mut checks = Vec::with_capacity(scenario.equivalences.len());
    let mut from_mixed = 0.0f64;
    for eq in &scenario.equivalences {
        let left = mix(&eq.left)?;
        let right = mix(&eq.right)?;
        let mixed = DensityOperator::maximally_mixed(left.dim())?;
        from_mixed = from_mixed
            .max(left.max_abs_diff(&mixed)?)
            .max(right.max_abs_diff(&mixed)?);
        checks.push(EquivalenceCheck {
            edge: eq.edge,
            deviation: left.max_abs_diff(&right)?,
        });
    }
    let max_deviation = checks.iter().fold(0.0f64, |m, c| m.max(c.deviation));
    Ok(EquivalenceReport {
        holds: max_deviation <= EXACT_TOL,
        checks,
        max_deviation,
        max_deviation_from_maximally_mixed: from_mixed,
    })
}

/// Confusabilities `p(0|M_i, P_j)` of an ideal quantum realization.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfusabilityTable {
    entries: Vec<Vec<f64>>,
    epsilons: Vec<f64>,
}

impl ConfusabilityTable {
    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i][j]
    }

    pub fn entries(&self) -> &[Vec<f64>] {
        &self.entries
    }

    pub fn epsilons(&self) -> &[f64] {
        &self.epsilons
    }

    /// Reads off the edge weights `r_{ij}` of `graph`, where vertex `v`
    /// is row `v − 1`.
    pub fn edge_weights(&self, graph: &EventGraph) -> Result<EdgeWeights> {
        if graph.vertex_count() != self.size() {
            return Err(Error::DimensionMismatch {
                expected: self.size(),
                found: graph.vertex_count(),
            });
        }
        let values: Vec<f64> = graph
            .edges()
            .iter()
            .map(|e| self.entries[e.low() - 1][e.high() - 1])
            .collect();
        EdgeWeights::for_graph(graph, &values)
    }
}

/// Table of pairwise overlaps, one `ε_i ≥ 0` per state.
pub fn confusability_table(states: &[PureState], epsilons: &[f64]) -> Result<ConfusabilityTable> {
    if epsilons.len() != states.len() {
        return Err(Error::DimensionMismatch {
            expected: states.len(),
            found: epsilons.len(),
        });
    }
    if let Some(eps) = epsilons.iter().find(|e| !(**e >= 0.0) || !e.is_finite()) {
        return Err(Error::domain(format!(
            "noise parameter {eps} must be a finite value ≥ 0"
        )));
    }
    let n = states.len();
    let mut entries = vec![vec![1.0; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let r = overlap_pure(&states[i], &states[j])?;
            entries[i][j] = r;
            entries[j][i] = r;
        }
    }
    for (i, eps) in epsilons.iter().enumerate() {
        if entries[i][i] < 1.0 - eps {
            return Err(Error::Numeric(format!("diagonal entry {i} below 1 − ε")));
        }
    }
    Ok(ConfusabilityTable {
        entries,
        epsilons: epsilons.to_vec(),
    })
}

/// `{|0⟩, U_θ|0⟩, U_θ†|0⟩}`: the reference, probe and dagger-probe states
/// of the interrogation task.
pub fn interrogation_triple(theta: f64) -> [PureState; 3] {
    let u = beam_splitter(theta);
    let zero = PureState::zero();
    let probe = u.apply(&zero).expect("qubit");
    let dagger = u.dagger().apply(&zero).expect("qubit");
    [zero, probe, dagger]
}

/// Closed interval of reals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

fn check_noise(eps: f64) -> Result<()> {
    if !(eps >= 0.0) || !eps.is_finite() {
        return Err(Error::domain(format!(
            "noise parameter {eps} must be a finite value ≥ 0"
        )));
    }
    Ok(())
}

/// Range of `‖μ_v − μ_w‖₁` allowed for confusability `r` and noise `ε`:
/// `[2(1−r) − 2ε, 2(1−r) + 2ε]` intersected with `[0, 2]`.
pub fn epistemic_bound(r: f64, epsilon: f64) -> Result<Interval> {
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::domain(format!("confusability {r} outside [0, 1]")));
    }
    check_noise(epsilon)?;
    let centre = 2.0 * (1.0 - r);
    Ok(Interval {
        lo: (centre - 2.0 * epsilon).clamp(0.0, 2.0),
        hi: (centre + 2.0 * epsilon).clamp(0.0, 2.0),
    })
}

/// The same bound solved for the confusability: given `d = ‖μ_v − μ_w‖₁`,
/// `r ∈ [1 − d/2 − ε, 1 − d/2 + ε]`.
pub fn confusability_interval(distance: f64, epsilon: f64) -> Result<Interval> {
    if !(0.0..=2.0).contains(&distance) {
        return Err(Error::domain(format!(
            "epistemic distance {distance} outside [0, 2]"
        )));
    }
    check_noise(epsilon)?;
    let centre = 1.0 - distance / 2.0;
    Ok(Interval {
        lo: centre - epsilon,
        hi: centre + epsilon,
    })
}

/// Largest value of `r₁₂ + … + r_{(n−1)n} − r_{n1}` compatible with the
/// epistemic distances `d_i = ‖μ_i − μ_{i+1}‖₁` along the path.
///
/// Each path confusability is taken at the top of its interval and the
/// closing one at the bottom of its interval for the largest distance the
/// triangle inequality allows, `d_{1n} = Σ d_i`. `epsilons` has one entry
/// per cycle vertex.
pub fn triangle_chain_bound(path_distances: &[f64], epsilons: &[f64]) -> Result<f64> {
    let n = path_distances.len() + 1;
    if n < 3 {
        return Err(Error::domain("a cycle needs at least three vertices"));
    }
    if epsilons.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: epsilons.len(),
        });
    }
    let mut total = 0.0;
    for (d, eps) in path_distances.iter().zip(epsilons) {
        total += confusability_interval(*d, *eps)?.hi;
    }
    let closing = path_distances.iter().sum::<f64>();
    check_noise(epsilons[n - 1])?;
    // The closing distance may exceed 2 in this bound; it is not clamped.
    total -= 1.0 - closing / 2.0 - epsilons[n - 1];
    Ok(total)
}
