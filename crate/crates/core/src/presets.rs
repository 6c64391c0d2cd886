//! Named scans behind the figures: sequential-setting slices, general-input
//! regions, and parallel-preparation searches.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, FRAC_PI_6, PI, TAU};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::eventgraph::{evaluate, k5_functional, overlaps_from_states, Evaluation, EventGraph};
use crate::optics::{h1_general, h_functional, prepare, TripleFunctional};
use crate::qstate::{overlap_pure, DensityOperator, PureState};
use crate::scan::{scan_grid, Axis, ScanResult};

/// Parameters of a sequential `h` scan over `(θ₁, φ₁)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HScanSpec {
    pub theta1: Axis,
    pub phi1: Axis,
    /// First-stage angles `(θ₀, φ₀)` of a general input; `None` means `|0⟩`.
    pub input: Option<(f64, f64)>,
}

impl HScanSpec {
    /// The full sequential domain `[0, π] × [0, 2π]`.
    pub fn full(step: f64) -> Result<Self> {
        Ok(Self {
            theta1: Axis::new("theta1", 0.0, PI, step)?,
            phi1: Axis::new("phi1", 0.0, TAU, step)?,
            input: None,
        })
    }

    pub fn value(&self, theta1: f64, phi1: f64) -> f64 {
        match self.input {
            None => h_functional(theta1, phi1),
            Some((theta0, phi0)) => h1_general(theta0, phi0, theta1, phi1),
        }
    }

    /// Tabulates `h` against the noncontextual bound 1. With a general
    /// input the rows also carry `θ₀, φ₀`.
    pub fn run(&self) -> ScanResult {
        let mut result = scan_grid(&self.theta1, &self.phi1, 1.0, |t, p| self.value(t, p));
        if let Some((theta0, phi0)) = self.input {
            result
                .parameters
                .extend(["theta0".to_string(), "phi0".to_string()]);
            for row in &mut result.rows {
                row.params.extend([theta0, phi0]);
            }
        }
        result
    }
}

/// Named `(θ₁, φ₁)` scans.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanPreset {
    /// Symmetric first beam-splitter, `θ₁ = π/4`, `φ₁ ∈ [0, 2π]`.
    Fig4Symmetric,
    /// The optimal line `cos²θ₁ = 3/4`, `φ₁ ∈ [0, 2π]`.
    Fig4Max,
    /// General input `(θ₀, φ₀) = (π/4, π/2 + π/150)` over
    /// `[0, π] × [0.05, π − 0.09]`.
    Fig5c,
}

/// First-stage angles of the `fig5c` preset.
pub const FIG5C_INPUT: (f64, f64) = (FRAC_PI_4, FRAC_PI_2 + PI / 150.0);

impl ScanPreset {
    pub const ALL: [ScanPreset; 3] = [Self::Fig4Symmetric, Self::Fig4Max, Self::Fig5c];

    pub fn name(self) -> &'static str {
        match self {
            Self::Fig4Symmetric => "fig4-symmetric",
            Self::Fig4Max => "fig4-max",
            Self::Fig5c => "fig5c",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|p| p.name() == name)
            .ok_or_else(|| Error::domain(format!("unknown scan preset {name:?}")))
    }

    pub fn default_step(self) -> f64 {
        match self {
            Self::Fig4Symmetric | Self::Fig4Max => 1e-3,
            Self::Fig5c => 0.01,
        }
    }

    pub fn spec(self, step: Option<f64>) -> Result<HScanSpec> {
        let step = step.unwrap_or(self.default_step());
        Ok(match self {
            Self::Fig4Symmetric => HScanSpec {
                theta1: Axis::fixed("theta1", FRAC_PI_4)?,
                phi1: Axis::new("phi1", 0.0, TAU, step)?,
                input: None,
            },
            Self::Fig4Max => HScanSpec {
                theta1: Axis::fixed("theta1", FRAC_PI_6)?,
                phi1: Axis::new("phi1", 0.0, TAU, step)?,
                input: None,
            },
            Self::Fig5c => HScanSpec {
                theta1: Axis::new("theta1", 0.0, PI, step)?,
                phi1: Axis::new("phi1", 0.05, PI - 0.09, step)?,
                input: Some(FIG5C_INPUT),
            },
        })
    }
}

/// Equator state `ψ(π/4, φ)`.
pub fn equator_state(phi: f64) -> PureState {
    prepare(FRAC_PI_4, phi)
}

/// Best of the three 3-cycle functionals on
/// `{ψ(π/4, φ₁), ψ(π/3, φ₂), ψ(π, 2π)}`.
pub fn fig3b_value(phi1: f64, phi2: f64) -> f64 {
    let states = [
        prepare(FRAC_PI_4, phi1),
        prepare(FRAC_PI_3, phi2),
        prepare(PI, TAU),
    ];
    let o = |i: usize, j: usize| overlap_pure(&states[i], &states[j]).expect("qubits");
    let r = (o(0, 1), o(0, 2), o(1, 2));
    TripleFunctional::ALL
        .into_iter()
        .map(|f| f.apply(r))
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Phases `(φ₁, φ₄, φ₅)` held fixed in `fig3c`. The source names one fixed
/// phase only as "φ = π/3"; it is assigned to `φ₅` here.
pub const FIG3C_FIXED: (f64, f64, f64) = (0.0, 4.0 * PI / 5.0, FRAC_PI_3);

/// Five-state functional on equator states with the given phases.
pub fn k5_on_equator(phases: [f64; 5]) -> Evaluation {
    let graph = EventGraph::complete(5).expect("K5");
    let states: BTreeMap<usize, DensityOperator> = phases
        .iter()
        .enumerate()
        .map(|(k, phi)| (k + 1, equator_state(*phi).projector()))
        .collect();
    let r = overlaps_from_states(&graph, &states).expect("all vertices assigned");
    evaluate(&k5_functional(), &r).expect("weights cover K5")
}

pub fn fig3c_value(phi2: f64, phi3: f64) -> f64 {
    let (phi1, phi4, phi5) = FIG3C_FIXED;
    k5_on_equator([phi1, phi2, phi3, phi4, phi5]).value
}

/// Phases `2πk/5`, `k = 0..5`.
pub fn k5_equator_phases() -> [f64; 5] {
    std::array::from_fn(|k| TAU * k as f64 / 5.0)
}

/// Parallel-preparation presets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParallelPreset {
    Fig3b,
    Fig3c,
    K5Equator,
}

impl ParallelPreset {
    pub const ALL: [ParallelPreset; 3] = [Self::Fig3b, Self::Fig3c, Self::K5Equator];

    pub fn name(self) -> &'static str {
        match self {
            Self::Fig3b => "fig3b",
            Self::Fig3c => "fig3c",
            Self::K5Equator => "k5-equator",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|p| p.name() == name)
            .ok_or_else(|| Error::domain(format!("unknown parallel preset {name:?}")))
    }

    pub fn bound(self) -> f64 {
        match self {
            Self::Fig3b => 1.0,
            Self::Fig3c | Self::K5Equator => 2.0,
        }
    }

    /// Runs the preset; `step` (default 0.01) applies to the scanned phases.
    pub fn run(self, step: Option<f64>) -> Result<ScanResult> {
        let step = step.unwrap_or(0.01);
        match self {
            Self::Fig3b => {
                let a = Axis::new("phi1", 0.0, TAU, step)?;
                let b = Axis::new("phi2", 0.0, TAU, step)?;
                Ok(scan_grid(&a, &b, self.bound(), fig3b_value))
            }
            Self::Fig3c => {
                let a = Axis::new("phi2", 0.0, TAU, step)?;
                let b = Axis::new("phi3", 0.0, TAU, step)?;
                Ok(scan_grid(&a, &b, self.bound(), fig3c_value))
            }
            Self::K5Equator => {
                let phases = k5_equator_phases();
                let mut result = scan_grid(
                    &Axis::fixed("phi2", phases[1])?,
                    &Axis::fixed("phi3", phases[2])?,
                    self.bound(),
                    |p2, p3| k5_on_equator([phases[0], p2, p3, phases[3], phases[4]]).value,
                );
                result.parameters = (1..=5).map(|k| format!("phi{k}")).collect();
                result.rows[0].params = phases.to_vec();
                result.summary.argmax = phases.to_vec();
                Ok(result)
            }
        }
    }
}
