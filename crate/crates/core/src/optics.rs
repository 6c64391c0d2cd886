//! Mach-Zehnder interferometer as a prepare-and-measure device.
//!
//! Path encoding: mode a is `|0⟩`, mode b is `|1⟩`. Beam-splitters carry a
//! fixed `π/2` phase between reflected and transmitted amplitudes,
//!
//! ```text
//! U_θ = [[cos θ, i sin θ], [i sin θ, cos θ]],
//! ```
//!
//! and the main-text phase-shifter acts on mode a, `U_φ = diag(e^{iφ}, 1)`,
//! so that `U_φ U_θ |0⟩ = e^{iφ} cos θ |0⟩ + i sin θ |1⟩`.
//!
//! The double-interferometer construction (general input states) places
//! its phases on mode b instead. Both conventions are kept as separate
//! functions and never mixed.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::qstate::{overlap_pure, PureState, Unitary};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn expi(phi: f64) -> Complex64 {
    Complex64::from_polar(1.0, phi)
}

/// Beam-splitter `U_θ` with tunable transmissivity.
///
/// # Panics
///
/// If `theta` is not finite.
pub fn beam_splitter(theta: f64) -> Unitary {
    Unitary::qubit_unchecked(beam_splitter_entries(theta))
}

fn beam_splitter_entries(theta: f64) -> [[Complex64; 2]; 2] {
    let (s, c) = theta.sin_cos();
    let is = Complex64::new(0.0, s);
    [[Complex64::new(c, 0.0), is], [is, Complex64::new(c, 0.0)]]
}

fn phase_shifter_entries(phi: f64) -> [[Complex64; 2]; 2] {
    [[expi(phi), ZERO], [ZERO, ONE]]
}

/// Phase-shifter on mode a, `diag(e^{iφ}, 1)`.
///
/// # Panics
///
/// If `phi` is not finite.
pub fn phase_shifter(phi: f64) -> Unitary {
    Unitary::qubit_unchecked(phase_shifter_entries(phi))
}

/// Phase gate on mode b, `diag(1, e^{iφ})`, as used for general inputs.
///
/// # Panics
///
/// If `phi` is not finite.
pub fn phase_gate_b(phi: f64) -> Unitary {
    Unitary::qubit_unchecked([[ONE, ZERO], [ZERO, expi(phi)]])
}

/// `|ψ(θ, φ)⟩ = e^{iφ} cos θ |0⟩ + i sin θ |1⟩`.
pub fn prepare(theta: f64, phi: f64) -> PureState {
    assert!(
        theta.is_finite() && phi.is_finite(),
        "angles must be finite"
    );
    let (s, c) = theta.sin_cos();
    PureState::from_raw_renormalized(vec![expi(phi) * c, Complex64::new(0.0, s)])
}

/// State onto which the measurement stage `(θ₂, φ₂)` projects for a
/// click at D1: `(U_{θ₂} U_{φ₂})† |0⟩`.
pub fn measurement_state(theta2: f64, phi2: f64) -> PureState {
    let stage = beam_splitter(theta2)
        .compose(&phase_shifter(phi2))
        .expect("qubit unitaries compose");
    stage
        .dagger()
        .apply(&PureState::zero())
        .expect("qubit dimensions agree")
}

/// Which input port the single photon enters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum InputMode {
    A,
    B,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum MziInput {
    Mode(InputMode),
    State(PureState),
}

impl MziInput {
    fn state(&self) -> PureState {
        match self {
            MziInput::Mode(InputMode::A) => PureState::zero(),
            MziInput::Mode(InputMode::B) => PureState::one(),
            MziInput::State(s) => s.clone(),
        }
    }
}

/// Output detectors: D1 sits on mode a after the second beam-splitter, D2
/// on mode b.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Detector {
    D1,
    D2,
}

/// One interferometer setting: preparation `(θ₁, φ₁)`, measurement
/// `(θ₂, φ₂)` and the input photon.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MziConfig {
    pub theta1: f64,
    pub phi1: f64,
    pub theta2: f64,
    pub phi2: f64,
    pub input: MziInput,
}

impl MziConfig {
    /// Configuration with the photon entering mode a.
    pub fn new(theta1: f64, phi1: f64, theta2: f64, phi2: f64) -> Self {
        Self {
            theta1,
            phi1,
            theta2,
            phi2,
            input: MziInput::Mode(InputMode::A),
        }
    }

    pub fn with_input(mut self, input: MziInput) -> Self {
        self.input = input;
        self
    }

    /// Full circuit `U_{BS₂} U_{φ₂} U_{φ₁} U_{BS₁}`.
    pub fn circuit(&self) -> Unitary {
        beam_splitter(self.theta2)
            .compose(&phase_shifter(self.phi2))
            .and_then(|u| u.compose(&phase_shifter(self.phi1)))
            .and_then(|u| u.compose(&beam_splitter(self.theta1)))
            .expect("qubit unitaries compose")
    }

    /// State inside the interferometer, between the two stages.
    pub fn prepared_state(&self) -> PureState {
        let stage = phase_shifter(self.phi1)
            .compose(&beam_splitter(self.theta1))
            .expect("qubit unitaries compose");
        stage
            .apply(&self.input.state())
            .expect("qubit dimensions agree")
    }
}

/// Click probability at `detector`.
pub fn detection_probability(cfg: &MziConfig, detector: Detector) -> Result<f64> {
    let out = cfg.circuit().apply(&cfg.input.state())?;
    let amp = match detector {
        Detector::D1 => out.amplitudes()[0],
        Detector::D2 => out.amplitudes()[1],
    };
    Ok(amp.norm_sqr().min(1.0))
}

/// Three qubit states whose pairwise overlaps feed a 3-cycle functional.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateTriple {
    pub psi1: PureState,
    pub psi2: PureState,
    pub psi3: PureState,
}

impl StateTriple {
    /// `(r₁₂, r₁₃, r₂₃)`.
    pub fn overlaps(&self) -> (f64, f64, f64) {
        let o = |a, b| overlap_pure(a, b).expect("qubit dimensions agree");
        (
            o(&self.psi1, &self.psi2),
            o(&self.psi1, &self.psi3),
            o(&self.psi2, &self.psi3),
        )
    }

    pub fn states(&self) -> [&PureState; 3] {
        [&self.psi1, &self.psi2, &self.psi3]
    }
}

/// `{|0⟩, U_{θ₁}|0⟩, U_{φ₁}U_{θ₁}|0⟩}`: one interferometer read as three
/// preparations.
pub fn sequential_triple(theta1: f64, phi1: f64) -> StateTriple {
    let psi1 = PureState::zero();
    let psi2 = beam_splitter(theta1).apply(&psi1).expect("qubit");
    let psi3 = phase_shifter(phi1).apply(&psi2).expect("qubit");
    StateTriple { psi1, psi2, psi3 }
}

/// `h(θ₁, φ₁) = r₁₂ + r₁₃ − r₂₃` on the sequential triple. Noncontextual
/// models satisfy `h ≤ 1`.
///
/// Works on stack-allocated amplitudes with the same matrices as
/// [`sequential_triple`]; grid scans call this millions of times.
/// Non-finite angles give NaN rather than a panic.
pub fn h_functional(theta1: f64, phi1: f64) -> f64 {
    let apply = |m: [[Complex64; 2]; 2], v: [Complex64; 2]| {
        [
            m[0][0] * v[0] + m[0][1] * v[1],
            m[1][0] * v[0] + m[1][1] * v[1],
        ]
    };
    let overlap = |a: [Complex64; 2], b: [Complex64; 2]| {
        let o = (a[0].conj() * b[0] + a[1].conj() * b[1]).norm_sqr();
        if o > 1.0 {
            1.0
        } else {
            o
        }
    };
    let psi1 = [ONE, ZERO];
    let psi2 = apply(beam_splitter_entries(theta1), psi1);
    let psi3 = apply(phase_shifter_entries(phi1), psi2);
    overlap(psi1, psi2) + overlap(psi1, psi3) - overlap(psi2, psi3)
}

/// The three sign patterns of the 3-cycle functional over `(r₁₂, r₁₃, r₂₃)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TripleFunctional {
    /// `r₁₂ + r₁₃ − r₂₃`
    H1,
    /// `−r₁₂ + r₁₃ + r₂₃`
    H2,
    /// `r₁₂ − r₁₃ + r₂₃`
    H3,
}

impl TripleFunctional {
    pub const ALL: [TripleFunctional; 3] = [Self::H1, Self::H2, Self::H3];

    pub fn apply(self, (r12, r13, r23): (f64, f64, f64)) -> f64 {
        match self {
            Self::H1 => r12 + r13 - r23,
            Self::H2 => -r12 + r13 + r23,
            Self::H3 => r12 - r13 + r23,
        }
    }
}

/// Triple for a general input prepared by a first stage `(θ₀, φ₀)`:
///
/// ```text
/// ψ₁ = cos θ₀ |0⟩ + i e^{iφ₀} sin θ₀ |1⟩
/// ψ₂ = U_{θ₁} ψ₁
/// ψ₃ = diag(1, e^{iφ₁}) ψ₂
/// ```
pub fn general_input_triple(theta0: f64, phi0: f64, theta1: f64, phi1: f64) -> StateTriple {
    let stage0 = phase_gate_b(phi0)
        .compose(&beam_splitter(theta0))
        .expect("qubit");
    let psi1 = stage0.apply(&PureState::zero()).expect("qubit");
    let psi2 = beam_splitter(theta1).apply(&psi1).expect("qubit");
    let psi3 = phase_gate_b(phi1).apply(&psi2).expect("qubit");
    StateTriple { psi1, psi2, psi3 }
}

/// A sign pattern evaluated on [`general_input_triple`].
pub fn h_general(which: TripleFunctional, theta0: f64, phi0: f64, theta1: f64, phi1: f64) -> f64 {
    which.apply(general_input_triple(theta0, phi0, theta1, phi1).overlaps())
}

pub fn h1_general(theta0: f64, phi0: f64, theta1: f64, phi1: f64) -> f64 {
    h_general(TripleFunctional::H1, theta0, phi0, theta1, phi1)
}

pub fn h2_general(theta0: f64, phi0: f64, theta1: f64, phi1: f64) -> f64 {
    h_general(TripleFunctional::H2, theta0, phi0, theta1, phi1)
}

pub fn h3_general(theta0: f64, phi0: f64, theta1: f64, phi1: f64) -> f64 {
    h_general(TripleFunctional::H3, theta0, phi0, theta1, phi1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, FRAC_PI_6, PI};

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    fn unitary_close(a: &Unitary, b: &Unitary, tol: f64) -> bool {
        a.max_abs_diff(b).unwrap() <= tol
    }

    #[test]
    fn beam_splitter_examples() {
        assert!(unitary_close(
            &beam_splitter(0.0),
            &Unitary::identity(2),
            0.0
        ));
        let sym = beam_splitter(FRAC_PI_4);
        for i in 0..2 {
            for j in 0..2 {
                assert!(close(sym.entry(i, j).norm(), FRAC_1_SQRT_2, 1e-15));
            }
        }
        let full = beam_splitter(FRAC_PI_2);
        assert!(full.entry(0, 0).norm() < 1e-15);
        assert!((full.entry(0, 1) - Complex64::i()).norm() < 1e-15);
        assert!((full.entry(1, 0) - Complex64::i()).norm() < 1e-15);
    }

    #[test]
    fn phase_shifter_examples() {
        assert!(unitary_close(
            &phase_shifter(0.0),
            &Unitary::identity(2),
            0.0
        ));
        let flip = phase_shifter(PI);
        assert!((flip.entry(0, 0) + ONE).norm() < 1e-15);
        assert_eq!(flip.entry(1, 1), ONE);
    }

    #[test]
    fn symmetric_beam_splitter_on_zero() {
        let out = beam_splitter(FRAC_PI_4).apply(&PureState::zero()).unwrap();
        let h = FRAC_1_SQRT_2;
        assert!((out.amplitudes()[0] - Complex64::new(h, 0.0)).norm() < 1e-15);
        assert!((out.amplitudes()[1] - Complex64::new(0.0, h)).norm() < 1e-15);
    }

    #[test]
    fn h_functional_propagates_nan() {
        assert!(h_functional(f64::NAN, 0.0).is_nan());
        assert!(h_functional(0.3, f64::INFINITY).is_nan());
    }

    #[test]
    #[should_panic(expected = "finite")]
    fn non_finite_angle_panics() {
        beam_splitter(f64::NAN);
    }

    #[test]
    fn prepare_examples() {
        assert_eq!(prepare(0.0, 0.0), PureState::zero());
        let p = prepare(FRAC_PI_4, 0.0);
        assert!((p.amplitudes()[1] - Complex64::new(0.0, FRAC_1_SQRT_2)).norm() < 1e-15);
        let minus_zero = prepare(PI, 2.0 * PI);
        assert!((minus_zero.amplitudes()[0] + ONE).norm() < 1e-15);
        assert!(close(
            overlap_pure(&minus_zero, &PureState::zero()).unwrap(),
            1.0,
            1e-15
        ));
    }

    #[test]
    fn composite_beam_splitters_add_angles() {
        // Oracle: hand-multiplied 2x2 product of the closed-form matrices.
        for &(a, b) in &[(0.3, 0.9), (FRAC_PI_4, FRAC_PI_4), (-1.2, 2.5), (3.0, -0.4)] {
            let (sa, ca) = f64::sin_cos(a);
            let (sb, cb) = f64::sin_cos(b);
            let i = Complex64::i();
            let m00 = ca * cb + (i * sa) * (i * sb);
            let m01 = ca * (i * sb) + (i * sa) * cb;
            let product = beam_splitter(a).compose(&beam_splitter(b)).unwrap();
            assert!((product.entry(0, 0) - m00).norm() < 1e-14);
            assert!((product.entry(0, 1) - m01).norm() < 1e-14);
            assert!(unitary_close(&product, &beam_splitter(a + b), 1e-14));
        }
        let u = beam_splitter(0.7);
        assert!(unitary_close(
            &u.compose(&u.dagger()).unwrap(),
            &Unitary::identity(2),
            1e-15
        ));
        assert!(unitary_close(
            &Unitary::identity(2).compose(&u).unwrap(),
            &u,
            0.0
        ));
    }

    #[test]
    fn phase_then_beam_splitter_matches_prepare() {
        for &(t, p) in &[(0.4, 1.1), (2.0, -0.3), (FRAC_PI_6, PI)] {
            let u = phase_shifter(p).compose(&beam_splitter(t)).unwrap();
            let s = u.apply(&PureState::zero()).unwrap();
            let expected = [
                Complex64::from_polar(t.cos(), p),
                Complex64::new(0.0, t.sin()),
            ];
            for (a, b) in s.amplitudes().iter().zip(expected) {
                assert!((a - b).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn detection_examples() {
        let (t1, p1) = (0.7, 1.3);
        let cfg = MziConfig::new(t1, p1, -t1, -p1);
        assert!(close(
            detection_probability(&cfg, Detector::D1).unwrap(),
            1.0,
            1e-12
        ));
        assert!(detection_probability(&cfg, Detector::D2).unwrap() < 1e-12);

        let symmetric = MziConfig::new(FRAC_PI_4, 0.0, FRAC_PI_4, 0.0);
        assert!(detection_probability(&symmetric, Detector::D1).unwrap() < 1e-15);

        let from_b = cfg.clone().with_input(MziInput::Mode(InputMode::B));
        assert!(detection_probability(&from_b, Detector::D1).unwrap() < 1e-12);
        assert!(close(
            detection_probability(&from_b, Detector::D2).unwrap(),
            1.0,
            1e-12
        ));
    }

    #[test]
    fn sequential_triple_examples() {
        let (a, b, c) = sequential_triple(0.0, 0.0).overlaps();
        assert!(close(a, 1.0, 1e-15) && close(b, 1.0, 1e-15) && close(c, 1.0, 1e-15));
        let (a, b, c) = sequential_triple(FRAC_PI_4, PI).overlaps();
        assert!(close(a, 0.5, 1e-15) && close(b, 0.5, 1e-15) && close(c, 0.0, 1e-15));
        let (a, b, c) = sequential_triple(FRAC_PI_6, PI).overlaps();
        assert!(close(a, 0.75, 1e-15) && close(b, 0.75, 1e-15) && close(c, 0.25, 1e-15));
    }

    #[test]
    fn h_functional_examples() {
        assert!(close(h_functional(FRAC_PI_6, PI), 1.25, 1e-14));
        for k in 0..50 {
            let phi = k as f64 * 0.13;
            assert!(close(
                h_functional(FRAC_PI_4, phi),
                (1.0 - phi.cos()) / 2.0,
                1e-14
            ));
            assert!(close(h_functional(0.0, phi), 1.0, 1e-15));
        }
    }

    #[test]
    fn general_input_examples() {
        let t = general_input_triple(FRAC_PI_4, FRAC_PI_2, 0.3, 0.8);
        for s in t.states() {
            let n: f64 = s.amplitudes().iter().map(|z| z.norm_sqr()).sum();
            assert!(close(n, 1.0, 1e-15));
        }
        let t = general_input_triple(0.9, 0.4, 0.0, 0.0);
        let (a, b, c) = t.overlaps();
        assert!(close(a, 1.0, 1e-15) && close(b, 1.0, 1e-15) && close(c, 1.0, 1e-15));
        assert!(close(h1_general(0.9, 0.4, 0.0, 0.0), 1.0, 1e-15));
        assert!(close(h1_general(0.0, 2.2, FRAC_PI_6, PI), 1.25, 1e-14));
    }

    /// Printed closed form of `h₁` for general inputs, transcribed verbatim
    /// as an independent cross-check of the state route.
    fn h1_closed_form(t0: f64, p0: f64, t1: f64, p1: f64) -> f64 {
        let (c, s) = (f64::cos, f64::sin);
        0.25 * ((7.0 + c(4.0 * t0)) * c(t1).powi(2)
            - (3.0 + c(4.0 * t0)) * c(t1).powi(4)
            - (c(p1) * (4.0 * c(2.0 * t0).powi(2) + (1.0 + 3.0 * c(4.0 * t0)) * c(2.0 * t1))
                + 8.0
                    * c(t0).powi(2)
                    * (c(2.0 * p0) + c(2.0 * p0 - p1) + 2.0 * c(2.0 * t1))
                    * s(t0).powi(2))
                * s(t1).powi(2)
            - (3.0 + c(4.0 * t0)) * s(t1).powi(4)
            + (c(p0 - p1) + c(p0) * (-1.0 + 4.0 * c(2.0 * t1) * s(p1 / 2.0).powi(2)))
                * s(4.0 * t0)
                * s(2.0 * t1)
            + c(2.0 * p0) * (-1.0 + c(p1)) * s(2.0 * t0).powi(2) * s(2.0 * t1).powi(2))
    }

    /// Printed closed form labelled `h₂`; it matches `−r₁₂ + r₁₃ + r₂₃`.
    fn h2_closed_form(t0: f64, p0: f64, t1: f64, p1: f64) -> f64 {
        let (c, s) = (f64::cos, f64::sin);
        0.25 * (c(t0).powi(4) * (3.0 + c(4.0 * t1))
            + (3.0 + c(4.0 * t1)) * s(t0).powi(4)
            + c(p1)
                * (c(2.0 * t1) * s(2.0 * t0).powi(2)
                    + 8.0 * c(2.0 * t0).powi(2) * c(t1).powi(2) * s(t1).powi(2))
            + 2.0
                * c(t0).powi(2)
                * s(t0).powi(2)
                * (5.0 * c(p1) - 4.0 * c(t1).powi(2)
                    + c(p1) * c(4.0 * t1)
                    + 4.0
                        * (-c(2.0 * p0 - p1)
                            + c(2.0 * p0) * (1.0 - 2.0 * (-1.0 + c(p1)) * c(t1).powi(2)))
                        * s(t1).powi(2))
            + (c(p0 - p1) - c(p0) * (1.0 + 4.0 * c(2.0 * t1) * s(p1 / 2.0).powi(2)))
                * s(4.0 * t0)
                * s(2.0 * t1)
            + 2.0 * s(2.0 * t0).powi(2) * s(2.0 * t1).powi(2))
    }

    fn sequential_closed_form(t: f64, p: f64) -> f64 {
        let (c2, s2) = (t.cos().powi(2), t.sin().powi(2));
        2.0 * c2 - c2 * c2 - s2 * s2 - 2.0 * s2 * c2 * p.cos()
    }

    fn angle() -> impl Strategy<Value = f64> {
        -7.0f64..7.0
    }

    proptest! {
        #[test]
        fn h_matches_state_route(t in angle(), p in angle()) {
            let (r12, r13, r23) = sequential_triple(t, p).overlaps();
            prop_assert!((h_functional(t, p) - (r12 + r13 - r23)).abs() < 1e-14);
        }

        #[test]
        fn h_matches_closed_form(t in angle(), p in angle()) {
            prop_assert!((h_functional(t, p) - sequential_closed_form(t, p)).abs() < 1e-12);
        }

        #[test]
        fn general_h1_matches_printed_closed_form(t0 in angle(), p0 in angle(), t1 in angle(), p1 in angle()) {
            prop_assert!((h1_general(t0, p0, t1, p1) - h1_closed_form(t0, p0, t1, p1)).abs() < 1e-12);
            prop_assert!((h2_general(t0, p0, t1, p1) - h2_closed_form(t0, p0, t1, p1)).abs() < 1e-12);
        }

        #[test]
        fn general_input_reduces_to_sequential(p0 in angle(), t1 in angle(), p1 in angle()) {
            prop_assert!((h1_general(0.0, p0, t1, p1) - h_functional(t1, p1)).abs() < 1e-10);
        }

        #[test]
        fn projection_identity(t1 in angle(), p1 in angle(), t2 in angle(), p2 in angle()) {
            let cfg = MziConfig::new(t1, p1, t2, p2);
            let d1 = detection_probability(&cfg, Detector::D1).unwrap();
            let d2 = detection_probability(&cfg, Detector::D2).unwrap();
            let dual = measurement_state(t2, p2);
            prop_assert!((d1 - overlap_pure(&dual, &cfg.prepared_state()).unwrap()).abs() < 1e-12);
            prop_assert!((d1 - overlap_pure(&dual, &prepare(t1, p1)).unwrap()).abs() < 1e-12);
            prop_assert!((d1 + d2 - 1.0).abs() < 1e-12);
            // the dual state is itself a preparation with negated angles
            prop_assert!((overlap_pure(&dual, &prepare(-t2, -p2)).unwrap() - 1.0).abs() < 1e-12);
        }

        #[test]
        fn permuted_functionals_never_violate(t in angle(), p in angle()) {
            let r = sequential_triple(t, p).overlaps();
            prop_assert!(TripleFunctional::H2.apply(r) <= 1.0 + 1e-12);
            prop_assert!(TripleFunctional::H3.apply(r) <= 1.0 + 1e-12);
        }

        #[test]
        fn h_never_exceeds_quantum_maximum(t in angle(), p in angle()) {
            prop_assert!(h_functional(t, p) <= 1.25 + 1e-12);
            prop_assert!(h_functional(FRAC_PI_4, p) <= 1.0 + 1e-12);
        }
    }
}
