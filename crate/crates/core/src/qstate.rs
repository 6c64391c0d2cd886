//! Finite-dimensional pure states, density operators and unitaries.
//!
//! Everything here is dense and small: the interferometer lives in a
//! two-mode (qubit) space, and the event-graph machinery never needs more
//! than a handful of dimensions. Values are immutable once built, and every
//! constructor checks its invariant to [`EXACT_TOL`].
//!
//! Global phases are never canonicalized. Two states that differ by a phase
//! compare unequal entrywise but have overlap 1.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance for normalization, hermiticity, trace and unitarity checks.
pub const EXACT_TOL: f64 = 1e-12;

/// Smallest eigenvalue a density operator may have.
pub const PSD_TOL: f64 = 1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn check_finite(values: &[Complex64]) -> Result<()> {
    match values
        .iter()
        .position(|z| !z.re.is_finite() || !z.im.is_finite())
    {
        Some(k) => Err(Error::domain(format!("entry {k} is not finite"))),
        None => Ok(()),
    }
}

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// Normalized vector of complex amplitudes, dimension at least 2.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PureState {
    amplitudes: Vec<Complex64>,
}

impl PureState {
    /// Builds a state from amplitudes that are already normalized.
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() < 2 {
            return Err(Error::domain(format!(
                "state dimension must be at least 2, got {}",
                amplitudes.len()
            )));
        }
        check_finite(&amplitudes)?;
        let norm_sqr: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > EXACT_TOL {
            return Err(Error::domain(format!(
                "state is not normalized: squared norm {norm_sqr}"
            )));
        }
        Ok(Self { amplitudes })
    }

    /// Builds a state by rescaling arbitrary nonzero amplitudes.
    pub fn normalized(amplitudes: Vec<Complex64>) -> Result<Self> {
        check_finite(&amplitudes)?;
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::domain("cannot normalize the zero vector"));
        }
        Self::new(amplitudes.into_iter().map(|z| z / norm).collect())
    }

    /// Computational basis vector `|k⟩` in dimension `dim`.
    pub fn basis(dim: usize, k: usize) -> Result<Self> {
        if k >= dim {
            return Err(Error::domain(format!(
                "basis index {k} out of range for dimension {dim}"
            )));
        }
        let mut amplitudes = vec![ZERO; dim];
        amplitudes[k] = ONE;
        Self::new(amplitudes)
    }

    /// Qubit state `a|0⟩ + b|1⟩`.
    pub fn qubit(a: Complex64, b: Complex64) -> Result<Self> {
        Self::new(vec![a, b])
    }

    /// `|0⟩`, the photon in mode a.
    pub fn zero() -> Self {
        Self {
            amplitudes: vec![ONE, ZERO],
        }
    }

    /// `|1⟩`, the photon in mode b.
    pub fn one() -> Self {
        Self {
            amplitudes: vec![ZERO, ONE],
        }
    }

    /// `(|0⟩ + |1⟩)/√2`.
    pub fn plus() -> Self {
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Self {
            amplitudes: vec![h, h],
        }
    }

    /// Internal constructor for amplitudes produced by unitary evolution.
    pub(crate) fn from_raw_renormalized(amplitudes: Vec<Complex64>) -> Self {
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        Self {
            amplitudes: amplitudes.into_iter().map(|z| z / norm).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Inner product `⟨self|other⟩`, antilinear in `self`.
    pub fn inner(&self, other: &PureState) -> Result<Complex64> {
        check_dim(self.dim(), other.dim())?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Rank-one projector `|ψ⟩⟨ψ|`.
    pub fn projector(&self) -> DensityOperator {
        let d = self.dim();
        let mut data = Vec::with_capacity(d * d);
        for a in &self.amplitudes {
            for b in &self.amplitudes {
                data.push(a * b.conj());
            }
        }
        DensityOperator { dim: d, data }
    }

    /// Orthogonal qubit state, `(a, b) ↦ (−b*, a*)`.
    ///
    /// Only defined for qubits; the phase choice is fixed so repeated calls
    /// give bit-identical results.
    pub fn orthogonal_complement(&self) -> Result<PureState> {
        check_dim(2, self.dim())?;
        let (a, b) = (self.amplitudes[0], self.amplitudes[1]);
        Ok(Self {
            amplitudes: vec![-b.conj(), a.conj()],
        })
    }
}

/// `|⟨a|b⟩|²`, clamped into `[0, 1]` against rounding.
pub fn overlap_pure(a: &PureState, b: &PureState) -> Result<f64> {
    Ok(a.inner(b)?.norm_sqr().min(1.0))
}

/// Hermitian, unit-trace, positive semidefinite `d × d` matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityOperator {
    dim: usize,
    /// Row-major entries.
    data: Vec<Complex64>,
}

impl DensityOperator {
    /// Validates and wraps a row-major matrix.
    pub fn new(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if dim < 2 {
            return Err(Error::domain(format!(
                "dimension must be at least 2, got {dim}"
            )));
        }
        check_dim(dim * dim, data.len())?;
        check_finite(&data)?;
        let rho = Self { dim, data };
        for i in 0..dim {
            for j in i..dim {
                let dev = (rho.entry(i, j) - rho.entry(j, i).conj()).norm();
                if dev > EXACT_TOL {
                    return Err(Error::domain(format!(
                        "matrix is not Hermitian: entry ({i},{j}) deviates by {dev:e}"
                    )));
                }
            }
        }
        let tr = rho.trace();
        if (tr - 1.0).abs() > EXACT_TOL {
            return Err(Error::domain(format!("trace is {tr}, expected 1")));
        }
        if !rho.is_psd(PSD_TOL) {
            return Err(Error::domain(format!(
                "matrix has an eigenvalue below -{PSD_TOL:e}"
            )));
        }
        Ok(rho)
    }

    /// `𝟙/d`.
    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        let probs = vec![1.0 / dim as f64; dim];
        Self::diagonal(&probs)
    }

    /// Diagonal operator in the computational basis from a probability vector.
    pub fn diagonal(probs: &[f64]) -> Result<Self> {
        let d = probs.len();
        let mut data = vec![ZERO; d * d];
        for (k, p) in probs.iter().enumerate() {
            data[k * d + k] = Complex64::new(*p, 0.0);
        }
        Self::new(d, data)
    }

    /// Convex mixture `Σ w_k ρ_k`.
    pub fn mixture(terms: &[(f64, &DensityOperator)]) -> Result<Self> {
        let Some((_, first)) = terms.first() else {
            return Err(Error::domain("empty mixture"));
        };
        let d = first.dim;
        let mut data = vec![ZERO; d * d];
        for (w, rho) in terms {
            check_dim(d, rho.dim)?;
            if *w < 0.0 {
                return Err(Error::domain(format!("negative mixture weight {w}")));
            }
            for (acc, x) in data.iter_mut().zip(&rho.data) {
                *acc += x * *w;
            }
        }
        Self::new(d, data)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.dim + j]
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|k| self.entry(k, k).re).sum()
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &DensityOperator) -> Result<f64> {
        check_dim(self.dim, other.dim)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// True when `ρ + tol·𝟙` admits a Cholesky factorization, i.e. every
    /// eigenvalue of `ρ` is at least `−tol`.
    fn is_psd(&self, tol: f64) -> bool {
        let d = self.dim;
        let mut l = vec![ZERO; d * d];
        for j in 0..d {
            let mut diag = self.entry(j, j).re + tol;
            for k in 0..j {
                diag -= l[j * d + k].norm_sqr();
            }
            if diag <= 0.0 {
                return false;
            }
            let ljj = diag.sqrt();
            l[j * d + j] = Complex64::new(ljj, 0.0);
            for i in (j + 1)..d {
                let mut s = self.entry(i, j);
                for k in 0..j {
                    s -= l[i * d + k] * l[j * d + k].conj();
                }
                l[i * d + j] = s / ljj;
            }
        }
        true
    }
}

impl From<&PureState> for DensityOperator {
    fn from(state: &PureState) -> Self {
        state.projector()
    }
}

/// `Tr(ρσ)`, clamped into `[0, 1]` against rounding.
pub fn overlap_density(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    check_dim(rho.dim, sigma.dim)?;
    let d = rho.dim;
    let mut tr = ZERO;
    for i in 0..d {
        for k in 0..d {
            tr += rho.entry(i, k) * sigma.entry(k, i);
        }
    }
    Ok(tr.re.clamp(0.0, 1.0))
}

/// Square matrix with `U·U† = 𝟙`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Unitary {
    dim: usize,
    data: Vec<Complex64>,
}

impl Unitary {
    /// Validates and wraps a row-major matrix.
    pub fn new(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        check_dim(dim * dim, data.len())?;
        check_finite(&data)?;
        let u = Self { dim, data };
        let dev = u.unitarity_defect();
        if dev > EXACT_TOL {
            return Err(Error::domain(format!(
                "matrix is not unitary: |U·U† − 𝟙| reaches {dev:e}"
            )));
        }
        Ok(u)
    }

    pub fn identity(dim: usize) -> Self {
        let mut data = vec![ZERO; dim * dim];
        for k in 0..dim {
            data[k * dim + k] = ONE;
        }
        Self { dim, data }
    }

    /// Qubit unitary from its four entries, row-major.
    ///
    /// Used by the optics module for closed-form matrices; panics if the
    /// entries are not unitary, which for those formulas means the angle
    /// was not finite.
    pub(crate) fn qubit_unchecked(m: [[Complex64; 2]; 2]) -> Self {
        let u = Self {
            dim: 2,
            data: vec![m[0][0], m[0][1], m[1][0], m[1][1]],
        };
        assert!(
            u.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
                && u.unitarity_defect() <= EXACT_TOL,
            "angles must be finite"
        );
        u
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.dim + j]
    }

    pub fn dagger(&self) -> Unitary {
        let d = self.dim;
        let mut data = vec![ZERO; d * d];
        for i in 0..d {
            for j in 0..d {
                data[j * d + i] = self.entry(i, j).conj();
            }
        }
        Unitary { dim: d, data }
    }

    fn matmul(&self, other: &Unitary) -> Vec<Complex64> {
        let d = self.dim;
        let mut data = vec![ZERO; d * d];
        for i in 0..d {
            for k in 0..d {
                let a = self.entry(i, k);
                for j in 0..d {
                    data[i * d + j] += a * other.entry(k, j);
                }
            }
        }
        data
    }

    fn unitarity_defect(&self) -> f64 {
        let prod = self.matmul(&self.dagger());
        let d = self.dim;
        prod.iter()
            .enumerate()
            .map(|(idx, z)| {
                let target = if idx / d == idx % d { ONE } else { ZERO };
                (z - target).norm()
            })
            .fold(0.0, f64::max)
    }

    /// Matrix product `self · other` (apply `other` first).
    pub fn compose(&self, other: &Unitary) -> Result<Unitary> {
        check_dim(self.dim, other.dim)?;
        let product = Unitary {
            dim: self.dim,
            data: self.matmul(other),
        };
        let dev = product.unitarity_defect();
        if dev > EXACT_TOL {
            return Err(Error::Numeric(format!(
                "composition drifted from unitarity by {dev:e}"
            )));
        }
        Ok(product)
    }

    /// `U|ψ⟩`, renormalized to remove rounding drift.
    pub fn apply(&self, state: &PureState) -> Result<PureState> {
        check_dim(self.dim, state.dim())?;
        let d = self.dim;
        let amps = state.amplitudes();
        let out = (0..d)
            .map(|i| (0..d).map(|j| self.entry(i, j) * amps[j]).sum())
            .collect();
        Ok(PureState::from_raw_renormalized(out))
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Unitary) -> Result<f64> {
        check_dim(self.dim, other.dim)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// `U ρ U†`.
    pub fn conjugate(&self, rho: &DensityOperator) -> Result<DensityOperator> {
        check_dim(self.dim, rho.dim())?;
        let d = self.dim;
        let mut tmp = vec![ZERO; d * d];
        for i in 0..d {
            for k in 0..d {
                let a = self.entry(i, k);
                for j in 0..d {
                    tmp[i * d + j] += a * rho.entry(k, j);
                }
            }
        }
        let mut out = vec![ZERO; d * d];
        for i in 0..d {
            for k in 0..d {
                let a = tmp[i * d + k];
                for j in 0..d {
                    out[i * d + j] += a * self.entry(j, k).conj();
                }
            }
        }
        DensityOperator::new(d, out)
    }
}
