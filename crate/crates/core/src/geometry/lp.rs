//! Dense two-phase simplex for small equality-form programs.
//!
//! Solves `min cᵀx` subject to `A x = b`, `x ≥ 0`. Pivoting follows Bland's
//! rule (lowest eligible index enters, ties on the ratio test go to the
//! lowest basic index), so the method terminates on degenerate problems.

use crate::error::{Error, Result};

/// Entries smaller than this are treated as zero when choosing pivots.
const PIVOT_TOL: f64 = 1e-11;
/// Reduced costs above `-COST_TOL` count as optimal.
const COST_TOL: f64 = 1e-12;

/// Equality-form linear program `min cᵀx, A x = b, x ≥ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    pub a: Vec<Vec<f64>>,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal {
        x: Vec<f64>,
        objective: f64,
    },
    /// Phase one ended with `Σ artificials` above the feasibility tolerance.
    Infeasible {
        phase_one_objective: f64,
    },
    Unbounded,
}

struct Tableau {
    /// `rows × (cols + 1)`; the last column is the right-hand side.
    t: Vec<Vec<f64>>,
    /// Reduced-cost row; the last entry is minus the objective value.
    z: Vec<f64>,
    basis: Vec<usize>,
    /// Columns allowed to enter the basis.
    allowed: Vec<bool>,
    iterations: usize,
    max_iterations: usize,
}

impl Tableau {
    fn width(&self) -> usize {
        self.z.len() - 1
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let w = self.width();
        let p = self.t[row][col];
        for v in &mut self.t[row] {
            *v /= p;
        }
        let pivot_row = self.t[row].clone();
        for (i, r) in self.t.iter_mut().enumerate() {
            if i != row {
                let f = r[col];
                if f != 0.0 {
                    for k in 0..=w {
                        r[k] -= f * pivot_row[k];
                    }
                    r[col] = 0.0;
                }
            }
        }
        let f = self.z[col];
        if f != 0.0 {
            for k in 0..=w {
                self.z[k] -= f * pivot_row[k];
            }
            self.z[col] = 0.0;
        }
        self.basis[row] = col;
    }

    fn set_costs(&mut self, costs: &[f64]) {
        let w = self.width();
        self.z = costs.to_vec();
        self.z.push(0.0);
        for (row, &bv) in self.basis.iter().enumerate() {
            let cb = costs[bv];
            if cb != 0.0 {
                for k in 0..=w {
                    self.z[k] -= cb * self.t[row][k];
                }
            }
        }
    }

    /// Runs simplex iterations until optimal. Returns `false` if unbounded.
    fn optimize(&mut self) -> Result<bool> {
        let w = self.width();
        loop {
            let entering = (0..w).find(|&j| self.allowed[j] && self.z[j] < -COST_TOL);
            let Some(col) = entering else {
                return Ok(true);
            };
            let mut leaving: Option<(usize, f64)> = None;
            for (i, r) in self.t.iter().enumerate() {
                if r[col] > PIVOT_TOL {
                    let ratio = r[w] / r[col];
                    leaving = match leaving {
                        None => Some((i, ratio)),
                        Some((best, best_ratio)) => {
                            if ratio < best_ratio - PIVOT_TOL
                                || (ratio <= best_ratio + PIVOT_TOL
                                    && self.basis[i] < self.basis[best])
                            {
                                Some((i, ratio))
                            } else {
                                Some((best, best_ratio))
                            }
                        }
                    };
                }
            }
            let Some((row, _)) = leaving else {
                return Ok(false);
            };
            self.iterations += 1;
            if self.iterations > self.max_iterations {
                return Err(Error::Numeric(format!(
                    "simplex did not converge within {} pivots ({} rows, {} columns)",
                    self.max_iterations,
                    self.t.len(),
                    w
                )));
            }
            self.pivot(row, col);
        }
    }
}

impl LinearProgram {
    pub fn new(a: Vec<Vec<f64>>, b: Vec<f64>, c: Vec<f64>) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::DimensionMismatch {
                expected: a.len(),
                found: b.len(),
            });
        }
        if let Some(row) = a.iter().find(|row| row.len() != c.len()) {
            return Err(Error::DimensionMismatch {
                expected: c.len(),
                found: row.len(),
            });
        }
        let finite = a
            .iter()
            .flatten()
            .chain(&b)
            .chain(&c)
            .all(|x| x.is_finite());
        if !finite {
            return Err(Error::domain("linear program has non-finite data"));
        }
        Ok(Self { a, b, c })
    }

    /// Solves the program; `feasibility_tol` bounds the phase-one residual
    /// accepted as feasible.
    pub fn solve(&self, feasibility_tol: f64) -> Result<LpOutcome> {
        let m = self.b.len();
        let n = self.c.len();
        let width = n + m;
        let mut t = Vec::with_capacity(m);
        for (row, &rhs) in self.a.iter().zip(&self.b) {
            let sign = if rhs < 0.0 { -1.0 } else { 1.0 };
            let mut r: Vec<f64> = row.iter().map(|v| sign * v).collect();
            r.resize(width + 1, 0.0);
            r[width] = sign * rhs;
            t.push(r);
        }
        for (i, r) in t.iter_mut().enumerate() {
            r[n + i] = 1.0;
        }
        let mut tab = Tableau {
            t,
            z: vec![0.0; width + 1],
            basis: (n..n + m).collect(),
            allowed: vec![true; width],
            iterations: 0,
            max_iterations: 50 * (width + m).max(100),
        };

        let mut phase_one_costs = vec![0.0; width];
        phase_one_costs[n..].fill(1.0);
        tab.set_costs(&phase_one_costs);
        if !tab.optimize()? {
            return Err(Error::Numeric(
                "phase one reported an unbounded direction".into(),
            ));
        }
        let residual = -tab.z[width];
        if residual > feasibility_tol {
            return Ok(LpOutcome::Infeasible {
                phase_one_objective: residual,
            });
        }

        // Pivot zero-level artificials out of the basis; rows where that is
        // impossible are linearly dependent and get dropped.
        let mut row = 0;
        while row < tab.t.len() {
            if tab.basis[row] >= n {
                match (0..n).find(|&j| tab.t[row][j].abs() > PIVOT_TOL) {
                    Some(col) => tab.pivot(row, col),
                    None => {
                        tab.t.remove(row);
                        tab.basis.remove(row);
                        continue;
                    }
                }
            }
            row += 1;
        }
        tab.allowed[n..].fill(false);

        let mut costs = self.c.clone();
        costs.resize(width, 0.0);
        tab.set_costs(&costs);
        if !tab.optimize()? {
            return Ok(LpOutcome::Unbounded);
        }
        let mut x = vec![0.0; n];
        for (r, &bv) in tab.t.iter().zip(&tab.basis) {
            if bv < n {
                x[bv] = r[width].max(0.0);
            }
        }
        let objective = self.c.iter().zip(&x).map(|(c, x)| c * x).sum();
        Ok(LpOutcome::Optimal { x, objective })
    }
}
