//! Deterministic parameter grids.
//!
//! Grids are scanned row by row in parallel and reassembled in
//! lexicographic order (first axis outermost), so results never depend on
//! scheduling.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

/// Slack when deciding whether the end point lies on the grid.
const GRID_SLACK: f64 = 1e-9;

/// Evenly spaced samples `start, start + step, …` up to `end`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Axis {
    pub name: String,
    pub start: f64,
    pub end: f64,
    pub step: f64,
}

impl Axis {
    pub fn new(name: impl Into<String>, start: f64, end: f64, step: f64) -> Result<Self> {
        let name = name.into();
        if ![start, end, step].iter().all(|x| x.is_finite()) {
            return Err(Error::domain(format!(
                "axis {name}: bounds and step must be finite"
            )));
        }
        if !(step > 0.0) {
            return Err(Error::domain(format!(
                "axis {name}: step {step} must be positive"
            )));
        }
        if start > end {
            return Err(Error::domain(format!(
                "axis {name}: start {start} exceeds end {end}"
            )));
        }
        Ok(Self {
            name,
            start,
            end,
            step,
        })
    }

    /// A single sample at `value`.
    pub fn fixed(name: impl Into<String>, value: f64) -> Result<Self> {
        Self::new(name, value, value, 1.0)
    }

    pub fn len(&self) -> usize {
        ((self.end - self.start) / self.step + GRID_SLACK).floor() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.len())
            .map(|k| self.start + k as f64 * self.step)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRow {
    pub params: Vec<f64>,
    pub value: f64,
    pub violation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanSummary {
    pub points: usize,
    pub bound: f64,
    pub max_value: f64,
    /// First grid point (in row order) attaining `max_value`.
    pub argmax: Vec<f64>,
    pub min_value: f64,
    /// Points with `value > bound`.
    pub violating: usize,
}

impl ScanSummary {
    pub fn max_violation(&self) -> f64 {
        (self.max_value - self.bound).max(0.0)
    }

    pub fn all_violate(&self) -> bool {
        self.violating == self.points
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanResult {
    pub parameters: Vec<String>,
    pub rows: Vec<ScanRow>,
    pub summary: ScanSummary,
}

#[derive(Clone)]
struct Partial {
    points: usize,
    max_value: f64,
    argmax: (f64, f64),
    min_value: f64,
    violating: usize,
}

impl Partial {
    fn empty() -> Self {
        Self {
            points: 0,
            max_value: f64::NEG_INFINITY,
            argmax: (f64::NAN, f64::NAN),
            min_value: f64::INFINITY,
            violating: 0,
        }
    }

    fn push(&mut self, x: f64, y: f64, value: f64, bound: f64) {
        self.points += 1;
        if value > self.max_value {
            self.max_value = value;
            self.argmax = (x, y);
        }
        self.min_value = self.min_value.min(value);
        if value > bound {
            self.violating += 1;
        }
    }

    /// Later partials only win strictly, keeping the first maximizer.
    fn merge(mut self, later: Partial) -> Self {
        self.points += later.points;
        if later.max_value > self.max_value {
            self.max_value = later.max_value;
            self.argmax = later.argmax;
        }
        self.min_value = self.min_value.min(later.min_value);
        self.violating += later.violating;
        self
    }

    fn finish(self, bound: f64) -> ScanSummary {
        ScanSummary {
            points: self.points,
            bound,
            max_value: self.max_value,
            argmax: vec![self.argmax.0, self.argmax.1],
            min_value: self.min_value,
            violating: self.violating,
        }
    }
}

/// Evaluates `f(x, y)` on every grid point and keeps every row.
pub fn scan_grid<F>(x: &Axis, y: &Axis, bound: f64, f: F) -> ScanResult
where
    F: Fn(f64, f64) -> f64 + Sync,
{
    let ys = y.points();
    let blocks: Vec<(Vec<ScanRow>, Partial)> = x
        .points()
        .into_par_iter()
        .map(|xv| {
            let mut partial = Partial::empty();
            let rows = ys
                .iter()
                .map(|&yv| {
                    let value = f(xv, yv);
                    partial.push(xv, yv, value, bound);
                    ScanRow {
                        params: vec![xv, yv],
                        value,
                        violation: (value - bound).max(0.0),
                    }
                })
                .collect();
            (rows, partial)
        })
        .collect();
    let mut rows = Vec::with_capacity(x.len() * ys.len());
    let mut total = Partial::empty();
    for (block, partial) in blocks {
        rows.extend(block);
        total = total.merge(partial);
    }
    ScanResult {
        parameters: vec![x.name.clone(), y.name.clone()],
        rows,
        summary: total.finish(bound),
    }
}

/// Same traversal as [`scan_grid`] but keeps only the summary.
pub fn scan_summary<F>(x: &Axis, y: &Axis, bound: f64, f: F) -> ScanSummary
where
    F: Fn(f64, f64) -> f64 + Sync,
{
    let ys = y.points();
    let partials: Vec<Partial> = x
        .points()
        .into_par_iter()
        .map(|xv| {
            let mut partial = Partial::empty();
            for &yv in &ys {
                partial.push(xv, yv, f(xv, yv), bound);
            }
            partial
        })
        .collect();
    partials
        .into_iter()
        .fold(Partial::empty(), Partial::merge)
        .finish(bound)
}
