//! Membership in and L1 distance to the classical polytope `C_G`.
//!
//! `C_G` is the convex hull of the classical vertex set. Both queries are
//! small linear programs over the convex weights `α_v` of the vertices.

pub mod lp;

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::eventgraph::{evaluate, named_functionals, EdgeWeights, LinearFunctional, VertexSet};
use lp::{LinearProgram, LpOutcome};

/// Phase-one residual accepted as feasible.
pub const FEASIBILITY_TOL: f64 = 1e-9;
/// Per-coordinate tolerance when rebuilding a point from its certificate.
pub const RECONSTRUCTION_TOL: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MembershipResult {
    pub inside: bool,
    /// Convex weights over the (deduplicated) vertices when inside.
    pub certificate: Option<Vec<f64>>,
    /// Largest violation among the graph's named inequalities when outside.
    pub max_violation_found: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistanceResult {
    pub distance: f64,
    pub nearest_point: EdgeWeights,
}

/// Deduplicated vertex coordinates, one `Vec<f64>` per vertex.
fn vertex_columns(vertices: &VertexSet) -> Vec<Vec<f64>> {
    let unique: BTreeSet<&Vec<u8>> = vertices.assignments().iter().collect();
    unique
        .into_iter()
        .map(|a| a.iter().map(|x| f64::from(*x)).collect())
        .collect()
}

fn coordinates(r: &EdgeWeights, vertices: &VertexSet) -> Result<Vec<f64>> {
    if vertices.is_empty() {
        return Err(Error::domain("vertex set is empty"));
    }
    r.check_covers(vertices.graph())?;
    Ok(r.values())
}

fn combine(columns: &[Vec<f64>], alpha: &[f64], dim: usize) -> Vec<f64> {
    let mut point = vec![0.0; dim];
    for (col, a) in columns.iter().zip(alpha) {
        for (p, v) in point.iter_mut().zip(col) {
            *p += a * v;
        }
    }
    point
}

/// Decides whether `r ∈ C_G` by LP feasibility of `α ≥ 0, Σα = 1,
/// Σ α_v v = r`.
pub fn membership(r: &EdgeWeights, vertices: &VertexSet) -> Result<MembershipResult> {
    let target = coordinates(r, vertices)?;
    let columns = vertex_columns(vertices);
    let dim = target.len();
    let mut a: Vec<Vec<f64>> = (0..dim)
        .map(|e| columns.iter().map(|v| v[e]).collect())
        .collect();
    a.push(vec![1.0; columns.len()]);
    let mut b = target.clone();
    b.push(1.0);
    let lp = LinearProgram::new(a, b, vec![0.0; columns.len()])?;
    match lp.solve(FEASIBILITY_TOL)? {
        LpOutcome::Optimal { x, .. } => {
            let rebuilt = combine(&columns, &x, dim);
            let worst = rebuilt
                .iter()
                .zip(&target)
                .fold(0.0f64, |m, (p, q)| m.max((p - q).abs()));
            if worst > RECONSTRUCTION_TOL {
                return Err(Error::Numeric(format!(
                    "membership certificate reconstructs the point only to {worst:.3e}"
                )));
            }
            Ok(MembershipResult {
                inside: true,
                certificate: Some(x),
                max_violation_found: None,
            })
        }
        LpOutcome::Infeasible { .. } => {
            let mut worst = 0.0f64;
            for f in named_functionals(vertices.graph())? {
                worst = worst.max(evaluate(&f, r)?.violation);
            }
            Ok(MembershipResult {
                inside: false,
                certificate: None,
                max_violation_found: Some(worst),
            })
        }
        LpOutcome::Unbounded => Err(Error::Numeric(
            "feasibility program reported unbounded".into(),
        )),
    }
}

/// `min_{r* ∈ C_G} ‖r − r*‖₁`, with the minimizer.
///
/// Variables are the convex weights `α` plus slack pairs `p, q ≥ 0` with
/// `Σ α_v v + p − q = r`; the objective is `Σ (p + q)`.
pub fn l1_distance(r: &EdgeWeights, vertices: &VertexSet) -> Result<DistanceResult> {
    let target = coordinates(r, vertices)?;
    let columns = vertex_columns(vertices);
    let dim = target.len();
    let nv = columns.len();
    let width = nv + 2 * dim;
    let mut a = Vec::with_capacity(dim + 1);
    for e in 0..dim {
        let mut row = vec![0.0; width];
        for (k, v) in columns.iter().enumerate() {
            row[k] = v[e];
        }
        row[nv + e] = 1.0;
        row[nv + dim + e] = -1.0;
        a.push(row);
    }
    let mut simplex_row = vec![0.0; width];
    simplex_row[..nv].fill(1.0);
    a.push(simplex_row);
    let mut b = target.clone();
    b.push(1.0);
    let mut c = vec![0.0; width];
    c[nv..].fill(1.0);
    let lp = LinearProgram::new(a, b, c)?;
    let x = match lp.solve(FEASIBILITY_TOL)? {
        LpOutcome::Optimal { x, .. } => x,
        other => {
            return Err(Error::Numeric(format!(
                "distance program ended as {other:?}"
            )))
        }
    };
    let nearest = combine(&columns, &x[..nv], dim);
    let distance = nearest
        .iter()
        .zip(&target)
        .map(|(p, q)| (p - q).abs())
        .sum();
    let clamped: Vec<f64> = nearest.iter().map(|p| p.clamp(0.0, 1.0)).collect();
    Ok(DistanceResult {
        distance,
        nearest_point: EdgeWeights::for_graph(vertices.graph(), &clamped)?,
    })
}

/// Lower bound on the L1 distance to `C_G` implied by one valid inequality:
/// `(f(r) − s) / ‖f‖_∞` when violated, else 0.
pub fn violation_lower_bound(f: &LinearFunctional, r: &EdgeWeights) -> Result<f64> {
    let value = f.value(r)?;
    if value > f.bound() {
        Ok((value - f.bound()) / f.sup_norm())
    } else {
        Ok(0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eventgraph::{
        classical_vertices, k5_functional, three_cycle_functionals, EventGraph,
    };

    fn c3() -> (EventGraph, VertexSet) {
        let g = EventGraph::cycle(3).unwrap();
        let v = classical_vertices(&g).unwrap();
        (g, v)
    }

    #[test]
    fn vertices_are_inside_with_unit_mass() {
        let (_, v) = c3();
        for k in 0..v.len() {
            let res = membership(&v.weights(k), &v).unwrap();
            assert!(res.inside);
            let cert = res.certificate.unwrap();
            assert!((cert.iter().sum::<f64>() - 1.0).abs() < 1e-9);
            assert!(cert.iter().any(|a| (a - 1.0).abs() < 1e-9));
        }
    }

    #[test]
    fn impossible_assignment_is_outside() {
        let (g, v) = c3();
        let r = EdgeWeights::for_graph(&g, &[1.0, 1.0, 0.0]).unwrap();
        let res = membership(&r, &v).unwrap();
        assert!(!res.inside);
        assert_eq!(res.max_violation_found, Some(1.0));
        let d = l1_distance(&r, &v).unwrap();
        assert!(d.distance > 0.0);
        assert!(membership(&d.nearest_point, &v).unwrap().inside);
    }

    #[test]
    fn sequential_optimum_is_outside() {
        let (g, v) = c3();
        let r = EdgeWeights::for_graph(&g, &[0.75, 0.75, 0.25]).unwrap();
        let res = membership(&r, &v).unwrap();
        assert!(!res.inside);
        assert!((res.max_violation_found.unwrap() - 0.25).abs() < 1e-15);
        let lb = violation_lower_bound(&three_cycle_functionals()[0], &r).unwrap();
        assert!((lb - 0.25).abs() < 1e-15);
        assert!(l1_distance(&r, &v).unwrap().distance >= lb - 1e-9);
    }

    #[test]
    fn inside_points_have_zero_distance() {
        let (g, v) = c3();
        let r = EdgeWeights::for_graph(&g, &[0.5, 0.5, 0.5]).unwrap();
        assert!(membership(&r, &v).unwrap().inside);
        assert!(l1_distance(&r, &v).unwrap().distance < 1e-9);
        assert_eq!(
            violation_lower_bound(&three_cycle_functionals()[1], &r).unwrap(),
            0.0
        );
    }

    #[test]
    fn k5_equator_lower_bound() {
        let k5 = EventGraph::complete(5).unwrap();
        let a = (3.0 + 5f64.sqrt()) / 8.0;
        let p = (3.0 - 5f64.sqrt()) / 8.0;
        let f = k5_functional();
        let values: Vec<f64> = k5
            .edges()
            .iter()
            .map(|e| if f.coefficient(*e) > 0.0 { a } else { p })
            .collect();
        let r = EdgeWeights::for_graph(&k5, &values).unwrap();
        let lb = violation_lower_bound(&f, &r).unwrap();
        assert!((lb - (5.0 * 5f64.sqrt() / 4.0 - 2.0)).abs() < 1e-12);
        let v = classical_vertices(&k5).unwrap();
        assert_eq!(v.len(), 52);
        let d = l1_distance(&r, &v).unwrap();
        assert!(d.distance >= lb - 1e-9);
        assert!(!membership(&r, &v).unwrap().inside);
    }

    #[test]
    fn duplicate_vertices_are_harmless() {
        let (g, _) = c3();
        let v = VertexSet::from_assignments(&g, vec![vec![1, 1, 1], vec![0, 0, 0]]).unwrap();
        let r = EdgeWeights::for_graph(&g, &[0.3, 0.3, 0.3]).unwrap();
        let res = membership(&r, &v).unwrap();
        assert!(res.inside);
        assert_eq!(res.certificate.unwrap().len(), 2);
        let off = EdgeWeights::for_graph(&g, &[0.3, 0.3, 0.4]).unwrap();
        assert!(!membership(&off, &v).unwrap().inside);
        assert!((l1_distance(&off, &v).unwrap().distance - 0.1).abs() < 1e-9);
    }

    #[test]
    fn weights_must_match_graph() {
        let (_, v) = c3();
        let other = EventGraph::new(2, [(1, 2)]).unwrap();
        let r = EdgeWeights::for_graph(&other, &[0.5]).unwrap();
        assert!(membership(&r, &v).is_err());
        assert!(l1_distance(&r, &v).is_err());
    }
}
