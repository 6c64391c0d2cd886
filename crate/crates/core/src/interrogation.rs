//! Quantum interrogation with a single Mach-Zehnder interferometer.
//!
//! A photosensitive object ("bomb") sits in mode b. The first beam-splitter
//! sends the photon into mode b with probability `r_θ1 = sin²θ`, which
//! detonates the bomb. Otherwise the photon is found in mode a, crosses the
//! second beam-splitter `U_θ†`, and reaches the dark detector D2 with
//! probability `r_θ†1 = sin²θ`. With `r = r_θ0 = cos²θ` the efficiency
//! `η = p_succ / (p_succ + p_bomb)` reduces to `r / (r + 1)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

/// Trials simulated per random stream.
pub const CHUNK_TRIALS: u64 = 1 << 16;

fn check_probability(name: &str, x: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::domain(format!("{name} = {x} is outside [0, 1]")));
    }
    Ok(())
}

/// `η = r_θ0 r_θ†1 / (r_θ0 r_θ†1 + r_θ1)` without any symmetry assumption.
pub fn efficiency_raw(r_theta0: f64, r_theta1: f64, r_theta_dag1: f64) -> Result<f64> {
    check_probability("r_theta0", r_theta0)?;
    check_probability("r_theta1", r_theta1)?;
    check_probability("r_theta_dag1", r_theta_dag1)?;
    let succ = r_theta0 * r_theta_dag1;
    let denom = succ + r_theta1;
    if denom == 0.0 {
        return Err(Error::Degenerate(
            "no success and no detonation: efficiency is 0/0".into(),
        ));
    }
    Ok(succ / denom)
}

/// `η = r / (r + 1)`, the efficiency once `r_θ†1 = r_θ1 = 1 − r`.
pub fn efficiency(r_theta0: f64) -> f64 {
    r_theta0 / (r_theta0 + 1.0)
}

/// Best efficiency any noncontextual model can reach,
/// `(1 + (2r − 1)²) / (2(r + 1))`.
pub fn nc_bound(r_theta0: f64) -> f64 {
    let u = 2.0 * r_theta0 - 1.0;
    (1.0 + u * u) / (2.0 * (r_theta0 + 1.0))
}

/// Noncontextual bound before substituting `r_θθ† = (2r − 1)²`:
/// `(1 + r_θθ†) / (2(r + 1))`.
pub fn nc_bound_from_overlaps(r_theta0: f64, r_theta_theta_dag: f64) -> f64 {
    (1.0 + r_theta_theta_dag) / (2.0 * (r_theta0 + 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InterrogationReport {
    pub r_theta0: f64,
    pub p_succ: f64,
    pub p_bomb: f64,
    pub eta: f64,
    pub eta_nc: f64,
    pub gap: f64,
    /// `η` is 0/0 here and was filled in by continuity.
    pub degenerate: bool,
}

/// Analytic report at `r_θ0 = r`.
pub fn analytic_report(r_theta0: f64) -> Result<InterrogationReport> {
    check_probability("r_theta0", r_theta0)?;
    let r1 = 1.0 - r_theta0;
    let (eta, degenerate) = match efficiency_raw(r_theta0, r1, r1) {
        Ok(eta) => (eta, false),
        Err(Error::Degenerate(_)) => (efficiency(r_theta0), true),
        Err(e) => return Err(e),
    };
    let eta_nc = nc_bound(r_theta0);
    Ok(InterrogationReport {
        r_theta0,
        p_succ: r_theta0 * r1,
        p_bomb: r1,
        eta,
        eta_nc,
        gap: eta - eta_nc,
        degenerate,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AdvantageRow {
    pub r: f64,
    pub eta: f64,
    pub eta_nc: f64,
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdvantageScan {
    pub max_gap: f64,
    pub argmax_r: f64,
    pub rows: Vec<AdvantageRow>,
}

/// Tabulates `η`, `η_NC` and their gap on `r = 0, step, 2·step, …, 1`.
pub fn advantage_scan(step: f64) -> Result<AdvantageScan> {
    if !(step > 0.0 && step <= 0.01) {
        return Err(Error::domain(format!(
            "scan step {step} must lie in (0, 0.01]"
        )));
    }
    let n = (1.0 / step).floor() as usize;
    let mut grid: Vec<f64> = (0..=n).map(|k| (k as f64 * step).min(1.0)).collect();
    if grid.last().is_some_and(|r| *r < 1.0 - 1e-12) {
        grid.push(1.0);
    }
    let rows: Vec<AdvantageRow> = grid
        .into_iter()
        .map(|r| {
            let eta = efficiency(r);
            let eta_nc = nc_bound(r);
            AdvantageRow {
                r,
                eta,
                eta_nc,
                gap: eta - eta_nc,
            }
        })
        .collect();
    let best = rows.iter().fold(
        rows[0],
        |best, row| if row.gap > best.gap { *row } else { best },
    );
    Ok(AdvantageScan {
        max_gap: best.gap,
        argmax_r: best.r,
        rows,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonteCarloReport {
    pub theta: f64,
    pub trials: u64,
    pub seed: u64,
    /// Dark-detector clicks with the bomb intact.
    pub successes: u64,
    pub explosions: u64,
    /// Bright-detector clicks, which say nothing.
    pub inconclusive: u64,
    pub p_succ: f64,
    pub p_bomb: f64,
    /// `None` when no trial succeeded or exploded.
    pub eta: Option<f64>,
    /// Binomial standard error `√(η(1 − η) / (successes + explosions))`.
    pub eta_std_err: Option<f64>,
    pub eta_analytic: f64,
    pub degenerate: bool,
}

impl MonteCarloReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[derive(Default, Clone, Copy)]
struct Tally {
    successes: u64,
    explosions: u64,
}

fn run_chunk(seed: u64, chunk: u64, trials: u64, p_hit: f64) -> Tally {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    let mut tally = Tally::default();
    for _ in 0..trials {
        if rng.gen::<f64>() < p_hit {
            tally.explosions += 1;
        } else if rng.gen::<f64>() < p_hit {
            tally.successes += 1;
        }
    }
    tally
}

/// Simulates `trials` photons with an active bomb in mode b.
///
/// Trials are split into chunks of [`CHUNK_TRIALS`]; chunk `k` draws from
/// ChaCha8 seeded with `seed` on stream `k`, so the counts depend only on
/// `(theta, trials, seed)` and not on the thread count.
pub fn simulate(theta: f64, trials: u64, seed: u64) -> Result<MonteCarloReport> {
    if trials == 0 {
        return Err(Error::domain("at least one trial is required"));
    }
    if !theta.is_finite() {
        return Err(Error::domain(format!("angle {theta} is not finite")));
    }
    let p_hit = theta.sin().powi(2);
    let chunks = trials.div_ceil(CHUNK_TRIALS);
    let total = (0..chunks)
        .into_par_iter()
        .map(|k| {
            let n = CHUNK_TRIALS.min(trials - k * CHUNK_TRIALS);
            run_chunk(seed, k, n, p_hit)
        })
        .reduce(Tally::default, |a, b| Tally {
            successes: a.successes + b.successes,
            explosions: a.explosions + b.explosions,
        });
    let decisive = total.successes + total.explosions;
    let (eta, eta_std_err) = if decisive == 0 {
        (None, None)
    } else {
        let eta = total.successes as f64 / decisive as f64;
        (
            Some(eta),
            Some((eta * (1.0 - eta) / decisive as f64).sqrt()),
        )
    };
    Ok(MonteCarloReport {
        theta,
        trials,
        seed,
        successes: total.successes,
        explosions: total.explosions,
        inconclusive: trials - decisive,
        p_succ: total.successes as f64 / trials as f64,
        p_bomb: total.explosions as f64 / trials as f64,
        eta,
        eta_std_err,
        eta_analytic: efficiency(theta.cos().powi(2)),
        degenerate: eta.is_none(),
    })
}
