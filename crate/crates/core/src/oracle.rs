//! Blahut–Arimoto rate-distortion solver.
//!
//! Independent of the Gibbs engine: it optimises the action marginal itself
//! instead of fixing it, so on non-symmetric problems it finds a channel with
//! lower `I + βE{c}` than any channel built on a fixed reference.

use crate::engine::validate_beta_grid;
use crate::error::{Result, VoiError};
use crate::measure::{CostMatrix, ProbVector};
use crate::par::{self, Execution};

pub const DEFAULT_TOLERANCE: f64 = 1e-12;
pub const DEFAULT_MAX_ITER: usize = 100_000;
/// Uniform mass blended into warm starts.
const WARM_START_MIX: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub beta: f64,
    pub info_nats: f64,
    pub expected_cost: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Optimised action marginal.
    pub final_ref_u: Vec<f64>,
}

fn check(prior: &ProbVector, cost: &CostMatrix, beta: f64) -> Result<()> {
    if prior.len() != cost.n() {
        return Err(VoiError::DimensionMismatch {
            expected: cost.n(),
            found: prior.len(),
        });
    }
    if !beta.is_finite() || beta < 0.0 {
        return Err(VoiError::BetaOutOfRange {
            beta,
            reason: "beta must be finite and nonnegative".into(),
        });
    }
    Ok(())
}

/// Row `x` of the channel `w(u|x) ∝ q(u) e^{-βc(x,u)}`, shifted by the row minimum.
fn channel_row(cost: &[f64], q: &[f64], beta: f64, out: &mut [f64]) {
    let m = cost
        .iter()
        .zip(q)
        .filter(|(_, &w)| w > 0.0)
        .map(|(&c, _)| c)
        .fold(f64::INFINITY, f64::min);
    let mut total = 0.0;
    for ((o, &c), &w) in out.iter_mut().zip(cost).zip(q) {
        *o = if w > 0.0 {
            w * (-beta * (c - m)).exp()
        } else {
            0.0
        };
        total += *o;
    }
    for o in out.iter_mut() {
        *o /= total;
    }
}

/// Solves at one `β`, starting from `start` (uniform when `None`).
pub fn solve_from(
    prior: &ProbVector,
    cost: &CostMatrix,
    beta: f64,
    start: Option<&[f64]>,
    tol: f64,
    max_iter: usize,
) -> Result<OracleResult> {
    check(prior, cost, beta)?;
    let n = cost.n();
    let p = prior.as_slice();
    let mut q = match start {
        // keep every action alive: a marginal that underflowed to zero at a
        // smaller β can never regain mass under the multiplicative update
        Some(s) if s.len() == n => s
            .iter()
            .map(|&v| (1.0 - WARM_START_MIX) * v + WARM_START_MIX / n as f64)
            .collect(),
        Some(s) => {
            return Err(VoiError::DimensionMismatch {
                expected: n,
                found: s.len(),
            })
        }
        None => vec![1.0 / n as f64; n],
    };
    let mut w = vec![0.0; n * n];
    let mut iterations = 0;
    let mut converged = false;
    while iterations < max_iter {
        iterations += 1;
        for x in 0..n {
            channel_row(cost.row(x), &q, beta, &mut w[x * n..(x + 1) * n]);
        }
        let mut next = vec![0.0; n];
        for x in 0..n {
            for (nu, &wu) in next.iter_mut().zip(&w[x * n..(x + 1) * n]) {
                *nu += p[x] * wu;
            }
        }
        let delta = q
            .iter()
            .zip(&next)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        q = next;
        if delta < tol {
            converged = true;
            break;
        }
    }
    for x in 0..n {
        channel_row(cost.row(x), &q, beta, &mut w[x * n..(x + 1) * n]);
    }
    let marginal: Vec<f64> = (0..n)
        .map(|u| (0..n).map(|x| p[x] * w[x * n + u]).sum())
        .collect();
    let mut info = 0.0;
    let mut expected = 0.0;
    for x in 0..n {
        if p[x] == 0.0 {
            continue;
        }
        for u in 0..n {
            let wu = w[x * n + u];
            if wu > 0.0 {
                info += p[x] * wu * (wu / marginal[u]).ln();
                expected += p[x] * wu * cost.get(x, u);
            }
        }
    }
    Ok(OracleResult {
        beta,
        info_nats: info.max(0.0),
        expected_cost: expected,
        iterations,
        converged,
        final_ref_u: q,
    })
}

pub fn solve(
    prior: &ProbVector,
    cost: &CostMatrix,
    beta: f64,
    tol: f64,
    max_iter: usize,
) -> Result<OracleResult> {
    solve_from(prior, cost, beta, None, tol, max_iter)
}

/// Sweeps an ascending grid, warm-starting each `β` from the previous marginal.
pub fn curve(
    prior: &ProbVector,
    cost: &CostMatrix,
    beta_grid: &[f64],
    tol: f64,
    max_iter: usize,
) -> Result<Vec<OracleResult>> {
    validate_beta_grid(beta_grid)?;
    let mut out: Vec<OracleResult> = Vec::with_capacity(beta_grid.len());
    for &beta in beta_grid {
        let start = out.last().map(|r| r.final_ref_u.clone());
        out.push(solve_from(
            prior,
            cost,
            beta,
            start.as_deref(),
            tol,
            max_iter,
        )?);
    }
    Ok(out)
}

/// Cold-started solves for every `β`, optionally in parallel.
pub fn solve_many(
    prior: &ProbVector,
    cost: &CostMatrix,
    beta_grid: &[f64],
    tol: f64,
    max_iter: usize,
    exec: Execution,
) -> Result<Vec<OracleResult>> {
    par::map(exec, beta_grid, |&b| solve(prior, cost, b, tol, max_iter))
        .into_iter()
        .collect()
}
