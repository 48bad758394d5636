//! Optimal Gibbs channels, the cumulant generating function and VoI curves.
//!
//! Sign convention: `Γ(β) = Σ_x p(x) ln Z(x, β)` with
//! `Z(x, β) = Σ_u q(u) e^{-β c(x, u)}`, so that `Γ'(β) = -E{c}` and
//! `I = β Γ'(β) - Γ(β) ≥ 0`. The value of information along a curve is
//! `V = E{c}(0) - E{c}(β)`.
//!
//! Every partition sum is evaluated with the per-row minimum cost factored
//! out, `Z(x) = e^{-β m(x)} (A(x) + R(x))`, where `A(x)` is the reference mass
//! sitting on the minimum and `R(x)` the exponentially damped rest. This keeps
//! `β · max|c|` far beyond the `exp` range finite and lets the information be
//! accumulated as `-Σ p ln A - (β D + ln(1 + R/A))` with no cancellation near
//! the deterministic limit.

use crate::error::{Result, VoiError};
use crate::measure::{self, CostMatrix, JointMeasure, LogBase, ProbVector};
use crate::par::{self, Execution};

/// Negative informations down to this size are rounding noise and clamp to 0.
pub const INFO_CLAMP: f64 = 1e-12;
/// Anything more negative than this is a modelling or convention bug.
pub const INFO_SIGN_TOLERANCE: f64 = 1e-9;
/// Default tolerance of the marginal-condition report.
pub const MARGINAL_TOLERANCE: f64 = 1e-10;
/// Tolerance on `I` used by the bisection inverter.
pub const INVERT_TOLERANCE: f64 = 1e-9;

const PARALLEL_ROWS: usize = 256;

fn same_cost(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0)
}

fn circulant_entries(n: usize, entries: &[f64]) -> bool {
    let at = |x: usize, u: usize| entries[x * n + u];
    (0..n).all(|x| (0..n).all(|u| same_cost(at(x, u), at(0, (u + n - x) % n))))
}

/// Circulant or Toeplitz test on raw row-major entries.
pub(crate) fn translation_invariant_entries(n: usize, entries: &[f64]) -> bool {
    let at = |x: usize, u: usize| entries[x * n + u];
    // constant along every diagonal
    circulant_entries(n, entries)
        || (1..n).all(|x| (1..n).all(|u| same_cost(at(x, u), at(x - 1, u - 1))))
}

/// Whether `c(x, u)` depends only on `(u - x) mod n`.
pub fn is_circulant(c: &CostMatrix) -> bool {
    circulant_entries(c.n(), c.entries())
}

/// Whether `c(x, u)` depends only on the displacement between `x` and `u`.
pub fn is_translation_invariant(c: &CostMatrix) -> bool {
    translation_invariant_entries(c.n(), c.entries())
}

/// Shifted partition data for one state `x` at one `β`.
#[derive(Debug, Clone, Copy)]
struct RowStats {
    min_cost: f64,
    /// `ln A(x)`: log of the reference mass on the row minimum.
    ln_tie_mass: f64,
    /// `ln(1 + R(x)/A(x))`.
    log1p_rest: f64,
    /// `E_x{c} - m(x)`.
    excess_cost: f64,
    /// `Var_x{c}`.
    variance: f64,
}

impl RowStats {
    fn ln_z(&self, beta: f64) -> f64 {
        -beta * self.min_cost + self.ln_tie_mass + self.log1p_rest
    }

    fn expected_cost(&self) -> f64 {
        self.min_cost + self.excess_cost
    }
}

fn support_min(cost: &[f64], reference: &[f64]) -> f64 {
    cost.iter()
        .zip(reference)
        .filter(|(_, &q)| q > 0.0)
        .fold(f64::INFINITY, |m, (&c, _)| m.min(c))
}

fn row_stats(cost: &[f64], reference: &[f64], beta: f64) -> RowStats {
    let min_cost = support_min(cost, reference);
    let mut tie = 0.0;
    let mut rest = 0.0;
    let mut first = 0.0;
    let mut second = 0.0;
    for (&c, &q) in cost.iter().zip(reference) {
        if q <= 0.0 {
            continue;
        }
        let excess = c - min_cost;
        if excess == 0.0 {
            tie += q;
        } else {
            let w = q * (-beta * excess).exp();
            rest += w;
            first += w * excess;
            second += w * excess * excess;
        }
    }
    let total = tie + rest;
    let excess_cost = first / total;
    RowStats {
        min_cost,
        ln_tie_mass: tie.ln(),
        log1p_rest: (rest / tie).ln_1p(),
        excess_cost,
        variance: (second / total - excess_cost * excess_cost).max(0.0),
    }
}

fn check_beta(beta: f64) -> Result<()> {
    if !beta.is_finite() || beta < 0.0 {
        return Err(VoiError::BetaOutOfRange {
            beta,
            reason: "beta must be finite and nonnegative".into(),
        });
    }
    Ok(())
}

/// `I = β Γ' - Γ`, clamped at 0 within rounding noise.
pub fn info_from_cumulant(gamma: f64, gamma_prime: f64, beta: f64) -> Result<f64> {
    clamp_info(beta * gamma_prime - gamma)
}

fn clamp_info(raw: f64) -> Result<f64> {
    if raw < -INFO_SIGN_TOLERANCE || raw.is_nan() {
        return Err(VoiError::SignConvention { info: raw });
    }
    Ok(if raw < INFO_CLAMP { raw.max(0.0) } else { raw })
}

/// Cumulant data at one `β`, whatever path produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CumulantPoint {
    pub beta: f64,
    /// `Γ(β)`.
    pub gamma: f64,
    /// `Γ'(β) = -E{c}`.
    pub gamma_prime: f64,
    /// `β Γ' - Γ`, in nats.
    pub info_nats: f64,
}

impl CumulantPoint {
    pub fn expected_cost(&self) -> f64 {
        -self.gamma_prime
    }

    /// `Z = e^Γ`; the common partition value when all rows share it.
    pub fn z(&self) -> f64 {
        self.gamma.exp()
    }
}

/// Anything that can report `Γ`, `Γ'` and `I` along `β`.
pub trait CumulantModel: Sync {
    /// Descriptor recorded in curves built from this model.
    fn label(&self) -> String;

    fn cumulant_point(&self, beta: f64) -> Result<CumulantPoint>;

    /// Supremum of the information over `β`, in nats.
    fn max_info(&self) -> f64;

    /// Largest admissible `β`, for models whose partition sum diverges.
    fn beta_bound(&self) -> Option<f64> {
        None
    }

    /// Whether `cumulant_point` uses a closed form instead of summing rows.
    fn uses_closed_form(&self) -> bool {
        false
    }
}

/// Prior over states, reference measure over actions, and the cost between them.
#[derive(Debug, Clone, PartialEq)]
pub struct DecisionProblem {
    prior: ProbVector,
    reference: ProbVector,
    cost: CostMatrix,
    label: String,
}

impl DecisionProblem {
    pub fn new(prior: ProbVector, reference: ProbVector, cost: CostMatrix) -> Result<Self> {
        let n = cost.n();
        for len in [prior.len(), reference.len()] {
            if len != n {
                return Err(VoiError::DimensionMismatch {
                    expected: n,
                    found: len,
                });
            }
        }
        Ok(Self {
            prior,
            reference,
            cost,
            label: format!("custom n={n}"),
        })
    }

    /// Uniform prior and uniform reference measure.
    pub fn uniform(cost: CostMatrix) -> Self {
        let n = cost.n();
        Self::new(ProbVector::uniform(n), ProbVector::uniform(n), cost).expect("dimensions agree")
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn prior(&self) -> &ProbVector {
        &self.prior
    }

    pub fn reference(&self) -> &ProbVector {
        &self.reference
    }

    pub fn cost(&self) -> &CostMatrix {
        &self.cost
    }

    pub fn n(&self) -> usize {
        self.cost.n()
    }

    fn rows(&self, beta: f64) -> Vec<RowStats> {
        let n = self.n();
        let q = self.reference.as_slice();
        let exec = if n >= PARALLEL_ROWS {
            Execution::Parallel
        } else {
            Execution::Sequential
        };
        par::map_range(exec, n, |x| row_stats(self.cost.row(x), q, beta))
    }

    /// Prior-weighted sum over states, skipping zero-mass states.
    fn weighted<F: Fn(&RowStats) -> f64>(&self, rows: &[RowStats], f: F) -> f64 {
        rows.iter()
            .zip(self.prior.as_slice())
            .filter(|(_, &p)| p > 0.0)
            .map(|(r, &p)| p * f(r))
            .sum()
    }

    /// `Γ(β)` by direct summation of the row partition values.
    pub fn cumulant_at(&self, beta: f64) -> Result<f64> {
        check_beta(beta)?;
        let rows = self.rows(beta);
        Ok(self.weighted(&rows, |r| r.ln_z(beta)))
    }

    /// `Γ''(β) = Σ_x p(x) Var_x{c}`.
    pub fn cumulant_second_derivative(&self, beta: f64) -> Result<f64> {
        check_beta(beta)?;
        let rows = self.rows(beta);
        Ok(self.weighted(&rows, |r| r.variance))
    }

    /// The smooth part `Σ p ln(1 + R/A)` of the cumulant; the remainder is
    /// `-β m̄ + Σ p ln A`, exactly linear in `β`.
    fn cumulant_remainder(&self, beta: f64) -> f64 {
        let rows = self.rows(beta);
        self.weighted(&rows, |r| r.log1p_rest)
    }

    /// `β Γ' - Γ = KL(channel || prior ⊗ reference)`, accumulated without
    /// cancellation. Equals the Shannon information of the channel whenever its
    /// action marginal is the reference (circulant cost, uniform measures).
    fn reference_divergence(&self, rows: &[RowStats], beta: f64) -> f64 {
        let base = -self.weighted(rows, |r| r.ln_tie_mass);
        let deficit = self.weighted(rows, |r| beta * r.excess_cost + r.log1p_rest);
        base - deficit
    }

    /// Expected cost under the product (zero-information) measure.
    pub fn maxent_cost(&self) -> f64 {
        let q = self.reference.as_slice();
        self.prior
            .as_slice()
            .iter()
            .enumerate()
            .map(|(x, &p)| {
                p * self
                    .cost
                    .row(x)
                    .iter()
                    .zip(q)
                    .map(|(c, w)| c * w)
                    .sum::<f64>()
            })
            .sum()
    }

    /// `Σ_x p(x) min_u c(x, u)`: the cost of perfect information.
    pub fn min_achievable_cost(&self) -> f64 {
        let q = self.reference.as_slice();
        self.prior
            .as_slice()
            .iter()
            .enumerate()
            .filter(|(_, &p)| p > 0.0)
            .map(|(x, &p)| p * support_min(self.cost.row(x), q))
            .sum()
    }

    pub fn gibbs(&self, beta: f64) -> Result<GibbsSolution> {
        gibbs_channel(&self.prior, &self.reference, &self.cost, beta)
    }
}

impl CumulantModel for DecisionProblem {
    fn label(&self) -> String {
        self.label.clone()
    }

    fn cumulant_point(&self, beta: f64) -> Result<CumulantPoint> {
        check_beta(beta)?;
        let rows = self.rows(beta);
        let gamma = self.weighted(&rows, |r| r.ln_z(beta));
        let expected = self.weighted(&rows, RowStats::expected_cost);
        let info_nats = clamp_info(self.reference_divergence(&rows, beta))?;
        Ok(CumulantPoint {
            beta,
            gamma,
            gamma_prime: -expected,
            info_nats,
        })
    }

    fn max_info(&self) -> f64 {
        let rows = self.rows(0.0);
        -self.weighted(&rows, |r| r.ln_tie_mass)
    }
}

/// Optimal channel at one `β` together with its cumulant data.
#[derive(Debug, Clone, PartialEq)]
pub struct GibbsSolution {
    pub beta: f64,
    /// Joint `p(x) q(u) e^{-β c(x,u)} / Z(x, β)`.
    pub channel: JointMeasure,
    /// `Z(x, β)`; may overflow for extreme `β · |c|`, see `log_z_of_x`.
    pub z_of_x: Vec<f64>,
    pub log_z_of_x: Vec<f64>,
    /// `Γ(β)`.
    pub gamma: f64,
    /// `Γ'(β)` from the analytic weighted sum.
    pub gamma_prime: f64,
    /// `E{c}` of the channel.
    pub expected_cost: f64,
    /// Shannon information of the channel, nats.
    pub info_nats: f64,
}

impl GibbsSolution {
    /// `β Γ' - Γ` for this solution.
    pub fn info_from_cumulant(&self) -> Result<f64> {
        info_from_cumulant(self.gamma, self.gamma_prime, self.beta)
    }
}

/// Builds the optimal channel `p(u|x) ∝ q(u) e^{-β c(x,u)}` for a fixed reference `q`.
pub fn gibbs_channel(
    prior_x: &ProbVector,
    ref_u: &ProbVector,
    c: &CostMatrix,
    beta: f64,
) -> Result<GibbsSolution> {
    let n = c.n();
    for len in [prior_x.len(), ref_u.len()] {
        if len != n {
            return Err(VoiError::DimensionMismatch {
                expected: n,
                found: len,
            });
        }
    }
    check_beta(beta)?;
    let q = ref_u.as_slice();
    let exec = if n >= PARALLEL_ROWS {
        Execution::Parallel
    } else {
        Execution::Sequential
    };
    let rows: Vec<(RowStats, Vec<f64>)> = par::map_range(exec, n, |x| {
        let cost = c.row(x);
        let stats = row_stats(cost, q, beta);
        let px = prior_x.as_slice()[x];
        let mut weights: Vec<f64> = cost
            .iter()
            .zip(q)
            .map(|(&cu, &qu)| {
                if qu > 0.0 {
                    qu * (-beta * (cu - stats.min_cost)).exp()
                } else {
                    0.0
                }
            })
            .collect();
        let total: f64 = weights.iter().sum();
        for w in &mut weights {
            *w = px * *w / total;
        }
        (stats, weights)
    });

    let mut entries = Vec::with_capacity(n * n);
    let mut log_z_of_x = Vec::with_capacity(n);
    let mut gamma = 0.0;
    let mut expected = 0.0;
    for ((stats, weights), &px) in rows.iter().zip(prior_x.as_slice()) {
        entries.extend_from_slice(weights);
        let ln_z = stats.ln_z(beta);
        log_z_of_x.push(ln_z);
        if px > 0.0 {
            gamma += px * ln_z;
            expected += px * stats.expected_cost();
        }
    }
    let channel = JointMeasure::from_rows_unchecked(n, n, entries);
    let expected_cost = measure::expected_cost(&channel, c)?;
    let info_nats = measure::mutual_information(&channel, LogBase::Nats);
    Ok(GibbsSolution {
        beta,
        z_of_x: log_z_of_x.iter().map(|l| l.exp()).collect(),
        log_z_of_x,
        channel,
        gamma,
        gamma_prime: -expected,
        expected_cost,
        info_nats,
    })
}

/// `Γ(β) = Σ_x p(x) ln Z(x, β)` of a solved channel.
pub fn cumulant(sol: &GibbsSolution, prior_x: &ProbVector) -> f64 {
    sol.log_z_of_x
        .iter()
        .zip(prior_x.as_slice())
        .filter(|(_, &p)| p > 0.0)
        .map(|(l, p)| p * l)
        .sum()
}

/// Analytic `Γ'` with its finite-difference cross-check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CumulantDerivative {
    pub analytic: f64,
    pub finite_difference: f64,
    pub step: f64,
    /// Set when `β` sat too close to 0 for a central difference.
    pub one_sided: bool,
}

impl CumulantDerivative {
    pub fn relative_deviation(&self) -> f64 {
        let diff = (self.analytic - self.finite_difference).abs();
        if self.analytic == 0.0 {
            diff
        } else {
            diff / self.analytic.abs()
        }
    }
}

/// `Γ'(β)` as the weighted sum `Σ_x p(x) Σ_u q(u) e^{-βc}(-c) / Z(x, β)`,
/// checked against a difference quotient of `Γ` with step `1e-6 · max(1, β)`.
///
/// The part of `Γ` that is exactly linear in `β` is differentiated exactly;
/// only the smooth remainder is differenced, which keeps the quotient
/// meaningful when `Γ'` itself is far below the rounding level of `Γ`.
pub fn cumulant_derivative(model: &DecisionProblem, beta: f64) -> Result<CumulantDerivative> {
    check_beta(beta)?;
    let point = model.cumulant_point(beta)?;
    let rows = model.rows(beta);
    let linear_slope = -model.weighted(&rows, |r| r.min_cost);
    let step = 1e-6 * beta.max(1.0);
    let (slope, one_sided) = if beta >= step {
        let up = model.cumulant_remainder(beta + step);
        let down = model.cumulant_remainder(beta - step);
        ((up - down) / (2.0 * step), false)
    } else {
        let f0 = model.cumulant_remainder(beta);
        let f1 = model.cumulant_remainder(beta + step);
        let f2 = model.cumulant_remainder(beta + 2.0 * step);
        ((-3.0 * f0 + 4.0 * f1 - f2) / (2.0 * step), true)
    };
    Ok(CumulantDerivative {
        analytic: point.gamma_prime,
        finite_difference: linear_slope + slope,
        step,
        one_sided,
    })
}

/// Outcome of checking both marginal conditions of a solved channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarginalReport {
    pub x_ok: bool,
    pub u_ok: bool,
    pub x_deviation: f64,
    pub u_deviation: f64,
    pub max_deviation: f64,
}

pub fn check_marginal_conditions(
    sol: &GibbsSolution,
    prior_x: &ProbVector,
    ref_u: &ProbVector,
) -> MarginalReport {
    check_marginal_conditions_with_tol(sol, prior_x, ref_u, MARGINAL_TOLERANCE)
}

pub fn check_marginal_conditions_with_tol(
    sol: &GibbsSolution,
    prior_x: &ProbVector,
    ref_u: &ProbVector,
    tol: f64,
) -> MarginalReport {
    let dev = |a: &[f64], b: &[f64]| {
        a.iter()
            .zip(b)
            .fold(0.0_f64, |m, (x, y)| m.max((x - y).abs()))
    };
    let x_deviation = dev(&sol.channel.row_sums(), prior_x.as_slice());
    let u_deviation = dev(&sol.channel.col_sums(), ref_u.as_slice());
    MarginalReport {
        x_ok: x_deviation <= tol,
        u_ok: u_deviation <= tol,
        x_deviation,
        u_deviation,
        max_deviation: x_deviation.max(u_deviation),
    }
}

/// One row of a VoI curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub beta: f64,
    pub z: f64,
    pub gamma: f64,
    pub expected_cost: f64,
    pub info_nats: f64,
    /// `V = E{c}(0) - E{c}(β)`.
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VoiCurve {
    pub model: String,
    pub base: LogBase,
    pub points: Vec<CurvePoint>,
}

impl VoiCurve {
    /// Information of point `i` in the curve's base.
    pub fn info(&self, i: usize) -> f64 {
        self.base.from_nats(self.points[i].info_nats)
    }

    pub fn infos(&self) -> Vec<f64> {
        self.points
            .iter()
            .map(|p| self.base.from_nats(p.info_nats))
            .collect()
    }

    pub fn values(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.value).collect()
    }
}

/// Checks that a grid is non-empty, starts at 0 and strictly ascends through finite values.
pub fn validate_beta_grid(grid: &[f64]) -> Result<()> {
    match grid.first() {
        None => return Err(VoiError::InvalidGrid("empty grid".into())),
        Some(&b) if b != 0.0 => {
            return Err(VoiError::InvalidGrid(format!(
                "grid must start at 0, found {b}"
            )))
        }
        _ => {}
    }
    if let Some(&b) = grid.iter().find(|b| !b.is_finite() || **b < 0.0) {
        return Err(VoiError::InvalidGrid(format!(
            "grid contains invalid beta {b}"
        )));
    }
    if let Some(w) = grid.windows(2).find(|w| w[1] <= w[0]) {
        return Err(VoiError::InvalidGrid(format!(
            "grid not strictly ascending at {} -> {}",
            w[0], w[1]
        )));
    }
    Ok(())
}

/// Sweeps `β` over `grid` (ascending, starting at 0) using all available threads.
pub fn voi_curve<M: CumulantModel + ?Sized>(
    model: &M,
    beta_grid: &[f64],
    base: LogBase,
) -> Result<VoiCurve> {
    voi_curve_with(model, beta_grid, base, Execution::default())
}

pub fn voi_curve_with<M: CumulantModel + ?Sized>(
    model: &M,
    beta_grid: &[f64],
    base: LogBase,
    exec: Execution,
) -> Result<VoiCurve> {
    validate_beta_grid(beta_grid)?;
    if let (Some(bound), Some(&last)) = (model.beta_bound(), beta_grid.last()) {
        if last >= bound {
            return Err(VoiError::BetaOutOfRange {
                beta: last,
                reason: format!("partition sum diverges for beta >= {bound}"),
            });
        }
    }
    let evaluated = par::map(exec, beta_grid, |&b| model.cumulant_point(b));
    let points = evaluated.into_iter().collect::<Result<Vec<_>>>()?;
    let maxent = points[0].expected_cost();
    let points = points
        .into_iter()
        .map(|p| CurvePoint {
            beta: p.beta,
            z: p.z(),
            gamma: p.gamma,
            expected_cost: p.expected_cost(),
            info_nats: p.info_nats,
            value: maxent - p.expected_cost(),
        })
        .collect();
    Ok(VoiCurve {
        model: model.label(),
        base,
        points,
    })
}

/// Points closer than this in `I` (nats) are merged before taking second
/// differences; below it the divided differences measure rounding, not shape.
pub const CONCAVITY_RESOLUTION: f64 = 1e-9;

/// Shape diagnostics of a curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShapeReport {
    /// `V` at the first point.
    pub initial_value: f64,
    /// Largest decrease of `V` between consecutive points.
    pub max_value_drop: f64,
    /// Largest decrease of `I` between consecutive points.
    pub max_info_drop: f64,
    /// Largest second divided difference of `V` in `I`.
    pub max_second_difference: f64,
    pub max_value: f64,
    pub max_info_nats: f64,
}

pub fn shape_report(curve: &VoiCurve) -> ShapeReport {
    let pts = &curve.points;
    let drop = |f: fn(&CurvePoint) -> f64| {
        pts.windows(2)
            .map(|w| f(&w[0]) - f(&w[1]))
            .fold(0.0_f64, f64::max)
    };
    let mut resolved: Vec<&CurvePoint> = Vec::with_capacity(pts.len());
    for p in pts {
        match resolved.last() {
            Some(last) if p.info_nats < last.info_nats + CONCAVITY_RESOLUTION => {}
            _ => resolved.push(p),
        }
    }
    let max_second_difference = resolved
        .windows(3)
        .map(|w| {
            let s1 = (w[1].value - w[0].value) / (w[1].info_nats - w[0].info_nats);
            let s2 = (w[2].value - w[1].value) / (w[2].info_nats - w[1].info_nats);
            (s2 - s1) / (w[2].info_nats - w[0].info_nats)
        })
        .fold(f64::NEG_INFINITY, f64::max);
    ShapeReport {
        initial_value: pts.first().map_or(0.0, |p| p.value),
        max_value_drop: drop(|p| p.value),
        max_info_drop: drop(|p| p.info_nats),
        max_second_difference,
        max_value: pts
            .iter()
            .map(|p| p.value)
            .fold(f64::NEG_INFINITY, f64::max),
        max_info_nats: pts
            .iter()
            .map(|p| p.info_nats)
            .fold(f64::NEG_INFINITY, f64::max),
    }
}

/// Ascending `β` grids.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BetaScale {
    Geometric,
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaGrid {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub scale: BetaScale,
    pub include_zero: bool,
}

impl Default for BetaGrid {
    /// 200 geometric points on `[1e-3, 50]`, preceded by 0.
    fn default() -> Self {
        Self {
            min: 1e-3,
            max: 50.0,
            count: 200,
            scale: BetaScale::Geometric,
            include_zero: true,
        }
    }
}

impl BetaGrid {
    pub fn points(&self) -> Result<Vec<f64>> {
        let bad = |m: &str| Err(VoiError::InvalidGrid(m.to_string()));
        if self.count == 0 {
            return bad("count must be positive");
        }
        if !(self.min.is_finite() && self.max.is_finite()) || self.min < 0.0 || self.max < self.min
        {
            return bad("need 0 <= min <= max, both finite");
        }
        if self.count > 1 && self.max == self.min {
            return bad("min == max with more than one point");
        }
        let mut out = Vec::with_capacity(self.count + 1);
        if self.include_zero && self.min > 0.0 {
            out.push(0.0);
        }
        let last = (self.count - 1).max(1) as f64;
        match self.scale {
            BetaScale::Geometric => {
                if self.min <= 0.0 {
                    return bad("geometric grid needs min > 0");
                }
                let ratio = (self.max / self.min).ln();
                out.extend((0..self.count).map(|i| self.min * (ratio * i as f64 / last).exp()));
            }
            BetaScale::Linear => {
                out.extend(
                    (0..self.count).map(|i| self.min + (self.max - self.min) * i as f64 / last),
                );
            }
        }
        if self.count > 1 {
            *out.last_mut().unwrap() = self.max;
        }
        Ok(out)
    }
}

pub fn default_beta_grid() -> Vec<f64> {
    BetaGrid::default().points().expect("default grid is valid")
}

/// Finds `β` with `f(β)` within `tol` of `target`, for `f` nondecreasing
/// from `f(0)`. Brackets by doubling, then bisects.
pub fn invert_monotone<F>(f: F, target: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let f0 = f(0.0)?;
    if target <= f0 + tol {
        return Ok(0.0);
    }
    let mut lo = 0.0;
    let mut hi = 1.0;
    let mut f_hi = f(hi)?;
    while f_hi < target - tol {
        lo = hi;
        hi *= 2.0;
        if hi > 1e8 {
            return Err(VoiError::UnreachableInfo {
                target,
                supremum: f_hi,
            });
        }
        f_hi = f(hi)?;
    }
    if (f_hi - target).abs() <= tol {
        return Ok(hi);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid)?;
        if (fm - target).abs() <= tol {
            return Ok(mid);
        }
        if fm < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= f64::EPSILON * hi {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `β` at which the model carries `target_nats` of information (tolerance 1e-9).
pub fn beta_for_info<M: CumulantModel + ?Sized>(model: &M, target_nats: f64) -> Result<f64> {
    let sup = model.max_info();
    if target_nats > sup + INVERT_TOLERANCE {
        return Err(VoiError::UnreachableInfo {
            target: target_nats,
            supremum: sup,
        });
    }
    invert_monotone(
        |b| Ok(model.cumulant_point(b)?.info_nats),
        target_nats,
        INVERT_TOLERANCE,
    )
}

/// `V(I)` at a matched information level, via [`beta_for_info`].
pub fn value_at_info<M: CumulantModel + ?Sized>(model: &M, target_nats: f64) -> Result<f64> {
    let beta = beta_for_info(model, target_nats)?;
    let maxent = model.cumulant_point(0.0)?.expected_cost();
    Ok(maxent - model.cumulant_point(beta)?.expected_cost())
}
