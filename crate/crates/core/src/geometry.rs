//! Bundled transport-cost models on circles and the one-way line, with their
//! closed-form partition functions, Maximum-Entropy costs, large-n limits and
//! Hartley (partition-experiment) values.
//!
//! All bundled costs are circulant, `c(x, u) = row[(u - x) mod n]`, and their
//! closed forms assume the uniform prior and reference measure `1/n`.

use std::f64::consts::{LN_2, PI};
use std::fmt;
use std::str::FromStr;

use crate::engine::{CumulantModel, CumulantPoint, DecisionProblem};
use crate::error::{Result, VoiError};
use crate::measure::{CostMatrix, FiniteSpace, Geometry, LogBase, ProbVector};
use crate::special::{
    coth, csch, harmonic, harmonic_log_weighted, inv_expm1, ln_gamma, log_add_exp,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// Circle of circumference n, `c = min(|x-u|, n-|x-u|)`.
    CircleCircumferenceNLinear,
    /// Unit circle (circumference 2π) with linear arc-length cost.
    UnitCircleLinear,
    /// Unit circle with `c = ln(arc length)` off the diagonal and 0 on it.
    UnitCircleLog,
    /// Unit circle with `c = sqrt(arc length)`.
    UnitCircleRoot,
    /// Segment of length 2π with directed distance `((u - x) mod n) · 2π/n`.
    OneWayLineLinear,
    /// User-supplied cost matrix.
    Custom,
}

impl Family {
    pub const BUNDLED: [Family; 5] = [
        Family::CircleCircumferenceNLinear,
        Family::UnitCircleLinear,
        Family::UnitCircleLog,
        Family::UnitCircleRoot,
        Family::OneWayLineLinear,
    ];

    /// CLI-facing identifier.
    pub fn name(self) -> &'static str {
        match self {
            Family::CircleCircumferenceNLinear => "circle-linear",
            Family::UnitCircleLinear => "unit-circle-linear",
            Family::UnitCircleLog => "unit-circle-log",
            Family::UnitCircleRoot => "unit-circle-root",
            Family::OneWayLineLinear => "one-way-line-linear",
            Family::Custom => "custom",
        }
    }

    pub fn closed_form_available(self) -> bool {
        matches!(
            self,
            Family::CircleCircumferenceNLinear
                | Family::UnitCircleLinear
                | Family::UnitCircleLog
                | Family::OneWayLineLinear
        )
    }

    pub fn geometry(self) -> Option<Geometry> {
        match self {
            Family::CircleCircumferenceNLinear => Some(Geometry::CircleCircumferenceN),
            Family::UnitCircleLinear | Family::UnitCircleLog | Family::UnitCircleRoot => {
                Some(Geometry::UnitCircle)
            }
            Family::OneWayLineLinear => Some(Geometry::OneWayLine),
            Family::Custom => None,
        }
    }

    /// Whether the contiguous-arc Hartley experiment applies.
    pub fn is_circle(self) -> bool {
        self.geometry().is_some_and(Geometry::is_circle)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let key = s.trim().to_ascii_lowercase().replace('_', "-");
        Ok(match key.as_str() {
            "circle-linear" | "circle-circumference-n-linear" | "circle" => {
                Family::CircleCircumferenceNLinear
            }
            "unit-circle-linear" => Family::UnitCircleLinear,
            "unit-circle-log" => Family::UnitCircleLog,
            "unit-circle-root" => Family::UnitCircleRoot,
            "one-way-line-linear" | "one-way-line" => Family::OneWayLineLinear,
            "custom" => Family::Custom,
            _ => return Err(format!("unknown model family '{s}'")),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PriorSpec {
    Uniform,
    Custom(ProbVector),
}

/// A cost family at a given size, with its prior.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelSpec {
    pub family: Family,
    pub n: usize,
    pub prior: PriorSpec,
    custom_cost: Option<CostMatrix>,
}

impl ModelSpec {
    /// Bundled family with uniform prior. `n` must be even and at least 2.
    pub fn new(family: Family, n: usize) -> Result<Self> {
        if family == Family::Custom {
            return Err(VoiError::InvalidSize {
                n,
                reason: "custom models need a cost matrix",
            });
        }
        if n < 2 {
            return Err(VoiError::InvalidSize {
                n,
                reason: "need at least 2 points",
            });
        }
        if !n.is_multiple_of(2) {
            return Err(VoiError::InvalidSize {
                n,
                reason: "bundled models need an even number of points",
            });
        }
        Ok(Self {
            family,
            n,
            prior: PriorSpec::Uniform,
            custom_cost: None,
        })
    }

    pub fn custom(cost: CostMatrix, prior: PriorSpec) -> Result<Self> {
        let n = cost.n();
        if let PriorSpec::Custom(p) = &prior {
            if p.len() != n {
                return Err(VoiError::DimensionMismatch {
                    expected: n,
                    found: p.len(),
                });
            }
        }
        Ok(Self {
            family: Family::Custom,
            n,
            prior,
            custom_cost: Some(cost),
        })
    }

    pub fn with_prior(mut self, prior: ProbVector) -> Result<Self> {
        if prior.len() != self.n {
            return Err(VoiError::DimensionMismatch {
                expected: self.n,
                found: prior.len(),
            });
        }
        self.prior = PriorSpec::Custom(prior);
        Ok(self)
    }

    pub fn closed_form_available(&self) -> bool {
        self.family.closed_form_available()
    }

    pub fn prior_vector(&self) -> ProbVector {
        match &self.prior {
            PriorSpec::Uniform => ProbVector::uniform(self.n),
            PriorSpec::Custom(p) => p.clone(),
        }
    }

    fn has_uniform_prior(&self) -> bool {
        match &self.prior {
            PriorSpec::Uniform => true,
            PriorSpec::Custom(p) => p.is_uniform(),
        }
    }

    pub fn space(&self) -> Option<FiniteSpace> {
        self.family
            .geometry()
            .and_then(|g| FiniteSpace::new(self.n, g).ok())
    }

    pub fn label(&self) -> String {
        format!("{} n={}", self.family, self.n)
    }
}

/// Costs from point 0 to every action, `row[i] = c(0, i)`.
pub fn cost_row(family: Family, n: usize) -> Vec<f64> {
    let step = 2.0 * PI / n as f64;
    let arc = |i: usize| i.min(n - i) as f64;
    (0..n)
        .map(|i| match family {
            Family::CircleCircumferenceNLinear => arc(i),
            Family::UnitCircleLinear => arc(i) * step,
            Family::UnitCircleLog if i == 0 => 0.0,
            Family::UnitCircleLog => (arc(i) * step).ln(),
            Family::UnitCircleRoot => (arc(i) * step).sqrt(),
            Family::OneWayLineLinear => i as f64 * step,
            Family::Custom => unreachable!("custom rows come from the cost matrix"),
        })
        .collect()
}

pub fn build_cost(spec: &ModelSpec) -> Result<CostMatrix> {
    if let Some(c) = &spec.custom_cost {
        return Ok(c.clone());
    }
    if spec.n < 2 || !spec.n.is_multiple_of(2) {
        return Err(VoiError::InvalidSize {
            n: spec.n,
            reason: "bundled models need an even number of points >= 2",
        });
    }
    CostMatrix::circulant(&cost_row(spec.family, spec.n))
}

/// `(ln(nZ), E{c})` for a closed-form family at `β > 0`.
///
/// `ln(nZ)` rather than `ln Z` keeps the information `ln n - (βE + ln nZ)`
/// free of cancellation as the channel becomes deterministic.
fn closed_form_parts(family: Family, n: usize, beta: f64) -> Result<(f64, f64)> {
    let nf = n as f64;
    let half = nf / 2.0;
    Ok(match family {
        Family::CircleCircumferenceNLinear => circle_parts(half, beta),
        Family::UnitCircleLinear => {
            let step = 2.0 * PI / nf;
            let (ln_nz, e) = circle_parts(half, step * beta);
            (ln_nz, step * e)
        }
        Family::OneWayLineLinear => {
            let a = 2.0 * PI * beta;
            let ln_nz = (-(-a).exp()).ln_1p() - (-(-a / nf).exp()).ln_1p();
            let e = (2.0 * PI / nf) * inv_expm1(a / nf) - 2.0 * PI * inv_expm1(a);
            (ln_nz, e)
        }
        Family::UnitCircleLog => {
            let m = n / 2;
            let step = 2.0 * PI / nf;
            let h = harmonic(m - 1, beta);
            let hl = harmonic_log_weighted(m - 1, beta);
            // nZ = 2 a^{-β} H + 1 + π^{-β}; work relative to the larger of the two parts.
            let ln_front = LN_2 - beta * step.ln();
            let ln_tail = (-beta * PI.ln()).exp().ln_1p();
            let ln_nz = if h > 0.0 {
                log_add_exp(ln_front + h.ln(), ln_tail)
            } else {
                ln_tail
            };
            // -d(nZ)/dβ = 2 a^{-β} Σ ln(i a) i^{-β} + ln π · π^{-β}
            let scale = (ln_front - ln_nz).exp();
            let front = scale * (step.ln() * h + hl);
            let tail = PI.ln() * (-beta * PI.ln() - ln_nz).exp();
            (ln_nz, front + tail)
        }
        Family::UnitCircleRoot | Family::Custom => {
            return Err(VoiError::NoClosedForm {
                family: family.name(),
            })
        }
    })
}

/// Circle with unit spacing and `half = n/2`, at `β > 0`.
fn circle_parts(half: f64, beta: f64) -> (f64, f64) {
    let q = (-beta).exp();
    let ln_nz = (-(-beta * half).exp()).ln_1p() + q.ln_1p() - (-q).ln_1p();
    let e = csch(beta) - half * inv_expm1(beta * half);
    (ln_nz, e)
}

/// Closed-form partition function `Z(β)` under the uniform measure.
pub fn closed_form_z(spec: &ModelSpec, beta: f64) -> Result<f64> {
    if !spec.closed_form_available() {
        return Err(VoiError::NoClosedForm {
            family: spec.family.name(),
        });
    }
    if !beta.is_finite() || beta < 0.0 {
        return Err(VoiError::BetaOutOfRange {
            beta,
            reason: "beta must be finite and nonnegative".into(),
        });
    }
    if beta == 0.0 {
        return Ok(1.0);
    }
    let nf = spec.n as f64;
    Ok(match spec.family {
        Family::CircleCircumferenceNLinear => -(-beta * nf / 2.0).exp_m1() * coth(beta / 2.0) / nf,
        Family::UnitCircleLinear => {
            // 1/n + 2 e^{-βπ}(e^{βπ} - e^{2βπ/n}) / ((e^{2βπ/n} - 1) n) + e^{-βπ}/n
            let a = 2.0 * beta * PI / nf;
            let middle = 2.0 * -(a - beta * PI).exp_m1() / (a.exp_m1() * nf);
            1.0 / nf + middle + (-beta * PI).exp() / nf
        }
        Family::UnitCircleLog => {
            let h = harmonic(spec.n / 2 - 1, beta);
            (2.0 / nf).powf(1.0 - beta) * PI.powf(-beta) * h + (1.0 + PI.powf(-beta)) / nf
        }
        Family::OneWayLineLinear => {
            // (1/n) e^{-βπ} sinh(πβ) (coth(πβ/n) + 1)
            let damped_sinh = -(-2.0 * PI * beta).exp_m1() / 2.0;
            damped_sinh * (coth(PI * beta / nf) + 1.0) / nf
        }
        Family::UnitCircleRoot | Family::Custom => unreachable!(),
    })
}

/// `lim_{n→∞} Z(β)` for linear cost on the unit circle: `(1 - e^{-βπ}) / (βπ)`.
pub fn limit_z_unit_linear(beta: f64) -> Result<f64> {
    if beta.is_nan() || beta <= 0.0 || beta.is_infinite() {
        return Err(VoiError::BetaOutOfRange {
            beta,
            reason: "limit needs beta > 0".into(),
        });
    }
    Ok(-(-beta * PI).exp_m1() / (beta * PI))
}

/// `lim_{n→∞} Γ'_n(β) = -csch(β)` on the circumference-n circle.
pub fn limit_gamma_prime_circle(beta: f64) -> Result<f64> {
    if beta.is_nan() || beta <= 0.0 || beta.is_infinite() {
        return Err(VoiError::BetaOutOfRange {
            beta,
            reason: "limit needs beta > 0".into(),
        });
    }
    Ok(-csch(beta))
}

/// `Γ'_n(β) = n / (2(e^{βn/2} - 1)) - csch(β)` on the circumference-n circle.
pub fn circle_gamma_prime(n: usize, beta: f64) -> f64 {
    let half = n as f64 / 2.0;
    half * inv_expm1(beta * half) - csch(beta)
}

/// The one-way line's utility display
/// `(1/n) π (n(coth(πβ) - 1) - coth(πβ/n) + 1)`, which equals `Γ'(β) = -E{c}`.
pub fn one_way_utility(n: usize, beta: f64) -> f64 {
    let nf = n as f64;
    PI * (nf * (coth(PI * beta) - 1.0) - coth(PI * beta / nf) + 1.0) / nf
}

/// Expected cost under the product measure, by direct summation.
pub fn maxent_cost(spec: &ModelSpec) -> Result<f64> {
    if spec.custom_cost.is_none() {
        // circulant rows are permutations of one another, so every prior sees the row mean
        let n = spec.n;
        if n < 2 || !n.is_multiple_of(2) {
            return Err(VoiError::InvalidSize {
                n,
                reason: "bundled models need an even number of points >= 2",
            });
        }
        return Ok(cost_row(spec.family, n).iter().sum::<f64>() / n as f64);
    }
    let cost = build_cost(spec)?;
    let prior = spec.prior_vector();
    Ok(DecisionProblem::new(prior, ProbVector::uniform(spec.n), cost)?.maxent_cost())
}

/// Maximum-Entropy cost from the family's closed form (uniform prior only).
pub fn maxent_closed_form(family: Family, n: usize) -> Option<f64> {
    let nf = n as f64;
    let m = n / 2;
    match family {
        Family::CircleCircumferenceNLinear => Some(nf / 4.0),
        Family::UnitCircleLinear => Some(PI / 2.0),
        Family::UnitCircleLog => {
            // (1/n)(2 ln((2π/n)^{n/2-1} Γ(n/2)) + ln π)
            let inner = (m as f64 - 1.0) * (2.0 * PI / nf).ln() + ln_gamma(m as f64);
            Some((2.0 * inner + PI.ln()) / nf)
        }
        Family::UnitCircleRoot => {
            Some(PI.sqrt() * (1.0 / nf + 2.0 * 2f64.sqrt() * nf.powf(-1.5) * harmonic(m - 1, -0.5)))
        }
        Family::OneWayLineLinear => Some(PI * (nf - 1.0) / nf),
        Family::Custom => None,
    }
}

/// `n → ∞` Maximum-Entropy cost, where a closed limit exists.
pub fn maxent_limit(family: Family) -> Option<f64> {
    match family {
        Family::UnitCircleLinear => Some(PI / 2.0),
        Family::UnitCircleLog => Some(PI.ln() - 1.0),
        _ => None,
    }
}

/// Cost model ready for sweeps: closed forms when available, otherwise the
/// generic Gibbs sums.
#[derive(Debug, Clone)]
pub struct Model {
    spec: ModelSpec,
    problem: DecisionProblem,
    closed_form: bool,
}

impl Model {
    pub fn new(spec: ModelSpec) -> Result<Self> {
        let cost = build_cost(&spec)?;
        let problem = DecisionProblem::new(spec.prior_vector(), ProbVector::uniform(spec.n), cost)?
            .with_label(spec.label());
        let closed_form = spec.closed_form_available() && spec.has_uniform_prior();
        Ok(Self {
            spec,
            problem,
            closed_form,
        })
    }

    pub fn bundled(family: Family, n: usize) -> Result<Self> {
        Self::new(ModelSpec::new(family, n)?)
    }

    pub fn spec(&self) -> &ModelSpec {
        &self.spec
    }

    pub fn problem(&self) -> &DecisionProblem {
        &self.problem
    }

    /// Forces the generic path even when a closed form exists.
    pub fn without_closed_form(mut self) -> Self {
        self.closed_form = false;
        self
    }

    pub fn maxent_cost(&self) -> f64 {
        self.problem.maxent_cost()
    }
}

impl CumulantModel for Model {
    fn label(&self) -> String {
        self.spec.label()
    }

    fn cumulant_point(&self, beta: f64) -> Result<CumulantPoint> {
        if !self.closed_form {
            return self.problem.cumulant_point(beta);
        }
        if !beta.is_finite() || beta < 0.0 {
            return Err(VoiError::BetaOutOfRange {
                beta,
                reason: "beta must be finite and nonnegative".into(),
            });
        }
        if beta == 0.0 {
            let m = maxent_closed_form(self.spec.family, self.spec.n).expect("closed-form family");
            return Ok(CumulantPoint {
                beta,
                gamma: 0.0,
                gamma_prime: -m,
                info_nats: 0.0,
            });
        }
        let ln_n = (self.spec.n as f64).ln();
        let (ln_nz, e) = closed_form_parts(self.spec.family, self.spec.n, beta)?;
        let raw = ln_n - (beta * e + ln_nz);
        let info_nats = if raw.abs() < crate::engine::INFO_CLAMP {
            raw.max(0.0)
        } else {
            raw
        };
        if info_nats < -crate::engine::INFO_SIGN_TOLERANCE {
            return Err(VoiError::SignConvention { info: info_nats });
        }
        Ok(CumulantPoint {
            beta,
            gamma: ln_nz - ln_n,
            gamma_prime: -e,
            info_nats,
        })
    }

    fn max_info(&self) -> f64 {
        self.problem.max_info()
    }

    fn uses_closed_form(&self) -> bool {
        self.closed_form
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HartleyPoint {
    pub bits: u32,
    /// Information of the cell label, nats.
    pub info_nats: f64,
    /// MaxEnt cost minus the expected cost of the best action per cell.
    pub value: f64,
}

impl HartleyPoint {
    pub fn info(&self, base: LogBase) -> f64 {
        base.from_nats(self.info_nats)
    }
}

/// Value of learning which of `2^bits` contiguous arcs the state lies in.
pub fn hartley_voi(spec: &ModelSpec, bits: u32) -> Result<HartleyPoint> {
    if !spec.family.is_circle() {
        return Err(VoiError::NoHartley {
            family: spec.family.name(),
        });
    }
    let cells = 1usize.checked_shl(bits).filter(|_| bits >= 1).unwrap_or(0);
    if cells == 0 || cells > spec.n || !spec.n.is_multiple_of(cells) {
        return Err(VoiError::HartleyCells { n: spec.n, cells });
    }
    let cost = build_cost(spec)?;
    let prior = spec.prior_vector();
    let p = prior.as_slice();
    let width = spec.n / cells;
    let mut residual = 0.0;
    let mut masses = Vec::with_capacity(cells);
    for cell in 0..cells {
        let states = cell * width..(cell + 1) * width;
        masses.push(p[states.clone()].iter().sum::<f64>());
        let best = (0..spec.n)
            .map(|u| states.clone().map(|x| p[x] * cost.get(x, u)).sum::<f64>())
            .fold(f64::INFINITY, f64::min);
        residual += best;
    }
    let maxent = DecisionProblem::new(prior, ProbVector::uniform(spec.n), cost)?.maxent_cost();
    let info_nats = masses
        .iter()
        .filter(|&&m| m > 0.0)
        .map(|&m| -m * m.ln())
        .sum();
    Ok(HartleyPoint {
        bits,
        info_nats,
        value: maxent - residual,
    })
}

/// Hartley points for `k = 1 ..= log2 n`; `n` must be a power of two.
pub fn hartley_table(spec: &ModelSpec) -> Result<Vec<HartleyPoint>> {
    if !spec.family.is_circle() {
        return Err(VoiError::NoHartley {
            family: spec.family.name(),
        });
    }
    if !spec.n.is_power_of_two() || spec.n < 2 {
        return Err(VoiError::HartleyCells {
            n: spec.n,
            cells: 2,
        });
    }
    (1..=spec.n.trailing_zeros())
        .map(|k| hartley_voi(spec, k))
        .collect()
}

fn moments(family: Family, n: usize, beta: f64) -> Result<(f64, f64)> {
    let model = Model::bundled(family, n)?.without_closed_form();
    let e = model.problem().cumulant_point(beta)?.expected_cost();
    let var = model.problem().cumulant_second_derivative(beta)?;
    Ok((e, var))
}

/// `∂E{c}/∂n` estimated by the step-2 difference `(E(n+2) - E(n)) / 2`.
pub fn cost_effect(family: Family, n: usize, beta: f64) -> Result<f64> {
    let (lo, _) = moments(family, n, beta)?;
    let (hi, _) = moments(family, n + 2, beta)?;
    Ok((hi - lo) / 2.0)
}

/// `∂Var{c}/∂n = ∂³Γ/∂β²∂n`, with `Var{c} = Γ''(β)`, as a step-2 difference.
pub fn variance_effect(family: Family, n: usize, beta: f64) -> Result<f64> {
    let (_, lo) = moments(family, n, beta)?;
    let (_, hi) = moments(family, n + 2, beta)?;
    Ok((hi - lo) / 2.0)
}
