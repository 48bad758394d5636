//! Invariant batteries run by `voi verify`.

use voi_core::engine::{
    check_marginal_conditions, cumulant_derivative, is_circulant, shape_report, voi_curve,
    CumulantModel,
};
use voi_core::geometry::{closed_form_z, Family, Model, ModelSpec};
use voi_core::measure::{kl_divergence, mutual_information, JointMeasure, LogBase, ProbVector};
use voi_core::oracle;

use crate::error::CliResult;
use crate::output::fmt_num;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub identity: f64,
    pub closed_form: f64,
    /// Relative tolerance for log costs at `β ≥ 20`, where harmonic sums lose digits.
    pub closed_form_log_large: f64,
    pub paths: f64,
    pub derivative: f64,
    pub cost_sign: f64,
    pub marginal: f64,
    pub oracle: f64,
    pub oracle_marginal: f64,
    pub monotone: f64,
    pub concavity: f64,
    pub bound: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            identity: 1e-9,
            closed_form: 1e-12,
            closed_form_log_large: 1e-9,
            paths: 1e-9,
            derivative: 1e-6,
            cost_sign: 1e-8,
            marginal: 1e-10,
            oracle: 1e-8,
            oracle_marginal: 1e-9,
            monotone: 1e-12,
            concavity: 1e-8,
            bound: 1e-9,
        }
    }
}

impl Tolerances {
    pub fn all(t: f64) -> Self {
        Self {
            identity: t,
            closed_form: t,
            closed_form_log_large: t,
            paths: t,
            derivative: t,
            cost_sign: t,
            marginal: t,
            oracle: t,
            oracle_marginal: t,
            monotone: t,
            concavity: t,
            bound: t,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub model: String,
    pub name: &'static str,
    pub deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub note: String,
}

struct Recorder {
    model: String,
    checks: Vec<Check>,
}

impl Recorder {
    fn push(&mut self, name: &'static str, deviation: f64, tolerance: f64) {
        self.push_with(
            name,
            deviation,
            tolerance,
            deviation <= tolerance,
            String::new(),
        );
    }

    fn push_with(
        &mut self,
        name: &'static str,
        deviation: f64,
        tolerance: f64,
        passed: bool,
        note: String,
    ) {
        self.checks.push(Check {
            model: self.model.clone(),
            name,
            deviation,
            tolerance,
            passed,
            note,
        });
    }
}

fn max_of(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, f64::max)
}

/// Runs every applicable check for one model over `grid`.
pub fn verify_model(spec: &ModelSpec, grid: &[f64], tol: &Tolerances) -> CliResult<Vec<Check>> {
    let model = Model::new(spec.clone())?;
    let problem = model.problem();
    let prior = problem.prior().clone();
    let reference = problem.reference().clone();
    let cost = problem.cost();
    let symmetric = is_circulant(cost) && prior.is_uniform() && reference.is_uniform();
    let mut rec = Recorder {
        model: model.label(),
        checks: Vec::new(),
    };

    let solutions = grid
        .iter()
        .map(|&b| problem.gibbs(b))
        .collect::<Result<Vec<_>, _>>()?;

    // identity against the channel; against KL to prior ⊗ reference when the
    // action marginal is not expected to reproduce the reference
    let product = JointMeasure::product(&prior, &reference);
    let identity = max_of(solutions.iter().map(|s| {
        let direct = if symmetric {
            mutual_information(&s.channel, LogBase::Nats)
        } else {
            kl_divergence(s.channel.entries(), product.entries())
        };
        (s.info_from_cumulant().unwrap_or(f64::NAN) - direct).abs()
    }));
    rec.push("identity", identity, tol.identity);

    if spec.closed_form_available() && prior.is_uniform() {
        let mut worst: f64 = 0.0;
        let mut passed = true;
        for &beta in grid.iter().filter(|&&b| b > 0.0) {
            let closed = closed_form_z(spec, beta)?;
            let brute: f64 =
                cost.row(0).iter().map(|c| (-beta * c).exp()).sum::<f64>() / spec.n as f64;
            let rel = ((closed - brute) / brute).abs();
            let limit = if spec.family == Family::UnitCircleLog && beta >= 20.0 {
                tol.closed_form_log_large
            } else {
                tol.closed_form
            };
            passed &= rel <= limit;
            worst = worst.max(rel);
        }
        rec.push_with(
            "closed_form_z",
            worst,
            tol.closed_form,
            passed,
            String::new(),
        );

        let generic = model.clone().without_closed_form();
        let mut dev: f64 = 0.0;
        for &beta in grid {
            let a = model.cumulant_point(beta)?;
            let b = generic.cumulant_point(beta)?;
            let scale = a.expected_cost().abs().max(1.0);
            dev = dev
                .max((a.info_nats - b.info_nats).abs())
                .max((a.expected_cost() - b.expected_cost()).abs() / scale);
        }
        rec.push("closed_vs_generic", dev, tol.paths);
    }

    let derivative = grid
        .iter()
        .map(|&b| cumulant_derivative(problem, b).map(|d| d.relative_deviation()))
        .collect::<Result<Vec<_>, _>>()?;
    rec.push("derivative", max_of(derivative), tol.derivative);
    let sign = max_of(
        solutions
            .iter()
            .map(|s| (s.expected_cost + s.gamma_prime).abs()),
    );
    rec.push("cost_sign", sign, tol.cost_sign);

    let reports: Vec<_> = solutions
        .iter()
        .map(|s| check_marginal_conditions(s, &prior, &reference))
        .collect();
    rec.push(
        "marginal_x",
        max_of(reports.iter().map(|r| r.x_deviation)),
        tol.marginal,
    );
    let u_dev = max_of(reports.iter().map(|r| r.u_deviation));
    let u_ok = u_dev <= tol.marginal;
    if symmetric {
        rec.push_with(
            "marginal_u",
            u_dev,
            tol.marginal,
            u_ok,
            "expected u_ok=true".into(),
        );
    } else {
        rec.push_with(
            "marginal_u",
            u_dev,
            tol.marginal,
            true,
            format!("u_ok={u_ok}, expected false"),
        );
    }

    let oracle_pts = oracle::curve(
        &prior,
        cost,
        grid,
        oracle::DEFAULT_TOLERANCE,
        oracle::DEFAULT_MAX_ITER,
    )?;
    let unconverged = oracle_pts.iter().filter(|r| !r.converged).count();
    let note = if unconverged > 0 {
        format!("{unconverged} oracle points did not converge")
    } else {
        String::new()
    };
    if symmetric {
        let mut dev: f64 = 0.0;
        for r in &oracle_pts {
            let e = model.cumulant_point(r.beta)?;
            dev = dev
                .max((r.info_nats - e.info_nats).abs())
                .max((r.expected_cost - e.expected_cost()).abs());
        }
        rec.push_with("oracle_agreement", dev, tol.oracle, dev <= tol.oracle, note);
        let uniform = ProbVector::uniform(spec.n);
        let q_dev = max_of(oracle_pts.iter().flat_map(|r| {
            r.final_ref_u
                .iter()
                .zip(uniform.as_slice())
                .map(|(a, b)| (a - b).abs())
                .collect::<Vec<_>>()
        }));
        rec.push("oracle_marginal", q_dev, tol.oracle_marginal);
    } else {
        let excess = max_of(oracle_pts.iter().zip(&solutions).map(|(r, s)| {
            let engine = mutual_information(&s.channel, LogBase::Nats) + s.beta * s.expected_cost;
            r.info_nats + r.beta * r.expected_cost - engine
        }));
        rec.push_with(
            "oracle_lagrangian",
            excess,
            tol.identity,
            excess <= tol.identity,
            note,
        );
    }

    let curve = voi_curve(&model, grid, LogBase::Nats)?;
    let shape = shape_report(&curve);
    rec.push("value_at_zero", shape.initial_value.abs(), tol.monotone);
    rec.push("value_monotone", shape.max_value_drop, tol.monotone);
    rec.push("info_monotone", shape.max_info_drop, tol.monotone);
    rec.push(
        "concavity",
        shape.max_second_difference.max(0.0),
        tol.concavity,
    );
    let value_cap = problem.maxent_cost() - problem.min_achievable_cost();
    rec.push(
        "value_bound",
        (shape.max_value - value_cap).max(0.0),
        tol.bound,
    );
    rec.push(
        "info_bound",
        (shape.max_info_nats - model.max_info()).max(0.0),
        tol.bound,
    );
    Ok(rec.checks)
}

pub fn render_report(checks: &[Check]) -> String {
    let width = checks
        .iter()
        .map(|c| c.model.len())
        .max()
        .unwrap_or(5)
        .max(5);
    let mut out = format!(
        "{:<width$}  {:<18}  {:<20}  {:<10}  status\n",
        "model", "check", "deviation", "tolerance"
    );
    for c in checks {
        let status = if c.passed { "PASS" } else { "FAIL" };
        let line = format!(
            "{:<width$}  {:<18}  {:<20}  {:<10}  {status}",
            c.model,
            c.name,
            fmt_num(c.deviation),
            fmt_num(c.tolerance)
        );
        out.push_str(line.trim_end());
        if !c.note.is_empty() {
            out.push_str("  (");
            out.push_str(&c.note);
            out.push(')');
        }
        out.push('\n');
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    if failed == 0 {
        out.push_str(&format!("all {} checks passed\n", checks.len()));
    } else {
        out.push_str(&format!("{failed} of {} checks failed\n", checks.len()));
    }
    out
}
