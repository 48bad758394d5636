use voi_core::engine::voi_curve;
use voi_core::geometry::{
    hartley_table, limit_gamma_prime_circle, limit_z_unit_linear, maxent_closed_form, maxent_cost,
    maxent_limit, Family, Model, ModelSpec,
};
use voi_core::measure::LogBase;

use crate::args::{Command, CurveArgs, HartleyArgs, LimitArgs, MaxentArgs, PlotArgs, VerifyArgs};
use crate::error::{invalid, CliError, CliResult};
use crate::output::{curve_csv, emit, fmt_num, hartley_csv, read};
use crate::svg::{common_base, parse_curve_csv, render, Series};
use crate::verify::{render_report, verify_model, Tolerances};

pub fn dispatch(command: &Command) -> CliResult<()> {
    match command {
        Command::Curve(a) => cmd_curve(a),
        Command::Hartley(a) => cmd_hartley(a),
        Command::Maxent(a) => cmd_maxent(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Plot(a) => cmd_plot(a),
        Command::Limit(a) => cmd_limit(a),
    }
}

pub fn cmd_curve(a: &CurveArgs) -> CliResult<()> {
    let spec = a.model.spec()?;
    let grid = a.grid.points()?;
    let model = Model::new(spec)?;
    let curve = voi_curve(&model, &grid, a.base.into())?;
    emit(a.out.as_deref(), &curve_csv(&curve))
}

pub fn cmd_hartley(a: &HartleyArgs) -> CliResult<()> {
    let spec = a.model.spec()?;
    let table = hartley_table(&spec)?;
    emit(a.out.as_deref(), &hartley_csv(&table, a.base.into()))
}

pub fn cmd_maxent(a: &MaxentArgs) -> CliResult<()> {
    let spec = a.model.spec()?;
    let value = maxent_cost(&spec)?;
    let uniform = matches!(spec.prior, voi_core::PriorSpec::Uniform);
    let closed = maxent_closed_form(spec.family, spec.n).filter(|_| uniform);
    let limit = maxent_limit(spec.family).filter(|_| uniform);
    let or_dash = |v: Option<f64>| v.map_or_else(|| "undefined".to_string(), fmt_num);
    let text = format!(
        "model: {}\nn: {}\nmaxent_cost: {}\nclosed_form: {}\nlimit: {}\n",
        spec.family,
        spec.n,
        fmt_num(value),
        or_dash(closed),
        or_dash(limit)
    );
    emit(a.out.as_deref(), &text)
}

pub fn cmd_limit(a: &LimitArgs) -> CliResult<()> {
    if a.beta.is_empty() {
        return Err(invalid("--beta", "at least one value required"));
    }
    let mut out = String::from("beta,limit_z_unit_linear,limit_gamma_prime_circle\n");
    for &beta in &a.beta {
        let z = limit_z_unit_linear(beta).map_err(|e| invalid("--beta", e))?;
        let gp = limit_gamma_prime_circle(beta).map_err(|e| invalid("--beta", e))?;
        out.push_str(&format!(
            "{},{},{}\n",
            fmt_num(beta),
            fmt_num(z),
            fmt_num(gp)
        ));
    }
    emit(a.out.as_deref(), &out)
}

pub fn cmd_verify(a: &VerifyArgs) -> CliResult<()> {
    let tol = match a.tol {
        Some(t) if t.is_finite() && t >= 0.0 => Tolerances::all(t),
        Some(t) => {
            return Err(invalid(
                "--tol",
                format!("{t} is not a nonnegative tolerance"),
            ))
        }
        None => Tolerances::default(),
    };
    let grid = a.grid.points()?;
    let specs: Vec<ModelSpec> = if a.cost.is_some() || a.model.is_some() {
        let args = crate::args::ModelArgs {
            model: a.model,
            n: Some(a.n),
            prior: a.prior.clone(),
            cost: a.cost.clone(),
        };
        let args = if a.cost.is_some() {
            crate::args::ModelArgs { n: None, ..args }
        } else {
            args
        };
        vec![args.spec()?]
    } else {
        if a.prior.is_some() {
            return Err(invalid("--prior", "needs --model or --cost"));
        }
        Family::BUNDLED
            .into_iter()
            .map(|f| ModelSpec::new(f, a.n).map_err(|e| invalid("--n", e)))
            .collect::<CliResult<_>>()?
    };
    let mut checks = Vec::new();
    for spec in &specs {
        checks.extend(verify_model(spec, &grid, &tol)?);
    }
    emit(a.out.as_deref(), &render_report(&checks))?;
    let failed = checks.iter().filter(|c| !c.passed).count();
    if failed > 0 {
        return Err(CliError::Verification(format!(
            "{failed} of {} checks exceeded tolerance",
            checks.len()
        )));
    }
    Ok(())
}

pub fn cmd_plot(a: &PlotArgs) -> CliResult<()> {
    if a.curves.is_empty() && a.model.is_none() {
        return Err(invalid(
            "plot",
            "no curves given (use --curve or --model with --n)",
        ));
    }
    if a.model.is_some() && a.n.is_empty() {
        return Err(invalid("--n", "required with --model"));
    }
    if a.hartley && a.model.is_none() {
        return Err(invalid("--hartley", "needs an inline --model"));
    }
    let mut series = Vec::new();
    let mut bases = Vec::new();
    for path in &a.curves {
        let name = path.file_stem().map_or_else(
            || path.display().to_string(),
            |s| s.to_string_lossy().into_owned(),
        );
        let parsed = parse_curve_csv(&name, &read(path)?)?;
        bases.push(parsed.base);
        series.push(Series {
            label: name,
            points: parsed.points,
        });
    }
    let requested: LogBase = a.base.into();
    let mut dots = Vec::new();
    if let Some(family) = a.model {
        bases.push(Some(requested));
        let grid = a.grid.points()?;
        for &n in &a.n {
            let spec = ModelSpec::new(family, n).map_err(|e| invalid("--n", e))?;
            if a.hartley {
                dots.extend(
                    hartley_table(&spec)?
                        .iter()
                        .map(|p| (p.info(requested), p.value)),
                );
            }
            let model = Model::new(spec)?;
            let curve = voi_curve(&model, &grid, requested)?;
            let points = curve
                .points
                .iter()
                .map(|p| (requested.from_nats(p.info_nats), p.value))
                .collect();
            series.push(Series {
                label: curve.model,
                points,
            });
        }
    }
    let base = common_base(bases, requested)?;
    emit(a.out.as_deref(), &render(&series, &dots, base)?)
}
