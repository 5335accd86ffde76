use std::fs;
use std::path::Path;

use canon_core::approx::{convergence_sweep, default_order, dirac_step_hamiltonian, H11Profile, Reference};
use canon_core::closed_forms::{
    atom_at_lambda_h, atoms_hamiltonian, homogeneous_hamiltonian, pointmass_hamiltonian, winkler_constant_h,
    AtomSystem, BesselSystem, HamiltonianFunction,
};
use canon_core::format;
use canon_core::opuc::{g_via_opuc_with, h_via_opuc_with, verblunsky_from_steps};
use canon_core::{
    direct_moments, locally_infinite_support, periodize, trig_moments, Breakdown, Complex64, Error, InverseSolver,
    MeasureSpec, MomentSequence, Step, StepHamiltonian,
};
use serde::Deserialize;
use serde_json::json;

use crate::args::*;
use crate::pins;
use crate::svg::render_svg;

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        CliError { code: 2, message: message.into() }
    }

    pub fn numerical(message: impl Into<String>) -> Self {
        CliError { code: 3, message: message.into() }
    }

    pub fn io(message: impl Into<String>) -> Self {
        CliError { code: 4, message: message.into() }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        if e.is_numerical() {
            CliError::numerical(e.to_string())
        } else {
            CliError::input(e.to_string())
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

pub fn run(command: Command) -> Result<()> {
    match command {
        Command::Inverse(a) => inverse(a),
        Command::Direct(a) => direct(a),
        Command::Periodize(a) => periodize_cmd(a),
        Command::DiracApprox(a) => dirac(a),
        Command::ClosedForm(a) => closed_form(a),
        Command::Validate(a) => validate(a),
        Command::Sweep(a) => sweep(a),
    }
}

/// Inline JSON, or the contents of the named file.
fn load_text(arg: &str) -> Result<String> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        return Ok(arg.to_string());
    }
    fs::read_to_string(arg).map_err(|e| CliError::input(format!("cannot read {arg}: {e}")))
}

fn load_measure(arg: &str) -> Result<MeasureSpec> {
    Ok(MeasureSpec::from_json(&load_text(arg)?)?)
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| CliError::io(format!("cannot write {}: {e}", path.display())))
}

fn emit(output: &Output, text: &str) -> Result<()> {
    match &output.out {
        Some(path) => write_file(path, text),
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::io(format!("cannot write to stdout: {e}")))
        }
    }
}

fn json_text(value: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("json value serializes");
    s.push('\n');
    s
}

fn complex_pairs(values: &[Complex64]) -> Vec<[f64; 2]> {
    values.iter().map(|c| [c.re, c.im]).collect()
}

fn moments_csv(m: &MomentSequence) -> String {
    format::csv(
        &["k", "re", "im"],
        m.as_slice()
            .iter()
            .enumerate()
            .map(|(k, g)| vec![k.to_string(), format::num(g.re), format::num(g.im)]),
    )
}

fn breakdown_error(b: &Breakdown, what: &str) -> CliError {
    CliError::numerical(format!(
        "positivity lost at order {} (innovation {:.3e}); {what} written up to order {}",
        b.order,
        b.innovation,
        b.order.saturating_sub(1)
    ))
}

#[derive(Debug, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case", deny_unknown_fields)]
enum ClosedFormSpec {
    Pointmass { alpha: f64, beta: f64 },
    Winkler { alpha: f64, r: f64 },
    AtomAtLambda { alpha: f64, beta: f64, lambda: f64 },
    Atoms { alpha: f64, atoms: Vec<(f64, f64)> },
    Homogeneous { c1: f64, c2: f64, #[serde(default)] c_free: f64 },
    Bessel { m: f64 },
}

fn closed_form_function(spec: ClosedFormSpec) -> Result<HamiltonianFunction> {
    let positive = |name: &str, v: f64| {
        if v > 0.0 && v.is_finite() {
            Ok(())
        } else {
            Err(CliError::input(format!("{name} must be positive, got {v}")))
        }
    };
    let nonnegative = |name: &str, v: f64| {
        if v >= 0.0 && v.is_finite() {
            Ok(())
        } else {
            Err(CliError::input(format!("{name} must be nonnegative, got {v}")))
        }
    };
    Ok(match spec {
        ClosedFormSpec::Pointmass { alpha, beta } => pointmass_hamiltonian(alpha, beta)?,
        ClosedFormSpec::Winkler { alpha, r } => {
            positive("alpha", alpha)?;
            nonnegative("r", r)?;
            HamiltonianFunction::diagonal(move |t| winkler_constant_h(alpha, r, t))
        }
        ClosedFormSpec::AtomAtLambda { alpha, beta, lambda } => {
            positive("alpha", alpha)?;
            nonnegative("beta", beta)?;
            HamiltonianFunction::diagonal(move |t| atom_at_lambda_h(alpha, beta, lambda, t))
        }
        ClosedFormSpec::Atoms { alpha, atoms } => atoms_hamiltonian(AtomSystem::new(alpha, atoms)?),
        ClosedFormSpec::Homogeneous { c1, c2, c_free } => homogeneous_hamiltonian(c1, c2, c_free)?,
        ClosedFormSpec::Bessel { m } => BesselSystem::new(m)?.hamiltonian(),
    })
}

fn load_reference(arg: &str) -> Result<Reference> {
    let text = load_text(arg)?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| CliError::input(format!("reference is not JSON: {e}")))?;
    if value.get("name").is_some() {
        let spec: ClosedFormSpec =
            serde_json::from_value(value).map_err(|e| CliError::input(format!("bad closed-form reference: {e}")))?;
        Ok(Reference::Function(closed_form_function(spec)?))
    } else {
        Ok(Reference::Steps(StepHamiltonian::from_json(&text)?))
    }
}

const CURVE_SAMPLES: usize = 400;

fn sample_reference(reference: &Reference, t_max: f64) -> Vec<(f64, f64)> {
    (0..=CURVE_SAMPLES)
        .map(|i| t_max * i as f64 / CURVE_SAMPLES as f64)
        .filter_map(|t| {
            let v = match reference {
                Reference::Function(f) => f.h11(t).ok()?,
                Reference::Steps(s) => s.step_at(t)?.h11,
            };
            Some((t, v))
        })
        .collect()
}

fn maybe_svg(plot: &Plot, h: &StepHamiltonian, fallback: Option<Reference>) -> Result<()> {
    let Some(path) = &plot.svg else {
        return Ok(());
    };
    if h.is_empty() {
        return Err(CliError::input("nothing to plot"));
    }
    let reference = match &plot.reference {
        Some(arg) => Some(load_reference(arg)?),
        None => fallback,
    };
    let curve = reference.map(|r| sample_reference(&r, h.t_max()));
    write_file(path, &render_svg(h, curve.as_deref(), plot.log_scale))
}

fn inverse(a: InverseArgs) -> Result<()> {
    let spec = load_measure(&a.measure)?;
    let n = match (a.order, a.t_max) {
        (Some(n), _) => n,
        (None, Some(t)) if t > 0.0 => default_order(t, a.half_period),
        (None, Some(t)) => return Err(CliError::input(format!("t_max must be positive, got {t}"))),
        (None, None) => return Err(CliError::input("give --N or --t-max")),
    };
    let pm = periodize(&spec, a.half_period)?;
    let m = trig_moments(&pm, n)?;
    let rec = InverseSolver::new(a.tol.pd_tol).recover(&m, n)?;
    let text = match a.output.format {
        Format::Csv => rec.hamiltonian.to_csv(),
        Format::Json => json_text(&json!({
            "half_period": a.half_period,
            "hamiltonian": rec.hamiltonian,
            "breakdown": rec.breakdown,
        })),
    };
    emit(&a.output, &text)?;
    maybe_svg(&a.plot, &rec.hamiltonian, None)?;
    match rec.breakdown {
        Some(b) => Err(breakdown_error(&b, "steps")),
        None => Ok(()),
    }
}

fn direct(a: DirectArgs) -> Result<()> {
    let h = match (&a.hamiltonian, &a.steps, a.step_length) {
        (Some(arg), _, _) => StepHamiltonian::from_json(&load_text(arg)?)?,
        (None, Some(steps), Some(len)) => StepHamiltonian::diagonal(len, steps)?,
        _ => return Err(CliError::input("give --hamiltonian or --steps with --step-length")),
    };
    if h.is_empty() {
        return Err(CliError::input("Hamiltonian has no steps"));
    }
    let n = a.order.unwrap_or(h.len() - 1);
    let v = verblunsky_from_steps(&h)?;
    let m = direct_moments(&h, n)?;
    let text = match a.output.format {
        Format::Csv => moments_csv(&m),
        Format::Json => json_text(&json!({
            "half_period": m.half_period(),
            "verblunsky": v,
            "moments": complex_pairs(m.as_slice()),
        })),
    };
    emit(&a.output, &text)
}

fn periodize_cmd(a: PeriodizeArgs) -> Result<()> {
    let spec = load_measure(&a.measure)?;
    let pm = periodize(&spec, a.half_period)?;
    let m = trig_moments(&pm, a.order)?;
    let text = match a.output.format {
        Format::Csv => moments_csv(&m),
        Format::Json => json_text(&json!({
            "half_period": a.half_period,
            "locally_infinite_support": locally_infinite_support(&pm),
            "moments": complex_pairs(m.as_slice()),
        })),
    };
    emit(&a.output, &text)
}

fn parse_profile(text: &str) -> Result<H11Profile> {
    let bad = || CliError::input(format!("bad profile {text}; use exp[:scale[:rate]] or poly:c0,c1,..."));
    let (kind, rest) = text.split_once(':').unwrap_or((text, ""));
    match kind {
        "exp" => {
            let parts: Vec<f64> = if rest.is_empty() {
                vec![]
            } else {
                rest.split(':').map(real).collect::<std::result::Result<_, _>>().map_err(|_| bad())?
            };
            match parts[..] {
                [] => Ok(H11Profile::Exp { scale: 1.0, rate: 1.0 }),
                [scale] => Ok(H11Profile::Exp { scale, rate: 1.0 }),
                [scale, rate] => Ok(H11Profile::Exp { scale, rate }),
                _ => Err(bad()),
            }
        }
        "poly" if !rest.is_empty() => Ok(H11Profile::Polynomial(
            rest.split(',').map(real).collect::<std::result::Result<_, _>>().map_err(|_| bad())?,
        )),
        _ => Err(bad()),
    }
}

fn dirac(a: DiracArgs) -> Result<()> {
    let profile = parse_profile(&a.profile)?;
    let h = dirac_step_hamiltonian(&profile, a.step, a.order)?;
    let text = match a.output.format {
        Format::Csv => h.to_csv(),
        Format::Json => {
            let v = verblunsky_from_steps(&h)?;
            let m = direct_moments(&h, h.len() - 1)?;
            json_text(&json!({
                "hamiltonian": h,
                "verblunsky": v,
                "moments": complex_pairs(m.as_slice()),
            }))
        }
    };
    emit(&a.output, &text)?;
    let p = profile.clone();
    let exact = Reference::Function(HamiltonianFunction::diagonal(move |t| p.value(t)));
    maybe_svg(&a.plot, &h, Some(exact))
}

fn closed_form(a: ClosedFormArgs) -> Result<()> {
    let spec = match a.name {
        ClosedFormName::Pointmass => ClosedFormSpec::Pointmass { alpha: a.alpha, beta: a.beta },
        ClosedFormName::Winkler => ClosedFormSpec::Winkler { alpha: a.alpha, r: a.r },
        ClosedFormName::AtomAtLambda => ClosedFormSpec::AtomAtLambda {
            alpha: a.alpha,
            beta: a.beta,
            lambda: a.lambda,
        },
        ClosedFormName::Atoms => ClosedFormSpec::Atoms {
            alpha: a.alpha,
            atoms: a.atoms.clone(),
        },
        ClosedFormName::Homogeneous => ClosedFormSpec::Homogeneous {
            c1: a.c1,
            c2: a.c2,
            c_free: a.c_free,
        },
        ClosedFormName::Bessel => ClosedFormSpec::Bessel { m: a.m },
    };
    let f = closed_form_function(spec)?;
    let grid: Vec<f64> = a.grid.0.iter().copied().filter(|&t| f.in_domain(t)).collect();
    if grid.is_empty() {
        return Err(CliError::input("no grid point lies in the domain"));
    }
    if grid.len() < a.grid.0.len() {
        eprintln!("note: skipped {} grid points outside the domain", a.grid.0.len() - grid.len());
    }
    let grid = &grid;
    let text = match a.output.format {
        Format::Csv => f.to_csv(grid)?,
        Format::Json => {
            let rows = grid
                .iter()
                .map(|&t| {
                    let v = f.eval(t)?;
                    Ok(json!({"t": t, "h11": v.h11, "g": v.g, "h22": v.h22}))
                })
                .collect::<std::result::Result<Vec<_>, Error>>()?;
            json_text(&serde_json::Value::Array(rows))
        }
    };
    emit(&a.output, &text)
}

fn rel_diff(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

fn validate(a: ValidateArgs) -> Result<()> {
    let spec = load_measure(&a.measure)?;
    let pm = periodize(&spec, a.half_period)?;
    let m = trig_moments(&pm, a.order)?;
    let solver = InverseSolver::new(a.tol.pd_tol);

    let fast = solver.recover(&m, a.order)?;
    let dense = solver.recover_dense(&m, a.order)?;
    let h_opuc = h_via_opuc_with(&m, a.order, a.tol.pd_tol)?;
    let g_opuc = g_via_opuc_with(&m, a.order, a.tol.pd_tol)?;

    let h_fast = fast.hamiltonian.h11();
    let g_fast = fast.hamiltonian.g();
    let h_dense = dense.hamiltonian.h11();
    let g_dense = dense.hamiltonian.g();
    let len = [h_fast.len(), h_dense.len(), h_opuc.values.len(), g_opuc.values.len()]
        .into_iter()
        .min()
        .unwrap_or(0);

    let mut worst = 0.0f64;
    for n in 0..len {
        for (x, y) in [
            (h_opuc.values[n], h_fast[n]),
            (h_dense[n], h_fast[n]),
            (g_opuc.values[n], g_fast[n]),
            (g_dense[n], g_fast[n]),
        ] {
            worst = worst.max(rel_diff(x, y));
        }
    }

    let steps: Vec<Step> = (0..len).map(|n| Step { h11: h_fast[n], g: g_fast[n] }).collect();
    let pin = pins::check(&m, &steps);

    let text = match a.output.format {
        Format::Csv => format::csv(
            &["n", "h_toeplitz", "h_opuc", "h_dense", "g_toeplitz", "g_opuc", "g_dense"],
            (0..len).map(|n| {
                vec![
                    n.to_string(),
                    format::num(h_fast[n]),
                    format::num(h_opuc.values[n]),
                    format::num(h_dense[n]),
                    format::num(g_fast[n]),
                    format::num(g_opuc.values[n]),
                    format::num(g_dense[n]),
                ]
            }),
        ),
        Format::Json => json_text(&json!({
            "orders": len,
            "max_route_difference": worst,
            "route_tol": a.route_tol,
            "pin": pin.as_ref().map(|p| json!({"name": p.name, "checked": p.checked, "max_error": p.max_error})),
            "h_toeplitz": h_fast,
            "h_opuc": h_opuc.values,
            "h_dense": h_dense,
            "g_toeplitz": g_fast,
            "g_opuc": g_opuc.values,
            "g_dense": g_dense,
        })),
    };
    emit(&a.output, &text)?;

    eprintln!("routes: {len} orders compared, max relative difference {worst:.3e}");
    if let Some(p) = &pin {
        eprintln!("known values ({}): {} steps checked, max error {:.3e}", p.name, p.checked, p.max_error);
    }
    if !(worst <= a.route_tol) {
        return Err(CliError::numerical(format!(
            "routes disagree: {worst:.3e} exceeds route tolerance {:.1e}",
            a.route_tol
        )));
    }
    if let Some(p) = pin {
        if !(p.max_error <= pins::TOL) {
            return Err(CliError::numerical(format!("known values for {} not reproduced", p.name)));
        }
    }
    match fast.breakdown.or(dense.breakdown).or(h_opuc.breakdown) {
        Some(b) => Err(breakdown_error(&b, "comparison")),
        None => Ok(()),
    }
}

fn sweep(a: SweepArgs) -> Result<()> {
    let spec = load_measure(&a.measure)?;
    let reference = load_reference(&a.reference)?;
    let report = convergence_sweep(&spec, &a.half_periods, &reference, &a.intervals, a.t_max, a.tol.pd_tol)?;
    let text = match a.output.format {
        Format::Csv => report.to_csv(),
        Format::Json => {
            let mut s = report.to_json();
            s.push('\n');
            s
        }
    };
    emit(&a.output, &text)?;
    if !report.arithmetic_progression {
        eprintln!("note: half-periods are not of the form T_n = n c");
    }
    let degraded: Vec<String> = report
        .entries
        .iter()
        .filter(|e| e.error.is_some() || e.breakdown_order.is_some())
        .map(|e| match &e.error {
            Some(msg) => format!("T = {}: {msg}", e.half_period),
            None => format!("T = {}: truncated at order {}", e.half_period, e.breakdown_order.unwrap_or(0)),
        })
        .collect();
    if degraded.is_empty() {
        Ok(())
    } else {
        Err(CliError::numerical(degraded.join("; ")))
    }
}
