use std::fs;
use std::io::{self, Write};
use std::path::Path;

use csrkn::convergence::{convergence_study, ConvergenceError, Reference, ReferenceMethod};
use csrkn::integrator::{integrate, SolverConfig, SolverMode};
use csrkn::methods::{benchmark_method, MethodError, MethodSpec, Preset, BENCHMARK_METHODS};
use csrkn::poly::{BiPoly, UniPoly};
use csrkn::problems::{by_name, PROBLEM_NAMES};
use csrkn::tableau::{induce_rkn, parse_tableau, swap_roles, write_tableau, CsPrkTableau, Tableau, TableauError, BUILTINS};

use crate::args::{ConvergenceArgs, Format, InduceArgs, IntegrateArgs, MethodArgs, Solver, SolverArgs, VerifyArgs};
use crate::output::{error_columns, trajectory_svg, write_convergence_csv, write_trajectory_csv};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Verification(String),
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Verification(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Verification(m) | CliError::Numerical(m) => m,
        }
    }
}

fn usage(msg: impl ToString) -> CliError {
    CliError::Usage(msg.to_string())
}

impl From<MethodError> for CliError {
    fn from(e: MethodError) -> Self {
        match e {
            MethodError::Integrator(e) => CliError::Numerical(e.to_string()),
            other => usage(other),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        usage(e)
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        usage(e)
    }
}

fn parse_params(raw: &[String]) -> Result<Vec<(String, f64)>, CliError> {
    raw.iter()
        .map(|p| {
            let (name, value) = p.split_once('=').ok_or_else(|| usage(format!("parameter `{p}` is not NAME=VALUE")))?;
            let value: f64 = value.trim().parse().map_err(|_| usage(format!("parameter `{p}` has a non-numeric value")))?;
            if !value.is_finite() {
                return Err(usage(format!("parameter `{p}` is not finite")));
            }
            Ok((name.trim().to_string(), value))
        })
        .collect()
}

fn load_tableau(path: &Path) -> Result<Tableau, CliError> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    parse_tableau(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

/// Resolves `--method`/`--param`/`--tableau` into a method. Named
/// parameters fill the family's slots; on a benchmark id they override its
/// defaults.
pub fn resolve_method(args: &MethodArgs) -> Result<MethodSpec, CliError> {
    if let Some(path) = &args.tableau {
        if !args.params.is_empty() {
            return Err(usage("--param cannot be combined with --tableau"));
        }
        return Ok(MethodSpec::from_tableau(path.display().to_string(), load_tableau(path)?));
    }
    let name = args.method.as_deref().ok_or_else(|| usage("one of --method or --tableau is required"))?;
    let params = parse_params(&args.params)?;
    let bench = benchmark_method(name);
    if params.is_empty() && (bench.is_some() || name.to_ascii_lowercase().starts_with("glrk")) {
        return Ok(MethodSpec::resolve(name, &[])?);
    }

    let (family, defaults): (&str, Option<&[f64]>) = match bench {
        Some(m) if m.family == "glrk" => return Err(usage(format!("{} takes no parameters", m.id))),
        Some(m) => (m.family, Some(m.params)),
        None => (name, None),
    };
    let info = BUILTINS.iter().find(|b| b.name == family).ok_or_else(|| usage(format!("unknown method `{name}`")))?;
    let mut values: Vec<Option<f64>> = match defaults {
        Some(d) => d.iter().copied().map(Some).collect(),
        None => vec![None; info.params.len()],
    };
    for (pname, v) in params {
        let slot = info
            .params
            .iter()
            .position(|&p| p == pname)
            .ok_or_else(|| usage(format!("`{family}` has no parameter `{pname}` (expects {})", info.params.join(", "))))?;
        values[slot] = Some(v);
    }
    let values: Vec<f64> = values
        .iter()
        .zip(info.params)
        .map(|(v, p)| v.ok_or_else(|| usage(format!("`{family}` needs --param {p}=VALUE"))))
        .collect::<Result<_, _>>()?;
    Ok(MethodSpec::resolve(family, &values)?)
}

fn solver_config(args: &SolverArgs) -> Result<SolverConfig, CliError> {
    let cfg = SolverConfig {
        mode: match args.solver {
            Solver::Fixed => SolverMode::FixedPoint,
            Solver::Newton => SolverMode::NewtonOnStall,
        },
        tol: args.tol,
        max_iter: args.max_iter,
        ..SolverConfig::default()
    };
    cfg.validate().map_err(usage)?;
    Ok(cfg)
}

fn problem(name: &str) -> Result<csrkn::problems::SecondOrderProblem, CliError> {
    by_name(name).ok_or_else(|| usage(format!("unknown problem `{name}` (expected one of {})", PROBLEM_NAMES.join(", "))))
}

fn emit(out: Option<&Path>, write: impl FnOnce(&mut dyn Write) -> Result<(), CliError>) -> Result<(), CliError> {
    match out {
        Some(path) => {
            let mut file = io::BufWriter::new(fs::File::create(path).map_err(|e| usage(format!("{}: {e}", path.display())))?);
            write(&mut file)?;
            file.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            write(&mut lock)?;
            lock.flush()?;
        }
    }
    Ok(())
}

pub fn list() -> String {
    let mut s = String::from("Benchmark methods\n");
    s += &format!("{:<7}{:<18}{:<22}{:<7}{}\n", "id", "family", "parameters", "order", "energy-preserving");
    for m in BENCHMARK_METHODS.iter() {
        let params = BUILTINS
            .iter()
            .find(|b| b.name == m.family)
            .map(|b| b.params.iter().zip(m.params).map(|(n, v)| format!("{n}={v}")).collect::<Vec<_>>().join(" "))
            .unwrap_or_else(|| format!("stages={}", m.params[0]));
        s += &format!(
            "{:<7}{:<18}{:<22}{:<7}{}\n",
            m.id,
            m.family,
            params,
            m.nominal_order,
            if m.energy_preserving { "yes" } else { "no" }
        );
    }
    s += "\nBuiltin families\n";
    for b in BUILTINS {
        let kind = if b.rkn { "csrkn" } else { "csprk" };
        s += &format!("{:<18}{:<7}{:<16}{}\n", b.name, kind, b.params.join(","), b.summary);
    }
    s += "\nProblems\n";
    s += &PROBLEM_NAMES.join(" ");
    s += "\n\nPresets (h = 0.1, 10000 steps)\n";
    for p in Preset::ALL {
        let points: Vec<String> =
            BENCHMARK_METHODS.iter().filter_map(|m| p.quad_points(m.id).map(|k| format!("{}={k}", m.id))).collect();
        s += &format!("{:<12}{:<10}k: {}\n", p.name(), p.problem(), points.join(" "));
    }
    s
}

pub fn verify(args: &VerifyArgs) -> Result<String, CliError> {
    if args.tol.is_nan() || args.tol <= 0.0 {
        return Err(usage("--tol must be positive"));
    }
    let spec = resolve_method(&args.method)?;
    let MethodSpec::Tableau { tableau, .. } = &spec else {
        return Err(usage(format!(
            "{spec} is a classical Runge-Kutta method; there are no continuous-stage conditions to verify"
        )));
    };
    let report = tableau.verify(args.tol);
    let kind = match tableau {
        Tableau::Rkn(_) => "csRKN",
        Tableau::Prk(_) => "csPRK",
    };
    let text = format!("{spec} ({kind})\n{report}\n");
    if report.overall {
        Ok(text)
    } else {
        Err(CliError::Verification(text))
    }
}

pub fn integrate_cmd(args: &IntegrateArgs) -> Result<String, CliError> {
    let preset = args
        .preset
        .as_deref()
        .map(|p| Preset::parse(p).ok_or_else(|| usage(format!("unknown preset `{p}` (paper-fig1, paper-fig2, paper-fig3)"))))
        .transpose()?;
    let spec = resolve_method(&args.method)?;
    let problem_name =
        args.problem.as_deref().or(preset.map(|p| p.problem())).ok_or_else(|| usage("--problem is required without --preset"))?;
    let prob = problem(problem_name)?;
    let h = args.h.or(preset.map(|p| p.h())).unwrap_or(0.1);
    let steps = args.steps.or(preset.map(|p| p.steps())).unwrap_or(10_000);
    if !(h > 0.0 && h.is_finite()) {
        return Err(usage("--h must be positive and finite"));
    }
    if steps == 0 {
        return Err(usage("--steps must be at least 1"));
    }
    let k = args.quad_points.or_else(|| {
        let (preset, id) = (preset?, args.method.method.as_deref()?);
        args.method.params.is_empty().then(|| preset.quad_points(id)).flatten()
    });
    if spec.needs_quadrature() && k.is_none() {
        return Err(usage(format!("{spec} needs --quad-points (or a --preset that sets it)")));
    }
    let cfg = solver_config(&args.solver)?;
    let stepper = spec.stepper(k)?;
    let traj = integrate(&*stepper, &prob, h, steps, &cfg, true).map_err(|e| CliError::Numerical(e.to_string()))?;

    emit(args.out.as_deref(), |w| {
        match args.format {
            Format::Csv => write_trajectory_csv(w, &traj)?,
            Format::Svg => w.write_all(trajectory_svg(&format!("{spec} on {problem_name}, h = {h}"), &traj).as_bytes())?,
        }
        Ok(())
    })?;

    let mut summary = format!("{spec} on {problem_name}: h = {h}, {steps} steps");
    if let Some(k) = k.filter(|_| spec.needs_quadrature()) {
        summary += &format!(", {k} Gauss points");
    }
    for (name, values) in error_columns(&traj) {
        summary += &format!("\n  max {name} = {:.3e}", values.iter().copied().fold(0.0, f64::max));
    }
    Ok(summary)
}

pub fn convergence(args: &ConvergenceArgs) -> Result<String, CliError> {
    let spec = resolve_method(&args.method)?;
    let prob = problem(&args.problem)?;
    if spec.needs_quadrature() && args.quad_points.is_none() {
        return Err(usage(format!("{spec} needs --quad-points")));
    }
    let cfg = solver_config(&args.solver)?;
    let stepper = spec.stepper(args.quad_points)?;
    let (member, order) = spec.reference_member();
    let reference = member.stepper(args.quad_points)?;
    let result = convergence_study(
        &*stepper,
        &prob,
        args.t_end,
        &args.h_list,
        &cfg,
        Some(ReferenceMethod { stepper: &*reference, order }),
    )
    .map_err(|e| match e {
        ConvergenceError::Integrator(e) => CliError::Numerical(e.to_string()),
        other => usage(other),
    })?;

    emit(args.out.as_deref(), |w| Ok(write_convergence_csv(w, &result.hs, &result.errors)?))?;
    let reference = match result.reference {
        Reference::Exact => "exact solution".to_string(),
        Reference::Richardson { h, order } => {
            format!("Richardson extrapolation of {member} (order {order}) from h = {h} and h = {}", h / 2.0)
        }
    };
    let local: Vec<String> = result.local_orders().iter().map(|o| format!("{o:.3}")).collect();
    Ok(format!(
        "{spec} on {}: T = {}\nreference: {reference}\nlocal orders: {}\nslope: {:.4}",
        args.problem,
        args.t_end,
        local.join(" "),
        result.slope
    ))
}

fn rounded(x: f64) -> f64 {
    format!("{x:.13e}").parse().unwrap_or(x)
}

fn term(c: f64, powers: &[(&str, usize)]) -> String {
    let vars: Vec<String> =
        powers.iter().filter(|(_, p)| *p > 0).map(|(v, p)| if *p == 1 { v.to_string() } else { format!("{v}^{p}") }).collect();
    match (vars.is_empty(), rounded(c)) {
        (true, c) => format!("{c}"),
        (false, 1.0) => vars.join(" "),
        (false, -1.0) => format!("-{}", vars.join(" ")),
        (false, c) => format!("{c} {}", vars.join(" ")),
    }
}

fn join_terms(terms: Vec<String>) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    terms.iter().skip(1).fold(terms[0].clone(), |acc, t| match t.strip_prefix('-') {
        Some(rest) => format!("{acc} - {rest}"),
        None => format!("{acc} + {t}"),
    })
}

const PRINT_EPS: f64 = 1e-14;

fn show_uni(p: &UniPoly, var: &str) -> String {
    join_terms(p.coeffs().iter().enumerate().filter(|(_, c)| c.abs() > PRINT_EPS).map(|(i, &c)| term(c, &[(var, i)])).collect())
}

fn show_bi(p: &BiPoly) -> String {
    let mut terms = Vec::new();
    for (i, row) in p.rows().iter().enumerate() {
        for (j, &c) in row.iter().enumerate() {
            if c.abs() > PRINT_EPS {
                terms.push(term(c, &[("t", i), ("s", j)]));
            }
        }
    }
    join_terms(terms)
}

fn prk_source(args: &MethodArgs) -> Result<(String, CsPrkTableau), CliError> {
    let spec = resolve_method(args)?;
    match spec {
        MethodSpec::Tableau { label, tableau: Tableau::Prk(prk), .. } => Ok((label, prk)),
        other => Err(usage(format!("{other} is not a csPRK tableau; induce needs ex2_prk, ex3_prk or a csprk file"))),
    }
}

pub fn induce(args: &InduceArgs) -> Result<String, CliError> {
    let out = args.out.as_deref().ok_or_else(|| usage("induce needs --out PATH"))?;
    let (label, mut prk) = prk_source(&args.method)?;
    if args.swap {
        prk = swap_roles(&prk);
    }
    let rkn = induce_rkn(&prk).map_err(|e| match e {
        TableauError::NotEnergyPreserving(report) => {
            CliError::Verification(format!("{label} is not energy-preserving\n{report}\n"))
        }
        other => usage(other),
    })?;
    let text = write_tableau(&Tableau::Rkn(rkn.clone()));
    let header = format!("# induced from {label}{}\n", if args.swap { " with roles swapped" } else { "" });
    fs::write(out, header + &text).map_err(|e| usage(format!("{}: {e}", out.display())))?;

    let mut s = format!("induced csRKN from {label}{}\n", if args.swap { " (swapped)" } else { "" });
    s += &format!("Abar(t,s) = {}\n", show_bi(&rkn.a_bar));
    s += &format!("Bbar(t)   = {}\n", show_uni(&rkn.b_bar, "t"));
    s += &format!("B(t)      = {}\n", show_uni(&rkn.b, "t"));
    s += &format!("C(t)      = {}\n", show_uni(&rkn.c, "t"));
    if let Some(a) = &rkn.witness_a {
        s += &format!("A(t,s)    = {}  (witness)\n", show_bi(a));
    }
    s += &format!("written to {}", out.display());
    Ok(s)
}
