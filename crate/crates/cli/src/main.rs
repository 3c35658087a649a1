//! `qsketch`: spectral sketches and correlation functions from Pauli-sum
//! input files.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use qsketch::algo::{
    complexity_report, correlate, kpm_sketch, sketch, CorrelationSpec, SketchKind, SketchMode, SketchRequest,
    SketchResult, Subject,
};
use qsketch::cheb::window_poly_with;
use qsketch::fmt::sig12;
use qsketch::oracle::{
    oracle_correlation, oracle_dos_integral, oracle_moments, oracle_response, uniform_weight, ResponseQuery,
};
use qsketch::prep::StateSpec;
use qsketch::{Error, Mode, Pauli64, Preparation};

const MAX_QUBITS: usize = 6;
const MAX_MOMENTS: usize = 4096;

#[derive(Parser, Debug)]
#[command(name = "qsketch", version, about = "Block-encoding sketches of spectral densities, linear response and correlation functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Estimate an n-time correlation function <O_1(t_1) ... O_n(t_n)>; prints JSON.
    Correlate(CorrelateArgs),
    /// Density of states: integral over [a, b] or Chebyshev moments; prints CSV.
    Dos(SketchArgs),
    /// Local density of states for the site state given by --state; prints CSV.
    Ldos(SketchArgs),
    /// Linear response <B f(H) C> against --state; prints CSV.
    Response(SketchArgs),
    /// Moments followed by the damped KPM reconstruction; prints `x,f_kpm` CSV.
    Kpm(KpmArgs),
    /// Window polynomial coefficients as CSV, with a certification summary on stderr.
    WindowPoly(WindowArgs),
    /// Unit-constant complexity report as JSON.
    Cost(CostArgs),
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Target precision, in (0, 1).
    #[arg(long, default_value_t = 0.05)]
    eps: f64,
    /// Failure probability, in (0, 1).
    #[arg(long, default_value_t = 0.05)]
    delta: f64,
    /// Seed for sampled mode.
    #[arg(long, env = "QSKETCH_SEED")]
    seed: Option<u64>,
    /// Exact expectation values or simulated measurement statistics.
    #[arg(long, value_enum, default_value_t = ModeArg::Sampled)]
    mode: ModeArg,
    /// Also report brute-force spectral values.
    #[arg(long)]
    oracle: bool,
    /// Write output here instead of stdout.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum ModeArg {
    Exact,
    Sampled,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Exact => Mode::Exact,
            ModeArg::Sampled => Mode::Sampled,
        }
    }
}

#[derive(Args, Debug)]
struct CorrelateArgs {
    /// Hamiltonian file (`<coefficient> <pauli-word>` per line).
    #[arg(long)]
    hamiltonian: PathBuf,
    /// Observable file; repeat once per observable, in operator order.
    #[arg(long = "observable", required = true)]
    observables: Vec<PathBuf>,
    /// Time of each observable, matched to --observable by position.
    #[arg(long = "time", required = true, allow_negative_numbers = true)]
    times: Vec<f64>,
    /// State file (`pure ...`, `basis i`, `mixed` or `thermal beta`).
    #[arg(long)]
    state: PathBuf,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug, Clone)]
struct SketchInputs {
    /// Hamiltonian file (`<coefficient> <pauli-word>` per line).
    #[arg(long)]
    hamiltonian: PathBuf,
    /// State file: the site state for ldos, the reference state for response.
    #[arg(long)]
    state: Option<PathBuf>,
    /// Left operator B for response.
    #[arg(long)]
    b: Option<PathBuf>,
    /// Right operator C for response.
    #[arg(long)]
    c: Option<PathBuf>,
    /// Integrate over [A, B] in energy units.
    #[arg(long, num_args = 2, value_names = ["A", "B"], allow_negative_numbers = true, conflicts_with = "moments")]
    integral: Option<Vec<f64>>,
    /// Chebyshev moments of orders 0..=N.
    #[arg(long, value_name = "N")]
    moments: Option<usize>,
    /// Bound on the normalized density of any eigenspace.
    #[arg(long, default_value_t = 1.0)]
    rho_max: f64,
    /// Permit window polynomials with relative width below 0.02.
    #[arg(long)]
    allow_large_window: bool,
}

#[derive(Args, Debug)]
struct SketchArgs {
    #[command(flatten)]
    inputs: SketchInputs,
    #[command(flatten)]
    common: Common,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum KindArg {
    Dos,
    Ldos,
    Response,
}

#[derive(Args, Debug)]
struct KpmArgs {
    #[arg(long, value_enum, default_value_t = KindArg::Dos)]
    kind: KindArg,
    /// Reconstruction grid points, evenly spaced inside (-1, 1).
    #[arg(long, default_value_t = 401)]
    grid_points: usize,
    #[command(flatten)]
    inputs: SketchInputs,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct WindowArgs {
    /// Left end of the window in scaled units.
    #[arg(long, allow_negative_numbers = true)]
    a: f64,
    /// Right end of the window in scaled units.
    #[arg(long, allow_negative_numbers = true)]
    b: f64,
    /// Relative accuracy eta.
    #[arg(long)]
    eta: f64,
    /// Permit eta below 0.02.
    #[arg(long)]
    allow_large: bool,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Algorithm {
    Correlate,
    Dos,
    Ldos,
    Response,
}

#[derive(Args, Debug)]
struct CostArgs {
    #[arg(long, value_enum)]
    algorithm: Algorithm,
    #[command(flatten)]
    inputs: SketchInputs,
    /// Observable files for correlate.
    #[arg(long = "observable")]
    observables: Vec<PathBuf>,
    /// Observable times for correlate.
    #[arg(long = "time", allow_negative_numbers = true)]
    times: Vec<f64>,
    #[arg(long, default_value_t = 0.05)]
    eps: f64,
    #[arg(long, default_value_t = 0.05)]
    delta: f64,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

/// A user-facing failure; the message already names the offending input.
#[derive(Debug)]
struct CliError(String);

type CliResult<T> = std::result::Result<T, CliError>;

fn fail<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError(msg.into()))
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError(e.to_string())
    }
}

fn with_file(path: &Path, e: Error) -> CliError {
    match e {
        Error::Parse { line, message } => CliError(format!("{}:{line}: {message}", path.display())),
        other => CliError(format!("{}: {other}", path.display())),
    }
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError(format!("{}: {e}", path.display())))
}

fn load_pauli(path: &Path) -> CliResult<Pauli64> {
    let s: Pauli64 = read(path)?.parse().map_err(|e| with_file(path, e))?;
    if s.qubits() > MAX_QUBITS {
        return fail(format!("{}: {} qubits exceeds the limit of {MAX_QUBITS}", path.display(), s.qubits()));
    }
    Ok(s)
}

fn load_state(path: &Path, h: &Pauli64) -> CliResult<Preparation> {
    let spec: StateSpec = read(path)?.parse().map_err(|e| with_file(path, e))?;
    spec.build(Some(h), h.dim()).map_err(|e| with_file(path, e))
}

fn check_common(eps: f64, delta: f64) -> CliResult<()> {
    if !(eps > 0.0 && eps < 1.0) {
        return fail(format!("--eps must lie in (0, 1), got {eps}"));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return fail(format!("--delta must lie in (0, 1), got {delta}"));
    }
    Ok(())
}

fn emit(output: Option<&Path>, text: &str) -> CliResult<()> {
    match output {
        Some(p) => fs::write(p, text).map_err(|e| CliError(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Rounds every float in a JSON tree to 12 significant digits.
fn round_json(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().unwrap_or(f64::NAN);
            sig12(x).parse::<f64>().ok().map(Value::from).unwrap_or(Value::Null)
        }
        Value::Array(a) => Value::Array(a.into_iter().map(round_json).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, round_json(v))).collect()),
        other => other,
    }
}

fn json_text(v: Value) -> CliResult<String> {
    serde_json::to_string_pretty(&round_json(v))
        .map(|s| s + "\n")
        .map_err(|e| CliError(e.to_string()))
}

fn build_request(inputs: &SketchInputs, kind: KindArg, eps: f64, delta: f64) -> CliResult<SketchRequest<f64>> {
    let h = load_pauli(&inputs.hamiltonian)?;
    let mode = match (&inputs.integral, inputs.moments) {
        (Some(ab), None) => SketchMode::Integral { a: ab[0], b: ab[1] },
        (None, Some(n)) if n <= MAX_MOMENTS => SketchMode::Moments(n),
        (None, Some(n)) => return fail(format!("--moments {n} exceeds the limit of {MAX_MOMENTS}")),
        _ => return fail("exactly one of --integral A B or --moments N is required"),
    };
    let need_state = |what: &str| -> CliResult<Preparation> {
        match &inputs.state {
            Some(p) => load_state(p, &h),
            None => fail(format!("{what} needs --state")),
        }
    };
    let kind = match kind {
        KindArg::Dos => SketchKind::Dos,
        KindArg::Ldos => SketchKind::Ldos(need_state("ldos")?),
        KindArg::Response => {
            let (Some(b), Some(c)) = (&inputs.b, &inputs.c) else {
                return fail("response needs --b and --c");
            };
            let (b, c) = (load_pauli(b)?, load_pauli(c)?);
            for (op, p) in [(&b, &inputs.b), (&c, &inputs.c)] {
                if op.qubits() != h.qubits() {
                    return fail(format!(
                        "{}: {} qubits, Hamiltonian has {}",
                        p.as_ref().map(|p| p.display().to_string()).unwrap_or_default(),
                        op.qubits(),
                        h.qubits()
                    ));
                }
            }
            SketchKind::Response { b, c, state: need_state("response")? }
        }
    };
    Ok(SketchRequest::new(h, kind, mode, eps, delta)
        .with_rho_max(inputs.rho_max)
        .allow_large_window(inputs.allow_large_window))
}

/// Oracle values per row: real for densities, complex for response.
fn oracle_rows(req: &SketchRequest<f64>) -> CliResult<Vec<(f64, f64)>> {
    let h = &req.hamiltonian;
    let alpha = h.scale();
    Ok(match (&req.kind, req.mode) {
        (SketchKind::Response { b, c, state }, mode) => {
            let rho = state.reduced_density();
            let queries: Vec<ResponseQuery<f64>> = match mode {
                SketchMode::Integral { a, b } => vec![ResponseQuery::Integral { a, b }],
                SketchMode::Moments(n) => (0..=n).map(|n| ResponseQuery::Moment { n, alpha }).collect(),
            };
            queries
                .into_iter()
                .map(|q| oracle_response(h, b, c, &rho, q).map(|z| (z.re, z.im)))
                .collect::<Result<_, _>>()?
        }
        (kind, mode) => {
            let weight = match kind {
                SketchKind::Ldos(s) => s.reduced_density(),
                _ => uniform_weight(h.dim()),
            };
            match mode {
                SketchMode::Integral { a, b } => vec![(oracle_dos_integral(h, a, b, Some(&weight))?, 0.0)],
                SketchMode::Moments(n) => oracle_moments(h, alpha, n, &weight)?.into_iter().map(|m| (m, 0.0)).collect(),
            }
        }
    })
}

fn sketch_csv(res: &SketchResult, oracle: Option<(&[(f64, f64)], bool)>) -> String {
    let mut out = String::from("n,value_re,value_im,queries");
    match oracle {
        Some((_, true)) => out.push_str(",oracle_re,oracle_im"),
        Some((_, false)) => out.push_str(",oracle"),
        None => {}
    }
    out.push('\n');
    for (i, (v, n)) in res.values.iter().zip(&res.chebyshev_orders).enumerate() {
        let _ = write!(out, "{n},{},{},{}", sig12(v.value.re), sig12(v.value.im), v.grover_queries);
        if let Some((rows, complex)) = oracle {
            let (re, im) = rows[i];
            if complex {
                let _ = write!(out, ",{},{}", sig12(re), sig12(im));
            } else {
                let _ = write!(out, ",{}", sig12(re));
            }
        }
        out.push('\n');
    }
    out
}

fn run_sketch(args: &SketchArgs, kind: KindArg) -> CliResult<()> {
    let c = &args.common;
    check_common(c.eps, c.delta)?;
    let req = build_request(&args.inputs, kind, c.eps, c.delta)?;
    let res = sketch(&req, c.mode.into(), c.seed)?;
    let rows = if c.oracle { Some(oracle_rows(&req)?) } else { None };
    let complex = matches!(kind, KindArg::Response);
    let csv = sketch_csv(&res, rows.as_deref().map(|r| (r, complex)));
    emit(c.output.as_deref(), &csv)?;
    if let Some(w) = &res.window_meta {
        eprintln!(
            "window: eta_rel={} n={} k={} d={} tau={}",
            sig12(w.eta_rel),
            w.jackson_degree,
            w.amplifier_order,
            w.degree,
            sig12(w.tau)
        );
    }
    Ok(())
}

fn run_correlate(args: &CorrelateArgs) -> CliResult<()> {
    let c = &args.common;
    check_common(c.eps, c.delta)?;
    let spec = correlation_spec(&args.hamiltonian, &args.observables, &args.times, &args.state, c.eps, c.delta)?;
    let res = correlate(&spec, c.mode.into(), c.seed)?;
    let mut v = serde_json::to_value(&res).map_err(|e| CliError(e.to_string()))?;
    if c.oracle {
        let o = oracle_correlation(&spec.hamiltonian, &spec.observables, &spec.state.reduced_density())?;
        if let Value::Object(m) = &mut v {
            m.insert("oracle_re".into(), json!(o.re));
            m.insert("oracle_im".into(), json!(o.im));
        }
    }
    emit(c.output.as_deref(), &json_text(v)?)
}

fn correlation_spec(
    h: &Path,
    observables: &[PathBuf],
    times: &[f64],
    state: &Path,
    eps: f64,
    delta: f64,
) -> CliResult<CorrelationSpec<f64>> {
    if observables.len() != times.len() {
        return fail(format!(
            "{} --observable files but {} --time values",
            observables.len(),
            times.len()
        ));
    }
    let hamiltonian = load_pauli(h)?;
    let mut obs = Vec::with_capacity(observables.len());
    for (p, &t) in observables.iter().zip(times) {
        let o = load_pauli(p)?;
        if o.qubits() != hamiltonian.qubits() {
            return fail(format!("{}: {} qubits, Hamiltonian has {}", p.display(), o.qubits(), hamiltonian.qubits()));
        }
        obs.push((o, t));
    }
    let state = load_state(state, &hamiltonian)?;
    Ok(CorrelationSpec {
        hamiltonian,
        observables: obs,
        state,
        eps,
        delta,
    })
}

fn run_kpm(args: &KpmArgs) -> CliResult<()> {
    let c = &args.common;
    check_common(c.eps, c.delta)?;
    if args.inputs.integral.is_some() {
        return fail("kpm needs --moments N");
    }
    if args.grid_points == 0 {
        return fail("--grid-points must be positive");
    }
    let req = build_request(&args.inputs, args.kind, c.eps, c.delta)?;
    let m = args.grid_points;
    let grid: Vec<f64> = (0..m).map(|i| -1.0 + 2.0 * (i as f64 + 0.5) / m as f64).collect();
    let (_, f) = kpm_sketch(&req, &grid, c.mode.into(), c.seed)?;
    let mut out = String::from("x,f_kpm\n");
    for (x, y) in grid.iter().zip(&f) {
        let _ = writeln!(out, "{},{}", sig12(*x), sig12(*y));
    }
    emit(c.output.as_deref(), &out)
}

fn run_window(args: &WindowArgs) -> CliResult<()> {
    let w = window_poly_with(args.a, args.b, args.eta, args.allow_large)?;
    emit(args.output.as_deref(), &w.to_csv())?;
    eprintln!(
        "n={} k={} tau={} d={} max_violation={} max_abs={} grid_points={} extrema_points={}",
        w.jackson_degree,
        w.amplifier_order,
        sig12(w.tau),
        w.degree(),
        sig12(w.certificate.max_violation),
        sig12(w.certificate.max_abs),
        w.certificate.grid_points,
        w.certificate.extrema_points
    );
    Ok(())
}

fn run_cost(args: &CostArgs) -> CliResult<()> {
    check_common(args.eps, args.delta)?;
    let rep = match args.algorithm {
        Algorithm::Correlate => {
            let Some(state) = &args.inputs.state else {
                return fail("correlate needs --state");
            };
            let spec = correlation_spec(&args.inputs.hamiltonian, &args.observables, &args.times, state, args.eps, args.delta)?;
            complexity_report(Subject::Correlation(&spec))?
        }
        alg => {
            let kind = match alg {
                Algorithm::Dos => KindArg::Dos,
                Algorithm::Ldos => KindArg::Ldos,
                _ => KindArg::Response,
            };
            let req = build_request(&args.inputs, kind, args.eps, args.delta)?;
            complexity_report(Subject::Sketch(&req))?
        }
    };
    let mut terms = Map::new();
    for (k, v) in &rep.terms {
        terms.insert(k.clone(), json!(v));
    }
    let v = json!({ "algorithm": rep.algorithm, "terms": terms });
    emit(args.output.as_deref(), &json_text(v)?)
}

fn run(cli: Cli) -> CliResult<()> {
    match &cli.command {
        Command::Correlate(a) => run_correlate(a),
        Command::Dos(a) => run_sketch(a, KindArg::Dos),
        Command::Ldos(a) => run_sketch(a, KindArg::Ldos),
        Command::Response(a) => run_sketch(a, KindArg::Response),
        Command::Kpm(a) => run_kpm(a),
        Command::WindowPoly(a) => run_window(a),
        Command::Cost(a) => run_cost(a),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
