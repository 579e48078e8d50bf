//! `duospin` — synthesize, verify and analyze time-optimal pulses that
//! drive two uncoupled spin-½ systems, sharing one bounded control
//! field, to simultaneous rotation targets.
//!
//! Subcommands:
//!
//! * `solve`             — synthesize a certified minimum-time selective pulse,
//! * `simulate`          — re-propagate a saved pulse and check its fidelities,
//! * `robustness`        — sweep gate fidelity over amplitude-gain errors,
//! * `rb`                — simulated randomized benchmarking of a gate set,
//! * `compare-composite` — time the pulse against a conventional composite sequence,
//! * `reachset`          — sample the reachable-boundary surface at a fixed time.
//!
//! Exit codes: 0 success, 1 runtime failure, 2 bad usage, 3 target not
//! found/reached within the configured search limits, 4 verification
//! failure.

use clap::{Args, Parser, Subcommand};
use duospin_core::certificate::{parse_angle, parse_axis, parse_rational};
use duospin_core::general::reachable_surface;
use duospin_core::rb::{ideal_realizer, toc_realizer};
use duospin_core::sim::passing_fraction;
use duospin_core::tol::{self, Tolerances};
use duospin_core::{
    compare_composite, propagate_distorted, robustness_map, run_rb, solve_rotation, Branch,
    ControlField, DistortionModel, Error as CoreError, OrbitPoint, RbConfig, RotationTarget,
    SolutionDocument, SolveOptions, SolveRequest, TocSolution,
};
use num::rational::BigRational;
use num::ToPrimitive;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(
    name = "duospin",
    version,
    about = "Time-optimal simultaneous control of two uncoupled spin-1/2 systems",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize a certified minimum-time selective rotation pulse.
    Solve(SolveArgs),
    /// Re-propagate a saved pulse independently and verify its fidelities.
    Simulate(SimulateArgs),
    /// Sweep the joint gate fidelity over per-axis amplitude-gain errors.
    Robustness(RobustnessArgs),
    /// Run simulated randomized benchmarking of single-spin Clifford gates.
    Rb(RbArgs),
    /// Compare minimum pulse times against a conventional composite sequence.
    CompareComposite(CompareArgs),
    /// Sample the reachable-boundary surface in orbit space at a fixed time.
    Reachset(ReachsetArgs),
}

#[derive(Args)]
struct SolveArgs {
    /// Gyromagnetic ratio gamma = gamma2/gamma1 as an exact rational:
    /// "2514/10000", "0.2514", "1/2", ...
    #[arg(long)]
    gamma: String,
    /// Rotation angle for spin 1: "pi", "pi/2", "3pi/4", "0.75pi", or
    /// plain radians ("1.5707963").
    #[arg(long)]
    theta: String,
    /// Rotation axis: "x", "y", "z", or "nx,ny,nz".
    #[arg(long, default_value = "y")]
    axis: String,
    /// Exact theta/pi as a rational, when theta was given in plain
    /// radians but is known to be a rational multiple of pi.
    #[arg(long)]
    q_exact: Option<String>,
    /// Enumeration bound for the resonance indices (m, l, k).  When
    /// omitted, the solver retries with growing bounds (12..192) before
    /// giving up.
    #[arg(long)]
    bound: Option<i64>,
    /// Physical gyromagnetic ratio of spin 1 in rad/(s*field-unit).
    #[arg(long, default_value_t = 1.0)]
    gamma1: f64,
    /// Physical control-amplitude bound D (field units).
    #[arg(long, default_value_t = 1.0)]
    amplitude: f64,
    /// Skip the exact-rational optimality certificate.
    #[arg(long)]
    no_certify: bool,
    /// Print the full solution document as JSON on stdout.
    #[arg(long)]
    json: bool,
    /// Write the solution document to this file (TOML, or JSON for a
    /// .json extension).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Export the laboratory waveform B(t) = -2 u(t) as CSV
    /// (t_seconds,Bx,By,Bz) to this file.
    #[arg(long)]
    waveform: Option<PathBuf>,
    /// Waveform sample rate in samples per second.  Defaults to 2000
    /// samples per normalized time unit.  A rate below the waveform's
    /// Nyquist rate triggers a warning.
    #[arg(long)]
    sample_rate: Option<f64>,
}

#[derive(Args)]
struct SimulateArgs {
    /// Solution document produced by `duospin solve --out` (TOML or JSON).
    #[arg(long)]
    solution: PathBuf,
    /// Number of integration steps for the independent propagator.
    #[arg(long, default_value_t = 20_000)]
    steps: usize,
    /// First-order low-pass filter constant of the amplifier chain, in
    /// normalized time units (0 = no filtering).
    #[arg(long, default_value_t = 0.0)]
    tau: f64,
    /// Per-axis amplitude gains "ex,ey,ez" (1,1,1 = calibrated).
    #[arg(long, default_value = "1,1,1")]
    eta: String,
    /// Relative miscalibration of the ratio gamma.
    #[arg(long, default_value_t = 0.0)]
    gamma_shift: f64,
    /// Print the result as JSON instead of a human summary.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct RobustnessArgs {
    /// Solution document produced by `duospin solve --out` (TOML or JSON).
    #[arg(long)]
    solution: PathBuf,
    /// Smallest per-axis gain in the sweep.
    #[arg(long, default_value_t = 0.97)]
    eta_min: f64,
    /// Largest per-axis gain in the sweep.
    #[arg(long, default_value_t = 1.03)]
    eta_max: f64,
    /// Number of gain values per axis (the grid is this value cubed).
    #[arg(long, default_value_t = 5)]
    eta_steps: usize,
    /// Low-pass filter constant shared by all grid points.
    #[arg(long, default_value_t = 0.0)]
    tau: f64,
    /// Integration steps per propagation.
    #[arg(long, default_value_t = 4_000)]
    steps: usize,
    /// Fidelity threshold for the pass-fraction summary.
    #[arg(long, default_value_t = 0.999)]
    threshold: f64,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RbArgs {
    /// Gyromagnetic ratio gamma = gamma2/gamma1 as an exact rational.
    #[arg(long, default_value = "2514/10000")]
    gamma: String,
    /// Comma-separated sequence lengths, e.g. "1,2,5,10,20,50".
    #[arg(long, default_value = "1,2,5,10,20,35,50")]
    lengths: String,
    /// Random sequences per length.
    #[arg(long, default_value_t = 32)]
    sequences: usize,
    /// RNG seed for sequence sampling.
    #[arg(long, default_value_t = 0x00DE_C0DE)]
    seed: u64,
    /// Realize each Clifford as a synthesized selective pulse on spin 1
    /// (identity on spin 2) instead of the ideal gate.
    #[arg(long)]
    pulsed: bool,
    /// Integration steps per pulse when --pulsed is set.
    #[arg(long, default_value_t = 2_000)]
    steps_per_pulse: usize,
    /// Low-pass filter constant applied to every pulse.
    #[arg(long, default_value_t = 0.0)]
    tau: f64,
    /// Per-axis amplitude gains "ex,ey,ez".
    #[arg(long, default_value = "1,1,1")]
    eta: String,
    /// Relative miscalibration of the ratio gamma.
    #[arg(long, default_value_t = 0.0)]
    gamma_shift: f64,
    /// Physical gyromagnetic ratio of spin 1 (with --pulsed).
    #[arg(long, default_value_t = 1.0)]
    gamma1: f64,
    /// Physical control-amplitude bound D (with --pulsed).
    #[arg(long, default_value_t = 1.0)]
    amplitude: f64,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    /// Gyromagnetic ratio gamma = gamma2/gamma1 as an exact rational.
    #[arg(long)]
    gamma: String,
    /// Rotation axis for both realizations.
    #[arg(long, default_value = "y")]
    axis: String,
    /// Smallest rotation angle (same grammar as `solve --theta`).
    #[arg(long, default_value = "0.4pi")]
    theta_min: String,
    /// Largest rotation angle.
    #[arg(long, default_value = "1.3pi")]
    theta_max: String,
    /// Number of angles, spaced uniformly.
    #[arg(long, default_value_t = 12)]
    points: usize,
    /// Physical gyromagnetic ratio of spin 1.
    #[arg(long, default_value_t = 1.0)]
    gamma1: f64,
    /// Physical control-amplitude bound D.
    #[arg(long, default_value_t = 1.0)]
    amplitude: f64,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReachsetArgs {
    /// Gyromagnetic ratio gamma = gamma2/gamma1 (rational or decimal).
    #[arg(long)]
    gamma: String,
    /// Evolution time in normalized units.
    #[arg(long)]
    t: f64,
    /// Grid resolution per parameter (the surface is grid x grid).
    #[arg(long, default_value_t = 64)]
    grid: usize,
    /// Smallest drift frequency omega in the scan.
    #[arg(long, default_value_t = -6.0)]
    omega_min: f64,
    /// Largest drift frequency omega in the scan.
    #[arg(long, default_value_t = 6.0)]
    omega_max: f64,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// CLI failure carrying its exit code.
enum CliError {
    /// Bad flag values discovered after clap parsing (exit 2).
    Usage(String),
    /// A library error (exit 2, 3, 4 or 1 depending on the kind).
    Core(CoreError),
    /// Filesystem problems (exit 1).
    Io(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::Core(err) => write!(f, "{err}"),
            CliError::Io(msg) => write!(f, "{msg}"),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(err: CoreError) -> Self {
        CliError::Core(err)
    }
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io(_) => 1,
            CliError::Core(err) => match err {
                CoreError::InvalidTarget(_) | CoreError::InvalidBound(_) => 2,
                CoreError::NotFound { .. } | CoreError::NotReached { .. } => 3,
                CoreError::VerificationFailed { .. } => 4,
                CoreError::Internal(_) | CoreError::Document(_) => 1,
            },
        }
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        // clap's own exit: 2 for usage errors, 0 for --help/--version.
        Err(err) => err.exit(),
    };
    let outcome = match cli.command {
        Command::Solve(args) => run_solve(args),
        Command::Simulate(args) => run_simulate(args),
        Command::Robustness(args) => run_robustness(args),
        Command::Rb(args) => run_rb_command(args),
        Command::CompareComposite(args) => run_compare(args),
        Command::Reachset(args) => run_reachset(args),
    };
    if let Err(err) = outcome {
        eprintln!("error: {err}");
        std::process::exit(err.exit_code());
    }
}

// ---------------------------------------------------------------------------
// flag-value parsers
// ---------------------------------------------------------------------------

fn parse_ratio(text: &str) -> Result<BigRational, CliError> {
    parse_rational(text)
        .map_err(|err| CliError::Usage(format!("cannot parse ratio '{text}': {err}")))
}

fn parse_triple(text: &str) -> Result<[f64; 3], CliError> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(CliError::Usage(format!(
            "cannot parse '{text}': expected three comma-separated numbers"
        )));
    }
    let mut values = [0.0f64; 3];
    for (slot, part) in values.iter_mut().zip(&parts) {
        *slot = part
            .parse()
            .map_err(|_| CliError::Usage(format!("cannot parse '{part}' as a number")))?;
    }
    Ok(values)
}

fn parse_lengths(text: &str) -> Result<Vec<usize>, CliError> {
    let lengths: Result<Vec<usize>, _> = text
        .split(',')
        .map(str::trim)
        .filter(|part| !part.is_empty())
        .map(str::parse)
        .collect();
    match lengths {
        Ok(lengths) if !lengths.is_empty() => Ok(lengths),
        _ => Err(CliError::Usage(format!(
            "cannot parse sequence lengths '{text}': expected comma-separated positive integers"
        ))),
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n <= 1 {
        return vec![lo];
    }
    let step = (hi - lo) / (n - 1) as f64;
    (0..n).map(|i| lo + step * i as f64).collect()
}

// ---------------------------------------------------------------------------
// shared I/O helpers
// ---------------------------------------------------------------------------

fn has_json_extension(path: &Path) -> bool {
    path.extension()
        .and_then(|ext| ext.to_str())
        .is_some_and(|ext| ext.eq_ignore_ascii_case("json"))
}

fn read_document(path: &Path) -> Result<SolutionDocument, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|err| CliError::Io(format!("cannot read {}: {err}", path.display())))?;
    let as_json = has_json_extension(path) || text.trim_start().starts_with('{');
    let doc = if as_json {
        SolutionDocument::from_json(&text)
    } else {
        SolutionDocument::from_toml(&text)
    };
    doc.map_err(CliError::from)
}

fn write_or_print(path: Option<&PathBuf>, content: &str) -> Result<(), CliError> {
    match path {
        Some(path) => fs::write(path, content)
            .map_err(|err| CliError::Io(format!("cannot write {}: {err}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

// ---------------------------------------------------------------------------
// solve
// ---------------------------------------------------------------------------

fn run_solve(args: SolveArgs) -> Result<(), CliError> {
    let gamma = parse_ratio(&args.gamma)?;
    let axis = parse_axis(&args.axis)?;
    let (theta, q_from_angle) = parse_angle(&args.theta)?;
    let target = RotationTarget::new(axis, theta)?;
    let q_exact = match &args.q_exact {
        Some(text) => Some(parse_ratio(text)?),
        None => q_from_angle,
    };
    let request = SolveRequest {
        gamma,
        target,
        q_exact,
        gamma1: args.gamma1,
        bound_d: args.amplitude,
    };
    let mut options = SolveOptions {
        tolerances: Tolerances::from_env(),
        with_certificate: !args.no_certify,
        ..SolveOptions::default()
    };

    // A user-supplied bound is authoritative; otherwise retry with a
    // growing ladder (near-degenerate ratios need large indices).
    let bounds: Vec<i64> = match args.bound {
        Some(bound) => vec![bound],
        None => vec![12, 24, 48, 96, 192],
    };
    let mut outcome: Result<TocSolution, CoreError> =
        Err(CoreError::NotFound { bound: bounds[0] });
    for (i, bound) in bounds.iter().enumerate() {
        options.bound = *bound;
        outcome = solve_rotation(&request, &options);
        match &outcome {
            Err(CoreError::NotFound { .. }) if i + 1 < bounds.len() => eprintln!(
                "note: no admissible candidate with indices <= {bound}; retrying with bound {}",
                bounds[i + 1]
            ),
            _ => break,
        }
    }
    let solution = outcome?;
    let doc = SolutionDocument::from_solution(&solution);

    if let Some(path) = &args.out {
        let text = if has_json_extension(path) {
            doc.to_json()?
        } else {
            doc.to_toml()?
        };
        fs::write(path, text)
            .map_err(|err| CliError::Io(format!("cannot write {}: {err}", path.display())))?;
    }
    if let Some(path) = &args.waveform {
        export_waveform(&solution, path, args.sample_rate)?;
    }
    if args.json {
        println!("{}", doc.to_json()?);
    } else {
        print_solution_summary(&solution, &doc);
    }
    Ok(())
}

fn export_waveform(
    solution: &TocSolution,
    path: &Path,
    sample_rate: Option<f64>,
) -> Result<(), CliError> {
    let field = ControlField::from_solution(solution);
    let duration = field.duration();
    // Default: 2000 samples per normalized time unit, i.e. rate·2000 per second.
    let rate = sample_rate.unwrap_or(2000.0 * field.rate());
    if !rate.is_finite() || rate <= 0.0 {
        return Err(CliError::Usage(format!("sample rate must be positive, got {rate}")));
    }
    let n = ((duration * rate).ceil() as usize).saturating_add(1).max(2);
    let effective_rate = (n - 1) as f64 / duration;
    let nyquist = field.nyquist_rate();
    if effective_rate < nyquist {
        eprintln!(
            "warning: sample rate {effective_rate:.6e} /s is below the waveform's Nyquist rate {nyquist:.6e} /s; the exported table aliases the modulation"
        );
    }
    let mut csv = String::from("t_seconds,Bx,By,Bz\n");
    for (t, _) in field.samples(n) {
        let b = field.b_field(t);
        csv.push_str(&format!("{},{},{},{}\n", t, b[0], b[1], b[2]));
    }
    fs::write(path, csv)
        .map_err(|err| CliError::Io(format!("cannot write {}: {err}", path.display())))
}

fn print_solution_summary(solution: &TocSolution, doc: &SolutionDocument) {
    println!(
        "ratio gamma        = {} ({})",
        solution.gamma_rational,
        solution.gamma()
    );
    let axis = solution.target.axis;
    println!(
        "target rotation    = {:.12} rad about [{}, {}, {}]",
        solution.target.theta, axis[0], axis[1], axis[2]
    );
    match &solution.branch {
        Branch::Quadruple(q) => println!(
            "branch             = resonance quadruple (s, m, l, k) = ({}, {}, {}, {})",
            q.s, q.m, q.l, q.k
        ),
        Branch::BZero { k } => println!("branch             = degenerate b = 0 family, k = {k}"),
        Branch::Numerical => println!("branch             = numerical reachability"),
    }
    println!("t_min (normalized) = {:.9}", solution.t_min);
    println!("t_min (seconds)    = {:.9e}", solution.t_physical());
    println!(
        "parameters         = omega {:.9}, a {:.9}, b {:.9}",
        solution.params.omega, solution.params.a, solution.params.b
    );
    println!("global sign        = {:+.0}", solution.sign);
    match &doc.certificate_summary {
        Some(cert) if !cert.improvement_found => println!(
            "certificate        = optimal among {} exhaustively enumerated candidates",
            cert.cases
        ),
        Some(cert) => println!(
            "certificate        = WARNING: certification surfaced a faster candidate ({} cases); report this as a bug",
            cert.cases
        ),
        None => println!("certificate        = skipped (--no-certify)"),
    }
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

fn run_simulate(args: SimulateArgs) -> Result<(), CliError> {
    let doc = read_document(&args.solution)?;
    let eta = parse_triple(&args.eta)?;
    let model = DistortionModel {
        tau: args.tau,
        eta,
        gamma_shift: args.gamma_shift,
    };
    let field = doc.control_field();
    let target = doc.realized_pair()?;
    let result = propagate_distorted(&field, doc.inputs.gamma_float, args.steps, &model);
    let (f1, f2) = result.fidelities(&target);
    if args.json {
        let report = serde_json::json!({
            "fidelity_spin1": f1,
            "fidelity_spin2": f2,
            "joint_fidelity": f1 * f2,
            "n_steps": result.n_steps,
            "max_applied_norm": result.max_applied_norm,
            "duration_seconds": field.duration(),
            "distorted": !model.is_identity(),
        });
        println!("{report}");
    } else {
        println!(
            "propagated {} steps over {:.9e} s{}",
            result.n_steps,
            field.duration(),
            if model.is_identity() { "" } else { " (distorted)" }
        );
        println!("fidelity spin 1    = {:.12}", f1);
        println!("fidelity spin 2    = {:.12}", f2);
        println!("joint fidelity     = {:.12}", f1 * f2);
        println!("max |u| applied    = {:.9}", result.max_applied_norm);
    }
    // An undistorted re-propagation is a verification: fail loudly when
    // the document does not reproduce its own target.
    if model.is_identity() {
        let worst = f1.min(f2);
        if worst < 1.0 - tol::VERIFY_GATE {
            return Err(CoreError::VerificationFailed {
                residual: 1.0 - worst,
                tol: tol::VERIFY_GATE,
            }
            .into());
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// robustness
// ---------------------------------------------------------------------------

fn run_robustness(args: RobustnessArgs) -> Result<(), CliError> {
    if args.eta_steps == 0 {
        return Err(CliError::Usage("--eta-steps must be at least 1".into()));
    }
    let doc = read_document(&args.solution)?;
    let field = doc.control_field();
    let target = doc.realized_pair()?;
    let eta_axis = linspace(args.eta_min, args.eta_max, args.eta_steps);
    let points = robustness_map(
        &field,
        doc.inputs.gamma_float,
        &target,
        args.steps,
        args.tau,
        &eta_axis,
    );
    let mut csv = String::from("eta_x,eta_y,eta_z,fidelity\n");
    for point in &points {
        csv.push_str(&format!(
            "{},{},{},{}\n",
            point.eta[0], point.eta[1], point.eta[2], point.fidelity
        ));
    }
    write_or_print(args.out.as_ref(), &csv)?;
    let fraction = passing_fraction(&points, args.threshold);
    eprintln!(
        "{} of {} grid points ({:.1}%) keep joint fidelity >= {}",
        (fraction * points.len() as f64).round() as usize,
        points.len(),
        fraction * 100.0,
        args.threshold
    );
    Ok(())
}

// ---------------------------------------------------------------------------
// rb
// ---------------------------------------------------------------------------

fn run_rb_command(args: RbArgs) -> Result<(), CliError> {
    let gamma = parse_ratio(&args.gamma)?;
    let gamma_float = gamma
        .to_f64()
        .ok_or_else(|| CliError::Usage(format!("ratio '{}' out of floating-point range", args.gamma)))?;
    let lengths = parse_lengths(&args.lengths)?;
    let eta = parse_triple(&args.eta)?;
    let mut config = RbConfig::new(lengths, args.seed);
    config.sequences_per_length = args.sequences;
    config.gamma = gamma_float;
    config.n_steps_per_pulse = args.steps_per_pulse;
    config.distortion = DistortionModel {
        tau: args.tau,
        eta,
        gamma_shift: args.gamma_shift,
    };
    let result = if args.pulsed {
        run_rb(&config, toc_realizer(gamma, args.gamma1, args.amplitude))?
    } else {
        run_rb(&config, ideal_realizer())?
    };
    let mut csv = String::from("sequence_length,mean_fidelity,standard_error\n");
    for i in 0..result.lengths.len() {
        csv.push_str(&format!(
            "{},{},{}\n",
            result.lengths[i], result.means[i], result.stderrs[i]
        ));
    }
    write_or_print(args.out.as_ref(), &csv)?;
    eprintln!(
        "decay fit: preparation/readout offset = {:.9}, per-gate error = {:.3e}, fit residual = {:.3e}{}",
        result.d_if,
        result.epsilon_g,
        result.fit_residual,
        if result.degenerate_fit {
            " (no measurable decay; error bounded by the fit floor)"
        } else {
            ""
        }
    );
    Ok(())
}

// ---------------------------------------------------------------------------
// compare-composite
// ---------------------------------------------------------------------------

fn run_compare(args: CompareArgs) -> Result<(), CliError> {
    if args.points == 0 {
        return Err(CliError::Usage("--points must be at least 1".into()));
    }
    let gamma = parse_ratio(&args.gamma)?;
    let axis = parse_axis(&args.axis)?;
    let (theta_min, _) = parse_angle(&args.theta_min)?;
    let (theta_max, _) = parse_angle(&args.theta_max)?;
    if !(theta_max >= theta_min) {
        return Err(CliError::Usage(format!(
            "--theta-max ({theta_max}) must be >= --theta-min ({theta_min})"
        )));
    }
    let thetas = linspace(theta_min, theta_max, args.points);
    let rows = compare_composite(&gamma, axis, &thetas, args.gamma1, args.amplitude)?;
    let mut csv = String::from("theta_radians,t_optimal,t_composite,saving_fraction\n");
    for row in &rows {
        csv.push_str(&format!(
            "{},{},{},{}\n",
            row.theta, row.t_toc, row.t_composite, row.saving_fraction
        ));
    }
    write_or_print(args.out.as_ref(), &csv)?;
    let (lo, hi) = rows.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |acc, row| {
        (acc.0.min(row.saving_fraction), acc.1.max(row.saving_fraction))
    });
    eprintln!(
        "time saved relative to the composite sequence: {:.1}% .. {:.1}% over {} angles",
        lo * 100.0,
        hi * 100.0,
        rows.len()
    );
    Ok(())
}

// ---------------------------------------------------------------------------
// reachset
// ---------------------------------------------------------------------------

fn run_reachset(args: ReachsetArgs) -> Result<(), CliError> {
    if !(args.t > 0.0) {
        return Err(CliError::Usage(format!("--t must be positive, got {}", args.t)));
    }
    if args.omega_max < args.omega_min {
        return Err(CliError::Usage("--omega-max must be >= --omega-min".into()));
    }
    let gamma = parse_ratio(&args.gamma)?
        .to_f64()
        .ok_or_else(|| CliError::Usage(format!("ratio '{}' out of floating-point range", args.gamma)))?;
    let samples = reachable_surface(
        gamma,
        args.t,
        (args.omega_min, args.omega_max),
        args.grid,
        args.grid,
    );
    // Orbit-space coordinates: interior points carry (phi, x); the
    // measure-zero edge strata only keep the second gate's eigenphase psi.
    let mut csv = String::from("omega,a,stratum,phi,psi,re_x,im_x\n");
    for sample in &samples {
        let row = match sample.point {
            OrbitPoint::Interior { phi, x } => {
                format!("{},{},interior,{},NaN,{},{}\n", sample.omega, sample.a, phi, x.re, x.im)
            }
            OrbitPoint::LeftEdge { psi } => {
                format!("{},{},left_edge,0,{},NaN,NaN\n", sample.omega, sample.a, psi)
            }
            OrbitPoint::RightEdge { psi } => format!(
                "{},{},right_edge,{},{},NaN,NaN\n",
                sample.omega,
                sample.a,
                std::f64::consts::PI,
                psi
            ),
        };
        csv.push_str(&row);
    }
    write_or_print(args.out.as_ref(), &csv)?;
    eprintln!(
        "sampled {} surface points at t = {} for gamma = {}",
        samples.len(),
        args.t,
        gamma
    );
    Ok(())
}
