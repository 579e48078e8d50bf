//! Python bindings for the duospin toolkit: synthesize, verify and
//! analyze time-optimal pulses driving two uncoupled spin-½ systems
//! that share one bounded control field.
//!
//! The module mirrors the CLI surface with Python-native types:
//! solution documents cross the boundary as plain dicts (the same
//! schema the CLI writes with `--out`), so results are serializable
//! and inspectable without wrapper classes.

use duospin_core::certificate::{parse_angle, parse_axis, parse_rational};
use duospin_core::rb::{ideal_realizer, toc_realizer};
use duospin_core::tol::Tolerances;
use duospin_core::{
    compare_composite as compare_composite_core, propagate_distorted, run_rb, solve_rotation,
    DistortionModel, Error as CoreError, RbConfig, RotationTarget, SolutionDocument,
    SolveOptions, SolveRequest, TocSolution,
};
use num::rational::BigRational;
use num::ToPrimitive;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

fn core_err(err: CoreError) -> PyErr {
    match &err {
        CoreError::InvalidTarget(_) | CoreError::InvalidBound(_) | CoreError::Document(_) => {
            PyValueError::new_err(err.to_string())
        }
        _ => PyRuntimeError::new_err(err.to_string()),
    }
}

fn ratio_from_text(text: &str) -> PyResult<BigRational> {
    parse_rational(text).map_err(core_err)
}

/// Accept an angle as a string ("pi", "3pi/4", "0.75pi") or a float in
/// radians; string spellings keep their exact rational coefficient.
fn angle_from_py(theta: &Bound<'_, PyAny>) -> PyResult<(f64, Option<BigRational>)> {
    if let Ok(text) = theta.extract::<String>() {
        parse_angle(&text).map_err(core_err)
    } else if let Ok(radians) = theta.extract::<f64>() {
        Ok((radians, None))
    } else {
        Err(PyValueError::new_err(
            "theta must be a string like 'pi/2' or a float in radians",
        ))
    }
}

/// Accept a solution document as a dict, a JSON string, or a TOML string.
fn document_from_py(doc: &Bound<'_, PyAny>) -> PyResult<SolutionDocument> {
    let text: String = if let Ok(text) = doc.extract::<String>() {
        text
    } else {
        let json = doc.py().import_bound("json")?;
        json.call_method1("dumps", (doc,))?.extract()?
    };
    let parsed = if text.trim_start().starts_with('{') {
        SolutionDocument::from_json(&text)
    } else {
        SolutionDocument::from_toml(&text)
    };
    parsed.map_err(core_err)
}

fn document_to_py(py: Python<'_>, doc: &SolutionDocument) -> PyResult<PyObject> {
    let json = py.import_bound("json")?;
    let text = doc.to_json().map_err(core_err)?;
    Ok(json.call_method1("loads", (text,))?.unbind())
}

fn solve_with_ladder(
    request: &SolveRequest,
    bound: Option<i64>,
    certify: bool,
) -> PyResult<TocSolution> {
    let mut options = SolveOptions {
        tolerances: Tolerances::from_env(),
        with_certificate: certify,
        ..SolveOptions::default()
    };
    let bounds: Vec<i64> = match bound {
        Some(bound) => vec![bound],
        None => vec![12, 24, 48, 96, 192],
    };
    let mut outcome: Result<TocSolution, CoreError> =
        Err(CoreError::NotFound { bound: bounds[0] });
    for bound in &bounds {
        options.bound = *bound;
        outcome = solve_rotation(request, &options);
        if !matches!(outcome, Err(CoreError::NotFound { .. })) {
            break;
        }
    }
    outcome.map_err(core_err)
}

/// Synthesize a certified minimum-time selective rotation pulse.
///
/// Returns the full solution document as a dict (inputs, branch,
/// resonance indices, canonical parameters, frame matrix, certificate
/// summary) — the same schema the CLI writes.
#[pyfunction]
#[pyo3(signature = (gamma, theta, axis="y", bound=None, certify=true, gamma1=1.0, amplitude=1.0))]
fn solve(
    py: Python<'_>,
    gamma: &str,
    theta: &Bound<'_, PyAny>,
    axis: &str,
    bound: Option<i64>,
    certify: bool,
    gamma1: f64,
    amplitude: f64,
) -> PyResult<PyObject> {
    let gamma = ratio_from_text(gamma)?;
    let (theta, q_exact) = angle_from_py(theta)?;
    let axis = parse_axis(axis).map_err(core_err)?;
    let target = RotationTarget::new(axis, theta).map_err(core_err)?;
    let request = SolveRequest {
        gamma,
        target,
        q_exact,
        gamma1,
        bound_d: amplitude,
    };
    let solution = solve_with_ladder(&request, bound, certify)?;
    document_to_py(py, &SolutionDocument::from_solution(&solution))
}

/// Re-propagate a solution document with an independent integrator and
/// report the achieved fidelities, optionally under distortion
/// (low-pass constant tau, per-axis gains eta, ratio miscalibration).
#[pyfunction]
#[pyo3(signature = (document, steps=20_000, tau=0.0, eta=[1.0, 1.0, 1.0], gamma_shift=0.0))]
fn simulate(
    py: Python<'_>,
    document: &Bound<'_, PyAny>,
    steps: usize,
    tau: f64,
    eta: [f64; 3],
    gamma_shift: f64,
) -> PyResult<PyObject> {
    let doc = document_from_py(document)?;
    let model = DistortionModel {
        tau,
        eta,
        gamma_shift,
    };
    let field = doc.control_field();
    let target = doc.realized_pair().map_err(core_err)?;
    let result = propagate_distorted(&field, doc.inputs.gamma_float, steps, &model);
    let (f1, f2) = result.fidelities(&target);
    let report = PyDict::new_bound(py);
    report.set_item("fidelity_spin1", f1)?;
    report.set_item("fidelity_spin2", f2)?;
    report.set_item("joint_fidelity", f1 * f2)?;
    report.set_item("n_steps", result.n_steps)?;
    report.set_item("max_applied_norm", result.max_applied_norm)?;
    report.set_item("duration_seconds", field.duration())?;
    report.set_item("distorted", !model.is_identity())?;
    Ok(report.unbind().into())
}

/// Sample the laboratory waveform B(t) = -2 u(t) of a solution
/// document: a list of (t_seconds, Bx, By, Bz) tuples with both
/// endpoints included.
#[pyfunction]
#[pyo3(signature = (document, n_samples=1000))]
fn waveform(
    py: Python<'_>,
    document: &Bound<'_, PyAny>,
    n_samples: usize,
) -> PyResult<PyObject> {
    let doc = document_from_py(document)?;
    let field = doc.control_field();
    let rows = PyList::empty_bound(py);
    for (t, _) in field.samples(n_samples) {
        let b = field.b_field(t);
        rows.append((t, b[0], b[1], b[2]))?;
    }
    Ok(rows.unbind().into())
}

/// Minimum sample rate (per second) that resolves the waveform's
/// circular modulation.
#[pyfunction]
fn nyquist_rate(document: &Bound<'_, PyAny>) -> PyResult<f64> {
    let doc = document_from_py(document)?;
    Ok(doc.control_field().nyquist_rate())
}

/// Run simulated randomized benchmarking of the 24 single-spin
/// Clifford gates.  With pulsed=True every Clifford is realized as a
/// synthesized selective pulse (identity on the spectator spin);
/// otherwise the ideal gates are used.
#[pyfunction]
#[pyo3(signature = (gamma="2514/10000", lengths=vec![1, 2, 5, 10, 20, 35, 50], sequences=32,
                    seed=0x00DE_C0DE, pulsed=false, steps_per_pulse=2_000, tau=0.0,
                    eta=[1.0, 1.0, 1.0], gamma_shift=0.0, gamma1=1.0, amplitude=1.0))]
#[allow(clippy::too_many_arguments)]
fn rb(
    py: Python<'_>,
    gamma: &str,
    lengths: Vec<usize>,
    sequences: usize,
    seed: u64,
    pulsed: bool,
    steps_per_pulse: usize,
    tau: f64,
    eta: [f64; 3],
    gamma_shift: f64,
    gamma1: f64,
    amplitude: f64,
) -> PyResult<PyObject> {
    let gamma = ratio_from_text(gamma)?;
    let gamma_float = gamma
        .to_f64()
        .ok_or_else(|| PyValueError::new_err("ratio out of floating-point range"))?;
    let mut config = RbConfig::new(lengths, seed);
    config.sequences_per_length = sequences;
    config.gamma = gamma_float;
    config.n_steps_per_pulse = steps_per_pulse;
    config.distortion = DistortionModel {
        tau,
        eta,
        gamma_shift,
    };
    let result = if pulsed {
        run_rb(&config, toc_realizer(gamma, gamma1, amplitude))
    } else {
        run_rb(&config, ideal_realizer())
    }
    .map_err(core_err)?;
    let report = PyDict::new_bound(py);
    report.set_item("lengths", result.lengths)?;
    report.set_item("means", result.means)?;
    report.set_item("stderrs", result.stderrs)?;
    report.set_item("d_if", result.d_if)?;
    report.set_item("epsilon_g", result.epsilon_g)?;
    report.set_item("fit_residual", result.fit_residual)?;
    report.set_item("degenerate_fit", result.degenerate_fit)?;
    Ok(report.unbind().into())
}

/// Compare minimum pulse times against the conventional composite
/// sequence over a list of rotation angles (radians).  Returns a list
/// of dicts with theta, t_optimal, t_composite and saving_fraction.
#[pyfunction]
#[pyo3(signature = (gamma, thetas, axis="y", gamma1=1.0, amplitude=1.0))]
fn compare_composite(
    py: Python<'_>,
    gamma: &str,
    thetas: Vec<f64>,
    axis: &str,
    gamma1: f64,
    amplitude: f64,
) -> PyResult<PyObject> {
    let gamma = ratio_from_text(gamma)?;
    let axis = parse_axis(axis).map_err(core_err)?;
    let rows = compare_composite_core(&gamma, axis, &thetas, gamma1, amplitude).map_err(core_err)?;
    let out = PyList::empty_bound(py);
    for row in rows {
        let entry = PyDict::new_bound(py);
        entry.set_item("theta", row.theta)?;
        entry.set_item("t_optimal", row.t_toc)?;
        entry.set_item("t_composite", row.t_composite)?;
        entry.set_item("saving_fraction", row.saving_fraction)?;
        out.append(entry)?;
    }
    Ok(out.unbind().into())
}

/// Number of single-spin Clifford classes in the benchmarking group.
#[pyfunction]
fn clifford_count() -> usize {
    duospin_core::clifford_table().len()
}

#[pymodule]
fn _duospin(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add_function(wrap_pyfunction!(waveform, m)?)?;
    m.add_function(wrap_pyfunction!(nyquist_rate, m)?)?;
    m.add_function(wrap_pyfunction!(rb, m)?)?;
    m.add_function(wrap_pyfunction!(compare_composite, m)?)?;
    m.add_function(wrap_pyfunction!(clifford_count, m)?)?;
    Ok(())
}
