use std::fs;
use std::io::Write as _;
use std::path::Path;

use anyhow::{Context, Result};
use clap::ValueEnum as _;
use serde::Serialize;
use serde_json::{json, Value};

use riplab::adversarial::{hard_instance_high_t, hard_instance_low_t, verify_failure};
use riplab::bounds::{error_bound_ds, error_bound_l2, error_bound_matrix, gaussian_bound, oracle_bound, BoundInputs, BoundKind};
use riplab::experiment::{phase_csv, phase_sweep, thresholds_csv, thresholds_emit, Ensemble, ExperimentConfig};
use riplab::io::{parse_matrix_csv, parse_vector_csv};
use riplab::linalg::{DenseMatrix, LinearMap};
use riplab::polytope::{decompose, PolytopeSpec};
use riplab::problem::{ArmpProblem, ConstraintSet, RecoveryProblem};
use riplab::ric::{nsp_report, ric_exact, ric_sampled, roc_exact};
use riplab::solvers::{l1_min, nuclear_min, SolverOptions};

use crate::{
    AdversaryArgs, BoundKindArg, BoundsArgs, Cli, Command, ConstraintKind, DecomposeArgs, EnsembleArg, Format,
    LowrankArgs, NspArgs, PhaseArgs, RecoverArgs, RegimeArg, RicArgs, RocArgs, SolveArgs, ThresholdsArgs,
};

pub struct Outcome {
    pub text: String,
    /// `false` when an iterative solver stopped short of its tolerance.
    pub converged: bool,
}

impl Outcome {
    fn done(text: String) -> Self {
        Self { text, converged: true }
    }
}

pub fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<riplab::Error>() {
        Some(riplab::Error::Numeric(_)) => 3,
        _ => 2,
    }
}

pub fn emit(cli: &Cli, text: &str) -> Result<()> {
    match &cli.output {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let format = cli.format;
    match &cli.command {
        Command::Decompose(a) => decompose_cmd(a, format.unwrap_or(Format::Json)),
        Command::Ric(a) => ric_cmd(a, cli.seed, format.unwrap_or(Format::Json)),
        Command::Roc(a) => roc_cmd(a, format.unwrap_or(Format::Json)),
        Command::Nsp(a) => nsp_cmd(a, format.unwrap_or(Format::Json)),
        Command::Recover(a) => recover_cmd(a, cli.seed, format.unwrap_or(Format::Json)),
        Command::Lowrank(a) => lowrank_cmd(a, cli.seed, format.unwrap_or(Format::Json)),
        Command::Adversary(a) => adversary_cmd(a, cli.seed, format.unwrap_or(Format::Json)),
        Command::Bounds(a) => bounds_cmd(a, format.unwrap_or(Format::Json)),
        Command::Phase(a) => phase_cmd(a, cli.seed, format.unwrap_or(Format::Csv)),
        Command::Thresholds(a) => thresholds_cmd(a, format.unwrap_or(Format::Csv)),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_matrix(path: &Path) -> Result<DenseMatrix> {
    parse_matrix_csv(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = read(path)?;
    // wrap parse failures so they exit with the precondition code
    serde_json::from_str(&text)
        .map_err(|e| riplab::Error::Parse(e.to_string()))
        .with_context(|| format!("parsing {}", path.display()))
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn csv_cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Number(_) | Value::Bool(_) => v.to_string(),
        nested => format!("\"{}\"", nested.to_string().replace('"', "\"\"")),
    }
}

/// One header line and one value line; nested fields are written as
/// quoted JSON.
fn record_csv<T: Serialize>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value)?;
    let Value::Object(map) = v else {
        return Ok(csv_cell(&v) + "\n");
    };
    let header: Vec<&str> = map.keys().map(String::as_str).collect();
    let row: Vec<String> = map.values().map(csv_cell).collect();
    Ok(format!("{}\n{}\n", header.join(","), row.join(",")))
}

fn render<T: Serialize>(value: &T, format: Format) -> Result<String> {
    match format {
        Format::Json => to_json(value),
        Format::Csv => record_csv(value),
    }
}

fn decompose_cmd(a: &DecomposeArgs, format: Format) -> Result<Outcome> {
    let v = parse_vector_csv(&read(&a.input)?)?;
    let spec = PolytopeSpec::new(a.alpha, a.s)?;
    let comb = decompose(&v, &spec)?;
    let text = match format {
        Format::Json => to_json(&comb)?,
        Format::Csv => {
            let mut out = String::new();
            for (w, u) in comb.terms() {
                let fields: Vec<String> = std::iter::once(w).chain(u.iter().copied()).map(|x| format!("{x:?}")).collect();
                out.push_str(&fields.join(","));
                out.push('\n');
            }
            out
        }
    };
    Ok(Outcome::done(text))
}

fn ric_cmd(a: &RicArgs, seed: u64, format: Format) -> Result<Outcome> {
    let matrix = read_matrix(&a.matrix)?;
    let report = if a.sampled {
        let shape = (a.rows.unwrap_or_default(), a.cols.unwrap_or_default());
        let map = LinearMap::new(matrix, shape)?;
        if a.order.fract() != 0.0 || a.order < 1.0 {
            return Err(riplab::Error::Range(format!("sampled rank must be a positive integer, got {}", a.order)).into());
        }
        ric_sampled(&map, a.order as usize, a.trials, seed)?
    } else {
        ric_exact(&matrix, a.order)?
    };
    Ok(Outcome::done(render(&report, format)?))
}

fn roc_cmd(a: &RocArgs, format: Format) -> Result<Outcome> {
    let matrix = read_matrix(&a.matrix)?;
    let value = roc_exact(&matrix, a.k1, a.k2)?;
    Ok(Outcome::done(render(&json!({ "k1": a.k1, "k2": a.k2, "value": value }), format)?))
}

fn nsp_cmd(a: &NspArgs, format: Format) -> Result<Outcome> {
    let matrix = read_matrix(&a.matrix)?;
    Ok(Outcome::done(render(&nsp_report(&matrix, a.k)?, format)?))
}

fn constraint(s: &SolveArgs) -> Result<ConstraintSet> {
    Ok(match s.constraint {
        ConstraintKind::Zero => ConstraintSet::Zero,
        ConstraintKind::L2 => ConstraintSet::l2_ball(s.eta)?,
        ConstraintKind::Ds => ConstraintSet::dantzig_ball(s.eta)?,
    })
}

fn options(s: &SolveArgs, seed: u64) -> SolverOptions {
    SolverOptions { tolerance: s.tol, max_iterations: s.max_iter, seed }
}

fn recover_cmd(a: &RecoverArgs, seed: u64, format: Format) -> Result<Outcome> {
    let problem = match (&a.problem, &a.matrix, &a.observations) {
        (Some(path), _, _) => {
            let raw: RecoveryProblem = read_json(path)?;
            RecoveryProblem::new(raw.matrix, raw.observations, raw.constraint)?
        }
        (None, Some(m), Some(y)) => {
            RecoveryProblem::new(read_matrix(m)?, parse_vector_csv(&read(y)?)?, constraint(&a.solve)?)?
        }
        _ => return Err(riplab::Error::Domain("give --problem, or both --matrix and --observations".into()).into()),
    };
    let result = l1_min(&problem, &options(&a.solve, seed))?;
    Ok(Outcome { converged: result.converged, text: render(&result, format)? })
}

fn lowrank_cmd(a: &LowrankArgs, seed: u64, format: Format) -> Result<Outcome> {
    let problem = match (&a.problem, &a.map, &a.observations) {
        (Some(path), _, _) => {
            let raw: ArmpProblem = read_json(path)?;
            let map = LinearMap::new(raw.map.matrix().clone(), raw.map.shape())?;
            ArmpProblem::new(map, raw.observations, raw.constraint)?
        }
        (None, Some(m), Some(b)) => {
            let shape = (a.rows.unwrap_or_default(), a.cols.unwrap_or_default());
            let map = LinearMap::new(read_matrix(m)?, shape)?;
            ArmpProblem::new(map, parse_vector_csv(&read(b)?)?, constraint(&a.solve)?)?
        }
        _ => return Err(riplab::Error::Domain("give --problem, or --map with --observations".into()).into()),
    };
    let result = nuclear_min(&problem, &options(&a.solve, seed))?;
    Ok(Outcome { converged: result.converged, text: render(&result, format)? })
}

fn adversary_cmd(a: &AdversaryArgs, seed: u64, format: Format) -> Result<Outcome> {
    let instance = match a.regime {
        RegimeArg::High => hard_instance_high_t(a.t, a.k, a.p)?,
        RegimeArg::Low => hard_instance_low_t(a.t, a.k, a.p)?,
    };
    if !a.verify {
        return Ok(Outcome::done(render(&json!({ "instance": instance }), format)?));
    }
    let opts = SolverOptions { seed, ..SolverOptions::default() };
    let report = verify_failure(&instance, &opts)?;
    let converged = report.solver_converged;
    let text = render(&json!({ "instance": instance, "failure_report": report }), format)?;
    Ok(Outcome { text, converged })
}

fn bounds_cmd(a: &BoundsArgs, format: Format) -> Result<Outcome> {
    let inputs = BoundInputs {
        delta: a.delta,
        t: a.t,
        eps: a.eps,
        eta: a.eta,
        tail_l1: a.tail,
        k_or_r: a.k,
        sigma: a.sigma,
        n: a.n,
        p: a.p,
    };
    let (bound, probability) = match a.kind {
        BoundKindArg::L2 => (error_bound_l2(&inputs)?, None),
        BoundKindArg::Ds => (error_bound_ds(&inputs)?, None),
        BoundKindArg::MatrixL2 => (error_bound_matrix(&inputs, BoundKind::L2)?, None),
        BoundKindArg::MatrixDs => (error_bound_matrix(&inputs, BoundKind::Ds)?, None),
        BoundKindArg::GaussianL2 => {
            let (b, prob) = gaussian_bound(&inputs, BoundKind::L2)?;
            (b, Some(prob))
        }
        BoundKindArg::GaussianDs => {
            let (b, prob) = gaussian_bound(&inputs, BoundKind::Ds)?;
            (b, Some(prob))
        }
        BoundKindArg::Oracle => (oracle_bound(a.t, a.delta, a.p, a.sigma, &a.beta)?, None),
    };
    let mut echo = serde_json::to_value(inputs)?;
    echo["kind"] = serde_json::to_value(a.kind.to_possible_value().map(|v| v.get_name().to_owned()))?;
    if a.kind == BoundKindArg::Oracle {
        echo["beta"] = json!(a.beta);
    }
    let mut out = json!({ "bound": bound, "inputs_echo": echo });
    if let Some(prob) = probability {
        out["probability"] = json!(prob);
    }
    Ok(Outcome::done(render(&out, format)?))
}

fn phase_cmd(a: &PhaseArgs, seed: u64, format: Format) -> Result<Outcome> {
    let ensemble = match a.ensemble {
        EnsembleArg::Gaussian => Ensemble::Gaussian,
        EnsembleArg::Rademacher => Ensemble::Rademacher,
        EnsembleArg::Ternary => Ensemble::TernarySparse,
    };
    let n0 = a.n_values.first().copied().unwrap_or(1).max(1);
    let mut base = ExperimentConfig::new(ensemble, n0, a.p, 0, a.trials, seed)?;
    base.success_threshold = a.threshold;
    let cells = phase_sweep(&base, &a.n_values, &a.k_values, &SolverOptions { seed, ..SolverOptions::default() })?;
    let text = match format {
        Format::Csv => phase_csv(&cells),
        Format::Json => to_json(&cells)?,
    };
    Ok(Outcome::done(text))
}

fn thresholds_cmd(a: &ThresholdsArgs, format: Format) -> Result<Outcome> {
    let rows = thresholds_emit(a.t_min, a.t_max, a.step)?;
    let text = match format {
        Format::Csv => thresholds_csv(&rows),
        Format::Json => to_json(&rows)?,
    };
    Ok(Outcome::done(text))
}
