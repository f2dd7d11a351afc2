//! Command-line front end: JSON inputs in, tables/JSON/CSV out.
//!
//! One command is one computation. Machine output goes through
//! [`crate::render::render_json`], so keys are byte-sorted and floats are
//! fixed at six decimals; human tables round to two decimals. Exit status is
//! 0 on success, 1 on any validation problem (bad flags, malformed input,
//! region violations), and 2 when the inputs are mutually incompatible or a
//! requested ε is infeasible.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;

use crate::bounds::{ate, epsilon_response_bounds, response_bounds, BoundsError, EpsilonBound};
use crate::conditions::{epsilon_feasible_min, immunity_conditions, ConditionReport};
use crate::input::{
    CanonicalSection, Input, InputError, MechanismSection, MedSection, ModelSection,
};
use crate::mediation::MediationError;
use crate::oracle::{
    sample_canonical, sample_mediation_mechanism, CanonicalEvaluation, MechanismEvaluation,
    OracleError, ResponseProbs,
};
use crate::prob::{ExperimentalMarginals, Interval, ObservationalJoint, ResponseTarget};
use crate::render::{fixed2, render_json, two_column_table};
use crate::sensitivity::{
    parameter_regions, sensitivity_bounds, sensitivity_bounds_unchecked, sweep, Region, RegionSet,
    SensitivityError, SensitivityParams, SweepBound,
};

/// Environment variable that seeds the oracle sampler.
pub const SEED_ENV: &str = "CAUSAL_SEED";

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, malformed or ambiguous input, out-of-range values.
    #[error("{0}")]
    Validation(String),
    /// Structurally valid inputs that cannot coexist: empty bound intervals
    /// or an infeasible ε request.
    #[error("{0}")]
    Incompatible(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Incompatible(_) => 2,
        }
    }
}

impl From<InputError> for CliError {
    fn from(err: InputError) -> Self {
        CliError::Validation(err.to_string())
    }
}

impl From<BoundsError> for CliError {
    fn from(err: BoundsError) -> Self {
        match err {
            BoundsError::IncompatibleData { .. } | BoundsError::InfeasibleEpsilon { .. } => {
                CliError::Incompatible(err.to_string())
            }
            _ => CliError::Validation(err.to_string()),
        }
    }
}

impl From<SensitivityError> for CliError {
    fn from(err: SensitivityError) -> Self {
        CliError::Validation(err.to_string())
    }
}

impl From<OracleError> for CliError {
    fn from(err: OracleError) -> Self {
        CliError::Validation(err.to_string())
    }
}

impl From<MediationError> for CliError {
    fn from(err: MediationError) -> Self {
        CliError::Validation(err.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// Aligned human-readable table (two decimals).
    Table,
    /// Deterministic JSON (sorted keys, six decimals).
    Json,
    /// Comma-separated grid; sweep only.
    Csv,
}

/// Bounds and decision conditions for probabilities of causation.
#[derive(Debug, Parser)]
#[command(name = "probcause", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Partial-identification bounds for one response type.
    Bounds {
        /// Response type: benefit, harm, immunity, or doom.
        #[arg(long)]
        target: ResponseTarget,
        /// Input file (obs+exp, model, canonical, or med section).
        #[arg(long)]
        input: PathBuf,
        /// Immunity cap ε in [0,1]; tightens benefit/harm bounds.
        #[arg(long)]
        epsilon: Option<f64>,
    },
    /// ε-bounded immunity decision conditions.
    Conditions {
        /// Input file (obs+exp, model, canonical, or med section).
        #[arg(long)]
        input: PathBuf,
        /// Immunity cap ε in [0,1].
        #[arg(long, default_value_t = 0.0)]
        epsilon: f64,
        /// Evaluate the mediated (front-door) conditions of a med section.
        #[arg(long)]
        indirect: bool,
    },
    /// Mediated effect measures and mediated benefit/harm bounds.
    Mediation {
        /// Input file with a med section.
        #[arg(long)]
        input: PathBuf,
        /// Print only the four indirect-effect measures.
        #[arg(long)]
        measures: bool,
        /// Print ε-tightened mediated bounds (requires --target, --epsilon).
        #[arg(long)]
        bounds: bool,
        /// Response type for --bounds: benefit or harm.
        #[arg(long)]
        target: Option<ResponseTarget>,
        /// Immunity cap ε in [0,1] for --bounds.
        #[arg(long)]
        epsilon: Option<f64>,
    },
    /// Immunity bounds under unmeasured confounding.
    Sensitivity {
        /// Input file providing the observational joint.
        #[arg(long)]
        input: PathBuf,
        /// Latent-rate brackets, e.g. mx=0.8,Mx=0.9,mx_=0.2,Mx_=0.7.
        #[arg(long)]
        params: String,
        /// Evaluate even when a bracket falls outside its possible region.
        #[arg(long)]
        allow_out_of_region: bool,
    },
    /// CSV grid of one sensitivity bound over its two parameters.
    Sweep {
        /// Input file providing the observational joint.
        #[arg(long)]
        input: PathBuf,
        /// Which bound to sweep: lower or upper.
        #[arg(long)]
        which: SweepBound,
        /// Grid resolution per axis (endpoints included).
        #[arg(long, default_value_t = 101)]
        steps: usize,
        /// Write the CSV here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate or sample ground-truth models.
    Oracle {
        /// Input file holding the model to evaluate.
        #[arg(long)]
        model: Option<PathBuf>,
        /// Use the canonical (response-type) section.
        #[arg(long)]
        canonical: bool,
        /// Use the front-door mechanism section.
        #[arg(long)]
        mediation: bool,
        /// Sample a model with this many confounder levels instead of
        /// reading one (seeded by CAUSAL_SEED, default 0).
        #[arg(long)]
        sample: Option<usize>,
    },
}

/// Runs one parsed command, writing its rendered output to `out`.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    if cli.format == Format::Csv && !matches!(cli.command, Command::Sweep { .. }) {
        return Err(CliError::Validation(
            "csv output is only available for sweep".to_string(),
        ));
    }
    match &cli.command {
        Command::Bounds {
            target,
            input,
            epsilon,
        } => run_bounds(*target, input, *epsilon, cli.format, out),
        Command::Conditions {
            input,
            epsilon,
            indirect,
        } => run_conditions(input, *epsilon, *indirect, cli.format, out),
        Command::Mediation {
            input,
            measures,
            bounds,
            target,
            epsilon,
        } => run_mediation(
            input, *measures, *bounds, *target, *epsilon, cli.format, out,
        ),
        Command::Sensitivity {
            input,
            params,
            allow_out_of_region,
        } => run_sensitivity(input, params, *allow_out_of_region, cli.format, out),
        Command::Sweep {
            input,
            which,
            steps,
            out: out_path,
        } => run_sweep(input, *which, *steps, out_path.as_deref(), cli.format, out),
        Command::Oracle {
            model,
            canonical,
            mediation,
            sample,
        } => run_oracle(
            model.as_deref(),
            *canonical,
            *mediation,
            *sample,
            cli.format,
            out,
        ),
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes())
        .map_err(|e| CliError::Validation(format!("cannot write output: {e}")))
}

fn interval_json(interval: &Interval) -> Value {
    json!({
        "active_lower": interval.active_lower,
        "active_upper": interval.active_upper,
        "lower": interval.lower,
        "upper": interval.upper,
        "width": interval.width(),
    })
}

fn interval_rows(interval: &Interval, rows: &mut Vec<(String, String)>) {
    rows.push(("lower".into(), fixed2(interval.lower)));
    rows.push(("upper".into(), fixed2(interval.upper)));
    rows.push(("width".into(), fixed2(interval.width())));
    rows.push(("active lower".into(), interval.active_lower.clone()));
    rows.push(("active upper".into(), interval.active_upper.clone()));
}

fn run_bounds(
    target: ResponseTarget,
    input: &std::path::Path,
    epsilon: Option<f64>,
    format: Format,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let data = Input::load(input)?;
    let (joint, exp) = data.joint_and_marginals()?;
    let interval = match epsilon {
        Some(e) => epsilon_response_bounds(target, &joint, &exp, EpsilonBound::new(e)?)?,
        None => response_bounds(target, &joint, &exp)?,
    };

    match format {
        Format::Json => {
            let mut value = interval_json(&interval);
            let obj = value.as_object_mut().expect("interval renders an object");
            obj.insert("target".into(), json!(target.as_str()));
            obj.insert("ate".into(), json!(ate(&exp)));
            if let Some(e) = epsilon {
                obj.insert("epsilon".into(), json!(e));
            }
            emit(out, &render_json(&value))?;
            emit(out, "\n")
        }
        _ => {
            let mut rows = vec![("target".to_string(), target.to_string())];
            if let Some(e) = epsilon {
                rows.push(("epsilon".into(), fixed2(e)));
            }
            rows.push(("ate".into(), fixed2(ate(&exp))));
            interval_rows(&interval, &mut rows);
            emit(out, &two_column_table(&rows))
        }
    }
}

fn report_json(report: &ConditionReport, epsilon: f64, feasible_min: f64) -> Value {
    let clauses: Vec<Value> = report
        .clauses
        .iter()
        .map(|c| {
            json!({
                "id": c.id,
                "left": c.left,
                "right": c.right,
                "role": c.role.as_str(),
                "satisfied": c.satisfied,
            })
        })
        .collect();
    json!({
        "clauses": clauses,
        "epsilon": epsilon,
        "epsilon_feasible_min": feasible_min,
        "necessary_holds": report.necessary_holds,
        "sufficient_holds": report.sufficient_holds,
    })
}

fn report_rows(report: &ConditionReport, epsilon: f64, feasible_min: f64) -> Vec<(String, String)> {
    let mut rows = vec![
        ("epsilon".to_string(), fixed2(epsilon)),
        (
            "sufficient holds".to_string(),
            report.sufficient_holds.to_string(),
        ),
        (
            "necessary holds".to_string(),
            report.necessary_holds.to_string(),
        ),
        ("epsilon feasible min".to_string(), fixed2(feasible_min)),
    ];
    for clause in &report.clauses {
        rows.push((
            clause.id.clone(),
            format!(
                "{} <= {}  {} ({})",
                fixed2(clause.left),
                fixed2(clause.right),
                if clause.satisfied { "ok" } else { "unmet" },
                clause.role.as_str(),
            ),
        ));
    }
    rows
}

fn run_conditions(
    input: &std::path::Path,
    epsilon: f64,
    indirect: bool,
    format: Format,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let data = Input::load(input)?;
    let eps = EpsilonBound::new(epsilon)?;
    let (report, feasible_min) = if indirect {
        let med = data.mediation_model()?;
        (
            med.indirect_immunity_conditions(eps),
            med.indirect_feasible_min(),
        )
    } else {
        let (joint, exp) = data.joint_and_marginals()?;
        (
            immunity_conditions(&joint, &exp, eps),
            epsilon_feasible_min(&joint, &exp),
        )
    };

    match format {
        Format::Json => {
            emit(
                out,
                &render_json(&report_json(&report, epsilon, feasible_min)),
            )?;
            emit(out, "\n")
        }
        _ => emit(
            out,
            &two_column_table(&report_rows(&report, epsilon, feasible_min)),
        ),
    }
}

#[allow(clippy::too_many_arguments)]
fn run_mediation(
    input: &std::path::Path,
    measures_only: bool,
    bounds: bool,
    target: Option<ResponseTarget>,
    epsilon: Option<f64>,
    format: Format,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    if measures_only && bounds {
        return Err(CliError::Validation(
            "--measures and --bounds are mutually exclusive".to_string(),
        ));
    }
    if !bounds && (target.is_some() || epsilon.is_some()) {
        return Err(CliError::Validation(
            "--target and --epsilon require --bounds".to_string(),
        ));
    }

    let data = Input::load(input)?;
    let med = data.mediation_model()?;

    if bounds {
        let target = target.ok_or_else(|| {
            CliError::Validation("--bounds requires --target benefit|harm".to_string())
        })?;
        let epsilon = epsilon
            .ok_or_else(|| CliError::Validation("--bounds requires --epsilon".to_string()))?;
        let interval = med.indirect_response_bounds(target, EpsilonBound::new(epsilon)?)?;
        return match format {
            Format::Json => {
                let mut value = interval_json(&interval);
                let obj = value.as_object_mut().expect("interval renders an object");
                obj.insert("target".into(), json!(target.as_str()));
                obj.insert("epsilon".into(), json!(epsilon));
                emit(out, &render_json(&value))?;
                emit(out, "\n")
            }
            _ => {
                let mut rows = vec![
                    ("target".to_string(), target.to_string()),
                    ("epsilon".to_string(), fixed2(epsilon)),
                ];
                interval_rows(&interval, &mut rows);
                emit(out, &two_column_table(&rows))
            }
        };
    }

    let effects = med.indirect_effect_measures();
    let measures = json!({
        "iie": effects.iie,
        "nie": effects.nie,
        "piie": effects.piie,
        "te_frontdoor": effects.te_frontdoor,
    });

    if measures_only {
        return match format {
            Format::Json => {
                emit(out, &render_json(&measures))?;
                emit(out, "\n")
            }
            _ => {
                let rows = vec![
                    ("nie".to_string(), fixed2(effects.nie)),
                    ("iie".to_string(), fixed2(effects.iie)),
                    ("piie".to_string(), fixed2(effects.piie)),
                    ("te frontdoor".to_string(), fixed2(effects.te_frontdoor)),
                ];
                emit(out, &two_column_table(&rows))
            }
        };
    }

    let q = med.front_door_marginals();
    match format {
        Format::Json => {
            let value = json!({
                "measures": measures,
                "q_y_do_x": q.q_y_do_x,
                "q_y_do_x_": q.q_y_do_xp,
            });
            emit(out, &render_json(&value))?;
            emit(out, "\n")
        }
        _ => {
            let rows = vec![
                ("q(y_x)".to_string(), fixed2(q.q_y_do_x)),
                ("q(y_x')".to_string(), fixed2(q.q_y_do_xp)),
                ("nie".to_string(), fixed2(effects.nie)),
                ("iie".to_string(), fixed2(effects.iie)),
                ("piie".to_string(), fixed2(effects.piie)),
                ("te frontdoor".to_string(), fixed2(effects.te_frontdoor)),
            ];
            emit(out, &two_column_table(&rows))
        }
    }
}

/// Parses `mx=A,Mx=B,mx_=C,Mx_=D` (any order, all four required).
fn parse_sensitivity_params(text: &str) -> Result<SensitivityParams, CliError> {
    let mut min_x = None;
    let mut max_x = None;
    let mut min_xp = None;
    let mut max_xp = None;
    for part in text.split(',') {
        let part = part.trim();
        let (key, value) = part.split_once('=').ok_or_else(|| {
            CliError::Validation(format!(
                "malformed --params entry {part:?} (expected key=value)"
            ))
        })?;
        let value: f64 = value.trim().parse().map_err(|_| {
            CliError::Validation(format!("--params {key} has non-numeric value {value:?}"))
        })?;
        let slot = match key.trim() {
            "mx" => &mut min_x,
            "Mx" => &mut max_x,
            "mx_" => &mut min_xp,
            "Mx_" => &mut max_xp,
            other => {
                return Err(CliError::Validation(format!(
                    "unknown --params key {other:?} (expected mx, Mx, mx_, Mx_)"
                )))
            }
        };
        if slot.replace(value).is_some() {
            return Err(CliError::Validation(format!(
                "--params key {key} given twice"
            )));
        }
    }
    match (min_x, max_x, min_xp, max_xp) {
        (Some(a), Some(b), Some(c), Some(d)) => Ok(SensitivityParams::new(a, b, c, d)?),
        _ => Err(CliError::Validation(
            "--params needs all of mx, Mx, mx_, Mx_".to_string(),
        )),
    }
}

fn region_json(region: &Region) -> Value {
    json!({
        "lower": region.lower,
        "lower_closed": region.lower_closed,
        "upper": region.upper,
        "upper_closed": region.upper_closed,
    })
}

fn region_set_json(set: &RegionSet) -> Value {
    json!({
        "M_x": region_json(&set.max_x),
        "M_x_": region_json(&set.max_xp),
        "m_x": region_json(&set.min_x),
        "m_x_": region_json(&set.min_xp),
    })
}

fn run_sensitivity(
    input: &std::path::Path,
    params_text: &str,
    allow_out_of_region: bool,
    format: Format,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let data = Input::load(input)?;
    let joint = data.joint_only()?;
    let params = parse_sensitivity_params(params_text)?;
    let regions = parameter_regions(&joint)?;
    let interval = if allow_out_of_region {
        sensitivity_bounds_unchecked(&joint, &params)
    } else {
        sensitivity_bounds(&joint, &params)?
    };

    match format {
        Format::Json => {
            let value = json!({
                "interval": interval_json(&interval),
                "params": {
                    "M_x": params.max_x(),
                    "M_x_": params.max_xp(),
                    "m_x": params.min_x(),
                    "m_x_": params.min_xp(),
                },
                "regions": {
                    "informative": region_set_json(&regions.informative),
                    "possible": region_set_json(&regions.possible),
                },
            });
            emit(out, &render_json(&value))?;
            emit(out, "\n")
        }
        _ => {
            let mut rows = vec![
                ("m_x".to_string(), fixed2(params.min_x())),
                ("M_x".to_string(), fixed2(params.max_x())),
                ("m_x'".to_string(), fixed2(params.min_xp())),
                ("M_x'".to_string(), fixed2(params.max_xp())),
            ];
            interval_rows(&interval, &mut rows);
            rows.push((
                "m_x possible".to_string(),
                regions.possible.min_x.to_string(),
            ));
            rows.push((
                "m_x informative".to_string(),
                regions.informative.min_x.to_string(),
            ));
            rows.push((
                "m_x' possible".to_string(),
                regions.possible.min_xp.to_string(),
            ));
            rows.push((
                "m_x' informative".to_string(),
                regions.informative.min_xp.to_string(),
            ));
            rows.push((
                "M_x possible".to_string(),
                regions.possible.max_x.to_string(),
            ));
            rows.push((
                "M_x' possible".to_string(),
                regions.possible.max_xp.to_string(),
            ));
            emit(out, &two_column_table(&rows))
        }
    }
}

fn run_sweep(
    input: &std::path::Path,
    which: SweepBound,
    steps: usize,
    out_path: Option<&std::path::Path>,
    format: Format,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    if format == Format::Json {
        return Err(CliError::Validation(
            "sweep renders CSV only; drop --format json".to_string(),
        ));
    }
    let data = Input::load(input)?;
    let joint = data.joint_only()?;
    let grid = sweep(&joint, which, steps)?;
    let csv = grid.to_csv();
    match out_path {
        Some(path) => fs::write(path, csv)
            .map_err(|e| CliError::Validation(format!("cannot write {}: {e}", path.display()))),
        None => emit(out, &csv),
    }
}

fn oracle_seed() -> Result<u64, CliError> {
    match std::env::var(SEED_ENV) {
        Ok(text) => text.trim().parse().map_err(|_| {
            CliError::Validation(format!(
                "{SEED_ENV} must be a non-negative integer, got {text:?}"
            ))
        }),
        Err(std::env::VarError::NotPresent) => Ok(0),
        Err(e) => Err(CliError::Validation(format!("cannot read {SEED_ENV}: {e}"))),
    }
}

fn response_probs_json(probs: &ResponseProbs) -> Value {
    json!({
        "benefit": probs.benefit,
        "doom": probs.doom,
        "harm": probs.harm,
        "immunity": probs.immunity,
    })
}

fn to_value<T: serde::Serialize>(value: &T) -> Value {
    serde_json::to_value(value).expect("output values always serialize")
}

fn params_json(params: &SensitivityParams) -> Value {
    json!({
        "M_x": params.max_x(),
        "M_x_": params.max_xp(),
        "m_x": params.min_x(),
        "m_x_": params.min_xp(),
    })
}

fn confounded_rows(
    joint: &ObservationalJoint,
    exp: &ExperimentalMarginals,
    true_params: &SensitivityParams,
    rows: &mut Vec<(String, String)>,
) {
    rows.push(("p(x,y)".into(), fixed2(joint.p_xy())));
    rows.push(("p(x,y')".into(), fixed2(joint.p_xyp())));
    rows.push(("p(x',y)".into(), fixed2(joint.p_xpy())));
    rows.push(("p(x',y')".into(), fixed2(joint.p_xpyp())));
    rows.push(("p(y_x)".into(), fixed2(exp.p_y_do_x())));
    rows.push(("p(y_x')".into(), fixed2(exp.p_y_do_xp())));
    rows.push(("m_x".into(), fixed2(true_params.min_x())));
    rows.push(("M_x".into(), fixed2(true_params.max_x())));
    rows.push(("m_x'".into(), fixed2(true_params.min_xp())));
    rows.push(("M_x'".into(), fixed2(true_params.max_xp())));
}

fn exact_rows(probs: &ResponseProbs, prefix: &str, rows: &mut Vec<(String, String)>) {
    rows.push((format!("{prefix}(benefit)"), fixed2(probs.benefit)));
    rows.push((format!("{prefix}(harm)"), fixed2(probs.harm)));
    rows.push((format!("{prefix}(immunity)"), fixed2(probs.immunity)));
    rows.push((format!("{prefix}(doom)"), fixed2(probs.doom)));
}

fn canonical_output(
    eval: &CanonicalEvaluation,
    section: Option<&CanonicalSection>,
    sampled: Option<(usize, u64)>,
    format: Format,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    match format {
        Format::Json => {
            let mut value = json!({
                "exact": response_probs_json(&eval.exact),
                "exp": to_value(&eval.exp),
                "induced": to_value(&ModelSection::from_model(&eval.induced)),
                "joint": to_value(&eval.joint),
                "true_params": params_json(&eval.true_params),
            });
            let obj = value.as_object_mut().expect("object");
            if let Some(section) = section {
                obj.insert("canonical".into(), to_value(section));
            }
            if let Some((levels, seed)) = sampled {
                obj.insert("levels".into(), json!(levels));
                obj.insert("seed".into(), json!(seed));
            }
            emit(out, &render_json(&value))?;
            emit(out, "\n")
        }
        _ => {
            let mut rows = Vec::new();
            if let Some((levels, seed)) = sampled {
                rows.push(("levels".into(), levels.to_string()));
                rows.push(("seed".into(), seed.to_string()));
            }
            confounded_rows(&eval.joint, &eval.exp, &eval.true_params, &mut rows);
            exact_rows(&eval.exact, "p", &mut rows);
            emit(out, &two_column_table(&rows))
        }
    }
}

fn mechanism_output(
    eval: &MechanismEvaluation,
    section: Option<&MechanismSection>,
    sampled: Option<(usize, u64)>,
    format: Format,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    match format {
        Format::Json => {
            let mut value = json!({
                "exact_q": response_probs_json(&eval.exact_q),
                "med": to_value(&MedSection::from_model(&eval.model)),
            });
            let obj = value.as_object_mut().expect("object");
            if let Some(section) = section {
                obj.insert("mechanism".into(), to_value(section));
            }
            if let Some((levels, seed)) = sampled {
                obj.insert("levels".into(), json!(levels));
                obj.insert("seed".into(), json!(seed));
            }
            emit(out, &render_json(&value))?;
            emit(out, "\n")
        }
        _ => {
            let mut rows = Vec::new();
            if let Some((levels, seed)) = sampled {
                rows.push(("levels".into(), levels.to_string()));
                rows.push(("seed".into(), seed.to_string()));
            }
            let m = &eval.model;
            rows.push(("p(x)".into(), fixed2(m.p_x())));
            rows.push(("p(z|x)".into(), fixed2(m.p_z_given_x())));
            rows.push(("p(z|x')".into(), fixed2(m.p_z_given_xp())));
            rows.push(("p(y|x,z)".into(), fixed2(m.p_y_given_xz())));
            rows.push(("p(y|x,z')".into(), fixed2(m.p_y_given_xzp())));
            rows.push(("p(y|x',z)".into(), fixed2(m.p_y_given_xpz())));
            rows.push(("p(y|x',z')".into(), fixed2(m.p_y_given_xpzp())));
            exact_rows(&eval.exact_q, "q", &mut rows);
            emit(out, &two_column_table(&rows))
        }
    }
}

fn run_oracle(
    model_path: Option<&std::path::Path>,
    canonical: bool,
    mediation: bool,
    sample: Option<usize>,
    format: Format,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    if canonical && mediation {
        return Err(CliError::Validation(
            "--canonical and --mediation are mutually exclusive".to_string(),
        ));
    }
    match (model_path, sample) {
        (Some(_), Some(_)) => Err(CliError::Validation(
            "choose either --model or --sample, not both".to_string(),
        )),
        (None, None) => Err(CliError::Validation(
            "oracle needs --model FILE or --sample LEVELS".to_string(),
        )),
        (Some(path), None) => {
            let data = Input::load(path)?;
            if mediation {
                let eval = data.mediation_mechanism()?.evaluate()?;
                mechanism_output(&eval, None, None, format, out)
            } else if canonical {
                let eval = data.canonical_model()?.evaluate();
                canonical_output(&eval, None, None, format, out)
            } else {
                let eval = data.confounded_model()?.evaluate();
                match format {
                    Format::Json => {
                        let value = json!({
                            "exp": to_value(&eval.exp),
                            "joint": to_value(&eval.joint),
                            "true_params": params_json(&eval.true_params),
                        });
                        emit(out, &render_json(&value))?;
                        emit(out, "\n")
                    }
                    _ => {
                        let mut rows = Vec::new();
                        confounded_rows(&eval.joint, &eval.exp, &eval.true_params, &mut rows);
                        emit(out, &two_column_table(&rows))
                    }
                }
            }
        }
        (None, Some(levels)) => {
            if levels == 0 {
                return Err(CliError::Validation(
                    "--sample needs at least one confounder level".to_string(),
                ));
            }
            let seed = oracle_seed()?;
            if mediation {
                let mechanism = sample_mediation_mechanism(levels, seed);
                let eval = mechanism.evaluate()?;
                let section = MechanismSection::from_mechanism(&mechanism);
                mechanism_output(&eval, Some(&section), Some((levels, seed)), format, out)
            } else {
                let model = sample_canonical(levels, seed);
                let eval = model.evaluate();
                let section = CanonicalSection::from_model(&model);
                canonical_output(&eval, Some(&section), Some((levels, seed)), format, out)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write_fixture(dir: &tempfile::TempDir, name: &str, body: &str) -> PathBuf {
        let path = dir.path().join(name);
        fs::write(&path, body).unwrap();
        path
    }

    fn trial_file(dir: &tempfile::TempDir) -> PathBuf {
        write_fixture(
            dir,
            "trial.json",
            r#"{"model": {"p_u": [0.3, 0.7], "x_given_u": [0.2, 0.9],
                "y_given": {"xu": [0.9, 0.7], "x_u": [0.8, 0.1]}}}"#,
        )
    }

    fn run_to_string(cli: &Cli) -> Result<String, CliError> {
        let mut buf = Vec::new();
        run(cli, &mut buf)?;
        Ok(String::from_utf8(buf).unwrap())
    }

    #[test]
    fn bounds_json_carries_interval_and_identifiers() {
        let dir = tempfile::tempdir().unwrap();
        let input = trial_file(&dir);
        let cli = Cli {
            command: Command::Bounds {
                target: ResponseTarget::Benefit,
                input,
                epsilon: None,
            },
            format: Format::Json,
        };
        let text = run_to_string(&cli).unwrap();
        assert!(text.contains("\"lower\":0.450000"));
        assert!(text.contains("\"upper\":0.606000"));
        assert!(text.contains("\"active_lower\":\"p(y_x)-p(y_x')\""));
        assert!(text.contains("\"target\":\"benefit\""));
    }

    #[test]
    fn csv_format_is_rejected_outside_sweep() {
        let dir = tempfile::tempdir().unwrap();
        let input = trial_file(&dir);
        let cli = Cli {
            command: Command::Bounds {
                target: ResponseTarget::Benefit,
                input,
                epsilon: None,
            },
            format: Format::Csv,
        };
        assert!(matches!(run_to_string(&cli), Err(CliError::Validation(_))));
    }

    #[test]
    fn sensitivity_params_parse_in_any_order_and_reject_junk() {
        let p = parse_sensitivity_params("Mx_=0.7,mx=0.8,Mx=0.9,mx_=0.2").unwrap();
        assert_eq!(p.min_x(), 0.8);
        assert_eq!(p.max_xp(), 0.7);
        assert!(parse_sensitivity_params("mx=0.8").is_err());
        assert!(parse_sensitivity_params("mx=0.8,mx=0.9,Mx=1,mx_=0,Mx_=1").is_err());
        assert!(parse_sensitivity_params("zz=1,mx=0.8,Mx=0.9,mx_=0.2").is_err());
        assert!(parse_sensitivity_params("mx=abc,Mx=0.9,mx_=0.2,Mx_=0.7").is_err());
    }

    #[test]
    fn infeasible_epsilon_maps_to_the_incompatible_exit_code() {
        let dir = tempfile::tempdir().unwrap();
        let input = trial_file(&dir);
        let cli = Cli {
            command: Command::Bounds {
                target: ResponseTarget::Benefit,
                input,
                epsilon: Some(0.0),
            },
            format: Format::Json,
        };
        let err = run_to_string(&cli).unwrap_err();
        assert!(matches!(err, CliError::Incompatible(_)));
        assert_eq!(err.exit_code(), 2);
    }
}
