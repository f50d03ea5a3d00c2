//! Command implementations. Each command takes parsed arguments and a
//! writer, so the whole surface is testable without spawning a process;
//! `main` only maps errors to exit codes.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use thiserror::Error;

use riskprio_core::{
    compare_with_matrix, matrix_rank, planned_value_curve, prioritize, project_cost,
    project_duration, run_scenario, validate_network, CompareError, DurationAssignment,
    ExtraCosts, NetworkError, RiskError, RiskId, Scenario, ScenarioResult, ScoreLadder,
    SimError, SimulationConfig,
};

use crate::document::{parse_document, DocumentError};
use crate::histogram::{export_histogram, HistogramError};
use crate::report::{
    render_comparison, render_curve, render_matrix, render_report, OutputFormat,
};

/// Exit code classes: 0 success, 2 command-line usage (from clap), then one
/// code per failure class.
pub const EXIT_PARSE: i32 = 3;
pub const EXIT_VALIDATION: i32 = 4;
pub const EXIT_RUNTIME: i32 = 5;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("validation error: {0}")]
    Validation(String),
    #[error("runtime error: {0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => EXIT_PARSE,
            CliError::Validation(_) => EXIT_VALIDATION,
            CliError::Runtime(_) => EXIT_RUNTIME,
        }
    }
}

impl From<DocumentError> for CliError {
    fn from(e: DocumentError) -> Self {
        match e {
            DocumentError::Io { .. } => CliError::Runtime(e.to_string()),
            DocumentError::Syntax { .. } => CliError::Parse(e.to_string()),
            DocumentError::Network(_) | DocumentError::Risk(_) | DocumentError::Sim(_) => {
                CliError::Validation(e.to_string())
            }
        }
    }
}

impl From<NetworkError> for CliError {
    fn from(e: NetworkError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<RiskError> for CliError {
    fn from(e: RiskError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<CompareError> for CliError {
    fn from(e: CompareError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<HistogramError> for CliError {
    fn from(e: HistogramError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

/// Flag overrides applied on top of the document's config section.
#[derive(Clone, Copy, Debug, Default)]
pub struct ConfigOverrides {
    pub iterations: Option<u32>,
    pub seed: Option<u64>,
    pub percentile: Option<f64>,
}

impl ConfigOverrides {
    fn apply(&self, base: SimulationConfig) -> SimulationConfig {
        SimulationConfig {
            iterations: self.iterations.unwrap_or(base.iterations),
            seed: self.seed.unwrap_or(base.seed),
            percentile: self.percentile.unwrap_or(base.percentile),
        }
    }
}

/// Which register risks a `simulate` run switches on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RiskSelection {
    None,
    All,
    Ids(Vec<RiskId>),
}

impl RiskSelection {
    /// Parses `none`, `all`, or a comma-separated id list.
    pub fn parse(text: &str) -> Self {
        match text.trim() {
            "none" => RiskSelection::None,
            "all" => RiskSelection::All,
            other => RiskSelection::Ids(
                other
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(RiskId::from)
                    .collect(),
            ),
        }
    }
}

/// Writes to `--output` when given, otherwise to the main writer.
fn with_sink<F>(output: Option<&PathBuf>, out: &mut dyn Write, f: F) -> Result<(), CliError>
where
    F: FnOnce(&mut dyn Write) -> Result<(), CliError>,
{
    match output {
        Some(path) => {
            let file = File::create(path)?;
            let mut writer = BufWriter::new(file);
            f(&mut writer)?;
            writer.flush()?;
            Ok(())
        }
        None => f(out),
    }
}

/// `plan`: deterministic critical-path duration, planned cost, and the
/// planned-value curve under most-likely durations.
pub fn cmd_plan(
    doc: &Path,
    format: OutputFormat,
    output: Option<&PathBuf>,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let (net, _register, _config) = parse_document(doc)?;
    let order = validate_network(&net)?;
    let assignment = DurationAssignment::most_likely(&net);
    let duration = project_duration(&net, &assignment)?;
    let cost = project_cost(&net, &assignment, &ExtraCosts::new())?;
    let curve = planned_value_curve(&net)?;

    writeln!(out, "activities: {}", order.len())?;
    writeln!(out, "planned duration: {:.2} {}", duration, net.time_unit)?;
    writeln!(out, "planned cost: {:.2} ({})", cost, net.currency_unit)?;
    with_sink(output, out, |w| {
        render_curve(&curve, format, w).map_err(CliError::from)
    })
}

/// `simulate`: one scenario (selected risks) with summary statistics and a
/// histogram export per objective.
#[allow(clippy::too_many_arguments)]
pub fn cmd_simulate(
    doc: &Path,
    risks: &RiskSelection,
    overrides: ConfigOverrides,
    bins: usize,
    output: Option<&PathBuf>,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let (net, register, base_config) = parse_document(doc)?;
    let config = overrides.apply(base_config);
    let active = match risks {
        RiskSelection::None => Vec::new(),
        RiskSelection::All => register.risks.iter().map(|r| r.id.clone()).collect(),
        RiskSelection::Ids(ids) => ids.clone(),
    };
    let scenario = Scenario::new(&net, &register, active);
    let result = run_scenario(&scenario, &config)?;

    write_scenario_summary(&net, &scenario, &config, &result, out)?;
    with_sink(output, out, |w| {
        write_scenario_histograms(&net, &config, &result, bins, w)
    })
}

fn write_scenario_summary(
    net: &riskprio_core::ProjectNetwork,
    scenario: &Scenario<'_>,
    config: &SimulationConfig,
    result: &ScenarioResult,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let active = if scenario.active_risks.is_empty() {
        "none".to_string()
    } else {
        scenario
            .active_risks
            .iter()
            .map(|r| r.as_str())
            .collect::<Vec<_>>()
            .join(",")
    };
    writeln!(
        out,
        "scenario: {} iterations, seed {}, active risks: {}",
        config.iterations, config.seed, active
    )?;
    let alpha_label = format!("P{:.0}", config.percentile * 100.0);
    let duration = result.duration_summary();
    writeln!(
        out,
        "duration ({}): mean {:.2}  std {:.2}  {} {:.2}",
        net.time_unit,
        duration.mean,
        duration.std_dev,
        alpha_label,
        result.duration_percentile(config.percentile)
    )?;
    let cost = result.cost_summary();
    writeln!(
        out,
        "cost ({}): mean {:.2}  std {:.2}  {} {:.2}",
        net.currency_unit,
        cost.mean,
        cost.std_dev,
        alpha_label,
        result.cost_percentile(config.percentile)
    )?;
    Ok(())
}

fn write_scenario_histograms(
    net: &riskprio_core::ProjectNetwork,
    config: &SimulationConfig,
    result: &ScenarioResult,
    bins: usize,
    w: &mut dyn Write,
) -> Result<(), CliError> {
    writeln!(w, "# histogram: duration ({})", net.time_unit)?;
    export_histogram(&result.duration_samples, bins, config.percentile)?
        .write_delimited(w)?;
    writeln!(w)?;
    writeln!(w, "# histogram: cost ({})", net.currency_unit)?;
    export_histogram(&result.cost_samples, bins, config.percentile)?.write_delimited(w)?;
    Ok(())
}

/// `prioritize`: the full per-risk percentile-delta report.
pub fn cmd_prioritize(
    doc: &Path,
    overrides: ConfigOverrides,
    format: OutputFormat,
    output: Option<&PathBuf>,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let (net, register, base_config) = parse_document(doc)?;
    let config = overrides.apply(base_config);
    let report = prioritize(&net, &register, &config)?;
    with_sink(output, out, |w| {
        render_report(&report, format, w).map_err(CliError::from)
    })
}

/// `matrix`: the qualitative probability-impact scoring block.
pub fn cmd_matrix(
    doc: &Path,
    format: OutputFormat,
    output: Option<&PathBuf>,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let (net, register, _config) = parse_document(doc)?;
    validate_network(&net)?;
    let ranking = matrix_rank(&register, &ScoreLadder::default())?;
    with_sink(output, out, |w| {
        render_matrix(&ranking, format, w).map_err(CliError::from)
    })
}

/// `compare`: matrix and simulation results joined, with the disagreement
/// summary.
pub fn cmd_compare(
    doc: &Path,
    overrides: ConfigOverrides,
    format: OutputFormat,
    output: Option<&PathBuf>,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let (net, register, base_config) = parse_document(doc)?;
    let config = overrides.apply(base_config);
    let report = prioritize(&net, &register, &config)?;
    let comparison = compare_with_matrix(&report, &register, &ScoreLadder::default())?;
    with_sink(output, out, |w| {
        render_comparison(&comparison, format, w).map_err(CliError::from)
    })
}
