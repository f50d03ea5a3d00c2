//! Command-line front end for the risk prioritization engine: the project
//! document format, report renderers, histogram export, and the command
//! implementations behind the `riskprio` binary.

pub mod commands;
pub mod document;
pub mod histogram;
pub mod report;

pub use commands::{
    cmd_compare, cmd_matrix, cmd_plan, cmd_prioritize, cmd_simulate, CliError,
    ConfigOverrides, RiskSelection, EXIT_PARSE, EXIT_RUNTIME, EXIT_VALIDATION,
};
pub use document::{parse_document, DocumentError, ProjectDocument};
pub use histogram::{export_histogram, HistogramError, HistogramExport};
pub use report::{parse_report_json, render_report, OutputFormat};
