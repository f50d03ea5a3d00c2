//! Report rendering. Three formats: aligned text tables for reading,
//! delimited (CSV) for spreadsheets, and JSON that round-trips losslessly.
//!
//! Rendered numbers use two decimals for durations and costs and three for
//! matrix scores; formatting goes through Rust's standard formatter, which
//! always uses `.` as the decimal separator regardless of locale.

use std::io::{self, Write};

use riskprio_core::{
    CurvePoint, MatrixRanking, MethodComparison, PrioritizationReport, RelativeOrder,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    /// Aligned, human-readable table.
    Text,
    /// Delimited values with a header row.
    Csv,
    /// Structured output; parses back to an equal report.
    Json,
}

const REPORT_COLUMNS: [&str; 7] = [
    "Risk",
    "Duration_with_Ri",
    "Cost_with_Ri",
    "Difference_Duration_with_Ri",
    "Ranking_Dur",
    "Difference_Cost_with_Ri",
    "Ranking_Cost",
];

fn write_aligned(w: &mut dyn Write, rows: &[Vec<String>]) -> io::Result<()> {
    let columns = rows.iter().map(Vec::len).max().unwrap_or(0);
    let mut widths = vec![0usize; columns];
    for row in rows {
        for (i, cell) in row.iter().enumerate() {
            widths[i] = widths[i].max(cell.len());
        }
    }
    for row in rows {
        let mut line = String::new();
        for (i, cell) in row.iter().enumerate() {
            if i > 0 {
                line.push_str("  ");
            }
            line.push_str(&format!("{:>width$}", cell, width = widths[i]));
        }
        writeln!(w, "{}", line.trim_end())?;
    }
    Ok(())
}

fn report_cells(report: &PrioritizationReport) -> Vec<Vec<String>> {
    let mut rows = vec![REPORT_COLUMNS.iter().map(|s| s.to_string()).collect()];
    for row in &report.rows {
        rows.push(vec![
            row.risk_id.to_string(),
            format!("{:.2}", row.duration_with_risk),
            format!("{:.2}", row.cost_with_risk),
            format!("{:.2}", row.delta_duration),
            row.rank_duration.to_string(),
            format!("{:.2}", row.delta_cost),
            row.rank_cost.to_string(),
        ]);
    }
    rows
}

/// Renders a prioritization report in the requested format.
pub fn render_report(
    report: &PrioritizationReport,
    format: OutputFormat,
    w: &mut dyn Write,
) -> io::Result<()> {
    match format {
        OutputFormat::Text => {
            writeln!(
                w,
                "percentile P{:.0}  iterations {}  seed {}",
                report.percentile * 100.0,
                report.iterations,
                report.seed
            )?;
            writeln!(
                w,
                "baseline duration at percentile: {:.2}",
                report.baseline_duration
            )?;
            writeln!(w, "baseline cost at percentile: {:.2}", report.baseline_cost)?;
            writeln!(w)?;
            write_aligned(w, &report_cells(report))
        }
        OutputFormat::Csv => {
            writeln!(
                w,
                "# percentile={},iterations={},seed={},baseline_duration={:.2},baseline_cost={:.2}",
                report.percentile,
                report.iterations,
                report.seed,
                report.baseline_duration,
                report.baseline_cost
            )?;
            for row in report_cells(report) {
                writeln!(w, "{}", row.join(","))?;
            }
            Ok(())
        }
        OutputFormat::Json => write_json(report, w),
    }
}

fn write_json<T: serde::Serialize>(value: &T, w: &mut dyn Write) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut *w, value)?;
    writeln!(w)
}

/// Parses a JSON-rendered report back; `render(Json)` then `parse` yields an
/// equal report.
pub fn parse_report_json(text: &str) -> serde_json::Result<PrioritizationReport> {
    serde_json::from_str(text)
}

/// Renders the qualitative matrix scoring: one block per objective group.
pub fn render_matrix(
    ranking: &MatrixRanking,
    format: OutputFormat,
    w: &mut dyn Write,
) -> io::Result<()> {
    let block = |entries: &[riskprio_core::MatrixEntry]| -> Vec<Vec<String>> {
        let mut rows = vec![vec![
            "Risk".to_string(),
            "P".to_string(),
            "I".to_string(),
            "P_x_I".to_string(),
            "Ranking".to_string(),
        ]];
        for e in entries {
            rows.push(vec![
                e.risk_id.to_string(),
                e.probability_level.to_string(),
                e.impact_level.to_string(),
                format!("{:.3}", e.score),
                e.rank.to_string(),
            ]);
        }
        rows
    };
    match format {
        OutputFormat::Text => {
            writeln!(w, "duration-impact risks")?;
            write_aligned(w, &block(&ranking.duration))?;
            writeln!(w)?;
            writeln!(w, "cost-impact risks")?;
            write_aligned(w, &block(&ranking.cost))
        }
        OutputFormat::Csv => {
            writeln!(w, "group,risk,p,i,p_x_i,ranking")?;
            for (group, entries) in [("duration", &ranking.duration), ("cost", &ranking.cost)] {
                for e in entries {
                    writeln!(
                        w,
                        "{},{},{},{},{:.3},{}",
                        group, e.risk_id, e.probability_level, e.impact_level, e.score, e.rank
                    )?;
                }
            }
            Ok(())
        }
        OutputFormat::Json => write_json(ranking, w),
    }
}

fn order_symbol(order: RelativeOrder) -> &'static str {
    match order {
        RelativeOrder::Below => "<",
        RelativeOrder::Tied => "=",
        RelativeOrder::Above => ">",
    }
}

/// Renders the joined matrix-vs-simulation comparison with the
/// disagreement summary.
pub fn render_comparison(
    comparison: &MethodComparison,
    format: OutputFormat,
    w: &mut dyn Write,
) -> io::Result<()> {
    match format {
        OutputFormat::Text => {
            let header = vec![
                "Risk".to_string(),
                "P".to_string(),
                "I".to_string(),
                "P_x_I".to_string(),
                "Matrix_Rank".to_string(),
                "Diff_Dur".to_string(),
                "Ranking_Dur".to_string(),
                "Diff_Cost".to_string(),
                "Ranking_Cost".to_string(),
            ];
            let mut rows = vec![header];
            for row in &comparison.rows {
                // A risk carries a matrix side per objective it impacts;
                // show the duration side when present, else the cost side.
                let side = row
                    .matrix_duration
                    .as_ref()
                    .or(row.matrix_cost.as_ref());
                let (p, i, score, rank) = match side {
                    Some(s) => (
                        s.probability_level.to_string(),
                        s.impact_level.to_string(),
                        format!("{:.3}", s.score),
                        s.group_rank.to_string(),
                    ),
                    None => ("-".into(), "-".into(), "-".into(), "-".into()),
                };
                rows.push(vec![
                    row.risk_id.to_string(),
                    p,
                    i,
                    score,
                    rank,
                    format!("{:.2}", row.delta_duration),
                    row.rank_duration.to_string(),
                    format!("{:.2}", row.delta_cost),
                    row.rank_cost.to_string(),
                ]);
            }
            write_aligned(w, &rows)?;
            writeln!(w)?;
            if comparison.disagreements.is_empty() {
                writeln!(w, "the two methods agree on every pair")
            } else {
                writeln!(
                    w,
                    "{} pair(s) ordered differently by the two methods:",
                    comparison.disagreements.len()
                )?;
                for d in &comparison.disagreements {
                    writeln!(
                        w,
                        "  [{}] {} {} {} by matrix score, {} {} {} by percentile delta",
                        d.objective,
                        d.first,
                        order_symbol(d.matrix_order),
                        d.second,
                        d.first,
                        order_symbol(d.quantitative_order),
                        d.second,
                    )?;
                }
                Ok(())
            }
        }
        OutputFormat::Csv => {
            writeln!(
                w,
                "risk,p_dur,i_dur,score_dur,matrix_rank_dur,p_cost,i_cost,score_cost,matrix_rank_cost,delta_duration,rank_duration,delta_cost,rank_cost"
            )?;
            for row in &comparison.rows {
                let side = |s: &Option<riskprio_core::MatrixSide>| match s {
                    Some(s) => format!(
                        "{},{},{:.3},{}",
                        s.probability_level, s.impact_level, s.score, s.group_rank
                    ),
                    None => ",,,".to_string(),
                };
                writeln!(
                    w,
                    "{},{},{},{:.2},{},{:.2},{}",
                    row.risk_id,
                    side(&row.matrix_duration),
                    side(&row.matrix_cost),
                    row.delta_duration,
                    row.rank_duration,
                    row.delta_cost,
                    row.rank_cost
                )?;
            }
            Ok(())
        }
        OutputFormat::Json => write_json(comparison, w),
    }
}

/// Renders the planned-value curve.
pub fn render_curve(
    curve: &[CurvePoint],
    format: OutputFormat,
    w: &mut dyn Write,
) -> io::Result<()> {
    match format {
        OutputFormat::Text | OutputFormat::Csv => {
            writeln!(w, "time,cumulative_planned_cost")?;
            for p in curve {
                writeln!(w, "{},{}", p.time, p.cumulative_cost)?;
            }
            Ok(())
        }
        OutputFormat::Json => write_json(&curve, w),
    }
}
