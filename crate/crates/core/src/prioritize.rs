//! Risk prioritization: runs the risk-free baseline and one scenario per
//! register risk (all under the same seed so random substreams align),
//! reads every scenario's duration and cost at the configured percentile,
//! and ranks risks by their percentile deltas against the baseline --
//! independently for the duration objective and the cost objective.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engine::{run_scenario, Scenario, SimError, SimulationConfig};
use crate::project::ProjectNetwork;
use crate::risk::{
    competition_rank_desc, matrix_rank, CategoryLevel, MatrixRanking, RiskError, RiskId,
    RiskRegister, ScoreLadder,
};

/// One register risk's percentile outcomes and dual ranks.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RiskDeltaRow {
    pub risk_id: RiskId,
    /// Duration at the configured percentile with only this risk active.
    pub duration_with_risk: f64,
    /// Cost at the configured percentile with only this risk active.
    pub cost_with_risk: f64,
    /// `duration_with_risk` minus the baseline percentile duration.
    pub delta_duration: f64,
    /// `cost_with_risk` minus the baseline percentile cost.
    pub delta_cost: f64,
    pub rank_duration: usize,
    pub rank_cost: usize,
}

/// The full prioritization result: config echo, risk-free baseline values at
/// the percentile, and one row per register risk in register order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrioritizationReport {
    pub percentile: f64,
    pub iterations: u32,
    pub seed: u64,
    pub baseline_duration: f64,
    pub baseline_cost: f64,
    pub rows: Vec<RiskDeltaRow>,
}

impl PrioritizationReport {
    pub fn row(&self, id: &RiskId) -> Option<&RiskDeltaRow> {
        self.rows.iter().find(|r| &r.risk_id == id)
    }
}

/// Runs the baseline plus one single-risk scenario per register risk
/// (`m + 1` simulations, all with the same seed) and assembles the report.
///
/// Ranks are competition ranks over descending deltas across the whole
/// register: tied deltas share the lowest rank of their block. Because the
/// scenarios share substreams with the baseline, deltas are never negative
/// and a risk without any duration impact lands on delta zero exactly.
pub fn prioritize(
    net: &ProjectNetwork,
    register: &RiskRegister,
    config: &SimulationConfig,
) -> Result<PrioritizationReport, SimError> {
    let baseline = run_scenario(&Scenario::baseline(net, register), config)?;
    let alpha = config.percentile;
    let baseline_duration = baseline.duration_percentile(alpha);
    let baseline_cost = baseline.cost_percentile(alpha);

    let mut rows = Vec::with_capacity(register.len());
    for risk in &register.risks {
        let scenario = Scenario::new(net, register, vec![risk.id.clone()]);
        let result = run_scenario(&scenario, config)?;
        let duration_with_risk = result.duration_percentile(alpha);
        let cost_with_risk = result.cost_percentile(alpha);
        rows.push(RiskDeltaRow {
            risk_id: risk.id.clone(),
            duration_with_risk,
            cost_with_risk,
            delta_duration: duration_with_risk - baseline_duration,
            delta_cost: cost_with_risk - baseline_cost,
            rank_duration: 0,
            rank_cost: 0,
        });
    }

    let duration_deltas: Vec<f64> = rows.iter().map(|r| r.delta_duration).collect();
    let cost_deltas: Vec<f64> = rows.iter().map(|r| r.delta_cost).collect();
    for (row, rank) in rows.iter_mut().zip(competition_rank_desc(&duration_deltas)) {
        row.rank_duration = rank;
    }
    for (row, rank) in rows.iter_mut().zip(competition_rank_desc(&cost_deltas)) {
        row.rank_cost = rank;
    }

    Ok(PrioritizationReport {
        percentile: alpha,
        iterations: config.iterations,
        seed: config.seed,
        baseline_duration,
        baseline_cost,
        rows,
    })
}

/// Which project objective a ranking refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    Duration,
    Cost,
}

impl std::fmt::Display for Objective {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Objective::Duration => "duration",
            Objective::Cost => "cost",
        })
    }
}

/// A risk's qualitative scoring on one objective, for the side-by-side view.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixSide {
    pub probability_level: CategoryLevel,
    pub impact_level: CategoryLevel,
    pub score: f64,
    /// Competition rank within the matrix group for this objective.
    pub group_rank: usize,
}

/// One risk's joined qualitative and quantitative results.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub risk_id: RiskId,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrix_duration: Option<MatrixSide>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrix_cost: Option<MatrixSide>,
    pub delta_duration: f64,
    pub rank_duration: usize,
    pub delta_cost: f64,
    pub rank_cost: usize,
}

/// How one method places `first` relative to `second`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RelativeOrder {
    Below,
    Tied,
    Above,
}

impl RelativeOrder {
    fn from_values(a: f64, b: f64) -> Self {
        match a.total_cmp(&b) {
            std::cmp::Ordering::Less => RelativeOrder::Below,
            std::cmp::Ordering::Equal => RelativeOrder::Tied,
            std::cmp::Ordering::Greater => RelativeOrder::Above,
        }
    }
}

/// A pair of risks the two methods order differently on one objective,
/// including the case where one method ties them and the other separates
/// them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Disagreement {
    pub objective: Objective,
    pub first: RiskId,
    pub second: RiskId,
    /// Placement of `first` relative to `second` under the matrix score.
    pub matrix_order: RelativeOrder,
    /// Placement of `first` relative to `second` under the percentile deltas.
    pub quantitative_order: RelativeOrder,
}

/// Side-by-side comparison of the qualitative matrix and the quantitative
/// percentile-delta prioritization.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MethodComparison {
    pub rows: Vec<ComparisonRow>,
    pub disagreements: Vec<Disagreement>,
}

#[derive(Debug, Error, PartialEq)]
pub enum CompareError {
    #[error("report does not match register: {0}")]
    RegisterMismatch(String),
    #[error(transparent)]
    Risk(#[from] RiskError),
}

/// Joins a prioritization report with the register's qualitative matrix
/// scoring and lists every pair the two methods order differently.
///
/// Disagreements are collected within each matrix group (risks scored on the
/// same objective), comparing matrix score order against percentile-delta
/// order.
pub fn compare_with_matrix(
    report: &PrioritizationReport,
    register: &RiskRegister,
    scores: &ScoreLadder,
) -> Result<MethodComparison, CompareError> {
    if report.rows.len() != register.len() {
        return Err(CompareError::RegisterMismatch(format!(
            "report has {} rows, register has {} risks",
            report.rows.len(),
            register.len()
        )));
    }
    for (row, risk) in report.rows.iter().zip(&register.risks) {
        if row.risk_id != risk.id {
            return Err(CompareError::RegisterMismatch(format!(
                "row `{}` does not line up with register risk `{}`",
                row.risk_id, risk.id
            )));
        }
    }

    let matrix: MatrixRanking = matrix_rank(register, scores)?;
    let side_for = |entries: &[crate::risk::MatrixEntry], id: &RiskId| -> Option<MatrixSide> {
        entries.iter().find(|e| &e.risk_id == id).map(|e| MatrixSide {
            probability_level: e.probability_level,
            impact_level: e.impact_level,
            score: e.score,
            group_rank: e.rank,
        })
    };

    let rows: Vec<ComparisonRow> = report
        .rows
        .iter()
        .map(|r| ComparisonRow {
            risk_id: r.risk_id.clone(),
            matrix_duration: side_for(&matrix.duration, &r.risk_id),
            matrix_cost: side_for(&matrix.cost, &r.risk_id),
            delta_duration: r.delta_duration,
            rank_duration: r.rank_duration,
            delta_cost: r.delta_cost,
            rank_cost: r.rank_cost,
        })
        .collect();

    let mut disagreements = Vec::new();
    let mut collect = |objective: Objective| {
        let entries = match objective {
            Objective::Duration => &matrix.duration,
            Objective::Cost => &matrix.cost,
        };
        for (i, a) in entries.iter().enumerate() {
            for b in entries.iter().skip(i + 1) {
                let delta = |id: &RiskId| {
                    let row = report.row(id).expect("ids checked above");
                    match objective {
                        Objective::Duration => row.delta_duration,
                        Objective::Cost => row.delta_cost,
                    }
                };
                let matrix_order = RelativeOrder::from_values(a.score, b.score);
                let quantitative_order =
                    RelativeOrder::from_values(delta(&a.risk_id), delta(&b.risk_id));
                if matrix_order != quantitative_order {
                    disagreements.push(Disagreement {
                        objective,
                        first: a.risk_id.clone(),
                        second: b.risk_id.clone(),
                        matrix_order,
                        quantitative_order,
                    });
                }
            }
        }
    };
    collect(Objective::Duration);
    collect(Objective::Cost);

    Ok(MethodComparison {
        rows,
        disagreements,
    })
}
