//! Quantitative project-risk prioritization.
//!
//! Models a project as an activity-on-node precedence network with
//! stochastic durations and a fixed-plus-variable cost model, represents
//! identified risks as probability and impact distributions resolved
//! against configurable category ladders, and runs seeded Monte Carlo
//! simulations to measure each risk's absolute effect on project duration
//! and cost at a chosen Value-at-Risk percentile. The classic
//! probability-impact matrix is implemented alongside as the comparison
//! baseline.
//!
//! Simulations are reproducible by construction: every random variate comes
//! from a substream keyed by `(seed, source, iteration)`, so results are
//! bit-identical across runs and across worker counts, and scenarios that
//! differ only in their active risks share all other randomness.

pub mod engine;
pub mod prioritize;
pub mod project;
pub mod risk;
pub mod sampling;

pub use engine::{
    percentile, run_scenario, SampleSummary, Scenario, ScenarioResult, SimError,
    SimulationConfig,
};
pub use prioritize::{
    compare_with_matrix, prioritize, CompareError, ComparisonRow, Disagreement, MatrixSide,
    MethodComparison, Objective, PrioritizationReport, RelativeOrder, RiskDeltaRow,
};
pub use project::{
    planned_value_curve, project_cost, project_duration, validate_network, Activity, ActivityId,
    CurvePoint, DurationAssignment, DurationModel, ExtraCosts, NetworkError, ProjectNetwork,
};
pub use risk::{
    competition_rank_desc, matrix_rank, matrix_score, resolve_impact, resolve_probability,
    CategoryLadder, CategoryLevel, ImpactModel, ImpactSpec, Interval, LadderKind, Ladders,
    MatrixEntry, MatrixRanking, ProbabilityModel, ProbabilitySpec, RiskError, RiskId,
    RiskRegister, RiskSpec, ScoreLadder,
};
pub use sampling::{
    sample_bernoulli, sample_triangular, sample_uniform, substream, unit_f64, SampleError,
    SourceId,
};
