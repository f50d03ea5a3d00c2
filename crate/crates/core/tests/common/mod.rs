//! Shared fixtures for the integration test suites.
//!
//! Compiled separately into each test target, so not every helper is used
//! everywhere.
#![allow(dead_code)]

use riskprio_core::{
    Activity, CategoryLadder, DurationModel, Interval, LadderKind, Ladders, ProjectNetwork,
};

pub fn iv(lo: f64, hi: f64) -> Interval {
    Interval::new(lo, hi).unwrap()
}

/// Ladders with evenly spaced steps; good enough for engine-level tests
/// that do not depend on specific calibration values.
pub fn step_ladders() -> Ladders {
    let steps = |kind, scale: f64| {
        CategoryLadder::new(
            kind,
            [
                iv(0.0, scale),
                iv(scale, 2.0 * scale),
                iv(2.0 * scale, 3.0 * scale),
                iv(3.0 * scale, 4.0 * scale),
                iv(4.0 * scale, 5.0 * scale),
            ],
        )
        .unwrap()
    };
    Ladders::new(
        steps(LadderKind::Probability, 0.1),
        steps(LadderKind::DurationImpact, 10.0),
        steps(LadderKind::CostImpact, 100.0),
    )
    .unwrap()
}

/// Probability ladder whose L level is the interval [0.03, 0.10].
pub fn workshop_probability_ladder() -> CategoryLadder {
    CategoryLadder::new(
        LadderKind::Probability,
        [
            iv(0.0, 0.03),
            iv(0.03, 0.10),
            iv(0.10, 0.30),
            iv(0.30, 0.50),
            iv(0.50, 1.0),
        ],
    )
    .unwrap()
}

/// A small diamond network with triangular durations and mixed costs.
pub fn diamond_network() -> ProjectNetwork {
    ProjectNetwork::new(vec![
        Activity::new("start", DurationModel::Deterministic(0.0)),
        Activity::new("design", DurationModel::Triangular { min: 8.0, mp: 10.0, max: 14.0 })
            .after(&["start"])
            .costs(100.0, 5.0),
        Activity::new("build", DurationModel::Triangular { min: 15.0, mp: 20.0, max: 30.0 })
            .after(&["design"])
            .costs(500.0, 12.0),
        Activity::new("procure", DurationModel::Triangular { min: 10.0, mp: 25.0, max: 32.0 })
            .after(&["start"])
            .costs(800.0, 0.0),
        Activity::new("finish", DurationModel::Deterministic(2.0))
            .after(&["build", "procure"])
            .costs(0.0, 3.0),
    ])
}
