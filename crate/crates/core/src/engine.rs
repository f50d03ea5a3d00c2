//! Seeded, reproducible Monte Carlo simulation of a scenario: a project
//! network plus an active subset of the risk register.
//!
//! Iterations are independent and run in parallel; because every variate
//! comes from a substream keyed by `(seed, source, iteration)`, the sample
//! arrays are bit-identical for equal inputs regardless of worker count.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::project::{CompiledNetwork, DurationModel, NetworkError, ProjectNetwork};
use crate::risk::{
    resolve_impact, resolve_probability, ImpactSpec, ProbabilitySpec, RiskError, RiskId,
    RiskRegister,
};
use crate::sampling::{draw_impact, substream, triangular_inv_cdf, unit_f64, SourceId};

/// Simulation parameters. `percentile` is the Value-at-Risk level the
/// analysis reads results at (0.95 reads the P95).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub iterations: u32,
    pub seed: u64,
    pub percentile: f64,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        Self {
            iterations: 20_000,
            seed: 42,
            percentile: 0.95,
        }
    }
}

impl SimulationConfig {
    pub fn validate(&self) -> Result<(), SimError> {
        if self.iterations == 0 {
            return Err(SimError::ZeroIterations);
        }
        if !(self.percentile > 0.0 && self.percentile < 1.0) {
            return Err(SimError::BadPercentile(self.percentile));
        }
        Ok(())
    }
}

/// A network together with the subset of register risks switched on.
#[derive(Clone, Debug)]
pub struct Scenario<'a> {
    pub network: &'a ProjectNetwork,
    pub register: &'a RiskRegister,
    pub active_risks: Vec<RiskId>,
}

impl<'a> Scenario<'a> {
    pub fn new(
        network: &'a ProjectNetwork,
        register: &'a RiskRegister,
        active_risks: Vec<RiskId>,
    ) -> Self {
        Self {
            network,
            register,
            active_risks,
        }
    }

    /// The risk-free baseline scenario.
    pub fn baseline(network: &'a ProjectNetwork, register: &'a RiskRegister) -> Self {
        Self::new(network, register, Vec::new())
    }

    /// Scenario with every register risk active.
    pub fn all_risks(network: &'a ProjectNetwork, register: &'a RiskRegister) -> Self {
        let ids = register.risks.iter().map(|r| r.id.clone()).collect();
        Self::new(network, register, ids)
    }
}

/// Mean and sample standard deviation of one sample array.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleSummary {
    pub mean: f64,
    pub std_dev: f64,
}

fn summarize(samples: &[f64]) -> SampleSummary {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let std_dev = if samples.len() > 1 {
        (samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    SampleSummary { mean, std_dev }
}

/// Sampled outcome arrays for one scenario, one entry per iteration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioResult {
    pub duration_samples: Vec<f64>,
    pub cost_samples: Vec<f64>,
}

impl ScenarioResult {
    pub fn iterations(&self) -> usize {
        self.duration_samples.len()
    }

    pub fn duration_summary(&self) -> SampleSummary {
        summarize(&self.duration_samples)
    }

    pub fn cost_summary(&self) -> SampleSummary {
        summarize(&self.cost_samples)
    }

    /// Percentile of the duration samples (arrays are never empty).
    pub fn duration_percentile(&self, alpha: f64) -> f64 {
        percentile(&self.duration_samples, alpha).expect("non-empty by construction")
    }

    pub fn cost_percentile(&self, alpha: f64) -> f64 {
        percentile(&self.cost_samples, alpha).expect("non-empty by construction")
    }
}

/// Percentile by linear interpolation between closest order statistics:
/// with sorted samples `x[0..n]` (0-based) and `h = (n-1) * alpha`, the
/// result is `x[floor(h)] + frac(h) * (x[floor(h)+1] - x[floor(h)])`.
pub fn percentile(samples: &[f64], alpha: f64) -> Result<f64, SimError> {
    if samples.is_empty() {
        return Err(SimError::EmptySamples);
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(SimError::BadPercentile(alpha));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    Ok(percentile_of_sorted(&sorted, alpha))
}

pub(crate) fn percentile_of_sorted(sorted: &[f64], alpha: f64) -> f64 {
    let n = sorted.len();
    let h = (n - 1) as f64 * alpha;
    let lo = h.floor() as usize;
    let frac = h - lo as f64;
    if lo + 1 < n {
        sorted[lo] + frac * (sorted[lo + 1] - sorted[lo])
    } else {
        sorted[n - 1]
    }
}

struct ResolvedRisk {
    source: SourceId,
    target: usize,
    probability: ProbabilitySpec,
    duration_impact: Option<ImpactSpec>,
    cost_impact: Option<ImpactSpec>,
}

/// Runs the Monte Carlo simulation for one scenario.
///
/// Per iteration: every activity's base duration is sampled from its model;
/// each active risk resolves its probability (epistemic ranges draw a fresh
/// `p` each iteration), draws a Bernoulli occurrence, and on occurrence adds
/// its duration impact to the target activity's realized duration and/or
/// records its cost impact as a lump sum on the target. Total duration is
/// the critical-path length of the adjusted assignment; total cost applies
/// the variable cost rate to the risk-extended durations, so a duration
/// impact also moves cost wherever the target has a non-zero rate.
pub fn run_scenario(
    scenario: &Scenario<'_>,
    config: &SimulationConfig,
) -> Result<ScenarioResult, SimError> {
    config.validate()?;
    let compiled = CompiledNetwork::compile(scenario.network)?;
    scenario.register.validate(scenario.network)?;

    let ladders = &scenario.register.ladders;
    let mut resolved = Vec::with_capacity(scenario.active_risks.len());
    for id in &scenario.active_risks {
        let spec = scenario
            .register
            .get(id)
            .ok_or_else(|| SimError::UnknownRisk(id.clone()))?;
        resolved.push(ResolvedRisk {
            source: SourceId::risk(&spec.id),
            target: compiled.index[&spec.target_activity],
            probability: resolve_probability(&spec.probability, &ladders.probability)?,
            duration_impact: spec
                .duration_impact
                .as_ref()
                .map(|m| resolve_impact(m, &ladders.duration_impact))
                .transpose()?,
            cost_impact: spec
                .cost_impact
                .as_ref()
                .map(|m| resolve_impact(m, &ladders.cost_impact))
                .transpose()?,
        });
    }

    let n = compiled.len();
    let activity_sources: Vec<SourceId> =
        compiled.ids.iter().map(SourceId::activity).collect();
    let seed = config.seed;

    let outcomes: Vec<(f64, f64)> = (0..config.iterations as u64)
        .into_par_iter()
        .map_init(
            || (vec![0.0; n], vec![0.0; n], vec![0.0; n]),
            |(durations, extras, finish), k| {
                for i in 0..n {
                    durations[i] = match compiled.durations[i] {
                        DurationModel::Deterministic(d) => d,
                        DurationModel::Triangular { min, mp, max } => {
                            let mut rng = substream(seed, activity_sources[i], k);
                            triangular_inv_cdf(min, mp, max, unit_f64(&mut rng))
                        }
                    };
                    extras[i] = 0.0;
                }
                for risk in &resolved {
                    let mut rng = substream(seed, risk.source, k);
                    let p = match risk.probability {
                        ProbabilitySpec::Point(p) => p,
                        ProbabilitySpec::Uniform(iv) => {
                            iv.lo + unit_f64(&mut rng) * (iv.hi - iv.lo)
                        }
                    };
                    let occurred = unit_f64(&mut rng) < p;
                    if occurred {
                        if let Some(spec) = &risk.duration_impact {
                            durations[risk.target] += draw_impact(spec, &mut rng);
                        }
                        if let Some(spec) = &risk.cost_impact {
                            extras[risk.target] += draw_impact(spec, &mut rng);
                        }
                    }
                }
                let total_duration = compiled.forward_pass(durations, finish);
                let total_cost = compiled.total_cost(durations, extras);
                (total_duration, total_cost)
            },
        )
        .collect();

    let (duration_samples, cost_samples) = outcomes.into_iter().unzip();
    Ok(ScenarioResult {
        duration_samples,
        cost_samples,
    })
}

#[derive(Debug, Error, PartialEq)]
pub enum SimError {
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error(transparent)]
    Risk(#[from] RiskError),
    #[error("active risk set names unknown risk `{0}`")]
    UnknownRisk(RiskId),
    #[error("iterations must be at least 1")]
    ZeroIterations,
    #[error("percentile must lie strictly between 0 and 1, got {0}")]
    BadPercentile(f64),
    #[error("cannot take a percentile of an empty sample array")]
    EmptySamples,
}
