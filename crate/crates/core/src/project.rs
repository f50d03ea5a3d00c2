//! Activity-on-node project network with stochastic durations and a
//! fixed-plus-variable cost model, plus the deterministic schedule/cost
//! baselines computed from it.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Short unique token identifying an activity within a network (e.g. `A13`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ActivityId(pub String);

impl ActivityId {
    pub fn new(id: impl Into<String>) -> Self {
        Self(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ActivityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for ActivityId {
    fn from(s: &str) -> Self {
        Self(s.to_owned())
    }
}

/// Duration of an activity, in days.
///
/// A deterministic duration behaves exactly like a degenerate triangular
/// distribution with `min == mp == max`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DurationModel {
    /// Fixed duration; serialized as a bare number.
    Deterministic(f64),
    /// Triangular distribution with minimum, most-probable and maximum value.
    Triangular { min: f64, mp: f64, max: f64 },
}

impl DurationModel {
    /// The most probable (planning) value: `mp` for triangular models, the
    /// fixed value otherwise.
    pub fn most_likely(&self) -> f64 {
        match *self {
            DurationModel::Deterministic(d) => d,
            DurationModel::Triangular { mp, .. } => mp,
        }
    }

    /// Lower bound of the support.
    pub fn min(&self) -> f64 {
        match *self {
            DurationModel::Deterministic(d) => d,
            DurationModel::Triangular { min, .. } => min,
        }
    }

    /// Upper bound of the support.
    pub fn max(&self) -> f64 {
        match *self {
            DurationModel::Deterministic(d) => d,
            DurationModel::Triangular { max, .. } => max,
        }
    }
}

/// One node of the precedence network.
///
/// The cost of an activity splits into a fixed cost (`fixed_cost`, accrued
/// regardless of how long the activity runs) and a variable cost
/// (`variable_cost_rate` per day of realized duration).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Activity {
    pub id: ActivityId,
    #[serde(default)]
    pub label: String,
    #[serde(default)]
    pub predecessors: Vec<ActivityId>,
    pub duration: DurationModel,
    #[serde(default)]
    pub fixed_cost: f64,
    #[serde(default)]
    pub variable_cost_rate: f64,
}

impl Activity {
    pub fn new(id: impl Into<ActivityId>, duration: DurationModel) -> Self {
        Self {
            id: id.into(),
            label: String::new(),
            predecessors: Vec::new(),
            duration,
            fixed_cost: 0.0,
            variable_cost_rate: 0.0,
        }
    }

    pub fn label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn after(mut self, preds: &[&str]) -> Self {
        self.predecessors = preds.iter().map(|p| ActivityId::from(*p)).collect();
        self
    }

    pub fn costs(mut self, fixed: f64, variable_rate: f64) -> Self {
        self.fixed_cost = fixed;
        self.variable_cost_rate = variable_rate;
        self
    }
}

/// The whole project: an acyclic precedence graph of activities.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProjectNetwork {
    pub activities: Vec<Activity>,
    #[serde(default = "default_currency")]
    pub currency_unit: String,
    #[serde(default = "default_time_unit")]
    pub time_unit: String,
}

fn default_currency() -> String {
    "monetary units".to_owned()
}

fn default_time_unit() -> String {
    "days".to_owned()
}

impl ProjectNetwork {
    pub fn new(activities: Vec<Activity>) -> Self {
        Self {
            activities,
            currency_unit: default_currency(),
            time_unit: default_time_unit(),
        }
    }

    pub fn activity(&self, id: &ActivityId) -> Option<&Activity> {
        self.activities.iter().find(|a| &a.id == id)
    }

    pub fn contains(&self, id: &ActivityId) -> bool {
        self.activity(id).is_some()
    }
}

/// One realized duration per activity, covering every activity exactly once.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct DurationAssignment(HashMap<ActivityId, f64>);

impl DurationAssignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, id: impl Into<ActivityId>, days: f64) {
        self.0.insert(id.into(), days);
    }

    pub fn get(&self, id: &ActivityId) -> Option<f64> {
        self.0.get(id).copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Assignment with every activity at its most-likely duration.
    pub fn most_likely(net: &ProjectNetwork) -> Self {
        Self(
            net.activities
                .iter()
                .map(|a| (a.id.clone(), a.duration.most_likely()))
                .collect(),
        )
    }
}

impl FromIterator<(ActivityId, f64)> for DurationAssignment {
    fn from_iter<T: IntoIterator<Item = (ActivityId, f64)>>(iter: T) -> Self {
        Self(iter.into_iter().collect())
    }
}

/// Extra lump-sum costs charged to specific activities (e.g. realized risk
/// impacts), on top of the fixed-plus-variable model.
pub type ExtraCosts = HashMap<ActivityId, f64>;

/// One point of the planned-value curve.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub time: f64,
    pub cumulative_cost: f64,
}

#[derive(Debug, Error, PartialEq)]
pub enum NetworkError {
    #[error("network has no activities")]
    Empty,
    #[error("activity id must be non-empty")]
    EmptyActivityId,
    #[error("duplicate activity id `{0}`")]
    DuplicateActivity(ActivityId),
    #[error("activity `{activity}` references unknown predecessor `{predecessor}`")]
    UnknownPredecessor {
        activity: ActivityId,
        predecessor: ActivityId,
    },
    #[error("precedence cycle detected through activity `{0}`")]
    Cycle(ActivityId),
    #[error(
        "activity `{activity}` has invalid triangular duration (min={min}, mp={mp}, max={max}); \
         min <= mp <= max and all >= 0 required"
    )]
    BadTriangular {
        activity: ActivityId,
        min: f64,
        mp: f64,
        max: f64,
    },
    #[error("activity `{activity}` has negative {field} ({value})")]
    NegativeField {
        activity: ActivityId,
        field: &'static str,
        value: f64,
    },
    #[error("duration assignment is missing activity `{0}`")]
    MissingAssignment(ActivityId),
    #[error("duration assignment gives activity `{activity}` a negative duration ({value})")]
    NegativeDuration { activity: ActivityId, value: f64 },
    #[error("extra costs reference unknown activity `{0}`")]
    UnknownActivity(ActivityId),
}

/// Validated, index-based view of a network. All engine-facing evaluation
/// runs on this form so the public operations and the Monte Carlo loop share
/// a single forward pass.
#[derive(Clone, Debug)]
pub(crate) struct CompiledNetwork {
    pub ids: Vec<ActivityId>,
    pub index: HashMap<ActivityId, usize>,
    /// Indices in a topological order (every node after its predecessors).
    pub topo: Vec<usize>,
    pub preds: Vec<Vec<usize>>,
    pub durations: Vec<DurationModel>,
    pub fixed_costs: Vec<f64>,
    pub variable_rates: Vec<f64>,
    pub sinks: Vec<usize>,
}

impl CompiledNetwork {
    pub fn compile(net: &ProjectNetwork) -> Result<Self, NetworkError> {
        if net.activities.is_empty() {
            return Err(NetworkError::Empty);
        }

        let n = net.activities.len();
        let mut index = HashMap::with_capacity(n);
        for (i, a) in net.activities.iter().enumerate() {
            if a.id.as_str().is_empty() {
                return Err(NetworkError::EmptyActivityId);
            }
            if index.insert(a.id.clone(), i).is_some() {
                return Err(NetworkError::DuplicateActivity(a.id.clone()));
            }
        }

        let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut has_successor = vec![false; n];
        for (i, a) in net.activities.iter().enumerate() {
            match a.duration {
                DurationModel::Triangular { min, mp, max } => {
                    if !(min >= 0.0 && min <= mp && mp <= max) {
                        return Err(NetworkError::BadTriangular {
                            activity: a.id.clone(),
                            min,
                            mp,
                            max,
                        });
                    }
                }
                DurationModel::Deterministic(d) => {
                    if !(d >= 0.0) {
                        return Err(NetworkError::NegativeField {
                            activity: a.id.clone(),
                            field: "duration",
                            value: d,
                        });
                    }
                }
            }
            if !(a.fixed_cost >= 0.0) {
                return Err(NetworkError::NegativeField {
                    activity: a.id.clone(),
                    field: "fixed cost",
                    value: a.fixed_cost,
                });
            }
            if !(a.variable_cost_rate >= 0.0) {
                return Err(NetworkError::NegativeField {
                    activity: a.id.clone(),
                    field: "variable cost rate",
                    value: a.variable_cost_rate,
                });
            }
            for p in &a.predecessors {
                let pi = *index.get(p).ok_or_else(|| NetworkError::UnknownPredecessor {
                    activity: a.id.clone(),
                    predecessor: p.clone(),
                })?;
                if !preds[i].contains(&pi) {
                    preds[i].push(pi);
                    has_successor[pi] = true;
                }
            }
        }

        // Kahn's algorithm with a FIFO queue in declaration order, so the
        // returned order is deterministic for a given input.
        let mut remaining: Vec<usize> = preds.iter().map(Vec::len).collect();
        let mut queue: std::collections::VecDeque<usize> =
            (0..n).filter(|&i| remaining[i] == 0).collect();
        let mut succs: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (i, ps) in preds.iter().enumerate() {
            for &p in ps {
                succs[p].push(i);
            }
        }
        let mut topo = Vec::with_capacity(n);
        while let Some(i) = queue.pop_front() {
            topo.push(i);
            for &s in &succs[i] {
                remaining[s] -= 1;
                if remaining[s] == 0 {
                    queue.push_back(s);
                }
            }
        }
        if topo.len() < n {
            return Err(NetworkError::Cycle(Self::node_on_cycle(
                net, &preds, &topo, n,
            )));
        }

        let sinks = (0..n).filter(|&i| !has_successor[i]).collect();

        Ok(Self {
            ids: net.activities.iter().map(|a| a.id.clone()).collect(),
            index,
            topo,
            preds,
            durations: net.activities.iter().map(|a| a.duration).collect(),
            fixed_costs: net.activities.iter().map(|a| a.fixed_cost).collect(),
            variable_rates: net.activities.iter().map(|a| a.variable_cost_rate).collect(),
            sinks,
        })
    }

    /// Pick an activity that genuinely lies on a cycle: within the unplaced
    /// subgraph every node has an unplaced predecessor, so walking
    /// predecessors must revisit a node, and that node is on a cycle.
    fn node_on_cycle(
        net: &ProjectNetwork,
        preds: &[Vec<usize>],
        topo: &[usize],
        n: usize,
    ) -> ActivityId {
        let mut placed = vec![false; n];
        for &i in topo {
            placed[i] = true;
        }
        let start = (0..n).find(|&i| !placed[i]).expect("cycle implies unplaced node");
        let mut seen = vec![false; n];
        let mut cur = start;
        loop {
            if seen[cur] {
                return net.activities[cur].id.clone();
            }
            seen[cur] = true;
            cur = *preds[cur]
                .iter()
                .find(|&&p| !placed[p])
                .expect("unplaced node must have an unplaced predecessor");
        }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    /// Map a by-id assignment onto an index-aligned duration vector.
    pub fn assignment_vec(&self, d: &DurationAssignment) -> Result<Vec<f64>, NetworkError> {
        let mut out = Vec::with_capacity(self.len());
        for id in &self.ids {
            let v = d
                .get(id)
                .ok_or_else(|| NetworkError::MissingAssignment(id.clone()))?;
            if !(v >= 0.0) {
                return Err(NetworkError::NegativeDuration {
                    activity: id.clone(),
                    value: v,
                });
            }
            out.push(v);
        }
        Ok(out)
    }

    /// Earliest-finish forward pass; returns the project duration (the
    /// latest earliest finish over sink activities).
    pub fn forward_pass(&self, durations: &[f64], finish: &mut [f64]) -> f64 {
        for &i in &self.topo {
            let start = self.preds[i]
                .iter()
                .map(|&p| finish[p])
                .fold(0.0_f64, f64::max);
            finish[i] = start + durations[i];
        }
        self.sinks
            .iter()
            .map(|&s| finish[s])
            .fold(0.0_f64, f64::max)
    }

    /// Total cost: sum over activities of fixed cost, variable cost accrued
    /// over the realized duration, and any extra lump sums.
    pub fn total_cost(&self, durations: &[f64], extras: &[f64]) -> f64 {
        let mut total = 0.0;
        for i in 0..self.len() {
            total += self.fixed_costs[i] + self.variable_rates[i] * durations[i] + extras[i];
        }
        total
    }
}

/// Validates the network and returns a topological order of its activities:
/// every activity appears after all of its predecessors.
pub fn validate_network(net: &ProjectNetwork) -> Result<Vec<ActivityId>, NetworkError> {
    let compiled = CompiledNetwork::compile(net)?;
    Ok(compiled
        .topo
        .iter()
        .map(|&i| compiled.ids[i].clone())
        .collect())
}

/// Project duration under a realized duration assignment: the maximum over
/// sink activities of their earliest finish.
pub fn project_duration(net: &ProjectNetwork, d: &DurationAssignment) -> Result<f64, NetworkError> {
    let compiled = CompiledNetwork::compile(net)?;
    let durations = compiled.assignment_vec(d)?;
    let mut finish = vec![0.0; compiled.len()];
    Ok(compiled.forward_pass(&durations, &mut finish))
}

/// Total project cost under a realized duration assignment:
/// `sum(fixed_cost + variable_cost_rate * duration + extra)` over activities.
pub fn project_cost(
    net: &ProjectNetwork,
    d: &DurationAssignment,
    extra_costs: &ExtraCosts,
) -> Result<f64, NetworkError> {
    let compiled = CompiledNetwork::compile(net)?;
    let durations = compiled.assignment_vec(d)?;
    let mut extras = vec![0.0; compiled.len()];
    for (id, v) in extra_costs {
        let i = *compiled
            .index
            .get(id)
            .ok_or_else(|| NetworkError::UnknownActivity(id.clone()))?;
        extras[i] += v;
    }
    Ok(compiled.total_cost(&durations, &extras))
}

/// Cumulative planned cost over planned time.
///
/// Every activity is scheduled at its earliest start under most-likely
/// durations and accrues its full planned cost linearly over its scheduled
/// interval; a zero-length activity contributes its cost as a step at its
/// start. The curve is sampled at every activity start/finish epoch, so the
/// final point equals `(project_duration, project_cost)` under most-likely
/// durations.
pub fn planned_value_curve(net: &ProjectNetwork) -> Result<Vec<CurvePoint>, NetworkError> {
    let compiled = CompiledNetwork::compile(net)?;
    let n = compiled.len();
    let durations: Vec<f64> = compiled.durations.iter().map(|m| m.most_likely()).collect();

    let mut finish = vec![0.0; n];
    compiled.forward_pass(&durations, &mut finish);
    let start: Vec<f64> = (0..n).map(|i| finish[i] - durations[i]).collect();
    let cost: Vec<f64> = (0..n)
        .map(|i| compiled.fixed_costs[i] + compiled.variable_rates[i] * durations[i])
        .collect();

    let mut epochs: Vec<f64> = start.iter().chain(finish.iter()).copied().collect();
    epochs.sort_unstable_by(f64::total_cmp);
    epochs.dedup();

    let accrued = |i: usize, t: f64| -> f64 {
        if finish[i] <= start[i] {
            if t >= start[i] {
                cost[i]
            } else {
                0.0
            }
        } else {
            cost[i] * ((t - start[i]) / (finish[i] - start[i])).clamp(0.0, 1.0)
        }
    };

    Ok(epochs
        .into_iter()
        .map(|t| CurvePoint {
            time: t,
            cumulative_cost: (0..n).map(|i| accrued(i, t)).sum(),
        })
        .collect())
}
