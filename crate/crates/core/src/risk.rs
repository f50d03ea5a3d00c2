//! Risk register: category ladders mapping semantic levels to numeric
//! intervals, per-risk probability and impact models, and the qualitative
//! probability-impact matrix scoring used as the comparison baseline.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::project::{ActivityId, ProjectNetwork};

/// Five ordered semantic levels, `VL < L < M < H < VH`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum CategoryLevel {
    #[serde(rename = "VL")]
    VeryLow,
    #[serde(rename = "L")]
    Low,
    #[serde(rename = "M")]
    Medium,
    #[serde(rename = "H")]
    High,
    #[serde(rename = "VH")]
    VeryHigh,
}

impl CategoryLevel {
    pub const ALL: [CategoryLevel; 5] = [
        CategoryLevel::VeryLow,
        CategoryLevel::Low,
        CategoryLevel::Medium,
        CategoryLevel::High,
        CategoryLevel::VeryHigh,
    ];

    pub fn index(self) -> usize {
        match self {
            CategoryLevel::VeryLow => 0,
            CategoryLevel::Low => 1,
            CategoryLevel::Medium => 2,
            CategoryLevel::High => 3,
            CategoryLevel::VeryHigh => 4,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            CategoryLevel::VeryLow => "VL",
            CategoryLevel::Low => "L",
            CategoryLevel::Medium => "M",
            CategoryLevel::High => "H",
            CategoryLevel::VeryHigh => "VH",
        }
    }
}

impl fmt::Display for CategoryLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Closed numeric interval `[lo, hi]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 2]", into = "[f64; 2]")]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self, RiskError> {
        if !(lo <= hi) {
            return Err(RiskError::BadInterval { lo, hi });
        }
        Ok(Self { lo, hi })
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    /// Midpoint; the marginal occurrence rate of an epistemic probability.
    pub fn mean(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }
}

impl TryFrom<[f64; 2]> for Interval {
    type Error = RiskError;

    fn try_from(v: [f64; 2]) -> Result<Self, Self::Error> {
        Interval::new(v[0], v[1])
    }
}

impl From<Interval> for [f64; 2] {
    fn from(iv: Interval) -> Self {
        [iv.lo, iv.hi]
    }
}

/// Which quantity a category ladder maps levels onto.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LadderKind {
    /// Occurrence probability, intervals within `[0, 1]`.
    Probability,
    /// Impact on the target activity's duration, in days.
    DurationImpact,
    /// Lump-sum impact on the target activity's cost, in money.
    CostImpact,
}

impl fmt::Display for LadderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LadderKind::Probability => "probability",
            LadderKind::DurationImpact => "duration impact",
            LadderKind::CostImpact => "cost impact",
        })
    }
}

/// Mapping from the five semantic levels to numeric intervals.
///
/// Intervals are ordered and may only touch at shared endpoints; sampling
/// treats them as closed, so the measure-zero overlap at a shared endpoint
/// is harmless.
#[derive(Clone, Debug, PartialEq)]
pub struct CategoryLadder {
    kind: LadderKind,
    levels: [Interval; 5],
}

impl CategoryLadder {
    /// Intervals in level order `VL, L, M, H, VH`.
    pub fn new(kind: LadderKind, levels: [Interval; 5]) -> Result<Self, RiskError> {
        for (i, iv) in levels.iter().enumerate() {
            if !(iv.lo >= 0.0) {
                return Err(RiskError::NegativeLadderBound {
                    kind,
                    level: CategoryLevel::ALL[i],
                });
            }
            if kind == LadderKind::Probability && !(iv.hi <= 1.0) {
                return Err(RiskError::ProbabilityOutOfRange(iv.hi));
            }
        }
        for i in 1..5 {
            if levels[i].lo < levels[i - 1].hi {
                return Err(RiskError::OverlappingLadder {
                    kind,
                    lower: CategoryLevel::ALL[i - 1],
                    upper: CategoryLevel::ALL[i],
                });
            }
        }
        Ok(Self { kind, levels })
    }

    pub fn kind(&self) -> LadderKind {
        self.kind
    }

    /// The stored interval for a level, exactly as configured.
    pub fn interval(&self, level: CategoryLevel) -> Interval {
        self.levels[level.index()]
    }

    pub fn levels(&self) -> &[Interval; 5] {
        &self.levels
    }
}

/// How the occurrence probability of a risk is modelled.
///
/// `Category` and `UniformInterval` express epistemic uncertainty (the value
/// is only known to lie in a range); `Point` is a deterministic estimate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProbabilityModel {
    Category(CategoryLevel),
    UniformInterval(Interval),
    Point(f64),
}

/// How the magnitude of a risk impact is modelled.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ImpactModel {
    Category(CategoryLevel),
    UniformInterval(Interval),
    Point(f64),
    /// Aleatoric variability around a most-probable magnitude.
    Triangular { min: f64, mp: f64, max: f64 },
}

/// Short unique token identifying a risk (e.g. `R3`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RiskId(pub String);

impl RiskId {
    pub fn new(id: impl Into<String>) -> Self {
        Self(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for RiskId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for RiskId {
    fn from(s: &str) -> Self {
        Self(s.to_owned())
    }
}

/// One identified risk: where it strikes, how likely it is, and what it does
/// to the target activity's duration and/or cost when it occurs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RiskSpec {
    pub id: RiskId,
    #[serde(default)]
    pub label: String,
    #[serde(rename = "target")]
    pub target_activity: ActivityId,
    pub probability: ProbabilityModel,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub duration_impact: Option<ImpactModel>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cost_impact: Option<ImpactModel>,
}

impl RiskSpec {
    pub fn new(
        id: impl Into<RiskId>,
        target: impl Into<ActivityId>,
        probability: ProbabilityModel,
    ) -> Self {
        Self {
            id: id.into(),
            label: String::new(),
            target_activity: target.into(),
            probability,
            duration_impact: None,
            cost_impact: None,
        }
    }

    pub fn label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn duration_impact(mut self, impact: ImpactModel) -> Self {
        self.duration_impact = Some(impact);
        self
    }

    pub fn cost_impact(mut self, impact: ImpactModel) -> Self {
        self.cost_impact = Some(impact);
        self
    }
}

/// The three ladders a register resolves category references against.
#[derive(Clone, Debug, PartialEq)]
pub struct Ladders {
    pub probability: CategoryLadder,
    pub duration_impact: CategoryLadder,
    pub cost_impact: CategoryLadder,
}

impl Ladders {
    pub fn new(
        probability: CategoryLadder,
        duration_impact: CategoryLadder,
        cost_impact: CategoryLadder,
    ) -> Result<Self, RiskError> {
        for (ladder, want) in [
            (&probability, LadderKind::Probability),
            (&duration_impact, LadderKind::DurationImpact),
            (&cost_impact, LadderKind::CostImpact),
        ] {
            if ladder.kind() != want {
                return Err(RiskError::LadderKindMismatch {
                    expected: want,
                    got: ladder.kind(),
                });
            }
        }
        Ok(Self {
            probability,
            duration_impact,
            cost_impact,
        })
    }
}

/// The full risk register: ladders plus the ordered list of risks.
#[derive(Clone, Debug, PartialEq)]
pub struct RiskRegister {
    pub ladders: Ladders,
    pub risks: Vec<RiskSpec>,
}

impl RiskRegister {
    pub fn new(ladders: Ladders, risks: Vec<RiskSpec>) -> Self {
        Self { ladders, risks }
    }

    pub fn get(&self, id: &RiskId) -> Option<&RiskSpec> {
        self.risks.iter().find(|r| &r.id == id)
    }

    pub fn len(&self) -> usize {
        self.risks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.risks.is_empty()
    }

    /// Checks every register invariant against a network: unique ids, known
    /// target activities, at least one impact per risk, resolvable models
    /// with valid supports.
    pub fn validate(&self, net: &ProjectNetwork) -> Result<(), RiskError> {
        let mut seen = HashSet::new();
        for risk in &self.risks {
            if risk.id.as_str().is_empty() {
                return Err(RiskError::EmptyRiskId);
            }
            if !seen.insert(&risk.id) {
                return Err(RiskError::DuplicateRisk(risk.id.clone()));
            }
            if !net.contains(&risk.target_activity) {
                return Err(RiskError::UnknownTarget {
                    risk: risk.id.clone(),
                    activity: risk.target_activity.clone(),
                });
            }
            if risk.duration_impact.is_none() && risk.cost_impact.is_none() {
                return Err(RiskError::NoImpact(risk.id.clone()));
            }
            resolve_probability(&risk.probability, &self.ladders.probability)
                .map_err(|e| e.for_risk(&risk.id))?;
            if let Some(impact) = &risk.duration_impact {
                resolve_impact(impact, &self.ladders.duration_impact)
                    .map_err(|e| e.for_risk(&risk.id))?;
            }
            if let Some(impact) = &risk.cost_impact {
                resolve_impact(impact, &self.ladders.cost_impact)
                    .map_err(|e| e.for_risk(&risk.id))?;
            }
        }
        Ok(())
    }
}

/// A probability model with category references resolved: ready to sample.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ProbabilitySpec {
    Point(f64),
    Uniform(Interval),
}

/// An impact model with category references resolved: ready to sample.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ImpactSpec {
    Point(f64),
    Uniform(Interval),
    Triangular { min: f64, mp: f64, max: f64 },
}

/// Resolves a probability model against the probability ladder. Categories
/// become the ladder's stored interval; other variants pass through after
/// range validation.
pub fn resolve_probability(
    model: &ProbabilityModel,
    ladder: &CategoryLadder,
) -> Result<ProbabilitySpec, RiskError> {
    if ladder.kind() != LadderKind::Probability {
        return Err(RiskError::LadderKindMismatch {
            expected: LadderKind::Probability,
            got: ladder.kind(),
        });
    }
    let check = |iv: Interval| -> Result<Interval, RiskError> {
        if iv.lo < 0.0 || iv.hi > 1.0 {
            return Err(RiskError::ProbabilityOutOfRange(if iv.lo < 0.0 {
                iv.lo
            } else {
                iv.hi
            }));
        }
        Ok(iv)
    };
    match *model {
        ProbabilityModel::Category(level) => Ok(ProbabilitySpec::Uniform(check(
            ladder.interval(level),
        )?)),
        ProbabilityModel::UniformInterval(iv) => Ok(ProbabilitySpec::Uniform(check(iv)?)),
        ProbabilityModel::Point(p) => {
            if !(0.0..=1.0).contains(&p) {
                return Err(RiskError::ProbabilityOutOfRange(p));
            }
            Ok(ProbabilitySpec::Point(p))
        }
    }
}

/// Resolves an impact model against the matching impact ladder.
pub fn resolve_impact(
    model: &ImpactModel,
    ladder: &CategoryLadder,
) -> Result<ImpactSpec, RiskError> {
    if ladder.kind() == LadderKind::Probability {
        return Err(RiskError::LadderKindMismatch {
            expected: LadderKind::DurationImpact,
            got: ladder.kind(),
        });
    }
    match *model {
        ImpactModel::Category(level) => Ok(ImpactSpec::Uniform(ladder.interval(level))),
        ImpactModel::UniformInterval(iv) => {
            if iv.lo < 0.0 {
                return Err(RiskError::NegativeImpact(iv.lo));
            }
            Ok(ImpactSpec::Uniform(iv))
        }
        ImpactModel::Point(v) => {
            if v < 0.0 {
                return Err(RiskError::NegativeImpact(v));
            }
            Ok(ImpactSpec::Point(v))
        }
        ImpactModel::Triangular { min, mp, max } => {
            if !(min >= 0.0 && min <= mp && mp <= max) {
                return Err(RiskError::BadTriangularImpact { min, mp, max });
            }
            Ok(ImpactSpec::Triangular { min, mp, max })
        }
    }
}

/// Representative score per level for qualitative matrix ranking, separately
/// for probability and impact. Scores are strictly increasing with level and
/// lie in `(0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ScoreLadder {
    probability: [f64; 5],
    impact: [f64; 5],
}

impl ScoreLadder {
    pub fn new(probability: [f64; 5], impact: [f64; 5]) -> Result<Self, RiskError> {
        for scores in [&probability, &impact] {
            for w in scores.windows(2) {
                if !(w[0] < w[1]) {
                    return Err(RiskError::ScoresNotIncreasing);
                }
            }
            if !(scores[0] > 0.0 && scores[4] <= 1.0) {
                return Err(RiskError::ScoresNotIncreasing);
            }
        }
        Ok(Self { probability, impact })
    }

    pub fn probability_score(&self, level: CategoryLevel) -> f64 {
        self.probability[level.index()]
    }

    pub fn impact_score(&self, level: CategoryLevel) -> f64 {
        self.impact[level.index()]
    }
}

impl Default for ScoreLadder {
    fn default() -> Self {
        Self {
            probability: [0.1, 0.3, 0.5, 0.7, 0.9],
            impact: [0.05, 0.1, 0.2, 0.4, 0.8],
        }
    }
}

/// Qualitative matrix score: `score(probability level) * score(impact level)`.
pub fn matrix_score(
    p_level: CategoryLevel,
    i_level: CategoryLevel,
    scores: &ScoreLadder,
) -> f64 {
    scores.probability_score(p_level) * scores.impact_score(i_level)
}

/// Competition ranking over `values`, descending: the rank of an item is one
/// plus the number of strictly greater items, so ties share the lowest rank
/// of their block and the next rank skips accordingly (1, 2, 3, 3, 5, ...).
pub fn competition_rank_desc(values: &[f64]) -> Vec<usize> {
    values
        .iter()
        .map(|v| 1 + values.iter().filter(|w| **w > *v).count())
        .collect()
}

/// One risk's qualitative scoring within a matrix group.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixEntry {
    pub risk_id: RiskId,
    pub probability_level: CategoryLevel,
    pub impact_level: CategoryLevel,
    pub score: f64,
    pub rank: usize,
}

/// Qualitative rankings, grouped the way the matrix is used: risks with a
/// duration impact ranked among themselves, risks with a cost impact ranked
/// among themselves. A risk carrying both impacts appears in both groups.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixRanking {
    pub duration: Vec<MatrixEntry>,
    pub cost: Vec<MatrixEntry>,
}

/// Scores and ranks every risk of the register on the qualitative matrix.
///
/// Matrix scoring needs semantic levels, so every grouped risk must use
/// `Category` models for its probability and the relevant impact.
pub fn matrix_rank(
    register: &RiskRegister,
    scores: &ScoreLadder,
) -> Result<MatrixRanking, RiskError> {
    let level_of_probability = |risk: &RiskSpec| -> Result<CategoryLevel, RiskError> {
        match risk.probability {
            ProbabilityModel::Category(level) => Ok(level),
            _ => Err(RiskError::NotCategorical {
                risk: risk.id.clone(),
                field: "probability",
            }),
        }
    };
    let level_of_impact =
        |risk: &RiskSpec, impact: &ImpactModel, field: &'static str| match *impact {
            ImpactModel::Category(level) => Ok(level),
            _ => Err(RiskError::NotCategorical {
                risk: risk.id.clone(),
                field,
            }),
        };

    let group = |pick: fn(&RiskSpec) -> Option<&ImpactModel>,
                 field: &'static str|
     -> Result<Vec<MatrixEntry>, RiskError> {
        let mut entries = Vec::new();
        for risk in &register.risks {
            if let Some(impact) = pick(risk) {
                let p_level = level_of_probability(risk)?;
                let i_level = level_of_impact(risk, impact, field)?;
                entries.push(MatrixEntry {
                    risk_id: risk.id.clone(),
                    probability_level: p_level,
                    impact_level: i_level,
                    score: matrix_score(p_level, i_level, scores),
                    rank: 0,
                });
            }
        }
        let values: Vec<f64> = entries.iter().map(|e| e.score).collect();
        for (entry, rank) in entries.iter_mut().zip(competition_rank_desc(&values)) {
            entry.rank = rank;
        }
        Ok(entries)
    };

    Ok(MatrixRanking {
        duration: group(|r| r.duration_impact.as_ref(), "duration impact")?,
        cost: group(|r| r.cost_impact.as_ref(), "cost impact")?,
    })
}

#[derive(Debug, Error, PartialEq)]
pub enum RiskError {
    #[error("interval bounds out of order: lo={lo}, hi={hi}")]
    BadInterval { lo: f64, hi: f64 },
    #[error("{kind} ladder has a negative bound at level {level}")]
    NegativeLadderBound {
        kind: LadderKind,
        level: CategoryLevel,
    },
    #[error("{kind} ladder: level {upper} overlaps level {lower}")]
    OverlappingLadder {
        kind: LadderKind,
        lower: CategoryLevel,
        upper: CategoryLevel,
    },
    #[error("expected a {expected} ladder, got a {got} ladder")]
    LadderKindMismatch {
        expected: LadderKind,
        got: LadderKind,
    },
    #[error("probability value {0} lies outside [0, 1]")]
    ProbabilityOutOfRange(f64),
    #[error("impact magnitude {0} is negative")]
    NegativeImpact(f64),
    #[error("invalid triangular impact (min={min}, mp={mp}, max={max})")]
    BadTriangularImpact { min: f64, mp: f64, max: f64 },
    #[error("risk id must be non-empty")]
    EmptyRiskId,
    #[error("duplicate risk id `{0}`")]
    DuplicateRisk(RiskId),
    #[error("risk `{risk}` targets unknown activity `{activity}`")]
    UnknownTarget { risk: RiskId, activity: ActivityId },
    #[error("risk `{0}` has neither a duration impact nor a cost impact")]
    NoImpact(RiskId),
    #[error("risk `{risk}`: {source}")]
    ForRisk {
        risk: RiskId,
        #[source]
        source: Box<RiskError>,
    },
    #[error("risk `{risk}` cannot be matrix-scored: {field} is not a category level")]
    NotCategorical { risk: RiskId, field: &'static str },
    #[error("score ladder values must be strictly increasing within (0, 1]")]
    ScoresNotIncreasing,
}

impl RiskError {
    fn for_risk(self, id: &RiskId) -> RiskError {
        RiskError::ForRisk {
            risk: id.clone(),
            source: Box::new(self),
        }
    }
}
