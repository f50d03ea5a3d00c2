//! The project document: one JSON file holding the network, the category
//! ladders, the risk register, and optional simulation defaults. Parsing
//! produces fully validated domain objects or a located error.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use riskprio_core::{
    Activity, CategoryLadder, Interval, LadderKind, Ladders, NetworkError, ProjectNetwork,
    RiskError, RiskRegister, RiskSpec, SimError, SimulationConfig,
};

/// Serialized form of one category ladder: interval per level.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LadderLevels {
    #[serde(rename = "VL")]
    pub very_low: Interval,
    #[serde(rename = "L")]
    pub low: Interval,
    #[serde(rename = "M")]
    pub medium: Interval,
    #[serde(rename = "H")]
    pub high: Interval,
    #[serde(rename = "VH")]
    pub very_high: Interval,
}

impl LadderLevels {
    fn to_ladder(&self, kind: LadderKind) -> Result<CategoryLadder, RiskError> {
        CategoryLadder::new(
            kind,
            [
                self.very_low,
                self.low,
                self.medium,
                self.high,
                self.very_high,
            ],
        )
    }

    fn from_ladder(ladder: &CategoryLadder) -> Self {
        let levels = ladder.levels();
        Self {
            very_low: levels[0],
            low: levels[1],
            medium: levels[2],
            high: levels[3],
            very_high: levels[4],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LaddersDoc {
    pub probability: LadderLevels,
    pub duration_impact: LadderLevels,
    pub cost_impact: LadderLevels,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProjectSection {
    #[serde(default = "default_currency")]
    pub currency_unit: String,
    #[serde(default = "default_time_unit")]
    pub time_unit: String,
    pub activities: Vec<Activity>,
}

fn default_currency() -> String {
    "monetary units".to_owned()
}

fn default_time_unit() -> String {
    "days".to_owned()
}

/// Optional simulation defaults; command-line flags override these.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub iterations: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub percentile: Option<f64>,
}

/// The complete document.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProjectDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub notes: Option<String>,
    pub project: ProjectSection,
    pub ladders: LaddersDoc,
    #[serde(default)]
    pub risks: Vec<RiskSpec>,
    #[serde(default)]
    pub config: ConfigSection,
}

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("cannot read `{path}`: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error(transparent)]
    Risk(#[from] RiskError),
    #[error(transparent)]
    Sim(#[from] SimError),
}

impl ProjectDocument {
    /// Parses and fully validates a document from a JSON string.
    pub fn from_json(text: &str) -> Result<Self, DocumentError> {
        let doc: ProjectDocument =
            serde_json::from_str(text).map_err(|e| DocumentError::Syntax {
                line: e.line(),
                column: e.column(),
                message: e.to_string(),
            })?;
        doc.validate()?;
        Ok(doc)
    }

    /// Checks that the document describes a consistent network, ladders,
    /// register and config without converting it.
    pub fn validate(&self) -> Result<(), DocumentError> {
        let (net, register, config) = self.to_domain()?;
        riskprio_core::validate_network(&net)?;
        register.validate(&net)?;
        config.validate()?;
        Ok(())
    }

    /// Converts into domain objects (network, register, simulation config).
    pub fn to_domain(
        &self,
    ) -> Result<(ProjectNetwork, RiskRegister, SimulationConfig), DocumentError> {
        let net = ProjectNetwork {
            activities: self.project.activities.clone(),
            currency_unit: self.project.currency_unit.clone(),
            time_unit: self.project.time_unit.clone(),
        };
        let ladders = Ladders::new(
            self.ladders.probability.to_ladder(LadderKind::Probability)?,
            self.ladders
                .duration_impact
                .to_ladder(LadderKind::DurationImpact)?,
            self.ladders.cost_impact.to_ladder(LadderKind::CostImpact)?,
        )?;
        let register = RiskRegister::new(ladders, self.risks.clone());
        let defaults = SimulationConfig::default();
        let config = SimulationConfig {
            iterations: self.config.iterations.unwrap_or(defaults.iterations),
            seed: self.config.seed.unwrap_or(defaults.seed),
            percentile: self.config.percentile.unwrap_or(defaults.percentile),
        };
        Ok((net, register, config))
    }

    /// Rebuilds a document from domain objects; `from_json(to_json(..))`
    /// round-trips to equal domain objects.
    pub fn from_domain(
        net: &ProjectNetwork,
        register: &RiskRegister,
        config: &SimulationConfig,
    ) -> Self {
        Self {
            notes: None,
            project: ProjectSection {
                currency_unit: net.currency_unit.clone(),
                time_unit: net.time_unit.clone(),
                activities: net.activities.clone(),
            },
            ladders: LaddersDoc {
                probability: LadderLevels::from_ladder(&register.ladders.probability),
                duration_impact: LadderLevels::from_ladder(&register.ladders.duration_impact),
                cost_impact: LadderLevels::from_ladder(&register.ladders.cost_impact),
            },
            risks: register.risks.clone(),
            config: ConfigSection {
                iterations: Some(config.iterations),
                seed: Some(config.seed),
                percentile: Some(config.percentile),
            },
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serialization cannot fail")
    }
}

/// Reads, parses and validates a document file, returning the domain
/// objects ready for analysis.
pub fn parse_document(
    path: &Path,
) -> Result<(ProjectNetwork, RiskRegister, SimulationConfig), DocumentError> {
    let text = fs::read_to_string(path).map_err(|source| DocumentError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let doc = ProjectDocument::from_json(&text)?;
    doc.to_domain()
}
