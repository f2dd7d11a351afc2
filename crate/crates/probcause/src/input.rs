//! JSON input files.
//!
//! One envelope carries up to six sections, each describing the analysis
//! inputs at a different level of knowledge:
//!
//! * `obs` — the observational joint p(X, Y) by its four cells.
//! * `exp` — the experimental marginals p(y_x), p(y_x').
//! * `med` — a mediation model (exposure, binary mediator, outcome
//!   conditionals).
//! * `model` — a latent-confounder outcome-rate model (ground truth).
//! * `canonical` — a latent-confounder model with per-level response-type
//!   distributions (ground truth with exact counterfactuals).
//! * `mechanism` — a fully specified front-door mechanism (ground truth for
//!   the mediated analysis).
//!
//! Every section is validated on load. Commands that need the observational
//! joint (with or without outcome marginals) accept any one section that
//! determines it; supplying several is ambiguous and rejected rather than
//! silently prioritized.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::mediation::{MediationError, MediationModel};
use crate::oracle::{
    CanonicalModel, ConfoundedModel, MediationMechanism, OracleError, ResponseDist,
};
use crate::prob::{ExperimentalMarginals, ObservationalJoint, ProbError};

#[derive(Debug, Error)]
pub enum InputError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("invalid input JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Prob(#[from] ProbError),
    #[error(transparent)]
    Mediation(#[from] MediationError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("input file lacks {needed}; add {hint}")]
    Missing { needed: String, hint: String },
    #[error(
        "input file is ambiguous: sections {first:?} and {second:?} both determine the \
         analysis data; keep exactly one"
    )]
    Ambiguous { first: String, second: String },
}

/// Wire form of the outcome conditionals of a mediation model, keyed by
/// (exposure, mediator) cell: `xz` = p(y | x, z), `x_z_` = p(y | x', z').
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutcomeGivenXz {
    pub xz: f64,
    pub xz_: f64,
    pub x_z: f64,
    pub x_z_: f64,
}

/// Wire form of a mediation model.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MedSection {
    pub p_x: f64,
    pub z_given_x: f64,
    pub z_given_x_: f64,
    pub y_given: OutcomeGivenXz,
}

impl MedSection {
    pub fn to_model(&self) -> Result<MediationModel, MediationError> {
        MediationModel::new(
            self.p_x,
            self.z_given_x,
            self.z_given_x_,
            self.y_given.xz,
            self.y_given.xz_,
            self.y_given.x_z,
            self.y_given.x_z_,
        )
    }

    pub fn from_model(model: &MediationModel) -> Self {
        Self {
            p_x: model.p_x(),
            z_given_x: model.p_z_given_x(),
            z_given_x_: model.p_z_given_xp(),
            y_given: OutcomeGivenXz {
                xz: model.p_y_given_xz(),
                xz_: model.p_y_given_xzp(),
                x_z: model.p_y_given_xpz(),
                x_z_: model.p_y_given_xpzp(),
            },
        }
    }
}

/// Wire form of the per-level outcome rates of a confounder model: `xu` =
/// p(y | x, u) per level, `x_u` = p(y | x', u) per level.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutcomeGivenXu {
    pub xu: Vec<f64>,
    pub x_u: Vec<f64>,
}

/// Wire form of a latent-confounder outcome-rate model.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    pub p_u: Vec<f64>,
    pub x_given_u: Vec<f64>,
    pub y_given: OutcomeGivenXu,
}

impl ModelSection {
    pub fn to_model(&self) -> Result<ConfoundedModel, OracleError> {
        ConfoundedModel::new(
            self.p_u.clone(),
            self.x_given_u.clone(),
            self.y_given.xu.clone(),
            self.y_given.x_u.clone(),
        )
    }

    pub fn from_model(model: &ConfoundedModel) -> Self {
        Self {
            p_u: model.p_u().to_vec(),
            x_given_u: model.p_x_given_u().to_vec(),
            y_given: OutcomeGivenXu {
                xu: model.p_y_given_x_u().to_vec(),
                x_u: model.p_y_given_xp_u().to_vec(),
            },
        }
    }
}

/// Wire form of one response-type distribution.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResponseCells {
    pub immune: f64,
    pub doomed: f64,
    pub benefit: f64,
    pub harm: f64,
}

impl ResponseCells {
    pub fn to_dist(&self) -> Result<ResponseDist, OracleError> {
        ResponseDist::new(self.immune, self.doomed, self.benefit, self.harm)
    }

    pub fn from_dist(dist: &ResponseDist) -> Self {
        Self {
            immune: dist.immune(),
            doomed: dist.doomed(),
            benefit: dist.benefit(),
            harm: dist.harm(),
        }
    }
}

/// Wire form of a canonical (response-type) confounder model.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CanonicalSection {
    pub p_u: Vec<f64>,
    pub x_given_u: Vec<f64>,
    pub r_given_u: Vec<ResponseCells>,
}

impl CanonicalSection {
    pub fn to_model(&self) -> Result<CanonicalModel, OracleError> {
        let dists = self
            .r_given_u
            .iter()
            .map(ResponseCells::to_dist)
            .collect::<Result<Vec<_>, _>>()?;
        CanonicalModel::new(self.p_u.clone(), self.x_given_u.clone(), dists)
    }

    pub fn from_model(model: &CanonicalModel) -> Self {
        Self {
            p_u: model.p_u().to_vec(),
            x_given_u: model.p_x_given_u().to_vec(),
            r_given_u: model
                .response_dists()
                .iter()
                .map(ResponseCells::from_dist)
                .collect(),
        }
    }
}

/// Wire form of a front-door mechanism: per-level response types of the
/// outcome with respect to the *mediator*.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MechanismSection {
    pub p_u: Vec<f64>,
    pub x_given_u: Vec<f64>,
    pub z_given_x: f64,
    pub z_given_x_: f64,
    pub ry_given_u: Vec<ResponseCells>,
}

impl MechanismSection {
    pub fn to_mechanism(&self) -> Result<MediationMechanism, OracleError> {
        let dists = self
            .ry_given_u
            .iter()
            .map(ResponseCells::to_dist)
            .collect::<Result<Vec<_>, _>>()?;
        MediationMechanism::new(
            self.p_u.clone(),
            self.x_given_u.clone(),
            self.z_given_x,
            self.z_given_x_,
            dists,
        )
    }

    pub fn from_mechanism(mechanism: &MediationMechanism) -> Self {
        Self {
            p_u: mechanism.p_u().to_vec(),
            x_given_u: mechanism.p_x_given_u().to_vec(),
            z_given_x: mechanism.p_z_given_x(),
            z_given_x_: mechanism.p_z_given_xp(),
            ry_given_u: mechanism
                .response_dists()
                .iter()
                .map(ResponseCells::from_dist)
                .collect(),
        }
    }
}

/// The raw envelope as deserialized; all sections optional.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct Envelope {
    obs: Option<ObservationalJoint>,
    exp: Option<ExperimentalMarginals>,
    med: Option<MedSection>,
    model: Option<ModelSection>,
    canonical: Option<CanonicalSection>,
    mechanism: Option<MechanismSection>,
}

/// A parsed and fully validated input file.
#[derive(Debug, Clone)]
pub struct Input {
    pub obs: Option<ObservationalJoint>,
    pub exp: Option<ExperimentalMarginals>,
    pub med: Option<MediationModel>,
    pub model: Option<ConfoundedModel>,
    pub canonical: Option<CanonicalModel>,
    pub mechanism: Option<MediationMechanism>,
}

impl Input {
    pub fn load(path: &Path) -> Result<Self, InputError> {
        let text = fs::read_to_string(path).map_err(|e| InputError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, InputError> {
        let envelope: Envelope = serde_json::from_str(text)?;
        Ok(Self {
            obs: envelope.obs,
            exp: envelope.exp,
            med: envelope
                .med
                .as_ref()
                .map(MedSection::to_model)
                .transpose()?,
            model: envelope
                .model
                .as_ref()
                .map(ModelSection::to_model)
                .transpose()?,
            canonical: envelope
                .canonical
                .as_ref()
                .map(CanonicalSection::to_model)
                .transpose()?,
            mechanism: envelope
                .mechanism
                .as_ref()
                .map(MechanismSection::to_mechanism)
                .transpose()?,
        })
    }

    /// Names of the sections that can determine the observational joint (and
    /// possibly outcome marginals), in the order they were checked.
    fn data_sections(&self) -> Vec<&'static str> {
        let mut present = Vec::new();
        if self.obs.is_some() || self.exp.is_some() {
            present.push("obs/exp");
        }
        if self.model.is_some() {
            present.push("model");
        }
        if self.canonical.is_some() {
            present.push("canonical");
        }
        if self.med.is_some() {
            present.push("med");
        }
        present
    }

    fn sole_data_section(&self, needed: &str, hint: &str) -> Result<&'static str, InputError> {
        let present = self.data_sections();
        match present.as_slice() {
            [] => Err(InputError::Missing {
                needed: needed.to_string(),
                hint: hint.to_string(),
            }),
            [only] => Ok(only),
            [first, second, ..] => Err(InputError::Ambiguous {
                first: (*first).to_string(),
                second: (*second).to_string(),
            }),
        }
    }

    /// The observational joint and the outcome marginals under both arms,
    /// from whichever single section provides them:
    ///
    /// * `obs` + `exp` verbatim;
    /// * `model` or `canonical` evaluated in closed form;
    /// * `med` with its graph-implied marginals p(y_x) = p(y | x).
    pub fn joint_and_marginals(
        &self,
    ) -> Result<(ObservationalJoint, ExperimentalMarginals), InputError> {
        match self.sole_data_section(
            "observational joint and outcome marginals",
            "either obs+exp, or one of the model/canonical/med sections",
        )? {
            "obs/exp" => {
                let obs = self.obs.ok_or_else(|| InputError::Missing {
                    needed: "an obs section".to_string(),
                    hint: "the four joint cells alongside exp".to_string(),
                })?;
                let exp = self.exp.ok_or_else(|| InputError::Missing {
                    needed: "an exp section".to_string(),
                    hint: "y_do_x and y_do_x_ alongside obs".to_string(),
                })?;
                Ok((obs, exp))
            }
            "model" => {
                let eval = self.model.as_ref().expect("section present").evaluate();
                Ok((eval.joint, eval.exp))
            }
            "canonical" => {
                let eval = self.canonical.as_ref().expect("section present").evaluate();
                Ok((eval.joint, eval.exp))
            }
            "med" => {
                let med = self.med.as_ref().expect("section present");
                Ok((med.observational_joint(), med.direct_marginals()))
            }
            _ => unreachable!("data_sections returns only the four names"),
        }
    }

    /// The observational joint alone; `obs` suffices here without `exp`.
    pub fn joint_only(&self) -> Result<ObservationalJoint, InputError> {
        match self.sole_data_section(
            "an observational joint",
            "one of the obs/model/canonical/med sections",
        )? {
            "obs/exp" => self.obs.ok_or_else(|| InputError::Missing {
                needed: "an obs section".to_string(),
                hint: "the four joint cells (exp alone does not determine the joint)".to_string(),
            }),
            "model" => Ok(self
                .model
                .as_ref()
                .expect("section present")
                .evaluate()
                .joint),
            "canonical" => Ok(self
                .canonical
                .as_ref()
                .expect("section present")
                .evaluate()
                .joint),
            "med" => Ok(self
                .med
                .as_ref()
                .expect("section present")
                .observational_joint()),
            _ => unreachable!("data_sections returns only the four names"),
        }
    }

    pub fn mediation_model(&self) -> Result<&MediationModel, InputError> {
        self.med.as_ref().ok_or_else(|| InputError::Missing {
            needed: "a mediation model".to_string(),
            hint: "a med section".to_string(),
        })
    }

    pub fn confounded_model(&self) -> Result<&ConfoundedModel, InputError> {
        self.model.as_ref().ok_or_else(|| InputError::Missing {
            needed: "a latent-confounder model".to_string(),
            hint: "a model section".to_string(),
        })
    }

    pub fn canonical_model(&self) -> Result<&CanonicalModel, InputError> {
        self.canonical.as_ref().ok_or_else(|| InputError::Missing {
            needed: "a canonical model".to_string(),
            hint: "a canonical section".to_string(),
        })
    }

    pub fn mediation_mechanism(&self) -> Result<&MediationMechanism, InputError> {
        self.mechanism.as_ref().ok_or_else(|| InputError::Missing {
            needed: "a front-door mechanism".to_string(),
            hint: "a mechanism section".to_string(),
        })
    }
}
