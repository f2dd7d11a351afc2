//! Bounds and decision rules for probabilities of causation.
//!
//! For a binary exposure `x` and binary outcome `y`, every individual falls
//! into one of four response types: **benefit** (outcome iff exposed),
//! **harm** (outcome iff unexposed), **immunity** (outcome either way), and
//! **doom** (outcome neither way). Those probabilities are never point
//! identified by data alone, but combining an observational joint
//! distribution with experimental (interventional) outcome rates pins each
//! one inside a sharp interval.
//!
//! The crate computes:
//!
//! - sharp lower/upper bounds for all four response types, with the active
//!   constraint reported alongside each endpoint ([`response_bounds`]);
//! - ε-tightened benefit/harm bounds for populations where immunity is known
//!   to be rare ([`epsilon_response_bounds`]);
//! - sufficient and necessary clause sets for the decision "is immunity at
//!   most ε?", plus the smallest ε the data admits
//!   ([`immunity_conditions`], [`epsilon_feasible_min`]);
//! - mediated (front-door) analogues of the marginals, effect measures,
//!   conditions, and bounds when exposure acts through an observed mediator
//!   ([`MediationModel`]);
//! - immunity bounds under *unmeasured* confounding, parameterized by
//!   brackets on the latent arm-specific outcome rates, with the parameter
//!   regions that make each bracket logically possible or informative
//!   ([`sensitivity_bounds`], [`parameter_regions`], [`sweep`]);
//! - ground-truth oracles: structural models with an explicit confounder
//!   whose exact response-type probabilities are known, used to validate
//!   every bound and condition against truth ([`ConfoundedModel`],
//!   [`CanonicalModel`], [`MediationMechanism`], [`sample_canonical`]).
//!
//! Inputs arrive as small JSON files (see [`input`]); the `probcause`
//! binary exposes each computation as a subcommand. The `examples/`
//! directory walks through each capability end to end.

pub mod bounds;
pub mod cli;
pub mod conditions;
pub mod input;
pub mod mediation;
pub mod oracle;
pub mod prob;
pub mod render;
pub mod sensitivity;

pub use bounds::{ate, epsilon_response_bounds, response_bounds, BoundsError, EpsilonBound};
pub use conditions::{
    epsilon_feasible_min, immunity_conditions, Clause, ClauseRole, ConditionReport,
};
pub use input::{Input, InputError};
pub use mediation::{IndirectEffects, IndirectMarginals, MediationError, MediationModel};
pub use oracle::{
    sample_canonical, sample_mediation_mechanism, CanonicalModel, ConfoundedModel,
    MediationMechanism, OracleError, ResponseProbs,
};
pub use prob::{
    ExperimentalMarginals, Interval, ObservationalJoint, ProbError, ResponseTarget,
    COMPARISON_TOLERANCE, DISTRIBUTION_TOLERANCE,
};
pub use sensitivity::{
    parameter_regions, sensitivity_bounds, sensitivity_bounds_unchecked, sweep, ParameterRegions,
    Region, RegionSet, SensitivityError, SensitivityParams, SweepBound, SweepGrid,
};
