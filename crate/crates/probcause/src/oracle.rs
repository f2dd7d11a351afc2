//! Ground-truth generators: fully specified structural models whose exact
//! counterfactual quantities are computable in closed form.
//!
//! Three model families live here.
//!
//! * [`ConfoundedModel`] — a latent confounder U drives both a binary
//!   exposure X and a binary outcome Y. It induces the observational joint,
//!   the experimental marginals, and the true latent-rate brackets, so every
//!   estimator in this crate can be checked against a known data source.
//! * [`CanonicalModel`] — the same graph, but each confounder level carries
//!   an explicit distribution over the four response types. Exact response
//!   probabilities (benefit, harm, immunity, doom) are then direct sums,
//!   giving ground truth for the partial-identification bounds.
//! * [`MediationMechanism`] — a front-door graph U→X, X→Z, (Z,U)→Y with the
//!   outcome's reaction to the mediator specified per confounder level. It
//!   induces a [`MediationModel`] plus exact mediated response probabilities.
//!
//! Deterministic samplers ([`sample_canonical`],
//! [`sample_mediation_mechanism`]) draw random instances from a fixed seed
//! using ChaCha8 and exponential-normalization simplex sampling, so test
//! corpora are reproducible across platforms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::mediation::MediationModel;
use crate::prob::{
    ExperimentalMarginals, ObservationalJoint, ResponseTarget, DISTRIBUTION_TOLERANCE,
};
use crate::sensitivity::SensitivityParams;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("a model needs at least one confounder level")]
    NoLevels,
    #[error("{name} has {got} entries, expected one per confounder level ({levels})")]
    LengthMismatch {
        name: &'static str,
        got: usize,
        levels: usize,
    },
    #[error("{name} = {value} is not a probability (expected a finite value in [0, 1])")]
    OutOfRange { name: String, value: f64 },
    #[error("confounder weights sum to {sum}, too far from 1 to renormalize")]
    BadWeights { sum: f64 },
    #[error("response-type weights sum to {sum}, too far from 1 to renormalize")]
    BadResponseWeights { sum: f64 },
    #[error("the model gives event {event} zero probability, so conditioning on it is undefined")]
    UndefinedConditional { event: &'static str },
}

fn unit(name: &str, value: f64) -> Result<f64, OracleError> {
    if value.is_finite() && (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(OracleError::OutOfRange {
            name: name.to_string(),
            value,
        })
    }
}

/// Accepts a weight vector whose sum is within [`DISTRIBUTION_TOLERANCE`] of
/// 1 and divides it through by the sum (a bitwise no-op when the sum is
/// exactly 1).
fn normalized(name: &str, weights: &[f64]) -> Result<Vec<f64>, OracleError> {
    for (i, w) in weights.iter().enumerate() {
        unit(&format!("{name}[{i}]"), *w)?;
    }
    let sum: f64 = weights.iter().sum();
    if (sum - 1.0).abs() > DISTRIBUTION_TOLERANCE {
        return Err(OracleError::BadWeights { sum });
    }
    Ok(weights.iter().map(|w| w / sum).collect())
}

/// Squashes accumulated rounding dust on a quantity that is a probability by
/// construction.
fn clamp_unit(value: f64) -> f64 {
    value.clamp(0.0, 1.0)
}

/// A latent-confounder model: U with finitely many levels drives a binary
/// exposure and a binary outcome.
///
/// Per level u the model stores p(x | u) and the two outcome rates
/// p(y | x, u) and p(y | x', u). The level weights are renormalized on
/// construction when their sum is within [`DISTRIBUTION_TOLERANCE`] of 1.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfoundedModel {
    p_u: Vec<f64>,
    p_x_given_u: Vec<f64>,
    p_y_given_x_u: Vec<f64>,
    p_y_given_xp_u: Vec<f64>,
}

/// Everything a [`ConfoundedModel`] implies about observable and
/// interventional data.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfoundedEvaluation {
    /// The observational joint p(x, y) the model induces.
    pub joint: ObservationalJoint,
    /// The interventional marginals p(y_x), p(y_x').
    pub exp: ExperimentalMarginals,
    /// The true latent-rate brackets: m_x/M_x are the min/max of p(y | x, u)
    /// over u, and m_x'/M_x' likewise for the unexposed arm. These are the
    /// tightest brackets any analyst could truthfully assert.
    pub true_params: SensitivityParams,
}

impl ConfoundedModel {
    pub fn new(
        p_u: Vec<f64>,
        p_x_given_u: Vec<f64>,
        p_y_given_x_u: Vec<f64>,
        p_y_given_xp_u: Vec<f64>,
    ) -> Result<Self, OracleError> {
        let levels = p_u.len();
        if levels == 0 {
            return Err(OracleError::NoLevels);
        }
        for (name, v) in [
            ("p(x | u)", &p_x_given_u),
            ("p(y | x, u)", &p_y_given_x_u),
            ("p(y | x', u)", &p_y_given_xp_u),
        ] {
            if v.len() != levels {
                return Err(OracleError::LengthMismatch {
                    name: match name {
                        "p(x | u)" => "p(x | u)",
                        "p(y | x, u)" => "p(y | x, u)",
                        _ => "p(y | x', u)",
                    },
                    got: v.len(),
                    levels,
                });
            }
            for (i, value) in v.iter().enumerate() {
                unit(&format!("{name}[{i}]"), *value)?;
            }
        }
        let p_u = normalized("p(u)", &p_u)?;
        Ok(Self {
            p_u,
            p_x_given_u,
            p_y_given_x_u,
            p_y_given_xp_u,
        })
    }

    pub fn levels(&self) -> usize {
        self.p_u.len()
    }

    pub fn p_u(&self) -> &[f64] {
        &self.p_u
    }

    pub fn p_x_given_u(&self) -> &[f64] {
        &self.p_x_given_u
    }

    pub fn p_y_given_x_u(&self) -> &[f64] {
        &self.p_y_given_x_u
    }

    pub fn p_y_given_xp_u(&self) -> &[f64] {
        &self.p_y_given_xp_u
    }

    /// Computes the observational joint, the experimental marginals, and the
    /// true latent-rate brackets in closed form.
    pub fn evaluate(&self) -> ConfoundedEvaluation {
        let mut p_xy = 0.0;
        let mut p_xyp = 0.0;
        let mut p_xpy = 0.0;
        let mut p_xpyp = 0.0;
        let mut p_y_do_x = 0.0;
        let mut p_y_do_xp = 0.0;
        for i in 0..self.levels() {
            let pu = self.p_u[i];
            let px = self.p_x_given_u[i];
            let yx = self.p_y_given_x_u[i];
            let yxp = self.p_y_given_xp_u[i];
            p_xy += pu * px * yx;
            p_xyp += pu * px * (1.0 - yx);
            p_xpy += pu * (1.0 - px) * yxp;
            p_xpyp += pu * (1.0 - px) * (1.0 - yxp);
            p_y_do_x += pu * yx;
            p_y_do_xp += pu * yxp;
        }
        let joint = ObservationalJoint::new(p_xy, p_xyp, p_xpy, p_xpyp)
            .expect("a latent-confounder model always induces a joint distribution");
        let exp = ExperimentalMarginals::new(clamp_unit(p_y_do_x), clamp_unit(p_y_do_xp))
            .expect("interventional marginals of a model are probabilities");

        let fold = |v: &[f64], pick: fn(f64, f64) -> f64| v.iter().copied().reduce(pick).unwrap();
        let true_params = SensitivityParams::new(
            fold(&self.p_y_given_x_u, f64::min),
            fold(&self.p_y_given_x_u, f64::max),
            fold(&self.p_y_given_xp_u, f64::min),
            fold(&self.p_y_given_xp_u, f64::max),
        )
        .expect("per-level outcome rates give ordered brackets");

        ConfoundedEvaluation {
            joint,
            exp,
            true_params,
        }
    }
}

/// A distribution over the four response types of a binary outcome to a
/// binary cause: always responds (`immune`), never responds (`doomed`),
/// responds iff the cause is present (`benefit`), responds iff the cause is
/// absent (`harm`).
///
/// Weights are renormalized on construction when their sum is within
/// [`DISTRIBUTION_TOLERANCE`] of 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResponseDist {
    immune: f64,
    doomed: f64,
    benefit: f64,
    harm: f64,
}

impl ResponseDist {
    pub fn new(immune: f64, doomed: f64, benefit: f64, harm: f64) -> Result<Self, OracleError> {
        for (name, v) in [
            ("immune", immune),
            ("doomed", doomed),
            ("benefit", benefit),
            ("harm", harm),
        ] {
            if !v.is_finite() || v < 0.0 {
                return Err(OracleError::OutOfRange {
                    name: name.to_string(),
                    value: v,
                });
            }
        }
        let sum = immune + doomed + benefit + harm;
        if (sum - 1.0).abs() > DISTRIBUTION_TOLERANCE {
            return Err(OracleError::BadResponseWeights { sum });
        }
        Ok(Self {
            immune: immune / sum,
            doomed: doomed / sum,
            benefit: benefit / sum,
            harm: harm / sum,
        })
    }

    pub fn immune(&self) -> f64 {
        self.immune
    }

    pub fn doomed(&self) -> f64 {
        self.doomed
    }

    pub fn benefit(&self) -> f64 {
        self.benefit
    }

    pub fn harm(&self) -> f64 {
        self.harm
    }
}

/// Exact population-level response probabilities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResponseProbs {
    pub benefit: f64,
    pub harm: f64,
    pub immunity: f64,
    pub doom: f64,
}

impl ResponseProbs {
    pub fn of(&self, target: ResponseTarget) -> f64 {
        match target {
            ResponseTarget::Benefit => self.benefit,
            ResponseTarget::Harm => self.harm,
            ResponseTarget::Immunity => self.immunity,
            ResponseTarget::Doom => self.doom,
        }
    }
}

/// A latent-confounder model in canonical form: each confounder level
/// carries a full distribution over the outcome's four response types, so
/// population response probabilities are exact sums rather than estimands.
#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalModel {
    p_u: Vec<f64>,
    p_x_given_u: Vec<f64>,
    r_given_u: Vec<ResponseDist>,
}

/// A [`CanonicalModel`]'s induced data plus its exact response probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalEvaluation {
    pub joint: ObservationalJoint,
    pub exp: ExperimentalMarginals,
    /// True probabilities of benefit, harm, immunity, and doom.
    pub exact: ResponseProbs,
    pub true_params: SensitivityParams,
    /// The equivalent outcome-rate model; `joint` and `exp` come from
    /// evaluating it, so the two views agree bit for bit.
    pub induced: ConfoundedModel,
}

impl CanonicalModel {
    pub fn new(
        p_u: Vec<f64>,
        p_x_given_u: Vec<f64>,
        r_given_u: Vec<ResponseDist>,
    ) -> Result<Self, OracleError> {
        let levels = p_u.len();
        if levels == 0 {
            return Err(OracleError::NoLevels);
        }
        if p_x_given_u.len() != levels {
            return Err(OracleError::LengthMismatch {
                name: "p(x | u)",
                got: p_x_given_u.len(),
                levels,
            });
        }
        if r_given_u.len() != levels {
            return Err(OracleError::LengthMismatch {
                name: "response distributions",
                got: r_given_u.len(),
                levels,
            });
        }
        for (i, value) in p_x_given_u.iter().enumerate() {
            unit(&format!("p(x | u)[{i}]"), *value)?;
        }
        let p_u = normalized("p(u)", &p_u)?;
        Ok(Self {
            p_u,
            p_x_given_u,
            r_given_u,
        })
    }

    pub fn levels(&self) -> usize {
        self.p_u.len()
    }

    pub fn p_u(&self) -> &[f64] {
        &self.p_u
    }

    pub fn p_x_given_u(&self) -> &[f64] {
        &self.p_x_given_u
    }

    pub fn response_dists(&self) -> &[ResponseDist] {
        &self.r_given_u
    }

    /// The equivalent outcome-rate model: within a level, p(y | x, u) is the
    /// mass that responds when exposed (immune + benefit) and p(y | x', u)
    /// the mass that responds when unexposed (immune + harm).
    pub fn induced_confounded(&self) -> ConfoundedModel {
        let p_y_given_x_u: Vec<f64> = self
            .r_given_u
            .iter()
            .map(|r| clamp_unit(r.immune + r.benefit))
            .collect();
        let p_y_given_xp_u: Vec<f64> = self
            .r_given_u
            .iter()
            .map(|r| clamp_unit(r.immune + r.harm))
            .collect();
        ConfoundedModel::new(
            self.p_u.clone(),
            self.p_x_given_u.clone(),
            p_y_given_x_u,
            p_y_given_xp_u,
        )
        .expect("a canonical model always induces a valid outcome-rate model")
    }

    /// Exact response probabilities: population mixtures of the per-level
    /// response weights.
    pub fn exact_response_probs(&self) -> ResponseProbs {
        let mut probs = ResponseProbs {
            benefit: 0.0,
            harm: 0.0,
            immunity: 0.0,
            doom: 0.0,
        };
        for (pu, r) in self.p_u.iter().zip(&self.r_given_u) {
            probs.benefit += pu * r.benefit;
            probs.harm += pu * r.harm;
            probs.immunity += pu * r.immune;
            probs.doom += pu * r.doomed;
        }
        probs
    }

    /// Induced data and exact response probabilities. The joint and the
    /// experimental marginals are produced by evaluating
    /// [`Self::induced_confounded`], so the two routes agree bit for bit.
    pub fn evaluate(&self) -> CanonicalEvaluation {
        let induced = self.induced_confounded();
        let ConfoundedEvaluation {
            joint,
            exp,
            true_params,
        } = induced.evaluate();
        CanonicalEvaluation {
            joint,
            exp,
            exact: self.exact_response_probs(),
            true_params,
            induced,
        }
    }
}

/// Draws a point from the probability simplex by normalizing independent
/// exponential variates (E = -ln(1 - U) with U uniform on [0, 1)).
fn sample_simplex<const N: usize>(rng: &mut ChaCha8Rng) -> [f64; N] {
    let mut draws = [0.0; N];
    let mut sum = 0.0;
    for d in &mut draws {
        *d = -(1.0 - rng.random::<f64>()).ln();
        sum += *d;
    }
    if sum == 0.0 {
        draws.fill(1.0 / N as f64);
    } else {
        for d in &mut draws {
            *d /= sum;
        }
    }
    draws
}

fn sample_simplex_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let mut draws = vec![0.0; n];
    let mut sum = 0.0;
    for d in &mut draws {
        *d = -(1.0 - rng.random::<f64>()).ln();
        sum += *d;
    }
    if sum == 0.0 {
        draws.fill(1.0 / n as f64);
    } else {
        for d in &mut draws {
            *d /= sum;
        }
    }
    draws
}

/// Samples a random canonical model with `levels` confounder levels,
/// deterministically from `seed` (ChaCha8 keyed by the seed; level weights
/// first, then per level an exposure rate and a response-type simplex draw).
///
/// # Panics
///
/// Panics when `levels` is zero.
pub fn sample_canonical(levels: usize, seed: u64) -> CanonicalModel {
    assert!(levels >= 1, "a sampled model needs at least one level");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p_u = sample_simplex_vec(&mut rng, levels);
    let mut p_x_given_u = Vec::with_capacity(levels);
    let mut r_given_u = Vec::with_capacity(levels);
    for _ in 0..levels {
        p_x_given_u.push(rng.random::<f64>());
        let [immune, doomed, benefit, harm] = sample_simplex::<4>(&mut rng);
        r_given_u
            .push(ResponseDist::new(immune, doomed, benefit, harm).expect("simplex draw is valid"));
    }
    CanonicalModel::new(p_u, p_x_given_u, r_given_u).expect("sampled model is valid")
}

/// A fully specified front-door mechanism: U→X, X→Z, (Z, U)→Y, with U latent.
///
/// The mediator is binary with arm-specific rates p(z | x) and p(z | x');
/// because Z is a child of X alone, U and Z are independent given X. The
/// outcome's behaviour is a per-level response-type distribution *with
/// respect to the mediator*: at level u the outcome is immune, doomed,
/// benefiting, or harmed by Z.
///
/// Counterfactual coupling of the mediator: the two potential mediator
/// values (Z under x, Z under x') are coupled comonotonically — the popular
/// shared-threshold scheme where both arms compare one uniform draw against
/// their own rate. This makes every response probability of Y with respect
/// to X exact and computable; it is one admissible coupling (the induced
/// [`MediationModel`] is coupling-agnostic, but exact response probabilities
/// need one).
#[derive(Debug, Clone, PartialEq)]
pub struct MediationMechanism {
    p_u: Vec<f64>,
    p_x_given_u: Vec<f64>,
    p_z_given_x: f64,
    p_z_given_xp: f64,
    r_y_given_u: Vec<ResponseDist>,
}

/// A [`MediationMechanism`]'s induced observable model plus the exact
/// response probabilities of the outcome with respect to the exposure.
#[derive(Debug, Clone, PartialEq)]
pub struct MechanismEvaluation {
    /// The observable front-door model (exposure rate, mediator rates,
    /// outcome conditionals) the mechanism induces.
    pub model: MediationModel,
    /// Exact mediated response probabilities of Y with respect to X under
    /// the comonotone mediator coupling.
    pub exact_q: ResponseProbs,
}

impl MediationMechanism {
    pub fn new(
        p_u: Vec<f64>,
        p_x_given_u: Vec<f64>,
        p_z_given_x: f64,
        p_z_given_xp: f64,
        r_y_given_u: Vec<ResponseDist>,
    ) -> Result<Self, OracleError> {
        let levels = p_u.len();
        if levels == 0 {
            return Err(OracleError::NoLevels);
        }
        if p_x_given_u.len() != levels {
            return Err(OracleError::LengthMismatch {
                name: "p(x | u)",
                got: p_x_given_u.len(),
                levels,
            });
        }
        if r_y_given_u.len() != levels {
            return Err(OracleError::LengthMismatch {
                name: "response distributions",
                got: r_y_given_u.len(),
                levels,
            });
        }
        for (i, value) in p_x_given_u.iter().enumerate() {
            unit(&format!("p(x | u)[{i}]"), *value)?;
        }
        unit("p(z | x)", p_z_given_x)?;
        unit("p(z | x')", p_z_given_xp)?;
        let p_u = normalized("p(u)", &p_u)?;
        Ok(Self {
            p_u,
            p_x_given_u,
            p_z_given_x,
            p_z_given_xp,
            r_y_given_u,
        })
    }

    pub fn levels(&self) -> usize {
        self.p_u.len()
    }

    pub fn p_u(&self) -> &[f64] {
        &self.p_u
    }

    pub fn p_x_given_u(&self) -> &[f64] {
        &self.p_x_given_u
    }

    pub fn p_z_given_x(&self) -> f64 {
        self.p_z_given_x
    }

    pub fn p_z_given_xp(&self) -> f64 {
        self.p_z_given_xp
    }

    pub fn response_dists(&self) -> &[ResponseDist] {
        &self.r_y_given_u
    }

    /// Computes the observable model and the exact mediated response
    /// probabilities.
    ///
    /// Fails with [`OracleError::UndefinedConditional`] when an exposure arm
    /// or an (exposure, mediator) cell has probability zero, since the
    /// induced model's conditionals would then not exist.
    pub fn evaluate(&self) -> Result<MechanismEvaluation, OracleError> {
        let p_x: f64 = self
            .p_u
            .iter()
            .zip(&self.p_x_given_u)
            .map(|(pu, px)| pu * px)
            .sum();
        let p_xp = 1.0 - p_x;
        if p_x <= 0.0 {
            return Err(OracleError::UndefinedConditional { event: "x" });
        }
        if p_xp <= 0.0 {
            return Err(OracleError::UndefinedConditional { event: "x'" });
        }
        for (event, mass) in [
            ("(x, z)", p_x * self.p_z_given_x),
            ("(x, z')", p_x * (1.0 - self.p_z_given_x)),
            ("(x', z)", p_xp * self.p_z_given_xp),
            ("(x', z')", p_xp * (1.0 - self.p_z_given_xp)),
        ] {
            if mass <= 0.0 {
                return Err(OracleError::UndefinedConditional { event });
            }
        }

        // Outcome conditionals p(y | x, z) = Σ_u p(u | x) p(y | z, u): U and
        // Z are independent given X, and Bayes gives p(u | x).
        let mut y_xz = 0.0;
        let mut y_xzp = 0.0;
        let mut y_xpz = 0.0;
        let mut y_xpzp = 0.0;
        for i in 0..self.levels() {
            let r = &self.r_y_given_u[i];
            let y_z = r.immune + r.benefit;
            let y_zp = r.immune + r.harm;
            let pu_x = self.p_u[i] * self.p_x_given_u[i] / p_x;
            let pu_xp = self.p_u[i] * (1.0 - self.p_x_given_u[i]) / p_xp;
            y_xz += pu_x * y_z;
            y_xzp += pu_x * y_zp;
            y_xpz += pu_xp * y_z;
            y_xpzp += pu_xp * y_zp;
        }
        let model = MediationModel::new(
            clamp_unit(p_x),
            self.p_z_given_x,
            self.p_z_given_xp,
            clamp_unit(y_xz),
            clamp_unit(y_xzp),
            clamp_unit(y_xpz),
            clamp_unit(y_xpzp),
        )
        .expect("a mechanism induces valid front-door conditionals");

        // Comonotone coupling of the potential mediator values: both arms
        // threshold one shared uniform draw, so the four joint cells are
        // min/overshoot expressions of the two rates.
        let both_z = self.p_z_given_x.min(self.p_z_given_xp);
        let both_zp = (1.0 - self.p_z_given_x).min(1.0 - self.p_z_given_xp);
        let z_then_zp = (self.p_z_given_x - self.p_z_given_xp).max(0.0);
        let zp_then_z = (self.p_z_given_xp - self.p_z_given_x).max(0.0);

        let mut exact_q = ResponseProbs {
            benefit: 0.0,
            harm: 0.0,
            immunity: 0.0,
            doom: 0.0,
        };
        for (pu, r) in self.p_u.iter().zip(&self.r_y_given_u) {
            exact_q.immunity += pu * (r.immune + r.benefit * both_z + r.harm * both_zp);
            exact_q.benefit += pu * (r.benefit * z_then_zp + r.harm * zp_then_z);
            exact_q.harm += pu * (r.benefit * zp_then_z + r.harm * z_then_zp);
            exact_q.doom += pu * (r.doomed + r.benefit * both_zp + r.harm * both_z);
        }

        Ok(MechanismEvaluation { model, exact_q })
    }
}

/// Samples a random front-door mechanism with `levels` confounder levels,
/// deterministically from `seed` (ChaCha8 keyed by the seed; level weights,
/// then both mediator rates, then per level an exposure rate and a
/// response-type simplex draw).
///
/// # Panics
///
/// Panics when `levels` is zero.
pub fn sample_mediation_mechanism(levels: usize, seed: u64) -> MediationMechanism {
    assert!(levels >= 1, "a sampled mechanism needs at least one level");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p_u = sample_simplex_vec(&mut rng, levels);
    let p_z_given_x = rng.random::<f64>();
    let p_z_given_xp = rng.random::<f64>();
    let mut p_x_given_u = Vec::with_capacity(levels);
    let mut r_y_given_u = Vec::with_capacity(levels);
    for _ in 0..levels {
        p_x_given_u.push(rng.random::<f64>());
        let [immune, doomed, benefit, harm] = sample_simplex::<4>(&mut rng);
        r_y_given_u
            .push(ResponseDist::new(immune, doomed, benefit, harm).expect("simplex draw is valid"));
    }
    MediationMechanism::new(p_u, p_x_given_u, p_z_given_x, p_z_given_xp, r_y_given_u)
        .expect("sampled mechanism is valid")
}
