//! Mediated (indirect) causal analysis for the graph X→Z→Y with a direct
//! X→Y edge, from observational quantities alone.
//!
//! The inputs are the exposure rate p(x), the binary mediator's arm rates
//! p(z|x) and p(z|x'), and the outcome conditionals p(y|ẋ,z). Because the
//! exposure is exogenous in this graph, p(y_x) = p(y|x) — no experiment is
//! needed. The mediated component of the effect is measured by treating the
//! direct edge as if it ran through a latent variable and re-reading the
//! graph with that edge reversed, which turns the exposure-outcome relation
//! into a classic front-door problem: the q-marginals
//!
//! q(y_x) = Σ_z p(z|x) Σ_ẋ p(y|ẋ,z) p(ẋ)
//!
//! play the role the experimental marginals play in the unmediated analysis,
//! and every bound and decision condition carries over with q in place of p.

use thiserror::Error;

use crate::bounds::{bounds_for, BoundsError, EpsilonBound, MarginalSymbol};
use crate::conditions::{conditions_for, feasible_min_for, ConditionReport};
use crate::prob::{check_unit, ExperimentalMarginals, Interval, ObservationalJoint, ProbError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MediationError {
    #[error(transparent)]
    Prob(#[from] ProbError),
}

/// The observable pieces of the mediation graph: exposure rate, mediator
/// rates per arm, and outcome rates per (exposure, mediator) cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MediationModel {
    p_x: f64,
    p_z_given_x: f64,
    p_z_given_xp: f64,
    p_y_given_xz: f64,
    p_y_given_xzp: f64,
    p_y_given_xpz: f64,
    p_y_given_xpzp: f64,
}

/// Front-door outcome marginals q(y_x), q(y_x'): the counterfactual
/// probabilities of the edge-reversed reading of the graph.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IndirectMarginals {
    pub q_y_do_x: f64,
    pub q_y_do_xp: f64,
}

/// The named indirect-effect measures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IndirectEffects {
    /// Natural indirect effect: Σ_z [p(z|x) − p(z|x')] p(y|x',z).
    pub nie: f64,
    /// Interventional indirect effect; coincides with `nie` on this graph
    /// and is computed as the same expression.
    pub iie: f64,
    /// Population intervention indirect effect:
    /// p(y) − Σ_ẋ p(ẋ) Σ_z p(z|x') p(y|ẋ,z).
    pub piie: f64,
    /// Front-door total effect q(y_x) − q(y_x').
    pub te_frontdoor: f64,
}

impl MediationModel {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        p_x: f64,
        p_z_given_x: f64,
        p_z_given_xp: f64,
        p_y_given_xz: f64,
        p_y_given_xzp: f64,
        p_y_given_xpz: f64,
        p_y_given_xpzp: f64,
    ) -> Result<Self, MediationError> {
        check_unit("p(x)", p_x)?;
        check_unit("p(z | x)", p_z_given_x)?;
        check_unit("p(z | x')", p_z_given_xp)?;
        check_unit("p(y | x, z)", p_y_given_xz)?;
        check_unit("p(y | x, z')", p_y_given_xzp)?;
        check_unit("p(y | x', z)", p_y_given_xpz)?;
        check_unit("p(y | x', z')", p_y_given_xpzp)?;
        Ok(Self {
            p_x,
            p_z_given_x,
            p_z_given_xp,
            p_y_given_xz,
            p_y_given_xzp,
            p_y_given_xpz,
            p_y_given_xpzp,
        })
    }

    pub fn p_x(&self) -> f64 {
        self.p_x
    }

    pub fn p_z_given_x(&self) -> f64 {
        self.p_z_given_x
    }

    pub fn p_z_given_xp(&self) -> f64 {
        self.p_z_given_xp
    }

    pub fn p_y_given_xz(&self) -> f64 {
        self.p_y_given_xz
    }

    pub fn p_y_given_xzp(&self) -> f64 {
        self.p_y_given_xzp
    }

    pub fn p_y_given_xpz(&self) -> f64 {
        self.p_y_given_xpz
    }

    pub fn p_y_given_xpzp(&self) -> f64 {
        self.p_y_given_xpzp
    }

    /// Outcome rate with the mediator marginalized out of one exposure arm.
    fn p_y_given_arm(&self, exposed: bool) -> f64 {
        if exposed {
            self.p_z_given_x * self.p_y_given_xz + (1.0 - self.p_z_given_x) * self.p_y_given_xzp
        } else {
            self.p_z_given_xp * self.p_y_given_xpz + (1.0 - self.p_z_given_xp) * self.p_y_given_xpzp
        }
    }

    /// The joint p(x, y) the model induces, with the mediator marginalized
    /// out.
    pub fn observational_joint(&self) -> ObservationalJoint {
        let p_y_x = self.p_y_given_arm(true);
        let p_y_xp = self.p_y_given_arm(false);
        let p_xp = 1.0 - self.p_x;
        ObservationalJoint::new(
            self.p_x * p_y_x,
            self.p_x * (1.0 - p_y_x),
            p_xp * p_y_xp,
            p_xp * (1.0 - p_y_xp),
        )
        .expect("a mediation model always induces a joint distribution")
    }

    /// Interventional marginals of the original graph, where the exposure is
    /// exogenous: p(y_x) = p(y|x) and p(y_x') = p(y|x').
    pub fn direct_marginals(&self) -> ExperimentalMarginals {
        ExperimentalMarginals::new(self.p_y_given_arm(true), self.p_y_given_arm(false))
            .expect("mediator-marginalized outcome rates are probabilities")
    }

    /// Front-door q-marginals: q(y_ẍ) = Σ_z p(z|ẍ) Σ_ẋ p(y|ẋ,z) p(ẋ).
    pub fn front_door_marginals(&self) -> IndirectMarginals {
        let p_xp = 1.0 - self.p_x;
        let w_z = self.p_y_given_xz * self.p_x + self.p_y_given_xpz * p_xp;
        let w_zp = self.p_y_given_xzp * self.p_x + self.p_y_given_xpzp * p_xp;
        IndirectMarginals {
            q_y_do_x: self.p_z_given_x * w_z + (1.0 - self.p_z_given_x) * w_zp,
            q_y_do_xp: self.p_z_given_xp * w_z + (1.0 - self.p_z_given_xp) * w_zp,
        }
    }

    /// The four named indirect-effect measures.
    pub fn indirect_effect_measures(&self) -> IndirectEffects {
        let p_xp = 1.0 - self.p_x;
        let nie = (self.p_z_given_x - self.p_z_given_xp) * self.p_y_given_xpz
            + ((1.0 - self.p_z_given_x) - (1.0 - self.p_z_given_xp)) * self.p_y_given_xpzp;

        let p_y = self.p_x * self.p_y_given_arm(true) + p_xp * self.p_y_given_arm(false);
        let frozen_mediator = self.p_x
            * (self.p_z_given_xp * self.p_y_given_xz
                + (1.0 - self.p_z_given_xp) * self.p_y_given_xzp)
            + p_xp
                * (self.p_z_given_xp * self.p_y_given_xpz
                    + (1.0 - self.p_z_given_xp) * self.p_y_given_xpzp);
        let piie = p_y - frozen_mediator;

        let q = self.front_door_marginals();
        IndirectEffects {
            nie,
            iie: nie,
            piie,
            te_frontdoor: q.q_y_do_x - q.q_y_do_xp,
        }
    }

    /// ε-bounded indirect-immunity conditions: the decision clauses with the
    /// q-marginals in place of the experimental ones.
    pub fn indirect_immunity_conditions(&self, epsilon: EpsilonBound) -> ConditionReport {
        let joint = self.observational_joint();
        let q = self.front_door_marginals();
        conditions_for(
            &joint,
            q.q_y_do_x,
            q.q_y_do_xp,
            MarginalSymbol::FrontDoor,
            epsilon,
        )
    }

    /// Smallest ε for which the necessary indirect-immunity clauses can all
    /// hold; also the forced amount of q-immunity.
    pub fn indirect_feasible_min(&self) -> f64 {
        let joint = self.observational_joint();
        let q = self.front_door_marginals();
        feasible_min_for(&joint, q.q_y_do_x, q.q_y_do_xp)
    }

    /// ε-tightened bounds on the mediated benefit or harm: the two-marginal
    /// bounds with the q-marginals in place of the experimental ones.
    ///
    /// Only benefit and harm admit the ε-tightening; immunity and doom are
    /// rejected, matching
    /// [`epsilon_response_bounds`](crate::bounds::epsilon_response_bounds).
    pub fn indirect_response_bounds(
        &self,
        target: crate::prob::ResponseTarget,
        epsilon: EpsilonBound,
    ) -> Result<Interval, BoundsError> {
        let joint = self.observational_joint();
        let q = self.front_door_marginals();
        bounds_for(
            target,
            &joint,
            q.q_y_do_x,
            q.q_y_do_xp,
            MarginalSymbol::FrontDoor,
            Some(epsilon.value()),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prob::ResponseTarget;

    const TOL: f64 = 1e-12;

    /// The two-drug mediation scenario: p(x)=0.6, mediator rates 0.75/0.4,
    /// outcome rates 0.8/0.4/0.3/0.2.
    fn drug_model() -> MediationModel {
        MediationModel::new(0.6, 0.75, 0.4, 0.8, 0.4, 0.3, 0.2).unwrap()
    }

    #[test]
    fn joint_marginalizes_the_mediator_out() {
        let joint = drug_model().observational_joint();
        assert!((joint.p_xy() - 0.42).abs() < TOL);
        assert!((joint.p_xyp() - 0.18).abs() < TOL);
        assert!((joint.p_xpy() - 0.096).abs() < TOL);
        assert!((joint.p_xpyp() - 0.304).abs() < TOL);

        // Consistency: the joint's conditionals reproduce the direct
        // marginals.
        let m = joint.marginals();
        let direct = drug_model().direct_marginals();
        assert!((m.p_y_given_x.unwrap() - direct.p_y_do_x()).abs() < TOL);
        assert!((m.p_y_given_xp.unwrap() - direct.p_y_do_xp()).abs() < TOL);
        assert!((direct.p_y_do_x() - 0.7).abs() < TOL);
        assert!((direct.p_y_do_xp() - 0.24).abs() < TOL);
    }

    #[test]
    fn certain_outcome_concentrates_the_joint_on_y() {
        let model = MediationModel::new(0.6, 0.75, 0.4, 1.0, 1.0, 1.0, 1.0).unwrap();
        let joint = model.observational_joint();
        assert!((joint.p_xy() - 0.6).abs() < TOL);
        assert_eq!(joint.p_xyp(), 0.0);
        assert!((joint.p_xpy() - 0.4).abs() < TOL);
        assert_eq!(joint.p_xpyp(), 0.0);
    }

    #[test]
    fn inert_exposure_equalizes_the_arms() {
        // Same mediator rates and same outcome rates in both arms.
        let model = MediationModel::new(0.3, 0.5, 0.5, 0.9, 0.1, 0.9, 0.1).unwrap();
        let direct = model.direct_marginals();
        assert!((direct.p_y_do_x() - direct.p_y_do_xp()).abs() < TOL);
    }

    #[test]
    fn front_door_marginals_match_hand_arithmetic() {
        let q = drug_model().front_door_marginals();
        assert!((q.q_y_do_x - 0.53).abs() < 1e-9);
        assert!((q.q_y_do_xp - 0.432).abs() < 1e-9);
    }

    #[test]
    fn equal_mediator_rates_give_equal_q_marginals() {
        let model = MediationModel::new(0.6, 0.5, 0.5, 0.8, 0.4, 0.3, 0.2).unwrap();
        let q = model.front_door_marginals();
        assert!((q.q_y_do_x - q.q_y_do_xp).abs() < TOL);
        let eff = model.indirect_effect_measures();
        assert!(eff.nie.abs() < TOL);
        assert!(eff.iie.abs() < TOL);
        assert!(eff.piie.abs() < TOL);
        assert!(eff.te_frontdoor.abs() < TOL);
    }

    #[test]
    fn mediator_ignored_by_outcome_pins_q_at_p_y() {
        let model = MediationModel::new(0.6, 0.75, 0.4, 0.8, 0.8, 0.2, 0.2).unwrap();
        let q = model.front_door_marginals();
        let p_y = model.observational_joint().p_y();
        assert!((q.q_y_do_x - p_y).abs() < TOL);
        assert!((q.q_y_do_xp - p_y).abs() < TOL);
    }

    #[test]
    fn effect_measures_match_hand_arithmetic() {
        let eff = drug_model().indirect_effect_measures();
        assert!((eff.nie - 0.035).abs() < 1e-9);
        assert_eq!(eff.nie, eff.iie);
        assert!((eff.piie - 0.084).abs() < 1e-9);
        assert!((eff.te_frontdoor - 0.098).abs() < 1e-9);
    }

    #[test]
    fn absent_direct_path_reduces_the_total_effect_to_the_arm_gap() {
        // p(y|x,z) = p(y|x',z) for both z: the direct edge carries nothing.
        let model = MediationModel::new(0.3, 0.9, 0.2, 0.7, 0.1, 0.7, 0.1).unwrap();
        let eff = model.indirect_effect_measures();
        let direct = model.direct_marginals();
        assert!((eff.te_frontdoor - (direct.p_y_do_x() - direct.p_y_do_xp())).abs() < 1e-9);
    }

    #[test]
    fn drug_conditions_fail_at_zero_and_pass_at_one_fifth() {
        let at_zero = drug_model().indirect_immunity_conditions(EpsilonBound::ZERO);
        assert!(!at_zero.sufficient_holds);
        assert!(!at_zero.necessary_holds);
        let witness = at_zero.necessary_witness().unwrap();
        assert_eq!(witness.id, "q(y_x')<=p(x,y')+p(x',y)+eps");
        assert!((witness.left - 0.432).abs() < 1e-9);
        assert!((witness.right - 0.276).abs() < 1e-9);

        let relaxed = drug_model().indirect_immunity_conditions(EpsilonBound::new(0.2).unwrap());
        assert!(relaxed.necessary_holds);
    }

    #[test]
    fn mediated_benefit_bounds_at_full_relaxation() {
        let iv = drug_model()
            .indirect_response_bounds(ResponseTarget::Benefit, EpsilonBound::ONE)
            .unwrap();
        assert!((iv.lower - 0.098).abs() < 1e-9);
        assert!((iv.upper - 0.374).abs() < 1e-9);
        assert_eq!(iv.active_lower, "q(y_x)-q(y_x')");
        assert_eq!(iv.active_upper, "q(y_x)-q(y_x')+p(x,y')+p(x',y)");
    }

    #[test]
    fn mediated_benefit_collapse_is_infeasible_for_the_drug_model() {
        // ε=0 would pin the mediated benefit at q(y_x) = 0.53, but the joint
        // caps it at 0.374.
        let result =
            drug_model().indirect_response_bounds(ResponseTarget::Benefit, EpsilonBound::ZERO);
        assert!(matches!(result, Err(BoundsError::InfeasibleEpsilon { .. })));
    }

    #[test]
    fn equal_mediator_rates_force_no_mediated_benefit() {
        let model = MediationModel::new(0.5, 0.3, 0.3, 0.9, 0.2, 0.6, 0.5).unwrap();
        let iv = model
            .indirect_response_bounds(ResponseTarget::Benefit, EpsilonBound::ONE)
            .unwrap();
        // The q-marginals are bitwise equal, so only summation-order dust can
        // separate the remaining lower arguments from zero.
        assert!(iv.lower.abs() < TOL);
    }

    #[test]
    fn feasible_min_matches_the_necessary_clause_slack() {
        let model = drug_model();
        let eps_min = model.indirect_feasible_min();
        // q(y_x') − p(x,y') − p(x',y) = 0.432 − 0.276 is the binding slack.
        assert!((eps_min - 0.156).abs() < 1e-9);
        let report = model.indirect_immunity_conditions(EpsilonBound::new(eps_min).unwrap());
        assert!(report.necessary_holds);
    }

    #[test]
    fn model_rejects_out_of_range_fields() {
        assert!(MediationModel::new(0.6, 0.75, 0.4, 0.8, 0.4, 0.3, 1.2).is_err());
        assert!(MediationModel::new(-0.1, 0.75, 0.4, 0.8, 0.4, 0.3, 0.2).is_err());
    }
}
