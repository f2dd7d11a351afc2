//! Decision conditions for ruling immunity in or out without computing full
//! bounds.
//!
//! Two families of clauses are evaluated against the same inputs as the bound
//! calculators, relaxed by an immunity cap ε:
//!
//! * sufficient clauses - if any holds, p(immunity) ≤ ε is guaranteed;
//! * necessary clauses - if any fails, p(immunity) ≤ ε is impossible, and the
//!   failing clause is the witness.
//!
//! At ε = 0 the clauses reduce to the exact zero-immunity conditions.

use crate::bounds::{EpsilonBound, MarginalSymbol};
use crate::prob::{ExperimentalMarginals, ObservationalJoint, COMPARISON_TOLERANCE};

/// Whether a clause belongs to the sufficient or the necessary family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClauseRole {
    Sufficient,
    Necessary,
}

impl ClauseRole {
    pub fn as_str(&self) -> &'static str {
        match self {
            ClauseRole::Sufficient => "sufficient",
            ClauseRole::Necessary => "necessary",
        }
    }
}

/// One evaluated clause: `left <= right` held or not, within
/// [`COMPARISON_TOLERANCE`].
#[derive(Debug, Clone, PartialEq)]
pub struct Clause {
    pub id: String,
    pub role: ClauseRole,
    pub left: f64,
    pub right: f64,
    pub satisfied: bool,
}

/// Outcome of evaluating all non-immunity clauses at a given ε.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionReport {
    /// Some sufficient clause holds: p(immunity) ≤ ε is guaranteed.
    pub sufficient_holds: bool,
    /// Every necessary clause holds: p(immunity) ≤ ε is still possible.
    pub necessary_holds: bool,
    /// Per-clause breakdown, sufficient clauses first, in documented order.
    pub clauses: Vec<Clause>,
}

impl ConditionReport {
    /// The first failing necessary clause, if any: the witness that
    /// p(immunity) ≤ ε is impossible.
    pub fn necessary_witness(&self) -> Option<&Clause> {
        self.clauses
            .iter()
            .find(|c| c.role == ClauseRole::Necessary && !c.satisfied)
    }
}

fn clause(id: String, role: ClauseRole, left: f64, right: f64) -> Clause {
    Clause {
        id,
        role,
        left,
        right,
        satisfied: left <= right + COMPARISON_TOLERANCE,
    }
}

/// Shared evaluator over either experimental (`p`) or front-door (`q`)
/// marginals `a`/`b`.
pub(crate) fn conditions_for(
    joint: &ObservationalJoint,
    a: f64,
    b: f64,
    sym: MarginalSymbol,
    epsilon: EpsilonBound,
) -> ConditionReport {
    let m = match sym {
        MarginalSymbol::Experimental => "p",
        MarginalSymbol::FrontDoor => "q",
    };
    let eps = epsilon.value();
    let p_y = joint.p_y();
    let p_xy = joint.p_xy();
    let p_xyp = joint.p_xyp();
    let p_xpy = joint.p_xpy();
    let p_xpyp = joint.p_xpyp();

    let clauses = vec![
        clause(format!("{m}(y_x)<=eps"), ClauseRole::Sufficient, a, eps),
        clause(format!("{m}(y_x')<=eps"), ClauseRole::Sufficient, b, eps),
        clause(
            format!("{m}(y_x)+{m}(y_x')<=p(y)+eps"),
            ClauseRole::Sufficient,
            a + b,
            p_y + eps,
        ),
        clause("p(y)<=eps".to_string(), ClauseRole::Sufficient, p_y, eps),
        clause(
            format!("{m}(y_x)+{m}(y_x')<=1+eps"),
            ClauseRole::Necessary,
            a + b,
            1.0 + eps,
        ),
        clause(
            format!("{m}(y_x)<=p(x,y)+p(x',y')+eps"),
            ClauseRole::Necessary,
            a,
            p_xy + p_xpyp + eps,
        ),
        clause(
            format!("{m}(y_x')<=p(x,y')+p(x',y)+eps"),
            ClauseRole::Necessary,
            b,
            p_xyp + p_xpy + eps,
        ),
    ];

    ConditionReport {
        sufficient_holds: clauses
            .iter()
            .any(|c| c.role == ClauseRole::Sufficient && c.satisfied),
        necessary_holds: clauses
            .iter()
            .all(|c| c.role != ClauseRole::Necessary || c.satisfied),
        clauses,
    }
}

/// Evaluates the ε-bounded non-immunity conditions against the joint and the
/// experimental marginals.
pub fn immunity_conditions(
    joint: &ObservationalJoint,
    exp: &ExperimentalMarginals,
    epsilon: EpsilonBound,
) -> ConditionReport {
    conditions_for(
        joint,
        exp.p_y_do_x(),
        exp.p_y_do_xp(),
        MarginalSymbol::Experimental,
        epsilon,
    )
}

pub(crate) fn feasible_min_for(joint: &ObservationalJoint, a: f64, b: f64) -> f64 {
    0.0_f64
        .max(a + b - 1.0)
        .max(a - joint.p_xy() - joint.p_xpyp())
        .max(b - joint.p_xyp() - joint.p_xpy())
}

/// The smallest ε for which the necessary non-immunity clauses can all hold:
/// max{0, p(y_x)+p(y_x')-1, p(y_x)-p(x,y)-p(x',y'), p(y_x')-p(x,y')-p(x',y)}.
///
/// This threshold coincides with the lower bound of the immunity interval:
/// asking "how small can the immunity cap be" and "how much immunity do the
/// data force" are the same question.
pub fn epsilon_feasible_min(joint: &ObservationalJoint, exp: &ExperimentalMarginals) -> f64 {
    feasible_min_for(joint, exp.p_y_do_x(), exp.p_y_do_xp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::response_bounds;
    use crate::prob::ResponseTarget;

    const TOL: f64 = 1e-12;

    fn trial_inputs() -> (ObservationalJoint, ExperimentalMarginals) {
        (
            ObservationalJoint::new(0.495, 0.195, 0.199, 0.111).unwrap(),
            ExperimentalMarginals::new(0.76, 0.31).unwrap(),
        )
    }

    fn vaccine_inputs() -> (ObservationalJoint, ExperimentalMarginals) {
        (
            ObservationalJoint::new(0.084, 0.196, 0.252, 0.468).unwrap(),
            ExperimentalMarginals::new(0.48, 0.36).unwrap(),
        )
    }

    #[test]
    fn trial_necessary_fails_at_zero_holds_at_quarter() {
        let (joint, exp) = trial_inputs();

        let at_zero = immunity_conditions(&joint, &exp, EpsilonBound::ZERO);
        assert!(!at_zero.necessary_holds);
        let witness = at_zero.necessary_witness().unwrap();
        assert_eq!(witness.id, "p(y_x)+p(y_x')<=1+eps");
        assert!((witness.left - 1.07).abs() < TOL);
        assert!((witness.right - 1.0).abs() < TOL);

        let at_quarter = immunity_conditions(&joint, &exp, EpsilonBound::new(0.25).unwrap());
        assert!(at_quarter.necessary_holds);
        assert!(!at_quarter.sufficient_holds);
    }

    #[test]
    fn vaccine_conditions_at_zero() {
        let (joint, exp) = vaccine_inputs();
        let report = immunity_conditions(&joint, &exp, EpsilonBound::ZERO);
        // Zero immunity cannot be ruled out, but is not guaranteed either.
        assert!(report.necessary_holds);
        assert!(!report.sufficient_holds);
        assert_eq!(report.clauses.len(), 7);
        assert_eq!(
            report
                .clauses
                .iter()
                .filter(|c| c.role == ClauseRole::Sufficient)
                .count(),
            4
        );
    }

    #[test]
    fn sufficient_holds_when_an_arm_is_inert() {
        // No outcome ever occurs without exposure: immunity is impossible.
        let joint = ObservationalJoint::new(0.3, 0.2, 0.0, 0.5).unwrap();
        let exp = ExperimentalMarginals::new(0.6, 0.0).unwrap();
        let report = immunity_conditions(&joint, &exp, EpsilonBound::ZERO);
        assert!(report.sufficient_holds);
        assert!(report.necessary_holds);
        let inert = &report.clauses[1];
        assert_eq!(inert.id, "p(y_x')<=eps");
        assert!(inert.satisfied);
    }

    #[test]
    fn feasible_min_matches_hand_values() {
        let (joint, exp) = trial_inputs();
        assert!((epsilon_feasible_min(&joint, &exp) - 0.154).abs() < TOL);

        let (joint, exp) = vaccine_inputs();
        assert_eq!(epsilon_feasible_min(&joint, &exp), 0.0);

        // Degenerate extreme: certain outcome under both arms, uniform joint.
        let joint = ObservationalJoint::new(0.25, 0.25, 0.25, 0.25).unwrap();
        let exp = ExperimentalMarginals::new(1.0, 1.0).unwrap();
        assert!((epsilon_feasible_min(&joint, &exp) - 1.0).abs() < TOL);
    }

    #[test]
    fn feasible_min_is_the_immunity_lower_bound() {
        for (joint, exp) in [trial_inputs(), vaccine_inputs()] {
            let bounds = response_bounds(ResponseTarget::Immunity, &joint, &exp).unwrap();
            let min = epsilon_feasible_min(&joint, &exp);
            assert!((bounds.lower - min).abs() < TOL);
        }
    }

    #[test]
    fn epsilon_at_feasible_min_makes_necessary_hold() {
        let (joint, exp) = trial_inputs();
        let min = epsilon_feasible_min(&joint, &exp);
        let report = immunity_conditions(&joint, &exp, EpsilonBound::new(min).unwrap());
        assert!(report.necessary_holds);
    }
}
