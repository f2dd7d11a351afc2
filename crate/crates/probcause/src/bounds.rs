//! Sharp bounds on the four response-type probabilities from an observational
//! joint combined with experimental outcome marginals.
//!
//! Every bound is the intersection of a handful of linear expressions in the
//! inputs. The evaluators keep a label alongside each expression and report
//! which one attained the endpoint, so results can be explained rather than
//! just stated. Harm mirrors benefit under an exposure swap (x <-> x'), and
//! doom mirrors immunity under an outcome swap (y <-> y'); the formulas below
//! are written out explicitly per target, which lets the test suite check the
//! swap identities across independent code paths.

use thiserror::Error;

use crate::prob::{
    ExperimentalMarginals, Interval, ObservationalJoint, ResponseTarget, COMPARISON_TOLERANCE,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BoundsError {
    /// The inputs admit no response-type probability at all: the computed
    /// lower bound exceeds the upper bound by more than
    /// [`COMPARISON_TOLERANCE`], so no causal model could have produced both
    /// the joint and the marginals.
    #[error(
        "incompatible data: lower bound {lower_label} = {lower:.6} exceeds \
         upper bound {upper_label} = {upper:.6}"
    )]
    IncompatibleData {
        lower_label: String,
        lower: f64,
        upper_label: String,
        upper: f64,
    },
    /// The ε-tightened bounds are empty: the requested immunity cap is too
    /// small for these inputs.
    #[error(
        "epsilon = {epsilon} is infeasible: lower bound {lower_label} = {lower:.6} \
         exceeds upper bound {upper_label} = {upper:.6}"
    )]
    InfeasibleEpsilon {
        epsilon: f64,
        lower_label: String,
        lower: f64,
        upper_label: String,
        upper: f64,
    },
    /// ε-tightening only applies to benefit and harm; immunity and doom have
    /// no ε-tightened form.
    #[error("epsilon-tightened bounds are defined for benefit and harm, not {target}")]
    UnsupportedEpsilonTarget { target: ResponseTarget },
    #[error("epsilon = {value} is outside [0, 1]")]
    EpsilonOutOfRange { value: f64 },
}

/// An immunity cap ε in `[0, 1]`, as used by the ε-bounded non-immunity
/// conditions and the ε-tightened benefit/harm bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpsilonBound(f64);

impl EpsilonBound {
    pub const ZERO: EpsilonBound = EpsilonBound(0.0);
    pub const ONE: EpsilonBound = EpsilonBound(1.0);

    pub fn new(value: f64) -> Result<Self, BoundsError> {
        if value.is_finite() && (0.0..=1.0).contains(&value) {
            Ok(Self(value))
        } else {
            Err(BoundsError::EpsilonOutOfRange { value })
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Which symbol the outcome marginals carry in argument labels: `p(y_x)` for
/// experimental marginals, `q(y_x)` for front-door (mediated) marginals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum MarginalSymbol {
    Experimental,
    FrontDoor,
}

impl MarginalSymbol {
    fn letter(self) -> &'static str {
        match self {
            MarginalSymbol::Experimental => "p",
            MarginalSymbol::FrontDoor => "q",
        }
    }
}

struct Labeled {
    label: String,
    value: f64,
}

fn labeled(label: impl Into<String>, value: f64) -> Labeled {
    Labeled {
        label: label.into(),
        value,
    }
}

/// First maximizing argument: ties keep the earliest entry.
fn first_max(args: Vec<Labeled>) -> Labeled {
    args.into_iter()
        .reduce(|best, next| if next.value > best.value { next } else { best })
        .expect("argument list is never empty")
}

/// First minimizing argument: ties keep the earliest entry.
fn first_min(args: Vec<Labeled>) -> Labeled {
    args.into_iter()
        .reduce(|best, next| if next.value < best.value { next } else { best })
        .expect("argument list is never empty")
}

/// Average treatment effect p(y_x) - p(y_x'), which also equals
/// p(benefit) - p(harm).
pub fn ate(exp: &ExperimentalMarginals) -> f64 {
    exp.p_y_do_x() - exp.p_y_do_xp()
}

/// Shared evaluator: `a`/`b` are the outcome marginals under the two arms
/// (experimental p(y_x)/p(y_x') or front-door q(y_x)/q(y_x')), `epsilon`
/// appends the ε-tightening argument for benefit/harm.
pub(crate) fn bounds_for(
    target: ResponseTarget,
    joint: &ObservationalJoint,
    a: f64,
    b: f64,
    sym: MarginalSymbol,
    epsilon: Option<f64>,
) -> Result<Interval, BoundsError> {
    let m = sym.letter();
    let p_xy = joint.p_xy();
    let p_xyp = joint.p_xyp();
    let p_xpy = joint.p_xpy();
    let p_xpyp = joint.p_xpyp();
    // Cell sums rather than 1-complements, so that the outcome-swapped joint
    // reproduces these quantities with the same operands.
    let p_y = joint.p_y();
    let p_yp = joint.p_yp();

    let (mut lower_args, upper_args) = match target {
        ResponseTarget::Benefit => (
            vec![
                labeled("0", 0.0),
                labeled(format!("{m}(y_x)-{m}(y_x')"), a - b),
                labeled(format!("p(y)-{m}(y_x')"), p_y - b),
                labeled(format!("{m}(y_x)-p(y)"), a - p_y),
            ],
            vec![
                labeled(format!("{m}(y_x)"), a),
                labeled(format!("{m}(y'_x')"), 1.0 - b),
                labeled("p(x,y)+p(x',y')", p_xy + p_xpyp),
                labeled(
                    format!("{m}(y_x)-{m}(y_x')+p(x,y')+p(x',y)"),
                    a - b + p_xyp + p_xpy,
                ),
            ],
        ),
        ResponseTarget::Harm => (
            vec![
                labeled("0", 0.0),
                labeled(format!("{m}(y_x')-{m}(y_x)"), b - a),
                labeled(format!("p(y)-{m}(y_x)"), p_y - a),
                labeled(format!("{m}(y_x')-p(y)"), b - p_y),
            ],
            vec![
                labeled(format!("{m}(y_x')"), b),
                labeled(format!("{m}(y'_x)"), 1.0 - a),
                labeled("p(x',y)+p(x,y')", p_xpy + p_xyp),
                labeled(
                    format!("{m}(y_x')-{m}(y_x)+p(x',y')+p(x,y)"),
                    b - a + p_xpyp + p_xy,
                ),
            ],
        ),
        ResponseTarget::Immunity => (
            vec![
                labeled("0", 0.0),
                labeled(format!("{m}(y_x)-{m}(y'_x')"), a - (1.0 - b)),
                labeled(format!("{m}(y_x)-p(x,y)-p(x',y')"), a - p_xy - p_xpyp),
                labeled(format!("{m}(y_x')-p(x,y')-p(x',y)"), b - p_xyp - p_xpy),
            ],
            vec![
                labeled(format!("{m}(y_x)"), a),
                labeled(format!("{m}(y_x')"), b),
                labeled(format!("{m}(y_x)-p(y)+{m}(y_x')"), a - p_y + b),
                labeled("p(y)", p_y),
            ],
        ),
        ResponseTarget::Doom => (
            vec![
                labeled("0", 0.0),
                labeled(format!("{m}(y'_x)-{m}(y_x')"), (1.0 - a) - b),
                labeled(
                    format!("{m}(y'_x)-p(x,y')-p(x',y)"),
                    (1.0 - a) - p_xyp - p_xpy,
                ),
                labeled(
                    format!("{m}(y'_x')-p(x,y)-p(x',y')"),
                    (1.0 - b) - p_xy - p_xpyp,
                ),
            ],
            vec![
                labeled(format!("{m}(y'_x)"), 1.0 - a),
                labeled(format!("{m}(y'_x')"), 1.0 - b),
                labeled(
                    format!("{m}(y'_x)-p(y')+{m}(y'_x')"),
                    (1.0 - a) - p_yp + (1.0 - b),
                ),
                labeled("p(y')", p_yp),
            ],
        ),
    };

    if let Some(eps) = epsilon {
        // The ε-tightening argument is listed last, after the four base
        // arguments, so tie-breaking still prefers the base expressions.
        let arg = match target {
            ResponseTarget::Benefit => labeled(format!("{m}(y_x)-eps"), a - eps),
            ResponseTarget::Harm => labeled(format!("{m}(y_x')-eps"), b - eps),
            ResponseTarget::Immunity | ResponseTarget::Doom => {
                return Err(BoundsError::UnsupportedEpsilonTarget { target })
            }
        };
        lower_args.push(arg);
    }

    let lo = first_max(lower_args);
    let up = first_min(upper_args);

    if lo.value > up.value + COMPARISON_TOLERANCE {
        return Err(match epsilon {
            Some(eps) => BoundsError::InfeasibleEpsilon {
                epsilon: eps,
                lower_label: lo.label,
                lower: lo.value,
                upper_label: up.label,
                upper: up.value,
            },
            None => BoundsError::IncompatibleData {
                lower_label: lo.label,
                lower: lo.value,
                upper_label: up.label,
                upper: up.value,
            },
        });
    }

    Ok(Interval {
        lower: lo.value,
        upper: up.value,
        active_lower: lo.label,
        active_upper: up.label,
    })
}

/// Bounds on p(target) from the joint and the experimental marginals.
///
/// Returns [`BoundsError::IncompatibleData`] when the interval is empty beyond
/// tolerance, i.e. when no causal model is consistent with both inputs.
pub fn response_bounds(
    target: ResponseTarget,
    joint: &ObservationalJoint,
    exp: &ExperimentalMarginals,
) -> Result<Interval, BoundsError> {
    bounds_for(
        target,
        joint,
        exp.p_y_do_x(),
        exp.p_y_do_xp(),
        MarginalSymbol::Experimental,
        None,
    )
}

/// Benefit/harm bounds tightened by an immunity cap: when background knowledge
/// caps p(immunity) at ε, the lower bound additionally includes p(y_x) - ε
/// (respectively p(y_x') - ε for harm).
///
/// At ε = 1 the extra argument is vacuous and the result equals
/// [`response_bounds`]. At ε = 0 the interval collapses to a point whenever it
/// is feasible at all.
pub fn epsilon_response_bounds(
    target: ResponseTarget,
    joint: &ObservationalJoint,
    exp: &ExperimentalMarginals,
    epsilon: EpsilonBound,
) -> Result<Interval, BoundsError> {
    bounds_for(
        target,
        joint,
        exp.p_y_do_x(),
        exp.p_y_do_xp(),
        MarginalSymbol::Experimental,
        Some(epsilon.value()),
    )
}
