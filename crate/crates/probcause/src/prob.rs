//! Core probability containers shared by every analysis in the crate: the
//! observational joint over a binary exposure/outcome pair, experimental
//! (interventional) outcome marginals, and the interval/marginal records the
//! bound calculators produce.
//!
//! Naming convention, here and in the JSON schemas: a trailing underscore (in
//! JSON keys) or a trailing `p` (in Rust identifiers) primes the symbol before
//! it. `xy_` / `p_xyp` is p(x, y'); `x_y` / `p_xpy` is p(x', y).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Absolute tolerance for checking that a set of probabilities forms a
/// distribution. Cell sums inside the tolerance are renormalized; anything
/// further from 1 is rejected.
pub const DISTRIBUTION_TOLERANCE: f64 = 1e-9;

/// Absolute tolerance used when comparing derived quantities against each
/// other: bound crossings, condition clauses, parameter-region membership.
pub const COMPARISON_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProbError {
    #[error("{name} = {value} is not a probability (expected a finite value in [0, 1])")]
    OutOfRange { name: String, value: f64 },
    #[error("joint cell {name} = {value} is negative")]
    NegativeCell { name: String, value: f64 },
    #[error("joint cells sum to {sum}, more than {DISTRIBUTION_TOLERANCE} away from 1")]
    NotADistribution { sum: f64 },
}

/// Validates that `value` is a finite probability in `[0, 1]`.
pub(crate) fn check_unit(name: &str, value: f64) -> Result<f64, ProbError> {
    if value.is_finite() && (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(ProbError::OutOfRange {
            name: name.to_string(),
            value,
        })
    }
}

/// Wire form of [`ObservationalJoint`]: the four cells of p(X, Y) exactly as
/// they appear in input files, e.g. `{"xy": 0.5, "xy_": 0.2, "x_y": 0.2,
/// "x_y_": 0.1}`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JointCells {
    pub xy: f64,
    pub xy_: f64,
    pub x_y: f64,
    pub x_y_: f64,
}

/// Joint distribution p(X, Y) of a binary exposure X and outcome Y.
///
/// Construction validates that every cell is non-negative and that the cells
/// sum to 1 within [`DISTRIBUTION_TOLERANCE`]; in-tolerance sums are
/// renormalized. Cells that already sum to exactly 1 are stored bit-for-bit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "JointCells", into = "JointCells")]
pub struct ObservationalJoint {
    p_xy: f64,
    p_xyp: f64,
    p_xpy: f64,
    p_xpyp: f64,
}

impl ObservationalJoint {
    pub fn new(p_xy: f64, p_xyp: f64, p_xpy: f64, p_xpyp: f64) -> Result<Self, ProbError> {
        for (name, value) in [
            ("xy", p_xy),
            ("xy_", p_xyp),
            ("x_y", p_xpy),
            ("x_y_", p_xpyp),
        ] {
            if !value.is_finite() {
                return Err(ProbError::OutOfRange {
                    name: name.to_string(),
                    value,
                });
            }
            if value < 0.0 {
                return Err(ProbError::NegativeCell {
                    name: name.to_string(),
                    value,
                });
            }
        }
        let sum = p_xy + p_xyp + p_xpy + p_xpyp;
        if (sum - 1.0).abs() > DISTRIBUTION_TOLERANCE {
            return Err(ProbError::NotADistribution { sum });
        }
        // Dividing by a sum of exactly 1.0 is a bitwise no-op, so already
        // normalized cells round-trip unchanged.
        Ok(Self {
            p_xy: p_xy / sum,
            p_xyp: p_xyp / sum,
            p_xpy: p_xpy / sum,
            p_xpyp: p_xpyp / sum,
        })
    }

    /// p(x, y): exposed, outcome occurred.
    pub fn p_xy(&self) -> f64 {
        self.p_xy
    }

    /// p(x, y'): exposed, no outcome.
    pub fn p_xyp(&self) -> f64 {
        self.p_xyp
    }

    /// p(x', y): unexposed, outcome occurred.
    pub fn p_xpy(&self) -> f64 {
        self.p_xpy
    }

    /// p(x', y'): unexposed, no outcome.
    pub fn p_xpyp(&self) -> f64 {
        self.p_xpyp
    }

    /// p(y), computed as the cell sum p(x, y) + p(x', y).
    pub fn p_y(&self) -> f64 {
        self.p_xy + self.p_xpy
    }

    /// p(y'), computed as the cell sum p(x, y') + p(x', y').
    pub fn p_yp(&self) -> f64 {
        self.p_xyp + self.p_xpyp
    }

    /// p(x), computed as the cell sum p(x, y) + p(x, y').
    pub fn p_x(&self) -> f64 {
        self.p_xy + self.p_xyp
    }

    /// p(x'), computed as the cell sum p(x', y) + p(x', y').
    pub fn p_xp(&self) -> f64 {
        self.p_xpy + self.p_xpyp
    }

    /// The same joint with the exposure levels relabeled (x <-> x').
    ///
    /// Useful for expressing swap identities: the harm bounds equal the
    /// benefit bounds evaluated on the exposure-swapped inputs.
    pub fn swap_exposure(&self) -> Self {
        Self {
            p_xy: self.p_xpy,
            p_xyp: self.p_xpyp,
            p_xpy: self.p_xy,
            p_xpyp: self.p_xyp,
        }
    }

    /// The same joint with the outcome levels relabeled (y <-> y').
    ///
    /// The doom bounds equal the immunity bounds evaluated on the
    /// outcome-swapped inputs.
    pub fn swap_outcome(&self) -> Self {
        Self {
            p_xy: self.p_xyp,
            p_xyp: self.p_xy,
            p_xpy: self.p_xpyp,
            p_xpyp: self.p_xpy,
        }
    }

    /// Per-variable marginals and conditionals derived from the joint.
    ///
    /// Conditionals on a zero-probability exposure arm are `None` rather than
    /// a silent 0, so downstream code has to make the undefined case explicit.
    pub fn marginals(&self) -> Marginals {
        let p_x = self.p_x();
        let p_xp = self.p_xp();
        let cond = |cell: f64, arm: f64| (arm > 0.0).then(|| cell / arm);
        Marginals {
            p_x,
            p_xp,
            p_y: self.p_y(),
            p_yp: self.p_yp(),
            p_y_given_x: cond(self.p_xy, p_x),
            p_y_given_xp: cond(self.p_xpy, p_xp),
            p_yp_given_x: cond(self.p_xyp, p_x),
            p_yp_given_xp: cond(self.p_xpyp, p_xp),
        }
    }
}

impl TryFrom<JointCells> for ObservationalJoint {
    type Error = ProbError;

    fn try_from(cells: JointCells) -> Result<Self, Self::Error> {
        Self::new(cells.xy, cells.xy_, cells.x_y, cells.x_y_)
    }
}

impl From<ObservationalJoint> for JointCells {
    fn from(joint: ObservationalJoint) -> Self {
        Self {
            xy: joint.p_xy,
            xy_: joint.p_xyp,
            x_y: joint.p_xpy,
            x_y_: joint.p_xpyp,
        }
    }
}

/// Wire form of [`ExperimentalMarginals`], e.g. `{"y_do_x": 0.76, "y_do_x_":
/// 0.31}`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpCells {
    pub y_do_x: f64,
    pub y_do_x_: f64,
}

/// Experimental outcome marginals p(y_x) and p(y_x'): the probability of the
/// outcome under intervention on each exposure arm, e.g. from a randomized
/// trial.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ExpCells", into = "ExpCells")]
pub struct ExperimentalMarginals {
    p_y_do_x: f64,
    p_y_do_xp: f64,
}

impl ExperimentalMarginals {
    pub fn new(p_y_do_x: f64, p_y_do_xp: f64) -> Result<Self, ProbError> {
        Ok(Self {
            p_y_do_x: check_unit("y_do_x", p_y_do_x)?,
            p_y_do_xp: check_unit("y_do_x_", p_y_do_xp)?,
        })
    }

    /// p(y_x): outcome probability when the exposure is forced on.
    pub fn p_y_do_x(&self) -> f64 {
        self.p_y_do_x
    }

    /// p(y_x'): outcome probability when the exposure is forced off.
    pub fn p_y_do_xp(&self) -> f64 {
        self.p_y_do_xp
    }

    /// The marginals with the two arms swapped (x <-> x').
    pub fn swap_arms(&self) -> Self {
        Self {
            p_y_do_x: self.p_y_do_xp,
            p_y_do_xp: self.p_y_do_x,
        }
    }

    /// The marginals of the complementary outcome (y <-> y'): p(y'_x),
    /// p(y'_x').
    pub fn complement_outcome(&self) -> Self {
        Self {
            p_y_do_x: 1.0 - self.p_y_do_x,
            p_y_do_xp: 1.0 - self.p_y_do_xp,
        }
    }
}

impl TryFrom<ExpCells> for ExperimentalMarginals {
    type Error = ProbError;

    fn try_from(cells: ExpCells) -> Result<Self, Self::Error> {
        Self::new(cells.y_do_x, cells.y_do_x_)
    }
}

impl From<ExperimentalMarginals> for ExpCells {
    fn from(exp: ExperimentalMarginals) -> Self {
        Self {
            y_do_x: exp.p_y_do_x,
            y_do_x_: exp.p_y_do_xp,
        }
    }
}

/// Per-variable marginals and conditionals of an [`ObservationalJoint`].
///
/// Conditionals are `None` when the conditioning arm has probability zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Marginals {
    pub p_x: f64,
    pub p_xp: f64,
    pub p_y: f64,
    pub p_yp: f64,
    pub p_y_given_x: Option<f64>,
    pub p_y_given_xp: Option<f64>,
    pub p_yp_given_x: Option<f64>,
    pub p_yp_given_xp: Option<f64>,
}

/// The four response types of a binary outcome to a binary exposure.
///
/// * `Benefit` - outcome iff exposed (y_x and y'_x')
/// * `Harm` - outcome iff unexposed (y'_x and y_x')
/// * `Immunity` - outcome either way (y_x and y_x')
/// * `Doom` - no outcome either way (y'_x and y'_x')
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ResponseTarget {
    Benefit,
    Harm,
    Immunity,
    Doom,
}

impl ResponseTarget {
    pub const ALL: [ResponseTarget; 4] = [
        ResponseTarget::Benefit,
        ResponseTarget::Harm,
        ResponseTarget::Immunity,
        ResponseTarget::Doom,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ResponseTarget::Benefit => "benefit",
            ResponseTarget::Harm => "harm",
            ResponseTarget::Immunity => "immunity",
            ResponseTarget::Doom => "doom",
        }
    }
}

impl fmt::Display for ResponseTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ResponseTarget {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "benefit" => Ok(ResponseTarget::Benefit),
            "harm" => Ok(ResponseTarget::Harm),
            "immunity" => Ok(ResponseTarget::Immunity),
            "doom" => Ok(ResponseTarget::Doom),
            other => Err(format!(
                "unknown target {other:?} (expected benefit, harm, immunity, or doom)"
            )),
        }
    }
}

/// A closed interval of probabilities compatible with the data, together with
/// the identifier of the expression that attained each endpoint.
///
/// Ties resolve to the first expression in the documented argument order, so
/// `active_lower`/`active_upper` are deterministic.
#[derive(Debug, Clone, PartialEq)]
pub struct Interval {
    pub lower: f64,
    pub upper: f64,
    pub active_lower: String,
    pub active_upper: String,
}

impl Interval {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, value: f64) -> bool {
        self.lower <= value && value <= self.upper
    }

    /// Containment with `slack` of numerical grace on both endpoints.
    pub fn contains_within(&self, value: f64, slack: f64) -> bool {
        self.lower - slack <= value && value <= self.upper + slack
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:.6}, {:.6}]", self.lower, self.upper)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn joint_rejects_negative_cells() {
        let err = ObservationalJoint::new(0.5, -0.1, 0.3, 0.3).unwrap_err();
        assert!(matches!(err, ProbError::NegativeCell { .. }));
    }

    #[test]
    fn joint_rejects_bad_sum() {
        let err = ObservationalJoint::new(0.5, 0.2, 0.2, 0.2).unwrap_err();
        assert!(matches!(err, ProbError::NotADistribution { .. }));
    }

    #[test]
    fn joint_renormalizes_within_tolerance() {
        let off = 1e-10;
        let joint = ObservationalJoint::new(0.25 + off, 0.25, 0.25, 0.25).unwrap();
        let sum = joint.p_xy() + joint.p_xyp() + joint.p_xpy() + joint.p_xpyp();
        assert!((sum - 1.0).abs() < 1e-15);
    }

    #[test]
    fn exact_cells_round_trip_bit_for_bit() {
        // Dyadic cells sum to exactly 1.0, so construction must not touch them.
        let cells = (0.5, 0.125, 0.25, 0.125);
        let joint = ObservationalJoint::new(cells.0, cells.1, cells.2, cells.3).unwrap();
        assert_eq!(joint.p_xy().to_bits(), cells.0.to_bits());
        assert_eq!(joint.p_xyp().to_bits(), cells.1.to_bits());
        assert_eq!(joint.p_xpy().to_bits(), cells.2.to_bits());
        assert_eq!(joint.p_xpyp().to_bits(), cells.3.to_bits());
    }

    #[test]
    fn marginals_match_hand_computation() {
        let joint = ObservationalJoint::new(0.084, 0.196, 0.252, 0.468).unwrap();
        let m = joint.marginals();
        assert!((m.p_x - 0.28).abs() < 1e-12);
        assert!((m.p_y - 0.336).abs() < 1e-12);
        assert!((m.p_x + m.p_xp - 1.0).abs() < 1e-12);
        assert!((m.p_y + m.p_yp - 1.0).abs() < 1e-12);
        assert!((m.p_y_given_x.unwrap() - 0.3).abs() < 1e-12);
        assert!((m.p_yp_given_xp.unwrap() - 0.65).abs() < 1e-12);
    }

    #[test]
    fn zero_arm_conditionals_are_undefined() {
        let joint = ObservationalJoint::new(0.0, 0.0, 0.6, 0.4).unwrap();
        let m = joint.marginals();
        assert_eq!(m.p_y_given_x, None);
        assert_eq!(m.p_yp_given_x, None);
        assert!(m.p_y_given_xp.is_some());
    }

    #[test]
    fn joint_wire_format_is_exact() {
        // Dyadic cells sum to exactly 1.0, so normalization divides by 1.0
        // and every cell survives bitwise.
        let joint: ObservationalJoint =
            serde_json::from_str(r#"{"xy":0.5,"xy_":0.25,"x_y":0.125,"x_y_":0.125}"#).unwrap();
        assert_eq!(joint.p_xyp(), 0.25);
        assert_eq!(joint.p_xpyp(), 0.125);

        let err = serde_json::from_str::<ObservationalJoint>(
            r#"{"xy":0.5,"xy_":0.25,"x_y":0.125,"x_y_":0.125,"extra":0.0}"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("extra"));
    }

    #[test]
    fn exp_wire_format_is_exact() {
        let exp: ExperimentalMarginals =
            serde_json::from_str(r#"{"y_do_x":0.76,"y_do_x_":0.31}"#).unwrap();
        assert_eq!(exp.p_y_do_x(), 0.76);
        assert_eq!(exp.p_y_do_xp(), 0.31);
        assert!(
            serde_json::from_str::<ExperimentalMarginals>(r#"{"y_do_x":1.2,"y_do_x_":0.3}"#)
                .is_err()
        );
    }

    #[test]
    fn swaps_relabel_cells() {
        let joint = ObservationalJoint::new(0.4, 0.1, 0.3, 0.2).unwrap();
        let sx = joint.swap_exposure();
        assert_eq!(sx.p_xy(), 0.3);
        assert_eq!(sx.p_xyp(), 0.2);
        assert_eq!(sx.swap_exposure(), joint);

        let sy = joint.swap_outcome();
        assert_eq!(sy.p_xy(), 0.1);
        assert_eq!(sy.p_xpy(), 0.2);
        assert_eq!(sy.swap_outcome(), joint);

        let exp = ExperimentalMarginals::new(0.76, 0.31).unwrap();
        assert_eq!(exp.swap_arms().p_y_do_x(), 0.31);
        assert_eq!(exp.complement_outcome().p_y_do_x(), 1.0 - 0.76);
    }
}
