//! Sensitivity analysis for the probability of immunity when no experimental
//! data exist and the exposure-outcome relation is confounded.
//!
//! The analyst supplies ranges for the latent-level outcome rates: `m_x` and
//! `M_x` bracket p(y | x, u) across the unobserved confounder levels u, and
//! `m_x'`/`M_x'` bracket p(y | x', u). Together with the observational joint
//! these produce an immunity interval. Widening the brackets to their
//! data-free extremes recovers the envelope [0, p(y)]; collapsing them onto
//! the observed conditionals (no confounding) recovers the two-marginal
//! immunity bounds exactly.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::prob::{Interval, ObservationalJoint, COMPARISON_TOLERANCE};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SensitivityError {
    #[error("sensitivity parameter {name} = {value} is not a probability in [0, 1]")]
    OutOfRange { name: &'static str, value: f64 },
    #[error("sensitivity parameters are inverted: {min_name} = {min} exceeds {max_name} = {max}")]
    InvertedPair {
        min_name: &'static str,
        min: f64,
        max_name: &'static str,
        max: f64,
    },
    #[error("parameter {name} = {value:.6} lies outside its possible region {region}")]
    RegionViolation {
        name: &'static str,
        value: f64,
        region: Region,
    },
    #[error("exposure arm {arm} has zero probability, so its parameter region is undefined")]
    UndefinedArm { arm: &'static str },
    #[error("a sweep needs at least 2 steps per axis, got {steps}")]
    TooFewSteps { steps: usize },
}

/// Analyst-supplied brackets on the latent-level outcome rates.
///
/// `min_x`/`max_x` are m_x/M_x (bracketing p(y | x, u) over u) and
/// `min_xp`/`max_xp` are m_x'/M_x'. Each bracket must be ordered; membership
/// in the data-implied possible regions is checked by [`sensitivity_bounds`],
/// not here, so out-of-region what-if values can still be represented.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensitivityParams {
    min_x: f64,
    max_x: f64,
    min_xp: f64,
    max_xp: f64,
}

impl SensitivityParams {
    pub fn new(min_x: f64, max_x: f64, min_xp: f64, max_xp: f64) -> Result<Self, SensitivityError> {
        for (name, value) in [
            ("m_x", min_x),
            ("M_x", max_x),
            ("m_x'", min_xp),
            ("M_x'", max_xp),
        ] {
            if !value.is_finite() || !(0.0..=1.0).contains(&value) {
                return Err(SensitivityError::OutOfRange { name, value });
            }
        }
        if min_x > max_x {
            return Err(SensitivityError::InvertedPair {
                min_name: "m_x",
                min: min_x,
                max_name: "M_x",
                max: max_x,
            });
        }
        if min_xp > max_xp {
            return Err(SensitivityError::InvertedPair {
                min_name: "m_x'",
                min: min_xp,
                max_name: "M_x'",
                max: max_xp,
            });
        }
        Ok(Self {
            min_x,
            max_x,
            min_xp,
            max_xp,
        })
    }

    /// m_x: lower bracket on p(y | x, u).
    pub fn min_x(&self) -> f64 {
        self.min_x
    }

    /// M_x: upper bracket on p(y | x, u).
    pub fn max_x(&self) -> f64 {
        self.max_x
    }

    /// m_x': lower bracket on p(y | x', u).
    pub fn min_xp(&self) -> f64 {
        self.min_xp
    }

    /// M_x': upper bracket on p(y | x', u).
    pub fn max_xp(&self) -> f64 {
        self.max_xp
    }
}

/// An interval with per-endpoint closedness, as parameter regions mix strict
/// and non-strict endpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Region {
    pub lower: f64,
    pub upper: f64,
    pub lower_closed: bool,
    pub upper_closed: bool,
}

impl Region {
    fn closed(lower: f64, upper: f64) -> Self {
        Self {
            lower,
            upper,
            lower_closed: true,
            upper_closed: true,
        }
    }

    pub fn contains(&self, value: f64) -> bool {
        let above = if self.lower_closed {
            value >= self.lower
        } else {
            value > self.lower
        };
        let below = if self.upper_closed {
            value <= self.upper
        } else {
            value < self.upper
        };
        above && below
    }

    /// True when no value satisfies both endpoint constraints, e.g. the
    /// half-open informative region collapses once its endpoints meet.
    pub fn is_empty(&self) -> bool {
        if self.lower < self.upper {
            false
        } else if self.lower > self.upper {
            true
        } else {
            !(self.lower_closed && self.upper_closed)
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{:.6}, {:.6}{}",
            if self.lower_closed { '[' } else { '(' },
            self.lower,
            self.upper,
            if self.upper_closed { ']' } else { ')' },
        )
    }
}

/// One region per sensitivity parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionSet {
    pub min_x: Region,
    pub max_x: Region,
    pub min_xp: Region,
    pub max_xp: Region,
}

/// The data-implied regions for each sensitivity parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParameterRegions {
    /// Values consistent with the observed conditionals at all:
    /// 0 ≤ m_x ≤ p(y|x) ≤ M_x ≤ 1, and likewise for the x' arm.
    pub possible: RegionSet,
    /// Values that move the resulting bound off its data-free extreme. For
    /// the lower brackets these are half-open: (p(y'|x'), p(y|x)] for m_x and
    /// [p(y'|x), p(y|x')) for m_x'; either may be empty. The upper brackets
    /// are informative on their whole possible region.
    pub informative: RegionSet,
}

fn conditionals(joint: &ObservationalJoint) -> Result<(f64, f64, f64, f64), SensitivityError> {
    let m = joint.marginals();
    let p_y_given_x = m
        .p_y_given_x
        .ok_or(SensitivityError::UndefinedArm { arm: "x" })?;
    let p_y_given_xp = m
        .p_y_given_xp
        .ok_or(SensitivityError::UndefinedArm { arm: "x'" })?;
    let p_yp_given_x = m
        .p_yp_given_x
        .ok_or(SensitivityError::UndefinedArm { arm: "x" })?;
    let p_yp_given_xp = m
        .p_yp_given_xp
        .ok_or(SensitivityError::UndefinedArm { arm: "x'" })?;
    Ok((p_y_given_x, p_y_given_xp, p_yp_given_x, p_yp_given_xp))
}

/// The possible and informative regions implied by the joint.
///
/// Fails with [`SensitivityError::UndefinedArm`] when an exposure arm has
/// probability zero, since the anchoring conditionals do not exist.
pub fn parameter_regions(joint: &ObservationalJoint) -> Result<ParameterRegions, SensitivityError> {
    let (p_y_given_x, p_y_given_xp, p_yp_given_x, p_yp_given_xp) = conditionals(joint)?;

    let possible = RegionSet {
        min_x: Region::closed(0.0, p_y_given_x),
        max_x: Region::closed(p_y_given_x, 1.0),
        min_xp: Region::closed(0.0, p_y_given_xp),
        max_xp: Region::closed(p_y_given_xp, 1.0),
    };
    let informative = RegionSet {
        min_x: Region {
            lower: p_yp_given_xp,
            upper: p_y_given_x,
            lower_closed: false,
            upper_closed: true,
        },
        min_xp: Region {
            lower: p_yp_given_x,
            upper: p_y_given_xp,
            lower_closed: true,
            upper_closed: false,
        },
        max_x: possible.max_x,
        max_xp: possible.max_xp,
    };
    Ok(ParameterRegions {
        possible,
        informative,
    })
}

/// The four lower-bound arguments; only the lower brackets matter.
fn lower_args(joint: &ObservationalJoint, min_x: f64, min_xp: f64) -> [f64; 4] {
    let p_x = joint.p_x();
    let p_xp = joint.p_xp();
    [
        0.0,
        p_xp * min_x + p_x * min_xp - joint.p_yp(),
        p_xp * min_x - joint.p_xpyp(),
        p_x * min_xp - joint.p_xyp(),
    ]
}

/// The four upper-bound arguments; only the upper brackets matter.
fn upper_args(joint: &ObservationalJoint, max_x: f64, max_xp: f64) -> [f64; 4] {
    let p_x = joint.p_x();
    let p_xp = joint.p_xp();
    [
        joint.p_xy() + p_xp * max_x,
        joint.p_xpy() + p_x * max_xp,
        p_xp * max_x + p_x * max_xp,
        joint.p_y(),
    ]
}

const LOWER_LABELS: [&str; 4] = [
    "0",
    "p(x')m_x+p(x)m_x'-p(y')",
    "p(x')m_x-p(x',y')",
    "p(x)m_x'-p(x,y')",
];

const UPPER_LABELS: [&str; 4] = [
    "p(x,y)+p(x')M_x",
    "p(x',y)+p(x)M_x'",
    "p(x')M_x+p(x)M_x'",
    "p(y)",
];

/// Immunity interval from the joint and the latent-rate brackets, without
/// checking the brackets against the possible regions.
///
/// With brackets outside the possible regions the interval can be empty
/// (lower above upper); callers that want that flagged should use
/// [`sensitivity_bounds`].
pub fn sensitivity_bounds_unchecked(
    joint: &ObservationalJoint,
    params: &SensitivityParams,
) -> Interval {
    let lo = lower_args(joint, params.min_x, params.min_xp);
    let up = upper_args(joint, params.max_x, params.max_xp);

    let mut lo_at = 0;
    for (i, v) in lo.iter().enumerate() {
        if *v > lo[lo_at] {
            lo_at = i;
        }
    }
    let mut up_at = 0;
    for (i, v) in up.iter().enumerate() {
        if *v < up[up_at] {
            up_at = i;
        }
    }

    Interval {
        lower: lo[lo_at],
        upper: up[up_at],
        active_lower: LOWER_LABELS[lo_at].to_string(),
        active_upper: UPPER_LABELS[up_at].to_string(),
    }
}

/// Immunity interval from the joint and the latent-rate brackets.
///
/// Each bracket is first checked against its possible region (within
/// [`COMPARISON_TOLERANCE`]); a violation is an error naming the parameter,
/// because out-of-region brackets contradict the observed conditionals rather
/// than merely widening uncertainty.
pub fn sensitivity_bounds(
    joint: &ObservationalJoint,
    params: &SensitivityParams,
) -> Result<Interval, SensitivityError> {
    let regions = parameter_regions(joint)?;
    let checks = [
        ("m_x", params.min_x, regions.possible.min_x),
        ("M_x", params.max_x, regions.possible.max_x),
        ("m_x'", params.min_xp, regions.possible.min_xp),
        ("M_x'", params.max_xp, regions.possible.max_xp),
    ];
    for (name, value, region) in checks {
        if value < region.lower - COMPARISON_TOLERANCE
            || value > region.upper + COMPARISON_TOLERANCE
        {
            return Err(SensitivityError::RegionViolation {
                name,
                value,
                region,
            });
        }
    }
    Ok(sensitivity_bounds_unchecked(joint, params))
}

/// Which endpoint a sweep evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepBound {
    Lower,
    Upper,
}

impl SweepBound {
    pub fn as_str(&self) -> &'static str {
        match self {
            SweepBound::Lower => "lower",
            SweepBound::Upper => "upper",
        }
    }
}

impl FromStr for SweepBound {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "lower" => Ok(SweepBound::Lower),
            "upper" => Ok(SweepBound::Upper),
            other => Err(format!("unknown bound {other:?} (expected lower or upper)")),
        }
    }
}

/// One sweep axis: `steps` evenly spaced values from `start` to `stop`
/// inclusive.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepAxis {
    pub param: &'static str,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl SweepAxis {
    pub fn value(&self, index: usize) -> f64 {
        debug_assert!(index < self.steps);
        if index + 1 == self.steps {
            // Land exactly on the endpoint instead of accumulating drift.
            self.stop
        } else {
            self.start + (self.stop - self.start) * index as f64 / (self.steps - 1) as f64
        }
    }
}

/// A dense grid of bound values over two parameter axes, row-major: rows
/// follow `row_axis` (the x-arm parameter), columns follow `col_axis`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid {
    pub which: SweepBound,
    pub row_axis: SweepAxis,
    pub col_axis: SweepAxis,
    values: Vec<f64>,
}

impl SweepGrid {
    pub fn value(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.col_axis.steps + col]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Renders the grid as CSV with header `param1,param2,value`, row-major,
    /// every number with six decimals.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(24 * self.values.len() + 32);
        out.push_str("param1,param2,value\n");
        for row in 0..self.row_axis.steps {
            let v1 = self.row_axis.value(row);
            for col in 0..self.col_axis.steps {
                let v2 = self.col_axis.value(col);
                out.push_str(&format!(
                    "{:.6},{:.6},{:.6}\n",
                    v1,
                    v2,
                    self.value(row, col)
                ));
            }
        }
        out
    }
}

/// Sweeps one bound of the immunity interval over its two parameters' full
/// possible regions: the lower bound over (m_x, m_x'), the upper bound over
/// (M_x, M_x'). Endpoints are included; values outside the grid do not exist.
pub fn sweep(
    joint: &ObservationalJoint,
    which: SweepBound,
    steps: usize,
) -> Result<SweepGrid, SensitivityError> {
    if steps < 2 {
        return Err(SensitivityError::TooFewSteps { steps });
    }
    let (p_y_given_x, p_y_given_xp, _, _) = conditionals(joint)?;

    let (row_axis, col_axis) = match which {
        SweepBound::Lower => (
            SweepAxis {
                param: "m_x",
                start: 0.0,
                stop: p_y_given_x,
                steps,
            },
            SweepAxis {
                param: "m_x'",
                start: 0.0,
                stop: p_y_given_xp,
                steps,
            },
        ),
        SweepBound::Upper => (
            SweepAxis {
                param: "M_x",
                start: p_y_given_x,
                stop: 1.0,
                steps,
            },
            SweepAxis {
                param: "M_x'",
                start: p_y_given_xp,
                stop: 1.0,
                steps,
            },
        ),
    };

    let mut values = Vec::with_capacity(steps * steps);
    for row in 0..steps {
        let v1 = row_axis.value(row);
        for col in 0..steps {
            let v2 = col_axis.value(col);
            let cell = match which {
                SweepBound::Lower => lower_args(joint, v1, v2)
                    .into_iter()
                    .fold(f64::NEG_INFINITY, f64::max),
                SweepBound::Upper => upper_args(joint, v1, v2)
                    .into_iter()
                    .fold(f64::INFINITY, f64::min),
            };
            values.push(cell);
        }
    }

    Ok(SweepGrid {
        which,
        row_axis,
        col_axis,
        values,
    })
}
