use serde::Serialize;

use super::dist::{FactoredDistribution, Family, Var};
use super::joint::{assemble_joint, conditional_mi, JointPmf};
use crate::error::{Error, Result};
use crate::region::PentagonRegion;
use crate::FEASIBILITY_EPS;

/// Which discrete region a [`DiscreteRegion`] evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Theorem {
    /// Full scheme: Gel'fand-Pinsker binning of both private streams.
    R,
    /// `U` generated independently, simultaneous decoding.
    RSim,
    /// `U` generated independently, successive decoding.
    RSuc,
}

impl Theorem {
    pub fn number(self) -> u8 {
        match self {
            Theorem::R => 1,
            Theorem::RSim => 2,
            Theorem::RSuc => 3,
        }
    }

    pub fn from_number(n: u8) -> Option<Self> {
        match n {
            1 => Some(Theorem::R),
            2 => Some(Theorem::RSim),
            3 => Some(Theorem::RSuc),
            _ => None,
        }
    }

    pub fn family(self) -> Family {
        match self {
            Theorem::R => Family::Full,
            Theorem::RSim | Theorem::RSuc => Family::Star,
        }
    }
}

/// Output used by the `V`-stream constraint of the simplified schemes.
///
/// The constraint keeps the `V`-stream rate non-negative, which involves
/// receiver 2 (`I(V;Y2|U,Q) − I(V;W|Q)`). `PaperLiteral` evaluates the
/// variant with `Y1` instead.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstraintReading {
    #[default]
    Receiver2,
    PaperLiteral,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Constraint {
    pub label: &'static str,
    /// `rhs − 0`; the constraint holds when this is `≥ −ε`.
    pub residual: f64,
    /// Whether the residual enters the feasibility verdict.
    pub active: bool,
}

/// Rate bounds and constraint residuals of one discrete region.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscreteRegion {
    pub theorem: Theorem,
    pub r1_bound: f64,
    pub r2_bound: f64,
    /// `None` when the region has no separate sum-rate bound.
    pub sum_bound: Option<f64>,
    pub constraints: Vec<Constraint>,
    pub feasible: bool,
}

impl DiscreteRegion {
    fn finish(
        theorem: Theorem,
        r1_bound: f64,
        r2_bound: f64,
        sum_bound: Option<f64>,
        constraints: Vec<Constraint>,
    ) -> Self {
        let feasible = constraints
            .iter()
            .filter(|c| c.active)
            .all(|c| c.residual >= -FEASIBILITY_EPS);
        Self {
            theorem,
            r1_bound,
            r2_bound,
            sum_bound,
            constraints,
            feasible,
        }
    }

    /// The region as a pentagon; infeasible when a constraint is violated
    /// or a rate bound is negative.
    pub fn to_pentagon(&self) -> PentagonRegion {
        if !self.feasible || self.r1_bound < -FEASIBILITY_EPS || self.r2_bound < -FEASIBILITY_EPS {
            return PentagonRegion::infeasible();
        }
        let sum = self.sum_bound.unwrap_or(self.r1_bound + self.r2_bound);
        PentagonRegion::new(self.r1_bound, self.r2_bound, sum)
    }

    /// Bound-wise inclusion `self ⊆ other` (within `tol`).
    pub fn within(&self, other: &DiscreteRegion, tol: f64) -> bool {
        let sum = |r: &DiscreteRegion| r.sum_bound.unwrap_or(r.r1_bound + r.r2_bound);
        self.r1_bound <= other.r1_bound + tol
            && self.r2_bound <= other.r2_bound + tol
            && sum(self) <= sum(other) + tol
    }
}

use Var::{Q, U, V, W, Y1, Y2};

fn require(fd: &FactoredDistribution, family: Family) -> Result<()> {
    if fd.family != family {
        return Err(Error::FactorShape {
            factor: "distribution".into(),
            family: family.name(),
            reason: format!("got a {} distribution", fd.family.name()),
        });
    }
    Ok(())
}

/// Region of the full scheme for one FULL-family distribution.
pub fn region_r(fd: &FactoredDistribution) -> Result<DiscreteRegion> {
    require(fd, Family::Full)?;
    region_r_joint(&assemble_joint(fd)?)
}

pub fn region_r_joint(j: &JointPmf) -> Result<DiscreteRegion> {
    let mi = |l: &[Var], r: &[Var]| conditional_mi(j, l, r, &[Q]);
    let w_y1u = mi(&[W], &[Y1, U])?;
    let uv_y2 = mi(&[U, V], &[Y2])?;
    let u_w = mi(&[U], &[W])?;
    let v_w = mi(&[V], &[W])?;
    let uw_y1 = mi(&[U, W], &[Y1])?;
    let v_y2u = mi(&[V], &[Y2, U])?;
    let u_y2v = mi(&[U], &[Y2, V])?;

    let constraints = vec![
        Constraint {
            label: "I(UW;Y1|Q) - I(U;W|Q)",
            residual: uw_y1 - u_w,
            active: true,
        },
        Constraint {
            label: "I(U;Y2V|Q) - I(U;W|Q)",
            residual: u_y2v - u_w,
            active: true,
        },
        Constraint {
            label: "I(V;Y2U|Q) - I(V;W|Q)",
            residual: v_y2u - v_w,
            active: true,
        },
        Constraint {
            label: "I(UV;Y2|Q) - I(U;W|Q) - I(V;W|Q)",
            residual: uv_y2 - u_w - v_w,
            active: true,
        },
    ];
    Ok(DiscreteRegion::finish(
        Theorem::R,
        w_y1u,
        uv_y2 - u_w - v_w,
        Some(uw_y1 + v_y2u - u_w - v_w),
        constraints,
    ))
}

fn v_stream_constraints(
    j: &JointPmf,
    v_w: f64,
    reading: ConstraintReading,
) -> Result<(f64, Vec<Constraint>)> {
    let v_y2_u = conditional_mi(j, &[V], &[Y2], &[U, Q])?;
    let v_y1_u = conditional_mi(j, &[V], &[Y1], &[U, Q])?;
    let constraints = vec![
        Constraint {
            label: "I(V;Y2|UQ) - I(V;W|Q)",
            residual: v_y2_u - v_w,
            active: reading == ConstraintReading::Receiver2,
        },
        Constraint {
            label: "I(V;Y1|UQ) - I(V;W|Q)",
            residual: v_y1_u - v_w,
            active: reading == ConstraintReading::PaperLiteral,
        },
    ];
    Ok((v_y2_u, constraints))
}

/// Simultaneous-decoding region for one STAR-family distribution.
pub fn region_r_sim(
    fd: &FactoredDistribution,
    reading: ConstraintReading,
) -> Result<DiscreteRegion> {
    require(fd, Family::Star)?;
    region_r_sim_joint(&assemble_joint(fd)?, reading)
}

pub fn region_r_sim_joint(j: &JointPmf, reading: ConstraintReading) -> Result<DiscreteRegion> {
    let w_y1_u = conditional_mi(j, &[W], &[Y1], &[U, Q])?;
    let uv_y2 = conditional_mi(j, &[U, V], &[Y2], &[Q])?;
    let v_w = conditional_mi(j, &[V], &[W], &[Q])?;
    let wu_y1 = conditional_mi(j, &[W, U], &[Y1], &[Q])?;
    let (v_y2_u, constraints) = v_stream_constraints(j, v_w, reading)?;
    Ok(DiscreteRegion::finish(
        Theorem::RSim,
        w_y1_u,
        uv_y2 - v_w,
        Some(wu_y1 + v_y2_u - v_w),
        constraints,
    ))
}

/// Successive-decoding region for one STAR-family distribution.
pub fn region_r_suc(
    fd: &FactoredDistribution,
    reading: ConstraintReading,
) -> Result<DiscreteRegion> {
    require(fd, Family::Star)?;
    region_r_suc_joint(&assemble_joint(fd)?, reading)
}

pub fn region_r_suc_joint(j: &JointPmf, reading: ConstraintReading) -> Result<DiscreteRegion> {
    let w_y1_u = conditional_mi(j, &[W], &[Y1], &[U, Q])?;
    let u_y1 = conditional_mi(j, &[U], &[Y1], &[Q])?;
    let u_y2 = conditional_mi(j, &[U], &[Y2], &[Q])?;
    let v_w = conditional_mi(j, &[V], &[W], &[Q])?;
    let (v_y2_u, constraints) = v_stream_constraints(j, v_w, reading)?;
    Ok(DiscreteRegion::finish(
        Theorem::RSuc,
        w_y1_u,
        u_y1.min(u_y2) + v_y2_u - v_w,
        None,
        constraints,
    ))
}

/// Evaluates the region selected by `theorem`.
pub fn evaluate(
    fd: &FactoredDistribution,
    theorem: Theorem,
    reading: ConstraintReading,
) -> Result<DiscreteRegion> {
    match theorem {
        Theorem::R => region_r(fd),
        Theorem::RSim => region_r_sim(fd, reading),
        Theorem::RSuc => region_r_suc(fd, reading),
    }
}
