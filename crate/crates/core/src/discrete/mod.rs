//! Discrete memoryless IC-DMS: exact region evaluation over small finite
//! alphabets.
//!
//! A [`FactoredDistribution`] is materialized into a dense [`JointPmf`]
//! (capped at [`DEFAULT_CELL_CAP`] cells), and every mutual information in
//! the region inequalities is summed exactly from marginal tables. All
//! quantities are conditioned on the time-sharing variable `Q`.

mod dist;
mod joint;
pub mod random;
mod region;

pub use dist::{
    AlphabetSpec, Factor, FactoredDistribution, Family, Var, DEFAULT_CELL_CAP, PROB_TOL,
};
pub use joint::{assemble_joint, assemble_joint_capped, conditional_mi, JointPmf};
pub use random::Corollary;
pub use region::{
    evaluate, region_r, region_r_joint, region_r_sim, region_r_sim_joint, region_r_suc,
    region_r_suc_joint, Constraint, ConstraintReading, DiscreteRegion, Theorem,
};
