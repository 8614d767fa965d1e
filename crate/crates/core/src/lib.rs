//! # icdms-core
//!
//! Achievable rate regions for the two-user interference channel with
//! degraded message sets (IC-DMS): sender 2 knows sender 1's message
//! non-causally and may both cooperate (superposition) and precode against
//! it (Gel'fand-Pinsker / dirty-paper coding).
//!
//! | Module | Contents |
//! |--------|----------|
//! | [`gaussian`] | closed-form Gaussian regions: `G(α,β,λ1,λ2)`, `G_suc(α,β)`, `G_sp1`, `G_sp2`, dirty-paper coefficient |
//! | [`discrete`] | exact finite-alphabet regions `R(p)`, `R_sim(p)`, `R_suc(p)` by dense pmf enumeration |
//! | [`geometry`] | sampled Pareto frontiers, unions over parameter sweeps, inclusion and convexity tests |
//! | [`oracle`] | independent checks: Monte Carlo Gaussian entropy, grid maximization, brute-force discrete MI |
//! | [`presets`] | channel parameters of the reference figures |
//!
//! All rates are in bits per channel use.
//!
//! ```
//! use icdms_core::{region_g_sp1, ChannelParams};
//!
//! let ch = ChannelParams::new(6.0, 6.0, 0.3, 0.3).unwrap();
//! let corner = region_g_sp1(&ch, 1.0).unwrap();
//! assert!((corner.r2_max - 0.5 * 7f64.log2()).abs() < 1e-12);
//! ```

// `!(x >= 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod discrete;
mod error;
pub mod gaussian;
pub mod geometry;
pub mod oracle;
pub mod presets;
mod region;

pub use error::{Error, Result};
pub use gaussian::{
    build_covariances, dpc_lambda_star, dpc_objective, entropy_terms, mi_terms, region_g,
    region_g_sp1, region_g_sp2, region_g_suc, ChannelParams, EntropyTerms, GaussianCoding, Mat3,
    MiTerms,
};
pub use geometry::{
    convex_hull, convexity_defect, inclusion_gap, pentagon_frontier, sweep_gaussian,
    union_frontier, Frontier, LambdaRange, ParamRange, RegionFamily, SweepGrid,
};
pub use region::PentagonRegion;

/// Numerical slack for feasibility and non-negativity checks, in bits.
pub const FEASIBILITY_EPS: f64 = 1e-9;
