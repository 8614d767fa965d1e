use serde::{Deserialize, Serialize};

/// `{R1 ≤ r1_max, R2 ≤ r2_max, R1 + R2 ≤ sum_max}` intersected with the
/// non-negative quadrant.
///
/// The sum bound may be slack or binding; it is not required to be below
/// `r1_max + r2_max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PentagonRegion {
    pub r1_max: f64,
    pub r2_max: f64,
    pub sum_max: f64,
    pub feasible: bool,
}

impl PentagonRegion {
    /// A feasible pentagon. Bounds are clamped at 0 from below.
    pub fn new(r1_max: f64, r2_max: f64, sum_max: f64) -> Self {
        Self {
            r1_max: r1_max.max(0.0),
            r2_max: r2_max.max(0.0),
            sum_max: sum_max.max(0.0),
            feasible: true,
        }
    }

    /// Rectangle: the sum bound is `r1_max + r2_max`.
    pub fn rectangle(r1_max: f64, r2_max: f64) -> Self {
        let (r1, r2) = (r1_max.max(0.0), r2_max.max(0.0));
        Self::new(r1, r2, r1 + r2)
    }

    pub fn infeasible() -> Self {
        Self {
            r1_max: 0.0,
            r2_max: 0.0,
            sum_max: 0.0,
            feasible: false,
        }
    }

    /// Largest R1 reachable inside the region.
    pub fn r1_extent(&self) -> f64 {
        self.r1_max.min(self.sum_max)
    }

    /// Largest R2 reachable inside the region.
    pub fn r2_extent(&self) -> f64 {
        self.r2_max.min(self.sum_max)
    }

    /// Largest R2 at a given R1, or `None` when `r1` is outside the region.
    pub fn r2_at(&self, r1: f64) -> Option<f64> {
        if !self.feasible || r1 < 0.0 || r1 > self.r1_extent() {
            return None;
        }
        Some(self.r2_max.min(self.sum_max - r1).max(0.0))
    }

    pub fn contains(&self, r1: f64, r2: f64, tol: f64) -> bool {
        self.feasible
            && r1 >= -tol
            && r2 >= -tol
            && r1 <= self.r1_max + tol
            && r2 <= self.r2_max + tol
            && r1 + r2 <= self.sum_max + tol
    }

    /// The (at most two) Pareto-optimal corner points.
    pub fn corners(&self) -> [(f64, f64); 2] {
        let top = self.r2_extent();
        let right = self.r1_extent();
        [
            ((self.sum_max - top).min(self.r1_max).max(0.0), top),
            (right, (self.sum_max - right).min(self.r2_max).max(0.0)),
        ]
    }
}
