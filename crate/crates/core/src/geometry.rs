//! Sampled Pareto frontiers of pentagon regions and of their unions over
//! parameter sweeps.
//!
//! A [`Frontier`] stores, for every point `r1 = k·step` of a uniform grid
//! starting at 0, the largest `r2` reachable in the region, together with
//! the exact Pareto-optimal corner points of the member pentagons. The
//! samples drive comparisons; the corners keep exact extreme points that do
//! not fall on the grid.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::gaussian::{
    region_g, region_g_sp1, region_g_sp2, region_g_suc, ChannelParams, GaussianCoding,
};
use crate::region::PentagonRegion;

/// Default spacing of the `r1` grid, in bits.
pub const DEFAULT_R1_STEP: f64 = 0.005;

/// Default `Λ / η2` for the truncated `λ` ranges.
pub const DEFAULT_LAMBDA_FACTOR: f64 = 3.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Frontier {
    pub label: String,
    pub r1_step: f64,
    /// `r2[k]` is the frontier height at `r1 = k·r1_step`.
    pub r2: Vec<f64>,
    /// Pareto-optimal corners, sorted by increasing `r1`.
    pub vertices: Vec<(f64, f64)>,
}

impl Frontier {
    pub fn len(&self) -> usize {
        self.r2.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r2.is_empty()
    }

    pub fn r1(&self, k: usize) -> f64 {
        k as f64 * self.r1_step
    }

    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.r2.iter().enumerate().map(|(k, &r2)| (self.r1(k), r2))
    }

    /// Largest `r1` of any member region.
    pub fn r1_extent(&self) -> f64 {
        self.vertices.last().map_or(0.0, |v| v.0)
    }

    /// Height at `r1 = 0`.
    pub fn r2_extent(&self) -> f64 {
        self.r2.first().copied().unwrap_or(0.0)
    }

    /// Whether some corner of the frontier lies within `tol` (max-norm) of
    /// `point`.
    pub fn has_vertex_near(&self, point: (f64, f64), tol: f64) -> bool {
        self.vertices
            .iter()
            .any(|v| (v.0 - point.0).abs() <= tol && (v.1 - point.1).abs() <= tol)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }
}

/// Keeps only non-dominated points; output sorted by increasing `r1`.
fn pareto_filter(points: &mut Vec<(f64, f64)>) {
    points.sort_by(|a, b| b.0.total_cmp(&a.0).then(b.1.total_cmp(&a.1)));
    let mut best = f64::NEG_INFINITY;
    points.retain(|p| {
        if p.1 > best {
            best = p.1;
            true
        } else {
            false
        }
    });
    points.reverse();
}

/// Incremental union of pentagon frontiers on a shared grid.
#[derive(Debug, Clone)]
struct FrontierBuilder {
    step: f64,
    r2: Vec<f64>,
    vertices: Vec<(f64, f64)>,
    prune_at: usize,
}

impl FrontierBuilder {
    fn new(step: f64) -> Self {
        Self {
            step,
            r2: Vec::new(),
            vertices: Vec::new(),
            prune_at: 1024,
        }
    }

    fn samples_up_to(&self, extent: f64) -> usize {
        (extent / self.step * (1.0 + 1e-12) + 1e-9).floor() as usize + 1
    }

    fn add(&mut self, region: &PentagonRegion) {
        if !region.feasible {
            return;
        }
        let n = self.samples_up_to(region.r1_extent());
        if self.r2.len() < n {
            self.r2.resize(n, f64::NEG_INFINITY);
        }
        let flat_until = region.sum_max - region.r2_max;
        for (k, slot) in self.r2[..n].iter_mut().enumerate() {
            let r1 = k as f64 * self.step;
            let h = if r1 <= flat_until {
                region.r2_max
            } else {
                (region.sum_max - r1).max(0.0)
            };
            if h > *slot {
                *slot = h;
            }
        }
        self.vertices.extend_from_slice(&region.corners());
        if self.vertices.len() > self.prune_at {
            pareto_filter(&mut self.vertices);
            self.prune_at = 2 * self.vertices.len() + 1024;
        }
    }

    fn merge(mut self, other: FrontierBuilder) -> FrontierBuilder {
        if other.r2.len() > self.r2.len() {
            self.r2.resize(other.r2.len(), f64::NEG_INFINITY);
        }
        for (a, b) in self.r2.iter_mut().zip(other.r2) {
            *a = a.max(b);
        }
        self.vertices.extend(other.vertices);
        pareto_filter(&mut self.vertices);
        self.prune_at = 2 * self.vertices.len() + 1024;
        self
    }

    fn finish(mut self, label: impl Into<String>) -> Result<Frontier> {
        if self.r2.is_empty() {
            return Err(Error::EmptyUnion);
        }
        pareto_filter(&mut self.vertices);
        Ok(Frontier {
            label: label.into(),
            r1_step: self.step,
            r2: self.r2,
            vertices: self.vertices,
        })
    }
}

fn check_step(step: f64) -> Result<()> {
    if !(step > 0.0) || !step.is_finite() {
        return Err(invalid("r1_step", format!("must be positive, got {step}")));
    }
    Ok(())
}

/// Frontier of a single pentagon: `r2 = min(r2_max, sum_max − r1)` for
/// every grid `r1` up to the region's extent.
pub fn pentagon_frontier(region: &PentagonRegion, r1_step: f64) -> Result<Frontier> {
    check_step(r1_step)?;
    if !region.feasible {
        return Err(Error::EmptyRegion);
    }
    let mut b = FrontierBuilder::new(r1_step);
    b.add(region);
    b.finish("pentagon")
}

/// Pointwise maximum of the member frontiers. Infeasible members are
/// skipped.
pub fn union_frontier(
    regions: &[PentagonRegion],
    r1_step: f64,
    label: impl Into<String>,
) -> Result<Frontier> {
    check_step(r1_step)?;
    let mut b = FrontierBuilder::new(r1_step);
    for r in regions {
        b.add(r);
    }
    b.finish(label)
}

/// Largest amount by which `inner` rises above `outer` on the shared grid,
/// clamped at 0. Grid points past the end of `outer` compare against
/// height 0.
pub fn inclusion_gap(inner: &Frontier, outer: &Frontier) -> Result<f64> {
    let (a, b) = (inner.r1_step, outer.r1_step);
    if (a - b).abs() > 1e-12 * a.abs().max(b.abs()) {
        return Err(Error::GridMismatch(a, b));
    }
    Ok(inner
        .r2
        .iter()
        .enumerate()
        .map(|(k, &h)| h - outer.r2.get(k).copied().unwrap_or(0.0))
        .fold(0.0, f64::max))
}

/// Largest amount by which a chord midpoint rises above the frontier,
/// over all sample pairs whose midpoint is itself a sample. Positive values
/// mean the region is not convex.
pub fn convexity_defect(f: &Frontier) -> f64 {
    let n = f.r2.len();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in (i + 2..n).step_by(2) {
            let chord = 0.5 * (f.r2[i] + f.r2[j]);
            worst = worst.max(chord - f.r2[(i + j) / 2]);
        }
    }
    worst
}

/// Upper concave envelope (time-sharing closure) of a frontier, resampled
/// on the same grid.
pub fn convex_hull(f: &Frontier) -> Frontier {
    // Hull over the samples plus the exact corner points.
    let mut pts: Vec<(f64, f64)> = f.points().chain(f.vertices.iter().copied()).collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let mut hull: Vec<(f64, f64)> = Vec::new();
    for p in pts {
        while hull.len() >= 2 {
            let (o, a) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (a.0 - o.0) * (p.1 - o.1) - (a.1 - o.1) * (p.0 - o.0);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    // Drop the rising part before the highest point.
    let top = hull
        .iter()
        .enumerate()
        .fold(0, |best, (i, p)| if p.1 > hull[best].1 { i } else { best });
    let hull: Vec<(f64, f64)> = std::iter::once((0.0, hull[top].1))
        .chain(hull[top..].iter().copied())
        .collect();

    let r2 = (0..f.r2.len())
        .map(|k| {
            let x = f.r1(k);
            let seg = hull.windows(2).find(|w| x <= w[1].0);
            match seg {
                Some(w) if w[1].0 > w[0].0 => {
                    let t = (x - w[0].0) / (w[1].0 - w[0].0);
                    (w[0].1 + t * (w[1].1 - w[0].1)).max(f.r2[k])
                }
                Some(w) => w[1].1.max(f.r2[k]),
                None => f.r2[k],
            }
        })
        .collect();
    let mut vertices: Vec<(f64, f64)> = hull
        .into_iter()
        .filter(|p| p.0 > 0.0 || p.1 > 0.0)
        .collect();
    pareto_filter(&mut vertices);
    Frontier {
        label: format!("{}+hull", f.label),
        r1_step: f.r1_step,
        r2,
        vertices,
    }
}

/// Region families available to [`sweep_gaussian`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegionFamily {
    /// `G(α, β, λ1, λ2)`, four-parameter family.
    G,
    /// `G_suc(α, β)`.
    GSuc,
    /// `G_suc(α, 0)`.
    GSp1,
    /// `G_suc(α, 1)`.
    GSp2,
}

impl RegionFamily {
    pub const ALL: [RegionFamily; 4] = [
        RegionFamily::G,
        RegionFamily::GSuc,
        RegionFamily::GSp1,
        RegionFamily::GSp2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RegionFamily::G => "g",
            RegionFamily::GSuc => "g_suc",
            RegionFamily::GSp1 => "g_sp1",
            RegionFamily::GSp2 => "g_sp2",
        }
    }
}

impl fmt::Display for RegionFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RegionFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        RegionFamily::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| {
                invalid(
                    "region",
                    format!("unknown region `{s}` (g, g_suc, g_sp1, g_sp2)"),
                )
            })
    }
}

/// `steps` uniformly spaced values from `lo` to `hi` inclusive; a single
/// step means just `lo`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamRange {
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
}

impl ParamRange {
    pub fn new(lo: f64, hi: f64, steps: usize) -> Self {
        Self { lo, hi, steps }
    }

    pub fn unit(steps: usize) -> Self {
        Self::new(0.0, 1.0, steps)
    }

    pub fn point(v: f64) -> Self {
        Self::new(v, v, 1)
    }

    pub fn values(&self) -> Vec<f64> {
        if self.steps <= 1 {
            return vec![self.lo];
        }
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                if i + 1 == self.steps {
                    self.hi
                } else {
                    self.lo + (self.hi - self.lo) * i as f64 / last
                }
            })
            .collect()
    }

    fn validate(&self, name: &'static str, lo_bound: f64, hi_bound: f64) -> Result<()> {
        if self.steps == 0 {
            return Err(invalid(name, "steps must be at least 1"));
        }
        if !(self.lo <= self.hi) || self.lo < lo_bound || self.hi > hi_bound {
            return Err(invalid(
                name,
                format!(
                    "range [{}, {}] must be ordered and inside [{lo_bound}, {hi_bound}]",
                    self.lo, self.hi
                ),
            ));
        }
        Ok(())
    }
}

/// Range of a `λ` coefficient, expressed on the unit-variance `W` scale
/// (the coefficient of `W/√P1`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum LambdaRange {
    /// `[0, factor·η2(α)]`, re-derived for every `α`.
    Auto {
        factor: f64,
        steps: usize,
    },
    Fixed(ParamRange),
}

impl LambdaRange {
    pub fn auto(steps: usize) -> Self {
        LambdaRange::Auto {
            factor: DEFAULT_LAMBDA_FACTOR,
            steps,
        }
    }

    pub fn steps(&self) -> usize {
        match self {
            LambdaRange::Auto { steps, .. } => *steps,
            LambdaRange::Fixed(r) => r.steps,
        }
    }

    fn values(&self, eta2: f64) -> Vec<f64> {
        match self {
            LambdaRange::Auto { factor, steps } => {
                ParamRange::new(0.0, factor * eta2, *steps).values()
            }
            LambdaRange::Fixed(r) => r.values(),
        }
    }

    fn validate(&self, name: &'static str) -> Result<()> {
        match self {
            LambdaRange::Auto { factor, steps } => {
                if *steps == 0 {
                    return Err(invalid(name, "steps must be at least 1"));
                }
                if !(*factor >= 0.0) || !factor.is_finite() {
                    return Err(invalid(name, "factor must be finite and non-negative"));
                }
                Ok(())
            }
            LambdaRange::Fixed(r) => r.validate(name, 0.0, f64::INFINITY),
        }
    }
}

/// Parameter grid of a Gaussian sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepGrid {
    pub alpha: ParamRange,
    pub beta: ParamRange,
    pub lambda1: LambdaRange,
    pub lambda2: LambdaRange,
    /// Also evaluate the dirty-paper coefficients for every `(α, β)`:
    /// `λ2 = αβ̄P2·η2/(αβ̄P2 + 1)` and `λ1 = αβP2·η2/(αP2 + 1)`.
    pub dpc_anchors: bool,
    /// For the `G` family: also evaluate, at this many `α` steps, the members
    /// that reproduce the two corollary families, `(α, 0, 0, λ2*)` and
    /// `(α, 1, 0, 0)`. 0 disables them.
    pub corollary_alpha_steps: usize,
    pub r1_step: f64,
}

impl SweepGrid {
    /// Defaults: 41 points per parameter for `G`, 201 for the one- and
    /// two-parameter families.
    pub fn default_for(family: RegionFamily) -> Self {
        let (a, b, l) = match family {
            RegionFamily::G => (41, 41, 41),
            RegionFamily::GSuc => (201, 201, 1),
            RegionFamily::GSp1 | RegionFamily::GSp2 => (201, 1, 1),
        };
        Self {
            alpha: ParamRange::unit(a),
            beta: if b > 1 {
                ParamRange::unit(b)
            } else {
                ParamRange::point(0.0)
            },
            lambda1: LambdaRange::auto(l),
            lambda2: LambdaRange::auto(l),
            dpc_anchors: true,
            corollary_alpha_steps: if family == RegionFamily::G { 201 } else { 0 },
            r1_step: DEFAULT_R1_STEP,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.alpha.validate("alpha", 0.0, 1.0)?;
        self.beta.validate("beta", 0.0, 1.0)?;
        self.lambda1.validate("lambda1")?;
        self.lambda2.validate("lambda2")?;
        check_step(self.r1_step)
    }
}

fn push_unique(values: &mut Vec<f64>, v: f64) {
    if !values.contains(&v) {
        values.push(v);
    }
}

fn lambda_values(range: &LambdaRange, eta2: f64, anchor: Option<f64>) -> Vec<f64> {
    let mut vals = Vec::new();
    for v in range.values(eta2) {
        push_unique(&mut vals, v);
    }
    if let Some(a) = anchor {
        push_unique(&mut vals, a);
    }
    vals
}

/// Members of the full Gaussian family visited by a sweep.
pub fn g_tuples(
    ch: &ChannelParams,
    grid: &SweepGrid,
    alpha: f64,
    beta: f64,
) -> Vec<GaussianCoding> {
    let eta2 = ch.eta2(alpha);
    let p_u = alpha * beta * ch.p2;
    let p_v = alpha * (1.0 - beta) * ch.p2;
    let (a1, a2) = if grid.dpc_anchors {
        (
            Some(p_u * eta2 / (alpha * ch.p2 + 1.0)),
            Some(p_v * eta2 / (p_v + 1.0)),
        )
    } else {
        (None, None)
    };
    let s = ch.w_scale();
    let l1s = lambda_values(&grid.lambda1, eta2, a1);
    let l2s = lambda_values(&grid.lambda2, eta2, a2);
    let mut out = Vec::with_capacity(l1s.len() * l2s.len());
    for &l1 in &l1s {
        for &l2 in &l2s {
            out.push(GaussianCoding {
                alpha,
                beta,
                lambda1: l1 / s,
                lambda2: l2 / s,
            });
        }
    }
    out
}

/// Members of the `G` family equal to (or containing) the corollary regions
/// at each `α` of `alphas`.
pub fn corollary_members(ch: &ChannelParams, alphas: &[f64]) -> Vec<GaussianCoding> {
    let s = ch.w_scale();
    alphas
        .iter()
        .flat_map(|&alpha| {
            let p_v = alpha * ch.p2;
            let l2 = p_v * ch.eta2(alpha) / (p_v + 1.0);
            [
                GaussianCoding {
                    alpha,
                    beta: 0.0,
                    lambda1: 0.0,
                    lambda2: l2 / s,
                },
                GaussianCoding {
                    alpha,
                    beta: 1.0,
                    lambda1: 0.0,
                    lambda2: 0.0,
                },
            ]
        })
        .collect()
}

/// Union frontier of one region family over a parameter grid.
pub fn sweep_gaussian(
    ch: &ChannelParams,
    grid: &SweepGrid,
    which: RegionFamily,
) -> Result<Frontier> {
    ch.validate()?;
    grid.validate()?;
    let alphas = grid.alpha.values();
    let pairs: Vec<(f64, f64)> = match which {
        RegionFamily::G | RegionFamily::GSuc => {
            let betas = grid.beta.values();
            alphas
                .iter()
                .flat_map(|&a| betas.iter().map(move |&b| (a, b)))
                .collect()
        }
        RegionFamily::GSp1 | RegionFamily::GSp2 => alphas.iter().map(|&a| (a, 0.0)).collect(),
    };
    let step = grid.r1_step;
    let builder = pairs
        .par_iter()
        .try_fold(
            || FrontierBuilder::new(step),
            |mut b, &(alpha, beta)| -> Result<FrontierBuilder> {
                match which {
                    RegionFamily::G => {
                        for cp in g_tuples(ch, grid, alpha, beta) {
                            b.add(&region_g(ch, &cp));
                        }
                    }
                    RegionFamily::GSuc => b.add(&region_g_suc(ch, alpha, beta)?),
                    RegionFamily::GSp1 => b.add(&region_g_sp1(ch, alpha)?),
                    RegionFamily::GSp2 => b.add(&region_g_sp2(ch, alpha)?),
                }
                Ok(b)
            },
        )
        .try_reduce(|| FrontierBuilder::new(step), |a, b| Ok(a.merge(b)))?;
    let mut builder = builder;
    if which == RegionFamily::G && grid.corollary_alpha_steps > 0 {
        let alphas =
            ParamRange::new(grid.alpha.lo, grid.alpha.hi, grid.corollary_alpha_steps).values();
        for cp in corollary_members(ch, &alphas) {
            builder.add(&region_g(ch, &cp));
        }
    }
    builder.finish(which.name())
}
