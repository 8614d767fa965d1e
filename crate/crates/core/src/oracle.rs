//! Independent verification paths.
//!
//! Nothing here calls into [`crate::gaussian`] or [`crate::discrete`]'s
//! evaluation code: the Monte Carlo entropy factorizes its covariance with
//! nalgebra's Cholesky instead of cofactor determinants, and the brute MI
//! walks the raw joint cells with its own index arithmetic.
//!
//! Random draws use ChaCha20 (`rand_chacha::ChaCha20Rng`). Sampling is split
//! into [`MC_SHARDS`] shards, shard `k` using stream `k` of the seed, so the
//! estimate does not depend on the thread count.

use std::collections::HashMap;

use nalgebra::DVector;

/// Covariance matrices passed to [`mc_gaussian_entropy`].
pub use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::discrete::{JointPmf, Var};
use crate::error::{invalid, Error, Result};

pub const MC_SHARDS: u64 = 16;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub value_bits: f64,
    pub std_error_bits: f64,
    pub sample_count: u64,
    pub seed: u64,
}

impl McEstimate {
    /// `|value − target| ≤ k·std_error`.
    pub fn agrees_with(&self, target: f64, k: f64) -> bool {
        (self.value_bits - target).abs() <= k * self.std_error_bits
    }
}

/// Monte Carlo differential entropy (bits) of `N(0, cov)`: the sample mean
/// of `−log2 p(x)` over `n` draws.
pub fn mc_gaussian_entropy(cov: &DMatrix<f64>, n: u64, seed: u64) -> Result<McEstimate> {
    if n == 0 {
        return Err(invalid("n", "sample count must be positive"));
    }
    let k = cov.nrows();
    if k == 0 || cov.ncols() != k {
        return Err(Error::NotPositiveDefinite);
    }
    let scale = cov.amax().max(f64::MIN_POSITIVE);
    if (cov - cov.transpose()).amax() > 1e-12 * scale {
        return Err(Error::NotPositiveDefinite);
    }
    let chol = cov.clone().cholesky().ok_or(Error::NotPositiveDefinite)?;
    let l = chol.l();
    let log2_det: f64 = l.diagonal().iter().map(|d| 2.0 * d.log2()).sum();
    let log2_e = std::f64::consts::LOG2_E;
    let offset = 0.5 * k as f64 * (2.0 * std::f64::consts::PI).log2() + 0.5 * log2_det;

    let shards = MC_SHARDS.min(n);
    let partial: Vec<(f64, f64, u64)> = (0..shards)
        .into_par_iter()
        .map(|shard| {
            let count = n / shards + u64::from(shard < n % shards);
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            rng.set_stream(shard);
            let mut z = DVector::<f64>::zeros(k);
            let (mut sum, mut sum_sq) = (0.0, 0.0);
            for _ in 0..count {
                for zi in z.iter_mut() {
                    *zi = StandardNormal.sample(&mut rng);
                }
                let x = &l * &z;
                // Mahalanobis form through the factorization, not through z.
                let y = l
                    .solve_lower_triangular(&x)
                    .expect("Cholesky factor has a positive diagonal");
                let nll = offset + 0.5 * y.norm_squared() * log2_e;
                sum += nll;
                sum_sq += nll * nll;
            }
            (sum, sum_sq, count)
        })
        .collect();

    let (sum, sum_sq) = partial
        .iter()
        .fold((0.0, 0.0), |(s, q), &(a, b, _)| (s + a, q + b));
    let nf = n as f64;
    let mean = sum / nf;
    let var = if n > 1 {
        ((sum_sq - nf * mean * mean) / (nf - 1.0)).max(0.0)
    } else {
        0.0
    };
    Ok(McEstimate {
        value_bits: mean,
        std_error_bits: (var / nf).sqrt(),
        sample_count: n,
        seed,
    })
}

/// Argmax of `objective` over `steps` uniform points of `[lo, hi]`.
/// Ties go to the smallest argument.
pub fn grid_maximize(
    objective: impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    steps: usize,
) -> Result<(f64, f64)> {
    if !(lo < hi) {
        return Err(invalid("lo", format!("need lo < hi, got [{lo}, {hi}]")));
    }
    if steps < 2 {
        return Err(invalid("steps", "need at least 2 grid points"));
    }
    let mut best: Option<(f64, f64)> = None;
    for i in 0..steps {
        let x = lo + (hi - lo) * i as f64 / (steps - 1) as f64;
        let y = objective(x);
        if !y.is_finite() {
            return Err(Error::NonFiniteObjective(x));
        }
        if best.is_none_or(|(_, b)| y > b) {
            best = Some((x, y));
        }
    }
    Ok(best.expect("steps >= 2"))
}

/// `I(left; right | given)` by a direct pass over every joint cell.
pub fn brute_joint_mi(j: &JointPmf, left: &[Var], right: &[Var], given: &[Var]) -> Result<f64> {
    let axes = j.axes();
    let find = |v: Var| {
        axes.iter()
            .position(|&a| a == v)
            .ok_or(Error::UnknownAxis(v))
    };
    let pick = |vs: &[Var]| vs.iter().map(|&v| find(v)).collect::<Result<Vec<usize>>>();
    let (li, ri, gi) = (pick(left)?, pick(right)?, pick(given)?);
    if li.is_empty() || ri.is_empty() {
        return Err(Error::Axis("empty variable set".into()));
    }
    let mut all: Vec<usize> = li.iter().chain(&ri).chain(&gi).copied().collect();
    let before = all.len();
    all.sort_unstable();
    all.dedup();
    if all.len() != before {
        return Err(Error::Axis("variable sets overlap".into()));
    }

    let shape = j.shape();
    let cells = j.as_slice();
    let mut index = vec![0usize; shape.len()];
    let key = |index: &[usize], sel: &[&[usize]]| -> Vec<usize> {
        sel.iter()
            .flat_map(|s| s.iter().map(|&a| index[a]))
            .collect()
    };

    let mut p_lrg: HashMap<Vec<usize>, f64> = HashMap::new();
    let mut p_lg: HashMap<Vec<usize>, f64> = HashMap::new();
    let mut p_rg: HashMap<Vec<usize>, f64> = HashMap::new();
    let mut p_g: HashMap<Vec<usize>, f64> = HashMap::new();
    for &p in cells {
        if p > 0.0 {
            *p_lrg.entry(key(&index, &[&li, &ri, &gi])).or_default() += p;
            *p_lg.entry(key(&index, &[&li, &gi])).or_default() += p;
            *p_rg.entry(key(&index, &[&ri, &gi])).or_default() += p;
            *p_g.entry(key(&index, &[&gi])).or_default() += p;
        }
        // odometer increment, last axis fastest
        for a in (0..shape.len()).rev() {
            index[a] += 1;
            if index[a] < shape[a] {
                break;
            }
            index[a] = 0;
        }
    }

    let (nl, nr) = (li.len(), ri.len());
    let mut total = 0.0;
    for (k, &p) in &p_lrg {
        let (l, rest) = k.split_at(nl);
        let (r, g) = rest.split_at(nr);
        let lg: Vec<usize> = l.iter().chain(g).copied().collect();
        let rg: Vec<usize> = r.iter().chain(g).copied().collect();
        total += p * (p * p_g[g] / (p_lg[&lg] * p_rg[&rg])).log2();
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::arr2;

    #[test]
    fn unit_gaussian_entropy() {
        let est = mc_gaussian_entropy(&DMatrix::identity(1, 1), 1_000_000, 7).unwrap();
        let xi = 0.5 * (2.0 * std::f64::consts::PI * std::f64::consts::E).log2();
        assert!(est.agrees_with(xi, 3.0), "{est:?} vs {xi}");
        assert!((est.value_bits - 2.0471).abs() < 0.01);
    }

    #[test]
    fn quadrupled_variance_adds_one_bit() {
        let a = mc_gaussian_entropy(&DMatrix::identity(1, 1), 200_000, 1).unwrap();
        let b = mc_gaussian_entropy(&(DMatrix::identity(1, 1) * 4.0), 200_000, 1).unwrap();
        // Same seed: the samples are scaled copies, so the shift is exact.
        assert!((b.value_bits - a.value_bits - 1.0).abs() < 1e-9);
    }

    #[test]
    fn std_error_scales_as_inverse_sqrt_n() {
        let cov = DMatrix::from_row_slice(2, 2, &[2.0, 0.5, 0.5, 1.0]);
        let small = mc_gaussian_entropy(&cov, 100_000, 11).unwrap();
        let large = mc_gaussian_entropy(&cov, 400_000, 11).unwrap();
        let ratio = small.std_error_bits / large.std_error_bits;
        assert!((ratio - 2.0).abs() < 0.1, "ratio {ratio}");
    }

    #[test]
    fn reproducible_for_fixed_seed() {
        let cov = DMatrix::from_row_slice(2, 2, &[2.0, 0.5, 0.5, 1.0]);
        let a = mc_gaussian_entropy(&cov, 10_000, 5).unwrap();
        let b = mc_gaussian_entropy(&cov, 10_000, 5).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_indefinite_covariance() {
        let cov = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0]);
        assert_eq!(
            mc_gaussian_entropy(&cov, 1000, 0),
            Err(Error::NotPositiveDefinite)
        );
        let asym = DMatrix::from_row_slice(2, 2, &[1.0, 0.2, 0.0, 1.0]);
        assert_eq!(
            mc_gaussian_entropy(&asym, 1000, 0),
            Err(Error::NotPositiveDefinite)
        );
    }

    #[test]
    fn grid_maximize_parabola() {
        let (x, y) = grid_maximize(|x| -(x - 1.0) * (x - 1.0), 0.0, 2.0, 201).unwrap();
        assert!((x - 1.0).abs() < 1e-12);
        assert!(y.abs() < 1e-20);
    }

    #[test]
    fn grid_maximize_ties_go_left() {
        assert_eq!(grid_maximize(|_| 3.0, -1.0, 4.0, 11).unwrap(), (-1.0, 3.0));
    }

    #[test]
    fn grid_maximize_errors() {
        assert!(matches!(
            grid_maximize(|x| 1.0 / x, 0.0, 1.0, 5),
            Err(Error::NonFiniteObjective(x)) if x == 0.0
        ));
        assert!(grid_maximize(|x| x, 1.0, 1.0, 5).is_err());
        assert!(grid_maximize(|x| x, 0.0, 1.0, 1).is_err());
    }

    fn pair(table: [[f64; 2]; 2]) -> JointPmf {
        JointPmf::new(vec![Var::X1, Var::Y1], arr2(&table).into_dyn()).unwrap()
    }

    #[test]
    fn brute_mi_reference_values() {
        let corr = pair([[0.5, 0.0], [0.0, 0.5]]);
        assert!((brute_joint_mi(&corr, &[Var::X1], &[Var::Y1], &[]).unwrap() - 1.0).abs() < 1e-15);
        let indep = pair([[0.06, 0.14], [0.24, 0.56]]);
        assert!(
            brute_joint_mi(&indep, &[Var::X1], &[Var::Y1], &[])
                .unwrap()
                .abs()
                < 1e-15
        );
        // 1 - H_b(0.11): H_b(0.11) = 0.49991...
        let e = 0.11;
        let bsc = pair([[0.5 * (1.0 - e), 0.5 * e], [0.5 * e, 0.5 * (1.0 - e)]]);
        let hb = -(e * e.log2() + (1.0 - e) * (1.0 - e).log2());
        let mi = brute_joint_mi(&bsc, &[Var::X1], &[Var::Y1], &[]).unwrap();
        assert!((mi - (1.0 - hb)).abs() < 1e-14);
        assert!((mi - 0.5001).abs() < 1e-4);
    }

    #[test]
    fn brute_mi_axis_errors() {
        let j = pair([[0.5, 0.0], [0.0, 0.5]]);
        assert!(matches!(
            brute_joint_mi(&j, &[Var::W], &[Var::Y1], &[]),
            Err(Error::UnknownAxis(Var::W))
        ));
        assert!(brute_joint_mi(&j, &[Var::X1], &[Var::Y1], &[Var::X1]).is_err());
    }
}
