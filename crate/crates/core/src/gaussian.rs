//! Gaussian IC-DMS in standard form:
//!
//! ```text
//! Y1 = X1 + √c21·X2 + Z1
//! Y2 = X2 + √c12·X1 + Z2,     Z1, Z2 ~ N(0, 1)
//! ```
//!
//! Sender 2 splits its power: a fraction `ᾱ` superposes onto sender 1's
//! codeword `W` (cooperation) and a fraction `α` carries two binned streams
//! `Ũ` (power `αβP2`) and `Ṽ` (power `αβ̄P2`). The auxiliaries are
//! `U = Ũ + λ1·W` and `V = Ṽ + λ2·W`.
//!
//! Covariances follow the convention `E{W²} = P1`, so `X1 = W`. When
//! `P1 = 0` the scale of `W` is taken as 1 instead; this only rescales
//! `λ1, λ2` and keeps the cooperative stream `√(ᾱP2)·W` meaningful.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::region::PentagonRegion;
use crate::FEASIBILITY_EPS;

/// `½·log2(2πe)`: entropy of a unit-variance Gaussian, in bits.
pub const XI: f64 = 2.047_095_585_180_641_6;

/// Determinants at or below this fraction of the diagonal product are
/// treated as singular.
pub const SINGULAR_RTOL: f64 = 1e-12;

pub type Mat3 = [[f64; 3]; 3];

fn gamma(x: f64) -> f64 {
    0.5 * x.log2()
}

/// Powers and normalized cross gains of the standard-form channel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelParams {
    pub p1: f64,
    pub p2: f64,
    pub c12: f64,
    pub c21: f64,
}

impl ChannelParams {
    pub fn new(p1: f64, p2: f64, c12: f64, c21: f64) -> Result<Self> {
        let ch = Self { p1, p2, c12, c21 };
        ch.validate()?;
        Ok(ch)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("p1", self.p1),
            ("p2", self.p2),
            ("c12", self.c12),
            ("c21", self.c21),
        ] {
            if !v.is_finite() || v < 0.0 {
                return Err(invalid(
                    name,
                    format!("must be finite and non-negative, got {v}"),
                ));
            }
        }
        Ok(())
    }

    /// Standard deviation of `W` in the covariance convention.
    pub fn w_scale(&self) -> f64 {
        if self.p1 > 0.0 {
            self.p1.sqrt()
        } else {
            1.0
        }
    }

    /// `η1 = √P1 + √(c21·ᾱ·P2)`: gain of `W` at receiver 1.
    pub fn eta1(&self, alpha: f64) -> f64 {
        self.p1.sqrt() + (self.c21 * (1.0 - alpha) * self.p2).sqrt()
    }

    /// `η2 = √(ᾱ·P2) + √(c12·P1)`: gain of `W` at receiver 2.
    pub fn eta2(&self, alpha: f64) -> f64 {
        ((1.0 - alpha) * self.p2).sqrt() + (self.c12 * self.p1).sqrt()
    }
}

/// One member `(α, β, λ1, λ2)` of the Gaussian input family.
///
/// For `G_suc` only `α` and `β` matter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianCoding {
    pub alpha: f64,
    pub beta: f64,
    pub lambda1: f64,
    pub lambda2: f64,
}

impl GaussianCoding {
    pub fn new(alpha: f64, beta: f64, lambda1: f64, lambda2: f64) -> Result<Self> {
        let cp = Self {
            alpha,
            beta,
            lambda1,
            lambda2,
        };
        cp.validate()?;
        Ok(cp)
    }

    pub fn validate(&self) -> Result<()> {
        check_unit("alpha", self.alpha)?;
        check_unit("beta", self.beta)?;
        for (name, v) in [("lambda1", self.lambda1), ("lambda2", self.lambda2)] {
            if !v.is_finite() || v < 0.0 {
                return Err(invalid(
                    name,
                    format!("must be finite and non-negative, got {v}"),
                ));
            }
        }
        Ok(())
    }

    pub fn alpha_bar(&self) -> f64 {
        1.0 - self.alpha
    }

    pub fn beta_bar(&self) -> f64 {
        1.0 - self.beta
    }
}

fn check_unit(name: &'static str, v: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&v) {
        return Err(invalid(name, format!("must lie in [0, 1], got {v}")));
    }
    Ok(())
}

/// Covariance of `(W, U, Y1)` and of `(U, V, Y2)`.
pub fn build_covariances(ch: &ChannelParams, cp: &GaussianCoding) -> (Mat3, Mat3) {
    let s = ch.w_scale();
    let s2 = s * s;
    let (l1, l2) = (cp.lambda1, cp.lambda2);
    let pu = cp.alpha * cp.beta * ch.p2;
    let pv = cp.alpha * cp.beta_bar() * ch.p2;
    let eta1 = ch.eta1(cp.alpha);
    let eta2 = ch.eta2(cp.alpha);
    let sq21 = ch.c21.sqrt();

    let m12 = l1 * s2;
    let m13 = eta1 * s;
    let m22 = pu + l1 * l1 * s2;
    let m23 = l1 * eta1 * s + sq21 * pu;
    let m33 = eta1 * eta1 + ch.c21 * cp.alpha * ch.p2 + 1.0;
    let wuy1 = [[s2, m12, m13], [m12, m22, m23], [m13, m23, m33]];

    let n12 = l1 * l2 * s2;
    let n13 = pu + l1 * eta2 * s;
    let n22 = pv + l2 * l2 * s2;
    let n23 = pv + l2 * eta2 * s;
    let n33 = cp.alpha * ch.p2 + eta2 * eta2 + 1.0;
    let uvy2 = [[m22, n12, n13], [n12, n22, n23], [n13, n23, n33]];

    (wuy1, uvy2)
}

/// Differential entropies (bits) of the Gaussian sub-vectors entering
/// `I_1 … I_7`.
///
/// Zero-variance coordinates (a point-mass `U` or `V`, which happens when
/// its stream power and `λ` are both zero) are removed from every block
/// before taking determinants. Their `−∞` contributions cancel in each
/// mutual information, so the `I` terms stay exact.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntropyTerms {
    /// h(W)
    pub h_a: f64,
    /// h(U, Y1)
    pub h_b: f64,
    /// h(W, U, Y1)
    pub h_c: f64,
    /// h(U, V)
    pub h_d: f64,
    /// h(Y2)
    pub h_e: f64,
    /// h(U, V, Y2)
    pub h_f: f64,
    /// h(W, U)
    pub h_g: f64,
    /// h(Y1)
    pub h_h: f64,
    /// h(V)
    pub h_i: f64,
    /// h(U, Y2)
    pub h_j: f64,
    /// h(U)
    pub h_k: f64,
    /// h(V, Y2)
    pub h_l: f64,
    pub eta1: f64,
    pub eta2: f64,
    pub xi: f64,
}

impl EntropyTerms {
    /// Term by name, `"h_a"` to `"h_l"`.
    pub fn get(&self, name: &str) -> Option<f64> {
        Some(match name {
            "h_a" => self.h_a,
            "h_b" => self.h_b,
            "h_c" => self.h_c,
            "h_d" => self.h_d,
            "h_e" => self.h_e,
            "h_f" => self.h_f,
            "h_g" => self.h_g,
            "h_h" => self.h_h,
            "h_i" => self.h_i,
            "h_j" => self.h_j,
            "h_k" => self.h_k,
            "h_l" => self.h_l,
            _ => return None,
        })
    }
}

/// Which rows of which matrix make up each entropy term.
#[derive(Debug, Clone, Copy)]
pub struct Block {
    pub name: &'static str,
    /// `true` for the `(W, U, Y1)` matrix, `false` for `(U, V, Y2)`.
    pub first: bool,
    pub idx: &'static [usize],
}

pub const BLOCKS: [Block; 12] = [
    Block {
        name: "h_a",
        first: true,
        idx: &[0],
    },
    Block {
        name: "h_b",
        first: true,
        idx: &[1, 2],
    },
    Block {
        name: "h_c",
        first: true,
        idx: &[0, 1, 2],
    },
    Block {
        name: "h_d",
        first: false,
        idx: &[0, 1],
    },
    Block {
        name: "h_e",
        first: false,
        idx: &[2],
    },
    Block {
        name: "h_f",
        first: false,
        idx: &[0, 1, 2],
    },
    Block {
        name: "h_g",
        first: true,
        idx: &[0, 1],
    },
    Block {
        name: "h_h",
        first: true,
        idx: &[2],
    },
    Block {
        name: "h_i",
        first: false,
        idx: &[1],
    },
    Block {
        name: "h_j",
        first: false,
        idx: &[0, 2],
    },
    Block {
        name: "h_k",
        first: false,
        idx: &[0],
    },
    Block {
        name: "h_l",
        first: false,
        idx: &[1, 2],
    },
];

/// Rows of each matrix that survive constant-coordinate removal.
fn live_rows(wuy1: &Mat3, uvy2: &Mat3) -> ([bool; 3], [bool; 3]) {
    let scale = wuy1[2][2].max(uvy2[2][2]).max(1.0);
    let is_const = |v: f64| v <= SINGULAR_RTOL * scale;
    let u_const = is_const(wuy1[1][1]);
    let v_const = is_const(uvy2[1][1]);
    ([true, !u_const, true], [!u_const, !v_const, true])
}

fn det(m: &Mat3, idx: &[usize]) -> f64 {
    let a = |i: usize, j: usize| m[idx[i]][idx[j]];
    match idx.len() {
        0 => 1.0,
        1 => a(0, 0),
        2 => a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0),
        _ => {
            a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1))
                - a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0))
                + a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0))
        }
    }
}

fn block_entropy(m: &Mat3, live: &[bool; 3], block: &Block) -> Result<f64> {
    let mut buf = [0usize; 3];
    let mut k = 0;
    for &i in block.idx {
        if live[i] {
            buf[k] = i;
            k += 1;
        }
    }
    let idx = &buf[..k];
    if idx.is_empty() {
        return Ok(0.0);
    }
    let d = det(m, idx);
    let diag: f64 = idx.iter().map(|&i| m[i][i]).product();
    if !(d > SINGULAR_RTOL * diag) {
        return Err(Error::Degenerate { term: block.name });
    }
    Ok(k as f64 * XI + gamma(d))
}

pub fn entropy_terms(ch: &ChannelParams, cp: &GaussianCoding) -> Result<EntropyTerms> {
    let (wuy1, uvy2) = build_covariances(ch, cp);
    entropy_terms_from(ch, cp, &wuy1, &uvy2)
}

fn entropy_terms_from(
    ch: &ChannelParams,
    cp: &GaussianCoding,
    wuy1: &Mat3,
    uvy2: &Mat3,
) -> Result<EntropyTerms> {
    let (live_m, live_n) = live_rows(wuy1, uvy2);
    let mut h = [0.0; 12];
    for (slot, block) in h.iter_mut().zip(BLOCKS.iter()) {
        *slot = if block.first {
            block_entropy(wuy1, &live_m, block)?
        } else {
            block_entropy(uvy2, &live_n, block)?
        };
    }
    Ok(EntropyTerms {
        h_a: h[0],
        h_b: h[1],
        h_c: h[2],
        h_d: h[3],
        h_e: h[4],
        h_f: h[5],
        h_g: h[6],
        h_h: h[7],
        h_i: h[8],
        h_j: h[9],
        h_k: h[10],
        h_l: h[11],
        eta1: ch.eta1(cp.alpha),
        eta2: ch.eta2(cp.alpha),
        xi: XI,
    })
}

/// The seven mutual-information combinations (bits).
///
/// `i1 = I(W;Y1,U)`, `i2 = I(U,V;Y2)`, `i3 = I(U;W)`, `i4 = I(V;W)`,
/// `i5 = I(U,W;Y1)`, `i6 = I(V;Y2,U)`, `i7 = I(U;Y2,V)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MiTerms {
    pub i1: f64,
    pub i2: f64,
    pub i3: f64,
    pub i4: f64,
    pub i5: f64,
    pub i6: f64,
    pub i7: f64,
}

/// `I(U;W)`-style cost of binning a stream of power `stream_power` that
/// carries `λ·W`. Zero when `λ = 0`; diverges when the stream is silent.
fn binning_cost(lambda: f64, w_var: f64, stream_power: f64, term: &'static str) -> Result<f64> {
    if lambda == 0.0 {
        return Ok(0.0);
    }
    if !(stream_power > 0.0) {
        return Err(Error::Degenerate { term });
    }
    Ok(gamma(1.0 + lambda * lambda * w_var / stream_power))
}

pub fn mi_terms(ch: &ChannelParams, cp: &GaussianCoding) -> Result<MiTerms> {
    let s2 = ch.w_scale().powi(2);
    let i3 = binning_cost(cp.lambda1, s2, cp.alpha * cp.beta * ch.p2, "i3")?;
    let i4 = binning_cost(cp.lambda2, s2, cp.alpha * cp.beta_bar() * ch.p2, "i4")?;
    let h = entropy_terms(ch, cp)?;
    Ok(MiTerms {
        i1: h.h_a + h.h_b - h.h_c,
        i2: h.h_d + h.h_e - h.h_f,
        i3,
        i4,
        i5: h.h_g + h.h_h - h.h_c,
        i6: h.h_i + h.h_j - h.h_f,
        i7: h.h_k + h.h_l - h.h_f,
    })
}

/// Pentagon region for one distribution of the full Gaussian family.
///
/// Degenerate points and points violating any of the four rate-splitting
/// constraints yield an infeasible (empty) region.
pub fn region_g(ch: &ChannelParams, cp: &GaussianCoding) -> PentagonRegion {
    match mi_terms(ch, cp) {
        Ok(mi) => region_from_mi(&mi),
        Err(_) => PentagonRegion::infeasible(),
    }
}

/// Applies the region inequalities to precomputed mutual informations.
pub fn region_from_mi(mi: &MiTerms) -> PentagonRegion {
    let eps = FEASIBILITY_EPS;
    let feasible = mi.i5 - mi.i3 >= -eps
        && mi.i7 - mi.i3 >= -eps
        && mi.i6 - mi.i4 >= -eps
        && mi.i2 - mi.i3 - mi.i4 >= -eps;
    if !feasible {
        return PentagonRegion::infeasible();
    }
    PentagonRegion::new(mi.i1, mi.i2 - mi.i3 - mi.i4, mi.i5 + mi.i6 - mi.i3 - mi.i4)
}

/// Successive-decoding region `G_suc(α, β)`; the sum bound is `r1 + r2`.
pub fn region_g_suc(ch: &ChannelParams, alpha: f64, beta: f64) -> Result<PentagonRegion> {
    check_unit("alpha", alpha)?;
    check_unit("beta", beta)?;
    let p_u = alpha * beta * ch.p2;
    let p_v = alpha * (1.0 - beta) * ch.p2;
    let eta1 = ch.eta1(alpha);
    let eta2 = ch.eta2(alpha);

    let r1 = gamma(1.0 + eta1 * eta1 / (ch.c21 * p_v + 1.0));
    let at_y1 = gamma(1.0 + ch.c21 * p_u / (eta1 * eta1 + ch.c21 * p_v + 1.0));
    let at_y2 = gamma(1.0 + p_u / (p_v + eta2 * eta2 + 1.0));
    let r2 = gamma(1.0 + p_v) + at_y1.min(at_y2);
    Ok(PentagonRegion::rectangle(r1, r2))
}

/// `G_suc(α, 0)`: all of sender 2's private power is dirty-paper coded.
pub fn region_g_sp1(ch: &ChannelParams, alpha: f64) -> Result<PentagonRegion> {
    region_g_suc(ch, alpha, 0.0)
}

/// `G_suc(α, 1)`: sender 2's private stream is decoded at both receivers.
pub fn region_g_sp2(ch: &ChannelParams, alpha: f64) -> Result<PentagonRegion> {
    region_g_suc(ch, alpha, 1.0)
}

/// Dirty-paper coefficient maximizing `I(V;Y2|U) − I(V;W)` and the
/// resulting rate `½·log2(1 + αβ̄P2)`.
///
/// `λ*` multiplies the unit-variance `W` of the successive-decoding
/// family, where `V = Ṽ + λ·W`.
pub fn dpc_lambda_star(ch: &ChannelParams, alpha: f64, beta: f64) -> Result<(f64, f64)> {
    check_unit("alpha", alpha)?;
    check_unit("beta", beta)?;
    let p_v = alpha * (1.0 - beta) * ch.p2;
    let lambda = p_v * ch.eta2(alpha) / (p_v + 1.0);
    Ok((lambda, gamma(1.0 + p_v)))
}

/// `I(V;Y2|U) − I(V;W)` as an explicit function of `λ`, with `W` of unit
/// variance and `U` known at receiver 2.
///
/// Returns `−∞` for `λ > 0` on a silent stream.
pub fn dpc_objective(ch: &ChannelParams, alpha: f64, beta: f64, lambda: f64) -> f64 {
    let p_v = alpha * (1.0 - beta) * ch.p2;
    let eta2 = ch.eta2(alpha);
    let var_y = p_v + eta2 * eta2 + 1.0;
    let var_v = p_v + lambda * lambda;
    let cov_vy = p_v + lambda * eta2;
    if var_v == 0.0 {
        // V is the constant 0.
        return 0.0;
    }
    if p_v == 0.0 {
        return f64::NEG_INFINITY;
    }
    let h_y = XI + gamma(var_y);
    let h_v = XI + gamma(var_v);
    let h_yv = 2.0 * XI + gamma(var_y * var_v - cov_vy * cov_vy);
    let i_vw = gamma(1.0 + lambda * lambda / p_v);
    h_y + h_v - h_yv - i_vw
}
