#![allow(dead_code)]

use icdms_core::{ChannelParams, GaussianCoding};
use nalgebra::{DMatrix, SMatrix};

/// Order of the rows of [`structural_covariance`].
pub const W: usize = 0;
pub const U: usize = 1;
pub const V: usize = 2;
pub const Y1: usize = 3;
pub const Y2: usize = 4;

/// Covariance of `(W, U, V, Y1, Y2)` obtained by writing every variable as
/// a linear map of five independent standard normals
/// `(g_w, g_ũ, g_ṽ, z1, z2)`:
///
/// ```text
/// W  = s·g_w                  X1 = W
/// Ũ  = √(αβP2)·g_ũ            Ṽ = √(αβ̄P2)·g_ṽ
/// X2 = √(ᾱP2)·g_w + Ũ + Ṽ
/// U  = Ũ + λ1·W               V = Ṽ + λ2·W
/// Y1 = X1 + √c21·X2 + z1      Y2 = X2 + √c12·X1 + z2
/// ```
///
/// with `s = √P1`. Requires `P1 > 0`.
pub fn structural_covariance(ch: &ChannelParams, cp: &GaussianCoding) -> SMatrix<f64, 5, 5> {
    assert!(ch.p1 > 0.0);
    let s = ch.p1.sqrt();
    let a_u = (cp.alpha * cp.beta * ch.p2).sqrt();
    let a_v = (cp.alpha * (1.0 - cp.beta) * ch.p2).sqrt();
    let a_c = ((1.0 - cp.alpha) * ch.p2).sqrt();

    // columns: g_w, g_u, g_v, z1, z2
    let w = [s, 0.0, 0.0, 0.0, 0.0];
    let x1 = w;
    let u_t = [0.0, a_u, 0.0, 0.0, 0.0];
    let v_t = [0.0, 0.0, a_v, 0.0, 0.0];
    let x2 = [a_c, a_u, a_v, 0.0, 0.0];
    let lin = |terms: &[(f64, [f64; 5])], extra: [f64; 5]| {
        let mut out = extra;
        for (c, row) in terms {
            for k in 0..5 {
                out[k] += c * row[k];
            }
        }
        out
    };
    let zero = [0.0; 5];
    let u = lin(&[(1.0, u_t), (cp.lambda1, w)], zero);
    let v = lin(&[(1.0, v_t), (cp.lambda2, w)], zero);
    let y1 = lin(&[(1.0, x1), (ch.c21.sqrt(), x2)], [0.0, 0.0, 0.0, 1.0, 0.0]);
    let y2 = lin(&[(1.0, x2), (ch.c12.sqrt(), x1)], [0.0, 0.0, 0.0, 0.0, 1.0]);

    let rows = [w, u, v, y1, y2];
    let a = SMatrix::<f64, 5, 5>::from_fn(|i, k| rows[i][k]);
    a * a.transpose()
}

pub fn sub_block(cov: &SMatrix<f64, 5, 5>, idx: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(idx.len(), idx.len(), |i, j| cov[(idx[i], idx[j])])
}

/// Variables of every closed-form entropy term, by name.
pub const ENTROPY_BLOCKS: [(&str, &[usize]); 12] = [
    ("h_a", &[W]),
    ("h_b", &[U, Y1]),
    ("h_c", &[W, U, Y1]),
    ("h_d", &[U, V]),
    ("h_e", &[Y2]),
    ("h_f", &[U, V, Y2]),
    ("h_g", &[W, U]),
    ("h_h", &[Y1]),
    ("h_i", &[V]),
    ("h_j", &[U, Y2]),
    ("h_k", &[U]),
    ("h_l", &[V, Y2]),
];

pub fn term(h: &icdms_core::EntropyTerms, name: &str) -> f64 {
    match name {
        "h_a" => h.h_a,
        "h_b" => h.h_b,
        "h_c" => h.h_c,
        "h_d" => h.h_d,
        "h_e" => h.h_e,
        "h_f" => h.h_f,
        "h_g" => h.h_g,
        "h_h" => h.h_h,
        "h_i" => h.h_i,
        "h_j" => h.h_j,
        "h_k" => h.h_k,
        "h_l" => h.h_l,
        _ => panic!("unknown term {name}"),
    }
}

/// `½·log2(x)`.
pub fn half_log2(x: f64) -> f64 {
    0.5 * x.log2()
}
