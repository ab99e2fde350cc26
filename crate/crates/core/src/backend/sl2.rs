// Copyright (c) The skeinlab Contributors
// SPDX-License-Identifier: Apache-2.0

//! Representation matrices of `sl2` and of its quantization with `q = exp(h/2)`.
//!
//! Basis of `V_n`: `v_0, ..., v_n` of weights `n, n-2, ..., -n` with
//! `E v_p = [n-p+1] v_{p-1}` and `F v_p = [p+1] v_{p+1}`. Quantum numbers
//! become ordinary integers in the undeformed case. Duals use the antipode:
//! `S(E) = -E K^-1`, `S(F) = -K F`, `S(H) = -H`, with `K = q^H`.

use num_traits::One;

use super::object::Gen;
use crate::linalg::Mat;
use crate::scalars::{q, qi, RingMode, ScalarSeries, Q};

/// Action of `E`, `F` and the weights on one generator or word.
#[derive(Clone, Debug)]
pub struct Rep {
    /// Raising operator.
    pub e: Mat,
    /// Lowering operator.
    pub f: Mat,
    /// Weight of every basis vector.
    pub weights: Vec<i64>,
}

/// `q^m = exp(m h / 2)`.
pub fn q_pow(mode: RingMode, m: i64) -> ScalarSeries {
    ScalarSeries::exp_param(mode, &q(m, 2))
}

/// Quantum integer `[n] = q^{n-1} + q^{n-3} + ... + q^{1-n}`.
pub fn q_int(mode: RingMode, n: i64) -> ScalarSeries {
    let mut s = ScalarSeries::zero(mode);
    for j in 0..n {
        s = s.add(&q_pow(mode, n - 1 - 2 * j)).expect("same mode");
    }
    s
}

/// Quantum factorial `[n]!`.
pub fn q_factorial(mode: RingMode, n: i64) -> ScalarSeries {
    (1..=n).fold(ScalarSeries::one(mode), |acc, k| acc.mul(&q_int(mode, k)).expect("same mode"))
}

/// Classical matrices of `e`, `f` and the weights of `h` on a generator.
pub fn classical_rep(g: Gen, mode: RingMode) -> Rep {
    let n = g.label as i64;
    let d = g.dim();
    let mut e = Mat::zeros(mode, d, d);
    let mut f = Mat::zeros(mode, d, d);
    for p in 0..d {
        if p > 0 {
            e.set(p - 1, p, &ScalarSeries::constant(mode, qi(n - p as i64 + 1)));
        }
        if p + 1 < d {
            f.set(p + 1, p, &ScalarSeries::constant(mode, qi(p as i64 + 1)));
        }
    }
    let weights: Vec<i64> = (0..d as i64).map(|p| n - 2 * p).collect();
    if g.dual {
        let m1 = -Q::one();
        Rep { e: e.transpose().scale_q(&m1), f: f.transpose().scale_q(&m1), weights: weights.iter().map(|w| -w).collect() }
    } else {
        Rep { e, f, weights }
    }
}

/// Matrices of `E`, `F` and the weights on a generator of `U_h(sl2)`.
pub fn quantum_rep(g: Gen, mode: RingMode) -> Rep {
    let n = g.label as i64;
    let d = g.dim();
    let mut e = Mat::zeros(mode, d, d);
    let mut f = Mat::zeros(mode, d, d);
    for p in 0..d {
        if p > 0 {
            e.set(p - 1, p, &q_int(mode, n - p as i64 + 1));
        }
        if p + 1 < d {
            f.set(p + 1, p, &q_int(mode, p as i64 + 1));
        }
    }
    let weights: Vec<i64> = (0..d as i64).map(|p| n - 2 * p).collect();
    if !g.dual {
        return Rep { e, f, weights };
    }
    let k = k_matrix(mode, &weights, 1);
    let kinv = k_matrix(mode, &weights, -1);
    let m1 = -Q::one();
    let se = e.mul(&kinv).expect("shape").scale_q(&m1);
    let sf = k.mul(&f).expect("shape").scale_q(&m1);
    Rep { e: se.transpose(), f: sf.transpose(), weights: weights.iter().map(|w| -w).collect() }
}

/// Diagonal matrix `K^s = q^{s H}` for the given weights.
pub fn k_matrix(mode: RingMode, weights: &[i64], s: i64) -> Mat {
    let diag: Vec<ScalarSeries> = weights.iter().map(|&w| q_pow(mode, s * w)).collect();
    Mat::diagonal(mode, &diag)
}

/// Diagonal matrix of `H`.
pub fn h_matrix(mode: RingMode, weights: &[i64]) -> Mat {
    let diag: Vec<ScalarSeries> = weights.iter().map(|&w| ScalarSeries::constant(mode, qi(w))).collect();
    Mat::diagonal(mode, &diag)
}

/// Casimir value of `V_n` in the trace-form normalization: `n(n+2)/2`.
pub fn casimir_value(n: u32) -> Q {
    let n = n as i64;
    q(n * (n + 2), 2)
}

/// Whether every entry is an integer multiple of the identity pattern.
pub fn is_scalar_matrix(m: &Mat) -> Option<ScalarSeries> {
    if m.rows() != m.cols() || m.rows() == 0 {
        return None;
    }
    let s = m.get(0, 0);
    let expect = Mat::identity(m.mode(), m.rows()).scale(&s).ok()?;
    (expect == *m).then_some(s)
}
