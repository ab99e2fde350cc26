// Copyright (c) The skeinlab Contributors
// SPDX-License-Identifier: Apache-2.0

//! Classical holonomy functions on copies of `SL2`.
//!
//! Copy `i` carries variables `a_i, b_i, c_i, d_i` for the matrix
//! `[[a, b], [c, d]]`. Polynomials are kept in the normal form modulo
//! `a d - b c - 1`, obtained by rewriting `a d -> b c + 1` until no monomial
//! contains both `a_i` and `d_i`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::backend::word_dim;
use crate::error::{Error, Result};
use crate::linalg::unflatten;
use crate::scalars::{q_to_string, qi, RingMode, Q};
use crate::skein::{boundary_word, SkeinElement};
use crate::surface::SurfacePattern;

/// Exponent vector: four entries per copy, in the order `a, b, c, d`.
type Monomial = Vec<u32>;

/// Polynomial in the entries of `copies` matrices, reduced modulo the determinant relations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HolonomyFunction {
    copies: usize,
    terms: BTreeMap<Monomial, Q>,
}

impl HolonomyFunction {
    /// Zero function.
    pub fn zero(copies: usize) -> Self {
        HolonomyFunction { copies, terms: BTreeMap::new() }
    }

    /// Constant function.
    pub fn constant(copies: usize, c: Q) -> Self {
        let mut f = HolonomyFunction::zero(copies);
        f.add_monomial(vec![0; 4 * copies], c);
        f
    }

    /// Entry `(row, col)` of copy `i`.
    pub fn entry(copies: usize, i: usize, row: usize, col: usize) -> Self {
        let mut m = vec![0; 4 * copies];
        m[4 * i + 2 * row + col] = 1;
        let mut f = HolonomyFunction::zero(copies);
        f.add_monomial(m, Q::one());
        f
    }

    /// Number of matrix copies.
    pub fn copies(&self) -> usize {
        self.copies
    }

    /// Monomials with their coefficients.
    pub fn terms(&self) -> &BTreeMap<Vec<u32>, Q> {
        &self.terms
    }

    /// Whether the function vanishes identically.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_monomial(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        let sum = self.terms.remove(&m).unwrap_or_else(Q::zero) + c;
        if !sum.is_zero() {
            self.terms.insert(m, sum);
        }
    }

    /// Add a reduced monomial times a coefficient.
    fn add_reduced(&mut self, m: Monomial, c: Q) {
        let hit = (0..self.copies).find(|&i| m[4 * i] > 0 && m[4 * i + 3] > 0);
        match hit {
            None => self.add_monomial(m, c),
            Some(i) => {
                let mut rest = m;
                rest[4 * i] -= 1;
                rest[4 * i + 3] -= 1;
                let mut bc = rest.clone();
                bc[4 * i + 1] += 1;
                bc[4 * i + 2] += 1;
                self.add_reduced(bc, c.clone());
                self.add_reduced(rest, c);
            }
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.copies != other.copies {
            return Err(Error::Algebra(format!("functions on {} and {} copies", self.copies, other.copies)));
        }
        Ok(())
    }

    /// Sum.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_monomial(m.clone(), c.clone());
        }
        Ok(out)
    }

    /// Difference.
    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-Q::one()))
    }

    /// Scalar multiple.
    pub fn scale(&self, c: &Q) -> Self {
        let mut out = HolonomyFunction::zero(self.copies);
        for (m, v) in &self.terms {
            out.add_monomial(m.clone(), v * c);
        }
        out
    }

    /// Product, reduced.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = HolonomyFunction::zero(self.copies);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m: Monomial = m1.iter().zip(m2).map(|(x, y)| x + y).collect();
                out.add_reduced(m, c1 * c2);
            }
        }
        Ok(out)
    }

    /// Evaluate at rational matrices, one `[a, b, c, d]` per copy.
    pub fn evaluate(&self, point: &[[Q; 4]]) -> Result<Q> {
        if point.len() != self.copies {
            return Err(Error::Shape(format!("{} matrices for {} copies", point.len(), self.copies)));
        }
        let mut total = Q::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (k, &e) in m.iter().enumerate() {
                for _ in 0..e {
                    v *= &point[k / 4][k % 4];
                }
            }
            total += v;
        }
        Ok(total)
    }

    /// JSON form: a list of `{"coeff", "monomial"}` records.
    pub fn to_json(&self) -> Value {
        Value::Array(self.terms.iter().map(|(m, c)| json!({"coeff": q_to_string(c), "monomial": m})).collect())
    }
}

impl fmt::Display for HolonomyFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let names = ['a', 'b', 'c', 'd'];
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let vars: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(k, &e)| {
                    let v = format!("{}{}", names[k % 4], k / 4);
                    if e == 1 { v } else { format!("{v}^{e}") }
                })
                .collect();
            if vars.is_empty() {
                write!(f, "{}", q_to_string(c))?;
            } else if c.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{}*{}", q_to_string(c), vars.join("*"))?;
            }
        }
        Ok(())
    }
}

fn binom(n: u32, k: u32) -> Q {
    let mut r = Q::one();
    for i in 0..k {
        r = r * qi((n - i) as i64) / qi((i + 1) as i64);
    }
    r
}

/// Matrix of `g` on `V_n` in the weight basis, as polynomials in copy `i`.
///
/// `V_n` is realized in degree `n` polynomials with `v_p = C(n,p) x^{n-p} y^p`,
/// where `g x = a x + c y` and `g y = b x + d y`.
pub fn rho(n: u32, copies: usize, i: usize) -> Vec<Vec<HolonomyFunction>> {
    let (a, b, c, d) = (
        HolonomyFunction::entry(copies, i, 0, 0),
        HolonomyFunction::entry(copies, i, 0, 1),
        HolonomyFunction::entry(copies, i, 1, 0),
        HolonomyFunction::entry(copies, i, 1, 1),
    );
    let one = HolonomyFunction::constant(copies, Q::one());
    let pow = |x: &HolonomyFunction, k: u32| (0..k).fold(one.clone(), |acc, _| acc.mul(x).expect("same copies"));
    let d1 = n as usize + 1;
    let mut out = vec![vec![HolonomyFunction::zero(copies); d1]; d1];
    for p in 0..=n {
        // (a x + c y)^{n-p} (b x + d y)^p, collecting the power of y.
        for s in 0..=(n - p) {
            for t in 0..=p {
                let q = (s + t) as usize;
                let coef = binom(n - p, s) * binom(p, t) * binom(n, p) / binom(n, q as u32);
                let mono = pow(&a, n - p - s).mul(&pow(&c, s)).and_then(|m| m.mul(&pow(&b, p - t))).and_then(|m| m.mul(&pow(&d, t))).expect("same copies");
                out[q][p as usize] = out[q][p as usize].add(&mono.scale(&coef)).expect("same copies");
            }
        }
    }
    out
}

/// Classical holonomy functional: contract each handle's start and end
/// indices with the matrix of its label on that handle's copy of `SL2`.
/// Returns one function per argument basis vector.
pub fn holonomy_evaluate(s: &SkeinElement) -> Result<Vec<HolonomyFunction>> {
    if s.mode() != RingMode::Classical {
        return Err(Error::Mode("holonomy functions are defined for classical elements only".into()));
    }
    let p: &SurfacePattern = s.pattern();
    let n = p.handles().len();
    let mut out = vec![HolonomyFunction::zero(n); s.arg_dim()];
    let ends = crate::skein::end_index(p);
    for (labels, core) in s.terms() {
        let word = boundary_word(p, labels);
        let dims: Vec<usize> = word.iter().map(|g| g.dim()).collect();
        debug_assert_eq!(word_dim(&word), core.rows());
        let rhos: Vec<Vec<Vec<HolonomyFunction>>> = (0..n).map(|h| rho(labels[h], n, h)).collect();
        for r in 0..core.rows() {
            let digits = unflatten(r, &dims);
            let mut weight: Option<HolonomyFunction> = None;
            for (h, e) in ends.iter().enumerate() {
                let f = &rhos[h][digits[e[1]]][digits[e[0]]];
                weight = Some(match weight {
                    None => f.clone(),
                    Some(w) => w.mul(f)?,
                });
                if weight.as_ref().is_some_and(HolonomyFunction::is_zero) {
                    break;
                }
            }
            let weight = weight.unwrap_or_else(|| HolonomyFunction::constant(n, Q::one()));
            if weight.is_zero() {
                continue;
            }
            for (col, f) in out.iter_mut().enumerate() {
                let c = core.get(r, col).part0();
                if !c.is_zero() {
                    *f = f.add(&weight.scale(&c))?;
                }
            }
        }
    }
    Ok(out)
}
