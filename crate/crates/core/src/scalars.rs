// Copyright (c) The skeinlab Contributors
// SPDX-License-Identifier: Apache-2.0

//! Truncated deformation rings `Q`, `Q[eps]/(eps^2)` and `Q[h]/(h^N)`.
//!
//! A [`ScalarSeries`] stores one exact rational per power of the formal
//! parameter below the truncation order. [`FreeElement`] is a coefficient
//! vector in a free module over the same ring and carries the
//! `part0` / `part1` extraction maps.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Exact rational numbers.
pub type Q = BigRational;

/// Largest supported truncation order for `Hbar` mode.
pub const MAX_HBAR_ORDER: u8 = 8;

/// Default truncation order for `Hbar` mode.
pub const DEFAULT_HBAR_ORDER: u8 = 3;

/// Build a rational from a numerator and denominator.
pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Build an integral rational.
pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Format a rational as a reduced `p/q` string (`p` when integral).
pub fn q_to_string(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parse `p`, `p/q` or `-p/q`.
pub fn q_from_str(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Q::new(n, d))
        }
        None => Ok(Q::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// The coefficient ring of all morphism spaces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RingMode {
    /// Undeformed rationals.
    Classical,
    /// Dual numbers `Q[eps]/(eps^2)`.
    Epsilon,
    /// Truncated power series `Q[h]/(h^N)`.
    Hbar(u8),
}

impl RingMode {
    /// Checked constructor for `Hbar(n)`.
    pub fn hbar(n: u8) -> Result<Self> {
        if n == 0 || n > MAX_HBAR_ORDER {
            return Err(Error::Mode(format!("hbar order {n} outside 1..={MAX_HBAR_ORDER}")));
        }
        Ok(RingMode::Hbar(n))
    }

    /// Number of stored coefficients.
    pub fn order(self) -> usize {
        match self {
            RingMode::Classical => 1,
            RingMode::Epsilon => 2,
            RingMode::Hbar(n) => n as usize,
        }
    }

    /// Serialized mode name.
    pub fn name(self) -> &'static str {
        match self {
            RingMode::Classical => "classical",
            RingMode::Epsilon => "epsilon",
            RingMode::Hbar(_) => "hbar",
        }
    }

    /// Parse a mode from its name and order.
    pub fn from_name(name: &str, order: usize) -> Result<Self> {
        match (name, order) {
            ("classical", 1) => Ok(RingMode::Classical),
            ("epsilon", 2) => Ok(RingMode::Epsilon),
            ("hbar", n) if n <= MAX_HBAR_ORDER as usize => RingMode::hbar(n as u8),
            _ => Err(Error::Parse(format!("bad ring mode {name:?} of order {order}"))),
        }
    }

    /// Whether a ring homomorphism `self -> target` is provided.
    ///
    /// Truncations `h^N -> h^M` (M <= N), `h -> eps` and every projection to
    /// `Classical` are homomorphisms, as is the constant embedding of
    /// `Classical`.
    pub fn converts_to(self, target: RingMode) -> bool {
        use RingMode::*;
        match (self, target) {
            (a, b) if a == b => true,
            (_, Classical) | (Classical, _) => true,
            (Hbar(n), Epsilon) => n >= 2,
            (Epsilon, Hbar(m)) => m == 1,
            (Hbar(n), Hbar(m)) => m <= n,
            _ => false,
        }
    }

    fn check_same(self, other: RingMode) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::Mode(format!("{self:?} vs {other:?}")))
        }
    }
}

impl fmt::Display for RingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingMode::Classical => write!(f, "classical"),
            RingMode::Epsilon => write!(f, "epsilon"),
            RingMode::Hbar(n) => write!(f, "hbar{n}"),
        }
    }
}

/// An element of a truncated deformation ring.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ScalarSeries {
    mode: RingMode,
    coeffs: Vec<Q>,
}

impl ScalarSeries {
    /// Build from coefficients; missing ones are zero, extra ones are dropped.
    pub fn new(mode: RingMode, mut coeffs: Vec<Q>) -> Self {
        coeffs.resize(mode.order(), Q::zero());
        ScalarSeries { mode, coeffs }
    }

    /// The zero element.
    pub fn zero(mode: RingMode) -> Self {
        Self::new(mode, vec![])
    }

    /// The unit element.
    pub fn one(mode: RingMode) -> Self {
        Self::constant(mode, Q::one())
    }

    /// A constant series.
    pub fn constant(mode: RingMode, c: Q) -> Self {
        Self::new(mode, vec![c])
    }

    /// The formal parameter (`eps` or `h`); zero in `Classical` mode.
    pub fn param(mode: RingMode) -> Self {
        Self::new(mode, vec![Q::zero(), Q::one()])
    }

    /// `exp(c * param)` truncated at the order.
    pub fn exp_param(mode: RingMode, c: &Q) -> Self {
        let mut coeffs = Vec::with_capacity(mode.order());
        let mut term = Q::one();
        for k in 0..mode.order() {
            if k > 0 {
                term = term * c / qi(k as i64);
            }
            coeffs.push(term.clone());
        }
        ScalarSeries { mode, coeffs }
    }

    /// Ring mode.
    pub fn mode(&self) -> RingMode {
        self.mode
    }

    /// Coefficient list, lowest order first.
    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    /// Coefficient of `param^k` (zero beyond the order).
    pub fn coeff(&self, k: usize) -> Q {
        self.coeffs.get(k).cloned().unwrap_or_else(Q::zero)
    }

    /// Whether every coefficient vanishes.
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Whether the series is invertible (nonzero constant term).
    pub fn is_unit(&self) -> bool {
        !self.coeffs[0].is_zero()
    }

    /// Sum.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.mode.check_same(other.mode)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(ScalarSeries { mode: self.mode, coeffs })
    }

    /// Difference.
    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.mode.check_same(other.mode)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(ScalarSeries { mode: self.mode, coeffs })
    }

    /// Negation.
    pub fn neg(&self) -> Self {
        ScalarSeries { mode: self.mode, coeffs: self.coeffs.iter().map(|a| -a).collect() }
    }

    /// Product by a rational.
    pub fn scale(&self, c: &Q) -> Self {
        ScalarSeries { mode: self.mode, coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    /// Truncated product; see [`ring_mul`].
    pub fn mul(&self, other: &Self) -> Result<Self> {
        ring_mul(self, other)
    }

    /// Multiplicative inverse of a unit.
    pub fn inv(&self) -> Result<Self> {
        if !self.is_unit() {
            return Err(Error::Mode("inverse of a non-unit series".into()));
        }
        let n = self.mode.order();
        let a0inv = self.coeffs[0].recip();
        let mut out = vec![Q::zero(); n];
        out[0] = a0inv.clone();
        for k in 1..n {
            let mut s = Q::zero();
            for i in 1..=k {
                s += &self.coeffs[i] * &out[k - i];
            }
            out[k] = -(s * &a0inv);
        }
        Ok(ScalarSeries { mode: self.mode, coeffs: out })
    }

    /// Constant coefficient.
    pub fn part0(&self) -> Q {
        self.coeffs[0].clone()
    }

    /// First-order coefficient; requires a vanishing constant term.
    pub fn part1(&self) -> Result<Q> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::Part1Domain);
        }
        Ok(self.coeff(1))
    }

    /// Apply the mode homomorphism to `target`.
    pub fn convert(&self, target: RingMode) -> Result<Self> {
        if !self.mode.converts_to(target) {
            return Err(Error::Mode(format!("no homomorphism {} -> {}", self.mode, target)));
        }
        if self.mode == RingMode::Classical {
            return Ok(Self::constant(target, self.coeffs[0].clone()));
        }
        Ok(Self::new(target, self.coeffs.clone()))
    }
}

impl fmt::Display for ScalarSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = if self.mode == RingMode::Epsilon { "e" } else { "h" };
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = q_to_string(&c.abs());
            match k {
                0 => write!(f, "{a}")?,
                1 => write!(f, "{a}{p}")?,
                _ => write!(f, "{a}{p}^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Truncated product: coefficient `k` is `sum_{i+j=k} a_i b_j` for `k < order`.
pub fn ring_mul(a: &ScalarSeries, b: &ScalarSeries) -> Result<ScalarSeries> {
    a.mode.check_same(b.mode)?;
    let n = a.mode.order();
    let mut out = vec![Q::zero(); n];
    for (i, ai) in a.coeffs.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.coeffs[..n - i].iter().enumerate() {
            if !bj.is_zero() {
                out[i + j] += ai * bj;
            }
        }
    }
    Ok(ScalarSeries { mode: a.mode, coeffs: out })
}

#[derive(Serialize, Deserialize)]
struct SeriesJson {
    mode: String,
    order: usize,
    coeffs: Vec<String>,
}

impl Serialize for ScalarSeries {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SeriesJson {
            mode: self.mode.name().into(),
            order: self.mode.order(),
            coeffs: self.coeffs.iter().map(q_to_string).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ScalarSeries {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = SeriesJson::deserialize(d)?;
        let mode = RingMode::from_name(&j.mode, j.order).map_err(D::Error::custom)?;
        if j.coeffs.len() > mode.order() {
            return Err(D::Error::custom("more coefficients than the truncation order"));
        }
        let coeffs = j
            .coeffs
            .iter()
            .map(|c| q_from_str(c))
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        Ok(ScalarSeries::new(mode, coeffs))
    }
}

/// A vector in a free module over a truncated ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeElement {
    mode: RingMode,
    entries: Vec<ScalarSeries>,
}

impl FreeElement {
    /// Build from entries, all of which must share `mode`.
    pub fn new(mode: RingMode, entries: Vec<ScalarSeries>) -> Result<Self> {
        for e in &entries {
            mode.check_same(e.mode)?;
        }
        Ok(FreeElement { mode, entries })
    }

    /// Ring mode.
    pub fn mode(&self) -> RingMode {
        self.mode
    }

    /// Entries.
    pub fn entries(&self) -> &[ScalarSeries] {
        &self.entries
    }

    /// Multiply every entry by the formal parameter.
    pub fn times_param(&self) -> Self {
        let p = ScalarSeries::param(self.mode);
        let entries = self.entries.iter().map(|e| ring_mul(&p, e).expect("same mode")).collect();
        FreeElement { mode: self.mode, entries }
    }

    /// Constant coefficients, as a classical vector.
    pub fn part0(&self) -> FreeElement {
        let entries = self
            .entries
            .iter()
            .map(|e| ScalarSeries::constant(RingMode::Classical, e.part0()))
            .collect();
        FreeElement { mode: RingMode::Classical, entries }
    }

    /// First-order coefficients; every constant coefficient must vanish.
    pub fn part1(&self) -> Result<FreeElement> {
        let entries = self
            .entries
            .iter()
            .map(|e| e.part1().map(|c| ScalarSeries::constant(RingMode::Classical, c)))
            .collect::<Result<_>>()?;
        Ok(FreeElement { mode: RingMode::Classical, entries })
    }
}

/// Constant projection of a free-module element.
pub fn part0(m: &FreeElement) -> FreeElement {
    m.part0()
}

/// First-order extraction; errors with [`Error::Part1Domain`] off its domain.
pub fn part1(m: &FreeElement) -> Result<FreeElement> {
    m.part1()
}
