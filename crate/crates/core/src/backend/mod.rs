// Copyright (c) The skeinlab Contributors
// SPDX-License-Identifier: Apache-2.0

//! Ribbon categories of `sl2` representations.
//!
//! Four instances share one interface:
//!
//! * [`BackendKind::ClassicalSl2`]: flip braiding, trivial twist.
//! * [`BackendKind::EpsilonSl2`]: `U_h(sl2)` reduced mod `eps^2`, so the
//!   braiding is `flip o (1 + eps r)`.
//! * [`BackendKind::QuantumSl2`]: `U_h(sl2)` mod `h^N` with `q = exp(h/2)`.
//! * [`BackendKind::DrinfeldSl2`]: undeformed `U(sl2)` with braiding
//!   `flip o exp(h t/2)`, twist `exp(h C/2)` and the associator
//!   `1 + h^2/24 [t12, t23]`.
//!
//! Matrices act on flattened words; parenthesization only matters through
//! [`Backend::associator`].

pub mod morphism;
pub mod object;
pub mod sl2;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_traits::{One, Zero};

pub use morphism::Morphism;
pub use object::{dual_word, label_name, parse_label, word_dim, word_dims, Gen, ObjectExpr};
use sl2::{casimir_value, classical_rep, h_matrix, k_matrix, q_factorial, q_int, quantum_rep, Rep};

use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::scalars::{q, qi, RingMode, ScalarSeries, DEFAULT_HBAR_ORDER, Q};

/// Largest highest weight accepted as a simple label.
pub const MAX_LABEL: u32 = 12;

/// Highest truncation order supported by the Drinfeld associator.
pub const DRINFELD_MAX_ORDER: u8 = 3;

/// Which ribbon category.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BackendKind {
    /// Symmetric category of `sl2` modules.
    ClassicalSl2,
    /// First-order quantum group, `eps^2 = 0`.
    EpsilonSl2,
    /// Quantum group truncated mod `h^N`.
    QuantumSl2,
    /// Drinfeld category with the quadratic associator.
    DrinfeldSl2,
}

impl BackendKind {
    /// CLI name.
    pub fn name(self) -> &'static str {
        match self {
            BackendKind::ClassicalSl2 => "classical",
            BackendKind::EpsilonSl2 => "epsilon",
            BackendKind::QuantumSl2 => "quantum",
            BackendKind::DrinfeldSl2 => "drinfeld",
        }
    }

    /// Parse a CLI name.
    pub fn from_name(s: &str) -> Result<Self> {
        match s {
            "classical" => Ok(BackendKind::ClassicalSl2),
            "epsilon" => Ok(BackendKind::EpsilonSl2),
            "quantum" => Ok(BackendKind::QuantumSl2),
            "drinfeld" => Ok(BackendKind::DrinfeldSl2),
            _ => Err(Error::Parse(format!("unknown backend {s:?}"))),
        }
    }
}

impl fmt::Display for BackendKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A Clebsch-Gordan summand `V_label` of `V_a (x) V_b`.
#[derive(Clone, Debug)]
pub struct CgComponent {
    /// Highest weight of the summand.
    pub label: u32,
    /// `V_label -> V_a (x) V_b`.
    pub embed: Mat,
    /// `V_a (x) V_b -> V_label`.
    pub project: Mat,
}

type HomKey = (Vec<Gen>, Vec<Gen>);

#[derive(Default)]
struct Caches {
    cg: HashMap<(u32, u32), Arc<Vec<CgComponent>>>,
    braid: HashMap<(Gen, Gen, bool), Arc<Mat>>,
    hom: HashMap<HomKey, Arc<Vec<Mat>>>,
    coev_scale: HashMap<u32, ScalarSeries>,
}

/// A ribbon category instance together with memoized structure data.
pub struct Backend {
    kind: BackendKind,
    mode: RingMode,
    caches: Mutex<Caches>,
}

impl Clone for Backend {
    fn clone(&self) -> Self {
        Backend { kind: self.kind, mode: self.mode, caches: Mutex::default() }
    }
}

impl fmt::Debug for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Backend({}, {})", self.kind, self.mode)
    }
}

impl Backend {
    /// Build a backend; `order` only applies to the `h`-adic kinds.
    pub fn new(kind: BackendKind, order: Option<u8>) -> Result<Self> {
        let mode = match kind {
            BackendKind::ClassicalSl2 => RingMode::Classical,
            BackendKind::EpsilonSl2 => RingMode::Epsilon,
            BackendKind::QuantumSl2 => RingMode::hbar(order.unwrap_or(DEFAULT_HBAR_ORDER))?,
            BackendKind::DrinfeldSl2 => {
                let n = order.unwrap_or(DEFAULT_HBAR_ORDER);
                if n > DRINFELD_MAX_ORDER {
                    return Err(Error::TruncationUnsupported(n as usize));
                }
                RingMode::hbar(n)?
            }
        };
        Ok(Backend { kind, mode, caches: Mutex::default() })
    }

    /// Symmetric classical backend.
    pub fn classical() -> Self {
        Backend::new(BackendKind::ClassicalSl2, None).expect("valid")
    }

    /// First-order backend.
    pub fn epsilon() -> Self {
        Backend::new(BackendKind::EpsilonSl2, None).expect("valid")
    }

    /// Quantum backend of the given order.
    pub fn quantum(order: u8) -> Result<Self> {
        Backend::new(BackendKind::QuantumSl2, Some(order))
    }

    /// Drinfeld backend of the given order.
    pub fn drinfeld(order: u8) -> Result<Self> {
        Backend::new(BackendKind::DrinfeldSl2, Some(order))
    }

    /// Kind.
    pub fn kind(&self) -> BackendKind {
        self.kind
    }

    /// Coefficient ring.
    pub fn mode(&self) -> RingMode {
        self.mode
    }

    /// Whether the associator is the identity at this truncation order.
    pub fn is_strict(&self) -> bool {
        self.kind != BackendKind::DrinfeldSl2 || self.mode.order() <= 2
    }

    /// Whether the braiding is deformed away from the flip.
    pub fn is_deformed(&self) -> bool {
        self.kind != BackendKind::ClassicalSl2 && self.mode.order() >= 2
    }

    fn quantum_kind(&self) -> bool {
        matches!(self.kind, BackendKind::EpsilonSl2 | BackendKind::QuantumSl2)
    }

    fn check_gen(&self, g: Gen) -> Result<()> {
        if g.label > MAX_LABEL {
            return Err(Error::Label(format!("label {} exceeds the supported maximum {MAX_LABEL}", g.label)));
        }
        Ok(())
    }

    fn check_word(&self, w: &[Gen]) -> Result<()> {
        w.iter().try_for_each(|&g| self.check_gen(g))
    }

    fn scalar(&self, c: Q) -> ScalarSeries {
        ScalarSeries::constant(self.mode, c)
    }

    /// Representation matrices of one generator.
    pub fn rep(&self, g: Gen) -> Rep {
        if self.quantum_kind() {
            quantum_rep(g, self.mode)
        } else {
            classical_rep(g, self.mode)
        }
    }

    /// Representation on a word through the coproduct.
    pub fn word_rep(&self, word: &[Gen]) -> Rep {
        let mut acc = Rep { e: Mat::zeros(self.mode, 1, 1), f: Mat::zeros(self.mode, 1, 1), weights: vec![0] };
        for &g in word {
            let r = self.rep(g);
            acc = self.tensor_reps(&acc, &r);
        }
        acc
    }

    fn tensor_reps(&self, a: &Rep, b: &Rep) -> Rep {
        let (da, db) = (a.weights.len(), b.weights.len());
        let ia = Mat::identity(self.mode, da);
        let ib = Mat::identity(self.mode, db);
        let (e, f) = if self.quantum_kind() {
            let kb = k_matrix(self.mode, &b.weights, 1);
            let kainv = k_matrix(self.mode, &a.weights, -1);
            (
                a.e.kron(&kb).and_then(|x| x.add(&ia.kron(&b.e)?)).expect("shapes"),
                a.f.kron(&ib).and_then(|x| x.add(&kainv.kron(&b.f)?)).expect("shapes"),
            )
        } else {
            (
                a.e.kron(&ib).and_then(|x| x.add(&ia.kron(&b.e)?)).expect("shapes"),
                a.f.kron(&ib).and_then(|x| x.add(&ia.kron(&b.f)?)).expect("shapes"),
            )
        };
        let weights = a.weights.iter().flat_map(|wa| b.weights.iter().map(move |wb| wa + wb)).collect();
        Rep { e, f, weights }
    }

    /// Undeformed action on a word, as constant matrices in this mode.
    fn classical_word_rep(&self, word: &[Gen]) -> Rep {
        let mut acc = Rep { e: Mat::zeros(self.mode, 1, 1), f: Mat::zeros(self.mode, 1, 1), weights: vec![0] };
        for &g in word {
            let r = classical_rep(g, self.mode);
            let (da, db) = (acc.weights.len(), r.weights.len());
            let ia = Mat::identity(self.mode, da);
            let ib = Mat::identity(self.mode, db);
            acc = Rep {
                e: acc.e.kron(&ib).and_then(|x| x.add(&ia.kron(&r.e)?)).expect("shapes"),
                f: acc.f.kron(&ib).and_then(|x| x.add(&ia.kron(&r.f)?)).expect("shapes"),
                weights: acc.weights.iter().flat_map(|wa| r.weights.iter().map(move |wb| wa + wb)).collect(),
            };
        }
        acc
    }

    /// The symmetric invariant tensor `t = e(x)f + f(x)e + h(x)h/2` on `X (x) Y`.
    pub fn t_words(&self, x: &[Gen], y: &[Gen]) -> Result<Mat> {
        self.check_word(x)?;
        self.check_word(y)?;
        let rx = self.classical_word_rep(x);
        let ry = self.classical_word_rep(y);
        let hx = h_matrix(self.mode, &rx.weights);
        let hy = h_matrix(self.mode, &ry.weights);
        let t = rx.e.kron(&ry.f)?.add(&rx.f.kron(&ry.e)?)?.add(&hx.kron(&hy)?.scale_q(&q(1, 2)))?;
        Ok(t)
    }

    /// The classical `r`-matrix `e(x)f + h(x)h/4` on `X (x) Y`.
    pub fn r_words(&self, x: &[Gen], y: &[Gen]) -> Result<Mat> {
        let rx = self.classical_word_rep(x);
        let ry = self.classical_word_rep(y);
        let hx = h_matrix(self.mode, &rx.weights);
        let hy = h_matrix(self.mode, &ry.weights);
        rx.e.kron(&ry.f)?.add(&hx.kron(&hy)?.scale_q(&q(1, 4)))
    }

    /// Antisymmetric part `r_a = (e(x)f - f(x)e)/2` on `X (x) Y`.
    pub fn r_antisym_words(&self, x: &[Gen], y: &[Gen]) -> Result<Mat> {
        let rx = self.classical_word_rep(x);
        let ry = self.classical_word_rep(y);
        Ok(rx.e.kron(&ry.f)?.sub(&rx.f.kron(&ry.e)?)?.scale_q(&q(1, 2)))
    }

    /// Casimir `C = ef + fe + h^2/2` on a word.
    pub fn casimir_word(&self, x: &[Gen]) -> Result<Mat> {
        let r = self.classical_word_rep(x);
        let h = h_matrix(self.mode, &r.weights);
        r.e.mul(&r.f)?.add(&r.f.mul(&r.e)?)?.add(&h.mul(&h)?.scale_q(&q(1, 2)))
    }

    /// The flip `X (x) Y -> Y (x) X`.
    pub fn flip_words(&self, x: &[Gen], y: &[Gen]) -> Mat {
        flip_matrix(self.mode, word_dim(x), word_dim(y))
    }

    /// Braiding matrix `X (x) Y -> Y (x) X`.
    pub fn braiding_words(&self, x: &[Gen], y: &[Gen]) -> Result<Mat> {
        self.check_word(x)?;
        self.check_word(y)?;
        let flip = self.flip_words(x, y);
        let r = match self.kind {
            BackendKind::ClassicalSl2 => return Ok(flip),
            BackendKind::DrinfeldSl2 => {
                let half_h = ScalarSeries::param(self.mode).scale(&q(1, 2));
                self.t_words(x, y)?.scale(&half_h)?.exp_nilpotent()?
            }
            BackendKind::EpsilonSl2 | BackendKind::QuantumSl2 => self.r_matrix_words(x, y)?,
        };
        flip.mul(&r)
    }

    /// Universal `R = q^{H(x)H/2} sum_n q^{n(n-1)/2} (q - q^-1)^n / [n]! E^n (x) F^n`.
    pub fn r_matrix_words(&self, x: &[Gen], y: &[Gen]) -> Result<Mat> {
        let mode = self.mode;
        let rx = self.word_rep(x);
        let ry = self.word_rep(y);
        let (dx, dy) = (rx.weights.len(), ry.weights.len());
        let diag: Vec<ScalarSeries> = rx
            .weights
            .iter()
            .flat_map(|a| ry.weights.iter().map(move |b| ScalarSeries::exp_param(mode, &q(a * b, 4))))
            .collect();
        let d = Mat::diagonal(mode, &diag);
        let qq = sl2::q_pow(mode, 1).sub(&sl2::q_pow(mode, -1))?;
        let mut sum = Mat::identity(mode, dx * dy);
        let mut en = Mat::identity(mode, dx);
        let mut fnm = Mat::identity(mode, dy);
        let mut qpow = ScalarSeries::one(mode);
        for n in 1..mode.order() as i64 {
            en = en.mul(&rx.e)?;
            fnm = fnm.mul(&ry.f)?;
            qpow = qpow.mul(&qq)?;
            let c = ScalarSeries::exp_param(mode, &q(n * (n - 1), 4)).mul(&qpow)?.mul(&q_factorial(mode, n).inv()?)?;
            sum = sum.add(&en.kron(&fnm)?.scale(&c)?)?;
        }
        d.mul(&sum)
    }

    /// Braiding of two generators, memoized.
    pub fn gen_braid(&self, x: Gen, y: Gen, inverse: bool) -> Result<Arc<Mat>> {
        let key = (x, y, inverse);
        if let Some(m) = self.caches.lock().expect("cache").braid.get(&key) {
            return Ok(m.clone());
        }
        let b = self.braiding_words(&[x], &[y])?;
        let m = Arc::new(if inverse { b.inverse()? } else { b });
        self.caches.lock().expect("cache").braid.insert(key, m.clone());
        Ok(m)
    }

    /// Braiding `beta_{X,Y}: X (x) Y -> Y (x) X`.
    pub fn braiding(&self, x: &ObjectExpr, y: &ObjectExpr) -> Result<Morphism> {
        let m = self.braiding_words(&x.flatten(), &y.flatten())?;
        Morphism::new(ObjectExpr::tensor(x.clone(), y.clone()), ObjectExpr::tensor(y.clone(), x.clone()), m)
    }

    /// Inverse braiding `beta_{X,Y}^-1: Y (x) X -> X (x) Y`.
    pub fn braiding_inv(&self, x: &ObjectExpr, y: &ObjectExpr) -> Result<Morphism> {
        let m = self.braiding_words(&x.flatten(), &y.flatten())?.inverse()?;
        Morphism::new(ObjectExpr::tensor(y.clone(), x.clone()), ObjectExpr::tensor(x.clone(), y.clone()), m)
    }

    /// Twist on a flat word.
    pub fn twist_words(&self, x: &[Gen]) -> Result<Mat> {
        self.check_word(x)?;
        let d = word_dim(x);
        match self.kind {
            BackendKind::ClassicalSl2 => Ok(Mat::identity(self.mode, d)),
            BackendKind::DrinfeldSl2 => {
                let half_h = ScalarSeries::param(self.mode).scale(&q(1, 2));
                self.casimir_word(x)?.scale(&half_h)?.exp_nilpotent()
            }
            BackendKind::EpsilonSl2 | BackendKind::QuantumSl2 => match x {
                [] => Ok(Mat::identity(self.mode, 1)),
                [g] => {
                    let s = ScalarSeries::exp_param(self.mode, &(casimir_value(g.label) / qi(2)));
                    Ok(Mat::identity(self.mode, g.dim()).scale(&s)?)
                }
                [first, rest @ ..] => {
                    let head = [*first];
                    let b1 = self.braiding_words(&head, rest)?;
                    let b2 = self.braiding_words(rest, &head)?;
                    let tt = self.twist_words(&head)?.kron(&self.twist_words(rest)?)?;
                    b2.mul(&b1)?.mul(&tt)
                }
            },
        }
    }

    /// Twist `theta_X`.
    pub fn twist(&self, x: &ObjectExpr) -> Result<Morphism> {
        Morphism::new(x.clone(), x.clone(), self.twist_words(&x.flatten())?)
    }

    /// Stored infinitesimal braiding `t_{X,Y}: X (x) Y -> X (x) Y`.
    pub fn inf_braiding(&self, x: &ObjectExpr, y: &ObjectExpr) -> Result<Morphism> {
        let xy = ObjectExpr::tensor(x.clone(), y.clone());
        Morphism::new(xy.clone(), xy, self.t_words(&x.flatten(), &y.flatten())?)
    }

    /// Associator matrix `(X Y) Z -> X (Y Z)` on the flat word.
    pub fn associator_words(&self, x: &[Gen], y: &[Gen], z: &[Gen]) -> Result<Mat> {
        let d = word_dim(x) * word_dim(y) * word_dim(z);
        if self.is_strict() {
            return Ok(Mat::identity(self.mode, d));
        }
        let t12 = self.t_words(x, y)?.kron(&Mat::identity(self.mode, word_dim(z)))?;
        let t23 = Mat::identity(self.mode, word_dim(x)).kron(&self.t_words(y, z)?)?;
        let comm = t12.mul(&t23)?.sub(&t23.mul(&t12)?)?;
        let h = ScalarSeries::param(self.mode);
        let c = h.mul(&h)?.scale(&q(1, 24));
        Mat::identity(self.mode, d).add(&comm.scale(&c)?)
    }

    /// Associator `alpha_{X,Y,Z}: (X Y) Z -> X (Y Z)`.
    pub fn associator(&self, x: &ObjectExpr, y: &ObjectExpr, z: &ObjectExpr) -> Result<Morphism> {
        let m = self.associator_words(&x.flatten(), &y.flatten(), &z.flatten())?;
        Morphism::new(
            ObjectExpr::tensor(ObjectExpr::tensor(x.clone(), y.clone()), z.clone()),
            ObjectExpr::tensor(x.clone(), ObjectExpr::tensor(y.clone(), z.clone())),
            m,
        )
    }

    fn pairing_row(&self, d: usize) -> Mat {
        let mut m = Mat::zeros(self.mode, 1, d * d);
        for i in 0..d {
            m.set(0, i * d + i, &ScalarSeries::one(self.mode));
        }
        m
    }

    /// Normalization of `coev_{V_n}` making the first snake identity hold.
    ///
    /// Identity in the strict backends. In the Drinfeld backend the snake
    /// through the associator is a scalar `s` on the simple object and the
    /// coevaluation is divided by it.
    pub fn coev_scale(&self, n: u32) -> Result<ScalarSeries> {
        if self.is_strict() {
            return Ok(ScalarSeries::one(self.mode));
        }
        if let Some(s) = self.caches.lock().expect("cache").coev_scale.get(&n) {
            return Ok(s.clone());
        }
        let v = Gen::simple(n);
        let d = v.dim();
        let id = Mat::identity(self.mode, d);
        let coev = self.pairing_row(d).transpose();
        let phi = self.associator_words(&[v], &[v.dualize()], &[v])?;
        let snake = id.kron(&self.pairing_row(d))?.mul(&phi)?.mul(&coev.kron(&id)?)?;
        let s = sl2::is_scalar_matrix(&snake).ok_or_else(|| Error::Shape("snake composite is not scalar".into()))?;
        let inv = s.inv()?;
        self.caches.lock().expect("cache").coev_scale.insert(n, inv.clone());
        Ok(inv)
    }

    /// Evaluation `g^* (x) g -> 1` for a generator, as a `1 x d^2` matrix.
    pub fn ev_gen(&self, g: Gen) -> Result<Mat> {
        self.check_gen(g)?;
        let d = g.dim();
        if !g.dual {
            return Ok(self.pairing_row(d));
        }
        let v = g.dualize();
        let tw = self.twist_words(&[v])?.kron(&Mat::identity(self.mode, d))?;
        self.pairing_row(d).mul(&self.braiding_words(&[v], &[g])?)?.mul(&tw)
    }

    /// Coevaluation `1 -> g (x) g^*` for a generator, as a `d^2 x 1` matrix.
    pub fn coev_gen(&self, g: Gen) -> Result<Mat> {
        self.check_gen(g)?;
        let d = g.dim();
        if !g.dual {
            return self.pairing_row(d).transpose().scale(&self.coev_scale(g.label)?);
        }
        let v = g.dualize();
        let coev = self.coev_gen(v)?;
        let tw = Mat::identity(self.mode, d).kron(&self.twist_words(&[v])?)?;
        tw.mul(&self.braiding_words(&[v], &[g])?)?.mul(&coev)
    }

    /// Evaluation `dual(X) (x) X -> unit` for a generator `X`.
    pub fn ev(&self, x: &ObjectExpr) -> Result<Morphism> {
        let g = single_gen(x)?;
        Morphism::new(ObjectExpr::tensor(x.dual(), x.clone()), ObjectExpr::Unit, self.ev_gen(g)?)
    }

    /// Coevaluation `unit -> X (x) dual(X)` for a generator `X`.
    pub fn coev(&self, x: &ObjectExpr) -> Result<Morphism> {
        let g = single_gen(x)?;
        Morphism::new(ObjectExpr::Unit, ObjectExpr::tensor(x.clone(), x.dual()), self.coev_gen(g)?)
    }

    /// Clebsch-Gordan decomposition of `V_a (x) V_b`, memoized.
    ///
    /// For each summand the highest weight vector spans the kernel of `E`
    /// on its weight space; the lower basis vectors are `F^p w / [p]!`.
    /// Projections are the rows of the inverse of the assembled basis change.
    pub fn cg_decompose(&self, a: u32, b: u32) -> Result<Arc<Vec<CgComponent>>> {
        if a > MAX_LABEL || b > MAX_LABEL {
            return Err(Error::Cg(format!("no decomposition data for V{a} x V{b}")));
        }
        if let Some(c) = self.caches.lock().expect("cache").cg.get(&(a, b)) {
            return Ok(c.clone());
        }
        let mode = self.mode;
        let word = [Gen::simple(a), Gen::simple(b)];
        let rep = self.word_rep(&word);
        let dim = rep.weights.len();
        let mut embeds: Vec<(u32, Mat)> = Vec::new();
        let lo = a.abs_diff(b);
        let mut c = a + b;
        loop {
            let src: Vec<usize> = (0..dim).filter(|&i| rep.weights[i] == c as i64).collect();
            let dst: Vec<usize> = (0..dim).filter(|&i| rep.weights[i] == c as i64 + 2).collect();
            let w = if dst.is_empty() {
                Mat::identity(mode, src.len())
            } else {
                rep.e.select_rows(&dst).select_cols(&src).kernel()?
            };
            if w.cols() != 1 {
                return Err(Error::Cg(format!("highest weight space of V{c} in V{a} x V{b} has rank {}", w.cols())));
            }
            let mut v = Mat::zeros(mode, dim, 1);
            for (k, &i) in src.iter().enumerate() {
                v.set(i, 0, &w.get(k, 0));
            }
            let mut cols = vec![v.clone()];
            for p in 0..c as i64 {
                let next = rep.f.mul(cols.last().expect("nonempty"))?;
                let qi_inv = if self.quantum_kind() { q_int(mode, p + 1) } else { ScalarSeries::constant(mode, qi(p + 1)) }.inv()?;
                cols.push(next.scale(&qi_inv)?);
            }
            embeds.push((c, Mat::hcat(&cols)?));
            if c < lo + 2 {
                break;
            }
            c -= 2;
        }
        let all = Mat::hcat(&embeds.iter().map(|(_, m)| m.clone()).collect::<Vec<_>>())?;
        let inv = all.inverse()?;
        let mut out = Vec::new();
        let mut r0 = 0;
        for (label, embed) in embeds {
            let n = embed.cols();
            let rows: Vec<usize> = (r0..r0 + n).collect();
            out.push(CgComponent { label, project: inv.select_rows(&rows), embed });
            r0 += n;
        }
        out.sort_by_key(|c| c.label);
        let out = Arc::new(out);
        self.caches.lock().expect("cache").cg.insert((a, b), out.clone());
        Ok(out)
    }

    /// A basis of the module maps `X -> Y` between flat words, memoized.
    ///
    /// Solves the equivariance equations for `E` and `F` on weight-matched
    /// entries. Freeness of the solution module is checked by the kernel
    /// routine.
    pub fn hom_basis(&self, x: &[Gen], y: &[Gen]) -> Result<Arc<Vec<Mat>>> {
        self.check_word(x)?;
        self.check_word(y)?;
        let key = (x.to_vec(), y.to_vec());
        if let Some(h) = self.caches.lock().expect("cache").hom.get(&key) {
            return Ok(h.clone());
        }
        let mode = self.mode;
        let rx = self.word_rep(x);
        let ry = self.word_rep(y);
        let (dx, dy) = (rx.weights.len(), ry.weights.len());
        let unknowns: Vec<(usize, usize)> = (0..dy)
            .flat_map(|i| (0..dx).map(move |j| (i, j)))
            .filter(|&(i, j)| ry.weights[i] == rx.weights[j])
            .collect();
        let index: HashMap<(usize, usize), usize> = unknowns.iter().enumerate().map(|(k, &p)| (p, k)).collect();
        let mut rows: Vec<Vec<ScalarSeries>> = Vec::new();
        for (opx, opy, shift) in [(&rx.e, &ry.e, 2i64), (&rx.f, &ry.f, -2i64)] {
            for k in 0..dy {
                for l in 0..dx {
                    if ry.weights[k] != rx.weights[l] + shift {
                        continue;
                    }
                    let mut row = vec![ScalarSeries::zero(mode); unknowns.len()];
                    for i in 0..dy {
                        if let Some(&u) = index.get(&(i, l)) {
                            let c = opy.get(k, i);
                            if !c.is_zero() {
                                row[u] = row[u].add(&c)?;
                            }
                        }
                    }
                    for j in 0..dx {
                        if let Some(&u) = index.get(&(k, j)) {
                            let c = opx.get(j, l);
                            if !c.is_zero() {
                                row[u] = row[u].sub(&c)?;
                            }
                        }
                    }
                    if row.iter().any(|c| !c.is_zero()) {
                        rows.push(row);
                    }
                }
            }
        }
        let basis = if unknowns.is_empty() {
            Mat::zeros(mode, 0, 0)
        } else if rows.is_empty() {
            Mat::identity(mode, unknowns.len())
        } else {
            Mat::from_rows(mode, unknowns.len(), &rows).kernel()?
        };
        let mut out = Vec::with_capacity(basis.cols());
        for b in 0..basis.cols() {
            let mut m = Mat::zeros(mode, dy, dx);
            for (u, &(i, j)) in unknowns.iter().enumerate() {
                let c = basis.get(u, b);
                if !c.is_zero() {
                    m.set(i, j, &c);
                }
            }
            out.push(m);
        }
        let out = Arc::new(out);
        self.caches.lock().expect("cache").hom.insert(key, out.clone());
        Ok(out)
    }

    /// Whether `m: X -> Y` commutes with the actions of `E` and `F`.
    pub fn is_equivariant(&self, x: &[Gen], y: &[Gen], m: &Mat) -> Result<bool> {
        let rx = self.word_rep(x);
        let ry = self.word_rep(y);
        let ok_e = ry.e.mul(m)? == m.mul(&rx.e)?;
        let ok_f = ry.f.mul(m)? == m.mul(&rx.f)?;
        let ok_h = (0..m.rows()).all(|i| (0..m.cols()).all(|j| m.get(i, j).is_zero() || ry.weights[i] == rx.weights[j]));
        Ok(ok_e && ok_f && ok_h)
    }

    /// Constant scalar in this backend's mode.
    pub fn constant(&self, c: Q) -> ScalarSeries {
        self.scalar(c)
    }

    /// Unit series.
    pub fn one(&self) -> ScalarSeries {
        self.scalar(Q::one())
    }

    /// Zero series.
    pub fn zero(&self) -> ScalarSeries {
        self.scalar(Q::zero())
    }
}

fn single_gen(x: &ObjectExpr) -> Result<Gen> {
    match x {
        ObjectExpr::Gen(g) => Ok(*g),
        _ => Err(Error::Label(format!("expected a simple object or its dual, got {x}"))),
    }
}

/// Permutation matrix of `X (x) Y -> Y (x) X` for dimensions `dx`, `dy`.
pub fn flip_matrix(mode: RingMode, dx: usize, dy: usize) -> Mat {
    let mut m = Mat::zeros(mode, dx * dy, dx * dy);
    let one = ScalarSeries::one(mode);
    for i in 0..dx {
        for j in 0..dy {
            m.set(j * dx + i, i * dy + j, &one);
        }
    }
    m
}

impl Backend {
    /// Random series with small integer coefficients at every order.
    pub fn random_scalar<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> ScalarSeries {
        let coeffs = (0..self.mode.order()).map(|_| qi(rng.gen_range(-3..=3))).collect();
        ScalarSeries::new(self.mode, coeffs)
    }

    /// Random module map `X -> Y` as a combination of the hom basis.
    pub fn random_hom<R: rand::Rng + ?Sized>(&self, rng: &mut R, x: &[Gen], y: &[Gen]) -> Result<Mat> {
        let basis = self.hom_basis(x, y)?;
        let mut m = Mat::zeros(self.mode, word_dim(y), word_dim(x));
        for b in basis.iter() {
            m = m.add(&b.scale(&self.random_scalar(rng))?)?;
        }
        Ok(m)
    }
}
