// Copyright (c) The skeinlab Contributors
// SPDX-License-Identifier: Apache-2.0

//! Elements of internal skein algebras and their stacking product.
//!
//! An element of `E(X)` for a pattern with vertices `v` is a finite sum of
//! terms. A term assigns a simple label `l_h` to every handle and carries a
//! core matrix
//!
//! ```text
//! X_0 (x) ... (x) X_{k-1}  ->  W_0(l) (x) ... (x) W_{k-1}(l)
//! ```
//!
//! where `W_v(l)` lists the slots of `v` in order, a start slot carrying
//! `V_{l_h}` and an end slot carrying its dual. Since labels are simple the
//! coend over handle labels is a plain direct sum, so labels plus cores
//! form a canonical form.
//!
//! The product stacks the first factor above the second. At each vertex the
//! second factor's ends are braided into place with the first factor's
//! strands passing over, and along every handle the two parallel strands
//! are fused with Clebsch-Gordan maps.

use std::collections::BTreeMap;

use rand::Rng;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Value};

use crate::backend::morphism::{mat_from_json, matrix_json};
use crate::backend::{label_name, parse_label, word_dim, Backend, Gen, Morphism, ObjectExpr};
use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::scalars::{RingMode, ScalarSeries};
use crate::surface::SurfacePattern;

/// One simple label per handle.
pub type Labels = Vec<u32>;

/// A `(vertex, slot)` position on the boundary.
pub type Slot = (usize, usize);

/// A finite sum of labeled cores.
#[derive(Clone, Debug)]
pub struct SkeinElement {
    pattern: SurfacePattern,
    argument: Vec<ObjectExpr>,
    mode: RingMode,
    terms: BTreeMap<Labels, Mat>,
}

fn alg_err(msg: impl Into<String>) -> Error {
    Error::Algebra(msg.into())
}

/// Tensor product of objects that drops unit factors.
pub fn otensor(a: &ObjectExpr, b: &ObjectExpr) -> ObjectExpr {
    match (a, b) {
        (ObjectExpr::Unit, x) | (x, ObjectExpr::Unit) => x.clone(),
        _ => ObjectExpr::tensor(a.clone(), b.clone()),
    }
}

/// Boundary word of every vertex for the given labels.
pub fn boundary_words(pattern: &SurfacePattern, labels: &[u32]) -> Vec<Vec<Gen>> {
    (0..pattern.vertex_count())
        .map(|v| pattern.slots(v).into_iter().map(|(h, end)| Gen { label: labels[h], dual: end == 1 }).collect())
        .collect()
}

/// Flat boundary word in vertex order.
pub fn boundary_word(pattern: &SurfacePattern, labels: &[u32]) -> Vec<Gen> {
    boundary_words(pattern, labels).concat()
}

impl SkeinElement {
    /// The zero element of `E(argument)`.
    pub fn zero(pattern: &SurfacePattern, argument: Vec<ObjectExpr>, mode: RingMode) -> Result<Self> {
        if pattern.vertex_count() == 0 {
            return Err(alg_err("patterns without marked points carry no internal skein algebra"));
        }
        if argument.len() != pattern.vertex_count() {
            return Err(alg_err(format!("need one argument per vertex, got {} for {}", argument.len(), pattern.vertex_count())));
        }
        Ok(SkeinElement { pattern: pattern.clone(), argument, mode, terms: BTreeMap::new() })
    }

    /// The unit: all labels trivial, identity core, unit arguments.
    pub fn unit(pattern: &SurfacePattern, mode: RingMode) -> Result<Self> {
        let mut s = SkeinElement::zero(pattern, vec![ObjectExpr::Unit; pattern.vertex_count()], mode)?;
        s.terms.insert(vec![0; pattern.handles().len()], Mat::identity(mode, 1));
        Ok(s)
    }

    /// Build from terms, merging repeated labels and checking shapes.
    pub fn from_terms(pattern: &SurfacePattern, argument: Vec<ObjectExpr>, mode: RingMode, terms: Vec<(Labels, Mat)>) -> Result<Self> {
        let mut s = SkeinElement::zero(pattern, argument, mode)?;
        for (labels, core) in terms {
            s.add_term(labels, core)?;
        }
        Ok(s)
    }

    /// Add a term.
    pub fn add_term(&mut self, labels: Labels, core: Mat) -> Result<()> {
        if labels.len() != self.pattern.handles().len() {
            return Err(alg_err(format!("{} labels for {} handles", labels.len(), self.pattern.handles().len())));
        }
        if core.mode() != self.mode {
            return Err(Error::Mode(format!("core in {} for an element in {}", core.mode(), self.mode)));
        }
        let rows = word_dim(&boundary_word(&self.pattern, &labels));
        if core.rows() != rows || core.cols() != self.arg_dim() {
            return Err(Error::Shape(format!(
                "core is {}x{}, labels {labels:?} need {rows}x{}",
                core.rows(),
                core.cols(),
                self.arg_dim()
            )));
        }
        let merged = match self.terms.remove(&labels) {
            Some(old) => old.add(&core)?,
            None => core,
        };
        if !merged.is_zero() {
            self.terms.insert(labels, merged);
        }
        Ok(())
    }

    /// Pattern.
    pub fn pattern(&self) -> &SurfacePattern {
        &self.pattern
    }

    /// Argument objects, one per vertex.
    pub fn argument(&self) -> &[ObjectExpr] {
        &self.argument
    }

    /// Ring mode.
    pub fn mode(&self) -> RingMode {
        self.mode
    }

    /// Terms by label tuple.
    pub fn terms(&self) -> &BTreeMap<Labels, Mat> {
        &self.terms
    }

    /// Argument words per vertex.
    pub fn arg_words(&self) -> Vec<Vec<Gen>> {
        self.argument.iter().map(ObjectExpr::flatten).collect()
    }

    /// Dimension of the tensor product of the arguments.
    pub fn arg_dim(&self) -> usize {
        self.argument.iter().map(ObjectExpr::dim).product()
    }

    /// Whether every core vanishes.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn check_compatible(&self, other: &SkeinElement) -> Result<()> {
        if self.pattern != other.pattern {
            return Err(alg_err("elements live on different patterns"));
        }
        if self.mode != other.mode {
            return Err(Error::Mode(format!("{} vs {}", self.mode, other.mode)));
        }
        Ok(())
    }

    fn check_same_space(&self, other: &SkeinElement) -> Result<()> {
        self.check_compatible(other)?;
        if self.arg_words() != other.arg_words() {
            return Err(alg_err("elements have different arguments"));
        }
        Ok(())
    }

    fn map_cores(&self, mode: RingMode, f: impl Fn(&Mat) -> Result<Mat>) -> Result<SkeinElement> {
        let mut out = SkeinElement::zero(&self.pattern, self.argument.clone(), mode)?;
        for (l, m) in &self.terms {
            out.add_term(l.clone(), f(m)?)?;
        }
        Ok(out)
    }

    /// Sum.
    pub fn add(&self, other: &SkeinElement) -> Result<SkeinElement> {
        self.check_same_space(other)?;
        let mut out = self.clone();
        for (l, m) in &other.terms {
            out.add_term(l.clone(), m.clone())?;
        }
        Ok(out)
    }

    /// Difference.
    pub fn sub(&self, other: &SkeinElement) -> Result<SkeinElement> {
        self.add(&other.neg())
    }

    /// Negation.
    pub fn neg(&self) -> SkeinElement {
        SkeinElement { terms: self.terms.iter().map(|(l, m)| (l.clone(), m.neg())).collect(), ..self.clone() }
    }

    /// Multiply by a scalar.
    pub fn scale(&self, c: &ScalarSeries) -> Result<SkeinElement> {
        self.map_cores(self.mode, |m| m.scale(c))
    }

    /// Constant part over the classical ring.
    pub fn part0(&self) -> SkeinElement {
        self.map_cores(RingMode::Classical, |m| Ok(m.part0())).expect("shapes preserved")
    }

    /// First-order part; requires a vanishing constant part.
    pub fn part1(&self) -> Result<SkeinElement> {
        self.map_cores(RingMode::Classical, Mat::part1)
    }

    /// Apply the mode homomorphism.
    pub fn convert(&self, mode: RingMode) -> Result<SkeinElement> {
        self.map_cores(mode, |m| m.convert(mode))
    }

    /// Replace the argument, keeping the cores. The flattened words must agree.
    pub fn retype(&self, argument: Vec<ObjectExpr>) -> Result<SkeinElement> {
        let words: Vec<Vec<Gen>> = argument.iter().map(ObjectExpr::flatten).collect();
        if words != self.arg_words() {
            return Err(alg_err("retype must keep the argument words"));
        }
        Ok(SkeinElement { argument, ..self.clone() })
    }

    /// Precompose every core with `m: new_argument -> argument`.
    pub fn precompose(&self, m: &Mat, new_argument: Vec<ObjectExpr>) -> Result<SkeinElement> {
        let new_dim: usize = new_argument.iter().map(ObjectExpr::dim).product();
        if m.rows() != self.arg_dim() || m.cols() != new_dim {
            return Err(alg_err("precomposition does not fit the argument"));
        }
        let mut out = SkeinElement::zero(&self.pattern, new_argument, self.mode)?;
        for (l, c) in &self.terms {
            out.add_term(l.clone(), c.mul(m)?)?;
        }
        Ok(out)
    }

    /// Functoriality in the argument at one vertex: precompose with `x`,
    /// whose target must be the current argument there.
    pub fn action(&self, v: usize, x: &Morphism) -> Result<SkeinElement> {
        if v >= self.argument.len() {
            return Err(alg_err(format!("no vertex {v}")));
        }
        if x.target.flatten() != self.argument[v].flatten() {
            return Err(alg_err(format!("morphism target {} does not match argument {}", x.target, self.argument[v])));
        }
        if x.mode() != self.mode {
            return Err(Error::Mode(format!("{} vs {}", x.mode(), self.mode)));
        }
        let mut m = Mat::identity(self.mode, 1);
        for (w, arg) in self.argument.iter().enumerate() {
            let f = if w == v { x.mat.clone() } else { Mat::identity(self.mode, arg.dim()) };
            m = m.kron(&f)?;
        }
        let mut arg = self.argument.clone();
        arg[v] = x.source.clone();
        self.precompose(&m, arg)
    }

    /// Exact equality of canonical forms.
    pub fn equal(&self, other: &SkeinElement) -> bool {
        self.pattern == other.pattern && self.mode == other.mode && self.arg_words() == other.arg_words() && self.terms == other.terms
    }

    /// Closed curve through slots paired by nested coevaluations.
    ///
    /// `labels` gives one label per handle; `pairs` lists slot pairs
    /// `(vertex, slot)` joined by a cap. Pairs must not cross and must join
    /// dual objects at the same vertex. The argument is trivial.
    pub fn closed_curve(backend: &Backend, pattern: &SurfacePattern, labels: &[u32], pairs: &[(Slot, Slot)]) -> Result<SkeinElement> {
        let mode = backend.mode();
        let words = boundary_words(pattern, labels);
        let mut offsets = Vec::new();
        let mut acc = 0;
        for w in &words {
            offsets.push(acc);
            acc += w.len();
        }
        let flat: Vec<Gen> = words.concat();
        let dims: Vec<usize> = flat.iter().map(|g| g.dim()).collect();
        let mut partner: Vec<Option<usize>> = vec![None; flat.len()];
        for &((va, sa), (vb, sb)) in pairs {
            if va != vb {
                return Err(alg_err("closed curve pairs must join slots of one vertex"));
            }
            let (a, b) = (offsets[va] + sa.min(sb), offsets[va] + sa.max(sb));
            if flat[b] != flat[a].dualize() {
                return Err(alg_err(format!("slots {sa} and {sb} carry {} and {}, which are not dual", flat[a], flat[b])));
            }
            partner[a] = Some(b);
            partner[b] = Some(a);
        }
        let mut opened = Vec::new();
        for (i, p) in partner.iter().enumerate() {
            match p {
                None if flat[i].label != 0 => return Err(alg_err(format!("slot {i} with label {} is unpaired", flat[i]))),
                Some(j) if *j > i => opened.push(*j),
                Some(_) if opened.pop() != Some(i) => return Err(alg_err("closed curve pairs cross")),
                Some(_) => {}
                None => {}
            }
        }
        let coevs: Vec<Option<Mat>> = (0..flat.len())
            .map(|i| match partner[i] {
                Some(j) if j > i => backend.coev_gen(flat[i]).map(Some),
                _ => Ok(None),
            })
            .collect::<Result<_>>()?;
        let total: usize = dims.iter().product();
        let mut core = Mat::zeros(mode, total, 1);
        for r in 0..total {
            let digits = crate::linalg::unflatten(r, &dims);
            let mut val = ScalarSeries::one(mode);
            for (i, c) in coevs.iter().enumerate() {
                if let Some(c) = c {
                    let j = partner[i].expect("paired");
                    let e = c.get(digits[i] * dims[j] + digits[j], 0);
                    if e.is_zero() {
                        val = ScalarSeries::zero(mode);
                        break;
                    }
                    val = val.mul(&e)?;
                }
            }
            if !val.is_zero() {
                core.set(r, 0, &val);
            }
        }
        SkeinElement::from_terms(pattern, vec![ObjectExpr::Unit; pattern.vertex_count()], mode, vec![(labels.to_vec(), core)])
    }

    /// Trace of one handle with the given label; both ends must sit at one vertex.
    pub fn handle_trace(backend: &Backend, pattern: &SurfacePattern, h: usize, label: u32) -> Result<SkeinElement> {
        let handle = pattern.handles().get(h).ok_or_else(|| alg_err(format!("no handle {h}")))?;
        let [a, b] = handle.ends;
        let mut labels = vec![0; pattern.handles().len()];
        labels[h] = label;
        SkeinElement::closed_curve(backend, pattern, &labels, &[((a.v, a.slot), (b.v, b.slot))])
    }

    /// Trace of the product of two handles `h1 h2` whose slots at one
    /// vertex read `h1, h2, h1*, h2*`.
    pub fn product_trace(backend: &Backend, pattern: &SurfacePattern, h1: usize, h2: usize, label: u32) -> Result<SkeinElement> {
        let hs = pattern.handles();
        let (a, b) = (hs[h1].ends, hs[h2].ends);
        let mut labels = vec![0; hs.len()];
        labels[h1] = label;
        labels[h2] = label;
        let pairs = [((a[0].v, a[0].slot), (b[1].v, b[1].slot)), ((b[0].v, b[0].slot), (a[1].v, a[1].slot))];
        SkeinElement::closed_curve(backend, pattern, &labels, &pairs)
    }

    /// Random element: `n_terms` terms with labels from `labels` and random
    /// module maps as cores.
    pub fn random<R: Rng + ?Sized>(
        rng: &mut R,
        backend: &Backend,
        pattern: &SurfacePattern,
        argument: Vec<ObjectExpr>,
        labels: &[u32],
        n_terms: usize,
    ) -> Result<SkeinElement> {
        let mut s = SkeinElement::zero(pattern, argument, backend.mode())?;
        for _ in 0..n_terms {
            let l: Labels = (0..pattern.handles().len()).map(|_| labels[rng.gen_range(0..labels.len())]).collect();
            let mut core = Mat::zeros(s.mode, word_dim(&boundary_word(pattern, &l)), s.arg_dim());
            for b in s.core_basis(backend, &l)? {
                core = core.add(&b.scale(&backend.random_scalar(rng))?)?;
            }
            s.add_term(l, core)?;
        }
        Ok(s)
    }

    /// Basis of the cores allowed for `labels`: tensor products over vertices
    /// of module maps `X_v -> W_v(labels)`.
    pub fn core_basis(&self, backend: &Backend, labels: &[u32]) -> Result<Vec<Mat>> {
        let mut acc = vec![Mat::identity(backend.mode(), 1)];
        for (x, w) in self.arg_words().iter().zip(boundary_words(&self.pattern, labels)) {
            let basis = backend.hom_basis(x, &w)?;
            let mut next = Vec::with_capacity(acc.len() * basis.len());
            for a in &acc {
                for b in basis.iter() {
                    next.push(a.kron(b)?);
                }
            }
            acc = next;
        }
        Ok(acc)
    }

    /// Whether every core is a tensor product of module maps at the vertices.
    pub fn is_admissible(&self, backend: &Backend) -> Result<bool> {
        for (l, core) in &self.terms {
            let basis = self.core_basis(backend, l)?;
            let cols: Vec<Mat> = basis.iter().map(flatten_col).collect();
            if cols.is_empty() || solve_exact(&Mat::hcat(&cols)?.part0(), &flatten_col(&core.part0())).is_err() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Lift a classical element to a deformed backend along hom bases: every
    /// classical core is written in the constant parts of the deformed basis.
    pub fn lift(&self, backend: &Backend) -> Result<SkeinElement> {
        if self.mode != RingMode::Classical {
            return Err(Error::Mode("only classical elements are lifted".into()));
        }
        let mode = backend.mode();
        let mut out = SkeinElement::zero(&self.pattern, self.argument.clone(), mode)?;
        for (l, core) in &self.terms {
            let basis = self.core_basis(backend, l)?;
            if basis.is_empty() {
                return Err(alg_err("core is not a module map"));
            }
            let cols: Vec<Mat> = basis.iter().map(|b| flatten_col(&b.part0())).collect();
            let a = Mat::hcat(&cols)?;
            let coeffs = solve_exact(&a, &flatten_col(core))?;
            let mut lifted = Mat::zeros(mode, core.rows(), core.cols());
            for (c, b) in coeffs.iter().zip(basis.iter()) {
                lifted = lifted.add(&b.scale(&ScalarSeries::constant(mode, c.clone()))?)?;
            }
            out.add_term(l.clone(), lifted)?;
        }
        Ok(out)
    }

    /// JSON form.
    pub fn to_json(&self) -> Value {
        let src = self.argument.iter().fold(ObjectExpr::Unit, |acc, a| otensor(&acc, a));
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(l, m)| {
                let tgt = ObjectExpr::from_word(&boundary_word(&self.pattern, l));
                json!({"labels": l.iter().map(|&x| label_name(x)).collect::<Vec<_>>(), "core": matrix_json(&src, &tgt, m)})
            })
            .collect();
        json!({
            "pattern": self.pattern.to_json(),
            "argument": self.argument.iter().map(ObjectExpr::to_json).collect::<Vec<_>>(),
            "mode": self.mode.name(),
            "order": self.mode.order(),
            "terms": terms,
        })
    }

    /// Parse the JSON form.
    pub fn from_json(v: &Value) -> Result<SkeinElement> {
        let bad = |m: &str| Error::Parse(format!("skein element: {m}"));
        let pattern = SurfacePattern::from_json(v.get("pattern").ok_or_else(|| bad("missing \"pattern\""))?)?;
        let argument = match v.get("argument") {
            Some(a) => a
                .as_array()
                .ok_or_else(|| bad("\"argument\" must be an array"))?
                .iter()
                .map(ObjectExpr::from_json)
                .collect::<Result<Vec<_>>>()?,
            None => vec![ObjectExpr::Unit; pattern.vertex_count()],
        };
        let mode_name = v.get("mode").and_then(Value::as_str);
        let order = v.get("order").and_then(Value::as_u64);
        let mut mode = match (mode_name, order) {
            (Some(m), Some(o)) => Some(RingMode::from_name(m, o as usize)?),
            _ => None,
        };
        let mut terms = Vec::new();
        for t in v.get("terms").and_then(Value::as_array).ok_or_else(|| bad("missing \"terms\""))? {
            let labels = t
                .get("labels")
                .and_then(Value::as_array)
                .ok_or_else(|| bad("term needs \"labels\""))?
                .iter()
                .map(|x| x.as_str().ok_or_else(|| bad("labels must be strings")).and_then(parse_label))
                .collect::<Result<Labels>>()?;
            let core = mat_from_json(t.get("core").ok_or_else(|| bad("term needs \"core\""))?)?;
            match mode {
                None => mode = Some(core.mode()),
                Some(m) if m != core.mode() => return Err(Error::Mode(format!("term in {} inside an element in {m}", core.mode()))),
                _ => {}
            }
            terms.push((labels, core));
        }
        SkeinElement::from_terms(&pattern, argument, mode.unwrap_or(RingMode::Classical), terms)
    }
}

impl PartialEq for SkeinElement {
    fn eq(&self, other: &Self) -> bool {
        self.equal(other)
    }
}

impl Serialize for SkeinElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for SkeinElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        SkeinElement::from_json(&v).map_err(D::Error::custom)
    }
}

fn flatten_col(m: &Mat) -> Mat {
    let mut out = Mat::zeros(m.mode(), m.rows() * m.cols(), 1);
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let c = m.get(i, j);
            if !c.is_zero() {
                out.set(i * m.cols() + j, 0, &c);
            }
        }
    }
    out
}

/// Solve `a x = b` exactly for a classical matrix with independent columns.
fn solve_exact(a: &Mat, b: &Mat) -> Result<Vec<crate::scalars::Q>> {
    let aug = Mat::hcat(&[a.clone(), b.neg()])?;
    let ker = aug.kernel()?;
    let n = a.cols();
    for k in 0..ker.cols() {
        let last = ker.get(n, k).part0();
        if !num_traits::Zero::is_zero(&last) {
            return Ok((0..n).map(|i| ker.get(i, k).part0() / &last).collect());
        }
    }
    Err(alg_err("core is not in the span of module maps"))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Tag {
    X(usize),
    Y(usize),
    Z(usize),
}

/// Stacking product `mu(s1, s2)` with `s1` above `s2`.
pub fn mu(backend: &Backend, s1: &SkeinElement, s2: &SkeinElement) -> Result<SkeinElement> {
    s1.check_compatible(s2)?;
    if s1.mode != backend.mode() {
        return Err(Error::Mode(format!("elements in {} but backend in {}", s1.mode, backend.mode())));
    }
    if !backend.is_strict() {
        return Err(alg_err("skein products need a strict backend; use the Drinfeld backend at order 2 or less"));
    }
    let p = &s1.pattern;
    let argument: Vec<ObjectExpr> = s1.argument.iter().zip(&s2.argument).map(|(a, b)| otensor(a, b)).collect();
    let mut out = SkeinElement::zero(p, argument, s1.mode)?;
    for (l1, f) in &s1.terms {
        for (l2, g) in &s2.terms {
            for (labels, core) in term_product(backend, p, &s1.arg_words(), &s2.arg_words(), l1, f, l2, g)? {
                out.add_term(labels, core)?;
            }
        }
    }
    Ok(out)
}

/// Action of `(x)_v beta^-1_{Y_v, X_v}` on `mu(s2, s1)`: the opposite product
/// with under-crossings, landing in `E(X (x) Y)`.
pub fn mu_op_minus(backend: &Backend, s1: &SkeinElement, s2: &SkeinElement) -> Result<SkeinElement> {
    let rev = mu(backend, s2, s1)?;
    let xw = s1.arg_words();
    let yw = s2.arg_words();
    let mut m = Mat::identity(backend.mode(), 1);
    for (x, y) in xw.iter().zip(&yw) {
        m = m.kron(&backend.braiding_words(y, x)?.inverse()?)?;
    }
    let argument: Vec<ObjectExpr> = s1.argument.iter().zip(&s2.argument).map(|(a, b)| otensor(a, b)).collect();
    rev.precompose(&m, argument)
}

/// Per-vertex column order `(X_0, Y_0, X_1, Y_1, ...)` for `F (x) G`.
pub(crate) fn interleave_columns(m: &Mat, xw: &[Vec<Gen>], yw: &[Vec<Gen>]) -> Result<Mat> {
    let k = xw.len();
    let dims: Vec<usize> = xw.iter().chain(yw).map(|w| word_dim(w)).collect();
    let perm: Vec<usize> = (0..2 * k).map(|i| if i % 2 == 0 { i / 2 } else { k + i / 2 }).collect();
    m.permute_col_factors(&dims, &perm)
}

/// `F (x) G` with columns interleaved per vertex and rows grouped per
/// vertex as `[W_v(l1), W_v(l2)]`. Returns the matrix and the row tags.
pub(crate) fn grouped_kron(
    p: &SurfacePattern,
    xw: &[Vec<Gen>],
    yw: &[Vec<Gen>],
    l1: &[u32],
    f: &Mat,
    l2: &[u32],
    g: &Mat,
) -> Result<(Mat, Vec<Tag>, Vec<Gen>)> {
    let m = interleave_columns(&f.kron(g)?, xw, yw)?;
    let w1 = boundary_word(p, l1);
    let w2 = boundary_word(p, l2);
    let n = w1.len();
    let dims: Vec<usize> = w1.iter().chain(&w2).map(|g| g.dim()).collect();
    let mut perm = Vec::with_capacity(2 * n);
    let mut off = 0;
    for v in 0..p.vertex_count() {
        let c = p.slots(v).len();
        perm.extend(off..off + c);
        perm.extend(n + off..n + off + c);
        off += c;
    }
    let m = m.permute_row_factors(&dims, &perm)?;
    let tags: Vec<Tag> = perm.iter().map(|&i| if i < n { Tag::X(i) } else { Tag::Y(i - n) }).collect();
    let gens: Vec<Gen> = perm.iter().map(|&i| if i < n { w1[i] } else { w2[i - n] }).collect();
    Ok((m, tags, gens))
}

/// Target tag order: at a start slot `(x, y)`, at an end slot `(y, x)`;
/// with `swap` the opposite.
pub(crate) fn band_layout(p: &SurfacePattern, swap: bool) -> Vec<Tag> {
    let mut out = Vec::new();
    let mut idx = 0;
    for v in 0..p.vertex_count() {
        for (_, end) in p.slots(v) {
            let x_first = (end == 0) != swap;
            if x_first {
                out.extend([Tag::X(idx), Tag::Y(idx)]);
            } else {
                out.extend([Tag::Y(idx), Tag::X(idx)]);
            }
            idx += 1;
        }
    }
    out
}

/// Global slot index of every handle end.
pub(crate) fn end_index(p: &SurfacePattern) -> Vec<[usize; 2]> {
    let mut out = vec![[0; 2]; p.handles().len()];
    let mut idx = 0;
    for v in 0..p.vertex_count() {
        for (h, end) in p.slots(v) {
            out[h][end] = idx;
            idx += 1;
        }
    }
    out
}

/// Fuse the parallel strands of every handle with Clebsch-Gordan maps.
///
/// `m` has rows in the band layout given by `tags`. With `swap` the start
/// pair is `(y, x)`, so the decomposition of `V_{l2} (x) V_{l1}` is used.
#[allow(clippy::too_many_arguments)]
pub(crate) fn fuse_bands(
    backend: &Backend,
    p: &SurfacePattern,
    m: Mat,
    tags: Vec<Tag>,
    gens: Vec<Gen>,
    l1: &[u32],
    l2: &[u32],
    swap: bool,
) -> Result<Vec<(Labels, Mat)>> {
    let ends = end_index(p);
    let nh = p.handles().len();
    let mut states: Vec<(Labels, Mat, Vec<Tag>, Vec<usize>)> =
        vec![(vec![0; nh], m, tags, gens.iter().map(|g| g.dim()).collect())];
    for (h, e) in ends.iter().enumerate() {
        let (a, b) = if swap { (l2[h], l1[h]) } else { (l1[h], l2[h]) };
        let comps = backend.cg_decompose(a, b)?;
        let mut next = Vec::new();
        for (labels, mat, tags, dims) in states {
            let find = |slot: usize| tags.iter().position(|t| matches!(t, Tag::X(i) | Tag::Y(i) if *i == slot)).expect("tag present");
            let ps = find(e[0]);
            let pe = find(e[1]);
            for comp in comps.iter() {
                let dz = comp.label as usize + 1;
                let (da, db) = (a as usize + 1, b as usize + 1);
                // End pair reads (b*, a*); the dual of the embedding with reversed indices.
                let mut dual_embed = Mat::zeros(backend.mode(), dz, da * db);
                for i in 0..da {
                    for j in 0..db {
                        for z in 0..dz {
                            let c = comp.embed.get(i * db + j, z);
                            if !c.is_zero() {
                                dual_embed.set(z, j * da + i, &c);
                            }
                        }
                    }
                }
                // Apply at the later position first so the earlier one stays valid.
                let (first, second) = if ps < pe { ((ps, &comp.project), (pe, &dual_embed)) } else { ((pe, &dual_embed), (ps, &comp.project)) };
                let m1 = mat.apply_local(&dims, second.0, 2, second.1)?;
                let mut d1 = dims.clone();
                d1.splice(second.0..second.0 + 2, [dz]);
                let m2 = m1.apply_local(&d1, first.0, 2, first.1)?;
                let mut d2 = d1.clone();
                d2.splice(first.0..first.0 + 2, [dz]);
                let mut t2 = tags.clone();
                t2.splice(second.0..second.0 + 2, [Tag::Z(h)]);
                t2.splice(first.0..first.0 + 2, [Tag::Z(h)]);
                if m2.is_zero() {
                    continue;
                }
                let mut l = labels.clone();
                l[h] = comp.label;
                next.push((l, m2, t2, d2));
            }
        }
        states = next;
    }
    Ok(states.into_iter().map(|(l, m, _, _)| (l, m)).collect())
}

/// Braid rows from the grouped order into the band layout. Every crossing
/// passes an `X` strand over a `Y` strand when `x_over`, and under otherwise.
pub(crate) fn shuffle_braid(backend: &Backend, mut m: Mat, tags: &mut [Tag], gens: &mut [Gen], target: &[Tag], x_over: bool) -> Result<Mat> {
    let rank = |t: &Tag| target.iter().position(|u| u == t).expect("tag in layout");
    loop {
        let pos = (0..tags.len().saturating_sub(1)).find(|&i| rank(&tags[i]) > rank(&tags[i + 1]));
        let Some(i) = pos else { break };
        let (a, b) = (gens[i], gens[i + 1]);
        let dims: Vec<usize> = gens.iter().map(|g| g.dim()).collect();
        let op = match (tags[i], x_over) {
            (Tag::X(_), true) | (Tag::Y(_), false) => backend.gen_braid(a, b, false)?,
            _ => backend.gen_braid(b, a, true)?,
        };
        m = m.apply_local(&dims, i, 2, &op)?;
        tags.swap(i, i + 1);
        gens.swap(i, i + 1);
    }
    Ok(m)
}

#[allow(clippy::too_many_arguments)]
fn term_product(
    backend: &Backend,
    p: &SurfacePattern,
    xw: &[Vec<Gen>],
    yw: &[Vec<Gen>],
    l1: &[u32],
    f: &Mat,
    l2: &[u32],
    g: &Mat,
) -> Result<Vec<(Labels, Mat)>> {
    let (m, mut tags, mut gens) = grouped_kron(p, xw, yw, l1, f, l2, g)?;
    let target = band_layout(p, false);
    let m = shuffle_braid(backend, m, &mut tags, &mut gens, &target, true)?;
    fuse_bands(backend, p, m, tags, gens, l1, l2, false)
}
