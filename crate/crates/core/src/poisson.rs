// Copyright (c) The skeinlab Contributors
// SPDX-License-Identifier: Apache-2.0

//! First-order structure of the deformed skein product.
//!
//! `sigma(s1, s2)` is the first-order part of `mu - mu_op_minus` over a
//! deformed backend. It is computed three ways:
//!
//! * algebraically, by lifting classical elements and expanding the
//!   deformed products;
//! * by the intersection rule, inserting one `t` chord for every pair of
//!   boundary ends whose order is reversed when the two elements are laid
//!   side by side and fused;
//! * by the ciliated-graph formula, summing `t` and `r_a` chords per vertex.
//!
//! Helpers check the disk formula, the symmetrization identity, the Leibniz
//! rule, the fusion rule and the Jacobi identity of the induced bracket.

use std::fmt;

use num_traits::One;

use crate::backend::sl2::{classical_rep, h_matrix};
use crate::backend::{Backend, BackendKind, Gen, Morphism, ObjectExpr};
use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::scalars::{q, RingMode, Q};
use crate::skein::{band_layout, fuse_bands, grouped_kron, mu, mu_op_minus, otensor, shuffle_braid, SkeinElement, Tag};
use crate::surface::{Fused, FusionOrder, SurfacePattern};

/// How a value of `sigma` was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SigmaMethod {
    /// First-order part of the deformed products.
    Algebraic,
    /// Chord insertions at reversed boundary ends.
    Goldman,
    /// Ciliated-graph formula with `t` and `r_a` chords.
    FockRosly,
}

impl SigmaMethod {
    /// Command-line name.
    pub fn name(self) -> &'static str {
        match self {
            SigmaMethod::Algebraic => "algebraic",
            SigmaMethod::Goldman => "goldman",
            SigmaMethod::FockRosly => "fock-rosly",
        }
    }

    /// Parse a command-line name.
    pub fn from_name(s: &str) -> Result<Self> {
        match s {
            "algebraic" => Ok(SigmaMethod::Algebraic),
            "goldman" => Ok(SigmaMethod::Goldman),
            "fock-rosly" | "fock_rosly" => Ok(SigmaMethod::FockRosly),
            _ => Err(Error::Parse(format!("unknown sigma method {s:?}"))),
        }
    }
}

impl fmt::Display for SigmaMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A classical element together with the method that produced it.
#[derive(Clone, Debug)]
pub struct SigmaResult {
    /// Value in the classical algebra.
    pub element: SkeinElement,
    /// Provenance.
    pub method: SigmaMethod,
}

/// Two-tensors of `sl2` used as chords.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChordTensor {
    /// `t = e(x)f + f(x)e + h(x)h/2`.
    T,
    /// `r_a = (e(x)f - f(x)e)/2`.
    RAntisym,
}

impl ChordTensor {
    fn expansion(self) -> Vec<(Q, Generator, Generator)> {
        use Generator::*;
        match self {
            ChordTensor::T => vec![(Q::one(), E, F), (Q::one(), F, E), (q(1, 2), H, H)],
            ChordTensor::RAntisym => vec![(q(1, 2), E, F), (q(-1, 2), F, E)],
        }
    }
}

#[derive(Clone, Copy, Debug)]
enum Generator {
    E,
    F,
    H,
}

fn generator_matrix(g: Gen, which: Generator) -> Mat {
    let rep = classical_rep(g, RingMode::Classical);
    match which {
        Generator::E => rep.e,
        Generator::F => rep.f,
        Generator::H => h_matrix(RingMode::Classical, &rep.weights),
    }
}

/// One chord joining a boundary end of the first element to one of the second.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChordInsertion {
    /// Vertex of both ends.
    pub vertex: usize,
    /// Global slot index of the first element's end.
    pub first_slot: usize,
    /// Global slot index of the second element's end.
    pub second_slot: usize,
    /// Inserted tensor, first leg on the first element's strand.
    pub tensor: ChordTensor,
    /// Coefficient.
    pub coeff: Q,
}

/// Whether the fourth-part diagonal terms enter the ciliated-graph formula.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum FrDiagonal {
    /// Include `i = j` in the mixed sum.
    #[default]
    Include,
    /// Exclude it.
    Exclude,
}

impl FrDiagonal {
    /// Command-line name.
    pub fn name(self) -> &'static str {
        match self {
            FrDiagonal::Include => "include",
            FrDiagonal::Exclude => "exclude",
        }
    }

    /// Parse `include` or `exclude`.
    pub fn from_name(s: &str) -> Result<Self> {
        match s {
            "include" => Ok(FrDiagonal::Include),
            "exclude" => Ok(FrDiagonal::Exclude),
            _ => Err(Error::Parse(format!("unknown diagonal switch {s:?}"))),
        }
    }
}

fn classical_only(s: &SkeinElement) -> Result<()> {
    if s.mode() != RingMode::Classical {
        return Err(Error::Mode(format!("expected a classical element, got one over {}", s.mode())));
    }
    Ok(())
}

fn deformed_only(backend: &Backend) -> Result<()> {
    if backend.kind() == BackendKind::ClassicalSl2 || !backend.is_deformed() {
        return Err(Error::Mode("sigma needs a deformed backend".into()));
    }
    Ok(())
}

/// `[beta_{Y,X} beta_{X,Y} - id]_1` as a classical morphism of `X (x) Y`.
pub fn extract_t(backend: &Backend, x: &ObjectExpr, y: &ObjectExpr) -> Result<Morphism> {
    deformed_only(backend)?;
    let (xw, yw) = (x.flatten(), y.flatten());
    let sq = backend.braiding_words(&yw, &xw)?.mul(&backend.braiding_words(&xw, &yw)?)?;
    let d = sq.rows();
    let diff = sq.sub(&Mat::identity(backend.mode(), d))?;
    let xy = ObjectExpr::tensor(x.clone(), y.clone());
    Morphism::new(xy.clone(), xy, diff.part1()?)
}

/// Classical stacking product.
pub fn mu0(s1: &SkeinElement, s2: &SkeinElement) -> Result<SkeinElement> {
    classical_only(s1)?;
    mu(&Backend::classical(), s1, s2)
}

fn lifted(backend: &Backend, s: &SkeinElement) -> Result<SkeinElement> {
    if s.mode() == backend.mode() {
        Ok(s.clone())
    } else {
        s.lift(backend)
    }
}

/// `[mu(s1, s2) - mu_op_minus(s1, s2)]_1`, lifting classical inputs first.
pub fn sigma_algebraic(backend: &Backend, s1: &SkeinElement, s2: &SkeinElement) -> Result<SkeinElement> {
    deformed_only(backend)?;
    let (a, b) = (lifted(backend, s1)?, lifted(backend, s2)?);
    let diff = mu(backend, &a, &b)?.sub(&mu_op_minus(backend, &a, &b)?)?;
    diff.part1()
}

/// Chords of the intersection rule: a `t` chord for every pair of ends at
/// one vertex where the first element's end lies right of the second's once
/// the second element's strands are slid in on the inside of each band.
pub fn goldman_chords(p: &SurfacePattern) -> Vec<ChordInsertion> {
    let mut out = Vec::new();
    let mut base = 0;
    for v in 0..p.vertex_count() {
        let slots = p.slots(v);
        for (i, &(_, end_i)) in slots.iter().enumerate() {
            for j in 0..slots.len() {
                if i > j || (i == j && end_i == 0) {
                    out.push(ChordInsertion { vertex: v, first_slot: base + i, second_slot: base + j, tensor: ChordTensor::T, coeff: Q::one() });
                }
            }
        }
        base += slots.len();
    }
    out
}

/// Chords of the ciliated-graph formula at every vertex:
/// `sum_i t/2 (i,i') + sum_{i<j} t (j,i') + sum_{i,j} (-t/2 + r_a)(i,j')`.
pub fn fock_rosly_chords(p: &SurfacePattern, diagonal: FrDiagonal) -> Vec<ChordInsertion> {
    let mut out = Vec::new();
    let mut base = 0;
    let half = q(1, 2);
    for v in 0..p.vertex_count() {
        let n = p.slots(v).len();
        let mut push = |a: usize, b: usize, tensor, coeff: Q| {
            out.push(ChordInsertion { vertex: v, first_slot: base + a, second_slot: base + b, tensor, coeff })
        };
        for i in 0..n {
            push(i, i, ChordTensor::T, half.clone());
            for j in 0..n {
                if i < j {
                    push(j, i, ChordTensor::T, Q::one());
                }
                if i != j || diagonal == FrDiagonal::Include {
                    push(i, j, ChordTensor::T, -half.clone());
                    push(i, j, ChordTensor::RAntisym, Q::one());
                }
            }
        }
        base += n;
    }
    out
}

/// Classical product with chords inserted between the two elements' ends
/// before the bands are fused.
pub fn product_with_chords(s1: &SkeinElement, s2: &SkeinElement, chords: &[ChordInsertion]) -> Result<SkeinElement> {
    classical_only(s1)?;
    classical_only(s2)?;
    if s1.pattern() != s2.pattern() {
        return Err(Error::Algebra("elements live on different patterns".into()));
    }
    let backend = Backend::classical();
    let p = s1.pattern();
    let (xw, yw) = (s1.arg_words(), s2.arg_words());
    let argument: Vec<ObjectExpr> = s1.argument().iter().zip(s2.argument()).map(|(a, b)| otensor(a, b)).collect();
    let mut out = SkeinElement::zero(p, argument, RingMode::Classical)?;
    let target = band_layout(p, false);
    for (l1, f) in s1.terms() {
        for (l2, g) in s2.terms() {
            let (m, tags, gens) = grouped_kron(p, &xw, &yw, l1, f, l2, g)?;
            let dims: Vec<usize> = gens.iter().map(|g| g.dim()).collect();
            let pos = |t: Tag| tags.iter().position(|u| *u == t).expect("tag present");
            let mut acc = Mat::zeros(RingMode::Classical, m.rows(), m.cols());
            for c in chords {
                let (px, py) = (pos(Tag::X(c.first_slot)), pos(Tag::Y(c.second_slot)));
                for (k, a, b) in c.tensor.expansion() {
                    let term = m
                        .apply_local(&dims, px, 1, &generator_matrix(gens[px], a))?
                        .apply_local(&dims, py, 1, &generator_matrix(gens[py], b))?;
                    acc.add_assign_unchecked(&term.scale_q(&(&k * &c.coeff)));
                }
            }
            let (mut tags, mut gens) = (tags.clone(), gens.clone());
            let acc = shuffle_braid(&backend, acc, &mut tags, &mut gens, &target, true)?;
            for (labels, core) in fuse_bands(&backend, p, acc, tags, gens, l1, l2, false)? {
                out.add_term(labels, core)?;
            }
        }
    }
    Ok(out)
}

/// `sigma` by the intersection rule on classical elements.
pub fn sigma_goldman(s1: &SkeinElement, s2: &SkeinElement) -> Result<SkeinElement> {
    product_with_chords(s1, s2, &goldman_chords(s1.pattern()))
}

/// `sigma` by the ciliated-graph formula on classical elements.
pub fn fock_rosly_sigma(s1: &SkeinElement, s2: &SkeinElement, diagonal: FrDiagonal) -> Result<SkeinElement> {
    product_with_chords(s1, s2, &fock_rosly_chords(s1.pattern(), diagonal))
}

/// Evaluate `sigma` with the chosen method. Classical inputs are required
/// for the chord methods; the algebraic method lifts them.
pub fn sigma(method: SigmaMethod, backend: &Backend, s1: &SkeinElement, s2: &SkeinElement, diagonal: FrDiagonal) -> Result<SigmaResult> {
    let element = match method {
        SigmaMethod::Algebraic => sigma_algebraic(backend, s1, s2)?,
        SigmaMethod::Goldman => sigma_goldman(&s1.part0(), &s2.part0())?,
        SigmaMethod::FockRosly => fock_rosly_sigma(&s1.part0(), &s2.part0(), diagonal)?,
    };
    Ok(SigmaResult { element, method })
}

/// Sum over `vertices` of the element precomposed with `op(X_v, Y_v)` on
/// the argument pair at that vertex and the identity elsewhere.
pub fn insert_on_pairs(
    s: &SkeinElement,
    xw: &[Vec<Gen>],
    yw: &[Vec<Gen>],
    vertices: &[usize],
    op: impl Fn(&[Gen], &[Gen]) -> Result<Mat>,
) -> Result<SkeinElement> {
    let mode = s.mode();
    let mut out = SkeinElement::zero(s.pattern(), s.argument().to_vec(), mode)?;
    for &w in vertices {
        let mut m = Mat::identity(mode, 1);
        for v in 0..xw.len() {
            let block = if v == w {
                op(&xw[v], &yw[v])?
            } else {
                Mat::identity(mode, crate::backend::word_dim(&xw[v]) * crate::backend::word_dim(&yw[v]))
            };
            m = m.kron(&block)?;
        }
        out = out.add(&s.precompose(&m, s.argument().to_vec())?)?;
    }
    Ok(out)
}

/// `mu0(s1, s2)` precomposed with the sum of `t` on the argument pairs at `vertices`.
pub fn mu0_t_hat(s1: &SkeinElement, s2: &SkeinElement, vertices: &[usize]) -> Result<SkeinElement> {
    let c = Backend::classical();
    insert_on_pairs(&mu0(s1, s2)?, &s1.arg_words(), &s2.arg_words(), vertices, |x, y| c.t_words(x, y))
}

/// `sigma - mu0 (t on the second vertex's arguments)` on the disk with two points.
pub fn disk_formula_defect(backend: &Backend, s1: &SkeinElement, s2: &SkeinElement) -> Result<SkeinElement> {
    if s1.pattern().vertex_count() != 2 || s1.pattern().handles().len() != 1 {
        return Err(Error::Algebra("the disk formula applies to the disk with two marked points".into()));
    }
    let sig = sigma_algebraic(backend, s1, s2)?;
    sig.sub(&mu0_t_hat(&s1.part0(), &s2.part0(), &[1])?)
}

/// `sigma(s1, s2) + flip^*(sigma(s2, s1)) - mu0 t_hat` with `t` at every vertex.
pub fn symmetrization_defect(backend: &Backend, s1: &SkeinElement, s2: &SkeinElement) -> Result<SkeinElement> {
    let c = Backend::classical();
    let a = sigma_algebraic(backend, s1, s2)?;
    let b = sigma_algebraic(backend, s2, s1)?;
    let (xw, yw) = (s1.arg_words(), s2.arg_words());
    let mut flip = Mat::identity(RingMode::Classical, 1);
    for (x, y) in xw.iter().zip(&yw) {
        flip = flip.kron(&c.flip_words(x, y))?;
    }
    let b = b.precompose(&flip, a.argument().to_vec())?;
    let all: Vec<usize> = (0..xw.len()).collect();
    a.add(&b)?.sub(&mu0_t_hat(&s1.part0(), &s2.part0(), &all)?)
}

/// Whether [`symmetrization_defect`] vanishes.
pub fn symmetrization_check(backend: &Backend, s1: &SkeinElement, s2: &SkeinElement) -> Result<bool> {
    Ok(symmetrization_defect(backend, s1, s2)?.is_zero())
}

/// Per-vertex permutation of argument words, as a classical matrix from
/// `source` order to the order of `target`, where both list word blocks and
/// `perm[i]` names the source block placed at position `i`.
fn block_permutation(blocks: &[Vec<Vec<Gen>>], perm: &[usize]) -> Result<Mat> {
    let mut m = Mat::identity(RingMode::Classical, 1);
    for words in blocks {
        let dims: Vec<usize> = words.iter().map(|w| crate::backend::word_dim(w)).collect();
        let d: usize = dims.iter().product();
        let id = Mat::identity(RingMode::Classical, d);
        // Rows permuted: row factor i = column factor perm[i]. Its transpose maps back.
        m = m.kron(&id.permute_row_factors(&dims, perm)?)?;
    }
    Ok(m)
}

/// Leibniz defects in both slots for classical inputs:
/// `sigma(s1 s2, s3) - [sigma(s1, s3) s2 + s1 sigma(s2, s3)]` and
/// `sigma(s1, s2 s3) - [sigma(s1, s2) s3 + s2 sigma(s1, s3)]`,
/// with arguments rearranged into a common order.
pub fn biderivation_defects(backend: &Backend, s1: &SkeinElement, s2: &SkeinElement, s3: &SkeinElement) -> Result<(SkeinElement, SkeinElement)> {
    let (a, b, c) = (s1.part0(), s2.part0(), s3.part0());
    let (aw, bw, cw) = (a.arg_words(), b.arg_words(), c.arg_words());
    let k = aw.len();
    let blocks = |w: [&Vec<Vec<Gen>>; 3]| -> Vec<Vec<Vec<Gen>>> { (0..k).map(|v| vec![w[0][v].clone(), w[1][v].clone(), w[2][v].clone()]).collect() };

    // First slot, target order (A, B, C).
    let lhs = sigma_algebraic(backend, &mu0(&a, &b)?, &c)?;
    let t1 = mu0(&sigma_algebraic(backend, &a, &c)?, &b)?;
    // t1 has (A, C, B); precompose with (A, B, C) -> (A, C, B).
    let t1 = t1.precompose(&block_permutation(&blocks([&aw, &bw, &cw]), &[0, 2, 1])?, lhs.argument().to_vec())?;
    let t2 = mu0(&a, &sigma_algebraic(backend, &b, &c)?)?.retype(lhs.argument().to_vec())?;
    let left = lhs.sub(&t1.add(&t2)?)?;

    // Second slot, target order (A, B, C).
    let rhs = sigma_algebraic(backend, &a, &mu0(&b, &c)?)?;
    let u1 = mu0(&sigma_algebraic(backend, &a, &b)?, &c)?.retype(rhs.argument().to_vec())?;
    // u2 has (B, A, C); precompose with (A, B, C) -> (B, A, C).
    let u2 = mu0(&b, &sigma_algebraic(backend, &a, &c)?)?;
    let u2 = u2.precompose(&block_permutation(&blocks([&aw, &bw, &cw]), &[1, 0, 2])?, rhs.argument().to_vec())?;
    let right = rhs.sub(&u1.add(&u2)?)?;
    Ok((left, right))
}

/// Whether both Leibniz defects vanish.
pub fn biderivation_check(backend: &Backend, s1: &SkeinElement, s2: &SkeinElement, s3: &SkeinElement) -> Result<bool> {
    let (l, r) = biderivation_defects(backend, s1, s2, s3)?;
    Ok(l.is_zero() && r.is_zero())
}

/// Transport an element along a fusion: the merged vertex carries the
/// first vertex's slots and argument, then the second's.
pub fn embed_fused(s: &SkeinElement, f: &Fused) -> Result<SkeinElement> {
    let p = s.pattern();
    let fp = &f.pattern;
    let k = p.vertex_count();
    // New vertex order lists old vertices; the merged one expands to (first, second).
    let mut order: Vec<Vec<usize>> = vec![Vec::new(); fp.vertex_count()];
    for v in 0..k {
        if v != f.first && v != f.second {
            order[f.vertex_map[v]].push(v);
        }
    }
    order[f.merged] = vec![f.first, f.second];
    let old_order: Vec<usize> = order.concat();

    let arg_dims: Vec<usize> = s.argument().iter().map(ObjectExpr::dim).collect();
    let arg_perm = old_order.clone();
    let mut argument = Vec::with_capacity(fp.vertex_count());
    for vs in &order {
        let a = vs.iter().fold(ObjectExpr::Unit, |acc, &v| otensor(&acc, &s.argument()[v]));
        argument.push(a);
    }
    let mut out = SkeinElement::zero(fp, argument, s.mode())?;
    for (labels, core) in s.terms() {
        let words = crate::skein::boundary_words(p, labels);
        let gens: Vec<Gen> = words.concat();
        let dims: Vec<usize> = gens.iter().map(|g| g.dim()).collect();
        let mut offsets = Vec::with_capacity(k);
        let mut acc = 0;
        for w in &words {
            offsets.push(acc);
            acc += w.len();
        }
        let row_perm: Vec<usize> = old_order.iter().flat_map(|&v| offsets[v]..offsets[v] + words[v].len()).collect();
        let m = core.permute_row_factors(&dims, &row_perm)?.permute_col_factors(&arg_dims, &arg_perm)?;
        out.add_term(labels.clone(), m)?;
    }
    Ok(out)
}

/// Defect of the fusion rule for elements on `p` fused at `v1`, `v2`:
/// `sigma_f(i s1, i s2) - [i sigma(s1, s2) . J0 + mu_f0(i s1, i s2) . t_{X2,Y1}]`.
pub fn fusion_defect(backend: &Backend, s1: &SkeinElement, s2: &SkeinElement, v1: usize, v2: usize, order: FusionOrder) -> Result<SkeinElement> {
    let p = s1.pattern();
    let f = p.fuse(v1, v2, order)?;
    let (a, b) = (s1.part0(), s2.part0());
    let (fa, fb) = (embed_fused(&a, &f)?, embed_fused(&b, &f)?);
    let lhs = sigma_algebraic(backend, &fa, &fb)?;

    let sig = embed_fused(&sigma_algebraic(backend, &a, &b)?, &f)?;
    let mu_f = mu0(&fa, &fb)?;
    let (xw, yw) = (a.arg_words(), b.arg_words());
    let (x1, x2, y1, y2) = (&xw[f.first], &xw[f.second], &yw[f.first], &yw[f.second]);
    let c = Backend::classical();
    // At the merged vertex, (X1 X2 Y1 Y2) -> (X1 Y1 X2 Y2) and t on (X2, Y1).
    let merged_words = [x1.clone(), x2.clone(), y1.clone(), y2.clone()];
    let mdims: Vec<usize> = merged_words.iter().map(|w| crate::backend::word_dim(w)).collect();
    let md: usize = mdims.iter().product();
    let j0 = Mat::identity(RingMode::Classical, md).permute_row_factors(&mdims, &[0, 2, 1, 3])?;
    let t23 = Mat::identity(RingMode::Classical, mdims[0])
        .kron(&c.t_words(x2, y1)?)?
        .kron(&Mat::identity(RingMode::Classical, mdims[3]))?;
    let fxw = fa.arg_words();
    let fyw = fb.arg_words();
    let per_vertex = |m: &Mat| -> Result<Mat> {
        let mut out = Mat::identity(RingMode::Classical, 1);
        for v in 0..fxw.len() {
            let block = if v == f.merged {
                m.clone()
            } else {
                Mat::identity(RingMode::Classical, crate::backend::word_dim(&fxw[v]) * crate::backend::word_dim(&fyw[v]))
            };
            out = out.kron(&block)?;
        }
        Ok(out)
    };
    let term1 = sig.precompose(&per_vertex(&j0)?, lhs.argument().to_vec())?;
    let term2 = mu_f.precompose(&per_vertex(&t23)?, lhs.argument().to_vec())?;
    lhs.sub(&term1.add(&term2)?)
}

/// Whether the fusion rule holds, with the defect.
pub fn check_fusion(backend: &Backend, s1: &SkeinElement, s2: &SkeinElement, v1: usize, v2: usize, order: FusionOrder) -> Result<(bool, SkeinElement)> {
    let d = fusion_defect(backend, s1, s2, v1, v2, order)?;
    Ok((d.is_zero(), d))
}

/// `sigma(s1, s2) - mu0 r21_hat` with `r21 = f(x)e + h(x)h/4` on every
/// argument pair: the value the ciliated-graph formula must reproduce.
pub fn fock_rosly_expected(backend: &Backend, s1: &SkeinElement, s2: &SkeinElement) -> Result<SkeinElement> {
    let c = Backend::classical();
    let sig = sigma_algebraic(backend, s1, s2)?;
    let m = mu0(&s1.part0(), &s2.part0())?;
    let all: Vec<usize> = (0..s1.pattern().vertex_count()).collect();
    let corr = insert_on_pairs(&m, &s1.arg_words(), &s2.arg_words(), &all, |x, y| {
        let r = c.r_words(y, x)?;
        c.flip_words(y, x).mul(&r)?.mul(&c.flip_words(x, y))
    })?;
    sig.sub(&corr)
}

/// Antisymmetrized bracket `sigma(s1, s2) - flip^*(sigma(s2, s1))`.
pub fn bracket(backend: &Backend, s1: &SkeinElement, s2: &SkeinElement) -> Result<SkeinElement> {
    let c = Backend::classical();
    let a = sigma_algebraic(backend, s1, s2)?;
    let b = sigma_algebraic(backend, s2, s1)?;
    let mut flip = Mat::identity(RingMode::Classical, 1);
    for (x, y) in s1.arg_words().iter().zip(&s2.arg_words()) {
        flip = flip.kron(&c.flip_words(x, y))?;
    }
    a.sub(&b.precompose(&flip, a.argument().to_vec())?)
}

/// Cyclic sum `{{a,b},c} + {{b,c},a} + {{c,a},b}` for elements with trivial arguments.
pub fn jacobi_defect(backend: &Backend, a: &SkeinElement, b: &SkeinElement, c: &SkeinElement) -> Result<SkeinElement> {
    for s in [a, b, c] {
        if s.argument().iter().any(|x| *x != ObjectExpr::Unit) {
            return Err(Error::Algebra("the Jacobi check needs elements with trivial arguments".into()));
        }
    }
    let x = bracket(backend, &bracket(backend, a, b)?, c)?;
    let y = bracket(backend, &bracket(backend, b, c)?, a)?;
    let z = bracket(backend, &bracket(backend, c, a)?, b)?;
    x.add(&y)?.add(&z)
}

/// The unit argument list of a pattern.
pub fn unit_argument(p: &SurfacePattern) -> Vec<ObjectExpr> {
    vec![ObjectExpr::Unit; p.vertex_count()]
}
