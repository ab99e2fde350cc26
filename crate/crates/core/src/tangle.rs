// Copyright (c) The skeinlab Contributors
// SPDX-License-Identifier: Apache-2.0

//! Slice words for ribbon graphs in the square and their evaluation.
//!
//! A [`TangleWord`] is a bottom boundary, a top boundary and a list of
//! slices. Each slice holds cells placed at strand positions of the
//! interface below it; strands not covered by a cell pass straight up.
//!
//! Evaluation keeps every intermediate interface in left-nested bracketing.
//! Before a cell acts on positions `p..p+k` the interface is rebracketed so
//! that those strands form one block (in the coupon's own bracketing for
//! coupons), and afterwards it is brought back. In strict backends all of
//! these rebracketings are identities and are skipped.

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Map, Value};

use crate::backend::{label_name, parse_label, word_dim, word_dims, Backend, Gen, Morphism, ObjectExpr};
use crate::error::{Error, Result};
use crate::linalg::Mat;

/// Orientation of a strand end: `Up` carries `V`, `Down` carries `V*`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Orient {
    /// Upward, written `+`.
    Up,
    /// Downward, written `-`.
    Down,
}

impl Orient {
    fn sign(self) -> &'static str {
        match self {
            Orient::Up => "+",
            Orient::Down => "-",
        }
    }

    fn parse(s: &str) -> Result<Self> {
        match s {
            "+" => Ok(Orient::Up),
            "-" => Ok(Orient::Down),
            _ => Err(Error::Parse(format!("orientation must be \"+\" or \"-\", got {s:?}"))),
        }
    }
}

/// A labeled, oriented strand end on a slice interface.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct StrandEnd {
    /// Simple label.
    pub label: u32,
    /// Orientation.
    pub orient: Orient,
}

impl StrandEnd {
    /// Upward strand with the given label.
    pub fn up(label: u32) -> Self {
        StrandEnd { label, orient: Orient::Up }
    }

    /// Downward strand with the given label.
    pub fn down(label: u32) -> Self {
        StrandEnd { label, orient: Orient::Down }
    }

    /// Object carried by this end.
    pub fn gen(self) -> Gen {
        Gen { label: self.label, dual: self.orient == Orient::Down }
    }

    /// End carrying the given object.
    pub fn from_gen(g: Gen) -> Self {
        StrandEnd { label: g.label, orient: if g.dual { Orient::Down } else { Orient::Up } }
    }

    fn to_json(self) -> Value {
        json!([label_name(self.label), self.orient.sign()])
    }

    fn from_json(v: &Value) -> Result<Self> {
        let bad = || Error::Parse(format!("strand end must be [label, orientation], got {v}"));
        let arr = v.as_array().filter(|a| a.len() == 2).ok_or_else(bad)?;
        let label = parse_label(arr[0].as_str().ok_or_else(bad)?)?;
        let orient = Orient::parse(arr[1].as_str().ok_or_else(bad)?)?;
        Ok(StrandEnd { label, orient })
    }
}

impl fmt::Display for StrandEnd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", label_name(self.label), self.orient.sign())
    }
}

/// Elementary pieces of a slice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Cell {
    /// Straight strand.
    Id,
    /// Positive crossing; the left strand passes over to the right.
    BraidOver,
    /// Negative crossing.
    BraidUnder,
    /// Creates two strands; the given end is the left one.
    Cup(StrandEnd),
    /// Joins two adjacent strands of dual objects.
    Cap,
    /// Positive full twist.
    TwistPos,
    /// Negative full twist.
    TwistNeg,
    /// Coupon looked up in the coupon table.
    Coupon(String),
    /// Explicit rebracketing of three adjacent blocks of the given sizes.
    /// Evaluation already inserts coherent associators, so this cell only
    /// records a bracketing change and evaluates to the identity.
    Assoc {
        /// Sizes of the three blocks.
        sizes: [usize; 3],
        /// `true` for `(XY)Z -> X(YZ)`.
        forward: bool,
    },
}

/// A cell together with its leftmost strand position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlacedCell {
    /// The cell.
    pub cell: Cell,
    /// Position of the leftmost input strand (or insertion point).
    pub at: usize,
}

impl PlacedCell {
    /// Shorthand constructor.
    pub fn new(cell: Cell, at: usize) -> Self {
        PlacedCell { cell, at }
    }
}

/// A slice word with its coupon table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TangleWord {
    /// Bottom boundary.
    pub bottom: Vec<StrandEnd>,
    /// Top boundary.
    pub top: Vec<StrandEnd>,
    /// Slices from bottom to top.
    pub slices: Vec<Vec<PlacedCell>>,
    /// Coupon morphisms by identifier.
    pub coupons: BTreeMap<String, Morphism>,
}

/// Site of a local move: slice index and strand position.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Site {
    /// Slice index (insertion point for insertion moves).
    pub slice: usize,
    /// Strand position.
    pub pos: usize,
}

/// Local moves preserving the evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Move {
    /// Insert or cancel a crossing and its inverse.
    R2,
    /// Slide a strand across a crossing.
    R3,
    /// Trade a twist for a kink or back.
    FramedR1,
    /// Insert or remove a zigzag with the cup on the left.
    SnakeLeft,
    /// Insert or remove a zigzag with the cup on the right.
    SnakeRight,
    /// Slide a coupon through the strand crossing under it on its right.
    CouponSlide,
}

impl Move {
    /// Every move kind.
    pub const ALL: [Move; 6] = [Move::R2, Move::R3, Move::FramedR1, Move::SnakeLeft, Move::SnakeRight, Move::CouponSlide];

    /// Short name.
    pub fn name(self) -> &'static str {
        match self {
            Move::R2 => "R2",
            Move::R3 => "R3",
            Move::FramedR1 => "FramedR1",
            Move::SnakeLeft => "SnakeLeft",
            Move::SnakeRight => "SnakeRight",
            Move::CouponSlide => "CouponSlide",
        }
    }
}

fn word_err(msg: impl Into<String>) -> Error {
    Error::Word(msg.into())
}

fn move_err(msg: impl Into<String>) -> Error {
    Error::Move(msg.into())
}

fn gens(ends: &[StrandEnd]) -> Vec<Gen> {
    ends.iter().map(|e| e.gen()).collect()
}

impl TangleWord {
    /// Identity word on the given strands.
    pub fn identity(ends: Vec<StrandEnd>) -> Self {
        TangleWord { bottom: ends.clone(), top: ends, slices: Vec::new(), coupons: BTreeMap::new() }
    }

    /// Word with the top boundary computed from the slices.
    pub fn from_slices(bottom: Vec<StrandEnd>, slices: Vec<Vec<PlacedCell>>, coupons: BTreeMap<String, Morphism>) -> Result<Self> {
        let mut w = TangleWord { bottom: bottom.clone(), top: bottom, slices, coupons };
        w.top = w.raw_interfaces()?.pop().expect("nonempty");
        Ok(w)
    }

    /// Number of slices.
    pub fn len(&self) -> usize {
        self.slices.len()
    }

    /// Whether there are no slices.
    pub fn is_empty(&self) -> bool {
        self.slices.is_empty()
    }

    /// Interfaces below the first slice, between slices and above the last.
    pub fn interfaces(&self) -> Result<Vec<Vec<StrandEnd>>> {
        let out = self.raw_interfaces()?;
        if out.last() != Some(&self.top) {
            return Err(word_err("top boundary does not match the slices"));
        }
        Ok(out)
    }

    fn raw_interfaces(&self) -> Result<Vec<Vec<StrandEnd>>> {
        let mut out = vec![self.bottom.clone()];
        for (s, slice) in self.slices.iter().enumerate() {
            let cur = out.last().expect("nonempty");
            out.push(self.apply_slice(cur, slice).map_err(|e| word_err(format!("slice {s}: {e}")))?);
        }
        Ok(out)
    }

    /// Check well-formedness.
    pub fn validate(&self) -> Result<()> {
        self.interfaces().map(|_| ())
    }

    fn coupon(&self, id: &str) -> Result<&Morphism> {
        self.coupons.get(id).ok_or_else(|| word_err(format!("unknown coupon {id:?}")))
    }

    /// Input and output ends of a cell at a position of `cur`.
    fn cell_io(&self, cur: &[StrandEnd], pc: &PlacedCell) -> Result<(usize, Vec<StrandEnd>)> {
        let p = pc.at;
        let need = |k: usize| -> Result<&[StrandEnd]> {
            cur.get(p..p + k).ok_or_else(|| word_err(format!("cell at {p} needs {k} strands, interface has {}", cur.len())))
        };
        match &pc.cell {
            Cell::Id => Ok((need(1)?.len(), need(1)?.to_vec())),
            Cell::BraidOver | Cell::BraidUnder => {
                let s = need(2)?;
                Ok((2, vec![s[1], s[0]]))
            }
            Cell::Cup(end) => {
                if p > cur.len() {
                    return Err(word_err(format!("cup position {p} beyond interface")));
                }
                Ok((0, vec![*end, StrandEnd::from_gen(end.gen().dualize())]))
            }
            Cell::Cap => {
                let s = need(2)?;
                if s[1].gen() != s[0].gen().dualize() {
                    return Err(word_err(format!("cap joins {} and {}, which are not dual", s[0], s[1])));
                }
                Ok((2, Vec::new()))
            }
            Cell::TwistPos | Cell::TwistNeg => Ok((1, need(1)?.to_vec())),
            Cell::Coupon(id) => {
                let m = self.coupon(id)?;
                let src = m.source.flatten();
                let s = need(src.len())?;
                if gens(s) != src {
                    return Err(word_err(format!("coupon {id:?} expects {} at position {p}", m.source)));
                }
                Ok((src.len(), m.target.flatten().into_iter().map(StrandEnd::from_gen).collect()))
            }
            Cell::Assoc { sizes, .. } => {
                let k = sizes.iter().sum();
                Ok((k, need(k)?.to_vec()))
            }
        }
    }

    fn apply_slice(&self, cur: &[StrandEnd], slice: &[PlacedCell]) -> Result<Vec<StrandEnd>> {
        let mut order: Vec<&PlacedCell> = slice.iter().collect();
        order.sort_by_key(|c| std::cmp::Reverse(c.at));
        let mut out = cur.to_vec();
        let mut right_edge = usize::MAX;
        for pc in order {
            let (k, outs) = self.cell_io(cur, pc)?;
            if pc.at + k > right_edge || (k == 0 && pc.at >= right_edge && right_edge != usize::MAX) {
                return Err(word_err(format!("cells overlap at position {}", pc.at)));
            }
            right_edge = pc.at;
            out.splice(pc.at..pc.at + k, outs);
        }
        Ok(out)
    }

    /// Cells of the word in evaluation order with positions in the running
    /// interface: slices bottom to top, each slice right to left.
    fn sequential(&self) -> Vec<PlacedCell> {
        let mut out = Vec::new();
        for slice in &self.slices {
            let mut cells: Vec<&PlacedCell> = slice.iter().collect();
            cells.sort_by_key(|c| std::cmp::Reverse(c.at));
            out.extend(cells.into_iter().cloned());
        }
        out
    }

    /// JSON form.
    pub fn to_json(&self) -> Value {
        let ends = |v: &[StrandEnd]| Value::Array(v.iter().map(|e| e.to_json()).collect());
        let slices: Vec<Value> = self.slices.iter().map(|s| Value::Array(s.iter().map(cell_json).collect())).collect();
        let coupons: Map<String, Value> = self.coupons.iter().map(|(k, m)| (k.clone(), m.to_json())).collect();
        json!({"bottom": ends(&self.bottom), "top": ends(&self.top), "slices": slices, "coupons": coupons})
    }

    /// Parse and validate the JSON form.
    pub fn from_json(v: &Value) -> Result<Self> {
        let ends = |name: &str| -> Result<Vec<StrandEnd>> {
            v.get(name)
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Parse(format!("missing array {name:?}")))?
                .iter()
                .map(StrandEnd::from_json)
                .collect()
        };
        let bottom = ends("bottom")?;
        let top = ends("top")?;
        let slices = match v.get("slices") {
            None => Vec::new(),
            Some(s) => s
                .as_array()
                .ok_or_else(|| Error::Parse("slices must be an array".into()))?
                .iter()
                .map(|sl| {
                    sl.as_array()
                        .ok_or_else(|| Error::Parse("slice must be an array".into()))?
                        .iter()
                        .map(cell_from_json)
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?,
        };
        let mut coupons = BTreeMap::new();
        if let Some(c) = v.get("coupons") {
            let obj = c.as_object().ok_or_else(|| Error::Parse("coupons must be an object".into()))?;
            for (k, m) in obj {
                coupons.insert(k.clone(), Morphism::from_json(m)?);
            }
        }
        let w = TangleWord { bottom, top, slices, coupons };
        w.validate()?;
        Ok(w)
    }
}

fn cell_json(pc: &PlacedCell) -> Value {
    let at = pc.at;
    match &pc.cell {
        Cell::Id => json!({"cell": "id", "at": at}),
        Cell::BraidOver => json!({"cell": "braid+", "at": at}),
        Cell::BraidUnder => json!({"cell": "braid-", "at": at}),
        Cell::Cup(e) => json!({"cell": "cup", "at": at, "label": label_name(e.label), "orient": e.orient.sign()}),
        Cell::Cap => json!({"cell": "cap", "at": at}),
        Cell::TwistPos => json!({"cell": "twist+", "at": at}),
        Cell::TwistNeg => json!({"cell": "twist-", "at": at}),
        Cell::Coupon(id) => json!({"cell": "coupon", "at": at, "id": id}),
        Cell::Assoc { sizes, forward } => {
            json!({"cell": "assoc", "at": at, "sizes": sizes, "dir": if *forward { "+" } else { "-" }})
        }
    }
}

fn cell_from_json(v: &Value) -> Result<PlacedCell> {
    let bad = |what: &str| Error::Parse(format!("cell {v}: {what}"));
    let kind = v.get("cell").and_then(Value::as_str).ok_or_else(|| bad("missing \"cell\""))?;
    let at = v.get("at").and_then(Value::as_u64).ok_or_else(|| bad("missing \"at\""))? as usize;
    let str_field = |name: &str| v.get(name).and_then(Value::as_str).ok_or_else(|| bad(&format!("missing {name:?}")));
    let cell = match kind {
        "id" => Cell::Id,
        "braid+" => Cell::BraidOver,
        "braid-" => Cell::BraidUnder,
        "cup" => Cell::Cup(StrandEnd {
            label: parse_label(str_field("label")?)?,
            orient: Orient::parse(v.get("orient").and_then(Value::as_str).unwrap_or("+"))?,
        }),
        "cap" => Cell::Cap,
        "twist+" => Cell::TwistPos,
        "twist-" => Cell::TwistNeg,
        "coupon" => Cell::Coupon(str_field("id")?.to_string()),
        "assoc" => {
            let sizes: Vec<usize> = v
                .get("sizes")
                .and_then(Value::as_array)
                .ok_or_else(|| bad("missing \"sizes\""))?
                .iter()
                .map(|x| x.as_u64().map(|n| n as usize).ok_or_else(|| bad("sizes must be integers")))
                .collect::<Result<_>>()?;
            let sizes: [usize; 3] = sizes.try_into().map_err(|_| bad("sizes must have three entries"))?;
            let forward = v.get("dir").and_then(Value::as_str).unwrap_or("+") == "+";
            Cell::Assoc { sizes, forward }
        }
        other => return Err(bad(&format!("unknown cell kind {other:?}"))),
    };
    Ok(PlacedCell { cell, at })
}

impl Serialize for TangleWord {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for TangleWord {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        TangleWord::from_json(&v).map_err(D::Error::custom)
    }
}

/// `LN(a ++ b) -> LN(a) (x) LN(b)` where `LN` is left-nested bracketing.
fn split_map(backend: &Backend, a: &[Gen], b: &[Gen]) -> Result<Mat> {
    let mode = backend.mode();
    let d = word_dim(a) * word_dim(b);
    let mut m = Mat::identity(mode, d);
    if a.is_empty() || b.len() < 2 || backend.is_strict() {
        return Ok(m);
    }
    for j in 1..b.len() {
        let alpha = backend.associator_words(a, &b[..j], &b[j..=j])?;
        let step = alpha.kron(&Mat::identity(mode, word_dim(&b[j + 1..])))?;
        m = step.mul(&m)?;
    }
    Ok(m)
}

/// Rebracketing `expr -> LN(flatten(expr))`.
pub fn to_left_nested(backend: &Backend, expr: &ObjectExpr) -> Result<Mat> {
    let mode = backend.mode();
    match expr {
        ObjectExpr::Unit | ObjectExpr::Gen(_) => Ok(Mat::identity(mode, expr.dim())),
        ObjectExpr::Tensor(a, b) => {
            let inner = to_left_nested(backend, a)?.kron(&to_left_nested(backend, b)?)?;
            if backend.is_strict() {
                return Ok(inner);
            }
            split_map(backend, &a.flatten(), &b.flatten())?.inverse()?.mul(&inner)
        }
    }
}

/// Coherent rebracketing `from -> to` between two bracketings of one word.
pub fn rebracket(backend: &Backend, from: &ObjectExpr, to: &ObjectExpr) -> Result<Mat> {
    if from.flatten() != to.flatten() {
        return Err(Error::Shape(format!("cannot rebracket {from} into {to}")));
    }
    if backend.is_strict() {
        return Ok(Mat::identity(backend.mode(), from.dim()));
    }
    to_left_nested(backend, to)?.inverse()?.mul(&to_left_nested(backend, from)?)
}

/// `LN(left ++ flatten(block)) -> LN(left) (x) block`.
fn block_map(backend: &Backend, left: &[Gen], block: &ObjectExpr) -> Result<Mat> {
    let bw = block.flatten();
    let mode = backend.mode();
    let inner = Mat::identity(mode, word_dim(left)).kron(&to_left_nested(backend, block)?.inverse()?)?;
    inner.mul(&split_map(backend, left, &bw)?)
}

struct Step {
    pos: usize,
    arity: usize,
    block_in: ObjectExpr,
    mat: Mat,
    block_out: ObjectExpr,
}

fn cell_step(word: &TangleWord, backend: &Backend, cur: &[Gen], pc: &PlacedCell) -> Result<Option<Step>> {
    let p = pc.at;
    let pair = |a: Gen, b: Gen| ObjectExpr::tensor(ObjectExpr::Gen(a), ObjectExpr::Gen(b));
    let step = match &pc.cell {
        Cell::Id | Cell::Assoc { .. } => return Ok(None),
        Cell::BraidOver => {
            let (x, y) = (cur[p], cur[p + 1]);
            Step { pos: p, arity: 2, block_in: pair(x, y), mat: (*backend.gen_braid(x, y, false)?).clone(), block_out: pair(y, x) }
        }
        Cell::BraidUnder => {
            let (x, y) = (cur[p], cur[p + 1]);
            Step { pos: p, arity: 2, block_in: pair(x, y), mat: (*backend.gen_braid(y, x, true)?).clone(), block_out: pair(y, x) }
        }
        Cell::Cup(end) => {
            let g = end.gen();
            Step { pos: p, arity: 0, block_in: ObjectExpr::Unit, mat: backend.coev_gen(g)?, block_out: pair(g, g.dualize()) }
        }
        Cell::Cap => {
            let (a, b) = (cur[p], cur[p + 1]);
            Step { pos: p, arity: 2, block_in: pair(a, b), mat: backend.ev_gen(b)?, block_out: ObjectExpr::Unit }
        }
        Cell::TwistPos | Cell::TwistNeg => {
            let x = cur[p];
            let mut th = backend.twist_words(&[x])?;
            if pc.cell == Cell::TwistNeg {
                th = th.inverse()?;
            }
            Step { pos: p, arity: 1, block_in: ObjectExpr::Gen(x), mat: th, block_out: ObjectExpr::Gen(x) }
        }
        Cell::Coupon(id) => {
            let m = word.coupon(id)?;
            if m.mode() != backend.mode() {
                return Err(Error::Mode(format!("coupon {id:?} is in {} but the backend is {}", m.mode(), backend.mode())));
            }
            Step { pos: p, arity: m.source.flatten().len(), block_in: m.source.clone(), mat: m.mat.clone(), block_out: m.target.clone() }
        }
    };
    Ok(Some(step))
}

/// Evaluate a word to a morphism between the left-nested boundary objects.
pub fn rt_evaluate(word: &TangleWord, backend: &Backend) -> Result<Morphism> {
    word.validate()?;
    let mode = backend.mode();
    let mut cur = gens(&word.bottom);
    let mut m = Mat::identity(mode, word_dim(&cur));
    for pc in word.sequential() {
        let Some(step) = cell_step(word, backend, &cur, &pc)? else { continue };
        let left = cur[..step.pos].to_vec();
        let mut dims = word_dims(&cur);
        if !backend.is_strict() {
            let pre = block_map(backend, &left, &step.block_in)?;
            m = m.apply_local(&dims, 0, step.pos + step.arity, &pre)?;
        }
        m = m.apply_local(&dims, step.pos, step.arity, &step.mat)?;
        let out = step.block_out.flatten();
        let mut next = cur[..step.pos].to_vec();
        next.extend_from_slice(&out);
        next.extend_from_slice(&cur[step.pos + step.arity..]);
        dims = word_dims(&next);
        if !backend.is_strict() {
            let post = block_map(backend, &left, &step.block_out)?.inverse()?;
            m = m.apply_local(&dims, 0, step.pos + out.len(), &post)?;
        }
        cur = next;
    }
    Morphism::new(ObjectExpr::from_word(&gens(&word.bottom)), ObjectExpr::from_word(&cur), m)
}

fn merge_coupons(a: &BTreeMap<String, Morphism>, b: &BTreeMap<String, Morphism>) -> (BTreeMap<String, Morphism>, BTreeMap<String, String>) {
    let mut out = a.clone();
    let mut rename = BTreeMap::new();
    for (k, m) in b {
        let mut key = k.clone();
        let mut n = 1;
        while out.get(&key).is_some_and(|x| x != m) {
            key = format!("{k}_{n}");
            n += 1;
        }
        out.insert(key.clone(), m.clone());
        rename.insert(k.clone(), key);
    }
    (out, rename)
}

fn renamed(slices: &[Vec<PlacedCell>], rename: &BTreeMap<String, String>, shift: usize) -> Vec<Vec<PlacedCell>> {
    slices
        .iter()
        .map(|s| {
            s.iter()
                .map(|pc| {
                    let cell = match &pc.cell {
                        Cell::Coupon(id) => Cell::Coupon(rename.get(id).cloned().unwrap_or_else(|| id.clone())),
                        c => c.clone(),
                    };
                    PlacedCell { cell, at: pc.at + shift }
                })
                .collect()
        })
        .collect()
}

/// Stack `upper` on top of `lower`.
pub fn compose(upper: &TangleWord, lower: &TangleWord) -> Result<TangleWord> {
    if lower.top != upper.bottom {
        return Err(word_err("boundaries do not match for composition"));
    }
    let (coupons, rename) = merge_coupons(&lower.coupons, &upper.coupons);
    let mut slices = lower.slices.clone();
    slices.extend(renamed(&upper.slices, &rename, 0));
    Ok(TangleWord { bottom: lower.bottom.clone(), top: upper.top.clone(), slices, coupons })
}

/// Place `left` and `right` side by side.
pub fn tensor(left: &TangleWord, right: &TangleWord) -> TangleWord {
    let (coupons, rename) = merge_coupons(&left.coupons, &right.coupons);
    let mut slices = left.slices.clone();
    slices.extend(renamed(&right.slices, &rename, left.top.len()));
    let cat = |a: &[StrandEnd], b: &[StrandEnd]| a.iter().chain(b).copied().collect::<Vec<_>>();
    TangleWord { bottom: cat(&left.bottom, &right.bottom), top: cat(&left.top, &right.top), slices, coupons }
}

/// Replace a coupon by its conjugate under coherent rebracketing so that it
/// reads `new_source -> new_target`. The evaluation does not change.
pub fn reparenthesize_coupon(
    word: &TangleWord,
    backend: &Backend,
    id: &str,
    new_source: &ObjectExpr,
    new_target: &ObjectExpr,
) -> Result<TangleWord> {
    let m = word.coupon(id)?;
    let pre = rebracket(backend, new_source, &m.source)?;
    let post = rebracket(backend, &m.target, new_target)?;
    let mat = post.mul(&m.mat)?.mul(&pre)?;
    let mut out = word.clone();
    out.coupons.insert(id.to_string(), Morphism::new(new_source.clone(), new_target.clone(), mat)?);
    Ok(out)
}

/// The single non-identity cell of a slice, if there is exactly one.
fn lone_cell(slice: &[PlacedCell]) -> Option<&PlacedCell> {
    let mut it = slice.iter().filter(|c| c.cell != Cell::Id);
    let c = it.next()?;
    it.next().is_none().then_some(c)
}

fn single(cell: Cell, at: usize) -> Vec<PlacedCell> {
    vec![PlacedCell { cell, at }]
}

fn is_braid(c: &Cell) -> bool {
    matches!(c, Cell::BraidOver | Cell::BraidUnder)
}

fn inverse_braid(c: &Cell) -> Cell {
    if *c == Cell::BraidOver {
        Cell::BraidUnder
    } else {
        Cell::BraidOver
    }
}

/// Apply a local move at a site. Every move either removes a matching
/// pattern starting at `site.slice` or, when none is present, inserts one
/// before that slice.
pub fn apply_move(word: &TangleWord, mv: Move, site: Site) -> Result<TangleWord> {
    let ifaces = word.interfaces()?;
    let s = site.slice;
    let p = site.pos;
    if s > word.slices.len() {
        return Err(move_err(format!("slice {s} out of range")));
    }
    let iface = &ifaces[s];
    let at = |k: usize| word.slices.get(s + k).and_then(|sl| lone_cell(sl));
    let mut out = word.clone();
    let splice = |out: &mut TangleWord, remove: usize, with: Vec<Vec<PlacedCell>>| {
        out.slices.splice(s..s + remove, with);
    };
    match mv {
        Move::R2 => {
            if let (Some(a), Some(b)) = (at(0), at(1)) {
                if is_braid(&a.cell) && b.cell == inverse_braid(&a.cell) && a.at == b.at {
                    splice(&mut out, 2, Vec::new());
                    return Ok(out);
                }
            }
            if p + 2 > iface.len() {
                return Err(move_err("R2 needs two strands at the site"));
            }
            splice(&mut out, 0, vec![single(Cell::BraidOver, p), single(Cell::BraidUnder, p)]);
        }
        Move::R3 => {
            let (a, b, c) = match (at(0), at(1), at(2)) {
                (Some(a), Some(b), Some(c)) => (a, b, c),
                _ => return Err(move_err("R3 needs three single-crossing slices")),
            };
            if !(is_braid(&a.cell) && is_braid(&b.cell) && is_braid(&c.cell)) {
                return Err(move_err("R3 pattern must consist of crossings"));
            }
            let i = a.at.min(b.at);
            let ok_shape = (a.at == c.at) && (a.at.abs_diff(b.at) == 1);
            if !ok_shape || (a.cell == c.cell && b.cell != a.cell) {
                return Err(move_err("no R3 pattern at the site"));
            }
            let other = if a.at == i { i + 1 } else { i };
            let with = vec![single(c.cell.clone(), other), single(b.cell.clone(), a.at), single(a.cell.clone(), other)];
            splice(&mut out, 3, with);
        }
        Move::FramedR1 => {
            if let Some(a) = at(0) {
                if matches!(a.cell, Cell::TwistPos | Cell::TwistNeg) && a.at == p {
                    let x = iface[p].gen();
                    splice(&mut out, 1, kink(x, p, a.cell == Cell::TwistPos));
                    return Ok(out);
                }
            }
            for pos in [true, false] {
                if s + 3 <= word.slices.len() {
                    let x = iface.get(p).ok_or_else(|| move_err("no strand at the site"))?.gen();
                    let k = kink(x, p, pos);
                    let matches = (0..3).all(|j| at(j).is_some_and(|c| *c == k[j][0]));
                    if matches {
                        splice(&mut out, 3, vec![single(if pos { Cell::TwistPos } else { Cell::TwistNeg }, p)]);
                        return Ok(out);
                    }
                }
            }
            return Err(move_err("FramedR1 needs a twist or a kink at the site"));
        }
        Move::SnakeLeft | Move::SnakeRight => {
            let x = iface.get(p).ok_or_else(|| move_err("no strand at the site"))?.gen();
            let pattern = snake(x, p, mv == Move::SnakeLeft);
            if (0..2).all(|j| at(j).is_some_and(|c| *c == pattern[j][0])) {
                splice(&mut out, 2, Vec::new());
            } else {
                splice(&mut out, 0, pattern);
            }
        }
        Move::CouponSlide => {
            let a = at(0).ok_or_else(|| move_err("CouponSlide needs a single-cell slice at the site"))?;
            if let Cell::Coupon(id) = &a.cell {
                let m = word.coupon(id)?;
                let (k_in, k_out) = (m.source.flatten().len(), m.target.flatten().len());
                let i = a.at;
                let forward: Vec<PlacedCell> = (0..k_out).rev().map(|j| PlacedCell::new(Cell::BraidOver, i + j)).collect();
                let matched = forward.iter().enumerate().all(|(j, pc)| at(j + 1) == Some(pc));
                if !matched || k_out == 0 {
                    return Err(move_err("coupon is not followed by its outputs crossing over the next strand"));
                }
                let mut with: Vec<Vec<PlacedCell>> = (0..k_in).rev().map(|j| single(Cell::BraidOver, i + j)).collect();
                with.push(single(a.cell.clone(), i + 1));
                splice(&mut out, 1 + k_out, with);
            } else {
                // Reverse direction: crossings followed by a coupon at the shifted position.
                let mut j = 0;
                while at(j).is_some_and(|c| c.cell == Cell::BraidOver) {
                    j += 1;
                }
                let c = at(j).ok_or_else(|| move_err("no coupon after the crossings"))?;
                let Cell::Coupon(id) = &c.cell else { return Err(move_err("no coupon after the crossings")) };
                let m = word.coupon(id)?;
                let (k_in, k_out) = (m.source.flatten().len(), m.target.flatten().len());
                let i = c.at.checked_sub(1).ok_or_else(|| move_err("coupon has no strand on its left"))?;
                let expect: Vec<PlacedCell> = (0..k_in).rev().map(|t| PlacedCell::new(Cell::BraidOver, i + t)).collect();
                if j != k_in || k_out == 0 || !(0..j).all(|t| at(t) == Some(&expect[t])) {
                    return Err(move_err("no coupon slide pattern at the site"));
                }
                let mut with = vec![single(c.cell.clone(), i)];
                with.extend((0..k_out).rev().map(|t| single(Cell::BraidOver, i + t)));
                splice(&mut out, j + 1, with);
            }
        }
    }
    out.validate()?;
    Ok(out)
}

/// Kink equal to the twist (`positive`) or its inverse on strand `x` at `p`.
///
/// A cup opens on the right, the strand crosses the new strand and the
/// cap closes the right pair.
pub fn kink(x: Gen, p: usize, positive: bool) -> Vec<Vec<PlacedCell>> {
    let cross = if positive { Cell::BraidOver } else { Cell::BraidUnder };
    vec![
        single(Cell::Cup(StrandEnd::from_gen(x)), p + 1),
        single(cross, p),
        single(Cell::Cap, p + 1),
    ]
}

/// Zigzag on strand `x` at `p`; `left` puts the cup to the left of the strand.
pub fn snake(x: Gen, p: usize, left: bool) -> Vec<Vec<PlacedCell>> {
    if left {
        vec![single(Cell::Cup(StrandEnd::from_gen(x)), p), single(Cell::Cap, p + 1)]
    } else {
        vec![single(Cell::Cup(StrandEnd::from_gen(x.dualize())), p + 1), single(Cell::Cap, p)]
    }
}

/// Options for [`random_word`].
#[derive(Clone, Debug)]
pub struct RandomWordConfig {
    /// Number of strands.
    pub strands: usize,
    /// Number of slices.
    pub slices: usize,
    /// Labels to draw from.
    pub labels: Vec<u32>,
    /// Whether coupons may appear.
    pub coupons: bool,
}

impl Default for RandomWordConfig {
    fn default() -> Self {
        RandomWordConfig { strands: 3, slices: 6, labels: vec![1], coupons: true }
    }
}

/// Random well-formed word with single-cell slices over a fixed set of
/// strands; coupons are random module maps on one or two strands.
pub fn random_word<R: Rng + ?Sized>(rng: &mut R, backend: &Backend, cfg: &RandomWordConfig) -> Result<TangleWord> {
    let bottom: Vec<StrandEnd> = (0..cfg.strands)
        .map(|_| {
            let label = cfg.labels[rng.gen_range(0..cfg.labels.len())];
            if rng.gen_bool(0.5) { StrandEnd::up(label) } else { StrandEnd::down(label) }
        })
        .collect();
    let mut cur = bottom.clone();
    let mut slices = Vec::new();
    let mut coupons = BTreeMap::new();
    for _ in 0..cfg.slices {
        let n = cur.len();
        let choice = rng.gen_range(0..if cfg.coupons { 6 } else { 5 });
        let cell = match choice {
            0 | 1 if n >= 2 => {
                let p = rng.gen_range(0..n - 1);
                PlacedCell::new(if choice == 0 { Cell::BraidOver } else { Cell::BraidUnder }, p)
            }
            2 | 3 => PlacedCell::new(if choice == 2 { Cell::TwistPos } else { Cell::TwistNeg }, rng.gen_range(0..n)),
            4 if n >= 2 => {
                // Cup then cap elsewhere keeps the strand count fixed.
                let p = rng.gen_range(0..=n);
                let label = cfg.labels[rng.gen_range(0..cfg.labels.len())];
                let end = if rng.gen_bool(0.5) { StrandEnd::up(label) } else { StrandEnd::down(label) };
                slices.push(single(Cell::Cup(end), p));
                cur.splice(p..p, [end, StrandEnd::from_gen(end.gen().dualize())]);
                // Move the new right strand next to a neighbour via crossings, then cap the pair.
                if p + 2 < cur.len() && rng.gen_bool(0.5) {
                    slices.push(single(Cell::BraidOver, p + 1));
                    cur.swap(p + 1, p + 2);
                    slices.push(single(Cell::BraidUnder, p + 1));
                    cur.swap(p + 1, p + 2);
                }
                PlacedCell::new(Cell::Cap, p)
            }
            5 => {
                let k = if n >= 2 && rng.gen_bool(0.5) { 2 } else { 1 };
                let p = rng.gen_range(0..=n - k);
                let src: Vec<Gen> = gens(&cur[p..p + k]);
                let mut tgt = src.clone();
                if k == 2 && rng.gen_bool(0.5) {
                    tgt.swap(0, 1);
                }
                let mat = backend.random_hom(rng, &src, &tgt)?;
                let id = format!("c{}", coupons.len() + 1);
                let src_expr = ObjectExpr::from_word(&src);
                let tgt_expr = ObjectExpr::from_word(&tgt);
                coupons.insert(id.clone(), Morphism::new(src_expr, tgt_expr, mat)?);
                PlacedCell::new(Cell::Coupon(id), p)
            }
            _ => PlacedCell::new(Cell::TwistPos, rng.gen_range(0..n)),
        };
        let w = TangleWord { bottom: cur.clone(), top: cur.clone(), slices: Vec::new(), coupons: coupons.clone() };
        cur = w.apply_slice(&cur, std::slice::from_ref(&cell))?;
        slices.push(vec![cell]);
    }
    TangleWord::from_slices(bottom, slices, coupons)
}
