// Copyright (c) The skeinlab Contributors
// SPDX-License-Identifier: Apache-2.0

//! Marked surfaces as ciliated gluing patterns.
//!
//! A pattern has `k` vertices (the marked boundary points, each a small
//! disk) and `n` handles (bands) whose two ends sit in linearly ordered
//! slots of the vertices. The Euler characteristic is `k - n`. Fusion
//! merges two vertices into one whose slots are those of the first vertex
//! followed by those of the second.

use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Value};

use crate::error::{Error, Result};

/// One end of a handle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HandleEnd {
    /// Vertex index.
    pub v: usize,
    /// Slot position at the vertex.
    pub slot: usize,
}

/// A band joining two slots; `ends[0]` is the start and `ends[1]` the end.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Handle {
    /// Start and end.
    pub ends: [HandleEnd; 2],
}

/// Slot order of a fused vertex.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum FusionOrder {
    /// Slots of the first vertex, then those of the second.
    #[default]
    V1V2,
    /// Slots of the second vertex, then those of the first.
    V2V1,
}

impl FusionOrder {
    /// Parse `v1v2` or `v2v1`.
    pub fn from_name(s: &str) -> Result<Self> {
        match s {
            "v1v2" => Ok(FusionOrder::V1V2),
            "v2v1" => Ok(FusionOrder::V2V1),
            _ => Err(Error::Parse(format!("fusion order must be v1v2 or v2v1, got {s:?}"))),
        }
    }

    /// Name.
    pub fn name(self) -> &'static str {
        match self {
            FusionOrder::V1V2 => "v1v2",
            FusionOrder::V2V1 => "v2v1",
        }
    }
}

/// How a pattern was assembled.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FusionTree {
    /// A named building block or an input pattern.
    Leaf(String),
    /// Disjoint union.
    Union(Box<FusionTree>, Box<FusionTree>),
    /// Fusion of two vertices.
    Fuse(Box<FusionTree>, usize, usize, FusionOrder),
}

impl fmt::Display for FusionTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FusionTree::Leaf(s) => write!(f, "{s}"),
            FusionTree::Union(a, b) => write!(f, "union({a}, {b})"),
            FusionTree::Fuse(a, v1, v2, o) => write!(f, "fuse({a}, {v1}, {v2}, {})", o.name()),
        }
    }
}

/// A ciliated gluing pattern.
#[derive(Clone, Debug)]
pub struct SurfacePattern {
    vertices: usize,
    handles: Vec<Handle>,
    history: FusionTree,
}

impl PartialEq for SurfacePattern {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.handles == other.handles
    }
}

impl Eq for SurfacePattern {}

/// Result of a fusion together with the vertex relabeling.
#[derive(Clone, Debug)]
pub struct Fused {
    /// The fused pattern.
    pub pattern: SurfacePattern,
    /// New index of every old vertex (`v1` and `v2` both map to the merged vertex).
    pub vertex_map: Vec<usize>,
    /// Index of the merged vertex.
    pub merged: usize,
    /// The vertex whose slots come first in the merged vertex.
    pub first: usize,
    /// The vertex whose slots come second.
    pub second: usize,
}

impl SurfacePattern {
    /// Checked constructor.
    pub fn new(vertices: usize, handles: Vec<Handle>) -> Result<Self> {
        let p = SurfacePattern { vertices, handles, history: FusionTree::Leaf("input".into()) };
        p.validate()?;
        Ok(p)
    }

    fn with_history(mut self, h: FusionTree) -> Self {
        self.history = h;
        self
    }

    fn validate(&self) -> Result<()> {
        let mut seen = vec![Vec::new(); self.vertices];
        for h in &self.handles {
            for e in h.ends {
                if e.v >= self.vertices {
                    return Err(Error::Shape(format!("handle end at vertex {} of {}", e.v, self.vertices)));
                }
                seen[e.v].push(e.slot);
            }
        }
        for (v, mut slots) in seen.into_iter().enumerate() {
            slots.sort_unstable();
            if slots.iter().enumerate().any(|(i, &s)| i != s) {
                return Err(Error::Shape(format!("slots at vertex {v} must be 0..n without gaps, got {slots:?}")));
            }
        }
        Ok(())
    }

    /// Number of vertices (marked points).
    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    /// Handles.
    pub fn handles(&self) -> &[Handle] {
        &self.handles
    }

    /// Assembly history.
    pub fn history(&self) -> &FusionTree {
        &self.history
    }

    /// Euler characteristic `k - n`.
    pub fn euler_characteristic(&self) -> i64 {
        self.vertices as i64 - self.handles.len() as i64
    }

    /// Number of holonomy copies of the group carried by the classical algebra.
    pub fn holonomy_copies(&self) -> usize {
        self.handles.len()
    }

    /// Slots of a vertex in order, as `(handle, end)` pairs.
    pub fn slots(&self, v: usize) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, (usize, usize))> = Vec::new();
        for (h, handle) in self.handles.iter().enumerate() {
            for (k, e) in handle.ends.iter().enumerate() {
                if e.v == v {
                    out.push((e.slot, (h, k)));
                }
            }
        }
        out.sort_unstable();
        out.into_iter().map(|(_, x)| x).collect()
    }

    /// The empty pattern.
    pub fn empty() -> Self {
        SurfacePattern { vertices: 0, handles: Vec::new(), history: FusionTree::Leaf("empty".into()) }
    }

    /// Disk with one marked point and no handles.
    pub fn disk() -> Self {
        SurfacePattern { vertices: 1, handles: Vec::new(), history: FusionTree::Leaf("disk".into()) }
    }

    /// Disk with two marked points joined by one handle.
    pub fn disk_with_two_points() -> Self {
        let h = Handle { ends: [HandleEnd { v: 0, slot: 0 }, HandleEnd { v: 1, slot: 0 }] };
        SurfacePattern { vertices: 2, handles: vec![h], history: FusionTree::Leaf("disk2".into()) }
    }

    /// Annulus with one marked point, obtained by fusing the two points of the disk.
    pub fn annulus() -> Self {
        SurfacePattern::disk_with_two_points().fuse(0, 1, FusionOrder::V1V2).expect("valid").pattern
    }

    /// Pair of pants with one marked point: two non-interleaved handles.
    pub fn pair_of_chaps() -> Self {
        let u = SurfacePattern::annulus().disjoint_union(&SurfacePattern::annulus());
        u.fuse(0, 1, FusionOrder::V1V2).expect("valid").pattern
    }

    /// Once-punctured torus with one marked point; slots `(a, b, a*, b*)`.
    pub fn punctured_torus() -> Self {
        SurfacePattern::interleaved(&[0, 1, 0, 1], "two_disks")
    }

    /// Genus two with one boundary circle; slots `(a, b, a*, b*, c, d, c*, d*)`.
    pub fn genus_two() -> Self {
        SurfacePattern::interleaved(&[0, 1, 0, 1, 2, 3, 2, 3], "four_disks")
    }

    /// One vertex whose slots visit the handles in the given order, built by
    /// fusing disks with two points. Each handle must appear twice; the first
    /// occurrence is its start.
    pub fn interleaved(order: &[usize], name: &str) -> Self {
        SurfacePattern::interleaved_steps(order, name).0
    }

    /// As [`SurfacePattern::interleaved`], also returning every fusion step
    /// as `(pattern before, v1, v2)`.
    pub fn interleaved_steps(order: &[usize], name: &str) -> (Self, Vec<(SurfacePattern, usize, usize)>) {
        let mut steps = Vec::new();
        let n = order.iter().max().map_or(0, |m| m + 1);
        let mut p = SurfacePattern::empty();
        for _ in 0..n {
            p = p.disjoint_union(&SurfacePattern::disk_with_two_points());
        }
        p.history = FusionTree::Leaf(name.into());
        // Vertex 2h is the start of handle h, 2h+1 its end.
        let mut seen = vec![false; n];
        let wanted: Vec<usize> = order
            .iter()
            .map(|&h| {
                let v = if seen[h] { 2 * h + 1 } else { 2 * h };
                seen[h] = true;
                v
            })
            .collect();
        let mut current: Vec<usize> = (0..2 * n).collect();
        let mut acc = current[wanted[0]];
        for &w in &wanted[1..] {
            steps.push((p.clone(), acc, current[w]));
            let f = p.fuse(acc, current[w], FusionOrder::V1V2).expect("distinct vertices");
            for c in current.iter_mut() {
                *c = f.vertex_map[*c];
            }
            acc = f.merged;
            p = f.pattern;
        }
        (p, steps)
    }

    /// Disjoint union; the vertices of `q` follow those of `self`.
    pub fn disjoint_union(&self, q: &SurfacePattern) -> SurfacePattern {
        let off = self.vertices;
        let mut handles = self.handles.clone();
        handles.extend(q.handles.iter().map(|h| Handle { ends: h.ends.map(|e| HandleEnd { v: e.v + off, slot: e.slot }) }));
        let history = match (&self.history, &q.history) {
            (FusionTree::Leaf(a), b) if a == "empty" => b.clone(),
            (a, FusionTree::Leaf(b)) if b == "empty" => a.clone(),
            (a, b) => FusionTree::Union(Box::new(a.clone()), Box::new(b.clone())),
        };
        SurfacePattern { vertices: off + q.vertices, handles, history }
    }

    /// Merge `v1` and `v2` into one vertex placed at the smaller index.
    pub fn fuse(&self, v1: usize, v2: usize, order: FusionOrder) -> Result<Fused> {
        if v1 == v2 {
            return Err(Error::Fusion(format!("cannot fuse vertex {v1} with itself")));
        }
        if v1 >= self.vertices || v2 >= self.vertices {
            return Err(Error::Fusion(format!("vertex out of range: {v1}, {v2} of {}", self.vertices)));
        }
        let (first, second) = match order {
            FusionOrder::V1V2 => (v1, v2),
            FusionOrder::V2V1 => (v2, v1),
        };
        let merged = v1.min(v2);
        let removed = v1.max(v2);
        let vertex_map: Vec<usize> = (0..self.vertices)
            .map(|v| {
                if v == v1 || v == v2 {
                    merged
                } else if v > removed {
                    v - 1
                } else {
                    v
                }
            })
            .collect();
        let shift = self.slots(first).len();
        let handles = self
            .handles
            .iter()
            .map(|h| Handle {
                ends: h.ends.map(|e| HandleEnd {
                    v: vertex_map[e.v],
                    slot: if e.v == second { e.slot + shift } else { e.slot },
                }),
            })
            .collect();
        let pattern = SurfacePattern {
            vertices: self.vertices - 1,
            handles,
            history: FusionTree::Fuse(Box::new(self.history.clone()), v1, v2, order),
        };
        pattern.validate()?;
        Ok(Fused { pattern, vertex_map, merged, first, second })
    }

    /// Whether two handles cross, judged by interleaving of their slots at a
    /// single vertex.
    pub fn handles_interleave(&self, h1: usize, h2: usize) -> bool {
        let a = self.handles[h1].ends;
        let b = self.handles[h2].ends;
        if a.iter().chain(b.iter()).any(|e| e.v != a[0].v) {
            return false;
        }
        let (a0, a1) = (a[0].slot.min(a[1].slot), a[0].slot.max(a[1].slot));
        let inside = |s: usize| a0 < s && s < a1;
        inside(b[0].slot) != inside(b[1].slot)
    }

    /// JSON form.
    pub fn to_json(&self) -> Value {
        let handles: Vec<Value> = self
            .handles
            .iter()
            .map(|h| json!({"ends": h.ends.iter().map(|e| json!({"v": e.v, "slot": e.slot})).collect::<Vec<_>>()}))
            .collect();
        json!({
            "vertices": self.vertices,
            "marked": (0..self.vertices).collect::<Vec<_>>(),
            "handles": handles,
            "history": self.history.to_string(),
        })
    }

    /// Parse the JSON form. Every vertex is a marked point; `marked`, when
    /// present, must list all of them.
    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::Parse(format!("surface pattern: {m}"));
        let vertices = v.get("vertices").and_then(Value::as_u64).ok_or_else(|| bad("missing \"vertices\""))? as usize;
        if let Some(m) = v.get("marked") {
            let mut marked: Vec<usize> = m
                .as_array()
                .ok_or_else(|| bad("\"marked\" must be an array"))?
                .iter()
                .map(|x| x.as_u64().map(|n| n as usize).ok_or_else(|| bad("marked entries must be integers")))
                .collect::<Result<_>>()?;
            marked.sort_unstable();
            if marked != (0..vertices).collect::<Vec<_>>() {
                return Err(bad("every vertex must be marked"));
            }
        }
        let mut handles = Vec::new();
        for h in v.get("handles").and_then(Value::as_array).ok_or_else(|| bad("missing \"handles\""))? {
            let ends = h.get("ends").and_then(Value::as_array).filter(|e| e.len() == 2).ok_or_else(|| bad("handle needs two ends"))?;
            let end = |e: &Value| -> Result<HandleEnd> {
                Ok(HandleEnd {
                    v: e.get("v").and_then(Value::as_u64).ok_or_else(|| bad("end needs \"v\""))? as usize,
                    slot: e.get("slot").and_then(Value::as_u64).ok_or_else(|| bad("end needs \"slot\""))? as usize,
                })
            };
            handles.push(Handle { ends: [end(&ends[0])?, end(&ends[1])?] });
        }
        let name = v.get("history").and_then(Value::as_str).unwrap_or("input").to_string();
        Ok(SurfacePattern::new(vertices, handles)?.with_history(FusionTree::Leaf(name)))
    }
}

impl Serialize for SurfacePattern {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for SurfacePattern {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        SurfacePattern::from_json(&v).map_err(D::Error::custom)
    }
}
