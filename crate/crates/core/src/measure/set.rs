use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// A subset of a finite index universe (atoms of a discrete space or cells of
/// a grid).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "IndexSetRepr", into = "IndexSetRepr")]
pub struct IndexSet {
    bits: Vec<bool>,
}

#[derive(Serialize, Deserialize)]
struct IndexSetRepr {
    size: usize,
    members: Vec<usize>,
}

impl TryFrom<IndexSetRepr> for IndexSet {
    type Error = String;

    fn try_from(r: IndexSetRepr) -> std::result::Result<Self, Self::Error> {
        IndexSet::from_members(r.size, r.members).map_err(|e| e.to_string())
    }
}

impl From<IndexSet> for IndexSetRepr {
    fn from(s: IndexSet) -> Self {
        IndexSetRepr {
            size: s.size(),
            members: s.members().collect(),
        }
    }
}

impl IndexSet {
    pub fn empty(size: usize) -> Self {
        IndexSet {
            bits: vec![false; size],
        }
    }

    pub fn full(size: usize) -> Self {
        IndexSet {
            bits: vec![true; size],
        }
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        IndexSet { bits }
    }

    pub fn from_members(size: usize, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut bits = vec![false; size];
        for m in members {
            if m >= size {
                return invalid(format!("member {m} out of range for universe of size {size}"));
            }
            bits[m] = true;
        }
        Ok(IndexSet { bits })
    }

    /// Subset of `0..size` encoded by the low bits of `mask`.
    pub fn from_mask(size: usize, mask: u64) -> Self {
        IndexSet {
            bits: (0..size).map(|i| mask >> i & 1 == 1).collect(),
        }
    }

    pub fn mask(&self) -> Option<u64> {
        if self.bits.len() > 64 {
            return None;
        }
        Some(
            self.bits
                .iter()
                .enumerate()
                .filter(|(_, &b)| b)
                .fold(0u64, |acc, (i, _)| acc | 1 << i),
        )
    }

    pub fn size(&self) -> usize {
        self.bits.len()
    }

    pub fn len(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.bits.iter().any(|&b| b)
    }

    pub fn contains(&self, i: usize) -> bool {
        self.bits.get(i).copied().unwrap_or(false)
    }

    pub fn insert(&mut self, i: usize) {
        self.bits[i] = true;
    }

    pub fn remove(&mut self, i: usize) {
        self.bits[i] = false;
    }

    pub fn members(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| b.then_some(i))
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    fn zip_with(&self, other: &Self, op: impl Fn(bool, bool) -> bool) -> Self {
        IndexSet {
            bits: self
                .bits
                .iter()
                .zip(&other.bits)
                .map(|(&a, &b)| op(a, b))
                .collect(),
        }
    }

    pub fn union(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a || b)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a && b)
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a && !b)
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.bits.iter().zip(&other.bits).all(|(&a, &b)| !a || b)
    }
}

/// A finite union of pairwise disjoint half-open intervals `[a, b)` of the
/// half-line, sorted and with touching pieces merged.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "IntervalRepr", into = "IntervalRepr")]
pub struct IntervalUnion {
    pieces: Vec<[f64; 2]>,
}

#[derive(Serialize, Deserialize)]
struct IntervalRepr {
    pieces: Vec<[f64; 2]>,
}

impl TryFrom<IntervalRepr> for IntervalUnion {
    type Error = String;

    fn try_from(v: IntervalRepr) -> std::result::Result<Self, Self::Error> {
        IntervalUnion::new(v.pieces).map_err(|e| e.to_string())
    }
}

impl From<IntervalUnion> for IntervalRepr {
    fn from(u: IntervalUnion) -> Self {
        IntervalRepr { pieces: u.pieces }
    }
}

impl IntervalUnion {
    pub fn empty() -> Self {
        IntervalUnion { pieces: Vec::new() }
    }

    /// `[a, b)`; empty when `b <= a`.
    pub fn interval(a: f64, b: f64) -> Self {
        if b > a {
            IntervalUnion {
                pieces: vec![[a, b]],
            }
        } else {
            Self::empty()
        }
    }

    /// Builds the canonical union of arbitrary (possibly overlapping)
    /// intervals. Empty pieces are dropped.
    pub fn new(raw: Vec<[f64; 2]>) -> Result<Self> {
        for &[a, b] in &raw {
            if !a.is_finite() || !b.is_finite() {
                return invalid("interval endpoints must be finite");
            }
            if a < 0.0 {
                return invalid(format!("interval [{a}, {b}) leaves the half-line"));
            }
        }
        Ok(Self::normalize(raw))
    }

    fn normalize(mut raw: Vec<[f64; 2]>) -> Self {
        raw.retain(|&[a, b]| b > a);
        raw.sort_by(|x, y| x[0].total_cmp(&y[0]));
        let mut pieces: Vec<[f64; 2]> = Vec::with_capacity(raw.len());
        for [a, b] in raw {
            match pieces.last_mut() {
                Some(last) if a <= last[1] => last[1] = last[1].max(b),
                _ => pieces.push([a, b]),
            }
        }
        IntervalUnion { pieces }
    }

    pub fn pieces(&self) -> &[[f64; 2]] {
        &self.pieces
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn length(&self) -> f64 {
        self.pieces.iter().map(|[a, b]| b - a).sum()
    }

    pub fn contains(&self, t: f64) -> bool {
        self.pieces.iter().any(|&[a, b]| a <= t && t < b)
    }

    pub fn endpoints(&self) -> impl Iterator<Item = f64> + '_ {
        self.pieces.iter().flat_map(|&[a, b]| [a, b])
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut raw = self.pieces.clone();
        raw.extend_from_slice(&other.pieces);
        Self::normalize(raw)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.pieces.len() && j < other.pieces.len() {
            let [a0, a1] = self.pieces[i];
            let [b0, b1] = other.pieces[j];
            let lo = a0.max(b0);
            let hi = a1.min(b1);
            if hi > lo {
                out.push([lo, hi]);
            }
            if a1 < b1 {
                i += 1;
            } else {
                j += 1;
            }
        }
        Self::normalize(out)
    }

    pub fn difference(&self, other: &Self) -> Self {
        let mut out = Vec::new();
        for &[a, b] in &self.pieces {
            let mut start = a;
            for &[c, d] in &other.pieces {
                if d <= start || c >= b {
                    continue;
                }
                if c > start {
                    out.push([start, c]);
                }
                start = start.max(d);
                if start >= b {
                    break;
                }
            }
            if start < b {
                out.push([start, b]);
            }
        }
        Self::normalize(out)
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.difference(other).is_empty()
    }
}

/// Open centred ball `{ |x| < radius }` in `R^n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialBall {
    pub radius: f64,
}

/// The region `{ (s, t) : 0 <= t < phi(s) }` of the quadrant under a
/// nonnegative, nonincreasing, right-continuous step boundary `phi` with
/// bounded support. Each step is `[end, height]`: `phi = height` on
/// `[previous end, end)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "HypographRepr", into = "HypographRepr")]
pub struct Hypograph {
    steps: Vec<[f64; 2]>,
}

#[derive(Serialize, Deserialize)]
struct HypographRepr {
    steps: Vec<[f64; 2]>,
}

impl TryFrom<HypographRepr> for Hypograph {
    type Error = String;

    fn try_from(r: HypographRepr) -> std::result::Result<Self, Self::Error> {
        Hypograph::new(r.steps).map_err(|e| e.to_string())
    }
}

impl From<Hypograph> for HypographRepr {
    fn from(h: Hypograph) -> Self {
        HypographRepr { steps: h.steps }
    }
}

impl Hypograph {
    pub fn empty() -> Self {
        Hypograph { steps: Vec::new() }
    }

    /// Validates a boundary given as `[end, height]` steps. Adjacent steps of
    /// equal height and zero-height steps are merged away; heights must be
    /// nonincreasing.
    pub fn new(steps: Vec<[f64; 2]>) -> Result<Self> {
        let mut prev_end = 0.0;
        let mut prev_height = f64::INFINITY;
        for &[end, height] in &steps {
            if !end.is_finite() || !height.is_finite() {
                return invalid("hypograph steps must be finite");
            }
            if end <= prev_end {
                return invalid("hypograph step ends must be strictly increasing and positive");
            }
            if height < 0.0 || height > prev_height {
                return invalid("hypograph boundary must be nonnegative and nonincreasing");
            }
            prev_end = end;
            prev_height = height;
        }
        Ok(Self::compress(steps))
    }

    /// Boundary from column heights of width `width` each, in any order: the
    /// heights are sorted into nonincreasing order first.
    pub fn from_column_heights(heights: &[f64], width: f64) -> Self {
        let mut sorted: Vec<f64> = heights.to_vec();
        sorted.sort_by(|a, b| b.total_cmp(a));
        let steps = sorted
            .iter()
            .enumerate()
            .map(|(i, &h)| [(i + 1) as f64 * width, h])
            .collect();
        Self::compress(steps)
    }

    fn compress(steps: Vec<[f64; 2]>) -> Self {
        let mut out: Vec<[f64; 2]> = Vec::with_capacity(steps.len());
        for [end, height] in steps {
            if height <= 0.0 {
                break;
            }
            match out.last_mut() {
                Some(last) if last[1] == height => last[0] = end,
                _ => out.push([end, height]),
            }
        }
        Hypograph { steps: out }
    }

    pub fn steps(&self) -> &[[f64; 2]] {
        &self.steps
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn boundary(&self, s: f64) -> f64 {
        if s < 0.0 {
            return 0.0;
        }
        self.steps
            .iter()
            .find(|&&[end, _]| s < end)
            .map_or(0.0, |&[_, h]| h)
    }

    pub fn contains(&self, s: f64, t: f64) -> bool {
        s >= 0.0 && t >= 0.0 && t < self.boundary(s)
    }

    pub fn area(&self) -> f64 {
        let mut start = 0.0;
        let mut area = 0.0;
        for &[end, h] in &self.steps {
            area += (end - start) * h;
            start = end;
        }
        area
    }

    /// Pieces `[start, end, height]` of the boundary.
    pub fn pieces(&self) -> impl Iterator<Item = [f64; 3]> + '_ {
        let mut start = 0.0;
        self.steps.iter().map(move |&[end, h]| {
            let piece = [start, end, h];
            start = end;
            piece
        })
    }

    fn combine(&self, other: &Self, op: fn(f64, f64) -> f64) -> Self {
        let mut ends: Vec<f64> = self
            .steps
            .iter()
            .chain(&other.steps)
            .map(|s| s[0])
            .collect();
        ends.sort_by(f64::total_cmp);
        ends.dedup();
        let mut start = 0.0;
        let steps = ends
            .into_iter()
            .map(|end| {
                let mid = 0.5 * (start + end);
                start = end;
                [end, op(self.boundary(mid), other.boundary(mid))]
            })
            .collect();
        Self::compress(steps)
    }

    pub fn union(&self, other: &Self) -> Self {
        self.combine(other, f64::max)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.combine(other, f64::min)
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.combine(other, |a, b| if a <= b { 0.0 } else { 1.0 })
            .is_empty()
    }
}

/// A set in a sectioned copy of `R^n` whose cross section over every slice is
/// a centred `k`-dimensional ball; stored as the cross-section measure of each
/// slice.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sections {
    pub masses: Vec<f64>,
}

/// Measurable sets over the supported spaces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum MeasurableSet {
    /// Subset of the atoms of a discrete space.
    Atoms(IndexSet),
    /// Finite union of half-open intervals of the half-line.
    Intervals(IntervalUnion),
    /// Subset of the cells of a grid.
    Cells(IndexSet),
    /// Centred open ball in `R^n`.
    Ball(RadialBall),
    /// Region under a decreasing step boundary in the quadrant.
    Hypograph(Hypograph),
    /// Per-slice centred balls in a sectioned space.
    Sections(Sections),
}

impl MeasurableSet {
    pub fn ball(radius: f64) -> Self {
        MeasurableSet::Ball(RadialBall { radius })
    }

    pub fn interval(a: f64, b: f64) -> Self {
        MeasurableSet::Intervals(IntervalUnion::interval(a, b))
    }

    pub fn variant_name(&self) -> &'static str {
        match self {
            MeasurableSet::Atoms(_) => "atoms",
            MeasurableSet::Intervals(_) => "intervals",
            MeasurableSet::Cells(_) => "cells",
            MeasurableSet::Ball(_) => "ball",
            MeasurableSet::Hypograph(_) => "hypograph",
            MeasurableSet::Sections(_) => "sections",
        }
    }

    pub fn is_empty(&self) -> bool {
        match self {
            MeasurableSet::Atoms(s) | MeasurableSet::Cells(s) => s.is_empty(),
            MeasurableSet::Intervals(u) => u.is_empty(),
            MeasurableSet::Ball(b) => b.radius <= 0.0,
            MeasurableSet::Hypograph(h) => h.is_empty(),
            MeasurableSet::Sections(s) => s.masses.iter().all(|&m| m <= 0.0),
        }
    }

    /// Index set backing an atom or cell set.
    pub fn as_index_set(&self) -> Option<&IndexSet> {
        match self {
            MeasurableSet::Atoms(s) | MeasurableSet::Cells(s) => Some(s),
            _ => None,
        }
    }
}
