use serde::{Deserialize, Serialize};

use super::set::{Hypograph, IndexSet, IntervalUnion, MeasurableSet, RadialBall, Sections};
use crate::error::{invalid, mismatch, unsupported, Error, Result};
use crate::numeric::{ball_radius, ball_volume};

/// Uniform grid of cubical cells of side `h` in `R^n`. Cells are stored in
/// row-major order over `shape`: axis 0 varies slowest, the last axis fastest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub shape: Vec<usize>,
    pub h: f64,
    pub origin: Vec<f64>,
}

impl Grid {
    pub fn new(shape: Vec<usize>, h: f64, origin: Vec<f64>) -> Result<Self> {
        let g = Grid { shape, h, origin };
        g.validate()?;
        Ok(g)
    }

    /// Grid whose lower corner sits at the origin.
    pub fn anchored(shape: Vec<usize>, h: f64) -> Result<Self> {
        let origin = vec![0.0; shape.len()];
        Self::new(shape, h, origin)
    }

    /// Grid centred on the origin along every axis.
    pub fn centered(shape: Vec<usize>, h: f64) -> Result<Self> {
        let origin = shape.iter().map(|&s| -(s as f64) * h / 2.0).collect();
        Self::new(shape, h, origin)
    }

    pub fn validate(&self) -> Result<()> {
        if self.shape.is_empty() || self.shape.iter().any(|&s| s == 0) {
            return Err(Error::InvalidGrid("shape must be nonempty with positive extents".into()));
        }
        if !(self.h > 0.0 && self.h.is_finite()) {
            return Err(Error::InvalidGrid("cell side must be positive".into()));
        }
        if self.origin.len() != self.shape.len() {
            return Err(Error::InvalidGrid("origin dimension differs from shape".into()));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.shape.len()
    }

    pub fn cell_count(&self) -> usize {
        self.shape.iter().product()
    }

    pub fn cell_mass(&self) -> f64 {
        self.h.powi(self.dim() as i32)
    }

    pub fn multi_index(&self, mut idx: usize) -> Vec<usize> {
        let mut out = vec![0; self.dim()];
        for axis in (0..self.dim()).rev() {
            out[axis] = idx % self.shape[axis];
            idx /= self.shape[axis];
        }
        out
    }

    pub fn flat_index(&self, multi: &[usize]) -> usize {
        multi
            .iter()
            .zip(&self.shape)
            .fold(0, |acc, (&i, &s)| acc * s + i)
    }

    pub fn center(&self, idx: usize) -> Vec<f64> {
        self.multi_index(idx)
            .iter()
            .zip(&self.origin)
            .map(|(&i, &o)| o + (i as f64 + 0.5) * self.h)
            .collect()
    }

    /// Cell containing `x`, if any.
    pub fn locate(&self, x: &[f64]) -> Option<usize> {
        if x.len() != self.dim() {
            return None;
        }
        let mut multi = Vec::with_capacity(self.dim());
        for ((&xi, &o), &s) in x.iter().zip(&self.origin).zip(&self.shape) {
            let k = ((xi - o) / self.h).floor();
            if k < 0.0 || k >= s as f64 {
                return None;
            }
            multi.push(k as usize);
        }
        Some(self.flat_index(&multi))
    }

    /// Number of cells in one `order`-dimensional cross section (the product
    /// of the last `order` extents).
    pub fn section_len(&self, order: usize) -> usize {
        self.shape[self.dim() - order..].iter().product()
    }

    pub fn slice_count(&self, order: usize) -> usize {
        self.shape[..self.dim() - order].iter().product()
    }

    /// Whether the last `order` axes are symmetric about zero.
    pub fn is_symmetric(&self, order: usize) -> bool {
        let n = self.dim();
        (n - order..n).all(|a| {
            let expected = -(self.shape[a] as f64) * self.h / 2.0;
            (self.origin[a] - expected).abs() <= 1e-12 * self.h.max(1.0)
        })
    }
}

/// Slicing of `R^n` into slabs `{ xbar in cell } x R^k` induced by the first
/// `n - k` axes of a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectionLayout {
    pub dim: usize,
    pub order: usize,
    pub slices: usize,
    pub slab_volume: f64,
}

/// A point of a measure space, used for pointwise evaluation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Point {
    /// Atom or cell index.
    Index(usize),
    /// Coordinates: `[t]` on the half-line, `[s, t]` in the quadrant, `x` in `R^n`.
    Coord(Vec<f64>),
    /// Slice index plus coordinates in the symmetrised `R^k` factor.
    Sectioned { slice: usize, coord: Vec<f64> },
}

impl Point {
    pub fn real(t: f64) -> Self {
        Point::Coord(vec![t])
    }
}

/// The measure spaces the library computes over.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MeasureSpace {
    /// Finitely many atoms with positive masses.
    Atoms { masses: Vec<f64> },
    /// `[0, inf)` with Lebesgue measure.
    HalfLine,
    /// Uniform grid in `R^n`, each cell of mass `h^n`.
    Grid(Grid),
    /// `R^n` with Lebesgue measure; sets are centred balls.
    Euclidean { dim: usize },
    /// `[0, inf)^2` with Lebesgue measure; sets are hypographs.
    Quadrant,
    /// `R^n` sliced along the first `n - k` grid axes.
    Sectioned(SectionLayout),
}

impl MeasureSpace {
    pub fn atoms(masses: Vec<f64>) -> Result<Self> {
        let s = MeasureSpace::Atoms { masses };
        s.validate()?;
        Ok(s)
    }

    pub fn counting(n: usize) -> Self {
        MeasureSpace::Atoms {
            masses: vec![1.0; n],
        }
    }

    pub fn grid(grid: Grid) -> Result<Self> {
        grid.validate()?;
        Ok(MeasureSpace::Grid(grid))
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            MeasureSpace::Atoms { masses } => {
                if let Some(m) = masses.iter().find(|m| !(**m > 0.0 && m.is_finite())) {
                    return invalid(format!("atom mass {m} is not positive and finite"));
                }
                Ok(())
            }
            MeasureSpace::Grid(g) => g.validate(),
            MeasureSpace::Euclidean { dim } if *dim == 0 => invalid("dimension must be positive"),
            MeasureSpace::Sectioned(l) => {
                if l.order == 0 || l.order > l.dim || !(l.slab_volume > 0.0) {
                    return invalid("invalid section layout");
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            MeasureSpace::Atoms { .. } => "atoms",
            MeasureSpace::HalfLine => "half_line",
            MeasureSpace::Grid(_) => "grid",
            MeasureSpace::Euclidean { .. } => "euclidean",
            MeasureSpace::Quadrant => "quadrant",
            MeasureSpace::Sectioned(_) => "sectioned",
        }
    }

    /// Number of atoms or cells for finite spaces.
    pub fn index_count(&self) -> Option<usize> {
        match self {
            MeasureSpace::Atoms { masses } => Some(masses.len()),
            MeasureSpace::Grid(g) => Some(g.cell_count()),
            _ => None,
        }
    }

    /// Mass of atom or cell `i`.
    pub fn index_mass(&self, i: usize) -> Option<f64> {
        match self {
            MeasureSpace::Atoms { masses } => masses.get(i).copied(),
            MeasureSpace::Grid(g) => (i < g.cell_count()).then(|| g.cell_mass()),
            _ => None,
        }
    }

    pub fn total_mass(&self) -> Option<f64> {
        match self {
            MeasureSpace::Atoms { masses } => Some(masses.iter().sum()),
            MeasureSpace::Grid(g) => Some(g.cell_count() as f64 * g.cell_mass()),
            _ => None,
        }
    }

    pub fn empty_set(&self) -> MeasurableSet {
        match self {
            MeasureSpace::Atoms { masses } => MeasurableSet::Atoms(IndexSet::empty(masses.len())),
            MeasureSpace::HalfLine => MeasurableSet::Intervals(IntervalUnion::empty()),
            MeasureSpace::Grid(g) => MeasurableSet::Cells(IndexSet::empty(g.cell_count())),
            MeasureSpace::Euclidean { .. } => MeasurableSet::ball(0.0),
            MeasureSpace::Quadrant => MeasurableSet::Hypograph(Hypograph::empty()),
            MeasureSpace::Sectioned(l) => MeasurableSet::Sections(Sections {
                masses: vec![0.0; l.slices],
            }),
        }
    }

    /// The whole space, for finite spaces.
    pub fn full_set(&self) -> Option<MeasurableSet> {
        match self {
            MeasureSpace::Atoms { masses } => Some(MeasurableSet::Atoms(IndexSet::full(masses.len()))),
            MeasureSpace::Grid(g) => Some(MeasurableSet::Cells(IndexSet::full(g.cell_count()))),
            _ => None,
        }
    }

    /// Wraps an index set as an atom or cell set of this space.
    pub fn index_set(&self, s: IndexSet) -> Result<MeasurableSet> {
        let set = match self {
            MeasureSpace::Atoms { .. } => MeasurableSet::Atoms(s),
            MeasureSpace::Grid(_) => MeasurableSet::Cells(s),
            _ => return unsupported(format!("{} space has no index sets", self.kind_name())),
        };
        self.check_set(&set)?;
        Ok(set)
    }

    /// Verifies that `set` is a set of this space.
    pub fn check_set(&self, set: &MeasurableSet) -> Result<()> {
        let ok = match (self, set) {
            (MeasureSpace::Atoms { masses }, MeasurableSet::Atoms(s)) => s.size() == masses.len(),
            (MeasureSpace::Grid(g), MeasurableSet::Cells(s)) => s.size() == g.cell_count(),
            (MeasureSpace::HalfLine, MeasurableSet::Intervals(_)) => true,
            (MeasureSpace::Euclidean { .. }, MeasurableSet::Ball(b)) => b.radius >= 0.0,
            (MeasureSpace::Quadrant, MeasurableSet::Hypograph(_)) => true,
            (MeasureSpace::Sectioned(l), MeasurableSet::Sections(s)) => {
                s.masses.len() == l.slices && s.masses.iter().all(|&m| m >= 0.0)
            }
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            mismatch(format!(
                "{} set does not belong to this {} space",
                set.variant_name(),
                self.kind_name()
            ))
        }
    }

    pub fn measure(&self, set: &MeasurableSet) -> Result<f64> {
        self.check_set(set)?;
        Ok(match (self, set) {
            (MeasureSpace::Atoms { masses }, MeasurableSet::Atoms(s)) => {
                s.members().map(|i| masses[i]).sum()
            }
            (MeasureSpace::Grid(g), MeasurableSet::Cells(s)) => s.len() as f64 * g.cell_mass(),
            (_, MeasurableSet::Intervals(u)) => u.length(),
            (MeasureSpace::Euclidean { dim }, MeasurableSet::Ball(b)) => ball_volume(*dim, b.radius),
            (_, MeasurableSet::Hypograph(h)) => h.area(),
            (MeasureSpace::Sectioned(l), MeasurableSet::Sections(s)) => {
                l.slab_volume * s.masses.iter().sum::<f64>()
            }
            _ => unreachable!("check_set admitted an incompatible pair"),
        })
    }

    pub fn contains(&self, set: &MeasurableSet, p: &Point) -> Result<bool> {
        self.check_set(set)?;
        let bad = || mismatch(format!("point {p:?} is not in this {} space", self.kind_name()));
        match (set, p) {
            (MeasurableSet::Atoms(s) | MeasurableSet::Cells(s), Point::Index(i)) => {
                if *i >= s.size() {
                    return bad();
                }
                Ok(s.contains(*i))
            }
            (MeasurableSet::Intervals(u), Point::Coord(c)) if c.len() == 1 => Ok(u.contains(c[0])),
            (MeasurableSet::Ball(b), Point::Coord(x)) => {
                let MeasureSpace::Euclidean { dim } = self else { return bad() };
                if x.len() != *dim {
                    return bad();
                }
                Ok(norm(x) < b.radius)
            }
            (MeasurableSet::Hypograph(h), Point::Coord(c)) if c.len() == 2 => Ok(h.contains(c[0], c[1])),
            (MeasurableSet::Sections(s), Point::Sectioned { slice, coord }) => {
                let MeasureSpace::Sectioned(l) = self else { return bad() };
                if *slice >= l.slices || coord.len() != l.order {
                    return bad();
                }
                Ok(norm(coord) < section_radius(l.order, s.masses[*slice]))
            }
            _ => bad(),
        }
    }

    pub fn union(&self, a: &MeasurableSet, b: &MeasurableSet) -> Result<MeasurableSet> {
        self.binary(a, b, SetOp::Union)
    }

    pub fn intersection(&self, a: &MeasurableSet, b: &MeasurableSet) -> Result<MeasurableSet> {
        self.binary(a, b, SetOp::Intersection)
    }

    pub fn difference(&self, a: &MeasurableSet, b: &MeasurableSet) -> Result<MeasurableSet> {
        self.binary(a, b, SetOp::Difference)
    }

    pub fn set_op(&self, op: SetOp, a: &MeasurableSet, b: &MeasurableSet) -> Result<MeasurableSet> {
        self.binary(a, b, op)
    }

    fn binary(&self, a: &MeasurableSet, b: &MeasurableSet, op: SetOp) -> Result<MeasurableSet> {
        if a.variant_name() != b.variant_name() {
            return unsupported(format!("{} {op:?} {}", a.variant_name(), b.variant_name()));
        }
        self.check_set(a)?;
        self.check_set(b)?;
        use MeasurableSet as M;
        Ok(match (a, b, op) {
            (M::Atoms(x), M::Atoms(y), _) => M::Atoms(index_op(x, y, op)),
            (M::Cells(x), M::Cells(y), _) => M::Cells(index_op(x, y, op)),
            (M::Intervals(x), M::Intervals(y), SetOp::Union) => M::Intervals(x.union(y)),
            (M::Intervals(x), M::Intervals(y), SetOp::Intersection) => M::Intervals(x.intersection(y)),
            (M::Intervals(x), M::Intervals(y), SetOp::Difference) => M::Intervals(x.difference(y)),
            (M::Ball(x), M::Ball(y), SetOp::Union) => M::Ball(RadialBall {
                radius: x.radius.max(y.radius),
            }),
            (M::Ball(x), M::Ball(y), SetOp::Intersection) => M::Ball(RadialBall {
                radius: x.radius.min(y.radius),
            }),
            (M::Hypograph(x), M::Hypograph(y), SetOp::Union) => M::Hypograph(x.union(y)),
            (M::Hypograph(x), M::Hypograph(y), SetOp::Intersection) => M::Hypograph(x.intersection(y)),
            (M::Sections(x), M::Sections(y), SetOp::Union | SetOp::Intersection) => {
                let f = if op == SetOp::Union { f64::max } else { f64::min };
                M::Sections(Sections {
                    masses: x.masses.iter().zip(&y.masses).map(|(&p, &q)| f(p, q)).collect(),
                })
            }
            _ => {
                return unsupported(format!(
                    "{op:?} of two {} sets is not representable",
                    a.variant_name()
                ))
            }
        })
    }

    pub fn is_subset(&self, a: &MeasurableSet, b: &MeasurableSet) -> Result<bool> {
        if a.variant_name() != b.variant_name() {
            return unsupported(format!("{} within {}", a.variant_name(), b.variant_name()));
        }
        self.check_set(a)?;
        self.check_set(b)?;
        use MeasurableSet as M;
        Ok(match (a, b) {
            (M::Atoms(x), M::Atoms(y)) | (M::Cells(x), M::Cells(y)) => x.is_subset(y),
            (M::Intervals(x), M::Intervals(y)) => x.is_subset(y),
            (M::Ball(x), M::Ball(y)) => x.radius <= y.radius,
            (M::Hypograph(x), M::Hypograph(y)) => x.is_subset(y),
            (M::Sections(x), M::Sections(y)) => x.masses.iter().zip(&y.masses).all(|(p, q)| p <= q),
            _ => unreachable!(),
        })
    }

    pub fn set_eq(&self, a: &MeasurableSet, b: &MeasurableSet) -> Result<bool> {
        Ok(self.is_subset(a, b)? && self.is_subset(b, a)?)
    }

    /// A finite set of points on which step data built from `sets` is
    /// completely determined: every atom or cell, or every boundary value
    /// together with the midpoints between consecutive boundaries and one
    /// point beyond the last.
    pub fn sample_points(&self, sets: &[&MeasurableSet]) -> Vec<Point> {
        match self {
            MeasureSpace::Atoms { masses } => (0..masses.len()).map(Point::Index).collect(),
            MeasureSpace::Grid(g) => (0..g.cell_count()).map(Point::Index).collect(),
            MeasureSpace::HalfLine => {
                let marks = with_midpoints(sets.iter().flat_map(|s| match s {
                    MeasurableSet::Intervals(u) => u.endpoints().collect::<Vec<_>>(),
                    _ => Vec::new(),
                }));
                marks.into_iter().map(Point::real).collect()
            }
            MeasureSpace::Euclidean { dim } => {
                let radii = with_midpoints(sets.iter().filter_map(|s| match s {
                    MeasurableSet::Ball(b) => Some(b.radius),
                    _ => None,
                }));
                let mut out = Vec::new();
                for r in radii {
                    let mut axis = vec![0.0; *dim];
                    axis[0] = r;
                    out.push(Point::Coord(axis));
                    if *dim > 1 {
                        let c = r / (*dim as f64).sqrt();
                        out.push(Point::Coord(vec![-c; *dim]));
                    }
                }
                out
            }
            MeasureSpace::Quadrant => {
                let mut s_marks = Vec::new();
                let mut t_marks = Vec::new();
                for s in sets {
                    if let MeasurableSet::Hypograph(h) = s {
                        for [a, b, height] in h.pieces() {
                            s_marks.extend([a, b]);
                            t_marks.push(height);
                        }
                    }
                }
                let s_marks = with_midpoints(s_marks);
                let t_marks = with_midpoints(t_marks);
                s_marks
                    .iter()
                    .flat_map(|&s| t_marks.iter().map(move |&t| Point::Coord(vec![s, t])))
                    .collect()
            }
            MeasureSpace::Sectioned(l) => {
                let mut out = Vec::new();
                for slice in 0..l.slices {
                    let radii = with_midpoints(sets.iter().filter_map(|s| match s {
                        MeasurableSet::Sections(sec) => sec
                            .masses
                            .get(slice)
                            .map(|&m| section_radius(l.order, m)),
                        _ => None,
                    }));
                    for r in radii {
                        for sign in [1.0, -1.0] {
                            let mut coord = vec![0.0; l.order];
                            coord[0] = sign * r;
                            out.push(Point::Sectioned { slice, coord });
                        }
                    }
                }
                out
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SetOp {
    Union,
    Intersection,
    Difference,
}

fn index_op(a: &IndexSet, b: &IndexSet, op: SetOp) -> IndexSet {
    match op {
        SetOp::Union => a.union(b),
        SetOp::Intersection => a.intersection(b),
        SetOp::Difference => a.difference(b),
    }
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Radius of the centred `k`-ball with the given cross-section measure.
pub(crate) fn section_radius(order: usize, mass: f64) -> f64 {
    if order == 1 {
        mass / 2.0
    } else {
        ball_radius(order, mass)
    }
}

/// Sorted distinct marks including zero, the midpoints between consecutive
/// marks, and one point past the largest.
fn with_midpoints(marks: impl IntoIterator<Item = f64>) -> Vec<f64> {
    let mut m: Vec<f64> = marks.into_iter().filter(|v| *v >= 0.0).collect();
    m.push(0.0);
    m.sort_by(f64::total_cmp);
    m.dedup();
    let mut out = Vec::with_capacity(2 * m.len() + 1);
    for w in m.windows(2) {
        out.push(w[0]);
        out.push(0.5 * (w[0] + w[1]));
    }
    let last = *m.last().unwrap();
    out.push(last);
    out.push(last + 1.0);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn measure_examples() {
        let hl = MeasureSpace::HalfLine;
        assert_eq!(hl.measure(&hl.empty_set()).unwrap(), 0.0);
        let u = MeasurableSet::Intervals(IntervalUnion::new(vec![[0.0, 1.0], [2.0, 5.0]]).unwrap());
        assert_eq!(hl.measure(&u).unwrap(), 4.0);
        let q = MeasureSpace::Quadrant;
        let h = MeasurableSet::Hypograph(Hypograph::new(vec![[3.0, 2.0]]).unwrap());
        assert_eq!(q.measure(&h).unwrap(), 6.0);
    }

    #[test]
    fn mismatched_sets_are_rejected() {
        let atoms = MeasureSpace::counting(3);
        let other = MeasurableSet::Atoms(IndexSet::empty(4));
        assert!(matches!(atoms.measure(&other), Err(Error::SpaceMismatch(_))));
        let iv = MeasurableSet::interval(0.0, 1.0);
        assert!(matches!(atoms.measure(&iv), Err(Error::SpaceMismatch(_))));
    }

    #[test]
    fn ball_algebra() {
        let e = MeasureSpace::Euclidean { dim: 2 };
        let a = MeasurableSet::ball(1.0);
        let b = MeasurableSet::ball(2.0);
        assert_eq!(e.union(&a, &b).unwrap(), b);
        assert_eq!(e.intersection(&a, &b).unwrap(), a);
        assert!(matches!(e.difference(&b, &a), Err(Error::UnsupportedCombination(_))));
        assert!((e.measure(&a).unwrap() - PI).abs() < 1e-12);
    }

    #[test]
    fn cross_variant_operations_rejected() {
        let hl = MeasureSpace::HalfLine;
        let a = MeasurableSet::interval(0.0, 1.0);
        let b = MeasurableSet::ball(1.0);
        assert!(matches!(hl.union(&a, &b), Err(Error::UnsupportedCombination(_))));
    }

    #[test]
    fn grid_geometry() {
        let g = Grid::centered(vec![2, 5], 1.0).unwrap();
        assert!(g.is_symmetric(1));
        assert_eq!(g.center(2), vec![-0.5, 0.0]);
        assert_eq!(g.center(9), vec![0.5, 2.0]);
        assert_eq!(g.locate(&[0.5, 2.0]), Some(9));
        assert_eq!(g.slice_count(1), 2);
        assert_eq!(g.section_len(1), 5);
        let a = Grid::anchored(vec![3, 3], 0.5).unwrap();
        assert!(!a.is_symmetric(1));
        assert_eq!(a.cell_mass(), 0.25);
        assert_eq!(a.multi_index(a.flat_index(&[2, 1])), vec![2, 1]);
    }

    #[test]
    fn sections_membership() {
        let l = SectionLayout {
            dim: 2,
            order: 1,
            slices: 2,
            slab_volume: 1.0,
        };
        let sp = MeasureSpace::Sectioned(l);
        let s = MeasurableSet::Sections(Sections { masses: vec![2.0, 0.0] });
        let p = |slice, y: f64| Point::Sectioned { slice, coord: vec![y] };
        assert!(sp.contains(&s, &p(0, 0.99)).unwrap());
        assert!(sp.contains(&s, &p(0, -0.99)).unwrap());
        assert!(!sp.contains(&s, &p(0, 1.0)).unwrap());
        assert!(!sp.contains(&s, &p(1, 0.0)).unwrap());
        assert_eq!(sp.measure(&s).unwrap(), 2.0);
    }

    #[test]
    fn space_json_is_tagged() {
        let s = MeasureSpace::atoms(vec![1.0, 2.0]).unwrap();
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, r#"{"kind":"atoms","masses":[1.0,2.0]}"#);
        let g: MeasureSpace =
            serde_json::from_str(r#"{"kind":"grid","shape":[2,2],"h":1.0,"origin":[0,0]}"#).unwrap();
        assert_eq!(g.total_mass(), Some(4.0));
    }
}
