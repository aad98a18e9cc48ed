//! Set transformations `R: Σ_X -> Σ_Y` and property checkers.

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{invalid, mismatch, Error, Result};
use crate::measure::{
    IndexSet, IntervalUnion, Hypograph, MeasurableSet, MeasureSpace, SectionLayout, Sections,
};
use crate::numeric::{ball_radius, close};
use crate::tree::HomogeneousTree;
use crate::witness::{random_chain, random_nonzero_step, random_set, random_subset, trial_rng};

/// Largest atom count accepted by user tables (the table has `2^n` rows).
pub const USER_TABLE_MAX_ATOMS: usize = 12;

/// Trials used to establish the flags of a user table.
pub const USER_TABLE_TRIALS: u64 = 200;

/// Serializable description of a transformation; the domain is supplied
/// separately.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TransformSpec {
    /// `R(E) = [0, μ(E))`.
    Classical,
    /// `R(E) = [μ(E), 2μ(E))`.
    Shifted,
    /// `R(E)` = centred ball in `R^dim` of volume `μ(E)`.
    Spherical { dim: usize },
    /// Steiner symmetrization in the last `order` grid axes.
    Steiner { order: usize },
    /// Hypograph of the decreasing rearrangement of `x -> μ(E_x)`.
    Multidim2d,
    /// First `|E|` vertices of a homogeneous tree in canonical order.
    TreeInitialSegment { q: usize, d: usize },
    /// Explicit table indexed by the atom bitmask of `E`.
    UserTable { codomain: MeasureSpace, table: Vec<MeasurableSet> },
}

impl TransformSpec {
    pub fn name(&self) -> &'static str {
        match self {
            TransformSpec::Classical => "classical",
            TransformSpec::Shifted => "shifted",
            TransformSpec::Spherical { .. } => "spherical",
            TransformSpec::Steiner { .. } => "steiner",
            TransformSpec::Multidim2d => "multidim2d",
            TransformSpec::TreeInitialSegment { .. } => "tree_initial_segment",
            TransformSpec::UserTable { .. } => "user_table",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Flags {
    pub monotone: bool,
    pub measure_preserving: bool,
    pub fatou: bool,
    pub maps_empty_to_null: bool,
}

impl Flags {
    const ALL: Flags = Flags {
        monotone: true,
        measure_preserving: true,
        fatou: true,
        maps_empty_to_null: true,
    };
}

#[derive(Debug, Clone, PartialEq)]
enum Kind {
    Classical,
    Shifted,
    Spherical { dim: usize },
    Steiner { section_len: usize, cell_section_mass: f64 },
    Multidim2d { cols: usize, h: f64 },
    Tree { order: Vec<usize> },
    UserTable { table: Vec<MeasurableSet> },
}

/// A set transformation with its domain, codomain and structural flags.
#[derive(Debug, Clone, PartialEq)]
pub struct SetTransformation {
    spec: TransformSpec,
    kind: Kind,
    domain: MeasureSpace,
    codomain: MeasureSpace,
    flags: Flags,
}

impl SetTransformation {
    pub fn classical(domain: MeasureSpace) -> Result<Self> {
        Self::build(TransformSpec::Classical, domain, 0)
    }

    pub fn shifted(domain: MeasureSpace) -> Result<Self> {
        Self::build(TransformSpec::Shifted, domain, 0)
    }

    pub fn spherical(domain: MeasureSpace, dim: usize) -> Result<Self> {
        Self::build(TransformSpec::Spherical { dim }, domain, 0)
    }

    pub fn steiner(domain: MeasureSpace, order: usize) -> Result<Self> {
        Self::build(TransformSpec::Steiner { order }, domain, 0)
    }

    pub fn multidim2d(domain: MeasureSpace) -> Result<Self> {
        Self::build(TransformSpec::Multidim2d, domain, 0)
    }

    /// Initial-segment transformation on the vertices of `tree`, with the
    /// counting measure on both sides.
    pub fn tree(tree: &HomogeneousTree) -> Self {
        let n = tree.vertex_count();
        SetTransformation {
            spec: TransformSpec::TreeInitialSegment { q: tree.q(), d: tree.d() },
            kind: Kind::Tree { order: tree.canonical_order() },
            domain: MeasureSpace::counting(n),
            codomain: MeasureSpace::counting(n),
            flags: Flags::ALL,
        }
    }

    /// Registers a finite table. Flags come from a check of
    /// [`USER_TABLE_TRIALS`] trials seeded with `seed`.
    pub fn user_table(domain: MeasureSpace, codomain: MeasureSpace, table: Vec<MeasurableSet>, seed: u64) -> Result<Self> {
        Self::build(TransformSpec::UserTable { codomain, table }, domain, seed)
    }

    /// Builds a transformation from its description. `seed` is only used to
    /// establish the flags of user tables.
    pub fn build(spec: TransformSpec, domain: MeasureSpace, seed: u64) -> Result<Self> {
        domain.validate()?;
        let (kind, codomain) = match &spec {
            TransformSpec::Classical => (Kind::Classical, MeasureSpace::HalfLine),
            TransformSpec::Shifted => (Kind::Shifted, MeasureSpace::HalfLine),
            TransformSpec::Spherical { dim } => {
                if *dim == 0 {
                    return invalid("spherical symmetrization needs a positive dimension");
                }
                (Kind::Spherical { dim: *dim }, MeasureSpace::Euclidean { dim: *dim })
            }
            TransformSpec::Steiner { order } => {
                let MeasureSpace::Grid(g) = &domain else {
                    return mismatch("Steiner symmetrization acts on grids");
                };
                let n = g.dim();
                if *order == 0 || *order > n {
                    return invalid(format!("order {order} is outside 1..={n}"));
                }
                if !g.is_symmetric(*order) {
                    return Err(Error::InvalidGrid(format!(
                        "grid is not symmetric about the origin in its last {order} axes"
                    )));
                }
                let layout = SectionLayout {
                    dim: n,
                    order: *order,
                    slices: g.slice_count(*order),
                    slab_volume: g.h.powi((n - order) as i32),
                };
                let kind = Kind::Steiner {
                    section_len: g.section_len(*order),
                    cell_section_mass: g.h.powi(*order as i32),
                };
                (kind, MeasureSpace::Sectioned(layout))
            }
            TransformSpec::Multidim2d => {
                let MeasureSpace::Grid(g) = &domain else {
                    return mismatch("the 2D rearrangement acts on grids");
                };
                if g.dim() != 2 {
                    return Err(Error::InvalidGrid(format!("expected a 2D grid, got {}D", g.dim())));
                }
                let kind = Kind::Multidim2d {
                    cols: g.shape[1],
                    h: g.h,
                };
                (kind, MeasureSpace::Quadrant)
            }
            TransformSpec::TreeInitialSegment { q, d } => {
                let tree = HomogeneousTree::new(*q, *d)?;
                let t = Self::tree(&tree);
                if domain != t.domain {
                    return mismatch(format!(
                        "tree transformation needs the counting measure on {} vertices",
                        tree.vertex_count()
                    ));
                }
                return Ok(t);
            }
            TransformSpec::UserTable { codomain, table } => {
                let MeasureSpace::Atoms { masses } = &domain else {
                    return mismatch("user tables act on discrete atom spaces");
                };
                let n = masses.len();
                if n > USER_TABLE_MAX_ATOMS {
                    return Err(Error::SizeLimit {
                        what: "user table atoms",
                        actual: n,
                        limit: USER_TABLE_MAX_ATOMS,
                    });
                }
                if table.len() != 1 << n {
                    return invalid(format!("table needs {} rows, got {}", 1usize << n, table.len()));
                }
                codomain.validate()?;
                for set in table {
                    codomain.check_set(set)?;
                }
                if codomain.measure(&table[0])? > 0.0 {
                    return invalid("the image of the empty set must be null");
                }
                (Kind::UserTable { table: table.clone() }, codomain.clone())
            }
        };
        let mut t = SetTransformation {
            spec,
            kind,
            domain,
            codomain,
            flags: Flags::ALL,
        };
        match t.kind {
            Kind::Shifted => {
                t.flags.monotone = false;
                t.flags.fatou = false;
            }
            Kind::UserTable { .. } => {
                let verdict = |p| -> Result<bool> { Ok(t.check_property(p, USER_TABLE_TRIALS, seed)?.holds()) };
                let flags = Flags {
                    monotone: verdict(Property::Monotone)?,
                    measure_preserving: verdict(Property::MeasurePreserving)?,
                    fatou: verdict(Property::Fatou)?,
                    maps_empty_to_null: true,
                };
                t.flags = flags;
            }
            _ => {}
        }
        Ok(t)
    }

    pub fn spec(&self) -> &TransformSpec {
        &self.spec
    }

    pub fn name(&self) -> &'static str {
        self.spec.name()
    }

    pub fn domain(&self) -> &MeasureSpace {
        &self.domain
    }

    pub fn codomain(&self) -> &MeasureSpace {
        &self.codomain
    }

    pub fn flags(&self) -> Flags {
        self.flags
    }

    pub fn apply(&self, e: &MeasurableSet) -> Result<MeasurableSet> {
        let m = self.domain.measure(e)?;
        Ok(match &self.kind {
            Kind::Classical => MeasurableSet::Intervals(IntervalUnion::interval(0.0, m)),
            Kind::Shifted => MeasurableSet::Intervals(IntervalUnion::interval(m, 2.0 * m)),
            Kind::Spherical { dim } => MeasurableSet::ball(ball_radius(*dim, m)),
            Kind::Steiner { section_len, cell_section_mass, .. } => {
                let cells = e.as_index_set().expect("grid set");
                let MeasureSpace::Sectioned(l) = &self.codomain else { unreachable!() };
                let mut counts = vec![0usize; l.slices];
                for i in cells.members() {
                    counts[i / section_len] += 1;
                }
                MeasurableSet::Sections(Sections {
                    masses: counts.iter().map(|&c| c as f64 * cell_section_mass).collect(),
                })
            }
            Kind::Multidim2d { cols, h } => {
                let cells = e.as_index_set().expect("grid set");
                let mut heights = vec![0usize; *cols];
                for i in cells.members() {
                    heights[i % cols] += 1;
                }
                let heights: Vec<f64> = heights.iter().map(|&c| c as f64 * h).collect();
                MeasurableSet::Hypograph(Hypograph::from_column_heights(&heights, *h))
            }
            Kind::Tree { order } => {
                let k = e.as_index_set().expect("atom set").len();
                let set = IndexSet::from_members(order.len(), order[..k].iter().copied())?;
                MeasurableSet::Atoms(set)
            }
            Kind::UserTable { table } => {
                let mask = e.as_index_set().and_then(IndexSet::mask).expect("small atom set");
                table[mask as usize].clone()
            }
        })
    }

    /// Runs the checker for `property` on `trials` seeded witnesses.
    pub fn check_property(&self, property: Property, trials: u64, seed: u64) -> Result<CheckReport> {
        if trials == 0 {
            return invalid("at least one trial is needed");
        }
        let mut report = CheckReport {
            transform: self.name().to_string(),
            property,
            verdict: Verdict::HoldsOnWitnesses,
            trials,
            seed,
            counterexample: None,
            notes: Vec::new(),
        };
        let sp = &self.domain;
        let co = &self.codomain;
        for trial in 0..trials {
            let rng = &mut trial_rng(seed, trial);
            let witness = match property {
                Property::Monotone => {
                    let f = random_set(sp, rng)?;
                    let e = random_subset(sp, &f, rng)?;
                    let (re, rf) = (self.apply(&e)?, self.apply(&f)?);
                    (!co.is_subset(&re, &rf)?).then(|| json!({ "e": e, "f": f, "r_e": re, "r_f": rf }))
                }
                Property::Fatou => {
                    let chain = random_chain(sp, rng)?;
                    let images = chain.iter().map(|a| self.apply(a)).collect::<Result<Vec<_>>>()?;
                    let mut nested = true;
                    for w in images.windows(2) {
                        nested &= co.is_subset(&w[0], &w[1])?;
                    }
                    let mut union = images[0].clone();
                    for img in &images[1..] {
                        union = co.union(&union, img)?;
                    }
                    let exact = co.set_eq(&union, images.last().unwrap())?;
                    (!(nested && exact)).then(|| json!({ "chain": chain, "images": images, "nested": nested }))
                }
                Property::MeasurePreserving => {
                    let e = random_set(sp, rng)?;
                    let re = self.apply(&e)?;
                    let (m, n) = (sp.measure(&e)?, co.measure(&re)?);
                    (!close(m, n, 1e-12)).then(|| json!({ "e": e, "r_e": re, "mu": m, "nu": n }))
                }
                Property::Intersection => {
                    let a = random_set(sp, rng)?;
                    let b = if rng_coin(rng) { random_subset(sp, &a, rng)? } else { random_set(sp, rng)? };
                    let lhs = sp.measure(&sp.intersection(&a, &b)?)?;
                    let rhs = co.measure(&co.intersection(&self.apply(&a)?, &self.apply(&b)?)?)?;
                    (lhs > rhs + 1e-12 * lhs.max(1.0))
                        .then(|| json!({ "a": a, "b": b, "mu_intersection": lhs, "nu_image_intersection": rhs }))
                }
                Property::Nondegenerate => {
                    let f = random_nonzero_step(sp, rng)?;
                    let mut positive = false;
                    for level in f.levels() {
                        positive |= co.measure(&self.apply(level)?)? > 0.0;
                    }
                    (!positive).then(|| json!({ "f": f }))
                }
            };
            if let Some(w) = witness {
                report.verdict = Verdict::Violated;
                report.counterexample = Some(json!({ "trial": trial, "witness": w }));
                break;
            }
        }
        if property == Property::Nondegenerate && matches!(self.kind, Kind::Shifted) {
            report.notes.push(
                "a constant c on a space of total mass m rearranges to c on [m, 2m), which is not identically zero"
                    .to_string(),
            );
        }
        Ok(report)
    }
}

fn rng_coin<R: rand::Rng>(rng: &mut R) -> bool {
    rng.gen_bool(0.5)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Property {
    Monotone,
    Fatou,
    MeasurePreserving,
    Intersection,
    Nondegenerate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    HoldsOnWitnesses,
    Violated,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub transform: String,
    pub property: Property,
    pub verdict: Verdict,
    pub trials: u64,
    pub seed: u64,
    pub counterexample: Option<serde_json::Value>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub notes: Vec<String>,
}

impl CheckReport {
    pub fn holds(&self) -> bool {
        self.verdict == Verdict::HoldsOnWitnesses
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::Grid;
    use std::f64::consts::PI;

    fn atoms() -> MeasureSpace {
        MeasureSpace::atoms(vec![1.0, 2.0, 0.5, 1.5, 1.0, 3.0]).unwrap()
    }

    #[test]
    fn apply_examples() {
        let sp = MeasureSpace::HalfLine;
        let e = MeasurableSet::Intervals(IntervalUnion::new(vec![[0.0, 1.0], [2.0, 4.0]]).unwrap());
        let c = SetTransformation::classical(sp.clone()).unwrap();
        assert_eq!(c.apply(&e).unwrap(), MeasurableSet::interval(0.0, 3.0));
        let s = SetTransformation::shifted(sp.clone()).unwrap();
        assert_eq!(s.apply(&e).unwrap(), MeasurableSet::interval(3.0, 6.0));
        let sph = SetTransformation::spherical(sp.clone(), 2).unwrap();
        let MeasurableSet::Ball(b) = sph.apply(&MeasurableSet::interval(0.0, PI)).unwrap() else { panic!() };
        assert!((b.radius - 1.0).abs() < 1e-12);
        assert!(c.apply(&sp.empty_set()).unwrap().is_empty());
    }

    #[test]
    fn steiner_counts_per_slice() {
        let g = Grid::centered(vec![2, 4], 0.5).unwrap();
        let sp = MeasureSpace::grid(g).unwrap();
        let t = SetTransformation::steiner(sp.clone(), 1).unwrap();
        let e = sp.index_set(IndexSet::from_members(8, [0, 1, 5]).unwrap()).unwrap();
        let MeasurableSet::Sections(s) = t.apply(&e).unwrap() else { panic!() };
        assert_eq!(s.masses, vec![1.0, 0.5]);
        assert_eq!(t.codomain().measure(&t.apply(&e).unwrap()).unwrap(), sp.measure(&e).unwrap());
    }

    #[test]
    fn steiner_rejects_bad_grids() {
        let g = Grid::anchored(vec![2, 4], 1.0).unwrap();
        let sp = MeasureSpace::grid(g).unwrap();
        assert!(matches!(SetTransformation::steiner(sp.clone(), 1), Err(Error::InvalidGrid(_))));
        assert!(matches!(SetTransformation::steiner(sp, 3), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn multidim2d_uses_column_heights() {
        // rows are y, columns are x
        let g = Grid::anchored(vec![3, 2], 1.0).unwrap();
        let sp = MeasureSpace::grid(g).unwrap();
        let t = SetTransformation::multidim2d(sp.clone()).unwrap();
        // cells (0,1), (1,1), (2,0)
        let e = sp.index_set(IndexSet::from_members(6, [1, 3, 4]).unwrap()).unwrap();
        let MeasurableSet::Hypograph(h) = t.apply(&e).unwrap() else { panic!() };
        assert_eq!(h.steps(), &[[1.0, 2.0], [2.0, 1.0]]);
    }

    #[test]
    fn builtins_hold_their_flags() {
        let sp = atoms();
        for t in [
            SetTransformation::classical(sp.clone()).unwrap(),
            SetTransformation::spherical(sp.clone(), 3).unwrap(),
        ] {
            for p in [Property::Monotone, Property::Fatou, Property::MeasurePreserving, Property::Intersection] {
                assert!(t.check_property(p, 100, 11).unwrap().holds(), "{} {p:?}", t.name());
            }
        }
    }

    #[test]
    fn shifted_is_caught() {
        let t = SetTransformation::shifted(atoms()).unwrap();
        let r = t.check_property(Property::Monotone, 100, 7).unwrap();
        assert_eq!(r.verdict, Verdict::Violated);
        assert!(r.counterexample.is_some());
        assert!(t.check_property(Property::MeasurePreserving, 100, 7).unwrap().holds());
        assert!(!t.check_property(Property::Intersection, 100, 7).unwrap().holds());
    }

    #[test]
    fn zero_trials_rejected() {
        let t = SetTransformation::classical(atoms()).unwrap();
        assert!(matches!(t.check_property(Property::Monotone, 0, 1), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn user_table_flags_are_checked() {
        let sp = MeasureSpace::counting(2);
        let co = MeasureSpace::HalfLine;
        // identity-like prefix map: monotone and measure preserving
        let table: Vec<MeasurableSet> = (0..4u64)
            .map(|m| MeasurableSet::interval(0.0, m.count_ones() as f64))
            .collect();
        let t = SetTransformation::user_table(sp.clone(), co.clone(), table, 3).unwrap();
        assert!(t.flags().monotone && t.flags().measure_preserving);
        let bad: Vec<MeasurableSet> = (0..4u64)
            .map(|m| if m == 0 { MeasurableSet::interval(0.0, 0.0) } else { MeasurableSet::interval(m as f64, m as f64 + 1.0) })
            .collect();
        let t = SetTransformation::user_table(sp.clone(), co.clone(), bad, 3).unwrap();
        assert!(!t.flags().monotone);
        let null = vec![MeasurableSet::interval(0.0, 1.0); 4];
        assert!(SetTransformation::user_table(sp, co, null, 3).is_err());
    }
}
