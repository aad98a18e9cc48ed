//! Spherical and Steiner symmetrization of grid functions, the 2D iterated
//! rearrangement, associated weights, and the normability suites built on
//! them.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{invalid, Error, Result};
use crate::lorentz::{concavity_slack, LorentzParams};
use crate::measure::{section_radius, Grid, MeasurableSet, MeasureSpace, Point, PointWeight, Sections, StepFunction, Weight};
use crate::numeric::{adaptive_simpson, ball_radius, close, unit_ball_volume, unit_sphere_area};
use crate::rearrange::{permutation_saturation_oracle, rearrange};
use crate::transform::SetTransformation;
use crate::witness::{random_integers, random_set, trial_rng};

/// Nonnegative values on the cells of a grid, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridFunction {
    pub grid: Grid,
    pub values: Vec<f64>,
}

impl GridFunction {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        grid.validate()?;
        if values.len() != grid.cell_count() {
            return invalid(format!("expected {} cell values, got {}", grid.cell_count(), values.len()));
        }
        if let Some(v) = values.iter().find(|v| !(**v >= 0.0 && v.is_finite())) {
            return invalid(format!("cell value {v} is negative or not finite"));
        }
        Ok(GridFunction { grid, values })
    }

    pub fn space(&self) -> MeasureSpace {
        MeasureSpace::Grid(self.grid.clone())
    }

    pub fn to_step(&self) -> Result<StepFunction> {
        StepFunction::from_index_values(self.space(), &self.values)
    }
}

/// `f*` on `[0, ∞)` together with the dimension, read radially as
/// `f*_Sp(x) = f*(σ_n |x|^n)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialProfile {
    pub dim: usize,
    pub profile: StepFunction,
}

impl RadialProfile {
    /// `f*(t)`.
    pub fn at_measure(&self, t: f64) -> f64 {
        self.profile.value_at(&Point::real(t)).expect("half-line profile")
    }

    /// `f*_Sp(x)`.
    pub fn evaluate(&self, x: &[f64]) -> f64 {
        let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        self.at_measure(unit_ball_volume(self.dim) * r.powi(self.dim as i32))
    }

    /// `(t, value)` rows: left end of each piece, then `(end, 0)`.
    pub fn rows(&self) -> Vec<(f64, f64)> {
        let mut rows = vec![];
        let mut start = 0.0;
        for (a, level) in self.profile.values().iter().zip(self.profile.levels()) {
            rows.push((start, *a));
            if let MeasurableSet::Intervals(u) = level {
                start = u.length();
            }
        }
        rows.push((start, 0.0));
        rows
    }
}

/// Classical rearrangement of the cell values, to be read radially in the
/// grid's dimension.
pub fn spherical_profile(f: &GridFunction) -> Result<RadialProfile> {
    let r = SetTransformation::classical(f.space())?;
    let profile = rearrange(&r, &f.to_step()?)?.to_step()?;
    Ok(RadialProfile {
        dim: f.grid.dim(),
        profile,
    })
}

/// Steiner symmetrization of order `k` in the last `k` axes, cell by cell.
///
/// For `k = 1` each slice's values are sorted and placed outward from the
/// centre, nearer cells first and the negative side first on ties, so every
/// slice keeps its multiset of values. For `k >= 2` the cell at radius `ρ`
/// gets `(f_x̄)*(σ_k ρ^k)`.
pub fn steiner(f: &GridFunction, k: usize) -> Result<GridFunction> {
    let g = &f.grid;
    let n = g.dim();
    if k == 0 || k > n {
        return invalid(format!("order {k} is outside 1..={n}"));
    }
    if !g.is_symmetric(k) {
        return Err(Error::InvalidGrid(format!(
            "grid is not symmetric about the origin in its last {k} axes"
        )));
    }
    let len = g.section_len(k);
    let mut out = vec![0.0; f.values.len()];
    // positions inside a section, by distance to the centre
    let section_coords: Vec<Vec<f64>> = (0..len).map(|i| g.center(i)[n - k..].to_vec()).collect();
    let radius = |y: &[f64]| y.iter().map(|v| v * v).sum::<f64>().sqrt();
    let mut placement: Vec<usize> = (0..len).collect();
    placement.sort_by(|&i, &j| {
        let (a, b) = (&section_coords[i], &section_coords[j]);
        radius(a).total_cmp(&radius(b)).then(a[0].total_cmp(&b[0]))
    });
    let cell = g.h.powi(k as i32);
    let sigma = unit_ball_volume(k);
    for slice in 0..g.slice_count(k) {
        let base = slice * len;
        let mut sorted = f.values[base..base + len].to_vec();
        sorted.sort_by(|a, b| b.total_cmp(a));
        if k == 1 {
            for (rank, &pos) in placement.iter().enumerate() {
                out[base + pos] = sorted[rank];
            }
        } else {
            for (pos, y) in section_coords.iter().enumerate() {
                let s = sigma * radius(y).powi(k as i32);
                let idx = (s / cell).floor() as usize;
                out[base + pos] = sorted.get(idx).copied().unwrap_or(0.0);
            }
        }
    }
    GridFunction::new(g.clone(), out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    /// Sort every column (fixed `x`, along `y`), then every row.
    Iterated,
    /// Layer cake with the multidim2d set transformation.
    SetTransform,
}

/// Column-then-row sorting of a `rows x cols` row-major array.
fn iterated_2d(rows: usize, cols: usize, values: &[f64]) -> Vec<f64> {
    let mut v = values.to_vec();
    for c in 0..cols {
        let mut col: Vec<f64> = (0..rows).map(|r| v[r * cols + c]).collect();
        col.sort_by(|a, b| b.total_cmp(a));
        for (r, x) in col.into_iter().enumerate() {
            v[r * cols + c] = x;
        }
    }
    for r in 0..rows {
        v[r * cols..(r + 1) * cols].sort_by(|a, b| b.total_cmp(a));
    }
    v
}

/// `f*_2(s, t)` on the anchored grid of the same shape and cell size. Axis 0
/// (rows) is `y`, rearranged first into `t`; axis 1 (columns) is `x`, into `s`.
pub fn rearrange_2d(f: &GridFunction, route: Route) -> Result<GridFunction> {
    let g = &f.grid;
    if g.dim() != 2 {
        return Err(Error::InvalidGrid(format!("expected a 2D grid, got {}D", g.dim())));
    }
    let (rows, cols) = (g.shape[0], g.shape[1]);
    let out_grid = Grid::anchored(g.shape.clone(), g.h)?;
    let values = match route {
        Route::Iterated => iterated_2d(rows, cols, &f.values),
        Route::SetTransform => {
            let r = SetTransformation::multidim2d(f.space())?;
            let fr = rearrange(&r, &f.to_step()?)?;
            let mut out = vec![0.0; rows * cols];
            for row in 0..rows {
                for col in 0..cols {
                    let p = Point::Coord(vec![(col as f64 + 0.5) * g.h, (row as f64 + 0.5) * g.h]);
                    out[row * cols + col] = fr.evaluate(&p)?;
                }
            }
            out
        }
    };
    GridFunction::new(out_grid, values)
}

/// `v̄(x̄, s) = ∫_{Σ_{k-1}} v(x̄, (s/σ_k)^{1/k} θ) dθ` for `k` in `{1, 2}`.
/// For `k = 1` the sphere is `{-1, 1}`; for `k = 2` the circle integral uses
/// the uniform trapezoid rule with `nodes` points.
pub struct AssociatedWeight<'a, W: PointWeight + ?Sized> {
    weight: &'a W,
    order: usize,
    nodes: usize,
}

impl<'a, W: PointWeight + ?Sized> AssociatedWeight<'a, W> {
    pub fn new(weight: &'a W, order: usize, nodes: usize) -> Result<Self> {
        match order {
            1 => {}
            2 if nodes >= 4 => {}
            2 => return invalid("circle quadrature needs at least 4 nodes"),
            _ => return invalid(format!("associated weights are computed for orders 1 and 2, not {order}")),
        }
        Ok(AssociatedWeight { weight, order, nodes })
    }

    /// The sphere integral at radius `ρ`.
    pub fn eval_radius(&self, slice: usize, rho: f64) -> f64 {
        if self.order == 1 {
            return self.weight.value(slice, &[rho]) + self.weight.value(slice, &[-rho]);
        }
        let step = 2.0 * PI / self.nodes as f64;
        let sum: f64 = (0..self.nodes)
            .map(|m| {
                let th = step * m as f64;
                self.weight.value(slice, &[rho * th.cos(), rho * th.sin()])
            })
            .sum();
        sum * step
    }

    /// `v̄(x̄, s)`.
    pub fn eval(&self, slice: usize, s: f64) -> f64 {
        self.eval_radius(slice, section_radius(self.order, s))
    }

    /// `v̄` on a table of slices and `s` values.
    pub fn tabulate(&self, slices: usize, s: &[f64]) -> Vec<Vec<f64>> {
        (0..slices).map(|i| s.iter().map(|&x| self.eval(i, x)).collect()).collect()
    }
}

/// Radius list of the ball/annulus family.
pub const FAMILY_RADII: [f64; 9] = [0.1, 0.25, 0.5, 1.0, 1.5, 2.0, 3.0, 4.0, 6.0];

/// Radius of the region where `v̄` is sampled.
pub const SAMPLE_RADIUS: f64 = 6.0;

/// Number of `s` samples in the decrease checks.
pub const DECREASE_SAMPLES: usize = 1000;

const SLOTS: usize = 6;
const SATURATION_INSTANCES: u64 = 20;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionVerdict {
    pub holds: bool,
    pub witness: Option<serde_json::Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SphericalReport {
    pub dim: usize,
    pub p: f64,
    pub seed: u64,
    /// Concavity on `A = B(0,a)`, `B = B(0,b) ∖ B(0,ε)`.
    pub concavity: ConditionVerdict,
    /// `v̄` nonincreasing on the samples.
    pub decreasing: ConditionVerdict,
    /// Sorted pairing attains the bijection supremum on shell slots.
    pub saturation: ConditionVerdict,
    /// Largest relative gap between circle quadrature and the closed form
    /// (planar weights only).
    pub quadrature_error: Option<f64>,
    pub consistent: bool,
}

/// The three spherical normability conditions for a radial weight.
pub fn spherical_normability_suite(weight: &Weight, p: f64, seed: u64) -> Result<SphericalReport> {
    let Weight::Radial { dim, profile } = weight else {
        return invalid("the spherical suite needs a radial weight");
    };
    if !(p >= 1.0 && p.is_finite()) {
        return invalid(format!("the spherical suite needs p >= 1, got {p}"));
    }
    weight.validate()?;
    let n = *dim;
    let space = MeasureSpace::Euclidean { dim: n };
    let sigma = unit_ball_volume(n);
    // weight of the centred ball of volume m
    let big_v = |m: f64| weight.integral(&space, &MeasurableSet::ball(ball_radius(n, m)));

    let mut worst: Option<(f64, serde_json::Value)> = None;
    let mut concave = true;
    for (i, &a) in FAMILY_RADII.iter().enumerate() {
        for &b in &FAMILY_RADII[i..] {
            for eps in [b / 10.0, b / 100.0] {
                if eps >= a {
                    continue;
                }
                let vol = |r: f64| sigma * r.powi(n as i32);
                let (ma, mb) = (vol(a), vol(b) - vol(eps));
                let (mu, mi) = (vol(b), vol(a) - vol(eps));
                let union = big_v(mu)?;
                let slack = big_v(ma)? + big_v(mb)? - union - big_v(mi)?;
                if slack < -1e-10 * union.max(1.0) {
                    concave = false;
                }
                if worst.as_ref().map_or(true, |w| slack < w.0) {
                    worst = Some((slack, json!({ "a": a, "b": b, "epsilon": eps, "slack": slack })));
                }
            }
        }
    }

    let s_max = sigma * SAMPLE_RADIUS.powi(n as i32);
    let bar = |s: f64| unit_sphere_area(n) * profile.value(ball_radius(n, s));
    let mut decreasing = ConditionVerdict { holds: true, witness: None };
    let mut prev = (0.0, f64::INFINITY);
    for i in 1..=DECREASE_SAMPLES {
        let s = s_max * i as f64 / DECREASE_SAMPLES as f64;
        let v = bar(s);
        if v > prev.1 * (1.0 + 1e-12) {
            decreasing = ConditionVerdict {
                holds: false,
                witness: Some(json!({ "s0": prev.0, "s1": s, "v0": prev.1, "v1": v })),
            };
            break;
        }
        prev = (s, v);
    }

    let quadrature_error = if n == 2 {
        let aw = AssociatedWeight::new(weight, 2, 64)?;
        let mut err: f64 = 0.0;
        for i in 1..=DECREASE_SAMPLES {
            let s = s_max * i as f64 / DECREASE_SAMPLES as f64;
            let exact = bar(s);
            err = err.max((aw.eval(0, s) - exact).abs() / exact.abs().max(1.0));
        }
        Some(err)
    } else {
        None
    };

    // shells of equal volume around the origin, innermost first
    let slot = s_max / SLOTS as f64;
    let mut u = Vec::with_capacity(SLOTS);
    for i in 0..SLOTS {
        u.push(big_v((i + 1) as f64 * slot)? - big_v(i as f64 * slot)?);
    }
    let mut instances: Vec<Vec<f64>> = vec![
        vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        vec![2.0, 1.0, 0.0, 0.0, 0.0, 0.0],
    ];
    for t in 0..SATURATION_INSTANCES {
        instances.push(random_integers(SLOTS, 5, &mut trial_rng(seed, t)));
    }
    let mut saturation = ConditionVerdict { holds: true, witness: None };
    for f in &instances {
        let sup = permutation_saturation_oracle(f, &u)?;
        let mut fs = f.clone();
        fs.sort_by(|a, b| b.total_cmp(a));
        let paired: f64 = fs.iter().zip(&u).map(|(a, b)| a * b).sum();
        if !close(sup.sup, paired, 1e-12) && sup.sup > paired {
            saturation = ConditionVerdict {
                holds: false,
                witness: Some(json!({ "f": f, "slots": u, "sup": sup.sup, "bijection": sup.bijection, "sorted_pairing": paired })),
            };
            break;
        }
    }

    let concavity = ConditionVerdict {
        holds: concave,
        witness: worst.map(|w| w.1),
    };
    let consistent = concavity.holds == decreasing.holds && decreasing.holds == saturation.holds;
    Ok(SphericalReport {
        dim: n,
        p,
        seed,
        concavity,
        decreasing,
        saturation,
        quadrature_error,
        consistent,
    })
}

/// `(‖f‖^p_{Λ^p_{S_k}(v)}, (1/(kσ_k)) Σ_x̄ |slab| ∫ (f_x̄)*(s)^p v̄(x̄, s) ds)`.
/// The left side integrates `v` exactly over the symmetrized level sets; the
/// right side integrates the associated weight by quadrature.
pub fn steiner_norm_identity(f: &GridFunction, weight: &Weight, p: f64, k: usize, nodes: usize) -> Result<(f64, f64)> {
    let t = SetTransformation::steiner(f.space(), k)?;
    let params = LorentzParams::new(p, weight.clone(), t)?;
    let lhs = params.norm_pow(&f.to_step()?)?;
    let g = &f.grid;
    let aw = AssociatedWeight::new(weight, k, nodes)?;
    let len = g.section_len(k);
    let cell = g.h.powi(k as i32);
    let slab = g.h.powi((g.dim() - k) as i32);
    let mut rhs = 0.0;
    for slice in 0..g.slice_count(k) {
        let mut sorted = f.values[slice * len..(slice + 1) * len].to_vec();
        sorted.sort_by(|a, b| b.total_cmp(a));
        for (i, &a) in sorted.iter().enumerate() {
            if a <= 0.0 {
                break;
            }
            let piece = adaptive_simpson(&|s| aw.eval(slice, s), i as f64 * cell, (i + 1) as f64 * cell, 1e-15);
            rhs += slab * a.powf(p) * piece;
        }
    }
    Ok((lhs, rhs / (k as f64 * unit_ball_volume(k))))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SteinerReport {
    pub seed: u64,
    pub trials: u64,
    pub concavity: ConditionVerdict,
    pub decreasing: ConditionVerdict,
    pub consistent: bool,
}

/// Concavity over `S_1` (random cell-set pairs and every per-slice count
/// triple) against the decrease of `v̄(x̄, ·)` on each slice.
pub fn steiner_normability_suite(grid: &Grid, weight: &Weight, trials: u64, seed: u64) -> Result<SteinerReport> {
    let space = MeasureSpace::Grid(grid.clone());
    let t = SetTransformation::steiner(space.clone(), 1)?;
    let codomain = t.codomain().clone();
    let params = LorentzParams::new(1.0, weight.clone(), t)?;
    let slices = grid.slice_count(1);
    let len = grid.section_len(1);
    let h = grid.h;
    let tol = |scale: f64| 1e-12 * scale.max(1.0);

    let mut concavity = ConditionVerdict { holds: true, witness: None };
    for trial in 0..trials {
        let rng = &mut trial_rng(seed, trial);
        let (a, b) = (random_set(&space, rng)?, random_set(&space, rng)?);
        let slack = concavity_slack(&params, &a, &b)?;
        if slack < -tol(params.set_weight(&space.union(&a, &b)?)?) {
            concavity = ConditionVerdict {
                holds: false,
                witness: Some(json!({ "a": a, "b": b, "slack": slack })),
            };
            break;
        }
    }
    // per-slice section weight g(m)
    let section = |slice: usize, count: usize| -> Result<f64> {
        let mut masses = vec![0.0; slices];
        masses[slice] = count as f64 * h;
        weight.integral(&codomain, &MeasurableSet::Sections(Sections { masses }))
    };
    'slices: for slice in 0..slices {
        if !concavity.holds {
            break;
        }
        let g: Vec<f64> = (0..=len).map(|c| section(slice, c)).collect::<Result<_>>()?;
        for c in 0..=len {
            for a in c..=len {
                for b in c..=len + c - a {
                    let slack = g[a] + g[b] - g[a + b - c] - g[c];
                    if slack < -tol(g[a + b - c]) {
                        concavity = ConditionVerdict {
                            holds: false,
                            witness: Some(json!({ "slice": slice, "counts": { "a": a, "b": b, "intersection": c }, "slack": slack })),
                        };
                        break 'slices;
                    }
                }
            }
        }
    }

    let aw = AssociatedWeight::new(weight, 1, 0)?;
    let s_max = len as f64 * h;
    let mut decreasing = ConditionVerdict { holds: true, witness: None };
    'outer: for slice in 0..slices {
        let mut prev = (0.0, f64::INFINITY);
        for i in 1..=DECREASE_SAMPLES {
            let s = s_max * (i as f64 - 0.5) / DECREASE_SAMPLES as f64;
            let v = aw.eval(slice, s);
            if v > prev.1 * (1.0 + 1e-12) {
                decreasing = ConditionVerdict {
                    holds: false,
                    witness: Some(json!({ "slice": slice, "s0": prev.0, "s1": s, "v0": prev.1, "v1": v })),
                };
                break 'outer;
            }
            prev = (s, v);
        }
    }
    let consistent = concavity.holds == decreasing.holds;
    Ok(SteinerReport {
        seed,
        trials,
        concavity,
        decreasing,
        consistent,
    })
}

/// Largest side accepted by [`saturation_2d_check`].
pub const SATURATION_2D_SIDE: usize = 3;

/// Distinct arrangements of a multiset given as sorted values.
fn multiset_arrangements(values: &[f64]) -> Vec<Vec<f64>> {
    let mut distinct: Vec<(f64, usize)> = Vec::new();
    for &v in values {
        match distinct.iter_mut().find(|(x, _)| *x == v) {
            Some(e) => e.1 += 1,
            None => distinct.push((v, 1)),
        }
    }
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(values.len());
    fn go(distinct: &mut [(f64, usize)], current: &mut Vec<f64>, total: usize, out: &mut Vec<Vec<f64>>) {
        if current.len() == total {
            out.push(current.clone());
            return;
        }
        for i in 0..distinct.len() {
            if distinct[i].1 > 0 {
                distinct[i].1 -= 1;
                current.push(distinct[i].0);
                go(distinct, current, total, out);
                current.pop();
                distinct[i].1 += 1;
            }
        }
    }
    go(&mut distinct, &mut current, values.len(), &mut out);
    out
}

/// `(max Σ f·h over h with h*_2 = V, Σ f*_2 · V)` where `V` has the value
/// `v[r]` on every cell of row `r` (row index is `t`).
pub fn saturation_2d_check(f: &GridFunction, v: &[f64]) -> Result<(f64, f64)> {
    let g = &f.grid;
    if g.dim() != 2 {
        return Err(Error::InvalidGrid("expected a 2D grid".into()));
    }
    let (rows, cols) = (g.shape[0], g.shape[1]);
    if rows > SATURATION_2D_SIDE || cols > SATURATION_2D_SIDE {
        return Err(Error::SizeLimit {
            what: "2D saturation grid side",
            actual: rows.max(cols),
            limit: SATURATION_2D_SIDE,
        });
    }
    if v.len() != rows {
        return invalid(format!("expected {rows} row weights, got {}", v.len()));
    }
    if v.iter().any(|x| !(*x >= 0.0 && x.is_finite())) || v.windows(2).any(|w| w[1] > w[0]) {
        return invalid("row weights must be nonnegative and nonincreasing");
    }
    let target: Vec<f64> = (0..rows * cols).map(|i| v[i / cols]).collect();
    let mut lhs = f64::NEG_INFINITY;
    for h in multiset_arrangements(&target) {
        if iterated_2d(rows, cols, &h) == target {
            lhs = lhs.max(f.values.iter().zip(&h).map(|(a, b)| a * b).sum());
        }
    }
    let fr = iterated_2d(rows, cols, &f.values);
    let rhs = fr.iter().zip(&target).map(|(a, b)| a * b).sum();
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::{Profile, SectionProfile};

    fn grid_fn(shape: Vec<usize>, h: f64, centered: bool, values: Vec<f64>) -> GridFunction {
        let g = if centered { Grid::centered(shape, h) } else { Grid::anchored(shape, h) }.unwrap();
        GridFunction::new(g, values).unwrap()
    }

    #[test]
    fn steiner_one_dimensional_example() {
        let f = grid_fn(vec![1, 5], 1.0, true, vec![0.0, 3.0, 1.0, 2.0, 0.0]);
        assert_eq!(steiner(&f, 1).unwrap().values, vec![0.0, 2.0, 3.0, 1.0, 0.0]);
    }

    #[test]
    fn steiner_fixed_point() {
        let f = grid_fn(vec![2, 4], 1.0, true, vec![0.0, 2.0, 1.0, 0.0, 1.0, 3.0, 3.0, 1.0]);
        assert_eq!(steiner(&f, 1).unwrap(), f);
    }

    #[test]
    fn steiner_rejects() {
        let f = grid_fn(vec![1, 4], 1.0, false, vec![0.0; 4]);
        assert!(matches!(steiner(&f, 1), Err(Error::InvalidGrid(_))));
        assert!(matches!(steiner(&f, 3), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn two_d_example() {
        let f = grid_fn(vec![2, 2], 1.0, false, vec![1.0, 2.0, 3.0, 4.0]);
        for route in [Route::Iterated, Route::SetTransform] {
            assert_eq!(rearrange_2d(&f, route).unwrap().values, vec![4.0, 3.0, 2.0, 1.0]);
        }
        let one = grid_fn(vec![1, 1], 0.5, true, vec![7.0]);
        let out = rearrange_2d(&one, Route::SetTransform).unwrap();
        assert_eq!(out.values, vec![7.0]);
        assert_eq!(out.grid.origin, vec![0.0, 0.0]);
    }

    #[test]
    fn spherical_profile_of_indicator() {
        // 4 unit cells of side sqrt(pi)/2 carry total mass pi
        let h = PI.sqrt() / 2.0;
        let f = grid_fn(vec![2, 2], h, true, vec![1.0; 4]);
        let prof = spherical_profile(&f).unwrap();
        assert_eq!(prof.evaluate(&[0.99, 0.0]), 1.0);
        assert_eq!(prof.evaluate(&[0.0, 1.01]), 0.0);
        let z = grid_fn(vec![2, 2], 1.0, true, vec![0.0; 4]);
        assert!(spherical_profile(&z).unwrap().profile.is_zero());
    }

    #[test]
    fn associated_weight_examples() {
        let v = |_: usize, y: &[f64]| (-y[0].abs()).exp();
        let aw = AssociatedWeight::new(&v, 1, 0).unwrap();
        // s = 2ρ for k = 1
        assert_eq!(aw.eval(0, 1.0), 2.0 * (-0.5f64).exp());
        let abs = Weight::radial(2, Profile::power(1.0));
        let aw2 = AssociatedWeight::new(&abs, 2, 16).unwrap();
        let s = 2.5;
        assert!((aw2.eval(0, s) - 2.0 * PI * (s / PI).sqrt()).abs() < 1e-9);
        let c = Weight::radial(2, Profile::constant(3.0));
        assert!((AssociatedWeight::new(&c, 2, 8).unwrap().eval(0, 1.0) - 6.0 * PI).abs() < 1e-12);
        assert!(AssociatedWeight::new(&c, 2, 3).is_err());
        assert!(AssociatedWeight::new(&c, 3, 8).is_err());
    }

    #[test]
    fn spherical_suite_examples() {
        let good = spherical_normability_suite(&Weight::radial(2, Profile::exp(1.0)), 1.0, 1).unwrap();
        assert!(good.concavity.holds && good.decreasing.holds && good.saturation.holds && good.consistent);
        let bad = spherical_normability_suite(&Weight::radial(2, Profile::power(1.0)), 1.0, 1).unwrap();
        assert!(!bad.concavity.holds && !bad.decreasing.holds && !bad.saturation.holds && bad.consistent);
        let flat = spherical_normability_suite(&Weight::radial(3, Profile::constant(2.0)), 2.0, 1).unwrap();
        assert!(flat.concavity.holds && flat.decreasing.holds && flat.saturation.holds);
    }

    #[test]
    fn steiner_identity_unit_weight() {
        let f = grid_fn(vec![2, 4], 0.5, true, vec![1.0, 0.0, 2.0, 3.0, 0.0, 0.0, 1.5, 0.5]);
        let unit = Weight::Sectional {
            sections: vec![SectionProfile::Symmetric { profile: Profile::constant(1.0) }],
        };
        let (lhs, rhs) = steiner_norm_identity(&f, &unit, 1.0, 1, 0).unwrap();
        let l1: f64 = f.values.iter().sum::<f64>() * 0.25;
        assert!((lhs - l1).abs() < 1e-12 && (rhs - l1).abs() < 1e-12);
        let z = grid_fn(vec![2, 4], 0.5, true, vec![0.0; 8]);
        assert_eq!(steiner_norm_identity(&z, &unit, 1.0, 1, 0).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn saturation_2d_examples() {
        let f = grid_fn(vec![2, 2], 1.0, false, vec![4.0, 3.0, 2.0, 1.0]);
        assert_eq!(saturation_2d_check(&f, &[1.0, 0.0]).unwrap(), (7.0, 7.0));
        let c = grid_fn(vec![2, 3], 1.0, false, vec![2.0; 6]);
        assert_eq!(saturation_2d_check(&c, &[3.0, 1.0]).unwrap(), (24.0, 24.0));
        let big = grid_fn(vec![4, 1], 1.0, false, vec![0.0; 4]);
        assert!(matches!(saturation_2d_check(&big, &[0.0; 4]), Err(Error::SizeLimit { .. })));
        assert!(saturation_2d_check(&f, &[0.0, 1.0]).is_err());
    }
}
