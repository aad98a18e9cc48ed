use serde::{Deserialize, Serialize};

use super::set::{IndexSet, IntervalUnion, MeasurableSet};
use super::space::{MeasureSpace, Point};
use crate::error::{invalid, unsupported, Result};

/// A nonnegative simple function in canonical form: strictly decreasing
/// positive values `a_1 > ... > a_N` and strictly nested level sets
/// `F_1 ⊂ ... ⊂ F_N` with `F_j = { f >= a_j }`, so `f > λ` on exactly `F_j`
/// for `λ ∈ [a_{j+1}, a_j)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "StepRepr", into = "StepRepr")]
pub struct StepFunction {
    space: MeasureSpace,
    values: Vec<f64>,
    levels: Vec<MeasurableSet>,
}

#[derive(Serialize, Deserialize)]
struct StepRepr {
    space: MeasureSpace,
    values: Vec<f64>,
    levels: Vec<MeasurableSet>,
}

impl TryFrom<StepRepr> for StepFunction {
    type Error = String;

    fn try_from(r: StepRepr) -> std::result::Result<Self, Self::Error> {
        StepFunction::new(r.space, r.values, r.levels).map_err(|e| e.to_string())
    }
}

impl From<StepFunction> for StepRepr {
    fn from(f: StepFunction) -> Self {
        StepRepr {
            space: f.space,
            values: f.values,
            levels: f.levels,
        }
    }
}

impl StepFunction {
    /// Validates an already-canonical representation.
    pub fn new(space: MeasureSpace, values: Vec<f64>, levels: Vec<MeasurableSet>) -> Result<Self> {
        space.validate()?;
        if values.len() != levels.len() {
            return invalid("values and levels differ in length");
        }
        for (i, &a) in values.iter().enumerate() {
            if !(a > 0.0 && a.is_finite()) {
                return invalid(format!("value {a} is not positive and finite"));
            }
            if i > 0 && a >= values[i - 1] {
                return invalid("values must be strictly decreasing");
            }
        }
        let mut prev_measure = 0.0;
        for (j, level) in levels.iter().enumerate() {
            let m = space.measure(level)?;
            if m <= prev_measure {
                return invalid("level measures must be strictly increasing");
            }
            if j > 0 && !space.is_subset(&levels[j - 1], level)? {
                return invalid("levels must be nested");
            }
            prev_measure = m;
        }
        Ok(StepFunction { space, values, levels })
    }

    pub fn zero(space: MeasureSpace) -> Self {
        StepFunction {
            space,
            values: Vec::new(),
            levels: Vec::new(),
        }
    }

    /// `c χ_A`.
    pub fn indicator(space: MeasureSpace, set: MeasurableSet, c: f64) -> Result<Self> {
        canonical_step(&space, &[(c, set)])
    }

    /// Function with the given value on each atom or cell.
    pub fn from_index_values(space: MeasureSpace, vals: &[f64]) -> Result<Self> {
        let n = match space.index_count() {
            Some(n) => n,
            None => return unsupported(format!("{} space has no atoms or cells", space.kind_name())),
        };
        if vals.len() != n {
            return invalid(format!("expected {n} values, got {}", vals.len()));
        }
        if let Some(v) = vals.iter().find(|v| !(**v >= 0.0 && v.is_finite())) {
            return invalid(format!("value {v} is negative or not finite"));
        }
        let mut distinct: Vec<f64> = vals.iter().copied().filter(|&v| v > 0.0).collect();
        distinct.sort_by(|a, b| b.total_cmp(a));
        distinct.dedup();
        let mut levels = Vec::with_capacity(distinct.len());
        for &a in &distinct {
            let bits = vals.iter().map(|&v| v >= a).collect();
            levels.push(space.index_set(IndexSet::from_bits(bits))?);
        }
        Ok(StepFunction {
            space,
            values: distinct,
            levels,
        })
    }

    pub fn space(&self) -> &MeasureSpace {
        &self.space
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn levels(&self) -> &[MeasurableSet] {
        &self.levels
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    /// `b_j = a_j - a_{j+1}` with `a_{N+1} = 0`.
    pub fn increments(&self) -> Vec<f64> {
        increments(&self.values)
    }

    /// The increasing-set decomposition `f = Σ b_j χ_{F_j}`.
    pub fn layers(&self) -> impl Iterator<Item = (f64, &MeasurableSet)> {
        self.increments().into_iter().zip(self.levels.iter())
    }

    pub fn value_at(&self, p: &Point) -> Result<f64> {
        for (a, level) in self.values.iter().zip(&self.levels) {
            if self.space.contains(level, p)? {
                return Ok(*a);
            }
        }
        Ok(0.0)
    }

    /// Value on every atom or cell.
    pub fn index_values(&self) -> Result<Vec<f64>> {
        let n = match self.space.index_count() {
            Some(n) => n,
            None => return unsupported("index values need a discrete space or grid"),
        };
        let mut out = vec![0.0; n];
        for (a, level) in self.values.iter().zip(&self.levels).rev() {
            for i in level.as_index_set().expect("index space").members() {
                out[i] = *a;
            }
        }
        Ok(out)
    }

    /// `|f|^p`, same level sets.
    pub fn powf(&self, p: f64) -> Result<Self> {
        if !(p > 0.0 && p.is_finite()) {
            return invalid(format!("exponent {p} must be positive"));
        }
        Ok(StepFunction {
            space: self.space.clone(),
            values: self.values.iter().map(|a| a.powf(p)).collect(),
            levels: self.levels.clone(),
        })
    }

    pub fn scale(&self, c: f64) -> Result<Self> {
        if !(c >= 0.0 && c.is_finite()) {
            return invalid(format!("scale {c} must be nonnegative"));
        }
        if c == 0.0 {
            return Ok(Self::zero(self.space.clone()));
        }
        Ok(StepFunction {
            space: self.space.clone(),
            values: self.values.iter().map(|a| a * c).collect(),
            levels: self.levels.clone(),
        })
    }

    /// Pointwise sum.
    pub fn add(&self, other: &Self) -> Result<Self> {
        let pairs: Vec<(f64, MeasurableSet)> = self
            .layers()
            .chain(other.layers())
            .map(|(b, s)| (b, s.clone()))
            .collect();
        if self.space != other.space {
            return crate::error::mismatch("summands live on different spaces");
        }
        canonical_step(&self.space, &pairs)
    }

    /// `∫ f^p dμ`, summed over the level differences `F_j \ F_{j-1}`.
    pub fn integral_of_power(&self, p: f64) -> Result<f64> {
        let mut prev = 0.0;
        let mut total = 0.0;
        for (a, level) in self.values.iter().zip(&self.levels) {
            let m = self.space.measure(level)?;
            total += a.powf(p) * (m - prev);
            prev = m;
        }
        Ok(total)
    }

    /// `‖f‖_{L^p(μ)}`.
    pub fn lp_norm(&self, p: f64) -> Result<f64> {
        Ok(self.integral_of_power(p)?.powf(1.0 / p))
    }

    /// Measure of the support `F_N`.
    pub fn support_measure(&self) -> Result<f64> {
        match self.levels.last() {
            Some(l) => self.space.measure(l),
            None => Ok(0.0),
        }
    }
}

pub(crate) fn increments(values: &[f64]) -> Vec<f64> {
    (0..values.len())
        .map(|j| values[j] - values.get(j + 1).copied().unwrap_or(0.0))
        .collect()
}

/// Canonical form of `Σ c_i χ_{S_i}`. Pairs may overlap and repeat values;
/// zero values are ignored.
pub fn canonical_step(space: &MeasureSpace, pairs: &[(f64, MeasurableSet)]) -> Result<StepFunction> {
    space.validate()?;
    for (c, s) in pairs {
        if !(c.is_finite() && *c >= 0.0) {
            return invalid(format!("layer value {c} is negative or not finite"));
        }
        space.check_set(s)?;
    }
    let pairs: Vec<&(f64, MeasurableSet)> = pairs.iter().filter(|(c, _)| *c > 0.0).collect();
    match space {
        MeasureSpace::Atoms { .. } | MeasureSpace::Grid(_) => {
            let mut vals = vec![0.0; space.index_count().unwrap()];
            for (c, s) in pairs {
                for i in s.as_index_set().expect("checked").members() {
                    vals[i] += c;
                }
            }
            StepFunction::from_index_values(space.clone(), &vals)
        }
        MeasureSpace::HalfLine => {
            let mut marks: Vec<f64> = pairs
                .iter()
                .flat_map(|(_, s)| match s {
                    MeasurableSet::Intervals(u) => u.endpoints().collect::<Vec<_>>(),
                    _ => unreachable!(),
                })
                .collect();
            marks.sort_by(f64::total_cmp);
            marks.dedup();
            let pieces: Vec<(f64, f64, f64)> = marks
                .windows(2)
                .map(|w| {
                    let mid = 0.5 * (w[0] + w[1]);
                    let v = pairs
                        .iter()
                        .filter(|(_, s)| matches!(s, MeasurableSet::Intervals(u) if u.contains(mid)))
                        .map(|(c, _)| c)
                        .sum();
                    (w[0], w[1], v)
                })
                .collect();
            let mut distinct: Vec<f64> = pieces.iter().map(|p| p.2).filter(|&v| v > 0.0).collect();
            distinct.sort_by(|a, b| b.total_cmp(a));
            distinct.dedup();
            let levels = distinct
                .iter()
                .map(|&a| {
                    let raw = pieces.iter().filter(|p| p.2 >= a).map(|p| [p.0, p.1]).collect();
                    IntervalUnion::new(raw).map(MeasurableSet::Intervals)
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(StepFunction {
                space: space.clone(),
                values: distinct,
                levels,
            })
        }
        MeasureSpace::Euclidean { .. } => {
            let mut radii: Vec<f64> = pairs
                .iter()
                .filter_map(|(_, s)| match s {
                    MeasurableSet::Ball(b) if b.radius > 0.0 => Some(b.radius),
                    _ => None,
                })
                .collect();
            radii.sort_by(f64::total_cmp);
            radii.dedup();
            // every distinct radius carries a positive layer, so the shell
            // values strictly increase towards the centre
            let mut values = Vec::with_capacity(radii.len());
            let mut levels = Vec::with_capacity(radii.len());
            for &r in &radii {
                let v: f64 = pairs
                    .iter()
                    .filter(|(_, s)| matches!(s, MeasurableSet::Ball(b) if b.radius >= r))
                    .map(|(c, _)| c)
                    .sum();
                values.push(v);
                levels.push(MeasurableSet::ball(r));
            }
            Ok(StepFunction {
                space: space.clone(),
                values,
                levels,
            })
        }
        _ => unsupported(format!(
            "step functions over a {} space are not supported",
            space.kind_name()
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn atoms(masses: &[f64]) -> MeasureSpace {
        MeasureSpace::atoms(masses.to_vec()).unwrap()
    }

    fn aset(n: usize, m: &[usize]) -> MeasurableSet {
        MeasurableSet::Atoms(IndexSet::from_members(n, m.iter().copied()).unwrap())
    }

    #[test]
    fn single_layer() {
        let sp = atoms(&[1.0, 1.0, 1.0]);
        let a = aset(3, &[0, 2]);
        let f = canonical_step(&sp, &[(3.0, a.clone())]).unwrap();
        assert_eq!(f.values(), &[3.0]);
        assert_eq!(f.levels(), &[a]);
        assert_eq!(sp.measure(&f.levels()[0]).unwrap(), 2.0);
    }

    #[test]
    fn stacked_layers_sum() {
        let sp = atoms(&[1.0; 4]);
        let f1 = aset(4, &[0]);
        let f2 = aset(4, &[0, 1, 2]);
        let f = canonical_step(&sp, &[(1.0, f1.clone()), (1.0, f2.clone())]).unwrap();
        assert_eq!(f.values(), &[2.0, 1.0]);
        assert_eq!(f.levels(), &[f1, f2]);
    }

    #[test]
    fn disjoint_layers_nest() {
        let sp = atoms(&[1.0; 4]);
        let e1 = aset(4, &[0, 1]);
        let e2 = aset(4, &[3]);
        let f = canonical_step(&sp, &[(2.0, e1.clone()), (1.0, e2)]).unwrap();
        assert_eq!(f.values(), &[2.0, 1.0]);
        assert_eq!(f.levels(), &[e1, aset(4, &[0, 1, 3])]);
    }

    #[test]
    fn negative_and_foreign_layers_rejected() {
        let sp = atoms(&[1.0; 2]);
        assert!(canonical_step(&sp, &[(-1.0, aset(2, &[0]))]).is_err());
        let err = canonical_step(&sp, &[(1.0, aset(3, &[0]))]).unwrap_err();
        assert!(matches!(err, crate::Error::SpaceMismatch(_)));
    }

    #[test]
    fn half_line_layers() {
        let sp = MeasureSpace::HalfLine;
        let f = canonical_step(
            &sp,
            &[
                (1.0, MeasurableSet::interval(0.0, 4.0)),
                (2.0, MeasurableSet::interval(1.0, 2.0)),
            ],
        )
        .unwrap();
        assert_eq!(f.values(), &[3.0, 1.0]);
        assert_eq!(f.levels()[0], MeasurableSet::interval(1.0, 2.0));
        assert_eq!(f.levels()[1], MeasurableSet::interval(0.0, 4.0));
        assert_eq!(f.value_at(&Point::real(1.5)).unwrap(), 3.0);
        assert_eq!(f.value_at(&Point::real(3.0)).unwrap(), 1.0);
        assert_eq!(f.value_at(&Point::real(4.0)).unwrap(), 0.0);
    }

    #[test]
    fn ball_layers() {
        let sp = MeasureSpace::Euclidean { dim: 2 };
        let f = canonical_step(
            &sp,
            &[
                (1.0, MeasurableSet::ball(2.0)),
                (1.0, MeasurableSet::ball(1.0)),
                (0.5, MeasurableSet::ball(2.0)),
            ],
        )
        .unwrap();
        assert_eq!(f.values(), &[2.5, 1.5]);
        assert_eq!(f.levels(), &[MeasurableSet::ball(1.0), MeasurableSet::ball(2.0)]);
    }

    #[test]
    fn canonicalization_is_idempotent() {
        let sp = atoms(&[0.5, 1.0, 2.0, 1.0]);
        let f = StepFunction::from_index_values(sp.clone(), &[3.0, 0.0, 3.0, 1.5]).unwrap();
        let pairs: Vec<_> = f.layers().map(|(b, s)| (b, s.clone())).collect();
        let g = canonical_step(&sp, &pairs).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn validation_of_raw_representations() {
        let sp = atoms(&[1.0; 3]);
        assert!(StepFunction::new(sp.clone(), vec![1.0, 2.0], vec![aset(3, &[0]), aset(3, &[0, 1])]).is_err());
        assert!(StepFunction::new(sp.clone(), vec![2.0, 1.0], vec![aset(3, &[0]), aset(3, &[1])]).is_err());
        assert!(StepFunction::new(sp.clone(), vec![2.0, 1.0], vec![aset(3, &[0]), aset(3, &[0])]).is_err());
        assert!(StepFunction::new(sp, vec![2.0, 1.0], vec![aset(3, &[0]), aset(3, &[0, 2])]).is_ok());
    }

    #[test]
    fn lp_norm_by_level_differences() {
        let sp = atoms(&[1.0, 2.0, 1.0]);
        let f = StepFunction::from_index_values(sp, &[5.0, 2.0, 2.0]).unwrap();
        assert_eq!(f.integral_of_power(1.0).unwrap(), 5.0 + 4.0 + 2.0);
        assert!((f.lp_norm(2.0).unwrap() - (25.0f64 + 8.0 + 4.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn json_rejects_non_canonical_input() {
        let json = r#"{"space":{"kind":"atoms","masses":[1,1]},"values":[1,2],
            "levels":[{"type":"atoms","size":2,"members":[0]},{"type":"atoms","size":2,"members":[0,1]}]}"#;
        assert!(serde_json::from_str::<StepFunction>(json).is_err());
    }
}
