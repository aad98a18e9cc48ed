//! Layer-cake rearrangement `f*_R = Σ b_j χ_{R(F_j)}` and the pairings built
//! on it.

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, mismatch, Error, Result};
use crate::measure::{increments, MeasurableSet, MeasureSpace, Point, StepFunction};
use crate::transform::SetTransformation;

/// `f*_R` stored as values and the images `R(F_j)` of the level sets. The
/// levels are nested only when `R` is monotone.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RearrangedFunction {
    pub transform: String,
    pub space: MeasureSpace,
    pub values: Vec<f64>,
    pub levels: Vec<MeasurableSet>,
    pub source: StepFunction,
}

pub fn rearrange(r: &SetTransformation, f: &StepFunction) -> Result<RearrangedFunction> {
    if f.space() != r.domain() {
        return mismatch(format!("function does not live on the domain of {}", r.name()));
    }
    let levels = f.levels().iter().map(|l| r.apply(l)).collect::<Result<Vec<_>>>()?;
    Ok(RearrangedFunction {
        transform: r.name().to_string(),
        space: r.codomain().clone(),
        values: f.values().to_vec(),
        levels,
        source: f.clone(),
    })
}

impl RearrangedFunction {
    pub fn increments(&self) -> Vec<f64> {
        increments(&self.values)
    }

    /// `Σ b_j χ_{R(F_j)}(y)`. When the levels containing `y` are exactly
    /// `R(F_i), ..., R(F_N)` the telescoped sum `a_i` is returned, so nested
    /// data evaluates without rounding.
    pub fn evaluate(&self, y: &Point) -> Result<f64> {
        let mut inside = Vec::with_capacity(self.levels.len());
        for level in &self.levels {
            inside.push(self.space.contains(level, y)?);
        }
        let first = inside.iter().position(|&b| b);
        match first {
            None => Ok(0.0),
            Some(i) if inside[i..].iter().all(|&b| b) => Ok(self.values[i]),
            Some(_) => Ok(self
                .increments()
                .iter()
                .zip(&inside)
                .filter(|(_, &b)| b)
                .map(|(b, _)| b)
                .sum()),
        }
    }

    pub fn is_nested(&self) -> Result<bool> {
        for w in self.levels.windows(2) {
            if !self.space.is_subset(&w[0], &w[1])? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Points that determine the function completely.
    pub fn sample_points(&self) -> Vec<Point> {
        let refs: Vec<&MeasurableSet> = self.levels.iter().collect();
        self.space.sample_points(&refs)
    }

    /// Canonical step function on the codomain; needs nested levels. Levels
    /// adding no measure are dropped (they differ from their predecessor by a
    /// null set).
    pub fn to_step(&self) -> Result<StepFunction> {
        if !self.is_nested()? {
            return Err(Error::PreconditionViolation(format!(
                "{} produced non-nested levels",
                self.transform
            )));
        }
        let mut values = Vec::new();
        let mut levels: Vec<MeasurableSet> = Vec::new();
        let mut prev = 0.0;
        for (a, level) in self.values.iter().zip(&self.levels) {
            let m = self.space.measure(level)?;
            if m > prev {
                values.push(*a);
                levels.push(level.clone());
                prev = m;
            }
        }
        StepFunction::new(self.space.clone(), values, levels)
    }

    /// `(t, value)` rows of a half-line profile: each piece's left end and
    /// value, then `(end, 0)`.
    pub fn profile_rows(&self) -> Result<Vec<(f64, f64)>> {
        if self.space != MeasureSpace::HalfLine {
            return invalid("profiles are written for half-line codomains");
        }
        let mut marks: Vec<f64> = self
            .levels
            .iter()
            .flat_map(|l| match l {
                MeasurableSet::Intervals(u) => u.endpoints().collect::<Vec<_>>(),
                _ => Vec::new(),
            })
            .collect();
        marks.push(0.0);
        marks.sort_by(f64::total_cmp);
        marks.dedup();
        let mut rows: Vec<(f64, f64)> = Vec::new();
        for &t in &marks {
            let v = self.evaluate(&Point::real(t))?;
            if rows.last().map_or(true, |r| r.1 != v) {
                rows.push((t, v));
            }
        }
        Ok(rows)
    }
}

/// `{ f > t }` as one of the level sets (or the empty set).
pub fn superlevel(f: &StepFunction, t: f64) -> MeasurableSet {
    match f.values().iter().rposition(|&a| a > t) {
        Some(j) => f.levels()[j].clone(),
        None => f.space().empty_set(),
    }
}

/// Breakpoint values `t` of `f` together with the midpoints between them and
/// one value above the maximum.
pub fn threshold_samples(f: &StepFunction) -> Vec<f64> {
    let mut marks: Vec<f64> = f.values().to_vec();
    marks.push(0.0);
    marks.sort_by(f64::total_cmp);
    marks.dedup();
    let mut out = Vec::new();
    for w in marks.windows(2) {
        out.push(w[0]);
        out.push(0.5 * (w[0] + w[1]));
    }
    let top = *marks.last().unwrap();
    out.push(top);
    out.push(top + 1.0);
    out
}

/// Pointwise check of `{f*_R > t} ⊆ R({f > t}) ⊆ {f*_R >= t}` at every
/// threshold sample and every point that resolves the data. Returns the first
/// failing `(t, point)`.
pub fn sandwich_violation(r: &SetTransformation, f: &StepFunction) -> Result<Option<(f64, Point)>> {
    let fr = rearrange(r, f)?;
    let points = fr.sample_points();
    for t in threshold_samples(f) {
        let image = r.apply(&superlevel(f, t))?;
        for y in &points {
            let v = fr.evaluate(y)?;
            let inside = r.codomain().contains(&image, y)?;
            if (v > t && !inside) || (inside && v < t) {
                return Ok(Some((t, y.clone())));
            }
        }
    }
    Ok(None)
}

/// `(∫_X f g dμ, ∫_Y f*_R g*_R dν)` as double sums over level intersections.
pub fn hl_pairing(r: &SetTransformation, f: &StepFunction, g: &StepFunction) -> Result<(f64, f64)> {
    let flags = r.flags();
    if !(flags.monotone && flags.fatou) {
        return Err(Error::PreconditionViolation(format!(
            "{} is not monotone with the Fatou property",
            r.name()
        )));
    }
    if f.space() != r.domain() || g.space() != r.domain() {
        return mismatch("functions do not live on the domain");
    }
    let (x, y) = (r.domain(), r.codomain());
    let fi: Vec<_> = f.layers().map(|(b, s)| Ok((b, s, r.apply(s)?))).collect::<Result<_>>()?;
    let gi: Vec<_> = g.layers().map(|(b, s)| Ok((b, s, r.apply(s)?))).collect::<Result<_>>()?;
    let mut lhs = 0.0;
    let mut rhs = 0.0;
    for (b, fs, rfs) in &fi {
        for (c, gs, rgs) in &gi {
            lhs += b * c * x.measure(&x.intersection(fs, gs)?)?;
            rhs += b * c * y.measure(&y.intersection(rfs, rgs)?)?;
        }
    }
    Ok((lhs, rhs))
}

/// Largest number of points for the factorial brute force.
pub const PERMUTATION_LIMIT: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SaturationWitness {
    pub sup: f64,
    /// `bijection[i]` is the slot paired with point `i`.
    pub bijection: Vec<usize>,
}

/// `sup_σ Σ f_i u_{σ(i)}` over all bijections, by enumeration.
pub fn permutation_saturation_oracle(f: &[f64], u: &[f64]) -> Result<SaturationWitness> {
    if f.len() != u.len() {
        return invalid(format!("{} values against {} slots", f.len(), u.len()));
    }
    if f.len() > PERMUTATION_LIMIT {
        return Err(Error::SizeLimit {
            what: "permutation oracle points",
            actual: f.len(),
            limit: PERMUTATION_LIMIT,
        });
    }
    let mut best = SaturationWitness {
        sup: f64::NEG_INFINITY,
        bijection: Vec::new(),
    };
    for perm in (0..f.len()).permutations(f.len()) {
        let s: f64 = perm.iter().enumerate().map(|(i, &j)| f[i] * u[j]).sum();
        if s > best.sup {
            best = SaturationWitness { sup: s, bijection: perm };
        }
    }
    if f.is_empty() {
        best.sup = 0.0;
    }
    Ok(best)
}

/// `Σ f*_i u*_i`: both sequences sorted decreasingly and paired.
pub fn sorted_pairing(f: &[f64], u: &[f64]) -> f64 {
    let desc = |v: &[f64]| {
        let mut s = v.to_vec();
        s.sort_by(|a, b| b.total_cmp(a));
        s
    };
    desc(f).iter().zip(desc(u)).map(|(a, b)| a * b).sum()
}
