use serde::{Deserialize, Serialize};

use super::set::MeasurableSet;
use super::space::{section_radius, MeasureSpace};
use crate::error::{invalid, mismatch, Error, Result};
use crate::numeric::{exp_moment, unit_ball_volume};

/// A nonnegative function of one variable `t >= 0` with a closed-form
/// antiderivative.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum Profile {
    Constant { value: f64 },
    /// `coeff * t^exponent`.
    Power { coeff: f64, exponent: f64 },
    /// `coeff * e^(-rate t)`.
    Exp { coeff: f64, rate: f64 },
    /// `values[i]` on `[starts[i], starts[i+1])`; the last value extends to
    /// infinity. `starts[0]` must be zero.
    Piecewise { starts: Vec<f64>, values: Vec<f64> },
}

impl Profile {
    pub fn constant(value: f64) -> Self {
        Profile::Constant { value }
    }

    pub fn power(exponent: f64) -> Self {
        Profile::Power { coeff: 1.0, exponent }
    }

    pub fn exp(rate: f64) -> Self {
        Profile::Exp { coeff: 1.0, rate }
    }

    pub fn piecewise(starts: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        let p = Profile::Piecewise { starts, values };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Profile::Constant { value } if !(*value >= 0.0 && value.is_finite()) => {
                invalid("constant weight must be nonnegative")
            }
            Profile::Power { coeff, exponent } if !(*coeff >= 0.0 && exponent.is_finite()) => {
                invalid("power weight needs a nonnegative coefficient")
            }
            Profile::Exp { coeff, rate } if !(*coeff >= 0.0 && *rate >= 0.0) => {
                invalid("exponential weight needs nonnegative coefficient and rate")
            }
            Profile::Piecewise { starts, values } => {
                if starts.is_empty() || starts.len() != values.len() || starts[0] != 0.0 {
                    return invalid("piecewise weight needs matching starts/values beginning at 0");
                }
                if starts.windows(2).any(|w| w[1] <= w[0]) {
                    return invalid("piecewise starts must be strictly increasing");
                }
                if values.iter().any(|v| !(*v >= 0.0 && v.is_finite())) {
                    return invalid("piecewise values must be nonnegative");
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    pub fn value(&self, t: f64) -> f64 {
        match self {
            Profile::Constant { value } => *value,
            Profile::Power { coeff, exponent } => coeff * t.powf(*exponent),
            Profile::Exp { coeff, rate } => coeff * (-rate * t).exp(),
            Profile::Piecewise { starts, values } => {
                let i = starts.partition_point(|&s| s <= t);
                values[i.saturating_sub(1)]
            }
        }
    }

    /// `∫_a^b value(t) dt` for `0 <= a <= b < inf`.
    pub fn integral(&self, a: f64, b: f64) -> Result<f64> {
        if b <= a {
            return Ok(0.0);
        }
        Ok(match self {
            Profile::Constant { value } => value * (b - a),
            Profile::Power { coeff, exponent } => {
                let e = *exponent;
                if e <= -1.0 && a <= 0.0 {
                    return Err(Error::Diverged(format!("[{a}, {b}) under t^{e}")));
                }
                if e == -1.0 {
                    coeff * (b / a).ln()
                } else {
                    coeff * (b.powf(e + 1.0) - a.powf(e + 1.0)) / (e + 1.0)
                }
            }
            Profile::Exp { coeff, rate } => {
                if *rate == 0.0 {
                    coeff * (b - a)
                } else {
                    coeff * ((-rate * a).exp() - (-rate * b).exp()) / rate
                }
            }
            Profile::Piecewise { starts, values } => {
                let mut total = 0.0;
                for (i, &v) in values.iter().enumerate() {
                    let lo = starts[i].max(a);
                    let hi = starts.get(i + 1).copied().unwrap_or(f64::INFINITY).min(b);
                    if hi > lo {
                        total += v * (hi - lo);
                    }
                }
                total
            }
        })
    }

    /// `∫_{|x| < r} value(|x|) dx` over the ball of radius `r` in `R^dim`.
    pub fn radial_integral(&self, dim: usize, r: f64) -> Result<f64> {
        if r <= 0.0 {
            return Ok(0.0);
        }
        let n = dim as f64;
        let sigma = unit_ball_volume(dim);
        Ok(match self {
            Profile::Constant { value } => value * sigma * r.powf(n),
            Profile::Power { coeff, exponent } => {
                if *exponent <= -n {
                    return Err(Error::Diverged(format!("ball of radius {r} under |x|^{exponent}")));
                }
                coeff * n * sigma * r.powf(n + exponent) / (n + exponent)
            }
            Profile::Exp { coeff, rate } => {
                if *rate == 0.0 {
                    coeff * sigma * r.powf(n)
                } else {
                    coeff * n * sigma * exp_moment(dim, *rate, r)
                }
            }
            Profile::Piecewise { starts, values } => {
                let mut total = 0.0;
                for (i, &v) in values.iter().enumerate() {
                    let lo = starts[i];
                    let hi = starts.get(i + 1).copied().unwrap_or(f64::INFINITY).min(r);
                    if hi > lo {
                        total += v * sigma * (hi.powf(n) - lo.powf(n));
                    }
                }
                total
            }
        })
    }
}

/// Weight on one slab of a sectioned space, as a function of the symmetrised
/// coordinate `y ∈ R^k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum SectionProfile {
    /// `v(y) = profile(|y|)`, any order.
    Symmetric { profile: Profile },
    /// `v(y) = positive(y)` for `y >= 0` and `negative(-y)` for `y < 0`;
    /// order one only.
    TwoSided { positive: Profile, negative: Profile },
}

impl SectionProfile {
    fn validate(&self) -> Result<()> {
        match self {
            SectionProfile::Symmetric { profile } => profile.validate(),
            SectionProfile::TwoSided { positive, negative } => {
                positive.validate()?;
                negative.validate()
            }
        }
    }

    /// Weight of the centred section of measure `mass`.
    fn section_integral(&self, order: usize, mass: f64) -> Result<f64> {
        match self {
            SectionProfile::Symmetric { profile } => {
                profile.radial_integral(order, section_radius(order, mass))
            }
            SectionProfile::TwoSided { positive, negative } => {
                if order != 1 {
                    return invalid("two-sided section weights need order 1");
                }
                Ok(positive.integral(0.0, mass / 2.0)? + negative.integral(0.0, mass / 2.0)?)
            }
        }
    }

    fn value(&self, y: &[f64]) -> f64 {
        match self {
            SectionProfile::Symmetric { profile } => profile.value(norm(y)),
            SectionProfile::TwoSided { positive, negative } => {
                if y[0] >= 0.0 {
                    positive.value(y[0])
                } else {
                    negative.value(-y[0])
                }
            }
        }
    }
}

/// A weight `v >= 0` on a codomain space, integrated exactly over sets:
/// `V(E) = ∫_E v dν`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Weight {
    /// `v ≡ 1` on any space.
    Unit,
    /// `v(t) = profile(t)` on the half-line.
    HalfLine { profile: Profile },
    /// `v(x) = profile(|x|)` on `R^dim`.
    Radial { dim: usize, profile: Profile },
    /// `v(s, t) = profile(t)` on the quadrant.
    Quadrant { profile: Profile },
    /// One profile per slice of a sectioned space; a single entry applies to
    /// every slice.
    Sectional { sections: Vec<SectionProfile> },
    /// Density per atom.
    Atoms { density: Vec<f64> },
    /// Density per grid cell.
    Cells { density: Vec<f64> },
}

impl Weight {
    pub fn half_line(profile: Profile) -> Self {
        Weight::HalfLine { profile }
    }

    pub fn radial(dim: usize, profile: Profile) -> Self {
        Weight::Radial { dim, profile }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Weight::Unit => Ok(()),
            Weight::HalfLine { profile } | Weight::Quadrant { profile } => profile.validate(),
            Weight::Radial { dim, profile } => {
                if *dim == 0 {
                    return invalid("radial weight needs a positive dimension");
                }
                profile.validate()
            }
            Weight::Sectional { sections } => {
                if sections.is_empty() {
                    return invalid("sectional weight needs at least one profile");
                }
                sections.iter().try_for_each(SectionProfile::validate)
            }
            Weight::Atoms { density } | Weight::Cells { density } => {
                if density.iter().any(|v| !(*v >= 0.0 && v.is_finite())) {
                    return invalid("densities must be nonnegative and finite");
                }
                Ok(())
            }
        }
    }

    /// Checks that this weight can be integrated over sets of `space`.
    pub fn supports(&self, space: &MeasureSpace) -> Result<()> {
        self.validate()?;
        let ok = match (self, space) {
            (Weight::Unit, _) => true,
            (Weight::HalfLine { .. }, MeasureSpace::HalfLine) => true,
            (Weight::Radial { dim, .. }, MeasureSpace::Euclidean { dim: d }) => dim == d,
            (Weight::Quadrant { .. }, MeasureSpace::Quadrant) => true,
            (Weight::Sectional { sections }, MeasureSpace::Sectioned(l)) => {
                (sections.len() == 1 || sections.len() == l.slices)
                    && (l.order == 1
                        || sections
                            .iter()
                            .all(|s| matches!(s, SectionProfile::Symmetric { .. })))
            }
            (Weight::Atoms { density }, MeasureSpace::Atoms { masses }) => density.len() == masses.len(),
            (Weight::Cells { density }, MeasureSpace::Grid(g)) => density.len() == g.cell_count(),
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            mismatch(format!("weight does not live on a {} space", space.kind_name()))
        }
    }

    /// `V(E)`.
    pub fn integral(&self, space: &MeasureSpace, set: &MeasurableSet) -> Result<f64> {
        self.supports(space)?;
        space.check_set(set)?;
        let v = match (self, space, set) {
            (Weight::Unit, _, _) => space.measure(set)?,
            (Weight::HalfLine { profile }, _, MeasurableSet::Intervals(u)) => {
                let mut total = 0.0;
                for &[a, b] in u.pieces() {
                    total += profile.integral(a, b).map_err(|_| diverged(set))?;
                }
                total
            }
            (Weight::Radial { dim, profile }, _, MeasurableSet::Ball(b)) => {
                profile.radial_integral(*dim, b.radius).map_err(|_| diverged(set))?
            }
            (Weight::Quadrant { profile }, _, MeasurableSet::Hypograph(h)) => {
                let mut total = 0.0;
                for [a, b, height] in h.pieces() {
                    total += (b - a) * profile.integral(0.0, height).map_err(|_| diverged(set))?;
                }
                total
            }
            (Weight::Sectional { sections }, MeasureSpace::Sectioned(l), MeasurableSet::Sections(s)) => {
                let mut total = 0.0;
                for (i, &m) in s.masses.iter().enumerate() {
                    let prof = if sections.len() == 1 { &sections[0] } else { &sections[i] };
                    total += l.slab_volume * prof.section_integral(l.order, m).map_err(|_| diverged(set))?;
                }
                total
            }
            (Weight::Atoms { density }, MeasureSpace::Atoms { masses }, MeasurableSet::Atoms(s)) => {
                s.members().map(|i| density[i] * masses[i]).sum()
            }
            (Weight::Cells { density }, MeasureSpace::Grid(g), MeasurableSet::Cells(s)) => {
                s.members().map(|i| density[i]).sum::<f64>() * g.cell_mass()
            }
            _ => return mismatch("weight and set do not match"),
        };
        if !v.is_finite() {
            return Err(diverged(set));
        }
        Ok(v)
    }

    /// Profile of a radial weight.
    pub fn radial_profile(&self) -> Option<&Profile> {
        match self {
            Weight::Radial { profile, .. } => Some(profile),
            _ => None,
        }
    }
}

fn diverged(set: &MeasurableSet) -> Error {
    Error::Diverged(serde_json::to_string(set).unwrap_or_else(|_| format!("{set:?}")))
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// A weight that can be evaluated pointwise on a slab `{xbar} x R^k`.
/// Spaces without slices use slice 0.
pub trait PointWeight {
    fn value(&self, slice: usize, y: &[f64]) -> f64;
}

impl<F: Fn(usize, &[f64]) -> f64> PointWeight for F {
    fn value(&self, slice: usize, y: &[f64]) -> f64 {
        self(slice, y)
    }
}

impl PointWeight for Weight {
    /// Panics for weights without a coordinate form (atom and cell densities).
    fn value(&self, slice: usize, y: &[f64]) -> f64 {
        match self {
            Weight::Unit => 1.0,
            Weight::HalfLine { profile } => profile.value(y[0]),
            Weight::Radial { profile, .. } => profile.value(norm(y)),
            Weight::Quadrant { profile } => profile.value(y[1]),
            Weight::Sectional { sections } => {
                let prof = if sections.len() == 1 { &sections[0] } else { &sections[slice] };
                prof.value(y)
            }
            Weight::Atoms { .. } | Weight::Cells { .. } => {
                panic!("atom and cell densities have no coordinate form")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::set::{Hypograph, Sections};
    use crate::measure::space::SectionLayout;
    use std::f64::consts::PI;

    #[test]
    fn half_line_examples() {
        let hl = MeasureSpace::HalfLine;
        let s = MeasurableSet::interval(0.0, 4.0);
        assert_eq!(Weight::half_line(Profile::constant(1.0)).integral(&hl, &s).unwrap(), 4.0);
        let inv_sqrt = Weight::half_line(Profile::power(-0.5));
        let v = inv_sqrt.integral(&hl, &MeasurableSet::interval(0.0, 1.0)).unwrap();
        assert!((v - 2.0).abs() < 1e-15);
        let pc = Weight::half_line(Profile::piecewise(vec![0.0, 1.0], vec![1.0, 3.0]).unwrap());
        assert_eq!(pc.integral(&hl, &MeasurableSet::interval(0.0, 2.0)).unwrap(), 4.0);
    }

    #[test]
    fn divergence_is_reported() {
        let hl = MeasureSpace::HalfLine;
        let w = Weight::half_line(Profile::power(-1.0));
        let err = w.integral(&hl, &MeasurableSet::interval(0.0, 1.0)).unwrap_err();
        assert!(matches!(err, Error::Diverged(_)));
        assert!(w.integral(&hl, &MeasurableSet::interval(1.0, 2.0)).is_ok());
    }

    #[test]
    fn unit_weight_is_the_measure() {
        let sp = MeasureSpace::atoms(vec![0.5, 2.0]).unwrap();
        let s = sp.full_set().unwrap();
        assert_eq!(Weight::Unit.integral(&sp, &s).unwrap(), 2.5);
    }

    #[test]
    fn radial_closed_forms() {
        let e = MeasureSpace::Euclidean { dim: 2 };
        let ball = MeasurableSet::ball(1.5);
        let r: f64 = 1.5;
        let abs = Weight::radial(2, Profile::power(1.0));
        assert!((abs.integral(&e, &ball).unwrap() - 2.0 * PI * r.powi(3) / 3.0).abs() < 1e-12);
        let ex = Weight::radial(2, Profile::exp(1.0));
        let closed = 2.0 * PI * (1.0 - (-r).exp() * (1.0 + r));
        assert!((ex.integral(&e, &ball).unwrap() - closed).abs() < 1e-12);
        let pc = Weight::radial(2, Profile::piecewise(vec![0.0, 1.0], vec![2.0, 1.0]).unwrap());
        let want = 2.0 * PI + PI * (r * r - 1.0);
        assert!((pc.integral(&e, &ball).unwrap() - want).abs() < 1e-12);
    }

    #[test]
    fn quadrant_weight_depends_on_height_only() {
        let q = MeasureSpace::Quadrant;
        let h = MeasurableSet::Hypograph(Hypograph::new(vec![[2.0, 3.0], [3.0, 1.0]]).unwrap());
        let w = Weight::Quadrant { profile: Profile::power(1.0) };
        assert!((w.integral(&q, &h).unwrap() - (2.0 * 4.5 + 0.5)).abs() < 1e-12);
    }

    #[test]
    fn sectional_two_sided() {
        let l = SectionLayout { dim: 2, order: 1, slices: 1, slab_volume: 0.5 };
        let sp = MeasureSpace::Sectioned(l);
        let w = Weight::Sectional {
            sections: vec![SectionProfile::TwoSided {
                positive: Profile::constant(1.0),
                negative: Profile::constant(3.0),
            }],
        };
        let s = MeasurableSet::Sections(Sections { masses: vec![2.0] });
        // half-width 1 on each side
        assert_eq!(w.integral(&sp, &s).unwrap(), 0.5 * 4.0);
        assert_eq!(w.value(0, &[-0.2]), 3.0);
    }

    #[test]
    fn weight_json_shape() {
        let w: Weight = serde_json::from_str(
            r#"{"kind":"half_line","profile":{"form":"power","coeff":1,"exponent":-0.5}}"#,
        )
        .unwrap();
        assert_eq!(w, Weight::half_line(Profile::power(-0.5)));
    }
}
