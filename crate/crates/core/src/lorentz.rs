//! Weighted Lorentz functionals `‖f‖ = (∫ (f*_R)^p v dν)^(1/p)` and the
//! conditions that decide when they are (quasi-)norms.

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{invalid, mismatch, Error, Result};
use crate::measure::{canonical_step, IntervalUnion, MeasurableSet, MeasureSpace, StepFunction, Weight};
use crate::rearrange::sorted_pairing;
use crate::transform::SetTransformation;
use crate::witness::{random_set, random_step, trial_rng};

/// Random sets used to test non-cancellation, on top of all singletons.
const CANCELLATION_WITNESSES: u64 = 32;

/// Ratio above which the triangle inequality counts as violated.
pub const TRIANGLE_TOLERANCE: f64 = 1e-10;

/// Perturbations used in the structured triangle family.
pub const STRUCTURED_DELTAS: [f64; 3] = [1.0, 0.1, 0.01];

#[derive(Debug, Clone)]
pub struct LorentzParams {
    p: f64,
    weight: Weight,
    transform: SetTransformation,
}

impl LorentzParams {
    /// Validates `p > 0`, that `weight` lives on the codomain, and that
    /// `μ(A) > 0 ⇒ V(R(A)) > 0` on singletons and seeded random sets.
    pub fn new(p: f64, weight: Weight, transform: SetTransformation) -> Result<Self> {
        if !(p > 0.0 && p.is_finite()) {
            return invalid(format!("exponent {p} must be positive"));
        }
        weight.supports(transform.codomain())?;
        let params = LorentzParams { p, weight, transform };
        params.check_non_cancellation()?;
        Ok(params)
    }

    fn check_non_cancellation(&self) -> Result<()> {
        let x = self.transform.domain();
        let mut witnesses = Vec::new();
        if let Some(n) = x.index_count() {
            for i in 0..n {
                let bits = (0..n).map(|j| j == i).collect();
                witnesses.push(x.index_set(crate::measure::IndexSet::from_bits(bits))?);
            }
        }
        for t in 0..CANCELLATION_WITNESSES {
            if let Ok(s) = random_set(x, &mut trial_rng(0, t)) {
                witnesses.push(s);
            }
        }
        for a in witnesses {
            if x.measure(&a)? <= 0.0 {
                continue;
            }
            match self.set_weight(&a) {
                Ok(v) if v <= 0.0 => {
                    let set = serde_json::to_string(&a).unwrap_or_default();
                    return Err(Error::NonCancellation(format!("V(R(A)) = 0 for A = {set}")));
                }
                Ok(_) | Err(Error::Diverged(_)) => {}
                Err(e) => return Err(e),
            }
        }
        Ok(())
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn weight(&self) -> &Weight {
        &self.weight
    }

    pub fn transform(&self) -> &SetTransformation {
        &self.transform
    }

    /// `V(R(A))`.
    pub fn set_weight(&self, a: &MeasurableSet) -> Result<f64> {
        self.weight.integral(self.transform.codomain(), &self.transform.apply(a)?)
    }

    /// `‖f‖^p = Σ_j (a_j^p - a_{j+1}^p) V(R(F_j))`.
    pub fn norm_pow(&self, f: &StepFunction) -> Result<f64> {
        if f.space() != self.transform.domain() {
            return mismatch("function does not live on the domain of the transformation");
        }
        let a = f.values();
        let mut total = 0.0;
        for (j, level) in f.levels().iter().enumerate() {
            let next = a.get(j + 1).map_or(0.0, |v| v.powf(self.p));
            total += (a[j].powf(self.p) - next) * self.set_weight(level)?;
        }
        Ok(total)
    }

    pub fn norm(&self, f: &StepFunction) -> Result<f64> {
        Ok(self.norm_pow(f)?.powf(1.0 / self.p))
    }
}

/// `‖f‖_{Λ^p_R(v)}`.
pub fn lorentz_norm(params: &LorentzParams, f: &StepFunction) -> Result<f64> {
    params.norm(f)
}

/// `V(R(A ∪ B)) / (V(R(A)) + V(R(B)))`.
pub fn quasinorm_ratio(params: &LorentzParams, a: &MeasurableSet, b: &MeasurableSet) -> Result<f64> {
    let x = params.transform.domain();
    if x.measure(a)? <= 0.0 || x.measure(b)? <= 0.0 {
        return invalid("both sets need positive measure");
    }
    let denom = params.set_weight(a)? + params.set_weight(b)?;
    if denom <= 0.0 {
        return Err(Error::NonCancellation("V(R(A)) + V(R(B)) = 0".into()));
    }
    Ok(params.set_weight(&x.union(a, b)?)? / denom)
}

/// `V(R(A)) + V(R(B)) - V(R(A ∪ B)) - V(R(A ∩ B))`; negative means the
/// concavity condition fails on the pair.
pub fn concavity_slack(params: &LorentzParams, a: &MeasurableSet, b: &MeasurableSet) -> Result<f64> {
    let x = params.transform.domain();
    Ok(params.set_weight(a)? + params.set_weight(b)?
        - params.set_weight(&x.union(a, b)?)?
        - params.set_weight(&x.intersection(a, b)?)?)
}

/// Fixed set pairs tried before the random ones: complementary halves,
/// interleaved halves and overlapping halves.
fn fixed_pairs(space: &MeasureSpace) -> Result<Vec<(MeasurableSet, MeasurableSet)>> {
    let mut out = Vec::new();
    if let Some(n) = space.index_count() {
        let by = |f: &dyn Fn(usize) -> bool| -> Result<MeasurableSet> {
            space.index_set(crate::measure::IndexSet::from_bits((0..n).map(f).collect()))
        };
        out.push((by(&|i| i < n / 2)?, by(&|i| i >= n / 2)?));
        out.push((by(&|i| i % 2 == 0)?, by(&|i| i % 2 == 1)?));
        out.push((by(&|i| i < (2 * n).div_ceil(3))?, by(&|i| i >= n / 3)?));
    } else if *space == MeasureSpace::HalfLine {
        let iv = |a, b| MeasurableSet::Intervals(IntervalUnion::interval(a, b));
        out.push((iv(0.0, 1.0), iv(1.0, 2.0)));
        out.push((iv(0.0, 2.0), iv(1.0, 3.0)));
        out.push((iv(0.0, 1.0), iv(3.0, 4.0)));
    }
    Ok(out)
}

/// Set pairs for the searches: the fixed pairs followed by `random` seeded
/// pairs drawn from streams past `offset`.
fn witness_pairs(space: &MeasureSpace, random: u64, seed: u64, offset: u64) -> Result<Vec<(MeasurableSet, MeasurableSet)>> {
    let mut pairs = fixed_pairs(space)?;
    for t in 0..random {
        let rng = &mut trial_rng(seed, offset + t);
        pairs.push((random_set(space, rng)?, random_set(space, rng)?));
    }
    Ok(pairs)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairReport {
    pub condition: String,
    pub holds: bool,
    /// Largest ratio (quasi-norm) or smallest slack (concavity) found.
    pub extreme: f64,
    pub witness: Option<serde_json::Value>,
    pub trials: u64,
    pub seed: u64,
}

/// Largest `quasinorm_ratio` over the witness pairs; `holds` reports whether
/// it stays below `bound`.
pub fn quasinorm_search(params: &LorentzParams, bound: f64, trials: u64, seed: u64) -> Result<PairReport> {
    let x = params.transform.domain();
    let mut best = f64::NEG_INFINITY;
    let mut witness = None;
    for (a, b) in witness_pairs(x, trials, seed, 0)? {
        if x.measure(&a)? <= 0.0 || x.measure(&b)? <= 0.0 {
            continue;
        }
        let r = quasinorm_ratio(params, &a, &b)?;
        if r > best {
            best = r;
            witness = Some(json!({ "a": a, "b": b, "ratio": r }));
        }
    }
    Ok(PairReport {
        condition: "quasi-norm".into(),
        holds: best <= bound,
        extreme: best,
        witness,
        trials,
        seed,
    })
}

/// Smallest `concavity_slack` over the witness pairs.
pub fn concavity_search(params: &LorentzParams, trials: u64, seed: u64) -> Result<PairReport> {
    let x = params.transform.domain();
    let mut worst = f64::INFINITY;
    let mut witness = None;
    let mut scale = 1.0f64;
    for (a, b) in witness_pairs(x, trials, seed, 0)? {
        let s = concavity_slack(params, &a, &b)?;
        scale = scale.max(params.set_weight(&x.union(&a, &b)?)?);
        if s < worst {
            worst = s;
            witness = Some(json!({ "a": a, "b": b, "slack": s }));
        }
    }
    Ok(PairReport {
        condition: "concavity".into(),
        holds: worst >= -1e-12 * scale,
        extreme: worst,
        witness,
        trials,
        seed,
    })
}

/// The pair `f = (1+δ)χ_A + χ_{(A∪B)∖A}`, `g = (1+δ)χ_B + χ_{(A∪B)∖B}`.
pub fn structured_pair(space: &MeasureSpace, a: &MeasurableSet, b: &MeasurableSet, delta: f64) -> Result<(StepFunction, StepFunction)> {
    let u = space.union(a, b)?;
    let f = canonical_step(space, &[(1.0 + delta, a.clone()), (1.0, space.difference(&u, a)?)])?;
    let g = canonical_step(space, &[(1.0 + delta, b.clone()), (1.0, space.difference(&u, b)?)])?;
    Ok((f, g))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TriangleReport {
    pub worst_ratio: f64,
    pub violated: bool,
    pub witness: Option<serde_json::Value>,
    pub trials: u64,
    pub structured_pairs: usize,
    pub seed: u64,
}

/// Number of random set pairs in the structured family.
const STRUCTURED_RANDOM_PAIRS: u64 = 64;

/// Largest `‖f+g‖ / (‖f‖+‖g‖)` over `trials` random step-function pairs and
/// the structured family for every `δ` in [`STRUCTURED_DELTAS`].
pub fn triangle_search(params: &LorentzParams, trials: u64, seed: u64) -> Result<TriangleReport> {
    if trials == 0 {
        return invalid("at least one trial is needed");
    }
    let x = params.transform.domain();
    let mut worst = f64::NEG_INFINITY;
    let mut witness = None;
    let mut consider = |f: &StepFunction, g: &StepFunction, origin: serde_json::Value| -> Result<()> {
        let denom = params.norm(f)? + params.norm(g)?;
        if denom <= 0.0 {
            return Ok(());
        }
        let r = params.norm(&f.add(g)?)? / denom;
        if r > worst {
            worst = r;
            witness = Some(json!({ "origin": origin, "f": f, "g": g, "ratio": r }));
        }
        Ok(())
    };
    for t in 0..trials {
        let rng = &mut trial_rng(seed, t);
        let (f, g) = (random_step(x, rng)?, random_step(x, rng)?);
        consider(&f, &g, json!({ "random_trial": t }))?;
    }
    let pairs = witness_pairs(x, STRUCTURED_RANDOM_PAIRS, seed, trials)?;
    for (a, b) in &pairs {
        for delta in STRUCTURED_DELTAS {
            let (f, g) = structured_pair(x, a, b, delta)?;
            consider(&f, &g, json!({ "structured": { "a": a, "b": b, "delta": delta } }))?;
        }
    }
    Ok(TriangleReport {
        worst_ratio: worst,
        violated: worst > 1.0 + TRIANGLE_TOLERANCE,
        witness,
        trials,
        structured_pairs: pairs.len(),
        seed,
    })
}

/// Largest `N` accepted by the growth construction.
pub const GROWTH_LIMIT: usize = 1000;

/// `(1/n) ‖Σ_{k<=n} 2^k χ_{A_k}‖` for `n = 1..=n_max`, with the classical
/// transformation on the half-line, `v ≡ 1` and `A_k = [0, 2^{-kp})`, so
/// every summand has norm one.
pub fn growth_sequence(p: f64, n_max: usize) -> Result<Vec<f64>> {
    if n_max == 0 || n_max > GROWTH_LIMIT {
        return invalid(format!("N must lie in 1..={GROWTH_LIMIT}"));
    }
    let sp = MeasureSpace::HalfLine;
    let params = LorentzParams::new(p, Weight::Unit, SetTransformation::classical(sp.clone())?)?;
    let mut out = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let mut values = Vec::with_capacity(n);
        let mut levels = Vec::with_capacity(n);
        let mut c = 0.0;
        let mut partial = Vec::with_capacity(n);
        for k in 1..=n {
            c += 2f64.powi(k as i32);
            partial.push(c);
        }
        for k in (1..=n).rev() {
            values.push(partial[k - 1]);
            levels.push(MeasurableSet::interval(0.0, 2f64.powf(-(k as f64) * p)));
        }
        let sum = StepFunction::new(sp.clone(), values, levels)?;
        out.push(params.norm(&sum)? / n as f64);
    }
    Ok(out)
}

/// The growth construction for `0 < p < 1`, where the values diverge.
pub fn p_growth_experiment(p: f64, n_max: usize) -> Result<Vec<f64>> {
    if !(p > 0.0 && p < 1.0) {
        return invalid(format!("the growth experiment needs 0 < p < 1, got {p}"));
    }
    growth_sequence(p, n_max)
}

/// `(‖f‖_{L^p}, ‖f‖_{Λ^p_R(1)})` for a measure-preserving `R`.
pub fn lp_equality_check(r: &SetTransformation, f: &StepFunction, p: f64) -> Result<(f64, f64)> {
    if !r.flags().measure_preserving {
        return Err(Error::PreconditionViolation(format!("{} is not measure preserving", r.name())));
    }
    let params = LorentzParams::new(p, Weight::Unit, r.clone())?;
    Ok((f.lp_norm(p)?, params.norm(f)?))
}

/// Largest instance size for [`saturation_check`].
pub const SATURATION_LIMIT: usize = 8;

/// `(max_h Σ f·h, Σ f*·v*)` where `h` runs over all arrangements of the
/// multiset `v` on `n` equal-mass atoms.
pub fn saturation_check(f: &[f64], v: &[f64]) -> Result<(f64, f64)> {
    if f.len() != v.len() {
        return invalid(format!("{} values cannot be rearranged onto {} atoms", v.len(), f.len()));
    }
    if f.len() > SATURATION_LIMIT {
        return Err(Error::SizeLimit {
            what: "saturation atoms",
            actual: f.len(),
            limit: SATURATION_LIMIT,
        });
    }
    if f.iter().chain(v).any(|x| !(*x >= 0.0 && x.is_finite())) {
        return invalid("values must be nonnegative and finite");
    }
    let n = f.len();
    let mut lhs: f64 = if n == 0 { 0.0 } else { f64::NEG_INFINITY };
    for perm in (0..n).permutations(n) {
        let s: f64 = perm.iter().enumerate().map(|(i, &j)| f[i] * v[j]).sum();
        lhs = lhs.max(s);
    }
    Ok((lhs, sorted_pairing(f, v)))
}
