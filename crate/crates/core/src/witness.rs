//! Seeded random witnesses: sets, nested pairs, chains and step functions.
//!
//! Every trial draws from its own ChaCha stream so that trial `i` of a run
//! does not depend on how many draws earlier trials made.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{unsupported, Result};
use crate::measure::{canonical_step, IndexSet, IntervalUnion, MeasurableSet, MeasureSpace, StepFunction};

/// Generator for trial `trial` of a run seeded with `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Interval endpoints are drawn from the lattice `k/4` in `[0, 6)`.
const LATTICE: u32 = 24;

fn random_intervals<R: Rng>(rng: &mut R) -> IntervalUnion {
    let pieces = rng.gen_range(1..=3);
    let mut raw = Vec::with_capacity(pieces);
    for _ in 0..pieces {
        let a = rng.gen_range(0..LATTICE);
        let b = rng.gen_range(a + 1..=LATTICE);
        raw.push([a as f64 / 4.0, b as f64 / 4.0]);
    }
    IntervalUnion::new(raw).expect("lattice intervals are valid")
}

/// A random set: Bernoulli(1/2) membership for atoms and cells, a union of up
/// to three lattice intervals on the half-line.
pub fn random_set<R: Rng>(space: &MeasureSpace, rng: &mut R) -> Result<MeasurableSet> {
    match space {
        MeasureSpace::Atoms { .. } | MeasureSpace::Grid(_) => {
            let n = space.index_count().unwrap();
            let bits = (0..n).map(|_| rng.gen_bool(0.5)).collect();
            space.index_set(IndexSet::from_bits(bits))
        }
        MeasureSpace::HalfLine => Ok(MeasurableSet::Intervals(random_intervals(rng))),
        _ => unsupported(format!("no random sets on a {} space", space.kind_name())),
    }
}

/// A random subset of `set`.
pub fn random_subset<R: Rng>(space: &MeasureSpace, set: &MeasurableSet, rng: &mut R) -> Result<MeasurableSet> {
    let other = random_set(space, rng)?;
    space.intersection(set, &other)
}

/// A random increasing chain `A_1 ⊂ ... ⊂ A_m` with `2 <= m <= 5`.
pub fn random_chain<R: Rng>(space: &MeasureSpace, rng: &mut R) -> Result<Vec<MeasurableSet>> {
    let m = rng.gen_range(2..=5);
    let mut chain = vec![random_set(space, rng)?];
    for _ in 1..m {
        let next = space.union(chain.last().unwrap(), &random_set(space, rng)?)?;
        chain.push(next);
    }
    Ok(chain)
}

/// A random step function with one to four layers whose heights are
/// multiples of 1/4 in `(0, 4]`.
pub fn random_step<R: Rng>(space: &MeasureSpace, rng: &mut R) -> Result<StepFunction> {
    let layers = rng.gen_range(1..=4);
    let mut pairs = Vec::with_capacity(layers);
    for _ in 0..layers {
        let c = rng.gen_range(1..=16) as f64 / 4.0;
        pairs.push((c, random_set(space, rng)?));
    }
    canonical_step(space, &pairs)
}

/// A random nonzero step function (retries until some layer has positive
/// measure).
pub fn random_nonzero_step<R: Rng>(space: &MeasureSpace, rng: &mut R) -> Result<StepFunction> {
    loop {
        let f = random_step(space, rng)?;
        if f.support_measure()? > 0.0 {
            return Ok(f);
        }
    }
}

/// Integer values in `0..=max` on `n` points.
pub fn random_integers<R: Rng>(n: usize, max: u32, rng: &mut R) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(0..=max) as f64).collect()
}
