//! Independent oracles used by the integration tests. None of them calls the
//! library's rearrangement code.
#![allow(dead_code)]

use itertools::Itertools;
use rand::Rng;

use layercake::measure::MeasureSpace;

/// Atoms with random masses in `{1/4, 1/2, ..., 2}`.
pub fn random_atoms<R: Rng>(n: usize, rng: &mut R) -> MeasureSpace {
    let masses = (0..n).map(|_| rng.gen_range(1..=8) as f64 / 4.0).collect();
    MeasureSpace::atoms(masses).unwrap()
}

/// Classical decreasing rearrangement by sorting atoms and stacking masses:
/// `(cumulative mass, value)` pairs, so `f*(t)` is the value of the first
/// pair whose cumulative mass exceeds `t`.
pub fn sort_and_stack(masses: &[f64], values: &[f64]) -> Vec<(f64, f64)> {
    let mut atoms: Vec<(f64, f64)> = values.iter().copied().zip(masses.iter().copied()).collect();
    atoms.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut acc = 0.0;
    let mut out = Vec::new();
    for (v, m) in atoms {
        if v <= 0.0 {
            break;
        }
        acc += m;
        out.push((acc, v));
    }
    out
}

pub fn stacked_eval(stack: &[(f64, f64)], t: f64) -> f64 {
    stack.iter().find(|(end, _)| t < *end).map_or(0.0, |(_, v)| *v)
}

/// `sup_σ Σ f_i u_σ(i)` by enumerating every permutation.
pub fn brute_force_sup(f: &[f64], u: &[f64]) -> f64 {
    (0..f.len())
        .permutations(f.len())
        .map(|p| p.iter().enumerate().map(|(i, &j)| f[i] * u[j]).sum::<f64>())
        .fold(f64::NEG_INFINITY, f64::max)
}

/// `(1/n)‖Σ_{k<=n} 2^k χ_[0, 2^{-kp})‖_{L^p}` summed over the annuli between
/// consecutive supports.
pub fn p_growth_closed_form(p: f64, n: usize) -> f64 {
    let mut total = 0.0;
    let mut c = 0.0;
    for k in 1..=n {
        c += 2f64.powi(k as i32);
        let outer = 2f64.powf(-(k as f64) * p);
        let inner = if k == n { 0.0 } else { 2f64.powf(-((k + 1) as f64) * p) };
        total += c.powf(p) * (outer - inner);
    }
    total.powf(1.0 / p) / n as f64
}

/// Sorts every column downward, then every row leftward.
pub fn per_axis_sort(rows: usize, cols: usize, values: &[f64]) -> Vec<f64> {
    let mut g = values.to_vec();
    for c in 0..cols {
        let mut col: Vec<f64> = (0..rows).map(|r| g[r * cols + c]).collect();
        col.sort_by(|a, b| b.total_cmp(a));
        for r in 0..rows {
            g[r * cols + c] = col[r];
        }
    }
    for r in 0..rows {
        g[r * cols..(r + 1) * cols].sort_by(|a, b| b.total_cmp(a));
    }
    g
}

/// `(Σ m_i |f_i|^p)^{1/p}`.
pub fn lp_norm(masses: &[f64], values: &[f64], p: f64) -> f64 {
    masses
        .iter()
        .zip(values)
        .map(|(m, v)| m * v.abs().powf(p))
        .sum::<f64>()
        .powf(1.0 / p)
}
