//! Small numerical helpers shared across modules.

use statrs::function::gamma::{gamma, gamma_lr};

/// Volume of the unit ball in `R^n`, `pi^(n/2) / Gamma(n/2 + 1)`.
pub fn unit_ball_volume(n: usize) -> f64 {
    match n {
        1 => return 2.0,
        2 => return std::f64::consts::PI,
        _ => {}
    }
    let half = n as f64 / 2.0;
    std::f64::consts::PI.powf(half) / gamma(half + 1.0)
}

/// Surface measure of the unit sphere in `R^n` (`n * sigma_n`). For `n = 1`
/// this is the counting measure of `{-1, 1}`.
pub fn unit_sphere_area(n: usize) -> f64 {
    n as f64 * unit_ball_volume(n)
}

/// Radius of the centred ball of volume `mass` in `R^n`.
pub fn ball_radius(n: usize, mass: f64) -> f64 {
    if mass <= 0.0 {
        return 0.0;
    }
    (mass / unit_ball_volume(n)).powf(1.0 / n as f64)
}

/// Volume of the centred ball of radius `r` in `R^n`.
pub fn ball_volume(n: usize, r: f64) -> f64 {
    if r <= 0.0 {
        return 0.0;
    }
    unit_ball_volume(n) * r.powi(n as i32)
}

/// `int_0^r rho^(n-1) e^(-rate rho) d rho` for `rate > 0`.
pub(crate) fn exp_moment(n: usize, rate: f64, r: f64) -> f64 {
    if r <= 0.0 {
        return 0.0;
    }
    let a = n as f64;
    gamma(a) * gamma_lr(a, rate * r) / rate.powf(a)
}

/// Relative comparison with an absolute floor for values near zero.
pub fn close(a: f64, b: f64, rel: f64) -> bool {
    let scale = a.abs().max(b.abs()).max(1.0);
    (a - b).abs() <= rel * scale
}

/// Adaptive Simpson quadrature on `[a, b]`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, 48)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
}
