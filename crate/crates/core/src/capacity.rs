//! Capacities, scheme crossovers and the artificial-noise extension.

use rayon::prelude::*;

use crate::attacks::{leakage, qkd_error_prob, Attack, Measure};
use crate::encodings::Scheme;
use crate::entropy::h2;
use crate::error::{Error, Result};
use crate::eve::NoiseLevel;

/// Leakages closer than this to the maximum count as tied.
pub const TIE_TOL: f64 = 1e-12;

/// Values at or below this count as non-positive when bracketing roots.
pub const ZERO_TOL: f64 = 1e-12;

/// Capacity at one noise level for one scheme and measure.
#[derive(Clone, Debug, PartialEq)]
pub struct CapacityPoint {
    pub scheme: Scheme,
    pub measure: Measure,
    pub beta: f64,
    pub max_leakage: f64,
    /// Attacks attaining the maximum, in `M1, M2, K1, K2` order.
    pub argmax: Vec<Attack>,
    /// `1 − h(β) − max leakage`, possibly negative.
    pub capacity: f64,
}

impl CapacityPoint {
    pub fn compute(scheme: Scheme, measure: Measure, beta: NoiseLevel) -> Self {
        let (max_leakage, argmax) = max_leakage(scheme, measure, beta);
        CapacityPoint {
            scheme,
            measure,
            beta: beta.value(),
            max_leakage,
            argmax,
            capacity: 1.0 - h2(beta.value()) - max_leakage,
        }
    }

    pub fn clamped(&self) -> f64 {
        self.capacity.max(0.0)
    }

    /// Argmax attacks joined with `+`.
    pub fn argmax_label(&self) -> String {
        self.argmax
            .iter()
            .map(|a| a.name())
            .collect::<Vec<_>>()
            .join("+")
    }
}

/// Strongest attack and its leakage; every attack within [`TIE_TOL`] is reported.
pub fn max_leakage(scheme: Scheme, measure: Measure, beta: NoiseLevel) -> (f64, Vec<Attack>) {
    let values = Attack::ALL.map(|a| leakage(scheme, a, measure, beta));
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let argmax = Attack::ALL
        .iter()
        .zip(values)
        .filter(|(_, v)| *v >= max - TIE_TOL)
        .map(|(a, _)| *a)
        .collect();
    (max, argmax)
}

/// `1 − h(β) − max leakage`.
pub fn capacity(scheme: Scheme, measure: Measure, beta: NoiseLevel) -> f64 {
    1.0 - h2(beta.value()) - max_leakage(scheme, measure, beta).0
}

/// Evenly spaced grid `lo, lo + step, …` up to and including `hi`.
pub fn beta_grid(lo: f64, hi: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !(lo <= hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::InvalidConfig(format!("bad grid {lo}:{hi}:{step}")));
    }
    NoiseLevel::new(lo)?;
    NoiseLevel::new(hi)?;
    let n = ((hi - lo) / step + 1e-9).floor() as usize;
    let mut out: Vec<f64> = (0..=n).map(|k| (lo + k as f64 * step).min(hi)).collect();
    if hi - out[n] > 1e-12 {
        out.push(hi);
    }
    Ok(out)
}

/// Capacity points over a grid, evaluated in parallel and returned in grid order.
pub fn capacity_curve(
    scheme: Scheme,
    measure: Measure,
    grid: &[f64],
) -> Result<Vec<CapacityPoint>> {
    grid.par_iter()
        .map(|&b| Ok(CapacityPoint::compute(scheme, measure, NoiseLevel::new(b)?)))
        .collect()
}

/// A scalar function of `β` that crossovers are located on.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Curve {
    Zero,
    Capacity(Scheme, Measure),
    Leakage(Scheme, Attack, Measure),
    /// QKD capacity `c_prime(0, β)`.
    QkdPlain,
    /// QKD capacity with optimized artificial noise.
    QkdOptimized,
}

impl Curve {
    pub fn eval(&self, beta: f64) -> Result<f64> {
        let b = NoiseLevel::new(beta)?;
        Ok(match *self {
            Curve::Zero => 0.0,
            Curve::Capacity(s, m) => capacity(s, m, b),
            Curve::Leakage(s, a, m) => leakage(s, a, m, b),
            Curve::QkdPlain => c_prime(0.0, beta)?,
            Curve::QkdOptimized => optimize_epsilon(beta)?.1,
        })
    }
}

/// Root of `f` on `[lo, hi]` by bisection to width `tol`.
///
/// The sign test treats `f ≤ ZERO_TOL` as non-positive, so curves that touch
/// zero and stay there are bracketed at the touching point.
pub fn bisect(f: impl Fn(f64) -> Result<f64>, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    let (mut a, mut b) = (lo, hi);
    let fa = f(a)?;
    let fb = f(b)?;
    let pa = fa > ZERO_TOL;
    if pa == (fb > ZERO_TOL) {
        return Err(Error::NoSignChange {
            lo,
            hi,
            f_lo: fa,
            f_hi: fb,
        });
    }
    while b - a > tol {
        let mid = 0.5 * (a + b);
        if (f(mid)? > ZERO_TOL) == pa {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}

/// Where `first − second` changes sign on `bracket`, to `|Δβ| ≤ 1e-6`.
pub fn find_crossover(first: Curve, second: Curve, bracket: (f64, f64)) -> Result<f64> {
    bisect(
        |b| Ok(first.eval(b)? - second.eval(b)?),
        bracket.0,
        bracket.1,
        1e-6,
    )
}

/// Last `β` with positive capacity.
pub fn zero_capacity_point(scheme: Scheme, measure: Measure) -> Result<f64> {
    find_crossover(
        Curve::Capacity(scheme, measure),
        Curve::Zero,
        (0.0, 1.0 / 3.0),
    )
}

/// Above this noise level the 8-state scheme stops beating the 6-state one.
pub fn eight_vs_six_crossover(measure: Measure) -> Result<f64> {
    let hi = match measure {
        Measure::Shannon => 1.0 / 3.0,
        // Bracket below both zero-capacity points.
        Measure::MinEntropy => 0.0625,
    };
    find_crossover(
        Curve::Capacity(Scheme::EightState, measure),
        Curve::Capacity(Scheme::SixState, measure),
        (0.001, hi),
    )
}

/// Noise level beyond which every scheme has zero capacity.
pub fn all_zero_point(measure: Measure) -> Result<f64> {
    let mut best = 0.0f64;
    for s in Scheme::ALL {
        best = best.max(zero_capacity_point(s, measure)?);
    }
    Ok(best)
}

fn check_unit(name: &str, x: f64) -> Result<()> {
    if !(0.0..=0.5).contains(&x) {
        return Err(Error::InvalidConfig(format!(
            "{name} = {x} outside [0, 1/2]"
        )));
    }
    Ok(())
}

/// Bit error rate of two concatenated binary symmetric channels.
pub fn star(eps: f64, beta: f64) -> f64 {
    eps * (1.0 - beta) + (1.0 - eps) * beta
}

/// QKD secrecy capacity when Alice flips each bit with probability `ε`:
/// `(1−β) h(ε⋆p_β) + β h(ε) − h(ε⋆β)`.
pub fn c_prime(eps: f64, beta: f64) -> Result<f64> {
    check_unit("epsilon", eps)?;
    let b = NoiseLevel::new(beta)?;
    let p = qkd_error_prob(b);
    Ok((1.0 - beta) * h2(star(eps, p)) + beta * h2(eps) - h2(star(eps, beta)))
}

const GOLDEN: f64 = 0.618_033_988_749_894_8;

/// Best artificial noise `(ε_opt, C_opt)` for `β ∈ [0, 0.2]`.
///
/// A 21-point scan brackets the maximum and golden-section refines it to
/// `|Δε| ≤ 1e-6`. `ε = 0` is kept unless noise strictly helps.
pub fn optimize_epsilon(beta: f64) -> Result<(f64, f64)> {
    if !(0.0..=0.2).contains(&beta) {
        return Err(Error::NoiseOutOfRange(beta));
    }
    let f = |e: f64| c_prime(e, beta).expect("ε and β in range");
    const N: usize = 20;
    let scan: Vec<f64> = (0..=N).map(|k| 0.5 * k as f64 / N as f64).collect();
    let vals: Vec<f64> = scan.iter().map(|&e| f(e)).collect();
    let mut best = 0;
    for (i, v) in vals.iter().enumerate() {
        if *v > vals[best] {
            best = i;
        }
    }
    let mut a = scan[best.saturating_sub(1)];
    let mut d = scan[(best + 1).min(N)];
    let mut b = d - GOLDEN * (d - a);
    let mut c = a + GOLDEN * (d - a);
    let (mut fb, mut fc) = (f(b), f(c));
    while d - a > 1e-6 {
        if fb >= fc {
            d = c;
            c = b;
            fc = fb;
            b = d - GOLDEN * (d - a);
            fb = f(b);
        } else {
            a = b;
            b = c;
            fb = fc;
            c = a + GOLDEN * (d - a);
            fc = f(c);
        }
    }
    let (mut eps, mut val) = if fb >= fc { (b, fb) } else { (c, fc) };
    if vals[best] > val {
        eps = scan[best];
        val = vals[best];
    }
    if vals[0] >= val {
        return Ok((0.0, vals[0]));
    }
    Ok((eps, val))
}

/// Zero of the plain QKD capacity.
pub fn plain_threshold() -> Result<f64> {
    find_crossover(Curve::QkdPlain, Curve::Zero, (0.1, 0.2))
}

/// Zero of the optimized QKD capacity, located numerically.
pub fn optimized_threshold() -> Result<f64> {
    find_crossover(Curve::QkdOptimized, Curve::Zero, (0.1, 0.2))
}

/// Coefficient of `δ²` in `c_prime(1/2 − δ, β)` up to a positive factor.
///
/// Artificial noise close to `1/2` helps exactly when it is positive.
pub fn small_signal_coefficient(beta: f64) -> Result<f64> {
    let p = qkd_error_prob(NoiseLevel::new(beta)?);
    Ok((1.0 - 2.0 * beta).powi(2) - beta - (1.0 - beta) * (1.0 - 2.0 * p).powi(2))
}

/// Zero of [`small_signal_coefficient`].
pub fn optimized_threshold_limit() -> Result<f64> {
    bisect(small_signal_coefficient, 0.1, 0.2, 1e-9)
}

/// One row of the artificial-noise table.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoisePoint {
    pub beta: f64,
    pub epsilon_opt: f64,
    pub capacity_plain: f64,
    pub capacity_opt: f64,
}

pub fn noise_curve(grid: &[f64]) -> Result<Vec<NoisePoint>> {
    grid.par_iter()
        .map(|&beta| {
            let (eps, opt) = optimize_epsilon(beta)?;
            Ok(NoisePoint {
                beta,
                epsilon_opt: eps,
                capacity_plain: c_prime(0.0, beta)?,
                capacity_opt: opt,
            })
        })
        .collect()
}
