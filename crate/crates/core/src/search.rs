//! Numerical Shannon-entropy minimization over POVMs.
//!
//! A POVM is parametrized by complex factors `C_x` with `A_x = C_x† C_x`
//! and normalized as `M_x = T^{-1/2} A_x T^{-1/2}`, `T = Σ A_x`, so every
//! parameter vector maps to a valid POVM. Under a symmetry group a single
//! factor generates the whole orbit.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::attacks::{k2_povm, k2_residual_shannon, Measure};
use crate::encodings::Scheme;
use crate::entropy::{
    conditional_entropy_from_table, guess_raw, outcome_table, Povm, SymmetryGroup, PROB_FLOOR,
};
use crate::error::{Error, Result};
use crate::eve::{AncillaEnsemble, NoiseLevel};
use crate::linalg::{c, inv_sqrt_pd, jacobi, sqrt_psd, Matrix};

/// Name of the generator recorded in reports.
pub const RNG_NAME: &str = "ChaCha8";

/// Where local searches begin.
#[derive(Clone, Debug, PartialEq)]
pub enum StartPoint {
    /// `3^k` sign patterns over `k` seeded directions around a seeded base point.
    SignPatterns { directions: usize },
    /// A single start at the given POVM (through `C_x = M_x^{1/2}`).
    Povm(Povm),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchConfig {
    pub outcomes: usize,
    pub dim: usize,
    pub symmetry: Option<SymmetryGroup>,
    pub start: StartPoint,
    /// Stop once an accepted step improves the entropy by less than this.
    pub step_tol: f64,
    pub max_iter: usize,
    pub seed: u64,
}

impl SearchConfig {
    /// 729 starts (`3^6`), symmetry matched to the scheme where one exists.
    pub fn for_scheme(scheme: Scheme, seed: u64) -> Self {
        SearchConfig {
            outcomes: scheme.size(),
            dim: 4,
            symmetry: default_symmetry(scheme),
            start: StartPoint::SignPatterns { directions: 6 },
            step_tol: 1e-13,
            max_iter: 400,
            seed,
        }
    }

    pub fn starts(&self) -> usize {
        match &self.start {
            StartPoint::SignPatterns { directions } => 3usize.pow(*directions as u32),
            StartPoint::Povm(_) => 1,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.step_tol > 0.0) {
            return Err(Error::InvalidConfig(
                "step tolerance must be positive".into(),
            ));
        }
        if self.outcomes < 2 {
            return Err(Error::InvalidConfig("need at least two outcomes".into()));
        }
        if self.dim != 4 {
            return Err(Error::UnsupportedDimension(self.dim));
        }
        if let Some(g) = self.symmetry {
            if g.outcomes() != self.outcomes {
                return Err(Error::IncompatibleSymmetry(format!(
                    "{g:?} acts on {} outcomes, config has {}",
                    g.outcomes(),
                    self.outcomes
                )));
            }
        }
        if let StartPoint::SignPatterns { directions } = self.start {
            if directions > 12 {
                return Err(Error::InvalidConfig("at most 12 start directions".into()));
            }
        }
        Ok(())
    }

    fn factors(&self) -> usize {
        if self.symmetry.is_some() {
            1
        } else {
            self.outcomes
        }
    }

    fn params(&self) -> usize {
        self.factors() * 2 * self.dim * self.dim
    }
}

pub fn default_symmetry(scheme: Scheme) -> Option<SymmetryGroup> {
    match scheme {
        Scheme::FourState => None,
        Scheme::SixState => Some(SymmetryGroup::SixStateCyclic),
        Scheme::EightState => Some(SymmetryGroup::EightStatePauli),
    }
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub povm: Povm,
    pub entropy: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Max-norm distance to the nearest known analytic K2 POVM.
    pub distance_to_analytic: f64,
    /// Entropy after each accepted step of the winning start.
    pub history: Vec<f64>,
    pub starts: usize,
}

/// An abelian symmetry group in its joint eigenbasis `W`.
///
/// With `U_g = W D_g W†` and diagonal `D_g`, the orbit sum
/// `Σ_g D_g A D_g†` keeps exactly the entries of `A` whose row and column
/// carry the same character, scaled by `|G|`.
struct Frame {
    unitaries: Vec<Matrix>,
    w: Matrix,
    same_character: [[bool; 4]; 4],
}

impl Frame {
    fn new(unitaries: Vec<Matrix>) -> Self {
        // A generic Hermitian element of the group algebra separates all characters.
        let mut h = Matrix::zeros(4);
        for (k, u) in unitaries.iter().enumerate() {
            let (a, b) = (0.31 + 0.17 * k as f64, 0.23 + 0.41 * k as f64);
            h += (*u + u.adjoint()).scale(a) + (*u - u.adjoint()).scale_complex(c(0.0, b));
        }
        let w = jacobi(&h).vectors;
        let diag: Vec<Matrix> = unitaries.iter().map(|u| w.adjoint() * *u * w).collect();
        let mut same_character = [[false; 4]; 4];
        for (i, row) in same_character.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = diag.iter().all(|d| (d[(i, i)] - d[(j, j)]).norm() < 1e-9);
            }
        }
        Frame {
            unitaries,
            w,
            same_character,
        }
    }

    fn order(&self) -> f64 {
        self.unitaries.len() as f64
    }

    fn to_frame(&self, m: &Matrix) -> Matrix {
        self.w.adjoint() * *m * self.w
    }

    fn out_of_frame(&self, m: &Matrix) -> Matrix {
        self.w * *m * self.w.adjoint()
    }
}

/// Maps parameter vectors to POVMs.
struct Parametrization {
    dim: usize,
    outcomes: usize,
    frame: Option<Frame>,
}

impl Parametrization {
    fn new(cfg: &SearchConfig) -> Self {
        Parametrization {
            dim: cfg.dim,
            outcomes: cfg.outcomes,
            frame: cfg.symmetry.map(|g| Frame::new(g.unitaries())),
        }
    }

    fn factor(&self, p: &[f64]) -> Matrix {
        let n = self.dim;
        let mut m = Matrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let k = 2 * (i * n + j);
                m[(i, j)] = c(p[k], p[k + 1]);
            }
        }
        m
    }

    fn unfactor(&self, m: &Matrix, out: &mut Vec<f64>) {
        for z in m.entries() {
            out.push(z.re);
            out.push(z.im);
        }
    }

    /// Generating element `M_0` of a symmetric POVM, expressed in the frame.
    fn seed_in_frame(&self, p: &[f64], frame: &Frame) -> Option<Matrix> {
        let cf = self.factor(p);
        let a = cf.adjoint() * cf;
        let mut t = a;
        for i in 0..self.dim {
            for j in 0..self.dim {
                if !frame.same_character[i][j] {
                    t[(i, j)] = c(0.0, 0.0);
                }
            }
        }
        let r = inv_sqrt_pd(&t)?.scale(frame.order().sqrt().recip());
        Some(r * a * r)
    }

    /// Returns `None` when `T` is numerically singular.
    fn elements(&self, p: &[f64]) -> Option<Vec<Matrix>> {
        let block = 2 * self.dim * self.dim;
        match &self.frame {
            Some(frame) => {
                let m0 = frame.out_of_frame(&self.seed_in_frame(p, frame)?);
                Some(frame.unitaries.iter().map(|u| m0.sandwich(u)).collect())
            }
            None => {
                let a: Vec<Matrix> = (0..self.outcomes)
                    .map(|x| {
                        let cf = self.factor(&p[x * block..(x + 1) * block]);
                        cf.adjoint() * cf
                    })
                    .collect();
                let mut t = Matrix::zeros(self.dim);
                for ax in &a {
                    t += *ax;
                }
                let r = inv_sqrt_pd(&t)?;
                Some(a.iter().map(|ax| r * *ax * r).collect())
            }
        }
    }

    /// Parameters reproducing `povm` exactly (`C_x = M_x^{1/2}`).
    fn params_of(&self, povm: &Povm) -> Result<Vec<f64>> {
        let mut out = Vec::new();
        match &self.frame {
            Some(frame) => {
                let m0 = frame.to_frame(&povm.elements()[0]).hermitian_part();
                self.unfactor(&sqrt_psd(&m0)?, &mut out)
            }
            None => {
                for m in povm.elements() {
                    self.unfactor(&sqrt_psd(&m.hermitian_part())?, &mut out);
                }
            }
        }
        Ok(out)
    }
}

fn entropy_of(states: &[Matrix], elements: &[Matrix]) -> f64 {
    let povm = Povm::from_elements_unchecked(elements.to_vec());
    conditional_entropy_from_table(&outcome_table(states, &povm))
}

struct Objective<'a> {
    states: &'a [Matrix],
    param: &'a Parametrization,
    /// States in the group frame, present when the group permutes the
    /// ensemble so every row of the outcome table is a permutation of the first.
    covariant: Option<Vec<Matrix>>,
}

/// Whether conjugating by each group element permutes the states.
fn is_covariant(states: &[Matrix], us: &[Matrix]) -> bool {
    us.iter().all(|u| {
        let mut hit = vec![false; states.len()];
        states.iter().all(|z| {
            let moved = z.sandwich(u);
            match states.iter().position(|w| w.max_diff(&moved) < 1e-10) {
                Some(k) if !hit[k] => {
                    hit[k] = true;
                    true
                }
                _ => false,
            }
        })
    })
}

fn eta(q: f64) -> f64 {
    if q > PROB_FLOOR {
        -q * q.log2()
    } else {
        0.0
    }
}

impl Objective<'_> {
    fn new<'a>(states: &'a [Matrix], param: &'a Parametrization) -> Objective<'a> {
        let covariant = param.frame.as_ref().and_then(|f| {
            (f.unitaries.len() == states.len() && is_covariant(states, &f.unitaries))
                .then(|| states.iter().map(|z| f.to_frame(z)).collect())
        });
        Objective {
            states,
            param,
            covariant,
        }
    }

    fn value(&self, p: &[f64]) -> f64 {
        if let (Some(rotated), Some(frame)) = (&self.covariant, &self.param.frame) {
            let Some(m0) = self.param.seed_in_frame(p, frame) else {
                return f64::INFINITY;
            };
            let nb = rotated.len() as f64;
            let mut joint = 0.0;
            let mut row = 0.0;
            for z in rotated {
                let q = m0.trace_product_re(z).max(0.0);
                row += q;
                joint += eta(q / nb);
            }
            return (nb * (joint - eta(row / nb))).max(0.0);
        }
        match self.param.elements(p) {
            Some(m) => entropy_of(self.states, &m),
            None => f64::INFINITY,
        }
    }

    fn gradient(&self, p: &[f64], g: &mut [f64]) {
        const H: f64 = 1e-6;
        let mut q = p.to_vec();
        for i in 0..p.len() {
            q[i] = p[i] + H;
            let up = self.value(&q);
            q[i] = p[i] - H;
            let down = self.value(&q);
            q[i] = p[i];
            g[i] = (up - down) / (2.0 * H);
        }
    }
}

struct LocalRun {
    params: Vec<f64>,
    value: f64,
    iterations: usize,
    converged: bool,
    history: Vec<f64>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Quasi-Newton descent with Armijo backtracking.
fn bfgs(obj: &Objective, x0: Vec<f64>, tol: f64, max_iter: usize) -> LocalRun {
    let n = x0.len();
    let mut x = x0;
    let mut f = obj.value(&x);
    let mut g = vec![0.0; n];
    obj.gradient(&x, &mut g);
    let mut hinv = identity(n);
    let mut history = vec![f];
    let mut converged = false;
    let mut iterations = 0;
    let mut fresh = true;

    while iterations < max_iter {
        iterations += 1;
        let mut d: Vec<f64> = (0..n)
            .map(|i| -dot(&hinv[i * n..(i + 1) * n], &g))
            .collect();
        let mut slope = dot(&g, &d);
        if !(slope < 0.0) {
            hinv = identity(n);
            d = g.iter().map(|v| -v).collect();
            slope = -dot(&g, &g);
            fresh = true;
        }
        if slope.abs() < 1e-24 {
            converged = true;
            break;
        }
        let mut step = 1.0;
        let mut accepted = None;
        for _ in 0..50 {
            let trial: Vec<f64> = x.iter().zip(&d).map(|(a, b)| a + step * b).collect();
            let ft = obj.value(&trial);
            if ft <= f + 1e-4 * step * slope {
                accepted = Some((trial, ft));
                break;
            }
            step *= 0.5;
        }
        let Some((xn, fnew)) = accepted else {
            if fresh {
                converged = true;
                break;
            }
            hinv = identity(n);
            fresh = true;
            continue;
        };
        let mut gn = vec![0.0; n];
        obj.gradient(&xn, &mut gn);
        let s: Vec<f64> = xn.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = gn.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > 1e-16 {
            let hy: Vec<f64> = (0..n).map(|i| dot(&hinv[i * n..(i + 1) * n], &y)).collect();
            let yhy = dot(&y, &hy);
            let rho = 1.0 / sy;
            let coef = (1.0 + rho * yhy) * rho;
            for i in 0..n {
                for j in 0..n {
                    hinv[i * n + j] += coef * s[i] * s[j] - rho * (hy[i] * s[j] + s[i] * hy[j]);
                }
            }
            fresh = false;
        }
        let improvement = f - fnew;
        x = xn;
        f = fnew;
        g = gn;
        history.push(f);
        if improvement < tol {
            converged = true;
            break;
        }
    }
    LocalRun {
        params: x,
        value: f,
        iterations,
        converged,
        history,
    }
}

fn identity(n: usize) -> Vec<f64> {
    let mut m = vec![0.0; n * n];
    for i in 0..n {
        m[i * n + i] = 1.0;
    }
    m
}

fn gaussian_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n)
        .map(|_| rng.sample::<f64, _>(StandardNormal))
        .collect()
}

fn start_points(cfg: &SearchConfig, param: &Parametrization) -> Result<Vec<Vec<f64>>> {
    let n = cfg.params();
    match &cfg.start {
        StartPoint::Povm(p) => {
            if p.len() != cfg.outcomes || p.dim() != cfg.dim {
                return Err(Error::DimensionMismatch {
                    expected: cfg.outcomes,
                    got: p.len(),
                });
            }
            Ok(vec![param.params_of(p)?])
        }
        StartPoint::SignPatterns { directions } => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            let base = gaussian_vec(&mut rng, n);
            let dirs: Vec<Vec<f64>> = (0..*directions)
                .map(|_| gaussian_vec(&mut rng, n).iter().map(|v| 0.7 * v).collect())
                .collect();
            let total = 3usize.pow(*directions as u32);
            Ok((0..total)
                .map(|k| {
                    let mut p = base.clone();
                    let mut code = k;
                    for d in &dirs {
                        let s = (code % 3) as f64 - 1.0;
                        code /= 3;
                        for (pi, di) in p.iter_mut().zip(d) {
                            *pi += s * di;
                        }
                    }
                    p
                })
                .collect())
        }
    }
}

fn bits_less(a: &Povm, b: &Povm) -> bool {
    let ka = a.elements().iter().flat_map(|m| m.to_bits());
    let kb = b.elements().iter().flat_map(|m| m.to_bits());
    ka.lt(kb)
}

/// Known analytic K2 POVMs for the ensemble's scheme and noise.
fn analytic_povms(ensemble: &AncillaEnsemble) -> Vec<Povm> {
    Measure::ALL
        .iter()
        .map(|&m| k2_povm(ensemble.scheme, m, ensemble.beta))
        .collect()
}

/// Multi-start local minimization of `H(B | ℳ(ζ_B))`.
pub fn minimize_shannon(ensemble: &AncillaEnsemble, config: &SearchConfig) -> Result<SearchResult> {
    config.validate()?;
    if config.outcomes != ensemble.len() {
        return Err(Error::DimensionMismatch {
            expected: ensemble.len(),
            got: config.outcomes,
        });
    }
    let param = Parametrization::new(config);
    let starts = start_points(config, &param)?;
    let obj = Objective::new(&ensemble.states, &param);
    let runs: Vec<(Povm, LocalRun)> = starts
        .into_par_iter()
        .filter_map(|x0| {
            let run = bfgs(&obj, x0, config.step_tol, config.max_iter);
            let elements = param.elements(&run.params)?;
            Some((Povm::from_elements_unchecked(elements), run))
        })
        .collect();
    let n_starts = runs.len();
    let (povm, run) = runs
        .into_iter()
        .reduce(|a, b| {
            let better = b.1.value < a.1.value || (b.1.value == a.1.value && bits_less(&b.0, &a.0));
            if better {
                b
            } else {
                a
            }
        })
        .ok_or_else(|| Error::InvalidConfig("every start was degenerate".into()))?;
    let povm = match config.symmetry {
        Some(g) => povm.with_symmetry(g),
        None => povm,
    };
    let distance_to_analytic = analytic_povms(ensemble)
        .iter()
        .filter(|p| p.len() == povm.len())
        .map(|p| p.max_diff(&povm))
        .fold(f64::INFINITY, f64::min);
    Ok(SearchResult {
        entropy: run.value,
        iterations: run.iterations,
        converged: run.converged,
        distance_to_analytic,
        history: run.history,
        starts: n_starts,
        povm,
    })
}

/// Random POVM: complex-Gaussian factors `G_x`, `A_x = G_x† G_x`,
/// `M_x = T^{-1/2} A_x T^{-1/2}`. Singular draws are resampled.
pub fn random_povm_with(rng: &mut impl Rng, dim: usize, outcomes: usize) -> Result<Povm> {
    if dim != 2 && dim != 4 {
        return Err(Error::UnsupportedDimension(dim));
    }
    if outcomes < 2 {
        return Err(Error::InvalidConfig("need at least two outcomes".into()));
    }
    loop {
        let a: Vec<Matrix> = (0..outcomes)
            .map(|_| {
                let mut g = Matrix::zeros(dim);
                for z in g.entries_mut() {
                    *z = c(rng.sample(StandardNormal), rng.sample(StandardNormal));
                }
                g.adjoint() * g
            })
            .collect();
        let mut t = Matrix::zeros(dim);
        for x in &a {
            t += *x;
        }
        if let Some(r) = inv_sqrt_pd(&t) {
            return Ok(Povm::from_elements_unchecked(
                a.iter().map(|x| (r * *x * r).hermitian_part()).collect(),
            ));
        }
    }
}

/// Seeded [`random_povm_with`] using ChaCha8.
pub fn random_povm(dim: usize, outcomes: usize, seed: u64) -> Result<Povm> {
    random_povm_with(&mut ChaCha8Rng::seed_from_u64(seed), dim, outcomes)
}

/// Orbit average `N_0 = (1/|G|) Σ_x U_x† M_x U_x`, redistributed as
/// `M_x = U_x N_0 U_x†` and renormalized to exact completeness.
pub fn symmetrize_povm(povm: &Povm, group: SymmetryGroup) -> Result<Povm> {
    if povm.len() != group.outcomes() || povm.dim() != 4 {
        return Err(Error::IncompatibleSymmetry(format!(
            "{group:?} needs {} outcomes of dimension 4, got {} of dimension {}",
            group.outcomes(),
            povm.len(),
            povm.dim()
        )));
    }
    let us = group.unitaries();
    let mut n0 = Matrix::zeros(4);
    for (u, m) in us.iter().zip(povm.elements()) {
        n0 += m.sandwich(&u.adjoint());
    }
    let n0 = n0.scale(1.0 / us.len() as f64).hermitian_part();
    let mut t = Matrix::zeros(4);
    for u in &us {
        t += n0.sandwich(u);
    }
    let r =
        inv_sqrt_pd(&t).ok_or_else(|| Error::InvalidPovm("orbit average is singular".into()))?;
    let m0 = (r * n0 * r).hermitian_part();
    Ok(
        Povm::from_elements_unchecked(us.iter().map(|u| m0.sandwich(u)).collect())
            .with_symmetry(group),
    )
}

/// Best values seen over a batch of random POVMs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MonteCarloSummary {
    pub samples: usize,
    pub min_entropy: f64,
    pub max_guess: f64,
}

const MC_BATCH: usize = 10_000;

/// Samples `samples` random POVMs in parallel batches, each batch on its own ChaCha8 stream.
pub fn monte_carlo(
    ensemble: &AncillaEnsemble,
    samples: usize,
    seed: u64,
) -> Result<MonteCarloSummary> {
    let batches = samples.div_ceil(MC_BATCH);
    let outcomes = ensemble.len();
    let parts: Vec<(f64, f64)> = (0..batches)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k as u64 + 1);
            let count = MC_BATCH.min(samples - k * MC_BATCH);
            let mut best = (f64::INFINITY, 0.0f64);
            for _ in 0..count {
                let p = random_povm_with(&mut rng, 4, outcomes).expect("valid shape");
                best.0 = best.0.min(entropy_of(&ensemble.states, p.elements()));
                best.1 = best.1.max(guess_raw(&ensemble.states, p.elements()));
            }
            best
        })
        .collect();
    let (min_entropy, max_guess) = parts
        .iter()
        .fold((f64::INFINITY, 0.0f64), |a, b| (a.0.min(b.0), a.1.max(b.1)));
    Ok(MonteCarloSummary {
        samples,
        min_entropy,
        max_guess,
    })
}

/// Conjectured minimum of `H(B | ℳ(ζ_B))` for the scheme.
pub fn conjectured_entropy(scheme: Scheme, beta: NoiseLevel) -> f64 {
    k2_residual_shannon(scheme, beta)
}

/// One JSON-lines record of a search run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchReport {
    pub scheme: String,
    pub beta: f64,
    pub measure: String,
    pub seed: u64,
    pub rng: String,
    pub starts: usize,
    pub mc_samples: usize,
    pub best_entropy: f64,
    pub conjectured_entropy: f64,
    pub gap_to_conjecture: f64,
    pub mc_min_entropy: f64,
    pub mc_gap_to_conjecture: f64,
    pub distance_to_analytic: f64,
    pub converged: bool,
}

impl SearchReport {
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

/// Local search plus Monte Carlo for one `(scheme, β)`.
pub fn run_search(
    scheme: Scheme,
    beta: NoiseLevel,
    config: &SearchConfig,
    mc_samples: usize,
) -> Result<SearchReport> {
    let ens = AncillaEnsemble::new(scheme, beta, 0)?;
    let res = minimize_shannon(&ens, config)?;
    let mc = if mc_samples > 0 {
        monte_carlo(&ens, mc_samples, config.seed)?
    } else {
        MonteCarloSummary {
            samples: 0,
            min_entropy: f64::INFINITY,
            max_guess: 0.0,
        }
    };
    let conj = conjectured_entropy(scheme, beta);
    Ok(SearchReport {
        scheme: scheme.short_name().to_string(),
        beta: beta.value(),
        measure: Measure::Shannon.name().to_string(),
        seed: config.seed,
        rng: RNG_NAME.to_string(),
        starts: res.starts,
        mc_samples,
        best_entropy: res.entropy,
        conjectured_entropy: conj,
        gap_to_conjecture: res.entropy - conj,
        mc_min_entropy: mc.min_entropy,
        mc_gap_to_conjecture: mc.min_entropy - conj,
        distance_to_analytic: res.distance_to_analytic,
        converged: res.converged,
    })
}
