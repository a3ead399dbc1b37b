//! Command-line front end for the `qkr` binary.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::attacks::{
    dual_povm, k1_constant, k1_constant_from_povm, k2_leakage, k2_leakage_from_povm, k2_povm,
    leakage, Attack, Measure,
};
use crate::capacity::{
    beta_grid, eight_vs_six_crossover, noise_curve, optimized_threshold, plain_threshold,
    zero_capacity_point, CapacityPoint, NoisePoint,
};
use crate::encodings::{bloch_vector, measurement_basis, Basis, BlochVector, Scheme};
use crate::entropy::{
    guessing_probability, holevo_certificate, min_entropy_binary, shannon_given_povm, Povm,
    POVM_TOL,
};
use crate::error::{Error, Result};
use crate::eve::{
    ancilla_vectors, same_outcome_weight, symmetrized_ab, AncillaEnsemble, NoiseLevel,
};
use crate::linalg::{c, eig_hermitian, Matrix};
use crate::search::{run_search, SearchConfig, StartPoint};

/// Exit status for a run that completed and passed.
pub const EXIT_OK: i32 = 0;
/// Exit status when a verification or search check fails.
pub const EXIT_FAIL: i32 = 1;
/// Exit status for malformed arguments or unusable output paths.
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "qkr",
    version,
    about = "Leakage, capacity and POVM tools for qubit key recycling"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Leakage tables (M1, M2, K1, K2 × 4/6/8-state) at one bit error rate.
    Table(CommonArgs),
    /// CSV of leakage and capacity over a β grid.
    Sweep(CommonArgs),
    /// Run the certificate and invariant suite.
    Verify(CommonArgs),
    /// Numerical Shannon-entropy search against the conjectured POVMs (JSON lines).
    Search(CommonArgs),
    /// CSV of the artificial-noise optimization.
    Noise(CommonArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SchemeFilter {
    #[value(name = "4")]
    Four,
    #[value(name = "6")]
    Six,
    #[value(name = "8")]
    Eight,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MeasureFilter {
    Shannon,
    Min,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BetaRange {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

impl FromStr for BetaRange {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [lo, hi, step] = parts[..] else {
            return Err(format!("expected LO:HI:STEP, got {s:?}"));
        };
        Ok(BetaRange {
            lo: parse_number(lo)?,
            hi: parse_number(hi)?,
            step: parse_number(step)?,
        })
    }
}

/// Decimal or `a/b` fraction.
pub fn parse_number(s: &str) -> std::result::Result<f64, String> {
    let s = s.trim();
    let v = match s.split_once('/') {
        Some((a, b)) => {
            let a: f64 = a.trim().parse().map_err(|_| format!("bad number {s:?}"))?;
            let b: f64 = b.trim().parse().map_err(|_| format!("bad number {s:?}"))?;
            a / b
        }
        None => s.parse().map_err(|_| format!("bad number {s:?}"))?,
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("bad number {s:?}"))
    }
}

#[derive(Clone, Debug, Args)]
pub struct CommonArgs {
    #[arg(long, value_enum)]
    pub scheme: Option<SchemeFilter>,
    #[arg(long, value_enum)]
    pub measure: Option<MeasureFilter>,
    /// Single bit error rate.
    #[arg(long, value_parser = parse_number, conflicts_with = "beta_range")]
    pub beta: Option<f64>,
    /// Grid as LO:HI:STEP (fractions like 1/3 accepted).
    #[arg(long)]
    pub beta_range: Option<BetaRange>,
    #[arg(long, default_value_t = 2024)]
    pub seed: u64,
    /// Write output here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Add this to an off-diagonal entry of every certified POVM (verify only).
    #[arg(long, value_parser = parse_number, default_value_t = 0.0)]
    pub perturb: f64,
    /// Monte Carlo samples per (scheme, β) in `search`.
    #[arg(long, default_value_t = 1_000_000)]
    pub budget: usize,
    /// Local-search starts are 3^DIRECTIONS sign patterns.
    #[arg(long, default_value_t = 6)]
    pub directions: usize,
}

/// Parsed and validated arguments.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub schemes: Vec<Scheme>,
    pub measures: Vec<Measure>,
    pub betas: Vec<f64>,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub perturb: f64,
    pub budget: usize,
    pub directions: usize,
}

impl RunConfig {
    /// Resolves filters, using `default_betas` and `default_schemes` when unset.
    pub fn from_args(
        args: &CommonArgs,
        default_betas: (f64, f64, f64),
        default_schemes: &[Scheme],
    ) -> Result<Self> {
        let schemes = match args.scheme {
            None => default_schemes.to_vec(),
            Some(SchemeFilter::All) => Scheme::ALL.to_vec(),
            Some(SchemeFilter::Four) => vec![Scheme::FourState],
            Some(SchemeFilter::Six) => vec![Scheme::SixState],
            Some(SchemeFilter::Eight) => vec![Scheme::EightState],
        };
        let measures = match args.measure.unwrap_or(MeasureFilter::Both) {
            MeasureFilter::Shannon => vec![Measure::Shannon],
            MeasureFilter::Min => vec![Measure::MinEntropy],
            MeasureFilter::Both => Measure::ALL.to_vec(),
        };
        let betas = match (args.beta, args.beta_range) {
            (Some(b), _) => vec![NoiseLevel::new(b)?.value()],
            (None, Some(r)) => beta_grid(r.lo, r.hi, r.step)?,
            (None, None) => {
                let (lo, hi, step) = default_betas;
                beta_grid(lo, hi, step)?
            }
        };
        if !args.perturb.is_finite() {
            return Err(Error::InvalidConfig("perturbation must be finite".into()));
        }
        if args.directions > 12 {
            return Err(Error::InvalidConfig("at most 12 directions".into()));
        }
        Ok(RunConfig {
            schemes,
            measures,
            betas,
            seed: args.seed,
            out: args.out.clone(),
            perturb: args.perturb,
            budget: args.budget,
            directions: args.directions,
        })
    }
}

/// Formats `x` with `digits` significant digits; magnitudes below 1e-12 print as `0`.
pub fn format_sig(x: f64, digits: usize) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x.abs() < 1e-12 {
        return "0".into();
    }
    let mag = x.abs().log10().floor() as i32;
    let decimals = (digits as i32 - 1 - mag).max(0) as usize;
    format!("{x:.decimals$}")
}

fn csv_num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Leakage tables at `β`: one block per measure, argmax cell of each column starred.
pub fn cmd_table(beta: NoiseLevel, measures: &[Measure]) -> String {
    let mut s = String::new();
    for (i, &m) in measures.iter().enumerate() {
        if i > 0 {
            s.push('\n');
        }
        let title = match m {
            Measure::Shannon => "Shannon entropy loss",
            Measure::MinEntropy => "Min-entropy loss",
        };
        let _ = writeln!(
            s,
            "{title} per qubit at beta = {}",
            format_sig(beta.value(), 6)
        );
        let _ = write!(s, "{:<6}", "attack");
        for scheme in Scheme::ALL {
            let _ = write!(s, "{:>13}", scheme.short_name());
        }
        s.push('\n');
        let points: Vec<CapacityPoint> = Scheme::ALL
            .iter()
            .map(|&sc| CapacityPoint::compute(sc, m, beta))
            .collect();
        for a in Attack::ALL {
            let _ = write!(s, "{:<6}", a.name());
            for (sc, p) in Scheme::ALL.iter().zip(&points) {
                let v = leakage(*sc, a, m, beta);
                let mark = if p.argmax.contains(&a) { "*" } else { " " };
                let _ = write!(s, "{:>12}{mark}", format_sig(v, 6));
            }
            s.push('\n');
        }
        let _ = write!(s, "{:<6}", "C");
        for p in &points {
            let _ = write!(s, "{:>12} ", format_sig(p.capacity, 6));
        }
        s.push('\n');
    }
    s
}

/// Column names of the sweep CSV.
pub const SWEEP_HEADER: &str = "beta,scheme,measure,attack,leakage,capacity,argmax_attack";

/// Sweep CSV, rows ordered by β, scheme, measure, attack.
pub fn cmd_sweep(cfg: &RunConfig) -> Result<String> {
    let mut s = String::from(SWEEP_HEADER);
    s.push('\n');
    let rows: Vec<String> = {
        use rayon::prelude::*;
        cfg.betas
            .par_iter()
            .map(|&b| {
                let beta = NoiseLevel::new(b)?;
                let mut block = String::new();
                for &scheme in &cfg.schemes {
                    for &m in &cfg.measures {
                        let p = CapacityPoint::compute(scheme, m, beta);
                        let label = p.argmax_label();
                        for a in Attack::ALL {
                            let _ = writeln!(
                                block,
                                "{},{},{},{},{},{},{}",
                                csv_num(b),
                                scheme.short_name(),
                                m.name(),
                                a.name(),
                                csv_num(leakage(scheme, a, m, beta)),
                                csv_num(p.capacity),
                                label
                            );
                        }
                    }
                }
                Ok(block)
            })
            .collect::<Result<_>>()?
    };
    for r in rows {
        s.push_str(&r);
    }
    Ok(s)
}

/// Column names of the noise CSV.
pub const NOISE_HEADER: &str = "beta,epsilon_opt,capacity_plain,capacity_opt";

/// Noise CSV plus a warning when some `ε_opt > 0` row precedes an `ε_opt = 0` row.
pub fn cmd_noise(cfg: &RunConfig) -> Result<(String, Option<String>)> {
    if let Some(&b) = cfg.betas.iter().find(|&&b| b > 0.2) {
        return Err(Error::InvalidConfig(format!(
            "noise grid must lie in [0, 0.2], got {b}"
        )));
    }
    let pts = noise_curve(&cfg.betas)?;
    let mut s = String::from(NOISE_HEADER);
    s.push('\n');
    for p in &pts {
        let _ = writeln!(
            s,
            "{},{},{},{}",
            csv_num(p.beta),
            csv_num(p.epsilon_opt),
            csv_num(p.capacity_plain),
            csv_num(p.capacity_opt)
        );
    }
    Ok((s, onset_violation(&pts)))
}

/// Describes the first `ε_opt = 0` row that follows a positive one.
pub fn onset_violation(pts: &[NoisePoint]) -> Option<String> {
    let first = pts.iter().position(|p| p.epsilon_opt > 0.0)?;
    pts[first..]
        .iter()
        .find(|p| p.epsilon_opt == 0.0 && p.capacity_opt > 0.0)
        .map(|p| {
            format!(
                "epsilon_opt returns to 0 at beta = {} after turning positive at {}",
                p.beta, pts[first].beta
            )
        })
}

/// Search reports, one JSON line per (scheme, β), and whether every gap is ≥ −1e-6.
pub fn cmd_search(cfg: &RunConfig) -> Result<(String, bool)> {
    let mut s = String::new();
    let mut ok = true;
    for &scheme in &cfg.schemes {
        for &b in &cfg.betas {
            let mut sc = SearchConfig::for_scheme(scheme, cfg.seed);
            sc.start = StartPoint::SignPatterns {
                directions: cfg.directions,
            };
            let report = run_search(scheme, NoiseLevel::new(b)?, &sc, cfg.budget)?;
            ok &= report.gap_to_conjecture >= -1e-6 && report.mc_gap_to_conjecture >= -1e-6;
            s.push_str(&report.to_json_line());
            s.push('\n');
        }
    }
    Ok((s, ok))
}

/// One line of the verification report.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }

    fn close(name: impl Into<String>, got: f64, want: f64, tol: f64) -> Self {
        let err = (got - want).abs();
        Check::new(
            name,
            err <= tol,
            format!("got={got:.10} want={want:.10} err={err:.2e} tol={tol:.0e}"),
        )
    }

    pub fn line(&self) -> String {
        let status = if self.passed { "PASS" } else { "FAIL" };
        format!("CHECK {} {status} {}", self.name, self.detail)
    }
}

/// Adds `x` to entries (0,1) and (1,0) of the first element.
pub fn perturb_povm(povm: &Povm, x: f64) -> Povm {
    if x == 0.0 {
        return povm.clone();
    }
    let mut elements = povm.elements().to_vec();
    elements[0][(0, 1)] += c(x, 0.0);
    elements[0][(1, 0)] += c(x, 0.0);
    Povm::from_elements_unchecked(elements)
}

fn certificate_check(name: String, ens: &AncillaEnsemble, povm: &Povm) -> Check {
    let rep = holevo_certificate(ens, povm, POVM_TOL);
    let valid = povm.validate(POVM_TOL);
    Check::new(
        name,
        rep.passed && valid.is_ok(),
        format!(
            "min_eig={:.3e} herm_gap={:.1e} completeness={:.1e}",
            rep.min_eigenvalue,
            rep.hermiticity_gap,
            povm.completeness_gap()
        ),
    )
}

fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64)
        .collect()
}

fn nl(b: f64) -> NoiseLevel {
    NoiseLevel::new(b).expect("grid inside [0, 1/2]")
}

/// Runs the certificate and invariant suite; `perturb` is applied to every certified POVM.
pub fn verify_checks(perturb: f64) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let k2 = |s, m, b| perturb_povm(&k2_povm(s, m, nl(b)), perturb);

    // Holevo certificates, 50-point grids.
    let ranges = [
        (Scheme::FourState, "4-state", 0.0, 0.5),
        (Scheme::SixState, "6-state", 0.0, 0.5),
        (Scheme::EightState, "8-state-low", 0.0, 1.0 / 3.0),
        (Scheme::EightState, "8-state-high", 1.0 / 3.0, 0.5),
    ];
    for (scheme, label, lo, hi) in ranges {
        let mut worst = f64::INFINITY;
        let mut ok = true;
        for b in grid(lo, hi, 50) {
            let ens = AncillaEnsemble::new(scheme, nl(b), 0)?;
            let p = k2(scheme, Measure::MinEntropy, b);
            let rep = holevo_certificate(&ens, &p, POVM_TOL);
            ok &= rep.passed && p.validate(POVM_TOL).is_ok();
            worst = worst.min(rep.min_eigenvalue);
        }
        out.push(Check::new(
            format!("holevo_grid_{label}"),
            ok,
            format!("points=50 worst_min_eig={worst:.3e}"),
        ));
    }
    for scheme in Scheme::ALL {
        for b in [0.05, 0.1, 0.2, 0.3] {
            let ens = AncillaEnsemble::new(scheme, nl(b), 0)?;
            out.push(certificate_check(
                format!("holevo_{}_beta{b}", scheme.short_name()),
                &ens,
                &k2(scheme, Measure::MinEntropy, b),
            ));
        }
        // Reflected POVM certifies the x = 1 ensemble.
        let ens1 = AncillaEnsemble::new(scheme, nl(0.15), 1)?;
        let dual = perturb_povm(
            &dual_povm(&k2_povm(scheme, Measure::MinEntropy, nl(0.15))),
            perturb,
        );
        out.push(certificate_check(
            format!("holevo_reflected_{}", scheme.short_name()),
            &ens1,
            &dual,
        ));
    }

    // Closed form against POVM statistics.
    for scheme in Scheme::ALL {
        for m in Measure::ALL {
            let mut worst = 0.0f64;
            for b in grid(0.0, 0.5, 50) {
                let ens = AncillaEnsemble::new(scheme, nl(b), 0)?;
                let p = k2(scheme, m, b);
                let n = (scheme.size() as f64).log2();
                let from_povm = match m {
                    Measure::MinEntropy => n + guessing_probability(&ens, &p)?.log2(),
                    Measure::Shannon => n - shannon_given_povm(&ens, &p)?,
                };
                worst = worst.max((from_povm - k2_leakage(scheme, m, nl(b))).abs());
            }
            out.push(Check::new(
                format!("k2_closed_form_{}_{}", scheme.short_name(), m.name()),
                worst <= 1e-9,
                format!("max_err={worst:.2e} tol=1e-9"),
            ));
        }
    }

    // Per-qubit constants.
    let k1_expected = [
        (Scheme::FourState, 0.399124, 0.771553),
        (Scheme::SixState, 0.314067, 0.861159),
        (Scheme::EightState, 0.415037, 1.0),
    ];
    for (scheme, sh, mn) in k1_expected {
        for (m, want) in [(Measure::Shannon, sh), (Measure::MinEntropy, mn)] {
            out.push(Check::close(
                format!("k1_constant_{}_{}", scheme.short_name(), m.name()),
                k1_constant(scheme, m),
                want,
                5e-4,
            ));
            out.push(Check::close(
                format!("k1_povm_{}_{}", scheme.short_name(), m.name()),
                k1_constant_from_povm(scheme, m, 0)?,
                k1_constant(scheme, m),
                1e-9,
            ));
        }
    }
    for (m, row) in [
        (Measure::Shannon, [0.399, 0.256, 0.0]),
        (Measure::MinEntropy, [0.772, 0.658, 0.0]),
    ] {
        let got: Vec<f64> = Scheme::ALL
            .iter()
            .map(|&s| leakage(s, Attack::M1, m, nl(0.0)))
            .collect();
        let err = got
            .iter()
            .zip(row)
            .map(|(g, w)| (g - w).abs())
            .fold(0.0, f64::max);
        out.push(Check::new(
            format!("table_m1_beta0_{}", m.name()),
            err <= 5e-4,
            format!("row={got:.6?} max_err={err:.2e}"),
        ));
    }

    // Boundaries.
    let third = 1.0 / 3.0;
    for m in Measure::ALL {
        let below = k2_leakage(Scheme::EightState, m, nl(third - 1e-12));
        let above = k2_leakage(Scheme::EightState, m, nl(third + 1e-12));
        out.push(Check::close(
            format!("k2_continuity_8-state_{}", m.name()),
            above,
            below,
            1e-9,
        ));
        for scheme in Scheme::ALL {
            out.push(Check::close(
                format!("k2_half_equals_k1_{}_{}", scheme.short_name(), m.name()),
                k2_leakage_from_povm(scheme, m, nl(0.5))?,
                k1_constant(scheme, m),
                1e-9,
            ));
        }
    }

    // Duality of Shannon and min-entropy POVMs.
    for (scheme, b, label) in [
        (Scheme::SixState, 0.1, "6-state"),
        (Scheme::EightState, 0.1, "8-state-low"),
        (Scheme::EightState, 0.4, "8-state-high"),
    ] {
        let sh = k2(scheme, Measure::Shannon, b);
        // The Shannon POVM is the min-entropy POVM of the reflected (x = 1) ensemble.
        let ens1 = AncillaEnsemble::new(scheme, nl(b), 1)?;
        let rep = holevo_certificate(&ens1, &sh, POVM_TOL);
        let d = dual_povm(&k2_povm(scheme, Measure::MinEntropy, nl(b))).max_diff(&sh);
        out.push(Check::new(
            format!("duality_{label}"),
            d <= 1e-9 && rep.passed,
            format!("max_diff={d:.2e} min_eig={:.3e}", rep.min_eigenvalue),
        ));
    }

    // Ancilla structure for a handful of directions.
    let dirs = [
        BlochVector::normalized(1.0, 2.0, -0.5)?,
        BlochVector::normalized(-0.3, 0.1, 0.9)?,
        bloch_vector(Scheme::EightState, Basis(3), 1)?,
    ];
    let mut overlap_err = 0.0f64;
    let mut flip_err = 0.0f64;
    let mut constraint_err = 0.0f64;
    for v in &dirs {
        for b in [0.05, 0.2, 0.3] {
            let e = ancilla_vectors(v, nl(b));
            let ov = e.e01.inner(&e.e10).re;
            overlap_err = overlap_err.max((ov - (1.0 - 2.0 * b) / (1.0 - b)).abs());
            let flipped = ancilla_vectors(&-*v, nl(b));
            flip_err = flip_err.max(e.e10.max_diff(&flipped.e01));
            let psi = measurement_basis(v)?.0;
            let w = same_outcome_weight(&symmetrized_ab(nl(b)), &psi);
            constraint_err = constraint_err.max((w - b / 2.0).abs());
        }
    }
    out.push(Check::new(
        "ancilla_overlap",
        overlap_err <= 1e-10,
        format!("max_err={overlap_err:.2e}"),
    ));
    out.push(Check::new(
        "ancilla_reflection",
        flip_err <= 1e-10,
        format!("max_err={flip_err:.2e}"),
    ));
    out.push(Check::new(
        "ancilla_constraint",
        constraint_err <= 1e-10,
        format!("max_err={constraint_err:.2e}"),
    ));

    // Binary min-entropy and spectra.
    let e0 = AncillaEnsemble::at(Scheme::FourState, 0.1)?;
    let hb = min_entropy_binary(0.5, &e0.states[0], &e0.states[1])?;
    out.push(Check::close(
        "min_entropy_binary_4-state",
        hb,
        0.5539997,
        1e-6,
    ));
    let diff: Matrix = e0.states[0] - e0.states[1];
    let spectrum = eig_hermitian(&diff)?;
    out.push(Check::close(
        "zeta_difference_top_eigenvalue",
        spectrum.eigenvalues[0],
        0.29155,
        1e-5,
    ));

    // Crossovers and thresholds.
    out.push(Check::close(
        "crossover_8v6_shannon",
        eight_vs_six_crossover(Measure::Shannon)?,
        0.1061,
        1e-3,
    ));
    out.push(Check::close(
        "crossover_8v6_min",
        eight_vs_six_crossover(Measure::MinEntropy)?,
        0.0612,
        1e-3,
    ));
    out.push(Check::close(
        "zero_capacity_min_6-state",
        zero_capacity_point(Scheme::SixState, Measure::MinEntropy)?,
        0.0638,
        1e-3,
    ));
    out.push(Check::close(
        "qkd_threshold_plain",
        plain_threshold()?,
        0.156,
        1e-3,
    ));
    out.push(Check::close(
        "qkd_threshold_optimized",
        optimized_threshold()?,
        0.162,
        1e-3,
    ));
    Ok(out)
}

/// Parses `args` (program name first), runs the command and returns the exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(&cli.command, stdout, stderr) {
        Ok(code) => code,
        Err(RunError::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_USAGE
        }
        Err(RunError::Failed(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_FAIL
        }
    }
}

enum RunError {
    Usage(String),
    Failed(String),
}

fn usage(e: Error) -> RunError {
    RunError::Usage(e.to_string())
}

fn failed(e: Error) -> RunError {
    RunError::Failed(e.to_string())
}

fn emit(cfg: &RunConfig, text: &str, stdout: &mut dyn Write) -> std::result::Result<(), RunError> {
    match &cfg.out {
        Some(path) => fs::write(path, text)
            .map_err(|e| RunError::Usage(format!("cannot write {}: {e}", path.display()))),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| RunError::Failed(e.to_string())),
    }
}

const MAIN_GRID: (f64, f64, f64) = (0.0, 1.0 / 3.0, 1.0 / 300.0);

fn execute(
    cmd: &Command,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> std::result::Result<i32, RunError> {
    match cmd {
        Command::Table(a) => {
            let cfg = RunConfig::from_args(a, (0.1, 0.1, 1.0), &Scheme::ALL).map_err(usage)?;
            let mut text = String::new();
            for &b in &cfg.betas {
                text.push_str(&cmd_table(
                    NoiseLevel::new(b).map_err(usage)?,
                    &cfg.measures,
                ));
            }
            if let Some(path) = &cfg.out {
                let csv = cmd_sweep(&cfg).map_err(failed)?;
                fs::write(path, csv).map_err(|e| {
                    RunError::Usage(format!("cannot write {}: {e}", path.display()))
                })?;
            }
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| RunError::Failed(e.to_string()))?;
            Ok(EXIT_OK)
        }
        Command::Sweep(a) => {
            let cfg = RunConfig::from_args(a, MAIN_GRID, &Scheme::ALL).map_err(usage)?;
            let csv = cmd_sweep(&cfg).map_err(failed)?;
            emit(&cfg, &csv, stdout)?;
            Ok(EXIT_OK)
        }
        Command::Verify(a) => {
            let cfg = RunConfig::from_args(a, MAIN_GRID, &Scheme::ALL).map_err(usage)?;
            let checks = verify_checks(cfg.perturb).map_err(failed)?;
            let mut text = String::new();
            for ch in &checks {
                text.push_str(&ch.line());
                text.push('\n');
            }
            let failures = checks.iter().filter(|c| !c.passed).count();
            let _ = writeln!(text, "{} checks, {} failed", checks.len(), failures);
            emit(&cfg, &text, stdout)?;
            Ok(if failures == 0 { EXIT_OK } else { EXIT_FAIL })
        }
        Command::Search(a) => {
            let cfg = RunConfig::from_args(
                a,
                (0.05, 0.2, 0.05),
                &[Scheme::SixState, Scheme::EightState],
            )
            .map_err(usage)?;
            let (text, ok) = cmd_search(&cfg).map_err(failed)?;
            emit(&cfg, &text, stdout)?;
            Ok(if ok { EXIT_OK } else { EXIT_FAIL })
        }
        Command::Noise(a) => {
            let cfg = RunConfig::from_args(a, (0.0, 0.2, 0.002), &Scheme::ALL).map_err(usage)?;
            let (csv, warning) = cmd_noise(&cfg).map_err(usage)?;
            if let Some(w) = warning {
                let _ = writeln!(stderr, "warning: {w}");
            }
            emit(&cfg, &csv, stdout)?;
            Ok(EXIT_OK)
        }
    }
}
