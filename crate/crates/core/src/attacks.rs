//! Leakage of the four attack families and the POVMs that realize them.
//!
//! M1 and M2 target the message bit, K1 and K2 the basis key. Every closed
//! form here has a matching POVM construction so the two can be checked
//! against each other.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;
use std::str::FromStr;

use crate::encodings::{bloch_vector, encoding_angle, state, BlochVector, Scheme};
use crate::entropy::{
    conditional_entropy_from_table, guessing_probability, h2, outcome_table, shannon_entropy,
    shannon_given_povm, Povm, SymmetryGroup,
};
use crate::error::{Error, Result};
use crate::eve::{ancilla_vectors, reflection, six_state_permutation, AncillaEnsemble, NoiseLevel};
use crate::linalg::{c, re, spin_operator, Complex64, Matrix, PureState};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Attack {
    M1,
    M2,
    K1,
    K2,
}

impl Attack {
    pub const ALL: [Attack; 4] = [Attack::M1, Attack::M2, Attack::K1, Attack::K2];

    pub fn name(self) -> &'static str {
        match self {
            Attack::M1 => "M1",
            Attack::M2 => "M2",
            Attack::K1 => "K1",
            Attack::K2 => "K2",
        }
    }
}

impl fmt::Display for Attack {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Attack {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "M1" => Ok(Attack::M1),
            "M2" => Ok(Attack::M2),
            "K1" => Ok(Attack::K1),
            "K2" => Ok(Attack::K2),
            other => Err(Error::InvalidConfig(format!("unknown attack '{other}'"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Measure {
    Shannon,
    MinEntropy,
}

impl Measure {
    pub const ALL: [Measure; 2] = [Measure::Shannon, Measure::MinEntropy];

    pub fn name(self) -> &'static str {
        match self {
            Measure::Shannon => "shannon",
            Measure::MinEntropy => "min",
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Measure {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "shannon" | "s" => Ok(Measure::Shannon),
            "min" | "min-entropy" | "minentropy" => Ok(Measure::MinEntropy),
            other => Err(Error::InvalidConfig(format!("unknown measure '{other}'"))),
        }
    }
}

/// One leakage value per qubit, in bits.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LeakagePoint {
    pub scheme: Scheme,
    pub attack: Attack,
    pub measure: Measure,
    pub beta: f64,
    pub leakage: f64,
}

impl LeakagePoint {
    pub fn compute(scheme: Scheme, attack: Attack, measure: Measure, beta: NoiseLevel) -> Self {
        LeakagePoint {
            scheme,
            attack,
            measure,
            beta: beta.value(),
            leakage: leakage(scheme, attack, measure, beta),
        }
    }
}

/// Leakage of `attack` against `scheme` at noise `beta`.
pub fn leakage(scheme: Scheme, attack: Attack, measure: Measure, beta: NoiseLevel) -> f64 {
    match attack {
        Attack::M1 => m1_leakage(scheme, measure),
        Attack::M2 => m2_leakage(beta, measure),
        Attack::K1 => k1_leakage(scheme, measure, beta),
        Attack::K2 => k2_leakage(scheme, measure, beta),
    }
}

/// Steal-and-measure on the message bit; independent of `β`.
pub fn m1_leakage(scheme: Scheme, measure: Measure) -> f64 {
    let half = match scheme {
        Scheme::FourState => PI / 8.0,
        Scheme::SixState => encoding_angle() / 2.0,
        Scheme::EightState => return 0.0,
    };
    match measure {
        Measure::Shannon => 1.0 - h2(half.sin().powi(2)),
        Measure::MinEntropy => 1.0 + half.cos().powi(2).log2(),
    }
}

/// Error probability of the optimal discrimination of `E_01` vs `E_10`.
pub fn qkd_error_prob(beta: NoiseLevel) -> f64 {
    let b = beta.value();
    0.5 - ((b / 2.0) * (1.0 - 1.5 * b)).sqrt() / (1.0 - b)
}

/// Message leakage with a per-qubit ancilla, equal to the QKD leakage.
pub fn m2_leakage(beta: NoiseLevel, measure: Measure) -> f64 {
    let b = beta.value();
    match measure {
        Measure::Shannon => b + (1.0 - b) * (1.0 - h2(qkd_error_prob(beta))),
        Measure::MinEntropy => (1.0 + 2f64.sqrt() * (b * (1.0 - 1.5 * b)).sqrt() + b).log2(),
    }
}

/// `γ_± = 1/(2√(1+c)) ± 1/(2√(1−c))` for overlap `c`.
pub fn gamma_coefficients(overlap: f64) -> (f64, f64) {
    let a = 0.5 / (1.0 + overlap).sqrt();
    let d = 0.5 / (1.0 - overlap).sqrt();
    (a + d, a - d)
}

/// Eve's optimal measurement of the message bit given direction `v`:
/// `Q_0 = |E_00⟩⟨E_00| + |μ_01⟩⟨μ_01|`, `Q_1 = |E_11⟩⟨E_11| + |μ_10⟩⟨μ_10|`.
pub fn qkd_discrimination_povm(v: &BlochVector, beta: NoiseLevel) -> Result<Povm> {
    let b = beta.value();
    if b <= 0.0 {
        return Err(Error::DegenerateNoise);
    }
    let e = ancilla_vectors(v, beta);
    let overlap = (1.0 - 2.0 * b) / (1.0 - b);
    let (gp, gm) = gamma_coefficients(overlap);
    let combine = |p: &PureState, q: &PureState| -> Vec<Complex64> {
        p.amplitudes()
            .iter()
            .zip(q.amplitudes())
            .map(|(x, y)| x * gp + y * gm)
            .collect()
    };
    let mu01 = combine(&e.e01, &e.e10);
    let mu10 = combine(&e.e10, &e.e01);
    let q0 = e.e00.projector() + Matrix::projector(&mu01)?;
    let q1 = e.e11.projector() + Matrix::projector(&mu10)?;
    Povm::new(vec![q0, q1])
}

/// Per-qubit leakage of an intercepted qubit (K1), before the `3β` scaling.
pub fn k1_constant(scheme: Scheme, measure: Measure) -> f64 {
    let log3 = 3f64.log2();
    match (scheme, measure) {
        (Scheme::FourState, _) => m1_leakage(Scheme::FourState, measure),
        (Scheme::SixState, Measure::Shannon) => {
            let r = 1.0 / (3.0 * 6f64.sqrt());
            log3 - shannon_entropy(&[1.0 / 3.0 + r, 1.0 / 3.0 + r, 1.0 / 3.0 - 2.0 * r])
        }
        (Scheme::SixState, Measure::MinEntropy) => {
            log3 + (1.0 / 3.0 + 2.0 / (3.0 * 6f64.sqrt())).log2()
        }
        (Scheme::EightState, Measure::Shannon) => 2.0 - log3,
        (Scheme::EightState, Measure::MinEntropy) => 1.0,
    }
}

/// `min(3β, 1)` times [`k1_constant`].
pub fn k1_leakage(scheme: Scheme, measure: Measure, beta: NoiseLevel) -> f64 {
    (3.0 * beta.value()).min(1.0) * k1_constant(scheme, measure)
}

/// Qubit POVM for the intercepted state `|ψ_{b,x}⟩` with known plaintext `x`.
pub fn k1_povm(scheme: Scheme, measure: Measure, x: u8) -> Result<Povm> {
    if x > 1 {
        return Err(Error::InvalidConfig(format!(
            "plaintext bit {x} is not 0 or 1"
        )));
    }
    let dirs: Vec<[f64; 3]> = scheme
        .bases()
        .iter()
        .map(|&b| bloch_vector(scheme, b, x).map(|n| n.as_array()))
        .collect::<Result<_>>()?;
    let id = Matrix::identity(2);
    let elements = match scheme {
        Scheme::FourState => {
            // Project along ±(n_b − n_b')/√2.
            (0..2)
                .map(|i| {
                    let (p, q) = (dirs[i], dirs[1 - i]);
                    let m = [0, 1, 2].map(|k| (p[k] - q[k]) * FRAC_1_SQRT_2);
                    (id + spin_operator(m)).scale(0.5)
                })
                .collect()
        }
        Scheme::SixState => {
            let total = [0, 1, 2].map(|k| dirs.iter().map(|d| d[k]).sum::<f64>());
            let sign = match measure {
                Measure::MinEntropy => 1.0,
                Measure::Shannon => -1.0,
            };
            dirs.iter()
                .map(|d| {
                    let n = [0, 1, 2].map(|k| sign * (total[k] - 3.0 * d[k]) / 6f64.sqrt());
                    (id - spin_operator(n)).scale(1.0 / 3.0)
                })
                .collect()
        }
        Scheme::EightState => {
            let g = match measure {
                Measure::MinEntropy => x,
                Measure::Shannon => 1 - x,
            };
            scheme
                .bases()
                .iter()
                .map(|&b| state(scheme, b, g).map(|s| s.projector().scale(0.5)))
                .collect::<Result<_>>()?
        }
    };
    Povm::new(elements)
}

/// Outcome distributions `P[m][b]` of [`k1_povm`] on the intercepted states.
pub fn k1_outcome_table(scheme: Scheme, measure: Measure, x: u8) -> Result<Vec<Vec<f64>>> {
    let povm = k1_povm(scheme, measure, x)?;
    let states: Vec<Matrix> = scheme
        .bases()
        .iter()
        .map(|&b| state(scheme, b, x).map(|s| s.projector()))
        .collect::<Result<_>>()?;
    Ok(outcome_table(&states, &povm))
}

/// Leakage of the K1 measurement computed from its outcome statistics.
pub fn k1_constant_from_povm(scheme: Scheme, measure: Measure, x: u8) -> Result<f64> {
    let table = k1_outcome_table(scheme, measure, x)?;
    let n = scheme.size() as f64;
    Ok(match measure {
        Measure::Shannon => n.log2() - conditional_entropy_from_table(&table),
        Measure::MinEntropy => {
            let guess: f64 = (0..table.len()).map(|i| table[i][i]).sum::<f64>() / n;
            n.log2() + guess.log2()
        }
    })
}

/// `P M* P` for every element: the POVM of the reflected (`v → −v`) ensemble.
pub fn dual_povm(povm: &Povm) -> Povm {
    let p = reflection();
    povm.map(|m| m.conj().sandwich(&p))
}

fn m(i: usize) -> [Complex64; 4] {
    let mut v = [re(0.0); 4];
    v[i] = re(1.0);
    v
}

fn lin(terms: &[(Complex64, [Complex64; 4])]) -> [Complex64; 4] {
    let mut v = [re(0.0); 4];
    for (coef, basis) in terms {
        for k in 0..4 {
            v[k] += coef * basis[k];
        }
    }
    v
}

fn proj(v: &[Complex64; 4]) -> Matrix {
    Matrix::projector(v).expect("dimension 4")
}

fn orbit(seed: Matrix, group: SymmetryGroup) -> Povm {
    let elements = group.unitaries().iter().map(|u| seed.sandwich(u)).collect();
    Povm::from_elements_unchecked(elements).with_symmetry(group)
}

/// 4-state known-plaintext POVM (same for both measures).
fn k2_four_state() -> Povm {
    let h = FRAC_1_SQRT_2;
    let g1 = lin(&[(re(h), m(0)), (re(0.5), m(3)), (re(-0.5), m(1))]);
    let g3 = lin(&[(re(h), m(0)), (re(-0.5), m(3)), (re(0.5), m(1))]);
    let g2 = lin(&[(re(h), m(2)), (c(0.0, 0.5), m(1)), (c(0.0, 0.5), m(3))]);
    let g4 = lin(&[(re(h), m(2)), (c(0.0, -0.5), m(1)), (c(0.0, -0.5), m(3))]);
    Povm::from_elements_unchecked(vec![proj(&g1) + proj(&g2), proj(&g3) + proj(&g4)])
}

/// 6-state min-entropy POVM; `M_1 = S M_3 S†`, `M_2 = S M_1 S†`.
fn k2_six_state_min(beta: f64) -> Povm {
    let b = beta;
    let d = 3.0 - 4.0 * b;
    let s6 = 6f64.sqrt();
    let s3 = 3f64.sqrt();
    let q = lin(&[
        (re(-((1.0 - b) / d).sqrt()), m(0)),
        (re((2.0 - 3.0 * b).sqrt() / d.sqrt() / s6), m(1)),
        (re((2.0 - 3.0 * b).sqrt() / d.sqrt() / s6), m(2)),
        (re(-2.0 * (2.0 - 3.0 * b).sqrt() / d.sqrt() / s6), m(3)),
    ]);
    let r0 = (1.0 - b).sqrt() / s3;
    let r1 = b.sqrt() * FRAC_1_SQRT_2;
    let r = lin(&[(c(r0, r1), m(1)), (c(r0, -r1), m(2)), (re(r0), m(3))]);
    let m3 = proj(&q).scale(d / (3.0 * (1.0 - b))) + proj(&r).scale(1.0 / (3.0 * (1.0 - b)));
    let s = six_state_permutation();
    let m1 = m3.sandwich(&s);
    let m2 = m1.sandwich(&s);
    Povm::from_elements_unchecked(vec![m1, m2, m3]).with_symmetry(SymmetryGroup::SixStateCyclic)
}

/// 8-state min-entropy POVM, seeded at `M_00` and spread by `D_uw`.
fn k2_eight_state_min(beta: f64) -> Povm {
    let seed = if beta <= 1.0 / 3.0 {
        proj(&[re(0.5); 4])
    } else {
        let b = beta;
        let a0 = (b / 2.0).sqrt() / (1.0 - b).sqrt();
        let a1 = (1.0 - 1.5 * b).sqrt() / (1.0 - b).sqrt() / 3f64.sqrt();
        let a = [re(a0), re(a1), re(a1), re(a1)];
        let s3 = 3f64.sqrt().recip();
        let d = [
            re(0.0),
            Complex64::from_polar(s3, PI / 3.0),
            Complex64::from_polar(s3, -PI / 3.0),
            re(-s3),
        ];
        proj(&a).scale((1.0 - b) / (2.0 * b)) + proj(&d).scale((3.0 * b - 1.0) / (2.0 * b))
    };
    orbit(seed, SymmetryGroup::EightStatePauli)
}

/// Known-plaintext (K2) POVM for `scheme`, attaining the K2 leakage in `measure`.
///
/// Shannon POVMs for the 6- and 8-state schemes are the reflections
/// ([`dual_povm`]) of the min-entropy ones. The 8-state construction
/// switches branch at `β = 1/3`.
pub fn k2_povm(scheme: Scheme, measure: Measure, beta: NoiseLevel) -> Povm {
    let b = beta.value();
    match (scheme, measure) {
        (Scheme::FourState, _) => k2_four_state(),
        (Scheme::SixState, Measure::MinEntropy) => k2_six_state_min(b),
        (Scheme::SixState, Measure::Shannon) => dual_povm(&k2_six_state_min(b)),
        (Scheme::EightState, Measure::MinEntropy) => k2_eight_state_min(b),
        (Scheme::EightState, Measure::Shannon) => dual_povm(&k2_eight_state_min(b)),
    }
}

/// Correct-guess probability `p_6` of the 6-state Shannon POVM.
pub fn p6(beta: NoiseLevel) -> f64 {
    let b = beta.value();
    1.0 / 3.0 - 2.0 * 2f64.sqrt() / (3.0 * 3f64.sqrt()) * (b * (1.0 - b)).sqrt()
}

/// Correct-guess probability `p_8` of the 8-state Shannon POVM (`β ≤ 1/3`).
pub fn p8(beta: NoiseLevel) -> f64 {
    let b = beta.value();
    (0.25 - 6f64.sqrt() / 4.0 * (b * (1.0 - 1.5 * b)).max(0.0).sqrt()).max(0.0)
}

/// Optimal guessing probability of the basis in the K2 setting.
pub fn k2_guessing_probability(scheme: Scheme, beta: NoiseLevel) -> f64 {
    let b = beta.value();
    match scheme {
        Scheme::FourState => 0.5 * (1.0 + (b * (1.0 - 1.5 * b)).sqrt() + b * FRAC_1_SQRT_2),
        Scheme::SixState => (1.0 + 2.0 * 2f64.sqrt() / 3f64.sqrt() * (b * (1.0 - b)).sqrt()) / 3.0,
        Scheme::EightState if b <= 1.0 / 3.0 => {
            (1.0 + 6f64.sqrt() * (b * (1.0 - 1.5 * b)).sqrt()) / 4.0
        }
        Scheme::EightState => 0.5,
    }
}

/// Residual Shannon entropy `H(B|ζ_B)` under the K2 POVM, closed form.
pub fn k2_residual_shannon(scheme: Scheme, beta: NoiseLevel) -> f64 {
    let log3 = 3f64.log2();
    match scheme {
        Scheme::FourState => h2(k2_guessing_probability(scheme, beta)),
        Scheme::SixState => {
            let p = p6(beta);
            h2(p) + (1.0 - p)
        }
        Scheme::EightState if beta.value() <= 1.0 / 3.0 => {
            let p = p8(beta);
            h2(p) + (1.0 - p) * log3
        }
        Scheme::EightState => log3,
    }
}

/// Known-plaintext leakage per qubit with a per-qubit ancilla.
pub fn k2_leakage(scheme: Scheme, measure: Measure, beta: NoiseLevel) -> f64 {
    let n = (scheme.size() as f64).log2();
    match measure {
        Measure::MinEntropy => n + k2_guessing_probability(scheme, beta).log2(),
        Measure::Shannon => n - k2_residual_shannon(scheme, beta),
    }
}

/// Leakage evaluated by applying [`k2_povm`] to the ensemble `ζ_B`.
pub fn k2_leakage_from_povm(scheme: Scheme, measure: Measure, beta: NoiseLevel) -> Result<f64> {
    let ens = AncillaEnsemble::new(scheme, beta, 0)?;
    let povm = k2_povm(scheme, measure, beta);
    let n = (scheme.size() as f64).log2();
    Ok(match measure {
        Measure::MinEntropy => n + guessing_probability(&ens, &povm)?.log2(),
        Measure::Shannon => n - shannon_given_povm(&ens, &povm)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::{holevo_certificate, holevo_certificate_for};

    fn nl(b: f64) -> NoiseLevel {
        NoiseLevel::new(b).unwrap()
    }

    #[test]
    fn m1_values() {
        assert!((m1_leakage(Scheme::FourState, Measure::Shannon) - 0.399).abs() < 5e-4);
        assert!((m1_leakage(Scheme::FourState, Measure::MinEntropy) - 0.772).abs() < 5e-4);
        assert!((m1_leakage(Scheme::SixState, Measure::Shannon) - 0.256).abs() < 5e-4);
        assert!((m1_leakage(Scheme::SixState, Measure::MinEntropy) - 0.658).abs() < 5e-4);
        assert_eq!(m1_leakage(Scheme::EightState, Measure::Shannon), 0.0);
        assert_eq!(m1_leakage(Scheme::EightState, Measure::MinEntropy), 0.0);
    }

    #[test]
    fn qkd_error_probability() {
        assert_eq!(qkd_error_prob(nl(0.0)), 0.5);
        assert!((qkd_error_prob(nl(1.0 / 3.0)) - 0.0669873).abs() < 1e-7);
        assert!((qkd_error_prob(nl(0.1)) - 0.2709386).abs() < 1e-7);
        assert!(qkd_error_prob(nl(0.5)).abs() < 1e-15);
    }

    #[test]
    fn m2_values() {
        for m in Measure::ALL {
            assert_eq!(m2_leakage(nl(0.0), m), 0.0);
        }
        assert!((m2_leakage(nl(0.1), Measure::Shannon) - 0.2414726).abs() < 1e-7);
        assert!((m2_leakage(nl(0.1), Measure::MinEntropy) - 0.5967544).abs() < 1e-7);
    }

    #[test]
    fn qkd_povm_statistics() {
        let v = BlochVector::normalized(0.3, 0.5, -0.2).unwrap();
        let povm = qkd_discrimination_povm(&v, nl(0.2)).unwrap();
        let e = ancilla_vectors(&v, nl(0.2));
        let err = povm.elements()[1].trace_product_re(&e.e01.projector());
        assert!((err - qkd_error_prob(nl(0.2))).abs() < 1e-12);
        assert!((err - 0.1692811).abs() < 1e-7);
        assert!((povm.elements()[0].trace_product_re(&e.e00.projector()) - 1.0).abs() < 1e-12);
        assert!(
            povm.elements()[1]
                .trace_product_re(&e.e00.projector())
                .abs()
                < 1e-12
        );
        assert!((povm.elements()[1].trace_product_re(&e.e11.projector()) - 1.0).abs() < 1e-12);
        assert!(matches!(
            qkd_discrimination_povm(&v, nl(0.0)),
            Err(Error::DegenerateNoise)
        ));
    }

    #[test]
    fn qkd_povm_complete_for_random_directions() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let v = BlochVector::normalized(
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
            )
            .unwrap();
            let p = qkd_discrimination_povm(&v, nl(0.3)).unwrap();
            assert!(p.completeness_gap() < 1e-10);
        }
    }

    #[test]
    fn k1_constants() {
        let want = [
            (Scheme::FourState, 0.399, 0.772),
            (Scheme::SixState, 0.314, 0.861),
            (Scheme::EightState, 0.415, 1.0),
        ];
        for (s, sh, mi) in want {
            assert!((k1_constant(s, Measure::Shannon) - sh).abs() < 5e-4);
            assert!((k1_constant(s, Measure::MinEntropy) - mi).abs() < 5e-4);
        }
        assert!((k1_constant(Scheme::SixState, Measure::Shannon) - 0.314067).abs() < 1e-6);
        assert!((k1_constant(Scheme::SixState, Measure::MinEntropy) - 0.861159).abs() < 1e-6);
    }

    #[test]
    fn k1_scaling() {
        assert_eq!(
            k1_leakage(Scheme::EightState, Measure::MinEntropy, nl(1.0 / 3.0)),
            1.0
        );
        let v = k1_leakage(Scheme::SixState, Measure::Shannon, nl(0.1));
        assert!((v - 0.3 * k1_constant(Scheme::SixState, Measure::Shannon)).abs() < 1e-15);
        assert!((v - 0.0942202).abs() < 1e-6);
        for s in Scheme::ALL {
            for m in Measure::ALL {
                assert_eq!(k1_leakage(s, m, nl(0.0)), 0.0);
                assert_eq!(k1_leakage(s, m, nl(0.45)), k1_constant(s, m));
            }
        }
    }

    #[test]
    fn k1_povms_reproduce_constants() {
        for s in Scheme::ALL {
            for m in Measure::ALL {
                for x in 0..2 {
                    let v = k1_constant_from_povm(s, m, x).unwrap();
                    assert!((v - k1_constant(s, m)).abs() < 1e-12, "{s} {m} {x}: {v}");
                }
            }
        }
    }

    #[test]
    fn k1_six_state_distributions() {
        let r = 1.0 / (3.0 * 6f64.sqrt());
        let t = k1_outcome_table(Scheme::SixState, Measure::MinEntropy, 0).unwrap();
        let col: Vec<f64> = t.iter().map(|row| row[0]).collect();
        for (a, b) in col
            .iter()
            .zip([1.0 / 3.0 + 2.0 * r, 1.0 / 3.0 - r, 1.0 / 3.0 - r])
        {
            assert!((a - b).abs() < 1e-12);
        }
        let t = k1_outcome_table(Scheme::SixState, Measure::Shannon, 0).unwrap();
        let col: Vec<f64> = t.iter().map(|row| row[2]).collect();
        for (a, b) in col
            .iter()
            .zip([1.0 / 3.0 + r, 1.0 / 3.0 + r, 1.0 / 3.0 - 2.0 * r])
        {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn k2_povms_are_valid() {
        for k in 0..=50 {
            let b = nl(0.5 * k as f64 / 50.0);
            for s in Scheme::ALL {
                for m in Measure::ALL {
                    let p = k2_povm(s, m, b);
                    p.validate(1e-9)
                        .unwrap_or_else(|e| panic!("{s} {m} {b:?}: {e}"));
                }
            }
        }
    }

    #[test]
    fn k2_examples() {
        let ens = AncillaEnsemble::at(Scheme::EightState, 0.2).unwrap();
        let p = k2_povm(Scheme::EightState, Measure::MinEntropy, nl(0.2));
        assert!((guessing_probability(&ens, &p).unwrap() - 0.47913).abs() < 1e-5);
        let ens = AncillaEnsemble::at(Scheme::EightState, 0.1).unwrap();
        let p = k2_povm(Scheme::EightState, Measure::MinEntropy, nl(0.1));
        assert!((guessing_probability(&ens, &p).unwrap() - 0.42854).abs() < 1e-5);
        let ens = AncillaEnsemble::at(Scheme::FourState, 0.1).unwrap();
        let p = k2_povm(Scheme::FourState, Measure::MinEntropy, nl(0.1));
        assert!((guessing_probability(&ens, &p).unwrap() - 0.68113).abs() < 1e-5);

        let ens = AncillaEnsemble::at(Scheme::SixState, 0.1).unwrap();
        let q = k2_povm(Scheme::SixState, Measure::Shannon, nl(0.1));
        let ok = q.elements()[2].trace_product_re(&ens.states[2]);
        assert!((ok - p6(nl(0.1))).abs() < 1e-12);
        assert!((ok - 0.1700340).abs() < 1e-7);
        assert!((shannon_given_povm(&ens, &q).unwrap() - 1.4877486).abs() < 1e-7);

        let ens = AncillaEnsemble::at(Scheme::EightState, 1.0 / 3.0).unwrap();
        let r = k2_povm(Scheme::EightState, Measure::Shannon, nl(1.0 / 3.0));
        let t = outcome_table(&ens.states, &r);
        let mut col: Vec<f64> = t.iter().map(|row| row[0]).collect();
        col.sort_by(f64::total_cmp);
        for (a, b) in col.iter().zip([0.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0]) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn k2_closed_forms_at_a_tenth() {
        let b = nl(0.1);
        assert!((k2_leakage(Scheme::FourState, Measure::Shannon, b) - 0.0968507).abs() < 1e-7);
        assert!((k2_leakage(Scheme::SixState, Measure::Shannon, b) - 0.0972139).abs() < 1e-7);
        assert!((k2_leakage(Scheme::EightState, Measure::Shannon, b) - 0.1569412).abs() < 1e-7);
        assert!((k2_leakage(Scheme::EightState, Measure::MinEntropy, b) - 0.7774873).abs() < 1e-7);
        assert_eq!(
            k2_leakage(Scheme::EightState, Measure::MinEntropy, nl(0.4)),
            1.0
        );
    }

    #[test]
    fn closed_forms_match_povms() {
        for k in 0..50 {
            let beta = 0.5 * k as f64 / 49.0;
            for s in Scheme::ALL {
                for m in Measure::ALL {
                    let a = k2_leakage(s, m, nl(beta));
                    let b = k2_leakage_from_povm(s, m, nl(beta)).unwrap();
                    assert!((a - b).abs() < 1e-9, "{s} {m} {beta}: {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn min_entropy_povms_certified() {
        for k in 0..50 {
            let beta = 0.5 * k as f64 / 49.0;
            for s in Scheme::ALL {
                let e = AncillaEnsemble::at(s, beta).unwrap();
                let p = k2_povm(s, Measure::MinEntropy, nl(beta));
                let r = holevo_certificate(&e, &p, 1e-9);
                assert!(r.passed, "{s} {beta}: {r:?}");
            }
        }
    }

    #[test]
    fn shannon_povms_certified_on_reflected_ensemble() {
        for beta in [0.05, 0.2, 0.3, 0.4, 0.5] {
            for s in [Scheme::SixState, Scheme::EightState] {
                let e = AncillaEnsemble::new(s, nl(beta), 1).unwrap();
                let p = k2_povm(s, Measure::Shannon, nl(beta));
                assert!(holevo_certificate_for(&e.states, &p, 1e-9).passed);
            }
        }
    }

    #[test]
    fn low_noise_eight_state_povm_fails_above_one_third() {
        let e = AncillaEnsemble::at(Scheme::EightState, 0.4).unwrap();
        let p = k2_povm(Scheme::EightState, Measure::MinEntropy, nl(0.2));
        let r = holevo_certificate(&e, &p, 1e-9);
        assert!(!r.passed);
        assert!((r.min_eigenvalue + 0.037).abs() < 1e-3);
    }

    #[test]
    fn boundaries() {
        let third = nl(1.0 / 3.0);
        for m in Measure::ALL {
            let lo = k2_povm(Scheme::EightState, m, nl(1.0 / 3.0 - 1e-12));
            let hi = k2_povm(Scheme::EightState, m, nl(1.0 / 3.0 + 1e-12));
            assert!(lo.max_diff(&hi) < 1e-9);
            for s in Scheme::ALL {
                let at_half = k2_leakage(s, m, nl(0.5));
                assert!((at_half - k1_constant(s, m)).abs() < 1e-9, "{s} {m}");
                assert!(k2_leakage(s, m, third) <= k1_constant(s, m) + 1e-12);
            }
        }
    }

    #[test]
    fn plaintext_one_gives_same_leakage() {
        for beta in [0.07, 0.25, 0.45] {
            for s in Scheme::ALL {
                let e1 = AncillaEnsemble::new(s, nl(beta), 1).unwrap();
                let n = (s.size() as f64).log2();
                let pm = dual_povm(&k2_povm(s, Measure::MinEntropy, nl(beta)));
                let g = guessing_probability(&e1, &pm).unwrap();
                assert!(
                    (n + g.log2() - k2_leakage(s, Measure::MinEntropy, nl(beta))).abs() < 1e-10
                );
                let ps = dual_povm(&k2_povm(s, Measure::Shannon, nl(beta)));
                let h = shannon_given_povm(&e1, &ps).unwrap();
                assert!((n - h - k2_leakage(s, Measure::Shannon, nl(beta))).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn parsing() {
        assert_eq!("k2".parse::<Attack>().unwrap(), Attack::K2);
        assert_eq!("min".parse::<Measure>().unwrap(), Measure::MinEntropy);
        assert!("x".parse::<Measure>().is_err());
        assert!("M3".parse::<Attack>().is_err());
    }
}
