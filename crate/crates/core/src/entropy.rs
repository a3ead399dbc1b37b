//! Entropy functionals and the Holevo optimality certificate.

use crate::error::{Error, Result};
use crate::eve::AncillaEnsemble;
use crate::linalg::{eig_hermitian, jacobi, trace_norm, Matrix, PSD_TOL};

/// Outcome probabilities at or below this are treated as zero.
pub const PROB_FLOOR: f64 = 1e-15;

/// `h(p)` without range checks; `h(0) = h(1) = 0`.
#[inline]
pub(crate) fn h2(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        0.0
    } else {
        -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
    }
}

/// Binary entropy in bits.
pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::ProbabilityOutOfRange(p));
    }
    Ok(h2(p))
}

/// `Σ p log 1/p` with tiny and negative rounding residue dropped.
pub fn shannon_entropy(probs: &[f64]) -> f64 {
    probs
        .iter()
        .map(|&p| p.max(0.0))
        .filter(|&p| p > PROB_FLOOR)
        .map(|p| -p * p.log2())
        .sum()
}

/// A finite probability distribution.
#[derive(Clone, Debug, PartialEq)]
pub struct Distribution {
    probs: Vec<f64>,
}

impl Distribution {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        for &p in &probs {
            if !(-1e-12..=1.0 + 1e-12).contains(&p) {
                return Err(Error::ProbabilityOutOfRange(p));
            }
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-10 {
            return Err(Error::ProbabilityOutOfRange(total));
        }
        Ok(Distribution { probs })
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probs
    }

    pub fn entropy(&self) -> f64 {
        shannon_entropy(&self.probs)
    }

    pub fn max(&self) -> f64 {
        self.probs.iter().copied().fold(0.0, f64::max)
    }
}

/// Symmetry group acting on POVM outcomes by unitary conjugation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SymmetryGroup {
    /// Order-3 cyclic `S` conjugation on three outcomes.
    SixStateCyclic,
    /// Order-4 sign-flip group `{D_uw}` on four outcomes.
    EightStatePauli,
}

impl SymmetryGroup {
    pub fn outcomes(self) -> usize {
        match self {
            SymmetryGroup::SixStateCyclic => 3,
            SymmetryGroup::EightStatePauli => 4,
        }
    }

    /// Unitaries `U_x` with `M_x = U_x M_0 U_x†`.
    pub fn unitaries(self) -> Vec<Matrix> {
        use crate::encodings::Basis;
        use crate::eve::{eight_state_sign, six_state_permutation};
        match self {
            SymmetryGroup::SixStateCyclic => {
                let s = six_state_permutation();
                vec![Matrix::identity(4), s, s * s]
            }
            SymmetryGroup::EightStatePauli => (0..4).map(|b| eight_state_sign(Basis(b))).collect(),
        }
    }
}

/// A POVM: PSD elements summing to the identity.
#[derive(Clone, Debug, PartialEq)]
pub struct Povm {
    elements: Vec<Matrix>,
    symmetry: Option<SymmetryGroup>,
}

/// Completeness tolerance used by [`Povm::new`].
pub const POVM_TOL: f64 = 1e-9;

impl Povm {
    /// Validates each element PSD within 1e-9 and `Σ M_x = 𝟙` within 1e-9.
    pub fn new(elements: Vec<Matrix>) -> Result<Self> {
        let p = Povm {
            elements,
            symmetry: None,
        };
        p.validate(POVM_TOL)?;
        Ok(p)
    }

    pub(crate) fn from_elements_unchecked(elements: Vec<Matrix>) -> Self {
        Povm {
            elements,
            symmetry: None,
        }
    }

    pub fn with_symmetry(mut self, group: SymmetryGroup) -> Self {
        self.symmetry = Some(group);
        self
    }

    pub fn symmetry(&self) -> Option<SymmetryGroup> {
        self.symmetry
    }

    pub fn elements(&self) -> &[Matrix] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.elements.first().map_or(0, |m| m.dim())
    }

    /// Largest deviation of `Σ M_x` from the identity.
    pub fn completeness_gap(&self) -> f64 {
        let mut sum = Matrix::zeros(self.dim());
        for m in &self.elements {
            sum += *m;
        }
        sum.max_diff(&Matrix::identity(self.dim()))
    }

    pub fn validate(&self, tol: f64) -> Result<()> {
        if self.elements.len() < 2 {
            return Err(Error::InvalidPovm("need at least two outcomes".into()));
        }
        let dim = self.elements[0].dim();
        for (i, m) in self.elements.iter().enumerate() {
            if m.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: m.dim(),
                });
            }
            let gap = m.hermiticity_gap();
            if gap > tol {
                return Err(Error::InvalidPovm(format!(
                    "element {i} not Hermitian ({gap:.3e})"
                )));
            }
            let low = jacobi(m).values[dim - 1];
            if low < -tol {
                return Err(Error::InvalidPovm(format!(
                    "element {i} has eigenvalue {low:.3e}"
                )));
            }
        }
        let gap = self.completeness_gap();
        if gap > tol {
            return Err(Error::InvalidPovm(format!(
                "elements sum to identity only within {gap:.3e}"
            )));
        }
        Ok(())
    }

    /// Max-norm distance between matching elements.
    pub fn max_diff(&self, other: &Povm) -> f64 {
        assert_eq!(self.len(), other.len(), "outcome count mismatch");
        self.elements
            .iter()
            .zip(&other.elements)
            .map(|(a, b)| a.max_diff(b))
            .fold(0.0, f64::max)
    }

    /// Applies `f` to every element, keeping the symmetry tag.
    pub fn map(&self, f: impl Fn(&Matrix) -> Matrix) -> Povm {
        Povm {
            elements: self.elements.iter().map(f).collect(),
            symmetry: self.symmetry,
        }
    }
}

fn check_shapes(ensemble: &AncillaEnsemble, povm: &Povm) -> Result<()> {
    if povm.len() != ensemble.len() {
        return Err(Error::DimensionMismatch {
            expected: ensemble.len(),
            got: povm.len(),
        });
    }
    if povm.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            got: povm.dim(),
        });
    }
    Ok(())
}

/// `P[x][b] = tr[M_x ζ_b]`, the outcome distribution conditioned on each basis.
pub fn outcome_table(states: &[Matrix], povm: &Povm) -> Vec<Vec<f64>> {
    povm.elements()
        .iter()
        .map(|m| states.iter().map(|z| m.trace_product_re(z)).collect())
        .collect()
}

/// `H(B | X)` for a uniform prior on the rows of an outcome table.
pub fn conditional_entropy_from_table(table: &[Vec<f64>]) -> f64 {
    let nb = table.first().map_or(0, |r| r.len()) as f64;
    let mut joint = 0.0;
    let mut marginal = 0.0;
    for row in table {
        let px: f64 = row.iter().map(|p| p.max(0.0)).sum::<f64>() / nb;
        if px > PROB_FLOOR {
            marginal -= px * px.log2();
        }
        for &p in row {
            let q = p.max(0.0) / nb;
            if q > PROB_FLOOR {
                joint -= q * q.log2();
            }
        }
    }
    (joint - marginal).max(0.0)
}

/// Eve's residual Shannon entropy `H(B | ℳ(ζ_B))` for a given POVM.
pub fn shannon_given_povm(ensemble: &AncillaEnsemble, povm: &Povm) -> Result<f64> {
    check_shapes(ensemble, povm)?;
    Ok(conditional_entropy_from_table(&outcome_table(
        &ensemble.states,
        povm,
    )))
}

/// `h(p_ok) + (1 − p_ok) log(n − 1)`, the value for a symmetric POVM.
pub fn symmetric_shannon(p_ok: f64, outcomes: usize) -> f64 {
    h2(p_ok) + (1.0 - p_ok) * ((outcomes - 1) as f64).log2()
}

/// `(1/|ℬ|) Σ_b tr[M_b ζ_b]`.
pub fn guessing_probability(ensemble: &AncillaEnsemble, povm: &Povm) -> Result<f64> {
    check_shapes(ensemble, povm)?;
    Ok(guess_raw(&ensemble.states, povm.elements()))
}

pub(crate) fn guess_raw(states: &[Matrix], elements: &[Matrix]) -> f64 {
    let s: f64 = states
        .iter()
        .zip(elements)
        .map(|(z, m)| m.trace_product_re(z))
        .sum();
    s / states.len() as f64
}

fn check_density(rho: &Matrix, name: &str) -> Result<()> {
    let gap = rho.hermiticity_gap();
    if gap > 1e-10 {
        return Err(Error::NotDensity(format!(
            "{name} not Hermitian ({gap:.3e})"
        )));
    }
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > 1e-10 || tr.im.abs() > 1e-10 {
        return Err(Error::NotDensity(format!("{name} has trace {}", tr.re)));
    }
    let low = jacobi(rho).values[rho.dim() - 1];
    if low < -PSD_TOL {
        return Err(Error::NotDensity(format!(
            "{name} has eigenvalue {low:.3e}"
        )));
    }
    Ok(())
}

/// `1 − log(1 + tr|p₀ρ₀ − p₁ρ₁|)`.
pub fn min_entropy_binary(p0: f64, rho0: &Matrix, rho1: &Matrix) -> Result<f64> {
    if !(0.0..=1.0).contains(&p0) {
        return Err(Error::ProbabilityOutOfRange(p0));
    }
    if rho0.dim() != rho1.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho0.dim(),
            got: rho1.dim(),
        });
    }
    check_density(rho0, "rho0")?;
    check_density(rho1, "rho1")?;
    let diff = rho0.scale(p0) - rho1.scale(1.0 - p0);
    Ok(1.0 - (1.0 + trace_norm(&diff.hermitian_part())?).log2())
}

/// Projector onto the nonnegative part of `p₀ρ₀ − p₁ρ₁` and its complement.
pub fn helstrom_povm(p0: f64, rho0: &Matrix, rho1: &Matrix) -> Result<Povm> {
    let diff = (rho0.scale(p0) - rho1.scale(1.0 - p0)).hermitian_part();
    let s = eig_hermitian(&diff)?;
    let mut plus = Matrix::zeros(diff.dim());
    for (l, v) in s.eigenvalues.iter().zip(&s.eigenvectors) {
        if *l >= 0.0 {
            plus += v.projector();
        }
    }
    Povm::new(vec![plus, Matrix::identity(diff.dim()) - plus])
}

/// Weighted guessing probability `Σ_x p_x tr[M_x ρ_x]`.
pub fn weighted_guess(priors: &[f64], states: &[Matrix], povm: &Povm) -> f64 {
    priors
        .iter()
        .zip(states)
        .zip(povm.elements())
        .map(|((p, r), m)| p * m.trace_product_re(r))
        .sum()
}

/// Outcome of [`holevo_certificate`].
#[derive(Clone, Debug, PartialEq)]
pub struct HolevoReport {
    pub passed: bool,
    /// Smallest eigenvalue over all `Λ − ζ_b`.
    pub min_eigenvalue: f64,
    /// `max |Λ − Λ†|`.
    pub hermiticity_gap: f64,
    pub per_basis: Vec<f64>,
}

/// `Λ = Σ_b ζ_b M_b`.
pub fn holevo_operator(states: &[Matrix], povm: &Povm) -> Matrix {
    let mut lambda = Matrix::zeros(povm.dim());
    for (z, m) in states.iter().zip(povm.elements()) {
        lambda += *z * *m;
    }
    lambda
}

/// Checks `Λ − ζ_b ⪰ 0` for every `b` and that `Λ` is Hermitian, both within `tol`.
pub fn holevo_certificate(ensemble: &AncillaEnsemble, povm: &Povm, tol: f64) -> HolevoReport {
    holevo_certificate_for(&ensemble.states, povm, tol)
}

pub fn holevo_certificate_for(states: &[Matrix], povm: &Povm, tol: f64) -> HolevoReport {
    if states.len() != povm.len() || states.iter().any(|z| z.dim() != povm.dim()) {
        return HolevoReport {
            passed: false,
            min_eigenvalue: f64::NEG_INFINITY,
            hermiticity_gap: f64::INFINITY,
            per_basis: Vec::new(),
        };
    }
    let lambda = holevo_operator(states, povm);
    let gap = lambda.hermiticity_gap();
    let lh = lambda.hermitian_part();
    let per_basis: Vec<f64> = states
        .iter()
        .map(|z| jacobi(&(lh - *z)).values[z.dim() - 1])
        .collect();
    let min_eigenvalue = per_basis.iter().copied().fold(f64::INFINITY, f64::min);
    HolevoReport {
        passed: gap <= tol && min_eigenvalue >= -tol,
        min_eigenvalue,
        hermiticity_gap: gap,
        per_basis,
    }
}
