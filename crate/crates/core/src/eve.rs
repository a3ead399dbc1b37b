//! Eve's view of a single qubit position: the symmetrized Bell-diagonal AB
//! state, its purification, the conditional ancilla vectors and the
//! known-plaintext ensembles `ζ_b`.

use crate::encodings::{bloch_vector, measurement_basis, Basis, BlochVector, Scheme};
use crate::error::{Error, Result};
use crate::linalg::{c, re, Complex64, Matrix, PureState};

/// Bit error rate `β ∈ [0, 1/2]`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct NoiseLevel(f64);

impl NoiseLevel {
    pub fn new(beta: f64) -> Result<Self> {
        if !(0.0..=0.5).contains(&beta) {
            return Err(Error::NoiseOutOfRange(beta));
        }
        Ok(NoiseLevel(beta))
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for NoiseLevel {
    type Error = Error;
    fn try_from(beta: f64) -> Result<Self> {
        NoiseLevel::new(beta)
    }
}

/// Weights on `(|Ψ−⟩, |Φ−⟩, |Ψ+⟩, |Φ+⟩)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BellMixture {
    pub weights: [f64; 4],
}

impl BellMixture {
    pub fn symmetric(beta: NoiseLevel) -> Self {
        let b = beta.value();
        BellMixture {
            weights: [1.0 - 1.5 * b, b / 2.0, b / 2.0, b / 2.0],
        }
    }

    pub fn density(&self) -> Matrix {
        let mut rho = Matrix::zeros(4);
        for (w, s) in self.weights.iter().zip(bell_states()) {
            rho += s.projector().scale(*w);
        }
        rho
    }
}

/// `(|Ψ−⟩, |Φ−⟩, |Ψ+⟩, |Φ+⟩)` in the `|ab⟩` basis with index `2a + b`.
pub fn bell_states() -> [PureState; 4] {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let z = re(0.0);
    let mk = |v: [Complex64; 4]| PureState::new(v.to_vec()).expect("Bell state");
    [
        mk([z, re(h), re(-h), z]),
        mk([re(h), z, z, re(-h)]),
        mk([z, re(h), re(h), z]),
        mk([re(h), z, z, re(h)]),
    ]
}

/// The Bell-diagonal AB state left after noise symmetrization.
pub fn symmetrized_ab(beta: NoiseLevel) -> Matrix {
    BellMixture::symmetric(beta).density()
}

/// `(⟨ψψ| ρ |ψψ⟩)` for a product of two copies of the same qubit state.
pub fn same_outcome_weight(rho: &Matrix, psi: &PureState) -> f64 {
    psi.kron(psi).expectation(rho).re
}

/// Eve's four conditional ancilla states for measurement direction `v`.
#[derive(Clone, Debug, PartialEq)]
pub struct AncillaVectors {
    pub v: BlochVector,
    pub e00: PureState,
    pub e01: PureState,
    pub e10: PureState,
    pub e11: PureState,
}

impl AncillaVectors {
    pub fn get(&self, x: u8, y: u8) -> &PureState {
        match (x & 1, y & 1) {
            (0, 0) => &self.e00,
            (0, 1) => &self.e01,
            (1, 0) => &self.e10,
            _ => &self.e11,
        }
    }
}

/// Ancilla vectors `E^v_{xy}` over `(m_0, m_1, m_2, m_3)`.
///
/// On the poles (`v_x = v_y = 0`) the `E_00`/`E_11` pair uses the `φ = 0`
/// continuous limit.
pub fn ancilla_vectors(v: &BlochVector, beta: NoiseLevel) -> AncillaVectors {
    let b = beta.value();
    let k = (1.0 - 1.5 * b).sqrt();
    let s = (b / 2.0).sqrt();
    let n = (1.0 - b).sqrt();
    let (vx, vy, vz) = (v.x, v.y, v.z);
    let e01 = vec![re(k / n), re(s * vx / n), re(s * vy / n), re(s * vz / n)];
    let e10 = vec![re(k / n), re(-s * vx / n), re(-s * vy / n), re(-s * vz / n)];

    let h = std::f64::consts::FRAC_1_SQRT_2;
    let rho = vx.hypot(vy);
    let (e00, e11) = if rho == 0.0 {
        let sx = if vz > 0.0 { -h } else { h };
        (
            vec![re(0.0), re(sx), c(0.0, h), re(0.0)],
            vec![re(0.0), re(sx), c(0.0, -h), re(0.0)],
        )
    } else {
        let a = h / rho;
        (
            vec![
                re(0.0),
                c(-vx * vz * a, -vy * a),
                c(-vy * vz * a, vx * a),
                re(rho * h),
            ],
            vec![
                re(0.0),
                c(-vx * vz * a, vy * a),
                c(-vy * vz * a, -vx * a),
                re(rho * h),
            ],
        )
    };
    let norm = |amps| PureState::normalized(amps).expect("nonzero ancilla vector");
    AncillaVectors {
        v: *v,
        e00: norm(e00),
        e01: norm(e01),
        e10: norm(e10),
        e11: norm(e11),
    }
}

/// Ensemble state for direction `v` and known plaintext bit `x`:
/// `(1−β)|E_{x,1−x}⟩⟨·| + β|E_{xx}⟩⟨·|`.
pub fn zeta_for_direction(v: &BlochVector, beta: NoiseLevel, x: u8) -> Matrix {
    let e = ancilla_vectors(v, beta);
    let b = beta.value();
    let (wrong, right) = if x == 0 {
        (&e.e01, &e.e00)
    } else {
        (&e.e10, &e.e11)
    };
    wrong.projector().scale(1.0 - b) + right.projector().scale(b)
}

/// `ζ_b` of a scheme for basis `b`.
pub fn zeta(scheme: Scheme, b: Basis, beta: NoiseLevel, x: u8) -> Result<Matrix> {
    if x > 1 {
        return Err(Error::InvalidConfig(format!(
            "plaintext bit {x} is not 0 or 1"
        )));
    }
    let v = bloch_vector(scheme, b, 0)?;
    Ok(zeta_for_direction(&v, beta, x))
}

/// The family `{ζ_b}` with uniform prior, ordered as [`Scheme::bases`].
#[derive(Clone, Debug)]
pub struct AncillaEnsemble {
    pub scheme: Scheme,
    pub beta: NoiseLevel,
    pub plaintext: u8,
    pub states: Vec<Matrix>,
}

impl AncillaEnsemble {
    pub fn new(scheme: Scheme, beta: NoiseLevel, plaintext: u8) -> Result<Self> {
        let states = scheme
            .bases()
            .iter()
            .map(|&b| zeta(scheme, b, beta, plaintext))
            .collect::<Result<Vec<_>>>()?;
        Ok(AncillaEnsemble {
            scheme,
            beta,
            plaintext,
            states,
        })
    }

    /// Shorthand for the `x = 0` ensemble.
    pub fn at(scheme: Scheme, beta: f64) -> Result<Self> {
        Self::new(scheme, NoiseLevel::new(beta)?, 0)
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn prior(&self) -> f64 {
        1.0 / self.states.len() as f64
    }
}

/// Tripartite ABE purification of [`symmetrized_ab`], index `(2a + b)·4 + e`.
///
/// `|Ψ⟩ = √(1−3β/2)|Ψ−⟩|m_0⟩ + √(β/2) Σ_j (σ_j ⊗ 𝟙)|Ψ−⟩|m_j⟩`, i.e. the
/// ancilla labels `m_1, m_2, m_3` sit on `−|Φ−⟩`, `i|Φ+⟩` and `|Ψ+⟩`.
pub fn purified_abe(beta: NoiseLevel) -> PureState {
    let b = beta.value();
    let [psi_m, phi_m, psi_p, phi_p] = bell_states();
    let parts: [(Complex64, &PureState); 4] = [
        (re((1.0 - 1.5 * b).sqrt()), &psi_m),
        (re(-(b / 2.0).sqrt()), &phi_m),
        (c(0.0, (b / 2.0).sqrt()), &phi_p),
        (re((b / 2.0).sqrt()), &psi_p),
    ];
    let mut amps = vec![re(0.0); 16];
    for (e, (coef, bell)) in parts.iter().enumerate() {
        for (ab, amp) in bell.amplitudes().iter().enumerate() {
            amps[ab * 4 + e] += coef * amp;
        }
    }
    PureState::normalized(amps).expect("purification is nonzero")
}

/// `tr_E |Ψ⟩⟨Ψ|` for a 16-dimensional ABE state.
pub fn trace_out_ancilla(psi: &PureState) -> Result<Matrix> {
    if psi.dim() != 16 {
        return Err(Error::DimensionMismatch {
            expected: 16,
            got: psi.dim(),
        });
    }
    let a = psi.amplitudes();
    let mut rho = Matrix::zeros(4);
    for i in 0..4 {
        for j in 0..4 {
            rho[(i, j)] = (0..4).map(|e| a[i * 4 + e] * a[j * 4 + e].conj()).sum();
        }
    }
    Ok(rho)
}

/// Unnormalized ancilla state `(⟨α|_A ⊗ ⟨β|_B ⊗ 𝟙) |Ψ⟩`.
pub fn project_ab(psi: &PureState, alice: &PureState, bob: &PureState) -> Result<Vec<Complex64>> {
    if psi.dim() != 16 || alice.dim() != 2 || bob.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 16,
            got: psi.dim(),
        });
    }
    let a = psi.amplitudes();
    let mut out = vec![re(0.0); 4];
    for (ia, ca) in alice.amplitudes().iter().enumerate() {
        for (ib, cb) in bob.amplitudes().iter().enumerate() {
            let w = ca.conj() * cb.conj();
            for (e, o) in out.iter_mut().enumerate() {
                *o += w * a[(2 * ia + ib) * 4 + e];
            }
        }
    }
    Ok(out)
}

/// Joint outcome probabilities `P(x, y)` when Alice and Bob both measure along `v`.
pub fn outcome_probabilities(psi: &PureState, v: &BlochVector) -> Result<[[f64; 2]; 2]> {
    let (up, down) = measurement_basis(v)?;
    let basis = [&up, &down];
    let mut p = [[0.0; 2]; 2];
    for x in 0..2 {
        for y in 0..2 {
            p[x][y] = project_ab(psi, basis[x], basis[y])?
                .iter()
                .map(|z| z.norm_sqr())
                .sum();
        }
    }
    Ok(p)
}

/// Cyclic relabelling `m_1 → m_2 → m_3 → m_1` with `ζ_{b+1} = S ζ_b S†`.
pub fn six_state_permutation() -> Matrix {
    let mut s = Matrix::zeros(4);
    s[(0, 0)] = re(1.0);
    s[(2, 1)] = re(1.0);
    s[(3, 2)] = re(1.0);
    s[(1, 3)] = re(1.0);
    s
}

/// Sign flips `D_{uw}` with `ζ_{uw} = D_{uw} ζ_{00} D_{uw}`.
pub fn eight_state_sign(b: Basis) -> Matrix {
    let d = match b.0 & 3 {
        0 => [1.0, 1.0, 1.0, 1.0],
        1 => [1.0, 1.0, -1.0, -1.0],
        2 => [1.0, -1.0, -1.0, 1.0],
        _ => [1.0, -1.0, 1.0, -1.0],
    };
    Matrix::from_real_diagonal(&d).expect("dimension 4")
}

/// `P = diag(1, −1, −1, −1)`, mapping `ζ^v` to `ζ^{−v}` via `P ζ* P`.
pub fn reflection() -> Matrix {
    Matrix::from_real_diagonal(&[1.0, -1.0, -1.0, -1.0]).expect("dimension 4")
}
