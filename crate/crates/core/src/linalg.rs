//! Dense complex linear algebra for qubit (2×2) and ancilla (4×4) operators.
//!
//! Matrices are small value types with inline storage. The Hermitian
//! eigensolver is a cyclic complex Jacobi iteration, which is
//! unconditionally stable at these sizes and needs no external solver.

use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

pub use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest supported operator dimension.
pub const MAX_DIM: usize = 4;

/// Tolerance used when validating Hermitian inputs.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Tolerance used when validating unitary inputs.
pub const UNITARY_TOL: f64 = 1e-10;

/// Default PSD tolerance on the smallest eigenvalue.
pub const PSD_TOL: f64 = 1e-9;

const MAX_SWEEPS: usize = 64;

#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[inline]
pub fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Square complex matrix of dimension 2 or 4, row-major inline storage.
#[derive(Clone, Copy, PartialEq)]
pub struct Matrix {
    dim: usize,
    data: [Complex64; MAX_DIM * MAX_DIM],
}

impl Matrix {
    /// Zero matrix. Panics unless `dim` is 2 or 4.
    pub fn zeros(dim: usize) -> Self {
        assert!(dim == 2 || dim == 4, "unsupported matrix dimension {dim}");
        Matrix {
            dim,
            data: [Complex64::new(0.0, 0.0); MAX_DIM * MAX_DIM],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = re(1.0);
        }
        m
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Result<Self> {
        check_dim(diag.len())?;
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = re(d);
        }
        Ok(m)
    }

    /// Builds a matrix from rows; every row must have the same length as the row count.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let dim = rows.len();
        check_dim(dim)?;
        let mut m = Self::zeros(dim);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: row.len(),
                });
            }
            for (j, &z) in row.iter().enumerate() {
                m[(i, j)] = z;
            }
        }
        Ok(m)
    }

    /// `|a⟩⟨b|`.
    pub fn outer(a: &[Complex64], b: &[Complex64]) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::DimensionMismatch {
                expected: a.len(),
                got: b.len(),
            });
        }
        check_dim(a.len())?;
        let mut m = Self::zeros(a.len());
        for i in 0..a.len() {
            for j in 0..a.len() {
                m[(i, j)] = a[i] * b[j].conj();
            }
        }
        Ok(m)
    }

    /// `|a⟩⟨a|` for an amplitude slice of length 2 or 4.
    pub fn projector(a: &[Complex64]) -> Result<Self> {
        Self::outer(a, a)
    }

    /// Kronecker product of two 2×2 matrices.
    pub fn kron(a: &Matrix, b: &Matrix) -> Result<Self> {
        if a.dim != 2 || b.dim != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                got: if a.dim != 2 { a.dim } else { b.dim },
            });
        }
        let mut m = Self::zeros(4);
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        m[(2 * i + k, 2 * j + l)] = a[(i, j)] * b[(k, l)];
                    }
                }
            }
        }
        Ok(m)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                m[(i, j)] = self[(j, i)].conj();
            }
        }
        m
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        let mut m = *self;
        for z in m.entries_mut() {
            *z = z.conj();
        }
        m
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut m = *self;
        for z in m.entries_mut() {
            *z *= s;
        }
        m
    }

    pub fn scale_complex(&self, s: Complex64) -> Self {
        let mut m = *self;
        for z in m.entries_mut() {
            *z *= s;
        }
        m
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    /// `Re tr(self · other)`, computed without forming the product.
    pub fn trace_product_re(&self, other: &Matrix) -> f64 {
        debug_assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut acc = 0.0;
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                let b = other.data[k * n + i];
                acc += a.re * b.re - a.im * b.im;
            }
        }
        acc
    }

    /// `U · self · U†` without any unitarity check.
    pub fn sandwich(&self, u: &Matrix) -> Self {
        *u * *self * u.adjoint()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.entries().iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Max-norm distance `max |a_ij − b_ij|`.
    pub fn max_diff(&self, other: &Matrix) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.entries()
            .iter()
            .zip(other.entries())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `max |a_ij − conj(a_ji)|`.
    pub fn hermiticity_gap(&self) -> f64 {
        let mut gap: f64 = 0.0;
        for i in 0..self.dim {
            for j in i..self.dim {
                gap = gap.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        gap
    }

    /// `(A + A†)/2`.
    pub fn hermitian_part(&self) -> Self {
        (*self + self.adjoint()).scale(0.5)
    }

    pub fn unitarity_gap(&self) -> f64 {
        (*self * self.adjoint()).max_diff(&Matrix::identity(self.dim))
    }

    pub fn is_finite(&self) -> bool {
        self.entries()
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Row-major view of the `dim × dim` entries.
    pub fn entries(&self) -> &[Complex64] {
        &self.data[..self.dim * self.dim]
    }

    pub fn entries_mut(&mut self) -> &mut [Complex64] {
        let n = self.dim * self.dim;
        &mut self.data[..n]
    }

    /// Bytes of the entries, used as a deterministic tie-breaker.
    pub(crate) fn to_bits(self) -> impl Iterator<Item = u64> {
        let n = self.dim * self.dim;
        self.data
            .into_iter()
            .take(n)
            .flat_map(|z| [z.re.to_bits(), z.im.to_bits()])
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 2 || dim == 4 {
        Ok(())
    } else {
        Err(Error::UnsupportedDimension(dim))
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Complex64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        debug_assert!(i < self.dim && j < self.dim);
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        debug_assert!(i < self.dim && j < self.dim);
        &mut self.data[i * self.dim + j]
    }
}

impl Add for Matrix {
    type Output = Matrix;
    fn add(mut self, rhs: Matrix) -> Matrix {
        self += rhs;
        self
    }
}

impl AddAssign for Matrix {
    fn add_assign(&mut self, rhs: Matrix) {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        for (a, b) in self.entries_mut().iter_mut().zip(rhs.entries()) {
            *a += b;
        }
    }
}

impl Sub for Matrix {
    type Output = Matrix;
    fn sub(mut self, rhs: Matrix) -> Matrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        for (a, b) in self.entries_mut().iter_mut().zip(rhs.entries()) {
            *a -= b;
        }
        self
    }
}

impl Neg for Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        self.scale(-1.0)
    }
}

impl Mul for Matrix {
    type Output = Matrix;
    fn mul(self, rhs: Matrix) -> Matrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let n = self.dim;
        let mut out = Matrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        out
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.dim, self.dim)?;
        for i in 0..self.dim {
            write!(f, "  ")?;
            for j in 0..self.dim {
                let z = self[(i, j)];
                write!(f, "{:>+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

pub fn pauli_x() -> Matrix {
    let mut m = Matrix::zeros(2);
    m[(0, 1)] = re(1.0);
    m[(1, 0)] = re(1.0);
    m
}

pub fn pauli_y() -> Matrix {
    let mut m = Matrix::zeros(2);
    m[(0, 1)] = c(0.0, -1.0);
    m[(1, 0)] = c(0.0, 1.0);
    m
}

pub fn pauli_z() -> Matrix {
    let mut m = Matrix::zeros(2);
    m[(0, 0)] = re(1.0);
    m[(1, 1)] = re(-1.0);
    m
}

/// `n · σ` for a real 3-vector.
pub fn spin_operator(n: [f64; 3]) -> Matrix {
    pauli_x().scale(n[0]) + pauli_y().scale(n[1]) + pauli_z().scale(n[2])
}

/// Normalized state vector of arbitrary dimension.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    amps: Vec<Complex64>,
}

impl PureState {
    /// Accepts amplitudes whose squared moduli sum to 1 within 1e-12.
    pub fn new(amps: Vec<Complex64>) -> Result<Self> {
        let n2: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
        if (n2 - 1.0).abs() > 1e-12 {
            return Err(Error::NotNormalized(n2));
        }
        Ok(PureState { amps })
    }

    pub fn normalized(amps: Vec<Complex64>) -> Result<Self> {
        let n2: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
        if n2 == 0.0 || !n2.is_finite() {
            return Err(Error::ZeroVector);
        }
        let s = n2.sqrt().recip();
        Ok(PureState {
            amps: amps.into_iter().map(|z| z * s).collect(),
        })
    }

    /// Computational basis vector `|index⟩`.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut amps = vec![re(0.0); dim];
        amps[index] = re(1.0);
        PureState { amps }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &PureState) -> Complex64 {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// `|ψ⟩⟨ψ|`, only for dimensions 2 and 4.
    pub fn projector(&self) -> Matrix {
        Matrix::projector(&self.amps).expect("projector requires dimension 2 or 4")
    }

    /// `⟨ψ|A|ψ⟩`.
    pub fn expectation(&self, a: &Matrix) -> Complex64 {
        assert_eq!(self.dim(), a.dim(), "dimension mismatch");
        let n = self.dim();
        let mut acc = re(0.0);
        for i in 0..n {
            for j in 0..n {
                acc += self.amps[i].conj() * a[(i, j)] * self.amps[j];
            }
        }
        acc
    }

    pub fn apply(&self, a: &Matrix) -> PureState {
        assert_eq!(self.dim(), a.dim(), "dimension mismatch");
        let n = self.dim();
        let amps = (0..n)
            .map(|i| (0..n).map(|j| a[(i, j)] * self.amps[j]).sum())
            .collect();
        PureState { amps }
    }

    /// Tensor product `|self⟩ ⊗ |other⟩`.
    pub fn kron(&self, other: &PureState) -> PureState {
        let mut amps = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        PureState { amps }
    }

    pub fn conj(&self) -> PureState {
        PureState {
            amps: self.amps.iter().map(|z| z.conj()).collect(),
        }
    }

    /// Max entrywise distance.
    pub fn max_diff(&self, other: &PureState) -> f64 {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues in descending order.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<PureState>,
}

impl Spectrum {
    /// `Σ λ_i |v_i⟩⟨v_i|`.
    pub fn reconstruct(&self) -> Matrix {
        let dim = self.eigenvalues.len();
        let mut m = Matrix::zeros(dim);
        for (l, v) in self.eigenvalues.iter().zip(&self.eigenvectors) {
            m += v.projector().scale(*l);
        }
        m
    }
}

/// Raw Jacobi output: eigenvalues (descending) and the unitary whose
/// columns are the matching eigenvectors.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Eigen {
    pub values: [f64; MAX_DIM],
    pub vectors: Matrix,
}

impl Eigen {
    /// `V f(Λ) V†` for a scalar function on the spectrum.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Matrix {
        let n = self.vectors.dim();
        let mut out = Matrix::zeros(n);
        for k in 0..n {
            let fk = f(self.values[k]);
            for i in 0..n {
                let vik = self.vectors[(i, k)] * fk;
                for j in 0..n {
                    out[(i, j)] += vik * self.vectors[(j, k)].conj();
                }
            }
        }
        out
    }
}

/// Cyclic complex Jacobi on the Hermitian part of `a`. No input validation.
pub(crate) fn jacobi(a: &Matrix) -> Eigen {
    let n = a.dim();
    let mut m = a.hermitian_part();
    let mut v = Matrix::identity(n);

    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0;
        let mut diag = 0.0;
        for p in 0..n {
            diag += m[(p, p)].re * m[(p, p)].re;
            for q in (p + 1)..n {
                off += m[(p, q)].norm_sqr();
            }
        }
        if off <= 1e-34 * (diag + off) || off < 1e-300 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                let r = apq.norm();
                if r < 1e-300 {
                    continue;
                }
                let phase = apq / r;
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                let theta = 0.5 * (2.0 * r).atan2(app - aqq);
                let (s, cs) = theta.sin_cos();
                // U = diag(1, e^{-iφ}) · [[c, -s], [s, c]] on the (p, q) plane
                let u00 = re(cs);
                let u01 = re(-s);
                let u10 = phase.conj() * s;
                let u11 = phase.conj() * cs;
                for k in 0..n {
                    let akp = m[(k, p)];
                    let akq = m[(k, q)];
                    m[(k, p)] = akp * u00 + akq * u10;
                    m[(k, q)] = akp * u01 + akq * u11;
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * u00 + vkq * u10;
                    v[(k, q)] = vkp * u01 + vkq * u11;
                }
                for k in 0..n {
                    let apk = m[(p, k)];
                    let aqk = m[(q, k)];
                    m[(p, k)] = u00.conj() * apk + u10.conj() * aqk;
                    m[(q, k)] = u01.conj() * apk + u11.conj() * aqk;
                }
                m[(p, q)] = re(0.0);
                m[(q, p)] = re(0.0);
                m[(p, p)] = re(m[(p, p)].re);
                m[(q, q)] = re(m[(q, q)].re);
            }
        }
    }

    let mut order: [usize; MAX_DIM] = [0, 1, 2, 3];
    order[..n].sort_by(|&i, &j| m[(j, j)].re.total_cmp(&m[(i, i)].re));
    let mut values = [0.0; MAX_DIM];
    let mut vectors = Matrix::zeros(n);
    for (col, &k) in order[..n].iter().enumerate() {
        values[col] = m[(k, k)].re;
        for i in 0..n {
            vectors[(i, col)] = v[(i, k)];
        }
    }
    Eigen { values, vectors }
}

fn require_hermitian(h: &Matrix) -> Result<()> {
    if !h.is_finite() {
        return Err(Error::NotHermitian(f64::NAN));
    }
    let gap = h.hermiticity_gap();
    if gap > HERMITIAN_TOL {
        Err(Error::NotHermitian(gap))
    } else {
        Ok(())
    }
}

/// Eigendecomposition of a Hermitian matrix (descending eigenvalues).
pub fn eig_hermitian(h: &Matrix) -> Result<Spectrum> {
    require_hermitian(h)?;
    let e = jacobi(h);
    let n = h.dim();
    let eigenvectors = (0..n)
        .map(|k| PureState {
            amps: (0..n).map(|i| e.vectors[(i, k)]).collect(),
        })
        .collect();
    Ok(Spectrum {
        eigenvalues: e.values[..n].to_vec(),
        eigenvectors,
    })
}

/// `tr|A| = Σ|λ_i|` for Hermitian `A`.
pub fn trace_norm(a: &Matrix) -> Result<f64> {
    require_hermitian(a)?;
    let e = jacobi(a);
    Ok(e.values[..a.dim()].iter().map(|l| l.abs()).sum())
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(a: &Matrix) -> Result<f64> {
    require_hermitian(a)?;
    Ok(jacobi(a).values[a.dim() - 1])
}

/// True iff the smallest eigenvalue is at least `-tol`.
pub fn is_psd(a: &Matrix, tol: f64) -> Result<bool> {
    Ok(min_eigenvalue(a)? >= -tol)
}

/// `U A U†` after checking that `U` is unitary.
pub fn conjugate(u: &Matrix, a: &Matrix) -> Result<Matrix> {
    if u.dim() != a.dim() {
        return Err(Error::DimensionMismatch {
            expected: u.dim(),
            got: a.dim(),
        });
    }
    let gap = u.unitarity_gap();
    if !(gap <= UNITARY_TOL) {
        return Err(Error::NotUnitary(gap));
    }
    Ok(a.sandwich(u))
}

/// Principal square root of a PSD matrix (negative eigenvalues clipped to zero).
pub fn sqrt_psd(a: &Matrix) -> Result<Matrix> {
    require_hermitian(a)?;
    Ok(jacobi(a).map(|l| l.max(0.0).sqrt()))
}

/// `A^{-1/2}` for a positive definite matrix; `None` if it is numerically singular.
pub(crate) fn inv_sqrt_pd(a: &Matrix) -> Option<Matrix> {
    let e = jacobi(a);
    let n = a.dim();
    let lmax = e.values[0];
    let lmin = e.values[n - 1];
    if !(lmin > 1e-13 * lmax.max(1e-300)) {
        return None;
    }
    Some(e.map(|l| l.sqrt().recip()))
}
