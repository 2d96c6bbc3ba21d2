//! Dense linear algebra on the truncated Fock space `span{|0>, ..., |N>}`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tolerances::Tolerances;

pub type ComplexMatrix = DMatrix<Complex64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Photon-number cutoff `N`; operators act on an `(N + 1)`-dimensional space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FockDim {
    cutoff: usize,
}

impl FockDim {
    pub fn new(cutoff: usize) -> Result<Self> {
        if cutoff < 1 {
            return Err(Error::InvalidCutoff(cutoff));
        }
        Ok(Self { cutoff })
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    /// Matrix dimension `N + 1`.
    pub fn size(&self) -> usize {
        self.cutoff + 1
    }

    /// Smallest cutoff whose Poisson tail is below `tol.tail` for every
    /// amplitude, never below `tol.min_cutoff`.
    pub fn for_amplitudes(alphas: &[f64], tol: &Tolerances) -> Self {
        let mut cutoff = tol.min_cutoff.max(1);
        let mean = alphas.iter().map(|a| a * a).fold(0.0, f64::max);
        while poisson_tail(mean, cutoff) >= tol.tail {
            cutoff += 1;
        }
        Self { cutoff }
    }

    /// Fails with [`Error::TailTooHeavy`] when `|alpha>` leaks too much mass
    /// past the cutoff.
    pub fn check_amplitude(&self, alpha: f64, tol: &Tolerances) -> Result<()> {
        if !alpha.is_finite() {
            return Err(Error::InvalidParameter(format!("amplitude {alpha}")));
        }
        let tail = poisson_tail(alpha * alpha, self.cutoff);
        if tail > tol.tail {
            return Err(Error::TailTooHeavy {
                alpha,
                cutoff: self.cutoff,
                tail,
                tolerance: tol.tail,
            });
        }
        Ok(())
    }
}

/// `sum_{n > cutoff} e^{-mean} mean^n / n!`, summed directly in log space so
/// tiny tails are not lost to cancellation.
pub fn poisson_tail(mean: f64, cutoff: usize) -> f64 {
    if mean <= 0.0 {
        return 0.0;
    }
    let ln_mean = mean.ln();
    let mut ln_fact = 0.0;
    for k in 2..=cutoff + 1 {
        ln_fact += (k as f64).ln();
    }
    let mut n = cutoff + 1;
    let mut total = 0.0;
    loop {
        let term = (-mean + n as f64 * ln_mean - ln_fact).exp();
        total += term;
        // past the mode the terms shrink geometrically
        if (n as f64) > mean && term <= total * 1e-18 {
            break;
        }
        n += 1;
        ln_fact += (n as f64).ln();
        if n > cutoff + 100_000 {
            break;
        }
    }
    total
}

/// `Tr(A B)` without forming the product.
pub fn trace_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Complex64 {
    debug_assert_eq!(a.ncols(), b.nrows());
    let mut acc = ZERO;
    for i in 0..a.nrows() {
        for k in 0..a.ncols() {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

fn max_abs(m: &ComplexMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn hermitian_part(m: &ComplexMatrix) -> ComplexMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// A state vector in the truncated Fock basis.
#[derive(Debug, Clone, PartialEq)]
pub struct KetVector {
    amplitudes: DVector<Complex64>,
}

impl KetVector {
    pub fn new(amplitudes: DVector<Complex64>) -> Result<Self> {
        if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidParameter("non-finite ket amplitude".into()));
        }
        if amplitudes.norm() > 1.0 + 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "ket norm {} exceeds 1",
                amplitudes.norm()
            )));
        }
        Ok(Self { amplitudes })
    }

    /// The Fock basis vector `|n>`.
    pub fn basis(n: usize, dim: FockDim) -> Result<Self> {
        if n > dim.cutoff() {
            return Err(Error::DimensionMismatch {
                expected: dim.size(),
                found: n + 1,
            });
        }
        let mut v = DVector::from_element(dim.size(), ZERO);
        v[n] = ONE;
        Ok(Self { amplitudes: v })
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    pub fn size(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.norm_squared()
    }

    /// `|psi><psi|`.
    pub fn projector(&self) -> DensityOperator {
        let m = &self.amplitudes * self.amplitudes.adjoint();
        DensityOperator(HermitianOperator(hermitian_part(&m)))
    }
}

/// A Hermitian matrix; stored exactly Hermitian after validation.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator(ComplexMatrix);

impl HermitianOperator {
    pub fn new(m: ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch {
                expected: m.nrows(),
                found: m.ncols(),
            });
        }
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidParameter("non-finite matrix entry".into()));
        }
        let skew = max_abs(&(&m - m.adjoint()));
        if skew > tol.hermiticity {
            return Err(Error::NotHermitian(skew));
        }
        Ok(Self(hermitian_part(&m)))
    }

    /// Takes the Hermitian part of `m` without checking how far off it was.
    pub(crate) fn symmetrized(m: &ComplexMatrix) -> Self {
        Self(hermitian_part(m))
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let d = DVector::from_iterator(diag.len(), diag.iter().map(|&x| Complex64::new(x, 0.0)));
        Self(DMatrix::from_diagonal(&d))
    }

    pub fn identity(size: usize) -> Self {
        Self(DMatrix::identity(size, size))
    }

    pub fn zeros(size: usize) -> Self {
        Self(DMatrix::zeros(size, size))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    pub fn size(&self) -> usize {
        self.0.nrows()
    }

    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    /// Real-linear combination `a * self + b * other`.
    pub fn combine(&self, a: f64, other: &HermitianOperator, b: f64) -> Self {
        Self(self.0.scale(a) + other.0.scale(b))
    }

    pub fn eig(&self, tol: &Tolerances) -> Result<HermitianEigen> {
        hermitian_eig_with(self, tol)
    }

    /// PSD check by Cholesky of `A + |floor| I`, which succeeds exactly when
    /// every eigenvalue exceeds `-|floor|` (up to rounding).
    pub fn is_positive(&self, tol: &Tolerances) -> bool {
        let n = self.size();
        let mut a = &self.0 + DMatrix::<Complex64>::identity(n, n).scale(tol.psd_floor.abs());
        // in-place Cholesky with real pivots; nalgebra takes complex square
        // roots and would accept negative ones
        for j in 0..n {
            let pivot = a[(j, j)].re - (0..j).map(|k| a[(j, k)].norm_sqr()).sum::<f64>();
            if !(pivot > 0.0) {
                return false;
            }
            let d = pivot.sqrt();
            a[(j, j)] = Complex64::new(d, 0.0);
            for i in j + 1..n {
                let mut v = a[(i, j)];
                for k in 0..j {
                    v -= a[(i, k)] * a[(j, k)].conj();
                }
                a[(i, j)] = v / d;
            }
        }
        true
    }

    pub fn min_eigenvalue(&self, tol: &Tolerances) -> Result<f64> {
        Ok(self.eig(tol)?.values.first().copied().unwrap_or(0.0))
    }
}

/// A positive semidefinite operator with trace in `[1 - tail, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator(HermitianOperator);

impl DensityOperator {
    pub fn new(op: HermitianOperator, tol: &Tolerances) -> Result<Self> {
        let tr = op.trace();
        if tr > 1.0 + tol.trace_excess || tr < 1.0 - tol.tail - tol.trace_excess {
            return Err(Error::BadTrace(tr));
        }
        let min = op.min_eigenvalue(tol)?;
        if min < -tol.psd_floor {
            return Err(Error::NotPositive(min));
        }
        Ok(Self(op))
    }

    /// For constructions that are PSD with bounded trace by design.
    pub(crate) fn trusted(op: HermitianOperator) -> Self {
        Self(op)
    }

    pub fn operator(&self) -> &HermitianOperator {
        &self.0
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        self.0.matrix()
    }

    pub fn size(&self) -> usize {
        self.0.size()
    }

    pub fn trace(&self) -> f64 {
        self.0.trace()
    }

    /// `Tr(rho^2)`.
    pub fn purity(&self) -> f64 {
        trace_product(self.matrix(), self.matrix()).re
    }

    /// `Tr(rho A)`, real for Hermitian `A`.
    pub fn expectation(&self, a: &ComplexMatrix) -> f64 {
        trace_product(self.matrix(), a).re
    }
}

/// Eigenvalues in ascending order with matching eigenvector columns.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    /// `V f(D) V^†`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> HermitianOperator {
        let n = self.values.len();
        let mut scaled = self.vectors.clone();
        for (j, &lambda) in self.values.iter().enumerate() {
            let w = f(lambda);
            for i in 0..n {
                scaled[(i, j)] *= w;
            }
        }
        HermitianOperator::symmetrized(&(scaled * self.vectors.adjoint()))
    }
}

pub fn hermitian_eig(op: &HermitianOperator) -> Result<HermitianEigen> {
    hermitian_eig_with(op, &Tolerances::DEFAULT)
}

const TINY_RELATIVE: f64 = 1e-30;

fn hermitian_eig_with(op: &HermitianOperator, tol: &Tolerances) -> Result<HermitianEigen> {
    let n = op.size();
    // entries far below the scale of the matrix (high Fock tails at small
    // amplitude) make the QR sweeps produce infinities
    let scale = op.matrix().iter().map(|z| z.norm()).fold(0.0, f64::max);
    let floor = TINY_RELATIVE * scale;
    let flush = |x: f64| if x.abs() < floor { 0.0 } else { x };
    let (eigenvalues, eigenvectors) = if op.matrix().iter().all(|z| z.im == 0.0) {
        let m = op.matrix().map(|z| flush(z.re));
        let eig = SymmetricEigen::try_new(m, f64::EPSILON, tol.eig_max_iter).ok_or(Error::ConvergenceFailure(n))?;
        (eig.eigenvalues, eig.eigenvectors.map(|x| Complex64::new(x, 0.0)))
    } else {
        let m = op.matrix().map(|z| Complex64::new(flush(z.re), flush(z.im)));
        let eig = SymmetricEigen::try_new(m, f64::EPSILON, tol.eig_max_iter).ok_or(Error::ConvergenceFailure(n))?;
        (eig.eigenvalues, eig.eigenvectors)
    };
    if eigenvalues.iter().any(|l| !l.is_finite()) {
        return Err(Error::ConvergenceFailure(n));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eigenvalues[a].total_cmp(&eigenvalues[b]));
    let values = order.iter().map(|&i| eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| eigenvectors[(r, order[c])]);
    Ok(HermitianEigen { values, vectors })
}

/// `||A||_1 = sum |lambda_i|`.
pub fn trace_norm(op: &HermitianOperator) -> Result<f64> {
    Ok(hermitian_eig(op)?.values.iter().map(|l| l.abs()).sum())
}

/// Pseudo-inverse square root `V f(D) V^†` with `f(l) = l^{-1/2}` above
/// `tol.pinv_relative * l_max`, else 0.
pub fn matrix_function_sqrt_inv(op: &HermitianOperator) -> Result<HermitianOperator> {
    sqrt_inv_with(op, &Tolerances::DEFAULT)
}

pub(crate) fn sqrt_inv_with(op: &HermitianOperator, tol: &Tolerances) -> Result<HermitianOperator> {
    let eig = op.eig(tol)?;
    let lmax = eig.values.last().copied().unwrap_or(0.0).max(0.0);
    let cut = tol.pinv_relative * lmax;
    Ok(eig.map(|l| if l > cut && l > 0.0 { l.sqrt().recip() } else { 0.0 }))
}

/// Annihilation operator: `<n-1|a|n> = sqrt(n)`.
pub fn lowering_operator(dim: FockDim) -> ComplexMatrix {
    let size = dim.size();
    let mut a = DMatrix::zeros(size, size);
    for n in 1..size {
        a[(n - 1, n)] = Complex64::new((n as f64).sqrt(), 0.0);
    }
    a
}

pub fn creation_operator(dim: FockDim) -> ComplexMatrix {
    lowering_operator(dim).adjoint()
}

/// `a^† a = diag(0, 1, ..., N)`.
pub fn number_operator(dim: FockDim) -> HermitianOperator {
    let diag: Vec<f64> = (0..dim.size()).map(|n| n as f64).collect();
    HermitianOperator::from_real_diagonal(&diag)
}

/// Truncated coherent state `e^{-a^2/2} sum_n a^n / sqrt(n!) |n>` for real `a`.
pub fn coherent_ket(alpha: f64, dim: FockDim) -> Result<KetVector> {
    dim.check_amplitude(alpha, &Tolerances::DEFAULT)?;
    Ok(KetVector {
        amplitudes: DVector::from_iterator(
            dim.size(),
            coherent_amplitudes(alpha, dim.size())
                .into_iter()
                .map(|c| Complex64::new(c, 0.0)),
        ),
    })
}

/// Real amplitudes `e^{-a^2/2} a^n / sqrt(n!)` for `n < size`.
pub(crate) fn coherent_amplitudes(alpha: f64, size: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(size);
    let mut c = (-0.5 * alpha * alpha).exp();
    for n in 0..size {
        if n > 0 {
            c *= alpha / (n as f64).sqrt();
        }
        out.push(c);
    }
    out
}
