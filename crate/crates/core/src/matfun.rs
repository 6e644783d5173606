//! Functional calculus for real symmetric matrices.
//!
//! Everything here goes through a symmetric eigendecomposition `S = Q diag(λ) Qᵀ`
//! and applies scalar functions to the eigenvalues. Fractional powers and
//! logarithms refuse near-singular inputs (`λ_min ≤ 1e-12·λ_max`) instead of
//! regularizing them.

use nalgebra::{Complex, DMatrix, DVector, SymmetricEigen, SVD};

use crate::error::{Error, Result};

/// Relative asymmetry accepted by [`SymMatrix::new`].
pub const DEFAULT_SYMTOL: f64 = 1e-8;
/// Default relative tolerance for reconstruction residuals.
pub const DEFAULT_RTOL: f64 = 1e-9;
/// Fractional powers and logarithms require `λ_min > PD_FLOOR · λ_max`.
pub const PD_FLOOR: f64 = 1e-12;

const MAX_EIG_ITERATIONS: usize = 10_000;

pub type Complex64 = Complex<f64>;

/// A real symmetric matrix with finite entries.
///
/// Construction validates symmetry up to `symtol · maxabs` and then stores the
/// exactly symmetric part `(S + Sᵀ)/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix(DMatrix<f64>);

impl SymMatrix {
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        Self::with_symtol(m, DEFAULT_SYMTOL)
    }

    pub fn with_symtol(m: DMatrix<f64>, symtol: f64) -> Result<Self> {
        check_square_finite(&m)?;
        let scale = max_abs(&m);
        let mut asym = 0.0_f64;
        for i in 0..m.nrows() {
            for j in (i + 1)..m.ncols() {
                asym = asym.max((m[(i, j)] - m[(j, i)]).abs());
            }
        }
        if asym > symtol * scale {
            return Err(Error::input(format!(
                "matrix is not symmetric: max |S_ij - S_ji| = {asym:e} exceeds {:e}",
                symtol * scale
            )));
        }
        Ok(Self::symmetrized(m))
    }

    /// Symmetrizes without validation. Used for results of computations that
    /// are symmetric in exact arithmetic.
    pub(crate) fn symmetrized(m: DMatrix<f64>) -> Self {
        let t = m.transpose();
        SymMatrix((m + t) * 0.5)
    }

    pub fn identity(order: usize) -> Self {
        SymMatrix(DMatrix::identity(order, order))
    }

    pub fn from_diagonal(diag: &[f64]) -> Result<Self> {
        Self::new(DMatrix::from_diagonal(&DVector::from_column_slice(diag)))
    }

    pub fn order(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.0
    }
}

impl AsRef<DMatrix<f64>> for SymMatrix {
    fn as_ref(&self) -> &DMatrix<f64> {
        &self.0
    }
}

/// `S = Q diag(λ) Qᵀ` with eigenvalues ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    pub eigenvalues: DVector<f64>,
    pub eigenvectors: DMatrix<f64>,
}

impl SpectralDecomposition {
    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues[self.eigenvalues.len() - 1]
    }

    /// `Q diag(f(λ)) Qᵀ`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> SymMatrix {
        let q = &self.eigenvectors;
        let mut scaled = q.clone();
        for (j, &lambda) in self.eigenvalues.iter().enumerate() {
            let fl = f(lambda);
            scaled.column_mut(j).scale_mut(fl);
        }
        SymMatrix::symmetrized(scaled * q.transpose())
    }

    fn require_positive_definite(&self) -> Result<()> {
        let (lo, hi) = (self.min_eigenvalue(), self.max_eigenvalue());
        if lo <= 0.0 || lo <= PD_FLOOR * hi {
            return Err(Error::NotPositiveDefinite {
                min_eigenvalue: lo,
                max_eigenvalue: hi,
            });
        }
        Ok(())
    }

    pub fn pow(&self, t: f64) -> Result<SymMatrix> {
        self.require_positive_definite()?;
        if !t.is_finite() {
            return Err(Error::input(format!("exponent must be finite, got {t}")));
        }
        Ok(self.map(|l| l.powf(t)))
    }

    pub fn log(&self) -> Result<SymMatrix> {
        self.require_positive_definite()?;
        Ok(self.map(f64::ln))
    }
}

/// Symmetric eigendecomposition with ascending eigenvalues.
pub fn sym_eig(s: &SymMatrix) -> Result<SpectralDecomposition> {
    let eig = SymmetricEigen::try_new(s.0.clone(), f64::EPSILON, MAX_EIG_ITERATIONS).ok_or(
        Error::NoConvergence {
            what: "symmetric eigensolver",
            iterations: MAX_EIG_ITERATIONS,
        },
    )?;
    let order = ascending_order(eig.eigenvalues.as_slice());
    let m = s.order();
    let eigenvalues = DVector::from_iterator(m, order.iter().map(|&i| eig.eigenvalues[i]));
    let mut eigenvectors = DMatrix::zeros(m, m);
    for (dst, &src) in order.iter().enumerate() {
        eigenvectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// Eigendecomposition of a complex Hermitian matrix, eigenvalues ascending.
pub(crate) fn hermitian_eig(h: DMatrix<Complex64>) -> Result<(Vec<f64>, DMatrix<Complex64>)> {
    let m = h.nrows();
    let eig = SymmetricEigen::try_new(h, f64::EPSILON, MAX_EIG_ITERATIONS).ok_or(
        Error::NoConvergence {
            what: "Hermitian eigensolver",
            iterations: MAX_EIG_ITERATIONS,
        },
    )?;
    let order = ascending_order(eig.eigenvalues.as_slice());
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = DMatrix::zeros(m, m);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    Ok((values, vectors))
}

fn ascending_order(values: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    idx
}

/// `Sᵗ` for positive definite `S`. `t = 0` gives `I` and `t = 1` gives `S` exactly.
pub fn sym_pow(s: &SymMatrix, t: f64) -> Result<SymMatrix> {
    let eig = sym_eig(s)?;
    if t == 1.0 {
        eig.require_positive_definite()?;
        return Ok(s.clone());
    }
    if t == 0.0 {
        eig.require_positive_definite()?;
        return Ok(SymMatrix::identity(s.order()));
    }
    eig.pow(t)
}

pub fn sym_log(s: &SymMatrix) -> Result<SymMatrix> {
    sym_eig(s)?.log()
}

pub fn sym_exp(s: &SymMatrix) -> Result<SymMatrix> {
    Ok(sym_eig(s)?.map(f64::exp))
}

/// `M = O·P` with `O` orthogonal and `P = (MᵀM)^{1/2}` positive definite.
#[derive(Debug, Clone, PartialEq)]
pub struct Polar {
    pub orthogonal: DMatrix<f64>,
    pub positive: SymMatrix,
}

pub fn polar(m: &DMatrix<f64>) -> Result<Polar> {
    check_square_finite(m)?;
    let svd = svd(m)?;
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if smin <= PD_FLOOR * smax || smin <= 0.0 {
        return Err(Error::Singular(smin));
    }
    let u = svd.u.as_ref().expect("u requested");
    let vt = svd.v_t.as_ref().expect("v_t requested");
    let orthogonal = u * vt;
    let mut scaled_v = vt.transpose();
    for (j, &s) in svd.singular_values.iter().enumerate() {
        scaled_v.column_mut(j).scale_mut(s);
    }
    let positive = SymMatrix::symmetrized(scaled_v * vt);
    Ok(Polar {
        orthogonal,
        positive,
    })
}

/// `|X| = (XᵀX)^{1/2}`.
pub fn matrix_abs(x: &DMatrix<f64>) -> Result<SymMatrix> {
    check_square_finite(x)?;
    let svd = svd(x)?;
    let vt = svd.v_t.as_ref().expect("v_t requested");
    let mut scaled_v = vt.transpose();
    for (j, &s) in svd.singular_values.iter().enumerate() {
        scaled_v.column_mut(j).scale_mut(s);
    }
    Ok(SymMatrix::symmetrized(scaled_v * vt))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Norms {
    pub operator: f64,
    pub frobenius: f64,
    pub trace: f64,
}

pub fn norms(x: &DMatrix<f64>) -> Result<Norms> {
    check_square_finite(x)?;
    let sv = singular_values(x)?;
    Ok(Norms {
        operator: sv.iter().cloned().fold(0.0, f64::max),
        frobenius: x.norm(),
        trace: sv.iter().sum(),
    })
}

pub fn singular_values(x: &DMatrix<f64>) -> Result<Vec<f64>> {
    let svd = SVD::try_new(x.clone(), false, false, f64::EPSILON, MAX_EIG_ITERATIONS).ok_or(
        Error::NoConvergence {
            what: "singular value decomposition",
            iterations: MAX_EIG_ITERATIONS,
        },
    )?;
    Ok(svd.singular_values.iter().cloned().collect())
}

fn svd(m: &DMatrix<f64>) -> Result<SVD<f64, nalgebra::Dyn, nalgebra::Dyn>> {
    SVD::try_new(m.clone(), true, true, f64::EPSILON, MAX_EIG_ITERATIONS).ok_or(
        Error::NoConvergence {
            what: "singular value decomposition",
            iterations: MAX_EIG_ITERATIONS,
        },
    )
}

pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()))
}

pub(crate) fn check_square_finite(m: &DMatrix<f64>) -> Result<()> {
    if m.nrows() == 0 || m.nrows() != m.ncols() {
        return Err(Error::input(format!(
            "expected a non-empty square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    if m.iter().any(|x| !x.is_finite()) {
        return Err(Error::input("matrix has non-finite entries"));
    }
    Ok(())
}
