//! Symplectic eigenvalues and Williamson normal forms.
//!
//! For a positive definite `A` of order `2n` the matrix `K = A^{1/2} J A^{1/2}`
//! is real skew-symmetric, and `iK` is Hermitian with eigenvalues `±d_j`.
//! The positive ones are the symplectic eigenvalues. A unit eigenvector
//! `x = a + ib` of `iK` for `d > 0` satisfies `|a| = |b| = 1/√2`, `a ⊥ b`, so
//! `u = √2 a`, `v = -√2 b` give the real canonical pair `Ku = -d v`, `Kv = d u`.
//! Collecting these columns into an orthogonal `O` brings `K` to
//! `[[0, D], [-D, 0]]`, and `M = A^{-1/2} O (D ⊕ D)^{1/2}` is symplectic with
//! `Mᵀ A M = D ⊕ D`.

use nalgebra::{Cholesky, Complex, DMatrix, DVector};

use crate::error::{Error, Result};
use crate::matfun::{self, hermitian_eig, SpectralDecomposition, SymMatrix};
use crate::symplectic::standard_j;

/// Relative gap between consecutive symplectic eigenvalues below which a
/// Williamson form is flagged as ill-conditioned.
pub const DEGENERACY_GAP: f64 = 1e-10;

/// Default tolerance of [`is_gaussian`].
pub const DEFAULT_GAUSSIAN_TOL: f64 = 1e-9;

/// A real symmetric positive definite matrix of even order `2n`.
///
/// The eigendecomposition computed during validation is kept, so powers and
/// square roots do not repeat it.
#[derive(Debug, Clone, PartialEq)]
pub struct PosDefMatrix {
    sym: SymMatrix,
    eig: SpectralDecomposition,
}

impl PosDefMatrix {
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        Self::from_sym(SymMatrix::new(m)?)
    }

    pub fn from_sym(sym: SymMatrix) -> Result<Self> {
        if sym.order() % 2 != 0 {
            return Err(Error::input(format!(
                "positive definite input must have even order, got {}",
                sym.order()
            )));
        }
        let eig = matfun::sym_eig(&sym)?;
        let (lo, hi) = (eig.min_eigenvalue(), eig.max_eigenvalue());
        if lo <= 0.0 || lo <= matfun::PD_FLOOR * hi {
            return Err(Error::NotPositiveDefinite {
                min_eigenvalue: lo,
                max_eigenvalue: hi,
            });
        }
        Ok(PosDefMatrix { sym, eig })
    }

    pub fn identity(n: usize) -> Self {
        Self::from_sym(SymMatrix::identity(2 * n)).expect("identity is positive definite")
    }

    /// `diag(d) ⊕ diag(d)`.
    pub fn williamson_diagonal(d: &[f64]) -> Result<Self> {
        let doubled: Vec<f64> = d.iter().chain(d.iter()).cloned().collect();
        Self::from_diagonal(&doubled)
    }

    pub fn from_diagonal(diag: &[f64]) -> Result<Self> {
        Self::from_sym(SymMatrix::from_diagonal(diag)?)
    }

    pub fn half_order(&self) -> usize {
        self.sym.order() / 2
    }

    pub fn order(&self) -> usize {
        self.sym.order()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        self.sym.as_matrix()
    }

    pub fn as_sym(&self) -> &SymMatrix {
        &self.sym
    }

    pub fn spectral(&self) -> &SpectralDecomposition {
        &self.eig
    }

    /// Ordinary eigenvalues, ascending.
    pub fn eigenvalues(&self) -> &[f64] {
        self.eig.eigenvalues.as_slice()
    }

    pub fn pow(&self, t: f64) -> Result<PosDefMatrix> {
        if t == 1.0 {
            return Ok(self.clone());
        }
        if t == 0.0 {
            return Ok(PosDefMatrix::identity(self.half_order()));
        }
        PosDefMatrix::from_sym(self.eig.pow(t)?)
    }

    pub fn sqrt(&self) -> SymMatrix {
        self.eig.map(f64::sqrt)
    }

    pub fn inv_sqrt(&self) -> SymMatrix {
        self.eig.map(|l| 1.0 / l.sqrt())
    }

    pub fn log(&self) -> SymMatrix {
        self.eig.map(f64::ln)
    }

    pub fn inverse(&self) -> PosDefMatrix {
        PosDefMatrix::from_sym(self.eig.map(|l| 1.0 / l)).expect("inverse of a PD matrix is PD")
    }

    pub fn scaled(&self, c: f64) -> Result<PosDefMatrix> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::input(format!("scale must be positive, got {c}")));
        }
        PosDefMatrix::new(self.matrix() * c)
    }

    /// `Sᵀ A S` for any invertible `S`.
    pub fn congruence(&self, s: &DMatrix<f64>) -> Result<PosDefMatrix> {
        PosDefMatrix::from_sym(SymMatrix::symmetrized(s.transpose() * self.matrix() * s))
    }

    pub fn add(&self, other: &PosDefMatrix) -> Result<PosDefMatrix> {
        same_order(self, other)?;
        PosDefMatrix::from_sym(SymMatrix::symmetrized(self.matrix() + other.matrix()))
    }
}

pub(crate) fn same_order(a: &PosDefMatrix, b: &PosDefMatrix) -> Result<()> {
    if a.order() != b.order() {
        return Err(Error::input(format!(
            "order mismatch: {} vs {}",
            a.order(),
            b.order()
        )));
    }
    Ok(())
}

/// Symplectic eigenvalues `d` (ascending) and the doubled vector `d̂`
/// (each value twice, descending).
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticSpectrum {
    pub d: Vec<f64>,
    pub d_hat: Vec<f64>,
}

impl SymplecticSpectrum {
    pub fn from_ascending(d: Vec<f64>) -> Self {
        let d_hat = doubled_descending(&d);
        SymplecticSpectrum { d, d_hat }
    }

    pub fn half_order(&self) -> usize {
        self.d.len()
    }

    pub fn smallest(&self) -> f64 {
        self.d[0]
    }

    pub fn largest(&self) -> f64 {
        self.d[self.d.len() - 1]
    }
}

/// Each entry twice, sorted descending.
pub fn doubled_descending(d: &[f64]) -> Vec<f64> {
    let mut v: Vec<f64> = d.iter().flat_map(|&x| [x, x]).collect();
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

fn skew_core(a: &PosDefMatrix) -> DMatrix<f64> {
    let root = a.sqrt();
    let r = root.as_matrix();
    let k = r * standard_j(a.half_order()) * r;
    // exact skew-symmetry
    (&k - k.transpose()) * 0.5
}

fn times_i(k: &DMatrix<f64>) -> DMatrix<Complex<f64>> {
    k.map(|x| Complex::new(0.0, x))
}

pub fn symplectic_spectrum(a: &PosDefMatrix) -> Result<SymplecticSpectrum> {
    let n = a.half_order();
    let (values, _) = hermitian_eig(times_i(&skew_core(a)))?;
    Ok(SymplecticSpectrum::from_ascending(paired_moduli(&values, n)?))
}

/// Averages the mirrored eigenvalues `±d_j` of `iK`.
fn paired_moduli(values: &[f64], n: usize) -> Result<Vec<f64>> {
    let d: Vec<f64> = (0..n)
        .map(|j| 0.5 * (values[n + j] - values[n - 1 - j]))
        .collect();
    if d[0] <= 0.0 || !d.iter().all(|x| x.is_finite()) {
        return Err(Error::Numerical(format!(
            "symplectic eigenvalues are not positive: {d:?}"
        )));
    }
    Ok(d)
}

/// `Mᵀ A M = diag(d) ⊕ diag(d)` with `M` symplectic.
#[derive(Debug, Clone, PartialEq)]
pub struct WilliamsonForm {
    pub m: DMatrix<f64>,
    pub d: Vec<f64>,
    /// Smallest gap between consecutive symplectic eigenvalues, relative to `d_n`.
    pub min_relative_gap: f64,
    /// Set when `min_relative_gap` is below [`DEGENERACY_GAP`]. The form is
    /// still valid, but `M` is far from unique.
    pub near_degenerate: bool,
}

impl WilliamsonForm {
    pub fn half_order(&self) -> usize {
        self.d.len()
    }

    pub fn diagonal(&self) -> DMatrix<f64> {
        let doubled: Vec<f64> = self.d.iter().chain(self.d.iter()).cloned().collect();
        DMatrix::from_diagonal(&DVector::from_vec(doubled))
    }

    /// `(‖MᵀJM − J‖_F, ‖MᵀAM − D⊕D‖_F)`.
    pub fn residuals(&self, a: &PosDefMatrix) -> (f64, f64) {
        let j = standard_j(self.half_order());
        let symp = (self.m.transpose() * &j * &self.m - &j).norm();
        let diag = (self.m.transpose() * a.matrix() * &self.m - self.diagonal()).norm();
        (symp, diag)
    }
}

pub fn williamson_form(a: &PosDefMatrix) -> Result<WilliamsonForm> {
    let n = a.half_order();
    let k = skew_core(a);
    let (values, vectors) = hermitian_eig(times_i(&k))?;
    let d = paired_moduli(&values, n)?;

    let sqrt2 = std::f64::consts::SQRT_2;
    let mut pairs = Vec::with_capacity(n);
    for j in 0..n {
        let x = vectors.column(n + j);
        let u = DVector::from_iterator(2 * n, x.iter().map(|z| sqrt2 * z.re));
        let mut v = DVector::from_iterator(2 * n, x.iter().map(|z| -sqrt2 * z.im));
        if u.dot(&(&k * &v)) < 0.0 {
            v = -v;
        }
        pairs.push((u, v));
    }
    reorthonormalize(&mut pairs);

    let mut o = DMatrix::zeros(2 * n, 2 * n);
    for (j, (u, v)) in pairs.iter().enumerate() {
        o.set_column(j, u);
        o.set_column(n + j, v);
    }
    let mut m = a.inv_sqrt().into_matrix() * o;
    for j in 0..n {
        let s = d[j].sqrt();
        m.column_mut(j).scale_mut(s);
        m.column_mut(n + j).scale_mut(s);
    }

    let min_relative_gap = d
        .windows(2)
        .map(|w| (w[1] - w[0]) / d[n - 1])
        .fold(f64::INFINITY, f64::min);
    Ok(WilliamsonForm {
        m,
        near_degenerate: min_relative_gap < DEGENERACY_GAP,
        min_relative_gap,
        d,
    })
}

/// Modified Gram–Schmidt in the order `u₁, v₁, u₂, v₂, …`. In exact arithmetic
/// the columns are already orthonormal; this removes rounding drift inside
/// clusters of equal eigenvalues.
fn reorthonormalize(pairs: &mut [(DVector<f64>, DVector<f64>)]) {
    let mut done: Vec<DVector<f64>> = Vec::with_capacity(2 * pairs.len());
    for (u, v) in pairs.iter_mut() {
        for w in [u, v] {
            for q in &done {
                let c = q.dot(w);
                w.axpy(-c, q, 1.0);
            }
            let norm = w.norm();
            w.scale_mut(1.0 / norm);
            done.push(w.clone());
        }
    }
}

/// Pairs `(u_j, v_j)` with `A u_j = d_j J v_j`, `A v_j = -d_j J u_j` and
/// `⟨u_i, J v_j⟩ = δ_ij`. These are the columns of the Williamson `M`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticEigenbasis {
    pub pairs: Vec<(DVector<f64>, DVector<f64>)>,
    pub d: Vec<f64>,
}

impl SymplecticEigenbasis {
    pub fn from_form(form: &WilliamsonForm) -> Self {
        let n = form.half_order();
        let pairs = (0..n)
            .map(|j| {
                (
                    form.m.column(j).into_owned(),
                    form.m.column(n + j).into_owned(),
                )
            })
            .collect();
        SymplecticEigenbasis {
            pairs,
            d: form.d.clone(),
        }
    }

    /// `2n × 2k` matrix with columns `u₁…u_k | v₁…v_k`.
    pub fn leading_columns(&self, k: usize) -> DMatrix<f64> {
        let rows = self.pairs[0].0.len();
        let mut m = DMatrix::zeros(rows, 2 * k);
        for j in 0..k {
            m.set_column(j, &self.pairs[j].0);
            m.set_column(k + j, &self.pairs[j].1);
        }
        m
    }
}

pub fn symplectic_eigenbasis(a: &PosDefMatrix) -> Result<SymplecticEigenbasis> {
    Ok(SymplecticEigenbasis::from_form(&williamson_form(a)?))
}

/// Eigenvalues of `A^♯ = i A⁻¹ J`, descending.
///
/// `A^♯` is Hermitian for the inner product `⟨x, Ay⟩`. With `A = LLᵀ` it is
/// similar to the ordinary Hermitian matrix `i L⁻¹ J L⁻ᵀ`, whose spectrum
/// should be `1/d₁ ≥ … ≥ 1/d_n ≥ −1/d_n ≥ … ≥ −1/d₁`.
pub fn sharp_spectrum(a: &PosDefMatrix) -> Result<Vec<f64>> {
    let n = a.half_order();
    let chol = Cholesky::new(a.matrix().clone())
        .ok_or_else(|| Error::Numerical("Cholesky factorization failed".into()))?;
    let l = chol.l();
    let mut x = standard_j(n);
    // x = L⁻¹ J L⁻ᵀ
    if !l.solve_lower_triangular_mut(&mut x) {
        return Err(Error::Numerical("triangular solve failed".into()));
    }
    let mut xt = x.transpose();
    if !l.solve_lower_triangular_mut(&mut xt) {
        return Err(Error::Numerical("triangular solve failed".into()));
    }
    let skew = -xt;
    let skew = (&skew - skew.transpose()) * 0.5;
    let (mut values, _) = hermitian_eig(times_i(&skew))?;
    values.reverse();
    Ok(values)
}

/// `d₁(A) ≥ 1/2 − tol`, i.e. `A ± (i/2)J ≥ 0`.
pub fn is_gaussian(a: &PosDefMatrix, tol: f64) -> Result<bool> {
    Ok(symplectic_spectrum(a)?.smallest() >= 0.5 - tol)
}
