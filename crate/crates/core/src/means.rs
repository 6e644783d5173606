//! Riemannian geometry of the positive definite cone: distance, geodesics,
//! the two-matrix geometric mean and the weighted Karcher mean.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::matfun::{self, SymMatrix};
use crate::williamson::{same_order, PosDefMatrix};

/// Allowed deviation of `Σ w_j` from one.
pub const WEIGHT_SUM_TOL: f64 = 1e-12;
/// Relative residual tolerance used when [`KarcherOptions::tol`] is unset.
pub const DEFAULT_KARCHER_RTOL: f64 = 1e-9;
pub const DEFAULT_KARCHER_MAX_ITER: usize = 200;
/// Walk steps per matrix before the fixed-point phase.
pub const DEFAULT_WALK_STEPS_PER_MATRIX: usize = 30;
const MAX_HALVINGS: usize = 40;

#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector(Vec<f64>);

impl WeightVector {
    pub fn new(w: Vec<f64>) -> Result<Self> {
        if w.is_empty() {
            return Err(Error::input("weight vector is empty"));
        }
        if let Some(bad) = w.iter().find(|x| !(**x > 0.0 && x.is_finite())) {
            return Err(Error::input(format!("weights must be positive, got {bad}")));
        }
        let sum: f64 = w.iter().sum();
        if (sum - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::input(format!("weights must sum to 1, got {sum}")));
        }
        Ok(WeightVector(w))
    }

    pub fn uniform(m: usize) -> Self {
        WeightVector(vec![1.0 / m as f64; m.max(1)])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

/// Eigenvalues of `A⁻¹B`, via `L⁻¹ B L⁻ᵀ` with `A = LLᵀ`.
fn relative_eigenvalues(a: &PosDefMatrix, b: &PosDefMatrix) -> Result<Vec<f64>> {
    same_order(a, b)?;
    let chol = a
        .matrix()
        .clone()
        .cholesky()
        .ok_or_else(|| Error::Numerical("Cholesky factorization failed".into()))?;
    let l = chol.l();
    let left = l
        .solve_lower_triangular(b.matrix())
        .ok_or_else(|| Error::Numerical("triangular solve failed".into()))?;
    let c = l
        .solve_lower_triangular(&left.transpose())
        .ok_or_else(|| Error::Numerical("triangular solve failed".into()))?;
    let eig = matfun::sym_eig(&SymMatrix::symmetrized(c))?;
    Ok(eig.eigenvalues.iter().cloned().collect())
}

/// `δ(A, B) = (Σ log² λ_i(A⁻¹B))^{1/2}`.
pub fn riemannian_distance(a: &PosDefMatrix, b: &PosDefMatrix) -> Result<f64> {
    let ev = relative_eigenvalues(a, b)?;
    Ok(ev.iter().map(|l| l.ln().powi(2)).sum::<f64>().sqrt())
}

/// `A^{-1/2} B A^{-1/2}`.
fn whitened(a: &PosDefMatrix, b: &PosDefMatrix) -> SymMatrix {
    let r = a.inv_sqrt();
    SymMatrix::symmetrized(r.as_matrix() * b.matrix() * r.as_matrix())
}

/// `A #_t B = A^{1/2} (A^{-1/2} B A^{-1/2})ᵗ A^{1/2}` for `t ∈ [0, 1]`.
pub fn geodesic(a: &PosDefMatrix, b: &PosDefMatrix, t: f64) -> Result<PosDefMatrix> {
    same_order(a, b)?;
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::input(format!("geodesic parameter must lie in [0, 1], got {t}")));
    }
    if t == 0.0 {
        return Ok(a.clone());
    }
    if t == 1.0 {
        return Ok(b.clone());
    }
    let inner = matfun::sym_pow(&whitened(a, b), t)?;
    let h = a.sqrt();
    PosDefMatrix::from_sym(SymMatrix::symmetrized(
        h.as_matrix() * inner.as_matrix() * h.as_matrix(),
    ))
}

/// `A # B`, the midpoint of the geodesic.
pub fn geometric_mean(a: &PosDefMatrix, b: &PosDefMatrix) -> Result<PosDefMatrix> {
    geodesic(a, b, 0.5)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KarcherOptions {
    /// Absolute residual tolerance; `None` means `1e-9·‖X‖_op` at the iterate.
    pub tol: Option<f64>,
    /// Budget of the fixed-point phase.
    pub max_iter: usize,
    /// Walk steps before the fixed-point phase; `None` means `30m`.
    pub walk_steps: Option<usize>,
}

impl Default for KarcherOptions {
    fn default() -> Self {
        KarcherOptions {
            tol: None,
            max_iter: DEFAULT_KARCHER_MAX_ITER,
            walk_steps: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KarcherResult {
    pub mean: PosDefMatrix,
    /// `‖Σ w_j log(X^{1/2} A_j⁻¹ X^{1/2})‖_F` at `mean`.
    pub residual: f64,
    /// Fixed-point iterations performed.
    pub iterations: usize,
    pub converged: bool,
}

fn check_family(matrices: &[PosDefMatrix], w: &WeightVector) -> Result<()> {
    if matrices.is_empty() {
        return Err(Error::input("need at least one matrix"));
    }
    if matrices.len() != w.len() {
        return Err(Error::input(format!(
            "{} matrices but {} weights",
            matrices.len(),
            w.len()
        )));
    }
    for a in &matrices[1..] {
        same_order(&matrices[0], a)?;
    }
    Ok(())
}

/// `Σ w_j log(X^{-1/2} A_j X^{-1/2})`, the negated Karcher-equation residual in
/// the frame of `X`, together with the Richardson step
/// `2 / Σ w_j φ(c_j)`, `φ(c) = (c + 1)/(c − 1)·log c`, where `c_j` is the
/// condition number of `X^{-1/2} A_j X^{-1/2}` and `φ(1) = 2`.
fn karcher_gradient(
    x: &PosDefMatrix,
    matrices: &[PosDefMatrix],
    w: &[f64],
) -> Result<(DMatrix<f64>, f64)> {
    let r = x.inv_sqrt();
    let n = x.order();
    let mut g = DMatrix::zeros(n, n);
    let mut curvature = 0.0;
    for (a, &wj) in matrices.iter().zip(w) {
        let c = SymMatrix::symmetrized(r.as_matrix() * a.matrix() * r.as_matrix());
        let eig = matfun::sym_eig(&c)?;
        g += eig.log()?.into_matrix() * wj;
        let lc = (eig.max_eigenvalue() / eig.min_eigenvalue()).ln();
        // (c + 1)/(c − 1)·log c = log c / tanh(log c / 2)
        let phi = if lc > 1e-8 { lc / (0.5 * lc).tanh() } else { 2.0 };
        curvature += wj * phi;
    }
    Ok((g, 2.0 / curvature))
}

pub fn karcher_residual(x: &PosDefMatrix, matrices: &[PosDefMatrix], w: &WeightVector) -> Result<f64> {
    check_family(matrices, w)?;
    same_order(x, &matrices[0])?;
    Ok(karcher_gradient(x, matrices, w.as_slice())?.0.norm())
}

/// Iterates `S_1 = A_1`, `S_{k+1} = S_k #_{t_k} A_{k̄}` with `k̄ = k mod m` and
/// `t_k = w_{k̄} / (weights seen so far, including w_{k̄})`. For uniform
/// weights `t_k = 1/(k+1)`.
pub fn karcher_walk(
    matrices: &[PosDefMatrix],
    w: &WeightVector,
    steps: usize,
) -> Result<Vec<PosDefMatrix>> {
    check_family(matrices, w)?;
    let m = matrices.len();
    let w = w.as_slice();
    let mut iterates = Vec::with_capacity(steps.max(1));
    let mut s = matrices[0].clone();
    let mut seen = w[0];
    iterates.push(s.clone());
    for k in 1..steps {
        let j = k % m;
        seen += w[j];
        s = geodesic(&s, &matrices[j], w[j] / seen)?;
        iterates.push(s.clone());
    }
    Ok(iterates)
}

/// Weighted Karcher mean: a walk to get near the mean, then the fixed point
/// `X ← X^{1/2} exp(θ Σ w_j log(X^{-1/2} A_j X^{-1/2})) X^{1/2}`. The step
/// `θ` starts from the curvature estimate of [`karcher_gradient`] (which is 1
/// when the matrices are close to `X`) and is halved whenever the residual
/// would grow.
pub fn karcher_mean(
    matrices: &[PosDefMatrix],
    w: &WeightVector,
    opts: &KarcherOptions,
) -> Result<KarcherResult> {
    check_family(matrices, w)?;
    let m = matrices.len();
    let weights = w.as_slice();
    if m == 1 {
        return Ok(KarcherResult {
            mean: matrices[0].clone(),
            residual: 0.0,
            iterations: 0,
            converged: true,
        });
    }
    let steps = opts.walk_steps.unwrap_or(DEFAULT_WALK_STEPS_PER_MATRIX * m);
    let mut x = if steps > 0 {
        karcher_walk(matrices, w, steps)?
            .pop()
            .expect("walk yields at least one iterate")
    } else {
        matrices[0].clone()
    };
    let tol_at = |x: &PosDefMatrix| opts.tol.unwrap_or(DEFAULT_KARCHER_RTOL * x.spectral().max_eigenvalue());

    let (mut g, mut step) = karcher_gradient(&x, matrices, weights)?;
    let mut residual = g.norm();
    let mut iterations = 0;
    while residual > tol_at(&x) && iterations < opts.max_iter {
        iterations += 1;
        let h = x.sqrt();
        let mut theta = step;
        let mut accepted = None;
        for _ in 0..MAX_HALVINGS {
            let step = matfun::sym_exp(&SymMatrix::symmetrized(&g * theta))?;
            let candidate = PosDefMatrix::from_sym(SymMatrix::symmetrized(
                h.as_matrix() * step.as_matrix() * h.as_matrix(),
            ))?;
            let (cg, cs) = karcher_gradient(&candidate, matrices, weights)?;
            let cr = cg.norm();
            if cr < residual {
                accepted = Some((candidate, cg, cs, cr));
                break;
            }
            theta *= 0.5;
        }
        match accepted {
            Some((candidate, cg, cs, cr)) => {
                x = candidate;
                g = cg;
                step = cs;
                residual = cr;
            }
            None => break,
        }
    }
    let converged = residual <= tol_at(&x);
    Ok(KarcherResult {
        mean: x,
        residual,
        iterations,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::random_posdef;
    use std::f64::consts::E;

    fn diag(d: &[f64]) -> PosDefMatrix {
        PosDefMatrix::from_diagonal(d).unwrap()
    }

    fn rel(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn weights() {
        assert!(WeightVector::new(vec![0.5, 0.5]).is_ok());
        assert!(WeightVector::new(vec![0.5, 0.6]).is_err());
        assert!(WeightVector::new(vec![1.0, 0.0]).is_err());
        assert!(WeightVector::new(vec![]).is_err());
        assert_eq!(WeightVector::uniform(4).as_slice(), &[0.25; 4]);
    }

    #[test]
    fn distance_examples() {
        let a = random_posdef(1, 2, 1.0).matrix;
        assert!(riemannian_distance(&a, &a).unwrap() < 1e-12);
        let d = riemannian_distance(&PosDefMatrix::identity(1), &diag(&[E, 1.0 / E])).unwrap();
        assert!((d - 2.0_f64.sqrt()).abs() < 1e-14);
        assert!(riemannian_distance(&PosDefMatrix::identity(1), &PosDefMatrix::identity(2)).is_err());
    }

    #[test]
    fn distance_matches_whitened_log() {
        for seed in 0..20 {
            let a = random_posdef(seed, 3, 1.5).matrix;
            let b = random_posdef(seed + 100, 3, 1.5).matrix;
            let oracle = matfun::sym_log(&whitened(&a, &b)).unwrap().as_matrix().norm();
            let d = riemannian_distance(&a, &b).unwrap();
            assert!((d - oracle).abs() <= 1e-9 * (1.0 + oracle));
            assert!((d - riemannian_distance(&b, &a).unwrap()).abs() <= 1e-9 * (1.0 + d));
        }
    }

    #[test]
    fn geodesic_examples() {
        let a = random_posdef(3, 2, 1.0).matrix;
        let b = random_posdef(4, 2, 1.0).matrix;
        assert_eq!(geodesic(&a, &b, 0.0).unwrap(), a);
        assert_eq!(geodesic(&a, &b, 1.0).unwrap(), b);
        assert!(geodesic(&a, &b, 1.5).is_err());
        assert!(geodesic(&a, &b, -0.1).is_err());

        let g = geodesic(&diag(&[1.0, 9.0]), &diag(&[9.0, 1.0]), 0.5).unwrap();
        assert!((g.matrix() - DMatrix::from_diagonal_element(2, 2, 3.0)).norm() < 1e-12);
    }

    #[test]
    fn geodesic_has_constant_speed() {
        for seed in 0..20 {
            let a = random_posdef(seed, 2, 1.5).matrix;
            let b = random_posdef(seed + 50, 2, 1.5).matrix;
            let t = 0.1 + 0.04 * seed as f64;
            let full = riemannian_distance(&a, &b).unwrap();
            let part = riemannian_distance(&a, &geodesic(&a, &b, t).unwrap()).unwrap();
            assert!((part - t * full).abs() <= 1e-8 * (1.0 + full));
        }
    }

    #[test]
    fn geometric_mean_examples() {
        let a = random_posdef(9, 2, 1.0).matrix;
        assert!(rel(geometric_mean(&a, &a).unwrap().matrix(), a.matrix()) < 1e-12);
        let g = geometric_mean(&PosDefMatrix::identity(1), &diag(&[4.0, 0.25])).unwrap();
        assert!((g.matrix() - DMatrix::from_diagonal(&nalgebra::dvector![2.0, 0.5])).norm() < 1e-12);
        for seed in 0..10 {
            let a = random_posdef(seed, 3, 1.5).matrix;
            let b = random_posdef(seed + 7, 3, 1.5).matrix;
            let ab = geometric_mean(&a, &b).unwrap();
            let ba = geometric_mean(&b, &a).unwrap();
            assert!(rel(ab.matrix(), ba.matrix()) <= 1e-9);
        }
    }

    #[test]
    fn karcher_examples() {
        let a = random_posdef(2, 2, 1.0).matrix;
        let triple = vec![a.clone(), a.clone(), a.clone()];
        let r = karcher_mean(&triple, &WeightVector::uniform(3), &KarcherOptions::default()).unwrap();
        assert!(r.converged);
        assert!(rel(r.mean.matrix(), a.matrix()) < 1e-10);

        let ds = [diag(&[1.0, 2.0]), diag(&[8.0, 4.0]), diag(&[27.0, 1.0])];
        let r = karcher_mean(&ds, &WeightVector::uniform(3), &KarcherOptions::default()).unwrap();
        let expected = DMatrix::from_diagonal(&nalgebra::dvector![6.0, 2.0]);
        assert!(rel(r.mean.matrix(), &expected) < 1e-10);
        assert!(karcher_residual(&diag(&[6.0, 2.0]), &ds, &WeightVector::uniform(3)).unwrap() < 1e-12);

        let single = [a.clone()];
        let one = WeightVector::new(vec![1.0]).unwrap();
        assert!(karcher_residual(&a, &single, &one).unwrap() < 1e-12);
    }

    #[test]
    fn karcher_two_point_reduces_to_geodesic() {
        for seed in 0..10 {
            let a = random_posdef(seed, 2, 2.0).matrix;
            let b = random_posdef(seed + 30, 2, 2.0).matrix;
            let t = 0.2 + 0.05 * seed as f64;
            let w = WeightVector::new(vec![1.0 - t, t]).unwrap();
            let r = karcher_mean(&[a.clone(), b.clone()], &w, &KarcherOptions::default()).unwrap();
            assert!(r.converged);
            let g = geodesic(&a, &b, t).unwrap();
            assert!(rel(r.mean.matrix(), g.matrix()) <= 1e-7);
        }
    }

    #[test]
    fn karcher_random_triples_converge() {
        for seed in 0..20 {
            let n = 1 + seed as usize % 4;
            let ms: Vec<_> = (0..3).map(|k| random_posdef(seed * 3 + k, n, 2.0).matrix).collect();
            let w = WeightVector::uniform(3);
            let r = karcher_mean(&ms, &w, &KarcherOptions::default()).unwrap();
            assert!(r.converged, "seed {seed}: residual {:e} after {}", r.residual, r.iterations);
            let check = karcher_residual(&r.mean, &ms, &w).unwrap();
            assert!(check <= 1e-9 * r.mean.spectral().max_eigenvalue());
            let off = ms[0].scaled(1.5).unwrap();
            assert!(karcher_residual(&off, &ms, &w).unwrap() > 0.0);
        }
    }

    #[test]
    fn karcher_budget_exhaustion_reports_best_iterate() {
        let ms: Vec<_> = (0..3).map(|k| random_posdef(40 + k, 3, 3.0).matrix).collect();
        let opts = KarcherOptions {
            tol: Some(0.0),
            max_iter: 3,
            walk_steps: Some(0),
        };
        let r = karcher_mean(&ms, &WeightVector::uniform(3), &opts).unwrap();
        assert!(!r.converged);
        assert!(r.iterations <= 3);
        let check = karcher_residual(&r.mean, &ms, &WeightVector::uniform(3)).unwrap();
        assert!((check - r.residual).abs() <= 1e-12 * (1.0 + check));
    }

    #[test]
    fn karcher_weight_degeneration() {
        let ms: Vec<_> = (0..3).map(|k| random_posdef(70 + k, 2, 1.0).matrix).collect();
        let eps = 1e-6;
        let w = WeightVector::new(vec![eps, 1.0 - 2.0 * eps, eps]).unwrap();
        let r = karcher_mean(&ms, &w, &KarcherOptions::default()).unwrap();
        assert!(riemannian_distance(&r.mean, &ms[1]).unwrap() < 1e-4);
    }

    #[test]
    fn walk_cycle_distance_shrinks() {
        let ms: Vec<_> = (0..3).map(|k| random_posdef(90 + k, 2, 1.0).matrix).collect();
        let it = karcher_walk(&ms, &WeightVector::uniform(3), 300).unwrap();
        let gap = |k: usize| riemannian_distance(&it[k], &it[k + 3]).unwrap();
        assert!(gap(290) < gap(30));
        assert!(gap(150) < gap(15));
    }
}
