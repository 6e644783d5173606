//! The symplectic group: the standard form `J = [[0, I], [-I, 0]]`,
//! symplecticity tests, block structure, the associated matrix `M̃`, Euler
//! decompositions, and seeded random generators.

use std::collections::VecDeque;

use nalgebra::{Complex, DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::matfun::{self, SymMatrix};
use crate::williamson::PosDefMatrix;

/// Default relative tolerance for `‖MᵀJM − J‖_F ≤ tol·(1 + ‖M‖_F²)`.
pub const DEFAULT_SYMPLECTIC_TOL: f64 = 1e-9;
/// Default tolerance for row/column sums in [`is_doubly_stochastic`].
pub const DEFAULT_STOCHASTIC_TOL: f64 = 1e-8;
/// Symplectic spread used by [`random_posdef`].
pub const DEFAULT_SYMPLECTIC_SPREAD: f64 = 1.0;

/// `J = [[0, I], [-I, 0]]` of order `2n`.
pub fn standard_j(n: usize) -> DMatrix<f64> {
    let mut j = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        j[(i, n + i)] = 1.0;
        j[(n + i, i)] = -1.0;
    }
    j
}

/// Permutation `Π` with `Πᵀ (J₂ ⊕ … ⊕ J₂) Π = J`.
///
/// Block coordinate `i < n` sits at interleaved position `2i`, block
/// coordinate `n + i` at `2i + 1`.
pub fn convention_permutation(n: usize) -> DMatrix<f64> {
    let mut p = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        p[(2 * i, i)] = 1.0;
        p[(2 * i + 1, n + i)] = 1.0;
    }
    p
}

/// `J₂ ⊕ … ⊕ J₂` (`n` copies).
pub fn interleaved_j(n: usize) -> DMatrix<f64> {
    let mut j = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        j[(2 * i, 2 * i + 1)] = 1.0;
        j[(2 * i + 1, 2 * i)] = -1.0;
    }
    j
}

/// Maps a matrix given in the interleaved convention to the block convention.
pub fn interleaved_to_block(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = half_order_of(m)?;
    let p = convention_permutation(n);
    Ok(p.transpose() * m * p)
}

pub fn block_to_interleaved(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = half_order_of(m)?;
    let p = convention_permutation(n);
    Ok(&p * m * p.transpose())
}

fn half_order_of(m: &DMatrix<f64>) -> Result<usize> {
    if m.nrows() != m.ncols() || m.nrows() == 0 || m.nrows() % 2 != 0 {
        return Err(Error::input(format!(
            "expected a square matrix of even order, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(m.nrows() / 2)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymplecticityCheck {
    pub holds: bool,
    /// `‖MᵀJM − J‖_F`
    pub residual: f64,
}

pub fn is_symplectic(m: &DMatrix<f64>, tol: f64) -> Result<SymplecticityCheck> {
    let n = half_order_of(m)?;
    let j = standard_j(n);
    let residual = (m.transpose() * &j * m - &j).norm();
    let fro = m.norm();
    Ok(SymplecticityCheck {
        holds: residual <= tol * (1.0 + fro * fro),
        residual,
    })
}

/// A real `2n × 2n` matrix with `MᵀJM = J` and `det M > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticMatrix(DMatrix<f64>);

impl SymplecticMatrix {
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        Self::with_tolerance(m, DEFAULT_SYMPLECTIC_TOL)
    }

    pub fn with_tolerance(m: DMatrix<f64>, tol: f64) -> Result<Self> {
        matfun::check_square_finite(&m)?;
        let check = is_symplectic(&m, tol)?;
        if !check.holds {
            return Err(Error::input(format!(
                "matrix is not symplectic: ‖MᵀJM − J‖_F = {:e}",
                check.residual
            )));
        }
        // MᵀJM = J forces det M = ±1; the sign is the part left to check.
        let det = m.clone().lu().determinant();
        if !(det > 0.0) {
            return Err(Error::input(format!(
                "symplectic matrix must have determinant +1, got {det:e}"
            )));
        }
        Ok(SymplecticMatrix(m))
    }

    pub(crate) fn new_unchecked(m: DMatrix<f64>) -> Self {
        SymplecticMatrix(m)
    }

    pub fn j(n: usize) -> Self {
        SymplecticMatrix(standard_j(n))
    }

    pub fn identity(n: usize) -> Self {
        SymplecticMatrix(DMatrix::identity(2 * n, 2 * n))
    }

    pub fn half_order(&self) -> usize {
        self.0.nrows() / 2
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.0
    }

    pub fn is_orthogonal(&self, tol: f64) -> bool {
        let m = &self.0;
        (m.transpose() * m - DMatrix::identity(m.nrows(), m.nrows())).norm() <= tol
    }

    pub fn inverse(&self) -> SymplecticMatrix {
        // M⁻¹ = −J Mᵀ J
        let j = standard_j(self.half_order());
        SymplecticMatrix(-(&j * self.0.transpose() * &j))
    }
}

/// `M = [[A, B], [C, G]]` with `AGᵀ − BCᵀ = I`, `ABᵀ = BAᵀ`, `CGᵀ = GCᵀ`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockDecomposition {
    pub a: DMatrix<f64>,
    pub b: DMatrix<f64>,
    pub c: DMatrix<f64>,
    pub g: DMatrix<f64>,
    /// Frobenius residuals of the three block identities, in that order.
    pub residuals: [f64; 3],
}

pub fn blocks(m: &SymplecticMatrix) -> BlockDecomposition {
    let n = m.half_order();
    let mm = m.matrix();
    let a = mm.view((0, 0), (n, n)).into_owned();
    let b = mm.view((0, n), (n, n)).into_owned();
    let c = mm.view((n, 0), (n, n)).into_owned();
    let g = mm.view((n, n), (n, n)).into_owned();
    let r0 = (&a * g.transpose() - &b * c.transpose() - DMatrix::identity(n, n)).norm();
    let r1 = (&a * b.transpose() - &b * a.transpose()).norm();
    let r2 = (&c * g.transpose() - &g * c.transpose()).norm();
    BlockDecomposition {
        a,
        b,
        c,
        g,
        residuals: [r0, r1, r2],
    }
}

/// `m̃_ij = ½(a_ij² + b_ij² + c_ij² + g_ij²)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AssociatedMatrix(pub DMatrix<f64>);

impl AssociatedMatrix {
    pub fn row_sums(&self) -> Vec<f64> {
        self.0.row_iter().map(|r| r.sum()).collect()
    }

    pub fn column_sums(&self) -> Vec<f64> {
        self.0.column_iter().map(|c| c.sum()).collect()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }
}

pub fn associated_matrix(m: &SymplecticMatrix) -> AssociatedMatrix {
    let bl = blocks(m);
    let n = m.half_order();
    AssociatedMatrix(DMatrix::from_fn(n, n, |i, j| {
        0.5 * (bl.a[(i, j)].powi(2)
            + bl.b[(i, j)].powi(2)
            + bl.c[(i, j)].powi(2)
            + bl.g[(i, j)].powi(2))
    }))
}

pub fn is_doubly_stochastic(b: &DMatrix<f64>, tol: f64) -> bool {
    if b.nrows() != b.ncols() {
        return false;
    }
    b.iter().all(|&x| x >= -tol)
        && b.row_iter().all(|r| (r.sum() - 1.0).abs() <= tol)
        && b.column_iter().all(|c| (c.sum() - 1.0).abs() <= tol)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuperstochasticVerdict {
    pub holds: bool,
    /// Value of the maximum row-to-column flow; `n` when feasible.
    pub flow: f64,
    /// A doubly stochastic `P` with `p_ij ≤ b_ij + tol`, when one exists.
    pub witness: Option<DMatrix<f64>>,
}

/// Relative shortfall of the maximum flow below `n` still counted as feasible.
const FLOW_FEASIBILITY: f64 = 1e-12;
const FLOW_EPS: f64 = 1e-15;

/// Decides whether `b` dominates some doubly stochastic matrix.
///
/// Transportation network: source → row `i` (capacity 1), row `i` →
/// column `j` (capacity `b_ij + tol`), column `j` → sink (capacity 1). A
/// doubly stochastic minorant exists iff the maximum flow equals `n`, and the
/// row-to-column flows are one.
pub fn is_doubly_superstochastic(b: &DMatrix<f64>, tol: f64) -> SuperstochasticVerdict {
    let n = b.nrows();
    if n == 0 || b.ncols() != n || b.iter().any(|&x| !(x >= -tol)) {
        return SuperstochasticVerdict {
            holds: false,
            flow: 0.0,
            witness: None,
        };
    }
    let source = 2 * n;
    let sink = 2 * n + 1;
    let mut cap = DMatrix::<f64>::zeros(2 * n + 2, 2 * n + 2);
    for i in 0..n {
        cap[(source, i)] = 1.0;
        cap[(n + i, sink)] = 1.0;
        for j in 0..n {
            cap[(i, n + j)] = (b[(i, j)] + tol).max(0.0);
        }
    }
    let (flow, flows) = max_flow(&cap, source, sink);
    if flow < n as f64 * (1.0 - FLOW_FEASIBILITY) {
        return SuperstochasticVerdict {
            holds: false,
            flow,
            witness: None,
        };
    }
    let witness = DMatrix::from_fn(n, n, |i, j| flows[(i, n + j)].max(0.0));
    SuperstochasticVerdict {
        holds: true,
        flow,
        witness: Some(witness),
    }
}

/// Edmonds–Karp on a dense capacity matrix. Returns the flow value and the
/// net flow on every arc.
fn max_flow(cap: &DMatrix<f64>, source: usize, sink: usize) -> (f64, DMatrix<f64>) {
    let v = cap.nrows();
    let mut flow = DMatrix::<f64>::zeros(v, v);
    let mut total = 0.0;
    loop {
        let mut parent = vec![usize::MAX; v];
        parent[source] = source;
        let mut queue = VecDeque::from([source]);
        while let Some(x) = queue.pop_front() {
            if x == sink {
                break;
            }
            for y in 0..v {
                if parent[y] == usize::MAX && cap[(x, y)] - flow[(x, y)] > FLOW_EPS {
                    parent[y] = x;
                    queue.push_back(y);
                }
            }
        }
        if parent[sink] == usize::MAX {
            break;
        }
        let mut bottleneck = f64::INFINITY;
        let mut y = sink;
        while y != source {
            let x = parent[y];
            bottleneck = bottleneck.min(cap[(x, y)] - flow[(x, y)]);
            y = x;
        }
        let mut y = sink;
        while y != source {
            let x = parent[y];
            flow[(x, y)] += bottleneck;
            flow[(y, x)] -= bottleneck;
            y = x;
        }
        total += bottleneck;
    }
    (total, flow)
}

/// `M = O₁ (Γ ⊕ Γ⁻¹) O₂ᵀ` with `O₁`, `O₂` orthogonal and symplectic and
/// `γ₁ ≥ … ≥ γ_n ≥ 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct EulerForm {
    pub o1: DMatrix<f64>,
    pub o2: DMatrix<f64>,
    pub gamma: Vec<f64>,
}

impl EulerForm {
    pub fn half_order(&self) -> usize {
        self.gamma.len()
    }

    pub fn middle(&self) -> DMatrix<f64> {
        let diag: Vec<f64> = self
            .gamma
            .iter()
            .cloned()
            .chain(self.gamma.iter().map(|g| 1.0 / g))
            .collect();
        DMatrix::from_diagonal(&DVector::from_vec(diag))
    }

    pub fn reconstruct(&self) -> DMatrix<f64> {
        &self.o1 * self.middle() * self.o2.transpose()
    }
}

/// Mismatch allowed between an eigenvalue `γ` of the polar factor and the
/// reciprocal of its partner, relative to `γ_max`.
const PAIRING_TOL: f64 = 1e-8;

/// Euler (Bloch–Messiah) decomposition via the polar factorization.
///
/// `M = O·P` with `P` symmetric, positive definite and symplectic. If
/// `Px = γx` then `P(Jx) = γ⁻¹ Jx`, so `P` is diagonalized by an orthogonal
/// symplectic matrix `[x₁ … x_n | −Jx₁ … −Jx_n]` built from eigenvectors of
/// the `n` largest eigenvalues. Inside the eigenvalue-one cluster the vectors
/// are chosen by Gram–Schmidt against both `x_k` and `Jx_k`.
pub fn euler_decompose(m: &SymplecticMatrix) -> Result<EulerForm> {
    let n = m.half_order();
    let j = standard_j(n);
    let polar = matfun::polar(m.matrix())?;
    let eig = matfun::sym_eig(&polar.positive)?;
    let values = eig.eigenvalues.as_slice();
    let gmax = values[2 * n - 1];
    for k in 0..n {
        let big = values[2 * n - 1 - k];
        let small = values[k];
        if (small - 1.0 / big).abs() > PAIRING_TOL * gmax {
            return Err(Error::Numerical(format!(
                "eigenvalues of the polar factor do not pair: {big:e} and {small:e}"
            )));
        }
    }

    let mut xs: Vec<DVector<f64>> = Vec::with_capacity(n);
    for idx in (0..2 * n).rev() {
        if xs.len() == n {
            break;
        }
        let mut w = eig.eigenvectors.column(idx).into_owned();
        for x in &xs {
            let jx = &j * x;
            let c = x.dot(&w);
            w.axpy(-c, x, 1.0);
            let c = jx.dot(&w);
            w.axpy(-c, &jx, 1.0);
        }
        let norm = w.norm();
        if norm > 0.5 {
            xs.push(w / norm);
        }
    }
    if xs.len() != n {
        return Err(Error::Numerical(
            "could not assemble an orthogonal symplectic eigenbasis".into(),
        ));
    }

    let mut o2 = DMatrix::zeros(2 * n, 2 * n);
    for (k, x) in xs.iter().enumerate() {
        o2.set_column(k, x);
        o2.set_column(n + k, &(-(&j * x)));
    }
    let reduced = o2.transpose() * polar.positive.as_matrix() * &o2;
    let gamma: Vec<f64> = (0..n)
        .map(|k| (reduced[(k, k)] / reduced[(n + k, n + k)]).sqrt().max(1.0))
        .collect();
    let o1 = polar.orthogonal * &o2;
    Ok(EulerForm { o1, o2, gamma })
}

/// Splits an orthogonal symplectic `O = [[X, −Y], [Y, X]]` into the real and
/// imaginary parts of the unitary `U = X + iY`.
///
/// With this sign convention `J` maps to `U = −iI`, i.e. `(X, Y) = (0, −I)`.
pub fn orthosymplectic_to_unitary(
    o: &DMatrix<f64>,
    tol: f64,
) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let n = half_order_of(o)?;
    let x = o.view((0, 0), (n, n)).into_owned();
    let y = o.view((n, 0), (n, n)).into_owned();
    let rebuilt = unitary_to_orthosymplectic(&x, &y);
    let dev = (&rebuilt - o).norm();
    let orth = (o.transpose() * o - DMatrix::identity(2 * n, 2 * n)).norm();
    if dev > tol * (1.0 + o.norm()) || orth > tol * (1.0 + o.norm()) {
        return Err(Error::input(format!(
            "matrix is not orthogonal symplectic: block-form deviation {dev:e}, orthogonality defect {orth:e}"
        )));
    }
    Ok((x, y))
}

pub fn unitary_to_orthosymplectic(x: &DMatrix<f64>, y: &DMatrix<f64>) -> DMatrix<f64> {
    let n = x.nrows();
    let mut o = DMatrix::zeros(2 * n, 2 * n);
    o.view_mut((0, 0), (n, n)).copy_from(x);
    o.view_mut((0, n), (n, n)).copy_from(&(-y));
    o.view_mut((n, 0), (n, n)).copy_from(y);
    o.view_mut((n, n), (n, n)).copy_from(x);
    o
}

fn complex_from_parts(x: &DMatrix<f64>, y: &DMatrix<f64>) -> DMatrix<Complex<f64>> {
    x.zip_map(y, Complex::new)
}

/// Largest entrywise deviation between `m̃_ij` and
/// `|Σ_k δ_k u_ik v_jk|² + |Σ_k σ_k u_ik v̄_jk|²`, where `U`, `V` are the
/// unitaries of the Euler factors and `σ = ½(γ + γ⁻¹)`, `δ = ½(γ − γ⁻¹)`.
pub fn mtilde_identity_check(m: &SymplecticMatrix) -> Result<f64> {
    let euler = euler_decompose(m)?;
    let loose = 1e-6;
    let (x, y) = orthosymplectic_to_unitary(&euler.o1, loose)?;
    let (z, w) = orthosymplectic_to_unitary(&euler.o2, loose)?;
    let u = complex_from_parts(&x, &y);
    let v = complex_from_parts(&z, &w);
    let n = m.half_order();
    let sigma: Vec<f64> = euler.gamma.iter().map(|g| 0.5 * (g + 1.0 / g)).collect();
    let delta: Vec<f64> = euler.gamma.iter().map(|g| 0.5 * (g - 1.0 / g)).collect();
    let mt = associated_matrix(m);
    let mut worst = 0.0_f64;
    for i in 0..n {
        for jj in 0..n {
            let mut first = Complex::new(0.0, 0.0);
            let mut second = Complex::new(0.0, 0.0);
            for k in 0..n {
                first += u[(i, k)] * v[(jj, k)] * delta[k];
                second += u[(i, k)] * v[(jj, k)].conj() * sigma[k];
            }
            let rhs = first.norm_sqr() + second.norm_sqr();
            worst = worst.max((mt.0[(i, jj)] - rhs).abs());
        }
    }
    Ok(worst)
}

fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Haar-distributed `n × n` unitary returned as `(Re U, Im U)`.
fn random_unitary_parts<R: Rng>(rng: &mut R, n: usize) -> (DMatrix<f64>, DMatrix<f64>) {
    let g = DMatrix::from_fn(n, n, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex::new(re, im)
    });
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for k in 0..n {
        let d = r[(k, k)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex::new(1.0, 0.0) };
        for entry in q.column_mut(k).iter_mut() {
            *entry *= phase;
        }
    }
    (q.map(|z| z.re), q.map(|z| z.im))
}

pub fn random_orthosymplectic_with<R: Rng>(rng: &mut R, n: usize) -> DMatrix<f64> {
    let (x, y) = random_unitary_parts(rng, n);
    unitary_to_orthosymplectic(&x, &y)
}

/// Random orthogonal symplectic matrix, deterministic in `seed`.
pub fn random_orthosymplectic(seed: u64, n: usize) -> SymplecticMatrix {
    SymplecticMatrix::new_unchecked(random_orthosymplectic_with(&mut rng_for(seed), n))
}

/// `O₁ (Γ ⊕ Γ⁻¹) O₂ᵀ` with `log γ_j` uniform in `[0, spread]`.
pub fn random_symplectic(seed: u64, n: usize, spread: f64) -> SymplecticMatrix {
    let mut rng = rng_for(seed);
    let spread = spread.abs();
    let log_gamma: Vec<f64> = (0..n)
        .map(|_| if spread > 0.0 { rng.random_range(0.0..=spread) } else { 0.0 })
        .collect();
    symplectic_from_log_gammas(&mut rng, &log_gamma)
}

/// `O₁ (Γ ⊕ Γ⁻¹) O₂ᵀ` with prescribed `log γ` and random orthogonal symplectic factors.
pub fn random_symplectic_with_log_gammas(seed: u64, log_gamma: &[f64]) -> SymplecticMatrix {
    symplectic_from_log_gammas(&mut rng_for(seed), log_gamma)
}

fn symplectic_from_log_gammas<R: Rng>(rng: &mut R, log_gamma: &[f64]) -> SymplecticMatrix {
    let n = log_gamma.len();
    let o1 = random_orthosymplectic_with(rng, n);
    let o2 = random_orthosymplectic_with(rng, n);
    let diag: Vec<f64> = log_gamma
        .iter()
        .map(|l| l.exp())
        .chain(log_gamma.iter().map(|l| (-l).exp()))
        .collect();
    let mid = DMatrix::from_diagonal(&DVector::from_vec(diag));
    SymplecticMatrix::new_unchecked(o1 * mid * o2.transpose())
}

/// A random positive definite matrix together with its planted symplectic
/// spectrum (ascending).
#[derive(Debug, Clone, PartialEq)]
pub struct PlantedPosDef {
    pub matrix: PosDefMatrix,
    pub planted: Vec<f64>,
}

/// Parameters of [`PosDefSampler::sample`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PosDefSampler {
    /// `log d_j` is drawn uniformly from `[−condition_spread, condition_spread]`.
    pub condition_spread: f64,
    /// Spread passed to the symplectic congruence factor.
    pub symplectic_spread: f64,
    /// Plant repeated symplectic eigenvalues (about `n/2` distinct values).
    pub repeated: bool,
}

impl Default for PosDefSampler {
    fn default() -> Self {
        PosDefSampler {
            condition_spread: 1.0,
            symplectic_spread: DEFAULT_SYMPLECTIC_SPREAD,
            repeated: false,
        }
    }
}

impl PosDefSampler {
    pub fn sample(&self, seed: u64, n: usize) -> PlantedPosDef {
        let mut rng = rng_for(seed);
        let c = self.condition_spread.abs();
        let draw = |rng: &mut ChaCha8Rng| {
            if c > 0.0 {
                rng.random_range(-c..=c).exp()
            } else {
                1.0
            }
        };
        let d: Vec<f64> = if self.repeated {
            let distinct: Vec<f64> = (0..n.div_ceil(2)).map(|_| draw(&mut rng)).collect();
            (0..n).map(|j| distinct[j % distinct.len()]).collect()
        } else {
            (0..n).map(|_| draw(&mut rng)).collect()
        };
        planted_with(&mut rng, &d, self.symplectic_spread)
    }
}

/// `Sᵀ (D ⊕ D) S` with `S = random_symplectic(…, spread = 1)` and
/// `log d_j` uniform in `[−condition_spread, condition_spread]`.
pub fn random_posdef(seed: u64, n: usize, condition_spread: f64) -> PlantedPosDef {
    PosDefSampler {
        condition_spread,
        ..PosDefSampler::default()
    }
    .sample(seed, n)
}

/// `Sᵀ (D ⊕ D) S` with the given symplectic eigenvalues.
pub fn random_posdef_planted(seed: u64, d: &[f64], symplectic_spread: f64) -> PlantedPosDef {
    planted_with(&mut rng_for(seed), d, symplectic_spread)
}

fn planted_with<R: Rng>(rng: &mut R, d: &[f64], symplectic_spread: f64) -> PlantedPosDef {
    let n = d.len();
    let spread = symplectic_spread.abs();
    let log_gamma: Vec<f64> = (0..n)
        .map(|_| if spread > 0.0 { rng.random_range(0.0..=spread) } else { 0.0 })
        .collect();
    let s = symplectic_from_log_gammas(rng, &log_gamma);
    let doubled: Vec<f64> = d.iter().chain(d.iter()).cloned().collect();
    let core = DMatrix::from_diagonal(&DVector::from_vec(doubled));
    let sm = s.matrix();
    let a = SymMatrix::symmetrized(sm.transpose() * core * sm);
    let matrix = PosDefMatrix::from_sym(a).expect("congruence of a PD matrix is PD");
    let mut planted = d.to_vec();
    planted.sort_by(f64::total_cmp);
    PlantedPosDef { matrix, planted }
}
