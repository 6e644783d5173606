//! One checker per inequality, each producing a self-contained
//! [`TheoremReport`], and a seeded suite that runs them on random instances.

use std::fmt;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::majorization;
use crate::matfun::{self, SymMatrix};
use crate::means::{self, KarcherOptions, WeightVector};
use crate::sops::{self, SPartition};
use crate::symplectic::{self, PosDefSampler, SymplecticMatrix};
use crate::williamson::{self, PosDefMatrix, SymplecticSpectrum};

/// Default tolerance: absolute for log-domain margins, relative to the
/// largest quantity for linear-domain margins.
pub const DEFAULT_TOL: f64 = 1e-9;
/// Looser default for comparisons that go through an iterative solver or a
/// second spectral route.
pub const ITERATIVE_TOL: f64 = 1e-8;
/// Margins within this distance of zero are reported as [`Status::Boundary`]
/// when the tolerance is zero.
pub const BOUNDARY_BAND: f64 = 1e-12;
/// Random restriction matrices sampled per Theorem 5 instance.
pub const THEOREM5_SAMPLES: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TheoremId {
    /// Powers: `d̂(Aᵗ)` against `d̂ᵗ(A)`, with the top-k product corollary.
    Thm1,
    /// Weighted two-point geometric mean.
    Thm3,
    /// Weighted Karcher mean.
    Thm4,
    /// Trace and determinant minimum over symplectic restrictions.
    Thm5,
    /// Superadditivity of partial sums and squared products.
    Superadd,
    /// `M̃` is doubly superstochastic; stochastic iff `M` is orthogonal.
    Thm6,
    /// Perturbation bounds.
    Thm7,
    /// Interlacing for s-principal submatrices.
    Interlace,
    /// s-pinching supermajorization and its Schur-concave corollary.
    Pinch,
    /// Symplectic against ordinary eigenvalues.
    Thm11,
    /// Gaussian covariances form a geodesically convex set.
    Cor8,
    /// Minmax principle via the spectrum of `A^♯ = iA⁻¹J`.
    Minmax,
}

impl TheoremId {
    pub const ALL: [TheoremId; 12] = [
        TheoremId::Thm1,
        TheoremId::Thm3,
        TheoremId::Thm4,
        TheoremId::Thm5,
        TheoremId::Superadd,
        TheoremId::Thm6,
        TheoremId::Thm7,
        TheoremId::Interlace,
        TheoremId::Pinch,
        TheoremId::Thm11,
        TheoremId::Cor8,
        TheoremId::Minmax,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TheoremId::Thm1 => "thm1",
            TheoremId::Thm3 => "thm3",
            TheoremId::Thm4 => "thm4",
            TheoremId::Thm5 => "thm5",
            TheoremId::Superadd => "superadd",
            TheoremId::Thm6 => "thm6",
            TheoremId::Thm7 => "thm7",
            TheoremId::Interlace => "interlace",
            TheoremId::Pinch => "pinch",
            TheoremId::Thm11 => "thm11",
            TheoremId::Cor8 => "cor8",
            TheoremId::Minmax => "minmax",
        }
    }

    /// Accepts the names of [`TheoremId::as_str`] and bare theorem numbers.
    pub fn parse(s: &str) -> Option<TheoremId> {
        let key = s.trim().to_ascii_lowercase();
        let alias = match key.as_str() {
            "1" => "thm1",
            "3" => "thm3",
            "4" => "thm4",
            "5" => "thm5",
            "6" => "thm6",
            "7" => "thm7",
            "11" => "thm11",
            other => other,
        };
        TheoremId::ALL.into_iter().find(|id| id.as_str() == alias)
    }

    fn index(self) -> u64 {
        TheoremId::ALL.iter().position(|&t| t == self).unwrap() as u64
    }

    pub fn default_tolerance(self) -> f64 {
        match self {
            TheoremId::Thm4 | TheoremId::Pinch | TheoremId::Minmax => ITERATIVE_TOL,
            _ => DEFAULT_TOL,
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// `lhs relation rhs`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    LogMajorizedBy,
    WeaklyMajorizedBy,
    SuperMajorizedBy,
    ElementwiseLe,
    ElementwiseEq,
}

/// How margins are measured. `Log` compares logarithms of positive
/// quantities (absolute scale); `Linear` compares raw values and divides the
/// margin by the largest magnitude involved.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    Log,
    Linear,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub label: String,
    pub relation: Relation,
    pub domain: Domain,
    pub lhs: Vec<f64>,
    pub rhs: Vec<f64>,
    /// Normalized signed margin; negative when the relation is violated.
    pub margin: f64,
}

impl Comparison {
    pub fn new(
        label: impl Into<String>,
        relation: Relation,
        domain: Domain,
        lhs: Vec<f64>,
        rhs: Vec<f64>,
    ) -> Result<Self> {
        let mut c = Comparison {
            label: label.into(),
            relation,
            domain,
            lhs,
            rhs,
            margin: 0.0,
        };
        c.margin = c.evaluate()?;
        Ok(c)
    }

    fn scale(&self) -> f64 {
        match self.domain {
            Domain::Log => 1.0,
            Domain::Linear => {
                let m = self.lhs.iter().chain(&self.rhs).fold(0.0_f64, |m, v| m.max(v.abs()));
                if m > 0.0 {
                    m
                } else {
                    1.0
                }
            }
        }
    }

    /// Recomputes the normalized margin from `lhs` and `rhs`.
    pub fn evaluate(&self) -> Result<f64> {
        if self.lhs.len() != self.rhs.len() {
            return Err(Error::input(format!(
                "comparison '{}' has sides of length {} and {}",
                self.label,
                self.lhs.len(),
                self.rhs.len()
            )));
        }
        let log = |v: &[f64]| -> Result<Vec<f64>> {
            v.iter()
                .map(|&x| {
                    if x > 0.0 {
                        Ok(x.ln())
                    } else {
                        Err(Error::Domain(format!("non-positive value {x} in a log comparison")))
                    }
                })
                .collect()
        };
        let (l, r) = match (self.relation, self.domain) {
            (Relation::LogMajorizedBy, _) | (_, Domain::Linear) => (self.lhs.clone(), self.rhs.clone()),
            (_, Domain::Log) => (log(&self.lhs)?, log(&self.rhs)?),
        };
        let raw = match self.relation {
            Relation::LogMajorizedBy => majorization::log_majorizes(&r, &l, 0.0)?.worst_margin,
            Relation::WeaklyMajorizedBy => majorization::weakly_majorizes(&r, &l, 0.0)?.worst_margin,
            Relation::SuperMajorizedBy => majorization::supermajorizes(&r, &l, 0.0)?.worst_margin,
            Relation::ElementwiseLe => l
                .iter()
                .zip(&r)
                .map(|(a, b)| b - a)
                .fold(f64::INFINITY, f64::min),
            Relation::ElementwiseEq => -l
                .iter()
                .zip(&r)
                .map(|(a, b)| (b - a).abs())
                .fold(0.0, f64::max),
        };
        let raw = if raw == f64::INFINITY { 0.0 } else { raw };
        Ok(raw / self.scale())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    /// Violated by less than [`BOUNDARY_BAND`] under a zero tolerance.
    Boundary,
    /// The instance could not be evaluated faithfully (e.g. the Karcher mean
    /// did not converge); not a failure of the inequality.
    Inconclusive,
    /// A numerical error interrupted the check.
    Error,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Boundary => "boundary",
            Status::Inconclusive => "inconclusive",
            Status::Error => "error",
        }
    }

    pub fn is_failure(self) -> bool {
        matches!(self, Status::Fail | Status::Error)
    }
}

/// Identifies an instance: generating seed, half-order and parameters.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct InstanceDigest {
    pub seed: Option<u64>,
    pub trial: Option<usize>,
    pub n: usize,
    pub params: String,
}

impl fmt::Display for InstanceDigest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.seed {
            Some(s) => write!(f, "seed={s:#018x};n={}", self.n)?,
            None => write!(f, "n={}", self.n)?,
        }
        if !self.params.is_empty() {
            write!(f, ";{}", self.params)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TheoremReport {
    pub theorem_id: TheoremId,
    pub digest: InstanceDigest,
    pub comparisons: Vec<Comparison>,
    /// Smallest normalized comparison margin.
    pub margin: f64,
    /// `margin ≥ −tolerance`.
    pub holds: bool,
    pub tolerance: f64,
    pub status: Status,
    pub note: Option<String>,
}

impl TheoremReport {
    fn from_comparisons(
        theorem_id: TheoremId,
        n: usize,
        params: String,
        comparisons: Vec<Comparison>,
        tolerance: f64,
    ) -> Self {
        let margin = combined_margin(comparisons.iter().map(|c| c.margin));
        let holds = margin >= -tolerance;
        let status = if holds {
            Status::Pass
        } else if tolerance == 0.0 && margin >= -BOUNDARY_BAND {
            Status::Boundary
        } else {
            Status::Fail
        };
        TheoremReport {
            theorem_id,
            digest: InstanceDigest {
                seed: None,
                trial: None,
                n,
                params,
            },
            comparisons,
            margin,
            holds,
            tolerance,
            status,
            note: None,
        }
    }

    fn inconclusive(mut self, note: impl Into<String>) -> Self {
        self.status = Status::Inconclusive;
        self.note = Some(note.into());
        self
    }

    pub fn error(theorem_id: TheoremId, digest: InstanceDigest, tolerance: f64, err: &Error) -> Self {
        TheoremReport {
            theorem_id,
            digest,
            comparisons: Vec::new(),
            margin: f64::NAN,
            holds: false,
            tolerance,
            status: Status::Error,
            note: Some(err.to_string()),
        }
    }

    /// Re-derives `(margin, holds)` from the stored comparisons alone.
    pub fn recompute(&self) -> Result<(f64, bool)> {
        let margins = self
            .comparisons
            .iter()
            .map(Comparison::evaluate)
            .collect::<Result<Vec<_>>>()?;
        let margin = combined_margin(margins);
        Ok((margin, margin >= -self.tolerance))
    }

    /// Applies a different tolerance to the same comparisons.
    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        if matches!(self.status, Status::Inconclusive | Status::Error) {
            self.tolerance = tolerance;
            self.holds = self.margin >= -tolerance;
            return self;
        }
        let rebuilt = TheoremReport::from_comparisons(
            self.theorem_id,
            self.digest.n,
            String::new(),
            std::mem::take(&mut self.comparisons),
            tolerance,
        );
        TheoremReport {
            digest: self.digest,
            note: self.note,
            ..rebuilt
        }
    }

    pub fn comparison(&self, label: &str) -> Option<&Comparison> {
        self.comparisons.iter().find(|c| c.label == label)
    }
}

fn combined_margin(margins: impl IntoIterator<Item = f64>) -> f64 {
    let m = margins.into_iter().fold(f64::INFINITY, f64::min);
    if m == f64::INFINITY {
        0.0
    } else {
        m
    }
}

fn spectrum(a: &PosDefMatrix) -> Result<SymplecticSpectrum> {
    williamson::symplectic_spectrum(a)
}

fn prefix_products(v: &[f64]) -> Vec<f64> {
    v.iter()
        .scan(1.0, |acc, &x| {
            *acc *= x;
            Some(*acc)
        })
        .collect()
}

fn prefix_sums(v: &[f64]) -> Vec<f64> {
    v.iter()
        .scan(0.0, |acc, &x| {
            *acc += x;
            Some(*acc)
        })
        .collect()
}

fn check_k(k: usize, n: usize) -> Result<()> {
    if k == 0 || k > n {
        return Err(Error::input(format!("k must lie in 1..={n}, got {k}")));
    }
    Ok(())
}

/// `d̂(Aᵗ) ≺_log d̂ᵗ(A)` for `t ∈ [0, 1]`, reversed for `t ≥ 1`; and the
/// products of the `k` smallest symplectic eigenvalues for every `k`.
pub fn check_theorem1(a: &PosDefMatrix, t: f64) -> Result<TheoremReport> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::input(format!("exponent must be a finite t ≥ 0, got {t}")));
    }
    let sa = spectrum(a)?;
    let st = spectrum(&a.pow(t)?)?;
    let powered_hat: Vec<f64> = sa.d_hat.iter().map(|x| x.powf(t)).collect();
    let powered: Vec<f64> = sa.d.iter().map(|x| x.powf(t)).collect();
    let small_t = t <= 1.0;
    let major = if small_t {
        Comparison::new("d^(A^t) <log d^^t(A)", Relation::LogMajorizedBy, Domain::Log, st.d_hat.clone(), powered_hat)?
    } else {
        Comparison::new("d^^t(A) <log d^(A^t)", Relation::LogMajorizedBy, Domain::Log, powered_hat, st.d_hat.clone())?
    };
    let of_power = prefix_products(&st.d);
    let power_of = prefix_products(&powered);
    let products = if small_t {
        Comparison::new("prod_k d(A^t) >= prod_k d^t(A)", Relation::ElementwiseLe, Domain::Log, power_of, of_power)?
    } else {
        Comparison::new("prod_k d(A^t) <= prod_k d^t(A)", Relation::ElementwiseLe, Domain::Log, of_power, power_of)?
    };
    Ok(TheoremReport::from_comparisons(
        TheoremId::Thm1,
        a.half_order(),
        format!("t={t}"),
        vec![major, products],
        TheoremId::Thm1.default_tolerance(),
    ))
}

/// `d̂(A #_t B) ≺_log d̂^{1−t}(A) · d̂ᵗ(B)`.
pub fn check_theorem3(a: &PosDefMatrix, b: &PosDefMatrix, t: f64) -> Result<TheoremReport> {
    let g = means::geodesic(a, b, t)?;
    let (sa, sb, sg) = (spectrum(a)?, spectrum(b)?, spectrum(&g)?);
    let rhs: Vec<f64> = sa
        .d_hat
        .iter()
        .zip(&sb.d_hat)
        .map(|(x, y)| x.powf(1.0 - t) * y.powf(t))
        .collect();
    let c = Comparison::new("d^(A#_tB) <log d^^(1-t)(A) d^^t(B)", Relation::LogMajorizedBy, Domain::Log, sg.d_hat, rhs)?;
    Ok(TheoremReport::from_comparisons(
        TheoremId::Thm3,
        a.half_order(),
        format!("t={t}"),
        vec![c],
        TheoremId::Thm3.default_tolerance(),
    ))
}

/// Residual tolerance the Karcher mean is polished to before it is trusted.
const KARCHER_POLISH_TOL: f64 = 1e-11;
const KARCHER_POLISH_ITER: usize = 500;

/// Karcher mean polished beyond the default tolerance; `Err(report note)` if
/// even the default tolerance is missed.
fn trusted_karcher_mean(matrices: &[PosDefMatrix], w: &WeightVector) -> Result<std::result::Result<PosDefMatrix, String>> {
    let opts = KarcherOptions {
        tol: Some(KARCHER_POLISH_TOL),
        max_iter: KARCHER_POLISH_ITER,
        walk_steps: None,
    };
    let r = means::karcher_mean(matrices, w, &opts)?;
    let default_tol = means::DEFAULT_KARCHER_RTOL * r.mean.spectral().max_eigenvalue();
    if r.converged || r.residual <= default_tol {
        Ok(Ok(r.mean))
    } else {
        Ok(Err(format!(
            "Karcher mean did not converge: residual {:e} after {} iterations",
            r.residual, r.iterations
        )))
    }
}

/// `d̂(G(w; A₁, …, A_m)) ≺_log Π_j d̂^{w_j}(A_j)`.
pub fn check_theorem4(matrices: &[PosDefMatrix], w: &WeightVector) -> Result<TheoremReport> {
    if matrices.len() < 2 {
        return Err(Error::input("Theorem 4 needs at least two matrices"));
    }
    let n = matrices[0].half_order();
    let mut rhs = vec![1.0; 2 * n];
    for (a, &wj) in matrices.iter().zip(w.as_slice()) {
        for (r, d) in rhs.iter_mut().zip(spectrum(a)?.d_hat) {
            *r *= d.powf(wj);
        }
    }
    let mean = trusted_karcher_mean(matrices, w)?;
    let params = format!("m={}", matrices.len());
    let tol = TheoremId::Thm4.default_tolerance();
    match mean {
        Ok(g) => {
            let c = Comparison::new("d^(G) <log prod d^^w_j(A_j)", Relation::LogMajorizedBy, Domain::Log, spectrum(&g)?.d_hat, rhs)?;
            Ok(TheoremReport::from_comparisons(TheoremId::Thm4, n, params, vec![c], tol))
        }
        Err(note) => Ok(TheoremReport::from_comparisons(TheoremId::Thm4, n, params, Vec::new(), tol).inconclusive(note)),
    }
}

/// `log det (MᵀAM)` via Cholesky.
fn log_det_congruence(a: &PosDefMatrix, m: &DMatrix<f64>) -> Result<f64> {
    let s = SymMatrix::symmetrized(m.transpose() * a.matrix() * m).into_matrix();
    let chol = s
        .cholesky()
        .ok_or_else(|| Error::Numerical("restricted matrix is not positive definite".into()))?;
    Ok(2.0 * chol.l().diagonal().iter().map(|x| x.ln()).sum::<f64>())
}

fn trace_congruence(a: &PosDefMatrix, m: &DMatrix<f64>) -> f64 {
    (m.transpose() * a.matrix() * m).trace()
}

/// Checks `MᵀJ₂ₙM = J₂ₖ`; returns the residual.
pub fn restriction_residual(m: &DMatrix<f64>, n: usize, k: usize) -> Result<f64> {
    if m.nrows() != 2 * n || m.ncols() != 2 * k {
        return Err(Error::input(format!(
            "restriction must be {}x{}, got {}x{}",
            2 * n,
            2 * k,
            m.nrows(),
            m.ncols()
        )));
    }
    Ok((m.transpose() * symplectic::standard_j(n) * m - symplectic::standard_j(k)).norm())
}

/// Theorem 5 for one explicit restriction `M` (`2n × 2k`, `MᵀJM = J`):
/// `tr MᵀAM ≥ 2 Σ_{j≤k} d_j` and `det MᵀAM ≥ Π_{j≤k} d_j²`. Without `M`,
/// equality is checked at the eigenbasis minimizer and the inequalities on
/// [`THEOREM5_SAMPLES`] sampled restrictions.
pub fn check_theorem5(a: &PosDefMatrix, k: usize, m: Option<&DMatrix<f64>>) -> Result<TheoremReport> {
    match m {
        Some(m) => check_theorem5_given(a, k, m),
        None => check_theorem5_sampled(a, k, 0, THEOREM5_SAMPLES),
    }
}

fn theorem5_targets(a: &PosDefMatrix, k: usize) -> Result<(f64, f64)> {
    let d = spectrum(a)?.d;
    let tr = 2.0 * d[..k].iter().sum::<f64>();
    let det = d[..k].iter().map(|x| x * x).product::<f64>();
    Ok((tr, det))
}

fn check_theorem5_given(a: &PosDefMatrix, k: usize, m: &DMatrix<f64>) -> Result<TheoremReport> {
    let n = a.half_order();
    check_k(k, n)?;
    let res = restriction_residual(m, n, k)?;
    let fro = m.norm();
    if res > symplectic::DEFAULT_SYMPLECTIC_TOL * (1.0 + fro * fro) {
        return Err(Error::input(format!("MᵀJM ≠ J: residual {res:e}")));
    }
    let (tr, det) = theorem5_targets(a, k)?;
    let comps = vec![
        Comparison::new("tr MtAM >= 2 sum_k d", Relation::ElementwiseLe, Domain::Linear, vec![tr], vec![trace_congruence(a, m)])?,
        Comparison::new("det MtAM >= prod_k d^2", Relation::ElementwiseLe, Domain::Log, vec![det], vec![log_det_congruence(a, m)?.exp()])?,
    ];
    Ok(TheoremReport::from_comparisons(
        TheoremId::Thm5,
        n,
        format!("k={k}"),
        comps,
        TheoremId::Thm5.default_tolerance(),
    ))
}

/// Equality at the minimizer built from symplectic eigenvectors, plus the
/// inequalities for `samples` restrictions taken from random symplectic
/// matrices (first `k` columns of each block).
pub fn check_theorem5_sampled(a: &PosDefMatrix, k: usize, seed: u64, samples: usize) -> Result<TheoremReport> {
    let n = a.half_order();
    check_k(k, n)?;
    let (tr, det) = theorem5_targets(a, k)?;
    let basis = williamson::symplectic_eigenbasis(a)?;
    let best = basis.leading_columns(k);
    let mut comps = vec![
        Comparison::new("tr at minimizer = 2 sum_k d", Relation::ElementwiseEq, Domain::Linear, vec![tr], vec![trace_congruence(a, &best)])?,
        Comparison::new("det at minimizer = prod_k d^2", Relation::ElementwiseEq, Domain::Log, vec![det], vec![log_det_congruence(a, &best)?.exp()])?,
    ];
    if samples > 0 {
        let mut traces = Vec::with_capacity(samples);
        let mut dets = Vec::with_capacity(samples);
        for s in 0..samples {
            let full = symplectic::random_symplectic(mix(seed, 0x5A, s as u64), n, 1.0);
            let cols: Vec<usize> = (0..k).chain(n..n + k).collect();
            let m = full.matrix().select_columns(&cols);
            traces.push(trace_congruence(a, &m));
            dets.push(log_det_congruence(a, &m)?.exp());
        }
        comps.push(Comparison::new("sampled tr >= 2 sum_k d", Relation::ElementwiseLe, Domain::Linear, vec![tr; samples], traces)?);
        comps.push(Comparison::new("sampled det >= prod_k d^2", Relation::ElementwiseLe, Domain::Log, vec![det; samples], dets)?);
    }
    Ok(TheoremReport::from_comparisons(
        TheoremId::Thm5,
        n,
        format!("k={k};samples={samples}"),
        comps,
        TheoremId::Thm5.default_tolerance(),
    ))
}

fn superadditivity_comparisons(a: &PosDefMatrix, b: &PosDefMatrix, ks: &[usize]) -> Result<Vec<Comparison>> {
    let sum = a.add(b)?;
    let (da, db, ds) = (spectrum(a)?.d, spectrum(b)?.d, spectrum(&sum)?.d);
    let (pa, pb, ps) = (prefix_sums(&da), prefix_sums(&db), prefix_sums(&ds));
    let sq = |d: &[f64]| prefix_products(&d.iter().map(|x| x * x).collect::<Vec<_>>());
    let (qa, qb, qs) = (sq(&da), sq(&db), sq(&ds));
    let pick = |v: &[f64]| ks.iter().map(|&k| v[k - 1]).collect::<Vec<_>>();
    let lhs_sum: Vec<f64> = ks.iter().map(|&k| pa[k - 1] + pb[k - 1]).collect();
    let lhs_prod: Vec<f64> = ks.iter().map(|&k| qa[k - 1] + qb[k - 1]).collect();
    Ok(vec![
        Comparison::new("sum_k d(A+B) >= sum_k d(A) + sum_k d(B)", Relation::ElementwiseLe, Domain::Linear, lhs_sum, pick(&ps))?,
        Comparison::new("prod_k d^2(A+B) >= prod_k d^2(A) + prod_k d^2(B)", Relation::ElementwiseLe, Domain::Log, lhs_prod, pick(&qs))?,
    ])
}

/// Partial sums and squared partial products of the `k` smallest symplectic
/// eigenvalues are superadditive.
pub fn check_superadditivity(a: &PosDefMatrix, b: &PosDefMatrix, k: usize) -> Result<TheoremReport> {
    williamson::same_order(a, b)?;
    check_k(k, a.half_order())?;
    Ok(TheoremReport::from_comparisons(
        TheoremId::Superadd,
        a.half_order(),
        format!("k={k}"),
        superadditivity_comparisons(a, b, &[k])?,
        TheoremId::Superadd.default_tolerance(),
    ))
}

/// [`check_superadditivity`] for every `k` at once.
pub fn check_superadditivity_all(a: &PosDefMatrix, b: &PosDefMatrix) -> Result<TheoremReport> {
    williamson::same_order(a, b)?;
    let ks: Vec<usize> = (1..=a.half_order()).collect();
    Ok(TheoremReport::from_comparisons(
        TheoremId::Superadd,
        a.half_order(),
        "k=all".into(),
        superadditivity_comparisons(a, b, &ks)?,
        TheoremId::Superadd.default_tolerance(),
    ))
}

/// Slack added to flow capacities in the Theorem 6 check.
const THEOREM6_FLOW_TOL: f64 = 1e-10;
const THEOREM6_STOCHASTIC_TOL: f64 = 1e-8;
const THEOREM6_ORTHOGONAL_TOL: f64 = 1e-7;

/// `M̃` is doubly superstochastic (with an explicit doubly stochastic
/// minorant), and `M̃` is doubly stochastic exactly when `M` is orthogonal.
pub fn check_theorem6(m: &SymplecticMatrix) -> Result<TheoremReport> {
    let n = m.half_order();
    let mt = symplectic::associated_matrix(m);
    let verdict = symplectic::is_doubly_superstochastic(mt.matrix(), THEOREM6_FLOW_TOL);
    let mut comps = vec![Comparison::new("max flow = n", Relation::ElementwiseLe, Domain::Linear, vec![n as f64], vec![verdict.flow])?];
    if let Some(p) = &verdict.witness {
        let flat_p: Vec<f64> = p.iter().cloned().collect();
        let flat_m: Vec<f64> = mt.matrix().iter().cloned().collect();
        let rows: Vec<f64> = p.row_iter().map(|r| r.sum()).collect();
        let cols: Vec<f64> = p.column_iter().map(|c| c.sum()).collect();
        comps.push(Comparison::new("witness <= M~", Relation::ElementwiseLe, Domain::Linear, flat_p.clone(), flat_m)?);
        comps.push(Comparison::new("witness >= 0", Relation::ElementwiseLe, Domain::Linear, vec![0.0; n * n], flat_p)?);
        comps.push(Comparison::new("witness row sums = 1", Relation::ElementwiseEq, Domain::Linear, rows, vec![1.0; n])?);
        comps.push(Comparison::new("witness column sums = 1", Relation::ElementwiseEq, Domain::Linear, cols, vec![1.0; n])?);
    }
    let stochastic = symplectic::is_doubly_stochastic(mt.matrix(), THEOREM6_STOCHASTIC_TOL);
    let orthogonal = m.is_orthogonal(THEOREM6_ORTHOGONAL_TOL);
    comps.push(Comparison::new(
        "stochastic iff orthogonal",
        Relation::ElementwiseEq,
        Domain::Linear,
        vec![f64::from(u8::from(stochastic))],
        vec![f64::from(u8::from(orthogonal))],
    )?);
    Ok(TheoremReport::from_comparisons(
        TheoremId::Thm6,
        n,
        format!("orthogonal={orthogonal}"),
        comps,
        TheoremId::Thm6.default_tolerance(),
    ))
}

/// Operator-norm and Frobenius/trace-norm perturbation bounds for symplectic
/// eigenvalues.
pub fn check_theorem7(a: &PosDefMatrix, b: &PosDefMatrix) -> Result<TheoremReport> {
    williamson::same_order(a, b)?;
    let (da, db) = (spectrum(a)?.d, spectrum(b)?.d);
    let diff = a.matrix() - b.matrix();
    let nd = matfun::norms(&diff)?;
    let roots = a.spectral().max_eigenvalue().sqrt() + b.spectral().max_eigenvalue().sqrt();
    let gaps: Vec<f64> = da.iter().zip(&db).map(|(x, y)| (x - y).abs()).collect();
    let max_gap = gaps.iter().cloned().fold(0.0, f64::max);
    let l2_gap = 2.0_f64.sqrt() * gaps.iter().map(|g| g * g).sum::<f64>().sqrt();
    let comps = vec![
        Comparison::new("max|d(A)-d(B)| <= (|A|^1/2+|B|^1/2)|A-B|^1/2", Relation::ElementwiseLe, Domain::Linear, vec![max_gap], vec![roots * nd.operator.sqrt()])?,
        Comparison::new("sqrt2 |d(A)-d(B)|_2 <= (|A|^1/2+|B|^1/2)(tr|A-B|)^1/2", Relation::ElementwiseLe, Domain::Linear, vec![l2_gap], vec![roots * nd.trace.sqrt()])?,
    ];
    Ok(TheoremReport::from_comparisons(
        TheoremId::Thm7,
        a.half_order(),
        String::new(),
        comps,
        TheoremId::Thm7.default_tolerance(),
    ))
}

/// `d_j(A) ≤ d_j(B) ≤ d_{j+2}(A)` where `B` drops coordinate `drop`
/// (0-based) and its partner; `d_{n+1}(A) = ∞`.
pub fn check_interlacing(a: &PosDefMatrix, drop: usize) -> Result<TheoremReport> {
    let n = a.half_order();
    if n < 2 {
        return Err(Error::input("interlacing needs n ≥ 2"));
    }
    if drop >= n {
        return Err(Error::input(format!("drop index {} out of range 1..={n}", drop + 1)));
    }
    let keep: Vec<usize> = (0..n).filter(|&i| i != drop).collect();
    let b = sops::s_principal_submatrix(a, &keep)?;
    let (da, db) = (spectrum(a)?.d, spectrum(&b)?.d);
    let mut comps = vec![Comparison::new("d_j(A) <= d_j(B)", Relation::ElementwiseLe, Domain::Linear, da[..n - 1].to_vec(), db.clone())?];
    if n >= 3 {
        comps.push(Comparison::new("d_j(B) <= d_j+2(A)", Relation::ElementwiseLe, Domain::Linear, db[..n - 2].to_vec(), da[2..].to_vec())?);
    }
    Ok(TheoremReport::from_comparisons(
        TheoremId::Interlace,
        n,
        format!("drop={}", drop + 1),
        comps,
        TheoremId::Interlace.default_tolerance(),
    ))
}

fn elementary_symmetric(x: &[f64]) -> Vec<f64> {
    let mut e = vec![0.0; x.len() + 1];
    e[0] = 1.0;
    for (i, &v) in x.iter().enumerate() {
        for k in (1..=i + 1).rev() {
            e[k] += v * e[k - 1];
        }
    }
    e.remove(0);
    e
}

fn power_mean(x: &[f64], r: f64) -> f64 {
    let m = x.len() as f64;
    (x.iter().map(|v| v.powf(r)).sum::<f64>() / m).powf(1.0 / r)
}

/// Power-mean exponents `r < 1` in the Schur-concave family.
const PINCHING_POWER_MEANS: [f64; 3] = [-2.0, -1.0, 0.5];

/// `d̂(𝒞ˢ(A)) ≺^w d̂(A)`, and `f(d(𝒞ˢ(A))) ≥ f(d(A))` for a family of
/// increasing Schur-concave `f`.
pub fn check_pinching(a: &PosDefMatrix, p: &SPartition) -> Result<TheoremReport> {
    let c = sops::s_pinching(a, p)?;
    let (sa, sc) = (spectrum(a)?, spectrum(&c)?);
    let mut comps = vec![Comparison::new("d^(C(A)) <^w d^(A)", Relation::SuperMajorizedBy, Domain::Linear, sc.d_hat.clone(), sa.d_hat.clone())?];
    let (x, y) = (&sc.d, &sa.d);
    let (ex, ey) = (elementary_symmetric(x), elementary_symmetric(y));
    comps.push(Comparison::new("s_k", Relation::ElementwiseLe, Domain::Log, ey.clone(), ex.clone())?);
    let root = |e: &[f64]| e.iter().enumerate().map(|(k, v)| v.powf(1.0 / (k + 1) as f64)).collect::<Vec<_>>();
    comps.push(Comparison::new("s_k^(1/k)", Relation::ElementwiseLe, Domain::Log, root(&ey), root(&ex))?);
    let frac = |v: &[f64]| v.iter().map(|t| t / (1.0 + t)).sum::<f64>();
    comps.push(Comparison::new("sum x/(1+x)", Relation::ElementwiseLe, Domain::Linear, vec![frac(y)], vec![frac(x)])?);
    let logs = |v: &[f64]| v.iter().map(|t| t.ln()).sum::<f64>();
    comps.push(Comparison::new("sum log x", Relation::ElementwiseLe, Domain::Linear, vec![logs(y)], vec![logs(x)])?);
    for r in PINCHING_POWER_MEANS {
        comps.push(Comparison::new(format!("power mean r={r}"), Relation::ElementwiseLe, Domain::Log, vec![power_mean(y, r)], vec![power_mean(x, r)])?);
    }
    let sizes: Vec<String> = p.sizes().iter().map(|s| s.to_string()).collect();
    Ok(TheoremReport::from_comparisons(
        TheoremId::Pinch,
        a.half_order(),
        format!("partition={}", sizes.join(",")),
        comps,
        TheoremId::Pinch.default_tolerance(),
    ))
}

/// `d̂(A) ≺_log λ(A)` and `λ↑_j(A) ≤ d_j(A) ≤ λ↑_{n+j}(A)`.
pub fn check_theorem11(a: &PosDefMatrix) -> Result<TheoremReport> {
    let n = a.half_order();
    let s = spectrum(a)?;
    let asc = a.eigenvalues().to_vec();
    let mut desc = asc.clone();
    desc.reverse();
    let comps = vec![
        Comparison::new("d^(A) <log lambda(A)", Relation::LogMajorizedBy, Domain::Log, s.d_hat.clone(), desc)?,
        Comparison::new("lambda_j <= d_j", Relation::ElementwiseLe, Domain::Linear, asc[..n].to_vec(), s.d.clone())?,
        Comparison::new("d_j <= lambda_n+j", Relation::ElementwiseLe, Domain::Linear, s.d.clone(), asc[n..].to_vec())?,
    ];
    Ok(TheoremReport::from_comparisons(
        TheoremId::Thm11,
        n,
        String::new(),
        comps,
        TheoremId::Thm11.default_tolerance(),
    ))
}

fn gaussian_comparison(label: &str, a: &PosDefMatrix) -> Result<Comparison> {
    Comparison::new(label, Relation::ElementwiseLe, Domain::Linear, vec![0.5], vec![spectrum(a)?.smallest()])
}

/// Gaussian covariance matrices (`d₁ ≥ 1/2`) are closed under `A ↦ Aᵗ`,
/// geodesics and Karcher means. `extra` holds further Gaussian matrices for
/// the Karcher part, which averages `A`, `B` and `extra`.
pub fn check_corollary8(a: &PosDefMatrix, b: &PosDefMatrix, t: f64, extra: &[PosDefMatrix]) -> Result<TheoremReport> {
    williamson::same_order(a, b)?;
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::input(format!("t must lie in [0, 1], got {t}")));
    }
    let all: Vec<PosDefMatrix> = [a.clone(), b.clone()].into_iter().chain(extra.iter().cloned()).collect();
    for (i, x) in all.iter().enumerate() {
        williamson::same_order(a, x)?;
        if !williamson::is_gaussian(x, williamson::DEFAULT_GAUSSIAN_TOL)? {
            return Err(Error::input(format!("input {} is not a Gaussian covariance matrix", i + 1)));
        }
    }
    let sa = spectrum(a)?;
    let at = a.pow(t)?;
    let mut comps = vec![
        gaussian_comparison("d_1(A^t) >= 1/2", &at)?,
        Comparison::new("d_1(A^t) >= d_1^t(A)", Relation::ElementwiseLe, Domain::Log, vec![sa.smallest().powf(t)], vec![spectrum(&at)?.smallest()])?,
        gaussian_comparison("d_1(A#_tB) >= 1/2", &means::geodesic(a, b, t)?)?,
    ];
    let w = WeightVector::uniform(all.len());
    let n = a.half_order();
    let params = format!("t={t};m={}", all.len());
    let tol = TheoremId::Cor8.default_tolerance();
    match trusted_karcher_mean(&all, &w)? {
        Ok(g) => {
            comps.push(gaussian_comparison("d_1(G) >= 1/2", &g)?);
            Ok(TheoremReport::from_comparisons(TheoremId::Cor8, n, params, comps, tol))
        }
        Err(note) => Ok(TheoremReport::from_comparisons(TheoremId::Cor8, n, params, comps, tol).inconclusive(note)),
    }
}

/// The spectrum of `A^♯ = iA⁻¹J` is `{±1/d_j(A)}`.
pub fn check_minmax(a: &PosDefMatrix) -> Result<TheoremReport> {
    let sharp = williamson::sharp_spectrum(a)?;
    let d = spectrum(a)?.d;
    let expected: Vec<f64> = d
        .iter()
        .map(|x| 1.0 / x)
        .chain(d.iter().rev().map(|x| -1.0 / x))
        .collect();
    let c = Comparison::new("spec(A#) = ±1/d", Relation::ElementwiseEq, Domain::Linear, sharp, expected)?;
    Ok(TheoremReport::from_comparisons(
        TheoremId::Minmax,
        a.half_order(),
        String::new(),
        vec![c],
        TheoremId::Minmax.default_tolerance(),
    ))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub seed: u64,
    pub trials: usize,
    pub n_min: usize,
    pub n_max: usize,
    /// Symplectic eigenvalues are drawn with `log d_j` uniform in
    /// `[−condition_spread/2, condition_spread/2]`.
    pub condition_spread: f64,
    /// Spread of the symplectic congruence factors.
    pub symplectic_spread: f64,
    /// Replaces every theorem's default tolerance when set.
    pub tolerance: Option<f64>,
    pub theorems: Vec<TheoremId>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 0,
            trials: 100,
            n_min: 1,
            n_max: 6,
            condition_spread: 3.0,
            symplectic_spread: 1.0,
            tolerance: None,
            theorems: TheoremId::ALL.to_vec(),
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::input("trials must be at least 1"));
        }
        if self.n_min == 0 || self.n_min > self.n_max {
            return Err(Error::input(format!(
                "invalid dimension range [{}, {}]",
                self.n_min, self.n_max
            )));
        }
        if !(self.condition_spread >= 0.0 && self.symplectic_spread >= 0.0) {
            return Err(Error::input("spreads must be non-negative"));
        }
        if let Some(t) = self.tolerance {
            if !(t >= 0.0) {
                return Err(Error::input(format!("tolerance must be non-negative, got {t}")));
            }
        }
        if self.theorems.is_empty() {
            return Err(Error::input("no theorems selected"));
        }
        Ok(())
    }
}

/// SplitMix64 finalizer applied to a combination of the inputs.
fn mix(seed: u64, a: u64, b: u64) -> u64 {
    let mut z = seed
        .wrapping_add(a.wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add(b.wrapping_mul(0xD1B5_4A32_D192_ED03))
        .wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of instance `trial` of theorem `id` within a suite seeded by `seed`.
pub fn instance_seed(seed: u64, id: TheoremId, trial: usize) -> u64 {
    mix(seed, id.index() + 1, trial as u64)
}

struct InstanceGen<'a> {
    cfg: &'a SuiteConfig,
    rng: ChaCha8Rng,
    repeated: bool,
}

impl InstanceGen<'_> {
    fn posdef(&mut self, n: usize) -> PosDefMatrix {
        let sampler = PosDefSampler {
            condition_spread: 0.5 * self.cfg.condition_spread,
            symplectic_spread: self.cfg.symplectic_spread,
            repeated: self.repeated,
        };
        sampler.sample(self.rng.random(), n).matrix
    }

    /// Gaussian covariance: planted `d_j ≥ 1/2`, with the boundary value
    /// itself on planted-degeneracy trials.
    fn gaussian(&mut self, n: usize) -> PosDefMatrix {
        let c = 0.5 * self.cfg.condition_spread;
        let mut d: Vec<f64> = (0..n)
            .map(|_| 0.5 * if c > 0.0 { self.rng.random_range(0.0..=c).exp() } else { 1.0 })
            .collect();
        if self.repeated {
            d[0] = 0.5;
            let last = d.len() - 1;
            d[last] = d[0];
        }
        symplectic::random_posdef_planted(self.rng.random(), &d, self.cfg.symplectic_spread).matrix
    }
}

fn run_instance(cfg: &SuiteConfig, id: TheoremId, trial: usize) -> TheoremReport {
    let seed = instance_seed(cfg.seed, id, trial);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut n = rng.random_range(cfg.n_min..=cfg.n_max);
    if matches!(id, TheoremId::Interlace | TheoremId::Pinch) {
        n = n.max(2);
    }
    let mut gen = InstanceGen {
        cfg,
        rng,
        repeated: trial % 5 == 4,
    };
    let digest = InstanceDigest {
        seed: Some(seed),
        trial: Some(trial),
        n,
        params: String::new(),
    };
    let tolerance = cfg.tolerance.unwrap_or(id.default_tolerance());
    match build_and_check(id, trial, n, &mut gen) {
        Ok(report) => {
            let params = report.digest.params.clone();
            let mut report = if cfg.tolerance.is_some() {
                report.with_tolerance(tolerance)
            } else {
                report
            };
            report.digest = InstanceDigest {
                params: if gen.repeated {
                    format!("{params};repeated").trim_start_matches(';').to_string()
                } else {
                    params
                },
                ..digest
            };
            report
        }
        Err(e) => TheoremReport::error(id, digest, tolerance, &e),
    }
}

fn build_and_check(id: TheoremId, trial: usize, n: usize, gen: &mut InstanceGen) -> Result<TheoremReport> {
    match id {
        TheoremId::Thm1 => {
            let a = gen.posdef(n);
            let grid = [0.25, 0.5, 2.0, 0.0, 1.0];
            let t = if trial % 2 == 0 {
                grid[(trial / 2) % grid.len()]
            } else {
                gen.rng.random_range(0.0..=2.0)
            };
            check_theorem1(&a, t)
        }
        TheoremId::Thm3 => {
            let (a, b) = (gen.posdef(n), gen.posdef(n));
            let t = if trial % 3 == 0 { 0.5 } else { gen.rng.random_range(0.0..=1.0) };
            check_theorem3(&a, &b, t)
        }
        TheoremId::Thm4 => {
            let m = 2 + trial % 3;
            let ms: Vec<PosDefMatrix> = (0..m).map(|_| gen.posdef(n)).collect();
            let w = if trial % 2 == 0 {
                WeightVector::uniform(m)
            } else {
                random_weights(&mut gen.rng, m)
            };
            check_theorem4(&ms, &w)
        }
        TheoremId::Thm5 => {
            let a = gen.posdef(n);
            let k = gen.rng.random_range(1..=n);
            let s = gen.rng.random();
            check_theorem5_sampled(&a, k, s, THEOREM5_SAMPLES)
        }
        TheoremId::Superadd => {
            let (a, b) = (gen.posdef(n), gen.posdef(n));
            check_superadditivity_all(&a, &b)
        }
        TheoremId::Thm6 => {
            let spread = gen.cfg.symplectic_spread.max(0.5);
            let log_gamma: Vec<f64> = if trial % 2 == 0 {
                vec![0.0; n]
            } else {
                // Keep away from the orthogonal group so that the stochastic
                // and orthogonal verdicts are both unambiguous.
                let mut lg: Vec<f64> = (0..n).map(|_| gen.rng.random_range(0.0..=spread)).collect();
                lg[0] = lg[0].max(0.25);
                lg
            };
            let m = symplectic::random_symplectic_with_log_gammas(gen.rng.random(), &log_gamma);
            check_theorem6(&m)
        }
        TheoremId::Thm7 => {
            let a = gen.posdef(n);
            let b = if trial % 3 == 0 {
                let e = gen.posdef(n).scaled(1e-3)?;
                a.add(&e)?
            } else {
                gen.posdef(n)
            };
            check_theorem7(&a, &b)
        }
        TheoremId::Interlace => {
            let a = gen.posdef(n);
            check_interlacing(&a, trial % n)
        }
        TheoremId::Pinch => {
            let a = gen.posdef(n);
            let p = if trial % 2 == 0 {
                SPartition::new(vec![1, n - 1])?
            } else {
                random_composition(&mut gen.rng, n)
            };
            check_pinching(&a, &p)
        }
        TheoremId::Thm11 => check_theorem11(&gen.posdef(n)),
        TheoremId::Cor8 => {
            let (a, b, c) = (gen.gaussian(n), gen.gaussian(n), gen.gaussian(n));
            let t = gen.rng.random_range(0.0..=1.0);
            check_corollary8(&a, &b, t, &[c])
        }
        TheoremId::Minmax => check_minmax(&gen.posdef(n)),
    }
}

fn random_weights(rng: &mut ChaCha8Rng, m: usize) -> WeightVector {
    let raw: Vec<f64> = (0..m).map(|_| rng.random_range(0.2..1.0)).collect();
    let total: f64 = raw.iter().sum();
    let mut w: Vec<f64> = raw.iter().map(|x| x / total).collect();
    let head: f64 = w[..m - 1].iter().sum();
    w[m - 1] = 1.0 - head;
    WeightVector::new(w).expect("normalized positive weights")
}

fn random_composition(rng: &mut ChaCha8Rng, n: usize) -> SPartition {
    let mut sizes = Vec::new();
    let mut left = n;
    while left > 0 {
        let s = rng.random_range(1..=left);
        sizes.push(s);
        left -= s;
    }
    SPartition::new(sizes).expect("positive sizes")
}

/// Runs every selected theorem on `cfg.trials` instances. Instances are
/// evaluated in parallel; the result is ordered by theorem, then trial.
pub fn run_suite(cfg: &SuiteConfig) -> Result<Vec<TheoremReport>> {
    cfg.validate()?;
    let tasks: Vec<(TheoremId, usize)> = cfg
        .theorems
        .iter()
        .flat_map(|&id| (0..cfg.trials).map(move |t| (id, t)))
        .collect();
    Ok(tasks
        .par_iter()
        .map(|&(id, trial)| run_instance(cfg, id, trial))
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct TheoremSummary {
    pub theorem_id: TheoremId,
    pub trials: usize,
    pub passed: usize,
    pub failed: usize,
    pub boundary: usize,
    pub inconclusive: usize,
    pub errors: usize,
    /// Smallest margin among evaluated instances.
    pub worst_margin: f64,
}

impl TheoremSummary {
    pub fn failures(&self) -> usize {
        self.failed + self.errors
    }
}

pub fn summarize(reports: &[TheoremReport]) -> Vec<TheoremSummary> {
    let mut out: Vec<TheoremSummary> = Vec::new();
    for r in reports {
        let idx = match out.iter().position(|s| s.theorem_id == r.theorem_id) {
            Some(i) => i,
            None => {
                out.push(TheoremSummary {
                    theorem_id: r.theorem_id,
                    trials: 0,
                    passed: 0,
                    failed: 0,
                    boundary: 0,
                    inconclusive: 0,
                    errors: 0,
                    worst_margin: f64::INFINITY,
                });
                out.len() - 1
            }
        };
        let s = &mut out[idx];
        s.trials += 1;
        match r.status {
            Status::Pass => s.passed += 1,
            Status::Fail => s.failed += 1,
            Status::Boundary => s.boundary += 1,
            Status::Inconclusive => s.inconclusive += 1,
            Status::Error => s.errors += 1,
        }
        if matches!(r.status, Status::Pass | Status::Fail | Status::Boundary) {
            s.worst_margin = s.worst_margin.min(r.margin);
        }
    }
    out
}
