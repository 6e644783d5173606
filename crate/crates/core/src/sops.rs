//! Operations that respect the quadrant structure `[[A, B], [C, G]]` of
//! `2n × 2n` matrices: s-direct sums, s-pinchings and s-principal submatrices.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::matfun::SymMatrix;
use crate::symplectic::SymplecticMatrix;
use crate::williamson::PosDefMatrix;

/// Block sizes `(m₁, …, m_k)` with `Σ m_j = n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SPartition(Vec<usize>);

impl SPartition {
    pub fn new(sizes: Vec<usize>) -> Result<Self> {
        if sizes.is_empty() || sizes.contains(&0) {
            return Err(Error::input(format!(
                "partition sizes must be nonempty and positive, got {sizes:?}"
            )));
        }
        Ok(SPartition(sizes))
    }

    /// `(1, …, 1)`.
    pub fn finest(n: usize) -> Self {
        SPartition(vec![1; n])
    }

    pub fn sizes(&self) -> &[usize] {
        &self.0
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    /// Half-open coordinate ranges of the blocks within `0..n`.
    pub fn ranges(&self) -> Vec<std::ops::Range<usize>> {
        let mut start = 0;
        self.0
            .iter()
            .map(|&m| {
                let r = start..start + m;
                start += m;
                r
            })
            .collect()
    }

    fn check(&self, n: usize) -> Result<()> {
        if self.total() != n {
            return Err(Error::input(format!(
                "partition {:?} sums to {}, expected {n}",
                self.0,
                self.total()
            )));
        }
        Ok(())
    }
}

/// Either kind of matrix accepted by [`s_direct_sum`].
#[derive(Debug, Clone, PartialEq)]
pub enum Structured {
    PosDef(PosDefMatrix),
    Symplectic(SymplecticMatrix),
}

impl Structured {
    pub fn matrix(&self) -> &DMatrix<f64> {
        match self {
            Structured::PosDef(a) => a.matrix(),
            Structured::Symplectic(s) => s.matrix(),
        }
    }
}

/// Quadrant-wise direct sum of matrices of even orders `2m_j`.
pub fn s_direct_sum_raw(parts: &[&DMatrix<f64>]) -> Result<DMatrix<f64>> {
    if parts.is_empty() {
        return Err(Error::input("s-direct sum of an empty list"));
    }
    let mut halves = Vec::with_capacity(parts.len());
    for p in parts {
        if p.nrows() != p.ncols() || p.nrows() == 0 || p.nrows() % 2 != 0 {
            return Err(Error::input(format!(
                "s-direct sum needs square matrices of even order, got {}x{}",
                p.nrows(),
                p.ncols()
            )));
        }
        halves.push(p.nrows() / 2);
    }
    let n: usize = halves.iter().sum();
    let mut out = DMatrix::zeros(2 * n, 2 * n);
    let mut off = 0;
    for (p, &m) in parts.iter().zip(&halves) {
        for (qr, qc) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            out.view_mut((qr * n + off, qc * n + off), (m, m))
                .copy_from(&p.view((qr * m, qc * m), (m, m)));
        }
        off += m;
    }
    Ok(out)
}

pub fn s_direct_sum_posdef(parts: &[PosDefMatrix]) -> Result<PosDefMatrix> {
    let raw: Vec<&DMatrix<f64>> = parts.iter().map(|a| a.matrix()).collect();
    PosDefMatrix::from_sym(SymMatrix::symmetrized(s_direct_sum_raw(&raw)?))
}

pub fn s_direct_sum_symplectic(parts: &[SymplecticMatrix]) -> Result<SymplecticMatrix> {
    let raw: Vec<&DMatrix<f64>> = parts.iter().map(|a| a.matrix()).collect();
    Ok(SymplecticMatrix::new_unchecked(s_direct_sum_raw(&raw)?))
}

/// s-direct sum of matrices of one kind; mixing kinds is an input error.
pub fn s_direct_sum(parts: &[Structured]) -> Result<Structured> {
    match parts.first() {
        None => Err(Error::input("s-direct sum of an empty list")),
        Some(Structured::PosDef(_)) => {
            let list = parts
                .iter()
                .map(|p| match p {
                    Structured::PosDef(a) => Ok(a.clone()),
                    Structured::Symplectic(_) => Err(mixed_kinds()),
                })
                .collect::<Result<Vec<_>>>()?;
            s_direct_sum_posdef(&list).map(Structured::PosDef)
        }
        Some(Structured::Symplectic(_)) => {
            let list = parts
                .iter()
                .map(|p| match p {
                    Structured::Symplectic(s) => Ok(s.clone()),
                    Structured::PosDef(_) => Err(mixed_kinds()),
                })
                .collect::<Result<Vec<_>>>()?;
            s_direct_sum_symplectic(&list).map(Structured::Symplectic)
        }
    }
}

fn mixed_kinds() -> Error {
    Error::input("s-direct sum of positive definite and symplectic matrices")
}

/// Zeroes every off-partition block of each of the four quadrants.
pub fn s_pinching(a: &PosDefMatrix, p: &SPartition) -> Result<PosDefMatrix> {
    let n = a.half_order();
    p.check(n)?;
    let mut block_of = vec![0; n];
    for (b, r) in p.ranges().into_iter().enumerate() {
        for i in r {
            block_of[i] = b;
        }
    }
    let src = a.matrix();
    let out = DMatrix::from_fn(2 * n, 2 * n, |r, c| {
        if block_of[r % n] == block_of[c % n] {
            src[(r, c)]
        } else {
            0.0
        }
    });
    PosDefMatrix::from_sym(SymMatrix::symmetrized(out))
}

/// Keeps coordinates `keep` (0-based, within `0..n`) and their partners
/// `n + i`; every other `i`-th and `(n+i)`-th row and column is deleted.
pub fn s_principal_submatrix(a: &PosDefMatrix, keep: &[usize]) -> Result<PosDefMatrix> {
    let n = a.half_order();
    if keep.is_empty() {
        return Err(Error::input("s-principal submatrix needs a nonempty index set"));
    }
    let mut idx = keep.to_vec();
    idx.sort_unstable();
    if idx.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::input(format!("repeated index in {keep:?}")));
    }
    if let Some(&bad) = idx.iter().find(|&&i| i >= n) {
        return Err(Error::input(format!(
            "index {} out of range 1..={n}",
            bad + 1
        )));
    }
    let rows: Vec<usize> = idx.iter().cloned().chain(idx.iter().map(|i| n + i)).collect();
    let src = a.matrix();
    let out = DMatrix::from_fn(rows.len(), rows.len(), |r, c| src[(rows[r], rows[c])]);
    PosDefMatrix::from_sym(SymMatrix::symmetrized(out))
}
