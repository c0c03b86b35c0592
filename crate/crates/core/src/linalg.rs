//! Small dense complex linear algebra.
//!
//! Everything here targets matrices of dimension at most 16: Gram matrices of
//! a handful of states and the operators of a POVM acting on them. Eigen and
//! singular values come from cyclic Jacobi rotations on Hermitian matrices.

use std::ops::{Index, IndexMut};

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::states::{PureState, StateSet};

/// Sweep cap for the Jacobi eigensolver.
pub const MAX_JACOBI_SWEEPS: usize = 100;

/// Dense complex matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> ComplexMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex::one();
        }
        m
    }

    /// Builds a matrix from row-major entries.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<Complex<T>>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<Complex<T>>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[&[Complex<T>]]) -> Result<Self> {
        let rows = columns.first().map_or(0, |c| c.len());
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(Error::DimensionMismatch {
                    expected: rows,
                    found: col.len(),
                });
            }
            for (i, z) in col.iter().enumerate() {
                m[(i, j)] = *z;
            }
        }
        Ok(m)
    }

    /// `|u⟩⟨v|`.
    pub fn outer(u: &[Complex<T>], v: &[Complex<T>]) -> Self {
        let mut m = Self::zeros(u.len(), v.len());
        for (i, ui) in u.iter().enumerate() {
            for (j, vj) in v.iter().enumerate() {
                m[(i, j)] = *ui * vj.conj();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    /// Row-major entries.
    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex<T>] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Complex<T>> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)].conj();
            }
        }
        m
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: rhs.rows,
            });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(Complex::zero(), |acc, (a, b)| acc + *a * b)
            })
            .collect())
    }

    fn zip_with(&self, rhs: &Self, f: impl Fn(Complex<T>, Complex<T>) -> Complex<T>) -> Result<Self> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows * self.cols,
                found: rhs.rows * rhs.cols,
            });
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| f(*a, *b)).collect(),
        })
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, |a, b| a - b)
    }

    pub fn scale(&self, s: T) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.scale(s)).collect(),
        }
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// `⟨v|M|v⟩`.
    pub fn expectation(&self, v: &[Complex<T>]) -> Result<Complex<T>> {
        let mv = self.mul_vec(v)?;
        Ok(v.iter().zip(&mv).map(|(a, b)| a.conj() * b).sum())
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, z| m.max(z.norm()))
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// `max |M[i][j] − conj(M[j][i])|`, or infinity for non-square input.
    pub fn hermitian_deviation(&self) -> T {
        if !self.is_square() {
            return T::infinity();
        }
        let mut dev = T::zero();
        for i in 0..self.rows {
            for j in i..self.cols {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    pub fn is_hermitian(&self, tol: T) -> bool {
        self.hermitian_deviation() <= tol
    }

    /// Determinant by Gaussian elimination with partial pivoting.
    pub fn determinant(&self) -> Result<Complex<T>> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: self.cols,
            });
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut det = Complex::one();
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&x, &y| a[(x, col)].norm().total_cmp_real(&a[(y, col)].norm()))
                .unwrap_or(col);
            if a[(pivot, col)].is_zero() {
                return Ok(Complex::zero());
            }
            if pivot != col {
                a.swap_rows(pivot, col);
                det = -det;
            }
            let p = a[(col, col)];
            det *= p;
            for r in col + 1..n {
                let f = a[(r, col)] / p;
                if f.is_zero() {
                    continue;
                }
                for c in col..n {
                    let v = a[(col, c)];
                    a[(r, c)] -= f * v;
                }
            }
        }
        Ok(det)
    }

    /// Inverse by Gauss–Jordan elimination with partial pivoting.
    ///
    /// A pivot below `T::NULL_NORM` times the largest entry is reported as
    /// [`Error::LinearlyDependentInput`].
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: self.cols,
            });
        }
        let n = self.rows;
        let scale = self.max_abs();
        if scale.is_zero() {
            return Err(Error::LinearlyDependentInput);
        }
        let floor = T::NULL_NORM * scale;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&x, &y| a[(x, col)].norm().total_cmp_real(&a[(y, col)].norm()))
                .unwrap_or(col);
            if a[(pivot, col)].norm() <= floor {
                return Err(Error::LinearlyDependentInput);
            }
            a.swap_rows(pivot, col);
            inv.swap_rows(pivot, col);
            let p = a[(col, col)].inv();
            for c in 0..n {
                a[(col, c)] *= p;
                inv[(col, c)] *= p;
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a[(r, col)];
                if f.is_zero() {
                    continue;
                }
                for c in 0..n {
                    let av = a[(col, c)];
                    let iv = inv[(col, c)];
                    a[(r, c)] -= f * av;
                    inv[(r, c)] -= f * iv;
                }
            }
        }
        Ok(inv)
    }

    fn swap_rows(&mut self, r1: usize, r2: usize) {
        if r1 == r2 {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(r1 * self.cols + c, r2 * self.cols + c);
        }
    }

    fn rotate_columns(&mut self, p: usize, q: usize, c: T, s: T) {
        for k in 0..self.rows {
            let kp = self[(k, p)];
            let kq = self[(k, q)];
            self[(k, p)] = kp.scale(c) - kq.scale(s);
            self[(k, q)] = kp.scale(s) + kq.scale(c);
        }
    }

    fn rotate_rows(&mut self, p: usize, q: usize, c: T, s: T) {
        for k in 0..self.cols {
            let pk = self[(p, k)];
            let qk = self[(q, k)];
            self[(p, k)] = pk.scale(c) - qk.scale(s);
            self[(q, k)] = pk.scale(s) + qk.scale(c);
        }
    }

    fn off_diagonal_norm(&self) -> T {
        let mut acc = T::zero();
        for i in 0..self.rows {
            for j in 0..self.cols {
                if i != j {
                    acc += self[(i, j)].norm_sqr();
                }
            }
        }
        acc.sqrt()
    }
}

// Comparator helper so pivot selection reads the same for any `Real`.
trait TotalCmpReal {
    fn total_cmp_real(&self, other: &Self) -> std::cmp::Ordering;
}

impl<T: Real> TotalCmpReal for T {
    fn total_cmp_real(&self, other: &Self) -> std::cmp::Ordering {
        self.partial_cmp(other).unwrap_or(std::cmp::Ordering::Equal)
    }
}

impl<T> Index<(usize, usize)> for ComplexMatrix<T> {
    type Output = Complex<T>;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for ComplexMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[i * self.cols + j]
    }
}

/// Eigen-decomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen<T> {
    /// Eigenvalues in descending order.
    pub values: Vec<T>,
    /// Column `k` is the unit eigenvector for `values[k]`.
    pub vectors: ComplexMatrix<T>,
    pub sweeps: usize,
}

impl<T: Real> HermitianEigen<T> {
    pub fn vector(&self, k: usize) -> Vec<Complex<T>> {
        self.vectors.column(k)
    }
}

/// Cyclic Jacobi eigen-decomposition of a Hermitian matrix.
///
/// Each rotation first removes the phase of the pivot entry with a diagonal
/// unitary, then applies a real Givens rotation to zero it. Sweeps stop once
/// the off-diagonal Frobenius norm falls below `T::JACOBI_TOL` relative to the
/// full Frobenius norm.
pub fn eigh<T: Real>(m: &ComplexMatrix<T>) -> Result<HermitianEigen<T>> {
    if !m.is_finite() {
        return Err(Error::NonFiniteEntry);
    }
    let deviation = m.hermitian_deviation();
    let scale = m.max_abs().max(T::one());
    if deviation > T::HERMITIAN_TOL * scale {
        return Err(Error::NotHermitian {
            deviation: deviation.to_f64_lossy(),
        });
    }
    let n = m.rows();
    // Symmetrize so roundoff in the input does not bias the rotations.
    let mut a = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        a[(i, i)] = Complex::new(m[(i, i)].re, T::zero());
        for j in i + 1..n {
            let z = (m[(i, j)] + m[(j, i)].conj()).scale(T::lit(0.5));
            a[(i, j)] = z;
            a[(j, i)] = z.conj();
        }
    }
    let mut v = ComplexMatrix::identity(n);
    let threshold = T::JACOBI_TOL * a.frobenius_norm();

    let mut sweeps = 0;
    while a.off_diagonal_norm() > threshold {
        if sweeps == MAX_JACOBI_SWEEPS {
            return Err(Error::NonConvergence {
                sweeps: MAX_JACOBI_SWEEPS,
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let r = apq.norm();
                if r.is_zero() {
                    continue;
                }
                // Column q times e^{-iφ}, row q times e^{iφ}: a[p][q] becomes real r.
                let phase = apq / r;
                let phase_conj = phase.conj();
                for k in 0..n {
                    a[(k, q)] *= phase_conj;
                    v[(k, q)] *= phase_conj;
                }
                for k in 0..n {
                    a[(q, k)] *= phase;
                }
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let tau = (aqq - app) / (r + r);
                let t = if tau >= T::zero() {
                    T::one() / (tau + (T::one() + tau * tau).sqrt())
                } else {
                    -T::one() / (-tau + (T::one() + tau * tau).sqrt())
                };
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = t * c;
                a.rotate_columns(p, q, c, s);
                a.rotate_rows(p, q, c, s);
                v.rotate_columns(p, q, c, s);
                a[(p, q)] = Complex::zero();
                a[(q, p)] = Complex::zero();
                a[(p, p)] = Complex::new(app - t * r, T::zero());
                a[(q, q)] = Complex::new(aqq + t * r, T::zero());
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a[(y, y)].re.total_cmp_real(&a[(x, x)].re));
    let values = order.iter().map(|&k| a[(k, k)].re).collect();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        for i in 0..n {
            vectors[(i, dst)] = v[(i, src)];
        }
    }
    Ok(HermitianEigen {
        values,
        vectors,
        sweeps,
    })
}

/// Outcome of a numerical rank computation.
#[derive(Debug, Clone, PartialEq)]
pub struct RankResult<T> {
    pub rank: usize,
    /// Descending, all nonnegative.
    pub singular_values: Vec<T>,
    pub tolerance_used: T,
}

impl<T: Real> RankResult<T> {
    pub fn min_singular_value(&self) -> T {
        self.singular_values.last().copied().unwrap_or(T::zero())
    }

    pub fn max_singular_value(&self) -> T {
        self.singular_values.first().copied().unwrap_or(T::zero())
    }
}

/// Singular values in descending order.
///
/// Hermitian input is decomposed directly (σ = |λ|); anything else goes
/// through the smaller of `MᴴM` and `MMᴴ`.
pub fn singular_values<T: Real>(m: &ComplexMatrix<T>) -> Result<Vec<T>> {
    if !m.is_finite() {
        return Err(Error::NonFiniteEntry);
    }
    let mut sv: Vec<T> = if m.is_square() && m.is_hermitian(T::HERMITIAN_TOL * m.max_abs().max(T::one())) {
        eigh(m)?.values.into_iter().map(|x| x.abs()).collect()
    } else {
        let ah = m.adjoint();
        let product = if m.rows() >= m.cols() {
            ah.matmul(m)?
        } else {
            m.matmul(&ah)?
        };
        eigh(&product)?
            .values
            .into_iter()
            .map(|x| x.max(T::zero()).sqrt())
            .collect()
    };
    sv.sort_by(|x, y| y.total_cmp_real(x));
    Ok(sv)
}

/// Rank counting singular values strictly above `tol · σ_max`.
pub fn numerical_rank<T: Real>(m: &ComplexMatrix<T>, tol: T) -> Result<RankResult<T>> {
    if m.is_empty() {
        return Err(Error::InvalidParams("matrix is empty".into()));
    }
    if !(tol > T::zero() && tol < T::one()) {
        return Err(Error::InvalidParams(format!("rank tolerance {tol} outside (0, 1)")));
    }
    let singular_values = singular_values(m)?;
    let cutoff = tol * singular_values.first().copied().unwrap_or(T::zero());
    let rank = singular_values.iter().filter(|&&s| s > cutoff).count();
    Ok(RankResult {
        rank,
        singular_values,
        tolerance_used: tol,
    })
}

/// Largest eigenvalue of a Hermitian matrix.
pub fn max_eigenvalue_hermitian<T: Real>(m: &ComplexMatrix<T>) -> Result<T> {
    if !m.is_square() {
        return Err(Error::NotHermitian {
            deviation: f64::INFINITY,
        });
    }
    if m.is_empty() {
        return Err(Error::InvalidParams("matrix is empty".into()));
    }
    Ok(eigh(m)?.values[0])
}

/// Gram matrix `G[i][j] = ⟨ψᵢ|ψⱼ⟩`.
pub fn gram<T: Real>(states: &StateSet<T>) -> ComplexMatrix<T> {
    states.gram().clone()
}

/// Gram matrix of a raw slice, checking the set contract.
pub fn gram_of<T: Real>(states: &[PureState<T>]) -> Result<ComplexMatrix<T>> {
    let first = states.first().ok_or(Error::EmptySet)?;
    for s in states {
        if s.dim() != first.dim() {
            return Err(Error::DimensionMismatch {
                expected: first.dim(),
                found: s.dim(),
            });
        }
    }
    Ok(compute_gram(states))
}

pub(crate) fn compute_gram<T: Real>(states: &[PureState<T>]) -> ComplexMatrix<T> {
    let n = states.len();
    let mut g = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        g[(i, i)] = Complex::new(states[i].norm_sqr(), T::zero());
        for j in i + 1..n {
            let z = states[i].inner(&states[j]);
            g[(i, j)] = z;
            g[(j, i)] = z.conj();
        }
    }
    g
}

/// Unit vectors `ψ̃ᵢ` with `⟨ψ̃ᵢ|ψⱼ⟩ = 0` for `i ≠ j` and `⟨ψ̃ᵢ|ψᵢ⟩ > 0`.
///
/// Built as `ψ̃ᵢ ∝ Σⱼ (G⁻¹)ⱼᵢ ψⱼ`, which keeps each vector inside the span
/// of the inputs.
pub fn reciprocal_basis<T: Real>(states: &StateSet<T>) -> Result<StateSet<T>> {
    let g = states.gram();
    if numerical_rank(g, T::RANK_TOL)?.rank < states.len() {
        return Err(Error::LinearlyDependentInput);
    }
    let inv = g.inverse()?;
    let dim = states.dim();
    let members = states.members();
    let mut out = Vec::with_capacity(members.len());
    for i in 0..members.len() {
        let mut v = vec![Complex::zero(); dim];
        for (j, psi) in members.iter().enumerate() {
            let coeff = inv[(j, i)];
            for (acc, amp) in v.iter_mut().zip(psi.amplitudes()) {
                *acc += coeff * amp;
            }
        }
        out.push(PureState::normalize(v)?);
    }
    StateSet::new(out)
}
