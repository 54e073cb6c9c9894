//! Dense complex Hermitian matrices with bipartite structure.
//!
//! Everything here is sized for small problems (a few hundred rows at most):
//! storage is a row-major `Vec<Complex64>` and eigendecomposition is cyclic
//! Jacobi. The bipartite dimensions `(d_A, d_B)` travel with a matrix so that
//! the partial transpose (always taken on the B factor) can be formed without
//! extra arguments.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Maximum asymmetry `|X_ij - conj(X_ji)|` tolerated (relative to the largest
/// entry) before construction rejects a matrix.
pub const HERMITICITY_TOL: f64 = 1e-12;
/// Default PSD tolerance, relative to the Frobenius norm.
pub const DEFAULT_PSD_TOL: f64 = 1e-9;
pub const JACOBI_MAX_SWEEPS: usize = 100;
pub const JACOBI_OFF_TOL: f64 = 1e-14;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// `<u|v>`, conjugate-linear in the first argument.
pub fn inner(u: &[C64], v: &[C64]) -> C64 {
    debug_assert_eq!(u.len(), v.len());
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

pub fn norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn kron_vec(u: &[C64], v: &[C64]) -> Vec<C64> {
    let mut out = Vec::with_capacity(u.len() * v.len());
    for a in u {
        for b in v {
            out.push(a * b);
        }
    }
    out
}

/// Dense square complex Hermitian matrix, optionally tagged with a bipartite
/// factorization `dim = d_A * d_B`.
#[derive(Clone, PartialEq)]
pub struct HermitianMatrix {
    dim: usize,
    data: Vec<C64>,
    bipartite: Option<(usize, usize)>,
}

impl fmt::Debug for HermitianMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "HermitianMatrix({}x{}, {:?})", self.dim, self.dim, self.bipartite)?;
        for i in 0..self.dim {
            write!(f, "  [")?;
            for j in 0..self.dim {
                let z = self.get(i, j);
                if z.im == 0.0 {
                    write!(f, " {:+.6}", z.re)?;
                } else {
                    write!(f, " {:+.6}{:+.6}i", z.re, z.im)?;
                }
            }
            writeln!(f, " ]")?;
        }
        Ok(())
    }
}

impl HermitianMatrix {
    /// Builds a matrix from row-major data. Entries must be finite and
    /// Hermitian within [`HERMITICITY_TOL`]; the stored matrix is the exact
    /// Hermitian part `(X + X^dagger) / 2`.
    pub fn new(dim: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::Shape { expected: dim * dim, got: data.len() });
        }
        let mut scale = 1.0f64;
        for (k, z) in data.iter().enumerate() {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::NonFinite { row: k / dim, col: k % dim });
            }
            scale = scale.max(z.norm());
        }
        let mut asymmetry = 0.0f64;
        for i in 0..dim {
            for j in i..dim {
                let d = (data[i * dim + j] - data[j * dim + i].conj()).norm();
                asymmetry = asymmetry.max(d);
            }
        }
        if asymmetry > HERMITICITY_TOL * scale {
            return Err(Error::NotHermitian { asymmetry });
        }
        let mut m = Self { dim, data, bipartite: None };
        m.symmetrize_in_place();
        Ok(m)
    }

    fn symmetrize_in_place(&mut self) {
        let n = self.dim;
        for i in 0..n {
            self.data[i * n + i].im = 0.0;
            for j in (i + 1)..n {
                let avg = (self.data[i * n + j] + self.data[j * n + i].conj()) * 0.5;
                self.data[i * n + j] = avg;
                self.data[j * n + i] = avg.conj();
            }
        }
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Result<Self> {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self::new(dim, data)
    }

    /// Real symmetric matrix from row-major data.
    pub fn from_real(dim: usize, data: &[f64]) -> Result<Self> {
        Self::new(dim, data.iter().map(|&x| re(x)).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![ZERO; dim * dim], bipartite: None }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = ONE;
        }
        m
    }

    pub fn diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n);
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * n + i] = re(d);
        }
        m
    }

    /// `|v><v|`.
    pub fn projector(v: &[C64]) -> Self {
        let n = v.len();
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(v[i] * v[j].conj());
            }
        }
        let mut m = Self { dim: n, data, bipartite: None };
        m.symmetrize_in_place();
        m
    }

    pub fn with_bipartite(mut self, d_a: usize, d_b: usize) -> Result<Self> {
        if d_a * d_b != self.dim || d_a == 0 {
            return Err(Error::BadBipartite { d_a, d_b, dim: self.dim });
        }
        self.bipartite = Some((d_a, d_b));
        Ok(self)
    }

    pub fn without_bipartite(mut self) -> Self {
        self.bipartite = None;
        self
    }

    pub fn bipartite_dims(&self) -> Option<(usize, usize)> {
        self.bipartite
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.dim + j]
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.data[i * self.dim + i].re).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * s).collect(),
            bipartite: self.bipartite,
        }
    }

    /// Kronecker product; the result carries `(d_X, d_Y)` as its bipartite
    /// dimensions.
    pub fn tensor(&self, other: &Self) -> Self {
        let (da, db) = (self.dim, other.dim);
        let n = da * db;
        let mut data = vec![ZERO; n * n];
        for i in 0..da {
            for j in 0..da {
                let x = self.get(i, j);
                if x == ZERO {
                    continue;
                }
                for k in 0..db {
                    for l in 0..db {
                        data[(i * db + k) * n + (j * db + l)] = x * other.get(k, l);
                    }
                }
            }
        }
        Self { dim: n, data, bipartite: Some((da, db)) }
    }

    /// Partial transpose on subsystem B: block `(i, j)` of the result is the
    /// transpose of block `(i, j)` of `self`.
    pub fn partial_transpose(&self) -> Result<Self> {
        let (da, db) = self.bipartite.ok_or(Error::MissingBipartite)?;
        let n = self.dim;
        let mut data = vec![ZERO; n * n];
        for i in 0..da {
            for j in 0..da {
                for k in 0..db {
                    for l in 0..db {
                        data[(i * db + k) * n + (j * db + l)] = self.data[(i * db + l) * n + (j * db + k)];
                    }
                }
            }
        }
        Ok(Self { dim: n, data, bipartite: self.bipartite })
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.dim, "dimension mismatch");
        let n = self.dim;
        (0..n)
            .map(|i| self.data[i * n..(i + 1) * n].iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `<v|X|v>` (real for Hermitian `X`).
    pub fn expectation(&self, v: &[C64]) -> f64 {
        inner(v, &self.mul_vec(v)).re
    }

    /// `Re Tr(XY)`. Fails on dimension mismatch or when the imaginary part
    /// exceeds `1e-10` relative to `||X||_F ||Y||_F`.
    pub fn trace_product(&self, other: &Self) -> Result<f64> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { left: self.dim, right: other.dim });
        }
        let n = self.dim;
        let mut acc = ZERO;
        for i in 0..n {
            for j in 0..n {
                acc += self.data[i * n + j] * other.data[j * n + i];
            }
        }
        let scale = (self.frobenius_norm() * other.frobenius_norm()).max(1.0);
        if acc.im.abs() > 1e-10 * scale {
            return Err(Error::ComplexTrace(acc.im));
        }
        Ok(acc.re)
    }

    /// Rows and columns restricted to `indices` (0-based, order preserved).
    pub fn principal_submatrix(&self, indices: &[usize]) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::EmptyIndexSet);
        }
        if let Some(&bad) = indices.iter().find(|&&k| k >= self.dim) {
            return Err(Error::IndexOutOfRange { index: bad, dim: self.dim });
        }
        let m = indices.len();
        let mut data = Vec::with_capacity(m * m);
        for &i in indices {
            for &j in indices {
                data.push(self.get(i, j));
            }
        }
        Ok(Self { dim: m, data, bipartite: None })
    }

    /// Determinant: cofactor expansion up to 4x4, LU with partial pivoting
    /// above.
    pub fn det(&self) -> f64 {
        determinant(self.dim, &self.data).re
    }

    /// Leading-minor criterion for positive semidefiniteness of a matrix of
    /// rank at most `rank`: true iff `det X(1..k) > 0` for every `k <= rank`.
    /// The rank bound is the caller's assertion and is not checked here.
    pub fn minor_psd_check(&self, rank: usize) -> bool {
        if rank == 0 || rank > self.dim {
            return false;
        }
        (1..=rank).all(|k| {
            let idx: Vec<usize> = (0..k).collect();
            determinant(k, &self.principal_submatrix(&idx).expect("leading indices").data).re > 0.0
        })
    }

    pub fn eig(&self) -> Result<Eigen> {
        jacobi_eigen(self)
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(self.eig()?.values[0])
    }

    /// `min eigenvalue >= -tol`. A matrix the eigensolver cannot handle is
    /// reported as not PSD.
    pub fn is_psd(&self, tol: f64) -> bool {
        self.min_eigenvalue().map(|l| l >= -tol).unwrap_or(false)
    }

    /// [`is_psd`](Self::is_psd) at the default tolerance `1e-9 * ||X||_F`.
    pub fn is_psd_default(&self) -> bool {
        self.is_psd(DEFAULT_PSD_TOL * self.frobenius_norm())
    }

    /// `W X W^dagger` for a `m x dim` matrix `W`; the result has no bipartite
    /// tag.
    pub fn congruence(&self, w: &ComplexMatrix) -> Self {
        assert_eq!(w.cols, self.dim, "dimension mismatch");
        let wx = w.matmul(&ComplexMatrix::from_hermitian(self));
        let out = wx.matmul(&w.adjoint());
        let mut m = Self { dim: w.rows, data: out.data, bipartite: None };
        m.symmetrize_in_place();
        m
    }
}

impl Add for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn add(self, rhs: &HermitianMatrix) -> HermitianMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        HermitianMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
            bipartite: self.bipartite.or(rhs.bipartite),
        }
    }
}

impl Sub for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn sub(self, rhs: &HermitianMatrix) -> HermitianMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        HermitianMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
            bipartite: self.bipartite.or(rhs.bipartite),
        }
    }
}

impl Neg for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn neg(self) -> HermitianMatrix {
        self.scale(-1.0)
    }
}

impl Mul<f64> for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn mul(self, s: f64) -> HermitianMatrix {
        self.scale(s)
    }
}

/// General dense complex matrix, row-major. Used for frames, eigenvector
/// sets and embeddings.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = ONE;
        }
        m
    }

    pub fn from_hermitian(h: &HermitianMatrix) -> Self {
        Self { rows: h.dim, cols: h.dim, data: h.data.clone() }
    }

    /// Matrix whose columns are `cols` (all of equal length).
    pub fn from_columns(cols: &[Vec<C64>]) -> Self {
        let rows = cols.first().map_or(0, Vec::len);
        let mut m = Self::zeros(rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows, "ragged columns");
            for (i, &z) in col.iter().enumerate() {
                m.data[i * cols.len() + j] = z;
            }
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, z: C64) {
        self.data[i * self.cols + j] = z;
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.data[j * self.rows + i] = self.get(i, j).conj();
            }
        }
        m
    }

    pub fn conj(&self) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z.conj()).collect() }
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == ZERO {
                    continue;
                }
                let row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                let dst = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        out
    }

    pub fn kron(&self, rhs: &Self) -> Self {
        let rows = self.rows * rhs.rows;
        let cols = self.cols * rhs.cols;
        let mut out = Self::zeros(rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                for k in 0..rhs.rows {
                    for l in 0..rhs.cols {
                        out.data[(i * rhs.rows + k) * cols + j * rhs.cols + l] = a * rhs.get(k, l);
                    }
                }
            }
        }
        out
    }

    /// `max |(W^dagger W - I)_ij|`.
    pub fn orthonormality_defect(&self) -> f64 {
        let g = self.adjoint().matmul(self);
        let mut worst = 0.0f64;
        for i in 0..g.rows {
            for j in 0..g.cols {
                let target = if i == j { ONE } else { ZERO };
                worst = worst.max((g.get(i, j) - target).norm());
            }
        }
        worst
    }
}

/// Eigendecomposition `X = V diag(values) V^dagger`, values ascending.
#[derive(Clone, Debug)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl Eigen {
    pub fn vector(&self, k: usize) -> Vec<C64> {
        self.vectors.column(k)
    }

    pub fn reconstruct(&self) -> HermitianMatrix {
        let n = self.values.len();
        let d = HermitianMatrix::diagonal(&self.values);
        let mut m = d.congruence(&self.vectors);
        debug_assert_eq!(m.dim, n);
        m.bipartite = None;
        m
    }
}

fn off_diagonal_norm(a: &[C64], n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[i * n + j].norm_sqr();
            }
        }
    }
    s.sqrt()
}

fn jacobi_eigen(x: &HermitianMatrix) -> Result<Eigen> {
    let n = x.dim;
    let mut a = x.data.clone();
    let mut v = ComplexMatrix::identity(n);
    let scale = x.frobenius_norm();
    let threshold = JACOBI_OFF_TOL * scale;

    let mut off = off_diagonal_norm(&a, n);
    let mut sweeps = 0;
    while off > threshold {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::EigenNoConvergence { sweeps, off_norm: off });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                let mag = apq.norm();
                if mag == 0.0 {
                    continue;
                }
                let app = a[p * n + p].re;
                let aqq = a[q * n + q].re;
                // Phase-rotate q so the (p, q) entry is real, then apply the
                // real Jacobi rotation that annihilates it.
                let phase = (apq / mag).conj();
                let theta = (aqq - app) / (2.0 * mag);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let cs = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * cs;
                let g_pp = re(cs);
                let g_pq = re(sn);
                let g_qp = phase * (-sn);
                let g_qq = phase * cs;

                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = akp * g_pp + akq * g_qp;
                    a[k * n + q] = akp * g_pq + akq * g_qq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = g_pp.conj() * apk + g_qp.conj() * aqk;
                    a[q * n + k] = g_pq.conj() * apk + g_qq.conj() * aqk;
                }
                a[p * n + q] = ZERO;
                a[q * n + p] = ZERO;
                a[p * n + p].im = 0.0;
                a[q * n + q].im = 0.0;
                for k in 0..n {
                    let vkp = v.data[k * n + p];
                    let vkq = v.data[k * n + q];
                    v.data[k * n + p] = vkp * g_pp + vkq * g_qp;
                    v.data[k * n + q] = vkp * g_pq + vkq * g_qq;
                }
            }
        }
        let next = off_diagonal_norm(&a, n);
        // Rounding floor for large matrices sits slightly above the nominal
        // threshold; accept once a sweep stops making progress there.
        if next >= off && next <= 1e-12 * scale {
            break;
        }
        off = next;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].re.total_cmp(&a[j * n + j].re));
    let values = order.iter().map(|&i| a[i * n + i].re).collect();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (new_col, &old_col) in order.iter().enumerate() {
        for r in 0..n {
            vectors.data[r * n + new_col] = v.data[r * n + old_col];
        }
    }
    Ok(Eigen { values, vectors })
}

/// Determinant of a row-major `n x n` complex matrix.
pub fn determinant(n: usize, m: &[C64]) -> C64 {
    debug_assert_eq!(m.len(), n * n);
    if n <= 4 {
        cofactor_det(n, m)
    } else {
        lu_det(n, m)
    }
}

fn cofactor_det(n: usize, m: &[C64]) -> C64 {
    match n {
        0 => ONE,
        1 => m[0],
        2 => m[0] * m[3] - m[1] * m[2],
        _ => {
            let mut acc = ZERO;
            let mut minor = Vec::with_capacity((n - 1) * (n - 1));
            for col in 0..n {
                let pivot = m[col];
                if pivot == ZERO {
                    continue;
                }
                minor.clear();
                for r in 1..n {
                    for cc in 0..n {
                        if cc != col {
                            minor.push(m[r * n + cc]);
                        }
                    }
                }
                let term = pivot * cofactor_det(n - 1, &minor);
                if col % 2 == 0 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            acc
        }
    }
}

fn lu_det(n: usize, m: &[C64]) -> C64 {
    let mut a = m.to_vec();
    let mut det = ONE;
    for k in 0..n {
        let (piv, mag) = (k..n)
            .map(|r| (r, a[r * n + k].norm()))
            .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if mag == 0.0 {
            return ZERO;
        }
        if piv != k {
            for j in 0..n {
                a.swap(k * n + j, piv * n + j);
            }
            det = -det;
        }
        let d = a[k * n + k];
        det *= d;
        for r in (k + 1)..n {
            let f = a[r * n + k] / d;
            if f == ZERO {
                continue;
            }
            for j in k..n {
                let akj = a[k * n + j];
                a[r * n + j] -= f * akj;
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> HermitianMatrix {
        let g: Vec<C64> = (0..n * n).map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
        HermitianMatrix::from_fn(n, |i, j| (g[i * n + j] + g[j * n + i].conj()) * 0.5).unwrap()
    }

    #[test]
    fn rejects_non_hermitian_and_non_finite() {
        let bad = HermitianMatrix::from_real(2, &[1.0, 2.0, 0.0, 1.0]);
        assert!(matches!(bad, Err(Error::NotHermitian { .. })));
        let nan = HermitianMatrix::from_real(2, &[1.0, f64::NAN, f64::NAN, 1.0]);
        assert!(matches!(nan, Err(Error::NonFinite { row: 0, col: 1 })));
        let short = HermitianMatrix::from_real(2, &[1.0, 0.0, 0.0]);
        assert!(matches!(short, Err(Error::Shape { .. })));
    }

    #[test]
    fn tiny_asymmetry_is_symmetrized() {
        let m = HermitianMatrix::new(2, vec![re(1.0), c(0.5, 1e-14), c(0.5, 0.0), re(2.0)]).unwrap();
        assert_eq!(m.get(0, 1), m.get(1, 0).conj());
    }

    #[test]
    fn tensor_identity_and_projectors() {
        let i4 = HermitianMatrix::identity(2).tensor(&HermitianMatrix::identity(2));
        assert_eq!(i4.without_bipartite(), HermitianMatrix::identity(4));
        let p = HermitianMatrix::diagonal(&[1.0, 0.0]);
        let pp = p.tensor(&p);
        assert_eq!(pp.bipartite_dims(), Some((2, 2)));
        assert_eq!(pp.without_bipartite(), HermitianMatrix::diagonal(&[1.0, 0.0, 0.0, 0.0]));
    }

    #[test]
    fn tensor_matches_block_layout() {
        // C (x) D has entry (2i+k, 2j+l) = c_ij d_kl.
        let cm = HermitianMatrix::new(2, vec![re(1.0), c(2.0, 1.0), c(2.0, -1.0), re(3.0)]).unwrap();
        let dm = HermitianMatrix::new(2, vec![re(5.0), c(0.0, 7.0), c(0.0, -7.0), re(11.0)]).unwrap();
        let t = cm.tensor(&dm);
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        assert_eq!(t.get(2 * i + k, 2 * j + l), cm.get(i, j) * dm.get(k, l));
                    }
                }
            }
        }
        // Row 3 of the displayed layout: c21 d11, c21 d12, c22 d11, c22 d12.
        assert_eq!(t.get(2, 1), cm.get(1, 0) * dm.get(0, 1));
    }

    #[test]
    fn partial_transpose_generic_4x4_layout() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let x = random_hermitian(&mut rng, 4).with_bipartite(2, 2).unwrap();
        let g = x.partial_transpose().unwrap();
        // Rows of the printed Gamma(X), 1-based x_ij.
        let expected = [
            [(1, 1), (2, 1), (1, 3), (2, 3)],
            [(1, 2), (2, 2), (1, 4), (2, 4)],
            [(3, 1), (4, 1), (3, 3), (4, 3)],
            [(3, 2), (4, 2), (3, 4), (4, 4)],
        ];
        for (r, row) in expected.iter().enumerate() {
            for (col, &(i, j)) in row.iter().enumerate() {
                assert_eq!(g.get(r, col), x.get(i - 1, j - 1));
            }
        }
        assert_eq!(g.partial_transpose().unwrap(), x);
    }

    #[test]
    fn partial_transpose_of_product_transposes_b() {
        let a = HermitianMatrix::new(2, vec![re(0.3), c(0.1, 0.2), c(0.1, -0.2), re(0.7)]).unwrap();
        let b = HermitianMatrix::new(3, vec![
            re(1.0), c(0.0, 0.5), c(0.2, 0.1),
            c(0.0, -0.5), re(2.0), c(-0.3, 0.4),
            c(0.2, -0.1), c(-0.3, -0.4), re(0.5),
        ])
        .unwrap();
        let bt = HermitianMatrix::from_fn(3, |i, j| b.get(j, i)).unwrap();
        let lhs = a.tensor(&b).partial_transpose().unwrap();
        assert!(lhs.max_abs_diff(&a.tensor(&bt)) < 1e-15);
    }

    #[test]
    fn partial_transpose_requires_bipartite() {
        assert_eq!(HermitianMatrix::identity(4).partial_transpose(), Err(Error::MissingBipartite));
        assert!(HermitianMatrix::identity(4).with_bipartite(3, 2).is_err());
    }

    #[test]
    fn eig_small_cases() {
        let e = HermitianMatrix::diagonal(&[3.0, 1.0, 2.0]).eig().unwrap();
        assert_eq!(e.values, vec![1.0, 2.0, 3.0]);
        let x = HermitianMatrix::from_real(2, &[0.0, 1.0, 1.0, 0.0]).unwrap().eig().unwrap();
        assert!((x.values[0] + 1.0).abs() < 1e-14 && (x.values[1] - 1.0).abs() < 1e-14);
        let z = HermitianMatrix::zeros(3).eig().unwrap();
        assert_eq!(z.values, vec![0.0; 3]);
    }

    #[test]
    fn eig_complex_pauli_y() {
        let y = HermitianMatrix::new(2, vec![ZERO, c(0.0, -1.0), c(0.0, 1.0), ZERO]).unwrap();
        let e = y.eig().unwrap();
        assert!((e.values[0] + 1.0).abs() < 1e-14);
        assert!(e.reconstruct().max_abs_diff(&y) < 1e-14);
    }

    #[test]
    fn eig_large_dimension_converges() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let x = random_hermitian(&mut rng, 64);
        let e = x.eig().unwrap();
        let resid = (&e.reconstruct() - &x).frobenius_norm();
        assert!(resid <= 1e-10 * x.frobenius_norm().max(1.0), "residual {resid}");
        assert!(e.vectors.orthonormality_defect() < 1e-10);
    }

    #[test]
    fn half_swap_is_not_psd() {
        // Gamma(|Phi+><Phi+|) = SWAP / 2; SWAP has eigenvalues {1, 1, 1, -1}.
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let phi = [re(s), ZERO, ZERO, re(s)];
        let g = HermitianMatrix::projector(&phi).with_bipartite(2, 2).unwrap().partial_transpose().unwrap();
        let swap_half = HermitianMatrix::from_real(4, &[
            0.5, 0.0, 0.0, 0.0,
            0.0, 0.0, 0.5, 0.0,
            0.0, 0.5, 0.0, 0.0,
            0.0, 0.0, 0.0, 0.5,
        ])
        .unwrap();
        assert!(g.max_abs_diff(&swap_half) < 1e-15);
        assert!((g.min_eigenvalue().unwrap() + 0.5).abs() < 1e-14);
        assert!(!g.is_psd(1e-10));
        assert!(HermitianMatrix::identity(4).is_psd(0.0));
    }

    #[test]
    fn principal_submatrix_cases() {
        let d = HermitianMatrix::diagonal(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(d.principal_submatrix(&[0, 1, 2, 3]).unwrap(), d);
        assert_eq!(d.principal_submatrix(&[3]).unwrap(), HermitianMatrix::diagonal(&[4.0]));
        assert!(matches!(d.principal_submatrix(&[4]), Err(Error::IndexOutOfRange { index: 4, dim: 4 })));
        assert_eq!(d.principal_submatrix(&[]), Err(Error::EmptyIndexSet));
    }

    #[test]
    fn determinant_paths_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..=4 {
            let x = random_hermitian(&mut rng, n);
            let cof = cofactor_det(n, &x.data);
            let lu = lu_det(n, &x.data);
            assert!((cof - lu).norm() < 1e-12, "n={n}: {cof} vs {lu}");
            // det = product of eigenvalues
            let prod: f64 = x.eig().unwrap().values.iter().product();
            assert!((cof.re - prod).abs() < 1e-12);
        }
        let x = random_hermitian(&mut rng, 7);
        let prod: f64 = x.eig().unwrap().values.iter().product();
        assert!((x.det() - prod).abs() < 1e-10 * prod.abs().max(1.0));
    }

    #[test]
    fn minor_check_basic() {
        assert!(HermitianMatrix::identity(4).minor_psd_check(4));
        assert!(!HermitianMatrix::diagonal(&[1.0, -1.0]).minor_psd_check(2));
        assert!(!HermitianMatrix::identity(2).minor_psd_check(3));
    }

    #[test]
    fn trace_product_cases() {
        let i4 = HermitianMatrix::identity(4);
        assert!((i4.trace_product(&i4.scale(0.25)).unwrap() - 1.0).abs() < 1e-15);
        assert!(matches!(
            i4.trace_product(&HermitianMatrix::identity(2)),
            Err(Error::DimensionMismatch { left: 4, right: 2 })
        ));
    }

    #[test]
    fn congruence_with_unitary_preserves_spectrum() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let x = random_hermitian(&mut rng, 3);
        let u = x.eig().unwrap().vectors;
        let d = x.congruence(&u.adjoint());
        let vals = x.eig().unwrap().values;
        for (i, v) in vals.iter().enumerate() {
            assert!((d.get(i, i).re - v).abs() < 1e-12);
        }
    }
}
