//! Dense complex matrices and the handful of spectral routines the rest of the
//! crate is built on.
//!
//! Storage is row-major. Everything here targets desk-scale problems (a few
//! thousand rows at most), so the algorithms favour clarity and numerical
//! robustness over asymptotics: Hermitian eigenproblems are solved with cyclic
//! complex Jacobi rotations.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scalar::{cr, Real, C};

/// Default tolerance for Hermiticity/unitarity checks (max-entry deviation).
pub const STRUCTURE_TOL: f64 = 1e-10;

const PAR_THRESHOLD: usize = 128;

#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<C<T>>,
}

impl<T: Real> ComplexMatrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<C<T>>) -> Result<Self> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(Error::Shape { rows, cols, len: data.len() });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![C::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C<T>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let r = rows.len();
        let c = rows[0].len();
        Self::from_fn(r, c, |i, j| cr(T::lit(rows[i][j])))
    }

    pub fn from_diag(diag: &[C<T>]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn from_real_diag(diag: &[T]) -> Self {
        let d: Vec<_> = diag.iter().map(|&x| cr(x)).collect();
        Self::from_diag(&d)
    }

    /// Rank-one matrix |u><v|.
    pub fn outer(u: &[C<T>], v: &[C<T>]) -> Self {
        Self::from_fn(u.len(), v.len(), |i, j| u[i] * v[j].conj())
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<C<T>>]) -> Self {
        let n = cols[0].len();
        Self::from_fn(n, cols.len(), |i, j| cols[j][i])
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C<T>] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[C<T>] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<C<T>> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    pub fn diagonal(&self) -> Vec<C<T>> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, s: C<T>) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&x| x * s).collect() }
    }

    pub fn scale_real(&self, s: T) -> Self {
        self.scale(cr(s))
    }

    pub fn trace(&self) -> C<T> {
        self.diagonal().into_iter().fold(C::zero(), |a, b| a + b)
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().fold(T::zero(), |a, z| a + z.norm_sqr()).sqrt()
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |a, z| a.max(z.norm()))
    }

    /// Largest entrywise deviation; infinite when the shapes differ.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        if self.rows != other.rows || self.cols != other.cols {
            return T::infinity();
        }
        self.data
            .iter()
            .zip(&other.data)
            .fold(T::zero(), |a, (x, y)| a.max((*x - *y).norm()))
    }

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

    pub fn unitary_deviation(&self) -> T {
        if !self.is_square() {
            return T::infinity();
        }
        let g = self.adjoint().matmul(self);
        g.max_abs_diff(&Self::identity(self.rows))
    }

    pub fn is_unitary(&self, tol: T) -> bool {
        self.unitary_deviation() <= tol
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "matmul shape mismatch");
        let (n, m) = (self.rows, rhs.cols);
        let mut out = vec![C::zero(); n * m];
        let kernel = |(i, out_row): (usize, &mut [C<T>])| {
            for (k, &a) in self.row(i).iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (o, &b) in out_row.iter_mut().zip(rhs.row(k)) {
                    *o += a * b;
                }
            }
        };
        if n >= PAR_THRESHOLD {
            out.par_chunks_mut(m).enumerate().for_each(kernel);
        } else {
            out.chunks_mut(m).enumerate().for_each(kernel);
        }
        Self { rows: n, cols: m, data: out }
    }

    pub fn matvec(&self, v: &[C<T>]) -> Vec<C<T>> {
        assert_eq!(self.cols, v.len(), "matvec shape mismatch");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).fold(C::zero(), |a, (x, y)| a + *x * *y))
            .collect()
    }

    /// Kronecker product `self ⊗ rhs` (self indexes the most-significant factor).
    pub fn kron(&self, rhs: &Self) -> Self {
        let rows = self.rows * rhs.rows;
        let cols = self.cols * rhs.cols;
        let mut out = Self::zeros(rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self[(i, j)];
                if a.is_zero() {
                    continue;
                }
                for k in 0..rhs.rows {
                    for l in 0..rhs.cols {
                        out[(i * rhs.rows + k, j * rhs.cols + l)] = a * rhs[(k, l)];
                    }
                }
            }
        }
        out
    }

    pub fn submatrix(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> Self {
        Self::from_fn(nr, nc, |i, j| self[(r0 + i, c0 + j)])
    }

    pub fn set_submatrix(&mut self, r0: usize, c0: usize, block: &Self) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self[(r0 + i, c0 + j)] = block[(i, j)];
            }
        }
    }

    /// Largest singular value.
    pub fn spectral_norm(&self) -> T {
        let gram = if self.rows <= self.cols {
            self.matmul(&self.adjoint())
        } else {
            self.adjoint().matmul(self)
        };
        // Gram matrix is Hermitian up to roundoff; symmetrize before diagonalizing.
        let gram = gram.hermitian_part();
        let (vals, _) = jacobi_eigh(&gram);
        vals.last().copied().unwrap_or_else(T::zero).max(T::zero()).sqrt()
    }

    /// (A + A†)/2.
    pub fn hermitian_part(&self) -> Self {
        let half = T::lit(0.5);
        Self::from_fn(self.rows, self.cols, |i, j| (self[(i, j)] + self[(j, i)].conj()).scale(half))
    }

    /// Eigendecomposition of a Hermitian matrix: ascending eigenvalues and the
    /// matching eigenvectors as columns.
    pub fn eig_hermitian(&self) -> Result<(Vec<T>, Self)> {
        let dev = self.hermitian_deviation();
        if dev > T::lit(STRUCTURE_TOL) {
            return Err(Error::NotHermitian { deviation: dev.to_f64_lossy() });
        }
        Ok(jacobi_eigh(&self.hermitian_part()))
    }

    /// f(A) for Hermitian A via its eigendecomposition.
    pub fn map_hermitian(&self, f: impl Fn(T) -> C<T>) -> Result<Self> {
        let (vals, vecs) = self.eig_hermitian()?;
        Ok(spectral_compose(&vals, &vecs, f))
    }

    /// exp(i·t·A) for Hermitian A.
    pub fn expm_i_hermitian(&self, t: T) -> Result<Self> {
        self.map_hermitian(|x| Complex::from_polar(T::one(), x * t))
    }

    /// The 2D×2D unitary [[M, √(I−MM†)], [√(I−M†M), −M†]] for a contraction M.
    pub fn unitary_dilation(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "dilation needs a square matrix, got {}x{}",
                self.rows, self.cols
            )));
        }
        let norm = self.spectral_norm();
        if norm > T::one() + T::lit(1e-12) {
            return Err(Error::NormTooLarge { norm: norm.to_f64_lossy() });
        }
        let n = self.rows;
        let defect = |g: Self| -> Self {
            let (vals, vecs) = jacobi_eigh(&g.hermitian_part());
            // Negative rounding residues are clamped to zero.
            spectral_compose(&vals, &vecs, |x| cr((T::one() - x).max(T::zero()).sqrt()))
        };
        let adj = self.adjoint();
        let top_right = defect(self.matmul(&adj));
        let bottom_left = defect(adj.matmul(self));
        let mut out = Self::zeros(2 * n, 2 * n);
        out.set_submatrix(0, 0, self);
        out.set_submatrix(0, n, &top_right);
        out.set_submatrix(n, 0, &bottom_left);
        out.set_submatrix(n, n, &adj.scale_real(-T::one()));
        Ok(out)
    }

    /// Completes a unit vector to a unitary whose first column is that vector
    /// (Householder reflection, up to a phase fixed so column 0 equals `v`).
    pub fn unitary_with_first_column(v: &[C<T>]) -> Result<Self> {
        let norm = vector_norm(v);
        if (norm - T::one()).abs() > T::lit(1e-10) {
            return Err(Error::NotNormalized { norm: norm.to_f64_lossy() });
        }
        let n = v.len();
        // Phase so that e^{-iφ} v_0 is real and nonnegative.
        let phase = if v[0].norm() > T::zero() { v[0] / cr(v[0].norm()) } else { C::one() };
        let w: Vec<C<T>> = v.iter().map(|&x| x / phase).collect();
        // Householder H = I - 2uu†/(u†u) with u = e_0 - w maps e_0 -> w.
        let mut u: Vec<C<T>> = w.iter().map(|&x| -x).collect();
        u[0] += C::one();
        let uu = u.iter().fold(T::zero(), |a, z| a + z.norm_sqr());
        let mut h = Self::identity(n);
        if uu > T::epsilon() * T::epsilon() {
            let two = T::lit(2.0) / uu;
            for i in 0..n {
                for j in 0..n {
                    h[(i, j)] -= u[i] * u[j].conj() * cr(two);
                }
            }
        }
        // H is Hermitian and maps e_0 to w; multiply by the phase to recover v.
        Ok(h.scale(phase))
    }
}

impl<T> Index<(usize, usize)> for ComplexMatrix<T> {
    type Output = C<T>;
    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &C<T> {
        &self.data[r * self.cols + c]
    }
}

impl<T> IndexMut<(usize, usize)> for ComplexMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C<T> {
        &mut self.data[r * self.cols + c]
    }
}

impl<T: Real> Mul for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn mul(self, rhs: Self) -> ComplexMatrix<T> {
        self.matmul(rhs)
    }
}

impl<T: Real> Add for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn add(self, rhs: Self) -> ComplexMatrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| *a + *b).collect(),
        }
    }
}

impl<T: Real> Sub for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn sub(self, rhs: Self) -> ComplexMatrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| *a - *b).collect(),
        }
    }
}

pub fn vector_norm<T: Real>(v: &[C<T>]) -> T {
    v.iter().fold(T::zero(), |a, z| a + z.norm_sqr()).sqrt()
}

/// <u|v>, antilinear in the first argument.
pub fn inner<T: Real>(u: &[C<T>], v: &[C<T>]) -> C<T> {
    u.iter().zip(v).fold(C::zero(), |a, (x, y)| a + x.conj() * *y)
}

/// V diag(f(λ)) V†.
pub fn spectral_compose<T: Real>(
    vals: &[T],
    vecs: &ComplexMatrix<T>,
    f: impl Fn(T) -> C<T>,
) -> ComplexMatrix<T> {
    let n = vals.len();
    let fv: Vec<C<T>> = vals.iter().map(|&x| f(x)).collect();
    let scaled = ComplexMatrix::from_fn(n, n, |i, k| vecs[(i, k)] * fv[k]);
    scaled.matmul(&vecs.adjoint())
}

/// Cyclic Jacobi for a (numerically exactly) Hermitian matrix.
fn jacobi_eigh<T: Real>(m: &ComplexMatrix<T>) -> (Vec<T>, ComplexMatrix<T>) {
    let n = m.rows;
    let mut a = m.clone();
    let mut v = ComplexMatrix::<T>::identity(n);
    let scale = a.frobenius_norm().max(T::min_positive_value());
    let stop = T::epsilon() * scale * T::lit(0.25);

    for _sweep in 0..100 {
        let mut off = T::zero();
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[(p, q)].norm_sqr();
            }
        }
        if off.sqrt() <= stop {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let b = apq.norm();
                if b <= stop * T::lit(1e-3) {
                    continue;
                }
                let phase = apq / cr(b);
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let zeta = (aqq - app) / (T::lit(2.0) * b);
                let t = zeta.signum() / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                let cs = T::one() / (T::one() + t * t).sqrt();
                let sn = t * cs;
                // J restricted to (p,q): [[c, s], [-s e^{-iφ}, c e^{-iφ}]].
                let jpp = cr(cs);
                let jpq = cr(sn);
                let jqp = cr(-sn) * phase.conj();
                let jqq = cr(cs) * phase.conj();
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * jpp + akq * jqp;
                    a[(k, q)] = akp * jpq + akq * jqq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = jpp.conj() * apk + jqp.conj() * aqk;
                    a[(q, k)] = jpq.conj() * apk + jqq.conj() * aqk;
                }
                a[(p, q)] = C::zero();
                a[(q, p)] = C::zero();
                a[(p, p)] = cr(a[(p, p)].re);
                a[(q, q)] = cr(a[(q, q)].re);
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * jpp + vkq * jqp;
                    v[(k, q)] = vkp * jpq + vkq * jqq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.partial_cmp(&a[(j, j)].re).unwrap());
    let vals = order.iter().map(|&i| a[(i, i)].re).collect();
    let vecs = ComplexMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    (vals, vecs)
}
