//! Dense complex linear algebra for Hermitian correlation matrices.
//!
//! Column-major storage throughout; the hot paths (Cholesky trailing updates,
//! multi-right-hand-side triangular solves, Gram updates) then run on
//! contiguous column slices and parallelize deterministically across columns.
//!
//! The eigensolver is a cyclic Jacobi iteration for Hermitian matrices. It is
//! slower than tridiagonalization but simple, robust, and more than fast
//! enough for the block sizes used here.

use num_complex::Complex;
use rayon::prelude::*;

use crate::real::Real;
use crate::{Error, Result};

/// Dense complex matrix, column-major.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> CMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex::new(T::zero(), T::zero()); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for k in 0..n {
            m.data[k * n + k] = Complex::new(T::one(), T::zero());
        }
        m
    }

    /// Builds a matrix entry by entry; `f(row, col)`.
    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Complex<T>) -> Self {
        let mut m = Self::zeros(rows, cols);
        for j in 0..cols {
            for i in 0..rows {
                m.data[j * rows + i] = f(i, j);
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

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex<T> {
        self.data[j * self.rows + i]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex<T>) {
        self.data[j * self.rows + i] = v;
    }

    #[inline]
    pub fn col(&self, j: usize) -> &[Complex<T>] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    #[inline]
    pub fn col_mut(&mut self, j: usize) -> &mut [Complex<T>] {
        &mut self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn diagonal(&self) -> Vec<Complex<T>> {
        (0..self.rows.min(self.cols)).map(|k| self.get(k, k)).collect()
    }

    pub fn add_scaled_identity(&mut self, s: T) {
        let n = self.rows.min(self.cols);
        for k in 0..n {
            let v = self.get(k, k);
            self.set(k, k, Complex::new(v.re + s, v.im));
        }
    }

    /// Max absolute deviation from Hermitian symmetry, relative to the largest
    /// diagonal magnitude.
    pub fn hermitian_defect(&self) -> T {
        if self.rows != self.cols {
            return T::infinity();
        }
        let n = self.rows;
        let mut scale = T::zero();
        for k in 0..n {
            scale = scale.max(self.get(k, k).norm());
        }
        if scale == T::zero() {
            scale = T::one();
        }
        let mut worst = T::zero();
        for j in 0..n {
            for i in j..n {
                let d = (self.get(i, j) - self.get(j, i).conj()).norm();
                worst = worst.max(d);
            }
        }
        worst / scale
    }

    pub fn is_hermitian(&self, tol: T) -> bool {
        self.rows == self.cols && self.hermitian_defect() <= tol
    }

    /// Copies the lower triangle onto the upper and forces a real diagonal.
    pub fn symmetrize_from_lower(&mut self) {
        let n = self.rows;
        for j in 0..n {
            let d = self.get(j, j);
            self.set(j, j, Complex::new(d.re, T::zero()));
            for i in j + 1..n {
                let v = self.get(i, j);
                self.set(j, i, v.conj());
            }
        }
    }

    /// `self * x` for a vector `x`.
    pub fn matvec(&self, x: &[Complex<T>]) -> Vec<Complex<T>> {
        assert_eq!(x.len(), self.cols);
        let mut y = vec![Complex::new(T::zero(), T::zero()); self.rows];
        for (j, &xj) in x.iter().enumerate() {
            if xj.re == T::zero() && xj.im == T::zero() {
                continue;
            }
            for (yi, &aij) in y.iter_mut().zip(self.col(j)) {
                *yi += aij * xj;
            }
        }
        y
    }

    /// `self - m^H m`, overwriting `self`; only the full Hermitian result is
    /// kept (lower triangle computed, then mirrored).
    pub fn sub_gram_in_place(&mut self, m: &CMatrix<T>) {
        assert_eq!(self.rows, self.cols);
        assert_eq!(m.cols, self.rows);
        let n = self.rows;
        let rows = self.rows;
        let mdat = &m.data;
        let mrows = m.rows;
        self.data
            .par_chunks_mut(rows)
            .enumerate()
            .for_each(|(j, colj)| {
                let cj = &mdat[j * mrows..(j + 1) * mrows];
                // lower triangle of column j
                for i in j..n {
                    let ci = &mdat[i * mrows..(i + 1) * mrows];
                    let mut acc = Complex::new(T::zero(), T::zero());
                    for (a, b) in ci.iter().zip(cj.iter()) {
                        acc += a.conj() * *b;
                    }
                    colj[i] -= acc;
                }
            });
        self.symmetrize_from_lower();
    }

    /// Weak (normalized Frobenius) norm `(tr[B^H B]/n)^{1/2}` of `self`.
    pub fn weak_norm(&self) -> T {
        let n = T::from_usize(self.rows).unwrap();
        let sum: T = self.data.iter().map(|z| z.norm_sqr()).sum();
        (sum / n).sqrt()
    }
}

/// Weak-norm distance between two equally sized square matrices.
pub fn weak_norm_diff<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>) -> Result<T> {
    if a.rows != a.cols || b.rows != b.cols || a.rows != b.rows {
        return Err(Error::DimensionMismatch {
            context: "weak norm of a difference needs equally sized square matrices",
        });
    }
    let n = T::from_usize(a.rows).unwrap();
    let sum: T = a
        .data
        .iter()
        .zip(&b.data)
        .map(|(x, y)| (*x - *y).norm_sqr())
        .sum();
    Ok((sum / n).sqrt())
}

/// Lower-triangular Cholesky factor of a Hermitian positive definite matrix.
pub struct Cholesky<T> {
    l: CMatrix<T>,
}

/// Factors `a = L L^H`. Fails with the offending pivot index on a
/// non-positive pivot.
pub fn cholesky<T: Real>(a: &CMatrix<T>) -> Result<Cholesky<T>> {
    let mut l = a.clone();
    cholesky_in_place(&mut l)?;
    Ok(Cholesky { l })
}

fn cholesky_in_place<T: Real>(a: &mut CMatrix<T>) -> Result<()> {
    let n = a.rows;
    assert_eq!(n, a.cols);
    let data = &mut a.data;
    for k in 0..n {
        let pivot = data[k * n + k].re;
        if !(pivot > T::zero()) || !pivot.is_finite() {
            return Err(Error::NotPositiveDefinite {
                pivot: k,
                value: pivot.as_f64(),
            });
        }
        let lkk = pivot.sqrt();
        data[k * n + k] = Complex::new(lkk, T::zero());
        let inv = T::one() / lkk;
        for i in k + 1..n {
            let v = data[k * n + i];
            data[k * n + i] = Complex::new(v.re * inv, v.im * inv);
        }
        // trailing update, parallel over columns j > k
        let (head, tail) = data.split_at_mut((k + 1) * n);
        let colk = &head[k * n..(k + 1) * n];
        let update = |(jj, colj): (usize, &mut [Complex<T>])| {
            let j = k + 1 + jj;
            let f = colk[j].conj();
            if f.re == T::zero() && f.im == T::zero() {
                return;
            }
            for i in j..n {
                colj[i] -= colk[i] * f;
            }
        };
        if n - k > 192 {
            tail.par_chunks_mut(n).enumerate().for_each(update);
        } else {
            tail.chunks_mut(n).enumerate().for_each(update);
        }
    }
    // zero strict upper triangle of the factor
    for j in 0..n {
        for i in 0..j {
            data[j * n + i] = Complex::new(T::zero(), T::zero());
        }
    }
    Ok(())
}

impl<T: Real> Cholesky<T> {
    pub fn factor(&self) -> &CMatrix<T> {
        &self.l
    }

    /// `log det A = 2 sum log L_kk`.
    pub fn logdet(&self) -> T {
        let n = self.l.rows;
        let two = T::of(2.0);
        (0..n).map(|k| self.l.get(k, k).re.ln()).sum::<T>() * two
    }

    /// Solves `L x = b` in place.
    pub fn solve_lower_in_place(&self, x: &mut [Complex<T>]) {
        let n = self.l.rows;
        assert_eq!(x.len(), n);
        for k in 0..n {
            let colk = self.l.col(k);
            let xk = x[k] / colk[k];
            x[k] = xk;
            for i in k + 1..n {
                x[i] -= colk[i] * xk;
            }
        }
    }

    /// Solves `L^H x = b` in place.
    pub fn solve_lower_conj_in_place(&self, x: &mut [Complex<T>]) {
        let n = self.l.rows;
        assert_eq!(x.len(), n);
        for k in (0..n).rev() {
            let colk = self.l.col(k);
            let mut acc = Complex::new(T::zero(), T::zero());
            for i in k + 1..n {
                acc += colk[i].conj() * x[i];
            }
            x[k] = (x[k] - acc) / colk[k];
        }
    }

    /// Solves `A x = b` with `A = L L^H`.
    pub fn solve(&self, b: &[Complex<T>]) -> Vec<Complex<T>> {
        let mut x = b.to_vec();
        self.solve_lower_in_place(&mut x);
        self.solve_lower_conj_in_place(&mut x);
        x
    }

    /// Solves `L m = b` column by column (forward substitution on a whole
    /// matrix), parallel over right-hand sides.
    pub fn solve_lower_multi(&self, b: &CMatrix<T>) -> CMatrix<T> {
        assert_eq!(b.rows, self.l.rows);
        let mut m = b.clone();
        let rows = m.rows;
        m.data.par_chunks_mut(rows).for_each(|col| {
            self.solve_lower_in_place(col);
        });
        m
    }

    /// Solves `L^H m = b` in place, column by column, parallel over
    /// right-hand sides.
    pub fn solve_lower_conj_multi_in_place(&self, b: &mut CMatrix<T>) {
        assert_eq!(b.rows, self.l.rows);
        let rows = b.rows;
        b.data.par_chunks_mut(rows).for_each(|col| {
            self.solve_lower_conj_in_place(col);
        });
    }
}

/// Log-determinant of a Hermitian positive semidefinite matrix with a
/// diagonal jitter fallback. Returns the value and whether jitter was applied.
///
/// A factorization is treated as broken not only when a pivot turns
/// non-positive but also when one falls below the rounding floor
/// `n * eps * max diag` — past that point the pivots are noise, not rank
/// information. The fallback refactors with `1e-12 * max diag` added to the
/// diagonal and reports the event so callers can surface it.
pub fn logdet_hermitian_with_jitter<T: Real>(a: &CMatrix<T>) -> Result<(T, bool)> {
    let scale = a
        .diagonal()
        .iter()
        .map(|z| z.re)
        .fold(T::zero(), |m, v| m.max(v));
    let scale = if scale > T::zero() { scale } else { T::one() };
    let breakdown =
        scale * T::epsilon() * T::from_usize(a.rows().max(1)).unwrap() * T::of(8.0);
    match cholesky(a) {
        Ok(f) => {
            let min_pivot = (0..a.rows())
                .map(|k| {
                    let d = f.l.get(k, k).re;
                    d * d
                })
                .fold(T::infinity(), |m, v| m.min(v));
            if min_pivot > breakdown {
                return Ok((f.logdet(), false));
            }
        }
        Err(_) => {}
    }
    let mut b = a.clone();
    b.add_scaled_identity(T::of(1e-12) * scale);
    let f = cholesky(&b)?;
    Ok((f.logdet(), true))
}

/// Eigenvalues (ascending) of a Hermitian matrix, optionally with the unitary
/// eigenvector matrix, by cyclic Jacobi rotations.
pub fn hermitian_eigen<T: Real>(
    a: &CMatrix<T>,
    want_vectors: bool,
) -> Result<(Vec<T>, Option<CMatrix<T>>)> {
    if a.rows != a.cols {
        return Err(Error::DimensionMismatch {
            context: "eigendecomposition needs a square matrix",
        });
    }
    if !a.is_hermitian(T::of(1e-10)) {
        return Err(Error::NotHermitian);
    }
    let n = a.rows;
    let mut m = a.clone();
    let mut v = if want_vectors { Some(CMatrix::identity(n)) } else { None };

    let fro: T = m.data.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
    let stop = fro * T::epsilon() * T::from_usize(n).unwrap();

    for _sweep in 0..40 {
        let mut off = T::zero();
        for j in 0..n {
            for i in j + 1..n {
                off += m.get(i, j).norm_sqr();
            }
        }
        if off.sqrt() <= stop {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m.get(p, q);
                let beta = apq.norm();
                if beta <= stop * T::of(1e-3) {
                    continue;
                }
                let app = m.get(p, p).re;
                let aqq = m.get(q, q).re;
                // phase that makes the off-diagonal entry real
                let phase = apq / Complex::new(beta, T::zero());
                // real Jacobi rotation on [[app, beta], [beta, aqq]]
                let tau = (aqq - app) / (beta * T::of(2.0));
                let t = {
                    let s = if tau >= T::zero() { T::one() } else { -T::one() };
                    s / (tau.abs() + (T::one() + tau * tau).sqrt())
                };
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = t * c;
                // J columns: [:,p] = (c, -s e^{-i phi}); [:,q] = (s, c e^{-i phi})
                let cc = Complex::new(c, T::zero());
                let sc = Complex::new(s, T::zero());
                let sphase = phase.conj() * sc;
                let cphase = phase.conj() * cc;

                // column update: A <- A J
                for i in 0..n {
                    let aip = m.get(i, p);
                    let aiq = m.get(i, q);
                    m.set(i, p, aip * cc - aiq * sphase);
                    m.set(i, q, aip * sc + aiq * cphase);
                }
                // row update: A <- J^H A
                for i in 0..n {
                    let api = m.get(p, i);
                    let aqi = m.get(q, i);
                    m.set(p, i, api * cc - aqi * sphase.conj());
                    m.set(q, i, api * sc + aqi * cphase.conj());
                }
                m.set(p, q, Complex::new(T::zero(), T::zero()));
                m.set(q, p, Complex::new(T::zero(), T::zero()));
                let dp = m.get(p, p);
                let dq = m.get(q, q);
                m.set(p, p, Complex::new(dp.re, T::zero()));
                m.set(q, q, Complex::new(dq.re, T::zero()));

                if let Some(vm) = v.as_mut() {
                    for i in 0..n {
                        let vip = vm.get(i, p);
                        let viq = vm.get(i, q);
                        vm.set(i, p, vip * cc - viq * sphase);
                        vm.set(i, q, vip * sc + viq * cphase);
                    }
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<T> = (0..n).map(|k| m.get(k, k).re).collect();
    order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).unwrap());
    let eigenvalues: Vec<T> = order.iter().map(|&k| diag[k]).collect();
    let vectors = v.map(|vm| {
        CMatrix::from_fn(n, n, |i, j| vm.get(i, order[j]))
    });
    Ok((eigenvalues, vectors))
}

/// Hermitian positive semidefinite square root via eigendecomposition;
/// eigenvalues below zero (rounding) are clipped.
pub fn sqrt_psd<T: Real>(a: &CMatrix<T>) -> Result<CMatrix<T>> {
    let n = a.rows();
    let (vals, vecs) = hermitian_eigen(a, true)?;
    let v = vecs.unwrap();
    let roots: Vec<T> = vals
        .iter()
        .map(|&l| if l > T::zero() { l.sqrt() } else { T::zero() })
        .collect();
    // S = V diag(roots) V^H
    let mut s = CMatrix::zeros(n, n);
    for j in 0..n {
        for i in j..n {
            let mut acc = Complex::new(T::zero(), T::zero());
            for k in 0..n {
                acc += v.get(i, k) * Complex::new(roots[k], T::zero()) * v.get(j, k).conj();
            }
            s.set(i, j, acc);
        }
    }
    s.symmetrize_from_lower();
    Ok(s)
}
