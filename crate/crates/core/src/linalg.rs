//! Internal dense-matrix helpers: just enough generic linear algebra for
//! desk-scale sections (Cholesky/LDL factorizations, triangular inversion,
//! pivoted determinants). Not part of the public API.

use crate::error::{Error, Result};
use crate::scalar::{RealField, Scalar};
use num_traits::One;

/// Dense row-major matrix over a [`Scalar`].
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Mat<T> {
    pub rows: usize,
    pub cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Mat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, T::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    #[cfg(test)]
    pub fn mul(&self, other: &Mat<T>) -> Mat<T> {
        assert_eq!(self.cols, other.rows, "inner dimensions must agree");
        let mut out = Mat::<T>::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k).clone();
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j).clone() + a.clone() * other.get(k, j).clone();
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    #[cfg(test)]
    pub fn conj_transpose(&self) -> Mat<T> {
        Mat::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }
}

/// Lower Cholesky factor of a Hermitian strictly positive matrix:
/// `A = L·Lᴴ` with real positive diagonal. `index_offset` shifts the index
/// reported in errors so callers can speak in global kernel indices.
pub(crate) fn cholesky<T: Scalar>(a: &Mat<T>, index_offset: usize) -> Result<Mat<T>> {
    assert_eq!(a.rows, a.cols);
    let n = a.rows;
    let mut l = Mat::<T>::zeros(n, n);
    for j in 0..n {
        let mut pivot = a.get(j, j).re();
        for k in 0..j {
            pivot = pivot - l.get(j, k).abs_sqr();
        }
        if !pivot.is_positive() {
            return Err(Error::NotStrictlyPositive {
                r: index_offset,
                q: index_offset + j,
            });
        }
        let root = pivot.sqrt_checked()?;
        l.set(j, j, T::from_real(root.clone()));
        let inv_root = T::Real::one() / root;
        for i in (j + 1)..n {
            let mut s = a.get(i, j).clone();
            for k in 0..j {
                s = s - l.get(i, k).clone() * l.get(j, k).conj();
            }
            l.set(i, j, s.scale(&inv_root));
        }
    }
    Ok(l)
}

/// `A = L·D·Lᴴ` with `L` unit lower triangular and `D` real pivots, no
/// square roots. Fails on a nonpositive pivot, which certifies that the
/// leading section ending at that pivot is not strictly positive.
pub(crate) fn ldl_hermitian<T: Scalar>(
    a: &Mat<T>,
    index_offset: usize,
) -> Result<(Mat<T>, Vec<T::Real>)> {
    assert_eq!(a.rows, a.cols);
    let n = a.rows;
    let mut l = Mat::<T>::identity(n);
    let mut d: Vec<T::Real> = Vec::with_capacity(n);
    for j in 0..n {
        let mut pivot = a.get(j, j).re();
        for k in 0..j {
            pivot = pivot - l.get(j, k).abs_sqr() * d[k].clone();
        }
        if !pivot.is_positive() {
            return Err(Error::NotStrictlyPositive {
                r: index_offset,
                q: index_offset + j,
            });
        }
        for i in (j + 1)..n {
            let mut s = a.get(i, j).clone();
            for k in 0..j {
                s = s - l.get(i, k).clone() * l.get(j, k).conj().scale(&d[k]);
            }
            l.set(i, j, s.scale(&(T::Real::one() / pivot.clone())));
        }
        d.push(pivot);
    }
    Ok((l, d))
}

/// Running LDL pivots of a Hermitian matrix, stopping early at the first
/// nonpositive pivot. Returns the pivots computed so far and, if one failed,
/// the index at which it did together with its (nonpositive) value.
pub(crate) fn ldl_pivots<T: Scalar>(a: &Mat<T>) -> (Vec<T::Real>, Option<(usize, T::Real)>) {
    let n = a.rows;
    let mut l = Mat::<T>::identity(n);
    let mut d: Vec<T::Real> = Vec::with_capacity(n);
    for j in 0..n {
        let mut pivot = a.get(j, j).re();
        for k in 0..j {
            pivot = pivot - l.get(j, k).abs_sqr() * d[k].clone();
        }
        if !pivot.is_positive() {
            return (d, Some((j, pivot)));
        }
        for i in (j + 1)..n {
            let mut s = a.get(i, j).clone();
            for k in 0..j {
                s = s - l.get(i, k).clone() * l.get(j, k).conj().scale(&d[k]);
            }
            l.set(i, j, s.scale(&(T::Real::one() / pivot.clone())));
        }
        d.push(pivot);
    }
    (d, None)
}

/// Inverse of a lower triangular matrix by forward substitution, column by
/// column. The error reports the offending diagonal index.
pub(crate) fn lower_tri_inverse<T: Scalar>(l: &Mat<T>) -> Result<Mat<T>> {
    assert_eq!(l.rows, l.cols);
    let n = l.rows;
    for i in 0..n {
        if l.get(i, i).is_zero() {
            return Err(Error::ZeroDiagonal { index: i });
        }
    }
    let mut inv = Mat::<T>::zeros(n, n);
    for j in 0..n {
        let diag = T::one() / l.get(j, j).clone();
        inv.set(j, j, diag);
        for i in (j + 1)..n {
            let mut s = T::zero();
            for k in j..i {
                s = s + l.get(i, k).clone() * inv.get(k, j).clone();
            }
            let v = -(s / l.get(i, i).clone());
            inv.set(i, j, v);
        }
    }
    Ok(inv)
}

/// Determinant by LU elimination with partial pivoting (pivot chosen by
/// largest `|·|²`). Exact in the rational backend; the pivoting keeps the
/// float backend usable on indefinite sections during validation.
pub(crate) fn determinant<T: Scalar>(a: &Mat<T>) -> T {
    assert_eq!(a.rows, a.cols);
    let n = a.rows;
    let mut m = a.clone();
    let mut det = T::one();
    for col in 0..n {
        let mut best = col;
        let mut best_mag = m.get(col, col).abs_sqr();
        for row in (col + 1)..n {
            let mag = m.get(row, col).abs_sqr();
            if mag > best_mag {
                best_mag = mag;
                best = row;
            }
        }
        if m.get(best, col).is_zero() {
            return T::zero();
        }
        if best != col {
            for j in 0..n {
                let tmp = m.get(col, j).clone();
                m.set(col, j, m.get(best, j).clone());
                m.set(best, j, tmp);
            }
            det = -det;
        }
        let pivot = m.get(col, col).clone();
        det = det * pivot.clone();
        for row in (col + 1)..n {
            let factor = m.get(row, col).clone() / pivot.clone();
            if factor.is_zero() {
                continue;
            }
            for j in col..n {
                let v = m.get(row, j).clone() - factor.clone() * m.get(col, j).clone();
                m.set(row, j, v);
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex;
    use num_rational::BigRational;

    type C64 = Complex<f64>;

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    /// Independent oracle: Laplace expansion along the first row.
    fn laplace_det<T: Scalar>(a: &Mat<T>) -> T {
        let n = a.rows;
        if n == 1 {
            return a.get(0, 0).clone();
        }
        let mut det = T::zero();
        for j in 0..n {
            let minor = Mat::from_fn(n - 1, n - 1, |r, c| {
                a.get(r + 1, if c < j { c } else { c + 1 }).clone()
            });
            let term = a.get(0, j).clone() * laplace_det(&minor);
            det = if j % 2 == 0 { det + term } else { det - term };
        }
        det
    }

    #[test]
    fn determinant_matches_laplace_oracle_rational() {
        let a = Mat::from_fn(4, 4, |i, j| rat((i * 4 + j) as i64 % 7 + 1, (i + j + 1) as i64));
        assert_eq!(determinant(&a), laplace_det(&a));
    }

    #[test]
    fn determinant_matches_laplace_oracle_complex() {
        let a = Mat::from_fn(4, 4, |i, j| {
            C64::new((i as f64 - j as f64) * 0.3 + 1.0, (i * j) as f64 * 0.1)
        });
        let d = determinant(&a);
        let o = laplace_det(&a);
        assert!((d - o).norm() < 1e-12);
    }

    #[test]
    fn cholesky_reconstructs_hermitian_positive_matrix() {
        let b = Mat::from_fn(3, 3, |i, j| C64::new(1.0 + i as f64, j as f64 - 0.5));
        let a = b.conj_transpose().mul(&b);
        let a = Mat::from_fn(3, 3, |i, j| {
            *a.get(i, j) + if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) }
        });
        let l = cholesky(&a, 0).unwrap();
        let back = l.mul(&l.conj_transpose());
        for i in 0..3 {
            for j in 0..3 {
                assert!((*back.get(i, j) - *a.get(i, j)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        // det of the 2x2 trailing section is 1 - 4 < 0.
        let a = Mat::from_fn(2, 2, |i, j| if i == j { rat(1, 1) } else { rat(2, 1) });
        match cholesky(&a, 5) {
            Err(Error::NotStrictlyPositive { r: 5, q: 6 }) => {}
            other => panic!("expected failure at global index 6, got {other:?}"),
        }
    }

    #[test]
    fn ldl_pivots_multiply_to_leading_determinants() {
        let a = Mat::from_fn(3, 3, |i, j| rat(1, (i + j + 1) as i64));
        let (l, d) = ldl_hermitian(&a, 0).unwrap();
        // D_{0,0} = 1, D_{0,1} = 1/12, D_{0,2} = 1/2160 for the 1/(i+j+1) section.
        assert_eq!(d[0].clone(), rat(1, 1));
        assert_eq!(d[0].clone() * d[1].clone(), rat(1, 12));
        assert_eq!(d[0].clone() * d[1].clone() * d[2].clone(), rat(1, 2160));
        let lt = l.conj_transpose();
        let mut ld = l.clone();
        for i in 0..3 {
            for j in 0..3 {
                ld.set(i, j, ld.get(i, j).clone() * d[j].clone());
            }
        }
        assert_eq!(ld.mul(&lt), a);
    }

    #[test]
    fn lower_triangular_inverse_is_exact_in_rational() {
        let l = Mat::from_fn(4, 4, |i, j| {
            if i < j {
                rat(0, 1)
            } else {
                rat((i + 2) as i64, (j + 1) as i64)
            }
        });
        let inv = lower_tri_inverse(&l).unwrap();
        assert_eq!(l.mul(&inv), Mat::identity(4));
        assert_eq!(inv.mul(&l), Mat::identity(4));
    }

    #[test]
    fn singular_triangular_inverse_reports_index() {
        let mut l = Mat::<BigRational>::identity(3);
        l.set(1, 1, rat(0, 1));
        match lower_tri_inverse(&l) {
            Err(Error::ZeroDiagonal { index: 1 }) => {}
            other => panic!("unexpected: {other:?}"),
        }
    }
}
