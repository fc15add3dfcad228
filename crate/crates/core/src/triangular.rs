//! Lower triangular arrays: the algebra where polynomial families act as
//! subdiagonal-banded elements, inverses are computed by forward
//! substitution, and strictly positive kernels factor as `K = Θᴴ·Θ` with a
//! lower triangular `Θ` of positive diagonal.

use crate::error::{Error, Result};
use crate::idx;
use crate::kernel::MomentKernel;
use crate::linalg::{self, Mat};
use crate::poly::PolyTable;
use crate::scalar::Scalar;
use crate::schur::GammaField;

/// Dense lower triangle with diagonal, row-major packed storage.
#[derive(Debug, Clone, PartialEq)]
pub struct TriangularArray<T: Scalar> {
    size: usize,
    entries: Vec<T>,
}

impl<T: Scalar> TriangularArray<T> {
    pub fn zeros(size: usize) -> Self {
        TriangularArray {
            size,
            entries: vec![T::zero(); size * (size + 1) / 2],
        }
    }

    pub fn identity(size: usize) -> Self {
        let mut a = TriangularArray::zeros(size);
        for k in 0..size {
            a.set(k, k, T::one());
        }
        a
    }

    /// Builds from a function over the lower triangle (`k ≥ j`).
    pub fn from_fn(size: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut entries = Vec::with_capacity(size * (size + 1) / 2);
        for k in 0..size {
            for j in 0..=k {
                entries.push(f(k, j));
            }
        }
        TriangularArray { size, entries }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Entry `(k, j)`; zero above the diagonal.
    pub fn get(&self, k: usize, j: usize) -> T {
        assert!(k < self.size && j < self.size, "index out of range");
        if k >= j {
            self.entries[idx::lower(k, j)].clone()
        } else {
            T::zero()
        }
    }

    pub fn set(&mut self, k: usize, j: usize, v: T) {
        assert!(k >= j && k < self.size, "only the lower triangle is stored");
        self.entries[idx::lower(k, j)] = v;
    }

    /// Iterates `(k, j, entry)` over the stored triangle in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &T)> {
        let size = self.size;
        (0..size)
            .flat_map(move |k| (0..=k).map(move |j| (k, j)))
            .zip(self.entries.iter())
            .map(|((k, j), v)| (k, j, v))
    }

    /// Triangular product `(ab)_{k,j} = Σ_{j ≤ l ≤ k} a_{k,l}·b_{l,j}`.
    pub fn multiply(&self, other: &TriangularArray<T>) -> Result<TriangularArray<T>> {
        if self.size != other.size {
            return Err(Error::SizeMismatch {
                left: self.size,
                right: other.size,
            });
        }
        Ok(TriangularArray::from_fn(self.size, |k, j| {
            let mut acc = T::zero();
            for l in j..=k {
                acc = acc + self.get(k, l) * other.get(l, j);
            }
            acc
        }))
    }

    /// Inverse by forward substitution, column by column. Exists iff every
    /// diagonal entry is nonzero.
    pub fn invert(&self) -> Result<TriangularArray<T>> {
        let n = self.size;
        let mut inv = TriangularArray::zeros(n);
        for j in 0..n {
            let piv = self.get(j, j);
            if piv == T::zero() {
                return Err(Error::ZeroDiagonal { index: j });
            }
            let inv_piv = T::one() / piv;
            inv.set(j, j, inv_piv.clone());
            for k in (j + 1)..n {
                let mut acc = T::zero();
                for l in j..k {
                    acc = acc + self.get(k, l) * inv.get(l, j);
                }
                let piv_k = self.get(k, k);
                if piv_k == T::zero() {
                    return Err(Error::ZeroDiagonal { index: k });
                }
                inv.set(k, j, -(acc / piv_k));
            }
        }
        Ok(inv)
    }

    /// Largest entrywise deviation from `other` on the common lower
    /// triangle, in `f64` for reporting.
    pub fn max_deviation(&self, other: &TriangularArray<T>) -> f64 {
        let common = self.size.min(other.size);
        let mut max = 0.0f64;
        for k in 0..common {
            for j in 0..=k {
                let dev = (self.get(k, j) - other.get(k, j)).abs_f64();
                max = max.max(dev);
            }
        }
        max
    }
}

/// Embeds degree `n` of a polynomial table as a triangular array:
/// `(Φ_n)_{k,j}` is the coefficient of `X^{k−j}` in `φ_n(·, j)` (or in
/// `φ_n^♯(·, j)` when `reversed`), so column `j` carries the level-`j`
/// polynomial and the band width is `n`.
pub fn embed_phi<T: Scalar>(
    table: &PolyTable<T>,
    n: usize,
    reversed: bool,
    size: usize,
) -> Result<TriangularArray<T>> {
    if n > table.max_degree() || table.level_capacity(n) < size {
        return Err(Error::NotEnoughData {
            what: "polynomial table levels",
            needed: size,
            got: table.level_capacity(n),
        });
    }
    Ok(TriangularArray::from_fn(size, |k, j| {
        let p = k - j;
        if p > n {
            T::zero()
        } else if reversed {
            table.phi_sharp(n, j)[p].clone()
        } else {
            table.phi(n, j)[p].clone()
        }
    }))
}

/// How much the spectral factor moved between the half-size and full-size
/// sections, measured on the top-left quarter they share.
#[derive(Debug, Clone, serde::Serialize)]
pub struct StabilizationReport {
    pub full_size: usize,
    pub half_size: usize,
    /// `max |Θ_full(k,j) − Θ_half(k,j)|` over `k, j < half_size`.
    pub max_deviation: f64,
}

/// Factors the leading `m`-section of a strictly positive kernel as
/// `K = Θᴴ·Θ` with `Θ` lower triangular and positive diagonal.
///
/// Computed by Cholesky factorization in reversed index order: with `J` the
/// index reversal, `J·K·J = L·Lᴴ` and `Θ = J·Lᴴ·J`. The companion report
/// compares against the factor of the `m/2`-section, since finite sections
/// of an infinite kernel only stabilize entrywise as `m` grows.
pub fn spectral_factor<T: Scalar>(
    kernel: &MomentKernel<T>,
    m: usize,
) -> Result<(TriangularArray<T>, StabilizationReport)> {
    let theta = spectral_factor_section(kernel, m)?;
    let half = m / 2;
    let max_deviation = if half == 0 {
        0.0
    } else {
        let theta_half = spectral_factor_section(kernel, half)?;
        theta.max_deviation(&theta_half)
    };
    Ok((
        theta,
        StabilizationReport {
            full_size: m,
            half_size: half,
            max_deviation,
        },
    ))
}

fn spectral_factor_section<T: Scalar>(
    kernel: &MomentKernel<T>,
    m: usize,
) -> Result<TriangularArray<T>> {
    if m > kernel.size() {
        return Err(Error::NotEnoughData {
            what: "kernel truncation",
            needed: m,
            got: kernel.size(),
        });
    }
    let reversed = Mat::from_fn(m, m, |i, j| kernel.get(m - 1 - i, m - 1 - j));
    let l = linalg::cholesky(&reversed, 0)?;
    Ok(TriangularArray::from_fn(m, |k, j| {
        l.get(m - 1 - j, m - 1 - k).conj()
    }))
}

/// One degree of the convergence diagnostics: the polynomial family must
/// flatten to zero on any fixed window, while the inverted reversed family
/// must approach the spectral factor there.
#[derive(Debug, Clone, serde::Serialize)]
pub struct ConvergenceRow {
    pub n: usize,
    /// `sup |(Φ_n)_{k,j}|` over the top-left window.
    pub phi_sup: f64,
    /// `sup |((Φ_n^♯)⁻¹)_{k,j} − Θ_{k,j}|` over the top-left window.
    pub inv_sharp_dev: f64,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct ConvergenceReport {
    pub window: usize,
    pub rows: Vec<ConvergenceRow>,
}

/// Runs the convergence diagnostics for degrees `n ≤ n_max` against the
/// spectral factor of the kernel at size `n_max + window`.
///
/// The parameter field must extend to index `2·n_max + window − 1` (the
/// polynomial recurrence consumes one extra level per degree), and the
/// kernel to `n_max + window`.
pub fn convergence_report<T: Scalar>(
    g: &GammaField<T>,
    kernel: &MomentKernel<T>,
    n_max: usize,
    window: usize,
) -> Result<ConvergenceReport> {
    let m = n_max + window;
    let table = crate::poly::build_polys(g, n_max, m.saturating_sub(1))?;
    let (theta, _) = spectral_factor(kernel, m)?;
    let mut rows = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let phi = embed_phi(&table, n, false, m)?;
        let inv_sharp = embed_phi(&table, n, true, m)?.invert()?;
        let mut phi_sup = 0.0f64;
        let mut inv_sharp_dev = 0.0f64;
        for k in 0..window {
            for j in 0..=k {
                phi_sup = phi_sup.max(phi.get(k, j).abs_f64());
                inv_sharp_dev =
                    inv_sharp_dev.max((inv_sharp.get(k, j) - theta.get(k, j)).abs_f64());
            }
        }
        rows.push(ConvergenceRow {
            n,
            phi_sup,
            inv_sharp_dev,
        });
    }
    Ok(ConvergenceReport { window, rows })
}

/// Closed form for the diagonal of the inverted reversed family:
/// `((Φ_n^♯)⁻¹)_{r,r} = s_{r,r}^{1/2}·∏_{p=1}^{n} d_{r,p+r}`, nonincreasing
/// in `n`; its limit is the spectral factor diagonal.
pub fn inv_sharp_diagonal<T: Scalar>(g: &GammaField<T>, n: usize, r: usize) -> Result<T::Real> {
    let mut v = g.sqrt_diag(r)?;
    for p in 1..=n {
        v = v * g.dee(r, p + r).clone();
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models;
    use crate::poly::build_polys;
    use num_complex::Complex;
    use num_rational::BigRational;

    type C = Complex<f64>;

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    #[test]
    fn product_with_identity_and_shifts() {
        let a = TriangularArray::<C>::from_fn(4, |k, j| C::new((k * 10 + j) as f64, 1.0));
        let id = TriangularArray::identity(4);
        assert_eq!(a.multiply(&id).unwrap(), a);
        assert_eq!(id.multiply(&a).unwrap(), a);
        // A subdiagonal shift squared moves two steps down.
        let shift = TriangularArray::<C>::from_fn(4, |k, j| {
            if k == j + 1 {
                C::new(1.0, 0.0)
            } else {
                C::new(0.0, 0.0)
            }
        });
        let twice = shift.multiply(&shift).unwrap();
        for k in 0..4 {
            for j in 0..=k {
                let want = if k == j + 2 { 1.0 } else { 0.0 };
                assert_eq!(twice.get(k, j), C::new(want, 0.0));
            }
        }
    }

    #[test]
    fn size_mismatch_is_rejected() {
        let a = TriangularArray::<C>::identity(3);
        let b = TriangularArray::<C>::identity(4);
        assert!(matches!(
            a.multiply(&b),
            Err(Error::SizeMismatch { left: 3, right: 4 })
        ));
    }

    #[test]
    fn bidiagonal_inverse_is_geometric() {
        let c = rat(2, 3);
        let a = TriangularArray::<BigRational>::from_fn(5, |k, j| {
            if k == j {
                rat(1, 1)
            } else if k == j + 1 {
                c.clone()
            } else {
                rat(0, 1)
            }
        });
        let inv = a.invert().unwrap();
        for k in 0..5usize {
            for j in 0..=k {
                let mut want = rat(1, 1);
                for _ in 0..(k - j) {
                    want = -want * c.clone();
                }
                assert_eq!(inv.get(k, j), want, "({k},{j})");
            }
        }
        assert_eq!(
            a.multiply(&inv).unwrap(),
            TriangularArray::identity(5),
            "exact two-sided inverse"
        );
    }

    #[test]
    fn inversion_reports_the_zero_diagonal_index() {
        let mut a = TriangularArray::<C>::identity(3);
        a.set(2, 2, C::new(0.0, 0.0));
        assert!(matches!(a.invert(), Err(Error::ZeroDiagonal { index: 2 })));
    }

    #[test]
    fn zero_field_embeddings_are_shifts_and_identity() {
        let g = GammaField::<C>::from_fn(8, |_| 1.0, |_, _| C::new(0.0, 0.0)).unwrap();
        let t = build_polys(&g, 2, 5).unwrap();
        let phi1 = embed_phi(&t, 1, false, 5).unwrap();
        for k in 0..5 {
            for j in 0..=k {
                let want = if k == j + 1 { 1.0 } else { 0.0 };
                assert_eq!(phi1.get(k, j), C::new(want, 0.0));
            }
        }
        let sharp2 = embed_phi(&t, 2, true, 5).unwrap();
        assert_eq!(sharp2, TriangularArray::identity(5));
    }

    #[test]
    fn embedding_requires_table_coverage() {
        let g = GammaField::<C>::from_fn(6, |_| 1.0, |_, _| C::new(0.0, 0.0)).unwrap();
        let t = build_polys(&g, 2, 3).unwrap();
        assert!(embed_phi(&t, 2, false, 4).is_ok());
        assert!(matches!(
            embed_phi(&t, 2, false, 5),
            Err(Error::NotEnoughData { .. })
        ));
    }

    #[test]
    fn spectral_factor_of_diagonal_kernels() {
        let k = MomentKernel::from_fn(4, |r, c| {
            if r == c {
                C::new(((r + 1) * (r + 1)) as f64, 0.0)
            } else {
                C::new(0.0, 0.0)
            }
        });
        let (theta, report) = spectral_factor(&k, 4).unwrap();
        for r in 0..4 {
            for j in 0..=r {
                let want = if r == j { (r + 1) as f64 } else { 0.0 };
                assert!((theta.get(r, j).re - want).abs() < 1e-14);
            }
        }
        assert!(report.max_deviation < 1e-14);
    }

    #[test]
    fn spectral_factor_reproduces_the_kernel() {
        let g = GammaField::<C>::from_entries(
            vec![1.0, 2.0, 0.5, 1.5, 1.0],
            vec![
                (0, 1, C::new(0.3, 0.4)),
                (0, 2, C::new(-0.2, 0.1)),
                (1, 2, C::new(0.5, -0.3)),
                (1, 3, C::new(0.1, 0.2)),
                (2, 4, C::new(-0.4, -0.2)),
                (3, 4, C::new(0.0, 0.55)),
            ],
        )
        .unwrap();
        let kernel = g.reconstruct_moments(5).unwrap();
        let (theta, _) = spectral_factor(&kernel, 5).unwrap();
        for r in 0..5 {
            assert!(theta.get(r, r).im.abs() < 1e-14);
            assert!(theta.get(r, r).re > 0.0, "positive diagonal");
        }
        for k in 0..5 {
            for j in k..5 {
                let mut acc = C::new(0.0, 0.0);
                for m in 0..5 {
                    acc += theta.get(m, k).conj() * theta.get(m, j);
                }
                assert!((acc - kernel.get(k, j)).norm() < 1e-12, "({k},{j})");
            }
        }
    }

    #[test]
    fn spectral_factor_is_exact_for_square_rational_kernels() {
        let g = GammaField::<BigRational>::from_fn(4, |_| rat(1, 1), |_, _| rat(3, 5)).unwrap();
        let kernel = g.reconstruct_moments(4).unwrap();
        let (theta, _) = spectral_factor(&kernel, 4).unwrap();
        for k in 0..4 {
            for j in k..4 {
                let mut acc = rat(0, 1);
                for m in 0..4 {
                    acc = acc + theta.get(m, k) * theta.get(m, j);
                }
                assert_eq!(acc, kernel.get(k, j), "({k},{j})");
            }
        }
        // Θ_{r,r}² = D_{r,M−1}/D_{r+1,M−1} = ∏_{j>r} d²_{r,j} for unit diagonal.
        for r in 0..3usize {
            let mut want = rat(1, 1);
            for j in (r + 1)..4 {
                want = want * g.dee(r, j).clone() * g.dee(r, j).clone();
            }
            let v = theta.get(r, r);
            assert_eq!(&v * &v, want, "diagonal {r}");
        }
    }

    #[test]
    fn singular_sections_are_rejected() {
        let k = MomentKernel::from_fn(3, |_, _| C::new(1.0, 0.0));
        assert!(matches!(
            spectral_factor(&k, 3),
            Err(Error::NotStrictlyPositive { .. })
        ));
    }

    #[test]
    fn inverse_sharp_diagonal_closed_form() {
        let g = models::hilbert_field(7).unwrap();
        let t = build_polys(&g, 3, 3).unwrap();
        let inv = embed_phi(&t, 3, true, 4).unwrap().invert().unwrap();
        for r in 0..4usize {
            let want = inv_sharp_diagonal(&g, 3, r).unwrap();
            assert!(
                (inv.get(r, r).re - want).abs() < 1e-12,
                "row {r}: {} vs {want}",
                inv.get(r, r)
            );
        }
        // Nonincreasing in the degree.
        for n in 1..=3usize {
            for r in 0..2usize {
                let prev = inv_sharp_diagonal(&g, n - 1, r).unwrap();
                let cur = inv_sharp_diagonal(&g, n, r).unwrap();
                assert!(cur <= prev);
            }
        }
    }

    #[test]
    fn zero_field_convergence_report() {
        let g = GammaField::<C>::from_fn(13, |_| 1.0, |_, _| C::new(0.0, 0.0)).unwrap();
        let kernel = g.reconstruct_moments(8).unwrap();
        let report = convergence_report(&g, &kernel, 5, 3).unwrap();
        for row in &report.rows {
            assert!(row.inv_sharp_dev < 1e-14, "degree {}", row.n);
            let want = if row.n < 3 { 1.0 } else { 0.0 };
            assert!((row.phi_sup - want).abs() < 1e-14, "degree {}", row.n);
        }
    }
}
