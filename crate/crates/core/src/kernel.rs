//! Moment kernels: Hermitian strictly positive functions on a finite
//! truncation `0..M` of the index set, stored as the upper triangle.
//!
//! Hermitian symmetry holds by construction (only `k <= j` is stored; the
//! lower triangle is produced by conjugation on read). Validation therefore
//! checks the two remaining axioms: real strictly positive diagonal and
//! strict positivity of the leading principal sections.

use crate::error::{Error, Result};
use crate::idx;
use crate::linalg::{self, Mat};
use crate::scalar::{RealField, Scalar};
use crate::schur::GammaField;
use num_traits::Zero;

/// Finite truncation of a Hermitian moment kernel `s_{k,j}`.
///
/// Indices are plain integers `0..size`. Word-indexed kernels (free
/// semigroup) use the graded rank of a word as its index; see the `tree`
/// module for the mapping.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentKernel<T: Scalar> {
    size: usize,
    upper: Vec<T>,
}

impl<T: Scalar> MomentKernel<T> {
    /// Builds a kernel from a function on the upper triangle `k <= j`.
    pub fn from_fn(size: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut upper = Vec::with_capacity(size * (size + 1) / 2);
        for k in 0..size {
            for j in k..size {
                upper.push(f(k, j));
            }
        }
        MomentKernel { size, upper }
    }

    /// Builds a kernel from sparse upper-triangle entries; unspecified
    /// entries are zero. Rejects lower-triangle positions, out-of-range
    /// indices, and duplicates.
    pub fn from_entries(
        size: usize,
        entries: impl IntoIterator<Item = (usize, usize, T)>,
    ) -> Result<Self> {
        let mut upper = vec![T::zero(); size * (size + 1) / 2];
        let mut seen = vec![false; upper.len()];
        for (k, j, v) in entries {
            if k > j {
                return Err(Error::LowerTriangleEntry { k, j });
            }
            if j >= size {
                return Err(Error::IndexOutOfRange { k, j, size });
            }
            let at = idx::upper(k, j, size);
            if seen[at] {
                return Err(Error::DuplicateEntry { k, j });
            }
            seen[at] = true;
            upper[at] = v;
        }
        Ok(MomentKernel { size, upper })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Kernel value at `(k, j)`; the lower triangle is the conjugate of the
    /// stored upper triangle.
    pub fn get(&self, k: usize, j: usize) -> T {
        assert!(k < self.size && j < self.size, "index outside truncation");
        if k <= j {
            self.upper[idx::upper(k, j, self.size)].clone()
        } else {
            self.upper[idx::upper(j, k, self.size)].conj()
        }
    }

    /// Iterates the stored upper triangle as `(k, j, value)`.
    pub fn upper_entries(&self) -> impl Iterator<Item = (usize, usize, &T)> {
        let size = self.size;
        (0..size)
            .flat_map(move |k| (k..size).map(move |j| (k, j)))
            .zip(self.upper.iter())
            .map(|((k, j), v)| (k, j, v))
    }

    /// Dense matrix of the section over indices `r..=q`.
    pub(crate) fn section(&self, r: usize, q: usize) -> Mat<T> {
        Mat::from_fn(q - r + 1, q - r + 1, |i, j| self.get(r + i, r + j))
    }

    /// Checks the kernel axioms that are not enforced by storage: real
    /// strictly positive diagonal, and strict positivity of the leading
    /// sections. Reports the first failure instead of erroring so callers
    /// can print diagnostics.
    pub fn validate(&self) -> ValidationReport<T::Real> {
        let mut diag_violations = Vec::new();
        for k in 0..self.size {
            let v = self.get(k, k);
            if !v.im().is_zero() || !v.re().is_positive() {
                diag_violations.push(k);
            }
        }
        let first_nonpositive = if self.size == 0 {
            None
        } else {
            let full = self.section(0, self.size - 1);
            let (pivots, failure) = linalg::ldl_pivots(&full);
            failure.map(|(n, pivot)| {
                let mut det = pivot;
                for p in &pivots {
                    det = det * p.clone();
                }
                FirstNonpositive { upto: n, det }
            })
        };
        ValidationReport {
            diag_violations,
            first_nonpositive,
        }
    }

    /// Determinant `D_{r,q}` of the section over `r..=q`. Exact in the
    /// rational backend. Uses pivoted elimination, so it stays meaningful on
    /// indefinite sections during validation.
    pub fn determinant(&self, r: usize, q: usize) -> Result<T::Real> {
        if r > q || q >= self.size {
            return Err(Error::IndexOutOfRange {
                k: r,
                j: q,
                size: self.size,
            });
        }
        // A Hermitian determinant is real; the imaginary part of the pivoted
        // product is rounding noise and is dropped.
        Ok(linalg::determinant(&self.section(r, q)).re())
    }
}

/// Outcome of [`MomentKernel::validate`].
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport<R> {
    /// Diagonal positions that are not real and strictly positive.
    pub diag_violations: Vec<usize>,
    /// First leading principal section `0..=upto` whose determinant is not
    /// strictly positive, with that determinant.
    pub first_nonpositive: Option<FirstNonpositive<R>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FirstNonpositive<R> {
    pub upto: usize,
    pub det: R,
}

impl<R> ValidationReport<R> {
    pub fn is_valid(&self) -> bool {
        self.diag_violations.is_empty() && self.first_nonpositive.is_none()
    }
}

/// All section determinants `D_{r,q}`, `r <= q`, of a strictly positive
/// kernel, computed by one square-root-free elimination pass per starting
/// row (the running pivot products are exactly the leading determinants of
/// each shifted section). Exact in the rational backend.
#[derive(Debug, Clone, PartialEq)]
pub struct DeterminantTable<R> {
    size: usize,
    values: Vec<R>,
}

impl<R: RealField> DeterminantTable<R> {
    pub fn compute<T: Scalar<Real = R>>(kernel: &MomentKernel<T>) -> Result<Self> {
        let size = kernel.size();
        let mut values = vec![R::zero(); size * (size + 1) / 2];
        for r in 0..size {
            let section = kernel.section(r, size - 1);
            let (_, pivots) = linalg::ldl_hermitian(&section, r)?;
            let mut running = R::one();
            for (offset, pivot) in pivots.into_iter().enumerate() {
                running = running * pivot;
                values[idx::upper(r, r + offset, size)] = running.clone();
            }
        }
        Ok(DeterminantTable { size, values })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// `D_{r,q}` for `r <= q < size`.
    pub fn get(&self, r: usize, q: usize) -> &R {
        assert!(r <= q && q < self.size, "index outside table");
        &self.values[idx::upper(r, q, self.size)]
    }

    /// Iterates `(r, q, D_{r,q})` in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &R)> {
        let size = self.size;
        (0..size)
            .flat_map(move |r| (r..size).map(move |q| (r, q)))
            .zip(self.values.iter())
            .map(|((r, q), v)| (r, q, v))
    }
}

/// Configuration for [`szego_class_report`]. Defaults: horizon 64, value
/// tolerance 1e-6, plateau window 10, plateau tolerance 1e-6.
#[derive(Debug, Clone)]
pub struct SzegoConfig {
    /// Maximum number of parameter gaps folded into each row product.
    pub horizon: usize,
    /// Partial products below this value classify the row as degenerate.
    pub value_tol: f64,
    /// Number of trailing steps over which the plateau drop is measured.
    pub plateau_window: usize,
    /// Maximum relative drop over the trailing window for a plateau.
    pub plateau_tol: f64,
}

impl Default for SzegoConfig {
    fn default() -> Self {
        SzegoConfig {
            horizon: 64,
            value_tol: 1e-6,
            plateau_window: 10,
            plateau_tol: 1e-6,
        }
    }
}

/// Row-wise and overall classification of a parameter field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum SzegoClass {
    /// Partial products plateau above the value tolerance.
    Szego,
    /// Partial products fall below the value tolerance.
    Degenerate,
    /// Still decreasing materially at the horizon; undecidable here.
    Inconclusive,
}

#[derive(Debug, Clone)]
pub struct SzegoRow<R> {
    pub row: usize,
    /// `p_k(h) = s_{k,k} * prod_{n=1..h} d²_{k,k+n}` for `h = 0..=horizon_k`,
    /// nonincreasing in `h`.
    pub partials: Vec<R>,
    pub class: SzegoClass,
}

#[derive(Debug, Clone)]
pub struct SzegoReport<R> {
    pub rows: Vec<SzegoRow<R>>,
    pub classification: SzegoClass,
}

impl<R: RealField> SzegoRow<R> {
    pub fn last(&self) -> &R {
        self.partials.last().expect("partials never empty")
    }
}

/// Classifies each row of the field by the trend of its partial products
/// `s_{k,k}·∏ d²` and aggregates: any degenerate row makes the field
/// degenerate; otherwise all rows must plateau for the field to be in the
/// Szegő class. The horizon is capped by the available parameter range.
pub fn szego_class_report<T: Scalar>(
    field: &GammaField<T>,
    config: &SzegoConfig,
) -> SzegoReport<T::Real> {
    let size = field.size();
    let mut rows = Vec::with_capacity(size);
    for k in 0..size {
        let reach = (size - 1 - k).min(config.horizon);
        let mut partials = Vec::with_capacity(reach + 1);
        let mut p = field.diag(k).clone();
        partials.push(p.clone());
        for n in 1..=reach {
            let d = field.dee(k, k + n);
            p = p * d.clone() * d.clone();
            partials.push(p.clone());
        }
        let class = classify_row(&partials, config);
        rows.push(SzegoRow {
            row: k,
            partials,
            class,
        });
    }
    let classification = if rows.iter().any(|r| r.class == SzegoClass::Degenerate) {
        SzegoClass::Degenerate
    } else if rows.iter().all(|r| r.class == SzegoClass::Szego) {
        SzegoClass::Szego
    } else {
        SzegoClass::Inconclusive
    };
    SzegoReport {
        rows,
        classification,
    }
}

fn classify_row<R: RealField>(partials: &[R], config: &SzegoConfig) -> SzegoClass {
    let last = partials.last().expect("partials never empty").to_f64();
    if last < config.value_tol {
        return SzegoClass::Degenerate;
    }
    let window = config.plateau_window.min(partials.len() - 1);
    let anchor = partials[partials.len() - 1 - window].to_f64();
    // Partials are nonincreasing, so anchor >= last > 0.
    let drop = (anchor - last) / anchor;
    if drop < config.plateau_tol {
        SzegoClass::Szego
    } else {
        SzegoClass::Inconclusive
    }
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

    fn hilbert_rational(m: usize) -> MomentKernel<BigRational> {
        MomentKernel::from_fn(m, |k, j| rat(1, (k + j + 1) as i64))
    }

    #[test]
    fn get_conjugates_below_diagonal() {
        let k = MomentKernel::from_fn(2, |k, j| C64::new((k + j) as f64, (j - k) as f64));
        assert_eq!(k.get(0, 1), C64::new(1.0, 1.0));
        assert_eq!(k.get(1, 0), C64::new(1.0, -1.0));
    }

    #[test]
    fn from_entries_rejects_bad_input() {
        let dup = MomentKernel::from_entries(2, vec![(0, 1, 1.0.into()), (0, 1, C64::from(2.0))]);
        assert!(matches!(dup, Err(Error::DuplicateEntry { k: 0, j: 1 })));
        let low = MomentKernel::<C64>::from_entries(2, vec![(1, 0, C64::from(1.0))]);
        assert!(matches!(low, Err(Error::LowerTriangleEntry { .. })));
        let range = MomentKernel::<C64>::from_entries(2, vec![(0, 2, C64::from(1.0))]);
        assert!(matches!(range, Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn validation_flags_indefinite_two_by_two() {
        // Hand check: D_{0,1} = 1*1 - 2*2 = -3.
        let k = MomentKernel::from_entries(
            2,
            vec![(0, 0, rat(1, 1)), (1, 1, rat(1, 1)), (0, 1, rat(2, 1))],
        )
        .unwrap();
        let report = k.validate();
        assert!(report.diag_violations.is_empty());
        let first = report.first_nonpositive.unwrap();
        assert_eq!(first.upto, 1);
        assert_eq!(first.det, rat(-3, 1));
    }

    #[test]
    fn validation_flags_bad_diagonal() {
        let k = MomentKernel::from_entries(2, vec![(0, 0, rat(1, 1)), (1, 1, rat(0, 1))]).unwrap();
        let report = k.validate();
        assert_eq!(report.diag_violations, vec![1]);
    }

    #[test]
    fn hilbert_section_determinants_are_exact() {
        // Hand values: D_{0,1} = 1/12, D_{0,2} = 1/2160, D_{1,2} = 1/240.
        let k = hilbert_rational(3);
        assert_eq!(k.determinant(0, 1).unwrap(), rat(1, 12));
        assert_eq!(k.determinant(0, 2).unwrap(), rat(1, 2160));
        assert_eq!(k.determinant(1, 2).unwrap(), rat(1, 240));
        assert_eq!(k.determinant(2, 2).unwrap(), rat(1, 5));
    }

    #[test]
    fn determinant_table_matches_direct_determinants() {
        let k = hilbert_rational(5);
        let table = DeterminantTable::compute(&k).unwrap();
        for r in 0..5 {
            for q in r..5 {
                assert_eq!(table.get(r, q), &k.determinant(r, q).unwrap());
            }
        }
    }

    #[test]
    fn determinant_table_rejects_indefinite_kernel() {
        let k = MomentKernel::from_entries(
            2,
            vec![(0, 0, rat(1, 1)), (1, 1, rat(1, 1)), (0, 1, rat(2, 1))],
        )
        .unwrap();
        assert!(matches!(
            DeterminantTable::compute(&k),
            Err(Error::NotStrictlyPositive { r: 0, q: 1 })
        ));
    }

    #[test]
    fn zero_field_classifies_as_szego() {
        let field =
            GammaField::<C64>::from_fn(6, |_| 1.0, |_, _| C64::from(0.0)).unwrap();
        let report = szego_class_report(&field, &SzegoConfig::default());
        assert_eq!(report.classification, SzegoClass::Szego);
        for row in &report.rows {
            assert_eq!(row.class, SzegoClass::Szego);
            assert!(row.partials.iter().all(|p| *p == 1.0));
        }
    }
}
