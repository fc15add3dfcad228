//! Parameter fields: the bijection between strictly positive moment kernels
//! and families of unit-disk parameters `γ_{k,j}` with complementary
//! `d_{k,j} = √(1−|γ_{k,j}|²)`.
//!
//! Moments are reconstructed as `s_{k,j} = √s_{k,k}·[U_{k,j}]_{0,0}·√s_{j,j}`
//! where `U_{k,j}` is a product of planar rotations, one per pair
//! `k ≤ r < c ≤ j` in lexicographic order; the rotation for `(r, c)` acts on
//! coordinates `c−r−1, c−r` with the block `[[γ, d], [d, −γ̄]]`.
//!
//! Extraction inverts the map level by level: orthonormalize each shifted
//! section, read the constant terms of the orthonormal polynomials, and
//! rescale them with leading-coefficient (Cholesky pivot) products.

use crate::error::{Error, Result};
use crate::idx;
use crate::kernel::MomentKernel;
use crate::linalg::{self, Mat};
use crate::scalar::{RealField, Scalar};
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Schur-type parameters of a strictly positive kernel on `0..size`:
/// the diagonal `s_{k,k} > 0` plus one `γ_{k,j}` in the open unit disk per
/// pair `k < j`. The complementary `d_{k,j}` are computed and cached at
/// construction, so building a field in the rational backend requires every
/// `1 − |γ|²` to be a perfect square.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaField<T: Scalar> {
    size: usize,
    diag: Vec<T::Real>,
    gamma: Vec<T>,
    dee: Vec<T::Real>,
}

impl<T: Scalar> GammaField<T> {
    /// Builds a field from the diagonal and the dense strict upper triangle
    /// of parameters in row-major order.
    pub fn new(diag: Vec<T::Real>, gamma: Vec<T>) -> Result<Self> {
        let size = diag.len();
        if gamma.len() != size * size.saturating_sub(1) / 2 {
            return Err(Error::SizeMismatch {
                left: gamma.len(),
                right: size * size.saturating_sub(1) / 2,
            });
        }
        for (k, s) in diag.iter().enumerate() {
            if !s.is_positive() {
                return Err(Error::BadDiagonal { index: k });
            }
        }
        let mut dee = Vec::with_capacity(gamma.len());
        let mut at = 0;
        for k in 0..size {
            for j in (k + 1)..size {
                let mag = gamma[at].abs_sqr();
                let comp = T::Real::one() - mag;
                if !comp.is_positive() {
                    return Err(Error::ParameterOutOfDisk { k, j });
                }
                dee.push(comp.sqrt_checked()?);
                at += 1;
            }
        }
        Ok(GammaField {
            size,
            diag,
            gamma,
            dee,
        })
    }

    /// Builds a field from functions for the diagonal and the parameters.
    pub fn from_fn(
        size: usize,
        mut diag: impl FnMut(usize) -> T::Real,
        mut gamma: impl FnMut(usize, usize) -> T,
    ) -> Result<Self> {
        let d = (0..size).map(&mut diag).collect();
        let mut g = Vec::with_capacity(size * size.saturating_sub(1) / 2);
        for k in 0..size {
            for j in (k + 1)..size {
                g.push(gamma(k, j));
            }
        }
        GammaField::new(d, g)
    }

    /// Builds a field from sparse parameter entries; missing pairs get
    /// `γ = 0` (so `d = 1`). Rejects duplicates and out-of-range pairs.
    pub fn from_entries(
        diag: Vec<T::Real>,
        entries: impl IntoIterator<Item = (usize, usize, T)>,
    ) -> Result<Self> {
        let size = diag.len();
        let mut gamma = vec![T::zero(); size * size.saturating_sub(1) / 2];
        let mut seen = vec![false; gamma.len()];
        for (k, j, v) in entries {
            if k >= j {
                return Err(Error::LowerTriangleEntry { k, j });
            }
            if j >= size {
                return Err(Error::IndexOutOfRange { k, j, size });
            }
            let at = idx::strict_upper(k, j, size);
            if seen[at] {
                return Err(Error::DuplicateEntry { k, j });
            }
            seen[at] = true;
            gamma[at] = v;
        }
        GammaField::new(diag, gamma)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn diag(&self, k: usize) -> &T::Real {
        &self.diag[k]
    }

    /// `γ_{k,j}` for `k < j`.
    pub fn gamma(&self, k: usize, j: usize) -> &T {
        assert!(k < j && j < self.size, "parameter index out of range");
        &self.gamma[idx::strict_upper(k, j, self.size)]
    }

    /// `d_{k,j} = √(1−|γ_{k,j}|²)` for `k < j`.
    pub fn dee(&self, k: usize, j: usize) -> &T::Real {
        assert!(k < j && j < self.size, "parameter index out of range");
        &self.dee[idx::strict_upper(k, j, self.size)]
    }

    /// `√s_{k,k}`; fails in the rational backend when the diagonal entry is
    /// not a perfect square.
    pub fn sqrt_diag(&self, k: usize) -> Result<T::Real> {
        self.diag[k].sqrt_checked()
    }

    /// Iterates `(k, j, γ_{k,j})` over the strict upper triangle.
    pub fn gamma_entries(&self) -> impl Iterator<Item = (usize, usize, &T)> {
        let size = self.size;
        (0..size)
            .flat_map(move |k| ((k + 1)..size).map(move |j| (k, j)))
            .zip(self.gamma.iter())
            .map(|((k, j), v)| (k, j, v))
    }

    /// The product of rotation factors for the pair `(k, j)` as a dense
    /// `(j−k+1)`-square unitary matrix, factors in lexicographic pair order.
    pub fn rotation_product(&self, k: usize, j: usize) -> Vec<Vec<T>> {
        assert!(k < j && j < self.size, "rotation index out of range");
        let side = j - k + 1;
        let mut u = Mat::<T>::identity(side);
        for r in k..j {
            for c in (r + 1)..=j {
                let p = c - r; // rotation acts on coordinates p-1, p
                let g = self.gamma(r, c).clone();
                let d = T::from_real(self.dee(r, c).clone());
                // Right-multiply u by the embedded rotation: only columns
                // p-1 and p change.
                for row in 0..side {
                    let a = u.get(row, p - 1).clone();
                    let b = u.get(row, p).clone();
                    u.set(row, p - 1, a.clone() * g.clone() + b.clone() * d.clone());
                    u.set(row, p, a * d.clone() - b * g.conj());
                }
            }
        }
        (0..side)
            .map(|r| (0..side).map(|c| u.get(r, c).clone()).collect())
            .collect()
    }

    /// One reconstructed moment `s_{k,j}`, `k ≤ j`. Propagates the first
    /// basis row through the rotation factors, so the cost is linear in the
    /// number of factors instead of cubic.
    ///
    /// The propagation is compensated: every rotation step runs through
    /// error-free transforms on the real components, carrying the rounding
    /// residue in a parallel row that is folded back once at the end. Since
    /// the rotations preserve norms the residue row never amplifies, and the
    /// reconstructed entry is accurate to a few ulps regardless of the gap;
    /// in exact backends every residue is identically zero and the result
    /// matches the plain recurrence.
    pub fn reconstruct_entry(&self, k: usize, j: usize) -> Result<T> {
        assert!(k <= j && j < self.size, "index outside truncation");
        if k == j {
            return Ok(T::from_real(self.diag[k].clone()));
        }
        let side = j - k + 1;
        let mut vr = vec![T::Real::zero(); side];
        let mut vi = vec![T::Real::zero(); side];
        let mut er = vec![T::Real::zero(); side];
        let mut ei = vec![T::Real::zero(); side];
        vr[0] = T::Real::one();
        for r in k..j {
            for c in (r + 1)..=j {
                let p = c - r;
                let g = self.gamma(r, c);
                if g.is_zero() {
                    // `d = 1` exactly, so the rotation is a plain swap.
                    vr.swap(p - 1, p);
                    vi.swap(p - 1, p);
                    er.swap(p - 1, p);
                    ei.swap(p - 1, p);
                    continue;
                }
                let (ar, ai) = (vr[p - 1].clone(), vi[p - 1].clone());
                let (br, bi) = (vr[p].clone(), vi[p].clone());
                let (xr, xi) = (er[p - 1].clone(), ei[p - 1].clone());
                let (yr, yi) = (er[p].clone(), ei[p].clone());
                if ar.is_zero()
                    && ai.is_zero()
                    && br.is_zero()
                    && bi.is_zero()
                    && xr.is_zero()
                    && xi.is_zero()
                    && yr.is_zero()
                    && yi.is_zero()
                {
                    continue;
                }
                let (gr, gi) = (g.re(), g.im());
                let d = self.dee(r, c).clone();
                // New values: a' = a·γ + b·d, b' = a·d − b·conj(γ), spelled
                // out on real components with compensated dot products.
                let (nr1, le1) = comp_dot3([
                    (ar.clone(), gr.clone()),
                    (ai.clone(), -gi.clone()),
                    (br.clone(), d.clone()),
                ]);
                let (ni1, le2) = comp_dot3([
                    (ar.clone(), gi.clone()),
                    (ai.clone(), gr.clone()),
                    (bi.clone(), d.clone()),
                ]);
                let (nr2, le3) = comp_dot3([
                    (ar.clone(), d.clone()),
                    (br.clone(), -gr.clone()),
                    (bi.clone(), -gi.clone()),
                ]);
                let (ni2, le4) = comp_dot3([
                    (ai.clone(), d.clone()),
                    (bi.clone(), -gr.clone()),
                    (br.clone(), gi.clone()),
                ]);
                // The carried residue goes through the same rotation (plain
                // arithmetic: its own rounding is second order), plus the
                // fresh local residues.
                er[p - 1] =
                    xr.clone() * gr.clone() - xi.clone() * gi.clone() + yr.clone() * d.clone()
                        + le1;
                ei[p - 1] =
                    xr.clone() * gi.clone() + xi.clone() * gr.clone() + yi.clone() * d.clone()
                        + le2;
                er[p] = xr * d.clone() - yr.clone() * gr.clone() - yi.clone() * gi.clone() + le3;
                ei[p] = xi * d - yi * gr + yr * gi + le4;
                vr[p - 1] = nr1;
                vi[p - 1] = ni1;
                vr[p] = nr2;
                vi[p] = ni2;
            }
        }
        // Compensated final scaling by √s_{k,k}·√s_{j,j}: the product and
        // the residue folds round exactly once per component.
        let (lr, lre) = two_prod(self.sqrt_diag(k)?, self.sqrt_diag(j)?);
        let fold = |v: T::Real, e: T::Real| -> T::Real {
            let (p, pe) = two_prod(v.clone(), lr.clone());
            p + (pe + e * lr.clone() + v * lre.clone())
        };
        T::from_re_im(
            fold(vr[0].clone(), er[0].clone()),
            fold(vi[0].clone(), ei[0].clone()),
        )
    }

    /// Scale by `m ≤ size`: the reconstructed kernel over indices `0..m`.
    pub fn reconstruct_moments(&self, m: usize) -> Result<MomentKernel<T>> {
        if m > self.size {
            return Err(Error::NotEnoughData {
                what: "reconstruction",
                needed: m,
                got: self.size,
            });
        }
        let mut entries = Vec::with_capacity(m * (m + 1) / 2);
        for k in 0..m {
            for j in k..m {
                entries.push((k, j, self.reconstruct_entry(k, j)?));
            }
        }
        let mut it = entries.into_iter();
        Ok(MomentKernel::from_fn(m, |_, _| {
            it.next().expect("entry count matches").2
        }))
    }
}

/// Error-free addition: returns `(fl(a+b), residue)` with
/// `a + b = fl(a+b) + residue` exactly in IEEE arithmetic; in exact
/// backends the residue is identically zero.
fn two_sum<R: RealField>(a: R, b: R) -> (R, R) {
    let s = a.clone() + b.clone();
    let z = s.clone() - a.clone();
    let e = (a - (s.clone() - z.clone())) + (b - z);
    (s, e)
}

/// Dekker product transform: `(fl(a·b), residue)` with
/// `a·b = fl(a·b) + residue`. The splitting constant `2^27 + 1` targets the
/// double-precision mantissa; exact backends yield a zero residue for any
/// constant.
fn two_prod<R: RealField>(a: R, b: R) -> (R, R) {
    let p = a.clone() * b.clone();
    let c = R::from_i64((1 << 27) + 1);
    let split = |x: R| {
        let t = c.clone() * x.clone();
        let hi = t.clone() - (t - x.clone());
        let lo = x - hi.clone();
        (hi, lo)
    };
    let (ah, al) = split(a);
    let (bh, bl) = split(b);
    let e = ((ah.clone() * bh.clone() - p.clone()) + ah * bl.clone() + al.clone() * bh) + al * bl;
    (p, e)
}

/// Compensated three-term dot product `Σ xᵢ·yᵢ`: the returned value plus
/// residue is accurate to second order in the working precision.
fn comp_dot3<R: RealField>(terms: [(R, R); 3]) -> (R, R) {
    let [(x1, y1), (x2, y2), (x3, y3)] = terms;
    let (p1, e1) = two_prod(x1, y1);
    let (p2, e2) = two_prod(x2, y2);
    let (p3, e3) = two_prod(x3, y3);
    let (s12, e12) = two_sum(p1, p2);
    let (s, e123) = two_sum(s12, p3);
    (s, e1 + e2 + e3 + e12 + e123)
}

/// Cholesky data of one shifted section: the factor of the *conjugated*
/// section (so that the inverse rows are the orthonormal polynomial
/// coefficients) and its inverse.
struct LevelCholesky<T: Scalar> {
    /// Diagonal of the Cholesky factor; `prod_{i<=n} diag[i] = √D_{l,l+n}`.
    diag: Vec<T::Real>,
    /// Inverse factor: row `n` holds the coefficients of `φ_n(·, l)`.
    inverse: Mat<T>,
}

fn level_cholesky<T: Scalar>(kernel: &MomentKernel<T>, level: usize) -> Result<LevelCholesky<T>> {
    let side = kernel.size() - level;
    // Orthonormality reads ⟨φ_n, φ_m⟩ = Σ a_{n,k} conj(a_{m,i}) s_{i,k},
    // i.e. A·conj(S)·Aᴴ = I, hence the factorization of conj(S).
    let section = Mat::from_fn(side, side, |i, j| kernel.get(level + i, level + j).conj());
    let l = linalg::cholesky(&section, level)?;
    let diag = (0..side).map(|i| l.get(i, i).re()).collect();
    let inverse = linalg::lower_tri_inverse(&l)?;
    Ok(LevelCholesky { diag, inverse })
}

/// Recovers the parameter field of a strictly positive kernel.
///
/// For each level `l` the conjugated shifted section is Cholesky-factored;
/// row `n` of the inverse factor gives the orthonormal polynomial
/// `φ_n(·, l)`, and
/// `γ_{l,l+n} = −φ_n(0,l) · ∏_{i=0..n} L^l_{ii} / ∏_{i=0..n−1} L^{l+1}_{ii}`.
///
/// In the rational backend this succeeds only when every Cholesky pivot is a
/// perfect square; use [`extract_gamma_squares`] for general rational
/// kernels.
pub fn extract_gamma<T: Scalar>(kernel: &MomentKernel<T>) -> Result<GammaField<T>> {
    let m = kernel.size();
    let mut levels = Vec::with_capacity(m);
    for l in 0..m {
        levels.push(level_cholesky(kernel, l)?);
    }
    let diag: Vec<T::Real> = (0..m).map(|k| kernel.get(k, k).re()).collect();
    let mut gamma = Vec::with_capacity(m * m.saturating_sub(1) / 2);
    for l in 0..m {
        for j in (l + 1)..m {
            let n = j - l;
            let phi0 = levels[l].inverse.get(n, 0).clone();
            let mut ratio = T::Real::one();
            for i in 0..=n {
                ratio = ratio * levels[l].diag[i].clone();
            }
            for i in 0..n {
                ratio = ratio / levels[l + 1].diag[i].clone();
            }
            let g = -(phi0.scale(&ratio));
            if g.abs_sqr() >= T::Real::one() {
                return Err(Error::ParameterOutOfDisk { k: l, j });
            }
            gamma.push(g);
        }
    }
    let mut field = GammaField::new(diag, gamma)?;
    refine_gamma(&mut field, kernel)?;
    Ok(field)
}

/// One Newton pass over the parameters in increasing span order.
///
/// A reconstructed moment is affine in its own full-span parameter: exactly
/// one route of the expansion contains `γ_{k,j}`, giving
/// `s_{k,j} = (shorter-span terms) + √(s_{k,k}·s_{j,j})·∏_{k<i<j} d_{k,i}·d_{i,j}·γ_{k,j}`.
/// Dividing the residual against the input kernel by that coefficient is
/// therefore an exact correction once every shorter span is settled, which
/// the span-ordered sweep guarantees. This drives the Cholesky-based
/// estimates down to the conditioning floor of the kernel entries; on exact
/// backends every residual is zero and the field is returned unchanged.
fn refine_gamma<T: Scalar>(field: &mut GammaField<T>, kernel: &MomentKernel<T>) -> Result<()> {
    let m = field.size();
    for span in 1..m {
        for k in 0..(m - span) {
            let j = k + span;
            let residual = kernel.get(k, j) - field.reconstruct_entry(k, j)?;
            if residual.is_zero() {
                continue;
            }
            let mut coeff = field.sqrt_diag(k)? * field.sqrt_diag(j)?;
            for i in (k + 1)..j {
                coeff = coeff * field.dee(k, i).clone() * field.dee(i, j).clone();
            }
            let corrected =
                field.gamma(k, j).clone() + residual.scale(&(T::Real::one() / coeff));
            let comp = T::Real::one() - corrected.abs_sqr();
            if !comp.is_positive() {
                return Err(Error::ParameterOutOfDisk { k, j });
            }
            let at = idx::strict_upper(k, j, m);
            field.dee[at] = comp.sqrt_checked()?;
            field.gamma[at] = corrected;
        }
    }
    Ok(())
}

/// Exact signed squares of the parameters of a real rational kernel:
/// `γ_{k,j} = sign_{k,j} · √(gamma_sq_{k,j})`. Surd-valued parameters are
/// compared through these squares; no square roots are ever taken.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaSquares {
    size: usize,
    diag: Vec<BigRational>,
    sign: Vec<i8>,
    gamma_sq: Vec<BigRational>,
}

impl GammaSquares {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn diag(&self, k: usize) -> &BigRational {
        &self.diag[k]
    }

    /// Sign of `γ_{k,j}`: −1, 0, or +1.
    pub fn sign(&self, k: usize, j: usize) -> i8 {
        self.sign[idx::strict_upper(k, j, self.size)]
    }

    /// `γ_{k,j}²`, exact.
    pub fn gamma_sq(&self, k: usize, j: usize) -> &BigRational {
        &self.gamma_sq[idx::strict_upper(k, j, self.size)]
    }

    /// `d_{k,j}² = 1 − γ_{k,j}²`, exact.
    pub fn dee_sq(&self, k: usize, j: usize) -> BigRational {
        BigRational::one() - self.gamma_sq(k, j)
    }

    /// Renders the field in floating point: `γ = sign·√(γ²)`.
    pub fn to_float_field(&self) -> Result<GammaField<num_complex::Complex<f64>>> {
        let diag = self.diag.iter().map(|d| d.to_f64()).collect();
        let mut gamma = Vec::with_capacity(self.gamma_sq.len());
        for (s, gsq) in self.sign.iter().zip(self.gamma_sq.iter()) {
            let v = (*s as f64) * gsq.to_f64().sqrt();
            gamma.push(num_complex::Complex::new(v, 0.0));
        }
        GammaField::new(diag, gamma)
    }
}

/// Exact extraction for real rational kernels via square-root-free LDL:
/// with monic orthogonal polynomials `ψ_n` (rows of the inverse unit-lower
/// factor) and pivot products `D_{l,l+n} = ∏ pivots`,
/// `γ_{l,l+n}² = ψ_n(0,l)² · D_{l,l+n−1} / D_{l+1,l+n}` and the sign of
/// `γ_{l,l+n}` is `−sign(ψ_n(0,l))`.
pub fn extract_gamma_squares(kernel: &MomentKernel<BigRational>) -> Result<GammaSquares> {
    let m = kernel.size();
    let mut pivots: Vec<Vec<BigRational>> = Vec::with_capacity(m);
    let mut monic_consts: Vec<Vec<BigRational>> = Vec::with_capacity(m);
    for l in 0..m {
        let side = m - l;
        let section = Mat::from_fn(side, side, |i, j| kernel.get(l + i, l + j));
        let (lower, d) = linalg::ldl_hermitian(&section, l)?;
        let inv = linalg::lower_tri_inverse(&lower)?;
        monic_consts.push((0..side).map(|n| inv.get(n, 0).clone()).collect());
        pivots.push(d);
    }
    let diag: Vec<BigRational> = (0..m).map(|k| kernel.get(k, k)).collect();
    let mut sign = Vec::with_capacity(m * m.saturating_sub(1) / 2);
    let mut gamma_sq = Vec::with_capacity(sign.capacity());
    for l in 0..m {
        for j in (l + 1)..m {
            let n = j - l;
            let psi0 = &monic_consts[l][n];
            // D_{l,l+n-1} / D_{l+1,l+n} as pivot products.
            let mut ratio = BigRational::one();
            for i in 0..n {
                ratio = ratio * pivots[l][i].clone();
            }
            for i in 0..n {
                ratio = ratio / pivots[l + 1][i].clone();
            }
            let gsq = psi0 * psi0 * ratio;
            if gsq >= BigRational::one() {
                return Err(Error::ParameterOutOfDisk { k: l, j });
            }
            sign.push(if psi0.is_zero() {
                0
            } else if psi0 < &BigRational::zero() {
                1
            } else {
                -1
            });
            gamma_sq.push(gsq);
        }
    }
    Ok(GammaSquares {
        size: m,
        diag,
        sign,
        gamma_sq,
    })
}
