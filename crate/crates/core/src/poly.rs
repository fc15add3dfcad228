//! The two-parameter orthonormal polynomial family `φ_n(·, l)` and its
//! reversed companion `φ_n^♯(·, l)`, built level by level from a parameter
//! field. Degree `n` at level `l` consumes degree `n−1` at levels `l` and
//! `l+1`, so the table is a pyramid: the deeper the degree, the fewer levels
//! remain available.
//!
//! Coefficient vectors are stored in ascending powers; `p[k]` multiplies
//! `X^k`.

use crate::error::{Error, Result};
use crate::kernel::MomentKernel;
use crate::linalg::{self, Mat};
use crate::scalar::{RealField, Scalar};
use crate::schur::GammaField;
use num_traits::{One, Zero};

/// Dense pyramid of polynomial coefficients.
///
/// `phi(n, l)` is defined for `n ≤ max_degree` and
/// `l ≤ max_level + max_degree − n`: the construction keeps every level the
/// recurrence visits, not just the requested `max_level`, because callers
/// such as parameter recovery need the extra columns.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyTable<T: Scalar> {
    max_degree: usize,
    max_level: usize,
    /// `a[n][l][k]` = coefficient of `X^k` in `φ_n(·, l)`.
    a: Vec<Vec<Vec<T>>>,
    /// `b[n][l][k]` = coefficient of `X^k` in `φ_n^♯(·, l)`.
    b: Vec<Vec<Vec<T>>>,
}

impl<T: Scalar> PolyTable<T> {
    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn max_level(&self) -> usize {
        self.max_level
    }

    /// Number of levels stored for degree `n` (levels `0..capacity`).
    pub fn level_capacity(&self, n: usize) -> usize {
        self.a.get(n).map_or(0, Vec::len)
    }

    /// Coefficients of `φ_n(·, l)`, length `n+1`.
    pub fn phi(&self, n: usize, l: usize) -> &[T] {
        &self.a[n][l]
    }

    /// Coefficients of `φ_n^♯(·, l)`, length `n+1`.
    pub fn phi_sharp(&self, n: usize, l: usize) -> &[T] {
        &self.b[n][l]
    }

    /// Leading coefficient `k_n^l = a_{n,n}^l`, real and positive for tables
    /// built from valid parameter fields.
    pub fn leading(&self, n: usize, l: usize) -> T::Real {
        self.a[n][l][n].re()
    }
}

/// Evaluates a coefficient vector at `x` by Horner's rule.
pub fn poly_eval<T: Scalar>(p: &[T], x: &T) -> T {
    let mut acc = T::zero();
    for c in p.iter().rev() {
        acc = acc * x.clone() + c.clone();
    }
    acc
}

/// Builds the polynomial pyramid from a parameter field by the two-term
/// recurrence
///
/// ```text
/// φ_0(X,l) = φ_0^♯(X,l) = s_{l,l}^{−1/2}
/// φ_n(X,l)   = (X·φ_{n−1}(X,l+1) − γ_{l,n+l}·φ_{n−1}^♯(X,l)) / d_{l,n+l}
/// φ_n^♯(X,l) = (−γ̄_{l,n+l}·X·φ_{n−1}(X,l+1) + φ_{n−1}^♯(X,l)) / d_{l,n+l}
/// ```
///
/// The field must cover indices up to `max_degree + max_level` because the
/// recurrence at level `l` reaches up to level `l + n`.
pub fn build_polys<T: Scalar>(
    g: &GammaField<T>,
    max_degree: usize,
    max_level: usize,
) -> Result<PolyTable<T>> {
    let top = max_degree + max_level;
    if g.size() < top + 1 {
        return Err(Error::NotEnoughData {
            what: "parameter field",
            needed: top + 1,
            got: g.size(),
        });
    }
    let mut a: Vec<Vec<Vec<T>>> = Vec::with_capacity(max_degree + 1);
    let mut b: Vec<Vec<Vec<T>>> = Vec::with_capacity(max_degree + 1);
    let mut degree_zero = Vec::with_capacity(top + 1);
    for l in 0..=top {
        let inv_sqrt = T::Real::one() / g.sqrt_diag(l)?;
        degree_zero.push(vec![T::from_real(inv_sqrt)]);
    }
    a.push(degree_zero.clone());
    b.push(degree_zero);
    for n in 1..=max_degree {
        let cap = top - n;
        let mut an = Vec::with_capacity(cap + 1);
        let mut bn = Vec::with_capacity(cap + 1);
        for l in 0..=cap {
            let gam = g.gamma(l, n + l).clone();
            let inv_d = T::Real::one() / g.dee(l, n + l).clone();
            let prev = &a[n - 1][l + 1];
            let prev_sharp = &b[n - 1][l];
            let mut phi = Vec::with_capacity(n + 1);
            let mut sharp = Vec::with_capacity(n + 1);
            for k in 0..=n {
                let shifted = if k >= 1 { prev[k - 1].clone() } else { T::zero() };
                let tail = if k < n { prev_sharp[k].clone() } else { T::zero() };
                phi.push((shifted.clone() - gam.clone() * tail.clone()).scale(&inv_d));
                sharp.push((tail - gam.conj() * shifted).scale(&inv_d));
            }
            an.push(phi);
            bn.push(sharp);
        }
        a.push(an);
        b.push(bn);
    }
    Ok(PolyTable {
        max_degree,
        max_level,
        a,
        b,
    })
}

/// Orthonormal polynomial of degree `n` for the level-`l` shifted section,
/// computed directly from the kernel by triangular factorization (the
/// numerically stable form of the bordered-determinant construction).
///
/// Row `n` of the inverse Cholesky factor of the conjugated section carries
/// exactly the coefficients that are orthonormal against the section with a
/// positive leading coefficient.
pub fn poly_by_determinant<T: Scalar>(
    kernel: &MomentKernel<T>,
    n: usize,
    l: usize,
) -> Result<Vec<T>> {
    if l + n >= kernel.size() {
        return Err(Error::NotEnoughData {
            what: "kernel section",
            needed: l + n + 1,
            got: kernel.size(),
        });
    }
    let side = n + 1;
    let section = Mat::from_fn(side, side, |i, j| kernel.get(l + i, l + j).conj());
    let chol = linalg::cholesky(&section, l)?;
    let inv = linalg::lower_tri_inverse(&chol)?;
    Ok((0..side).map(|k| inv.get(n, k).clone()).collect())
}

/// Literal bordered-determinant construction: the coefficient of `X^k` in
/// `φ_n(·, l)` is the signed minor of the last row of
///
/// ```text
/// | s_{l,l}     s_{l,l+1}   …  s_{l,l+n}   |
/// | …                                      |
/// | s_{l+n−1,l} …              s_{l+n−1,l+n} |
/// | 1           X           …  X^n         |
/// ```
///
/// divided by `√(D_{l,l+n−1}·D_{l,l+n})`. Exact in the rational backend when
/// both section determinants are perfect squares; intended for small `n`
/// (the float backend should prefer [`poly_by_determinant`]).
pub fn poly_by_bordered_determinant<T: Scalar>(
    kernel: &MomentKernel<T>,
    n: usize,
    l: usize,
) -> Result<Vec<T>> {
    if l + n >= kernel.size() {
        return Err(Error::NotEnoughData {
            what: "kernel section",
            needed: l + n + 1,
            got: kernel.size(),
        });
    }
    let d_prev = if n == 0 {
        T::Real::one()
    } else {
        kernel.determinant(l, l + n - 1)?
    };
    let d_curr = kernel.determinant(l, l + n)?;
    let norm = (d_prev * d_curr).sqrt_checked()?;
    let inv_norm = T::Real::one() / norm;
    let mut coeffs = Vec::with_capacity(n + 1);
    for k in 0..=n {
        // Minor over rows 0..n−1 and all columns except k.
        let minor = Mat::from_fn(n, n, |i, j| {
            let col = if j < k { j } else { j + 1 };
            kernel.get(l + i, l + col)
        });
        let mut c = linalg::determinant(&minor).scale(&inv_norm);
        if (n + k) % 2 == 1 {
            c = -c;
        }
        coeffs.push(c);
    }
    Ok(coeffs)
}

/// Iterated formal derivative. The result of differentiating past the degree
/// is the zero polynomial, represented as a single zero coefficient.
pub fn derivative<T: Scalar>(p: &[T], order: usize) -> Vec<T> {
    let mut cur: Vec<T> = p.to_vec();
    for _ in 0..order {
        if cur.len() <= 1 {
            return vec![T::zero()];
        }
        cur = cur
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.clone() * T::from_i64(k as i64))
            .collect();
    }
    if cur.is_empty() {
        vec![T::zero()]
    } else {
        cur
    }
}

/// Closed form for the constant term of the reversed polynomial:
/// `φ_n^♯(0, l) = s_{l,l}^{−1/2} · ∏_{p=1}^{n} 1/d_{l,p+l}`.
pub fn phi_sharp_at_zero<T: Scalar>(g: &GammaField<T>, n: usize, l: usize) -> Result<T::Real> {
    let mut v = T::Real::one() / g.sqrt_diag(l)?;
    for p in 1..=n {
        v = v / g.dee(l, p + l).clone();
    }
    Ok(v)
}

/// Recovers the parameter field from an orthonormal polynomial table and the
/// kernel diagonal:
///
/// ```text
/// γ_{l,n+l} = −√(s_{l,l}/s_{l+1,l+1}) · φ_n(0,l) ·
///             (k_1^{l+1} ⋯ k_{n−1}^{l+1}) / (k_1^{l} ⋯ k_n^{l})
/// ```
///
/// where `k_p^l` is the leading coefficient of `φ_p(·, l)`. Inverse of
/// [`build_polys`] composed with the same diagonal.
pub fn recover_gamma<T: Scalar>(table: &PolyTable<T>, diag: Vec<T::Real>) -> Result<GammaField<T>> {
    let m = diag.len();
    for n in 1..m {
        let cap = table.level_capacity(n);
        if cap < m - n {
            return Err(Error::NotEnoughData {
                what: "polynomial table levels",
                needed: m - n,
                got: cap,
            });
        }
    }
    let sqrt_diag: Vec<T::Real> = diag
        .iter()
        .map(RealField::sqrt_checked)
        .collect::<Result<_>>()?;
    let mut gamma = Vec::with_capacity(m * m.saturating_sub(1) / 2);
    for l in 0..m {
        for j in (l + 1)..m {
            let n = j - l;
            let mut factor = sqrt_diag[l].clone() / sqrt_diag[l + 1].clone();
            for p in 1..n {
                factor = factor * table.leading(p, l + 1);
            }
            for p in 1..=n {
                let lead = table.leading(p, l);
                if lead == T::Real::zero() {
                    return Err(Error::InvalidArgument {
                        field: "polynomial table",
                        reason: format!("zero leading coefficient at degree {p}, level {l}"),
                    });
                }
                factor = factor / lead;
            }
            gamma.push(-(table.phi(n, l)[0].scale(&factor)));
        }
    }
    GammaField::new(diag, gamma)
}
