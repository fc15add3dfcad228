//! Canonical kernel families used as test vectors and demos: Toeplitz
//! kernels from a constant-along-diagonals parameter field, Hankel kernels
//! from real moment sequences, the three-term recurrence of the real line,
//! and the fully explicit Hilbert-matrix family with its closed-form
//! parameters (whose orthonormal polynomials are the shifted Legendre
//! family).

use crate::error::{Error, Result};
use crate::kernel::MomentKernel;
use crate::scalar::{RealField, Scalar};
use crate::schur::GammaField;
use num_complex::Complex;
use num_rational::BigRational;

/// Toeplitz model: one parameter per diagonal, `γ_{k,k+n} = α_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct ToeplitzSpec<T: Scalar> {
    /// Common diagonal value `s_{k,k} = s0 > 0`.
    pub s0: T::Real,
    /// `α_n` for `n = 1, 2, …`; shorter lists are padded with zeros.
    pub verblunsky: Vec<T>,
}

/// Parameter field with `γ_{k,k+n} = α_n` for every base index `k`.
pub fn toeplitz_field<T: Scalar>(spec: &ToeplitzSpec<T>, m: usize) -> Result<GammaField<T>> {
    GammaField::from_fn(
        m,
        |_| spec.s0.clone(),
        |k, j| {
            spec.verblunsky
                .get(j - k - 1)
                .cloned()
                .unwrap_or_else(T::zero)
        },
    )
}

/// Moment kernel of the Toeplitz field; satisfies
/// `K(n+k, m+k) = K(n, m)` inside the truncation.
pub fn toeplitz_kernel<T: Scalar>(spec: &ToeplitzSpec<T>, m: usize) -> Result<MomentKernel<T>> {
    toeplitz_field(spec, m)?.reconstruct_moments(m)
}

/// Hankel model: `s_{k,j} = m_{k+j}` for a real moment sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct HankelSpec<R> {
    /// Moments `m_0, m_1, …`; a kernel of size `M` needs `2M−1` of them.
    pub moments: Vec<R>,
}

/// Builds and positivity-checks the Hankel kernel of a moment sequence.
pub fn hankel_kernel<T: Scalar>(spec: &HankelSpec<T::Real>, m: usize) -> Result<MomentKernel<T>> {
    if spec.moments.len() < 2 * m.saturating_sub(1) + 1 {
        return Err(Error::NotEnoughData {
            what: "moment sequence",
            needed: 2 * m.saturating_sub(1) + 1,
            got: spec.moments.len(),
        });
    }
    let kernel = MomentKernel::from_fn(m, |k, j| T::from_real(spec.moments[k + j].clone()));
    let report = kernel.validate();
    if let Some(bad) = report.first_nonpositive {
        return Err(Error::NotStrictlyPositive { r: 0, q: bad.upto });
    }
    if let Some(&index) = report.diag_violations.first() {
        return Err(Error::BadDiagonal { index });
    }
    Ok(kernel)
}

/// Solves the real-line three-term recurrence
/// `x·φ_n = b_n·φ_{n+1} + a_n·φ_n + b_{n−1}·φ_{n−1}` with `φ_{−1} = 0`,
/// `φ_0 = 1`, returning coefficient vectors for degrees `0..=n_max`.
pub fn three_term_polys<R: RealField>(a: &[R], b: &[R], n_max: usize) -> Result<Vec<Vec<R>>> {
    if n_max > 0 && (a.len() < n_max || b.len() < n_max) {
        return Err(Error::NotEnoughData {
            what: "recurrence coefficients",
            needed: n_max,
            got: a.len().min(b.len()),
        });
    }
    let mut polys: Vec<Vec<R>> = vec![vec![R::one()]];
    for n in 0..n_max {
        if b[n] == R::zero() {
            return Err(Error::InvalidArgument {
                field: "three-term coefficient",
                reason: format!("b[{n}] must be nonzero"),
            });
        }
        let inv_b = R::one() / b[n].clone();
        let cur = polys[n].clone();
        let mut next = vec![R::zero(); n + 2];
        for (k, c) in cur.iter().enumerate() {
            next[k + 1] = next[k + 1].clone() + c.clone() * inv_b.clone();
            next[k] = next[k].clone() - a[n].clone() * c.clone() * inv_b.clone();
        }
        if n > 0 {
            for (k, c) in polys[n - 1].iter().enumerate() {
                next[k] = next[k].clone() - b[n - 1].clone() * c.clone() * inv_b.clone();
            }
        }
        polys.push(next);
    }
    Ok(polys)
}

/// Closed-form parameters of the Hilbert kernel `s_{k,j} = 1/(k+j+1)`:
/// `γ_{k,k+l} = (−1)^{l−1}·√((2k+1)(2k+2l+1))/(2k+l+1)` and
/// `d_{k,k+l} = l/(2k+l+1)`, for `l ≥ 1`.
pub fn hilbert_gamma(k: usize, l: usize) -> (f64, f64) {
    assert!(l >= 1, "gap must be at least 1");
    let (kf, lf) = (k as f64, l as f64);
    let sign = if l % 2 == 1 { 1.0 } else { -1.0 };
    let gamma = sign * ((2.0 * kf + 1.0) * (2.0 * kf + 2.0 * lf + 1.0)).sqrt()
        / (2.0 * kf + lf + 1.0);
    let dee = lf / (2.0 * kf + lf + 1.0);
    (gamma, dee)
}

/// Exact arithmetic form of [`hilbert_gamma`]: the sign of `γ`, the rational
/// square `γ²`, and the (rational) value of `d`. Satisfies `γ² + d² = 1`
/// exactly.
pub fn hilbert_gamma_squares(k: usize, l: usize) -> (i8, BigRational, BigRational) {
    assert!(l >= 1, "gap must be at least 1");
    let rat = |p: i64, q: i64| BigRational::new(p.into(), q.into());
    let (ki, li) = (k as i64, l as i64);
    let sign = if l % 2 == 1 { 1 } else { -1 };
    let denom = 2 * ki + li + 1;
    let gamma_sq = rat((2 * ki + 1) * (2 * ki + 2 * li + 1), denom * denom);
    let dee = rat(li, denom);
    (sign, gamma_sq, dee)
}

/// The Hilbert kernel `s_{k,j} = 1/(k+j+1)` in floating point.
pub fn hilbert_kernel_f64(m: usize) -> MomentKernel<Complex<f64>> {
    MomentKernel::from_fn(m, |k, j| Complex::new(1.0 / (k + j + 1) as f64, 0.0))
}

/// The Hilbert kernel in exact rational arithmetic.
pub fn hilbert_kernel_rational(m: usize) -> MomentKernel<BigRational> {
    MomentKernel::from_fn(m, |k, j| {
        BigRational::new(1.into(), ((k + j + 1) as i64).into())
    })
}

/// The Hilbert parameter field: diagonal `s_{k,k} = 1/(2k+1)` with the
/// closed-form `γ`.
pub fn hilbert_field(m: usize) -> Result<GammaField<Complex<f64>>> {
    GammaField::from_fn(
        m,
        |k| 1.0 / (2 * k + 1) as f64,
        |k, j| Complex::new(hilbert_gamma(k, j - k).0, 0.0),
    )
}

/// Canonical moments of the Lebesgue measure on `[0,1]`:
/// `p_{2k−1} = 1/2`, `p_{2k} = k/(2k+1)`; entry `t` of the result is
/// `p_{t+1}`.
pub fn canonical_moment_vector(n_max: usize) -> Vec<BigRational> {
    (1..=n_max)
        .map(|n| {
            if n % 2 == 1 {
                BigRational::new(1.into(), 2.into())
            } else {
                let k = (n / 2) as i64;
                BigRational::new(k.into(), (2 * k + 1).into())
            }
        })
        .collect()
}
