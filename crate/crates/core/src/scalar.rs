//! Scalar abstraction: every transform in this crate is generic over a
//! field of scalars with a conjugation and an ordered real subfield.
//!
//! Two backends are provided:
//!
//! * [`num_complex::Complex<f64>`] — the default floating-point backend
//!   (real part doubles as the real subfield);
//! * [`num_rational::BigRational`] — an exact real backend in which square
//!   roots either exist exactly (perfect rational squares) or fail with
//!   [`Error::InexactSqrt`]. Surd-valued quantities are handled by the
//!   callers through squared comparisons.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{Num, Signed, ToPrimitive};
use std::fmt::{Debug, Display};
use std::ops::Neg;

/// Ordered real field with checked square roots and exact small-integer
/// embeddings. `sqrt_checked` is total on nonnegative values for `f64` and
/// partial (perfect squares only) for `BigRational`.
pub trait RealField:
    Clone + Debug + Display + PartialEq + PartialOrd + Num + Neg<Output = Self> + 'static
{
    fn from_i64(v: i64) -> Self;

    /// Exact embedding of the fraction `p/q`; `q` must be nonzero.
    fn from_ratio(p: i64, q: i64) -> Self;

    /// Exact embedding of a finite `f64` (every finite double is a dyadic
    /// rational). Rejects NaN and infinities.
    fn from_f64_exact(v: f64) -> Result<Self>;

    /// Nearest-value conversion used for reports and rendering.
    fn to_f64(&self) -> f64;

    /// Square root, or an error when none exists in this field.
    fn sqrt_checked(&self) -> Result<Self>;

    fn abs(&self) -> Self;

    fn is_positive(&self) -> bool {
        *self > Self::zero()
    }
}

/// Field of scalars with conjugation over an ordered real subfield.
///
/// `conj`, `re`, `im`, and `abs_sqr` tie the scalar to its real subfield;
/// everything else is plain field arithmetic. Implementations must satisfy
/// `abs_sqr(z) = re(z)² + im(z)²` and `conj(conj(z)) = z`.
pub trait Scalar:
    Clone + Debug + Display + PartialEq + Num + Neg<Output = Self> + 'static
{
    type Real: RealField;

    fn conj(&self) -> Self;
    fn re(&self) -> Self::Real;
    fn im(&self) -> Self::Real;
    fn from_real(r: Self::Real) -> Self;

    /// Builds a scalar from real and imaginary parts; real-only backends
    /// reject nonzero imaginary parts.
    fn from_re_im(re: Self::Real, im: Self::Real) -> Result<Self>;

    /// `|z|²`, exact in the rational backend.
    fn abs_sqr(&self) -> Self::Real;

    fn from_i64(v: i64) -> Self {
        Self::from_real(Self::Real::from_i64(v))
    }

    fn from_ratio(p: i64, q: i64) -> Self {
        Self::from_real(Self::Real::from_ratio(p, q))
    }

    /// Scale by an element of the real subfield.
    fn scale(&self, r: &Self::Real) -> Self {
        self.clone() * Self::from_real(r.clone())
    }

    /// `(re, im)` rendered to `f64` for reports and serialization.
    fn to_f64_pair(&self) -> (f64, f64) {
        (self.re().to_f64(), self.im().to_f64())
    }

    /// `|z|` in `f64`, for diagnostics and pivot comparisons.
    fn abs_f64(&self) -> f64 {
        self.abs_sqr().to_f64().sqrt()
    }
}

impl RealField for f64 {
    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn from_ratio(p: i64, q: i64) -> Self {
        assert!(q != 0, "zero denominator");
        p as f64 / q as f64
    }

    fn from_f64_exact(v: f64) -> Result<Self> {
        if !v.is_finite() {
            return Err(Error::NotReal {
                value: format!("{v}"),
            });
        }
        Ok(v)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn sqrt_checked(&self) -> Result<Self> {
        if *self < 0.0 {
            return Err(Error::InexactSqrt {
                value: format!("{self}"),
            });
        }
        Ok(f64::sqrt(*self))
    }

    fn abs(&self) -> Self {
        f64::abs(*self)
    }
}

fn bigint_exact_sqrt(v: &BigInt) -> Option<BigInt> {
    if v.is_negative() {
        return None;
    }
    let root = v.sqrt();
    if &(&root * &root) == v {
        Some(root)
    } else {
        None
    }
}

impl RealField for BigRational {
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn from_ratio(p: i64, q: i64) -> Self {
        assert!(q != 0, "zero denominator");
        BigRational::new(BigInt::from(p), BigInt::from(q))
    }

    fn from_f64_exact(v: f64) -> Result<Self> {
        BigRational::from_float(v).ok_or(Error::NotReal {
            value: format!("{v}"),
        })
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn sqrt_checked(&self) -> Result<Self> {
        // Ratio is kept reduced with a positive denominator, so the value is
        // a perfect square iff numerator and denominator both are.
        let inexact = || Error::InexactSqrt {
            value: format!("{self}"),
        };
        let num = bigint_exact_sqrt(self.numer()).ok_or_else(inexact)?;
        let den = bigint_exact_sqrt(self.denom()).ok_or_else(inexact)?;
        Ok(BigRational::new(num, den))
    }

    fn abs(&self) -> Self {
        Signed::abs(self)
    }
}

impl Scalar for Complex<f64> {
    type Real = f64;

    fn conj(&self) -> Self {
        Complex::conj(self)
    }

    fn re(&self) -> f64 {
        self.re
    }

    fn im(&self) -> f64 {
        self.im
    }

    fn from_real(r: f64) -> Self {
        Complex::new(r, 0.0)
    }

    fn from_re_im(re: f64, im: f64) -> Result<Self> {
        Ok(Complex::new(re, im))
    }

    fn abs_sqr(&self) -> f64 {
        self.norm_sqr()
    }
}

impl Scalar for f64 {
    type Real = f64;

    fn conj(&self) -> Self {
        *self
    }

    fn re(&self) -> f64 {
        *self
    }

    fn im(&self) -> f64 {
        0.0
    }

    fn from_real(r: f64) -> Self {
        r
    }

    fn from_re_im(re: f64, im: f64) -> Result<Self> {
        if im != 0.0 {
            return Err(Error::NotReal {
                value: format!("{re}+{im}i"),
            });
        }
        Ok(re)
    }

    fn abs_sqr(&self) -> f64 {
        self * self
    }
}

impl Scalar for BigRational {
    type Real = BigRational;

    fn conj(&self) -> Self {
        self.clone()
    }

    fn re(&self) -> BigRational {
        self.clone()
    }

    fn im(&self) -> BigRational {
        num_traits::Zero::zero()
    }

    fn from_real(r: BigRational) -> Self {
        r
    }

    fn from_re_im(re: BigRational, im: BigRational) -> Result<Self> {
        if !num_traits::Zero::is_zero(&im) {
            return Err(Error::NotReal {
                value: format!("{re}+{im}i"),
            });
        }
        Ok(re)
    }

    fn abs_sqr(&self) -> BigRational {
        self * self
    }
}
