//! Non-commutative power series in `N` indeterminates, stored as sparse
//! coefficient maps keyed by words in graded order. Multiplication is
//! concatenation-bilinear and every operation is truncated to a fixed word
//! length, which is all the lower-triangular calculus ever needs.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::words::{Alphabet, Word};
use std::collections::BTreeMap;

/// A truncated series `Σ_σ c_σ X_σ`. Zero coefficients are not stored, so
/// iteration order over [`NcSeries::terms`] is the graded word order of the
/// support.
#[derive(Debug, Clone, PartialEq)]
pub struct NcSeries<T: Scalar> {
    n: usize,
    coeffs: BTreeMap<Word, T>,
}

impl<T: Scalar> NcSeries<T> {
    pub fn zero(n: usize) -> Self {
        NcSeries {
            n,
            coeffs: BTreeMap::new(),
        }
    }

    /// The multiplicative unit `1·X_∅`.
    pub fn unit(n: usize) -> Self {
        let mut s = NcSeries::zero(n);
        s.coeffs.insert(Word::empty(), T::one());
        s
    }

    pub fn monomial(n: usize, word: Word, coeff: T) -> Result<Self> {
        let alphabet = Alphabet::new(n)?;
        alphabet.word(word.letters())?;
        let mut s = NcSeries::zero(n);
        s.add_term(word, coeff);
        Ok(s)
    }

    pub fn from_terms<I>(n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Word, T)>,
    {
        let alphabet = Alphabet::new(n)?;
        let mut s = NcSeries::zero(n);
        for (word, coeff) in terms {
            alphabet.word(word.letters())?;
            s.add_term(word, coeff);
        }
        Ok(s)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeff(&self, word: &Word) -> T {
        self.coeffs.get(word).cloned().unwrap_or_else(T::zero)
    }

    /// Nonzero terms in graded word order.
    pub fn terms(&self) -> impl Iterator<Item = (&Word, &T)> {
        self.coeffs.iter()
    }

    pub fn support_depth(&self) -> usize {
        self.coeffs.keys().map(Word::len).max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn add_term(&mut self, word: Word, coeff: T) {
        if coeff == T::zero() {
            return;
        }
        let entry = self.coeffs.entry(word);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().clone() + coeff;
                if sum == T::zero() {
                    o.remove();
                } else {
                    o.insert(sum);
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_alphabet(other)?;
        let mut out = self.clone();
        for (w, c) in other.terms() {
            out.add_term(w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(w, c)| (w.clone(), T::zero() - c.clone()))
            .collect();
        NcSeries { n: self.n, coeffs }
    }

    pub fn scale(&self, factor: &T) -> Self {
        let mut out = NcSeries::zero(self.n);
        for (w, c) in &self.coeffs {
            out.add_term(w.clone(), c.clone() * factor.clone());
        }
        out
    }

    /// Drops every term with `|σ| > depth`.
    pub fn truncate(&self, depth: usize) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .filter(|(w, _)| w.len() <= depth)
            .map(|(w, c)| (w.clone(), c.clone()))
            .collect();
        NcSeries { n: self.n, coeffs }
    }

    /// Left multiplication by the generator `X_k`.
    pub fn shift_left(&self, letter: u8) -> Result<Self> {
        if letter == 0 || letter as usize > self.n {
            return Err(Error::BadLetter {
                letter,
                n: self.n,
            });
        }
        let prefix = Word::from_unchecked(vec![letter]);
        let coeffs = self
            .coeffs
            .iter()
            .map(|(w, c)| (prefix.concat(w), c.clone()))
            .collect();
        Ok(NcSeries { n: self.n, coeffs })
    }

    fn check_same_alphabet(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::SizeMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }

    /// Sup of coefficient magnitudes against another series, over all words
    /// of length ≤ `depth`.
    pub fn max_deviation(&self, other: &Self, depth: usize) -> f64 {
        let mut sup: f64 = 0.0;
        let words: std::collections::BTreeSet<&Word> = self
            .coeffs
            .keys()
            .chain(other.coeffs.keys())
            .filter(|w| w.len() <= depth)
            .collect();
        for w in words {
            let diff = self.coeff(w) - other.coeff(w);
            sup = sup.max(diff.abs_f64());
        }
        sup
    }
}

/// Concatenation product truncated at word length `depth`.
pub fn nc_multiply<T: Scalar>(x: &NcSeries<T>, y: &NcSeries<T>, depth: usize) -> Result<NcSeries<T>> {
    x.check_same_alphabet(y)?;
    let mut out = NcSeries::zero(x.n);
    for (alpha, c) in x.terms() {
        if alpha.len() > depth {
            continue;
        }
        for (beta, d) in y.terms() {
            if alpha.len() + beta.len() > depth {
                // Terms iterate in graded order, so every later β is too
                // long as well.
                break;
            }
            out.add_term(alpha.concat(beta), c.clone() * d.clone());
        }
    }
    Ok(out)
}

/// Multiplicative inverse truncated at word length `depth`. Writing
/// `x = c(1 − u)` with `u` supported on nonempty words, the inverse is the
/// geometric series `(1/c)·Σ_m u^m`, accumulated Horner style; it is the
/// exact two-sided inverse of the truncation.
pub fn nc_invert<T: Scalar>(x: &NcSeries<T>, depth: usize) -> Result<NcSeries<T>> {
    let c = x.coeff(&Word::empty());
    if c == T::zero() {
        return Err(Error::ZeroConstantTerm);
    }
    let inv_c = T::one() / c.clone();
    let unit = NcSeries::unit(x.n);
    // u = 1 − x/c, supported on word lengths ≥ 1.
    let u = unit.sub(&x.scale(&inv_c))?.truncate(depth);
    let mut acc = unit.clone();
    for _ in 0..depth {
        acc = unit.add(&nc_multiply(&u, &acc, depth)?)?;
    }
    Ok(acc.scale(&inv_c))
}
