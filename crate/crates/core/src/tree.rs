//! Tree-stationary kernels on the free semigroup: one unit-disk parameter
//! per nonempty word induces a full parameter field on the graded word
//! order, and with it a stationary moment kernel, word-indexed orthonormal
//! polynomial families in the non-commutative series algebra, a word-ordered
//! embedding into triangular arrays, and determinant-ratio limit sequences.
//!
//! Conventions. The induced field pairs two words only when one is a prefix
//! of the other: `γ_{σ,τ} = γ_β` when `τ = σβ`, and `0` otherwise. This is
//! the unique choice for which stripping a common prefix reduces every
//! nonzero entry to a first-row entry, giving kernels with
//! `K(τσ, τσ′) = K(σ, σ′)` and `K(σ,τ) = 0` for prefix-incomparable pairs.
//! Diagonals are fixed to `1` (unital normalization).

use crate::error::{Error, Result};
use crate::kernel::{DeterminantTable, MomentKernel};
use crate::scalar::{RealField, Scalar};
use crate::schur::GammaField;
use crate::series::{nc_invert, NcSeries};
use crate::triangular::{spectral_factor, TriangularArray};
use crate::words::{Alphabet, Word};
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// Parameter field on the free semigroup: `γ_σ` in the open unit disk for
/// finitely many nonempty words `σ`, with `d_σ = √(1−|γ_σ|²)` cached.
/// Missing words carry `γ = 0`, `d = 1`.
#[derive(Debug, Clone)]
pub struct TreeGammaField<T: Scalar> {
    alphabet: Alphabet,
    gamma: BTreeMap<Word, T>,
    dee: BTreeMap<Word, T::Real>,
}

impl<T: Scalar> TreeGammaField<T> {
    pub fn new(n: usize, entries: Vec<(Word, T)>) -> Result<Self> {
        let alphabet = Alphabet::new(n)?;
        let mut gamma = BTreeMap::new();
        let mut dee = BTreeMap::new();
        for (word, value) in entries {
            alphabet.word(word.letters())?;
            if word.is_empty() {
                return Err(Error::InvalidArgument {
                    field: "tree parameter",
                    reason: "the empty word carries no parameter".into(),
                });
            }
            let d_sqr = T::Real::one() - value.abs_sqr();
            if !d_sqr.is_positive() {
                return Err(Error::InvalidArgument {
                    field: "tree parameter",
                    reason: format!("|γ_{word}| must be < 1"),
                });
            }
            if gamma.insert(word.clone(), value).is_some() {
                return Err(Error::DuplicateEntry {
                    k: 0,
                    j: alphabet.rank(&word),
                });
            }
            dee.insert(word, d_sqr.sqrt_checked()?);
        }
        Ok(TreeGammaField {
            alphabet,
            gamma,
            dee,
        })
    }

    /// Fills every nonempty word of length ≤ `depth` from a closure.
    pub fn from_fn(n: usize, depth: usize, mut f: impl FnMut(&Word) -> T) -> Result<Self> {
        let alphabet = Alphabet::new(n)?;
        let entries = alphabet
            .words_up_to(depth)
            .into_iter()
            .filter(|w| !w.is_empty())
            .map(|w| {
                let v = f(&w);
                (w, v)
            })
            .collect();
        TreeGammaField::new(n, entries)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn n(&self) -> usize {
        self.alphabet.n()
    }

    pub fn gamma(&self, word: &Word) -> T {
        self.gamma.get(word).cloned().unwrap_or_else(T::zero)
    }

    pub fn dee(&self, word: &Word) -> T::Real {
        self.dee.get(word).cloned().unwrap_or_else(T::Real::one)
    }

    /// Stored parameters in graded word order.
    pub fn params(&self) -> impl Iterator<Item = (&Word, &T)> {
        self.gamma.iter()
    }

    /// Largest word length carrying a stored parameter.
    pub fn param_depth(&self) -> usize {
        self.gamma.keys().map(Word::len).max().unwrap_or(0)
    }

    /// The full parameter field on ranks `0..section_size(depth)`:
    /// `γ_{rank σ, rank τ} = γ_β` when `τ = σβ`, zero otherwise; unit
    /// diagonal.
    pub fn induced_field(&self, depth: usize) -> Result<GammaField<T>> {
        let words = self.alphabet.words_up_to(depth);
        GammaField::from_fn(
            words.len(),
            |_| T::Real::one(),
            |k, j| match words[k].strip_prefix(&words[j]) {
                Some(beta) => self.gamma(&beta),
                None => T::zero(),
            },
        )
    }

    /// Word-ordered stationary kernel of the section, with its word list.
    pub fn stationary_kernel(&self, depth: usize) -> Result<(MomentKernel<T>, Vec<Word>)> {
        let induced = self.induced_field(depth)?;
        let kernel = induced.reconstruct_moments(induced.size())?;
        Ok((kernel, self.alphabet.words_up_to(depth)))
    }

    /// `∏ d²_σ` over stored parameters with `|σ| ≤ depth`.
    pub fn dee_sqr_product(&self, depth: usize) -> T::Real {
        let mut p = T::Real::one();
        for (w, d) in &self.dee {
            if w.len() <= depth {
                p = p * d.clone() * d.clone();
            }
        }
        p
    }

    /// `∏ d_σ^{2|σ|}` over stored parameters with `|σ| ≤ depth`.
    pub fn dee_weighted_product(&self, depth: usize) -> T::Real {
        let mut p = T::Real::one();
        for (w, d) in &self.dee {
            if w.len() <= depth {
                let sqr = d.clone() * d.clone();
                for _ in 0..w.len() {
                    p = p * sqr.clone();
                }
            }
        }
        p
    }
}

/// Sup over stationarity defects: squared magnitude of
/// `K(τσ, τσ′) − K(σ, σ′)` over all words with both concatenations inside
/// the depth section. Exactly zero for kernels built by
/// [`TreeGammaField::stationary_kernel`] over an exact scalar backend.
pub fn stationarity_deviation<T: Scalar>(
    kernel: &MomentKernel<T>,
    alphabet: &Alphabet,
    depth: usize,
) -> Result<T::Real> {
    let words = alphabet.words_up_to(depth);
    check_section(kernel, &words)?;
    let mut sup = T::Real::zero();
    for tau in &words {
        if tau.is_empty() {
            continue;
        }
        for (i, sigma) in words.iter().enumerate() {
            if tau.len() + sigma.len() > depth {
                continue;
            }
            for sigma2 in &words[i..] {
                if tau.len() + sigma2.len() > depth {
                    continue;
                }
                let shifted = kernel.get(
                    alphabet.rank(&tau.concat(sigma)),
                    alphabet.rank(&tau.concat(sigma2)),
                );
                let base = kernel.get(alphabet.rank(sigma), alphabet.rank(sigma2));
                let dev = (shifted - base).abs_sqr();
                if dev > sup {
                    sup = dev;
                }
            }
        }
    }
    Ok(sup)
}

/// Sup of `|K(σ,τ)|²` over prefix-incomparable pairs — zero exactly when
/// the kernel is supported on prefix-comparable pairs.
pub fn prefix_support_deviation<T: Scalar>(
    kernel: &MomentKernel<T>,
    alphabet: &Alphabet,
    depth: usize,
) -> Result<T::Real> {
    let words = alphabet.words_up_to(depth);
    check_section(kernel, &words)?;
    let mut sup = T::Real::zero();
    for (i, sigma) in words.iter().enumerate() {
        for (j, tau) in words.iter().enumerate().skip(i + 1) {
            if sigma.is_prefix_of(tau) || tau.is_prefix_of(sigma) {
                continue;
            }
            let dev = kernel.get(i, j).abs_sqr();
            if dev > sup {
                sup = dev;
            }
        }
    }
    Ok(sup)
}

fn check_section<T: Scalar>(kernel: &MomentKernel<T>, words: &[Word]) -> Result<()> {
    if kernel.size() != words.len() {
        return Err(Error::SizeMismatch {
            left: kernel.size(),
            right: words.len(),
        });
    }
    Ok(())
}

/// Orthonormal polynomial family indexed by words: `φ_σ` and its companion
/// `φ♯_σ`, both series supported on words `⪯ σ`.
#[derive(Debug, Clone)]
pub struct NcPolyTable<T: Scalar> {
    alphabet: Alphabet,
    depth: usize,
    phi: BTreeMap<Word, NcSeries<T>>,
    sharp: BTreeMap<Word, NcSeries<T>>,
}

impl<T: Scalar> NcPolyTable<T> {
    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn phi(&self, word: &Word) -> Option<&NcSeries<T>> {
        self.phi.get(word)
    }

    pub fn sharp(&self, word: &Word) -> Option<&NcSeries<T>> {
        self.sharp.get(word)
    }

    pub fn words(&self) -> impl Iterator<Item = &Word> {
        self.phi.keys()
    }

    /// Sup over `(σ,τ)` of the squared magnitude of
    /// `Σ_{α,β} c^σ_α · conj(K(α,β)) · conj(c^τ_β) − δ_{σ,τ}` — the Gram
    /// defect of the family against a word-ordered kernel.
    pub fn gram_deviation(&self, kernel: &MomentKernel<T>) -> Result<T::Real> {
        let words = self.alphabet.words_up_to(self.depth);
        check_section(kernel, &words)?;
        let coeff_rows: Vec<Vec<T>> = words
            .iter()
            .map(|sigma| {
                let series = &self.phi[sigma];
                words.iter().map(|alpha| series.coeff(alpha)).collect()
            })
            .collect();
        let m = words.len();
        let mut sup = T::Real::zero();
        for s in 0..m {
            for t in 0..m {
                let mut inner = T::zero();
                for (a, ca) in coeff_rows[s].iter().enumerate() {
                    if *ca == T::zero() {
                        continue;
                    }
                    for (b, cb) in coeff_rows[t].iter().enumerate() {
                        if *cb == T::zero() {
                            continue;
                        }
                        inner = inner + ca.clone() * kernel.get(a, b).conj() * cb.conj();
                    }
                }
                let expected = if s == t { T::one() } else { T::zero() };
                let dev = (inner - expected).abs_sqr();
                if dev > sup {
                    sup = dev;
                }
            }
        }
        Ok(sup)
    }
}

/// Builds `φ_σ`, `φ♯_σ` for every word of length ≤ `depth` by the two-term
/// recurrence
///
/// ```text
/// φ_{kσ}  = (X_k·φ_σ − γ_{kσ}·φ♯_{kσ−1}) / d_{kσ}
/// φ♯_{kσ} = (φ♯_{kσ−1} − γ̄_{kσ}·X_k·φ_σ) / d_{kσ}
/// ```
///
/// where `kσ−1` is the graded predecessor of `kσ` and `φ_∅ = φ♯_∅ = 1`.
pub fn nc_polys<T: Scalar>(tree: &TreeGammaField<T>, depth: usize) -> Result<NcPolyTable<T>> {
    let alphabet = *tree.alphabet();
    let n = alphabet.n();
    let mut phi: BTreeMap<Word, NcSeries<T>> = BTreeMap::new();
    let mut sharp: BTreeMap<Word, NcSeries<T>> = BTreeMap::new();
    for w in alphabet.words_up_to(depth) {
        if w.is_empty() {
            phi.insert(w.clone(), NcSeries::unit(n));
            sharp.insert(w, NcSeries::unit(n));
            continue;
        }
        let (k, sigma) = w.split_first().expect("nonempty word");
        let pred = alphabet.pred(&w)?;
        let shifted = phi[&sigma].shift_left(k)?;
        let prev_sharp = &sharp[&pred];
        let gam = tree.gamma(&w);
        let inv_d = T::from_real(T::Real::one() / tree.dee(&w));
        let next_phi = shifted
            .sub(&prev_sharp.scale(&gam))?
            .scale(&inv_d);
        let next_sharp = prev_sharp
            .sub(&shifted.scale(&gam.conj()))?
            .scale(&inv_d);
        phi.insert(w.clone(), next_phi);
        sharp.insert(w, next_sharp);
    }
    Ok(NcPolyTable {
        alphabet,
        depth,
        phi,
        sharp,
    })
}

/// Word-ordered triangular embedding of a series: the array with
/// `T_{rank α, rank β} = c_δ` when `α = βδ` and zero otherwise. The map is
/// one-to-one on sections and reverses products, so array inversion agrees
/// with series inversion.
pub fn embed_series<T: Scalar>(
    x: &NcSeries<T>,
    alphabet: &Alphabet,
    depth: usize,
) -> Result<TriangularArray<T>> {
    if x.n() != alphabet.n() {
        return Err(Error::SizeMismatch {
            left: x.n(),
            right: alphabet.n(),
        });
    }
    let words = alphabet.words_up_to(depth);
    Ok(TriangularArray::from_fn(words.len(), |r, c| {
        match words[c].strip_prefix(&words[r]) {
            Some(delta) => x.coeff(&delta),
            None => T::zero(),
        }
    }))
}

/// Reads a word-ordered array's first column back into a series:
/// `c_τ = A_{rank τ, 0}` — the inverse of [`embed_series`] on the image.
pub fn column_series<T: Scalar>(
    arr: &TriangularArray<T>,
    alphabet: &Alphabet,
    depth: usize,
) -> Result<NcSeries<T>> {
    let words = alphabet.words_up_to(depth);
    check_array(arr, &words)?;
    NcSeries::from_terms(
        alphabet.n(),
        words
            .iter()
            .enumerate()
            .map(|(r, w)| (w.clone(), arr.get(r, 0))),
    )
}

fn check_array<T: Scalar>(arr: &TriangularArray<T>, words: &[Word]) -> Result<()> {
    if arr.size() != words.len() {
        return Err(Error::SizeMismatch {
            left: arr.size(),
            right: words.len(),
        });
    }
    Ok(())
}

/// One point of a determinant-ratio sequence: the word, the computed ratio,
/// and its closed-form target from `d`-products.
#[derive(Debug, Clone)]
pub struct NcSample<R> {
    pub word: Word,
    pub value: R,
    pub target: R,
}

/// Sequence (by graded order, from the first nonempty word) of
/// `D_{∅,τ}/D_{1,τ}`: the section determinant over words `⪯ τ` divided by
/// the one with the empty word dropped. The target is the exact identity
/// value `∏_{∅≺δ⪯τ} d²_δ`; its final point is the partial product `g`.
pub fn det_ratio_sequence<T: Scalar>(
    tree: &TreeGammaField<T>,
    depth: usize,
) -> Result<Vec<NcSample<T::Real>>> {
    let (kernel, words) = tree.stationary_kernel(depth)?;
    let table = DeterminantTable::compute(&kernel)?;
    let mut out = Vec::with_capacity(words.len().saturating_sub(1));
    let mut target = T::Real::one();
    for (t, tau) in words.iter().enumerate().skip(1) {
        let d = tree.dee(tau);
        target = target * d.clone() * d;
        out.push(NcSample {
            word: tau.clone(),
            value: table.get(0, t).clone() / table.get(1, t).clone(),
            target: target.clone(),
        });
    }
    Ok(out)
}

/// Sequence of `D_{∅,τ} / g^{l(τ)}` with `g` the partial product
/// `∏_{|σ|≤depth} d²_σ`. The per-point target is the exact crossing
/// identity
///
/// ```text
/// D_{∅,τ}/g^{l(τ)} = ∏_{σ⪯τ} ∏_{δ: |δ|≤depth, σδ⋠τ} d_δ^{−2},
/// ```
///
/// the product over parameter words whose factor is missing from row `σ`
/// of the section determinant. Unlike the single-generator case these
/// crossing sets keep growing along graded order (the section boundary is
/// exponentially large), so the sequence need not approach the double
/// product `1/L`; callers get `L` from
/// [`TreeGammaField::dee_weighted_product`] for reference.
pub fn strong_ratio_sequence<T: Scalar>(
    tree: &TreeGammaField<T>,
    depth: usize,
) -> Result<Vec<NcSample<T::Real>>> {
    let (kernel, words) = tree.stationary_kernel(depth)?;
    let table = DeterminantTable::compute(&kernel)?;
    let g = tree.dee_sqr_product(depth);
    let params: Vec<(&Word, T::Real)> = tree
        .dee
        .iter()
        .filter(|(w, _)| w.len() <= depth)
        .map(|(w, d)| (w, d.clone() * d.clone()))
        .collect();
    let mut out = Vec::with_capacity(words.len());
    let mut g_power = T::Real::one();
    for (t, tau) in words.iter().enumerate() {
        g_power = g_power * g.clone();
        let mut target = T::Real::one();
        for sigma in &words[..=t] {
            for (delta, d_sqr) in &params {
                if !(sigma.concat(delta) <= *tau) {
                    target = target / d_sqr.clone();
                }
            }
        }
        out.push(NcSample {
            word: tau.clone(),
            value: table.get(0, t).clone() / g_power.clone(),
            target,
        });
    }
    Ok(out)
}

/// One rendered point of a limit sequence.
#[derive(Debug, Clone, serde::Serialize)]
pub struct NcRatioPoint {
    pub rank: usize,
    pub word: String,
    pub value: f64,
    pub target: f64,
}

/// One rendered point of a deviation sequence.
#[derive(Debug, Clone, serde::Serialize)]
pub struct NcDevPoint {
    pub rank: usize,
    pub word: String,
    pub value: f64,
}

/// Limit report for a tree field: the two determinant-ratio sequences with
/// their identity targets, the deviation of inverted `φ♯_σ` from the
/// spectral factor's first column, and the sup of `φ_σ` coefficients over
/// short words (which decays for Szegő-class fields).
#[derive(Debug, Clone, serde::Serialize)]
pub struct NcLimitReport {
    pub n: usize,
    pub depth: usize,
    /// Partial product `∏ d²_σ` — the first-limit value.
    pub g_partial: f64,
    /// Partial double product `L = ∏ d_σ^{2|σ|}`.
    pub l_partial: f64,
    /// `1/L`, the strong-limit formula value, for reference.
    pub strong_reference: f64,
    pub ratio: Vec<NcRatioPoint>,
    pub strong: Vec<NcRatioPoint>,
    pub theta_deviation: Vec<NcDevPoint>,
    pub phi_short_sup: Vec<NcDevPoint>,
}

/// Assembles the full limit report. Fails on degenerate fields
/// (`∏ d_σ` below `1e−12` over the section).
pub fn nc_limits<T: Scalar>(tree: &TreeGammaField<T>, depth: usize) -> Result<NcLimitReport> {
    let g = tree.dee_sqr_product(depth);
    if !(g.to_f64() > 1e-12) {
        return Err(Error::InvalidArgument {
            field: "tree parameter field",
            reason: format!(
                "degenerate parameter product: ∏ d² = {:e} over the depth-{depth} section",
                g.to_f64()
            ),
        });
    }
    let alphabet = tree.alphabet();
    let render = |samples: Vec<NcSample<T::Real>>| -> Vec<NcRatioPoint> {
        samples
            .into_iter()
            .map(|s| NcRatioPoint {
                rank: alphabet.rank(&s.word),
                word: s.word.to_string(),
                value: s.value.to_f64(),
                target: s.target.to_f64(),
            })
            .collect()
    };
    let ratio = render(det_ratio_sequence(tree, depth)?);
    let strong = render(strong_ratio_sequence(tree, depth)?);

    let (kernel, words) = tree.stationary_kernel(depth)?;
    let (theta, _) = spectral_factor(&kernel, words.len())?;
    let theta_col = column_series(&theta, alphabet, depth)?;
    let table = nc_polys(tree, depth)?;
    let mut theta_deviation = Vec::with_capacity(words.len());
    let mut phi_short_sup = Vec::with_capacity(words.len());
    for (rank, w) in words.iter().enumerate() {
        let inv = nc_invert(table.sharp(w).expect("complete table"), depth)?;
        theta_deviation.push(NcDevPoint {
            rank,
            word: w.to_string(),
            value: inv.max_deviation(&theta_col, depth),
        });
        let sup = table
            .phi(w)
            .expect("complete table")
            .terms()
            .filter(|(alpha, _)| alpha.len() <= 2)
            .map(|(_, c)| c.abs_f64())
            .fold(0.0f64, f64::max);
        phi_short_sup.push(NcDevPoint {
            rank,
            word: w.to_string(),
            value: sup,
        });
    }

    let l = tree.dee_weighted_product(depth);
    Ok(NcLimitReport {
        n: tree.n(),
        depth,
        g_partial: g.to_f64(),
        l_partial: l.to_f64(),
        strong_reference: 1.0 / l.to_f64(),
        ratio,
        strong,
        theta_deviation,
        phi_short_sup,
    })
}
