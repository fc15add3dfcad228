//! Symbolic lattice expansion of reconstructed moments.
//!
//! The `(0,0)` entry of the rotation product for a pair `(k, j)` is a sum of
//! signed monomials in the parameters, one per admissible route through the
//! rotation trellis. Routes are enumerated structurally (no field values),
//! factors stay in product order, terms are not deduplicated, and the number
//! of terms for gap `l` is the Catalan number `C_l`.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::schur::GammaField;
use num_bigint::BigUint;

/// Largest gap accepted by [`lattice_expand`]; beyond this the term count
/// (Catalan growth) stops being desk-scale.
pub const MAX_LATTICE_GAP: usize = 8;

/// Which symbol a factor contributes to a term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum FactorKind {
    /// `γ_{k,j}`
    Gamma,
    /// `conj(γ_{k,j})`; each occurrence also flips the sign of the term.
    GammaBar,
    /// `d_{k,j}`
    Dee,
}

/// One symbolic factor of a lattice term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct LatticeFactor {
    pub kind: FactorKind,
    pub k: usize,
    pub j: usize,
}

/// One signed monomial of the expansion, factors in lexicographic pair
/// order (the order in which the rotation factors are multiplied).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct LatticeTerm {
    /// True when an odd number of `GammaBar` factors flips the sign.
    pub negative: bool,
    pub factors: Vec<LatticeFactor>,
}

impl LatticeTerm {
    /// Numeric value of the term under a concrete parameter field.
    pub fn evaluate<T: Scalar>(&self, field: &GammaField<T>) -> T {
        let mut v = if self.negative { -T::one() } else { T::one() };
        for f in &self.factors {
            v = v * match f.kind {
                FactorKind::Gamma => field.gamma(f.k, f.j).clone(),
                FactorKind::GammaBar => field.gamma(f.k, f.j).conj(),
                FactorKind::Dee => T::from_real(field.dee(f.k, f.j).clone()),
            };
        }
        v
    }
}

impl std::fmt::Display for LatticeTerm {
    /// Text form used by the golden files and the CLI, e.g.
    /// `- d(0,1) g(0,2) gbar(1,2) g(1,3) d(2,3)`.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", if self.negative { '-' } else { '+' })?;
        for factor in &self.factors {
            let name = match factor.kind {
                FactorKind::Gamma => "g",
                FactorKind::GammaBar => "gbar",
                FactorKind::Dee => "d",
            };
            write!(f, " {name}({},{})", factor.k, factor.j)?;
        }
        Ok(())
    }
}

/// Expands `s_{k,j}/(√s_{k,k}·√s_{j,j})` symbolically by enumerating every
/// structurally nonzero route through the rotation factors for `(k, j)`.
/// The gap `j − k` must not exceed [`MAX_LATTICE_GAP`].
pub fn lattice_expand(k: usize, j: usize) -> Result<Vec<LatticeTerm>> {
    if k >= j {
        return Err(Error::InvalidArgument {
            field: "lattice pair",
            reason: format!("need k < j, got ({k},{j})"),
        });
    }
    let gap = j - k;
    if gap > MAX_LATTICE_GAP {
        return Err(Error::EnumerationBound {
            gap,
            max: MAX_LATTICE_GAP,
        });
    }
    // Rotation factors in multiplication order: pairs (r, c) lexicographic.
    let factors: Vec<(usize, usize)> = (k..j)
        .flat_map(|r| ((r + 1)..=j).map(move |c| (r, c)))
        .collect();
    let mut terms = Vec::new();
    let mut stack = Vec::new();
    walk(&factors, 0, 0, &mut stack, &mut terms);
    Ok(terms)
}

/// Depth-first route enumeration. `pos` is the current trellis coordinate
/// (0-based); the factor for pair `(r, c)` acts on coordinates `c−r−1, c−r`
/// and passes every other coordinate through unchanged.
fn walk(
    factors: &[(usize, usize)],
    t: usize,
    pos: usize,
    stack: &mut Vec<LatticeFactor>,
    terms: &mut Vec<LatticeTerm>,
) {
    if t == factors.len() {
        if pos == 0 {
            let negative = stack
                .iter()
                .filter(|f| f.kind == FactorKind::GammaBar)
                .count()
                % 2
                == 1;
            terms.push(LatticeTerm {
                negative,
                factors: stack.clone(),
            });
        }
        return;
    }
    let (r, c) = factors[t];
    let p = c - r;
    if pos == p - 1 {
        stack.push(LatticeFactor {
            kind: FactorKind::Gamma,
            k: r,
            j: c,
        });
        walk(factors, t + 1, pos, stack, terms);
        stack.pop();
        stack.push(LatticeFactor {
            kind: FactorKind::Dee,
            k: r,
            j: c,
        });
        walk(factors, t + 1, p, stack, terms);
        stack.pop();
    } else if pos == p {
        stack.push(LatticeFactor {
            kind: FactorKind::Dee,
            k: r,
            j: c,
        });
        walk(factors, t + 1, p - 1, stack, terms);
        stack.pop();
        stack.push(LatticeFactor {
            kind: FactorKind::GammaBar,
            k: r,
            j: c,
        });
        walk(factors, t + 1, pos, stack, terms);
        stack.pop();
    } else {
        walk(factors, t + 1, pos, stack, terms);
    }
}

/// `C_l = (1/(l+1))·binom(2l, l)`, exactly. Uses the integer recurrence
/// `C_{n+1} = C_n·2(2n+1)/(n+2)` (the division is always exact).
pub fn catalan(l: usize) -> BigUint {
    let mut c = BigUint::from(1u32);
    for n in 0..l {
        c = c * BigUint::from(2 * (2 * n + 1)) / BigUint::from(n + 2);
    }
    c
}
