//! Limit-theorem evaluators: determinant ratios of nested sections, their
//! closed d-product forms, the first and strong limit sequences, and angle
//! determinants between past and future blocks.
//!
//! Sequences are reported in `f64` regardless of the backend; the exact
//! backends feed exact values into the report, the float backend feeds its
//! own arithmetic.

use crate::error::{Error, Result};
use crate::kernel::{szego_class_report, DeterminantTable, MomentKernel, SzegoClass, SzegoConfig};
use crate::poly::build_polys;
use crate::scalar::{RealField, Scalar};
use crate::schur::{extract_gamma, GammaField};
use num_traits::One;

/// Number of trailing sequence entries used for the limit estimate and the
/// residual.
const TRAILING_WINDOW: usize = 8;

/// A convergent (or diverging, the report does not judge) numeric sequence
/// with a trailing-window summary.
#[derive(Debug, Clone, serde::Serialize)]
pub struct LimitReport {
    /// `(index, value)` pairs in index order.
    pub sequence: Vec<(usize, f64)>,
    /// Mean of the trailing window.
    pub limit_estimate: f64,
    /// `max − min` over the trailing window.
    pub residual: f64,
}

impl LimitReport {
    /// Summarizes a sequence over its trailing window (at most
    /// [`TRAILING_WINDOW`] entries).
    pub fn from_sequence(sequence: Vec<(usize, f64)>) -> Self {
        let tail = sequence.len().min(TRAILING_WINDOW);
        let slice = &sequence[sequence.len() - tail..];
        let (mut lo, mut hi, mut sum) = (f64::INFINITY, f64::NEG_INFINITY, 0.0);
        for &(_, v) in slice {
            lo = lo.min(v);
            hi = hi.max(v);
            sum += v;
        }
        let (limit_estimate, residual) = if slice.is_empty() {
            (f64::NAN, f64::NAN)
        } else {
            (sum / tail as f64, hi - lo)
        };
        LimitReport {
            sequence,
            limit_estimate,
            residual,
        }
    }
}

/// The same determinant ratio along three routes that must agree:
/// directly from determinants, through the reversed polynomial's constant
/// term, and through the d-parameter product.
#[derive(Debug, Clone, serde::Serialize)]
pub struct DetRatio {
    /// `D_{r,q} / D_{r+1,q}` from raw section determinants.
    pub via_determinants: f64,
    /// `1 / |φ^♯_{q−r}(0, r)|²` from the recurrence-built table.
    pub via_phi_sharp: f64,
    /// `s_{r,r} · ∏_{j=r+1}^{q} d²_{r,j}` from the extracted parameters.
    pub via_d_products: f64,
}

/// Computes `D_{r,q}/D_{r+1,q}` three ways (see [`DetRatio`]).
pub fn det_ratio<T: Scalar>(kernel: &MomentKernel<T>, r: usize, q: usize) -> Result<DetRatio> {
    if r >= q || q >= kernel.size() {
        return Err(Error::InvalidArgument {
            field: "index pair",
            reason: format!("need r < q < size, got r={r}, q={q}, size={}", kernel.size()),
        });
    }
    let dets = DeterminantTable::compute(kernel)?;
    let via_determinants = (dets.get(r, q).clone() / dets.get(r + 1, q).clone()).to_f64();
    let g = extract_gamma(kernel)?;
    let n = q - r;
    let table = build_polys(&g, n, r)?;
    let sharp0 = table.phi_sharp(n, r)[0].abs_sqr();
    let via_phi_sharp = 1.0 / sharp0.to_f64();
    let mut prod = g.diag(r).clone();
    for j in (r + 1)..=q {
        let d = g.dee(r, j).clone();
        prod = prod * d.clone() * d;
    }
    Ok(DetRatio {
        via_determinants,
        via_phi_sharp,
        via_d_products: prod.to_f64(),
    })
}

/// First limit sequence for row `r` together with the row classification.
#[derive(Debug, Clone, serde::Serialize)]
pub struct FirstLimit {
    pub row: usize,
    /// Szegő classification of the row at this horizon; a `Degenerate` row
    /// means the sequence tends to zero and the limit carries no mass.
    pub class: SzegoClass,
    pub report: LimitReport,
}

/// Sequence `q ↦ D_{r,q}/D_{r+1,q} = s_{r,r}·∏_{j=r+1}^{q} d²_{r,j}`
/// (computed in the stable product form), converging to
/// `g_r = |Θ(r,r)|²` for Szegő-class rows.
pub fn first_limit<T: Scalar>(g: &GammaField<T>, r: usize, horizon: usize) -> Result<FirstLimit> {
    if r >= g.size() {
        return Err(Error::IndexOutOfRange {
            k: r,
            j: r,
            size: g.size(),
        });
    }
    let q_max = (r + horizon).min(g.size() - 1);
    let mut sequence = Vec::with_capacity(q_max - r + 1);
    let mut partial = g.diag(r).clone();
    sequence.push((r, partial.to_f64()));
    for q in (r + 1)..=q_max {
        let d = g.dee(r, q).clone();
        partial = partial * d.clone() * d;
        sequence.push((q, partial.to_f64()));
    }
    let config = SzegoConfig {
        horizon,
        ..SzegoConfig::default()
    };
    let class = szego_class_report(g, &config).rows[r].class;
    Ok(FirstLimit {
        row: r,
        class,
        report: LimitReport::from_sequence(sequence),
    })
}

/// The strong limit data: one route through raw determinants of the
/// reconstructed kernel, one through d-parameter products, and the partial
/// limit value they share.
#[derive(Debug, Clone, serde::Serialize)]
pub struct StrongLimit {
    /// `n ↦ D_{0,n} / ∏_{l=0}^{n} g_l` with `D` computed from raw
    /// determinants and `g_l` truncated at the parameter horizon.
    pub determinant_route: LimitReport,
    /// `n ↦ 1 / ∏_{0≤k≤n<j≤J} d²_{k,j}` from the parameters alone.
    pub product_route: LimitReport,
    /// Parameter horizon `J` (last index of the field).
    pub horizon: usize,
    /// `L_partial = ∏_{0≤k≤n_max<j≤J} d²_{k,j}`; both routes end at
    /// `1/L_partial`.
    pub l_partial: f64,
}

/// Evaluates both strong-limit routes for `n = 0..=n_max` with parameter
/// horizon `J = size − 1`; the field must extend at least one index past
/// `n_max`.
pub fn strong_limit<T: Scalar>(g: &GammaField<T>, n_max: usize) -> Result<StrongLimit> {
    let horizon = g.size().saturating_sub(1);
    if n_max >= horizon {
        return Err(Error::NotEnoughData {
            what: "parameter horizon",
            needed: n_max + 2,
            got: g.size(),
        });
    }
    // g_l truncated at the horizon.
    let g_partial: Vec<T::Real> = (0..=n_max)
        .map(|l| {
            let mut v = g.diag(l).clone();
            for j in (l + 1)..=horizon {
                let d = g.dee(l, j).clone();
                v = v * d.clone() * d;
            }
            v
        })
        .collect();
    let kernel = g.reconstruct_moments(n_max + 1)?;
    let dets = DeterminantTable::compute(&kernel)?;
    let mut det_seq = Vec::with_capacity(n_max + 1);
    let mut g_prod = T::Real::one();
    for n in 0..=n_max {
        g_prod = g_prod * g_partial[n].clone();
        det_seq.push((n, (dets.get(0, n).clone() / g_prod.clone()).to_f64()));
    }
    let mut prod_seq = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let mut cross = T::Real::one();
        for k in 0..=n {
            for j in (n + 1)..=horizon {
                let d = g.dee(k, j).clone();
                cross = cross * d.clone() * d;
            }
        }
        prod_seq.push((n, (T::Real::one() / cross).to_f64()));
    }
    let mut l_partial = T::Real::one();
    for k in 0..=n_max {
        for j in (n_max + 1)..=horizon {
            let d = g.dee(k, j).clone();
            l_partial = l_partial * d.clone() * d;
        }
    }
    Ok(StrongLimit {
        determinant_route: LimitReport::from_sequence(det_seq),
        product_route: LimitReport::from_sequence(prod_seq),
        horizon,
        l_partial: l_partial.to_f64(),
    })
}

/// Angle determinant between the blocks `r..=l` and `l+1..=q`:
/// `D_{r,q} / (D_{r,l} · D_{l+1,q})`, a value in `(0, 1]` measuring how far
/// the two blocks are from orthogonal.
pub fn angle_det<T: Scalar>(
    kernel: &MomentKernel<T>,
    r: usize,
    l: usize,
    q: usize,
) -> Result<f64> {
    if !(r <= l && l < q && q < kernel.size()) {
        return Err(Error::InvalidArgument {
            field: "index triple",
            reason: format!(
                "need r ≤ l < q < size, got r={r}, l={l}, q={q}, size={}",
                kernel.size()
            ),
        });
    }
    let dets = DeterminantTable::compute(kernel)?;
    let value = dets.get(r, q).clone() / (dets.get(r, l).clone() * dets.get(l + 1, q).clone());
    Ok(value.to_f64())
}

/// The d-product form of the same angle determinant,
/// `∏_{r≤k≤l<j≤q} d²_{k,j}`, evaluated on a parameter field.
pub fn angle_det_products<T: Scalar>(
    g: &GammaField<T>,
    r: usize,
    l: usize,
    q: usize,
) -> Result<f64> {
    if !(r <= l && l < q && q < g.size()) {
        return Err(Error::InvalidArgument {
            field: "index triple",
            reason: format!("need r ≤ l < q < size, got r={r}, l={l}, q={q}, size={}", g.size()),
        });
    }
    let mut prod = T::Real::one();
    for k in r..=l {
        for j in (l + 1)..=q {
            let d = g.dee(k, j).clone();
            prod = prod * d.clone() * d;
        }
    }
    Ok(prod.to_f64())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models;
    use num_complex::Complex;

    type C = Complex<f64>;

    fn identity_kernel(m: usize) -> MomentKernel<C> {
        MomentKernel::from_fn(m, |k, j| {
            if k == j {
                C::new(1.0, 0.0)
            } else {
                C::new(0.0, 0.0)
            }
        })
    }

    fn sample_field() -> GammaField<C> {
        GammaField::from_entries(
            vec![1.0, 2.0, 0.5, 1.5, 1.0, 0.75],
            vec![
                (0, 1, C::new(0.3, 0.4)),
                (0, 2, C::new(-0.2, 0.1)),
                (1, 2, C::new(0.5, -0.3)),
                (1, 3, C::new(0.1, 0.2)),
                (2, 4, C::new(-0.4, -0.2)),
                (3, 4, C::new(0.0, 0.55)),
                (4, 5, C::new(0.2, 0.1)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn det_ratio_routes_agree_on_the_identity_kernel() {
        let k = identity_kernel(5);
        for r in 0..4 {
            for q in (r + 1)..5 {
                let t = det_ratio(&k, r, q).unwrap();
                assert!((t.via_determinants - 1.0).abs() < 1e-12);
                assert!((t.via_phi_sharp - 1.0).abs() < 1e-12);
                assert!((t.via_d_products - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn det_ratio_hilbert_hand_value() {
        let k = models::hilbert_kernel_f64(3);
        let t = det_ratio(&k, 0, 1).unwrap();
        assert!((t.via_determinants - 0.25).abs() < 1e-12);
        assert!((t.via_phi_sharp - 0.25).abs() < 1e-12);
        assert!((t.via_d_products - 0.25).abs() < 1e-12);
    }

    #[test]
    fn det_ratio_routes_agree_on_a_complex_field() {
        let kernel = sample_field().reconstruct_moments(6).unwrap();
        for r in 0..5 {
            for q in (r + 1)..6 {
                let t = det_ratio(&kernel, r, q).unwrap();
                assert!(
                    (t.via_determinants / t.via_phi_sharp - 1.0).abs() < 1e-8,
                    "dets vs sharp at ({r},{q})"
                );
                assert!(
                    (t.via_determinants / t.via_d_products - 1.0).abs() < 1e-8,
                    "dets vs products at ({r},{q})"
                );
            }
        }
    }

    #[test]
    fn first_limit_of_the_zero_field_is_the_diagonal() {
        let g = GammaField::<C>::from_fn(10, |k| (k + 1) as f64, |_, _| C::new(0.0, 0.0)).unwrap();
        let fl = first_limit(&g, 2, 6).unwrap();
        assert_eq!(fl.class, SzegoClass::Szego);
        for &(_, v) in &fl.report.sequence {
            assert!((v - 3.0).abs() < 1e-14);
        }
        assert!((fl.report.limit_estimate - 3.0).abs() < 1e-14);
        assert!(fl.report.residual < 1e-14);
    }

    #[test]
    fn first_limit_hilbert_partials_telescope() {
        let g = models::hilbert_field(60).unwrap();
        let fl = first_limit(&g, 0, 50).unwrap();
        for &(q, v) in &fl.report.sequence {
            let want = 1.0 / ((q + 1) * (q + 1)) as f64;
            assert!((v - want).abs() < 1e-12, "q={q}: {v} vs {want}");
        }
    }

    #[test]
    fn hilbert_row_flags_degenerate_at_a_deep_horizon() {
        let g = models::hilbert_field(1201).unwrap();
        let fl = first_limit(&g, 0, 1200).unwrap();
        assert_eq!(fl.class, SzegoClass::Degenerate);
        assert!(fl.report.limit_estimate < 1e-6);
    }

    #[test]
    fn strong_limit_zero_field_is_flat() {
        let g = GammaField::<C>::from_fn(12, |_| 1.0, |_, _| C::new(0.0, 0.0)).unwrap();
        let s = strong_limit(&g, 6).unwrap();
        assert!((s.l_partial - 1.0).abs() < 1e-14);
        for &(_, v) in &s.determinant_route.sequence {
            assert!((v - 1.0).abs() < 1e-12);
        }
        for &(_, v) in &s.product_route.sequence {
            assert!((v - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn strong_limit_single_alpha_matches_hand_values() {
        // One parameter per adjacent pair: γ_{k,k+1} = 0.6. Every ratio is
        // 1/(1−0.36) = 1.5625 and L_partial = 0.64.
        let spec = models::ToeplitzSpec {
            s0: 1.0,
            verblunsky: vec![C::new(0.6, 0.0)],
        };
        let g = models::toeplitz_field(&spec, 10).unwrap();
        let s = strong_limit(&g, 6).unwrap();
        assert!((s.l_partial - 0.64).abs() < 1e-12);
        for &(n, v) in &s.determinant_route.sequence {
            assert!((v - 1.5625).abs() < 1e-10, "det route at {n}: {v}");
        }
        for &(n, v) in &s.product_route.sequence {
            assert!((v - 1.5625).abs() < 1e-12, "product route at {n}: {v}");
        }
    }

    #[test]
    fn strong_limit_single_pair_stays_at_one() {
        // A single strictly upper pair (0,1): the cross products empty out
        // as soon as n ≥ 1, so both routes sit at 1 from there on.
        let g = GammaField::<C>::from_entries(
            vec![1.0; 10],
            vec![(0, 1, C::new(0.6, 0.0))],
        )
        .unwrap();
        let s = strong_limit(&g, 6).unwrap();
        assert!((s.l_partial - 1.0).abs() < 1e-14);
        let first = s.determinant_route.sequence[0].1;
        assert!((first - 1.5625).abs() < 1e-10, "n=0 sees the pair: {first}");
        for &(n, v) in s.determinant_route.sequence.iter().skip(1) {
            assert!((v - 1.0).abs() < 1e-10, "det route at {n}");
        }
        for (a, b) in s
            .determinant_route
            .sequence
            .iter()
            .zip(s.product_route.sequence.iter())
        {
            assert!((a.1 - b.1).abs() < 1e-10, "routes at {}", a.0);
        }
    }

    #[test]
    fn strong_limit_routes_agree_on_a_decaying_field() {
        let g = GammaField::<C>::from_fn(
            16,
            |_| 1.0,
            |k, j| C::new(0.5 * 3f64.powi(k as i32 - j as i32), 0.0),
        )
        .unwrap();
        let s = strong_limit(&g, 8).unwrap();
        for (a, b) in s
            .determinant_route
            .sequence
            .iter()
            .zip(s.product_route.sequence.iter())
        {
            assert!((a.1 - b.1).abs() < 1e-10, "n={}", a.0);
        }
        let last = s.determinant_route.sequence.last().unwrap().1;
        assert!((last - 1.0 / s.l_partial).abs() < 1e-10);
    }

    #[test]
    fn angle_det_of_orthogonal_blocks_is_one() {
        let g = GammaField::<C>::from_fn(6, |k| (k + 1) as f64, |_, _| C::new(0.0, 0.0)).unwrap();
        let kernel = g.reconstruct_moments(6).unwrap();
        assert!((angle_det(&kernel, 0, 2, 5).unwrap() - 1.0).abs() < 1e-12);
        assert!((angle_det_products(&g, 0, 2, 5).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn angle_det_hilbert_hand_value() {
        let k = models::hilbert_kernel_f64(2);
        let v = angle_det(&k, 0, 0, 1).unwrap();
        assert!((v - 0.25).abs() < 1e-12);
    }

    #[test]
    fn angle_det_routes_agree_and_stay_in_range() {
        let g = sample_field();
        let kernel = g.reconstruct_moments(6).unwrap();
        for r in 0..3usize {
            for l in r..4usize {
                for q in (l + 1)..6usize {
                    let via_det = angle_det(&kernel, r, l, q).unwrap();
                    let via_prod = angle_det_products(&g, r, l, q).unwrap();
                    assert!(via_det > 0.0 && via_det <= 1.0 + 1e-12, "range at ({r},{l},{q})");
                    assert!(
                        (via_det - via_prod).abs() < 1e-10,
                        "routes at ({r},{l},{q}): {via_det} vs {via_prod}"
                    );
                }
            }
        }
    }
}
