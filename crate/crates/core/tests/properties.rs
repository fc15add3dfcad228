//! Seeded property suite: structural invariants checked over 50
//! deterministic random instances each, with no hand-picked numeric
//! examples. Every instance derives from a `ChaCha8` stream keyed by the
//! loop index, so runs are bit-reproducible.

mod common;

use common::*;
use szegokit::asymptotics::angle_det;
use szegokit::poly::{build_polys, derivative, poly_eval};
use szegokit::triangular::spectral_factor;
use szegokit::{Alphabet, C64};

const INSTANCES: u64 = 50;

#[test]
fn orthonormality_gram_checks() {
    for seed in 0..INSTANCES {
        let mut r = rng(seed);
        let field = random_field(&mut r, 7, 0.7);
        let kernel = field.reconstruct_moments(7).unwrap();
        let max_degree = 4;
        let table = build_polys(&field, max_degree, 2).unwrap();
        for level in [0usize, 2] {
            // Gram(n, m) = Σ_{i,j} a_i · conj(K(l+i, l+j)) · conj(a_j).
            for n in 0..=max_degree {
                for m in 0..=max_degree {
                    let pn = table.phi(n, level);
                    let pm = table.phi(m, level);
                    let mut acc = C64::new(0.0, 0.0);
                    for (i, a) in pn.iter().enumerate() {
                        for (j, b) in pm.iter().enumerate() {
                            acc += a * kernel.get(level + i, level + j).conj() * b.conj();
                        }
                    }
                    let expected = if n == m { 1.0 } else { 0.0 };
                    assert!(
                        (acc - expected).norm() < 1e-10,
                        "seed {seed}: Gram({n},{m}) at level {level} = {acc}"
                    );
                }
            }
        }
    }
}

#[test]
fn derivative_matches_finite_differences() {
    for seed in 0..INSTANCES {
        let mut r = rng(seed);
        let field = random_field(&mut r, 6, 0.7);
        let table = build_polys(&field, 5, 0).unwrap();
        let p = table.phi(5, 0).to_vec();
        let dp = derivative(&p, 1);
        for _ in 0..4 {
            let x = {
                use rand::Rng;
                r.gen_range(-1.0..1.0)
            };
            let analytic = poly_eval(&dp, &C64::new(x, 0.0));
            let numeric = central_difference(
                |t| poly_eval(&p, &C64::new(t, 0.0)),
                x,
                1e-5,
            );
            let rel = (analytic - numeric).norm() / (1.0 + analytic.norm());
            assert!(rel < 1e-6, "seed {seed}: derivative deviates by {rel:e} at x = {x}");
        }
    }
}

#[test]
fn rotation_products_are_unitary() {
    for seed in 0..INSTANCES {
        let mut r = rng(seed);
        let field = random_field(&mut r, 6, 0.95);
        for k in 0..5 {
            for j in (k + 1)..6 {
                let u = field.rotation_product(k, j);
                let m = u.len();
                for a in 0..m {
                    for b in 0..m {
                        let mut acc = C64::new(0.0, 0.0);
                        for l in 0..m {
                            acc += u[l][a].conj() * u[l][b];
                        }
                        let expected = if a == b { 1.0 } else { 0.0 };
                        assert!(
                            (acc - expected).norm() < 1e-12,
                            "seed {seed}: (UᴴU)({a},{b}) for pair ({k},{j})"
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn angle_determinants_lie_in_the_unit_interval() {
    for seed in 0..INSTANCES {
        let mut r = rng(seed);
        let kernel = random_kernel(&mut r, 8, 0.8);
        for start in 0..7usize {
            for split in start..7 {
                for end in (split + 1)..8 {
                    let v = angle_det(&kernel, start, split, end).unwrap();
                    assert!(
                        v > 0.0 && v <= 1.0 + 1e-12,
                        "seed {seed}: angle determinant {v} at ({start},{split},{end})"
                    );
                }
            }
        }
    }
}

#[test]
fn word_rank_is_a_bijection_respecting_the_order() {
    for seed in 0..INSTANCES {
        let n = 1 + (seed as usize) % 3;
        let a = Alphabet::new(n).unwrap();
        let depth = 4;
        let words = a.words_up_to(depth);
        assert_eq!(words.len(), a.section_size(depth));
        for (i, w) in words.iter().enumerate() {
            assert_eq!(a.rank(w), i, "rank of {w} over N={n}");
            assert_eq!(&a.unrank(i), w);
            assert_eq!(a.l_value(w), i + 1);
            if i + 1 < words.len() {
                assert_eq!(a.succ(w), words[i + 1], "succ at rank {i}");
                assert_eq!(a.pred(&words[i + 1]).unwrap(), *w, "pred at rank {}", i + 1);
            }
            if i > 0 {
                assert!(words[i - 1] < *w, "order at rank {i}");
            }
        }
    }
}

#[test]
fn truncated_spectral_factor_is_dominated_by_the_kernel() {
    for seed in 0..INSTANCES {
        let mut r = rng(seed);
        let size = 10;
        let window = 5;
        let kernel = random_kernel(&mut r, size, 0.8);
        let (theta, _) = spectral_factor(&kernel, size).unwrap();
        // Using only the window rows of Θ undercounts every Gram sum, so
        // K − Θ_wᴴΘ_w must stay positive semidefinite.
        let diff: Vec<Vec<C64>> = (0..window)
            .map(|k| {
                (0..window)
                    .map(|j| {
                        let mut acc = C64::new(0.0, 0.0);
                        for l in 0..window {
                            acc += theta.get(l, k).conj() * theta.get(l, j);
                        }
                        kernel.get(k, j) - acc
                    })
                    .collect()
            })
            .collect();
        let min_eig = min_eigenvalue_hermitian(&diff);
        assert!(
            min_eig >= -1e-10,
            "seed {seed}: windowed factor exceeds the kernel, min eigenvalue {min_eig:e}"
        );
    }
}
