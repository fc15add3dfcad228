//! Shared oracles for the integration suites: seeded random inputs, an
//! independent Jacobi eigenvalue routine (for semidefiniteness checks), and
//! finite differences (for derivative checks). Everything is deterministic
//! given the seed.

#![allow(dead_code)]

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use szegokit::{GammaField, MomentKernel, C64};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random parameter field: diagonal in `[0.5, 2]`, `γ` uniform on the disk
/// of radius `max_abs`.
pub fn random_field(rng: &mut ChaCha8Rng, size: usize, max_abs: f64) -> GammaField<C64> {
    let diag: Vec<f64> = (0..size).map(|_| rng.gen_range(0.5..2.0)).collect();
    let mut gamma = Vec::with_capacity(size * (size - 1) / 2);
    for _ in 0..size * (size - 1) / 2 {
        // Uniform on the disk via rejection.
        loop {
            let re = rng.gen_range(-1.0..1.0);
            let im = rng.gen_range(-1.0..1.0);
            if re * re + im * im < 1.0 {
                gamma.push(C64::new(re * max_abs, im * max_abs));
                break;
            }
        }
    }
    GammaField::new(diag, gamma).expect("parameters inside the disk")
}

/// Random strictly positive kernel, obtained by reconstructing a random
/// field (every parameter choice in the open disk gives one).
pub fn random_kernel(rng: &mut ChaCha8Rng, size: usize, max_abs: f64) -> MomentKernel<C64> {
    random_field(rng, size, max_abs)
        .reconstruct_moments(size)
        .expect("reconstruction succeeds on valid fields")
}

/// Largest absolute entry difference between two kernels of equal size.
pub fn kernel_deviation(a: &MomentKernel<C64>, b: &MomentKernel<C64>) -> f64 {
    assert_eq!(a.size(), b.size());
    let mut sup = 0.0f64;
    for k in 0..a.size() {
        for j in k..a.size() {
            sup = sup.max((a.get(k, j) - b.get(k, j)).norm());
        }
    }
    sup
}

/// Largest parameter difference between two fields of equal size (diagonal
/// and `γ` entries).
pub fn field_deviation(a: &GammaField<C64>, b: &GammaField<C64>) -> f64 {
    assert_eq!(a.size(), b.size());
    let mut sup = 0.0f64;
    for k in 0..a.size() {
        sup = sup.max((a.diag(k) - b.diag(k)).abs());
        for j in (k + 1)..a.size() {
            sup = sup.max((a.gamma(k, j) - b.gamma(k, j)).norm());
        }
    }
    sup
}

/// Smallest eigenvalue of a Hermitian matrix given as dense rows, computed
/// by cyclic Jacobi on the real-symmetric embedding
/// `[[Re A, −Im A], [Im A, Re A]]` (whose spectrum is that of `A`, doubled).
pub fn min_eigenvalue_hermitian(a: &[Vec<C64>]) -> f64 {
    let n = a.len();
    let m = 2 * n;
    let mut s = vec![vec![0.0f64; m]; m];
    for i in 0..n {
        for j in 0..n {
            s[i][j] = a[i][j].re;
            s[i][j + n] = -a[i][j].im;
            s[i + n][j] = a[i][j].im;
            s[i + n][j + n] = a[i][j].re;
        }
    }
    jacobi_min_eigenvalue(&mut s)
}

fn jacobi_min_eigenvalue(a: &mut [Vec<f64>]) -> f64 {
    let n = a.len();
    for _sweep in 0..60 {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[p][q] * a[p][q];
            }
        }
        if off < 1e-28 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[i][i]).fold(f64::INFINITY, f64::min)
}

/// Central finite difference of a scalar function.
pub fn central_difference(f: impl Fn(f64) -> C64, x: f64, h: f64) -> C64 {
    (f(x + h) - f(x - h)) / C64::new(2.0 * h, 0.0)
}

#[cfg(test)]
mod oracle_tests {
    #[test]
    fn jacobi_matches_hand_eigenvalues() {
        use super::{min_eigenvalue_hermitian, C64};
        // Symmetric [[2,1],[1,2]] has eigenvalues 1 and 3.
        let a = vec![
            vec![C64::new(2.0, 0.0), C64::new(1.0, 0.0)],
            vec![C64::new(1.0, 0.0), C64::new(2.0, 0.0)],
        ];
        assert!((min_eigenvalue_hermitian(&a) - 1.0).abs() < 1e-12);
        // Hermitian [[1, i],[−i, 1]] has eigenvalues 0 and 2.
        let b = vec![
            vec![C64::new(1.0, 0.0), C64::new(0.0, 1.0)],
            vec![C64::new(0.0, -1.0), C64::new(1.0, 0.0)],
        ];
        assert!(min_eigenvalue_hermitian(&b).abs() < 1e-12);
    }
}
