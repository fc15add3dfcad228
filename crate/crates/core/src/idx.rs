//! Packed triangular index arithmetic shared by kernels, parameter fields,
//! and triangular arrays.

/// Offset of `(k, j)`, `k <= j < size`, in a row-major upper triangle
/// including the diagonal. Length of the storage is `size*(size+1)/2`.
#[inline]
pub(crate) fn upper(k: usize, j: usize, size: usize) -> usize {
    debug_assert!(k <= j && j < size);
    k * size - k * (k + 1) / 2 + j
}

/// Offset of `(k, j)`, `k < j < size`, in a row-major strict upper triangle.
/// Length of the storage is `size*(size-1)/2`.
#[inline]
pub(crate) fn strict_upper(k: usize, j: usize, size: usize) -> usize {
    debug_assert!(k < j && j < size);
    k * size - k * (k + 1) / 2 + j - k - 1
}

/// Offset of `(k, j)`, `j <= k < size`, in a row-major lower triangle
/// including the diagonal. Length of the storage is `size*(size+1)/2`.
#[inline]
pub(crate) fn lower(k: usize, j: usize) -> usize {
    debug_assert!(j <= k);
    k * (k + 1) / 2 + j
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn upper_enumerates_row_major() {
        let size = 5;
        let mut expect = 0;
        for k in 0..size {
            for j in k..size {
                assert_eq!(upper(k, j, size), expect);
                expect += 1;
            }
        }
        assert_eq!(expect, size * (size + 1) / 2);
    }

    #[test]
    fn strict_upper_enumerates_row_major() {
        let size = 5;
        let mut expect = 0;
        for k in 0..size {
            for j in (k + 1)..size {
                assert_eq!(strict_upper(k, j, size), expect);
                expect += 1;
            }
        }
        assert_eq!(expect, size * (size - 1) / 2);
    }

    #[test]
    fn lower_enumerates_row_major() {
        let mut expect = 0;
        for k in 0..5 {
            for j in 0..=k {
                assert_eq!(lower(k, j), expect);
                expect += 1;
            }
        }
    }
}
