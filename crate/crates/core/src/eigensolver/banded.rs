//! Banded LU with partial pivoting, used for inverse iteration.

use num_traits::Float;

use crate::scalar::Real;

/// LU factors of a band matrix with `kl` sub- and `ku` super-diagonals.
///
/// Row `i` stores columns `i - kl ..= i + kl + ku`; the extra `kl`
/// super-diagonals absorb fill-in from row interchanges.
#[derive(Debug, Clone)]
pub(crate) struct BandLu<T> {
    n: usize,
    kl: usize,
    ku: usize,
    width: usize,
    data: Vec<T>,
    pivots: Vec<usize>,
}

impl<T: Real> BandLu<T> {
    /// Factors the matrix whose entries are produced by `entry(i, j)` for
    /// `|i - j|` inside the band.
    pub fn factor(n: usize, kl: usize, ku: usize, entry: impl Fn(usize, usize) -> T) -> Self {
        let width = 2 * kl + ku + 1;
        let mut lu = Self {
            n,
            kl,
            ku,
            width,
            data: vec![T::zero(); n * width],
            pivots: vec![0; n],
        };
        let mut scale = T::zero();
        for i in 0..n {
            let lo = i.saturating_sub(kl);
            let hi = (i + ku).min(n - 1);
            for j in lo..=hi {
                let v = entry(i, j);
                scale = Float::max(scale, Float::abs(v));
                *lu.at_mut(i, j) = v;
            }
        }
        let floor = Float::max(scale, T::min_positive_value()) * T::epsilon();

        for k in 0..n {
            let last_row = (k + kl).min(n - 1);
            let mut p = k;
            for i in k + 1..=last_row {
                if Float::abs(lu.at(i, k)) > Float::abs(lu.at(p, k)) {
                    p = i;
                }
            }
            lu.pivots[k] = p;
            let last_col = (k + kl + ku).min(n - 1);
            if p != k {
                for j in k..=last_col {
                    let a = lu.at(k, j);
                    let b = lu.at(p, j);
                    *lu.at_mut(k, j) = b;
                    *lu.at_mut(p, j) = a;
                }
            }
            if Float::abs(lu.at(k, k)) < floor {
                // exactly singular shift: nudge so inverse iteration still works
                *lu.at_mut(k, k) = floor;
            }
            let pivot = lu.at(k, k);
            for i in k + 1..=last_row {
                let factor = lu.at(i, k) / pivot;
                *lu.at_mut(i, k) = factor;
                if factor.is_zero() {
                    continue;
                }
                for j in k + 1..=last_col {
                    let update = factor * lu.at(k, j);
                    *lu.at_mut(i, j) -= update;
                }
            }
        }
        lu
    }

    #[inline]
    fn offset(&self, i: usize, j: usize) -> usize {
        debug_assert!(j + self.kl >= i && j <= i + self.kl + self.ku);
        i * self.width + (j + self.kl - i)
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> T {
        self.data[self.offset(i, j)]
    }

    #[inline]
    fn at_mut(&mut self, i: usize, j: usize) -> &mut T {
        let o = self.offset(i, j);
        &mut self.data[o]
    }

    pub fn solve_in_place(&self, b: &mut [T]) {
        let n = self.n;
        for k in 0..n {
            b.swap(k, self.pivots[k]);
            let bk = b[k];
            for (i, bi) in b
                .iter_mut()
                .enumerate()
                .take((k + self.kl).min(n - 1) + 1)
                .skip(k + 1)
            {
                *bi -= self.at(i, k) * bk;
            }
        }
        for i in (0..n).rev() {
            let last = (i + self.kl + self.ku).min(n - 1);
            let mut s = b[i];
            for (j, &bj) in b.iter().enumerate().take(last + 1).skip(i + 1) {
                s -= self.at(i, j) * bj;
            }
            b[i] = s / self.at(i, i);
        }
    }
}

/// Lower and upper bandwidth of the union of nonzero patterns.
pub(crate) fn bandwidths<T: Real>(n: usize, entry: impl Fn(usize, usize) -> T) -> (usize, usize) {
    let (mut kl, mut ku) = (0, 0);
    for i in 0..n {
        for j in 0..n {
            if !entry(i, j).is_zero() {
                if i > j {
                    kl = kl.max(i - j);
                } else {
                    ku = ku.max(j - i);
                }
            }
        }
    }
    (kl, ku)
}
