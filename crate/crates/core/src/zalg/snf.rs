use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::matrix::IntMatrix;

/// `U · A · V = D` with `U`, `V` unimodular and `D` in Smith normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithDecomposition {
    /// Nonzero-or-zero diagonal of `D`, length `min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        let n = self.d.rows().min(self.d.cols());
        (0..n).map(|i| self.d[(i, i)].clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|d| !d.is_zero()).count()
    }
}

/// Smallest nonzero |a_ij| in the trailing block starting at (t, t).
/// Ties go to the lowest row, then the lowest column.
fn find_pivot(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, BigInt)> = None;
    for i in t..a.rows() {
        for j in t..a.cols() {
            let v = &a[(i, j)];
            if v.is_zero() {
                continue;
            }
            let abs = v.abs();
            if best.as_ref().is_none_or(|(_, _, b)| abs < *b) {
                best = Some((i, j, abs));
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

pub fn smith_normal_form(input: &IntMatrix) -> SmithDecomposition {
    let m = input.rows();
    let n = input.cols();
    let mut a = input.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);

    for t in 0..m.min(n) {
        loop {
            let Some((pi, pj)) = find_pivot(&a, t) else {
                return SmithDecomposition { u, d: a, v };
            };
            a.swap_rows(t, pi);
            u.swap_rows(t, pi);
            a.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let pivot = a[(t, t)].clone();
            let mut dirty = false;
            for i in t + 1..m {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let (q, r) = a[(i, t)].div_rem(&pivot);
                let neg = -q;
                a.add_row_multiple(i, t, &neg);
                u.add_row_multiple(i, t, &neg);
                dirty |= !r.is_zero();
            }
            for j in t + 1..n {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let (q, r) = a[(t, j)].div_rem(&pivot);
                let neg = -q;
                a.add_col_multiple(j, t, &neg);
                v.add_col_multiple(j, t, &neg);
                dirty |= !r.is_zero();
            }
            if dirty {
                continue;
            }

            // Row and column are clear; enforce divisibility on the trailing block.
            let offender = (t + 1..m).find(|&i| {
                (t + 1..n).any(|j| !a[(i, j)].is_multiple_of(&pivot))
            });
            match offender {
                Some(i) => {
                    let one = BigInt::from(1);
                    a.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if a[(t, t)].is_negative() {
            a.negate_row(t);
            u.negate_row(t);
        }
    }
    SmithDecomposition { u, d: a, v }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag_of(rows: &[Vec<i64>]) -> Vec<i64> {
        use num_traits::ToPrimitive;
        let a = IntMatrix::from_rows(rows);
        let s = smith_normal_form(&a);
        assert_eq!(&(&s.u * &a) * &s.v, s.d);
        s.diagonal().iter().map(|d| d.to_i64().unwrap()).collect()
    }

    #[test]
    fn two_by_two_examples() {
        // hand reduction: gcd of entries is 1, |det| = 5
        assert_eq!(diag_of(&[vec![-2, 3], vec![3, -2]]), vec![1, 5]);
        // rows are negatives of each other; gcd 2, rank 1
        assert_eq!(diag_of(&[vec![-2, 2], vec![2, -2]]), vec![2, 0]);
    }

    #[test]
    fn identity_is_fixed() {
        assert_eq!(
            diag_of(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]),
            vec![1, 1, 1]
        );
    }

    #[test]
    fn divisibility_needs_mixing() {
        // diag(2,3) is diagonal but not in normal form
        assert_eq!(diag_of(&[vec![2, 0], vec![0, 3]]), vec![1, 6]);
        assert_eq!(diag_of(&[vec![4, 0, 0], vec![0, 6, 0], vec![0, 0, 10]]), vec![2, 2, 60]);
    }

    #[test]
    fn degenerate_shapes() {
        let s = smith_normal_form(&IntMatrix::zeros(0, 0));
        assert_eq!(s.rank(), 0);
        let s = smith_normal_form(&IntMatrix::zeros(2, 0));
        assert_eq!(s.u, IntMatrix::identity(2));
        assert_eq!(diag_of(&[vec![0, 6, -4]]), vec![2]);
    }
}
