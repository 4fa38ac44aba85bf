//! Exact integer linear algebra over arbitrary-precision integers.
//!
//! Everything here is fraction-free: intermediate values stay integral and
//! every division is exact. Rationals only appear in the final inverse.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type IntMatrix = Vec<Vec<BigInt>>;
pub type RatMatrix = Vec<Vec<BigRational>>;

pub fn to_big(m: &[Vec<i64>]) -> IntMatrix {
    m.iter()
        .map(|row| row.iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

/// Determinant by Bareiss elimination with row pivoting.
pub fn determinant(m: &IntMatrix) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.clone();
    let mut sign_flip = false;
    let mut prev = BigInt::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| !a[r][k].is_zero()) else {
            return BigInt::zero();
        };
        if p != k {
            a.swap(p, k);
            sign_flip = !sign_flip;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[k][k] * &a[i][j] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if sign_flip {
        -det
    } else {
        det
    }
}

/// Leading principal minors `det(M[..k, ..k])` for `k = 1..=n`.
///
/// Bareiss without pivoting produces these as its successive pivots; a zero
/// pivot stops that shortcut, and the remaining minors are computed directly.
pub fn leading_minors(m: &IntMatrix) -> Vec<BigInt> {
    let n = m.len();
    let mut minors = Vec::with_capacity(n);
    let mut a = m.clone();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            break;
        }
        minors.push(a[k][k].clone());
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[k][k] * &a[i][j] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    for k in minors.len()..n {
        let sub: IntMatrix = m[..=k].iter().map(|row| row[..=k].to_vec()).collect();
        minors.push(determinant(&sub));
    }
    minors
}

/// Exact inverse by fraction-free Gauss-Jordan elimination on `[M | I]`.
///
/// Returns `(det, inverse)`, or `None` when `M` is singular. The left block
/// ends as `d·I` where `d = ±det`, and the right block as `d·M⁻¹`.
pub fn inverse(m: &IntMatrix) -> Option<(BigInt, RatMatrix)> {
    let n = m.len();
    let mut a: IntMatrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }));
            r
        })
        .collect();
    let mut prev = BigInt::one();
    let mut sign_flip = false;
    for k in 0..n {
        let p = (k..n).find(|&r| !a[r][k].is_zero())?;
        if p != k {
            a.swap(p, k);
            sign_flip = !sign_flip;
        }
        let pivot_row = a[k].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == k {
                continue;
            }
            let factor = row[k].clone();
            for j in 0..2 * n {
                if j == k {
                    continue;
                }
                let v = &pivot_row[k] * &row[j] - &factor * &pivot_row[j];
                row[j] = v / &prev;
            }
            row[k] = BigInt::zero();
        }
        prev = pivot_row[k].clone();
    }
    let d = prev;
    let inv = a
        .iter()
        .map(|row| {
            row[n..]
                .iter()
                .map(|x| BigRational::new(x.clone(), d.clone()))
                .collect()
        })
        .collect();
    let det = if sign_flip { -d } else { d };
    Some((det, inv))
}

/// `a · b` for an integer `a` and a rational `b`.
pub fn mul_int_rat(a: &IntMatrix, b: &RatMatrix) -> RatMatrix {
    let n = a.len();
    let p = b.first().map_or(0, Vec::len);
    (0..n)
        .map(|i| {
            (0..p)
                .map(|j| {
                    a[i].iter()
                        .zip(b.iter())
                        .fold(BigRational::zero(), |acc, (x, row)| {
                            acc + BigRational::from_integer(x.clone()) * &row[j]
                        })
                })
                .collect()
        })
        .collect()
}

pub fn is_identity(m: &RatMatrix) -> bool {
    m.iter().enumerate().all(|(i, row)| {
        row.iter().enumerate().all(|(j, x)| {
            if i == j {
                x.is_one()
            } else {
                x.is_zero()
            }
        })
    })
}

/// Integer matrix if every entry of `m` is an integer fitting in an `i64`.
pub fn integral_i64(m: &RatMatrix) -> Option<Vec<Vec<i64>>> {
    use num_traits::ToPrimitive;
    m.iter()
        .map(|row| {
            row.iter()
                .map(|x| if x.is_integer() { x.numer().to_i64() } else { None })
                .collect()
        })
        .collect()
}

pub fn is_unit(x: &BigInt) -> bool {
    x.abs().is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Permutation-expansion determinant; independent of elimination.
    fn leibniz(m: &[Vec<i64>]) -> BigInt {
        fn perms(n: usize) -> Vec<Vec<usize>> {
            if n == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for p in perms(n - 1) {
                for pos in 0..n {
                    let mut q = p.clone();
                    q.insert(pos, n - 1);
                    out.push(q);
                }
            }
            out
        }
        let n = m.len();
        let mut total = BigInt::zero();
        for p in perms(n) {
            let mut inversions = 0;
            for i in 0..n {
                for j in i + 1..n {
                    if p[i] > p[j] {
                        inversions += 1;
                    }
                }
            }
            let mut term = BigInt::one();
            for (i, &pi) in p.iter().enumerate() {
                term *= m[i][pi];
            }
            if inversions % 2 == 1 {
                term = -term;
            }
            total += term;
        }
        total
    }

    fn sigma237() -> Vec<Vec<i64>> {
        vec![
            vec![-1, 1, 1, 1],
            vec![1, -2, 0, 0],
            vec![1, 0, -3, 0],
            vec![1, 0, 0, -7],
        ]
    }

    #[test]
    fn determinant_matches_leibniz() {
        let q = sigma237();
        assert_eq!(leibniz(&q), BigInt::from(1));
        assert_eq!(determinant(&to_big(&q)), BigInt::from(1));

        // zero top-left entry forces a pivot swap
        let m = vec![vec![0, 2, 1], vec![3, 1, 4], vec![5, 9, 2]];
        assert_eq!(determinant(&to_big(&m)), leibniz(&m));
    }

    #[test]
    fn minors_of_sigma237() {
        let minors = leading_minors(&to_big(&sigma237()));
        let expect: Vec<BigInt> = [-1, 1, -1, 1].iter().map(|&x| BigInt::from(x)).collect();
        assert_eq!(minors, expect);
    }

    #[test]
    fn minors_with_zero_pivot() {
        let m = vec![vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 2]];
        let minors = leading_minors(&to_big(&m));
        let expect: Vec<BigInt> = [0, -1, -2].iter().map(|&x| BigInt::from(x)).collect();
        assert_eq!(minors, expect);
    }

    #[test]
    fn inverse_round_trips() {
        let q = to_big(&sigma237());
        let (det, inv) = inverse(&q).unwrap();
        assert_eq!(det, BigInt::from(1));
        assert!(is_identity(&mul_int_rat(&q, &inv)));
        assert!(integral_i64(&inv).is_some());

        let m = vec![vec![0, 2, 1], vec![3, 1, 4], vec![5, 9, 2]];
        let (det, inv) = inverse(&to_big(&m)).unwrap();
        assert_eq!(det, leibniz(&m));
        assert!(is_identity(&mul_int_rat(&to_big(&m), &inv)));
    }

    #[test]
    fn singular_has_no_inverse() {
        let m = vec![vec![1, 2], vec![2, 4]];
        assert!(inverse(&to_big(&m)).is_none());
        assert!(determinant(&to_big(&m)).is_zero());
    }

    #[test]
    fn scalar_inverse() {
        let (det, inv) = inverse(&to_big(&[vec![-2]])).unwrap();
        assert_eq!(det, BigInt::from(-2));
        assert_eq!(inv[0][0], BigRational::new((-1).into(), 2.into()));
    }

    proptest::proptest! {
        #[test]
        fn random_small_matrices(entries in proptest::collection::vec(-6i64..=6, 25), n in 1usize..=5) {
            let m: Vec<Vec<i64>> = (0..n).map(|i| entries[i * 5..i * 5 + n].to_vec()).collect();
            let big = to_big(&m);
            let d = leibniz(&m);
            proptest::prop_assert_eq!(determinant(&big), d.clone());
            let minors = leading_minors(&big);
            proptest::prop_assert_eq!(minors.last().unwrap(), &d);
            match inverse(&big) {
                Some((det, inv)) => {
                    proptest::prop_assert_eq!(det, d);
                    proptest::prop_assert!(is_identity(&mul_int_rat(&big, &inv)));
                }
                None => proptest::prop_assert!(d.is_zero()),
            }
        }
    }
}
