//! Exact rational determinant and inverse by Gaussian elimination.

use num_traits::{One, Zero};

use crate::ring::rational::int;
use crate::ring::Rational;

pub type Matrix = Vec<Vec<Rational>>;

pub fn from_ints(m: &[Vec<i64>]) -> Matrix {
    m.iter().map(|row| row.iter().map(|&v| int(v)).collect()).collect()
}

pub fn det(m: &Matrix) -> Rational {
    let n = m.len();
    let mut a = m.clone();
    let mut acc = Rational::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Rational::zero();
        };
        if piv != col {
            a.swap(piv, col);
            acc = -acc;
        }
        let p = a[col][col].clone();
        acc *= &p;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &p;
            for c in col..n {
                let v = &f * &a[col][c];
                a[r][c] -= v;
            }
        }
    }
    acc
}

/// `None` when singular.
pub fn inverse(m: &Matrix) -> Option<Matrix> {
    let n = m.len();
    let mut a: Matrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(piv, col);
        let p = a[col][col].clone();
        for v in a[col].iter_mut() {
            *v /= &p;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for c in 0..2 * n {
                let v = &f * &a[col][c];
                a[r][c] -= v;
            }
        }
    }
    Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

pub fn mul(a: &Matrix, b: &Matrix) -> Matrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).fold(Rational::zero(), |acc, k| acc + &row[k] * &b[k][j]))
                .collect()
        })
        .collect()
}

pub fn transpose(a: &Matrix) -> Matrix {
    let cols = a.first().map_or(0, Vec::len);
    (0..cols).map(|j| a.iter().map(|row| row[j].clone()).collect()).collect()
}

/// Whether the symmetric matrix is positive semidefinite, via the signs of
/// all principal minors.
pub fn is_psd(m: &Matrix) -> bool {
    let n = m.len();
    (1u32..(1 << n)).all(|mask| {
        let idx: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let sub: Matrix = idx
            .iter()
            .map(|&i| idx.iter().map(|&j| m[i][j].clone()).collect())
            .collect();
        det(&sub) >= Rational::zero()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::rational::ratio;

    #[test]
    fn det_and_inverse() {
        let k = from_ints(&[vec![3, 1], vec![1, 3]]);
        assert_eq!(det(&k), int(8));
        let inv = inverse(&k).unwrap();
        assert_eq!(inv[0][0], ratio(3, 8));
        assert_eq!(inv[0][1], ratio(-1, 8));
        let id = mul(&k, &inv);
        assert_eq!(id, from_ints(&[vec![1, 0], vec![0, 1]]));
    }

    #[test]
    fn singular() {
        let k = from_ints(&[vec![1, 2], vec![2, 4]]);
        assert!(det(&k).is_zero());
        assert!(inverse(&k).is_none());
        let z = from_ints(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(det(&z), int(-1));
    }

    #[test]
    fn psd() {
        assert!(is_psd(&from_ints(&[vec![2, 1], vec![1, 2]])));
        assert!(!is_psd(&from_ints(&[vec![1, 2], vec![2, 1]])));
    }
}
