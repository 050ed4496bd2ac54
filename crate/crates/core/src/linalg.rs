//! Dense vector helpers over [`Scalar`]. Plain slices keep the arithmetic
//! usable with non-`Copy` scalars such as `BigRational`.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub fn check_dim<T>(v: &[T], expected: usize) -> Result<()> {
    if v.len() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            got: v.len(),
        });
    }
    Ok(())
}

pub fn zeros<T: Scalar>(n: usize) -> Vec<T> {
    vec![T::zero(); n]
}

pub fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

pub fn norm_sq<T: Scalar>(a: &[T]) -> T {
    dot(a, a)
}

pub fn add<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(x, y)| x.clone() + y.clone()).collect()
}

pub fn sub<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(x, y)| x.clone() - y.clone()).collect()
}

pub fn scale<T: Scalar>(alpha: &T, a: &[T]) -> Vec<T> {
    a.iter().map(|x| alpha.clone() * x.clone()).collect()
}

/// `a + alpha * b`
pub fn axpy<T: Scalar>(a: &[T], alpha: &T, b: &[T]) -> Vec<T> {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.clone() + alpha.clone() * y.clone())
        .collect()
}

pub fn dist_sq<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (x, y)| {
        let d = x.clone() - y.clone();
        acc + d.clone() * d
    })
}

pub fn mat_vec<T: Scalar>(m: &[Vec<T>], v: &[T]) -> Vec<T> {
    m.iter().map(|row| dot(row, v)).collect()
}

/// Solves `m x = rhs` by Gaussian elimination with partial pivoting.
/// Returns `None` for singular systems.
pub fn solve<T: Scalar>(m: &[Vec<T>], rhs: &[T]) -> Option<Vec<T>> {
    let n = rhs.len();
    let mut a: Vec<Vec<T>> = m
        .iter()
        .zip(rhs)
        .map(|(row, r)| {
            let mut row = row.clone();
            row.push(r.clone());
            row
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| {
            a[i][col]
                .abs()
                .partial_cmp(&a[j][col].abs())
                .unwrap_or(std::cmp::Ordering::Equal)
        })?;
        if a[pivot][col].is_zero() {
            return None;
        }
        a.swap(col, pivot);
        for row in col + 1..n {
            let factor = a[row][col].clone() / a[col][col].clone();
            if factor.is_zero() {
                continue;
            }
            for k in col..=n {
                let delta = factor.clone() * a[col][k].clone();
                a[row][k] = a[row][k].clone() - delta;
            }
        }
    }
    let mut x = zeros::<T>(n);
    for row in (0..n).rev() {
        let mut acc = a[row][n].clone();
        for k in row + 1..n {
            acc = acc - a[row][k].clone() * x[k].clone();
        }
        x[row] = acc / a[row][row].clone();
    }
    Some(x)
}

/// Positive semidefiniteness of a symmetric matrix via symmetric elimination.
///
/// A zero pivot is accepted only if the rest of its row is zero as well.
/// `tol` is an absolute threshold; pass zero for exact scalars.
pub fn is_psd<T: Scalar>(m: &[Vec<T>], tol: &T) -> bool {
    let n = m.len();
    let mut a: Vec<Vec<T>> = m.to_vec();
    for k in 0..n {
        let pivot = a[k][k].clone();
        if pivot < -tol.clone() {
            return false;
        }
        if pivot <= tol.clone() {
            if (k + 1..n).any(|j| a[k][j].abs() > tol.clone()) {
                return false;
            }
            continue;
        }
        for i in k + 1..n {
            let factor = a[i][k].clone() / pivot.clone();
            for j in k + 1..n {
                let delta = factor.clone() * a[k][j].clone();
                a[i][j] = a[i][j].clone() - delta;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::from_ratio(n, d)
    }

    #[test]
    fn solve_exact_system() {
        let m = vec![vec![q(2, 1), q(1, 1)], vec![q(1, 1), q(3, 1)]];
        let x = solve(&m, &[q(3, 1), q(5, 1)]).unwrap();
        assert_eq!(x, vec![q(4, 5), q(7, 5)]);
        let singular = vec![vec![q(1, 1), q(2, 1)], vec![q(2, 1), q(4, 1)]];
        assert!(solve(&singular, &[q(1, 1), q(1, 1)]).is_none());
    }

    #[test]
    fn psd_detection() {
        let zero = q(0, 1);
        let psd = vec![vec![q(2, 1), q(1, 1)], vec![q(1, 1), q(2, 1)]];
        assert!(is_psd(&psd, &zero));
        let singular_psd = vec![vec![q(1, 1), q(1, 1)], vec![q(1, 1), q(1, 1)]];
        assert!(is_psd(&singular_psd, &zero));
        let indefinite = vec![vec![q(1, 1), q(2, 1)], vec![q(2, 1), q(1, 1)]];
        assert!(!is_psd(&indefinite, &zero));
        let zero_pivot_bad = vec![vec![q(0, 1), q(1, 1)], vec![q(1, 1), q(1, 1)]];
        assert!(!is_psd(&zero_pivot_bad, &zero));
    }

    #[test]
    fn vector_ops() {
        let a = [1.0, 2.0, 2.0];
        assert_eq!(norm_sq(&a), 9.0);
        assert_eq!(axpy(&a, &2.0, &[1.0, 0.0, -1.0]), vec![3.0, 2.0, 0.0]);
        assert_eq!(dist_sq(&a, &[1.0, 2.0, 0.0]), 4.0);
        assert!(check_dim(&a, 2).is_err());
    }
}
