//! Small dense exact linear algebra over [`Rational`].

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::rational::Rational;

pub type Matrix = Vec<Vec<Rational>>;

/// Row-reduces `m` in place to reduced echelon form, returning the pivot
/// columns.
pub fn rref(m: &mut Matrix) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for k in c..cols {
                    let delta = &f * &m[r][k];
                    m[i][k] -= delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &[Vec<Rational>]) -> usize {
    rref(&mut m.to_vec()).len()
}

/// Affine dimension of a point set (`-1` encoded as `None` for no points).
pub fn affine_rank(points: &[Vec<Rational>]) -> Option<usize> {
    let (first, rest) = points.split_first()?;
    let diffs: Matrix = rest
        .iter()
        .map(|p| p.iter().zip(first).map(|(a, b)| a - b).collect())
        .collect();
    Some(rank(&diffs))
}

/// Inverse of a square matrix, or `None` if singular.
pub fn inverse(m: &[Vec<Rational>]) -> Option<Matrix> {
    let n = m.len();
    let mut aug: Matrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    let piv = rref(&mut aug);
    if piv.len() < n || piv[n - 1] != n - 1 {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn mat_vec(m: &[Vec<Rational>], v: &[Rational]) -> Vec<Rational> {
    m.iter().map(|row| dot(row, v)).collect()
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    let mut acc = Rational::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += x * y;
        }
    }
    acc
}

/// A basis vector of the null space when it is one-dimensional.
pub fn null_vector(m: &[Vec<Rational>], cols: usize) -> Option<Vec<Rational>> {
    let mut a = m.to_vec();
    let piv = rref(&mut a);
    if piv.len() + 1 != cols {
        return None;
    }
    let free = (0..cols).find(|c| !piv.contains(c))?;
    let mut v = vec![Rational::zero(); cols];
    v[free] = Rational::one();
    for (r, &c) in piv.iter().enumerate() {
        v[c] = -a[r][free].clone();
    }
    Some(v)
}

/// Exact determinant. Rows are cleared of denominators and reduced with
/// fraction-free elimination, first in `i128` and in `BigInt` on overflow.
pub fn det(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    if n == 0 {
        return Rational::one();
    }
    let mut scale = BigInt::one();
    let rows: Vec<Vec<BigInt>> = m
        .iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            scale *= &l;
            row.iter().map(|x| x.numer() * (&l / x.denom())).collect()
        })
        .collect();
    let d = match rows
        .iter()
        .map(|r| r.iter().map(|x| x.to_i128()).collect::<Option<Vec<_>>>())
        .collect::<Option<Vec<_>>>()
    {
        Some(small) => bareiss_i128(small).map(BigInt::from).unwrap_or_else(|| bareiss_big(rows)),
        None => bareiss_big(rows),
    };
    Rational::new(d, scale)
}

fn bareiss_i128(mut a: Vec<Vec<i128>>) -> Option<i128> {
    let n = a.len();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| a[i][k] != 0) else {
                return Some(0);
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = a[i][j]
                    .checked_mul(a[k][k])?
                    .checked_sub(a[i][k].checked_mul(a[k][j])?)?;
                a[i][j] = v / prev;
            }
        }
        prev = a[k][k];
    }
    Some(sign * a[n - 1][n - 1])
}

fn bareiss_big(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(p) => {
                    a.swap(k, p);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Absolute value of [`det`].
pub fn abs_det(m: &[Vec<Rational>]) -> Rational {
    det(m).abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, q};

    fn mat(rows: &[&[i64]]) -> Matrix {
        rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
    }

    // cofactor expansion, independent of elimination
    fn det_cofactor(m: &Matrix) -> Rational {
        let n = m.len();
        if n == 1 {
            return m[0][0].clone();
        }
        let mut acc = Rational::zero();
        for c in 0..n {
            let minor: Matrix = m[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|(k, _)| *k != c).map(|(_, x)| x.clone()).collect())
                .collect();
            let term = &m[0][c] * det_cofactor(&minor);
            if c % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    }

    #[test]
    fn determinants() {
        assert_eq!(det(&mat(&[&[2, 0], &[0, 3]])), int(6));
        assert_eq!(det(&mat(&[&[0, 1], &[1, 0]])), int(-1));
        assert_eq!(det(&mat(&[&[1, 2], &[2, 4]])), int(0));
        let m = vec![vec![q(1, 2), q(1, 3), int(1)], vec![q(-2, 5), int(0), q(7, 3)], vec![int(4), q(1, 7), q(-1, 2)]];
        assert_eq!(det(&m), det_cofactor(&m));
        let big = vec![vec![q(1 << 40, 3), int(1)], vec![int(1), q(1 << 41, 7)]];
        assert_eq!(det(&big), det_cofactor(&big));
    }

    #[test]
    fn inverse_and_null() {
        let m = mat(&[&[1, 1], &[0, 1]]);
        let inv = inverse(&m).unwrap();
        assert_eq!(inv, mat(&[&[1, -1], &[0, 1]]));
        assert!(inverse(&mat(&[&[1, 2], &[2, 4]])).is_none());
        let v = null_vector(&mat(&[&[1, 1, 0], &[0, 1, 1]]), 3).unwrap();
        assert_eq!(v, vec![int(1), int(-1), int(1)]);
        assert_eq!(affine_rank(&[vec![int(0), int(0)], vec![int(1), int(1)], vec![int(2), int(2)]]), Some(1));
    }
}
