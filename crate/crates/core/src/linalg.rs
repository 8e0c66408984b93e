//! Exact linear algebra over the rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Scalar = BigRational;

pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Scalar {
    Scalar::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p/q"` or `"p"` into a reduced rational.
pub fn parse_scalar(text: &str) -> Result<Scalar> {
    let t = text.trim();
    let err = |m: &str| Error::Parse {
        context: format!("{text:?}"),
        message: m.to_string(),
    };
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| err("bad numerator"))?;
    let den: BigInt = den.parse().map_err(|_| err("bad denominator"))?;
    if den.is_zero() {
        return Err(err("zero denominator"));
    }
    Ok(Scalar::new(num, den))
}

/// `p/q` with `q > 0`, or `p` when `q = 1`.
pub fn format_scalar(x: &Scalar) -> String {
    x.to_string()
}

pub fn sign(x: &Scalar) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

/// Rank of a list of vectors (rows).
pub fn rank(rows: &[Vec<Scalar>]) -> usize {
    let mut m: Vec<Vec<Scalar>> = rows.to_vec();
    echelon(&mut m)
}

/// Gaussian elimination in place with first-nonzero pivoting; returns the rank.
fn echelon(m: &mut [Vec<Scalar>]) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let (top, rest) = m.split_at_mut(r + 1);
        let pivot = &top[r];
        for row in rest.iter_mut().filter(|row| !row[c].is_zero()) {
            let f = &row[c] / &pivot[c];
            for (x, y) in row[c..cols].iter_mut().zip(&pivot[c..cols]) {
                *x -= &f * y;
            }
        }
        r += 1;
    }
    r
}

/// Determinant of a square matrix by fraction-free (Bareiss) elimination.
pub fn determinant(matrix: &[Vec<Scalar>]) -> Scalar {
    let n = matrix.len();
    assert!(matrix.iter().all(|r| r.len() == n), "matrix must be square");
    if n == 0 {
        return Scalar::one();
    }
    let mut m = matrix.to_vec();
    let mut sign = Scalar::one();
    let mut prev = Scalar::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return Scalar::zero();
            };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Coordinates of each target in the given basis vectors: returns `c` with
/// `targets[j] = Σ_i c[i][j] · basis[i]`. `None` when some target is outside
/// the span or the basis vectors are dependent.
pub fn coordinates(basis: &[&[Scalar]], targets: &[&[Scalar]]) -> Option<Vec<Vec<Scalar>>> {
    let k = basis.len();
    let d = basis.first().or(targets.first()).map_or(0, |v| v.len());
    // Augmented d × (k + m) system, vectors as columns.
    let mut a: Vec<Vec<Scalar>> = (0..d)
        .map(|row| {
            basis
                .iter()
                .chain(targets.iter())
                .map(|v| v[row].clone())
                .collect()
        })
        .collect();
    let width = k + targets.len();
    let mut pivot_row = 0;
    for c in 0..k {
        let p = (pivot_row..d).find(|&i| !a[i][c].is_zero())?;
        a.swap(pivot_row, p);
        let inv = a[pivot_row][c].recip();
        for x in &mut a[pivot_row][c..width] {
            *x *= &inv;
        }
        let pivot = a[pivot_row].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == pivot_row || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row[c..width].iter_mut().zip(&pivot[c..width]) {
                *x -= &f * y;
            }
        }
        pivot_row += 1;
    }
    if a[k..]
        .iter()
        .any(|row| row[k..].iter().any(|x| !x.is_zero()))
    {
        return None;
    }
    Some((0..k).map(|i| a[i][k..].to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Cofactor expansion along the first row.
    fn laplace(m: &[Vec<Scalar>]) -> Scalar {
        if m.is_empty() {
            return Scalar::one();
        }
        let n = m.len();
        let mut acc = Scalar::zero();
        for c in 0..n {
            let minor: Vec<Vec<Scalar>> = m[1..]
                .iter()
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .filter(|(j, _)| *j != c)
                        .map(|(_, x)| x.clone())
                        .collect()
                })
                .collect();
            let term = &m[0][c] * laplace(&minor);
            if c % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    }

    fn matrix(entries: Vec<i64>, n: usize) -> Vec<Vec<Scalar>> {
        entries
            .chunks(n)
            .map(|r| r.iter().map(|&x| int(x)).collect())
            .collect()
    }

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_scalar("-2/4").unwrap(), frac(-1, 2));
        assert_eq!(parse_scalar("3").unwrap(), int(3));
        assert_eq!(parse_scalar("1/-3").unwrap(), frac(-1, 3));
        assert!(parse_scalar("1/0").is_err());
        assert!(parse_scalar("x").is_err());
        assert_eq!(format_scalar(&frac(-3, 6)), "-1/2");
        assert_eq!(format_scalar(&int(2)), "2");
    }

    #[test]
    fn known_determinants() {
        let v = |a: i64, b: i64, c: i64| vec![frac(a, 6), frac(b, 6), frac(c, 6)];
        // v2, v3, v5 of the six-point configuration, scaled by 6.
        let m = vec![v(0, 3, 6), v(0, 6, 6), v(6, 0, 6)];
        assert_eq!(determinant(&m), frac(-1, 2));
        assert_eq!(determinant(&[]), int(1));
        assert_eq!(determinant(&matrix(vec![0, 1, 1, 0], 2)), int(-1));
    }

    #[test]
    fn coordinates_solve() {
        let b1 = vec![int(1), int(0), int(1)];
        let b2 = vec![int(0), int(1), int(1)];
        let t = vec![int(2), int(3), int(5)];
        let c = coordinates(&[&b1, &b2], &[&t]).unwrap();
        assert_eq!(c, vec![vec![int(2)], vec![int(3)]]);
        let off = vec![int(0), int(0), int(1)];
        assert!(coordinates(&[&b1, &b2], &[&off]).is_none());
    }

    proptest! {
        #[test]
        fn bareiss_matches_laplace(entries in proptest::collection::vec(-4i64..5, 16)) {
            let m = matrix(entries, 4);
            prop_assert_eq!(determinant(&m), laplace(&m));
        }

        #[test]
        fn rank_matches_nonzero_minors(entries in proptest::collection::vec(-2i64..3, 9)) {
            let m = matrix(entries, 3);
            let full = !laplace(&m).is_zero();
            prop_assert_eq!(rank(&m) == 3, full);
        }
    }
}
