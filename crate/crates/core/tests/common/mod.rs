//! Test oracles that share no code with the library.
#![allow(dead_code, clippy::needless_range_loop)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::Rng;

pub type Point = [i64; 3];

fn q(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// Solves the square system `m x = rhs` exactly; `None` if singular.
fn solve_exact(mut m: Vec<Vec<BigRational>>, mut rhs: Vec<BigRational>) -> Option<Vec<BigRational>> {
    let n = m.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        rhs.swap(col, pivot);
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = &m[r][col] / &m[col][col];
                for c in col..n {
                    let d = &f * &m[col][c];
                    m[r][c] -= d;
                }
                let d = &f * &rhs[col];
                rhs[r] -= d;
            }
        }
    }
    Some((0..n).map(|i| &rhs[i] / &m[i][i]).collect())
}

/// Whether the convex hulls of `a` and `b` meet, for five points in general
/// position in R^3 split into two nonempty parts. Solves
/// `sum la_i a_i = sum mu_j b_j`, `sum la = 1`, `sum mu = 1` exactly; the
/// hulls meet iff the unique solution is nonnegative. The system is singular
/// only when the affine dependency of the five points sums to zero on each
/// side, and then no common point exists.
pub fn hulls_intersect(a: &[Point], b: &[Point]) -> bool {
    assert_eq!(a.len() + b.len(), 5);
    assert!(!a.is_empty() && !b.is_empty());
    let mut m = vec![vec![BigRational::zero(); 5]; 5];
    for (j, p) in a.iter().enumerate() {
        for k in 0..3 {
            m[k][j] = q(p[k]);
        }
        m[3][j] = q(1);
    }
    for (j, p) in b.iter().enumerate() {
        let col = a.len() + j;
        for k in 0..3 {
            m[k][col] = -q(p[k]);
        }
        m[4][col] = q(1);
    }
    let rhs = vec![q(0), q(0), q(0), q(1), q(1)];
    match solve_exact(m, rhs) {
        Some(x) => x.iter().all(|v| !v.is_negative()),
        None => false,
    }
}

/// Sign of the 4x4 determinant of homogenized points, by cofactor expansion
/// over big integers.
pub fn orientation(p: &[Point; 4]) -> i8 {
    let rows: Vec<[BigInt; 4]> = p
        .iter()
        .map(|x| {
            [
                BigInt::from(1),
                BigInt::from(x[0]),
                BigInt::from(x[1]),
                BigInt::from(x[2]),
            ]
        })
        .collect();
    fn det3(m: [[&BigInt; 3]; 3]) -> BigInt {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }
    let mut det = BigInt::zero();
    for c in 0..4 {
        let cols: Vec<usize> = (0..4).filter(|&k| k != c).collect();
        let minor = [
            [&rows[1][cols[0]], &rows[1][cols[1]], &rows[1][cols[2]]],
            [&rows[2][cols[0]], &rows[2][cols[1]], &rows[2][cols[2]]],
            [&rows[3][cols[0]], &rows[3][cols[1]], &rows[3][cols[2]]],
        ];
        let term = &rows[0][c] * det3(minor);
        if c % 2 == 0 {
            det += term;
        } else {
            det -= term;
        }
    }
    if det.is_positive() {
        1
    } else if det.is_negative() {
        -1
    } else {
        0
    }
}

/// `n` random integer points with every 4-subset affinely independent.
pub fn random_general_position(rng: &mut impl Rng, n: usize, range: i64) -> Vec<Point> {
    'retry: loop {
        let pts: Vec<Point> = (0..n)
            .map(|_| {
                [
                    rng.gen_range(-range..=range),
                    rng.gen_range(-range..=range),
                    rng.gen_range(-range..=range),
                ]
            })
            .collect();
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    for d in c + 1..n {
                        if orientation(&[pts[a], pts[b], pts[c], pts[d]]) == 0 {
                            continue 'retry;
                        }
                    }
                }
            }
        }
        return pts;
    }
}

/// Points `(t, t^2, t^3)` for `t = 1..=n`.
pub fn moment_curve(n: usize) -> Vec<Point> {
    (1..=n as i64).map(|t| [t, t * t, t * t * t]).collect()
}

pub fn all_sign_vectors(len: usize) -> impl Iterator<Item = Vec<bool>> {
    (0u64..1 << len).map(move |mask| (0..len).map(|i| mask >> i & 1 == 1).collect())
}
