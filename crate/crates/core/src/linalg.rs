//! Exact dense linear algebra over the rationals.
//!
//! Elimination runs fraction-free (Bareiss) on integer matrices obtained by
//! clearing row denominators, which keeps intermediate entries as single
//! BigInt products instead of deep rational trees.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::scalar::ExactScalar;

/// Clears denominators row by row. Returns the integer matrix and the factor
/// each row was multiplied by (positive).
fn clear_rows(m: &[Vec<ExactScalar>]) -> (Vec<Vec<BigInt>>, Vec<BigInt>) {
    let mut out = Vec::with_capacity(m.len());
    let mut mults = Vec::with_capacity(m.len());
    for row in m {
        let mut l = BigInt::one();
        for x in row {
            l = l.lcm(x.denom());
        }
        out.push(row.iter().map(|x| x.numer() * (&l / x.denom())).collect());
        mults.push(l);
    }
    (out, mults)
}

fn exact_div(a: BigInt, b: &BigInt) -> BigInt {
    let (q, r) = a.div_rem(b);
    debug_assert!(r.is_zero(), "inexact division in fraction-free elimination");
    q
}

/// Fraction-free row echelon form. Returns (echelon matrix, pivot columns, sign flips).
fn bareiss(mut m: Vec<Vec<BigInt>>) -> (Vec<Vec<BigInt>>, Vec<usize>, bool) {
    let rows = m.len();
    if rows == 0 {
        return (m, vec![], false);
    }
    let cols = m[0].len();
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut flipped = false;
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        if p != r {
            m.swap(p, r);
            flipped = !flipped;
        }
        for i in r + 1..rows {
            for j in 0..cols {
                if j == c {
                    continue;
                }
                let t = &m[i][j] * &m[r][c] - &m[i][c] * &m[r][j];
                m[i][j] = exact_div(t, &prev);
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    (m, pivots, flipped)
}

/// Rank of a rational matrix.
pub fn rank(m: &[Vec<ExactScalar>]) -> usize {
    if m.is_empty() {
        return 0;
    }
    let (im, _) = clear_rows(m);
    let (_, pivots, _) = bareiss(im);
    pivots.len()
}

/// Determinant of a square rational matrix.
pub fn det(m: &[Vec<ExactScalar>]) -> ExactScalar {
    let n = m.len();
    assert!(m.iter().all(|r| r.len() == n), "determinant of a non-square matrix");
    if n == 0 {
        return ExactScalar::one();
    }
    let (im, mults) = clear_rows(m);
    let (ech, pivots, flipped) = bareiss(im);
    if pivots.len() < n {
        return ExactScalar::zero();
    }
    // Bareiss: the last pivot is the determinant of the integer matrix.
    let mut d = BigRational::from_integer(ech[n - 1][n - 1].clone());
    if flipped {
        d = -d;
    }
    let mut denom = BigInt::one();
    for f in mults {
        denom *= f;
    }
    d / BigRational::from_integer(denom)
}

/// Kernel basis of a rational matrix (acting on column vectors).
///
/// The basis is canonical: one vector per free column, scaled primitive
/// (coprime integers, first nonzero entry positive).
pub fn nullspace(m: &[Vec<ExactScalar>]) -> Vec<Vec<ExactScalar>> {
    if m.is_empty() {
        return Vec::new();
    }
    let cols = m[0].len();
    let (im, _) = clear_rows(m);
    let (ech, pivots, _) = bareiss(im);
    let pivot_set: Vec<usize> = pivots.clone();
    let free: Vec<usize> = (0..cols).filter(|c| !pivot_set.contains(c)).collect();
    let mut basis = Vec::with_capacity(free.len());
    for &fc in &free {
        let mut v = vec![ExactScalar::zero(); cols];
        v[fc] = ExactScalar::one();
        // back-substitute pivot rows bottom-up
        for (ri, &pc) in pivot_set.iter().enumerate().rev() {
            let mut s = BigRational::from_integer(ech[ri][fc].clone());
            for &qc in pivot_set.iter().skip(ri + 1) {
                s += BigRational::from_integer(ech[ri][qc].clone()) * &v[qc];
            }
            v[pc] = -s / BigRational::from_integer(ech[ri][pc].clone());
        }
        basis.push(primitive(&v));
    }
    basis
}

/// Solves the square system `a x = b`; None when `a` is singular.
pub fn solve(a: &[Vec<ExactScalar>], b: &[ExactScalar]) -> Option<Vec<ExactScalar>> {
    let n = a.len();
    assert_eq!(b.len(), n);
    let mut aug: Vec<Vec<ExactScalar>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    // plain rational Gauss-Jordan; systems here are small (d+1 <= 5)
    for col in 0..n {
        let p = (col..n).find(|&i| !aug[i][col].is_zero())?;
        aug.swap(col, p);
        let inv = aug[col][col].recip();
        for x in aug[col].iter_mut() {
            *x *= &inv;
        }
        for i in 0..n {
            if i != col && !aug[i][col].is_zero() {
                let f = aug[i][col].clone();
                for j in 0..=n {
                    let t = &f * &aug[col][j];
                    aug[i][j] -= t;
                }
            }
        }
    }
    Some(aug.into_iter().map(|r| r[n].clone()).collect())
}

/// Inverse of a square rational matrix; None when singular.
pub fn inverse(m: &[Vec<ExactScalar>]) -> Option<Vec<Vec<ExactScalar>>> {
    let n = m.len();
    let cols: Vec<Vec<ExactScalar>> = (0..n)
        .map(|j| {
            let e: Vec<ExactScalar> =
                (0..n).map(|i| if i == j { ExactScalar::one() } else { ExactScalar::zero() }).collect();
            solve(m, &e)
        })
        .collect::<Option<Vec<_>>>()?;
    // `cols[j]` is the j-th column of the inverse
    Some((0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect())
}

pub fn mat_mul(a: &[Vec<ExactScalar>], b: &[Vec<ExactScalar>]) -> Vec<Vec<ExactScalar>> {
    let n = a.len();
    let inner = b.len();
    let m = b[0].len();
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| (0..inner).map(|t| &a[i][t] * &b[t][j]).sum())
                .collect()
        })
        .collect()
}

pub fn mat_vec(a: &[Vec<ExactScalar>], v: &[ExactScalar]) -> Vec<ExactScalar> {
    a.iter().map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum()).collect()
}

pub fn transpose(m: &[Vec<ExactScalar>]) -> Vec<Vec<ExactScalar>> {
    let rows = m.len();
    let cols = m[0].len();
    (0..cols).map(|j| (0..rows).map(|i| m[i][j].clone()).collect()).collect()
}

pub fn identity(n: usize) -> Vec<Vec<ExactScalar>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { ExactScalar::one() } else { ExactScalar::zero() }).collect())
        .collect()
}

/// Scales a nonzero rational vector to coprime integers with the first
/// nonzero entry positive. Identically zero vectors are returned unchanged.
pub fn primitive(v: &[ExactScalar]) -> Vec<ExactScalar> {
    let mut l = BigInt::one();
    for x in v {
        l = l.lcm(x.denom());
    }
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&l / x.denom())).collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return v.to_vec();
    }
    if let Some(first) = ints.iter().find(|x| !x.is_zero()) {
        if first.is_negative() {
            g = -g;
        }
    }
    ints.into_iter().map(|x| BigRational::from_integer(x / &g)).collect()
}

/// Extracts a basis of the row space, keeping the original vector order.
pub fn row_basis(vecs: &[Vec<ExactScalar>]) -> Vec<Vec<ExactScalar>> {
    let mut reduced: Vec<Vec<ExactScalar>> = Vec::new();
    let mut kept = Vec::new();
    for v in vecs {
        let mut red = v.clone();
        for b in &reduced {
            let p = b.iter().position(|x| !x.is_zero()).unwrap();
            if !red[p].is_zero() {
                let f = &red[p] / &b[p];
                for (x, y) in red.iter_mut().zip(b) {
                    let t = &f * y;
                    *x -= t;
                }
            }
        }
        if red.iter().any(|x| !x.is_zero()) {
            reduced.push(red);
            kept.push(v.clone());
        }
    }
    kept
}
