//! Sparse Laurent polynomials in the spectral parameter, and bivariate
//! polynomials that are polynomial in k and Laurent in the spectral parameter.
//!
//! Maps never store zero coefficients, so structural equality is semantic
//! equality. Exponent keys are kept in BTreeMaps for deterministic iteration.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use crate::scalar::ExactScalar;

/// Sparse Laurent polynomial in one variable over the rationals.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LaurentPoly(pub BTreeMap<i64, ExactScalar>);

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly(BTreeMap::new())
    }

    pub fn one() -> Self {
        Self::monomial(0, ExactScalar::from_integer(1.into()))
    }

    pub fn monomial(exp: i64, coeff: ExactScalar) -> Self {
        let mut m = BTreeMap::new();
        if !coeff.is_zero() {
            m.insert(exp, coeff);
        }
        LaurentPoly(m)
    }

    pub fn constant(coeff: ExactScalar) -> Self {
        Self::monomial(0, coeff)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coeff(&self, exp: i64) -> ExactScalar {
        self.0.get(&exp).cloned().unwrap_or_else(ExactScalar::zero)
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn ord(&self) -> Option<i64> {
        self.0.keys().next().copied()
    }

    /// Highest exponent with a nonzero coefficient.
    pub fn deg(&self) -> Option<i64> {
        self.0.keys().next_back().copied()
    }

    pub fn scale(&self, s: &ExactScalar) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        LaurentPoly(self.0.iter().map(|(e, c)| (*e, c * s)).collect())
    }

    pub fn mul_monomial(&self, exp: i64, coeff: &ExactScalar) -> Self {
        if coeff.is_zero() {
            return Self::zero();
        }
        LaurentPoly(self.0.iter().map(|(e, c)| (e + exp, c * coeff)).collect())
    }

    fn add_assign_term(&mut self, exp: i64, coeff: &ExactScalar) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.0.entry(exp).or_insert_with(ExactScalar::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.0.remove(&exp);
        }
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.0 {
            out.add_assign_term(*e, c);
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.0 {
            out.add_assign_term(*e, &(-c.clone()));
        }
        out
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (e1, c1) in &self.0 {
            for (e2, c2) in &rhs.0 {
                out.add_assign_term(e1 + e2, &(c1 * c2));
            }
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly(self.0.iter().map(|(e, c)| (*e, -c.clone())).collect())
    }
}

/// Square matrix of Laurent polynomials.
pub type LaurentMatrix = Vec<Vec<LaurentPoly>>;

pub fn laurent_identity(n: usize) -> LaurentMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { LaurentPoly::one() } else { LaurentPoly::zero() }).collect())
        .collect()
}

pub fn laurent_mat_mul(a: &LaurentMatrix, b: &LaurentMatrix) -> LaurentMatrix {
    let n = a.len();
    let m = b[0].len();
    let inner = b.len();
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let mut acc = LaurentPoly::zero();
                    for t in 0..inner {
                        acc = &acc + &(&a[i][t] * &b[t][j]);
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// Determinant of a Laurent-polynomial matrix by Laplace expansion with
/// column-subset memoization (fine for the small matrices used here).
pub fn laurent_det(m: &LaurentMatrix) -> LaurentPoly {
    let n = m.len();
    debug_assert!(m.iter().all(|r| r.len() == n));
    if n == 0 {
        return LaurentPoly::one();
    }
    // minors[mask] = det of rows (n - popcount(mask))..n restricted to columns in mask
    let mut memo: Vec<Option<LaurentPoly>> = vec![None; 1 << n];
    fn minor(m: &LaurentMatrix, n: usize, mask: usize, memo: &mut Vec<Option<LaurentPoly>>) -> LaurentPoly {
        if mask == 0 {
            return LaurentPoly::one();
        }
        if let Some(v) = &memo[mask] {
            return v.clone();
        }
        let k = mask.count_ones() as usize;
        let row = n - k;
        let mut acc = LaurentPoly::zero();
        let mut sign = false;
        for c in 0..n {
            if mask & (1 << c) == 0 {
                continue;
            }
            if !m[row][c].is_zero() {
                let sub = minor(m, n, mask & !(1 << c), memo);
                let term = &m[row][c] * &sub;
                acc = if sign { &acc - &term } else { &acc + &term };
            }
            sign = !sign;
        }
        memo[mask] = Some(acc.clone());
        acc
    }
    minor(m, n, (1 << n) - 1, &mut memo)
}

/// Bivariate polynomial: polynomial in k (exponent >= 0), Laurent in the
/// spectral parameter.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LaurentBivariate(pub BTreeMap<(u32, i64), ExactScalar>);

impl LaurentBivariate {
    pub fn zero() -> Self {
        LaurentBivariate(BTreeMap::new())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn monomial(kexp: u32, lexp: i64, coeff: ExactScalar) -> Self {
        let mut m = BTreeMap::new();
        if !coeff.is_zero() {
            m.insert((kexp, lexp), coeff);
        }
        LaurentBivariate(m)
    }

    pub fn from_laurent(p: &LaurentPoly) -> Self {
        LaurentBivariate(p.0.iter().map(|(e, c)| ((0u32, *e), c.clone())).collect())
    }

    pub fn add_assign_term(&mut self, kexp: u32, lexp: i64, coeff: &ExactScalar) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.0.entry((kexp, lexp)).or_insert_with(ExactScalar::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.0.remove(&(kexp, lexp));
        }
    }

    pub fn coeff(&self, kexp: u32, lexp: i64) -> ExactScalar {
        self.0.get(&(kexp, lexp)).cloned().unwrap_or_else(ExactScalar::zero)
    }

    pub fn k_degree(&self) -> u32 {
        self.0.keys().map(|(k, _)| *k).max().unwrap_or(0)
    }

    /// The coefficient of k^kexp, as a Laurent polynomial in the spectral
    /// parameter.
    pub fn k_coefficient(&self, kexp: u32) -> LaurentPoly {
        LaurentPoly(
            self.0
                .iter()
                .filter(|((k, _), _)| *k == kexp)
                .map(|((_, e), c)| (*e, c.clone()))
                .collect(),
        )
    }
}

impl Add for &LaurentBivariate {
    type Output = LaurentBivariate;
    fn add(self, rhs: &LaurentBivariate) -> LaurentBivariate {
        let mut out = self.clone();
        for ((k, e), c) in &rhs.0 {
            out.add_assign_term(*k, *e, c);
        }
        out
    }
}

impl Sub for &LaurentBivariate {
    type Output = LaurentBivariate;
    fn sub(self, rhs: &LaurentBivariate) -> LaurentBivariate {
        let mut out = self.clone();
        for ((k, e), c) in &rhs.0 {
            out.add_assign_term(*k, *e, &(-c.clone()));
        }
        out
    }
}

impl Mul for &LaurentBivariate {
    type Output = LaurentBivariate;
    fn mul(self, rhs: &LaurentBivariate) -> LaurentBivariate {
        let mut out = LaurentBivariate::zero();
        for ((k1, e1), c1) in &self.0 {
            for ((k2, e2), c2) in &rhs.0 {
                out.add_assign_term(k1 + k2, e1 + e2, &(c1 * c2));
            }
        }
        out
    }
}

/// Determinant of a matrix of bivariate polynomials (same memoized Laplace
/// scheme as [`laurent_det`]).
pub fn bivariate_det(m: &[Vec<LaurentBivariate>]) -> LaurentBivariate {
    let n = m.len();
    if n == 0 {
        return LaurentBivariate::monomial(0, 0, ExactScalar::from_integer(1.into()));
    }
    let mut memo: Vec<Option<LaurentBivariate>> = vec![None; 1 << n];
    fn minor(
        m: &[Vec<LaurentBivariate>],
        n: usize,
        mask: usize,
        memo: &mut Vec<Option<LaurentBivariate>>,
    ) -> LaurentBivariate {
        if mask == 0 {
            return LaurentBivariate::monomial(0, 0, ExactScalar::from_integer(1.into()));
        }
        if let Some(v) = &memo[mask] {
            return v.clone();
        }
        let k = mask.count_ones() as usize;
        let row = n - k;
        let mut acc = LaurentBivariate::zero();
        let mut sign = false;
        for c in 0..n {
            if mask & (1 << c) == 0 {
                continue;
            }
            if !m[row][c].is_zero() {
                let sub = minor(m, n, mask & !(1 << c), memo);
                let term = &m[row][c] * &sub;
                acc = if sign { &acc - &term } else { &acc + &term };
            }
            sign = !sign;
        }
        memo[mask] = Some(acc.clone());
        acc
    }
    minor(m, n, (1 << n) - 1, &mut memo)
}

/// Dense univariate polynomial utilities over the rationals, used for
/// discriminant root counting. Coefficients are indexed from degree 0.
pub mod dense {
    use super::*;

    pub fn trim(mut p: Vec<ExactScalar>) -> Vec<ExactScalar> {
        while p.last().map(|c| c.is_zero()).unwrap_or(false) {
            p.pop();
        }
        p
    }

    /// Laurent to dense: returns (lowest exponent, coefficients from there up).
    pub fn from_laurent(p: &LaurentPoly) -> (i64, Vec<ExactScalar>) {
        let Some(lo) = p.ord() else {
            return (0, Vec::new());
        };
        let hi = p.deg().unwrap();
        let coeffs = (lo..=hi).map(|e| p.coeff(e)).collect();
        (lo, coeffs)
    }

    pub fn derivative(p: &[ExactScalar]) -> Vec<ExactScalar> {
        trim(
            p.iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * ExactScalar::from_integer(i.into()))
                .collect(),
        )
    }

    fn rem(mut p: Vec<ExactScalar>, q: &[ExactScalar]) -> Vec<ExactScalar> {
        let dq = q.len();
        debug_assert!(dq > 0);
        loop {
            p = trim(p);
            if p.len() < dq {
                return p;
            }
            let f = p.last().unwrap() / q.last().unwrap();
            let shift = p.len() - dq;
            for (i, qc) in q.iter().enumerate() {
                let t = &f * qc;
                p[shift + i] -= t;
            }
        }
    }

    /// Monic gcd; the zero polynomial is the gcd of two zeros.
    pub fn gcd(a: &[ExactScalar], b: &[ExactScalar]) -> Vec<ExactScalar> {
        let mut p = trim(a.to_vec());
        let mut q = trim(b.to_vec());
        while !q.is_empty() {
            let r = rem(p, &q);
            p = q;
            q = r;
        }
        if let Some(lead) = p.last().cloned() {
            let inv = lead.recip();
            for c in p.iter_mut() {
                *c *= &inv;
            }
        }
        p
    }

    pub fn is_squarefree(p: &[ExactScalar]) -> bool {
        gcd(p, &derivative(p)).len() <= 1
    }
}


/// Integer-polynomial kernel for determinant-heavy work: dense polynomials
/// over BigInt with fraction-free (Bareiss) elimination, avoiding the
/// per-operation normalization cost of rational arithmetic.
pub(crate) mod intpoly {
    use num_bigint::BigInt;
    use num_integer::Integer;
    use num_traits::{One, Zero};

    pub type IPoly = Vec<BigInt>;

    pub fn trim(mut p: IPoly) -> IPoly {
        while p.last().map(|c| c.is_zero()).unwrap_or(false) {
            p.pop();
        }
        p
    }

    pub fn mul(a: &[BigInt], b: &[BigInt]) -> IPoly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    out[i + j] += x * y;
                }
            }
        }
        trim(out)
    }

    pub fn sub(a: &[BigInt], b: &[BigInt]) -> IPoly {
        let mut out = vec![BigInt::zero(); a.len().max(b.len())];
        for (i, x) in a.iter().enumerate() {
            out[i] += x;
        }
        for (i, y) in b.iter().enumerate() {
            out[i] -= y;
        }
        trim(out)
    }

    /// Exact division in Z[x]; the divisions produced by Bareiss elimination
    /// are exact by construction, which is asserted.
    pub fn exact_div(mut p: IPoly, q: &[BigInt]) -> IPoly {
        debug_assert!(!q.is_empty());
        if p.is_empty() {
            return p;
        }
        let dq = q.len();
        let mut out = vec![BigInt::zero(); p.len() + 1 - dq];
        while !p.is_empty() && p.len() >= dq {
            let (c, r) = p.last().unwrap().div_rem(q.last().unwrap());
            debug_assert!(r.is_zero(), "inexact polynomial division");
            let shift = p.len() - dq;
            for (i, qc) in q.iter().enumerate() {
                p[shift + i] -= &c * qc;
            }
            out[shift] = c;
            p = trim(p);
        }
        debug_assert!(p.is_empty(), "nonzero remainder in exact division");
        trim(out)
    }

    /// Fraction-free determinant of a square matrix of integer polynomials.
    pub fn bareiss_det(mut m: Vec<Vec<IPoly>>) -> IPoly {
        let n = m.len();
        if n == 0 {
            return vec![BigInt::one()];
        }
        let mut sign = false;
        let mut prev: IPoly = vec![BigInt::one()];
        for k in 0..n - 1 {
            let Some(p) = (k..n).find(|&i| !m[i][k].is_empty()) else {
                return Vec::new();
            };
            if p != k {
                m.swap(p, k);
                sign = !sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let t = sub(&mul(&m[i][j], &m[k][k]), &mul(&m[i][k], &m[k][j]));
                    m[i][j] = exact_div(t, &prev);
                }
                m[i][k] = Vec::new();
            }
            prev = m[k][k].clone();
        }
        let mut det = m[n - 1][n - 1].clone();
        if sign {
            det = det.iter().map(|c| -c).collect();
        }
        det
    }

    /// Divides out the integer content and any power of x.
    pub fn primitive_part(p: &[BigInt]) -> (usize, IPoly) {
        let ord = p.iter().position(|c| !c.is_zero()).unwrap_or(0);
        let mut g = BigInt::zero();
        for c in &p[ord..] {
            g = g.gcd(c);
        }
        if g.is_zero() {
            return (0, Vec::new());
        }
        (ord, p[ord..].iter().map(|c| c / &g).collect())
    }

    /// Rigorous squarefreeness test over Q for an integer polynomial.
    ///
    /// A constant gcd with the derivative modulo a prime not dividing the
    /// leading coefficient certifies squarefreeness; otherwise the exact
    /// rational gcd decides.
    pub fn is_squarefree(p: &[BigInt]) -> bool {
        let p = trim(p.to_vec());
        if p.len() <= 2 {
            return !p.is_empty();
        }
        let deriv: IPoly = trim(
            p.iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        );
        const PRIMES: [u64; 3] = [1_000_000_007, 998_244_353, 4_293_918_721];
        for &q in &PRIMES {
            let qb = BigInt::from(q);
            if (p.last().unwrap() % &qb).is_zero() {
                continue;
            }
            let pm: Vec<u64> = p.iter().map(|c| modred(c, q)).collect();
            let dm: Vec<u64> = deriv.iter().map(|c| modred(c, q)).collect();
            if gcd_deg_mod(pm, dm, q) == 0 {
                return true;
            }
        }
        // exact fallback over Q
        use crate::scalar::ExactScalar;
        let pr: Vec<ExactScalar> =
            p.iter().map(|c| ExactScalar::from_integer(c.clone())).collect();
        super::dense::is_squarefree(&pr)
    }

    fn modred(c: &BigInt, q: u64) -> u64 {
        let r = c.mod_floor(&BigInt::from(q));
        let (_, digits) = r.to_u64_digits();
        digits.first().copied().unwrap_or(0)
    }

    /// Degree of gcd(a, b) in F_q[x] (q prime).
    fn gcd_deg_mod(mut a: Vec<u64>, mut b: Vec<u64>, q: u64) -> usize {
        let trimv = |v: &mut Vec<u64>| {
            while v.last() == Some(&0) {
                v.pop();
            }
        };
        let mulmod = |x: u64, y: u64| ((x as u128 * y as u128) % q as u128) as u64;
        let powmod = |mut x: u64, mut e: u64| {
            let mut acc = 1u64;
            while e > 0 {
                if e & 1 == 1 {
                    acc = mulmod(acc, x);
                }
                x = mulmod(x, x);
                e >>= 1;
            }
            acc
        };
        trimv(&mut a);
        trimv(&mut b);
        while !b.is_empty() {
            // a mod b
            let inv = powmod(*b.last().unwrap(), q - 2);
            while a.len() >= b.len() && !a.is_empty() {
                let c = mulmod(*a.last().unwrap(), inv);
                let shift = a.len() - b.len();
                for (i, &bc) in b.iter().enumerate() {
                    let sub = mulmod(c, bc);
                    a[shift + i] = (a[shift + i] + q - sub) % q;
                }
                trimv(&mut a);
            }
            std::mem::swap(&mut a, &mut b);
            trimv(&mut b);
        }
        a.len().saturating_sub(1)
    }
}
