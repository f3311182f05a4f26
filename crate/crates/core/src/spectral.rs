//! The Lax/spectral layer.
//!
//! Each integrable variant carries a Lax matrix defined as the closed-form
//! inverse of a companion-type matrix whose determinant is a power of the
//! spectral parameter. The product of the Lax matrices over one period (taken
//! right to left, index n-1 down to 0) is the spectral-parameter monodromy;
//! its characteristic polynomial is the spectral function whose coefficients
//! are the conserved quantities. Newton-polygon data of the spectral function
//! at 0 and infinity, together with the finite branch count from the
//! discriminant, give the genus of the spectral curve.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::laurent::{
    bivariate_det, dense, laurent_mat_mul, LaurentBivariate, LaurentMatrix, LaurentPoly,
};
use crate::polygon::{tilde_from_rows, CoefficientArray};
use crate::scalar::{sign_pow, ExactScalar};
use num_integer::Integer;
use num_traits::{One, Zero};

/// Which Lax matrix to attach to a coefficient polygon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum LaxVariant {
    /// Dented map in any dimension: the spectral parameter sits at slot m+1.
    Dented { m: usize },
    /// Dented Lax matrix in the ratio coordinates (valid for every n).
    Tilde { m: usize },
    /// Partially corrugated / deep-dented Lax form: dented slot plus the
    /// sparse coefficient column.
    Partial { m: usize, l: usize },
    /// Short-diagonal map in 3D: parameter at slots 1 and 3.
    ShortDiagonal3d,
    /// Corrugated map in 3D: dented slot 3 on a corrugated polygon.
    Corrugated3d,
}

impl LaxVariant {
    /// Diagonal slots (1-based) of the companion block carrying the spectral
    /// parameter.
    pub fn lambda_slots(&self, d: usize) -> Result<Vec<usize>> {
        let dent = |m: usize| -> Result<Vec<usize>> {
            if !(1..=d - 1).contains(&m) {
                return Err(Error::VariantMismatch(format!("dent position {m} out of 1..={}", d - 1)));
            }
            Ok(vec![m + 1])
        };
        match self {
            LaxVariant::Dented { m } | LaxVariant::Tilde { m } => dent(*m),
            LaxVariant::Partial { m, l } => {
                if *l > d || *m >= *l {
                    return Err(Error::VariantMismatch(format!(
                        "partial variant needs m < l <= d, got m={m}, l={l}, d={d}"
                    )));
                }
                dent(*m)
            }
            LaxVariant::ShortDiagonal3d => {
                if d != 3 {
                    return Err(Error::VariantMismatch("short-diagonal Lax form is 3D only".into()));
                }
                Ok(vec![1, 3])
            }
            LaxVariant::Corrugated3d => {
                if d != 3 {
                    return Err(Error::VariantMismatch("corrugated Lax form is 3D only".into()));
                }
                Ok(vec![3])
            }
        }
    }

    /// Number of parameter slots; the k-constant term of the spectral
    /// function is the parameter to the power -n times this.
    pub fn slot_count(&self, d: usize) -> Result<usize> {
        Ok(self.lambda_slots(d)?.len())
    }

    /// Checks the coefficient zero pattern the variant assumes.
    pub fn check_compatible(&self, coeffs: &CoefficientArray) -> Result<()> {
        let d = coeffs.d;
        self.lambda_slots(d)?;
        match self {
            LaxVariant::Corrugated3d => {
                for (j, row) in coeffs.rows.iter().enumerate() {
                    if !row[1].is_zero() {
                        return Err(Error::VariantMismatch(format!(
                            "corrugated Lax form needs zero middle coefficients, row {j}"
                        )));
                    }
                }
                Ok(())
            }
            LaxVariant::Partial { m, l } => {
                for (j, row) in coeffs.rows.iter().enumerate() {
                    for k in m + 1..=d + m - l {
                        if !row[k - 1].is_zero() {
                            return Err(Error::VariantMismatch(format!(
                                "partial Lax form needs zero column {k}, row {j}"
                            )));
                        }
                    }
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }
}

/// The displayed companion-type matrix whose inverse is the Lax matrix:
/// first row (0,...,0,(-1)^d), the parameter diagonal below, and the
/// coefficient column on the right.
pub fn displayed_matrix(row: &[ExactScalar], d: usize, slots: &[usize]) -> LaurentMatrix {
    let mut m: LaurentMatrix = vec![vec![LaurentPoly::zero(); d + 1]; d + 1];
    m[0][d] = LaurentPoly::constant(sign_pow(d));
    for i in 1..=d {
        let e = if slots.contains(&i) { 1 } else { 0 };
        m[i][i - 1] = LaurentPoly::monomial(e, ExactScalar::one());
        if !row[i - 1].is_zero() {
            m[i][d] = LaurentPoly::constant(row[i - 1].clone());
        }
    }
    m
}

/// Closed-form inverse of the displayed matrix (its determinant is a power
/// of the parameter, so the inverse is Laurent).
fn inverse_of_displayed(row: &[ExactScalar], d: usize, slots: &[usize]) -> LaurentMatrix {
    let mut m: LaurentMatrix = vec![vec![LaurentPoly::zero(); d + 1]; d + 1];
    let sgn = sign_pow(d);
    for i in 1..=d {
        let e = if slots.contains(&i) { -1 } else { 0 };
        if !row[i - 1].is_zero() {
            m[i - 1][0] = LaurentPoly::monomial(e, -&sgn * &row[i - 1]);
        }
        m[i - 1][i] = LaurentPoly::monomial(e, ExactScalar::one());
    }
    m[d][0] = LaurentPoly::constant(sgn);
    m
}

/// Lax matrix of the variant at index j.
pub fn lax_matrix(coeffs: &CoefficientArray, j: usize, variant: &LaxVariant) -> Result<LaurentMatrix> {
    variant.check_compatible(coeffs)?;
    let d = coeffs.d;
    let slots = variant.lambda_slots(d)?;
    match variant {
        LaxVariant::Tilde { m } => {
            let rows_cycled: Vec<Vec<ExactScalar>> =
                (0..=coeffs.n).map(|t| coeffs.rows[t % coeffs.n].clone()).collect();
            let tilde = tilde_from_rows(d, coeffs.n, &rows_cycled)?;
            Ok(tilde_lax_matrix(&tilde[j % coeffs.n], d, *m))
        }
        _ => Ok(inverse_of_displayed(&coeffs.rows[j % coeffs.n], d, &slots)),
    }
}

/// Lax matrix in ratio coordinates: inverse of the companion display with the
/// ratio diagonal (parameter at slot m+1) and an all-ones column.
pub fn tilde_lax_matrix(tilde_row: &[ExactScalar], d: usize, m: usize) -> LaurentMatrix {
    let mut out: LaurentMatrix = vec![vec![LaurentPoly::zero(); d + 1]; d + 1];
    let sgn = sign_pow(d);
    for i in 1..=d {
        let e = if i == m + 1 { -1 } else { 0 };
        let inv = tilde_row[i - 1].recip();
        out[i - 1][0] = LaurentPoly::monomial(e, -&sgn * &inv);
        out[i - 1][i] = LaurentPoly::monomial(e, inv);
    }
    out[d][0] = LaurentPoly::constant(sgn);
    out
}

/// Displayed matrix for the ratio-coordinate Lax form.
pub fn tilde_displayed_matrix(tilde_row: &[ExactScalar], d: usize, m: usize) -> LaurentMatrix {
    let mut out: LaurentMatrix = vec![vec![LaurentPoly::zero(); d + 1]; d + 1];
    out[0][d] = LaurentPoly::constant(sign_pow(d));
    for i in 1..=d {
        let e = if i == m + 1 { 1 } else { 0 };
        out[i][i - 1] = LaurentPoly::monomial(e, tilde_row[i - 1].clone());
        out[i][d] = LaurentPoly::one();
    }
    out
}

/// The spectral-parameter monodromy: product of the Lax matrices over one
/// period, rightmost factor at index 0.
pub fn lax_monodromy(coeffs: &CoefficientArray, variant: &LaxVariant) -> Result<LaurentMatrix> {
    let d = coeffs.d;
    let mut t = crate::laurent::laurent_identity(d + 1);
    for j in 0..coeffs.n {
        let l = lax_matrix(coeffs, j, variant)?;
        t = laurent_mat_mul(&l, &t);
    }
    Ok(t)
}

/// The spectral function: characteristic polynomial of the parameter
/// monodromy. Its k-degree is d+1 with leading coefficient (-1)^(d+1).
pub fn spectral_function(coeffs: &CoefficientArray, variant: &LaxVariant) -> Result<LaurentBivariate> {
    let t = lax_monodromy(coeffs, variant)?;
    Ok(char_poly(&t))
}

/// det(T - k Id) over the bivariate ring.
pub fn char_poly(t: &LaurentMatrix) -> LaurentBivariate {
    let mut m: Vec<Vec<LaurentBivariate>> = t
        .iter()
        .map(|row| row.iter().map(LaurentBivariate::from_laurent).collect())
        .collect();
    for (i, row) in m.iter_mut().enumerate() {
        let minus_k = LaurentBivariate::monomial(1, 0, -ExactScalar::one());
        row[i] = &row[i] + &minus_k;
    }
    bivariate_det(&m)
}

/// One named family of conserved coefficients: the k-power, the sign it
/// carries in the spectral function, and its parameter-exponent window.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvariantFamily {
    pub k_power: u32,
    pub lo: i64,
    pub hi: i64,
    /// Coefficients indexed from the window bottom, sign-normalized so that
    /// family entry f_j is (-1)^(d+1-k_power) times the raw coefficient.
    pub values: Vec<String>,
}

/// Extracted invariant data of a spectral function.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvariantSet {
    pub d: usize,
    pub n: usize,
    pub families: Vec<InvariantFamily>,
    #[serde(skip)]
    pub raw: Vec<(u32, i64, Vec<ExactScalar>)>,
}

impl InvariantSet {
    /// Number of middle-family coefficients (k-powers 1..=d), the count that
    /// enters the torus-dimension bookkeeping.
    pub fn invariant_count(&self) -> usize {
        self.raw
            .iter()
            .filter(|(k, _, _)| (1..=self.d as u32).contains(k))
            .map(|(_, _, v)| v.len())
            .sum()
    }

    pub fn family(&self, k_power: u32) -> Option<(i64, &[ExactScalar])> {
        self.raw
            .iter()
            .find(|(k, _, _)| *k == k_power)
            .map(|(_, lo, v)| (*lo, v.as_slice()))
    }
}

/// The documented parameter windows per k-power for the tabulated variants
/// (3D). Returns None for variants whose windows are discovered output.
pub fn documented_windows(variant: &LaxVariant, d: usize, n: usize) -> Option<Vec<(u32, i64, i64)>> {
    if d != 3 {
        return None;
    }
    let n = n as i64;
    let q = n / 2;
    match variant {
        LaxVariant::Dented { m: 1 } => Some(vec![
            (4, 0, 0),
            (3, -q, 0),
            (2, -n, -n + 2 * n / 3),
            (1, -n, -n + n / 3),
            (0, -n, -n),
        ]),
        LaxVariant::Dented { m: 2 } => Some(vec![
            (4, 0, 0),
            (3, -(n / 3), 0),
            (2, -(2 * n / 3), 0),
            (1, -n, -n + q),
            (0, -n, -n),
        ]),
        LaxVariant::ShortDiagonal3d => Some(vec![
            (4, 0, 0),
            (3, -n, -n + q),
            (2, -n - q, -n),
            (1, -2 * n, -2 * n + q),
            (0, -2 * n, -2 * n),
        ]),
        LaxVariant::Corrugated3d => {
            let n0 = n / 3 - (n - 1).gcd(&3) / 3;
            Some(vec![
                (4, 0, 0),
                (3, -(n / 3), 0),
                (2, -(2 * n / 3), -(2 * n / 3) + n0),
                (1, -n, -n + n / 3),
                (0, -n, -n),
            ])
        }
        _ => None,
    }
}

/// Splits the spectral function into invariant families and validates the
/// documented windows: any monomial outside its window is a structure
/// violation.
pub fn extract_invariants(
    r: &LaurentBivariate,
    variant: &LaxVariant,
    coeffs: &CoefficientArray,
) -> Result<InvariantSet> {
    let (d, n) = (coeffs.d, coeffs.n);
    let expect_deg = (d + 1) as u32;
    if r.k_degree() != expect_deg {
        return Err(Error::StructureMismatch { kexp: r.k_degree(), lexp: 0 });
    }
    // leading coefficient (-1)^{d+1} at parameter exponent 0
    let top = r.k_coefficient(expect_deg);
    if top != LaurentPoly::constant(sign_pow(d + 1)) {
        return Err(Error::StructureMismatch { kexp: expect_deg, lexp: top.deg().unwrap_or(0) });
    }
    // k-constant term: parameter^(-n * slots)
    let slots = variant.slot_count(d)? as i64;
    let bottom = r.k_coefficient(0);
    if bottom != LaurentPoly::monomial(-(n as i64) * slots, ExactScalar::one()) {
        return Err(Error::StructureMismatch { kexp: 0, lexp: bottom.deg().unwrap_or(0) });
    }
    if let Some(windows) = documented_windows(variant, d, n) {
        for (ke, le) in r.0.keys() {
            let Some(&(_, lo, hi)) = windows.iter().find(|(k, _, _)| k == ke) else {
                return Err(Error::StructureMismatch { kexp: *ke, lexp: *le });
            };
            if *le < lo || *le > hi {
                return Err(Error::StructureMismatch { kexp: *ke, lexp: *le });
            }
        }
    }
    let mut raw = Vec::new();
    let mut families = Vec::new();
    for ke in (0..=expect_deg).rev() {
        let fam = r.k_coefficient(ke);
        if fam.is_zero() {
            continue;
        }
        let sgn = sign_pow((d + 1) - ke as usize);
        // documented windows fix the range; otherwise the observed support
        let (lo, hi) = match documented_windows(variant, d, n)
            .and_then(|ws| ws.into_iter().find(|(k, _, _)| *k == ke))
        {
            Some((_, lo, hi)) => (lo, hi),
            None => (fam.ord().unwrap(), fam.deg().unwrap()),
        };
        let values: Vec<ExactScalar> = (lo..=hi).map(|e| &sgn * &fam.coeff(e)).collect();
        families.push(InvariantFamily {
            k_power: ke,
            lo,
            hi,
            values: values.iter().map(crate::scalar::format_rat).collect(),
        });
        raw.push((ke, lo, values));
    }
    Ok(InvariantSet { d, n, families, raw })
}

/// A verified closed-form Casimir: the named family entry equals the stated
/// coefficient-column product.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CasimirCheck {
    pub name: String,
    pub extracted: String,
    pub product: String,
    pub matches: bool,
}

/// The product-form Casimirs documented per variant, evaluated exactly.
pub fn casimirs(
    inv: &InvariantSet,
    variant: &LaxVariant,
    coeffs: &CoefficientArray,
) -> Result<Vec<CasimirCheck>> {
    let d = coeffs.d;
    if d != 3 {
        return Ok(Vec::new());
    }
    let n = coeffs.n;
    let sign_n = sign_pow(n);
    let p1 = coeffs.column_product(1);
    let p2 = coeffs.column_product(2);
    let p3 = coeffs.column_product(3);
    let take = |k: u32, at_top: bool| -> Result<ExactScalar> {
        let (_, vals) = inv
            .family(k)
            .ok_or(Error::StructureMismatch { kexp: k, lexp: 0 })?;
        Ok(if at_top { vals.last().unwrap().clone() } else { vals[0].clone() })
    };
    let q = n / 2;
    let mk = |name: String, extracted: ExactScalar, product: ExactScalar| CasimirCheck {
        matches: extracted == product,
        extracted: crate::scalar::format_rat(&extracted),
        product: crate::scalar::format_rat(&product),
        name,
    };
    let checks = match variant {
        LaxVariant::Dented { m: 1 } => vec![
            mk(format!("G_{q}"), take(3, true)?, p1),
            mk("J_0".into(), take(2, false)?, &sign_n * &p2),
        ],
        LaxVariant::Dented { m: 2 } => vec![
            mk(format!("J_{}", 2 * n / 3), take(2, true)?, &sign_n * &p2),
            mk("I_0".into(), take(1, false)?, p3),
        ],
        LaxVariant::ShortDiagonal3d => vec![
            mk("G_0".into(), take(3, false)?, p1),
            mk("I_0".into(), take(1, false)?, p3),
        ],
        LaxVariant::Corrugated3d => vec![
            mk(format!("G_{}", n / 3), take(3, true)?, p1),
            mk("I_0".into(), take(1, false)?, p3),
        ],
        _ => Vec::new(),
    };
    Ok(checks)
}

/// Where branch data is read off.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectralEnd {
    Zero,
    Infinity,
}

/// One Newton-polygon edge: Puiseux cycles of length `cycle_len`, repeated
/// `multiplicity` times, with leading coefficients solving `leading` (a
/// univariate polynomial in the cycle_len-th power of the leading value).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BranchCycle {
    pub cycle_len: usize,
    pub multiplicity: usize,
    pub leading: Vec<String>,
    #[serde(skip)]
    pub leading_raw: Vec<ExactScalar>,
}

/// Newton-polygon branch data of the spectral function at one end.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BranchData {
    pub location: SpectralEnd,
    pub cycles: Vec<BranchCycle>,
}

impl BranchData {
    /// Total sheet count: sum of cycle_len * multiplicity.
    pub fn sheet_count(&self) -> usize {
        self.cycles.iter().map(|c| c.cycle_len * c.multiplicity).sum()
    }

    /// Ramification contribution: sum over cycles of (cycle_len - 1).
    pub fn ramification(&self) -> usize {
        self.cycles.iter().map(|c| (c.cycle_len - 1) * c.multiplicity).sum()
    }
}

/// Newton-polygon cycle structure at 0 or infinity.
pub fn newton_branches(r: &LaurentBivariate, at: SpectralEnd) -> Result<BranchData> {
    if r.is_zero() {
        return Err(Error::DegenerateInput("zero spectral function".into()));
    }
    let kmax = r.k_degree();
    // valuation per k-power (order at 0, or minus degree at infinity)
    let mut points: Vec<(i64, i64)> = Vec::new();
    for ke in 0..=kmax {
        let c = r.k_coefficient(ke);
        if c.is_zero() {
            continue;
        }
        let v = match at {
            SpectralEnd::Zero => c.ord().unwrap(),
            SpectralEnd::Infinity => -c.deg().unwrap(),
        };
        points.push((ke as i64, v));
    }
    // lower convex hull left to right
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for pt in points.iter().copied() {
        while hull.len() >= 2 {
            let (x1, y1) = hull[hull.len() - 2];
            let (x2, y2) = hull[hull.len() - 1];
            if (x2 - x1) * (pt.1 - y1) - (y2 - y1) * (pt.0 - x1) <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    let mut cycles = Vec::new();
    for w in hull.windows(2) {
        let (x1, y1) = w[0];
        let (x2, y2) = w[1];
        let width = (x2 - x1) as usize;
        let rise = y1 - y2;
        let g = if rise == 0 { width as i64 } else { rise.gcd(&(width as i64)) };
        let e = (width as i64 / g) as usize;
        // edge polynomial in the e-th power of the leading coefficient
        let mut leading = Vec::new();
        let mut s = 0usize;
        while s * e <= width {
            let ke = (x1 as usize) + s * e;
            let c = r.k_coefficient(ke as u32);
            // parameter exponent on the edge at this k
            let v_edge = y1 + (y2 - y1) * (s as i64 * e as i64) / (width as i64);
            let val = match at {
                SpectralEnd::Zero => c.coeff(v_edge),
                SpectralEnd::Infinity => c.coeff(-v_edge),
            };
            leading.push(val);
            s += 1;
        }
        let leading = {
            let mut l = leading;
            while l.last().map(|c| c.is_zero()).unwrap_or(false) {
                l.pop();
            }
            l
        };
        cycles.push(BranchCycle {
            cycle_len: e,
            multiplicity: width / e,
            leading: leading.iter().map(crate::scalar::format_rat).collect(),
            leading_raw: leading,
        });
    }
    let data = BranchData { location: at, cycles };
    if data.sheet_count() != kmax as usize {
        return Err(Error::NonSimpleBranching(format!(
            "newton polygon covers {} of {} sheets",
            data.sheet_count(),
            kmax
        )));
    }
    Ok(data)
}

/// Finite branch counting data from the k-discriminant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiniteBranches {
    /// Number of nonzero finite parameter values (with multiplicity) where
    /// sheets collide: degree minus order at 0 of the discriminant.
    pub count: usize,
    /// Whether the discriminant is squarefree away from 0.
    pub squarefree: bool,
}

/// Resultant of the spectral function and its k-derivative with each
/// Sylvester row scaled to integer polynomials (the k-discriminant up to a
/// unit and a parameter power, which does not affect root counting away from
/// zero or squarefreeness).
fn k_discriminant_scaled(r: &LaurentBivariate) -> Result<crate::laurent::intpoly::IPoly> {
    use crate::laurent::intpoly;
    use num_bigint::BigInt;
    use num_integer::Integer;

    let n_deg = r.k_degree() as usize;
    if n_deg < 2 {
        return Err(Error::ZeroDiscriminant);
    }
    let coeffs: Vec<LaurentPoly> = (0..=n_deg).map(|k| r.k_coefficient(k as u32)).collect();
    let deriv: Vec<LaurentPoly> = (1..=n_deg)
        .map(|k| coeffs[k].scale(&ExactScalar::from_integer(k.into())))
        .collect();
    // Sylvester matrix of (R, dR/dk): (2N-1) x (2N-1), rows as Laurent polys
    let size = 2 * n_deg - 1;
    let mut rows: Vec<Vec<LaurentPoly>> = vec![vec![LaurentPoly::zero(); size]; size];
    for r_i in 0..n_deg - 1 {
        for (i, c) in coeffs.iter().rev().enumerate() {
            rows[r_i][r_i + i] = c.clone();
        }
    }
    for r_i in 0..n_deg {
        for (i, c) in deriv.iter().rev().enumerate() {
            rows[n_deg - 1 + r_i][r_i + i] = c.clone();
        }
    }
    // scale each row by a parameter power and a denominator lcm: the
    // determinant changes by a unit times a parameter power only
    let int_rows: Vec<Vec<intpoly::IPoly>> = rows
        .iter()
        .map(|row| {
            let lo = row.iter().filter_map(|p| p.ord()).min().unwrap_or(0);
            let hi = row.iter().filter_map(|p| p.deg()).max().unwrap_or(0);
            let mut lcm = BigInt::from(1);
            for p in row.iter() {
                for c in p.0.values() {
                    lcm = lcm.lcm(c.denom());
                }
            }
            row.iter()
                .map(|p| {
                    let mut v = vec![BigInt::from(0); (hi - lo + 1) as usize];
                    for (e, c) in p.0.iter() {
                        v[(e - lo) as usize] = c.numer() * (&lcm / c.denom());
                    }
                    intpoly::trim(v)
                })
                .collect()
        })
        .collect();
    let det = intpoly::bareiss_det(int_rows);
    if det.is_empty() {
        return Err(Error::ZeroDiscriminant);
    }
    Ok(det)
}

/// Counts nonzero finite branch parameter values with multiplicity and tests
/// squarefreeness of the discriminant away from 0.
pub fn finite_branch_count(r: &LaurentBivariate) -> Result<FiniteBranches> {
    use crate::laurent::intpoly;
    let disc = k_discriminant_scaled(r)?;
    let (_, prim) = intpoly::primitive_part(&disc);
    let count = prim.len() - 1;
    let squarefree = intpoly::is_squarefree(&prim);
    Ok(FiniteBranches { count, squarefree })
}

/// Genus of the spectral curve by the degree-(d+1) cover count: finite branch
/// points (required simple) plus the Newton-polygon ramification at both
/// ends.
pub fn genus(r: &LaurentBivariate) -> Result<i64> {
    let sheets = r.k_degree() as i64;
    let fin = finite_branch_count(r)?;
    if !fin.squarefree {
        return Err(Error::NonSimpleBranching(
            "discriminant has a repeated finite root".into(),
        ));
    }
    let mut nu = fin.count as i64;
    for at in [SpectralEnd::Zero, SpectralEnd::Infinity] {
        let b = newton_branches(r, at)?;
        for c in &b.cycles {
            // cycles of equal leading values would merge; insist on
            // squarefree edge polynomials
            if !dense::is_squarefree(&c.leading_raw) {
                return Err(Error::NonSimpleBranching(format!(
                    "repeated leading coefficient at {:?}",
                    at
                )));
            }
        }
        nu += b.ramification() as i64;
    }
    let chi = 2 * sheets - nu;
    if (2 - chi) % 2 != 0 {
        return Err(Error::NonSimpleBranching("odd ramification total".into()));
    }
    Ok((2 - chi) / 2)
}

/// The diagonal gauge relating the coefficient Lax matrix to the ratio form.
pub fn coefficient_gauge(row: &[ExactScalar]) -> Vec<ExactScalar> {
    let mut h = Vec::with_capacity(row.len() + 1);
    h.push(ExactScalar::one());
    h.extend(row.iter().cloned());
    h
}

/// Result of the corrugated cluster-variable gauge: the transformed matrices
/// and the cluster-like sequences.
#[derive(Debug, Clone)]
pub struct CorrugatedGauge {
    pub x: Vec<ExactScalar>,
    pub y: Vec<ExactScalar>,
    pub transformed: Vec<LaurentMatrix>,
}

/// Gauge transform of the corrugated Lax matrices into the sparse cluster
/// form.
///
/// Each transformed matrix has the parameter once in the subdiagonal, ones
/// below, and a last block carrying x_j and x_j + (-1)^d y_j (the corner sign
/// comes out of the determinant bookkeeping of the gauge matrices).
pub fn gauge_gstv(coeffs: &CoefficientArray) -> Result<CorrugatedGauge> {
    let (d, n) = (coeffs.d, coeffs.n);
    for (j, row) in coeffs.rows.iter().enumerate() {
        for k in 2..=d - 1 {
            if !row[k - 1].is_zero() {
                return Err(Error::VariantMismatch(format!(
                    "gauge requires a corrugated polygon, nonzero column {k} at row {j}"
                )));
            }
        }
        if row[d - 1].is_zero() {
            return Err(Error::DivisionByZero(format!("last coefficient at row {j}")));
        }
    }
    let a1 = |j: i64| coeffs.entry(j, 1).clone();
    let ad = |j: i64| coeffs.entry(j, d).clone();
    // gauge matrix: companion display with diagonal products of trailing
    // coefficients and the last column (0,...,0,a_{j,d})
    let g_mat = |j: i64| -> Vec<Vec<ExactScalar>> {
        let mut g = vec![vec![ExactScalar::zero(); d + 1]; d + 1];
        g[0][d] = sign_pow(d);
        for l in 1..=d {
            let mut pr = ExactScalar::one();
            for k in 0..=(d - l) as i64 {
                pr *= ad(j - k);
            }
            g[l][l - 1] = pr;
        }
        g[d][d] = ad(j);
        g
    };
    let mut x = Vec::with_capacity(n);
    let mut y = Vec::with_capacity(n);
    let mut transformed = Vec::with_capacity(n);
    let lamslot = 2usize; // dented m=1 form of the corrugated Lax matrix
    for j in 0..n as i64 {
        let mut xj = a1(j);
        for l in 0..d as i64 {
            xj /= ad(j - l);
        }
        let mut yj = ExactScalar::one();
        for l in -1..d as i64 {
            yj /= ad(j - l);
        }
        let gj = g_mat(j);
        let gj_inv = crate::linalg::inverse(&gj)
            .ok_or_else(|| Error::DivisionByZero(format!("gauge matrix at {j}")))?;
        let disp = displayed_matrix(&coeffs.rows[j as usize], d, &[lamslot]);
        let to_lmat = |m: &Vec<Vec<ExactScalar>>| -> LaurentMatrix {
            m.iter()
                .map(|row| row.iter().map(|c| LaurentPoly::constant(c.clone())).collect())
                .collect()
        };
        let t1 = laurent_mat_mul(&to_lmat(&gj_inv), &disp);
        let t2 = laurent_mat_mul(&t1, &to_lmat(&g_mat(j + 1)));
        let scale = ad(j + 1).recip();
        let lt: LaurentMatrix =
            t2.iter().map(|row| row.iter().map(|c| c.scale(&scale)).collect()).collect();
        // verify the sparse shape entrywise
        let corner = &xj + &(&sign_pow(d) * &yj);
        for (r_i, row) in lt.iter().enumerate() {
            for (c_i, entry) in row.iter().enumerate() {
                let expect = if r_i == 0 && c_i == d - 1 {
                    LaurentPoly::constant(xj.clone())
                } else if r_i == 0 && c_i == d {
                    LaurentPoly::constant(corner.clone())
                } else if r_i == 1 && c_i == 0 {
                    LaurentPoly::monomial(1, ExactScalar::one())
                } else if (r_i >= 2 && c_i == r_i - 1) || (r_i == d && c_i == d) {
                    LaurentPoly::one()
                } else {
                    LaurentPoly::zero()
                };
                if *entry != expect {
                    return Err(Error::StructureMismatch {
                        kexp: r_i as u32,
                        lexp: c_i as i64,
                    });
                }
            }
        }
        x.push(xj);
        y.push(yj);
        transformed.push(lt);
    }
    Ok(CorrugatedGauge { x, y, transformed })
}
