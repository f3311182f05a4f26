//! Twisted polygons as coefficient arrays and lifted vertex windows.
//!
//! The canonical representation of a twisted n-gon in projective d-space is
//! an n-by-d array of rationals: row j holds the coefficients expressing the
//! lifted vertex d+1 steps ahead of V_j in terms of the window between them,
//! with the fixed coefficient (-1)^d on V_j itself. Generating the window
//! from the standard basis makes every (d+1)-window determinant exactly 1 and
//! the polygon twisted with a unimodular monodromy.
//!
//! Polygons whose monodromy determinant is not a rational (d+1)-th power have
//! no such array over Q; they are handled as raw vertex windows
//! ([`WindowPolygon`]) plus quasi-periodic coefficient reports with an
//! explicit multiplier certificate, and through the ratio coordinates
//! ([`tilde_from_rows`]) which are n-periodic for every n.

use num_integer::Integer;
use num_traits::{One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg;
use crate::projective::{proportional, LiftedVertex, ProjectiveTransform};
use crate::scalar::{nth_root, sign_pow, ExactScalar};

/// Canonical coordinates of a twisted n-gon: entry `[j][k-1]` is the
/// coefficient of the vertex k steps ahead of the window base, 1 <= k <= d.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientArray {
    pub d: usize,
    pub n: usize,
    pub rows: Vec<Vec<ExactScalar>>,
}

impl CoefficientArray {
    pub fn new(d: usize, n: usize, rows: Vec<Vec<ExactScalar>>) -> Result<Self> {
        if d < 2 {
            return Err(Error::DegenerateInput("dimension must be at least 2".into()));
        }
        if n < d + 2 {
            return Err(Error::DegenerateInput(format!("period {n} too small for dimension {d}")));
        }
        if rows.len() != n || rows.iter().any(|r| r.len() != d) {
            return Err(Error::DegenerateInput(format!("coefficient array must be {n} rows of {d} entries")));
        }
        Ok(CoefficientArray { d, n, rows })
    }

    pub fn entry(&self, j: i64, k: usize) -> &ExactScalar {
        debug_assert!((1..=self.d).contains(&k));
        &self.rows[j.rem_euclid(self.n as i64) as usize][k - 1]
    }

    /// Row-shifted array: the coefficients of the same polygon with vertex
    /// indices shifted by `c`.
    pub fn shift(&self, c: i64) -> CoefficientArray {
        let n = self.n as i64;
        let rows = (0..self.n)
            .map(|j| self.rows[(j as i64 + c).rem_euclid(n) as usize].clone())
            .collect();
        CoefficientArray { d: self.d, n: self.n, rows }
    }

    /// Product over j of column k (1-based), the building block of the
    /// closed-form Casimirs.
    pub fn column_product(&self, k: usize) -> ExactScalar {
        self.rows.iter().map(|r| r[k - 1].clone()).product()
    }
}

/// The transfer matrix: columns express the shifted window in the old window.
/// Its determinant is 1, which is what keeps window determinants constant.
pub fn transfer_matrix(d: usize, row: &[ExactScalar]) -> Vec<Vec<ExactScalar>> {
    let mut m = vec![vec![ExactScalar::zero(); d + 1]; d + 1];
    for c in 0..d {
        m[c + 1][c] = ExactScalar::one();
    }
    m[0][d] = sign_pow(d);
    for k in 1..=d {
        m[k][d] = row[k - 1].clone();
    }
    m
}

/// Generates `count` lifted vertices from the standard-basis seed window.
///
/// Every consecutive (d+1)-window has determinant exactly 1; this is asserted
/// and a violation reported as a genericity failure.
pub fn vertices_from_coefficients(coeffs: &CoefficientArray, count: usize) -> Result<Vec<LiftedVertex>> {
    let (d, n) = (coeffs.d, coeffs.n);
    if count < d + 1 {
        return Err(Error::DegenerateInput(format!("window of {count} vertices is shorter than {}", d + 1)));
    }
    let mut verts: Vec<Vec<ExactScalar>> = (0..=d)
        .map(|j| (0..=d).map(|i| if i == j { ExactScalar::one() } else { ExactScalar::zero() }).collect())
        .collect();
    let sgn = sign_pow(d);
    for idx in d + 1..count {
        let base = idx - d - 1;
        let row = &coeffs.rows[base % n];
        let mut v: Vec<ExactScalar> = verts[base].iter().map(|x| &sgn * x).collect();
        for k in 1..=d {
            for i in 0..=d {
                let t = &row[k - 1] * &verts[base + k][i];
                v[i] += t;
            }
        }
        verts.push(v);
    }
    for j in 0..count.saturating_sub(d) {
        let window: Vec<Vec<ExactScalar>> = verts[j..=j + d].to_vec();
        if linalg::det(&window) != ExactScalar::one() {
            return Err(Error::GenericityFailure { index: j as i64 });
        }
    }
    Ok(verts.into_iter().map(LiftedVertex).collect())
}

/// The monodromy transfer product over one period.
pub fn monodromy(coeffs: &CoefficientArray) -> ProjectiveTransform {
    let mut m = linalg::identity(coeffs.d + 1);
    for j in 0..coeffs.n {
        m = linalg::mat_mul(&m, &transfer_matrix(coeffs.d, &coeffs.rows[j]));
    }
    ProjectiveTransform(m)
}

/// True iff the monodromy is a scalar multiple of the identity.
pub fn is_closed(coeffs: &CoefficientArray) -> bool {
    let m = monodromy(coeffs).0;
    let id = linalg::identity(coeffs.d + 1);
    proportional(&m.concat(), &id.concat())
}

/// A twisted polygon in canonical coefficient form, with a generated vertex
/// window and its monodromy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistedPolygon {
    pub coeffs: CoefficientArray,
    pub window: Vec<LiftedVertex>,
    pub monodromy: ProjectiveTransform,
}

impl TwistedPolygon {
    pub fn from_coefficients(coeffs: CoefficientArray) -> Result<Self> {
        let window = vertices_from_coefficients(&coeffs, coeffs.n + coeffs.d + 1)?;
        let monodromy = monodromy(&coeffs);
        Ok(TwistedPolygon { coeffs, window, monodromy })
    }

    pub fn d(&self) -> usize {
        self.coeffs.d
    }

    pub fn n(&self) -> usize {
        self.coeffs.n
    }

    /// Lifted vertices 0..count, extending past the generated window through
    /// the exact monodromy relation.
    pub fn lifts(&self, count: usize) -> Result<Vec<LiftedVertex>> {
        vertices_from_coefficients(&self.coeffs, count)
    }

    pub fn as_window(&self, count: usize) -> Result<WindowPolygon> {
        Ok(WindowPolygon {
            d: self.d(),
            n: self.n(),
            verts: self.lifts(count)?,
            monodromy: self.monodromy.clone(),
        })
    }
}

/// A twisted polygon as a raw lifted vertex window with an exact monodromy
/// matrix: `verts[j+n] = monodromy * verts[j]` holds lift-exactly.
///
/// This form carries polygons whose canonical coefficients do not exist over
/// Q (the monodromy determinant obstruction).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowPolygon {
    pub d: usize,
    pub n: usize,
    pub verts: Vec<LiftedVertex>,
    pub monodromy: ProjectiveTransform,
}

impl WindowPolygon {
    /// Extends the window in place to at least `count` vertices.
    pub fn extend_to(&mut self, count: usize) {
        while self.verts.len() < count {
            let src = &self.verts[self.verts.len() - self.n];
            let next = self.monodromy.apply(src);
            self.verts.push(next);
        }
    }

    pub fn extended(mut self, count: usize) -> Self {
        self.extend_to(count);
        self
    }

    /// Checks that every d+1 consecutive vertices over one period span fully.
    pub fn check_generic(&self) -> Result<()> {
        let mut w = self.clone();
        w.extend_to(self.n + self.d + 1);
        for j in 0..self.n {
            let rows: Vec<Vec<ExactScalar>> = (0..=self.d).map(|t| w.verts[j + t].0.clone()).collect();
            if linalg::rank(&rows) != self.d + 1 {
                return Err(Error::GenericityFailure { index: j as i64 });
            }
        }
        Ok(())
    }
}

/// Outcome of coefficient extraction: canonical n-periodic coordinates when
/// they exist over Q, otherwise quasi-periodic rows with the multiplier
/// certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Coefficients {
    Periodic(CoefficientArray),
    QuasiPeriodic(QuasiPeriodicCoefficients),
}

impl Coefficients {
    pub fn periodic(self) -> Result<CoefficientArray> {
        match self {
            Coefficients::Periodic(a) => Ok(a),
            Coefficients::QuasiPeriodic(q) => Err(Error::NonPeriodic(format!(
                "gcd({}, {}) = {} with a non-trivial multiplier cycle",
                q.n,
                q.d + 1,
                q.n.gcd(&(q.d + 1))
            ))),
        }
    }

    /// Ratio coordinates, defined and n-periodic in every case.
    pub fn tilde(&self) -> Result<Vec<Vec<ExactScalar>>> {
        match self {
            Coefficients::Periodic(a) => {
                let rows_cycled: Vec<Vec<ExactScalar>> =
                    (0..=a.n).map(|j| a.rows[j % a.n].clone()).collect();
                tilde_from_rows(a.d, a.n, &rows_cycled)
            }
            Coefficients::QuasiPeriodic(q) => tilde_from_rows(q.d, q.n, &q.rows),
        }
    }
}

/// Quasi-periodic coefficient report: rows 0..=n satisfy the difference
/// equation exactly on the working window, and row n relates to row 0 by the
/// (d+1)-periodic multiplier sequence `t` with cyclic product 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuasiPeriodicCoefficients {
    pub d: usize,
    pub n: usize,
    /// n+1 rows; rows[n] is the continuation row, not an independent datum.
    pub rows: Vec<Vec<ExactScalar>>,
    pub t: QuasiPeriodicData,
}

/// The multiplier certificate of a quasi-periodic coefficient system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuasiPeriodicData {
    /// (d+1)-periodic multipliers with product exactly 1.
    pub t: Vec<ExactScalar>,
}

impl QuasiPeriodicData {
    pub fn validate(&self) -> Result<()> {
        let p: ExactScalar = self.t.iter().product();
        if p != ExactScalar::one() {
            return Err(Error::NormalizationFailure("multiplier product is not 1".into()));
        }
        Ok(())
    }
}

/// Ratio coordinates from coefficient rows 0..=n (row n used for wraparound):
/// entry (j,k) divides the previous-column entry of the next row by the
/// product of this entry and the next row's last entry.
pub fn tilde_from_rows(d: usize, n: usize, rows: &[Vec<ExactScalar>]) -> Result<Vec<Vec<ExactScalar>>> {
    debug_assert!(rows.len() > n);
    let mut out = Vec::with_capacity(n);
    for j in 0..n {
        let mut row = Vec::with_capacity(d);
        for k in 1..=d {
            let num = if k == 1 { ExactScalar::one() } else { rows[j + 1][k - 2].clone() };
            let den = &rows[j][k - 1] * &rows[j + 1][d - 1];
            if den.is_zero() {
                return Err(Error::DivisionByZero(format!("ratio coordinate at row {j}, column {k}")));
            }
            row.push(num / den);
        }
        out.push(row);
    }
    Ok(out)
}

/// Recovers coefficients from a twisted lift window.
///
/// `verts` must satisfy `verts[j+n] = monodromy * verts[j]` exactly with a
/// unimodular monodromy, and be at least n+d+1 long. Returns periodic
/// coordinates whenever the multiplier cycles close over Q.
pub fn coefficients_from_window(
    d: usize,
    n: usize,
    verts: &[LiftedVertex],
    mono: &ProjectiveTransform,
) -> Result<Coefficients> {
    if verts.len() < n + d + 1 {
        return Err(Error::DegenerateInput(format!(
            "window of {} vertices is too short for period {n}",
            verts.len()
        )));
    }
    if linalg::det(&mono.0) != ExactScalar::one() {
        return Err(Error::NormalizationFailure("monodromy determinant is not 1".into()));
    }
    // raw dependency solve: verts[j+d+1] in the window starting at j
    let mut b: Vec<Vec<ExactScalar>> = Vec::with_capacity(n);
    for j in 0..n {
        let cols: Vec<Vec<ExactScalar>> =
            (0..=d).map(|i| (0..=d).map(|t| verts[j + t].0[i].clone()).collect()).collect();
        let x = linalg::solve(&cols, &verts[j + d + 1].0)
            .ok_or_else(|| Error::DegenerateInput(format!("dependency solve is rank-deficient at index {j}")))?;
        if x[0].is_zero() {
            return Err(Error::GenericityFailure { index: j as i64 });
        }
        b.push(x);
    }
    renormalize_dependencies(d, n, &b)
}

/// Renormalizes raw n-periodic dependency rows (each `b[j]` expresses the
/// vertex d+1 ahead in the window at j, with `b[j][0]` the coefficient at the
/// base) into canonical coefficients via the multiplicative recurrence
/// stepping by d+1 with unit seeds, then repairs the period multipliers per
/// residue cycle when they close over Q.
pub fn renormalize_dependencies(d: usize, n: usize, b: &[Vec<ExactScalar>]) -> Result<Coefficients> {
    debug_assert_eq!(b.len(), n);
    let sgn = sign_pow(d);
    let need = 2 * n + d + 2;
    let mut c: Vec<ExactScalar> = vec![ExactScalar::one(); d + 1];
    for j in 0..need - d - 1 {
        if b[j % n][0].is_zero() {
            return Err(Error::GenericityFailure { index: (j % n) as i64 });
        }
        let next = &sgn * &c[j] / &b[j % n][0];
        c.push(next);
    }
    // multipliers per residue class mod d+1
    let t: Vec<ExactScalar> = (0..=d).map(|r| &c[r + n] / &c[r]).collect();
    // walk each residue cycle r -> r+n (mod d+1); periodic iff each cycle
    // multiplies to 1, in which case gamma makes every multiplier 1
    let modulus = d + 1;
    let mut gamma: Vec<Option<ExactScalar>> = vec![None; modulus];
    let mut periodic = true;
    for start in 0..modulus {
        if gamma[start].is_some() {
            continue;
        }
        let mut cycle_product = ExactScalar::one();
        let mut r = start;
        loop {
            cycle_product *= &t[r];
            r = (r + n) % modulus;
            if r == start {
                break;
            }
        }
        if cycle_product != ExactScalar::one() {
            periodic = false;
            break;
        }
        gamma[start] = Some(ExactScalar::one());
        let mut r = start;
        loop {
            let nr = (r + n) % modulus;
            if nr == start {
                break;
            }
            let g = gamma[r].clone().unwrap() / &t[r];
            gamma[nr] = Some(g);
            r = nr;
        }
    }
    if periodic {
        let gamma: Vec<ExactScalar> = gamma.into_iter().map(|g| g.unwrap()).collect();
        let cc: Vec<ExactScalar> =
            c.iter().enumerate().map(|(j, cj)| &gamma[j % modulus] * cj).collect();
        let rows: Vec<Vec<ExactScalar>> = (0..n)
            .map(|j| (1..=d).map(|k| &b[j][k] * &cc[j + d + 1] / &cc[j + k]).collect())
            .collect();
        // the repaired multipliers must all be 1; spot-check one period ahead
        for j in 0..d {
            for k in 1..=d {
                let cont = &b[(j + n) % n][k] * &cc[j + n + d + 1] / &cc[j + n + k];
                if cont != rows[j][k - 1] {
                    return Err(Error::NormalizationFailure(format!(
                        "period repair failed at row {j}, column {k}"
                    )));
                }
            }
        }
        Ok(Coefficients::Periodic(CoefficientArray { d, n, rows }))
    } else {
        let rows: Vec<Vec<ExactScalar>> = (0..=n)
            .map(|j| (1..=d).map(|k| &b[j % n][k] * &c[j + d + 1] / &c[j + k]).collect())
            .collect();
        let cert = QuasiPeriodicData { t };
        cert.validate()?;
        Ok(Coefficients::QuasiPeriodic(QuasiPeriodicCoefficients { d, n, rows, t: cert }))
    }
}

/// Recovers coefficients from arbitrary projective point lifts.
///
/// The sequence must be twisted: each point n steps ahead is the image of its
/// partner under one projective transformation, which is recovered from the
/// data, determinant-normalized (this is where a non-rational (d+1)-th root
/// makes the canonical form impossible), and used to rebuild exact lifts.
pub fn coefficients_from_vertices(points: &[LiftedVertex], d: usize, n: usize) -> Result<Coefficients> {
    if points.len() < n + d + 2 {
        return Err(Error::DegenerateInput(format!(
            "need at least {} points for period {n} in dimension {d}, got {}",
            n + d + 2,
            points.len()
        )));
    }
    let head = &points[..points.len() - n];
    let tail = &points[n..];
    let g = crate::projective::projective_equivalence(head, tail, d)?
        .ok_or_else(|| Error::DegenerateInput("sequence is not twisted: no monodromy matches".into()))?;
    let delta = linalg::det(&g.0);
    if delta.is_zero() {
        return Err(Error::DegenerateInput("monodromy is singular".into()));
    }
    let root = nth_root(&delta, (d + 1) as u32).ok_or_else(|| {
        Error::NonPeriodic(format!(
            "monodromy determinant {} has no rational {}-th root",
            delta,
            d + 1
        ))
    })?;
    let scale = root.recip();
    let mono = ProjectiveTransform(
        g.0.iter().map(|row| row.iter().map(|x| x * &scale).collect()).collect(),
    );
    // rebuild exact twisted lifts from the first n points
    let mut verts: Vec<LiftedVertex> = points[..n].to_vec();
    while verts.len() < n + d + 1 {
        let v = mono.apply(&verts[verts.len() - n]);
        verts.push(v);
    }
    coefficients_from_window(d, n, &verts, &mono)
}

/// Seeded random polygon with nonzero entries bounded by `bound`.
///
/// Randomness comes from ChaCha8 keyed with `seed_from_u64`, so identical
/// seeds give identical arrays on every platform. Resamples until the window
/// generation passes its genericity assertion.
pub fn random_generic_polygon(d: usize, n: usize, seed: u64, bound: u32) -> Result<CoefficientArray> {
    const RETRIES: usize = 64;
    if bound == 0 {
        return Err(Error::DegenerateInput("bound must be positive".into()));
    }
    if n < d + 2 {
        return Err(Error::DegenerateInput(format!("period {n} too small for dimension {d}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..RETRIES {
        let rows: Vec<Vec<ExactScalar>> = (0..n)
            .map(|_| {
                (0..d)
                    .map(|_| {
                        let num = rng.gen_range(1..=bound as i64) * if rng.gen::<bool>() { 1 } else { -1 };
                        let den = rng.gen_range(1..=bound as i64);
                        crate::scalar::rat(num, den)
                    })
                    .collect()
            })
            .collect();
        let coeffs = CoefficientArray { d, n, rows };
        if vertices_from_coefficients(&coeffs, n + d + 1).is_ok() {
            return Ok(coeffs);
        }
    }
    Err(Error::ExhaustedRetries(RETRIES))
}

/// Corrugation class data: two clusters of q and r consecutive vertices whose
/// span has projective dimension l.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CorrugationSpec {
    pub q: usize,
    pub r: usize,
    pub l: usize,
}

impl CorrugationSpec {
    pub fn new(q: usize, r: usize, l: usize) -> Result<Self> {
        if q < 2 || r < 2 || l > q + r - 2 || l < q.max(r) {
            return Err(Error::DegenerateInput(format!(
                "corrugation spec ({q},{r};{l}) violates q,r >= 2, max(q,r) <= l <= q+r-2"
            )));
        }
        Ok(CorrugationSpec { q, r, l })
    }

    /// The fully corrugated class.
    pub fn corrugated() -> Self {
        CorrugationSpec { q: 2, r: 2, l: 2 }
    }
}

/// Zeroes the middle coefficient columns, restricting to corrugated polygons.
/// In dimension 2 there is nothing to zero.
pub fn make_corrugated(coeffs: &CoefficientArray) -> Result<CoefficientArray> {
    make_partially_corrugated(coeffs, 1, 2.min(coeffs.d))
}

/// Zeroes columns m+1 ..= d+m-l, the coefficient form of the
/// (m+1, l-m+1; l)-corrugated condition.
pub fn make_partially_corrugated(coeffs: &CoefficientArray, m: usize, l: usize) -> Result<CoefficientArray> {
    let d = coeffs.d;
    if m == 0 || m >= l || l > d {
        return Err(Error::DegenerateInput(format!(
            "partial corrugation needs 1 <= m < l <= d, got m={m}, l={l}, d={d}"
        )));
    }
    let mut rows = coeffs.rows.clone();
    for row in rows.iter_mut() {
        for k in m + 1..=d + m - l {
            row[k - 1] = ExactScalar::zero();
        }
    }
    let out = CoefficientArray { d, n: coeffs.n, rows };
    vertices_from_coefficients(&out, out.n + d + 1)?;
    Ok(out)
}

/// Rank test of the two-cluster span condition over one full period.
pub fn is_partially_corrugated(poly: &WindowPolygon, spec: &CorrugationSpec) -> Result<bool> {
    let (d, n) = (poly.d, poly.n);
    let CorrugationSpec { q, r, l } = *spec;
    if q + d < l {
        return Err(Error::DegenerateInput("cluster gap would be negative".into()));
    }
    let mut w = poly.clone();
    w.extend_to(n + q + r + d - l + 1);
    for k in 0..n {
        let idxs: Vec<usize> = (k..k + q).chain(k + q + d - l..k + q + d - l + r).collect();
        let rows: Vec<Vec<ExactScalar>> = idxs.iter().map(|&i| w.verts[i].0.clone()).collect();
        if linalg::rank(&rows) != l + 1 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Corrugated predicate: consecutive pairs of edges d apart span a 2-plane.
pub fn is_corrugated(poly: &WindowPolygon) -> Result<bool> {
    is_partially_corrugated(poly, &CorrugationSpec::corrugated())
}

/// Embeds a generic polygon of dimension c as a partially corrugated polygon
/// of dimension c+p-2 by transplanting its sparse vertex dependencies.
///
/// The image satisfies the dependency pattern with nonzero coefficients only
/// at columns 1..=m and d+m-c+1..=d; its canonical coefficients need not
/// exist over Q (the monodromy determinant of the image is a free rational),
/// so the result is returned as a raw window polygon.
pub fn psi_embed(src: &CoefficientArray, m: usize, p: usize) -> Result<WindowPolygon> {
    let c = src.d;
    if p < 2 {
        return Err(Error::DegenerateInput("jump depth p must be at least 2".into()));
    }
    if m == 0 || m >= c {
        return Err(Error::DegenerateInput(format!("dent position m={m} out of range 1..{c}")));
    }
    let d = c + p - 2;
    let n = src.n;
    let ell = c;
    let src_verts = vertices_from_coefficients(src, n + d + 2)?;
    // dependency pattern: 0, 1..=m, d+m-ell+1..=d, d+1
    let pattern: Vec<usize> =
        std::iter::once(0).chain(1..=m).chain(d + m - ell + 1..=d + 1).collect();
    let mut brows: Vec<Vec<ExactScalar>> = Vec::with_capacity(n);
    for j in 0..n {
        let stacked: Vec<Vec<ExactScalar>> = (0..=c)
            .map(|i| pattern.iter().map(|&t| src_verts[j + t].0[i].clone()).collect())
            .collect();
        let kernel = linalg::nullspace(&stacked);
        if kernel.len() != 1 {
            return Err(Error::DegenerateInput(format!(
                "dependency at index {j} is not one-dimensional"
            )));
        }
        let kv = &kernel[0];
        let last = kv.last().unwrap();
        if last.is_zero() {
            return Err(Error::NormalizationFailure(format!(
                "leading dependency coefficient vanishes at index {j}"
            )));
        }
        // full (d+1)-row: verts[j+d+1] = sum_t row[t] * verts[j+t]
        let mut full = vec![ExactScalar::zero(); d + 1];
        for (slot, &t) in pattern.iter().enumerate().take(pattern.len() - 1) {
            full[t] = -&kv[slot] / last;
        }
        if full[0].is_zero() {
            return Err(Error::NormalizationFailure(format!(
                "dependency at index {j} is degenerate at the window base"
            )));
        }
        brows.push(full);
    }
    // generate the image window from the transplanted recurrence
    let count = 2 * n + 2 * d + 4;
    let mut verts: Vec<Vec<ExactScalar>> = (0..=d)
        .map(|j| (0..=d).map(|i| if i == j { ExactScalar::one() } else { ExactScalar::zero() }).collect())
        .collect();
    for idx in d + 1..count {
        let j = idx - d - 1;
        let row = &brows[j % n];
        let mut v = vec![ExactScalar::zero(); d + 1];
        for (t, coeff) in row.iter().enumerate() {
            if !coeff.is_zero() {
                for i in 0..=d {
                    let add = coeff * &verts[j + t][i];
                    v[i] += add;
                }
            }
        }
        verts.push(v);
    }
    let mono = ProjectiveTransform((0..=d).map(|i| (0..=d).map(|t| verts[n + t][i].clone()).collect()).collect());
    let out = WindowPolygon {
        d,
        n,
        verts: verts.into_iter().map(LiftedVertex).collect(),
        monodromy: mono,
    };
    out.check_generic()?;
    Ok(out)
}

/// Random closed polygon: n points of the projective plane or space with
/// every d+1 cyclically-consecutive vertices in general position. The
/// monodromy of the returned window is the identity.
pub fn random_closed_polygon(d: usize, n: usize, seed: u64, bound: u32) -> Result<WindowPolygon> {
    const RETRIES: usize = 256;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    'outer: for _ in 0..RETRIES {
        let pts: Vec<LiftedVertex> = (0..n)
            .map(|_| {
                let mut v: Vec<ExactScalar> =
                    (0..d).map(|_| crate::scalar::rat_int(rng.gen_range(-(bound as i64)..=bound as i64))).collect();
                v.push(ExactScalar::one());
                LiftedVertex(v)
            })
            .collect();
        for k in 0..n {
            let rows: Vec<Vec<ExactScalar>> = (0..=d).map(|t| pts[(k + t) % n].0.clone()).collect();
            if linalg::rank(&rows) != d + 1 {
                continue 'outer;
            }
        }
        let mut verts = pts.clone();
        while verts.len() < 2 * n + d + 2 {
            verts.push(pts[verts.len() % n].clone());
        }
        return Ok(WindowPolygon {
            d,
            n,
            verts,
            monodromy: ProjectiveTransform(linalg::identity(d + 1)),
        });
    }
    Err(Error::ExhaustedRetries(RETRIES))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_int};

    fn all_ones(d: usize, n: usize) -> CoefficientArray {
        CoefficientArray { d, n, rows: vec![vec![ExactScalar::one(); d]; n] }
    }

    #[test]
    fn zero_coefficients_give_a_periodic_window_in_2d() {
        // with all coefficients zero the recurrence degenerates to V_{j+3} = V_j
        let coeffs = CoefficientArray { d: 2, n: 5, rows: vec![vec![ExactScalar::zero(); 2]; 5] };
        let v = vertices_from_coefficients(&coeffs, 12).unwrap();
        for j in 0..9 {
            assert_eq!(v[j], v[j + 3]);
        }
    }

    #[test]
    fn all_ones_3d_fourth_vertex() {
        let v = vertices_from_coefficients(&all_ones(3, 7), 8).unwrap();
        let expect: Vec<ExactScalar> = [-1i64, 1, 1, 1].iter().map(|&x| rat_int(x)).collect();
        assert_eq!(v[4].0, expect, "V_4 = V_3 + V_2 + V_1 - V_0 from the basis start");
    }

    #[test]
    fn window_determinants_are_one() {
        let coeffs = random_generic_polygon(2, 5, 11, 6).unwrap();
        let v = vertices_from_coefficients(&coeffs, 14).unwrap();
        for j in 0..11 {
            let m: Vec<Vec<ExactScalar>> = (0..3).map(|t| v[j + t].0.clone()).collect();
            assert_eq!(linalg::det(&m), ExactScalar::one());
        }
    }

    #[test]
    fn twisted_window_follows_monodromy() {
        let coeffs = random_generic_polygon(3, 7, 3, 6).unwrap();
        let poly = TwistedPolygon::from_coefficients(coeffs).unwrap();
        let v = poly.lifts(poly.n() + 5).unwrap();
        for j in 0..5 {
            assert_eq!(poly.monodromy.apply(&v[j]).0, v[j + poly.n()].0);
        }
    }

    #[test]
    fn roundtrip_coefficients_vertices_coefficients() {
        for (d, n, seed) in [(2usize, 5usize, 1u64), (3, 7, 2), (4, 7, 3)] {
            let coeffs = random_generic_polygon(d, n, seed, 6).unwrap();
            let poly = TwistedPolygon::from_coefficients(coeffs.clone()).unwrap();
            let back = coefficients_from_window(d, n, &poly.window, &poly.monodromy)
                .unwrap()
                .periodic()
                .unwrap();
            assert_eq!(back, coeffs);
        }
    }

    #[test]
    fn coefficients_invariant_under_unimodular_transform() {
        let coeffs = random_generic_polygon(3, 7, 5, 6).unwrap();
        let poly = TwistedPolygon::from_coefficients(coeffs.clone()).unwrap();
        // a fixed unimodular transform
        let g = vec![
            vec![rat_int(1), rat_int(2), rat_int(0), rat_int(1)],
            vec![rat_int(0), rat_int(1), rat_int(1), rat_int(0)],
            vec![rat_int(0), rat_int(0), rat_int(1), rat_int(3)],
            vec![rat_int(0), rat_int(0), rat_int(0), rat_int(1)],
        ];
        assert_eq!(linalg::det(&g), ExactScalar::one());
        let moved: Vec<LiftedVertex> =
            poly.window.iter().map(|v| LiftedVertex(linalg::mat_vec(&g, &v.0))).collect();
        let gm = linalg::mat_mul(&linalg::mat_mul(&g, &poly.monodromy.0), &linalg::inverse(&g).unwrap());
        let back = coefficients_from_window(3, 7, &moved, &ProjectiveTransform(gm))
            .unwrap()
            .periodic()
            .unwrap();
        assert_eq!(back, coeffs);
    }

    #[test]
    fn tilde_invariant_under_lift_rescaling() {
        let coeffs = random_generic_polygon(3, 7, 8, 6).unwrap();
        let poly = TwistedPolygon::from_coefficients(coeffs.clone()).unwrap();
        let tilde0 = Coefficients::Periodic(coeffs).tilde().unwrap();
        // rescale each lift by a fixed pattern of nonzero rationals
        let scales = [rat(2, 3), rat(-1, 2), rat_int(3), rat(5, 7), rat(-4, 3)];
        let rescaled: Vec<LiftedVertex> = poly
            .lifts(12)
            .unwrap()
            .iter()
            .enumerate()
            .map(|(i, v)| LiftedVertex(v.0.iter().map(|x| x * &scales[i % scales.len()]).collect()))
            .collect();
        // raw-point path: recovers a (possibly different) valid representative
        let got = coefficients_from_vertices(&rescaled, 3, 7).unwrap();
        assert_eq!(got.tilde().unwrap(), tilde0);
    }

    #[test]
    fn tilde_all_ones_and_formula_oracle() {
        let t = Coefficients::Periodic(all_ones(3, 7)).tilde().unwrap();
        assert!(t.iter().all(|row| row.iter().all(|x| *x == ExactScalar::one())));

        let coeffs = random_generic_polygon(2, 5, 21, 6).unwrap();
        let t = Coefficients::Periodic(coeffs.clone()).tilde().unwrap();
        for j in 0..5 {
            let jn = (j + 1) % 5;
            // direct evaluation of both entries in 2d
            let e1 = ExactScalar::one() / (&coeffs.rows[j][0] * &coeffs.rows[jn][1]);
            let e2 = &coeffs.rows[jn][0] / (&coeffs.rows[j][1] * &coeffs.rows[jn][1]);
            assert_eq!(t[j][0], e1);
            assert_eq!(t[j][1], e2);
        }
    }

    #[test]
    fn tilde_invariant_under_multiplier_relift() {
        // admissible multiplier sequence: (d+1)-periodic with product 1
        let coeffs = random_generic_polygon(3, 7, 13, 6).unwrap();
        let t = [rat(2, 1), rat(1, 3), rat(-3, 4), rat(-2, 1)];
        let prod: ExactScalar = t.iter().product();
        assert_eq!(prod, ExactScalar::one());
        let relift: Vec<Vec<ExactScalar>> = (0..8)
            .map(|j| {
                (1..=3)
                    .map(|k| {
                        coeffs.entry(j as i64, k) * &t[j % 4] / &t[(j + k) % 4]
                    })
                    .collect()
            })
            .collect();
        let tilde_relift = tilde_from_rows(3, 7, &relift).unwrap();
        let tilde0 = Coefficients::Periodic(coeffs).tilde().unwrap();
        assert_eq!(tilde_relift, tilde0);
    }

    #[test]
    fn monodromy_conjugation_and_shift_invariance() {
        let coeffs = random_generic_polygon(3, 7, 17, 6).unwrap();
        let m0 = monodromy(&coeffs).0;
        // the shifted polygon's monodromy is the transfer conjugate
        let n0 = transfer_matrix(3, &coeffs.rows[0]);
        let m1 = monodromy(&coeffs.shift(1)).0;
        let conj = linalg::mat_mul(&linalg::mat_mul(&linalg::inverse(&n0).unwrap(), &m0), &n0);
        assert_eq!(m1, conj);
        // characteristic polynomial is shift-invariant: compare det(M - x I)
        // at d+2 sample points
        for shift in 1..7 {
            let ms = monodromy(&coeffs.shift(shift)).0;
            for x in [2i64, 3, 5, 7, 11] {
                let probe = |m: &Vec<Vec<ExactScalar>>| {
                    let mut a = m.clone();
                    for i in 0..4 {
                        a[i][i] -= rat_int(x);
                    }
                    linalg::det(&a)
                };
                assert_eq!(probe(&m0), probe(&ms));
            }
        }
    }

    #[test]
    fn closed_polygon_roundtrip_is_closed() {
        let w = random_closed_polygon(2, 5, 7, 8).unwrap();
        let coeffs = coefficients_from_vertices(&w.verts, 2, 5).unwrap().periodic().unwrap();
        assert!(is_closed(&coeffs));
        // a generic twisted polygon is not closed
        let open = random_generic_polygon(2, 5, 7, 6).unwrap();
        assert!(!is_closed(&open));
    }

    #[test]
    fn random_generation_is_deterministic_and_seed_sensitive() {
        let a = random_generic_polygon(3, 7, 42, 10).unwrap();
        let b = random_generic_polygon(3, 7, 42, 10).unwrap();
        assert_eq!(a, b);
        let c = random_generic_polygon(3, 7, 43, 10).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn corrugated_zeroing_and_predicate() {
        let coeffs = random_generic_polygon(3, 7, 9, 6).unwrap();
        let cor = make_corrugated(&coeffs).unwrap();
        assert!(cor.rows.iter().all(|r| r[1].is_zero()));
        let poly = TwistedPolygon::from_coefficients(cor).unwrap();
        let w = poly.as_window(7 + 3 + 5).unwrap();
        assert!(is_corrugated(&w).unwrap());
        // spans of (v_k, v_{k+1}, v_{k+3}, v_{k+4}) have rank exactly 3
        for k in 0..7 {
            let rows: Vec<Vec<ExactScalar>> =
                [k, k + 1, k + 3, k + 4].iter().map(|&i| w.verts[i].0.clone()).collect();
            assert_eq!(linalg::rank(&rows), 3);
        }
        // a generic (non-corrugated) polygon fails the predicate
        let generic = TwistedPolygon::from_coefficients(coeffs).unwrap();
        assert!(!is_corrugated(&generic.as_window(15).unwrap()).unwrap());
    }

    #[test]
    fn every_2d_polygon_is_corrugated() {
        let coeffs = random_generic_polygon(2, 6, 31, 6).unwrap();
        let poly = TwistedPolygon::from_coefficients(coeffs).unwrap();
        assert!(is_corrugated(&poly.as_window(14).unwrap()).unwrap());
    }

    #[test]
    fn partial_corrugation_predicate_stacks() {
        // (q,r;l)-corrugated iff (q+1,r+1;l+1)-corrugated while l <= d-2
        let coeffs = random_generic_polygon(4, 7, 33, 6).unwrap();
        let par = make_partially_corrugated(&coeffs, 1, 2).unwrap();
        let poly = TwistedPolygon::from_coefficients(par).unwrap();
        let w = poly.as_window(24).unwrap();
        assert!(is_partially_corrugated(&w, &CorrugationSpec::new(2, 2, 2).unwrap()).unwrap());
        assert!(is_partially_corrugated(&w, &CorrugationSpec::new(3, 3, 3).unwrap()).unwrap());
        assert!(is_partially_corrugated(&w, &CorrugationSpec::new(4, 4, 4).unwrap()).unwrap());
        // and a generic 4d polygon fails every level of the ladder
        let generic = TwistedPolygon::from_coefficients(coeffs).unwrap();
        let wg = generic.as_window(24).unwrap();
        assert!(!is_partially_corrugated(&wg, &CorrugationSpec::new(2, 2, 2).unwrap()).unwrap());
        assert!(!is_partially_corrugated(&wg, &CorrugationSpec::new(3, 3, 3).unwrap()).unwrap());
    }

    #[test]
    fn quasi_periodic_hexagon_reports_certificate() {
        // d=2, n=6: gcd(n, d+1) = 3, so the multiplier residue classes are
        // fixed points and a polygon built from genuinely quasi-periodic data
        // (non-constant t) has no periodic representative over Q.
        let (d, n) = (2usize, 6usize);
        let base = random_generic_polygon(d, n, 3, 6).unwrap();
        let t = [rat_int(2), rat(3, 4), rat(2, 3)];
        let prod: ExactScalar = t.iter().product();
        assert_eq!(prod, ExactScalar::one());
        // rows for j in 0..2n, quasi-periodic continuation after row n-1
        let row_at = |j: usize| -> Vec<ExactScalar> {
            let mut r = base.rows[j % n].clone();
            if j >= n {
                for (k, x) in r.iter_mut().enumerate() {
                    *x *= &t[j % 3] / &t[(j + k + 1) % 3];
                }
            }
            r
        };
        // generate lifts directly from the quasi-periodic recurrence
        let count = n + d + 4;
        let mut verts: Vec<Vec<ExactScalar>> = (0..=d)
            .map(|j| (0..=d).map(|i| if i == j { ExactScalar::one() } else { ExactScalar::zero() }).collect())
            .collect();
        for idx in d + 1..count {
            let j = idx - d - 1;
            let row = row_at(j);
            let mut v: Vec<ExactScalar> = verts[j].iter().map(|x| x * sign_pow(d)).collect();
            for k in 1..=d {
                for i in 0..=d {
                    let add = &row[k - 1] * &verts[j + k][i];
                    v[i] += add;
                }
            }
            verts.push(v);
        }
        let pts: Vec<LiftedVertex> = verts.into_iter().map(LiftedVertex).collect();
        match coefficients_from_vertices(&pts, d, n) {
            Ok(Coefficients::QuasiPeriodic(q)) => {
                q.t.validate().unwrap();
                // the certificate multipliers are non-constant
                assert!(q.t.t.iter().any(|x| *x != q.t.t[0]));
                // ratio coordinates agree with those of the defining rows
                let rows_full: Vec<Vec<ExactScalar>> = (0..=n).map(row_at).collect();
                let t0 = tilde_from_rows(d, n, &rows_full).unwrap();
                let t1 = tilde_from_rows(d, n, &q.rows).unwrap();
                assert_eq!(t0, t1);
            }
            other => panic!("expected a quasi-periodic report, got {other:?}"),
        }
    }

    #[test]
    fn psi_embed_sparse_pattern_and_predicate() {
        let src = random_generic_polygon(2, 7, 800, 6).unwrap();
        let img = psi_embed(&src, 1, 3).unwrap();
        assert_eq!(img.d, 3);
        assert!(is_partially_corrugated(&img, &CorrugationSpec::new(2, 2, 2).unwrap()).unwrap());
        // injectivity probe: a different source gives a different image
        let src2 = random_generic_polygon(2, 7, 801, 6).unwrap();
        let img2 = psi_embed(&src2, 1, 3).unwrap();
        assert_ne!(img.verts, img2.verts);
    }

    #[test]
    fn psi_embed_c3_pattern() {
        let src = random_generic_polygon(3, 7, 901, 6).unwrap();
        let img = psi_embed(&src, 2, 3).unwrap();
        assert_eq!(img.d, 4);
        assert!(is_partially_corrugated(&img, &CorrugationSpec::new(3, 2, 3).unwrap()).unwrap());
    }
}

