//! The pentagram map engine: generalized maps driven by jump tuples, dented
//! and deep-dented specializations, duality maps, corrugated and partially
//! corrugated maps, index-shift detection, and the scaling action.
//!
//! All maps run geometrically on an exact lifted vertex window and re-encode
//! the image through the coefficient extraction pipeline, so applying a map
//! to a canonical polygon yields a canonical polygon.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::polygon::{
    coefficients_from_window, is_corrugated, is_partially_corrugated, CoefficientArray,
    CorrugationSpec, TwistedPolygon, WindowPolygon,
};
use crate::projective::{
    hyperplane_through, intersect_hyperplanes, meet_spans, projective_equivalence, Hyperplane,
    LiftedVertex, ProjectiveTransform,
};
use crate::scalar::{pow_i64, sign_pow, ExactScalar};
use num_traits::Zero;

/// Jump tuple of d-1 positive steps selecting the vertices of a diagonal
/// hyperplane.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JumpTuple(pub Vec<usize>);

impl JumpTuple {
    pub fn ones(d: usize) -> Self {
        JumpTuple(vec![1; d - 1])
    }

    /// The tuple taken in the opposite order.
    pub fn reversed(&self) -> Self {
        JumpTuple(self.0.iter().rev().copied().collect())
    }

    /// Partial sums 0, i_1, i_1+i_2, ...; the vertex offsets of the plane.
    pub fn offsets(&self) -> Vec<usize> {
        let mut s = vec![0usize];
        for &i in &self.0 {
            s.push(s.last().unwrap() + i);
        }
        s
    }

    /// Sum of all steps.
    pub fn span(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn validate(&self, d: usize) -> Result<()> {
        if self.0.len() != d - 1 || self.0.contains(&0) {
            return Err(Error::DegenerateInput(format!(
                "jump tuple {:?} must have {} positive entries",
                self.0,
                d - 1
            )));
        }
        Ok(())
    }
}

/// Serializable description of which pentagram map to apply.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum MapSpec {
    Generalized {
        #[serde(rename = "I")]
        i: Vec<usize>,
        #[serde(rename = "J")]
        j: Vec<usize>,
    },
    Dented { m: usize },
    DeepDented { m: usize, p: usize },
    ShortDiagonal,
    Corrugated,
    PartiallyCorrugated { q: usize, r: usize, l: usize },
}

impl MapSpec {
    /// The (I, J) realization for the jump-tuple family of maps.
    ///
    /// Dented m with the value 2 at the m-th place; the degenerate m = 0 and
    /// m = d collapse to the all-ones tuple (the map is then a pure shift).
    /// Corrugated variants are not jump-tuple maps and report a mismatch.
    pub fn jump_tuples(&self, d: usize) -> Result<(JumpTuple, JumpTuple)> {
        let ones = JumpTuple::ones(d);
        let tuple = |m: usize, p: usize| -> Result<JumpTuple> {
            if m > d {
                return Err(Error::DegenerateInput(format!("dent position {m} exceeds dimension {d}")));
            }
            let mut v = vec![1usize; d - 1];
            if (1..=d - 1).contains(&m) {
                v[m - 1] = p;
            }
            Ok(JumpTuple(v))
        };
        match self {
            MapSpec::Generalized { i, j } => {
                let it = JumpTuple(i.clone());
                let jt = JumpTuple(j.clone());
                it.validate(d)?;
                jt.validate(d)?;
                Ok((it, jt))
            }
            MapSpec::Dented { m } => Ok((tuple(*m, 2)?, ones)),
            MapSpec::DeepDented { m, p } => {
                if *p < 2 {
                    return Err(Error::DegenerateInput("jump depth p must be at least 2".into()));
                }
                if !(1..=d - 1).contains(m) {
                    return Err(Error::DegenerateInput(format!("dent position {m} out of 1..={}", d - 1)));
                }
                Ok((tuple(*m, *p)?, ones))
            }
            MapSpec::ShortDiagonal => Ok((JumpTuple(vec![2; d - 1]), ones)),
            MapSpec::Corrugated | MapSpec::PartiallyCorrugated { .. } => Err(Error::VariantMismatch(
                "corrugated maps intersect subspaces, not jump-tuple hyperplanes".into(),
            )),
        }
    }
}

/// The diagonal hyperplane at base vertex k selected by the jump tuple.
pub fn diagonal_plane(poly: &WindowPolygon, k: usize, tuple: &JumpTuple) -> Result<Hyperplane> {
    tuple.validate(poly.d)?;
    let offs = tuple.offsets();
    let pts: Vec<LiftedVertex> = offs.iter().map(|&o| poly.verts[k + o].clone()).collect();
    hyperplane_through(&pts, poly.d).map_err(|_| Error::DegenerateSpan {
        index: k as i64,
        count: offs.len(),
    })
}

/// One period of image vertices of the jump-tuple map, extended to a full
/// twisted window by the (unchanged) monodromy.
fn jump_map_window(poly: &WindowPolygon, it: &JumpTuple, jt: &JumpTuple) -> Result<WindowPolygon> {
    let (d, n) = (poly.d, poly.n);
    let reach = it.span() + jt.span();
    let mut src = poly.clone();
    src.extend_to(n + reach + d + 2);
    let joffs = jt.offsets();
    let mut verts = Vec::with_capacity(2 * n + d + 2);
    for k in 0..n {
        let planes: Vec<Hyperplane> = joffs
            .iter()
            .map(|&o| diagonal_plane(&src, k + o, it))
            .collect::<Result<_>>()?;
        let pt = intersect_hyperplanes(&planes, d)
            .map_err(|_| Error::DegenerateIntersection { index: k as i64, expected: 1, got: 0 })?;
        verts.push(pt);
    }
    let mut image = WindowPolygon { d, n, verts, monodromy: poly.monodromy.clone() };
    image.extend_to(2 * n + d + 2);
    image.check_generic()?;
    Ok(image)
}

/// Corrugated map window: intersect the diagonal through each vertex and its
/// d-th successor with the next such diagonal.
fn corrugated_map_window(poly: &WindowPolygon, inverse: bool) -> Result<WindowPolygon> {
    let (d, n) = (poly.d, poly.n);
    let mut src = poly.clone();
    src.extend_to(n + d + 2);
    if !is_corrugated(&src)? {
        return Err(Error::NotCorrugated { index: 0 });
    }
    let mut verts = Vec::with_capacity(2 * n + d + 2);
    for k in 0..n {
        let (a, b) = if inverse {
            // sides of the polygon, shift-normalized to the window base
            (
                vec![src.verts[k].0.clone(), src.verts[k + 1].0.clone()],
                vec![src.verts[k + d].0.clone(), src.verts[k + d + 1].0.clone()],
            )
        } else {
            (
                vec![src.verts[k].0.clone(), src.verts[k + d].0.clone()],
                vec![src.verts[k + 1].0.clone(), src.verts[k + d + 1].0.clone()],
            )
        };
        let met = meet_spans(&a, &b);
        if met.len() != 1 {
            return Err(Error::DegenerateIntersection { index: k as i64, expected: 1, got: met.len() });
        }
        verts.push(LiftedVertex(met.into_iter().next().unwrap()));
    }
    let mut image = WindowPolygon { d, n, verts, monodromy: poly.monodromy.clone() };
    image.extend_to(2 * n + d + 2);
    image.check_generic()?;
    Ok(image)
}

/// Partially corrugated map window: iterated meet of l+1 consecutive
/// diagonal subspaces, with the rank expected to drop by one at each step.
pub fn partially_corrugated_map_window(
    poly: &WindowPolygon,
    spec: &CorrugationSpec,
) -> Result<WindowPolygon> {
    let (d, n) = (poly.d, poly.n);
    let CorrugationSpec { q, r, l } = *spec;
    let mut src = poly.clone();
    src.extend_to(n + l + q + r + d + 2);
    if !is_partially_corrugated(&src, spec)? {
        return Err(Error::NotPartiallyCorrugated { q, r, l, index: 0 });
    }
    let mut verts = Vec::with_capacity(2 * n + d + 2);
    for k in 0..n {
        let span_at = |j: usize| -> Vec<Vec<ExactScalar>> {
            (j..j + q)
                .chain(j + q + d - l..j + q + d - l + r)
                .map(|i| src.verts[i].0.clone())
                .collect()
        };
        let mut cur = linalg::row_basis(&span_at(k));
        for i in 1..=l {
            cur = meet_spans(&cur, &span_at(k + i));
            let expected = l + 1 - i;
            if cur.len() != expected {
                return Err(Error::DegenerateIntersection {
                    index: k as i64,
                    expected,
                    got: cur.len(),
                });
            }
        }
        verts.push(LiftedVertex(linalg::primitive(&cur[0])));
    }
    let mut image = WindowPolygon { d, n, verts, monodromy: poly.monodromy.clone() };
    image.extend_to(2 * n + d + 2);
    image.check_generic()?;
    Ok(image)
}

/// Applies a map to a raw window polygon, staying in window form.
pub fn apply_map_window(poly: &WindowPolygon, spec: &MapSpec) -> Result<WindowPolygon> {
    match spec {
        MapSpec::Corrugated => corrugated_map_window(poly, false),
        MapSpec::PartiallyCorrugated { q, r, l } => {
            partially_corrugated_map_window(poly, &CorrugationSpec::new(*q, *r, *l)?)
        }
        _ => {
            let (it, jt) = spec.jump_tuples(poly.d)?;
            jump_map_window(poly, &it, &jt)
        }
    }
}

/// Applies a map to a canonical polygon and re-encodes the image.
pub fn apply_map(poly: &TwistedPolygon, spec: &MapSpec) -> Result<TwistedPolygon> {
    let window = poly.as_window(poly.n() + poly.d() + 2)?;
    let image = apply_map_window(&window, spec)?;
    let coeffs =
        coefficients_from_window(image.d, image.n, &image.verts, &image.monodromy)?.periodic()?;
    TwistedPolygon::from_coefficients(coeffs)
}

/// Corrugated pentagram map on canonical corrugated polygons.
pub fn corrugated_map(poly: &TwistedPolygon) -> Result<TwistedPolygon> {
    apply_map(poly, &MapSpec::Corrugated)
}

/// Inverse corrugated map (side lines instead of diagonals), shift-normalized
/// so that the image vertex at k comes from the sides at k and k+d.
pub fn inverse_corrugated_map(poly: &TwistedPolygon) -> Result<TwistedPolygon> {
    let window = poly.as_window(poly.n() + poly.d() + 2)?;
    let image = corrugated_map_window(&window, true)?;
    let coeffs =
        coefficients_from_window(image.d, image.n, &image.verts, &image.monodromy)?.periodic()?;
    TwistedPolygon::from_coefficients(coeffs)
}

/// Partially corrugated map on canonical polygons.
pub fn partially_corrugated_map(poly: &TwistedPolygon, spec: &CorrugationSpec) -> Result<TwistedPolygon> {
    apply_map(
        poly,
        &MapSpec::PartiallyCorrugated { q: spec.q, r: spec.r, l: spec.l },
    )
}

/// Duality map: the sequence of diagonal hyperplanes re-read as a polygon in
/// the dual space. The dual monodromy is the inverse transpose.
pub fn alpha_map(poly: &TwistedPolygon, tuple: &JumpTuple) -> Result<TwistedPolygon> {
    let (d, n) = (poly.d(), poly.n());
    tuple.validate(d)?;
    let src = poly.as_window(n + tuple.span() + d + 2)?;
    let mut covs = Vec::with_capacity(2 * n + d + 2);
    for k in 0..n {
        covs.push(LiftedVertex(diagonal_plane(&src, k, tuple)?.0));
    }
    let minv = poly
        .monodromy
        .inverse()
        .ok_or_else(|| Error::DegenerateInput("monodromy is singular".into()))?;
    let dual_mono = ProjectiveTransform(linalg::transpose(&minv.0));
    let mut dual = WindowPolygon { d, n, verts: covs, monodromy: dual_mono };
    dual.extend_to(2 * n + d + 2);
    dual.check_generic()?;
    let coeffs = coefficients_from_window(d, n, &dual.verts, &dual.monodromy)?.periodic()?;
    TwistedPolygon::from_coefficients(coeffs)
}

/// Exact twisted projective equivalence of two window polygons, verified over
/// a window long enough to pin the monodromy conjugation.
pub fn twisted_equivalent(a: &WindowPolygon, b: &WindowPolygon) -> Result<Option<ProjectiveTransform>> {
    if a.n != b.n || a.d != b.d {
        return Ok(None);
    }
    let need = 2 * a.n + a.d + 2;
    let mut wa = a.clone();
    wa.extend_to(need);
    let mut wb = b.clone();
    wb.extend_to(need);
    projective_equivalence(&wa.verts[..need], &wb.verts[..need], a.d)
}

/// Smallest c in [0, n) with `b` projectively equivalent to `a` shifted by c.
///
/// Canonical polygons with a unique coefficient array compare by row-shifted
/// array equality; otherwise the comparison is geometric.
pub fn detect_shift(a: &TwistedPolygon, b: &TwistedPolygon) -> Result<Option<usize>> {
    if a.n() != b.n() || a.d() != b.d() {
        return Ok(None);
    }
    let n = a.n();
    if num_integer::gcd(n, a.d() + 1) == 1 {
        for c in 0..n {
            if b.coeffs == a.coeffs.shift(c as i64) {
                return Ok(Some(c));
            }
        }
        return Ok(None);
    }
    let wb = b.as_window(2 * n + b.d() + 2)?;
    detect_shift_window(&a.as_window(3 * n + a.d() + 2)?, &wb)
}

/// Shift detection on raw windows: smallest c with `b[k] ~ g a[k+c]`.
pub fn detect_shift_window(a: &WindowPolygon, b: &WindowPolygon) -> Result<Option<usize>> {
    if a.n != b.n || a.d != b.d {
        return Ok(None);
    }
    let n = a.n;
    let need = 2 * n + a.d + 2;
    let mut wa = a.clone();
    wa.extend_to(need + n);
    for c in 0..n {
        let shifted = WindowPolygon {
            d: a.d,
            n,
            verts: wa.verts[c..].to_vec(),
            monodromy: wa.monodromy.clone(),
        };
        if twisted_equivalent(&shifted, b)?.is_some() {
            return Ok(Some(c));
        }
    }
    Ok(None)
}

/// The image vertex of the dual dented map in closed form: the combination
/// of the leading window vertices with the polygon's own coefficients.
///
/// The rank assertions pin it as the intersection point of the two vertex
/// spans on either side of the dent.
pub fn dual_dented_image(poly: &TwistedPolygon, m: usize, k: usize) -> Result<LiftedVertex> {
    let (d, n) = (poly.d(), poly.n());
    if !(1..=d - 1).contains(&m) {
        return Err(Error::DegenerateInput(format!("dent position {m} out of 1..={}", d - 1)));
    }
    let verts = poly.lifts(k + d + 2 + n)?;
    let mut r = verts[k].0.iter().map(|x| x * sign_pow(d)).collect::<Vec<_>>();
    for t in 1..=m {
        let a = poly.coeffs.entry(k as i64, t);
        for i in 0..=d {
            let add = a * &verts[k + t].0[i];
            r[i] += add;
        }
    }
    let r = LiftedVertex(linalg::primitive(&r));
    // exact rank checks of both memberships
    let mut first: Vec<Vec<ExactScalar>> = (k..=k + m).map(|i| verts[i].0.clone()).collect();
    first.push(r.0.clone());
    if linalg::rank(&first) != m + 1 {
        return Err(Error::DegenerateSpan { index: k as i64, count: m + 1 });
    }
    let mut second: Vec<Vec<ExactScalar>> = (k + m + 1..=k + d + 1).map(|i| verts[i].0.clone()).collect();
    second.push(r.0.clone());
    if linalg::rank(&second) != d - m + 1 {
        return Err(Error::DegenerateSpan { index: k as i64, count: d - m + 1 });
    }
    Ok(r)
}

/// Dual dented map by determinant ratios: dependency coefficients computed
/// with explicit Cramer determinants over the image lifts, then renormalized
/// by the shared multiplicative pipeline. Cross-checks the elimination route.
pub fn dual_dented_coefficients_cramer(poly: &TwistedPolygon, m: usize) -> Result<CoefficientArray> {
    let (d, n) = (poly.d(), poly.n());
    let mut image = Vec::with_capacity(2 * n + d + 2);
    for k in 0..n {
        image.push(dual_dented_image(poly, m, k)?);
    }
    let mut w = WindowPolygon { d, n, verts: image, monodromy: poly.monodromy.clone() };
    w.extend_to(n + d + 2);
    // b by Cramer: replace column t of the window matrix with the target
    let mut b: Vec<Vec<ExactScalar>> = Vec::with_capacity(n);
    for j in 0..n {
        let window: Vec<Vec<ExactScalar>> =
            (0..=d).map(|i| (0..=d).map(|t| w.verts[j + t].0[i].clone()).collect()).collect();
        let den = linalg::det(&window);
        if den.is_zero() {
            return Err(Error::DegenerateInput(format!("image window at {j} is degenerate")));
        }
        let mut row = Vec::with_capacity(d + 1);
        for t in 0..=d {
            let mut num_m = window.clone();
            for i in 0..=d {
                num_m[i][t] = w.verts[j + d + 1].0[i].clone();
            }
            row.push(linalg::det(&num_m) / &den);
        }
        if row[0].is_zero() {
            return Err(Error::GenericityFailure { index: j as i64 });
        }
        b.push(row);
    }
    crate::polygon::renormalize_dependencies(d, n, &b)?.periodic()
}

/// Entrywise scaling action on coefficients: column k scales by s^-k up to
/// the dent and by s^(d+1-k) beyond it.
pub fn scaling_transform(coeffs: &CoefficientArray, m: usize, s: &ExactScalar) -> Result<CoefficientArray> {
    if s.is_zero() {
        return Err(Error::DivisionByZero("scaling by zero".into()));
    }
    let d = coeffs.d;
    if m > d {
        return Err(Error::DegenerateInput(format!("dent position {m} exceeds dimension {d}")));
    }
    let rows = coeffs
        .rows
        .iter()
        .map(|row| {
            (1..=d)
                .map(|k| {
                    let e = if k <= m { -(k as i64) } else { (d + 1 - k) as i64 };
                    Ok(&row[k - 1] * pow_i64(s, e)?)
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CoefficientArray { d, n: coeffs.n, rows })
}
