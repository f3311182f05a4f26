//! Projective primitives: lifted points, hyperplanes, subspace meets, and
//! projective equivalence of point sequences.
//!
//! Projective objects are compared by cross-multiplication (proportionality),
//! never by normalizing a coordinate to 1. Outputs of geometric constructions
//! are scaled to a canonical primitive integer vector so identical inputs give
//! byte-identical results.

use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::ExactScalar;
use num_traits::Zero;

/// A point of projective d-space, stored as a nonzero (d+1)-vector lift.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftedVertex(pub Vec<ExactScalar>);

/// A hyperplane, stored as a nonzero covector defined up to scale.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hyperplane(pub Vec<ExactScalar>);

/// An invertible projective transformation; two are equal iff proportional.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectiveTransform(pub Vec<Vec<ExactScalar>>);

impl LiftedVertex {
    pub fn dim_ambient(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|x| x.is_zero())
    }
}

impl Hyperplane {
    /// Exact incidence: the covector annihilates the point.
    pub fn contains(&self, p: &LiftedVertex) -> bool {
        let dot: ExactScalar = self.0.iter().zip(&p.0).map(|(a, b)| a * b).sum();
        dot.is_zero()
    }
}

impl ProjectiveTransform {
    pub fn apply(&self, p: &LiftedVertex) -> LiftedVertex {
        LiftedVertex(linalg::mat_vec(&self.0, &p.0))
    }

    pub fn inverse(&self) -> Option<ProjectiveTransform> {
        linalg::inverse(&self.0).map(ProjectiveTransform)
    }

    pub fn compose(&self, other: &ProjectiveTransform) -> ProjectiveTransform {
        ProjectiveTransform(linalg::mat_mul(&self.0, &other.0))
    }
}

/// Proportionality test by cross-multiplication. Zero vectors are never
/// proportional to anything.
pub fn proportional(x: &[ExactScalar], y: &[ExactScalar]) -> bool {
    if x.len() != y.len() {
        return false;
    }
    let Some(i0) = x.iter().position(|a| !a.is_zero()) else {
        return false;
    };
    if y.iter().all(|a| a.is_zero()) {
        return false;
    }
    (0..x.len()).all(|j| &x[i0] * &y[j] == &y[i0] * &x[j])
}

/// The hyperplane through `d` independent points in projective d-space.
pub fn hyperplane_through(points: &[LiftedVertex], dim: usize) -> Result<Hyperplane> {
    debug_assert_eq!(points.len(), dim);
    let rows: Vec<Vec<ExactScalar>> = points.iter().map(|p| p.0.clone()).collect();
    let kernel = linalg::nullspace(&rows);
    if kernel.len() != 1 {
        return Err(Error::DegenerateSpan { index: 0, count: points.len() });
    }
    Ok(Hyperplane(kernel.into_iter().next().unwrap()))
}

/// The common point of `d` independent hyperplanes in projective d-space.
pub fn intersect_hyperplanes(planes: &[Hyperplane], dim: usize) -> Result<LiftedVertex> {
    debug_assert_eq!(planes.len(), dim);
    let rows: Vec<Vec<ExactScalar>> = planes.iter().map(|h| h.0.clone()).collect();
    let kernel = linalg::nullspace(&rows);
    if kernel.len() != 1 {
        return Err(Error::DegenerateIntersection { index: 0, expected: 1, got: kernel.len() });
    }
    Ok(LiftedVertex(kernel.into_iter().next().unwrap()))
}

/// Meet of two lifted spans: a canonical basis of `span(a) ∩ span(b)`.
pub fn meet_spans(a: &[Vec<ExactScalar>], b: &[Vec<ExactScalar>]) -> Vec<Vec<ExactScalar>> {
    let ba = linalg::row_basis(a);
    let bb = linalg::row_basis(b);
    if ba.is_empty() || bb.is_empty() {
        return Vec::new();
    }
    let dim = ba[0].len();
    // columns [ba | -bb]; kernel vectors give intersection points via the ba part
    let stacked: Vec<Vec<ExactScalar>> = (0..dim)
        .map(|i| {
            ba.iter()
                .map(|v| v[i].clone())
                .chain(bb.iter().map(|v| -v[i].clone()))
                .collect()
        })
        .collect();
    linalg::nullspace(&stacked)
        .into_iter()
        .map(|kv| {
            let pt: Vec<ExactScalar> = (0..dim)
                .map(|i| kv[..ba.len()].iter().zip(&ba).map(|(c, v)| c * &v[i]).sum())
                .collect();
            linalg::primitive(&pt)
        })
        .collect()
}

/// A projective transform `g` with `g · a[k] ∝ b[k]` for the anchor set, or
/// None when the anchors are not in general position.
///
/// Anchors are `d+1` consecutive independent points starting at some offset,
/// plus one later point whose coordinates in that basis are all nonzero.
fn transform_from_anchors(
    dim: usize,
    a: &[LiftedVertex],
    b: &[LiftedVertex],
) -> Option<ProjectiveTransform> {
    let n = a.len().min(b.len());
    for s in 0..n.saturating_sub(dim + 1) {
        let base_a: Vec<Vec<ExactScalar>> = (0..=dim).map(|t| a[s + t].0.clone()).collect();
        if linalg::rank(&base_a) != dim + 1 {
            continue;
        }
        let base_b: Vec<Vec<ExactScalar>> = (0..=dim).map(|t| b[s + t].0.clone()).collect();
        if linalg::rank(&base_b) != dim + 1 {
            return None;
        }
        let cols_a = linalg::transpose(&base_a);
        let cols_b = linalg::transpose(&base_b);
        for e in s + dim + 1..n {
            let al = linalg::solve(&cols_a, &a[e].0)?;
            let be = linalg::solve(&cols_b, &b[e].0)?;
            if al.iter().any(|x| x.is_zero()) || be.iter().any(|x| x.is_zero()) {
                continue;
            }
            // g maps al_t * A_t to be_t * B_t
            let p: Vec<Vec<ExactScalar>> = (0..=dim)
                .map(|i| (0..=dim).map(|t| &al[t] * &base_a[t][i]).collect())
                .collect();
            let q: Vec<Vec<ExactScalar>> = (0..=dim)
                .map(|i| (0..=dim).map(|t| &be[t] * &base_b[t][i]).collect())
                .collect();
            let p_inv = linalg::inverse(&p)?;
            return Some(ProjectiveTransform(linalg::mat_mul(&q, &p_inv)));
        }
    }
    None
}

/// Projective equivalence of two point sequences of equal length >= d+2:
/// returns `g` with `g · a[k] ∝ b[k]` for every k, or None.
///
/// The transform is computed from an anchor subset and verified on the whole
/// sequence, so a single perturbed point yields None.
pub fn projective_equivalence(
    a: &[LiftedVertex],
    b: &[LiftedVertex],
    dim: usize,
) -> Result<Option<ProjectiveTransform>> {
    if a.len() != b.len() || a.len() < dim + 2 {
        return Err(Error::DegenerateInput(format!(
            "need equal sequences of at least {} points, got {} and {}",
            dim + 2,
            a.len(),
            b.len()
        )));
    }
    let Some(g) = transform_from_anchors(dim, a, b) else {
        return Ok(None);
    };
    for (pa, pb) in a.iter().zip(b) {
        if !proportional(&g.apply(pa).0, &pb.0) {
            return Ok(None);
        }
    }
    Ok(Some(g))
}
