//! SVG rendering of polygon orbits in an affine chart. The only place in the
//! project where rationals are converted to floats, and it is for drawing
//! only.

use num_traits::ToPrimitive;
use pentagram_core::error::{Error, Result};
use pentagram_core::projective::LiftedVertex;

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

/// The affine chart to draw in: a single homogeneous coordinate set to 1, or
/// the sum of all coordinates (which misses the canonical basis window less
/// often).
#[derive(Debug, Clone, Copy)]
pub enum Chart {
    Coordinate(usize),
    Sum,
}

/// Projects one period of vertices to the chosen affine chart, keeping the
/// two axes given by `axes`.
pub fn to_affine(
    verts: &[LiftedVertex],
    n: usize,
    chart: Chart,
    axes: (usize, usize),
) -> Result<Vec<(f64, f64)>> {
    use num_traits::Zero;
    let mut out = Vec::with_capacity(n);
    for (k, v) in verts.iter().take(n).enumerate() {
        let dim = v.0.len();
        if axes.0 >= dim || axes.1 >= dim {
            return Err(Error::DegenerateInput(format!(
                "axes {axes:?} out of range for dimension {}",
                dim - 1
            )));
        }
        let h = match chart {
            Chart::Coordinate(c) => {
                if c >= dim {
                    return Err(Error::DegenerateInput(format!(
                        "chart {c} out of range for dimension {}",
                        dim - 1
                    )));
                }
                v.0[c].clone()
            }
            Chart::Sum => v.0.iter().sum(),
        };
        if h.is_zero() {
            return Err(Error::DegenerateIntersection { index: k as i64, expected: 1, got: 0 });
        }
        let x = (&v.0[axes.0] / &h).to_f64().unwrap_or(f64::NAN);
        let y = (&v.0[axes.1] / &h).to_f64().unwrap_or(f64::NAN);
        out.push((x, y));
    }
    Ok(out)
}

/// Deterministic SVG document: one closed polyline per iteration.
pub fn render_svg(orbits: &[Vec<(f64, f64)>]) -> String {
    let all: Vec<(f64, f64)> = orbits.iter().flatten().copied().collect();
    let (mut xmin, mut xmax, mut ymin, mut ymax) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for &(x, y) in &all {
        xmin = xmin.min(x);
        xmax = xmax.max(x);
        ymin = ymin.min(y);
        ymax = ymax.max(y);
    }
    let pad = 0.05 * ((xmax - xmin).max(ymax - ymin)).max(1e-9);
    let (x0, y0, w, h) = (xmin - pad, ymin - pad, xmax - xmin + 2.0 * pad, ymax - ymin + 2.0 * pad);
    let mut s = String::new();
    s.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"640\" viewBox=\"{:.6} {:.6} {:.6} {:.6}\">\n",
        x0, y0, w, h
    ));
    let stroke = w.max(h) / 320.0;
    for (i, orbit) in orbits.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let pts: Vec<String> =
            orbit.iter().map(|(x, y)| format!("{:.6},{:.6}", x, y)).collect();
        s.push_str(&format!(
            "  <polygon points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"{:.6}\"/>\n",
            pts.join(" "),
            color,
            stroke
        ));
        for (x, y) in orbit {
            s.push_str(&format!(
                "  <circle cx=\"{:.6}\" cy=\"{:.6}\" r=\"{:.6}\" fill=\"{}\"/>\n",
                x,
                y,
                1.6 * stroke,
                color
            ));
        }
    }
    s.push_str("</svg>\n");
    s
}
