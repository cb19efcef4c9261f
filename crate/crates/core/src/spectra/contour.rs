//! Sublevel sets `{λ : bound(λ) > 1/ε}` and their contours by marching squares.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_complex::Complex64;

use super::{NodeValue, Provenance, ResolventField, SpectralSet};
use crate::error::{Error, Result};

/// A grid edge: horizontal from node `(ix, iy)` to `(ix+1, iy)`, or vertical to `(ix, iy+1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Edge {
    H(usize, usize),
    V(usize, usize),
}

// Segment table indexed by the inside-corner mask (bit 0 = (ix,iy), then
// counter-clockwise). Edges: 0 bottom, 1 right, 2 top, 3 left. The two saddle
// cases join the inside corners through the cell centre.
const SEGMENTS: [&[(usize, usize)]; 16] = [
    &[],
    &[(3, 0)],
    &[(0, 1)],
    &[(3, 1)],
    &[(1, 2)],
    &[(0, 1), (2, 3)],
    &[(0, 2)],
    &[(3, 2)],
    &[(2, 3)],
    &[(0, 2)],
    &[(3, 0), (1, 2)],
    &[(1, 2)],
    &[(3, 1)],
    &[(0, 1)],
    &[(3, 0)],
    &[],
];

/// Nodes with `bound > 1/ε`, plus contour polylines of `min(ν, ν*) = ε`.
///
/// Cells touching a hole are skipped. An empty result is valid.
pub fn sublevel_set(field: &ResolventField, eps: f64) -> Result<SpectralSet> {
    if !(eps > 0.0) {
        return Err(Error::validation("eps", "must be positive"));
    }
    let g = &field.grid;
    let level = 1.0 / eps;
    let state: Vec<Option<(bool, f64)>> = field
        .nodes
        .iter()
        .map(|v| match v {
            NodeValue::Value { combined, bound, .. } => Some((*bound > level, *combined)),
            NodeValue::Hole(_) => None,
        })
        .collect();
    let points: Vec<Complex64> =
        state.iter().enumerate().filter(|(_, s)| matches!(s, Some((true, _)))).map(|(i, _)| g.point(i)).collect();

    let idx = |ix: usize, iy: usize| iy * g.nx + ix;
    let crossing = |a: usize, b: usize| -> Complex64 {
        let (za, zb) = (g.point(a), g.point(b));
        let (fa, fb) = (state[a].expect("checked").1 - eps, state[b].expect("checked").1 - eps);
        let t = if fa == fb { 0.5 } else { (fa / (fa - fb)).clamp(0.0, 1.0) };
        za + (zb - za) * t
    };

    let mut at: HashMap<Edge, Complex64> = HashMap::new();
    let mut segments: Vec<(Edge, Edge)> = Vec::new();
    for iy in 0..g.ny - 1 {
        for ix in 0..g.nx - 1 {
            let corners = [idx(ix, iy), idx(ix + 1, iy), idx(ix + 1, iy + 1), idx(ix, iy + 1)];
            let Some(inside) = corners.iter().map(|&c| state[c].map(|s| s.0)).collect::<Option<Vec<bool>>>() else {
                continue;
            };
            let mask = inside.iter().enumerate().fold(0, |m, (k, &b)| m | (usize::from(b) << k));
            let edges = [Edge::H(ix, iy), Edge::V(ix + 1, iy), Edge::H(ix, iy + 1), Edge::V(ix, iy)];
            let ends = [
                (corners[0], corners[1]),
                (corners[1], corners[2]),
                (corners[3], corners[2]),
                (corners[0], corners[3]),
            ];
            for &(e1, e2) in SEGMENTS[mask] {
                for e in [e1, e2] {
                    at.entry(edges[e]).or_insert_with(|| crossing(ends[e].0, ends[e].1));
                }
                segments.push((edges[e1], edges[e2]));
            }
        }
    }

    let mut set = SpectralSet::new(points, Provenance::Sublevel);
    set.polylines = chain(&segments).into_iter().map(|c| c.iter().map(|e| at[e]).collect()).collect();
    Ok(set)
}

/// Joins segments that share edges into maximal polylines, in input order.
fn chain(segments: &[(Edge, Edge)]) -> Vec<Vec<Edge>> {
    let mut by_edge: HashMap<Edge, Vec<usize>> = HashMap::new();
    for (i, &(a, b)) in segments.iter().enumerate() {
        by_edge.entry(a).or_default().push(i);
        by_edge.entry(b).or_default().push(i);
    }
    let mut used = vec![false; segments.len()];
    let mut out = Vec::new();
    for start in 0..segments.len() {
        if used[start] {
            continue;
        }
        used[start] = true;
        let mut line = vec![segments[start].0, segments[start].1];
        for forward in [true, false] {
            loop {
                let end = if forward { *line.last().expect("non-empty") } else { line[0] };
                let next = by_edge[&end].iter().copied().find(|&s| !used[s]);
                let Some(s) = next else { break };
                used[s] = true;
                let (a, b) = segments[s];
                let other = if a == end { b } else { a };
                if forward {
                    line.push(other);
                } else {
                    line.insert(0, other);
                }
            }
        }
        out.push(line);
    }
    out
}

fn colour(t: f64) -> String {
    // Light yellow through orange to dark purple.
    let stops = [(255.0, 255.0, 204.0), (253.0, 141.0, 60.0), (63.0, 0.0, 125.0)];
    let t = t.clamp(0.0, 1.0) * 2.0;
    let (i, u) = if t >= 1.0 { (1, t - 1.0) } else { (0, t) };
    let (a, b) = (stops[i], stops[i + 1]);
    let mix = |x: f64, y: f64| (x + (y - x) * u).round() as u8;
    format!("#{:02x}{:02x}{:02x}", mix(a.0, b.0), mix(a.1, b.1), mix(a.2, b.2))
}

/// SVG of a field (cells coloured by `log10(bound)`) with contour polylines.
///
/// The view box is the grid rectangle with the imaginary axis pointing up. The
/// first line is a version comment; the rest depends only on the inputs.
pub fn field_svg(field: &ResolventField, contours: &[&SpectralSet]) -> String {
    let g = &field.grid;
    let (w, h) = (g.re_max - g.re_min, g.im_max - g.im_min);
    let logs: Vec<Option<f64>> = field.nodes.iter().map(|v| v.bound().map(f64::log10)).collect();
    let finite = logs.iter().flatten().copied().filter(|x| x.is_finite());
    let (lo, hi) = finite.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| (a.min(x), b.max(x)));
    let span = if hi > lo { hi - lo } else { 1.0 };

    let mut out = format!("<!-- subspec {} -->\n", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{:.9} {:.9} {:.9} {:.9}\" width=\"800\" height=\"{}\" preserveAspectRatio=\"none\">",
        g.re_min,
        -g.im_max,
        w,
        h,
        (800.0 * h / w).round().clamp(100.0, 4000.0)
    );
    let (dx, dy) = (g.dx(), g.dy());
    out.push_str("<g shape-rendering=\"crispEdges\">\n");
    for (i, l) in logs.iter().enumerate() {
        let z = g.point(i);
        let fill = match l {
            None => "#808080".to_string(),
            Some(x) if x.is_infinite() => colour(1.0),
            Some(x) => colour((x - lo) / span),
        };
        let _ = writeln!(
            out,
            "<rect x=\"{:.9}\" y=\"{:.9}\" width=\"{:.9}\" height=\"{:.9}\" fill=\"{fill}\"/>",
            z.re - dx / 2.0,
            -z.im - dy / 2.0,
            dx,
            dy
        );
    }
    out.push_str("</g>\n");
    let stroke = 0.004 * w.max(h);
    for set in contours {
        for line in &set.polylines {
            let mut d = String::new();
            for (k, z) in line.iter().enumerate() {
                let _ = write!(d, "{}{:.9},{:.9}", if k == 0 { "M" } else { " L" }, z.re, -z.im);
            }
            let _ = writeln!(out, "<path d=\"{d}\" fill=\"none\" stroke=\"black\" stroke-width=\"{stroke:.9}\"/>");
        }
    }
    out.push_str("</svg>\n");
    out
}
