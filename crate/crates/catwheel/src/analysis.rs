//! Fractal dimension estimators for planar polylines and point sets.

use std::collections::HashSet;

use thiserror::Error;

use crate::geom::linear_fit;

pub type Pt = (f64, f64);

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error("need at least 3 usable scales spanning a decade, got {0}")]
    DegenerateScales(usize),
    #[error("need at least {need} points, got {got}")]
    TooFewPoints { need: usize, got: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct DimensionEstimate {
    pub d: f64,
    pub stderr: f64,
    pub scales: Vec<f64>,
}

fn dist(a: Pt, b: Pt) -> f64 {
    (a.0 - b.0).hypot(a.1 - b.1)
}

pub fn polyline_length(p: &[Pt]) -> f64 {
    p.windows(2).map(|w| dist(w[0], w[1])).sum()
}

/// Greedy walk: keep the first point, then each vertex at distance >= eps
/// from the last kept one, and always the final point.
pub fn coarsen_polyline(p: &[Pt], eps: f64) -> Vec<Pt> {
    let Some(&first) = p.first() else { return Vec::new() };
    let mut out = vec![first];
    let mut last = first;
    for &q in &p[1..] {
        if dist(q, last) >= eps {
            out.push(q);
            last = q;
        }
    }
    let end = *p.last().unwrap();
    if *out.last().unwrap() != end || out.len() == 1 && p.len() > 1 {
        out.push(end);
    }
    out
}

/// Largest distance from the first point; within a factor 2 of the diameter.
pub fn extent(p: &[Pt]) -> f64 {
    p.iter().map(|q| dist(*q, p[0])).fold(0.0, f64::max)
}

/// Geometric sequence from `hi` down to `lo` with `per_decade` steps per decade.
pub fn geometric_scales(hi: f64, lo: f64, per_decade: usize) -> Vec<f64> {
    if !(hi > lo && lo > 0.0) {
        return vec![];
    }
    let n = ((hi / lo).log10() * per_decade as f64).floor() as usize + 1;
    let r = if n > 1 { (lo / hi).powf(1.0 / (n - 1) as f64) } else { 1.0 };
    (0..n).map(|k| hi * r.powi(k as i32)).collect()
}

/// Eight scales per decade between twice the shortest edge and a quarter of
/// the extent.
pub fn default_scales(p: &[Pt]) -> Vec<f64> {
    let min_edge = p.windows(2).map(|w| dist(w[0], w[1])).filter(|d| *d > 0.0).fold(f64::INFINITY, f64::min);
    geometric_scales(extent(p) / 4.0, 2.0 * min_edge, 8)
}

fn check_scales(scales: &[f64]) -> Result<(), AnalysisError> {
    let hi = scales.iter().cloned().fold(f64::MIN, f64::max);
    let lo = scales.iter().cloned().fold(f64::MAX, f64::min);
    if scales.len() < 3 || hi < 10.0 * lo * (1.0 - 1e-9) {
        return Err(AnalysisError::DegenerateScales(scales.len()));
    }
    Ok(())
}

/// Fit of log(coarsened length) against -log(eps); D = 1 + slope.
pub fn estimate_dimension_length_regression(p: &[Pt], scales: &[f64]) -> Result<DimensionEstimate, AnalysisError> {
    check_scales(scales)?;
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut used = Vec::new();
    for &e in scales {
        let c = coarsen_polyline(p, e);
        if c.len() < 3 {
            continue;
        }
        xs.push(-e.ln());
        ys.push(polyline_length(&c).ln());
        used.push(e);
    }
    if used.len() < 3 {
        return Err(AnalysisError::DegenerateScales(used.len()));
    }
    let (slope, _, se) = linear_fit(&xs, &ys);
    Ok(DimensionEstimate { d: 1.0 + slope, stderr: se, scales: used })
}

const OFFSETS: usize = 4;

/// Occupied cells of side `e`, minimized over a 4x4 grid of offsets.
pub fn box_count(points: &[Pt], e: f64) -> usize {
    let mut best = usize::MAX;
    let mut cells: HashSet<(i64, i64)> = HashSet::with_capacity(points.len());
    for i in 0..OFFSETS {
        for j in 0..OFFSETS {
            let (ox, oy) = (i as f64 / OFFSETS as f64, j as f64 / OFFSETS as f64);
            cells.clear();
            for p in points {
                cells.insert(((p.0 / e + ox).floor() as i64, (p.1 / e + oy).floor() as i64));
            }
            best = best.min(cells.len());
        }
    }
    best
}

/// Fit of log(occupied cells) against -log(cell size).
pub fn box_count_dimension(points: &[Pt], scales: &[f64]) -> Result<DimensionEstimate, AnalysisError> {
    if points.len() < 100 {
        return Err(AnalysisError::TooFewPoints { need: 100, got: points.len() });
    }
    check_scales(scales)?;
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut used = Vec::new();
    for &e in scales {
        let n = box_count(points, e);
        if n < 2 {
            continue;
        }
        xs.push(-e.ln());
        ys.push((n as f64).ln());
        used.push(e);
    }
    if used.len() < 3 {
        return Err(AnalysisError::DegenerateScales(used.len()));
    }
    let (slope, _, se) = linear_fit(&xs, &ys);
    Ok(DimensionEstimate { d: slope, stderr: se, scales: used })
}

/// Points along the polyline at spacing at most `h`, vertices included.
pub fn densify(p: &[Pt], h: f64) -> Vec<Pt> {
    let mut out = Vec::with_capacity(p.len());
    for w in p.windows(2) {
        let n = ((dist(w[0], w[1]) / h).ceil() as usize).max(1);
        for k in 0..n {
            let t = k as f64 / n as f64;
            out.push((w[0].0 + t * (w[1].0 - w[0].0), w[0].1 + t * (w[1].1 - w[0].1)));
        }
    }
    if let Some(l) = p.last() {
        out.push(*l);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn segment(n: usize) -> Vec<Pt> {
        (0..n).map(|k| (k as f64 / (n - 1) as f64, 0.0)).collect()
    }

    #[test]
    fn coarsen_segment() {
        let c = coarsen_polyline(&segment(1000), 0.1);
        assert_eq!(c.len(), 11);
        assert!((polyline_length(&c) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn coarsening_is_monotone() {
        let p: Vec<Pt> = (0..500).map(|k| ((k as f64 * 0.37).sin(), (k as f64 * 0.11).cos())).collect();
        let mut last = 0;
        for e in geometric_scales(1.0, 1e-3, 8) {
            let c = coarsen_polyline(&p, e);
            assert!(polyline_length(&c) <= polyline_length(&p) + 1e-12);
            assert!(c.len() >= last);
            last = c.len();
        }
    }

    #[test]
    fn straight_line_dimension_one() {
        let p = segment(10_000);
        let est = estimate_dimension_length_regression(&p, &default_scales(&p)).unwrap();
        assert!((est.d - 1.0).abs() < 0.02);
    }

    #[test]
    fn scale_invariance_is_exact() {
        let p: Vec<Pt> = (0..2000).map(|k| (k as f64 * 1e-3, ((k * k) % 17) as f64 * 1e-3)).collect();
        let s = 4.0;
        let q: Vec<Pt> = p.iter().map(|(x, y)| (x * s, y * s)).collect();
        let sc = geometric_scales(0.2, 0.002, 8);
        let sc2: Vec<f64> = sc.iter().map(|e| e * s).collect();
        let a = estimate_dimension_length_regression(&p, &sc).unwrap();
        let b = estimate_dimension_length_regression(&q, &sc2).unwrap();
        assert_eq!(a.d, b.d);
    }

    #[test]
    fn filled_square() {
        let mut pts = Vec::new();
        for i in 0..300 {
            for j in 0..300 {
                pts.push((i as f64 / 299.0, j as f64 / 299.0));
            }
        }
        let est = box_count_dimension(&pts, &geometric_scales(0.05, 0.005, 8)).unwrap();
        assert!((est.d - 2.0).abs() < 0.05, "{}", est.d);
    }

    #[test]
    fn degenerate_scales() {
        let p = segment(100);
        assert!(matches!(
            estimate_dimension_length_regression(&p, &[0.1, 0.09, 0.08]),
            Err(AnalysisError::DegenerateScales(_))
        ));
        assert!(matches!(box_count_dimension(&p[..10], &[1.0, 0.1, 0.01]), Err(AnalysisError::TooFewPoints { .. })));
    }
}
