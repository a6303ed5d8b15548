//! Hubbard trees of the holomorphic example as exact polylines on the torus.
//!
//! Each tree is a tripod with center the fixed point alpha and legs ending at
//! the postcritical points p1, p2, p3.  A branch g of the inverse fixing alpha
//! carries legs to legs; the leg through the critical point needs the second
//! branch, reflected through p1.

use super::torus::{cover, embed, eta_inv, half, signed};
use crate::analysis::{box_count_dimension, densify, extent, geometric_scales, AnalysisError, DimensionEstimate};
use crate::angle::q;
use crate::geom::P2;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TreeSign {
    Plus,
    Minus,
}

struct TreeData {
    alpha: P2,
    p1: P2,
    p2: P2,
    p3: P2,
}

fn tree_data(sign: TreeSign) -> TreeData {
    let p = |a: i128, b: i128, c: i128, d: i128| P2::new(q(a, b), q(c, d));
    match sign {
        TreeSign::Plus => TreeData { alpha: p(1, 4, 7, 8), p1: p(0, 1, 1, 1), p2: p(1, 2, 1, 1), p3: p(1, 2, 1, 2) },
        TreeSign::Minus => TreeData { alpha: p(1, 4, 3, 8), p1: p(0, 1, 1, 2), p2: p(1, 2, 1, 2), p3: p(1, 2, 0, 1) },
    }
}

/// The inverse branch z -> eta^{-1}(s z + l - 1/2) fixing `alpha`.
fn branch_fixing(alpha: P2) -> impl Fn(P2) -> P2 {
    let h = cover(alpha);
    let (s, l) = [1i8, -1]
        .into_iter()
        .map(|s| (s, h - signed(s, alpha)))
        .find(|(_, l)| l.is_integral())
        .expect("alpha is fixed by the covering");
    move |z: P2| eta_inv(signed(s, z) + l - half())
}

type Legs = (Vec<P2>, Vec<P2>, Vec<P2>);

fn subdivide(g: &impl Fn(P2) -> P2, two_p1: P2, (l1, l2, l3): Legs) -> Legs {
    let n1: Vec<P2> = l2.iter().map(|z| g(*z)).collect();
    let n2: Vec<P2> = l3.iter().map(|z| g(*z)).collect();
    let mut n3: Vec<P2> = l1.iter().map(|z| g(*z)).collect();
    n3.extend(l1.iter().rev().skip(1).chain(l2.iter().skip(1)).map(|z| g(two_p1 - *z)));
    (n1, n2, n3)
}

fn level_iter(sign: TreeSign) -> impl Iterator<Item = Legs> {
    let d = tree_data(sign);
    let g = branch_fixing(d.alpha);
    let two_p1 = d.p1 + d.p1;
    let first: Legs = (vec![d.alpha, d.p1], vec![d.alpha, d.p2], vec![d.alpha, d.p3]);
    std::iter::successors(Some(first), move |legs| Some(subdivide(&g, two_p1, legs.clone())))
}

/// The three legs after `levels` subdivision steps, each running from alpha
/// to its postcritical endpoint.
pub fn hubbard_tree(sign: TreeSign, levels: usize) -> [Vec<P2>; 3] {
    let (l1, l2, l3) = level_iter(sign).nth(levels).unwrap();
    [l1, l2, l3]
}

/// Arc from p2 through alpha to p3 in the positive tree, after 2*depth
/// subdivision levels, with segment counts for each pair of levels.
#[derive(Clone, Debug)]
pub struct HubbardArc {
    pub vertices: Vec<P2>,
    pub stage_segment_counts: Vec<usize>,
}

fn arc_of(legs: &[Vec<P2>; 3]) -> Vec<P2> {
    let mut v: Vec<P2> = legs[1].iter().rev().cloned().collect();
    v.extend(legs[2].iter().skip(1));
    v
}

pub fn hubbard_arc(depth: usize) -> HubbardArc {
    let mut counts = Vec::with_capacity(depth + 1);
    let mut last = None;
    for (level, legs) in level_iter(TreeSign::Plus).take(2 * depth + 1).enumerate() {
        if level % 2 == 0 {
            counts.push(legs.1.len() + legs.2.len() - 2);
        }
        last = Some(legs);
    }
    let (l1, l2, l3) = last.unwrap();
    HubbardArc { vertices: arc_of(&[l1, l2, l3]), stage_segment_counts: counts }
}

impl HubbardArc {
    pub fn growth_ratios(&self) -> Vec<f64> {
        self.stage_segment_counts.windows(2).map(|w| w[1] as f64 / w[0] as f64).collect()
    }

    pub fn embedded(&self) -> Vec<(f64, f64)> {
        self.vertices.iter().map(|p| embed(*p)).collect()
    }

    /// Box count of the arc densified well below its longest edge, over
    /// scales from twice that edge up to a quarter of the extent.
    pub fn box_dimension(&self) -> Result<DimensionEstimate, AnalysisError> {
        let pts = self.embedded();
        let max_edge = pts.windows(2).map(|w| (w[1].0 - w[0].0).hypot(w[1].1 - w[0].1)).fold(0.0, f64::max);
        let dense = densify(&pts, max_edge / 8.0);
        box_count_dimension(&dense, &geometric_scales(extent(&pts) / 4.0, 2.0 * max_edge, 8))
    }
}

/// Largest real root of x^3 - 2x^2 + x - 4, by bisection.
pub fn growth_constant() -> f64 {
    let f = |x: f64| x * x * x - 2.0 * x * x + x - 4.0;
    let (mut lo, mut hi) = (2.0f64, 3.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// For each scale s, the largest ratio of sub-arc extent to chord length over
/// sub-arcs of n/2^s vertices.  The extent is the largest distance from the
/// sub-arc's first point, which is within a factor 2 of its diameter.
pub fn bounded_turning(points: &[(f64, f64)], scales: &[u32]) -> Vec<f64> {
    let n = points.len();
    scales
        .iter()
        .map(|&s| {
            let len = (n >> s).max(2);
            let stride = (len / 4).max(1);
            let mut worst: f64 = 0.0;
            let mut i = 0;
            while i + len < n {
                let p = points[i];
                let extent = points[i..=i + len].iter().map(|c| (c.0 - p.0).hypot(c.1 - p.1)).fold(0.0, f64::max);
                let q = points[i + len];
                let chord = (q.0 - p.0).hypot(q.1 - p.1);
                if chord > 0.0 {
                    worst = worst.max(extent / chord);
                }
                i += stride;
            }
            worst
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::delta_canon;
    use crate::lattes::torus::cover;

    #[test]
    fn legs_map_forward() {
        // H carries each leg of level k+1 onto a leg of level k.
        for sign in [TreeSign::Plus, TreeSign::Minus] {
            let t0 = hubbard_tree(sign, 2);
            let t1 = hubbard_tree(sign, 3);
            let img: Vec<P2> = t1[0].iter().map(|z| delta_canon(cover(*z))).collect();
            let want: Vec<P2> = t0[1].iter().map(|z| delta_canon(*z)).collect();
            assert_eq!(img, want);
        }
    }

    #[test]
    fn endpoints_are_postcritical() {
        let d = tree_data(TreeSign::Plus);
        let t = hubbard_tree(TreeSign::Plus, 4);
        assert_eq!(delta_canon(*t[0].last().unwrap()), delta_canon(d.p1));
        assert_eq!(delta_canon(*t[1].last().unwrap()), delta_canon(d.p2));
        assert_eq!(delta_canon(*t[2].last().unwrap()), delta_canon(d.p3));
    }

    #[test]
    fn root_of_cubic() {
        let l = growth_constant();
        assert!((l * l * l - 2.0 * l * l + l - 4.0).abs() < 1e-12);
        assert!((l - 2.3146).abs() < 1e-4);
    }

    #[test]
    fn growth_ratio_approaches_root() {
        let arc = hubbard_arc(8);
        let r = *arc.growth_ratios().last().unwrap();
        assert!((r / growth_constant() - 1.0).abs() < 0.01, "ratio {r}");
    }
}
