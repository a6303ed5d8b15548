//! Approximations f_k of the wheel for the holomorphic example, built by
//! repeated pullback along the doubling map on the circle.

use num_traits::Zero;

use super::torus::{cover, eta_inv, half};
use super::LattesError;
use crate::angle::{q, Q};
use crate::geom::{delta_canon, P2};

/// Closed polyline sampled at increasing angles.  The last angle is the first
/// plus one, and the last point equals the first modulo z -> +-z + lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveStage {
    pub angles: Vec<Q>,
    pub points: Vec<P2>,
}

impl CurveStage {
    pub fn segment_count(&self) -> usize {
        self.points.len() - 1
    }

    /// Canonical torus-quotient value at a sample angle, if sampled.
    pub fn value_at(&self, x: Q) -> Option<P2> {
        let a0 = self.angles[0];
        let t = x - (x - a0).floor();
        self.angles.binary_search(&t).ok().map(|i| delta_canon(self.points[i]))
    }

    pub fn embedded(&self) -> Vec<(f64, f64)> {
        self.points.iter().map(|p| super::torus::embed(*p)).collect()
    }
}

/// Loop through the four branch values 0, 1/2, (1+eta)/2, eta/2 at angles
/// 1/6, 1/3, 2/3, 5/6.
pub fn seed_curve() -> CurveStage {
    let z = Q::zero();
    let h = q(1, 2);
    CurveStage {
        angles: vec![q(1, 6), q(1, 3), q(2, 3), q(5, 6), q(7, 6)],
        points: vec![P2::new(z, z), P2::new(h, z), P2::new(h, h), P2::new(z, h), P2::new(z, z)],
    }
}

/// Which critical value class a point lies over: 0 for the lattice, 1 for eta/2.
fn critical_kind(c: P2) -> Option<usize> {
    if c.is_integral() {
        Some(0)
    } else if (c - P2::new(Q::zero(), q(1, 2))).is_integral() {
        Some(1)
    } else {
        None
    }
}

/// Turn direction taken at each critical value class when two lifts of the
/// next segment are available.
const TURN: [i8; 2] = [-1, 1];

fn cross(a: P2, b: P2) -> Q {
    a.x * b.y - a.y * b.x
}

/// One pullback: f_{k+1}(x) is an eta-preimage (after removing the 1/2 shift)
/// of f_k(2x), continued along the doubled loop.
pub fn lift_curve_stage(prev: &CurveStage) -> Result<CurveStage, LattesError> {
    let n = prev.angles.len() - 1;
    let mut path = Vec::with_capacity(2 * n + 1);
    let mut cur = prev.points[0];
    let mut before: Option<P2> = None;
    path.push(cur);
    for rep in 0..2 {
        for i in 0..n {
            let (a, b) = (prev.points[i], prev.points[i + 1]);
            // Lattice symmetries taking a to cur: z -> z + t or z -> t - z.
            let mut cands: Vec<(i8, P2)> = Vec::with_capacity(2);
            if (cur - a).is_integral() {
                cands.push((1, cur - a));
            }
            if (cur + a).is_integral() {
                cands.push((-1, cur + a));
            }
            let apply = |(s, t): (i8, P2), z: P2| if s > 0 { z + t } else { t - z };
            let index = rep * n + i;
            let chosen = match (cands.len(), critical_kind(cur), before) {
                (0, _, _) => return Err(LattesError::ContinuityBreak { index }),
                (2, Some(kind), Some(p)) => {
                    let incoming = p - cur;
                    let mut pick = None;
                    for c in &cands {
                        let cr = cross(incoming, apply(*c, b) - cur);
                        if cr.is_zero() {
                            return Err(LattesError::ContinuityBreak { index });
                        }
                        if (cr > Q::zero()) == (TURN[kind] > 0) {
                            pick = Some(*c);
                        }
                    }
                    pick.ok_or(LattesError::ContinuityBreak { index })?
                }
                _ => cands[0],
            };
            let next = apply(chosen, b);
            before = Some(cur);
            cur = next;
            path.push(next);
        }
    }
    let points = path.into_iter().map(|p| eta_inv(p - half())).collect();
    let mut angles: Vec<Q> = prev.angles[..n].iter().map(|a| *a / 2).collect();
    angles.extend(prev.angles[..n].iter().map(|a| (*a + 1) / 2));
    angles.push((prev.angles[0] + 2) / 2);
    Ok(CurveStage { angles, points })
}

/// Stages 0..=k starting from the seed loop.
pub fn curve_stages(k: usize) -> Result<Vec<CurveStage>, LattesError> {
    let mut out = vec![seed_curve()];
    for _ in 0..k {
        let next = lift_curve_stage(out.last().unwrap())?;
        out.push(next);
    }
    Ok(out)
}

/// H(f_{k+1}(x)) = f_k(2x) at every sample, modulo the quotient.
pub fn check_semiconjugacy(prev: &CurveStage, next: &CurveStage) -> bool {
    next.angles.iter().zip(&next.points).all(|(x, p)| {
        let image = delta_canon(cover(*p));
        prev.value_at(*x * 2) == Some(image)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_double_and_semiconjugacy_is_exact() {
        let st = curve_stages(8).unwrap();
        for k in 1..st.len() {
            assert_eq!(st[k].segment_count(), 2 * st[k - 1].segment_count());
            assert!(check_semiconjugacy(&st[k - 1], &st[k]));
            let n = st[k].points.len();
            assert_eq!(delta_canon(st[k].points[0]), delta_canon(st[k].points[n - 1]));
        }
    }

    #[test]
    fn branch_values_on_seed() {
        let s = seed_curve();
        assert_eq!(s.value_at(q(1, 3)), Some(P2::new(q(1, 2), Q::zero())));
        assert_eq!(s.value_at(q(7, 6)), Some(P2::zero()));
    }
}
