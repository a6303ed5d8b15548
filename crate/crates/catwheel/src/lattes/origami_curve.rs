//! Subdivision engine for the origami example on C/Z[i].
//!
//! The sphere is the pillowcase R = [0,1/2] x [-1/2,1/2], with the front
//! square y >= 0 and the back square y <= 0.  H(x+iy) = G(x) + iG(y) maps
//! each of the 18 cells of side 1/6 onto a front or back square.

use num_traits::{One, Zero};

use super::LattesError;
use crate::angle::{q, Q};
use crate::geom::{delta_canon, delta_contacts, Contact, Seg, P2};

/// G(x) = 3x on [0,1/3], 2 - 3x on [1/3,2/3], 3x - 2 on [2/3,1], extended by G(x+1) = G(x) + 1.
pub fn g_map(x: Q) -> Q {
    let n = x.floor();
    let r = x - n;
    let v = if r <= q(1, 3) {
        r * 3
    } else if r <= q(2, 3) {
        Q::from_integer(2) - r * 3
    } else {
        r * 3 - 2
    };
    n + v
}

pub fn h_tilde(p: P2) -> P2 {
    P2::new(g_map(p.x), g_map(p.y))
}

/// Inverse of G on the i-th sixth of [0,1/2].
fn g_inv(i: usize, t: Q) -> Q {
    if i < 2 {
        t / 3
    } else {
        (Q::from_integer(2) - t) / 3
    }
}

/// G-image of the i-th sixth of [0,1/2].
fn cell_range(i: usize) -> (Q, Q) {
    if i == 0 {
        (Q::zero(), q(1, 2))
    } else {
        (q(1, 2), Q::one())
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Half {
    Front,
    Back,
}

/// How one cell's sub-path maps onto the previous stage.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct CellLift {
    pub source: Half,
    pub reversed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrigamiStage {
    pub level: usize,
    pub front: Vec<P2>,
    pub back: Vec<P2>,
    /// Empty for the seed.
    pub cells: Vec<CellLift>,
}

/// Stage 0: the two-segment loop through the centers of the two squares.
pub fn origami_seed() -> OrigamiStage {
    OrigamiStage {
        level: 0,
        front: vec![P2::new(q(1, 4), q(1, 4))],
        back: vec![P2::new(q(1, 4), q(-1, 4))],
        cells: Vec::new(),
    }
}

/// Serpentine order of the 3x3 cells: columns first for rule 0, rows first for rule 1.
fn serpentine(rule: u8) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(9);
    for a in 0..3 {
        let bs: Vec<usize> = if a % 2 == 0 { vec![0, 1, 2] } else { vec![2, 1, 0] };
        for b in bs {
            out.push(if rule == 0 { (a, b) } else { (b, a) });
        }
    }
    out
}

/// First representative of w under z -> +-z + Z^2 in the closed box.
fn rep_in(w: P2, xr: (Q, Q), yr: (Q, Q)) -> Option<P2> {
    for s in [1i128, -1] {
        for a in -2..=2i128 {
            for b in -2..=2i128 {
                let u = P2::new(w.x * s + a, w.y * s + b);
                if xr.0 <= u.x && u.x <= xr.1 && yr.0 <= u.y && u.y <= yr.1 {
                    return Some(u);
                }
            }
        }
    }
    None
}

fn dist2(a: P2, b: P2) -> Q {
    let d = a - b;
    d.x * d.x + d.y * d.y
}

/// One subdivision stage.  Bit 0 of `choice` picks the cell order on the
/// front square, bit 1 on the back square.
pub fn origami_curve_stage(prev: &OrigamiStage, choice: u8) -> Result<OrigamiStage, LattesError> {
    if choice > 3 {
        return Err(LattesError::ChoiceOutOfRange(choice));
    }
    let mut halves: Vec<Vec<P2>> = Vec::with_capacity(2);
    let mut cells_out = Vec::with_capacity(18);
    for (rule, back) in [(choice & 1, false), ((choice >> 1) & 1, true)] {
        let mut cells = serpentine(rule);
        if back {
            cells = cells.into_iter().map(|(a, b)| (2 - a, 2 - b)).collect();
        }
        let mut pts: Vec<P2> = Vec::new();
        for (i, j) in cells {
            let xr = cell_range(i);
            let yr = if back {
                let r = cell_range(j);
                (-r.1, -r.0)
            } else {
                cell_range(j)
            };
            let mut found: Vec<(Half, Vec<P2>)> = Vec::new();
            for (src, hp) in [(Half::Front, &prev.front), (Half::Back, &prev.back)] {
                let lifted: Option<Vec<P2>> = hp
                    .iter()
                    .map(|w| {
                        rep_in(*w, xr, yr).map(|r| {
                            if back {
                                P2::new(g_inv(i, r.x), -g_inv(j, -r.y))
                            } else {
                                P2::new(g_inv(i, r.x), g_inv(j, r.y))
                            }
                        })
                    })
                    .collect();
                if let Some(l) = lifted {
                    found.push((src, l));
                }
            }
            if found.len() != 1 {
                return Err(LattesError::AmbiguousCell { cell: (i, j), candidates: found.len() });
            }
            let (source, mut sub) = found.pop().unwrap();
            let anchor = match pts.last() {
                Some(p) => *p,
                None if back => P2::new(q(1, 2), q(-1, 2)),
                None => P2::zero(),
            };
            let reversed = dist2(*sub.last().unwrap(), anchor) < dist2(sub[0], anchor);
            if reversed {
                sub.reverse();
            }
            cells_out.push(CellLift { source, reversed });
            pts.extend(sub);
        }
        halves.push(pts);
    }
    let back = halves.pop().unwrap();
    let front = halves.pop().unwrap();
    Ok(OrigamiStage { level: prev.level + 1, front, back, cells: cells_out })
}

/// Stages 0..=n; missing choices default to 0.
pub fn origami_curve(n: usize, choices: &[u8]) -> Result<Vec<OrigamiStage>, LattesError> {
    let mut out = vec![origami_seed()];
    for k in 0..n {
        let c = choices.get(k).copied().unwrap_or(0);
        let next = origami_curve_stage(out.last().unwrap(), c)?;
        out.push(next);
    }
    Ok(out)
}

const RECT_X: (i128, i128) = (0, 1);
const RECT_Y: (i128, i128) = (-1, 1);

fn in_rect(p: P2) -> bool {
    let h = q(1, 2);
    p.x >= h * RECT_X.0 && p.x <= h * RECT_X.1 && p.y >= h * RECT_Y.0 && p.y <= h * RECT_Y.1
}

impl OrigamiStage {
    pub fn vertices(&self) -> Vec<P2> {
        self.front.iter().chain(self.back.iter()).cloned().collect()
    }

    pub fn mesh(&self) -> Q {
        q(1, 2) / Q::from_integer(3i128.pow(self.level as u32))
    }

    pub fn embedded(&self) -> Vec<(f64, f64)> {
        self.vertices().iter().map(|p| p.to_f64()).collect()
    }

    /// Segments of the closed loop drawn inside R.  A step that leaves R
    /// through an edge is split there and continued from the glued point.
    pub fn pieces(&self) -> Vec<Seg> {
        let v = self.vertices();
        let n = v.len();
        let mut out = Vec::with_capacity(n + 2);
        for k in 0..n {
            let (p, target) = (v[k], v[(k + 1) % n]);
            // Nearest image s*target + t of the next vertex.
            let mut best: Option<(Q, i128, P2)> = None;
            for s in [1i128, -1] {
                for a in -1..=1i128 {
                    for b in -1..=1i128 {
                        let img = P2::new(target.x * s + a, target.y * s + b);
                        let d = dist2(img, p);
                        if best.as_ref().is_none_or(|(bd, _, _)| d < *bd) {
                            best = Some((d, s, P2::ints(a, b)));
                        }
                    }
                }
            }
            let (_, s, t) = best.unwrap();
            let img = Q::from_integer(s) * target + t;
            if in_rect(img) {
                out.push((p, img));
                continue;
            }
            let dir = img - p;
            let h = q(1, 2);
            let mut ts: Vec<Q> = Vec::new();
            for (coord, d, lo, hi) in
                [(p.x, dir.x, h * RECT_X.0, h * RECT_X.1), (p.y, dir.y, h * RECT_Y.0, h * RECT_Y.1)]
            {
                if d < Q::zero() {
                    ts.push((lo - coord) / d);
                } else if d > Q::zero() {
                    ts.push((hi - coord) / d);
                }
            }
            let te = ts.into_iter().filter(|t| *t > Q::zero() && *t < Q::one()).min().expect("step leaves R");
            let m = p + te * dir;
            // target = s*(img - t), so the exit point continues from s*(m - t).
            let m2 = Q::from_integer(s) * (m - t);
            out.push((p, m));
            out.push((m2, target));
        }
        out
    }

    /// Distinct vertices on the sphere, and no two pieces meet on the sphere
    /// except consecutive pieces touching at a point.
    pub fn is_simple(&self) -> bool {
        let v = self.vertices();
        let mut canon: Vec<P2> = v.iter().map(|p| delta_canon(*p)).collect();
        canon.sort();
        canon.dedup();
        if canon.len() != v.len() {
            return false;
        }
        let pieces = self.pieces();
        let n = pieces.len();
        delta_contacts(&pieces, &pieces, true).iter().all(|c| {
            let consecutive = (c.i + 1) % n == c.j || (c.j + 1) % n == c.i;
            c.contact == Contact::Touch && (consecutive || (c.i == c.j))
        })
    }

    /// Every step has quotient length exactly the mesh.
    pub fn steps_are_mesh(&self) -> bool {
        let v = self.vertices();
        let m2 = self.mesh() * self.mesh();
        (0..v.len()).all(|k| quotient_dist2(v[k], v[(k + 1) % v.len()]) == m2)
    }

    /// Slope of the boundary map on each cell's parameter interval.
    pub fn boundary_map_slopes(&self) -> Vec<i32> {
        self.cells.iter().map(|c| if c.reversed { -9 } else { 9 }).collect()
    }
}

/// Squared distance in the quotient by z -> +-z + Z^2.
pub fn quotient_dist2(a: P2, b: P2) -> Q {
    let mut best: Option<Q> = None;
    for s in [1i128, -1] {
        let d = a - Q::from_integer(s) * b;
        let dx = d.x - d.x.round();
        let dy = d.y - d.y.round();
        let v = dx * dx + dy * dy;
        if best.is_none_or(|b| v < b) {
            best = Some(v);
        }
    }
    best.unwrap()
}

/// H(f_{k+1}) = f_k(h) at every vertex, cell by cell.
pub fn check_origami_semiconjugacy(prev: &OrigamiStage, next: &OrigamiStage) -> bool {
    let v = next.vertices();
    let mut offset = 0;
    for c in &next.cells {
        let src = match c.source {
            Half::Front => &prev.front,
            Half::Back => &prev.back,
        };
        let m = src.len();
        if offset + m > v.len() {
            return false;
        }
        for (r, &s) in src.iter().enumerate() {
            let idx = if c.reversed { offset + m - 1 - r } else { offset + r };
            if delta_canon(h_tilde(v[idx])) != delta_canon(s) {
                return false;
            }
        }
        offset += m;
    }
    offset == v.len()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g_values() {
        assert_eq!(g_map(q(1, 3)), Q::one());
        assert_eq!(g_map(q(1, 2)), q(1, 2));
        assert_eq!(g_map(q(-1, 6)), q(-1, 2));
    }

    #[test]
    fn stages_are_simple_and_semiconjugate() {
        for choice in 0..4u8 {
            let st = origami_curve(3, &[choice; 3]).unwrap();
            for k in 1..st.len() {
                assert_eq!(st[k].vertices().len(), 2 * 9usize.pow(k as u32));
                assert!(st[k].steps_are_mesh(), "choice {choice} stage {k}");
                assert!(st[k].is_simple(), "choice {choice} stage {k}");
                assert!(check_origami_semiconjugacy(&st[k - 1], &st[k]));
            }
        }
    }

    #[test]
    fn bad_choice() {
        assert_eq!(origami_curve_stage(&origami_seed(), 4), Err(LattesError::ChoiceOutOfRange(4)));
    }

    #[test]
    fn choices_stay_close() {
        let a = origami_curve(2, &[0, 0]).unwrap().pop().unwrap();
        for c in 1..4u8 {
            let b = origami_curve(2, &[c, c]).unwrap().pop().unwrap();
            let bound = (a.mesh() * 2) * (a.mesh() * 2);
            for p in a.vertices() {
                assert!(b.vertices().iter().any(|w| quotient_dist2(p, *w) <= bound));
            }
        }
    }
}
