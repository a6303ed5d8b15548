//! Exact planar points and segment contact tests.
//!
//! The torus engines work in lattice-basis coordinates, where the symmetry
//! group is z -> s*z + k with s = +-1 and k integral.  Both bases used here are
//! positively oriented, so orientation signs agree with the embedded plane.

use std::collections::HashMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;
use num_traits::Zero;

use crate::angle::{frac, Q};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct P2 {
    pub x: Q,
    pub y: Q,
}

impl P2 {
    pub fn new(x: Q, y: Q) -> P2 {
        P2 { x, y }
    }

    pub fn ints(x: i128, y: i128) -> P2 {
        P2 { x: Q::from_integer(x), y: Q::from_integer(y) }
    }

    pub fn zero() -> P2 {
        P2 { x: Q::zero(), y: Q::zero() }
    }

    pub fn is_integral(self) -> bool {
        self.x.is_integer() && self.y.is_integer()
    }

    pub fn to_f64(self) -> (f64, f64) {
        (q_to_f64(self.x), q_to_f64(self.y))
    }
}

pub fn q_to_f64(x: Q) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

impl Add for P2 {
    type Output = P2;
    fn add(self, o: P2) -> P2 {
        P2 { x: self.x + o.x, y: self.y + o.y }
    }
}

impl Sub for P2 {
    type Output = P2;
    fn sub(self, o: P2) -> P2 {
        P2 { x: self.x - o.x, y: self.y - o.y }
    }
}

impl Neg for P2 {
    type Output = P2;
    fn neg(self) -> P2 {
        P2 { x: -self.x, y: -self.y }
    }
}

impl Mul<P2> for Q {
    type Output = P2;
    fn mul(self, p: P2) -> P2 {
        P2 { x: self * p.x, y: self * p.y }
    }
}

/// Representative of the class of `p` under z -> +-z + Z^2: the smaller of the
/// two reductions into [0,1)^2.
pub fn delta_canon(p: P2) -> P2 {
    let a = P2::new(frac(p.x), frac(p.y));
    let b = P2::new(frac(-p.x), frac(-p.y));
    a.min(b)
}

pub type Seg = (P2, P2);

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Contact {
    Disjoint,
    /// Meet in a single point that is an endpoint of at least one segment.
    Touch,
    /// Proper transverse crossing at an interior point of both.
    Cross,
    /// Collinear with a common sub-segment of positive length.
    Overlap,
}

type IP = (i128, i128);

fn orient(a: IP, b: IP, c: IP) -> i128 {
    ((b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0)).signum()
}

fn on_segment(a: IP, b: IP, p: IP) -> bool {
    p.0 >= a.0.min(b.0) && p.0 <= a.0.max(b.0) && p.1 >= a.1.min(b.1) && p.1 <= a.1.max(b.1)
}

fn contact_int(a: IP, b: IP, c: IP, d: IP) -> Contact {
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    if o1 == 0 && o2 == 0 {
        // Collinear: project on the dominant axis.
        let key = |p: IP| if a.0 != b.0 { p.0 } else { p.1 };
        let (lo1, hi1) = (key(a).min(key(b)), key(a).max(key(b)));
        let (lo2, hi2) = (key(c).min(key(d)), key(c).max(key(d)));
        let lo = lo1.max(lo2);
        let hi = hi1.min(hi2);
        return if lo > hi {
            Contact::Disjoint
        } else if lo == hi {
            Contact::Touch
        } else {
            Contact::Overlap
        };
    }
    if o1 * o2 < 0 && o3 * o4 < 0 {
        return Contact::Cross;
    }
    let touch = (o1 == 0 && on_segment(a, b, c))
        || (o2 == 0 && on_segment(a, b, d))
        || (o3 == 0 && on_segment(c, d, a))
        || (o4 == 0 && on_segment(c, d, b));
    if touch {
        Contact::Touch
    } else {
        Contact::Disjoint
    }
}

/// Exact classification of how two closed segments meet.
pub fn segment_contact(s: Seg, t: Seg) -> Contact {
    let d = [s.0, s.1, t.0, t.1].iter().fold(1i128, |acc, p| acc.lcm(p.x.denom()).lcm(p.y.denom()));
    let sc = |p: P2| ((p.x * d).to_integer(), (p.y * d).to_integer());
    contact_int(sc(s.0), sc(s.1), sc(t.0), sc(t.1))
}

fn common_denominator<'a>(segs: impl Iterator<Item = &'a Seg>) -> i128 {
    segs.fold(1i128, |acc, (p, q)| acc.lcm(p.x.denom()).lcm(p.y.denom()).lcm(q.x.denom()).lcm(q.y.denom()))
}

/// A contact between `a[i]` and the image `s*b[j] + k` of `b[j]`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct DeltaContact {
    pub i: usize,
    pub j: usize,
    pub sign: i8,
    pub shift: (i128, i128),
    pub contact: Contact,
}

/// All contacts between segments of `a` and images of segments of `b` under
/// z -> +-z + Z^2.  When `same` is set, a segment against its own identity
/// image is skipped.  Candidate pairs are found with a uniform grid.
pub fn delta_contacts(a: &[Seg], b: &[Seg], same: bool) -> Vec<DeltaContact> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let d = common_denominator(a.iter().chain(b.iter()));
    let sc = |p: P2| ((p.x * d).to_integer(), (p.y * d).to_integer());
    let ai: Vec<(IP, IP)> = a.iter().map(|(p, q)| (sc(*p), sc(*q))).collect();
    let bi: Vec<(IP, IP)> = b.iter().map(|(p, q)| (sc(*p), sc(*q))).collect();

    let bbox = |s: &(IP, IP)| (s.0 .0.min(s.1 .0), s.0 .1.min(s.1 .1), s.0 .0.max(s.1 .0), s.0 .1.max(s.1 .1));
    let (mut x0, mut y0, mut x1, mut y1) = bbox(&ai[0]);
    let mut ext = 1i128;
    for s in &ai {
        let bb = bbox(s);
        x0 = x0.min(bb.0);
        y0 = y0.min(bb.1);
        x1 = x1.max(bb.2);
        y1 = y1.max(bb.3);
        ext = ext.max(bb.2 - bb.0).max(bb.3 - bb.1);
    }
    for s in &bi {
        let bb = bbox(s);
        ext = ext.max(bb.2 - bb.0).max(bb.3 - bb.1);
    }
    let cell = ext;
    let key = |x: i128, y: i128| (Integer::div_floor(&x, &cell), Integer::div_floor(&y, &cell));

    // Index the images of b that can reach the bounding box of a.
    type Image = (usize, i8, (i128, i128), (IP, IP));
    let mut images: Vec<Image> = Vec::new();
    let mut grid: HashMap<(i128, i128), Vec<usize>> = HashMap::new();
    for (j, t) in bi.iter().enumerate() {
        for sign in [1i8, -1] {
            let s = sign as i128;
            let u = ((s * t.0 .0, s * t.0 .1), (s * t.1 .0, s * t.1 .1));
            let bb = bbox(&u);
            let kx0 = Integer::div_ceil(&(x0 - bb.2), &d);
            let kx1 = Integer::div_floor(&(x1 - bb.0), &d);
            let ky0 = Integer::div_ceil(&(y0 - bb.3), &d);
            let ky1 = Integer::div_floor(&(y1 - bb.1), &d);
            for kx in kx0..=kx1 {
                for ky in ky0..=ky1 {
                    let img = ((u.0 .0 + kx * d, u.0 .1 + ky * d), (u.1 .0 + kx * d, u.1 .1 + ky * d));
                    let id = images.len();
                    let ib = bbox(&img);
                    let (c0, c1) = (key(ib.0, ib.1), key(ib.2, ib.3));
                    for cx in c0.0..=c1.0 {
                        for cy in c0.1..=c1.1 {
                            grid.entry((cx, cy)).or_default().push(id);
                        }
                    }
                    images.push((j, sign, (kx, ky), img));
                }
            }
        }
    }

    let mut out = Vec::new();
    let mut seen: Vec<usize> = Vec::new();
    for (i, s) in ai.iter().enumerate() {
        let bb = bbox(s);
        let (c0, c1) = (key(bb.0, bb.1), key(bb.2, bb.3));
        seen.clear();
        for cx in c0.0..=c1.0 {
            for cy in c0.1..=c1.1 {
                if let Some(ids) = grid.get(&(cx, cy)) {
                    seen.extend_from_slice(ids);
                }
            }
        }
        seen.sort_unstable();
        seen.dedup();
        for &id in &seen {
            let (j, sign, shift, img) = images[id];
            if same && i == j && sign == 1 && shift == (0, 0) {
                continue;
            }
            let ib = bbox(&img);
            if ib.0 > bb.2 || ib.2 < bb.0 || ib.1 > bb.3 || ib.3 < bb.1 {
                continue;
            }
            let c = contact_int(s.0, s.1, img.0, img.1);
            if c != Contact::Disjoint {
                out.push(DeltaContact { i, j, sign, shift, contact: c });
            }
        }
    }
    out
}

/// Least-squares slope and its standard error.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = xs.iter().zip(ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    let se = if xs.len() > 2 { (rss / (n - 2.0) / sxx).sqrt() } else { 0.0 };
    (slope, intercept, se)
}
