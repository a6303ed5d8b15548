//! Invariant laminations of x -> d*x mod 1 generated from a major.

use std::collections::BTreeSet;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::angle::{Angle, Q};
use crate::lamination::{classes_unlinked, FiniteLamination, GapClass, LamMeta};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Major {
    degree: u32,
    classes: Vec<GapClass>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MajorError {
    #[error("degree must be at least 2, got {0}")]
    Degree(u32),
    #[error("class {0} is not critical: some difference is not a multiple of 1/d")]
    NotCritical(GapClass),
    #[error("total multiplicity is {got}, expected d-1 = {expected}")]
    Multiplicity { got: usize, expected: usize },
    #[error("classes {0} and {1} share an angle")]
    NotDisjoint(GapClass, GapClass),
    #[error("classes {0} and {1} are linked")]
    Linked(GapClass, GapClass),
}

pub fn validate_major(d: u32, classes: &[GapClass]) -> Result<Major, MajorError> {
    if d < 2 {
        return Err(MajorError::Degree(d));
    }
    for c in classes {
        let x0 = c.angles()[0];
        if c.angles().iter().any(|x| !((x.value() - x0.value()) * Q::from_integer(d as i128)).is_integer()) {
            return Err(MajorError::NotCritical(c.clone()));
        }
    }
    let mult: usize = classes.iter().map(|c| c.len() - 1).sum();
    if mult != d as usize - 1 {
        return Err(MajorError::Multiplicity { got: mult, expected: d as usize - 1 });
    }
    for i in 0..classes.len() {
        for j in i + 1..classes.len() {
            let (a, b) = (&classes[i], &classes[j]);
            if a.angles().iter().any(|x| b.contains(*x)) {
                return Err(MajorError::NotDisjoint(a.clone(), b.clone()));
            }
            if !classes_unlinked(a, b) {
                return Err(MajorError::Linked(a.clone(), b.clone()));
            }
        }
    }
    let mut classes = classes.to_vec();
    classes.sort();
    Ok(Major { degree: d, classes })
}

impl Major {
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn classes(&self) -> &[GapClass] {
        &self.classes
    }

    /// Complementary regions of the major's hulls.  Each region is a list of
    /// half-open arcs `[start, start+len)` whose total length is 1/d; the map
    /// sends each region's glued boundary once around the circle.
    pub fn regions(&self) -> Vec<Vec<(Angle, Q)>> {
        let mut pts: Vec<(Angle, usize)> = Vec::new();
        for (ci, c) in self.classes.iter().enumerate() {
            for a in c.angles() {
                pts.push((*a, ci));
            }
        }
        pts.sort();
        let n = pts.len();
        let pos = |x: Angle| pts.binary_search_by(|p| p.0.cmp(&x)).unwrap();
        // Arc j runs from pts[j] to pts[j+1].  After reaching the end of an arc,
        // the region continues from the preceding angle of the same class.
        let next = |j: usize| -> usize {
            let (end, ci) = pts[(j + 1) % n];
            let c = self.classes[ci].angles();
            let k = c.binary_search(&end).unwrap();
            pos(c[(k + c.len() - 1) % c.len()])
        };
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for j0 in 0..n {
            if seen[j0] {
                continue;
            }
            let mut region = Vec::new();
            let mut j = j0;
            while !seen[j] {
                seen[j] = true;
                let (s, _) = pts[j];
                let e = pts[(j + 1) % n].0;
                region.push((s, s.ccw_to(e)));
                j = next(j);
            }
            region.sort();
            out.push(region);
        }
        out.sort();
        out
    }

    fn is_endpoint(&self, x: Angle) -> bool {
        self.classes.iter().any(|c| c.contains(x))
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OrbitSummary {
    pub points: Vec<Angle>,
    pub preperiod: usize,
    pub period: usize,
}

impl OrbitSummary {
    pub fn cycle(&self) -> &[Angle] {
        &self.points[self.preperiod..self.preperiod + self.period]
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("no repeat within {0} steps")]
pub struct MaxStepsExceeded(pub usize);

/// Iterates x -> d*x until the first repeat.
pub fn forward_orbit(x: Angle, d: u32, max_steps: usize) -> Result<OrbitSummary, MaxStepsExceeded> {
    let mut points = vec![x];
    let mut cur = x;
    for _ in 0..max_steps {
        cur = cur.times(d as i128);
        if let Some(i) = points.iter().position(|p| *p == cur) {
            let period = points.len() - i;
            return Ok(OrbitSummary { points, preperiod: i, period });
        }
        points.push(cur);
    }
    Err(MaxStepsExceeded(max_steps))
}

/// Raised when an iterated image lands on an endpoint of the major, so the
/// preimage pairing is not unique and the leftmost choice was taken.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AmbiguityWarning {
    pub level: usize,
    pub angle: Angle,
}

impl std::fmt::Display for AmbiguityWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "level {}: preimage {} is an endpoint of the major; leftmost choice used", self.level, self.angle)
    }
}

/// Preimage class of `target` inside one region.  Arcs are half open, so a
/// preimage on a region boundary is represented by the start of its arc.
fn preimage_in_region(target: &[Angle], d: u32, region: &[(Angle, Q)]) -> Vec<Angle> {
    let mut out = Vec::with_capacity(target.len());
    for y in target {
        let mut found = None;
        for k in 0..d as i128 {
            let x = Angle::new((y.value() + Q::from_integer(k)) / Q::from_integer(d as i128));
            if region.iter().any(|(s, len)| s.ccw_to(x) < *len) {
                found = Some(x);
                break;
            }
        }
        out.push(found.expect("every point has one preimage per region"));
    }
    out.sort();
    out
}

pub struct Generated {
    pub lamination: FiniteLamination,
    pub warnings: Vec<AmbiguityWarning>,
}

/// Cactus pullback: level 0 is the major, level k+1 holds the d preimage
/// classes of each level-k class.
pub fn generate_invariant_lamination(major: &Major, depth: usize) -> Generated {
    let d = major.degree;
    let regions = major.regions();
    let mut levels = vec![major.classes.clone()];
    let mut warned: BTreeSet<(usize, Angle)> = BTreeSet::new();
    for k in 1..=depth {
        let mut next = Vec::with_capacity(levels[k - 1].len() * d as usize);
        for c in &levels[k - 1] {
            for r in &regions {
                let pre = preimage_in_region(c.angles(), d, r);
                for x in &pre {
                    if major.is_endpoint(*x) {
                        warned.insert((k, *x));
                    }
                }
                next.push(GapClass::new(pre).expect("distinct targets have distinct preimages"));
            }
        }
        next.sort();
        levels.push(next);
    }
    let warnings = warned.into_iter().map(|(level, angle)| AmbiguityWarning { level, angle }).collect();
    Generated { lamination: FiniteLamination { meta: LamMeta::Degree(d), levels }, warnings }
}

/// Checks that each level-k class occurs exactly d times among forward
/// images of level k+1 and that no class collapses.
pub fn check_image_multiplicity(lam: &FiniteLamination, d: u32) -> bool {
    for k in 1..lam.levels.len() {
        let mut imgs: Vec<GapClass> = Vec::new();
        for c in &lam.levels[k] {
            match GapClass::new(c.image(|x| x.times(d as i128))) {
                Ok(g) => imgs.push(g),
                Err(_) => return false,
            }
        }
        imgs.sort();
        let mut expect: Vec<GapClass> =
            lam.levels[k - 1].iter().flat_map(|c| std::iter::repeat_n(c.clone(), d as usize)).collect();
        expect.sort();
        if imgs != expect {
            return false;
        }
    }
    true
}

pub fn region_lengths_ok(major: &Major) -> bool {
    let regs = major.regions();
    let target = Q::one() / Q::from_integer(major.degree as i128);
    regs.len() == major.degree as usize
        && regs.iter().all(|r| r.iter().fold(Q::zero(), |acc, (_, l)| acc + *l) == target)
}
