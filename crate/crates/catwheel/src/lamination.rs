//! Leaves, gap classes, finite laminations and the predicates that
//! characterize laminar relations.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use num_traits::{One, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::angle::{q, Angle, Q};
use crate::error::ParseError;

/// Unordered pair of distinct angles, stored with `a < b`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Leaf {
    a: Angle,
    b: Angle,
}

impl Leaf {
    pub fn new(x: Angle, y: Angle) -> Option<Leaf> {
        match x.cmp(&y) {
            std::cmp::Ordering::Less => Some(Leaf { a: x, b: y }),
            std::cmp::Ordering::Greater => Some(Leaf { a: y, b: x }),
            std::cmp::Ordering::Equal => None,
        }
    }

    pub fn a(&self) -> Angle {
        self.a
    }

    pub fn b(&self) -> Angle {
        self.b
    }

    pub fn has_endpoint(&self, x: Angle) -> bool {
        self.a == x || self.b == x
    }

    /// Length of the shorter arc spanned by the leaf.
    pub fn length(&self) -> Q {
        self.a.dist(self.b)
    }

    /// The shorter open arc containing `p` as (start, length), if `p` lies
    /// strictly inside an arc of length < 1/2.
    pub fn short_arc_around(&self, p: Angle) -> Option<(Angle, Q)> {
        let len = self.a.ccw_to(self.b);
        let half = q(1, 2);
        if len < half && p.in_open_arc(self.a, self.b) {
            Some((self.a, len))
        } else if len > half && p.in_open_arc(self.b, self.a) {
            Some((self.b, Q::one() - len))
        } else {
            None
        }
    }

    pub fn to_class(&self) -> GapClass {
        GapClass(vec![self.a, self.b])
    }
}

impl std::fmt::Display for Leaf {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{{}, {}}}", self.a, self.b)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum LinkResult {
    Linked,
    Unlinked,
    SharedEndpoint(Angle),
}

pub fn leaves_link(l1: &Leaf, l2: &Leaf) -> LinkResult {
    let shared = [l2.a, l2.b].into_iter().filter(|x| l1.has_endpoint(*x)).min();
    if let Some(x) = shared {
        return LinkResult::SharedEndpoint(x);
    }
    let inside = [l2.a, l2.b].iter().filter(|x| x.in_open_arc(l1.a, l1.b)).count();
    if inside == 1 {
        LinkResult::Linked
    } else {
        LinkResult::Unlinked
    }
}

/// A finite set of at least two angles, sorted ascending.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct GapClass(Vec<Angle>);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("a gap class needs at least two distinct angles")]
pub struct TooFewAngles;

impl GapClass {
    pub fn new(mut angles: Vec<Angle>) -> Result<GapClass, TooFewAngles> {
        angles.sort();
        angles.dedup();
        if angles.len() < 2 {
            return Err(TooFewAngles);
        }
        Ok(GapClass(angles))
    }

    pub fn angles(&self) -> &[Angle] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, x: Angle) -> bool {
        self.0.binary_search(&x).is_ok()
    }

    /// Hull sides: leaves joining circularly consecutive angles.
    pub fn sides(&self) -> Vec<Leaf> {
        let n = self.0.len();
        if n == 2 {
            return vec![Leaf::new(self.0[0], self.0[1]).unwrap()];
        }
        let mut out: Vec<Leaf> = (0..n).map(|i| Leaf::new(self.0[i], self.0[(i + 1) % n]).unwrap()).collect();
        out.sort();
        out
    }

    /// Image under `f` as a sorted set; a single angle means the class collapses.
    pub fn image(&self, f: impl Fn(Angle) -> Angle) -> Vec<Angle> {
        let mut v: Vec<Angle> = self.0.iter().map(|x| f(*x)).collect();
        v.sort();
        v.dedup();
        v
    }

    /// Indices of complementary arcs whose closure contains `y`.  Arc `i` runs
    /// counterclockwise from angle `i` to angle `i+1`.
    fn arcs_containing(&self, y: Angle) -> [usize; 2] {
        let n = self.0.len();
        match self.0.binary_search(&y) {
            Ok(k) => [(k + n - 1) % n, k],
            Err(k) => {
                let i = (k + n - 1) % n;
                [i, i]
            }
        }
    }

    fn lies_in_one_arc_of(&self, other: &GapClass) -> bool {
        let mut cand: Option<[usize; 2]> = None;
        for y in &self.0 {
            let arcs = other.arcs_containing(*y);
            cand = Some(match cand {
                None => arcs,
                Some(c) => {
                    let keep: Vec<usize> = c.iter().copied().filter(|i| arcs.contains(i)).collect();
                    match keep.len() {
                        0 => return false,
                        1 => [keep[0], keep[0]],
                        _ => [keep[0], keep[1]],
                    }
                }
            });
        }
        true
    }
}

impl std::fmt::Display for GapClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|a| a.to_string()).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// True when the convex hulls of the two classes do not cross.
pub fn classes_unlinked(c1: &GapClass, c2: &GapClass) -> bool {
    c1 == c2 || (c2.lies_in_one_arc_of(c1) && c1.lies_in_one_arc_of(c2))
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum CheckReport {
    Ok,
    Violation(GapClass, GapClass),
}

impl CheckReport {
    pub fn is_ok(&self) -> bool {
        matches!(self, CheckReport::Ok)
    }
}

/// Pairwise non-crossing check.  Pairs are scanned in lexicographic order of
/// the sorted class list, so the reported violation is reproducible.
pub fn check_pairwise_unlinked(classes: &[GapClass]) -> CheckReport {
    let mut sorted: Vec<&GapClass> = classes.iter().collect();
    sorted.sort();
    sorted.dedup();
    for i in 0..sorted.len() {
        let hi = *sorted[i].0.last().unwrap();
        for j in i + 1..sorted.len() {
            // Everything from here on sits in the closed wrap-around arc of class i.
            if sorted[j].0[0] >= hi {
                break;
            }
            if !classes_unlinked(sorted[i], sorted[j]) {
                return CheckReport::Violation(sorted[i].clone(), sorted[j].clone());
            }
        }
    }
    CheckReport::Ok
}

/// Union-find closure of the relation generated by the given angle sets.
pub fn close_classes<'a, I>(sets: I) -> Vec<GapClass>
where
    I: IntoIterator<Item = &'a [Angle]>,
{
    let mut index: HashMap<Angle, usize> = HashMap::new();
    let mut parent: Vec<usize> = Vec::new();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut ids: Vec<Angle> = Vec::new();
    for set in sets {
        let mut first: Option<usize> = None;
        for a in set {
            let id = *index.entry(*a).or_insert_with(|| {
                parent.push(parent.len());
                ids.push(*a);
                parent.len() - 1
            });
            match first {
                None => first = Some(id),
                Some(f) => {
                    let (ra, rb) = (find(&mut parent, f), find(&mut parent, id));
                    if ra != rb {
                        parent[ra.max(rb)] = ra.min(rb);
                    }
                }
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<Angle>> = BTreeMap::new();
    for (i, a) in ids.iter().enumerate() {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(*a);
    }
    let mut out: Vec<GapClass> = groups.into_values().filter_map(|v| GapClass::new(v).ok()).collect();
    out.sort();
    out
}

pub fn close_transitively(leaves: &[Leaf]) -> Vec<GapClass> {
    let pairs: Vec<[Angle; 2]> = leaves.iter().map(|l| [l.a, l.b]).collect();
    close_classes(pairs.iter().map(|p| &p[..]))
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("classes {0} and {1} are linked")]
pub struct LinkedInput(pub GapClass, pub GapClass);

pub fn boundary_lamination(classes: &[GapClass]) -> Result<Vec<Leaf>, LinkedInput> {
    if let CheckReport::Violation(a, b) = check_pairwise_unlinked(classes) {
        return Err(LinkedInput(a, b));
    }
    Ok(boundary_leaves(classes))
}

/// Hull sides of every class, without the linking precheck.
pub fn boundary_leaves(classes: &[GapClass]) -> Vec<Leaf> {
    let set: BTreeSet<Leaf> = classes.iter().flat_map(|c| c.sides()).collect();
    set.into_iter().collect()
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PerfectFit {
    pub angle: Angle,
    pub plus: GapClass,
    pub minus: GapClass,
}

pub fn find_perfect_fits(plus: &[GapClass], minus: &[GapClass]) -> Vec<PerfectFit> {
    let mut by_angle: HashMap<Angle, Vec<&GapClass>> = HashMap::new();
    for c in plus {
        for a in c.angles() {
            by_angle.entry(*a).or_default().push(c);
        }
    }
    let mut out: BTreeSet<(Angle, &GapClass, &GapClass)> = BTreeSet::new();
    for m in minus {
        for a in m.angles() {
            if let Some(ps) = by_angle.get(a) {
                for p in ps {
                    out.insert((*a, *p, m));
                }
            }
        }
    }
    out.into_iter().map(|(angle, p, m)| PerfectFit { angle, plus: p.clone(), minus: m.clone() }).collect()
}

/// Nested chain of leaves shrinking toward `p`, outermost first.  A leaf
/// straddles `p` when `p` lies strictly inside its shorter arc; diameters
/// never straddle.  Candidates are taken by generation level, then by arc
/// length, so the chain starts at the shallowest straddling leaf.  Chains of
/// fewer than two leaves are reported as empty.
pub fn rainbow_search(p: Angle, lam: &FiniteLamination, depth: usize) -> Vec<Leaf> {
    let mut seen: BTreeSet<Leaf> = BTreeSet::new();
    let mut arcs: Vec<(usize, Q, Angle, Leaf)> = Vec::new();
    for (k, level) in lam.levels.iter().enumerate().take(depth + 1) {
        for l in boundary_leaves(level) {
            if seen.insert(l) {
                if let Some((s, len)) = l.short_arc_around(p) {
                    arcs.push((k, len, s, l));
                }
            }
        }
    }
    arcs.sort_by(|x, y| x.0.cmp(&y.0).then(y.1.cmp(&x.1)).then(x.3.cmp(&y.3)));
    let arcs = arcs.into_iter().map(|(_, len, s, l)| (len, s, l));
    let mut chain: Vec<(Angle, Q, Leaf)> = Vec::new();
    for (len, s, l) in arcs {
        let nested = match chain.last() {
            None => true,
            Some((s0, len0, _)) => {
                let off = s0.ccw_to(s);
                off + len <= *len0 && !(off.is_zero() && len == *len0)
            }
        };
        if nested {
            chain.push((s, len, l));
        }
    }
    if chain.len() < 2 {
        return Vec::new();
    }
    chain.into_iter().map(|(_, _, l)| l).collect()
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, PartialOrd, Ord)]
pub enum Side {
    /// The side facing the counterclockwise arc from `a` to `b`.
    Inner,
    Outer,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IsolatedSide {
    pub leaf: Leaf,
    pub level: usize,
    pub side: Side,
}

/// Advisory finite-depth surrogate for "no isolated sides": flags boundary
/// leaves with no other leaf of depth at most their own within `eps` on a
/// given side.  Finite data cannot certify the limit property.
pub fn isolated_sides_report(lam: &FiniteLamination, eps: Q) -> Vec<IsolatedSide> {
    let mut first_level: BTreeMap<Leaf, usize> = BTreeMap::new();
    for (k, level) in lam.levels.iter().enumerate() {
        for c in level {
            for l in c.sides() {
                first_level.entry(l).or_insert(k);
            }
        }
    }
    let all: Vec<(Leaf, usize)> = first_level.iter().map(|(l, k)| (*l, *k)).collect();
    let mut out = Vec::new();
    for (l, k) in &all {
        for side in [Side::Inner, Side::Outer] {
            let (s, e) = match side {
                Side::Inner => (l.a, l.b),
                Side::Outer => (l.b, l.a),
            };
            let span = s.ccw_to(e);
            let near = all.iter().any(|(m, km)| {
                if km > k || m == l {
                    return false;
                }
                let (c, d) = (m.a, m.b);
                let inside = |x: Angle| s.ccw_to(x) <= span;
                if !inside(c) || !inside(d) {
                    return false;
                }
                let (c, d) = if s.ccw_to(c) <= s.ccw_to(d) { (c, d) } else { (d, c) };
                s.dist(c).max(e.dist(d)) <= eps
            });
            if !near {
                out.push(IsolatedSide { leaf: *l, level: *k, side });
            }
        }
    }
    out
}

/// For each sample pair, whether some leaf of each family links it.
pub fn linking_sample_report(plus: &[Leaf], minus: &[Leaf], samples: &[Leaf]) -> Vec<(Leaf, bool, bool)> {
    samples
        .iter()
        .map(|s| {
            let lp = plus.iter().any(|l| leaves_link(l, s) == LinkResult::Linked);
            let lm = minus.iter().any(|l| leaves_link(l, s) == LinkResult::Linked);
            (*s, lp, lm)
        })
        .collect()
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum LamMeta {
    Degree(u32),
    Map(String),
}

/// Leveled set of classes; level `k` holds the classes generated at depth `k`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FiniteLamination {
    pub meta: LamMeta,
    pub levels: Vec<Vec<GapClass>>,
}

impl FiniteLamination {
    pub fn empty(meta: LamMeta) -> FiniteLamination {
        FiniteLamination { meta, levels: Vec::new() }
    }

    pub fn depth(&self) -> usize {
        self.levels.len().saturating_sub(1)
    }

    pub fn classes_up_to(&self, depth: usize) -> Vec<GapClass> {
        self.levels.iter().take(depth + 1).flatten().cloned().collect()
    }

    pub fn all_classes(&self) -> Vec<GapClass> {
        self.levels.iter().flatten().cloned().collect()
    }

    pub fn leaves_up_to(&self, depth: usize) -> Vec<Leaf> {
        boundary_leaves(&self.classes_up_to(depth))
    }

    pub fn truncated(&self, depth: usize) -> FiniteLamination {
        FiniteLamination { meta: self.meta.clone(), levels: self.levels.iter().take(depth + 1).cloned().collect() }
    }

    pub fn map_angles(&self, f: impl Fn(Angle) -> Angle) -> FiniteLamination {
        let levels = self
            .levels
            .iter()
            .map(|lv| {
                let mut v: Vec<GapClass> =
                    lv.iter().map(|c| GapClass::new(c.angles().iter().map(|a| f(*a)).collect()).unwrap()).collect();
                v.sort();
                v
            })
            .collect();
        FiniteLamination { meta: self.meta.clone(), levels }
    }

    pub fn to_json(&self) -> Value {
        let levels: Vec<Value> = self
            .levels
            .iter()
            .map(|lv| {
                Value::Array(
                    lv.iter()
                        .map(|c| Value::Array(c.angles().iter().map(|a| Value::String(a.to_string())).collect()))
                        .collect(),
                )
            })
            .collect();
        match &self.meta {
            LamMeta::Degree(d) => json!({ "degree": d, "levels": levels }),
            LamMeta::Map(id) => json!({ "map": id, "levels": levels }),
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("serializable")
    }

    pub fn from_json(v: &Value) -> Result<FiniteLamination, ParseError> {
        let shape = |m: &str| ParseError::Shape(m.to_string());
        let meta = if let Some(d) = v.get("degree") {
            LamMeta::Degree(d.as_u64().ok_or_else(|| shape("degree must be a positive integer"))? as u32)
        } else if let Some(m) = v.get("map") {
            LamMeta::Map(m.as_str().ok_or_else(|| shape("map must be a string"))?.to_string())
        } else {
            return Err(shape("missing \"degree\" or \"map\""));
        };
        let levels_v = v.get("levels").and_then(|l| l.as_array()).ok_or_else(|| shape("missing levels array"))?;
        let mut levels = Vec::with_capacity(levels_v.len());
        for lv in levels_v {
            let arr = lv.as_array().ok_or_else(|| shape("level must be an array"))?;
            let mut classes = Vec::with_capacity(arr.len());
            for c in arr {
                classes.push(parse_class(c)?);
            }
            classes.sort();
            levels.push(classes);
        }
        Ok(FiniteLamination { meta, levels })
    }

    pub fn from_json_str(s: &str) -> Result<FiniteLamination, ParseError> {
        let v: Value = serde_json::from_str(s).map_err(|e| ParseError::Json(e.to_string()))?;
        FiniteLamination::from_json(&v)
    }
}

pub fn parse_class(c: &Value) -> Result<GapClass, ParseError> {
    let arr = c.as_array().ok_or_else(|| ParseError::Shape("class must be an array of angle strings".into()))?;
    let mut angles = Vec::with_capacity(arr.len());
    for a in arr {
        let s = a.as_str().ok_or_else(|| ParseError::Shape("angles are fraction strings".into()))?;
        angles.push(s.parse::<Angle>()?);
    }
    GapClass::new(angles).map_err(|e| ParseError::Shape(e.to_string()))
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ImageMode {
    /// The image of each class is a class of the previous level, or a point.
    Exact,
    /// The image of each class lies inside a class of the previous level, or is a point.
    Subset,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("class {class} at level {level} does not map into level {}", .level - 1)]
pub struct InvarianceViolation {
    pub level: usize,
    pub class: GapClass,
}

pub fn check_forward_invariance(
    lam: &FiniteLamination,
    f: impl Fn(Angle) -> Angle,
    mode: ImageMode,
) -> Result<(), InvarianceViolation> {
    for k in 1..lam.levels.len() {
        let prev: HashSet<&GapClass> = lam.levels[k - 1].iter().collect();
        let mut by_angle: HashMap<Angle, Vec<&GapClass>> = HashMap::new();
        if mode == ImageMode::Subset {
            for c in &lam.levels[k - 1] {
                for a in c.angles() {
                    by_angle.entry(*a).or_default().push(c);
                }
            }
        }
        for c in &lam.levels[k] {
            let img = c.image(&f);
            if img.len() == 1 {
                continue;
            }
            let ok = match mode {
                ImageMode::Exact => prev.contains(&GapClass::new(img).unwrap()),
                ImageMode::Subset => by_angle
                    .get(&img[0])
                    .map(|cs| cs.iter().any(|p| img.iter().all(|x| p.contains(*x))))
                    .unwrap_or(false),
            };
            if !ok {
                return Err(InvarianceViolation { level: k, class: c.clone() });
            }
        }
    }
    Ok(())
}

/// Shorter-arc length of each leaf.
pub fn leaf_lengths(leaves: &[Leaf]) -> Vec<Q> {
    leaves.iter().map(|l| l.length()).collect()
}
