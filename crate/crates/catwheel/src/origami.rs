//! Piecewise-linear circle maps with slopes of equal magnitude and both
//! signs, their seeds, and origami laminations built by fold rules.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};
use serde_json::Value;
use thiserror::Error;

use crate::angle::{frac, parse_q, q, Angle, Q};
use crate::error::ParseError;
use crate::lamination::{
    boundary_leaves, check_pairwise_unlinked, classes_unlinked, CheckReport, FiniteLamination, GapClass, LamMeta, Leaf,
};

/// One affine piece: x in [start, start+len] maps to value + slope*(x-start).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlPiece {
    pub start: Angle,
    pub len: Q,
    pub slope: Q,
    pub value: Q,
}

impl PlPiece {
    fn eval_at(&self, t: Q) -> Angle {
        Angle::new(self.value + self.slope * t)
    }

    /// Solutions of the piece equation on the closed piece, in increasing order.
    fn solve(&self, y: Angle) -> Vec<Angle> {
        let w = y.value() - frac(self.value);
        let span = self.slope * self.len;
        let (lo, hi) = if span > Q::zero() { (Q::zero(), span) } else { (span, Q::zero()) };
        let kmin = (lo - w).ceil().to_integer();
        let kmax = (hi - w).floor().to_integer();
        let mut ts: Vec<Q> = (kmin..=kmax).map(|k| (w + Q::from_integer(k)) / self.slope).collect();
        ts.sort();
        ts.into_iter().map(|t| self.start.shift(t)).collect()
    }

    fn sign(&self) -> i8 {
        if self.slope > Q::zero() {
            1
        } else {
            -1
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MapError {
    #[error("need at least two breakpoints and one slope per piece")]
    Shape,
    #[error("breakpoints must be strictly increasing in [0,1)")]
    Breakpoints,
    #[error("all slopes must share one magnitude greater than 1")]
    Slopes,
    #[error("both slope signs are required; an orientation-preserving covering is a polynomial map")]
    Covering,
    #[error("map is discontinuous at the breakpoint {0}")]
    Discontinuous(Angle),
}

/// Continuous circle map, affine with slope +-lambda on each piece.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PLCircleMap {
    id: String,
    pieces: Vec<PlPiece>,
    lambda: Q,
}

impl PLCircleMap {
    /// `values[0]` is the image of the first breakpoint; the rest follow by continuity.
    pub fn new(id: &str, breakpoints: &[Angle], slopes: &[Q], value0: Q) -> Result<PLCircleMap, MapError> {
        let n = breakpoints.len();
        if n < 2 || slopes.len() != n {
            return Err(MapError::Shape);
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(MapError::Breakpoints);
        }
        let lambda = slopes[0].abs();
        if lambda <= Q::one() || slopes.iter().any(|s| s.abs() != lambda) {
            return Err(MapError::Slopes);
        }
        if slopes.iter().all(|s| *s > Q::zero()) || slopes.iter().all(|s| *s < Q::zero()) {
            return Err(MapError::Covering);
        }
        let mut pieces = Vec::with_capacity(n);
        let mut v = frac(value0);
        for i in 0..n {
            let len = breakpoints[i].ccw_to(breakpoints[(i + 1) % n]);
            pieces.push(PlPiece { start: breakpoints[i], len, slope: slopes[i], value: v });
            v = frac(v + slopes[i] * len);
        }
        if v != frac(value0) {
            return Err(MapError::Discontinuous(breakpoints[0]));
        }
        Ok(PLCircleMap { id: id.to_string(), pieces, lambda })
    }

    fn from_xi(id: &str, xi: &[(Q, Q, Q)], theta: Q) -> PLCircleMap {
        // Each entry is (breakpoint, slope, image of the breakpoint) in the unshifted chart.
        let mut pieces: Vec<(Angle, Q, Q)> = xi.iter().map(|(b, s, v)| (Angle::new(*b + theta), *s, *v)).collect();
        pieces.sort();
        let bps: Vec<Angle> = pieces.iter().map(|p| p.0).collect();
        let slopes: Vec<Q> = pieces.iter().map(|p| p.1).collect();
        PLCircleMap::new(id, &bps, &slopes, pieces[0].2).expect("built-in map is valid")
    }

    /// h(x) = xi(x - theta) with xi = 3x on [0,1/3] and [2/3,1], -3x on [1/3,2/3].
    pub fn ordinary(theta: Q) -> PLCircleMap {
        let xi = [(q(0, 1), q(3, 1), q(0, 1)), (q(1, 3), q(-3, 1), q(0, 1)), (q(2, 3), q(3, 1), q(0, 1))];
        PLCircleMap::from_xi(&format!("ordinary:{}", Angle::new(theta)), &xi, theta)
    }

    /// h(x) = xi(x - theta) with xi = 3x on [-1/6,1/6] and [1/3,2/3], -3x elsewhere.
    pub fn folded(theta: Q) -> PLCircleMap {
        let xi = [
            (q(-1, 6), q(3, 1), q(1, 2)),
            (q(1, 6), q(-3, 1), q(1, 2)),
            (q(1, 3), q(3, 1), q(0, 1)),
            (q(2, 3), q(-3, 1), q(0, 1)),
        ];
        PLCircleMap::from_xi(&format!("folded:{}", Angle::new(theta)), &xi, theta)
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn lambda(&self) -> Q {
        self.lambda
    }

    pub fn pieces(&self) -> &[PlPiece] {
        &self.pieces
    }

    pub fn breakpoints(&self) -> Vec<Angle> {
        self.pieces.iter().map(|p| p.start).collect()
    }

    fn piece_index(&self, x: Angle) -> usize {
        self.pieces.iter().position(|p| p.start.ccw_to(x) < p.len).expect("pieces cover the circle")
    }

    pub fn evaluate(&self, x: Angle) -> Angle {
        let p = &self.pieces[self.piece_index(x)];
        p.eval_at(p.start.ccw_to(x))
    }

    /// All solutions of h(x) = y tagged with the local slope sign.  Pieces are
    /// treated as closed, so a breakpoint solution is reported once for each
    /// adjacent piece.
    pub fn preimages(&self, y: Angle) -> Vec<(Angle, i8)> {
        let mut out: BTreeSet<(Angle, i8)> = BTreeSet::new();
        for p in &self.pieces {
            for x in p.solve(y) {
                out.insert((x, p.sign()));
            }
        }
        out.into_iter().collect()
    }

    /// Number of distinct solutions of h(x) = y.
    pub fn count_preimages(&self, y: Angle) -> usize {
        let xs: BTreeSet<Angle> = self.preimages(y).into_iter().map(|p| p.0).collect();
        xs.len()
    }

    /// Geometric degree: total covered length divided by the circle length.
    pub fn geometric_degree(&self) -> Q {
        self.pieces.iter().fold(Q::zero(), |acc, p| acc + p.len) * self.lambda
    }

    /// Sub-pieces of the map inside the arc [s, s+len], in order.
    fn clip(&self, s: Angle, len: Q) -> Vec<PlPiece> {
        let mut cuts: Vec<Q> = vec![Q::zero(), len];
        for p in &self.pieces {
            let t = s.ccw_to(p.start);
            if t > Q::zero() && t < len {
                cuts.push(t);
            }
        }
        cuts.sort();
        cuts.dedup();
        cuts.windows(2)
            .map(|w| {
                let start = s.shift(w[0]);
                let mid = s.shift((w[0] + w[1]) / 2);
                let p = &self.pieces[self.piece_index(mid)];
                PlPiece { start, len: w[1] - w[0], slope: p.slope, value: self.evaluate(start).value() }
            })
            .collect()
    }

    pub fn to_json(&self) -> Value {
        let bps: Vec<Value> = self.pieces.iter().map(|p| Value::String(p.start.to_string())).collect();
        let slopes: Vec<Value> = self.pieces.iter().map(|p| Value::String(crate::angle::format_q(p.slope))).collect();
        serde_json::json!({
            "id": self.id,
            "breakpoints": bps,
            "slopes": slopes,
            "value0": crate::angle::format_q(self.pieces[0].value),
        })
    }

    pub fn from_json(v: &Value) -> Result<PLCircleMap, ParseError> {
        let shape = |m: &str| ParseError::Shape(m.to_string());
        let strs = |key: &str| -> Result<Vec<Q>, ParseError> {
            v.get(key)
                .and_then(|x| x.as_array())
                .ok_or_else(|| shape(&format!("missing array {key:?}")))?
                .iter()
                .map(|s| s.as_str().ok_or_else(|| shape("expected fraction strings")).and_then(parse_q))
                .collect()
        };
        let bps: Vec<Angle> = strs("breakpoints")?.into_iter().map(Angle::new).collect();
        let slopes = strs("slopes")?;
        let value0 = match v.get("value0") {
            Some(s) => parse_q(s.as_str().ok_or_else(|| shape("value0 must be a fraction string"))?)?,
            None => Q::zero(),
        };
        let id = v.get("id").and_then(|s| s.as_str()).unwrap_or("custom");
        PLCircleMap::new(id, &bps, &slopes, value0).map_err(|e| ParseError::Shape(e.to_string()))
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Family {
    Ordinary,
    Folded,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SeedSign {
    Plus,
    Minus,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeedError {
    #[error("seed classes {0} and {1} are linked or overlap")]
    Overlap(GapClass, GapClass),
    #[error("seed is empty")]
    Empty,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Seed {
    classes: Vec<GapClass>,
}

impl Seed {
    pub fn new(classes: Vec<GapClass>) -> Result<Seed, SeedError> {
        if classes.is_empty() {
            return Err(SeedError::Empty);
        }
        for i in 0..classes.len() {
            for j in i + 1..classes.len() {
                let (a, b) = (&classes[i], &classes[j]);
                if a.angles().iter().any(|x| b.contains(*x)) || !classes_unlinked(a, b) {
                    return Err(SeedError::Overlap(a.clone(), b.clone()));
                }
            }
        }
        let mut classes = classes;
        classes.sort();
        Ok(Seed { classes })
    }

    /// C+ = {t, t+1/3, t+2/3} and C- = {t+1/6, t+1/2, t+5/6}.
    pub fn family(sign: SeedSign, theta: Q) -> Seed {
        let base = match sign {
            SeedSign::Plus => Q::zero(),
            SeedSign::Minus => q(1, 6),
        };
        let c = GapClass::new((0..3).map(|k| Angle::new(theta + base + q(k, 3))).collect()).unwrap();
        Seed { classes: vec![c] }
    }

    pub fn classes(&self) -> &[GapClass] {
        &self.classes
    }

    pub fn points(&self) -> Vec<Angle> {
        let mut v: Vec<Angle> = self.classes.iter().flat_map(|c| c.angles().to_vec()).collect();
        v.sort();
        v
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FoldRuleError {
    #[error("level {level}: preimage leaves {a} and {b} are linked")]
    Inconsistent { level: usize, a: GapClass, b: GapClass },
    #[error("the rule expects one preimage of {0} in the region starting at {1}")]
    Region(Angle, Angle),
}

/// Decides how the preimages of a leaf's endpoints pair into preimage leaves.
pub trait FoldRule {
    fn preimage_leaves(&self, map: &PLCircleMap, leaf: &Leaf) -> Result<Vec<Leaf>, FoldRuleError>;
}

fn seed_arcs(points: &[Angle]) -> Vec<(Angle, Q)> {
    let n = points.len();
    (0..n)
        .map(|i| (points[i], points[i].ccw_to(points[(i + 1) % n])))
        .map(|(s, l)| (s, if l.is_zero() { Q::one() } else { l }))
        .collect()
}

/// Each complementary arc of the seed maps bijectively onto the circle and
/// contributes one ordinary preimage leaf.
#[derive(Clone, Debug)]
pub struct OrdinaryRule {
    regions: Vec<(Angle, Q)>,
}

impl OrdinaryRule {
    pub fn new(seed: &Seed) -> OrdinaryRule {
        OrdinaryRule { regions: seed_arcs(&seed.points()) }
    }

    fn preimage(&self, map: &PLCircleMap, y: Angle, region: (Angle, Q)) -> Result<Angle, FoldRuleError> {
        let mut xs: Vec<Angle> = Vec::new();
        for p in map.clip(region.0, region.1) {
            for x in p.solve(y) {
                if region.0.ccw_to(x) < region.1 && !xs.contains(&x) {
                    xs.push(x);
                }
            }
        }
        if xs.len() == 1 {
            Ok(xs[0])
        } else {
            Err(FoldRuleError::Region(y, region.0))
        }
    }
}

impl FoldRule for OrdinaryRule {
    fn preimage_leaves(&self, map: &PLCircleMap, leaf: &Leaf) -> Result<Vec<Leaf>, FoldRuleError> {
        let mut out = Vec::with_capacity(self.regions.len());
        for r in &self.regions {
            let x = self.preimage(map, leaf.a(), *r)?;
            let y = self.preimage(map, leaf.b(), *r)?;
            out.extend(Leaf::new(x, y));
        }
        Ok(out)
    }
}

/// Rule of the folded family: a leaf with both endpoints in one folded
/// half-circle gets three ordinary preimages, otherwise one ordinary and two
/// folded preimages.
#[derive(Clone, Debug)]
pub struct FoldedRule {
    ordinary: (Angle, Q),
    /// Folded arcs as (first half, second half) sub-arcs; the A arc covers
    /// [0,1/2] and the B arc covers [1/2,1].
    folded_a: (Angle, Q, Q),
    folded_b: (Angle, Q, Q),
}

impl FoldedRule {
    pub fn new(sign: SeedSign, theta: Q) -> FoldedRule {
        let sixth = q(1, 6);
        let at = |k: i128| Angle::new(theta + sixth * k);
        match sign {
            SeedSign::Plus => FoldedRule {
                ordinary: (at(2), q(1, 3)),
                folded_a: (at(0), sixth, sixth),
                folded_b: (at(4), sixth, sixth),
            },
            SeedSign::Minus => FoldedRule {
                ordinary: (at(5), q(1, 3)),
                folded_a: (at(1), sixth, sixth),
                folded_b: (at(3), sixth, sixth),
            },
        }
    }

    fn ordinary_preimage(&self, map: &PLCircleMap, y: Angle) -> Angle {
        let (s, len) = self.ordinary;
        map.clip(s, len).iter().flat_map(|p| p.solve(y)).next().expect("ordinary arc covers the circle")
    }

    /// Preimages in the two halves of a folded arc, if `y` is in its image.
    fn folded_preimages(&self, map: &PLCircleMap, y: Angle, arc: (Angle, Q, Q)) -> Option<(Angle, Angle)> {
        let (s, h1, h2) = arc;
        let first = map.clip(s, h1).iter().flat_map(|p| p.solve(y)).next()?;
        let second = map.clip(s.shift(h1), h2).iter().flat_map(|p| p.solve(y)).next()?;
        Some((first, second))
    }
}

impl FoldRule for FoldedRule {
    fn preimage_leaves(&self, map: &PLCircleMap, leaf: &Leaf) -> Result<Vec<Leaf>, FoldRuleError> {
        let (x, y) = (leaf.a(), leaf.b());
        let mut out = Vec::with_capacity(3);
        out.extend(Leaf::new(self.ordinary_preimage(map, x), self.ordinary_preimage(map, y)));
        let xa = self.folded_preimages(map, x, self.folded_a);
        let ya = self.folded_preimages(map, y, self.folded_a);
        let xb = self.folded_preimages(map, x, self.folded_b);
        let yb = self.folded_preimages(map, y, self.folded_b);
        let same_half = match (xa, ya, xb, yb) {
            (Some(p), Some(r), _, _) => Some((p, r)),
            (_, _, Some(p), Some(r)) => Some((p, r)),
            _ => None,
        };
        match same_half {
            Some(((x1, x2), (y1, y2))) => {
                out.extend(Leaf::new(x1, y1));
                out.extend(Leaf::new(x2, y2));
            }
            None => {
                // One endpoint lies only in the A half and the other only in the B half.
                for pair in [xa, ya, xb, yb].into_iter().flatten() {
                    out.extend(Leaf::new(pair.0, pair.1));
                }
            }
        }
        out.sort();
        out.dedup();
        Ok(out)
    }
}

/// Level 0 is the seed; level k+1 collects preimage leaves of the boundary
/// leaves of level k.
pub fn generate_seed_lamination(
    map: &PLCircleMap,
    seed: &Seed,
    rule: &dyn FoldRule,
    depth: usize,
) -> Result<FiniteLamination, FoldRuleError> {
    let mut levels = vec![seed.classes.clone()];
    for k in 1..=depth {
        let mut next: BTreeSet<Leaf> = BTreeSet::new();
        for leaf in boundary_leaves(&levels[k - 1]) {
            next.extend(rule.preimage_leaves(map, &leaf)?);
        }
        let classes: Vec<GapClass> = next.iter().map(|l| l.to_class()).collect();
        if let CheckReport::Violation(a, b) = check_pairwise_unlinked(&classes) {
            return Err(FoldRuleError::Inconsistent { level: k, a, b });
        }
        levels.push(classes);
    }
    Ok(FiniteLamination { meta: LamMeta::Map(map.id().to_string()), levels })
}

/// Map, seed and rule of a built-in family.
pub fn family_setup(family: Family, sign: SeedSign, theta: Q) -> (PLCircleMap, Seed, Box<dyn FoldRule>) {
    let seed = Seed::family(sign, theta);
    match family {
        Family::Ordinary => {
            let rule = OrdinaryRule::new(&seed);
            (PLCircleMap::ordinary(theta), seed, Box::new(rule))
        }
        Family::Folded => (PLCircleMap::folded(theta), seed, Box::new(FoldedRule::new(sign, theta))),
    }
}

pub fn generate_family(
    family: Family,
    sign: SeedSign,
    theta: Q,
    depth: usize,
) -> Result<FiniteLamination, FoldRuleError> {
    let (map, seed, rule) = family_setup(family, sign, theta);
    generate_seed_lamination(&map, &seed, rule.as_ref(), depth)
}

/// Leaves whose endpoints share an image (they have no forward image).
pub fn is_folded_leaf(map: &PLCircleMap, leaf: &Leaf) -> bool {
    map.evaluate(leaf.a()) == map.evaluate(leaf.b())
}
