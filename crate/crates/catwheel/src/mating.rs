//! Ray equivalence between two laminations and a finite-depth gap statistic.

use std::collections::{BTreeSet, HashMap, VecDeque};

use num_traits::Zero;

use crate::angle::{Angle, Q};
use crate::lamination::{FiniteLamination, Leaf};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum RaySide {
    Plus,
    Minus,
}

impl RaySide {
    pub fn name(self) -> &'static str {
        match self {
            RaySide::Plus => "plus",
            RaySide::Minus => "minus",
        }
    }
}

/// Connected component of the alternating shared-endpoint graph.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RayClass {
    pub leaves: Vec<(RaySide, Leaf)>,
    /// Longest shortest path between two leaves of the class.
    pub diameter: usize,
}

/// Leaves of the two laminations up to `depth`; plus and minus leaves are
/// adjacent when they share an endpoint.
pub fn ray_classes(plus: &FiniteLamination, minus: &FiniteLamination, depth: usize) -> Vec<RayClass> {
    let mut nodes: Vec<(RaySide, Leaf)> = Vec::new();
    nodes.extend(plus.leaves_up_to(depth).into_iter().map(|l| (RaySide::Plus, l)));
    nodes.extend(minus.leaves_up_to(depth).into_iter().map(|l| (RaySide::Minus, l)));

    let mut at: HashMap<(RaySide, Angle), Vec<usize>> = HashMap::new();
    for (i, (s, l)) in nodes.iter().enumerate() {
        at.entry((*s, l.a())).or_default().push(i);
        at.entry((*s, l.b())).or_default().push(i);
    }
    let adj: Vec<Vec<usize>> = nodes
        .iter()
        .map(|(s, l)| {
            let other = match s {
                RaySide::Plus => RaySide::Minus,
                RaySide::Minus => RaySide::Plus,
            };
            let mut v: Vec<usize> =
                [l.a(), l.b()].iter().flat_map(|x| at.get(&(other, *x)).cloned().unwrap_or_default()).collect();
            v.sort_unstable();
            v.dedup();
            v
        })
        .collect();

    let mut comp = vec![usize::MAX; nodes.len()];
    let mut out = Vec::new();
    for start in 0..nodes.len() {
        if comp[start] != usize::MAX {
            continue;
        }
        let members = bfs(&adj, start).into_iter().map(|(v, _)| v).collect::<Vec<_>>();
        for &v in &members {
            comp[v] = out.len();
        }
        let diameter = if members.len() == 1 {
            0
        } else {
            members.iter().map(|&v| bfs(&adj, v).iter().map(|p| p.1).max().unwrap_or(0)).max().unwrap_or(0)
        };
        let mut leaves: Vec<(RaySide, Leaf)> = members.iter().map(|&v| nodes[v]).collect();
        leaves.sort();
        out.push(RayClass { leaves, diameter });
    }
    out
}

fn bfs(adj: &[Vec<usize>], start: usize) -> Vec<(usize, usize)> {
    let mut dist: HashMap<usize, usize> = HashMap::new();
    dist.insert(start, 0);
    let mut queue = VecDeque::from([start]);
    let mut order = vec![(start, 0)];
    while let Some(v) = queue.pop_front() {
        let d = dist[&v];
        for &w in &adj[v] {
            if let std::collections::hash_map::Entry::Vacant(e) = dist.entry(w) {
                e.insert(d + 1);
                order.push((w, d + 1));
                queue.push_back(w);
            }
        }
    }
    order
}

/// Either a shared endpoint or the minimum distance between endpoint sets.
/// This is a statistic at one depth, not a certificate for the limit.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum GapCertificate {
    MinGap(Q),
    Fit(Angle),
}

fn endpoints(lam: &FiniteLamination, depth: usize) -> Vec<Angle> {
    let set: BTreeSet<Angle> = lam.classes_up_to(depth).iter().flat_map(|c| c.angles().to_vec()).collect();
    set.into_iter().collect()
}

/// Returns `None` when either side has no endpoints at this depth.
pub fn no_perfect_fits_certificate(
    plus: &FiniteLamination,
    minus: &FiniteLamination,
    depth: usize,
) -> Option<GapCertificate> {
    let p = endpoints(plus, depth);
    let m = endpoints(minus, depth);
    if p.is_empty() || m.is_empty() {
        return None;
    }
    if let Some(x) = p.iter().find(|x| m.binary_search(x).is_ok()) {
        return Some(GapCertificate::Fit(*x));
    }
    // Nearest minus neighbours on either side of each plus point, cyclically.
    let mut best: Option<Q> = None;
    for x in &p {
        let i = m.partition_point(|y| y < x);
        for y in [m[i % m.len()], m[(i + m.len() - 1) % m.len()]] {
            let d = x.dist(y);
            if best.is_none_or(|b| d < b) {
                best = Some(d);
            }
        }
    }
    best.filter(|b| !b.is_zero()).map(GapCertificate::MinGap)
}

pub fn max_diameter(classes: &[RayClass]) -> usize {
    classes.iter().map(|c| c.diameter).max().unwrap_or(0)
}
