//! Iterated preimages of the trimmed Hubbard trees.

use super::hubbard::{hubbard_tree, TreeSign};
use super::torus::{eta_inv, half};
use crate::geom::{delta_contacts, Contact, Seg, P2};

/// Tree level used for the zipper when none is given.
pub const DEFAULT_TREE_LEVEL: usize = 6;

/// Segments of the tree at `levels`, without the segment at each 1-valent end.
pub fn trimmed_tree(sign: TreeSign, levels: usize) -> Vec<Seg> {
    let legs = hubbard_tree(sign, levels);
    let mut out = Vec::new();
    for leg in &legs {
        let segs: Vec<Seg> = leg.windows(2).map(|w| (w[0], w[1])).collect();
        out.extend_from_slice(&segs[..segs.len() - 1]);
    }
    out
}

/// Both preimages of a segment under z -> eta*z + 1/2.
pub fn segment_preimages(s: Seg) -> [Seg; 2] {
    let w = |z: P2| eta_inv(z - half());
    let t = eta_inv(P2::ints(1, 0));
    let (a, b) = (w(s.0), w(s.1));
    [(a, b), (a + t, b + t)]
}

/// The trimmed tree and its preimages down to `depth`: 2^depth copies of
/// each tree segment.
pub fn zipper_forest(sign: TreeSign, depth: usize, tree_levels: usize) -> Vec<Seg> {
    let mut cur = trimmed_tree(sign, tree_levels);
    for _ in 0..depth {
        cur = cur.iter().flat_map(|s| segment_preimages(*s)).collect();
    }
    cur
}

/// Transverse crossings between `a` and the quotient images of `b`.
pub fn count_transverse_crossings(a: &[Seg], b: &[Seg]) -> usize {
    delta_contacts(a, b, false).iter().filter(|c| c.contact == Contact::Cross).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::delta_canon;
    use crate::lattes::torus::cover;

    #[test]
    fn depth_zero_is_tree() {
        let t = trimmed_tree(TreeSign::Plus, 3);
        assert_eq!(zipper_forest(TreeSign::Plus, 0, 3), t);
    }

    #[test]
    fn counts_double() {
        let base = zipper_forest(TreeSign::Minus, 0, 4).len();
        for n in 1..4 {
            assert_eq!(zipper_forest(TreeSign::Minus, n, 4).len(), base << n);
        }
    }

    #[test]
    fn preimages_map_back() {
        let s = trimmed_tree(TreeSign::Plus, 2)[0];
        for p in segment_preimages(s) {
            assert_eq!(delta_canon(cover(p.0)), delta_canon(s.0));
            assert_eq!(delta_canon(cover(p.1)), delta_canon(s.1));
        }
    }

    #[test]
    fn trees_do_not_cross() {
        let p = trimmed_tree(TreeSign::Plus, 4);
        let m = trimmed_tree(TreeSign::Minus, 4);
        assert_eq!(count_transverse_crossings(&p, &m), 0);
    }
}
