use std::collections::BTreeSet;

use catwheel::angle::{q, Angle, Q};
use catwheel::lamination::*;
use catwheel::lattes::torus::TorusPoint;
use catwheel::mating::*;
use catwheel::origami::*;
use catwheel::poly::{generate_invariant_lamination, validate_major};
use proptest::prelude::*;

fn theta() -> impl Strategy<Value = Q> {
    (0i128..1000).prop_map(|k| q(k, 1000))
}

fn diameter_lam(k: i128, n: i128, depth: usize) -> FiniteLamination {
    let x = Angle::frac(k, n);
    let m = validate_major(2, &[GapClass::new(vec![x, x.shift(q(1, 2))]).unwrap()]).unwrap();
    generate_invariant_lamination(&m, depth).lamination
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn origami_families_are_unlinked_and_invariant(t in theta(), folded in any::<bool>(), minus in any::<bool>()) {
        let family = if folded { Family::Folded } else { Family::Ordinary };
        let sign = if minus && folded { SeedSign::Minus } else { SeedSign::Plus };
        let (map, seed, rule) = family_setup(family, sign, t);
        let lam = generate_seed_lamination(&map, &seed, rule.as_ref(), 4).unwrap();
        prop_assert!(check_pairwise_unlinked(&lam.all_classes()).is_ok());
        prop_assert!(check_forward_invariance(&lam, |x| map.evaluate(x), ImageMode::Subset).is_ok());
    }

    #[test]
    fn preimages_map_back(t in theta(), y in (0i128..997).prop_map(|k| Angle::frac(k, 997))) {
        for map in [PLCircleMap::ordinary(t), PLCircleMap::folded(t)] {
            let pre = map.preimages(y);
            prop_assert!(pre.iter().all(|(x, _)| map.evaluate(*x) == y));
            prop_assert_eq!(map.count_preimages(y), 3);
        }
    }

    #[test]
    fn eta_preimages_invert(u in 0i128..97, v in 0i128..97) {
        let p = TorusPoint::new(q(u, 97), q(v, 97));
        let pre = p.eta_preimages();
        prop_assert_ne!(pre[0], pre[1]);
        for w in pre {
            prop_assert_eq!(w.eta_multiplication(), p);
        }
    }

    #[test]
    fn ray_classes_partition_and_match_fits(k1 in 0i128..24, k2 in 0i128..24) {
        let p = diameter_lam(k1, 24, 4);
        let m = diameter_lam(k2, 24, 4);
        let rc = ray_classes(&p, &m, 4);
        let mut seen = BTreeSet::new();
        for c in &rc {
            for l in &c.leaves {
                prop_assert!(seen.insert(*l));
            }
        }
        prop_assert_eq!(seen.len(), p.leaves_up_to(4).len() + m.leaves_up_to(4).len());
        let fits = find_perfect_fits(&p.all_classes(), &m.all_classes());
        prop_assert_eq!(max_diameter(&rc) == 0, fits.is_empty());
    }

    #[test]
    fn min_gap_is_antitone(k1 in 0i128..60, k2 in 0i128..60) {
        let p = diameter_lam(k1, 60, 5);
        let m = diameter_lam(k2, 60, 5);
        let mut last: Option<Q> = None;
        for depth in 0..=5 {
            match no_perfect_fits_certificate(&p, &m, depth) {
                Some(GapCertificate::MinGap(g)) => {
                    if let Some(l) = last {
                        prop_assert!(g <= l);
                    }
                    last = Some(g);
                }
                Some(GapCertificate::Fit(_)) => last = Some(Q::from_integer(0)),
                None => {}
            }
        }
    }
}

#[test]
fn ordinary_leaves_have_three_preimages() {
    let map = PLCircleMap::ordinary(Q::from_integer(0));
    let lam = generate_family(Family::Ordinary, SeedSign::Plus, Q::from_integer(0), 4).unwrap();
    for k in 1..=4 {
        let prev = boundary_leaves(&lam.levels[k - 1]);
        let cur = boundary_leaves(&lam.levels[k]);
        for l in &prev {
            let n = cur.iter().filter(|c| Leaf::new(map.evaluate(c.a()), map.evaluate(c.b())) == Some(*l)).count();
            assert_eq!(n, 3, "level {k} leaf {l:?}");
        }
    }
}

#[test]
fn ordinary_endpoints_match_tripling() {
    let lam = generate_family(Family::Ordinary, SeedSign::Plus, Q::from_integer(0), 3).unwrap();
    let m = validate_major(3, &[GapClass::new(vec![Angle::zero(), Angle::frac(1, 3), Angle::frac(2, 3)]).unwrap()])
        .unwrap();
    let poly = generate_invariant_lamination(&m, 3).lamination;
    let ends = |cs: &[GapClass]| cs.iter().flat_map(|c| c.angles().to_vec()).collect::<BTreeSet<Angle>>();
    for k in 0..=3 {
        assert_eq!(ends(&lam.levels[k]), ends(&poly.levels[k]), "level {k}");
    }
}

#[test]
fn folded_preimage_example() {
    let f = PLCircleMap::folded(Q::from_integer(0));
    let xs: Vec<Angle> = f.preimages(Angle::frac(1, 4)).into_iter().map(|p| p.0).collect();
    assert_eq!(xs, vec![Angle::frac(1, 12), Angle::frac(1, 4), Angle::frac(5, 12)]);
}

#[test]
fn custom_map_from_json() {
    let v = serde_json::json!({"breakpoints": ["0", "1/2"], "slopes": ["2", "-2"], "value0": "0"});
    let m = PLCircleMap::from_json(&v).unwrap();
    assert_eq!(m.evaluate(Angle::frac(1, 4)), Angle::frac(1, 2));
    let bad = serde_json::json!({"breakpoints": ["0", "1/2"], "slopes": ["2", "2"]});
    assert!(PLCircleMap::from_json(&bad).is_err());
}
