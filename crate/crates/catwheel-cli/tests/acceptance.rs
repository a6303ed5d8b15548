//! Acceptance criteria, one PASS/FAIL line each.  Runs without the libtest
//! harness so the lines always reach the output.

use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use catwheel::analysis::*;
use catwheel::angle::{q, Angle, Q};
use catwheel::kleinian::lightning_dimension;
use catwheel::lamination::*;
use catwheel::lattes::hubbard::{growth_constant, hubbard_arc, TreeSign};
use catwheel::lattes::origami_curve::origami_curve;
use catwheel::lattes::zipper::{count_transverse_crossings, zipper_forest, DEFAULT_TREE_LEVEL};
use catwheel::mating::{max_diameter, no_perfect_fits_certificate, ray_classes, GapCertificate};
use catwheel::origami::{family_setup, generate_seed_lamination, Family, SeedSign};
use catwheel::poly::{check_image_multiplicity, forward_orbit, generate_invariant_lamination, validate_major, Major};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn major(d: u32, pairs: &[(i128, i128)]) -> Major {
    let c = GapClass::new(pairs.iter().map(|&(n, m)| Angle::frac(n, m)).collect()).unwrap();
    validate_major(d, &[c]).unwrap()
}

fn c1_countable() -> Outcome {
    let lam = generate_invariant_lamination(&major(2, &[(0, 1), (1, 2)]), 8).lamination;
    let mut bad = Vec::new();
    for (k, level) in lam.levels.iter().enumerate() {
        let leaves: Vec<Leaf> = level.iter().flat_map(|c| c.sides()).collect();
        let ok = leaves.len() == 1 << k && leaves.iter().all(|l| l.length() == Q::new(1, 1 << (k + 1)));
        if !ok {
            bad.push(k);
        }
    }
    let n = lam.levels.len();
    outcome(bad.is_empty() && n == 9, format!("levels 0..={}, bad levels {bad:?}", n - 1))
}

fn c2_misiurewicz() -> Outcome {
    let o = forward_orbit(Angle::frac(1, 12), 2, 10).unwrap();
    let mut cycle = o.cycle().to_vec();
    cycle.sort();
    let ok = o.preperiod == 2 && o.period == 2 && cycle == vec![Angle::frac(1, 3), Angle::frac(2, 3)];
    outcome(ok, format!("preperiod {}, period {}, cycle {:?}", o.preperiod, o.period, cycle))
}

fn c3_conjugate_mating() -> Outcome {
    let plus = generate_invariant_lamination(&major(2, &[(1, 12), (7, 12)]), 10).lamination;
    let minus = generate_invariant_lamination(&major(2, &[(5, 12), (11, 12)]), 10).lamination;
    let fits = find_perfect_fits(&plus.all_classes(), &minus.all_classes());
    let diam = max_diameter(&ray_classes(&plus, &minus, 10));
    let gap = no_perfect_fits_certificate(&plus, &minus, 10);
    let ok = fits.is_empty() && diam == 0 && matches!(gap, Some(GapCertificate::MinGap(g)) if g > Q::from_integer(0));
    outcome(ok, format!("{} perfect fits, max diameter {diam}, certificate {gap:?}", fits.len()))
}

/// Valid major of degree d built from random critical classes x + S/d.
fn random_major(rng: &mut ChaCha8Rng, d: u32) -> Major {
    loop {
        let mut classes = Vec::new();
        let mut mult = 0;
        while mult < d - 1 {
            let x = q(rng.gen_range(0..720), 720);
            let size = rng.gen_range(2..=(d - mult).min(d));
            let mut offs: Vec<i128> = (1..d as i128).collect();
            let mut pts = vec![Angle::new(x)];
            while pts.len() < size as usize {
                let j = offs.remove(rng.gen_range(0..offs.len()));
                pts.push(Angle::new(x + q(j, d as i128)));
            }
            mult += size - 1;
            classes.push(GapClass::new(pts).unwrap());
        }
        if let Ok(m) = validate_major(d, &classes) {
            return m;
        }
    }
}

fn c4_property_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut failures = Vec::new();
    for i in 0..20 {
        let d = [2u32, 3, 4][i % 3];
        let m = random_major(&mut rng, d);
        let lam = generate_invariant_lamination(&m, 5).lamination;
        let unlinked = check_pairwise_unlinked(&lam.all_classes()).is_ok();
        let inv = check_forward_invariance(&lam, |x| x.times(d as i128), ImageMode::Exact).is_ok();
        if !(unlinked && inv && check_image_multiplicity(&lam, d)) {
            failures.push(format!("major {:?}", m.classes()));
        }
    }
    for _ in 0..10 {
        let theta = q(rng.gen_range(0..1000), 1000);
        for (fam, sign) in
            [(Family::Ordinary, SeedSign::Plus), (Family::Folded, SeedSign::Plus), (Family::Folded, SeedSign::Minus)]
        {
            let (map, seed, rule) = family_setup(fam, sign, theta);
            match generate_seed_lamination(&map, &seed, rule.as_ref(), 5) {
                Ok(lam) => {
                    let unlinked = check_pairwise_unlinked(&lam.all_classes()).is_ok();
                    let inv = check_forward_invariance(&lam, |x| map.evaluate(x), ImageMode::Subset).is_ok();
                    if !(unlinked && inv) {
                        failures.push(format!("{fam:?} {sign:?} theta {theta}"));
                    }
                }
                Err(e) => failures.push(format!("{fam:?} {sign:?} theta {theta}: {e}")),
            }
        }
    }
    outcome(failures.is_empty(), format!("20 majors, 30 origami laminations at depth 5; failures {failures:?}"))
}

fn c5_hubbard_arc() -> Outcome {
    let arc = hubbard_arc(10);
    let lambda = growth_constant();
    let ratio = *arc.growth_ratios().last().unwrap();
    let rel = (ratio - lambda).abs() / lambda;
    let d = arc.box_dimension();
    let ok = rel < 0.01 && matches!(&d, Ok(e) if (e.d - 1.2102).abs() <= 0.02);
    outcome(
        ok,
        format!(
            "growth ratio {ratio:.4} vs lambda {lambda:.4} (rel {rel:.4}, tol 0.01); box D {:.4} vs 1.2102 (tol 0.02)",
            d.map(|e| e.d).unwrap_or(f64::NAN)
        ),
    )
}

fn c6_zipper() -> Outcome {
    let zp = zipper_forest(TreeSign::Plus, 4, DEFAULT_TREE_LEVEL);
    let zm = zipper_forest(TreeSign::Minus, 4, DEFAULT_TREE_LEVEL);
    let c = count_transverse_crossings(&zp, &zm);
    outcome(c == 0, format!("{} + {} segments, {c} transverse crossings", zp.len(), zm.len()))
}

fn c7_origami_curve() -> Outcome {
    let stages = origami_curve(5, &[]).unwrap();
    let bad: Vec<usize> = (1..=5).filter(|&k| !(stages[k].is_simple() && stages[k].steps_are_mesh())).collect();
    outcome(
        bad.is_empty(),
        format!("stages 1..=5, {} vertices at stage 5, non-simple {bad:?}", stages[5].vertices().len()),
    )
}

fn c8_kleinian() -> Outcome {
    let table = [(2u32, 1.08108), (3, 1.14815), (4, 1.19000), (5, 1.21446)];
    let mut ok = true;
    let mut parts = Vec::new();
    for (n, want) in table {
        match lightning_dimension(n, 1e-3, 16) {
            Ok(r) => {
                let (r1, r2) = r.rep.relation_residuals();
                let good = (r.estimate.d - want).abs() <= 0.03 && r1 < 1e-9 && r2 < 1e-9;
                ok &= good;
                parts.push(format!(
                    "n={n} m={} D={:.4} (want {want}, tol 0.03) res {:.1e}",
                    r.m,
                    r.estimate.d,
                    r1.max(r2)
                ));
            }
            Err(e) => {
                ok = false;
                parts.push(format!("n={n}: {e}"));
            }
        }
    }
    outcome(ok, parts.join("; "))
}

fn koch(level: u32) -> Vec<Pt> {
    let mut p = vec![(0.0, 0.0), (1.0, 0.0)];
    let (c, s) = (0.5, -(3f64.sqrt()) / 2.0);
    for _ in 0..level {
        let mut next = Vec::with_capacity(p.len() * 4);
        for w in p.windows(2) {
            let (a, b) = (w[0], w[1]);
            let d = ((b.0 - a.0) / 3.0, (b.1 - a.1) / 3.0);
            let x = (a.0 + d.0, a.1 + d.1);
            let y = (x.0 + c * d.0 - s * d.1, x.1 + s * d.0 + c * d.1);
            next.extend([a, x, y, (a.0 + 2.0 * d.0, a.1 + 2.0 * d.1)]);
        }
        next.push(*p.last().unwrap());
        p = next;
    }
    p
}

fn c9_calibration() -> Outcome {
    let line: Vec<Pt> = (0..10_000).map(|k| (k as f64 / 9999.0, 0.0)).collect();
    let dl = estimate_dimension_length_regression(&line, &default_scales(&line)).map(|e| e.d).unwrap_or(f64::NAN);
    let k = koch(7);
    let dk = estimate_dimension_length_regression(&k, &default_scales(&k)).map(|e| e.d).unwrap_or(f64::NAN);
    let mut iv = vec![(0.0f64, 1.0f64)];
    for _ in 0..9 {
        iv = iv.iter().flat_map(|&(a, b)| [(a, a + (b - a) / 3.0), (b - (b - a) / 3.0, b)]).collect();
    }
    let cantor: Vec<Pt> = iv.iter().flat_map(|&(a, b)| [(a, 0.0), (b, 0.0)]).collect();
    let dc = box_count_dimension(&cantor, &geometric_scales(0.1, 3f64.powi(-8), 8)).map(|e| e.d).unwrap_or(f64::NAN);
    let ok = (dl - 1.0).abs() <= 0.02 && (dk - 1.262).abs() <= 0.05 && (dc - 0.631).abs() <= 0.05;
    outcome(ok, format!("line {dl:.4} (1 +- 0.02), Koch {dk:.4} (1.262 +- 0.05), Cantor {dc:.4} (0.631 +- 0.05)"))
}

fn c10_determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_catwheel");
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("acceptance-determinism");
    std::fs::create_dir_all(&dir).unwrap();
    let lam = dir.join("lam.json");
    let poly = dir.join("poly.csv");
    let setup = [
        vec!["generate", "poly", "--major", r#"{"degree":2,"classes":[["1/12","7/12"]]}"#, "--depth", "6"],
        vec!["lattes", "origami", "--depth", "3"],
    ];
    for (args, out) in setup.iter().zip([&lam, &poly]) {
        let st = Command::new(bin).args(args).arg("--out").arg(out).status().unwrap();
        if !st.success() {
            return outcome(false, format!("setup {args:?} failed"));
        }
    }
    let lam_s = lam.to_str().unwrap();
    let poly_s = poly.to_str().unwrap();
    let cmds: Vec<Vec<&str>> = vec![
        vec![
            "generate",
            "poly",
            "--major",
            r#"{"degree":3,"classes":[["0","1/3","2/3"]]}"#,
            "--depth",
            "4",
            "--seed-metadata",
        ],
        vec!["generate", "origami", "--family", "ordinary", "--theta", "13/100", "--depth", "4"],
        vec!["generate", "origami", "--family", "folded", "--sign", "minus", "--theta", "141/1000", "--depth", "4"],
        vec!["render", "disk", "--plus", lam_s, "--minus", lam_s, "--depth", "5"],
        vec!["render", "polyline", "--input", poly_s, "--closed", "--domain", "square"],
    ];
    let mut diffs = Vec::new();
    for c in &cmds {
        let a = Command::new(bin).args(c).output().unwrap();
        let b = Command::new(bin).args(c).output().unwrap();
        if !a.status.success() || a.stdout != b.stdout || a.stdout.is_empty() {
            diffs.push(c[..2].join(" "));
        }
    }
    outcome(diffs.is_empty(), format!("{} commands run twice, differing or failing: {diffs:?}", cmds.len()))
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome, Duration);
    let criteria: Vec<Criterion> = vec![
        ("countable lamination", c1_countable, Duration::from_secs(1)),
        ("Misiurewicz orbit", c2_misiurewicz, Duration::from_millis(1)),
        ("conjugate mating", c3_conjugate_mating, Duration::from_secs(30)),
        ("invariance and unlinkedness suite", c4_property_suite, Duration::from_secs(60)),
        ("Hubbard arc", c5_hubbard_arc, Duration::from_secs(60)),
        ("zipper disjointness", c6_zipper, Duration::from_secs(30)),
        ("origami curve simplicity", c7_origami_curve, Duration::from_secs(30)),
        ("Kleinian table", c8_kleinian, Duration::from_secs(600)),
        ("estimator calibration", c9_calibration, Duration::from_secs(10)),
        ("determinism", c10_determinism, Duration::from_secs(10)),
    ];
    let mut failed = 0;
    for (i, (name, f, budget)) in criteria.into_iter().enumerate() {
        let t = Instant::now();
        let o = f();
        let el = t.elapsed();
        let pass = o.pass && el <= budget;
        if !pass {
            failed += 1;
        }
        println!(
            "{} criterion {:>2} {name}: {} [{:.3?} of {:?}]",
            if pass { "PASS" } else { "FAIL" },
            i + 1,
            o.detail,
            el,
            budget
        );
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
