use std::fs;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use catwheel::analysis::{
    box_count_dimension, default_scales, densify, estimate_dimension_length_regression, DimensionEstimate, Pt,
};
use catwheel::angle::{format_q, parse_q, Angle};
use catwheel::geom::{Seg, P2};
use catwheel::kleinian::lightning_dimension;
use catwheel::lamination::{
    check_pairwise_unlinked, find_perfect_fits, parse_class, rainbow_search, CheckReport, FiniteLamination, GapClass,
    Leaf,
};
use catwheel::lattes::curve::curve_stages;
use catwheel::lattes::hubbard::{growth_constant, hubbard_arc, TreeSign};
use catwheel::lattes::origami_curve::origami_curve;
use catwheel::lattes::torus::embed;
use catwheel::lattes::zipper::{count_transverse_crossings, zipper_forest, DEFAULT_TREE_LEVEL};
use catwheel::mating::{max_diameter, no_perfect_fits_certificate, ray_classes, GapCertificate};
use catwheel::origami::{generate_family, generate_seed_lamination, Family, OrdinaryRule, PLCircleMap, Seed, SeedSign};
use catwheel::poly::{generate_invariant_lamination, validate_major};
use catwheel::render::{render_disk_svg, render_polyline_svg, DiskScene, PolylineStyle};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "catwheel", version, about = "Laminations, matings, Lattes wheels and lightning curves")]
struct Cli {
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Attach the generating parameters to the output.
    #[arg(long, global = true)]
    seed_metadata: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build a lamination to a given depth.
    #[command(subcommand)]
    Generate(Generate),
    /// Check a lamination file; exit 2 on a violation.
    #[command(subcommand)]
    Check(Check),
    /// Ray classes or gap statistic for a pair of laminations.
    Mate {
        #[arg(long)]
        plus: String,
        #[arg(long)]
        minus: String,
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long, value_enum, default_value = "certificate")]
        report: Report,
    },
    /// Curves, arcs and zippers for the Lattes example.
    #[command(subcommand)]
    Lattes(Lattes),
    /// Lightning curves of the groups G_n.
    #[command(subcommand)]
    Kleinian(Kleinian),
    /// Dimension of a polyline given as x,y rows.
    EstimateDim {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "length")]
        method: Method,
        /// Comma-separated scales; defaults to 8 per decade between twice the
        /// shortest edge and a quarter of the extent.
        #[arg(long)]
        scales: Option<String>,
    },
    /// Render SVG figures.
    #[command(subcommand)]
    Render(Render),
}

#[derive(Subcommand)]
enum Generate {
    /// Invariant lamination of x -> d*x from a major.
    Poly {
        /// {"degree": d, "classes": [["p/q", ...], ...]}, inline or a file.
        #[arg(long)]
        major: String,
        #[arg(long)]
        depth: usize,
    },
    /// Origami lamination of a built-in family or a custom map.
    Origami {
        #[arg(long, value_enum, default_value = "ordinary")]
        family: FamilyArg,
        #[arg(long, value_enum, default_value = "plus")]
        sign: SignArg,
        #[arg(long, default_value = "0")]
        theta: String,
        #[arg(long)]
        depth: usize,
        /// Custom map {"breakpoints": [...], "slopes": [...]}; pulled back one
        /// preimage per seed region.
        #[arg(long, requires = "seed")]
        map: Option<String>,
        /// Seed classes [["p/q", ...], ...] for --map.
        #[arg(long)]
        seed: Option<String>,
    },
}

#[derive(Subcommand)]
enum Check {
    /// Pairwise unlinkedness of all classes.
    Unlinked {
        #[arg(long)]
        lam: String,
    },
    /// Angles shared by a plus class and a minus class.
    PerfectFits {
        #[arg(long)]
        plus: String,
        #[arg(long)]
        minus: String,
    },
    /// Nested leaves around a boundary point.
    Rainbows {
        #[arg(long)]
        lam: String,
        #[arg(long)]
        point: String,
        #[arg(long)]
        depth: Option<usize>,
    },
}

#[derive(Subcommand)]
enum Lattes {
    /// Curve approximation f_k as u,v,x,y rows.
    Curve {
        #[arg(long)]
        depth: usize,
    },
    /// Hubbard arc vertices, or growth statistics with --format json.
    Arc {
        #[arg(long)]
        depth: usize,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Zipper forest segments.
    Zipper {
        #[arg(long)]
        depth: usize,
        #[arg(long, value_enum, default_value = "both")]
        sign: ZipSign,
        #[arg(long, default_value_t = DEFAULT_TREE_LEVEL)]
        tree_levels: usize,
    },
    /// Origami curve stage as u,v,x,y rows.
    Origami {
        #[arg(long)]
        depth: usize,
        /// Comma-separated choices in 0..=3, one per stage; missing stages use 0.
        #[arg(long)]
        choices: Option<String>,
    },
}

#[derive(Subcommand)]
enum Kleinian {
    /// CSV of n, m, D, stderr.
    Dim {
        /// A single n, a range a..b, or a comma list.
        #[arg(long, default_value = "2..5")]
        n: String,
        #[arg(long, default_value_t = 1e-3)]
        eps: f64,
        #[arg(long, default_value_t = 16)]
        max_m: u32,
    },
}

#[derive(Subcommand)]
enum Render {
    /// SVG of one or two laminations in the disk.
    Disk {
        #[arg(long)]
        plus: String,
        #[arg(long)]
        minus: Option<String>,
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long)]
        plus_color: Option<String>,
        #[arg(long)]
        minus_color: Option<String>,
    },
    /// SVG of an x,y polyline.
    Polyline {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        closed: bool,
        /// Draw a fundamental domain behind the curve.
        #[arg(long, value_enum)]
        domain: Option<Domain>,
        #[arg(long, default_value = "black")]
        color: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Report {
    Classes,
    Certificate,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Length,
    Box,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Ordinary,
    Folded,
}

#[derive(Clone, Copy, ValueEnum)]
enum SignArg {
    Plus,
    Minus,
}

#[derive(Clone, Copy, ValueEnum)]
enum ZipSign {
    Plus,
    Minus,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Domain {
    /// Parallelogram spanned by 1 and eta.
    Eta,
    /// The unit square.
    Square,
}

/// Output document plus whether a check found a violation.
struct Outcome {
    body: String,
    violation: bool,
}

impl Outcome {
    fn ok(body: String) -> Outcome {
        Outcome { body, violation: false }
    }
}

/// Inline JSON if it looks like JSON, otherwise a path to read.
fn json_arg(s: &str) -> Result<Value> {
    let t = s.trim_start();
    let text = if t.starts_with('{') || t.starts_with('[') {
        s.to_string()
    } else {
        fs::read_to_string(s).with_context(|| format!("reading {s}"))?
    };
    serde_json::from_str(&text).with_context(|| format!("parsing JSON from {s}"))
}

fn lam_arg(s: &str) -> Result<FiniteLamination> {
    Ok(FiniteLamination::from_json(&json_arg(s)?)?)
}

fn classes_of(v: &Value) -> Result<Vec<GapClass>> {
    v.as_array().ok_or_else(|| anyhow!("expected an array of classes"))?.iter().map(|c| Ok(parse_class(c)?)).collect()
}

fn angle_arg(s: &str) -> Result<Angle> {
    Ok(Angle::new(parse_q(s)?))
}

fn leaf_json(l: &Leaf) -> Value {
    json!([l.a().to_string(), l.b().to_string()])
}

fn class_json(c: &GapClass) -> Value {
    Value::Array(c.angles().iter().map(|a| Value::String(a.to_string())).collect())
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn compact(v: &Value) -> String {
    let mut s = serde_json::to_string(v).expect("serializable");
    s.push('\n');
    s
}

fn with_meta(mut v: Value, meta: Option<Value>) -> Value {
    if let (Some(m), Some(obj)) = (meta, v.as_object_mut()) {
        obj.insert("metadata".into(), m);
    }
    v
}

fn csv_meta(meta: &Option<Value>) -> String {
    match meta {
        Some(m) => format!("# {}\n", serde_json::to_string(m).expect("serializable")),
        None => String::new(),
    }
}

fn vertex_csv(pts: &[P2]) -> String {
    let mut s = String::from("u,v,x,y\n");
    for p in pts {
        let (x, y) = embed(*p);
        s.push_str(&format!("{},{},{x:.12},{y:.12}\n", format_q(p.x), format_q(p.y)));
    }
    s
}

fn square_csv(pts: &[P2]) -> String {
    let mut s = String::from("u,v,x,y\n");
    for p in pts {
        let (x, y) = p.to_f64();
        s.push_str(&format!("{},{},{x:.12},{y:.12}\n", format_q(p.x), format_q(p.y)));
    }
    s
}

fn read_points(path: &PathBuf) -> Result<Vec<Pt>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut pts = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = line.split(',').map(str::trim).collect();
        // Use the last two columns so u,v,x,y dumps work directly.
        if cols.len() < 2 {
            bail!("expected x,y columns in {line:?}");
        }
        let (x, y) = (cols[cols.len() - 2].parse::<f64>(), cols[cols.len() - 1].parse::<f64>());
        match (x, y) {
            (Ok(x), Ok(y)) => pts.push((x, y)),
            _ if pts.is_empty() => continue, // header
            _ => bail!("bad row {line:?}"),
        }
    }
    Ok(pts)
}

fn parse_ns(s: &str) -> Result<Vec<u32>> {
    if let Some((a, b)) = s.split_once("..") {
        let (a, b): (u32, u32) = (a.trim().parse()?, b.trim().parse()?);
        return Ok((a..=b).collect());
    }
    s.split(',').map(|x| Ok(x.trim().parse()?)).collect()
}

fn estimate_json(e: &DimensionEstimate, method: &str) -> Value {
    json!({"method": method, "estimate": e.d, "stderr": e.stderr, "scales": e.scales})
}

fn run(cli: &Cli) -> Result<Outcome> {
    let meta = |v: Value| if cli.seed_metadata { Some(v) } else { None };
    match &cli.cmd {
        Cmd::Generate(Generate::Poly { major, depth }) => {
            let v = json_arg(major)?;
            let d =
                v.get("degree").and_then(Value::as_u64).ok_or_else(|| anyhow!("major needs an integer \"degree\""))?;
            let classes = classes_of(v.get("classes").ok_or_else(|| anyhow!("major needs \"classes\""))?)?;
            let m = validate_major(d as u32, &classes)?;
            let g = generate_invariant_lamination(&m, *depth);
            for w in &g.warnings {
                eprintln!("warning: {w}");
            }
            let md = meta(json!({"command": "generate poly", "major": v, "depth": depth, "rule": "leftmost"}));
            Ok(Outcome::ok(compact(&with_meta(g.lamination.to_json(), md))))
        }
        Cmd::Generate(Generate::Origami { family, sign, theta, depth, map, seed }) => {
            let t = parse_q(theta)?;
            let lam = match map {
                Some(m) => {
                    let map = PLCircleMap::from_json(&json_arg(m)?)?;
                    let seed = Seed::new(classes_of(&json_arg(seed.as_deref().expect("clap requires --seed"))?)?)?;
                    generate_seed_lamination(&map, &seed, &OrdinaryRule::new(&seed), *depth)?
                }
                None => {
                    let fam = match family {
                        FamilyArg::Ordinary => Family::Ordinary,
                        FamilyArg::Folded => Family::Folded,
                    };
                    let sg = match sign {
                        SignArg::Plus => SeedSign::Plus,
                        SignArg::Minus => SeedSign::Minus,
                    };
                    generate_family(fam, sg, t, *depth)?
                }
            };
            let md = meta(json!({
                "command": "generate origami",
                "family": match family { FamilyArg::Ordinary => "ordinary", FamilyArg::Folded => "folded" },
                "sign": match sign { SignArg::Plus => "plus", SignArg::Minus => "minus" },
                "theta": format_q(t),
                "depth": depth,
                "custom_map": map.is_some(),
            }));
            Ok(Outcome::ok(compact(&with_meta(lam.to_json(), md))))
        }
        Cmd::Check(Check::Unlinked { lam }) => {
            let l = lam_arg(lam)?;
            let (ok, v) = match check_pairwise_unlinked(&l.all_classes()) {
                CheckReport::Ok => (true, json!({"ok": true})),
                CheckReport::Violation(a, b) => {
                    (false, json!({"ok": false, "violation": [class_json(&a), class_json(&b)]}))
                }
            };
            Ok(Outcome { body: pretty(&v), violation: !ok })
        }
        Cmd::Check(Check::PerfectFits { plus, minus }) => {
            let (p, m) = (lam_arg(plus)?, lam_arg(minus)?);
            let fits = find_perfect_fits(&p.all_classes(), &m.all_classes());
            let list: Vec<Value> = fits
                .iter()
                .map(|f| json!({"angle": f.angle.to_string(), "plus": class_json(&f.plus), "minus": class_json(&f.minus)}))
                .collect();
            Ok(Outcome { body: pretty(&json!({"perfect_fits": list})), violation: !fits.is_empty() })
        }
        Cmd::Check(Check::Rainbows { lam, point, depth }) => {
            let l = lam_arg(lam)?;
            let d = depth.unwrap_or(l.depth());
            let r = rainbow_search(angle_arg(point)?, &l, d);
            Ok(Outcome::ok(pretty(
                &json!({"point": point, "depth": d, "rainbow": r.iter().map(leaf_json).collect::<Vec<_>>()}),
            )))
        }
        Cmd::Mate { plus, minus, depth, report } => {
            let (p, m) = (lam_arg(plus)?, lam_arg(minus)?);
            let d = depth.unwrap_or(p.depth().min(m.depth()));
            match report {
                Report::Classes => {
                    let rc = ray_classes(&p, &m, d);
                    let classes: Vec<Value> = rc
                        .iter()
                        .map(|c| {
                            let leaves: Vec<Value> =
                                c.leaves.iter().map(|(s, l)| json!({"side": s.name(), "leaf": leaf_json(l)})).collect();
                            json!({"diameter": c.diameter, "leaves": leaves})
                        })
                        .collect();
                    let md = max_diameter(&rc);
                    Ok(Outcome {
                        body: pretty(&json!({"depth": d, "max_diameter": md, "classes": classes})),
                        violation: md > 0,
                    })
                }
                Report::Certificate => {
                    let (v, bad) = match no_perfect_fits_certificate(&p, &m, d) {
                        Some(GapCertificate::MinGap(g)) => {
                            (json!({"min_gap": format_q(g), "min_gap_f64": catwheel::geom::q_to_f64(g)}), false)
                        }
                        Some(GapCertificate::Fit(a)) => (json!({"fit": a.to_string()}), true),
                        None => (json!({"empty": true}), false),
                    };
                    let mut v = v;
                    v["depth"] = json!(d);
                    v["heuristic"] = json!("finite-depth statistic; not a proof for the limit lamination");
                    Ok(Outcome { body: pretty(&v), violation: bad })
                }
            }
        }
        Cmd::Lattes(Lattes::Curve { depth }) => {
            let st = curve_stages(*depth)?;
            let md = meta(
                json!({"command": "lattes curve", "depth": depth, "seed": "branch-value loop 0 -> 1/2 -> (1+eta)/2 -> eta/2"}),
            );
            Ok(Outcome::ok(csv_meta(&md) + &vertex_csv(&st[*depth].points)))
        }
        Cmd::Lattes(Lattes::Arc { depth, format }) => {
            if *depth == 0 {
                bail!("depth must be at least 1");
            }
            let arc = hubbard_arc(*depth);
            match format {
                Format::Csv => {
                    let md = meta(json!({"command": "lattes arc", "depth": depth}));
                    Ok(Outcome::ok(csv_meta(&md) + &vertex_csv(&arc.vertices)))
                }
                Format::Json => {
                    let bd = arc.box_dimension().ok().map(|e| e.d);
                    let v = json!({
                        "depth": depth,
                        "vertices": arc.vertices.len(),
                        "segment_counts": arc.stage_segment_counts,
                        "growth_ratios": arc.growth_ratios(),
                        "lambda": growth_constant(),
                        "box_dimension": bd,
                    });
                    Ok(Outcome::ok(pretty(&v)))
                }
            }
        }
        Cmd::Lattes(Lattes::Zipper { depth, sign, tree_levels }) => {
            let sides: Vec<(&str, TreeSign)> = match sign {
                ZipSign::Plus => vec![("plus", TreeSign::Plus)],
                ZipSign::Minus => vec![("minus", TreeSign::Minus)],
                ZipSign::Both => vec![("plus", TreeSign::Plus), ("minus", TreeSign::Minus)],
            };
            let forests: Vec<(&str, Vec<Seg>)> =
                sides.iter().map(|(n, s)| (*n, zipper_forest(*s, *depth, *tree_levels))).collect();
            let mut body =
                csv_meta(&meta(json!({"command": "lattes zipper", "depth": depth, "tree_levels": tree_levels})));
            body.push_str("side,u0,v0,u1,v1\n");
            for (name, segs) in &forests {
                for (a, b) in segs {
                    body.push_str(&format!(
                        "{name},{},{},{},{}\n",
                        format_q(a.x),
                        format_q(a.y),
                        format_q(b.x),
                        format_q(b.y)
                    ));
                }
            }
            let mut violation = false;
            if forests.len() == 2 {
                let c = count_transverse_crossings(&forests[0].1, &forests[1].1);
                eprintln!("transverse crossings between Z+ and Z-: {c}");
                violation = c > 0;
            }
            Ok(Outcome { body, violation })
        }
        Cmd::Lattes(Lattes::Origami { depth, choices }) => {
            let ch: Vec<u8> = match choices {
                Some(s) if !s.trim().is_empty() => {
                    s.split(',').map(|c| Ok(c.trim().parse()?)).collect::<Result<_>>()?
                }
                _ => vec![],
            };
            let st = origami_curve(*depth, &ch)?;
            let last = &st[*depth];
            if !last.is_simple() {
                eprintln!("warning: stage {depth} is not simple");
            }
            let md = meta(json!({"command": "lattes origami", "depth": depth, "choices": ch}));
            Ok(Outcome::ok(csv_meta(&md) + &square_csv(&last.vertices())))
        }
        Cmd::Kleinian(Kleinian::Dim { n, eps, max_m }) => {
            let mut body = csv_meta(&meta(json!({"command": "kleinian dim", "eps": eps, "max_m": max_m})));
            body.push_str("n,m,D,stderr\n");
            for k in parse_ns(n)? {
                let r = lightning_dimension(k, *eps, *max_m)?;
                body.push_str(&format!("{k},{},{:.6},{:.6}\n", r.m, r.estimate.d, r.estimate.stderr));
            }
            Ok(Outcome::ok(body))
        }
        Cmd::EstimateDim { input, method, scales } => {
            let pts = read_points(input)?;
            let sc: Vec<f64> = match scales {
                Some(s) => s.split(',').map(|x| Ok(x.trim().parse::<f64>()?)).collect::<Result<_>>()?,
                None => default_scales(&pts),
            };
            let v = match method {
                Method::Length => estimate_json(&estimate_dimension_length_regression(&pts, &sc)?, "length"),
                Method::Box => {
                    let h = sc.iter().cloned().fold(f64::INFINITY, f64::min) / 4.0;
                    estimate_json(&box_count_dimension(&densify(&pts, h), &sc)?, "box")
                }
            };
            Ok(Outcome::ok(pretty(&v)))
        }
        Cmd::Render(Render::Disk { plus, minus, depth, plus_color, minus_color }) => {
            let p = lam_arg(plus)?;
            let m = minus.as_deref().map(lam_arg).transpose()?;
            let d = depth.unwrap_or(usize::MAX);
            let mut scene = DiskScene::new(
                p.classes_up_to(d.min(p.depth())),
                m.map(|m| m.classes_up_to(d.min(m.depth()))).unwrap_or_default(),
            );
            if let Some(c) = plus_color {
                scene.plus_color = c.clone();
            }
            if let Some(c) = minus_color {
                scene.minus_color = c.clone();
            }
            Ok(Outcome::ok(render_disk_svg(&scene)))
        }
        Cmd::Render(Render::Polyline { input, closed, domain, color }) => {
            let pts = read_points(input)?;
            let outline = domain.map(|d| match d {
                Domain::Eta => {
                    [P2::ints(0, 0), P2::ints(1, 0), P2::ints(1, 1), P2::ints(0, 1)].iter().map(|p| embed(*p)).collect()
                }
                Domain::Square => vec![(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)],
            });
            let style = PolylineStyle { color: color.clone(), closed: *closed, outline, ..Default::default() };
            Ok(Outcome::ok(render_polyline_svg(&pts, &style)))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(o) => {
            let written = match &cli.out {
                Some(p) => fs::write(p, &o.body).with_context(|| format!("writing {}", p.display())),
                None => std::io::stdout().write_all(o.body.as_bytes()).context("writing stdout"),
            };
            if let Err(e) = written {
                eprintln!("error: {e:#}");
                return ExitCode::from(1);
            }
            ExitCode::from(if o.violation { 2 } else { 0 })
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
