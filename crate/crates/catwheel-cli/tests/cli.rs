use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_catwheel")).args(args).output().unwrap()
}

fn tmp(name: &str) -> PathBuf {
    let d = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli");
    std::fs::create_dir_all(&d).unwrap();
    d.join(name)
}

fn gen(major: &str, depth: &str, out: &Path) {
    let o = run(&["generate", "poly", "--major", major, "--depth", depth, "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn exit_codes() {
    let p = tmp("p.json");
    let r = tmp("r.json");
    gen(r#"{"degree":2,"classes":[["0","1/2"]]}"#, "3", &p);
    gen(r#"{"degree":2,"classes":[["1/4","3/4"]]}"#, "3", &r);
    let (ps, rs) = (p.to_str().unwrap(), r.to_str().unwrap());
    assert_eq!(run(&["check", "unlinked", "--lam", ps]).status.code(), Some(0));
    // Both contain the angle 1/4 among their endpoints.
    assert_eq!(run(&["check", "perfect-fits", "--plus", ps, "--minus", rs]).status.code(), Some(2));
    let m = run(&["mate", "--plus", ps, "--minus", rs, "--depth", "2"]);
    assert_eq!(m.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&m.stdout).contains("\"fit\""));
    let linked = tmp("linked.json");
    std::fs::write(&linked, r#"{"degree":2,"levels":[[["0","1/2"],["1/4","3/4"]]]}"#).unwrap();
    assert_eq!(run(&["check", "unlinked", "--lam", linked.to_str().unwrap()]).status.code(), Some(2));
    let bad = run(&["generate", "poly", "--major", r#"{"degree":2,"classes":[["0","1/3"]]}"#, "--depth", "1"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("error"));
}

#[test]
fn conjugate_mating_certificate() {
    let p = tmp("cp.json");
    let m = tmp("cm.json");
    gen(r#"{"degree":2,"classes":[["1/12","7/12"]]}"#, "8", &p);
    gen(r#"{"degree":2,"classes":[["5/12","11/12"]]}"#, "8", &m);
    let o = run(&["mate", "--plus", p.to_str().unwrap(), "--minus", m.to_str().unwrap(), "--report", "classes"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["max_diameter"], 0);
}

#[test]
fn csv_outputs_and_estimate() {
    let o = run(&["lattes", "arc", "--depth", "6"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("u,v,x,y\n"));
    let arc = tmp("arc.csv");
    std::fs::write(&arc, &text).unwrap();
    let e = run(&["estimate-dim", "--input", arc.to_str().unwrap(), "--method", "length"]);
    assert!(e.status.success(), "{}", String::from_utf8_lossy(&e.stderr));
    let v: serde_json::Value = serde_json::from_slice(&e.stdout).unwrap();
    let d = v["estimate"].as_f64().unwrap();
    assert!(d > 1.0 && d < 1.5, "{d}");

    let z = run(&["lattes", "zipper", "--depth", "2"]);
    assert_eq!(z.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&z.stdout).starts_with("side,u0,v0,u1,v1\n"));

    let k = run(&["kleinian", "dim", "--n", "3", "--eps", "1e-2"]);
    assert!(k.status.success());
    let rows: Vec<String> = String::from_utf8(k.stdout).unwrap().lines().map(String::from).collect();
    assert_eq!(rows[0], "n,m,D,stderr");
    assert!(rows[1].starts_with("3,"));
}

#[test]
fn seed_metadata_is_attached() {
    let o =
        run(&["--seed-metadata", "generate", "origami", "--family", "folded", "--theta", "141/1000", "--depth", "1"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["metadata"]["theta"], "141/1000");
    assert_eq!(v["map"], "folded:141/1000");
    let c = run(&["lattes", "curve", "--depth", "2", "--seed-metadata"]);
    assert!(String::from_utf8_lossy(&c.stdout).starts_with("# {"));
}

#[test]
fn render_disk_svg() {
    let p = tmp("rd.json");
    gen(r#"{"degree":3,"classes":[["0","1/3","2/3"]]}"#, "1", &p);
    let o = run(&["render", "disk", "--plus", p.to_str().unwrap()]);
    let svg = String::from_utf8(o.stdout).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains(r#"viewBox="0 0 1000 1000""#));
    assert_eq!(svg.matches("<path").count(), 4);
}
