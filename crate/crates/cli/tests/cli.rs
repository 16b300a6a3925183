use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures")
}

fn fixture(name: &str) -> String {
    fixtures().join(name).display().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_abd-kit")).args(args).output().unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn number(args: &[&str]) -> f64 {
    stdout(args).lines().next().unwrap().trim().parse().unwrap()
}

fn write_path_graph(dir: &Path, name: &str, heights: &[f64]) -> String {
    let vertices: Vec<String> = heights
        .iter()
        .enumerate()
        .map(|(i, y)| format!(r#"{{"id":{i},"x":{i},"y":{y}}}"#))
        .collect();
    let edges: Vec<String> = (1..heights.len()).map(|i| format!("[{},{}]", i - 1, i)).collect();
    let path = dir.join(name);
    fs::write(&path, format!(r#"{{"vertices":[{}],"edges":[{}]}}"#, vertices.join(","), edges.join(","))).unwrap();
    path.display().to_string()
}

#[test]
fn dist_reproduces_the_triangle_fixture() {
    let (x, y, z) = (fixture("triangle_x.json"), fixture("triangle_y.json"), fixture("triangle_z.json"));
    assert_eq!(number(&["dist", &x, &y]), 5.0);
    assert_eq!(number(&["dist", &y, &z]), 3.0);
    assert_eq!(number(&["dist", &x, &z]), 1.0);
    assert_eq!(number(&["dist", &x, &x]), 0.0);
    let approx = number(&["dist", &x, &y, "--tol", "1e-6"]);
    assert!((approx - 5.0).abs() <= 1e-6);
}

#[test]
fn dist_reports_the_engine() {
    let x = fixture("triangle_x.json");
    let out = run(&["dist", &x, &x, "--engine", "baseline"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("engine: baseline"));
}

#[test]
fn tree_of_w_path_and_monotone_path() {
    let dir = tempfile::tempdir().unwrap();
    let w = write_path_graph(dir.path(), "w.json", &[0.0, 5.0, 1.0, 6.0, 2.0]);
    let text = stdout(&["tree", &w]);
    assert_eq!(text.matches(r#""value""#).count(), 5);
    let mono = write_path_graph(dir.path(), "m.json", &[0.0, 1.0, 2.0, 3.0]);
    assert_eq!(stdout(&["tree", &mono]).matches(r#""value""#).count(), 1);
}

#[test]
fn tree_warns_and_keeps_the_largest_component() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("split.json");
    fs::write(
        &path,
        r#"{"vertices":[{"id":0,"x":0,"y":0},{"id":1,"x":1,"y":2},{"id":2,"x":2,"y":1},{"id":3,"x":9,"y":-5}],"edges":[[0,1],[1,2]]}"#,
    )
    .unwrap();
    let out = run(&["tree", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("largest component"));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.matches(r#""value""#).count(), 3);
    assert!(!text.contains("-5"));
}

#[test]
fn abd_values() {
    let (g, h, j) = (fixture("abd_g.json"), fixture("abd_h.json"), fixture("abd_j.json"));
    assert_eq!(number(&["abd", &g, &h, "--frames", "1"]), 6.5);
    assert_eq!(number(&["abd", &g, &j, "--frames", "1"]), 2.5);
    assert_eq!(number(&["abd", &h, &j, "--frames", "1"]), 3.0);
    assert_eq!(number(&["abd", &h, &h]), 0.0);
    let (a, b) = (fixture("convex_triangle.json"), fixture("convex_square.json"));
    assert_eq!(number(&["abd", &a, &b, "--avg", "mean"]), 0.0);
}

#[test]
fn abd_per_frame_csv() {
    let (g, h) = (fixture("abd_g.json"), fixture("abd_h.json"));
    let text = stdout(&["abd", &g, &h, "--frames", "4", "--per-frame"]);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[1], "frame,angle,distance");
    assert_eq!(lines.len(), 2 + 4);
}

#[test]
fn pipeline_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("data");
    let data_s = data.to_str().unwrap();
    assert!(run(&["gen", "shapes", "--count", "3", "--out", data_s]).status.success());
    let mut graphs: Vec<String> = fs::read_dir(&data)
        .unwrap()
        .map(|e| e.unwrap().path().display().to_string())
        .collect();
    graphs.sort();
    assert_eq!(graphs.len(), 9);

    let mut args = vec!["matrix"];
    args.extend(graphs.iter().map(String::as_str));
    let one = stdout(&[args.as_slice(), &["--jobs", "1"]].concat());
    let four = stdout(&[args.as_slice(), &["--jobs", "4"]].concat());
    assert_eq!(one, four);
    assert_eq!(one.lines().count(), 10);

    let m = dir.path().join("m.csv");
    fs::write(&m, &one).unwrap();
    let m = m.to_str().unwrap();
    let newick = stdout(&["cluster", m]);
    assert_eq!(newick, stdout(&["cluster", m]));
    assert!(newick.trim_end().ends_with(';'));
    let flat = stdout(&["cluster", m, "--k", "3"]);
    assert_eq!(flat.lines().count(), 10);
    let svg = stdout(&["cluster", m, "--format", "svg"]);
    assert!(svg.starts_with("<svg"));
    let emb = stdout(&["mds", m]);
    assert_eq!(emb, stdout(&["mds", m]));
    assert!(emb.starts_with("label,x1,x2"));
}

#[test]
fn gen_is_seeded() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b, c) = (dir.path().join("a"), dir.path().join("b"), dir.path().join("c"));
    for (out, seed) in [(&a, "7"), (&b, "7"), (&c, "8")] {
        assert!(run(&["gen", "convex", "--count", "2", "--seed", seed, "--out", out.to_str().unwrap()]).status.success());
    }
    let read = |d: &Path| fs::read_to_string(d.join("convex0.json")).unwrap();
    assert_eq!(read(&a), read(&b));
    assert_ne!(read(&a), read(&c));
}

#[test]
fn verify_passes_on_a_fresh_checkout() {
    let out = run(&["verify", "--trials", "20"]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(out.status.success(), "{text}");
    assert!(text.contains("d(X,Y)=5 d(Y,Z)=3 d(X,Z)=1"));
    assert!(text.contains("d(G,H)=6.5 d(G,J)=2.5 d(H,J)=3"));
    assert!(text.contains("isomorphic=false"));
    assert!(text.contains("in 20 random graphs"));
}

#[test]
fn verify_fails_on_corrupted_fixtures() {
    let dir = tempfile::tempdir().unwrap();
    for e in fs::read_dir(fixtures()).unwrap() {
        let p = e.unwrap().path();
        fs::copy(&p, dir.path().join(p.file_name().unwrap())).unwrap();
    }
    fs::write(dir.path().join("triangle_y.json"), "{ not json").unwrap();
    let out = run(&["verify", "--trials", "2", "--fixtures", dir.path().to_str().unwrap()]);
    assert!(!out.status.success());

    // well-formed but different values: the check runs and fails
    fs::copy(fixtures().join("triangle_x.json"), dir.path().join("triangle_y.json")).unwrap();
    let out = run(&["verify", "--trials", "2", "--fixtures", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL branching distance triangle"));
}

#[test]
fn bad_arguments_fail() {
    let x = fixture("triangle_x.json");
    assert!(!run(&["dist", &x, &x, "--mode", "tolerance"]).status.success());
    assert!(!run(&["abd", &x, &x, "--frames", "0"]).status.success());
    assert!(!run(&["dist", &x, "/nonexistent.json"]).status.success());
}
