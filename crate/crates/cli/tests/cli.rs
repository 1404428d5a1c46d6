use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn alphalim(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_alphalim")).args(args).current_dir(cwd).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn config(dir: &Path, name: &str, text: &str) -> String {
    fs::write(dir.join(name), text).unwrap();
    name.to_string()
}

#[test]
fn build_is_deterministic() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    let c = config(d, "ext.toml", "[space]\nkind = \"extended_sine\"\nmesh = \"1/128\"\npieces = 4\n\n[map]\nname = \"extended_sine\"\n");
    assert_eq!(code(&alphalim(&["build", &c, "-o", "a"], d)), 0);
    assert_eq!(code(&alphalim(&["build", &c, "-o", "b"], d)), 0);
    for f in ["cells.csv", "space.svg", "graph.csv", "config.toml", "summary.txt"] {
        assert_eq!(fs::read(d.join("a").join(f)).unwrap(), fs::read(d.join("b").join(f)).unwrap(), "{f}");
    }
}

#[test]
fn z_space_has_a_n_landmarks() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    let c = config(d, "z.toml", "[space]\nkind = \"Z\"\nmesh = \"1/128\"\npieces = 6\ncurves = 6\n");
    let o = alphalim(&["build", &c, "-o", "z"], d);
    assert_eq!(code(&o), 0);
    let summary = String::from_utf8(o.stdout).unwrap();
    for n in 1..=6 {
        assert!(summary.contains(&format!("A_{n} ")), "A_{n}");
    }
}

#[test]
fn zero_mesh_is_a_config_error() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    let c = config(d, "bad.toml", "[space]\nkind = \"interval\"\nmesh = \"0\"\n");
    let o = alphalim(&["build", &c, "-o", "x"], d);
    assert_eq!(code(&o), 2);
    assert!(!o.stderr.is_empty());
    let c = config(d, "typo.toml", "[space]\nkind = \"interval\"\nmesh = \"1/4\"\npeices = 3\n");
    let o = alphalim(&["build", &c, "-o", "x"], d);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8(o.stderr).unwrap().contains("peices"));
}

#[test]
fn missing_artifact_and_inapplicable_engine() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    assert_eq!(code(&alphalim(&["alpha", "nowhere", "--basepoint", "b"], d)), 3);
    let c = config(d, "cantor.toml", "[space]\nkind = \"cantor\"\ndepth = 4\n");
    assert_eq!(code(&alphalim(&["build", &c, "-o", "c"], d)), 0);
    assert_eq!(code(&alphalim(&["alpha", "c", "--basepoint", "a"], d)), 4);
}

#[test]
fn alpha_reports_and_verdicts() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    let c = config(d, "h.toml", "[space]\nkind = \"interval\"\nmesh = \"1/64\"\n\n[map]\nname = \"horseshoe\"\n");
    assert_eq!(code(&alphalim(&["build", &c, "-o", "h"], d)), 0);
    assert_eq!(code(&alphalim(&["alpha", "h", "--basepoint", "1", "--expect", "I"], d)), 0);
    let report = fs::read_to_string(d.join("h/alpha-1-enclosure/report.txt")).unwrap();
    assert!(report.contains("members: 128 cells"));
    assert!(d.join("h/alpha-1-enclosure/overlay.svg").exists());
    assert_eq!(code(&alphalim(&["alpha", "h", "--basepoint", "1", "--expect=-1"], d)), 5);
    assert_eq!(code(&alphalim(&["facts", "h", "--basepoint", "1", "--basepoint=-1"], d)), 0);
}

#[test]
fn shift_cloud_exact_engine() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    let c = config(d, "shift.toml", "[space]\nkind = \"shift_cloud\"\nn_max = 60\nm_max = 60\n\n[map]\nname = \"shift\"\n");
    assert_eq!(code(&alphalim(&["build", &c, "-o", "f"], d)), 0);
    let o = alphalim(&["facts", "f", "--basepoint", "(0,0)", "--engine", "exact", "--depth", "40", "--eps", "0.05"], d);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8(o.stdout).unwrap().contains("forward-invariant: holds (strict inclusion)"));
}

#[test]
fn quotient_and_product_line() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    let w = config(d, "w.toml", "[space]\nkind = \"W\"\nmesh = \"1/32\"\npieces = 4\ncurves = 4\n");
    assert_eq!(code(&alphalim(&["quotient", &w, "--collapse", "S_inf", "--name", "s_inf", "--check", "chain", "-o", "q"], d)), 0);
    let e = config(d, "e.toml", "[space]\nkind = \"extended_sine\"\nmesh = \"1/32\"\npieces = 4\n");
    assert_eq!(code(&alphalim(&["quotient", &e, "--collapse", "[b,c]", "--name", "c", "--check", "sine", "-o", "s"], d)), 0);
    assert_eq!(code(&alphalim(&["quotient", &e, "--collapse", "[a,b]", "--name", "p", "--check", "chain", "-o", "t"], d)), 5);
    let i = config(d, "i.toml", "[space]\nkind = \"interval\"\nmesh = \"1/8\"\n");
    let o = alphalim(&["product-line", "--factor", &i, "--factor", &i, "--random", "50", "--seed", "9", "-o", "p"], d);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8(o.stdout).unwrap().contains("agreement: 50/50"));
    assert_eq!(code(&alphalim(&["product-line", "--factor", &i, "-o", "p1"], d)), 2);
}

#[test]
fn survey_realizes_landmarks_and_random_sets() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    let c = config(d, "e.toml", "[space]\nkind = \"extended_sine\"\nmesh = \"1/32\"\npieces = 4\n");
    assert_eq!(code(&alphalim(&["build", &c, "-o", "e"], d)), 0);
    let o = alphalim(&["survey", "e", "--landmark", "[a,c]", "--landmark", "[b,c]", "--landmark", "all", "--random", "3", "--seed", "5"], d);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let csv = fs::read_to_string(d.join("e/survey/survey.csv")).unwrap();
    assert_eq!(csv.lines().count(), 7);
}

#[test]
fn gallery_rows_and_figures() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    let o = alphalim(&["gallery", "--only=af-survey:Z", "--render", "-o", "g"], d);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let summary = fs::read_to_string(d.join("g/summary.txt")).unwrap();
    assert!(summary.contains("8/8 realized"));
    assert!(d.join("g/af-survey_Z/row.txt").exists());
    for f in ["sine.svg", "extended_sine.svg", "chain.svg", "z_space.svg"] {
        assert!(fs::read_to_string(d.join("g/figures").join(f)).unwrap().starts_with("<svg"));
    }
    assert_eq!(code(&alphalim(&["gallery", "--only=nope", "-o", "g2"], d)), 2);
    assert_eq!(code(&alphalim(&["gallery", "--only=arc,zero-dim", "-o", "g3"], d)), 0);
    assert_eq!(code(&alphalim(&["gallery", "--only=arc,zero-dim", "-o", "g4"], d)), 0);
    assert_eq!(fs::read(d.join("g3/summary.txt")).unwrap(), fs::read(d.join("g4/summary.txt")).unwrap());
}
