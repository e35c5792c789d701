use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn toy(file: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/toy").join(file)
}

fn abrw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_abrw"))
        .args(args)
        .env_remove("ABRW_THREADS")
        .output()
        .expect("binary runs")
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

const SMALL: &[&str] = &["--dim", "8", "--walks", "2", "--length", "12", "--window", "3", "--epochs", "2"];

fn embed(method: &str, attributes: bool, out: &Path, extra: &[&str]) -> Output {
    let edges = toy("toy.edges");
    let attrs = toy("toy.attrs");
    let mut args = vec!["embed", "--method", method, "--edges", p(&edges), "--output", p(out)];
    if attributes {
        args.extend(["--attributes", p(&attrs)]);
    }
    args.extend(SMALL);
    args.extend(extra);
    abrw(&args)
}

#[test]
fn perturb_nothing_reproduces_input() {
    let dir = tempfile::tempdir().unwrap();
    let (out, removed) = (dir.path().join("out.edges"), dir.path().join("removed.edges"));
    let edges = toy("toy.edges");
    let r = abrw(&["perturb", "--edges", p(&edges), "--remove-links", "0.0", "--output", p(&out), "--removed", p(&removed)]);
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    assert_eq!(fs::read(&out).unwrap(), fs::read(&edges).unwrap());
    assert_eq!(fs::read_to_string(&removed).unwrap(), "");
}

#[test]
fn perturb_is_seeded() {
    let dir = tempfile::tempdir().unwrap();
    let edges = toy("toy.edges");
    let run = |tag: &str| {
        let out = dir.path().join(format!("{tag}.edges"));
        let removed = dir.path().join(format!("{tag}.removed"));
        let samples = dir.path().join(format!("{tag}.samples"));
        let r = abrw(&[
            "perturb", "--edges", p(&edges), "--remove-links", "0.3", "--seed", "7",
            "--output", p(&out), "--removed", p(&removed), "--samples", p(&samples),
        ]);
        assert!(r.status.success());
        (fs::read(out).unwrap(), fs::read(removed).unwrap(), fs::read_to_string(samples).unwrap())
    };
    let a = run("a");
    assert_eq!(a, run("b"));
    let total = fs::read_to_string(&edges).unwrap().lines().count();
    let removed = String::from_utf8(a.1.clone()).unwrap().lines().count();
    assert_eq!(removed, (0.3 * total as f64).floor() as usize);
    assert_eq!(a.2.lines().filter(|l| l.ends_with(" pos")).count(), removed);
    assert_eq!(a.2.lines().filter(|l| l.ends_with(" neg")).count(), removed);
}

#[test]
fn perturb_rejects_bad_fraction() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o");
    let edges = toy("toy.edges");
    let r = abrw(&["perturb", "--edges", p(&edges), "--remove-links", "1.5", "--output", p(&out), "--removed", p(&out)]);
    assert_eq!(r.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&r.stderr).contains("outside [0, 1]"));
    assert!(!out.exists());
}

#[test]
fn embed_deepwalk_without_attributes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("z.emb");
    let r = embed("deepwalk", false, &out, &[]);
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    let text = fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("40 8"));
    assert!(lines.all(|l| l.split_whitespace().count() == 9));
    let manifest = fs::read_to_string(dir.path().join("z.emb.manifest.toml")).unwrap();
    assert!(manifest.contains("method = \"deepwalk\""));
    assert!(manifest.contains("output = \"sha256:"));
}

#[test]
fn embed_deepwalk_ignores_attributes_with_warning() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("z.emb");
    let r = embed("deepwalk", true, &out, &[]);
    assert!(r.status.success());
    assert!(String::from_utf8_lossy(&r.stderr).contains("ignoring the attribute file"));
    let manifest = fs::read_to_string(dir.path().join("z.emb.manifest.toml")).unwrap();
    assert!(!manifest.contains("attributes"));
}

#[test]
fn attribute_methods_need_attributes() {
    let dir = tempfile::tempdir().unwrap();
    for method in ["abrw", "attrpure"] {
        let out = dir.path().join(format!("{method}.emb"));
        let r = embed(method, false, &out, &[]);
        assert_eq!(r.status.code(), Some(1));
        assert!(String::from_utf8_lossy(&r.stderr).contains("needs an attribute file"));
        assert!(!out.exists());
    }
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn embed_rejects_bad_alpha() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("z.emb");
    let r = embed("abrw", true, &out, &["--alpha", "1.2"]);
    assert_eq!(r.status.code(), Some(2));
    assert!(!out.exists());
}

#[test]
fn failed_run_leaves_no_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("z.emb");
    let missing = dir.path().join("missing.edges");
    let r = abrw(&["embed", "--method", "deepwalk", "--edges", p(&missing), "--output", p(&out)]);
    assert_eq!(r.status.code(), Some(1));
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn deterministic_runs_and_manifest_replay_match() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b, c) = (dir.path().join("a.emb"), dir.path().join("b.emb"), dir.path().join("c.emb"));
    for out in [&a, &b] {
        let r = embed("abrw", true, out, &["--deterministic", "--seed", "42"]);
        assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    let manifest = dir.path().join("a.emb.manifest.toml");
    let r = abrw(&["embed", "--config", p(&manifest), "--output", p(&c)]);
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    assert_eq!(fs::read(&a).unwrap(), fs::read(&c).unwrap());
    let other = embed("abrw", true, &c, &["--deterministic", "--seed", "43"]);
    assert!(other.status.success());
    assert_ne!(fs::read(&a).unwrap(), fs::read(&c).unwrap());
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(
        &cfg,
        format!("[config]\nmethod = \"attrpure\"\nedges = {:?}\nattributes = {:?}\ndim = 4\n", toy("toy.edges"), toy("toy.attrs")),
    )
    .unwrap();
    let out = dir.path().join("z.emb");
    let r = abrw(&["embed", "--config", p(&cfg), "--dim", "6", "--output", p(&out)]);
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    assert!(fs::read_to_string(&out).unwrap().starts_with("40 6\n"));
}

#[test]
fn eval_lp_perfect_separation() {
    let dir = tempfile::tempdir().unwrap();
    let emb = dir.path().join("z.emb");
    fs::write(&emb, "4 2\na 1 0\nb 1 0.1\nc 0 1\nd -0.1 1\n").unwrap();
    let samples = dir.path().join("s.txt");
    fs::write(&samples, "a b pos\nc d pos\na c neg\nb d neg\n").unwrap();
    let out = dir.path().join("lp.csv");
    let r = abrw(&["eval", "lp", "--embedding", p(&emb), "--samples", p(&samples), "--output", p(&out)]);
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    assert_eq!(fs::read_to_string(out).unwrap(), "setting,seed,metric,value\nlp,-,auc,1\n");
}

#[test]
fn eval_nc_rows_and_mean() {
    let dir = tempfile::tempdir().unwrap();
    let emb = dir.path().join("z.emb");
    assert!(embed("attrpure", true, &emb, &[]).status.success());
    let labels = toy("toy.labels");
    let r = abrw(&["eval", "nc", "--embedding", p(&emb), "--labels", p(&labels), "--train-fraction", "0.5", "--seeds", "10"]);
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    let csv = String::from_utf8(r.stdout).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 12);
    assert_eq!(lines.iter().filter(|l| l.contains(",mean,")).count(), 1);
    assert!(lines[11].starts_with("nc;train=0.5,mean,micro_f1,"));
}

#[test]
fn eval_viz_shape() {
    let dir = tempfile::tempdir().unwrap();
    let emb = dir.path().join("z.emb");
    assert!(embed("attrpure", true, &emb, &[]).status.success());
    let out = dir.path().join("coords.txt");
    let labels = toy("toy.labels");
    let r = abrw(&["eval", "viz", "--embedding", p(&emb), "--labels", p(&labels), "--output", p(&out)]);
    assert!(r.status.success());
    let text = fs::read_to_string(out).unwrap();
    assert_eq!(text.lines().count(), 40);
    for line in text.lines() {
        let f: Vec<&str> = line.split_whitespace().collect();
        assert_eq!(f.len(), 4);
        assert!(f[1].parse::<f64>().is_ok() && f[2].parse::<f64>().is_ok());
        assert!(f[3] == "c0" || f[3] == "c1");
    }
}

#[test]
fn eval_sweep_single_cell() {
    let edges = toy("toy.edges");
    let attrs = toy("toy.attrs");
    let mut args = vec![
        "eval", "sweep", "--edges", p(&edges), "--attributes", p(&attrs), "--alphas", "0.5", "--topks", "5", "--seeds", "1",
    ];
    args.extend(SMALL);
    let r = abrw(&args);
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    let csv = String::from_utf8(r.stdout).unwrap();
    let means: Vec<&str> = csv.lines().filter(|l| l.contains(",mean,")).collect();
    assert_eq!(means.len(), 1);
    assert!(means[0].starts_with("alpha=0.5;k=5,mean,auc,"));
}

#[test]
fn eval_missing_input_is_usage_error() {
    let r = abrw(&["eval", "nc", "--embedding", "z.emb"]);
    assert_eq!(r.status.code(), Some(2));
    let r = abrw(&["eval", "lp", "--samples", "s"]);
    assert_eq!(r.status.code(), Some(2));
}
