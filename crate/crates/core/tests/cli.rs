use std::path::Path;
use std::process::{Command, Output};

fn cli(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chain-census"))
        .current_dir(dir)
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn experiment_csv_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["--seed", "11", "experiment", "tl3-center", "--k", "2", "--n", "16,25,36"];
    let a = cli(dir.path(), &args);
    let b = cli(dir.path(), &args);
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(text.starts_with("construction,k,n,chains,walks,incidences,seconds\n"));
    assert!(text.lines().skip(1).all(|l| l.ends_with(",NA")));
}

#[test]
fn threads_do_not_change_results() {
    let dir = tempfile::tempdir().unwrap();
    let one = cli(dir.path(), &["--threads", "1", "experiment", "orthogonal", "--k", "3", "--n", "8,12,16"]);
    let four = cli(dir.path(), &["--threads", "4", "experiment", "orthogonal", "--k", "3", "--n", "8,12,16"]);
    assert_eq!(stdout(&one).lines().count(), 4);
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn generate_then_count() {
    let dir = tempfile::tempdir().unwrap();
    let g = cli(dir.path(), &["generate", "planar", "--k", "2", "--n", "30", "--out", "p.manifest"]);
    assert!(g.status.success(), "{}", String::from_utf8_lossy(&g.stderr));
    let c = cli(dir.path(), &["count", "p.manifest"]);
    assert_eq!(stdout(&c), "chains 900\nwalks 900\nincidences 60\n");

    let g = cli(dir.path(), &["generate", "star", "--k", "2", "--n", "8", "--out", "s.manifest"]);
    assert!(g.status.success());
    let t = cli(dir.path(), &["count-tree", "s.tree", "--manifest", "s.manifest"]);
    assert_eq!(stdout(&t), "embeddings 16\nhomomorphisms 16\n");
}

#[test]
fn point_file_commands() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("a.pts"), "dim 2 count 3 mode exact\n0 0\n1 0\n0 1\n").unwrap();
    let i = cli(dir.path(), &["incidences", "a.pts", "a.pts", "--d2", "1"]);
    assert_eq!(stdout(&i), "4\n");
    let r = cli(dir.path(), &["rich", "a.pts", "a.pts", "--d2", "1", "--r", "2"]);
    assert_eq!(stdout(&r), "1\n");
    let bad = cli(dir.path(), &["incidences", "missing.pts", "a.pts", "--d2", "1"]);
    assert!(!bad.status.success());
}

#[test]
fn verify_reports_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let ok = cli(dir.path(), &["verify", "closed-form", "--construction", "planar", "--k", "2", "--n", "50"]);
    assert!(ok.status.success());
    assert!(stdout(&ok).starts_with("PASS closed-form"));

    let inapplicable = cli(dir.path(), &["verify", "covering", "--construction", "planar", "--n", "5"]);
    assert!(!inapplicable.status.success());

    // a zero tolerance cannot be met by the grid-based sweep
    let fail = cli(
        dir.path(),
        &["experiment", "planar-k1mod3", "--k", "1", "--n", "16,36,64", "--tolerance", "0"],
    );
    assert_eq!(fail.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&fail.stderr).contains("FAIL"));
}

#[test]
fn decompose_lists_sequences() {
    let dir = tempfile::tempdir().unwrap();
    cli(dir.path(), &["generate", "orthogonal", "--k", "2", "--n", "6", "--out", "o.manifest"]);
    let d = cli(dir.path(), &["--eps", "1/2", "decompose", "o.manifest"]);
    let text = stdout(&d);
    assert!(text.starts_with("n 6 eps 1/2 sequences 1"), "{text}");
    let v = cli(dir.path(), &["verify", "covering", "--manifest", "o.manifest"]);
    assert!(v.status.success());
}
