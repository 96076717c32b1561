use std::path::Path;
use std::process::Command;

use cdh::cli::{ExperimentConfig, REGISTRY};
use proptest::prelude::*;

fn cdh(args: &[&str], out: &Path) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_cdh"))
        .args(args)
        .env("CDH_OUTPUT_DIR", out)
        .output()
        .unwrap()
}

fn read_all(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let p = e.unwrap().path();
            (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap())
        })
        .collect();
    files.sort();
    files
}

#[test]
fn list_names_every_experiment() {
    let dir = tempfile::tempdir().unwrap();
    let out = cdh(&["list"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    for e in &REGISTRY {
        assert!(text.contains(e.name), "{}", e.name);
    }
}

#[test]
fn runs_are_byte_identical() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for dir in [&a, &b] {
        let out = cdh(&["run", "contraction", "--times", "0.05,0.1,0.2"], dir.path());
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let fa = read_all(&a.path().join("contraction"));
    assert!(fa.iter().any(|(n, _)| n == "series.csv"));
    assert_eq!(fa, read_all(&b.path().join("contraction")));
}

#[test]
fn config_file_and_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("gap.cfg");
    std::fs::write(&cfg, "experiment=counterexample_gap\ntimes=1,2\n").unwrap();
    let out = cdh(&["run", "counterexample_gap", "--config", cfg.to_str().unwrap(), "--times", "3,4"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let written = std::fs::read_to_string(dir.path().join("counterexample_gap/config.txt")).unwrap();
    assert!(written.contains("times=3,4"), "{written}");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let code = |args: &[&str]| cdh(args, dir.path()).status.code();
    assert_eq!(code(&["run", "no_such_experiment"]), Some(2));
    assert_eq!(code(&["run", "hotspot", "--times", "3,1"]), Some(2));
    assert_eq!(code(&["run", "hotspot", "--frobnicate", "1"]), Some(2));
    assert_eq!(code(&["run", "hotspot", "--dim", "0"]), Some(2));
    assert_eq!(code(&["verify", "--filter", "nothing matches this"]), Some(2));
    assert_eq!(code(&["verify", "--filter", "counterexample"]), Some(0));
    // the smooth datum decays at rate -1, short of the required -1.5
    assert_eq!(code(&["verify", "--filter", "rate_smooth"]), Some(1));
}

#[test]
fn config_errors_name_line_and_field() {
    let err = ExperimentConfig::parse("experiment=hotspot\ndim=zero\n").unwrap_err().to_string();
    assert!(err.contains("line 2") && err.contains("dim"), "{err}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn serialized_configs_reparse_identically(
        which in 0..REGISTRY.len(),
        dim in 1u32..=8,
        seed in any::<u64>(),
        times in proptest::collection::vec(0.01f64..10.0, 1..6),
        points in 16usize..10000,
    ) {
        let e = &REGISTRY[which];
        let mut times = times;
        times.sort_by(f64::total_cmp);
        times.dedup();
        let list = times.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(",");
        let text = format!(
            "experiment={}\ndim={dim}\nseed={seed}\ntimes={list}\ngrid.points={points}\n",
            e.name
        );
        let first = ExperimentConfig::parse(&text);
        prop_assume!(first.is_ok());
        let first = first.unwrap();
        let again = ExperimentConfig::parse(&first.serialize()).unwrap();
        prop_assert_eq!(&first, &again);
        prop_assert_eq!(first.serialize(), again.serialize());
    }
}
