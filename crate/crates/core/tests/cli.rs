use std::path::Path;
use std::process::{Command, Output};

use lettercorr::cli::split_command_line;

const BIN: &str = env!("CARGO_BIN_EXE_lettercorr");

const SAMPLE: &str = "Call me Ishmael. Some years ago, never mind how long precisely, having \
little or no money in my purse, and nothing particular to interest me on shore, I thought \
I would sail about a little and see the watery part of the world. ";

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("spawn lettercorr")
}

fn ok(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn sample_file(dir: &Path, repeats: usize) -> String {
    let path = dir.join("sample.txt");
    std::fs::write(&path, SAMPLE.repeat(repeats)).unwrap();
    path.to_str().unwrap().to_owned()
}

fn body(s: &str) -> Vec<&str> {
    s.lines().filter(|l| !l.starts_with('#')).collect()
}

#[test]
fn normalize_writes_header_and_symbols() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("in.txt");
    std::fs::write(&path, "Hello, World!\n\tÉcole 42").unwrap();
    let out = ok(&["normalize", "-i", path.to_str().unwrap()]);
    assert!(out.starts_with("# lettercorr "));
    assert_eq!(body(&out).concat(), "hello world cole ");
    let bare = ok(&["normalize", "-i", path.to_str().unwrap(), "--no-header", "--trim"]);
    assert_eq!(bare, "hello world cole");
}

#[test]
fn empty_input_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("empty.txt");
    std::fs::write(&path, "").unwrap();
    let out = run(&["walk", "-i", path.to_str().unwrap(), "--letter", "a"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("empty text"));
}

#[test]
fn missing_input_fails() {
    let out = run(&["walk", "-i", "/nonexistent/file.txt"]);
    assert!(!out.status.success());
}

#[test]
fn walk_output_is_reproducible_and_replayable() {
    let dir = tempfile::tempdir().unwrap();
    let input = sample_file(dir.path(), 200);
    let first = ok(&["walk", "-i", &input, "--letter", "a,e", "--fit", "10:200"]);
    let second = ok(&["walk", "-i", &input, "--letter", "a,e", "--fit", "10:200"]);
    assert_eq!(first, second);

    let cmd = first
        .lines()
        .find_map(|l| l.strip_prefix("# command: "))
        .expect("command header");
    let argv = split_command_line(cmd);
    assert_eq!(argv[0], "lettercorr");
    let replay: Vec<&str> = argv[1..].iter().map(String::as_str).collect();
    assert_eq!(ok(&replay), first);

    assert!(first.lines().any(|l| l.starts_with("# fit letter=a k_min=10 k_max=200 alpha=")));
    assert!(body(&first).contains(&"k\tF"));
}

#[test]
fn synth_feeds_walk() {
    let dir = tempfile::tempdir().unwrap();
    let seq = dir.path().join("synth.txt");
    let seq = seq.to_str().unwrap();
    ok(&["synth", "--length", "40000", "--burst-len", "1000", "--seed", "7", "-o", seq]);
    let text = std::fs::read_to_string(seq).unwrap();
    assert!(body(&text).concat().bytes().all(|b| b == b'a' || b == b' '));

    let walk = ok(&["walk", "-i", seq, "--letter", "a"]);
    // Symbol files are read verbatim, repeated spaces included.
    assert!(walk.contains("input_format=symbols N=40000"));
}

#[test]
fn shuffle_respects_seed() {
    let dir = tempfile::tempdir().unwrap();
    let input = sample_file(dir.path(), 20);
    let a = ok(&["shuffle", "-i", &input, "--mode", "full-letter", "--seed", "3"]);
    let b = ok(&["shuffle", "-i", &input, "--mode", "full-letter", "--seed", "3"]);
    let c = ok(&["shuffle", "-i", &input, "--mode", "full-letter", "--seed", "4"]);
    assert_eq!(a, b);
    assert_ne!(body(&a), body(&c));

    let env = Command::new(BIN)
        .args(["shuffle", "-i", &input, "--mode", "full-letter"])
        .env("LETTERCORR_SEED", "3")
        .output()
        .unwrap();
    assert_eq!(body(&String::from_utf8(env.stdout).unwrap()), body(&a));
}

#[test]
fn table_headers() {
    let dir = tempfile::tempdir().unwrap();
    let input = sample_file(dir.path(), 400);
    let cases: [(&[&str], &str); 5] = [
        (&["jsd-profile", "--segment-length", "500"], "position\traw\tfluct\tnormalized"),
        (&["zipf", "--fit-range", "1:20"], "rank\tword\tcount"),
        (&["bands"], "band\t"),
        (&["band-jsd", "--segment-length", "2000"], "band\tword_types\tletter_share\tmean_normalized"),
        (&["halves", "--ratio", "the:a"], "word\tfirst\tsecond"),
    ];
    for (args, header) in cases {
        let mut full = vec![args[0], "-i", &input];
        full.extend_from_slice(&args[1..]);
        let out = ok(&full);
        assert!(
            body(&out).first().is_some_and(|l| l.starts_with(header)),
            "{args:?}: {out}"
        );
    }
}

#[test]
fn bad_flags_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let input = sample_file(dir.path(), 10);
    for args in [
        vec!["walk", "-i", &input, "--fit", "200:10"],
        vec!["walk", "-i", &input, "--letter", "7"],
        vec!["shuffle", "-i", &input, "--mode", "window-sample", "--window", "1"],
        vec!["synth", "--base-p", "1.5"],
    ] {
        assert!(!run(&args).status.success(), "{args:?} should fail");
    }
}
