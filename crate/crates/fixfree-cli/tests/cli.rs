use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_fixfree")
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().expect("binary runs")
}

fn run_with_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(bin()).args(args).env(key, value).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn write(dir: &Path, name: &str, content: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, content).unwrap();
    path
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn construct_small_vector() {
    let dir = tempfile::tempdir().unwrap();
    let lengths = write(dir.path(), "v.txt", "1 1\n");
    let out = run(&["construct", "--lengths", path_str(&lengths)]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "w1\t0\nw2\t11\n");
}

#[test]
fn construct_rejected_vector_prints_both_thresholds() {
    let dir = tempfile::tempdir().unwrap();
    let lengths = write(dir.path(), "v.txt", "1 1 1\n");
    let out = run(&["construct", "--lengths", path_str(&lengths)]);
    assert_eq!(out.status.code(), Some(1));
    let err = stderr(&out);
    assert!(err.starts_with("error:"), "got {:?}", err);
    assert!(err.contains("3/4") && err.contains("5/8"), "got {:?}", err);
    assert!(err.contains("sufficient, not necessary"), "got {:?}", err);
    assert!(err.contains("oracle"), "got {:?}", err);
}

#[test]
fn construct_then_verify_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    for (i, (vector, words)) in [
        ("0 0 2 1 2 6 20", 31),
        ("1 0 0 4", 5),
        ("0 2 1 1", 4),
        ("0 1 2 2", 5),
    ]
    .iter()
    .enumerate()
    {
        let lengths = write(dir.path(), &format!("v{}.txt", i), vector);
        let table = dir.path().join(format!("code{}.tsv", i));
        let out =
            run(&["construct", "--lengths", path_str(&lengths), "--out", table.to_str().unwrap()]);
        assert!(out.status.success(), "construct {} failed: {}", vector, stderr(&out));
        let table_text = std::fs::read_to_string(&table).unwrap();
        assert_eq!(table_text.lines().count(), *words, "table size for {}", vector);

        let out = run(&["verify", "--code", table.to_str().unwrap()]);
        assert!(out.status.success(), "verify {} failed", vector);
        assert_eq!(stdout(&out), "fix-free: yes\n");
    }
}

#[test]
fn construct_trace_goes_to_stderr() {
    let dir = tempfile::tempdir().unwrap();
    let lengths = write(dir.path(), "v.txt", "0 1 2\n");
    let out = run(&["construct", "--lengths", path_str(&lengths), "--trace"]);
    assert!(out.status.success());
    let err = stderr(&out);
    assert!(err.lines().count() == 3, "one line per step: {:?}", err);
    assert!(err.contains("t=1") && err.contains("demand="), "got {:?}", err);
}

#[test]
fn verify_flags_violations() {
    let dir = tempfile::tempdir().unwrap();
    let table = write(dir.path(), "bad.tsv", "a\t0\nb\t01\n");
    let out = run(&["verify", "--code", path_str(&table)]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout(&out), "fix-free: no\n");
    assert!(stderr(&out).contains("prefix"), "got {:?}", stderr(&out));

    // duplicate words reach the verifier rather than failing the parse
    let table = write(dir.path(), "dup.tsv", "a\t10\nb\t10\n");
    let out = run(&["verify", "--code", path_str(&table)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("twice"), "got {:?}", stderr(&out));
}

#[test]
fn design_reports_and_emits_table() {
    let dir = tempfile::tempdir().unwrap();
    let dist = write(dir.path(), "d.tsv", "x\t0.5\ny\t0.5\n");
    let out = run(&["design", "--dist", path_str(&dist)]);
    assert!(out.status.success());
    let table = stdout(&out);
    assert_eq!(table, "x\t00\ny\t11\n");
    let report = stderr(&out);
    assert!(report.contains("kraft       1/2"), "got {:?}", report);
    assert!(report.contains("redundancy  1.000000"), "got {:?}", report);
    assert!(report.contains("bound       1.678072"), "got {:?}", report);

    let out = run(&["design", "--dist", path_str(&dist), "--kv"]);
    assert!(stderr(&out).contains("kraft=1/2"), "got {:?}", stderr(&out));
    assert!(stderr(&out).contains("lengths=2,2"), "got {:?}", stderr(&out));
}

#[test]
fn design_rejects_bad_distributions() {
    let dir = tempfile::tempdir().unwrap();
    let dist = write(dir.path(), "neg.tsv", "x\t0.5\ny\t-0.5\n");
    let out = run(&["design", "--dist", path_str(&dist)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).starts_with("error:"));

    let dist = write(dir.path(), "sum.tsv", "x\t0.5\ny\t0.4\n");
    let out = run(&["design", "--dist", path_str(&dist)]);
    assert_eq!(out.status.code(), Some(2));

    // a length cap that cannot hold the design is a domain failure
    let dist = write(dir.path(), "ok.tsv", "x\t0.5\ny\t0.5\n");
    let out = run(&["design", "--dist", path_str(&dist), "--max-len", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("cap"), "got {:?}", stderr(&out));
}

#[test]
fn encode_decode_roundtrip_is_byte_exact() {
    let dir = tempfile::tempdir().unwrap();
    let dist = write(dir.path(), "d.tsv", "a\t0.6\nb\t0.25\nc\t0.15\n");
    let table = dir.path().join("code.tsv");
    assert!(run(&["design", "--dist", path_str(&dist), "--out", table.to_str().unwrap()])
        .status
        .success());

    let message = "a b a c a a b\n";
    let msg_path = write(dir.path(), "msg.txt", message);
    let bits_path = dir.path().join("msg.fxf");
    let out = run(&[
        "encode",
        "--code",
        table.to_str().unwrap(),
        "--in",
        path_str(&msg_path),
        "--out",
        bits_path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(&std::fs::read(&bits_path).unwrap()[..4], b"FXF1");

    for direction in ["forward", "backward"] {
        let out = run(&[
            "decode",
            "--code",
            table.to_str().unwrap(),
            "--in",
            bits_path.to_str().unwrap(),
            "--direction",
            direction,
        ]);
        assert!(out.status.success(), "{}", stderr(&out));
        assert_eq!(stdout(&out), message, "direction {}", direction);
    }
}

#[test]
fn encode_unknown_symbol_is_domain_failure() {
    let dir = tempfile::tempdir().unwrap();
    let table = write(dir.path(), "code.tsv", "a\t0\nb\t11\n");
    let msg = write(dir.path(), "msg.txt", "a z\n");
    let out = run(&[
        "encode",
        "--code",
        path_str(&table),
        "--in",
        path_str(&msg),
        "--out",
        dir.path().join("out.fxf").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("\"z\""), "got {:?}", stderr(&out));
}

#[test]
fn decode_failure_reports_offset() {
    let dir = tempfile::tempdir().unwrap();
    let table = write(dir.path(), "code.tsv", "a\t0\nb\t11\nc\t101\n");
    // bit_count 2, payload 01...... : parses "a" then dangles
    let mut bytes = b"FXF1".to_vec();
    bytes.extend_from_slice(&2u64.to_be_bytes());
    bytes.push(0b0100_0000);
    let bits = dir.path().join("short.fxf");
    std::fs::write(&bits, bytes).unwrap();
    let out = run(&[
        "decode",
        "--code",
        path_str(&table),
        "--in",
        bits.to_str().unwrap(),
        "--direction",
        "forward",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("offset 1"), "got {:?}", stderr(&out));
}

#[test]
fn corrupt_bitstream_is_a_parse_failure() {
    let dir = tempfile::tempdir().unwrap();
    let table = write(dir.path(), "code.tsv", "a\t0\n");
    let bits = write(dir.path(), "bad.fxf", "not a bitstream");
    let out = run(&[
        "decode",
        "--code",
        path_str(&table),
        "--in",
        path_str(&bits),
        "--direction",
        "forward",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn oracle_decides_existence() {
    let dir = tempfile::tempdir().unwrap();
    let no = write(dir.path(), "no.txt", "1 2\n");
    let out = run(&["oracle", "--lengths", path_str(&no)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("no fix-free code exists"), "got {:?}", stderr(&out));

    let yes = write(dir.path(), "yes.txt", "1 1 1\n");
    let out = run(&["oracle", "--lengths", path_str(&yes)]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("fix-free code exists"), "got {:?}", stdout(&out));

    let out = run(&["oracle", "--lengths", path_str(&yes), "--max-nodes", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("inconclusive"), "got {:?}", stderr(&out));
}

#[test]
fn analyze_reports_metrics() {
    let dir = tempfile::tempdir().unwrap();
    let dist = write(dir.path(), "d.tsv", "a\t0.75\nb\t0.25\n");
    let table = write(dir.path(), "code.tsv", "a\t00\nb\t11\n");
    let out = run(&["analyze", "--dist", path_str(&dist), "--code", path_str(&table)]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("entropy     0.811278"), "got {:?}", text);
    assert!(text.contains("avg_length  2.000000"), "got {:?}", text);
    assert!(text.contains("redundancy  1.188722"), "got {:?}", text);

    let missing = write(dir.path(), "d2.tsv", "a\t0.5\nz\t0.5\n");
    let out = run(&["analyze", "--dist", path_str(&missing), "--code", path_str(&table)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("\"z\""), "got {:?}", stderr(&out));
}

#[test]
fn max_len_env_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let lengths = write(dir.path(), "v.txt", "0 0 2 1 2 6 20\n");
    // env cap below the needed length 7 refuses
    let out = run_with_env(
        &["construct", "--lengths", path_str(&lengths)],
        "FIXFREE_MAX_LEN",
        "6",
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("cap"), "got {:?}", stderr(&out));
    // the flag wins over the env
    let out = Command::new(bin())
        .args(["construct", "--lengths", path_str(&lengths), "--max-len", "7"])
        .env("FIXFREE_MAX_LEN", "6")
        .output()
        .unwrap();
    assert!(out.status.success());

    let out = run_with_env(
        &["construct", "--lengths", path_str(&lengths)],
        "FIXFREE_MAX_LEN",
        "junk",
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_two() {
    let out = run(&["construct"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["construct", "--lengths", "/definitely/not/here"]);
    assert_eq!(out.status.code(), Some(2));
}
