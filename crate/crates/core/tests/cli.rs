mod common;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use common::{StubMode, StubServer};
use rand::SeedableRng;

fn fixture() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/tr_fixture.txt")
}

fn hece(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_hece"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(stdin.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr_lines(o: &Output) -> usize {
    String::from_utf8_lossy(&o.stderr).lines().count()
}

fn build_vocab(dir: &Path) -> PathBuf {
    let path = dir.join("vocab.json");
    let out = hece(
        &[
            "build-vocab",
            "--corpus",
            fixture().to_str().unwrap(),
            "-o",
            path.to_str().unwrap(),
        ],
        "",
    );
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    path
}

#[test]
fn syllabify_prints_hyphenated_words() {
    let out = hece(&["syllabify"], "Atasözleri geçmişten\nAnkara'da 1923\n");
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout(&out),
        "a-ta-söz-le-ri geç-miş-ten\nan-ka-ra ' da 1923\n"
    );
}

#[test]
fn encode_decode_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let vocab = build_vocab(dir.path());
    let v = vocab.to_str().unwrap();
    let text = std::fs::read_to_string(fixture()).unwrap();

    let enc = hece(&["encode", "--vocab", v, "--mode", "lossless"], &text);
    assert_eq!(enc.status.code(), Some(0));
    let records = stdout(&enc);
    assert_eq!(records.lines().count(), text.lines().count());
    assert!(records.lines().all(|l| l.starts_with("{\"ids\":[")));

    let dec = hece(&["decode", "--vocab", v, "--mode", "lossless"], &records);
    assert_eq!(dec.status.code(), Some(0));
    let expected: String = text.lines().map(|l| hece::normalize(l) + "\n").collect();
    assert_eq!(stdout(&dec), expected);
}

#[test]
fn model_encoding_is_wrapped_and_truncated() {
    let dir = tempfile::tempdir().unwrap();
    let vocab = build_vocab(dir.path());
    let out = hece(
        &[
            "encode",
            "--vocab",
            vocab.to_str().unwrap(),
            "--model",
            "--max-len",
            "5",
        ],
        "atasözleri geçmişten\n",
    );
    let rec: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    let ids: Vec<u64> = serde_json::from_value(rec["ids"].clone()).unwrap();
    assert_eq!(ids.len(), 5);
    assert_eq!(ids[0], 2);
    assert_eq!(ids[4], 3);
}

#[test]
fn stats_reports_density() {
    let out = hece(&["stats", "--corpus", fixture().to_str().unwrap()], "");
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(v["tokens_per_word"].as_f64().unwrap() > 1.0);
    assert!(v["word_count"].as_u64().unwrap() > 500);
}

#[test]
fn chunk_emits_windows_per_line() {
    let dir = tempfile::tempdir().unwrap();
    let vocab = build_vocab(dir.path());
    let out = hece(
        &["chunk", "--vocab", vocab.to_str().unwrap(), "--size", "4"],
        "a-ta-söz-le-ri\nev\n",
    );
    assert_eq!(out.status.code(), Some(0));
    let lines: Vec<serde_json::Value> = stdout(&out)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    // 9 flat tokens ("a","-","ta",...) in windows of 4 step 2, plus one for "ev".
    assert_eq!(lines.len(), 5);
    assert_eq!(lines[0]["passage_id"], "0");
    assert_eq!(lines[4]["passage_id"], "1");
    assert_eq!(lines[3]["start"], 5);
}

#[test]
fn missing_required_flag_is_a_usage_error() {
    let out = hece(&["encode"], "ev\n");
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stderr_lines(&out), 1);
    let out = hece(&["frobnicate"], "");
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stderr_lines(&out), 1);
}

#[test]
fn bad_input_is_a_data_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = hece(
        &[
            "stats",
            "--corpus",
            dir.path().join("missing.txt").to_str().unwrap(),
        ],
        "",
    );
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_lines(&out), 1);

    let garbage = dir.path().join("vocab.json");
    std::fs::write(&garbage, "{\"format\":\"other\"}").unwrap();
    let out = hece(&["encode", "--vocab", garbage.to_str().unwrap()], "ev\n");
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_lines(&out), 1);

    let vocab = build_vocab(dir.path());
    let out = hece(
        &["decode", "--vocab", vocab.to_str().unwrap()],
        "{\"ids\":[999999]}\n",
    );
    assert_eq!(out.status.code(), Some(2));
}

fn write_dataset(dir: &Path) -> (PathBuf, PathBuf) {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
    let ds = common::synthetic_dataset(&mut rng, 15, 40, 4);
    let ds_path = dir.join("ds.json");
    std::fs::write(&ds_path, serde_json::to_string(&ds).unwrap()).unwrap();
    let corpus = dir.join("corpus.txt");
    let text: String = ds
        .passages()
        .iter()
        .map(|p| p.text.clone() + "\n")
        .collect();
    std::fs::write(&corpus, text).unwrap();
    let vocab = dir.join("vocab.json");
    let out = hece(
        &[
            "build-vocab",
            "--corpus",
            corpus.to_str().unwrap(),
            "-o",
            vocab.to_str().unwrap(),
        ],
        "",
    );
    assert_eq!(out.status.code(), Some(0));
    (ds_path, vocab)
}

#[test]
fn tfidf_eval_prints_a_table() {
    let dir = tempfile::tempdir().unwrap();
    let (ds, vocab) = write_dataset(dir.path());
    let out = hece(
        &[
            "eval",
            "--dataset",
            ds.to_str().unwrap(),
            "--vocab",
            vocab.to_str().unwrap(),
            "--chunk-sizes",
            "4,8,512",
            "--threads",
            "2",
        ],
        "",
    );
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "chunk_size\tstride\tchunks\trecall@5");
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("4\t2\t"));
}

#[test]
fn remote_eval_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (ds, vocab) = write_dataset(dir.path());
    let server = StubServer::start(24, StubMode::Ok);
    let args = [
        "eval",
        "--dataset",
        ds.to_str().unwrap(),
        "--vocab",
        vocab.to_str().unwrap(),
        "--embedder",
        "remote",
        "--endpoint",
        &server.url,
        "--dim",
        "24",
        "--format",
        "jsonl",
    ];
    let a = hece(&args, "");
    let b = hece(&args, "");
    assert_eq!(
        a.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&a.stderr)
    );
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout(&a).lines().count(), 9);
}

#[test]
fn embedder_failures_exit_with_code_3() {
    let dir = tempfile::tempdir().unwrap();
    let (ds, vocab) = write_dataset(dir.path());
    let port = std::net::TcpListener::bind("127.0.0.1:0")
        .unwrap()
        .local_addr()
        .unwrap()
        .port();
    let endpoint = format!("http://127.0.0.1:{port}");
    let base = [
        "eval",
        "--dataset",
        ds.to_str().unwrap(),
        "--vocab",
        vocab.to_str().unwrap(),
        "--embedder",
        "remote",
        "--dim",
        "24",
        "--timeout-secs",
        "2",
        "--endpoint",
    ];

    let out = hece(&[&base[..], &[endpoint.as_str()]].concat(), "");
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(stderr_lines(&out), 1);

    let server = StubServer::start(24, StubMode::WrongDim);
    let out = hece(&[&base[..], &[server.url.as_str()]].concat(), "");
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(stderr_lines(&out), 1);
}
