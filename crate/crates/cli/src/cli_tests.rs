use std::path::Path;

use clap::Parser;

use crate::{render, Cli};

struct Output {
    code: i32,
    stdout: Vec<u8>,
    stderr: String,
}

/// Parses and runs in process, mirroring the binary's exit codes.
fn rmrll(args: &[&str]) -> Output {
    let cli = match Cli::try_parse_from(std::iter::once("rmrll").chain(args.iter().copied())) {
        Ok(cli) => cli,
        Err(e) => return Output { code: e.exit_code(), stdout: Vec::new(), stderr: e.to_string() },
    };
    match render(&cli.command) {
        Ok((settings, bytes)) => match settings.out {
            Some(path) => {
                std::fs::write(path, bytes).unwrap();
                Output { code: 0, stdout: Vec::new(), stderr: String::new() }
            }
            None => Output { code: 0, stdout: bytes, stderr: String::new() },
        },
        Err(e) => Output { code: e.exit_code(), stdout: Vec::new(), stderr: e.to_string() },
    }
}

fn schema(name: &str) -> jsonschema::Validator {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schema").join(format!("{name}.schema.json"));
    let text = std::fs::read_to_string(path).unwrap();
    jsonschema::validator_for(&serde_json::from_str(&text).unwrap()).unwrap()
}

fn assert_valid(name: &str, stdout: &[u8]) {
    let value: serde_json::Value = serde_json::from_slice(stdout).unwrap();
    let v = schema(name);
    let errors: Vec<String> = v.iter_errors(&value).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{name}: {errors:?}");
}

#[test]
fn json_outputs_match_schemas() {
    let cases: &[(&str, &[&str])] = &[
        ("rates", &["rates", "--m", "2..12", "--d", "0,1,3", "--format", "json"]),
        ("bounds_curve", &["bounds", "--grid-step", "0.05", "--format", "json"]),
        ("bounds_chain", &["bounds", "--m", "4..24", "--format", "json"]),
        ("simulate", &["simulate", "--m", "5", "--epsilon", "0.4", "--trials", "30", "--format", "json"]),
        ("simulate", &["simulate", "--m", "4", "--p", "0.1", "--trials", "30", "--timing", "--format", "json"]),
        ("weights", &["weights", "--m", "4", "--r", "0..4", "--format", "json"]),
        ("channel_cap", &["channel-cap", "--epsilon", "0.1", "--p", "0.2", "--sigma", "0.9", "--d", "1", "--format", "json"]),
        ("oracle", &["oracle", "--m", "4", "--r", "2"]),
    ];
    for (name, args) in cases {
        let out = rmrll(args);
        assert_eq!(out.code, 0, "{args:?}: {}", out.stderr);
        assert_valid(name, &out.stdout);
    }
}

#[test]
fn simulate_reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for path in [&a, &b] {
        let out = rmrll(&[
            "simulate", "--m", "6..8", "--epsilon", "0.3,0.5", "--trials", "300", "--seed", "42", "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(out.code, 0);
    }
    let (a, b) = (std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
    assert!(!a.is_empty());
    assert_eq!(a, b);
    let other = rmrll(&["simulate", "--m", "6..8", "--epsilon", "0.3,0.5", "--trials", "300", "--seed", "43"]);
    assert_ne!(other.stdout, a);
}

#[test]
fn erasure_free_channel_gives_zero_column() {
    let out = rmrll(&["simulate", "--m", "4..8", "--d", "1,3", "--epsilon", "0", "--trials", "50"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let pb = header.iter().position(|&h| h == "pb").unwrap();
    let mut rows = 0;
    for line in lines {
        assert_eq!(line.split(',').nth(pb), Some("0.0"));
        rows += 1;
    }
    assert_eq!(rows, 10);
}

#[test]
fn exit_codes() {
    assert_eq!(rmrll(&["rates", "--rate", "1.5"]).code, 2);
    assert_eq!(rmrll(&["simulate", "--m", "7"]).code, 2);
    assert_eq!(rmrll(&["rates", "--bogus", "1"]).code, 2);
    assert_eq!(rmrll(&["simulate", "--m", "9", "--p", "0.1"]).code, 3);
    assert_eq!(rmrll(&["oracle", "--m", "8", "--r", "3"]).code, 3);
    assert_eq!(rmrll(&["oracle", "--m", "3", "--r", "1"]).code, 0);
}

#[test]
fn config_file_and_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    std::fs::write(&cfg, "# weights of RM(3, r)\nm = 3\nr = 1\nformat = csv\n").unwrap();
    let out = rmrll(&["weights", "--config", cfg.to_str().unwrap()]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "m,r,w,count\n3,1,0,1\n3,1,4,14\n3,1,8,1\n");
    let out = rmrll(&["weights", "--config", cfg.to_str().unwrap(), "--r", "0"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "m,r,w,count\n3,0,0,1\n3,0,8,1\n");
    std::fs::write(&cfg, "m = 3\ncolour = blue\n").unwrap();
    let out = rmrll(&["weights", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("unknown key"));
}

#[test]
fn bounds_curve_rows() {
    let out = rmrll(&["bounds"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("# "));
    let rows: Vec<Vec<f64>> = text
        .lines()
        .skip(2)
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 99);
    for row in &rows {
        assert_eq!(row[1], row[0] / 2.0);
        assert!(row[2] <= row[3]);
    }
}
