use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn plumbkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_plumbkit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
        .display()
        .to_string()
}

fn write_temp(dir: &tempfile::TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

/// Minimal reader for undirected DOT: `graph ID { stmt* }` with node
/// statements carrying attribute lists and `--` edge chains. Returns the
/// node labels and the edge set, or a message naming the first bad token.
type DotGraph = (BTreeMap<String, String>, BTreeSet<(String, String)>);

fn read_dot(text: &str) -> Result<DotGraph, String> {
    let mut tokens = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            c if c.is_whitespace() => {
                chars.next();
            }
            '{' | '}' | '[' | ']' | ';' | ',' | '=' => {
                tokens.push(c.to_string());
                chars.next();
            }
            '"' => {
                chars.next();
                let mut s = String::from("\"");
                loop {
                    match chars.next() {
                        Some('\\') => s.push(chars.next().ok_or("dangling escape")?),
                        Some('"') => break,
                        Some(c) => s.push(c),
                        None => return Err("unterminated string".into()),
                    }
                }
                tokens.push(s);
            }
            '-' if text[text.len() - chars.clone().count()..].starts_with("--") => {
                chars.next();
                chars.next();
                tokens.push("--".into());
            }
            c if c.is_alphanumeric() || c == '_' || c == '-' || c == '.' => {
                let mut s = String::new();
                while let Some(&c) = chars
                    .peek()
                    .filter(|c| c.is_alphanumeric() || **c == '_' || **c == '-' || **c == '.')
                {
                    s.push(c);
                    chars.next();
                }
                tokens.push(s);
            }
            other => return Err(format!("unexpected character {other:?}")),
        }
    }
    let id = |t: &str| t.strip_prefix('"').unwrap_or(t).to_string();
    let is_id = |t: &str| !matches!(t, "{" | "}" | "[" | "]" | ";" | "," | "=" | "--");
    let mut pos = 0;
    let expect = |want: &str, pos: &mut usize| -> Result<(), String> {
        match tokens.get(*pos) {
            Some(t) if t == want => {
                *pos += 1;
                Ok(())
            }
            other => Err(format!("expected {want}, found {other:?}")),
        }
    };
    expect("graph", &mut pos)?;
    if tokens.get(pos).is_some_and(|t| is_id(t)) {
        pos += 1;
    }
    expect("{", &mut pos)?;
    let mut nodes = BTreeMap::new();
    let mut edges = BTreeSet::new();
    loop {
        let Some(t) = tokens.get(pos) else {
            return Err("missing }".into());
        };
        if t == "}" {
            pos += 1;
            break;
        }
        if !is_id(t) {
            return Err(format!("expected statement, found {t}"));
        }
        let mut chain = vec![id(t)];
        pos += 1;
        while tokens.get(pos).is_some_and(|t| t == "--") {
            let next = tokens
                .get(pos + 1)
                .filter(|t| is_id(t))
                .ok_or("edge without endpoint")?;
            chain.push(id(next));
            pos += 2;
        }
        let mut attrs = BTreeMap::new();
        if tokens.get(pos).is_some_and(|t| t == "[") {
            pos += 1;
            while tokens.get(pos).is_some_and(|t| t != "]") {
                let key = tokens
                    .get(pos)
                    .filter(|t| is_id(t))
                    .ok_or("bad attribute")?;
                expect("=", &mut { pos + 1 }).map_err(|e| format!("attribute: {e}"))?;
                let value = tokens
                    .get(pos + 2)
                    .filter(|t| is_id(t))
                    .ok_or("bad attribute value")?;
                attrs.insert(id(key), id(value));
                pos += 3;
                if tokens.get(pos).is_some_and(|t| t == "," || t == ";") {
                    pos += 1;
                }
            }
            expect("]", &mut pos)?;
        }
        if tokens.get(pos).is_some_and(|t| t == ";") {
            pos += 1;
        }
        if chain.len() == 1 {
            nodes.insert(
                chain.pop().unwrap(),
                attrs.remove("label").unwrap_or_default(),
            );
        } else {
            for w in chain.windows(2) {
                let (a, b) = if w[0] < w[1] {
                    (&w[0], &w[1])
                } else {
                    (&w[1], &w[0])
                };
                edges.insert((a.clone(), b.clone()));
            }
        }
    }
    if pos != tokens.len() {
        return Err("trailing tokens after graph body".into());
    }
    Ok((nodes, edges))
}

#[test]
fn dot_reader_rejects_malformed_input() {
    assert!(read_dot("graph g { \"a\" -- ; }").is_err());
    assert!(read_dot("digraph g { }").is_err());
    assert!(read_dot("graph g { \"a\" [label=\"1\"]; ").is_err());
    assert!(read_dot("graph g { a -- b -- c; }").unwrap().1.len() == 2);
}

#[test]
fn expand_prints_chain() {
    let out = plumbkit(&["expand", "-9", "4"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "-3 -2 -2 -2");
    assert_eq!(stdout(&plumbkit(&["expand", "-13", "2"])).trim(), "-7 -2");
}

#[test]
fn expand_rejects_out_of_domain_input() {
    assert_eq!(plumbkit(&["expand", "1", "2"]).status.code(), Some(2));
    assert_eq!(plumbkit(&["expand", "-3", "0"]).status.code(), Some(2));
}

#[test]
fn seifert_and_plumb() {
    let out = plumbkit(&["seifert", "5", "9", "13"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("b = -1; (5, 2); (9, 4); (13, 2)"));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.graph");
    let out = plumbkit(&["plumb", "3", "13", "23", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let inv = plumbkit(&["invariants", "--format", "records", path.to_str().unwrap()]);
    let value: serde_json::Value = serde_json::from_str(stdout(&inv).trim()).unwrap();
    assert_eq!(value["vertices"], 9);
    assert_eq!(value["rohlin"], 1);

    assert_eq!(plumbkit(&["seifert", "3", "6", "7"]).status.code(), Some(2));
}

#[test]
fn mu_methods_and_exit_codes() {
    assert_eq!(stdout(&plumbkit(&["mu", "5", "9", "13"])).trim(), "1 1");
    assert_eq!(
        stdout(&plumbkit(&["mu", "3", "13", "23", "--method", "lattice"])).trim(),
        "1"
    );
    assert_eq!(
        stdout(&plumbkit(&["mu", "2", "3", "5", "--method", "plumbing"])).trim(),
        "1"
    );
    assert_eq!(
        plumbkit(&["mu", "2", "3", "5", "--method", "lattice"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(plumbkit(&["mu", "2", "4", "5"]).status.code(), Some(2));
}

#[test]
fn invariants_of_d2() {
    let out = plumbkit(&["invariants", &fixture("d2.graph")]);
    assert!(out.status.success());
    let text = stdout(&out);
    for line in [
        "determinant: -1",
        "signature: -9",
        "wu class: {c}",
        "mu-bar: -8",
        "rohlin: 1",
    ] {
        assert!(text.contains(line), "missing {line:?} in {text}");
    }
}

#[test]
fn reduce_verdicts_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("d3.trace");
    let out = plumbkit(&[
        "reduce",
        &fixture("d3.graph"),
        "--trace",
        trace.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("S3"));

    let replay = plumbkit(&["replay-trace", trace.to_str().unwrap()]);
    assert_eq!(replay.status.code(), Some(0));
    assert_eq!(stdout(&replay), "vertices = []\nedges = []\n");

    let e8 = plumbkit(&["reduce", &fixture("e8.graph")]);
    assert_eq!(e8.status.code(), Some(1));
    assert!(stdout(&e8).starts_with("UNKNOWN"));

    let lens = write_temp(
        &dir,
        "lens.graph",
        "vertices = [ { id = \"a\", weight = -3 } ]\nedges = []\n",
    );
    let out = plumbkit(&["reduce", lens.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).starts_with("NOT-HS(3)"));
}

#[test]
fn tampered_trace_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let text = "vertices = [ { id = \"a\", weight = -2 }, { id = \"b\", weight = 0 } ]\nedges = [ [\"a\", \"b\"] ]\n---\nblowdown a\n";
    let trace = write_temp(&dir, "bad.trace", text);
    assert_eq!(
        plumbkit(&["replay-trace", trace.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn parse_errors_exit_two_with_location() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write_temp(&dir, "bad.graph", "vertices = [\n  { id = \"a\", weight = -2 },\n  { id = \"a\", weight = 1 },\n]\nedges = []\n");
    let out = plumbkit(&["invariants", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line"));
    assert_eq!(
        plumbkit(&["invariants", "/nonexistent/x.graph"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn export_dot_round_trips_through_reader() {
    let out = plumbkit(&["export-dot", &fixture("d2.graph")]);
    assert!(out.status.success());
    let (nodes, edges) = read_dot(&stdout(&out)).unwrap();
    assert_eq!(nodes.len(), 9);
    assert_eq!(edges.len(), 8);
    assert_eq!(nodes["c"], "-1");
    assert!(edges.contains(&("c".to_string(), "u1".to_string())));

    let dir = tempfile::tempdir().unwrap();
    let empty = write_temp(&dir, "empty.graph", "vertices = []\nedges = []\n");
    let out = plumbkit(&["export-dot", empty.to_str().unwrap()]);
    let (nodes, edges) = read_dot(&stdout(&out)).unwrap();
    assert!(nodes.is_empty() && edges.is_empty());
}

#[test]
fn export_dot_is_stable() {
    let a = stdout(&plumbkit(&["export-dot", &fixture("e8.graph")]));
    let b = stdout(&plumbkit(&["export-dot", &fixture("e8.graph")]));
    assert_eq!(a, b);
}

#[test]
fn scan_tiny_grid_and_usage_errors() {
    let out = plumbkit(&["scan", "--p-bound", "5", "--q-bound", "5"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("all indices odd: 0"));
    assert!(text.contains("all odd and mu = 1: 0"));

    assert_eq!(
        plumbkit(&["scan", "--s-min", "0", "--s-max", "0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        plumbkit(&["scan", "--s-min", "3", "--s-max", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(plumbkit(&["scan", "--p-bound", "0"]).status.code(), Some(2));
}

#[test]
fn scan_records_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.jsonl"), dir.path().join("b.jsonl"));
    for path in [&a, &b] {
        let out = plumbkit(&[
            "scan",
            "--p-bound",
            "30",
            "--q-bound",
            "30",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    let a = std::fs::read_to_string(a).unwrap();
    assert_eq!(a, std::fs::read_to_string(b).unwrap());
    assert!(a
        .lines()
        .any(|l| l.starts_with("{\"p\":-13,\"q\":23,\"r\":3,\"s\":1,")));
}
