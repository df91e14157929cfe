use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn khc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_khc"))
        .args(args)
        .output()
        .expect("khc runs")
}

fn program(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("programs")
        .join(name)
}

fn write(dir: &tempfile::TempDir, src: &str) -> String {
    let path = dir.path().join("p.khc");
    std::fs::write(&path, src).unwrap();
    path.to_str().unwrap().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn bundled_programs_pass_their_checks() {
    for name in ["g2_rigid.khc", "g2_orthogonal.khc"] {
        let o = khc(&["check", program(name).to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{name}: {}", stdout(&o));
        assert!(stdout(&o).ends_with(" checks, 0 failed\n"));
    }
}

#[test]
fn run_prints_emitted_values() {
    let o = khc(&["run", program("g2_rigid.khc").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("== G ==\n"), "{out}");
    assert_eq!(out.matches("== ").count(), 1);
}

#[test]
fn json_output_is_ordered_and_complete() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(
        &dir,
        "points x1, x2;\nlet L = line(x1: 1/2, x2: 1/3);\nlet M = mc(L);\n\
         check M.rank = 1;\nemit M;\n",
    );
    let o = khc(&["run", &path, "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["values"].as_array().unwrap().len(), 1);
    assert_eq!(doc["values"][0]["name"], "M");
    assert_eq!(doc["checks"][0]["passed"], true);

    let o = khc(&["run", &path, "--format", "json", "--emit-intermediate"]);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let names: Vec<_> = doc["values"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v["name"].clone())
        .collect();
    assert_eq!(names, ["L", "M"]);
}

#[test]
fn failed_check_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(
        &dir,
        "points x1, x2;\nlet L = line(x1: 1/2, x2: 1/2);\ncheck L.rank = 2;\n",
    );
    let o = khc(&["check", &path]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));
    assert!(stdout(&o).ends_with("1 checks, 1 failed\n"));
    let o = khc(&["run", &path]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("check failed at 3:1"), "{}", stderr(&o));
}

#[test]
fn user_errors_exit_two_with_a_location() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("points x1;\nlet A = mc(;\n", ":2:12:"),
        ("points x1;\nemit A;\n", ":2:1:"),
        (
            "points a, b;\nlet L = line(a: 1/2, b: 1/3);\nlet M = mc(L, chi = 1/3);\n",
            ":3:9:",
        ),
    ];
    for (src, loc) in cases {
        let path = write(&dir, src);
        let o = khc(&["run", &path]);
        assert_eq!(o.status.code(), Some(2), "{src}");
        assert!(stderr(&o).contains(loc), "{src}: {}", stderr(&o));
    }
    let o = khc(&["run", "/nonexistent/p.khc"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn katz_traces_the_last_binding() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(
        &dir,
        "points x1, x2;\nlet L = line(x1: 1/2, x2: 1/3);\nlet M = mc(L);\n",
    );
    let o = khc(&["katz", &path, "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["values"][0]["name"], "M");
}

#[test]
fn trace_logs_each_binding() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(
        &dir,
        "points x1, x2;\nlet L = line(x1: 1/2, x2: 1/3);\nlet M = mc(L);\n",
    );
    let o = khc(&["run", &path, "--trace"]);
    assert_eq!(o.status.code(), Some(0));
    let err = stderr(&o);
    assert_eq!(err.lines().count(), 2, "{err}");
    assert!(
        err.starts_with("2:1 let L = line(x1: 1/2, x2: 1/3);"),
        "{err}"
    );
}
