use std::collections::BTreeSet;
use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn data(name: &str) -> PathBuf {
    root().join("crates/core/data").join(name)
}

fn config(name: &str) -> PathBuf {
    root().join("configs").join(name)
}

fn netland<I, S>(args: I) -> Output
where
    I: IntoIterator<Item = S>,
    S: AsRef<std::ffi::OsStr>,
{
    Command::new(env!("CARGO_BIN_EXE_netland")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn json(o: &Output) -> Value {
    assert_eq!(code(o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

fn set(v: &Value) -> BTreeSet<String> {
    v.as_array().unwrap().iter().map(|x| x.as_str().unwrap().to_string()).collect()
}

fn strs(xs: &[&str]) -> BTreeSet<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

#[test]
fn karate_config_reports_critical_nodes() {
    let v = json(&netland([Path::new("analyze"), Path::new("--config"), &config("karate.conf")]));
    assert_eq!(set(&v["critical"]["0"]), strs(&["1", "34"]));
    assert_eq!(set(&v["critical"]["1"]), strs(&["3", "32"]));
    assert_eq!(set(&v["critical"]["2"]), strs(&["25", "29"]));
}

#[test]
fn les_miserables_config_reports_critical_nodes() {
    let v = json(&netland([Path::new("analyze"), Path::new("--config"), &config("lesmis.conf")]));
    assert_eq!(set(&v["critical"]["0"]), strs(&["Valjean", "Enjolras"]));
    assert_eq!(set(&v["critical"]["1"]), strs(&["Courfeyrac"]));
}

#[test]
fn empty_graph_has_no_levels() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.edges");
    fs::write(&empty, "# nothing\n").unwrap();
    let v = json(&netland([Path::new("analyze"), Path::new("--input"), &empty]));
    assert_eq!(v["levels"], Value::Array(vec![]));
    let o = netland([Path::new("persist"), Path::new("--input"), &empty]);
    assert_eq!(code(&o), 0);
    assert_eq!(String::from_utf8(o.stdout).unwrap(), "dim,birth_t,death_t,birth_h,death_h,birth_node,killer_node\n");
}

#[test]
fn barcode_csv_on_stdout() {
    let o = netland([Path::new("persist"), Path::new("--config"), &config("karate.conf")]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "dim,birth_t,death_t,birth_h,death_h,birth_node,killer_node");
    assert_eq!(lines[1], "0,1,,-2.83321334406,,34,");
    assert!(lines[2].starts_with("0,2,4,") && lines[2].ends_with(",1,3"));
    assert!(lines[3].starts_with("1,7,17,") && lines[3].ends_with(",32,29"));
    assert!(!text.contains('\r'));
}

#[test]
fn transition_paths_and_minimum_energy_path() {
    let karate = data("karate.edges");
    let v = json(&netland([
        Path::new("tpt"),
        Path::new("--input"),
        &karate,
        Path::new("--source"),
        Path::new("1"),
        Path::new("--target"),
        Path::new("34"),
        Path::new("--top-k"),
        Path::new("2"),
    ]));
    let top: Vec<&str> = v["top_nodes"].as_array().unwrap().iter().map(|x| x["node"].as_str().unwrap()).collect();
    assert_eq!(top, ["3", "32"]);
    let rate = &v["rate"];
    let (a, b) = (rate["from_source"].as_f64().unwrap(), rate["into_target"].as_f64().unwrap());
    assert!((a - b).abs() <= 1e-9 * a);

    let v = json(&netland([
        Path::new("path"),
        Path::new("--config"),
        &config("karate.conf"),
        Path::new("--source"),
        Path::new("1"),
        Path::new("--target"),
        Path::new("34"),
    ]));
    assert_eq!(v["bottleneck"], "3");
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(code(&netland(["analyze", "--bogus"])), 1);
    assert_eq!(code(&netland(["analyze"])), 1);
    assert_eq!(code(&netland(["analyze", "--input", "/nonexistent/graph.edges"])), 1);
    let karate = data("karate.edges");
    let overlap = netland([
        Path::new("tpt"),
        Path::new("--input"),
        &karate,
        Path::new("--source"),
        Path::new("1,2"),
        Path::new("--target"),
        Path::new("2,34"),
    ]);
    assert_eq!(code(&overlap), 1);
    let dir = tempfile::tempdir().unwrap();
    let dup = dir.path().join("dup.edges");
    fs::write(&dup, "a b 7\nb a 3\n").unwrap();
    let o = netland([Path::new("analyze"), Path::new("--input"), &dup]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains('2'));
}

#[test]
fn unreachable_interior_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("split.edges");
    fs::write(&g, "a b\nb c\nd e\n").unwrap();
    let o = netland([
        Path::new("tpt"),
        Path::new("--input"),
        &g,
        Path::new("--source"),
        Path::new("a"),
        Path::new("--target"),
        Path::new("c"),
    ]);
    assert_eq!(code(&o), 2, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn simplex_cap_exits_three() {
    let o = netland([
        Path::new("analyze"),
        Path::new("--config"),
        &config("karate.conf"),
        Path::new("--cap-simplices"),
        Path::new("50"),
    ]);
    assert_eq!(code(&o), 3, "{}", String::from_utf8_lossy(&o.stderr));
    let o = netland([
        Path::new("analyze"),
        Path::new("--config"),
        &config("karate.conf"),
        Path::new("--cap-simplices"),
        Path::new("50"),
        Path::new("--no-persistence"),
    ]);
    assert_eq!(code(&o), 0);
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let run = |tag: &str, sequential: bool| -> Vec<Vec<u8>> {
        let files: Vec<PathBuf> = ["json", "dot", "tpt.json", "tpt.dot", "csv"]
            .iter()
            .map(|ext| dir.path().join(format!("{tag}.{ext}")))
            .collect();
        let with = |cmd: &str, rest: &[&Path]| -> Vec<OsString> {
            let mut v: Vec<OsString> = vec![cmd.into(), "--config".into(), config("karate.conf").into()];
            if sequential {
                v.push("--sequential".into());
            }
            v.extend(rest.iter().map(|p| p.as_os_str().to_owned()));
            v
        };
        let p = Path::new;
        assert_eq!(code(&netland(with("analyze", &[p("--out-json"), &files[0], p("--out-dot"), &files[1]]))), 0);
        let tpt = [p("--source"), p("1"), p("--target"), p("34"), p("--out-json"), &files[2], p("--out-dot"), &files[3]];
        assert_eq!(code(&netland(with("tpt", &tpt))), 0);
        assert_eq!(code(&netland(with("persist", &[p("--level"), p("1"), p("--out-csv"), &files[4]]))), 0);
        files.iter().map(|f| fs::read(f).unwrap()).collect()
    };
    let first = run("a", false);
    assert_eq!(first, run("b", false));
    assert_eq!(first, run("c", true));
}

#[test]
fn command_line_overrides_config() {
    let dir = tempfile::tempdir().unwrap();
    fs::copy(data("karate.edges"), dir.path().join("k.edges")).unwrap();
    let cfg = dir.path().join("run.conf");
    fs::write(&cfg, "input = k.edges\nenergy = no-such-energy\nmin-weight = 5\n").unwrap();
    // relative input resolved against the config directory; bad energy overridden
    let o = netland([
        Path::new("analyze"),
        Path::new("--config"),
        &cfg,
        Path::new("--energy"),
        Path::new("neg-log-degree"),
        Path::new("--min-weight"),
        Path::new("0"),
    ]);
    let v = json(&o);
    assert_eq!(v["nodes"], 34);
    // the config's own bad energy is reported when not overridden
    assert_eq!(code(&netland([Path::new("analyze"), Path::new("--config"), &cfg])), 1);

    fs::write(&cfg, "input = k.edges\nsurprise = 1\n").unwrap();
    assert_eq!(code(&netland([Path::new("analyze"), Path::new("--config"), &cfg])), 1);
}

#[test]
fn dot_exports() {
    let o = netland([Path::new("export-dot"), Path::new("--config"), &config("karate.conf")]);
    assert_eq!(code(&o), 0);
    let dot = String::from_utf8(o.stdout).unwrap();
    assert!(dot.starts_with("digraph"));
    assert!(dot.contains("diamond"));
    let o = netland([
        Path::new("export-dot"),
        Path::new("--input"),
        &data("karate.edges"),
        Path::new("--source"),
        Path::new("1"),
        Path::new("--target"),
        Path::new("34"),
    ]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8(o.stdout).unwrap().contains("->"));
}
