// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

mod common;

use std::path::Path;
use std::process::Command;

use trivalent::cli::run_command;

fn data(name: &str) -> String {
    common::data_dir().join(name).to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> (i32, String, String) {
    let argv: Vec<String> = std::iter::once("trivalent")
        .chain(args.iter().copied())
        .map(String::from)
        .collect();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run_command(&argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn wheels_with_equal_gcd_are_equivalent() {
    let (code, out, _) = run(&["equiv", &data("wheel46.dg"), &data("wheel20.dg"), "--map", "z=z"]);
    assert_eq!(code, 0);
    assert_eq!(out, "equivalent\n");
    let (code, _, _) = run(&["equiv", &data("wheel46.dg"), &data("wheel20.dg")]);
    assert_eq!(code, 0);
}

#[test]
fn different_arf_is_not_equivalent() {
    let (code, out, _) = run(&["equiv", &data("apple_genus2_even.dg"), &data("apple_genus2_even_b.dg")]);
    assert_eq!((code, out.as_str()), (1, "not equivalent\n"));
}

#[test]
fn tree_report_lists_boundary_alpha() {
    let (code, out, _) = run(&["invariants", &data("tree.dg"), "--json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["genus"], 0);
    let alphas: Vec<i64> = v["boundary"]
        .as_array()
        .unwrap()
        .iter()
        .map(|b| b["alpha"].as_i64().unwrap())
        .collect();
    assert_eq!(alphas, vec![3, -2, 1]);
}

#[test]
fn script_run_reaches_figure_b() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out.dg").to_string_lossy().into_owned();
    let (code, _, err) = run(&["run", &data("fig_a.dg"), &data("one_ih.ms"), "-o", &out]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(run(&["equiv", &out, &data("fig_b.dg")]).0, 0);
    assert_eq!(
        std::fs::read_to_string(&out).unwrap(),
        std::fs::read_to_string(data("fig_b.dg")).unwrap()
    );
}

#[test]
fn ih_then_plan_then_run() {
    let dir = tempfile::tempdir().unwrap();
    let p = |n: &str| dir.path().join(n).to_string_lossy().into_owned();
    assert_eq!(
        run(&[
            "ih",
            &data("fig_a.dg"),
            "--edge",
            "u-v",
            "--pairing",
            "c",
            "-o",
            &p("c.dg")
        ])
        .0,
        0
    );
    assert_eq!(run(&["plan", &data("fig_a.dg"), &p("c.dg"), "-o", &p("s.ms")]).0, 0);
    let script = std::fs::read_to_string(p("s.ms")).unwrap();
    assert!(
        script.lines().all(|l| l.contains(" # ")),
        "steps carry hashes: {script}"
    );
    assert_eq!(run(&["run", &data("fig_a.dg"), &p("s.ms"), "-o", &p("r.dg")]).0, 0);
    assert_eq!(run(&["equiv", &p("r.dg"), &p("c.dg")]).0, 0);
}

#[test]
fn normalize_is_stable() {
    let dir = tempfile::tempdir().unwrap();
    let n1 = dir.path().join("n1.dg").to_string_lossy().into_owned();
    let n2 = dir.path().join("n2.dg").to_string_lossy().into_owned();
    assert_eq!(run(&["normalize", &data("genus2_two_boundary.dg"), "-o", &n1]).0, 0);
    assert_eq!(run(&["normalize", &n1, "-o", &n2]).0, 0);
    assert_eq!(std::fs::read(&n1).unwrap(), std::fs::read(&n2).unwrap());
    assert_eq!(run(&["equiv", &n1, &data("genus2_two_boundary.dg")]).0, 0);
}

#[test]
fn bad_input_exits_2_with_line() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.dg");
    std::fs::write(&bad, "vertex v0 : x y z\nalpha x 1\n").unwrap();
    let (code, _, err) = run(&["validate", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("bad.dg:1:") && err.contains("vertex sum at v0"), "{err}");
    std::fs::write(&bad, "vertex v0 : x y z\nalpha x 1\nalpha y 1\nalpha z 1\n").unwrap();
    let (code, _, err) = run(&["validate", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(
        err.contains("bad.dg:1:") && err.contains("vertex sum at v0 is 3"),
        "{err}"
    );
    std::fs::write(&bad, "vertex v0 x y z\n").unwrap();
    let (code, _, err) = run(&["validate", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains(":1:"), "{err}");
}

#[test]
fn failed_command_leaves_no_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out.dg");
    let (code, _, _) = run(&[
        "ih",
        &data("wheel46.dg"),
        "--edge",
        "x-y",
        "--pairing",
        "b",
        "-o",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 2);
    assert!(!out.exists());
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(
        run(&["ih", &data("fig_a.dg"), "--edge", "u-v", "--pairing", "d", "-o", "x"]).0,
        2
    );
    assert_eq!(run(&["equiv", &data("fig_a.dg"), &data("fig_b.dg"), "--map", "a"]).0, 2);
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn orbit_and_dot() {
    let (code, out, _) = run(&["orbit", &data("wheel20.dg"), "--bound", "3", "--depth", "2"]);
    assert_eq!(code, 0);
    assert!(
        out.contains("within window") && out.contains("invariant changes: 0"),
        "{out}"
    );
    let dir = tempfile::tempdir().unwrap();
    let bare = dir.path().join("bare.dg");
    std::fs::write(&bare, "vertex v0 : x y z\n").unwrap();
    let (code, out, _) = run(&["orbit", bare.to_str().unwrap(), "--bound", "2"]);
    assert_eq!(code, 0);
    assert!(out.contains("soundness violations: 0"), "{out}");
    let (code, out, _) = run(&["dot", &data("wheel46.dg")]);
    assert_eq!(code, 0);
    assert!(out.starts_with("graph") && out.contains("x=4"));
}

#[test]
fn binary_reports_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_trivalent");
    let status = Command::new(bin)
        .args(["equiv", &data("apple_genus2.dg"), &data("apple_genus2_even.dg")])
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(1));
    let status = Command::new(bin)
        .args(["validate", Path::new("/nonexistent/file.dg").to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(2));
}
