//! End-to-end checks of the binary: subcommand surface, JSON round-trips,
//! determinism and exit codes.

use std::process::{Command, Output};

fn qfsplit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qfsplit"))
        .args(args)
        .env("QFS_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).to_string()
}

fn json_payload(out: &Output) -> serde_json::Value {
    let doc: serde_json::Value =
        serde_json::from_str(&stdout(out)).expect("stdout is a JSON document");
    assert!(doc.get("status").is_some());
    assert!(doc.get("citations").is_some());
    doc["payload"].clone()
}

#[test]
fn verify_case_v() {
    let out = qfsplit(&["--json", "delpezzo", "verify", "--case", "v"]);
    assert!(out.status.success());
    let payload = json_payload(&out);
    assert_eq!(payload["deg_k_plus_delta"], "-1/1722");
    assert_eq!(payload["floor_p_degree"], "-1");
    assert_eq!(payload["ample"], true);
}

#[test]
fn verify_explicit_coefficients() {
    let out = qfsplit(&[
        "--json",
        "delpezzo",
        "verify",
        "--p",
        "41",
        "--coeffs",
        "1/2,2/3,6/7,40/41",
    ]);
    assert!(out.status.success());
    let payload = json_payload(&out);
    assert_eq!(payload["deg_k_plus_delta"], "-1/1722");
}

#[test]
fn verdict_and_table() {
    let out = qfsplit(&[
        "--json",
        "delpezzo",
        "verdict",
        "--case",
        "iii",
        "--mmax",
        "3",
        "--emit-derivation",
    ]);
    assert!(out.status.success());
    let payload = json_payload(&out);
    assert_eq!(payload["certified_not_quasi_f_split"], true);
    assert!(payload["derivation"].as_array().unwrap().len() > 3);

    let out = qfsplit(&["--json", "delpezzo", "table1", "--case", "ii", "--mmax", "2"]);
    assert!(out.status.success());
    let payload = json_payload(&out);
    assert_eq!(payload["all_ok"], true);
}

#[test]
fn verdict_inconclusive_exit_code() {
    // zero boundary: mechanism premises fail, exit code 1 (check failed)
    let out = qfsplit(&[
        "--json",
        "delpezzo",
        "verdict",
        "--p",
        "43",
        "--coeffs",
        "0,0,0,0",
        "--mmax",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["status"], "inconclusive");
}

#[test]
fn search_json_is_deterministic() {
    let a = qfsplit(&["--json", "delpezzo", "search", "--pmax", "11", "--mbound", "12"]);
    let b = qfsplit(&["--json", "delpezzo", "search", "--pmax", "11", "--mbound", "12"]);
    assert!(a.status.success());
    assert_eq!(stdout(&a), stdout(&b), "byte-identical JSON");
    let payload = json_payload(&a);
    let candidates = payload["candidates"].as_array().unwrap();
    assert!(candidates
        .iter()
        .all(|c| c["status"] == "candidate - verdict unknown"));
}

#[test]
fn cusp_graph_round_trip() {
    let dir = std::env::temp_dir().join(format!("qfsplit-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("cusp3.json");
    let out = qfsplit(&[
        "cusp-resolve",
        "--n",
        "3",
        "--emit-graph",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());

    // emitted JSON is accepted back by the dual graph commands
    let out = qfsplit(&[
        "--json",
        "dualgraph",
        "discrepancy",
        "--graph",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let payload = json_payload(&out);
    let coeffs: Vec<String> = payload["coefficients"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["coeff"].as_str().unwrap().to_string())
        .collect();
    assert_eq!(coeffs, vec!["0", "0", "0", "-1/2", "-1"]);

    let out = qfsplit(&[
        "--json",
        "dualgraph",
        "det",
        "--graph",
        path.to_str().unwrap(),
        "--subset",
        "E1,E2,E3",
    ]);
    let payload = json_payload(&out);
    assert_eq!(payload["det"], "-7");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn germ_resolution_from_json() {
    let dir = std::env::temp_dir().join(format!("qfsplit-germ-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("germ.json");
    std::fs::write(
        &path,
        r#"{"branches":[{"id":"C","coeff":"1/2","mults":[2,2]}],"intersections":[]}"#,
    )
    .unwrap();
    let out = qfsplit(&["--json", "cusp-resolve", "--germ", path.to_str().unwrap()]);
    assert!(out.status.success());
    let payload = json_payload(&out);
    assert_eq!(payload["kind"], "special_point");
    assert_eq!(payload["n"], 2);
    assert_eq!(payload["type"], 5);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn dualgraph_chain_commands() {
    let out = qfsplit(&["--json", "dualgraph", "det", "--chain", "-2,-2,-2"]);
    assert_eq!(json_payload(&out)["det"], "-4");

    let out = qfsplit(&["--json", "dualgraph", "negdef", "--chain", "-2,-2,-2"]);
    assert_eq!(json_payload(&out)["negative_definite"], true);

    let out = qfsplit(&["--json", "dualgraph", "index", "--chain", "-3,-2,-2"]);
    assert_eq!(json_payload(&out)["q_factorial_index"], "7");
}

#[test]
fn cone_commands() {
    let out = qfsplit(&["--json", "cone", "rays", "--divisor", "1/2,2/3"]);
    let payload = json_payload(&out);
    assert_eq!(
        payload["rays"],
        serde_json::json!([[2, 0, 1], [0, 3, 2], [0, 0, 1]])
    );

    let out = qfsplit(&["--json", "cone", "index", "--d", "7", "--l", "6"]);
    assert_eq!(json_payload(&out)["q_factorial_index"], 7);

    let out = qfsplit(&[
        "--json",
        "cone",
        "different",
        "--divisor",
        "1/2,2/3,6/7,40/41",
    ]);
    assert_eq!(
        json_payload(&out)["coefficients"],
        serde_json::json!(["1/2", "2/3", "6/7", "40/41"])
    );

    let out = qfsplit(&[
        "--json", "cone", "witness", "--a", "1", "--b", "3", "--q", "2", "--d", "1",
    ]);
    let payload = json_payload(&out);
    assert_eq!(payload["identity_holds"], true);
    assert_eq!(payload["parts"], serde_json::json!([0, 1]));

    let out = qfsplit(&[
        "--json", "cone", "hilbert", "--space", "P1", "--divisor", "1:1/2", "--dmax", "4",
    ]);
    assert_eq!(json_payload(&out)["dims"], serde_json::json!([1, 1, 2, 2, 3]));
}

#[test]
fn witt_commands() {
    let out = qfsplit(&["--json", "witt", "ghost", "--p", "2", "--n", "3", "--a", "1,1,0"]);
    assert_eq!(json_payload(&out)["ghost"], serde_json::json!(["1", "3", "3"]));
    let out = qfsplit(&["--json", "witt", "ghost", "--p", "2", "--n", "3", "--a", "1,1,1"]);
    assert_eq!(json_payload(&out)["ghost"], serde_json::json!(["1", "3", "7"]));

    let out = qfsplit(&[
        "--json", "witt", "add", "--p", "2", "--n", "2", "--a", "1,0", "--b", "1,0",
    ]);
    assert_eq!(json_payload(&out)["entries"], serde_json::json!(["0", "1"]));

    let out = qfsplit(&[
        "--json", "witt", "mul", "--p", "3", "--n", "2", "--vars", "x", "--a", "x,0", "--b",
        "x,0",
    ]);
    assert_eq!(json_payload(&out)["entries"], serde_json::json!(["x^2", "0"]));

    let out = qfsplit(&[
        "--json", "witt", "frob", "--p", "2", "--n", "2", "--vars", "x", "--a", "1,x",
    ]);
    assert_eq!(json_payload(&out)["entries"], serde_json::json!(["1", "x^2"]));

    let out = qfsplit(&[
        "--json", "witt", "grade", "--p", "2", "--n", "2", "--vars", "t=1", "--a", "t,t^2",
    ]);
    let payload = json_payload(&out);
    assert_eq!(payload["grading"], "homogeneous");
    assert_eq!(payload["degree"], "1");
}

#[test]
fn acc_commands() {
    let out = qfsplit(&["--json", "acc", "enumerate", "--low", "5/6", "--grid", "12"]);
    assert!(out.status.success());
    assert_eq!(json_payload(&out)["none_in_open_interval"], true);

    let out = qfsplit(&[
        "--json",
        "acc",
        "vanishing",
        "--p",
        "43",
        "--coeffs",
        "1/2,2/3,6/7,40/41",
        "--ell",
        "1",
    ]);
    let payload = json_payload(&out);
    assert_eq!(payload["p2_degree"], "-2");
}

#[test]
fn usage_errors_exit_2() {
    let out = qfsplit(&["delpezzo", "verify", "--case", "v", "--p", "41"]);
    assert_eq!(out.status.code(), Some(2), "clap usage error");
    let out = qfsplit(&["no-such-command"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn internal_errors_exit_3() {
    let out = qfsplit(&["delpezzo", "verify", "--p", "10", "--coeffs", "1/2,1/2,1/2,1/2"]);
    assert_eq!(out.status.code(), Some(3), "composite characteristic");
    let out = qfsplit(&["dualgraph", "det", "--graph", "/nonexistent/file.json"]);
    assert_eq!(out.status.code(), Some(3));
}
