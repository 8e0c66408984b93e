use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "data", name]
        .iter()
        .collect();
    p.to_string_lossy().into_owned()
}

fn osalg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_osalg"))
        .args(args)
        .env_remove("OSALG_MAX_N")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).trim_end().to_string()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).to_string()
}

fn write_temp(name: &str, content: &str) -> String {
    let dir = std::env::temp_dir().join(format!("osalg-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, content).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn golden_outputs() {
    let fig1 = data("fig1.json");
    let o = osalg(&[
        "expand",
        "--arrangement",
        &fig1,
        "--algebra",
        "ot",
        "--monomial",
        "2,3,5",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "e[125]: -1  e[135]: 2");

    let o = osalg(&["nbc", "--arrangement", &fig1, "--level", "0"]);
    assert_eq!(stdout(&o), "{}");

    let o = osalg(&[
        "residue",
        "--arrangement",
        &fig1,
        "--algebra",
        "ot",
        "--order",
        "1,3,5",
        "--monomial",
        "2,3,5",
    ]);
    assert_eq!(stdout(&o), "2");
}

#[test]
fn expansions_over_both_bases() {
    let fig1 = data("fig1.json");
    let b3 = data("fig1_b3.json");
    let cases = [
        ("os", "1,5,6", None, "e[125]: -1  e[126]: 1"),
        ("ot", "1,5,6", None, "e[125]: 3/2  e[126]: -1/2"),
        ("sign", "1,5,6", None, "e[125]: 1  e[126]: -1"),
        ("os", "1,2,6", Some(&b3), "e[125]: 1  e[156]: 1"),
        ("ot", "1,2,6", Some(&b3), "e[125]: 3  e[156]: -2"),
        ("sign", "1,2,6", Some(&b3), "e[125]: 1  e[156]: -1"),
        ("ot", "2,3,5", Some(&b3), "e[125]: -1  e[135]: 2"),
        ("ot", "1,2,3", None, "0"),
    ];
    for (algebra, monomial, basis, want) in cases {
        let mut args = vec![
            "expand",
            "--arrangement",
            &fig1,
            "--algebra",
            algebra,
            "--monomial",
            monomial,
        ];
        if let Some(b) = basis {
            args.extend(["--basis", b.as_str()]);
        }
        let o = osalg(&args);
        assert_eq!(stdout(&o), want, "{args:?}");
    }
}

#[test]
fn words_are_normalized() {
    let fig1 = data("fig1.json");
    let os = osalg(&["expand", "--arrangement", &fig1, "--monomial", "3,2,5"]);
    assert_eq!(stdout(&os), "e[125]: 1  e[135]: -1");
    let ot = osalg(&[
        "expand",
        "--arrangement",
        &fig1,
        "--algebra",
        "ot",
        "--monomial",
        "3,2,5",
    ]);
    assert_eq!(stdout(&ot), "e[125]: -1  e[135]: 2");
}

#[test]
fn json_output_round_trips() {
    let fig1 = data("fig1.json");
    let o = osalg(&[
        "expand",
        "--arrangement",
        &fig1,
        "--algebra",
        "ot",
        "--monomial",
        "1,5,6",
        "--json",
    ]);
    let text = stdout(&o);
    assert_eq!(
        text,
        r#"{"terms":[{"support":[1,2,5],"coeff":"3/2"},{"support":[1,2,6],"coeff":"-1/2"}]}"#
    );
    let parsed = osalg_core::AlgebraElement::from_json(&text).unwrap();
    assert_eq!(parsed.to_json(), text);

    let o = osalg(&["dims", "--arrangement", &fig1, "--json"]);
    assert_eq!(stdout(&o), r#"{"dims":[1,6,11,6]}"#);
    let o = osalg(&[
        "nbc",
        "--matroid",
        &data("fig1_matroid.json"),
        "--level",
        "3",
        "--json",
    ]);
    assert_eq!(
        stdout(&o),
        r#"{"3":[[1,2,4],[1,2,5],[1,2,6],[1,3,4],[1,3,5],[1,3,6]]}"#
    );
    let o = osalg(&["verify", "--arrangement", &fig1, "--chi", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["ok"], true);
}

#[test]
fn dims_and_nbc() {
    let m = data("fig1_matroid.json");
    assert_eq!(stdout(&osalg(&["dims", "--matroid", &m])), "1 6 11 6");
    let o = osalg(&["nbc", "--matroid", &m, "--level", "3"]);
    assert_eq!(
        stdout(&o),
        "{1,2,4}\n{1,2,5}\n{1,2,6}\n{1,3,4}\n{1,3,5}\n{1,3,6}"
    );
}

#[test]
fn verification_suites() {
    let fig1 = data("fig1.json");
    for algebra in ["os", "ot", "sign"] {
        let o = osalg(&[
            "verify",
            "--arrangement",
            &fig1,
            "--algebra",
            algebra,
            "--chi",
        ]);
        assert_eq!(o.status.code(), Some(0), "{algebra}");
        for x in 1..=6 {
            let x = x.to_string();
            let o = osalg(&[
                "verify",
                "--arrangement",
                &fig1,
                "--algebra",
                algebra,
                "--exact-sequence",
                &x,
            ]);
            assert_eq!(o.status.code(), Some(0), "{algebra} {x}: {}", stdout(&o));
        }
    }
    let o = osalg(&[
        "verify",
        "--arrangement",
        &fig1,
        "--algebra",
        "ot",
        "--sum-residues",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let o = osalg(&[
        "verify",
        "--arrangement",
        &fig1,
        "--algebra",
        "ot",
        "--sum-residues",
        "--basis",
        &data("fig1_b3.json"),
    ]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn failed_verifications_exit_one() {
    let fig1 = data("fig1.json");
    let o = osalg(&[
        "verify",
        "--arrangement",
        &fig1,
        "--algebra",
        "os",
        "--sum-residues",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAILED"));

    // β_{1,2} = +1 while the Orlik-Solomon χ stays alternating: UC2 fails
    let config = write_temp("beta.json", r#"{"beta": {"1,2": "1"}}"#);
    let o = osalg(&[
        "verify",
        "--arrangement",
        &fig1,
        "--chi",
        "--config",
        &config,
    ]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    assert!(stdout(&o).contains("UC2 violation"));

    let not_diagonal = write_temp(
        "short.json",
        r#"{"level": 3, "elements": [{"order":[1,2,4]},{"order":[1,2,5]}]}"#,
    );
    let o = osalg(&[
        "check-diagonal",
        "--arrangement",
        &fig1,
        "--basis",
        &not_diagonal,
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("not a diagonal basis"));
    let o = osalg(&[
        "check-diagonal",
        "--arrangement",
        &fig1,
        "--basis",
        &data("fig1_b3.json"),
    ]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn input_errors_exit_two_and_name_the_flag() {
    let fig1 = data("fig1.json");
    let m = data("fig1_matroid.json");
    let b3 = data("fig1_b3.json");
    let cases: Vec<(Vec<&str>, &str)> = vec![
        (
            vec![
                "expand",
                "--matroid",
                &m,
                "--algebra",
                "ot",
                "--monomial",
                "1",
            ],
            "--arrangement",
        ),
        (
            vec![
                "expand",
                "--matroid",
                &m,
                "--arrangement",
                &fig1,
                "--monomial",
                "1",
            ],
            "--arrangement",
        ),
        (vec!["dims"], "--matroid"),
        (
            vec!["expand", "--arrangement", &fig1, "--monomial", "1,x"],
            "--monomial",
        ),
        (
            vec!["expand", "--arrangement", &fig1, "--monomial", "1,1"],
            "--monomial",
        ),
        (
            vec!["expand", "--arrangement", &fig1, "--monomial", "1,9"],
            "--monomial",
        ),
        (
            vec![
                "residue",
                "--arrangement",
                &fig1,
                "--order",
                "1,2,3",
                "--monomial",
                "1,2,4",
            ],
            "--order",
        ),
        (
            vec![
                "residue",
                "--arrangement",
                &fig1,
                "--order",
                "1,2",
                "--monomial",
                "1,2,4",
            ],
            "--order",
        ),
        (
            vec![
                "expand",
                "--arrangement",
                &fig1,
                "--monomial",
                "1,2",
                "--basis",
                &b3,
            ],
            "--basis",
        ),
        (
            vec!["dims", "--arrangement", "/nonexistent.json"],
            "--arrangement",
        ),
        (vec!["dims", "--arrangement", &m], "--arrangement"),
        (
            vec!["verify", "--arrangement", &fig1, "--exact-sequence", "9"],
            "--exact-sequence",
        ),
        (
            vec!["verify", "--arrangement", &fig1, "--chi", "--sum-residues"],
            "--sum-residues",
        ),
        (
            vec!["dims", "--arrangement", &fig1, "--algebra", "xyz"],
            "--algebra",
        ),
    ];
    for (args, flag) in cases {
        let o = osalg(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(stderr(&o).contains(flag), "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn enumeration_cap() {
    let fig1 = data("fig1.json");
    let o = Command::new(env!("CARGO_BIN_EXE_osalg"))
        .args(["dims", "--arrangement", &fig1])
        .env("OSALG_MAX_N", "5")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("OSALG_MAX_N"));
}
