use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_witt-parshin"))
        .args(args)
        .env_remove("WITT_PARSHIN_WINDOW")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> serde_json::Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = run(&all);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn pair_three_methods_agree() {
    let field = ["pair", "--p", "3", "--d", "1", "--m", "1"];
    let out = run(&[&field[..], &["--x", "[S^-1*T^-1]", "--y", "{1+S*T, S}", "--method", "all"]].concat());
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("2 (mod 3)"), "{text}");
    assert!(text.contains("methods agree"), "{text}");
}

#[test]
fn pair_constant_against_st() {
    let out = run(&["pair", "--p", "2", "--d", "1", "--m", "2", "--x", "[1,0]", "--y", "{S,T}"]);
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("1 (mod 4)"));
}

#[test]
fn pair_single_methods() {
    for method in ["theorem1", "parshin", "closed"] {
        let x = "[a*S^-1*T^-1, S^-2*T^-1]";
        let y = "{1+a*S*T, S}^3 * {S, T}^2";
        let v = json(&["pair", "--p", "5", "--d", "2", "--m", "2", "--x", x, "--y", y, "--method", method]);
        assert_eq!(v["value"], 17, "{method}");
        assert_eq!(v["methods"].as_object().unwrap().len(), 1);
    }
}

#[test]
fn ram_ell_and_profile() {
    let out = run(&["ram", "--p", "2", "--r", "0,5", "--index", "3,1"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("ell((0, 5), (3, 1)) = 3"));

    let v = json(&["ram", "--p", "3", "--r", "4,1", "--index", "1,0", "--bound", "2"]);
    assert!(v["ell"].is_null());

    let v = json(&["ram", "--p", "2", "--m", "3", "--r", "0,5", "--bound", "3", "--y", "{1+S^3*T, S}"]);
    assert_eq!(v["member"], false);
    let v = json(&["ram", "--p", "2", "--m", "3", "--r", "0,5", "--bound", "3", "--y", "{1+S^3*T, S}^8"]);
    assert_eq!(v["member"], true);
}

#[test]
fn input_errors_exit_2() {
    let cases: [&[&str]; 5] = [
        &["pair", "--p", "3", "--x", "[S^-1*", "--y", "{S,T}"],
        &["pair", "--p", "4", "--x", "[1]", "--y", "{S,T}"],
        &["pair", "--p", "3", "--x", "[1, 1]", "--y", "{S,T}"],
        &["normalize", "--p", "3", "--y", "{S, 0}"],
        &["ram", "--p", "2", "--r", "1,1", "--index", "2,4"],
    ];
    for args in cases {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
    }
    let out = run(&["pair", "--p", "3", "--x", "(", "--y", "{S,T}"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("1:"));
}

#[test]
fn window_override() {
    let out = Command::new(env!("CARGO_BIN_EXE_witt-parshin"))
        .args(["pair", "--p", "3", "--x", "[S^-1*T^-1]", "--y", "{1+S*T, S}"])
        .env("WITT_PARSHIN_WINDOW", "8,64")
        .output()
        .unwrap();
    assert!(out.status.success());
    let out = Command::new(env!("CARGO_BIN_EXE_witt-parshin"))
        .args(["pair", "--p", "3", "--x", "[1]", "--y", "{S,T}"])
        .env("WITT_PARSHIN_WINDOW", "nonsense")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn printed_forms_round_trip() {
    let y = "{1+S*T+S^2, S*T}^2 * {S,T}";
    let first = stdout(&run(&["normalize", "--p", "3", "--m", "2", "--y", y]));
    let again = stdout(&run(&["normalize", "--p", "3", "--m", "2", "--y", first.trim()]));
    assert_eq!(first, again);

    let x = "[S^-3*T^-3 + S^-1, T^-2]";
    let red = stdout(&run(&["reduce", "--p", "3", "--m", "2", "--x", x]));
    assert!(red.contains("verified"));
    let p1 = json(&["pair", "--p", "3", "--m", "2", "--x", x, "--y", y]);
    let p2 = json(&["pair", "--p", "3", "--m", "2", "--x", x, "--y", first.trim()]);
    assert_eq!(p1["value"], p2["value"]);
}

#[test]
fn output_is_deterministic() {
    let args = ["reduce", "--p", "2", "--d", "2", "--m", "2", "--x", "[a*S^-2*T^-2 + S^-3, 1]", "--format", "json"];
    assert_eq!(stdout(&run(&args)), stdout(&run(&args)));
}

#[test]
fn selftest_small_scale() {
    let v = json(&["selftest", "--scale", "50"]);
    let crit = v["criteria"].as_array().unwrap();
    assert_eq!(crit.len(), 9);
    assert!(crit.iter().all(|c| c["failures"] == 0));
}
