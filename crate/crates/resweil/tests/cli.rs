use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin(args: &[&str], paths: &[&Path]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_resweil"))
        .args(args)
        .args(paths)
        .output()
        .unwrap()
}

fn corpus() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("cases")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("resweil-cli-{}-{}", name, std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    for e in std::fs::read_dir(corpus()).unwrap() {
        let p = e.unwrap().path();
        std::fs::copy(&p, dir.join(p.file_name().unwrap())).unwrap();
    }
    dir
}

#[test]
fn corpus_passes() {
    let out = bin(&["verify"], &[&corpus()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn corrupted_file_is_an_input_error() {
    let dir = scratch("corrupt");
    std::fs::write(
        dir.join("zz-broken.case"),
        "case \"broken\"\nfield p = 7\nalgebra A : vars e ; rels e^2\nscheme X : vars y ; rels y^2 - u\n",
    )
    .unwrap();
    let out = bin(&["verify"], &[&dir]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(
        err.contains("zz-broken.case:line 4, column 32: undeclared variable `u`"),
        "{}",
        err
    );
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn wrong_expectation_is_a_verification_failure() {
    let dir = scratch("mismatch");
    let f = dir.join("dual-numbers-p7.case");
    let text = std::fs::read_to_string(&f)
        .unwrap()
        .replace("expect pi0_res = 2", "expect pi0_res = 5");
    std::fs::write(&f, text).unwrap();
    let out = bin(&["verify", "--json"], &[&dir]);
    assert_eq!(out.status.code(), Some(1));
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let failing: Vec<&serde_json::Value> = json["cases"]
        .as_array()
        .unwrap()
        .iter()
        .flat_map(|c| c["report"]["checks"].as_array().unwrap())
        .filter(|c| c["passed"] == false && c["expected_failure"] == false)
        .collect();
    assert_eq!(failing.len(), 1);
    assert_eq!(failing[0]["name"], "expect/pi0_res");
    assert_eq!(failing[0]["detail"], "mismatch: expected 5, computed 2");
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn report_field_order_is_stable() {
    let out = bin(
        &["verify", "--json", "--timings"],
        &[&corpus().join("quad-field-p5.case")],
    );
    let text = String::from_utf8(out.stdout).unwrap();
    let keys = [
        "\"case\"",
        "\"inputs\"",
        "\"dims\"",
        "\"S\"",
        "\"fibers\"",
        "\"restriction\"",
        "\"pi0_left\"",
        "\"pi0_right\"",
        "\"cycle_types\"",
        "\"psi_witness\"",
        "\"checks\"",
        "\"timings_ms\"",
        "\"seed\"",
    ];
    let report = &text[text.find("\"report\"").unwrap()..];
    let pos: Vec<usize> = keys
        .iter()
        .map(|k| {
            report
                .find(&format!("\n        {}", k))
                .unwrap_or_else(|| panic!("{}", k))
        })
        .collect();
    assert!(pos.windows(2).all(|w| w[0] < w[1]), "{:?}", pos);
    let json: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert!(json["cases"][0]["report"]["timings_ms"].is_object());
    let plain = bin(&["verify", "--json"], &[&corpus().join("quad-field-p5.case")]);
    let json: serde_json::Value = serde_json::from_slice(&plain.stdout).unwrap();
    assert!(json["cases"][0]["report"]["timings_ms"].is_null());
}

#[test]
fn subcommands() {
    let dual = corpus().join("dual-numbers-p7.case");
    let out = bin(&["restrict"], &[&dual]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("vars y0, y1\n"), "{}", text);
    assert!(text.contains("rel y0^2 - y0\n"), "{}", text);
    let out = bin(&["pi0"], &[&corpus().join("quad-field-p5.case")]);
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .starts_with("# quad-field-p5: 4 components"));
    let out = bin(&["points", "--ext", "2"], &[&dual]);
    assert!(String::from_utf8(out.stdout).unwrap().contains(": 2 points over F_7^2"));
    let out = bin(&["restrict"], &[Path::new("/nonexistent.case")]);
    assert_eq!(out.status.code(), Some(2));
}
