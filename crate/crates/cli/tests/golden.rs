//! Golden reports and the exit-code contract. Regenerate with
//! `UPDATE_GOLDEN=1 cargo test -p symnorm-cli --test golden`.

mod common;

use common::{golden_path, run_bin, update_requested, CASES};
use symnorm_cli::matfile::{parse_matrix_file, serialize, MatrixFile};

#[test]
fn reports_match_golden_files() {
    let mut mismatches = Vec::new();
    for case in CASES {
        let out = run_bin(case.args);
        assert_eq!(
            out.status.code(),
            Some(case.code),
            "{}: stderr {}",
            case.name,
            String::from_utf8_lossy(&out.stderr)
        );
        let path = golden_path(case);
        if update_requested() {
            std::fs::create_dir_all(path.parent().unwrap()).unwrap();
            std::fs::write(&path, &out.stdout).unwrap();
            continue;
        }
        let expected = std::fs::read(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        if expected != out.stdout {
            mismatches.push(case.name);
        }
    }
    assert!(
        mismatches.is_empty(),
        "reports differ from golden files: {mismatches:?}"
    );
}

#[test]
fn json_reports_parse_back() {
    for case in CASES.iter().filter(|c| !c.args.contains(&"text")) {
        let out = run_bin(case.args);
        let v: serde_json::Value = serde_json::from_slice(&out.stdout).expect(case.name);
        assert_eq!(v["command"][0], case.args[0], "{}", case.name);
        let verdict = v["verdict"].as_str().unwrap();
        let expected = match case.code {
            1 => "violated",
            _ if verdict == "computed" => "computed",
            _ => "verified",
        };
        assert_eq!(verdict, expected, "{}", case.name);
    }
}

fn expect_input_error(args: &[&str], needle: &str) {
    let out = run_bin(args);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert_eq!(out.status.code(), Some(2), "{args:?}: {stderr}");
    assert!(out.stdout.is_empty(), "{args:?}");
    assert!(stderr.contains(needle), "{args:?}: {stderr}");
}

#[test]
fn input_errors_exit_two() {
    expect_input_error(
        &["check", "--input", "bad_hermitian.json"],
        "block A is not Hermitian",
    );
    expect_input_error(&["check", "--input", "malformed.json"], "line 4");
    expect_input_error(
        &["check", "--input", "missing.json"],
        "cannot read missing.json",
    );
    expect_input_error(
        &["reduce", "--input", "T.json"],
        "neither X* commutes with A",
    );
    expect_input_error(
        &[
            "gen-family",
            "--a",
            "1",
            "--b",
            "-2",
            "--d",
            "0.1",
            "--verify",
        ],
        "a+b >= 0 is false",
    );
    expect_input_error(
        &["gen-family", "--a", "1", "--b", "0.5", "--d", "1"],
        "not negative",
    );
    expect_input_error(
        &["bound2", "--input", "det_blocks.json"],
        "block M is not Hermitian",
    );
    expect_input_error(&["check", "--input", "T.json", "--tol=-1"], "--tol must be");
    expect_input_error(&["frobnicate"], "unrecognized subcommand");
}

#[test]
fn examples_of_non_psd_inputs_are_reported_not_rejected() {
    let out = run_bin(&["examples", "--name", "Ny", "--y", "-0.1"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["psd"], false);
}

#[test]
fn bundled_files_round_trip() {
    for entry in std::fs::read_dir(common::data_dir()).unwrap() {
        let path = entry.unwrap().path();
        let Ok(file) = parse_matrix_file(&path) else {
            continue;
        };
        let text = serialize(&file);
        let back = symnorm_cli::matfile::parse_matrix_str(&text).unwrap();
        assert_eq!(back, file, "{}", path.display());
        if let MatrixFile::Block(_) = file {
            assert!(text.contains("\"X\""));
        }
    }
}

#[test]
fn bundled_t_is_the_library_example() {
    let file = parse_matrix_file(&common::data_dir().join("T.json")).unwrap();
    assert_eq!(
        file,
        MatrixFile::Block(symnorm::counterexamples::fixed_example_t())
    );
    let ny = parse_matrix_file(&common::data_dir().join("Ny.json")).unwrap();
    assert_eq!(
        ny,
        MatrixFile::Block(symnorm::counterexamples::fixed_example_ny(0.5))
    );
}
