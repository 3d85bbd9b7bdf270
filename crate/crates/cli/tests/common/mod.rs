//! Shared between the golden-file test and the acceptance suite.

#![allow(dead_code)]

use std::path::PathBuf;
use std::process::{Command, Output};

pub struct Case {
    pub name: &'static str,
    pub args: &'static [&'static str],
    pub code: i32,
}

/// One case per subcommand (plus variants) on the bundled example files.
pub const CASES: &[Case] = &[
    Case {
        name: "check_T",
        args: &["check", "--input", "T.json"],
        code: 1,
    },
    Case {
        name: "check_Ny",
        args: &["check", "--input", "Ny.json"],
        code: 1,
    },
    Case {
        name: "check_scalar_shift",
        args: &["check", "--input", "scalar_shift.json"],
        code: 0,
    },
    Case {
        name: "check_T_text",
        args: &["check", "--input", "T.json", "--format", "text"],
        code: 1,
    },
    Case {
        name: "decompose_T_re",
        args: &["decompose", "--input", "T.json", "--mode", "re"],
        code: 0,
    },
    Case {
        name: "decompose_T_im",
        args: &["decompose", "--input", "T.json", "--mode", "im"],
        code: 0,
    },
    Case {
        name: "norms_T",
        args: &["norms", "--input", "T.json", "--kyfan"],
        code: 0,
    },
    Case {
        name: "facts_T",
        args: &["facts", "--input", "T.json"],
        code: 0,
    },
    Case {
        name: "reduce_commuting",
        args: &["reduce", "--input", "commuting.json"],
        code: 0,
    },
    Case {
        name: "bound2_T",
        args: &["bound2", "--input", "T.json"],
        code: 0,
    },
    Case {
        name: "gen_family",
        args: &[
            "gen-family",
            "--a",
            "1,2",
            "--b",
            "-0.5,-1",
            "--d",
            "1,2",
            "--verify",
        ],
        code: 0,
    },
    Case {
        name: "examples_T",
        args: &["examples", "--name", "T", "--check"],
        code: 1,
    },
    Case {
        name: "examples_Ny",
        args: &["examples", "--name", "Ny", "--y", "0.5", "--check"],
        code: 1,
    },
    Case {
        name: "examples_Ny_text",
        args: &["examples", "--name", "Ny", "--y", "0", "--format", "text"],
        code: 0,
    },
    Case {
        name: "search",
        args: &["search", "--dim", "2", "--trials", "40", "--seed", "7"],
        code: 0,
    },
    Case {
        name: "det_shortcut",
        args: &["det-shortcut", "--input", "det_blocks.json"],
        code: 0,
    },
];

pub fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

pub fn data_dir() -> PathBuf {
    crate_dir().join("tests").join("data")
}

pub fn golden_path(case: &Case) -> PathBuf {
    let ext = if case.args.contains(&"text") {
        "txt"
    } else {
        "json"
    };
    crate_dir()
        .join("tests")
        .join("golden")
        .join(format!("{}.{ext}", case.name))
}

/// Runs the built binary from the data directory, so reports echo bare file names.
pub fn run_bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symnorm"))
        .args(args)
        .current_dir(data_dir())
        .output()
        .expect("binary runs")
}

pub fn update_requested() -> bool {
    std::env::var_os("UPDATE_GOLDEN").is_some_and(|v| v == "1")
}
