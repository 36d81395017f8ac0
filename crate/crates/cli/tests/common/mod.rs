//! Golden CLI cases shared by the integration and acceptance tests.

#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

pub const D2: &str = "x!=y & (E(x,y) | exists z. E(x,z) & E(z,y))";

pub struct Case {
    pub name: &'static str,
    pub args: &'static [&'static str],
    pub code: i32,
}

pub const CASES: &[Case] = &[
    Case {
        name: "wcol_p3",
        args: &["wcol", "-g", "p3.graph", "--order", "0,1,2", "-r", "1"],
        code: 0,
    },
    Case {
        name: "wcol_k1",
        args: &["wcol", "-g", "k1.graph", "-r", "5"],
        code: 0,
    },
    Case {
        name: "wcol_colored_json",
        args: &[
            "wcol",
            "-g",
            "colored.graph",
            "-r",
            "1,2",
            "--exact",
            "--format",
            "json",
        ],
        code: 0,
    },
    Case {
        name: "wcol_exact_cap",
        args: &["wcol", "-g", "p4.graph", "--exact", "--cap-exact-wcol", "3"],
        code: 4,
    },
    Case {
        name: "wcol_missing_graph",
        args: &["wcol", "-r", "1"],
        code: 2,
    },
    Case {
        name: "wcol_bad_strategy",
        args: &["wcol", "-g", "p3.graph", "--order", "strategy:random"],
        code: 2,
    },
    Case {
        name: "bush_build_k2",
        args: &[
            "bush",
            "build",
            "-g",
            "k2.graph",
            "-r",
            "1",
            "-q",
            "1",
            "--formula",
            "E(x,y)",
        ],
        code: 0,
    },
    Case {
        name: "bush_build_k2_dot",
        args: &[
            "bush",
            "build",
            "-g",
            "k2.graph",
            "-r",
            "1",
            "-q",
            "1",
            "--formula",
            "E(x,y)",
            "--format",
            "dot",
        ],
        code: 0,
    },
    Case {
        name: "bush_build_p4_d2",
        args: &[
            "bush",
            "build",
            "-g",
            "p4.graph",
            "-r",
            "2",
            "-q",
            "1",
            "--formula",
            D2,
        ],
        code: 0,
    },
    Case {
        name: "bush_adequacy_p4",
        args: &[
            "bush",
            "build",
            "-g",
            "p4.graph",
            "-r",
            "1",
            "-q",
            "0",
            "--formula",
            D2,
        ],
        code: 3,
    },
    Case {
        name: "bush_decode_k2",
        args: &["bush", "decode", "k2.bush.json"],
        code: 0,
    },
    Case {
        name: "bush_verify_k2",
        args: &[
            "bush",
            "verify",
            "k2.bush.json",
            "-g",
            "k2.graph",
            "--formula",
            "E(x,y)",
        ],
        code: 0,
    },
    Case {
        name: "bush_verify_tampered",
        args: &[
            "bush",
            "verify",
            "k2.tampered.bush.json",
            "-g",
            "k2.graph",
            "--formula",
            "E(x,y)",
        ],
        code: 1,
    },
    Case {
        name: "bush_one_label_k2",
        args: &["bush", "one-label", "k2.bush.json"],
        code: 0,
    },
    Case {
        name: "bush_stats_colored",
        args: &["bush", "stats", "-g", "colored.graph", "-r", "1"],
        code: 0,
    },
    Case {
        name: "qbush_build_p3",
        args: &[
            "qbush",
            "build",
            "-g",
            "p3.graph",
            "--order",
            "0,1,2",
            "-r",
            "1",
            "--formula",
            "E(x,y)",
            "-q",
            "1",
        ],
        code: 0,
    },
    Case {
        name: "qbush_build_p3_dot",
        args: &[
            "qbush",
            "build",
            "-g",
            "p3.graph",
            "--order",
            "0,1,2",
            "-r",
            "1",
            "--formula",
            "E(x,y)",
            "-q",
            "1",
            "--format",
            "dot",
        ],
        code: 0,
    },
    Case {
        name: "qbush_adequacy_p4",
        args: &[
            "qbush",
            "build",
            "-g",
            "p4.graph",
            "-r",
            "1",
            "-q",
            "0",
            "--formula",
            D2,
        ],
        code: 3,
    },
    Case {
        name: "qbush_separator_p3",
        args: &[
            "qbush",
            "separator",
            "-g",
            "p3.graph",
            "--order",
            "0,1,2",
            "-r",
            "1",
        ],
        code: 0,
    },
    Case {
        name: "qbush_decode_p3",
        args: &["qbush", "decode", "p3.qb.json"],
        code: 0,
    },
    Case {
        name: "qbush_verify_p3",
        args: &[
            "qbush",
            "verify",
            "p3.qb.json",
            "-g",
            "p3.graph",
            "--formula",
            "E(x,y)",
        ],
        code: 0,
    },
    Case {
        name: "qbush_verify_wrong_formula",
        args: &[
            "qbush",
            "verify",
            "p3.qb.json",
            "-g",
            "p3.graph",
            "--formula",
            D2,
        ],
        code: 1,
    },
    Case {
        name: "qbush_stats_colored",
        args: &["qbush", "stats", "-g", "colored.graph", "-r", "1"],
        code: 0,
    },
    Case {
        name: "qbush_stats_colored_json",
        args: &[
            "qbush",
            "stats",
            "-g",
            "colored.graph",
            "-r",
            "1",
            "--format",
            "json",
        ],
        code: 0,
    },
    Case {
        name: "kernel_star50",
        args: &[
            "kernel",
            "-g",
            "star50.graph",
            "-A",
            "7",
            "--formula",
            "exists y. E(x,y)",
        ],
        code: 0,
    },
    Case {
        name: "kernel_colored",
        args: &[
            "kernel",
            "-g",
            "colored.graph",
            "-A",
            "0,3",
            "--formula",
            "exists z. E(x,z) & E(z,y) & red(z)",
        ],
        code: 0,
    },
    Case {
        name: "cover_p3_qbush",
        args: &[
            "cover",
            "-g",
            "p3.graph",
            "--qbush",
            "p3.qb.json",
            "-p",
            "1",
        ],
        code: 0,
    },
    Case {
        name: "cover_colored_treedepth",
        args: &["cover", "-g", "colored.graph", "-p", "2"],
        code: 0,
    },
    Case {
        name: "cover_zero_p",
        args: &["cover", "-g", "p3.graph", "-p", "0"],
        code: 2,
    },
    Case {
        name: "graph_dot_colored",
        args: &["graph", "dot", "-g", "colored.graph"],
        code: 0,
    },
    Case {
        name: "graph_info_colored",
        args: &["graph", "info", "-g", "colored.graph"],
        code: 0,
    },
    Case {
        name: "graph_info_cap",
        args: &["graph", "info", "-g", "p4.graph", "--cap-treedepth", "2"],
        code: 4,
    },
    Case {
        name: "graph_interpret_p4_d2",
        args: &["graph", "interpret", "-g", "p4.graph", "--formula", D2],
        code: 0,
    },
    Case {
        name: "graph_parse_error",
        args: &["graph", "info", "-g", "k2.bush.json"],
        code: 2,
    },
];

pub fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data")
}

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

pub fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_shrubkit"));
    c.current_dir(data_dir());
    c.env_remove("SHRUBKIT_THREADS");
    c
}

/// Exit code, stdout and stderr of one run.
pub fn run(args: &[&str]) -> (i32, Vec<u8>, Vec<u8>) {
    let out = bin().args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), out.stdout, out.stderr)
}

/// The bytes a golden file stores for a run: stdout, then stderr after a
/// marker line.
pub fn golden_bytes(stdout: &[u8], stderr: &[u8]) -> Vec<u8> {
    let mut v = stdout.to_vec();
    v.extend_from_slice(b"--- stderr ---\n");
    v.extend_from_slice(stderr);
    v
}
