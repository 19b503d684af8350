//! Golden cases shared by the golden test and the acceptance runner.

use std::path::{Path, PathBuf};
use std::process::Command;

pub struct Case {
    pub name: &'static str,
    pub args: &'static [&'static str],
}

const fn case(name: &'static str, args: &'static [&'static str]) -> Case {
    Case { name, args }
}

pub const CASES: &[Case] = &[
    case("rewrite_square", &["rewrite", "d(x^2)"]),
    case("rewrite_product", &["rewrite", "d(d(x)*x+3)"]),
    case("rewrite_quotient", &["rewrite", "d(1/x)"]),
    case("rewrite_formula", &["rewrite", "d(x)/x <= 1"]),
    case("rewrite_two_derivations", &["rewrite", "--p", "2", "d2(d(x*y))"]),
    case("rewrite_seed", &["rewrite", "--seed", "2"]),
    case("rewrite_parse_error", &["rewrite", "d(x^2"]),
    case("rewrite_quantifier", &["rewrite", "exists y. y > 0"]),
    case("lie_rotation", &["lie", "x -> y, y -> -x; x -> 1"]),
    case("lie_commuting", &["lie", "x -> 1, y -> 0; x -> 0, y -> 1"]),
    case("lie_malformed", &["lie", "x -> 1"]),
    case("coherence_check_exp", &["coherence", "check", "-f", "data/exp.cond"]),
    case("coherence_check_probe", &["coherence", "check", "--ord", "4", "-f", "data/exp.cond"]),
    case("coherence_check_incoherent", &["coherence", "check", "-f", "data/incoherent.cond"]),
    case("coherence_check_seed", &["coherence", "check", "--seed", "2", "--ord", "3"]),
    case("coherence_solve_exp", &["coherence", "solve", "--deg", "3", "-f", "data/exp.cond"]),
    case("coherence_solve_incoherent", &["coherence", "solve", "-f", "data/incoherent.cond"]),
    case("coherence_missing_file", &["coherence", "check", "-f", "data/missing.cond"]),
    case("singer_check_exp", &["singer", "check", "-f", "data/exp.singer"]),
    case("singer_check_bad", &["singer", "check", "-f", "data/bad_premise.singer"]),
    case("singer_solve_exp", &["singer", "solve", "--deg", "6", "-f", "data/exp.singer"]),
    case("singer_solve_rosenlicht", &["singer", "solve", "--deg", "4", "-f", "data/rosenlicht.singer"]),
    case("singer_solve_bad", &["singer", "solve", "-f", "data/bad_premise.singer"]),
    case("rank_plain", &["rank", "x, y | x*y"]),
    case("rank_delta", &["rank", "--delta", "x -> y, y -> -x", "x"]),
    case("theta_min", &["theta", "min", "[2,0] [1,1] [2,2]"]),
    case("theta_cmp", &["theta", "cmp", "[1,0] [0,2]"]),
    case("theta_join", &["theta", "join", "[2,0] [1,1]"]),
    case("theta_meet", &["theta", "meet", "[2,0] [1,1]"]),
    case("theta_pred", &["theta", "pred", "[2,1]"]),
    case("theta_enum", &["theta", "enum", "--p", "2", "--ord", "2"]),
    case("theta_arity", &["theta", "min", "[1,0] [1]"]),
    case("delta_dim_constants", &["delta-dim", "1,0"]),
    case("delta_dim_two_rows", &["delta-dim", "1,0; 1,1"]),
    case("delta_dim_bad", &["delta-dim", "1,2"]),
    case("decide1_sat", &["decide1", "x^2 - 2 > 0 & 0 < x & x < 2"]),
    case("decide1_unsat", &["decide1", "x^2 + 1 = 0"]),
    case("decide1_root", &["decide1", "x^2 - 2 = 0"]),
    case("decide1_two_variables", &["decide1", "x > y"]),
    case("eval_product", &["eval", "d(x)*x", "--at", "x=series(5; 1, 2, 3)"]),
    case("eval_nonunit", &["eval", "1/x", "--at", "x=series(4; 0, 1)"]),
    case("witness_box", &["witness-box", "(0, 1) (2, 5/2)"]),
    case("witness_box_empty", &["witness-box", "(1, 1)"]),
];

pub fn dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests")
}

pub struct Run {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

pub fn run(args: &[&str], json: bool) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_tderiv"));
    cmd.current_dir(dir());
    if json {
        cmd.arg("--json");
    }
    let out = cmd.args(args).output().expect("binary runs");
    Run {
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
        code: out.status.code().unwrap_or(-1),
    }
}

/// Exit status followed by stdout and stderr.
pub fn transcript(r: &Run) -> String {
    format!("exit: {}\n--- stdout\n{}--- stderr\n{}", r.code, r.stdout, r.stderr)
}

pub fn golden_path(name: &str, json: bool) -> PathBuf {
    dir().join("golden").join(format!("{name}.{}", if json { "json.txt" } else { "txt" }))
}

/// Compares against the golden file, or rewrites it when `UPDATE_GOLDEN`
/// is set. Returns a description of the mismatch.
pub fn check_golden(case: &Case, json: bool) -> Result<(), String> {
    let got = transcript(&run(case.args, json));
    let path = golden_path(case.name, json);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &got).unwrap();
        return Ok(());
    }
    let want = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    if got == want {
        Ok(())
    } else {
        Err(format!("{} differs:\n--- expected\n{want}\n--- got\n{got}", path.display()))
    }
}
