//! Every acceptance criterion at its stated tolerance. Prints one PASS/FAIL
//! line per criterion (run with `--nocapture` to see them as they finish).

use alphaflow_cli::cmd_verify;

#[test]
fn acceptance_criteria() {
    let verdicts = cmd_verify("all", std::io::stdout()).expect("suite `all` is registered");
    assert_eq!(verdicts.len(), 11);
    let failing: Vec<String> = verdicts.iter().filter(|v| !v.pass).map(ToString::to_string).collect();
    assert!(failing.is_empty(), "failing criteria:\n{}", failing.join("\n"));
}
