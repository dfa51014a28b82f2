use std::path::PathBuf;
use std::process::Command;

const EXAMPLES: [&str; 8] = [
    "plurality_attack",
    "maximin_candidate_control",
    "fpt_solver",
    "x3c_reductions",
    "dodgson_sandwich",
    "shared_budget",
    "oracle_crosscheck",
    "llull",
];

fn example_path(name: &str) -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    let dir = exe.parent().unwrap().parent().unwrap().join("examples");
    dir.join(format!("{name}{}", std::env::consts::EXE_SUFFIX))
}

#[test]
fn every_example_runs() {
    for name in EXAMPLES {
        let path = example_path(name);
        assert!(path.exists(), "{} not built", path.display());
        let out = Command::new(&path).output().unwrap();
        assert!(out.status.success(), "{name}: {}", String::from_utf8_lossy(&out.stderr));
        let text = String::from_utf8(out.stdout).unwrap();
        assert!(!text.is_empty(), "{name} printed nothing");
        assert!(!text.contains("disagree") || text.contains(" 0 disagreements"), "{name}: {text}");
    }
}

#[test]
fn examples_report_expected_outcomes() {
    let run = |name: &str| String::from_utf8(Command::new(example_path(name)).output().unwrap().stdout).unwrap();
    assert!(run("plurality_attack").contains("oracle agrees: true"));
    assert!(run("x3c_reductions").contains("AC oracle: false"));
    assert!(run("llull").contains("OriginalLlull AC+AV: plan = true"));
    assert!(run("shared_budget").contains("some split works: true"));
    let fpt = run("fpt_solver");
    assert_eq!(fpt.matches("25/25 agree").count(), 6, "{fpt}");
}
