use std::path::Path;
use std::process::{Command, Output};

use multiprong::control::{Budgets, ControlInstance, Goal, Prong, ProngSet, ResourceModel, WinnerModel};
use multiprong::election::{Candidate, CandidateId, Rule, Voter};
use multiprong::format;
use multiprong::oracle::solve_exhaustive;
use serde_json::Value;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_multiprong")).args(args).output().expect("binary runs")
}

fn report(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn plurality_instance(bribes: usize) -> ControlInstance {
    ControlInstance {
        candidates: vec![Candidate::new(0, "a"), Candidate::new(1, "b"), Candidate::new(2, "p")],
        spoilers: vec![],
        registered: vec![
            Voter::ranking("v1", &[0, 1, 2]),
            Voter::ranking("v2", &[0, 2, 1]),
            Voter::ranking("v3", &[1, 2, 0]),
            Voter::ranking("v4", &[2, 0, 1]),
        ],
        unregistered: vec![Voter::ranking("w1", &[1, 0, 2])],
        focus: CandidateId(2),
        budgets: Budgets { av: 1, bv: bribes, ..Budgets::default() },
        goal: Goal::Constructive,
        winner_model: WinnerModel::Unique,
        resource_model: ResourceModel::Separate,
        prongs: ProngSet::new([Prong::AddVoters, Prong::DeleteVoters, Prong::Bribe]),
    }
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn greedy_plan_is_verified() {
    let dir = tempfile::tempdir().unwrap();
    let inst = plurality_instance(1);
    assert!(solve_exhaustive(&inst, &Rule::Plurality).unwrap().is_plan());
    let path = write(dir.path(), "i.json", &format::instance_to_json(&inst));
    let plan_path = dir.path().join("plan.json");
    let o = bin(&["solve", "--instance", &path, "--rule", "plurality", "--solver", "greedy", "--out", plan_path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let r = report(&o);
    assert_eq!(r["outcome"], "plan");
    assert_eq!(r["verified"], true);
    assert_eq!(r["solver"], "greedy");
    assert_eq!(r["digest"], format::instance_digest(&inst));
    let plan = format::parse_plan(&std::fs::read_to_string(plan_path).unwrap()).unwrap();
    assert!(multiprong::control::check_plan_goal(&inst, &plan, &Rule::Plurality).unwrap());
}

#[test]
fn impossible_instance_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let mut inst = plurality_instance(0);
    inst.budgets = Budgets::default();
    assert!(!solve_exhaustive(&inst, &Rule::Plurality).unwrap().is_plan());
    let path = write(dir.path(), "i.json", &format::instance_to_json(&inst));
    for solver in ["auto", "greedy", "oracle", "fpt"] {
        let o = bin(&["solve", "--instance", &path, "--rule", "plurality", "--solver", solver]);
        assert_eq!(o.status.code(), Some(1), "{solver}");
        let r = report(&o);
        assert_eq!(r["outcome"], "impossible");
        assert_eq!(r["plan"], Value::Null);
    }
}

#[test]
fn fpt_refuses_approval() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "i.json", &format::instance_to_json(&plurality_instance(1)));
    let o = bin(&["solve", "--instance", &path, "--rule", "approval", "--solver", "fpt"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(report(&o)["outcome"], "error");
}

#[test]
fn unreadable_file_still_reports() {
    let o = bin(&["solve", "--instance", "/nonexistent/i.json", "--rule", "plurality"]);
    assert_eq!(o.status.code(), Some(2));
    let r = report(&o);
    assert_eq!(r["outcome"], "error");
    assert!(r["error"].as_str().unwrap().contains("cannot read"));
}

#[test]
fn envelope_comes_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "i.json", &format::instance_to_json(&plurality_instance(1)));
    let run = |env: &str| {
        Command::new(env!("CARGO_BIN_EXE_multiprong"))
            .args(["solve", "--instance", &path, "--rule", "plurality", "--solver", "oracle"])
            .env("CONTROL_ORACLE_ENVELOPE", env)
            .output()
            .unwrap()
    };
    assert_eq!(run("2,8,3").status.code(), Some(2));
    assert_eq!(run("5,8,3").status.code(), Some(0));
}

#[test]
fn routing_table_lists_every_planner() {
    let o = bin(&["solve", "--explain-routing"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    for r in multiprong::attack::ROUTES {
        assert!(text.contains(r.planner), "{}", r.planner);
    }
}

#[test]
fn reduce_dv_below_threshold_names_the_assumption() {
    let dir = tempfile::tempdir().unwrap();
    let x = write(dir.path(), "x.json", r#"{"ground":[1,2,3,4,5,6],"sets":[[1,2,3],[4,5,6],[1,2,4]],"k":2}"#);
    let o = bin(&["reduce", "--from", "x3c", "--to", "maximin-dv", "--goal", "c", "--input", &x]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8(o.stderr).unwrap().contains("n ≥ k ≥ 3"));
}

#[test]
fn reduced_yes_instance_is_solvable_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let x = write(dir.path(), "x.json", r#"{"ground":[1,2,3],"sets":[[1,2,3]],"k":1}"#);
    let out = dir.path().join("ac.json");
    let o = bin(&["reduce", "--from", "x3c", "--to", "maximin-ac", "--goal", "c", "--input", &x, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let digest = report(&o)["digest"].as_str().unwrap().to_string();
    let text = std::fs::read_to_string(&out).unwrap();
    let inst = format::parse_instance(&text).unwrap();
    assert_eq!(format::instance_digest(&inst), digest);
    assert_eq!(format::parse_instance(&format::instance_to_json(&inst)).unwrap(), inst);
    assert!(solve_exhaustive(&inst, &Rule::Maximin).unwrap().is_plan());
    let o = bin(&["solve", "--instance", out.to_str().unwrap(), "--rule", "maximin", "--solver", "oracle"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(report(&o)["digest"], digest.as_str());
}

#[test]
fn verify_table1_matches_twelve_cells() {
    let o = bin(&["verify", "--suite", "table1", "--n", "3", "--k", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let r = report(&o);
    let cells: Vec<&Value> = r["checks"].as_array().unwrap().iter().filter(|c| c["name"].as_str().unwrap().ends_with("cells")).collect();
    assert!(!cells.is_empty());
    for c in cells {
        assert_eq!(c["cases"], 12);
        assert_eq!(c["failures"], 0);
    }
}

#[test]
fn verify_dodgson_small_and_planner_sweep() {
    let o = bin(&["verify", "--suite", "dodgson", "--m", "3", "--n", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(report(&o)["checks"][0]["cases"], 56);
    let o = bin(&["verify", "--suite", "oracle-vs-greedy", "--rule", "plurality", "--samples", "50"]);
    assert_eq!(o.status.code(), Some(0));
    for c in report(&o)["checks"].as_array().unwrap() {
        assert_eq!(c["failures"], 0);
    }
}

#[test]
fn verify_rejects_unknown_suite() {
    assert_eq!(bin(&["verify", "--suite", "nope"]).status.code(), Some(2));
}

#[test]
fn dodgson_report_for_a_cycle() {
    let dir = tempfile::tempdir().unwrap();
    let e = write(
        dir.path(),
        "e.json",
        r#"{"candidates":[{"id":0,"name":"a"},{"id":1,"name":"b"},{"id":2,"name":"c"}],
            "ballots":[{"voter":"v1","order":[0,1,2]},{"voter":"v2","order":[1,2,0]},{"voter":"v3","order":[2,0,1]}]}"#,
    );
    let o = bin(&["dodgson", "--election", &e]);
    assert_eq!(o.status.code(), Some(0));
    let r = report(&o);
    // each candidate of the 3-cycle needs one swap
    for c in ["0", "1", "2"] {
        assert_eq!(r["dodgson"][c], 1);
    }
    assert_eq!(r["min_score"], 1);
}
