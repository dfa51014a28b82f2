//! Maximin control by adding and deleting candidates.

use multiprong::attack::{maximin_constructive_acu_dc, maximin_destructive_ac_dc};
use multiprong::control::{apply_plan, Budgets, ControlInstance, Goal, Prong, ProngSet, ResourceModel, WinnerModel};
use multiprong::election::{scores, winners, Candidate, CandidateId, Rule, Voter};

fn instance() -> ControlInstance {
    // p = 0, a = 1, b = 2 registered; s = 3 is a spoiler
    ControlInstance {
        candidates: vec![Candidate::new(0, "p"), Candidate::new(1, "a"), Candidate::new(2, "b")],
        spoilers: vec![Candidate::new(3, "s")],
        registered: vec![
            Voter::ranking("v1", &[1, 2, 3, 0]),
            Voter::ranking("v2", &[1, 0, 2, 3]),
            Voter::ranking("v3", &[1, 0, 3, 2]),
            Voter::ranking("v4", &[0, 2, 1, 3]),
            Voter::ranking("v5", &[1, 2, 0, 3]),
        ],
        unregistered: vec![],
        focus: CandidateId(0),
        budgets: Budgets { ac: 1, dc: 1, ..Budgets::default() },
        goal: Goal::Constructive,
        winner_model: WinnerModel::Unique,
        resource_model: ResourceModel::Separate,
        prongs: ProngSet::new([Prong::AddCandidatesUnlimited, Prong::DeleteCandidates]),
    }
}

fn main() {
    let rule = Rule::Maximin;
    let inst = instance();
    let e = inst.base_election();
    let shown: Vec<String> = scores(&e, &rule).unwrap().iter().map(|(c, s)| format!("{c}={s}")).collect();
    println!("maximin scores: {}", shown.join(" "));
    println!("winners: {:?}", winners(&e, &rule).unwrap());

    let r = maximin_constructive_acu_dc(&inst).unwrap();
    println!("constructive ACu+DC: {:?}", r.trace.iter().map(|m| m.to_string()).collect::<Vec<_>>());
    if let Some(plan) = r.plan() {
        println!("winners after: {:?}", winners(&apply_plan(&inst, plan).unwrap(), &rule).unwrap());
    }

    let mut d = inst.clone();
    d.goal = Goal::Destructive;
    d.focus = CandidateId(1);
    d.prongs = ProngSet::new([Prong::AddCandidates, Prong::DeleteCandidates]);
    d.budgets = Budgets { ac: 1, dc: 1, ..Budgets::default() };
    let r = maximin_destructive_ac_dc(&d).unwrap();
    println!("destructive AC+DC against a: {:?}", r.trace.iter().map(|m| m.to_string()).collect::<Vec<_>>());
    // a beats every rival head to head, so it wins every subelection it is in
    println!("plan found: {}", r.is_plan());
}
