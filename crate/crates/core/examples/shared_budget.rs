//! One pooled budget across prongs versus every split into separate budgets.

use multiprong::control::{shared_to_separate, Budgets, ControlInstance, Goal, Prong, ProngSet, ResourceModel, WinnerModel};
use multiprong::election::{Candidate, CandidateId, Rule, Voter};
use multiprong::oracle::solve_exhaustive;

fn main() {
    let inst = ControlInstance {
        candidates: vec![Candidate::new(0, "a"), Candidate::new(1, "b"), Candidate::new(2, "p")],
        spoilers: vec![],
        registered: vec![
            Voter::ranking("v1", &[0, 1, 2]),
            Voter::ranking("v2", &[0, 1, 2]),
            Voter::ranking("v3", &[0, 2, 1]),
            Voter::ranking("v4", &[2, 1, 0]),
        ],
        unregistered: vec![Voter::ranking("w1", &[2, 0, 1])],
        focus: CandidateId(2),
        budgets: Budgets::default(),
        goal: Goal::Constructive,
        winner_model: WinnerModel::Unique,
        resource_model: ResourceModel::Shared(2),
        prongs: ProngSet::new([Prong::AddVoters, Prong::Bribe]),
    };
    let rule = Rule::Plurality;
    let shared = solve_exhaustive(&inst, &rule).unwrap();
    println!("shared pool of 2: plan = {}", shared.is_plan());
    let mut any = false;
    for split in shared_to_separate(&inst) {
        let ok = solve_exhaustive(&split, &rule).unwrap().is_plan();
        any |= ok;
        println!("  av = {}, bv = {}: plan = {ok}", split.budgets.av, split.budgets.bv);
    }
    println!("some split works: {any}");
}
