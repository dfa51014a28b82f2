//! Constructive plurality control by adding, deleting and bribing voters.

use multiprong::attack::plan_greedy;
use multiprong::control::{check_plan_goal, Budgets, ControlInstance, Goal, Prong, ProngSet, ResourceModel, WinnerModel};
use multiprong::election::{winners, Candidate, CandidateId, Rule, Voter};
use multiprong::oracle::solve_exhaustive;

fn main() {
    let inst = ControlInstance {
        candidates: vec![Candidate::new(0, "alice"), Candidate::new(1, "bob"), Candidate::new(2, "pat")],
        spoilers: vec![],
        registered: vec![
            Voter::ranking("v1", &[0, 1, 2]),
            Voter::ranking("v2", &[0, 2, 1]),
            Voter::ranking("v3", &[0, 1, 2]),
            Voter::ranking("v4", &[1, 2, 0]),
            Voter::ranking("v5", &[2, 0, 1]),
        ],
        unregistered: vec![Voter::ranking("w1", &[2, 1, 0]), Voter::ranking("w2", &[1, 0, 2])],
        focus: CandidateId(2),
        budgets: Budgets { av: 1, dv: 1, bv: 1, ..Budgets::default() },
        goal: Goal::Constructive,
        winner_model: WinnerModel::Unique,
        resource_model: ResourceModel::Separate,
        prongs: ProngSet::new([Prong::AddVoters, Prong::DeleteVoters, Prong::Bribe]),
    };
    let rule = Rule::Plurality;
    println!("winners before: {:?}", winners(&inst.base_election(), &rule).unwrap());

    let r = plan_greedy(&inst, &rule).unwrap();
    for m in &r.trace {
        println!("  {m}");
    }
    let plan = r.plan().expect("pat can be made the unique winner");
    println!("plan re-verifies: {}", check_plan_goal(&inst, plan, &rule).unwrap());
    println!("oracle agrees: {}", solve_exhaustive(&inst, &rule).unwrap().is_plan());

    let mut tight = inst.clone();
    tight.budgets = Budgets { av: 1, ..Budgets::default() };
    println!("with only one added voter: plan = {}", plan_greedy(&tight, &rule).unwrap().is_plan());
}
