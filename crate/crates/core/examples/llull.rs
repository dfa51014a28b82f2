//! Copeland¹ voter addition translated into OriginalLlull.

use multiprong::control::{Budgets, ControlInstance, Goal, Prong, ProngSet, ResourceModel, WinnerModel};
use multiprong::election::{winners, Alpha, Candidate, CandidateId, Rule, Voter};
use multiprong::oracle::{solve_exhaustive_with, OracleEnvelope, OracleOptions};
use multiprong::reduction::reduce_copeland1_av_to_llull;

fn main() {
    let src = ControlInstance {
        candidates: vec![Candidate::new(0, "p"), Candidate::new(1, "a"), Candidate::new(2, "b")],
        spoilers: vec![],
        registered: vec![Voter::ranking("x", &[1, 0, 2]), Voter::ranking("y", &[2, 0, 1])],
        unregistered: vec![Voter::ranking("z", &[0, 1, 2]), Voter::ranking("u", &[2, 1, 0])],
        focus: CandidateId(0),
        budgets: Budgets { av: 1, ..Budgets::default() },
        goal: Goal::Constructive,
        winner_model: WinnerModel::Unique,
        resource_model: ResourceModel::Separate,
        prongs: ProngSet::new([Prong::AddVoters]),
    };
    let opts = OracleOptions { envelope: OracleEnvelope::unbounded(), ..OracleOptions::default() };
    let copeland = Rule::Copeland(Alpha::ONE);
    println!("Copeland winners: {:?}", winners(&src.base_election(), &copeland).unwrap());
    let a = solve_exhaustive_with(&src, &copeland, &opts).unwrap();
    println!("Copeland¹ AV: plan = {}", a.is_plan());

    let llull = reduce_copeland1_av_to_llull(&src).unwrap();
    let names: Vec<&str> = llull.registered.iter().map(|v| v.name.as_str()).collect();
    println!("Llull instance: {} candidates, {} spoilers, voters {names:?}", llull.candidates.len(), llull.spoilers.len());
    let b = solve_exhaustive_with(&llull, &Rule::OriginalLlull, &opts).unwrap();
    println!("OriginalLlull AC+AV: plan = {}", b.is_plan());
    for m in &b.trace {
        println!("  {m}");
    }
}
