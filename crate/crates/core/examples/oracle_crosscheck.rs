//! Polynomial planners against the exhaustive oracle on random instances.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use multiprong::attack::plan_greedy;
use multiprong::control::{check_plan_goal, Goal, Prong};
use multiprong::election::{Alpha, Rule};
use multiprong::oracle::solve_exhaustive;
use multiprong::sample::{random_instance, Shape};

fn main() {
    let mut g = ChaCha8Rng::seed_from_u64(3);
    let cases = [
        (Rule::Plurality, Goal::Constructive, vec![Prong::AddVoters, Prong::DeleteVoters, Prong::Bribe]),
        (Rule::Plurality, Goal::Destructive, vec![Prong::AddVoters, Prong::DeleteVoters, Prong::Bribe]),
        (Rule::Copeland(Alpha::HALF), Goal::Destructive, vec![Prong::AddCandidates, Prong::DeleteCandidates]),
        (Rule::Maximin, Goal::Destructive, vec![Prong::AddCandidates, Prong::DeleteCandidates]),
    ];
    for (rule, goal, prongs) in cases {
        let mut shape = Shape::new(3, 4, &prongs, goal);
        shape.unregistered = 1;
        shape.spoilers = 1;
        let (mut n, mut disagree, mut yes) = (0, 0, 0);
        for _ in 0..200 {
            let inst = random_instance(&mut g, &shape);
            let greedy = plan_greedy(&inst, &rule).unwrap();
            let oracle = solve_exhaustive(&inst, &rule).unwrap();
            if let Some(plan) = greedy.plan() {
                assert!(check_plan_goal(&inst, plan, &rule).unwrap());
            }
            n += 1;
            yes += oracle.is_plan() as usize;
            disagree += (greedy.is_plan() != oracle.is_plan()) as usize;
        }
        println!("{rule} {goal:?}: {n} cases, {yes} solvable, {disagree} disagreements");
    }
}
