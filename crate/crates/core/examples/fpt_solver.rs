//! The integer-program solver on four-candidate instances, checked against
//! the oracle.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use multiprong::control::{Goal, Prong};
use multiprong::election::Rule;
use multiprong::fpt::fpt_solve;
use multiprong::oracle::solve_exhaustive;
use multiprong::sample::{random_instance, Shape};

fn main() {
    let mut g = ChaCha8Rng::seed_from_u64(7);
    let prongs = [Prong::AddVoters, Prong::DeleteVoters, Prong::Bribe];
    for rule in [Rule::Plurality, Rule::Maximin, "borda".parse().unwrap()] {
        for goal in [Goal::Constructive, Goal::Destructive] {
            let mut shape = Shape::new(4, 4, &prongs, goal);
            shape.unregistered = 2;
            shape.max_budget = 1;
            let (mut yes, mut agree) = (0, 0);
            let total = 25;
            for _ in 0..total {
                let inst = random_instance(&mut g, &shape);
                let a = fpt_solve(&inst, &rule).unwrap();
                let b = solve_exhaustive(&inst, &rule).unwrap();
                yes += a.is_plan() as usize;
                agree += (a.is_plan() == b.is_plan()) as usize;
            }
            println!("{rule} {goal:?}: {agree}/{total} agree with the oracle, {yes} solvable");
        }
    }
}
