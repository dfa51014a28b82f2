//! Maximin hardness reductions from exact cover by 3-sets.

use multiprong::control::Goal;
use multiprong::election::{scores, Rule};
use multiprong::oracle::{solve_exhaustive_with, OracleEnvelope, OracleOptions};
use multiprong::reduction::{reduce_maximin_av, reduce_maximin_constructive_ac, reduce_maximin_dv, x3c_is_yes, X3CInstance};

fn main() {
    let yes = X3CInstance::new(vec![1, 2, 3, 4, 5, 6], vec![vec![1, 2, 3], vec![4, 5, 6], vec![1, 2, 4]]).unwrap();
    let no = X3CInstance::new(vec![1, 2, 3, 4, 5, 6], vec![vec![1, 2, 3], vec![1, 4, 5], vec![2, 5, 6]]).unwrap();
    let opts = OracleOptions { envelope: OracleEnvelope::unbounded(), ..OracleOptions::default() };

    for (label, x) in [("yes", &yes), ("no", &no)] {
        println!("{label} instance: exact cover = {}", x3c_is_yes(x).unwrap());
        let ac = reduce_maximin_constructive_ac(x).unwrap();
        let e = ac.base_election();
        println!("  AC: {} candidates, {} spoilers, {} voters", ac.candidates.len(), ac.spoilers.len(), e.num_voters());
        println!("  AC oracle: {}", solve_exhaustive_with(&ac, &Rule::Maximin, &opts).unwrap().is_plan());
        let av = reduce_maximin_av(x, Goal::Constructive).unwrap();
        println!("  AV: {} registered, {} unregistered, k_AV = {}", av.registered.len(), av.unregistered.len(), av.budgets.av);
        let shown: Vec<String> =
            scores(&av.base_election(), &Rule::Maximin).unwrap().iter().map(|(c, s)| format!("{c}={s}")).collect();
        println!("  AV scores before adding: {}", shown.join(" "));
    }

    match reduce_maximin_dv(&yes, Goal::Constructive) {
        Ok(_) => println!("DV reduction built"),
        Err(e) => println!("DV reduction refused: {e}"),
    }
}
