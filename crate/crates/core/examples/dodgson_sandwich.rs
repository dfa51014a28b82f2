//! Maximin winners as Dodgson approximations.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use multiprong::dodgson::verify_sandwich;
use multiprong::sample::random_election;

fn main() {
    let mut g = ChaCha8Rng::seed_from_u64(11);
    for n in [3, 5, 7] {
        let e = random_election(&mut g, 4, n);
        let r = verify_sandwich(&e).unwrap();
        println!("m = 4, n = {n}");
        for (c, d) in &r.dodgson {
            println!("  {c}: dodgson {d}, sc' {} (bound {})", r.sc_prime[c], 16 * d);
        }
        println!("  maximin winners {:?}, smallest dodgson score {}", r.maximin_winners, r.min_score);
        println!("  bounds hold: {}", r.passed());
    }
}
