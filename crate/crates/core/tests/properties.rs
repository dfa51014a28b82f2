use std::collections::{BTreeMap, BTreeSet};

use num_rational::Ratio;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use multiprong::control::{
    apply_plan, check_plan_goal, classify_multiprong, shared_to_separate, ControlPlan, Goal, Prong, ProngLabel,
    ResourceModel,
};
use multiprong::dodgson::{dodgson_score_bfs, dodgson_score_exact};
use multiprong::election::{pairwise_tally, scores, winners, Alpha, Candidate, CandidateId, Election, Rule, Voter};
use multiprong::format;
use multiprong::fpt::{solve_feasibility, Cmp, LinearSystem};
use multiprong::oracle::solve_exhaustive;
use multiprong::reduction::{x3c_is_yes, X3CInstance};
use multiprong::sample::{random_instance, Shape};

fn election(m: usize, orders: Vec<Vec<u32>>) -> Election {
    let cands = (0..m as u32).map(|i| Candidate::new(i, format!("c{i}"))).collect();
    let voters = orders.iter().enumerate().map(|(i, o)| Voter::ranking(format!("v{i}"), o)).collect();
    Election::new(cands, voters).unwrap()
}

fn elections(max_m: usize, max_n: usize) -> impl Strategy<Value = Election> {
    (1..=max_m).prop_flat_map(move |m| {
        let order = Just((0..m as u32).collect::<Vec<_>>()).prop_shuffle();
        prop::collection::vec(order, 0..=max_n).prop_map(move |o| election(m, o))
    })
}

/// Voters ranking `a` above `b`, counted from the ballots.
fn prefer(e: &Election, a: u32, b: u32) -> u32 {
    e.voters()
        .iter()
        .filter(|v| {
            let o = v.ballot.order().unwrap();
            let pos = |c: u32| o.iter().position(|x| x.0 == c).unwrap();
            pos(a) < pos(b)
        })
        .count() as u32
}

fn ids(e: &Election) -> Vec<u32> {
    e.candidate_ids().iter().map(|c| c.0).collect()
}

fn copeland_by_hand(e: &Election, alpha: Ratio<i64>) -> BTreeMap<CandidateId, Ratio<i64>> {
    let c = ids(e);
    c.iter()
        .map(|&a| {
            let mut s = Ratio::from_integer(0);
            for &b in c.iter().filter(|&&b| b != a) {
                let (x, y) = (prefer(e, a, b), prefer(e, b, a));
                if x > y {
                    s += 1;
                } else if x == y {
                    s += alpha;
                }
            }
            (CandidateId(a), s)
        })
        .collect()
}

fn covers(x: &X3CInstance, from: usize, left: &BTreeSet<u32>, need: usize) -> bool {
    if left.is_empty() {
        return need == 0;
    }
    if need == 0 {
        return false;
    }
    (from..x.sets.len()).any(|i| {
        let s: BTreeSet<u32> = x.sets[i].iter().copied().collect();
        s.is_subset(left) && covers(x, i + 1, &left.difference(&s).copied().collect(), need - 1)
    })
}

fn all_points(sys: &LinearSystem) -> Vec<Vec<i64>> {
    let mut pts = vec![vec![]];
    for v in sys.vars() {
        pts = pts
            .into_iter()
            .flat_map(|p| (v.lo..=v.hi).map(move |x| [p.clone(), vec![x]].concat()))
            .collect();
    }
    pts
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn pairwise_tallies_sum_to_voters(e in elections(5, 7)) {
        let n = e.num_voters() as u32;
        for a in ids(&e) {
            for b in ids(&e).into_iter().filter(|&b| b != a) {
                let ab = pairwise_tally(&e, CandidateId(a), CandidateId(b)).unwrap();
                prop_assert_eq!(ab, prefer(&e, a, b));
                prop_assert_eq!(ab + pairwise_tally(&e, CandidateId(b), CandidateId(a)).unwrap(), n);
            }
        }
    }

    #[test]
    fn restriction_keeps_tallies(e in elections(5, 6), mask in 0u32..32) {
        let keep: BTreeSet<CandidateId> = e.candidate_ids().into_iter().filter(|c| mask >> c.0 & 1 == 1).collect();
        prop_assume!(!keep.is_empty());
        let r = e.restrict(&keep).unwrap();
        prop_assert_eq!(r.num_candidates(), keep.len());
        for &a in &keep {
            for &b in keep.iter().filter(|&&b| b != a) {
                prop_assert_eq!(pairwise_tally(&r, a, b).unwrap(), pairwise_tally(&e, a, b).unwrap());
            }
        }
    }

    #[test]
    fn copeland_is_wins_plus_alpha_ties(e in elections(5, 6)) {
        for alpha in [Alpha::ZERO, Alpha::HALF, Alpha::ONE] {
            let got = scores(&e, &Rule::Copeland(alpha)).unwrap();
            prop_assert_eq!(got, copeland_by_hand(&e, alpha.to_ratio()));
        }
    }

    #[test]
    fn maximin_and_plurality_scores_by_hand(e in elections(5, 6)) {
        let mm = scores(&e, &Rule::Maximin).unwrap();
        let pl = scores(&e, &Rule::Plurality).unwrap();
        for a in ids(&e) {
            let rivals: Vec<u32> = ids(&e).into_iter().filter(|&b| b != a).map(|b| prefer(&e, a, b)).collect();
            let want = rivals.iter().min().copied().unwrap_or(e.num_voters() as u32);
            prop_assert_eq!(mm[&CandidateId(a)], Ratio::from_integer(want as i64));
            let tops = e.voters().iter().filter(|v| v.ballot.top() == Some(CandidateId(a))).count();
            prop_assert_eq!(pl[&CandidateId(a)], Ratio::from_integer(tops as i64));
        }
    }

    #[test]
    fn condorcet_winner_beats_everyone(e in elections(4, 6)) {
        let w = winners(&e, &Rule::Condorcet).unwrap();
        let by_hand: BTreeSet<CandidateId> = ids(&e)
            .into_iter()
            .filter(|&a| ids(&e).into_iter().filter(|&b| b != a).all(|b| prefer(&e, a, b) > prefer(&e, b, a)))
            .map(CandidateId)
            .collect();
        prop_assert_eq!(w, by_hand);
    }

    #[test]
    fn maximin_monotone_under_candidate_edits(e in elections(5, 6), drop in 0u32..5) {
        let all: BTreeSet<CandidateId> = e.candidate_ids().into_iter().collect();
        prop_assume!(all.len() >= 2 && all.contains(&CandidateId(drop)));
        let mut keep = all.clone();
        keep.remove(&CandidateId(drop));
        let small = scores(&e.restrict(&keep).unwrap(), &Rule::Maximin).unwrap();
        let big = scores(&e, &Rule::Maximin).unwrap();
        for c in keep {
            prop_assert!(big[&c] <= small[&c]);
        }
    }

    #[test]
    fn classify_takes_the_strongest_label(labels in prop::collection::vec(0u8..3, 1..6)) {
        let l: Vec<ProngLabel> = labels
            .iter()
            .map(|&x| [ProngLabel::Immune, ProngLabel::Vulnerable, ProngLabel::Resistant][x as usize])
            .collect();
        let want = if l.contains(&ProngLabel::Resistant) {
            ProngLabel::Resistant
        } else if l.contains(&ProngLabel::Vulnerable) {
            ProngLabel::Vulnerable
        } else {
            ProngLabel::Immune
        };
        prop_assert_eq!(classify_multiprong(&l).unwrap(), want);
    }

    #[test]
    fn dodgson_exact_matches_swap_search(e in elections(3, 5)) {
        prop_assume!(e.num_voters() > 0);
        for c in e.candidate_ids() {
            prop_assert_eq!(dodgson_score_exact(&e, c).unwrap(), dodgson_score_bfs(&e, c).unwrap());
        }
    }

    #[test]
    fn x3c_decider_matches_cover_search(seed in any::<u64>(), k in 1usize..3, n in 0usize..7) {
        use rand::seq::SliceRandom;
        let mut g = ChaCha8Rng::seed_from_u64(seed);
        let ground: Vec<u32> = (1..=3 * k as u32).collect();
        let mut triples = Vec::new();
        for a in 1..=3 * k as u32 {
            for b in a + 1..=3 * k as u32 {
                for c in b + 1..=3 * k as u32 {
                    triples.push(vec![a, b, c]);
                }
            }
        }
        triples.shuffle(&mut g);
        triples.truncate(n);
        let x = X3CInstance { ground: ground.clone(), sets: triples, k };
        let want = covers(&x, 0, &ground.iter().copied().collect(), k);
        prop_assert_eq!(x3c_is_yes(&x).unwrap(), want);
    }

    #[test]
    fn feasibility_matches_grid_search(
        bounds in prop::collection::vec((-2i64..=1, 0i64..=2), 1..=3),
        rows in prop::collection::vec((prop::collection::vec(-3i64..=3, 3), 0u8..4, -4i64..=4), 0..=4),
    ) {
        let mut sys = LinearSystem::new();
        for (i, &(lo, w)) in bounds.iter().enumerate() {
            sys.add_var(format!("x{i}"), lo, lo + w).unwrap();
        }
        for (coefs, cmp, rhs) in rows {
            let terms: Vec<(usize, i64)> = coefs.into_iter().take(bounds.len()).enumerate().collect();
            let cmp = [Cmp::Lt, Cmp::Le, Cmp::Gt, Cmp::Ge][cmp as usize];
            sys.add_row(&terms, cmp, rhs).unwrap();
        }
        let grid: Vec<Vec<i64>> = all_points(&sys).into_iter().filter(|x| sys.satisfied_by(x)).collect();
        match solve_feasibility(&sys) {
            Some(x) => {
                prop_assert!(sys.satisfied_by(&x));
                prop_assert_eq!(Some(&x), grid.first());
            }
            None => prop_assert!(grid.is_empty()),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn oracle_plans_verify_and_files_round_trip(seed in any::<u64>(), goal in prop::bool::ANY) {
        let mut g = ChaCha8Rng::seed_from_u64(seed);
        let goal = if goal { Goal::Constructive } else { Goal::Destructive };
        let mut shape = Shape::new(3, 3, &[Prong::AddCandidates, Prong::DeleteVoters, Prong::Bribe], goal);
        shape.spoilers = 1;
        let inst = random_instance(&mut g, &shape);
        let back = format::parse_instance(&format::instance_to_json(&inst)).unwrap();
        prop_assert_eq!(&back, &inst);
        prop_assert_eq!(format::instance_digest(&back), format::instance_digest(&inst));
        prop_assert_eq!(apply_plan(&inst, &ControlPlan::empty()).unwrap(), inst.base_election());
        for rule in [Rule::Plurality, Rule::Maximin, Rule::Copeland(Alpha::HALF)] {
            if let Some(plan) = solve_exhaustive(&inst, &rule).unwrap().plan() {
                prop_assert!(check_plan_goal(&inst, plan, &rule).unwrap());
                prop_assert!(plan.usage().within(&inst.budgets));
            }
        }
    }

    #[test]
    fn shared_splits_respect_the_pool(seed in any::<u64>(), k in 0usize..4) {
        let mut g = ChaCha8Rng::seed_from_u64(seed);
        let mut shape = Shape::new(3, 3, &[Prong::DeleteVoters, Prong::Bribe], Goal::Constructive);
        shape.resource_model = ResourceModel::Shared(k);
        let inst = random_instance(&mut g, &shape);
        let splits = shared_to_separate(&inst);
        prop_assert!(!splits.is_empty());
        for s in &splits {
            prop_assert_eq!(s.resource_model, ResourceModel::Separate);
            prop_assert!(s.budgets.dv + s.budgets.bv <= k);
        }
    }
}
