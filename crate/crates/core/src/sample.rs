//! Seeded random elections and control instances.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::control::{Budgets, ControlInstance, Goal, Prong, ProngSet, ResourceModel, WinnerModel};
use crate::election::{Ballot, BallotKind, Candidate, CandidateId, Election, Voter};

/// Size and model parameters of a random control instance.
#[derive(Clone, Debug)]
pub struct Shape {
    pub candidates: usize,
    pub spoilers: usize,
    pub registered: usize,
    pub unregistered: usize,
    pub kind: BallotKind,
    pub prongs: ProngSet,
    /// Budgets are drawn uniformly from `0..=max_budget` per enabled prong.
    pub max_budget: usize,
    pub goal: Goal,
    pub winner_model: WinnerModel,
    pub resource_model: ResourceModel,
}

impl Shape {
    pub fn new(candidates: usize, registered: usize, prongs: &[Prong], goal: Goal) -> Self {
        Shape {
            candidates,
            spoilers: 0,
            registered,
            unregistered: 0,
            kind: BallotKind::Order,
            prongs: ProngSet::new(prongs.iter().copied()),
            max_budget: 2,
            goal,
            winner_model: WinnerModel::Unique,
            resource_model: ResourceModel::Separate,
        }
    }
}

pub fn random_ranking<R: Rng + ?Sized>(rng: &mut R, ids: &[CandidateId]) -> Ballot {
    let mut o = ids.to_vec();
    o.shuffle(rng);
    Ballot::Order(o)
}

pub fn random_approval<R: Rng + ?Sized>(rng: &mut R, m: usize) -> Ballot {
    Ballot::Approval((0..m).map(|_| rng.gen_bool(0.5)).collect())
}

fn random_ballot<R: Rng + ?Sized>(rng: &mut R, kind: BallotKind, ids: &[CandidateId]) -> Ballot {
    match kind {
        BallotKind::Order => random_ranking(rng, ids),
        BallotKind::Approval => random_approval(rng, ids.len()),
    }
}

/// Candidates `c0..` with ids `0..m` and `n` voters `v1..` with uniform
/// random rankings.
pub fn random_election<R: Rng + ?Sized>(rng: &mut R, m: usize, n: usize) -> Election {
    let cands: Vec<Candidate> = (0..m as u32).map(|i| Candidate::new(i, format!("c{i}"))).collect();
    let ids: Vec<CandidateId> = cands.iter().map(|c| c.id).collect();
    let voters = (1..=n).map(|i| Voter::new(format!("v{i}"), random_ranking(rng, &ids))).collect();
    Election::new(cands, voters).expect("random election is well formed")
}

/// A random instance of `shape`. The focus is candidate 0, named `p`;
/// registered candidates are `c1..`, spoilers `a1..`, registered voters
/// `v1..` and unregistered voters `w1..`. Pools of disabled prongs are left
/// empty and their budgets zero.
pub fn random_instance<R: Rng + ?Sized>(rng: &mut R, shape: &Shape) -> ControlInstance {
    let adds = shape.prongs.adds_candidates();
    let n_a = if adds { shape.spoilers } else { 0 };
    let n_w = if shape.prongs.contains(Prong::AddVoters) {
        shape.unregistered
    } else {
        0
    };
    let mut candidates = vec![Candidate::new(0, "p")];
    candidates.extend((1..shape.candidates as u32).map(|i| Candidate::new(i, format!("c{i}"))));
    let base = shape.candidates as u32;
    let spoilers: Vec<Candidate> = (0..n_a as u32).map(|i| Candidate::new(base + i, format!("a{}", i + 1))).collect();
    let ids: Vec<CandidateId> = candidates.iter().chain(&spoilers).map(|c| c.id).collect();
    let registered = (1..=shape.registered)
        .map(|i| Voter::new(format!("v{i}"), random_ballot(rng, shape.kind, &ids)))
        .collect();
    let unregistered = (1..=n_w)
        .map(|i| Voter::new(format!("w{i}"), random_ballot(rng, shape.kind, &ids)))
        .collect();
    let mut budgets = Budgets::default();
    if matches!(shape.resource_model, ResourceModel::Separate) {
        for p in shape.prongs.iter() {
            if p != Prong::AddCandidatesUnlimited {
                budgets.set(p, rng.gen_range(0..=shape.max_budget));
            }
        }
    }
    if shape.prongs.contains(Prong::AddCandidatesUnlimited) {
        budgets.ac = n_a;
    }
    ControlInstance {
        candidates,
        spoilers,
        registered,
        unregistered,
        focus: CandidateId(0),
        budgets,
        goal: shape.goal,
        winner_model: shape.winner_model,
        resource_model: shape.resource_model,
        prongs: shape.prongs.clone(),
    }
}

/// A nonempty random subset of `pool`, each member kept with probability ½.
pub fn random_prongs<R: Rng + ?Sized>(rng: &mut R, pool: &[Prong]) -> ProngSet {
    loop {
        let s: Vec<Prong> = pool.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
        if !s.is_empty() {
            return ProngSet::new(s);
        }
    }
}
