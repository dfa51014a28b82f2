//! Control instances generated from exact cover by 3-sets, and the padding
//! reduction from Copeland¹ voter addition to OriginalLlull.
//!
//! Sets written inside a ranking (`B`, `S_i`, `A − {a_i}`) are expanded in
//! a fixed order, ascending candidate id by default; `rev(X)` is the
//! reverse of that order.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::control::{Budgets, ControlError, ControlInstance, Goal, Prong, ProngSet, ResourceModel, WinnerModel};
use crate::election::{build_order_with, Ballot, Candidate, CandidateId, ElectionError, OrderItem, SetOrder, Voter};

/// Largest family size [`x3c_is_yes`] searches.
pub const MAX_SETS: usize = 20;

/// `(B, 𝒮)` with `|B| = 3k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct X3CInstance {
    pub ground: Vec<u32>,
    pub sets: Vec<Vec<u32>>,
    pub k: usize,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReductionError {
    #[error("malformed exact-cover instance: {0}")]
    Malformed(String),
    #[error("{reduction} requires {assumption} (got n = {n}, k = {k}); decide smaller instances with the oracle")]
    Precondition {
        reduction: &'static str,
        assumption: &'static str,
        n: usize,
        k: usize,
    },
    #[error("exact-cover search allows at most {MAX_SETS} sets, got {0}")]
    Envelope(usize),
    #[error("padding reduction needs a nonempty electorate")]
    EmptyElectorate,
    #[error("padding reduction input: {0}")]
    BadInput(String),
    #[error(transparent)]
    Election(#[from] ElectionError),
    #[error(transparent)]
    Control(#[from] ControlError),
}

impl X3CInstance {
    /// An instance over `ground` with `k = |ground| / 3`.
    pub fn new(ground: Vec<u32>, sets: Vec<Vec<u32>>) -> Result<Self, ReductionError> {
        let x = X3CInstance {
            k: ground.len() / 3,
            ground,
            sets,
        };
        x.validate()?;
        Ok(x)
    }

    pub fn n(&self) -> usize {
        self.sets.len()
    }

    pub fn validate(&self) -> Result<(), ReductionError> {
        let bad = |s: String| Err(ReductionError::Malformed(s));
        let ground: BTreeSet<u32> = self.ground.iter().copied().collect();
        if ground.len() != self.ground.len() {
            return bad("ground set has repeated elements".into());
        }
        if self.ground.len() != 3 * self.k {
            return bad(format!("ground set has {} elements, expected 3k = {}", self.ground.len(), 3 * self.k));
        }
        let mut seen = BTreeSet::new();
        for s in &self.sets {
            let set: BTreeSet<u32> = s.iter().copied().collect();
            if s.len() != 3 || set.len() != 3 {
                return bad(format!("{s:?} is not a 3-set"));
            }
            if !set.is_subset(&ground) {
                return bad(format!("{s:?} is not a subset of the ground set"));
            }
            if !seen.insert(set) {
                return bad(format!("{s:?} appears twice"));
            }
        }
        Ok(())
    }

    /// Ground elements ascending.
    fn elements(&self) -> Vec<u32> {
        let mut g = self.ground.clone();
        g.sort_unstable();
        g
    }
}

/// Whether some `k` sets of the family cover the ground set exactly.
pub fn x3c_is_yes(x: &X3CInstance) -> Result<bool, ReductionError> {
    x.validate()?;
    if x.n() > MAX_SETS {
        return Err(ReductionError::Envelope(x.n()));
    }
    let elems = x.elements();
    let bit = |e: &u32| 1u64 << elems.binary_search(e).unwrap();
    let masks: Vec<u64> = x.sets.iter().map(|s| s.iter().map(bit).sum()).collect();
    let full: u64 = if elems.is_empty() { 0 } else { (1u64 << elems.len()) - 1 };
    Ok(any_k_subset(&masks, x.k, 0, 0, full))
}

fn any_k_subset(masks: &[u64], k: usize, from: usize, acc: u64, full: u64) -> bool {
    if k == 0 {
        return acc == full;
    }
    (from..masks.len()).any(|i| any_k_subset(masks, k - 1, i + 1, acc | masks[i], full))
}

/// Ids of the ground elements and the sets as id lists.
struct Layout {
    b: Vec<CandidateId>,
    sets: Vec<Vec<CandidateId>>,
    universe: Vec<CandidateId>,
    order: SetOrder,
}

impl Layout {
    fn new(x: &X3CInstance, first: u32, order: SetOrder) -> Self {
        let elems = x.elements();
        let b: Vec<CandidateId> = (0..elems.len() as u32).map(|i| CandidateId(first + i)).collect();
        let id = |e: &u32| b[elems.binary_search(e).unwrap()];
        let sets = x.sets.iter().map(|s| s.iter().map(id).collect()).collect();
        Layout {
            b,
            sets,
            universe: Vec::new(),
            order,
        }
    }

    fn minus(&self, i: usize) -> Vec<CandidateId> {
        self.b.iter().copied().filter(|c| !self.sets[i].contains(c)).collect()
    }

    fn ballot(&self, items: &[OrderItem]) -> Result<Ballot, ReductionError> {
        Ok(Ballot::Order(build_order_with(&self.universe, items, self.order)?))
    }

    fn b_candidates(&self, elems: &[u32]) -> Vec<Candidate> {
        self.b.iter().zip(elems).map(|(id, e)| Candidate::new(id.0, format!("b{e}"))).collect()
    }
}

use OrderItem::{One, Rev, Set};

fn instance(
    candidates: Vec<Candidate>,
    spoilers: Vec<Candidate>,
    registered: Vec<Voter>,
    unregistered: Vec<Voter>,
    focus: CandidateId,
    goal: Goal,
    prong: Prong,
    budget: usize,
) -> Result<ControlInstance, ReductionError> {
    let mut budgets = Budgets::default();
    budgets.set(prong, budget);
    let inst = ControlInstance {
        candidates,
        spoilers,
        registered,
        unregistered,
        focus,
        budgets,
        goal,
        winner_model: WinnerModel::Unique,
        resource_model: ResourceModel::Separate,
        prongs: ProngSet::new([prong]),
    };
    inst.validate()?;
    Ok(inst)
}

fn named(prefix: &str, ballots: Vec<Ballot>) -> Vec<Voter> {
    ballots
        .into_iter()
        .enumerate()
        .map(|(i, b)| Voter::new(format!("{prefix}{}", i + 1), b))
        .collect()
}

pub fn reduce_maximin_constructive_ac(x: &X3CInstance) -> Result<ControlInstance, ReductionError> {
    reduce_maximin_constructive_ac_with(x, SetOrder::Ascending)
}

/// Constructive maximin control by adding candidates. `C = B ∪ {p}`, one
/// spoiler `a_i` per set, `k_AC = k`, and `2n + 2` voters:
/// `p > B−S_i > a_i > S_i > A−{a_i}` and
/// `rev(A−{a_i}) > a_i > rev(S_i) > rev(B−S_i) > p` per set, then
/// `p > A > B` and `rev(B) > p > rev(A)`.
pub fn reduce_maximin_constructive_ac_with(x: &X3CInstance, order: SetOrder) -> Result<ControlInstance, ReductionError> {
    x.validate()?;
    let p = CandidateId(0);
    let mut l = Layout::new(x, 1, order);
    let n = x.n();
    let a: Vec<CandidateId> = (0..n as u32).map(|j| CandidateId(1 + 3 * x.k as u32 + j)).collect();
    l.universe = std::iter::once(p).chain(l.b.iter().copied()).chain(a.iter().copied()).collect();
    let others = |i: usize| -> Vec<CandidateId> { a.iter().copied().filter(|&c| c != a[i]).collect() };
    let mut ballots = Vec::new();
    for i in 0..n {
        ballots.push(l.ballot(&[One(p), Set(l.minus(i)), One(a[i]), Set(l.sets[i].clone()), Set(others(i))])?);
    }
    for i in 0..n {
        ballots.push(l.ballot(&[Rev(others(i)), One(a[i]), Rev(l.sets[i].clone()), Rev(l.minus(i)), One(p)])?);
    }
    ballots.push(l.ballot(&[One(p), Set(a.clone()), Set(l.b.clone())])?);
    ballots.push(l.ballot(&[Rev(l.b.clone()), One(p), Rev(a.clone())])?);
    let mut candidates = vec![Candidate::new(0, "p")];
    candidates.extend(l.b_candidates(&x.elements()));
    let spoilers = a.iter().enumerate().map(|(j, id)| Candidate::new(id.0, format!("a{}", j + 1))).collect();
    instance(candidates, spoilers, named("v", ballots), vec![], p, Goal::Constructive, Prong::AddCandidates, x.k)
}

fn pdb_layout(x: &X3CInstance, order: SetOrder) -> (Layout, Vec<Candidate>) {
    let mut l = Layout::new(x, 2, order);
    l.universe = [CandidateId(0), CandidateId(1)].into_iter().chain(l.b.iter().copied()).collect();
    let mut candidates = vec![Candidate::new(0, "p"), Candidate::new(1, "d")];
    candidates.extend(l.b_candidates(&x.elements()));
    (l, candidates)
}

pub fn reduce_maximin_av(x: &X3CInstance, goal: Goal) -> Result<ControlInstance, ReductionError> {
    reduce_maximin_av_with(x, goal, SetOrder::Ascending)
}

/// Maximin control by adding voters. `C = B ∪ {p, d}`; registered voters
/// are `2k × d > B > p`, `k × p > B > d` and `k × p > d > B`, with one
/// fewer `p > B > d` voter in the destructive case; unregistered voter
/// `w_i` ranks `B−S_i > p > S_i > d`. `k_AV = k`. The destructive goal
/// is to stop `d` from winning uniquely.
pub fn reduce_maximin_av_with(x: &X3CInstance, goal: Goal, order: SetOrder) -> Result<ControlInstance, ReductionError> {
    x.validate()?;
    if x.k == 0 {
        return Err(ReductionError::Precondition {
            reduction: "maximin-AV reduction",
            assumption: "k ≥ 1",
            n: x.n(),
            k: x.k,
        });
    }
    let (p, d) = (CandidateId(0), CandidateId(1));
    let (l, candidates) = pdb_layout(x, order);
    let k = x.k;
    let b = || Set(l.b.clone());
    let middle = if goal == Goal::Constructive { k } else { k - 1 };
    let mut ballots = Vec::new();
    for _ in 0..2 * k {
        ballots.push(l.ballot(&[One(d), b(), One(p)])?);
    }
    for _ in 0..middle {
        ballots.push(l.ballot(&[One(p), b(), One(d)])?);
    }
    for _ in 0..k {
        ballots.push(l.ballot(&[One(p), One(d), b()])?);
    }
    let mut pool = Vec::new();
    for i in 0..x.n() {
        pool.push(l.ballot(&[Set(l.minus(i)), One(p), Set(l.sets[i].clone()), One(d)])?);
    }
    let focus = if goal == Goal::Constructive { p } else { d };
    instance(candidates, vec![], named("v", ballots), named("w", pool), focus, goal, Prong::AddVoters, k)
}

pub fn reduce_maximin_dv(x: &X3CInstance, goal: Goal) -> Result<ControlInstance, ReductionError> {
    reduce_maximin_dv_with(x, goal, SetOrder::Ascending)
}

/// Maximin control by deleting voters. `C = B ∪ {p, d}`; per set, voters
/// `d > B−S_i > p > S_i` and `d > rev(S_i) > p > rev(B−S_i)`; then
/// `2 × p > d > B`, `(n−k) × p > B > d` and `n × B > p > d`, with one
/// fewer of the first and last kinds in the destructive case. `k_DV = k`.
pub fn reduce_maximin_dv_with(x: &X3CInstance, goal: Goal, order: SetOrder) -> Result<ControlInstance, ReductionError> {
    x.validate()?;
    let (n, k) = (x.n(), x.k);
    if !(n >= k && k >= 3) {
        return Err(ReductionError::Precondition {
            reduction: "maximin-DV reduction",
            assumption: "n ≥ k ≥ 3",
            n,
            k,
        });
    }
    let (p, d) = (CandidateId(0), CandidateId(1));
    let (l, candidates) = pdb_layout(x, order);
    let b = || Set(l.b.clone());
    let mut ballots = Vec::new();
    for i in 0..n {
        ballots.push(l.ballot(&[One(d), Set(l.minus(i)), One(p), Set(l.sets[i].clone())])?);
    }
    for i in 0..n {
        ballots.push(l.ballot(&[One(d), Rev(l.sets[i].clone()), One(p), Rev(l.minus(i))])?);
    }
    let fewer = usize::from(goal == Goal::Destructive);
    for _ in 0..2 - fewer {
        ballots.push(l.ballot(&[One(p), One(d), b()])?);
    }
    for _ in 0..n - k {
        ballots.push(l.ballot(&[One(p), b(), One(d)])?);
    }
    for _ in 0..n - fewer {
        ballots.push(l.ballot(&[b(), One(p), One(d)])?);
    }
    let focus = if goal == Goal::Constructive { p } else { d };
    instance(candidates, vec![], named("v", ballots), vec![], focus, goal, Prong::DeleteVoters, k)
}

pub fn reduce_maximin_bv(x: &X3CInstance, goal: Goal) -> Result<ControlInstance, ReductionError> {
    reduce_maximin_bv_with(x, goal, SetOrder::Ascending)
}

/// Maximin bribery. `C = {p, d, s} ∪ B` and voter groups
///
/// * `V¹`: `d > s > S_i > p > B−S_i` and `rev(B−S_i) > p > rev(S_i) > d > s` per set,
/// * `V²`: `k × s > d > p > B` and `k × rev(B) > d > p > s`,
/// * `V³`: `k × d > s > p > B` and `k × rev(B) > s > p > d`,
/// * `V⁴`: `2k × d > B > p > s` and `2k × s > p > d > rev(B)`,
/// * `V⁵`: `s > B > p > d` and `d > rev(B) > p > s`,
/// * `V⁶`: `p > d > s > B`, constructive case only.
///
/// `k_BV = k`; the destructive goal is to stop `d` from winning uniquely.
pub fn reduce_maximin_bv_with(x: &X3CInstance, goal: Goal, order: SetOrder) -> Result<ControlInstance, ReductionError> {
    x.validate()?;
    let (n, k) = (x.n(), x.k);
    if !(n > k && k > 1) {
        return Err(ReductionError::Precondition {
            reduction: "maximin-BV reduction",
            assumption: "n > k > 1",
            n,
            k,
        });
    }
    let (p, d, s) = (CandidateId(0), CandidateId(1), CandidateId(2));
    let mut l = Layout::new(x, 3, order);
    l.universe = [p, d, s].into_iter().chain(l.b.iter().copied()).collect();
    let b = || Set(l.b.clone());
    let rb = || Rev(l.b.clone());
    let mut voters = Vec::new();
    let mut group = |g: usize, ballots: Vec<Ballot>| voters.extend(named(&format!("v{g}_"), ballots));
    let mut v1 = Vec::new();
    for i in 0..n {
        v1.push(l.ballot(&[One(d), One(s), Set(l.sets[i].clone()), One(p), Set(l.minus(i))])?);
    }
    for i in 0..n {
        v1.push(l.ballot(&[Rev(l.minus(i)), One(p), Rev(l.sets[i].clone()), One(d), One(s)])?);
    }
    group(1, v1);
    let twice = |first: Ballot, second: Ballot, count: usize| -> Vec<Ballot> {
        std::iter::repeat_n(first, count).chain(std::iter::repeat_n(second, count)).collect()
    };
    group(
        2,
        twice(l.ballot(&[One(s), One(d), One(p), b()])?, l.ballot(&[rb(), One(d), One(p), One(s)])?, k),
    );
    group(
        3,
        twice(l.ballot(&[One(d), One(s), One(p), b()])?, l.ballot(&[rb(), One(s), One(p), One(d)])?, k),
    );
    group(
        4,
        twice(l.ballot(&[One(d), b(), One(p), One(s)])?, l.ballot(&[One(s), One(p), One(d), rb()])?, 2 * k),
    );
    group(
        5,
        vec![l.ballot(&[One(s), b(), One(p), One(d)])?, l.ballot(&[One(d), rb(), One(p), One(s)])?],
    );
    if goal == Goal::Constructive {
        group(6, vec![l.ballot(&[One(p), One(d), One(s), b()])?]);
    }
    let mut candidates = vec![Candidate::new(0, "p"), Candidate::new(1, "d"), Candidate::new(2, "s")];
    candidates.extend(l.b_candidates(&x.elements()));
    let focus = if goal == Goal::Constructive { p } else { d };
    instance(candidates, vec![], voters, vec![], focus, goal, Prong::Bribe, k)
}

pub fn reduce_copeland1_av_to_llull(inst: &ControlInstance) -> Result<ControlInstance, ReductionError> {
    reduce_copeland1_av_to_llull_with(inst, SetOrder::Ascending)
}

/// Pads a constructive Copeland¹ voter-addition instance `(C, V, W, p, k)`
/// into an OriginalLlull AC+AV instance `(C, A, V ∪ V′, W, p, |A|, k)`.
///
/// `V′` brings the electorate up to `|C|` (one more if the gap is odd),
/// half voting `C` and half `rev(C)`. New candidates `A` make
/// `|C| + |A| = |V| + |V′| + |W|` and are appended to every ballot. Voters
/// are renamed so that `V ∪ V′` carries all names of `C` and the whole
/// pool carries exactly the names of `C ∪ A`.
pub fn reduce_copeland1_av_to_llull_with(inst: &ControlInstance, order: SetOrder) -> Result<ControlInstance, ReductionError> {
    inst.validate()?;
    let bad = |s: &str| Err(ReductionError::BadInput(s.into()));
    if inst.registered.is_empty() {
        return Err(ReductionError::EmptyElectorate);
    }
    if !inst.spoilers.is_empty() || !inst.prongs.is_within(&[Prong::AddVoters]) {
        return bad("expected voter addition only");
    }
    if inst.goal != Goal::Constructive || inst.winner_model != WinnerModel::Unique || inst.is_shared() {
        return bad("expected a constructive unique-winner separate-budget instance");
    }
    let c_names: BTreeSet<&str> = inst.candidates.iter().map(|c| c.name.as_str()).collect();
    if c_names.len() != inst.candidates.len() {
        return bad("candidate names must be distinct");
    }
    let (m, nv, nw) = (inst.candidates.len(), inst.registered.len(), inst.unregistered.len());
    let pad = if nv < m { (m - nv).next_multiple_of(2) } else { 0 };
    let na = nv + pad + nw - m;
    let next_id = inst.candidates.iter().map(|c| c.id.0).max().unwrap() + 1;
    let mut spoilers = Vec::new();
    let mut suffix = 1;
    while spoilers.len() < na {
        let name = format!("a{suffix}");
        suffix += 1;
        if !c_names.contains(name.as_str()) {
            spoilers.push(Candidate::new(next_id + spoilers.len() as u32, name));
        }
    }
    let c_ids: Vec<CandidateId> = inst.candidates.iter().map(|c| c.id).collect();
    let a_ids: Vec<CandidateId> = spoilers.iter().map(|c| c.id).collect();
    let universe: Vec<CandidateId> = c_ids.iter().chain(&a_ids).copied().collect();
    let extend = |b: &Ballot| -> Result<Ballot, ReductionError> {
        let o = b.order().ok_or_else(|| ReductionError::BadInput("expected linear-order ballots".into()))?;
        let mut items: Vec<OrderItem> = o.iter().map(|&c| One(c)).collect();
        items.push(Set(a_ids.clone()));
        Ok(Ballot::Order(build_order_with(&universe, &items, order)?))
    };
    let mut ballots = Vec::new();
    for v in &inst.registered {
        ballots.push(extend(&v.ballot)?);
    }
    for i in 0..pad {
        let c = if i < pad / 2 { Set(c_ids.clone()) } else { Rev(c_ids.clone()) };
        ballots.push(Ballot::Order(build_order_with(&universe, &[c, Set(a_ids.clone())], order)?));
    }
    let names: Vec<String> = inst.candidates.iter().chain(&spoilers).map(|c| c.name.clone()).collect();
    let registered: Vec<Voter> = ballots.into_iter().zip(&names).map(|(b, n)| Voter::new(n.clone(), b)).collect();
    let mut unregistered = Vec::new();
    for (w, name) in inst.unregistered.iter().zip(&names[nv + pad..]) {
        unregistered.push(Voter::new(name.clone(), extend(&w.ballot)?));
    }
    let out = ControlInstance {
        candidates: inst.candidates.clone(),
        spoilers,
        registered,
        unregistered,
        focus: inst.focus,
        budgets: Budgets {
            ac: na,
            av: inst.budgets.av,
            ..Budgets::default()
        },
        goal: Goal::Constructive,
        winner_model: WinnerModel::Unique,
        resource_model: ResourceModel::Separate,
        prongs: ProngSet::new([Prong::AddCandidates, Prong::AddVoters]),
    };
    out.validate()?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::election::{pairwise_tally, scores, Rule};

    fn x(ground: &[u32], sets: &[[u32; 3]]) -> X3CInstance {
        X3CInstance::new(ground.to_vec(), sets.iter().map(|s| s.to_vec()).collect()).unwrap()
    }

    #[test]
    fn tiny_exact_covers() {
        assert!(x3c_is_yes(&x(&[1, 2, 3], &[[1, 2, 3]])).unwrap());
        assert!(!x3c_is_yes(&x(&[1, 2, 3, 4, 5, 6], &[[1, 2, 3], [3, 4, 5]])).unwrap());
        assert!(x3c_is_yes(&x(&[], &[])).unwrap());
    }

    #[test]
    fn malformed_instances() {
        assert!(X3CInstance::new(vec![1, 2, 3], vec![vec![1, 2]]).is_err());
        assert!(X3CInstance::new(vec![1, 2, 3], vec![vec![1, 2, 4]]).is_err());
        assert!(X3CInstance::new(vec![1, 2, 3], vec![vec![1, 2, 3], vec![3, 2, 1]]).is_err());
        assert!(X3CInstance::new(vec![1, 2], vec![]).is_err());
    }

    #[test]
    fn dv_precondition_is_named() {
        let e = reduce_maximin_dv(&x(&[1, 2, 3, 4, 5, 6], &[[1, 2, 3], [4, 5, 6]]), Goal::Constructive).unwrap_err();
        assert!(e.to_string().contains("n ≥ k ≥ 3"));
        let e = reduce_maximin_bv(&x(&[1, 2, 3], &[[1, 2, 3]]), Goal::Constructive).unwrap_err();
        assert!(e.to_string().contains("n > k > 1"));
    }

    #[test]
    fn ac_scores_after_adding() {
        let inst = reduce_maximin_constructive_ac(&x(&[1, 2, 3, 4, 5, 6], &[[1, 2, 3], [4, 5, 6], [2, 3, 4]])).unwrap();
        assert_eq!(inst.registered.len(), 8);
        let all = crate::election::Election::new(inst.universe(), inst.registered.clone()).unwrap();
        let s = scores(&all, &Rule::Maximin).unwrap();
        assert_eq!(s[&CandidateId(0)], 4.into());
        assert_eq!(pairwise_tally(&all, CandidateId(0), CandidateId(7)).unwrap(), 5);
    }

    #[test]
    fn llull_padding_counts() {
        let cands = vec![Candidate::new(0, "p"), Candidate::new(1, "q"), Candidate::new(2, "r")];
        let inst = ControlInstance {
            candidates: cands,
            spoilers: vec![],
            registered: vec![Voter::ranking("x", &[0, 1, 2])],
            unregistered: vec![Voter::ranking("y", &[1, 0, 2])],
            focus: CandidateId(0),
            budgets: Budgets { av: 1, ..Budgets::default() },
            goal: Goal::Constructive,
            winner_model: WinnerModel::Unique,
            resource_model: ResourceModel::Separate,
            prongs: ProngSet::new([Prong::AddVoters]),
        };
        let out = reduce_copeland1_av_to_llull(&inst).unwrap();
        // gap 2 is even: two dummies, then one spoiler for the single pool voter
        assert_eq!(out.registered.len(), 3);
        assert_eq!(out.spoilers.len(), 1);
        let names: Vec<&str> = out.registered.iter().chain(&out.unregistered).map(|v| v.name.as_str()).collect();
        assert_eq!(names, vec!["p", "q", "r", "a1"]);
        let mut empty = inst.clone();
        empty.registered.clear();
        assert_eq!(reduce_copeland1_av_to_llull(&empty), Err(ReductionError::EmptyElectorate));
    }
}
