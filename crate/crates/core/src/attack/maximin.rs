use std::collections::BTreeSet;

use super::{with_separate, AttackError, AttackResult, Builder, Coverage, Move};
use crate::control::{ControlInstance, Goal, Prong};
use crate::election::{is_unique_winner, CandidateId, Election, PairwiseMatrix, Rule};

/// Constructive maximin control by adding any number of spoilers and
/// deleting registered candidates.
///
/// For each value `k` that `p` could score, deletes every candidate that
/// holds `p` below `k`, then keeps deleting any candidate that still scores
/// at least `k`. The attack adds the spoilers that survive and deletes the
/// registered candidates that do not; it succeeds when at most `k_DC`
/// registered candidates are deleted.
pub fn maximin_constructive_acu_dc(inst: &ControlInstance) -> Result<AttackResult, AttackError> {
    Coverage {
        name: "maximin constructive ACu+DC",
        goal: Goal::Constructive,
        prongs: &[Prong::AddCandidatesUnlimited, Prong::DeleteCandidates],
        covered: "ACu+DC",
        nonunique: false,
    }
    .check(inst)?;
    with_separate(inst, constructive)
}

fn full_election(inst: &ControlInstance) -> Result<Election, AttackError> {
    Ok(Election::new(inst.universe(), inst.registered.clone())?)
}

fn constructive(inst: &ControlInstance) -> Result<AttackResult, AttackError> {
    let rule = Rule::Maximin;
    let p = inst.focus;
    let k_dc = inst.effective_budgets().dc;
    if k_dc + 1 >= inst.candidates.len() {
        let mut b = Builder::new(inst);
        for c in inst.candidates.iter().map(|c| c.id).filter(|&c| c != p) {
            b.push(Move::DeleteCandidate(c));
        }
        return b.finish(&rule);
    }
    let full = full_election(inst)?;
    let pw = PairwiseMatrix::from_election(&full);
    let mut others: Vec<CandidateId> = full.candidate_ids().into_iter().filter(|&c| c != p).collect();
    others.sort();
    let values: BTreeSet<u32> = others.iter().map(|&c| pw.get(p, c).unwrap()).collect();
    for k in values {
        let mut deleted: BTreeSet<CandidateId> = others
            .iter()
            .copied()
            .filter(|&c| pw.get(p, c).unwrap() < k)
            .collect();
        loop {
            let keep: BTreeSet<CandidateId> = full
                .candidate_ids()
                .into_iter()
                .filter(|c| !deleted.contains(c))
                .collect();
            let e = full.restrict_unchecked(&keep);
            let scores = crate::election::scores(&e, &rule)?;
            let blocker = scores
                .iter()
                .find(|(&c, s)| c != p && **s >= (k as i64).into())
                .map(|(&c, _)| c);
            match blocker {
                Some(c) => {
                    deleted.insert(c);
                }
                None => break,
            }
        }
        let cost = deleted.iter().filter(|&&c| inst.is_registered_candidate(c)).count();
        if cost <= k_dc {
            let mut b = Builder::new(inst);
            for s in inst.spoilers.iter().map(|s| s.id).filter(|s| !deleted.contains(s)) {
                b.push(Move::AddCandidate(s));
            }
            for &c in deleted.iter().filter(|&&c| inst.is_registered_candidate(c)) {
                b.push(Move::DeleteCandidate(c));
            }
            return b.finish(&rule);
        }
    }
    Ok(AttackResult::impossible())
}

/// Destructive maximin control by adding and deleting candidates.
///
/// Guesses at most two candidates `c′` and `d′` (added if they are
/// spoilers): `c′` is meant to catch up with `d` and `d′` to hold `d`'s
/// score down. Given the guess, deletes the largest set
/// `{c ∈ C − {c′, d′, d} : N(c′, c) < i}` that fits the deletion budget,
/// which maximizes the score of `c′`.
pub fn maximin_destructive_ac_dc(inst: &ControlInstance) -> Result<AttackResult, AttackError> {
    Coverage {
        name: "maximin destructive AC+DC",
        goal: Goal::Destructive,
        prongs: &[Prong::AddCandidates, Prong::DeleteCandidates],
        covered: "AC+DC",
        nonunique: false,
    }
    .check(inst)?;
    with_separate(inst, destructive)
}

fn destructive(inst: &ControlInstance) -> Result<AttackResult, AttackError> {
    let rule = Rule::Maximin;
    let d = inst.focus;
    let start = Builder::new(inst);
    if !is_unique_winner(&start.election(), &rule, d)? {
        return start.finish(&rule);
    }
    let budgets = inst.effective_budgets();
    let full = full_election(inst)?;
    let pw = PairwiseMatrix::from_election(&full);
    let n = inst.registered.len() as u32;
    let mut pool: Vec<CandidateId> = full.candidate_ids().into_iter().filter(|&c| c != d).collect();
    pool.sort();
    let mut guesses: Vec<(CandidateId, CandidateId)> = pool.iter().map(|&g| (g, g)).collect();
    for (i, &x) in pool.iter().enumerate() {
        for &y in &pool[i + 1..] {
            guesses.push((x, y));
            guesses.push((y, x));
        }
    }
    for (c1, d1) in guesses {
        let added: BTreeSet<CandidateId> = [c1, d1].into_iter().filter(|&g| inst.is_spoiler(g)).collect();
        if added.len() > budgets.ac {
            continue;
        }
        let deletable: Vec<CandidateId> = inst
            .candidates
            .iter()
            .map(|c| c.id)
            .filter(|&c| c != c1 && c != d1 && c != d)
            .collect();
        let below = |i: u32| -> Vec<CandidateId> {
            deletable.iter().copied().filter(|&c| pw.get(c1, c).unwrap() < i).collect()
        };
        let dels = (0..=n).rev().map(below).find(|set| set.len() <= budgets.dc).unwrap_or_default();
        let mut b = Builder::new(inst);
        for &a in &added {
            b.push(Move::AddCandidate(a));
        }
        for c in dels {
            b.push(Move::DeleteCandidate(c));
        }
        let r = b.finish(&rule)?;
        if r.is_plan() {
            return Ok(r);
        }
    }
    Ok(AttackResult::impossible())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::control::{apply_plan, Budgets, ProngSet, ResourceModel, WinnerModel};
    use crate::election::{Candidate, Voter};

    fn base(goal: Goal, prongs: &[Prong]) -> ControlInstance {
        ControlInstance {
            candidates: vec![Candidate::new(0, "p"), Candidate::new(1, "a"), Candidate::new(2, "b")],
            spoilers: vec![],
            registered: vec![
                Voter::ranking("v1", &[1, 0, 2]),
                Voter::ranking("v2", &[1, 2, 0]),
                Voter::ranking("v3", &[0, 2, 1]),
            ],
            unregistered: vec![],
            focus: CandidateId(0),
            budgets: Budgets::default(),
            goal,
            winner_model: WinnerModel::Unique,
            resource_model: ResourceModel::Separate,
            prongs: ProngSet::new(prongs.iter().copied()),
        }
    }

    #[test]
    fn delete_all_but_p() {
        let mut i = base(Goal::Constructive, &[Prong::DeleteCandidates]);
        i.budgets.dc = 2;
        let r = maximin_constructive_acu_dc(&i).unwrap();
        let e = apply_plan(&i, r.plan().unwrap()).unwrap();
        assert_eq!(e.candidate_ids(), vec![CandidateId(0)]);
    }

    #[test]
    fn already_winning_adds_everything() {
        // p beats both a and b; spoiler s is beaten by p as well
        let i = ControlInstance {
            candidates: vec![Candidate::new(0, "p"), Candidate::new(1, "a")],
            spoilers: vec![Candidate::new(2, "s")],
            registered: vec![Voter::ranking("v1", &[0, 1, 2]), Voter::ranking("v2", &[0, 2, 1])],
            unregistered: vec![],
            focus: CandidateId(0),
            budgets: Budgets { ac: 1, ..Budgets::default() },
            goal: Goal::Constructive,
            winner_model: WinnerModel::Unique,
            resource_model: ResourceModel::Separate,
            prongs: ProngSet::new([Prong::AddCandidatesUnlimited, Prong::DeleteCandidates]),
        };
        let r = maximin_constructive_acu_dc(&i).unwrap();
        let plan = r.plan().unwrap();
        assert!(plan.delete_candidates.is_empty());
        assert_eq!(plan.add_candidates.len(), 1);
    }

    #[test]
    fn destructive_singleton_guess() {
        // d = 0 wins 2-1 over a = 1; spoiler s = 2 beats d 2-1 and ties a's row
        let i = ControlInstance {
            candidates: vec![Candidate::new(0, "d"), Candidate::new(1, "a")],
            spoilers: vec![Candidate::new(2, "s")],
            registered: vec![
                Voter::ranking("v1", &[0, 1, 2]),
                Voter::ranking("v2", &[2, 0, 1]),
                Voter::ranking("v3", &[2, 1, 0]),
            ],
            unregistered: vec![],
            focus: CandidateId(0),
            budgets: Budgets { ac: 1, ..Budgets::default() },
            goal: Goal::Destructive,
            winner_model: WinnerModel::Unique,
            resource_model: ResourceModel::Separate,
            prongs: ProngSet::new([Prong::AddCandidates]),
        };
        assert!(is_unique_winner(&i.base_election(), &Rule::Maximin, CandidateId(0)).unwrap());
        let r = maximin_destructive_ac_dc(&i).unwrap();
        assert_eq!(r.plan().unwrap().add_candidates.len(), 1);
    }
}
