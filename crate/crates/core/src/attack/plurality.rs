use std::collections::BTreeMap;

use super::{lift_to_top, with_separate, AttackError, AttackResult, Builder, Coverage, Move};
use crate::control::{ControlInstance, Goal, Prong};
use crate::election::{CandidateId, Election, Rule};

const PRONGS: &[Prong] = &[Prong::AddVoters, Prong::DeleteVoters, Prong::Bribe];

fn coverage(name: &'static str, goal: Goal) -> Coverage {
    Coverage {
        name,
        goal,
        prongs: PRONGS,
        covered: "AV+DV+BV",
        nonunique: false,
    }
}

fn tops(e: &Election) -> BTreeMap<CandidateId, usize> {
    let mut s: BTreeMap<CandidateId, usize> = e.candidate_ids().into_iter().map(|c| (c, 0)).collect();
    for v in e.voters() {
        if let Some(t) = v.ballot.top() {
            *s.entry(t).or_default() += 1;
        }
    }
    s
}

fn unique_winner(e: &Election, p: CandidateId) -> bool {
    let s = tops(e);
    s.iter().all(|(&c, &x)| c == p || x < s[&p])
}

/// The strongest rival of `p`, smallest id among ties.
fn top_rival(e: &Election, p: CandidateId) -> Option<CandidateId> {
    let s = tops(e);
    let best = s.iter().filter(|(&c, _)| c != p).map(|(_, &x)| x).max()?;
    s.iter().find(|(&c, &x)| c != p && x == best).map(|(&c, _)| c)
}

/// First voter, by name, of the final electorate whose top choice is `c`.
fn voter_for(e: &Election, c: CandidateId, skip: &dyn Fn(&str) -> bool) -> Option<String> {
    let mut names: Vec<&str> = e
        .voters()
        .iter()
        .filter(|v| v.ballot.top() == Some(c) && !skip(&v.name))
        .map(|v| v.name.as_str())
        .collect();
    names.sort_unstable();
    names.first().map(|s| s.to_string())
}

fn pool_voters(inst: &ControlInstance, top: CandidateId) -> Vec<String> {
    let mut w: Vec<String> = inst
        .unregistered
        .iter()
        .filter(|w| w.ballot.top() == Some(top))
        .map(|w| w.name.clone())
        .collect();
    w.sort();
    w
}

/// Constructive plurality control by adding, deleting and bribing voters.
///
/// Adds voters ranking `p` first (or, into an empty electorate, one voter
/// to bribe), then repeatedly bribes a voter of the
/// strongest rival to rank `p` first, then repeatedly deletes a voter of
/// the strongest rival. Bribes go first: deleting first can use up the
/// voters a later bribe needs.
pub fn plurality_constructive_av_dv_bv(inst: &ControlInstance) -> Result<AttackResult, AttackError> {
    coverage("plurality constructive AV+DV+BV", Goal::Constructive).check(inst)?;
    with_separate(inst, constructive)
}

fn constructive(inst: &ControlInstance) -> Result<AttackResult, AttackError> {
    let p = inst.focus;
    let budgets = inst.effective_budgets();
    let mut b = Builder::new(inst);
    for w in pool_voters(inst, p).into_iter().take(budgets.av) {
        if unique_winner(&b.election(), p) {
            break;
        }
        b.push(Move::AddVoter(w));
    }
    // an empty electorate leaves nobody to bribe; bring in any voter
    if b.election().num_voters() == 0 && budgets.bv > 0 && b.plan.add_voters.len() < budgets.av {
        let mut pool: Vec<&str> = inst.unregistered.iter().map(|w| w.name.as_str()).collect();
        pool.sort_unstable();
        if let Some(w) = pool.first() {
            b.push(Move::AddVoter(w.to_string()));
        }
    }
    for _ in 0..budgets.bv {
        let e = b.election();
        if unique_winner(&e, p) {
            break;
        }
        let Some(r) = top_rival(&e, p) else { break };
        let Some(v) = voter_for(&e, r, &|_| false) else { break };
        let ballot = lift_to_top(&e.voters().iter().find(|x| x.name == v).unwrap().ballot, p);
        b.push(Move::Bribe { voter: v, ballot });
    }
    for _ in 0..budgets.dv {
        let e = b.election();
        if unique_winner(&e, p) {
            break;
        }
        let Some(r) = top_rival(&e, p) else { break };
        let unregistered = |n: &str| !inst.registered.iter().any(|v| v.name == n);
        let Some(v) = voter_for(&e, r, &unregistered) else { break };
        b.push(Move::DeleteVoter(v));
    }
    b.finish(&Rule::Plurality)
}

/// Destructive plurality control by adding, deleting and bribing voters.
///
/// For each rival `c` in id order: adds voters ranking `c` first, deletes
/// voters ranking `p` first and bribes `p`-voters to rank `c` first.
pub fn plurality_destructive_av_dv_bv(inst: &ControlInstance) -> Result<AttackResult, AttackError> {
    coverage("plurality destructive AV+DV+BV", Goal::Destructive).check(inst)?;
    with_separate(inst, destructive)
}

fn destructive(inst: &ControlInstance) -> Result<AttackResult, AttackError> {
    let p = inst.focus;
    if !unique_winner(&inst.base_election(), p) {
        return Builder::new(inst).finish(&Rule::Plurality);
    }
    let budgets = inst.effective_budgets();
    let mut rivals: Vec<CandidateId> = inst.candidates.iter().map(|c| c.id).filter(|&c| c != p).collect();
    rivals.sort();
    for c in rivals {
        let mut b = Builder::new(inst);
        for w in pool_voters(inst, c).into_iter().take(budgets.av) {
            if !unique_winner(&b.election(), p) {
                break;
            }
            b.push(Move::AddVoter(w));
        }
        for _ in 0..budgets.dv {
            let e = b.election();
            if !unique_winner(&e, p) {
                break;
            }
            let unregistered = |n: &str| !inst.registered.iter().any(|v| v.name == n);
            let Some(v) = voter_for(&e, p, &unregistered) else { break };
            b.push(Move::DeleteVoter(v));
        }
        for _ in 0..budgets.bv {
            let e = b.election();
            if !unique_winner(&e, p) {
                break;
            }
            let Some(v) = voter_for(&e, p, &|_| false) else { break };
            let ballot = lift_to_top(&e.voters().iter().find(|x| x.name == v).unwrap().ballot, c);
            b.push(Move::Bribe { voter: v, ballot });
        }
        let r = b.finish(&Rule::Plurality)?;
        if r.is_plan() {
            return Ok(r);
        }
    }
    Ok(AttackResult::impossible())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::control::{check_plan_goal, Budgets, ProngSet, ResourceModel, WinnerModel};
    use crate::election::{Candidate, Voter};

    fn inst(voters: Vec<Voter>, budgets: Budgets, goal: Goal) -> ControlInstance {
        ControlInstance {
            candidates: vec![Candidate::new(0, "a"), Candidate::new(1, "b"), Candidate::new(2, "p")],
            spoilers: vec![],
            registered: voters,
            unregistered: vec![],
            focus: CandidateId(2),
            budgets,
            goal,
            winner_model: WinnerModel::Unique,
            resource_model: ResourceModel::Separate,
            prongs: ProngSet::new(PRONGS.iter().copied()),
        }
    }

    #[test]
    fn already_winning_needs_nothing() {
        let i = inst(vec![Voter::ranking("x", &[2, 0, 1])], Budgets::default(), Goal::Constructive);
        let r = plurality_constructive_av_dv_bv(&i).unwrap();
        assert!(r.plan().unwrap().is_empty());
    }

    #[test]
    fn delete_one_bribe_one() {
        let i = inst(
            vec![
                Voter::ranking("v1", &[0, 1, 2]),
                Voter::ranking("v2", &[0, 1, 2]),
                Voter::ranking("v3", &[0, 2, 1]),
                Voter::ranking("v4", &[2, 0, 1]),
            ],
            Budgets { dv: 1, bv: 1, ..Budgets::default() },
            Goal::Constructive,
        );
        let r = plurality_constructive_av_dv_bv(&i).unwrap();
        let plan = r.plan().unwrap();
        assert_eq!(plan.delete_voters.len(), 1);
        assert_eq!(plan.bribes.len(), 1);
        assert!(check_plan_goal(&i, plan, &Rule::Plurality).unwrap());
        assert_eq!(r.trace.len(), 2);
    }

    #[test]
    fn deleting_first_would_strand_the_bribe() {
        let i = inst(vec![Voter::ranking("v1", &[0, 2, 1])], Budgets { dv: 1, bv: 1, ..Budgets::default() }, Goal::Constructive);
        let plan = plurality_constructive_av_dv_bv(&i).unwrap().plan().cloned().unwrap();
        assert!(plan.delete_voters.is_empty());
        assert_eq!(plan.bribes.len(), 1);
    }

    #[test]
    fn empty_electorate_adds_a_voter_to_bribe() {
        let mut i = inst(vec![], Budgets { av: 1, bv: 1, ..Budgets::default() }, Goal::Constructive);
        i.unregistered = vec![Voter::ranking("w2", &[1, 2, 0]), Voter::ranking("w1", &[0, 2, 1])];
        let plan = plurality_constructive_av_dv_bv(&i).unwrap().plan().cloned().unwrap();
        assert_eq!(plan.add_voters.iter().collect::<Vec<_>>(), vec!["w1"]);
        assert!(plan.bribes.contains_key("w1"));
    }

    #[test]
    fn destructive_bribe_to_rival() {
        let mut i = inst(
            vec![
                Voter::ranking("v1", &[2, 0, 1]),
                Voter::ranking("v2", &[2, 0, 1]),
                Voter::ranking("v3", &[0, 1, 2]),
            ],
            Budgets { bv: 1, ..Budgets::default() },
            Goal::Destructive,
        );
        let r = plurality_destructive_av_dv_bv(&i).unwrap();
        assert_eq!(r.plan().unwrap().bribes.len(), 1);
        i.budgets.bv = 0;
        assert!(!plurality_destructive_av_dv_bv(&i).unwrap().is_plan());
        i.registered.push(Voter::ranking("v4", &[1, 0, 2]));
        i.registered.push(Voter::ranking("v5", &[1, 0, 2]));
        assert!(plurality_destructive_av_dv_bv(&i).unwrap().plan().unwrap().is_empty());
    }

    #[test]
    fn out_of_scope_requests_are_errors() {
        let mut i = inst(vec![], Budgets::default(), Goal::Destructive);
        assert!(matches!(
            plurality_constructive_av_dv_bv(&i),
            Err(AttackError::WrongGoal { .. })
        ));
        i.goal = Goal::Constructive;
        i.prongs.insert(Prong::DeleteCandidates);
        assert!(matches!(
            plurality_constructive_av_dv_bv(&i),
            Err(AttackError::UnsupportedProngs { .. })
        ));
    }
}
