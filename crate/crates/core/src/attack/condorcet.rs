use super::{lift_to_top, with_separate, AttackError, AttackResult, Builder, Coverage, Move};
use crate::control::{ControlInstance, Goal, Prong};
use crate::election::{Ballot, CandidateId, Election, Rule, Voter};

const PRONGS: &[Prong] = &[
    Prong::AddCandidates,
    Prong::AddVoters,
    Prong::DeleteVoters,
    Prong::Bribe,
];

/// Destructive Condorcet control by adding candidates and adding,
/// deleting and bribing voters.
///
/// For each rival `c` in id order, adds `c` if it is a spoiler, adds
/// voters preferring `c` to `p`, deletes voters preferring `p` to `c` and
/// bribes the remaining ones to rank `c` first, until `c` is no longer
/// beaten by `p`. The Condorcet winner is unique whenever it exists, so
/// both winner models are handled.
pub fn condorcet_destructive_ac_av_dv_bv(inst: &ControlInstance) -> Result<AttackResult, AttackError> {
    Coverage {
        name: "Condorcet destructive AC+AV+DV+BV",
        goal: Goal::Destructive,
        prongs: PRONGS,
        covered: "AC+AV+DV+BV",
        nonunique: true,
    }
    .check(inst)?;
    with_separate(inst, run)
}

fn p_beats(e: &Election, p: CandidateId, c: CandidateId) -> bool {
    let (mut pc, mut cp) = (0, 0);
    for v in e.voters() {
        if v.ballot.prefers(p, c) {
            pc += 1;
        } else {
            cp += 1;
        }
    }
    pc > cp
}

fn sorted_names<'a>(voters: impl Iterator<Item = &'a Voter>) -> Vec<String> {
    let mut n: Vec<String> = voters.map(|v| v.name.clone()).collect();
    n.sort();
    n
}

fn run(inst: &ControlInstance) -> Result<AttackResult, AttackError> {
    let rule = Rule::Condorcet;
    let p = inst.focus;
    let start = Builder::new(inst);
    if !crate::election::winners(&start.election(), &rule)?.contains(&p) {
        return start.finish(&rule);
    }
    let budgets = inst.effective_budgets();
    let mut rivals: Vec<CandidateId> = inst.universe_ids().into_iter().filter(|&c| c != p).collect();
    rivals.sort();
    for c in rivals {
        let mut b = Builder::new(inst);
        if inst.is_spoiler(c) {
            if budgets.ac == 0 {
                continue;
            }
            b.push(Move::AddCandidate(c));
        }
        let prefers_c = |ballot: &Ballot| ballot.prefers(c, p);
        let adds = sorted_names(inst.unregistered.iter().filter(|w| prefers_c(&w.ballot)));
        for w in adds.into_iter().take(budgets.av) {
            if !p_beats(&b.election(), p, c) {
                break;
            }
            b.push(Move::AddVoter(w));
        }
        let dels = sorted_names(inst.registered.iter().filter(|v| !prefers_c(&v.ballot)));
        for v in dels.into_iter().take(budgets.dv) {
            if !p_beats(&b.election(), p, c) {
                break;
            }
            b.push(Move::DeleteVoter(v));
        }
        for _ in 0..budgets.bv {
            let e = b.election();
            if !p_beats(&e, p, c) {
                break;
            }
            let mut left: Vec<&Voter> = e.voters().iter().filter(|v| v.ballot.prefers(p, c)).collect();
            left.sort_by(|x, y| x.name.cmp(&y.name));
            let Some(v) = left.first() else { break };
            let ballot = lift_to_top(&v.ballot, c);
            b.push(Move::Bribe {
                voter: v.name.clone(),
                ballot,
            });
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
    use crate::control::{Budgets, ProngSet, ResourceModel, WinnerModel};
    use crate::election::Candidate;

    fn inst(voters: Vec<Voter>, budgets: Budgets) -> ControlInstance {
        ControlInstance {
            candidates: vec![Candidate::new(0, "c"), Candidate::new(1, "p")],
            spoilers: vec![],
            registered: voters,
            unregistered: vec![],
            focus: CandidateId(1),
            budgets,
            goal: Goal::Destructive,
            winner_model: WinnerModel::Unique,
            resource_model: ResourceModel::Separate,
            prongs: ProngSet::new([Prong::DeleteVoters]),
        }
    }

    #[test]
    fn no_condorcet_winner_needs_nothing() {
        let i = inst(
            vec![Voter::ranking("x", &[0, 1]), Voter::ranking("y", &[1, 0])],
            Budgets::default(),
        );
        assert!(condorcet_destructive_ac_av_dv_bv(&i).unwrap().plan().unwrap().is_empty());
    }

    #[test]
    fn one_deletion_breaks_a_one_vote_lead() {
        let mut i = inst(
            vec![
                Voter::ranking("x", &[1, 0]),
                Voter::ranking("y", &[1, 0]),
                Voter::ranking("z", &[0, 1]),
            ],
            Budgets { dv: 1, ..Budgets::default() },
        );
        let r = condorcet_destructive_ac_av_dv_bv(&i).unwrap();
        assert_eq!(r.plan().unwrap().delete_voters.len(), 1);
        i.budgets.dv = 0;
        assert!(!condorcet_destructive_ac_av_dv_bv(&i).unwrap().is_plan());
    }
}
