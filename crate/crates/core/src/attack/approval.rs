use super::{with_separate, AttackError, AttackResult, Builder, Coverage, Move};
use crate::control::{ControlInstance, Goal, Prong};
use crate::election::{Ballot, CandidateId, Election, Rule};

const PRONGS: &[Prong] = &[
    Prong::AddCandidates,
    Prong::AddVoters,
    Prong::DeleteVoters,
    Prong::Bribe,
];

/// Destructive approval control by adding candidates and adding, deleting
/// and bribing voters.
///
/// For each rival `c` in id order, adds `c` if it is a spoiler, adds voters
/// approving `c` but not `p`, deletes voters approving `p` but not `c`, and
/// bribes such voters to swap their approvals of `p` and `c`, until `c`
/// reaches `p`'s score.
pub fn approval_destructive_ac_av_dv_bv(inst: &ControlInstance) -> Result<AttackResult, AttackError> {
    Coverage {
        name: "approval destructive AC+AV+DV+BV",
        goal: Goal::Destructive,
        prongs: PRONGS,
        covered: "AC+AV+DV+BV",
        nonunique: false,
    }
    .check(inst)?;
    with_separate(inst, run)
}

fn approves(ballot: &Ballot, pos: usize) -> bool {
    matches!(ballot, Ballot::Approval(a) if a[pos])
}

/// Whether `p` still strictly leads `c`.
fn p_leads(e: &Election, p: CandidateId, c: CandidateId) -> bool {
    let (ip, ic) = (e.index_of(p).unwrap(), e.index_of(c).unwrap());
    let (mut sp, mut sc) = (0, 0);
    for v in e.voters() {
        sp += approves(&v.ballot, ip) as i64;
        sc += approves(&v.ballot, ic) as i64;
    }
    sp > sc
}

fn run(inst: &ControlInstance) -> Result<AttackResult, AttackError> {
    let rule = Rule::Approval;
    let p = inst.focus;
    let start = Builder::new(inst);
    let w = crate::election::winners(&start.election(), &rule)?;
    if !(w.len() == 1 && w.contains(&p)) {
        return start.finish(&rule);
    }
    let budgets = inst.effective_budgets();
    let universe = inst.universe_ids();
    let up = universe.iter().position(|&x| x == p).unwrap();
    let mut rivals: Vec<CandidateId> = universe.iter().copied().filter(|&c| c != p).collect();
    rivals.sort();
    for c in rivals {
        let uc = universe.iter().position(|&x| x == c).unwrap();
        let mut b = Builder::new(inst);
        if inst.is_spoiler(c) {
            if budgets.ac == 0 {
                continue;
            }
            b.push(Move::AddCandidate(c));
        }
        let mut adds: Vec<String> = inst
            .unregistered
            .iter()
            .filter(|w| approves(&w.ballot, uc) && !approves(&w.ballot, up))
            .map(|w| w.name.clone())
            .collect();
        adds.sort();
        for w in adds.into_iter().take(budgets.av) {
            if !p_leads(&b.election(), p, c) {
                break;
            }
            b.push(Move::AddVoter(w));
        }
        let mut dels: Vec<String> = inst
            .registered
            .iter()
            .filter(|v| approves(&v.ballot, up) && !approves(&v.ballot, uc))
            .map(|v| v.name.clone())
            .collect();
        dels.sort();
        for v in dels.into_iter().take(budgets.dv) {
            if !p_leads(&b.election(), p, c) {
                break;
            }
            b.push(Move::DeleteVoter(v));
        }
        for _ in 0..budgets.bv {
            let e = b.election();
            if !p_leads(&e, p, c) {
                break;
            }
            let (ep, ec) = (e.index_of(p).unwrap(), e.index_of(c).unwrap());
            let mut left: Vec<_> = e
                .voters()
                .iter()
                .filter(|v| approves(&v.ballot, ep) && !approves(&v.ballot, ec))
                .collect();
            left.sort_by(|x, y| x.name.cmp(&y.name));
            let Some(v) = left.first() else { break };
            let Ballot::Approval(mut a) = v.ballot.clone() else { break };
            a.swap(ep, ec);
            b.push(Move::Bribe {
                voter: v.name.clone(),
                ballot: Ballot::Approval(a),
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
    use crate::election::{Candidate, Voter};

    fn approve(name: &str, bits: &[bool]) -> Voter {
        Voter::new(name, Ballot::Approval(bits.to_vec()))
    }

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
            prongs: ProngSet::new([Prong::Bribe]),
        }
    }

    #[test]
    fn tie_needs_nothing() {
        let i = inst(vec![approve("x", &[true, true])], Budgets::default());
        assert!(approval_destructive_ac_av_dv_bv(&i).unwrap().plan().unwrap().is_empty());
    }

    #[test]
    fn swap_one_voter() {
        let i = inst(
            vec![approve("x", &[true, true]), approve("y", &[false, true])],
            Budgets { bv: 1, ..Budgets::default() },
        );
        let r = approval_destructive_ac_av_dv_bv(&i).unwrap();
        assert_eq!(
            r.plan().unwrap().bribes.get("y"),
            Some(&Ballot::Approval(vec![true, false]))
        );
    }
}
