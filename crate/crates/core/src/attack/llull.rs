use std::collections::BTreeSet;

use super::{with_separate, AttackError, AttackResult, Builder, Coverage, Move};
use crate::control::{ControlInstance, Goal, Prong};
use crate::election::{CandidateId, Rule};

/// Constructive OriginalLlull control by adding candidates.
///
/// The only useful addition is the one that makes the candidate names equal
/// the voter names; the attack succeeds if that addition fits the budget and
/// leaves `p` the unique Copeland¹ winner.
pub fn llull_constructive_ac(inst: &ControlInstance) -> Result<AttackResult, AttackError> {
    Coverage {
        name: "OriginalLlull constructive AC",
        goal: Goal::Constructive,
        prongs: &[Prong::AddCandidates],
        covered: "AC",
        nonunique: false,
    }
    .check(inst)?;
    with_separate(inst, by_candidates)
}

fn by_candidates(inst: &ControlInstance) -> Result<AttackResult, AttackError> {
    let voters: BTreeSet<&str> = inst.registered.iter().map(|v| v.name.as_str()).collect();
    let registered: BTreeSet<&str> = inst.candidates.iter().map(|c| c.name.as_str()).collect();
    if !registered.is_subset(&voters) {
        return Ok(AttackResult::impossible());
    }
    let missing: Vec<&str> = voters.difference(&registered).copied().collect();
    // one spoiler per missing name; try every choice when names repeat
    let options: Vec<Vec<CandidateId>> = missing
        .iter()
        .map(|&n| {
            let mut ids: Vec<CandidateId> = inst.spoilers.iter().filter(|s| s.name == n).map(|s| s.id).collect();
            ids.sort();
            ids
        })
        .collect();
    if options.iter().any(Vec::is_empty) || missing.len() > inst.effective_budgets().ac {
        return Ok(AttackResult::impossible());
    }
    let mut pick = vec![0usize; options.len()];
    loop {
        let mut b = Builder::new(inst);
        for (o, &i) in options.iter().zip(&pick) {
            b.push(Move::AddCandidate(o[i]));
        }
        let r = b.finish(&Rule::OriginalLlull)?;
        if r.is_plan() {
            return Ok(r);
        }
        let mut j = 0;
        loop {
            if j == pick.len() {
                return Ok(AttackResult::impossible());
            }
            pick[j] += 1;
            if pick[j] < options[j].len() {
                break;
            }
            pick[j] = 0;
            j += 1;
        }
    }
}

/// Constructive OriginalLlull control by adding voters.
///
/// Adds exactly the unregistered voters whose names are missing from the
/// electorate, when that fits the budget.
pub fn llull_constructive_av(inst: &ControlInstance) -> Result<AttackResult, AttackError> {
    Coverage {
        name: "OriginalLlull constructive AV",
        goal: Goal::Constructive,
        prongs: &[Prong::AddVoters],
        covered: "AV",
        nonunique: false,
    }
    .check(inst)?;
    with_separate(inst, by_voters)
}

fn by_voters(inst: &ControlInstance) -> Result<AttackResult, AttackError> {
    let voters: BTreeSet<&str> = inst.registered.iter().map(|v| v.name.as_str()).collect();
    let names: BTreeSet<&str> = inst.candidates.iter().map(|c| c.name.as_str()).collect();
    if !voters.is_subset(&names) {
        return Ok(AttackResult::impossible());
    }
    let missing: Vec<&str> = names.difference(&voters).copied().collect();
    let pool: BTreeSet<&str> = inst.unregistered.iter().map(|w| w.name.as_str()).collect();
    if missing.iter().any(|n| !pool.contains(n)) || missing.len() > inst.effective_budgets().av {
        return Ok(AttackResult::impossible());
    }
    let mut b = Builder::new(inst);
    for n in missing {
        b.push(Move::AddVoter(n.to_string()));
    }
    b.finish(&Rule::OriginalLlull)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::control::{Budgets, ProngSet, ResourceModel, WinnerModel};
    use crate::election::{Candidate, Voter};

    fn inst(prong: Prong) -> ControlInstance {
        ControlInstance {
            candidates: vec![Candidate::new(0, "x"), Candidate::new(1, "y")],
            spoilers: vec![],
            registered: vec![Voter::ranking("x", &[0, 1]), Voter::ranking("y", &[0, 1])],
            unregistered: vec![],
            focus: CandidateId(0),
            budgets: Budgets::default(),
            goal: Goal::Constructive,
            winner_model: WinnerModel::Unique,
            resource_model: ResourceModel::Separate,
            prongs: ProngSet::new([prong]),
        }
    }

    #[test]
    fn names_already_match() {
        let i = inst(Prong::AddCandidates);
        assert!(llull_constructive_ac(&i).unwrap().plan().unwrap().is_empty());
        assert!(llull_constructive_av(&inst(Prong::AddVoters)).unwrap().plan().unwrap().is_empty());
    }

    #[test]
    fn unreachable_name_equation() {
        let mut i = inst(Prong::AddVoters);
        i.registered.pop();
        i.budgets.av = 1;
        assert!(!llull_constructive_av(&i).unwrap().is_plan());
        i.unregistered.push(Voter::ranking("y", &[0, 1]));
        assert_eq!(llull_constructive_av(&i).unwrap().plan().unwrap().add_voters.len(), 1);
    }

    #[test]
    fn adds_the_missing_candidate() {
        let mut i = inst(Prong::AddCandidates);
        i.registered = vec![
            Voter::ranking("x", &[0, 1, 2]),
            Voter::ranking("y", &[0, 2, 1]),
            Voter::ranking("z", &[0, 1, 2]),
        ];
        i.spoilers.push(Candidate::new(2, "z"));
        assert!(!llull_constructive_ac(&i).unwrap().is_plan());
        i.budgets.ac = 1;
        let r = llull_constructive_ac(&i).unwrap();
        assert!(r.plan().unwrap().add_candidates.contains(&CandidateId(2)));
    }
}
