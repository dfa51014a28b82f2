//! Fixed-parameter control solver for few candidates.
//!
//! For each candidate set `K` reachable from `C` within the candidate
//! budgets, the voter side of the attack is written as the integer program
//! `P(K)` over anonymous counts and checked for an integral solution.
//! Destructive goals ask whether some rival can be made a winner.

mod encode;
mod system;

use std::collections::BTreeSet;

use thiserror::Error;

pub use encode::{
    build_control_program, maximin_guesses, maximin_win_programs, orders, win_constraints_scoring,
    AnonymousProfile, ControlProgram, MaximinGuess,
};
pub use system::{solve_feasibility, Cmp, LinearSystem, Row, Var, MAX_BOUND};

use crate::attack::AttackResult;
use crate::control::{check_plan_goal, ControlError, ControlInstance, ControlPlan, Goal, Prong, ResourceModel, WinnerModel};
use crate::election::{Ballot, CandidateId, ElectionError, Rule};
use encode::{candidate_moves, maximin_systems, scoring_system, Contest};

/// Largest `|C ∪ A|` the solver accepts.
pub const MAX_CANDIDATES: usize = 4;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FptError {
    #[error(transparent)]
    Control(#[from] ControlError),
    #[error(transparent)]
    Election(#[from] ElectionError),
    #[error("the integer-program solver does not support {0}")]
    Unsupported(String),
    #[error("variable `{0}` needs finite bounds within ±2^40")]
    Unbounded(String),
    #[error("row refers to undeclared variable {0}")]
    UnknownVariable(usize),
    #[error("candidate {0} is not in the candidate set")]
    TargetNotInSet(CandidateId),
    #[error("the candidate set must contain the focus candidate")]
    FocusNotInSet,
    #[error("maximin programs need at least two candidates, got {0}")]
    TooFewCandidates(usize),
    #[error("win system has {got} count variables, expected {expected}")]
    WinArity { expected: usize, got: usize },
    #[error("ballot ranks candidates outside the candidate set")]
    BallotOutsideCandidates,
    #[error("instance has {0} candidates, the integer-program solver allows {MAX_CANDIDATES}")]
    TooLarge(usize),
}

#[derive(Clone, Copy)]
enum Family<'a> {
    Scoring(&'a Rule),
    Maximin,
}

fn family(rule: &Rule) -> Result<Family<'_>, FptError> {
    match rule {
        Rule::Maximin => Ok(Family::Maximin),
        r if r.scoring_vector(1).is_some() => Ok(Family::Scoring(r)),
        r => Err(FptError::Unsupported(r.to_string())),
    }
}

/// Whether [`fpt_solve`] handles `rule`.
pub fn supports(rule: &Rule) -> bool {
    family(rule).is_ok()
}

/// Candidate sets containing the focus that the candidate budgets can
/// reach, fewest candidate actions first, then by sorted ids.
fn reachable_sets(inst: &ControlInstance) -> Vec<Vec<CandidateId>> {
    let universe = inst.universe_ids();
    let unlimited = inst.prongs.contains(Prong::AddCandidatesUnlimited);
    let mut out: Vec<(usize, Vec<CandidateId>)> = Vec::new();
    for mask in 0u32..(1 << universe.len()) {
        let mut k: Vec<CandidateId> = (0..universe.len())
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| universe[i])
            .collect();
        if !k.contains(&inst.focus) {
            continue;
        }
        k.sort();
        let (added, deleted) = candidate_moves(inst, &k);
        let add_ok = added == 0 || unlimited || inst.prongs.contains(Prong::AddCandidates);
        let del_ok = deleted == 0 || inst.prongs.contains(Prong::DeleteCandidates);
        if !add_ok || !del_ok {
            continue;
        }
        let charged = if unlimited { 0 } else { added };
        let fits = match inst.resource_model {
            ResourceModel::Separate => (unlimited || added <= inst.budgets.ac) && deleted <= inst.budgets.dc,
            ResourceModel::Shared(pool) => charged + deleted <= pool,
        };
        if fits {
            out.push((added + deleted, k));
        }
    }
    out.sort();
    out.into_iter().map(|(_, k)| k).collect()
}

fn win_systems(fam: Family, k: &[CandidateId], contest: &Contest, cap: u64) -> Result<Vec<LinearSystem>, FptError> {
    match fam {
        Family::Scoring(rule) => match rule.scoring_vector(k.len()).unwrap() {
            Ok(v) => Ok(vec![scoring_system(&v, k, contest, cap)?]),
            // a fixed-length vector elects nobody on other candidate counts
            Err(_) => Ok(Vec::new()),
        },
        Family::Maximin if k.len() == 1 => {
            // the lone candidate wins, see the maximin rule
            let mut s = LinearSystem::new();
            s.add_var("n1", 0, cap as i64)?;
            Ok(vec![s])
        }
        Family::Maximin => maximin_systems(k, contest, cap),
    }
}

/// Contests to try on candidate set `k`; any feasible one meets the goal.
fn contests(inst: &ControlInstance, k: &[CandidateId]) -> Vec<Contest> {
    let m = k.len();
    let p = k.iter().position(|&c| c == inst.focus).unwrap();
    match (inst.goal, inst.winner_model) {
        (Goal::Constructive, model) => vec![Contest::win(m, p, model)],
        // some rival is a winner, so p is not the unique one
        (Goal::Destructive, WinnerModel::Unique) => (0..m)
            .filter(|&c| c != p)
            .map(|c| Contest::win(m, c, WinnerModel::Nonunique))
            .collect(),
        (Goal::Destructive, WinnerModel::Nonunique) => (0..m).filter(|&c| c != p).map(|c| Contest::beat(c, p)).collect(),
    }
}

/// Decides `inst` under `rule` by integer programming over candidate sets.
///
/// Supports positional rules and maximin with linear-order ballots, both
/// goals and both winner models, and either resource model. Any plan found
/// is re-verified before it is returned.
pub fn fpt_solve(inst: &ControlInstance, rule: &Rule) -> Result<AttackResult, FptError> {
    let fam = family(rule)?;
    inst.validate()?;
    let m = inst.candidates.len() + inst.spoilers.len();
    if m > MAX_CANDIDATES {
        return Err(FptError::TooLarge(m));
    }
    if check_plan_goal(inst, &ControlPlan::empty(), rule)? {
        return Ok(AttackResult::from_plan(ControlPlan::empty()));
    }
    let cap = (inst.registered.len() + inst.unregistered.len()) as u64;
    for k in reachable_sets(inst) {
        for contest in contests(inst, &k) {
            for win in win_systems(fam, &k, &contest, cap)? {
                let prog = build_control_program(&k, inst, &win)?;
                if let Some(x) = solve_feasibility(&prog.system) {
                    let plan = reconstruct(inst, &prog, &x)?;
                    assert!(check_plan_goal(inst, &plan, rule)?, "integer-program plan failed re-verification");
                    return Ok(AttackResult::from_plan(plan));
                }
            }
        }
    }
    Ok(AttackResult::impossible())
}

/// Reads a plan off a solution of `P(K)`, taking voters of each class in
/// name order: the first `dv_i` registered voters are deleted, the first
/// `av_i` unregistered ones added, and the remaining class members are
/// bribed to order `j` in blocks of `bv_{i,j}`, ascending `j`.
fn reconstruct(inst: &ControlInstance, prog: &ControlProgram, x: &[i64]) -> Result<ControlPlan, FptError> {
    let k: BTreeSet<CandidateId> = prog.candidates.iter().copied().collect();
    let profile = AnonymousProfile::new(&prog.candidates);
    let mut plan = ControlPlan::empty();
    plan.add_candidates = inst.spoilers.iter().map(|s| s.id).filter(|id| k.contains(id)).collect();
    plan.delete_candidates = inst.candidates.iter().map(|c| c.id).filter(|id| !k.contains(id)).collect();
    let r = prog.orders.len();
    let classes = |voters: &[crate::election::Voter]| -> Result<Vec<Vec<String>>, FptError> {
        let mut out = vec![Vec::new(); r];
        for v in voters {
            out[profile.class_of(&v.ballot)?].push(v.name.clone());
        }
        for c in &mut out {
            c.sort();
        }
        Ok(out)
    };
    let registered = classes(&inst.registered)?;
    let unregistered = classes(&inst.unregistered)?;
    for i in 0..r {
        let dv = x[prog.dv(i)] as usize;
        let av = x[prog.av(i)] as usize;
        plan.delete_voters.extend(registered[i][..dv].iter().cloned());
        plan.add_voters.extend(unregistered[i][..av].iter().cloned());
        let mut members: Vec<String> = registered[i][dv..].iter().chain(&unregistered[i][..av]).cloned().collect();
        members.sort();
        let mut next = members.into_iter();
        for j in (0..r).filter(|&j| j != i) {
            for _ in 0..x[prog.bv(i, j)] {
                let name = next.next().expect("flow row keeps class sizes");
                plan.bribes.insert(name, Ballot::Order(prog.orders[j].clone()));
            }
        }
    }
    Ok(plan)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::control::{Budgets, ProngSet};
    use crate::election::{Candidate, Voter};

    fn inst(voters: Vec<Voter>, prongs: &[Prong], budgets: Budgets) -> ControlInstance {
        ControlInstance {
            candidates: vec![Candidate::new(0, "p"), Candidate::new(1, "a"), Candidate::new(2, "b")],
            spoilers: vec![],
            registered: voters,
            unregistered: vec![],
            focus: CandidateId(0),
            budgets,
            goal: Goal::Constructive,
            winner_model: WinnerModel::Unique,
            resource_model: ResourceModel::Separate,
            prongs: ProngSet::new(prongs.iter().copied()),
        }
    }

    #[test]
    fn already_won_gives_empty_plan() {
        let i = inst(vec![Voter::ranking("x", &[0, 1, 2])], &[], Budgets::default());
        assert_eq!(fpt_solve(&i, &Rule::Plurality).unwrap().plan(), Some(&ControlPlan::empty()));
    }

    #[test]
    fn bribe_through_program() {
        let voters = vec![
            Voter::ranking("v1", &[1, 0, 2]),
            Voter::ranking("v2", &[1, 2, 0]),
            Voter::ranking("v3", &[0, 1, 2]),
        ];
        let mut i = inst(voters, &[Prong::Bribe], Budgets { bv: 1, ..Budgets::default() });
        let r = fpt_solve(&i, &Rule::Plurality).unwrap();
        assert_eq!(r.plan().unwrap().bribes.len(), 1);
        i.budgets.bv = 0;
        i.prongs = ProngSet::new([]);
        assert!(!fpt_solve(&i, &Rule::Plurality).unwrap().is_plan());
    }

    #[test]
    fn approval_is_unsupported() {
        let i = inst(vec![], &[], Budgets::default());
        assert!(matches!(fpt_solve(&i, &Rule::Approval), Err(FptError::Unsupported(_))));
        assert!(!supports(&Rule::Copeland(crate::election::Alpha::ONE)));
        assert!(supports(&Rule::Maximin));
    }

    #[test]
    fn zero_bribe_budget_keeps_diagonal() {
        let voters = vec![Voter::ranking("v1", &[0, 1, 2]), Voter::ranking("v2", &[1, 0, 2])];
        let i = inst(voters, &[], Budgets::default());
        let k = vec![CandidateId(0), CandidateId(1), CandidateId(2)];
        let win = win_constraints_scoring(&[1, 0, 0], &k, CandidateId(0), WinnerModel::Nonunique, 2).unwrap();
        let prog = build_control_program(&k, &i, &win).unwrap();
        let x = solve_feasibility(&prog.system).unwrap();
        for a in 0..6 {
            for b in 0..6 {
                let want = if a == b { prog.registered_counts[a] as i64 } else { 0 };
                assert_eq!(x[prog.bv(a, b)], want);
            }
        }
    }

    #[test]
    fn destructive_on_a_cycle_needs_nothing() {
        let voters = vec![
            Voter::ranking("v1", &[0, 1, 2]),
            Voter::ranking("v2", &[2, 0, 1]),
            Voter::ranking("v3", &[1, 2, 0]),
        ];
        let mut i = inst(voters, &[Prong::AddVoters], Budgets::default());
        i.goal = Goal::Destructive;
        // a 3-cycle ties everyone, so p is already not the unique winner
        assert_eq!(fpt_solve(&i, &Rule::Maximin).unwrap().plan(), Some(&ControlPlan::empty()));
    }
}
