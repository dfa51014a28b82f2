//! Polynomial-time multiprong attack planners.
//!
//! Every planner returns an [`AttackResult`]. A `Plan` outcome has been
//! re-checked with [`check_plan_goal`] before it is returned.

use std::fmt;

use thiserror::Error;

use crate::control::{
    apply_plan, check_plan_goal, shared_to_separate, ControlError, ControlInstance, ControlPlan,
    Goal, Prong, ProngSet, WinnerModel,
};
use crate::election::{Ballot, CandidateId, Election, Rule};

mod approval;
mod condorcet;
mod copeland;
mod llull;
mod maximin;
mod plurality;

pub use approval::approval_destructive_ac_av_dv_bv;
pub use condorcet::condorcet_destructive_ac_av_dv_bv;
pub use copeland::copeland_destructive_ac_dc;
pub use llull::{llull_constructive_ac, llull_constructive_av};
pub use maximin::{maximin_constructive_acu_dc, maximin_destructive_ac_dc};
pub use plurality::{plurality_constructive_av_dv_bv, plurality_destructive_av_dv_bv};

/// One elementary control action.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Move {
    AddCandidate(CandidateId),
    DeleteCandidate(CandidateId),
    AddVoter(String),
    DeleteVoter(String),
    Bribe { voter: String, ballot: Ballot },
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::AddCandidate(c) => write!(f, "add candidate {c}"),
            Move::DeleteCandidate(c) => write!(f, "delete candidate {c}"),
            Move::AddVoter(v) => write!(f, "add voter {v}"),
            Move::DeleteVoter(v) => write!(f, "delete voter {v}"),
            Move::Bribe { voter, .. } => write!(f, "bribe voter {voter}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Plan(ControlPlan),
    Impossible,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AttackResult {
    pub outcome: Outcome,
    pub trace: Vec<Move>,
}

impl AttackResult {
    pub fn impossible() -> Self {
        AttackResult {
            outcome: Outcome::Impossible,
            trace: Vec::new(),
        }
    }

    /// A `Plan` result whose trace lists the plan's actions in canonical order.
    pub fn from_plan(plan: ControlPlan) -> Self {
        let mut trace = Vec::new();
        trace.extend(plan.add_candidates.iter().map(|&c| Move::AddCandidate(c)));
        trace.extend(plan.delete_candidates.iter().map(|&c| Move::DeleteCandidate(c)));
        trace.extend(plan.add_voters.iter().cloned().map(Move::AddVoter));
        trace.extend(plan.delete_voters.iter().cloned().map(Move::DeleteVoter));
        trace.extend(plan.bribes.iter().map(|(v, b)| Move::Bribe {
            voter: v.clone(),
            ballot: b.clone(),
        }));
        AttackResult {
            outcome: Outcome::Plan(plan),
            trace,
        }
    }

    pub fn plan(&self) -> Option<&ControlPlan> {
        match &self.outcome {
            Outcome::Plan(p) => Some(p),
            Outcome::Impossible => None,
        }
    }

    pub fn is_plan(&self) -> bool {
        matches!(self.outcome, Outcome::Plan(_))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AttackError {
    #[error(transparent)]
    Control(#[from] ControlError),
    #[error(transparent)]
    Election(#[from] crate::election::ElectionError),
    #[error("no polynomial-time planner covers {rule} {goal:?} {prongs}")]
    NoPlanner {
        rule: String,
        goal: Goal,
        prongs: ProngSet,
    },
    #[error("{planner} handles {expected:?} control only")]
    WrongGoal {
        planner: &'static str,
        expected: Goal,
    },
    #[error("{planner} covers {covered}, instance enables {got}")]
    UnsupportedProngs {
        planner: &'static str,
        covered: &'static str,
        got: ProngSet,
    },
    #[error("{planner} handles the unique-winner model only")]
    UnsupportedWinnerModel { planner: &'static str },
}

/// Static description of what a planner accepts.
pub(crate) struct Coverage {
    pub name: &'static str,
    pub goal: Goal,
    pub prongs: &'static [Prong],
    pub covered: &'static str,
    pub nonunique: bool,
}

impl Coverage {
    pub fn check(&self, inst: &ControlInstance) -> Result<(), AttackError> {
        if inst.goal != self.goal {
            return Err(AttackError::WrongGoal {
                planner: self.name,
                expected: self.goal,
            });
        }
        if !inst.prongs.is_within(self.prongs) {
            return Err(AttackError::UnsupportedProngs {
                planner: self.name,
                covered: self.covered,
                got: inst.prongs.clone(),
            });
        }
        if !self.nonunique && inst.winner_model == WinnerModel::Nonunique {
            return Err(AttackError::UnsupportedWinnerModel { planner: self.name });
        }
        inst.validate()?;
        Ok(())
    }
}

/// Runs a separate-model planner, splitting a shared budget first.
pub(crate) fn with_separate(
    inst: &ControlInstance,
    run: impl Fn(&ControlInstance) -> Result<AttackResult, AttackError>,
) -> Result<AttackResult, AttackError> {
    if !inst.is_shared() {
        return run(inst);
    }
    for part in shared_to_separate(inst) {
        let r = run(&part)?;
        if r.is_plan() {
            return Ok(r);
        }
    }
    Ok(AttackResult::impossible())
}

/// A plan under construction plus the moves that built it.
pub(crate) struct Builder<'a> {
    pub inst: &'a ControlInstance,
    pub plan: ControlPlan,
    pub trace: Vec<Move>,
}

impl<'a> Builder<'a> {
    pub fn new(inst: &'a ControlInstance) -> Self {
        Builder {
            inst,
            plan: ControlPlan::empty(),
            trace: Vec::new(),
        }
    }

    pub fn election(&self) -> Election {
        apply_plan(self.inst, &self.plan).expect("planner produced an illegal plan")
    }

    pub fn push(&mut self, m: Move) {
        match &m {
            Move::AddCandidate(c) => {
                self.plan.add_candidates.insert(*c);
            }
            Move::DeleteCandidate(c) => {
                self.plan.delete_candidates.insert(*c);
            }
            Move::AddVoter(v) => {
                self.plan.add_voters.insert(v.clone());
            }
            Move::DeleteVoter(v) => {
                self.plan.delete_voters.insert(v.clone());
            }
            Move::Bribe { voter, ballot } => {
                self.plan.bribes.insert(voter.clone(), ballot.clone());
            }
        }
        self.trace.push(m);
    }

    /// Certifies the plan: `Plan` iff the goal holds after applying it.
    pub fn finish(self, rule: &Rule) -> Result<AttackResult, AttackError> {
        if check_plan_goal(self.inst, &self.plan, rule)? {
            Ok(AttackResult {
                outcome: Outcome::Plan(self.plan),
                trace: self.trace,
            })
        } else {
            Ok(AttackResult {
                outcome: Outcome::Impossible,
                trace: self.trace,
            })
        }
    }
}

/// `ballot` with `c` moved to the top. Approval ballots are returned as is.
pub(crate) fn lift_to_top(ballot: &Ballot, c: CandidateId) -> Ballot {
    match ballot {
        Ballot::Order(o) => {
            let mut out = Vec::with_capacity(o.len());
            out.push(c);
            out.extend(o.iter().copied().filter(|&x| x != c));
            Ballot::Order(out)
        }
        Ballot::Approval(_) => ballot.clone(),
    }
}

/// One row of the planner coverage table.
#[derive(Clone, Copy, Debug)]
pub struct Route {
    pub planner: &'static str,
    pub rule: &'static str,
    pub goal: Goal,
    pub prongs: &'static [Prong],
    pub nonunique: bool,
}

/// Every (rule, goal, prong set) combination a polynomial-time planner covers.
pub const ROUTES: &[Route] = &[
    Route {
        planner: "plurality_constructive_av_dv_bv",
        rule: "plurality",
        goal: Goal::Constructive,
        prongs: &[Prong::AddVoters, Prong::DeleteVoters, Prong::Bribe],
        nonunique: false,
    },
    Route {
        planner: "plurality_destructive_av_dv_bv",
        rule: "plurality",
        goal: Goal::Destructive,
        prongs: &[Prong::AddVoters, Prong::DeleteVoters, Prong::Bribe],
        nonunique: false,
    },
    Route {
        planner: "condorcet_destructive_ac_av_dv_bv",
        rule: "condorcet",
        goal: Goal::Destructive,
        prongs: &[Prong::AddCandidates, Prong::AddVoters, Prong::DeleteVoters, Prong::Bribe],
        nonunique: true,
    },
    Route {
        planner: "approval_destructive_ac_av_dv_bv",
        rule: "approval",
        goal: Goal::Destructive,
        prongs: &[Prong::AddCandidates, Prong::AddVoters, Prong::DeleteVoters, Prong::Bribe],
        nonunique: false,
    },
    Route {
        planner: "copeland_destructive_ac_dc",
        rule: "copeland",
        goal: Goal::Destructive,
        prongs: &[Prong::AddCandidates, Prong::DeleteCandidates],
        nonunique: false,
    },
    Route {
        planner: "maximin_constructive_acu_dc",
        rule: "maximin",
        goal: Goal::Constructive,
        prongs: &[Prong::AddCandidatesUnlimited, Prong::DeleteCandidates],
        nonunique: false,
    },
    Route {
        planner: "maximin_destructive_ac_dc",
        rule: "maximin",
        goal: Goal::Destructive,
        prongs: &[Prong::AddCandidates, Prong::DeleteCandidates],
        nonunique: false,
    },
    Route {
        planner: "llull_constructive_ac",
        rule: "llull",
        goal: Goal::Constructive,
        prongs: &[Prong::AddCandidates],
        nonunique: false,
    },
    Route {
        planner: "llull_constructive_av",
        rule: "llull",
        goal: Goal::Constructive,
        prongs: &[Prong::AddVoters],
        nonunique: false,
    },
];

fn rule_family(rule: &Rule) -> &'static str {
    match rule {
        Rule::Plurality => "plurality",
        Rule::Copeland(_) => "copeland",
        Rule::Maximin => "maximin",
        Rule::Approval => "approval",
        Rule::Condorcet => "condorcet",
        Rule::OriginalLlull => "llull",
        Rule::Scoring(_) => "scoring",
    }
}

/// The planner covering `inst` under `rule`, if any.
pub fn route(inst: &ControlInstance, rule: &Rule) -> Option<&'static Route> {
    let family = rule_family(rule);
    ROUTES.iter().find(|r| {
        r.rule == family
            && r.goal == inst.goal
            && inst.prongs.is_within(r.prongs)
            && (r.nonunique || inst.winner_model == WinnerModel::Unique)
    })
}

/// Runs the polynomial-time planner that covers `inst` under `rule`.
pub fn plan_greedy(inst: &ControlInstance, rule: &Rule) -> Result<AttackResult, AttackError> {
    let Some(r) = route(inst, rule) else {
        return Err(AttackError::NoPlanner {
            rule: rule.to_string(),
            goal: inst.goal,
            prongs: inst.prongs.clone(),
        });
    };
    match (r.planner, rule) {
        ("plurality_constructive_av_dv_bv", _) => plurality_constructive_av_dv_bv(inst),
        ("plurality_destructive_av_dv_bv", _) => plurality_destructive_av_dv_bv(inst),
        ("condorcet_destructive_ac_av_dv_bv", _) => condorcet_destructive_ac_av_dv_bv(inst),
        ("approval_destructive_ac_av_dv_bv", _) => approval_destructive_ac_av_dv_bv(inst),
        ("copeland_destructive_ac_dc", Rule::Copeland(a)) => copeland_destructive_ac_dc(inst, *a),
        ("maximin_constructive_acu_dc", _) => maximin_constructive_acu_dc(inst),
        ("maximin_destructive_ac_dc", _) => maximin_destructive_ac_dc(inst),
        ("llull_constructive_ac", _) => llull_constructive_ac(inst),
        _ => llull_constructive_av(inst),
    }
}
