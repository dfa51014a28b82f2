//! Multiprong control instances, plans and their application.
//!
//! A [`ControlInstance`] describes an attacker who may add spoiler
//! candidates (AC), delete registered candidates (DC), add unregistered
//! voters (AV), delete registered voters (DV) and bribe voters (BV). A
//! [`ControlPlan`] is one concrete choice of those actions; [`apply_plan`]
//! turns it into the election that would result.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::election::{
    restrict_ballot, winner_indices, Ballot, Candidate, CandidateId, Election, ElectionError,
    Rule, Voter,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Prong {
    #[serde(rename = "AC")]
    AddCandidates,
    /// Adding an unlimited number of candidates: `k_AC = |A|`.
    #[serde(rename = "ACu")]
    AddCandidatesUnlimited,
    #[serde(rename = "DC")]
    DeleteCandidates,
    #[serde(rename = "AV")]
    AddVoters,
    #[serde(rename = "DV")]
    DeleteVoters,
    #[serde(rename = "BV")]
    Bribe,
}

impl Prong {
    pub const ALL: [Prong; 6] = [
        Prong::AddCandidates,
        Prong::AddCandidatesUnlimited,
        Prong::DeleteCandidates,
        Prong::AddVoters,
        Prong::DeleteVoters,
        Prong::Bribe,
    ];

    pub fn short_name(self) -> &'static str {
        match self {
            Prong::AddCandidates => "AC",
            Prong::AddCandidatesUnlimited => "ACu",
            Prong::DeleteCandidates => "DC",
            Prong::AddVoters => "AV",
            Prong::DeleteVoters => "DV",
            Prong::Bribe => "BV",
        }
    }

    pub fn parse(s: &str) -> Option<Prong> {
        Prong::ALL
            .into_iter()
            .find(|p| p.short_name().eq_ignore_ascii_case(s))
    }
}

impl fmt::Display for Prong {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

/// The set of control types an instance allows.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ProngSet(BTreeSet<Prong>);

impl ProngSet {
    pub fn new(prongs: impl IntoIterator<Item = Prong>) -> Self {
        ProngSet(prongs.into_iter().collect())
    }

    pub fn contains(&self, p: Prong) -> bool {
        self.0.contains(&p)
    }

    pub fn insert(&mut self, p: Prong) {
        self.0.insert(p);
    }

    pub fn iter(&self) -> impl Iterator<Item = Prong> + '_ {
        self.0.iter().copied()
    }

    pub fn is_within(&self, allowed: &[Prong]) -> bool {
        self.0.iter().all(|p| allowed.contains(p))
    }

    pub fn adds_candidates(&self) -> bool {
        self.contains(Prong::AddCandidates) || self.contains(Prong::AddCandidatesUnlimited)
    }
}

impl fmt::Display for ProngSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("none");
        }
        let names: Vec<_> = self.0.iter().map(|p| p.short_name()).collect();
        f.write_str(&names.join("+"))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Budgets {
    pub ac: usize,
    pub dc: usize,
    pub av: usize,
    pub dv: usize,
    pub bv: usize,
}

impl Budgets {
    pub fn get(&self, p: Prong) -> usize {
        match p {
            Prong::AddCandidates | Prong::AddCandidatesUnlimited => self.ac,
            Prong::DeleteCandidates => self.dc,
            Prong::AddVoters => self.av,
            Prong::DeleteVoters => self.dv,
            Prong::Bribe => self.bv,
        }
    }

    pub fn set(&mut self, p: Prong, value: usize) {
        match p {
            Prong::AddCandidates | Prong::AddCandidatesUnlimited => self.ac = value,
            Prong::DeleteCandidates => self.dc = value,
            Prong::AddVoters => self.av = value,
            Prong::DeleteVoters => self.dv = value,
            Prong::Bribe => self.bv = value,
        }
    }

    /// Componentwise `self <= other`.
    pub fn within(&self, other: &Budgets) -> bool {
        self.ac <= other.ac
            && self.dc <= other.dc
            && self.av <= other.av
            && self.dv <= other.dv
            && self.bv <= other.bv
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Goal {
    Constructive,
    Destructive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WinnerModel {
    Unique,
    Nonunique,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ResourceModel {
    /// Each prong has its own budget.
    Separate,
    /// One pool bounds the total number of actions across prongs. The
    /// per-prong budgets of the instance are ignored in this model.
    Shared(usize),
}

/// `(C, A, V, W, p, k_AC, k_DC, k_AV, k_DV, k_BV)` plus goal and models.
///
/// Ballots of both `registered` and `unregistered` voters range over the
/// universe `C ∪ A`, listed as `candidates` followed by `spoilers`;
/// approval vectors are aligned with that list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ControlInstance {
    pub candidates: Vec<Candidate>,
    pub spoilers: Vec<Candidate>,
    pub registered: Vec<Voter>,
    pub unregistered: Vec<Voter>,
    pub focus: CandidateId,
    pub budgets: Budgets,
    pub goal: Goal,
    pub winner_model: WinnerModel,
    pub resource_model: ResourceModel,
    pub prongs: ProngSet,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ControlError {
    #[error(transparent)]
    Election(#[from] ElectionError),
    #[error("candidate {0} is both registered and a spoiler")]
    SpoilerOverlap(CandidateId),
    #[error("voter `{0}` is both registered and unregistered")]
    VoterOverlap(String),
    #[error("focus candidate {0} is not a registered candidate")]
    FocusNotRegistered(CandidateId),
    #[error("ACu requires k_AC = |A| = {pool}, got {budget}")]
    UnlimitedAddBudget { budget: usize, pool: usize },
    #[error("AC and ACu cannot both be enabled")]
    ConflictingAddProngs,
    #[error("prong {0} is not enabled but has a nonzero budget")]
    BudgetOutsideMask(Prong),
    #[error("prong {0} is not enabled but its pool is nonempty")]
    PoolOutsideMask(Prong),
    #[error("candidate {0} is not a spoiler")]
    NotASpoiler(CandidateId),
    #[error("candidate {0} is not a registered candidate")]
    NotRegistered(CandidateId),
    #[error("the plan deletes the focus candidate")]
    DeletesFocus,
    #[error("voter `{0}` is not registered")]
    UnknownRegisteredVoter(String),
    #[error("voter `{0}` is not in the unregistered pool")]
    UnknownUnregisteredVoter(String),
    #[error("plan uses prong {0}, which the instance does not allow")]
    ProngNotAllowed(Prong),
    #[error("plan uses {used} {prong} actions, budget is {budget}")]
    BudgetExceeded {
        prong: Prong,
        used: usize,
        budget: usize,
    },
    #[error("plan uses {used} actions in total, shared budget is {budget}")]
    SharedBudgetExceeded { used: usize, budget: usize },
    #[error("bribed voter `{0}` is not in the final electorate")]
    BribeAbsentVoter(String),
    #[error("replacement ballot for `{voter}` is invalid: {reason}")]
    BribeBallot { voter: String, reason: String },
    #[error("cannot classify an empty list of prongs")]
    EmptyLabels,
}

impl ControlInstance {
    /// `C ∪ A` in ballot order.
    pub fn universe(&self) -> Vec<Candidate> {
        self.candidates
            .iter()
            .chain(&self.spoilers)
            .cloned()
            .collect()
    }

    pub fn universe_ids(&self) -> Vec<CandidateId> {
        self.candidates
            .iter()
            .chain(&self.spoilers)
            .map(|c| c.id)
            .collect()
    }

    pub fn is_registered_candidate(&self, id: CandidateId) -> bool {
        self.candidates.iter().any(|c| c.id == id)
    }

    pub fn is_spoiler(&self, id: CandidateId) -> bool {
        self.spoilers.iter().any(|c| c.id == id)
    }

    pub fn is_shared(&self) -> bool {
        matches!(self.resource_model, ResourceModel::Shared(_))
    }

    /// Budgets clipped to what each pool can absorb, in the separate model.
    pub fn effective_budgets(&self) -> Budgets {
        Budgets {
            ac: self.budgets.ac.min(self.spoilers.len()),
            dc: self.budgets.dc.min(self.candidates.len().saturating_sub(1)),
            av: self.budgets.av.min(self.unregistered.len()),
            dv: self.budgets.dv.min(self.registered.len()),
            bv: self
                .budgets
                .bv
                .min(self.registered.len() + self.unregistered.len()),
        }
    }

    /// The registered election `(C, V)`.
    pub fn base_election(&self) -> Election {
        let keep: BTreeSet<_> = self.candidates.iter().map(|c| c.id).collect();
        Election::from_parts(self.universe(), self.registered.clone()).restrict_unchecked(&keep)
    }

    /// Checks the structural invariants of the instance.
    pub fn validate(&self) -> Result<(), ControlError> {
        let registered: BTreeSet<_> = self.candidates.iter().map(|c| c.id).collect();
        for s in &self.spoilers {
            if registered.contains(&s.id) {
                return Err(ControlError::SpoilerOverlap(s.id));
            }
        }
        let names: BTreeSet<_> = self.registered.iter().map(|v| v.name.as_str()).collect();
        for w in &self.unregistered {
            if names.contains(w.name.as_str()) {
                return Err(ControlError::VoterOverlap(w.name.clone()));
            }
        }
        let all_voters: Vec<Voter> = self
            .registered
            .iter()
            .chain(&self.unregistered)
            .cloned()
            .collect();
        Election::new(self.universe(), all_voters)?;
        if !registered.contains(&self.focus) {
            return Err(ControlError::FocusNotRegistered(self.focus));
        }
        let p = &self.prongs;
        if p.contains(Prong::AddCandidates) && p.contains(Prong::AddCandidatesUnlimited) {
            return Err(ControlError::ConflictingAddProngs);
        }
        let separate = !self.is_shared();
        if separate && p.contains(Prong::AddCandidatesUnlimited) && self.budgets.ac != self.spoilers.len()
        {
            return Err(ControlError::UnlimitedAddBudget {
                budget: self.budgets.ac,
                pool: self.spoilers.len(),
            });
        }
        if !p.adds_candidates() {
            if separate && self.budgets.ac != 0 {
                return Err(ControlError::BudgetOutsideMask(Prong::AddCandidates));
            }
            if !self.spoilers.is_empty() {
                return Err(ControlError::PoolOutsideMask(Prong::AddCandidates));
            }
        }
        if !p.contains(Prong::AddVoters) && !self.unregistered.is_empty() {
            return Err(ControlError::PoolOutsideMask(Prong::AddVoters));
        }
        if separate {
            for prong in [
                Prong::DeleteCandidates,
                Prong::AddVoters,
                Prong::DeleteVoters,
                Prong::Bribe,
            ] {
                if !p.contains(prong) && self.budgets.get(prong) != 0 {
                    return Err(ControlError::BudgetOutsideMask(prong));
                }
            }
        }
        Ok(())
    }
}

/// A concrete attack `(A′, C′, V′, W′, bribes)`.
///
/// Bribe ballots range over the final candidate set `(C − C′) ∪ A′`;
/// approval replacements are aligned with that set's universe order.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ControlPlan {
    pub add_candidates: BTreeSet<CandidateId>,
    pub delete_candidates: BTreeSet<CandidateId>,
    pub add_voters: BTreeSet<String>,
    pub delete_voters: BTreeSet<String>,
    pub bribes: BTreeMap<String, Ballot>,
}

impl ControlPlan {
    pub fn empty() -> Self {
        ControlPlan::default()
    }

    pub fn is_empty(&self) -> bool {
        self.action_count() == 0
    }

    pub fn action_count(&self) -> usize {
        self.add_candidates.len()
            + self.delete_candidates.len()
            + self.add_voters.len()
            + self.delete_voters.len()
            + self.bribes.len()
    }

    /// Actions used per prong, as a budget vector.
    pub fn usage(&self) -> Budgets {
        Budgets {
            ac: self.add_candidates.len(),
            dc: self.delete_candidates.len(),
            av: self.add_voters.len(),
            dv: self.delete_voters.len(),
            bv: self.bribes.len(),
        }
    }

    /// The final candidate set `(C − C′) ∪ A′`, in universe order.
    pub fn final_candidates(&self, inst: &ControlInstance) -> Vec<CandidateId> {
        inst.candidates
            .iter()
            .filter(|c| !self.delete_candidates.contains(&c.id))
            .chain(inst.spoilers.iter().filter(|c| self.add_candidates.contains(&c.id)))
            .map(|c| c.id)
            .collect()
    }
}

fn check_plan(inst: &ControlInstance, plan: &ControlPlan) -> Result<(), ControlError> {
    for &a in &plan.add_candidates {
        if !inst.is_spoiler(a) {
            return Err(ControlError::NotASpoiler(a));
        }
    }
    for &c in &plan.delete_candidates {
        if c == inst.focus {
            return Err(ControlError::DeletesFocus);
        }
        if !inst.is_registered_candidate(c) {
            return Err(ControlError::NotRegistered(c));
        }
    }
    let registered: BTreeSet<&str> = inst.registered.iter().map(|v| v.name.as_str()).collect();
    let pool: BTreeSet<&str> = inst.unregistered.iter().map(|v| v.name.as_str()).collect();
    for v in &plan.delete_voters {
        if !registered.contains(v.as_str()) {
            return Err(ControlError::UnknownRegisteredVoter(v.clone()));
        }
    }
    for w in &plan.add_voters {
        if !pool.contains(w.as_str()) {
            return Err(ControlError::UnknownUnregisteredVoter(w.clone()));
        }
    }
    for name in plan.bribes.keys() {
        let present = (registered.contains(name.as_str()) && !plan.delete_voters.contains(name))
            || plan.add_voters.contains(name);
        if !present {
            return Err(ControlError::BribeAbsentVoter(name.clone()));
        }
    }
    let usage = plan.usage();
    let used_prongs = [
        (Prong::AddCandidates, usage.ac),
        (Prong::DeleteCandidates, usage.dc),
        (Prong::AddVoters, usage.av),
        (Prong::DeleteVoters, usage.dv),
        (Prong::Bribe, usage.bv),
    ];
    for (prong, used) in used_prongs {
        let enabled = match prong {
            Prong::AddCandidates => inst.prongs.adds_candidates(),
            _ => inst.prongs.contains(prong),
        };
        if used > 0 && !enabled {
            return Err(ControlError::ProngNotAllowed(prong));
        }
    }
    match inst.resource_model {
        ResourceModel::Separate => {
            for (prong, used) in used_prongs {
                let budget = inst.budgets.get(prong);
                if used > budget {
                    return Err(ControlError::BudgetExceeded {
                        prong,
                        used,
                        budget,
                    });
                }
            }
        }
        ResourceModel::Shared(k) => {
            // Unlimited candidate addition does not draw on the pool.
            let free = if inst.prongs.contains(Prong::AddCandidatesUnlimited) {
                usage.ac
            } else {
                0
            };
            let used = plan.action_count() - free;
            if used > k {
                return Err(ControlError::SharedBudgetExceeded { used, budget: k });
            }
        }
    }
    Ok(())
}

/// The post-attack election `((C − C′) ∪ A′, (V − V′) ∪ W′)` with bribed
/// voters' ballots replaced.
pub fn apply_plan(inst: &ControlInstance, plan: &ControlPlan) -> Result<Election, ControlError> {
    check_plan(inst, plan)?;
    let universe = inst.universe();
    let keep: BTreeSet<CandidateId> = plan.final_candidates(inst).into_iter().collect();
    let mask: Vec<bool> = universe.iter().map(|c| keep.contains(&c.id)).collect();
    let final_candidates: Vec<Candidate> = universe
        .iter()
        .filter(|c| keep.contains(&c.id))
        .cloned()
        .collect();
    let kept_ids: BTreeSet<_> = final_candidates.iter().map(|c| c.id).collect();
    let electorate = inst
        .registered
        .iter()
        .filter(|v| !plan.delete_voters.contains(&v.name))
        .chain(
            inst.unregistered
                .iter()
                .filter(|w| plan.add_voters.contains(&w.name)),
        );
    let mut voters = Vec::new();
    for v in electorate {
        let ballot = match plan.bribes.get(&v.name) {
            Some(b) => b.clone(),
            None => restrict_ballot(&v.ballot, &kept_ids, &mask),
        };
        voters.push(Voter {
            name: v.name.clone(),
            ballot,
        });
    }
    match Election::new(final_candidates, voters) {
        Ok(e) => Ok(e),
        Err(err) => {
            let voter = match &err {
                ElectionError::MalformedOrder(v) => Some(v.clone()),
                ElectionError::ApprovalLength { voter, .. } => Some(voter.clone()),
                ElectionError::MixedBallots => plan.bribes.keys().next().cloned(),
                _ => None,
            };
            match voter {
                Some(voter) if plan.bribes.contains_key(&voter) || matches!(err, ElectionError::MixedBallots) => {
                    Err(ControlError::BribeBallot {
                        voter,
                        reason: err.to_string(),
                    })
                }
                _ => Err(err.into()),
            }
        }
    }
}

/// Whether a winner set meets the instance goal for focus position `focus`.
pub(crate) fn goal_met(goal: Goal, model: WinnerModel, winners: &[usize], focus: usize) -> bool {
    let unique = winners.len() == 1 && winners[0] == focus;
    let member = winners.contains(&focus);
    match (goal, model) {
        (Goal::Constructive, WinnerModel::Unique) => unique,
        (Goal::Destructive, WinnerModel::Unique) => !unique,
        (Goal::Constructive, WinnerModel::Nonunique) => member,
        (Goal::Destructive, WinnerModel::Nonunique) => !member,
    }
}

/// Evaluates the goal on an election that contains the focus candidate.
pub(crate) fn election_meets_goal(
    inst: &ControlInstance,
    e: &Election,
    rule: &Rule,
) -> Result<bool, ControlError> {
    let w = winner_indices(e, rule)?;
    let focus = e
        .index_of(inst.focus)
        .ok_or(ControlError::DeletesFocus)?;
    Ok(goal_met(inst.goal, inst.winner_model, &w, focus))
}

/// Applies `plan` and evaluates the instance goal under `rule`.
pub fn check_plan_goal(
    inst: &ControlInstance,
    plan: &ControlPlan,
    rule: &Rule,
) -> Result<bool, ControlError> {
    let e = apply_plan(inst, plan)?;
    election_meets_goal(inst, &e, rule)
}

/// Splits a shared-budget instance into separate-budget instances such that
/// the shared instance is a yes-instance iff one of the outputs is.
///
/// The pool `k` is first clipped to the total capacity of the enabled
/// prongs, then every way of writing the clipped value as an ordered sum of
/// per-prong budgets is emitted. Unlimited candidate addition stays
/// unlimited and does not draw on the pool. A separate-model input is
/// returned unchanged.
pub fn shared_to_separate(inst: &ControlInstance) -> Vec<ControlInstance> {
    let ResourceModel::Shared(k) = inst.resource_model else {
        return vec![inst.clone()];
    };
    let capacity = |p: Prong| match p {
        Prong::AddCandidates => inst.spoilers.len(),
        Prong::DeleteCandidates => inst.candidates.len().saturating_sub(1),
        Prong::AddVoters => inst.unregistered.len(),
        Prong::DeleteVoters => inst.registered.len(),
        Prong::Bribe => inst.registered.len() + inst.unregistered.len(),
        Prong::AddCandidatesUnlimited => 0,
    };
    let active: Vec<Prong> = inst
        .prongs
        .iter()
        .filter(|&p| p != Prong::AddCandidatesUnlimited)
        .collect();
    let total = k.min(active.iter().map(|&p| capacity(p)).sum());
    let mut base = inst.clone();
    base.resource_model = ResourceModel::Separate;
    base.budgets = Budgets::default();
    if inst.prongs.contains(Prong::AddCandidatesUnlimited) {
        base.budgets.ac = inst.spoilers.len();
    }
    let mut out = Vec::new();
    let mut parts = vec![0usize; active.len()];
    compositions(total, &mut parts, 0, &mut |parts| {
        let mut i = base.clone();
        for (&p, &b) in active.iter().zip(parts) {
            i.budgets.set(p, b);
        }
        out.push(i);
    });
    if active.is_empty() {
        out.push(base);
    }
    out
}

/// Weak compositions of `total` into `parts.len()` parts, lexicographic.
fn compositions(total: usize, parts: &mut [usize], at: usize, emit: &mut dyn FnMut(&[usize])) {
    if parts.is_empty() {
        return;
    }
    if at == parts.len() - 1 {
        parts[at] = total;
        emit(parts);
        return;
    }
    for x in 0..=total {
        parts[at] = x;
        compositions(total - x, parts, at + 1, emit);
    }
}

/// Complexity label of one control type for a fixed election system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProngLabel {
    Immune,
    Vulnerable,
    Resistant,
}

/// Combines per-prong labels into the label of the multiprong problem:
/// resistant if any prong is, otherwise vulnerable if any prong is,
/// otherwise immune.
///
/// Precondition: every single prong has already been classified for the
/// system in question. The calculus is bookkeeping, not a proof; in
/// particular two vulnerable prongs of an arbitrary system need not combine
/// into a vulnerable pair.
pub fn classify_multiprong(labels: &[ProngLabel]) -> Result<ProngLabel, ControlError> {
    labels.iter().copied().max().ok_or(ControlError::EmptyLabels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::election::{is_unique_winner, Rule};

    fn id(i: u32) -> CandidateId {
        CandidateId(i)
    }

    /// a = 0, b = 1, p = 2; two a-voters, one b-voter, one p-voter.
    fn plurality_instance() -> ControlInstance {
        ControlInstance {
            candidates: vec![Candidate::new(0, "a"), Candidate::new(1, "b"), Candidate::new(2, "p")],
            spoilers: vec![],
            registered: vec![
                Voter::ranking("v1", &[0, 1, 2]),
                Voter::ranking("v2", &[0, 2, 1]),
                Voter::ranking("v3", &[1, 0, 2]),
                Voter::ranking("v4", &[2, 0, 1]),
            ],
            unregistered: vec![],
            focus: id(2),
            budgets: Budgets {
                dv: 1,
                bv: 1,
                ..Budgets::default()
            },
            goal: Goal::Constructive,
            winner_model: WinnerModel::Unique,
            resource_model: ResourceModel::Separate,
            prongs: ProngSet::new([Prong::DeleteVoters, Prong::Bribe]),
        }
    }

    #[test]
    fn empty_plan_is_identity() {
        let inst = plurality_instance();
        inst.validate().unwrap();
        let e = apply_plan(&inst, &ControlPlan::empty()).unwrap();
        assert_eq!(e, inst.base_election());
    }

    #[test]
    fn delete_and_bribe_move_scores() {
        let inst = plurality_instance();
        let mut plan = ControlPlan::empty();
        plan.delete_voters.insert("v1".into());
        plan.bribes.insert(
            "v2".into(),
            Ballot::Order(vec![id(2), id(0), id(1)]),
        );
        let before = crate::election::scores(&inst.base_election(), &Rule::Plurality).unwrap();
        let e = apply_plan(&inst, &plan).unwrap();
        let after = crate::election::scores(&e, &Rule::Plurality).unwrap();
        assert_eq!(after[&id(2)] - before[&id(2)], 1.into());
        assert_eq!(before[&id(0)] - after[&id(0)], 2.into());
        assert!(is_unique_winner(&e, &Rule::Plurality, id(2)).unwrap());
        assert!(check_plan_goal(&inst, &plan, &Rule::Plurality).unwrap());
    }

    #[test]
    fn plan_violations_are_named() {
        let inst = plurality_instance();
        let mut plan = ControlPlan::empty();
        plan.delete_voters.extend(["v1".to_string(), "v2".to_string()]);
        assert_eq!(
            apply_plan(&inst, &plan),
            Err(ControlError::BudgetExceeded {
                prong: Prong::DeleteVoters,
                used: 2,
                budget: 1
            })
        );
        let mut plan = ControlPlan::empty();
        plan.delete_candidates.insert(id(2));
        assert_eq!(apply_plan(&inst, &plan), Err(ControlError::DeletesFocus));
        let mut plan = ControlPlan::empty();
        plan.delete_candidates.insert(id(0));
        assert_eq!(
            apply_plan(&inst, &plan),
            Err(ControlError::ProngNotAllowed(Prong::DeleteCandidates))
        );
        let mut plan = ControlPlan::empty();
        plan.delete_voters.insert("v1".into());
        plan.bribes.insert("v1".into(), Ballot::Order(vec![id(2), id(0), id(1)]));
        assert_eq!(
            apply_plan(&inst, &plan),
            Err(ControlError::BribeAbsentVoter("v1".into()))
        );
        let mut plan = ControlPlan::empty();
        plan.bribes.insert("v3".into(), Ballot::Order(vec![id(2), id(0)]));
        assert!(matches!(
            apply_plan(&inst, &plan),
            Err(ControlError::BribeBallot { .. })
        ));
    }

    #[test]
    fn goal_variants() {
        let single = [2usize];
        let tied = [0usize, 2];
        assert!(goal_met(Goal::Constructive, WinnerModel::Unique, &single, 2));
        assert!(!goal_met(Goal::Destructive, WinnerModel::Unique, &single, 2));
        assert!(goal_met(Goal::Destructive, WinnerModel::Unique, &tied, 2));
        assert!(goal_met(Goal::Constructive, WinnerModel::Nonunique, &tied, 2));
        assert!(!goal_met(Goal::Destructive, WinnerModel::Nonunique, &tied, 2));
        assert!(!goal_met(Goal::Constructive, WinnerModel::Unique, &[], 2));
    }

    #[test]
    fn validation_catches_mask_violations() {
        let mut inst = plurality_instance();
        inst.budgets.av = 1;
        assert_eq!(inst.validate(), Err(ControlError::BudgetOutsideMask(Prong::AddVoters)));
        let mut inst = plurality_instance();
        inst.focus = id(9);
        assert_eq!(inst.validate(), Err(ControlError::FocusNotRegistered(id(9))));
        let mut inst = plurality_instance();
        inst.prongs.insert(Prong::AddCandidatesUnlimited);
        inst.spoilers.push(Candidate::new(5, "x"));
        for v in &mut inst.registered {
            if let Ballot::Order(o) = &mut v.ballot {
                o.push(id(5));
            }
        }
        assert_eq!(
            inst.validate(),
            Err(ControlError::UnlimitedAddBudget { budget: 0, pool: 1 })
        );
        inst.budgets.ac = 1;
        inst.validate().unwrap();
    }

    fn shared(prongs: &[Prong], k: usize) -> ControlInstance {
        let mut inst = plurality_instance();
        inst.prongs = ProngSet::new(prongs.iter().copied());
        inst.budgets = Budgets::default();
        inst.resource_model = ResourceModel::Shared(k);
        inst
    }

    #[test]
    fn shared_zero_gives_single_zero_instance() {
        let out = shared_to_separate(&shared(&[Prong::DeleteVoters, Prong::Bribe], 0));
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].budgets, Budgets::default());
        assert_eq!(out[0].resource_model, ResourceModel::Separate);
    }

    #[test]
    fn shared_two_prongs_sweeps_split_point() {
        let out = shared_to_separate(&shared(&[Prong::DeleteVoters, Prong::Bribe], 3));
        let splits: Vec<_> = out.iter().map(|i| (i.budgets.dv, i.budgets.bv)).collect();
        assert_eq!(splits, vec![(0, 3), (1, 2), (2, 1), (3, 0)]);
    }

    #[test]
    fn shared_three_prongs_counts_compositions() {
        let out = shared_to_separate(&shared(
            &[Prong::DeleteCandidates, Prong::DeleteVoters, Prong::Bribe],
            2,
        ));
        assert_eq!(out.len(), 6);
        for i in &out {
            assert_eq!(i.budgets.dc + i.budgets.dv + i.budgets.bv, 2);
        }
    }

    #[test]
    fn shared_budget_clipped_to_capacity() {
        // one deletable candidate (|C| - 1 = 2), plenty requested
        let out = shared_to_separate(&shared(&[Prong::DeleteCandidates], 10));
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].budgets.dc, 2);
    }

    #[test]
    fn classification_takes_the_maximum() {
        use ProngLabel::*;
        assert_eq!(classify_multiprong(&[Vulnerable, Immune]).unwrap(), Vulnerable);
        assert_eq!(classify_multiprong(&[Immune, Immune]).unwrap(), Immune);
        assert_eq!(classify_multiprong(&[Vulnerable, Resistant, Immune]).unwrap(), Resistant);
        assert_eq!(classify_multiprong(&[]), Err(ControlError::EmptyLabels));
    }
}
