//! JSON files for elections, control instances, plans and exact-cover
//! instances.
//!
//! Ballots are written `{"voter": name, "order": [ids]}` or
//! `{"voter": name, "approve": [0/1, ...]}`; one file uses one kind.
//! Instance files extend the election layout with `spoilers`,
//! `unregistered`, `focus`, `budgets`, `goal`, `winner_model`,
//! `resource_model` and `prongs`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::control::{Budgets, ControlError, ControlInstance, ControlPlan, Goal, ProngSet, ResourceModel, WinnerModel};
use crate::election::{Ballot, Candidate, CandidateId, Election, ElectionError, Voter};
use crate::reduction::{ReductionError, X3CInstance};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("ballot of `{0}` must have exactly one of `order` and `approve`")]
    BallotShape(String),
    #[error("approval entries of `{0}` must be 0 or 1")]
    ApprovalEntry(String),
    #[error("ballots mix linear orders and approval vectors")]
    MixedKinds,
    #[error(transparent)]
    Election(#[from] ElectionError),
    #[error(transparent)]
    Control(#[from] ControlError),
    #[error(transparent)]
    X3C(#[from] ReductionError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BallotFile {
    pub voter: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub approve: Option<Vec<u8>>,
}

impl BallotFile {
    fn from_ballot(voter: &str, b: &Ballot) -> Self {
        let (order, approve) = match b {
            Ballot::Order(o) => (Some(o.iter().map(|c| c.0).collect()), None),
            Ballot::Approval(a) => (None, Some(a.iter().map(|&x| u8::from(x)).collect())),
        };
        BallotFile {
            voter: voter.to_string(),
            order,
            approve,
        }
    }

    fn ballot(&self) -> Result<Ballot, FormatError> {
        match (&self.order, &self.approve) {
            (Some(o), None) => Ok(Ballot::Order(o.iter().map(|&c| CandidateId(c)).collect())),
            (None, Some(a)) => a
                .iter()
                .map(|&x| match x {
                    0 => Ok(false),
                    1 => Ok(true),
                    _ => Err(FormatError::ApprovalEntry(self.voter.clone())),
                })
                .collect::<Result<_, _>>()
                .map(Ballot::Approval),
            _ => Err(FormatError::BallotShape(self.voter.clone())),
        }
    }

    fn voter(&self) -> Result<Voter, FormatError> {
        Ok(Voter::new(self.voter.clone(), self.ballot()?))
    }
}

fn ballots(voters: &[Voter]) -> Vec<BallotFile> {
    voters.iter().map(|v| BallotFile::from_ballot(&v.name, &v.ballot)).collect()
}

fn voters(files: &[BallotFile]) -> Result<Vec<Voter>, FormatError> {
    files.iter().map(BallotFile::voter).collect()
}

fn uniform<'a>(voters: impl IntoIterator<Item = &'a Voter>) -> Result<(), FormatError> {
    let mut kinds = voters.into_iter().map(|v| v.ballot.kind());
    let first = kinds.next();
    if kinds.any(|k| Some(k) != first) {
        return Err(FormatError::MixedKinds);
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElectionFile {
    pub candidates: Vec<Candidate>,
    pub ballots: Vec<BallotFile>,
}

impl ElectionFile {
    pub fn from_election(e: &Election) -> Self {
        ElectionFile {
            candidates: e.candidates().to_vec(),
            ballots: ballots(e.voters()),
        }
    }

    pub fn to_election(&self) -> Result<Election, FormatError> {
        let v = voters(&self.ballots)?;
        uniform(&v)?;
        Ok(Election::new(self.candidates.clone(), v)?)
    }
}

pub fn parse_election(s: &str) -> Result<Election, FormatError> {
    serde_json::from_str::<ElectionFile>(s)?.to_election()
}

pub fn election_to_json(e: &Election) -> String {
    serde_json::to_string_pretty(&ElectionFile::from_election(e)).expect("election serializes")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub candidates: Vec<Candidate>,
    pub ballots: Vec<BallotFile>,
    #[serde(default)]
    pub spoilers: Vec<Candidate>,
    #[serde(default)]
    pub unregistered: Vec<BallotFile>,
    pub focus: u32,
    #[serde(default)]
    pub budgets: Budgets,
    pub goal: Goal,
    #[serde(default = "unique")]
    pub winner_model: WinnerModel,
    #[serde(default = "separate")]
    pub resource_model: ResourceModel,
    pub prongs: ProngSet,
}

fn unique() -> WinnerModel {
    WinnerModel::Unique
}

fn separate() -> ResourceModel {
    ResourceModel::Separate
}

impl InstanceFile {
    pub fn from_instance(inst: &ControlInstance) -> Self {
        InstanceFile {
            candidates: inst.candidates.clone(),
            ballots: ballots(&inst.registered),
            spoilers: inst.spoilers.clone(),
            unregistered: ballots(&inst.unregistered),
            focus: inst.focus.0,
            budgets: inst.budgets,
            goal: inst.goal,
            winner_model: inst.winner_model,
            resource_model: inst.resource_model,
            prongs: inst.prongs.clone(),
        }
    }

    pub fn to_instance(&self) -> Result<ControlInstance, FormatError> {
        let inst = ControlInstance {
            candidates: self.candidates.clone(),
            spoilers: self.spoilers.clone(),
            registered: voters(&self.ballots)?,
            unregistered: voters(&self.unregistered)?,
            focus: CandidateId(self.focus),
            budgets: self.budgets,
            goal: self.goal,
            winner_model: self.winner_model,
            resource_model: self.resource_model,
            prongs: self.prongs.clone(),
        };
        uniform(inst.registered.iter().chain(&inst.unregistered))?;
        inst.validate()?;
        Ok(inst)
    }
}

pub fn parse_instance(s: &str) -> Result<ControlInstance, FormatError> {
    serde_json::from_str::<InstanceFile>(s)?.to_instance()
}

pub fn instance_to_json(inst: &ControlInstance) -> String {
    serde_json::to_string_pretty(&InstanceFile::from_instance(inst)).expect("instance serializes")
}

/// SHA-256 of the compact JSON form, hex encoded.
pub fn instance_digest(inst: &ControlInstance) -> String {
    let bytes = serde_json::to_vec(&InstanceFile::from_instance(inst)).expect("instance serializes");
    hex::encode(Sha256::digest(bytes))
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanFile {
    #[serde(default)]
    pub add_candidates: Vec<u32>,
    #[serde(default)]
    pub delete_candidates: Vec<u32>,
    #[serde(default)]
    pub add_voters: Vec<String>,
    #[serde(default)]
    pub delete_voters: Vec<String>,
    #[serde(default)]
    pub bribes: Vec<BallotFile>,
}

impl PlanFile {
    pub fn from_plan(p: &ControlPlan) -> Self {
        PlanFile {
            add_candidates: p.add_candidates.iter().map(|c| c.0).collect(),
            delete_candidates: p.delete_candidates.iter().map(|c| c.0).collect(),
            add_voters: p.add_voters.iter().cloned().collect(),
            delete_voters: p.delete_voters.iter().cloned().collect(),
            bribes: p.bribes.iter().map(|(v, b)| BallotFile::from_ballot(v, b)).collect(),
        }
    }

    pub fn to_plan(&self) -> Result<ControlPlan, FormatError> {
        let ids = |v: &[u32]| v.iter().map(|&c| CandidateId(c)).collect();
        let bribes: Result<BTreeMap<String, Ballot>, FormatError> =
            self.bribes.iter().map(|b| Ok((b.voter.clone(), b.ballot()?))).collect();
        Ok(ControlPlan {
            add_candidates: ids(&self.add_candidates),
            delete_candidates: ids(&self.delete_candidates),
            add_voters: self.add_voters.iter().cloned().collect(),
            delete_voters: self.delete_voters.iter().cloned().collect(),
            bribes: bribes?,
        })
    }
}

pub fn parse_plan(s: &str) -> Result<ControlPlan, FormatError> {
    serde_json::from_str::<PlanFile>(s)?.to_plan()
}

pub fn plan_to_json(p: &ControlPlan) -> String {
    serde_json::to_string_pretty(&PlanFile::from_plan(p)).expect("plan serializes")
}

#[derive(Deserialize)]
struct X3CFile {
    ground: Vec<u32>,
    sets: Vec<Vec<u32>>,
    k: Option<usize>,
}

/// Reads an exact-cover instance; `k` defaults to `|ground| / 3`.
pub fn parse_x3c(s: &str) -> Result<X3CInstance, FormatError> {
    let f: X3CFile = serde_json::from_str(s)?;
    let k = f.k.unwrap_or(f.ground.len() / 3);
    let x = X3CInstance {
        ground: f.ground,
        sets: f.sets,
        k,
    };
    x.validate()?;
    Ok(x)
}

pub fn x3c_to_json(x: &X3CInstance) -> String {
    serde_json::to_string(x).expect("exact-cover instance serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::control::Prong;

    const INSTANCE: &str = r#"{
        "candidates": [{"id": 0, "name": "p"}, {"id": 1, "name": "q"}],
        "ballots": [{"voter": "v1", "order": [1, 0, 2]}],
        "spoilers": [{"id": 2, "name": "s"}],
        "unregistered": [{"voter": "w1", "order": [0, 1, 2]}],
        "focus": 0,
        "budgets": {"ac": 1, "dc": 0, "av": 1, "dv": 0, "bv": 0},
        "goal": "constructive",
        "winner_model": "unique",
        "resource_model": {"shared": 1},
        "prongs": ["AC", "AV"]
    }"#;

    #[test]
    fn instance_round_trip() {
        let inst = parse_instance(INSTANCE).unwrap();
        assert_eq!(inst.resource_model, ResourceModel::Shared(1));
        assert!(inst.prongs.contains(Prong::AddCandidates));
        let again = parse_instance(&instance_to_json(&inst)).unwrap();
        assert_eq!(again, inst);
        assert_eq!(instance_digest(&again), instance_digest(&inst));
        assert_eq!(instance_digest(&inst).len(), 64);
    }

    #[test]
    fn rejects_bad_ballots() {
        let both = INSTANCE.replace(r#""order": [1, 0, 2]"#, r#""order": [1, 0, 2], "approve": [1, 0, 0]"#);
        assert!(matches!(parse_instance(&both), Err(FormatError::BallotShape(_))));
        let mixed = INSTANCE.replace(r#""order": [0, 1, 2]"#, r#""approve": [1, 0, 0]"#);
        assert!(matches!(parse_instance(&mixed), Err(FormatError::MixedKinds)));
        let e = r#"{"candidates":[{"id":0,"name":"a"}],"ballots":[{"voter":"x","approve":[2]}]}"#;
        assert!(matches!(parse_election(e), Err(FormatError::ApprovalEntry(_))));
    }

    #[test]
    fn election_and_plan_round_trip() {
        let e = r#"{"candidates":[{"id":0,"name":"a"},{"id":1,"name":"b"}],"ballots":[{"voter":"x","approve":[1,0]}]}"#;
        let e = parse_election(e).unwrap();
        assert_eq!(parse_election(&election_to_json(&e)).unwrap(), e);
        let mut p = ControlPlan::empty();
        p.add_candidates.insert(CandidateId(2));
        p.bribes.insert("v1".into(), Ballot::Order(vec![CandidateId(0), CandidateId(1)]));
        assert_eq!(parse_plan(&plan_to_json(&p)).unwrap(), p);
    }

    #[test]
    fn x3c_file() {
        let x = parse_x3c(r#"{"ground":[1,2,3],"sets":[[1,2,3]],"k":1}"#).unwrap();
        assert_eq!(parse_x3c(&x3c_to_json(&x)).unwrap(), x);
        assert!(parse_x3c(r#"{"ground":[1,2,3],"sets":[[1,2,3]],"k":2}"#).is_err());
    }
}
