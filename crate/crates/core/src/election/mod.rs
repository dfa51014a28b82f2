//! Elections, ballots and pairwise tallies.
//!
//! An [`Election`] is a candidate list plus an ordered list of named voters.
//! Ballots are either strict linear orders over the whole candidate set or
//! approval vectors aligned with the candidate list. Every constructor that
//! accepts outside data validates these invariants; the crate-internal
//! builders used by the solvers skip validation because their inputs are
//! derived from already-validated elections.

mod order;
mod rules;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use order::{build_order, build_order_with, OrderItem, SetOrder};
pub use rules::{
    is_unique_winner, is_winner, scores, winners, Alpha, Rule, RuleParseError, ScoringProtocol,
};
pub(crate) use rules::winner_indices;

/// Opaque candidate identifier. Ascending id order is the canonical order
/// used when a set of candidates has to be listed inside a ballot.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CandidateId(pub u32);

impl fmt::Display for CandidateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Candidate {
    pub id: CandidateId,
    pub name: String,
}

impl Candidate {
    pub fn new(id: u32, name: impl Into<String>) -> Self {
        Candidate {
            id: CandidateId(id),
            name: name.into(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BallotKind {
    Order,
    Approval,
}

impl fmt::Display for BallotKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BallotKind::Order => f.write_str("linear-order"),
            BallotKind::Approval => f.write_str("approval"),
        }
    }
}

/// A single ballot.
///
/// `Approval` entries are positional: entry `i` refers to the `i`-th
/// candidate of whatever candidate list the ballot is attached to.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Ballot {
    Order(Vec<CandidateId>),
    Approval(Vec<bool>),
}

impl Ballot {
    pub fn kind(&self) -> BallotKind {
        match self {
            Ballot::Order(_) => BallotKind::Order,
            Ballot::Approval(_) => BallotKind::Approval,
        }
    }

    pub fn order(&self) -> Option<&[CandidateId]> {
        match self {
            Ballot::Order(o) => Some(o),
            Ballot::Approval(_) => None,
        }
    }

    /// True if `a` is ranked above `b`. Approval ballots never rank.
    pub fn prefers(&self, a: CandidateId, b: CandidateId) -> bool {
        match self {
            Ballot::Order(o) => {
                for &c in o {
                    if c == a {
                        return true;
                    }
                    if c == b {
                        return false;
                    }
                }
                false
            }
            Ballot::Approval(_) => false,
        }
    }

    pub fn top(&self) -> Option<CandidateId> {
        self.order().and_then(|o| o.first().copied())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Voter {
    pub name: String,
    pub ballot: Ballot,
}

impl Voter {
    pub fn new(name: impl Into<String>, ballot: Ballot) -> Self {
        Voter {
            name: name.into(),
            ballot,
        }
    }

    pub fn ranking(name: impl Into<String>, order: &[u32]) -> Self {
        Voter::new(
            name,
            Ballot::Order(order.iter().map(|&i| CandidateId(i)).collect()),
        )
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ElectionError {
    #[error("duplicate candidate id {0}")]
    DuplicateCandidate(CandidateId),
    #[error("duplicate voter name `{0}`")]
    DuplicateVoter(String),
    #[error("unknown candidate {0}")]
    UnknownCandidate(CandidateId),
    #[error("candidate {0} cannot be compared with itself")]
    SameCandidate(CandidateId),
    #[error("ballot of voter `{0}` is not a ranking of the full candidate set")]
    MalformedOrder(String),
    #[error("approval ballot of voter `{voter}` has {got} entries, expected {expected}")]
    ApprovalLength {
        voter: String,
        got: usize,
        expected: usize,
    },
    #[error("ballots mix linear orders and approval vectors")]
    MixedBallots,
    #[error("rule {rule} needs {expected} ballots")]
    BallotKind { rule: String, expected: BallotKind },
    #[error("rule {0} does not assign scores")]
    NotScoreBased(String),
    #[error("cannot restrict an election to an empty candidate set")]
    EmptyRestriction,
    #[error("bad scoring vector: {0}")]
    ScoringVector(String),
    #[error("order items overlap at candidate {0}")]
    OrderOverlap(CandidateId),
    #[error("order items omit candidate {0}")]
    OrderOmits(CandidateId),
}

/// An election `(C, V)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Election {
    candidates: Vec<Candidate>,
    voters: Vec<Voter>,
}

impl Election {
    pub fn new(candidates: Vec<Candidate>, voters: Vec<Voter>) -> Result<Self, ElectionError> {
        let mut ids = BTreeSet::new();
        for c in &candidates {
            if !ids.insert(c.id) {
                return Err(ElectionError::DuplicateCandidate(c.id));
            }
        }
        let mut names = BTreeSet::new();
        let mut kind = None;
        for v in &voters {
            if !names.insert(v.name.as_str()) {
                return Err(ElectionError::DuplicateVoter(v.name.clone()));
            }
            check_ballot(&v.name, &v.ballot, &ids, candidates.len())?;
            match kind {
                None => kind = Some(v.ballot.kind()),
                Some(k) if k != v.ballot.kind() => return Err(ElectionError::MixedBallots),
                _ => {}
            }
        }
        Ok(Election { candidates, voters })
    }

    /// Builds an election whose invariants the caller has already ensured.
    pub(crate) fn from_parts(candidates: Vec<Candidate>, voters: Vec<Voter>) -> Self {
        debug_assert!(Election::new(candidates.clone(), voters.clone()).is_ok());
        Election { candidates, voters }
    }

    pub fn candidates(&self) -> &[Candidate] {
        &self.candidates
    }

    pub fn voters(&self) -> &[Voter] {
        &self.voters
    }

    pub fn candidate_ids(&self) -> Vec<CandidateId> {
        self.candidates.iter().map(|c| c.id).collect()
    }

    pub fn num_candidates(&self) -> usize {
        self.candidates.len()
    }

    pub fn num_voters(&self) -> usize {
        self.voters.len()
    }

    pub fn contains(&self, id: CandidateId) -> bool {
        self.candidates.iter().any(|c| c.id == id)
    }

    pub fn index_of(&self, id: CandidateId) -> Option<usize> {
        self.candidates.iter().position(|c| c.id == id)
    }

    pub fn candidate(&self, id: CandidateId) -> Option<&Candidate> {
        self.candidates.iter().find(|c| c.id == id)
    }

    /// Ballot kind shared by every voter, `None` when there are no voters.
    pub fn ballot_kind(&self) -> Option<BallotKind> {
        self.voters.first().map(|v| v.ballot.kind())
    }

    /// Pairwise majority matrix over linear-order ballots.
    pub fn pairwise(&self) -> Result<PairwiseMatrix, ElectionError> {
        if self.ballot_kind() == Some(BallotKind::Approval) {
            return Err(ElectionError::BallotKind {
                rule: "pairwise tally".into(),
                expected: BallotKind::Order,
            });
        }
        Ok(PairwiseMatrix::from_election(self))
    }

    /// Induced election on `keep`: dropped candidates are removed from every
    /// ballot, relative order and voter order are preserved.
    pub fn restrict(&self, keep: &BTreeSet<CandidateId>) -> Result<Election, ElectionError> {
        if keep.is_empty() {
            return Err(ElectionError::EmptyRestriction);
        }
        for &id in keep {
            if !self.contains(id) {
                return Err(ElectionError::UnknownCandidate(id));
            }
        }
        Ok(self.restrict_unchecked(keep))
    }

    pub(crate) fn restrict_unchecked(&self, keep: &BTreeSet<CandidateId>) -> Election {
        let mask: Vec<bool> = self
            .candidates
            .iter()
            .map(|c| keep.contains(&c.id))
            .collect();
        let candidates = self
            .candidates
            .iter()
            .filter(|c| keep.contains(&c.id))
            .cloned()
            .collect();
        let voters = self
            .voters
            .iter()
            .map(|v| Voter {
                name: v.name.clone(),
                ballot: restrict_ballot(&v.ballot, keep, &mask),
            })
            .collect();
        Election { candidates, voters }
    }
}

fn check_ballot(
    voter: &str,
    ballot: &Ballot,
    ids: &BTreeSet<CandidateId>,
    m: usize,
) -> Result<(), ElectionError> {
    match ballot {
        Ballot::Order(o) => {
            let seen: BTreeSet<_> = o.iter().copied().collect();
            if o.len() != m || seen.len() != m || seen != *ids {
                return Err(ElectionError::MalformedOrder(voter.to_string()));
            }
        }
        Ballot::Approval(a) => {
            if a.len() != m {
                return Err(ElectionError::ApprovalLength {
                    voter: voter.to_string(),
                    got: a.len(),
                    expected: m,
                });
            }
        }
    }
    Ok(())
}

/// Restricts a ballot. `mask[i]` says whether the `i`-th candidate of the
/// ballot's candidate list survives; it is only consulted for approvals.
pub(crate) fn restrict_ballot(ballot: &Ballot, keep: &BTreeSet<CandidateId>, mask: &[bool]) -> Ballot {
    match ballot {
        Ballot::Order(o) => Ballot::Order(o.iter().copied().filter(|c| keep.contains(c)).collect()),
        Ballot::Approval(a) => Ballot::Approval(
            a.iter()
                .zip(mask)
                .filter(|(_, &k)| k)
                .map(|(&x, _)| x)
                .collect(),
        ),
    }
}

/// `N_E(a, b)`: the number of voters ranking `a` above `b`.
pub fn pairwise_tally(e: &Election, a: CandidateId, b: CandidateId) -> Result<u32, ElectionError> {
    for id in [a, b] {
        if !e.contains(id) {
            return Err(ElectionError::UnknownCandidate(id));
        }
    }
    if a == b {
        return Err(ElectionError::SameCandidate(a));
    }
    let mut count = 0;
    for v in e.voters() {
        match &v.ballot {
            Ballot::Order(_) => {
                if v.ballot.prefers(a, b) {
                    count += 1;
                }
            }
            Ballot::Approval(_) => {
                return Err(ElectionError::BallotKind {
                    rule: "pairwise tally".into(),
                    expected: BallotKind::Order,
                })
            }
        }
    }
    Ok(count)
}

/// Dense `N_E` matrix indexed by candidate position in the election.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairwiseMatrix {
    ids: Vec<CandidateId>,
    counts: Vec<u32>,
    voters: u32,
}

impl PairwiseMatrix {
    pub fn from_election(e: &Election) -> Self {
        let m = e.num_candidates();
        let ids = e.candidate_ids();
        let lookup = IndexLookup::new(&ids);
        let mut counts = vec![0u32; m * m];
        let mut idx = Vec::with_capacity(m);
        for v in e.voters() {
            if let Ballot::Order(o) = &v.ballot {
                idx.clear();
                idx.extend(o.iter().map(|&c| lookup.get(c)));
                for (i, &hi) in idx.iter().enumerate() {
                    for &lo in &idx[i + 1..] {
                        counts[hi * m + lo] += 1;
                    }
                }
            }
        }
        PairwiseMatrix {
            ids,
            counts,
            voters: e.num_voters() as u32,
        }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[CandidateId] {
        &self.ids
    }

    pub fn voters(&self) -> u32 {
        self.voters
    }

    /// Tally by candidate position.
    pub fn at(&self, i: usize, j: usize) -> u32 {
        self.counts[i * self.ids.len() + j]
    }

    pub fn get(&self, a: CandidateId, b: CandidateId) -> Option<u32> {
        let i = self.ids.iter().position(|&c| c == a)?;
        let j = self.ids.iter().position(|&c| c == b)?;
        (i != j).then(|| self.at(i, j))
    }

    /// Maximin score of the candidate at position `i`; `|V|` for a lone candidate.
    pub fn maximin(&self, i: usize) -> u32 {
        (0..self.len())
            .filter(|&j| j != i)
            .map(|j| self.at(i, j))
            .min()
            .unwrap_or(self.voters)
    }

    pub fn beats(&self, i: usize, j: usize) -> bool {
        self.at(i, j) > self.at(j, i)
    }

    pub fn as_map(&self) -> BTreeMap<(CandidateId, CandidateId), u32> {
        let mut out = BTreeMap::new();
        for (i, &a) in self.ids.iter().enumerate() {
            for (j, &b) in self.ids.iter().enumerate() {
                if i != j {
                    out.insert((a, b), self.at(i, j));
                }
            }
        }
        out
    }
}

/// Maps candidate ids to positions; ids are few, so a sorted vector wins.
pub(crate) struct IndexLookup {
    sorted: Vec<(CandidateId, usize)>,
}

impl IndexLookup {
    pub(crate) fn new(ids: &[CandidateId]) -> Self {
        let mut sorted: Vec<_> = ids.iter().copied().zip(0..).collect();
        sorted.sort_unstable();
        IndexLookup { sorted }
    }

    pub(crate) fn get(&self, id: CandidateId) -> usize {
        let k = self
            .sorted
            .binary_search_by_key(&id, |&(c, _)| c)
            .expect("ballot references a candidate outside the election");
        self.sorted[k].1
    }
}
