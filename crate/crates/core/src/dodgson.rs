//! Dodgson scores and their closeness to maximin.
//!
//! The Dodgson score of `c` is the least number of adjacent swaps in the
//! voters' rankings that makes `c` a Condorcet winner. The deficit of `c`
//! against `d` is how many voters must switch to ranking `c` above `d`
//! for `c` to win that pair by a strict majority, and
//! `sc′(c) = m²·max_d df(c, d)` bounds the Dodgson score within a factor
//! of `m²`.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::election::{pairwise_tally, winners, Ballot, CandidateId, Election, ElectionError, Rule};
use crate::oracle::permutations;

/// Size limits of the exact score computation.
pub const MAX_CANDIDATES: usize = 5;
pub const MAX_VOTERS: usize = 7;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DodgsonError {
    #[error(transparent)]
    Election(#[from] ElectionError),
    #[error("deficit of candidate {0} against itself")]
    SameCandidate(CandidateId),
    #[error("sc′ needs at least two candidates")]
    SingleCandidate,
    #[error("unknown candidate {0}")]
    UnknownCandidate(CandidateId),
    #[error("Dodgson scores need linear-order ballots")]
    NotLinear,
    #[error("Dodgson scores need at least one voter")]
    NoVoters,
    #[error("profile has {m} candidates and {n} voters, exact scoring allows {max_m} and {max_n}")]
    Envelope {
        m: usize,
        n: usize,
        max_m: usize,
        max_n: usize,
    },
}

fn majority(e: &Election) -> u32 {
    e.num_voters() as u32 / 2 + 1
}

/// `max(0, ⌊n/2⌋ + 1 − N_E(a, b))`.
pub fn deficit(e: &Election, a: CandidateId, b: CandidateId) -> Result<u32, DodgsonError> {
    if a == b {
        return Err(DodgsonError::SameCandidate(a));
    }
    let n = pairwise_tally(e, a, b)?;
    Ok(majority(e).saturating_sub(n))
}

/// `m²` times the largest deficit of `c`.
pub fn sc_prime(e: &Election, c: CandidateId) -> Result<u64, DodgsonError> {
    if !e.contains(c) {
        return Err(DodgsonError::UnknownCandidate(c));
    }
    let m = e.num_candidates() as u64;
    if m < 2 {
        return Err(DodgsonError::SingleCandidate);
    }
    let mut worst = 0;
    for d in e.candidate_ids().into_iter().filter(|&d| d != c) {
        worst = worst.max(deficit(e, c, d)?);
    }
    Ok(m * m * worst as u64)
}

fn check_exact(e: &Election, c: CandidateId) -> Result<(), DodgsonError> {
    if !e.contains(c) {
        return Err(DodgsonError::UnknownCandidate(c));
    }
    let (m, n) = (e.num_candidates(), e.num_voters());
    if m > MAX_CANDIDATES || n > MAX_VOTERS {
        return Err(DodgsonError::Envelope {
            m,
            n,
            max_m: MAX_CANDIDATES,
            max_n: MAX_VOTERS,
        });
    }
    if n == 0 {
        return Err(DodgsonError::NoVoters);
    }
    if e.voters().iter().any(|v| !matches!(v.ballot, Ballot::Order(_))) {
        return Err(DodgsonError::NotLinear);
    }
    Ok(())
}

/// Exact Dodgson score of `c`.
///
/// Only upward moves of `c` are considered: each voter lifts `c` by some
/// number of places, passing the candidates just above it, and the cheapest
/// combination giving `c` a strict majority over every rival wins.
pub fn dodgson_score_exact(e: &Election, c: CandidateId) -> Result<u32, DodgsonError> {
    check_exact(e, c)?;
    let rivals: Vec<CandidateId> = e.candidate_ids().into_iter().filter(|&d| d != c).collect();
    let need: Vec<i64> = rivals
        .iter()
        .map(|&d| deficit(e, c, d).map(i64::from))
        .collect::<Result<_, _>>()?;
    // per voter, the candidates above c from nearest to farthest
    let above: Vec<Vec<usize>> = e
        .voters()
        .iter()
        .map(|v| {
            let o = v.ballot.order().unwrap();
            let at = o.iter().position(|&x| x == c).unwrap();
            o[..at]
                .iter()
                .rev()
                .map(|x| rivals.iter().position(|r| r == x).unwrap())
                .collect()
        })
        .collect();
    let mut best = u32::MAX;
    let mut left = need;
    search(&above, 0, 0, &mut left, &mut best);
    Ok(best)
}

fn search(above: &[Vec<usize>], v: usize, cost: u32, left: &mut [i64], best: &mut u32) {
    if cost >= *best {
        return;
    }
    if left.iter().all(|&x| x <= 0) {
        *best = cost;
        return;
    }
    if v == above.len() {
        return;
    }
    search(above, v + 1, cost, left, best);
    for (t, &r) in above[v].iter().enumerate() {
        left[r] -= 1;
        search(above, v + 1, cost + t as u32 + 1, left, best);
        if t + 1 == above[v].len() {
            // undo every pass of this voter
            for &q in &above[v][..=t] {
                left[q] += 1;
            }
        }
    }
}

/// Dodgson score of `c` by breadth-first search over all profiles reachable
/// through adjacent swaps, treating profiles as multisets of rankings.
pub fn dodgson_score_bfs(e: &Election, c: CandidateId) -> Result<u32, DodgsonError> {
    check_exact(e, c)?;
    let ids = e.candidate_ids();
    let orders = permutations(&ids);
    let index = |o: &[CandidateId]| orders.iter().position(|x| x == o).unwrap() as u8;
    let m = ids.len();
    let swaps: Vec<Vec<u8>> = orders
        .iter()
        .map(|o| {
            (0..m.saturating_sub(1))
                .map(|s| {
                    let mut x = o.clone();
                    x.swap(s, s + 1);
                    index(&x)
                })
                .collect()
        })
        .collect();
    let c_first: Vec<Vec<bool>> = orders
        .iter()
        .map(|o| {
            let at = |x| o.iter().position(|&y| y == x).unwrap();
            ids.iter().map(|&d| at(c) < at(d)).collect()
        })
        .collect();
    let need = majority(e) as usize;
    let wins = |s: &[u8]| {
        ids.iter()
            .enumerate()
            .filter(|&(_, &d)| d != c)
            .all(|(j, _)| s.iter().filter(|&&o| c_first[o as usize][j]).count() >= need)
    };
    let mut start: Vec<u8> = e.voters().iter().map(|v| index(v.ballot.order().unwrap())).collect();
    start.sort_unstable();
    let mut seen: HashSet<Vec<u8>> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(start.clone());
    queue.push_back((start, 0u32));
    while let Some((s, d)) = queue.pop_front() {
        if wins(&s) {
            return Ok(d);
        }
        for v in 0..s.len() {
            if v > 0 && s[v] == s[v - 1] {
                continue;
            }
            for &next in &swaps[s[v] as usize] {
                let mut t = s.clone();
                t[v] = next;
                t.sort_unstable();
                if seen.insert(t.clone()) {
                    queue.push_back((t, d + 1));
                }
            }
        }
    }
    unreachable!("lifting c to the top of every ballot always succeeds")
}

/// Every quantity of the maximin–Dodgson comparison for one profile.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DodgsonReport {
    pub m: usize,
    pub n: usize,
    pub dodgson: BTreeMap<CandidateId, u32>,
    pub sc_prime: BTreeMap<CandidateId, u64>,
    pub maximin_winners: BTreeSet<CandidateId>,
    /// The smallest Dodgson score.
    pub min_score: u32,
    /// Candidates breaking `score ≤ sc′ ≤ m²·score`.
    pub sc_prime_violations: Vec<CandidateId>,
    /// Maximin winners breaking `s ≤ score ≤ m²·s`.
    pub winner_violations: Vec<CandidateId>,
}

impl DodgsonReport {
    pub fn passed(&self) -> bool {
        self.sc_prime_violations.is_empty() && self.winner_violations.is_empty()
    }
}

/// Computes the report and flags any candidate breaking either chain.
pub fn verify_sandwich(e: &Election) -> Result<DodgsonReport, DodgsonError> {
    let ids = e.candidate_ids();
    if ids.len() < 2 {
        return Err(DodgsonError::SingleCandidate);
    }
    let (m, n) = (ids.len(), e.num_voters());
    let m2 = (m * m) as u64;
    let mut dodgson = BTreeMap::new();
    let mut sc = BTreeMap::new();
    for &c in &ids {
        dodgson.insert(c, dodgson_score_exact(e, c)?);
        sc.insert(c, sc_prime(e, c)?);
    }
    let maximin_winners = winners(e, &Rule::Maximin)?;
    let min_score = *dodgson.values().min().unwrap();
    let sc_prime_violations = ids
        .iter()
        .copied()
        .filter(|c| {
            let d = dodgson[c] as u64;
            !(d <= sc[c] && sc[c] <= m2 * d)
        })
        .collect();
    let s = min_score as u64;
    let winner_violations = maximin_winners
        .iter()
        .copied()
        .filter(|w| {
            let d = dodgson[w] as u64;
            !(s <= d && d <= m2 * s)
        })
        .collect();
    Ok(DodgsonReport {
        m,
        n,
        dodgson,
        sc_prime: sc,
        maximin_winners,
        min_score,
        sc_prime_violations,
        winner_violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::election::{Candidate, Voter};

    fn election(ballots: &[&[u32]]) -> Election {
        let m = ballots[0].len() as u32;
        let cands = (0..m).map(|i| Candidate::new(i, format!("c{i}"))).collect();
        let voters = ballots.iter().enumerate().map(|(i, b)| Voter::ranking(format!("v{i}"), b)).collect();
        Election::new(cands, voters).unwrap()
    }

    #[test]
    fn deficit_identity() {
        let e = election(&[&[0, 1], &[1, 0], &[1, 0], &[1, 0], &[1, 0]]);
        assert_eq!(deficit(&e, CandidateId(0), CandidateId(1)).unwrap(), 2);
        assert_eq!(deficit(&e, CandidateId(1), CandidateId(0)).unwrap(), 0);
        assert!(deficit(&e, CandidateId(1), CandidateId(1)).is_err());
    }

    #[test]
    fn lift_over_two() {
        let e = election(&[&[0, 1, 2]]);
        assert_eq!(dodgson_score_exact(&e, CandidateId(2)).unwrap(), 2);
        assert_eq!(dodgson_score_bfs(&e, CandidateId(2)).unwrap(), 2);
        assert_eq!(dodgson_score_exact(&e, CandidateId(0)).unwrap(), 0);
    }

    #[test]
    fn sc_prime_arithmetic() {
        // c2 loses both pairs 0-3; deficit 2 each
        let e = election(&[&[0, 1, 2], &[1, 0, 2], &[0, 1, 2]]);
        assert_eq!(sc_prime(&e, CandidateId(2)).unwrap(), 18);
        assert_eq!(sc_prime(&e, CandidateId(0)).unwrap(), 0);
        let lone = election(&[&[0]]);
        assert_eq!(sc_prime(&lone, CandidateId(0)), Err(DodgsonError::SingleCandidate));
    }

    #[test]
    fn condorcet_winner_report() {
        let e = election(&[&[0, 1, 2], &[0, 2, 1], &[1, 0, 2]]);
        let r = verify_sandwich(&e).unwrap();
        assert!(r.passed());
        assert_eq!(r.min_score, 0);
        assert_eq!(r.dodgson[&CandidateId(0)], 0);
        assert_eq!(r.maximin_winners, BTreeSet::from([CandidateId(0)]));
    }

    #[test]
    fn envelope_and_empty_profile() {
        let big = election(&[&[0, 1, 2, 3, 4, 5]]);
        assert!(matches!(dodgson_score_exact(&big, CandidateId(0)), Err(DodgsonError::Envelope { .. })));
        let empty = Election::new(vec![Candidate::new(0, "a"), Candidate::new(1, "b")], vec![]).unwrap();
        assert_eq!(dodgson_score_exact(&empty, CandidateId(0)), Err(DodgsonError::NoVoters));
    }
}
