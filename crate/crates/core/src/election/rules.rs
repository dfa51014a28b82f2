//! Winner rules.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use thiserror::Error;

use super::{Ballot, BallotKind, CandidateId, Election, ElectionError, PairwiseMatrix};

/// Exact Copeland tie value in `[0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Alpha {
    num: u32,
    den: u32,
}

impl Alpha {
    pub const ZERO: Alpha = Alpha { num: 0, den: 1 };
    pub const HALF: Alpha = Alpha { num: 1, den: 2 };
    pub const ONE: Alpha = Alpha { num: 1, den: 1 };

    pub fn new(num: u32, den: u32) -> Option<Alpha> {
        if den == 0 || num > den {
            return None;
        }
        let g = gcd(num, den);
        Some(Alpha {
            num: num / g,
            den: den / g,
        })
    }

    pub fn numer(&self) -> u32 {
        self.num
    }

    pub fn denom(&self) -> u32 {
        self.den
    }

    pub fn to_ratio(self) -> Ratio<i64> {
        Ratio::new(self.num as i64, self.den as i64)
    }
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a.max(1)
    } else {
        gcd(b, a % b)
    }
}

impl fmt::Display for Alpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// A positional scoring protocol, either fixed or a family indexed by the
/// number of candidates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ScoringProtocol {
    Vector(Vec<u64>),
    Veto,
    Borda,
}

impl ScoringProtocol {
    pub fn vector_for(&self, m: usize) -> Result<Vec<u64>, ElectionError> {
        match self {
            ScoringProtocol::Vector(v) => {
                if v.len() != m {
                    return Err(ElectionError::ScoringVector(format!(
                        "length {} used with {m} candidates",
                        v.len()
                    )));
                }
                if v.windows(2).any(|w| w[0] < w[1]) {
                    return Err(ElectionError::ScoringVector(format!("{v:?} is not nonincreasing")));
                }
                Ok(v.clone())
            }
            ScoringProtocol::Veto => {
                let mut v = vec![1; m];
                if let Some(last) = v.last_mut() {
                    *last = 0;
                }
                Ok(v)
            }
            ScoringProtocol::Borda => Ok((0..m as u64).rev().collect()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    Plurality,
    Copeland(Alpha),
    Maximin,
    Approval,
    Condorcet,
    OriginalLlull,
    Scoring(ScoringProtocol),
}

impl Rule {
    pub fn ballot_kind(&self) -> BallotKind {
        match self {
            Rule::Approval => BallotKind::Approval,
            _ => BallotKind::Order,
        }
    }

    /// Whether the rule elects someone in every election with at least one
    /// candidate.
    pub fn is_strongly_voiced(&self) -> bool {
        !matches!(self, Rule::Condorcet | Rule::OriginalLlull)
    }

    /// Positional vector for `m` candidates, for the rules that have one.
    pub fn scoring_vector(&self, m: usize) -> Option<Result<Vec<u64>, ElectionError>> {
        match self {
            Rule::Plurality => {
                let mut v = vec![0; m];
                if let Some(first) = v.first_mut() {
                    *first = 1;
                }
                Some(Ok(v))
            }
            Rule::Scoring(p) => Some(p.vector_for(m)),
            _ => None,
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::Plurality => f.write_str("plurality"),
            Rule::Copeland(a) => write!(f, "copeland:{a}"),
            Rule::Maximin => f.write_str("maximin"),
            Rule::Approval => f.write_str("approval"),
            Rule::Condorcet => f.write_str("condorcet"),
            Rule::OriginalLlull => f.write_str("llull"),
            Rule::Scoring(ScoringProtocol::Veto) => f.write_str("veto"),
            Rule::Scoring(ScoringProtocol::Borda) => f.write_str("borda"),
            Rule::Scoring(ScoringProtocol::Vector(v)) => {
                let parts: Vec<String> = v.iter().map(u64::to_string).collect();
                write!(f, "scoring:{}", parts.join(","))
            }
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RuleParseError {
    #[error("unknown rule `{0}`")]
    Unknown(String),
    #[error("bad Copeland alpha `{0}`, expected a fraction in [0, 1] such as 1/2")]
    Alpha(String),
    #[error("bad scoring vector `{0}`")]
    Vector(String),
}

impl FromStr for Rule {
    type Err = RuleParseError;

    /// Accepts `name[:param]`, e.g. `plurality`, `copeland:1/2`, `scoring:2,1,0`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (name, param) = match s.split_once(':') {
            Some((n, p)) => (n, Some(p)),
            None => (s, None),
        };
        let rule = match (name.to_ascii_lowercase().as_str(), param) {
            ("plurality", None) => Rule::Plurality,
            ("maximin", None) => Rule::Maximin,
            ("approval", None) => Rule::Approval,
            ("condorcet", None) => Rule::Condorcet,
            ("llull" | "originalllull", None) => Rule::OriginalLlull,
            ("veto", None) => Rule::Scoring(ScoringProtocol::Veto),
            ("borda", None) => Rule::Scoring(ScoringProtocol::Borda),
            ("copeland", Some(p)) => Rule::Copeland(parse_alpha(p)?),
            ("copeland", None) => return Err(RuleParseError::Alpha(String::new())),
            ("scoring", Some(p)) => {
                let v: Result<Vec<u64>, _> = p.split(',').map(|x| x.trim().parse()).collect();
                let v = v.map_err(|_| RuleParseError::Vector(p.to_string()))?;
                if v.windows(2).any(|w| w[0] < w[1]) {
                    return Err(RuleParseError::Vector(p.to_string()));
                }
                Rule::Scoring(ScoringProtocol::Vector(v))
            }
            _ => return Err(RuleParseError::Unknown(s.to_string())),
        };
        Ok(rule)
    }
}

fn parse_alpha(p: &str) -> Result<Alpha, RuleParseError> {
    let bad = || RuleParseError::Alpha(p.to_string());
    let (n, d) = match p.split_once('/') {
        Some((n, d)) => (n.trim().parse().map_err(|_| bad())?, d.trim().parse().map_err(|_| bad())?),
        None => (p.trim().parse().map_err(|_| bad())?, 1),
    };
    Alpha::new(n, d).ok_or_else(bad)
}

fn require_kind(e: &Election, rule: &Rule) -> Result<(), ElectionError> {
    match e.ballot_kind() {
        Some(k) if k != rule.ballot_kind() => Err(ElectionError::BallotKind {
            rule: rule.to_string(),
            expected: rule.ballot_kind(),
        }),
        _ => Ok(()),
    }
}

/// Scores scaled to integers, with the common denominator.
fn scaled_scores(
    e: &Election,
    rule: &Rule,
    pairwise: Option<&PairwiseMatrix>,
) -> Result<(Vec<i64>, i64), ElectionError> {
    require_kind(e, rule)?;
    let m = e.num_candidates();
    let owned;
    let pw = match (rule, pairwise) {
        (Rule::Maximin | Rule::Copeland(_), Some(p)) => Some(p),
        (Rule::Maximin | Rule::Copeland(_), None) => {
            owned = PairwiseMatrix::from_election(e);
            Some(&owned)
        }
        _ => None,
    };
    match rule {
        Rule::Plurality | Rule::Scoring(_) => {
            let vector = rule.scoring_vector(m).expect("positional rule")?;
            let lookup = super::IndexLookup::new(&e.candidate_ids());
            let mut s = vec![0i64; m];
            for v in e.voters() {
                if let Ballot::Order(o) = &v.ballot {
                    for (pos, &c) in o.iter().enumerate() {
                        if vector[pos] != 0 {
                            s[lookup.get(c)] += vector[pos] as i64;
                        }
                    }
                }
            }
            Ok((s, 1))
        }
        Rule::Approval => {
            let mut s = vec![0i64; m];
            for v in e.voters() {
                if let Ballot::Approval(a) = &v.ballot {
                    for (i, &x) in a.iter().enumerate() {
                        s[i] += x as i64;
                    }
                }
            }
            Ok((s, 1))
        }
        Rule::Maximin => {
            let p = pw.expect("pairwise matrix");
            Ok(((0..m).map(|i| p.maximin(i) as i64).collect(), 1))
        }
        Rule::Copeland(alpha) => {
            let p = pw.expect("pairwise matrix");
            let (num, den) = (alpha.numer() as i64, alpha.denom() as i64);
            let s = (0..m)
                .map(|i| {
                    (0..m)
                        .filter(|&j| j != i)
                        .map(|j| match p.at(i, j).cmp(&p.at(j, i)) {
                            std::cmp::Ordering::Greater => den,
                            std::cmp::Ordering::Equal => num,
                            std::cmp::Ordering::Less => 0,
                        })
                        .sum()
                })
                .collect();
            Ok((s, den))
        }
        Rule::Condorcet | Rule::OriginalLlull => Err(ElectionError::NotScoreBased(rule.to_string())),
    }
}

/// Exact scores under a score-based rule.
pub fn scores(e: &Election, rule: &Rule) -> Result<BTreeMap<CandidateId, Ratio<i64>>, ElectionError> {
    let (s, den) = scaled_scores(e, rule, None)?;
    Ok(e.candidates()
        .iter()
        .zip(s)
        .map(|(c, x)| (c.id, Ratio::new(x, den)))
        .collect())
}

/// Winner positions (indices into `e.candidates()`), ascending.
pub(crate) fn winner_indices(e: &Election, rule: &Rule) -> Result<Vec<usize>, ElectionError> {
    winners_with(e, rule, None)
}

pub(crate) fn winners_with(
    e: &Election,
    rule: &Rule,
    pairwise: Option<&PairwiseMatrix>,
) -> Result<Vec<usize>, ElectionError> {
    match rule {
        Rule::Condorcet => {
            require_kind(e, rule)?;
            let owned;
            let p = match pairwise {
                Some(p) => p,
                None => {
                    owned = PairwiseMatrix::from_election(e);
                    &owned
                }
            };
            let m = e.num_candidates();
            Ok((0..m)
                .find(|&i| (0..m).all(|j| j == i || p.beats(i, j)))
                .into_iter()
                .collect())
        }
        Rule::OriginalLlull => {
            require_kind(e, rule)?;
            let names: BTreeSet<&str> = e.voters().iter().map(|v| v.name.as_str()).collect();
            let cands: BTreeSet<&str> = e.candidates().iter().map(|c| c.name.as_str()).collect();
            if names != cands || cands.len() != e.num_candidates() {
                return Ok(Vec::new());
            }
            winners_with(e, &Rule::Copeland(Alpha::ONE), pairwise)
        }
        _ => {
            let (s, _) = scaled_scores(e, rule, pairwise)?;
            let Some(&best) = s.iter().max() else {
                return Ok(Vec::new());
            };
            Ok((0..s.len()).filter(|&i| s[i] == best).collect())
        }
    }
}

/// The winner set of `e` under `rule`. An empty set is a legal outcome.
pub fn winners(e: &Election, rule: &Rule) -> Result<BTreeSet<CandidateId>, ElectionError> {
    Ok(winner_indices(e, rule)?
        .into_iter()
        .map(|i| e.candidates()[i].id)
        .collect())
}

pub fn is_winner(e: &Election, rule: &Rule, c: CandidateId) -> Result<bool, ElectionError> {
    if !e.contains(c) {
        return Err(ElectionError::UnknownCandidate(c));
    }
    Ok(winners(e, rule)?.contains(&c))
}

pub fn is_unique_winner(e: &Election, rule: &Rule, c: CandidateId) -> Result<bool, ElectionError> {
    if !e.contains(c) {
        return Err(ElectionError::UnknownCandidate(c));
    }
    let w = winners(e, rule)?;
    Ok(w.len() == 1 && w.contains(&c))
}
