//! Exhaustive ground-truth solver for small control instances.
//!
//! Plans are enumerated in canonical order: first by the size tuple
//! `(|A′|, |C′|, |W′|, |V′|, |bribes|)`, then lexicographically by the
//! sorted added candidates, deleted candidates, added voters, deleted
//! voters and finally `(voter, ballot)` bribe pairs. The first successful
//! plan in that order is the one returned.

use std::collections::{BTreeMap, BTreeSet};
use std::rc::Rc;

use thiserror::Error;

use crate::attack::AttackResult;
use crate::control::{check_plan_goal, goal_met, ControlError, ControlInstance, ControlPlan, Prong, ResourceModel};
use crate::election::{Ballot, BallotKind, CandidateId, ElectionError, Rule};

pub const ENVELOPE_VAR: &str = "CONTROL_ORACLE_ENVELOPE";

/// Hard size caps; instances beyond them are refused.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleEnvelope {
    pub max_candidates: usize,
    pub max_voters: usize,
    pub max_bribes: usize,
}

impl Default for OracleEnvelope {
    fn default() -> Self {
        OracleEnvelope {
            max_candidates: 5,
            max_voters: 8,
            max_bribes: 3,
        }
    }
}

impl OracleEnvelope {
    /// Parses `candidates,voters,bribes`, e.g. `6,12,3`.
    pub fn parse(s: &str) -> Result<Self, OracleError> {
        let parts: Vec<_> = s.split(',').map(|p| p.trim().parse::<usize>()).collect();
        match parts.as_slice() {
            [Ok(c), Ok(v), Ok(b)] if *c > 0 && *v > 0 && *b > 0 => Ok(OracleEnvelope {
                max_candidates: *c,
                max_voters: *v,
                max_bribes: *b,
            }),
            _ => Err(OracleError::BadEnvelope(s.to_string())),
        }
    }

    /// The default envelope, or the one named by `CONTROL_ORACLE_ENVELOPE`.
    pub fn from_env() -> Result<Self, OracleError> {
        match std::env::var(ENVELOPE_VAR) {
            Ok(s) => OracleEnvelope::parse(&s),
            Err(_) => Ok(OracleEnvelope::default()),
        }
    }

    pub fn unbounded() -> Self {
        OracleEnvelope {
            max_candidates: usize::MAX,
            max_voters: usize::MAX,
            max_bribes: usize::MAX,
        }
    }
}

/// Which replacement ballots a bribe may install.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub enum BribeSpace {
    /// Every ballot over the final candidate set.
    #[default]
    Any,
    /// Only the voter's own ballot with the given candidate moved to the top.
    LiftToTop(CandidateId),
    /// Ballots one relocation away: one candidate moved to another
    /// position, or one approval flipped.
    SingleMove,
}

#[derive(Clone, Debug, Default)]
pub struct OracleOptions {
    pub envelope: OracleEnvelope,
    pub bribes: BribeSpace,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error(transparent)]
    Control(#[from] ControlError),
    #[error("instance has {got} {what}, oracle envelope allows {cap}")]
    Envelope {
        what: &'static str,
        got: usize,
        cap: usize,
    },
    #[error("malformed oracle envelope `{0}`, expected candidates,voters,bribes with positive caps")]
    BadEnvelope(String),
    #[error("bribe space {0} needs linear-order ballots")]
    BribeSpace(&'static str),
}

impl From<ElectionError> for OracleError {
    fn from(e: ElectionError) -> Self {
        OracleError::Control(e.into())
    }
}

pub fn solve_exhaustive(inst: &ControlInstance, rule: &Rule) -> Result<AttackResult, OracleError> {
    solve_exhaustive_with(inst, rule, &OracleOptions::default())
}

/// The canonically first successful plan, or `Impossible`.
pub fn solve_exhaustive_with(
    inst: &ControlInstance,
    rule: &Rule,
    opts: &OracleOptions,
) -> Result<AttackResult, OracleError> {
    let search = Search::new(inst, rule, opts)?;
    let mut found = None;
    search.run(Mode::Solve, &mut |plan| {
        found = Some(plan);
        false
    });
    match found {
        Some(plan) => {
            assert!(
                check_plan_goal(inst, &plan, rule)?,
                "oracle plan failed re-verification"
            );
            Ok(AttackResult::from_plan(plan))
        }
        None => Ok(AttackResult::impossible()),
    }
}

pub fn count_solutions(inst: &ControlInstance, rule: &Rule) -> Result<u64, OracleError> {
    count_solutions_with(inst, rule, &OracleOptions::default())
}

/// Number of distinct successful plans. Bribes that reinstall a voter's
/// own ballot count as separate plans.
pub fn count_solutions_with(
    inst: &ControlInstance,
    rule: &Rule,
    opts: &OracleOptions,
) -> Result<u64, OracleError> {
    let search = Search::new(inst, rule, opts)?;
    let mut n = 0u64;
    search.run(Mode::All, &mut |_| {
        n += 1;
        true
    });
    Ok(n)
}

/// Successful plans in canonical order, at most `limit` of them.
pub fn solutions_with(
    inst: &ControlInstance,
    rule: &Rule,
    opts: &OracleOptions,
    limit: usize,
) -> Result<Vec<ControlPlan>, OracleError> {
    let search = Search::new(inst, rule, opts)?;
    let mut out = Vec::new();
    if limit == 0 {
        return Ok(out);
    }
    search.run(Mode::All, &mut |plan| {
        out.push(plan);
        out.len() < limit
    });
    Ok(out)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    /// Skip bribes that change nothing; such plans are never canonically first.
    Solve,
    All,
}

enum Tally {
    Positional(Vec<i64>),
    Approval,
    Pairwise,
}

/// Everything that depends only on the final candidate set.
struct Frame {
    m: usize,
    focus: usize,
    /// Per global voter: restricted ballot and its tally contribution.
    current: Vec<(Ballot, Vec<i64>)>,
    /// Per global voter: replacement choices in ascending ballot order.
    choices: Vec<Rc<Vec<(Ballot, Vec<i64>)>>>,
    /// Tally of all registered voters.
    base: Vec<i64>,
    names: BTreeSet<String>,
    valid: bool,
}

struct Search<'a> {
    inst: &'a ControlInstance,
    rule: &'a Rule,
    bribes: BribeSpace,
    kind: BallotKind,
    universe: Vec<(CandidateId, String)>,
    voters: Vec<(&'a str, &'a Ballot)>,
    nv: usize,
    add_pool: Vec<usize>,
    del_pool: Vec<usize>,
    w_sorted: Vec<usize>,
    v_sorted: Vec<usize>,
    limits: [usize; 5],
    shared: Option<usize>,
    free_adds: bool,
}

impl<'a> Search<'a> {
    fn new(inst: &'a ControlInstance, rule: &'a Rule, opts: &OracleOptions) -> Result<Self, OracleError> {
        inst.validate()?;
        let env = opts.envelope;
        let nc = inst.candidates.len() + inst.spoilers.len();
        if nc > env.max_candidates {
            return Err(OracleError::Envelope {
                what: "candidates",
                got: nc,
                cap: env.max_candidates,
            });
        }
        let nvw = inst.registered.len() + inst.unregistered.len();
        if nvw > env.max_voters {
            return Err(OracleError::Envelope {
                what: "voters",
                got: nvw,
                cap: env.max_voters,
            });
        }
        let kind = inst
            .registered
            .iter()
            .chain(&inst.unregistered)
            .next()
            .map(|v| v.ballot.kind())
            .unwrap_or(rule.ballot_kind());
        if kind != rule.ballot_kind() {
            return Err(ElectionError::BallotKind {
                rule: rule.to_string(),
                expected: rule.ballot_kind(),
            }
            .into());
        }
        if kind == BallotKind::Approval && matches!(opts.bribes, BribeSpace::LiftToTop(_)) {
            return Err(OracleError::BribeSpace("lift-to-top"));
        }
        let universe: Vec<_> = inst.universe().into_iter().map(|c| (c.id, c.name)).collect();
        let voters: Vec<_> = inst
            .registered
            .iter()
            .chain(&inst.unregistered)
            .map(|v| (v.name.as_str(), &v.ballot))
            .collect();
        let nv = inst.registered.len();
        let by_id = |range: std::ops::Range<usize>, skip: Option<CandidateId>| {
            let mut idx: Vec<usize> = range.filter(|&i| Some(universe[i].0) != skip).collect();
            idx.sort_by_key(|&i| universe[i].0);
            idx
        };
        let ncand = inst.candidates.len();
        let add_pool = by_id(ncand..nc, None);
        let del_pool = by_id(0..ncand, Some(inst.focus));
        let by_name = |range: std::ops::Range<usize>| {
            let mut idx: Vec<usize> = range.collect();
            idx.sort_by_key(|&i| voters[i].0);
            idx
        };
        let v_sorted = by_name(0..nv);
        let w_sorted = by_name(nv..voters.len());
        let p = &inst.prongs;
        let shared = match inst.resource_model {
            ResourceModel::Shared(k) => Some(k),
            ResourceModel::Separate => None,
        };
        let cap = |on: bool, budget: usize, pool: usize| {
            if !on {
                0
            } else if shared.is_some() {
                pool
            } else {
                budget.min(pool)
            }
        };
        let b = &inst.budgets;
        let free_adds = p.contains(Prong::AddCandidatesUnlimited);
        let mut limits = [
            cap(p.adds_candidates(), b.ac, add_pool.len()),
            cap(p.contains(Prong::DeleteCandidates), b.dc, del_pool.len()),
            cap(p.contains(Prong::AddVoters), b.av, w_sorted.len()),
            cap(p.contains(Prong::DeleteVoters), b.dv, v_sorted.len()),
            cap(p.contains(Prong::Bribe), b.bv, voters.len()),
        ];
        if free_adds {
            limits[0] = add_pool.len();
        }
        if let Some(k) = shared {
            for (i, l) in limits.iter_mut().enumerate() {
                if !(i == 0 && free_adds) {
                    *l = (*l).min(k);
                }
            }
        }
        if limits[4] > env.max_bribes {
            return Err(OracleError::Envelope {
                what: "bribes",
                got: limits[4],
                cap: env.max_bribes,
            });
        }
        Ok(Search {
            inst,
            rule,
            bribes: opts.bribes.clone(),
            kind,
            universe,
            voters,
            nv,
            add_pool,
            del_pool,
            w_sorted,
            v_sorted,
            limits,
            shared,
            free_adds,
        })
    }

    fn frame(&self, adds: &[usize], dels: &[usize]) -> Frame {
        let keep: Vec<bool> = (0..self.universe.len())
            .map(|i| {
                if i < self.inst.candidates.len() {
                    !dels.contains(&i)
                } else {
                    adds.contains(&i)
                }
            })
            .collect();
        let ids: Vec<CandidateId> = (0..self.universe.len())
            .filter(|&i| keep[i])
            .map(|i| self.universe[i].0)
            .collect();
        let m = ids.len();
        let pos: BTreeMap<CandidateId, usize> = ids.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let focus = pos[&self.inst.focus];
        let (tally, valid) = match self.rule {
            Rule::Plurality | Rule::Scoring(_) => match self.rule.scoring_vector(m) {
                Some(Ok(v)) => (Tally::Positional(v.into_iter().map(|x| x as i64).collect()), true),
                _ => (Tally::Positional(vec![0; m]), false),
            },
            Rule::Approval => (Tally::Approval, true),
            _ => (Tally::Pairwise, true),
        };
        let contrib = |b: &Ballot| -> Vec<i64> {
            match (&tally, b) {
                (Tally::Positional(sv), Ballot::Order(o)) => {
                    let mut s = vec![0; m];
                    for (r, c) in o.iter().enumerate() {
                        s[pos[c]] += sv[r];
                    }
                    s
                }
                (Tally::Pairwise, Ballot::Order(o)) => {
                    let mut s = vec![0; m * m];
                    let ps: Vec<usize> = o.iter().map(|c| pos[c]).collect();
                    for i in 0..ps.len() {
                        for j in i + 1..ps.len() {
                            s[ps[i] * m + ps[j]] += 1;
                        }
                    }
                    s
                }
                (Tally::Approval, Ballot::Approval(a)) => a.iter().map(|&x| x as i64).collect(),
                _ => vec![0; if matches!(tally, Tally::Pairwise) { m * m } else { m }],
            }
        };
        let restrict = |b: &Ballot| -> Ballot {
            match b {
                Ballot::Order(o) => Ballot::Order(o.iter().copied().filter(|c| pos.contains_key(c)).collect()),
                Ballot::Approval(a) => Ballot::Approval(
                    a.iter().zip(&keep).filter(|(_, &k)| k).map(|(&x, _)| x).collect(),
                ),
            }
        };
        let current: Vec<(Ballot, Vec<i64>)> = self
            .voters
            .iter()
            .map(|(_, b)| {
                let r = restrict(b);
                let c = contrib(&r);
                (r, c)
            })
            .collect();
        let mut sorted_ids = ids.clone();
        sorted_ids.sort();
        let build = |mut ballots: Vec<Ballot>| -> Rc<Vec<(Ballot, Vec<i64>)>> {
            ballots.sort();
            ballots.dedup();
            Rc::new(ballots.into_iter().map(|b| {
                let c = contrib(&b);
                (b, c)
            }).collect())
        };
        let choices = if !self.inst.prongs.contains(Prong::Bribe) {
            vec![Rc::new(Vec::new()); self.voters.len()]
        } else {
            match (&self.bribes, self.kind) {
                (BribeSpace::Any, BallotKind::Order) => {
                    vec![build(permutations(&sorted_ids).into_iter().map(Ballot::Order).collect()); self.voters.len()]
                }
                (BribeSpace::Any, BallotKind::Approval) => {
                    let all: Vec<Ballot> = (0..1u64 << m)
                        .map(|bits| Ballot::Approval((0..m).map(|i| bits >> (m - 1 - i) & 1 == 1).collect()))
                        .collect();
                    vec![build(all); self.voters.len()]
                }
                (BribeSpace::LiftToTop(c), _) => current
                    .iter()
                    .map(|(b, _)| {
                        let lifted = if pos.contains_key(c) {
                            crate::attack::lift_to_top(b, *c)
                        } else {
                            b.clone()
                        };
                        build(vec![lifted])
                    })
                    .collect(),
                (BribeSpace::SingleMove, _) => current.iter().map(|(b, _)| build(single_moves(b))).collect(),
            }
        };
        let mut base = vec![0; current.first().map_or(0, |c| c.1.len()).max(if matches!(tally, Tally::Pairwise) { m * m } else { m })];
        for (_, c) in &current[..self.nv] {
            add(&mut base, c, 1);
        }
        let names = ids
            .iter()
            .map(|id| {
                self.universe
                    .iter()
                    .find(|(c, _)| c == id)
                    .map(|(_, n)| n.clone())
                    .unwrap_or_default()
            })
            .collect::<BTreeSet<_>>();
        let valid = valid && (names.len() == m || *self.rule != Rule::OriginalLlull);
        Frame {
            m,
            focus,
            current,
            choices,
            base,
            names,
            valid,
        }
    }

    fn winners(&self, f: &Frame, stats: &[i64], n: usize, llull_ok: bool) -> Vec<usize> {
        let m = f.m;
        let argmax = |s: &[i64]| -> Vec<usize> {
            match s.iter().max() {
                Some(&best) => (0..s.len()).filter(|&i| s[i] == best).collect(),
                None => Vec::new(),
            }
        };
        let copeland = |num: i64, den: i64| -> Vec<usize> {
            let s: Vec<i64> = (0..m)
                .map(|i| {
                    (0..m)
                        .filter(|&j| j != i)
                        .map(|j| match stats[i * m + j].cmp(&stats[j * m + i]) {
                            std::cmp::Ordering::Greater => den,
                            std::cmp::Ordering::Equal => num,
                            std::cmp::Ordering::Less => 0,
                        })
                        .sum()
                })
                .collect();
            argmax(&s)
        };
        match self.rule {
            Rule::Plurality | Rule::Scoring(_) | Rule::Approval => argmax(&stats[..m]),
            Rule::Maximin => {
                let s: Vec<i64> = (0..m)
                    .map(|i| {
                        (0..m)
                            .filter(|&j| j != i)
                            .map(|j| stats[i * m + j])
                            .min()
                            .unwrap_or(n as i64)
                    })
                    .collect();
                argmax(&s)
            }
            Rule::Copeland(a) => copeland(a.numer() as i64, a.denom() as i64),
            Rule::Condorcet => (0..m)
                .find(|&i| (0..m).all(|j| j == i || stats[i * m + j] > stats[j * m + i]))
                .into_iter()
                .collect(),
            Rule::OriginalLlull => {
                if llull_ok {
                    copeland(1, 1)
                } else {
                    Vec::new()
                }
            }
        }
    }

    fn succeeds(&self, f: &Frame, stats: &[i64], n: usize, llull_ok: bool) -> bool {
        f.valid && goal_met(self.inst.goal, self.inst.winner_model, &self.winners(f, stats, n, llull_ok), f.focus)
    }

    /// Visits successful plans in canonical order until `visit` returns false.
    fn run(&self, mode: Mode, visit: &mut dyn FnMut(ControlPlan) -> bool) {
        let [la, lc, lw, lv, lb] = self.limits;
        let mut frames: BTreeMap<(Vec<usize>, Vec<usize>), Rc<Frame>> = BTreeMap::new();
        for a in 0..=la {
            for c in 0..=lc {
                for w in 0..=lw {
                    for v in 0..=lv {
                        for b in 0..=lb {
                            if let Some(k) = self.shared {
                                let used = c + w + v + b + if self.free_adds { 0 } else { a };
                                if used > k {
                                    continue;
                                }
                            }
                            if b > self.nv - v + w {
                                continue;
                            }
                            for aset in combinations(&self.add_pool, a) {
                                for cset in combinations(&self.del_pool, c) {
                                    let key = (aset.clone(), cset.clone());
                                    let f = frames
                                        .entry(key)
                                        .or_insert_with(|| Rc::new(self.frame(&aset, &cset)))
                                        .clone();
                                    for wset in combinations(&self.w_sorted, w) {
                                        for vset in combinations(&self.v_sorted, v) {
                                            let go = self.voter_level(&f, mode, &aset, &cset, &wset, &vset, b, visit);
                                            if !go {
                                                return;
                                            }
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn voter_level(
        &self,
        f: &Frame,
        mode: Mode,
        aset: &[usize],
        cset: &[usize],
        wset: &[usize],
        vset: &[usize],
        b: usize,
        visit: &mut dyn FnMut(ControlPlan) -> bool,
    ) -> bool {
        let mut stats = f.base.clone();
        for &i in wset {
            add(&mut stats, &f.current[i].1, 1);
        }
        for &i in vset {
            add(&mut stats, &f.current[i].1, -1);
        }
        let mut electorate: Vec<usize> = (0..self.nv)
            .filter(|i| !vset.contains(i))
            .chain(wset.iter().copied())
            .collect();
        electorate.sort_by_key(|&i| self.voters[i].0);
        let n = electorate.len();
        let llull_ok = *self.rule == Rule::OriginalLlull
            && n == f.m
            && electorate
                .iter()
                .map(|&i| self.voters[i].0)
                .collect::<BTreeSet<_>>()
                == f.names.iter().map(String::as_str).collect();
        let mut chosen = Vec::with_capacity(b);
        self.bribe_level(f, mode, &electorate, 0, b, &mut stats, n, llull_ok, &mut chosen, &mut |chosen| {
            let plan = ControlPlan {
                add_candidates: aset.iter().map(|&i| self.universe[i].0).collect(),
                delete_candidates: cset.iter().map(|&i| self.universe[i].0).collect(),
                add_voters: wset.iter().map(|&i| self.voters[i].0.to_string()).collect(),
                delete_voters: vset.iter().map(|&i| self.voters[i].0.to_string()).collect(),
                bribes: chosen
                    .iter()
                    .map(|&(v, ci): &(usize, usize)| (self.voters[v].0.to_string(), f.choices[v][ci].0.clone()))
                    .collect(),
            };
            visit(plan)
        })
    }

    #[allow(clippy::too_many_arguments)]
    fn bribe_level(
        &self,
        f: &Frame,
        mode: Mode,
        electorate: &[usize],
        start: usize,
        left: usize,
        stats: &mut Vec<i64>,
        n: usize,
        llull_ok: bool,
        chosen: &mut Vec<(usize, usize)>,
        emit: &mut dyn FnMut(&[(usize, usize)]) -> bool,
    ) -> bool {
        if left == 0 {
            if self.succeeds(f, stats, n, llull_ok) {
                return emit(chosen);
            }
            return true;
        }
        if electorate.len() - start < left {
            return true;
        }
        for i in start..electorate.len() {
            let v = electorate[i];
            let (cur, cur_c) = &f.current[v];
            for (ci, (ballot, c)) in f.choices[v].iter().enumerate() {
                if mode == Mode::Solve && ballot == cur {
                    continue;
                }
                add(stats, cur_c, -1);
                add(stats, c, 1);
                chosen.push((v, ci));
                let go = self.bribe_level(f, mode, electorate, i + 1, left - 1, stats, n, llull_ok, chosen, emit);
                chosen.pop();
                add(stats, c, -1);
                add(stats, cur_c, 1);
                if !go {
                    return false;
                }
            }
        }
        true
    }
}

fn add(acc: &mut [i64], x: &[i64], sign: i64) {
    for (a, b) in acc.iter_mut().zip(x) {
        *a += sign * b;
    }
}

/// `k`-subsets of `items` as index lists, lexicographic in item order.
fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    fn go(items: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            if items.len() - i < k - cur.len() {
                break;
            }
            cur.push(items[i]);
            go(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(items, k, 0, &mut Vec::new(), &mut out);
    out
}

/// All permutations of `sorted` in lexicographic order.
pub(crate) fn permutations<T: Copy + Ord>(sorted: &[T]) -> Vec<Vec<T>> {
    let mut cur = sorted.to_vec();
    cur.sort();
    let mut out = vec![cur.clone()];
    loop {
        let Some(i) = (1..cur.len()).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..cur.len()).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(cur.clone());
    }
}

fn single_moves(b: &Ballot) -> Vec<Ballot> {
    match b {
        Ballot::Order(o) => {
            let mut out = vec![b.clone()];
            for from in 0..o.len() {
                for to in 0..o.len() {
                    let mut x = o.clone();
                    let c = x.remove(from);
                    x.insert(to, c);
                    out.push(Ballot::Order(x));
                }
            }
            out
        }
        Ballot::Approval(a) => {
            let mut out = vec![b.clone()];
            for i in 0..a.len() {
                let mut x = a.clone();
                x[i] = !x[i];
                out.push(Ballot::Approval(x));
            }
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::control::{Budgets, Goal, ProngSet, WinnerModel};
    use crate::election::{winners, Alpha, Candidate, Election, ScoringProtocol, Voter};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn inst(registered: Vec<Voter>, prongs: &[Prong], budgets: Budgets) -> ControlInstance {
        ControlInstance {
            candidates: vec![Candidate::new(0, "a"), Candidate::new(1, "b"), Candidate::new(2, "p")],
            spoilers: vec![],
            registered,
            unregistered: vec![],
            focus: CandidateId(2),
            budgets,
            goal: Goal::Constructive,
            winner_model: WinnerModel::Unique,
            resource_model: ResourceModel::Separate,
            prongs: ProngSet::new(prongs.iter().copied()),
        }
    }

    #[test]
    fn permutations_are_lexicographic() {
        let p = permutations(&[1, 2, 3]);
        assert_eq!(p.len(), 6);
        assert_eq!(p[0], vec![1, 2, 3]);
        assert_eq!(p[1], vec![1, 3, 2]);
        assert_eq!(p[5], vec![3, 2, 1]);
        assert_eq!(permutations::<u8>(&[]), vec![Vec::<u8>::new()]);
    }

    #[test]
    fn zero_budgets_decide_current_outcome() {
        let won = inst(vec![Voter::ranking("x", &[2, 0, 1])], &[], Budgets::default());
        let r = solve_exhaustive(&won, &Rule::Plurality).unwrap();
        assert_eq!(r.plan(), Some(&ControlPlan::empty()));
        assert_eq!(count_solutions(&won, &Rule::Plurality).unwrap(), 1);
        let lost = inst(vec![Voter::ranking("x", &[0, 2, 1])], &[], Budgets::default());
        assert!(!solve_exhaustive(&lost, &Rule::Plurality).unwrap().is_plan());
        assert_eq!(count_solutions(&lost, &Rule::Plurality).unwrap(), 0);
    }

    #[test]
    fn delete_and_bribe_example() {
        let voters = vec![
            Voter::ranking("v1", &[0, 1, 2]),
            Voter::ranking("v2", &[0, 1, 2]),
            Voter::ranking("v3", &[2, 0, 1]),
        ];
        let i = inst(
            voters,
            &[Prong::DeleteVoters, Prong::Bribe],
            Budgets { dv: 1, bv: 1, ..Budgets::default() },
        );
        let r = solve_exhaustive(&i, &Rule::Plurality).unwrap();
        let plan = r.plan().unwrap();
        // a single bribe already suffices and is canonically first
        assert!(plan.delete_voters.is_empty());
        assert_eq!(
            plan.bribes.get("v1"),
            Some(&Ballot::Order(vec![CandidateId(2), CandidateId(0), CandidateId(1)]))
        );
        let mut both = ControlPlan::empty();
        both.delete_voters.insert("v1".into());
        both.bribes.insert("v2".into(), Ballot::Order(vec![CandidateId(2), CandidateId(0), CandidateId(1)]));
        assert!(check_plan_goal(&i, &both, &Rule::Plurality).unwrap());
    }

    #[test]
    fn envelope_is_enforced() {
        let voters: Vec<Voter> = (0..9).map(|i| Voter::ranking(format!("v{i}"), &[0, 1, 2])).collect();
        let i = inst(voters, &[], Budgets::default());
        assert!(matches!(
            solve_exhaustive(&i, &Rule::Plurality),
            Err(OracleError::Envelope { what: "voters", .. })
        ));
        assert_eq!(OracleEnvelope::parse("6,12,3").unwrap().max_voters, 12);
        assert!(OracleEnvelope::parse("0,1,1").is_err());
        assert!(OracleEnvelope::parse("1,2").is_err());
    }

    fn random_election(rng: &mut ChaCha8Rng, m: usize, n: usize, approval: bool) -> Election {
        let cands: Vec<Candidate> = (0..m).map(|i| Candidate::new(i as u32, format!("c{i}"))).collect();
        let voters = (0..n)
            .map(|j| {
                let ballot = if approval {
                    Ballot::Approval((0..m).map(|_| rng.gen()).collect())
                } else {
                    let mut o: Vec<CandidateId> = (0..m as u32).map(CandidateId).collect();
                    for i in (1..m).rev() {
                        o.swap(i, rng.gen_range(0..=i));
                    }
                    Ballot::Order(o)
                };
                Voter::new(if j < m && rng.gen_bool(0.7) { format!("c{j}") } else { format!("x{j}") }, ballot)
            })
            .collect();
        Election::new(cands, voters).unwrap()
    }

    /// The compact evaluator agrees with the reference winner functions.
    #[test]
    fn evaluator_matches_reference_rules() {
        let rules = [
            Rule::Plurality,
            Rule::Maximin,
            Rule::Copeland(Alpha::ZERO),
            Rule::Copeland(Alpha::HALF),
            Rule::Copeland(Alpha::ONE),
            Rule::Condorcet,
            Rule::OriginalLlull,
            Rule::Scoring(ScoringProtocol::Borda),
            Rule::Scoring(ScoringProtocol::Veto),
            Rule::Approval,
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..400 {
            let m = rng.gen_range(1..=4);
            let n = rng.gen_range(0..=5);
            for rule in &rules {
                let e = random_election(&mut rng, m, n, *rule == Rule::Approval);
                let focus = CandidateId(rng.gen_range(0..m as u32));
                let inst = ControlInstance {
                    candidates: e.candidates().to_vec(),
                    spoilers: vec![],
                    registered: e.voters().to_vec(),
                    unregistered: vec![],
                    focus,
                    budgets: Budgets::default(),
                    goal: Goal::Constructive,
                    winner_model: WinnerModel::Nonunique,
                    resource_model: ResourceModel::Separate,
                    prongs: ProngSet::default(),
                };
                let expect = winners(&e, rule).unwrap().contains(&focus);
                let got = solve_exhaustive(&inst, rule).unwrap().is_plan();
                assert_eq!(got, expect, "{rule} on {e:?}");
            }
        }
    }

    #[test]
    fn first_plan_is_canonical_minimum() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..60 {
            let e = random_election(&mut rng, 3, 4, false);
            let mut i = inst(
                e.voters().to_vec(),
                &[Prong::DeleteVoters, Prong::Bribe, Prong::DeleteCandidates],
                Budgets { dc: 1, dv: 1, bv: 1, ..Budgets::default() },
            );
            i.candidates = e.candidates().to_vec();
            i.focus = CandidateId(0);
            let opts = OracleOptions::default();
            let all = solutions_with(&i, &Rule::Maximin, &opts, usize::MAX).unwrap();
            assert_eq!(all.len() as u64, count_solutions(&i, &Rule::Maximin).unwrap());
            let best = all.iter().min_by_key(|p| (p.usage().ac, p.usage().dc, p.usage().av, p.usage().dv, p.usage().bv, (*p).clone()));
            let got = solve_exhaustive(&i, &Rule::Maximin).unwrap();
            assert_eq!(got.plan(), best);
            for p in &all {
                assert!(check_plan_goal(&i, p, &Rule::Maximin).unwrap());
            }
        }
    }

    #[test]
    fn lift_space_is_a_restriction() {
        let voters = vec![
            Voter::ranking("v1", &[0, 1, 2]),
            Voter::ranking("v2", &[0, 1, 2]),
            Voter::ranking("v3", &[2, 1, 0]),
        ];
        let i = inst(voters, &[Prong::Bribe], Budgets { bv: 1, ..Budgets::default() });
        let lift = OracleOptions {
            bribes: BribeSpace::LiftToTop(CandidateId(2)),
            ..OracleOptions::default()
        };
        let all = count_solutions(&i, &Rule::Plurality).unwrap();
        let lifted = count_solutions_with(&i, &Rule::Plurality, &lift).unwrap();
        assert!(lifted <= all);
        assert!(solve_exhaustive_with(&i, &Rule::Plurality, &lift).unwrap().is_plan());
    }
}
