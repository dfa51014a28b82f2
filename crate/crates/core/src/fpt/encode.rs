//! Winner encodings over anonymous profiles and the control program `P(K)`.

use std::collections::BTreeMap;

use super::system::{Cmp, LinearSystem};
use super::FptError;
use crate::control::{ControlInstance, Prong, ResourceModel, WinnerModel};
use crate::election::{Ballot, Candidate, CandidateId, Election, ElectionError, ScoringProtocol, Voter};
use crate::oracle::permutations;

/// The `|K|!` preference orders over `k`, as lexicographic permutations of
/// the ascending ids.
pub fn orders(k: &[CandidateId]) -> Vec<Vec<CandidateId>> {
    permutations(k)
}

fn sorted(k: &[CandidateId]) -> Vec<CandidateId> {
    let mut k = k.to_vec();
    k.sort();
    k.dedup();
    k
}

fn prefers(order: &[CandidateId], a: CandidateId, b: CandidateId) -> bool {
    let pos = |c| order.iter().position(|&x| x == c);
    pos(a) < pos(b)
}

/// Voter counts per preference order over a candidate set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnonymousProfile {
    candidates: Vec<CandidateId>,
    orders: Vec<Vec<CandidateId>>,
    pub counts: Vec<u64>,
}

impl AnonymousProfile {
    pub fn new(k: &[CandidateId]) -> Self {
        let candidates = sorted(k);
        let orders = orders(&candidates);
        let counts = vec![0; orders.len()];
        AnonymousProfile {
            candidates,
            orders,
            counts,
        }
    }

    /// Counts `ballots` restricted to `k`.
    pub fn from_ballots<'a>(
        k: &[CandidateId],
        ballots: impl IntoIterator<Item = &'a Ballot>,
    ) -> Result<Self, FptError> {
        let mut p = AnonymousProfile::new(k);
        for b in ballots {
            let i = p.class_of(b)?;
            p.counts[i] += 1;
        }
        Ok(p)
    }

    pub fn candidates(&self) -> &[CandidateId] {
        &self.candidates
    }

    pub fn orders(&self) -> &[Vec<CandidateId>] {
        &self.orders
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn order_index(&self, order: &[CandidateId]) -> Option<usize> {
        self.orders.iter().position(|o| o == order)
    }

    /// Index of the order a linear ballot induces on the candidate set.
    pub fn class_of(&self, b: &Ballot) -> Result<usize, FptError> {
        let Some(o) = b.order() else {
            return Err(FptError::Unsupported("approval ballots".into()));
        };
        let r: Vec<CandidateId> = o.iter().copied().filter(|c| self.candidates.binary_search(c).is_ok()).collect();
        self.order_index(&r).ok_or(FptError::BallotOutsideCandidates)
    }

    /// An election with `counts[i]` voters casting order `i`, named
    /// `o{i}_{copy}`. `names` supplies display names by id.
    pub fn materialize(&self, names: &[Candidate]) -> Result<Election, ElectionError> {
        let by_id: BTreeMap<CandidateId, &Candidate> = names.iter().map(|c| (c.id, c)).collect();
        let cands: Vec<Candidate> = self
            .candidates
            .iter()
            .map(|id| by_id.get(id).map(|c| (*c).clone()).unwrap_or_else(|| Candidate::new(id.0, id.to_string())))
            .collect();
        let mut voters = Vec::new();
        for (i, (o, &n)) in self.orders.iter().zip(&self.counts).enumerate() {
            for copy in 0..n {
                voters.push(Voter::new(format!("o{i}_{copy}"), Ballot::Order(o.clone())));
            }
        }
        Election::new(cands, voters)
    }
}

/// A guessed min-opponent for every candidate, by position in `K`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct MaximinGuess(pub Vec<usize>);

/// All `(m−1)^m` guesses, lexicographic, with no candidate its own opponent.
pub fn maximin_guesses(m: usize) -> Vec<MaximinGuess> {
    let mut out = Vec::new();
    if m < 2 {
        return out;
    }
    let mut g: Vec<usize> = (0..m).map(|i| usize::from(i == 0)).collect();
    loop {
        out.push(MaximinGuess(g.clone()));
        let mut i = m;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            let mut next = g[i] + 1;
            if next == i {
                next += 1;
            }
            if next < m {
                g[i] = next;
                for (j, x) in g.iter_mut().enumerate().skip(i + 1) {
                    *x = usize::from(j == 0);
                }
                break;
            }
        }
    }
}

/// What the encoded system asserts about `target`.
#[derive(Clone, Debug)]
pub(crate) struct Contest {
    pub target: usize,
    pub rivals: Vec<usize>,
    pub strict: bool,
}

impl Contest {
    pub fn win(m: usize, target: usize, model: WinnerModel) -> Self {
        Contest {
            target,
            rivals: (0..m).filter(|&i| i != target).collect(),
            strict: model == WinnerModel::Unique,
        }
    }

    /// `target` strictly ahead of `rival`.
    pub fn beat(target: usize, rival: usize) -> Self {
        Contest {
            target,
            rivals: vec![rival],
            strict: true,
        }
    }

    fn cmp(&self) -> Cmp {
        if self.strict {
            Cmp::Gt
        } else {
            Cmp::Ge
        }
    }
}

fn count_vars(sys: &mut LinearSystem, n: usize, cap: u64) -> Result<(), FptError> {
    for i in 0..n {
        sys.add_var(format!("n{}", i + 1), 0, cap as i64)?;
    }
    Ok(())
}

fn position(k: &[CandidateId], c: CandidateId) -> Result<usize, FptError> {
    k.iter().position(|&x| x == c).ok_or(FptError::TargetNotInSet(c))
}

/// Rows stating that `target` wins (uniquely, or as a possibly tied winner)
/// under the positional vector `vector` at counts `n_1..n_{|K|!}`, each
/// bounded by `cap`.
pub fn win_constraints_scoring(
    vector: &[u64],
    k: &[CandidateId],
    target: CandidateId,
    model: WinnerModel,
    cap: u64,
) -> Result<LinearSystem, FptError> {
    let k = sorted(k);
    let t = position(&k, target)?;
    scoring_system(vector, &k, &Contest::win(k.len(), t, model), cap)
}

pub(crate) fn scoring_system(
    vector: &[u64],
    k: &[CandidateId],
    contest: &Contest,
    cap: u64,
) -> Result<LinearSystem, FptError> {
    ScoringProtocol::Vector(vector.to_vec()).vector_for(k.len())?;
    let ords = orders(k);
    let mut sys = LinearSystem::new();
    count_vars(&mut sys, ords.len(), cap)?;
    let points = |o: &[CandidateId], c: usize| -> i64 {
        let at = o.iter().position(|&x| x == k[c]).unwrap();
        vector[at] as i64
    };
    for &r in &contest.rivals {
        let terms: Vec<(usize, i64)> = ords
            .iter()
            .enumerate()
            .map(|(i, o)| (i, points(o, contest.target) - points(o, r)))
            .collect();
        sys.add_row(&terms, contest.cmp(), 0)?;
    }
    Ok(sys)
}

/// One system per [`MaximinGuess`], in [`maximin_guesses`] order; `target`
/// wins at a count vector iff some system holds there.
pub fn maximin_win_programs(
    k: &[CandidateId],
    target: CandidateId,
    model: WinnerModel,
    cap: u64,
) -> Result<Vec<LinearSystem>, FptError> {
    let k = sorted(k);
    let t = position(&k, target)?;
    maximin_systems(&k, &Contest::win(k.len(), t, model), cap)
}

pub(crate) fn maximin_systems(k: &[CandidateId], contest: &Contest, cap: u64) -> Result<Vec<LinearSystem>, FptError> {
    let m = k.len();
    if m < 2 {
        return Err(FptError::TooFewCandidates(m));
    }
    let ords = orders(k);
    // coefficient vector of N(c_a, c_b)
    let n_of = |a: usize, b: usize| -> Vec<i64> { ords.iter().map(|o| i64::from(prefers(o, k[a], k[b]))).collect() };
    let diff = |x: &[i64], y: &[i64]| -> Vec<(usize, i64)> { x.iter().zip(y).map(|(a, b)| a - b).enumerate().collect() };
    let mut out = Vec::new();
    for MaximinGuess(g) in maximin_guesses(m) {
        let mut sys = LinearSystem::new();
        count_vars(&mut sys, ords.len(), cap)?;
        for i in 0..m {
            let own = n_of(i, g[i]);
            for j in (0..m).filter(|&j| j != i && j != g[i]) {
                sys.add_row(&diff(&own, &n_of(i, j)), Cmp::Le, 0)?;
            }
        }
        let top = n_of(contest.target, g[contest.target]);
        for &r in &contest.rivals {
            sys.add_row(&diff(&top, &n_of(r, g[r])), contest.cmp(), 0)?;
        }
        out.push(sys);
    }
    Ok(out)
}

/// `P(K)` together with the variable layout needed to read a plan back.
#[derive(Clone, Debug)]
pub struct ControlProgram {
    pub system: LinearSystem,
    pub candidates: Vec<CandidateId>,
    pub orders: Vec<Vec<CandidateId>>,
    /// `n^V_i` and `n^W_i`.
    pub registered_counts: Vec<u64>,
    pub unregistered_counts: Vec<u64>,
}

impl ControlProgram {
    pub fn av(&self, i: usize) -> usize {
        i
    }

    pub fn dv(&self, i: usize) -> usize {
        self.orders.len() + i
    }

    pub fn bv(&self, i: usize, j: usize) -> usize {
        2 * self.orders.len() + i * self.orders.len() + j
    }
}

/// Cost of reaching `k` from `C` in candidate actions, ignoring free
/// unlimited additions: `(added, deleted)`.
pub(crate) fn candidate_moves(inst: &ControlInstance, k: &[CandidateId]) -> (usize, usize) {
    let added = inst.spoilers.iter().filter(|s| k.contains(&s.id)).count();
    let deleted = inst.candidates.iter().filter(|c| !k.contains(&c.id)).count();
    (added, deleted)
}

/// Builds `P(K)`: variables `av_i`, `dv_i` and `bv_{i,j}` with pool bounds,
/// flow conservation `Σ_j bv_{i,j} = n^V_i + av_i − dv_i`, the voter budget
/// rows, and the rows of `win` with each `n_j` replaced by `Σ_i bv_{i,j}`.
///
/// In the shared model a single row bounds all voter actions by what the
/// pool has left after the candidate actions that produce `K`.
pub fn build_control_program(
    k: &[CandidateId],
    inst: &ControlInstance,
    win: &LinearSystem,
) -> Result<ControlProgram, FptError> {
    let k = sorted(k);
    if !k.contains(&inst.focus) {
        return Err(FptError::FocusNotInSet);
    }
    let nv = AnonymousProfile::from_ballots(&k, inst.registered.iter().map(|v| &v.ballot))?;
    let nw = AnonymousProfile::from_ballots(&k, inst.unregistered.iter().map(|v| &v.ballot))?;
    let ords = nv.orders().to_vec();
    let r = ords.len();
    if win.num_vars() != r {
        return Err(FptError::WinArity {
            expected: r,
            got: win.num_vars(),
        });
    }
    let total = (inst.registered.len() + inst.unregistered.len()) as i64;
    let mut sys = LinearSystem::new();
    for i in 0..r {
        sys.add_var(format!("av{}", i + 1), 0, nw.counts[i] as i64)?;
    }
    for i in 0..r {
        sys.add_var(format!("dv{}", i + 1), 0, nv.counts[i] as i64)?;
    }
    for i in 0..r {
        for j in 0..r {
            sys.add_var(format!("bv{}_{}", i + 1, j + 1), 0, total)?;
        }
    }
    let prog = ControlProgram {
        system: LinearSystem::new(),
        candidates: k.clone(),
        orders: ords,
        registered_counts: nv.counts.clone(),
        unregistered_counts: nw.counts.clone(),
    };
    for i in 0..r {
        let mut terms: Vec<(usize, i64)> = (0..r).map(|j| (prog.bv(i, j), 1)).collect();
        terms.push((prog.av(i), -1));
        terms.push((prog.dv(i), 1));
        sys.add_eq(&terms, nv.counts[i] as i64)?;
    }
    let av_terms: Vec<(usize, i64)> = (0..r).map(|i| (prog.av(i), 1)).collect();
    let dv_terms: Vec<(usize, i64)> = (0..r).map(|i| (prog.dv(i), 1)).collect();
    let bribe_terms: Vec<(usize, i64)> = (0..r)
        .flat_map(|i| (0..r).filter(move |&j| j != i).map(move |j| (i, j)))
        .map(|(i, j)| (prog.bv(i, j), 1))
        .collect();
    let on = |p: Prong| inst.prongs.contains(p);
    let cap = |p: Prong, separate: usize| -> i64 {
        match (on(p), inst.resource_model) {
            (false, _) => 0,
            (true, ResourceModel::Separate) => separate as i64,
            (true, ResourceModel::Shared(_)) => total,
        }
    };
    sys.add_row(&av_terms, Cmp::Le, cap(Prong::AddVoters, inst.budgets.av))?;
    sys.add_row(&dv_terms, Cmp::Le, cap(Prong::DeleteVoters, inst.budgets.dv))?;
    sys.add_row(&bribe_terms, Cmp::Le, cap(Prong::Bribe, inst.budgets.bv))?;
    if let ResourceModel::Shared(pool) = inst.resource_model {
        let (added, deleted) = candidate_moves(inst, &k);
        let added = if on(Prong::AddCandidatesUnlimited) { 0 } else { added };
        let left = pool as i64 - (added + deleted) as i64;
        let all: Vec<(usize, i64)> = av_terms.iter().chain(&dv_terms).chain(&bribe_terms).copied().collect();
        sys.add_row(&all, Cmp::Le, left)?;
    }
    for row in win.rows() {
        let terms: Vec<(usize, i64)> = row
            .terms
            .iter()
            .flat_map(|&(j, a)| (0..r).map(move |i| (i, j, a)))
            .map(|(i, j, a)| (prog.bv(i, j), a))
            .collect();
        sys.add_row(&terms, row.cmp, row.rhs)?;
    }
    Ok(ControlProgram { system: sys, ..prog })
}
