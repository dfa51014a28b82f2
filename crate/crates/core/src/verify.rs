//! Verification suites: planner and solver sweeps against the oracle,
//! reduction fixtures, Dodgson bounds, shared budgets and maximin
//! monotonicity.
//!
//! Each suite returns a [`SuiteReport`] of named checks with case and
//! failure counts. Sweeps are split across worker threads; results are
//! merged in input order, so reports are deterministic for a fixed seed.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::attack::{plan_greedy, route, Route, ROUTES};
use crate::control::{
    check_plan_goal, shared_to_separate, Budgets, ControlInstance, Goal, Prong, ProngSet, ResourceModel, WinnerModel,
};
use crate::dodgson::{dodgson_score_bfs, dodgson_score_exact, verify_sandwich};
use crate::election::{
    pairwise_tally, scores, winners, Alpha, Ballot, BallotKind, Candidate, CandidateId, Election, Rule, ScoringProtocol,
    SetOrder, Voter,
};
use crate::fpt::{fpt_solve, maximin_win_programs, orders, win_constraints_scoring, AnonymousProfile};
use crate::oracle::{solve_exhaustive, solve_exhaustive_with, BribeSpace, OracleEnvelope, OracleOptions};
use crate::reduction::{
    reduce_copeland1_av_to_llull_with, reduce_maximin_av_with, reduce_maximin_bv, reduce_maximin_bv_with,
    reduce_maximin_constructive_ac, reduce_maximin_constructive_ac_with, reduce_maximin_dv, reduce_maximin_dv_with,
    reduce_maximin_av, x3c_is_yes, X3CInstance,
};
use crate::sample::{random_election, random_instance, random_prongs, Shape};

const EXAMPLES: usize = 5;

/// One named property with its case and failure counts.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub cases: u64,
    pub failures: u64,
    /// The first few failing cases.
    pub examples: Vec<String>,
}

impl Check {
    pub fn new(name: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            cases: 0,
            failures: 0,
            examples: Vec::new(),
        }
    }

    pub fn record(&mut self, outcome: Result<(), String>) {
        self.cases += 1;
        if let Err(e) = outcome {
            self.failures += 1;
            if self.examples.len() < EXAMPLES {
                self.examples.push(e);
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.cases > 0 && self.failures == 0
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<Check>,
    pub seconds: f64,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(Check::passed)
    }

    pub fn cases(&self) -> u64 {
        self.checks.iter().map(|c| c.cases).sum()
    }

    pub fn failures(&self) -> u64 {
        self.checks.iter().map(|c| c.failures).sum()
    }

    /// Plain-text table, one row per check.
    pub fn table(&self) -> String {
        let w = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(5).max(5);
        let mut s = format!("{:<w$}  {:>8}  {:>8}  status\n", "check", "cases", "failed");
        for c in &self.checks {
            let status = if c.passed() { "ok" } else { "FAIL" };
            s += &format!("{:<w$}  {:>8}  {:>8}  {status}\n", c.name, c.cases, c.failures);
            for e in &c.examples {
                s += &format!("    {e}\n");
            }
        }
        s
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Dodgson,
    Table1,
    Golden,
    OracleVsGreedy,
    Fpt,
    Encoding,
    Reductions,
    Shared,
    Monotonicity,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::OracleVsGreedy,
        Suite::Fpt,
        Suite::Encoding,
        Suite::Reductions,
        Suite::Golden,
        Suite::Table1,
        Suite::Dodgson,
        Suite::Shared,
        Suite::Monotonicity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Dodgson => "dodgson",
            Suite::Table1 => "table1",
            Suite::Golden => "golden",
            Suite::OracleVsGreedy => "oracle-vs-greedy",
            Suite::Fpt => "fpt",
            Suite::Encoding => "encoding",
            Suite::Reductions => "reductions",
            Suite::Shared => "shared",
            Suite::Monotonicity => "monotonicity",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Suite::ALL.iter().map(|x| x.name()).collect();
                format!("unknown suite `{s}`, expected one of {}", names.join(", "))
            })
    }
}

/// Size caps and sample counts. Unset values take the defaults used by
/// the acceptance run.
#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub m: Option<usize>,
    pub n: Option<usize>,
    pub k: Option<usize>,
    pub rule: Option<Rule>,
    pub seed: u64,
    /// Random instances per configuration; `None` picks the suite default.
    pub samples: Option<usize>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            m: None,
            n: None,
            k: None,
            rule: None,
            seed: 2009,
            samples: None,
        }
    }
}

pub fn run_suite(suite: Suite, opts: &VerifyOptions) -> SuiteReport {
    let start = Instant::now();
    let checks = match suite {
        Suite::Dodgson => dodgson_suite(opts),
        Suite::Table1 => table1_suite(opts),
        Suite::Golden => golden_suite(),
        Suite::OracleVsGreedy => planner_suite(opts),
        Suite::Fpt => fpt_suite(opts),
        Suite::Encoding => encoding_suite(),
        Suite::Reductions => reduction_suite(opts),
        Suite::Shared => shared_suite(opts),
        Suite::Monotonicity => monotonicity_suite(opts),
    };
    SuiteReport {
        suite: suite.name().to_string(),
        checks,
        seconds: start.elapsed().as_secs_f64(),
    }
}

/// Maps `f` over `items` on all available cores, keeping input order.
fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(items.len().max(1));
    if workers <= 1 {
        return items.iter().map(&f).collect();
    }
    let chunk = items.len().div_ceil(workers);
    std::thread::scope(|s| {
        let handles: Vec<_> = items
            .chunks(chunk)
            .map(|part| s.spawn(|| part.iter().map(&f).collect::<Vec<R>>()))
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
    })
}

fn sweep<T: Sync>(check: &mut Check, items: &[T], f: impl Fn(&T) -> Result<(), String> + Sync) {
    for r in par_map(items, f) {
        check.record(r);
    }
}

fn rng(opts: &VerifyOptions, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(opts.seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

/// Non-decreasing sequences of length `size` over `0..kinds`.
pub fn multisets(kinds: usize, size: usize) -> Vec<Vec<usize>> {
    fn go(kinds: usize, size: usize, from: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for x in from..kinds {
            cur.push(x);
            go(kinds, size, x, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(kinds, size, 0, &mut Vec::new(), &mut out);
    out
}

fn all_ballots(kind: BallotKind, ids: &[CandidateId]) -> Vec<Ballot> {
    match kind {
        BallotKind::Order => orders(ids).into_iter().map(Ballot::Order).collect(),
        BallotKind::Approval => (0..1u32 << ids.len())
            .map(|mask| Ballot::Approval((0..ids.len()).map(|i| mask >> i & 1 == 1).collect()))
            .collect(),
    }
}

fn verdict(r: &crate::attack::AttackResult) -> &'static str {
    if r.is_plan() {
        "plan"
    } else {
        "impossible"
    }
}

fn describe(inst: &ControlInstance) -> String {
    crate::format::InstanceFile::from_instance(inst)
        .to_instance()
        .map(|i| serde_json::to_string(&crate::format::InstanceFile::from_instance(&i)).unwrap())
        .unwrap_or_else(|e| e.to_string())
}

// ---------------------------------------------------------------------------
// planners against the oracle

fn route_rules(r: &Route) -> Vec<Rule> {
    match r.rule {
        "plurality" => vec![Rule::Plurality],
        "condorcet" => vec![Rule::Condorcet],
        "approval" => vec![Rule::Approval],
        "copeland" => vec![Rule::Copeland(Alpha::ZERO), Rule::Copeland(Alpha::HALF), Rule::Copeland(Alpha::ONE)],
        "maximin" => vec![Rule::Maximin],
        _ => vec![Rule::OriginalLlull],
    }
}

fn rule_matches(filter: &Rule, r: &Route) -> bool {
    route_rules(r).iter().any(|x| std::mem::discriminant(x) == std::mem::discriminant(filter))
}

fn planner_agrees(inst: &ControlInstance, rule: &Rule, planner: &str) -> Result<(), String> {
    let ctx = || format!("{rule} {}", describe(inst));
    match route(inst, rule) {
        Some(r) if r.planner == planner => {}
        _ => return Err(format!("not routed to {planner}: {}", ctx())),
    }
    let got = plan_greedy(inst, rule).map_err(|e| format!("planner error {e}: {}", ctx()))?;
    let want = solve_exhaustive(inst, rule).map_err(|e| format!("oracle error {e}: {}", ctx()))?;
    if got.is_plan() != want.is_plan() {
        return Err(format!("planner {} oracle {}: {}", verdict(&got), verdict(&want), ctx()));
    }
    if let Some(p) = got.plan() {
        if !check_plan_goal(inst, p, rule).unwrap_or(false) {
            return Err(format!("plan fails re-verification: {}", ctx()));
        }
    }
    Ok(())
}

struct Family {
    nc: usize,
    na: usize,
    registered: Vec<usize>,
    unregistered: Vec<usize>,
    budgets: Vec<usize>,
}

/// Every ballot multiset within the caps. Budget vectors over `{0,1,2}`
/// cycle with the profile index; for the candidate-control routes every
/// budget vector is paired with every profile.
fn exhaustive_family(r: &Route) -> Vec<Family> {
    let adds = r.prongs.iter().any(|p| matches!(p, Prong::AddCandidates | Prong::AddCandidatesUnlimited));
    let av = r.prongs.contains(&Prong::AddVoters);
    let priced: Vec<Prong> = r.prongs.iter().copied().filter(|&p| p != Prong::AddCandidatesUnlimited).collect();
    let kind = if r.rule == "approval" { BallotKind::Approval } else { BallotKind::Order };
    let full_budgets = matches!(r.rule, "copeland" | "maximin");
    let combos = 3usize.pow(priced.len() as u32);
    let mut out = Vec::new();
    for total in 2..=3usize {
        for na in 0..=(if adds { 2.min(total - 1) } else { 0 }) {
            let nc = total - na;
            let ids: Vec<CandidateId> = (0..total as u32).map(CandidateId).collect();
            let kinds = all_ballots(kind, &ids).len();
            let mut index = 0usize;
            for nv in 0..=5usize {
                for nw in 0..=(if av { 5 - nv } else { 0 }) {
                    for v in multisets(kinds, nv) {
                        for w in multisets(kinds, nw) {
                            let picks: Vec<usize> = if full_budgets { (0..combos).collect() } else { vec![index % combos] };
                            index += 1;
                            for pick in picks {
                                let budgets = (0..priced.len()).map(|i| pick / 3usize.pow(i as u32) % 3).collect();
                                out.push(Family {
                                    nc,
                                    na,
                                    registered: v.clone(),
                                    unregistered: w.clone(),
                                    budgets,
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

fn family_instance(r: &Route, f: &Family) -> ControlInstance {
    let kind = if r.rule == "approval" { BallotKind::Approval } else { BallotKind::Order };
    let mut candidates = vec![Candidate::new(0, "p")];
    candidates.extend((1..f.nc as u32).map(|i| Candidate::new(i, format!("c{i}"))));
    let spoilers: Vec<Candidate> = (0..f.na as u32).map(|i| Candidate::new(f.nc as u32 + i, format!("a{}", i + 1))).collect();
    let ids: Vec<CandidateId> = (0..(f.nc + f.na) as u32).map(CandidateId).collect();
    let ballots = all_ballots(kind, &ids);
    let voters = |prefix: &str, picks: &[usize]| -> Vec<Voter> {
        picks.iter().enumerate().map(|(i, &b)| Voter::new(format!("{prefix}{}", i + 1), ballots[b].clone())).collect()
    };
    let prongs = ProngSet::new(r.prongs.iter().copied());
    let mut budgets = Budgets::default();
    let priced = r.prongs.iter().copied().filter(|&p| p != Prong::AddCandidatesUnlimited);
    for (p, &b) in priced.zip(&f.budgets) {
        budgets.set(p, b);
    }
    if prongs.contains(Prong::AddCandidatesUnlimited) {
        budgets.ac = f.na;
    }
    ControlInstance {
        candidates,
        spoilers,
        registered: voters("v", &f.registered),
        unregistered: voters("w", &f.unregistered),
        focus: CandidateId(0),
        budgets,
        goal: r.goal,
        winner_model: WinnerModel::Unique,
        resource_model: ResourceModel::Separate,
        prongs,
    }
}

fn random_route_instance<R: Rng>(rng: &mut R, r: &Route) -> ControlInstance {
    let prongs = random_prongs(rng, r.prongs);
    let adds = prongs.adds_candidates();
    let llull = r.rule == "llull";
    let mut shape = Shape::new(rng.gen_range(1..=3), rng.gen_range(1..=5), &[], r.goal);
    shape.prongs = prongs.clone();
    shape.spoilers = if adds { rng.gen_range(0..=2) } else { 0 };
    if shape.candidates + shape.spoilers > 4 {
        shape.spoilers = 4 - shape.candidates;
    }
    shape.unregistered = rng.gen_range(0..=2).min(6 - shape.registered);
    if r.rule == "approval" {
        shape.kind = BallotKind::Approval;
    }
    if r.nonunique && rng.gen_bool(0.5) {
        shape.winner_model = WinnerModel::Nonunique;
    }
    if !llull && rng.gen_bool(0.2) {
        shape.resource_model = ResourceModel::Shared(rng.gen_range(0..=3));
    }
    let mut inst = random_instance(rng, &shape);
    if llull {
        let mut names: Vec<String> = inst.universe().into_iter().map(|c| c.name).collect();
        names.extend(["x1".to_string(), "x2".to_string()]);
        names.shuffle(rng);
        for (v, n) in inst.registered.iter_mut().chain(inst.unregistered.iter_mut()).zip(names) {
            v.name = n;
        }
    }
    inst
}

fn planner_suite(opts: &VerifyOptions) -> Vec<Check> {
    let samples = opts.samples.unwrap_or(1000);
    let mut checks = Vec::new();
    for (ri, r) in ROUTES.iter().enumerate() {
        if let Some(f) = &opts.rule {
            if !rule_matches(f, r) {
                continue;
            }
        }
        let rules: Vec<Rule> = match &opts.rule {
            Some(f) if r.rule == "copeland" => vec![f.clone()],
            _ => route_rules(r),
        };
        if r.rule != "llull" {
            let family = exhaustive_family(r);
            for rule in &rules {
                let mut c = Check::new(format!("{} exhaustive {rule}", r.planner));
                sweep(&mut c, &family, |f| planner_agrees(&family_instance(r, f), rule, r.planner));
                checks.push(c);
            }
        }
        for rule in &rules {
            let mut g = rng(opts, 100 + ri as u64);
            let insts: Vec<ControlInstance> = (0..samples).map(|_| random_route_instance(&mut g, r)).collect();
            let mut c = Check::new(format!("{} random {rule}", r.planner));
            sweep(&mut c, &insts, |i| planner_agrees(i, rule, r.planner));
            checks.push(c);
        }
    }
    checks
}

// ---------------------------------------------------------------------------
// integer-feasibility solver against the oracle

fn fpt_agrees(inst: &ControlInstance, rule: &Rule) -> Result<(), String> {
    let ctx = || format!("{rule} {}", describe(inst));
    let got = fpt_solve(inst, rule).map_err(|e| format!("fpt error {e}: {}", ctx()))?;
    let want = solve_exhaustive(inst, rule).map_err(|e| format!("oracle error {e}: {}", ctx()))?;
    if got.is_plan() != want.is_plan() {
        return Err(format!("fpt {} oracle {}: {}", verdict(&got), verdict(&want), ctx()));
    }
    if let Some(p) = got.plan() {
        if !check_plan_goal(inst, p, rule).unwrap_or(false) {
            return Err(format!("plan fails re-verification: {}", ctx()));
        }
    }
    Ok(())
}

fn random_fpt_instance<R: Rng>(rng: &mut R, goal: Goal) -> ControlInstance {
    const ALL: [Prong; 5] = [
        Prong::AddCandidates,
        Prong::DeleteCandidates,
        Prong::AddVoters,
        Prong::DeleteVoters,
        Prong::Bribe,
    ];
    let nc = rng.gen_range(1..=3);
    let nv = rng.gen_range(0..=5);
    let mut shape = Shape::new(nc, nv, &ALL, goal);
    shape.spoilers = rng.gen_range(0..=3 - nc);
    shape.unregistered = rng.gen_range(0..=5 - nv);
    if rng.gen_bool(0.5) {
        shape.winner_model = WinnerModel::Nonunique;
    }
    if rng.gen_bool(0.2) {
        shape.resource_model = ResourceModel::Shared(rng.gen_range(0..=3));
    }
    random_instance(rng, &shape)
}

fn fpt_suite(opts: &VerifyOptions) -> Vec<Check> {
    let samples = opts.samples.unwrap_or(2000);
    let rules = match &opts.rule {
        Some(r) => vec![r.clone()],
        None => vec![Rule::Plurality, Rule::Maximin],
    };
    let mut checks = Vec::new();
    for (ri, rule) in rules.iter().enumerate() {
        for (gi, goal) in [Goal::Constructive, Goal::Destructive].into_iter().enumerate() {
            let mut g = rng(opts, 200 + 2 * ri as u64 + gi as u64);
            let insts: Vec<ControlInstance> = (0..samples).map(|_| random_fpt_instance(&mut g, goal)).collect();
            let name = format!("fpt {rule} {}", goal_name(goal));
            let mut c = Check::new(name);
            sweep(&mut c, &insts, |i| fpt_agrees(i, rule));
            checks.push(c);
        }
    }
    checks
}

fn goal_name(g: Goal) -> &'static str {
    match g {
        Goal::Constructive => "constructive",
        Goal::Destructive => "destructive",
    }
}

// ---------------------------------------------------------------------------
// winner encodings at a point

fn encoding_suite() -> Vec<Check> {
    let k: Vec<CandidateId> = (0..3).map(CandidateId).collect();
    let names: Vec<Candidate> = k.iter().map(|c| Candidate::new(c.0, format!("c{}", c.0))).collect();
    let mut profiles = Vec::new();
    for total in 0..=4 {
        for picks in multisets(6, total) {
            let mut p = AnonymousProfile::new(&k);
            for i in picks {
                p.counts[i] += 1;
            }
            profiles.push(p);
        }
    }
    let vectors: Vec<(Rule, Vec<u64>)> = vec![
        (Rule::Plurality, vec![1, 0, 0]),
        (Rule::Scoring(ScoringProtocol::Veto), vec![1, 1, 0]),
        (Rule::Scoring(ScoringProtocol::Borda), vec![2, 1, 0]),
        (Rule::Scoring(ScoringProtocol::Vector(vec![5, 2, 0])), vec![5, 2, 0]),
    ];
    let mut scoring = Check::new("scoring rows at the count vector");
    let mut maximin = Check::new("maximin programs at the count vector");
    for p in &profiles {
        let e = p.materialize(&names).expect("profile materializes");
        let point: Vec<i64> = p.counts.iter().map(|&c| c as i64).collect();
        for &t in &k {
            for model in [WinnerModel::Unique, WinnerModel::Nonunique] {
                let expect = |rule: &Rule| -> bool {
                    let w = winners(&e, rule).unwrap();
                    match model {
                        WinnerModel::Unique => w.len() == 1 && w.contains(&t),
                        WinnerModel::Nonunique => w.contains(&t),
                    }
                };
                for (rule, v) in &vectors {
                    let sys = win_constraints_scoring(v, &k, t, model, 4).unwrap();
                    let got = sys.satisfied_by(&point);
                    scoring.record(if got == expect(rule) {
                        Ok(())
                    } else {
                        Err(format!("{rule} target {t} {model:?} counts {:?}: rows say {got}", p.counts))
                    });
                }
                let programs = maximin_win_programs(&k, t, model, 4).unwrap();
                let got = programs.iter().any(|s| s.satisfied_by(&point));
                maximin.record(if got == expect(&Rule::Maximin) {
                    Ok(())
                } else {
                    Err(format!("maximin target {t} {model:?} counts {:?}: programs say {got}", p.counts))
                });
            }
        }
    }
    vec![scoring, maximin]
}

// ---------------------------------------------------------------------------
// reductions

/// Every family of distinct 3-subsets of `ground` with at most `max_n`
/// members, smaller families first.
pub fn x3c_families(ground: &[u32], max_n: usize) -> Vec<X3CInstance> {
    let triples = triples(ground);
    let mut out = Vec::new();
    for n in 0..=max_n.min(triples.len()) {
        combinations(triples.len(), n, &mut |pick| {
            let sets = pick.iter().map(|&i| triples[i].clone()).collect();
            out.push(X3CInstance::new(ground.to_vec(), sets).expect("valid family"));
        });
    }
    out
}

fn triples(ground: &[u32]) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    combinations(ground.len(), 3, &mut |p| out.push(p.iter().map(|&i| ground[i]).collect()));
    out
}

fn combinations(n: usize, k: usize, emit: &mut dyn FnMut(&[usize])) {
    fn go(n: usize, k: usize, from: usize, cur: &mut Vec<usize>, emit: &mut dyn FnMut(&[usize])) {
        if cur.len() == k {
            emit(cur);
            return;
        }
        for i in from..n {
            cur.push(i);
            go(n, k, i + 1, cur, emit);
            cur.pop();
        }
    }
    go(n, k, 0, &mut Vec::new(), emit);
}

/// A random family of `n` distinct triples over `1..=3k`. Half of the
/// families contain a planted exact cover.
fn random_family<R: Rng>(rng: &mut R, k: usize, n: usize) -> X3CInstance {
    let ground: Vec<u32> = (1..=3 * k as u32).collect();
    let mut sets: Vec<Vec<u32>> = Vec::new();
    if rng.gen_bool(0.5) {
        let mut g = ground.clone();
        g.shuffle(rng);
        for c in g.chunks(3) {
            let mut s = c.to_vec();
            s.sort_unstable();
            sets.push(s);
        }
    }
    let all = triples(&ground);
    while sets.len() < n {
        let s = all.choose(rng).unwrap().clone();
        if !sets.contains(&s) {
            sets.push(s);
        }
    }
    sets.shuffle(rng);
    X3CInstance::new(ground, sets).expect("valid family")
}

fn unbounded(bribes: BribeSpace) -> OracleOptions {
    OracleOptions {
        envelope: OracleEnvelope::unbounded(),
        bribes,
    }
}

fn reduction_agrees(
    x: &X3CInstance,
    build: impl Fn(&X3CInstance) -> Result<ControlInstance, crate::reduction::ReductionError>,
    opts: &OracleOptions,
) -> Result<(), String> {
    let ctx = || crate::format::x3c_to_json(x);
    let yes = x3c_is_yes(x).map_err(|e| format!("{e}: {}", ctx()))?;
    let inst = build(x).map_err(|e| format!("{e}: {}", ctx()))?;
    let r = solve_exhaustive_with(&inst, &Rule::Maximin, opts).map_err(|e| format!("oracle error {e}: {}", ctx()))?;
    if r.is_plan() != yes {
        return Err(format!("exact cover {yes}, oracle {}: {}", verdict(&r), ctx()));
    }
    Ok(())
}

fn order_name(o: SetOrder) -> &'static str {
    match o {
        SetOrder::Ascending => "ascending",
        SetOrder::Descending => "descending",
    }
}

fn reduction_suite(opts: &VerifyOptions) -> Vec<Check> {
    let samples = opts.samples.unwrap_or(1500);
    let mut checks = Vec::new();
    let any = unbounded(BribeSpace::Any);
    let mut small = x3c_families(&[1, 2, 3], 1);
    small.extend(x3c_families(&[1, 2, 3, 4, 5, 6], 3));
    let bv_family = {
        let mut f = x3c_families(&[1, 2, 3, 4, 5, 6], 3);
        f.retain(|x| x.n() == 3);
        f
    };
    for order in [SetOrder::Ascending, SetOrder::Descending] {
        let o = order_name(order);
        let mut c = Check::new(format!("maximin-ac constructive 3k<=6 {o}"));
        sweep(&mut c, &small, |x| reduction_agrees(x, |x| reduce_maximin_constructive_ac_with(x, order), &any));
        checks.push(c);
        for goal in [Goal::Constructive, Goal::Destructive] {
            let g = goal_name(goal);
            let mut c = Check::new(format!("maximin-av {g} 3k<=6 {o}"));
            let nonempty: Vec<X3CInstance> = small.iter().filter(|x| x.k >= 1).cloned().collect();
            sweep(&mut c, &nonempty, |x| reduction_agrees(x, |x| reduce_maximin_av_with(x, goal, order), &any));
            checks.push(c);

            let per = if order == SetOrder::Ascending { samples } else { samples / 5 };
            for n in [3usize, 4] {
                let mut g_rng = rng(opts, 300 + n as u64 + 10 * (goal as u64) + 100 * (order as u64));
                let family: Vec<X3CInstance> = (0..per).map(|_| random_family(&mut g_rng, 3, n)).collect();
                let mut c = Check::new(format!("maximin-dv {g} k=3 n={n} {o}"));
                sweep(&mut c, &family, |x| reduction_agrees(x, |x| reduce_maximin_dv_with(x, goal, order), &any));
                checks.push(c);
            }

            let lift = unbounded(BribeSpace::LiftToTop(CandidateId(0)));
            let mut c = Check::new(format!("maximin-bv {g} k=2 n=3 lift-p {o}"));
            sweep(&mut c, &bv_family, |x| reduction_agrees(x, |x| reduce_maximin_bv_with(x, goal, order), &lift));
            checks.push(c);
        }
        let mut c = Check::new(format!("llull padding double oracle {o}"));
        sweep(&mut c, &copeland_av_family(), |i| llull_agrees(i, order));
        checks.push(c);
    }
    checks.push(bv_spot_check());
    checks
}

/// Unrestricted-neighbourhood bribery on one yes and one no instance.
fn bv_spot_check() -> Check {
    let mut c = Check::new("maximin-bv constructive single-move spot check");
    let yes = X3CInstance::new(vec![1, 2, 3, 4, 5, 6], vec![vec![1, 2, 3], vec![4, 5, 6], vec![1, 2, 4]]).unwrap();
    let no = X3CInstance::new(vec![1, 2, 3, 4, 5, 6], vec![vec![1, 2, 3], vec![3, 4, 5], vec![1, 2, 4]]).unwrap();
    let single = unbounded(BribeSpace::SingleMove);
    for x in [yes, no] {
        c.record(reduction_agrees(&x, |x| reduce_maximin_bv(x, Goal::Constructive), &single));
    }
    c
}

/// Copeland¹ voter-addition instances with `|C| ≤ 3`, `|V| ≤ 3`, `|W| ≤ 2`
/// and every budget up to `|W|`.
fn copeland_av_family() -> Vec<ControlInstance> {
    let mut out = Vec::new();
    for m in 1..=3u32 {
        let ids: Vec<CandidateId> = (0..m).map(CandidateId).collect();
        let ballots = all_ballots(BallotKind::Order, &ids);
        let candidates: Vec<Candidate> = (0..m).map(|i| Candidate::new(i, if i == 0 { "p".into() } else { format!("c{i}") })).collect();
        for nv in 1..=3 {
            for v in multisets(ballots.len(), nv) {
                for nw in 0..=2 {
                    for w in multisets(ballots.len(), nw) {
                        for k in 0..=nw {
                            let named = |prefix: &str, picks: &[usize]| -> Vec<Voter> {
                                picks.iter().enumerate().map(|(i, &b)| Voter::new(format!("{prefix}{}", i + 1), ballots[b].clone())).collect()
                            };
                            out.push(ControlInstance {
                                candidates: candidates.clone(),
                                spoilers: vec![],
                                registered: named("v", &v),
                                unregistered: named("w", &w),
                                focus: CandidateId(0),
                                budgets: Budgets { av: k, ..Budgets::default() },
                                goal: Goal::Constructive,
                                winner_model: WinnerModel::Unique,
                                resource_model: ResourceModel::Separate,
                                prongs: ProngSet::new([Prong::AddVoters]),
                            });
                        }
                    }
                }
            }
        }
    }
    out
}

fn llull_agrees(inst: &ControlInstance, order: SetOrder) -> Result<(), String> {
    let ctx = || describe(inst);
    let opts = unbounded(BribeSpace::Any);
    let copeland = solve_exhaustive_with(inst, &Rule::Copeland(Alpha::ONE), &opts).map_err(|e| format!("{e}: {}", ctx()))?;
    let padded = reduce_copeland1_av_to_llull_with(inst, order).map_err(|e| format!("{e}: {}", ctx()))?;
    let llull = solve_exhaustive_with(&padded, &Rule::OriginalLlull, &opts).map_err(|e| format!("{e}: {}", ctx()))?;
    if copeland.is_plan() != llull.is_plan() {
        return Err(format!("copeland {} llull {}: {}", verdict(&copeland), verdict(&llull), ctx()));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// golden tallies

fn cell(e: &Election, a: CandidateId, b: CandidateId) -> u32 {
    pairwise_tally(e, a, b).expect("candidates present")
}

/// The X3C instance over `1..=3k` whose sets are the first `n` triples in
/// lexicographic order after a planted exact cover.
pub fn covered_family(n: usize, k: usize) -> Option<X3CInstance> {
    let ground: Vec<u32> = (1..=3 * k as u32).collect();
    let mut sets: Vec<Vec<u32>> = ground.chunks(3).map(<[u32]>::to_vec).collect();
    for t in triples(&ground) {
        if sets.len() >= n {
            break;
        }
        if !sets.contains(&t) {
            sets.push(t);
        }
    }
    if sets.len() < n || n < k {
        return None;
    }
    sets.truncate(n);
    X3CInstance::new(ground, sets).ok()
}

/// Closed-form pairwise cells of the bribery elections: the twelve entries among
/// `p, d, s` and the `B` row and column, then the `B`–`B` entry.
fn table1_checks(n: usize, k: usize) -> Vec<Check> {
    let mut checks = Vec::new();
    let Some(x) = covered_family(n, k) else {
        let mut c = Check::new(format!("table1 n={n} k={k}"));
        c.record(Err("no exact-cover family with these parameters".into()));
        return vec![c];
    };
    let (n, k) = (n as u32, k as u32);
    let (p, d, s) = (CandidateId(0), CandidateId(1), CandidateId(2));
    for goal in [Goal::Constructive, Goal::Destructive] {
        let label = if goal == Goal::Constructive { "E_c" } else { "E_d" };
        let mut c = Check::new(format!("table1 {label} n={n} k={k} cells"));
        let inst = match reduce_maximin_bv(&x, goal) {
            Ok(i) => i,
            Err(e) => {
                c.record(Err(e.to_string()));
                checks.push(c);
                continue;
            }
        };
        let e = inst.base_election();
        let b: Vec<CandidateId> = (3..3 + 3 * k).map(CandidateId).collect();
        let c6 = u32::from(goal == Goal::Constructive);
        // (row, column, value) with column or row `None` standing for every b_i
        let table: [(Option<CandidateId>, Option<CandidateId>, u32); 12] = [
            (Some(p), Some(d), n + 3 * k + 1 + c6),
            (Some(p), Some(s), n + 3 * k + 1 + c6),
            (Some(p), None, n + 4 * k + c6),
            (Some(d), Some(p), n + 5 * k + 1),
            (Some(d), Some(s), 2 * n + 4 * k + 1 + c6),
            (Some(d), None, n + 6 * k + 1 + c6),
            (Some(s), Some(p), n + 5 * k + 1),
            (Some(s), Some(d), 4 * k + 1),
            (Some(s), None, n + 4 * k + 1 + c6),
            (None, Some(p), n + 4 * k + 2),
            (None, Some(d), n + 2 * k + 1),
            (None, Some(s), n + 4 * k + 1),
        ];
        let name = |x: Option<CandidateId>| match x {
            Some(x) if x == p => "p",
            Some(x) if x == d => "d",
            Some(_) => "s",
            None => "B",
        };
        for (row, col, want) in table {
            let pairs: Vec<(CandidateId, CandidateId)> = match (row, col) {
                (Some(r), Some(c)) => vec![(r, c)],
                (Some(r), None) => b.iter().map(|&x| (r, x)).collect(),
                (None, Some(c)) => b.iter().map(|&x| (x, c)).collect(),
                (None, None) => unreachable!(),
            };
            let bad: Vec<u32> = pairs.iter().map(|&(a, z)| cell(&e, a, z)).filter(|&v| v != want).collect();
            c.record(if bad.is_empty() {
                Ok(())
            } else {
                Err(format!("N({}, {}) expected {want}, found {bad:?}", name(row), name(col)))
            });
        }
        checks.push(c);
        let mut bb = Check::new(format!("table1 {label} n={n} k={k} B-B"));
        for &x in &b {
            for &y in &b {
                if x != y {
                    let v = cell(&e, x, y);
                    let ok = if goal == Goal::Constructive { v <= n + 4 * k + 2 } else { v == n + 4 * k + 1 };
                    bb.record(if ok { Ok(()) } else { Err(format!("N({x}, {y}) = {v}")) });
                }
            }
        }
        checks.push(bb);
    }
    checks
}

fn table1_suite(opts: &VerifyOptions) -> Vec<Check> {
    table1_checks(opts.n.unwrap_or(3), opts.k.unwrap_or(2))
}

fn expect_score(c: &mut Check, e: &Election, who: CandidateId, label: &str, want: i64) {
    let got = scores(e, &Rule::Maximin).ok().and_then(|s| s.get(&who).copied());
    c.record(if got == Some(Ratio::from_integer(want)) {
        Ok(())
    } else {
        Err(format!("{label}: expected {want}, found {got:?}"))
    });
}

fn golden_suite() -> Vec<Check> {
    let mut checks = Vec::new();
    for (n, k) in [(3, 2), (4, 2), (4, 3)] {
        checks.extend(table1_checks(n, k));
    }
    let (p, d) = (CandidateId(0), CandidateId(1));
    let mut bv = Check::new("bv pre-bribery scores");
    for (n, k) in [(3, 2), (4, 2), (4, 3)] {
        if let Some(inst) = covered_family(n, k).and_then(|x| reduce_maximin_bv(&x, Goal::Constructive).ok()) {
            let e = inst.base_election();
            expect_score(&mut bv, &e, p, &format!("n={n} k={k} score(p)"), (n + 3 * k + 2) as i64);
            expect_score(&mut bv, &e, d, &format!("n={n} k={k} score(d)"), (n + 5 * k + 1) as i64);
        } else {
            bv.record(Err(format!("n={n} k={k}: generator failed")));
        }
    }
    checks.push(bv);

    let mut av = Check::new("av scores before adding");
    for (n, k) in [(1, 1), (3, 2), (5, 3)] {
        let x = covered_family(n, k).expect("family");
        match (reduce_maximin_av(&x, Goal::Constructive), reduce_maximin_av(&x, Goal::Destructive)) {
            (Ok(c), Ok(dd)) => {
                expect_score(&mut av, &c.base_election(), p, &format!("k={k} constructive p"), 2 * k as i64);
                expect_score(&mut av, &dd.base_election(), d, &format!("k={k} destructive d"), 2 * k as i64);
                expect_score(&mut av, &dd.base_election(), p, &format!("k={k} destructive p"), 2 * k as i64 - 1);
            }
            _ => av.record(Err(format!("n={n} k={k}: generator failed"))),
        }
    }
    checks.push(av);

    let mut dv = Check::new("dv scores before deleting");
    for (n, k) in [(3, 3), (4, 3), (6, 4)] {
        let x = covered_family(n, k).expect("family");
        match (reduce_maximin_dv(&x, Goal::Constructive), reduce_maximin_dv(&x, Goal::Destructive)) {
            (Ok(c), Ok(dd)) => {
                let (n, k) = (n as i64, k as i64);
                expect_score(&mut dv, &c.base_election(), d, &format!("n={n} k={k} constructive d"), 2 * n);
                expect_score(&mut dv, &c.base_election(), p, &format!("n={n} k={k} constructive p"), 2 * n - k + 2);
                expect_score(&mut dv, &dd.base_election(), d, &format!("n={n} k={k} destructive d"), 2 * n);
                expect_score(&mut dv, &dd.base_election(), p, &format!("n={n} k={k} destructive p"), 2 * n - k);
            }
            _ => dv.record(Err(format!("n={n} k={k}: generator failed"))),
        }
    }
    checks.push(dv);

    let mut ac = Check::new("ac scores after adding a cover");
    for (n, k) in [(1, 1), (3, 2), (4, 2), (5, 3)] {
        let x = covered_family(n, k).expect("family");
        let Ok(inst) = reduce_maximin_constructive_ac(&x) else {
            ac.record(Err(format!("n={n} k={k}: generator failed")));
            continue;
        };
        // the planted cover is the first k sets
        let added: Vec<CandidateId> = inst.spoilers[..k].iter().map(|c| c.id).collect();
        let keep: BTreeSet<CandidateId> = inst.candidates.iter().map(|c| c.id).chain(added.iter().copied()).collect();
        let e = Election::new(inst.universe(), inst.registered.clone()).unwrap().restrict(&keep).unwrap();
        expect_score(&mut ac, &e, p, &format!("n={n} k={k} score(p)"), n as i64 + 1);
        for &a in &added {
            expect_score(&mut ac, &e, a, &format!("n={n} k={k} score({a})"), n as i64);
        }
    }
    checks.push(ac);
    checks
}

// ---------------------------------------------------------------------------
// Dodgson bounds

fn profile_election(m: usize, picks: &[usize]) -> Election {
    let ids: Vec<CandidateId> = (0..m as u32).map(CandidateId).collect();
    let ords = orders(&ids);
    let cands = ids.iter().map(|c| Candidate::new(c.0, format!("c{}", c.0))).collect();
    let voters = picks.iter().enumerate().map(|(i, &o)| Voter::new(format!("v{}", i + 1), Ballot::Order(ords[o].clone()))).collect();
    Election::new(cands, voters).expect("profile is well formed")
}

fn sandwich_holds(e: &Election, bfs: bool) -> Result<(), String> {
    let ctx = || {
        let rows: Vec<String> = e.voters().iter().map(|v| format!("{:?}", v.ballot.order().unwrap())).collect();
        rows.join(" ")
    };
    let r = verify_sandwich(e).map_err(|err| format!("{err}: {}", ctx()))?;
    if !r.passed() {
        return Err(format!("sc' bound {:?} winner bound {:?}: {}", r.sc_prime_violations, r.winner_violations, ctx()));
    }
    if bfs && e.num_candidates() <= 4 {
        for c in e.candidate_ids() {
            let exact = dodgson_score_exact(e, c).map_err(|err| err.to_string())?;
            let oracle = dodgson_score_bfs(e, c).map_err(|err| err.to_string())?;
            if exact != oracle {
                return Err(format!("score of {c}: search {exact}, swap graph {oracle}: {}", ctx()));
            }
        }
    }
    Ok(())
}

fn dodgson_suite(opts: &VerifyOptions) -> Vec<Check> {
    let mut checks = Vec::new();
    let (m, n) = (opts.m.unwrap_or(3), opts.n.unwrap_or(3));
    let kinds: usize = (1..=m).product();
    let profiles: Vec<Vec<usize>> = multisets(kinds, n);
    let mut c = Check::new(format!("exhaustive m={m} n={n}"));
    sweep(&mut c, &profiles, |p| sandwich_holds(&profile_election(m, p), true));
    checks.push(c);
    if opts.m.is_none() && opts.n.is_none() {
        let samples = opts.samples.unwrap_or(500);
        for n in [3usize, 5, 7] {
            let mut g = rng(opts, 400 + n as u64);
            let elections: Vec<Election> = (0..samples).map(|_| random_election(&mut g, 4, n)).collect();
            let mut c = Check::new(format!("random m=4 n={n}"));
            sweep(&mut c, &elections, |e| sandwich_holds(e, true));
            checks.push(c);
        }
    }
    checks
}

// ---------------------------------------------------------------------------
// shared budgets

fn random_shared_instance<R: Rng>(rng: &mut R) -> (ControlInstance, Rule) {
    const POOL: [Prong; 5] = [
        Prong::AddCandidates,
        Prong::DeleteCandidates,
        Prong::AddVoters,
        Prong::DeleteVoters,
        Prong::Bribe,
    ];
    let two: Vec<Prong> = POOL.choose_multiple(rng, 2).copied().collect();
    let rule = [Rule::Plurality, Rule::Maximin, Rule::Copeland(Alpha::HALF), Rule::Approval, Rule::Scoring(ScoringProtocol::Borda)]
        .choose(rng)
        .unwrap()
        .clone();
    let goal = if rng.gen_bool(0.5) { Goal::Constructive } else { Goal::Destructive };
    let mut shape = Shape::new(rng.gen_range(1..=3), rng.gen_range(1..=4), &two, goal);
    shape.spoilers = rng.gen_range(1..=2);
    shape.unregistered = rng.gen_range(1..=2);
    if rule == Rule::Approval {
        shape.kind = BallotKind::Approval;
    }
    if rng.gen_bool(0.5) {
        shape.winner_model = WinnerModel::Nonunique;
    }
    shape.resource_model = ResourceModel::Shared(rng.gen_range(0..=3));
    (random_instance(rng, &shape), rule)
}

fn shared_agrees(inst: &ControlInstance, rule: &Rule) -> Result<(), String> {
    let ctx = || format!("{rule} {}", describe(inst));
    let shared = solve_exhaustive(inst, rule).map_err(|e| format!("{e}: {}", ctx()))?;
    let mut any = false;
    for sep in shared_to_separate(inst) {
        if solve_exhaustive(&sep, rule).map_err(|e| format!("{e}: {}", ctx()))?.is_plan() {
            any = true;
            break;
        }
    }
    if shared.is_plan() != any {
        return Err(format!("shared {} separate {any}: {}", verdict(&shared), ctx()));
    }
    Ok(())
}

fn shared_suite(opts: &VerifyOptions) -> Vec<Check> {
    let mut g = rng(opts, 500);
    let cases: Vec<(ControlInstance, Rule)> = (0..opts.samples.unwrap_or(300)).map(|_| random_shared_instance(&mut g)).collect();
    let mut c = Check::new("shared equals some separate split");
    sweep(&mut c, &cases, |(i, r)| shared_agrees(i, r));
    vec![c]
}

// ---------------------------------------------------------------------------
// maximin monotonicity and Copeland decomposition

fn maximin_scores(e: &Election) -> std::collections::BTreeMap<CandidateId, Ratio<i64>> {
    scores(e, &Rule::Maximin).expect("maximin scores")
}

fn monotonicity_suite(opts: &VerifyOptions) -> Vec<Check> {
    let samples = opts.samples.unwrap_or(1000);
    let mut g = rng(opts, 600);
    let mut add = Check::new("adding a candidate never raises a maximin score");
    let mut del = Check::new("deleting candidates never lowers a maximin score");
    let mut cope = Check::new("Copeland score is the sum of pairwise scores");
    for _ in 0..samples {
        let m = g.gen_range(2..=5);
        let n = g.gen_range(1..=7);
        let e = random_election(&mut g, m, n);
        let ids = e.candidate_ids();
        let extra = *ids.choose(&mut g).unwrap();
        let without: BTreeSet<CandidateId> = ids.iter().copied().filter(|&c| c != extra).collect();
        let before = maximin_scores(&e.restrict(&without).unwrap());
        let after = maximin_scores(&e);
        add.record(match without.iter().find(|c| after[c] > before[c]) {
            None => Ok(()),
            Some(c) => Err(format!("adding {extra} raised {c} from {} to {}", before[c], after[c])),
        });

        let n = g.gen_range(1..=7);
        let e = random_election(&mut g, m, n);
        let keep: BTreeSet<CandidateId> = loop {
            let k: BTreeSet<CandidateId> = ids.iter().copied().filter(|_| g.gen_bool(0.5)).collect();
            if !k.is_empty() && k.len() < ids.len() {
                break k;
            }
        };
        let before = maximin_scores(&e);
        let after = maximin_scores(&e.restrict(&keep).unwrap());
        del.record(match keep.iter().find(|c| after[c] < before[c]) {
            None => Ok(()),
            Some(c) => Err(format!("deleting down to {keep:?} lowered {c} from {} to {}", before[c], after[c])),
        });

        let n = g.gen_range(1..=7);
        let e = random_election(&mut g, m, n);
        let alpha = *[Alpha::ZERO, Alpha::HALF, Alpha::ONE].choose(&mut g).unwrap();
        let rule = Rule::Copeland(alpha);
        let total = scores(&e, &rule).unwrap();
        let bad = ids.iter().find(|&&c| {
            let sum: Ratio<i64> = ids
                .iter()
                .filter(|&&x| x != c)
                .map(|&x| scores(&e.restrict(&[c, x].into_iter().collect()).unwrap(), &rule).unwrap()[&c])
                .sum();
            sum != total[&c]
        });
        cope.record(match bad {
            None => Ok(()),
            Some(c) => Err(format!("copeland:{alpha} decomposition fails for {c}")),
        });
    }
    vec![add, del, cope]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiset_counts() {
        assert_eq!(multisets(6, 3).len(), 56);
        assert_eq!(multisets(3, 0), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn family_counts() {
        assert_eq!(x3c_families(&[1, 2, 3], 1).len(), 2);
        assert_eq!(x3c_families(&[1, 2, 3, 4, 5, 6], 3).len(), 1 + 20 + 190 + 1140);
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("bogus".parse::<Suite>().is_err());
    }

    #[test]
    fn table1_small() {
        let r = run_suite(Suite::Table1, &VerifyOptions::default());
        assert!(r.passed(), "{}", r.table());
        assert_eq!(r.checks[0].cases, 12);
    }
}
