use super::{with_separate, AttackError, AttackResult, Builder, Coverage, Move};
use crate::control::{ControlInstance, Goal, Prong};
use crate::election::{is_unique_winner, Alpha, CandidateId, PairwiseMatrix, Rule, Election};

const PRONGS: &[Prong] = &[Prong::AddCandidates, Prong::DeleteCandidates];

/// Destructive Copeland^α control by adding and deleting candidates.
///
/// A Copeland score is a sum of head-to-head scores, so for each rival `c`
/// the planner adds spoilers `c′` with the largest positive
/// `a(c′) = score({c,c′})(c) − score({d,c′})(d)` and deletes registered
/// candidates with the largest positive
/// `r(c′) = score({d,c′})(d) − score({c,c′})(c)`, smallest id first among
/// equal values.
pub fn copeland_destructive_ac_dc(inst: &ControlInstance, alpha: Alpha) -> Result<AttackResult, AttackError> {
    Coverage {
        name: "Copeland destructive AC+DC",
        goal: Goal::Destructive,
        prongs: PRONGS,
        covered: "AC+DC",
        nonunique: false,
    }
    .check(inst)?;
    with_separate(inst, |i| run(i, alpha))
}

fn run(inst: &ControlInstance, alpha: Alpha) -> Result<AttackResult, AttackError> {
    let rule = Rule::Copeland(alpha);
    let d = inst.focus;
    let start = Builder::new(inst);
    if !is_unique_winner(&start.election(), &rule, d)? {
        return start.finish(&rule);
    }
    let full = Election::new(inst.universe(), inst.registered.clone())?;
    let pw = PairwiseMatrix::from_election(&full);
    let (num, den) = (alpha.numer() as i64, alpha.denom() as i64);
    // head-to-head score of `x` against `y`, scaled by the denominator
    let h2h = |x: CandidateId, y: CandidateId| -> i64 {
        let (a, b) = (pw.get(x, y).unwrap(), pw.get(y, x).unwrap());
        match a.cmp(&b) {
            std::cmp::Ordering::Greater => den,
            std::cmp::Ordering::Equal => num,
            std::cmp::Ordering::Less => 0,
        }
    };
    let budgets = inst.effective_budgets();
    let mut rivals: Vec<CandidateId> = inst.universe_ids().into_iter().filter(|&c| c != d).collect();
    rivals.sort();
    for c in rivals {
        let mut b = Builder::new(inst);
        if inst.is_spoiler(c) {
            if budgets.ac == 0 {
                continue;
            }
            b.push(Move::AddCandidate(c));
        }
        let stop = |b: &Builder| -> Result<bool, AttackError> {
            Ok(!is_unique_winner(&b.election(), &rule, d)?)
        };
        while b.plan.add_candidates.len() < budgets.ac && !stop(&b)? {
            let best = inst
                .spoilers
                .iter()
                .map(|s| s.id)
                .filter(|&s| s != c && !b.plan.add_candidates.contains(&s))
                .map(|s| (h2h(c, s) - h2h(d, s), s))
                .filter(|&(gain, _)| gain > 0)
                .max_by(|x, y| x.0.cmp(&y.0).then(y.1.cmp(&x.1)));
            let Some((_, s)) = best else { break };
            b.push(Move::AddCandidate(s));
        }
        while b.plan.delete_candidates.len() < budgets.dc && !stop(&b)? {
            let best = inst
                .candidates
                .iter()
                .map(|x| x.id)
                .filter(|&x| x != c && x != d && !b.plan.delete_candidates.contains(&x))
                .map(|x| (h2h(d, x) - h2h(c, x), x))
                .filter(|&(gain, _)| gain > 0)
                .max_by(|x, y| x.0.cmp(&y.0).then(y.1.cmp(&x.1)));
            let Some((_, x)) = best else { break };
            b.push(Move::DeleteCandidate(x));
        }
        let r = b.finish(&rule)?;
        if r.is_plan() {
            return Ok(r);
        }
    }
    Ok(AttackResult::impossible())
}
