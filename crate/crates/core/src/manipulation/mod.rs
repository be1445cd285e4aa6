//! Coalitional manipulation: `r` manipulators each cast one ballot so that
//! the winning egroup is as valuable as possible for the coalition.
//!
//! Under ℓ-Bloc only the approval sets of the manipulative ballots matter,
//! and any approval vector with entries in `[0, r]` summing to `r·ℓ` is
//! realizable. Every solver therefore works on approval demands and turns
//! the winning demand vector into ballots at the end. Returned manipulations
//! are always re-simulated through [`winners`](crate::election::winners).

mod consistent;
mod egal;
mod egal_lex;
mod general;
mod knapsack;

use rayon::prelude::*;

pub use consistent::{cm_bloc, cm_consistent, strength_order};
pub use egal::{cm_egal, egal_states};
pub use egal_lex::cm_egal_lex;
pub use general::{cm_general, lex_states};
pub use knapsack::knapsack_exact_k;

use crate::election::{ballots_from_approvals, score, winners, Ballot, CandidateId, Egroup, Election, ScoreVector};
use crate::error::{Error, Result};
use crate::tiebreak::{simulate_lex, Behavior, LexOrder, TieRule};
use crate::utility::{contract, evaluate, EvalVariant, Utility, UtilityProfile};

/// A coalitional manipulation problem.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CmInstance {
    pub election: Election,
    pub ell: usize,
    pub k: usize,
    pub profile: UtilityProfile,
    pub variant: EvalVariant,
    pub rule: TieRule,
    /// Decision threshold; `None` asks for the best value only.
    pub threshold: Option<Utility>,
}

impl CmInstance {
    pub fn new(
        election: Election,
        ell: usize,
        k: usize,
        profile: UtilityProfile,
        variant: EvalVariant,
        rule: TieRule,
    ) -> Result<Self> {
        let m = election.num_candidates();
        if ell == 0 || ell >= m {
            return Err(Error::InvalidParameter(format!("ell must satisfy 1 <= ell < m = {m}, got {ell}")));
        }
        if k == 0 || k >= m {
            return Err(Error::InvalidParameter(format!("k must satisfy 1 <= k < m = {m}, got {k}")));
        }
        if profile.num_candidates() != m {
            return Err(Error::InvalidParameter(format!(
                "utility profile covers {} candidates, election has {m}",
                profile.num_candidates()
            )));
        }
        match &rule {
            TieRule::Lexicographic(order) if order.len() != m => {
                return Err(Error::InvalidParameter(format!(
                    "lexicographic order has {} candidates, election has {m}",
                    order.len()
                )));
            }
            TieRule::Optimistic(v) | TieRule::Pessimistic(v) if *v != variant => {
                return Err(Error::UnsupportedVariant(format!(
                    "tie-breaking by {v} while the coalition evaluates by {variant}"
                )));
            }
            _ => {}
        }
        Ok(CmInstance { election, ell, k, profile, variant, rule, threshold: None })
    }

    pub fn with_threshold(mut self, threshold: Option<Utility>) -> Self {
        self.threshold = threshold;
        self
    }

    pub fn num_manipulators(&self) -> usize {
        self.profile.num_manipulators()
    }

    pub fn num_candidates(&self) -> usize {
        self.election.num_candidates()
    }

    pub fn base_scores(&self) -> ScoreVector {
        score(&self.election, self.ell).expect("ell validated at construction")
    }

    /// Winning egroup and its value once `ballots` are added.
    pub fn outcome(&self, ballots: &[Ballot]) -> Result<(Egroup, Utility)> {
        let election = self.election.with_extra_ballots(ballots);
        let egroup = winners(&election, self.ell, self.k, &self.rule, Some(&self.profile))?;
        let value = evaluate(&self.profile, &egroup, self.variant)?;
        Ok((egroup, value))
    }

    /// The lexicographic order that decides ties for a contractible
    /// evaluation: the rule's own order, or the simulator's for optimistic
    /// and pessimistic rules.
    pub(crate) fn lex_equivalent(&self) -> Result<LexOrder> {
        match &self.rule {
            TieRule::Lexicographic(order) => Ok(order.clone()),
            TieRule::Optimistic(v) => simulate_lex(&self.profile, *v, Behavior::Optimistic),
            TieRule::Pessimistic(v) => simulate_lex(&self.profile, *v, Behavior::Pessimistic),
        }
    }

    pub(crate) fn value_row(&self) -> Result<Vec<Utility>> {
        contract(&self.profile, self.variant)
    }

    pub(crate) fn max_row_total(&self) -> Utility {
        self.profile.rows().iter().map(|row| row.iter().sum::<Utility>()).max().unwrap_or(0)
    }
}

/// The lowest final egroup score `z` and the tie-break-last egroup member
/// `c_hat` at that score.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LexState {
    pub z: u64,
    pub c_hat: CandidateId,
}

/// The lowest final egroup score `z`, the number `p` of promoted candidates
/// (base score at most `z`, final score above it) and the number `b` of
/// border candidates (final score exactly `z`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CmState {
    pub z: u64,
    pub p: usize,
    pub b: usize,
}

/// The subproblem at which a solver found its manipulation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SolverState {
    Lex(LexState),
    Egal(CmState),
    /// Number of kept candidates in a consistent manipulation.
    Consistent { t: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Manipulation {
    pub ballots: Vec<Ballot>,
    pub resulting_egroup: Egroup,
    pub value: Utility,
    pub state: SolverState,
}

impl Manipulation {
    pub fn meets(&self, threshold: Option<Utility>) -> bool {
        threshold.map_or(true, |q| self.value >= q)
    }
}

/// Per-candidate approval demands together with what the solver expects
/// them to produce.
pub(crate) struct Plan {
    pub demands: Vec<u64>,
    pub value: Utility,
    pub egroup: Option<Egroup>,
    pub state: SolverState,
}

/// Turns a plan into ballots and checks the outcome by re-simulation.
pub(crate) fn realize(inst: &CmInstance, plan: Plan) -> Result<Manipulation> {
    let ballots = ballots_from_approvals(&plan.demands, inst.num_manipulators(), inst.ell)?;
    let (egroup, value) = inst.outcome(&ballots)?;
    if value != plan.value || plan.egroup.as_ref().is_some_and(|e| *e != egroup) {
        return Err(Error::Internal(format!(
            "state {:?} planned {:?} with value {}, simulation gave {egroup:?} with value {value}",
            plan.state, plan.egroup, plan.value
        )));
    }
    Ok(Manipulation { ballots, resulting_egroup: egroup, value, state: plan.state })
}

/// Solves every state in parallel and keeps the most valuable plan, earliest
/// state on ties.
pub(crate) fn best_plan<S, F>(states: &[S], solve: F) -> Result<Option<Plan>>
where
    S: Sync,
    F: Fn(&S) -> Result<Option<Plan>> + Sync + Send,
{
    let plans: Vec<Option<Plan>> = states.par_iter().map(solve).collect::<Result<_>>()?;
    let mut best: Option<Plan> = None;
    for plan in plans.into_iter().flatten() {
        if best.as_ref().map_or(true, |b| plan.value > b.value) {
            best = Some(plan);
        }
    }
    Ok(best)
}

/// Adds `budget` approvals to `demands`, visiting `slots` in order and
/// raising each candidate up to its cap. Returns the approvals left over.
pub(crate) fn spread(demands: &mut [u64], slots: impl IntoIterator<Item = (CandidateId, u64)>, mut budget: u64) -> u64 {
    for (c, cap) in slots {
        if budget == 0 {
            break;
        }
        let room = cap.saturating_sub(demands[c.0]).min(budget);
        demands[c.0] += room;
        budget -= room;
    }
    budget
}

/// Best manipulation with the solver matching the instance's evaluation and
/// tie-breaking rule.
pub fn solve(inst: &CmInstance) -> Result<Option<Manipulation>> {
    match (inst.variant, &inst.rule) {
        (EvalVariant::Egalitarian, TieRule::Lexicographic(_)) => cm_egal_lex(inst),
        (EvalVariant::Egalitarian, _) => cm_egal(inst),
        _ => cm_general(inst),
    }
}
