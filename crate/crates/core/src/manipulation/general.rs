//! Manipulation for contractible evaluations under any tie-breaking rule.
//!
//! With a lexicographic tie-breaker (or the simulator's order standing in
//! for an optimistic or pessimistic rule) the winners are the top `k`
//! candidates by final score, ties resolved by the order. Fixing the final
//! score `z` of the last winner `c_hat` determines which candidates win
//! regardless (`C+`), how many approvals `c_hat` takes, and for every other
//! candidate how many approvals would push it past `c_hat`. What remains is
//! choosing `k*` of the reachable candidates, which is one exact k-item
//! knapsack per state.

use super::{best_plan, knapsack_exact_k, realize, spread, CmInstance, LexState, Manipulation, Plan, SolverState};
use crate::election::{CandidateId, Egroup, ScoreVector};
use crate::error::{Error, Result};
use crate::tiebreak::LexOrder;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Role {
    Confirmed,
    Hat,
    /// Wins iff it receives at least `need` (at most `r`) approvals.
    Reachable { need: u64 },
    /// Cannot overtake `c_hat` with `r` approvals.
    Unreachable,
}

/// Everything a lexicographic state fixes.
pub(crate) struct LexLayout {
    pub state: LexState,
    pub r: u64,
    pub roles: Vec<Role>,
    pub confirmed: Vec<CandidateId>,
    pub s_hat: u64,
    /// Winners still to be chosen among reachable candidates.
    pub seats: usize,
    /// Approvals left after `c_hat` is lifted to `z`.
    pub budget: u64,
    /// Approvals every candidate except `c_hat` can absorb without joining
    /// the egroup.
    pub safe_total: u64,
}

impl LexLayout {
    pub fn new(scores: &ScoreVector, order: &LexOrder, r: u64, ell: usize, k: usize, state: LexState) -> Option<Self> {
        let LexState { z, c_hat } = state;
        let s_hat_base = scores.get(c_hat);
        if s_hat_base > z || s_hat_base + r < z {
            return None;
        }
        let s_hat = z - s_hat_base;
        let budget = (r * ell as u64).checked_sub(s_hat)?;
        let mut roles = Vec::with_capacity(scores.len());
        let mut confirmed = Vec::new();
        let mut safe_total = 0;
        for (i, &s) in scores.as_slice().iter().enumerate() {
            let c = CandidateId(i);
            if c == c_hat {
                roles.push(Role::Hat);
                continue;
            }
            let threshold = if order.precedes(c, c_hat) { z } else { z + 1 };
            let role = if s >= threshold {
                confirmed.push(c);
                safe_total += r;
                Role::Confirmed
            } else if threshold - s <= r {
                safe_total += threshold - s - 1;
                Role::Reachable { need: threshold - s }
            } else {
                safe_total += r;
                Role::Unreachable
            };
            roles.push(role);
        }
        let seats = k.checked_sub(confirmed.len() + 1)?;
        Some(LexLayout { state, r, roles, confirmed, s_hat, seats, budget, safe_total })
    }

    /// Largest total `need` of the chosen candidates for which the budget
    /// can be spent exactly without disturbing the egroup.
    pub fn capacity(&self) -> Option<u64> {
        let absorbable = self.safe_total + self.seats as u64 * (self.r + 1);
        absorbable.checked_sub(self.budget).map(|slack| slack.min(self.budget))
    }

    pub fn reachable(&self) -> impl Iterator<Item = (CandidateId, u64)> + '_ {
        self.roles.iter().enumerate().filter_map(|(i, role)| match role {
            Role::Reachable { need } => Some((CandidateId(i), *need)),
            _ => None,
        })
    }

    pub fn egroup(&self, chosen: &[CandidateId]) -> Egroup {
        Egroup::new(self.confirmed.iter().copied().chain([self.state.c_hat]).chain(chosen.iter().copied()))
    }

    /// Approval demands lifting `chosen` into the egroup and spending the
    /// rest of the budget where it changes nothing.
    pub fn demands(&self, chosen: &[CandidateId]) -> Result<Vec<u64>> {
        let mut demands = vec![0u64; self.roles.len()];
        demands[self.state.c_hat.0] = self.s_hat;
        let mut lifted = 0;
        for &c in chosen {
            let Role::Reachable { need } = self.roles[c.0] else {
                return Err(Error::Internal(format!("{c} is not reachable in state {:?}", self.state)));
            };
            demands[c.0] = need;
            lifted += need;
        }
        let left = self.budget.checked_sub(lifted).ok_or_else(|| {
            Error::Internal(format!("chosen candidates need {lifted} approvals, budget is {}", self.budget))
        })?;
        let r = self.r;
        let of_role = |pick: fn(&Role) -> bool| {
            self.roles.iter().enumerate().filter(move |(_, role)| pick(role)).map(|(i, _)| CandidateId(i))
        };
        let left = spread(&mut demands, chosen.iter().map(|&c| (c, r)), left);
        let left = spread(&mut demands, of_role(|role| *role == Role::Confirmed).map(|c| (c, r)), left);
        let left = spread(&mut demands, of_role(|role| *role == Role::Unreachable).map(|c| (c, r)), left);
        let safe = self.reachable().filter(|(c, _)| !chosen.contains(c)).map(|(c, need)| (c, need - 1));
        let left = spread(&mut demands, safe, left);
        if left != 0 {
            return Err(Error::Internal(format!("{left} approvals could not be placed in state {:?}", self.state)));
        }
        Ok(demands)
    }
}

/// Every `(z, c_hat)` pair that can describe an outcome: `c_hat` reaches
/// `z` with at most `r` approvals and fewer than `k` candidates beat it
/// unconditionally.
pub(crate) fn lex_states_for(inst: &CmInstance, order: &LexOrder) -> Vec<LexState> {
    let scores = inst.base_scores();
    let r = inst.num_manipulators() as u64;
    let max_z = inst.election.num_voters() + r;
    let mut states = Vec::new();
    for z in 0..=max_z {
        for c in inst.election.candidates() {
            let state = LexState { z, c_hat: c };
            if LexLayout::new(&scores, order, r, inst.ell, inst.k, state).is_some() {
                states.push(state);
            }
        }
    }
    states
}

/// The states a lexicographic solver enumerates for `inst`.
pub fn lex_states(inst: &CmInstance) -> Result<Vec<LexState>> {
    Ok(lex_states_for(inst, &inst.lex_equivalent()?))
}

/// Optimal manipulation for the utilitarian or candidate-wise egalitarian
/// evaluation under any tie-breaking rule whose variant matches.
pub fn cm_general(inst: &CmInstance) -> Result<Option<Manipulation>> {
    let order = inst.lex_equivalent()?;
    let values = inst.value_row()?;
    let scores = inst.base_scores();
    let r = inst.num_manipulators() as u64;
    let states = lex_states_for(inst, &order);

    let plan = best_plan(&states, |&state| {
        let Some(layout) = LexLayout::new(&scores, &order, r, inst.ell, inst.k, state) else {
            return Ok(None);
        };
        let Some(capacity) = layout.capacity() else {
            return Ok(None);
        };
        let candidates: Vec<(CandidateId, u64)> = layout.reachable().collect();
        let items: Vec<(u64, u64)> = candidates.iter().map(|&(c, need)| (need, values[c.0])).collect();
        let Some((gain, picked)) = knapsack_exact_k(&items, layout.seats, capacity) else {
            return Ok(None);
        };
        let chosen: Vec<CandidateId> = picked.into_iter().map(|i| candidates[i].0).collect();
        let fixed: u64 = layout.confirmed.iter().map(|c| values[c.0]).sum::<u64>() + values[state.c_hat.0];
        Ok(Some(Plan {
            demands: layout.demands(&chosen)?,
            value: fixed + gain,
            egroup: Some(layout.egroup(&chosen)),
            state: SolverState::Lex(state),
        }))
    })?;
    plan.map(|p| realize(inst, p)).transpose()
}
