//! Egalitarian manipulation under lexicographic tie-breaking.
//!
//! States are the `(z, c_hat)` pairs of the contractible case. Within a
//! state the reachable candidates are grouped by type and by how many
//! approvals they need, and one integer program per state chooses how many
//! of each group join the egroup.

use std::collections::BTreeMap;

use super::general::{lex_states_for, LexLayout};
use super::{best_plan, realize, CmInstance, Manipulation, Plan, SolverState};
use crate::election::{CandidateId, ScoreVector};
use crate::error::{Error, Result};
use crate::ilp::{IntegerProgram, Relation};
use crate::tiebreak::{group_by_type, to_coef, LexOrder, TieRule};
use crate::utility::{EvalVariant, Utility};

/// Side of `c_hat` in the tie-breaking order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Side {
    Before,
    After,
}

struct Group {
    need: u64,
    members: Vec<CandidateId>,
    utilities: Vec<Utility>,
}

/// Reachable candidates keyed by (type, score gap `j`, side).
fn groups(inst: &CmInstance, layout: &LexLayout, order: &LexOrder, scores: &ScoreVector) -> Vec<Group> {
    let reachable: Vec<(CandidateId, u64)> = layout.reachable().collect();
    let ids: Vec<CandidateId> = reachable.iter().map(|&(c, _)| c).collect();
    let need_of = |c: CandidateId| reachable.iter().find(|&&(d, _)| d == c).map(|&(_, n)| n).expect("reachable");
    let c_hat = layout.state.c_hat;
    let mut keyed: BTreeMap<(usize, u64, Side), Group> = BTreeMap::new();
    for (ti, (t, members)) in group_by_type(&inst.profile, &ids).into_iter().enumerate() {
        for c in members {
            let j = layout.state.z - scores.get(c);
            let side = if order.precedes(c, c_hat) { Side::Before } else { Side::After };
            keyed
                .entry((ti, j, side))
                .or_insert_with(|| Group { need: need_of(c), members: Vec::new(), utilities: t.clone() })
                .members
                .push(c);
        }
    }
    keyed.into_values().collect()
}

fn solve_state(inst: &CmInstance, layout: &LexLayout, order: &LexOrder, scores: &ScoreVector) -> Result<Option<Plan>> {
    let r = inst.num_manipulators();
    let m = inst.num_candidates() as u64;
    let groups = groups(inst, layout, order, scores);
    let budget = layout.budget;

    let mut prog = IntegerProgram::new();
    let xs = groups
        .iter()
        .enumerate()
        .map(|(g, group)| prog.add_var(format!("x{g}"), 0, group.members.len() as i64))
        .collect::<Result<Vec<_>>>()?;
    let u = prog.add_var("u", 0, to_coef(budget)?)?;
    let s = prog.add_var("s", 0, to_coef(inst.max_row_total())?)?;

    let mful: Vec<_> = xs.iter().zip(&groups).map(|(&x, g)| (x, g.need as i64)).collect();
    prog.add_constraint(mful.iter().copied(), Relation::Le, to_coef(budget)?)?;
    let r64 = r as u64;
    let fbid_full: u64 = groups.iter().map(|g| (r64 + 1 - g.need) * g.members.len() as u64).sum();
    let wasted_rhs = ((m - 1) * r64) as i64 - fbid_full as i64;
    let mut wasted = vec![(u, 1)];
    wasted.extend(xs.iter().zip(&groups).map(|(&x, g)| (x, g.need as i64 - (r64 + 1 - g.need) as i64)));
    prog.add_constraint(wasted, Relation::Le, wasted_rhs)?;
    prog.add_constraint(mful.iter().copied().chain([(u, 1)]), Relation::Eq, to_coef(budget)?)?;
    prog.add_constraint(xs.iter().map(|&x| (x, 1)), Relation::Eq, layout.seats as i64)?;
    let mut fixed = layout.confirmed.clone();
    fixed.push(layout.state.c_hat);
    for q in 0..r {
        let mut terms: Vec<_> = xs.iter().zip(&groups).map(|(&x, g)| (x, g.utilities[q] as i64)).collect();
        terms.push((s, -1));
        prog.add_constraint(terms, Relation::Ge, -to_coef(inst.profile.row_sum(q, &fixed))?)?;
    }
    prog.set_objective([(s, 1)])?;

    let solution = prog.solve()?;
    let (Some(x), Some(value)) = (solution.assignment(), solution.objective_value()) else {
        return Ok(None);
    };
    let chosen: Vec<CandidateId> = xs
        .iter()
        .zip(&groups)
        .flat_map(|(&v, g)| g.members.iter().copied().take(x[v.index()] as usize))
        .collect();
    Ok(Some(Plan {
        demands: layout.demands(&chosen)?,
        value: value as Utility,
        egroup: Some(layout.egroup(&chosen)),
        state: SolverState::Lex(layout.state),
    }))
}

/// Optimal egalitarian manipulation under a lexicographic tie-breaker.
pub fn cm_egal_lex(inst: &CmInstance) -> Result<Option<Manipulation>> {
    let TieRule::Lexicographic(order) = &inst.rule else {
        return Err(Error::UnsupportedVariant("this solver needs a lexicographic tie-breaking rule".into()));
    };
    if inst.variant != EvalVariant::Egalitarian {
        return Err(Error::UnsupportedVariant(format!("this solver evaluates egal, not {}", inst.variant)));
    }
    let scores = inst.base_scores();
    let r = inst.num_manipulators() as u64;
    let states = lex_states_for(inst, order);
    let plan = best_plan(&states, |&state| {
        match LexLayout::new(&scores, order, r, inst.ell, inst.k, state) {
            Some(layout) => solve_state(inst, &layout, order, &scores),
            None => Ok(None),
        }
    })?;
    plan.map(|p| realize(inst, p)).transpose()
}
