//! Egalitarian manipulation under optimistic or pessimistic egalitarian
//! tie-breaking.
//!
//! A state `(z, p, b)` fixes the lowest final egroup score, the number of
//! promoted candidates and the number of border candidates. Candidates are
//! grouped by type and by the gap `j = z − score` between `z` and their base
//! score; one integer program per state counts promoted and border
//! candidates per group and models the tie-breaking among the border.

use super::{best_plan, realize, spread, CmInstance, CmState, Manipulation, Plan, SolverState};
use crate::election::{CandidateId, ScoreVector};
use crate::error::{Error, Result};
use crate::ilp::{IntegerProgram, Relation, VarId};
use crate::tiebreak::{group_by_type, to_coef, TieRule};
use crate::utility::{EvalVariant, Utility};

/// Candidates of one type, split by score gap `j ∈ 0..=r`.
struct TypeGroups {
    utilities: Vec<Utility>,
    by_gap: Vec<Vec<CandidateId>>,
    /// Members with base score above `z`.
    obligatory: usize,
}

struct EgalLayout {
    state: CmState,
    r: usize,
    types: Vec<TypeGroups>,
    /// Base score above `z` or below `z − r`.
    outside: Vec<CandidateId>,
    confirmed: Vec<CandidateId>,
}

impl EgalLayout {
    fn new(inst: &CmInstance, scores: &ScoreVector, state: CmState) -> Self {
        let r = inst.num_manipulators();
        let z = state.z;
        let all: Vec<CandidateId> = inst.election.candidates().collect();
        let mut types = Vec::new();
        let mut outside = Vec::new();
        let mut confirmed = Vec::new();
        for (utilities, members) in group_by_type(&inst.profile, &all) {
            let mut by_gap = vec![Vec::new(); r + 1];
            let mut obligatory = 0;
            for c in members {
                let s = scores.get(c);
                if s > z {
                    obligatory += 1;
                    confirmed.push(c);
                    outside.push(c);
                } else if s + (r as u64) < z {
                    outside.push(c);
                } else {
                    by_gap[(z - s) as usize].push(c);
                }
            }
            types.push(TypeGroups { utilities, by_gap, obligatory });
        }
        confirmed.sort_unstable();
        outside.sort_unstable();
        EgalLayout { state, r, types, outside, confirmed }
    }

    fn tie_seats(&self, k: usize) -> usize {
        k - self.confirmed.len() - self.state.p
    }
}

/// Every `(z, p, b)` with fewer than `k` candidates above `z`, at least one
/// egroup seat at score `z`, and enough border candidates to fill the seats.
pub fn egal_states(inst: &CmInstance) -> Vec<CmState> {
    let scores = inst.base_scores();
    let r = inst.num_manipulators() as u64;
    let max_z = inst.election.num_voters() + r;
    let mut states = Vec::new();
    for z in 0..=max_z {
        let above = scores.as_slice().iter().filter(|&&s| s > z).count();
        if above >= inst.k {
            continue;
        }
        let window = scores.as_slice().iter().filter(|&&s| s <= z && s + r >= z).count();
        for p in 0..inst.k - above {
            for b in inst.k - above - p..=window.saturating_sub(p) {
                states.push(CmState { z, p, b });
            }
        }
    }
    states
}

struct Program {
    prog: IntegerProgram,
    /// Per type and gap: (promoted, border) count variables.
    counts: Vec<Vec<Option<(Option<VarId>, VarId)>>>,
}

/// The objective variable, declared after every count so that branching
/// settles the counts first.
fn objective_var(inst: &CmInstance, prog: &mut IntegerProgram) -> Result<VarId> {
    prog.add_var("s", 0, to_coef(inst.max_row_total())?)
}

fn common_part(inst: &CmInstance, layout: &EgalLayout) -> Result<Program> {
    let r = layout.r;
    let budget = (r * inst.ell) as i64;
    let mut prog = IntegerProgram::new();
    let mut counts = Vec::with_capacity(layout.types.len());
    for (i, t) in layout.types.iter().enumerate() {
        let mut row = Vec::with_capacity(r + 1);
        for (j, group) in t.by_gap.iter().enumerate() {
            if group.is_empty() {
                row.push(None);
                continue;
            }
            let size = group.len() as i64;
            // Gap r cannot be promoted.
            let promoted = (j < r).then(|| prog.add_var(format!("xp{i}_{j}"), 0, size)).transpose()?;
            let border = prog.add_var(format!("xb{i}_{j}"), 0, size)?;
            let mut both = vec![(border, 1)];
            both.extend(promoted.map(|v| (v, 1)));
            prog.add_constraint(both.iter().copied(), if j == 0 { Relation::Eq } else { Relation::Le }, size)?;
            row.push(Some((promoted, border)));
        }
        counts.push(row);
    }
    let flat = || counts.iter().flat_map(|row| row.iter().enumerate().filter_map(|(j, v)| v.map(|v| (j, v))));
    prog.add_constraint(flat().filter_map(|(_, (p, _))| p.map(|p| (p, 1))), Relation::Eq, layout.state.p as i64)?;
    prog.add_constraint(flat().map(|(_, (_, b))| (b, 1)), Relation::Eq, layout.state.b as i64)?;

    let o = prog.add_var("o", 0, budget)?;
    let o_bar = prog.add_var("o_bar", 0, budget)?;
    let mut used = vec![(o, -1)];
    for (j, (p, b)) in flat() {
        used.push((b, j as i64));
        used.extend(p.map(|p| (p, j as i64 + 1)));
    }
    prog.add_constraint(used, Relation::Eq, 0)?;

    // o_bar <= r|C- ∪ C+| + Σ_{j≥1} (|G| − x − x+)(j − 1) + Σ_j x+ (r − j − 1)
    let mut rhs = (r * layout.outside.len()) as i64;
    let mut wasted = vec![(o_bar, 1)];
    for (t, row) in layout.types.iter().zip(&counts) {
        for (j, v) in row.iter().enumerate() {
            let Some((p, b)) = v else { continue };
            if j >= 1 {
                rhs += t.by_gap[j].len() as i64 * (j as i64 - 1);
                wasted.push((*b, j as i64 - 1));
                wasted.extend(p.map(|p| (p, j as i64 - 1)));
            }
            wasted.extend(p.map(|p| (p, -(r as i64 - j as i64 - 1))));
        }
    }
    prog.add_constraint(wasted, Relation::Le, rhs)?;
    prog.add_constraint([(o, 1), (o_bar, 1)], Relation::Eq, budget)?;
    Ok(Program { prog, counts })
}

fn optimistic_part(inst: &CmInstance, layout: &EgalLayout, program: &mut Program) -> Result<VarId> {
    let Program { prog, counts } = program;
    let mut picked: Vec<Vec<(VarId, Option<VarId>)>> = Vec::new();
    for (i, row) in counts.iter().enumerate() {
        let mut per_type = Vec::new();
        for (j, v) in row.iter().enumerate() {
            let Some((p, b)) = v else { continue };
            let sel = prog.add_var(format!("xs{i}_{j}"), 0, layout.types[i].by_gap[j].len() as i64)?;
            prog.add_constraint([(sel, 1), (*b, -1)], Relation::Le, 0)?;
            per_type.push((sel, *p));
        }
        picked.push(per_type);
    }
    let seats = layout.tie_seats(inst.k) as i64;
    prog.add_constraint(picked.iter().flatten().map(|&(sel, _)| (sel, 1)), Relation::Eq, seats)?;
    let s = objective_var(inst, prog)?;
    for q in 0..layout.r {
        let mut terms = vec![(s, -1)];
        let mut base = 0;
        for (t, per_type) in layout.types.iter().zip(&picked) {
            let u = to_coef(t.utilities[q])?;
            base += u * t.obligatory as i64;
            for &(sel, p) in per_type {
                terms.push((sel, u));
                terms.extend(p.map(|p| (p, u)));
            }
        }
        prog.add_constraint(terms, Relation::Ge, -base)?;
    }
    Ok(s)
}

fn pessimistic_part(inst: &CmInstance, layout: &EgalLayout, program: &mut Program) -> Result<VarId> {
    let Program { prog, counts } = program;
    let big_m = inst.num_candidates() as i64;
    let seats = layout.tie_seats(inst.k) as i64;
    // Types that can contribute border candidates.
    let active: Vec<usize> = (0..layout.types.len()).filter(|&i| counts[i].iter().any(Option::is_some)).collect();
    let border_terms = |i: usize, sign: i64| -> Vec<(VarId, i64)> {
        counts[i].iter().flatten().map(|&(_, b)| (b, sign)).collect()
    };
    let mut per_manipulator = Vec::with_capacity(layout.r);
    for q in 0..layout.r {
        let mut designated = Vec::with_capacity(active.len());
        for &i in &active {
            let available: usize = layout.types[i].by_gap.iter().map(Vec::len).sum();
            let d = prog.add_var(format!("d{i}_{q}"), 0, available as i64)?;
            let used = prog.add_var(format!("used{i}_{q}"), 0, 1)?;
            let fused = prog.add_var(format!("fused{i}_{q}"), 0, 1)?;
            // d <= b_i
            let mut t = border_terms(i, -1);
            t.push((d, 1));
            prog.add_constraint(t, Relation::Le, 0)?;
            prog.add_constraint([(used, 1), (d, -1)], Relation::Le, 0)?;
            prog.add_constraint([(used, big_m), (d, -1)], Relation::Ge, 0)?;
            // fused >= 1 − (b_i − d)
            let mut t = border_terms(i, 1);
            t.extend([(fused, 1), (d, -1)]);
            prog.add_constraint(t, Relation::Ge, 1)?;
            // b_i − d <= M (1 − fused)
            let mut t = border_terms(i, 1);
            t.extend([(d, -1), (fused, big_m)]);
            prog.add_constraint(t, Relation::Le, big_m)?;
            designated.push((i, d, used, fused));
        }
        prog.add_constraint(designated.iter().map(|&(_, d, _, _)| (d, 1)), Relation::Eq, seats)?;
        for &(i, _, used, _) in &designated {
            for &(i2, _, _, fused2) in &designated {
                if layout.types[i].utilities[q] > layout.types[i2].utilities[q] {
                    prog.add_constraint([(used, 1), (fused2, -1)], Relation::Le, 0)?;
                }
            }
        }
        per_manipulator.push(designated);
    }
    let s = objective_var(inst, prog)?;
    for (q, designated) in per_manipulator.iter().enumerate() {
        let mut terms = vec![(s, -1)];
        let mut base = 0;
        for (t, row) in layout.types.iter().zip(counts.iter()) {
            let u = to_coef(t.utilities[q])?;
            base += u * t.obligatory as i64;
            terms.extend(row.iter().flatten().filter_map(|&(p, _)| p.map(|p| (p, u))));
        }
        for &(i, d, _, _) in designated {
            terms.push((d, to_coef(layout.types[i].utilities[q])?));
        }
        prog.add_constraint(terms, Relation::Ge, -base)?;
    }
    Ok(s)
}

fn solve_state(inst: &CmInstance, scores: &ScoreVector, state: CmState, optimistic: bool) -> Result<Option<Plan>> {
    let layout = EgalLayout::new(inst, scores, state);
    let mut program = common_part(inst, &layout)?;
    let s = if optimistic {
        optimistic_part(inst, &layout, &mut program)?
    } else {
        pessimistic_part(inst, &layout, &mut program)?
    };
    program.prog.set_objective([(s, 1)])?;
    let solution = program.prog.solve()?;
    let (Some(x), Some(value)) = (solution.assignment(), solution.objective_value()) else {
        return Ok(None);
    };

    let r = layout.r as u64;
    let m = inst.num_candidates();
    let mut demands = vec![0u64; m];
    let mut promoted = Vec::new();
    let mut idle = Vec::new();
    for (t, row) in layout.types.iter().zip(&program.counts) {
        for (j, v) in row.iter().enumerate() {
            let Some((p, b)) = v else { continue };
            let np = p.map_or(0, |p| x[p.index()] as usize);
            let nb = x[b.index()] as usize;
            let members = &t.by_gap[j];
            for &c in &members[..np] {
                demands[c.0] = j as u64 + 1;
                promoted.push(c);
            }
            for &c in &members[np..np + nb] {
                demands[c.0] = j as u64;
            }
            if j >= 1 {
                idle.extend(members[np + nb..].iter().map(|&c| (c, j as u64 - 1)));
            }
        }
    }
    let spent: u64 = demands.iter().sum();
    let left = (r * inst.ell as u64)
        .checked_sub(spent)
        .ok_or_else(|| Error::Internal(format!("state {state:?} overspends approvals")))?;
    let left = spread(&mut demands, promoted.iter().map(|&c| (c, r)), left);
    let left = spread(&mut demands, layout.outside.iter().map(|&c| (c, r)), left);
    let left = spread(&mut demands, idle, left);
    if left != 0 {
        return Err(Error::Internal(format!("{left} approvals could not be placed in state {state:?}")));
    }
    Ok(Some(Plan { demands, value: value as Utility, egroup: None, state: SolverState::Egal(state) }))
}

/// Optimal egalitarian manipulation under optimistic or pessimistic
/// egalitarian tie-breaking.
pub fn cm_egal(inst: &CmInstance) -> Result<Option<Manipulation>> {
    let optimistic = match inst.rule {
        TieRule::Optimistic(EvalVariant::Egalitarian) => true,
        TieRule::Pessimistic(EvalVariant::Egalitarian) => false,
        _ => {
            return Err(Error::UnsupportedVariant(
                "this solver needs optimistic or pessimistic egalitarian tie-breaking".into(),
            ))
        }
    };
    let scores = inst.base_scores();
    let states = egal_states(inst);
    let plan = best_plan(&states, |&state| solve_state(inst, &scores, state, optimistic))?;
    plan.map(|p| realize(inst, p)).transpose()
}
