//! Tie-breaking among pending candidates.
//!
//! Three rule families are supported: lexicographic (a fixed candidate
//! order), optimistic (the completion the coalition values most) and
//! pessimistic (the completion it values least). For the utilitarian and
//! candidate-wise egalitarian evaluations the latter two collapse to a
//! lexicographic order over the contracted utility row. The egalitarian
//! evaluation needs dedicated algorithms: a per-manipulator greedy for the
//! pessimistic side and a type-count integer program for the optimistic one.

use std::collections::HashMap;

use crate::election::{check_permutation, CandidateId, Egroup};
use crate::error::{Error, Result};
use crate::ilp::{IntegerProgram, IpSolution, IpStatus, Relation};
use crate::utility::{contract, evaluate_members, EvalVariant, Utility, UtilityProfile};

/// A candidate order used by lexicographic tie-breaking; earlier wins.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LexOrder {
    rank: Vec<CandidateId>,
    position: Vec<usize>,
}

impl LexOrder {
    pub fn new(rank: Vec<CandidateId>) -> Result<Self> {
        let m = rank.len();
        check_permutation(&rank, m).map_err(Error::InvalidParameter)?;
        let mut position = vec![0; m];
        for (pos, c) in rank.iter().enumerate() {
            position[c.0] = pos;
        }
        Ok(LexOrder { rank, position })
    }

    pub fn from_indices(rank: &[usize]) -> Result<Self> {
        Self::new(rank.iter().copied().map(CandidateId).collect())
    }

    /// `c0 < c1 < ... < c(m-1)`.
    pub fn identity(m: usize) -> Self {
        LexOrder { rank: (0..m).map(CandidateId).collect(), position: (0..m).collect() }
    }

    pub fn rank(&self) -> &[CandidateId] {
        &self.rank
    }

    pub fn len(&self) -> usize {
        self.rank.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rank.is_empty()
    }

    pub fn position(&self, c: CandidateId) -> usize {
        self.position[c.0]
    }

    /// True if `a` is preferred to `b` by the tie-breaker.
    pub fn precedes(&self, a: CandidateId, b: CandidateId) -> bool {
        self.position[a.0] < self.position[b.0]
    }
}

/// Optimistic or pessimistic attitude of the coalition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Behavior {
    Optimistic,
    Pessimistic,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TieRule {
    Lexicographic(LexOrder),
    Optimistic(EvalVariant),
    Pessimistic(EvalVariant),
}

impl TieRule {
    /// The evaluation variant an optimistic or pessimistic rule optimizes.
    pub fn variant(&self) -> Option<EvalVariant> {
        match self {
            TieRule::Lexicographic(_) => None,
            TieRule::Optimistic(v) | TieRule::Pessimistic(v) => Some(*v),
        }
    }

    pub fn behavior(&self) -> Option<Behavior> {
        match self {
            TieRule::Lexicographic(_) => None,
            TieRule::Optimistic(_) => Some(Behavior::Optimistic),
            TieRule::Pessimistic(_) => Some(Behavior::Pessimistic),
        }
    }
}

/// Confirmed and pending candidates, the egroup size and the coalition's
/// utilities: everything a tie-breaking rule may look at.
#[derive(Clone, Debug)]
pub struct TiePerspective<'a> {
    pub confirmed: Vec<CandidateId>,
    pub pending: Vec<CandidateId>,
    pub k: usize,
    pub profile: &'a UtilityProfile,
}

impl<'a> TiePerspective<'a> {
    pub fn new(
        mut confirmed: Vec<CandidateId>,
        mut pending: Vec<CandidateId>,
        k: usize,
        profile: &'a UtilityProfile,
    ) -> Result<Self> {
        confirmed.sort_unstable();
        pending.sort_unstable();
        let m = profile.num_candidates();
        let mut seen = vec![false; m];
        for &c in confirmed.iter().chain(&pending) {
            if c.0 >= m {
                return Err(Error::InvalidPerspective(format!("candidate {} out of range", c.0)));
            }
            if std::mem::replace(&mut seen[c.0], true) {
                return Err(Error::InvalidPerspective(format!("candidate {} listed twice", c.0)));
            }
        }
        if confirmed.len() >= k {
            return Err(Error::InvalidPerspective(format!(
                "{} confirmed candidates leave no room in an egroup of size {k}",
                confirmed.len()
            )));
        }
        if confirmed.len() + pending.len() < k {
            return Err(Error::InvalidPerspective(format!(
                "{} confirmed and {} pending candidates cannot fill an egroup of size {k}",
                confirmed.len(),
                pending.len()
            )));
        }
        Ok(TiePerspective { confirmed, pending, k, profile })
    }

    /// Number of pending candidates the rule has to pick.
    pub fn open_seats(&self) -> usize {
        self.k - self.confirmed.len()
    }

    fn with_confirmed(&self, picks: impl IntoIterator<Item = CandidateId>) -> Egroup {
        Egroup::new(self.confirmed.iter().copied().chain(picks))
    }
}

/// Result of tie-breaking. `value` is `None` for lexicographic rules, which
/// carry no evaluation of their own.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TieOutcome {
    pub egroup: Egroup,
    pub value: Option<Utility>,
}

pub fn apply_lex(p: &TiePerspective<'_>, order: &LexOrder) -> Result<Egroup> {
    lex_completion(&p.confirmed, &p.pending, p.k, order)
}

pub(crate) fn lex_completion(
    confirmed: &[CandidateId],
    pending: &[CandidateId],
    k: usize,
    order: &LexOrder,
) -> Result<Egroup> {
    if let Some(c) = confirmed.iter().chain(pending).find(|c| c.0 >= order.len()) {
        return Err(Error::InvalidParameter(format!("candidate {} missing from the lexicographic order", c.0)));
    }
    let seats = k.checked_sub(confirmed.len()).filter(|&s| s <= pending.len()).ok_or_else(|| {
        Error::InvalidPerspective(format!("cannot complete {} confirmed to size {k}", confirmed.len()))
    })?;
    let mut ranked = pending.to_vec();
    ranked.sort_by_key(|&c| order.position(c));
    Ok(Egroup::new(confirmed.iter().copied().chain(ranked.into_iter().take(seats))))
}

/// A lexicographic order that reproduces the optimistic or pessimistic rule
/// for a contractible evaluation: candidates sorted by contracted utility,
/// best first when optimistic and worst first when pessimistic, equal
/// utilities by index.
pub fn simulate_lex(profile: &UtilityProfile, variant: EvalVariant, behavior: Behavior) -> Result<LexOrder> {
    let row = contract(profile, variant)?;
    let mut rank: Vec<usize> = (0..row.len()).collect();
    match behavior {
        Behavior::Optimistic => rank.sort_by(|&a, &b| row[b].cmp(&row[a]).then(a.cmp(&b))),
        Behavior::Pessimistic => rank.sort_by(|&a, &b| row[a].cmp(&row[b]).then(a.cmp(&b))),
    }
    LexOrder::from_indices(&rank)
}

pub fn tie_break(p: &TiePerspective<'_>, rule: &TieRule) -> Result<TieOutcome> {
    let (variant, behavior) = match rule {
        TieRule::Lexicographic(order) => {
            return Ok(TieOutcome { egroup: apply_lex(p, order)?, value: None });
        }
        TieRule::Optimistic(v) => (*v, Behavior::Optimistic),
        TieRule::Pessimistic(v) => (*v, Behavior::Pessimistic),
    };
    let (egroup, value) = match (variant, behavior) {
        (EvalVariant::Egalitarian, Behavior::Pessimistic) => pess_egal(p),
        (EvalVariant::Egalitarian, Behavior::Optimistic) => opt_egal_exact(p)?,
        _ => {
            let order = simulate_lex(p.profile, variant, behavior)?;
            let egroup = apply_lex(p, &order)?;
            let value = evaluate_members(p.profile, egroup.members(), variant);
            (egroup, value)
        }
    };
    Ok(TieOutcome { egroup, value: Some(value) })
}

/// Egalitarian-minimizing completion.
///
/// For every manipulator, completing with the pending candidates it values
/// least gives that manipulator's smallest attainable sum; the minimum over
/// manipulators is the optimum. The reported egroup is the optimum with the
/// smallest sorted index sequence.
pub fn pess_egal(p: &TiePerspective<'_>) -> (Egroup, Utility) {
    let profile = p.profile;
    let r = profile.num_manipulators();
    let cheapest = |q: usize, pool: &[CandidateId], take: usize| -> Utility {
        let mut us: Vec<Utility> = pool.iter().map(|&c| profile.utility(q, c)).collect();
        us.sort_unstable();
        us.into_iter().take(take).sum()
    };
    let value = (0..r)
        .map(|q| profile.row_sum(q, &p.confirmed) + cheapest(q, &p.pending, p.open_seats()))
        .min()
        .expect("a utility profile has at least one manipulator");

    let mut picked = Vec::new();
    let mut seats = p.open_seats();
    let mut fixed: Vec<Utility> = (0..r).map(|q| profile.row_sum(q, &p.confirmed)).collect();
    for (i, &c) in p.pending.iter().enumerate() {
        if seats == 0 {
            break;
        }
        let later = &p.pending[i + 1..];
        let keeps_optimum =
            (0..r).any(|q| fixed[q] + profile.utility(q, c) + cheapest(q, later, seats - 1) <= value);
        if keeps_optimum {
            picked.push(c);
            seats -= 1;
            for (q, f) in fixed.iter_mut().enumerate() {
                *f += profile.utility(q, c);
            }
        }
    }
    (p.with_confirmed(picked), value)
}

/// Pending candidates grouped by utility column, in order of their lowest
/// member index. Members within a group are sorted by index.
pub(crate) fn group_by_type(profile: &UtilityProfile, candidates: &[CandidateId]) -> Vec<(Vec<Utility>, Vec<CandidateId>)> {
    let mut groups: Vec<(Vec<Utility>, Vec<CandidateId>)> = Vec::new();
    let mut index: HashMap<Vec<Utility>, usize> = HashMap::new();
    let mut sorted = candidates.to_vec();
    sorted.sort_unstable();
    for c in sorted {
        let t = profile.type_vector(c);
        match index.get(&t) {
            Some(&g) => groups[g].1.push(c),
            None => {
                index.insert(t.clone(), groups.len());
                groups.push((t, vec![c]));
            }
        }
    }
    groups
}

pub(crate) fn to_coef(u: Utility) -> Result<i64> {
    i64::try_from(u)
        .ok()
        .filter(|&v| v <= crate::ilp::MAX_MAGNITUDE)
        .ok_or_else(|| Error::Overflow(format!("utility {u} too large for the integer program")))
}

/// The type-count program: `x_i` pending candidates of type `i`, within
/// `[lower_i, upper_i]`, summing to `seats`, and every manipulator's total
/// (confirmed base plus picks) at least `s`. With `target` set, `s` is fixed
/// to it and the program is a feasibility check; otherwise `s` is maximized.
fn type_program(
    p: &TiePerspective<'_>,
    types: &[&[Utility]],
    bounds: &[(usize, usize)],
    seats: usize,
    base: &[Utility],
    target: Option<Utility>,
) -> Result<IpSolution> {
    let mut prog = IntegerProgram::new();
    let counts: Vec<_> = bounds
        .iter()
        .enumerate()
        .map(|(i, &(lo, hi))| prog.add_var(format!("x{i}"), lo as i64, hi as i64))
        .collect::<Result<_>>()?;
    let s = match target {
        Some(v) => prog.add_var("s", to_coef(v)?, to_coef(v)?)?,
        None => {
            let upper = p.profile.rows().iter().map(|row| row.iter().sum::<Utility>()).max().unwrap_or(0);
            prog.add_var("s", 0, to_coef(upper)?)?
        }
    };
    prog.add_constraint(counts.iter().map(|&x| (x, 1)), Relation::Eq, seats as i64)?;
    for (q, &b) in base.iter().enumerate() {
        let mut terms = Vec::with_capacity(types.len() + 1);
        for (&x, t) in counts.iter().zip(types) {
            terms.push((x, to_coef(t[q])?));
        }
        terms.push((s, -1));
        prog.add_constraint(terms, Relation::Ge, -to_coef(b)?)?;
    }
    prog.set_objective([(s, 1)])?;
    prog.solve()
}

/// Egalitarian-maximizing completion via an integer program over candidate
/// types: one count variable per distinct utility column among the pending
/// candidates plus the objective variable. Confirmed candidates enter each
/// manipulator's constraint as a constant. The reported egroup is the
/// optimum with the smallest sorted index sequence, found by fixing pending
/// candidates in index order and re-checking feasibility at the optimum.
pub fn opt_egal_exact(p: &TiePerspective<'_>) -> Result<(Egroup, Utility)> {
    let profile = p.profile;
    let groups = group_by_type(profile, &p.pending);
    let types: Vec<&[Utility]> = groups.iter().map(|(t, _)| t.as_slice()).collect();
    let mut base: Vec<Utility> = (0..profile.num_manipulators()).map(|q| profile.row_sum(q, &p.confirmed)).collect();

    let full: Vec<(usize, usize)> = groups.iter().map(|(_, members)| (0, members.len())).collect();
    let solution = type_program(p, &types, &full, p.open_seats(), &base, None)?;
    let value = solution
        .objective_value()
        .ok_or_else(|| Error::Internal("type-count program for a valid perspective is infeasible".into()))?;
    let value = value as Utility;

    let group_of: HashMap<CandidateId, usize> =
        groups.iter().enumerate().flat_map(|(g, (_, members))| members.iter().map(move |&c| (c, g))).collect();
    let mut remaining: Vec<usize> = groups.iter().map(|(_, members)| members.len()).collect();
    let mut picked = Vec::new();
    let mut seats = p.open_seats();
    for &c in &p.pending {
        if seats == 0 {
            break;
        }
        let g = group_of[&c];
        remaining[g] -= 1;
        let trial_base: Vec<Utility> = base.iter().zip(&types[g][..]).map(|(b, u)| b + u).collect();
        let bounds: Vec<(usize, usize)> = remaining.iter().map(|&n| (0, n)).collect();
        let feasible = type_program(p, &types, &bounds, seats - 1, &trial_base, Some(value))?.status() == IpStatus::Optimal;
        if feasible {
            picked.push(c);
            seats -= 1;
            base = trial_base;
        }
    }
    let egroup = p.with_confirmed(picked);
    let attained = evaluate_members(profile, egroup.members(), EvalVariant::Egalitarian);
    if egroup.len() != p.k || attained != value {
        return Err(Error::Internal(format!(
            "materialized egroup {egroup:?} has egal value {attained}, program claimed {value}"
        )));
    }
    Ok((egroup, value))
}
