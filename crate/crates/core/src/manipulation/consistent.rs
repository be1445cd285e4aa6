//! Consistent manipulation: every manipulator casts the same ballot, so the
//! coalition only picks one set `X` of `ℓ` supported candidates.

use rayon::prelude::*;

use super::{CmInstance, Manipulation, SolverState};
use crate::election::{score, Ballot, CandidateId, Election};
use crate::error::{Error, Result};
use crate::tiebreak::LexOrder;

/// Candidates by descending base score, equal scores by position in `order`.
pub fn strength_order(election: &Election, ell: usize, order: &LexOrder) -> Result<LexOrder> {
    let scores = score(election, ell)?;
    if order.len() != scores.len() {
        return Err(Error::InvalidParameter(format!(
            "lexicographic order has {} candidates, election has {}",
            order.len(),
            scores.len()
        )));
    }
    let mut rank = order.rank().to_vec();
    rank.sort_by(|&a, &b| scores.get(b).cmp(&scores.get(a)).then(order.position(a).cmp(&order.position(b))));
    LexOrder::new(rank)
}

/// Supported set for `t` kept candidates, or `None` if too few candidates
/// can overtake the dropped one.
fn supported_set(
    inst: &CmInstance,
    strength: &LexOrder,
    order: &LexOrder,
    values: &[u64],
    t: usize,
) -> Option<Vec<CandidateId>> {
    let scores = inst.base_scores();
    let r = inst.num_manipulators() as u64;
    let (ell, k) = (inst.ell, inst.k);
    let ranked = strength.rank();
    let kept = &ranked[..t];
    let dropped = ranked[t];
    let s_drop = scores.get(dropped);
    let distinguished: Vec<CandidateId> = ranked[t + 1..]
        .iter()
        .copied()
        .filter(|&c| {
            let lifted = scores.get(c) + r;
            lifted > s_drop || (lifted == s_drop && order.precedes(c, dropped))
        })
        .collect();
    if distinguished.len() < k - t {
        return None;
    }
    // Most valuable first, stronger first among equals.
    let by_value = |pool: &mut Vec<CandidateId>| {
        pool.sort_by(|&a, &b| values[b.0].cmp(&values[a.0]).then(strength.position(a).cmp(&strength.position(b))))
    };
    let weakest = |x: &[CandidateId], count: usize| -> Vec<CandidateId> {
        ranked.iter().rev().copied().filter(|c| !x.contains(c)).take(count).collect()
    };

    let mut pool = distinguished.clone();
    by_value(&mut pool);
    let mut x: Vec<CandidateId> = pool[..k - t].to_vec();
    let room = ell - x.len();
    x.extend(kept.iter().copied().take(t.min(room)));

    if x.len() < ell {
        let a = weakest(&x, ell - x.len());
        let mut union: Vec<CandidateId> = x.iter().chain(&a).copied().collect();
        union.sort_by_key(|&c| strength.position(c));
        let p = union[..k.min(union.len())].iter().filter(|c| !x.contains(c)).count();
        let filler = weakest(&x, ell - x.len() - p);
        x.extend(filler);
        let mut rest: Vec<CandidateId> = distinguished.iter().copied().filter(|c| !x.contains(c)).collect();
        by_value(&mut rest);
        x.extend(rest.into_iter().take(p));
    }
    (x.len() == ell).then_some(x)
}

/// Best manipulation in which all manipulators cast the same ballot, for a
/// contractible evaluation.
pub fn cm_consistent(inst: &CmInstance) -> Result<Option<Manipulation>> {
    let order = inst.lex_equivalent()?;
    let values = inst.value_row()?;
    let strength = strength_order(&inst.election, inst.ell, &order)?;
    let m = inst.num_candidates();
    let r = inst.num_manipulators();
    let ts: Vec<usize> = (inst.k.saturating_sub(inst.ell)..=inst.k).collect();

    let outcomes: Vec<Option<Manipulation>> = ts
        .par_iter()
        .map(|&t| {
            let Some(x) = supported_set(inst, &strength, &order, &values, t) else {
                return Ok(None);
            };
            let mut top: Vec<usize> = x.iter().map(|c| c.0).collect();
            top.sort_unstable();
            let ballot_order: Vec<usize> = top.iter().copied().chain((0..m).filter(|c| !top.contains(c))).collect();
            let ballot = Ballot::from_indices(&ballot_order, m)?;
            let ballots = vec![ballot; r];
            let (egroup, value) = inst.outcome(&ballots)?;
            Ok(Some(Manipulation { ballots, resulting_egroup: egroup, value, state: SolverState::Consistent { t } }))
        })
        .collect::<Result<_>>()?;

    let mut best: Option<Manipulation> = None;
    for m in outcomes.into_iter().flatten() {
        if best.as_ref().map_or(true, |b| m.value > b.value) {
            best = Some(m);
        }
    }
    Ok(best)
}

/// Bloc (`ℓ = k`): consistent manipulation is optimal among all profiles.
pub fn cm_bloc(inst: &CmInstance) -> Result<Option<Manipulation>> {
    if inst.ell != inst.k {
        return Err(Error::InvalidParameter(format!("Bloc needs ell = k, got ell = {} and k = {}", inst.ell, inst.k)));
    }
    cm_consistent(inst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::election::Egroup;
    use crate::tiebreak::TieRule;
    use crate::utility::{EvalVariant, UtilityProfile};

    fn example() -> (Election, UtilityProfile) {
        let senior = Ballot::from_indices(&[4, 5, 2, 3, 0, 1], 6).unwrap();
        let other = Ballot::from_indices(&[3, 2, 1, 0, 4, 5], 6).unwrap();
        let names = ["b1", "b2", "m1", "m2", "o1", "o2"].map(String::from).to_vec();
        let election = Election::new(names, vec![(senior, 2), (other, 1)]).unwrap();
        let profile = UtilityProfile::new(vec![vec![10, 5, 4, 0, 0, 0], vec![1, 2, 5, 7, 0, 0]]).unwrap();
        (election, profile)
    }

    #[test]
    fn strength_examples() {
        let single = Election::unnamed(3, vec![(Ballot::from_indices(&[0, 1, 2], 3).unwrap(), 1)]).unwrap();
        // Scores (1,0,0) under ell = 1; the 0-0 tie follows c2 < c1.
        let order = LexOrder::from_indices(&[2, 1, 0]).unwrap();
        let s = strength_order(&single, 1, &order).unwrap();
        assert_eq!(s.rank(), &[CandidateId(0), CandidateId(2), CandidateId(1)]);

        let (election, _) = example();
        let s = strength_order(&election, 2, &LexOrder::identity(6)).unwrap();
        let expect: Vec<CandidateId> = [4, 5, 2, 3, 0, 1].map(CandidateId).to_vec();
        assert_eq!(s.rank(), expect.as_slice());
    }

    #[test]
    fn strength_with_scores_and_lex() {
        // Scores (3,1,1), lex c1 < c2 < c0.
        let b = |o: &[usize]| Ballot::from_indices(o, 3).unwrap();
        let e = Election::unnamed(3, vec![(b(&[0, 1, 2]), 3), (b(&[1, 2, 0]), 1), (b(&[2, 1, 0]), 1)]).unwrap();
        assert_eq!(score(&e, 1).unwrap().0, vec![3, 1, 1]);
        let s = strength_order(&e, 1, &LexOrder::from_indices(&[1, 2, 0]).unwrap()).unwrap();
        assert_eq!(s.rank(), &[CandidateId(0), CandidateId(1), CandidateId(2)]);
    }

    #[test]
    fn bloc_examples() {
        let (election, profile) = example();
        let util = CmInstance::new(
            election.clone(),
            2,
            2,
            profile.clone(),
            EvalVariant::Utilitarian,
            TieRule::Optimistic(EvalVariant::Utilitarian),
        )
        .unwrap();
        let m = cm_bloc(&util).unwrap().unwrap();
        assert_eq!((m.value, &m.resulting_egroup), (20, &Egroup::from_indices(&[0, 2])));

        let cand = CmInstance::new(
            election,
            2,
            2,
            profile,
            EvalVariant::CandidateWiseEgalitarian,
            TieRule::Optimistic(EvalVariant::CandidateWiseEgalitarian),
        )
        .unwrap();
        let m = cm_bloc(&cand).unwrap().unwrap();
        // Supporting b2 and m1 leaves b2 tied with o1 and o2; optimism picks b2.
        assert_eq!((m.value, &m.resulting_egroup), (6, &Egroup::from_indices(&[1, 2])));
    }

    #[test]
    fn bloc_requires_ell_equal_k() {
        let (election, profile) = example();
        let inst = CmInstance::new(
            election,
            1,
            2,
            profile,
            EvalVariant::Utilitarian,
            TieRule::Lexicographic(LexOrder::identity(6)),
        )
        .unwrap();
        assert!(cm_bloc(&inst).is_err());
    }
}
