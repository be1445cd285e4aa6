//! Brute-force reference solvers, random instance generators and the two
//! hardness reductions, used to check the fast solvers.
//!
//! The oracles share no code with the solvers beyond scoring and the
//! evaluation functions: winner determination, tie-breaking and the search
//! over manipulator profiles are all done by direct enumeration.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::election::{score, Ballot, CandidateId, Egroup, Election};
use crate::error::{Error, Result};
use crate::manipulation::CmInstance;
use crate::tiebreak::{LexOrder, TiePerspective, TieRule};
use crate::utility::{evaluate, EvalVariant, Utility, UtilityProfile};

/// Upper limit on the number of objects an oracle enumerates.
pub const ENUMERATION_LIMIT: u128 = 1_000_000;

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// All `k`-subsets of `0..n` as ascending index lists, in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return out;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn better(rule: &TieRule, candidate: Utility, incumbent: Utility) -> bool {
    match rule {
        TieRule::Pessimistic(_) => candidate < incumbent,
        _ => candidate > incumbent,
    }
}

/// Completion chosen by `rule` and its value under `variant`, by enumerating
/// every completion. Among equally good completions the one with the
/// smallest sorted index sequence is returned.
pub fn brute_tie(p: &TiePerspective<'_>, rule: &TieRule, variant: EvalVariant) -> Result<(Egroup, Utility)> {
    let seats = p.open_seats();
    let completion = |picks: &[CandidateId]| Egroup::new(p.confirmed.iter().chain(picks).copied());
    let rule_variant = match rule {
        TieRule::Lexicographic(order) => {
            let mut ranked = p.pending.clone();
            ranked.sort_by_key(|&c| order.position(c));
            let egroup = completion(&ranked[..seats]);
            let value = evaluate(p.profile, &egroup, variant)?;
            return Ok((egroup, value));
        }
        TieRule::Optimistic(v) | TieRule::Pessimistic(v) => *v,
    };
    let count = binomial(p.pending.len(), seats);
    if count > ENUMERATION_LIMIT {
        return Err(Error::TooLarge(format!("{count} completions")));
    }
    let mut best: Option<(Egroup, Utility)> = None;
    for combo in combinations(p.pending.len(), seats) {
        let picks: Vec<CandidateId> = combo.iter().map(|&i| p.pending[i]).collect();
        let egroup = completion(&picks);
        let key = evaluate(p.profile, &egroup, rule_variant)?;
        if best.as_ref().map_or(true, |(_, b)| better(rule, key, *b)) {
            best = Some((egroup, key));
        }
    }
    let (egroup, _) = best.expect("a valid perspective has at least one completion");
    let value = evaluate(p.profile, &egroup, variant)?;
    Ok((egroup, value))
}

/// Winning egroup for final scores `scores`, found without the partition or
/// tie-breaking code of the solvers.
fn brute_winners(scores: &[u64], k: usize, rule: &TieRule, profile: &UtilityProfile) -> Result<Egroup> {
    let mut sorted = scores.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    let threshold = sorted[k - 1];
    let ids = |keep: &dyn Fn(u64) -> bool| -> Vec<CandidateId> {
        scores.iter().enumerate().filter(|&(_, &s)| keep(s)).map(|(i, _)| CandidateId(i)).collect()
    };
    let above = ids(&|s| s > threshold);
    let tied = ids(&|s| s == threshold);
    if above.len() + tied.len() == k {
        return Ok(Egroup::new(above.into_iter().chain(tied)));
    }
    let p = TiePerspective::new(above, tied, k, profile)?;
    Ok(brute_tie(&p, rule, EvalVariant::Utilitarian)?.0)
}

/// Best manipulation found by exhaustive search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BruteManipulation {
    pub value: Utility,
    pub egroup: Egroup,
    /// Approval set of each manipulator, sorted by index.
    pub approvals: Vec<Vec<CandidateId>>,
}

impl BruteManipulation {
    /// Ballots listing each approval set first, then the rest by index.
    pub fn ballots(&self, m: usize) -> Result<Vec<Ballot>> {
        self.approvals
            .iter()
            .map(|set| {
                let order: Vec<CandidateId> =
                    set.iter().copied().chain((0..m).map(CandidateId).filter(|c| !set.contains(c))).collect();
                Ballot::new(order, m)
            })
            .collect()
    }
}

fn guard_profiles(inst: &CmInstance, per_manipulator: u128) -> Result<()> {
    let r = inst.num_manipulators() as u32;
    let total = per_manipulator.checked_pow(r).unwrap_or(u128::MAX);
    if total > ENUMERATION_LIMIT {
        return Err(Error::TooLarge(format!("{per_manipulator}^{r} manipulator profiles")));
    }
    Ok(())
}

fn evaluate_profile(inst: &CmInstance, base: &[u64], sets: &[&Vec<usize>]) -> Result<(Egroup, Utility)> {
    let mut scores = base.to_vec();
    for set in sets {
        for &c in *set {
            scores[c] += 1;
        }
    }
    let egroup = brute_winners(&scores, inst.k, &inst.rule, &inst.profile)?;
    let value = evaluate(&inst.profile, &egroup, inst.variant)?;
    Ok((egroup, value))
}

fn to_approvals(sets: &[&Vec<usize>]) -> Vec<Vec<CandidateId>> {
    sets.iter().map(|s| s.iter().copied().map(CandidateId).collect()).collect()
}

/// Optimal manipulation by enumerating every profile of approval sets.
/// Ties keep the first profile in lexicographic order of set indices.
pub fn brute_cm(inst: &CmInstance) -> Result<BruteManipulation> {
    let m = inst.num_candidates();
    let r = inst.num_manipulators();
    guard_profiles(inst, binomial(m, inst.ell))?;
    let sets = combinations(m, inst.ell);
    let base = score(&inst.election, inst.ell)?;

    // Approval sets are interchangeable between manipulators, so
    // non-decreasing index tuples cover every outcome.
    let mut best: Option<BruteManipulation> = None;
    let mut tuple = vec![0usize; r];
    loop {
        let chosen: Vec<&Vec<usize>> = tuple.iter().map(|&i| &sets[i]).collect();
        let (egroup, value) = evaluate_profile(inst, base.as_slice(), &chosen)?;
        if best.as_ref().map_or(true, |b| value > b.value) {
            best = Some(BruteManipulation { value, egroup, approvals: to_approvals(&chosen) });
        }
        let Some(i) = (0..r).rev().find(|&i| tuple[i] + 1 < sets.len()) else { break };
        tuple[i] += 1;
        for j in i + 1..r {
            tuple[j] = tuple[i];
        }
    }
    Ok(best.expect("at least one profile exists"))
}

/// Optimal manipulation in which every manipulator approves the same set.
pub fn brute_cm_consistent(inst: &CmInstance) -> Result<BruteManipulation> {
    let m = inst.num_candidates();
    let count = binomial(m, inst.ell);
    if count > ENUMERATION_LIMIT {
        return Err(Error::TooLarge(format!("{count} approval sets")));
    }
    let base = score(&inst.election, inst.ell)?;
    let mut best: Option<BruteManipulation> = None;
    for set in combinations(m, inst.ell) {
        let chosen = vec![&set; inst.num_manipulators()];
        let (egroup, value) = evaluate_profile(inst, base.as_slice(), &chosen)?;
        if best.as_ref().map_or(true, |b| value > b.value) {
            best = Some(BruteManipulation { value, egroup, approvals: to_approvals(&chosen) });
        }
    }
    Ok(best.expect("at least one approval set exists"))
}

/// Parameters of a random instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RandomSpec {
    pub m: usize,
    pub n: usize,
    pub r: usize,
    pub ell: usize,
    pub k: usize,
    pub max_utility: Utility,
    pub seed: u64,
}

impl RandomSpec {
    pub fn validate(&self) -> Result<()> {
        if self.ell == 0 || self.ell >= self.m {
            return Err(Error::InvalidParameter(format!("ell must satisfy 1 <= ell < m = {}, got {}", self.m, self.ell)));
        }
        if self.k == 0 || self.k >= self.m {
            return Err(Error::InvalidParameter(format!("k must satisfy 1 <= k < m = {}, got {}", self.m, self.k)));
        }
        if self.r == 0 {
            return Err(Error::InvalidParameter("at least one manipulator is required".into()));
        }
        Ok(())
    }
}

fn random_ballot(rng: &mut ChaCha8Rng, m: usize) -> Ballot {
    let mut order: Vec<usize> = (0..m).collect();
    order.shuffle(rng);
    Ballot::from_indices(&order, m).expect("a shuffled range is a permutation")
}

fn random_profile(rng: &mut ChaCha8Rng, r: usize, m: usize, max: Utility) -> UtilityProfile {
    let rows = (0..r).map(|_| (0..m).map(|_| rng.gen_range(0..=max)).collect()).collect();
    UtilityProfile::new(rows).expect("rows have equal length")
}

/// Election with `n` uniformly random ballots and a profile with utilities
/// uniform in `[0, max_utility]`, determined by the seed.
pub fn gen_random(spec: &RandomSpec) -> Result<(Election, UtilityProfile)> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let ballots = (0..spec.n).map(|_| (random_ballot(&mut rng, spec.m), 1)).collect();
    let election = Election::unnamed(spec.m, ballots)?;
    let profile = random_profile(&mut rng, spec.r, spec.m, spec.max_utility);
    Ok((election, profile))
}

/// A tie-breaking instance that owns its profile.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TieInstance {
    pub profile: UtilityProfile,
    pub confirmed: Vec<CandidateId>,
    pub pending: Vec<CandidateId>,
    pub k: usize,
}

impl TieInstance {
    pub fn perspective(&self) -> Result<TiePerspective<'_>> {
        TiePerspective::new(self.confirmed.clone(), self.pending.clone(), self.k, &self.profile)
    }
}

/// Random perspective over `m` candidates with at most `max_pending`
/// pending ones.
pub fn gen_perspective(seed: u64, r: usize, m: usize, max_pending: usize, max_utility: Utility) -> Result<TieInstance> {
    if r == 0 || m < 2 || max_pending == 0 {
        return Err(Error::InvalidParameter("need r >= 1, m >= 2 and max_pending >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let profile = random_profile(&mut rng, r, m, max_utility);
    let mut ids: Vec<CandidateId> = (0..m).map(CandidateId).collect();
    ids.shuffle(&mut rng);
    let pending_len = rng.gen_range(1..=max_pending.min(m));
    let confirmed_len = rng.gen_range(0..=m - pending_len);
    let pending = ids[..pending_len].to_vec();
    let confirmed = ids[pending_len..pending_len + confirmed_len].to_vec();
    let k = confirmed_len + rng.gen_range(1..=pending_len);
    let inst = TieInstance { profile, confirmed, pending, k };
    inst.perspective()?;
    Ok(inst)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetCoverInstance {
    pub universe_size: usize,
    pub sets: Vec<Vec<usize>>,
    pub h: usize,
}

impl SetCoverInstance {
    /// Whether some `h` sets cover the universe, by enumeration.
    pub fn has_cover(&self) -> bool {
        let h = self.h.min(self.sets.len());
        combinations(self.sets.len(), h).into_iter().any(|combo| {
            (0..self.universe_size).all(|x| combo.iter().any(|&s| self.sets[s].contains(&x)))
        })
    }
}

/// One pending candidate per set and one manipulator per element, who gives
/// utility one to the sets containing it. An egroup of size `h` has
/// egalitarian value at least one iff its sets cover the universe.
pub fn reduce_setcover_to_tie(sc: &SetCoverInstance) -> Result<TieInstance> {
    if sc.universe_size == 0 || sc.sets.is_empty() || sc.h == 0 {
        return Err(Error::InvalidParameter("need a nonempty universe, at least one set and h >= 1".into()));
    }
    if let Some(x) = sc.sets.iter().flatten().find(|&&x| x >= sc.universe_size) {
        return Err(Error::InvalidParameter(format!("element {x} outside a universe of size {}", sc.universe_size)));
    }
    let m = sc.sets.len();
    // A perspective needs at least one candidate outside the egroup.
    let width = m + 1;
    let rows = (0..sc.universe_size)
        .map(|x| (0..width).map(|j| Utility::from(j < m && sc.sets[j].contains(&x))).collect())
        .collect();
    Ok(TieInstance {
        profile: UtilityProfile::new(rows)?,
        confirmed: Vec::new(),
        pending: (0..m).map(CandidateId).collect(),
        k: sc.h.min(m),
    })
}

/// Coalitional manipulation instance whose optimal egalitarian value equals
/// the optimistic egalitarian tie-breaking value of `p`, for any rule.
///
/// Candidates keep their indices; added candidates follow. Manipulators with
/// utility `M` (the largest row total) for everyone are appended until the
/// coalition has at least `k − |C+|` approvals. Scaffold voters give each
/// confirmed candidate score `2r + 3` and each pending one `r + 2`; padding
/// candidates used to fill scaffold ballots score at most one, and
/// `ℓr − (k − |C+|)` spare candidates score zero. A lexicographic order over
/// the original candidates is extended by the added candidates in index
/// order.
pub fn reduce_tie_to_cm(p: &TiePerspective<'_>, ell: usize, rule: &TieRule) -> Result<CmInstance> {
    if ell == 0 {
        return Err(Error::InvalidParameter("ell must be at least 1".into()));
    }
    let m0 = p.profile.num_candidates();
    let seats = p.open_seats();
    let pump = p.profile.rows().iter().map(|row| row.iter().sum::<Utility>()).max().unwrap_or(0);
    let mut rows: Vec<Vec<Utility>> = p.profile.rows().to_vec();
    while rows.len() * ell < seats {
        rows.push(vec![pump; m0]);
    }
    let r = rows.len() as u64;

    let mut targets = vec![0u64; m0];
    for &c in &p.confirmed {
        targets[c.0] = 2 * r + 3;
    }
    for &c in &p.pending {
        targets[c.0] = r + 2;
    }
    // Each scaffold ballot approves the `ell` targets with the most score
    // still missing, topped up with fresh padding candidates.
    let mut remaining = targets.clone();
    let mut approval_sets: Vec<Vec<usize>> = Vec::new();
    let mut padding = 0usize;
    while remaining.iter().any(|&s| s > 0) {
        let mut open: Vec<usize> = (0..m0).filter(|&c| remaining[c] > 0).collect();
        open.sort_by(|&a, &b| remaining[b].cmp(&remaining[a]).then(a.cmp(&b)));
        open.truncate(ell);
        for &c in &open {
            remaining[c] -= 1;
        }
        let fill = ell - open.len();
        open.extend((0..fill).map(|i| m0 + padding + i));
        padding += fill;
        approval_sets.push(open);
    }
    let spare = (ell as u64 * r) as usize - seats;
    let mut m = m0 + padding + spare;
    // ℓ < m and k < m must hold for a valid instance.
    m = m.max(ell + 1).max(p.k + 1);

    let ballots = approval_sets
        .iter()
        .map(|set| {
            let order: Vec<usize> = set.iter().copied().chain((0..m).filter(|c| !set.contains(c))).collect();
            Ok((Ballot::from_indices(&order, m)?, 1))
        })
        .collect::<Result<Vec<_>>>()?;
    let names = (0..m).map(|i| if i < m0 { format!("c{i}") } else { format!("d{}", i - m0) }).collect();
    let election = Election::new(names, ballots)?;

    let scores = score(&election, ell)?;
    for c in 0..m {
        let expected = if c < m0 { targets[c] } else { u64::from(c < m0 + padding) };
        let actual = scores.as_slice()[c];
        let ok = if c < m0 { actual == expected } else { actual <= expected };
        if !ok {
            return Err(Error::Internal(format!("scaffold gives candidate {c} score {actual}, expected {expected}")));
        }
    }

    let rows = rows
        .into_iter()
        .map(|mut row| {
            row.resize(m, 0);
            row
        })
        .collect();
    let rule = match rule {
        TieRule::Lexicographic(order) => {
            let mut rank: Vec<CandidateId> = order.rank().to_vec();
            rank.extend((order.len()..m).map(CandidateId));
            TieRule::Lexicographic(LexOrder::new(rank)?)
        }
        other => other.clone(),
    };
    CmInstance::new(election, ell, p.k, UtilityProfile::new(rows)?, EvalVariant::Egalitarian, rule)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manipulation;
    use crate::tiebreak::tie_break;

    fn ids(v: &[usize]) -> Vec<CandidateId> {
        v.iter().copied().map(CandidateId).collect()
    }

    // b1 b2 m1 m2 o1 o2
    fn table() -> UtilityProfile {
        UtilityProfile::new(vec![vec![10, 5, 4, 0, 0, 0], vec![1, 2, 5, 7, 0, 0]]).unwrap()
    }

    fn example_election() -> Election {
        let senior = Ballot::from_indices(&[4, 5, 2, 3, 0, 1], 6).unwrap();
        let other = Ballot::from_indices(&[3, 2, 1, 0, 4, 5], 6).unwrap();
        let names = ["b1", "b2", "m1", "m2", "o1", "o2"].map(String::from).to_vec();
        Election::new(names, vec![(senior, 2), (other, 1)]).unwrap()
    }

    #[test]
    fn combinations_are_lexicographic() {
        assert_eq!(combinations(4, 2), vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
        assert_eq!(combinations(3, 0), vec![Vec::<usize>::new()]);
        assert_eq!(combinations(5, 3).len() as u128, binomial(5, 3));
    }

    #[test]
    fn brute_tie_examples() {
        let t = table();
        let egal = EvalVariant::Egalitarian;
        let p1 = TiePerspective::new(vec![], ids(&[0, 1, 2, 3]), 1, &t).unwrap();
        assert_eq!(brute_tie(&p1, &TieRule::Optimistic(egal), egal).unwrap(), (Egroup::from_indices(&[2]), 4));
        let p2 = TiePerspective::new(vec![], ids(&[0, 1, 2, 3]), 2, &t).unwrap();
        assert_eq!(brute_tie(&p2, &TieRule::Pessimistic(egal), egal).unwrap(), (Egroup::from_indices(&[0, 1]), 3));
        assert_eq!(brute_tie(&p2, &TieRule::Optimistic(egal), egal).unwrap(), (Egroup::from_indices(&[0, 3]), 8));
        // No choice.
        let p3 = TiePerspective::new(ids(&[4]), ids(&[5]), 2, &t).unwrap();
        let rule = TieRule::Pessimistic(EvalVariant::Utilitarian);
        assert_eq!(brute_tie(&p3, &rule, egal).unwrap().0, Egroup::from_indices(&[4, 5]));
    }

    #[test]
    fn brute_cm_examples() {
        let sntv = CmInstance::new(
            example_election(),
            1,
            2,
            table(),
            EvalVariant::Utilitarian,
            TieRule::Lexicographic(LexOrder::identity(6)),
        )
        .unwrap();
        let best = brute_cm(&sntv).unwrap();
        assert_eq!(best.value, 11);
        let ballots = best.ballots(6).unwrap();
        assert_eq!(sntv.outcome(&ballots).unwrap(), (best.egroup.clone(), 11));

        let egal = EvalVariant::Egalitarian;
        let bloc = CmInstance::new(example_election(), 2, 2, table(), egal, TieRule::Optimistic(egal)).unwrap();
        let best = brute_cm(&bloc).unwrap();
        assert_eq!((best.value, &best.egroup), (8, &Egroup::from_indices(&[0, 3])));

        // One manipulator, two candidates: the approval decides.
        let e = Election::unnamed(2, vec![]).unwrap();
        let prof = UtilityProfile::new(vec![vec![1, 3]]).unwrap();
        let inst = CmInstance::new(e, 1, 1, prof, EvalVariant::Utilitarian, TieRule::Lexicographic(LexOrder::identity(2)))
            .unwrap();
        assert_eq!(brute_cm(&inst).unwrap().value, 3);
    }

    #[test]
    fn guards_refuse_large_searches() {
        let m = 30;
        let e = Election::unnamed(m, vec![]).unwrap();
        let inst = CmInstance::new(
            e,
            5,
            2,
            UtilityProfile::zeros(3, m),
            EvalVariant::Utilitarian,
            TieRule::Lexicographic(LexOrder::identity(m)),
        )
        .unwrap();
        assert!(matches!(brute_cm(&inst), Err(Error::TooLarge(_))));
        let prof = UtilityProfile::zeros(1, 40);
        let p = TiePerspective::new(vec![], ids(&(0..40).collect::<Vec<_>>()), 20, &prof).unwrap();
        let rule = TieRule::Optimistic(EvalVariant::Egalitarian);
        assert!(matches!(brute_tie(&p, &rule, EvalVariant::Egalitarian), Err(Error::TooLarge(_))));
    }

    #[test]
    fn gen_random_is_deterministic() {
        let spec = RandomSpec { m: 4, n: 3, r: 2, ell: 2, k: 2, max_utility: 3, seed: 9 };
        let (e1, p1) = gen_random(&spec).unwrap();
        let (e2, p2) = gen_random(&spec).unwrap();
        assert_eq!((&e1, &p1), (&e2, &p2));
        assert_eq!((e1.num_candidates(), e1.num_voters()), (4, 3));
        assert!(p1.rows().iter().flatten().all(|&u| u <= 3));
        let (_, zero) = gen_random(&RandomSpec { max_utility: 0, ..spec }).unwrap();
        assert!(zero.rows().iter().flatten().all(|&u| u == 0));
        assert!(gen_random(&RandomSpec { ell: 4, ..spec }).is_err());
    }

    #[test]
    fn setcover_examples() {
        let egal = EvalVariant::Egalitarian;
        let value = |sc: SetCoverInstance| {
            let t = reduce_setcover_to_tie(&sc).unwrap();
            let p = t.perspective().unwrap();
            tie_break(&p, &TieRule::Optimistic(egal)).unwrap().value.unwrap()
        };
        assert_eq!(value(SetCoverInstance { universe_size: 2, sets: vec![vec![0], vec![1], vec![0, 1]], h: 1 }), 1);
        assert_eq!(value(SetCoverInstance { universe_size: 2, sets: vec![vec![0], vec![0]], h: 2 }), 0);
        let triangle = vec![vec![0, 1], vec![1, 2], vec![0, 2]];
        assert_eq!(value(SetCoverInstance { universe_size: 3, sets: triangle, h: 2 }), 1);
    }

    #[test]
    fn tie_to_cm_examples() {
        let t = table();
        let egal = EvalVariant::Egalitarian;
        let p = TiePerspective::new(vec![], ids(&[0, 1, 2, 3]), 2, &t).unwrap();
        let inst = reduce_tie_to_cm(&p, 1, &TieRule::Pessimistic(egal)).unwrap();
        assert_eq!(brute_cm(&inst).unwrap().value, 8);
        assert_eq!(manipulation::cm_egal(&inst).unwrap().unwrap().value, 8);

        // Forced completion.
        let p = TiePerspective::new(ids(&[4]), ids(&[1]), 2, &t).unwrap();
        let inst = reduce_tie_to_cm(&p, 1, &TieRule::Lexicographic(LexOrder::identity(6))).unwrap();
        assert_eq!(brute_cm(&inst).unwrap().value, 2);

        let sc = SetCoverInstance { universe_size: 2, sets: vec![vec![0], vec![1], vec![0, 1]], h: 1 };
        let tie = reduce_setcover_to_tie(&sc).unwrap();
        let inst = reduce_tie_to_cm(&tie.perspective().unwrap(), 1, &TieRule::Optimistic(egal)).unwrap();
        assert_eq!(brute_cm(&inst).unwrap().value, 1);
    }
}
