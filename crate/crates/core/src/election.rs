//! Elections under the l-Bloc family of scoring rules.
//!
//! Every ballot is a full strict ranking; l-Bloc gives one point to each of
//! the top `ell` candidates of every ballot. The co-winning egroups of size
//! `k` are exactly the size-`k` sets of maximum total score, which is
//! captured by [`CandidatePartition`].

use std::fmt;

use crate::error::{Error, Result};
use crate::tiebreak::{self, TiePerspective, TieRule};
use crate::utility::UtilityProfile;

/// Positional candidate identity. Names are display metadata only.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CandidateId(pub usize);

impl CandidateId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for CandidateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c{}", self.0)
    }
}

/// A strict ranking of all candidates, most preferred first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ballot {
    order: Vec<CandidateId>,
}

impl Ballot {
    /// Builds a ballot, checking that `order` is a permutation of `0..m`.
    pub fn new(order: Vec<CandidateId>, m: usize) -> Result<Self> {
        check_permutation(&order, m).map_err(|reason| Error::InvalidBallot { index: 0, reason })?;
        Ok(Ballot { order })
    }

    pub fn from_indices(order: &[usize], m: usize) -> Result<Self> {
        Self::new(order.iter().copied().map(CandidateId).collect(), m)
    }

    pub fn order(&self) -> &[CandidateId] {
        &self.order
    }

    /// The candidates approved under l-Bloc.
    pub fn top(&self, ell: usize) -> &[CandidateId] {
        &self.order[..ell.min(self.order.len())]
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }
}

pub(crate) fn check_permutation(order: &[CandidateId], m: usize) -> std::result::Result<(), String> {
    if order.len() != m {
        return Err(format!("expected {m} candidates, found {}", order.len()));
    }
    let mut seen = vec![false; m];
    for c in order {
        if c.0 >= m {
            return Err(format!("candidate index {} out of range", c.0));
        }
        if std::mem::replace(&mut seen[c.0], true) {
            return Err(format!("candidate {} listed twice", c.0));
        }
    }
    Ok(())
}

/// Candidates plus a weighted multiset of ballots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Election {
    names: Vec<String>,
    ballots: Vec<(Ballot, u64)>,
}

impl Election {
    pub fn new(names: Vec<String>, ballots: Vec<(Ballot, u64)>) -> Result<Self> {
        let m = names.len();
        if m == 0 {
            return Err(Error::InvalidParameter("an election needs at least one candidate".into()));
        }
        for (index, (ballot, count)) in ballots.iter().enumerate() {
            check_permutation(&ballot.order, m)
                .map_err(|reason| Error::InvalidBallot { index, reason })?;
            if *count == 0 {
                return Err(Error::InvalidBallot { index, reason: "count must be positive".into() });
            }
        }
        Ok(Election { names, ballots })
    }

    /// An election whose candidates are named `c0, c1, ...`.
    pub fn unnamed(m: usize, ballots: Vec<(Ballot, u64)>) -> Result<Self> {
        Self::new((0..m).map(|i| format!("c{i}")).collect(), ballots)
    }

    pub fn num_candidates(&self) -> usize {
        self.names.len()
    }

    /// Total number of voters (sum of ballot counts).
    pub fn num_voters(&self) -> u64 {
        self.ballots.iter().map(|(_, n)| n).sum()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, c: CandidateId) -> &str {
        &self.names[c.0]
    }

    pub fn ballots(&self) -> &[(Ballot, u64)] {
        &self.ballots
    }

    pub fn candidates(&self) -> impl Iterator<Item = CandidateId> {
        (0..self.names.len()).map(CandidateId)
    }

    /// The election extended by the given ballots, one voter each.
    pub fn with_extra_ballots(&self, extra: &[Ballot]) -> Election {
        let mut ballots = self.ballots.clone();
        ballots.extend(extra.iter().cloned().map(|b| (b, 1)));
        Election { names: self.names.clone(), ballots }
    }
}

/// Per-candidate l-Bloc scores.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ScoreVector(pub Vec<u64>);

impl ScoreVector {
    pub fn get(&self, c: CandidateId) -> u64 {
        self.0[c.0]
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Adds `approvals[c]` to every candidate's score.
    pub fn plus(&self, approvals: &[u64]) -> ScoreVector {
        ScoreVector(self.0.iter().zip(approvals).map(|(s, a)| s + a).collect())
    }
}

pub fn score(election: &Election, ell: usize) -> Result<ScoreVector> {
    let m = election.num_candidates();
    if ell == 0 || ell >= m {
        return Err(Error::InvalidParameter(format!("ell must satisfy 1 <= ell < m = {m}, got {ell}")));
    }
    let mut scores = vec![0u64; m];
    for (ballot, count) in election.ballots() {
        for c in ballot.top(ell) {
            scores[c.0] += count;
        }
    }
    Ok(ScoreVector(scores))
}

/// The confirmed / pending / rejected split of the candidates: members of
/// all, some, or no co-winning size-`k` egroups. Each set is sorted by index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidatePartition {
    pub confirmed: Vec<CandidateId>,
    pub pending: Vec<CandidateId>,
    pub rejected: Vec<CandidateId>,
}

pub fn partition(scores: &ScoreVector, k: usize) -> Result<CandidatePartition> {
    let m = scores.len();
    if k == 0 || k >= m {
        return Err(Error::InvalidParameter(format!("k must satisfy 1 <= k < m = {m}, got {k}")));
    }
    let mut sorted = scores.0.clone();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    let threshold = sorted[k - 1];
    let above = scores.0.iter().filter(|&&s| s > threshold).count();
    let at = scores.0.iter().filter(|&&s| s == threshold).count();

    let mut part = CandidatePartition { confirmed: Vec::new(), pending: Vec::new(), rejected: Vec::new() };
    for (i, &s) in scores.0.iter().enumerate() {
        let c = CandidateId(i);
        if s > threshold || (s == threshold && above + at == k) {
            part.confirmed.push(c);
        } else if s == threshold {
            part.pending.push(c);
        } else {
            part.rejected.push(c);
        }
    }
    Ok(part)
}

/// A winning excellence-group; members sorted by index.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Egroup {
    members: Vec<CandidateId>,
}

impl Egroup {
    pub fn new(members: impl IntoIterator<Item = CandidateId>) -> Self {
        let mut members: Vec<_> = members.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        Egroup { members }
    }

    pub fn from_indices(indices: &[usize]) -> Self {
        Self::new(indices.iter().copied().map(CandidateId))
    }

    pub fn members(&self) -> &[CandidateId] {
        &self.members
    }

    pub fn contains(&self, c: CandidateId) -> bool {
        self.members.binary_search(&c).is_ok()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Winning egroup: the confirmed candidates completed from the pending ones
/// by `rule`. `profile` is only consulted by optimistic and pessimistic rules.
pub fn winners(
    election: &Election,
    ell: usize,
    k: usize,
    rule: &TieRule,
    profile: Option<&UtilityProfile>,
) -> Result<Egroup> {
    let scores = score(election, ell)?;
    winners_from_scores(&scores, k, rule, profile)
}

pub fn winners_from_scores(
    scores: &ScoreVector,
    k: usize,
    rule: &TieRule,
    profile: Option<&UtilityProfile>,
) -> Result<Egroup> {
    let part = partition(scores, k)?;
    if part.confirmed.len() == k {
        return Ok(Egroup::new(part.confirmed));
    }
    match rule {
        TieRule::Lexicographic(order) => {
            tiebreak::lex_completion(&part.confirmed, &part.pending, k, order)
        }
        TieRule::Optimistic(_) | TieRule::Pessimistic(_) => {
            let profile = profile.ok_or_else(|| {
                Error::InvalidParameter("optimistic and pessimistic rules need a utility profile".into())
            })?;
            let p = TiePerspective::new(part.confirmed, part.pending, k, profile)?;
            Ok(tiebreak::tie_break(&p, rule)?.egroup)
        }
    }
}

/// Builds `r` ballots such that candidate `c` is among the top `ell` of
/// exactly `demands[c]` of them.
///
/// Each ballot approves the `ell` candidates with the largest remaining
/// demand (smallest index first on ties); approved candidates are listed by
/// index, followed by the rest by index.
pub fn ballots_from_approvals(demands: &[u64], r: usize, ell: usize) -> Result<Vec<Ballot>> {
    let m = demands.len();
    if ell == 0 || ell >= m {
        return Err(Error::InfeasibleDemand(format!("need 1 <= ell < m = {m}, got {ell}")));
    }
    let total: u64 = demands.iter().sum();
    if total != (r * ell) as u64 {
        return Err(Error::InfeasibleDemand(format!(
            "demands sum to {total}, expected r * ell = {}",
            r * ell
        )));
    }
    if let Some((c, d)) = demands.iter().enumerate().find(|(_, &d)| d > r as u64) {
        return Err(Error::InfeasibleDemand(format!("candidate {c} demands {d} > r = {r}")));
    }

    let mut remaining = demands.to_vec();
    let mut ballots = Vec::with_capacity(r);
    let mut by_demand: Vec<usize> = (0..m).collect();
    for _ in 0..r {
        by_demand.sort_by(|&a, &b| remaining[b].cmp(&remaining[a]).then(a.cmp(&b)));
        let mut approved = by_demand[..ell].to_vec();
        if approved.iter().any(|&c| remaining[c] == 0) {
            return Err(Error::InfeasibleDemand("greedy construction ran out of demand".into()));
        }
        approved.sort_unstable();
        let mut order: Vec<CandidateId> = Vec::with_capacity(m);
        let mut is_approved = vec![false; m];
        for &c in &approved {
            remaining[c] -= 1;
            is_approved[c] = true;
            order.push(CandidateId(c));
        }
        order.extend((0..m).filter(|&c| !is_approved[c]).map(CandidateId));
        ballots.push(Ballot { order });
    }
    Ok(ballots)
}

/// Approval counts induced by a set of ballots.
pub fn approval_counts(ballots: &[Ballot], ell: usize, m: usize) -> Vec<u64> {
    let mut counts = vec![0u64; m];
    for b in ballots {
        for c in b.top(ell) {
            counts[c.0] += 1;
        }
    }
    counts
}
