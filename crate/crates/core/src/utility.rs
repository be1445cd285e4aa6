//! Manipulator utilities and the three ways of evaluating an egroup for a
//! coalition.

use std::collections::BTreeSet;
use std::fmt;

use crate::election::{CandidateId, Egroup};
use crate::error::{Error, Result};

pub type Utility = u64;

/// How a coalition aggregates its members' utilities for an egroup.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EvalVariant {
    /// Sum over manipulators of their summed utilities.
    Utilitarian,
    /// Minimum over manipulators of their summed utilities.
    Egalitarian,
    /// Sum over members of the minimum utility any manipulator assigns.
    CandidateWiseEgalitarian,
}

impl EvalVariant {
    pub const ALL: [EvalVariant; 3] =
        [EvalVariant::Utilitarian, EvalVariant::Egalitarian, EvalVariant::CandidateWiseEgalitarian];

    pub fn short_name(self) -> &'static str {
        match self {
            EvalVariant::Utilitarian => "util",
            EvalVariant::Egalitarian => "egal",
            EvalVariant::CandidateWiseEgalitarian => "candegal",
        }
    }
}

impl fmt::Display for EvalVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

/// `rows[i][c]` is manipulator `i`'s utility for candidate `c`.
///
/// The grand total of all entries is checked to fit in a `u64` at
/// construction, so every evaluation below is overflow-free.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UtilityProfile {
    num_candidates: usize,
    rows: Vec<Vec<Utility>>,
}

impl UtilityProfile {
    pub fn new(rows: Vec<Vec<Utility>>) -> Result<Self> {
        let Some(first) = rows.first() else {
            return Err(Error::InvalidParameter("a utility profile needs at least one manipulator".into()));
        };
        let m = first.len();
        if let Some(i) = rows.iter().position(|row| row.len() != m) {
            return Err(Error::InvalidParameter(format!(
                "utility row {i} has length {}, expected {m}",
                rows[i].len()
            )));
        }
        rows.iter()
            .flatten()
            .try_fold(0u64, |acc, &u| acc.checked_add(u))
            .ok_or_else(|| Error::Overflow("total utility exceeds u64".into()))?;
        Ok(UtilityProfile { num_candidates: m, rows })
    }

    /// `r` manipulators that value nothing.
    pub fn zeros(r: usize, m: usize) -> Self {
        UtilityProfile { num_candidates: m, rows: vec![vec![0; m]; r] }
    }

    pub fn num_manipulators(&self) -> usize {
        self.rows.len()
    }

    pub fn num_candidates(&self) -> usize {
        self.num_candidates
    }

    pub fn rows(&self) -> &[Vec<Utility>] {
        &self.rows
    }

    pub fn utility(&self, manipulator: usize, c: CandidateId) -> Utility {
        self.rows[manipulator][c.0]
    }

    /// The column of utilities for `c`, one entry per manipulator.
    pub fn type_vector(&self, c: CandidateId) -> Vec<Utility> {
        self.rows.iter().map(|row| row[c.0]).collect()
    }

    /// Number of distinct utility values over the whole matrix.
    pub fn distinct_values(&self) -> usize {
        self.rows.iter().flatten().collect::<BTreeSet<_>>().len()
    }

    /// Summed utility of `members` for one manipulator.
    pub fn row_sum(&self, manipulator: usize, members: &[CandidateId]) -> Utility {
        members.iter().map(|c| self.rows[manipulator][c.0]).sum()
    }

    fn check_members(&self, members: &[CandidateId]) -> Result<()> {
        match members.iter().find(|c| c.0 >= self.num_candidates) {
            Some(c) => Err(Error::InvalidParameter(format!(
                "candidate {} out of range for a profile over {} candidates",
                c.0, self.num_candidates
            ))),
            None => Ok(()),
        }
    }
}

pub fn evaluate(profile: &UtilityProfile, egroup: &Egroup, variant: EvalVariant) -> Result<Utility> {
    profile.check_members(egroup.members())?;
    Ok(evaluate_members(profile, egroup.members(), variant))
}

/// Unchecked evaluation of an arbitrary member list.
pub(crate) fn evaluate_members(profile: &UtilityProfile, members: &[CandidateId], variant: EvalVariant) -> Utility {
    match variant {
        EvalVariant::Utilitarian => (0..profile.num_manipulators()).map(|i| profile.row_sum(i, members)).sum(),
        EvalVariant::Egalitarian => (0..profile.num_manipulators())
            .map(|i| profile.row_sum(i, members))
            .min()
            .unwrap_or(0),
        EvalVariant::CandidateWiseEgalitarian => members
            .iter()
            .map(|&c| profile.rows.iter().map(|row| row[c.0]).min().unwrap_or(0))
            .sum(),
    }
}

/// Collapses the profile into one utility row whose sum over any egroup
/// equals the egroup's evaluation: column sums for utilitarian, column
/// minima for candidate-wise egalitarian.
pub fn contract(profile: &UtilityProfile, variant: EvalVariant) -> Result<Vec<Utility>> {
    let columns = (0..profile.num_candidates).map(|c| profile.rows.iter().map(move |row| row[c]));
    match variant {
        EvalVariant::Utilitarian => Ok(columns.map(|col| col.sum()).collect()),
        EvalVariant::CandidateWiseEgalitarian => Ok(columns.map(|col| col.min().unwrap_or(0)).collect()),
        EvalVariant::Egalitarian => Err(Error::UnsupportedVariant(
            "the egalitarian evaluation does not contract to a single row".into(),
        )),
    }
}
