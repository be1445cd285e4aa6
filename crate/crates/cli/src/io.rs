//! JSON file formats. Files name candidates; the core works on indices in
//! the order of the `candidates` array.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use anyhow::{bail, ensure, Context, Result};
use serde::{Deserialize, Serialize};
use shortlist_core::{Ballot, CandidateId, Election, UtilityProfile};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VoteEntry {
    pub order: Vec<String>,
    pub count: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElectionFile {
    pub candidates: Vec<String>,
    pub votes: Vec<VoteEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManipulatorEntry {
    pub id: String,
    pub utilities: BTreeMap<String, u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UtilityFile {
    pub manipulators: Vec<ManipulatorEntry>,
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("cannot parse {}", path.display()))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    std::fs::write(path, text + "\n").with_context(|| format!("cannot write {}", path.display()))
}

/// Name to index lookup for one election.
#[derive(Debug)]
pub struct Names {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl Names {
    pub fn new(names: &[String]) -> Result<Self> {
        ensure!(!names.is_empty(), "the candidate list is empty");
        let mut index = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                bail!("candidate {name:?} is listed twice");
            }
        }
        Ok(Names { names: names.to_vec(), index })
    }

    pub fn id(&self, name: &str) -> Result<CandidateId> {
        self.index.get(name).map(|&i| CandidateId(i)).with_context(|| format!("unknown candidate {name:?}"))
    }

    pub fn name(&self, c: CandidateId) -> &str {
        &self.names[c.0]
    }

    pub fn all(&self) -> &[String] {
        &self.names
    }

    pub fn list(&self, ids: &[CandidateId]) -> Vec<String> {
        ids.iter().map(|&c| self.name(c).to_owned()).collect()
    }

    /// Full ranking from a list of names.
    pub fn ranking(&self, order: &[String]) -> Result<Vec<CandidateId>> {
        let m = self.names.len();
        ensure!(order.len() == m, "lists {} candidates, the election has {m}", order.len());
        let mut seen = vec![false; m];
        order
            .iter()
            .map(|name| {
                let c = self.id(name)?;
                ensure!(!std::mem::replace(&mut seen[c.0], true), "candidate {name:?} appears twice");
                Ok(c)
            })
            .collect()
    }
}

impl ElectionFile {
    pub fn to_election(&self) -> Result<(Election, Names)> {
        let names = Names::new(&self.candidates)?;
        let m = self.candidates.len();
        let ballots = self
            .votes
            .iter()
            .enumerate()
            .map(|(i, vote)| {
                ensure!(vote.count >= 1, "vote {i}: count must be at least 1");
                let order = names.ranking(&vote.order).with_context(|| format!("vote {i}"))?;
                Ok((Ballot::new(order, m)?, vote.count))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((Election::new(self.candidates.clone(), ballots)?, names))
    }

    pub fn from_election(election: &Election) -> Self {
        let names = election.names();
        let votes = election
            .ballots()
            .iter()
            .map(|(ballot, count)| VoteEntry {
                order: ballot.order().iter().map(|c| names[c.0].clone()).collect(),
                count: *count,
            })
            .collect();
        ElectionFile { candidates: names.to_vec(), votes }
    }
}

impl UtilityFile {
    pub fn to_profile(&self, names: &Names) -> Result<UtilityProfile> {
        let m = names.all().len();
        let rows = self
            .manipulators
            .iter()
            .enumerate()
            .map(|(q, entry)| {
                let mut row = vec![None; m];
                for (name, &u) in &entry.utilities {
                    let c = names.id(name).with_context(|| format!("manipulator {:?}", entry.id))?;
                    row[c.0] = Some(u);
                }
                row.into_iter()
                    .enumerate()
                    .map(|(c, u)| {
                        u.with_context(|| {
                            format!("manipulator {q} ({:?}) gives no utility for {:?}", entry.id, names.all()[c])
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(UtilityProfile::new(rows)?)
    }

    /// Manipulators are named `u1, u2, ...`.
    pub fn from_profile(profile: &UtilityProfile, names: &[String]) -> Self {
        let manipulators = profile
            .rows()
            .iter()
            .enumerate()
            .map(|(q, row)| ManipulatorEntry {
                id: format!("u{}", q + 1),
                utilities: names.iter().cloned().zip(row.iter().copied()).collect(),
            })
            .collect();
        UtilityFile { manipulators }
    }
}
