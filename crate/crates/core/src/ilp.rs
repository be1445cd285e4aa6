//! Exact solver for small bounded integer linear programs.
//!
//! Depth-first branch and bound over variable domains. Every node tightens
//! the domains by interval propagation until a fixpoint; a node is pruned
//! when some constraint cannot be met by any point of the remaining box.
//! Once an incumbent exists, the objective itself becomes a propagated
//! constraint demanding strict improvement.

use crate::error::{Error, Result};

/// Largest accepted magnitude for bounds, coefficients and right-hand sides.
pub const MAX_MAGNITUDE: i64 = 1 << 40;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarId(usize);

impl VarId {
    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Variable {
    pub name: String,
    pub lower: i64,
    pub upper: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub terms: Vec<(VarId, i64)>,
    pub relation: Relation,
    pub rhs: i64,
}

impl Constraint {
    pub fn is_satisfied(&self, x: &[i64]) -> bool {
        let lhs: i128 = self.terms.iter().map(|&(v, a)| a as i128 * x[v.0] as i128).sum();
        let rhs = self.rhs as i128;
        match self.relation {
            Relation::Le => lhs <= rhs,
            Relation::Eq => lhs == rhs,
            Relation::Ge => lhs >= rhs,
        }
    }
}

/// Maximize a linear objective over bounded integer variables subject to
/// linear constraints.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IntegerProgram {
    vars: Vec<Variable>,
    constraints: Vec<Constraint>,
    objective: Vec<(VarId, i64)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IpStatus {
    Optimal,
    Infeasible,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IpSolution {
    status: IpStatus,
    assignment: Option<Vec<i64>>,
    objective_value: Option<i64>,
}

impl IpSolution {
    pub fn status(&self) -> IpStatus {
        self.status
    }

    pub fn assignment(&self) -> Option<&[i64]> {
        self.assignment.as_deref()
    }

    pub fn objective_value(&self) -> Option<i64> {
        self.objective_value
    }

    pub fn value(&self, v: VarId) -> Option<i64> {
        self.assignment.as_ref().map(|a| a[v.0])
    }
}

fn check_magnitude(what: &str, value: i64) -> Result<()> {
    if value.unsigned_abs() > MAX_MAGNITUDE as u64 {
        return Err(Error::InvalidProgram(format!("{what} {value} exceeds magnitude {MAX_MAGNITUDE}")));
    }
    Ok(())
}

impl IntegerProgram {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_var(&mut self, name: impl Into<String>, lower: i64, upper: i64) -> Result<VarId> {
        let name = name.into();
        check_magnitude("bound", lower)?;
        check_magnitude("bound", upper)?;
        if lower > upper {
            return Err(Error::InvalidProgram(format!("variable {name} has empty domain [{lower}, {upper}]")));
        }
        self.vars.push(Variable { name, lower, upper });
        Ok(VarId(self.vars.len() - 1))
    }

    fn check_terms(&self, terms: impl IntoIterator<Item = (VarId, i64)>) -> Result<Vec<(VarId, i64)>> {
        let mut merged: Vec<(VarId, i64)> = Vec::new();
        for (v, a) in terms {
            if v.0 >= self.vars.len() {
                return Err(Error::InvalidProgram(format!("unknown variable index {}", v.0)));
            }
            check_magnitude("coefficient", a)?;
            match merged.iter_mut().find(|(w, _)| *w == v) {
                Some((_, b)) => {
                    *b += a;
                    check_magnitude("coefficient", *b)?;
                }
                None => merged.push((v, a)),
            }
        }
        merged.retain(|&(_, a)| a != 0);
        Ok(merged)
    }

    pub fn add_constraint(
        &mut self,
        terms: impl IntoIterator<Item = (VarId, i64)>,
        relation: Relation,
        rhs: i64,
    ) -> Result<()> {
        check_magnitude("right-hand side", rhs)?;
        let terms = self.check_terms(terms)?;
        self.constraints.push(Constraint { terms, relation, rhs });
        Ok(())
    }

    pub fn set_objective(&mut self, terms: impl IntoIterator<Item = (VarId, i64)>) -> Result<()> {
        self.objective = self.check_terms(terms)?;
        Ok(())
    }

    pub fn variables(&self) -> &[Variable] {
        &self.vars
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn objective(&self) -> &[(VarId, i64)] {
        &self.objective
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn objective_at(&self, x: &[i64]) -> i64 {
        self.objective.iter().map(|&(v, c)| c * x[v.0]).sum()
    }

    /// True if `x` respects every bound and constraint.
    pub fn is_feasible(&self, x: &[i64]) -> bool {
        x.len() == self.vars.len()
            && self.vars.iter().zip(x).all(|(v, &xi)| v.lower <= xi && xi <= v.upper)
            && self.constraints.iter().all(|c| c.is_satisfied(x))
    }

    pub fn solve(&self) -> Result<IpSolution> {
        let mut rows: Vec<Row> = Vec::with_capacity(self.constraints.len() * 2 + 1);
        for c in &self.constraints {
            let pos = || Row { terms: c.terms.iter().map(|&(v, a)| (v.0, a as i128)).collect(), rhs: c.rhs as i128 };
            let neg = || Row { terms: c.terms.iter().map(|&(v, a)| (v.0, -(a as i128))).collect(), rhs: -(c.rhs as i128) };
            match c.relation {
                Relation::Le => rows.push(pos()),
                Relation::Ge => rows.push(neg()),
                Relation::Eq => {
                    rows.push(pos());
                    rows.push(neg());
                }
            }
        }
        // Placeholder for the cutoff row -obj <= -(incumbent + 1).
        rows.push(Row { terms: self.objective.iter().map(|&(v, c)| (v.0, -(c as i128))).collect(), rhs: 0 });

        let mut search = Search {
            rows,
            objective: self.objective.iter().map(|&(v, c)| (v.0, c as i128)).collect(),
            incumbent: None,
        };
        let lo: Vec<i128> = self.vars.iter().map(|v| v.lower as i128).collect();
        let hi: Vec<i128> = self.vars.iter().map(|v| v.upper as i128).collect();
        search.descend(lo, hi);

        match search.incumbent {
            None => Ok(IpSolution { status: IpStatus::Infeasible, assignment: None, objective_value: None }),
            Some((value, x)) => {
                let x: Vec<i64> = x.into_iter().map(|v| v as i64).collect();
                debug_assert!(self.is_feasible(&x));
                Ok(IpSolution {
                    status: IpStatus::Optimal,
                    objective_value: Some(value as i64),
                    assignment: Some(x),
                })
            }
        }
    }
}

/// `Σ a·x ≤ rhs`.
struct Row {
    terms: Vec<(usize, i128)>,
    rhs: i128,
}

struct Search {
    rows: Vec<Row>,
    objective: Vec<(usize, i128)>,
    incumbent: Option<(i128, Vec<i128>)>,
}

impl Row {
    fn min_activity(&self, lo: &[i128], hi: &[i128]) -> i128 {
        self.terms.iter().map(|&(j, a)| if a > 0 { a * lo[j] } else { a * hi[j] }).sum()
    }
}

impl Search {
    fn active_rows(&self) -> usize {
        // The cutoff row is the last one and only binds once an incumbent exists.
        self.rows.len() - usize::from(self.incumbent.is_none())
    }

    /// Tightens `lo`/`hi` to a fixpoint. Returns false if the box is empty.
    fn propagate(&self, lo: &mut [i128], hi: &mut [i128]) -> bool {
        let active = self.active_rows();
        loop {
            let mut changed = false;
            for row in &self.rows[..active] {
                let min_act = row.min_activity(lo, hi);
                if min_act > row.rhs {
                    return false;
                }
                for &(j, a) in &row.terms {
                    let own = if a > 0 { a * lo[j] } else { a * hi[j] };
                    let slack = row.rhs - (min_act - own);
                    if a > 0 {
                        let bound = slack.div_euclid(a);
                        if bound < hi[j] {
                            hi[j] = bound;
                            changed = true;
                        }
                    } else {
                        // a·x ≤ slack with a < 0  ⇔  x ≥ ceil(slack / a).
                        let bound = -(slack.div_euclid(-a));
                        if bound > lo[j] {
                            lo[j] = bound;
                            changed = true;
                        }
                    }
                    if lo[j] > hi[j] {
                        return false;
                    }
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn set_incumbent(&mut self, value: i128, x: Vec<i128>) {
        let cutoff = self.rows.last_mut().expect("cutoff row present");
        cutoff.rhs = -(value + 1);
        self.incumbent = Some((value, x));
    }

    fn descend(&mut self, mut lo: Vec<i128>, mut hi: Vec<i128>) {
        if !self.propagate(&mut lo, &mut hi) {
            return;
        }
        // The objective-maximizing corner of the box, if feasible, is optimal
        // within the box.
        let corner: Vec<i128> = (0..lo.len())
            .map(|j| match self.objective.iter().find(|&&(v, _)| v == j) {
                Some(&(_, c)) if c > 0 => hi[j],
                _ => lo[j],
            })
            .collect();
        if self.rows[..self.active_rows()].iter().all(|r| r.min_activity(&corner, &corner) <= r.rhs) {
            let value = self.objective.iter().map(|&(j, c)| c * corner[j]).sum();
            if self.incumbent.as_ref().map_or(true, |(best, _)| value > *best) {
                self.set_incumbent(value, corner);
            }
            return;
        }
        let Some(j) = (0..lo.len()).find(|&j| lo[j] < hi[j]) else {
            return;
        };
        for v in lo[j]..=hi[j] {
            let mut l = lo.clone();
            let mut h = hi.clone();
            l[j] = v;
            h[j] = v;
            self.descend(l, h);
        }
    }
}
