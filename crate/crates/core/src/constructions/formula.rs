//! Propositional formulas in DNF and 3-CNF over variables `x_1, ..., x_n`.
//!
//! Literals are non-zero integers: `j` is `x_j`, `-j` is `¬x_j`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest variable count accepted by the truth-table checks.
pub const MAX_TRUTH_TABLE_VARS: usize = 24;

/// A disjunction of conjunctions of literals.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DnfFormula {
    pub vars: usize,
    pub conjuncts: Vec<Vec<i64>>,
}

/// A conjunction of clauses with one to three literals each.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Cnf3Formula {
    pub vars: usize,
    pub clauses: Vec<Vec<i64>>,
}

fn check_literals(vars: usize, lits: &[i64], what: &str) -> Result<()> {
    let mut seen = vec![false; vars + 1];
    for &l in lits {
        let v = l.unsigned_abs() as usize;
        if l == 0 || v > vars {
            return Err(Error::InvalidFormula(format!("literal {l} out of range in {what}")));
        }
        if seen[v] {
            return Err(Error::InvalidFormula(format!("variable {v} occurs twice in {what}")));
        }
        seen[v] = true;
    }
    Ok(())
}

fn literal_holds(l: i64, assignment: &[bool]) -> bool {
    let v = assignment[l.unsigned_abs() as usize - 1];
    if l > 0 {
        v
    } else {
        !v
    }
}

fn assignments(vars: usize) -> impl Iterator<Item = Vec<bool>> {
    (0u64..1 << vars).map(move |bits| (0..vars).map(|i| bits >> i & 1 == 1).collect())
}

impl DnfFormula {
    pub fn validate(&self) -> Result<()> {
        if self.vars == 0 {
            return Err(Error::InvalidFormula("at least one variable is needed".into()));
        }
        if self.conjuncts.is_empty() {
            return Err(Error::InvalidFormula("at least one conjunct is needed".into()));
        }
        for (i, c) in self.conjuncts.iter().enumerate() {
            check_literals(self.vars, c, &format!("conjunct {}", i + 1))?;
        }
        Ok(())
    }

    /// Per position `j`, `Some(true)` for `x_j`, `Some(false)` for `¬x_j`, `None` if absent.
    pub fn pattern(&self, conjunct: usize) -> Vec<Option<bool>> {
        let mut p = vec![None; self.vars];
        for &l in &self.conjuncts[conjunct] {
            p[l.unsigned_abs() as usize - 1] = Some(l > 0);
        }
        p
    }

    pub fn evaluate(&self, assignment: &[bool]) -> bool {
        self.conjuncts.iter().any(|c| c.iter().all(|&l| literal_holds(l, assignment)))
    }

    /// Truth-table validity check.
    pub fn is_valid(&self) -> bool {
        assert!(self.vars <= MAX_TRUTH_TABLE_VARS);
        assignments(self.vars).all(|a| self.evaluate(&a))
    }
}

impl Cnf3Formula {
    pub fn validate(&self) -> Result<()> {
        if self.vars == 0 {
            return Err(Error::InvalidFormula("at least one variable is needed".into()));
        }
        for (i, c) in self.clauses.iter().enumerate() {
            if c.is_empty() || c.len() > 3 {
                return Err(Error::InvalidFormula(format!("clause {} must have 1 to 3 literals", i + 1)));
            }
            check_literals(self.vars, c, &format!("clause {}", i + 1))?;
        }
        Ok(())
    }

    pub fn evaluate(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|c| c.iter().any(|&l| literal_holds(l, assignment)))
    }

    /// Truth-table satisfiability check.
    pub fn is_satisfiable(&self) -> bool {
        assert!(self.vars <= MAX_TRUTH_TABLE_VARS);
        assignments(self.vars).any(|a| self.evaluate(&a))
    }
}
