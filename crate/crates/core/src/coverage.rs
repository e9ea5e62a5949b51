//! Brute-force unique-cause MC/DC checker.
//!
//! Looks only at the expression and the vectors; outcomes are re-evaluated
//! rather than taken from the suite, so it can judge any generator.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::{validate_sbe, Condition, Expr};
use crate::vector::{TestVector, VarSet};

/// Two rows that differ only in `condition` and disagree on the outcome.
/// Indices are zero-based positions in the checked vector list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IndependencePair {
    pub condition: Condition,
    pub first: usize,
    pub second: usize,
    pub outcomes: (bool, bool),
}

impl IndependencePair {
    /// One-based test case numbers, as in printed tables.
    pub fn test_cases(&self) -> (usize, usize) {
        (self.first + 1, self.second + 1)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConditionCoverage {
    pub condition: Condition,
    pub pair: Option<IndependencePair>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CoverageReport {
    pub conditions: Vec<ConditionCoverage>,
    pub covered: usize,
    pub total: usize,
}

impl CoverageReport {
    pub fn percentage(&self) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            100.0 * self.covered as f64 / self.total as f64
        }
    }

    pub fn pass(&self) -> bool {
        self.covered == self.total
    }

    pub fn uncovered(&self) -> impl Iterator<Item = &Condition> + '_ {
        self.conditions
            .iter()
            .filter(|c| c.pair.is_none())
            .map(|c| &c.condition)
    }

    pub fn pair_for(&self, name: &str) -> Option<&IndependencePair> {
        let name = name.trim_start_matches('!');
        self.conditions
            .iter()
            .find(|c| c.condition.name == name)
            .and_then(|c| c.pair.as_ref())
    }
}

struct Checked<'a> {
    vars: VarSet,
    conditions: Vec<Condition>,
    vectors: Vec<&'a TestVector>,
    outcomes: Vec<bool>,
}

fn prepare<'a, I>(e: &Expr, vectors: I) -> Result<Checked<'a>>
where
    I: IntoIterator<Item = &'a TestVector>,
{
    let table = validate_sbe(e)?;
    let vars = e.variables();
    let vectors: Vec<&TestVector> = vectors.into_iter().collect();
    for v in &vectors {
        vars.expect_same(v.vars())?;
    }
    let outcomes = vectors.iter().map(|v| e.eval_unchecked(v)).collect();
    Ok(Checked {
        vars,
        conditions: table.conditions().to_vec(),
        vectors,
        outcomes,
    })
}

/// Lowest-index pairs `(i, j)`, `i < j`, for every variable that has one,
/// indexed by variable position in the sorted variable set.
fn scan(c: &Checked<'_>, nvars: usize) -> Vec<Option<(usize, usize)>> {
    let mut found = vec![None; nvars];
    let mut remaining = nvars;
    'outer: for i in 0..c.vectors.len() {
        for j in i + 1..c.vectors.len() {
            if c.outcomes[i] == c.outcomes[j] {
                continue;
            }
            if let Some(var) = c.vectors[i].single_difference(c.vectors[j]) {
                if found[var].is_none() {
                    found[var] = Some((i, j));
                    remaining -= 1;
                    if remaining == 0 {
                        break 'outer;
                    }
                }
            }
        }
    }
    found
}

fn pair_of(
    c: &Checked<'_>,
    cond: &Condition,
    found: &[Option<(usize, usize)>],
) -> Option<IndependencePair> {
    let idx = c.vars.index_of(&cond.name)?;
    found[idx].map(|(i, j)| IndependencePair {
        condition: cond.clone(),
        first: i,
        second: j,
        outcomes: (c.outcomes[i], c.outcomes[j]),
    })
}

/// First pair, in lexicographic index order, demonstrating `condition`
/// (a variable name or its `!name` label).
pub fn find_pair<'a, I>(e: &Expr, vectors: I, condition: &str) -> Result<Option<IndependencePair>>
where
    I: IntoIterator<Item = &'a TestVector>,
{
    let c = prepare(e, vectors)?;
    let name = condition.trim_start_matches('!');
    let cond = c
        .conditions
        .iter()
        .find(|x| x.name == name)
        .ok_or_else(|| Error::UnknownCondition(condition.to_string()))?
        .clone();
    let found = scan(&c, c.conditions.len());
    Ok(pair_of(&c, &cond, &found))
}

pub fn check_unique_cause<'a, I>(e: &Expr, vectors: I) -> Result<CoverageReport>
where
    I: IntoIterator<Item = &'a TestVector>,
{
    let c = prepare(e, vectors)?;
    let found = scan(&c, c.conditions.len());
    let conditions: Vec<ConditionCoverage> = c
        .conditions
        .iter()
        .map(|cond| ConditionCoverage {
            condition: cond.clone(),
            pair: pair_of(&c, cond, &found),
        })
        .collect();
    let covered = conditions.iter().filter(|x| x.pair.is_some()).count();
    Ok(CoverageReport {
        total: conditions.len(),
        covered,
        conditions,
    })
}

/// Exactly N+1 rows and full unique-cause coverage.
pub fn verify_minimal<'a, I>(e: &Expr, vectors: I) -> Result<bool>
where
    I: IntoIterator<Item = &'a TestVector>,
{
    let vectors: Vec<&TestVector> = vectors.into_iter().collect();
    let n = e.leaf_count();
    let report = check_unique_cause(e, vectors.iter().copied())?;
    Ok(vectors.len() == n + 1 && report.pass())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse;

    fn p(s: &str) -> Expr {
        parse(s).unwrap()
    }

    fn single(values: &[bool]) -> Vec<TestVector> {
        let vars = VarSet::new(["a"]);
        values
            .iter()
            .map(|&v| TestVector::from_pairs(&vars, [("a", v)]).unwrap())
            .collect()
    }

    #[test]
    fn leaf_pair() {
        let e = p("a");
        let vs = single(&[true, false]);
        let pair = find_pair(&e, &vs, "a").unwrap().unwrap();
        assert_eq!(pair.test_cases(), (1, 2));
        assert_eq!(pair.outcomes, (true, false));
        assert!(verify_minimal(&e, &vs).unwrap());
    }

    #[test]
    fn one_row_is_not_enough() {
        let e = p("a");
        let r = check_unique_cause(&e, &single(&[true])).unwrap();
        assert_eq!(r.covered, 0);
        assert_eq!(r.percentage(), 0.0);
        assert!(!r.pass());
        assert!(!verify_minimal(&e, &single(&[true])).unwrap());
    }

    #[test]
    fn empty_suite_is_zero_percent() {
        let r = check_unique_cause(&p("a && b"), std::iter::empty()).unwrap();
        assert_eq!(r.total, 2);
        assert_eq!(r.percentage(), 0.0);
    }

    #[test]
    fn unknown_condition() {
        let vs = single(&[true, false]);
        assert!(matches!(
            find_pair(&p("a"), &vs, "z"),
            Err(Error::UnknownCondition(_))
        ));
    }

    #[test]
    fn domain_mismatch() {
        let vs = single(&[true, false]);
        assert!(matches!(
            check_unique_cause(&p("a && b"), &vs),
            Err(Error::VariableMismatch { .. })
        ));
    }

    #[test]
    fn pair_requires_outcome_flip() {
        // a || b: rows (a=T,b=T) and (a=F,b=T) differ only in a but agree
        let e = p("a || b");
        let vars = e.variables();
        let rows = [(true, true), (false, true), (false, false)];
        let vs: Vec<_> = rows
            .iter()
            .map(|&(a, b)| TestVector::from_pairs(&vars, [("a", a), ("b", b)]).unwrap())
            .collect();
        let r = check_unique_cause(&e, &vs).unwrap();
        assert!(r.pair_for("a").is_none());
        assert_eq!(r.pair_for("b").unwrap().test_cases(), (2, 3));
    }

    #[test]
    fn labels_resolve_to_variables() {
        let e = p("!a");
        let vs = single(&[false, true]);
        let pair = find_pair(&e, &vs, "!a").unwrap().unwrap();
        assert_eq!(pair.condition.label(), "!a");
    }
}
