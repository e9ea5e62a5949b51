//! JSON documents exchanged with users: suites, families, coverage and
//! selection reports.
//!
//! Maps are emitted with sorted keys and test cases are numbered from 1, as
//! in printed MC/DC tables.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::coverage::CoverageReport;
use crate::error::{Error, Result};
use crate::expr::{validate_sbe, Expr};
use crate::selection::{Rationale, SelectionReport};
use crate::suite::{SuiteFamily, TestSuite};
use crate::vector::TestVector;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub assignment: Option<BTreeMap<String, bool>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub literals: Option<BTreeMap<String, bool>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outcome: Option<bool>,
}

/// `{ "expression", "columns", "tests": [{ "assignment", "literals", "outcome" }] }`
///
/// When read back, a test needs either `assignment` (variable values) or
/// `literals` (column values, `!b` meaning not `b`); outcomes are ignored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteJson {
    #[serde(default)]
    pub expression: Option<String>,
    #[serde(default)]
    pub columns: Vec<String>,
    pub tests: Vec<TestJson>,
}

impl SuiteJson {
    pub fn from_suite(s: &TestSuite) -> Self {
        let labels = s.conditions.labels();
        let tests = (0..s.size())
            .map(|i| TestJson {
                assignment: Some(s.tests[i].vector.to_map()),
                literals: Some(labels.iter().cloned().zip(s.literal_row(i)).collect()),
                outcome: Some(s.tests[i].outcome),
            })
            .collect();
        SuiteJson {
            expression: Some(s.expression.to_string()),
            columns: labels,
            tests,
        }
    }

    /// Resolves every test to a full assignment over `e`'s variables.
    pub fn vectors(&self, e: &Expr) -> Result<Vec<TestVector>> {
        let table = validate_sbe(e)?;
        let vars = e.variables();
        self.tests
            .iter()
            .enumerate()
            .map(|(i, t)| match (&t.assignment, &t.literals) {
                (Some(a), _) => {
                    TestVector::from_pairs(&vars, a.iter().map(|(k, v)| (k.as_str(), *v)))
                }
                (None, Some(lits)) => {
                    let mut pairs = Vec::with_capacity(lits.len());
                    for (label, value) in lits {
                        let c = table
                            .conditions()
                            .iter()
                            .find(|c| c.label() == *label)
                            .ok_or_else(|| Error::UnknownCondition(label.clone()))?;
                        pairs.push((c.name.as_str(), *value != c.negated));
                    }
                    TestVector::from_pairs(&vars, pairs)
                }
                (None, None) => Err(Error::InvalidInput(format!(
                    "test case {} has neither `assignment` nor `literals`",
                    i + 1
                ))),
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionJson {
    pub label: String,
    pub pair: Option<[usize; 2]>,
}

/// `{ "pass", "coverage_percent", "conditions": [{ "label", "pair" }] }`
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverageJson {
    pub pass: bool,
    pub coverage_percent: f64,
    pub conditions: Vec<ConditionJson>,
}

impl From<&CoverageReport> for CoverageJson {
    fn from(r: &CoverageReport) -> Self {
        CoverageJson {
            pass: r.pass(),
            coverage_percent: r.percentage(),
            conditions: r
                .conditions
                .iter()
                .map(|c| ConditionJson {
                    label: c.condition.label(),
                    pair: c.pair.as_ref().map(|p| {
                        let (i, j) = p.test_cases();
                        [i, j]
                    }),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilySuiteJson {
    pub variant: usize,
    #[serde(flatten)]
    pub suite: SuiteJson,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilyJson {
    pub expression: String,
    pub variant_count: usize,
    pub space_size: u128,
    pub truncated: bool,
    pub distinct_suites: usize,
    pub suites: Vec<FamilySuiteJson>,
}

impl From<&SuiteFamily> for FamilyJson {
    fn from(f: &SuiteFamily) -> Self {
        FamilyJson {
            expression: f.source.to_string(),
            variant_count: f.variant_count,
            space_size: f.space_size,
            truncated: f.truncated,
            distinct_suites: f.distinct_count(),
            suites: f
                .members
                .iter()
                .map(|m| FamilySuiteJson {
                    variant: m.variant_index,
                    suite: SuiteJson::from_suite(&m.suite),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelectedJson {
    pub variant: usize,
    pub cost: f64,
    pub suite: SuiteJson,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankedJson {
    pub variant: usize,
    pub expression: String,
    pub cost: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscardedJson {
    pub variant: usize,
    pub expression: String,
    pub offending_test_cases: Vec<usize>,
    pub offending: Vec<BTreeMap<String, bool>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelectionJson {
    pub expression: String,
    pub variant_count: usize,
    pub distinct_suites: usize,
    pub rationale: Rationale,
    pub selected: Option<SelectedJson>,
    pub ranking: Vec<RankedJson>,
    pub discarded: Vec<DiscardedJson>,
}

impl SelectionJson {
    pub fn new(f: &SuiteFamily, r: &SelectionReport) -> Self {
        let member = |m: usize| &f.members[m];
        SelectionJson {
            expression: f.source.to_string(),
            variant_count: f.variant_count,
            distinct_suites: f.distinct_count(),
            rationale: r.rationale,
            selected: r.selected.map(|m| SelectedJson {
                variant: member(m).variant_index,
                cost: r.ranking[0].cost,
                suite: SuiteJson::from_suite(&member(m).suite),
            }),
            ranking: r
                .ranking
                .iter()
                .map(|x| RankedJson {
                    variant: member(x.member).variant_index,
                    expression: member(x.member).suite.expression.to_string(),
                    cost: x.cost,
                })
                .collect(),
            discarded: r
                .discarded
                .iter()
                .map(|d| {
                    let s = &member(d.member).suite;
                    DiscardedJson {
                        variant: member(d.member).variant_index,
                        expression: s.expression.to_string(),
                        offending_test_cases: d.offending.iter().map(|i| i + 1).collect(),
                        offending: d
                            .offending
                            .iter()
                            .map(|&i| s.tests[i].vector.to_map())
                            .collect(),
                    }
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coverage::check_unique_cause;
    use crate::parse::parse;
    use crate::suite::generate_suite;

    #[test]
    fn suite_json_shape() {
        let s = generate_suite(&parse("!a && b").unwrap()).unwrap();
        let j = serde_json::to_value(SuiteJson::from_suite(&s)).unwrap();
        assert_eq!(j["expression"], "!a && b");
        assert_eq!(j["columns"], serde_json::json!(["!a", "b"]));
        assert_eq!(
            j["tests"][0]["assignment"],
            serde_json::json!({"a": false, "b": true})
        );
        assert_eq!(
            j["tests"][0]["literals"],
            serde_json::json!({"!a": true, "b": true})
        );
        assert_eq!(j["tests"][0]["outcome"], true);
    }

    #[test]
    fn literals_resolve_through_polarity() {
        let e = parse("!a && b").unwrap();
        let doc: SuiteJson = serde_json::from_str(
            r#"{"tests":[{"literals":{"!a":true,"b":true}},{"assignment":{"a":true,"b":true}}]}"#,
        )
        .unwrap();
        let vs = doc.vectors(&e).unwrap();
        assert_eq!(vs[0].get("a"), Some(false));
        assert_eq!(vs[1].get("a"), Some(true));
        let bad: SuiteJson = serde_json::from_str(r#"{"tests":[{"outcome":true}]}"#).unwrap();
        assert!(matches!(bad.vectors(&e), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn round_trip_through_json() {
        let e = parse("a && (!b || !c) && d || e").unwrap();
        let s = generate_suite(&e).unwrap();
        let text = serde_json::to_string(&SuiteJson::from_suite(&s)).unwrap();
        let back: SuiteJson = serde_json::from_str(&text).unwrap();
        let vs = back.vectors(&e).unwrap();
        assert!(vs.iter().eq(s.vectors()));
    }

    #[test]
    fn coverage_json_is_one_based() {
        let e = parse("a").unwrap();
        let s = generate_suite(&e).unwrap();
        let r = check_unique_cause(&e, s.vectors()).unwrap();
        let j = serde_json::to_string(&CoverageJson::from(&r)).unwrap();
        assert_eq!(
            j,
            r#"{"pass":true,"coverage_percent":100.0,"conditions":[{"label":"a","pair":[1,2]}]}"#
        );
    }
}
