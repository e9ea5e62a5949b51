//! Choosing one suite from a family: drop suites that contain a forbidden
//! input, then rank the survivors by a linear cost model.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par;
use crate::suite::{SuiteFamily, TestSuite};
use crate::vector::TestVector;

/// Forbidden input patterns. A pattern is a partial assignment; a vector is
/// illegal when it agrees with every binding of some pattern.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ConstraintSet {
    pub forbidden: Vec<BTreeMap<String, bool>>,
}

impl ConstraintSet {
    pub fn forbid(mut self, pattern: BTreeMap<String, bool>) -> Self {
        self.forbidden.push(pattern);
        self
    }

    /// Forbids one full vector.
    pub fn forbid_vector(self, v: &TestVector) -> Self {
        self.forbid(v.to_map())
    }

    pub fn is_empty(&self) -> bool {
        self.forbidden.is_empty()
    }
}

pub fn is_illegal(v: &TestVector, cs: &ConstraintSet) -> Result<bool> {
    for pattern in &cs.forbidden {
        let mut all = true;
        for (name, want) in pattern {
            let got = v
                .get(name)
                .ok_or_else(|| Error::UnknownVariable(name.clone()))?;
            all &= got == *want;
        }
        if all {
            return Ok(true);
        }
    }
    Ok(false)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OutcomeCosts {
    #[serde(rename = "true", default)]
    pub when_true: f64,
    #[serde(rename = "false", default)]
    pub when_false: f64,
}

impl Default for OutcomeCosts {
    fn default() -> Self {
        OutcomeCosts {
            when_true: 0.0,
            when_false: 0.0,
        }
    }
}

/// Suite cost = sum over rows of (sum of per-assignment costs + outcome
/// cost). Assignment keys look like `"e=true"`; unlisted assignments cost
/// `default_assignment_cost`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostModel {
    #[serde(default)]
    pub assignment_costs: BTreeMap<String, f64>,
    #[serde(default = "one")]
    pub default_assignment_cost: f64,
    #[serde(default)]
    pub outcome_costs: OutcomeCosts,
}

fn one() -> f64 {
    1.0
}

impl Default for CostModel {
    fn default() -> Self {
        CostModel {
            assignment_costs: BTreeMap::new(),
            default_assignment_cost: 1.0,
            outcome_costs: OutcomeCosts::default(),
        }
    }
}

impl CostModel {
    pub fn uniform(weight: f64) -> Self {
        CostModel {
            default_assignment_cost: weight,
            ..Default::default()
        }
    }

    pub fn with_assignment(mut self, var: &str, value: bool, cost: f64) -> Self {
        self.assignment_costs.insert(format!("{var}={value}"), cost);
        self
    }

    /// Multiplies every weight by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        CostModel {
            assignment_costs: self
                .assignment_costs
                .iter()
                .map(|(k, v)| (k.clone(), v * factor))
                .collect(),
            default_assignment_cost: self.default_assignment_cost * factor,
            outcome_costs: OutcomeCosts {
                when_true: self.outcome_costs.when_true * factor,
                when_false: self.outcome_costs.when_false * factor,
            },
        }
    }

    fn compile(&self) -> Result<CompiledCost> {
        let check = |what: &str, w: f64| {
            if w.is_finite() && w >= 0.0 {
                Ok(w)
            } else {
                Err(Error::InvalidCostModel(format!(
                    "{what} must be a finite non-negative number, got {w}"
                )))
            }
        };
        let mut table = HashMap::new();
        for (key, &w) in &self.assignment_costs {
            let (var, value) = key.split_once('=').ok_or_else(|| {
                Error::InvalidCostModel(format!("key `{key}` is not of the form var=true|false"))
            })?;
            let value = match value.trim() {
                "true" => true,
                "false" => false,
                other => {
                    return Err(Error::InvalidCostModel(format!(
                        "key `{key}`: `{other}` is not true or false"
                    )))
                }
            };
            table.insert((var.trim().to_string(), value), check(key, w)?);
        }
        Ok(CompiledCost {
            table,
            default: check("default_assignment_cost", self.default_assignment_cost)?,
            when_true: check("outcome cost for true", self.outcome_costs.when_true)?,
            when_false: check("outcome cost for false", self.outcome_costs.when_false)?,
        })
    }
}

struct CompiledCost {
    table: HashMap<(String, bool), f64>,
    default: f64,
    when_true: f64,
    when_false: f64,
}

impl CompiledCost {
    fn suite(&self, s: &TestSuite) -> f64 {
        s.tests
            .iter()
            .map(|t| {
                let assignments: f64 = t
                    .vector
                    .iter()
                    .map(|(name, value)| {
                        self.table
                            .get(&(name.to_string(), value))
                            .copied()
                            .unwrap_or(self.default)
                    })
                    .sum();
                let outcome = if t.outcome {
                    self.when_true
                } else {
                    self.when_false
                };
                assignments + outcome
            })
            .sum()
    }
}

pub fn cost_of(s: &TestSuite, cm: &CostModel) -> Result<f64> {
    Ok(cm.compile()?.suite(s))
}

/// A family member that contains at least one forbidden vector.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Discarded {
    /// Index into `SuiteFamily::members`.
    pub member: usize,
    /// Zero-based row indices of the offending vectors.
    pub offending: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Filtered {
    pub valid: Vec<usize>,
    pub discarded: Vec<Discarded>,
}

fn offending_rows(s: &TestSuite, cs: &ConstraintSet) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for (i, t) in s.tests.iter().enumerate() {
        if is_illegal(&t.vector, cs)? {
            out.push(i);
        }
    }
    Ok(out)
}

/// Partitions family members into valid and discarded, keeping family order.
pub fn filter_family(f: &SuiteFamily, cs: &ConstraintSet) -> Result<Filtered> {
    let rows = par::map(&f.members, |m| offending_rows(&m.suite, cs));
    let mut valid = Vec::new();
    let mut discarded = Vec::new();
    for (member, r) in rows.into_iter().enumerate() {
        let offending = r?;
        if offending.is_empty() {
            valid.push(member);
        } else {
            discarded.push(Discarded { member, offending });
        }
    }
    Ok(Filtered { valid, discarded })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rationale {
    SoleSurvivor,
    CostRanked,
    NoneValid,
}

impl Rationale {
    pub fn as_str(self) -> &'static str {
        match self {
            Rationale::SoleSurvivor => "sole-survivor",
            Rationale::CostRanked => "cost-ranked",
            Rationale::NoneValid => "none-valid",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Ranked {
    pub member: usize,
    pub cost: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelectionReport {
    pub valid: Vec<usize>,
    pub discarded: Vec<Discarded>,
    /// Valid members by ascending cost; ties keep family order.
    pub ranking: Vec<Ranked>,
    pub selected: Option<usize>,
    pub rationale: Rationale,
}

/// Filters, ranks and selects. Without a cost model every assignment costs 1.
pub fn select(
    f: &SuiteFamily,
    cs: &ConstraintSet,
    cm: Option<&CostModel>,
) -> Result<SelectionReport> {
    let default = CostModel::default();
    let costs = cm.unwrap_or(&default).compile()?;
    let Filtered { valid, discarded } = filter_family(f, cs)?;

    let mut ranking: Vec<Ranked> = par::map(&valid, |&member| Ranked {
        member,
        cost: costs.suite(&f.members[member].suite),
    });
    // stable: equal costs stay in family order
    ranking.sort_by(|a, b| a.cost.total_cmp(&b.cost));

    let rationale = match valid.len() {
        0 => Rationale::NoneValid,
        1 => Rationale::SoleSurvivor,
        _ => Rationale::CostRanked,
    };
    Ok(SelectionReport {
        selected: ranking.first().map(|r| r.member),
        valid,
        discarded,
        ranking,
        rationale,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse;
    use crate::suite::{generate_family, generate_suite};
    use crate::variants::VariantOptions;
    use crate::vector::VarSet;

    fn vector(pairs: &[(&str, bool)]) -> TestVector {
        let vars = VarSet::new(pairs.iter().map(|p| p.0));
        TestVector::from_pairs(&vars, pairs.iter().copied()).unwrap()
    }

    fn pattern(pairs: &[(&str, bool)]) -> BTreeMap<String, bool> {
        pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    #[test]
    fn partial_patterns() {
        let v = vector(&[("a", true), ("b", false)]);
        assert!(!is_illegal(&v, &ConstraintSet::default()).unwrap());
        let cs = ConstraintSet::default().forbid(pattern(&[("a", true)]));
        assert!(is_illegal(&v, &cs).unwrap());
        let cs = ConstraintSet::default().forbid(pattern(&[("a", false)]));
        assert!(!is_illegal(&v, &cs).unwrap());
    }

    #[test]
    fn full_vector_pattern() {
        // baseline table, test case 4: !b=F !c=T a=F d=T e=F
        let tc4 = vector(&[
            ("a", false),
            ("b", true),
            ("c", false),
            ("d", true),
            ("e", false),
        ]);
        let cs = ConstraintSet::default().forbid_vector(&tc4);
        assert!(is_illegal(&tc4, &cs).unwrap());
    }

    #[test]
    fn unknown_pattern_variable() {
        let v = vector(&[("a", true)]);
        let cs = ConstraintSet::default().forbid(pattern(&[("zz", true)]));
        assert!(matches!(
            is_illegal(&v, &cs),
            Err(Error::UnknownVariable(_))
        ));
    }

    #[test]
    fn costs() {
        let s = generate_suite(&parse("(!b || !c) && a && d || e").unwrap()).unwrap();
        assert_eq!(cost_of(&s, &CostModel::uniform(0.0)).unwrap(), 0.0);
        assert_eq!(cost_of(&s, &CostModel::default()).unwrap(), 30.0);
        let heavy_e = CostModel::default().with_assignment("e", true, 10.0);
        assert_eq!(cost_of(&s, &heavy_e).unwrap(), 39.0);
        let mut oracle = CostModel::default();
        oracle.outcome_costs.when_false = 2.5;
        assert_eq!(cost_of(&s, &oracle).unwrap(), 30.0 + 3.0 * 2.5);
    }

    #[test]
    fn invalid_cost_models() {
        let s = generate_suite(&parse("a").unwrap()).unwrap();
        assert!(cost_of(&s, &CostModel::uniform(-1.0)).is_err());
        assert!(cost_of(&s, &CostModel::uniform(f64::NAN)).is_err());
        let mut bad = CostModel::default();
        bad.assignment_costs.insert("a".into(), 1.0);
        assert!(matches!(cost_of(&s, &bad), Err(Error::InvalidCostModel(_))));
        let mut bad = CostModel::default();
        bad.assignment_costs.insert("a=yes".into(), 1.0);
        assert!(cost_of(&s, &bad).is_err());
    }

    #[test]
    fn cost_json_shape() {
        let cm: CostModel = serde_json::from_str(
            r#"{ "assignment_costs": { "e=true": 10.0 }, "default_assignment_cost": 1.0,
                 "outcome_costs": { "true": 0.0, "false": 0.5 } }"#,
        )
        .unwrap();
        assert_eq!(cm.assignment_costs["e=true"], 10.0);
        assert_eq!(cm.outcome_costs.when_false, 0.5);
        let empty: CostModel = serde_json::from_str("{}").unwrap();
        assert_eq!(empty, CostModel::default());
    }

    #[test]
    fn no_constraints_selects_first() {
        let f = generate_family(
            &parse("a && (!b || !c) && d || e").unwrap(),
            &VariantOptions::default(),
        )
        .unwrap();
        let r = select(&f, &ConstraintSet::default(), None).unwrap();
        assert_eq!(r.valid.len(), f.members.len());
        assert!(r.discarded.is_empty());
        assert_eq!(r.selected, Some(0));
        assert_eq!(r.rationale, Rationale::CostRanked);
    }

    #[test]
    fn sole_survivor_and_none_valid() {
        let f = generate_family(&parse("a").unwrap(), &VariantOptions::default()).unwrap();
        let r = select(&f, &ConstraintSet::default(), None).unwrap();
        assert_eq!(
            (r.selected, r.rationale),
            (Some(0), Rationale::SoleSurvivor)
        );
        let cs = ConstraintSet::default().forbid(pattern(&[("a", true)]));
        let r = select(&f, &cs, None).unwrap();
        assert_eq!((r.selected, r.rationale), (None, Rationale::NoneValid));
        assert_eq!(
            r.discarded,
            [Discarded {
                member: 0,
                offending: vec![0]
            }]
        );
    }

    #[test]
    fn e_false_forbidden_discards_everything() {
        let f = generate_family(
            &parse("a && (!b || !c) && d || e").unwrap(),
            &VariantOptions::default(),
        )
        .unwrap();
        let cs = ConstraintSet::default().forbid(pattern(&[("e", false)]));
        let r = select(&f, &cs, None).unwrap();
        assert!(r.valid.is_empty());
        assert_eq!(r.discarded.len(), f.members.len());
        assert_eq!(r.rationale, Rationale::NoneValid);
    }
}
