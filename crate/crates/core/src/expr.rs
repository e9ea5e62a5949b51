//! Boolean expression trees over named conditions.
//!
//! An [`Expr`] is a binary AST of `!`, `&&` and `||` over identifiers. A
//! *singular* boolean expression (SBE) mentions every variable exactly once;
//! [`validate_sbe`] checks that property and returns the [`ConditionTable`]
//! that the rest of the crate uses to label columns.

use std::collections::HashSet;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::vector::{TestVector, VarSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    And,
    Or,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::And => "&&",
            BinOp::Or => "||",
        }
    }

    fn precedence(self) -> u8 {
        match self {
            BinOp::Or => 1,
            BinOp::And => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Var(String),
    Not(Box<Expr>),
    And(Box<Expr>, Box<Expr>),
    Or(Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn var(name: impl Into<String>) -> Expr {
        Expr::Var(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(e: Expr) -> Expr {
        Expr::Not(Box::new(e))
    }

    pub fn and(l: Expr, r: Expr) -> Expr {
        Expr::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: Expr, r: Expr) -> Expr {
        Expr::Or(Box::new(l), Box::new(r))
    }

    pub fn binary(op: BinOp, l: Expr, r: Expr) -> Expr {
        match op {
            BinOp::And => Expr::and(l, r),
            BinOp::Or => Expr::or(l, r),
        }
    }

    /// Splits a binary node into its operator and children.
    pub fn as_binary(&self) -> Option<(BinOp, &Expr, &Expr)> {
        match self {
            Expr::And(l, r) => Some((BinOp::And, l, r)),
            Expr::Or(l, r) => Some((BinOp::Or, l, r)),
            _ => None,
        }
    }

    /// Leaf variable names in left-to-right order.
    pub fn leaves(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Expr::Var(n) => out.push(n),
            Expr::Not(x) => x.collect_leaves(out),
            Expr::And(l, r) | Expr::Or(l, r) => {
                l.collect_leaves(out);
                r.collect_leaves(out);
            }
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            Expr::Var(_) => 1,
            Expr::Not(x) => x.leaf_count(),
            Expr::And(l, r) | Expr::Or(l, r) => l.leaf_count() + r.leaf_count(),
        }
    }

    /// Number of `&&` and `||` nodes.
    pub fn binary_count(&self) -> usize {
        match self {
            Expr::Var(_) => 0,
            Expr::Not(x) => x.binary_count(),
            Expr::And(l, r) | Expr::Or(l, r) => 1 + l.binary_count() + r.binary_count(),
        }
    }

    pub fn variables(&self) -> VarSet {
        VarSet::new(self.leaves())
    }

    /// Fully parenthesised canonical text, e.g. `((a && d) && ((!b) || (!c)))`.
    pub fn serialize(&self) -> String {
        let mut s = String::new();
        self.write_canonical(&mut s);
        s
    }

    fn write_canonical(&self, out: &mut String) {
        match self {
            Expr::Var(n) => out.push_str(n),
            Expr::Not(x) => {
                out.push_str("(!");
                x.write_canonical(out);
                out.push(')');
            }
            Expr::And(l, r) | Expr::Or(l, r) => {
                let op = self.as_binary().unwrap().0;
                out.push('(');
                l.write_canonical(out);
                out.push(' ');
                out.push_str(op.symbol());
                out.push(' ');
                r.write_canonical(out);
                out.push(')');
            }
        }
    }

    /// Identity key: equal iff the two trees are node-for-node identical.
    pub fn structural_key(&self) -> String {
        self.serialize()
    }

    /// Evaluates against a vector whose variables are exactly this
    /// expression's variables.
    pub fn evaluate(&self, v: &TestVector) -> Result<bool> {
        self.variables().expect_same(v.vars())?;
        Ok(self.eval_unchecked(v))
    }

    /// Evaluates without checking the vector's domain. Unknown names read
    /// as false.
    pub(crate) fn eval_unchecked(&self, v: &TestVector) -> bool {
        match self {
            Expr::Var(n) => v.get(n).unwrap_or(false),
            Expr::Not(x) => !x.eval_unchecked(v),
            Expr::And(l, r) => l.eval_unchecked(v) && r.eval_unchecked(v),
            Expr::Or(l, r) => l.eval_unchecked(v) || r.eval_unchecked(v),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Var(_) | Expr::Not(_) => 3,
            Expr::And(..) => BinOp::And.precedence(),
            Expr::Or(..) => BinOp::Or.precedence(),
        }
    }

    fn write_minimal(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Var(n) => f.write_str(n),
            Expr::Not(x) => {
                f.write_str("!")?;
                if x.precedence() == 3 {
                    x.write_minimal(f)
                } else {
                    f.write_str("(")?;
                    x.write_minimal(f)?;
                    f.write_str(")")
                }
            }
            Expr::And(l, r) | Expr::Or(l, r) => {
                let p = self.precedence();
                let op = self.as_binary().unwrap().0;
                // left-associative: equal precedence needs brackets only on the right
                if l.precedence() < p {
                    f.write_str("(")?;
                    l.write_minimal(f)?;
                    f.write_str(")")?;
                } else {
                    l.write_minimal(f)?;
                }
                write!(f, " {} ", op.symbol())?;
                if r.precedence() <= p {
                    f.write_str("(")?;
                    r.write_minimal(f)?;
                    f.write_str(")")
                } else {
                    r.write_minimal(f)
                }
            }
        }
    }
}

/// Minimal-parenthesis infix form, e.g. `(!b || !c) && a && d || e`.
/// Parses back to the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_minimal(f)
    }
}

impl std::str::FromStr for Expr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        crate::parse::parse(s)
    }
}

impl Serialize for Expr {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// One condition (leaf) of an SBE.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Condition {
    pub name: String,
    /// Leaf sits directly under an odd number of `!`.
    pub negated: bool,
}

impl Condition {
    /// Column label, `!b` for negated leaves.
    pub fn label(&self) -> String {
        if self.negated {
            format!("!{}", self.name)
        } else {
            self.name.clone()
        }
    }

    /// Value of the literal as displayed, given the variable's value.
    pub fn literal(&self, value: bool) -> bool {
        value != self.negated
    }
}

/// Conditions in left-to-right leaf order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConditionTable {
    conditions: Vec<Condition>,
}

impl ConditionTable {
    pub fn len(&self) -> usize {
        self.conditions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.conditions.is_empty()
    }

    pub fn conditions(&self) -> &[Condition] {
        &self.conditions
    }

    pub fn labels(&self) -> Vec<String> {
        self.conditions.iter().map(Condition::label).collect()
    }

    /// Looks a condition up by variable name or by its label (`!b`).
    pub fn find(&self, name_or_label: &str) -> Option<&Condition> {
        let name = name_or_label.trim_start_matches('!');
        self.conditions.iter().find(|c| c.name == name)
    }
}

/// Checks that every variable occurs once and returns the condition table.
pub fn validate_sbe(e: &Expr) -> Result<ConditionTable> {
    let mut conditions = Vec::new();
    collect_conditions(e, 0, &mut conditions);
    let mut seen = HashSet::new();
    for c in &conditions {
        if !seen.insert(c.name.as_str()) {
            return Err(Error::SbeViolation {
                variable: c.name.clone(),
            });
        }
    }
    Ok(ConditionTable { conditions })
}

fn collect_conditions(e: &Expr, nots: usize, out: &mut Vec<Condition>) {
    match e {
        Expr::Var(n) => out.push(Condition {
            name: n.clone(),
            negated: nots % 2 == 1,
        }),
        Expr::Not(x) => collect_conditions(x, nots + 1, out),
        Expr::And(l, r) | Expr::Or(l, r) => {
            collect_conditions(l, 0, out);
            collect_conditions(r, 0, out);
        }
    }
}
