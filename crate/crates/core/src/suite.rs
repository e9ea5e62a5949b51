//! Minimal (N+1) unique-cause MC/DC suite construction.
//!
//! [`generate_suite`] builds, for every node, a list of vectors that make the
//! node true and a list that make it false, combining children through a
//! fixed representative vector (always the first of the relevant list):
//!
//! * leaf `x`: `T = [x]`, `F = [!x]`
//! * `!X`: the lists of `X` swapped
//! * `L && R`: true rows of each side padded with the other side's first
//!   true row (the shared row appears once); false rows likewise padded with
//!   the other side's first true row
//! * `L || R`: the dual, padding with first false rows
//!
//! The result has `|T| + |F| = N + 1` rows and, for every condition, a pair
//! differing only in that condition with different outcomes. Output depends
//! on operand order, which is what makes rearranged variants useful.

use std::collections::HashSet;

use serde::Serialize;

use crate::error::Result;
use crate::expr::{validate_sbe, ConditionTable, Expr};
use crate::par;
use crate::variants::{generate_variants, VariantOptions};
use crate::vector::{TestVector, VarSet};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TestCase {
    pub vector: TestVector,
    pub outcome: bool,
}

#[derive(Debug, Clone)]
pub struct TestSuite {
    /// The structure the suite was generated from.
    pub expression: Expr,
    pub conditions: ConditionTable,
    pub tests: Vec<TestCase>,
}

impl TestSuite {
    pub fn size(&self) -> usize {
        self.tests.len()
    }

    pub fn vectors(&self) -> impl Iterator<Item = &TestVector> + '_ {
        self.tests.iter().map(|t| &t.vector)
    }

    /// Vectors as a sorted list, for order-insensitive comparison.
    pub fn as_set(&self) -> Vec<Box<[u64]>> {
        let mut s: Vec<Box<[u64]>> = self.vectors().map(|v| v.bits().into()).collect();
        s.sort_unstable();
        s
    }

    /// Same vectors, ignoring row order.
    pub fn same_set(&self, other: &TestSuite) -> bool {
        self.as_set() == other.as_set()
    }

    pub fn contains(&self, v: &TestVector) -> bool {
        self.vectors().any(|x| x == v)
    }

    /// Value of every condition literal (`!b` reads as not `b`) for row `i`,
    /// in condition-table order.
    pub fn literal_row(&self, i: usize) -> Vec<bool> {
        let v = &self.tests[i].vector;
        self.conditions
            .conditions()
            .iter()
            .map(|c| c.literal(v.get(&c.name).unwrap_or(false)))
            .collect()
    }
}

type Bits = Box<[u64]>;

struct Rows {
    t: Vec<Bits>,
    f: Vec<Bits>,
}

fn union(a: &Bits, b: &Bits) -> Bits {
    a.iter().zip(b.iter()).map(|(x, y)| x | y).collect()
}

fn rows(e: &Expr, vars: &VarSet) -> Rows {
    match e {
        Expr::Var(n) => {
            let i = vars.index_of(n).expect("leaf in variable set");
            let f: Bits = vec![0u64; vars.words()].into();
            let mut t = f.clone();
            t[i / 64] |= 1 << (i % 64);
            Rows {
                t: vec![t],
                f: vec![f],
            }
        }
        Expr::Not(x) => {
            let r = rows(x, vars);
            Rows { t: r.f, f: r.t }
        }
        Expr::And(l, r) => {
            let (l, r) = (rows(l, vars), rows(r, vars));
            let (tl, tr) = (&l.t[0], &r.t[0]);
            let t =
                l.t.iter()
                    .map(|x| union(x, tr))
                    .chain(r.t.iter().filter(|x| *x != tr).map(|x| union(tl, x)))
                    .collect();
            let f =
                l.f.iter()
                    .map(|x| union(x, tr))
                    .chain(r.f.iter().map(|x| union(tl, x)))
                    .collect();
            Rows { t, f }
        }
        Expr::Or(l, r) => {
            let (l, r) = (rows(l, vars), rows(r, vars));
            let (fl, fr) = (&l.f[0], &r.f[0]);
            let f =
                l.f.iter()
                    .map(|x| union(x, fr))
                    .chain(r.f.iter().filter(|x| *x != fr).map(|x| union(fl, x)))
                    .collect();
            let t =
                l.t.iter()
                    .map(|x| union(x, fr))
                    .chain(r.t.iter().map(|x| union(fl, x)))
                    .collect();
            Rows { t, f }
        }
    }
}

/// Builds the N+1 suite for `e` exactly as structured; no re-sorting.
pub fn generate_suite(e: &Expr) -> Result<TestSuite> {
    let conditions = validate_sbe(e)?;
    Ok(build_suite(e, conditions))
}

fn build_suite(e: &Expr, conditions: ConditionTable) -> TestSuite {
    let vars = e.variables();
    let Rows { t, f } = rows(e, &vars);
    let tests = t
        .into_iter()
        .chain(f)
        .map(|bits| {
            let vector = TestVector::from_bits(vars.clone(), bits);
            let outcome = e.eval_unchecked(&vector);
            TestCase { vector, outcome }
        })
        .collect();
    TestSuite {
        expression: e.clone(),
        conditions,
        tests,
    }
}

/// Reorders operands of every maximal same-operator chain by descending leaf
/// count (stable), rebuilding each chain left-associated, bottom-up.
pub fn baseline_normalize(e: &Expr) -> Result<Expr> {
    validate_sbe(e)?;
    Ok(normalize(e))
}

fn normalize(e: &Expr) -> Expr {
    match e {
        Expr::Var(_) => e.clone(),
        Expr::Not(x) => Expr::not(normalize(x)),
        Expr::And(..) | Expr::Or(..) => {
            let op = e.as_binary().unwrap().0;
            let mut operands = Vec::new();
            chain_operands(e, op, &mut operands);
            let mut operands: Vec<Expr> = operands.into_iter().map(normalize).collect();
            operands.sort_by_key(|o| std::cmp::Reverse(o.leaf_count()));
            let mut it = operands.into_iter();
            let first = it.next().unwrap();
            it.fold(first, |acc, o| Expr::binary(op, acc, o))
        }
    }
}

fn chain_operands<'a>(e: &'a Expr, op: crate::expr::BinOp, out: &mut Vec<&'a Expr>) {
    match e.as_binary() {
        Some((o, l, r)) if o == op => {
            chain_operands(l, op, out);
            chain_operands(r, op, out);
        }
        _ => out.push(e),
    }
}

#[derive(Debug, Clone)]
pub struct FamilyMember {
    /// Position of the generating variant in the variant family.
    pub variant_index: usize,
    pub suite: TestSuite,
}

#[derive(Debug, Clone)]
pub struct SuiteFamily {
    pub source: Expr,
    /// Retained suites, first occurrence of each distinct vector set.
    pub members: Vec<FamilyMember>,
    pub variant_count: usize,
    pub space_size: u128,
    pub truncated: bool,
    pub options: VariantOptions,
}

impl SuiteFamily {
    pub fn distinct_count(&self) -> usize {
        self.members.len()
    }
}

/// Variants, one suite per variant, then set-level dedup keeping the first
/// occurrence.
pub fn generate_family(e: &Expr, opts: &VariantOptions) -> Result<SuiteFamily> {
    let variants = generate_variants(e, opts)?;
    let conditions: Vec<ConditionTable> = variants
        .variants
        .iter()
        .map(validate_sbe)
        .collect::<Result<_>>()?;
    let indexed: Vec<(&Expr, ConditionTable)> = variants.variants.iter().zip(conditions).collect();
    let suites = par::map(&indexed, |(v, c)| build_suite(v, c.clone()));

    let mut seen = HashSet::new();
    let members = suites
        .into_iter()
        .enumerate()
        .filter(|(_, s)| seen.insert(s.as_set()))
        .map(|(variant_index, suite)| FamilyMember {
            variant_index,
            suite,
        })
        .collect();

    Ok(SuiteFamily {
        source: variants.source,
        members,
        variant_count: variants.variants.len(),
        space_size: variants.space_size,
        truncated: variants.truncated,
        options: variants.options,
    })
}
