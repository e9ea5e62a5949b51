//! Truth-table equivalence between expressions over the same variables.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::par;
use crate::vector::{TestVector, VarSet};

/// Largest variable count accepted by exhaustive comparison.
pub const EXHAUSTIVE_LIMIT: usize = 20;

const CHUNK: usize = 1 << 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EquivalenceMode {
    /// All 2^N assignments; N must not exceed [`EXHAUSTIVE_LIMIT`].
    Exhaustive,
    /// `count` assignments drawn from a ChaCha8 stream seeded with `seed`.
    Sampled { count: usize, seed: u64 },
}

/// Expression with leaves resolved to variable indices.
enum Compiled {
    Leaf(usize),
    Not(Box<Compiled>),
    And(Box<Compiled>, Box<Compiled>),
    Or(Box<Compiled>, Box<Compiled>),
}

impl Compiled {
    fn new(e: &Expr, vars: &VarSet) -> Compiled {
        match e {
            Expr::Var(n) => Compiled::Leaf(vars.index_of(n).expect("variable in set")),
            Expr::Not(x) => Compiled::Not(Box::new(Compiled::new(x, vars))),
            Expr::And(l, r) => Compiled::And(
                Box::new(Compiled::new(l, vars)),
                Box::new(Compiled::new(r, vars)),
            ),
            Expr::Or(l, r) => Compiled::Or(
                Box::new(Compiled::new(l, vars)),
                Box::new(Compiled::new(r, vars)),
            ),
        }
    }

    fn eval_row(&self, row: u64) -> bool {
        match self {
            Compiled::Leaf(i) => row >> i & 1 == 1,
            Compiled::Not(x) => !x.eval_row(row),
            Compiled::And(l, r) => l.eval_row(row) && r.eval_row(row),
            Compiled::Or(l, r) => l.eval_row(row) || r.eval_row(row),
        }
    }

    fn eval_bits(&self, bits: &[u64]) -> bool {
        match self {
            Compiled::Leaf(i) => bits[i / 64] >> (i % 64) & 1 == 1,
            Compiled::Not(x) => !x.eval_bits(bits),
            Compiled::And(l, r) => l.eval_bits(bits) && r.eval_bits(bits),
            Compiled::Or(l, r) => l.eval_bits(bits) || r.eval_bits(bits),
        }
    }
}

fn row_vector(vars: &VarSet, row: u64) -> TestVector {
    let mut v = TestVector::all_false(vars);
    for i in 0..vars.len() {
        v.set_index(i, row >> i & 1 == 1);
    }
    v
}

/// Returns an assignment on which the two expressions disagree, if any.
pub fn find_counterexample(
    a: &Expr,
    b: &Expr,
    mode: EquivalenceMode,
) -> Result<Option<TestVector>> {
    let vars = a.variables();
    vars.expect_same(&b.variables())?;
    let (ca, cb) = (Compiled::new(a, &vars), Compiled::new(b, &vars));
    match mode {
        EquivalenceMode::Exhaustive => {
            let n = vars.len();
            if n > EXHAUSTIVE_LIMIT {
                return Err(Error::TooManyVariables {
                    n,
                    max: EXHAUSTIVE_LIMIT,
                });
            }
            let rows = 1usize << n;
            let chunks = rows.div_ceil(CHUNK);
            let hits = par::map_range(chunks, |c| {
                let end = ((c + 1) * CHUNK).min(rows);
                (c * CHUNK..end)
                    .map(|r| r as u64)
                    .find(|&r| ca.eval_row(r) != cb.eval_row(r))
            });
            Ok(hits
                .into_iter()
                .flatten()
                .next()
                .map(|r| row_vector(&vars, r)))
        }
        EquivalenceMode::Sampled { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut v = TestVector::all_false(&vars);
            for _ in 0..count {
                for i in 0..vars.len() {
                    v.set_index(i, rng.gen());
                }
                if ca.eval_bits(v.bits()) != cb.eval_bits(v.bits()) {
                    return Ok(Some(v));
                }
            }
            Ok(None)
        }
    }
}

/// True iff `a` and `b` agree on every checked assignment.
pub fn equivalent(a: &Expr, b: &Expr, mode: EquivalenceMode) -> Result<bool> {
    Ok(find_counterexample(a, b, mode)?.is_none())
}

/// Every assignment with its outcome, row `r` setting variable `i` (in
/// sorted order) to bit `i` of `r`.
pub fn truth_table(e: &Expr) -> Result<Vec<(TestVector, bool)>> {
    let vars = e.variables();
    let n = vars.len();
    if n > EXHAUSTIVE_LIMIT {
        return Err(Error::TooManyVariables {
            n,
            max: EXHAUSTIVE_LIMIT,
        });
    }
    let c = Compiled::new(e, &vars);
    Ok((0..1u64 << n)
        .map(|r| (row_vector(&vars, r), c.eval_row(r)))
        .collect())
}
