//! Seeded generators for singular boolean expressions, used by property
//! tests and benchmarks.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::expr::{BinOp, Expr};

/// Random SBE over `v0..v{n-1}` (shuffled) with random bracketing, random
/// operators and occasional negation. `n` must be at least 1.
pub fn random_sbe<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Expr {
    assert!(n >= 1, "an expression needs at least one condition");
    let mut names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    names.shuffle(rng);
    let mut names = names.into_iter();
    build(rng, n, &mut names)
}

fn build<R: Rng + ?Sized>(rng: &mut R, n: usize, names: &mut impl Iterator<Item = String>) -> Expr {
    let node = if n == 1 {
        Expr::Var(names.next().unwrap())
    } else {
        let split = rng.gen_range(1..n);
        let op = if rng.gen_bool(0.5) {
            BinOp::And
        } else {
            BinOp::Or
        };
        let l = build(rng, split, names);
        let r = build(rng, n - split, names);
        Expr::binary(op, l, r)
    };
    if rng.gen_bool(0.2) {
        Expr::not(node)
    } else {
        node
    }
}

/// Left-associated chain `c0 op c1 op ... op c{n-1}`.
pub fn chain(op: BinOp, n: usize) -> Expr {
    assert!(n >= 1);
    (1..n).fold(Expr::var("c0"), |acc, i| {
        Expr::binary(op, acc, Expr::var(format!("c{i}")))
    })
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::expr::validate_sbe;

    #[test]
    fn generated_expressions_are_sbes() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in 1..20 {
            let e = random_sbe(&mut rng, n);
            assert_eq!(validate_sbe(&e).unwrap().len(), n);
        }
    }

    #[test]
    fn chain_is_left_associated() {
        assert_eq!(chain(BinOp::And, 3).serialize(), "((c0 && c1) && c2)");
        assert_eq!(chain(BinOp::Or, 1).serialize(), "c0");
    }
}
