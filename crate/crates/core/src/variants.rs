//! Enumeration of structurally distinct, semantically equivalent
//! rearrangements of an SBE.
//!
//! The default mode recurses through the tree and, at every `&&`/`||`
//! node, combines each pair of child variants in original order and then
//! swapped order. Every swap pattern of an SBE yields a different tree, so an
//! expression with `k` binary nodes has exactly `2^k` variants.
//!
//! With [`VariantOptions::include_associativity`] each maximal chain of one
//! operator is flattened first and every operand ordering is combined with
//! every binary bracketing, `k! * Catalan(k-1)` shapes for a chain of `k`
//! operands.
//!
//! Enumeration is depth-first and deterministic. When the space exceeds
//! [`VariantOptions::max_variants`] the family is truncated to the first
//! `max_variants` members, or, with a sample seed, filled with uniformly
//! drawn distinct variants.

use std::collections::{HashMap, HashSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::{validate_sbe, BinOp, Expr};

pub const DEFAULT_MAX_VARIANTS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct VariantOptions {
    pub include_associativity: bool,
    pub max_variants: usize,
    /// When set and the cap is hit, sample uniformly instead of truncating.
    pub sample_seed: Option<u64>,
}

impl Default for VariantOptions {
    fn default() -> Self {
        VariantOptions {
            include_associativity: false,
            max_variants: DEFAULT_MAX_VARIANTS,
            sample_seed: None,
        }
    }
}

impl VariantOptions {
    pub fn uncapped() -> Self {
        VariantOptions {
            max_variants: usize::MAX,
            ..Default::default()
        }
    }

    pub fn with_max(max_variants: usize) -> Self {
        VariantOptions {
            max_variants,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_variants == 0 {
            return Err(Error::InvalidOptions(
                "max_variants must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VariantFamily {
    pub source: Expr,
    /// Member 0 is always the source structure.
    pub variants: Vec<Expr>,
    /// Size of the full variant space (saturating).
    pub space_size: u128,
    pub truncated: bool,
    pub options: VariantOptions,
}

impl VariantFamily {
    pub fn len(&self) -> usize {
        self.variants.len()
    }

    pub fn is_empty(&self) -> bool {
        self.variants.is_empty()
    }
}

/// Commutativity-only variant count, `2^k` for `k` binary nodes.
pub fn predicted_variant_count(e: &Expr) -> Result<u128> {
    validate_sbe(e)?;
    Ok(space_size(e, false))
}

pub fn generate_variants(e: &Expr, opts: &VariantOptions) -> Result<VariantFamily> {
    validate_sbe(e)?;
    opts.validate()?;
    let assoc = opts.include_associativity;
    let space = space_size(e, assoc);
    let truncated = space > opts.max_variants as u128;

    let variants = match (truncated, opts.sample_seed) {
        (true, Some(seed)) => sample(e, assoc, opts.max_variants, seed),
        _ => {
            let mut shapes = ShapeCache::default();
            let raw = enumerate(e, assoc, opts.max_variants, &mut shapes);
            dedup(raw)
        }
    };
    debug_assert_eq!(variants.first(), Some(e));

    Ok(VariantFamily {
        source: e.clone(),
        variants,
        space_size: space,
        truncated,
        options: *opts,
    })
}

fn dedup(raw: Vec<Expr>) -> Vec<Expr> {
    let mut seen = HashSet::with_capacity(raw.len());
    raw.into_iter()
        .filter(|v| seen.insert(v.structural_key()))
        .collect()
}

fn space_size(e: &Expr, assoc: bool) -> u128 {
    match e {
        Expr::Var(_) => 1,
        Expr::Not(x) => space_size(x, assoc),
        Expr::And(..) | Expr::Or(..) if assoc => {
            let (operands, _) = flatten(e);
            let k = operands.len();
            operands.iter().map(|o| space_size(o, assoc)).fold(
                factorial(k).saturating_mul(catalan(k - 1)),
                u128::saturating_mul,
            )
        }
        Expr::And(l, r) | Expr::Or(l, r) => 2u128
            .saturating_mul(space_size(l, assoc))
            .saturating_mul(space_size(r, assoc)),
    }
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).fold(1u128, u128::saturating_mul)
}

/// Catalan(n), saturating. Exact while it fits in `u128`.
fn catalan(n: usize) -> u128 {
    // C(i+1) = C(i) * 2(2i+1) / (i+2); the division is exact.
    let mut c: u128 = 1;
    for i in 0..n as u128 {
        match c.checked_mul(2 * (2 * i + 1)) {
            Some(x) => c = x / (i + 2),
            None => return u128::MAX,
        }
    }
    c
}

/// Binary bracketing of a flattened chain; leaves are filled left to right.
#[derive(Debug, Clone, PartialEq, Eq)]
enum Shape {
    Leaf,
    Node(Box<Shape>, Box<Shape>),
}

impl Shape {
    fn build(&self, op: BinOp, operands: &mut impl Iterator<Item = Expr>) -> Expr {
        match self {
            Shape::Leaf => operands.next().expect("operand per leaf"),
            Shape::Node(l, r) => {
                let l = l.build(op, operands);
                let r = r.build(op, operands);
                Expr::binary(op, l, r)
            }
        }
    }
}

/// Splits a maximal same-operator chain into operands and bracketing.
fn flatten(e: &Expr) -> (Vec<&Expr>, Shape) {
    let (op, ..) = e.as_binary().expect("binary node");
    fn walk<'a>(e: &'a Expr, op: BinOp, out: &mut Vec<&'a Expr>) -> Shape {
        match e.as_binary() {
            Some((o, l, r)) if o == op => {
                let l = walk(l, op, out);
                let r = walk(r, op, out);
                Shape::Node(Box::new(l), Box::new(r))
            }
            _ => {
                out.push(e);
                Shape::Leaf
            }
        }
    }
    let mut operands = Vec::new();
    let shape = walk(e, op, &mut operands);
    (operands, shape)
}

/// First `limit` bracketings of `k` leaves, by split point then recursively.
#[derive(Default)]
struct ShapeCache {
    memo: HashMap<(usize, usize), Vec<Shape>>,
}

impl ShapeCache {
    fn shapes(&mut self, k: usize, limit: usize) -> Vec<Shape> {
        if k == 1 {
            return vec![Shape::Leaf];
        }
        if let Some(s) = self.memo.get(&(k, limit)) {
            return s.clone();
        }
        let mut out = Vec::new();
        'outer: for split in 1..k {
            let left = self.shapes(split, limit);
            let right = self.shapes(k - split, limit);
            for l in &left {
                for r in &right {
                    out.push(Shape::Node(Box::new(l.clone()), Box::new(r.clone())));
                    if out.len() >= limit {
                        break 'outer;
                    }
                }
            }
        }
        self.memo.insert((k, limit), out.clone());
        out
    }
}

fn enumerate(e: &Expr, assoc: bool, limit: usize, shapes: &mut ShapeCache) -> Vec<Expr> {
    match e {
        Expr::Var(_) => vec![e.clone()],
        Expr::Not(x) => enumerate(x, assoc, limit, shapes)
            .into_iter()
            .map(Expr::not)
            .collect(),
        _ if assoc => enumerate_chain(e, limit, shapes),
        Expr::And(l, r) | Expr::Or(l, r) => {
            let op = e.as_binary().unwrap().0;
            let lefts = enumerate(l, assoc, limit, shapes);
            let rights = enumerate(r, assoc, limit, shapes);
            let mut out = Vec::with_capacity(limit.min(2 * lefts.len() * rights.len()));
            for lv in &lefts {
                for rv in &rights {
                    out.push(Expr::binary(op, lv.clone(), rv.clone()));
                    if out.len() >= limit {
                        return out;
                    }
                    out.push(Expr::binary(op, rv.clone(), lv.clone()));
                    if out.len() >= limit {
                        return out;
                    }
                }
            }
            out
        }
    }
}

/// Orderings x bracketings x operand variants of one maximal chain, in that
/// loop order. Identity ordering, source bracketing and operand sources come
/// first so the source tree leads.
fn enumerate_chain(e: &Expr, limit: usize, cache: &mut ShapeCache) -> Vec<Expr> {
    let op = e.as_binary().unwrap().0;
    let (operands, source_shape) = flatten(e);
    let k = operands.len();
    let operand_variants: Vec<Vec<Expr>> = operands
        .iter()
        .map(|o| enumerate(o, true, limit, cache))
        .collect();

    let mut shapes = vec![source_shape.clone()];
    shapes.extend(
        cache
            .shapes(k, limit)
            .into_iter()
            .filter(|s| *s != source_shape)
            .take(limit.saturating_sub(1)),
    );

    let mut out = Vec::new();
    let mut seen = HashSet::new();
    let mut order: Vec<usize> = (0..k).collect();
    loop {
        for shape in &shapes {
            let mut pick = vec![0usize; k];
            loop {
                let leaves = order
                    .iter()
                    .zip(&pick)
                    .map(|(&slot, &i)| operand_variants[slot][i].clone());
                let tree = shape.build(op, &mut leaves.into_iter());
                if seen.insert(tree.structural_key()) {
                    out.push(tree);
                    if out.len() >= limit {
                        return out;
                    }
                }
                if !advance(&mut pick, |pos| operand_variants[order[pos]].len()) {
                    break;
                }
            }
        }
        if !next_permutation(&mut order) {
            return out;
        }
    }
}

/// Odometer step, last position fastest.
fn advance(pick: &mut [usize], radix: impl Fn(usize) -> usize) -> bool {
    for pos in (0..pick.len()).rev() {
        pick[pos] += 1;
        if pick[pos] < radix(pos) {
            return true;
        }
        pick[pos] = 0;
    }
    false
}

/// Lexicographic successor; false once the last permutation is reached.
fn next_permutation(xs: &mut [usize]) -> bool {
    let Some(i) = xs.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let j = xs.iter().rposition(|&x| x > xs[i]).unwrap();
    xs.swap(i, j);
    xs[i + 1..].reverse();
    true
}

fn sample(e: &Expr, assoc: bool, limit: usize, seed: u64) -> Vec<Expr> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ln_catalan = LnCatalan::new(e.leaf_count());
    let mut seen = HashSet::new();
    seen.insert(e.structural_key());
    let mut out = vec![e.clone()];
    let max_attempts = limit.saturating_mul(64).saturating_add(1024);
    let mut attempts = 0usize;
    while out.len() < limit && attempts < max_attempts {
        attempts += 1;
        let v = sample_one(e, assoc, &mut rng, &ln_catalan);
        if seen.insert(v.structural_key()) {
            out.push(v);
        }
    }
    out
}

fn sample_one(e: &Expr, assoc: bool, rng: &mut ChaCha8Rng, lc: &LnCatalan) -> Expr {
    match e {
        Expr::Var(_) => e.clone(),
        Expr::Not(x) => Expr::not(sample_one(x, assoc, rng, lc)),
        _ if assoc => {
            let op = e.as_binary().unwrap().0;
            let (operands, _) = flatten(e);
            let mut parts: Vec<Expr> = operands
                .iter()
                .map(|o| sample_one(o, assoc, rng, lc))
                .collect();
            parts.shuffle(rng);
            let shape = random_shape(parts.len(), rng, lc);
            shape.build(op, &mut parts.into_iter())
        }
        Expr::And(l, r) | Expr::Or(l, r) => {
            let op = e.as_binary().unwrap().0;
            let l = sample_one(l, assoc, rng, lc);
            let r = sample_one(r, assoc, rng, lc);
            if rng.gen_bool(0.5) {
                Expr::binary(op, r, l)
            } else {
                Expr::binary(op, l, r)
            }
        }
    }
}

/// ln Catalan(i) for i < n, for split weights without overflow.
struct LnCatalan(Vec<f64>);

impl LnCatalan {
    fn new(n: usize) -> Self {
        let mut v = Vec::with_capacity(n.max(1));
        let mut c = 0.0f64;
        for i in 0..n.max(1) {
            v.push(c);
            c += (2.0 * (2.0 * i as f64 + 1.0)).ln() - (i as f64 + 2.0).ln();
        }
        LnCatalan(v)
    }
}

/// Uniform over the Catalan(k-1) bracketings of `k` leaves.
fn random_shape(k: usize, rng: &mut ChaCha8Rng, lc: &LnCatalan) -> Shape {
    if k == 1 {
        return Shape::Leaf;
    }
    let total = lc.0[k - 1];
    let mut u: f64 = rng.gen();
    let mut split = k - 1;
    for s in 1..k {
        let w = (lc.0[s - 1] + lc.0[k - s - 1] - total).exp();
        if u < w {
            split = s;
            break;
        }
        u -= w;
    }
    Shape::Node(
        Box::new(random_shape(split, rng, lc)),
        Box::new(random_shape(k - split, rng, lc)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse;

    fn p(s: &str) -> Expr {
        parse(s).unwrap()
    }

    fn keys(f: &VariantFamily) -> Vec<String> {
        f.variants.iter().map(|v| v.to_string()).collect()
    }

    #[test]
    fn single_swap() {
        let f = generate_variants(&p("a && b"), &VariantOptions::default()).unwrap();
        assert_eq!(keys(&f), ["a && b", "b && a"]);
        assert!(!f.truncated);
    }

    #[test]
    fn hand_traced_or_of_and() {
        let f = generate_variants(&p("(a && b) || c"), &VariantOptions::default()).unwrap();
        assert_eq!(
            keys(&f),
            ["a && b || c", "c || a && b", "b && a || c", "c || b && a"]
        );
    }

    #[test]
    fn negated_leaf_has_one_variant() {
        let f = generate_variants(&p("!a"), &VariantOptions::default()).unwrap();
        assert_eq!(keys(&f), ["!a"]);
    }

    #[test]
    fn not_over_subtree_maps_inner_variants() {
        let f = generate_variants(&p("!(a || b)"), &VariantOptions::default()).unwrap();
        assert_eq!(keys(&f), ["!(a || b)", "!(b || a)"]);
    }

    #[test]
    fn predicted_counts() {
        assert_eq!(predicted_variant_count(&p("a && b")).unwrap(), 2);
        assert_eq!(predicted_variant_count(&p("a && b && c")).unwrap(), 4);
        assert_eq!(
            predicted_variant_count(&p("a && (!b || !c) && d || e")).unwrap(),
            16
        );
        assert!(predicted_variant_count(&p("a || a")).is_err());
    }

    #[test]
    fn sbe_violation_propagates() {
        assert!(matches!(
            generate_variants(&p("a && !a"), &VariantOptions::default()),
            Err(Error::SbeViolation { .. })
        ));
    }

    #[test]
    fn zero_cap_rejected() {
        assert!(matches!(
            generate_variants(&p("a"), &VariantOptions::with_max(0)),
            Err(Error::InvalidOptions(_))
        ));
    }

    #[test]
    fn truncation_keeps_enumeration_prefix() {
        let e = p("a && (!b || !c) && d || e");
        let full = generate_variants(&e, &VariantOptions::default()).unwrap();
        let capped = generate_variants(&e, &VariantOptions::with_max(5)).unwrap();
        assert!(capped.truncated);
        assert_eq!(capped.space_size, 16);
        assert_eq!(capped.variants[..], full.variants[..5]);
    }

    #[test]
    fn catalan_and_factorial() {
        let c: Vec<u128> = (0..8).map(catalan).collect();
        assert_eq!(c, [1, 1, 2, 5, 14, 42, 132, 429]);
        assert_eq!(factorial(5), 120);
        assert_eq!(catalan(200), u128::MAX);
    }

    #[test]
    fn shape_cache_counts() {
        let mut cache = ShapeCache::default();
        for k in 1..8 {
            assert_eq!(cache.shapes(k, usize::MAX).len() as u128, catalan(k - 1));
        }
        assert_eq!(cache.shapes(12, 10).len(), 10);
    }

    #[test]
    fn permutations_in_lexicographic_order() {
        let mut xs = vec![0, 1, 2];
        let mut seen = vec![xs.clone()];
        while next_permutation(&mut xs) {
            seen.push(xs.clone());
        }
        assert_eq!(seen.len(), 6);
        assert_eq!(seen[1], [0, 2, 1]);
        assert_eq!(seen[5], [2, 1, 0]);
    }

    #[test]
    fn associative_chain_of_three() {
        let opts = VariantOptions {
            include_associativity: true,
            ..VariantOptions::uncapped()
        };
        let f = generate_variants(&p("a && (b && c)"), &opts).unwrap();
        // 3! orderings x 2 bracketings
        assert_eq!(f.len(), 12);
        assert_eq!(f.space_size, 12);
        assert_eq!(f.variants[0], p("a && (b && c)"));
        assert!(f.variants.contains(&p("c && b && a")));
    }

    #[test]
    fn sampling_is_seeded_and_distinct() {
        let e = p("a && b && c && d && e && f && g");
        let opts = VariantOptions {
            max_variants: 20,
            sample_seed: Some(3),
            ..Default::default()
        };
        let f1 = generate_variants(&e, &opts).unwrap();
        let f2 = generate_variants(&e, &opts).unwrap();
        assert!(f1.truncated);
        assert_eq!(f1.len(), 20);
        assert_eq!(f1.variants, f2.variants);
        assert_eq!(f1.variants[0], e);
        let distinct: HashSet<_> = f1.variants.iter().map(Expr::structural_key).collect();
        assert_eq!(distinct.len(), 20);
        let other = generate_variants(
            &e,
            &VariantOptions {
                sample_seed: Some(4),
                ..opts
            },
        )
        .unwrap();
        assert_ne!(f1.variants, other.variants);
    }

    #[test]
    fn random_shape_is_roughly_uniform() {
        let lc = LnCatalan::new(6);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut counts: HashMap<String, usize> = HashMap::new();
        for _ in 0..14_000 {
            let s = random_shape(5, &mut rng, &lc);
            *counts.entry(format!("{s:?}")).or_default() += 1;
        }
        // Catalan(4) = 14 shapes, ~1000 draws each
        assert_eq!(counts.len(), 14);
        assert!(counts.values().all(|&c| (800..1200).contains(&c)));
    }
}
