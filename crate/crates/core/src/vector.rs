//! Total truth assignments over a fixed, sorted variable set.

use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Sorted, duplicate-free variable names. Cheap to clone.
#[derive(Clone, Eq)]
pub struct VarSet(Arc<[String]>);

impl VarSet {
    pub fn new<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut names: Vec<String> = names.into_iter().map(Into::into).collect();
        names.sort_unstable();
        names.dedup();
        VarSet(names.into())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.binary_search_by(|n| n.as_str().cmp(name)).ok()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index_of(name).is_some()
    }

    pub(crate) fn words(&self) -> usize {
        words_for(self.len())
    }

    fn mismatch(&self, other: &VarSet) -> Error {
        Error::VariableMismatch {
            expected: self.0.to_vec(),
            found: other.0.to_vec(),
        }
    }

    /// Fails unless `other` names exactly the same variables.
    pub fn expect_same(&self, other: &VarSet) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(self.mismatch(other))
        }
    }
}

impl PartialEq for VarSet {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl fmt::Debug for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.0.iter()).finish()
    }
}

pub(crate) fn words_for(n: usize) -> usize {
    n.div_ceil(64).max(1)
}

/// A total assignment of booleans to every variable of a [`VarSet`].
///
/// Values are packed one bit per variable in `VarSet` order.
#[derive(Clone)]
pub struct TestVector {
    vars: VarSet,
    bits: Box<[u64]>,
}

impl TestVector {
    pub(crate) fn from_bits(vars: VarSet, bits: Box<[u64]>) -> Self {
        debug_assert_eq!(bits.len(), vars.words());
        TestVector { vars, bits }
    }

    /// All variables false.
    pub fn all_false(vars: &VarSet) -> Self {
        TestVector {
            bits: vec![0; vars.words()].into_boxed_slice(),
            vars: vars.clone(),
        }
    }

    pub fn from_map(map: &BTreeMap<String, bool>) -> Self {
        let vars = VarSet::new(map.keys().cloned());
        let mut v = TestVector::all_false(&vars);
        for (i, value) in map.values().enumerate() {
            v.set_index(i, *value);
        }
        v
    }

    /// Builds a vector over `vars` from `(name, value)` pairs, which must
    /// cover every variable exactly.
    pub fn from_pairs<'a, I>(vars: &VarSet, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, bool)>,
    {
        let mut v = TestVector::all_false(vars);
        let mut seen = vec![false; vars.len()];
        for (name, value) in pairs {
            let i = vars
                .index_of(name)
                .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
            seen[i] = true;
            v.set_index(i, value);
        }
        if seen.iter().all(|s| *s) {
            Ok(v)
        } else {
            let found = vars
                .names()
                .iter()
                .zip(&seen)
                .filter(|(_, s)| **s)
                .map(|(n, _)| n.clone());
            Err(vars.mismatch(&VarSet::new(found)))
        }
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub(crate) fn bits(&self) -> &[u64] {
        &self.bits
    }

    pub fn value_at(&self, index: usize) -> bool {
        self.bits[index / 64] >> (index % 64) & 1 == 1
    }

    pub fn set_index(&mut self, index: usize, value: bool) {
        let mask = 1u64 << (index % 64);
        if value {
            self.bits[index / 64] |= mask;
        } else {
            self.bits[index / 64] &= !mask;
        }
    }

    pub fn get(&self, name: &str) -> Option<bool> {
        self.vars.index_of(name).map(|i| self.value_at(i))
    }

    pub fn with(mut self, name: &str, value: bool) -> Result<Self> {
        let i = self
            .vars
            .index_of(name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
        self.set_index(i, value);
        Ok(self)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, bool)> + '_ {
        self.vars
            .names()
            .iter()
            .enumerate()
            .map(|(i, n)| (n.as_str(), self.value_at(i)))
    }

    pub fn to_map(&self) -> BTreeMap<String, bool> {
        self.iter().map(|(n, v)| (n.to_string(), v)).collect()
    }

    /// Number of variables on which the two vectors disagree. Both must
    /// share a variable set.
    pub fn hamming(&self, other: &TestVector) -> u32 {
        self.bits
            .iter()
            .zip(other.bits.iter())
            .map(|(a, b)| (a ^ b).count_ones())
            .sum()
    }

    /// The single variable index on which the vectors differ, if they differ
    /// in exactly one place.
    pub fn single_difference(&self, other: &TestVector) -> Option<usize> {
        let mut found = None;
        for (w, (a, b)) in self.bits.iter().zip(other.bits.iter()).enumerate() {
            let x = a ^ b;
            if x == 0 {
                continue;
            }
            if found.is_some() || x.count_ones() != 1 {
                return None;
            }
            found = Some(w * 64 + x.trailing_zeros() as usize);
        }
        found
    }
}

impl PartialEq for TestVector {
    fn eq(&self, other: &Self) -> bool {
        self.bits == other.bits && self.vars == other.vars
    }
}

impl Eq for TestVector {}

impl Hash for TestVector {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.bits.hash(state);
    }
}

impl fmt::Debug for TestVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.iter()).finish()
    }
}

impl Serialize for TestVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_map(self.iter())
    }
}

impl<'de> Deserialize<'de> for TestVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let map = BTreeMap::<String, bool>::deserialize(deserializer)?;
        Ok(TestVector::from_map(&map))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vars() -> VarSet {
        VarSet::new(["c", "a", "b", "a"])
    }

    #[test]
    fn varset_sorts_and_dedups() {
        assert_eq!(vars().names(), &["a", "b", "c"]);
        assert_eq!(vars().index_of("c"), Some(2));
        assert_eq!(vars().index_of("z"), None);
    }

    #[test]
    fn from_pairs_requires_total_assignment() {
        let v = vars();
        let ok = TestVector::from_pairs(&v, [("a", true), ("b", false), ("c", true)]).unwrap();
        assert_eq!(ok.get("a"), Some(true));
        assert_eq!(ok.get("b"), Some(false));
        assert!(matches!(
            TestVector::from_pairs(&v, [("a", true)]),
            Err(Error::VariableMismatch { .. })
        ));
        assert!(matches!(
            TestVector::from_pairs(&v, [("q", true)]),
            Err(Error::UnknownVariable(_))
        ));
    }

    #[test]
    fn single_difference_across_words() {
        let vars = VarSet::new((0..130).map(|i| format!("v{i:03}")));
        let a = TestVector::all_false(&vars);
        let mut b = a.clone();
        b.set_index(129, true);
        assert_eq!(a.single_difference(&b), Some(129));
        b.set_index(3, true);
        assert_eq!(a.single_difference(&b), None);
        assert_eq!(a.hamming(&b), 2);
        assert_eq!(a.single_difference(&a), None);
    }

    #[test]
    fn json_is_a_sorted_map() {
        let mut m = BTreeMap::new();
        m.insert("b".to_string(), true);
        m.insert("a".to_string(), false);
        let v = TestVector::from_map(&m);
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, r#"{"a":false,"b":true}"#);
        let back: TestVector = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
    }
}
