//! K-relations: finitely supported maps from attribute tuples to
//! non-neutral monoid values.
//!
//! A relation is stored support-only (no explicit zeros), over an
//! ordered set of attributes with finite declared domains. The
//! marginal on a subset of attributes sums weights over agreeing
//! tuples and generalizes projection: on the boolean monoid it *is*
//! projection.
//!
//! Relations are immutable in spirit — every operation returns a new
//! value — and all of them are pure, so sharing across threads is
//! safe.

mod consistency;
mod witness;

pub use consistency::{
    consistent, globally_consistent, inner_consistent, pairwise_consistent, Consistency,
    PairwiseOutcome,
};
pub use witness::{generic_witness, is_witness_of, search_witness, standard_join, WitnessFn};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::Error;
use crate::monoid::{MonoidSpec, Value};
use crate::Result;

/// A named attribute with a finite, non-empty domain of value symbols.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Attribute {
    name: String,
    domain: Vec<String>,
}

impl Attribute {
    pub fn new<S: Into<String>>(
        name: impl Into<String>,
        domain: impl IntoIterator<Item = S>,
    ) -> Result<Self> {
        let name = name.into();
        let domain: Vec<String> = domain.into_iter().map(Into::into).collect();
        if domain.is_empty() {
            return Err(Error::Attribute(format!("{name}: empty domain")));
        }
        let mut seen = BTreeSet::new();
        for v in &domain {
            if !seen.insert(v) {
                return Err(Error::Attribute(format!("{name}: duplicate domain value {v}")));
            }
        }
        Ok(Attribute { name, domain })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> &[String] {
        &self.domain
    }
}

/// An ordered set of attributes with unique names.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct AttributeSet {
    attrs: Vec<Attribute>,
}

impl AttributeSet {
    pub fn new(attrs: Vec<Attribute>) -> Result<Self> {
        let mut names = BTreeSet::new();
        for a in &attrs {
            if !names.insert(a.name.clone()) {
                return Err(Error::Attribute(format!("duplicate attribute {}", a.name)));
            }
        }
        Ok(AttributeSet { attrs })
    }

    pub fn empty() -> Self {
        AttributeSet::default()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Attribute> {
        self.attrs.iter()
    }

    pub fn len(&self) -> usize {
        self.attrs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.attrs.is_empty()
    }

    pub fn get(&self, name: &str) -> Option<&Attribute> {
        self.attrs.iter().find(|a| a.name == name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.get(name).is_some()
    }

    /// Attribute names as a set.
    pub fn names(&self) -> BTreeSet<String> {
        self.attrs.iter().map(|a| a.name.clone()).collect()
    }

    /// The sub-attribute-set on the given names, preserving order.
    pub fn project(&self, names: &BTreeSet<String>) -> Result<AttributeSet> {
        for n in names {
            if !self.contains(n) {
                return Err(Error::NotASubset {
                    missing: n.clone(),
                    attrs: self.attrs.iter().map(|a| a.name.clone()).collect(),
                });
            }
        }
        Ok(AttributeSet {
            attrs: self
                .attrs
                .iter()
                .filter(|a| names.contains(&a.name))
                .cloned()
                .collect(),
        })
    }

    /// Union with `other`: this set's attributes first, then `other`'s
    /// new ones. Shared names must agree on their domains.
    pub fn union(&self, other: &AttributeSet) -> Result<AttributeSet> {
        let mut attrs = self.attrs.clone();
        for b in &other.attrs {
            match self.get(&b.name) {
                Some(a) if a.domain == b.domain => {}
                Some(a) => {
                    return Err(Error::Attribute(format!(
                        "attribute {} has conflicting domains {:?} vs {:?}",
                        a.name, a.domain, b.domain
                    )))
                }
                None => attrs.push(b.clone()),
            }
        }
        Ok(AttributeSet { attrs })
    }
}

/// A tuple: a finite map from attribute names to domain value symbols.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct KTuple(BTreeMap<String, String>);

impl KTuple {
    /// The empty tuple (the single tuple over the empty attribute set).
    pub fn empty() -> Self {
        KTuple::default()
    }

    pub fn of<K: Into<String>, V: Into<String>>(pairs: impl IntoIterator<Item = (K, V)>) -> Self {
        KTuple(pairs.into_iter().map(|(k, v)| (k.into(), v.into())).collect())
    }

    pub fn get(&self, name: &str) -> Option<&str> {
        self.0.get(name).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &String)> {
        self.0.iter()
    }

    /// Projection onto `names`; the unique sub-tuple agreeing on them.
    pub fn project(&self, names: &BTreeSet<String>) -> KTuple {
        KTuple(
            self.0
                .iter()
                .filter(|(k, _)| names.contains(*k))
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        )
    }

    /// Merges two tuples that agree on their common attributes; `None`
    /// when they clash.
    pub fn merge(&self, other: &KTuple) -> Option<KTuple> {
        let mut out = self.0.clone();
        for (k, v) in &other.0 {
            match out.get(k) {
                Some(existing) if existing != v => return None,
                Some(_) => {}
                None => {
                    out.insert(k.clone(), v.clone());
                }
            }
        }
        Some(KTuple(out))
    }

    /// Renders as `(A=0, B=1)` with attribute order taken from `attrs`.
    pub fn render(&self, attrs: &AttributeSet) -> String {
        let parts: Vec<String> = attrs
            .iter()
            .filter_map(|a| self.get(a.name()).map(|v| format!("{}={v}", a.name())))
            .collect();
        format!("({})", parts.join(", "))
    }
}

/// A finitely supported K-relation.
#[derive(Clone, Debug)]
pub struct KRelation {
    attrs: AttributeSet,
    spec: MonoidSpec,
    support: BTreeMap<KTuple, Value>,
}

impl PartialEq for KRelation {
    /// Equality as weighted relations: same monoid, same attribute
    /// names, same support. Attribute order and domains do not count.
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec
            && self.attrs.names() == other.attrs.names()
            && self.support == other.support
    }
}
impl Eq for KRelation {}

impl fmt::Display for KRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.support.is_empty() {
            return write!(f, "(empty)");
        }
        let rows: Vec<String> = self
            .support
            .iter()
            .map(|(t, v)| format!("{} -> {}", t.render(&self.attrs), self.spec.format_element(v)))
            .collect();
        write!(f, "{}", rows.join("; "))
    }
}

impl KRelation {
    /// The empty relation over `attrs`.
    pub fn new(attrs: AttributeSet, spec: MonoidSpec) -> Self {
        KRelation {
            attrs,
            spec,
            support: BTreeMap::new(),
        }
    }

    pub fn with_rows(
        attrs: AttributeSet,
        spec: MonoidSpec,
        rows: impl IntoIterator<Item = (KTuple, Value)>,
    ) -> Result<Self> {
        let mut rel = KRelation::new(attrs, spec);
        for (t, v) in rows {
            rel.insert(t, v)?;
        }
        Ok(rel)
    }

    /// Sets the weight of a fresh tuple. The tuple must range exactly
    /// over the relation's attributes with values from their domains;
    /// neutral weights are dropped, duplicates are rejected.
    pub fn insert(&mut self, tuple: KTuple, weight: Value) -> Result<()> {
        if !self.spec.is_element(&weight) {
            return Err(Error::InvalidElement {
                monoid: self.spec.name().into(),
                repr: format!("{weight:?}"),
            });
        }
        if tuple.len() != self.attrs.len() {
            return Err(Error::Tuple(format!(
                "tuple {} does not cover attributes {:?}",
                tuple.render(&self.attrs),
                self.attrs.names()
            )));
        }
        for attr in self.attrs.iter() {
            match tuple.get(attr.name()) {
                Some(v) if attr.domain().contains(&v.to_string()) => {}
                Some(v) => {
                    return Err(Error::Tuple(format!(
                        "value {v} not in domain of {}",
                        attr.name()
                    )))
                }
                None => {
                    return Err(Error::Tuple(format!("missing attribute {}", attr.name())))
                }
            }
        }
        if self.spec.is_zero(&weight) {
            return Ok(());
        }
        if self.support.contains_key(&tuple) {
            return Err(Error::Tuple(format!(
                "duplicate tuple {}",
                tuple.render(&self.attrs)
            )));
        }
        self.support.insert(tuple, weight);
        Ok(())
    }

    pub fn attrs(&self) -> &AttributeSet {
        &self.attrs
    }

    pub fn spec(&self) -> &MonoidSpec {
        &self.spec
    }

    pub fn names(&self) -> BTreeSet<String> {
        self.attrs.names()
    }

    /// Support size.
    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = (&KTuple, &Value)> {
        self.support.iter()
    }

    /// The weight of a tuple; neutral when outside the support.
    pub fn weight(&self, t: &KTuple) -> Value {
        self.support.get(t).cloned().unwrap_or_else(|| self.spec.zero())
    }

    /// Total weight: the marginal on the empty attribute set.
    pub fn total(&self) -> Result<Value> {
        self.spec.sum(self.support.values())
    }

    /// The marginal on `names`: weights summed over tuples agreeing on
    /// `names`. Requires `names` to be a subset of the attributes.
    pub fn marginal(&self, names: &BTreeSet<String>) -> Result<KRelation> {
        let attrs = self.attrs.project(names)?;
        let mut acc: BTreeMap<KTuple, Value> = BTreeMap::new();
        for (t, w) in &self.support {
            let key = t.project(names);
            let next = match acc.get(&key) {
                Some(cur) => self.spec.add(cur, w)?,
                None => w.clone(),
            };
            acc.insert(key, next);
        }
        // positivity: sums of non-neutral weights stay non-neutral,
        // but filter anyway to preserve the support-only invariant
        acc.retain(|_, v| !self.spec.is_zero(v));
        Ok(KRelation {
            attrs,
            spec: self.spec.clone(),
            support: acc,
        })
    }

    /// The boolean relation with weight 1 exactly on the support.
    pub fn support_relation(&self) -> KRelation {
        KRelation {
            attrs: self.attrs.clone(),
            spec: MonoidSpec::boolean(),
            support: self
                .support
                .keys()
                .map(|t| (t.clone(), Value::Bool(true)))
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn attrs01(names: &[&str]) -> AttributeSet {
        AttributeSet::new(
            names
                .iter()
                .map(|n| Attribute::new(*n, ["0", "1"]).unwrap())
                .collect(),
        )
        .unwrap()
    }

    fn names(ns: &[&str]) -> BTreeSet<String> {
        ns.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn marginal_sums_weights() {
        let attrs = AttributeSet::new(vec![
            Attribute::new("A", ["a1"]).unwrap(),
            Attribute::new("B", ["b1", "b2"]).unwrap(),
        ])
        .unwrap();
        let rel = KRelation::with_rows(
            attrs,
            MonoidSpec::bag(),
            [
                (KTuple::of([("A", "a1"), ("B", "b1")]), Value::Nat(2)),
                (KTuple::of([("A", "a1"), ("B", "b2")]), Value::Nat(3)),
            ],
        )
        .unwrap();
        let m = rel.marginal(&names(&["A"])).unwrap();
        assert_eq!(m.len(), 1);
        assert_eq!(m.weight(&KTuple::of([("A", "a1")])), Value::Nat(5));

        // marginal on all attributes is the relation itself
        let all = rel.marginal(&rel.names()).unwrap();
        assert_eq!(all, rel);

        // not-a-subset errors
        assert!(rel.marginal(&names(&["C"])).is_err());
    }

    #[test]
    fn boolean_marginal_is_projection() {
        let rel = KRelation::with_rows(
            attrs01(&["A", "B"]),
            MonoidSpec::boolean(),
            [
                (KTuple::of([("A", "0"), ("B", "0")]), Value::Bool(true)),
                (KTuple::of([("A", "1"), ("B", "1")]), Value::Bool(true)),
            ],
        )
        .unwrap();
        let m = rel.marginal(&names(&["B"])).unwrap();
        assert_eq!(m.len(), 2);
        assert_eq!(m.weight(&KTuple::of([("B", "0")])), Value::Bool(true));
        assert_eq!(m.weight(&KTuple::of([("B", "1")])), Value::Bool(true));
    }

    #[test]
    fn support_relation_examples() {
        let empty = KRelation::new(attrs01(&["A"]), MonoidSpec::bag());
        assert!(empty.support_relation().is_empty());

        let attrs = AttributeSet::new(vec![Attribute::new("A", ["a"]).unwrap()]).unwrap();
        let rel = KRelation::with_rows(
            attrs,
            MonoidSpec::bag(),
            [(KTuple::of([("A", "a")]), Value::Nat(7))],
        )
        .unwrap();
        let s = rel.support_relation();
        assert_eq!(s.weight(&KTuple::of([("A", "a")])), Value::Bool(true));
        assert_eq!(s.spec(), &MonoidSpec::boolean());
    }

    #[test]
    fn insert_validation() {
        let mut rel = KRelation::new(attrs01(&["A", "B"]), MonoidSpec::bag());
        // zero weights are dropped silently
        rel.insert(KTuple::of([("A", "0"), ("B", "0")]), Value::Nat(0))
            .unwrap();
        assert!(rel.is_empty());

        rel.insert(KTuple::of([("A", "0"), ("B", "0")]), Value::Nat(1))
            .unwrap();
        // duplicates rejected
        assert!(rel
            .insert(KTuple::of([("A", "0"), ("B", "0")]), Value::Nat(2))
            .is_err());
        // domain violation
        assert!(rel
            .insert(KTuple::of([("A", "2"), ("B", "0")]), Value::Nat(1))
            .is_err());
        // wrong attribute set
        assert!(rel.insert(KTuple::of([("A", "0")]), Value::Nat(1)).is_err());
        // foreign weight
        assert!(rel
            .insert(KTuple::of([("A", "1"), ("B", "0")]), Value::Bool(true))
            .is_err());
    }

    #[test]
    fn empty_attribute_set_has_the_empty_tuple() {
        let mut rel = KRelation::new(AttributeSet::empty(), MonoidSpec::bag());
        rel.insert(KTuple::empty(), Value::Nat(4)).unwrap();
        assert_eq!(rel.total().unwrap(), Value::Nat(4));
        let m = rel.marginal(&BTreeSet::new()).unwrap();
        assert_eq!(m.weight(&KTuple::empty()), Value::Nat(4));
    }
}
