//! Positive commutative monoids and their elements.
//!
//! A monoid here is a structure `(K, +, 0)` with `+` associative and
//! commutative, `0` neutral, and positivity: `p + q = 0` implies
//! `p = q = 0`. Annotation values for relations are drawn from one of
//! six built-in kinds:
//!
//! * `boolean` — `({0,1}, or, 0)`; annotated relations degenerate to
//!   standard relations;
//! * `bag` — non-negative integers under addition (multiplicities);
//! * `nsg(g1,g2,...)` — the numerical semigroup generated by the given
//!   positive integers, e.g. `nsg(3,5)` = {0, 3, 5, 6, 8, 9, 10, ...};
//! * `tmin` — reals extended with infinity under minimum, neutral ∞;
//! * `vmax` — the unit interval [0,1] under maximum, neutral 0;
//! * `pset(a,b,...)` — subsets of a finite ground set under union.
//!
//! All kinds except numerical semigroups have the transportation
//! property and come with a closed-form transport solver; see
//! [`transport`].

mod decimal;
mod transport;

pub use decimal::Decimal;
pub use transport::{
    probe_transportation_property, solve_transport, verify_transport, Budget, Feasibility,
    ProbeOutcome, TransportInstance, TransportMatrix,
};

use std::collections::BTreeSet;
use std::fmt;

use crate::error::Error;
use crate::Result;

/// Which monoid a [`MonoidSpec`] denotes.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum MonoidKind {
    Boolean,
    Bag,
    NumericalSemigroup(Vec<u64>),
    TropicalMin,
    MaxUnitInterval,
    Powerset(BTreeSet<String>),
}

/// An identified positive commutative monoid.
///
/// Values are immutable after construction and safe to share across
/// threads; all operations on them are pure.
#[derive(Clone, Debug)]
pub struct MonoidSpec {
    kind: MonoidKind,
    name: String,
}

impl PartialEq for MonoidSpec {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}
impl Eq for MonoidSpec {}

impl fmt::Display for MonoidSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// An element of some monoid, in canonical form.
///
/// Equality is representational: canonicalization happens at parse
/// time, after which two elements are equal iff their representations
/// are.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Value {
    Bool(bool),
    Nat(u64),
    Dec(Decimal),
    /// The point at infinity; neutral element of the tropical monoid.
    Inf,
    Set(BTreeSet<String>),
}

impl MonoidSpec {
    pub fn boolean() -> Self {
        Self::of(MonoidKind::Boolean)
    }

    pub fn bag() -> Self {
        Self::of(MonoidKind::Bag)
    }

    pub fn numerical_semigroup(generators: &[u64]) -> Result<Self> {
        if generators.is_empty() || generators.contains(&0) {
            return Err(Error::BadMonoidSpec(format!("nsg{generators:?}")));
        }
        Ok(Self::of(MonoidKind::NumericalSemigroup(generators.to_vec())))
    }

    pub fn tropical_min() -> Self {
        Self::of(MonoidKind::TropicalMin)
    }

    pub fn max_unit_interval() -> Self {
        Self::of(MonoidKind::MaxUnitInterval)
    }

    pub fn powerset<I: IntoIterator<Item = S>, S: Into<String>>(ground: I) -> Self {
        Self::of(MonoidKind::Powerset(
            ground.into_iter().map(Into::into).collect(),
        ))
    }

    fn of(kind: MonoidKind) -> Self {
        let name = match &kind {
            MonoidKind::Boolean => "boolean".into(),
            MonoidKind::Bag => "bag".into(),
            MonoidKind::NumericalSemigroup(gens) => {
                format!("nsg({})", gens.iter().map(u64::to_string).collect::<Vec<_>>().join(","))
            }
            MonoidKind::TropicalMin => "tmin".into(),
            MonoidKind::MaxUnitInterval => "vmax".into(),
            MonoidKind::Powerset(g) => format!("pset({})", g.iter().cloned().collect::<Vec<_>>().join(",")),
        };
        MonoidSpec { kind, name }
    }

    /// Parses the spec text syntax: `boolean`, `bag`, `nsg(3,5)`,
    /// `tmin`, `vmax`, `pset(a,b,c)`.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        match text {
            "boolean" => return Ok(Self::boolean()),
            "bag" => return Ok(Self::bag()),
            "tmin" => return Ok(Self::tropical_min()),
            "vmax" => return Ok(Self::max_unit_interval()),
            _ => {}
        }
        let args = |prefix: &str| -> Option<Vec<String>> {
            text.strip_prefix(prefix)?
                .strip_prefix('(')?
                .strip_suffix(')')
                .map(|inner| {
                    inner
                        .split(',')
                        .map(|s| s.trim().to_string())
                        .filter(|s| !s.is_empty())
                        .collect()
                })
        };
        if let Some(gens) = args("nsg") {
            let gens: Vec<u64> = gens
                .iter()
                .map(|g| g.parse().map_err(|_| Error::BadMonoidSpec(text.into())))
                .collect::<Result<_>>()?;
            return Self::numerical_semigroup(&gens);
        }
        if let Some(ground) = args("pset") {
            return Ok(Self::powerset(ground));
        }
        Err(Error::BadMonoidSpec(text.into()))
    }

    pub fn kind(&self) -> &MonoidKind {
        &self.kind
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// The neutral element.
    pub fn zero(&self) -> Value {
        match &self.kind {
            MonoidKind::Boolean => Value::Bool(false),
            MonoidKind::Bag | MonoidKind::NumericalSemigroup(_) => Value::Nat(0),
            MonoidKind::TropicalMin => Value::Inf,
            MonoidKind::MaxUnitInterval => Value::Dec(Decimal::ZERO),
            MonoidKind::Powerset(_) => Value::Set(BTreeSet::new()),
        }
    }

    pub fn is_zero(&self, v: &Value) -> bool {
        *v == self.zero()
    }

    /// True iff `v` denotes a member of the monoid's universe.
    pub fn is_element(&self, v: &Value) -> bool {
        match (&self.kind, v) {
            (MonoidKind::Boolean, Value::Bool(_)) => true,
            (MonoidKind::Bag, Value::Nat(_)) => true,
            (MonoidKind::NumericalSemigroup(gens), Value::Nat(n)) => nsg_member(gens, *n),
            (MonoidKind::TropicalMin, Value::Inf) => true,
            (MonoidKind::TropicalMin, Value::Dec(_)) => true,
            (MonoidKind::MaxUnitInterval, Value::Dec(d)) => {
                (Decimal::ZERO..=Decimal::ONE).contains(d)
            }
            (MonoidKind::Powerset(ground), Value::Set(s)) => s.iter().all(|x| ground.contains(x)),
            _ => false,
        }
    }

    fn check(&self, v: &Value) -> Result<()> {
        if self.is_element(v) {
            Ok(())
        } else {
            Err(Error::InvalidElement {
                monoid: self.name.clone(),
                repr: self.describe(v),
            })
        }
    }

    fn describe(&self, v: &Value) -> String {
        match v {
            Value::Bool(b) => if *b { "1" } else { "0" }.into(),
            Value::Nat(n) => n.to_string(),
            Value::Dec(d) => d.to_string(),
            Value::Inf => "inf".into(),
            Value::Set(s) => format!("{{{}}}", s.iter().cloned().collect::<Vec<_>>().join(",")),
        }
    }

    /// Monoid addition. Errors if either argument is not an element.
    pub fn add(&self, x: &Value, y: &Value) -> Result<Value> {
        self.check(x)?;
        self.check(y)?;
        Ok(match (&self.kind, x, y) {
            (MonoidKind::Boolean, Value::Bool(a), Value::Bool(b)) => Value::Bool(*a || *b),
            (MonoidKind::Bag | MonoidKind::NumericalSemigroup(_), Value::Nat(a), Value::Nat(b)) => {
                Value::Nat(a + b)
            }
            (MonoidKind::TropicalMin, a, b) => match (a, b) {
                (Value::Inf, v) | (v, Value::Inf) => v.clone(),
                (Value::Dec(a), Value::Dec(b)) => Value::Dec((*a).min(*b)),
                _ => unreachable!("checked above"),
            },
            (MonoidKind::MaxUnitInterval, Value::Dec(a), Value::Dec(b)) => {
                Value::Dec((*a).max(*b))
            }
            (MonoidKind::Powerset(_), Value::Set(a), Value::Set(b)) => {
                Value::Set(a.union(b).cloned().collect())
            }
            _ => unreachable!("checked above"),
        })
    }

    /// Folds [`MonoidSpec::add`] over `xs`; the empty fold is the
    /// neutral element.
    pub fn sum<'a, I: IntoIterator<Item = &'a Value>>(&self, xs: I) -> Result<Value> {
        let mut acc = self.zero();
        for x in xs {
            acc = self.add(&acc, x)?;
        }
        Ok(acc)
    }

    /// Parses an element from its text form.
    ///
    /// Booleans are `0`/`1`; bag and numerical-semigroup elements are
    /// non-negative integers; `tmin` accepts decimals or `inf`; `vmax`
    /// accepts decimals in [0,1]; powerset elements look like `{a,b}`.
    pub fn parse_element(&self, text: &str) -> Result<Value> {
        let text = text.trim();
        let bad = || Error::InvalidElement {
            monoid: self.name.clone(),
            repr: text.into(),
        };
        let v = match &self.kind {
            MonoidKind::Boolean => match text {
                "0" => Value::Bool(false),
                "1" => Value::Bool(true),
                _ => return Err(bad()),
            },
            MonoidKind::Bag | MonoidKind::NumericalSemigroup(_) => {
                Value::Nat(text.parse().map_err(|_| bad())?)
            }
            MonoidKind::TropicalMin => {
                if text == "inf" {
                    Value::Inf
                } else {
                    Value::Dec(text.parse().map_err(|_| bad())?)
                }
            }
            MonoidKind::MaxUnitInterval => Value::Dec(text.parse().map_err(|_| bad())?),
            MonoidKind::Powerset(_) => {
                let inner = text
                    .strip_prefix('{')
                    .and_then(|t| t.strip_suffix('}'))
                    .ok_or_else(bad)?;
                Value::Set(
                    inner
                        .split(',')
                        .map(str::trim)
                        .filter(|s| !s.is_empty())
                        .map(String::from)
                        .collect(),
                )
            }
        };
        self.check(&v)?;
        Ok(v)
    }

    /// Canonical text form of an element; inverse of
    /// [`MonoidSpec::parse_element`].
    pub fn format_element(&self, v: &Value) -> String {
        self.describe(v)
    }

    /// Whether a closed-form transport solver exists for this monoid
    /// (all built-in kinds except numerical semigroups).
    pub fn has_closed_form_transport(&self) -> bool {
        !matches!(self.kind, MonoidKind::NumericalSemigroup(_))
    }

    /// A canonical finite pool of elements used by samplers and
    /// law-checking suites. Always contains the neutral element and at
    /// least one non-neutral element.
    pub fn sample_pool(&self) -> Vec<Value> {
        match &self.kind {
            MonoidKind::Boolean => vec![Value::Bool(false), Value::Bool(true)],
            MonoidKind::Bag => (0..=9).map(Value::Nat).collect(),
            MonoidKind::NumericalSemigroup(gens) => (0..=15)
                .filter(|n| nsg_member(gens, *n))
                .map(Value::Nat)
                .collect(),
            MonoidKind::TropicalMin => {
                let mut pool = vec![Value::Inf];
                for s in ["-1.5", "0", "0.5", "1", "2.25", "4", "10"] {
                    pool.push(Value::Dec(s.parse().unwrap()));
                }
                pool
            }
            MonoidKind::MaxUnitInterval => ["0", "0.1", "0.25", "0.5", "0.75", "0.9", "1"]
                .iter()
                .map(|s| Value::Dec(s.parse().unwrap()))
                .collect(),
            MonoidKind::Powerset(ground) => {
                let items: Vec<&String> = ground.iter().collect();
                if items.len() <= 4 {
                    // all subsets
                    (0u32..(1 << items.len()))
                        .map(|mask| {
                            Value::Set(
                                items
                                    .iter()
                                    .enumerate()
                                    .filter(|(i, _)| mask & (1 << i) != 0)
                                    .map(|(_, s)| (*s).clone())
                                    .collect(),
                            )
                        })
                        .collect()
                } else {
                    let mut pool = vec![Value::Set(BTreeSet::new())];
                    pool.extend(
                        items
                            .iter()
                            .map(|s| Value::Set(std::iter::once((*s).clone()).collect())),
                    );
                    pool.push(Value::Set(ground.clone()));
                    pool
                }
            }
        }
    }

    /// Whether `part` can still be extended to `target` by adding more
    /// elements, i.e. `part + rest = target` is not yet ruled out.
    /// Used to prune backtracking searches; the final check is always
    /// exact equality.
    pub(crate) fn can_extend_to(&self, part: &Value, target: &Value) -> bool {
        match (&self.kind, part, target) {
            (MonoidKind::Boolean, Value::Bool(p), Value::Bool(t)) => !*p || *t,
            (
                MonoidKind::Bag | MonoidKind::NumericalSemigroup(_),
                Value::Nat(p),
                Value::Nat(t),
            ) => p <= t,
            // min only ever decreases the accumulator
            (MonoidKind::TropicalMin, p, t) => tropical_ge(p, t),
            (MonoidKind::MaxUnitInterval, Value::Dec(p), Value::Dec(t)) => p <= t,
            (MonoidKind::Powerset(_), Value::Set(p), Value::Set(t)) => p.is_subset(t),
            _ => false,
        }
    }
}

fn tropical_ge(x: &Value, y: &Value) -> bool {
    match (x, y) {
        (Value::Inf, _) => true,
        (_, Value::Inf) => false,
        (Value::Dec(a), Value::Dec(b)) => a >= b,
        _ => false,
    }
}

/// Membership test for the numerical semigroup generated by `gens`.
fn nsg_member(gens: &[u64], n: u64) -> bool {
    if n == 0 {
        return true;
    }
    let mut reachable = vec![false; (n + 1) as usize];
    reachable[0] = true;
    for i in 1..=n {
        reachable[i as usize] = gens
            .iter()
            .any(|&g| g <= i && reachable[(i - g) as usize]);
    }
    reachable[n as usize]
}
