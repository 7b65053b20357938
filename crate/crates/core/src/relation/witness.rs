//! Consistency witness functions.
//!
//! A witness function W takes two relations R(X), S(Y) and returns a
//! relation over XY that must be a consistency witness whenever R and
//! S are consistent; on inconsistent inputs its output is
//! unconstrained. The standard join is such a function on the boolean
//! monoid. [`generic_witness`] assembles witnesses from the closed-form
//! transport solvers and works on every monoid with the transportation
//! property; [`search_witness`] does the same through the exhaustive
//! solver and works on any monoid at desk scale.

use std::sync::Arc;

use super::consistency::{consistent, Consistency};
use super::KRelation;
use crate::error::Error;
use crate::monoid::{Budget, MonoidKind, MonoidSpec, Value};
use crate::Result;

/// A named binary witness function over K-relations.
#[derive(Clone)]
pub struct WitnessFn {
    name: String,
    f: Arc<dyn Fn(&KRelation, &KRelation) -> Result<KRelation> + Send + Sync>,
}

impl std::fmt::Debug for WitnessFn {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "WitnessFn({})", self.name)
    }
}

impl WitnessFn {
    pub fn new(
        name: impl Into<String>,
        f: impl Fn(&KRelation, &KRelation) -> Result<KRelation> + Send + Sync + 'static,
    ) -> Self {
        WitnessFn {
            name: name.into(),
            f: Arc::new(f),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn apply(&self, r: &KRelation, s: &KRelation) -> Result<KRelation> {
        (self.f)(r, s)
    }
}

/// True iff `t` marginalizes to both `r` and `s`.
pub fn is_witness_of(t: &KRelation, r: &KRelation, s: &KRelation) -> Result<bool> {
    Ok(&t.marginal(&r.names())? == r && &t.marginal(&s.names())? == s)
}

/// The solver-induced witness function for a monoid with the
/// transportation property: block-assembled witness on consistent
/// inputs, the empty relation over the attribute union otherwise. The
/// contract only constrains the consistent case, and a total function
/// keeps expression evaluation total.
pub fn generic_witness(spec: &MonoidSpec) -> Result<WitnessFn> {
    if !spec.has_closed_form_transport() {
        return Err(Error::UnsupportedMonoid(spec.name().into()));
    }
    let expected = spec.clone();
    Ok(WitnessFn::new("generic", move |r, s| {
        check_spec(&expected, r, s)?;
        match consistent(r, s, &mut Budget::default())? {
            Consistency::Consistent(w) => Ok(w),
            Consistency::Inconsistent => Ok(KRelation::new(
                r.attrs().union(s.attrs())?,
                r.spec().clone(),
            )),
            Consistency::Undecided => unreachable!("closed-form transports always decide"),
        }
    }))
}

/// Like [`generic_witness`] but backed by the exhaustive transport
/// search, so it works for monoids without the transportation property
/// too. Errors when the per-application step budget runs out.
pub fn search_witness(spec: &MonoidSpec, steps_per_apply: u64) -> WitnessFn {
    let expected = spec.clone();
    WitnessFn::new("search", move |r, s| {
        check_spec(&expected, r, s)?;
        match consistent(r, s, &mut Budget::new(steps_per_apply))? {
            Consistency::Consistent(w) => Ok(w),
            Consistency::Inconsistent => Ok(KRelation::new(
                r.attrs().union(s.attrs())?,
                r.spec().clone(),
            )),
            Consistency::Undecided => Err(Error::Precondition(
                "witness search budget exhausted".into(),
            )),
        }
    })
}

/// The standard join of two relations, a consistency witness function
/// on the boolean monoid only.
pub fn standard_join() -> WitnessFn {
    WitnessFn::new("standard-join", |r, s| {
        if !matches!(r.spec().kind(), MonoidKind::Boolean) {
            return Err(Error::UnsupportedMonoid(format!(
                "standard join is a witness function on boolean only, got {}",
                r.spec().name()
            )));
        }
        check_spec(r.spec(), r, s)?;
        let mut out = KRelation::new(r.attrs().union(s.attrs())?, r.spec().clone());
        for (rt, _) in r.support() {
            for (st, _) in s.support() {
                if let Some(merged) = rt.merge(st) {
                    out.insert(merged, Value::Bool(true))?;
                }
            }
        }
        Ok(out)
    })
}

fn check_spec(expected: &MonoidSpec, r: &KRelation, s: &KRelation) -> Result<()> {
    for rel in [r, s] {
        if rel.spec() != expected {
            return Err(Error::MonoidMismatch {
                left: expected.name().into(),
                right: rel.spec().name().into(),
            });
        }
    }
    Ok(())
}
