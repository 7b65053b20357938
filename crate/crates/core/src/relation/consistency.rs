//! Consistency of K-relations.
//!
//! Two relations R(X), S(Y) are consistent when some T(XY) marginalizes
//! to both; such a T is a consistency witness. Deciding consistency
//! reduces to transportation feasibility: group the supports by their
//! projection onto the shared attributes — each group pairs the
//! R-tuples (row sums) against the S-tuples (column sums) of one
//! block, and a witness is exactly a choice of transport matrix per
//! block. Inner consistency (equal marginals on the shared attributes)
//! is the necessary total-per-block condition; for monoids with the
//! transportation property it is also sufficient.
//!
//! Global consistency of a whole collection is decided either by a
//! fast path (alpha-acyclic schema + closed-form monoid: evaluate a
//! sequential join in a running-intersection order and verify) or by a
//! bounded exhaustive search over candidate witnesses.

use std::collections::{BTreeMap, BTreeSet};

use super::witness::generic_witness;
use super::{AttributeSet, KRelation, KTuple};
use crate::error::Error;
use crate::hypergraph::{Hyperedge, Hypergraph};
use crate::monoid::{Budget, Feasibility, MonoidKind, MonoidSpec, TransportInstance, Value};
use crate::Result;

/// Outcome of a consistency check.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Consistency {
    /// Consistent, with a concrete witness.
    Consistent(KRelation),
    Inconsistent,
    /// The search budget ran out; not the same as inconsistent.
    Undecided,
}

impl Consistency {
    pub fn is_consistent(&self) -> bool {
        matches!(self, Consistency::Consistent(_))
    }

    pub fn witness(&self) -> Option<&KRelation> {
        match self {
            Consistency::Consistent(w) => Some(w),
            _ => None,
        }
    }
}

fn check_same_monoid(r: &KRelation, s: &KRelation) -> Result<()> {
    if r.spec() != s.spec() {
        return Err(Error::MonoidMismatch {
            left: r.spec().name().into(),
            right: s.spec().name().into(),
        });
    }
    Ok(())
}

/// Equal marginals on the shared attribute set. With no shared
/// attributes this compares marginals on the empty set, i.e. total
/// weights.
pub fn inner_consistent(r: &KRelation, s: &KRelation) -> Result<bool> {
    check_same_monoid(r, s)?;
    let shared: BTreeSet<String> = r.names().intersection(&s.names()).cloned().collect();
    Ok(r.marginal(&shared)? == s.marginal(&shared)?)
}

/// Decides consistency of `r` and `s`, producing a witness when one
/// exists. Inner consistency is checked first; each shared-tuple block
/// then becomes one transportation instance.
pub fn consistent(r: &KRelation, s: &KRelation, budget: &mut Budget) -> Result<Consistency> {
    check_same_monoid(r, s)?;
    if !inner_consistent(r, s)? {
        return Ok(Consistency::Inconsistent);
    }
    let spec = r.spec().clone();
    let shared: BTreeSet<String> = r.names().intersection(&s.names()).cloned().collect();
    let union_attrs = r.attrs().union(s.attrs())?;

    let group = |rel: &KRelation| -> BTreeMap<KTuple, Vec<(KTuple, Value)>> {
        let mut blocks: BTreeMap<KTuple, Vec<(KTuple, Value)>> = BTreeMap::new();
        for (t, w) in rel.support() {
            blocks
                .entry(t.project(&shared))
                .or_default()
                .push((t.clone(), w.clone()));
        }
        blocks
    };
    let r_blocks = group(r);
    let s_blocks = group(s);
    // inner consistency makes the block keys coincide
    debug_assert_eq!(
        r_blocks.keys().collect::<Vec<_>>(),
        s_blocks.keys().collect::<Vec<_>>()
    );

    let mut witness = KRelation::new(union_attrs, spec.clone());
    let mut undecided = false;
    for (key, rows) in &r_blocks {
        let cols = &s_blocks[key];
        let inst = TransportInstance::new(
            &spec,
            rows.iter().map(|(_, w)| w.clone()).collect(),
            cols.iter().map(|(_, w)| w.clone()).collect(),
        )?;
        match crate::monoid::solve_transport(&spec, &inst, budget)? {
            Feasibility::Feasible(matrix) => {
                if undecided {
                    continue; // a definite infeasibility may still appear
                }
                for (i, (rt, _)) in rows.iter().enumerate() {
                    for (j, (st, _)) in cols.iter().enumerate() {
                        let d = &matrix.entries()[i][j];
                        if spec.is_zero(d) {
                            continue;
                        }
                        let merged = rt.merge(st).expect("tuples agree on the shared block key");
                        witness.insert(merged, d.clone())?;
                    }
                }
            }
            Feasibility::Infeasible => return Ok(Consistency::Inconsistent),
            Feasibility::Undecided => undecided = true,
        }
    }
    if undecided {
        return Ok(Consistency::Undecided);
    }
    debug_assert_eq!(&witness.marginal(&r.names())?, r);
    debug_assert_eq!(&witness.marginal(&s.names())?, s);
    Ok(Consistency::Consistent(witness))
}

/// Outcome of checking all pairs of a collection.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum PairwiseOutcome {
    Consistent,
    /// The first inconsistent pair, by index.
    Inconsistent(usize, usize),
    /// No inconsistent pair found but this pair was undecided.
    Undecided(usize, usize),
}

impl PairwiseOutcome {
    pub fn is_consistent(&self) -> bool {
        matches!(self, PairwiseOutcome::Consistent)
    }
}

/// Checks consistency of every pair `(i, j)`, `i < j`.
pub fn pairwise_consistent(rs: &[KRelation], budget: &mut Budget) -> Result<PairwiseOutcome> {
    let mut undecided = None;
    for i in 0..rs.len() {
        for j in (i + 1)..rs.len() {
            match consistent(&rs[i], &rs[j], budget)? {
                Consistency::Consistent(_) => {}
                Consistency::Inconsistent => return Ok(PairwiseOutcome::Inconsistent(i, j)),
                Consistency::Undecided => {
                    undecided.get_or_insert((i, j));
                }
            }
        }
    }
    Ok(match undecided {
        Some((i, j)) => PairwiseOutcome::Undecided(i, j),
        None => PairwiseOutcome::Consistent,
    })
}

/// Decides global consistency of a collection: is there a single T
/// over the union of all attributes with `T[X_i] = R_i` for every i?
pub fn globally_consistent(rs: &[KRelation], budget: &mut Budget) -> Result<Consistency> {
    if rs.is_empty() {
        return Ok(Consistency::Consistent(KRelation::new(
            AttributeSet::empty(),
            MonoidSpec::boolean(),
        )));
    }
    let spec = rs[0].spec().clone();
    for r in rs {
        check_same_monoid(&rs[0], r)?;
    }
    let mut union_attrs = rs[0].attrs().clone();
    for r in &rs[1..] {
        union_attrs = union_attrs.union(r.attrs())?;
    }

    // Fast path: an alpha-acyclic schema over a monoid with closed-form
    // transports admits a sequential-join witness in a
    // running-intersection order, provided the collection is pairwise
    // consistent.
    let schema = Hypergraph::new(
        rs.iter()
            .enumerate()
            .map(|(i, r)| Hyperedge::new(format!("X{i}"), r.names()))
            .collect::<Result<Vec<_>>>()?,
    )?;
    if spec.has_closed_form_transport() {
        if let Some(order) = schema.join_order() {
            match pairwise_consistent(rs, budget)? {
                PairwiseOutcome::Inconsistent(_, _) => return Ok(Consistency::Inconsistent),
                PairwiseOutcome::Consistent => {
                    let w = generic_witness(&spec)?;
                    let mut t = rs[order[0]].clone();
                    for &i in &order[1..] {
                        t = w.apply(&t, &rs[i])?;
                    }
                    let sound = rs
                        .iter()
                        .map(|r| Ok(&t.marginal(&r.names())? == r))
                        .collect::<Result<Vec<bool>>>()?
                        .into_iter()
                        .all(|ok| ok);
                    if sound {
                        return Ok(Consistency::Consistent(t));
                    }
                    // fall through to the exhaustive search
                }
                PairwiseOutcome::Undecided(_, _) => {}
            }
        }
    }
    global_exhaustive(rs, union_attrs, &spec, budget)
}

/// Candidate weights for the global witness search. Positivity bounds
/// every entry by the weights it must add up into: numeric kinds take
/// all elements up to the largest occurring weight, booleans both
/// elements, powersets all subsets of the occurring union, min/max
/// kinds the occurring values plus the neutral element.
fn global_pool(spec: &MonoidSpec, rs: &[KRelation]) -> Vec<Value> {
    let occurring: BTreeSet<Value> = rs
        .iter()
        .flat_map(|r| r.support().map(|(_, w)| w.clone()))
        .collect();
    let pool: BTreeSet<Value> = match spec.kind() {
        MonoidKind::Boolean => [Value::Bool(false), Value::Bool(true)].into_iter().collect(),
        MonoidKind::Bag | MonoidKind::NumericalSemigroup(_) => {
            let max = occurring
                .iter()
                .filter_map(|v| match v {
                    Value::Nat(n) => Some(*n),
                    _ => None,
                })
                .max()
                .unwrap_or(0);
            (0..=max)
                .map(Value::Nat)
                .filter(|v| spec.is_element(v))
                .collect()
        }
        MonoidKind::TropicalMin => occurring.into_iter().chain([Value::Inf]).collect(),
        MonoidKind::MaxUnitInterval | MonoidKind::Powerset(_) => {
            let mut pool = occurring;
            pool.insert(spec.zero());
            if let MonoidKind::Powerset(_) = spec.kind() {
                let union: BTreeSet<String> = pool
                    .iter()
                    .flat_map(|v| match v {
                        Value::Set(s) => s.iter().cloned().collect::<Vec<_>>(),
                        _ => vec![],
                    })
                    .collect();
                let items: Vec<String> = union.into_iter().collect();
                if items.len() <= 12 {
                    return (0u32..(1 << items.len()))
                        .map(|mask| {
                            Value::Set(
                                items
                                    .iter()
                                    .enumerate()
                                    .filter(|(i, _)| mask & (1 << i) != 0)
                                    .map(|(_, s)| s.clone())
                                    .collect(),
                            )
                        })
                        .collect();
                }
            }
            pool
        }
    };
    pool.into_iter().collect()
}

struct Constraint {
    target: Value,
    acc: Value,
    remaining: usize,
}

fn global_exhaustive(
    rs: &[KRelation],
    union_attrs: AttributeSet,
    spec: &MonoidSpec,
    budget: &mut Budget,
) -> Result<Consistency> {
    // Candidate support: the join of the supports. Positivity forces
    // every witness tuple to project into each relation's support.
    let mut cells: Vec<KTuple> = vec![KTuple::empty()];
    for r in rs {
        let mut next = Vec::new();
        for cell in &cells {
            for (t, _) in r.support() {
                if let Some(merged) = cell.merge(t) {
                    next.push(merged);
                }
            }
        }
        next.sort();
        next.dedup();
        cells = next;
    }

    // One constraint per (relation, support tuple); every cell joins
    // exactly one constraint per relation.
    let mut constraints: Vec<Constraint> = Vec::new();
    let mut by_key: BTreeMap<(usize, KTuple), usize> = BTreeMap::new();
    for (i, r) in rs.iter().enumerate() {
        for (t, w) in r.support() {
            by_key.insert((i, t.clone()), constraints.len());
            constraints.push(Constraint {
                target: w.clone(),
                acc: spec.zero(),
                remaining: 0,
            });
        }
    }
    let mut memberships: Vec<Vec<usize>> = Vec::with_capacity(cells.len());
    for cell in &cells {
        let mut ids = Vec::with_capacity(rs.len());
        for (i, r) in rs.iter().enumerate() {
            let key = (i, cell.project(&r.names()));
            let id = by_key[&key]; // guaranteed by candidate construction
            constraints[id].remaining += 1;
            ids.push(id);
        }
        memberships.push(ids);
    }
    // a support tuple no candidate cell projects onto can never receive
    // its weight
    if constraints.iter().any(|c| c.remaining == 0) {
        return Ok(Consistency::Inconsistent);
    }

    let pool = global_pool(spec, rs);
    let mut assignment: Vec<Value> = vec![spec.zero(); cells.len()];

    fn go(
        spec: &MonoidSpec,
        pool: &[Value],
        memberships: &[Vec<usize>],
        constraints: &mut Vec<Constraint>,
        assignment: &mut Vec<Value>,
        cell: usize,
        budget: &mut Budget,
        cut: &mut bool,
    ) -> Result<bool> {
        if cell == memberships.len() {
            return Ok(constraints.iter().all(|c| c.acc == c.target));
        }
        'values: for v in pool {
            if !budget.tick() {
                *cut = true;
                return Ok(false);
            }
            let mut updated: Vec<(usize, Value)> = Vec::with_capacity(memberships[cell].len());
            for &id in &memberships[cell] {
                let c = &constraints[id];
                let acc = spec.add(&c.acc, v)?;
                let ok = if c.remaining == 1 {
                    acc == c.target
                } else {
                    spec.can_extend_to(&acc, &c.target)
                };
                if !ok {
                    continue 'values;
                }
                updated.push((id, acc));
            }
            let mut old: Vec<(usize, Value)> = Vec::with_capacity(updated.len());
            for (id, acc) in updated {
                old.push((id, std::mem::replace(&mut constraints[id].acc, acc)));
                constraints[id].remaining -= 1;
            }
            assignment[cell] = v.clone();
            if go(spec, pool, memberships, constraints, assignment, cell + 1, budget, cut)? {
                return Ok(true);
            }
            for (id, prev) in old {
                constraints[id].acc = prev;
                constraints[id].remaining += 1;
            }
        }
        Ok(false)
    }

    let mut cut = false;
    let found = go(
        spec,
        &pool,
        &memberships,
        &mut constraints,
        &mut assignment,
        0,
        budget,
        &mut cut,
    )?;
    if found {
        let mut t = KRelation::new(union_attrs, spec.clone());
        for (cell, v) in cells.into_iter().zip(assignment) {
            if !spec.is_zero(&v) {
                t.insert(cell, v)?;
            }
        }
        for r in rs {
            debug_assert_eq!(&t.marginal(&r.names())?, r);
        }
        Ok(Consistency::Consistent(t))
    } else if cut {
        Ok(Consistency::Undecided)
    } else {
        Ok(Consistency::Inconsistent)
    }
}
