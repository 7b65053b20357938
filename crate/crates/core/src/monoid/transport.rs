//! Transportation instances and solvers.
//!
//! An instance asks for an `m x n` matrix over the monoid whose rows
//! sum to a given vector `b` and whose columns sum to a given vector
//! `c`. A monoid has the transportation property when every
//! equal-total instance is solvable. Solvers come in two flavours:
//!
//! * closed forms for the monoids known to have the property
//!   (northwest-corner for bags; pointwise and/max/min/intersection for
//!   the lattice-like kinds), each verified post hoc against the
//!   row/column equations;
//! * a bounded exhaustive backtracking search for everything else,
//!   which can also prove infeasibility. Running out of budget is a
//!   third outcome, never conflated with infeasibility.

use std::collections::BTreeSet;

use itertools::Itertools;

use super::{Decimal, MonoidKind, MonoidSpec, Value};
use crate::error::Error;
use crate::Result;

/// Step budget for backtracking searches.
#[derive(Clone, Debug)]
pub struct Budget {
    limit: u64,
    used: u64,
}

impl Budget {
    pub fn new(limit: u64) -> Self {
        Budget { limit, used: 0 }
    }

    /// Consumes one step; false once the limit is hit.
    pub fn tick(&mut self) -> bool {
        if self.used >= self.limit {
            return false;
        }
        self.used += 1;
        true
    }

    pub fn used(&self) -> u64 {
        self.used
    }

    pub fn exhausted(&self) -> bool {
        self.used >= self.limit
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(2_000_000)
    }
}

/// Row-sum and column-sum targets of a transportation problem.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TransportInstance {
    rows: Vec<Value>,
    cols: Vec<Value>,
}

impl TransportInstance {
    pub fn new(spec: &MonoidSpec, rows: Vec<Value>, cols: Vec<Value>) -> Result<Self> {
        if rows.is_empty() || cols.is_empty() {
            return Err(Error::Precondition(
                "transport instance needs at least one row and one column".into(),
            ));
        }
        for v in rows.iter().chain(cols.iter()) {
            if !spec.is_element(v) {
                return Err(Error::InvalidElement {
                    monoid: spec.name().into(),
                    repr: spec.format_element(v),
                });
            }
        }
        Ok(TransportInstance { rows, cols })
    }

    pub fn rows(&self) -> &[Value] {
        &self.rows
    }

    pub fn cols(&self) -> &[Value] {
        &self.cols
    }

    pub fn describe(&self, spec: &MonoidSpec) -> String {
        let fmt = |vs: &[Value]| {
            vs.iter()
                .map(|v| spec.format_element(v))
                .collect::<Vec<_>>()
                .join(",")
        };
        format!("b=({}) c=({})", fmt(&self.rows), fmt(&self.cols))
    }
}

/// A candidate solution matrix.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TransportMatrix {
    entries: Vec<Vec<Value>>,
}

impl TransportMatrix {
    pub fn entries(&self) -> &[Vec<Value>] {
        &self.entries
    }
}

/// Outcome of a transport solve.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Feasibility {
    Feasible(TransportMatrix),
    Infeasible,
    /// The search budget ran out before the space was exhausted.
    Undecided,
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible(_))
    }
}

/// Checks the row/column sum equations of `matrix` against `inst`.
pub fn verify_transport(
    spec: &MonoidSpec,
    inst: &TransportInstance,
    matrix: &TransportMatrix,
) -> Result<bool> {
    let (m, n) = (inst.rows.len(), inst.cols.len());
    if matrix.entries.len() != m || matrix.entries.iter().any(|r| r.len() != n) {
        return Ok(false);
    }
    for (row, b) in matrix.entries.iter().zip(&inst.rows) {
        if spec.sum(row)? != *b {
            return Ok(false);
        }
    }
    for (j, c) in inst.cols.iter().enumerate() {
        let col = matrix.entries.iter().map(|r| &r[j]);
        if spec.sum(col)? != *c {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Solves a transportation instance.
///
/// Unequal totals are immediately infeasible. Monoids with a closed
/// form get it (and the result is verified); numerical semigroups fall
/// back to the bounded exhaustive search.
pub fn solve_transport(
    spec: &MonoidSpec,
    inst: &TransportInstance,
    budget: &mut Budget,
) -> Result<Feasibility> {
    if spec.sum(&inst.rows)? != spec.sum(&inst.cols)? {
        return Ok(Feasibility::Infeasible);
    }
    if spec.has_closed_form_transport() {
        let matrix = closed_form(spec, inst)?;
        debug_assert!(verify_transport(spec, inst, &matrix)?);
        return Ok(Feasibility::Feasible(matrix));
    }
    solve_transport_exhaustive(spec, inst, budget)
}

fn closed_form(spec: &MonoidSpec, inst: &TransportInstance) -> Result<TransportMatrix> {
    let entries = match spec.kind() {
        MonoidKind::Bag => return Ok(northwest_corner(inst)),
        MonoidKind::Boolean => grid(inst, |b, c| match (b, c) {
            (Value::Bool(x), Value::Bool(y)) => Value::Bool(*x && *y),
            _ => unreachable!(),
        }),
        MonoidKind::TropicalMin => grid(inst, |b, c| match (b, c) {
            (Value::Inf, _) | (_, Value::Inf) => Value::Inf,
            (Value::Dec(x), Value::Dec(y)) => Value::Dec((*x).max(*y)),
            _ => unreachable!(),
        }),
        MonoidKind::MaxUnitInterval => grid(inst, |b, c| match (b, c) {
            (Value::Dec(x), Value::Dec(y)) => Value::Dec((*x).min(*y)),
            _ => unreachable!(),
        }),
        MonoidKind::Powerset(_) => grid(inst, |b, c| match (b, c) {
            (Value::Set(x), Value::Set(y)) => Value::Set(x.intersection(y).cloned().collect()),
            _ => unreachable!(),
        }),
        MonoidKind::NumericalSemigroup(_) => {
            return Err(Error::UnsupportedMonoid(spec.name().into()))
        }
    };
    Ok(TransportMatrix { entries })
}

fn grid(inst: &TransportInstance, f: impl Fn(&Value, &Value) -> Value) -> Vec<Vec<Value>> {
    inst.rows
        .iter()
        .map(|b| inst.cols.iter().map(|c| f(b, c)).collect())
        .collect()
}

/// Greedy northwest-corner rule for the bag monoid.
fn northwest_corner(inst: &TransportInstance) -> TransportMatrix {
    let nat = |v: &Value| match v {
        Value::Nat(n) => *n,
        _ => unreachable!(),
    };
    let mut rows: Vec<u64> = inst.rows.iter().map(nat).collect();
    let mut cols: Vec<u64> = inst.cols.iter().map(nat).collect();
    let mut entries = vec![vec![Value::Nat(0); cols.len()]; rows.len()];
    let (mut i, mut j) = (0, 0);
    while i < rows.len() && j < cols.len() {
        let d = rows[i].min(cols[j]);
        entries[i][j] = Value::Nat(d);
        rows[i] -= d;
        cols[j] -= d;
        if rows[i] == 0 && i + 1 < rows.len() {
            i += 1;
        } else if cols[j] == 0 {
            j += 1;
        } else {
            i += 1;
        }
    }
    TransportMatrix { entries }
}

/// Candidate entries for the exhaustive search. By positivity every
/// entry of a solution must "fit under" its row and column sums, which
/// bounds the pool:
/// numeric kinds take every monoid element up to the grand total; the
/// lattice-like kinds are covered by the values occurring in the
/// instance (their closed forms pick entries from exactly that set)
/// plus the neutral element; powersets take all subsets of the union.
fn search_pool(spec: &MonoidSpec, inst: &TransportInstance) -> Result<Vec<Value>> {
    let occurring = || inst.rows.iter().chain(inst.cols.iter()).cloned();
    let pool: BTreeSet<Value> = match spec.kind() {
        MonoidKind::Boolean => [Value::Bool(false), Value::Bool(true)].into_iter().collect(),
        MonoidKind::Bag | MonoidKind::NumericalSemigroup(_) => {
            let total = match spec.sum(&inst.rows)? {
                Value::Nat(n) => n,
                _ => unreachable!(),
            };
            (0..=total)
                .map(Value::Nat)
                .filter(|v| spec.is_element(v))
                .collect()
        }
        MonoidKind::TropicalMin => occurring().chain([Value::Inf]).collect(),
        MonoidKind::MaxUnitInterval => {
            occurring().chain([Value::Dec(Decimal::ZERO)]).collect()
        }
        MonoidKind::Powerset(_) => {
            let union: BTreeSet<String> = inst
                .rows
                .iter()
                .chain(inst.cols.iter())
                .flat_map(|v| match v {
                    Value::Set(s) => s.iter().cloned().collect::<Vec<_>>(),
                    _ => unreachable!(),
                })
                .collect();
            let items: Vec<String> = union.into_iter().collect();
            if items.len() > 16 {
                return Err(Error::Precondition(
                    "powerset transport search limited to unions of 16 symbols".into(),
                ));
            }
            (0u32..(1 << items.len()))
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
                .collect()
        }
    };
    Ok(pool.into_iter().collect())
}

/// Bounded exhaustive backtracking over candidate matrices, usable for
/// any monoid. Complete for the built-in kinds at desk scale: a
/// returned `Infeasible` means no matrix over the candidate pool
/// exists, and the pool provably covers some solution whenever one
/// exists at all.
pub fn solve_transport_exhaustive(
    spec: &MonoidSpec,
    inst: &TransportInstance,
    budget: &mut Budget,
) -> Result<Feasibility> {
    if spec.sum(&inst.rows)? != spec.sum(&inst.cols)? {
        return Ok(Feasibility::Infeasible);
    }
    let pool = search_pool(spec, inst)?;
    let (m, n) = (inst.rows.len(), inst.cols.len());
    let mut entries = vec![vec![spec.zero(); n]; m];
    let mut row_acc = vec![spec.zero(); m];
    let mut col_acc = vec![spec.zero(); n];

    // Depth-first over cells in row-major order with partial-sum
    // pruning; exact equality is enforced on each row's last cell and
    // each column's last cell.
    fn go(
        spec: &MonoidSpec,
        inst: &TransportInstance,
        pool: &[Value],
        entries: &mut Vec<Vec<Value>>,
        row_acc: &mut Vec<Value>,
        col_acc: &mut Vec<Value>,
        cell: usize,
        budget: &mut Budget,
        cut: &mut bool,
    ) -> Result<bool> {
        let (m, n) = (inst.rows().len(), inst.cols().len());
        if cell == m * n {
            return Ok(true);
        }
        let (i, j) = (cell / n, cell % n);
        for v in pool {
            if !budget.tick() {
                *cut = true;
                return Ok(false);
            }
            let r = spec.add(&row_acc[i], v)?;
            let c = spec.add(&col_acc[j], v)?;
            let row_ok = if j == n - 1 {
                r == inst.rows()[i]
            } else {
                spec.can_extend_to(&r, &inst.rows()[i])
            };
            let col_ok = if i == m - 1 {
                c == inst.cols()[j]
            } else {
                spec.can_extend_to(&c, &inst.cols()[j])
            };
            if !(row_ok && col_ok) {
                continue;
            }
            let (old_r, old_c) = (row_acc[i].clone(), col_acc[j].clone());
            row_acc[i] = r;
            col_acc[j] = c;
            entries[i][j] = v.clone();
            if go(spec, inst, pool, entries, row_acc, col_acc, cell + 1, budget, cut)? {
                return Ok(true);
            }
            row_acc[i] = old_r;
            col_acc[j] = old_c;
        }
        Ok(false)
    }

    let mut cut = false;
    let found = go(
        spec, inst, &pool, &mut entries, &mut row_acc, &mut col_acc, 0, budget, &mut cut,
    )?;
    if found {
        let matrix = TransportMatrix { entries };
        debug_assert!(verify_transport(spec, inst, &matrix)?);
        Ok(Feasibility::Feasible(matrix))
    } else if cut {
        Ok(Feasibility::Undecided)
    } else {
        Ok(Feasibility::Infeasible)
    }
}

/// Result of a transportation-property probe.
#[derive(Clone, Debug)]
pub struct ProbeOutcome {
    /// An equal-total instance with no solution, if one was found.
    pub counterexample: Option<TransportInstance>,
    /// Instances examined before stopping.
    pub examined: u64,
    /// Instances the solver could not decide within budget.
    pub undecided: u64,
}

/// Searches for an equal-total instance with entries from
/// `element_pool` that has no solution. Returns the first
/// counterexample in a deterministic enumeration order, or none if the
/// whole space up to `max_m x max_n` passes. Row and column vectors
/// are enumerated in non-decreasing order since feasibility is
/// invariant under permutation.
pub fn probe_transportation_property(
    spec: &MonoidSpec,
    max_m: usize,
    max_n: usize,
    element_pool: &[Value],
    budget: &mut Budget,
) -> Result<ProbeOutcome> {
    if max_m == 0 || max_n == 0 {
        return Err(Error::Precondition("probe caps must be at least 1".into()));
    }
    for v in element_pool {
        if !spec.is_element(v) {
            return Err(Error::InvalidElement {
                monoid: spec.name().into(),
                repr: spec.format_element(v),
            });
        }
    }
    let mut outcome = ProbeOutcome {
        counterexample: None,
        examined: 0,
        undecided: 0,
    };
    for m in 1..=max_m {
        for n in 1..=max_n {
            for rows in element_pool.iter().combinations_with_replacement(m) {
                let rows: Vec<Value> = rows.into_iter().cloned().collect();
                let row_total = spec.sum(&rows)?;
                for cols in element_pool.iter().combinations_with_replacement(n) {
                    let cols: Vec<Value> = cols.into_iter().cloned().collect();
                    if spec.sum(&cols)? != row_total {
                        continue;
                    }
                    let inst = TransportInstance::new(spec, rows.clone(), cols)?;
                    outcome.examined += 1;
                    match solve_transport(spec, &inst, budget)? {
                        Feasibility::Feasible(_) => {}
                        Feasibility::Infeasible => {
                            outcome.counterexample = Some(inst);
                            return Ok(outcome);
                        }
                        Feasibility::Undecided => outcome.undecided += 1,
                    }
                    if budget.exhausted() {
                        return Ok(outcome);
                    }
                }
            }
        }
    }
    Ok(outcome)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nats(ns: &[u64]) -> Vec<Value> {
        ns.iter().copied().map(Value::Nat).collect()
    }

    #[test]
    fn bag_northwest_example() {
        let spec = MonoidSpec::bag();
        let inst = TransportInstance::new(&spec, nats(&[2, 3]), nats(&[1, 4])).unwrap();
        let mut budget = Budget::default();
        match solve_transport(&spec, &inst, &mut budget).unwrap() {
            Feasibility::Feasible(m) => {
                assert_eq!(m.entries(), &[nats(&[1, 1]), nats(&[0, 3])]);
                assert!(verify_transport(&spec, &inst, &m).unwrap());
            }
            other => panic!("expected feasible, got {other:?}"),
        }
    }

    #[test]
    fn boolean_pointwise_example() {
        let spec = MonoidSpec::boolean();
        let one = Value::Bool(true);
        let inst = TransportInstance::new(
            &spec,
            vec![one.clone(), one.clone()],
            vec![one.clone(), one.clone()],
        )
        .unwrap();
        match solve_transport(&spec, &inst, &mut Budget::default()).unwrap() {
            Feasibility::Feasible(m) => {
                assert!(m.entries().iter().flatten().all(|v| *v == one));
            }
            other => panic!("expected feasible, got {other:?}"),
        }
    }

    #[test]
    fn unequal_totals_infeasible() {
        let spec = MonoidSpec::bag();
        let inst = TransportInstance::new(&spec, nats(&[2]), nats(&[3])).unwrap();
        assert_eq!(
            solve_transport(&spec, &inst, &mut Budget::default()).unwrap(),
            Feasibility::Infeasible
        );
    }

    #[test]
    fn nsg_counterexample_is_infeasible() {
        let spec = MonoidSpec::numerical_semigroup(&[3, 5]).unwrap();
        let inst = TransportInstance::new(&spec, nats(&[5, 5, 5]), nats(&[3, 3, 9])).unwrap();
        assert_eq!(
            solve_transport(&spec, &inst, &mut Budget::default()).unwrap(),
            Feasibility::Infeasible
        );
        // the same vectors are fine over the bag monoid
        let bag = MonoidSpec::bag();
        let inst = TransportInstance::new(&bag, nats(&[5, 5, 5]), nats(&[3, 3, 9])).unwrap();
        assert!(solve_transport(&bag, &inst, &mut Budget::default())
            .unwrap()
            .is_feasible());
    }

    #[test]
    fn nsg_feasible_instance_found_by_search() {
        let spec = MonoidSpec::numerical_semigroup(&[3, 5]).unwrap();
        let inst =
            TransportInstance::new(&spec, nats(&[5, 5, 5, 15]), nats(&[3, 3, 9, 15])).unwrap();
        match solve_transport(&spec, &inst, &mut Budget::default()).unwrap() {
            Feasibility::Feasible(m) => {
                assert!(verify_transport(&spec, &inst, &m).unwrap());
            }
            other => panic!("expected feasible, got {other:?}"),
        }
    }

    #[test]
    fn budget_exhaustion_is_undecided() {
        let spec = MonoidSpec::numerical_semigroup(&[3, 5]).unwrap();
        let inst = TransportInstance::new(&spec, nats(&[5, 5, 5]), nats(&[3, 3, 9])).unwrap();
        let mut budget = Budget::new(3);
        assert_eq!(
            solve_transport(&spec, &inst, &mut budget).unwrap(),
            Feasibility::Undecided
        );
    }

    #[test]
    fn probe_finds_nsg_counterexample() {
        let spec = MonoidSpec::numerical_semigroup(&[3, 5]).unwrap();
        let pool = nats(&[0, 3, 5, 6, 8, 9]);
        let out =
            probe_transportation_property(&spec, 3, 3, &pool, &mut Budget::default()).unwrap();
        let inst = out.counterexample.expect("nsg(3,5) must fail the probe");
        assert_eq!(
            solve_transport_exhaustive(&spec, &inst, &mut Budget::default()).unwrap(),
            Feasibility::Infeasible
        );
    }

    #[test]
    fn probe_passes_tp_monoids() {
        let boolean = MonoidSpec::boolean();
        let out = probe_transportation_property(
            &boolean,
            3,
            3,
            &boolean.sample_pool(),
            &mut Budget::default(),
        )
        .unwrap();
        assert!(out.counterexample.is_none());
        assert_eq!(out.undecided, 0);

        let bag = MonoidSpec::bag();
        let out =
            probe_transportation_property(&bag, 2, 2, &nats(&[0, 1, 2, 3]), &mut Budget::default())
                .unwrap();
        assert!(out.counterexample.is_none());
    }

    #[test]
    fn closed_form_agrees_with_exhaustive_search() {
        // Small instances: wherever both terminate they must agree on
        // feasibility.
        let specs = [
            MonoidSpec::boolean(),
            MonoidSpec::bag(),
            MonoidSpec::tropical_min(),
            MonoidSpec::max_unit_interval(),
            MonoidSpec::powerset(["a", "b"]),
        ];
        for spec in &specs {
            let pool = spec.sample_pool();
            let pick = |i: usize| pool[i % pool.len()].clone();
            for seed in 0..12usize {
                let rows = vec![pick(seed), pick(seed + 1)];
                let cols = vec![pick(seed + 2), pick(seed + 3)];
                if spec.sum(&rows).unwrap() != spec.sum(&cols).unwrap() {
                    continue;
                }
                let inst = TransportInstance::new(spec, rows, cols).unwrap();
                let fast = solve_transport(spec, &inst, &mut Budget::default()).unwrap();
                let slow =
                    solve_transport_exhaustive(spec, &inst, &mut Budget::default()).unwrap();
                assert_eq!(
                    fast.is_feasible(),
                    slow.is_feasible(),
                    "{spec}: {}",
                    inst.describe(spec)
                );
            }
        }
    }
}
