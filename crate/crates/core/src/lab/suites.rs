//! Randomized and enumerative verification suites.
//!
//! Each suite cross-checks independent implementations of the same
//! notion. Known counterexample instances are force-included in the
//! randomized suites so that the expected failures never depend on
//! sampling luck.

use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;

use super::{
    hstar_adversarial, nsg_p3_relations_with_names, render_collection, sample_globally_consistent,
    sample_pairwise_consistent, triangle_counterexample, VerificationReport,
};
use crate::hypergraph::{Hyperedge, Hypergraph, WeakCycleKind};
use crate::joinexpr::{enumerate_connected_sequential, is_monotone_wrt, JoinExpr, MonotoneVerdict};
use crate::monoid::{probe_transportation_property, Budget, MonoidKind, MonoidSpec, Value};
use crate::relation::{
    generic_witness, globally_consistent, pairwise_consistent, search_witness, standard_join,
    Consistency, KRelation, WitnessFn,
};
use crate::Result;

/// Every hypergraph (as an edge set, up to the fixed node naming) with
/// at most `max_nodes` nodes and `max_edges` hyperedges, including the
/// edgeless one. Isomorphic duplicates are not removed.
pub fn enumerate_hypergraphs(max_nodes: usize, max_edges: usize) -> Vec<Hypergraph> {
    const NAMES: [&str; 6] = ["A", "B", "C", "D", "E", "F"];
    let max_nodes = max_nodes.min(NAMES.len());
    let nodes = &NAMES[..max_nodes];
    let candidates: Vec<BTreeSet<String>> = (1u32..(1 << max_nodes))
        .map(|mask| {
            nodes
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, n)| n.to_string())
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    for k in 0..=max_edges.min(candidates.len()) {
        for subset in candidates.iter().combinations(k) {
            let edges = subset
                .into_iter()
                .map(|s| Hyperedge::auto(s.iter().cloned()).expect("non-empty"))
                .collect();
            out.push(Hypergraph::new(edges).expect("valid"));
        }
    }
    out
}

/// Checks, over the full enumeration, that all routes to each
/// acyclicity notion agree, that the gamma => beta => alpha hierarchy
/// holds, and that beta/gamma acyclicity are hereditary under taking
/// hyperedge subsets.
pub fn verify_structural_equivalences(max_nodes: usize, max_edges: usize) -> VerificationReport {
    let mut report = VerificationReport::new("structural", 0);
    let (mut n_alpha, mut n_beta, mut n_gamma) = (0u64, 0u64, 0u64);
    for h in enumerate_hypergraphs(max_nodes, max_edges) {
        report.trials += 1;
        let label = format!("[{h}]");

        let alpha = h.is_alpha_acyclic();
        let conformal_chordal = h.is_conformal() && h.is_chordal();
        let rip = h.has_running_intersection().is_some();
        let definitional = h.is_alpha_acyclic_definitional();
        if !(alpha == conformal_chordal && alpha == rip && alpha == definitional) {
            report.fail(
                &label,
                format!(
                    "alpha routes disagree: gyo={alpha} conformal+chordal={conformal_chordal} rip={rip} definitional={definitional}"
                ),
            );
        }

        let beta = h.is_beta_acyclic();
        let beta_brute = h.is_beta_acyclic_bruteforce();
        if beta != beta_brute {
            report.fail(
                &label,
                format!("beta routes disagree: weak-cycle={beta} all-subsets={beta_brute}"),
            );
        }

        let gamma = h.is_gamma_acyclic();
        let gamma_bb = h.is_gamma_acyclic_brault_baron();
        if gamma != gamma_bb {
            report.fail(
                &label,
                format!("gamma routes disagree: weak-cycle={gamma} brault-baron={gamma_bb}"),
            );
        }

        if (gamma && !beta) || (beta && !alpha) {
            report.fail(
                &label,
                format!("hierarchy violated: gamma={gamma} beta={beta} alpha={alpha}"),
            );
        }

        // hereditarity of beta and gamma under hyperedge subsets
        if beta || gamma {
            for subset in h.distinct_edge_sets().iter().powerset() {
                let edges = subset
                    .into_iter()
                    .map(|s| Hyperedge::auto(s.iter().cloned()).expect("non-empty"))
                    .collect();
                let sub = Hypergraph::new(edges).expect("valid");
                if beta && !sub.is_beta_acyclic() {
                    report.fail(&label, format!("beta not hereditary at [{sub}]"));
                }
                if gamma && !sub.is_gamma_acyclic() {
                    report.fail(&label, format!("gamma not hereditary at [{sub}]"));
                }
            }
        }

        n_alpha += alpha as u64;
        n_beta += beta as u64;
        n_gamma += gamma as u64;
    }
    report.note(format!(
        "classes: alpha-acyclic={n_alpha} beta-acyclic={n_beta} gamma-acyclic={n_gamma}"
    ));
    report
}

/// Sees `h` as the triangle schema if it is one, returning the edge
/// roles needed to inject the standard counterexample.
fn detect_triangle(h: &Hypergraph) -> Option<[String; 3]> {
    let sets = h.distinct_edge_sets();
    if sets.len() != 3 || h.edges().len() != 3 || sets.iter().any(|s| s.len() != 2) {
        return None;
    }
    let inter = |i: usize, j: usize| -> Option<String> {
        let mut it = sets[i].intersection(&sets[j]);
        let node = it.next()?.clone();
        it.next().is_none().then_some(node)
    };
    let b = inter(0, 1)?;
    let c = inter(1, 2)?;
    let a = inter(0, 2)?;
    let distinct: BTreeSet<&String> = [&a, &b, &c].into();
    (distinct.len() == 3).then(|| [a, b, c])
}

/// Sees `h` as the 3-path schema if it is one, returning its four
/// node names in chain order.
fn detect_chain3(h: &Hypergraph) -> Option<[String; 4]> {
    let sets = h.distinct_edge_sets();
    if sets.len() != 3 || h.edges().len() != 3 || sets.iter().any(|s| s.len() != 2) {
        return None;
    }
    // find the middle edge: it intersects both others
    for mid in 0..3 {
        let (x, y) = match mid {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        if !sets[mid].is_disjoint(&sets[x])
            && !sets[mid].is_disjoint(&sets[y])
            && sets[x].is_disjoint(&sets[y])
        {
            let m1 = sets[mid].intersection(&sets[x]).next()?.clone();
            let m2 = sets[mid].intersection(&sets[y]).next()?.clone();
            if m1 == m2 {
                return None;
            }
            let a1 = sets[x].iter().find(|n| **n != m1)?.clone();
            let a4 = sets[y].iter().find(|n| **n != m2)?.clone();
            return Some([a1, m1, m2, a4]);
        }
    }
    None
}

/// A relation collection for `h` in edge order, given relations tagged
/// by their attribute sets.
fn arrange_by_edges(h: &Hypergraph, rs: Vec<KRelation>) -> Option<Vec<KRelation>> {
    h.edges()
        .iter()
        .map(|e| rs.iter().find(|r| &r.names() == e.nodes()).cloned())
        .collect()
}

fn sampled_collections(
    h: &Hypergraph,
    spec: &MonoidSpec,
    trials: u64,
    seed: u64,
) -> Result<Vec<(String, Vec<KRelation>)>> {
    let mut out = Vec::new();
    for t in 0..trials {
        let label = format!("trial-{t}");
        // alternate guaranteed-consistent marginal collections with
        // rejection-sampled ones
        if t % 2 == 0 {
            let rs = sample_globally_consistent(h, spec, seed ^ t, 4)?;
            out.push((label, rs));
        } else if let Some(rs) = sample_pairwise_consistent(h, spec, seed ^ t, 20)? {
            out.push((label, rs));
        }
    }
    Ok(out)
}

/// Local-to-global consistency suite: samples pairwise consistent
/// collections over `h` (plus the forced counterexamples that apply)
/// and records every one that is not globally consistent.
pub fn verify_local_to_global(
    h: &Hypergraph,
    spec: &MonoidSpec,
    trials: u64,
    seed: u64,
) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("local-global", seed);
    report.note(format!("schema: [{h}]"));
    report.note(format!("monoid: {}", spec.name()));

    let mut collections: Vec<(String, Vec<KRelation>)> = Vec::new();
    if *spec == MonoidSpec::boolean() && detect_triangle(h).is_some() {
        let (_, rs) = triangle_counterexample();
        if let Some(arranged) = arrange_by_edges(h, rs) {
            collections.push(("forced-triangle".into(), arranged));
        }
    }
    let nsg35 = MonoidSpec::numerical_semigroup(&[3, 5]).expect("valid");
    if *spec == nsg35 {
        if let Some(names) = detect_chain3(h) {
            let rs = nsg_p3_relations_with_names(spec, &names)?;
            if let Some(arranged) = arrange_by_edges(h, rs) {
                collections.push(("forced-nsg-p3".into(), arranged));
            }
        }
    }
    collections.extend(sampled_collections(h, spec, trials, seed)?);

    for (label, rs) in collections {
        report.trials += 1;
        // only pairwise consistent collections witness the property
        match pairwise_consistent(&rs, &mut Budget::default())? {
            crate::relation::PairwiseOutcome::Consistent => {}
            crate::relation::PairwiseOutcome::Inconsistent(_, _) => continue,
            crate::relation::PairwiseOutcome::Undecided(_, _) => {
                report.undecided += 1;
                continue;
            }
        }
        match globally_consistent(&rs, &mut Budget::new(5_000_000))? {
            Consistency::Consistent(_) => {}
            Consistency::Inconsistent => {
                report.fail(&label, render_collection(&rs));
            }
            Consistency::Undecided => report.undecided += 1,
        }
    }
    Ok(report)
}

fn witness_functions(spec: &MonoidSpec) -> Result<Vec<WitnessFn>> {
    let mut ws = Vec::new();
    if spec.has_closed_form_transport() {
        ws.push(generic_witness(spec)?);
        if matches!(spec.kind(), MonoidKind::Boolean) {
            ws.push(standard_join());
        }
    } else {
        ws.push(search_witness(spec, 2_000_000));
    }
    Ok(ws)
}

fn adversary_weight(spec: &MonoidSpec) -> Value {
    spec.sample_pool()
        .into_iter()
        .find(|v| !spec.is_zero(v))
        .expect("pools contain a non-neutral element")
}

/// Monotonicity suite: every enumerated connected sequential
/// expression over `h` is checked against every sampled pairwise
/// consistent collection under each applicable witness function, plus
/// the forced adversarial instances. Failures are monotonicity
/// violations.
pub fn verify_gamma_monotonicity(
    h: &Hypergraph,
    spec: &MonoidSpec,
    trials: u64,
    max_len: usize,
    seed: u64,
) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("gamma-monotone", seed);
    report.note(format!("schema: [{h}]"));
    report.note(format!("monoid: {}", spec.name()));
    let exprs = enumerate_connected_sequential(h, max_len);
    report.note(format!("expressions: {}", exprs.len()));
    let ws = witness_functions(spec)?;
    report.note(format!(
        "witness functions: {}",
        ws.iter().map(WitnessFn::name).collect::<Vec<_>>().join(", ")
    ));

    let mut check = |report: &mut VerificationReport,
                     label: &str,
                     expr: &JoinExpr,
                     w: &WitnessFn,
                     rs: &[KRelation]|
     -> Result<()> {
        report.trials += 1;
        match is_monotone_wrt(expr, h, w, rs, &mut Budget::new(2_000_000))? {
            MonotoneVerdict::Monotone => {}
            MonotoneVerdict::NotMonotone { node } => {
                report.fail(
                    label,
                    format!(
                        "{} not monotone under {} at {node}: {}",
                        expr.format(h),
                        w.name(),
                        render_collection(rs)
                    ),
                );
            }
            MonotoneVerdict::Undecided { .. } => report.undecided += 1,
        }
        Ok(())
    };

    // forced adversarial instances on the H* trace pattern
    if let Some((expr, arrange)) = hstar_forced(h) {
        for w in &ws {
            let adv = hstar_adversarial(w, spec, &adversary_weight(spec))?;
            let rs = arrange(adv.r1.clone(), adv.r2.clone(), adv.r3.clone());
            check(&mut report, &format!("forced-hstar-{}", w.name()), &expr, w, &rs)?;
        }
    }
    // forced nsg(3,5) chain instance
    let nsg35 = MonoidSpec::numerical_semigroup(&[3, 5]).expect("valid");
    if *spec == nsg35 {
        if let Some(names) = detect_chain3(h) {
            let rs = nsg_p3_relations_with_names(spec, &names)?;
            if let Some(arranged) = arrange_by_edges(h, rs) {
                let order: Vec<usize> = sort_chain_indices(h, &arranged);
                let expr = JoinExpr::sequential(&order).expect("three leaves");
                if expr.is_connected(h)? {
                    for w in &ws {
                        check(&mut report, &format!("forced-nsg-{}", w.name()), &expr, w, &arranged)?;
                    }
                }
            }
        }
    }

    for (label, rs) in sampled_collections(h, spec, trials, seed)? {
        if !pairwise_consistent(&rs, &mut Budget::default())?.is_consistent() {
            continue;
        }
        for expr in &exprs {
            for w in &ws {
                check(&mut report, &label, expr, w, &rs)?;
            }
        }
    }
    Ok(report)
}

/// The expression ((Y1 * Y2) * Y3) over an H*-shaped hypergraph, plus
/// a closure arranging the adversarial relations into edge order.
#[allow(clippy::type_complexity)]
fn hstar_forced(
    h: &Hypergraph,
) -> Option<(JoinExpr, Box<dyn Fn(KRelation, KRelation, KRelation) -> Vec<KRelation>>)> {
    let sets = h.distinct_edge_sets();
    if sets.len() != 3 || h.edges().len() != 3 {
        return None;
    }
    let sizes: Vec<usize> = sets.iter().map(BTreeSet::len).collect();
    let y3 = sizes.iter().position(|&s| s == 3)?;
    let rest: Vec<usize> = (0..3).filter(|&i| i != y3).collect();
    let (y1, y2) = (rest[0], rest[1]);
    if sizes[y1] != 2 || sizes[y2] != 2 {
        return None;
    }
    // y1, y2 must be {A,B}, {A,C} inside y3 = {A,B,C}
    if !sets[y1].is_subset(&sets[y3]) || !sets[y2].is_subset(&sets[y3]) {
        return None;
    }
    let shared: BTreeSet<String> = sets[y1].intersection(&sets[y2]).cloned().collect();
    if shared.len() != 1 {
        return None;
    }
    // GammaRoles::hstar uses the fixed names A, B, C
    let want: [BTreeSet<String>; 3] = [
        ["A", "B"].map(String::from).into(),
        ["A", "C"].map(String::from).into(),
        ["A", "B", "C"].map(String::from).into(),
    ];
    if sets[y1] != want[0] || sets[y2] != want[1] || sets[y3] != want[2] {
        return None;
    }
    let expr = JoinExpr::join(
        JoinExpr::join(JoinExpr::Leaf(y1), JoinExpr::Leaf(y2)),
        JoinExpr::Leaf(y3),
    );
    let arrange = move |r1: KRelation, r2: KRelation, r3: KRelation| {
        let mut out = vec![r1.clone(); 3];
        out[y1] = r1;
        out[y2] = r2;
        out[y3] = r3;
        out
    };
    Some((expr, Box::new(arrange)))
}

/// Chain order of a 3-path's edges: end, middle, end.
fn sort_chain_indices(h: &Hypergraph, rs: &[KRelation]) -> Vec<usize> {
    let mid = (0..rs.len())
        .find(|&i| {
            (0..rs.len())
                .filter(|&j| j != i)
                .all(|j| !h.edge(i).nodes().is_disjoint(h.edge(j).nodes()))
        })
        .unwrap_or(1);
    let rest: Vec<usize> = (0..rs.len()).filter(|&i| i != mid).collect();
    vec![rest[0], mid, rest[1]]
}

/// Cross-check of the three observable faces of the transportation
/// property on the 3-path schema.
#[derive(Debug)]
pub struct TpCrossCheck {
    pub monoid: String,
    pub probe_found: bool,
    pub probe_instance: Option<String>,
    pub probe_examined: u64,
    pub probe_undecided: u64,
    pub local_global: VerificationReport,
    pub gamma_monotone: VerificationReport,
}

impl TpCrossCheck {
    /// True when the probe, the local-to-global suite, and the
    /// monotonicity suite all point the same way.
    pub fn directions_agree(&self) -> bool {
        self.probe_found == self.local_global.found_failure()
            && self.probe_found == self.gamma_monotone.found_failure()
    }

    pub fn failure_found(&self) -> bool {
        self.probe_found
    }
}

impl fmt::Display for TpCrossCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "suite: tp")?;
        writeln!(f, "monoid: {}", self.monoid)?;
        writeln!(
            f,
            "transport probe: {} (examined {}, undecided {})",
            if self.probe_found {
                "counterexample found"
            } else {
                "no counterexample"
            },
            self.probe_examined,
            self.probe_undecided
        )?;
        if let Some(inst) = &self.probe_instance {
            writeln!(f, "probe instance: {inst}")?;
        }
        writeln!(
            f,
            "local-to-global on P3: {}",
            if self.local_global.found_failure() {
                "failure found"
            } else {
                "no failure"
            }
        )?;
        writeln!(
            f,
            "gamma-monotonicity on P3: {}",
            if self.gamma_monotone.found_failure() {
                "failure found"
            } else {
                "no failure"
            }
        )?;
        writeln!(
            f,
            "directions agree: {}",
            if self.directions_agree() { "yes" } else { "no" }
        )?;
        write!(f, "---\n{}---\n{}", self.local_global, self.gamma_monotone)
    }
}

fn probe_pool(spec: &MonoidSpec) -> Vec<Value> {
    match spec.kind() {
        MonoidKind::Bag => (0..=3).map(Value::Nat).collect(),
        MonoidKind::NumericalSemigroup(_) => spec
            .sample_pool()
            .into_iter()
            .filter(|v| matches!(v, Value::Nat(n) if *n <= 9))
            .collect(),
        _ => spec.sample_pool(),
    }
}

/// Runs the transport probe, the local-to-global suite and the
/// monotonicity suite for the 3-path schema, and reports whether the
/// three observations point the same way.
pub fn verify_tp_characterization(
    spec: &MonoidSpec,
    trials: u64,
    seed: u64,
) -> Result<TpCrossCheck> {
    let p3 = Hypergraph::of(&[&["A1", "A2"], &["A2", "A3"], &["A3", "A4"]]);
    let probe = probe_transportation_property(
        spec,
        3,
        3,
        &probe_pool(spec),
        &mut Budget::new(20_000_000),
    )?;
    let local_global = verify_local_to_global(&p3, spec, trials, seed)?;
    let gamma_monotone = verify_gamma_monotonicity(&p3, spec, trials, 4, seed)?;
    Ok(TpCrossCheck {
        monoid: spec.name().into(),
        probe_found: probe.counterexample.is_some(),
        probe_instance: probe.counterexample.map(|i| i.describe(spec)),
        probe_examined: probe.examined,
        probe_undecided: probe.undecided,
        local_global,
        gamma_monotone,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_counts() {
        // 1 + 7 + 21 + 35 subsets of the 7 non-empty subsets of 3 nodes
        assert_eq!(enumerate_hypergraphs(3, 3).len(), 64);
        assert_eq!(enumerate_hypergraphs(2, 2).len(), 1 + 3 + 3);
    }

    #[test]
    fn structural_suite_is_clean_at_small_caps() {
        let report = verify_structural_equivalences(3, 3);
        assert_eq!(report.failures, vec![], "{report}");
        assert_eq!(report.trials, 64);
    }

    #[test]
    fn detectors() {
        let triangle = Hypergraph::of(&[&["A", "B"], &["B", "C"], &["C", "A"]]);
        assert_eq!(
            detect_triangle(&triangle),
            Some(["A".into(), "B".into(), "C".into()])
        );
        let p3 = Hypergraph::of(&[&["A1", "A2"], &["A2", "A3"], &["A3", "A4"]]);
        assert_eq!(detect_triangle(&p3), None);
        assert_eq!(
            detect_chain3(&p3),
            Some(["A1".into(), "A2".into(), "A3".into(), "A4".into()])
        );
        assert_eq!(detect_chain3(&triangle), None);
    }

    #[test]
    fn local_to_global_finds_triangle_failure() {
        let (h, _) = triangle_counterexample();
        let spec = MonoidSpec::boolean();
        let report = verify_local_to_global(&h, &spec, 10, 1).unwrap();
        assert!(report.found_failure(), "{report}");
        assert!(report
            .failures
            .iter()
            .any(|f| f.label == "forced-triangle"));
    }

    #[test]
    fn local_to_global_clean_on_p3_boolean() {
        let p3 = Hypergraph::of(&[&["A1", "A2"], &["A2", "A3"], &["A3", "A4"]]);
        let report = verify_local_to_global(&p3, &MonoidSpec::boolean(), 20, 2).unwrap();
        assert!(!report.found_failure(), "{report}");
        assert_eq!(report.undecided, 0);
    }

    #[test]
    fn gamma_monotone_finds_hstar_failure() {
        let hstar = Hypergraph::of(&[&["A", "B", "C"], &["A", "B"], &["A", "C"]]);
        let report =
            verify_gamma_monotonicity(&hstar, &MonoidSpec::boolean(), 4, 3, 3).unwrap();
        assert!(report.found_failure(), "{report}");
        assert!(report.failures.iter().any(|f| f.label.starts_with("forced-hstar")));
    }

    #[test]
    fn gamma_monotone_clean_on_p3_bag() {
        let p3 = Hypergraph::of(&[&["A1", "A2"], &["A2", "A3"], &["A3", "A4"]]);
        let report = verify_gamma_monotonicity(&p3, &MonoidSpec::bag(), 10, 4, 4).unwrap();
        assert!(!report.found_failure(), "{report}");
    }
}
