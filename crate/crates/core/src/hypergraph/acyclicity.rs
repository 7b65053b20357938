//! Alpha-acyclicity: GYO reduction and the equivalent structural
//! characterizations (definitional, conformal + chordal, running
//! intersection).

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;

use super::{braced, Hypergraph};

/// One step of the GYO reduction.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum GyoStep {
    /// A node occurring in exactly one hyperedge was deleted from it.
    Node { node: String, edge: usize },
    /// An edge contained in another was deleted.
    Absorb { edge: usize, into: usize },
    /// The last remaining edge emptied out and was deleted.
    Final { edge: usize },
}

/// Result of running GYO to fixpoint.
#[derive(Clone, Debug)]
pub struct GyoOutcome {
    pub acyclic: bool,
    pub steps: Vec<GyoStep>,
    /// Original edge indices in the order they were eliminated; covers
    /// every edge exactly once iff the hypergraph is acyclic.
    pub elimination: Vec<usize>,
    /// Remaining (index, node set) pairs when the reduction got stuck.
    pub stuck: Vec<(usize, BTreeSet<String>)>,
}

impl GyoOutcome {
    pub fn render_stuck(&self) -> String {
        self.stuck
            .iter()
            .map(|(_, s)| braced(s))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

impl Hypergraph {
    /// GYO reduction: repeatedly delete nodes occurring in exactly one
    /// hyperedge and hyperedges contained in another. Acyclic iff
    /// everything is eliminated.
    pub fn gyo(&self) -> GyoOutcome {
        let mut live: Vec<(usize, BTreeSet<String>)> = self
            .edges()
            .iter()
            .enumerate()
            .map(|(i, e)| (i, e.nodes().clone()))
            .collect();
        let mut steps = Vec::new();
        let mut elimination = Vec::new();

        loop {
            // delete nodes occurring in exactly one edge
            let mut changed = false;
            loop {
                let mut occurrences: BTreeMap<&String, Vec<usize>> = BTreeMap::new();
                for (pos, (_, nodes)) in live.iter().enumerate() {
                    for n in nodes {
                        occurrences.entry(n).or_default().push(pos);
                    }
                }
                let lonely: Option<(String, usize)> = occurrences
                    .into_iter()
                    .find(|(_, ps)| ps.len() == 1)
                    .map(|(n, ps)| (n.clone(), ps[0]));
                match lonely {
                    Some((node, pos)) => {
                        live[pos].1.remove(&node);
                        steps.push(GyoStep::Node {
                            node,
                            edge: live[pos].0,
                        });
                        changed = true;
                    }
                    None => break,
                }
            }

            // delete one edge contained in another (dedups equal edges)
            let mut absorbed = None;
            'outer: for i in 0..live.len() {
                for j in 0..live.len() {
                    if i != j && live[i].1.is_subset(&live[j].1) {
                        absorbed = Some((i, j));
                        break 'outer;
                    }
                }
            }
            if let Some((i, j)) = absorbed {
                steps.push(GyoStep::Absorb {
                    edge: live[i].0,
                    into: live[j].0,
                });
                elimination.push(live[i].0);
                live.remove(i);
                changed = true;
            }

            // a single edge with all nodes removed vanishes
            if live.len() == 1 && live[0].1.is_empty() {
                steps.push(GyoStep::Final { edge: live[0].0 });
                elimination.push(live[0].0);
                live.clear();
                changed = true;
            }

            if !changed {
                break;
            }
        }

        GyoOutcome {
            acyclic: live.is_empty(),
            steps,
            elimination,
            stuck: live,
        }
    }

    pub fn is_alpha_acyclic(&self) -> bool {
        self.gyo().acyclic
    }

    /// The definitional condition, checked by brute force over all
    /// subsets of the occupied nodes: every connected restriction with
    /// at least two hyperedges has an articulation set.
    pub fn is_alpha_acyclic_definitional(&self) -> bool {
        let occupied: Vec<String> = self.occupied_nodes().into_iter().collect();
        for u in occupied.iter().powerset() {
            let u: BTreeSet<String> = u.into_iter().cloned().collect();
            let restricted = self.restriction(&u).expect("subset of nodes");
            if restricted.edges().len() >= 2
                && restricted.is_connected()
                && restricted.find_articulation_set().is_none()
            {
                return false;
            }
        }
        true
    }

    /// Every clique of the Gaifman graph lies inside some hyperedge.
    /// Pairs and singletons are automatic, so only node subsets of size
    /// three and up are examined.
    pub fn is_conformal(&self) -> bool {
        let gaifman = self.gaifman();
        let adjacent = |a: &String, b: &String| {
            let key = if a < b {
                (a.clone(), b.clone())
            } else {
                (b.clone(), a.clone())
            };
            gaifman.contains(&key)
        };
        let occupied: Vec<String> = self.occupied_nodes().into_iter().collect();
        for clique in occupied.iter().powerset().filter(|s| s.len() >= 3) {
            let is_clique = clique
                .iter()
                .tuple_combinations()
                .all(|(a, b)| adjacent(a, b));
            if !is_clique {
                continue;
            }
            let covered = self
                .edges()
                .iter()
                .any(|e| clique.iter().all(|n| e.nodes().contains(*n)));
            if !covered {
                return false;
            }
        }
        true
    }

    /// Every Gaifman cycle of length at least four has a chord;
    /// equivalently the Gaifman graph admits a perfect elimination
    /// ordering, which the greedy simplicial-vertex elimination finds.
    pub fn is_chordal(&self) -> bool {
        let mut adj: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
        for (a, b) in self.gaifman() {
            adj.entry(a.clone()).or_default().insert(b.clone());
            adj.entry(b).or_default().insert(a);
        }
        let mut remaining: BTreeSet<String> = adj.keys().cloned().collect();
        while !remaining.is_empty() {
            let simplicial = remaining.iter().find(|v| {
                let nbrs: Vec<&String> = adj[*v].iter().filter(|n| remaining.contains(*n)).collect();
                nbrs.iter()
                    .tuple_combinations()
                    .all(|(a, b)| adj[*a].contains(*b))
            });
            match simplicial {
                Some(v) => {
                    let v = v.clone();
                    remaining.remove(&v);
                }
                None => return false,
            }
        }
        true
    }

    /// Searches all orderings of the distinct hyperedges for one where
    /// each edge's intersection with the union of its predecessors is
    /// covered by a single predecessor. Exponential; desk scale only.
    pub fn has_running_intersection(&self) -> Option<Vec<BTreeSet<String>>> {
        let sets = self.distinct_edge_sets();
        if sets.len() <= 1 {
            return Some(sets);
        }
        let k = sets.len();
        for perm in (0..k).permutations(k) {
            if rip_holds(&sets, &perm) {
                return Some(perm.into_iter().map(|i| sets[i].clone()).collect());
            }
        }
        None
    }

    /// A running-intersection ordering of the original edge indices,
    /// derived from the GYO elimination order in reverse. Returns
    /// `None` when the hypergraph is cyclic.
    pub fn join_order(&self) -> Option<Vec<usize>> {
        let outcome = self.gyo();
        if !outcome.acyclic {
            return None;
        }
        let mut order = outcome.elimination;
        order.reverse();
        Some(order)
    }
}

fn rip_holds(sets: &[BTreeSet<String>], perm: &[usize]) -> bool {
    let mut union: BTreeSet<String> = sets[perm[0]].clone();
    for i in 1..perm.len() {
        let here = &sets[perm[i]];
        let inter: BTreeSet<String> = union.intersection(here).cloned().collect();
        if !inter.is_empty() && !perm[..i].iter().any(|&j| inter.is_subset(&sets[j])) {
            return false;
        }
        union.extend(here.iter().cloned());
    }
    true
}

#[cfg(test)]
mod tests {
    use super::super::tests::set;
    use super::*;

    fn triangle() -> Hypergraph {
        Hypergraph::of(&[&["A", "B"], &["B", "C"], &["C", "A"]])
    }

    fn four_cycle() -> Hypergraph {
        Hypergraph::of(&[&["A", "B"], &["B", "C"], &["C", "D"], &["D", "A"]])
    }

    fn bfmy() -> Hypergraph {
        Hypergraph::of(&[
            &["A", "B", "C"],
            &["C", "D", "E"],
            &["E", "F", "A"],
            &["A", "C", "E"],
        ])
    }

    fn path(n: usize) -> Hypergraph {
        let names: Vec<String> = (1..=n + 1).map(|i| format!("A{i}")).collect();
        let edges: Vec<Vec<&str>> = (0..n)
            .map(|i| vec![names[i].as_str(), names[i + 1].as_str()])
            .collect();
        let slices: Vec<&[&str]> = edges.iter().map(Vec::as_slice).collect();
        Hypergraph::of(&slices)
    }

    #[test]
    fn gyo_examples() {
        assert!(!triangle().gyo().acyclic);
        assert!(bfmy().gyo().acyclic);
        for n in 2..=5 {
            assert!(path(n).gyo().acyclic, "P{n}");
        }
    }

    #[test]
    fn gyo_stuck_state_is_reported() {
        let out = triangle().gyo();
        assert_eq!(out.stuck.len(), 3);
        assert!(out.render_stuck().contains("{A,B}"));
    }

    #[test]
    fn definitional_examples() {
        assert!(!four_cycle().is_alpha_acyclic_definitional());
        assert!(!triangle().is_alpha_acyclic_definitional());
        assert!(path(3).is_alpha_acyclic_definitional());
    }

    #[test]
    fn conformal_chordal_examples() {
        assert!(!triangle().is_conformal());
        assert!(triangle().is_chordal());
        assert!(four_cycle().is_conformal());
        assert!(!four_cycle().is_chordal());
    }

    #[test]
    fn running_intersection_example() {
        let ordering = bfmy().has_running_intersection().expect("acyclic");
        assert_eq!(ordering.len(), 4);
        // the found ordering must itself satisfy the property
        let sets = ordering;
        let perm: Vec<usize> = (0..sets.len()).collect();
        assert!(rip_holds(&sets, &perm));
        assert!(four_cycle().has_running_intersection().is_none());
    }

    #[test]
    fn join_order_is_a_rip_ordering() {
        for h in [bfmy(), path(2), path(5)] {
            let order = h.join_order().expect("acyclic");
            assert_eq!(order.len(), h.edges().len());
            let sets: Vec<BTreeSet<String>> =
                order.iter().map(|&i| h.edge(i).nodes().clone()).collect();
            let perm: Vec<usize> = (0..sets.len()).collect();
            assert!(rip_holds(&sets, &perm), "{h}");
        }
        assert!(triangle().join_order().is_none());
    }

    #[test]
    fn duplicate_edges_do_not_confuse_gyo() {
        let h = Hypergraph::of(&[&["A", "B"], &["A", "B"], &["B", "C"]]);
        let out = h.gyo();
        assert!(out.acyclic);
        assert_eq!(out.elimination.len(), 3);
    }

    #[test]
    fn single_and_empty_hypergraphs_are_acyclic() {
        assert!(Hypergraph::of(&[&["A", "B"]]).gyo().acyclic);
        assert!(Hypergraph::new(vec![]).unwrap().gyo().acyclic);
        let _ = set(&[]); // keep helper linked
    }
}
