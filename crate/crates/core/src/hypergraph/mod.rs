//! Hypergraphs (schemas) and structural acyclicity.
//!
//! A schema is identified with the hypergraph whose nodes are its
//! attributes and whose hyperedges are its attribute sets. Hyperedges
//! are kept as a list so that duplicate attribute sets in a schema stay
//! addressable by index; structural notions treat the edge collection
//! as a set.
//!
//! Three acyclicity notions live here, strictest last:
//!
//! * alpha — GYO reduction succeeds; equivalently conformal + chordal;
//!   equivalently the running intersection property holds;
//! * beta — every subset of the hyperedges is alpha-acyclic;
//!   equivalently there is no weak beta-cycle;
//! * gamma — there is no weak gamma-cycle; equivalently beta-acyclic
//!   without the {ABC, AB, AC} pattern in any 3-node induced
//!   hypergraph.
//!
//! Each notion ships with at least two independent routes so the
//! equivalences can be checked by enumeration at desk scale.

mod acyclicity;
mod cycles;

pub use acyclicity::{GyoOutcome, GyoStep};
pub use cycles::{WeakCycle, WeakCycleKind};

use std::collections::BTreeSet;
use std::fmt;

use crate::error::Error;
use crate::Result;

/// A labeled non-empty set of nodes.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Hyperedge {
    label: String,
    nodes: BTreeSet<String>,
}

impl Hyperedge {
    pub fn new<S: Into<String>>(
        label: impl Into<String>,
        nodes: impl IntoIterator<Item = S>,
    ) -> Result<Self> {
        let nodes: BTreeSet<String> = nodes.into_iter().map(Into::into).collect();
        if nodes.is_empty() {
            return Err(Error::Hypergraph("hyperedges must be non-empty".into()));
        }
        Ok(Hyperedge {
            label: label.into(),
            nodes,
        })
    }

    /// An edge labeled by its braced node set, e.g. `{A,B}`.
    pub fn auto<S: Into<String>>(nodes: impl IntoIterator<Item = S>) -> Result<Self> {
        let nodes: BTreeSet<String> = nodes.into_iter().map(Into::into).collect();
        let label = braced(&nodes);
        Self::new(label, nodes)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn nodes(&self) -> &BTreeSet<String> {
        &self.nodes
    }
}

pub(crate) fn braced(nodes: &BTreeSet<String>) -> String {
    format!("{{{}}}", nodes.iter().cloned().collect::<Vec<_>>().join(","))
}

/// A hypergraph: node set plus an ordered list of hyperedges.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Hypergraph {
    nodes: BTreeSet<String>,
    edges: Vec<Hyperedge>,
}

impl fmt::Display for Hypergraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sets: Vec<String> = self.edges.iter().map(|e| braced(&e.nodes)).collect();
        write!(f, "{}", sets.join(", "))
    }
}

impl Hypergraph {
    /// Builds a hypergraph whose node set is the union of the edges.
    pub fn new(edges: Vec<Hyperedge>) -> Result<Self> {
        let nodes = edges
            .iter()
            .flat_map(|e| e.nodes.iter().cloned())
            .collect();
        Ok(Hypergraph { nodes, edges })
    }

    /// Like [`Hypergraph::new`] but with explicitly declared nodes,
    /// which must cover every edge. Declared-but-unused nodes are
    /// permitted (isolated attributes of a schema).
    pub fn with_declared_nodes<S: Into<String>>(
        edges: Vec<Hyperedge>,
        nodes: impl IntoIterator<Item = S>,
    ) -> Result<Self> {
        let nodes: BTreeSet<String> = nodes.into_iter().map(Into::into).collect();
        for e in &edges {
            if let Some(n) = e.nodes.difference(&nodes).next() {
                return Err(Error::Hypergraph(format!(
                    "edge {} uses undeclared node {n}",
                    e.label
                )));
            }
        }
        Ok(Hypergraph { nodes, edges })
    }

    /// Convenience constructor from node-name slices with automatic
    /// labels. Panics on an empty edge; intended for fixed schemas in
    /// tests and built-ins.
    pub fn of(edge_sets: &[&[&str]]) -> Self {
        let edges = edge_sets
            .iter()
            .map(|set| Hyperedge::auto(set.iter().copied()).expect("non-empty edge"))
            .collect();
        Hypergraph::new(edges).expect("valid edges")
    }

    pub fn nodes(&self) -> &BTreeSet<String> {
        &self.nodes
    }

    /// Nodes that occur in at least one hyperedge.
    pub fn occupied_nodes(&self) -> BTreeSet<String> {
        self.edges
            .iter()
            .flat_map(|e| e.nodes.iter().cloned())
            .collect()
    }

    pub fn edges(&self) -> &[Hyperedge] {
        &self.edges
    }

    pub fn edge(&self, i: usize) -> &Hyperedge {
        &self.edges[i]
    }

    pub fn edge_index(&self, label: &str) -> Option<usize> {
        self.edges.iter().position(|e| e.label == label)
    }

    /// Distinct edge node-sets in first-occurrence order.
    pub fn distinct_edge_sets(&self) -> Vec<BTreeSet<String>> {
        let mut seen = Vec::new();
        for e in &self.edges {
            if !seen.contains(&e.nodes) {
                seen.push(e.nodes.clone());
            }
        }
        seen
    }

    /// Removes hyperedges properly contained in another (and collapses
    /// duplicates); idempotent.
    pub fn reduction(&self) -> Hypergraph {
        let sets = self.distinct_edge_sets();
        let kept: Vec<BTreeSet<String>> = sets
            .iter()
            .filter(|s| !sets.iter().any(|t| *s != t && s.is_subset(t)))
            .cloned()
            .collect();
        Hypergraph {
            nodes: self.nodes.clone(),
            edges: kept
                .into_iter()
                .map(|nodes| Hyperedge {
                    label: braced(&nodes),
                    nodes,
                })
                .collect(),
        }
    }

    /// The reduction of the edge intersections with `u`, over node set
    /// `u`; empty intersections are dropped.
    pub fn restriction(&self, u: &BTreeSet<String>) -> Result<Hypergraph> {
        self.check_subset(u)?;
        let mut sets = Vec::new();
        for e in &self.edges {
            let inter: BTreeSet<String> = e.nodes.intersection(u).cloned().collect();
            if !inter.is_empty() && !sets.contains(&inter) {
                sets.push(inter);
            }
        }
        let kept: Vec<BTreeSet<String>> = sets
            .iter()
            .filter(|s| !sets.iter().any(|t| *s != t && s.is_subset(t)))
            .cloned()
            .collect();
        Ok(Hypergraph {
            nodes: u.clone(),
            edges: kept
                .into_iter()
                .map(|nodes| Hyperedge {
                    label: braced(&nodes),
                    nodes,
                })
                .collect(),
        })
    }

    /// The induced hypergraph on `s`: edge intersections with `s` minus
    /// the empty set, *without* reduction (containments survive).
    pub fn induced(&self, s: &BTreeSet<String>) -> Result<Hypergraph> {
        self.check_subset(s)?;
        let mut sets: Vec<BTreeSet<String>> = Vec::new();
        for e in &self.edges {
            let inter: BTreeSet<String> = e.nodes.intersection(s).cloned().collect();
            if !inter.is_empty() && !sets.contains(&inter) {
                sets.push(inter);
            }
        }
        Ok(Hypergraph {
            nodes: s.clone(),
            edges: sets
                .into_iter()
                .map(|nodes| Hyperedge {
                    label: braced(&nodes),
                    nodes,
                })
                .collect(),
        })
    }

    fn check_subset(&self, u: &BTreeSet<String>) -> Result<()> {
        if let Some(n) = u.difference(&self.nodes).next() {
            return Err(Error::Hypergraph(format!("{n} is not a node")));
        }
        Ok(())
    }

    /// Gaifman graph: the set of unordered node pairs co-occurring in
    /// some hyperedge, returned with each pair in sorted order.
    pub fn gaifman(&self) -> BTreeSet<(String, String)> {
        let mut pairs = BTreeSet::new();
        for e in &self.edges {
            let ns: Vec<&String> = e.nodes.iter().collect();
            for i in 0..ns.len() {
                for j in (i + 1)..ns.len() {
                    pairs.insert((ns[i].clone(), ns[j].clone()));
                }
            }
        }
        pairs
    }

    /// Partition of edge indices into maximal connected groups, where
    /// two edges are adjacent when they share a node.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let n = self.edges.len();
        let mut comp = vec![usize::MAX; n];
        let mut count = 0;
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            let mut stack = vec![start];
            comp[start] = count;
            while let Some(i) = stack.pop() {
                for j in 0..n {
                    if comp[j] == usize::MAX
                        && !self.edges[i].nodes.is_disjoint(&self.edges[j].nodes)
                    {
                        comp[j] = count;
                        stack.push(j);
                    }
                }
            }
            count += 1;
        }
        let mut groups = vec![Vec::new(); count];
        for (i, c) in comp.into_iter().enumerate() {
            groups[c].push(i);
        }
        groups
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components().len() <= 1
    }

    /// Looks for an articulation set: an intersection `Y` of two
    /// distinct hyperedges whose removal increases the number of
    /// connected components. Meaningful on reduced hypergraphs.
    pub fn find_articulation_set(&self) -> Option<BTreeSet<String>> {
        let base = self.connected_components().len();
        let sets = self.distinct_edge_sets();
        for i in 0..sets.len() {
            for j in (i + 1)..sets.len() {
                let y: BTreeSet<String> = sets[i].intersection(&sets[j]).cloned().collect();
                let rest: BTreeSet<String> = self.nodes.difference(&y).cloned().collect();
                let restricted = self.restriction(&rest).expect("subset of nodes");
                if restricted.connected_components().len() > base {
                    return Some(y);
                }
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn set(names: &[&str]) -> BTreeSet<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn reduction_examples() {
        let h = Hypergraph::of(&[&["A", "B", "C"], &["A", "B"], &["B", "C"], &["C", "A"]]);
        let r = h.reduction();
        assert_eq!(r.edges().len(), 1);
        assert_eq!(r.edge(0).nodes(), &set(&["A", "B", "C"]));
        // idempotent
        assert_eq!(r.reduction(), r);

        let hstar = Hypergraph::of(&[&["A", "B", "C"], &["A", "B"], &["A", "C"]]);
        assert_eq!(hstar.reduction().edges().len(), 1);
    }

    #[test]
    fn restriction_examples() {
        let triangle = Hypergraph::of(&[&["A", "B"], &["B", "C"], &["C", "A"]]);
        let r = triangle.restriction(&set(&["A", "B"])).unwrap();
        assert_eq!(r.edges().len(), 1);
        assert_eq!(r.edge(0).nodes(), &set(&["A", "B"]));

        // restriction to the full node set is the reduction
        let h = Hypergraph::of(&[&["A", "B", "C"], &["A", "B"]]);
        let full: BTreeSet<String> = h.nodes().clone();
        assert_eq!(h.restriction(&full).unwrap(), h.reduction());

        // restriction drops edges that intersect U emptily
        let two = Hypergraph::of(&[&["A", "B"], &["C", "D"]]);
        let r = two.restriction(&set(&["A", "B"])).unwrap();
        assert_eq!(r.edges().len(), 1);

        assert!(triangle.restriction(&set(&["Z"])).is_err());
    }

    #[test]
    fn induced_keeps_containments() {
        let h = Hypergraph::of(&[&["A", "B", "D"], &["A", "B", "E"], &["A", "C", "F"]]);
        let ind = h.induced(&set(&["A", "B", "C"])).unwrap();
        let sets: Vec<_> = ind.edges().iter().map(|e| e.nodes().clone()).collect();
        assert_eq!(sets, vec![set(&["A", "B"]), set(&["A", "C"])]);

        let h = Hypergraph::of(&[&["A", "B", "C"], &["A", "B", "D"], &["A", "C", "E"]]);
        let ind = h.induced(&set(&["A", "B", "C"])).unwrap();
        let sets: Vec<_> = ind.edges().iter().map(|e| e.nodes().clone()).collect();
        assert_eq!(
            sets,
            vec![set(&["A", "B", "C"]), set(&["A", "B"]), set(&["A", "C"])]
        );
    }

    #[test]
    fn gaifman_and_components() {
        let triangle = Hypergraph::of(&[&["A", "B"], &["B", "C"], &["C", "A"]]);
        let g = triangle.gaifman();
        assert_eq!(g.len(), 3); // complete graph on {A,B,C}

        let p3 = Hypergraph::of(&[&["A1", "A2"], &["A2", "A3"], &["A3", "A4"]]);
        assert!(p3.is_connected());

        let two = Hypergraph::of(&[&["A", "B"], &["C", "D"]]);
        assert_eq!(two.connected_components().len(), 2);
    }

    #[test]
    fn articulation_examples() {
        let p2 = Hypergraph::of(&[&["A1", "A2"], &["A2", "A3"]]);
        assert_eq!(p2.find_articulation_set(), Some(set(&["A2"])));

        let triangle = Hypergraph::of(&[&["A", "B"], &["B", "C"], &["C", "A"]]);
        assert_eq!(triangle.find_articulation_set(), None);

        let single = Hypergraph::of(&[&["A", "B"]]);
        assert_eq!(single.find_articulation_set(), None);
    }
}
