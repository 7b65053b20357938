//! Counterexample constructions, relation samplers, and verification
//! reports.
//!
//! Every construction here self-verifies: pairwise consistency, global
//! inconsistency, and witness-vs-third-relation inconsistency are
//! re-checked through the transport and marginal machinery rather than
//! assumed from the construction.

mod suites;

pub use suites::{
    enumerate_hypergraphs, verify_gamma_monotonicity, verify_local_to_global,
    verify_structural_equivalences, verify_tp_characterization, TpCrossCheck,
};

use std::collections::BTreeSet;
use std::fmt;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::hypergraph::{Hyperedge, Hypergraph};
use crate::monoid::{Budget, MonoidKind, MonoidSpec, Value};
use crate::relation::{
    consistent, is_witness_of, pairwise_consistent, Attribute, AttributeSet, Consistency,
    KRelation, KTuple, WitnessFn,
};
use crate::Result;

/// One recorded failure of a verification suite, with enough detail to
/// replay the instance.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Failure {
    pub label: String,
    pub detail: String,
}

/// Aggregated outcome of a randomized suite. Reports are deterministic
/// functions of their inputs and seed.
#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub tag: String,
    pub seed: u64,
    pub trials: u64,
    pub failures: Vec<Failure>,
    pub undecided: u64,
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn new(tag: impl Into<String>, seed: u64) -> Self {
        VerificationReport {
            tag: tag.into(),
            seed,
            trials: 0,
            failures: Vec::new(),
            undecided: 0,
            notes: Vec::new(),
        }
    }

    pub fn found_failure(&self) -> bool {
        !self.failures.is_empty()
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    const FAILURE_CAP: usize = 25;

    pub fn fail(&mut self, label: impl Into<String>, detail: impl Into<String>) {
        if self.failures.len() < Self::FAILURE_CAP {
            self.failures.push(Failure {
                label: label.into(),
                detail: detail.into(),
            });
        } else if self.failures.len() == Self::FAILURE_CAP {
            self.failures.push(Failure {
                label: "...".into(),
                detail: "further failures elided".into(),
            });
        }
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "suite: {}", self.tag)?;
        writeln!(f, "seed: {}", self.seed)?;
        writeln!(f, "trials: {}", self.trials)?;
        writeln!(f, "failures: {}", self.failures.len())?;
        writeln!(f, "undecided: {}", self.undecided)?;
        for n in &self.notes {
            writeln!(f, "note: {n}")?;
        }
        for (i, fail) in self.failures.iter().enumerate() {
            writeln!(f, "failure[{i}]: {}: {}", fail.label, fail.detail)?;
        }
        Ok(())
    }
}

pub(crate) fn render_collection(rs: &[KRelation]) -> String {
    rs.iter()
        .enumerate()
        .map(|(i, r)| format!("R{}: {}", i + 1, r))
        .collect::<Vec<_>>()
        .join(" | ")
}

// ---------------------------------------------------------------------------
// Fixed counterexamples

fn attrs_over<S: AsRef<str>>(names: &[S], domain: &[&str]) -> AttributeSet {
    AttributeSet::new(
        names
            .iter()
            .map(|n| Attribute::new(n.as_ref(), domain.iter().copied()).expect("valid domain"))
            .collect(),
    )
    .expect("unique names")
}

/// The pairwise-but-not-globally-consistent standard relations over
/// the triangle schema: R1(A,B) and R3(C,A) are the identity pairs,
/// R2(B,C) the flipped ones, so any candidate witness chases an odd
/// cycle.
pub fn triangle_counterexample() -> (Hypergraph, Vec<KRelation>) {
    let h = Hypergraph::of(&[&["A", "B"], &["B", "C"], &["C", "A"]]);
    let spec = MonoidSpec::boolean();
    let rel = |x: &str, y: &str, rows: &[(&str, &str)]| {
        KRelation::with_rows(
            attrs_over(&[x, y], &["0", "1"]),
            spec.clone(),
            rows.iter()
                .map(|(vx, vy)| (KTuple::of([(x, *vx), (y, *vy)]), Value::Bool(true))),
        )
        .expect("valid rows")
    };
    let rs = vec![
        rel("A", "B", &[("0", "0"), ("1", "1")]),
        rel("B", "C", &[("0", "1"), ("1", "0")]),
        rel("C", "A", &[("0", "0"), ("1", "1")]),
    ];
    (h, rs)
}

/// Relations over the 3-path schema that are pairwise consistent but
/// not globally consistent over nsg(3,5), built so that any global
/// witness would have to solve the infeasible transport with row sums
/// (5,5,5) and column sums (3,3,9) inside the A2=x1, A3=y1 block.
///
/// Every pair avoids that block: R1~R2 and R2~R3 meet it only through
/// the single aggregate weight 15, and the R1~R3 transport can route
/// the 15-row across the (3,3,9) columns.
pub fn nsg_p3_counterexample() -> (Hypergraph, Vec<KRelation>) {
    let h = Hypergraph::of(&[&["A1", "A2"], &["A2", "A3"], &["A3", "A4"]]);
    let spec = MonoidSpec::numerical_semigroup(&[3, 5]).expect("valid generators");
    let names = ["A1".into(), "A2".into(), "A3".into(), "A4".into()];
    let rs = nsg_p3_relations_with_names(&spec, &names).expect("fixed construction is valid");
    (h, rs)
}

/// The same supports and weights as [`nsg_p3_counterexample`] under a
/// different monoid whose elements include 3, 5, 9, and 15 (e.g. the
/// bag monoid, over which the collection *is* globally consistent).
pub fn nsg_p3_relations_over(spec: &MonoidSpec) -> Result<Vec<KRelation>> {
    let names = ["A1".into(), "A2".into(), "A3".into(), "A4".into()];
    nsg_p3_relations_with_names(spec, &names)
}

pub(crate) fn nsg_p3_relations_with_names(
    spec: &MonoidSpec,
    names: &[String; 4],
) -> Result<Vec<KRelation>> {
    let [a1, a2, a3, a4] = names;
    let attr = |n: &String, d: &[&str]| Attribute::new(n.clone(), d.iter().copied());
    let set = |xs: Vec<Attribute>| AttributeSet::new(xs);

    let r1 = KRelation::with_rows(
        set(vec![attr(a1, &["a1", "a2", "a3"])?, attr(a2, &["x1", "x2"])?])?,
        spec.clone(),
        [
            (KTuple::of([(a1.clone(), "a1"), (a2.clone(), "x1")]), Value::Nat(5)),
            (KTuple::of([(a1.clone(), "a2"), (a2.clone(), "x1")]), Value::Nat(5)),
            (KTuple::of([(a1.clone(), "a3"), (a2.clone(), "x1")]), Value::Nat(5)),
            (KTuple::of([(a1.clone(), "a1"), (a2.clone(), "x2")]), Value::Nat(15)),
        ],
    )?;
    let r2 = KRelation::with_rows(
        set(vec![attr(a2, &["x1", "x2"])?, attr(a3, &["y1", "y2"])?])?,
        spec.clone(),
        [
            (KTuple::of([(a2.clone(), "x1"), (a3.clone(), "y1")]), Value::Nat(15)),
            (KTuple::of([(a2.clone(), "x2"), (a3.clone(), "y2")]), Value::Nat(15)),
        ],
    )?;
    let r3 = KRelation::with_rows(
        set(vec![attr(a3, &["y1", "y2"])?, attr(a4, &["d1", "d2", "d3"])?])?,
        spec.clone(),
        [
            (KTuple::of([(a3.clone(), "y1"), (a4.clone(), "d1")]), Value::Nat(3)),
            (KTuple::of([(a3.clone(), "y1"), (a4.clone(), "d2")]), Value::Nat(3)),
            (KTuple::of([(a3.clone(), "y1"), (a4.clone(), "d3")]), Value::Nat(9)),
            (KTuple::of([(a3.clone(), "y2"), (a4.clone(), "d1")]), Value::Nat(15)),
        ],
    )?;
    Ok(vec![r1, r2, r3])
}

// ---------------------------------------------------------------------------
// Adversarial constructions against witness functions

/// Hyperedge roles for [`gamma_adversarial`]: three hyperedges whose
/// traces on the three designated nodes are {A,B}, {A,C} and {A,B,C};
/// the remaining attributes of each edge are padding.
#[derive(Clone, Debug)]
pub struct GammaRoles {
    pub y1: BTreeSet<String>,
    pub y2: BTreeSet<String>,
    pub y3: BTreeSet<String>,
    pub a: String,
    pub b: String,
    pub c: String,
}

impl GammaRoles {
    pub fn new(
        y1: BTreeSet<String>,
        y2: BTreeSet<String>,
        y3: BTreeSet<String>,
        a: impl Into<String>,
        b: impl Into<String>,
        c: impl Into<String>,
    ) -> Result<Self> {
        let roles = GammaRoles {
            y1,
            y2,
            y3,
            a: a.into(),
            b: b.into(),
            c: c.into(),
        };
        let abc: BTreeSet<String> =
            [roles.a.clone(), roles.b.clone(), roles.c.clone()].into();
        if abc.len() != 3 {
            return Err(Error::Precondition("A, B, C must be distinct nodes".into()));
        }
        let trace = |y: &BTreeSet<String>| -> BTreeSet<String> {
            y.intersection(&abc).cloned().collect()
        };
        let want1: BTreeSet<String> = [roles.a.clone(), roles.b.clone()].into();
        let want2: BTreeSet<String> = [roles.a.clone(), roles.c.clone()].into();
        if trace(&roles.y1) != want1 || trace(&roles.y2) != want2 || trace(&roles.y3) != abc {
            return Err(Error::Precondition(
                "role traces must be {A,B}, {A,C}, {A,B,C}".into(),
            ));
        }
        Ok(roles)
    }

    /// The unpadded roles over the hypergraph {A,B,C}, {A,B}, {A,C}.
    pub fn hstar() -> Self {
        GammaRoles::new(
            ["A", "B"].map(String::from).into(),
            ["A", "C"].map(String::from).into(),
            ["A", "B", "C"].map(String::from).into(),
            "A",
            "B",
            "C",
        )
        .expect("fixed roles are valid")
    }

    fn padding(&self, y: &BTreeSet<String>) -> BTreeSet<String> {
        let abc: BTreeSet<String> = [self.a.clone(), self.b.clone(), self.c.clone()].into();
        y.difference(&abc).cloned().collect()
    }
}

/// Which sub-case the adversary took after inspecting the supplied
/// witness function's output.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum AdversarySubcase {
    /// W(R1,R2) marginalized to S1 on {A,B,C}; R3 is the S2-shaped
    /// relation.
    MatchedFirstWitness,
    /// It did not; R3 is the S1-shaped relation.
    Other,
}

/// The triple produced by [`gamma_adversarial`], together with the two
/// reference witnesses and the inspected witness output.
#[derive(Clone, Debug)]
pub struct Adversary {
    pub r1: KRelation,
    pub r2: KRelation,
    pub r3: KRelation,
    pub s1: KRelation,
    pub s2: KRelation,
    pub w_output: KRelation,
    pub subcase: AdversarySubcase,
}

/// Defeats an arbitrary consistency witness function on a schema
/// containing the {A,B}/{A,C}/{A,B,C} trace pattern: returns relations
/// R1, R2, R3 over the three role edges that are pairwise consistent
/// while W(R1, R2) is inconsistent with R3.
///
/// R1 and R2 put weight `a` on the two rows (A=f, B/C in {f,t}) padded
/// with f-columns, which leaves their consistency witness
/// under-determined on {A,B,C}: both the equality pattern S1 and the
/// flip pattern S2 marginalize correctly. R3 is chosen as whichever
/// pattern W did *not* produce.
pub fn gamma_adversarial(
    w: &WitnessFn,
    spec: &MonoidSpec,
    roles: &GammaRoles,
    a: &Value,
) -> Result<Adversary> {
    if !spec.is_element(a) || spec.is_zero(a) {
        return Err(Error::Precondition(
            "the weight must be a non-neutral monoid element".into(),
        ));
    }
    let ft = ["f", "t"];
    let abc = [roles.a.clone(), roles.b.clone(), roles.c.clone()];
    let abc_set: BTreeSet<String> = abc.iter().cloned().collect();

    // a tuple assigning the listed values on A/B/C and f on padding
    let tuple = |vals: &[(&String, &str)], pad: &BTreeSet<String>| -> KTuple {
        KTuple::of(
            vals.iter()
                .map(|(n, v)| ((*n).clone(), v.to_string()))
                .chain(pad.iter().map(|n| (n.clone(), "f".to_string()))),
        )
    };
    let sorted = |s: &BTreeSet<String>| s.iter().cloned().collect::<Vec<_>>();

    let d1 = roles.padding(&roles.y1);
    let d2 = roles.padding(&roles.y2);
    let d3 = roles.padding(&roles.y3);

    let r1 = KRelation::with_rows(
        attrs_over(&sorted(&roles.y1), &ft),
        spec.clone(),
        [
            (tuple(&[(&roles.a, "f"), (&roles.b, "f")], &d1), a.clone()),
            (tuple(&[(&roles.a, "f"), (&roles.b, "t")], &d1), a.clone()),
        ],
    )?;
    let r2 = KRelation::with_rows(
        attrs_over(&sorted(&roles.y2), &ft),
        spec.clone(),
        [
            (tuple(&[(&roles.a, "f"), (&roles.c, "f")], &d2), a.clone()),
            (tuple(&[(&roles.a, "f"), (&roles.c, "t")], &d2), a.clone()),
        ],
    )?;

    // reference witnesses over {A,B,C} plus both paddings
    let d12: BTreeSet<String> = d1.union(&d2).cloned().collect();
    let s_attrs = {
        let mut names: Vec<String> = abc.to_vec();
        names.extend(d12.iter().cloned());
        attrs_over(&names, &ft)
    };
    let s1 = KRelation::with_rows(
        s_attrs.clone(),
        spec.clone(),
        [
            (
                tuple(&[(&roles.a, "f"), (&roles.b, "f"), (&roles.c, "f")], &d12),
                a.clone(),
            ),
            (
                tuple(&[(&roles.a, "f"), (&roles.b, "t"), (&roles.c, "t")], &d12),
                a.clone(),
            ),
        ],
    )?;
    let s2 = KRelation::with_rows(
        s_attrs,
        spec.clone(),
        [
            (
                tuple(&[(&roles.a, "f"), (&roles.b, "f"), (&roles.c, "t")], &d12),
                a.clone(),
            ),
            (
                tuple(&[(&roles.a, "f"), (&roles.b, "t"), (&roles.c, "f")], &d12),
                a.clone(),
            ),
        ],
    )?;
    for (name, s) in [("S1", &s1), ("S2", &s2)] {
        if !is_witness_of(s, &r1, &r2)? {
            return Err(Error::Precondition(format!(
                "{name} failed its witness self-check"
            )));
        }
    }

    let w_output = w.apply(&r1, &r2)?;
    if !is_witness_of(&w_output, &r1, &r2)? {
        return Err(Error::WitnessContract {
            context: format!("{}(R1, R2)", w.name()),
            detail: format!(
                "output does not marginalize to its arguments: {w_output}"
            ),
        });
    }

    // weighted comparison of the {A,B,C} marginals decides the case
    let matched = w_output.marginal(&abc_set)? == s1.marginal(&abc_set)?;
    let pattern: [(&str, &str); 2] = if matched {
        [("f", "t"), ("t", "f")] // S2-shaped
    } else {
        [("f", "f"), ("t", "t")] // S1-shaped
    };
    let r3 = KRelation::with_rows(
        attrs_over(&sorted(&roles.y3), &ft),
        spec.clone(),
        pattern.iter().map(|(vb, vc)| {
            (
                tuple(&[(&roles.a, "f"), (&roles.b, vb), (&roles.c, vc)], &d3),
                a.clone(),
            )
        }),
    )?;

    let adversary = Adversary {
        r1,
        r2,
        r3,
        s1,
        s2,
        w_output,
        subcase: if matched {
            AdversarySubcase::MatchedFirstWitness
        } else {
            AdversarySubcase::Other
        },
    };

    // the guarantees are re-checked, not assumed
    let triple = [
        adversary.r1.clone(),
        adversary.r2.clone(),
        adversary.r3.clone(),
    ];
    if !pairwise_consistent(&triple, &mut Budget::default())?.is_consistent() {
        return Err(Error::Precondition(
            "adversarial triple failed its pairwise self-check".into(),
        ));
    }
    match consistent(&adversary.w_output, &adversary.r3, &mut Budget::default())? {
        Consistency::Inconsistent => {}
        other => {
            return Err(Error::Precondition(format!(
                "W(R1,R2) vs R3 expected inconsistent, got {other:?}"
            )))
        }
    }
    Ok(adversary)
}

/// The unpadded specialization of [`gamma_adversarial`] over the
/// hypergraph {A,B,C}, {A,B}, {A,C}.
pub fn hstar_adversarial(w: &WitnessFn, spec: &MonoidSpec, a: &Value) -> Result<Adversary> {
    gamma_adversarial(w, spec, &GammaRoles::hstar(), a)
}

// ---------------------------------------------------------------------------
// Samplers

pub(crate) fn node_attrs(nodes: &BTreeSet<String>, domain: &[&str]) -> AttributeSet {
    attrs_over(&nodes.iter().cloned().collect::<Vec<_>>(), domain)
}

fn nonzero_pool(spec: &MonoidSpec) -> Vec<Value> {
    spec.sample_pool()
        .into_iter()
        .filter(|v| !spec.is_zero(v))
        .collect()
}

fn random_tuple(attrs: &AttributeSet, rng: &mut ChaCha8Rng) -> KTuple {
    KTuple::of(attrs.iter().map(|a| {
        let d = a.domain();
        (a.name().to_string(), d[rng.random_range(0..d.len())].clone())
    }))
}

fn random_relation(
    attrs: &AttributeSet,
    spec: &MonoidSpec,
    rng: &mut ChaCha8Rng,
    max_rows: usize,
) -> Result<KRelation> {
    let pool = nonzero_pool(spec);
    let mut rel = KRelation::new(attrs.clone(), spec.clone());
    let rows = rng.random_range(0..=max_rows);
    for _ in 0..rows {
        let t = random_tuple(attrs, rng);
        let w = pool[rng.random_range(0..pool.len())].clone();
        // collisions are simply skipped
        if rel.weight(&t) == spec.zero() {
            rel.insert(t, w)?;
        }
    }
    Ok(rel)
}

/// Draws a random relation over the whole attribute union (binary
/// domains) and returns its marginals onto the schema's hyperedges —
/// globally consistent by construction.
pub fn sample_globally_consistent(
    h: &Hypergraph,
    spec: &MonoidSpec,
    seed: u64,
    size: usize,
) -> Result<Vec<KRelation>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let attrs = node_attrs(&h.occupied_nodes(), &["0", "1"]);
    let t = random_relation(&attrs, spec, &mut rng, size)?;
    h.edges()
        .iter()
        .map(|e| t.marginal(e.nodes()))
        .collect()
}

/// Rejection-samples a pairwise consistent collection over the schema:
/// random relations per hyperedge until the filter passes, or `None`
/// after `rounds` attempts.
pub fn sample_pairwise_consistent(
    h: &Hypergraph,
    spec: &MonoidSpec,
    seed: u64,
    rounds: usize,
) -> Result<Option<Vec<KRelation>>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..rounds {
        let rs: Vec<KRelation> = h
            .edges()
            .iter()
            .map(|e| random_relation(&node_attrs(e.nodes(), &["0", "1"]), spec, &mut rng, 3))
            .collect::<Result<_>>()?;
        if pairwise_consistent(&rs, &mut Budget::default())?.is_consistent() {
            return Ok(Some(rs));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monoid::Feasibility;
    use crate::relation::{generic_witness, inner_consistent, standard_join};
    use crate::relation::globally_consistent;

    #[test]
    fn triangle_counterexample_self_verifies() {
        let (_, rs) = triangle_counterexample();
        assert!(pairwise_consistent(&rs, &mut Budget::default())
            .unwrap()
            .is_consistent());
        assert_eq!(
            globally_consistent(&rs, &mut Budget::default()).unwrap(),
            Consistency::Inconsistent
        );
    }

    #[test]
    fn nsg_p3_counterexample_self_verifies() {
        let (_, rs) = nsg_p3_counterexample();
        assert!(pairwise_consistent(&rs, &mut Budget::default())
            .unwrap()
            .is_consistent());
        assert_eq!(
            globally_consistent(&rs, &mut Budget::new(5_000_000)).unwrap(),
            Consistency::Inconsistent
        );
        // adjacent pairs are consistent, non-adjacent inner consistent
        for (i, j) in [(0, 1), (1, 2), (0, 2)] {
            assert!(inner_consistent(&rs[i], &rs[j]).unwrap(), "{i} {j}");
        }
    }

    #[test]
    fn nsg_p3_relations_are_globally_consistent_over_bags() {
        let rs = nsg_p3_relations_over(&MonoidSpec::bag()).unwrap();
        assert!(pairwise_consistent(&rs, &mut Budget::default())
            .unwrap()
            .is_consistent());
        assert!(globally_consistent(&rs, &mut Budget::default())
            .unwrap()
            .is_consistent());
    }

    #[test]
    fn hstar_adversarial_boolean_generic() {
        let spec = MonoidSpec::boolean();
        let w = generic_witness(&spec).unwrap();
        let adv = hstar_adversarial(&w, &spec, &Value::Bool(true)).unwrap();
        // the generic witness fills the whole block, which differs
        // from S1, so the S1-shaped R3 is returned
        assert_eq!(adv.subcase, AdversarySubcase::Other);
        assert_eq!(adv.r3.len(), 2);
        assert_ne!(adv.s1, adv.s2);
    }

    #[test]
    fn hstar_adversarial_standard_join() {
        let spec = MonoidSpec::boolean();
        let adv = hstar_adversarial(&standard_join(), &spec, &Value::Bool(true)).unwrap();
        assert_eq!(adv.w_output.len(), 4);
        assert_eq!(adv.subcase, AdversarySubcase::Other);
        assert_eq!(adv.r3, adv.s1);
    }

    #[test]
    fn hstar_adversarial_bag_generic_matches_s1() {
        let spec = MonoidSpec::bag();
        let w = generic_witness(&spec).unwrap();
        let adv = hstar_adversarial(&w, &spec, &Value::Nat(1)).unwrap();
        // the northwest corner reproduces S1 exactly, forcing sub-case 1
        assert_eq!(adv.subcase, AdversarySubcase::MatchedFirstWitness);
        assert_eq!(adv.r3, adv.s2);
    }

    #[test]
    fn gamma_adversarial_with_padding() {
        let spec = MonoidSpec::bag();
        let roles = GammaRoles::new(
            ["A", "B", "D"].map(String::from).into(),
            ["A", "C", "E"].map(String::from).into(),
            ["A", "B", "C", "F"].map(String::from).into(),
            "A",
            "B",
            "C",
        )
        .unwrap();
        let w = generic_witness(&spec).unwrap();
        let adv = gamma_adversarial(&w, &spec, &roles, &Value::Nat(2)).unwrap();
        assert_eq!(adv.r1.names(), ["A", "B", "D"].map(String::from).into());
        assert_eq!(adv.r3.names(), ["A", "B", "C", "F"].map(String::from).into());
    }

    #[test]
    fn gamma_roles_validation() {
        assert!(GammaRoles::new(
            ["A", "B"].map(String::from).into(),
            ["A", "B"].map(String::from).into(),
            ["A", "B", "C"].map(String::from).into(),
            "A",
            "B",
            "C",
        )
        .is_err());
    }

    #[test]
    fn samplers_are_deterministic() {
        let h = Hypergraph::of(&[&["A1", "A2"], &["A2", "A3"], &["A3", "A4"]]);
        let spec = MonoidSpec::bag();
        let a = sample_globally_consistent(&h, &spec, 7, 4).unwrap();
        let b = sample_globally_consistent(&h, &spec, 7, 4).unwrap();
        assert_eq!(a, b);
        assert!(pairwise_consistent(&a, &mut Budget::default())
            .unwrap()
            .is_consistent());

        let p = sample_pairwise_consistent(&h, &spec, 11, 50).unwrap();
        let q = sample_pairwise_consistent(&h, &spec, 11, 50).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn forced_transport_block_is_really_infeasible() {
        // the global obstruction inside nsg_p3_counterexample
        let spec = MonoidSpec::numerical_semigroup(&[3, 5]).unwrap();
        let inst = crate::monoid::TransportInstance::new(
            &spec,
            vec![Value::Nat(5), Value::Nat(5), Value::Nat(5)],
            vec![Value::Nat(3), Value::Nat(3), Value::Nat(9)],
        )
        .unwrap();
        assert_eq!(
            crate::monoid::solve_transport(&spec, &inst, &mut Budget::default()).unwrap(),
            Feasibility::Infeasible
        );
    }

    #[test]
    fn hyperedge_helper_compiles() {
        let e = Hyperedge::new("X", ["A"]).unwrap();
        assert_eq!(e.label(), "X");
    }
}
