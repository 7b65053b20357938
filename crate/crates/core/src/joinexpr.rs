//! Binary c-join expression trees over a schema's hyperedges.
//!
//! An expression is either a hyperedge (by index into the schema) or a
//! join of two sub-expressions. The join symbol is interpreted by a
//! [`WitnessFn`] at evaluation time; leaves evaluate to the relation
//! supplied for their hyperedge. Leaves are indices rather than
//! attribute sets so duplicate hyperedges in a schema stay
//! distinguishable; the textual form is reconstructed from the edge
//! labels for display.
//!
//! An expression is *sequential* when it is left-deep (every right
//! child is a leaf) and *connected* when the children of every join
//! node share an attribute. It is *monotone* with respect to a witness
//! function and a collection of relations when the two child
//! evaluations of every join node are consistent; when that holds and
//! every hyperedge occurs in the expression, the evaluation result is
//! a global consistency witness for the collection.

use std::collections::BTreeSet;

use crate::error::Error;
use crate::hypergraph::Hypergraph;
use crate::monoid::Budget;
use crate::relation::{consistent, Consistency, KRelation, WitnessFn};
use crate::Result;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum JoinExpr {
    Leaf(usize),
    Join(Box<JoinExpr>, Box<JoinExpr>),
}

/// Verdict of a monotonicity check, with the first offending node (in
/// post-order, left subtree first) rendered for reporting.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum MonotoneVerdict {
    Monotone,
    NotMonotone { node: String },
    Undecided { node: String },
}

impl MonotoneVerdict {
    pub fn is_monotone(&self) -> bool {
        matches!(self, MonotoneVerdict::Monotone)
    }
}

impl JoinExpr {
    pub fn leaf(i: usize) -> Self {
        JoinExpr::Leaf(i)
    }

    pub fn join(left: JoinExpr, right: JoinExpr) -> Self {
        JoinExpr::Join(Box::new(left), Box::new(right))
    }

    /// Builds the left-deep expression `((l0 * l1) * l2) ...`.
    pub fn sequential(leaves: &[usize]) -> Option<Self> {
        let (&first, rest) = leaves.split_first()?;
        Some(rest.iter().fold(JoinExpr::Leaf(first), |acc, &i| {
            JoinExpr::join(acc, JoinExpr::Leaf(i))
        }))
    }

    /// Leaf indices in left-to-right order.
    pub fn leaves(&self) -> Vec<usize> {
        match self {
            JoinExpr::Leaf(i) => vec![*i],
            JoinExpr::Join(l, r) => {
                let mut out = l.leaves();
                out.extend(r.leaves());
                out
            }
        }
    }

    /// The attribute set of the expression: the union of its leaf
    /// hyperedges.
    pub fn attrs(&self, schema: &Hypergraph) -> Result<BTreeSet<String>> {
        let mut out = BTreeSet::new();
        for i in self.leaves() {
            let edge = schema
                .edges()
                .get(i)
                .ok_or_else(|| Error::Expr(format!("leaf {i} out of schema bounds")))?;
            out.extend(edge.nodes().iter().cloned());
        }
        Ok(out)
    }

    /// Left-deep with leaf right children throughout.
    pub fn is_sequential(&self) -> bool {
        match self {
            JoinExpr::Leaf(_) => true,
            JoinExpr::Join(l, r) => matches!(**r, JoinExpr::Leaf(_)) && l.is_sequential(),
        }
    }

    /// Every join node's children share an attribute.
    pub fn is_connected(&self, schema: &Hypergraph) -> Result<bool> {
        match self {
            JoinExpr::Leaf(_) => Ok(true),
            JoinExpr::Join(l, r) => {
                let shared = !l.attrs(schema)?.is_disjoint(&r.attrs(schema)?);
                Ok(shared && l.is_connected(schema)? && r.is_connected(schema)?)
            }
        }
    }

    /// Renders with the schema's edge labels: `((X1 * X2) * X3)`.
    pub fn format(&self, schema: &Hypergraph) -> String {
        match self {
            JoinExpr::Leaf(i) => schema.edge(*i).label().to_string(),
            JoinExpr::Join(l, r) => {
                format!("({} * {})", l.format(schema), r.format(schema))
            }
        }
    }

    /// Parses the fully parenthesized syntax `expr := name | "(" expr
    /// "*" expr ")"`, where names are schema hyperedge labels (brace
    /// labels like `{A,B}` count as single names).
    pub fn parse(text: &str, schema: &Hypergraph) -> Result<JoinExpr> {
        let tokens = tokenize(text)?;
        let mut pos = 0;
        let expr = parse_expr(&tokens, &mut pos, schema)?;
        if pos != tokens.len() {
            return Err(Error::ExprParse(format!(
                "trailing input after expression: {:?}",
                &tokens[pos..]
            )));
        }
        Ok(expr)
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
enum Token {
    Open,
    Close,
    Star,
    Name(String),
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let mut tokens = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            ' ' | '\t' | '\n' => {
                chars.next();
            }
            '(' => {
                chars.next();
                tokens.push(Token::Open);
            }
            ')' => {
                chars.next();
                tokens.push(Token::Close);
            }
            '*' => {
                chars.next();
                tokens.push(Token::Star);
            }
            '{' => {
                let mut name = String::new();
                for c in chars.by_ref() {
                    name.push(c);
                    if c == '}' {
                        break;
                    }
                }
                if !name.ends_with('}') {
                    return Err(Error::ExprParse(format!("unclosed brace in {name:?}")));
                }
                tokens.push(Token::Name(name));
            }
            _ => {
                let mut name = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_whitespace() || "()*{".contains(c) {
                        break;
                    }
                    name.push(c);
                    chars.next();
                }
                tokens.push(Token::Name(name));
            }
        }
    }
    Ok(tokens)
}

fn parse_expr(tokens: &[Token], pos: &mut usize, schema: &Hypergraph) -> Result<JoinExpr> {
    match tokens.get(*pos) {
        Some(Token::Name(name)) => {
            *pos += 1;
            let i = schema
                .edge_index(name)
                .ok_or_else(|| Error::ExprParse(format!("unknown hyperedge {name:?}")))?;
            Ok(JoinExpr::Leaf(i))
        }
        Some(Token::Open) => {
            *pos += 1;
            let left = parse_expr(tokens, pos, schema)?;
            match tokens.get(*pos) {
                Some(Token::Star) => *pos += 1,
                other => return Err(Error::ExprParse(format!("expected '*', got {other:?}"))),
            }
            let right = parse_expr(tokens, pos, schema)?;
            match tokens.get(*pos) {
                Some(Token::Close) => *pos += 1,
                other => return Err(Error::ExprParse(format!("expected ')', got {other:?}"))),
            }
            Ok(JoinExpr::join(left, right))
        }
        other => Err(Error::ExprParse(format!("expected expression, got {other:?}"))),
    }
}

fn check_inputs(schema: &Hypergraph, rs: &[KRelation]) -> Result<()> {
    if rs.len() != schema.edges().len() {
        return Err(Error::Expr(format!(
            "{} relations supplied for {} hyperedges",
            rs.len(),
            schema.edges().len()
        )));
    }
    for (i, r) in rs.iter().enumerate() {
        if &r.names() != schema.edge(i).nodes() {
            return Err(Error::Expr(format!(
                "relation {i} is over {:?}, expected {:?}",
                r.names(),
                schema.edge(i).nodes()
            )));
        }
    }
    Ok(())
}

/// Evaluates `expr` with the join symbol interpreted by `w`. Each
/// witness application must return a relation over the union of its
/// arguments' attributes; anything else is a contract violation
/// reported with the offending node.
pub fn evaluate(
    expr: &JoinExpr,
    schema: &Hypergraph,
    w: &WitnessFn,
    rs: &[KRelation],
) -> Result<KRelation> {
    check_inputs(schema, rs)?;
    eval_node(expr, schema, w, rs)
}

fn eval_node(
    expr: &JoinExpr,
    schema: &Hypergraph,
    w: &WitnessFn,
    rs: &[KRelation],
) -> Result<KRelation> {
    match expr {
        JoinExpr::Leaf(i) => Ok(rs[*i].clone()),
        JoinExpr::Join(l, r) => {
            let lv = eval_node(l, schema, w, rs)?;
            let rv = eval_node(r, schema, w, rs)?;
            let out = w.apply(&lv, &rv)?;
            let want: BTreeSet<String> = lv.names().union(&rv.names()).cloned().collect();
            if out.names() != want {
                return Err(Error::WitnessContract {
                    context: expr.format(schema),
                    detail: format!(
                        "witness {} returned attributes {:?}, expected {:?}",
                        w.name(),
                        out.names(),
                        want
                    ),
                });
            }
            Ok(out)
        }
    }
}

/// Checks monotonicity of `expr` with respect to `w` and `rs`: at
/// every join node the two child evaluations must be consistent. The
/// first offending node in post-order is reported.
pub fn is_monotone_wrt(
    expr: &JoinExpr,
    schema: &Hypergraph,
    w: &WitnessFn,
    rs: &[KRelation],
    budget: &mut Budget,
) -> Result<MonotoneVerdict> {
    check_inputs(schema, rs)?;
    match mono_node(expr, schema, w, rs, budget)? {
        Step::Value(_) => Ok(MonotoneVerdict::Monotone),
        Step::Stop(v) => Ok(v),
    }
}

enum Step {
    Value(KRelation),
    Stop(MonotoneVerdict),
}

fn mono_node(
    expr: &JoinExpr,
    schema: &Hypergraph,
    w: &WitnessFn,
    rs: &[KRelation],
    budget: &mut Budget,
) -> Result<Step> {
    match expr {
        JoinExpr::Leaf(i) => Ok(Step::Value(rs[*i].clone())),
        JoinExpr::Join(l, r) => {
            let lv = match mono_node(l, schema, w, rs, budget)? {
                Step::Value(v) => v,
                stop => return Ok(stop),
            };
            let rv = match mono_node(r, schema, w, rs, budget)? {
                Step::Value(v) => v,
                stop => return Ok(stop),
            };
            match consistent(&lv, &rv, budget)? {
                Consistency::Consistent(_) => {}
                Consistency::Inconsistent => {
                    return Ok(Step::Stop(MonotoneVerdict::NotMonotone {
                        node: expr.format(schema),
                    }))
                }
                Consistency::Undecided => {
                    return Ok(Step::Stop(MonotoneVerdict::Undecided {
                        node: expr.format(schema),
                    }))
                }
            }
            Ok(Step::Value(eval_node(expr, schema, w, rs)?))
        }
    }
}

/// All sequential expressions with at most `max_len` leaves (leaves
/// may repeat) that pass the connectedness check, in lexicographic
/// order of their leaf index sequences.
pub fn enumerate_connected_sequential(schema: &Hypergraph, max_len: usize) -> Vec<JoinExpr> {
    let mut out = Vec::new();
    let n = schema.edges().len();
    let mut stack: Vec<(Vec<usize>, BTreeSet<String>)> = (0..n)
        .map(|i| (vec![i], schema.edge(i).nodes().clone()))
        .collect();
    // depth-first in index order keeps the output deterministic
    stack.reverse();
    while let Some((leaves, attrs)) = stack.pop() {
        out.push(JoinExpr::sequential(&leaves).expect("non-empty"));
        if leaves.len() >= max_len {
            continue;
        }
        for i in (0..n).rev() {
            let edge = schema.edge(i).nodes();
            if attrs.is_disjoint(edge) {
                continue;
            }
            let mut next = leaves.clone();
            next.push(i);
            let mut next_attrs = attrs.clone();
            next_attrs.extend(edge.iter().cloned());
            stack.push((next, next_attrs));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monoid::MonoidSpec;
    use crate::relation::{generic_witness, standard_join, Attribute, AttributeSet, KTuple};
    use crate::monoid::Value;

    fn p3() -> Hypergraph {
        Hypergraph::of(&[&["A1", "A2"], &["A2", "A3"], &["A3", "A4"]])
    }

    fn named_p3() -> Hypergraph {
        let edges = vec![
            crate::hypergraph::Hyperedge::new("X1", ["A1", "A2"]).unwrap(),
            crate::hypergraph::Hyperedge::new("X2", ["A2", "A3"]).unwrap(),
            crate::hypergraph::Hyperedge::new("X3", ["A3", "A4"]).unwrap(),
        ];
        Hypergraph::new(edges).unwrap()
    }

    #[test]
    fn parse_and_format_roundtrip() {
        let schema = named_p3();
        let e = JoinExpr::parse("((X1 * X2) * X3)", &schema).unwrap();
        assert_eq!(
            e,
            JoinExpr::sequential(&[0, 1, 2]).unwrap()
        );
        assert_eq!(e.format(&schema), "((X1 * X2) * X3)");

        let leaf = JoinExpr::parse("X1", &schema).unwrap();
        assert_eq!(leaf, JoinExpr::Leaf(0));

        // the appendix expression over auto-labeled edges
        let hstar = Hypergraph::of(&[&["A", "B", "C"], &["A", "B"], &["A", "C"]]);
        let e = JoinExpr::join(
            JoinExpr::join(JoinExpr::Leaf(1), JoinExpr::Leaf(2)),
            JoinExpr::Leaf(0),
        );
        let text = e.format(&hstar);
        assert_eq!(text, "(({A,B} * {A,C}) * {A,B,C})");
        assert_eq!(JoinExpr::parse(&text, &hstar).unwrap(), e);
    }

    #[test]
    fn parse_errors() {
        let schema = named_p3();
        assert!(JoinExpr::parse("((X1 * X2)", &schema).is_err());
        assert!(JoinExpr::parse("(X1 * X9)", &schema).is_err());
        assert!(JoinExpr::parse("X1 X2", &schema).is_err());
    }

    #[test]
    fn sequential_examples() {
        assert!(JoinExpr::sequential(&[0, 1, 2]).unwrap().is_sequential());
        let bushy = JoinExpr::join(
            JoinExpr::join(JoinExpr::Leaf(0), JoinExpr::Leaf(1)),
            JoinExpr::join(JoinExpr::Leaf(2), JoinExpr::Leaf(0)),
        );
        assert!(!bushy.is_sequential());
        assert!(JoinExpr::Leaf(0).is_sequential());
    }

    #[test]
    fn connected_examples() {
        let schema = p3();
        let chain = JoinExpr::sequential(&[0, 1, 2]).unwrap();
        assert!(chain.is_connected(&schema).unwrap());
        let skip = JoinExpr::join(JoinExpr::Leaf(0), JoinExpr::Leaf(2));
        assert!(!skip.is_connected(&schema).unwrap());
        assert!(JoinExpr::Leaf(1).is_connected(&schema).unwrap());
    }

    fn bool_rel(attr_names: &[&str], rows: &[&[&str]]) -> KRelation {
        let attrs = AttributeSet::new(
            attr_names
                .iter()
                .map(|n| Attribute::new(*n, ["0", "1"]).unwrap())
                .collect(),
        )
        .unwrap();
        KRelation::with_rows(
            attrs,
            MonoidSpec::boolean(),
            rows.iter().map(|vals| {
                (
                    KTuple::of(attr_names.iter().copied().zip(vals.iter().copied())),
                    Value::Bool(true),
                )
            }),
        )
        .unwrap()
    }

    fn triangle_setup() -> (Hypergraph, Vec<KRelation>) {
        let schema = Hypergraph::of(&[&["A", "B"], &["B", "C"], &["C", "A"]]);
        let rs = vec![
            bool_rel(&["A", "B"], &[&["0", "0"], &["1", "1"]]),
            bool_rel(&["B", "C"], &[&["0", "1"], &["1", "0"]]),
            bool_rel(&["C", "A"], &[&["0", "0"], &["1", "1"]]),
        ];
        (schema, rs)
    }

    #[test]
    fn leaf_evaluates_to_its_relation() {
        let (schema, rs) = triangle_setup();
        let out = evaluate(&JoinExpr::Leaf(0), &schema, &standard_join(), &rs).unwrap();
        assert_eq!(out, rs[0]);
    }

    #[test]
    fn triangle_standard_join_collapses_to_empty() {
        let (schema, rs) = triangle_setup();
        let e = JoinExpr::sequential(&[0, 1, 2]).unwrap();
        let out = evaluate(&e, &schema, &standard_join(), &rs).unwrap();
        assert!(out.is_empty());

        let verdict =
            is_monotone_wrt(&e, &schema, &standard_join(), &rs, &mut Budget::default()).unwrap();
        assert_eq!(
            verdict,
            MonotoneVerdict::NotMonotone {
                node: "(({A,B} * {B,C}) * {C,A})".into()
            }
        );
    }

    #[test]
    fn single_leaf_is_monotone() {
        let (schema, rs) = triangle_setup();
        let verdict = is_monotone_wrt(
            &JoinExpr::Leaf(2),
            &schema,
            &standard_join(),
            &rs,
            &mut Budget::default(),
        )
        .unwrap();
        assert!(verdict.is_monotone());
    }

    #[test]
    fn p3_chain_with_generic_witness_marginalizes_to_inputs() {
        let schema = p3();
        let t = bool_rel(
            &["A1", "A2", "A3", "A4"],
            &[&["0", "0", "1", "0"], &["1", "1", "0", "1"], &["1", "0", "1", "1"]],
        );
        let rs: Vec<KRelation> = (0..3)
            .map(|i| t.marginal(schema.edge(i).nodes()).unwrap())
            .collect();
        let w = generic_witness(&MonoidSpec::boolean()).unwrap();
        let e = JoinExpr::sequential(&[0, 1, 2]).unwrap();
        assert!(is_monotone_wrt(&e, &schema, &w, &rs, &mut Budget::default())
            .unwrap()
            .is_monotone());
        let out = evaluate(&e, &schema, &w, &rs).unwrap();
        for r in &rs {
            assert_eq!(&out.marginal(&r.names()).unwrap(), r);
        }
    }

    #[test]
    fn enumeration_respects_connectedness() {
        let schema = p3();
        let exprs = enumerate_connected_sequential(&schema, 3);
        assert!(exprs.contains(&JoinExpr::sequential(&[0, 1, 2]).unwrap()));
        // X1 and X3 share nothing, so (X1 * X3) never appears
        assert!(!exprs.contains(&JoinExpr::sequential(&[0, 2]).unwrap()));
        assert!(exprs.iter().all(|e| e.is_connected(&schema).unwrap()));
        assert!(exprs.iter().all(|e| e.is_sequential()));

        let p2 = Hypergraph::of(&[&["A1", "A2"], &["A2", "A3"]]);
        let exprs = enumerate_connected_sequential(&p2, 2);
        assert!(exprs.contains(&JoinExpr::sequential(&[0, 1]).unwrap()));

        // disjoint edges only ever join with themselves
        let disjoint = Hypergraph::of(&[&["A", "B"], &["C", "D"]]);
        let exprs = enumerate_connected_sequential(&disjoint, 2);
        for e in &exprs {
            let leaves = e.leaves();
            assert!(leaves.iter().all(|&l| l == leaves[0]), "{:?}", leaves);
        }
    }
}
