//! Formula ASTs, parsers, printers, and syntactic transformations.
//!
//! Two expression languages live here: multi-modal formulas over labeled
//! modalities (with the reserved label `U` for the universal modality) and
//! first-order formulas over unary/binary signatures extended with counting
//! quantifiers and monadic TC/LFP operators.

mod lex;
mod parse;
mod print;
pub mod shape;
pub mod transform;

use std::collections::BTreeSet;
use thiserror::Error;

pub use parse::{parse_fo, parse_modal};
pub use shape::{shape_check, FormulaRef, ShapeKind};

/// Reserved modality label interpreted as `W x W` on every model.
pub const UNIVERSAL_LABEL: &str = "U";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SyntaxError {
    #[error("parse error at {line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("relation '{rel}' used with {found} arguments but expects {expected}")]
    ArityMismatch {
        rel: String,
        expected: usize,
        found: usize,
    },
    #[error("fixed-point variable '{0}' occurs under an odd number of negations")]
    NonPositiveLfp(String),
    #[error("shape check '{kind}' expects a {expected} formula")]
    ShapeClassMismatch { kind: String, expected: &'static str },
    #[error("shape check '{0}' requires a designated proposition")]
    MissingShapeVar(String),
    #[error("duplicate name '{0}' in signature")]
    DuplicateName(String),
}

/// Multi-modal formula over labeled diamonds/boxes.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ModalFormula {
    True,
    False,
    Prop(String),
    Not(Box<ModalFormula>),
    And(Box<ModalFormula>, Box<ModalFormula>),
    Or(Box<ModalFormula>, Box<ModalFormula>),
    Implies(Box<ModalFormula>, Box<ModalFormula>),
    Iff(Box<ModalFormula>, Box<ModalFormula>),
    Diamond(String, Box<ModalFormula>),
    Box(String, Box<ModalFormula>),
}

impl ModalFormula {
    pub fn prop(name: impl Into<String>) -> Self {
        ModalFormula::Prop(name.into())
    }

    pub fn not(f: ModalFormula) -> Self {
        ModalFormula::Not(Box::new(f))
    }

    pub fn and(a: ModalFormula, b: ModalFormula) -> Self {
        ModalFormula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: ModalFormula, b: ModalFormula) -> Self {
        ModalFormula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: ModalFormula, b: ModalFormula) -> Self {
        ModalFormula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: ModalFormula, b: ModalFormula) -> Self {
        ModalFormula::Iff(Box::new(a), Box::new(b))
    }

    pub fn diamond(label: impl Into<String>, f: ModalFormula) -> Self {
        ModalFormula::Diamond(label.into(), Box::new(f))
    }

    pub fn bx(label: impl Into<String>, f: ModalFormula) -> Self {
        ModalFormula::Box(label.into(), Box::new(f))
    }

    /// Conjunction of a sequence; the empty conjunction is `true`.
    pub fn big_and<I: IntoIterator<Item = ModalFormula>>(items: I) -> Self {
        let mut iter = items.into_iter();
        match iter.next() {
            None => ModalFormula::True,
            Some(first) => iter.fold(first, ModalFormula::and),
        }
    }

    /// Disjunction of a sequence; the empty disjunction is `false`.
    pub fn big_or<I: IntoIterator<Item = ModalFormula>>(items: I) -> Self {
        let mut iter = items.into_iter();
        match iter.next() {
            None => ModalFormula::False,
            Some(first) => iter.fold(first, ModalFormula::or),
        }
    }

    pub fn children(&self) -> Vec<&ModalFormula> {
        match self {
            ModalFormula::True | ModalFormula::False | ModalFormula::Prop(_) => vec![],
            ModalFormula::Not(f) | ModalFormula::Diamond(_, f) | ModalFormula::Box(_, f) => {
                vec![f]
            }
            ModalFormula::And(a, b)
            | ModalFormula::Or(a, b)
            | ModalFormula::Implies(a, b)
            | ModalFormula::Iff(a, b) => vec![a, b],
        }
    }

    /// Maximum nesting depth of modal operators.
    pub fn modal_depth(&self) -> usize {
        match self {
            ModalFormula::Diamond(_, f) | ModalFormula::Box(_, f) => 1 + f.modal_depth(),
            _ => self
                .children()
                .iter()
                .map(|c| c.modal_depth())
                .max()
                .unwrap_or(0),
        }
    }

    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    pub fn props(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_props(&mut out);
        out
    }

    fn collect_props(&self, out: &mut BTreeSet<String>) {
        if let ModalFormula::Prop(p) = self {
            out.insert(p.clone());
        }
        for c in self.children() {
            c.collect_props(out);
        }
    }

    /// Modality labels occurring in the formula, including `U` if present.
    pub fn labels(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_labels(&mut out);
        out
    }

    fn collect_labels(&self, out: &mut BTreeSet<String>) {
        if let ModalFormula::Diamond(l, _) | ModalFormula::Box(l, _) = self {
            out.insert(l.clone());
        }
        for c in self.children() {
            c.collect_labels(out);
        }
    }

    pub fn contains_prop(&self, p: &str) -> bool {
        match self {
            ModalFormula::Prop(q) => q == p,
            _ => self.children().iter().any(|c| c.contains_prop(p)),
        }
    }

    pub fn uses_universal_modality(&self) -> bool {
        self.labels().contains(UNIVERSAL_LABEL)
    }
}

/// First-order formula over unary/binary relations, with counting
/// quantifiers and monadic TC/LFP operators.
///
/// A `Rel` atom with one argument may also refer to an LFP-bound set
/// variable; resolution happens at evaluation time.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FOFormula {
    Rel(String, Vec<String>),
    Equals(String, String),
    Not(Box<FOFormula>),
    And(Box<FOFormula>, Box<FOFormula>),
    Or(Box<FOFormula>, Box<FOFormula>),
    Implies(Box<FOFormula>, Box<FOFormula>),
    Forall(String, Box<FOFormula>),
    Exists(String, Box<FOFormula>),
    /// `E>=k x. F`: at least `k` witnesses.
    CountGe(u32, String, Box<FOFormula>),
    /// `E<=k x. F`: at most `k` witnesses.
    CountLe(u32, String, Box<FOFormula>),
    /// `TC[x,y]{F}(s,t)`: `(s,t)` lies in the transitive closure (one or
    /// more steps) of the binary relation defined by `F` on `(x,y)`.
    Tc(Box<TcNode>),
    /// `LFP[X,x]{F}(s)`: `s` belongs to the least fixed point of the set
    /// operator defined by `F`, positive in `X`.
    Lfp(Box<LfpNode>),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TcNode {
    pub x: String,
    pub y: String,
    pub body: FOFormula,
    pub s: String,
    pub t: String,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LfpNode {
    pub set_var: String,
    pub x: String,
    pub body: FOFormula,
    pub arg: String,
}

impl FOFormula {
    pub fn rel1(name: impl Into<String>, v: impl Into<String>) -> Self {
        FOFormula::Rel(name.into(), vec![v.into()])
    }

    pub fn rel2(name: impl Into<String>, v: impl Into<String>, w: impl Into<String>) -> Self {
        FOFormula::Rel(name.into(), vec![v.into(), w.into()])
    }

    pub fn eq(v: impl Into<String>, w: impl Into<String>) -> Self {
        FOFormula::Equals(v.into(), w.into())
    }

    pub fn not(f: FOFormula) -> Self {
        FOFormula::Not(Box::new(f))
    }

    pub fn and(a: FOFormula, b: FOFormula) -> Self {
        FOFormula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: FOFormula, b: FOFormula) -> Self {
        FOFormula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: FOFormula, b: FOFormula) -> Self {
        FOFormula::Implies(Box::new(a), Box::new(b))
    }

    pub fn forall(v: impl Into<String>, f: FOFormula) -> Self {
        FOFormula::Forall(v.into(), Box::new(f))
    }

    pub fn exists(v: impl Into<String>, f: FOFormula) -> Self {
        FOFormula::Exists(v.into(), Box::new(f))
    }

    pub fn count_ge(k: u32, v: impl Into<String>, f: FOFormula) -> Self {
        FOFormula::CountGe(k, v.into(), Box::new(f))
    }

    pub fn count_le(k: u32, v: impl Into<String>, f: FOFormula) -> Self {
        FOFormula::CountLe(k, v.into(), Box::new(f))
    }

    pub fn tc(
        x: impl Into<String>,
        y: impl Into<String>,
        body: FOFormula,
        s: impl Into<String>,
        t: impl Into<String>,
    ) -> Self {
        FOFormula::Tc(Box::new(TcNode {
            x: x.into(),
            y: y.into(),
            body,
            s: s.into(),
            t: t.into(),
        }))
    }

    pub fn lfp(
        set_var: impl Into<String>,
        x: impl Into<String>,
        body: FOFormula,
        arg: impl Into<String>,
    ) -> Self {
        FOFormula::Lfp(Box::new(LfpNode {
            set_var: set_var.into(),
            x: x.into(),
            body,
            arg: arg.into(),
        }))
    }

    pub fn big_and<I: IntoIterator<Item = FOFormula>>(items: I) -> Option<Self> {
        let mut iter = items.into_iter();
        let first = iter.next()?;
        Some(iter.fold(first, FOFormula::and))
    }

    pub fn big_or<I: IntoIterator<Item = FOFormula>>(items: I) -> Option<Self> {
        let mut iter = items.into_iter();
        let first = iter.next()?;
        Some(iter.fold(first, FOFormula::or))
    }

    pub fn size(&self) -> usize {
        match self {
            FOFormula::Rel(..) | FOFormula::Equals(..) => 1,
            FOFormula::Not(f)
            | FOFormula::Forall(_, f)
            | FOFormula::Exists(_, f)
            | FOFormula::CountGe(_, _, f)
            | FOFormula::CountLe(_, _, f) => 1 + f.size(),
            FOFormula::And(a, b) | FOFormula::Or(a, b) | FOFormula::Implies(a, b) => {
                1 + a.size() + b.size()
            }
            FOFormula::Tc(n) => 1 + n.body.size(),
            FOFormula::Lfp(n) => 1 + n.body.size(),
        }
    }

    /// Free individual variables.
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut BTreeSet::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut BTreeSet<String>, out: &mut BTreeSet<String>) {
        let mut visit = |v: &String, bound: &BTreeSet<String>, out: &mut BTreeSet<String>| {
            if !bound.contains(v) {
                out.insert(v.clone());
            }
        };
        match self {
            FOFormula::Rel(_, args) => {
                for a in args {
                    visit(a, bound, out);
                }
            }
            FOFormula::Equals(a, b) => {
                visit(a, bound, out);
                visit(b, bound, out);
            }
            FOFormula::Not(f) => f.collect_free(bound, out),
            FOFormula::And(a, b) | FOFormula::Or(a, b) | FOFormula::Implies(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            FOFormula::Forall(v, f)
            | FOFormula::Exists(v, f)
            | FOFormula::CountGe(_, v, f)
            | FOFormula::CountLe(_, v, f) => {
                let fresh = bound.insert(v.clone());
                f.collect_free(bound, out);
                if fresh {
                    bound.remove(v);
                }
            }
            FOFormula::Tc(n) => {
                visit(&n.s, bound, out);
                visit(&n.t, bound, out);
                let fx = bound.insert(n.x.clone());
                let fy = bound.insert(n.y.clone());
                n.body.collect_free(bound, out);
                if fx {
                    bound.remove(&n.x);
                }
                if fy {
                    bound.remove(&n.y);
                }
            }
            FOFormula::Lfp(n) => {
                visit(&n.arg, bound, out);
                let fx = bound.insert(n.x.clone());
                n.body.collect_free(bound, out);
                if fx {
                    bound.remove(&n.x);
                }
            }
        }
    }

    /// Relation names with the arities they are used at, excluding
    /// LFP-bound set variables.
    pub fn relations(&self) -> BTreeSet<(String, usize)> {
        let mut out = BTreeSet::new();
        self.collect_relations(&mut BTreeSet::new(), &mut out);
        out
    }

    fn collect_relations(
        &self,
        set_vars: &mut BTreeSet<String>,
        out: &mut BTreeSet<(String, usize)>,
    ) {
        match self {
            FOFormula::Rel(name, args) => {
                if !(args.len() == 1 && set_vars.contains(name)) {
                    out.insert((name.clone(), args.len()));
                }
            }
            FOFormula::Lfp(n) => {
                let fresh = set_vars.insert(n.set_var.clone());
                n.body.collect_relations(set_vars, out);
                if fresh {
                    set_vars.remove(&n.set_var);
                }
            }
            FOFormula::Tc(n) => n.body.collect_relations(set_vars, out),
            _ => {
                for c in self.fo_children() {
                    c.collect_relations(set_vars, out);
                }
            }
        }
    }

    fn fo_children(&self) -> Vec<&FOFormula> {
        match self {
            FOFormula::Rel(..) | FOFormula::Equals(..) => vec![],
            FOFormula::Not(f)
            | FOFormula::Forall(_, f)
            | FOFormula::Exists(_, f)
            | FOFormula::CountGe(_, _, f)
            | FOFormula::CountLe(_, _, f) => vec![f],
            FOFormula::And(a, b) | FOFormula::Or(a, b) | FOFormula::Implies(a, b) => vec![a, b],
            FOFormula::Tc(n) => vec![&n.body],
            FOFormula::Lfp(n) => vec![&n.body],
        }
    }

    /// Checks that every LFP body is positive in its bound set variable and
    /// that no relation name is used at two different arities.
    pub fn validate(&self) -> Result<(), SyntaxError> {
        self.check_lfp_positivity()?;
        let mut arities: std::collections::BTreeMap<String, usize> = Default::default();
        for (name, arity) in self.relations() {
            if arity > 2 {
                return Err(SyntaxError::ArityMismatch {
                    rel: name,
                    expected: 2,
                    found: arity,
                });
            }
            if let Some(prev) = arities.insert(name.clone(), arity) {
                if prev != arity {
                    return Err(SyntaxError::ArityMismatch {
                        rel: name,
                        expected: prev,
                        found: arity,
                    });
                }
            }
        }
        Ok(())
    }

    fn check_lfp_positivity(&self) -> Result<(), SyntaxError> {
        fn walk(f: &FOFormula, var: Option<&str>, polarity: bool) -> Result<(), SyntaxError> {
            match f {
                FOFormula::Rel(name, args) => {
                    if let Some(v) = var {
                        if name == v && args.len() == 1 && !polarity {
                            return Err(SyntaxError::NonPositiveLfp(v.to_string()));
                        }
                    }
                    Ok(())
                }
                FOFormula::Equals(..) => Ok(()),
                FOFormula::Not(g) => walk(g, var, !polarity),
                FOFormula::And(a, b) | FOFormula::Or(a, b) => {
                    walk(a, var, polarity)?;
                    walk(b, var, polarity)
                }
                FOFormula::Implies(a, b) => {
                    walk(a, var, !polarity)?;
                    walk(b, var, polarity)
                }
                FOFormula::Forall(_, g) | FOFormula::Exists(_, g) => walk(g, var, polarity),
                // A counting quantifier is neither monotone nor antitone in
                // its body, so any occurrence of the fixed-point variable
                // below one is rejected.
                FOFormula::CountGe(_, _, g) | FOFormula::CountLe(_, _, g) => {
                    if let Some(v) = var {
                        if g.mentions_set_var(v) {
                            return Err(SyntaxError::NonPositiveLfp(v.to_string()));
                        }
                    }
                    walk(g, var, polarity)
                }
                FOFormula::Tc(n) => {
                    if let Some(v) = var {
                        if n.body.mentions_set_var(v) {
                            return Err(SyntaxError::NonPositiveLfp(v.to_string()));
                        }
                    }
                    walk(&n.body, var, polarity)
                }
                FOFormula::Lfp(n) => {
                    // Inner LFP shadows an outer variable of the same name.
                    if var == Some(n.set_var.as_str()) {
                        walk(&n.body, Some(&n.set_var), true)
                    } else {
                        walk(&n.body, var, polarity)?;
                        walk(&n.body, Some(&n.set_var), true)
                    }
                }
            }
        }
        walk(self, None, true)
    }

    fn mentions_set_var(&self, v: &str) -> bool {
        match self {
            FOFormula::Rel(name, args) => name == v && args.len() == 1,
            FOFormula::Lfp(n) if n.set_var == v => false,
            _ => self.fo_children().iter().any(|c| c.mentions_set_var(v)),
        }
    }
}

/// Relational/modal signature; names are unique within each category and a
/// name cannot be both a unary and a binary relation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    pub unary: BTreeSet<String>,
    pub binary: BTreeSet<String>,
    pub props: BTreeSet<String>,
    pub labels: BTreeSet<String>,
}

impl Signature {
    pub fn new(
        unary: impl IntoIterator<Item = String>,
        binary: impl IntoIterator<Item = String>,
        props: impl IntoIterator<Item = String>,
        labels: impl IntoIterator<Item = String>,
    ) -> Result<Self, SyntaxError> {
        let sig = Signature {
            unary: unary.into_iter().collect(),
            binary: binary.into_iter().collect(),
            props: props.into_iter().collect(),
            labels: labels.into_iter().collect(),
        };
        if let Some(dup) = sig.unary.intersection(&sig.binary).next() {
            return Err(SyntaxError::DuplicateName(dup.clone()));
        }
        if sig.labels.contains(UNIVERSAL_LABEL) || sig.binary.contains(UNIVERSAL_LABEL) {
            return Err(SyntaxError::DuplicateName(UNIVERSAL_LABEL.to_string()));
        }
        Ok(sig)
    }

    pub fn of_modal(f: &ModalFormula) -> Self {
        let mut labels = f.labels();
        labels.remove(UNIVERSAL_LABEL);
        Signature {
            unary: BTreeSet::new(),
            binary: BTreeSet::new(),
            props: f.props(),
            labels,
        }
    }

    pub fn of_fo(f: &FOFormula) -> Self {
        let mut sig = Signature::default();
        for (name, arity) in f.relations() {
            if arity == 1 {
                sig.unary.insert(name);
            } else {
                sig.binary.insert(name);
            }
        }
        sig
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modal_depth_counts_nesting() {
        // [a]([a]p -> p) -> [a]p
        let f = ModalFormula::implies(
            ModalFormula::bx(
                "a",
                ModalFormula::implies(
                    ModalFormula::bx("a", ModalFormula::prop("p")),
                    ModalFormula::prop("p"),
                ),
            ),
            ModalFormula::bx("a", ModalFormula::prop("p")),
        );
        assert_eq!(f.modal_depth(), 2);
    }

    #[test]
    fn free_vars_respect_binders() {
        let f = FOFormula::exists(
            "y",
            FOFormula::and(FOFormula::rel2("R", "x", "y"), FOFormula::rel1("P", "y")),
        );
        assert_eq!(
            f.free_vars().into_iter().collect::<Vec<_>>(),
            vec!["x".to_string()]
        );
    }

    #[test]
    fn lfp_positivity() {
        let pos = FOFormula::lfp(
            "X",
            "x",
            FOFormula::or(
                FOFormula::rel1("P", "x"),
                FOFormula::exists(
                    "y",
                    FOFormula::and(FOFormula::rel2("R", "y", "x"), FOFormula::rel1("X", "y")),
                ),
            ),
            "s",
        );
        assert!(pos.validate().is_ok());
        let neg = FOFormula::lfp("X", "x", FOFormula::not(FOFormula::rel1("X", "x")), "s");
        assert!(matches!(
            neg.validate(),
            Err(SyntaxError::NonPositiveLfp(_))
        ));
        // X on the left of an implication is a negative occurrence.
        let neg2 = FOFormula::lfp(
            "X",
            "x",
            FOFormula::implies(FOFormula::rel1("X", "x"), FOFormula::rel1("P", "x")),
            "s",
        );
        assert!(neg2.validate().is_err());
    }

    #[test]
    fn arity_conflicts_detected() {
        let f = FOFormula::and(FOFormula::rel1("R", "x"), FOFormula::rel2("R", "x", "y"));
        assert!(matches!(
            f.validate(),
            Err(SyntaxError::ArityMismatch { .. })
        ));
    }

    #[test]
    fn signature_rejects_reserved_label() {
        assert!(Signature::new([], [], [], ["U".to_string()]).is_err());
    }
}
