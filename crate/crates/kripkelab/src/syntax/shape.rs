//! Syntactic fragment recognizers. Each check accepts exactly the formulas
//! literally generated by the corresponding grammar; no equivalence
//! reasoning happens here. The modal checks run on the negation normal
//! form of their input, the first-order checks on the raw tree.

use super::transform::nnf;
use super::{FOFormula, ModalFormula, SyntaxError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShapeKind {
    /// NNF with no negated occurrence of the designated proposition.
    Positive,
    /// NNF containing no diamond.
    BoxOnlyNnf,
    /// Disjunctions of terms from `t := p&f | f&<a>t` with `f` p-free.
    CaGrammar,
    /// NNF where the designated proposition never sits under a box.
    Continuous,
    /// Positive first-order sentences with bounded universals allowed.
    PSentence,
    /// Literals closed under and/or, bounded quantifiers, and free
    /// universal quantification.
    ExistsBounded,
    /// All quantifiers guarded one relational step in either direction.
    TwoWayRestricted,
}

impl ShapeKind {
    pub fn name(&self) -> &'static str {
        match self {
            ShapeKind::Positive => "positive",
            ShapeKind::BoxOnlyNnf => "box_only_nnf",
            ShapeKind::CaGrammar => "ca_grammar",
            ShapeKind::Continuous => "continuous",
            ShapeKind::PSentence => "p_sentence",
            ShapeKind::ExistsBounded => "exists_bounded",
            ShapeKind::TwoWayRestricted => "two_way_restricted",
        }
    }

    pub fn is_modal(&self) -> bool {
        matches!(
            self,
            ShapeKind::Positive
                | ShapeKind::BoxOnlyNnf
                | ShapeKind::CaGrammar
                | ShapeKind::Continuous
        )
    }

    pub fn needs_prop(&self) -> bool {
        matches!(
            self,
            ShapeKind::Positive | ShapeKind::CaGrammar | ShapeKind::Continuous
        )
    }
}

impl std::str::FromStr for ShapeKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "positive" => ShapeKind::Positive,
            "box_only_nnf" | "box-only" => ShapeKind::BoxOnlyNnf,
            "ca_grammar" | "ca" => ShapeKind::CaGrammar,
            "continuous" => ShapeKind::Continuous,
            "p_sentence" | "p-sentence" => ShapeKind::PSentence,
            "exists_bounded" | "ebounded" => ShapeKind::ExistsBounded,
            "two_way_restricted" | "two-way" => ShapeKind::TwoWayRestricted,
            other => return Err(format!("unknown shape kind '{other}'")),
        })
    }
}

/// A borrowed formula of either language, for kind dispatch.
#[derive(Clone, Copy, Debug)]
pub enum FormulaRef<'a> {
    Modal(&'a ModalFormula),
    Fo(&'a FOFormula),
}

pub fn shape_check(
    kind: ShapeKind,
    formula: FormulaRef,
    p: Option<&str>,
) -> Result<bool, SyntaxError> {
    let p = if kind.needs_prop() {
        Some(p.ok_or_else(|| SyntaxError::MissingShapeVar(kind.name().into()))?)
    } else {
        None
    };
    match (kind, formula) {
        (ShapeKind::Positive, FormulaRef::Modal(f)) => Ok(is_positive_in(f, p.unwrap())),
        (ShapeKind::BoxOnlyNnf, FormulaRef::Modal(f)) => Ok(is_box_only_nnf(f)),
        (ShapeKind::CaGrammar, FormulaRef::Modal(f)) => Ok(is_ca_grammar(f, p.unwrap())),
        (ShapeKind::Continuous, FormulaRef::Modal(f)) => Ok(is_continuous_shape(f, p.unwrap())),
        (ShapeKind::PSentence, FormulaRef::Fo(f)) => Ok(is_p_sentence(f)),
        (ShapeKind::ExistsBounded, FormulaRef::Fo(f)) => Ok(is_exists_bounded(f)),
        (ShapeKind::TwoWayRestricted, FormulaRef::Fo(f)) => Ok(is_two_way_restricted(f)),
        (kind, _) => Err(SyntaxError::ShapeClassMismatch {
            kind: kind.name().into(),
            expected: if kind.is_modal() { "modal" } else { "first-order" },
        }),
    }
}

/// No negated occurrence of `p` after conversion to NNF.
pub fn is_positive_in(f: &ModalFormula, p: &str) -> bool {
    fn no_negated(f: &ModalFormula, p: &str) -> bool {
        match f {
            ModalFormula::Not(g) => !matches!(&**g, ModalFormula::Prop(q) if q == p),
            _ => true,
        }
    }
    fn walk(f: &ModalFormula, p: &str) -> bool {
        no_negated(f, p) && f.children().iter().all(|c| walk(c, p))
    }
    walk(&nnf(f), p)
}

/// No diamond after conversion to NNF.
pub fn is_box_only_nnf(f: &ModalFormula) -> bool {
    fn walk(f: &ModalFormula) -> bool {
        match f {
            ModalFormula::Diamond(..) => false,
            _ => f.children().iter().all(|c| walk(c)),
        }
    }
    walk(&nnf(f))
}

/// Finite disjunction of grammar terms `t := p&f | f&<a>t` with `f`
/// p-free, checked on the NNF.
pub fn is_ca_grammar(f: &ModalFormula, p: &str) -> bool {
    fn term(f: &ModalFormula, p: &str) -> bool {
        match f {
            ModalFormula::And(l, r) => {
                (matches!(&**l, ModalFormula::Prop(q) if q == p) && !r.contains_prop(p))
                    || (!l.contains_prop(p)
                        && matches!(&**r, ModalFormula::Diamond(_, inner) if term(inner, p)))
            }
            _ => false,
        }
    }
    fn disjuncts<'a>(f: &'a ModalFormula, out: &mut Vec<&'a ModalFormula>) {
        match f {
            ModalFormula::Or(a, b) => {
                disjuncts(a, out);
                disjuncts(b, out);
            }
            other => out.push(other),
        }
    }
    let n = nnf(f);
    let mut parts = Vec::new();
    disjuncts(&n, &mut parts);
    parts.iter().all(|d| term(d, p))
}

/// NNF in which `p` occurs neither negated nor inside the scope of a box.
pub fn is_continuous_shape(f: &ModalFormula, p: &str) -> bool {
    fn walk(f: &ModalFormula, p: &str) -> bool {
        match f {
            ModalFormula::Not(g) => !matches!(&**g, ModalFormula::Prop(q) if q == p),
            ModalFormula::Box(_, g) => !g.contains_prop(p),
            _ => f.children().iter().all(|c| walk(c, p)),
        }
    }
    walk(&nnf(f), p)
}

/// Guard pattern `R(y,x)` with the bound variable in second position.
fn forward_guard<'a>(g: &'a FOFormula, bound: &str) -> Option<&'a str> {
    match g {
        FOFormula::Rel(_, args) if args.len() == 2 && args[1] == bound && args[0] != bound => {
            Some(&args[0])
        }
        _ => None,
    }
}

/// Guard pattern `R(y,x)` or `R(x,y)` around the bound variable `x`.
fn either_guard(g: &FOFormula, bound: &str) -> bool {
    match g {
        FOFormula::Rel(_, args) if args.len() == 2 => {
            (args[0] == bound) != (args[1] == bound)
        }
        _ => false,
    }
}

fn p_formula(f: &FOFormula) -> bool {
    match f {
        FOFormula::Rel(..) | FOFormula::Equals(..) => true,
        FOFormula::And(a, b) | FOFormula::Or(a, b) => p_formula(a) && p_formula(b),
        FOFormula::Exists(_, g) => p_formula(g),
        FOFormula::Forall(v, g) => match &**g {
            // The restricted form A x.(R(y,x) -> ...) is allowed even
            // though bare implication is not.
            FOFormula::Implies(guard, body) if forward_guard(guard, v).is_some() => {
                p_formula(body)
            }
            _ => p_formula(g),
        },
        _ => false,
    }
}

/// Positive first-order sentence built with and/or, unrestricted
/// quantifiers, and bounded universals `A x.(R(y,x) -> ...)`.
pub fn is_p_sentence(f: &FOFormula) -> bool {
    f.free_vars().is_empty() && p_formula(f)
}

fn literal(f: &FOFormula) -> bool {
    match f {
        FOFormula::Rel(..) | FOFormula::Equals(..) => true,
        FOFormula::Not(g) => matches!(&**g, FOFormula::Rel(..) | FOFormula::Equals(..)),
        _ => false,
    }
}

fn eb_formula(f: &FOFormula) -> bool {
    if literal(f) {
        return true;
    }
    match f {
        FOFormula::And(a, b) | FOFormula::Or(a, b) => eb_formula(a) && eb_formula(b),
        FOFormula::Exists(v, g) => match &**g {
            FOFormula::And(guard, body) if forward_guard(guard, v).is_some() => eb_formula(body),
            _ => false,
        },
        FOFormula::Forall(v, g) => match &**g {
            FOFormula::Implies(guard, body) if forward_guard(guard, v).is_some() => {
                eb_formula(body)
            }
            // Unbounded universal quantification is allowed.
            _ => eb_formula(g),
        },
        _ => false,
    }
}

/// The exists-bounded fragment: literals, and/or, bounded quantifiers
/// `E x.(R(y,x) & ...)` / `A x.(R(y,x) -> ...)`, plus free universals.
pub fn is_exists_bounded(f: &FOFormula) -> bool {
    eb_formula(f)
}

fn twr_formula(f: &FOFormula) -> bool {
    match f {
        FOFormula::Rel(..) | FOFormula::Equals(..) => true,
        FOFormula::Not(g) => twr_formula(g),
        FOFormula::And(a, b) | FOFormula::Or(a, b) | FOFormula::Implies(a, b) => {
            twr_formula(a) && twr_formula(b)
        }
        FOFormula::Exists(v, g) => match &**g {
            FOFormula::And(guard, body) if either_guard(guard, v) => twr_formula(body),
            _ => false,
        },
        FOFormula::Forall(v, g) => match &**g {
            FOFormula::Implies(guard, body) if either_guard(guard, v) => twr_formula(body),
            _ => false,
        },
        _ => false,
    }
}

/// Two-way restricted formulas: every quantifier steps one relational edge
/// forwards or backwards from an already-bound variable.
pub fn is_two_way_restricted(f: &FOFormula) -> bool {
    twr_formula(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_fo, parse_modal};

    fn m(s: &str) -> ModalFormula {
        parse_modal(s).unwrap()
    }

    fn fo(s: &str) -> FOFormula {
        parse_fo(s).unwrap()
    }

    #[test]
    fn positive_examples() {
        assert!(is_positive_in(&m("<a>p | [a](q -> p)"), "p"));
        assert!(!is_positive_in(&m("~p"), "p"));
        // q -> p negates q, not p
        assert!(!is_positive_in(&m("<a>p | [a](q -> p)"), "q"));
    }

    #[test]
    fn box_only_examples() {
        assert!(!is_box_only_nnf(&m("<a>p")));
        assert!(is_box_only_nnf(&m("[a]p & ~q")));
        // ~<a>p normalizes to [a]~p
        assert!(is_box_only_nnf(&m("~<a>p")));
        // ~[a]p normalizes to <a>~p
        assert!(!is_box_only_nnf(&m("~[a]p")));
    }

    #[test]
    fn ca_grammar_examples() {
        assert!(is_ca_grammar(&m("p & true"), "p"));
        assert!(is_ca_grammar(&m("q & <a>(p & ~q)"), "p"));
        assert!(is_ca_grammar(&m("(p & true) | (q & <a>(p & true))"), "p"));
        // bare p is not a grammar term
        assert!(!is_ca_grammar(&m("p"), "p"));
        // p on the right of the conjunction is not the literal base case
        assert!(!is_ca_grammar(&m("true & p"), "p"));
        // p may not occur in the side formula
        assert!(!is_ca_grammar(&m("p & <a>(p & true)"), "p"));
        assert!(!is_ca_grammar(&m("[a]p"), "p"));
    }

    #[test]
    fn continuous_examples() {
        assert!(is_continuous_shape(&m("<a>p | (q & p)"), "p"));
        assert!(!is_continuous_shape(&m("[a]p"), "p"));
        assert!(!is_continuous_shape(&m("~p"), "p"));
        // box over p-free body is fine
        assert!(is_continuous_shape(&m("[a]q & <a>p"), "p"));
    }

    #[test]
    fn p_sentence_examples() {
        assert!(is_p_sentence(&fo("A x. E y. R(x,y)")));
        assert!(is_p_sentence(&fo("A x.(R(x,x) -> E y. R(x,y))")));
        assert!(!is_p_sentence(&fo("A x. !R(x,x)")));
        // free variable: not a sentence
        assert!(!is_p_sentence(&fo("R(x,x)")));
    }

    #[test]
    fn exists_bounded_examples() {
        assert!(is_exists_bounded(&fo("A x. E y.(R(x,y) & !R(y,y))")));
        assert!(!is_exists_bounded(&fo("E y. R(y,y)")));
        // backwards guard not allowed in this fragment
        assert!(!is_exists_bounded(&fo("A x. E y.(R(y,x) & R(y,y))")));
    }

    #[test]
    fn two_way_examples() {
        assert!(is_two_way_restricted(&fo("A y.(R(z,y) -> P(y))")));
        assert!(is_two_way_restricted(&fo("E y.(R(y,z) & P(y))")));
        assert!(!is_two_way_restricted(&fo("A y. P(y)")));
    }

    #[test]
    fn dispatch_checks_classes() {
        let f = m("p");
        assert!(matches!(
            shape_check(ShapeKind::PSentence, FormulaRef::Modal(&f), None),
            Err(SyntaxError::ShapeClassMismatch { .. })
        ));
        assert!(matches!(
            shape_check(ShapeKind::Positive, FormulaRef::Modal(&f), None),
            Err(SyntaxError::MissingShapeVar(_))
        ));
    }
}
