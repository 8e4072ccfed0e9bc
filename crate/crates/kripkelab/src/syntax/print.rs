//! Printers. Binary connectives are always parenthesized, and quantified
//! left operands get an extra pair of parentheses (quantifier bodies are
//! parsed with maximal scope), so `parse(print(f))` is structurally the
//! identity.

use super::{FOFormula, ModalFormula};
use std::fmt;

impl fmt::Display for ModalFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModalFormula::True => write!(f, "true"),
            ModalFormula::False => write!(f, "false"),
            ModalFormula::Prop(p) => write!(f, "{p}"),
            ModalFormula::Not(g) => write!(f, "~{g}"),
            ModalFormula::And(a, b) => write!(f, "({a} & {b})"),
            ModalFormula::Or(a, b) => write!(f, "({a} | {b})"),
            ModalFormula::Implies(a, b) => write!(f, "({a} -> {b})"),
            ModalFormula::Iff(a, b) => write!(f, "({a} <-> {b})"),
            ModalFormula::Diamond(l, g) => write!(f, "<{l}>{g}"),
            ModalFormula::Box(l, g) => write!(f, "[{l}]{g}"),
        }
    }
}

/// True when the printed form of `f` ends with a greedily-scoped body, so
/// that a following connective would be captured by it.
fn greedy(f: &FOFormula) -> bool {
    match f {
        FOFormula::Forall(..)
        | FOFormula::Exists(..)
        | FOFormula::CountGe(..)
        | FOFormula::CountLe(..) => true,
        FOFormula::Not(g) => greedy(g),
        _ => false,
    }
}

struct Left<'a>(&'a FOFormula);

impl fmt::Display for Left<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if greedy(self.0) {
            write!(f, "({})", self.0)
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl fmt::Display for FOFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FOFormula::Rel(name, args) => {
                write!(f, "{name}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
            FOFormula::Equals(a, b) => write!(f, "{a}={b}"),
            FOFormula::Not(g) => write!(f, "!{g}"),
            FOFormula::And(a, b) => write!(f, "({} & {b})", Left(a)),
            FOFormula::Or(a, b) => write!(f, "({} | {b})", Left(a)),
            FOFormula::Implies(a, b) => write!(f, "({} -> {b})", Left(a)),
            FOFormula::Forall(v, g) => write!(f, "A {v}. {g}"),
            FOFormula::Exists(v, g) => write!(f, "E {v}. {g}"),
            FOFormula::CountGe(k, v, g) => write!(f, "E>={k} {v}. {g}"),
            FOFormula::CountLe(k, v, g) => write!(f, "E<={k} {v}. {g}"),
            FOFormula::Tc(n) => write!(
                f,
                "TC[{},{}]{{{}}}({},{})",
                n.x, n.y, n.body, n.s, n.t
            ),
            FOFormula::Lfp(n) => {
                write!(f, "LFP[{},{}]{{{}}}({})", n.set_var, n.x, n.body, n.arg)
            }
        }
    }
}
