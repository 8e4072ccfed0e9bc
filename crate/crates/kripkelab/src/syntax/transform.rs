//! Purely syntactic transformations on formulas: negation normal form,
//! substitution, relativization, and the standard translation into
//! first-order logic.

use super::{FOFormula, ModalFormula, UNIVERSAL_LABEL};

/// Negation normal form: eliminates `->`/`<->` and pushes negation down to
/// literals, using the box/diamond duality.
pub fn nnf(f: &ModalFormula) -> ModalFormula {
    match f {
        ModalFormula::True | ModalFormula::False | ModalFormula::Prop(_) => f.clone(),
        ModalFormula::And(a, b) => ModalFormula::and(nnf(a), nnf(b)),
        ModalFormula::Or(a, b) => ModalFormula::or(nnf(a), nnf(b)),
        ModalFormula::Implies(a, b) => ModalFormula::or(nnf_neg(a), nnf(b)),
        ModalFormula::Iff(a, b) => ModalFormula::or(
            ModalFormula::and(nnf(a), nnf(b)),
            ModalFormula::and(nnf_neg(a), nnf_neg(b)),
        ),
        ModalFormula::Diamond(l, g) => ModalFormula::diamond(l.clone(), nnf(g)),
        ModalFormula::Box(l, g) => ModalFormula::bx(l.clone(), nnf(g)),
        ModalFormula::Not(g) => nnf_neg(g),
    }
}

fn nnf_neg(f: &ModalFormula) -> ModalFormula {
    match f {
        ModalFormula::True => ModalFormula::False,
        ModalFormula::False => ModalFormula::True,
        ModalFormula::Prop(_) => ModalFormula::not(f.clone()),
        ModalFormula::Not(g) => nnf(g),
        ModalFormula::And(a, b) => ModalFormula::or(nnf_neg(a), nnf_neg(b)),
        ModalFormula::Or(a, b) => ModalFormula::and(nnf_neg(a), nnf_neg(b)),
        ModalFormula::Implies(a, b) => ModalFormula::and(nnf(a), nnf_neg(b)),
        ModalFormula::Iff(a, b) => ModalFormula::or(
            ModalFormula::and(nnf(a), nnf_neg(b)),
            ModalFormula::and(nnf_neg(a), nnf(b)),
        ),
        ModalFormula::Diamond(l, g) => ModalFormula::bx(l.clone(), nnf_neg(g)),
        ModalFormula::Box(l, g) => ModalFormula::diamond(l.clone(), nnf_neg(g)),
    }
}

/// True when `f` is in negation normal form (negation only on
/// propositions, no implications).
pub fn is_nnf(f: &ModalFormula) -> bool {
    match f {
        ModalFormula::Not(g) => matches!(**g, ModalFormula::Prop(_)),
        ModalFormula::Implies(..) | ModalFormula::Iff(..) => false,
        _ => f.children().iter().all(|c| is_nnf(c)),
    }
}

/// Replaces every occurrence of the proposition `p` by `repl`. Substitution
/// is propositional, so variable capture cannot occur.
pub fn substitute(f: &ModalFormula, p: &str, repl: &ModalFormula) -> ModalFormula {
    match f {
        ModalFormula::Prop(q) if q == p => repl.clone(),
        ModalFormula::True | ModalFormula::False | ModalFormula::Prop(_) => f.clone(),
        ModalFormula::Not(g) => ModalFormula::not(substitute(g, p, repl)),
        ModalFormula::And(a, b) => {
            ModalFormula::and(substitute(a, p, repl), substitute(b, p, repl))
        }
        ModalFormula::Or(a, b) => ModalFormula::or(substitute(a, p, repl), substitute(b, p, repl)),
        ModalFormula::Implies(a, b) => {
            ModalFormula::implies(substitute(a, p, repl), substitute(b, p, repl))
        }
        ModalFormula::Iff(a, b) => {
            ModalFormula::iff(substitute(a, p, repl), substitute(b, p, repl))
        }
        ModalFormula::Diamond(l, g) => ModalFormula::diamond(l.clone(), substitute(g, p, repl)),
        ModalFormula::Box(l, g) => ModalFormula::bx(l.clone(), substitute(g, p, repl)),
    }
}

/// Rewrites implications and bi-implications away, leaving a formula over
/// `~ & | <> []` only. Unlike [`nnf`] this keeps negations where they are.
pub fn eliminate_implications(f: &ModalFormula) -> ModalFormula {
    match f {
        ModalFormula::True | ModalFormula::False | ModalFormula::Prop(_) => f.clone(),
        ModalFormula::Not(g) => ModalFormula::not(eliminate_implications(g)),
        ModalFormula::And(a, b) => {
            ModalFormula::and(eliminate_implications(a), eliminate_implications(b))
        }
        ModalFormula::Or(a, b) => {
            ModalFormula::or(eliminate_implications(a), eliminate_implications(b))
        }
        ModalFormula::Implies(a, b) => ModalFormula::or(
            ModalFormula::not(eliminate_implications(a)),
            eliminate_implications(b),
        ),
        ModalFormula::Iff(a, b) => {
            let (ea, eb) = (eliminate_implications(a), eliminate_implications(b));
            ModalFormula::or(
                ModalFormula::and(ea.clone(), eb.clone()),
                ModalFormula::and(ModalFormula::not(ea), ModalFormula::not(eb)),
            )
        }
        ModalFormula::Diamond(l, g) => {
            ModalFormula::diamond(l.clone(), eliminate_implications(g))
        }
        ModalFormula::Box(l, g) => ModalFormula::bx(l.clone(), eliminate_implications(g)),
    }
}

/// Relativizes `f` to the proposition `p`: every `<a>G` becomes
/// `<a>(p & G)` and every `[a]G` becomes `[a](p -> G)`. The input is first
/// normalized to the `~ & | <> []` fragment.
pub fn relativize_modal(f: &ModalFormula, p: &str) -> ModalFormula {
    fn go(f: &ModalFormula, p: &str) -> ModalFormula {
        match f {
            ModalFormula::True | ModalFormula::False | ModalFormula::Prop(_) => f.clone(),
            ModalFormula::Not(g) => ModalFormula::not(go(g, p)),
            ModalFormula::And(a, b) => ModalFormula::and(go(a, p), go(b, p)),
            ModalFormula::Or(a, b) => ModalFormula::or(go(a, p), go(b, p)),
            ModalFormula::Diamond(l, g) => ModalFormula::diamond(
                l.clone(),
                ModalFormula::and(ModalFormula::prop(p), go(g, p)),
            ),
            ModalFormula::Box(l, g) => ModalFormula::bx(
                l.clone(),
                ModalFormula::implies(ModalFormula::prop(p), go(g, p)),
            ),
            ModalFormula::Implies(..) | ModalFormula::Iff(..) => {
                unreachable!("implications eliminated before relativization")
            }
        }
    }
    go(&eliminate_implications(f), p)
}

/// Relativizes all quantifiers in `f` by the unary predicate `pred`:
/// `E x. G` becomes `E x.(P(x) & G)` and `A x. G` becomes
/// `A x.(P(x) -> G)`. Counting quantifiers guard with a conjunction; TC and
/// LFP bodies are guarded so the fixed points stay inside the `P`-part.
pub fn relativize_fo(f: &FOFormula, pred: &str) -> FOFormula {
    let guard = |v: &str| FOFormula::rel1(pred, v);
    match f {
        FOFormula::Rel(..) | FOFormula::Equals(..) => f.clone(),
        FOFormula::Not(g) => FOFormula::not(relativize_fo(g, pred)),
        FOFormula::And(a, b) => {
            FOFormula::and(relativize_fo(a, pred), relativize_fo(b, pred))
        }
        FOFormula::Or(a, b) => FOFormula::or(relativize_fo(a, pred), relativize_fo(b, pred)),
        FOFormula::Implies(a, b) => {
            FOFormula::implies(relativize_fo(a, pred), relativize_fo(b, pred))
        }
        FOFormula::Forall(v, g) => FOFormula::forall(
            v.clone(),
            FOFormula::implies(guard(v), relativize_fo(g, pred)),
        ),
        FOFormula::Exists(v, g) => FOFormula::exists(
            v.clone(),
            FOFormula::and(guard(v), relativize_fo(g, pred)),
        ),
        FOFormula::CountGe(k, v, g) => FOFormula::count_ge(
            *k,
            v.clone(),
            FOFormula::and(guard(v), relativize_fo(g, pred)),
        ),
        FOFormula::CountLe(k, v, g) => FOFormula::count_le(
            *k,
            v.clone(),
            FOFormula::and(guard(v), relativize_fo(g, pred)),
        ),
        FOFormula::Tc(n) => FOFormula::tc(
            n.x.clone(),
            n.y.clone(),
            FOFormula::and(
                FOFormula::and(guard(&n.x), guard(&n.y)),
                relativize_fo(&n.body, pred),
            ),
            n.s.clone(),
            n.t.clone(),
        ),
        FOFormula::Lfp(n) => FOFormula::lfp(
            n.set_var.clone(),
            n.x.clone(),
            FOFormula::and(guard(&n.x), relativize_fo(&n.body, pred)),
            n.arg.clone(),
        ),
    }
}

/// Standard translation of a modal formula into first-order logic with one
/// free variable `x`. Propositions become unary predicates and modality
/// labels become binary relations, both with their names unchanged; the
/// universal modality translates into an unguarded quantifier.
pub fn standard_translation(f: &ModalFormula, x: &str) -> FOFormula {
    let mut gen = FreshVars::avoiding(x);
    st(f, x, &mut gen)
}

struct FreshVars {
    counter: usize,
    avoid: String,
}

impl FreshVars {
    fn avoiding(x: &str) -> Self {
        FreshVars {
            counter: 0,
            avoid: x.to_string(),
        }
    }

    fn fresh(&mut self) -> String {
        loop {
            self.counter += 1;
            let v = format!("v{}", self.counter);
            if v != self.avoid {
                return v;
            }
        }
    }
}

fn st(f: &ModalFormula, x: &str, gen: &mut FreshVars) -> FOFormula {
    match f {
        ModalFormula::True => FOFormula::eq(x, x),
        ModalFormula::False => FOFormula::not(FOFormula::eq(x, x)),
        ModalFormula::Prop(p) => FOFormula::rel1(p.clone(), x),
        ModalFormula::Not(g) => FOFormula::not(st(g, x, gen)),
        ModalFormula::And(a, b) => FOFormula::and(st(a, x, gen), st(b, x, gen)),
        ModalFormula::Or(a, b) => FOFormula::or(st(a, x, gen), st(b, x, gen)),
        ModalFormula::Implies(a, b) => FOFormula::implies(st(a, x, gen), st(b, x, gen)),
        ModalFormula::Iff(a, b) => {
            let (fa, fb) = (st(a, x, gen), st(b, x, gen));
            FOFormula::and(
                FOFormula::implies(fa.clone(), fb.clone()),
                FOFormula::implies(fb, fa),
            )
        }
        ModalFormula::Diamond(l, g) => {
            let y = gen.fresh();
            let body = st(g, &y, gen);
            if l == UNIVERSAL_LABEL {
                FOFormula::exists(y, body)
            } else {
                FOFormula::exists(
                    y.clone(),
                    FOFormula::and(FOFormula::rel2(l.clone(), x, y), body),
                )
            }
        }
        ModalFormula::Box(l, g) => {
            let y = gen.fresh();
            let body = st(g, &y, gen);
            if l == UNIVERSAL_LABEL {
                FOFormula::forall(y, body)
            } else {
                FOFormula::forall(
                    y.clone(),
                    FOFormula::implies(FOFormula::rel2(l.clone(), x, y), body),
                )
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_fo, parse_modal};

    #[test]
    fn nnf_example() {
        // ~([a]p & q)  ==>  <a>~p | ~q
        let f = parse_modal("~([a]p & q)").unwrap();
        assert_eq!(nnf(&f), parse_modal("<a>~p | ~q").unwrap());
        assert!(is_nnf(&nnf(&f)));
    }

    #[test]
    fn nnf_of_iff() {
        let f = parse_modal("~(p <-> q)").unwrap();
        let n = nnf(&f);
        assert!(is_nnf(&n));
        assert_eq!(n, parse_modal("(p & ~q) | (~p & q)").unwrap());
    }

    #[test]
    fn substitute_example() {
        let f = parse_modal("<a>p & q").unwrap();
        let repl = parse_modal("p | r").unwrap();
        assert_eq!(
            substitute(&f, "p", &repl),
            parse_modal("<a>(p | r) & q").unwrap()
        );
    }

    #[test]
    fn relativize_modal_example() {
        let f = parse_modal("<a>p").unwrap();
        assert_eq!(relativize_modal(&f, "s"), parse_modal("<a>(s & p)").unwrap());
        let g = parse_modal("[a]p").unwrap();
        assert_eq!(
            relativize_modal(&g, "s"),
            parse_modal("[a](s -> p)").unwrap()
        );
    }

    #[test]
    fn relativize_fo_example() {
        let f = parse_fo("A x. E y. R(x,y)").unwrap();
        assert_eq!(
            relativize_fo(&f, "P"),
            parse_fo("A x.(P(x) -> E y.(P(y) & R(x,y)))").unwrap()
        );
    }

    #[test]
    fn st_prop_and_diamond() {
        assert_eq!(
            standard_translation(&parse_modal("p").unwrap(), "x"),
            parse_fo("p(x)").unwrap()
        );
        assert_eq!(
            standard_translation(&parse_modal("<a>p").unwrap(), "x"),
            parse_fo("E v1.(a(x,v1) & p(v1))").unwrap()
        );
    }

    #[test]
    fn st_universal_modality_is_unguarded() {
        let f = standard_translation(&parse_modal("<U>p").unwrap(), "x");
        assert_eq!(f, parse_fo("E v1. p(v1)").unwrap());
    }
}
