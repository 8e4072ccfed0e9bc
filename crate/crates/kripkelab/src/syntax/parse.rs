//! Recursive-descent parsers for the modal and first-order grammars.
//!
//! Modal: `true false p ~F (F&G) (F|G) (F->G) (F<->G) <a>F [a]F`.
//! First-order: `R(x,y) P(x) x=y ! & | -> A x. E x. E>=k x. E<=k x.
//! TC[x,y]{F}(s,t) LFP[X,x]{F}(s)`.
//!
//! Parentheses may be omitted; precedence is `<->` < `->` < `|` < `&` <
//! unary, with `->`/`<->` associating to the right. Quantifier bodies
//! extend as far right as possible.

use super::lex::{lex, Cursor, Tok};
use super::{FOFormula, ModalFormula, SyntaxError};

const FO_RESERVED: &[&str] = &["A", "E", "TC", "LFP"];

pub fn parse_modal(text: &str) -> Result<ModalFormula, SyntaxError> {
    let toks = lex(text)?;
    let mut cur = Cursor::new(&toks);
    let f = modal_iff(&mut cur)?;
    if !cur.at_end() {
        return Err(cur.error("trailing input after formula"));
    }
    Ok(f)
}

pub fn parse_fo(text: &str) -> Result<FOFormula, SyntaxError> {
    let toks = lex(text)?;
    let mut cur = Cursor::new(&toks);
    let f = fo_implies(&mut cur)?;
    if !cur.at_end() {
        return Err(cur.error("trailing input after formula"));
    }
    f.validate()?;
    Ok(f)
}

pub(crate) fn modal_iff(cur: &mut Cursor) -> Result<ModalFormula, SyntaxError> {
    let lhs = modal_implies(cur)?;
    if cur.peek() == Some(&Tok::DArrow) {
        cur.next();
        let rhs = modal_iff(cur)?;
        Ok(ModalFormula::iff(lhs, rhs))
    } else {
        Ok(lhs)
    }
}

fn modal_implies(cur: &mut Cursor) -> Result<ModalFormula, SyntaxError> {
    let lhs = modal_or(cur)?;
    if cur.peek() == Some(&Tok::Arrow) {
        cur.next();
        let rhs = modal_implies(cur)?;
        Ok(ModalFormula::implies(lhs, rhs))
    } else {
        Ok(lhs)
    }
}

fn modal_or(cur: &mut Cursor) -> Result<ModalFormula, SyntaxError> {
    let mut lhs = modal_and(cur)?;
    while cur.peek() == Some(&Tok::Pipe) {
        cur.next();
        let rhs = modal_and(cur)?;
        lhs = ModalFormula::or(lhs, rhs);
    }
    Ok(lhs)
}

fn modal_and(cur: &mut Cursor) -> Result<ModalFormula, SyntaxError> {
    let mut lhs = modal_unary(cur)?;
    while cur.peek() == Some(&Tok::Amp) {
        cur.next();
        let rhs = modal_unary(cur)?;
        lhs = ModalFormula::and(lhs, rhs);
    }
    Ok(lhs)
}

fn modal_unary(cur: &mut Cursor) -> Result<ModalFormula, SyntaxError> {
    match cur.peek() {
        Some(Tok::Tilde) => {
            cur.next();
            Ok(ModalFormula::not(modal_unary(cur)?))
        }
        Some(Tok::Lt) => {
            cur.next();
            let label = cur.take_ident("modality label")?;
            cur.expect(Tok::Gt)?;
            Ok(ModalFormula::diamond(label, modal_unary(cur)?))
        }
        Some(Tok::LBracket) => {
            cur.next();
            let label = cur.take_ident("modality label")?;
            cur.expect(Tok::RBracket)?;
            Ok(ModalFormula::bx(label, modal_unary(cur)?))
        }
        Some(Tok::LParen) => {
            cur.next();
            let f = modal_iff(cur)?;
            cur.expect(Tok::RParen)?;
            Ok(f)
        }
        Some(Tok::Ident(s)) => {
            let f = match s.as_str() {
                "true" => ModalFormula::True,
                "false" => ModalFormula::False,
                name => ModalFormula::prop(name),
            };
            cur.next();
            Ok(f)
        }
        Some(t) => Err(cur.error(format!("expected modal formula, found '{t}'"))),
        None => Err(cur.error("expected modal formula, found end of input")),
    }
}

fn fo_implies(cur: &mut Cursor) -> Result<FOFormula, SyntaxError> {
    let lhs = fo_or(cur)?;
    if cur.peek() == Some(&Tok::Arrow) {
        cur.next();
        let rhs = fo_implies(cur)?;
        Ok(FOFormula::implies(lhs, rhs))
    } else {
        Ok(lhs)
    }
}

fn fo_or(cur: &mut Cursor) -> Result<FOFormula, SyntaxError> {
    let mut lhs = fo_and(cur)?;
    while cur.peek() == Some(&Tok::Pipe) {
        cur.next();
        let rhs = fo_and(cur)?;
        lhs = FOFormula::or(lhs, rhs);
    }
    Ok(lhs)
}

fn fo_and(cur: &mut Cursor) -> Result<FOFormula, SyntaxError> {
    let mut lhs = fo_unary(cur)?;
    while cur.peek() == Some(&Tok::Amp) {
        cur.next();
        let rhs = fo_unary(cur)?;
        lhs = FOFormula::and(lhs, rhs);
    }
    Ok(lhs)
}

fn fo_var(cur: &mut Cursor) -> Result<String, SyntaxError> {
    let v = cur.take_ident("variable")?;
    if FO_RESERVED.contains(&v.as_str()) {
        return Err(cur.error(format!("'{v}' is reserved and cannot name a variable")));
    }
    Ok(v)
}

fn fo_unary(cur: &mut Cursor) -> Result<FOFormula, SyntaxError> {
    match cur.peek() {
        Some(Tok::Bang) => {
            cur.next();
            Ok(FOFormula::not(fo_unary(cur)?))
        }
        Some(Tok::LParen) => {
            cur.next();
            let f = fo_implies(cur)?;
            cur.expect(Tok::RParen)?;
            Ok(f)
        }
        Some(Tok::Ident(s)) => match s.as_str() {
            "A" => {
                cur.next();
                let v = fo_var(cur)?;
                cur.expect(Tok::Dot)?;
                Ok(FOFormula::forall(v, fo_implies(cur)?))
            }
            "E" => {
                cur.next();
                match cur.peek() {
                    Some(Tok::Ge) | Some(Tok::Le) => {
                        let ge = cur.peek() == Some(&Tok::Ge);
                        cur.next();
                        let k = match cur.next() {
                            Some(sp) => match sp.tok {
                                Tok::Num(k) => k,
                                _ => return Err(cur.error("expected count after 'E>=' or 'E<='")),
                            },
                            None => return Err(cur.error("expected count after 'E>=' or 'E<='")),
                        };
                        let v = fo_var(cur)?;
                        cur.expect(Tok::Dot)?;
                        let body = fo_implies(cur)?;
                        Ok(if ge {
                            FOFormula::count_ge(k, v, body)
                        } else {
                            FOFormula::count_le(k, v, body)
                        })
                    }
                    _ => {
                        let v = fo_var(cur)?;
                        cur.expect(Tok::Dot)?;
                        Ok(FOFormula::exists(v, fo_implies(cur)?))
                    }
                }
            }
            "TC" => {
                cur.next();
                cur.expect(Tok::LBracket)?;
                let x = fo_var(cur)?;
                cur.expect(Tok::Comma)?;
                let y = fo_var(cur)?;
                cur.expect(Tok::RBracket)?;
                cur.expect(Tok::LBrace)?;
                let body = fo_implies(cur)?;
                cur.expect(Tok::RBrace)?;
                cur.expect(Tok::LParen)?;
                let s = fo_var(cur)?;
                cur.expect(Tok::Comma)?;
                let t = fo_var(cur)?;
                cur.expect(Tok::RParen)?;
                Ok(FOFormula::tc(x, y, body, s, t))
            }
            "LFP" => {
                cur.next();
                cur.expect(Tok::LBracket)?;
                let set_var = cur.take_ident("set variable")?;
                cur.expect(Tok::Comma)?;
                let x = fo_var(cur)?;
                cur.expect(Tok::RBracket)?;
                cur.expect(Tok::LBrace)?;
                let body = fo_implies(cur)?;
                cur.expect(Tok::RBrace)?;
                cur.expect(Tok::LParen)?;
                let s = fo_var(cur)?;
                cur.expect(Tok::RParen)?;
                Ok(FOFormula::lfp(set_var, x, body, s))
            }
            _ => {
                let name = cur.take_ident("identifier")?;
                match cur.peek() {
                    Some(Tok::LParen) => {
                        cur.next();
                        let mut args = vec![fo_var(cur)?];
                        while cur.peek() == Some(&Tok::Comma) {
                            cur.next();
                            args.push(fo_var(cur)?);
                        }
                        cur.expect(Tok::RParen)?;
                        if args.len() > 2 {
                            return Err(SyntaxError::ArityMismatch {
                                rel: name,
                                expected: 2,
                                found: args.len(),
                            });
                        }
                        Ok(FOFormula::Rel(name, args))
                    }
                    Some(Tok::Eq) => {
                        cur.next();
                        let rhs = fo_var(cur)?;
                        Ok(FOFormula::eq(name, rhs))
                    }
                    _ => Err(cur.error(format!(
                        "expected '(' or '=' after identifier '{name}'"
                    ))),
                }
            }
        },
        Some(t) => Err(cur.error(format!("expected formula, found '{t}'"))),
        None => Err(cur.error("expected formula, found end of input")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{FOFormula as F, ModalFormula as M};

    #[test]
    fn parses_modal_example() {
        let f = parse_modal("<a>p & [a]~p").unwrap();
        assert_eq!(
            f,
            M::and(
                M::diamond("a", M::prop("p")),
                M::bx("a", M::not(M::prop("p")))
            )
        );
    }

    #[test]
    fn modal_precedence() {
        let f = parse_modal("p & q -> r | s <-> t").unwrap();
        assert_eq!(
            f,
            M::iff(
                M::implies(
                    M::and(M::prop("p"), M::prop("q")),
                    M::or(M::prop("r"), M::prop("s"))
                ),
                M::prop("t")
            )
        );
    }

    #[test]
    fn parses_fo_example() {
        let f = parse_fo("A x. E y. R(x,y)").unwrap();
        assert_eq!(
            f,
            F::forall("x", F::exists("y", F::rel2("R", "x", "y")))
        );
    }

    #[test]
    fn parses_lfp_example() {
        let f = parse_fo("LFP[X,x]{P(x) | E y.(R(y,x) & X(y))}(s)").unwrap();
        match &f {
            F::Lfp(n) => {
                assert_eq!(n.set_var, "X");
                assert_eq!(n.arg, "s");
            }
            _ => panic!("expected LFP node"),
        }
        assert!(f.validate().is_ok());
    }

    #[test]
    fn rejects_non_positive_lfp() {
        let err = parse_fo("LFP[X,x]{!X(x)}(s)").unwrap_err();
        assert!(matches!(err, SyntaxError::NonPositiveLfp(_)));
    }

    #[test]
    fn counting_and_equality() {
        let f = parse_fo("E>=2 x. P(x,x) & !x=y").unwrap();
        assert_eq!(
            f,
            F::count_ge(
                2,
                "x",
                F::and(F::rel2("P", "x", "x"), F::not(F::eq("x", "y")))
            )
        );
    }

    #[test]
    fn comments_and_whitespace() {
        let f = parse_modal("  <a> p # trailing comment\n & q").unwrap();
        assert_eq!(f, M::and(M::diamond("a", M::prop("p")), M::prop("q")));
    }

    #[test]
    fn hash_names_rejected() {
        // '#' starts a comment, so the fresh-variable namespace cannot be
        // written down in the surface syntax.
        assert!(parse_modal("q#1").is_err());
    }

    #[test]
    fn syntax_error_has_position() {
        match parse_modal("p &") {
            Err(SyntaxError::Parse { line, col, .. }) => {
                assert_eq!(line, 1);
                assert!(col >= 3);
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn arity_mismatch_in_one_formula() {
        assert!(matches!(
            parse_fo("R(x) & R(x,y)"),
            Err(SyntaxError::ArityMismatch { .. })
        ));
    }
}
