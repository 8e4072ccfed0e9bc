//! Shared lexer for the modal, first-order, and program grammars.
//!
//! Whitespace-insensitive; `#` begins a comment running to end of line.
//! Identifiers match `[A-Za-z][A-Za-z0-9_]*`, which keeps the `name#k`
//! namespace used for machine-generated fresh variables unparseable.

use super::SyntaxError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Num(u32),
    LParen,
    RParen,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    Lt,
    Gt,
    Le,
    Ge,
    Arrow,
    DArrow,
    Tilde,
    Bang,
    Amp,
    Pipe,
    Eq,
    Comma,
    Dot,
    Question,
    Semi,
}

impl std::fmt::Display for Tok {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "{s}"),
            Tok::Num(n) => write!(f, "{n}"),
            Tok::LParen => write!(f, "("),
            Tok::RParen => write!(f, ")"),
            Tok::LBracket => write!(f, "["),
            Tok::RBracket => write!(f, "]"),
            Tok::LBrace => write!(f, "{{"),
            Tok::RBrace => write!(f, "}}"),
            Tok::Lt => write!(f, "<"),
            Tok::Gt => write!(f, ">"),
            Tok::Le => write!(f, "<="),
            Tok::Ge => write!(f, ">="),
            Tok::Arrow => write!(f, "->"),
            Tok::DArrow => write!(f, "<->"),
            Tok::Tilde => write!(f, "~"),
            Tok::Bang => write!(f, "!"),
            Tok::Amp => write!(f, "&"),
            Tok::Pipe => write!(f, "|"),
            Tok::Eq => write!(f, "="),
            Tok::Comma => write!(f, ","),
            Tok::Dot => write!(f, "."),
            Tok::Question => write!(f, "?"),
            Tok::Semi => write!(f, ";"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Spanned {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

pub fn lex(text: &str) -> Result<Vec<Spanned>, SyntaxError> {
    let mut out = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (tline, tcol) = (line, col);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>,
                        line: &mut usize,
                        col: &mut usize| {
            let c = chars.next().unwrap();
            if c == '\n' {
                *line += 1;
                *col = 1;
            } else {
                *col += 1;
            }
            c
        };
        if c.is_whitespace() {
            bump(&mut chars, &mut line, &mut col);
            continue;
        }
        if c == '#' {
            while let Some(&d) = chars.peek() {
                if d == '\n' {
                    break;
                }
                bump(&mut chars, &mut line, &mut col);
            }
            continue;
        }
        let tok = if c.is_ascii_alphabetic() {
            let mut s = String::new();
            while let Some(&d) = chars.peek() {
                if d.is_ascii_alphanumeric() || d == '_' {
                    s.push(bump(&mut chars, &mut line, &mut col));
                } else {
                    break;
                }
            }
            Tok::Ident(s)
        } else if c.is_ascii_digit() {
            let mut n: u32 = 0;
            while let Some(&d) = chars.peek() {
                if d.is_ascii_digit() {
                    bump(&mut chars, &mut line, &mut col);
                    n = n
                        .checked_mul(10)
                        .and_then(|m| m.checked_add(d as u32 - '0' as u32))
                        .ok_or_else(|| SyntaxError::Parse {
                            line: tline,
                            col: tcol,
                            msg: "number too large".into(),
                        })?;
                } else {
                    break;
                }
            }
            Tok::Num(n)
        } else {
            bump(&mut chars, &mut line, &mut col);
            match c {
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '[' => Tok::LBracket,
                ']' => Tok::RBracket,
                '{' => Tok::LBrace,
                '}' => Tok::RBrace,
                '~' => Tok::Tilde,
                '!' => Tok::Bang,
                '&' => Tok::Amp,
                '|' => Tok::Pipe,
                '=' => Tok::Eq,
                ',' => Tok::Comma,
                '.' => Tok::Dot,
                '?' => Tok::Question,
                ';' => Tok::Semi,
                '<' => match chars.peek() {
                    Some('-') => {
                        bump(&mut chars, &mut line, &mut col);
                        match chars.peek() {
                            Some('>') => {
                                bump(&mut chars, &mut line, &mut col);
                                Tok::DArrow
                            }
                            _ => {
                                return Err(SyntaxError::Parse {
                                    line: tline,
                                    col: tcol,
                                    msg: "expected '<->'".into(),
                                })
                            }
                        }
                    }
                    Some('=') => {
                        bump(&mut chars, &mut line, &mut col);
                        Tok::Le
                    }
                    _ => Tok::Lt,
                },
                '>' => match chars.peek() {
                    Some('=') => {
                        bump(&mut chars, &mut line, &mut col);
                        Tok::Ge
                    }
                    _ => Tok::Gt,
                },
                '-' => match chars.peek() {
                    Some('>') => {
                        bump(&mut chars, &mut line, &mut col);
                        Tok::Arrow
                    }
                    _ => {
                        return Err(SyntaxError::Parse {
                            line: tline,
                            col: tcol,
                            msg: "expected '->'".into(),
                        })
                    }
                },
                other => {
                    return Err(SyntaxError::Parse {
                        line: tline,
                        col: tcol,
                        msg: format!("unexpected character '{other}'"),
                    })
                }
            }
        };
        out.push(Spanned {
            tok,
            line: tline,
            col: tcol,
        });
    }
    Ok(out)
}

/// Cursor over a token stream with rollback, shared by all parsers.
pub struct Cursor<'a> {
    toks: &'a [Spanned],
    pub pos: usize,
}

impl<'a> Cursor<'a> {
    pub fn new(toks: &'a [Spanned]) -> Self {
        Cursor { toks, pos: 0 }
    }

    pub fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    pub fn next(&mut self) -> Option<&Spanned> {
        let t = self.toks.get(self.pos);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    pub fn error(&self, msg: impl Into<String>) -> SyntaxError {
        let (line, col) = self
            .toks
            .get(self.pos.min(self.toks.len().saturating_sub(1)))
            .map(|s| (s.line, s.col))
            .unwrap_or((1, 1));
        // Point just past the last token when at end of input.
        let (line, col) = if self.pos >= self.toks.len() {
            self.toks.last().map(|s| (s.line, s.col + 1)).unwrap_or((line, col))
        } else {
            (line, col)
        };
        SyntaxError::Parse {
            line,
            col,
            msg: msg.into(),
        }
    }

    pub fn expect(&mut self, tok: Tok) -> Result<(), SyntaxError> {
        match self.peek() {
            Some(t) if *t == tok => {
                self.pos += 1;
                Ok(())
            }
            Some(t) => Err(self.error(format!("expected '{tok}', found '{t}'"))),
            None => Err(self.error(format!("expected '{tok}', found end of input"))),
        }
    }

    pub fn take_ident(&mut self, what: &str) -> Result<String, SyntaxError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            Some(t) => Err(self.error(format!("expected {what}, found '{t}'"))),
            None => Err(self.error(format!("expected {what}, found end of input"))),
        }
    }
}
