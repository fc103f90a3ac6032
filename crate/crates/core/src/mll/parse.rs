//! Concrete syntax.
//!
//! ```text
//! program := term (':' type)?
//! term    := '\' binder '.' term | 'let' '(' x ',' y ')' '=' term 'in' term | app
//! binder  := x | x ':' type
//! app     := atom+ (lambda | let)?
//! atom    := x | '()' | '(' term ')' | '(' term ',' term ')' | '(' term ':' type ')'
//! type    := tensor ('-o' type)?
//! tensor  := tatom ('*' tatom)*
//! tatom   := 'B'n | 'I' | '1' | '(' type ')'
//! ```
//!
//! `λ`, `⊸`, `⊗` and subscript digits (`B₂`) are accepted as alternatives.
//! `#` starts a comment that runs to the end of the line.

use crate::error::{Error, Result};
use crate::linalg::MAX_DECODED_DIM;

use super::syntax::{Term, Type};

const MAX_DEPTH: usize = 200;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Lambda,
    Dot,
    LParen,
    RParen,
    Comma,
    Colon,
    Eq,
    Let,
    In,
    Lolli,
    Star,
    Ident(String),
    Num(String),
    Eof,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn is_subscript_digit(c: char) -> bool {
    ('₀'..='₉').contains(&c)
}

fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() && c != 'λ' || c == '_'
}

fn is_ident_continue(c: char) -> bool {
    (c.is_alphanumeric() && c != 'λ') || c == '_' || c == '\'' || is_subscript_digit(c)
}

fn lex(src: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let mut chars = src.chars().peekable();
    let (mut line, mut column) = (1, 1);
    while let Some(&c) = chars.peek() {
        let (l, col) = (line, column);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
            c
        };
        let tok = match c {
            c if c.is_whitespace() => {
                bump(&mut chars);
                continue;
            }
            '#' => {
                while chars.peek().is_some_and(|&c| c != '\n') {
                    bump(&mut chars);
                }
                continue;
            }
            '\\' | 'λ' => {
                bump(&mut chars);
                Tok::Lambda
            }
            '.' => {
                bump(&mut chars);
                Tok::Dot
            }
            '(' => {
                bump(&mut chars);
                Tok::LParen
            }
            ')' => {
                bump(&mut chars);
                Tok::RParen
            }
            ',' => {
                bump(&mut chars);
                Tok::Comma
            }
            ':' => {
                bump(&mut chars);
                Tok::Colon
            }
            '=' => {
                bump(&mut chars);
                Tok::Eq
            }
            '*' | '⊗' => {
                bump(&mut chars);
                Tok::Star
            }
            '⊸' => {
                bump(&mut chars);
                Tok::Lolli
            }
            '-' => {
                bump(&mut chars);
                if chars.peek() == Some(&'o') {
                    bump(&mut chars);
                    Tok::Lolli
                } else {
                    return Err(syntax(l, col, "expected '-o'"));
                }
            }
            c if c.is_ascii_digit() => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if !d.is_ascii_digit() {
                        break;
                    }
                    s.push(d);
                    bump(&mut chars);
                }
                Tok::Num(s)
            }
            c if is_ident_start(c) => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if !is_ident_continue(d) {
                        break;
                    }
                    s.push(d);
                    bump(&mut chars);
                }
                match s.as_str() {
                    "let" => Tok::Let,
                    "in" => Tok::In,
                    _ => Tok::Ident(s),
                }
            }
            other => return Err(syntax(l, col, format!("unexpected character {other:?}"))),
        };
        out.push(Token {
            tok,
            line: l,
            column: col,
        });
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
        column,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    depth: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn here(&self) -> (usize, usize) {
        let t = &self.toks[self.pos];
        (t.line, t.column)
    }

    fn error(&self, message: impl Into<String>) -> Error {
        let (l, c) = self.here();
        syntax(l, c, message)
    }

    fn advance(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if t != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<()> {
        if *self.peek() == want {
            self.advance();
            Ok(())
        } else {
            Err(self.error(format!("expected {what}, found {}", describe(self.peek()))))
        }
    }

    fn ident(&mut self) -> Result<String> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.advance();
                Ok(s)
            }
            other => Err(self.error(format!("expected a variable, found {}", describe(&other)))),
        }
    }

    fn enter(&mut self) -> Result<()> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(self.error("nesting too deep"));
        }
        Ok(())
    }

    fn program(&mut self) -> Result<Term> {
        let t = self.term()?;
        let t = if *self.peek() == Tok::Colon {
            self.advance();
            Term::Annot(Box::new(t), self.ty()?)
        } else {
            t
        };
        if *self.peek() != Tok::Eof {
            return Err(self.error(format!("unexpected {}", describe(self.peek()))));
        }
        Ok(t)
    }

    fn term(&mut self) -> Result<Term> {
        self.enter()?;
        let t = match self.peek() {
            Tok::Lambda => self.lambda(),
            Tok::Let => self.let_pair(),
            _ => self.app(),
        };
        self.depth -= 1;
        t
    }

    fn lambda(&mut self) -> Result<Term> {
        self.expect(Tok::Lambda, "'\\'")?;
        let x = self.ident()?;
        let ty = if *self.peek() == Tok::Colon {
            self.advance();
            Some(self.ty()?)
        } else {
            None
        };
        self.expect(Tok::Dot, "'.'")?;
        Ok(Term::Lam(x, ty, Box::new(self.term()?)))
    }

    fn let_pair(&mut self) -> Result<Term> {
        self.expect(Tok::Let, "'let'")?;
        self.expect(Tok::LParen, "'('")?;
        let x = self.ident()?;
        self.expect(Tok::Comma, "','")?;
        let y = self.ident()?;
        if x == y {
            return Err(self.error(format!("pattern binds {x} twice")));
        }
        self.expect(Tok::RParen, "')'")?;
        self.expect(Tok::Eq, "'='")?;
        let t = self.term()?;
        self.expect(Tok::In, "'in'")?;
        let u = self.term()?;
        Ok(Term::LetPair(x, y, Box::new(t), Box::new(u)))
    }

    fn starts_atom(&self) -> bool {
        matches!(self.peek(), Tok::Ident(_) | Tok::LParen)
    }

    fn app(&mut self) -> Result<Term> {
        if !self.starts_atom() {
            return Err(self.error(format!("expected a term, found {}", describe(self.peek()))));
        }
        let mut t = self.atom()?;
        loop {
            if self.starts_atom() {
                let a = self.atom()?;
                t = Term::App(Box::new(t), Box::new(a));
            } else if matches!(self.peek(), Tok::Lambda | Tok::Let) {
                let a = self.term()?;
                return Ok(Term::App(Box::new(t), Box::new(a)));
            } else {
                return Ok(t);
            }
        }
    }

    fn atom(&mut self) -> Result<Term> {
        match self.peek().clone() {
            Tok::Ident(x) => {
                self.advance();
                Ok(Term::Var(x))
            }
            Tok::LParen => {
                self.advance();
                if *self.peek() == Tok::RParen {
                    self.advance();
                    return Ok(Term::Unit);
                }
                let t = self.term()?;
                let out = match self.peek() {
                    Tok::Comma => {
                        self.advance();
                        Term::Pair(Box::new(t), Box::new(self.term()?))
                    }
                    Tok::Colon => {
                        self.advance();
                        Term::Annot(Box::new(t), self.ty()?)
                    }
                    _ => t,
                };
                self.expect(Tok::RParen, "')'")?;
                Ok(out)
            }
            other => Err(self.error(format!("expected a term, found {}", describe(&other)))),
        }
    }

    fn ty(&mut self) -> Result<Type> {
        self.enter()?;
        let a = self.tensor_ty()?;
        let t = if *self.peek() == Tok::Lolli {
            self.advance();
            Type::lolli(a, self.ty()?)
        } else {
            a
        };
        self.depth -= 1;
        Ok(t)
    }

    fn tensor_ty(&mut self) -> Result<Type> {
        let mut t = self.type_atom()?;
        while *self.peek() == Tok::Star {
            self.advance();
            t = Type::tensor(t, self.type_atom()?);
        }
        Ok(t)
    }

    fn type_atom(&mut self) -> Result<Type> {
        match self.peek().clone() {
            Tok::LParen => {
                self.advance();
                let t = self.ty()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(t)
            }
            Tok::Num(n) if n == "1" => {
                self.advance();
                Ok(Type::Unit)
            }
            Tok::Ident(s) if s == "I" => {
                self.advance();
                Ok(Type::Unit)
            }
            Tok::Ident(s) if s.starts_with('B') => {
                let n = base_dim(&s[1..]).ok_or_else(|| {
                    self.error(format!("base type needs a dimension in 1..={MAX_DECODED_DIM}, found {s}"))
                })?;
                self.advance();
                Ok(Type::Base(n))
            }
            other => Err(self.error(format!("expected a type, found {}", describe(&other)))),
        }
    }
}

fn base_dim(digits: &str) -> Option<usize> {
    if digits.is_empty() || digits.chars().count() > 6 {
        return None;
    }
    let mut n = 0usize;
    for c in digits.chars() {
        let d = if c.is_ascii_digit() {
            c as usize - '0' as usize
        } else if is_subscript_digit(c) {
            c as usize - '₀' as usize
        } else {
            return None;
        };
        n = n * 10 + d;
    }
    (1..=MAX_DECODED_DIM).contains(&n).then_some(n)
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Lambda => "'\\'".into(),
        Tok::Dot => "'.'".into(),
        Tok::LParen => "'('".into(),
        Tok::RParen => "')'".into(),
        Tok::Comma => "','".into(),
        Tok::Colon => "':'".into(),
        Tok::Eq => "'='".into(),
        Tok::Let => "'let'".into(),
        Tok::In => "'in'".into(),
        Tok::Lolli => "'-o'".into(),
        Tok::Star => "'*'".into(),
        Tok::Ident(s) => format!("'{s}'"),
        Tok::Num(s) => format!("'{s}'"),
        Tok::Eof => "end of input".into(),
    }
}

/// Parses a term with an optional top-level `: T` annotation.
pub fn parse(src: &str) -> Result<Term> {
    let toks = lex(src)?;
    Parser {
        toks,
        pos: 0,
        depth: 0,
    }
    .program()
}

/// Parses a type on its own.
pub fn parse_type(src: &str) -> Result<Type> {
    let toks = lex(src)?;
    let mut p = Parser {
        toks,
        pos: 0,
        depth: 0,
    };
    let t = p.ty()?;
    if *p.peek() != Tok::Eof {
        return Err(p.error(format!("unexpected {}", describe(p.peek()))));
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &str) -> Term {
        Term::var(x)
    }

    #[test]
    fn identity() {
        assert_eq!(parse("\\x. x").unwrap(), Term::lam("x", None, v("x")));
        assert_eq!(parse("λx. x").unwrap(), Term::lam("x", None, v("x")));
    }

    #[test]
    fn nested_lambda_over_pair() {
        assert_eq!(
            parse("\\x. \\y. (y, x)").unwrap(),
            Term::lam("x", None, Term::lam("y", None, Term::pair(v("y"), v("x"))))
        );
    }

    #[test]
    fn contraction_still_parses() {
        assert!(parse("\\x. (x, x)").is_ok());
    }

    #[test]
    fn application_is_left_associative() {
        assert_eq!(
            parse("f x y").unwrap(),
            Term::app(Term::app(v("f"), v("x")), v("y"))
        );
        assert_eq!(
            parse("f \\x. x").unwrap(),
            Term::app(v("f"), Term::lam("x", None, v("x")))
        );
    }

    #[test]
    fn let_unit_and_annotations() {
        let t = parse("let (a, b) = p in (b, a)").unwrap();
        assert_eq!(t, Term::let_pair("a", "b", v("p"), Term::pair(v("b"), v("a"))));
        assert_eq!(parse("()").unwrap(), Term::Unit);
        assert_eq!(
            parse("\\x:B2. x : B2 -o B2").unwrap(),
            Term::Annot(
                Box::new(Term::lam("x", Some(Type::Base(2)), v("x"))),
                Type::lolli(Type::Base(2), Type::Base(2))
            )
        );
        assert_eq!(
            parse("(x : B3)").unwrap(),
            Term::Annot(Box::new(v("x")), Type::Base(3))
        );
    }

    #[test]
    fn types() {
        let b2 = || Type::Base(2);
        assert_eq!(
            parse_type("B2 * B2 -o B2 -o I").unwrap(),
            Type::lolli(Type::tensor(b2(), b2()), Type::lolli(b2(), Type::Unit))
        );
        assert_eq!(parse_type("B₂ ⊗ 1 ⊸ B₂").unwrap(), Type::lolli(Type::tensor(b2(), Type::Unit), b2()));
        assert_eq!(
            parse_type("B2 * B2 * B2").unwrap(),
            Type::tensor(Type::tensor(b2(), b2()), b2())
        );
        assert!(parse_type("B0").is_err());
        assert!(parse_type("B").is_err());
        assert!(parse_type("B99999999999999999999").is_err());
    }

    #[test]
    fn comments_and_positions() {
        assert_eq!(parse("# identity\n\\x. x # done").unwrap(), Term::lam("x", None, v("x")));
        match parse("\\x.\n  (x,") {
            Err(Error::Syntax { line, column, .. }) => assert_eq!((line, column), (2, 6)),
            other => panic!("{other:?}"),
        }
        match parse("\\x. x )") {
            Err(Error::Syntax { line, column, .. }) => assert_eq!((line, column), (1, 7)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse("x $"), Err(Error::Syntax { column: 3, .. })));
        assert!(parse("let (a, a) = p in a").is_err());
        assert!(parse("").is_err());
    }

    #[test]
    fn deep_nesting_is_rejected_not_overflowing() {
        let src = format!("{}x{}", "(".repeat(5000), ")".repeat(5000));
        assert!(matches!(parse(&src), Err(Error::Syntax { .. })));
        let ty = format!("{}B2{}", "(".repeat(5000), ")".repeat(5000));
        assert!(parse_type(&ty).is_err());
        let ok = format!("{}x{}", "(".repeat(50), ")".repeat(50));
        assert_eq!(parse(&ok).unwrap(), v("x"));
    }

    #[test]
    fn printing_round_trips() {
        for src in [
            "\\x:B2. x",
            "\\f:B2 -o B2. \\x. f x",
            "let (a, b) = p in (b, (a, ()))",
            "(\\x. x) ((\\y. y) z)",
            "f (let (a, b) = p in a)",
            "(x : (B2 -o B2) * B3)",
        ] {
            let t = parse(src).unwrap();
            assert_eq!(parse(&t.to_string()).unwrap(), t, "{src} printed as {t}");
        }
    }
}
