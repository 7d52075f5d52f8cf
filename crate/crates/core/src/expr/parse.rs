use thiserror::Error;

use super::{BinOp, Expr};
use crate::interval::Elementary;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown function {name:?} at byte {offset}")]
    UnknownFunction { name: String, offset: usize },
    #[error("exponent at byte {offset} is not an integer")]
    NonIntegerExponent { offset: usize },
}

#[derive(Debug, Clone, PartialEq)]
enum Tok<'a> {
    Number(&'a str),
    Name(&'a str),
    Sym(char),
    End,
}

struct Lexer<'a> {
    src: &'a str,
    toks: Vec<(Tok<'a>, usize)>,
}

impl<'a> Lexer<'a> {
    fn run(src: &'a str) -> Result<Vec<(Tok<'a>, usize)>, ParseError> {
        let mut lexer = Lexer { src, toks: Vec::new() };
        let bytes = src.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            let c = bytes[i];
            if c.is_ascii_whitespace() {
                i += 1;
            } else if c.is_ascii_digit() || (c == b'.' && bytes.get(i + 1).is_some_and(u8::is_ascii_digit)) {
                i = lexer.number(i)?;
            } else if c.is_ascii_alphabetic() || c == b'_' {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                lexer.toks.push((Tok::Name(&src[start..i]), start));
            } else if b"+-*/^()<".contains(&c) {
                lexer.toks.push((Tok::Sym(c as char), i));
                i += 1;
            } else {
                return Err(ParseError::Syntax {
                    offset: i,
                    message: format!("unexpected character {:?}", src[i..].chars().next().unwrap_or('?')),
                });
            }
        }
        lexer.toks.push((Tok::End, src.len()));
        Ok(lexer.toks)
    }

    fn number(&mut self, start: usize) -> Result<usize, ParseError> {
        let bytes = self.src.as_bytes();
        let digits = |mut i: usize| {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            i
        };
        let mut i = digits(start);
        if i < bytes.len() && bytes[i] == b'.' {
            i = digits(i + 1);
        }
        if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
            let mut j = i + 1;
            if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                j += 1;
            }
            let end = digits(j);
            if end == j {
                return Err(ParseError::Syntax { offset: i, message: "malformed exponent in number".into() });
            }
            i = end;
        }
        self.toks.push((Tok::Number(&self.src[start..i]), start));
        Ok(i)
    }
}

struct Parser<'a> {
    toks: Vec<(Tok<'a>, usize)>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok<'a> {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok<'a> {
        let tok = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        tok
    }

    fn error<T>(&self, message: &str) -> Result<T, ParseError> {
        Err(ParseError::Syntax { offset: self.offset(), message: message.to_string() })
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            Ok(())
        } else {
            self.error(&format!("expected '{c}'"))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Sym('+') => BinOp::Add,
                Tok::Sym('-') => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            lhs = Expr::binary(op, lhs, self.term()?);
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            let op = match self.peek() {
                Tok::Sym('*') => BinOp::Mul,
                Tok::Sym('/') => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            lhs = Expr::binary(op, lhs, self.factor()?);
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if *self.peek() != Tok::Sym('^') {
            return Ok(base);
        }
        self.bump();
        let exponent = self.integer()?;
        Ok(Expr::pow(base, exponent))
    }

    fn integer(&mut self) -> Result<i32, ParseError> {
        let offset = self.offset();
        let negative = *self.peek() == Tok::Sym('-');
        if negative {
            self.bump();
        }
        match self.bump() {
            Tok::Number(text) if text.bytes().all(|b| b.is_ascii_digit()) => {
                let magnitude: i64 =
                    text.parse().map_err(|_| ParseError::Syntax { offset, message: "exponent out of range".into() })?;
                let value = if negative { -magnitude } else { magnitude };
                i32::try_from(value).map_err(|_| ParseError::Syntax { offset, message: "exponent out of range".into() })
            }
            Tok::End => Err(ParseError::Syntax { offset, message: "missing exponent".into() }),
            _ => Err(ParseError::NonIntegerExponent { offset }),
        }
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let offset = self.offset();
        match self.bump() {
            Tok::Number(text) => Ok(Expr::constant(text)),
            Tok::Name(name) => {
                if *self.peek() != Tok::Sym('(') {
                    return Ok(Expr::var(name));
                }
                let f = Elementary::from_name(name)
                    .ok_or_else(|| ParseError::UnknownFunction { name: name.to_string(), offset })?;
                self.bump();
                let arg = self.expr()?;
                self.expect(')')?;
                Ok(Expr::call(f, arg))
            }
            Tok::Sym('(') => {
                let inner = self.expr()?;
                self.expect(')')?;
                Ok(inner)
            }
            Tok::Sym('-') => Ok(Expr::Neg(Box::new(self.factor()?))),
            Tok::End => Err(ParseError::Syntax { offset, message: "unexpected end of input".into() }),
            Tok::Sym(c) => Err(ParseError::Syntax { offset, message: format!("unexpected '{c}'") }),
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        match self.peek() {
            Tok::End => Ok(()),
            _ => self.error("unexpected trailing input"),
        }
    }
}

pub(crate) fn parse_expr(text: &str) -> Result<Expr, ParseError> {
    let mut parser = Parser { toks: Lexer::run(text)?, pos: 0 };
    let e = parser.expr()?;
    parser.finish()?;
    Ok(e)
}

/// Parses `lhs < rhs`.
pub fn parse_relation(text: &str) -> Result<(Expr, Expr), ParseError> {
    let mut parser = Parser { toks: Lexer::run(text)?, pos: 0 };
    let lhs = parser.expr()?;
    parser.expect('<')?;
    let rhs = parser.expr()?;
    parser.finish()?;
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_function() {
        assert_eq!(parse_expr("arccos(u)"), Err(ParseError::UnknownFunction { name: "arccos".into(), offset: 0 }));
        assert!(matches!(parse_expr("1 + sin(u)"), Err(ParseError::UnknownFunction { offset: 4, .. })));
    }

    #[test]
    fn non_integer_exponents() {
        assert_eq!(parse_expr("u^0.5"), Err(ParseError::NonIntegerExponent { offset: 2 }));
        assert!(matches!(parse_expr("u^x"), Err(ParseError::NonIntegerExponent { .. })));
        assert!(matches!(parse_expr("u^(2)"), Err(ParseError::NonIntegerExponent { .. })));
        assert!(matches!(parse_expr("u^1e3"), Err(ParseError::NonIntegerExponent { .. })));
    }

    #[test]
    fn syntax_errors_carry_offsets() {
        assert_eq!(parse_expr("cosh(u"), Err(ParseError::Syntax { offset: 6, message: "expected ')'".into() }));
        assert!(matches!(parse_expr("u $ 2"), Err(ParseError::Syntax { offset: 2, .. })));
        assert!(matches!(parse_expr("u u"), Err(ParseError::Syntax { offset: 2, .. })));
        assert!(matches!(parse_expr(""), Err(ParseError::Syntax { offset: 0, .. })));
        assert!(matches!(parse_expr("1e"), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse_expr("u < 1"), Err(ParseError::Syntax { .. })));
    }

    #[test]
    fn numbers() {
        assert_eq!(parse_expr("2.5e-3").unwrap(), Expr::constant("2.5e-3"));
        assert_eq!(parse_expr(".5").unwrap(), Expr::constant(".5"));
        assert_eq!(parse_expr("3.").unwrap(), Expr::constant("3."));
    }

    #[test]
    fn relation() {
        let (l, r) = parse_relation("tanh(x)*tanh(y) < tanh(x*tanh(y))").unwrap();
        assert_eq!(l.to_string(), "tanh(x)*tanh(y)");
        assert_eq!(r.to_string(), "tanh(x*tanh(y))");
        assert!(parse_relation("u").is_err());
        assert!(parse_relation("u < v < w").is_err());
    }

    #[test]
    fn variable_named_like_function() {
        assert_eq!(parse_expr("exp + 1").unwrap().to_string(), "exp+1");
    }
}
