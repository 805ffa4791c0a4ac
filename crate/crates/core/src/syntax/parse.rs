use thiserror::Error;

use super::{Constant, Formula, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

/// Result of [`parse`]: the input was either a formula or a bare term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Syntax {
    Formula(Formula),
    Term(Term),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    LParen,
    RParen,
    LBrace,
    RBrace,
    Bar,
    Amp,
    Tilde,
    Dot,
    Arrow,
    DoubleArrow,
    Eq,
    In,
    Forall,
    Exists,
    Verum,
    Falsum,
    Normal,
    Const(Constant),
    Var(String),
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::LBrace => "'{'".into(),
            Tok::RBrace => "'}'".into(),
            Tok::Bar => "'|'".into(),
            Tok::Amp => "'&'".into(),
            Tok::Tilde => "'~'".into(),
            Tok::Dot => "'.'".into(),
            Tok::Arrow => "'->'".into(),
            Tok::DoubleArrow => "'<->'".into(),
            Tok::Eq => "'='".into(),
            Tok::In => "'in'".into(),
            Tok::Forall => "'A'".into(),
            Tok::Exists => "'E'".into(),
            Tok::Verum => "'T'".into(),
            Tok::Falsum => "'F'".into(),
            Tok::Normal => "'N'".into(),
            Tok::Const(c) => format!("'{c}'"),
            Tok::Var(v) => format!("variable '{v}'"),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(input: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = input.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut column) = (1usize, 1usize);
    let mut i = 0;
    let err = |line, column, message: String| ParseError {
        line,
        column,
        message,
    };
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, column);
        if c == '\n' {
            line += 1;
            column = 1;
            i += 1;
            continue;
        }
        if c.is_ascii_whitespace() {
            column += 1;
            i += 1;
            continue;
        }
        if !c.is_ascii() {
            return Err(err(tl, tc, format!("non-ASCII character '{c}'")));
        }
        let mut push = |tok: Tok, width: usize, i: &mut usize, column: &mut usize| {
            out.push(Spanned {
                tok,
                line: tl,
                column: tc,
            });
            *i += width;
            *column += width;
        };
        match c {
            '(' => push(Tok::LParen, 1, &mut i, &mut column),
            ')' => push(Tok::RParen, 1, &mut i, &mut column),
            '{' => push(Tok::LBrace, 1, &mut i, &mut column),
            '}' => push(Tok::RBrace, 1, &mut i, &mut column),
            '|' => push(Tok::Bar, 1, &mut i, &mut column),
            '&' => push(Tok::Amp, 1, &mut i, &mut column),
            '~' => push(Tok::Tilde, 1, &mut i, &mut column),
            '.' => push(Tok::Dot, 1, &mut i, &mut column),
            '=' => push(Tok::Eq, 1, &mut i, &mut column),
            '-' if chars.get(i + 1) == Some(&'>') => push(Tok::Arrow, 2, &mut i, &mut column),
            '<' if chars.get(i + 1) == Some(&'-') && chars.get(i + 2) == Some(&'>') => {
                push(Tok::DoubleArrow, 3, &mut i, &mut column)
            }
            'a'..='z' => {
                let start = i;
                let mut j = i;
                while j < chars.len()
                    && (chars[j].is_ascii_lowercase() || chars[j].is_ascii_digit())
                {
                    j += 1;
                }
                let word: String = chars[start..j].iter().collect();
                let tok = if word == "in" {
                    Tok::In
                } else {
                    Tok::Var(word)
                };
                push(tok, j - start, &mut i, &mut column);
            }
            'A'..='Z' => {
                let start = i;
                let mut j = i;
                while j < chars.len() && chars[j].is_ascii_uppercase() {
                    j += 1;
                }
                let word: String = chars[start..j].iter().collect();
                let tok = match word.as_str() {
                    "A" => Tok::Forall,
                    "E" => Tok::Exists,
                    "T" => Tok::Verum,
                    "F" => Tok::Falsum,
                    "N" => Tok::Normal,
                    other => match Constant::from_tag(other) {
                        Some(c) => Tok::Const(c),
                        None => return Err(err(tl, tc, format!("unknown keyword '{other}'"))),
                    },
                };
                push(tok, j - start, &mut i, &mut column);
            }
            other => return Err(err(tl, tc, format!("unexpected character '{other}'"))),
        }
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        column,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        let s = &self.toks[self.pos];
        ParseError {
            line: s.line,
            column: s.column,
            message: message.into(),
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(format!(
                "expected {}, found {}",
                tok.describe(),
                self.peek().describe()
            )))
        }
    }

    fn var(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Var(v) => {
                self.bump();
                Ok(v)
            }
            other => Err(self.error(format!("expected variable, found {}", other.describe()))),
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.implication()?;
        while *self.peek() == Tok::DoubleArrow {
            self.bump();
            let rhs = self.implication()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.conjunction()?;
        while *self.peek() == Tok::Bar {
            self.bump();
            let rhs = self.conjunction()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Tok::Tilde => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::Forall | Tok::Exists => {
                let universal = *self.peek() == Tok::Forall;
                self.bump();
                let v = self.var()?;
                self.expect(Tok::Dot)?;
                let body = self.unary()?;
                Ok(if universal {
                    Formula::forall(v, body)
                } else {
                    Formula::exists(v, body)
                })
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Tok::Verum => {
                self.bump();
                Ok(Formula::Verum)
            }
            Tok::Falsum => {
                self.bump();
                Ok(Formula::Falsum)
            }
            Tok::Normal => {
                self.bump();
                self.expect(Tok::LParen)?;
                let t = self.term()?;
                self.expect(Tok::RParen)?;
                Ok(Formula::Normal(t))
            }
            _ => {
                let lhs = self.term()?;
                match self.peek() {
                    Tok::In => {
                        self.bump();
                        Ok(Formula::Member(lhs, self.term()?))
                    }
                    Tok::Eq => {
                        self.bump();
                        Ok(Formula::Equal(lhs, self.term()?))
                    }
                    other => {
                        Err(self.error(format!("expected 'in' or '=', found {}", other.describe())))
                    }
                }
            }
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        match self.peek().clone() {
            Tok::Var(v) => {
                self.bump();
                Ok(Term::Var(v))
            }
            Tok::Const(c) => {
                self.bump();
                Ok(Term::Const(c))
            }
            Tok::LBrace => {
                self.bump();
                let v = self.var()?;
                self.expect(Tok::Bar)?;
                let body = self.formula()?;
                self.expect(Tok::RBrace)?;
                Ok(Term::builder(v, body))
            }
            other => Err(self.error(format!("expected term, found {}", other.describe()))),
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            Err(self.error(format!("unexpected {}", self.peek().describe())))
        }
    }
}

pub fn parse_formula(input: &str) -> Result<Formula, ParseError> {
    let mut p = Parser {
        toks: lex(input)?,
        pos: 0,
    };
    let f = p.formula()?;
    p.finish()?;
    Ok(f)
}

pub fn parse_term(input: &str) -> Result<Term, ParseError> {
    let mut p = Parser {
        toks: lex(input)?,
        pos: 0,
    };
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}

/// Parses a formula, or failing that a bare term. Errors refer to the
/// formula reading.
pub fn parse(input: &str) -> Result<Syntax, ParseError> {
    match parse_formula(input) {
        Ok(f) => Ok(Syntax::Formula(f)),
        Err(e) => parse_term(input).map(Syntax::Term).map_err(|_| e),
    }
}
