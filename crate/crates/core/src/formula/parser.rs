//! Recursive-descent parser for the surface syntax.
//!
//! Precedence, tightest first: `! X F G`, then `U R` (right-associative),
//! `&`, `|`, `->` (right-associative), `<->` (left-associative).
//! A leading `forall`/`exists` sets the path quantifier; without one the
//! formula is universal.

use std::fmt;

use thiserror::Error;

use super::{Formula, QuantifiedFormula, Quantifier};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{line}:{column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected character '{0}'")]
    UnexpectedChar(char),
    #[error("expected {expected}, found {found}")]
    UnexpectedToken { expected: String, found: String },
    #[error("path quantifiers may only appear once, at the start of a formula")]
    NestedQuantifier,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    True,
    False,
    Next,
    Eventually,
    Globally,
    Until,
    Release,
    Forall,
    Exists,
    Not,
    And,
    Or,
    Implies,
    Iff,
    LParen,
    RParen,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(name) => return write!(f, "identifier '{name}'"),
            Tok::True => "'true'",
            Tok::False => "'false'",
            Tok::Next => "'X'",
            Tok::Eventually => "'F'",
            Tok::Globally => "'G'",
            Tok::Until => "'U'",
            Tok::Release => "'R'",
            Tok::Forall => "'forall'",
            Tok::Exists => "'exists'",
            Tok::Not => "'!'",
            Tok::And => "'&'",
            Tok::Or => "'|'",
            Tok::Implies => "'->'",
            Tok::Iff => "'<->'",
            Tok::LParen => "'('",
            Tok::RParen => "')'",
            Tok::Eof => "end of input",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut column) = (1usize, 1usize);

    while let Some(&c) = chars.peek() {
        let (tl, tc) = (line, column);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars<'_>>| {
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
            c
        };
        let err = |kind| ParseError {
            line: tl,
            column: tc,
            kind,
        };
        let tok = match c {
            c if c.is_whitespace() => {
                bump(&mut chars);
                continue;
            }
            '#' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    bump(&mut chars);
                }
                continue;
            }
            '(' => {
                bump(&mut chars);
                Tok::LParen
            }
            ')' => {
                bump(&mut chars);
                Tok::RParen
            }
            '!' => {
                bump(&mut chars);
                Tok::Not
            }
            '&' => {
                bump(&mut chars);
                Tok::And
            }
            '|' => {
                bump(&mut chars);
                Tok::Or
            }
            '-' => {
                bump(&mut chars);
                if chars.peek() == Some(&'>') {
                    bump(&mut chars);
                    Tok::Implies
                } else {
                    return Err(err(ParseErrorKind::UnexpectedChar('-')));
                }
            }
            '<' => {
                bump(&mut chars);
                if chars.peek() == Some(&'-') {
                    bump(&mut chars);
                    if chars.peek() == Some(&'>') {
                        bump(&mut chars);
                        Tok::Iff
                    } else {
                        return Err(err(ParseErrorKind::UnexpectedChar('-')));
                    }
                } else {
                    return Err(err(ParseErrorKind::UnexpectedChar('<')));
                }
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut word = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        word.push(c);
                        bump(&mut chars);
                    } else {
                        break;
                    }
                }
                match word.as_str() {
                    "true" => Tok::True,
                    "false" => Tok::False,
                    "X" => Tok::Next,
                    "F" => Tok::Eventually,
                    "G" => Tok::Globally,
                    "U" => Tok::Until,
                    "R" => Tok::Release,
                    "forall" => Tok::Forall,
                    "exists" => Tok::Exists,
                    _ => Tok::Ident(word),
                }
            }
            other => return Err(err(ParseErrorKind::UnexpectedChar(other))),
        };
        out.push(Spanned {
            tok,
            line: tl,
            column: tc,
        });
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

    fn advance(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, kind: ParseErrorKind) -> ParseError {
        let s = &self.toks[self.pos];
        ParseError {
            line: s.line,
            column: s.column,
            kind,
        }
    }

    fn unexpected(&self, expected: &str) -> ParseError {
        if matches!(self.peek(), Tok::Forall | Tok::Exists) {
            return self.error(ParseErrorKind::NestedQuantifier);
        }
        self.error(ParseErrorKind::UnexpectedToken {
            expected: expected.to_string(),
            found: self.peek().to_string(),
        })
    }

    fn expect_eof(&self) -> Result<(), ParseError> {
        match self.peek() {
            Tok::Eof => Ok(()),
            _ => Err(self.unexpected("an operator or end of input")),
        }
    }

    fn iff(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.implies()?;
        while *self.peek() == Tok::Iff {
            self.advance();
            let rhs = self.implies()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn implies(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if *self.peek() == Tok::Implies {
            self.advance();
            let rhs = self.implies()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and()?;
        while *self.peek() == Tok::Or {
            self.advance();
            let rhs = self.and()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.binary_temporal()?;
        while *self.peek() == Tok::And {
            self.advance();
            let rhs = self.binary_temporal()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn binary_temporal(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.unary()?;
        match self.peek() {
            Tok::Until => {
                self.advance();
                Ok(Formula::until(lhs, self.binary_temporal()?))
            }
            Tok::Release => {
                self.advance();
                Ok(Formula::release(lhs, self.binary_temporal()?))
            }
            _ => Ok(lhs),
        }
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Tok::Not => {
                self.advance();
                Ok(Formula::not(self.unary()?))
            }
            Tok::Next => {
                self.advance();
                Ok(Formula::next(self.unary()?))
            }
            Tok::Eventually => {
                self.advance();
                Ok(Formula::eventually(self.unary()?))
            }
            Tok::Globally => {
                self.advance();
                Ok(Formula::globally(self.unary()?))
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                self.advance();
                Ok(Formula::Atom(name))
            }
            Tok::True => {
                self.advance();
                Ok(Formula::True)
            }
            Tok::False => {
                self.advance();
                Ok(Formula::False)
            }
            Tok::LParen => {
                self.advance();
                let inner = self.iff()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.unexpected("')'"));
                }
                self.advance();
                Ok(inner)
            }
            _ => Err(self.unexpected("a formula")),
        }
    }
}

/// Parses a path-quantified formula.
pub fn parse(text: &str) -> Result<QuantifiedFormula, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let quantifier = match p.peek() {
        Tok::Forall => {
            p.advance();
            Quantifier::Universal
        }
        Tok::Exists => {
            p.advance();
            Quantifier::Existential
        }
        _ => Quantifier::Universal,
    };
    let body = p.iff()?;
    p.expect_eof()?;
    Ok(QuantifiedFormula { quantifier, body })
}

/// Parses a quantifier-free formula.
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let body = p.iff()?;
    p.expect_eof()?;
    Ok(body)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(n: &str) -> Formula {
        Formula::atom(n)
    }

    #[test]
    fn parses_universal_example() {
        let q = parse("forall G (a -> X a)").unwrap();
        assert_eq!(
            q,
            QuantifiedFormula::universal(Formula::globally(Formula::implies(
                a("a"),
                Formula::next(a("a"))
            )))
        );
    }

    #[test]
    fn default_quantifier_is_universal() {
        assert_eq!(parse("p").unwrap(), QuantifiedFormula::universal(a("p")));
    }

    #[test]
    fn parses_existential_example() {
        assert_eq!(
            parse("exists F X a").unwrap(),
            QuantifiedFormula::existential(Formula::eventually(Formula::next(a("a"))))
        );
    }

    #[test]
    fn truncated_input_is_an_error() {
        let e = parse("G (a U").unwrap_err();
        assert_eq!((e.line, e.column), (1, 7));
        assert!(matches!(e.kind, ParseErrorKind::UnexpectedToken { .. }));
    }

    #[test]
    fn nested_quantifier_rejected() {
        let e = parse("forall G (exists a)").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::NestedQuantifier);
        let e = parse("forall exists a").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::NestedQuantifier);
        assert!(parse_formula("exists a").is_err());
    }

    #[test]
    fn precedence_and_associativity() {
        // & binds tighter than |, which binds tighter than ->.
        assert_eq!(
            parse_formula("a & b | c -> d").unwrap(),
            Formula::implies(Formula::or(Formula::and(a("a"), a("b")), a("c")), a("d"))
        );
        // -> and U associate to the right.
        assert_eq!(
            parse_formula("a -> b -> c").unwrap(),
            Formula::implies(a("a"), Formula::implies(a("b"), a("c")))
        );
        assert_eq!(
            parse_formula("a U b R c").unwrap(),
            Formula::until(a("a"), Formula::release(a("b"), a("c")))
        );
        // Unary operators bind tightest.
        assert_eq!(
            parse_formula("!a U X b").unwrap(),
            Formula::until(Formula::not(a("a")), Formula::next(a("b")))
        );
        assert_eq!(
            parse_formula("a <-> b <-> c").unwrap(),
            Formula::iff(Formula::iff(a("a"), a("b")), a("c"))
        );
    }

    #[test]
    fn comments_and_line_numbers() {
        let q = parse("# heading\nG ( a # trailing\n & b)").unwrap();
        assert_eq!(q.body, Formula::globally(Formula::and(a("a"), a("b"))));
        let e = parse("G a\n  & & b").unwrap_err();
        assert_eq!((e.line, e.column), (2, 5));
    }

    #[test]
    fn bad_characters() {
        let e = parse("a $ b").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnexpectedChar('$'));
        assert!(parse("a - b").is_err());
        assert!(parse("a <- b").is_err());
        assert!(parse("").is_err());
        assert!(parse("a b").is_err());
    }

    #[test]
    fn identifiers_may_contain_operator_letters() {
        assert_eq!(parse_formula("Xa").unwrap(), a("Xa"));
        assert_eq!(parse_formula("F_1").unwrap(), a("F_1"));
    }
}
