//! Recursive-descent parser for polynomial expressions: integers, rational
//! literals `a/b`, named variables, `+ - * ^` and parentheses. Implicit
//! multiplication is a syntax error; exponents are nonnegative integers.

use num_bigint::BigInt;

use looseedge::algebra::{FieldElement, FieldSpec};
use looseedge::series::{ExponentVector, Series};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "syntax error at position {}: {}", self.position, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Token {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(Token, usize)>, ParseError> {
    let mut out = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                out.push((Token::Plus, i));
                i += 1;
            }
            '-' => {
                out.push((Token::Minus, i));
                i += 1;
            }
            '*' => {
                out.push((Token::Star, i));
                i += 1;
            }
            '^' => {
                out.push((Token::Caret, i));
                i += 1;
            }
            '/' => {
                out.push((Token::Slash, i));
                i += 1;
            }
            '(' => {
                out.push((Token::LParen, i));
                i += 1;
            }
            ')' => {
                out.push((Token::RParen, i));
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let digits = &text[start..i];
                out.push((
                    Token::Int(digits.parse().expect("digits form an integer")),
                    start,
                ));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                out.push((Token::Ident(text[start..i].to_string()), start));
            }
            other => {
                return Err(ParseError {
                    position: i,
                    message: format!("unexpected character '{other}'"),
                })
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<(Token, usize)>,
    pos: usize,
    vars: &'a [String],
    field: FieldSpec,
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(t, _)| t)
    }

    fn here(&self) -> usize {
        self.tokens
            .get(self.pos)
            .map(|(_, p)| *p)
            .unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).map(|(t, _)| t.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: Token, what: &str) -> Result<(), ParseError> {
        let position = self.here();
        match self.bump() {
            Some(t) if t == want => Ok(()),
            _ => Err(ParseError {
                position,
                message: format!("expected {what}"),
            }),
        }
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            position: self.here(),
            message: message.into(),
        })
    }

    fn n_vars(&self) -> usize {
        self.vars.len()
    }

    fn expr(&mut self) -> Result<Series, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.bump();
                    let rhs = self.term()?;
                    acc = acc.add(&rhs).expect("same ambient");
                }
                Some(Token::Minus) => {
                    self.bump();
                    let rhs = self.term()?;
                    acc = acc.sub(&rhs).expect("same ambient");
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Series, ParseError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(&Token::Star) {
            self.bump();
            let rhs = self.factor()?;
            acc = acc.mul(&rhs).expect("same ambient");
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Series, ParseError> {
        // leading signs
        let mut negate = false;
        loop {
            match self.peek() {
                Some(Token::Minus) => {
                    negate = !negate;
                    self.bump();
                }
                Some(Token::Plus) => {
                    self.bump();
                }
                _ => break,
            }
        }
        let mut base = self.atom()?;
        if self.peek() == Some(&Token::Caret) {
            self.bump();
            let position = self.here();
            match self.bump() {
                Some(Token::Int(e)) => {
                    let e: u32 = e.try_into().map_err(|_| ParseError {
                        position,
                        message: "exponent too large".into(),
                    })?;
                    base = pow_series(&base, e);
                }
                Some(Token::Minus) => {
                    return Err(ParseError {
                        position,
                        message: "exponents must be nonnegative integers".into(),
                    })
                }
                _ => {
                    return Err(ParseError {
                        position,
                        message: "expected a nonnegative integer exponent".into(),
                    })
                }
            }
        }
        Ok(if negate { base.neg() } else { base })
    }

    fn atom(&mut self) -> Result<Series, ParseError> {
        let position = self.here();
        match self.bump() {
            Some(Token::Int(n)) => {
                // optional rational literal a/b
                if self.peek() == Some(&Token::Slash) {
                    self.bump();
                    let dpos = self.here();
                    match self.bump() {
                        Some(Token::Int(d)) => {
                            let c = FieldElement::from_ratio(self.field, &n, &d).map_err(
                                |e| ParseError {
                                    position: dpos,
                                    message: e.to_string(),
                                },
                            )?;
                            Ok(Series::monomial(ExponentVector::zero(self.n_vars()), c))
                        }
                        _ => Err(ParseError {
                            position: dpos,
                            message: "expected an integer denominator".into(),
                        }),
                    }
                } else {
                    let c = FieldElement::from_bigint(self.field, &n);
                    Ok(Series::monomial(ExponentVector::zero(self.n_vars()), c))
                }
            }
            Some(Token::Ident(name)) => match self.vars.iter().position(|v| v == &name) {
                Some(index) => {
                    let mut exp = ExponentVector::zero(self.n_vars());
                    exp.0[index] = 1;
                    Ok(Series::monomial(exp, FieldElement::one(self.field)))
                }
                None => Err(ParseError {
                    position,
                    message: format!("unknown variable '{name}'"),
                }),
            },
            Some(Token::LParen) => {
                let inner = self.expr()?;
                self.expect(Token::RParen, "closing parenthesis")?;
                Ok(inner)
            }
            Some(other) => Err(ParseError {
                position,
                message: format!("unexpected token {other:?}"),
            }),
            None => Err(ParseError {
                position,
                message: "unexpected end of input".into(),
            }),
        }
    }
}

fn pow_series(base: &Series, mut e: u32) -> Series {
    let mut acc = Series::one(base.n_vars(), base.field());
    let mut sq = base.clone();
    while e > 0 {
        if e & 1 == 1 {
            acc = acc.mul(&sq).expect("same ambient");
        }
        sq = sq.mul(&sq).expect("same ambient");
        e >>= 1;
    }
    acc
}

/// Parses an expression over the named variables into a fully expanded
/// sparse series; integer literals reduce into the field.
pub fn parse_expression(
    text: &str,
    vars: &[String],
    field: FieldSpec,
) -> Result<Series, ParseError> {
    let tokens = lex(text)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        vars,
        field,
        end: text.len(),
    };
    let series = parser.expr()?;
    if parser.pos != parser.tokens.len() {
        return parser.err("trailing input (implicit multiplication is not allowed)");
    }
    Ok(series)
}
