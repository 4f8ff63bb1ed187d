//! Recursive-descent parser producing the expression tree.
//!
//! `^` is overloaded: after a scalar expression it is an integer power,
//! after anything containing a differential it is a wedge. The operand
//! shape decides, so `z0^2` and `dz0^dz1` both read naturally. Power and
//! wedge chains associate to the left.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::lexer::{tokenize, Token, TokenKind};
use super::ParseError;

/// One node of the parsed expression, tagged with its source position.
#[derive(Debug, Clone, PartialEq)]
pub struct Expr {
    pub kind: ExprKind,
    pub line: usize,
    pub column: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExprKind {
    Number(BigInt),
    ImaginaryUnit,
    /// Free identifier, resolved against bindings during elaboration.
    Identifier(String),
    /// Coordinate `z_k`.
    Variable(usize),
    /// Coordinate differential `dz_k`.
    Differential(usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Quot(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Wedge(Box<Expr>, Box<Expr>),
}

impl Expr {
    fn new(kind: ExprKind, line: usize, column: usize) -> Self {
        Expr { kind, line, column }
    }

    fn at_token(kind: ExprKind, tok: &Token) -> Self {
        Self::new(kind, tok.line, tok.column)
    }
}

/// True when any differential appears in the subtree; decides whether a
/// following `^` is a wedge or a power.
fn contains_differential(expr: &Expr) -> bool {
    match &expr.kind {
        ExprKind::Differential(_) => true,
        ExprKind::Number(_)
        | ExprKind::ImaginaryUnit
        | ExprKind::Identifier(_)
        | ExprKind::Variable(_) => false,
        ExprKind::Neg(a) | ExprKind::Pow(a, _) => contains_differential(a),
        ExprKind::Add(a, b)
        | ExprKind::Mul(a, b)
        | ExprKind::Quot(a, b)
        | ExprKind::Wedge(a, b) => contains_differential(a) || contains_differential(b),
    }
}

pub(crate) fn parse(text: &str) -> Result<Expr, ParseError> {
    let tokens = tokenize(text)?;
    let mut parser = Parser { tokens, pos: 0 };
    let expr = parser.expr()?;
    let tail = parser.peek();
    if tail.kind != TokenKind::Eof {
        return Err(ParseError::new(
            tail.line,
            tail.column,
            format!("unexpected {} after the expression", tail.kind.describe()),
        ));
    }
    Ok(expr)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn advance(&mut self) -> Token {
        let tok = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        tok
    }

    /// expr := ['+'|'-'] term (('+'|'-') term)*
    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut acc = match self.peek().kind {
            TokenKind::Plus => {
                self.advance();
                self.term()?
            }
            TokenKind::Minus => {
                let sign = self.advance();
                let operand = self.term()?;
                Expr::at_token(ExprKind::Neg(Box::new(operand)), &sign)
            }
            _ => self.term()?,
        };
        loop {
            match self.peek().kind {
                TokenKind::Plus => {
                    let op = self.advance();
                    let rhs = self.term()?;
                    acc = Expr::at_token(ExprKind::Add(Box::new(acc), Box::new(rhs)), &op);
                }
                TokenKind::Minus => {
                    let op = self.advance();
                    let rhs = self.term()?;
                    let negated = Expr::at_token(ExprKind::Neg(Box::new(rhs)), &op);
                    acc = Expr::at_token(ExprKind::Add(Box::new(acc), Box::new(negated)), &op);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    /// term := factor (('*'|'/') factor)*
    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek().kind {
                TokenKind::Star => {
                    let op = self.advance();
                    let rhs = self.factor()?;
                    acc = Expr::at_token(ExprKind::Mul(Box::new(acc), Box::new(rhs)), &op);
                }
                TokenKind::Slash => {
                    let op = self.advance();
                    let rhs = self.factor()?;
                    acc = Expr::at_token(ExprKind::Quot(Box::new(acc), Box::new(rhs)), &op);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    /// factor := atom ('^' (uint | atom))*, powers for scalar bases and
    /// wedges for form bases.
    fn factor(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.atom()?;
        while self.peek().kind == TokenKind::Caret {
            let caret = self.advance();
            if contains_differential(&acc) {
                let rhs = self.atom()?;
                acc = Expr::at_token(ExprKind::Wedge(Box::new(acc), Box::new(rhs)), &caret);
            } else {
                let exponent = self.advance();
                let TokenKind::Int(value) = &exponent.kind else {
                    return Err(ParseError::new(
                        exponent.line,
                        exponent.column,
                        format!(
                            "exponent of a scalar expression must be a nonnegative integer, found {}",
                            exponent.kind.describe()
                        ),
                    ));
                };
                let Some(k) = value.to_u32() else {
                    return Err(ParseError::new(
                        exponent.line,
                        exponent.column,
                        format!("exponent {} does not fit in 32 bits", value),
                    ));
                };
                acc = Expr::at_token(ExprKind::Pow(Box::new(acc), k), &caret);
            }
        }
        Ok(acc)
    }

    /// atom := number | 'i' | identifier | var | diff | '(' expr ')'
    fn atom(&mut self) -> Result<Expr, ParseError> {
        let tok = self.advance();
        match tok.kind {
            TokenKind::Int(ref n) => Ok(Expr::at_token(ExprKind::Number(n.clone()), &tok)),
            TokenKind::ImaginaryUnit => Ok(Expr::at_token(ExprKind::ImaginaryUnit, &tok)),
            TokenKind::Ident(ref name) => {
                Ok(Expr::at_token(ExprKind::Identifier(name.clone()), &tok))
            }
            TokenKind::Var(k) => Ok(Expr::at_token(ExprKind::Variable(k), &tok)),
            TokenKind::Diff(k) => Ok(Expr::at_token(ExprKind::Differential(k), &tok)),
            TokenKind::LParen => {
                let inner = self.expr()?;
                let close = self.advance();
                if close.kind != TokenKind::RParen {
                    return Err(ParseError::new(
                        close.line,
                        close.column,
                        format!("expected ')', found {}", close.kind.describe()),
                    ));
                }
                Ok(inner)
            }
            ref other => Err(ParseError::new(
                tok.line,
                tok.column,
                format!(
                    "expected a number, coordinate, differential, or '(', found {}",
                    other.describe()
                ),
            )),
        }
    }
}
