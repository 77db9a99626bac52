use super::ast::{Expr, Func, NamedConst, Rational};
use super::lexer::{Token, TokenKind};
use crate::error::{Error, Result};

/// Recursive-descent parser over a token stream.
///
/// ```text
/// expr    := term (('+' | '-') term)*
/// term    := factor (('*' | '/') factor)*
/// factor  := '-' factor | power
/// power   := primary ('^' factor)?
/// primary := number | 'x' | 'e' | 'pi' | func '(' expr ')' | '(' expr ')'
/// ```
///
/// `^` is right-associative and binds tighter than unary minus, so `-x^2` is `-(x^2)`.
pub fn parse(tokens: &[Token<'_>]) -> Result<Expr> {
    let mut parser = Parser { tokens, pos: 0 };
    let expr = parser.expr()?;
    if let Some(tok) = parser.peek() {
        return Err(Error::Parse {
            position: tok.position,
            expected: "operator or end of input".into(),
        });
    }
    Ok(expr)
}

struct Parser<'t, 'a> {
    tokens: &'t [Token<'a>],
    pos: usize,
}

impl<'a> Parser<'_, 'a> {
    fn peek(&self) -> Option<&Token<'a>> {
        self.tokens.get(self.pos)
    }

    fn at(&self, kind: TokenKind) -> bool {
        self.peek().is_some_and(|t| t.kind == kind)
    }

    fn here(&self) -> usize {
        match self.peek() {
            Some(t) => t.position,
            None => self.tokens.last().map_or(0, Token::end),
        }
    }

    fn error<T>(&self, expected: &str) -> Result<T> {
        Err(Error::Parse {
            position: self.here(),
            expected: expected.into(),
        })
    }

    fn expect(&mut self, kind: TokenKind, expected: &str) -> Result<()> {
        if self.at(kind) {
            self.pos += 1;
            Ok(())
        } else {
            self.error(expected)
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.at(TokenKind::Plus) {
                self.pos += 1;
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.at(TokenKind::Minus) {
                self.pos += 1;
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        loop {
            if self.at(TokenKind::Star) {
                self.pos += 1;
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
            } else if self.at(TokenKind::Slash) {
                self.pos += 1;
                lhs = Expr::Div(Box::new(lhs), Box::new(self.factor()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        if self.at(TokenKind::Minus) {
            self.pos += 1;
            return Ok(Expr::Neg(Box::new(self.factor()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.primary()?;
        if !self.at(TokenKind::Caret) {
            return Ok(base);
        }
        self.pos += 1;
        let exponent = self.factor()?;
        let rational = literal_rational(&exponent);
        Ok(Expr::Pow {
            base: Box::new(base),
            exponent: Box::new(exponent),
            rational,
        })
    }

    fn primary(&mut self) -> Result<Expr> {
        let Some(&tok) = self.peek() else {
            return self.error("expression");
        };
        match tok.kind {
            TokenKind::Number => {
                self.pos += 1;
                // the lexer already rejected non-finite literals
                Ok(Expr::Const(tok.number().unwrap_or_default()))
            }
            TokenKind::LParen => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(TokenKind::RParen, "`)`")?;
                Ok(inner)
            }
            TokenKind::Ident => {
                self.pos += 1;
                match tok.text {
                    "x" => Ok(Expr::Var),
                    "e" => Ok(Expr::Named(NamedConst::E)),
                    "pi" => Ok(Expr::Named(NamedConst::Pi)),
                    name => {
                        let Some(func) = Func::from_name(name) else {
                            return Err(Error::Parse {
                                position: tok.position,
                                expected: format!(
                                    "`x`, `e`, `pi`, or a supported function (unknown identifier `{name}`)"
                                ),
                            });
                        };
                        self.expect(TokenKind::LParen, "`(` after function name")?;
                        let arg = self.expr()?;
                        self.expect(TokenKind::RParen, "`)`")?;
                        Ok(Expr::Call(func, Box::new(arg)))
                    }
                }
            }
            _ => self.error("expression"),
        }
    }
}

/// Recognizes the exponent shapes that count as a literal rational:
/// `n`, `-n`, `(n)`, `(-n)`, `(n/m)`, `(-n/m)` and `-(n/m)`, with decimal literals n, m.
/// Exponent shapes taken as literal rationals: `n`, `n/m`, with at most one minus
/// sign in front of either the whole quotient or its numerator. Parentheses are
/// invisible here, so `x^(-(1/3))` and `x^-(1/3)` agree.
fn literal_rational(exponent: &Expr) -> Option<Rational> {
    fn decimal(e: &Expr) -> Option<Rational> {
        match e {
            // shortest round-trip text, so the result depends only on the stored value
            Expr::Const(v) => Rational::from_decimal(&v.to_string()),
            _ => None,
        }
    }
    fn numerator(e: &Expr, signed: bool) -> Option<Rational> {
        match e {
            Expr::Neg(inner) if signed => decimal(inner)?.checked_neg(),
            _ => decimal(e),
        }
    }
    fn quotient(e: &Expr, signed: bool) -> Option<Rational> {
        match e {
            Expr::Div(n, m) => numerator(n, signed)?.checked_div(decimal(m)?),
            _ => numerator(e, signed),
        }
    }

    match exponent {
        Expr::Neg(inner) => quotient(inner, false)?.checked_neg(),
        _ => quotient(exponent, true),
    }
}
