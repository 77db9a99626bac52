use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenKind {
    Number,
    Ident,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
}

/// A lexeme borrowed from the source text.
///
/// `position` is the 0-based character offset of the first character.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Token<'a> {
    pub kind: TokenKind,
    pub text: &'a str,
    pub position: usize,
}

impl Token<'_> {
    /// Numeric value of a `Number` token.
    pub fn number(&self) -> Option<f64> {
        match self.kind {
            TokenKind::Number => self.text.parse().ok(),
            _ => None,
        }
    }

    /// Character offset one past the end of the token.
    pub fn end(&self) -> usize {
        self.position + self.text.chars().count()
    }
}

/// Splits `source` into tokens, skipping whitespace.
///
/// `e` and `pi` lex as identifiers; the parser resolves them to constants.
pub fn tokenize(source: &str) -> Result<Vec<Token<'_>>> {
    if source.trim().is_empty() {
        return Err(Error::Lex {
            position: 0,
            message: "empty expression".into(),
        });
    }

    let chars: Vec<(usize, char)> = source.char_indices().collect();
    let byte_at = |i: usize| chars.get(i).map_or(source.len(), |&(b, _)| b);
    let mut tokens = Vec::new();
    let mut i = 0;

    while i < chars.len() {
        let c = chars[i].1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }

        let start = i;
        let single = match c {
            '+' => Some(TokenKind::Plus),
            '-' => Some(TokenKind::Minus),
            '*' => Some(TokenKind::Star),
            '/' => Some(TokenKind::Slash),
            '^' => Some(TokenKind::Caret),
            '(' => Some(TokenKind::LParen),
            ')' => Some(TokenKind::RParen),
            ',' => Some(TokenKind::Comma),
            _ => None,
        };

        let kind = if let Some(kind) = single {
            i += 1;
            kind
        } else if c.is_ascii_digit() || c == '.' {
            i = scan_number(&chars, i);
            TokenKind::Number
        } else if c.is_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].1.is_alphanumeric() || chars[i].1 == '_') {
                i += 1;
            }
            TokenKind::Ident
        } else {
            return Err(Error::Lex {
                position: start,
                message: format!("unrecognized character `{c}`"),
            });
        };

        let text = &source[byte_at(start)..byte_at(i)];
        if kind == TokenKind::Number {
            match text.parse::<f64>() {
                Ok(v) if v.is_finite() => {}
                _ => {
                    return Err(Error::Lex {
                        position: start,
                        message: format!("malformed or non-finite number `{text}`"),
                    })
                }
            }
        }
        tokens.push(Token {
            kind,
            text,
            position: start,
        });
    }

    Ok(tokens)
}

// digits [. digits] [(e|E) [+|-] digits]; the exponent is only taken when a digit follows,
// so `2e` lexes as the number 2 followed by the identifier e.
fn scan_number(chars: &[(usize, char)], mut i: usize) -> usize {
    let digit = |i: usize| chars.get(i).is_some_and(|&(_, c)| c.is_ascii_digit());
    while digit(i) {
        i += 1;
    }
    if chars.get(i).is_some_and(|&(_, c)| c == '.') {
        i += 1;
        while digit(i) {
            i += 1;
        }
    }
    if chars.get(i).is_some_and(|&(_, c)| c == 'e' || c == 'E') {
        let mut j = i + 1;
        if chars.get(j).is_some_and(|&(_, c)| c == '+' || c == '-') {
            j += 1;
        }
        if digit(j) {
            i = j;
            while digit(i) {
                i += 1;
            }
        }
    }
    i
}

#[cfg(test)]
mod tests {
    use super::*;
    use TokenKind::*;

    fn kinds(src: &str) -> Vec<(TokenKind, String)> {
        tokenize(src)
            .unwrap()
            .into_iter()
            .map(|t| (t.kind, t.text.to_string()))
            .collect()
    }

    #[test]
    fn lexes_power() {
        assert_eq!(
            kinds("x^2"),
            vec![
                (Ident, "x".into()),
                (Caret, "^".into()),
                (Number, "2".into())
            ]
        );
    }

    #[test]
    fn lexes_abs_call() {
        let got: Vec<TokenKind> = kinds("abs(x-1/2)").into_iter().map(|t| t.0).collect();
        assert_eq!(
            got,
            vec![Ident, LParen, Ident, Minus, Number, Slash, Number, RParen]
        );
    }

    #[test]
    fn rejects_unknown_character() {
        match tokenize("x $ 2") {
            Err(Error::Lex { position, .. }) => assert_eq!(position, 2),
            other => panic!("expected lex error, got {other:?}"),
        }
    }

    #[test]
    fn constants_are_identifiers() {
        assert_eq!(
            kinds("e*pi"),
            vec![
                (Ident, "e".into()),
                (Star, "*".into()),
                (Ident, "pi".into())
            ]
        );
    }

    #[test]
    fn exponent_notation_needs_a_digit() {
        assert_eq!(kinds("1.5e-3"), vec![(Number, "1.5e-3".into())]);
        assert_eq!(kinds("2e"), vec![(Number, "2".into()), (Ident, "e".into())]);
    }

    #[test]
    fn positions_strictly_increase() {
        let toks = tokenize("  exp( 2 * x )-cos(pi*x)").unwrap();
        assert!(toks.windows(2).all(|w| w[0].position < w[1].position));
        assert_eq!(toks[0].position, 2);
    }

    #[test]
    fn rejects_empty_and_overflowing_input() {
        assert!(matches!(tokenize("   "), Err(Error::Lex { .. })));
        assert!(matches!(
            tokenize("1e999"),
            Err(Error::Lex { position: 0, .. })
        ));
    }
}
