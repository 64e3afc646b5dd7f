//! Textual set expressions.
//!
//! ```text
//! expr   := term (('|' | '\') term)*        left-associative
//! term   := atom ('&' atom)*
//! atom   := 'I' | 'O' | 'E' | 'N'
//!         | 'Y' '(' int ')'                 int = -a, a >= 0
//!         | 'Q' '(' int ')'                 int = -b, b >= 1
//!         | 'Ray' '(' int ',' int ')'       start, nonzero step
//!         | 'Fin' '{' [int (',' int)*] '}'
//!         | '(' expr ')'
//! int    := ['-' | '+'] digits
//! ```
//!
//! `&` binds tighter than `|` and `\`, which share a precedence level.
//! Printing a set yields one of the named atoms `I`, `O`, `E`, `N` when it
//! equals one, and otherwise a union of `Ray` and `Fin` atoms. Either form
//! parses back to the identical canonical value.

use std::fmt;

use thiserror::Error;

use super::{Element, EventuallyPeriodicSet};

/// Largest absolute value accepted inside an expression. Keeps explicit
/// windows at a size that fits comfortably in memory.
pub const MAX_LITERAL: Element = 1 << 22;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("unexpected end of input in `{0}`")]
    UnexpectedEnd(String),
    #[error("unexpected `{found}` at offset {offset}")]
    Unexpected { found: String, offset: usize },
    #[error("unknown atom `{0}`")]
    UnknownAtom(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("literal {0} exceeds the supported magnitude")]
    TooLarge(i128),
}

/// Parses a set expression into its canonical form.
pub fn parse_set(input: &str) -> Result<EventuallyPeriodicSet, ParseError> {
    let mut p = Parser {
        src: input,
        tokens: tokenize(input)?,
        pos: 0,
    };
    let set = p.expr()?;
    if let Some(tok) = p.tokens.get(p.pos) {
        return Err(ParseError::Unexpected {
            found: tok.text.clone(),
            offset: tok.offset,
        });
    }
    Ok(set)
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Kind {
    Ident,
    Int(i128),
    Punct(char),
}

#[derive(Debug, Clone)]
struct Token {
    kind: Kind,
    text: String,
    offset: usize,
}

fn tokenize(src: &str) -> Result<Vec<Token>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < bytes.len() && (bytes[i] as char).is_ascii_alphanumeric() {
                i += 1;
            }
            out.push(Token {
                kind: Kind::Ident,
                text: src[start..i].to_string(),
                offset: start,
            });
        } else if c.is_ascii_digit() || ((c == '-' || c == '+') && next_is_digit(bytes, i)) {
            let start = i;
            i += 1;
            while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                i += 1;
            }
            let text = &src[start..i];
            let value: i128 = text.parse().map_err(|_| ParseError::Unexpected {
                found: text.to_string(),
                offset: start,
            })?;
            out.push(Token {
                kind: Kind::Int(value),
                text: text.to_string(),
                offset: start,
            });
        } else if "(){},|&\\".contains(c) {
            out.push(Token {
                kind: Kind::Punct(c),
                text: c.to_string(),
                offset: i,
            });
            i += 1;
        } else {
            return Err(ParseError::Unexpected {
                found: c.to_string(),
                offset: i,
            });
        }
    }
    Ok(out)
}

fn next_is_digit(bytes: &[u8], i: usize) -> bool {
    bytes.get(i + 1).is_some_and(|b| b.is_ascii_digit())
}

struct Parser<'a> {
    src: &'a str,
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Result<Token, ParseError> {
        let tok = self
            .tokens
            .get(self.pos)
            .cloned()
            .ok_or_else(|| ParseError::UnexpectedEnd(self.src.to_string()))?;
        self.pos += 1;
        Ok(tok)
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        let tok = self.next()?;
        if tok.kind == Kind::Punct(c) {
            Ok(())
        } else {
            Err(ParseError::Unexpected {
                found: tok.text,
                offset: tok.offset,
            })
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek().is_some_and(|t| t.kind == Kind::Punct(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn int(&mut self) -> Result<Element, ParseError> {
        let tok = self.next()?;
        match tok.kind {
            Kind::Int(v) if v.abs() <= MAX_LITERAL as i128 => Ok(v as Element),
            Kind::Int(v) => Err(ParseError::TooLarge(v)),
            _ => Err(ParseError::Unexpected {
                found: tok.text,
                offset: tok.offset,
            }),
        }
    }

    fn expr(&mut self) -> Result<EventuallyPeriodicSet, ParseError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('|') {
                acc = acc.union(&self.term()?);
            } else if self.eat('\\') {
                acc = acc.difference(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<EventuallyPeriodicSet, ParseError> {
        let mut acc = self.atom()?;
        while self.eat('&') {
            acc = acc.intersect(&self.atom()?);
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<EventuallyPeriodicSet, ParseError> {
        let tok = self.next()?;
        match tok.kind {
            Kind::Punct('(') => {
                let inner = self.expr()?;
                self.expect(')')?;
                Ok(inner)
            }
            Kind::Ident => match tok.text.as_str() {
                "I" => Ok(EventuallyPeriodicSet::integers()),
                "O" => Ok(EventuallyPeriodicSet::odd_positive()),
                "E" => Ok(EventuallyPeriodicSet::even_nonnegative()),
                "N" => Ok(EventuallyPeriodicSet::negatives()),
                "Y" => {
                    self.expect('(')?;
                    let v = self.int()?;
                    self.expect(')')?;
                    if v > 0 {
                        return Err(ParseError::InvalidParameter(format!(
                            "Y takes -a with a >= 0, got {v}"
                        )));
                    }
                    Ok(EventuallyPeriodicSet::y_set(v.unsigned_abs()))
                }
                "Q" => {
                    self.expect('(')?;
                    let v = self.int()?;
                    self.expect(')')?;
                    if v >= 0 {
                        return Err(ParseError::InvalidParameter(format!(
                            "Q takes -b with b >= 1, got {v}"
                        )));
                    }
                    Ok(EventuallyPeriodicSet::q_set(v.unsigned_abs()))
                }
                "Ray" => {
                    self.expect('(')?;
                    let start = self.int()?;
                    self.expect(',')?;
                    let step = self.int()?;
                    self.expect(')')?;
                    if step == 0 {
                        return Err(ParseError::InvalidParameter(
                            "Ray step must be nonzero".into(),
                        ));
                    }
                    Ok(EventuallyPeriodicSet::ray(start, step))
                }
                "Fin" => {
                    self.expect('{')?;
                    let mut members = Vec::new();
                    if !self.eat('}') {
                        loop {
                            members.push(self.int()?);
                            if self.eat('}') {
                                break;
                            }
                            self.expect(',')?;
                        }
                    }
                    Ok(EventuallyPeriodicSet::finite(members))
                }
                other => Err(ParseError::UnknownAtom(other.to_string())),
            },
            _ => Err(ParseError::Unexpected {
                found: tok.text,
                offset: tok.offset,
            }),
        }
    }
}

impl fmt::Display for EventuallyPeriodicSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let named = [
            ("I", EventuallyPeriodicSet::integers()),
            ("O", EventuallyPeriodicSet::odd_positive()),
            ("E", EventuallyPeriodicSet::even_nonnegative()),
            ("N", EventuallyPeriodicSet::negatives()),
        ];
        if let Some((name, _)) = named.iter().find(|(_, s)| s == self) {
            return f.write_str(name);
        }
        let (lo, hi) = self.window_bounds();
        let mut parts = Vec::new();
        let neg = self.neg_tail();
        let d = neg.period() as Element;
        for r in neg.residues() {
            // largest x < lo with x ≡ r (mod d)
            let x = lo - 1 - (lo - 1 - r as Element).rem_euclid(d);
            parts.push(format!("Ray({x}, {})", -d));
        }
        let members: Vec<String> = self.window_members().map(|x| x.to_string()).collect();
        if !members.is_empty() {
            parts.push(format!("Fin{{{}}}", members.join(", ")));
        }
        let pos = self.pos_tail();
        let d = pos.period() as Element;
        for r in pos.residues() {
            // smallest x > hi with x ≡ r (mod d)
            let x = hi + 1 + (r as Element - hi - 1).rem_euclid(d);
            parts.push(format!("Ray({x}, {d})"));
        }
        if parts.is_empty() {
            f.write_str("Fin{}")
        } else {
            f.write_str(&parts.join(" | "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence_and_associativity() {
        // & binds tighter: I \ N & E = I \ (N & E) = I
        assert_eq!(
            parse_set("I \\ N & E").unwrap(),
            EventuallyPeriodicSet::integers()
        );
        // left-assoc: (I \ N) | N = I
        assert_eq!(
            parse_set("I \\ N | N").unwrap(),
            EventuallyPeriodicSet::integers()
        );
        assert_eq!(
            parse_set("I \\ (N | E)").unwrap(),
            EventuallyPeriodicSet::odd_positive()
        );
    }

    #[test]
    fn malformed_inputs() {
        assert!(matches!(parse_set("Y("), Err(ParseError::UnexpectedEnd(_))));
        assert!(matches!(
            parse_set("Y(3)"),
            Err(ParseError::InvalidParameter(_))
        ));
        assert!(matches!(
            parse_set("Q(0)"),
            Err(ParseError::InvalidParameter(_))
        ));
        assert!(matches!(
            parse_set("Ray(1, 0)"),
            Err(ParseError::InvalidParameter(_))
        ));
        assert!(matches!(parse_set("Z"), Err(ParseError::UnknownAtom(_))));
        assert!(matches!(
            parse_set("O O"),
            Err(ParseError::Unexpected { .. })
        ));
        assert!(matches!(
            parse_set("Fin{1,}"),
            Err(ParseError::Unexpected { .. })
        ));
        assert!(matches!(
            parse_set("Fin{99999999}"),
            Err(ParseError::TooLarge(_))
        ));
        assert!(matches!(parse_set(""), Err(ParseError::UnexpectedEnd(_))));
    }

    #[test]
    fn printing_round_trips_named_sets() {
        for spec in [
            "I",
            "O",
            "E",
            "N",
            "Y(0)",
            "Y(-4)",
            "Q(-1)",
            "Q(-6)",
            "Fin{}",
            "Fin{-3, 8}",
            "Ray(5, 3)",
            "Ray(-2, -7)",
            "N | E",
            "I \\ Fin{0}",
        ] {
            let set = parse_set(spec).unwrap();
            let printed = set.to_string();
            assert_eq!(
                parse_set(&printed).unwrap(),
                set,
                "{spec} printed as {printed}"
            );
        }
    }

    #[test]
    fn print_forms() {
        assert_eq!(EventuallyPeriodicSet::empty().to_string(), "Fin{}");
        assert_eq!(parse_set("Ray(0, 2)").unwrap().to_string(), "E");
        assert_eq!(parse_set("Ray(1, 2)").unwrap().to_string(), "O");
        assert_eq!(parse_set("N | E | O").unwrap().to_string(), "I");
        assert_eq!(parse_set("Y(0)").unwrap().to_string(), "E");
        assert_eq!(
            parse_set("Y(-1)").unwrap().to_string(),
            "Fin{-1, 0} | Ray(2, 2)"
        );
        assert_eq!(parse_set("Ray(3, 2)").unwrap().to_string(), "Ray(3, 2)");
    }
}
