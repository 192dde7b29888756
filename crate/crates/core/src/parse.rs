//! Reading and printing germ expressions.
//!
//! ```text
//! expr  := sign? term (('+' | '-') term)*
//! term  := coeff? ('*'? var ('^' nat)?)*
//! coeff := int | int '/' posint
//! var   := 'z' | 'w'
//! ```
//!
//! Whitespace between tokens is ignored. A term needs a coefficient or at least one
//! variable. Printing uses the same grammar, so `parse(print(p)) == p`.

use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::poly::{Monomial, SparsePoly2};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected character '{0}'")]
    Unexpected(char),
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("empty term")]
    EmptyTerm,
    #[error("negative exponent")]
    NegativeExponent,
    #[error("exponent too large")]
    ExponentOverflow,
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("variable '{0}' not allowed here")]
    VariableNotAllowed(char),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{kind} at position {position}")]
pub struct ParseError {
    /// Character offset into the input.
    pub position: usize,
    pub kind: ParseErrorKind,
}

pub const ALL_VARS: &[char] = &['z', 'w'];
pub const Z_ONLY: &[char] = &['z'];

struct Cursor<'a> {
    chars: alloc::vec::Vec<char>,
    pos: usize,
    allowed: &'a [char],
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn err(&self, kind: ParseErrorKind) -> ParseError {
        ParseError {
            position: self.pos,
            kind,
        }
    }

    fn digits(&mut self) -> Option<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        let s: alloc::string::String = self.chars[start..self.pos].iter().collect();
        s.parse().ok()
    }

    fn coefficient(&mut self) -> Result<Option<Rational>, ParseError> {
        let Some(num) = self.digits() else {
            return Ok(None);
        };
        if self.peek() == Some('/') {
            self.pos += 1;
            let at = self.pos;
            let den = match self.peek() {
                Some('-') => return Err(self.err(ParseErrorKind::Unexpected('-'))),
                Some(_) => self.digits(),
                None => return Err(self.err(ParseErrorKind::UnexpectedEnd)),
            };
            let den = match den {
                Some(d) => d,
                None => {
                    let c = self.peek().expect("peeked above");
                    return Err(self.err(ParseErrorKind::Unexpected(c)));
                }
            };
            if den.is_zero() {
                return Err(ParseError {
                    position: at,
                    kind: ParseErrorKind::ZeroDenominator,
                });
            }
            return Ok(Some(Rational::new(num, den)));
        }
        Ok(Some(Rational::from_integer(num)))
    }

    fn exponent(&mut self) -> Result<u64, ParseError> {
        match self.peek() {
            Some('-') => Err(self.err(ParseErrorKind::NegativeExponent)),
            Some(c) if c.is_ascii_digit() => {
                let at = self.pos;
                let n = self.digits().expect("digit present");
                u64::try_from(n).map_err(|_| ParseError {
                    position: at,
                    kind: ParseErrorKind::ExponentOverflow,
                })
            }
            Some(c) => Err(self.err(ParseErrorKind::Unexpected(c))),
            None => Err(self.err(ParseErrorKind::UnexpectedEnd)),
        }
    }

    fn term(&mut self) -> Result<(Monomial, Rational), ParseError> {
        let start = self.pos;
        let coeff = self.coefficient()?;
        let mut seen_any = coeff.is_some();
        let mut m = Monomial::new(0, 0);
        loop {
            let save = self.pos;
            let mut c = self.peek();
            let mut starred = false;
            if c == Some('*') {
                if !seen_any {
                    return Err(self.err(ParseErrorKind::Unexpected('*')));
                }
                self.pos += 1;
                starred = true;
                c = self.peek();
            }
            match c {
                Some(v @ ('z' | 'w')) => {
                    if !self.allowed.contains(&v) {
                        return Err(self.err(ParseErrorKind::VariableNotAllowed(v)));
                    }
                    self.pos += 1;
                    let mut e = 1;
                    if self.peek() == Some('^') {
                        self.pos += 1;
                        e = self.exponent()?;
                    }
                    let slot = if v == 'z' { &mut m.z } else { &mut m.w };
                    *slot = slot
                        .checked_add(e)
                        .ok_or_else(|| self.err(ParseErrorKind::ExponentOverflow))?;
                    seen_any = true;
                }
                Some(other) if starred => {
                    return Err(self.err(ParseErrorKind::Unexpected(other)));
                }
                None if starred => return Err(self.err(ParseErrorKind::UnexpectedEnd)),
                _ => {
                    self.pos = save;
                    break;
                }
            }
        }
        if !seen_any {
            return Err(match self.peek() {
                Some(c) if self.pos > start || c == '+' || c == '-' => self.err(ParseErrorKind::EmptyTerm),
                Some(c) => self.err(ParseErrorKind::Unexpected(c)),
                None => self.err(ParseErrorKind::UnexpectedEnd),
            });
        }
        Ok((m, coeff.unwrap_or_else(Rational::one)))
    }
}

/// Parses an expression over the variables in `allowed_vars`.
///
/// Duplicate monomials are summed and cancelled terms dropped.
pub fn parse_poly(text: &str, allowed_vars: &[char]) -> Result<SparsePoly2, ParseError> {
    let mut cur = Cursor {
        chars: text.chars().collect(),
        pos: 0,
        allowed: allowed_vars,
    };
    let mut terms = alloc::vec::Vec::new();
    let mut negate = match cur.peek() {
        Some('-') => {
            cur.pos += 1;
            true
        }
        Some('+') => {
            cur.pos += 1;
            false
        }
        None => return Err(cur.err(ParseErrorKind::UnexpectedEnd)),
        _ => false,
    };
    loop {
        let (m, c) = cur.term()?;
        terms.push((m, if negate { -c } else { c }));
        match cur.peek() {
            Some('+') => {
                cur.pos += 1;
                negate = false;
            }
            Some('-') => {
                cur.pos += 1;
                negate = true;
            }
            Some(c) => return Err(cur.err(ParseErrorKind::Unexpected(c))),
            None => break,
        }
    }
    Ok(SparsePoly2::from_terms(terms))
}

fn write_monomial(f: &mut fmt::Formatter<'_>, m: &Monomial) -> fmt::Result {
    let mut first = true;
    for (name, e) in [('z', m.z), ('w', m.w)] {
        if e == 0 {
            continue;
        }
        if !first {
            f.write_str("*")?;
        }
        first = false;
        if e == 1 {
            write!(f, "{}", name)?;
        } else {
            write!(f, "{}^{}", name, e)?;
        }
    }
    Ok(())
}

impl fmt::Display for SparsePoly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (idx, (m, c)) in self.terms().enumerate() {
            let negative = c.is_negative();
            match (idx, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let abs = c.abs();
            let constant = m.z == 0 && m.w == 0;
            if constant {
                write!(f, "{}", abs)?;
            } else if abs.is_one() {
                write_monomial(f, m)?;
            } else {
                write!(f, "{}*", abs)?;
                write_monomial(f, m)?;
            }
        }
        Ok(())
    }
}
