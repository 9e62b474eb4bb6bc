//! Text format for polynomials:
//!
//! ```text
//! poly   := term (('+' | '-') term)*
//! term   := [coef] factor*
//! factor := var ('^' nat)?
//! coef   := int ('/' posint)?
//! ```
//!
//! Whitespace is insignificant, juxtaposition multiplies, and `#` starts a
//! comment running to the end of the line.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::jetring::{Grading, Monomial, Rational, Var, WeightedPoly};

struct Cursor<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    column: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Cursor { chars: text.chars().peekable(), line: 1, column: 1 }
    }

    fn error(&self, message: impl Into<String>) -> Error {
        Error::Parse { line: self.line, column: self.column, message: message.into() }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    /// Next significant character, skipping blanks and comments.
    fn peek(&mut self) -> Option<char> {
        loop {
            match self.chars.peek().copied() {
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some('#') => {
                    while let Some(c) = self.bump() {
                        if c == '\n' {
                            break;
                        }
                    }
                }
                other => return other,
            }
        }
    }

    fn digits(&mut self) -> String {
        let mut s = String::new();
        while let Some(c) = self.peek().filter(char::is_ascii_digit) {
            s.push(c);
            self.bump();
        }
        s
    }
}

fn var_list(allowed: &[Var]) -> String {
    allowed.iter().map(|v| v.name().to_string()).collect::<Vec<_>>().join(", ")
}

/// Parses an exact polynomial in the allowed variables and returns it as a
/// jet of the given grading and order (terms above the order are dropped).
pub fn parse_poly(text: &str, allowed: &[Var], grading: Grading, order: i32) -> Result<WeightedPoly> {
    let mut cur = Cursor::new(text);
    let mut terms: Vec<(Monomial, Rational)> = Vec::new();
    let mut first = true;
    loop {
        let mut sign = Rational::one();
        match cur.peek() {
            None if first => return Err(cur.error("empty polynomial")),
            None => return Err(cur.error("expected a term after the sign")),
            Some('+') => {
                cur.bump();
            }
            Some('-') => {
                cur.bump();
                sign = -sign;
            }
            Some(_) if first => {}
            Some(c) => return Err(cur.error(format!("expected '+' or '-', found '{c}'"))),
        }
        first = false;

        let mut coef = sign;
        let mut seen = false;
        if cur.peek().is_some_and(|c| c.is_ascii_digit()) {
            let n: BigInt = cur.digits().parse().expect("digits");
            let mut c = Rational::from_integer(n);
            if cur.peek() == Some('/') {
                cur.bump();
                let d = cur.digits();
                if d.is_empty() {
                    return Err(cur.error("expected a denominator after '/'"));
                }
                let d: BigInt = d.parse().expect("digits");
                if d.is_zero() {
                    return Err(cur.error("zero denominator"));
                }
                c /= Rational::from_integer(d);
            }
            coef *= c;
            seen = true;
        }
        let mut exps = [0u16; 5];
        while let Some(c) = cur.peek().filter(|c| c.is_alphabetic()) {
            let v = match Var::from_char(c) {
                Some(v) if allowed.contains(&v) => v,
                Some(_) => {
                    return Err(cur.error(format!("variable {c} not allowed here (expected {})", var_list(allowed))))
                }
                None => return Err(cur.error(format!("unknown variable {c}"))),
            };
            cur.bump();
            let mut e: u32 = 1;
            if cur.peek() == Some('^') {
                cur.bump();
                let d = cur.digits();
                e = d.parse().map_err(|_| cur.error("expected an exponent after '^'"))?;
            }
            let slot = &mut exps[v.index()];
            *slot = u16::try_from(*slot as u32 + e).map_err(|_| cur.error("exponent too large"))?;
            seen = true;
        }
        if !seen {
            return Err(match cur.peek() {
                Some(c) => cur.error(format!("unexpected character '{c}'")),
                None => cur.error("expected a term"),
            });
        }
        terms.push((Monomial::new(exps[0], exps[1], exps[2], exps[3], exps[4]), coef));
        if cur.peek().is_none() {
            break;
        }
    }
    let exact_order = terms.iter().map(|(m, _)| grading.weight(m) as i32).max().unwrap_or(0);
    Ok(WeightedPoly::from_terms(terms, grading, exact_order.max(order)).truncate(order))
}
