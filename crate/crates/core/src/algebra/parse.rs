//! Text syntax for series: sums of `c * x^q * exp(i*w*x) * y^p * exp(a*y)`.
//!
//! Coefficients are real literals or complex literals `(re,im)`. Factors may
//! appear in any order; a term consisting of factors only has coefficient 1.
//! A leading `-` negates a term.

use num_complex::Complex64;

use super::series::{SeriesFunction, Term};
use crate::error::{EvansError, Result};

struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(format!("expected '{}'", c as char)))
        }
    }

    fn eat_word(&mut self, w: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(w.as_bytes()) {
            self.pos += w.len();
            true
        } else {
            false
        }
    }

    fn err(&self, msg: impl Into<String>) -> EvansError {
        EvansError::Parse { pos: self.pos, msg: msg.into() }
    }

    fn number(&mut self) -> Result<f64> {
        self.skip_ws();
        let start = self.pos;
        let s = self.src;
        let mut i = self.pos;
        if i < s.len() && (s[i] == b'-' || s[i] == b'+') {
            i += 1;
        }
        while i < s.len() && (s[i].is_ascii_digit() || s[i] == b'.') {
            i += 1;
        }
        if i < s.len() && (s[i] == b'e' || s[i] == b'E') {
            let mut j = i + 1;
            if j < s.len() && (s[j] == b'-' || s[j] == b'+') {
                j += 1;
            }
            if j < s.len() && s[j].is_ascii_digit() {
                i = j;
                while i < s.len() && s[i].is_ascii_digit() {
                    i += 1;
                }
            }
        }
        let txt = std::str::from_utf8(&s[start..i]).expect("ascii");
        let v = txt.parse::<f64>().map_err(|_| self.err(format!("bad number '{txt}'")))?;
        self.pos = i;
        Ok(v)
    }

    fn integer(&mut self) -> Result<u32> {
        let v = self.number()?;
        if v < 0.0 || v.fract() != 0.0 {
            return Err(self.err("expected a nonnegative integer power"));
        }
        Ok(v as u32)
    }
}

/// Parse a sum of terms into a canonical [`SeriesFunction`].
pub fn parse_series(text: &str) -> Result<SeriesFunction> {
    let mut cur = Cursor { src: text.as_bytes(), pos: 0 };
    let mut terms = Vec::new();
    let mut sign = 1.0;
    if cur.eat(b'-') {
        sign = -1.0;
    }
    loop {
        let mut t = parse_term(&mut cur)?;
        t.coeff *= sign;
        terms.push(t);
        match cur.peek() {
            None => break,
            Some(b'+') => {
                cur.pos += 1;
                sign = 1.0;
            }
            Some(b'-') => {
                cur.pos += 1;
                sign = -1.0;
            }
            Some(_) => return Err(cur.err("expected '+', '-' or end of input")),
        }
    }
    SeriesFunction::from_terms(terms)
}

fn parse_term(cur: &mut Cursor<'_>) -> Result<Term> {
    let mut t = Term::constant(Complex64::new(1.0, 0.0));
    loop {
        parse_factor(cur, &mut t)?;
        if !cur.eat(b'*') {
            return Ok(t);
        }
    }
}

fn parse_factor(cur: &mut Cursor<'_>, t: &mut Term) -> Result<()> {
    match cur.peek() {
        Some(b'(') => {
            cur.pos += 1;
            let re = cur.number()?;
            cur.expect(b',')?;
            let im = cur.number()?;
            cur.expect(b')')?;
            t.coeff *= Complex64::new(re, im);
        }
        Some(b'x') => {
            cur.pos += 1;
            t.xpow += if cur.eat(b'^') { cur.integer()? } else { 1 };
        }
        Some(b'y') => {
            cur.pos += 1;
            t.ypow += if cur.eat(b'^') { cur.integer()? } else { 1 };
        }
        Some(b'e') if cur.eat_word("exp") => {
            cur.expect(b'(')?;
            if cur.eat(b'i') {
                cur.expect(b'*')?;
                let w = cur.number()?;
                cur.expect(b'*')?;
                cur.expect(b'x')?;
                t.xfreq += w;
            } else {
                let a = cur.number()?;
                cur.expect(b'*')?;
                cur.expect(b'y')?;
                t.yrate += a;
            }
            cur.expect(b')')?;
        }
        Some(c) if c.is_ascii_digit() || c == b'.' || c == b'-' || c == b'+' => {
            let v = cur.number()?;
            t.coeff *= v;
        }
        _ => return Err(cur.err("expected a factor")),
    }
    Ok(())
}
