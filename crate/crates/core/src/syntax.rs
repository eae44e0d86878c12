//! Text grammar for polynomials, piecewise literals, words and sums of
//! words.
//!
//! ```text
//! poly   := sum ;  sum := ['-'] prod (('+'|'-') prod)*
//! prod   := power ('*' power)* ;  power := atom ('^' nat)?
//! atom   := rational | 't' | '(' sum ')' | piecewise
//! piecewise := 'piecewise{' ('['|'(') q ',' q ']' ':' poly (';' ...)* '}'
//!
//! expr   := term (('+'|'-') term)*      (sums of words)
//! term   := factor+                     (juxtaposition multiplies)
//! factor := ('X' | 'X*' | '[' poly ']' | rational | '(' expr ')') ('^' nat)?
//! ```

use crate::error::{Error, Result};
use crate::funcspace::{PiecewisePoly, Poly};
use crate::moments::{Letter, Word, WordPoly};
use crate::rational::{parse_rational, Rational};

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

fn syntax<T>(pos: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Syntax { pos, msg: msg.into() })
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser { src, pos: 0 }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            syntax(self.pos, format!("expected '{c}'"))
        }
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn nat(&mut self) -> Result<u32> {
        self.skip_ws();
        let start = self.pos;
        if self.rest().starts_with('-') {
            return syntax(start, "exponent must be a nonnegative integer");
        }
        let digits: String = self.rest().chars().take_while(char::is_ascii_digit).collect();
        if digits.is_empty() {
            return syntax(start, "expected a nonnegative integer exponent");
        }
        self.pos += digits.len();
        digits.parse().or_else(|_| syntax(start, "exponent too large"))
    }

    fn digits(&mut self) -> Option<&'a str> {
        let s = self.rest();
        let len = s.len() - s.trim_start_matches(|c: char| c.is_ascii_digit()).len();
        if len == 0 {
            return None;
        }
        self.pos += len;
        Some(&s[..len])
    }

    /// `p/q` or `p`, no sign.
    fn rational(&mut self) -> Result<Rational> {
        self.skip_ws();
        let start = self.pos;
        let Some(num) = self.digits() else {
            return syntax(start, "expected a number");
        };
        let mut text = num.to_string();
        let save = self.pos;
        if self.eat('/') {
            self.skip_ws();
            match self.digits() {
                Some(den) => text = format!("{num}/{den}"),
                None => return syntax(save, "incomplete rational literal"),
            }
        }
        if self.rest().starts_with('.') {
            return syntax(self.pos, "decimal literals are not supported; write p/q");
        }
        match parse_rational(&text) {
            Some(r) => Ok(r),
            None => syntax(start, format!("zero denominator in {text:?}")),
        }
    }

    fn signed_rational(&mut self) -> Result<Rational> {
        let neg = self.eat('-');
        let r = self.rational()?;
        Ok(if neg { -r } else { r })
    }

    // ---- polynomials ----

    fn poly_sum(&mut self) -> Result<PiecewisePoly> {
        let mut acc = if self.eat('-') {
            -&self.poly_prod()?
        } else {
            self.poly_prod()?
        };
        loop {
            if self.eat('+') {
                acc = &acc + &self.poly_prod()?;
            } else if self.peek() == Some('-') {
                self.pos += 1;
                acc = &acc - &self.poly_prod()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn poly_prod(&mut self) -> Result<PiecewisePoly> {
        let mut acc = self.poly_power()?;
        while self.eat('*') {
            acc = &acc * &self.poly_power()?;
        }
        Ok(acc)
    }

    fn poly_power(&mut self) -> Result<PiecewisePoly> {
        let base = self.poly_atom()?;
        if self.eat('^') {
            let k = self.nat()?;
            let mut acc = PiecewisePoly::one();
            for _ in 0..k {
                acc = &acc * &base;
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn poly_atom(&mut self) -> Result<PiecewisePoly> {
        match self.peek() {
            Some('t') => {
                self.pos += 1;
                Ok(PiecewisePoly::t())
            }
            Some('(') => {
                self.pos += 1;
                let inner = self.poly_sum()?;
                self.expect(')')?;
                Ok(inner)
            }
            Some('-') => {
                self.pos += 1;
                Ok(-&self.poly_power()?)
            }
            Some(c) if c.is_ascii_digit() => Ok(PiecewisePoly::constant(self.rational()?)),
            Some('p') if self.rest().starts_with("piecewise") => self.piecewise(),
            Some(c) => syntax(self.pos, format!("unexpected '{c}' in polynomial")),
            None => syntax(self.pos, "unexpected end of polynomial"),
        }
    }

    fn piecewise(&mut self) -> Result<PiecewisePoly> {
        let start = self.pos;
        self.pos += "piecewise".len();
        self.expect('{')?;
        let mut bps: Vec<Rational> = Vec::new();
        let mut pieces: Vec<Poly> = Vec::new();
        loop {
            let open = self.pos;
            if !(self.eat('[') || self.eat('(')) {
                return syntax(open, "expected '[' or '(' opening a piece interval");
            }
            let a = self.signed_rational()?;
            self.expect(',')?;
            let b = self.signed_rational()?;
            self.expect(']')?;
            self.expect(':')?;
            let f = self.poly_sum()?;
            let piece = match f.as_constant() {
                Some(c) => Poly::constant(c),
                None if f.is_single_piece() => f.pieces()[0].clone(),
                None => return syntax(open, "a piece must be a polynomial"),
            };
            match bps.last() {
                None => bps.push(a),
                Some(last) if *last == a => {}
                Some(_) => return syntax(open, "piece intervals must be contiguous"),
            }
            bps.push(b);
            pieces.push(piece);
            if self.eat(';') {
                continue;
            }
            self.expect('}')?;
            break;
        }
        PiecewisePoly::new(bps, pieces).or_else(|e| syntax(start, e.to_string()))
    }

    // ---- words ----

    fn expr(&mut self) -> Result<WordPoly> {
        let mut acc = if self.peek() == Some('-') {
            self.pos += 1;
            self.term()?.neg()
        } else {
            self.term()?
        };
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.peek() == Some('-') {
                self.pos += 1;
                acc = acc.add(&self.term()?.neg());
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<WordPoly> {
        let mut acc = self.factor()?;
        while matches!(self.peek(), Some(c) if c == 'X' || c == '[' || c == '(' || c.is_ascii_digit()) {
            acc = acc.mul(&self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<WordPoly> {
        let base = match self.peek() {
            Some('X') => {
                self.pos += 1;
                if self.rest().starts_with('*') {
                    self.pos += 1;
                    WordPoly::from(Word::new(vec![Letter::XStar]))
                } else {
                    WordPoly::from(Word::new(vec![Letter::X]))
                }
            }
            Some('[') => {
                self.pos += 1;
                let f = self.poly_sum()?;
                self.expect(']')?;
                WordPoly::from(Word::new(vec![Letter::Coeff(f)]))
            }
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(')')?;
                inner
            }
            Some(c) if c.is_ascii_digit() => {
                let r = self.rational()?;
                WordPoly::from(Word::new(vec![Letter::Coeff(PiecewisePoly::constant(r))]))
            }
            Some(c) => return syntax(self.pos, format!("unexpected '{c}' in word")),
            None => return syntax(self.pos, "unexpected end of word"),
        };
        if self.eat('^') {
            let k = self.nat()?;
            let mut acc = WordPoly::from(Word::empty());
            for _ in 0..k {
                acc = acc.mul(&base);
            }
            return Ok(acc);
        }
        Ok(base)
    }
}

/// Parses a polynomial or piecewise literal in `t`.
pub fn parse_poly(text: &str) -> Result<PiecewisePoly> {
    let mut p = Parser::new(text);
    if p.at_end() {
        return syntax(0, "empty polynomial");
    }
    let f = p.poly_sum()?;
    if !p.at_end() {
        return syntax(p.pos, "trailing input after polynomial");
    }
    Ok(f)
}

/// Parses a sum of words.
pub fn parse_expr(text: &str) -> Result<WordPoly> {
    let mut p = Parser::new(text);
    if p.at_end() {
        return syntax(0, "empty expression");
    }
    let e = p.expr()?;
    if !p.at_end() {
        return syntax(p.pos, "trailing input after expression");
    }
    Ok(e)
}

/// Parses a single word; sums are rejected.
pub fn parse_word(text: &str) -> Result<Word> {
    let e = parse_expr(text)?;
    match e.terms() {
        [w] => Ok(w.clone()),
        [] => Ok(Word::zero()),
        _ => syntax(0, "expression is a sum of words; a single word is required here"),
    }
}

/// Text form of a word that [`parse_word`] reads back to the same word.
pub fn render_word(w: &Word) -> String {
    if w.is_zero() {
        return "[0]".into();
    }
    if w.letters().is_empty() {
        return "[1]".into();
    }
    w.letters()
        .iter()
        .map(|l| match l {
            Letter::X => "X".to_string(),
            Letter::XStar => "X*".to_string(),
            Letter::Coeff(f) => format!("[{f}]"),
        })
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn render_expr(e: &WordPoly) -> String {
    if e.terms().is_empty() {
        return "[0]".into();
    }
    e.terms().iter().map(render_word).collect::<Vec<_>>().join(" + ")
}
