//! Element literals: signed scalar coefficients times `*`-separated factors,
//! e.g. `1 + 2*t - t^-1`, `a*b^-1*a`, `1/2*x*y`, `E[3,7]`.

use std::iter::Peekable;
use std::str::Chars;

use crate::error::{Error, Result};
use crate::exactlin::Scalar;

use super::{AlgebraElement, BasisWord, Carrier, CarrierKind};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LBracket,
    RBracket,
    Comma,
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let mut it: Peekable<Chars> = s.chars().peekable();
    while let Some(&c) = it.peek() {
        match c {
            c if c.is_whitespace() => {
                it.next();
            }
            '0'..='9' => {
                let mut n = String::new();
                while let Some(&d) = it.peek().filter(|d| d.is_ascii_digit()) {
                    n.push(d);
                    it.next();
                }
                out.push(Tok::Num(n));
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut n = String::new();
                while let Some(&d) = it.peek().filter(|d| d.is_alphanumeric() || **d == '_') {
                    n.push(d);
                    it.next();
                }
                out.push(Tok::Ident(n));
            }
            _ => {
                out.push(match c {
                    '+' => Tok::Plus,
                    '-' => Tok::Minus,
                    '*' => Tok::Star,
                    '^' => Tok::Caret,
                    '/' => Tok::Slash,
                    '[' => Tok::LBracket,
                    ']' => Tok::RBracket,
                    ',' => Tok::Comma,
                    other => return Err(Error::Parse(format!("unexpected character {other:?} in {s:?}"))),
                });
                it.next();
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    carrier: &'a Carrier,
    toks: Vec<Tok>,
    pos: usize,
    src: &'a str,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} in {:?}", self.src))
    }

    fn expect(&mut self, t: Tok) -> Result<()> {
        if self.next() == Some(t.clone()) {
            Ok(())
        } else {
            Err(self.err(&format!("expected {t:?}")))
        }
    }

    fn number(&mut self) -> Result<usize> {
        match self.next() {
            Some(Tok::Num(n)) => n.parse().map_err(|_| self.err("number too large")),
            _ => Err(self.err("expected number")),
        }
    }

    fn exponent(&mut self) -> Result<i64> {
        if self.peek() != Some(&Tok::Caret) {
            return Ok(1);
        }
        self.next();
        let neg = if self.peek() == Some(&Tok::Minus) {
            self.next();
            true
        } else {
            false
        };
        let n = self.number()? as i64;
        Ok(if neg { -n } else { n })
    }

    fn expr(&mut self) -> Result<AlgebraElement> {
        let mut acc = AlgebraElement::zero();
        let mut negate = false;
        match self.peek() {
            Some(Tok::Minus) => {
                negate = true;
                self.next();
            }
            Some(Tok::Plus) => {
                self.next();
            }
            None => return Err(self.err("empty literal")),
            _ => {}
        }
        loop {
            let term = self.term()?;
            if negate {
                acc = &acc - &term;
            } else {
                acc = &acc + &term;
            }
            match self.next() {
                None => return Ok(acc),
                Some(Tok::Plus) => negate = false,
                Some(Tok::Minus) => negate = true,
                Some(_) => return Err(self.err("expected + or -")),
            }
        }
    }

    fn term(&mut self) -> Result<AlgebraElement> {
        let c = self.carrier;
        let mut coeff = c.field().one();
        let mut product: Option<AlgebraElement> = None;
        if let Some(Tok::Num(_)) = self.peek() {
            let Some(Tok::Num(num)) = self.next() else { unreachable!() };
            let text = if self.peek() == Some(&Tok::Slash) {
                self.next();
                match self.next() {
                    Some(Tok::Num(den)) => format!("{num}/{den}"),
                    _ => return Err(self.err("expected denominator")),
                }
            } else {
                num
            };
            coeff = c.field().parse_scalar(&text)?;
            if self.peek() != Some(&Tok::Star) {
                return Ok(c.one().scale(&coeff));
            }
            self.next();
        }
        loop {
            let f = self.factor()?;
            product = Some(match product {
                None => f,
                Some(p) => c.mul(&p, &f)?,
            });
            if self.peek() != Some(&Tok::Star) {
                break;
            }
            self.next();
        }
        Ok(product.unwrap_or_else(|| c.one()).scale(&coeff))
    }

    fn factor(&mut self) -> Result<AlgebraElement> {
        let c = self.carrier;
        let name = match self.next() {
            Some(Tok::Ident(n)) => n,
            Some(Tok::Num(n)) if n == "1" => return Ok(c.one()),
            _ => return Err(self.err("expected a generator")),
        };
        if name == "E" && self.peek() == Some(&Tok::LBracket) {
            self.next();
            let x = self.number()?;
            self.expect(Tok::Comma)?;
            let y = self.number()?;
            self.expect(Tok::RBracket)?;
            return c.word(BasisWord::Unit(x, y));
        }
        let names = c.generator_names();
        let g = names
            .iter()
            .position(|n| *n == name)
            .ok_or_else(|| self.err(&format!("unknown generator {name:?}")))?;
        let e = self.exponent()?;
        let word = match c.kind() {
            CarrierKind::Abelian { rank } => {
                let mut v = vec![0; *rank];
                v[g] = e;
                BasisWord::Exponents(v)
            }
            CarrierKind::FreeGroup { .. } => {
                let letter = if e < 0 { -(g as i32 + 1) } else { g as i32 + 1 };
                BasisWord::Reduced(vec![letter; e.unsigned_abs() as usize])
            }
            CarrierKind::FreeAlgebra { .. } => {
                if e < 0 {
                    return Err(self.err("negative exponent in a free algebra"));
                }
                BasisWord::Monomial(vec![g as u32; e as usize])
            }
            CarrierKind::Translation(_) => unreachable!("translation algebras have no named generators"),
        };
        c.word(word)
    }
}

fn power(name: &str, e: i64) -> String {
    if e == 1 {
        name.to_string()
    } else {
        format!("{name}^{e}")
    }
}

impl Carrier {
    pub fn parse_element(&self, s: &str) -> Result<AlgebraElement> {
        let mut p = Parser {
            carrier: self,
            toks: tokenize(s)?,
            pos: 0,
            src: s,
        };
        p.expr()
    }

    pub fn format_word(&self, w: &BasisWord) -> String {
        let names = self.generator_names();
        let name = |i: usize| names.get(i).cloned().unwrap_or_else(|| format!("g{}", i + 1));
        let factors: Vec<String> = match w {
            BasisWord::Exponents(e) => e
                .iter()
                .enumerate()
                .filter(|(_, &x)| x != 0)
                .map(|(i, &x)| power(&name(i), x))
                .collect(),
            BasisWord::Reduced(l) => run_lengths(l.iter().map(|&x| (x.unsigned_abs() as usize - 1, x.signum() as i64)))
                .into_iter()
                .map(|(g, e)| power(&name(g), e))
                .collect(),
            BasisWord::Monomial(l) => run_lengths(l.iter().map(|&x| (x as usize, 1)))
                .into_iter()
                .map(|(g, e)| power(&name(g), e))
                .collect(),
            BasisWord::Unit(x, y) => return format!("E[{x},{y}]"),
        };
        if factors.is_empty() {
            "1".into()
        } else {
            factors.join("*")
        }
    }

    /// Prints terms in increasing basis order; round-trips through
    /// [`Carrier::parse_element`].
    pub fn format_element(&self, a: &AlgebraElement) -> String {
        if a.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (w, c)) in a.terms().enumerate() {
            let neg = c.is_negative_literal();
            let abs: Scalar = if neg { -c } else { c.clone() };
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let word = self.format_word(w);
            let is_unit_word = word == "1";
            match (abs.is_one(), is_unit_word) {
                (true, _) => out.push_str(&word),
                (false, true) => out.push_str(&abs.to_string()),
                (false, false) => {
                    out.push_str(&abs.to_string());
                    out.push('*');
                    out.push_str(&word);
                }
            }
        }
        out
    }
}

/// Groups equal consecutive (generator, sign) letters into powers.
fn run_lengths(letters: impl Iterator<Item = (usize, i64)>) -> Vec<(usize, i64)> {
    let mut out: Vec<(usize, i64)> = Vec::new();
    for (g, s) in letters {
        match out.last_mut() {
            Some((h, e)) if *h == g && e.signum() == s => *e += s,
            _ => out.push((g, s)),
        }
    }
    out
}
