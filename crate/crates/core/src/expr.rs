//! A small expression language for forms, used by the command line.
//!
//! ```text
//! expr  := ['-'] term (('+' | '-') term)*
//! term  := power (('*' | '/' | juxtaposition) power)*
//! power := atom ['^' integer]
//! atom  := integer | 'T' | 'z' | 'pi' | '(' expr ')'
//!        | g1 | g2 | … | gd | h | delta | e | estar
//!        | iota '(' expr ')' | plus '(' expr ')' | minus '(' expr ')'
//!        | gk '(' integer ')'
//! ```
//!
//! `gd` is g_d for d = deg π, `estar` is E − π·ι(E), `plus(f)`/`minus(f)`
//! are the eigenvector pairs f ± π^{k/2}·ι(f), and `gk(k)` is g_(k).
//! Division is only allowed by scalars.

use crate::algebra::{PrimePi, RatK};
use crate::error::{Error, Result};
use crate::forms::Generator;
use crate::operators::{gk_form, OldPoly};

/// Parses a form expression at the prime π.
pub fn parse_form(pi: &PrimePi, src: &str) -> Result<OldPoly> {
    let mut p = Parser { pi, chars: src.chars().collect(), pos: 0, src };
    let v = p.expr()?;
    if p.peek().is_some() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(v)
}

struct Parser<'a> {
    pi: &'a PrimePi,
    chars: Vec<char>,
    pos: usize,
    src: &'a str,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at position {} in '{}'", self.pos, self.src))
    }

    /// The next non-blank character; whitespace only separates tokens.
    fn peek(&mut self) -> Option<char> {
        while self.raw().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
        self.raw()
    }

    fn raw(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek() != Some(c) {
            return Err(self.err(&format!("expected '{c}'")));
        }
        self.pos += 1;
        Ok(())
    }

    fn lift(&self, r: Result<OldPoly>) -> Result<OldPoly> {
        r.map_err(|e| self.err(&e.to_string()))
    }

    fn expr(&mut self) -> Result<OldPoly> {
        let mut acc = if self.peek() == Some('-') {
            self.pos += 1;
            self.term()?.neg()
        } else {
            self.term()?
        };
        while let Some(c) = self.peek() {
            match c {
                '+' => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = self.lift(acc.add(&t))?;
                }
                '-' => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = self.lift(acc.sub(&t))?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<OldPoly> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    let x = self.power()?;
                    acc = self.lift(acc.mul(&x))?;
                }
                Some('/') => {
                    self.pos += 1;
                    let x = self.power()?;
                    let c = x.as_constant().ok_or_else(|| self.err("division by a non-scalar"))?;
                    let inv = c.inv().ok_or_else(|| self.err("division by zero"))?;
                    acc = acc.scale(&inv);
                }
                Some(c) if c.is_ascii_alphanumeric() || c == '(' => {
                    let x = self.power()?;
                    acc = self.lift(acc.mul(&x))?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<OldPoly> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            let e = self.integer()?;
            let e = u32::try_from(e).map_err(|_| self.err("exponent too large"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<u64> {
        self.peek();
        let start = self.pos;
        while self.raw().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse::<u64>().map_err(|_| self.err("integer out of range"))
    }

    fn ident(&mut self) -> String {
        let start = self.pos;
        while self.raw().is_some_and(|c| c.is_ascii_alphanumeric() || c == '_') {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn argument(&mut self) -> Result<OldPoly> {
        self.expect('(')?;
        let v = self.expr()?;
        self.expect(')')?;
        Ok(v)
    }

    fn atom(&mut self) -> Result<OldPoly> {
        let pi = self.pi;
        let f = pi.field();
        match self.peek() {
            Some('(') => self.argument(),
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(OldPoly::constant(pi, RatK::from_int(f, (n % f.p() as u64) as i64)))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                let name = self.ident();
                let generator = |g| Ok(OldPoly::plain(pi, g));
                match name.as_str() {
                    "T" | "z" | "pi" => {
                        let text = if name == "pi" { pi.poly().to_string() } else { name.clone() };
                        let c = crate::algebra::text::parse_rat(f, &text).map_err(|e| {
                            self.pos = start;
                            self.err(&e.to_string())
                        })?;
                        Ok(OldPoly::constant(pi, c))
                    }
                    "h" => generator(Generator::H),
                    "delta" => generator(Generator::Delta),
                    "e" => generator(Generator::E),
                    "estar" => Ok(OldPoly::e_star(pi)),
                    "gd" => generator(Generator::G(pi.degree() as u32)),
                    "iota" => {
                        let a = self.argument()?;
                        self.lift(a.iota())
                    }
                    "plus" | "minus" => {
                        let a = self.argument()?;
                        self.lift(a.pair(if name == "plus" { 1 } else { -1 }))
                    }
                    "gk" => {
                        self.expect('(')?;
                        let k = self.integer()?;
                        self.expect(')')?;
                        self.lift(gk_form(k as usize, pi))
                    }
                    _ => match name.strip_prefix('g').and_then(|d| d.parse::<u32>().ok()) {
                        Some(d) if d >= 1 => generator(Generator::G(d)),
                        _ => {
                            self.pos = start;
                            Err(self.err(&format!("unknown name '{name}'")))
                        }
                    },
                }
            }
            _ => Err(self.err("unexpected character")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Fq, PolyA};

    fn pi() -> PrimePi {
        PrimePi::new(PolyA::t(&Fq::prime(3).unwrap())).unwrap()
    }

    #[test]
    fn parses_generators_and_products() {
        let pi = pi();
        let f = parse_form(&pi, "g1^2*h").unwrap();
        assert_eq!(f.weight(), 8);
        assert_eq!(f.typ(), 1);
        assert!(f.is_level_one());
        let f = parse_form(&pi, "delta + 2 T g1^4").unwrap();
        assert_eq!(f.terms().len(), 2);
        assert_eq!(f, parse_form(&pi, "delta+2*T*g1^4").unwrap());
        assert!(parse_form(&pi, "g 1").is_err());
    }

    #[test]
    fn parses_level_pi_constructions() {
        let pi = pi();
        let es = parse_form(&pi, "estar").unwrap();
        assert_eq!(es, OldPoly::e_star(&pi));
        let alt = parse_form(&pi, "e - pi*iota(e)").unwrap();
        assert_eq!(es, alt);
        let p = parse_form(&pi, "plus(delta)").unwrap();
        assert_eq!(p.eigenvalue().unwrap(), Some(1));
        assert!(!p.is_level_one());
        assert_eq!(parse_form(&pi, "gk(2)").unwrap().terms().len(), 2);
    }

    #[test]
    fn rejects_bad_input() {
        let pi = pi();
        assert!(parse_form(&pi, "g1 + h").is_err());
        assert!(parse_form(&pi, "h / g1").is_err());
        assert!(parse_form(&pi, "foo").is_err());
        assert!(parse_form(&pi, "(h").is_err());
        assert!(parse_form(&pi, "h/0").is_err());
    }
}
