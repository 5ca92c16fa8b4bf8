//! Canonical text forms for elements of A and K, and a parser for them.
//!
//! Polynomials print as sparse sums with descending exponents, e.g.
//! `T^2+2*T+1`; coefficients are residues in `0..p` (for r > 1, polynomials in
//! the generator `z`, parenthesized when they have several terms). Fractions
//! print as `num/den`, with parentheses around multi-term parts and the
//! denominator omitted when it is 1.

use std::fmt;

use super::field::{Elem, Fq};
use super::poly::PolyA;
use super::rat::RatK;
use crate::error::{Error, Result};

fn coeff_text(f: &Fq, c: Elem, standalone: bool) -> String {
    let s = f.elem_to_string(c);
    if !standalone && s.contains('+') {
        format!("({s})")
    } else {
        s
    }
}

impl fmt::Display for PolyA {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let f = self.field();
        let cs = self.coeffs();
        if cs.is_empty() {
            return write!(out, "0");
        }
        let standalone = cs.len() == 1;
        let mut parts = Vec::new();
        for e in (0..cs.len()).rev() {
            let c = cs[e];
            if c == 0 {
                continue;
            }
            let mono = match e {
                0 => String::new(),
                1 => "T".to_string(),
                _ => format!("T^{e}"),
            };
            parts.push(if e == 0 {
                coeff_text(f, c, standalone)
            } else if c == 1 {
                mono
            } else {
                format!("{}*{}", coeff_text(f, c, false), mono)
            });
        }
        write!(out, "{}", parts.join("+"))
    }
}

fn wrap(p: &PolyA) -> String {
    if p.num_terms() > 1 {
        format!("({p})")
    } else {
        p.to_string()
    }
}

impl fmt::Display for RatK {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den().is_one() {
            write!(out, "{}", self.num())
        } else {
            write!(out, "{}/{}", wrap(self.num()), wrap(self.den()))
        }
    }
}

/// Parses a polynomial expression in T (and z for r > 1).
pub fn parse_poly(field: &Fq, s: &str) -> Result<PolyA> {
    let r = parse_rat(field, s)?;
    match r.as_poly() {
        Some(p) => Ok(p.clone()),
        None => Err(Error::Parse(format!("'{s}' is not a polynomial"))),
    }
}

/// Parses a rational expression: integers, `T`, `z`, `+ - * / ^`, parentheses.
pub fn parse_rat(field: &Fq, s: &str) -> Result<RatK> {
    let mut p = Parser { field, chars: s.chars().filter(|c| !c.is_whitespace()).collect(), pos: 0, src: s };
    let v = p.expr()?;
    if p.pos != p.chars.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(v)
}

struct Parser<'a> {
    field: &'a Fq,
    chars: Vec<char>,
    pos: usize,
    src: &'a str,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at position {} in '{}'", self.pos, self.src))
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<RatK> {
        let mut acc = if self.peek() == Some('-') {
            self.pos += 1;
            -&self.term()?
        } else {
            self.term()?
        };
        while let Some(c) = self.peek() {
            match c {
                '+' => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                '-' => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RatK> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    acc = &acc * &self.power()?;
                }
                Some('/') => {
                    self.pos += 1;
                    let d = self.power()?;
                    if d.is_zero() {
                        return Err(self.err("division by zero"));
                    }
                    acc = &acc / &d;
                }
                // implicit multiplication such as 2T or (T+1)(T+2)
                Some(c) if c == 'T' || c == 'z' || c == '(' || c.is_ascii_digit() => {
                    acc = &acc * &self.power()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<RatK> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            let e = self.integer()?;
            return Ok(base.pow(e as i64));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<u64> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse::<u64>().map_err(|_| self.err("integer out of range"))
    }

    fn atom(&mut self) -> Result<RatK> {
        let f = self.field;
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some('T') => {
                self.pos += 1;
                Ok(RatK::from_poly(PolyA::t(f)))
            }
            Some('z') => {
                if f.is_prime_field() {
                    return Err(self.err("'z' is only available for r > 1"));
                }
                self.pos += 1;
                Ok(RatK::constant(f, f.from_digits(&[0, 1])))
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(RatK::constant(f, (n % f.p() as u64) as Elem))
            }
            _ => Err(self.err("unexpected character")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::FieldSpec;

    #[test]
    fn canonical_polynomial_text() {
        let f = Fq::prime(3).unwrap();
        let p = PolyA::from_coeffs(&f, vec![1, 2, 1]);
        assert_eq!(p.to_string(), "T^2+2*T+1");
        assert_eq!(PolyA::zero(&f).to_string(), "0");
        assert_eq!(PolyA::t(&f).to_string(), "T");
        assert_eq!(PolyA::constant(&f, 2).to_string(), "2");
    }

    #[test]
    fn canonical_fraction_text() {
        let f = Fq::prime(3).unwrap();
        let x = parse_rat(&f, "(T^2+T)/(T+2)").unwrap();
        assert_eq!(x.to_string(), "(T^2+T)/(T+2)");
        assert_eq!(parse_rat(&f, "1/T").unwrap().to_string(), "1/T");
        assert_eq!(parse_rat(&f, "-1/(T^3-T)").unwrap().to_string(), "2/(T^3+2*T)");
    }

    #[test]
    fn parse_round_trip() {
        let f = Fq::prime(5).unwrap();
        for s in ["T^4+3*T+1", "2*T^2", "T", "4", "0"] {
            assert_eq!(parse_poly(&f, s).unwrap().to_string(), s);
        }
        assert_eq!(parse_poly(&f, "(T+1)^2 - T^2").unwrap().to_string(), "2*T+1");
        assert_eq!(parse_poly(&f, "2T").unwrap().to_string(), "2*T");
        assert!(parse_poly(&f, "T +").is_err());
        assert!(parse_poly(&f, "1/T").is_err());
    }

    #[test]
    fn extension_field_text() {
        let f = Fq::new(&FieldSpec { p: 3, r: 2, modulus: None }).unwrap();
        let p = parse_poly(&f, "(z+1)*T^2+z").unwrap();
        assert_eq!(p.to_string(), "(z+1)*T^2+z");
        assert_eq!(parse_poly(&f, &p.to_string()).unwrap(), p);
        assert_eq!(parse_poly(&f, "z^2").unwrap().to_string(), "2");
    }
}
