//! Slice-level arithmetic on dense coefficient vectors over F_q.
//!
//! These are the hot loops of the crate. Over a prime field products are
//! accumulated in `u64` lanes and reduced once at the end, which lets the
//! compiler vectorize the inner loop; extension fields go through the log
//! tables of [`Fq`].

use super::field::{Elem, Fq};

/// Drops trailing zero coefficients.
#[inline]
pub fn trim(v: &mut Vec<Elem>) {
    while let Some(&0) = v.last() {
        v.pop();
    }
}

pub fn add(f: &Fq, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut out = long.to_vec();
    for (o, &s) in out.iter_mut().zip(short) {
        *o = f.add(*o, s);
    }
    trim(&mut out);
    out
}

pub fn sub(f: &Fq, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    let mut out = a.to_vec();
    if out.len() < b.len() {
        out.resize(b.len(), 0);
    }
    for (o, &s) in out.iter_mut().zip(b) {
        *o = f.sub(*o, s);
    }
    trim(&mut out);
    out
}

pub fn scale(f: &Fq, a: &[Elem], c: Elem) -> Vec<Elem> {
    if c == 0 {
        return Vec::new();
    }
    if c == 1 {
        return a.to_vec();
    }
    a.iter().map(|&x| f.mul(x, c)).collect()
}

pub fn neg(f: &Fq, a: &[Elem]) -> Vec<Elem> {
    a.iter().map(|&x| f.neg(x)).collect()
}

pub fn mul(f: &Fq, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut acc = MulAcc::new(f);
    acc.add_product(a, b);
    acc.finish()
}

/// Accumulator for sums of products of polynomials, reduced once.
pub struct MulAcc<'a> {
    f: &'a Fq,
    wide: Vec<u64>,
    narrow: Vec<Elem>,
}

impl<'a> MulAcc<'a> {
    pub fn new(f: &'a Fq) -> Self {
        MulAcc { f, wide: Vec::new(), narrow: Vec::new() }
    }

    /// `acc += a * b`.
    pub fn add_product(&mut self, a: &[Elem], b: &[Elem]) {
        if a.is_empty() || b.is_empty() {
            return;
        }
        let n = a.len() + b.len() - 1;
        if self.f.is_prime_field() {
            if self.wide.len() < n {
                self.wide.resize(n, 0);
            }
            // Keep the shorter operand in the outer loop.
            let (outer, inner) = if a.len() <= b.len() { (a, b) } else { (b, a) };
            for (i, &x) in outer.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                let x = x as u64;
                let dst = &mut self.wide[i..i + inner.len()];
                for (d, &y) in dst.iter_mut().zip(inner) {
                    *d += x * y as u64;
                }
            }
        } else {
            if self.narrow.len() < n {
                self.narrow.resize(n, 0);
            }
            for (i, &x) in a.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                for (j, &y) in b.iter().enumerate() {
                    if y != 0 {
                        let d = &mut self.narrow[i + j];
                        *d = self.f.add(*d, self.f.mul(x, y));
                    }
                }
            }
        }
    }

    /// Returns the reduced, trimmed sum and resets the accumulator.
    pub fn finish(&mut self) -> Vec<Elem> {
        let mut out = if self.f.is_prime_field() {
            let p = self.f.p() as u64;
            let v = self.wide.iter().map(|&x| (x % p) as Elem).collect();
            self.wide.clear();
            v
        } else {
            std::mem::take(&mut self.narrow)
        };
        trim(&mut out);
        out
    }
}

/// Remainder of `a` modulo a nonzero `m`; also returns the quotient.
pub fn divrem(f: &Fq, a: &[Elem], m: &[Elem]) -> (Vec<Elem>, Vec<Elem>) {
    assert!(!m.is_empty(), "division by the zero polynomial");
    if a.len() < m.len() {
        return (Vec::new(), a.to_vec());
    }
    let dm = m.len() - 1;
    let lead_inv = f.inv(m[dm]);
    let mut rem = a.to_vec();
    let mut quot = vec![0; a.len() - dm];
    for k in (dm..rem.len()).rev() {
        let c = rem[k];
        if c == 0 {
            continue;
        }
        let c = f.mul(c, lead_inv);
        quot[k - dm] = c;
        let nc = f.neg(c);
        for (i, &mi) in m.iter().enumerate() {
            if mi != 0 {
                let r = &mut rem[k - dm + i];
                *r = f.add(*r, f.mul(nc, mi));
            }
        }
    }
    rem.truncate(dm);
    trim(&mut rem);
    trim(&mut quot);
    (quot, rem)
}

/// Evaluates `a` at `x`.
pub fn eval(f: &Fq, a: &[Elem], x: Elem) -> Elem {
    a.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
}

