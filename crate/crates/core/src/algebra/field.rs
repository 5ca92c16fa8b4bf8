//! The finite field F_q, q = p^r with p an odd prime.
//!
//! Elements are plain `u32` values. For r = 1 an element is its residue in
//! `0..p`. For r > 1 an element is the base-p integer whose digits are the
//! coefficients (constant first) of its residue polynomial modulo the
//! defining polynomial; multiplication goes through discrete log tables.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};

/// Element of F_q, see the module documentation for the encoding.
pub type Elem = u32;

/// Largest supported extension field order (tables are quadratic in q for r > 1).
const MAX_EXT_Q: u32 = 1024;

/// User-facing description of a finite field.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FieldSpec {
    pub p: u32,
    pub r: u32,
    /// Monic irreducible polynomial over F_p of degree r, coefficients constant
    /// first (length r + 1). `None` for r = 1, or to request the default choice.
    pub modulus: Option<Vec<u32>>,
}

impl FieldSpec {
    pub fn prime(p: u32) -> Self {
        FieldSpec { p, r: 1, modulus: None }
    }

    /// Builds the spec for F_{p^r} from q alone, when q is a prime power.
    pub fn from_q(q: u32) -> Result<Self> {
        if q < 3 {
            return Err(Error::InvalidField(format!("q = {q} is too small")));
        }
        let p = (2..=q).find(|d| q % d == 0).unwrap_or(q);
        let mut r = 0;
        let mut m = q;
        while m % p == 0 {
            m /= p;
            r += 1;
        }
        if m != 1 {
            return Err(Error::InvalidField(format!("q = {q} is not a prime power")));
        }
        Ok(FieldSpec { p, r, modulus: None })
    }
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

struct FqInner {
    p: u32,
    r: u32,
    q: u32,
    modulus: Vec<u32>,
    /// r > 1 only: exp[i] = g^i for a fixed primitive element g, i in 0..q-1.
    exp: Vec<u32>,
    /// r > 1 only: log[x] for x != 0.
    log: Vec<u32>,
    /// r > 1 only: addition table, q*q entries.
    add: Vec<u16>,
    neg: Vec<u32>,
}

/// Runtime handle for F_q. Cheap to clone; all operations are pure.
#[derive(Clone)]
pub struct Fq(Arc<FqInner>);

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.0.q)
    }
}

impl PartialEq for Fq {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.r == other.0.r && self.0.modulus == other.0.modulus)
    }
}

impl Eq for Fq {}

// Arithmetic on F_p[x] digit vectors, used only while building tables.
fn fp_poly_mulmod(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let r = modulus.len() - 1;
    let mut prod = vec![0u64; 2 * r];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    for k in (r..2 * r).rev() {
        let c = prod[k] % p as u64;
        if c == 0 {
            continue;
        }
        for (i, &m) in modulus.iter().enumerate().take(r) {
            let idx = k - r + i;
            prod[idx] = (prod[idx] + (p as u64 - c) * m as u64) % p as u64;
        }
        prod[k] = 0;
    }
    prod.truncate(r);
    prod.into_iter().map(|x| x as u32).collect()
}

fn digits(x: u32, p: u32, r: u32) -> Vec<u32> {
    let mut v = Vec::with_capacity(r as usize);
    let mut x = x;
    for _ in 0..r {
        v.push(x % p);
        x /= p;
    }
    v
}

fn undigits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

/// Irreducibility over F_p by checking for roots / factors of degree <= r/2,
/// by trial division against every monic polynomial of that degree.
fn fp_is_irreducible(f: &[u32], p: u32) -> bool {
    let r = f.len() - 1;
    for deg in 1..=r / 2 {
        let count = (p as u64).pow(deg as u32);
        for enc in 0..count {
            let mut g = digits(enc as u32, p, deg as u32);
            g.push(1);
            if fp_divides(&g, f, p) {
                return false;
            }
        }
    }
    true
}

fn fp_divides(g: &[u32], f: &[u32], p: u32) -> bool {
    let mut rem: Vec<u64> = f.iter().map(|&x| x as u64).collect();
    let dg = g.len() - 1;
    for k in (dg..rem.len()).rev() {
        let c = rem[k] % p as u64;
        if c == 0 {
            continue;
        }
        for (i, &gi) in g.iter().enumerate() {
            let idx = k - dg + i;
            rem[idx] = (rem[idx] + (p as u64 - c) * gi as u64) % p as u64;
        }
    }
    rem[..dg].iter().all(|&x| x % p as u64 == 0)
}

impl Fq {
    pub fn new(spec: &FieldSpec) -> Result<Fq> {
        let p = spec.p;
        if p == 2 || !is_prime(p) {
            return Err(Error::InvalidField(format!("p = {p} must be an odd prime")));
        }
        if p >= 1 << 16 {
            return Err(Error::InvalidField(format!("p = {p} is too large")));
        }
        if spec.r == 0 {
            return Err(Error::InvalidField("r must be positive".into()));
        }
        let r = spec.r;
        let q = p
            .checked_pow(r)
            .ok_or_else(|| Error::InvalidField("q overflows".into()))?;
        if r == 1 {
            let neg = Vec::new();
            return Ok(Fq(Arc::new(FqInner {
                p,
                r,
                q,
                modulus: vec![0, 1],
                exp: Vec::new(),
                log: Vec::new(),
                add: Vec::new(),
                neg,
            })));
        }
        if q > MAX_EXT_Q {
            return Err(Error::InvalidField(format!(
                "extension fields are limited to q <= {MAX_EXT_Q}"
            )));
        }
        let modulus = match &spec.modulus {
            Some(m) => {
                let m: Vec<u32> = m.iter().map(|&c| c % p).collect();
                if m.len() != r as usize + 1 || m[r as usize] != 1 {
                    return Err(Error::InvalidField(format!(
                        "modulus must be monic of degree {r}"
                    )));
                }
                if !fp_is_irreducible(&m, p) {
                    return Err(Error::InvalidField("modulus is reducible over F_p".into()));
                }
                m
            }
            None => default_modulus(p, r),
        };
        let mut add = vec![0u16; (q * q) as usize];
        let mut neg = vec![0u32; q as usize];
        for a in 0..q {
            let da = digits(a, p, r);
            neg[a as usize] = undigits(&da.iter().map(|&x| (p - x) % p).collect::<Vec<_>>(), p);
            for b in 0..q {
                let db = digits(b, p, r);
                let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[(a * q + b) as usize] = undigits(&s, p) as u16;
            }
        }
        // primitive element search
        let mut exp = Vec::new();
        let mut log = vec![0u32; q as usize];
        for g in 2..q {
            let gd = digits(g, p, r);
            let mut cur = digits(1, p, r);
            let mut seq = Vec::with_capacity((q - 1) as usize);
            let mut ok = true;
            for i in 0..q - 1 {
                let c = undigits(&cur, p);
                if i > 0 && c == 1 {
                    ok = false;
                    break;
                }
                seq.push(c);
                cur = fp_poly_mulmod(&cur, &gd, &modulus, p);
            }
            if ok {
                exp = seq;
                break;
            }
        }
        for (i, &x) in exp.iter().enumerate() {
            log[x as usize] = i as u32;
        }
        Ok(Fq(Arc::new(FqInner { p, r, q, modulus, exp, log, add, neg })))
    }

    pub fn prime(p: u32) -> Result<Fq> {
        Fq::new(&FieldSpec::prime(p))
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.0.p
    }

    #[inline]
    pub fn r(&self) -> u32 {
        self.0.r
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.0.q
    }

    #[inline]
    pub fn is_prime_field(&self) -> bool {
        self.0.r == 1
    }

    pub fn spec(&self) -> FieldSpec {
        FieldSpec {
            p: self.0.p,
            r: self.0.r,
            modulus: if self.0.r > 1 { Some(self.0.modulus.clone()) } else { None },
        }
    }

    /// Coefficients (constant first) of the polynomial defining F_q over F_p.
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.0.r == 1 {
            let s = a + b;
            if s >= self.0.p {
                s - self.0.p
            } else {
                s
            }
        } else {
            self.0.add[(a * self.0.q + b) as usize] as u32
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        if self.0.r == 1 {
            if a == 0 {
                0
            } else {
                self.0.p - a
            }
        } else {
            self.0.neg[a as usize]
        }
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if self.0.r == 1 {
            ((a as u64 * b as u64) % self.0.p as u64) as u32
        } else if a == 0 || b == 0 {
            0
        } else {
            let n = self.0.q - 1;
            let e = (self.0.log[a as usize] + self.0.log[b as usize]) % n;
            self.0.exp[e as usize]
        }
    }

    /// Multiplicative inverse. Panics on zero, which is a caller bug.
    pub fn inv(&self, a: Elem) -> Elem {
        assert!(a != 0, "inverse of zero in F_q");
        if self.0.r == 1 {
            self.pow(a, (self.0.p - 2) as u64)
        } else {
            let n = self.0.q - 1;
            let l = self.0.log[a as usize];
            self.0.exp[((n - l) % n) as usize]
        }
    }

    pub fn pow(&self, a: Elem, mut e: u64) -> Elem {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> Elem {
        n.rem_euclid(self.0.p as i64) as u32
    }

    /// x -> x^p.
    pub fn frobenius(&self, a: Elem) -> Elem {
        if self.0.r == 1 {
            a
        } else {
            self.pow(a, self.0.p as u64)
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.0.q
    }

    /// Nonzero elements, in encoding order.
    pub fn units(&self) -> impl Iterator<Item = Elem> {
        1..self.0.q
    }

    /// Text form of an element: a residue for r = 1, otherwise a polynomial
    /// in the generator `z` of F_q over F_p.
    pub fn elem_to_string(&self, a: Elem) -> String {
        if self.0.r == 1 {
            return a.to_string();
        }
        let d = digits(a, self.0.p, self.0.r);
        let mut parts = Vec::new();
        for (e, &c) in d.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mono = match e {
                0 => String::new(),
                1 => "z".to_string(),
                _ => format!("z^{e}"),
            };
            parts.push(match (c, e) {
                (_, 0) => c.to_string(),
                (1, _) => mono,
                _ => format!("{c}*{mono}"),
            });
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join("+")
        }
    }

    /// Builds an element from its F_p digits (constant first).
    pub fn from_digits(&self, d: &[u32]) -> Elem {
        let p = self.0.p;
        let mut v: Vec<u32> = vec![0; self.0.r as usize];
        for (i, &c) in d.iter().enumerate() {
            // reduce z^i modulo the defining polynomial
            let zi = self.z_pow_digits(i);
            for (k, &zk) in zi.iter().enumerate() {
                v[k] = ((v[k] as u64 + c as u64 % p as u64 * zk as u64) % p as u64) as u32;
            }
        }
        undigits(&v, p)
    }

    fn z_pow_digits(&self, i: usize) -> Vec<u32> {
        let r = self.0.r as usize;
        let p = self.0.p;
        let mut cur = vec![0u32; r];
        cur[0] = 1;
        if r == 1 {
            return cur;
        }
        let mut z = vec![0u32; r];
        z[1] = 1;
        for _ in 0..i {
            cur = fp_poly_mulmod(&cur, &z, &self.0.modulus, p);
        }
        cur
    }
}

/// Lexicographically smallest monic irreducible polynomial of degree r over
/// F_p, ordering candidates by the integer encoding of the lower coefficients
/// (highest coefficient most significant).
pub fn default_modulus(p: u32, r: u32) -> Vec<u32> {
    let count = (p as u64).pow(r);
    for enc in 0..count {
        let mut f = digits(enc as u32, p, r);
        f.push(1);
        if fp_is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}
