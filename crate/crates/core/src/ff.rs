//! Arithmetic in GF(p^r) for odd primes p.
//!
//! Elements are stored by their integer encoding `Σ c_i p^i`, where
//! `c_0 + c_1 t + ... + c_{r-1} t^{r-1}` is the residue modulo the field's
//! defining polynomial. The encoding doubles as the total order on the field,
//! which the canonical-form algorithms rely on.
//!
//! The defining polynomial is the monic irreducible of degree r whose
//! non-leading coefficient vector has the smallest encoding, so a field is
//! fully determined by `(p, r)`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Fields up to this size get exp/log tables.
const TABLE_LIMIT: u64 = 1 << 20;

/// Largest supported field size; encodings must fit in a `u32`.
const MAX_FIELD_SIZE: u64 = 1 << 31;

/// An element of GF(p^r), stored by its encoding.
///
/// The derived ordering is the ordering of encodings.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    #[inline]
    pub fn encode(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Wraps an encoding without range checking against a field.
    #[inline]
    pub(crate) const fn from_encoding_unchecked(enc: u32) -> FieldElement {
        FieldElement(enc)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

struct LogTables {
    /// `exp[i] = γ^i` for `i < 2(q-1)`, so sums of two logs need no reduction.
    exp: Vec<u32>,
    /// `log[x]` for nonzero `x`; `log[0]` is unused.
    log: Vec<u32>,
}

/// The context for arithmetic in GF(p^r).
///
/// Immutable after construction; share it by reference or through an `Arc`.
pub struct FieldCtx {
    p: u32,
    r: u32,
    q: u32,
    /// Monic modulus over GF(p), low-to-high, length r + 1.
    modulus: Vec<u32>,
    /// `p^i` for `i in 0..r`.
    digit_pow: Vec<u32>,
    tables: Option<LogTables>,
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.r == other.r && self.modulus == other.modulus
    }
}

impl Eq for FieldCtx {}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("r", &self.r)
            .field("q", &self.q)
            .field("modulus", &self.modulus)
            .finish()
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Dense polynomial helpers over GF(p), used to pick the modulus and as the
/// table-free multiplication/inversion path.
mod fp_poly {
    pub fn trim(a: &mut Vec<u32>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    pub fn mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let p64 = p as u64;
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x as u64 * y as u64) % p64;
            }
        }
        let mut out: Vec<u32> = out.into_iter().map(|v| v as u32).collect();
        trim(&mut out);
        out
    }

    /// Remainder of `a` modulo a monic `m`.
    pub fn rem_monic(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        let mut a = a.to_vec();
        trim(&mut a);
        let dm = m.len() - 1;
        let p64 = p as u64;
        while a.len() > dm {
            let lead = *a.last().unwrap() as u64;
            let shift = a.len() - 1 - dm;
            for (i, &c) in m.iter().enumerate() {
                let sub = lead * c as u64 % p64;
                a[shift + i] = ((a[shift + i] as u64 + p64 - sub) % p64) as u32;
            }
            trim(&mut a);
        }
        a
    }

    pub fn inv_mod(a: u32, p: u32) -> u32 {
        let mut result = 1u64;
        let mut base = a as u64 % p as u64;
        let mut e = p as u64 - 2;
        while e > 0 {
            if e & 1 == 1 {
                result = result * base % p as u64;
            }
            base = base * base % p as u64;
            e >>= 1;
        }
        result as u32
    }

    /// Division with remainder by an arbitrary nonzero divisor.
    pub fn div_rem(a: &[u32], b: &[u32], p: u32) -> (Vec<u32>, Vec<u32>) {
        let mut r = a.to_vec();
        trim(&mut r);
        let db = b.len() - 1;
        let inv_lead = inv_mod(b[db], p) as u64;
        let p64 = p as u64;
        if r.len() < b.len() {
            return (Vec::new(), r);
        }
        let mut quot = vec![0u32; r.len() - db];
        while r.len() > db {
            let coef = r.last().copied().unwrap() as u64 * inv_lead % p64;
            let shift = r.len() - 1 - db;
            quot[shift] = coef as u32;
            for (i, &c) in b.iter().enumerate() {
                let sub = coef * c as u64 % p64;
                r[shift + i] = ((r[shift + i] as u64 + p64 - sub) % p64) as u32;
            }
            trim(&mut r);
        }
        trim(&mut quot);
        (quot, r)
    }

    pub fn sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let n = a.len().max(b.len());
        let mut out: Vec<u32> = (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect();
        trim(&mut out);
        out
    }

    pub fn gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let mut a = a.to_vec();
        let mut b = b.to_vec();
        trim(&mut a);
        trim(&mut b);
        while !b.is_empty() {
            let (_, r) = div_rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    /// `base^e mod m`.
    pub fn pow_mod(base: &[u32], mut e: u64, m: &[u32], p: u32) -> Vec<u32> {
        let mut result = vec![1u32];
        let mut b = rem_monic(base, m, p);
        while e > 0 {
            if e & 1 == 1 {
                result = rem_monic(&mul(&result, &b, p), m, p);
            }
            b = rem_monic(&mul(&b, &b, p), m, p);
            e >>= 1;
        }
        result
    }

    /// Rabin-style irreducibility test for a monic `m` of degree r:
    /// `gcd(t^(p^i) - t, m) = 1` for every `i <= r/2`.
    pub fn is_irreducible(m: &[u32], p: u32) -> bool {
        let r = m.len() - 1;
        if r == 1 {
            return true;
        }
        let t = vec![0, 1];
        let mut frob = t.clone();
        for _ in 0..r / 2 {
            frob = pow_mod(&frob, p as u64, m, p);
            let diff = sub(&frob, &t, p);
            let g = gcd(m, &diff, p);
            if g.len() != 1 {
                return false;
            }
        }
        true
    }
}

/// Unary and binary operations accepted by [`arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    Inv,
    Neg,
}

impl FieldCtx {
    /// Builds GF(p^r) with the smallest-encoding irreducible modulus.
    pub fn new(p: u32, r: u32) -> Result<FieldCtx> {
        if p < 3 || !is_prime(p as u64) {
            return Err(Error::InvalidCharacteristic(p as u64));
        }
        if r < 1 {
            return Err(Error::InvalidDegree(r as u64));
        }
        let q = (p as u64)
            .checked_pow(r)
            .filter(|&q| q <= MAX_FIELD_SIZE)
            .ok_or(Error::InvalidDegree(r as u64))?;
        let digit_pow: Vec<u32> = (0..r).map(|i| p.pow(i)).collect();
        let modulus = (0..q)
            .map(|enc| {
                let mut m: Vec<u32> = (0..r)
                    .map(|i| (enc / (p as u64).pow(i) % p as u64) as u32)
                    .collect();
                m.push(1);
                m
            })
            .find(|m| fp_poly::is_irreducible(m, p))
            .expect("an irreducible polynomial of every degree exists");
        let mut ctx = FieldCtx {
            p,
            r,
            q: q as u32,
            modulus,
            digit_pow,
            tables: None,
        };
        if q <= TABLE_LIMIT {
            ctx.tables = Some(ctx.build_tables());
        }
        Ok(ctx)
    }

    /// Shorthand for `Arc::new(FieldCtx::new(p, r)?)`.
    pub fn shared(p: u32, r: u32) -> Result<Arc<FieldCtx>> {
        FieldCtx::new(p, r).map(Arc::new)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// The monic modulus, low-to-high.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::ZERO
    }

    pub fn one(&self) -> FieldElement {
        FieldElement::ONE
    }

    /// The element with the given encoding.
    pub fn element(&self, enc: u32) -> Result<FieldElement> {
        if enc >= self.q {
            return Err(Error::InvalidInput(format!(
                "encoding {enc} out of range for GF({})",
                self.q
            )));
        }
        Ok(FieldElement(enc))
    }

    /// The image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> FieldElement {
        FieldElement(n.rem_euclid(self.p as i64) as u32)
    }

    /// The element `Σ coeffs[i] t^i`; `coeffs` may be shorter than r.
    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FieldElement> {
        if coeffs.len() > self.r as usize || coeffs.iter().any(|&c| c >= self.p) {
            return Err(Error::InvalidInput(format!(
                "coefficient vector {coeffs:?} invalid for GF({}^{})",
                self.p, self.r
            )));
        }
        Ok(FieldElement(
            coeffs
                .iter()
                .zip(&self.digit_pow)
                .map(|(&c, &w)| c * w)
                .sum(),
        ))
    }

    /// Coefficients of `a` in the power basis `1, t, ..., t^(r-1)`.
    pub fn coeffs(&self, a: FieldElement) -> Vec<u32> {
        let mut v = a.0;
        (0..self.r)
            .map(|_| {
                let d = v % self.p;
                v /= self.p;
                d
            })
            .collect()
    }

    /// All elements in encoding order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.q).map(FieldElement)
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.r == 1 {
            let s = a.0 + b.0;
            return FieldElement(if s >= self.p { s - self.p } else { s });
        }
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0;
        for &w in &self.digit_pow {
            let mut d = x % self.p + y % self.p;
            if d >= self.p {
                d -= self.p;
            }
            out += d * w;
            x /= self.p;
            y /= self.p;
        }
        FieldElement(out)
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        if self.r == 1 {
            return FieldElement(if a.0 == 0 { 0 } else { self.p - a.0 });
        }
        let mut x = a.0;
        let mut out = 0;
        for &w in &self.digit_pow {
            let d = x % self.p;
            if d != 0 {
                out += (self.p - d) * w;
            }
            x /= self.p;
        }
        FieldElement(out)
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 == 0 || b.0 == 0 {
            return FieldElement::ZERO;
        }
        if self.r == 1 {
            return FieldElement((a.0 as u64 * b.0 as u64 % self.p as u64) as u32);
        }
        match &self.tables {
            Some(t) => FieldElement(t.exp[(t.log[a.0 as usize] + t.log[b.0 as usize]) as usize]),
            None => self.mul_reference(a, b),
        }
    }

    /// Multiplication by reducing the product of coefficient polynomials;
    /// independent of the log tables.
    pub fn mul_reference(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let prod = fp_poly::mul(&self.coeffs(a), &self.coeffs(b), self.p);
        let red = fp_poly::rem_monic(&prod, &self.modulus, self.p);
        self.from_coeffs(&red).expect("reduced residue is in range")
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        if self.r == 1 {
            return Ok(FieldElement(fp_poly::inv_mod(a.0, self.p)));
        }
        match &self.tables {
            Some(t) => {
                let l = t.log[a.0 as usize];
                let n = self.q - 1;
                Ok(FieldElement(t.exp[((n - l) % n) as usize]))
            }
            None => self.inv_euclid(a),
        }
    }

    /// Inversion by the extended Euclidean algorithm on the coefficient
    /// polynomial.
    pub fn inv_euclid(&self, a: FieldElement) -> Result<FieldElement> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        let p = self.p;
        // Invariant: s_i * a ≡ r_i (mod modulus).
        let (mut r0, mut r1) = (self.modulus.clone(), self.coeffs(a));
        fp_poly::trim(&mut r1);
        let (mut s0, mut s1): (Vec<u32>, Vec<u32>) = (Vec::new(), vec![1]);
        while r1.len() > 1 {
            let (quot, rem) = fp_poly::div_rem(&r0, &r1, p);
            let s2 = fp_poly::sub(&s0, &fp_poly::mul(&quot, &s1, p), p);
            r0 = std::mem::replace(&mut r1, rem);
            s0 = std::mem::replace(&mut s1, s2);
        }
        // r1 is a nonzero constant.
        let c = fp_poly::inv_mod(r1[0], p) as u64;
        let mut out: Vec<u32> = s1
            .iter()
            .map(|&x| (x as u64 * c % p as u64) as u32)
            .collect();
        out = fp_poly::rem_monic(&out, &self.modulus, p);
        self.from_coeffs(&out)
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FieldElement, mut e: u64) -> FieldElement {
        if e == 0 {
            return FieldElement::ONE;
        }
        if a.0 == 0 {
            return FieldElement::ZERO;
        }
        if let (Some(t), true) = (&self.tables, self.r > 1) {
            let n = (self.q - 1) as u64;
            let l = t.log[a.0 as usize] as u64 * (e % n) % n;
            return FieldElement(t.exp[l as usize]);
        }
        let mut base = a;
        let mut result = FieldElement::ONE;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(result, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        result
    }

    /// `a^(p^k)`; k is taken modulo r.
    pub fn frobenius(&self, a: FieldElement, k: u32) -> FieldElement {
        let k = k % self.r;
        if k == 0 || a.0 < self.p {
            return a;
        }
        self.pow(a, (self.p as u64).pow(k))
    }

    /// Whether `a` is a square in GF(q) (zero counts as a square).
    pub fn is_square(&self, a: FieldElement) -> bool {
        if a.0 == 0 {
            return true;
        }
        match (&self.tables, self.r) {
            (Some(t), r) if r > 1 => t.log[a.0 as usize] % 2 == 0,
            _ => self.pow(a, (self.q as u64 - 1) / 2) == FieldElement::ONE,
        }
    }

    /// The smallest-encoding element of multiplicative order q - 1.
    pub fn primitive_element(&self) -> FieldElement {
        let n = self.q as u64 - 1;
        let factors = prime_factors(n);
        (1..self.q)
            .map(FieldElement)
            .find(|&g| {
                factors
                    .iter()
                    .all(|&l| self.pow_reference(g, n / l) != FieldElement::ONE)
            })
            .expect("GF(q)^× is cyclic")
    }

    fn pow_reference(&self, a: FieldElement, mut e: u64) -> FieldElement {
        let mut base = a;
        let mut result = FieldElement::ONE;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul_reference(result, base);
            }
            base = self.mul_reference(base, base);
            e >>= 1;
        }
        result
    }

    fn build_tables(&self) -> LogTables {
        let n = (self.q - 1) as usize;
        let gen = self.primitive_element();
        let mut exp = vec![0u32; 2 * n];
        let mut log = vec![0u32; self.q as usize];
        let mut x = FieldElement::ONE;
        for i in 0..n {
            exp[i] = x.0;
            exp[i + n] = x.0;
            log[x.0 as usize] = i as u32;
            x = self.mul_reference(x, gen);
        }
        LogTables { exp, log }
    }
}

/// A field element bundled with its context, for checked arithmetic across
/// contexts.
#[derive(Clone, Debug)]
pub struct Gf {
    ctx: Arc<FieldCtx>,
    value: FieldElement,
}

impl Gf {
    pub fn new(ctx: Arc<FieldCtx>, value: FieldElement) -> Result<Gf> {
        ctx.element(value.encode())?;
        Ok(Gf { ctx, value })
    }

    pub fn value(&self) -> FieldElement {
        self.value
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn encode(&self) -> u32 {
        self.value.encode()
    }
}

impl PartialEq for Gf {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value && *self.ctx == *other.ctx
    }
}

/// Checked arithmetic: `Inv` and `Neg` act on `a` alone, but `b` must still
/// live in the same field.
pub fn arith(a: &Gf, b: &Gf, op: ArithOp) -> Result<Gf> {
    if !Arc::ptr_eq(&a.ctx, &b.ctx) && *a.ctx != *b.ctx {
        return Err(Error::FieldMismatch);
    }
    let ctx = &a.ctx;
    let (x, y) = (a.value, b.value);
    let value = match op {
        ArithOp::Add => ctx.add(x, y),
        ArithOp::Sub => ctx.sub(x, y),
        ArithOp::Mul => ctx.mul(x, y),
        ArithOp::Div => ctx.div(x, y)?,
        ArithOp::Inv => ctx.inv(x)?,
        ArithOp::Neg => ctx.neg(x),
    };
    Ok(Gf {
        ctx: Arc::clone(ctx),
        value,
    })
}
