//! Dense univariate polynomials over GF(q).
//!
//! A [`Poly`] is plain data (coefficients low-to-high); every arithmetic
//! operation takes the [`FieldCtx`] explicitly.
//!
//! The textual form is `c0 + c1*x + c2*x^2 + ...`, dense, with every
//! coefficient written as its field encoding. The zero polynomial is `0`.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::ff::{FieldCtx, FieldElement};

/// A polynomial with coefficients listed from the constant term upward.
///
/// The representation is normalized: no trailing zero coefficients, so the
/// zero polynomial has no coefficients at all.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<FieldElement>,
}

/// The two linear substitutions used by the canonicalization algorithms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LinearSubst {
    /// `f(x) -> f(x - a)`.
    Shift(FieldElement),
    /// `f(x) -> b^deg(f) f(x / b)`.
    Scale(FieldElement),
}

impl Poly {
    pub fn new(mut coeffs: Vec<FieldElement>) -> Poly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Poly {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Poly {
        Poly::constant(FieldElement::ONE)
    }

    pub fn x() -> Poly {
        Poly::monomial(FieldElement::ONE, 1)
    }

    pub fn constant(c: FieldElement) -> Poly {
        Poly::new(vec![c])
    }

    pub fn monomial(c: FieldElement, k: usize) -> Poly {
        let mut coeffs = vec![FieldElement::ZERO; k + 1];
        coeffs[k] = c;
        Poly::new(coeffs)
    }

    /// Builds a polynomial from coefficient encodings, validating each.
    pub fn from_encodings(ctx: &FieldCtx, encs: &[u32]) -> Result<Poly> {
        let coeffs = encs
            .iter()
            .map(|&e| ctx.element(e))
            .collect::<Result<Vec<_>>>()?;
        Ok(Poly::new(coeffs))
    }

    /// `∏ (x - r)` over the given roots.
    pub fn from_roots(ctx: &FieldCtx, roots: &[FieldElement]) -> Poly {
        roots.iter().fold(Poly::one(), |acc, &r| {
            acc.mul(ctx, &Poly::new(vec![ctx.neg(r), FieldElement::ONE]))
        })
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn encodings(&self) -> Vec<u32> {
        self.coeffs.iter().map(|c| c.encode()).collect()
    }

    /// Coefficient of `x^k`, zero beyond the degree.
    pub fn coeff(&self, k: usize) -> FieldElement {
        self.coeffs.get(k).copied().unwrap_or(FieldElement::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> FieldElement {
        self.coeffs.last().copied().unwrap_or(FieldElement::ZERO)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == FieldElement::ONE
    }

    pub fn add(&self, ctx: &FieldCtx, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new(
            (0..n)
                .map(|i| ctx.add(self.coeff(i), other.coeff(i)))
                .collect(),
        )
    }

    pub fn sub(&self, ctx: &FieldCtx, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new(
            (0..n)
                .map(|i| ctx.sub(self.coeff(i), other.coeff(i)))
                .collect(),
        )
    }

    pub fn neg(&self, ctx: &FieldCtx) -> Poly {
        Poly::new(self.coeffs.iter().map(|&c| ctx.neg(c)).collect())
    }

    pub fn scale(&self, ctx: &FieldCtx, c: FieldElement) -> Poly {
        Poly::new(self.coeffs.iter().map(|&a| ctx.mul(a, c)).collect())
    }

    /// Schoolbook product.
    pub fn mul(&self, ctx: &FieldCtx, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![FieldElement::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = ctx.add(out[i + j], ctx.mul(a, b));
            }
        }
        Poly::new(out)
    }

    /// `self^e` by repeated squaring; `0^0 = 1`.
    pub fn pow(&self, ctx: &FieldCtx, mut e: u64) -> Poly {
        let mut result = Poly::one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(ctx, &base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(ctx, &base);
            }
        }
        result
    }

    /// Horner evaluation.
    pub fn eval(&self, ctx: &FieldCtx, x: FieldElement) -> FieldElement {
        self.coeffs
            .iter()
            .rev()
            .fold(FieldElement::ZERO, |acc, &c| ctx.add(ctx.mul(acc, x), c))
    }

    pub fn derivative(&self, ctx: &FieldCtx) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| ctx.mul(ctx.from_int(i as i64), c))
                .collect(),
        )
    }

    pub fn make_monic(&self, ctx: &FieldCtx) -> Poly {
        match ctx.inv(self.leading()) {
            Ok(inv) => self.scale(ctx, inv),
            Err(_) => Poly::zero(),
        }
    }

    pub fn div_rem(&self, ctx: &FieldCtx, divisor: &Poly) -> Result<(Poly, Poly)> {
        let d = divisor.degree().ok_or(Error::DivisionByZero)?;
        let inv_lead = ctx.inv(divisor.leading())?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= d {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut quot = vec![FieldElement::ZERO; rem.len() - d];
        for k in (d..rem.len()).rev() {
            let c = ctx.mul(rem[k], inv_lead);
            if c.is_zero() {
                continue;
            }
            quot[k - d] = c;
            for (i, &b) in divisor.coeffs.iter().enumerate() {
                let idx = k - d + i;
                rem[idx] = ctx.sub(rem[idx], ctx.mul(c, b));
            }
        }
        Ok((Poly::new(quot), Poly::new(rem)))
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, ctx: &FieldCtx, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(ctx, &b).expect("b is nonzero");
            a = b;
            b = r;
        }
        a.make_monic(ctx)
    }

    /// The distinct roots in GF(q), in encoding order, by exhaustive
    /// evaluation.
    pub fn roots(&self, ctx: &FieldCtx) -> Result<Vec<FieldElement>> {
        if self.is_zero() {
            return Err(Error::InvalidInput("roots of the zero polynomial".into()));
        }
        Ok(ctx
            .elements()
            .filter(|&x| self.eval(ctx, x).is_zero())
            .collect())
    }

    /// Whether `gcd(f, f')` is constant.
    pub fn is_squarefree(&self, ctx: &FieldCtx) -> Result<bool> {
        match self.degree() {
            None | Some(0) => Err(Error::InvalidInput(
                "squarefreeness of a constant polynomial".into(),
            )),
            Some(_) => Ok(self.gcd(ctx, &self.derivative(ctx)).degree() == Some(0)),
        }
    }

    /// `f(x - a)` via Horner's scheme on the shifted variable.
    pub fn shift(&self, ctx: &FieldCtx, a: FieldElement) -> Poly {
        let lin = Poly::new(vec![ctx.neg(a), FieldElement::ONE]);
        self.coeffs.iter().rev().fold(Poly::zero(), |acc, &c| {
            acc.mul(ctx, &lin).add(ctx, &Poly::constant(c))
        })
    }

    /// `b^deg(f) f(x / b)`: the coefficient of `x^i` is multiplied by
    /// `b^(deg - i)`.
    pub fn scale_var(&self, ctx: &FieldCtx, b: FieldElement) -> Result<Poly> {
        if b.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let Some(deg) = self.degree() else {
            return Ok(Poly::zero());
        };
        let mut w = FieldElement::ONE;
        let mut out = vec![FieldElement::ZERO; deg + 1];
        for i in (0..=deg).rev() {
            out[i] = ctx.mul(self.coeffs[i], w);
            w = ctx.mul(w, b);
        }
        Ok(Poly::new(out))
    }

    pub fn substitute_linear(&self, ctx: &FieldCtx, subst: LinearSubst) -> Result<Poly> {
        match subst {
            LinearSubst::Shift(a) => Ok(self.shift(ctx, a)),
            LinearSubst::Scale(b) => self.scale_var(ctx, b),
        }
    }

    /// Parses the textual form, checking coefficients against `ctx`.
    pub fn parse(ctx: &FieldCtx, s: &str) -> Result<Poly> {
        let bad = || Error::InvalidInput(format!("cannot parse polynomial {s:?}"));
        let s = s.trim();
        if s == "0" {
            return Ok(Poly::zero());
        }
        let mut coeffs: Vec<FieldElement> = Vec::new();
        for term in s.split('+') {
            let term = term.trim();
            let (c, k) = match term.split_once('*') {
                None => (term, 0usize),
                Some((c, "x")) => (c, 1),
                Some((c, pw)) => {
                    let k = pw.strip_prefix("x^").ok_or_else(bad)?;
                    (c, k.parse().map_err(|_| bad())?)
                }
            };
            let c: u32 = c.trim().parse().map_err(|_| bad())?;
            if k != coeffs.len() {
                return Err(bad());
            }
            coeffs.push(ctx.element(c)?);
        }
        Ok(Poly::new(coeffs))
    }
}

/// Lower degree first; equal degrees compare coefficient encodings from the
/// constant term upward.
impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*x")?,
                _ => write!(f, "{c}*x^{i}")?,
            }
        }
        Ok(())
    }
}
