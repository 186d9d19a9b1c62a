//! Homogeneous binary forms, points of the projective line and the action of
//! PGL₂ on both.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::ff::{FieldCtx, FieldElement};
use crate::poly::Poly;

/// A point of P¹(GF(q)).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum P1Point {
    Finite(FieldElement),
    Infinity,
}

/// A 2×2 matrix `[[a, b], [c, d]]` acting by `x ↦ (ax + b) / (cx + d)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Mat2 {
    pub a: FieldElement,
    pub b: FieldElement,
    pub c: FieldElement,
    pub d: FieldElement,
}

impl Mat2 {
    pub fn new(a: FieldElement, b: FieldElement, c: FieldElement, d: FieldElement) -> Mat2 {
        Mat2 { a, b, c, d }
    }

    pub fn identity() -> Mat2 {
        let (o, z) = (FieldElement::ONE, FieldElement::ZERO);
        Mat2::new(o, z, z, o)
    }

    pub fn det(&self, ctx: &FieldCtx) -> FieldElement {
        ctx.sub(ctx.mul(self.a, self.d), ctx.mul(self.b, self.c))
    }

    /// `self · other`.
    pub fn mul(&self, ctx: &FieldCtx, other: &Mat2) -> Mat2 {
        let dot = |x1, y1, x2, y2| ctx.add(ctx.mul(x1, x2), ctx.mul(y1, y2));
        Mat2::new(
            dot(self.a, self.b, other.a, other.c),
            dot(self.a, self.b, other.b, other.d),
            dot(self.c, self.d, other.a, other.c),
            dot(self.c, self.d, other.b, other.d),
        )
    }

    /// The adjugate, which represents the inverse in PGL₂.
    pub fn adjugate(&self, ctx: &FieldCtx) -> Mat2 {
        Mat2::new(self.d, ctx.neg(self.b), ctx.neg(self.c), self.a)
    }

    pub fn apply(&self, ctx: &FieldCtx, pt: P1Point) -> P1Point {
        let (num, den) = match pt {
            P1Point::Infinity => (self.a, self.c),
            P1Point::Finite(x) => (
                ctx.add(ctx.mul(self.a, x), self.b),
                ctx.add(ctx.mul(self.c, x), self.d),
            ),
        };
        match ctx.inv(den) {
            Ok(inv) => P1Point::Finite(ctx.mul(num, inv)),
            Err(_) => P1Point::Infinity,
        }
    }

    /// The unique transformation sending three distinct points to ∞, 0 and 1.
    pub fn sending_to_inf_zero_one(
        ctx: &FieldCtx,
        to_inf: P1Point,
        to_zero: P1Point,
        to_one: P1Point,
    ) -> Result<Mat2> {
        use P1Point::{Finite, Infinity};
        if to_inf == to_zero || to_inf == to_one || to_zero == to_one {
            return Err(Error::SingularTransform);
        }
        let (o, z) = (FieldElement::ONE, FieldElement::ZERO);
        // x ↦ (x - Q)(R - P) / ((x - P)(R - Q)), with the ∞ cases taken as limits.
        let m = match (to_inf, to_zero, to_one) {
            (Infinity, Finite(q), Finite(r)) => Mat2::new(o, ctx.neg(q), z, ctx.sub(r, q)),
            (Finite(p), Infinity, Finite(r)) => Mat2::new(z, ctx.sub(r, p), o, ctx.neg(p)),
            (Finite(p), Finite(q), Infinity) => Mat2::new(o, ctx.neg(q), o, ctx.neg(p)),
            (Finite(p), Finite(q), Finite(r)) => {
                let rp = ctx.sub(r, p);
                let rq = ctx.sub(r, q);
                Mat2::new(rp, ctx.neg(ctx.mul(rp, q)), rq, ctx.neg(ctx.mul(rq, p)))
            }
            _ => unreachable!("points are distinct"),
        };
        Ok(m)
    }
}

/// A binary form of degree n; `coeffs[k]` is the coefficient of
/// `x^k z^(n-k)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BinaryForm {
    coeffs: Vec<FieldElement>,
}

impl BinaryForm {
    pub fn new(coeffs: Vec<FieldElement>) -> Result<BinaryForm> {
        if coeffs.is_empty() || coeffs.iter().all(|c| c.is_zero()) {
            return Err(Error::InvalidInput("binary form must be nonzero".into()));
        }
        Ok(BinaryForm { coeffs })
    }

    /// Homogenizes `f` to degree `n >= deg f`.
    pub fn from_poly(f: &Poly, n: usize) -> Result<BinaryForm> {
        match f.degree() {
            Some(d) if d <= n => BinaryForm::new((0..=n).map(|k| f.coeff(k)).collect()),
            _ => Err(Error::InvalidInput(format!(
                "cannot homogenize {f} to degree {n}"
            ))),
        }
    }

    /// `∏ (x - a z)` over finite roots times `z` for each root at infinity.
    pub fn from_roots(ctx: &FieldCtx, roots: &[P1Point]) -> BinaryForm {
        let n = roots.len();
        let mut coeffs = vec![FieldElement::ZERO; n + 1];
        coeffs[0] = FieldElement::ONE;
        let mut deg = 0;
        for root in roots {
            match *root {
                // Multiplying by z keeps the x-exponents.
                P1Point::Infinity => {}
                P1Point::Finite(a) => {
                    let na = ctx.neg(a);
                    for k in (0..=deg + 1).rev() {
                        let shifted = if k > 0 {
                            coeffs[k - 1]
                        } else {
                            FieldElement::ZERO
                        };
                        coeffs[k] = ctx.add(shifted, ctx.mul(na, coeffs[k]));
                    }
                    deg += 1;
                }
            }
        }
        BinaryForm { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    /// Dehomogenization at `z = 1`.
    pub fn to_poly(&self) -> Poly {
        Poly::new(self.coeffs.clone())
    }

    /// Scales so the lowest-index nonzero coefficient is 1.
    pub fn normalized(&self, ctx: &FieldCtx) -> BinaryForm {
        let first = *self
            .coeffs
            .iter()
            .find(|c| !c.is_zero())
            .expect("forms are nonzero");
        let inv = ctx.inv(first).expect("nonzero");
        BinaryForm {
            coeffs: self.coeffs.iter().map(|&c| ctx.mul(c, inv)).collect(),
        }
    }

    /// `F(a x + b z, c x + d z)` without normalization.
    pub fn substitute(&self, ctx: &FieldCtx, m: &Mat2) -> BinaryForm {
        let n = self.degree();
        // Powers of the two linear forms, as coefficient vectors in x.
        let lin_x = [m.b, m.a];
        let lin_z = [m.d, m.c];
        let powers = |lin: [FieldElement; 2]| {
            let mut out = vec![vec![FieldElement::ONE]];
            for k in 1..=n {
                let prev: &Vec<FieldElement> = &out[k - 1];
                let mut next = vec![FieldElement::ZERO; k + 1];
                for (i, &c) in prev.iter().enumerate() {
                    next[i] = ctx.add(next[i], ctx.mul(c, lin[0]));
                    next[i + 1] = ctx.add(next[i + 1], ctx.mul(c, lin[1]));
                }
                out.push(next);
            }
            out
        };
        let px = powers(lin_x);
        let pz = powers(lin_z);
        let mut out = vec![FieldElement::ZERO; n + 1];
        for (k, &fk) in self.coeffs.iter().enumerate() {
            if fk.is_zero() {
                continue;
            }
            let (u, v) = (&px[k], &pz[n - k]);
            for (i, &a) in u.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let fa = ctx.mul(fk, a);
                for (j, &b) in v.iter().enumerate() {
                    out[i + j] = ctx.add(out[i + j], ctx.mul(fa, b));
                }
            }
        }
        BinaryForm { coeffs: out }
    }

    /// Roots on P¹(GF(q)), by exhaustive evaluation; ∞ is a root when the
    /// top coefficient vanishes.
    pub fn roots(&self, ctx: &FieldCtx) -> Vec<P1Point> {
        let f = self.to_poly();
        let mut out: Vec<P1Point> = ctx
            .elements()
            .filter(|&x| f.eval(ctx, x).is_zero())
            .map(P1Point::Finite)
            .collect();
        if self.coeffs.last().is_some_and(|c| c.is_zero()) {
            out.push(P1Point::Infinity);
        }
        out
    }
}

/// Lexicographic on coefficient encodings from index 0 upward, after degree.
impl Ord for BinaryForm {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

impl PartialOrd for BinaryForm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Input accepted by [`mobius_image`].
pub enum FormInput<'a> {
    /// A polynomial, homogenized to the given degree.
    Poly(&'a Poly, usize),
    Form(&'a BinaryForm),
}

/// The normalized form `F ∘ M⁻¹`, whose roots are the images under `M` of the
/// roots of `F`.
pub fn mobius_image(ctx: &FieldCtx, input: FormInput<'_>, m: &Mat2) -> Result<BinaryForm> {
    if m.det(ctx).is_zero() {
        return Err(Error::SingularTransform);
    }
    let form = match input {
        FormInput::Poly(f, n) => BinaryForm::from_poly(f, n)?,
        FormInput::Form(f) => f.clone(),
    };
    Ok(form.substitute(ctx, &m.adjugate(ctx)).normalized(ctx))
}
