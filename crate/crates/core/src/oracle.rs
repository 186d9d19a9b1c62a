//! Brute-force verification routes, independent of the Hasse-Witt engine and
//! of the canonical-form algorithms.
//!
//! - p-ranks from exhaustive point counts: the counts over GF(q^i) for
//!   `i = 1..g` determine the L-polynomial, and the degree of its reduction
//!   mod p is the p-rank.
//! - GF(q)-isomorphism by searching all of PGL₂(GF(q)).
//!
//! These are meant to be obviously correct, not fast.

use crate::error::{Error, Result};
use crate::ff::{FieldCtx, FieldElement};
use crate::form::{BinaryForm, Mat2};
use crate::poly::Poly;
use crate::prank::CurveModel;

/// Largest extension field the point counter will enumerate.
pub const POINT_COUNT_LIMIT: u64 = 100_000;

/// Largest field for PGL₂ searches.
pub const PGL2_SEARCH_LIMIT: u32 = 13;

/// Point counts and the L-polynomial of a curve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZetaData {
    pub curve: CurveModel,
    /// `#C(GF(q^i))` for `i = 1..=g`.
    pub counts: Vec<u64>,
    /// `a_0..a_{2g}` of `L(T) = Σ a_i T^i`, exact.
    pub l_coeffs: Vec<i128>,
    /// `l_coeffs` reduced into `[0, p)`.
    pub l_coeffs_mod_p: Vec<u32>,
}

/// Embeds GF(q) into GF(q^i) by sending the generator `t` to a root of the
/// smaller field's modulus.
struct Embedding<'a> {
    big: &'a FieldCtx,
    basis: Vec<FieldElement>,
}

impl<'a> Embedding<'a> {
    fn new(small: &FieldCtx, big: &'a FieldCtx) -> Embedding<'a> {
        let m = small.modulus();
        let as_big: Vec<FieldElement> = m.iter().map(|&c| big.from_int(c as i64)).collect();
        let eval = |x: FieldElement| {
            as_big
                .iter()
                .rev()
                .fold(FieldElement::ZERO, |acc, &c| big.add(big.mul(acc, x), c))
        };
        let root = big
            .elements()
            .find(|&x| eval(x).is_zero())
            .expect("the modulus splits in an extension of its degree");
        let basis = (0..small.r())
            .scan(FieldElement::ONE, |pw, _| {
                let cur = *pw;
                *pw = big.mul(*pw, root);
                Some(cur)
            })
            .collect();
        Embedding { big, basis }
    }

    fn map(&self, small: &FieldCtx, a: FieldElement) -> FieldElement {
        small
            .coeffs(a)
            .iter()
            .zip(&self.basis)
            .fold(FieldElement::ZERO, |acc, (&c, &b)| {
                self.big
                    .add(acc, self.big.mul(self.big.from_int(c as i64), b))
            })
    }
}

/// The number of points on the smooth projective model over GF(q^i).
pub fn count_points(ctx: &FieldCtx, curve: &CurveModel, i: u32) -> Result<u64> {
    let size = (ctx.q() as u64).checked_pow(i).unwrap_or(u64::MAX);
    if i == 0 || size > POINT_COUNT_LIMIT {
        return Err(Error::OracleTooLarge(format!(
            "point count over GF({}^{i})",
            ctx.q()
        )));
    }
    let big = FieldCtx::new(ctx.p(), ctx.r() * i)?;
    let emb = Embedding::new(ctx, &big);
    let f: Vec<FieldElement> = curve
        .f()
        .coeffs()
        .iter()
        .map(|&c| emb.map(ctx, c))
        .collect();
    let f = Poly::new(f);

    let mut is_square = vec![false; big.q() as usize];
    for x in big.elements() {
        is_square[big.mul(x, x).encode() as usize] = true;
    }
    let mut total = 0u64;
    for x in big.elements() {
        let v = f.eval(&big, x);
        total += if v.is_zero() {
            1
        } else if is_square[v.encode() as usize] {
            2
        } else {
            0
        };
    }
    let g = curve.genus();
    total += if f.degree() == Some(2 * g + 1) {
        1
    } else if is_square[f.leading().encode() as usize] {
        2
    } else {
        0
    };
    Ok(total)
}

/// Point counts and the full L-polynomial.
pub fn zeta_data(ctx: &FieldCtx, curve: &CurveModel) -> Result<ZetaData> {
    let g = curve.genus();
    let q = ctx.q() as i128;
    let counts = (1..=g as u32)
        .map(|i| count_points(ctx, curve, i))
        .collect::<Result<Vec<_>>>()?;
    // S_i = q^i + 1 - #C(GF(q^i)) is the i-th power sum of the Frobenius
    // eigenvalues; Newton's identities give the a_k with L(T) = ∏(1 - α T).
    let power_sums: Vec<i128> = counts
        .iter()
        .enumerate()
        .map(|(i, &n)| q.pow(i as u32 + 1) + 1 - n as i128)
        .collect();
    let mut a = vec![0i128; 2 * g + 1];
    a[0] = 1;
    for k in 1..=g {
        let s: i128 = (1..=k).map(|j| power_sums[j - 1] * a[k - j]).sum();
        debug_assert_eq!(s % k as i128, 0);
        a[k] = -s / k as i128;
    }
    for i in 0..g {
        a[2 * g - i] = q.pow((g - i) as u32) * a[i];
    }
    let p = ctx.p() as i128;
    let l_coeffs_mod_p = a.iter().map(|&c| c.rem_euclid(p) as u32).collect();
    Ok(ZetaData {
        curve: curve.clone(),
        counts,
        l_coeffs: a,
        l_coeffs_mod_p,
    })
}

/// The p-rank as the degree of `L(T) mod p`.
pub fn oracle_p_rank(ctx: &FieldCtx, curve: &CurveModel) -> Result<usize> {
    let z = zeta_data(ctx, curve)?;
    Ok(z.l_coeffs_mod_p
        .iter()
        .rposition(|&c| c != 0)
        .expect("a_0 = 1"))
}

fn check_search_regime(ctx: &FieldCtx) -> Result<()> {
    if ctx.q() > PGL2_SEARCH_LIMIT {
        return Err(Error::OracleTooLarge(format!(
            "PGL2 search over GF({})",
            ctx.q()
        )));
    }
    Ok(())
}

/// One representative of every element of PGL₂(GF(q)): `c = 1`, or `c = 0`
/// and `d = 1`.
pub fn pgl2_elements(ctx: &FieldCtx) -> Vec<Mat2> {
    let mut out = Vec::new();
    let (o, z) = (FieldElement::ONE, FieldElement::ZERO);
    for a in ctx.elements() {
        for b in ctx.elements() {
            if !a.is_zero() {
                out.push(Mat2::new(a, b, z, o));
            }
            for d in ctx.elements() {
                let m = Mat2::new(a, b, o, d);
                if !m.det(ctx).is_zero() {
                    out.push(m);
                }
            }
        }
    }
    out
}

/// `λ` with `form = λ · target`, if any.
fn proportionality(ctx: &FieldCtx, form: &BinaryForm, target: &BinaryForm) -> Option<FieldElement> {
    if form.degree() != target.degree() {
        return None;
    }
    let mut lambda = None;
    for (&x, &y) in form.coeffs().iter().zip(target.coeffs()) {
        match (x.is_zero(), y.is_zero()) {
            (true, true) => continue,
            (false, false) => {
                let l = ctx.div(x, y).expect("nonzero");
                if *lambda.get_or_insert(l) != l {
                    return None;
                }
            }
            _ => return None,
        }
    }
    lambda
}

/// Whether `y² = f1(x)` and `y² = f2(x)` (genus g, homogenized to degree
/// 2g+2) are isomorphic over GF(q): some `M` has
/// `F2(ax + bz, cx + dz) = e² F1(x, z)` with `e ∈ GF(q)^×`.
pub fn brute_force_isomorphic(ctx: &FieldCtx, f1: &Poly, f2: &Poly, g: usize) -> Result<bool> {
    check_search_regime(ctx)?;
    let n = 2 * g + 2;
    let form1 = BinaryForm::from_poly(f1, n)?;
    let form2 = BinaryForm::from_poly(f2, n)?;
    Ok(pgl2_elements(ctx).iter().any(|m| {
        proportionality(ctx, &form2.substitute(ctx, m), &form1).is_some_and(|l| ctx.is_square(l))
    }))
}

/// Like [`brute_force_isomorphic`] but accepting any scalar, i.e.
/// isomorphism up to quadratic twist.
pub fn brute_force_twist_isomorphic(
    ctx: &FieldCtx,
    f1: &Poly,
    f2: &Poly,
    g: usize,
) -> Result<bool> {
    check_search_regime(ctx)?;
    let n = 2 * g + 2;
    let form1 = BinaryForm::from_poly(f1, n)?;
    let form2 = BinaryForm::from_poly(f2, n)?;
    Ok(pgl2_elements(ctx)
        .iter()
        .any(|m| proportionality(ctx, &form2.substitute(ctx, m), &form1).is_some()))
}

/// The number of `M ∈ PGL₂(GF(q))` with `F ∘ M ∝ F`, i.e. the order of the
/// group of projective automorphisms of the branch locus.
pub fn brute_force_stabilizer_order(ctx: &FieldCtx, form: &BinaryForm) -> Result<usize> {
    check_search_regime(ctx)?;
    Ok(pgl2_elements(ctx)
        .iter()
        .filter(|m| proportionality(ctx, &form.substitute(ctx, m), form).is_some())
        .count())
}

/// A complete invariant for GF(q)-isomorphism of `y² = f(x)`: the minimum
/// over PGL₂ of the transformed form, scaled by a square so that its first
/// nonzero coefficient is 1 or the smallest non-square.
pub fn isomorphism_class_key(ctx: &FieldCtx, f: &Poly, g: usize) -> Result<BinaryForm> {
    check_search_regime(ctx)?;
    let form = BinaryForm::from_poly(f, 2 * g + 2)?;
    let nonsquare = ctx
        .elements()
        .find(|&x| !ctx.is_square(x))
        .expect("q is odd");
    let key = pgl2_elements(ctx)
        .iter()
        .map(|m| {
            let img = form.substitute(ctx, m);
            let first = *img.coeffs().iter().find(|c| !c.is_zero()).expect("nonzero");
            let target = if ctx.is_square(first) {
                FieldElement::ONE
            } else {
                nonsquare
            };
            let scale = ctx.div(target, first).expect("nonzero");
            BinaryForm::new(img.coeffs().iter().map(|&c| ctx.mul(c, scale)).collect())
                .expect("nonzero")
        })
        .min()
        .expect("PGL2 is nonempty");
    Ok(key)
}

/// The analogue of [`isomorphism_class_key`] for isomorphism up to quadratic
/// twist: every transformed form is scaled to have first nonzero
/// coefficient 1.
pub fn twist_class_key(ctx: &FieldCtx, f: &Poly, g: usize) -> Result<BinaryForm> {
    check_search_regime(ctx)?;
    let form = BinaryForm::from_poly(f, 2 * g + 2)?;
    Ok(pgl2_elements(ctx)
        .iter()
        .map(|m| form.substitute(ctx, m).normalized(ctx))
        .min()
        .expect("PGL2 is nonempty"))
}
