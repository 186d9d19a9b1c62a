//! The family method.
//!
//! The family `F_{g,q}` consists of the pointed curves
//! `y² = x^{2g+1} + α x^{2g-1} + α x^{2g-2} + (lower terms)` with `α ≠ 0`.
//! Distinct members are never isomorphic as pointed curves, and a curve
//! with a rational Weierstrass point can appear in the family at most once
//! for each such point. [`canonical_key`] moves every rational root of `f` to
//! infinity, renormalizes into the family, and keeps the smallest result, so
//! members describing the same curve share a key.

use std::collections::HashSet;

use rand::Rng;

use crate::error::{Error, Result};
use crate::ff::{FieldCtx, FieldElement};
use crate::poly::Poly;

/// A squarefree member of `F_{g,q}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FamilyCurve {
    genus: usize,
    f: Poly,
}

impl FamilyCurve {
    pub fn new(ctx: &FieldCtx, g: usize, f: Poly) -> Result<FamilyCurve> {
        check_available(ctx, g)?;
        if !is_in_family(&f, g) {
            return Err(Error::InvalidInput(format!(
                "{f} is not in the genus-{g} family"
            )));
        }
        if !f.is_squarefree(ctx)? {
            return Err(Error::SingularCurve);
        }
        Ok(FamilyCurve { genus: g, f })
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn f(&self) -> &Poly {
        &self.f
    }

    /// The common coefficient of `x^{2g-1}` and `x^{2g-2}`.
    pub fn alpha(&self) -> FieldElement {
        self.f.coeff(2 * self.genus - 1)
    }
}

/// The smallest family member over GF(q) describing the same curve.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey(Poly);

impl CanonicalKey {
    pub fn poly(&self) -> &Poly {
        &self.0
    }

    pub fn into_poly(self) -> Poly {
        self.0
    }
}

fn check_available(ctx: &FieldCtx, g: usize) -> Result<()> {
    if g < 2 {
        return Err(Error::InvalidInput(format!(
            "the family needs genus >= 2, got {g}"
        )));
    }
    let n = 2 * g as u32 + 1;
    if n.is_multiple_of(ctx.p()) {
        return Err(Error::MethodUnavailable {
            p: ctx.p(),
            two_g_plus_one: n,
        });
    }
    Ok(())
}

/// Whether `f` is monic of degree 2g+1 with no `x^{2g}` term and equal
/// nonzero coefficients at `x^{2g-1}` and `x^{2g-2}`.
pub fn is_in_family(f: &Poly, g: usize) -> bool {
    g >= 2
        && f.degree() == Some(2 * g + 1)
        && f.is_monic()
        && f.coeff(2 * g).is_zero()
        && !f.coeff(2 * g - 1).is_zero()
        && f.coeff(2 * g - 1) == f.coeff(2 * g - 2)
}

/// The member with coefficient `alpha` and lower coefficients `lower`
/// (degrees `0..=2g-3`).
pub fn family_poly(g: usize, alpha: FieldElement, lower: &[FieldElement]) -> Poly {
    debug_assert_eq!(lower.len(), 2 * g - 2);
    let mut coeffs = lower.to_vec();
    coeffs.extend([alpha, alpha, FieldElement::ZERO, FieldElement::ONE]);
    Poly::new(coeffs)
}

/// Draws α uniformly from GF(q)^× and the lower coefficients uniformly from
/// GF(q), redrawing until the model is smooth.
pub fn sample_family<R: Rng + ?Sized>(
    ctx: &FieldCtx,
    g: usize,
    rng: &mut R,
) -> Result<FamilyCurve> {
    check_available(ctx, g)?;
    let q = ctx.q();
    loop {
        let alpha = FieldElement::from_encoding_unchecked(rng.random_range(1..q));
        let lower: Vec<FieldElement> = (0..2 * g - 2)
            .map(|_| FieldElement::from_encoding_unchecked(rng.random_range(0..q)))
            .collect();
        let f = family_poly(g, alpha, &lower);
        if f.is_squarefree(ctx)? {
            return Ok(FamilyCurve { genus: g, f });
        }
    }
}

/// Moves the root `rho` of `f` to infinity via `x ↦ ρ + 1/x` and brings the
/// result back into the family, or returns `None` when the
/// `x^{2g-1}`/`x^{2g-2}` coefficients cannot be matched.
fn renormalize_at_root(ctx: &FieldCtx, f: &Poly, g: usize, rho: FieldElement) -> Option<Poly> {
    let n = 2 * g + 1;
    // h(y) = f(y + ρ) has h(0) = 0, and x^{2g+2} h(1/x) = Σ h_k x^{2g+2-k}.
    let h = f.shift(ctx, ctx.neg(rho));
    debug_assert!(h.coeff(0).is_zero());
    let moved = Poly::new((0..=n).map(|i| h.coeff(n + 1 - i)).collect());
    let monic = moved.make_monic(ctx);
    let two_g_plus_one = ctx.from_int(n as i64);
    let alpha = ctx
        .div(monic.coeff(2 * g), two_g_plus_one)
        .expect("p does not divide 2g+1");
    let shifted = monic.shift(ctx, alpha);
    let a = shifted.coeff(2 * g - 1);
    let b = shifted.coeff(2 * g - 2);
    if a.is_zero() || b.is_zero() {
        return None;
    }
    let u = ctx.div(a, b).expect("b is nonzero");
    Some(shifted.scale_var(ctx, u).expect("u is nonzero"))
}

/// All family members reachable from `f` by moving a rational root to
/// infinity, starting with `f` itself.
pub fn isomorphic_members(ctx: &FieldCtx, c: &FamilyCurve) -> Vec<Poly> {
    let g = c.genus;
    let mut out = vec![c.f.clone()];
    for rho in c.f.roots(ctx).expect("f is nonzero") {
        out.extend(renormalize_at_root(ctx, &c.f, g, rho));
    }
    out
}

/// The minimum of [`isomorphic_members`].
pub fn canonical_key(ctx: &FieldCtx, c: &FamilyCurve) -> CanonicalKey {
    let g = c.genus;
    let mut best = c.f.clone();
    for rho in c.f.roots(ctx).expect("f is nonzero") {
        if let Some(cand) = renormalize_at_root(ctx, &c.f, g, rho) {
            if cand < best {
                best = cand;
            }
        }
    }
    CanonicalKey(best)
}

/// Iterates the whole coefficient box of `F_{g,q}` in encoding order
/// (α outermost, then the lower coefficients with the constant term varying
/// fastest), yielding the smooth members.
pub fn family_members(ctx: &FieldCtx, g: usize) -> Result<impl Iterator<Item = FamilyCurve> + '_> {
    check_available(ctx, g)?;
    let q = ctx.q() as u64;
    let free = 2 * g - 2;
    let box_size = q.checked_pow(free as u32).ok_or_else(|| {
        Error::InvalidInput(format!(
            "family box for genus {g} over GF({q}) is too large"
        ))
    })?;
    Ok((1..q).flat_map(move |alpha| {
        let alpha = FieldElement::from_encoding_unchecked(alpha as u32);
        (0..box_size).filter_map(move |idx| {
            let mut rest = idx;
            let lower: Vec<FieldElement> = (0..free)
                .map(|_| {
                    let d = (rest % q) as u32;
                    rest /= q;
                    FieldElement::from_encoding_unchecked(d)
                })
                .collect();
            let f = family_poly(g, alpha, &lower);
            f.is_squarefree(ctx)
                .expect("degree 2g+1 >= 5")
                .then_some(FamilyCurve { genus: g, f })
        })
    }))
}

/// Result of enumerating a whole family.
#[derive(Clone, Debug)]
pub struct FamilyEnumeration {
    /// Smooth members of the coefficient box.
    pub smooth_members: usize,
    /// One curve per distinct key (the key polynomial itself), in order of
    /// first appearance.
    pub representatives: Vec<FamilyCurve>,
}

impl FamilyEnumeration {
    pub fn distinct(&self) -> usize {
        self.representatives.len()
    }
}

/// Enumerates `F_{g,q}` and deduplicates by [`canonical_key`].
pub fn enumerate_family(ctx: &FieldCtx, g: usize) -> Result<FamilyEnumeration> {
    let mut seen = HashSet::new();
    let mut representatives = Vec::new();
    let mut smooth_members = 0;
    for c in family_members(ctx, g)? {
        smooth_members += 1;
        let key = canonical_key(ctx, &c);
        if seen.insert(key.clone()) {
            representatives.push(FamilyCurve {
                genus: g,
                f: key.into_poly(),
            });
        }
    }
    Ok(FamilyEnumeration {
        smooth_members,
        representatives,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn poly(ctx: &FieldCtx, ints: &[i64]) -> Poly {
        Poly::new(ints.iter().map(|&c| ctx.from_int(c)).collect())
    }

    #[test]
    fn membership_examples() {
        let f5 = FieldCtx::new(5, 1).unwrap();
        assert!(is_in_family(&poly(&f5, &[1, 0, 0, 0, 2, 2, 0, 1]), 3));
        assert!(!is_in_family(&poly(&f5, &[0, 0, 0, 0, 3, 2, 0, 1]), 3));
        assert!(!is_in_family(&poly(&f5, &[0, 0, 0, 0, 2, 2, 1, 1]), 3));
        assert!(!is_in_family(&poly(&f5, &[0, 0, 0, 0, 0, 0, 0, 1]), 3));
    }

    #[test]
    fn sample_shape_and_determinism() {
        let f5 = FieldCtx::new(5, 1).unwrap();
        let draw = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            sample_family(&f5, 3, &mut rng).unwrap()
        };
        let c = draw(11);
        assert_eq!(c.f().degree(), Some(7));
        assert!(is_in_family(c.f(), 3));
        assert!(c.f().is_squarefree(&f5).unwrap());
        assert_eq!(c.alpha(), c.f().coeff(4));
        assert_eq!(draw(11), c);
    }

    #[test]
    fn unavailable_when_p_divides_2g_plus_1() {
        let f7 = FieldCtx::new(7, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(
            sample_family(&f7, 3, &mut rng),
            Err(Error::MethodUnavailable {
                p: 7,
                two_g_plus_one: 7
            })
        );
        assert!(enumerate_family(&f7, 3).is_err());
    }

    #[test]
    fn rootless_member_is_its_own_key() {
        let f7 = FieldCtx::new(7, 1).unwrap();
        let members = family_members(&f7, 2).unwrap();
        let mut found = 0;
        for c in members {
            if c.f().roots(&f7).unwrap().is_empty() {
                assert_eq!(canonical_key(&f7, &c).poly(), c.f());
                found += 1;
            }
        }
        assert!(found > 0);
    }

    #[test]
    fn renormalized_candidates_are_family_members() {
        let f7 = FieldCtx::new(7, 1).unwrap();
        for c in family_members(&f7, 2).unwrap().take(200) {
            let members = isomorphic_members(&f7, &c);
            assert!(members.len() <= 2 * 2 + 2);
            for m in members {
                assert!(is_in_family(&m, 2), "{m}");
                assert!(m.is_squarefree(&f7).unwrap());
            }
        }
    }

    #[test]
    fn small_family_box_count() {
        // α ∈ {1, 2}, two free coefficients: at most 18 candidates.
        let f3 = FieldCtx::new(3, 1).unwrap();
        let e = enumerate_family(&f3, 2).unwrap();
        assert!(e.smooth_members <= 18);
        assert!(e.distinct() <= e.smooth_members);
        let again = enumerate_family(&f3, 2).unwrap();
        assert_eq!(again.distinct(), e.distinct());
    }
}
