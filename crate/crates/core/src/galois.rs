//! The Galois-type method: curves `y² = f(x)` whose 2g+2 branch points are
//! all rational, listed once per isomorphism class.
//!
//! A branch configuration is `{∞, 0, a_3, ..., a_{2g+2}}` with distinct
//! nonzero `a_i`. Its orbit set holds, for every ordered triple of branch
//! points, the normalized form of the configuration moved by the unique
//! transformation sending the triple to `(∞, 0, 1)`. Two configurations are
//! isomorphic exactly when their orbit sets coincide, so keeping a
//! configuration iff its own form is the orbit minimum picks one per class.
//! With all branch points rational, GF(q)-isomorphism and geometric
//! isomorphism agree.

use crate::error::{Error, Result};
use crate::ff::{FieldCtx, FieldElement};
use crate::form::{BinaryForm, Mat2, P1Point};
use crate::poly::Poly;

/// Branch points `∞, 0` plus 2g distinct nonzero finite points.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BranchConfig {
    genus: usize,
    /// Sorted by encoding.
    roots: Vec<FieldElement>,
}

impl BranchConfig {
    pub fn new(g: usize, mut roots: Vec<FieldElement>) -> Result<BranchConfig> {
        roots.sort();
        roots.dedup();
        if g < 1 || roots.len() != 2 * g || roots.iter().any(|r| r.is_zero()) {
            return Err(Error::InvalidInput(format!(
                "a genus-{g} configuration needs {} distinct nonzero roots",
                2 * g
            )));
        }
        Ok(BranchConfig { genus: g, roots })
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn roots(&self) -> &[FieldElement] {
        &self.roots
    }

    /// All 2g+2 branch points, starting with ∞ and 0.
    pub fn points(&self) -> Vec<P1Point> {
        let mut pts = vec![P1Point::Infinity, P1Point::Finite(FieldElement::ZERO)];
        pts.extend(self.roots.iter().map(|&r| P1Point::Finite(r)));
        pts
    }

    /// `z · x · ∏ (x - a_i z)`.
    pub fn form(&self, ctx: &FieldCtx) -> BinaryForm {
        BinaryForm::from_roots(ctx, &self.points())
    }

    /// The affine model `x · ∏ (x - a_i)` of degree 2g+1.
    pub fn poly(&self, ctx: &FieldCtx) -> Poly {
        let mut roots = vec![FieldElement::ZERO];
        roots.extend_from_slice(&self.roots);
        Poly::from_roots(ctx, &roots)
    }
}

/// The normalized images of a configuration, one per ordered triple of
/// branch points (so `(2g+2)(2g+1)(2g)` entries counted with multiplicity).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitSet {
    pub forms: Vec<BinaryForm>,
}

impl OrbitSet {
    pub fn min(&self) -> &BinaryForm {
        self.forms.iter().min().expect("orbit sets are nonempty")
    }
}

fn image_form(ctx: &FieldCtx, pts: &[P1Point], i: usize, j: usize, k: usize) -> BinaryForm {
    let m = Mat2::sending_to_inf_zero_one(ctx, pts[i], pts[j], pts[k])
        .expect("branch points are distinct");
    let images: Vec<P1Point> = pts.iter().map(|&pt| m.apply(ctx, pt)).collect();
    BinaryForm::from_roots(ctx, &images).normalized(ctx)
}

fn ordered_triples(n: usize) -> impl Iterator<Item = (usize, usize, usize)> {
    (0..n)
        .flat_map(move |i| (0..n).flat_map(move |j| (0..n).map(move |k| (i, j, k))))
        .filter(|&(i, j, k)| i != j && j != k && i != k)
}

pub fn orbit_set(ctx: &FieldCtx, b: &BranchConfig) -> OrbitSet {
    let pts = b.points();
    OrbitSet {
        forms: ordered_triples(pts.len())
            .map(|(i, j, k)| image_form(ctx, &pts, i, j, k))
            .collect(),
    }
}

/// The number of ordered triples whose image equals the image of
/// `(∞, 0, a_3)`: the order of the group of projective automorphisms of the
/// branch locus.
pub fn stabilizer_order(ctx: &FieldCtx, b: &BranchConfig) -> usize {
    let pts = b.points();
    let reference = image_form(ctx, &pts, 0, 1, 2);
    ordered_triples(pts.len())
        .filter(|&(i, j, k)| image_form(ctx, &pts, i, j, k) == reference)
        .count()
}

/// Whether the identity is the only projective automorphism.
pub fn has_trivial_automorphisms(ctx: &FieldCtx, b: &BranchConfig) -> bool {
    stabilizer_order(ctx, b) == 1
}

/// Outcome of the orbit-minimum test.
enum Verdict {
    NotMinimal,
    Minimal { stabilizer: usize },
}

/// Scans the orbit with early exit. When `stop_on_symmetry` is set the scan
/// also stops at the second self-image, since such configurations are
/// discarded anyway.
fn judge(ctx: &FieldCtx, b: &BranchConfig, stop_on_symmetry: bool) -> Verdict {
    let pts = b.points();
    let own = b.form(ctx).normalized(ctx);
    let mut stabilizer = 0;
    for (i, j, k) in ordered_triples(pts.len()) {
        let img = image_form(ctx, &pts, i, j, k);
        match img.cmp(&own) {
            std::cmp::Ordering::Less => return Verdict::NotMinimal,
            std::cmp::Ordering::Equal => {
                stabilizer += 1;
                if stop_on_symmetry && stabilizer > 1 {
                    return Verdict::Minimal { stabilizer };
                }
            }
            std::cmp::Ordering::Greater => {}
        }
    }
    Verdict::Minimal { stabilizer }
}

/// A configuration accepted by the enumeration together with the order of
/// its automorphism group (exact only when `keep_symmetric` was set).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitClass {
    pub config: BranchConfig,
    pub stabilizer: usize,
}

/// Colexicographic iteration over k-subsets of `lo..hi`.
struct Colex {
    cur: Vec<u32>,
    lo: u32,
    hi: u32,
    done: bool,
}

impl Colex {
    fn new(k: usize, lo: u32, hi: u32) -> Colex {
        let cur: Vec<u32> = (0..k as u32).map(|i| lo + i).collect();
        let done = cur.last().is_some_and(|&x| x >= hi);
        Colex { cur, lo, hi, done }
    }
}

impl Iterator for Colex {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        if self.done {
            return None;
        }
        let out = self.cur.clone();
        let k = self.cur.len();
        // Bump the lowest position that has room, reset everything below it.
        match (0..k).find(|&i| {
            let limit = if i + 1 < k { self.cur[i + 1] } else { self.hi };
            self.cur[i] + 1 < limit
        }) {
            Some(i) => {
                self.cur[i] += 1;
                for j in 0..i {
                    self.cur[j] = self.lo + j as u32;
                }
            }
            None => self.done = true,
        }
        Some(out)
    }
}

/// The accepted configurations in enumeration order, up to `limit` of them.
///
/// Every configuration containing the root 1 is tested; a configuration
/// without 1 can never equal its orbit minimum because every orbit member
/// has a root at 1.
pub fn enumerate_classes(
    ctx: &FieldCtx,
    g: usize,
    limit: usize,
    keep_symmetric: bool,
) -> Result<Vec<SplitClass>> {
    if g < 2 {
        return Err(Error::InvalidInput(format!(
            "Galois-type enumeration needs genus >= 2, got {g}"
        )));
    }
    if ctx.q() as usize <= 2 * g + 1 {
        return Err(Error::FieldTooSmall { q: ctx.q(), g });
    }
    let mut out = Vec::new();
    if limit == 0 {
        return Ok(out);
    }
    for rest in Colex::new(2 * g - 1, 2, ctx.q()) {
        let mut roots = vec![FieldElement::ONE];
        roots.extend(rest.into_iter().map(FieldElement::from_encoding_unchecked));
        let config = BranchConfig { genus: g, roots };
        if let Verdict::Minimal { stabilizer } = judge(ctx, &config, !keep_symmetric) {
            if keep_symmetric || stabilizer == 1 {
                out.push(SplitClass { config, stabilizer });
                if out.len() == limit {
                    break;
                }
            }
        }
    }
    Ok(out)
}

/// Up to `s` fully split models with trivial automorphism group, pairwise
/// non-isomorphic, with the smallest roots first.
pub fn enumerate_split(ctx: &FieldCtx, g: usize, s: usize) -> Result<Vec<Poly>> {
    Ok(enumerate_classes(ctx, g, s, false)?
        .into_iter()
        .map(|c| c.config.poly(ctx))
        .collect())
}
