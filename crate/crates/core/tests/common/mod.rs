//! Property checks shared by the property tests and the acceptance run.
//!
//! Every check drives a proptest runner seeded deterministically, so a
//! failure reproduces exactly.

#![allow(dead_code)]

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use pstrata::campaign::{self, CampaignConfig, SampleSize};
use pstrata::family::{self, FamilyCurve};
use pstrata::form::{mobius_image, FormInput, Mat2};
use pstrata::oracle;
use pstrata::prank::{self, CurveModel, HwMatrix};
use pstrata::stats::{self, Method, StratumTally};
use pstrata::{FieldCtx, FieldElement, Poly};

/// Fields the generic checks range over.
const FIELDS: &[(u32, u32)] = &[
    (3, 1),
    (5, 1),
    (7, 1),
    (13, 1),
    (3, 2),
    (5, 2),
    (7, 2),
    (3, 3),
];

pub fn fields() -> &'static [FieldCtx] {
    static CELL: OnceLock<Vec<FieldCtx>> = OnceLock::new();
    CELL.get_or_init(|| {
        FIELDS
            .iter()
            .map(|&(p, r)| FieldCtx::new(p, r).unwrap())
            .collect()
    })
}

pub fn field(p: u32, r: u32) -> &'static FieldCtx {
    fields()
        .iter()
        .find(|c| c.p() == p && c.r() == r)
        .expect("field is in the fixture list")
}

fn runner(cases: u32) -> TestRunner {
    TestRunner::new_with_rng(
        Config {
            cases,
            failure_persistence: None,
            ..Config::default()
        },
        TestRng::deterministic_rng(RngAlgorithm::ChaCha),
    )
}

fn run<S: Strategy>(
    name: &str,
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    runner(cases)
        .run(&strategy, test)
        .map_err(|e| format!("{name}: {e}"))
}

fn elem(ctx: &FieldCtx, raw: u32) -> FieldElement {
    ctx.element(raw % ctx.q()).unwrap()
}

fn poly_from(ctx: &FieldCtx, raw: &[u32]) -> Poly {
    Poly::new(raw.iter().map(|&v| elem(ctx, v)).collect())
}

/// A field index and raw coefficient words.
fn field_and_words(n: usize) -> impl Strategy<Value = (usize, Vec<u32>)> {
    (0..FIELDS.len(), prop::collection::vec(any::<u32>(), n))
}

/// A smooth model `y² = f` over one of the fixture fields, with monic `f`
/// of degree 2g+1 and genus in `1..=max_genus`.
fn curve(max_genus: usize) -> impl Strategy<Value = (usize, CurveModel)> {
    (0..FIELDS.len(), 1..=max_genus)
        .prop_flat_map(|(i, g)| (Just(i), prop::collection::vec(any::<u32>(), 2 * g + 1)))
        .prop_filter_map("singular model", |(i, raw)| {
            let ctx = &fields()[i];
            let mut f = poly_from(ctx, &raw).coeffs().to_vec();
            f.resize(raw.len(), FieldElement::ZERO);
            f.push(FieldElement::ONE);
            CurveModel::new(ctx, Poly::new(f)).ok().map(|c| (i, c))
        })
}

pub fn field_axioms() -> Result<(), String> {
    run("field axioms", 256, field_and_words(3), |(i, w)| {
        let ctx = &fields()[i];
        let (a, b, c) = (elem(ctx, w[0]), elem(ctx, w[1]), elem(ctx, w[2]));
        prop_assert_eq!(ctx.add(ctx.add(a, b), c), ctx.add(a, ctx.add(b, c)));
        prop_assert_eq!(ctx.mul(ctx.mul(a, b), c), ctx.mul(a, ctx.mul(b, c)));
        prop_assert_eq!(ctx.add(a, b), ctx.add(b, a));
        prop_assert_eq!(ctx.mul(a, b), ctx.mul(b, a));
        prop_assert_eq!(
            ctx.mul(a, ctx.add(b, c)),
            ctx.add(ctx.mul(a, b), ctx.mul(a, c))
        );
        prop_assert_eq!(ctx.add(a, ctx.neg(a)), FieldElement::ZERO);
        prop_assert_eq!(ctx.mul(a, b), ctx.mul_reference(a, b));
        if !a.is_zero() {
            prop_assert_eq!(ctx.mul(a, ctx.inv(a).unwrap()), FieldElement::ONE);
            prop_assert_eq!(ctx.inv(a).unwrap(), ctx.inv_euclid(a).unwrap());
        }
        Ok(())
    })
}

pub fn frobenius_is_automorphism() -> Result<(), String> {
    run(
        "Frobenius automorphism",
        256,
        field_and_words(2),
        |(i, w)| {
            let ctx = &fields()[i];
            let (a, b) = (elem(ctx, w[0]), elem(ctx, w[1]));
            let fr = |x| ctx.frobenius(x, 1);
            prop_assert_eq!(fr(ctx.add(a, b)), ctx.add(fr(a), fr(b)));
            prop_assert_eq!(fr(ctx.mul(a, b)), ctx.mul(fr(a), fr(b)));
            prop_assert_eq!(fr(a), ctx.pow(a, ctx.p() as u64));
            prop_assert_eq!(ctx.frobenius(a, ctx.r()), a);
            Ok(())
        },
    )
}

pub fn poly_power_laws() -> Result<(), String> {
    let s = (field_and_words(8), 0u64..6, 0u64..6);
    run("polynomial power laws", 96, s, |((i, w), m, n)| {
        let ctx = &fields()[i];
        let f = poly_from(ctx, &w[..4]);
        let g = poly_from(ctx, &w[4..]);
        prop_assert_eq!(f.pow(ctx, m + n), f.pow(ctx, m).mul(ctx, &f.pow(ctx, n)));
        let p = ctx.p() as u64;
        prop_assert_eq!(
            f.add(ctx, &g).pow(ctx, p),
            f.pow(ctx, p).add(ctx, &g.pow(ctx, p))
        );
        Ok(())
    })
}

pub fn roots_match_evaluation() -> Result<(), String> {
    run("roots by evaluation", 128, field_and_words(6), |(i, w)| {
        let ctx = &fields()[i];
        let f = poly_from(ctx, &w);
        prop_assume!(!f.is_zero());
        let roots = f.roots(ctx).unwrap();
        let expected: Vec<FieldElement> = ctx
            .elements()
            .filter(|&x| f.eval(ctx, x).is_zero())
            .collect();
        prop_assert_eq!(roots, expected);
        Ok(())
    })
}

pub fn squarefree_iff_distinct_roots() -> Result<(), String> {
    run(
        "squarefree split polynomials",
        128,
        field_and_words(5),
        |(i, w)| {
            let ctx = &fields()[i];
            let roots: Vec<FieldElement> = w.iter().map(|&v| elem(ctx, v)).collect();
            let f = Poly::from_roots(ctx, &roots);
            let mut distinct = roots.clone();
            distinct.sort();
            distinct.dedup();
            prop_assert_eq!(f.is_squarefree(ctx).unwrap(), distinct.len() == roots.len());
            Ok(())
        },
    )
}

pub fn mobius_action_composes() -> Result<(), String> {
    run("Möbius action", 128, field_and_words(14), |(i, w)| {
        let ctx = &fields()[i];
        let mat = |k: usize| {
            Mat2::new(
                elem(ctx, w[k]),
                elem(ctx, w[k + 1]),
                elem(ctx, w[k + 2]),
                elem(ctx, w[k + 3]),
            )
        };
        let (m, n) = (mat(0), mat(4));
        prop_assume!(!m.det(ctx).is_zero() && !n.det(ctx).is_zero());
        let f = poly_from(ctx, &w[8..]);
        prop_assume!(!f.is_zero());
        let once = mobius_image(ctx, FormInput::Poly(&f, 6), &m).unwrap();
        let twice = mobius_image(ctx, FormInput::Form(&once), &n).unwrap();
        let composed = mobius_image(ctx, FormInput::Poly(&f, 6), &n.mul(ctx, &m)).unwrap();
        prop_assert_eq!(twice, composed);
        let back = mobius_image(ctx, FormInput::Form(&once), &m.adjugate(ctx)).unwrap();
        let start = mobius_image(ctx, FormInput::Poly(&f, 6), &Mat2::identity()).unwrap();
        prop_assert_eq!(back, start);
        Ok(())
    })
}

pub fn hasse_witt_paths_agree() -> Result<(), String> {
    run("Hasse-Witt fast path", 96, curve(4), |(i, c)| {
        let ctx = &fields()[i];
        prop_assert_eq!(prank::hasse_witt_fast(ctx, &c), prank::hasse_witt(ctx, &c));
        Ok(())
    })
}

pub fn semilinear_power_over_prime_field() -> Result<(), String> {
    run("semilinear power over GF(p)", 96, curve(4), |(i, c)| {
        let ctx = &fields()[i];
        prop_assume!(ctx.r() == 1);
        let g = c.genus();
        let a = prank::hasse_witt(ctx, &c);
        let mut power = HwMatrix::identity(g);
        for _ in 0..g {
            power = power.mul(ctx, &a).unwrap();
        }
        prop_assert_eq!(prank::semilinear_power(ctx, &a, g).unwrap(), power);
        Ok(())
    })
}

pub fn base_change_preserves_p_rank() -> Result<(), String> {
    run("p-rank under base change", 64, curve(3), |(i, c)| {
        let small = &fields()[i];
        prop_assume!(small.r() == 1 && small.p() <= 7);
        let big = field(small.p(), 2);
        // GF(p) sits inside GF(p²) with the same encodings.
        let lifted = Poly::new(
            c.f()
                .encodings()
                .iter()
                .map(|&e| big.element(e).unwrap())
                .collect(),
        );
        let lifted = CurveModel::new(big, lifted).unwrap();
        prop_assert_eq!(prank::p_rank(small, &c), prank::p_rank(big, &lifted));
        Ok(())
    })
}

pub fn twist_preserves_p_rank() -> Result<(), String> {
    run("p-rank of quadratic twists", 96, curve(4), |(i, c)| {
        let ctx = &fields()[i];
        let d = ctx.elements().find(|&x| !ctx.is_square(x)).unwrap();
        let twist = CurveModel::new(ctx, c.f().scale(ctx, d)).unwrap();
        prop_assert_eq!(prank::p_rank(ctx, &c), prank::p_rank(ctx, &twist));
        Ok(())
    })
}

pub fn p_rank_matches_oracle() -> Result<(), String> {
    run("p-rank against zeta function", 48, curve(2), |(i, c)| {
        let ctx = &fields()[i];
        prop_assume!((ctx.q() as u64).pow(c.genus() as u32) <= oracle::POINT_COUNT_LIMIT);
        prop_assert_eq!(
            prank::p_rank(ctx, &c).value,
            oracle::oracle_p_rank(ctx, &c).unwrap()
        );
        Ok(())
    })
}

pub fn zeta_data_is_consistent() -> Result<(), String> {
    run(
        "Weil bound and functional equation",
        48,
        curve(2),
        |(i, c)| {
            let ctx = &fields()[i];
            let g = c.genus();
            let q = ctx.q() as i128;
            prop_assume!((ctx.q() as u64).pow(g as u32) <= oracle::POINT_COUNT_LIMIT);
            let z = oracle::zeta_data(ctx, &c).unwrap();
            let n1 = z.counts[0] as f64;
            let bound = 2.0 * g as f64 * (q as f64).sqrt();
            prop_assert!((n1 - (q as f64 + 1.0)).abs() <= bound + 1e-9);
            prop_assert_eq!(z.l_coeffs.len(), 2 * g + 1);
            prop_assert_eq!(z.l_coeffs[0], 1);
            for k in 0..=g {
                prop_assert_eq!(z.l_coeffs[2 * g - k], q.pow((g - k) as u32) * z.l_coeffs[k]);
            }
            Ok(())
        },
    )
}

/// A smooth member of the genus-2 family over GF(7).
fn family_curve() -> impl Strategy<Value = FamilyCurve> {
    (1u32..7, 0u32..7, 0u32..7).prop_filter_map("singular member", |(a, c0, c1)| {
        let ctx = field(7, 1);
        let e = |v| ctx.element(v).unwrap();
        FamilyCurve::new(ctx, 2, family::family_poly(2, e(a), &[e(c0), e(c1)])).ok()
    })
}

pub fn canonical_key_is_idempotent() -> Result<(), String> {
    run("canonical key idempotence", 64, family_curve(), |c| {
        let ctx = field(7, 1);
        let key = family::canonical_key(ctx, &c);
        let again = FamilyCurve::new(ctx, 2, key.poly().clone()).unwrap();
        prop_assert_eq!(family::canonical_key(ctx, &again), key);
        Ok(())
    })
}

pub fn canonical_key_is_sound() -> Result<(), String> {
    run(
        "canonical key against brute force",
        48,
        (family_curve(), family_curve()),
        |(a, b)| {
            let ctx = field(7, 1);
            let same_key = family::canonical_key(ctx, &a) == family::canonical_key(ctx, &b);
            let same_class = oracle::twist_class_key(ctx, a.f(), 2).unwrap()
                == oracle::twist_class_key(ctx, b.f(), 2).unwrap();
            prop_assert_eq!(same_key, same_class);
            if !same_key {
                prop_assert!(!oracle::brute_force_isomorphic(ctx, a.f(), b.f(), 2).unwrap());
            }
            Ok(())
        },
    )
}

fn tally_strategy() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0usize..=3, 0..40)
}

pub fn tally_merge_laws() -> Result<(), String> {
    let s = (tally_strategy(), tally_strategy(), tally_strategy());
    run("tally merge", 128, s, |(x, y, z)| {
        let t = |v: &[usize]| stats::tally(v, 3, 11, 1, Method::Family).unwrap();
        let (a, b, c) = (t(&x), t(&y), t(&z));
        prop_assert_eq!(
            a.merge(&b).unwrap().merge(&c).unwrap(),
            a.merge(&b.merge(&c).unwrap()).unwrap()
        );
        prop_assert_eq!(a.merge(&b).unwrap(), b.merge(&a).unwrap());
        let mut joined = x.clone();
        joined.extend(&y);
        prop_assert_eq!(t(&joined), a.merge(&b).unwrap());
        joined.reverse();
        prop_assert_eq!(t(&joined), a.merge(&b).unwrap());
        Ok(())
    })
}

pub fn m_values_are_monotone() -> Result<(), String> {
    let s = (
        prop::collection::vec(0u64..1000, 4),
        prop::sample::select(vec![3u32, 5, 7, 11]),
        1u32..3,
    );
    run("M-value monotonicity", 128, s, |(counts, p, r)| {
        let mut t = StratumTally::empty(3, p, r, Method::Family);
        t.counts = counts;
        prop_assume!(t.sample_size() > 0);
        let normalized: Vec<BigRational> = (0..=3)
            .map(|f| {
                let row = stats::m_value(&t, f).unwrap();
                row.m
                    / BigRational::from_integer(num_traits::pow(
                        BigInt::from(p),
                        (r as usize) * (3 - f),
                    ))
            })
            .collect();
        prop_assert!(normalized.windows(2).all(|w| w[0] <= w[1]));
        prop_assert_eq!(
            stats::m_value(&t, 3).unwrap().m,
            BigRational::from_integer(1.into())
        );
        let row = stats::m_value(&t, 1).unwrap();
        prop_assert_eq!(row.m_decimal(9), stats::to_decimal(&row.m, 9));
        Ok(())
    })
}

pub fn summary_is_permutation_invariant() -> Result<(), String> {
    let s = prop::collection::vec((1i64..10_000, 1i64..1000), 1..20)
        .prop_flat_map(|v| (Just(v.clone()), Just(v).prop_shuffle()));
    run("summary permutation invariance", 128, s, |(a, b)| {
        let q = |v: &[(i64, i64)]| -> Vec<BigRational> {
            v.iter()
                .map(|&(n, d)| BigRational::new(n.into(), d.into()))
                .collect()
        };
        prop_assert_eq!(
            stats::summarize_values(&q(&a)).unwrap(),
            stats::summarize_values(&q(&b)).unwrap()
        );
        Ok(())
    })
}

pub fn campaign_is_deterministic() -> Result<(), String> {
    let s = (any::<u64>(), 1usize..3);
    run("campaign determinism", 4, s, |(seed, workers)| {
        let mut cfg = CampaignConfig::new(3, 5, 13);
        cfg.samples = SampleSize::Count(500);
        cfg.batch_size = 128;
        cfg.master_seed = seed;
        cfg.workers = workers;
        let a = campaign::compute_campaign(&cfg).unwrap();
        cfg.workers = 3 - workers;
        let b = campaign::compute_campaign(&cfg).unwrap();
        prop_assert_eq!(
            campaign::tallies_csv(&a).unwrap(),
            campaign::tallies_csv(&b).unwrap()
        );
        prop_assert_eq!(campaign::summary_csv(&a), campaign::summary_csv(&b));
        prop_assert_eq!(a.primes, b.primes);
        Ok(())
    })
}

pub fn family_samples_are_uniform() -> Result<(), String> {
    // Chi-square on the α coefficient over GF(11): 10 cells, and the
    // smoothness filter barely disturbs uniformity.
    let ctx = FieldCtx::new(11, 1).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let n = 20_000;
    let mut cells = [0u64; 10];
    for _ in 0..n {
        let c = family::sample_family(&ctx, 3, &mut rng).unwrap();
        cells[c.alpha().encode() as usize - 1] += 1;
    }
    let expected = n as f64 / 10.0;
    let chi2: f64 = cells
        .iter()
        .map(|&o| (o as f64 - expected).powi(2) / expected)
        .sum();
    // 99.9% quantile of chi-square with 9 degrees of freedom.
    if chi2 < 27.88 {
        Ok(())
    } else {
        Err(format!(
            "family sampling: chi-square {chi2:.2} over {cells:?}"
        ))
    }
}

pub type Check = fn() -> Result<(), String>;

/// Every check above, by name.
pub fn all_properties() -> Vec<(&'static str, Check)> {
    vec![
        ("field axioms", field_axioms),
        ("Frobenius automorphism", frobenius_is_automorphism),
        ("polynomial power laws", poly_power_laws),
        ("roots by evaluation", roots_match_evaluation),
        (
            "squarefree split polynomials",
            squarefree_iff_distinct_roots,
        ),
        ("Möbius action", mobius_action_composes),
        ("Hasse-Witt fast path", hasse_witt_paths_agree),
        (
            "semilinear power over GF(p)",
            semilinear_power_over_prime_field,
        ),
        ("p-rank under base change", base_change_preserves_p_rank),
        ("p-rank of quadratic twists", twist_preserves_p_rank),
        ("p-rank against zeta function", p_rank_matches_oracle),
        (
            "Weil bound and functional equation",
            zeta_data_is_consistent,
        ),
        ("canonical key idempotence", canonical_key_is_idempotent),
        ("canonical key against brute force", canonical_key_is_sound),
        ("tally merge", tally_merge_laws),
        ("M-value monotonicity", m_values_are_monotone),
        (
            "summary permutation invariance",
            summary_is_permutation_invariant,
        ),
        ("campaign determinism", campaign_is_deterministic),
        ("family sampling uniformity", family_samples_are_uniform),
    ]
}
