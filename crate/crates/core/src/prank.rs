//! Hasse-Witt matrices and p-ranks of hyperelliptic curves `y² = f(x)`.
//!
//! For `f^((p-1)/2) = Σ c_m x^m` the Hasse-Witt matrix is
//! `A = (c_{jp-i})` for `1 <= i, j <= g`, and the p-rank is the rank of
//! `A · A^σ ⋯ A^(σ^(g-1))` where σ raises every entry to the p-th power.

use std::fmt;

use crate::error::{Error, Result};
use crate::ff::{FieldCtx, FieldElement};
use crate::poly::Poly;

/// A smooth hyperelliptic model `y² = f(x)` with `deg f ∈ {2g+1, 2g+2}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveModel {
    genus: usize,
    f: Poly,
}

impl CurveModel {
    /// Validates smoothness and derives the genus from the degree.
    pub fn new(ctx: &FieldCtx, f: Poly) -> Result<CurveModel> {
        let deg = match f.degree() {
            Some(d) if d >= 3 => d,
            _ => {
                return Err(Error::InvalidInput(format!(
                    "degree of {f} is too small for a curve of positive genus"
                )))
            }
        };
        if !f.is_squarefree(ctx)? {
            return Err(Error::SingularCurve);
        }
        Ok(CurveModel {
            genus: (deg - 1) / 2,
            f,
        })
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn f(&self) -> &Poly {
        &self.f
    }
}

/// A square matrix over GF(q), row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct HwMatrix {
    dim: usize,
    entries: Vec<FieldElement>,
}

impl HwMatrix {
    pub fn zeros(dim: usize) -> HwMatrix {
        HwMatrix {
            dim,
            entries: vec![FieldElement::ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> HwMatrix {
        let mut m = HwMatrix::zeros(dim);
        for i in 0..dim {
            m.set(i, i, FieldElement::ONE);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<FieldElement>>) -> Result<HwMatrix> {
        let dim = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != dim) {
            return Err(Error::ShapeError {
                expected: dim,
                got: bad.len(),
            });
        }
        Ok(HwMatrix {
            dim,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Zero-based entry.
    pub fn get(&self, i: usize, j: usize) -> FieldElement {
        self.entries[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: FieldElement) {
        self.entries[i * self.dim + j] = v;
    }

    pub fn mul(&self, ctx: &FieldCtx, other: &HwMatrix) -> Result<HwMatrix> {
        if self.dim != other.dim {
            return Err(Error::ShapeError {
                expected: self.dim,
                got: other.dim,
            });
        }
        let n = self.dim;
        let mut out = HwMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let v = (0..n).fold(FieldElement::ZERO, |acc, k| {
                    ctx.add(acc, ctx.mul(self.get(i, k), other.get(k, j)))
                });
                out.set(i, j, v);
            }
        }
        Ok(out)
    }

    /// Entrywise `a ↦ a^(p^k)`.
    pub fn frobenius_twist(&self, ctx: &FieldCtx, k: u32) -> HwMatrix {
        HwMatrix {
            dim: self.dim,
            entries: self.entries.iter().map(|&a| ctx.frobenius(a, k)).collect(),
        }
    }
}

impl fmt::Debug for HwMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<u32>> = (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.get(i, j).encode()).collect())
            .collect();
        write!(f, "HwMatrix{rows:?}")
    }
}

/// The p-rank of a curve of genus g.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PRank {
    pub value: usize,
    pub ordinary: bool,
}

/// The Hasse-Witt matrix read from the full expansion of `f^((p-1)/2)`.
pub fn hasse_witt(ctx: &FieldCtx, curve: &CurveModel) -> HwMatrix {
    let p = ctx.p() as usize;
    let power = curve.f.pow(ctx, (p as u64 - 1) / 2);
    hw_from_coeffs(curve.genus, p, |m| power.coeff(m))
}

fn hw_from_coeffs(g: usize, p: usize, coeff: impl Fn(usize) -> FieldElement) -> HwMatrix {
    let mut a = HwMatrix::zeros(g);
    for i in 1..=g {
        for j in 1..=g {
            // Indices below zero only occur when g ≥ p; those entries vanish.
            if j * p >= i {
                a.set(i - 1, j - 1, coeff(j * p - i));
            }
        }
    }
    a
}

/// The coefficients `c_0, ..., c_{gp-1}` of `f^((p-1)/2)`, computed by
/// repeated multiplication by `f` truncated below `x^{gp}`. Only these
/// coefficients enter the Hasse-Witt matrix.
pub fn power_window(ctx: &FieldCtx, f: &Poly, g: usize) -> Vec<FieldElement> {
    let p = ctx.p() as usize;
    let len = g * p;
    let e = (p - 1) / 2;
    if ctx.r() == 1 {
        let fc: Vec<u32> = f.coeffs().iter().map(|c| c.encode()).collect();
        return power_window_prime(&fc, e, len, ctx.p())
            .into_iter()
            .map(|v| ctx.from_int(v as i64))
            .collect();
    }
    let fc = f.coeffs();
    let mut h = vec![FieldElement::ZERO; len];
    h[0] = FieldElement::ONE;
    let mut top = 0;
    for _ in 0..e {
        let new_top = (top + fc.len() - 1).min(len - 1);
        for m in (0..=new_top).rev() {
            let lo = m.saturating_sub(top);
            let hi = m.min(fc.len() - 1);
            let mut acc = FieldElement::ZERO;
            for (k, &c) in fc.iter().enumerate().take(hi + 1).skip(lo) {
                acc = ctx.add(acc, ctx.mul(c, h[m - k]));
            }
            h[m] = acc;
        }
        top = new_top;
    }
    h
}

/// Prime-field fast path: coefficients as residues mod p with one reduction
/// per output coefficient.
fn power_window_prime(f: &[u32], e: usize, len: usize, p: u32) -> Vec<u32> {
    let p64 = p as u64;
    let mut h = vec![0u32; len];
    h[0] = 1;
    let mut top = 0;
    for _ in 0..e {
        let new_top = (top + f.len() - 1).min(len - 1);
        for m in (0..=new_top).rev() {
            let lo = m.saturating_sub(top);
            let hi = m.min(f.len() - 1);
            let mut acc = 0u64;
            for k in lo..=hi {
                acc += f[k] as u64 * h[m - k] as u64;
            }
            h[m] = (acc % p64) as u32;
        }
        top = new_top;
    }
    h
}

/// The Hasse-Witt matrix from the truncated power; agrees with
/// [`hasse_witt`] entry for entry.
pub fn hasse_witt_fast(ctx: &FieldCtx, curve: &CurveModel) -> HwMatrix {
    let window = power_window(ctx, &curve.f, curve.genus);
    hw_from_coeffs(curve.genus, ctx.p() as usize, |m| window[m])
}

/// `A · A^σ ⋯ A^(σ^(g-1))`.
pub fn semilinear_power(ctx: &FieldCtx, a: &HwMatrix, g: usize) -> Result<HwMatrix> {
    if a.dim() != g {
        return Err(Error::ShapeError {
            expected: g,
            got: a.dim(),
        });
    }
    let mut out = HwMatrix::identity(g);
    for k in 0..g {
        out = out.mul(ctx, &a.frobenius_twist(ctx, k as u32))?;
    }
    Ok(out)
}

/// Rank by Gaussian elimination.
pub fn rank(ctx: &FieldCtx, a: &HwMatrix) -> usize {
    let n = a.dim();
    let mut m: Vec<Vec<FieldElement>> = (0..n)
        .map(|i| (0..n).map(|j| a.get(i, j)).collect())
        .collect();
    let mut rank = 0;
    for col in 0..n {
        let Some(pivot) = (rank..n).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        let inv = ctx.inv(m[rank][col]).expect("pivot is nonzero");
        for v in &mut m[rank][col..] {
            *v = ctx.mul(*v, inv);
        }
        let pivot_row = m[rank].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == rank || row[col].is_zero() {
                continue;
            }
            let factor = row[col];
            for (x, &y) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                *x = ctx.sub(*x, ctx.mul(factor, y));
            }
        }
        rank += 1;
    }
    rank
}

/// The p-rank of `curve`.
pub fn p_rank(ctx: &FieldCtx, curve: &CurveModel) -> PRank {
    let g = curve.genus;
    let a = hasse_witt_fast(ctx, curve);
    let power = semilinear_power(ctx, &a, g).expect("Hasse-Witt matrix is g×g");
    let value = rank(ctx, &power);
    PRank {
        value,
        ordinary: value == g,
    }
}

/// [`p_rank`] on a bare polynomial, validating the model first.
pub fn p_rank_of(ctx: &FieldCtx, f: &Poly) -> Result<PRank> {
    Ok(p_rank(ctx, &CurveModel::new(ctx, f.clone())?))
}
