use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::point::ScaledPoint;
use super::wigner::d_terms;
use super::{BasisIndex, IrrepLabel, MAX_EVAL_LAMBDA};
use crate::cache::Cache;
use crate::combinatorics::{binomial, gcd};
use crate::poly::{Exponents, PolyC4};
use crate::{Error, Mat2, Result, C64};

/// A non-negative rational number in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rational {
    pub num: u128,
    pub den: u128,
}

impl Rational {
    pub fn new(num: u128, den: u128) -> Self {
        assert!(den != 0, "zero denominator");
        let g = gcd(num, den).max(1);
        Rational {
            num: num / g,
            den: den / g,
        }
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl std::fmt::Display for Rational {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// All basis labels of `ℋ_λ` in canonical order: `m` ascending, then `2j`
/// ascending, then `q_a` descending, then `q_b` descending.
pub fn basis_enumerate(lambda: IrrepLabel) -> Vec<BasisIndex> {
    let l = lambda.value();
    let mut out = Vec::with_capacity(lambda.dim());
    for m in 0..=l {
        for two_j in 0..=(l - m) {
            let tj = two_j as i32;
            for two_qa in (-tj..=tj).rev().step_by(2) {
                for two_qb in (-tj..=tj).rev().step_by(2) {
                    out.push(BasisIndex::new(two_j, m, two_qa, two_qb));
                }
            }
        }
    }
    out
}

/// `(2j+1)/(λ+1) · C(λ+1, 2j+m+1) · C(λ+1, m)`, the squared normalization of
/// `φ^{j,m}_{qa,qb}`.
fn prefactor_sq(lambda: u32, idx: &BasisIndex) -> Rational {
    let l1 = lambda as i64 + 1;
    let num = (idx.two_j as u128 + 1)
        * binomial(l1, idx.two_j as i64 + idx.m as i64 + 1)
        * binomial(l1, idx.m as i64);
    Rational::new(num, l1 as u128)
}

/// The basis polynomial
/// `φ^{j,m}_{qa,qb}(Z) = sqrt[(2j+1)/(λ+1) C(λ+1, 2j+m+1) C(λ+1, m)] det(Z)^m D^j_{qa,qb}(Z)`.
pub fn basis_polynomial(lambda: IrrepLabel, idx: BasisIndex) -> Result<PolyC4> {
    idx.validate(lambda)?;
    let pref = prefactor_sq(lambda.value(), &idx).to_f64().sqrt();
    let d = super::wigner_d_poly(idx.two_j, idx.two_qa, idx.two_qb)?;
    Ok((PolyC4::det().pow(idx.m) * d).scale(C64::new(pref, 0.0)))
}

/// `φ_idx(Z)` at a single point.
pub fn basis_value(lambda: IrrepLabel, idx: BasisIndex, z: &Mat2) -> Result<C64> {
    idx.validate(lambda)?;
    let pref = prefactor_sq(lambda.value(), &idx).to_f64().sqrt();
    let det = z[(0, 0)] * z[(1, 1)] - z[(0, 1)] * z[(1, 0)];
    Ok(det.powu(idx.m) * super::wigner_d(idx.two_j, idx.two_qa, idx.two_qb, z)? * pref)
}

#[derive(Debug)]
struct Layout {
    m: u32,
    two_j: u32,
    start: usize,
    end: usize,
}

/// Precomputed monomial tables for every basis polynomial of one `ℋ_λ`.
///
/// Obtained through [`BasisTable::get`], which memoizes per `λ`.
#[derive(Debug)]
pub struct BasisTable {
    lambda: IrrepLabel,
    indices: Vec<BasisIndex>,
    position: HashMap<BasisIndex, usize>,
    prefactor_sq: Vec<Rational>,
    layout: Vec<Layout>,
    // D-matrix monomials with the normalization folded into the coefficient.
    terms: Vec<(Exponents, f64)>,
}

static TABLES: Cache<u32, BasisTable> = Cache::new();

impl BasisTable {
    pub fn get(lambda: IrrepLabel) -> Result<Arc<BasisTable>> {
        if lambda.value() > MAX_EVAL_LAMBDA {
            return Err(Error::CapExceeded {
                lambda: lambda.value(),
                cap: MAX_EVAL_LAMBDA,
                what: "basis evaluation",
            });
        }
        TABLES.get_or_try_insert(&lambda.value(), || BasisTable::build(lambda))
    }

    fn build(lambda: IrrepLabel) -> Result<BasisTable> {
        let indices = basis_enumerate(lambda);
        let mut terms = Vec::new();
        let mut layout = Vec::with_capacity(indices.len());
        let mut pref_sq = Vec::with_capacity(indices.len());
        for idx in &indices {
            let p = prefactor_sq(lambda.value(), idx);
            let pref = p.to_f64().sqrt();
            let start = terms.len();
            for (e, c) in d_terms(idx.two_j, idx.two_qa, idx.two_qb)? {
                terms.push((e, c * pref));
            }
            layout.push(Layout {
                m: idx.m,
                two_j: idx.two_j,
                start,
                end: terms.len(),
            });
            pref_sq.push(p);
        }
        let position = indices.iter().enumerate().map(|(i, x)| (*x, i)).collect();
        Ok(BasisTable {
            lambda,
            indices,
            position,
            prefactor_sq: pref_sq,
            layout,
            terms,
        })
    }

    pub fn lambda(&self) -> IrrepLabel {
        self.lambda
    }

    pub fn dim(&self) -> usize {
        self.indices.len()
    }

    pub fn indices(&self) -> &[BasisIndex] {
        &self.indices
    }

    pub fn position(&self, idx: &BasisIndex) -> Option<usize> {
        self.position.get(idx).copied()
    }

    /// Squared normalization constant of basis polynomial `i`, exactly.
    pub fn prefactor_sq(&self, i: usize) -> Rational {
        self.prefactor_sq[i]
    }

    pub fn prefactor(&self, i: usize) -> f64 {
        self.prefactor_sq[i].to_f64().sqrt()
    }

    pub fn polynomial(&self, i: usize) -> PolyC4 {
        let lay = &self.layout[i];
        let d = PolyC4::from_terms(
            self.terms[lay.start..lay.end]
                .iter()
                .map(|(e, c)| (*e, C64::new(*c, 0.0))),
        );
        PolyC4::det().pow(lay.m) * d
    }

    /// `φ_i(Z)` for every basis index.
    pub fn eval_raw(&self, z: &Mat2) -> Vec<C64> {
        let x = [z[(0, 0)], z[(0, 1)], z[(1, 0)], z[(1, 1)]];
        let det = x[0] * x[3] - x[1] * x[2];
        let l = self.lambda.value() as usize;
        let pw = powers(&x, l);
        let dpow = power_table(det, l);
        self.layout
            .iter()
            .map(|lay| self.d_value(lay, &pw) * dpow[lay.m as usize])
            .collect()
    }

    /// `φ_i(Z) · det(σ₀+Z†Z)^{-λ/2}` for every basis index, evaluated in the
    /// bounded chart so that it is finite everywhere on `G₂`.
    pub fn eval_scaled(&self, p: &ScaledPoint) -> Vec<C64> {
        let mut out = vec![C64::default(); self.dim()];
        self.eval_scaled_into(p, &mut out);
        out
    }

    pub fn eval_scaled_into(&self, p: &ScaledPoint, out: &mut [C64]) {
        let ev = ScaledEval::new(self.lambda.value() as usize, p);
        for (o, lay) in out.iter_mut().zip(&self.layout) {
            *o = ev.value(self, lay);
        }
    }

    /// `Σ_i ψ_i φ_i(Z) det(σ₀+Z†Z)^{-λ/2} = ⟨Z|ψ⟩`.
    pub fn eval_scaled_dot(&self, p: &ScaledPoint, psi: &[C64]) -> C64 {
        let ev = ScaledEval::new(self.lambda.value() as usize, p);
        self.layout
            .iter()
            .zip(psi)
            .map(|(lay, c)| ev.value(self, lay) * c)
            .sum()
    }

    fn d_value(&self, lay: &Layout, pw: &[Vec<C64>; 4]) -> C64 {
        self.terms[lay.start..lay.end]
            .iter()
            .map(|(e, c)| {
                pw[0][e[0] as usize] * pw[1][e[1] as usize] * pw[2][e[2] as usize] * pw[3][e[3] as usize] * *c
            })
            .sum()
    }
}

struct ScaledEval {
    pw: [Vec<C64>; 4],
    dpow: Vec<C64>,
    ccpow: Vec<f64>,
    l: usize,
}

impl ScaledEval {
    fn new(l: usize, p: &ScaledPoint) -> Self {
        let z = &p.zhat;
        let x = [z[(0, 0)], z[(0, 1)], z[(1, 0)], z[(1, 1)]];
        let mut ccpow = Vec::with_capacity(l + 1);
        let mut acc = 1.0;
        for _ in 0..=l {
            ccpow.push(acc);
            acc *= p.cc;
        }
        ScaledEval {
            pw: powers(&x, l),
            dpow: power_table(p.delta, l),
            ccpow,
            l,
        }
    }

    // pref δ^m D^j(ẑ) cc^{λ−m−2j}
    fn value(&self, t: &BasisTable, lay: &Layout) -> C64 {
        let k = self.l - lay.m as usize - lay.two_j as usize;
        t.d_value(lay, &self.pw) * self.dpow[lay.m as usize] * self.ccpow[k]
    }
}

fn power_table(x: C64, n: usize) -> Vec<C64> {
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = C64::new(1.0, 0.0);
    for _ in 0..=n {
        out.push(acc);
        acc *= x;
    }
    out
}

fn powers(x: &[C64; 4], n: usize) -> [Vec<C64>; 4] {
    [
        power_table(x[0], n),
        power_table(x[1], n),
        power_table(x[2], n),
        power_table(x[3], n),
    ]
}
