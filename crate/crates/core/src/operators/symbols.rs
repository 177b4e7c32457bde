use serde::{Deserialize, Serialize};

use super::matrix::generator_matrix;
use super::{Operator, ETA};
use crate::grassmann::{coherent_coeffs, AngleParam, IrrepLabel, ScaledPoint};
use crate::{Error, Result, C64};

pub const DEFAULT_PHASE_TOL: f64 = 1e-6;

/// Coherent-state symbols `⟨Z|A|Z⟩` of the generators and of the quadratic
/// combinations used for Casimir and fluctuation identities.
///
/// Quadratic contractions: `tmtm = Σ η_μμ ⟨T₋μ T₋μ⟩`, `tptp = Σ η_μμ ⟨T₊μ T₊μ⟩`,
/// `tmtp = Σ ⟨T₋μ T₊μ⟩`, `tptm = Σ ⟨T₊μ T₋μ⟩`, `msq = ⟨M_μν M^μν⟩`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymbolRecord {
    pub lambda: u32,
    pub t30: C64,
    pub m: [[C64; 4]; 4],
    pub t_plus: [C64; 4],
    pub t_minus: [C64; 4],
    pub t30_sq: C64,
    pub tmtm: C64,
    pub tptp: C64,
    pub tmtp: C64,
    pub tptm: C64,
    pub msq: C64,
    /// `⟨C₂⟩` assembled from the quadratic symbols above.
    pub c2: C64,
    pub spin: [f64; 3],
    pub pspin: [f64; 3],
    /// `r[k−1][i−1] = ⟨R_ki⟩`.
    pub r: [[f64; 3]; 3],
    pub s_sq: f64,
    pub p_sq: f64,
    pub r_sq: f64,
    /// `Σ (⟨X²⟩ − ⟨X⟩²)` over the fifteen generators `S, P, R`.
    pub variance_sum: f64,
}

impl SymbolRecord {
    fn from_parts(lambda: u32, lin: Linear, quad: Quadratic) -> Self {
        let Linear { t30, m, tp, tm } = lin;
        let i = C64::i();
        let spin = [(i * m[2][3]).re, (i * m[3][1]).re, (i * m[1][2]).re];
        let pspin = [
            ((tp[0] + tm[0]) * 0.5).re,
            ((tp[0] - tm[0]) / (2.0 * i)).re,
            (t30 * 0.5).re,
        ];
        let mut r = [[0.0; 3]; 3];
        for k in 1..=3 {
            r[k - 1] = [
                ((tp[k] + tm[k]) * 0.5).re,
                ((tp[k] - tm[k]) / (2.0 * i)).re,
                (-m[0][k]).re,
            ];
        }
        let sq = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>();
        let s_sq = sq(&spin);
        let p_sq = sq(&pspin);
        let r_sq = r.iter().map(|row| sq(row)).sum();
        // 4 C₂ = ⟨T₃₀²⟩ + 2 Σ⟨T₊μT₋μ + T₋μT₊μ⟩ − 2⟨M²⟩
        let c2 = (quad.t30_sq + (quad.tptm + quad.tmtp) * 2.0 - quad.msq * 2.0) * 0.25;
        SymbolRecord {
            lambda,
            t30,
            m,
            t_plus: tp,
            t_minus: tm,
            t30_sq: quad.t30_sq,
            tmtm: quad.tmtm,
            tptp: quad.tptp,
            tmtp: quad.tmtp,
            tptm: quad.tptm,
            msq: quad.msq,
            c2,
            spin,
            pspin,
            r,
            s_sq,
            p_sq,
            r_sq,
            variance_sum: c2.re - (s_sq + p_sq + r_sq),
        }
    }

    /// Largest deviation between two records over every complex symbol.
    pub fn max_abs_diff(&self, other: &SymbolRecord) -> f64 {
        let a = self.flat();
        let b = other.flat();
        a.iter().zip(&b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
    }

    fn flat(&self) -> Vec<C64> {
        let mut v = vec![
            self.t30, self.t30_sq, self.tmtm, self.tptp, self.tmtp, self.tptm, self.msq,
        ];
        v.extend(self.m.iter().flatten());
        v.extend(self.t_plus);
        v.extend(self.t_minus);
        v
    }
}

struct Linear {
    t30: C64,
    m: [[C64; 4]; 4],
    tp: [C64; 4],
    tm: [C64; 4],
}

struct Quadratic {
    t30_sq: C64,
    tmtm: C64,
    tptp: C64,
    tmtp: C64,
    tptm: C64,
    msq: C64,
}

/// Symbols from their closed forms in the bounded chart
/// (`ẑ = Z/√D`, `δ = det Z/√D`, `ρ = 1/D`, `D = det(σ₀ + Z†Z)`).
pub fn symbol_closed_form(lambda: IrrepLabel, z: impl Into<ScaledPoint>) -> SymbolRecord {
    let p = z.into();
    let l = lambda.value() as f64;
    let up = crate::grassmann::four_vector_of(&p.zhat);
    let low: [C64; 4] = std::array::from_fn(|k| up[k] * ETA[k]);
    let (cc, delta) = (p.cc, p.delta);
    let rho = cc * cc;
    let dd = delta.norm_sqr();

    let t30 = C64::new(2.0 * l * (dd - rho), 0.0);
    let mut m = [[C64::default(); 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            m[a][b] = (low[a] * up[b].conj() - low[b] * up[a].conj()) * (2.0 * l);
        }
    }
    let tp = std::array::from_fn(|k| (low[k] * cc + delta * up[k].conj()) * (2.0 * l));
    let tm = std::array::from_fn(|k| (low[k].conj() * cc + delta.conj() * up[k]) * (2.0 * l));

    let t30_sq = t30 * t30 * ((l - 1.0) / l) + 4.0 * l * (rho + dd);
    let tmtp = (C64::new(l + l * ((l + 2.0) * rho + (l - 2.0) * dd), 0.0) - t30 * t30 * ((l - 1.0) / (4.0 * l))) * 2.0;
    let quad = Quadratic {
        t30_sq,
        tmtm: delta.conj() * (4.0 * l * (l + 1.0) * cc),
        tptp: delta * (4.0 * l * (l + 1.0) * cc),
        tmtp,
        tptm: tmtp + t30 * 4.0,
        msq: t30_sq * ((2.0 * l + 1.0) / 2.0) + t30 * t30 * ((1.0 - l * l) / l) - 2.0 * l * (l + 2.0),
    };
    SymbolRecord::from_parts(lambda.value(), Linear { t30, m, tp, tm }, quad)
}

/// `⟨Z|op|Z⟩` through the coherent-state vector and the generator matrix.
pub fn symbol_numeric(lambda: IrrepLabel, z: impl Into<ScaledPoint>, op: Operator) -> Result<C64> {
    let c = coherent_coeffs(lambda, z)?;
    Ok(generator_matrix(lambda, op)?.expectation(c.coeffs()))
}

/// The full [`SymbolRecord`] through generator matrices instead of closed forms.
pub fn symbols_numeric(lambda: IrrepLabel, z: impl Into<ScaledPoint>) -> Result<SymbolRecord> {
    let c = coherent_coeffs(lambda, z)?;
    let v = c.coeffs();
    let ev = |op| -> Result<C64> { Ok(generator_matrix(lambda, op)?.expectation(v)) };
    // ⟨A B⟩ = (A† v)† (B v)
    let pair = |a: Operator, b: Operator| -> Result<C64> {
        let ga = generator_matrix(lambda, a)?;
        let gb = generator_matrix(lambda, b)?;
        let vv = nalgebra::DVector::from_column_slice(v);
        let left = ga.matrix.adjoint() * &vv;
        let right = &gb.matrix * &vv;
        Ok(left.dotc(&right))
    };
    let t30 = ev(Operator::T(3, 0))?;
    let mut m = [[C64::default(); 4]; 4];
    for a in 0..4u8 {
        for b in 0..4u8 {
            m[a as usize][b as usize] = ev(Operator::M(a, b))?;
        }
    }
    let mut tp = [C64::default(); 4];
    let mut tm = [C64::default(); 4];
    let mut quad = Quadratic {
        t30_sq: pair(Operator::T(3, 0), Operator::T(3, 0))?,
        tmtm: C64::default(),
        tptp: C64::default(),
        tmtp: C64::default(),
        tptm: C64::default(),
        msq: ev(Operator::MSquared)?,
    };
    for k in 0..4u8 {
        let e = ETA[k as usize];
        tp[k as usize] = ev(Operator::TPlus(k))?;
        tm[k as usize] = ev(Operator::TMinus(k))?;
        quad.tmtm += pair(Operator::TMinus(k), Operator::TMinus(k))? * e;
        quad.tptp += pair(Operator::TPlus(k), Operator::TPlus(k))? * e;
        quad.tmtp += pair(Operator::TMinus(k), Operator::TPlus(k))?;
        quad.tptm += pair(Operator::TPlus(k), Operator::TMinus(k))?;
    }
    Ok(SymbolRecord::from_parts(lambda.value(), Linear { t30, m, tp, tm }, quad))
}

/// Bilayer order parameters at a point given by angles.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrderParameters {
    pub s_sq: f64,
    pub p_sq: f64,
    pub r_sq: f64,
    /// `(cos ϑ₋ − cos ϑ₊)²/4`.
    pub f: f64,
    /// `(1 − cos θ_a cos θ_b − cos(φ_a − φ_b) sin θ_a sin θ_b)/2`.
    pub g: f64,
}

pub fn order_parameters(lambda: IrrepLabel, p: &AngleParam) -> OrderParameters {
    let l = lambda.value() as f64;
    let f = (p.vartheta_minus.cos() - p.vartheta_plus.cos()).powi(2) / 4.0;
    let g = (1.0
        - p.theta_a.cos() * p.theta_b.cos()
        - (p.phi_a - p.phi_b).cos() * p.theta_a.sin() * p.theta_b.sin())
        / 2.0;
    let s_sq = l * l * f * g;
    let p_sq = symbol_closed_form(lambda, p).p_sq;
    OrderParameters {
        s_sq,
        p_sq,
        r_sq: l * l - s_sq - p_sq,
        f,
        g,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PhaseLabel {
    Spin,
    Pspin,
    Canted,
    /// Neither order parameter saturates and one of them vanishes within tolerance.
    Boundary,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseReport {
    pub label: PhaseLabel,
    pub s_sq: f64,
    pub p_sq: f64,
    pub tol: f64,
}

/// Classifies a point as spin (`⟨S⃗⟩² = λ²`), pseudospin (`⟨P⃗⟩² = λ²`) or
/// canted (both nonzero), each relative to `tol·λ²`.
pub fn classify_phase(lambda: IrrepLabel, z: impl Into<ScaledPoint>, tol: f64) -> Result<PhaseReport> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let rec = symbol_closed_form(lambda, z);
    let l2 = (lambda.value() as f64).powi(2);
    let label = if (rec.s_sq - l2).abs() <= tol * l2 {
        PhaseLabel::Spin
    } else if (rec.p_sq - l2).abs() <= tol * l2 {
        PhaseLabel::Pspin
    } else if rec.s_sq > tol * l2 && rec.p_sq > tol * l2 {
        PhaseLabel::Canted
    } else {
        PhaseLabel::Boundary
    };
    Ok(PhaseReport {
        label,
        s_sq: rec.s_sq,
        p_sq: rec.p_sq,
        tol,
    })
}
