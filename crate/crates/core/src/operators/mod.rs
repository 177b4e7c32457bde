//! `U(4)` generators as differential operators on `ℋ_λ`, their exact matrices
//! in the canonical basis, coherent-state symbols, and the bilayer order
//! parameters built from them.
//!
//! Differential operators act in the four-vector coordinates `z^μ`
//! (`Z = z^μ σ_μ`) with metric `η = diag(1, −1, −1, −1)` and `z_μ = η_μμ z^μ`:
//!
//! * `M_μν = z_μ ∂_ν − z_ν ∂_μ`
//! * `T₃₀ = 2(z^μ ∂_μ − λ)`
//! * `T₋μ = η_μμ ∂_μ`
//! * `T₊μ = det(Z) ∂_μ − z_μ T₃₀`
//!
//! and the sixteen `T_μν` follow from `T₁μ = T₊μ + T₋μ`, `T₂μ = −i(T₊μ − T₋μ)`,
//! `T₀ₗ = 2i M_ik` for cyclic `(l, i, k)`, `T₃ᵢ = −2 M₀ᵢ` and `T₀₀ = 2λ`.

mod expand;
mod matrix;
mod symbols;

pub use expand::Expander;
pub use matrix::{generator_matrix, GeneratorMatrix, GENERATOR_CAP};
pub use symbols::{
    classify_phase, order_parameters, symbol_closed_form, symbol_numeric, symbols_numeric,
    OrderParameters, PhaseLabel, PhaseReport, SymbolRecord, DEFAULT_PHASE_TOL,
};

use serde::{Deserialize, Serialize};

use crate::grassmann::IrrepLabel;
use crate::poly::{Entry, PolyC4};
use crate::{Error, Result, C64};

/// Minkowski metric diagonal.
pub const ETA: [f64; 4] = [1.0, -1.0, -1.0, -1.0];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Layer {
    A,
    B,
}

/// A generator, or a quadratic Casimir-type combination of generators.
///
/// Space-time indices `μ, ν` run over `0..=3`; spatial indices `i, k` over
/// `1..=3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "index", rename_all = "snake_case")]
pub enum Operator {
    T(u8, u8),
    M(u8, u8),
    TPlus(u8),
    TMinus(u8),
    /// Total spin `S_i = T₀ᵢ/2`.
    S(u8),
    /// Pseudospin `P_i = Tᵢ₀/2`.
    P(u8),
    /// `R_ki = T_ik/2`.
    R(u8, u8),
    /// Spin of one layer: `S_{a,i} = (−T₀ᵢ − T₃ᵢ)/4`, `S_{b,i} = (T₀ᵢ − T₃ᵢ)/4`.
    LayerSpin(Layer, u8),
    C1,
    /// `S⃗² + P⃗² + R²`.
    C2,
    /// `M_μν M^μν`.
    MSquared,
}

/// Building blocks every linear generator is a combination of.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) enum Prim {
    Identity,
    T30,
    M(u8, u8),
    TPlus(u8),
    TMinus(u8),
}

impl Operator {
    pub fn validate(&self) -> Result<()> {
        let st = |x: u8| x <= 3;
        let sp = |x: u8| (1..=3).contains(&x);
        let ok = match *self {
            Operator::T(a, b) | Operator::M(a, b) => st(a) && st(b),
            Operator::TPlus(a) | Operator::TMinus(a) => st(a),
            Operator::S(i) | Operator::P(i) | Operator::LayerSpin(_, i) => sp(i),
            Operator::R(k, i) => sp(k) && sp(i),
            Operator::C1 | Operator::C2 | Operator::MSquared => true,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!("index out of range in {self:?}")))
        }
    }

    pub fn is_quadratic(&self) -> bool {
        matches!(self, Operator::C2 | Operator::MSquared)
    }

    /// Expansion of a linear operator in primitives; `None` for quadratic ones.
    pub(crate) fn linear_parts(&self, lambda: u32) -> Option<Vec<(C64, Prim)>> {
        let one = C64::new(1.0, 0.0);
        let i = C64::i();
        let half = |v: Vec<(C64, Prim)>| v.into_iter().map(|(c, p)| (c * 0.5, p)).collect::<Vec<_>>();
        Some(match *self {
            Operator::T(0, 0) | Operator::C1 => vec![(C64::new(2.0 * lambda as f64, 0.0), Prim::Identity)],
            Operator::T(0, l) => {
                let (a, b) = cyclic(l);
                vec![(2.0 * i, Prim::M(a, b))]
            }
            Operator::T(1, n) => vec![(one, Prim::TPlus(n)), (one, Prim::TMinus(n))],
            Operator::T(2, n) => vec![(-i, Prim::TPlus(n)), (i, Prim::TMinus(n))],
            Operator::T(3, 0) => vec![(one, Prim::T30)],
            Operator::T(3, k) => vec![(C64::new(-2.0, 0.0), Prim::M(0, k))],
            Operator::T(..) => unreachable!("validated"),
            Operator::M(a, b) => vec![(one, Prim::M(a, b))],
            Operator::TPlus(a) => vec![(one, Prim::TPlus(a))],
            Operator::TMinus(a) => vec![(one, Prim::TMinus(a))],
            Operator::S(k) => half(Operator::T(0, k).linear_parts(lambda)?),
            Operator::P(k) => half(Operator::T(k, 0).linear_parts(lambda)?),
            Operator::R(k, l) => half(Operator::T(l, k).linear_parts(lambda)?),
            Operator::LayerSpin(layer, k) => {
                let sign = if layer == Layer::A { -1.0 } else { 1.0 };
                let mut v: Vec<(C64, Prim)> = Operator::T(0, k)
                    .linear_parts(lambda)?
                    .into_iter()
                    .map(|(c, p)| (c * 0.25 * sign, p))
                    .collect();
                v.extend(
                    Operator::T(3, k)
                        .linear_parts(lambda)?
                        .into_iter()
                        .map(|(c, p)| (c * -0.25, p)),
                );
                v
            }
            Operator::C2 | Operator::MSquared => return None,
        })
    }

    /// Quadratic operators as `Σ coeff · A·B` over linear `A`, `B`.
    pub(crate) fn quadratic_parts(&self) -> Option<Vec<(f64, Operator, Operator)>> {
        match self {
            Operator::C2 => Some(
                (0..4u8)
                    .flat_map(|a| (0..4u8).map(move |b| (a, b)))
                    .filter(|&(a, b)| (a, b) != (0, 0))
                    .map(|(a, b)| (0.25, Operator::T(a, b), Operator::T(a, b)))
                    .collect(),
            ),
            Operator::MSquared => Some(
                (0..4u8)
                    .flat_map(|a| (0..4u8).map(move |b| (a, b)))
                    .filter(|&(a, b)| a != b)
                    .map(|(a, b)| (ETA[a as usize] * ETA[b as usize], Operator::M(a, b), Operator::M(a, b)))
                    .collect(),
            ),
            _ => None,
        }
    }

    /// Every operator with an index, for exhaustive checks.
    pub fn all_linear() -> Vec<Operator> {
        let mut v = Vec::new();
        for a in 0..4 {
            for b in 0..4 {
                v.push(Operator::T(a, b));
                v.push(Operator::M(a, b));
            }
            v.push(Operator::TPlus(a));
            v.push(Operator::TMinus(a));
        }
        for i in 1..=3 {
            v.push(Operator::S(i));
            v.push(Operator::P(i));
            v.push(Operator::LayerSpin(Layer::A, i));
            v.push(Operator::LayerSpin(Layer::B, i));
            for k in 1..=3 {
                v.push(Operator::R(k, i));
            }
        }
        v.push(Operator::C1);
        v
    }
}

impl std::fmt::Display for Operator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Operator::T(a, b) => write!(f, "T{a}{b}"),
            Operator::M(a, b) => write!(f, "M{a}{b}"),
            Operator::TPlus(a) => write!(f, "T+{a}"),
            Operator::TMinus(a) => write!(f, "T-{a}"),
            Operator::S(i) => write!(f, "S{i}"),
            Operator::P(i) => write!(f, "P{i}"),
            Operator::R(k, i) => write!(f, "R{k}{i}"),
            Operator::LayerSpin(Layer::A, i) => write!(f, "Sa{i}"),
            Operator::LayerSpin(Layer::B, i) => write!(f, "Sb{i}"),
            Operator::C1 => write!(f, "C1"),
            Operator::C2 => write!(f, "C2"),
            Operator::MSquared => write!(f, "M2"),
        }
    }
}

impl std::str::FromStr for Operator {
    type Err = Error;

    /// Parses the names printed by `Display`, e.g. `T30`, `M12`, `T+0`, `Sa3`, `C2`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("unknown operator '{s}'"));
        let digits: Vec<u8> = s
            .chars()
            .filter(|c| c.is_ascii_digit())
            .map(|c| c as u8 - b'0')
            .collect();
        let head: String = s.chars().take_while(|c| !c.is_ascii_digit()).collect();
        let op = match (head.as_str(), digits.as_slice()) {
            ("T", [a, b]) => Operator::T(*a, *b),
            ("M", [a, b]) => Operator::M(*a, *b),
            ("M", [2]) if s == "M2" => Operator::MSquared,
            ("T+", [a]) => Operator::TPlus(*a),
            ("T-", [a]) => Operator::TMinus(*a),
            ("S", [i]) => Operator::S(*i),
            ("P", [i]) => Operator::P(*i),
            ("R", [k, i]) => Operator::R(*k, *i),
            ("Sa", [i]) => Operator::LayerSpin(Layer::A, *i),
            ("Sb", [i]) => Operator::LayerSpin(Layer::B, *i),
            ("C", [1]) => Operator::C1,
            ("C", [2]) => Operator::C2,
            _ => return Err(bad()),
        };
        op.validate()?;
        Ok(op)
    }
}

fn cyclic(l: u8) -> (u8, u8) {
    match l {
        1 => (2, 3),
        2 => (3, 1),
        _ => (1, 2),
    }
}

/// `z^μ` as a polynomial in the matrix entries.
pub(crate) fn z_upper(mu: u8) -> PolyC4 {
    let h = C64::new(0.5, 0.0);
    let v = |e| PolyC4::var(e);
    match mu {
        0 => (v(Entry::Z11) + v(Entry::Z22)).scale(h),
        1 => (v(Entry::Z12) + v(Entry::Z21)).scale(h),
        2 => (v(Entry::Z12) - v(Entry::Z21)).scale(C64::new(0.0, 0.5)),
        _ => (v(Entry::Z11) - v(Entry::Z22)).scale(h),
    }
}

pub(crate) fn z_lower(mu: u8) -> PolyC4 {
    z_upper(mu).scale(C64::new(ETA[mu as usize], 0.0))
}

/// `∂/∂z^μ` through the chain rule on the entries.
pub(crate) fn d_mu(p: &PolyC4, mu: u8) -> PolyC4 {
    use Entry::*;
    match mu {
        0 => p.derivative(Z11) + p.derivative(Z22),
        1 => p.derivative(Z12) + p.derivative(Z21),
        2 => (p.derivative(Z21) - p.derivative(Z12)).scale(C64::i()),
        _ => p.derivative(Z11) - p.derivative(Z22),
    }
}

fn t30(lambda: u32, p: &PolyC4) -> PolyC4 {
    (p.euler() - p.scale(C64::new(lambda as f64, 0.0))).scale(C64::new(2.0, 0.0))
}

fn apply_prim(lambda: u32, prim: Prim, p: &PolyC4) -> PolyC4 {
    match prim {
        Prim::Identity => p.clone(),
        Prim::T30 => t30(lambda, p),
        Prim::M(a, b) => z_lower(a) * d_mu(p, b) - z_lower(b) * d_mu(p, a),
        Prim::TMinus(a) => d_mu(p, a).scale(C64::new(ETA[a as usize], 0.0)),
        Prim::TPlus(a) => PolyC4::det() * d_mu(p, a) - z_lower(a) * t30(lambda, p),
    }
}

fn apply_unchecked(lambda: u32, op: Operator, p: &PolyC4) -> PolyC4 {
    if let Some(parts) = op.linear_parts(lambda) {
        return parts
            .into_iter()
            .fold(PolyC4::zero(), |acc, (c, prim)| acc + apply_prim(lambda, prim, p).scale(c));
    }
    op.quadratic_parts()
        .expect("operator is linear or quadratic")
        .into_iter()
        .fold(PolyC4::zero(), |acc, (c, a, b)| {
            acc + apply_unchecked(lambda, a, &apply_unchecked(lambda, b, p)).scale(C64::new(c, 0.0))
        })
}

/// Applies the differential realization of `op` to a polynomial of `ℋ_λ`.
pub fn diff_op_apply(lambda: IrrepLabel, op: Operator, p: &PolyC4) -> Result<PolyC4> {
    op.validate()?;
    if let Some(d) = p.degree() {
        if d > 2 * lambda.value() {
            return Err(Error::InvalidArgument(format!(
                "polynomial degree {d} exceeds 2λ = {}",
                2 * lambda.value()
            )));
        }
    }
    Ok(apply_unchecked(lambda.value(), op, p))
}
