use rand::Rng;
use rand_distr::StandardNormal;

use super::basis::BasisTable;
use super::point::{det2, ScaledPoint};
use super::{BasisIndex, IrrepLabel};
use crate::{Error, Mat2, Result, C64};

/// Tolerance on `Σ|c|² − 1` accepted by functions that require a normalized state.
pub const NORM_TOL: f64 = 1e-10;

/// Coefficients of a state of `ℋ_λ` in the canonical basis order.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    lambda: IrrepLabel,
    coeffs: Vec<C64>,
}

impl StateVector {
    pub fn new(lambda: IrrepLabel, coeffs: Vec<C64>) -> Result<Self> {
        if coeffs.len() != lambda.dim() {
            return Err(Error::DimensionMismatch {
                expected: lambda.dim(),
                got: coeffs.len(),
            });
        }
        Ok(StateVector { lambda, coeffs })
    }

    pub fn basis(lambda: IrrepLabel, idx: BasisIndex) -> Result<Self> {
        idx.validate(lambda)?;
        let t = BasisTable::get(lambda)?;
        let mut coeffs = vec![C64::default(); lambda.dim()];
        coeffs[t.position(&idx).expect("validated index is enumerated")] = C64::new(1.0, 0.0);
        Ok(StateVector { lambda, coeffs })
    }

    /// `(j, m, q_a, q_b) = (0, 0, 0, 0)`, the coherent state at `Z = 0`.
    pub fn lowest(lambda: IrrepLabel) -> Self {
        let mut coeffs = vec![C64::default(); lambda.dim()];
        coeffs[0] = C64::new(1.0, 0.0);
        StateVector { lambda, coeffs }
    }

    /// `(0, λ, 0, 0)`, the coherent state at `Z = ∞`.
    pub fn highest(lambda: IrrepLabel) -> Self {
        let mut coeffs = vec![C64::default(); lambda.dim()];
        *coeffs.last_mut().unwrap() = C64::new(1.0, 0.0);
        StateVector { lambda, coeffs }
    }

    /// Haar-random unit vector.
    pub fn random(lambda: IrrepLabel, rng: &mut impl Rng) -> Self {
        let coeffs = (0..lambda.dim())
            .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        let mut s = StateVector { lambda, coeffs };
        s.normalize().expect("gaussian vector is nonzero");
        s
    }

    /// Equal-weight superposition of all basis vectors.
    pub fn uniform(lambda: IrrepLabel) -> Self {
        let a = (lambda.dim() as f64).sqrt().recip();
        StateVector {
            lambda,
            coeffs: vec![C64::new(a, 0.0); lambda.dim()],
        }
    }

    pub fn lambda(&self) -> IrrepLabel {
        self.lambda
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C64> {
        self.coeffs
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn normalize(&mut self) -> Result<()> {
        let n = self.norm_sqr();
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::NotNormalized { norm_sq: n });
        }
        let s = n.sqrt().recip();
        self.coeffs.iter_mut().for_each(|c| *c *= s);
        Ok(())
    }

    pub fn ensure_normalized(&self) -> Result<()> {
        let n = self.norm_sqr();
        if (n - 1.0).abs() > NORM_TOL || !n.is_finite() {
            return Err(Error::NotNormalized { norm_sq: n });
        }
        Ok(())
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        if self.lambda != other.lambda {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }
}

/// Coefficients of the coherent state
/// `|Z⟩ = det(σ₀+ZZ†)^{-λ/2} Σ φ_idx(Z̄) |idx⟩`, with `Z̄` the entrywise
/// conjugate. Accepts any point representation, including points at
/// infinity given as angles.
pub fn coherent_coeffs(lambda: IrrepLabel, z: impl Into<ScaledPoint>) -> Result<StateVector> {
    let t = BasisTable::get(lambda)?;
    // basis polynomials have real coefficients, so φ(Z̄) = conj φ(Z)
    let coeffs = t.eval_scaled(&z.into()).into_iter().map(|c| c.conj()).collect();
    Ok(StateVector { lambda, coeffs })
}

/// Bergmann kernel `K_λ(Z, W†) = det(σ₀ + Z W†)^λ`.
pub fn grass_kernel(lambda: IrrepLabel, z: &Mat2, wdag: &Mat2) -> C64 {
    det2(&(Mat2::identity() + z * wdag)).powu(lambda.value())
}

/// `⟨Z′|Z⟩ = K_λ(Z′, Z†) / (K_λ(Z′, Z′†) K_λ(Z, Z†))^{1/2}`.
pub fn grass_overlap(lambda: IrrepLabel, z: impl Into<ScaledPoint>, zp: impl Into<ScaledPoint>) -> C64 {
    let (a, b) = (z.into(), zp.into());
    // cc′cc det(σ₀ + Z′Z†) = cc′cc + tr(ẑ′ ẑ†) + δ′ conj(δ)
    let tr: C64 = b.zhat.iter().zip(a.zhat.iter()).map(|(x, y)| x * y.conj()).sum();
    (b.cc * a.cc + tr + b.delta * a.delta.conj()).powu(lambda.value())
}

/// Husimi function `Q_ψ(Z) = |⟨Z|ψ⟩|²`.
pub fn grass_husimi(psi: &StateVector, z: impl Into<ScaledPoint>) -> Result<f64> {
    psi.ensure_normalized()?;
    let t = BasisTable::get(psi.lambda())?;
    Ok(t.eval_scaled_dot(&z.into(), psi.coeffs()).norm_sqr())
}
