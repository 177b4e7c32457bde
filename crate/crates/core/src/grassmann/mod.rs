//! The `[λ, λ]` irrep of `U(4)` realized on polynomials in a 2×2 complex
//! matrix `Z`, and the coherent states `|Z⟩` labelled by the Grassmannian
//! `G₂ = U(4)/U(2)²`.

mod basis;
mod point;
mod state;
mod wigner;

pub use basis::{basis_enumerate, basis_polynomial, basis_value, BasisTable, Rational};
pub use point::{angles_to_matrix, four_vector_of, layer_rotation, matrix_to_angles, AngleParam, GrassPoint, ScaledPoint};
pub use state::{NORM_TOL, coherent_coeffs, grass_husimi, grass_kernel, grass_overlap, StateVector};
pub use wigner::{wigner_d, wigner_d_poly};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Largest `λ` the pointwise evaluators support (power tables are sized by it).
pub const MAX_EVAL_LAMBDA: u32 = 32;

/// Isospin label `λ ≥ 1` of the two-row tableau `[λ, λ]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IrrepLabel(u32);

impl IrrepLabel {
    pub fn new(lambda: u32) -> Result<Self> {
        if lambda == 0 {
            return Err(Error::TrivialIrrep);
        }
        Ok(IrrepLabel(lambda))
    }

    pub fn value(self) -> u32 {
        self.0
    }

    /// `d_λ = (λ+1)(λ+2)²(λ+3)/12`.
    pub fn dim(self) -> usize {
        irrep_dim(self.0)
    }

    /// The label `2λ` whose space contains products of two `λ` polynomials.
    pub fn doubled(self) -> Self {
        IrrepLabel(2 * self.0)
    }
}

impl std::fmt::Display for IrrepLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub(crate) fn irrep_dim(lambda: u32) -> usize {
    let l = lambda as u64;
    ((l + 1) * (l + 2) * (l + 2) * (l + 3) / 12) as usize
}

/// Basis label `(j, m, q_a, q_b)` with `j`, `q_a`, `q_b` stored doubled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BasisIndex {
    pub two_j: u32,
    pub m: u32,
    pub two_qa: i32,
    pub two_qb: i32,
}

impl BasisIndex {
    pub fn new(two_j: u32, m: u32, two_qa: i32, two_qb: i32) -> Self {
        BasisIndex {
            two_j,
            m,
            two_qa,
            two_qb,
        }
    }

    /// Lowest-weight label `(0, 0, 0, 0)`.
    pub fn lowest() -> Self {
        BasisIndex::new(0, 0, 0, 0)
    }

    /// Degree `2j + 2m` of the basis polynomial.
    pub fn degree(&self) -> u32 {
        self.two_j + 2 * self.m
    }

    pub fn j(&self) -> f64 {
        self.two_j as f64 / 2.0
    }

    pub fn qa(&self) -> f64 {
        self.two_qa as f64 / 2.0
    }

    pub fn qb(&self) -> f64 {
        self.two_qb as f64 / 2.0
    }

    pub fn validate(&self, lambda: IrrepLabel) -> Result<()> {
        let tj = self.two_j as i32;
        for two_q in [self.two_qa, self.two_qb] {
            if (two_q - tj).rem_euclid(2) != 0 {
                return Err(Error::ParityMismatch {
                    two_j: self.two_j,
                    two_q,
                });
            }
            if two_q.abs() > tj {
                return Err(Error::IndexOutOfRange(format!(
                    "|q| = {}/2 exceeds j = {}/2",
                    two_q.abs(),
                    tj
                )));
            }
        }
        if self.two_j + self.m > lambda.value() {
            return Err(Error::IndexOutOfRange(format!(
                "2j + m = {} exceeds λ = {}",
                self.two_j + self.m,
                lambda
            )));
        }
        Ok(())
    }
}

impl std::fmt::Display for BasisIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "(j={}, m={}, qa={}, qb={})",
            self.j(),
            self.m,
            self.qa(),
            self.qb()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimension_formula() {
        let dims: Vec<usize> = (1..=8).map(irrep_dim).collect();
        assert_eq!(dims, vec![6, 20, 50, 105, 196, 336, 540, 825]);
        assert_eq!(IrrepLabel::new(0), Err(Error::TrivialIrrep));
    }

    #[test]
    fn index_validation() {
        let l1 = IrrepLabel::new(1).unwrap();
        assert!(BasisIndex::new(1, 0, 1, -1).validate(l1).is_ok());
        assert!(matches!(
            BasisIndex::new(1, 0, 0, 1).validate(l1),
            Err(Error::ParityMismatch { .. })
        ));
        assert!(matches!(
            BasisIndex::new(2, 0, 0, 0).validate(l1),
            Err(Error::IndexOutOfRange(_))
        ));
        assert!(matches!(
            BasisIndex::new(2, 0, 4, 0).validate(IrrepLabel::new(3).unwrap()),
            Err(Error::IndexOutOfRange(_))
        ));
    }
}
