use std::sync::Arc;

use nalgebra::DMatrix;

use super::expand::Expander;
use super::{apply_unchecked, Operator};
use crate::cache::Cache;
use crate::grassmann::{BasisTable, IrrepLabel};
use crate::{Error, Execution, Result, C64};

/// Largest `λ` for which generator matrices are built.
pub const GENERATOR_CAP: u32 = 6;

const EXPANSION_TOL: f64 = 1e-9;

/// Matrix of an operator in the canonical basis of `ℋ_λ`: column `i` holds
/// the expansion of `op φ_i`.
#[derive(Clone, Debug)]
pub struct GeneratorMatrix {
    pub lambda: IrrepLabel,
    pub op: Operator,
    pub matrix: DMatrix<C64>,
}

impl GeneratorMatrix {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// `v† G v`.
    pub fn expectation(&self, v: &[C64]) -> C64 {
        let mut acc = C64::default();
        for (j, vj) in v.iter().enumerate() {
            let col = self.matrix.column(j);
            let s: C64 = v.iter().zip(col.iter()).map(|(a, g)| a.conj() * g).sum();
            acc += s * vj;
        }
        acc
    }

    pub fn diagonal(&self) -> Vec<C64> {
        self.matrix.diagonal().iter().copied().collect()
    }

    /// Largest off-diagonal modulus.
    pub fn off_diagonal_max(&self) -> f64 {
        let n = self.dim();
        let mut m: f64 = 0.0;
        for j in 0..n {
            for i in 0..n {
                if i != j {
                    m = m.max(self.matrix[(i, j)].norm());
                }
            }
        }
        m
    }
}

static MATRICES: Cache<(u32, Operator), GeneratorMatrix> = Cache::new();

pub fn generator_matrix(lambda: IrrepLabel, op: Operator) -> Result<Arc<GeneratorMatrix>> {
    op.validate()?;
    if lambda.value() > GENERATOR_CAP {
        return Err(Error::CapExceeded {
            lambda: lambda.value(),
            cap: GENERATOR_CAP,
            what: "generator matrices",
        });
    }
    MATRICES.get_or_try_insert(&(lambda.value(), op), || build(lambda, op))
}

fn build(lambda: IrrepLabel, op: Operator) -> Result<GeneratorMatrix> {
    let d = lambda.dim();
    if let Some(parts) = op.quadratic_parts() {
        let mut acc = DMatrix::<C64>::zeros(d, d);
        for (c, a, b) in parts {
            let ga = generator_matrix(lambda, a)?;
            let gb = generator_matrix(lambda, b)?;
            acc += (&ga.matrix * &gb.matrix) * C64::new(c, 0.0);
        }
        return Ok(GeneratorMatrix {
            lambda,
            op,
            matrix: acc,
        });
    }
    let table = BasisTable::get(lambda)?;
    let ex = Expander::get(lambda)?;
    let context = format!("{op} at λ = {lambda}");
    let columns = Execution::default().map_indexed(d, |i| {
        let image = apply_unchecked(lambda.value(), op, &table.polynomial(i));
        ex.expand(&image, EXPANSION_TOL, &context)
    });
    let mut matrix = DMatrix::<C64>::zeros(d, d);
    for (j, col) in columns.into_iter().enumerate() {
        for (i, v) in col?.into_iter().enumerate() {
            matrix[(i, j)] = v;
        }
    }
    Ok(GeneratorMatrix { lambda, op, matrix })
}
