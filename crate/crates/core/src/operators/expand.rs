use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use nalgebra::DMatrix;

use crate::cache::Cache;
use crate::grassmann::{BasisTable, IrrepLabel};
use crate::poly::{total_degree, Exponents, PolyC4};
use crate::{Error, Result, C64};

/// Largest `λ` whose full basis the expander will tabulate.
pub const EXPANDER_CAP: u32 = 8;

struct Block {
    monomials: HashMap<Exponents, usize>,
    /// Positions in the canonical basis of the polynomials of this degree.
    columns: Vec<usize>,
    /// Monomial coefficients, one column per basis polynomial.
    a: DMatrix<f64>,
    pinv: DMatrix<f64>,
}

/// Re-expands polynomials of `ℋ_λ` onto its basis polynomials by a least
/// squares solve on monomial coefficients, one block per degree.
pub struct Expander {
    lambda: IrrepLabel,
    blocks: BTreeMap<u32, Block>,
}

static EXPANDERS: Cache<u32, Expander> = Cache::new();

impl Expander {
    pub fn get(lambda: IrrepLabel) -> Result<Arc<Expander>> {
        if lambda.value() > EXPANDER_CAP {
            return Err(Error::CapExceeded {
                lambda: lambda.value(),
                cap: EXPANDER_CAP,
                what: "basis re-expansion",
            });
        }
        EXPANDERS.get_or_try_insert(&lambda.value(), || Expander::build(lambda))
    }

    fn build(lambda: IrrepLabel) -> Result<Expander> {
        let table = BasisTable::get(lambda)?;
        let mut by_degree: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
        for (i, idx) in table.indices().iter().enumerate() {
            by_degree.entry(idx.degree()).or_default().push(i);
        }
        let mut blocks = BTreeMap::new();
        for (deg, columns) in by_degree {
            let polys: Vec<PolyC4> = columns.iter().map(|&i| table.polynomial(i)).collect();
            let mut monomials = HashMap::new();
            for p in &polys {
                for (e, _) in p.terms() {
                    let n = monomials.len();
                    monomials.entry(*e).or_insert(n);
                }
            }
            let mut a = DMatrix::zeros(monomials.len(), columns.len());
            for (c, p) in polys.iter().enumerate() {
                for (e, v) in p.terms() {
                    a[(monomials[e], c)] = v.re;
                }
            }
            let pinv = a
                .clone()
                .pseudo_inverse(1e-12)
                .map_err(|e| Error::InvalidArgument(format!("pseudo-inverse failed: {e}")))?;
            blocks.insert(
                deg,
                Block {
                    monomials,
                    columns,
                    a,
                    pinv,
                },
            );
        }
        Ok(Expander { lambda, blocks })
    }

    pub fn lambda(&self) -> IrrepLabel {
        self.lambda
    }

    /// Basis coefficients of `p` together with the relative residual
    /// `‖p − Σ c_i φ_i‖ / ‖p‖` measured on monomial coefficients.
    pub fn expand_with_residual(&self, p: &PolyC4) -> (Vec<C64>, f64) {
        let mut out = vec![C64::default(); self.lambda.dim()];
        let mut stray = 0.0;
        let mut rhs: BTreeMap<u32, (Vec<f64>, Vec<f64>)> = BTreeMap::new();
        for (e, c) in p.terms() {
            let deg = total_degree(e);
            match self.blocks.get(&deg).and_then(|b| b.monomials.get(e).map(|&r| (b, r))) {
                Some((b, r)) => {
                    let (re, im) = rhs
                        .entry(deg)
                        .or_insert_with(|| (vec![0.0; b.monomials.len()], vec![0.0; b.monomials.len()]));
                    re[r] = c.re;
                    im[r] = c.im;
                }
                None => stray += c.norm_sqr(),
            }
        }
        let mut resid_sq = stray;
        for (deg, (re, im)) in rhs {
            let b = &self.blocks[&deg];
            let bre = nalgebra::DVector::from_vec(re);
            let bim = nalgebra::DVector::from_vec(im);
            let xre = &b.pinv * &bre;
            let xim = &b.pinv * &bim;
            resid_sq += (&b.a * &xre - &bre).norm_squared() + (&b.a * &xim - &bim).norm_squared();
            for (k, &col) in b.columns.iter().enumerate() {
                out[col] = C64::new(xre[k], xim[k]);
            }
        }
        let norm = p.coeff_norm();
        let resid = if norm > 0.0 { resid_sq.sqrt() / norm } else { 0.0 };
        (out, resid)
    }

    /// As [`Expander::expand_with_residual`], failing when the residual exceeds `tol`.
    pub fn expand(&self, p: &PolyC4, tol: f64, context: &str) -> Result<Vec<C64>> {
        let (x, residual) = self.expand_with_residual(p);
        if residual.is_nan() || residual > tol {
            return Err(Error::Residual {
                residual,
                tol,
                context: context.to_string(),
            });
        }
        Ok(x)
    }
}
